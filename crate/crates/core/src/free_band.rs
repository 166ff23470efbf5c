//! Free bands: the Green–Rees order formula, the word problem, canonical
//! forms and explicit Cayley tables for up to three generators.
//!
//! Two words are equal in the free band iff they have the same content and,
//! recursively, the same "prefix part" (longest prefix missing one letter of
//! the content, plus the letter that completes it) and the dual suffix part.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::table::MulTable;

/// Largest alphabet accepted by [`BandWord`].
pub const MAX_ALPHABET: usize = 26;
/// Largest generator count for which [`free_band_table`] builds a table.
pub const MAX_TABLE_GENERATORS: usize = 3;

/// `I_n = Σ_{r=1}^{n} C(n,r) Π_{i=1}^{r} (r-i+1)^{2^i}`, the order of the free
/// band on `n` generators.
pub fn green_rees_order(n: u32) -> BigUint {
    let mut total = BigUint::from(0u32);
    let mut binom = BigUint::from(1u32); // C(n, r-1)
    for r in 1..=n {
        binom = binom * (n - r + 1) / r;
        let mut prod = BigUint::from(1u32);
        for i in 1..=r {
            prod *= BigUint::from(r - i + 1).pow(1u32 << i);
        }
        total += &binom * prod;
    }
    total
}

/// A nonempty word over the alphabet `0..alphabet`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BandWord {
    letters: Vec<u8>,
    alphabet: usize,
}

impl BandWord {
    pub fn new(letters: Vec<u8>, alphabet: usize) -> Result<Self> {
        if alphabet == 0 || alphabet > MAX_ALPHABET {
            return Err(Error::OutOfRange {
                what: "alphabet",
                value: alphabet,
                range: format!("1..={}", MAX_ALPHABET),
            });
        }
        if letters.is_empty() {
            return Err(Error::PreconditionFailed("words must be nonempty".into()));
        }
        if let Some(&l) = letters.iter().find(|&&l| l as usize >= alphabet) {
            return Err(Error::AlphabetMismatch(format!(
                "letter {:?} outside an alphabet of size {}",
                (b'a' + l) as char,
                alphabet
            )));
        }
        Ok(BandWord { letters, alphabet })
    }

    /// Parses a word over `a, b, c, ...`.
    pub fn parse(s: &str, alphabet: usize) -> Result<Self> {
        let letters = s
            .chars()
            .enumerate()
            .map(|(i, ch)| {
                if ch.is_ascii_lowercase() {
                    Ok(ch as u8 - b'a')
                } else {
                    Err(Error::Parse {
                        line: 1,
                        column: i + 1,
                        message: format!("{:?} is not a letter a-z", ch),
                    })
                }
            })
            .collect::<Result<Vec<u8>>>()?;
        BandWord::new(letters, alphabet)
    }

    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn content(&self) -> u32 {
        content(&self.letters)
    }

    pub fn concat(&self, other: &BandWord) -> Result<BandWord> {
        same_alphabet(self, other)?;
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Ok(BandWord {
            letters,
            alphabet: self.alphabet,
        })
    }
}

impl fmt::Display for BandWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_letters(f, &self.letters)
    }
}

impl fmt::Debug for BandWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{}\"", self)
    }
}

fn write_letters(f: &mut fmt::Formatter<'_>, letters: &[u8]) -> fmt::Result {
    for &l in letters {
        write!(f, "{}", (b'a' + l) as char)?;
    }
    Ok(())
}

fn same_alphabet(u: &BandWord, v: &BandWord) -> Result<()> {
    if u.alphabet != v.alphabet {
        Err(Error::AlphabetMismatch(format!(
            "alphabets of size {} and {}",
            u.alphabet, v.alphabet
        )))
    } else {
        Ok(())
    }
}

/// The chosen representative of a free-band element.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalWord(BandWord);

impl CanonicalWord {
    pub fn word(&self) -> &BandWord {
        &self.0
    }

    pub fn letters(&self) -> &[u8] {
        &self.0.letters
    }
}

impl fmt::Display for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for CanonicalWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn content(w: &[u8]) -> u32 {
    w.iter().fold(0u32, |acc, &l| acc | 1 << l)
}

/// Splits `w` (content size ≥ 2) at its prefix mark: returns the index of
/// the first occurrence of the last letter to appear.
fn prefix_mark(w: &[u8], size: u32) -> usize {
    let mut seen = 0u32;
    for (i, &l) in w.iter().enumerate() {
        seen |= 1 << l;
        if seen.count_ones() == size {
            return i;
        }
    }
    unreachable!("content size mismatch")
}

/// Index of the last occurrence of the letter that completes the content
/// when reading from the right.
fn suffix_mark(w: &[u8], size: u32) -> usize {
    let mut seen = 0u32;
    for (i, &l) in w.iter().enumerate().rev() {
        seen |= 1 << l;
        if seen.count_ones() == size {
            return i;
        }
    }
    unreachable!("content size mismatch")
}

fn canon(w: &[u8]) -> Vec<u8> {
    let size = content(w).count_ones();
    if size == 1 {
        return vec![w[0]];
    }
    let p = prefix_mark(w, size);
    let s = suffix_mark(w, size);
    let mut left = canon(&w[..p]);
    left.push(w[p]);
    let mut right = vec![w[s]];
    right.extend(canon(&w[s + 1..]));
    // x·y·y = x·y in a band, so any overlap may be merged
    let overlap = (1..=left.len().min(right.len()))
        .rev()
        .find(|&o| left[left.len() - o..] == right[..o])
        .unwrap_or(0);
    left.extend_from_slice(&right[overlap..]);
    left
}

fn equal_letters(u: &[u8], v: &[u8]) -> bool {
    let cu = content(u);
    if cu != content(v) {
        return false;
    }
    let size = cu.count_ones();
    if size == 1 {
        return true;
    }
    let (pu, pv) = (prefix_mark(u, size), prefix_mark(v, size));
    let (su, sv) = (suffix_mark(u, size), suffix_mark(v, size));
    u[pu] == v[pv]
        && u[su] == v[sv]
        && equal_letters(&u[..pu], &v[..pv])
        && equal_letters(&u[su + 1..], &v[sv + 1..])
}

/// Whether `u` and `v` are the same element of the free band.
pub fn word_equal(u: &BandWord, v: &BandWord) -> Result<bool> {
    same_alphabet(u, v)?;
    Ok(equal_letters(&u.letters, &v.letters))
}

pub fn canonical_form(u: &BandWord) -> CanonicalWord {
    CanonicalWord(BandWord {
        letters: canon(&u.letters),
        alphabet: u.alphabet,
    })
}

/// Evaluates `w` in `t` with letter `l` sent to `assignment[l]`.
pub fn evaluate(t: &MulTable, w: &BandWord, assignment: &[usize]) -> usize {
    let mut it = w.letters.iter().map(|&l| assignment[l as usize]);
    let first = it.next().expect("nonempty word");
    it.fold(first, |acc, x| t.mul(acc, x))
}

/// An explicit free band with the word each index stands for.
#[derive(Debug, Clone)]
pub struct FreeBandTable {
    pub table: MulTable,
    pub legend: Vec<CanonicalWord>,
}

impl FreeBandTable {
    pub fn index_of(&self, w: &BandWord) -> Option<usize> {
        let c = canonical_form(w);
        self.legend.iter().position(|x| *x == c)
    }

    /// One `index word` line per element.
    pub fn legend_text(&self) -> String {
        self.legend
            .iter()
            .enumerate()
            .map(|(i, w)| format!("{} {}\n", i, w))
            .collect()
    }
}

/// The free band on `k ≤ 3` generators, elements ordered by (length, word).
/// The generators are elements `0..k`.
pub fn free_band_table(k: usize) -> Result<FreeBandTable> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "generators",
            value: 0,
            range: format!("1..={}", MAX_TABLE_GENERATORS),
        });
    }
    if k > MAX_TABLE_GENERATORS {
        return Err(Error::OrderTooLarge {
            order: green_rees_order(k as u32).try_into().unwrap_or(usize::MAX),
            limit: crate::table::MAX_TABLE_ORDER,
        });
    }
    let mut elems: Vec<Vec<u8>> = (0..k as u8).map(|g| vec![g]).collect();
    let mut seen: HashMap<Vec<u8>, ()> = elems.iter().map(|w| (w.clone(), ())).collect();
    let mut next = 0;
    while next < elems.len() {
        let x = elems[next].clone();
        let known = elems.len();
        for idx in 0..known {
            let y = elems[idx].clone();
            for prod in [[&x[..], &y[..]].concat(), [&y[..], &x[..]].concat()] {
                let c = canon(&prod);
                if seen.insert(c.clone(), ()).is_none() {
                    elems.push(c);
                }
            }
        }
        next += 1;
    }
    elems.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    let index: HashMap<&[u8], usize> = elems.iter().enumerate().map(|(i, w)| (&w[..], i)).collect();
    let n = elems.len();
    let table = MulTable::from_fn(n, |i, j| index[&canon(&[&elems[i][..], &elems[j][..]].concat())[..]])?
        .with_label(format!("free band on {} generators", k));
    let legend = elems
        .into_iter()
        .map(|letters| CanonicalWord(BandWord { letters, alphabet: k }))
        .collect();
    Ok(FreeBandTable { table, legend })
}
