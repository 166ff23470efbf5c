//! Isomorph-free enumeration of small bands and exponent-`r` semigroups.
//!
//! Tables are filled cell by cell in row-major order with values tried in
//! increasing order. After every assignment, each associativity triple whose
//! four products are all known is checked, along with any fully known power
//! chain `x^r`. For bands the diagonal is fixed up front.
//!
//! In canonical mode a table is kept only if it is the lexicographically
//! least relabeling of itself (flattened row-major). The test runs whenever a
//! row is completed: for each permutation, the permuted table is compared
//! against the current one over the cells known on both sides, and the
//! branch is cut as soon as some permutation is strictly smaller there. The
//! first row is expanded sequentially; the subtrees below it run on the rayon
//! pool and are concatenated in order, so the output is the same as a single
//! threaded run.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::table::{satisfies_exponent, MulTable};

const UNDEF: u8 = u8::MAX;

/// Hard ceiling on enumeration order, independent of the configured caps.
pub const MAX_ENUMERATION_ORDER: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Constraint {
    /// `x² = x`.
    Idempotent,
    /// `x^r = x` for the given `r ≥ 2`.
    Exponent(u32),
}

impl Constraint {
    pub fn exponent(self) -> u32 {
        match self {
            Constraint::Idempotent => 2,
            Constraint::Exponent(r) => r,
        }
    }

    /// Tag used in census manifests: `band` or `exp:R`.
    pub fn tag(self) -> String {
        match self {
            Constraint::Idempotent => "band".into(),
            Constraint::Exponent(r) => format!("exp:{}", r),
        }
    }

    pub fn parse_tag(s: &str) -> Result<Constraint> {
        if s == "band" {
            return Ok(Constraint::Idempotent);
        }
        let r = s
            .strip_prefix("exp:")
            .and_then(|r| r.parse::<u32>().ok())
            .filter(|&r| r >= 2)
            .ok_or_else(|| Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected `band` or `exp:R` with R ≥ 2, found {:?}", s),
            })?;
        Ok(Constraint::Exponent(r))
    }

    pub fn is_satisfied_by(self, t: &MulTable) -> bool {
        match self {
            Constraint::Idempotent => t.is_idempotent(),
            Constraint::Exponent(r) => satisfies_exponent(t, r as u64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    /// One table per isomorphism class.
    CanonicalOnly,
    /// Every table.
    AllLabeled,
}

/// Per-constraint order caps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    pub band: usize,
    pub exponent: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { band: 7, exponent: 5 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct EnumerationQuery {
    pub order: usize,
    pub constraint: Constraint,
    pub mode: Mode,
}

impl EnumerationQuery {
    pub fn bands(order: usize) -> Self {
        EnumerationQuery {
            order,
            constraint: Constraint::Idempotent,
            mode: Mode::CanonicalOnly,
        }
    }

    pub fn exponent(order: usize, r: u32) -> Self {
        EnumerationQuery {
            order,
            constraint: Constraint::Exponent(r),
            mode: Mode::CanonicalOnly,
        }
    }

    pub fn labeled(mut self) -> Self {
        self.mode = Mode::AllLabeled;
        self
    }

    fn check(&self, caps: Caps) -> Result<()> {
        if self.order == 0 {
            return Err(Error::OutOfRange {
                what: "order",
                value: 0,
                range: "1..".into(),
            });
        }
        let cap = match self.constraint {
            Constraint::Idempotent => caps.band,
            Constraint::Exponent(r) => {
                if r < 2 {
                    return Err(Error::OutOfRange {
                        what: "r",
                        value: r as usize,
                        range: "2..".into(),
                    });
                }
                caps.exponent
            }
        }
        .min(MAX_ENUMERATION_ORDER);
        if self.order > cap {
            return Err(Error::OrderTooLarge {
                order: self.order,
                limit: cap,
            });
        }
        Ok(())
    }
}

pub fn enumerate(q: EnumerationQuery) -> Result<Vec<MulTable>> {
    enumerate_with_caps(q, Caps::default())
}

pub fn count(q: EnumerationQuery) -> Result<usize> {
    Ok(enumerate(q)?.len())
}

pub fn enumerate_with_caps(q: EnumerationQuery, caps: Caps) -> Result<Vec<MulTable>> {
    q.check(caps)?;
    let n = q.order;
    let perms = match q.mode {
        Mode::CanonicalOnly => permutations(n),
        Mode::AllLabeled => Vec::new(),
    };
    let search = Search {
        n,
        r: q.constraint.exponent(),
        canonical: q.mode == Mode::CanonicalOnly,
        perms: &perms,
    };
    let mut cells = vec![UNDEF; n * n];
    if q.constraint == Constraint::Idempotent {
        for i in 0..n {
            cells[i * n + i] = i as u8;
        }
    }

    // expand the first row sequentially, then search the subtrees in parallel
    let mut frontier = Vec::new();
    search.expand(&mut cells, 0, n, &mut |c: &[u8]| frontier.push(c.to_vec()));
    let chunks: Vec<Vec<Vec<u8>>> = frontier
        .into_par_iter()
        .map(|mut c| {
            let mut found = Vec::new();
            search.expand(&mut c, n, n * n, &mut |full: &[u8]| found.push(full.to_vec()));
            found
        })
        .collect();

    chunks
        .into_iter()
        .flatten()
        .map(|cells| {
            let t = MulTable::new(n, cells)?;
            debug_assert!(q.constraint.is_satisfied_by(&t));
            Ok(t)
        })
        .collect()
}

#[derive(Clone)]
struct Perm {
    fwd: Vec<u8>,
    inv: Vec<u8>,
}

/// All non-identity permutations of `0..n`.
fn permutations(n: usize) -> Vec<Perm> {
    (0..n as u8)
        .permutations(n)
        .skip(1)
        .map(|fwd| {
            let mut inv = vec![0u8; n];
            for (i, &p) in fwd.iter().enumerate() {
                inv[p as usize] = i as u8;
            }
            Perm { fwd, inv }
        })
        .collect()
}

struct Search<'a> {
    n: usize,
    r: u32,
    canonical: bool,
    perms: &'a [Perm],
}

impl Search<'_> {
    /// Fills undefined cells with index in `from..until`; calls `emit` with
    /// the state once every cell below `until` is defined.
    fn expand(&self, cells: &mut [u8], from: usize, until: usize, emit: &mut impl FnMut(&[u8])) {
        let n = self.n;
        let Some(idx) = (from..until).find(|&i| cells[i] == UNDEF) else {
            if !self.canonical || self.is_lex_least(cells) {
                emit(cells);
            }
            return;
        };
        let row_end = (idx / n + 1) * n;
        let completes_row = (idx + 1..row_end).all(|i| cells[i] != UNDEF);
        for v in 0..n as u8 {
            cells[idx] = v;
            if self.associative_at(cells, idx)
                && self.powers_ok(cells)
                && (!self.canonical || !completes_row || row_end >= until || self.is_lex_least(cells))
            {
                self.expand(cells, idx + 1, until, emit);
            }
        }
        cells[idx] = UNDEF;
    }

    /// Checks every triple in which cell `idx` is one of the four products
    /// and the other three are known.
    fn associative_at(&self, cells: &[u8], idx: usize) -> bool {
        let n = self.n;
        let (i, j) = (idx / n, idx % n);
        let v = cells[idx] as usize;
        let at = |a: usize, b: usize| cells[a * n + b];

        for k in 0..n {
            // (ij)k = i(jk)
            let lhs = at(v, k);
            let jk = at(j, k);
            if lhs != UNDEF && jk != UNDEF {
                let rhs = at(i, jk as usize);
                if rhs != UNDEF && rhs != lhs {
                    return false;
                }
            }
            // (ki)j = k(ij)
            let ki = at(k, i);
            let rhs = at(k, v);
            if ki != UNDEF && rhs != UNDEF {
                let lhs = at(ki as usize, j);
                if lhs != UNDEF && lhs != rhs {
                    return false;
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                let xy = at(x, y) as usize;
                // (xy)j with xy = i
                if xy == i {
                    let yj = at(y, j);
                    if yj != UNDEF {
                        let rhs = at(x, yj as usize);
                        if rhs != UNDEF && rhs as usize != v {
                            return false;
                        }
                    }
                }
                // i(xy) with xy = j
                if xy == j {
                    let ix = at(i, x);
                    if ix != UNDEF {
                        let lhs = at(ix as usize, y);
                        if lhs != UNDEF && lhs as usize != v {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    fn powers_ok(&self, cells: &[u8]) -> bool {
        if self.r == 2 {
            // x·x is a single cell
            return (0..self.n).all(|x| {
                let c = cells[x * self.n + x];
                c == UNDEF || c as usize == x
            });
        }
        (0..self.n).all(|x| {
            let mut p = x;
            for _ in 1..self.r {
                let c = cells[p * self.n + x];
                if c == UNDEF {
                    return true;
                }
                p = c as usize;
            }
            p == x
        })
    }

    /// No permutation maps the known part of the table to something
    /// lexicographically smaller.
    fn is_lex_least(&self, cells: &[u8]) -> bool {
        let n = self.n;
        'perm: for perm in self.perms {
            for (idx, &cur) in cells.iter().enumerate() {
                if cur == UNDEF {
                    continue 'perm;
                }
                let (i, j) = (idx / n, idx % n);
                let src = cells[perm.inv[i] as usize * n + perm.inv[j] as usize];
                if src == UNDEF {
                    continue 'perm;
                }
                let mapped = perm.fwd[src as usize];
                if mapped < cur {
                    return false;
                }
                if mapped > cur {
                    continue 'perm;
                }
            }
        }
        true
    }
}

/// The lexicographically least relabeling of `t`.
pub fn canonical_relabeling(t: &MulTable) -> MulTable {
    let n = t.order();
    (0..n)
        .permutations(n)
        .map(|p| t.relabel(&p))
        .min_by(|a, b| a.entries().cmp(b.entries()))
        .expect("at least the identity")
}

pub fn is_isomorphic(a: &MulTable, b: &MulTable) -> bool {
    a.order() == b.order() && canonical_relabeling(a).entries() == canonical_relabeling(b).entries()
}

/// Number of permutations fixing `t`.
pub fn automorphism_count(t: &MulTable) -> usize {
    let n = t.order();
    (0..n)
        .permutations(n)
        .filter(|p| t.relabel(p).entries() == t.entries())
        .count()
}

/// One manifest line: `order entries tag`, entries comma separated.
pub fn manifest_line(t: &MulTable, constraint: Constraint) -> String {
    let entries: Vec<String> = t.entries().iter().map(|e| e.to_string()).collect();
    format!("{} {} {}", t.order(), entries.join(","), constraint.tag())
}

pub fn parse_manifest_line(line: &str) -> Result<(MulTable, Constraint)> {
    let err = |column: usize, message: String| Error::Parse {
        line: 1,
        column,
        message,
    };
    let parts: Vec<&str> = line.split_whitespace().collect();
    if parts.len() != 3 {
        return Err(err(1, format!("expected 3 fields, found {}", parts.len())));
    }
    let order: usize = parts[0]
        .parse()
        .map_err(|_| err(1, format!("bad order {:?}", parts[0])))?;
    let entries = parts[1]
        .split(',')
        .map(|e| e.parse::<u8>().map_err(|_| err(1, format!("bad entry {:?}", e))))
        .collect::<Result<Vec<u8>>>()?;
    let table = MulTable::new(order, entries)?;
    Ok((table, Constraint::parse_tag(parts[2])?))
}
