//! Cayley tables of finite semigroups.
//!
//! A [`MulTable`] stores the products of an order-`n` magma over the elements
//! `0..n` in row-major order, so `entries[i * n + j]` is `i·j`. Construction
//! only checks that every entry is in range; associativity and the exponent
//! identities are checked by [`validate_table`] and friends.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::element_set::ElementSet;
use crate::error::{Error, Result};

/// Largest order a table may have. Entries are stored as bytes.
pub const MAX_TABLE_ORDER: usize = 256;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MulTable {
    order: usize,
    entries: Vec<u8>,
    label: Option<String>,
}

impl MulTable {
    /// Builds a table from a flattened row-major product array.
    pub fn new(order: usize, entries: Vec<u8>) -> Result<Self> {
        if order == 0 {
            return Err(Error::MalformedTable("order must be positive".into()));
        }
        if order > MAX_TABLE_ORDER {
            return Err(Error::OrderTooLarge {
                order,
                limit: MAX_TABLE_ORDER,
            });
        }
        if entries.len() != order * order {
            return Err(Error::MalformedTable(format!(
                "expected {} entries, found {}",
                order * order,
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|&e| e as usize >= order) {
            return Err(Error::MalformedTable(format!(
                "entry {} at row {}, column {} is not below the order {}",
                entries[pos],
                pos / order,
                pos % order,
                order
            )));
        }
        Ok(MulTable {
            order,
            entries,
            label: None,
        })
    }

    pub fn from_rows<R: AsRef<[usize]>>(rows: &[R]) -> Result<Self> {
        let order = rows.len();
        let mut entries = Vec::with_capacity(order * order);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != order {
                return Err(Error::MalformedTable(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    order
                )));
            }
            for &e in row {
                if e >= order {
                    return Err(Error::MalformedTable(format!(
                        "entry {} in row {} is not below the order {}",
                        e, i, order
                    )));
                }
                entries.push(e as u8);
            }
        }
        MulTable::new(order, entries)
    }

    /// Builds a table from a product function.
    pub fn from_fn(order: usize, mut f: impl FnMut(usize, usize) -> usize) -> Result<Self> {
        let mut entries = Vec::with_capacity(order * order);
        for i in 0..order {
            for j in 0..order {
                let e = f(i, j);
                if e >= order {
                    return Err(Error::MalformedTable(format!(
                        "product {}·{} = {} is not below the order {}",
                        i, j, e, order
                    )));
                }
                entries.push(e as u8);
            }
        }
        MulTable::new(order, entries)
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn mul(&self, i: usize, j: usize) -> usize {
        self.entries[i * self.order + j] as usize
    }

    pub fn entries(&self) -> &[u8] {
        &self.entries
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u8]> {
        self.entries.chunks(self.order)
    }

    pub fn check_element(&self, a: usize) -> Result<()> {
        if a < self.order {
            Ok(())
        } else {
            Err(Error::ElementOutOfRange(a, self.order))
        }
    }

    /// The table obtained by renaming every element `x` to `perm[x]`.
    pub fn relabel(&self, perm: &[usize]) -> MulTable {
        let n = self.order;
        assert_eq!(perm.len(), n, "permutation length must match the order");
        let mut entries = vec![0u8; n * n];
        for i in 0..n {
            for j in 0..n {
                entries[perm[i] * n + perm[j]] = perm[self.mul(i, j)] as u8;
            }
        }
        MulTable {
            order: n,
            entries,
            label: self.label.clone(),
        }
    }

    /// The multiplication restricted to `set`, reindexed in increasing order.
    /// Returns `None` if `set` is not closed.
    pub fn restrict(&self, set: ElementSet) -> Option<MulTable> {
        let elems: Vec<usize> = set.iter().collect();
        let mut index = vec![usize::MAX; self.order];
        for (k, &e) in elems.iter().enumerate() {
            index[e] = k;
        }
        let m = elems.len();
        let mut entries = Vec::with_capacity(m * m);
        for &x in &elems {
            for &y in &elems {
                let p = index[self.mul(x, y)];
                if p == usize::MAX {
                    return None;
                }
                entries.push(p as u8);
            }
        }
        MulTable::new(m, entries).ok()
    }

    pub fn is_idempotent(&self) -> bool {
        (0..self.order).all(|i| self.mul(i, i) == i)
    }

    pub fn is_commutative(&self) -> bool {
        (0..self.order).all(|i| (0..i).all(|j| self.mul(i, j) == self.mul(j, i)))
    }

    /// Renders the table in the `.sgt` text format.
    pub fn to_sgt(&self) -> String {
        let mut out = String::new();
        if let Some(label) = &self.label {
            out.push_str("# label: ");
            out.push_str(label);
            out.push('\n');
        }
        out.push_str(&self.order.to_string());
        out.push('\n');
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_record(&self) -> TableRecord {
        TableRecord {
            order: self.order,
            entries: self
                .rows()
                .map(|r| r.iter().map(|&e| e as usize).collect())
                .collect(),
            label: self.label.clone(),
        }
    }

    pub fn from_record(rec: &TableRecord) -> Result<MulTable> {
        if rec.entries.len() != rec.order {
            return Err(Error::MalformedTable(format!(
                "order {} but {} rows",
                rec.order,
                rec.entries.len()
            )));
        }
        let t = MulTable::from_rows(&rec.entries)?;
        Ok(match &rec.label {
            Some(l) => t.with_label(l.clone()),
            None => t,
        })
    }
}

impl fmt::Debug for MulTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MulTable(n={}", self.order)?;
        if let Some(l) = &self.label {
            write!(f, ", {:?}", l)?;
        }
        write!(f, ", [")?;
        for (k, row) in self.rows().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "])")
    }
}

/// Structured form of a table for JSON export.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRecord {
    pub order: usize,
    pub entries: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

/// Parses a single `.sgt` table.
pub fn parse_sgt(text: &str) -> Result<MulTable> {
    let mut tables = parse_sgt_many(text)?;
    match tables.len() {
        1 => Ok(tables.pop().unwrap()),
        0 => Err(Error::Parse {
            line: 1,
            column: 1,
            message: "no table found".into(),
        }),
        k => Err(Error::Parse {
            line: 1,
            column: 1,
            message: format!("expected one table, found {}", k),
        }),
    }
}

/// Parses a sequence of `.sgt` tables (a census export). Blank lines and
/// `#` comments are ignored; a `# label: ...` comment names the next table.
pub fn parse_sgt_many(text: &str) -> Result<Vec<MulTable>> {
    let mut tables = Vec::new();
    let mut pending_label: Option<String> = None;
    let mut current: Option<(usize, usize, Vec<u8>)> = None; // (order, start line, entries)

    for (lineno, raw) in text.lines().enumerate() {
        let line_no = lineno + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if let Some(comment) = trimmed.strip_prefix('#') {
            if let Some(l) = comment.trim().strip_prefix("label:") {
                pending_label = Some(l.trim().to_string());
            }
            continue;
        }
        match current.as_mut() {
            None => {
                let order: usize = trimmed.parse().map_err(|_| Error::Parse {
                    line: line_no,
                    column: column_of(raw, trimmed),
                    message: format!("expected the order, found {:?}", trimmed),
                })?;
                if order == 0 || order > MAX_TABLE_ORDER {
                    return Err(Error::Parse {
                        line: line_no,
                        column: column_of(raw, trimmed),
                        message: format!("order must be in 1..={}", MAX_TABLE_ORDER),
                    });
                }
                current = Some((order, line_no, Vec::with_capacity(order * order)));
            }
            Some((order, _, entries)) => {
                let order = *order;
                let mut count = 0;
                for tok in raw.split_whitespace() {
                    let column = column_of(raw, tok);
                    let v: usize = tok.parse().map_err(|_| Error::Parse {
                        line: line_no,
                        column,
                        message: format!("expected an element index, found {:?}", tok),
                    })?;
                    if v >= order {
                        return Err(Error::Parse {
                            line: line_no,
                            column,
                            message: format!("entry {} is not below the order {}", v, order),
                        });
                    }
                    entries.push(v as u8);
                    count += 1;
                }
                if count != order {
                    return Err(Error::Parse {
                        line: line_no,
                        column: 1,
                        message: format!("row has {} entries, expected {}", count, order),
                    });
                }
                if entries.len() == order * order {
                    let (order, _, entries) = current.take().unwrap();
                    let mut t = MulTable::new(order, entries)?;
                    if let Some(l) = pending_label.take() {
                        t = t.with_label(l);
                    }
                    tables.push(t);
                }
            }
        }
    }
    if let Some((order, start, entries)) = current {
        return Err(Error::Parse {
            line: start,
            column: 1,
            message: format!(
                "table of order {} ends after {} of {} rows",
                order,
                entries.len() / order,
                order
            ),
        });
    }
    Ok(tables)
}

fn column_of(line: &str, token: &str) -> usize {
    // token is a subslice of line
    let offset = token.as_ptr() as usize - line.as_ptr() as usize;
    line[..offset].chars().count() + 1
}

/// Outcome of [`validate_table`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    /// Always true: a `MulTable` cannot hold an out-of-range product.
    pub is_closed: bool,
    pub is_associative: bool,
    /// Lexicographically least `(i, j, k)` with `(ij)k ≠ i(jk)`.
    pub first_violation: Option<(usize, usize, usize)>,
    pub is_idempotent: bool,
    /// Filled by [`validate_with_exponents`]; `r → x^r = x for all x`.
    pub exponent_witness: BTreeMap<u32, bool>,
}

pub fn validate_table(t: &MulTable) -> ValidationReport {
    let first_violation = if is_associative_light(t) {
        None
    } else {
        first_associativity_violation(t)
    };
    ValidationReport {
        is_closed: true,
        is_associative: first_violation.is_none(),
        first_violation,
        is_idempotent: t.is_idempotent(),
        exponent_witness: BTreeMap::new(),
    }
}

/// Like [`validate_table`], additionally recording `x^r = x` for each `r`.
/// Exponents are only evaluated when the table is associative.
pub fn validate_with_exponents(t: &MulTable, exponents: &[u32]) -> ValidationReport {
    let mut report = validate_table(t);
    if report.is_associative {
        for &r in exponents {
            report
                .exponent_witness
                .insert(r, r >= 2 && satisfies_exponent(t, r as u64));
        }
    }
    report
}

/// Reference associativity check: the least violating triple, if any.
pub fn first_associativity_violation(t: &MulTable) -> Option<(usize, usize, usize)> {
    let n = t.order();
    for i in 0..n {
        for j in 0..n {
            let ij = t.mul(i, j);
            for k in 0..n {
                if t.mul(ij, k) != t.mul(i, t.mul(j, k)) {
                    return Some((i, j, k));
                }
            }
        }
    }
    None
}

pub fn is_associative_naive(t: &MulTable) -> bool {
    first_associativity_violation(t).is_none()
}

/// Light's test: `(xg)y = x(gy)` for all `x, y` and every `g` in a generating
/// set of the magma suffices for associativity.
pub fn is_associative_light(t: &MulTable) -> bool {
    let n = t.order();
    generating_set(t).into_iter().all(|g| {
        (0..n).all(|x| {
            let xg = t.mul(x, g);
            (0..n).all(|y| t.mul(xg, y) == t.mul(x, t.mul(g, y)))
        })
    })
}

/// Greedy generating set: scan elements in order, keeping those not yet
/// reached by products of the kept ones. Valid for any magma.
pub fn generating_set(t: &MulTable) -> Vec<usize> {
    let n = t.order();
    let mut reached = vec![false; n];
    let mut members: Vec<usize> = Vec::new();
    let mut gens = Vec::new();
    for x in 0..n {
        if reached[x] {
            continue;
        }
        gens.push(x);
        reached[x] = true;
        members.push(x);
        // extend the magma closure of the generators
        let mut idx = members.len() - 1;
        while idx < members.len() {
            let a = members[idx];
            let snapshot = members.len();
            for b_idx in 0..snapshot {
                let b = members[b_idx];
                for p in [t.mul(a, b), t.mul(b, a)] {
                    if !reached[p] {
                        reached[p] = true;
                        members.push(p);
                    }
                }
            }
            idx += 1;
        }
    }
    gens
}

/// `a^k` for `k ≥ 1`, by repeated squaring.
pub fn element_power(t: &MulTable, a: usize, k: u64) -> Result<usize> {
    t.check_element(a)?;
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "exponent",
            value: 0,
            range: "1..".into(),
        });
    }
    Ok(power_unchecked(t, a, k))
}

fn power_unchecked(t: &MulTable, a: usize, mut k: u64) -> usize {
    let mut base = a;
    let mut acc: Option<usize> = None;
    while k > 0 {
        if k & 1 == 1 {
            acc = Some(match acc {
                None => base,
                Some(x) => t.mul(x, base),
            });
        }
        k >>= 1;
        if k > 0 {
            base = t.mul(base, base);
        }
    }
    acc.expect("k ≥ 1")
}

/// `x^r = x` for every element.
pub fn satisfies_exponent(t: &MulTable, r: u64) -> bool {
    r >= 1 && (0..t.order()).all(|x| power_unchecked(t, x, r) == x)
}

/// Smallest `t > 1` with `a^t = a`.
pub fn local_exponent(t: &MulTable, a: usize) -> Result<usize> {
    t.check_element(a)?;
    let bound = t.order() + 1;
    let mut p = a;
    for e in 2..=bound {
        p = t.mul(p, a);
        if p == a {
            return Ok(e);
        }
    }
    Err(Error::NoRecurrence { element: a, bound })
}

/// Power subsemigroups of order 2 or 4 that exist in any semigroup with
/// `x^{2^m+1} = x` (for `target = 2` when `a² ≠ a`, for `target = 4` when
/// `a³ ≠ a`). With local exponent `2^s + 1` the sets are
/// `{a^{2^{s-1}}, a^{2^s}}` and `{a^{2^{s-2}}, a^{2^{s-1}}, a^{3·2^{s-2}}, a^{2^s}}`.
pub fn exhibit_small_subsemigroup(t: &MulTable, a: usize, target: usize) -> Result<ElementSet> {
    t.check_element(a)?;
    if t.order() > ElementSet::CAPACITY {
        return Err(Error::OrderTooLarge {
            order: t.order(),
            limit: ElementSet::CAPACITY,
        });
    }
    let pow = |k: u64| power_unchecked(t, a, k);
    match target {
        2 => {
            if pow(2) == a {
                return Err(Error::PreconditionFailed(format!(
                    "element {} is idempotent",
                    a
                )));
            }
        }
        4 => {
            if pow(3) == a {
                return Err(Error::PreconditionFailed(format!("{}^3 = {}", a, a)));
            }
        }
        other => {
            return Err(Error::OutOfRange {
                what: "target",
                value: other,
                range: "{2, 4}".into(),
            })
        }
    }
    let k = local_exponent(t, a)?;
    let period = k - 1;
    if !period.is_power_of_two() {
        return Err(Error::ExponentNotPowerOfTwoPlusOne(k));
    }
    let s = period.trailing_zeros();
    let powers: Vec<u64> = if target == 2 {
        vec![1 << (s - 1), 1 << s]
    } else {
        // a³ ≠ a forces period ≥ 4, so s ≥ 2
        vec![1 << (s - 2), 1 << (s - 1), 3 << (s - 2), 1 << s]
    };
    let set = ElementSet::from_elements(t.order(), powers.into_iter().map(pow))?;
    debug_assert_eq!(set.len(), target);
    Ok(set)
}
