//! Verification commands behind the CLI.
//!
//! Every claim is checked by an actual run: "every semigroup of order ≥ n in
//! the class has a subsemigroup of order n" is checked over the census of the
//! class up to a bounded order, and "n is not forced" is checked by building
//! a counterexample and computing its subsemigroup orders.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::closure::{has_subsemigroup_of_order, is_closed, spectrum_with, Spectrum, Strategy};
use crate::constructions::{
    counterexample_spec, group_counterexample_spec, pq_condition_holds, rectangle_dims_for, ConstructionSpec,
};
use crate::enumeration::{enumerate_with_caps, Caps, Constraint, EnumerationQuery};
use crate::error::{Error, Result};
use crate::free_band::{free_band_table, green_rees_order, FreeBandTable};
use crate::table::{exhibit_small_subsemigroup, satisfies_exponent, validate_table, MulTable, TableRecord};

/// Counterexamples are checked by a full subsemigroup-order computation up to
/// this `n`; larger ones are reported as built but not scanned.
pub const EXHAUSTIVE_COUNTEREXAMPLE_LIMIT: usize = 20;

/// Orders `n` for which every semigroup with `x^r = x` of order `≥ n` has a
/// subsemigroup of order `n`.
pub fn forced_orders(r: u64) -> &'static [usize] {
    if r == 2 {
        &[1, 2, 4, 6]
    } else if r >= 3 && (r - 1).is_power_of_two() {
        &[1, 2, 4]
    } else {
        &[1]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Status {
    Verified,
    CounterexampleFound { table: TableRecord, missing_order: usize },
    Skipped { reason: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub claim: String,
    /// Inclusive range of orders scanned.
    pub orders_scanned: (usize, usize),
    pub tables_checked: usize,
    /// Power subsemigroups built directly from non-idempotent elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub power_witnesses: Option<usize>,
    pub status: Status,
    /// Whether the order is forced, so `Verified` is expected.
    pub expected_verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u128>,
}

impl VerificationReport {
    pub fn is_verified(&self) -> bool {
        self.status == Status::Verified
    }

    /// False only when a counterexample contradicts a forced order.
    pub fn is_consistent(&self) -> bool {
        !(self.expected_verified && matches!(self.status, Status::CounterexampleFound { .. }))
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "claim: {}", self.claim)?;
        writeln!(f, "orders scanned: {}..={}", self.orders_scanned.0, self.orders_scanned.1)?;
        writeln!(f, "tables checked: {}", self.tables_checked)?;
        if let Some(p) = self.power_witnesses {
            writeln!(f, "power subsemigroups checked: {}", p)?;
        }
        match &self.status {
            Status::Verified => writeln!(f, "status: verified")?,
            Status::Skipped { reason } => writeln!(f, "status: skipped ({})", reason)?,
            Status::CounterexampleFound { table, missing_order } => {
                writeln!(f, "status: counterexample without a subsemigroup of order {}", missing_order)?;
                let t = MulTable::from_record(table).map_err(|_| fmt::Error)?;
                write!(f, "{}", t.to_sgt())?;
            }
        }
        if let Some(ms) = self.elapsed_ms {
            writeln!(f, "elapsed: {} ms", ms)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CounterexampleReport {
    pub n: usize,
    pub r: u64,
    pub construction: String,
    pub order: usize,
    pub satisfies_exponent: bool,
    /// `None` when `n` is above [`EXHAUSTIVE_COUNTEREXAMPLE_LIMIT`].
    pub spectrum: Option<Spectrum>,
    #[serde(skip)]
    pub table: MulTable,
}

impl CounterexampleReport {
    /// The table is a valid counterexample: right class, larger than `n`,
    /// and (when scanned) without a subsemigroup of order `n`.
    pub fn is_valid(&self) -> bool {
        self.satisfies_exponent && self.order > self.n && self.spectrum.as_ref().map_or(true, |s| s.excludes(self.n))
    }

    pub fn was_scanned(&self) -> bool {
        self.spectrum.is_some()
    }
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "n: {}", self.n)?;
        writeln!(f, "r: {}", self.r)?;
        writeln!(f, "construction: {}", self.construction)?;
        writeln!(f, "order: {}", self.order)?;
        writeln!(f, "x^{} = x: {}", self.r, self.satisfies_exponent)?;
        match &self.spectrum {
            Some(s) => {
                writeln!(f, "spectrum: {}", s)?;
                if s.excludes(self.n) {
                    writeln!(f, "{} ∉ spectrum", self.n)?;
                } else {
                    writeln!(f, "{} ∈ spectrum", self.n)?;
                }
            }
            None => writeln!(f, "spectrum: not scanned (n > {}); excluded by construction", EXHAUSTIVE_COUNTEREXAMPLE_LIMIT)?,
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub order: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub is_idempotent: bool,
    /// `k → witness` (`None` when absent).
    pub queries: BTreeMap<usize, Option<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Spectrum>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "order: {}", self.order)?;
        if let Some(l) = &self.label {
            writeln!(f, "label: {}", l)?;
        }
        writeln!(f, "idempotent: {}", self.is_idempotent)?;
        for (k, w) in &self.queries {
            match w {
                Some(elems) => {
                    let parts: Vec<String> = elems.iter().map(|e| e.to_string()).collect();
                    writeln!(f, "k={}: witness {{{}}}", k, parts.join(","))?
                }
                None => writeln!(f, "k={}: absent", k)?,
            }
        }
        if let Some(s) = &self.spectrum {
            writeln!(f, "spectrum: {}", s)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PqReport {
    pub n: u64,
    pub p: u64,
    pub q: u64,
    pub largest_proper: u64,
    pub product: u64,
}

impl fmt::Display for PqReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(p, q) = ({}, {})", self.p, self.q)?;
        writeln!(
            f,
            "max{{(p-1)q, p(q-1)}} = {} < {} < {} = pq",
            self.largest_proper, self.n, self.product
        )
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FreeBandReport {
    pub generators: usize,
    pub formula_order: String,
    pub table_order: usize,
    pub idempotent: bool,
    pub associative: bool,
    pub elements: Vec<String>,
}

impl fmt::Display for FreeBandReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators: {}", self.generators)?;
        writeln!(f, "formula order: {}", self.formula_order)?;
        writeln!(f, "table order: {}", self.table_order)?;
        writeln!(f, "associative: {}", self.associative)?;
        writeln!(f, "idempotent: {}", self.idempotent)?;
        if self.elements.len() <= 16 {
            writeln!(f, "elements: {}", self.elements.join(" "))?;
        }
        Ok(())
    }
}

/// Evidence behind one row of the results table.
#[derive(Debug, Clone, Serialize)]
pub struct ResultsRow {
    pub r_label: String,
    /// Exponents actually scanned for this row.
    pub sample_r: Vec<u64>,
    /// Orders shown to be forced, from census scans.
    pub forced: Vec<usize>,
    /// Orders refuted by a scanned counterexample, with its construction.
    pub refuted: BTreeMap<usize, String>,
    /// Orders in `1..=limit` with neither kind of evidence.
    pub undecided: Vec<usize>,
    pub census: Vec<VerificationReport>,
}

impl ResultsRow {
    pub fn rendered(&self) -> String {
        let parts: Vec<String> = self.forced.iter().map(|n| n.to_string()).collect();
        format!("{} | {}", self.r_label, parts.join(","))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultsTable {
    pub max_band_order: usize,
    pub max_exp_order: usize,
    pub limit: usize,
    pub rows: Vec<ResultsRow>,
}

impl ResultsTable {
    pub fn rendered_rows(&self) -> Vec<String> {
        self.rows.iter().map(ResultsRow::rendered).collect()
    }

    /// Every order up to the limit is decided and the census found nothing.
    pub fn is_consistent(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.undecided.is_empty() && r.census.iter().all(|c| c.is_verified()))
    }
}

impl fmt::Display for ResultsTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "r | n")?;
        for line in self.rendered_rows() {
            writeln!(f, "{}", line)?;
        }
        writeln!(f)?;
        for row in &self.rows {
            let rs: Vec<String> = row.sample_r.iter().map(|r| r.to_string()).collect();
            writeln!(f, "[{}] sampled r = {}", row.r_label, rs.join(", "))?;
            for c in &row.census {
                let status = if c.is_verified() { "verified" } else { "FAILED" };
                writeln!(
                    f,
                    "  {}: orders {}..={}, {} tables, {}",
                    c.claim, c.orders_scanned.0, c.orders_scanned.1, c.tables_checked, status
                )?;
            }
            for (n, how) in &row.refuted {
                writeln!(f, "  n={} refuted by {}", n, how)?;
            }
            if !row.undecided.is_empty() {
                let u: Vec<String> = row.undecided.iter().map(|n| n.to_string()).collect();
                writeln!(f, "  undecided: {}", u.join(","))?;
            }
        }
        writeln!(
            f,
            "forced orders verified on the census (bands up to order {}, x^r = x up to order {}); exclusions checked by scanning counterexamples for n ≤ {}; larger n follow from the rectangular band construction",
            self.max_band_order, self.max_exp_order, self.limit
        )
    }
}

/// Runs verification commands, sharing census results between them.
pub struct Harness {
    caps: Caps,
    verbose: bool,
    census: Mutex<HashMap<(usize, Constraint), Arc<Vec<MulTable>>>>,
    spectra: Mutex<HashMap<String, Spectrum>>,
}

impl Default for Harness {
    fn default() -> Self {
        Harness::new(Caps::default())
    }
}

impl Harness {
    pub fn new(caps: Caps) -> Self {
        Harness {
            caps,
            verbose: false,
            census: Mutex::new(HashMap::new()),
            spectra: Mutex::new(HashMap::new()),
        }
    }

    pub fn verbose(mut self, on: bool) -> Self {
        self.verbose = on;
        self
    }

    pub fn caps(&self) -> Caps {
        self.caps
    }

    /// Canonical census of one order, cached.
    pub fn census(&self, order: usize, constraint: Constraint) -> Result<Arc<Vec<MulTable>>> {
        if let Some(c) = self.census.lock().unwrap().get(&(order, constraint)) {
            return Ok(c.clone());
        }
        let start = Instant::now();
        let q = EnumerationQuery {
            order,
            constraint,
            mode: crate::enumeration::Mode::CanonicalOnly,
        };
        let tables = Arc::new(enumerate_with_caps(q, self.caps)?);
        if self.verbose {
            let secs = start.elapsed().as_secs_f64();
            eprintln!(
                "census {} order {}: {} tables in {:.2}s ({:.0} tables/s)",
                constraint.tag(),
                order,
                tables.len(),
                secs,
                tables.len() as f64 / secs.max(1e-9)
            );
        }
        self.census.lock().unwrap().insert((order, constraint), tables.clone());
        Ok(tables)
    }

    fn scan(
        &self,
        claim: String,
        constraint: Constraint,
        n: usize,
        max_order: usize,
        expected_verified: bool,
    ) -> Result<VerificationReport> {
        let start = Instant::now();
        if n == 0 || n > max_order {
            return Err(Error::OutOfRange {
                what: "n",
                value: n,
                range: format!("1..={}", max_order),
            });
        }
        let r = constraint.exponent() as u64;
        let power_target = (r >= 3 && (r - 1).is_power_of_two() && (n == 2 || n == 4)).then_some(n);
        let mut checked = 0;
        let mut powers = 0;
        let mut status = Status::Verified;
        for order in n..=max_order {
            let tables = self.census(order, constraint)?;
            let missing = tables
                .par_iter()
                .position_first(|t| matches!(has_subsemigroup_of_order(t, n), Ok(None)));
            if let Some(target) = power_target {
                powers += tables
                    .par_iter()
                    .map(|t| check_power_witnesses(t, target))
                    .sum::<Result<usize>>()?;
            }
            match missing {
                Some(idx) => {
                    checked += idx + 1;
                    status = Status::CounterexampleFound {
                        table: tables[idx].to_record(),
                        missing_order: n,
                    };
                    break;
                }
                None => checked += tables.len(),
            }
        }
        Ok(VerificationReport {
            claim,
            orders_scanned: (n, max_order),
            tables_checked: checked,
            power_witnesses: power_target.map(|_| powers),
            status,
            expected_verified,
            elapsed_ms: self.verbose.then(|| start.elapsed().as_millis()),
        })
    }

    /// Every canonical band of order `n..=max_order` has a subsemigroup of
    /// order `n`.
    pub fn verify_band_theorem(&self, n: usize, max_order: usize) -> Result<VerificationReport> {
        self.scan(
            format!("band-forces-{}", n),
            Constraint::Idempotent,
            n,
            max_order,
            forced_orders(2).contains(&n),
        )
    }

    /// Every canonical semigroup with `x^r = x` of order `n..=max_order` has
    /// a subsemigroup of order `n`. For `r = 2^m + 1` and `n ∈ {2, 4}` the
    /// power subsemigroup of each applicable element is also built and
    /// checked.
    pub fn verify_exponent_theorem(&self, r: u32, n: usize, max_order: usize) -> Result<VerificationReport> {
        if r < 2 {
            return Err(Error::OutOfRange {
                what: "r",
                value: r as usize,
                range: "2..".into(),
            });
        }
        self.scan(
            format!("exp{}-forces-{}", r, n),
            Constraint::Exponent(r),
            n,
            max_order,
            forced_orders(r as u64).contains(&n),
        )
    }

    fn spectrum_of(&self, spec: &ConstructionSpec, t: &MulTable) -> Result<Spectrum> {
        let key = spec.to_string();
        if let Some(s) = self.spectra.lock().unwrap().get(&key) {
            return Ok(s.clone());
        }
        let s = spectrum_with(t, Strategy::Auto)?;
        self.spectra.lock().unwrap().insert(key, s.clone());
        Ok(s)
    }

    /// Builds a semigroup with `x^r = x` of order `> n` with no subsemigroup
    /// of order `n`, and scans it when `n` is small enough.
    pub fn counterexample(&self, n: usize, r: u64) -> Result<CounterexampleReport> {
        if r < 2 {
            return Err(Error::OutOfRange {
                what: "r",
                value: r as usize,
                range: "2..".into(),
            });
        }
        if forced_orders(r).contains(&n) {
            return Err(Error::TheoremForbids(n));
        }
        let spec = match n {
            2 | 4 | 6 => group_counterexample_spec(r, n)?,
            _ => counterexample_spec(n)?,
        };
        let table = spec.build()?;
        let report = validate_table(&table);
        if let Some(v) = report.first_violation {
            return Err(Error::NotAssociative(v));
        }
        let spectrum = if n <= EXHAUSTIVE_COUNTEREXAMPLE_LIMIT {
            Some(self.spectrum_of(&spec, &table)?)
        } else {
            if let ConstructionSpec::RectangularBand(p, q) = spec {
                debug_assert!(pq_condition_holds(n as u64, p as u64, q as u64));
            }
            None
        };
        Ok(CounterexampleReport {
            n,
            r,
            construction: spec.to_string(),
            order: table.order(),
            satisfies_exponent: satisfies_exponent(&table, r),
            spectrum,
            table,
        })
    }

    /// Reconstructs the classification of forced orders from census scans
    /// and scanned counterexamples.
    pub fn results_table(&self, max_band_order: usize, max_exp_order: usize) -> Result<ResultsTable> {
        let limit = EXHAUSTIVE_COUNTEREXAMPLE_LIMIT;
        let rows = vec![
            self.results_row("2", &[2], max_band_order, max_exp_order, limit)?,
            self.results_row("2^m+1 (m>0)", &[3, 5], max_band_order, max_exp_order, limit)?,
            self.results_row("otherwise", &[4, 7], max_band_order, max_exp_order, limit)?,
        ];
        Ok(ResultsTable {
            max_band_order,
            max_exp_order,
            limit,
            rows,
        })
    }

    fn results_row(
        &self,
        label: &str,
        sample_r: &[u64],
        max_band_order: usize,
        max_exp_order: usize,
        limit: usize,
    ) -> Result<ResultsRow> {
        let mut refuted: BTreeMap<usize, String> = BTreeMap::new();
        let mut forced: BTreeSet<usize> = BTreeSet::new();
        let mut census = Vec::new();

        for n in 1..=limit {
            let mut refutation = None;
            let mut all_forced = true;
            for &r in sample_r {
                if forced_orders(r).contains(&n) {
                    // exponent 5 census stops one order earlier than exponent 3
                    let max_order = if r == 2 {
                        max_band_order
                    } else if r == 3 {
                        max_exp_order
                    } else {
                        max_exp_order.min(self.caps.exponent).min(4)
                    };
                    let report = if r == 2 {
                        self.verify_band_theorem(n, max_order)?
                    } else {
                        self.verify_exponent_theorem(r as u32, n, max_order.max(n))?
                    };
                    all_forced &= report.is_verified();
                    census.push(report);
                } else {
                    let c = self.counterexample(n, r)?;
                    all_forced = false;
                    if c.is_valid() && c.was_scanned() {
                        refutation.get_or_insert_with(Vec::new).push(format!("r={}: {}", r, c.construction));
                    } else {
                        refutation = None;
                        break;
                    }
                }
            }
            if all_forced {
                forced.insert(n);
            } else if let Some(parts) = refutation {
                refuted.insert(n, parts.join("; "));
            }
        }
        let undecided = (1..=limit)
            .filter(|n| !forced.contains(n) && !refuted.contains_key(n))
            .collect();
        Ok(ResultsRow {
            r_label: label.to_string(),
            sample_r: sample_r.to_vec(),
            forced: forced.into_iter().collect(),
            refuted,
            undecided,
            census,
        })
    }
}

/// Builds the power subsemigroup for every element where it applies and
/// checks it is closed with exactly `target` elements.
fn check_power_witnesses(t: &MulTable, target: usize) -> Result<usize> {
    let mut count = 0;
    for a in 0..t.order() {
        match exhibit_small_subsemigroup(t, a, target) {
            Ok(set) => {
                if set.len() != target || !is_closed(t, set) {
                    return Err(Error::PreconditionFailed(format!(
                        "power set {} of element {} is not a subsemigroup of order {}",
                        set, a, target
                    )));
                }
                count += 1;
            }
            Err(Error::PreconditionFailed(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(count)
}

/// Per-`k` witnesses and optionally the spectrum of a user-supplied table.
pub fn check_table(t: &MulTable, ks: &[usize], with_spectrum: bool) -> Result<CheckReport> {
    let report = validate_table(t);
    if let Some(v) = report.first_violation {
        return Err(Error::NotAssociative(v));
    }
    let mut queries = BTreeMap::new();
    for &k in ks {
        let w = has_subsemigroup_of_order(t, k)?;
        queries.insert(k, w.map(|s| s.to_vec()));
    }
    let spectrum = if with_spectrum {
        Some(spectrum_with(t, Strategy::Auto)?)
    } else {
        None
    };
    Ok(CheckReport {
        order: t.order(),
        label: t.label().map(str::to_string),
        is_idempotent: report.is_idempotent,
        queries,
        spectrum,
    })
}

pub fn pq_report(n: u64) -> Result<PqReport> {
    let (p, q) = rectangle_dims_for(n)?;
    Ok(PqReport {
        n,
        p,
        q,
        largest_proper: ((p - 1) * q).max(p * (q - 1)),
        product: p * q,
    })
}

pub fn free_band_report(k: usize) -> Result<(FreeBandReport, FreeBandTable)> {
    let fb = free_band_table(k)?;
    let v = validate_table(&fb.table);
    let report = FreeBandReport {
        generators: k,
        formula_order: green_rees_order(k as u32).to_string(),
        table_order: fb.table.order(),
        idempotent: v.is_idempotent,
        associative: v.is_associative,
        elements: fb.legend.iter().map(|w| w.to_string()).collect(),
    };
    Ok((report, fb))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_rows() {
        assert_eq!(forced_orders(2), &[1, 2, 4, 6]);
        assert_eq!(forced_orders(3), &[1, 2, 4]);
        assert_eq!(forced_orders(9), &[1, 2, 4]);
        assert_eq!(forced_orders(4), &[1]);
        assert_eq!(forced_orders(7), &[1]);
    }

    #[test]
    fn small_band_scan() {
        let h = Harness::default();
        let r = h.verify_band_theorem(2, 5).unwrap();
        assert!(r.is_verified() && r.is_consistent());
        assert_eq!(r.tables_checked, 3 + 10 + 46 + 251);
        let r = h.verify_band_theorem(3, 4).unwrap();
        assert!(!r.is_verified() && r.is_consistent());
        assert!(h.verify_band_theorem(5, 4).is_err());
        assert!(h.verify_band_theorem(2, 8).is_err());
    }

    #[test]
    fn counterexample_refusals() {
        let h = Harness::default();
        assert_eq!(h.counterexample(4, 2).unwrap_err(), Error::TheoremForbids(4));
        assert_eq!(h.counterexample(2, 5).unwrap_err(), Error::TheoremForbids(2));
        let c = h.counterexample(6, 3).unwrap();
        assert_eq!(c.construction, "zq:2^3");
        assert!(c.is_valid());
        let c = h.counterexample(25, 2).unwrap();
        assert!(!c.was_scanned() && c.is_valid());
    }

    #[test]
    fn check_rejects_nonassociative() {
        let t = MulTable::from_rows(&[vec![1, 0], vec![0, 0]]).unwrap();
        assert_eq!(check_table(&t, &[1], false).unwrap_err(), Error::NotAssociative((0, 0, 1)));
    }
}
