//! Concrete semigroup families: rectangular bands, ideal-extension unions,
//! cyclic groups and their direct products, plus the dispatchers that pick a
//! counterexample for a given order.
//!
//! Indexing is fixed so exported tables are byte-stable:
//! * rectangular band `S_{p,q}`: pair `(a, b)` has index `a·q + b`;
//! * union: the upper component's elements first, then the lower (ideal) one;
//! * direct product `A × B`: pair `(a, b)` has index `a·|B| + b`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::table::{is_associative_light, MulTable};

/// Largest order a construction may produce.
pub const MAX_CONSTRUCTION_ORDER: usize = 64;

fn check_size(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::OutOfRange {
            what: "order",
            value: 0,
            range: format!("1..={}", MAX_CONSTRUCTION_ORDER),
        });
    }
    if order > MAX_CONSTRUCTION_ORDER {
        return Err(Error::OrderTooLarge {
            order,
            limit: MAX_CONSTRUCTION_ORDER,
        });
    }
    Ok(())
}

/// `S_{p,q}`: pairs with `(a1, b1)·(a2, b2) = (a1, b2)`.
pub fn rectangular_band(p: usize, q: usize) -> Result<MulTable> {
    check_size(p.saturating_mul(q))?;
    Ok(MulTable::from_fn(p * q, |i, j| (i / q) * q + j % q)?.with_label(format!("rect:{}x{}", p, q)))
}

/// Disjoint union in which `lower` is an ideal: products inside a component
/// are the component's own, mixed products return the operand from `lower`.
pub fn union_ideal(upper: &MulTable, lower: &MulTable) -> Result<MulTable> {
    let nu = upper.order();
    let order = nu + lower.order();
    check_size(order)?;
    let t = MulTable::from_fn(order, |i, j| match (i < nu, j < nu) {
        (true, true) => upper.mul(i, j),
        (false, false) => nu + lower.mul(i - nu, j - nu),
        (true, false) => j,
        (false, true) => i,
    })?;
    if !is_associative_light(&t) {
        let v = crate::table::first_associativity_violation(&t).expect("light test failed");
        return Err(Error::NotAssociative(v));
    }
    Ok(t)
}

/// `Z_q` under addition.
pub fn cyclic_group(q: usize) -> Result<MulTable> {
    check_size(q)?;
    Ok(MulTable::from_fn(q, |i, j| (i + j) % q)?.with_label(format!("zq:{}", q)))
}

/// Componentwise product on pairs.
pub fn direct_product(a: &MulTable, b: &MulTable) -> Result<MulTable> {
    let nb = b.order();
    check_size(a.order().saturating_mul(nb))?;
    MulTable::from_fn(a.order() * nb, |i, j| {
        a.mul(i / nb, j / nb) * nb + b.mul(i % nb, j % nb)
    })
}

/// `Z_q^k` as right-nested direct products.
pub fn cyclic_power(q: usize, k: u32) -> Result<MulTable> {
    if k == 0 {
        return Err(Error::OutOfRange {
            what: "power",
            value: 0,
            range: "1..".into(),
        });
    }
    ConstructionSpec::cyclic_power(q, k).build()
}

/// A declarative recipe for a table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ConstructionSpec {
    RectangularBand(usize, usize),
    UnionIdeal {
        upper: Box<ConstructionSpec>,
        lower: Box<ConstructionSpec>,
    },
    CyclicGroup(usize),
    DirectProduct(Box<ConstructionSpec>, Box<ConstructionSpec>),
}

impl ConstructionSpec {
    pub fn cyclic_power(q: usize, k: u32) -> ConstructionSpec {
        let mut spec = ConstructionSpec::CyclicGroup(q);
        for _ in 1..k {
            spec = ConstructionSpec::DirectProduct(Box::new(ConstructionSpec::CyclicGroup(q)), Box::new(spec));
        }
        spec
    }

    /// Returns `(q, k)` if this is `Z_q^k` in the nesting used by
    /// [`ConstructionSpec::cyclic_power`].
    fn as_cyclic_power(&self) -> Option<(usize, u32)> {
        match self {
            ConstructionSpec::CyclicGroup(q) => Some((*q, 1)),
            ConstructionSpec::DirectProduct(head, rest) => match (head.as_ref(), rest.as_cyclic_power()) {
                (ConstructionSpec::CyclicGroup(q), Some((q2, k))) if *q == q2 => Some((*q, k + 1)),
                _ => None,
            },
            _ => None,
        }
    }

    /// Order of the evaluated table, computed without building it.
    pub fn order(&self) -> usize {
        match self {
            ConstructionSpec::RectangularBand(p, q) => p.saturating_mul(*q),
            ConstructionSpec::UnionIdeal { upper, lower } => upper.order().saturating_add(lower.order()),
            ConstructionSpec::CyclicGroup(q) => *q,
            ConstructionSpec::DirectProduct(a, b) => a.order().saturating_mul(b.order()),
        }
    }

    pub fn build(&self) -> Result<MulTable> {
        check_size(self.order())?;
        let t = match self {
            ConstructionSpec::RectangularBand(p, q) => rectangular_band(*p, *q)?,
            ConstructionSpec::UnionIdeal { upper, lower } => union_ideal(&upper.build()?, &lower.build()?)?,
            ConstructionSpec::CyclicGroup(q) => cyclic_group(*q)?,
            ConstructionSpec::DirectProduct(a, b) => direct_product(&a.build()?, &b.build()?)?,
        };
        Ok(t.with_label(self.to_string()))
    }
}

impl fmt::Display for ConstructionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some((q, k)) = self.as_cyclic_power() {
            return if k == 1 {
                write!(f, "zq:{}", q)
            } else {
                write!(f, "zq:{}^{}", q, k)
            };
        }
        match self {
            ConstructionSpec::RectangularBand(p, q) => write!(f, "rect:{}x{}", p, q),
            ConstructionSpec::UnionIdeal { upper, lower } => write!(f, "union:({},{})", upper, lower),
            ConstructionSpec::DirectProduct(a, b) => write!(f, "prod:({},{})", a, b),
            ConstructionSpec::CyclicGroup(_) => unreachable!(),
        }
    }
}

/// Grammar:
///
/// ```text
/// spec  := "rect:" P "x" Q
///        | "zq:" Q [ "^" K ]
///        | "union:(" spec "," spec ")"
///        | "prod:(" spec "," spec ")"
/// ```
impl FromStr for ConstructionSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut p = SpecParser { src: s, pos: 0 };
        let spec = p.spec()?;
        if p.pos != s.len() {
            return Err(p.error("trailing input"));
        }
        Ok(spec)
    }
}

struct SpecParser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> SpecParser<'a> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse {
            line: 1,
            column: self.pos + 1,
            message: format!("{} in construction {:?}", msg, self.src),
        }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn eat(&mut self, tok: &str) -> bool {
        if self.rest().starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.error(&format!("expected {:?}", tok)))
        }
    }

    fn number(&mut self) -> Result<usize> {
        let digits = self.rest().bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(self.error("expected a number"));
        }
        let v = self.rest()[..digits]
            .parse::<usize>()
            .map_err(|_| self.error("number too large"))?;
        if v == 0 {
            return Err(self.error("sizes must be positive"));
        }
        self.pos += digits;
        Ok(v)
    }

    fn pair(&mut self) -> Result<(ConstructionSpec, ConstructionSpec)> {
        self.expect("(")?;
        let a = self.spec()?;
        self.expect(",")?;
        let b = self.spec()?;
        self.expect(")")?;
        Ok((a, b))
    }

    fn spec(&mut self) -> Result<ConstructionSpec> {
        if self.eat("rect:") {
            let p = self.number()?;
            self.expect("x")?;
            let q = self.number()?;
            Ok(ConstructionSpec::RectangularBand(p, q))
        } else if self.eat("zq:") {
            let q = self.number()?;
            let k = if self.eat("^") { self.number()? } else { 1 };
            let k = u32::try_from(k).map_err(|_| self.error("power too large"))?;
            Ok(ConstructionSpec::cyclic_power(q, k))
        } else if self.eat("union:") {
            let (upper, lower) = self.pair()?;
            Ok(ConstructionSpec::UnionIdeal {
                upper: Box::new(upper),
                lower: Box::new(lower),
            })
        } else if self.eat("prod:") {
            let (a, b) = self.pair()?;
            Ok(ConstructionSpec::DirectProduct(Box::new(a), Box::new(b)))
        } else {
            Err(self.error("expected rect:, zq:, union: or prod:"))
        }
    }
}

/// `(p, q)` with `max{(p-1)q, p(q-1)} < n < pq`, so that `S_{p,q}` has no
/// subsemigroup of order `n`: a proper sub-rectangle misses a full row or
/// column, while a subsemigroup meeting every row and column is everything.
///
/// * odd `n ≥ 3`: `(2, (n+1)/2)`;
/// * `n = 8, 10, 14`: `(3,3)`, `(3,4)`, `(3,5)`;
/// * other even `n ≥ 16`: the least `k ≤ √(n+1)` not dividing `n`, paired
///   with `⌊n/k⌋ + 1`.
pub fn rectangle_dims_for(n: u64) -> Result<(u64, u64)> {
    match n {
        1 | 2 | 4 | 6 | 12 | 0 => Err(Error::NoSolution(n)),
        8 => Ok((3, 3)),
        10 => Ok((3, 4)),
        14 => Ok((3, 5)),
        n if n % 2 == 1 => Ok((2, (n + 1) / 2)),
        n => {
            let k = (1..)
                .take_while(|k: &u64| k * k <= n + 1)
                .find(|k| n % k != 0)
                .expect("for even n ≥ 16 some k ≤ √(n+1) does not divide n");
            Ok((k, n / k + 1))
        }
    }
}

/// `max{(p-1)q, p(q-1)} < n < pq`.
pub fn pq_condition_holds(n: u64, p: u64, q: u64) -> bool {
    p >= 1 && q >= 1 && ((p - 1) * q).max(p * (q - 1)) < n && n < p * q
}

/// An idempotent semigroup of order `> n` without a subsemigroup of order `n`.
pub fn counterexample_without_subsemigroup(n: usize) -> Result<MulTable> {
    counterexample_spec(n)?.build()
}

pub fn counterexample_spec(n: usize) -> Result<ConstructionSpec> {
    match n {
        1 | 2 | 4 | 6 => Err(Error::TheoremForbids(n)),
        0 => Err(Error::OutOfRange {
            what: "n",
            value: 0,
            range: "1..".into(),
        }),
        12 => Ok(ConstructionSpec::UnionIdeal {
            upper: Box::new(ConstructionSpec::RectangularBand(3, 3)),
            lower: Box::new(ConstructionSpec::RectangularBand(2, 2)),
        }),
        n => {
            let (p, q) = rectangle_dims_for(n as u64)?;
            Ok(ConstructionSpec::RectangularBand(p as usize, q as usize))
        }
    }
}

fn prime_factors(mut m: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= m {
        if m % d == 0 {
            out.push(d);
            while m % d == 0 {
                m /= d;
            }
        }
        d += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

/// A group satisfying `x^r = x` whose subsemigroup orders avoid `blocked`:
/// `Z_q^3` for the least prime `q | r-1` when `blocked = 6`, `Z_q^2` for the
/// least odd prime `q | r-1` when `blocked ∈ {2, 4}`.
pub fn group_counterexample_spec(r: u64, blocked: usize) -> Result<ConstructionSpec> {
    if r < 3 {
        return Err(Error::OutOfRange {
            what: "r",
            value: r as usize,
            range: "3..".into(),
        });
    }
    let primes = prime_factors(r - 1);
    match blocked {
        6 => Ok(ConstructionSpec::cyclic_power(primes[0] as usize, 3)),
        2 | 4 => match primes.iter().find(|&&q| q > 2) {
            Some(&q) => Ok(ConstructionSpec::cyclic_power(q as usize, 2)),
            None => Err(Error::NoOddPrimeFactor(r - 1)),
        },
        other => Err(Error::OutOfRange {
            what: "blocked",
            value: other,
            range: "{2, 4, 6}".into(),
        }),
    }
}

pub fn group_counterexample(r: u64, blocked: usize) -> Result<MulTable> {
    group_counterexample_spec(r, blocked)?.build()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::table::{satisfies_exponent, validate_table};

    #[test]
    fn rect_products() {
        let t = rectangular_band(2, 2).unwrap();
        assert_eq!(t.order(), 4);
        assert!(t.is_idempotent());
        // (0,0)·(1,1) = (0,1)
        assert_eq!(t.mul(0, 3), 1);
        assert_eq!(rectangular_band(1, 1).unwrap().order(), 1);
        assert!(matches!(rectangular_band(8, 9), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn union_of_trivials_is_a_chain() {
        let one = rectangular_band(1, 1).unwrap();
        let t = union_ideal(&one, &one).unwrap();
        assert_eq!(t.entries(), &[0, 1, 1, 1]);
        assert!(t.is_idempotent());
    }

    #[test]
    fn union_rejects_oversize() {
        let big = rectangular_band(8, 8).unwrap();
        let one = rectangular_band(1, 1).unwrap();
        assert!(matches!(union_ideal(&big, &one), Err(Error::OrderTooLarge { .. })));
    }

    #[test]
    fn cyclic_exponents() {
        assert_eq!(cyclic_group(1).unwrap().order(), 1);
        assert!(satisfies_exponent(&cyclic_group(2).unwrap(), 3));
        let z3 = cyclic_group(3).unwrap();
        assert!(satisfies_exponent(&z3, 4));
        assert!(!satisfies_exponent(&z3, 3));
    }

    #[test]
    fn product_with_trivial_is_same_table() {
        let z3 = cyclic_group(3).unwrap();
        let t = direct_product(&z3, &cyclic_group(1).unwrap()).unwrap();
        assert_eq!(t.entries(), z3.entries());
        assert!(validate_table(&cyclic_power(2, 3).unwrap()).is_associative);
    }

    #[test]
    fn spec_grammar() {
        let s: ConstructionSpec = "union:(rect:3x3,rect:2x2)".parse().unwrap();
        assert_eq!(s.order(), 13);
        assert_eq!(s.to_string(), "union:(rect:3x3,rect:2x2)");
        let z: ConstructionSpec = "zq:3^2".parse().unwrap();
        assert_eq!(z, ConstructionSpec::cyclic_power(3, 2));
        assert_eq!(z.to_string(), "zq:3^2");
        let p: ConstructionSpec = "prod:(zq:3,zq:3)".parse().unwrap();
        assert_eq!(p.to_string(), "zq:3^2");
        let q: ConstructionSpec = "prod:(zq:2,rect:1x2)".parse().unwrap();
        assert_eq!(q.to_string(), "prod:(zq:2,rect:1x2)");
        for bad in ["", "rect:3", "rect:0x2", "zq:", "union:(rect:1x1)", "rect:1x1 ", "foo:1"] {
            assert!(bad.parse::<ConstructionSpec>().is_err(), "{:?}", bad);
        }
    }

    #[test]
    fn pq_recipe_examples() {
        assert_eq!(rectangle_dims_for(3).unwrap(), (2, 2));
        assert_eq!(rectangle_dims_for(8).unwrap(), (3, 3));
        assert_eq!(rectangle_dims_for(10).unwrap(), (3, 4));
        assert_eq!(rectangle_dims_for(14).unwrap(), (3, 5));
        assert_eq!(rectangle_dims_for(16).unwrap(), (3, 6));
        assert!(pq_condition_holds(16, 3, 6));
        for n in [1, 2, 4, 6, 12] {
            assert_eq!(rectangle_dims_for(n), Err(Error::NoSolution(n)));
        }
    }

    #[test]
    fn counterexample_dispatch() {
        assert_eq!(counterexample_spec(3).unwrap().to_string(), "rect:2x2");
        assert_eq!(counterexample_spec(5).unwrap().to_string(), "rect:2x3");
        assert_eq!(counterexample_without_subsemigroup(12).unwrap().order(), 13);
        assert_eq!(counterexample_spec(2), Err(Error::TheoremForbids(2)));
    }

    #[test]
    fn group_dispatch() {
        assert_eq!(group_counterexample_spec(4, 2).unwrap().to_string(), "zq:3^2");
        assert_eq!(group_counterexample_spec(3, 6).unwrap().to_string(), "zq:2^3");
        assert_eq!(group_counterexample_spec(7, 6).unwrap().to_string(), "zq:2^3");
        assert_eq!(group_counterexample_spec(7, 4).unwrap().to_string(), "zq:3^2");
        assert_eq!(group_counterexample_spec(5, 4), Err(Error::NoOddPrimeFactor(4)));
        assert!(group_counterexample_spec(2, 6).is_err());
        assert!(group_counterexample_spec(4, 3).is_err());
        assert_eq!(prime_factors(12), vec![2, 3]);
    }
}
