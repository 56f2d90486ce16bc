//! Exact element enumeration by word length through the reflection
//! representation, growth series, covolume partial sums, and the Kac-Moody
//! criteria report.
//!
//! Enumeration is restricted to crystallographic labels {2, 3, 4, 6, ∞} —
//! exactly the Weyl groups arising from generalized Cartan matrices — so all
//! arithmetic closes in the ring Q(√2, √3) with exact rational coordinates.
//! The representation is faithful and BFS depth equals word length, which
//! makes the coefficient of t^k the number of elements of length k.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, Zero};

pub use num_rational::BigRational;

use crate::classify::{classify_irreducible, sphericity, FiniteType, TypeTag};
use crate::coxeter::{is_irreducible, CoxeterMatrix, INFINITE};
use crate::error::Error;
use crate::l2::{betti_support, kunneth_square, BettiSupport};
use crate::Result;

/// An element a + b√2 + c√3 + d√6 of Q(√2, √3), with exact rational
/// coefficients. Equality is coefficient-wise; `Ratio` keeps fractions
/// reduced, so derived `Eq`/`Hash` are canonical.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct QuadNumber {
    a: Rational64,
    b: Rational64,
    c: Rational64,
    d: Rational64,
}

impl QuadNumber {
    pub fn zero() -> QuadNumber {
        QuadNumber::from_int(0)
    }

    pub fn one() -> QuadNumber {
        QuadNumber::from_int(1)
    }

    pub fn from_int(v: i64) -> QuadNumber {
        QuadNumber {
            a: Rational64::from_integer(v),
            b: Rational64::zero(),
            c: Rational64::zero(),
            d: Rational64::zero(),
        }
    }

    pub fn sqrt2() -> QuadNumber {
        QuadNumber {
            b: Rational64::one(),
            ..QuadNumber::zero()
        }
    }

    pub fn sqrt3() -> QuadNumber {
        QuadNumber {
            c: Rational64::one(),
            ..QuadNumber::zero()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero() && self.d.is_zero()
    }
}

impl Add for QuadNumber {
    type Output = QuadNumber;
    fn add(self, o: QuadNumber) -> QuadNumber {
        QuadNumber {
            a: self.a + o.a,
            b: self.b + o.b,
            c: self.c + o.c,
            d: self.d + o.d,
        }
    }
}

impl Sub for QuadNumber {
    type Output = QuadNumber;
    fn sub(self, o: QuadNumber) -> QuadNumber {
        QuadNumber {
            a: self.a - o.a,
            b: self.b - o.b,
            c: self.c - o.c,
            d: self.d - o.d,
        }
    }
}

impl Neg for QuadNumber {
    type Output = QuadNumber;
    fn neg(self) -> QuadNumber {
        QuadNumber {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Mul for QuadNumber {
    type Output = QuadNumber;
    fn mul(self, o: QuadNumber) -> QuadNumber {
        // (√2)² = 2, (√3)² = 3, (√6)² = 6, √2·√3 = √6, √2·√6 = 2√3,
        // √3·√6 = 3√2.
        let two = Rational64::from_integer(2);
        let three = Rational64::from_integer(3);
        let six = Rational64::from_integer(6);
        QuadNumber {
            a: self.a * o.a + two * self.b * o.b + three * self.c * o.c + six * self.d * o.d,
            b: self.a * o.b + self.b * o.a + three * (self.c * o.d + self.d * o.c),
            c: self.a * o.c + self.c * o.a + two * (self.b * o.d + self.d * o.b),
            d: self.a * o.d + self.d * o.a + self.b * o.c + self.c * o.b,
        }
    }
}

/// Square matrix over [`QuadNumber`], row-major.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadMatrix {
    n: usize,
    entries: Vec<QuadNumber>,
}

impl QuadMatrix {
    pub fn identity(n: usize) -> QuadMatrix {
        let mut entries = vec![QuadNumber::zero(); n * n];
        for i in 0..n {
            entries[i * n + i] = QuadNumber::one();
        }
        QuadMatrix { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> QuadNumber {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: QuadNumber) {
        self.entries[i * self.n + j] = v;
    }

    pub fn mul(&self, o: &QuadMatrix) -> QuadMatrix {
        debug_assert_eq!(self.n, o.n);
        let n = self.n;
        let mut out = QuadMatrix {
            n,
            entries: vec![QuadNumber::zero(); n * n],
        };
        for i in 0..n {
            for k in 0..n {
                let v = self.get(i, k);
                if v.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let w = o.get(k, j);
                    if !w.is_zero() {
                        out.set(i, j, out.get(i, j) + v * w);
                    }
                }
            }
        }
        out
    }
}

/// -2·cos(π/m) as a [`QuadNumber`], for crystallographic m and the ∞
/// sentinel.
fn gram_entry(m: u32) -> Result<QuadNumber> {
    Ok(match m {
        2 => QuadNumber::zero(),
        3 => -QuadNumber::one(),
        4 => -QuadNumber::sqrt2(),
        6 => -QuadNumber::sqrt3(),
        INFINITE => QuadNumber::from_int(-2),
        other => return Err(Error::UnsupportedRing(other)),
    })
}

/// One exact reflection matrix per generator: σ_s maps x to
/// x - ⟨x, α_s⟩ α_s with ⟨α_s, α_t⟩ = -2cos(π/m_st) off the diagonal and 2
/// on it.
pub fn tits_generators(m: &CoxeterMatrix) -> Result<Vec<QuadMatrix>> {
    let n = m.rank();
    let mut gram = vec![vec![QuadNumber::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            gram[i][j] = if i == j {
                QuadNumber::from_int(2)
            } else {
                gram_entry(m.entry(i, j))?
            };
        }
    }
    let mut out = Vec::with_capacity(n);
    for s in 0..n {
        let mut sigma = QuadMatrix::identity(n);
        for t in 0..n {
            // column t: α_t - ⟨α_t, α_s⟩ α_s
            sigma.set(s, t, sigma.get(s, t) - gram[t][s]);
        }
        out.push(sigma);
    }
    Ok(out)
}

/// Element counts by word length, possibly truncated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthSeries {
    /// c_0 .. c_K with c_k the number of elements of length k.
    pub coefficients: Vec<u64>,
    /// Requested truncation depth N.
    pub truncation: usize,
    /// True when the group was exhausted before the truncation.
    pub complete: bool,
}

impl GrowthSeries {
    pub fn total(&self) -> u64 {
        self.coefficients.iter().sum()
    }
}

impl fmt::Display for GrowthSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}]{}",
            self.coefficients
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(", "),
            if self.complete { " (complete)" } else { " (truncated)" }
        )
    }
}

/// Breadth-first closure from the identity under right multiplication by the
/// generators, deduplicating exact matrices; c_k counts the new elements at
/// depth k. Faithfulness of the representation makes depth equal word
/// length.
pub fn enumerate_by_length(m: &CoxeterMatrix, max_length: usize) -> Result<GrowthSeries> {
    enumerate_by_length_bounded(m, max_length, usize::MAX)
}

/// [`enumerate_by_length`] with an element budget: expansion stops once more
/// than `element_cap` elements have been seen (the series is then truncated
/// and marked incomplete). Lets finiteness checks bail out early on groups
/// that are visibly too large.
pub fn enumerate_by_length_bounded(
    m: &CoxeterMatrix,
    max_length: usize,
    element_cap: usize,
) -> Result<GrowthSeries> {
    let generators = tits_generators(m)?;
    let identity = QuadMatrix::identity(m.rank());
    let mut visited: HashSet<QuadMatrix> = HashSet::new();
    visited.insert(identity.clone());
    let mut frontier = vec![identity];
    let mut coefficients = vec![1u64];
    let mut complete = m.rank() == 0;
    let mut capped = false;
    'depth: for _depth in 1..=max_length {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &generators {
                let wg = w.mul(g);
                if visited.insert(wg.clone()) {
                    next.push(wg);
                    if visited.len() > element_cap {
                        capped = true;
                        break 'depth;
                    }
                }
            }
        }
        if next.is_empty() {
            complete = true;
            break;
        }
        coefficients.push(next.len() as u64);
        frontier = next;
    }
    // A frontier that cannot extend at the truncation boundary still means
    // the group was exhausted.
    if !complete && !capped && !frontier.is_empty() {
        let exhausted = frontier.iter().all(|w| {
            generators.iter().all(|g| visited.contains(&w.mul(g)))
        });
        if exhausted {
            complete = true;
        }
    }
    Ok(GrowthSeries {
        coefficients,
        truncation: max_length,
        complete,
    })
}

/// Coefficients of Π_i (1 + t + ... + t^{m_i}) over the exponents of a
/// finite type: the classical closed form for the growth polynomial, used as
/// an oracle against BFS enumeration.
pub fn finite_growth_polynomial(tag: &TypeTag) -> Result<GrowthSeries> {
    let finite = match tag {
        TypeTag::Finite(t) => *t,
        other => return Err(Error::NotFiniteType(other.to_string())),
    };
    let mut poly = vec![1u64];
    for e in finite.exponents() {
        let factor_len = e as usize + 1;
        let mut next = vec![0u64; poly.len() + factor_len - 1];
        for (i, &c) in poly.iter().enumerate() {
            for j in 0..factor_len {
                next[i + j] += c;
            }
        }
        poly = next;
    }
    let truncation = poly.len() - 1;
    Ok(GrowthSeries {
        coefficients: poly,
        truncation,
        complete: true,
    })
}

/// Growth polynomial directly from a finite type tag.
pub fn growth_polynomial_of(finite: FiniteType) -> GrowthSeries {
    finite_growth_polynomial(&TypeTag::Finite(finite)).expect("tag is finite")
}

/// Exact partial sums of W(1/q).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CovolumeSums {
    /// s_k = Σ_{i<=k} c_i q^{-i} for k = 0..=N (constant once the group is
    /// exhausted).
    pub sums: Vec<BigRational>,
    pub complete: bool,
}

impl CovolumeSums {
    pub fn last(&self) -> &BigRational {
        self.sums.last().expect("there is always an s_0")
    }
}

/// Exact rational partial sums s_k = Σ_{i<=k} c_i q^{-i}, k = 0..=N.
pub fn covolume_partial_sums(m: &CoxeterMatrix, q: u64, max_length: usize) -> Result<CovolumeSums> {
    if q < 2 {
        return Err(Error::InvalidQ(q));
    }
    let series = enumerate_by_length(m, max_length)?;
    let q = BigRational::from_integer(BigInt::from(q));
    let mut power = BigRational::one();
    let mut acc = BigRational::zero();
    let mut sums = Vec::with_capacity(max_length + 1);
    for k in 0..=max_length {
        if let Some(&c) = series.coefficients.get(k) {
            acc += BigRational::from_integer(BigInt::from(c)) * &power;
        }
        sums.push(acc.clone());
        power /= &q;
    }
    Ok(CovolumeSums {
        sums,
        complete: series.complete,
    })
}

/// Exact decimal rendering of a nonnegative rational, truncated toward zero
/// to `digits` fractional digits.
pub fn decimal_string(value: &BigRational, digits: usize) -> String {
    debug_assert!(!value.is_negative());
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = (value * BigRational::from_integer(scale.clone())).trunc();
    let scaled = scaled.to_integer();
    let int_part = &scaled / &scale;
    let frac_part = (&scaled % &scale).abs();
    format!("{}.{:0>width$}", int_part, frac_part.to_string(), width = digits)
}

/// One criterion flag of the Kac-Moody report.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KMFlag {
    pub value: bool,
    pub criterion: String,
}

/// Criteria report for the Kac-Moody group over F_q with the given Weyl
/// group: lattice, finite presentation, simplicity, and Kazhdan flags, with
/// the degree supports attached for infinite non-affine W.
#[derive(Debug, Clone)]
pub struct KMReport {
    pub rank: usize,
    pub q: u64,
    /// Thickness of the associated buildings.
    pub thickness: u64,
    pub type_tag: TypeTag,
    pub sphericity: usize,
    pub lattice_ok: KMFlag,
    pub finitely_presented_ok: KMFlag,
    pub simple_ok: KMFlag,
    pub kazhdan_ok: KMFlag,
    /// Present when W is infinite and non-affine: the degree support data
    /// for G and the lattice degrees for Λ.
    pub supports: Option<(BettiSupport, BTreeSet<usize>)>,
}

/// Evaluates the boolean criteria for the Kac-Moody group over F_q.
/// Requires an irreducible Weyl group; the center-free convention is
/// assumed throughout.
pub fn km_report(m: &CoxeterMatrix, q: u64) -> Result<KMReport> {
    if m.rank() == 0 {
        return Err(Error::EmptySystem);
    }
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible("criteria need a connected diagram".into()));
    }
    let rank = m.rank();
    let type_tag = classify_irreducible(m)?;
    let k_spherical = sphericity(m);

    let lattice_value = q > rank as u64;
    let lattice_ok = KMFlag {
        value: lattice_value,
        criterion: format!("q > |S| ({q} > {rank})"),
    };
    let finitely_presented_ok = KMFlag {
        value: q >= 4 && k_spherical >= 2,
        criterion: format!("q >= 4 and 2-spherical (q = {q}, sphericity = {k_spherical})"),
    };
    let simple_ok = KMFlag {
        value: !type_tag.is_affine() && lattice_value,
        criterion: "irreducible, non-affine Weyl group and lattice bound".to_string(),
    };
    let kazhdan_ok = KMFlag {
        value: k_spherical >= 2,
        criterion: format!("2-spherical, for q large enough (sphericity = {k_spherical})"),
    };

    let supports = if !type_tag.is_finite() && !type_tag.is_affine() {
        let support = betti_support(m)?;
        let degrees = kunneth_square(&support).keys().copied().collect();
        Some((support, degrees))
    } else {
        None
    };

    Ok(KMReport {
        rank,
        q,
        thickness: q + 1,
        type_tag,
        sphericity: k_spherical,
        lattice_ok,
        finitely_presented_ok,
        simple_ok,
        kazhdan_ok,
        supports,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coxeter::{builtin_family, parse_diagram, Family};
    use std::collections::BTreeSet;

    fn diagram(text: &str) -> CoxeterMatrix {
        parse_diagram(text).unwrap()
    }

    #[test]
    fn quad_arithmetic() {
        let r2 = QuadNumber::sqrt2();
        let r3 = QuadNumber::sqrt3();
        assert_eq!(r2 * r2, QuadNumber::from_int(2));
        assert_eq!(r3 * r3, QuadNumber::from_int(3));
        assert_eq!((r2 * r3) * (r2 * r3), QuadNumber::from_int(6));
        let x = (QuadNumber::one() + r2) * (QuadNumber::one() - r2);
        assert_eq!(x, QuadNumber::from_int(-1));
    }

    #[test]
    fn generator_orders_a2() {
        let m = diagram("nodes: a b\nedge: a b");
        let gens = tits_generators(&m).unwrap();
        let identity = QuadMatrix::identity(2);
        for g in &gens {
            assert_eq!(g.mul(g), identity);
        }
        let st = gens[0].mul(&gens[1]);
        let cubed = st.mul(&st).mul(&st);
        assert_eq!(cubed, identity);
    }

    #[test]
    fn unsupported_label_fails_fast() {
        let m = diagram("nodes: a b\nedge: a b 5");
        assert!(matches!(tits_generators(&m), Err(Error::UnsupportedRing(5))));
    }

    #[test]
    fn bfs_small_groups() {
        let a2 = diagram("nodes: a b\nedge: a b");
        let series = enumerate_by_length(&a2, 10).unwrap();
        assert_eq!(series.coefficients, vec![1, 2, 2, 1]);
        assert!(series.complete);

        let b2 = diagram("nodes: a b\nedge: a b 4");
        let series = enumerate_by_length(&b2, 10).unwrap();
        assert_eq!(series.coefficients, vec![1, 2, 2, 2, 1]);
        assert!(series.complete);

        let dih = diagram("nodes: a b\nedge: a b inf");
        let series = enumerate_by_length(&dih, 4).unwrap();
        assert_eq!(series.coefficients, vec![1, 2, 2, 2, 2]);
        assert!(!series.complete);
    }

    #[test]
    fn growth_polynomials() {
        assert_eq!(
            growth_polynomial_of(FiniteType::A(2)).coefficients,
            vec![1, 2, 2, 1]
        );
        let a3 = growth_polynomial_of(FiniteType::A(3));
        assert_eq!(a3.coefficients, vec![1, 3, 5, 6, 5, 3, 1]);
        assert_eq!(a3.total(), 24);
        assert_eq!(growth_polynomial_of(FiniteType::B(3)).total(), 48);
        let bad = finite_growth_polynomial(&TypeTag::Affine(crate::classify::AffineType::ATilde(2)));
        assert!(bad.is_err());
    }

    #[test]
    fn covolume_values() {
        let a1 = diagram("nodes: a");
        let sums = covolume_partial_sums(&a1, 5, 3).unwrap();
        assert!(sums.complete);
        assert_eq!(sums.sums[1], BigRational::new(BigInt::from(6), BigInt::from(5)));
        assert_eq!(sums.sums[3], BigRational::new(BigInt::from(6), BigInt::from(5)));

        let a2 = diagram("nodes: a b\nedge: a b");
        let sums = covolume_partial_sums(&a2, 2, 10).unwrap();
        assert_eq!(sums.last(), &BigRational::new(BigInt::from(21), BigInt::from(8)));

        assert!(covolume_partial_sums(&a1, 1, 3).is_err());
    }

    #[test]
    fn covolume_monotone() {
        let dih = diagram("nodes: a b\nedge: a b inf");
        let sums = covolume_partial_sums(&dih, 2, 12).unwrap();
        for w in sums.sums.windows(2) {
            assert!(w[0] <= w[1]);
        }
    }

    #[test]
    fn decimal_rendering() {
        let v = BigRational::new(BigInt::from(21), BigInt::from(8));
        assert_eq!(decimal_string(&v, 6), "2.625000");
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(decimal_string(&third, 4), "0.3333");
    }

    #[test]
    fn km_report_flags() {
        let m = builtin_family(Family::Atilde2, 4).unwrap();
        let report = km_report(&m, 7).unwrap();
        assert!(report.lattice_ok.value);
        assert!(report.finitely_presented_ok.value);
        assert!(report.simple_ok.value);
        assert!(report.kazhdan_ok.value);
        assert_eq!(report.thickness, 8);
        let (_, degrees) = report.supports.unwrap();
        assert_eq!(degrees, BTreeSet::from([4, 5, 6]));

        let low_q = km_report(&m, 3).unwrap();
        assert!(!low_q.lattice_ok.value);
        assert!(!low_q.finitely_presented_ok.value);
        assert!(low_q.kazhdan_ok.value);

        let triangle = diagram("nodes: a b c\nedge: a b\nedge: b c\nedge: a c");
        let affine = km_report(&triangle, 7).unwrap();
        assert!(!affine.simple_ok.value);
        assert!(affine.supports.is_none());
    }
}
