//! Degree supports of L²-Betti numbers: per-σ topological coefficients for
//! the complete group, the Künneth square for the product, and the lattice
//! transfer, plus the measure-equivalence comparison of degree sets.
//!
//! The analytic factors multiplying each topological coefficient are
//! positive for thickness above the recorded q-threshold but have no closed
//! form, so the toolkit reports in which degrees the L²-Betti numbers are
//! nonzero, never their values.

use std::collections::{BTreeMap, BTreeSet};

use crate::classify::is_spherical;
use crate::coxeter::{is_irreducible, CoxeterMatrix, GenSet};
use crate::davis::{d_sigma_profile, fast_path, sigma_candidates};
use crate::error::Error;
use crate::Result;

/// Per-degree topological coefficients Σ_σ dim H̃^{k-1}(D_σ), with the
/// q-threshold above which every analytic factor is positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BettiSupport {
    rank: usize,
    q_threshold: u64,
    /// degree k -> contributions (J, dim H̃^{k-1}(D_σ(J))), positive dims
    /// only, in candidate order.
    coefficients: BTreeMap<usize, Vec<(GenSet, u64)>>,
}

impl BettiSupport {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// 2^(|S|-1): the thickness bound above which all multiplicities are
    /// positive, |S|-1 being the building dimension.
    pub fn q_threshold(&self) -> u64 {
        self.q_threshold
    }

    /// Degrees with a positive total coefficient.
    pub fn degrees(&self) -> BTreeSet<usize> {
        self.coefficients.keys().copied().collect()
    }

    /// Total topological coefficient in one degree.
    pub fn total_coefficient(&self, degree: usize) -> u64 {
        self.coefficients
            .get(&degree)
            .map(|v| v.iter().map(|&(_, d)| d).sum())
            .unwrap_or(0)
    }

    /// degree -> total coefficient, for every supported degree.
    pub fn totals(&self) -> BTreeMap<usize, u64> {
        self.coefficients
            .keys()
            .map(|&k| (k, self.total_coefficient(k)))
            .collect()
    }

    /// Every contribution (J, degree, dim), ordered by degree then by the
    /// deterministic candidate order.
    pub fn detail(&self) -> Vec<(GenSet, usize, u64)> {
        self.coefficients
            .iter()
            .flat_map(|(&k, v)| v.iter().map(move |&(j, d)| (j, k, d)))
            .collect()
    }
}

/// Aggregates the D_σ cohomology over all σ candidates into per-degree
/// coefficients: a class in H̃^{k-1}(D_σ) contributes at degree k.
///
/// The fast paths settle most candidates; the rest go through the full
/// cubical computation. Requires an irreducible system with infinite W.
pub fn betti_support(m: &CoxeterMatrix) -> Result<BettiSupport> {
    if m.rank() == 0 {
        return Err(Error::EmptySystem);
    }
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible("degree supports need a connected diagram".into()));
    }
    if is_spherical(m, m.full_set())? {
        return Err(Error::FiniteWeylGroup);
    }
    let mut coefficients: BTreeMap<usize, Vec<(GenSet, u64)>> = BTreeMap::new();
    for j in sigma_candidates(m) {
        let profile = match fast_path(m, j)?.predicted_profile() {
            Some(p) => p,
            None => d_sigma_profile(m, j)?,
        };
        for (degree, dim) in profile.iter() {
            debug_assert!(degree >= 0, "candidates never yield the empty complex");
            let k = (degree + 1) as usize;
            debug_assert!(k >= 1 && k < m.rank());
            coefficients.entry(k).or_default().push((j, dim));
        }
    }
    Ok(BettiSupport {
        rank: m.rank(),
        q_threshold: 1u64 << (m.rank() - 1),
        coefficients,
    })
}

/// Künneth square: convolution of the per-degree totals with themselves,
/// giving the degree supports for G × G.
pub fn kunneth_square(support: &BettiSupport) -> BTreeMap<usize, u64> {
    let totals = support.totals();
    let mut out: BTreeMap<usize, u64> = BTreeMap::new();
    for (&i, &ci) in &totals {
        for (&j, &cj) in &totals {
            *out.entry(i + j).or_insert(0) += ci * cj;
        }
    }
    out
}

/// Degrees in which the L²-Betti numbers of a lattice in G × G are positive
/// for q above the threshold: the support of the Künneth square.
pub fn lattice_degrees(m: &CoxeterMatrix) -> Result<BTreeSet<usize>> {
    let support = betti_support(m)?;
    let degrees: BTreeSet<usize> = kunneth_square(&support).keys().copied().collect();
    // Vanishing bound: continuous cohomology dies at |S| and above, so the
    // square is supported strictly below 2|S| - 1.
    debug_assert!(degrees.iter().all(|&k| k <= 2 * (m.rank() - 1)));
    Ok(degrees)
}

/// Verdict of comparing two lattice degree sets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeVerdict {
    /// Different supports force non-proportional L²-Betti sequences, which
    /// rules out measure equivalence.
    Distinguishable,
    /// Equal supports prove nothing: the coefficients contain unknown
    /// positive analytic factors.
    Inconclusive,
}

impl std::fmt::Display for MeVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            MeVerdict::Distinguishable => write!(f, "distinguishable"),
            MeVerdict::Inconclusive => write!(f, "inconclusive"),
        }
    }
}

/// Compares degree sets for measure-equivalence distinguishability.
pub fn me_compare(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> MeVerdict {
    if a == b {
        MeVerdict::Inconclusive
    } else {
        MeVerdict::Distinguishable
    }
}

#[cfg(test)]
impl BettiSupport {
    /// Test-only constructor from bare totals.
    fn from_totals(rank: usize, totals: &[(usize, u64)]) -> BettiSupport {
        let coefficients = totals
            .iter()
            .map(|&(k, c)| (k, vec![(GenSet::EMPTY, c)]))
            .collect();
        BettiSupport {
            rank,
            q_threshold: 1u64 << (rank - 1),
            coefficients,
        }
    }
}
