//! The Davis chamber `D` and its subcomplexes `D_σ`, built as order
//! complexes over the poset of spherical subsets, together with the
//! contractibility/sphere fast paths.
//!
//! `davis_chamber` and `d_sigma` materialize the order complex (vertices are
//! spherical subsets, simplices are chains under strict inclusion). For
//! cohomology the crate also carries a cubical model of the same space:
//! cells are intervals `[A, B]` of the poset, and the order complex is the
//! simplicial subdivision of that cube complex, cell by cell, so both models
//! have identical cohomology profiles. The cubical model has exponentially
//! fewer cells than the order complex has chains, which is what makes the
//! rank-13 family members computable. Equality of the two routes is enforced
//! by tests on every small corpus system.

use std::collections::HashMap;

use serde::Serialize;

use crate::classify::{all_proper_parabolics_finite, is_spherical, spherical_subsets};
use crate::cohomology::{ChainComplexBuilder, CohomologyProfile};
use crate::coxeter::{is_irreducible, CoxeterMatrix, GenSet};
use crate::error::Error;
use crate::Result;

/// Abstract finite simplicial complex given by its facets (maximal
/// simplices). Vertices carry labels for export; facets are sorted vertex-id
/// lists forming an antichain.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    facets: Vec<Vec<u32>>,
}

impl SimplicialComplex {
    /// Builds a complex with synthesized vertex labels, checking every
    /// invariant: ids in range, facets strictly increasing, no facet
    /// contained in another, every vertex used.
    pub fn from_facets(n_vertices: usize, facets: Vec<Vec<u32>>) -> Result<SimplicialComplex> {
        let labels = (0..n_vertices).map(|i| i.to_string()).collect();
        SimplicialComplex::with_labels(labels, facets)
    }

    /// Same as [`SimplicialComplex::from_facets`] with explicit labels.
    pub fn with_labels(vertices: Vec<String>, facets: Vec<Vec<u32>>) -> Result<SimplicialComplex> {
        let n = vertices.len();
        let mut used = vec![false; n];
        for facet in &facets {
            if facet.is_empty() {
                return Err(Error::MalformedComplex("empty facet".into()));
            }
            if facet.len() > 32 {
                return Err(Error::MalformedComplex("facet with more than 32 vertices".into()));
            }
            for w in facet.windows(2) {
                if w[0] >= w[1] {
                    return Err(Error::MalformedComplex(
                        "facet vertices must be strictly increasing".into(),
                    ));
                }
            }
            for &v in facet {
                if v as usize >= n {
                    return Err(Error::MalformedComplex(format!("vertex id {v} out of range")));
                }
                used[v as usize] = true;
            }
        }
        if let Some(v) = used.iter().position(|&u| !u) {
            if !facets.is_empty() || n > 0 {
                return Err(Error::MalformedComplex(format!(
                    "vertex {v} appears in no facet"
                )));
            }
        }
        // Antichain check: no facet contained in another.
        let mut by_vertex: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut order: Vec<usize> = (0..facets.len()).collect();
        order.sort_by_key(|&i| std::cmp::Reverse(facets[i].len()));
        for &i in &order {
            let facet = &facets[i];
            let smallest = facet
                .iter()
                .min_by_key(|&&v| by_vertex[v as usize].len())
                .copied()
                .expect("facet is nonempty");
            for &j in &by_vertex[smallest as usize] {
                let other = &facets[j];
                if facet.iter().all(|v| other.binary_search(v).is_ok()) {
                    return Err(Error::MalformedComplex(
                        "facet contained in another facet".into(),
                    ));
                }
            }
            for &v in facet {
                by_vertex[v as usize].push(i);
            }
        }
        Ok(SimplicialComplex { vertices, facets })
    }

    /// Internal constructor for complexes that are antichains by
    /// construction (maximal chains of a poset).
    pub(crate) fn from_maximal_chains(
        vertices: Vec<String>,
        mut facets: Vec<Vec<u32>>,
    ) -> SimplicialComplex {
        facets.sort();
        SimplicialComplex { vertices, facets }
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_labels(&self) -> &[String] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Vec<u32>] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    /// Max facet size minus one; -1 for the empty complex.
    pub fn dimension(&self) -> i32 {
        self.facets
            .iter()
            .map(|f| f.len() as i32 - 1)
            .max()
            .unwrap_or(-1)
    }
}

/// The poset of spherical subsets of S under inclusion, with stable ids
/// assigned by sorting subsets by (size, index sequence).
#[derive(Debug, Clone)]
pub struct SphericalPoset {
    sets: Vec<GenSet>,
    index: HashMap<GenSet, u32>,
}

impl SphericalPoset {
    pub fn elements(&self) -> &[GenSet] {
        &self.sets
    }

    pub fn contains(&self, set: GenSet) -> bool {
        self.index.contains_key(&set)
    }

    pub fn id(&self, set: GenSet) -> Option<u32> {
        self.index.get(&set).copied()
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }
}

/// Builds the spherical poset of a Coxeter system.
pub fn spherical_poset(m: &CoxeterMatrix) -> SphericalPoset {
    let sets = spherical_subsets(m);
    let index = sets.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
    SphericalPoset { sets, index }
}

/// Depth-first enumeration of maximal chains starting from `start`,
/// extending one element at a time inside the spherical family.
fn maximal_chains_from(
    m: &CoxeterMatrix,
    poset: &SphericalPoset,
    start: GenSet,
    out: &mut Vec<Vec<GenSet>>,
) {
    let rank = m.rank();
    let mut chain = vec![start];
    fn recurse(
        rank: usize,
        poset: &SphericalPoset,
        chain: &mut Vec<GenSet>,
        out: &mut Vec<Vec<GenSet>>,
    ) {
        let top = *chain.last().expect("chain is nonempty");
        let mut extended = false;
        for x in 0..rank {
            if !top.contains(x) && poset.contains(top.insert(x)) {
                extended = true;
                chain.push(top.insert(x));
                recurse(rank, poset, chain, out);
                chain.pop();
            }
        }
        if !extended {
            out.push(chain.clone());
        }
    }
    recurse(rank, poset, &mut chain, out);
}

/// The Davis chamber: the order complex of the spherical poset. Vertices
/// are spherical subsets including the empty set; facets are maximal chains.
pub fn davis_chamber(m: &CoxeterMatrix) -> SimplicialComplex {
    let poset = spherical_poset(m);
    let mut chains = Vec::new();
    maximal_chains_from(m, &poset, GenSet::EMPTY, &mut chains);
    let labels = poset.sets.iter().map(|&s| m.set_label(s)).collect();
    let facets = chains
        .into_iter()
        .map(|chain| {
            chain
                .into_iter()
                .map(|s| poset.id(s).expect("chain elements are spherical"))
                .collect()
        })
        .collect();
    SimplicialComplex::from_maximal_chains(labels, facets)
}

/// All subsets J that contribute to the degree-support sum: J spherical with
/// non-spherical complement, ordered by (size, index sequence).
pub fn sigma_candidates(m: &CoxeterMatrix) -> Vec<GenSet> {
    let rank = m.rank();
    let mut out: Vec<GenSet> = spherical_subsets(m)
        .into_iter()
        .filter(|&j| {
            !is_spherical(m, j.complement_in(rank)).expect("complement is in range")
        })
        .collect();
    out.sort_by_key(|s| s.sort_key());
    out
}

fn check_sigma_input(m: &CoxeterMatrix, j: GenSet) -> Result<()> {
    if !j.is_subset_of(m.full_set()) {
        return Err(Error::UnknownGenerator(format!(
            "subset {:?} out of range for rank {}",
            j.indices(),
            m.rank()
        )));
    }
    if !is_spherical(m, j)? {
        return Err(Error::NotSpherical(m.set_label(j)));
    }
    Ok(())
}

/// The subcomplex D_σ for σ corresponding to the spherical subset J: the
/// full subcomplex of the Davis chamber on the nonempty spherical subsets
/// meeting S ∖ J. A chain lies in some D_s with s ∈ S ∖ J exactly when its
/// minimum meets S ∖ J, and the nested structure of chains makes that the
/// same as all its members meeting S ∖ J.
pub fn d_sigma(m: &CoxeterMatrix, j: GenSet) -> Result<SimplicialComplex> {
    check_sigma_input(m, j)?;
    let rank = m.rank();
    let complement = j.complement_in(rank);
    if complement.is_empty() {
        return Ok(SimplicialComplex::from_maximal_chains(Vec::new(), Vec::new()));
    }
    let poset = spherical_poset(m);
    let members: Vec<GenSet> = poset
        .sets
        .iter()
        .copied()
        .filter(|&t| !t.is_empty() && !t.intersection(complement).is_empty())
        .collect();
    let index: HashMap<GenSet, u32> = members
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i as u32))
        .collect();
    let mut chains = Vec::new();
    for s in complement.iter() {
        maximal_chains_from(m, &poset, GenSet::singleton(s), &mut chains);
    }
    let labels = members.iter().map(|&s| m.set_label(s)).collect();
    let facets = chains
        .into_iter()
        .map(|chain| chain.into_iter().map(|s| index[&s]).collect())
        .collect();
    Ok(SimplicialComplex::from_maximal_chains(labels, facets))
}

/// Outcome of the contractibility/sphere fast paths.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FastPath {
    Contractible,
    Sphere(i32),
    Unknown,
}

/// Fast-path prediction for the reduced cohomology of D_σ(J), with
/// K = S ∖ J: contractible when K is spherical; the cohomology of a
/// (|K| - 2)-sphere when the restriction to K is irreducible, infinite, and
/// has all proper parabolics finite; unknown otherwise.
pub fn fast_path(m: &CoxeterMatrix, j: GenSet) -> Result<FastPath> {
    check_sigma_input(m, j)?;
    let k = j.complement_in(m.rank());
    if is_spherical(m, k)? {
        return Ok(FastPath::Contractible);
    }
    let sub = m.restrict(k)?;
    if is_irreducible(&sub) && all_proper_parabolics_finite(&sub)? {
        // K is not spherical, so the irreducible restriction is infinite.
        return Ok(FastPath::Sphere(k.len() as i32 - 2));
    }
    Ok(FastPath::Unknown)
}

impl FastPath {
    /// The profile this prediction promises, when conclusive.
    pub fn predicted_profile(self) -> Option<CohomologyProfile> {
        match self {
            FastPath::Contractible => Some(CohomologyProfile::acyclic()),
            FastPath::Sphere(d) => Some(CohomologyProfile::sphere(d)),
            FastPath::Unknown => None,
        }
    }
}

/// Cubical model of D or of D_σ: one cell per interval [A, B] of the
/// spherical poset (with A required to meet S ∖ J for D_σ). Returns the
/// augmented chain complex.
fn cubical_chain_complex(m: &CoxeterMatrix, sigma: Option<GenSet>) -> ChainComplexBuilder {
    let poset = spherical_poset(m);
    let keep = |a: GenSet| match sigma {
        None => true,
        Some(j) => !a.intersection(j.complement_in(m.rank())).is_empty(),
    };

    // Enumerate cells per dimension: dim of [A, B] is |B \ A|; internal
    // chain-complex dimension is that plus one (dimension 0 is the
    // augmentation cell).
    let max_dim: usize = poset.sets.iter().map(|b| b.len()).max().unwrap_or(0);
    let mut cells: Vec<Vec<(u32, u32)>> = vec![Vec::new(); max_dim + 1];
    for &b in &poset.sets {
        // All submasks A of B, including B and the empty set.
        let bits = b.0;
        let mut a = bits;
        loop {
            if keep(GenSet(a)) {
                cells[(bits & !a).count_ones() as usize].push((a, bits));
            }
            if a == 0 {
                break;
            }
            a = (a - 1) & bits;
        }
    }
    let index: Vec<HashMap<(u32, u32), u32>> = cells
        .iter()
        .map(|level| {
            level
                .iter()
                .enumerate()
                .map(|(i, &cell)| (cell, i as u32))
                .collect()
        })
        .collect();

    let mut sizes = vec![1usize];
    for level in &cells {
        sizes.push(level.len());
    }
    let mut builder = ChainComplexBuilder::new(sizes);
    for col in 0..cells[0].len() {
        builder.push_entry(1, 0, col as u32, 1);
    }
    for d in 1..cells.len() {
        for (col, &(a, b)) in cells[d].iter().enumerate() {
            let dirs: Vec<u32> = (0..32).filter(|i| (b & !a) >> i & 1 == 1).collect();
            for (pos, &x) in dirs.iter().enumerate() {
                let sign = if pos % 2 == 0 { 1 } else { -1 };
                // Both faces are always cells: [A ∪ {x}, B] keeps A's
                // intersection with S ∖ J, and B ∖ {x} is spherical and
                // still contains A.
                let top = index[d - 1][&(a | 1 << x, b)];
                builder.push_entry(d + 1, top, col as u32, sign);
                let bottom = index[d - 1][&(a, b & !(1 << x))];
                builder.push_entry(d + 1, bottom, col as u32, -sign);
            }
        }
    }
    builder
}

/// Reduced cohomology profile of the Davis chamber, computed on the cubical
/// model. Always acyclic (the chamber is a cone over the ∅ vertex); kept as
/// an engine cross-check.
pub fn chamber_profile(m: &CoxeterMatrix) -> CohomologyProfile {
    cubical_chain_complex(m, None).build().betti()
}

/// Euler characteristic of the Davis chamber via the cubical model.
pub fn chamber_euler(m: &CoxeterMatrix) -> i64 {
    cubical_chain_complex(m, None).build().euler_characteristic()
}

/// Reduced cohomology profile of D_σ(J), computed on the cubical model.
/// Identical to `reduced_cohomology(d_sigma(m, j))`; feasible at ranks where
/// the order complex is far too large to expand.
pub fn d_sigma_profile(m: &CoxeterMatrix, j: GenSet) -> Result<CohomologyProfile> {
    check_sigma_input(m, j)?;
    if j.complement_in(m.rank()).is_empty() {
        return Ok(CohomologyProfile::empty_complex());
    }
    Ok(cubical_chain_complex(m, Some(j)).build().betti())
}

/// Euler characteristic of D_σ(J) via the cubical model.
pub fn d_sigma_euler(m: &CoxeterMatrix, j: GenSet) -> Result<i64> {
    check_sigma_input(m, j)?;
    Ok(cubical_chain_complex(m, Some(j)).build().euler_characteristic())
}
