//! Recognition of finite and affine irreducible Coxeter types, spherical
//! subset enumeration, sphericity, and the randomized classification scan.
//!
//! Type recognition works by structural matching of the labeled diagram
//! against the classification tables rather than by definiteness of the
//! cosine matrix: every finite or affine diagram is a labeled tree or a
//! single unlabeled cycle, so canonical matching of paths, stars and
//! double-forks covers the tables exactly with integer arithmetic only.

use std::collections::HashSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::coxeter::{irreducible_components, is_irreducible, CoxeterMatrix, GenSet, INFINITE};
use crate::error::Error;
use crate::Result;

/// Finite irreducible types (within this crate's naming, rank-2 groups with
/// m >= 5 are reported as I2(m)).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteType {
    A(usize),
    B(usize),
    D(usize),
    E6,
    E7,
    E8,
    F4,
    H3,
    H4,
    I2(u32),
}

impl FiniteType {
    /// Exponents of the reflection group; the order is the product of
    /// (exponent + 1).
    pub fn exponents(self) -> Vec<u64> {
        match self {
            FiniteType::A(n) => (1..=n as u64).collect(),
            FiniteType::B(n) => (1..=n as u64).map(|i| 2 * i - 1).collect(),
            FiniteType::D(n) => {
                let mut e: Vec<u64> = (1..n as u64).map(|i| 2 * i - 1).collect();
                e.push(n as u64 - 1);
                e.sort_unstable();
                e
            }
            FiniteType::E6 => vec![1, 4, 5, 7, 8, 11],
            FiniteType::E7 => vec![1, 5, 7, 9, 11, 13, 17],
            FiniteType::E8 => vec![1, 7, 11, 13, 17, 19, 23, 29],
            FiniteType::F4 => vec![1, 5, 7, 11],
            FiniteType::H3 => vec![1, 5, 9],
            FiniteType::H4 => vec![1, 11, 19, 29],
            FiniteType::I2(m) => vec![1, m as u64 - 1],
        }
    }

    pub fn order(self) -> u64 {
        self.exponents().iter().map(|e| e + 1).product()
    }
}

impl fmt::Display for FiniteType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FiniteType::A(n) => write!(f, "A{n}"),
            FiniteType::B(n) => write!(f, "B{n}"),
            FiniteType::D(n) => write!(f, "D{n}"),
            FiniteType::E6 => write!(f, "E6"),
            FiniteType::E7 => write!(f, "E7"),
            FiniteType::E8 => write!(f, "E8"),
            FiniteType::F4 => write!(f, "F4"),
            FiniteType::H3 => write!(f, "H3"),
            FiniteType::H4 => write!(f, "H4"),
            FiniteType::I2(m) => write!(f, "I2({m})"),
        }
    }
}

/// Affine irreducible types. `ATilde(1)` is the infinite dihedral group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AffineType {
    ATilde(usize),
    BTilde(usize),
    CTilde(usize),
    DTilde(usize),
    E6Tilde,
    E7Tilde,
    E8Tilde,
    F4Tilde,
    G2Tilde,
}

impl fmt::Display for AffineType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AffineType::ATilde(n) => write!(f, "A~{n}"),
            AffineType::BTilde(n) => write!(f, "B~{n}"),
            AffineType::CTilde(n) => write!(f, "C~{n}"),
            AffineType::DTilde(n) => write!(f, "D~{n}"),
            AffineType::E6Tilde => write!(f, "E~6"),
            AffineType::E7Tilde => write!(f, "E~7"),
            AffineType::E8Tilde => write!(f, "E~8"),
            AffineType::F4Tilde => write!(f, "F~4"),
            AffineType::G2Tilde => write!(f, "G~2"),
        }
    }
}

/// Classification verdict for an irreducible system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeTag {
    Finite(FiniteType),
    Affine(AffineType),
    Indefinite { all_proper_parabolics_finite: bool },
}

impl TypeTag {
    pub fn is_finite(self) -> bool {
        matches!(self, TypeTag::Finite(_))
    }

    pub fn is_affine(self) -> bool {
        matches!(self, TypeTag::Affine(_))
    }
}

impl fmt::Display for TypeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TypeTag::Finite(t) => write!(f, "{t}"),
            TypeTag::Affine(t) => write!(f, "{t}"),
            TypeTag::Indefinite {
                all_proper_parabolics_finite,
            } => write!(
                f,
                "indefinite(all_proper_parabolics_finite={all_proper_parabolics_finite})"
            ),
        }
    }
}

/// Table verdict without the indefinite flag; this is the non-recursive core
/// used by finiteness checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Shape {
    Finite(FiniteType),
    Affine(AffineType),
    Indefinite,
}

fn classify_rank2(m: u32) -> Shape {
    match m {
        2 => unreachable!("irreducible rank-2 systems have an edge"),
        3 => Shape::Finite(FiniteType::A(2)),
        4 => Shape::Finite(FiniteType::B(2)),
        INFINITE => Shape::Affine(AffineType::ATilde(1)),
        m => Shape::Finite(FiniteType::I2(m)),
    }
}

/// Canonical label sequence of a path: the lexicographically smaller of the
/// two reading directions.
fn canonical_path_labels(m: &CoxeterMatrix, order: &[usize]) -> Vec<u32> {
    let labels: Vec<u32> = order
        .windows(2)
        .map(|w| m.entry(w[0], w[1]))
        .collect();
    let mut rev = labels.clone();
    rev.reverse();
    labels.min(rev)
}

fn classify_path(labels: &[u32]) -> Shape {
    let n = labels.len() + 1;
    if labels.iter().all(|&l| l == 3) {
        return Shape::Finite(FiniteType::A(n));
    }
    let fours = labels.iter().filter(|&&l| l == 4).count();
    let threes = labels.iter().filter(|&&l| l == 3).count();
    if fours + threes == labels.len() {
        if fours == 1 && *labels.last().unwrap() == 4 {
            return Shape::Finite(FiniteType::B(n));
        }
        if fours == 2 && labels[0] == 4 && *labels.last().unwrap() == 4 {
            return Shape::Affine(AffineType::CTilde(n - 1));
        }
        if labels == [3, 4, 3] {
            return Shape::Finite(FiniteType::F4);
        }
        if labels == [3, 3, 4, 3] {
            return Shape::Affine(AffineType::F4Tilde);
        }
        return Shape::Indefinite;
    }
    match labels {
        [3, 5] => Shape::Finite(FiniteType::H3),
        [3, 3, 5] => Shape::Finite(FiniteType::H4),
        [3, 6] => Shape::Affine(AffineType::G2Tilde),
        _ => Shape::Indefinite,
    }
}

/// One arm of a star-shaped tree: the edge labels read outward from the
/// branch vertex.
fn walk_arm(m: &CoxeterMatrix, branch: usize, first: usize, degree: &[usize]) -> Vec<u32> {
    let mut labels = vec![m.entry(branch, first)];
    let mut prev = branch;
    let mut cur = first;
    while degree[cur] == 2 {
        let next = (0..m.rank())
            .find(|&j| j != prev && m.has_edge(cur, j))
            .expect("degree-2 vertex has a second neighbor");
        labels.push(m.entry(cur, next));
        prev = cur;
        cur = next;
    }
    labels
}

fn classify_tree(m: &CoxeterMatrix) -> Shape {
    let n = m.rank();
    let degree: Vec<usize> = (0..n)
        .map(|i| (0..n).filter(|&j| m.has_edge(i, j)).count())
        .collect();
    let branches: Vec<usize> = (0..n).filter(|&i| degree[i] >= 3).collect();

    match branches.len() {
        0 => {
            // A path: walk from one endpoint.
            let start = (0..n).find(|&i| degree[i] == 1).expect("path has endpoints");
            let mut order = vec![start];
            let mut prev = usize::MAX;
            let mut cur = start;
            while order.len() < n {
                let next = (0..n)
                    .find(|&j| j != prev && m.has_edge(cur, j))
                    .expect("path is connected");
                order.push(next);
                prev = cur;
                cur = next;
            }
            classify_path(&canonical_path_labels(m, &order))
        }
        1 => {
            let v = branches[0];
            if degree[v] >= 5 {
                return Shape::Indefinite;
            }
            let mut arms: Vec<Vec<u32>> = (0..n)
                .filter(|&j| m.has_edge(v, j))
                .map(|j| walk_arm(m, v, j, &degree))
                .collect();
            arms.sort();
            if degree[v] == 4 {
                return if arms.iter().all(|a| a[..] == [3]) {
                    Shape::Affine(AffineType::DTilde(4))
                } else {
                    Shape::Indefinite
                };
            }
            // Degree 3. All-label-3 stars first.
            if arms.iter().all(|a| a.iter().all(|&l| l == 3)) {
                let mut lens: Vec<usize> = arms.iter().map(|a| a.len()).collect();
                lens.sort_unstable();
                return match (lens[0], lens[1], lens[2]) {
                    (1, 1, _) => Shape::Finite(FiniteType::D(n)),
                    (1, 2, 2) => Shape::Finite(FiniteType::E6),
                    (1, 2, 3) => Shape::Finite(FiniteType::E7),
                    (1, 2, 4) => Shape::Finite(FiniteType::E8),
                    (2, 2, 2) => Shape::Affine(AffineType::E6Tilde),
                    (1, 3, 3) => Shape::Affine(AffineType::E7Tilde),
                    (1, 2, 5) => Shape::Affine(AffineType::E8Tilde),
                    _ => Shape::Indefinite,
                };
            }
            // The only branched type with a non-3 label: a fork of two
            // 3-labeled leaves plus one arm whose outermost edge is 4.
            if arms.len() == 3 && arms[0][..] == [3] && arms[1][..] == [3] {
                let tail = &arms[2];
                let inner_ok = tail[..tail.len() - 1].iter().all(|&l| l == 3);
                if inner_ok && *tail.last().unwrap() == 4 {
                    return Shape::Affine(AffineType::BTilde(tail.len() + 2));
                }
            }
            Shape::Indefinite
        }
        2 => {
            let (u, v) = (branches[0], branches[1]);
            if degree[u] != 3 || degree[v] != 3 {
                return Shape::Indefinite;
            }
            let all_threes = (0..n)
                .all(|i| (0..n).all(|j| !m.has_edge(i, j) || m.entry(i, j) == 3));
            let fork = |w: usize| {
                (0..n)
                    .filter(|&j| m.has_edge(w, j) && degree[j] == 1)
                    .count()
                    == 2
            };
            if all_threes && fork(u) && fork(v) {
                Shape::Affine(AffineType::DTilde(n - 1))
            } else {
                Shape::Indefinite
            }
        }
        _ => Shape::Indefinite,
    }
}

/// Table classification of a connected diagram, without computing the
/// indefinite parabolic flag.
fn classify_shape(m: &CoxeterMatrix) -> Shape {
    let n = m.rank();
    debug_assert!(n >= 1);
    if n == 1 {
        return Shape::Finite(FiniteType::A(1));
    }
    if n == 2 {
        return classify_rank2(m.entry(0, 1));
    }
    let mut edge_count = 0usize;
    let mut has_infinite = false;
    for i in 0..n {
        for j in i + 1..n {
            if m.has_edge(i, j) {
                edge_count += 1;
                if m.entry(i, j) == INFINITE {
                    has_infinite = true;
                }
            }
        }
    }
    if has_infinite {
        return Shape::Indefinite;
    }
    if edge_count >= n {
        // Connected with a cycle: the only table entry is the full cycle
        // with unlabeled edges.
        let degrees_ok = (0..n).all(|i| (0..n).filter(|&j| m.has_edge(i, j)).count() == 2);
        let labels_ok = (0..n).all(|i| (0..n).all(|j| !m.has_edge(i, j) || m.entry(i, j) == 3));
        if edge_count == n && degrees_ok && labels_ok {
            return Shape::Affine(AffineType::ATilde(n - 1));
        }
        return Shape::Indefinite;
    }
    classify_tree(m)
}

fn shape_is_finite(m: &CoxeterMatrix) -> bool {
    matches!(classify_shape(m), Shape::Finite(_))
}

/// Classifies an irreducible system as finite, affine, or indefinite; for
/// indefinite systems the flag records whether every proper parabolic
/// subgroup is finite.
pub fn classify_irreducible(m: &CoxeterMatrix) -> Result<TypeTag> {
    if m.rank() == 0 {
        return Err(Error::EmptySystem);
    }
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible(format!(
            "diagram has {} components",
            irreducible_components(m).len()
        )));
    }
    Ok(match classify_shape(m) {
        Shape::Finite(t) => TypeTag::Finite(t),
        Shape::Affine(t) => TypeTag::Affine(t),
        Shape::Indefinite => TypeTag::Indefinite {
            all_proper_parabolics_finite: all_maximal_proper_spherical(m),
        },
    })
}

fn all_maximal_proper_spherical(m: &CoxeterMatrix) -> bool {
    let full = m.full_set();
    (0..m.rank()).all(|i| is_spherical_unchecked(m, full.remove(i)))
}

fn is_spherical_unchecked(m: &CoxeterMatrix, subset: GenSet) -> bool {
    let sub = m.restrict(subset).expect("subset validated by caller");
    irreducible_components(&sub)
        .iter()
        .all(|(_, comp)| shape_is_finite(comp))
}

/// True iff the parabolic subgroup generated by `subset` is finite; the
/// empty set generates the trivial group and is spherical.
pub fn is_spherical(m: &CoxeterMatrix, subset: GenSet) -> Result<bool> {
    if !subset.is_subset_of(m.full_set()) {
        return Err(Error::UnknownGenerator(format!(
            "subset {:?} out of range for rank {}",
            subset.indices(),
            m.rank()
        )));
    }
    Ok(is_spherical_unchecked(m, subset))
}

/// All spherical subsets, including the empty set, enumerated with downward
/// closure pruning and returned sorted by (size, index sequence).
pub fn spherical_subsets(m: &CoxeterMatrix) -> Vec<GenSet> {
    let n = m.rank();
    let mut spherical: HashSet<GenSet> = HashSet::new();
    spherical.insert(GenSet::EMPTY);
    let mut level: Vec<GenSet> = vec![GenSet::EMPTY];
    while !level.is_empty() {
        let mut next_candidates: HashSet<GenSet> = HashSet::new();
        for &set in &level {
            for x in 0..n {
                if !set.contains(x) {
                    next_candidates.insert(set.insert(x));
                }
            }
        }
        let mut next_level = Vec::new();
        for cand in next_candidates {
            // A superset of a non-spherical set is never tested.
            let closed = cand.iter().all(|x| spherical.contains(&cand.remove(x)));
            if closed && is_spherical_unchecked(m, cand) {
                spherical.insert(cand);
                next_level.push(cand);
            }
        }
        level = next_level;
    }
    let mut out: Vec<GenSet> = spherical.into_iter().collect();
    out.sort_by_key(|s| s.sort_key());
    out
}

/// Inclusion-maximal spherical subsets, sorted by (size, index sequence).
pub fn maximal_finite_parabolics(m: &CoxeterMatrix) -> Vec<GenSet> {
    let family = spherical_subsets(m);
    let lookup: HashSet<GenSet> = family.iter().copied().collect();
    let n = m.rank();
    let mut out: Vec<GenSet> = family
        .into_iter()
        .filter(|&set| (0..n).all(|x| set.contains(x) || !lookup.contains(&set.insert(x))))
        .collect();
    out.sort_by_key(|s| s.sort_key());
    out
}

/// Iterates subsets of {0..n} of the given size in increasing mask order.
fn for_each_subset_of_size(n: usize, k: usize, mut f: impl FnMut(GenSet) -> bool) -> bool {
    if k == 0 {
        return f(GenSet::EMPTY);
    }
    if k > n {
        return true;
    }
    let limit: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut mask: u32 = (1 << k) - 1;
    loop {
        if !f(GenSet(mask)) {
            return false;
        }
        // Gosper's hack: next mask with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        if r == 0 {
            return true;
        }
        mask = (((r ^ mask) >> 2) / c) | r;
        if mask > limit {
            return true;
        }
    }
}

/// The largest k <= |S| such that every subset of size <= k is spherical;
/// equals |S| when W is finite.
pub fn sphericity(m: &CoxeterMatrix) -> usize {
    let n = m.rank();
    for k in 1..=n {
        let all_ok = for_each_subset_of_size(n, k, |set| is_spherical_unchecked(m, set));
        if !all_ok {
            return k - 1;
        }
    }
    n
}

/// True iff every proper subset of the generators is spherical.
/// Requires an irreducible input.
pub fn all_proper_parabolics_finite(m: &CoxeterMatrix) -> Result<bool> {
    if m.rank() == 0 {
        return Err(Error::EmptySystem);
    }
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible("input is reducible".into()));
    }
    Ok(all_maximal_proper_spherical(m))
}

/// All partitions S = J_sph ⊔ J_aff with J_sph spherical (possibly empty)
/// and restrict(M, J_aff) irreducible affine, ordered by
/// (|J_aff|, index sequence of J_aff).
pub fn find_sph_aff_partitions(m: &CoxeterMatrix) -> Result<Vec<(GenSet, GenSet)>> {
    if m.rank() == 0 {
        return Err(Error::EmptySystem);
    }
    if !is_irreducible(m) {
        return Err(Error::NotIrreducible("input is reducible".into()));
    }
    let n = m.rank();
    let mut out = Vec::new();
    for bits in 1..=GenSet::full(n).0 {
        let j_aff = GenSet(bits);
        let j_sph = j_aff.complement_in(n);
        if !is_spherical_unchecked(m, j_sph) {
            continue;
        }
        let sub = m.restrict(j_aff).expect("subset in range");
        if !is_irreducible(&sub) {
            continue;
        }
        if matches!(classify_shape(&sub), Shape::Affine(_)) {
            out.push((j_sph, j_aff));
        }
    }
    out.sort_by_key(|&(_, j_aff)| j_aff.sort_key());
    Ok(out)
}

/// A diagram found by the classification scan that is at least 9-spherical
/// yet classifies indefinite. None are expected.
#[derive(Debug, Clone)]
pub struct ScanCounterexample {
    pub sample_index: usize,
    pub matrix: CoxeterMatrix,
    pub sphericity: usize,
}

/// Labels sampled by the scan.
pub const SCAN_LABELS: [u32; 6] = [2, 3, 4, 5, 6, INFINITE];

/// Generates pseudo-random connected diagrams with edge labels uniform over
/// {2, 3, 4, 5, 6, ∞}, keeps those with sphericity >= 9, and returns any that
/// classify indefinite.
///
/// Sample i draws from an independent seeded stream, so the sequence is
/// reproducible and chunkable. Ranks cycle through the requested range.
pub fn sphericity_classification_scan(
    ranks: std::ops::RangeInclusive<usize>,
    samples: usize,
    seed: u64,
) -> Vec<ScanCounterexample> {
    let lo = *ranks.start();
    let hi = *ranks.end();
    assert!(lo >= 1 && hi >= lo && hi <= MAX_SCAN_RANK);
    let width = hi - lo + 1;
    let mut out = Vec::new();
    for i in 0..samples {
        let rank = lo + i % width;
        let m = random_connected_diagram(rank, seed, i as u64);
        if sphericity_at_least(&m, 9) {
            let tag = classify_irreducible(&m).expect("scan diagrams are connected");
            if let TypeTag::Indefinite { .. } = tag {
                out.push(ScanCounterexample {
                    sample_index: i,
                    matrix: m.clone(),
                    sphericity: sphericity(&m),
                });
            }
        }
    }
    out
}

const MAX_SCAN_RANK: usize = 20;

/// Sphericity check with early exit at the first non-spherical subset.
pub fn sphericity_at_least(m: &CoxeterMatrix, k: usize) -> bool {
    let n = m.rank();
    for size in 2..=k.min(n) {
        if !for_each_subset_of_size(n, size, |set| is_spherical_unchecked(m, set)) {
            return false;
        }
    }
    true
}

fn random_connected_diagram(rank: usize, seed: u64, stream: u64) -> CoxeterMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    loop {
        let mut m = vec![vec![2u32; rank]; rank];
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = 1;
        }
        for i in 0..rank {
            for j in i + 1..rank {
                let label = SCAN_LABELS[rng.random_range(0..SCAN_LABELS.len())];
                m[i][j] = label;
                m[j][i] = label;
            }
        }
        let generators = (0..rank).map(|i| format!("g{i}")).collect();
        let matrix = CoxeterMatrix::new(generators, m).expect("construction is valid");
        if is_irreducible(&matrix) {
            return matrix;
        }
    }
}

/// Enumerates every connected diagram on `rank` nodes with off-diagonal
/// labels drawn from `labels`, up to diagram isomorphism. Used as the test
/// corpus for rank <= 5 exhaustive properties.
pub fn all_irreducible_diagrams_up_to_iso(rank: usize, labels: &[u32]) -> Vec<CoxeterMatrix> {
    assert!(rank >= 1 && rank <= 6, "exhaustive enumeration is for small ranks");
    let pairs: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| (i + 1..rank).map(move |j| (i, j)))
        .collect();
    let perms = permutations(rank);
    let mut out = Vec::new();
    let mut assignment = vec![0usize; pairs.len()];
    loop {
        if is_canonical_assignment(&assignment, &pairs, &perms, labels, rank) {
            let mut m = vec![vec![2u32; rank]; rank];
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = 1;
            }
            for (k, &(i, j)) in pairs.iter().enumerate() {
                m[i][j] = labels[assignment[k]];
                m[j][i] = labels[assignment[k]];
            }
            let generators = (0..rank).map(|i| format!("g{i}")).collect();
            let matrix = CoxeterMatrix::new(generators, m).expect("valid by construction");
            if is_irreducible(&matrix) {
                out.push(matrix);
            }
        }
        // Next assignment in base |labels|.
        let mut pos = 0;
        loop {
            if pos == assignment.len() {
                return out;
            }
            assignment[pos] += 1;
            if assignment[pos] < labels.len() {
                break;
            }
            assignment[pos] = 0;
            pos += 1;
        }
    }
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    permute(&mut items, 0, &mut out);
    out
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// An assignment is canonical when no vertex permutation yields a
/// lexicographically smaller label vector over the ordered pair list.
fn is_canonical_assignment(
    assignment: &[usize],
    pairs: &[(usize, usize)],
    perms: &[Vec<usize>],
    labels: &[u32],
    rank: usize,
) -> bool {
    let mut pair_index = vec![vec![0usize; rank]; rank];
    for (k, &(i, j)) in pairs.iter().enumerate() {
        pair_index[i][j] = k;
        pair_index[j][i] = k;
    }
    let value = |assig: &[usize], i: usize, j: usize| labels[assig[pair_index[i][j]]];
    for perm in perms {
        for (k, &(i, j)) in pairs.iter().enumerate() {
            let permuted = value(assignment, perm[i], perm[j]);
            let original = labels[assignment[k]];
            match permuted.cmp(&original) {
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => {}
            }
        }
    }
    true
}
