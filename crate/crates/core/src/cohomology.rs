//! Exact reduced cohomology of finite complexes over the rationals.
//!
//! The engine works on augmented chain complexes over the integers. Betti
//! numbers are obtained from boundary ranks; coboundary ranks are the same
//! numbers by transposition, and over a field of characteristic zero the
//! reduced cohomology dimensions equal the reduced homology dimensions, which
//! is what the degree-support computations consume.
//!
//! Rank computation is exact and integer-preserving throughout: pairs of
//! cells joined by a ±1 boundary coefficient are eliminated one at a time
//! (each elimination splits off an acyclic two-term summand, so homology is
//! unchanged), and whatever remains is finished by fraction-free elimination
//! over big integers. No floating point anywhere.

use std::collections::{BTreeMap, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::davis::SimplicialComplex;

/// Reduced rational Betti numbers indexed by degree (>= -1). Absent degrees
/// are zero. Degree -1 is one-dimensional exactly for the empty complex.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct CohomologyProfile {
    betti: BTreeMap<i32, u64>,
}

impl CohomologyProfile {
    pub fn from_pairs(pairs: &[(i32, u64)]) -> CohomologyProfile {
        let mut betti = BTreeMap::new();
        for &(d, v) in pairs {
            if v > 0 {
                betti.insert(d, v);
            }
        }
        CohomologyProfile { betti }
    }

    /// The profile of a complex with the reduced cohomology of a d-sphere.
    pub fn sphere(d: i32) -> CohomologyProfile {
        CohomologyProfile::from_pairs(&[(d, 1)])
    }

    /// The profile of an acyclic (e.g. contractible) complex.
    pub fn acyclic() -> CohomologyProfile {
        CohomologyProfile::default()
    }

    /// The profile of the empty complex.
    pub fn empty_complex() -> CohomologyProfile {
        CohomologyProfile::from_pairs(&[(-1, 1)])
    }

    pub fn get(&self, degree: i32) -> u64 {
        self.betti.get(&degree).copied().unwrap_or(0)
    }

    pub fn is_acyclic(&self) -> bool {
        self.betti.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.betti.iter().map(|(&d, &v)| (d, v))
    }

    /// Alternating sum Σ (-1)^k β̃_k over k >= 0, plus the degree -1 term;
    /// used for Euler-characteristic consistency checks.
    pub fn reduced_euler(&self) -> i64 {
        self.iter()
            .map(|(d, v)| if d.rem_euclid(2) == 0 { v as i64 } else { -(v as i64) })
            .sum()
    }
}

impl fmt::Display for CohomologyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.betti.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .betti
            .iter()
            .map(|(d, v)| format!("H~{d}=Q^{v}"))
            .collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Assembles an augmented chain complex. Internal dimension k holds the
/// cells of degree k - 1, so dimension 0 is the single augmentation cell.
pub struct ChainComplexBuilder {
    sizes: Vec<usize>,
    entries: Vec<Vec<(u32, u32, i64)>>,
}

impl ChainComplexBuilder {
    /// `sizes[k]` is the number of cells of internal dimension k; `sizes[0]`
    /// must be 1 (the augmentation cell) unless the complex is empty.
    pub fn new(sizes: Vec<usize>) -> ChainComplexBuilder {
        let entries = (0..sizes.len()).map(|_| Vec::new()).collect();
        ChainComplexBuilder { sizes, entries }
    }

    /// Records boundary coefficient `coeff` of cell `col` (dimension `k`)
    /// on cell `row` (dimension `k - 1`).
    pub fn push_entry(&mut self, k: usize, row: u32, col: u32, coeff: i64) {
        debug_assert!(k >= 1 && k < self.sizes.len());
        debug_assert!((row as usize) < self.sizes[k - 1]);
        debug_assert!((col as usize) < self.sizes[k]);
        debug_assert!(coeff != 0);
        self.entries[k].push((row, col, coeff));
    }

    pub fn build(self) -> ChainComplex {
        let mut mats = Vec::with_capacity(self.sizes.len());
        for (k, list) in self.entries.iter().enumerate() {
            let ncols = self.sizes[k];
            let nrows = if k == 0 { 0 } else { self.sizes[k - 1] };
            let mut cols: Vec<Vec<(u32, i64)>> = vec![Vec::new(); ncols];
            let mut rows: Vec<Vec<u32>> = vec![Vec::new(); nrows];
            for &(r, c, v) in list {
                cols[c as usize].push((r, v));
                rows[r as usize].push(c);
            }
            for col in &mut cols {
                col.sort_unstable_by_key(|&(r, _)| r);
            }
            mats.push(SparseMat { cols, rows });
        }
        ChainComplex {
            sizes: self.sizes,
            mats,
        }
    }
}

struct SparseMat {
    /// Exact column contents, sorted by row id.
    cols: Vec<Vec<(u32, i64)>>,
    /// For each row, columns that may contain it (stale entries tolerated).
    rows: Vec<Vec<u32>>,
}

impl SparseMat {
    fn coeff(&self, row: u32, col: u32) -> i64 {
        match self.cols[col as usize].binary_search_by_key(&row, |&(r, _)| r) {
            Ok(pos) => self.cols[col as usize][pos].1,
            Err(_) => 0,
        }
    }
}

/// An augmented chain complex over the integers, with in-place homology-
/// preserving reduction.
pub struct ChainComplex {
    sizes: Vec<usize>,
    mats: Vec<SparseMat>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Candidate {
    /// Column `cell` in matrix `k` might have a single entry.
    Col { k: usize, cell: u32 },
    /// Row `cell` in matrix `k` might have a single entry.
    Row { k: usize, cell: u32 },
}

impl ChainComplex {
    pub fn dims(&self) -> usize {
        self.sizes.len()
    }

    /// Alternating cell count Σ (-1)^(k-1) sizes[k] over k >= 1, i.e. the
    /// Euler characteristic of the underlying space.
    pub fn euler_characteristic(&self) -> i64 {
        self.sizes
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &n)| if (k - 1) % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Verifies ∂∘∂ = 0 by composing consecutive boundary matrices.
    /// Intended for tests; quadratic in the number of cells.
    pub fn check_boundary_squares_to_zero(&self) -> bool {
        for k in 2..self.dims() {
            for col in 0..self.sizes[k] {
                let mut acc: BTreeMap<u32, i64> = BTreeMap::new();
                for &(mid, v) in &self.mats[k].cols[col] {
                    for &(row, w) in &self.mats[k - 1].cols[mid as usize] {
                        *acc.entry(row).or_insert(0) += v * w;
                    }
                }
                if acc.values().any(|&v| v != 0) {
                    return false;
                }
            }
        }
        true
    }

    /// Reduces the complex and returns the reduced Betti numbers, indexed by
    /// degree = internal dimension - 1.
    pub fn betti(mut self) -> CohomologyProfile {
        let mut alive: Vec<Vec<bool>> = self.sizes.iter().map(|&n| vec![true; n]).collect();
        let mut queue: VecDeque<Candidate> = VecDeque::new();

        for k in 1..self.dims() {
            for cell in 0..self.sizes[k] {
                if self.mats[k].cols[cell].len() <= 1 {
                    queue.push_back(Candidate::Col { k, cell: cell as u32 });
                }
            }
            for cell in 0..self.sizes[k - 1] {
                if self.mats[k].rows[cell].len() <= 1 {
                    queue.push_back(Candidate::Row { k, cell: cell as u32 });
                }
            }
        }

        loop {
            while let Some(cand) = queue.pop_front() {
                match cand {
                    Candidate::Col { k, cell } => {
                        if !alive[k][cell as usize] {
                            continue;
                        }
                        let col = &self.mats[k].cols[cell as usize];
                        if col.len() == 1 && col[0].1.abs() == 1 {
                            let row = col[0].0;
                            self.reduce_pair(k, row, cell, &mut alive, &mut queue);
                        }
                    }
                    Candidate::Row { k, cell } => {
                        if !alive[k - 1][cell as usize] {
                            continue;
                        }
                        let cols = self.live_cols_for_row(k, cell);
                        if cols.len() == 1 {
                            let col = cols[0];
                            if self.mats[k].coeff(cell, col).abs() == 1 {
                                self.reduce_pair(k, cell, col, &mut alive, &mut queue);
                            }
                        }
                    }
                }
            }
            // No free pairs left: pick the cheapest remaining unit pivot.
            match self.find_unit_pivot(&alive) {
                Some((k, row, col)) => {
                    self.reduce_pair(k, row, col, &mut alive, &mut queue);
                }
                None => break,
            }
        }

        // Residual ranks by fraction-free elimination.
        let mut ranks = vec![0usize; self.dims() + 1];
        for k in 1..self.dims() {
            ranks[k] = self.residual_rank(k, &alive);
        }
        let mut pairs = Vec::new();
        for k in 0..self.dims() {
            let alive_count = alive[k].iter().filter(|&&a| a).count();
            let b = alive_count - ranks[k] - ranks[k + 1];
            pairs.push((k as i32 - 1, b as u64));
        }
        CohomologyProfile::from_pairs(&pairs)
    }

    /// Live columns of matrix `k` containing `row`, deduplicated; also
    /// compacts the lazy row index as a side effect.
    fn live_cols_for_row(&mut self, k: usize, row: u32) -> Vec<u32> {
        let raw = std::mem::take(&mut self.mats[k].rows[row as usize]);
        let mut live: Vec<u32> = raw
            .into_iter()
            .filter(|&c| self.mats[k].coeff(row, c) != 0)
            .collect();
        live.sort_unstable();
        live.dedup();
        self.mats[k].rows[row as usize] = live.clone();
        live
    }

    /// Eliminates the pair (row cell `a` of dim k-1, column cell `b` of dim
    /// k) whose shared coefficient is ±1. Homology is preserved: the
    /// complex splits off an acyclic summand spanned by b and ∂b.
    fn reduce_pair(
        &mut self,
        k: usize,
        a: u32,
        b: u32,
        alive: &mut [Vec<bool>],
        queue: &mut VecDeque<Candidate>,
    ) {
        let lambda = self.mats[k].coeff(a, b);
        debug_assert!(lambda.abs() == 1, "pivot must be a unit");
        let col_b = std::mem::take(&mut self.mats[k].cols[b as usize]);

        // Clear the a-entry of every other column, adding -mu/lambda times
        // column b.
        let affected = self.live_cols_for_row(k, a);
        for c in affected {
            if c == b {
                continue;
            }
            let mu = self.mats[k].coeff(a, c);
            if mu == 0 {
                continue;
            }
            let factor = -mu / lambda; // exact: lambda = ±1
            let merged = merge_scaled(&self.mats[k].cols[c as usize], &col_b, factor);
            for &(r, _) in &merged {
                if self.mats[k].coeff(r, c) == 0 {
                    self.mats[k].rows[r as usize].push(c);
                }
            }
            let col = &mut self.mats[k].cols[c as usize];
            *col = merged;
            let nnz = col.len();
            if nnz <= 1 {
                queue.push_back(Candidate::Col { k, cell: c });
            }
        }
        // Rows of column b lost an incidence; they may have become free.
        for &(r, _) in &col_b {
            if r != a && alive[k - 1][r as usize] {
                queue.push_back(Candidate::Row { k, cell: r });
            }
        }

        alive[k][b as usize] = false;
        alive[k - 1][a as usize] = false;
        self.mats[k].rows[a as usize].clear();

        // a disappears as a column of the matrix below.
        if k >= 2 {
            let col_a = std::mem::take(&mut self.mats[k - 1].cols[a as usize]);
            for &(r, _) in &col_a {
                if alive[k - 2][r as usize] {
                    queue.push_back(Candidate::Row { k: k - 1, cell: r });
                }
            }
        }
        // b disappears as a row of the matrix above; coefficients of the
        // other cells are unchanged (∂∂ = 0 makes the b-component of every
        // boundary vanish in the new basis).
        if k + 1 < self.dims() {
            let cols_above = std::mem::take(&mut self.mats[k + 1].rows[b as usize]);
            for c in cols_above {
                let col = &mut self.mats[k + 1].cols[c as usize];
                if let Ok(pos) = col.binary_search_by_key(&b, |&(r, _)| r) {
                    col.remove(pos);
                    if col.len() <= 1 {
                        queue.push_back(Candidate::Col { k: k + 1, cell: c });
                    }
                }
            }
        }
    }

    /// Finds a ±1 entry minimizing a Markowitz-style fill estimate.
    fn find_unit_pivot(&mut self, alive: &[Vec<bool>]) -> Option<(usize, u32, u32)> {
        let mut best: Option<(usize, usize, u32, u32)> = None;
        for k in 1..self.dims() {
            for col in 0..self.sizes[k] {
                if !alive[k][col] || self.mats[k].cols[col].is_empty() {
                    continue;
                }
                let col_nnz = self.mats[k].cols[col].len();
                for idx in 0..self.mats[k].cols[col].len() {
                    let (row, v) = self.mats[k].cols[col][idx];
                    if v.abs() != 1 {
                        continue;
                    }
                    let row_nnz = self.live_cols_for_row(k, row).len();
                    let fill = (col_nnz - 1) * (row_nnz - 1);
                    if best.is_none_or(|(f, ..)| fill < f) {
                        best = Some((fill, k, row, col as u32));
                        if fill == 0 {
                            return Some((k, row, col as u32));
                        }
                    }
                }
            }
        }
        best.map(|(_, k, row, col)| (k, row, col))
    }

    fn residual_rank(&self, k: usize, alive: &[Vec<bool>]) -> usize {
        let mut rows: Vec<Vec<(u32, BigInt)>> = Vec::new();
        for col in 0..self.sizes[k] {
            if !alive[k][col] {
                continue;
            }
            let entries = &self.mats[k].cols[col];
            if !entries.is_empty() {
                rows.push(entries.iter().map(|&(r, v)| (r, BigInt::from(v))).collect());
            }
        }
        fraction_free_rank(rows)
    }
}

/// target + factor * addend over sorted sparse vectors, dropping zeros.
fn merge_scaled(
    target: &[(u32, i64)],
    addend: &[(u32, i64)],
    factor: i64,
) -> Vec<(u32, i64)> {
    let mut out = Vec::with_capacity(target.len() + addend.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < addend.len() {
        if j == addend.len() || (i < target.len() && target[i].0 < addend[j].0) {
            out.push(target[i]);
            i += 1;
        } else if i == target.len() || addend[j].0 < target[i].0 {
            let v = addend[j]
                .1
                .checked_mul(factor)
                .expect("boundary coefficient overflow");
            out.push((addend[j].0, v));
            j += 1;
        } else {
            let v = target[i]
                .1
                .checked_add(
                    addend[j]
                        .1
                        .checked_mul(factor)
                        .expect("boundary coefficient overflow"),
                )
                .expect("boundary coefficient overflow");
            if v != 0 {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Exact rank of an integer matrix given as sparse rows, by fraction-free
/// elimination with gcd-reduced multipliers.
pub fn fraction_free_rank(mut rows: Vec<Vec<(u32, BigInt)>>) -> usize {
    let mut rank = 0;
    loop {
        rows.retain(|r| !r.is_empty());
        if rows.is_empty() {
            return rank;
        }
        // Pivot on the shortest row, smallest leading magnitude.
        let mut best = 0;
        for i in 1..rows.len() {
            let better = (rows[i].len(), rows[i][0].1.abs())
                < (rows[best].len(), rows[best][0].1.abs());
            if better {
                best = i;
            }
        }
        let pivot_row = rows.swap_remove(best);
        let (pcol, pval) = (pivot_row[0].0, pivot_row[0].1.clone());
        rank += 1;
        for row in &mut rows {
            let entry = row.iter().find(|&&(c, _)| c == pcol).map(|(_, v)| v.clone());
            if let Some(val) = entry {
                let g = pval.gcd(&val);
                let row_mult = &pval / &g;
                let piv_mult = &val / &g;
                *row = merge_scaled_big(row, &row_mult, &pivot_row, &piv_mult);
            }
        }
    }
}

fn merge_scaled_big(
    target: &[(u32, BigInt)],
    target_mult: &BigInt,
    pivot: &[(u32, BigInt)],
    pivot_mult: &BigInt,
) -> Vec<(u32, BigInt)> {
    let mut out = Vec::with_capacity(target.len() + pivot.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < pivot.len() {
        if j == pivot.len() || (i < target.len() && target[i].0 < pivot[j].0) {
            out.push((target[i].0, &target[i].1 * target_mult));
            i += 1;
        } else if i == target.len() || pivot[j].0 < target[i].0 {
            out.push((pivot[j].0, -(&pivot[j].1 * pivot_mult)));
            j += 1;
        } else {
            let v = &target[i].1 * target_mult - &pivot[j].1 * pivot_mult;
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// All simplices of the complex grouped by dimension, each simplex a sorted
/// vertex list, sorted lexicographically within its dimension.
pub(crate) fn simplices_by_dim(x: &SimplicialComplex) -> Vec<Vec<Vec<u32>>> {
    let dim = x.dimension();
    if dim < 0 {
        return Vec::new();
    }
    let mut seen: Vec<HashSet<Vec<u32>>> = vec![HashSet::new(); dim as usize + 1];
    for facet in x.facets() {
        let n = facet.len();
        for mask in 1u64..(1 << n) {
            let simplex: Vec<u32> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| facet[i]).collect();
            seen[simplex.len() - 1].insert(simplex);
        }
    }
    seen.into_iter()
        .map(|set| {
            let mut v: Vec<Vec<u32>> = set.into_iter().collect();
            v.sort();
            v
        })
        .collect()
}

/// Builds the augmented simplicial chain complex with simplices sorted
/// lexicographically and boundary signs by position parity.
fn simplicial_chain_complex(x: &SimplicialComplex) -> ChainComplex {
    let by_dim = simplices_by_dim(x);
    let mut sizes = vec![1usize]; // the augmentation cell
    for level in &by_dim {
        sizes.push(level.len());
    }
    let mut builder = ChainComplexBuilder::new(sizes);
    // Vertices map to the augmentation cell with coefficient 1.
    if !by_dim.is_empty() {
        for col in 0..by_dim[0].len() {
            builder.push_entry(1, 0, col as u32, 1);
        }
    }
    for d in 1..by_dim.len() {
        let lower: BTreeMap<&[u32], u32> = by_dim[d - 1]
            .iter()
            .enumerate()
            .map(|(i, s)| (s.as_slice(), i as u32))
            .collect();
        for (col, simplex) in by_dim[d].iter().enumerate() {
            for omit in 0..simplex.len() {
                let mut face = simplex.clone();
                face.remove(omit);
                let row = lower[face.as_slice()];
                let sign = if omit % 2 == 0 { 1 } else { -1 };
                builder.push_entry(d + 1, row, col as u32, sign);
            }
        }
    }
    builder.build()
}

/// Reduced rational cohomology of a finite simplicial complex, including the
/// degree -1 class of the empty complex.
pub fn reduced_cohomology(x: &SimplicialComplex) -> CohomologyProfile {
    if x.is_empty() {
        return CohomologyProfile::empty_complex();
    }
    simplicial_chain_complex(x).betti()
}

/// Euler characteristic Σ (-1)^d (number of d-simplices); 0 for the empty
/// complex.
pub fn euler_characteristic(x: &SimplicialComplex) -> i64 {
    simplices_by_dim(x)
        .iter()
        .enumerate()
        .map(|(d, level)| {
            if d % 2 == 0 {
                level.len() as i64
            } else {
                -(level.len() as i64)
            }
        })
        .sum()
}
