//! Coxeter matrices, generalized Cartan matrices, the diagram DSL, and the
//! built-in diagram families.
//!
//! The entry convention is: `m[i][i] = 1`, off-diagonal entries are `0`
//! (meaning ∞) or integers `>= 2`. The sentinel `0` is used both in memory
//! and in the JSON schema, since JSON has no infinity literal and entries are
//! otherwise `>= 1`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::Result;

/// Off-diagonal sentinel for m = ∞.
pub const INFINITE: u32 = 0;

/// Largest supported rank. Subsets of generators are stored as `u32`
/// bitmasks, and every enumeration in the crate is exponential in rank
/// anyway.
pub const MAX_RANK: usize = 32;

/// A subset of the generator set, as a bitmask over generator indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct GenSet(pub u32);

impl GenSet {
    pub const EMPTY: GenSet = GenSet(0);

    pub fn full(rank: usize) -> GenSet {
        if rank == 0 {
            GenSet(0)
        } else {
            GenSet(u32::MAX >> (32 - rank))
        }
    }

    pub fn singleton(i: usize) -> GenSet {
        GenSet(1 << i)
    }

    pub fn from_indices(indices: &[usize]) -> GenSet {
        let mut bits = 0u32;
        for &i in indices {
            bits |= 1 << i;
        }
        GenSet(bits)
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn insert(self, i: usize) -> GenSet {
        GenSet(self.0 | 1 << i)
    }

    pub fn remove(self, i: usize) -> GenSet {
        GenSet(self.0 & !(1 << i))
    }

    pub fn union(self, other: GenSet) -> GenSet {
        GenSet(self.0 | other.0)
    }

    pub fn intersection(self, other: GenSet) -> GenSet {
        GenSet(self.0 & other.0)
    }

    pub fn difference(self, other: GenSet) -> GenSet {
        GenSet(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: GenSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn complement_in(self, rank: usize) -> GenSet {
        GenSet(GenSet::full(rank).0 & !self.0)
    }

    /// Generator indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |i| bits >> i & 1 == 1)
    }

    pub fn indices(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Sort key: size first, then the index sequence lexicographically.
    /// This is the vertex-id order used by every complex in the crate.
    pub fn sort_key(self) -> (usize, Vec<usize>) {
        (self.len(), self.indices())
    }
}

/// The symmetric matrix (m_ij) defining a Coxeter system (W, S).
///
/// Generator order is declaration order and is preserved by every operation,
/// so all outputs are deterministic.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct CoxeterMatrix {
    generators: Vec<String>,
    m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    /// Builds a matrix and checks every invariant: symmetry, unit diagonal,
    /// off-diagonal entries in {0} ∪ {2, 3, ...}, unique generator names.
    pub fn new(generators: Vec<String>, m: Vec<Vec<u32>>) -> Result<CoxeterMatrix> {
        let n = generators.len();
        if n > MAX_RANK {
            return Err(Error::RankTooLarge(n));
        }
        let mut seen = HashMap::new();
        for (i, g) in generators.iter().enumerate() {
            if g.is_empty() {
                return Err(Error::InvalidMatrix("empty generator name".into()));
            }
            if let Some(_prev) = seen.insert(g.clone(), i) {
                return Err(Error::InvalidMatrix(format!("duplicate generator name `{g}`")));
            }
        }
        if m.len() != n {
            return Err(Error::InvalidMatrix(format!(
                "matrix has {} rows for {} generators",
                m.len(),
                n
            )));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidMatrix(format!(
                    "row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for (j, &v) in row.iter().enumerate() {
                if i == j {
                    if v != 1 {
                        return Err(Error::InvalidMatrix(format!(
                            "diagonal entry m[{i}][{i}] = {v}, expected 1"
                        )));
                    }
                } else {
                    if v == 1 {
                        return Err(Error::InvalidMatrix(format!(
                            "off-diagonal entry m[{i}][{j}] = 1"
                        )));
                    }
                    if v != m[j][i] {
                        return Err(Error::InvalidMatrix(format!(
                            "asymmetric: m[{i}][{j}] = {v} but m[{j}][{i}] = {}",
                            m[j][i]
                        )));
                    }
                }
            }
        }
        Ok(CoxeterMatrix { generators, m })
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_name(&self, i: usize) -> &str {
        &self.generators[i]
    }

    /// Entry m_ij; 0 means ∞.
    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.m[i][j]
    }

    pub fn full_set(&self) -> GenSet {
        GenSet::full(self.rank())
    }

    /// True when the pair is joined by a diagram edge (m >= 3 or ∞).
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.m[i][j] != 2
    }

    /// Resolves a list of generator names to a subset.
    pub fn subset_from_names<S: AsRef<str>>(&self, names: &[S]) -> Result<GenSet> {
        let mut set = GenSet::EMPTY;
        for name in names {
            let name = name.as_ref();
            let i = self
                .generators
                .iter()
                .position(|g| g == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            set = set.insert(i);
        }
        Ok(set)
    }

    /// Human-readable label for a subset, e.g. `{s0,s2}`.
    pub fn set_label(&self, set: GenSet) -> String {
        let names: Vec<&str> = set.iter().map(|i| self.generators[i].as_str()).collect();
        format!("{{{}}}", names.join(","))
    }

    /// Principal submatrix on `subset`, generator order inherited.
    pub fn restrict(&self, subset: GenSet) -> Result<CoxeterMatrix> {
        if !subset.is_subset_of(self.full_set()) {
            return Err(Error::UnknownGenerator(format!(
                "bit {} out of range for rank {}",
                subset.difference(self.full_set()).indices()[0],
                self.rank()
            )));
        }
        let idx = subset.indices();
        let generators = idx.iter().map(|&i| self.generators[i].clone()).collect();
        let m = idx
            .iter()
            .map(|&i| idx.iter().map(|&j| self.m[i][j]).collect())
            .collect();
        CoxeterMatrix::new(generators, m)
    }

    /// Canonical JSON serialization; `parse_matrix` inverts it bit-exactly.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization cannot fail")
    }

    /// Diagram DSL serialization; `parse_diagram` inverts it.
    pub fn to_diagram(&self) -> String {
        let mut out = format!("nodes: {}\n", self.generators.join(" "));
        for i in 0..self.rank() {
            for j in i + 1..self.rank() {
                match self.m[i][j] {
                    2 => {}
                    3 => out.push_str(&format!(
                        "edge: {} {}\n",
                        self.generators[i], self.generators[j]
                    )),
                    INFINITE => out.push_str(&format!(
                        "edge: {} {} inf\n",
                        self.generators[i], self.generators[j]
                    )),
                    v => out.push_str(&format!(
                        "edge: {} {} {}\n",
                        self.generators[i], self.generators[j], v
                    )),
                }
            }
        }
        out
    }
}

impl fmt::Display for CoxeterMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CoxeterMatrix(rank {})", self.rank())
    }
}

/// A generalized Cartan matrix over an ordered index set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneralizedCartanMatrix {
    index: Vec<String>,
    a: Vec<Vec<i64>>,
}

impl GeneralizedCartanMatrix {
    /// Checks A_ii = 2, A_ij <= 0 for i ≠ j, and A_ij = 0 ⇔ A_ji = 0.
    pub fn new(index: Vec<String>, a: Vec<Vec<i64>>) -> Result<GeneralizedCartanMatrix> {
        let n = index.len();
        if n > MAX_RANK {
            return Err(Error::RankTooLarge(n));
        }
        let mut seen = HashMap::new();
        for (i, name) in index.iter().enumerate() {
            if seen.insert(name.clone(), i).is_some() {
                return Err(Error::InvalidCartan(format!("duplicate index name `{name}`")));
            }
        }
        if a.len() != n || a.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidCartan("matrix shape does not match index set".into()));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(Error::InvalidCartan(format!(
                    "diagonal entry A[{i}][{i}] = {}, expected 2",
                    a[i][i]
                )));
            }
            for j in 0..n {
                if i == j {
                    continue;
                }
                if a[i][j] > 0 {
                    return Err(Error::InvalidCartan(format!(
                        "off-diagonal entry A[{i}][{j}] = {} is positive",
                        a[i][j]
                    )));
                }
                if (a[i][j] == 0) != (a[j][i] == 0) {
                    return Err(Error::InvalidCartan(format!(
                        "A[{i}][{j}] = 0 but A[{j}][{i}] = {}",
                        a[j][i]
                    )));
                }
            }
        }
        Ok(GeneralizedCartanMatrix { index, a })
    }

    pub fn rank(&self) -> usize {
        self.index.len()
    }

    pub fn entry(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn index_names(&self) -> &[String] {
        &self.index
    }
}

/// Converts a generalized Cartan matrix to its Coxeter matrix:
/// m_ij = 2, 3, 4, 6 or ∞ as A_ij·A_ji = 0, 1, 2, 3 or is >= 4.
pub fn cartan_to_coxeter(a: &GeneralizedCartanMatrix) -> CoxeterMatrix {
    let n = a.rank();
    let mut m = vec![vec![1u32; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let p = a.entry(i, j) * a.entry(j, i);
            m[i][j] = match p {
                0 => 2,
                1 => 3,
                2 => 4,
                3 => 6,
                _ => INFINITE,
            };
        }
    }
    CoxeterMatrix::new(a.index_names().to_vec(), m)
        .expect("conversion of a valid Cartan matrix always yields a valid Coxeter matrix")
}

#[derive(Deserialize)]
struct MatrixDoc {
    generators: Vec<String>,
    m: Vec<Vec<i64>>,
}

/// Parses the JSON matrix schema: `{"generators": [...], "m": [[...]]}` with
/// nonnegative integer entries, 0 = ∞, bit-exact symmetric.
pub fn parse_matrix(bytes: &[u8]) -> Result<CoxeterMatrix> {
    let doc: MatrixDoc =
        serde_json::from_slice(bytes).map_err(|e| Error::MatrixParse(e.to_string()))?;
    let mut m = Vec::with_capacity(doc.m.len());
    for (i, row) in doc.m.iter().enumerate() {
        let mut out = Vec::with_capacity(row.len());
        for (j, &v) in row.iter().enumerate() {
            if v < 0 {
                return Err(Error::MatrixParse(format!("negative entry m[{i}][{j}] = {v}")));
            }
            out.push(v as u32);
        }
        m.push(out);
    }
    CoxeterMatrix::new(doc.generators, m)
}

/// Parses the line-oriented diagram DSL.
///
/// Grammar: one `nodes: <name>+` line, then zero or more
/// `edge: <name> <name> [<int >= 3> | inf]` lines; `#` starts a comment.
/// Unlisted pairs get m = 2, unlabeled edges m = 3, `inf` gives the sentinel
/// 0.
pub fn parse_diagram(text: &str) -> Result<CoxeterMatrix> {
    let mut generators: Option<Vec<String>> = None;
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges: HashMap<(usize, usize), u32> = HashMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        };
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.is_empty() {
            continue;
        }
        let at = |msg: String| Error::DiagramParse(format!("line {}: {msg}", lineno + 1));
        match tokens[0] {
            "nodes:" => {
                if generators.is_some() {
                    return Err(at("second `nodes:` line".into()));
                }
                if tokens.len() == 1 {
                    return Err(at("`nodes:` line declares no nodes".into()));
                }
                let mut names = Vec::new();
                for &t in &tokens[1..] {
                    if index.contains_key(t) {
                        return Err(at(format!("duplicate node name `{t}`")));
                    }
                    index.insert(t.to_string(), names.len());
                    names.push(t.to_string());
                }
                generators = Some(names);
            }
            "edge:" => {
                if generators.is_none() {
                    return Err(at("`edge:` before `nodes:`".into()));
                }
                if tokens.len() < 3 || tokens.len() > 4 {
                    return Err(at("expected `edge: <a> <b> [label]`".into()));
                }
                let a = *index
                    .get(tokens[1])
                    .ok_or_else(|| at(format!("edge references unknown node `{}`", tokens[1])))?;
                let b = *index
                    .get(tokens[2])
                    .ok_or_else(|| at(format!("edge references unknown node `{}`", tokens[2])))?;
                if a == b {
                    return Err(at(format!("edge endpoints must differ, got `{}` twice", tokens[1])));
                }
                let label = if tokens.len() == 4 {
                    if tokens[3] == "inf" {
                        INFINITE
                    } else {
                        let v: u32 = tokens[3]
                            .parse()
                            .map_err(|_| at(format!("bad edge label `{}`", tokens[3])))?;
                        if v < 3 {
                            return Err(at(format!(
                                "edge label {v} below 3 (m = 2 is the no-edge default)"
                            )));
                        }
                        v
                    }
                } else {
                    3
                };
                let key = (a.min(b), a.max(b));
                if let Some(&prev) = edges.get(&key) {
                    if prev != label {
                        return Err(at(format!(
                            "conflicting labels {prev} and {label} for pair ({}, {})",
                            tokens[1], tokens[2]
                        )));
                    }
                } else {
                    edges.insert(key, label);
                }
            }
            other => return Err(at(format!("unknown directive `{other}`"))),
        }
    }

    let generators = generators.ok_or_else(|| Error::DiagramParse("missing `nodes:` line".into()))?;
    let n = generators.len();
    let mut m = vec![vec![2u32; n]; n];
    for i in 0..n {
        m[i][i] = 1;
    }
    for ((a, b), label) in edges {
        m[a][b] = label;
        m[b][a] = label;
    }
    CoxeterMatrix::new(generators, m)
}

/// Partition of the generators into diagram-connected components, with the
/// restriction per component, ordered by smallest generator index.
pub fn irreducible_components(m: &CoxeterMatrix) -> Vec<(GenSet, CoxeterMatrix)> {
    let n = m.rank();
    let mut seen = vec![false; n];
    let mut out = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = GenSet::EMPTY;
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(i) = stack.pop() {
            comp = comp.insert(i);
            for j in 0..n {
                if !seen[j] && m.has_edge(i, j) {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        let sub = m.restrict(comp).expect("component indices are in range");
        out.push((comp, sub));
    }
    out
}

/// True when the diagram is connected and nonempty.
pub fn is_irreducible(m: &CoxeterMatrix) -> bool {
    m.rank() > 0 && irreducible_components(m).len() == 1
}

/// Built-in diagram families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    /// Cycle of n generators with one extra generator attached to two
    /// adjacent cycle nodes; rank n + 1, n >= 3.
    Atilde2,
    /// Path of n generators with final edge labeled 4 and one extra
    /// generator branching off the third path node; rank n + 1, n >= 9.
    Btilde8,
}

impl Family {
    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "atilde2" => Some(Family::Atilde2),
            "btilde8" => Some(Family::Btilde8),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Atilde2 => "atilde2",
            Family::Btilde8 => "btilde8",
        }
    }

    pub fn min_n(self) -> usize {
        match self {
            Family::Atilde2 => 3,
            Family::Btilde8 => 9,
        }
    }
}

/// Constructs a member of a built-in family.
///
/// `atilde2(n)`: generators s0..sn; s1..sn form an n-cycle with all m = 3;
/// m(s0, s1) = m(s0, s2) = 3; all other pairs m = 2.
///
/// `btilde8(n)`: generators p0..p(n-1), t; path m(pi, p(i+1)) = 3 for
/// 0 <= i <= n-3; m(p(n-2), p(n-1)) = 4; m(t, p2) = 3; all other pairs m = 2.
pub fn builtin_family(family: Family, n: usize) -> Result<CoxeterMatrix> {
    if n < family.min_n() {
        return Err(Error::FamilyParameter {
            family: family.name(),
            min: family.min_n(),
            n,
        });
    }
    let rank = n + 1;
    if rank > MAX_RANK {
        return Err(Error::RankTooLarge(rank));
    }
    match family {
        Family::Atilde2 => {
            let generators: Vec<String> = (0..=n).map(|i| format!("s{i}")).collect();
            let mut m = vec![vec![2u32; rank]; rank];
            for i in 0..rank {
                m[i][i] = 1;
            }
            let mut set = |a: usize, b: usize, v: u32| {
                m[a][b] = v;
                m[b][a] = v;
            };
            for i in 1..n {
                set(i, i + 1, 3);
            }
            set(n, 1, 3);
            set(0, 1, 3);
            set(0, 2, 3);
            CoxeterMatrix::new(generators, m)
        }
        Family::Btilde8 => {
            let mut generators: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            generators.push("t".to_string());
            let t = n;
            let mut m = vec![vec![2u32; rank]; rank];
            for i in 0..rank {
                m[i][i] = 1;
            }
            let mut set = |a: usize, b: usize, v: u32| {
                m[a][b] = v;
                m[b][a] = v;
            };
            for i in 0..=n - 3 {
                set(i, i + 1, 3);
            }
            set(n - 2, n - 1, 4);
            set(t, 2, 3);
            CoxeterMatrix::new(generators, m)
        }
    }
}
