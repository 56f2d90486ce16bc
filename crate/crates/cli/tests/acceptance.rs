//! Acceptance suite: one test per criterion, exact tolerances, one PASS line
//! each. Heavy profiles are memoized across criteria (the tests share this
//! process), so the rank-13 computations run once.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::process::Command;
use std::sync::{Mutex, OnceLock};
use std::time::{Duration, Instant};

use coxl2_core::classify::{
    all_irreducible_diagrams_up_to_iso, classify_irreducible, find_sph_aff_partitions,
    sphericity, sphericity_at_least, sphericity_classification_scan, FiniteType, TypeTag,
};
use coxl2_core::cohomology::{euler_characteristic, reduced_cohomology, CohomologyProfile};
use coxl2_core::coxeter::{
    builtin_family, parse_diagram, CoxeterMatrix, Family, GenSet, INFINITE,
};
use coxl2_core::davis::{
    chamber_euler, chamber_profile, d_sigma, d_sigma_euler, d_sigma_profile, fast_path,
    sigma_candidates,
};
use coxl2_core::growth::{
    covolume_partial_sums, decimal_string, enumerate_by_length, growth_polynomial_of,
};
use coxl2_core::l2::{betti_support, kunneth_square, me_compare, BettiSupport, MeVerdict};

fn family_matrix(family: Family, n: usize) -> CoxeterMatrix {
    builtin_family(family, n).expect("family parameters are in range")
}

fn family_key(family: Family) -> u8 {
    match family {
        Family::Atilde2 => 0,
        Family::Btilde8 => 1,
    }
}

type ProfileCache = OnceLock<Mutex<HashMap<(u8, usize, u32), CohomologyProfile>>>;

/// Memoized full (cubical) cohomology of D_sigma for family members.
fn full_profile(family: Family, n: usize, j: GenSet) -> CohomologyProfile {
    static CACHE: ProfileCache = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (family_key(family), n, j.0);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let m = family_matrix(family, n);
    let profile = d_sigma_profile(&m, j).expect("candidates are spherical");
    cache.lock().unwrap().insert(key, profile.clone());
    profile
}

/// Memoized degree supports for family members.
fn family_support(family: Family, n: usize) -> BettiSupport {
    static CACHE: OnceLock<Mutex<HashMap<(u8, usize), BettiSupport>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let key = (family_key(family), n);
    if let Some(hit) = cache.lock().unwrap().get(&key) {
        return hit.clone();
    }
    let support = betti_support(&family_matrix(family, n)).expect("family members are infinite");
    cache.lock().unwrap().insert(key, support.clone());
    support
}

fn family_lattice_degrees(family: Family, n: usize) -> BTreeSet<usize> {
    kunneth_square(&family_support(family, n)).keys().copied().collect()
}

/// atilde2(n): the tail subset {s3, ..., sn} whose complement is the affine
/// triangle.
fn atilde2_tau(m: &CoxeterMatrix, n: usize) -> GenSet {
    let names: Vec<String> = (3..=n).map(|i| format!("s{i}")).collect();
    m.subset_from_names(&names).unwrap()
}

/// btilde8(n): the subset {p8, ..., p(n-1)} whose complement is the affine
/// nine-generator subdiagram containing the branch.
fn btilde8_tau(m: &CoxeterMatrix, n: usize) -> GenSet {
    let names: Vec<String> = (8..n).map(|i| format!("p{i}")).collect();
    m.subset_from_names(&names).unwrap()
}

#[test]
fn criterion_1_atilde2_cohomology_table() {
    let start = Instant::now();
    for n in 3..=8usize {
        let m = family_matrix(Family::Atilde2, n);
        let s0 = m.subset_from_names(&["s0"]).unwrap();
        let tau = atilde2_tau(&m, n);
        let candidates = sigma_candidates(&m);
        // The candidate set is exactly {∅, {s0}} plus the nonempty subsets
        // of the tail.
        assert_eq!(candidates.len(), 2 + (1 << (n - 2)) - 1, "candidate count at n = {n}");
        for &j in &candidates {
            let expected = if j == s0 || j == GenSet::EMPTY {
                CohomologyProfile::sphere(n as i32 - 2)
            } else if j == tau {
                CohomologyProfile::sphere(1)
            } else {
                CohomologyProfile::acyclic()
            };
            let got = full_profile(Family::Atilde2, n, j);
            assert_eq!(got, expected, "n = {n}, J = {}", m.set_label(j));
            if n <= 4 {
                let simplicial = reduced_cohomology(&d_sigma(&m, j).unwrap());
                assert_eq!(simplicial, expected, "simplicial cross-check n = {n}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(60), "took {elapsed:?}");
    println!("ACCEPTANCE 1 (atilde2 cohomology golden table, n = 3..8): PASS in {elapsed:?}");
}

#[test]
fn criterion_2_atilde2_degree_supports() {
    for n in 3..=8usize {
        let support = family_support(Family::Atilde2, n);
        let expected: BTreeMap<usize, u64> = if n == 3 {
            BTreeMap::from([(2, 3)])
        } else {
            BTreeMap::from([(2, 1), (n - 1, 2)])
        };
        assert_eq!(support.totals(), expected, "support at n = {n}");
        let expected_lattice = BTreeSet::from([4, n + 1, 2 * n - 2]);
        assert_eq!(
            family_lattice_degrees(Family::Atilde2, n),
            expected_lattice,
            "lattice degrees at n = {n}"
        );
    }
    println!("ACCEPTANCE 2 (atilde2 degree supports and lattice degrees): PASS");
}

#[test]
fn criterion_3_btilde8_golden_table() {
    let start = Instant::now();
    for n in 9..=12usize {
        let m = family_matrix(Family::Btilde8, n);
        assert_eq!(sphericity(&m), 8, "sphericity at n = {n}");
        let tau = btilde8_tau(&m, n);
        assert_eq!(
            full_profile(Family::Btilde8, n, tau),
            CohomologyProfile::sphere(7),
            "D_tau at n = {n}"
        );
        let expected_lattice = BTreeSet::from([16, n + 7, 2 * n - 2]);
        assert_eq!(
            family_lattice_degrees(Family::Btilde8, n),
            expected_lattice,
            "lattice degrees at n = {n}"
        );
        let expected_support: BTreeMap<usize, u64> = if n == 9 {
            BTreeMap::from([(8, 3)])
        } else {
            BTreeMap::from([(8, 1), (n - 1, 2)])
        };
        assert_eq!(
            family_support(Family::Btilde8, n).totals(),
            expected_support,
            "support at n = {n}"
        );
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(600), "took {elapsed:?}");
    println!("ACCEPTANCE 3 (btilde8 golden table, n = 9..12): PASS in {elapsed:?}");
}

#[test]
fn criterion_4_distinguishing_matrix() {
    let degrees: Vec<(usize, BTreeSet<usize>)> = (4..=8)
        .map(|n| (n, family_lattice_degrees(Family::Atilde2, n)))
        .collect();
    let mut pairs = 0;
    for i in 0..degrees.len() {
        for j in i + 1..degrees.len() {
            assert_ne!(degrees[i].1, degrees[j].1, "equal degree sets at n = {} and {}", degrees[i].0, degrees[j].0);
            assert_eq!(
                me_compare(&degrees[i].1, &degrees[j].1),
                MeVerdict::Distinguishable
            );
            pairs += 1;
        }
    }
    assert_eq!(pairs, 10);
    println!("ACCEPTANCE 4 (pairwise distinguishable lattice degrees, n = 4..8): PASS");
}

#[test]
fn criterion_5_fast_path_soundness() {
    let mut conclusive = 0usize;
    // The two built-in families.
    for n in 3..=8usize {
        let m = family_matrix(Family::Atilde2, n);
        for j in sigma_candidates(&m) {
            if let Some(expected) = fast_path(&m, j).unwrap().predicted_profile() {
                assert_eq!(full_profile(Family::Atilde2, n, j), expected);
                conclusive += 1;
            }
        }
    }
    for n in 9..=12usize {
        let m = family_matrix(Family::Btilde8, n);
        for j in sigma_candidates(&m) {
            if let Some(expected) = fast_path(&m, j).unwrap().predicted_profile() {
                assert_eq!(full_profile(Family::Btilde8, n, j), expected);
                conclusive += 1;
            }
        }
    }
    // Every irreducible diagram of rank <= 5 over {2, 3, 4, 6, ∞}, up to
    // isomorphism.
    let labels = [2, 3, 4, 6, INFINITE];
    for rank in 1..=5usize {
        for m in all_irreducible_diagrams_up_to_iso(rank, &labels) {
            for j in sigma_candidates(&m) {
                if let Some(expected) = fast_path(&m, j).unwrap().predicted_profile() {
                    let got = d_sigma_profile(&m, j).unwrap();
                    assert_eq!(got, expected, "mismatch at J = {:?} of {}", j.indices(), m.to_json());
                    conclusive += 1;
                }
            }
        }
    }
    assert!(conclusive > 250_000, "expected a large conclusive corpus, got {conclusive}");
    println!("ACCEPTANCE 5 (fast-path soundness, {conclusive} conclusive candidates): PASS");
}

#[test]
fn criterion_6_partition_witness() {
    let mut partitions_checked = 0usize;
    let witness = |support: &BettiSupport, j_aff: GenSet| {
        let degree = j_aff.len() - 1;
        assert!(
            support.total_coefficient(degree) > 0,
            "no positive coefficient in degree {degree}"
        );
    };
    for n in 3..=8usize {
        let m = family_matrix(Family::Atilde2, n);
        let support = family_support(Family::Atilde2, n);
        for (_, j_aff) in find_sph_aff_partitions(&m).unwrap() {
            witness(&support, j_aff);
            partitions_checked += 1;
        }
    }
    for n in 9..=12usize {
        let m = family_matrix(Family::Btilde8, n);
        let support = family_support(Family::Btilde8, n);
        for (_, j_aff) in find_sph_aff_partitions(&m).unwrap() {
            witness(&support, j_aff);
            partitions_checked += 1;
        }
    }
    let labels = [2, 3, 4, 6, INFINITE];
    for rank in 2..=5usize {
        for m in all_irreducible_diagrams_up_to_iso(rank, &labels) {
            let partitions = find_sph_aff_partitions(&m).unwrap();
            if partitions.is_empty() {
                continue;
            }
            let support = betti_support(&m).expect("a sph/aff partition forces infinite W");
            for (_, j_aff) in partitions {
                witness(&support, j_aff);
                partitions_checked += 1;
            }
        }
    }
    assert!(partitions_checked > 1_000, "only {partitions_checked} partitions seen");
    println!("ACCEPTANCE 6 (sph/aff partition witness, {partitions_checked} partitions): PASS");
}

#[test]
fn criterion_7_nine_spherical_scan() {
    let start = Instant::now();
    let hits = sphericity_classification_scan(10..=12, 1000, 1);
    assert!(
        hits.is_empty(),
        "counterexamples found: {:?}",
        hits.iter().map(|h| h.sample_index).collect::<Vec<_>>()
    );
    // Injected members behave as expected.
    let b12 = family_matrix(Family::Btilde8, 12);
    assert!(!sphericity_at_least(&b12, 9));
    let a12 = parse_diagram(
        "nodes: a b c d e f g h i j k l\nedge: a b\nedge: b c\nedge: c d\nedge: d e\nedge: e f\nedge: f g\nedge: g h\nedge: h i\nedge: i j\nedge: j k\nedge: k l",
    )
    .unwrap();
    assert!(sphericity_at_least(&a12, 9));
    assert!(classify_irreducible(&a12).unwrap().is_finite());
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(300), "took {elapsed:?}");
    println!("ACCEPTANCE 7 (1000-sample 9-sphericity scan, ranks 10..12): PASS in {elapsed:?}");
}

#[test]
fn criterion_8_growth_oracle() {
    // Every crystallographic finite type of rank <= 4, with a diagram for
    // each.
    let cases: Vec<(&str, FiniteType)> = vec![
        ("nodes: a", FiniteType::A(1)),
        ("nodes: a b\nedge: a b", FiniteType::A(2)),
        ("nodes: a b c\nedge: a b\nedge: b c", FiniteType::A(3)),
        ("nodes: a b c d\nedge: a b\nedge: b c\nedge: c d", FiniteType::A(4)),
        ("nodes: a b\nedge: a b 4", FiniteType::B(2)),
        ("nodes: a b c\nedge: a b\nedge: b c 4", FiniteType::B(3)),
        ("nodes: a b c d\nedge: a b\nedge: b c\nedge: c d 4", FiniteType::B(4)),
        ("nodes: a b c d\nedge: b a\nedge: b c\nedge: b d", FiniteType::D(4)),
        ("nodes: a b\nedge: a b 6", FiniteType::I2(6)),
        ("nodes: a b c d\nedge: a b\nedge: b c 4\nedge: c d", FiniteType::F4),
    ];
    for (text, expected_type) in cases {
        let m = parse_diagram(text).unwrap();
        let tag = classify_irreducible(&m).unwrap();
        assert_eq!(tag, TypeTag::Finite(expected_type));
        let poly = growth_polynomial_of(expected_type);
        let series = enumerate_by_length(&m, poly.coefficients.len()).unwrap();
        assert!(series.complete, "{expected_type} not exhausted");
        assert_eq!(series.coefficients, poly.coefficients, "{expected_type}");
    }
    assert_eq!(growth_polynomial_of(FiniteType::A(3)).total(), 24);
    assert_eq!(growth_polynomial_of(FiniteType::B(3)).total(), 48);
    assert_eq!(growth_polynomial_of(FiniteType::A(2)).coefficients, vec![1, 2, 2, 1]);

    // Infinite dihedral covolume at q = 2: within 1e-6 of 3 by N = 30.
    let dihedral = parse_diagram("nodes: a b\nedge: a b inf").unwrap();
    let sums = covolume_partial_sums(&dihedral, 2, 30).unwrap();
    let three = coxl2_core::growth::BigRational::from_integer(3.into());
    let error = &three - sums.last();
    assert!(error > coxl2_core::growth::BigRational::from_integer(0.into()));
    let bound = coxl2_core::growth::BigRational::new(1.into(), 1_000_000.into());
    assert!(error < bound, "error {error} exceeds 1e-6");
    assert_eq!(&decimal_string(sums.last(), 6), "2.999999");
    println!("ACCEPTANCE 8 (growth oracle and dihedral covolume): PASS");
}

#[test]
fn criterion_9_global_invariants() {
    // (a) Euler/Betti consistency and chamber acyclicity on the corpus.
    let check_euler = |profile: &CohomologyProfile, chi: i64| {
        assert_eq!(chi, 1 + profile.reduced_euler(), "euler inconsistency");
    };
    for n in 3..=8usize {
        let m = family_matrix(Family::Atilde2, n);
        assert!(chamber_profile(&m).is_acyclic(), "chamber not acyclic at atilde2({n})");
        assert_eq!(chamber_euler(&m), 1);
        for j in sigma_candidates(&m) {
            let profile = full_profile(Family::Atilde2, n, j);
            check_euler(&profile, d_sigma_euler(&m, j).unwrap());
        }
    }
    for n in 9..=12usize {
        let m = family_matrix(Family::Btilde8, n);
        assert!(chamber_profile(&m).is_acyclic(), "chamber not acyclic at btilde8({n})");
        assert_eq!(chamber_euler(&m), 1);
        for j in sigma_candidates(&m) {
            let profile = full_profile(Family::Btilde8, n, j);
            check_euler(&profile, d_sigma_euler(&m, j).unwrap());
        }
    }
    let labels = [2, 3, 4, 6, INFINITE];
    for rank in 1..=4usize {
        for m in all_irreducible_diagrams_up_to_iso(rank, &labels) {
            assert!(chamber_profile(&m).is_acyclic());
            let chamber = coxl2_core::davis::davis_chamber(&m);
            assert_eq!(euler_characteristic(&chamber), 1);
            for j in sigma_candidates(&m) {
                let profile = d_sigma_profile(&m, j).unwrap();
                check_euler(&profile, d_sigma_euler(&m, j).unwrap());
            }
        }
    }
    for m in all_irreducible_diagrams_up_to_iso(5, &labels) {
        assert!(chamber_profile(&m).is_acyclic());
    }

    // (b) Byte-identical reports across two consecutive runs.
    let bin = env!("CARGO_BIN_EXE_coxl2");
    for args in [
        vec!["betti", "--family", "atilde2", "--n", "5", "--format", "json"],
        vec![
            "lattice-report",
            "--family",
            "atilde2",
            "--n",
            "4",
            "--q",
            "7",
            "--format",
            "json",
        ],
        vec!["classify", "--family", "btilde8", "--n", "9", "--format", "json"],
    ] {
        let run = |args: &[&str]| {
            let out = Command::new(bin).args(args).output().expect("binary runs");
            assert!(out.status.success(), "command failed: {:?}", args);
            out.stdout
        };
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first, second, "non-deterministic output for {:?}", args);
    }
    println!("ACCEPTANCE 9 (euler consistency, chamber acyclicity, byte-stable reports): PASS");
}
