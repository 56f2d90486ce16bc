//! Payload builders. The JSON payload is the stable contract: identical
//! (command, input digest, version) always serialize to identical bytes.
//! The text renderings are human-oriented and carry no stability promise.

use serde_json::{json, Value};

use coxl2_core::classify::{
    classify_irreducible, sphericity, TypeTag,
};
use coxl2_core::cohomology::euler_characteristic;
use coxl2_core::coxeter::{irreducible_components, CoxeterMatrix, GenSet};
use coxl2_core::davis::{d_sigma, davis_chamber};
use coxl2_core::growth::{
    covolume_partial_sums, decimal_string, enumerate_by_length, km_report, KMFlag,
};
use coxl2_core::l2::{betti_support, kunneth_square, lattice_degrees, me_compare};

use crate::CliError;

fn names(m: &CoxeterMatrix, set: GenSet) -> Vec<String> {
    set.iter().map(|i| m.generator_name(i).to_string()).collect()
}

fn support_object<I: IntoIterator<Item = (usize, u64)>>(entries: I) -> Value {
    let map: serde_json::Map<String, Value> = entries
        .into_iter()
        .map(|(k, v)| (k.to_string(), json!(v)))
        .collect();
    Value::Object(map)
}

pub fn classify_report(m: &CoxeterMatrix) -> (Value, String) {
    let comps = irreducible_components(m);
    let mut entries = Vec::new();
    let mut lines = Vec::new();
    for (set, sub) in &comps {
        let tag = classify_irreducible(sub).expect("components are irreducible");
        let entry = match tag {
            TypeTag::Finite(t) => json!({
                "generators": names(m, *set),
                "kind": "finite",
                "name": t.to_string(),
            }),
            TypeTag::Affine(t) => json!({
                "generators": names(m, *set),
                "kind": "affine",
                "name": t.to_string(),
            }),
            TypeTag::Indefinite {
                all_proper_parabolics_finite,
            } => json!({
                "generators": names(m, *set),
                "kind": "indefinite",
                "all_proper_parabolics_finite": all_proper_parabolics_finite,
            }),
        };
        entries.push(entry);
        lines.push(format!("  {} -> {}", m.set_label(*set), tag));
    }
    let payload = json!({
        "rank": m.rank(),
        "irreducible": comps.len() == 1,
        "components": entries,
    });
    let text = format!(
        "rank {} with {} irreducible component(s):\n{}",
        m.rank(),
        comps.len(),
        lines.join("\n")
    );
    (payload, text)
}

pub fn sphericity_report(m: &CoxeterMatrix) -> (Value, String) {
    let k = sphericity(m);
    let payload = json!({ "rank": m.rank(), "sphericity": k });
    (payload, format!("{k}"))
}

pub fn davis_report(m: &CoxeterMatrix, sigma: Option<GenSet>) -> Result<(Value, String), CliError> {
    let complex = match sigma {
        None => davis_chamber(m),
        Some(j) => d_sigma(m, j)?,
    };
    let chi = euler_characteristic(&complex);
    let payload = json!({
        "rank": m.rank(),
        "sigma": sigma.map(|j| names(m, j)),
        "vertices": complex.vertex_labels(),
        "facets": complex.facets(),
        "dimension": complex.dimension(),
        "euler_characteristic": chi,
    });
    let text = format!(
        "{}: {} vertices, {} facets, dimension {}, euler characteristic {}",
        match sigma {
            None => "davis chamber".to_string(),
            Some(j) => format!("D_sigma for J = {}", m.set_label(j)),
        },
        complex.n_vertices(),
        complex.facets().len(),
        complex.dimension(),
        chi,
    );
    Ok((payload, text))
}

pub fn betti_report(m: &CoxeterMatrix) -> Result<(Value, String), CliError> {
    let support = betti_support(m)?;
    let square = kunneth_square(&support);
    let lattice: Vec<usize> = square.keys().copied().collect();
    let detail: Vec<Value> = support
        .detail()
        .into_iter()
        .map(|(j, degree, dim)| {
            json!({ "J": names(m, j), "degree": degree, "dim": dim })
        })
        .collect();
    let payload = json!({
        "rank": support.rank(),
        "q_threshold": support.q_threshold(),
        "G_support": support_object(support.totals()),
        "sigma_detail": detail,
        "GxG_support": support_object(square.clone()),
        "lattice_degrees": lattice,
    });
    let g: Vec<String> = support
        .totals()
        .iter()
        .map(|(k, c)| format!("beta^{k}: coefficient {c}"))
        .collect();
    let text = format!(
        "G degree support (q > {}):\n  {}\nlattice degrees: {:?}",
        support.q_threshold(),
        g.join("\n  "),
        lattice,
    );
    Ok((payload, text))
}

pub fn growth_report(
    m: &CoxeterMatrix,
    truncation: usize,
    q: Option<u64>,
) -> Result<(Value, String), CliError> {
    let series = enumerate_by_length(m, truncation)?;
    let covolume = match q {
        Some(q) => {
            let sums = covolume_partial_sums(m, q, truncation)?;
            let last = sums.last();
            json!({
                "q": q,
                "exact": last.to_string(),
                "decimal": decimal_string(last, 12),
                "complete": sums.complete,
            })
        }
        None => Value::Null,
    };
    let payload = json!({
        "rank": m.rank(),
        "truncation": truncation,
        "coefficients": series.coefficients,
        "complete": series.complete,
        "total": series.total(),
        "covolume": covolume,
    });
    let mut text = format!("growth {}", series);
    if let Some(q) = q {
        let sums = covolume_partial_sums(m, q, truncation)?;
        text.push_str(&format!(
            "\ncovolume partial sum at q = {q}: {} ({})",
            sums.last(),
            decimal_string(sums.last(), 12)
        ));
    }
    Ok((payload, text))
}

fn flag_value(flag: &KMFlag) -> Value {
    json!({ "value": flag.value, "criterion": flag.criterion })
}

pub fn lattice_report(
    m: &CoxeterMatrix,
    q: u64,
    truncation: usize,
) -> Result<(Value, String), CliError> {
    let report = km_report(m, q)?;
    let series = enumerate_by_length(m, truncation)?;
    let covolume = covolume_partial_sums(m, q, truncation)?;
    let prefix_len = series.coefficients.len().min(21);
    let supports = match &report.supports {
        Some((support, degrees)) => json!({
            "q_threshold": support.q_threshold(),
            "G_support": support_object(support.totals()),
            "lattice_degrees": degrees.iter().copied().collect::<Vec<usize>>(),
        }),
        None => Value::Null,
    };
    let payload = json!({
        "rank": report.rank,
        "q": report.q,
        "thickness": report.thickness,
        "type": report.type_tag.to_string(),
        "sphericity": report.sphericity,
        "flags": {
            "lattice": flag_value(&report.lattice_ok),
            "finitely_presented": flag_value(&report.finitely_presented_ok),
            "simple": flag_value(&report.simple_ok),
            "kazhdan": flag_value(&report.kazhdan_ok),
        },
        "growth_prefix": series.coefficients[..prefix_len],
        "covolume_partial": decimal_string(covolume.last(), 12),
        "supports": supports,
    });
    let flag_line = |name: &str, f: &KMFlag| {
        format!("  {name}: {} [{}]", if f.value { "yes" } else { "no" }, f.criterion)
    };
    let mut text = format!(
        "Weyl group {} of rank {}, sphericity {}; q = {q} (thickness {})\n{}\n{}\n{}\n{}",
        report.type_tag,
        report.rank,
        report.sphericity,
        report.thickness,
        flag_line("lattice", &report.lattice_ok),
        flag_line("finitely presented", &report.finitely_presented_ok),
        flag_line("simple", &report.simple_ok),
        flag_line("kazhdan", &report.kazhdan_ok),
    );
    if let Some((support, degrees)) = &report.supports {
        text.push_str(&format!(
            "\n  G support: {:?} (q > {})\n  lattice degrees: {:?}",
            support.totals(),
            support.q_threshold(),
            degrees
        ));
    }
    Ok((payload, text))
}

pub fn compare_report(
    a_source: &str,
    a: &CoxeterMatrix,
    b_source: &str,
    b: &CoxeterMatrix,
) -> Result<(Value, String), CliError> {
    let da = lattice_degrees(a)?;
    let db = lattice_degrees(b)?;
    let verdict = me_compare(&da, &db);
    let payload = json!({
        "a": { "source": a_source, "lattice_degrees": da.iter().copied().collect::<Vec<usize>>() },
        "b": { "source": b_source, "lattice_degrees": db.iter().copied().collect::<Vec<usize>>() },
        "verdict": verdict.to_string(),
    });
    let text = format!(
        "{a_source}: {:?}\n{b_source}: {:?}\nverdict: {verdict}",
        da, db
    );
    Ok((payload, text))
}

/// Scan summary helpers shared by `main`.
pub fn me_matrix(members: &[(usize, Vec<usize>)]) -> Vec<Value> {
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let a: std::collections::BTreeSet<usize> = members[i].1.iter().copied().collect();
            let b: std::collections::BTreeSet<usize> = members[j].1.iter().copied().collect();
            out.push(json!({
                "a": members[i].0,
                "b": members[j].0,
                "verdict": me_compare(&a, &b).to_string(),
            }));
        }
    }
    out
}
