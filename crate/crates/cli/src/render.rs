//! Plain-text versions of the reports.

use lcplab_core::analysis::AnalysisReport;
use lcplab_core::lcp::LcpReport;
use lcplab_core::metric::{ValidationReport, Violation};

fn name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("e{}", i + 1))
}

fn violation(v: &Violation, names: &[String]) -> String {
    match *v {
        Violation::Antisymmetry { i, j, k } => format!(
            "antisymmetry fails for [{}, {}] in component {}",
            name(names, i),
            name(names, j),
            name(names, k)
        ),
        Violation::Jacobi { i, j, k, component } => format!(
            "Jacobi identity fails on ({}, {}, {}) in component {}",
            name(names, i),
            name(names, j),
            name(names, k),
            name(names, component)
        ),
        Violation::MetricAsymmetric { i, j } => format!("metric is not symmetric at ({i}, {j})"),
        Violation::MetricNotPositive { order } => format!("metric is not positive definite (order {order})"),
    }
}

fn lcp(r: &LcpReport) {
    if r.overall {
        println!("lcp: ok");
    } else {
        println!("lcp: failed checks: {}", r.failed().join(", "));
    }
    for n in &r.notes {
        println!("  note: {n}");
    }
}

pub fn validation(v: &ValidationReport, lcp_report: Option<&LcpReport>, names: &[String]) {
    if v.is_valid() {
        println!("algebra: ok");
    } else {
        println!("algebra: {} violation(s)", v.violations.len());
        for x in &v.violations {
            println!("  {}", violation(x, names));
        }
    }
    if let Some(r) = lcp_report {
        lcp(r);
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn analysis(r: &AnalysisReport) {
    if let Some(n) = &r.name {
        println!("{n} (dim {}, {} mode)", r.dim, r.mode);
    } else {
        println!("dim {}, {} mode", r.dim, r.mode);
    }
    if r.promoted_to_float {
        println!("promoted to float mode");
    }
    validation(&r.validation, None, &[]);
    if let Some(u) = r.unimodular {
        println!("unimodular: {}", yes(u));
    }
    if let Some(h) = r.holonomy_dim {
        println!("holonomy dim: {h}");
    }
    if let Some(d) = &r.de_rham {
        let flat = d.flat_index.map_or("none".to_string(), |i| format!("factor {i}, dim {}", d.flat_dim));
        println!("de Rham factor dims: {:?} (flat: {flat})", d.factor_dims);
    }
    match &r.reducing_witness {
        Some(w) => println!("holonomy reducible: yes (witness dims {} + {})", w.g1.len(), w.g2.len()),
        None if r.de_rham.is_some() => println!("holonomy reducible: no"),
        None => {}
    }
    if let Some(l) = &r.lcp_report {
        lcp(l);
    }
    if let Some(d) = &r.decomposability {
        println!("decomposable: {}", yes(d.decomposable));
        if let Some(p) = d.principal_factor {
            println!(
                "principal factor: {} (dim {}, q {}, dim >= q + 2: {})",
                p.index,
                p.dim,
                p.q,
                yes(p.bound_satisfied)
            );
        }
        println!(
            "weak reducibility: {}",
            serde_json::to_value(d.weak_reducibility)
                .ok()
                .and_then(|v| v.as_str().map(str::to_string))
                .unwrap_or_default()
        );
    }
    if let Some(l) = &r.lattice {
        println!("lattice: char poly {}", l.char_poly);
        if let Some(i) = l.irreducible {
            println!("  irreducible: {}", yes(i));
        }
        if let Some(p) = &l.root_profile {
            println!(
                "  roots: {} on circle, {} real off circle, {} other; degree of unit {}",
                p.on_circle, p.real_off_circle, p.other, p.degree_of_unit
            );
        }
        if let Some(c) = l.conjugacy_verified {
            println!("  conjugacy verified: {}", yes(c));
        }
        if let Some(p) = &l.probe {
            println!("  probe: {}", serde_json::to_string(p).unwrap_or_default());
        }
    }
    if let Some(e) = &r.expected {
        if e.matches {
            println!("expected verdict: matches");
        } else {
            println!("expected verdict: MISMATCH");
            for m in &e.mismatches {
                println!("  {m}");
            }
        }
    }
    for n in r.annotations.iter().chain(&r.notes) {
        println!("note: {n}");
    }
    println!(
        "tolerance: rank {:e}, cluster {:e}; seed {}",
        r.tolerance_policy.rank_tol, r.tolerance_policy.eigen_cluster_tol, r.random_seed
    );
}
