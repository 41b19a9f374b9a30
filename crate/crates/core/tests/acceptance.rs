//! Acceptance battery: every verification criterion at its stated
//! tolerance, one pass/fail line per criterion, plus the byte-identity
//! determinism check (run with `--nocapture` to watch the lines live).

use std::time::Instant;

use epwlab::reports::{self, CriterionResult};

fn report(c: &CriterionResult, started: Instant) {
    println!(
        "criterion {:>2} [{}] {:<40} ({:.2?}) {}",
        c.id,
        if c.passed { "PASS" } else { "FAIL" },
        c.name,
        started.elapsed(),
        c.details
    );
}

#[test]
fn acceptance_criteria() {
    let total = Instant::now();
    let mut all = Vec::new();
    let mut rendered_parts = Vec::new();
    let checks: Vec<(&str, fn() -> CriterionResult)> = vec![
        ("1", reports::criterion_1_schubert),
        ("2", reports::criterion_2_chart_master),
        ("3", reports::criterion_3_kummer_equivalence),
        ("4", reports::criterion_4_nodes),
        ("5", reports::criterion_5_duality),
        ("6", reports::criterion_6_delpezzo),
        ("7", reports::criterion_7_epw_profile),
        ("8", reports::criterion_8_tangent_cones),
        ("9", reports::criterion_9_fibrations),
        ("10", reports::criterion_10_conics),
        ("11", reports::criterion_11_lattices),
    ];
    for (_, f) in &checks {
        let t = Instant::now();
        let c = f();
        report(&c, t);
        rendered_parts.push(serde_json::to_string_pretty(&c).unwrap());
        all.push(c);
    }
    // criterion 12: rerunning 1-11 with the same seeds is byte-identical
    let t = Instant::now();
    let first = format!("[{}]", rendered_parts.join(","));
    let second = {
        let mut parts = Vec::new();
        for (_, f) in &checks {
            parts.push(serde_json::to_string_pretty(&f()).unwrap());
        }
        format!("[{}]", parts.join(","))
    };
    let c12 = CriterionResult {
        id: 12,
        name: "determinism".to_string(),
        passed: first == second,
        details: format!(
            "rerun bytes {} (EPWLAB_THREADS {:?})",
            if first == second { "identical" } else { "DIFFER" },
            std::env::var("EPWLAB_THREADS").ok()
        ),
    };
    report(&c12, t);
    all.push(c12);
    println!("acceptance total: {:.2?}", total.elapsed());
    let failed: Vec<String> = all
        .iter()
        .filter(|c| !c.passed)
        .map(|c| format!("criterion {}: {}", c.id, c.details))
        .collect();
    assert!(failed.is_empty(), "failed criteria:\n{}", failed.join("\n"));
}
