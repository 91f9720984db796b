use anyon_orbits::acceptance::{run, CriterionReport};

const SEED: u64 = 7;

fn criterion(id: u8) {
    let report: CriterionReport = run(id, SEED);
    println!("{report}");
    for c in &report.checks {
        println!(
            "    {} {}: {}",
            if c.passed { "ok  " } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    assert!(report.passed, "criterion {id} failed");
}

#[test]
fn criterion_1_symmetry_engine() {
    criterion(1);
}

#[test]
fn criterion_2_angular_momentum_flows() {
    criterion(2);
}

#[test]
fn criterion_3_family_classification() {
    criterion(3);
}

#[test]
fn criterion_4_invariant_subgroup() {
    criterion(4);
}

#[test]
fn criterion_5_regularized_dynamics() {
    criterion(5);
}

#[test]
fn criterion_6_semiclassical_spectrum() {
    criterion(6);
}

#[test]
fn criterion_7_exact_identities() {
    criterion(7);
}

#[test]
fn criterion_8_propagator_resummation() {
    criterion(8);
}

#[test]
fn criterion_9_half_period_signature() {
    criterion(9);
}
