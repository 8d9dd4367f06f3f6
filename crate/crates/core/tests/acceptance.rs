//! Every acceptance criterion at its pinned tolerance. Run with
//! `cargo test -p rindler-discord --test acceptance -- --nocapture` to see
//! one PASS/FAIL line per criterion.

use rindler_discord::verify::{run_criterion, Criterion, VerifyConfig};

fn check(c: Criterion) {
    let report = run_criterion(c, &VerifyConfig::default());
    println!("{report}");
    assert!(report.passed, "{report}");
}

#[test]
fn a1_boson_geometric_discord_matches_closed_form() {
    check(Criterion::A1);
}

#[test]
fn a2_upper_bound_identity() {
    check(Criterion::A2);
}

#[test]
fn a3_geometric_discord_vanishes() {
    check(Criterion::A3);
}

#[test]
fn a4_quantum_discord_survives_where_geometric_vanishes() {
    check(Criterion::A4);
}

#[test]
fn a5_rob_side_fock_bounds() {
    check(Criterion::A5);
}

#[test]
fn a6_fermion_closed_forms() {
    check(Criterion::A6);
}

#[test]
fn a7_trace_norm_prefactor() {
    check(Criterion::A7);
}

#[test]
fn a8_correlator() {
    check(Criterion::A8);
}

#[test]
fn a9_measurement_invariances() {
    check(Criterion::A9);
}

#[test]
fn a10_property_suites() {
    check(Criterion::A10);
}
