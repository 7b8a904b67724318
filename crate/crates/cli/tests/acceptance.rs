//! The verification suite as a test target: one test per criterion, each
//! printing its pass/fail line.

use eckardt_core::acceptance::run_criterion;

fn run(id: usize) {
    let r = run_criterion(id);
    println!("{}", r.line());
    assert!(r.pass, "{}", r.line());
}

#[test]
fn criterion_01_reference_dims_and_splits() {
    run(1);
}

#[test]
fn criterion_02_cokernel_constants() {
    run(2);
}

#[test]
fn criterion_03_period_map_differential_dimensions() {
    run(3);
}

#[test]
fn criterion_04_discriminant_identities() {
    run(4);
}

#[test]
fn criterion_05_twenty_seven_lines() {
    run(5);
}

#[test]
fn criterion_06_klein_tower_and_fixed_points() {
    run(6);
}

#[test]
fn criterion_07_prym_dimension_arithmetic() {
    run(7);
}

#[test]
fn criterion_08_round_trips() {
    run(8);
}

#[test]
fn criterion_09_genericity() {
    run(9);
}

#[test]
fn criterion_10_mumford_match() {
    run(10);
}

#[test]
fn criterion_11_three_lines_per_hyperplane() {
    run(11);
}
