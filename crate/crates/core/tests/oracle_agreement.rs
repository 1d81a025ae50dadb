use branchkit::lattice::Weight;
use branchkit::oracle::{antisymmetry_violations, check_theorem1, quat_heckman, OracleConfig};
use branchkit::quaternionic::{sample_parameter, theorem1_branch, verify_dominance_29, QuaternionicContext};
use branchkit::rootsystems::FormLabel;

fn run(label: &str, extra: &[u32], cutoff: u32, step: u32) {
    let ctx = QuaternionicContext::new(label.parse::<FormLabel>().unwrap()).unwrap();
    let lam: Weight = sample_parameter(&ctx, extra).unwrap();
    let hc = ctx.parameter(lam.clone()).unwrap();
    let cfg = OracleConfig::with_step_bound(step);
    let (lhs, rhs) = quat_heckman(&ctx, &lam, &cfg).unwrap();
    assert!(lhs.disagreements(&rhs).is_empty(), "{label}: Heckman");
    let table = theorem1_branch(&ctx, &hc, cutoff).unwrap();
    assert!(verify_dominance_29(&ctx, &table).unwrap().is_empty());
    let (series, report) = check_theorem1(&ctx, &lam, &table, &cfg).unwrap();
    println!(
        "{label} {lam}: compared {} skipped {} mismatches {}",
        report.compared_weights,
        report.unknown_skipped,
        report.mismatches.len()
    );
    assert!(report.agree, "{label}: {:?}", &report.mismatches[..report.mismatches.len().min(5)]);
    assert!(report.compared_weights > 0);
    assert!(antisymmetry_violations(&series, &ctx.oracle_setup(), &ctx.beta).is_empty());
}

#[test]
fn su22_agrees() {
    run("su2_n:2", &[0, 0, 0], 8, 10);
    run("su2_n:2", &[1, 0, 2], 8, 10);
}

#[test]
fn so44_agrees() {
    run("so4_n:4", &[0, 0, 0, 0], 6, 10);
    run("so4_n:4", &[0, 1, 0, 1], 6, 10);
}

#[test]
fn g2_agrees() {
    for extra in [[0, 0], [1, 0], [0, 1], [2, 1], [1, 3]] {
        run("g2_2", &extra, 8, 12);
    }
}

#[test]
fn su21_agrees() {
    run("su2_n:1", &[0, 0], 6, 10);
}
