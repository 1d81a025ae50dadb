//! Acceptance scoreboard shared by the `selftest` subcommand and the
//! `acceptance` test target.

use std::time::Instant;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::Result;
use crate::formal::{convolve, dirac, heaviside, heaviside_power};
use crate::lattice::{binomial, q, Weight, Q};
use crate::oracle::{antisymmetry_violations, check_theorem1, heckman_lhs_rhs, quat_heckman, OracleConfig};
use crate::quaternionic::{
    prop1_admissible, sample_parameter, theorem1_branch, verify_dominance_29, QuaternionicContext,
};
use crate::repweights::{freudenthal, weyl_dimension};
use crate::rootsystems::{
    compact_positive, group_order_bound_from_env, positive_systems_containing, small_system, CartanType, FormLabel,
    RootDatum,
};
use crate::specialcases::{
    check_prop3, holomorphic_parameter, prop3_branch, prop3_dominance_violations, theorem4_admissible, HermitianData,
    Sp1qContext,
};

/// Wall-clock budgets in seconds; every check is exact, so these are the only
/// tolerances.
pub const BUDGET_AC1: f64 = 5.0;
pub const BUDGET_AC2: f64 = 30.0;
pub const BUDGET_AC3: f64 = 120.0;
pub const BUDGET_AC4: f64 = 300.0;
pub const BUDGET_AC6: f64 = 120.0;
pub const BUDGET_AC7: f64 = 1.0;
pub const BUDGET_AC8: f64 = 30.0;

pub const AC1_STEPS: u32 = 50;
pub const AC2_SAMPLES: usize = 50;
pub const AC2_MAX_DIM: u64 = 10_000;
pub const AC4_STEP_BOUND: u32 = 12;
pub const AC8_SAMPLES: usize = 100;
const SEED: u64 = 0x5eed_2026;

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: &'static str,
    pub passed: bool,
    pub seconds: f64,
    pub budget: Option<f64>,
    pub detail: String,
}

impl CriterionResult {
    pub fn line(&self) -> String {
        let budget = self.budget.map(|b| format!(" / {b:.0}s")).unwrap_or_default();
        format!(
            "{} {}  [{:.2}s{}]  {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.id,
            self.seconds,
            budget,
            self.detail
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "passed": self.passed,
            "seconds": self.seconds,
            "budget": self.budget,
            "detail": self.detail,
        })
    }
}

struct Outcome {
    ok: bool,
    detail: String,
}

fn timed(id: &'static str, budget: Option<f64>, f: impl FnOnce() -> Result<Outcome>) -> CriterionResult {
    let start = Instant::now();
    let out = f();
    let seconds = start.elapsed().as_secs_f64();
    let (ok, detail) = match out {
        Ok(o) => (o.ok, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = budget.is_none_or(|b| seconds < b);
    let detail = if ok && !in_time { format!("{detail}; over time budget") } else { detail };
    CriterionResult { id, passed: ok && in_time, seconds, budget, detail }
}

pub fn ac1() -> CriterionResult {
    timed("AC-1", Some(BUDGET_AC1), || {
        let g = Weight::from_ints(&[1, 2]);
        let h = heaviside(&g, AC1_STEPS)?;
        let mut acc = dirac(&Weight::zero(2));
        let mut bad = Vec::new();
        for r in 0..=6u32 {
            let p = heaviside_power(&g, r, AC1_STEPS)?;
            let ok_conv = acc.disagreements(&p).is_empty();
            let ok_coeff = r == 0
                || (0..=AC1_STEPS as i64).all(|k| {
                    let w = g.scale(&(q(r as i64) / q(2) + q(k)));
                    p.coefficient(&w).known() == Some(Q::from_integer(binomial(k + r as i64 - 1, r as i64 - 1)))
                        && acc.is_known(&w)
                });
            if !(ok_conv && ok_coeff) {
                bad.push(r);
            }
            acc = convolve(&acc, &h);
        }
        Ok(Outcome {
            ok: bad.is_empty(),
            detail: if bad.is_empty() {
                format!("r = 0..6 at N = {AC1_STEPS} match the iterated convolution")
            } else {
                format!("mismatch at r = {bad:?}")
            },
        })
    })
}

pub fn ac2() -> CriterionResult {
    timed("AC-2", Some(BUDGET_AC2), || {
        let types = [
            (CartanType::A, 1),
            (CartanType::A, 2),
            (CartanType::A, 3),
            (CartanType::B, 2),
            (CartanType::B, 3),
            (CartanType::C, 3),
            (CartanType::G, 2),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut done = 0;
        let mut failures = Vec::new();
        let mut attempts = 0;
        while done < AC2_SAMPLES && attempts < 20 * AC2_SAMPLES {
            attempts += 1;
            let (ty, rank) = types[rng.random_range(0..types.len())];
            let rd = RootDatum::of_type(ty, rank)?;
            let form = rd.form();
            let ps = rd.positive_system();
            let mut hw = Weight::zero(rd.dim());
            for i in 0..rank {
                let c: i64 = rng.random_range(0..=4);
                hw = hw.add_scaled(&q(c), &rd.fundamental_weight(i)?);
            }
            let dim = weyl_dimension(&hw, &ps, form)?;
            if dim > BigInt::from(AC2_MAX_DIM) {
                continue;
            }
            done += 1;
            let table = freudenthal(&hw, &ps, form)?;
            let invariant = rd
                .simple_roots()
                .iter()
                .all(|s| table.mults.iter().all(|(w, m)| table.multiplicity(&form.refl(w, s)) == *m));
            if BigInt::from(table.dimension()) != dim || !invariant {
                failures.push(format!("{ty:?}{rank} {hw}"));
            }
        }
        Ok(Outcome {
            ok: failures.is_empty() && done == AC2_SAMPLES,
            detail: if failures.is_empty() {
                format!("{done} random highest weights: dimension and Weyl invariance exact")
            } else {
                format!("failures: {}", failures.join("; "))
            },
        })
    })
}

fn g2_extras() -> Vec<Vec<u32>> {
    (0..12).map(|i| vec![i % 4, i / 4]).collect()
}

fn sp12_parameters() -> Vec<Weight> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..3 {
            // Sigma-dominant: lam0 > lam1 > lam2 > 0
            let l2 = 1 + b;
            let l1 = l2 + 1 + a;
            out.push(Weight::from_ints(&[l1 + 1 + (a + b) % 2, l1, l2]));
        }
    }
    out
}

pub fn ac3() -> CriterionResult {
    timed("AC-3", Some(BUDGET_AC3), || {
        let cfg = OracleConfig::with_step_bound(10);
        let mut summary = Vec::new();
        let mut ok = true;
        for (label, extras) in [
            ("g2_2", g2_extras()),
            ("su2_n:2", (0..10u32).map(|i| vec![i % 2, (i / 2) % 3, i / 6]).collect()),
            ("so4_n:4", (0..10u32).map(|i| vec![i % 2, i / 2, 0, (i / 4) % 2]).collect()),
        ] {
            let ctx = QuaternionicContext::new(label.parse()?)?;
            let mut good = 0;
            for extra in &extras {
                let lam = sample_parameter(&ctx, extra)?;
                let (lhs, rhs) = quat_heckman(&ctx, &lam, &cfg)?;
                if lhs.disagreements(&rhs).is_empty() {
                    good += 1;
                } else {
                    ok = false;
                }
            }
            summary.push(format!("{label} {good}/{}", extras.len()));
        }
        let ctx = Sp1qContext::new(2)?;
        let setup = ctx.oracle_setup();
        let params = sp12_parameters();
        let mut good = 0;
        for lam in &params {
            let (_, lam2) = ctx.decompose_parameter(lam);
            let (lhs, rhs) = heckman_lhs_rhs(&setup, &lam2, &cfg)?;
            if lhs.disagreements(&rhs).is_empty() {
                good += 1;
            } else {
                ok = false;
            }
        }
        summary.push(format!("sp1_q:2 {good}/{}", params.len()));
        Ok(Outcome { ok, detail: summary.join(", ") })
    })
}

/// Parameters and cutoffs for the closed-form vs oracle runs.
fn ac4_runs() -> Vec<(&'static str, Vec<u32>, u32)> {
    let mut runs: Vec<(&'static str, Vec<u32>, u32)> =
        [[0, 0], [1, 0], [0, 1], [2, 1], [1, 3]].iter().map(|e| ("g2_2", e.to_vec(), 8)).collect();
    runs.push(("su2_n:2", vec![0, 0, 0], 8));
    runs.push(("su2_n:2", vec![1, 0, 2], 8));
    runs.push(("so4_n:4", vec![0, 0, 0, 0], 6));
    runs.push(("so4_n:4", vec![0, 1, 0, 1], 6));
    runs
}

struct Ac4Run {
    label: &'static str,
    lam: Weight,
    agree: bool,
    compared: usize,
    dominance_violations: usize,
    antisymmetry_violations: usize,
}

fn ac4_data() -> Result<Vec<Ac4Run>> {
    let cfg = OracleConfig::with_step_bound(AC4_STEP_BOUND);
    let mut out = Vec::new();
    for (label, extra, cutoff) in ac4_runs() {
        let ctx = QuaternionicContext::new(label.parse()?)?;
        let lam = sample_parameter(&ctx, &extra)?;
        let hc = ctx.parameter(lam.clone())?;
        let table = theorem1_branch(&ctx, &hc, cutoff)?;
        let dominance = verify_dominance_29(&ctx, &table)?.len();
        let (series, report) = check_theorem1(&ctx, &lam, &table, &cfg)?;
        let anti = antisymmetry_violations(&series, &ctx.oracle_setup(), &ctx.beta).len();
        out.push(Ac4Run {
            label,
            lam,
            agree: report.agree,
            compared: report.compared_weights,
            dominance_violations: dominance,
            antisymmetry_violations: anti,
        });
    }
    Ok(out)
}

/// AC-4, AC-5 and AC-9 share the oracle runs.
pub fn ac4_5_9() -> Vec<CriterionResult> {
    let start = Instant::now();
    let data = ac4_data();
    let seconds = start.elapsed().as_secs_f64();
    let data = match data {
        Ok(d) => d,
        Err(e) => {
            return ["AC-4", "AC-5", "AC-9"]
                .into_iter()
                .map(|id| CriterionResult { id, passed: false, seconds, budget: None, detail: format!("error: {e}") })
                .collect()
        }
    };
    let describe = |f: &dyn Fn(&Ac4Run) -> bool| {
        data.iter().filter(|r| !f(r)).map(|r| format!("{} {}", r.label, r.lam)).collect::<Vec<_>>()
    };
    let bad4 = describe(&|r| r.agree && r.compared > 0);
    let compared: usize = data.iter().map(|r| r.compared).sum();
    let in_time = seconds < BUDGET_AC4;
    let ac4 = CriterionResult {
        id: "AC-4",
        passed: bad4.is_empty() && in_time,
        seconds,
        budget: Some(BUDGET_AC4),
        detail: if bad4.is_empty() {
            format!("{} runs, {compared} weights compared, step bound {AC4_STEP_BOUND}", data.len())
        } else {
            format!("disagreement: {}", bad4.join("; "))
        },
    };
    let bad5 = describe(&|r| r.dominance_violations == 0);
    let ac5 = CriterionResult {
        id: "AC-5",
        passed: bad5.is_empty(),
        seconds: 0.0,
        budget: None,
        detail: if bad5.is_empty() {
            "every table entry is dominant for Psi_q".into()
        } else {
            format!("violations: {}", bad5.join("; "))
        },
    };
    let bad9 = describe(&|r| r.antisymmetry_violations == 0);
    let ac9 = CriterionResult {
        id: "AC-9",
        passed: bad9.is_empty(),
        seconds: 0.0,
        budget: None,
        detail: if bad9.is_empty() {
            "oracle series vanish on the wall and are S_beta-odd".into()
        } else {
            format!("violations: {}", bad9.join("; "))
        },
    };
    vec![ac4, ac5, ac9]
}

pub fn ac6() -> CriterionResult {
    timed("AC-6", Some(BUDGET_AC6), || {
        let cfg = OracleConfig::with_step_bound(10);
        let mut summary = Vec::new();
        let mut ok = true;
        let cases: [(usize, Vec<Vec<i64>>, u32); 2] = [
            (2, vec![vec![3, 2, 1], vec![5, 3, 1], vec![4, 3, 1], vec![6, 2, 1]], 5),
            (3, vec![vec![4, 3, 2, 1], vec![6, 4, 2, 1], vec![5, 4, 3, 1]], 3),
        ];
        for (qq, lams, cutoff) in cases {
            let ctx = Sp1qContext::new(qq)?;
            let mut good = 0;
            for l in &lams {
                let lam = Weight::from_ints(l);
                let hc = ctx.parameter(lam.clone())?;
                let table = prop3_branch(&ctx, &hc, cutoff)?;
                let (_, rep) = check_prop3(&ctx, &lam, &table, &cfg)?;
                if rep.agree && rep.compared_weights > 0 && prop3_dominance_violations(&ctx, &table).is_empty() {
                    good += 1;
                } else {
                    ok = false;
                }
            }
            summary.push(format!("sp1_q:{qq} {good}/{}", lams.len()));
        }
        // q = 2: the multiplicity at level p of the trivial K2-type is C(p+1, 1)
        let ctx = Sp1qContext::new(2)?;
        let hc = ctx.parameter(Weight::from_ints(&[3, 2, 1]))?;
        let t = prop3_branch(&ctx, &hc, 6)?;
        let spot = t.entries.values().enumerate().all(|(p, m)| *m == BigInt::from(p + 1)) && t.entries.len() == 7;
        ok &= spot;
        summary.push(format!("C(p+1,1) spot check {}", if spot { "ok" } else { "failed" }));
        Ok(Outcome { ok, detail: summary.join(", ") })
    })
}

pub fn ac7() -> CriterionResult {
    timed("AC-7", Some(BUDGET_AC7), || {
        let ctx = QuaternionicContext::new(FormLabel::G2Split)?;
        let delta = compact_positive(&ctx.rd);
        let systems = positive_systems_containing(&ctx.rd, &delta, group_order_bound_from_env(1_000_000))?;
        let small = small_system(&ctx.rd)?;
        let mut admissible = Vec::new();
        for s in &systems {
            if prop1_admissible(&ctx, s)? {
                admissible.push(s.clone());
            }
        }
        let ok = systems.len() == 3 && admissible.len() == 1 && admissible[0] == small.psi;
        Ok(Outcome {
            ok,
            detail: format!("{} systems contain Delta, {} admissible (the small one)", systems.len(), admissible.len()),
        })
    })
}

struct Ac8Case {
    label: &'static str,
    tube: bool,
}

const AC8_CASES: [Ac8Case; 4] = [
    Ac8Case { label: "su_pq:2,2", tube: true },
    Ac8Case { label: "su_pq:2,3", tube: false },
    Ac8Case { label: "sp_n_R:2", tube: true },
    Ac8Case { label: "so_star:5", tube: false },
];

fn random_regular(rng: &mut ChaCha8Rng, hd: &HermitianData) -> Result<Weight> {
    loop {
        let mut lam = Weight::zero(hd.rd.dim());
        for i in 0..hd.rd.rank() {
            let c: i64 = rng.random_range(-6..=6);
            lam = lam.add_scaled(&q(c), &hd.rd.fundamental_weight(i)?);
        }
        if hd.chamber(&lam).is_ok() {
            return Ok(lam);
        }
    }
}

pub fn ac8() -> CriterionResult {
    timed("AC-8", Some(BUDGET_AC8), || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
        let mut ok = true;
        let mut parts = Vec::new();
        for case in &AC8_CASES {
            let hd = HermitianData::new(case.label.parse()?)?;
            let hc = holomorphic_parameter(&hd)?;
            let got = theorem4_admissible(&hd, &hc)?.admissible;
            let expected = !case.tube;
            ok &= got == expected;
            let mut inv_fail = 0;
            let symmetric = hd.itilde_set.iter().all(|r| hd.i_set.contains(&-r));
            for _ in 0..AC8_SAMPLES {
                let lam = random_regular(&mut rng, &hd)?;
                let base = hd.criterion(&lam)?;
                // same chamber: positive multiples and shifts by the chamber's rho
                let ch = hd.chamber(&lam)?;
                let rho_ch = ch.iter().fold(Weight::zero(lam.dim()), |a, g| &a + g).half();
                let constant = hd.criterion(&lam.scale_int(3))? == base && hd.criterion(&(&lam + &rho_ch))? == base;
                // negating lam negates the chamber, exchanging I with -I~
                let neg_ch = hd.chamber(&-&lam)?;
                let anti_chamber = ch.iter().all(|g| neg_ch.contains(&-g)) && neg_ch.len() == ch.len();
                let anti = if symmetric { hd.criterion(&-&lam)? == base } else { anti_chamber };
                if !(constant && anti_chamber && anti) {
                    inv_fail += 1;
                }
            }
            ok &= inv_fail == 0;
            parts.push(format!(
                "{} {} expected {} got {}, invariants {}/{}",
                case.label,
                if case.tube { "tube" } else { "non-tube" },
                expected,
                got,
                AC8_SAMPLES - inv_fail,
                AC8_SAMPLES
            ));
        }
        Ok(Outcome { ok, detail: parts.join("; ") })
    })
}

pub fn run_all() -> Vec<CriterionResult> {
    let mut out = vec![ac1(), ac2(), ac3()];
    let mut shared = ac4_5_9();
    let ac9 = shared.pop().expect("three results");
    out.append(&mut shared);
    out.push(ac6());
    out.push(ac7());
    out.push(ac8());
    out.push(ac9);
    out
}
