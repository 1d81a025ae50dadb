//! SO(3, p) restricted to its so(3) factor, Sp(1, q) restricted to the
//! distinguished Sp(1, 1), and admissibility of Hermitian discrete series over
//! the semisimple part of `K`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::formal::DeltaSeries;
use crate::lattice::{binomial, q, Weight, Q};
use crate::oracle::{compare_with_table, dv_rhs, ComparisonReport, OracleConfig, OracleSetup};
use crate::quaternionic::BranchingTable;
use crate::repweights::{freudenthal, hc_to_highest_weight, HCParameter};
use crate::rootsystems::{compact_positive, FormLabel, PositiveSystem, RootDatum};

/// Verdict with an explanation, as reported by the CLI.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub admissible: bool,
    pub reason: String,
}

impl Verdict {
    pub fn to_json(&self) -> Value {
        json!({ "admissible": self.admissible, "reason": self.reason })
    }
}

/// Discrete series of SO(3, 2n) never restrict admissibly to the so(3) factor.
pub fn prop2_admissible(n: u32) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::Config("SO(3, 2n) needs n >= 1".into()));
    }
    Ok(Verdict {
        admissible: false,
        reason: format!(
            "SO(3,{}): K1 = SO(3) lies in a copy of SO(3,1), which has empty discrete series, \
             so no square integrable representation restricts admissibly to K1",
            2 * n
        ),
    })
}

/// SO(3, p) for arbitrary `p`; odd `p` has no discrete series at all.
pub fn so3_admissible(p: u32) -> Result<Verdict> {
    if p % 2 == 1 {
        return Err(domain!("SO(3,{p}) has empty discrete series"));
    }
    prop2_admissible(p / 2)
}

/// Sp(1, q) in coordinates `eps1 = e_1`, `delta_j = e_{j+1}`.
pub struct Sp1qContext {
    pub q: usize,
    pub rd: RootDatum,
    pub sigma: PositiveSystem,
    pub h0_roots: Vec<Weight>,
    pub sigma_q: PositiveSystem,
    pub k2_positive: PositiveSystem,
}

impl Sp1qContext {
    pub fn new(qq: usize) -> Result<Self> {
        let rd = RootDatum::for_form(FormLabel::Sp1q(qq))?;
        let dim = qq + 1;
        let form = rd.form();
        let eps = Weight::unit(dim, 0);
        let d1 = Weight::unit(dim, 1);
        let mut h0_roots = Vec::new();
        for r in [eps.scale_int(2), d1.scale_int(2), &eps + &d1, &eps - &d1] {
            h0_roots.push(-&r);
            h0_roots.push(r);
        }
        let sigma = rd.positive_system();
        let sigma_q = sigma.filter(form, |g| h0_roots.contains(g));
        let k2_positive = sigma.filter(form, |g| rd.is_compact(g) && g.0[0].is_zero());
        Ok(Sp1qContext { q: qq, rd, sigma, h0_roots, sigma_q, k2_positive })
    }

    pub fn eps1(&self) -> Weight {
        Weight::unit(self.q + 1, 0)
    }

    pub fn delta1(&self) -> Weight {
        Weight::unit(self.q + 1, 1)
    }

    /// `lam1` on the `eps1` line, `lam2` on the `delta` coordinates.
    pub fn decompose_parameter(&self, lam: &Weight) -> (Weight, Weight) {
        let lam1 = self.eps1().scale(&lam.0[0]);
        (lam1.clone(), lam - &lam1)
    }

    pub fn parameter(&self, lam: Weight) -> Result<HCParameter> {
        let hc = HCParameter::new(&self.rd, lam, compact_positive(&self.rd))?;
        if let Some(g) = self.sigma.iter().find(|g| !self.rd.form().ip(&hc.lam, g).is_positive()) {
            return Err(domain!("parameter {} is not dominant for Sigma: pairing with {g}", hc.lam));
        }
        Ok(hc)
    }

    /// Harish-Chandra parameters `(k+1) delta1` of the su2(2 delta1)-constituents
    /// of the `K2`-type of `lam2`, with multiplicities `m(k) - m(k+2)`.
    pub fn su2_constituents(&self, lam2: &Weight) -> Result<BTreeMap<Weight, u64>> {
        let form = self.rd.form();
        let hw = hc_to_highest_weight(lam2, &self.k2_positive, form)?;
        let table = freudenthal(&hw, &self.k2_positive, form)?;
        let mut by_level: BTreeMap<BigInt, u64> = BTreeMap::new();
        for (w, m) in &table.mults {
            *by_level.entry(w.0[1].to_integer()).or_insert(0) += m;
        }
        let get = |k: &BigInt| by_level.get(k).copied().unwrap_or(0);
        let mut out = BTreeMap::new();
        for k in by_level.keys().filter(|k| !k.is_negative()) {
            let m = get(k) - get(&(k + 2));
            if m > 0 {
                let c = Q::from_integer(k + 1);
                out.insert(self.delta1().scale(&c), m);
            }
        }
        Ok(out)
    }

    /// Level `p` of a parameter `mu = lam1 + sigma + (p + q - 1) eps1`.
    pub fn level(&self, lam1: &Weight, mu: &Weight) -> Q {
        &mu.0[0] - &lam1.0[0] - q(self.q as i64 - 1)
    }

    pub fn oracle_setup(&self) -> OracleSetup {
        let eps = self.eps1();
        let d1 = self.delta1();
        OracleSetup {
            rd: self.rd.clone(),
            psi: self.sigma.clone(),
            u_basis: vec![eps.clone(), d1.clone()],
            phi_hu: self.h0_roots.clone(),
            phi_lu: vec![eps.scale_int(2), eps.scale_int(-2), d1.scale_int(2), d1.scale_int(-2)],
            walls: vec![eps.scale_int(2), d1.scale_int(2)],
            k2_positive: self.k2_positive.clone(),
            uk2_basis: vec![d1],
        }
    }
}

/// Closed form: `mu = lam1 + sigma + (p + q - 1) eps1` with multiplicity
/// `sum M(sigma) C(p + 2q - 3, 2q - 3)`, complete for `p <= cutoff`.
pub fn prop3_branch(ctx: &Sp1qContext, lam: &HCParameter, cutoff: u32) -> Result<BranchingTable> {
    let hc = ctx.parameter(lam.lam.clone())?;
    let (lam1, lam2) = ctx.decompose_parameter(&hc.lam);
    let constituents = ctx.su2_constituents(&lam2)?;
    let r = 2 * ctx.q as i64 - 3;
    let eps = ctx.eps1();
    let mut entries = BTreeMap::new();
    for p in 0..=cutoff as i64 {
        let b = binomial(p + r, r);
        let base = lam1.add_scaled(&q(p + ctx.q as i64 - 1), &eps);
        for (sigma, m) in &constituents {
            *entries.entry(&base + sigma).or_insert_with(BigInt::zero) += &b * BigInt::from(*m);
        }
    }
    Ok(BranchingTable {
        entries,
        cutoff,
        complete_for: format!("all mu with (mu - lam1, eps1) - (q - 1) <= {cutoff}, lam1 = {lam1}"),
    })
}

/// Parameters of `table` that are not dominant for `Sigma_q`.
pub fn prop3_dominance_violations(ctx: &Sp1qContext, table: &BranchingTable) -> Vec<Weight> {
    let form = ctx.rd.form();
    table.entries.keys().filter(|mu| ctx.sigma_q.iter().any(|g| !form.ip(mu, g).is_positive())).cloned().collect()
}

/// Oracle series and its comparison with the closed form.
pub fn check_prop3(
    ctx: &Sp1qContext,
    lam: &Weight,
    table: &BranchingTable,
    cfg: &OracleConfig,
) -> Result<(DeltaSeries, ComparisonReport)> {
    let setup = ctx.oracle_setup();
    let series = dv_rhs(&setup, lam, cfg)?;
    let (lam1, _) = ctx.decompose_parameter(lam);
    let cutoff = q(table.cutoff as i64);
    let report = compare_with_table(&series, &setup, table, |mu| ctx.level(&lam1, mu) <= cutoff)?;
    Ok((series, report))
}

/// Hermitian form with its holomorphic system and the two test sets.
pub struct HermitianData {
    pub label: FormLabel,
    pub rd: RootDatum,
    pub psi_h: PositiveSystem,
    pub i_set: Vec<Weight>,
    pub itilde_set: Vec<Weight>,
}

impl HermitianData {
    pub fn new(label: FormLabel) -> Result<Self> {
        if !label.is_hermitian() {
            return Err(Error::Config(format!("{label} is not a Hermitian form")));
        }
        let rd = RootDatum::for_form(label)?;
        let (i_set, itilde_set) = table1_sets(label)?;
        for r in i_set.iter().chain(&itilde_set) {
            if !rd.is_root(r) {
                return Err(crate::error::internal!("{r} from the admissibility table is not a root of {label}"));
            }
        }
        let psi_h = rd.positive_system();
        Ok(HermitianData { label, rd, psi_h, i_set, itilde_set })
    }

    /// `Psi_lambda = {g : <lam, g^> > 0}`.
    pub fn chamber(&self, lam: &Weight) -> Result<Vec<Weight>> {
        let form = self.rd.form();
        let mut out = Vec::new();
        for g in self.rd.roots() {
            let p = form.pair(lam, g);
            if p.is_zero() {
                return Err(domain!("parameter {lam} is singular: orthogonal to {g}"));
            }
            if p.is_positive() {
                out.push(g.clone());
            }
        }
        Ok(out)
    }

    /// The set test itself, for any regular `lam`.
    pub fn criterion(&self, lam: &Weight) -> Result<bool> {
        let ch = self.chamber(lam)?;
        Ok(self.i_set.iter().all(|r| ch.contains(r)) || self.itilde_set.iter().all(|r| ch.contains(r)))
    }
}

fn e(dim: usize, i: usize) -> Weight {
    Weight::unit(dim, i - 1)
}

fn half_vec(signs: [i64; 8]) -> Weight {
    Weight::from_ints(&signs).half()
}

/// The sets `I` and `I~` for each Hermitian family (indices one-based as in
/// the usual tables).
pub fn table1_sets(label: FormLabel) -> Result<(Vec<Weight>, Vec<Weight>)> {
    let neg = |v: &[Weight]| v.iter().map(|w| -w).collect::<Vec<_>>();
    Ok(match label {
        FormLabel::SpR(n) | FormLabel::SoStar(n) => {
            let l = n / 2;
            let mut i: Vec<Weight> = (1..=l).map(|k| &e(n, k) + &e(n, n - k + 1)).collect();
            if n % 2 == 0 {
                let t = neg(&i);
                (i, t)
            } else if let FormLabel::SpR(_) = label {
                i.insert(0, e(n, l + 1).scale_int(2));
                let t = neg(&i);
                (i, t)
            } else {
                if l == 0 {
                    return Err(Error::Config("so*(2n) needs n >= 2".into()));
                }
                let mut t = neg(&i);
                i.push(&e(n, l + 1) + &e(n, l + 2));
                t.push(-&(&e(n, l) + &e(n, l + 1)));
                (i, t)
            }
        }
        FormLabel::SuPq(p, qq) => {
            if p > qq {
                return Err(domain!("su(p,q) needs p <= q"));
            }
            if p == 0 {
                return Err(Error::Config("su(p,q) needs p >= 1".into()));
            }
            let n = p + qq;
            let (pi, qi) = (p as i64, qq as i64);
            let mut i = Vec::new();
            let mut t = Vec::new();
            for idx in 1..=pi {
                let gamma = idx + ((idx - 1) * (qi - pi)).div_euclid(pi) + pi;
                let num = idx * (qi - pi);
                let b = if num % pi != 0 { idx + 1 + num.div_euclid(pi) + pi } else { idx + num / pi + pi };
                i.push(&e(n, idx as usize) - &e(n, gamma as usize));
                t.push(&e(n, b as usize) - &e(n, idx as usize));
            }
            (i, t)
        }
        FormLabel::E6Hermitian => {
            let i = vec![
                half_vec([-1, -1, -1, -1, 1, -1, -1, 1]),
                half_vec([-1, -1, 1, 1, 1, -1, -1, 1]),
                &e(8, 1) + &e(8, 5),
                &e(8, 2) + &e(8, 5),
            ];
            let t = neg(&i);
            (i, t)
        }
        FormLabel::E7Hermitian => {
            let i = vec![
                half_vec([-1, 1, -1, -1, 1, 1, -1, 1]),
                half_vec([-1, -1, 1, 1, -1, 1, -1, 1]),
                &e(8, 1) + &e(8, 6),
            ];
            let t = neg(&i);
            (i, t)
        }
        _ => return Err(Error::Config(format!("{label} is not a Hermitian form"))),
    })
}

/// Admissibility over `K_ss`: `I` or `I~` lies in `Psi_lambda`.
pub fn theorem4_admissible(hd: &HermitianData, lam: &HCParameter) -> Result<Verdict> {
    let delta = compact_positive(&hd.rd);
    if let Some(g) = delta.iter().find(|g| !hd.rd.form().ip(&lam.lam, g).is_positive()) {
        return Err(domain!("parameter {} is not dominant for Psi_h cap Phi_c: pairing with {g}", lam.lam));
    }
    let ch = hd.chamber(&lam.lam)?;
    let in_i = hd.i_set.iter().all(|r| ch.contains(r));
    let in_t = hd.itilde_set.iter().all(|r| ch.contains(r));
    let reason = match (in_i, in_t) {
        (true, _) => "I is contained in Psi_lambda".to_string(),
        (false, true) => "I~ is contained in Psi_lambda".to_string(),
        (false, false) => "neither I nor I~ is contained in Psi_lambda".to_string(),
    };
    Ok(Verdict { admissible: in_i || in_t, reason })
}

/// A holomorphic parameter: `rho` of the holomorphic system.
pub fn holomorphic_parameter(hd: &HermitianData) -> Result<HCParameter> {
    HCParameter::new(&hd.rd, hd.psi_h.rho().clone(), compact_positive(&hd.rd))
}
