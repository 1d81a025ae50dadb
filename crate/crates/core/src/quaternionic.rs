//! Quaternionic real forms and their distinguished su(2,1): parameter split,
//! the closed-form branching table and the admissibility criterion.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, internal, Error, Result};
use crate::lattice::{binomial, frac, q, InnerProductForm, Weight, Q};
use crate::repweights::{freudenthal, hc_to_highest_weight, restrict_weights, HCParameter, WeightMultTable};
use crate::rootsystems::{compact_positive, small_system, FormLabel, PositiveSystem, RootDatum};

/// Multiplicities of discrete series of the subgroup, keyed by parameter.
#[derive(Clone, Debug, PartialEq)]
pub struct BranchingTable {
    pub entries: BTreeMap<Weight, BigInt>,
    pub cutoff: u32,
    /// Human-readable statement of the region where the table is complete.
    pub complete_for: String,
}

impl BranchingTable {
    pub fn multiplicity(&self, mu: &Weight) -> BigInt {
        self.entries.get(mu).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "cutoff": self.cutoff,
            "completeFor": self.complete_for,
            "entries": self.entries.iter()
                .map(|(mu, m)| json!({ "mu": mu.to_string(), "mult": m.to_string() }))
                .collect::<Vec<_>>(),
        })
    }
}

pub struct QuaternionicContext {
    pub label: FormLabel,
    pub rd: RootDatum,
    pub psi: PositiveSystem,
    pub beta: Weight,
    pub alpha: Weight,
    /// Fundamental weights of `{beta - alpha, alpha, beta}`, with `Lambda1 _|_ alpha`.
    pub lambda_1: Weight,
    pub lambda_2: Weight,
    pub d: usize,
    /// Compact roots orthogonal to `beta`.
    pub k2_roots: Vec<Weight>,
    pub k2_positive: PositiveSystem,
    tables: Mutex<HashMap<Weight, Arc<WeightMultTable>>>,
}

impl QuaternionicContext {
    pub fn new(label: FormLabel) -> Result<Self> {
        if !label.is_quaternionic() {
            return Err(Error::Config(format!("{label} is not a quaternionic form")));
        }
        Self::from_root_datum(label, RootDatum::for_form(label)?)
    }

    pub fn from_root_datum(label: FormLabel, rd: RootDatum) -> Result<Self> {
        let ss = small_system(&rd)?;
        let form = rd.form();
        let (beta, alpha) = (ss.beta, ss.alpha);
        let lambda_1 = (&beta.scale_int(2) - &alpha).scale(&frac(1, 3));
        let lambda_2 = (&alpha + &beta).scale(&frac(1, 3));
        let psi_n = ss.psi.iter().filter(|g| !rd.is_compact(g)).count();
        let k2_roots: Vec<Weight> = rd.compact_roots().into_iter().filter(|g| form.ip(g, &beta).is_zero()).collect();
        let k2_positive = PositiveSystem::new(form, k2_roots.iter().filter(|g| ss.psi.contains(g)).cloned().collect());
        let ctx = QuaternionicContext {
            label,
            rd: rd.clone(),
            psi: ss.psi,
            beta,
            alpha,
            lambda_1,
            lambda_2,
            d: psi_n / 2,
            k2_roots,
            k2_positive,
            tables: Mutex::new(HashMap::new()),
        };
        ctx.check_invariants()?;
        Ok(ctx)
    }

    fn check_invariants(&self) -> Result<()> {
        let form = self.form();
        let b_minus_a = &self.beta - &self.alpha;
        for r in [&self.alpha, &self.beta, &b_minus_a] {
            if !self.rd.is_root(r) || !self.rd.is_root(&-r) {
                return Err(internal!("{r} should be a root of {}", self.label));
            }
        }
        if !form.ip(&self.lambda_1, &self.alpha).is_zero() || !form.ip(&self.lambda_2, &b_minus_a).is_zero() {
            return Err(internal!("Lambda1, Lambda2 are not dual to the simple roots of Psi_q"));
        }
        if &self.lambda_1 + &self.lambda_2 != self.beta {
            return Err(internal!("Lambda1 + Lambda2 != beta"));
        }
        // positive k2 roots project to nonnegative multiples of beta - 2 alpha
        let dir = self.uk2_direction();
        for g in self.k2_positive.iter() {
            let p = self.q_u(g);
            let c = form.span_coordinates(std::slice::from_ref(&dir), &p);
            if !p.is_zero() && c.is_none_or(|c| c[0].is_negative()) {
                return Err(internal!("positive k2 root {g} projects to {p}"));
            }
        }
        // the noncompact roots of Psi project onto {Lambda1, Lambda2, alpha, beta - alpha}
        let allowed = [&self.lambda_1, &self.lambda_2, &self.alpha, &b_minus_a];
        for g in self.psi.iter().filter(|g| !self.rd.is_compact(g)) {
            let p = self.q_u(g);
            if !allowed.contains(&&p) {
                return Err(internal!("noncompact root {g} projects to {p}"));
            }
        }
        Ok(())
    }

    pub fn form(&self) -> &InnerProductForm {
        self.rd.form()
    }

    pub fn u_basis(&self) -> Vec<Weight> {
        vec![self.alpha.clone(), self.beta.clone()]
    }

    /// `beta - 2 alpha`, spanning `u` intersected with `k2`.
    pub fn uk2_direction(&self) -> Weight {
        &self.beta - &self.alpha.scale_int(2)
    }

    pub fn q_u(&self, v: &Weight) -> Weight {
        self.form().project(&self.u_basis(), v)
    }

    pub fn q_uk2(&self, v: &Weight) -> Weight {
        self.form().project(&[self.uk2_direction()], v)
    }

    /// Compact dominant parameter check followed by Psi-dominance.
    pub fn parameter(&self, lam: Weight) -> Result<HCParameter> {
        let hc = HCParameter::new(&self.rd, lam, compact_positive(&self.rd))?;
        if let Some(g) = self.psi.iter().find(|g| !self.form().ip(&hc.lam, g).is_positive()) {
            return Err(domain!(
                "not a quaternionic discrete series parameter: ({}, {g}) <= 0; \
                 the restriction to H is not admissible unless lambda is dominant for the small system Psi",
                hc.lam
            ));
        }
        Ok(hc)
    }

    /// `lam = lam1 + lam2` with `lam1` on the line of `beta` and `lam2 _|_ beta`.
    pub fn decompose_parameter(&self, lam: &Weight) -> (Weight, Weight) {
        let form = self.form();
        let c = form.ip(lam, &self.beta) / form.norm2(&self.beta);
        let lam1 = self.beta.scale(&c);
        let lam2 = lam - &lam1;
        (lam1, lam2)
    }

    /// Multiplicities of the `K2`-type with infinitesimal character `lam2`.
    pub fn k2_table(&self, lam2: &Weight) -> Result<Arc<WeightMultTable>> {
        if let Some(t) = self.tables.lock().unwrap().get(lam2) {
            return Ok(t.clone());
        }
        let hw = hc_to_highest_weight(lam2, &self.k2_positive, self.form())?;
        let t = Arc::new(freudenthal(&hw, &self.k2_positive, self.form())?);
        self.tables.lock().unwrap().insert(lam2.clone(), t.clone());
        Ok(t)
    }

    /// Restricted `K2`-weights with multiplicities.
    pub fn restricted_k2_weights(&self, lam2: &Weight) -> Result<BTreeMap<Weight, u64>> {
        let table = self.k2_table(lam2)?;
        Ok(restrict_weights(&table, |w| self.q_uk2(w)))
    }

    /// `(p + q)` for a parameter of the table, from its `beta`-pairing.
    pub fn level(&self, lam1: &Weight, mu: &Weight) -> Q {
        let form = self.form();
        q(2) * form.ip(&(mu - lam1), &self.beta) / form.norm2(&self.beta) - q(self.d as i64 - 1)
    }
}

/// Closed-form branching table: at
/// `mu = lam1 + sigma + (p + (d-1)/2) Lambda1 + (q + (d-1)/2) Lambda2`
/// the multiplicity is `sum M(sigma) C(p+d-2, d-2) C(q+d-2, d-2)`, where
/// `sigma` runs over restricted weights of the `K2`-type of `lam2`.
/// Complete for every `mu` with `p + q <= cutoff`.
pub fn theorem1_branch(ctx: &QuaternionicContext, lam: &HCParameter, cutoff: u32) -> Result<BranchingTable> {
    let hc = ctx.parameter(lam.lam.clone())?;
    let (lam1, lam2) = ctx.decompose_parameter(&hc.lam);
    let restricted = ctx.restricted_k2_weights(&lam2)?;
    let d = ctx.d as i64;
    let shift = frac(d - 1, 2);
    let mut entries: BTreeMap<Weight, BigInt> = BTreeMap::new();
    for p in 0..=cutoff as i64 {
        let bp = binomial(p + d - 2, d - 2);
        if bp.is_zero() {
            continue;
        }
        for qq in 0..=(cutoff as i64 - p) {
            let bq = binomial(qq + d - 2, d - 2);
            if bq.is_zero() {
                continue;
            }
            let base = lam1.add_scaled(&(q(p) + &shift), &ctx.lambda_1).add_scaled(&(q(qq) + &shift), &ctx.lambda_2);
            let c = &bp * &bq;
            for (sigma, m) in &restricted {
                *entries.entry(&base + sigma).or_insert_with(BigInt::zero) += &c * BigInt::from(*m);
            }
        }
    }
    entries.retain(|_, m| !m.is_zero());
    Ok(BranchingTable {
        entries,
        cutoff,
        complete_for: format!("all mu with 2(mu - lam1, beta)/(beta, beta) - (d - 1) <= {cutoff}, lam1 = {lam1}"),
    })
}

/// Parameters of `table` that fail `(mu, alpha) > 0` or `(mu, beta - alpha) > 0`.
pub fn verify_dominance_29(ctx: &QuaternionicContext, table: &BranchingTable) -> Result<Vec<Weight>> {
    let form = ctx.form();
    let b_minus_a = &ctx.beta - &ctx.alpha;
    let mut bad = Vec::new();
    for mu in table.entries.keys() {
        let a = form.ip(mu, &ctx.alpha);
        let b = form.ip(mu, &b_minus_a);
        if !(a.is_positive() && b.is_positive()) {
            bad.push(mu.clone());
        } else if !form.ip(mu, &ctx.beta).is_positive() {
            return Err(internal!("(mu, beta) <= 0 although both simple pairings are positive"));
        }
    }
    Ok(bad)
}

/// Admissible restriction to the distinguished su(2,1) holds exactly for the
/// small system.
pub fn prop1_admissible(ctx: &QuaternionicContext, sigma: &PositiveSystem) -> Result<bool> {
    let delta = compact_positive(&ctx.rd);
    let compact_part = sigma.filter(ctx.form(), |g| ctx.rd.is_compact(g));
    if !sigma.is_superset_of(&delta) || compact_part != delta {
        return Err(domain!("positive system does not contain the compact system Delta"));
    }
    if sigma.len() * 2 != ctx.rd.roots().len() || sigma.iter().any(|g| !ctx.rd.is_root(g)) {
        return Err(domain!("not a positive system of {}", ctx.label));
    }
    Ok(*sigma == ctx.psi)
}

/// Smallest integral `Psi`-dominant regular parameter shifted by `extra`
/// multiples of the fundamental weights (in simple-root order).
pub fn sample_parameter(ctx: &QuaternionicContext, extra: &[u32]) -> Result<Weight> {
    let n = ctx.rd.rank();
    let coeffs: Vec<Q> = (0..n).map(|i| Q::one() + q(*extra.get(i).unwrap_or(&0) as i64)).collect();
    ctx.rd.from_basis(&coeffs, true)
}
