//! Independent evaluation of the distributional branching identities: the
//! Heckman restriction formula for the compact factor and the alternating
//! coset sum whose positive part gives the branching multiplicities.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, internal, Error, Result};
use crate::formal::{convolve_multiset, DeltaSeries};
use crate::lattice::{Weight, WeightMultiset, Q};
use crate::quaternionic::{BranchingTable, QuaternionicContext};
use crate::repweights::{freudenthal, hc_to_highest_weight, restrict_weights};
use crate::rootsystems::{
    compact_positive, coset_reps, group_order_bound_from_env, weyl_generate, PositiveSystem, RootDatum, WeylElement,
};

/// Default bound on Weyl groups enumerated by the oracle.
pub const ORACLE_GROUP_ORDER_BOUND: usize = 100_000;

#[derive(Clone, Debug)]
pub struct OracleConfig {
    pub step_bound: u32,
    pub group_order_bound: usize,
    /// Use the Heaviside series `y_S` itself instead of `(-1)^|S| y_S`.
    pub printed_sign: bool,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            step_bound: 12,
            group_order_bound: group_order_bound_from_env(ORACLE_GROUP_ORDER_BOUND),
            printed_sign: false,
        }
    }
}

impl OracleConfig {
    pub fn with_step_bound(step_bound: u32) -> Self {
        OracleConfig { step_bound, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if self.step_bound == 0 || self.group_order_bound == 0 {
            return Err(Error::Config("step bound and group order bound must be positive".into()));
        }
        Ok(())
    }
}

/// Everything the oracle needs about `G`, the subgroup `H` and the compact
/// factor `K2` whose restriction to `U cap K2` is described by Heckman's formula.
#[derive(Clone, Debug)]
pub struct OracleSetup {
    pub rd: RootDatum,
    pub psi: PositiveSystem,
    /// Basis of the Cartan subalgebra of `H`.
    pub u_basis: Vec<Weight>,
    /// Roots of `H`.
    pub phi_hu: Vec<Weight>,
    /// Compact roots of `H`.
    pub phi_lu: Vec<Weight>,
    /// Extraction keeps weights positive on every wall.
    pub walls: Vec<Weight>,
    pub k2_positive: PositiveSystem,
    pub uk2_basis: Vec<Weight>,
}

impl OracleSetup {
    pub fn q_u(&self, v: &Weight) -> Weight {
        self.rd.form().project(&self.u_basis, v)
    }

    pub fn q_uk2(&self, v: &Weight) -> Weight {
        self.rd.form().project(&self.uk2_basis, v)
    }

    fn dim(&self) -> usize {
        self.rd.dim()
    }
}

/// Compact roots killed by the projection to `u`; checked against the
/// orthogonality description.
pub fn phi_z(setup: &OracleSetup) -> Result<Vec<Weight>> {
    let form = setup.rd.form();
    let by_kernel: Vec<Weight> = setup.rd.compact_roots().into_iter().filter(|g| setup.q_u(g).is_zero()).collect();
    let by_orth: Vec<Weight> = setup
        .rd
        .compact_roots()
        .into_iter()
        .filter(|g| setup.u_basis.iter().all(|b| form.ip(g, b).is_zero()))
        .collect();
    if by_kernel != by_orth {
        return Err(internal!("the two descriptions of Phi_z disagree"));
    }
    if by_kernel.iter().any(|g| !by_kernel.contains(&-g)) {
        return Err(internal!("Phi_z is not symmetric"));
    }
    Ok(by_kernel)
}

pub fn phi_z_positive(setup: &OracleSetup, phi_z: &[Weight]) -> PositiveSystem {
    PositiveSystem::new(setup.rd.form(), phi_z.iter().filter(|g| setup.psi.contains(g)).cloned().collect())
}

/// `prod (sigma, g) / prod (rho_z, g)` over the positive roots of `Phi_z`.
pub fn weyl_polynomial(setup: &OracleSetup, phi_z_pos: &PositiveSystem, sigma: &Weight) -> Q {
    let form = setup.rd.form();
    let rho_z = phi_z_pos.rho();
    let mut num = Q::one();
    let mut den = Q::one();
    for g in phi_z_pos.iter() {
        num *= form.ip(sigma, g);
        den *= form.ip(rho_z, g);
    }
    num / den
}

fn check_strict(ms: &WeightMultiset) -> Result<()> {
    if ms.distinct().any(|(w, _)| w.is_zero()) {
        return Err(domain!("non-strict multiset: the zero weight occurs"));
    }
    Ok(())
}

/// `(-1)^|S| y_S`, the expansion of `prod (delta_{g/2} - delta_{-g/2})^{-1}`
/// in the direction of the multiset.
fn expansion(ms: &WeightMultiset, cfg: &OracleConfig, dim: usize) -> Result<DeltaSeries> {
    check_strict(ms)?;
    let y = convolve_multiset(ms, cfg.step_bound, dim)?;
    Ok(if !cfg.printed_sign && ms.len() % 2 == 1 { y.scale(&-Q::one()) } else { y })
}

/// Directions of the Heaviside factor in Heckman's formula.
pub fn heckman_directions(setup: &OracleSetup, phi_z: &[Weight]) -> WeightMultiset {
    setup.k2_positive.iter().filter(|g| !phi_z.contains(g)).map(|g| setup.q_uk2(g)).collect()
}

fn elements_to_reps(
    setup: &OracleSetup,
    generators: &[Weight],
    phi_z: &[Weight],
    phi_z_pos: &PositiveSystem,
    cfg: &OracleConfig,
) -> Result<Vec<WeylElement>> {
    let form = setup.rd.form();
    let group = weyl_generate(form, generators, cfg.group_order_bound)?;
    coset_reps(form, &group, phi_z, phi_z_pos)
}

/// Both sides of Heckman's formula for the `K2`-type of infinitesimal
/// character `lam2`, restricted to `U cap K2`.
pub fn heckman_lhs_rhs(setup: &OracleSetup, lam2: &Weight, cfg: &OracleConfig) -> Result<(DeltaSeries, DeltaSeries)> {
    cfg.validate()?;
    let form = setup.rd.form();
    let dim = setup.dim();
    let hw = hc_to_highest_weight(lam2, &setup.k2_positive, form)?;
    let table = freudenthal(&hw, &setup.k2_positive, form)?;
    let restricted = restrict_weights(&table, |w| setup.q_uk2(w));
    let lhs = DeltaSeries::from_terms(dim, restricted.into_iter().map(|(w, m)| (w, Q::from_integer(BigInt::from(m)))));

    let z = phi_z(setup)?;
    let z_pos = phi_z_positive(setup, &z);
    let reps = elements_to_reps(setup, &setup.k2_positive.simple_roots(), &z, &z_pos, cfg)?;
    let e = expansion(&heckman_directions(setup, &z), cfg, dim)?;
    let mut rhs = DeltaSeries::zero(dim);
    for s in &reps {
        let sl = s.apply(lam2);
        let c = weyl_polynomial(setup, &z_pos, &sl) * Q::from_integer(BigInt::from(s.sign));
        rhs = rhs.sum(&e.translate(&setup.q_uk2(&sl)).scale(&c));
    }
    if !rhs.is_integral() {
        return Err(internal!("Heckman right-hand side has non-integral coefficients"));
    }
    Ok((lhs, rhs))
}

/// `Delta(k/l)`: projections of compact positive roots outside `Phi_z`, with
/// every copy of a compact root of `H` removed.
pub fn delta_k_l(setup: &OracleSetup, phi_z: &[Weight]) -> WeightMultiset {
    let mut ms: WeightMultiset =
        compact_positive(&setup.rd).iter().filter(|g| !phi_z.contains(g)).map(|g| setup.q_u(g)).collect();
    for r in &setup.phi_lu {
        ms.remove_all(r);
    }
    ms
}

/// `[Delta(k/l) + q_u(w Psi_n)]` with every copy of a root of `H` removed.
pub fn s_w_multiset(setup: &OracleSetup, phi_z: &[Weight], w: &WeylElement) -> Result<WeightMultiset> {
    let mut ms = delta_k_l(setup, phi_z);
    for g in setup.psi.iter().filter(|g| !setup.rd.is_compact(g)) {
        ms.insert(setup.q_u(&w.apply(g)), 1);
    }
    for r in &setup.phi_hu {
        ms.remove_all(r);
    }
    check_strict(&ms)?;
    Ok(ms)
}

fn multiset_key(ms: &WeightMultiset) -> Vec<(Weight, usize)> {
    ms.distinct().map(|(w, m)| (w.clone(), m)).collect()
}

/// The alternating coset sum over `W_z \ W(k)`, truncated by the step bound.
pub fn dv_rhs(setup: &OracleSetup, lam: &Weight, cfg: &OracleConfig) -> Result<DeltaSeries> {
    cfg.validate()?;
    let dim = setup.dim();
    let z = phi_z(setup)?;
    let z_pos = phi_z_positive(setup, &z);
    let delta = compact_positive(&setup.rd);
    let reps = elements_to_reps(setup, &delta.simple_roots(), &z, &z_pos, cfg)?;
    let mut cache: HashMap<Vec<(Weight, usize)>, DeltaSeries> = HashMap::new();
    let mut out = DeltaSeries::zero(dim);
    for w in &reps {
        let ms = s_w_multiset(setup, &z, w)?;
        let key = multiset_key(&ms);
        if !cache.contains_key(&key) {
            cache.insert(key.clone(), expansion(&ms, cfg, dim)?);
        }
        let wl = w.apply(lam);
        let c = weyl_polynomial(setup, &z_pos, &wl) * Q::from_integer(BigInt::from(w.sign));
        out = out.sum(&cache[&key].translate(&setup.q_u(&wl)).scale(&c));
    }
    if !out.is_integral() {
        return Err(internal!("coset sum has non-integral coefficients"));
    }
    Ok(out)
}

/// Known coefficients at weights positive on every wall. A negative one means
/// the antisymmetrization failed.
pub fn extract_multiplicities(series: &DeltaSeries, setup: &OracleSetup) -> Result<BTreeMap<Weight, BigInt>> {
    let form = setup.rd.form();
    let mut out = BTreeMap::new();
    for (mu, c) in series.terms() {
        if !setup.walls.iter().all(|w| form.ip(mu, w).is_positive()) || !series.is_known(mu) {
            continue;
        }
        if c.is_negative() || !c.is_integer() {
            return Err(internal!("antisymmetrization failure: coefficient {c} at {mu}"));
        }
        out.insert(mu.clone(), c.to_integer());
    }
    Ok(out)
}

/// Weights where the series fails antisymmetry under the reflection in
/// `wall`, including nonzero coefficients on the wall itself.
pub fn antisymmetry_violations(series: &DeltaSeries, setup: &OracleSetup, wall: &Weight) -> Vec<Weight> {
    let form = setup.rd.form();
    let mut bad = Vec::new();
    for (mu, c) in series.terms() {
        if !series.is_known(mu) {
            continue;
        }
        if form.ip(mu, wall).is_zero() {
            bad.push(mu.clone());
            continue;
        }
        let image = form.refl(mu, wall);
        if let Some(ci) = series.coefficient(&image).known() {
            if ci != -c {
                bad.push(mu.clone());
            }
        }
    }
    bad
}

#[derive(Clone, Debug, PartialEq)]
pub struct Mismatch {
    pub mu: Weight,
    pub closed_form: BigInt,
    pub oracle: BigInt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComparisonReport {
    pub agree: bool,
    pub compared_weights: usize,
    /// Closed-form entries the truncated oracle could not certify.
    pub unknown_skipped: usize,
    pub mismatches: Vec<Mismatch>,
}

impl ComparisonReport {
    pub fn to_json(&self) -> Value {
        json!({
            "agree": self.agree,
            "comparedWeights": self.compared_weights,
            "unknownSkipped": self.unknown_skipped,
            "mismatches": self.mismatches.iter().map(|m| json!({
                "mu": m.mu.to_string(),
                "closedForm": m.closed_form.to_string(),
                "oracle": m.oracle.to_string(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Compares a closed-form table with the oracle series on every weight that
/// is known to the oracle and within `in_scope` (the table's completeness
/// region).
pub fn compare_with_table(
    series: &DeltaSeries,
    setup: &OracleSetup,
    table: &BranchingTable,
    in_scope: impl Fn(&Weight) -> bool,
) -> Result<ComparisonReport> {
    let extracted = extract_multiplicities(series, setup)?;
    let mut keys: Vec<&Weight> = extracted.keys().chain(table.entries.keys()).filter(|w| in_scope(w)).collect();
    keys.sort();
    keys.dedup();
    let mut compared = 0;
    let mut unknown = 0;
    let mut mismatches = Vec::new();
    for mu in keys {
        if !series.is_known(mu) {
            unknown += 1;
            continue;
        }
        compared += 1;
        let a = table.multiplicity(mu);
        let b = extracted.get(mu).cloned().unwrap_or_else(BigInt::zero);
        if a != b {
            mismatches.push(Mismatch { mu: mu.clone(), closed_form: a, oracle: b });
        }
    }
    Ok(ComparisonReport {
        agree: mismatches.is_empty(),
        compared_weights: compared,
        unknown_skipped: unknown,
        mismatches,
    })
}

impl QuaternionicContext {
    pub fn oracle_setup(&self) -> OracleSetup {
        let b_minus_a = &self.beta - &self.alpha;
        let mut phi_hu = Vec::new();
        for r in [&self.alpha, &self.beta, &b_minus_a] {
            phi_hu.push(r.clone());
            phi_hu.push(-r);
        }
        OracleSetup {
            rd: self.rd.clone(),
            psi: self.psi.clone(),
            u_basis: self.u_basis(),
            phi_hu,
            phi_lu: vec![self.beta.clone(), -&self.beta],
            walls: vec![self.beta.clone()],
            k2_positive: self.k2_positive.clone(),
            uk2_basis: vec![self.uk2_direction()],
        }
    }
}

/// Heckman's identity for the `K2`-part of a quaternionic parameter.
pub fn quat_heckman(ctx: &QuaternionicContext, lam: &Weight, cfg: &OracleConfig) -> Result<(DeltaSeries, DeltaSeries)> {
    let (_, lam2) = ctx.decompose_parameter(lam);
    heckman_lhs_rhs(&ctx.oracle_setup(), &lam2, cfg)
}

/// Checks `varpi(w S_beta lam) = varpi(w lam2)` over `W(k2)`.
pub fn check_varpi_invariance(ctx: &QuaternionicContext, lam: &Weight, cfg: &OracleConfig) -> Result<()> {
    let setup = ctx.oracle_setup();
    let z = phi_z(&setup)?;
    let z_pos = phi_z_positive(&setup, &z);
    let (_, lam2) = ctx.decompose_parameter(lam);
    let s_beta_lam = ctx.form().refl(lam, &ctx.beta);
    let group = weyl_generate(ctx.form(), &ctx.k2_positive.simple_roots(), cfg.group_order_bound)?;
    for w in &group.elements {
        let a = weyl_polynomial(&setup, &z_pos, &w.apply(&s_beta_lam));
        let b = weyl_polynomial(&setup, &z_pos, &w.apply(&lam2));
        if a != b {
            return Err(internal!("varpi(w S_beta lam) = {a} differs from varpi(w lam2) = {b}"));
        }
    }
    Ok(())
}

/// Full oracle pass: the coset-sum series and its comparison with the closed
/// form on the closed form's completeness region.
pub fn check_theorem1(
    ctx: &QuaternionicContext,
    lam: &Weight,
    table: &BranchingTable,
    cfg: &OracleConfig,
) -> Result<(DeltaSeries, ComparisonReport)> {
    let setup = ctx.oracle_setup();
    let series = dv_rhs(&setup, lam, cfg)?;
    let (lam1, _) = ctx.decompose_parameter(lam);
    let cutoff = Q::from_integer(BigInt::from(table.cutoff));
    let report = compare_with_table(&series, &setup, table, |mu| ctx.level(&lam1, mu) <= cutoff)?;
    Ok((series, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;
    use crate::quaternionic::{sample_parameter, theorem1_branch};
    use crate::rootsystems::FormLabel;

    fn g2() -> QuaternionicContext {
        QuaternionicContext::new(FormLabel::G2Split).unwrap()
    }

    #[test]
    fn g2_phi_z_is_empty() {
        let ctx = g2();
        let z = phi_z(&ctx.oracle_setup()).unwrap();
        assert!(z.is_empty());
        let a1 = Weight::from_ints(&[1, -1, 0]);
        assert!(ctx.form().ip(&a1, &ctx.beta).is_zero());
        assert_eq!(ctx.form().ip(&a1, &ctx.alpha), q(-3));
    }

    #[test]
    fn varpi_is_one_without_phi_z() {
        let ctx = g2();
        let setup = ctx.oracle_setup();
        let z_pos = phi_z_positive(&setup, &[]);
        assert_eq!(weyl_polynomial(&setup, &z_pos, &Weight::from_ints(&[3, 1, 7])), q(1));
    }

    #[test]
    fn g2_s_w_multisets() {
        let ctx = g2();
        let setup = ctx.oracle_setup();
        let z = phi_z(&setup).unwrap();
        let group = weyl_generate(ctx.form(), &compact_positive(&ctx.rd).simple_roots(), 100).unwrap();
        let heck = heckman_directions(&setup, &z);
        for w in &group.elements {
            let ms = s_w_multiset(&setup, &z, w).unwrap();
            let flips = ctx.form().ip(&w.apply(&ctx.beta), &ctx.beta).is_negative();
            let mut want = heck.clone();
            let sign = if flips { -Q::one() } else { Q::one() };
            want.insert(ctx.lambda_1.scale(&sign), 1);
            want.insert(ctx.lambda_2.scale(&sign), 1);
            assert_eq!(ms, want);
        }
    }

    #[test]
    fn heckman_trivial_type() {
        let ctx = QuaternionicContext::new(FormLabel::So4n(4)).unwrap();
        let setup = ctx.oracle_setup();
        let rho2 = ctx.k2_positive.rho().clone();
        let (lhs, rhs) = heckman_lhs_rhs(&setup, &rho2, &OracleConfig::default()).unwrap();
        assert_eq!(lhs.len(), 1);
        assert!(lhs.disagreements(&rhs).is_empty());
        assert!(rhs.is_known(&Weight::zero(ctx.rd.dim())));
    }

    #[test]
    fn heckman_g2_adjoint_type() {
        let ctx = g2();
        let setup = ctx.oracle_setup();
        // K2 = su2(alpha1): infinitesimal character 3 rho gives the 3-dim type
        let lam2 = ctx.k2_positive.rho().scale_int(3);
        let (lhs, rhs) = heckman_lhs_rhs(&setup, &lam2, &OracleConfig::default()).unwrap();
        assert_eq!(lhs.len(), 3);
        assert!(lhs.disagreements(&rhs).is_empty());
        for (w, _) in lhs.terms() {
            assert!(rhs.is_known(w));
        }
        // both sides vanish beyond the type within validity
        let far = setup.q_uk2(&lam2).scale_int(3);
        if rhs.is_known(&far) {
            assert_eq!(rhs.coefficient(&far).known(), Some(Q::zero()));
        }
        let printed = OracleConfig { printed_sign: true, ..OracleConfig::default() };
        let (_, flipped) = heckman_lhs_rhs(&setup, &lam2, &printed).unwrap();
        assert!(lhs.disagreements(&flipped.scale(&-Q::one())).is_empty());
        assert!(!lhs.disagreements(&flipped).is_empty());
    }

    #[test]
    fn g2_oracle_matches_closed_form() {
        let ctx = g2();
        let lam = sample_parameter(&ctx, &[0, 0]).unwrap();
        let hc = ctx.parameter(lam.clone()).unwrap();
        let table = theorem1_branch(&ctx, &hc, 6).unwrap();
        let cfg = OracleConfig::with_step_bound(8);
        let (series, report) = check_theorem1(&ctx, &lam, &table, &cfg).unwrap();
        assert!(report.agree, "{:?}", report.mismatches);
        assert!(report.compared_weights > 10);
        let setup = ctx.oracle_setup();
        assert!(antisymmetry_violations(&series, &setup, &ctx.beta).is_empty());
        check_varpi_invariance(&ctx, &lam, &cfg).unwrap();
    }

    #[test]
    fn extraction_of_a_single_antisymmetric_pair() {
        let ctx = g2();
        let setup = ctx.oracle_setup();
        let mu = ctx.psi.rho().clone();
        let partner = ctx.form().refl(&mu, &ctx.beta);
        let s = DeltaSeries::from_terms(3, [(mu.clone(), q(1)), (partner, q(-1))]);
        let t = extract_multiplicities(&s, &setup).unwrap();
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![(mu.clone(), BigInt::one())]);
        assert!(extract_multiplicities(&DeltaSeries::zero(3), &setup).unwrap().is_empty());
        let bad = DeltaSeries::from_terms(3, [(mu, q(-2))]);
        assert!(matches!(extract_multiplicities(&bad, &setup), Err(Error::Internal(_))));
    }

    #[test]
    fn config_validation() {
        let ctx = g2();
        let cfg = OracleConfig { step_bound: 0, ..OracleConfig::default() };
        assert!(matches!(dv_rhs(&ctx.oracle_setup(), ctx.psi.rho(), &cfg), Err(Error::Config(_))));
        let tiny = OracleConfig { group_order_bound: 2, ..OracleConfig::default() };
        assert!(matches!(dv_rhs(&ctx.oracle_setup(), ctx.psi.rho(), &tiny), Err(Error::Resource(_))));
    }
}
