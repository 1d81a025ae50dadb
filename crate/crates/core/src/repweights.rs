//! Finite-dimensional representations of a compact factor: Harish-Chandra
//! parameter conversion, Freudenthal multiplicities, Weyl dimension and
//! pushforward of weights along a projection.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, internal, Error, Result};
use crate::lattice::{InnerProductForm, Weight, Q};
use crate::rootsystems::{PositiveSystem, RootDatum};

/// Default bound on the dimension of a representation handed to Freudenthal.
pub const DEFAULT_DIMENSION_BOUND: u64 = 10_000_000;

/// A regular integral parameter, dominant for `system`.
#[derive(Clone, Debug)]
pub struct HCParameter {
    pub lam: Weight,
    pub system: PositiveSystem,
}

impl HCParameter {
    /// Checks regularity and integrality against every root of `rd` and
    /// dominance for `system`.
    pub fn new(rd: &RootDatum, lam: Weight, system: PositiveSystem) -> Result<Self> {
        if lam.dim() != rd.dim() {
            return Err(Error::Structural(format!("parameter has {} coordinates, expected {}", lam.dim(), rd.dim())));
        }
        let form = rd.form();
        for g in rd.roots() {
            let p = form.pair(&lam, g);
            if p.is_zero() {
                return Err(domain!("parameter {lam} is singular: orthogonal to root {g}"));
            }
            if !p.is_integer() {
                return Err(domain!("parameter {lam} is not integral: pairing {p} with root {g}"));
            }
        }
        if let Some(g) = system.iter().find(|g| !form.ip(&lam, g).is_positive()) {
            return Err(domain!("parameter {lam} is not dominant: (lam, {g}) <= 0"));
        }
        Ok(HCParameter { lam, system })
    }
}

/// Highest weight `lam2 - rho` of the representation with infinitesimal
/// character `lam2`.
pub fn hc_to_highest_weight(lam2: &Weight, ps: &PositiveSystem, form: &InnerProductForm) -> Result<Weight> {
    for g in ps.iter() {
        let p = form.pair(lam2, g);
        if !p.is_positive() {
            return Err(domain!("{lam2} is not dominant regular: pairing {p} with {g}"));
        }
        if !p.is_integer() {
            return Err(domain!("{lam2} is not integral: pairing {p} with {g}"));
        }
    }
    Ok(lam2 - ps.rho())
}

fn check_dominant_integral(hw: &Weight, ps: &PositiveSystem, form: &InnerProductForm) -> Result<()> {
    for g in ps.simple_roots() {
        let p = form.pair(hw, &g);
        if p.is_negative() || !p.is_integer() {
            return Err(domain!("{hw} is not dominant integral: pairing {p} with {g}"));
        }
    }
    Ok(())
}

/// `prod (hw + rho, g) / (rho, g)` over positive roots.
pub fn weyl_dimension(hw: &Weight, ps: &PositiveSystem, form: &InnerProductForm) -> Result<BigInt> {
    check_dominant_integral(hw, ps, form)?;
    let shifted = hw + ps.rho();
    let mut d = Q::one();
    for g in ps.iter() {
        d *= form.ip(&shifted, g) / form.ip(ps.rho(), g);
    }
    if !d.is_integer() {
        return Err(internal!("Weyl dimension {d} is not an integer"));
    }
    Ok(d.to_integer())
}

#[derive(Clone, Debug)]
pub struct WeightMultTable {
    pub highest_weight: Weight,
    pub mults: BTreeMap<Weight, u64>,
}

impl WeightMultTable {
    pub fn dimension(&self) -> u64 {
        self.mults.values().sum()
    }

    pub fn multiplicity(&self, w: &Weight) -> u64 {
        self.mults.get(w).copied().unwrap_or(0)
    }
}

struct Ctx<'a> {
    form: &'a InnerProductForm,
    simple: Vec<Weight>,
    positive: Vec<Weight>,
    hw: &'a Weight,
}

impl Ctx<'_> {
    fn dominant_conjugate(&self, v: &Weight) -> Weight {
        let mut v = v.clone();
        loop {
            match self.simple.iter().find(|a| self.form.ip(&v, a).is_negative()) {
                Some(a) => v = self.form.refl(&v, a),
                None => return v,
            }
        }
    }

    fn is_weight(&self, v: &Weight) -> bool {
        let d = self.dominant_conjugate(v);
        let diff = self.hw - &d;
        if diff.is_zero() {
            return true;
        }
        match self.form.span_coordinates(&self.simple, &diff) {
            Some(c) => c.iter().all(|x| x.is_integer() && !x.is_negative()),
            None => false,
        }
    }
}

/// Weight multiplicities by Freudenthal's recursion, computed on dominant
/// weights and copied to their Weyl conjugates.
pub fn freudenthal(hw: &Weight, ps: &PositiveSystem, form: &InnerProductForm) -> Result<WeightMultTable> {
    freudenthal_with(hw, ps, form, DEFAULT_DIMENSION_BOUND, false)
}

/// As [`freudenthal`]; `direct` applies the recursion at every weight instead
/// of only at dominant ones.
pub fn freudenthal_with(
    hw: &Weight,
    ps: &PositiveSystem,
    form: &InnerProductForm,
    dimension_bound: u64,
    direct: bool,
) -> Result<WeightMultTable> {
    let dim = weyl_dimension(hw, ps, form)?;
    if dim > BigInt::from(dimension_bound) {
        return Err(Error::Resource(format!("representation dimension {dim} exceeds the bound {dimension_bound}")));
    }
    let ctx = Ctx { form, simple: ps.simple_roots(), positive: ps.iter().cloned().collect(), hw };
    let rho = ps.rho();
    let top = form.norm2(&(hw + rho));

    let mut mults: BTreeMap<Weight, u64> = BTreeMap::new();
    mults.insert(hw.clone(), 1);
    let mut level: BTreeSet<Weight> = [hw.clone()].into();
    loop {
        let mut next: BTreeSet<Weight> = BTreeSet::new();
        for v in &level {
            for a in &ctx.simple {
                let c = v - a;
                if !next.contains(&c) && ctx.is_weight(&c) {
                    next.insert(c);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        let (dominant, other): (Vec<&Weight>, Vec<&Weight>) =
            next.iter().partition(|w| direct || ctx.simple.iter().all(|a| !form.ip(w, a).is_negative()));
        for mu in dominant {
            let mut acc = Q::zero();
            for a in &ctx.positive {
                let mut nu = mu + a;
                while let Some(&m) = mults.get(&nu) {
                    acc += Q::from_integer(BigInt::from(m)) * form.ip(&nu, a);
                    nu = &nu + a;
                }
            }
            let denom = &top - form.norm2(&(mu + rho));
            if denom.is_zero() {
                return Err(internal!("Freudenthal denominator vanishes at {mu}"));
            }
            let m = acc * Q::from_integer(BigInt::from(2)) / denom;
            if !m.is_integer() || m.is_negative() {
                return Err(internal!("Freudenthal produced non-integral multiplicity {m} at {mu}"));
            }
            let m = m.to_integer().to_u64().ok_or_else(|| internal!("multiplicity overflow"))?;
            if m == 0 {
                return Err(internal!("weight {mu} has zero multiplicity"));
            }
            mults.insert(mu.clone(), m);
        }
        for nu in other {
            let d = ctx.dominant_conjugate(nu);
            let m = *mults.get(&d).ok_or_else(|| internal!("dominant conjugate {d} not yet computed"))?;
            mults.insert(nu.clone(), m);
        }
        level = next;
    }
    let table = WeightMultTable { highest_weight: hw.clone(), mults };
    if BigInt::from(table.dimension()) != dim {
        return Err(internal!("Freudenthal total {} differs from Weyl dimension {dim}", table.dimension()));
    }
    Ok(table)
}

/// Pushforward of multiplicities along `projection`.
pub fn restrict_weights(table: &WeightMultTable, projection: impl Fn(&Weight) -> Weight) -> BTreeMap<Weight, u64> {
    let mut out = BTreeMap::new();
    for (w, m) in &table.mults {
        *out.entry(projection(w)).or_insert(0) += m;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::q;
    use crate::rootsystems::{CartanType, WeylGroup};
    use proptest::prelude::*;

    fn system(ty: CartanType, rank: usize) -> RootDatum {
        RootDatum::of_type(ty, rank).unwrap()
    }

    #[test]
    fn hc_shift() {
        let rd = system(CartanType::A, 2);
        let ps = rd.positive_system();
        let hw = hc_to_highest_weight(ps.rho(), &ps, rd.form()).unwrap();
        assert!(hw.is_zero());
        let two_rho = ps.rho().scale_int(2);
        let hw = hc_to_highest_weight(&two_rho, &ps, rd.form()).unwrap();
        assert_eq!(hw, *ps.rho());
        assert_eq!(weyl_dimension(&hw, &ps, rd.form()).unwrap(), BigInt::from(8));
        assert!(hc_to_highest_weight(&Weight::zero(3), &ps, rd.form()).is_err());

        let a1 = system(CartanType::A, 1);
        let ps1 = a1.positive_system();
        // pairing 3 with the root
        let lam = Weight::from_ints(&[3, -3]).half();
        let hw = hc_to_highest_weight(&lam, &ps1, a1.form()).unwrap();
        assert_eq!(a1.form().pair(&hw, &Weight::from_ints(&[1, -1])), q(2));
        assert_eq!(weyl_dimension(&hw, &ps1, a1.form()).unwrap(), BigInt::from(3));
    }

    #[test]
    fn hc_parameter_validation() {
        let rd = system(CartanType::A, 2);
        let ps = rd.positive_system();
        assert!(HCParameter::new(&rd, ps.rho().clone(), ps.clone()).is_ok());
        assert!(matches!(HCParameter::new(&rd, Weight::from_ints(&[1, 1, 0]), ps.clone()), Err(Error::Domain(_))));
        assert!(matches!(HCParameter::new(&rd, -ps.rho(), ps.clone()), Err(Error::Domain(_))));
        assert!(matches!(HCParameter::new(&rd, Weight::from_ints(&[1, 0]), ps), Err(Error::Structural(_))));
    }

    #[test]
    fn small_tables() {
        let rd = system(CartanType::A, 2);
        let ps = rd.positive_system();
        let t = freudenthal(&Weight::zero(3), &ps, rd.form()).unwrap();
        assert_eq!(t.mults.len(), 1);
        let adj = freudenthal(ps.rho(), &ps, rd.form()).unwrap();
        assert_eq!(adj.multiplicity(&Weight::zero(3)), 2);
        assert_eq!(adj.mults.len(), 7);
        assert_eq!(adj.dimension(), 8);
        for r in rd.roots() {
            assert_eq!(adj.multiplicity(r), 1);
        }
        let a1 = system(CartanType::A, 1);
        let t = freudenthal(&Weight::from_ints(&[1, -1]), &a1.positive_system(), a1.form()).unwrap();
        assert_eq!(t.mults.len(), 3);
        assert!(t.mults.values().all(|&m| m == 1));
    }

    #[test]
    fn dimension_bound() {
        let rd = system(CartanType::A, 2);
        let ps = rd.positive_system();
        let hw = ps.rho().scale_int(4);
        assert!(matches!(freudenthal_with(&hw, &ps, rd.form(), 10, false), Err(Error::Resource(_))));
    }

    #[test]
    fn restriction() {
        let rd = system(CartanType::A, 2);
        let ps = rd.positive_system();
        let t = freudenthal(ps.rho(), &ps, rd.form()).unwrap();
        let same = restrict_weights(&t, |w| w.clone());
        assert_eq!(same, t.mults);
        let zero = restrict_weights(&t, |w| Weight::zero(w.dim()));
        assert_eq!(zero.into_iter().collect::<Vec<_>>(), vec![(Weight::zero(3), 8)]);
    }

    fn dominant(rd: &RootDatum, coeffs: &[u8]) -> Weight {
        let c: Vec<Q> = coeffs.iter().map(|&x| q(x as i64)).collect();
        rd.from_basis(&c, true).unwrap()
    }

    fn weyl(rd: &RootDatum) -> WeylGroup {
        crate::rootsystems::weyl_generate(rd.form(), &rd.simple_roots(), 1000).unwrap()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn tables_are_invariant_and_sum_to_dimension(
            pick in 0usize..4,
            coeffs in proptest::collection::vec(0u8..3, 3),
        ) {
            let (ty, rank) = [(CartanType::A, 2), (CartanType::B, 2), (CartanType::G, 2), (CartanType::C, 3)][pick];
            let rd = system(ty, rank);
            let ps = rd.positive_system();
            let hw = dominant(&rd, &coeffs[..rank]);
            let t = freudenthal(&hw, &ps, rd.form()).unwrap();
            prop_assert_eq!(BigInt::from(t.dimension()), weyl_dimension(&hw, &ps, rd.form()).unwrap());
            prop_assert_eq!(t.multiplicity(&hw), 1);
            let w = weyl(&rd);
            for (nu, m) in &t.mults {
                for e in &w.elements {
                    prop_assert_eq!(t.multiplicity(&e.apply(nu)), *m);
                }
            }
            if rank == 2 {
                let direct = freudenthal_with(&hw, &ps, rd.form(), DEFAULT_DIMENSION_BOUND, true).unwrap();
                prop_assert_eq!(direct.mults, t.mults.clone());
            }
            // hull property: hw - nu is a nonnegative combination of simple roots
            for nu in t.mults.keys() {
                let c = rd.simple_coordinates(&(&hw - nu)).unwrap();
                prop_assert!(c.iter().all(|x| !x.is_negative()));
            }
        }
    }
}
