//! Truncated formal sums of Dirac deltas on the weight lattice.
//!
//! A series stores finitely many exact coefficients together with a
//! [`Validity`] describing where those coefficients agree with the untruncated
//! series. Outside the stored support a coefficient is zero unless the weight
//! lies in a tail region, in which case it is reported as unknown.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{domain, Error, Result};
use crate::lattice::{binomial, independent_subset, q, solve, Weight, WeightMultiset, Q};

/// `apex + cone(dirs)`, optionally intersected with `{y : h.y > t}`.
#[derive(Clone, Debug)]
pub struct Cone {
    pub apex: Weight,
    pub dirs: Vec<Weight>,
    pub floor: Option<(Weight, Q)>,
    bases: OnceLock<Vec<Vec<usize>>>,
}

impl PartialEq for Cone {
    fn eq(&self, other: &Self) -> bool {
        self.apex == other.apex && self.dirs == other.dirs && self.floor == other.floor
    }
}

impl Cone {
    pub fn new(apex: Weight, mut dirs: Vec<Weight>, floor: Option<(Weight, Q)>) -> Self {
        dirs.sort();
        dirs.dedup();
        Cone { apex, dirs, floor, bases: OnceLock::new() }
    }

    pub fn point(apex: Weight) -> Self {
        Self::new(apex, vec![], None)
    }

    /// Independent subsets of `dirs`; by Caratheodory every point of the real
    /// cone is a nonnegative combination of one of them.
    fn bases(&self) -> &[Vec<usize>] {
        self.bases.get_or_init(|| {
            let rank = independent_subset(&self.dirs).len();
            let mut out = Vec::new();
            let m = self.dirs.len();
            let mut stack: Vec<(usize, Vec<usize>)> = vec![(0, vec![])];
            while let Some((start, cur)) = stack.pop() {
                if !cur.is_empty() {
                    out.push(cur.clone());
                }
                if cur.len() == rank {
                    continue;
                }
                for i in start..m {
                    let mut next = cur.clone();
                    next.push(i);
                    let vs: Vec<Weight> = next.iter().map(|&j| self.dirs[j].clone()).collect();
                    if independent_subset(&vs).len() == next.len() {
                        stack.push((i + 1, next));
                    }
                }
            }
            out
        })
    }

    /// Membership in the real cone (a superset of the lattice cone, which keeps
    /// tail checks conservative).
    pub fn contains(&self, y: &Weight) -> bool {
        if let Some((h, t)) = &self.floor {
            if h.dot(y) <= *t {
                return false;
            }
        }
        let v = y - &self.apex;
        if v.is_zero() {
            return true;
        }
        self.bases().iter().any(|b| nonneg_combination(&self.dirs, b, &v))
    }

    /// Minkowski sum with a support cone.
    fn plus(&self, other: &Cone) -> Cone {
        let apex = &self.apex + &other.apex;
        let mut dirs = self.dirs.clone();
        dirs.extend(other.dirs.iter().cloned());
        // a floor survives when the other cone cannot lower the functional
        let floor = match (&self.floor, &other.floor) {
            (Some((h, t)), None) if other.dirs.iter().all(|d| !h.dot(d).is_negative()) => {
                Some((h.clone(), t + h.dot(&other.apex)))
            }
            (None, Some((h, t))) if self.dirs.iter().all(|d| !h.dot(d).is_negative()) => {
                Some((h.clone(), t + h.dot(&self.apex)))
            }
            _ => None,
        };
        Cone::new(apex, dirs, floor)
    }

    fn translate(&self, by: &Weight) -> Cone {
        let floor = self.floor.as_ref().map(|(h, t)| (h.clone(), t + h.dot(by)));
        Cone::new(&self.apex + by, self.dirs.clone(), floor)
    }

    fn to_json(&self) -> Value {
        let mut v = json!({
            "apex": self.apex.to_string(),
            "directions": self.dirs.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        });
        if let Some((h, t)) = &self.floor {
            v["floor"] = json!({ "functional": h.to_string(), "exceeds": t.to_string() });
        }
        v
    }
}

fn nonneg_combination(dirs: &[Weight], basis: &[usize], v: &Weight) -> bool {
    let vs: Vec<&Weight> = basis.iter().map(|&i| &dirs[i]).collect();
    let gram: Vec<Vec<Q>> = vs.iter().map(|a| vs.iter().map(|b| a.dot(b)).collect()).collect();
    let rhs: Vec<Q> = vs.iter().map(|a| a.dot(v)).collect();
    let Some(c) = solve(gram, rhs) else { return false };
    if c.iter().any(Signed::is_negative) {
        return false;
    }
    let mut back = Weight::zero(v.dim());
    for (ci, d) in c.iter().zip(&vs) {
        back = back.add_scaled(ci, d);
    }
    back == *v
}

/// A linear functional strictly positive on every direction, if one exists.
pub fn positive_functional(dirs: &[Weight]) -> Option<Weight> {
    let first = dirs.first()?;
    let mut h = Weight::zero(first.dim());
    for _ in 0..10_000 {
        match dirs.iter().find(|d| !h.dot(d).is_positive()) {
            None => return Some(h),
            Some(d) => {
                if d.is_zero() {
                    return None;
                }
                let scale = Q::one() / d.dot(d);
                h = h.add_scaled(&scale, d);
            }
        }
    }
    None
}

/// Region where stored coefficients are exact.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Validity {
    /// Cones covering the support of the untruncated series.
    pub support: Vec<Cone>,
    /// Cones where truncated contributions might land.
    pub tails: Vec<Cone>,
}

impl Validity {
    fn dedup(mut self) -> Self {
        let mut s: Vec<Cone> = Vec::new();
        for c in self.support.drain(..) {
            if !s.contains(&c) {
                s.push(c);
            }
        }
        let mut t: Vec<Cone> = Vec::new();
        for c in self.tails.drain(..) {
            if !t.contains(&c) {
                t.push(c);
            }
        }
        Validity { support: s, tails: t }
    }

    pub fn is_known(&self, y: &Weight) -> bool {
        !self.tails.iter().any(|c| c.contains(y))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Coefficient {
    Known(Q),
    Unknown,
}

impl Coefficient {
    pub fn known(self) -> Option<Q> {
        match self {
            Coefficient::Known(c) => Some(c),
            Coefficient::Unknown => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct DeltaSeries {
    dim: usize,
    coeffs: BTreeMap<Weight, Q>,
    validity: Validity,
}

impl DeltaSeries {
    pub fn zero(dim: usize) -> Self {
        DeltaSeries { dim, coeffs: BTreeMap::new(), validity: Validity::default() }
    }

    /// Finite exact series from explicit terms (zero terms dropped).
    pub fn from_terms(dim: usize, terms: impl IntoIterator<Item = (Weight, Q)>) -> Self {
        let mut s = Self::zero(dim);
        for (w, c) in terms {
            s.add_term(w, c);
        }
        let support = s.coeffs.keys().cloned().map(Cone::point).collect();
        s.validity = Validity { support, tails: vec![] };
        s
    }

    fn add_term(&mut self, w: Weight, c: Q) {
        if c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(w.clone()).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&w);
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn validity(&self) -> &Validity {
        &self.validity
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Weight, &Q)> {
        self.coeffs.iter()
    }

    pub fn is_known(&self, y: &Weight) -> bool {
        self.validity.is_known(y)
    }

    pub fn coefficient(&self, y: &Weight) -> Coefficient {
        if !self.is_known(y) {
            return Coefficient::Unknown;
        }
        Coefficient::Known(self.coeffs.get(y).cloned().unwrap_or_else(Q::zero))
    }

    pub fn scale(&self, c: &Q) -> DeltaSeries {
        if c.is_zero() {
            let mut z = self.clone();
            z.coeffs.clear();
            return z;
        }
        DeltaSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
            validity: self.validity.clone(),
        }
    }

    pub fn translate(&self, by: &Weight) -> DeltaSeries {
        DeltaSeries {
            dim: self.dim,
            coeffs: self.coeffs.iter().map(|(w, x)| (w + by, x.clone())).collect(),
            validity: Validity {
                support: self.validity.support.iter().map(|c| c.translate(by)).collect(),
                tails: self.validity.tails.iter().map(|c| c.translate(by)).collect(),
            },
        }
    }

    pub fn sum(&self, other: &DeltaSeries) -> DeltaSeries {
        let mut out = self.clone();
        for (w, c) in &other.coeffs {
            out.add_term(w.clone(), c.clone());
        }
        out.validity.support.extend(other.validity.support.iter().cloned());
        out.validity.tails.extend(other.validity.tails.iter().cloned());
        out.validity = out.validity.dedup();
        out
    }

    pub fn sub(&self, other: &DeltaSeries) -> DeltaSeries {
        self.sum(&other.scale(&-Q::one()))
    }

    /// All coefficients are integers.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }

    /// Weights known in both series where the coefficients differ.
    pub fn disagreements(&self, other: &DeltaSeries) -> Vec<Weight> {
        let mut keys: Vec<&Weight> = self.coeffs.keys().chain(other.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter(|w| self.is_known(w) && other.is_known(w))
            .filter(|w| self.coefficient(w) != other.coefficient(w))
            .cloned()
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "terms": self.coeffs.iter()
                .map(|(w, c)| json!({ "weight": w.to_string(), "coeff": c.to_string() }))
                .collect::<Vec<_>>(),
            "validity": {
                "support": self.validity.support.iter().map(Cone::to_json).collect::<Vec<_>>(),
                "tails": self.validity.tails.iter().map(Cone::to_json).collect::<Vec<_>>(),
            },
        })
    }
}

pub fn dirac(gamma: &Weight) -> DeltaSeries {
    DeltaSeries::from_terms(gamma.dim(), [(gamma.clone(), Q::one())])
}

/// `delta_{g/2} + delta_{3g/2} + ... ` up to `n` steps.
pub fn heaviside(gamma: &Weight, n: u32) -> Result<DeltaSeries> {
    heaviside_power(gamma, 1, n)
}

/// The `r`-th convolution power of the Heaviside series, built termwise from
/// the binomial expansion.
pub fn heaviside_power(gamma: &Weight, r: u32, n: u32) -> Result<DeltaSeries> {
    if r == 0 {
        return Ok(dirac(&Weight::zero(gamma.dim())));
    }
    if gamma.is_zero() {
        return Err(domain!("non-strict multiset: Heaviside series along the zero weight"));
    }
    let base = gamma.scale(&(q(r as i64) / q(2)));
    let mut s = DeltaSeries::zero(gamma.dim());
    for k in 0..=n as i64 {
        let c = Q::from_integer(binomial(k + r as i64 - 1, r as i64 - 1));
        s.coeffs.insert(base.add_scaled(&q(k), gamma), c);
    }
    let tail = Cone::new(base.add_scaled(&q(n as i64 + 1), gamma), vec![gamma.clone()], None);
    s.validity = Validity { support: vec![Cone::new(base, vec![gamma.clone()], None)], tails: vec![tail] };
    Ok(s)
}

/// Coefficientwise product, with tails from pairing every truncated part with
/// the support of the other factor. Stored terms that fall into a tail are
/// discarded.
pub fn convolve(a: &DeltaSeries, b: &DeltaSeries) -> DeltaSeries {
    let mut coeffs: BTreeMap<Weight, Q> = BTreeMap::new();
    for (wa, ca) in &a.coeffs {
        for (wb, cb) in &b.coeffs {
            *coeffs.entry(wa + wb).or_insert_with(Q::zero) += ca * cb;
        }
    }
    let mut support = Vec::new();
    for sa in &a.validity.support {
        for sb in &b.validity.support {
            support.push(sa.plus(sb));
        }
    }
    let mut tails = Vec::new();
    for ta in &a.validity.tails {
        for sb in &b.validity.support {
            tails.push(ta.plus(sb));
        }
    }
    for sa in &a.validity.support {
        for tb in &b.validity.tails {
            tails.push(sa.plus(tb));
        }
    }
    let validity = Validity { support, tails }.dedup();
    coeffs.retain(|w, c| !c.is_zero() && validity.is_known(w));
    DeltaSeries { dim: a.dim, coeffs, validity }
}

/// Product of Heaviside series over a multiset of directions, exact for every
/// weight reachable in at most `n` steps. Truncation is by the level of a
/// functional positive on all directions, so the stored region stays
/// quadratic in `n` for planar directions.
pub fn convolve_multiset(ms: &WeightMultiset, n: u32, dim: usize) -> Result<DeltaSeries> {
    if ms.is_empty() {
        return Ok(dirac(&Weight::zero(dim)));
    }
    let dirs: Vec<Weight> = ms.distinct().map(|(w, _)| w.clone()).collect();
    if dirs.iter().any(|d| d.dim() != dim) {
        return Err(Error::Structural("multiset direction of wrong length".into()));
    }
    if dirs.iter().any(Weight::is_zero) {
        return Err(domain!("non-strict multiset: contains the zero weight"));
    }
    let h =
        positive_functional(&dirs).ok_or_else(|| domain!("non-strict multiset: directions span no pointed cone"))?;
    let max_step = dirs.iter().map(|d| h.dot(d)).max().unwrap();
    let cap = &max_step * q(n as i64);
    let base = ms.sum(dim).half();

    // offsets from base with their f-levels
    let mut acc: BTreeMap<Weight, Q> = BTreeMap::new();
    acc.insert(Weight::zero(dim), Q::one());
    for (d, r) in ms.distinct() {
        let step = h.dot(d);
        let mut next: BTreeMap<Weight, Q> = BTreeMap::new();
        for (y, c) in &acc {
            let mut level = h.dot(y);
            let mut k: i64 = 0;
            while level <= cap {
                let b = Q::from_integer(binomial(k + r as i64 - 1, r as i64 - 1));
                *next.entry(y.add_scaled(&q(k), d)).or_insert_with(Q::zero) += c * b;
                k += 1;
                level += &step;
            }
        }
        acc = next;
    }
    let floor_t = h.dot(&base) + &cap;
    let coeffs = acc.into_iter().map(|(y, c)| (&y + &base, c)).collect();
    let support = Cone::new(base.clone(), dirs.clone(), None);
    let tail = Cone::new(base, dirs, Some((h, floor_t)));
    Ok(DeltaSeries { dim, coeffs, validity: Validity { support: vec![support], tails: vec![tail] } })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::frac;
    use proptest::prelude::*;

    fn g() -> Weight {
        Weight::from_ints(&[2, -1])
    }

    #[test]
    fn dirac_basics() {
        let d = dirac(&Weight::zero(2));
        assert_eq!(d.coefficient(&Weight::zero(2)), Coefficient::Known(q(1)));
        assert_eq!(d.coefficient(&g()), Coefficient::Known(q(0)));
        let x = Weight::from_ints(&[1, 0]);
        let y = Weight::from_ints(&[0, 3]);
        let p = convolve(&dirac(&x), &dirac(&y));
        assert!(p.disagreements(&dirac(&(&x + &y))).is_empty());
        assert_eq!(p.len(), 1);
    }

    #[test]
    fn heaviside_examples() {
        let s = heaviside(&g(), 2).unwrap();
        let got: Vec<Weight> = s.terms().map(|(w, _)| w.clone()).collect();
        let mut want = vec![g().half(), g().scale(&frac(3, 2)), g().scale(&frac(5, 2))];
        want.sort();
        assert_eq!(got, want);
        assert!(s.terms().all(|(_, c)| *c == q(1)));
        assert_eq!(s.coefficient(&g().scale(&frac(7, 2))), Coefficient::Unknown);
        assert_eq!(s.coefficient(&g()), Coefficient::Known(q(0)));
        assert_eq!(s.coefficient(&-&g().half()), Coefficient::Known(q(0)));
        let s0 = heaviside(&g(), 0).unwrap();
        assert_eq!(s0.len(), 1);
        assert!(matches!(heaviside(&Weight::zero(2), 3), Err(Error::Domain(_))));
    }

    #[test]
    fn square_of_heaviside() {
        let n = 6;
        let h = heaviside(&g(), n).unwrap();
        let sq = convolve(&h, &h);
        for k in 0..=n as i64 {
            assert_eq!(sq.coefficient(&g().scale_int(1 + k)), Coefficient::Known(q(k + 1)));
        }
        assert_eq!(sq.coefficient(&g().scale_int(2 + n as i64)), Coefficient::Unknown);
    }

    #[test]
    fn power_examples() {
        let p = heaviside_power(&g(), 3, 5).unwrap();
        assert_eq!(p.coefficient(&g().scale(&frac(7, 2))), Coefficient::Known(q(6)));
        let p1 = heaviside_power(&g(), 1, 4).unwrap();
        assert!(p1.disagreements(&heaviside(&g(), 4).unwrap()).is_empty());
        let p0 = heaviside_power(&g(), 0, 4).unwrap();
        assert_eq!(p0.coefficient(&Weight::zero(2)), Coefficient::Known(q(1)));
        assert_eq!(p0.len(), 1);
    }

    #[test]
    fn power_equals_iterated_convolution() {
        let n = 12;
        let h = heaviside(&g(), n).unwrap();
        let mut acc = dirac(&Weight::zero(2));
        for r in 0..=6u32 {
            let p = heaviside_power(&g(), r, n).unwrap();
            assert!(acc.disagreements(&p).is_empty(), "r = {r}");
            for k in 0..=n as i64 {
                let w = g().scale(&(q(r as i64) / q(2) + q(k)));
                assert!(acc.is_known(&w) && p.is_known(&w));
            }
            acc = convolve(&acc, &h);
        }
    }

    #[test]
    fn multiset_examples() {
        let a = Weight::from_ints(&[1, 0]);
        let b = Weight::from_ints(&[0, 1]);
        let single: WeightMultiset = [a.clone()].into_iter().collect();
        let s = convolve_multiset(&single, 4, 2).unwrap();
        assert!(s.disagreements(&heaviside(&a, 4).unwrap()).is_empty());

        let mut ms = WeightMultiset::new();
        ms.insert(a.clone(), 2);
        ms.insert(b.clone(), 1);
        let s = convolve_multiset(&ms, 5, 2).unwrap();
        let base = &a + &b.half();
        assert_eq!(s.coefficient(&base), Coefficient::Known(q(1)));
        assert_eq!(s.terms().next().map(|(w, _)| w.clone()), Some(base.clone()));

        // defect d = 4: C(p+2,2) C(q+2,2) at 3(a+b)/2 + pa + qb
        let mut ms = WeightMultiset::new();
        ms.insert(a.clone(), 3);
        ms.insert(b.clone(), 3);
        let s = convolve_multiset(&ms, 8, 2).unwrap();
        let base = (&a + &b).scale(&frac(3, 2));
        for p in 0..4i64 {
            for qq in 0..4i64 {
                let w = base.add_scaled(&q(p), &a).add_scaled(&q(qq), &b);
                let want = binomial(p + 2, 2) * binomial(qq + 2, 2);
                assert_eq!(s.coefficient(&w), Coefficient::Known(Q::from_integer(want)));
            }
        }

        let mut bad = WeightMultiset::new();
        bad.insert(Weight::zero(2), 1);
        let err = convolve_multiset(&bad, 3, 2).unwrap_err();
        assert!(err.to_string().contains("non-strict multiset"));
        let opposite: WeightMultiset = [a.clone(), -&a].into_iter().collect();
        assert!(convolve_multiset(&opposite, 3, 2).is_err());
    }

    #[test]
    fn multiset_agrees_with_factorwise_convolution() {
        let dirs = [Weight::from_ints(&[1, 0]), Weight::from_ints(&[1, 1]), Weight::from_ints(&[0, 2])];
        let n = 6;
        let ms: WeightMultiset = dirs.iter().cloned().chain([dirs[0].clone()]).collect();
        let direct = convolve_multiset(&ms, n, 2).unwrap();
        let mut acc = dirac(&Weight::zero(2));
        for (d, r) in ms.distinct() {
            acc = convolve(&acc, &heaviside_power(d, r as u32, n).unwrap());
        }
        assert!(direct.disagreements(&acc).is_empty());
        // every known point of the factorwise product with few steps is known directly
        for (w, _) in acc.terms() {
            let steps = (w - &ms.sum(2).half()).0.iter().map(|x| x.abs()).sum::<Q>();
            if steps <= q(n as i64) {
                assert!(direct.is_known(w));
            }
        }
    }

    #[test]
    fn translation_and_json() {
        let h = heaviside(&g(), 3).unwrap();
        let t = h.translate(&Weight::from_ints(&[1, 1]));
        assert!(t.disagreements(&convolve(&h, &dirac(&Weight::from_ints(&[1, 1])))).is_empty());
        let j = h.to_json();
        assert_eq!(j["terms"].as_array().unwrap().len(), 4);
        assert_eq!(j["terms"][0]["coeff"], "1");
        assert_eq!(j["validity"]["tails"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn subtraction_is_bilinear() {
        let mu = Weight::from_ints(&[3, 0]);
        let nu = Weight::from_ints(&[0, 1]);
        let s = heaviside(&g(), 4).unwrap();
        let lhs = convolve(&dirac(&mu).sub(&dirac(&nu)), &s);
        let rhs = convolve(&dirac(&mu), &s).sub(&convolve(&dirac(&nu), &s));
        assert!(lhs.disagreements(&rhs).is_empty());
    }

    fn small_series() -> impl Strategy<Value = DeltaSeries> {
        let dir = prop_oneof![
            Just(Weight::from_ints(&[1, 0])),
            Just(Weight::from_ints(&[0, 1])),
            Just(Weight::from_ints(&[1, -1])),
            Just(Weight::from_ints(&[2, 1]))
        ];
        (dir, 0u32..4, -3i64..4, -3i64..4, -2i64..3).prop_map(|(d, n, x, y, c)| {
            let base = heaviside(&d, n).unwrap();
            let shifted = base.translate(&Weight::from_ints(&[x, y]));
            shifted.sum(&dirac(&Weight::from_ints(&[y, x])).scale(&q(c)))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn convolution_commutes(a in small_series(), b in small_series()) {
            prop_assert!(convolve(&a, &b).disagreements(&convolve(&b, &a)).is_empty());
        }

        #[test]
        fn convolution_associates(a in small_series(), b in small_series(), c in small_series()) {
            let l = convolve(&convolve(&a, &b), &c);
            let r = convolve(&a, &convolve(&b, &c));
            prop_assert!(l.disagreements(&r).is_empty());
        }

        #[test]
        fn dirac_zero_is_identity(a in small_series()) {
            let p = convolve(&a, &dirac(&Weight::zero(2)));
            prop_assert!(p.disagreements(&a).is_empty());
        }

        #[test]
        fn minimal_term_is_half_sum(
            counts in proptest::collection::vec(0usize..3, 3),
            n in 0u32..5,
        ) {
            let dirs = [Weight::from_ints(&[1, 0]), Weight::from_ints(&[1, 2]), Weight::from_ints(&[3, 1])];
            let mut ms = WeightMultiset::new();
            for (d, c) in dirs.iter().zip(&counts) {
                ms.insert(d.clone(), *c);
            }
            let s = convolve_multiset(&ms, n, 2).unwrap();
            let half = ms.sum(2).half();
            prop_assert_eq!(s.coefficient(&half), Coefficient::Known(q(1)));
            prop_assert!(s.terms().all(|(_, c)| c.is_positive()));
            prop_assert!(s.terms().all(|(w, _)| s.is_known(w)));
        }
    }
}
