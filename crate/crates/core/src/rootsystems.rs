//! Realized root systems with compact/noncompact labels, positive systems and
//! enumeration of (reflection sub)groups of the Weyl group.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{domain, internal, Error, Result};
use crate::lattice::{determinant, frac, q, InnerProductForm, Weight, Q};

/// Default safety bound on enumerated group orders.
pub const DEFAULT_GROUP_ORDER_BOUND: usize = 1_000_000;

/// Reads `BRANCHKIT_GROUP_ORDER_BOUND`, falling back to `default`.
pub fn group_order_bound_from_env(default: usize) -> usize {
    std::env::var("BRANCHKIT_GROUP_ORDER_BOUND").ok().and_then(|v| v.trim().parse().ok()).unwrap_or(default)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CartanType {
    A,
    B,
    C,
    D,
    E,
    F,
    G,
}

/// Bourbaki simple roots; returns the ambient dimension and the roots.
pub fn bourbaki_simple_roots(ty: CartanType, rank: usize) -> Result<(usize, Vec<Weight>)> {
    let e = |dim: usize, i: usize| Weight::unit(dim, i);
    let diff = |dim: usize, i: usize, j: usize| &e(dim, i) - &e(dim, j);
    let bad = || Error::Config(format!("no root system of type {ty:?}{rank}"));
    Ok(match ty {
        CartanType::A => {
            if rank < 1 {
                return Err(bad());
            }
            let n = rank + 1;
            (n, (0..rank).map(|i| diff(n, i, i + 1)).collect())
        }
        CartanType::B => {
            if rank < 2 {
                return Err(bad());
            }
            let mut s: Vec<_> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            s.push(e(rank, rank - 1));
            (rank, s)
        }
        CartanType::C => {
            if rank < 1 {
                return Err(bad());
            }
            let mut s: Vec<_> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            s.push(e(rank, rank - 1).scale_int(2));
            (rank, s)
        }
        CartanType::D => {
            if rank < 2 {
                return Err(bad());
            }
            let mut s: Vec<_> = (0..rank - 1).map(|i| diff(rank, i, i + 1)).collect();
            s.push(&e(rank, rank - 2) + &e(rank, rank - 1));
            (rank, s)
        }
        CartanType::G => {
            if rank != 2 {
                return Err(bad());
            }
            (3, vec![Weight::from_ints(&[1, -1, 0]), Weight::from_ints(&[-2, 1, 1])])
        }
        CartanType::F => {
            if rank != 4 {
                return Err(bad());
            }
            let h = frac(1, 2);
            (
                4,
                vec![
                    Weight::from_ints(&[0, 1, -1, 0]),
                    Weight::from_ints(&[0, 0, 1, -1]),
                    Weight::from_ints(&[0, 0, 0, 1]),
                    Weight(vec![h.clone(), -h.clone(), -h.clone(), -h]),
                ],
            )
        }
        CartanType::E => {
            if !(6..=8).contains(&rank) {
                return Err(bad());
            }
            let h = frac(1, 2);
            let mut a1 = vec![-h.clone(); 8];
            a1[0] = h.clone();
            a1[7] = h;
            let mut s = vec![Weight(a1), &e(8, 0) + &e(8, 1), diff(8, 1, 0)];
            for i in 2..7 {
                s.push(diff(8, i, i - 1));
            }
            s.truncate(rank);
            (8, s)
        }
    })
}

/// Real-form labels accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FormLabel {
    G2Split,
    F4Split,
    E6Quaternionic,
    E7Quaternionic,
    E8Quaternionic,
    Su2n(usize),
    So4n(usize),
    Sp1q(usize),
    SuPq(usize, usize),
    SoStar(usize),
    SpR(usize),
    E6Hermitian,
    E7Hermitian,
}

impl FormLabel {
    pub fn is_quaternionic(&self) -> bool {
        matches!(
            self,
            FormLabel::G2Split
                | FormLabel::F4Split
                | FormLabel::E6Quaternionic
                | FormLabel::E7Quaternionic
                | FormLabel::E8Quaternionic
                | FormLabel::Su2n(_)
                | FormLabel::So4n(_)
        )
    }

    pub fn is_hermitian(&self) -> bool {
        matches!(
            self,
            FormLabel::SuPq(..)
                | FormLabel::SoStar(_)
                | FormLabel::SpR(_)
                | FormLabel::E6Hermitian
                | FormLabel::E7Hermitian
        )
    }

    /// Name of the real Lie algebra, for reports.
    pub fn algebra_name(&self) -> String {
        match self {
            FormLabel::G2Split => "g2(2)".into(),
            FormLabel::F4Split => "f4(4)".into(),
            FormLabel::E6Quaternionic => "e6(2)".into(),
            FormLabel::E7Quaternionic => "e7(-5)".into(),
            FormLabel::E8Quaternionic => "e8(-24)".into(),
            FormLabel::Su2n(n) => format!("su(2,{n})"),
            FormLabel::So4n(n) => format!("so(4,{n})"),
            FormLabel::Sp1q(n) => format!("sp(1,{n})"),
            FormLabel::SuPq(p, qq) => format!("su({p},{qq})"),
            FormLabel::SoStar(n) => format!("so*({})", 2 * n),
            FormLabel::SpR(n) => format!("sp({n},R)"),
            FormLabel::E6Hermitian => "e6(-14)".into(),
            FormLabel::E7Hermitian => "e7(-25)".into(),
        }
    }

    /// Every family with a representative parameter, for `list-forms`.
    pub fn catalogue() -> Vec<(&'static str, &'static str)> {
        vec![
            ("g2_2", "g2(2), quaternionic"),
            ("f4_4", "f4(4), quaternionic"),
            ("e6_2", "e6(2), quaternionic"),
            ("e7_m5", "e7(-5), quaternionic"),
            ("e8_m24", "e8(-24), quaternionic"),
            ("su2_n:<n>", "su(2,n), n >= 1, quaternionic"),
            ("so4_n:<n>", "so(4,n), n >= 3, quaternionic"),
            ("sp1_q:<q>", "sp(1,q), q >= 2"),
            ("su_pq:<p>,<q>", "su(p,q), 1 <= p <= q, Hermitian"),
            ("so_star:<n>", "so*(2n), n >= 2, Hermitian"),
            ("sp_n_R:<n>", "sp(n,R), n >= 1, Hermitian"),
            ("e6_m14", "e6(-14), Hermitian"),
            ("e7_m25", "e7(-25), Hermitian"),
        ]
    }
}

impl fmt::Display for FormLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FormLabel::G2Split => write!(f, "g2_2"),
            FormLabel::F4Split => write!(f, "f4_4"),
            FormLabel::E6Quaternionic => write!(f, "e6_2"),
            FormLabel::E7Quaternionic => write!(f, "e7_m5"),
            FormLabel::E8Quaternionic => write!(f, "e8_m24"),
            FormLabel::Su2n(n) => write!(f, "su2_n:{n}"),
            FormLabel::So4n(n) => write!(f, "so4_n:{n}"),
            FormLabel::Sp1q(n) => write!(f, "sp1_q:{n}"),
            FormLabel::SuPq(p, qq) => write!(f, "su_pq:{p},{qq}"),
            FormLabel::SoStar(n) => write!(f, "so_star:{n}"),
            FormLabel::SpR(n) => write!(f, "sp_n_R:{n}"),
            FormLabel::E6Hermitian => write!(f, "e6_m14"),
            FormLabel::E7Hermitian => write!(f, "e7_m25"),
        }
    }
}

impl FromStr for FormLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, arg) = match s.split_once(':') {
            Some((h, a)) => (h, Some(a)),
            None => (s, None),
        };
        let int = |a: Option<&str>| -> Result<usize> {
            a.and_then(|a| a.trim().parse().ok())
                .ok_or_else(|| Error::Config(format!("form '{s}' needs an integer parameter")))
        };
        let label = match head {
            "g2_2" => FormLabel::G2Split,
            "f4_4" => FormLabel::F4Split,
            "e6_2" => FormLabel::E6Quaternionic,
            "e7_m5" => FormLabel::E7Quaternionic,
            "e8_m24" => FormLabel::E8Quaternionic,
            "e6_m14" => FormLabel::E6Hermitian,
            "e7_m25" => FormLabel::E7Hermitian,
            "su2_n" => FormLabel::Su2n(int(arg)?),
            "so4_n" => FormLabel::So4n(int(arg)?),
            "sp1_q" => FormLabel::Sp1q(int(arg)?),
            "so_star" => FormLabel::SoStar(int(arg)?),
            "sp_n_R" => FormLabel::SpR(int(arg)?),
            "su_pq" => {
                let a = arg.ok_or_else(|| Error::Config("su_pq needs '<p>,<q>'".into()))?;
                let (p, qq) = a
                    .split_once(',')
                    .and_then(|(p, qq)| Some((p.trim().parse().ok()?, qq.trim().parse().ok()?)))
                    .ok_or_else(|| Error::Config(format!("bad su_pq parameters '{a}'")))?;
                FormLabel::SuPq(p, qq)
            }
            _ => return Err(Error::Config(format!("unsupported form label '{s}'"))),
        };
        let needs_arg = matches!(
            label,
            FormLabel::Su2n(_)
                | FormLabel::So4n(_)
                | FormLabel::Sp1q(_)
                | FormLabel::SuPq(..)
                | FormLabel::SoStar(_)
                | FormLabel::SpR(_)
        );
        if !needs_arg && arg.is_some() {
            return Err(Error::Config(format!("form '{head}' takes no parameter")));
        }
        Ok(label)
    }
}

/// A realized root system with a chosen positive system and compactness labels.
#[derive(Clone, Debug)]
pub struct RootDatum {
    pub label: String,
    form: InnerProductForm,
    roots: Vec<Weight>,
    index: HashMap<Weight, usize>,
    positive: Vec<usize>,
    simple: Vec<usize>,
    height: Vec<i64>,
    compact: Vec<bool>,
}

impl RootDatum {
    /// Generates the full root system from simple roots in ambient coordinates.
    /// Every root starts out labeled compact.
    pub fn from_simple_roots(
        label: impl Into<String>,
        form: InnerProductForm,
        simple_roots: &[Weight],
    ) -> Result<Self> {
        for s in simple_roots {
            if s.dim() != form.dim() {
                return Err(Error::Structural("simple root of wrong length".into()));
            }
            if s.is_zero() {
                return Err(domain!("zero simple root"));
            }
        }
        let mut seen: BTreeSet<Weight> = simple_roots.iter().cloned().collect();
        let mut queue: VecDeque<Weight> = simple_roots.iter().cloned().collect();
        while let Some(r) = queue.pop_front() {
            for s in simple_roots {
                let img = form.refl(&r, s);
                if seen.insert(img.clone()) {
                    queue.push_back(img);
                }
            }
        }
        let roots: Vec<Weight> = seen.into_iter().collect();
        let index: HashMap<Weight, usize> = roots.iter().cloned().enumerate().map(|(i, r)| (r, i)).collect();

        // positive roots: closure of simple roots under adding simple roots
        let mut height = vec![0i64; roots.len()];
        let mut positive = Vec::new();
        let mut frontier = Vec::new();
        let mut simple = Vec::new();
        for s in simple_roots {
            let i = index[s];
            simple.push(i);
            height[i] = 1;
            positive.push(i);
            frontier.push(i);
        }
        let mut h = 1;
        while !frontier.is_empty() {
            h += 1;
            let mut next = Vec::new();
            for &i in &frontier {
                for s in simple_roots {
                    let cand = &roots[i] + s;
                    if let Some(&j) = index.get(&cand) {
                        if height[j] == 0 {
                            height[j] = h;
                            positive.push(j);
                            next.push(j);
                        }
                    }
                }
            }
            frontier = next;
        }
        positive.sort();
        if positive.len() * 2 != roots.len() {
            return Err(internal!("positive roots do not split the root system"));
        }
        for &i in &positive {
            let neg = index[&-&roots[i]];
            height[neg] = -height[i];
        }
        let compact = vec![true; roots.len()];
        Ok(RootDatum { label: label.into(), form, roots, index, positive, simple, height, compact })
    }

    pub fn of_type(ty: CartanType, rank: usize) -> Result<Self> {
        let (dim, simple) = bourbaki_simple_roots(ty, rank)?;
        Self::from_simple_roots(format!("{ty:?}{rank}"), InnerProductForm::euclidean(dim), &simple)
    }

    /// Builds the labeled root datum for a real form.
    pub fn for_form(label: FormLabel) -> Result<Self> {
        let cfg = |msg: &str| Error::Config(format!("{label}: {msg}"));
        let mut rd = match label {
            FormLabel::G2Split => Self::of_type(CartanType::G, 2)?,
            FormLabel::F4Split => Self::of_type(CartanType::F, 4)?,
            FormLabel::E6Quaternionic | FormLabel::E6Hermitian => Self::of_type(CartanType::E, 6)?,
            FormLabel::E7Quaternionic | FormLabel::E7Hermitian => Self::of_type(CartanType::E, 7)?,
            FormLabel::E8Quaternionic => Self::of_type(CartanType::E, 8)?,
            FormLabel::Su2n(n) => {
                if n < 1 {
                    return Err(cfg("n must be >= 1"));
                }
                Self::of_type(CartanType::A, n + 1)?
            }
            FormLabel::So4n(n) => {
                if n < 3 {
                    return Err(cfg("n must be >= 3"));
                }
                if n % 2 == 1 {
                    Self::of_type(CartanType::B, (n + 3) / 2)?
                } else {
                    Self::of_type(CartanType::D, (n + 4) / 2)?
                }
            }
            FormLabel::Sp1q(qq) => {
                if qq < 2 {
                    return Err(cfg("q must be >= 2"));
                }
                Self::of_type(CartanType::C, qq + 1)?
            }
            FormLabel::SuPq(p, qq) => {
                if p < 1 || p > qq {
                    return Err(Error::Domain(format!("{label}: need 1 <= p <= q")));
                }
                Self::of_type(CartanType::A, p + qq - 1)?
            }
            FormLabel::SoStar(n) => {
                if n < 2 {
                    return Err(cfg("n must be >= 2"));
                }
                Self::of_type(CartanType::D, n)?
            }
            FormLabel::SpR(n) => {
                if n < 1 {
                    return Err(cfg("n must be >= 1"));
                }
                Self::of_type(CartanType::C, n)?
            }
        };
        rd.label = label.to_string();
        if label.is_quaternionic() {
            // <gamma, beta^> in {0, +-2} compact, +-1 noncompact
            let beta = rd.highest_root().clone();
            rd.compact = rd.roots.iter().map(|g| rd.form.pair(g, &beta).abs() != Q::one()).collect();
        } else if let FormLabel::Sp1q(_) = label {
            // noncompact: +-e1 +- e_j, j >= 2
            rd.compact = rd.roots.iter().map(|g| !(g.0[0].abs() == Q::one())).collect();
        } else {
            let node = match label {
                FormLabel::SuPq(p, _) => p - 1,
                FormLabel::SoStar(n) | FormLabel::SpR(n) => n - 1,
                FormLabel::E6Hermitian => 0,
                FormLabel::E7Hermitian => 6,
                _ => unreachable!(),
            };
            let omega = rd.fundamental_weight(node)?;
            rd.compact = rd.roots.iter().map(|g| rd.form.ip(g, &omega).is_zero()).collect();
        }
        Ok(rd)
    }

    pub fn form(&self) -> &InnerProductForm {
        &self.form
    }

    pub fn dim(&self) -> usize {
        self.form.dim()
    }

    pub fn rank(&self) -> usize {
        self.simple.len()
    }

    pub fn roots(&self) -> &[Weight] {
        &self.roots
    }

    pub fn root(&self, i: usize) -> &Weight {
        &self.roots[i]
    }

    pub fn index_of(&self, w: &Weight) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn is_root(&self, w: &Weight) -> bool {
        self.index.contains_key(w)
    }

    pub fn positive_roots(&self) -> impl Iterator<Item = &Weight> {
        self.positive.iter().map(|&i| &self.roots[i])
    }

    pub fn simple_roots(&self) -> Vec<Weight> {
        self.simple.iter().map(|&i| self.roots[i].clone()).collect()
    }

    pub fn is_positive(&self, w: &Weight) -> bool {
        self.index.get(w).is_some_and(|&i| self.height[i] > 0)
    }

    pub fn is_compact(&self, w: &Weight) -> bool {
        self.index.get(w).is_some_and(|&i| self.compact[i])
    }

    pub fn highest_root(&self) -> &Weight {
        let i = *self.positive.iter().max_by_key(|&&i| self.height[i]).unwrap();
        &self.roots[i]
    }

    pub fn compact_roots(&self) -> Vec<Weight> {
        self.roots.iter().zip(&self.compact).filter(|(_, &c)| c).map(|(r, _)| r.clone()).collect()
    }

    pub fn noncompact_roots(&self) -> Vec<Weight> {
        self.roots.iter().zip(&self.compact).filter(|(_, &c)| !c).map(|(r, _)| r.clone()).collect()
    }

    /// The standard positive system.
    pub fn positive_system(&self) -> PositiveSystem {
        PositiveSystem::new(&self.form, self.positive_roots().cloned().collect())
    }

    /// Coefficients of `w` over the simple roots.
    pub fn simple_coordinates(&self, w: &Weight) -> Option<Vec<Q>> {
        self.form.span_coordinates(&self.simple_roots(), w)
    }

    /// Fundamental weight dual to the `node`-th simple coroot, inside the root span.
    pub fn fundamental_weight(&self, node: usize) -> Result<Weight> {
        let simple = self.simple_roots();
        if node >= simple.len() {
            return Err(Error::Config(format!("simple root index {node} out of range")));
        }
        let gram: Vec<Vec<Q>> = simple.iter().map(|a| simple.iter().map(|b| self.form.pair(b, a)).collect()).collect();
        // sum_j c_j <alpha_j, alpha_i^> = delta_{i,node}
        let rhs = (0..simple.len()).map(|i| if i == node { Q::one() } else { Q::zero() }).collect();
        let c = crate::lattice::solve(gram, rhs).ok_or_else(|| internal!("singular Cartan matrix"))?;
        let mut w = Weight::zero(self.dim());
        for (ci, a) in c.iter().zip(&simple) {
            w = w.add_scaled(ci, a);
        }
        Ok(w)
    }

    /// Converts a weight given on the simple roots (`Simple`) or on the
    /// fundamental weights (`Fundamental`) into ambient coordinates.
    pub fn from_basis(&self, coeffs: &[Q], fundamental: bool) -> Result<Weight> {
        if coeffs.len() != self.rank() {
            return Err(Error::Structural(format!("expected {} coefficients, got {}", self.rank(), coeffs.len())));
        }
        let basis = if fundamental {
            (0..self.rank()).map(|i| self.fundamental_weight(i)).collect::<Result<Vec<_>>>()?
        } else {
            self.simple_roots()
        };
        let mut w = Weight::zero(self.dim());
        for (c, b) in coeffs.iter().zip(&basis) {
            w = w.add_scaled(c, b);
        }
        Ok(w)
    }

    /// Relabels compactness explicitly (used by hand-built data).
    pub fn set_compact(&mut self, compact: impl Fn(&Weight) -> bool) {
        self.compact = self.roots.iter().map(compact).collect();
    }
}

/// A positive system of a root (sub)system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveSystem {
    roots: BTreeSet<Weight>,
    rho: Weight,
    dim: usize,
}

impl PositiveSystem {
    pub fn new(form: &InnerProductForm, roots: Vec<Weight>) -> Self {
        let dim = form.dim();
        let roots: BTreeSet<Weight> = roots.into_iter().collect();
        let rho = roots.iter().fold(Weight::zero(dim), |acc, r| &acc + r).half();
        PositiveSystem { roots, rho, dim }
    }

    /// Roots of `roots` pairing positively with the regular vector `chamber`.
    pub fn from_chamber(form: &InnerProductForm, roots: &[Weight], chamber: &Weight) -> Result<Self> {
        let mut pos = Vec::new();
        for r in roots {
            let c = form.ip(r, chamber);
            if c.is_zero() {
                return Err(domain!("vector {chamber} is singular for root {r}"));
            }
            if c.is_positive() {
                pos.push(r.clone());
            }
        }
        Ok(Self::new(form, pos))
    }

    pub fn rho(&self) -> &Weight {
        &self.rho
    }

    pub fn len(&self) -> usize {
        self.roots.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roots.is_empty()
    }

    pub fn contains(&self, w: &Weight) -> bool {
        self.roots.contains(w)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Weight> {
        self.roots.iter()
    }

    pub fn is_superset_of(&self, other: &PositiveSystem) -> bool {
        other.roots.is_subset(&self.roots)
    }

    /// Indecomposable elements: not a sum of two members.
    pub fn simple_roots(&self) -> Vec<Weight> {
        self.roots
            .iter()
            .filter(|r| {
                !self.roots.iter().any(|a| {
                    let b = *r - a;
                    self.roots.contains(&b)
                })
            })
            .cloned()
            .collect()
    }

    /// Restriction to a subset of roots.
    pub fn filter(&self, form: &InnerProductForm, keep: impl Fn(&Weight) -> bool) -> PositiveSystem {
        Self::new(form, self.roots.iter().filter(|r| keep(r)).cloned().collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// An element of a finite reflection group, with its action cached as a matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeylElement {
    pub word: Vec<usize>,
    /// Images of the standard basis vectors.
    columns: Vec<Weight>,
    pub sign: i8,
}

impl WeylElement {
    fn identity(dim: usize) -> Self {
        WeylElement { word: vec![], columns: (0..dim).map(|i| Weight::unit(dim, i)).collect(), sign: 1 }
    }

    pub fn length(&self) -> usize {
        self.word.len()
    }

    pub fn apply(&self, w: &Weight) -> Weight {
        let mut out = Weight::zero(w.dim());
        for (c, col) in w.0.iter().zip(&self.columns) {
            if !c.is_zero() {
                out = out.add_scaled(c, col);
            }
        }
        out
    }

    /// Matrix `[row][col]`.
    pub fn matrix(&self) -> Vec<Vec<Q>> {
        let dim = self.columns.len();
        (0..dim).map(|r| (0..dim).map(|c| self.columns[c].0[r].clone()).collect()).collect()
    }

    pub fn determinant(&self) -> Q {
        determinant(self.matrix())
    }

    /// `self * reflection(gamma)`.
    fn times_reflection(&self, form: &InnerProductForm, gamma: &Weight, idx: usize) -> Self {
        let dim = self.columns.len();
        let columns = (0..dim).map(|j| self.apply(&form.refl(&Weight::unit(dim, j), gamma))).collect();
        let mut word = self.word.clone();
        word.push(idx);
        WeylElement { word, columns, sign: -self.sign }
    }
}

/// A finite group generated by reflections in independent roots.
#[derive(Clone, Debug)]
pub struct WeylGroup {
    pub generators: Vec<Weight>,
    pub elements: Vec<WeylElement>,
    /// A vector with trivial stabilizer in the group.
    regular: Weight,
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn regular_vector(&self) -> &Weight {
        &self.regular
    }
}

/// Enumerates the group generated by the reflections in `generators`, which
/// must be the simple roots of the subsystem they generate.
pub fn weyl_generate(form: &InnerProductForm, generators: &[Weight], bound: usize) -> Result<WeylGroup> {
    let dim = form.dim();
    if generators.iter().any(Weight::is_zero) {
        return Err(domain!("zero generator"));
    }
    if crate::lattice::independent_subset(generators).len() != generators.len() {
        return Err(domain!("Weyl generators must be linearly independent"));
    }
    // regular: <x, g^> = 1 for every generator
    let regular = if generators.is_empty() {
        Weight::zero(dim)
    } else {
        let gram: Vec<Vec<Q>> =
            generators.iter().map(|a| generators.iter().map(|b| form.pair(b, a)).collect()).collect();
        let c = crate::lattice::solve(gram, vec![Q::one(); generators.len()])
            .ok_or_else(|| internal!("singular generator matrix"))?;
        c.iter().zip(generators).fold(Weight::zero(dim), |acc, (ci, g)| acc.add_scaled(ci, g))
    };
    let mut elements = vec![WeylElement::identity(dim)];
    let mut seen: HashMap<Weight, usize> = HashMap::new();
    seen.insert(regular.clone(), 0);
    let mut head = 0;
    while head < elements.len() {
        let current = elements[head].clone();
        head += 1;
        for (i, g) in generators.iter().enumerate() {
            let key = current.apply(&form.refl(&regular, g));
            if seen.contains_key(&key) {
                continue;
            }
            if elements.len() >= bound {
                return Err(Error::Resource(format!("Weyl group order exceeds the bound {bound}")));
            }
            seen.insert(key, elements.len());
            elements.push(current.times_reflection(form, g, i));
        }
    }
    elements.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
    Ok(WeylGroup { generators: generators.to_vec(), elements, regular })
}

/// Checks that `roots` is closed under negation and under its own reflections.
pub fn is_reflection_closed(form: &InnerProductForm, roots: &[Weight]) -> bool {
    let set: BTreeSet<&Weight> = roots.iter().collect();
    roots.iter().all(|a| set.contains(&-a) && roots.iter().all(|b| set.contains(&form.refl(b, a))))
}

/// Minimal-length representatives of the right cosets `W_z w` of the
/// reflection subgroup generated by `phi_z` inside `group`.
pub fn coset_reps(
    form: &InnerProductForm,
    group: &WeylGroup,
    phi_z: &[Weight],
    phi_z_positive: &PositiveSystem,
) -> Result<Vec<WeylElement>> {
    if !is_reflection_closed(form, phi_z) {
        return Err(domain!("Phi_z is not a closed root subsystem"));
    }
    let mut best: BTreeMap<Weight, (WeylElement, bool)> = BTreeMap::new();
    for w in &group.elements {
        let mut v = w.apply(&group.regular);
        // move into the W_z-dominant chamber
        loop {
            let neg = phi_z_positive.iter().find(|g| form.ip(&v, g).is_negative());
            match neg {
                Some(g) => v = form.refl(&v, g),
                None => break,
            }
        }
        match best.get_mut(&v) {
            None => {
                best.insert(v, (w.clone(), false));
            }
            Some((cur, tie)) => {
                if w.length() < cur.length() {
                    *cur = w.clone();
                    *tie = false;
                } else if w.length() == cur.length() {
                    *tie = true;
                }
            }
        }
    }
    let mut reps = Vec::with_capacity(best.len());
    for (_, (w, tie)) in best {
        if tie {
            return Err(internal!("two minimal-length elements in one coset"));
        }
        reps.push(w);
    }
    reps.sort_by(|a, b| (a.length(), &a.word).cmp(&(b.length(), &b.word)));
    Ok(reps)
}

/// All positive systems of `rd` whose compact part is `delta`.
pub fn positive_systems_containing(
    rd: &RootDatum,
    delta: &PositiveSystem,
    bound: usize,
) -> Result<Vec<PositiveSystem>> {
    let form = rd.form();
    let w = weyl_generate(form, &rd.simple_roots(), bound)?;
    let rho = rd.positive_system().rho().clone();
    let mut found: Vec<PositiveSystem> = Vec::new();
    for el in &w.elements {
        let chamber = el.apply(&rho);
        if delta.iter().all(|g| form.ip(g, &chamber).is_positive()) {
            let ps = PositiveSystem::from_chamber(form, rd.roots(), &chamber)?;
            let compact_part = ps.filter(form, |g| rd.is_compact(g));
            if compact_part != *delta {
                return Err(internal!("compact part mismatch for a chamber containing delta"));
            }
            if !found.contains(&ps) {
                found.push(ps);
            }
        }
    }
    Ok(found)
}

/// The compact positive system contained in the standard positive system.
pub fn compact_positive(rd: &RootDatum) -> PositiveSystem {
    rd.positive_system().filter(rd.form(), |g| rd.is_compact(g))
}

/// The small positive system with its maximal root and distinguished
/// noncompact simple root.
#[derive(Clone, Debug)]
pub struct SmallSystem {
    pub psi: PositiveSystem,
    pub beta: Weight,
    pub alpha: Weight,
}

/// Verifies and returns the small system of a quaternionic root datum.
pub fn small_system(rd: &RootDatum) -> Result<SmallSystem> {
    let form = rd.form();
    let psi = rd.positive_system();
    let beta = rd.highest_root().clone();
    if !rd.is_compact(&beta) {
        return Err(internal!("maximal root is noncompact for {}", rd.label));
    }
    let simple = rd.simple_roots();
    let noncompact_simple: Vec<&Weight> = simple.iter().filter(|s| !rd.is_compact(s)).collect();
    if noncompact_simple.is_empty() || noncompact_simple.len() > 2 {
        return Err(internal!("{} has {} noncompact simple roots", rd.label, noncompact_simple.len()));
    }
    let coeffs = rd.simple_coordinates(&beta).ok_or_else(|| internal!("beta not in root span"))?;
    let n0n1: Q = simple.iter().zip(&coeffs).filter(|(s, _)| !rd.is_compact(s)).map(|(_, c)| c.clone()).sum();
    if n0n1 != q(2) {
        return Err(internal!("n0 + n1 = {n0n1} for {}", rd.label));
    }
    let alpha = (*noncompact_simple
        .iter()
        .find(|s| form.pair(&beta, s) == Q::one())
        .ok_or_else(|| internal!("no noncompact simple root with <beta, alpha^> = 1"))?)
    .clone();
    // two noncompact roots of Psi add up to a root only when the sum is beta
    let nc: Vec<&Weight> = psi.iter().filter(|g| !rd.is_compact(g)).collect();
    for a in &nc {
        for b in &nc {
            let s = *a + *b;
            if rd.is_root(&s) && s != beta {
                return Err(internal!("noncompact roots {a:?} + {b:?} is a root other than beta"));
            }
        }
    }
    Ok(SmallSystem { psi, beta, alpha })
}
