//! Exact weights: rational coordinate vectors, inner products, coroot pairings
//! and reflections.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{domain, Error, Result};

/// Exact rational scalar. `BigRational` is always kept in lowest terms with a
/// positive denominator, so equality and hashing are canonical.
pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Returns the integer value of `x` if it has denominator one.
pub fn as_integer(x: &Q) -> Option<BigInt> {
    x.is_integer().then(|| x.to_integer())
}

/// Binomial coefficient with `C(k, k) = 1` for negative `k` and zero for any
/// other negative argument.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return if n == k { BigInt::one() } else { BigInt::zero() };
    }
    if n < k || n < 0 {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

/// A weight in the ambient coordinates of a realized root system.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Weight(pub Vec<Q>);

impl Weight {
    pub fn zero(dim: usize) -> Self {
        Weight(vec![Q::zero(); dim])
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        Weight(coords.iter().map(|&c| q(c)).collect())
    }

    /// Unit vector `e_i` (zero-based index).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut w = Weight::zero(dim);
        w.0[i] = Q::one();
        w
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[Q] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight(self.0.iter().map(|x| x * c).collect())
    }

    pub fn scale_int(&self, c: i64) -> Weight {
        self.scale(&q(c))
    }

    pub fn half(&self) -> Weight {
        self.scale(&frac(1, 2))
    }

    /// Plain coordinate dot product, independent of any inner product form.
    pub fn dot(&self, other: &Weight) -> Q {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn add_scaled(&self, c: &Q, other: &Weight) -> Weight {
        Weight(self.0.iter().zip(&other.0).map(|(a, b)| a + c * b).collect())
    }
}

impl Add for &Weight {
    type Output = Weight;
    fn add(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.dim(), rhs.dim());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        debug_assert_eq!(self.dim(), rhs.dim());
        Weight(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight(self.0.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

impl FromStr for Weight {
    type Err = Error;

    /// Parses the comma-separated textual form, e.g. `"3/2,-1/2,0,0"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Err(Error::Structural("empty weight".into()));
        }
        s.split(',')
            .map(|tok| {
                let tok = tok.trim();
                Q::from_str(tok).map_err(|_| Error::Structural(format!("bad rational '{tok}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Weight)
    }
}

/// Symmetric positive-definite rational bilinear form on the ambient space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InnerProductForm {
    dim: usize,
    gram: Vec<Vec<Q>>,
    euclidean: bool,
}

impl InnerProductForm {
    /// The standard form of the Bourbaki realizations.
    pub fn euclidean(dim: usize) -> Self {
        let gram = (0..dim).map(|i| (0..dim).map(|j| if i == j { Q::one() } else { Q::zero() }).collect()).collect();
        InnerProductForm { dim, gram, euclidean: true }
    }

    pub fn from_gram(gram: Vec<Vec<Q>>) -> Result<Self> {
        let dim = gram.len();
        for (i, row) in gram.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::Structural("gram matrix is not square".into()));
            }
            if !row[i].is_positive() {
                return Err(Error::Structural("gram diagonal must be positive".into()));
            }
            if (0..dim).any(|j| gram[i][j] != gram[j][i]) {
                return Err(Error::Structural("gram matrix is not symmetric".into()));
            }
        }
        let euclidean = (0..dim).all(|i| (0..dim).all(|j| gram[i][j] == if i == j { Q::one() } else { Q::zero() }));
        Ok(InnerProductForm { dim, gram, euclidean })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gram(&self) -> &[Vec<Q>] {
        &self.gram
    }

    fn check(&self, a: &Weight) -> Result<()> {
        if a.dim() != self.dim {
            return Err(Error::Structural(format!(
                "weight of length {} used with form of dimension {}",
                a.dim(),
                self.dim
            )));
        }
        Ok(())
    }

    pub fn inner(&self, a: &Weight, b: &Weight) -> Result<Q> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.ip(a, b))
    }

    /// Unchecked inner product for internal use on weights of known length.
    pub(crate) fn ip(&self, a: &Weight, b: &Weight) -> Q {
        if self.euclidean {
            return a.dot(b);
        }
        let mut acc = Q::zero();
        for (i, ai) in a.0.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.0.iter().enumerate() {
                if !bj.is_zero() {
                    acc += ai * &self.gram[i][j] * bj;
                }
            }
        }
        acc
    }

    pub(crate) fn norm2(&self, a: &Weight) -> Q {
        self.ip(a, a)
    }

    /// `2(lam, gamma)/(gamma, gamma)`.
    pub fn coroot_pairing(&self, lam: &Weight, gamma: &Weight) -> Result<Q> {
        self.check(lam)?;
        self.check(gamma)?;
        if gamma.is_zero() {
            return Err(domain!("coroot of the zero vector"));
        }
        Ok(self.pair(lam, gamma))
    }

    pub(crate) fn pair(&self, lam: &Weight, gamma: &Weight) -> Q {
        q(2) * self.ip(lam, gamma) / self.norm2(gamma)
    }

    pub fn reflect(&self, lam: &Weight, gamma: &Weight) -> Result<Weight> {
        let c = self.coroot_pairing(lam, gamma)?;
        Ok(lam.add_scaled(&-c, gamma))
    }

    pub(crate) fn refl(&self, lam: &Weight, gamma: &Weight) -> Weight {
        let c = self.pair(lam, gamma);
        lam.add_scaled(&-c, gamma)
    }

    /// Coefficients of `v` in the basis `basis` when `v` lies in its span.
    /// `basis` must be linearly independent.
    pub fn span_coordinates(&self, basis: &[Weight], v: &Weight) -> Option<Vec<Q>> {
        let gram: Vec<Vec<Q>> = basis.iter().map(|a| basis.iter().map(|b| self.ip(a, b)).collect()).collect();
        let rhs: Vec<Q> = basis.iter().map(|a| self.ip(a, v)).collect();
        let x = solve(gram, rhs)?;
        let mut back = Weight::zero(v.dim());
        for (c, b) in x.iter().zip(basis) {
            back = back.add_scaled(c, b);
        }
        (back == *v).then_some(x)
    }

    /// Orthogonal projection of `v` onto the span of the independent `basis`.
    pub fn project(&self, basis: &[Weight], v: &Weight) -> Weight {
        let gram: Vec<Vec<Q>> = basis.iter().map(|a| basis.iter().map(|b| self.ip(a, b)).collect()).collect();
        let rhs: Vec<Q> = basis.iter().map(|a| self.ip(a, v)).collect();
        let x = solve(gram, rhs).expect("projection basis must be independent");
        let mut out = Weight::zero(v.dim());
        for (c, b) in x.iter().zip(basis) {
            out = out.add_scaled(c, b);
        }
        out
    }
}

/// Gaussian elimination over the rationals; `None` if the matrix is singular.
#[allow(clippy::needless_range_loop)]
pub fn solve(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = a.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let inv = Q::one() / &a[col][col];
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = &a[r][col] * &inv;
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
                let t = &factor * &b[col];
                b[r] -= t;
            }
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

/// Determinant by elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(mut a: Vec<Vec<Q>>) -> Q {
    let n = a.len();
    let mut det = Q::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !a[r][col].is_zero()) else {
            return Q::zero();
        };
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= &a[col][col];
        for r in col + 1..n {
            if !a[r][col].is_zero() {
                let factor = &a[r][col] / &a[col][col];
                for c in col..n {
                    let t = &factor * &a[col][c];
                    a[r][c] -= t;
                }
            }
        }
    }
    det
}

/// Greedy maximal linearly independent subsequence (indices into `vs`).
pub fn independent_subset(vs: &[Weight]) -> Vec<usize> {
    let mut rows: Vec<Vec<Q>> = Vec::new();
    let mut picked = Vec::new();
    for (idx, v) in vs.iter().enumerate() {
        let mut r = v.0.clone();
        for basis_row in &rows {
            let lead = basis_row.iter().position(|x| !x.is_zero()).unwrap();
            if !r[lead].is_zero() {
                let f = &r[lead] / &basis_row[lead];
                for (x, y) in r.iter_mut().zip(basis_row) {
                    *x -= &f * y;
                }
            }
        }
        if r.iter().any(|x| !x.is_zero()) {
            rows.push(r);
            picked.push(idx);
        }
    }
    picked
}

/// Finite multiset of weights with positive multiplicities.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightMultiset {
    entries: BTreeMap<Weight, usize>,
}

impl WeightMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, w: Weight, mult: usize) {
        if mult > 0 {
            *self.entries.entry(w).or_insert(0) += mult;
        }
    }

    /// Drops every copy of `w`.
    pub fn remove_all(&mut self, w: &Weight) {
        self.entries.remove(w);
    }

    pub fn multiplicity(&self, w: &Weight) -> usize {
        self.entries.get(w).copied().unwrap_or(0)
    }

    pub fn len(&self) -> usize {
        self.entries.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distinct(&self) -> impl Iterator<Item = (&Weight, usize)> {
        self.entries.iter().map(|(w, &m)| (w, m))
    }

    pub fn union(&self, other: &WeightMultiset) -> WeightMultiset {
        let mut out = self.clone();
        for (w, m) in other.distinct() {
            out.insert(w.clone(), m);
        }
        out
    }

    pub fn sum(&self, dim: usize) -> Weight {
        self.distinct().fold(Weight::zero(dim), |acc, (w, m)| acc.add_scaled(&q(m as i64), w))
    }
}

impl FromIterator<Weight> for WeightMultiset {
    fn from_iter<T: IntoIterator<Item = Weight>>(iter: T) -> Self {
        let mut ms = WeightMultiset::new();
        for w in iter {
            ms.insert(w, 1);
        }
        ms
    }
}
