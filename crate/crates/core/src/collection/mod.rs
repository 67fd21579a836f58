//! Exact arithmetic in `G(t)` by collection, and the candidate-map checker.
//!
//! Elements are exponent vectors `x` standing for `g_1^{x_1} ... g_n^{x_n}`.
//! Multiplication recurses down the series `G_l = <g_l, ..., g_n>`:
//!
//! ```text
//! (g_l^a x') (g_l^b y') = g_l^{a+b} · (g_l^{-b} x' g_l^b) · y'
//! ```
//!
//! so only conjugation of `G_{l+1}` by powers of `g_l` is needed. Those
//! automorphism powers, and powers of elements, are integer-valued
//! polynomials in the exponent; they are tabulated at a few points and
//! evaluated by Newton interpolation, which keeps every operation exact for
//! exponents of any size.

mod candidate;
pub mod equations;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::params::{int_json, ParamTuple, Triple};
use crate::{Error, Result};

pub use candidate::{check_candidate_map, CandidateMatrix, MapReport, RelationResidual};

/// An exponent vector in normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<BigInt>);

impl GroupElement {
    pub fn new(exponents: Vec<BigInt>) -> Self {
        GroupElement(exponents)
    }

    pub fn from_i64(exponents: &[i64]) -> Self {
        GroupElement(exponents.iter().map(|&e| BigInt::from(e)).collect())
    }

    pub fn identity(n: usize) -> Self {
        GroupElement(vec![BigInt::zero(); n])
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut v = vec![BigInt::zero(); n];
        v[i] = BigInt::one();
        GroupElement(v)
    }

    pub fn exponents(&self) -> &[BigInt] {
        &self.0
    }

    pub fn into_exponents(self) -> Vec<BigInt> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.0.iter().map(int_json).collect())
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

type Vector = Vec<BigInt>;

/// A nilpotent power-commutator presentation on `n` generators.
#[derive(Debug, Clone)]
pub struct PcPresentation {
    n: usize,
    constants: BTreeMap<Triple, BigInt>,
    /// `comm[i][j]` (i < j): exponent vector of `[g_j, g_i]`, supported on
    /// positions `> j`.
    comm: Vec<Vec<Vector>>,
    /// `abelian[l]`: whether `G_l` is abelian.
    abelian: Vec<bool>,
    /// `conj[l][j]`: Newton coefficients in `e` of `g_l^{-e} g_j g_l^e`.
    conj: Vec<Vec<Vec<Vector>>>,
}

impl PcPresentation {
    /// Build from arbitrary structure constants (no type constraints).
    pub fn from_structure_constants<'a, I>(n: usize, constants: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Triple, &'a BigInt)>,
    {
        if n == 0 || n > 9 {
            return Err(Error::InvalidArgument(format!("unsupported number of generators {n}")));
        }
        let mut map = BTreeMap::new();
        let mut comm = vec![vec![vec![BigInt::zero(); n]; n]; n];
        for (tr, v) in constants {
            if !tr.is_ordered(n) {
                return Err(Error::InvalidArgument(format!("triple {tr} out of range for n = {n}")));
            }
            if v.is_zero() {
                continue;
            }
            let (i, j, k) = (tr.0 as usize - 1, tr.1 as usize - 1, tr.2 as usize - 1);
            comm[i][j][k] = v.clone();
            map.insert(tr, v.clone());
        }
        let abelian = (0..=n)
            .map(|l| (l..n).all(|i| (i + 1..n).all(|j| comm[i][j].iter().all(Zero::is_zero))))
            .collect();
        let mut pres = PcPresentation { n, constants: map, comm, abelian, conj: vec![Vec::new(); n] };
        pres.build_conjugation_tables()?;
        Ok(pres)
    }

    pub fn from_params(t: &ParamTuple) -> Result<Self> {
        Self::from_structure_constants(t.hirsch_length(), t.entries())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `t_{ijk}`, zero when unlisted.
    pub fn constant(&self, tr: Triple) -> BigInt {
        self.constants.get(&tr).cloned().unwrap_or_default()
    }

    pub fn structure_constants(&self) -> &BTreeMap<Triple, BigInt> {
        &self.constants
    }

    /// Exponent vector of `[g_j, g_i]` for 0-based `i < j`.
    pub fn relation(&self, i: usize, j: usize) -> GroupElement {
        GroupElement(self.comm[i][j].clone())
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement::identity(self.n)
    }

    fn check(&self, x: &GroupElement) -> Result<()> {
        if x.len() == self.n {
            Ok(())
        } else {
            Err(Error::DimensionMismatch { expected: self.n, actual: x.len() })
        }
    }

    pub fn multiply(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        Ok(GroupElement(self.mul_at(0, &x.0, &y.0)))
    }

    pub fn inverse(&self, x: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement(self.inv_at(0, &x.0)))
    }

    pub fn power(&self, x: &GroupElement, e: &BigInt) -> Result<GroupElement> {
        self.check(x)?;
        Ok(GroupElement(self.pow_at(0, &x.0, e)))
    }

    /// `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(&self, x: &GroupElement, y: &GroupElement) -> Result<GroupElement> {
        self.check(x)?;
        self.check(y)?;
        let xi = self.inv_at(0, &x.0);
        let yi = self.inv_at(0, &y.0);
        let left = self.mul_at(0, &xi, &yi);
        let right = self.mul_at(0, &x.0, &y.0);
        Ok(GroupElement(self.mul_at(0, &left, &right)))
    }

    /// Product of a word of elements, left to right.
    pub fn product<'a, I>(&self, word: I) -> Result<GroupElement>
    where
        I: IntoIterator<Item = &'a GroupElement>,
    {
        let mut acc = self.identity();
        for w in word {
            acc = self.multiply(&acc, w)?;
        }
        Ok(acc)
    }

    // ---- level-wise arithmetic; vectors are full length with zeros below `l`.

    fn mul_at(&self, l: usize, x: &[BigInt], y: &[BigInt]) -> Vector {
        if self.abelian[l] {
            return x.iter().zip(y).map(|(a, b)| a + b).collect();
        }
        let b = &y[l];
        let mut x_tail = x.to_vec();
        x_tail[l] = BigInt::zero();
        let mut y_tail = y.to_vec();
        y_tail[l] = BigInt::zero();
        let moved = if b.is_zero() { x_tail } else { self.conj_pow(l, b, &x_tail) };
        let mut out = self.mul_at(l + 1, &moved, &y_tail);
        out[l] = &x[l] + b;
        out
    }

    /// `g_l^{-e} z g_l^{e}` for `z` in `G_{l+1}`.
    fn conj_pow(&self, l: usize, e: &BigInt, z: &[BigInt]) -> Vector {
        if e.is_zero() || z.iter().all(Zero::is_zero) {
            return z.to_vec();
        }
        let mut acc = vec![BigInt::zero(); self.n];
        for j in l + 1..self.n {
            if z[j].is_zero() {
                continue;
            }
            let image = newton_eval(&self.conj[l][j], e);
            let part = self.pow_at(l + 1, &image, &z[j]);
            acc = self.mul_at(l + 1, &acc, &part);
        }
        acc
    }

    fn inv_at(&self, l: usize, x: &[BigInt]) -> Vector {
        if self.abelian[l] {
            return x.iter().map(|a| -a).collect();
        }
        let a = &x[l];
        let mut tail = x.to_vec();
        tail[l] = BigInt::zero();
        let tail_inv = self.inv_at(l + 1, &tail);
        // (g_l^a x')^{-1} = g_l^{-a} · (g_l^{a} x'^{-1} g_l^{-a})
        let neg = -a;
        let mut out = self.conj_pow(l, &neg, &tail_inv);
        out[l] = neg;
        out
    }

    fn pow_at(&self, l: usize, x: &[BigInt], e: &BigInt) -> Vector {
        if self.abelian[l] {
            return x.iter().map(|a| a * e).collect();
        }
        let degree = self.n - l;
        if let Some(small) = e.to_i64().filter(|v| v.unsigned_abs() as usize <= degree) {
            let base = if small < 0 { self.inv_at(l, x) } else { x.to_vec() };
            let mut acc = vec![BigInt::zero(); self.n];
            for _ in 0..small.unsigned_abs() {
                acc = self.mul_at(l, &acc, &base);
            }
            return acc;
        }
        let mut values = Vec::with_capacity(degree + 1);
        let mut acc = vec![BigInt::zero(); self.n];
        values.push(acc.clone());
        for _ in 0..degree {
            acc = self.mul_at(l, &acc, x);
            values.push(acc.clone());
        }
        newton_eval(&forward_differences(values), e)
    }

    /// Apply the endomorphism of `G_{l+1}` given by generator images.
    fn apply_images(&self, l: usize, images: &[Vector], z: &[BigInt]) -> Vector {
        let mut acc = vec![BigInt::zero(); self.n];
        for j in l + 1..self.n {
            if z[j].is_zero() {
                continue;
            }
            let part = self.pow_at(l + 1, &images[j], &z[j]);
            acc = self.mul_at(l + 1, &acc, &part);
        }
        acc
    }

    fn build_conjugation_tables(&mut self) -> Result<()> {
        let n = self.n;
        for l in (0..n).rev() {
            if self.abelian[l] {
                continue;
            }
            // φ(g_j) = g_l^{-1} g_j g_l = g_j [g_j, g_l]
            let mut images = vec![vec![BigInt::zero(); n]; n];
            for (j, image) in images.iter_mut().enumerate().skip(l + 1) {
                *image = self.comm[l][j].clone();
                image[j] += 1;
            }
            let points = 2 * (n - l) + 1;
            let mut tables = vec![Vec::new(); n];
            for j in l + 1..n {
                let mut values = Vec::with_capacity(points + 2);
                let mut cur = GroupElement::generator(n, j).0;
                values.push(cur.clone());
                for _ in 0..=points {
                    cur = self.apply_images(l, &images, &cur);
                    values.push(cur.clone());
                }
                let check = values.pop().unwrap();
                let coeffs = forward_differences(values);
                if newton_eval(&coeffs, &BigInt::from(points + 1)) != check {
                    return Err(Error::InvalidArgument(
                        "conjugation action is not polynomial; presentation is inconsistent".into(),
                    ));
                }
                tables[j] = coeffs;
            }
            self.conj[l] = tables;
        }
        Ok(())
    }
}

/// Newton forward differences `Δ^i v_0` of `v_0, ..., v_D`.
fn forward_differences(mut values: Vec<Vector>) -> Vec<Vector> {
    let mut coeffs = Vec::with_capacity(values.len());
    while !values.is_empty() {
        coeffs.push(values[0].clone());
        values = values
            .windows(2)
            .map(|w| w[1].iter().zip(&w[0]).map(|(a, b)| a - b).collect())
            .collect();
    }
    while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.iter().all(Zero::is_zero)) {
        coeffs.pop();
    }
    coeffs
}

/// `Σ_i coeffs[i] · C(e, i)`, exact for every integer `e`.
fn newton_eval(coeffs: &[Vector], e: &BigInt) -> Vector {
    let len = coeffs[0].len();
    let mut out = vec![BigInt::zero(); len];
    let mut binom = BigInt::one();
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            binom = binom * (e - BigInt::from(i - 1)) / BigInt::from(i);
        }
        if binom.is_zero() && !e.is_negative() {
            break;
        }
        for (o, ci) in out.iter_mut().zip(c) {
            if !ci.is_zero() {
                *o += ci * &binom;
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamTuple;

    fn pres211() -> PcPresentation {
        PcPresentation::from_params(&ParamTuple::t211(5, 5, 1)).unwrap()
    }

    fn el(v: &[i64]) -> GroupElement {
        GroupElement::from_i64(v)
    }

    #[test]
    fn multiply_examples() {
        let p = pres211();
        assert_eq!(p.multiply(&el(&[0, 1, 0, 0]), &el(&[1, 0, 0, 0])).unwrap(), el(&[1, 1, 5, 1]));
        let x = el(&[3, -2, 7, 11]);
        assert_eq!(p.multiply(&x, &p.identity()).unwrap(), x);
        assert_eq!(p.multiply(&el(&[1, 1, 0, 0]), &el(&[1, 1, 0, 0])).unwrap(), el(&[2, 2, 5, 1]));
    }

    #[test]
    fn inverse_examples() {
        let p = pres211();
        assert_eq!(p.inverse(&el(&[1, 0, 0, 0])).unwrap(), el(&[-1, 0, 0, 0]));
        assert_eq!(p.inverse(&p.identity()).unwrap(), p.identity());
        let x = el(&[1, 1, 0, 0]);
        let y = p.inverse(&x).unwrap();
        assert!(p.multiply(&y, &x).unwrap().is_identity());
        assert!(p.multiply(&x, &y).unwrap().is_identity());
    }

    #[test]
    fn power_examples() {
        let p = pres211();
        let x = el(&[1, 1, 0, 0]);
        assert!(p.power(&x, &BigInt::zero()).unwrap().is_identity());
        assert_eq!(p.power(&x, &BigInt::one()).unwrap(), x);
        assert_eq!(p.power(&x, &BigInt::from(2)).unwrap(), el(&[2, 2, 5, 1]));
    }

    #[test]
    fn commutator_examples() {
        let p = pres211();
        let g = |i| GroupElement::generator(4, i);
        assert_eq!(p.commutator(&g(2), &g(0)).unwrap(), el(&[0, 0, 0, 5]));
        assert_eq!(p.commutator(&g(1), &g(0)).unwrap(), el(&[0, 0, 5, 1]));
        let x = el(&[2, -3, 1, 4]);
        assert!(p.commutator(&x, &x).unwrap().is_identity());
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let p = pres211();
        assert!(matches!(
            p.multiply(&el(&[1, 0, 0]), &p.identity()),
            Err(Error::DimensionMismatch { expected: 4, actual: 3 })
        ));
    }

    #[test]
    fn large_powers_match_repeated_squaring() {
        let p = PcPresentation::from_params(&ParamTuple::t2111(3, 2, 5, 7, 1, 4, 2)).unwrap();
        let x = el(&[2, -1, 3, 0, 5]);
        let mut sq = x.clone();
        for _ in 0..10 {
            sq = p.multiply(&sq, &sq).unwrap();
        }
        assert_eq!(p.power(&x, &BigInt::from(1024)).unwrap(), sq);
        let inv = p.power(&x, &BigInt::from(-1024)).unwrap();
        assert!(p.multiply(&inv, &sq).unwrap().is_identity());
    }

    #[test]
    fn relations_hold_for_generators() {
        for t in [
            ParamTuple::t211(5, 5, 1),
            ParamTuple::t311(2, 3, 4, 1, 5),
            ParamTuple::t2111(2, 3, 5, 7, 11, 13, 17),
            ParamTuple::t212(6, 2, 4, 1, 3),
        ] {
            let p = PcPresentation::from_params(&t).unwrap();
            let n = p.n();
            for i in 0..n {
                for j in i + 1..n {
                    let c = p
                        .commutator(&GroupElement::generator(n, j), &GroupElement::generator(n, i))
                        .unwrap();
                    assert_eq!(c, p.relation(i, j), "{t}: [g{}, g{}]", j + 1, i + 1);
                }
            }
        }
    }
}
