use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use super::{GroupElement, PcPresentation};
use crate::params::{int_json, GroupType, Triple};
use crate::{Error, Result};

/// Exponent rows `m_i` of the images `g_i ↦ h^{m_i}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateMatrix {
    entries: Vec<Vec<BigInt>>,
    source: GroupType,
    target: GroupType,
}

impl CandidateMatrix {
    pub fn new(entries: Vec<Vec<BigInt>>, source: GroupType, target: GroupType) -> Result<Self> {
        if source != target {
            return Err(Error::TypeMismatch(source.to_string(), target.to_string()));
        }
        let n = source.hirsch_length();
        if entries.len() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: entries.len() });
        }
        let mask = source.shape_mask();
        for (i, row) in entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch { expected: n, actual: row.len() });
            }
            for (j, v) in row.iter().enumerate() {
                if !mask[i][j] && !v.is_zero() {
                    return Err(Error::InvalidArgument(format!(
                        "entry m{}{} = {v} lies outside the admissible shape for type ({source})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(CandidateMatrix { entries, source, target })
    }

    pub fn from_i64(rows: &[Vec<i64>], group_type: GroupType) -> Result<Self> {
        let entries = rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect();
        Self::new(entries, group_type, group_type)
    }

    pub fn identity(group_type: GroupType) -> Self {
        let n = group_type.hirsch_length();
        let entries = (0..n)
            .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
            .collect();
        CandidateMatrix { entries, source: group_type, target: group_type }
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn group_type(&self) -> GroupType {
        self.source
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i][j]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.entries
    }

    /// The image `h^{m_i}` of `g_i`.
    pub fn row(&self, i: usize) -> GroupElement {
        GroupElement(self.entries[i].clone())
    }

    pub fn determinant(&self) -> BigInt {
        determinant(&self.entries)
    }

    /// Maximal diagonal blocks linked by admissible sub-diagonal entries.
    fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mask = self.source.shape_mask();
        let mut blocks: Vec<std::ops::Range<usize>> = Vec::new();
        for r in 0..self.n() {
            match blocks.last_mut() {
                Some(b) if r > 0 && mask[r][r - 1] => b.end = r + 1,
                _ => blocks.push(r..r + 1),
            }
        }
        blocks
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.entries
                .iter()
                .map(|r| Value::Array(r.iter().map(int_json).collect()))
                .collect(),
        )
    }
}

/// Fraction-free (Bareiss) determinant.
pub(crate) fn determinant(rows: &[Vec<BigInt>]) -> BigInt {
    let n = rows.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Residual of one relation `[g_j, g_i] = g_{j+1}^{t_{i,j,j+1}} ...`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationResidual {
    /// 0-based `i < j`.
    pub i: usize,
    pub j: usize,
    /// `φ([g_j, g_i]) - φ(RHS)`, componentwise on exponent vectors.
    pub residual: Vec<BigInt>,
}

impl RelationResidual {
    pub fn is_zero(&self) -> bool {
        self.residual.iter().all(Zero::is_zero)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MapReport {
    pub is_homomorphism: bool,
    pub residuals: Vec<RelationResidual>,
    pub determinant: BigInt,
    pub is_z_isomorphism_candidate: bool,
}

impl MapReport {
    pub fn residual(&self, i: usize, j: usize) -> Option<&RelationResidual> {
        self.residuals.iter().find(|r| r.i == i && r.j == j)
    }

    /// Whether every residual is divisible by `modulus`.
    pub fn holds_modulo(&self, modulus: &BigInt) -> bool {
        self.residuals
            .iter()
            .all(|r| r.residual.iter().all(|v| (v % modulus).is_zero()))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "is_homomorphism": self.is_homomorphism,
            "determinant": int_json(&self.determinant),
            "is_z_isomorphism_candidate": self.is_z_isomorphism_candidate,
            "residuals": self.residuals.iter().map(|r| json!({
                "relation": format!("[g{}, g{}]", r.j + 1, r.i + 1),
                "residual": Value::Array(r.residual.iter().map(int_json).collect()),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Evaluate the relations of `G(t)` on the candidate images `h^{m_i}` in
/// `G(s)`.
pub fn check_candidate_map(
    pres_t: &PcPresentation,
    pres_s: &PcPresentation,
    m: &CandidateMatrix,
) -> Result<MapReport> {
    let n = m.n();
    for p in [pres_t, pres_s] {
        if p.n() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: p.n() });
        }
    }
    let images: Vec<GroupElement> = (0..n).map(|i| m.row(i)).collect();
    let mut residuals = Vec::with_capacity(n * (n - 1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let lhs = pres_s.commutator(&images[j], &images[i])?;
            let mut rhs = pres_s.identity();
            for k in j + 1..n {
                let e = pres_t.constant(Triple(i as u8 + 1, j as u8 + 1, k as u8 + 1));
                if e.is_zero() {
                    continue;
                }
                let part = pres_s.power(&images[k], &e)?;
                rhs = pres_s.multiply(&rhs, &part)?;
            }
            let residual = lhs.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect();
            residuals.push(RelationResidual { i, j, residual });
        }
    }
    let is_homomorphism = residuals.iter().all(RelationResidual::is_zero);
    let determinant = m.determinant();
    let is_z_isomorphism_candidate = is_homomorphism && determinant.abs().is_one();
    Ok(MapReport { is_homomorphism, residuals, determinant, is_z_isomorphism_candidate })
}

impl PcPresentation {
    /// Structure constants of `G(s)` with respect to the basis
    /// `b_i = h^{m_i}`, when `M` is invertible over the integers.
    ///
    /// By construction `M` is then a homomorphism (indeed an isomorphism)
    /// from the returned presentation onto `self`.
    pub fn induced_structure_constants(
        &self,
        m: &CandidateMatrix,
    ) -> Result<std::collections::BTreeMap<Triple, BigInt>> {
        let n = self.n();
        if m.n() != n {
            return Err(Error::DimensionMismatch { expected: n, actual: m.n() });
        }
        let blocks = m.blocks();
        let inverses = blocks
            .iter()
            .map(|b| block_inverse(m, b.clone()))
            .collect::<Result<Vec<_>>>()?;
        let basis: Vec<GroupElement> = (0..n).map(|i| m.row(i)).collect();
        let mut out = std::collections::BTreeMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut c = self.commutator(&basis[j], &basis[i])?;
                let mut coords = vec![BigInt::zero(); n];
                for (b, inv) in blocks.iter().zip(&inverses) {
                    let size = b.len();
                    let e: Vec<BigInt> = (0..size)
                        .map(|col| (0..size).map(|r| &c.0[b.start + r] * &inv[r][col]).sum())
                        .collect();
                    let mut word = self.identity();
                    for (offset, ek) in e.iter().enumerate() {
                        if ek.is_zero() {
                            continue;
                        }
                        let k = b.start + offset;
                        if k <= j {
                            return Err(Error::InvalidArgument(format!(
                                "[b{}, b{}] has a component on b{}; basis does not refine the series",
                                j + 1,
                                i + 1,
                                k + 1
                            )));
                        }
                        coords[k] = ek.clone();
                        word = self.multiply(&word, &self.power(&basis[k], ek)?)?;
                    }
                    c = self.multiply(&self.inverse(&word)?, &c)?;
                }
                if !c.is_identity() {
                    return Err(Error::InvalidArgument("commutator not expressible in the new basis".into()));
                }
                for (k, v) in coords.into_iter().enumerate() {
                    if !v.is_zero() {
                        out.insert(Triple(i as u8 + 1, j as u8 + 1, k as u8 + 1), v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Integer inverse of a diagonal block of size one or two.
fn block_inverse(m: &CandidateMatrix, b: std::ops::Range<usize>) -> Result<Vec<Vec<BigInt>>> {
    let sub: Vec<Vec<BigInt>> = b.clone().map(|r| m.rows()[r][b.clone()].to_vec()).collect();
    let det = determinant(&sub);
    if !det.abs().is_one() {
        return Err(Error::InvalidArgument(format!(
            "diagonal block at rows {}..{} has determinant {det}, not a unit",
            b.start + 1,
            b.end
        )));
    }
    match sub.len() {
        1 => Ok(vec![vec![det]]),
        2 => Ok(vec![
            vec![&sub[1][1] * &det, -&sub[0][1] * &det],
            vec![-&sub[1][0] * &det, &sub[0][0] * &det],
        ]),
        k => Err(Error::InvalidArgument(format!("blocks of size {k} are not supported"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::ParamTuple;

    fn pres(t: &ParamTuple) -> PcPresentation {
        PcPresentation::from_params(t).unwrap()
    }

    fn diag(d: &[i64]) -> Vec<Vec<i64>> {
        (0..d.len())
            .map(|i| (0..d.len()).map(|j| if i == j { d[i] } else { 0 }).collect())
            .collect()
    }

    #[test]
    fn identity_map_is_an_isomorphism_candidate() {
        let p = pres(&ParamTuple::t211(5, 5, 1));
        let r = check_candidate_map(&p, &p, &CandidateMatrix::identity(GroupType::T211)).unwrap();
        assert!(r.is_homomorphism);
        assert_eq!(r.determinant, BigInt::one());
        assert!(r.is_z_isomorphism_candidate);
    }

    #[test]
    fn scaling_map_is_a_homomorphism_of_determinant_eight() {
        let p = pres(&ParamTuple::t211(5, 5, 1));
        let m = CandidateMatrix::from_i64(&diag(&[1, 2, 2, 2]), GroupType::T211).unwrap();
        let r = check_candidate_map(&p, &p, &m).unwrap();
        assert!(r.is_homomorphism);
        assert_eq!(r.determinant, BigInt::from(8));
        assert!(!r.is_z_isomorphism_candidate);
    }

    #[test]
    fn broken_map_reports_the_failing_relation() {
        let p = pres(&ParamTuple::t211(5, 5, 1));
        let m = CandidateMatrix::from_i64(&diag(&[1, 1, 1, 2]), GroupType::T211).unwrap();
        let r = check_candidate_map(&p, &p, &m).unwrap();
        assert!(!r.is_homomorphism);
        let bad = r.residual(0, 2).unwrap();
        assert_eq!(bad.residual, vec![0, 0, 0, -5].into_iter().map(BigInt::from).collect::<Vec<_>>());
        // [g2, g1] = g3^5 g4 is also violated on the g4 component
        assert!(!r.residual(0, 1).unwrap().is_zero());
    }

    #[test]
    fn shape_violations_are_rejected() {
        let mut rows = diag(&[1, 1, 1, 1]);
        rows[1][0] = 1;
        assert!(matches!(
            CandidateMatrix::from_i64(&rows, GroupType::T211),
            Err(Error::InvalidArgument(_))
        ));
        let mut rows = diag(&[1, 1, 1, 1, 1]);
        rows[1][0] = 3;
        rows[4][3] = 2;
        assert!(CandidateMatrix::from_i64(&rows, GroupType::T212).is_ok());
    }

    #[test]
    fn bareiss_determinant() {
        let m = |rows: &[&[i64]]| -> Vec<Vec<BigInt>> {
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect()
        };
        assert_eq!(determinant(&m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[&[2, 3, 1], &[4, 1, -2], &[0, 5, 7]])), BigInt::from(-30));
        assert_eq!(determinant(&m(&[&[1, 2], &[2, 4]])), BigInt::zero());
    }

    #[test]
    fn induced_constants_make_the_map_a_homomorphism() {
        let s = ParamTuple::t212(6, 2, 4, 1, 3);
        let p = pres(&s);
        let rows = vec![
            vec![1, 2, 0, 1, -1],
            vec![1, 3, 5, 0, 2],
            vec![0, 0, 1, 4, 4],
            vec![0, 0, 0, 2, 1],
            vec![0, 0, 0, 1, 1],
        ];
        let m = CandidateMatrix::from_i64(&rows, GroupType::T212).unwrap();
        let t = p.induced_structure_constants(&m).unwrap();
        let pt = PcPresentation::from_structure_constants(5, t.iter().map(|(k, v)| (*k, v))).unwrap();
        let r = check_candidate_map(&pt, &p, &m).unwrap();
        assert!(r.is_homomorphism, "{:?}", r.residuals);
        assert!(r.is_z_isomorphism_candidate);
    }
}
