//! Closed-form relation equations for generator-image matrices.
//!
//! For a matrix `M` whose diagonal entries are `±1` (so that `m_ii⁻¹ = m_ii`)
//! the images `h^{m_i}` satisfy the relations of `G(t)` inside `G(s)` exactly
//! when every defect returned here vanishes. Divisions by 2 and 6 are cleared
//! by scaling, which keeps everything in integer arithmetic.

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::CandidateMatrix;
use crate::params::{GroupType, ParamTuple, T123, T124, T125, T134, T135, T145, T235};
use crate::{Error, Result};

/// Defects of the type's equation system for `M: G(t) → G(s)`.
pub fn equation_defects(t: &ParamTuple, s: &ParamTuple, m: &CandidateMatrix) -> Result<Vec<BigInt>> {
    let gt = t.group_type();
    if s.group_type() != gt || m.group_type() != gt {
        return Err(Error::TypeMismatch(gt.to_string(), s.group_type().to_string()));
    }
    for x in [t, s] {
        if let Some((tr, _)) = x.entries().find(|(tr, _)| !gt.supported_triples().contains(tr)) {
            return Err(Error::InvalidArgument(format!("t{tr} is not a parameter of type ({gt})")));
        }
    }
    let units: &[usize] = match gt {
        GroupType::T212 => &[3],
        _ => &[1, 2, 3, 4, 5][..gt.hirsch_length()],
    };
    for &i in units {
        if !m.entry(i - 1, i - 1).abs().is_one() {
            return Err(Error::InvalidArgument(format!("m{i}{i} must be 1 or -1")));
        }
    }
    let e = |i: usize, j: usize| m.entry(i - 1, j - 1).clone();
    let sv = |tr| s.get(tr);
    let tv = |tr| t.get(tr);
    let one = BigInt::one();
    let two = BigInt::from(2);
    let three = BigInt::from(3);
    let six = BigInt::from(6);
    Ok(match gt {
        GroupType::T211 => {
            let (m11, m22, m33, m44) = (e(1, 1), e(2, 2), e(3, 3), e(4, 4));
            vec![
                tv(T123) * &m11 * &m22 * &m33 - sv(T123),
                tv(T134) * &m11 * &m33 * &m44 - sv(T134),
                &two * (tv(T124) * &m11 * &m22 * &m44 - sv(T124))
                    - (sv(T123) * (sv(T134) * (&m11 - &one) - &two * &m33 * e(3, 4))
                        + &two * sv(T134) * &m22 * e(2, 3)),
            ]
        }
        GroupType::T311 => {
            let (m11, m22, m33, m44, m55) = (e(1, 1), e(2, 2), e(3, 3), e(4, 4), e(5, 5));
            vec![
                tv(T124) * &m11 * &m22 * &m44 - sv(T124),
                tv(T145) * &m11 * &m44 * &m55 - sv(T145),
                tv(T235) * &m22 * &m33 * &m55 - sv(T235),
                tv(T135) * &m11 * &m33 * &m55 - sv(T135) - (sv(T145) * &m33 * e(3, 4) + sv(T235) * &m11 * e(1, 2)),
                &two * (tv(T125) * &m11 * &m22 * &m55 - sv(T125))
                    - (sv(T124) * (sv(T145) * (&m11 - &one) - &two * &m44 * e(4, 5))
                        + &two * sv(T135) * &m22 * e(2, 3)
                        + &two * sv(T145) * &m22 * e(2, 4)
                        + &two * sv(T235) * (&m11 * &m22 * e(1, 2) * e(2, 3) - &m11 * e(1, 3))),
            ]
        }
        GroupType::T2111 => {
            let (m11, m22, m33, m44, m55) = (e(1, 1), e(2, 2), e(3, 3), e(4, 4), e(5, 5));
            let v = sv(T123) * (&m11 - &one) + &m22 * e(2, 3);
            let w2 = sv(T134) * (&m11 - &one) + &two * &m33 * e(3, 4);
            let x = -(&m44 * e(4, 5));
            let y = &m11 * e(1, 2);
            let z1_6 = sv(T134) * sv(T145) * (&m11 - &one) * (&m11 - &two)
                + &three * sv(T134) * &m44 * e(4, 5) * (&m11 - &one)
                - &three * sv(T135) * (&m11 - &one)
                + &six * sv(T235) * e(1, 2)
                + &three * sv(T235) * (&m22 - &one)
                + &six * &m33 * (&m44 * e(3, 4) * e(4, 5) - e(3, 5));
            let z2_2 =
                sv(T124) * (&m11 - &one) + sv(T134) * &m22 * e(2, 3) * (&m11 - &one) + &two * &m22 * e(2, 4);
            let z3 = &m11 * (&m22 * e(1, 2) * e(2, 3) - e(1, 3));
            vec![
                tv(T123) * &m11 * &m22 * &m33 - sv(T123),
                tv(T134) * &m11 * &m33 * &m44 - sv(T134),
                tv(T145) * &m11 * &m44 * &m55 - sv(T145),
                tv(T235) * &m22 * &m33 * &m55 - sv(T235),
                &two * (tv(T124) * &m11 * &m22 * &m44 - sv(T124)) - (&two * sv(T134) * &v - sv(T123) * &w2),
                &two * (tv(T135) * &m11 * &m33 * &m55 - sv(T135))
                    - (&two * sv(T134) * &x + sv(T145) * &w2 + &two * sv(T235) * &y),
                &six * (tv(T125) * &m11 * &m22 * &m55 - sv(T125))
                    - (&six * sv(T124) * &x
                        + &six * sv(T134) * &v * &x
                        + &six * sv(T135) * &v
                        + sv(T123) * &z1_6
                        + &three * sv(T145) * &z2_2
                        + &six * sv(T235) * &z3),
            ]
        }
        GroupType::T212 => {
            let (m11, m12, m21, m22) = (e(1, 1), e(1, 2), e(2, 1), e(2, 2));
            let (m33, m44, m45, m54, m55) = (e(3, 3), e(4, 4), e(4, 5), e(5, 4), e(5, 5));
            let det = &m11 * &m22 - &m12 * &m21;
            let (s134, s235) = (sv(T134), sv(T235));
            let x2 = &s134 * (&m11 * &m11 * &m22 - &m12 * &m21 * &m21 - &det) - &two * &det * &m33 * e(3, 4);
            let y2 = &s235 * (&m11 * &m22 * &m22 - &m12 * &m12 * &m21 - &det + &two * &m12 * &m22 * (&m11 - &m21))
                - &two * &det * &m33 * e(3, 5);
            let r0 = &e(2, 3) * &m11 - &e(1, 3) * &m21;
            let r1 = &e(2, 3) * &m12 - &e(1, 3) * &m22;
            vec![
                tv(T123) * &m33 - sv(T123) * &det,
                tv(T134) * &m44 - &m33 * &m11 * &s134,
                tv(T134) * &m45 - &m33 * &m12 * &s235,
                tv(T235) * &m54 - &m33 * &m21 * &s134,
                tv(T235) * &m55 - &m33 * &m22 * &s235,
                &two * (tv(T124) * &m44 + tv(T125) * &m54 - sv(T124) * &det)
                    - &two * &r0 * &s134
                    - sv(T123) * &x2,
                &two * (tv(T124) * &m45 + tv(T125) * &m55 - sv(T125) * &det)
                    - &two * &r1 * &s235
                    - sv(T123) * &y2,
            ]
        }
    })
}

/// Whether every defect of [`equation_defects`] vanishes.
pub fn equations_hold(t: &ParamTuple, s: &ParamTuple, m: &CandidateMatrix) -> Result<bool> {
    Ok(equation_defects(t, s, m)?.iter().all(|d| d.sign() == num_bigint::Sign::NoSign))
}
