//! Moment maps onto the simplex and the cube, evaluated exactly.
//!
//! * `cpn`: `[z_0 : ... : z_n] -> (|z_i|^2 / sum_j |z_j|^2)_i`, a point of the simplex
//!   in barycentric coordinates.
//! * `product_cp1`: one homogeneous pair `[w_0 : w_1]` per factor, mapped to
//!   `|w_1|^2 / (|w_0|^2 + |w_1|^2)`; in the chart `w_0 = 1` this is `|z|^2 / (1 + |z|^2)`.
//! * `real_sphere`: `x -> (x_i^2)_i` on the unit sphere. Inputs are arbitrary nonzero
//!   rational vectors, normalized symbolically, so the image is `x_i^2 / |x|^2`.

use num::complex::Complex;
use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rational::{serde_qvec, Q};

pub type Cq = Complex<Q>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentKind {
    Cpn,
    ProductCp1,
    RealSphere,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MomentError {
    #[error("input vector is zero")]
    ZeroVector,
    #[error("factor {0} of the product is the zero pair")]
    ZeroFactor(usize),
    #[error("input is empty")]
    EmptyInput,
    #[error("{kind:?} expects {expected} input, got {got}")]
    WrongInput { kind: MomentKind, expected: &'static str, got: &'static str },
}

/// Exact input for a moment map.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentInput {
    /// Complex coordinates as `[re, im]` pairs.
    Complex(Vec<ComplexJson>),
    Real(#[serde(with = "serde_qvec")] Vec<Q>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexJson(#[serde(with = "serde_qvec")] pub Vec<Q>);

impl ComplexJson {
    fn to_complex(&self) -> Option<Cq> {
        match self.0.as_slice() {
            [re] => Some(Cq::new(re.clone(), Q::zero())),
            [re, im] => Some(Cq::new(re.clone(), im.clone())),
            _ => None,
        }
    }
}

fn norm_sqr(z: &Cq) -> Q {
    &z.re * &z.re + &z.im * &z.im
}

pub fn moment_cpn(z: &[Cq]) -> Result<Vec<Q>, MomentError> {
    if z.is_empty() {
        return Err(MomentError::EmptyInput);
    }
    let weights: Vec<Q> = z.iter().map(norm_sqr).collect();
    let total: Q = weights.iter().sum();
    if total.is_zero() {
        return Err(MomentError::ZeroVector);
    }
    Ok(weights.into_iter().map(|w| w / &total).collect())
}

/// `factors[j] = [w_0, w_1]`; returns a point of `[0, 1]^n`.
pub fn moment_product_cp1(factors: &[[Cq; 2]]) -> Result<Vec<Q>, MomentError> {
    if factors.is_empty() {
        return Err(MomentError::EmptyInput);
    }
    factors
        .iter()
        .enumerate()
        .map(|(j, [w0, w1])| {
            let a = norm_sqr(w0);
            let b = norm_sqr(w1);
            let total = &a + &b;
            if total.is_zero() {
                Err(MomentError::ZeroFactor(j))
            } else {
                Ok(b / total)
            }
        })
        .collect()
}

pub fn moment_real_sphere(x: &[Q]) -> Result<Vec<Q>, MomentError> {
    if x.is_empty() {
        return Err(MomentError::EmptyInput);
    }
    let squares: Vec<Q> = x.iter().map(|v| v * v).collect();
    let total: Q = squares.iter().sum();
    if total.is_zero() {
        return Err(MomentError::ZeroVector);
    }
    Ok(squares.into_iter().map(|s| s / &total).collect())
}

/// Dispatches on `kind`. For `product_cp1` the complex entries are read two per
/// factor, so the input has even length.
pub fn moment_map_eval(kind: MomentKind, input: &MomentInput) -> Result<Vec<Q>, MomentError> {
    let wrong = |expected, got| MomentError::WrongInput { kind, expected, got };
    match (kind, input) {
        (MomentKind::RealSphere, MomentInput::Real(x)) => moment_real_sphere(x),
        (MomentKind::RealSphere, MomentInput::Complex(_)) => Err(wrong("real", "complex")),
        (_, MomentInput::Real(_)) => Err(wrong("complex", "real")),
        (MomentKind::Cpn, MomentInput::Complex(zs)) => {
            let z: Option<Vec<Cq>> = zs.iter().map(ComplexJson::to_complex).collect();
            moment_cpn(&z.ok_or_else(|| wrong("[re, im] pairs", "malformed entry"))?)
        }
        (MomentKind::ProductCp1, MomentInput::Complex(zs)) => {
            let z: Option<Vec<Cq>> = zs.iter().map(ComplexJson::to_complex).collect();
            let z = z.ok_or_else(|| wrong("[re, im] pairs", "malformed entry"))?;
            if z.len() % 2 != 0 {
                return Err(wrong("an even number of entries", "an odd number"));
            }
            let factors: Vec<[Cq; 2]> = z
                .chunks_exact(2)
                .map(|c| [c[0].clone(), c[1].clone()])
                .collect();
            moment_product_cp1(&factors)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, q};

    fn re(x: i64) -> Cq {
        Cq::new(q(x), q(0))
    }

    #[test]
    fn coordinate_point_maps_to_vertex() {
        let y = moment_cpn(&[re(1), re(0), re(0)]).unwrap();
        assert_eq!(y, vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn all_ones_maps_to_barycenter() {
        let y = moment_cpn(&vec![re(1); 4]).unwrap();
        assert!(y.iter().all(|v| *v == frac(1, 4)));
    }

    #[test]
    fn sphere_squares_coordinates() {
        // (1, 1, 0) normalizes to (1/sqrt 2, 1/sqrt 2, 0).
        let y = moment_real_sphere(&[q(1), q(1), q(0)]).unwrap();
        assert_eq!(y, vec![frac(1, 2), frac(1, 2), q(0)]);
    }

    #[test]
    fn product_chart() {
        // z = 1 + i in the chart w_0 = 1: |z|^2 = 2, image 2/3.
        let y = moment_product_cp1(&[[re(1), Cq::new(q(1), q(1))]]).unwrap();
        assert_eq!(y, vec![frac(2, 3)]);
        assert_eq!(moment_product_cp1(&[[re(0), re(0)]]), Err(MomentError::ZeroFactor(0)));
    }

    #[test]
    fn zero_vector_rejected() {
        assert_eq!(moment_cpn(&[re(0), re(0)]), Err(MomentError::ZeroVector));
        assert_eq!(moment_real_sphere(&[q(0)]), Err(MomentError::ZeroVector));
    }

    #[test]
    fn dispatch_checks_input_kind() {
        let input = MomentInput::Real(vec![q(1)]);
        assert!(matches!(
            moment_map_eval(MomentKind::Cpn, &input),
            Err(MomentError::WrongInput { .. })
        ));
    }
}
