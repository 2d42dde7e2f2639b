//! Classical curvature, torsion and trihedron.

use serde::Serialize;

use crate::algebra::{det3, PgVector};
use crate::curve::{point_degeneracy, CurveJet, DEFAULT_LIGHTLIKE_TOL};
use crate::error::{Degeneracy, Error, Result};
use crate::numeric::adaptive_simpson;

/// Absolute tolerance of [`equiform_parameter`].
pub const SIGMA_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrenetData {
    pub s: f64,
    pub kappa: f64,
    pub tau: f64,
    /// `+1` for a spacelike principal normal, `−1` for a timelike one.
    pub epsilon: i8,
    pub e1: PgVector,
    pub e2: PgVector,
    pub e3: PgVector,
}

impl FrenetData {
    pub(crate) fn from_jets(s: f64, d1: PgVector, d2: PgVector, d3: PgVector) -> Result<Self> {
        if let Some(reason) = point_degeneracy(&d1, &d2, DEFAULT_LIGHTLIKE_TOL) {
            return Err(Error::Inadmissible { s, reason });
        }
        let q = d2.x2 * d2.x2 - d2.x3 * d2.x3;
        let epsilon: i8 = if q > 0.0 { 1 } else { -1 };
        let eps = f64::from(epsilon);
        let kappa = (eps * q).sqrt();
        let tau = (d2.x2 * d3.x3 - d3.x2 * d2.x3) / (kappa * kappa);
        Ok(FrenetData {
            s,
            kappa,
            tau,
            epsilon,
            e1: PgVector::new(1.0, d1.x2, d1.x3),
            e2: PgVector::new(0.0, d2.x2 / kappa, d2.x3 / kappa),
            e3: PgVector::new(0.0, eps * d2.x3 / kappa, eps * d2.x2 / kappa),
        })
    }

    pub fn det(&self) -> f64 {
        det3(&self.e1, &self.e2, &self.e3)
    }
}

pub fn frenet_data(c: &CurveJet, s: f64) -> Result<FrenetData> {
    let j = c.jets_upto(s, 3)?;
    FrenetData::from_jets(s, j[1], j[2], j[3])
}

/// Derivatives of orders 1..=3 with respect to an arbitrary parameter `t`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamJet {
    pub t: f64,
    pub d1: PgVector,
    pub d2: PgVector,
    pub d3: PgVector,
}

/// Curvature and torsion for a curve in a general parametrization.
///
/// Uses the arc-length quantities rewritten through `y_ss = (ẋÿ − ẍẏ)/ẋ³`,
/// so the result does not depend on the parametrization; when `ẍ = 0` this
/// is `κ = √|ÿ² − z̈²| / ẋ²` and `τ = (ÿ z⃛ − y⃛ z̈) / (ẋ⁵ κ²)`.
/// Only parameters running with the arc length (`ẋ > 0`) are accepted.
pub fn invariants_general(jet: &ParamJet) -> Result<(f64, f64)> {
    let (d1, d2, d3) = (jet.d1, jet.d2, jet.d3);
    let dx = d1.x1;
    if dx == 0.0 {
        return Err(Error::IsotropicTangent { t: jet.t });
    }
    if dx < 0.0 {
        return Err(Error::ReversedParameter { dx });
    }
    let y = dx * d2.x2 - d2.x1 * d1.x2;
    let z = dx * d2.x3 - d2.x1 * d1.x3;
    let q = y * y - z * z;
    if !(q.abs() > DEFAULT_LIGHTLIKE_TOL * (y * y + z * z)) {
        return Err(Error::Inadmissible {
            s: jet.t,
            reason: Degeneracy::LightlikeNormal,
        });
    }
    let kappa = q.abs().sqrt() / dx.powi(3);
    let tau = det3(&d1, &d2, &d3) / (dx.powi(6) * kappa * kappa);
    Ok((kappa, tau))
}

/// Jets of `t ↦ γ(φ(t))` from `phi = [φ, φ′, φ″, φ‴]` at `t`.
pub fn reparametrized_jet(c: &CurveJet, t: f64, phi: [f64; 4]) -> Result<ParamJet> {
    let j = c.jets_upto(phi[0], 3)?;
    let (p1, p2, p3) = (phi[1], phi[2], phi[3]);
    Ok(ParamJet {
        t,
        d1: j[1] * p1,
        d2: j[2] * (p1 * p1) + j[1] * p2,
        d3: j[3] * (p1 * p1 * p1) + j[2] * (3.0 * p1 * p2) + j[1] * p3,
    })
}

/// Scaled sup-norm defect of the Frenet equations
/// `e₁′ = κe₂, e₂′ = τe₃, e₃′ = τe₂` with frame derivatives from central
/// differences of step `h`.
pub fn frenet_residual(c: &CurveJet, s: f64, h: f64) -> Result<f64> {
    let at = frenet_data(c, s)?;
    let lo = frenet_data(c, s - h)?;
    let hi = frenet_data(c, s + h)?;
    let diff = |a: PgVector, b: PgVector| (b - a) * (0.5 / h);
    let r1 = (diff(lo.e1, hi.e1) - at.e2 * at.kappa).sup_norm();
    let r2 = (diff(lo.e2, hi.e2) - at.e3 * at.tau).sup_norm();
    let r3 = (diff(lo.e3, hi.e3) - at.e2 * at.tau).sup_norm();
    Ok(r1.max(r2).max(r3) / 1f64.max(at.kappa).max(at.tau.abs()))
}

/// Equiform parameter `σ = ∫ κ ds` between `s0` and `s1`.
pub fn equiform_parameter(c: &CurveJet, s0: f64, s1: f64) -> Result<f64> {
    if s1 < s0 {
        return equiform_parameter(c, s1, s0).map(|v| -v);
    }
    let mut kappa = |s: f64| frenet_data(c, s).map(|f| f.kappa);
    adaptive_simpson(&mut kappa, s0, s1, SIGMA_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{make_analytic_curve, Domain};

    fn hyperbola(a: f64) -> CurveJet {
        // (s, a cosh s, a sinh s): κ = a, τ = 1
        make_analytic_curve(
            move |s| PgVector::new(s, a * s.cosh(), a * s.sinh()),
            move |s| PgVector::new(1.0, a * s.sinh(), a * s.cosh()),
            move |s| PgVector::new(0.0, a * s.cosh(), a * s.sinh()),
            move |s| PgVector::new(0.0, a * s.sinh(), a * s.cosh()),
            move |s| PgVector::new(0.0, a * s.cosh(), a * s.sinh()),
            Domain::new(-1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn constant_invariants() {
        let f = frenet_data(&hyperbola(2.0), 0.3).unwrap();
        assert!((f.kappa - 2.0).abs() < 1e-12);
        assert!((f.tau - 1.0).abs() < 1e-12);
        assert_eq!(f.epsilon, 1);
        assert!((f.det() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn general_reduces_to_arc_length_form() {
        let c = hyperbola(1.5);
        let j = c.jets_upto(0.2, 3).unwrap();
        let pj = ParamJet {
            t: 0.2,
            d1: j[1],
            d2: j[2],
            d3: j[3],
        };
        let (k, t) = invariants_general(&pj).unwrap();
        let f = frenet_data(&c, 0.2).unwrap();
        assert_eq!(k, f.kappa);
        assert_eq!(t, f.tau);
    }

    #[test]
    fn general_guards() {
        let pj = ParamJet {
            t: 0.0,
            d1: PgVector::new(1.0, 1.0, 1.0),
            d2: PgVector::ZERO,
            d3: PgVector::ZERO,
        };
        assert!(matches!(
            invariants_general(&pj),
            Err(Error::Inadmissible {
                reason: Degeneracy::LightlikeNormal,
                ..
            })
        ));
        let iso = ParamJet {
            d1: PgVector::new(0.0, 1.0, 0.0),
            ..pj
        };
        assert!(matches!(
            invariants_general(&iso),
            Err(Error::IsotropicTangent { .. })
        ));
        let rev = ParamJet {
            d1: PgVector::new(-1.0, 1.0, 0.0),
            d2: PgVector::new(0.0, 1.0, 0.0),
            ..pj
        };
        assert!(matches!(
            invariants_general(&rev),
            Err(Error::ReversedParameter { .. })
        ));
    }

    #[test]
    fn sigma_is_antisymmetric() {
        let c = hyperbola(2.0);
        let f = equiform_parameter(&c, -0.5, 0.5).unwrap();
        let b = equiform_parameter(&c, 0.5, -0.5).unwrap();
        assert!((f - 2.0).abs() < 1e-10);
        assert_eq!(f, -b);
        assert_eq!(equiform_parameter(&c, 0.1, 0.1).unwrap(), 0.0);
    }

    #[test]
    fn inadmissible_point_is_reported() {
        let line = make_analytic_curve(
            |s| PgVector::new(s, 0.0, 0.0),
            |_| PgVector::new(1.0, 0.0, 0.0),
            |_| PgVector::ZERO,
            |_| PgVector::ZERO,
            |_| PgVector::ZERO,
            Domain::new(0.0, 1.0).unwrap(),
        )
        .unwrap();
        assert!(matches!(
            frenet_data(&line, 0.5),
            Err(Error::Inadmissible {
                reason: Degeneracy::Inflection,
                ..
            })
        ));
        assert!(equiform_parameter(&line, 0.0, 1.0).is_err());
    }
}
