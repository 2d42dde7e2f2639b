//! Equiform invariants: radius of curvature `ρ`, equiform curvature
//! `𝒦 = dρ/ds`, equiform torsion `𝒯 = ρτ` and the frame `T, N, B`.
//!
//! Scalar derivatives stored on [`EquiformData`] are taken with respect to
//! the arc length `s`. The frame equations are written in the equiform
//! parameter `σ`, where `d/dσ = ρ·d/ds`.

use serde::Serialize;

use crate::algebra::PgVector;
use crate::curve::{CurveJet, JetKind};
use crate::error::{Degeneracy, Error, Result};
use crate::frenet::FrenetData;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EquiformData {
    pub s: f64,
    pub rho: f64,
    /// Equiform curvature `𝒦`.
    pub curvature: f64,
    /// Equiform torsion `𝒯`.
    pub torsion: f64,
    /// `d𝒦/ds`.
    pub curvature_ds: f64,
    /// `d𝒯/ds`.
    pub torsion_ds: f64,
    pub tangent: PgVector,
    pub normal: PgVector,
    pub binormal: PgVector,
    pub frenet: FrenetData,
}

impl EquiformData {
    /// `d𝒦/dσ`, dimensionless.
    pub fn curvature_dsigma(&self) -> f64 {
        self.rho * self.curvature_ds
    }

    /// `d𝒯/dσ`, dimensionless.
    pub fn torsion_dsigma(&self) -> f64 {
        self.rho * self.torsion_ds
    }

    pub fn epsilon(&self) -> i8 {
        self.frenet.epsilon
    }

    pub(crate) fn from_jets(s: f64, d: &[PgVector; 5]) -> Result<Self> {
        let frenet = FrenetData::from_jets(s, d[1], d[2], d[3])?;
        let eps = f64::from(frenet.epsilon);
        let (y2, y3, y4) = (d[2].x2, d[3].x2, d[4].x2);
        let (z2, z3, z4) = (d[2].x3, d[3].x3, d[4].x3);
        let k = frenet.kappa;

        let k1 = eps * (y2 * y3 - z2 * z3) / k;
        let k2 = (eps * (y3 * y3 + y2 * y4 - z3 * z3 - z2 * z4) - k1 * k1) / k;
        let w = y2 * z3 - y3 * z2;
        let w1 = y2 * z4 - y4 * z2;
        let tau = frenet.tau;
        let tau1 = w1 / (k * k) - 2.0 * w * k1 / (k * k * k);

        let rho = 1.0 / k;
        Ok(EquiformData {
            s,
            rho,
            curvature: -k1 / (k * k),
            torsion: tau / k,
            curvature_ds: -k2 / (k * k) + 2.0 * k1 * k1 / (k * k * k),
            torsion_ds: tau1 / k - tau * k1 / (k * k),
            tangent: frenet.e1 * rho,
            normal: frenet.e2 * rho,
            binormal: frenet.e3 * rho,
            frenet,
        })
    }
}

pub fn equiform_data(c: &CurveJet, s: f64) -> Result<EquiformData> {
    let d = c.jets_upto(s, 4)?;
    EquiformData::from_jets(s, &d)
}

/// Equiform data over a grid, rejecting grids outside the domain and curves
/// whose normal changes causal character between grid points.
pub fn equiform_sweep(c: &CurveJet, grid: &[f64]) -> Result<Vec<EquiformData>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let domain = c.domain();
    let mut out: Vec<EquiformData> = Vec::with_capacity(grid.len());
    for &s in grid {
        if !domain.contains(s) {
            return Err(Error::OutsideDomain {
                s,
                lo: domain.lo,
                hi: domain.hi,
            });
        }
        let e = equiform_data(c, s)?;
        if let Some(first) = out.first() {
            if first.epsilon() != e.epsilon() {
                return Err(Error::Inadmissible {
                    s,
                    reason: Degeneracy::SignatureChange,
                });
            }
        }
        out.push(e);
    }
    Ok(out)
}

/// Scaled sup-norm defect of
/// `T′ = 𝒦T + N, N′ = 𝒦N + 𝒯B, B′ = 𝒯N + 𝒦B` (primes in `σ`), with frame
/// derivatives from central differences of step `h` in `s`.
pub fn equiform_residual(c: &CurveJet, s: f64, h: f64) -> Result<f64> {
    let at = equiform_data(c, s)?;
    let lo = equiform_data(c, s - h)?;
    let hi = equiform_data(c, s + h)?;
    let dsigma = |a: PgVector, b: PgVector| (b - a) * (0.5 * at.rho / h);
    let (k, t) = (at.curvature, at.torsion);
    let r1 = (dsigma(lo.tangent, hi.tangent) - (at.tangent * k + at.normal)).sup_norm();
    let r2 = (dsigma(lo.normal, hi.normal) - (at.normal * k + at.binormal * t)).sup_norm();
    let r3 = (dsigma(lo.binormal, hi.binormal) - (at.normal * t + at.binormal * k)).sup_norm();
    Ok(r1.max(r2).max(r3) / (1f64.max(k.abs()).max(t.abs()) * at.rho))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum NaturalTag {
    IsotropicLogSpiral,
    CircularHelix,
    IsotropicCircle,
    Other,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NaturalClass {
    pub tag: NaturalTag,
    pub curvature_mean: f64,
    pub torsion_mean: f64,
    /// `max − min` of `𝒦` over the grid.
    pub curvature_variation: f64,
    /// `max − min` of `𝒯` over the grid.
    pub torsion_variation: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NaturalTolerances {
    pub tol_const: f64,
    pub tol_zero: f64,
}

impl NaturalTolerances {
    pub fn for_kind(kind: JetKind) -> Self {
        match kind {
            JetKind::AnalyticJets => NaturalTolerances {
                tol_const: 1e-8,
                tol_zero: 1e-8,
            },
            JetKind::FiniteDifference => NaturalTolerances {
                tol_const: 1e-5,
                tol_zero: 1e-5,
            },
        }
    }
}

pub(crate) struct Profile {
    pub mean: f64,
    pub mean_abs: f64,
    pub max_abs: f64,
    pub variation: f64,
}

impl Profile {
    pub fn of(values: impl Iterator<Item = f64> + Clone) -> Self {
        let n = values.clone().count().max(1) as f64;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut sum, mut sum_abs, mut max_abs) = (0.0, 0.0, 0.0_f64);
        for v in values {
            lo = lo.min(v);
            hi = hi.max(v);
            sum += v;
            sum_abs += v.abs();
            max_abs = max_abs.max(v.abs());
        }
        Profile {
            mean: sum / n,
            mean_abs: sum_abs / n,
            max_abs,
            variation: hi - lo,
        }
    }

    pub fn is_zero(&self, tol_zero: f64) -> bool {
        self.max_abs < tol_zero
    }

    pub fn is_nonzero_constant(&self, tol: &NaturalTolerances) -> bool {
        self.variation < tol.tol_const * self.mean_abs.max(1.0) && self.mean_abs >= tol.tol_zero
    }
}

pub fn natural_class(c: &CurveJet, grid: &[f64], tol: NaturalTolerances) -> Result<NaturalClass> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if grid.len() < 5 {
        return Err(Error::GridTooSmall {
            needed: 5,
            got: grid.len(),
        });
    }
    let data = equiform_sweep(c, grid)?;
    let k = Profile::of(data.iter().map(|e| e.curvature));
    let t = Profile::of(data.iter().map(|e| e.torsion));
    let tag = if k.is_zero(tol.tol_zero) && t.is_zero(tol.tol_zero) {
        NaturalTag::IsotropicCircle
    } else if k.is_zero(tol.tol_zero) && t.is_nonzero_constant(&tol) {
        NaturalTag::CircularHelix
    } else if t.is_zero(tol.tol_zero) && k.is_nonzero_constant(&tol) {
        NaturalTag::IsotropicLogSpiral
    } else {
        NaturalTag::Other
    };
    Ok(NaturalClass {
        tag,
        curvature_mean: k.mean,
        torsion_mean: t.mean,
        curvature_variation: k.variation,
        torsion_variation: t.variation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{linspace, make_analytic_curve, Domain};

    // (s, ln-spiral) with a = b = 1: y = (s+1)(ln(s+1) − 1)
    fn spiral() -> CurveJet {
        make_analytic_curve(
            |s| PgVector::new(s, (s + 1.0) * ((s + 1.0).ln() - 1.0), 0.0),
            |s| PgVector::new(1.0, (s + 1.0).ln(), 0.0),
            |s| PgVector::new(0.0, 1.0 / (s + 1.0), 0.0),
            |s| PgVector::new(0.0, -1.0 / (s + 1.0).powi(2), 0.0),
            |s| PgVector::new(0.0, 2.0 / (s + 1.0).powi(3), 0.0),
            Domain::new(0.0, 4.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn spiral_values() {
        let e = equiform_data(&spiral(), 1.0).unwrap();
        assert!((e.rho - 2.0).abs() < 1e-14);
        assert!((e.curvature - 1.0).abs() < 1e-14);
        assert_eq!(e.torsion, 0.0);
        assert!(e.curvature_ds.abs() < 1e-14);
        assert_eq!(e.normal, PgVector::new(0.0, 2.0, 0.0));
        assert_eq!(e.binormal, PgVector::new(0.0, 0.0, 2.0));
    }

    #[test]
    fn spiral_is_log_spiral() {
        let nc = natural_class(
            &spiral(),
            &linspace(0.0, 4.0, 41),
            NaturalTolerances::for_kind(JetKind::AnalyticJets),
        )
        .unwrap();
        assert_eq!(nc.tag, NaturalTag::IsotropicLogSpiral);
        assert!((nc.curvature_mean - 1.0).abs() < 1e-12);
    }

    #[test]
    fn natural_class_grid_errors() {
        let t = NaturalTolerances::for_kind(JetKind::AnalyticJets);
        assert_eq!(natural_class(&spiral(), &[], t), Err(Error::EmptyGrid));
        assert!(matches!(
            natural_class(&spiral(), &[0.0, 1.0], t),
            Err(Error::GridTooSmall { .. })
        ));
        assert!(matches!(
            natural_class(&spiral(), &linspace(3.0, 5.0, 5), t),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn order_three_curves_cannot_supply_equiform_data() {
        let c = spiral().with_max_order(3);
        assert!(matches!(
            equiform_data(&c, 1.0),
            Err(Error::JetOrderTooLow { .. })
        ));
    }
}
