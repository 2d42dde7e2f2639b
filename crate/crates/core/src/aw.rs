//! AW(k)-type classification.
//!
//! The derivative hierarchy `Q₁ = γ″, Q₂ = γ‴, Q₃ = γ⁗` is expressed in the
//! equiform frame:
//!
//! ```text
//! Q₁ = N/ρ²
//! Q₂ = (−𝒦N + 𝒯B)/ρ³
//! Q₃ = ((2𝒦² + 𝒯² − 𝒦̇)N + (𝒯̇ − 3𝒦𝒯)B)/ρ⁴
//! ```
//!
//! where the dots are derivatives in the equiform parameter `σ`. With these
//! derivatives `Q₃` is exactly `γ⁗`, and every residual below is invariant
//! under homotheties.
//!
//! Norms and projections in the vector identities use the signed scalar
//! product: `proj_u v = ⟨v,u⟩/⟨u,u⟩·u` and `‖u‖² = ⟨u,u⟩`. With
//! `⟨N,N⟩ = ερ²`, `⟨B,B⟩ = −ερ²` the sign `ε` cancels and the identities
//! reduce to the scalar conditions for both causal characters of the normal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::PgVector;
use crate::curve::{CurveJet, JetKind};
use crate::diagnostics::Diagnostic;
use crate::equiform::{equiform_data, equiform_sweep, EquiformData};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum AwType {
    AW1,
    AW2,
    AW3,
    WeakAW2,
    WeakAW3,
}

impl AwType {
    pub const ALL: [AwType; 5] = [
        AwType::AW1,
        AwType::AW2,
        AwType::AW3,
        AwType::WeakAW2,
        AwType::WeakAW3,
    ];
}

impl fmt::Display for AwType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn default_tolerance(kind: JetKind) -> f64 {
    match kind {
        JetKind::AnalyticJets => 1e-8,
        JetKind::FiniteDifference => 1e-5,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QVectors {
    pub s: f64,
    pub q1: PgVector,
    pub q2: PgVector,
    pub q3: PgVector,
    pub a11: f64,
    pub a12: f64,
    pub a21: f64,
    pub a22: f64,
    pub rho: f64,
    pub curvature: f64,
    pub torsion: f64,
    /// `d𝒦/dσ`.
    pub curvature_dsigma: f64,
    /// `d𝒯/dσ`.
    pub torsion_dsigma: f64,
    pub epsilon: i8,
    pub normal: PgVector,
    pub binormal: PgVector,
}

impl QVectors {
    #[allow(clippy::too_many_arguments)]
    pub fn from_invariants(
        s: f64,
        rho: f64,
        curvature: f64,
        torsion: f64,
        curvature_dsigma: f64,
        torsion_dsigma: f64,
        epsilon: i8,
        normal: PgVector,
        binormal: PgVector,
    ) -> Self {
        let (k, t) = (curvature, torsion);
        let r3 = rho.powi(3);
        let r4 = rho.powi(4);
        let a11 = -k / r3;
        let a12 = t / r3;
        let a21 = (2.0 * k * k + t * t - curvature_dsigma) / r4;
        let a22 = (torsion_dsigma - 3.0 * k * t) / r4;
        QVectors {
            s,
            q1: normal * (1.0 / (rho * rho)),
            q2: normal * a11 + binormal * a12,
            q3: normal * a21 + binormal * a22,
            a11,
            a12,
            a21,
            a22,
            rho,
            curvature,
            torsion,
            curvature_dsigma,
            torsion_dsigma,
            epsilon,
            normal,
            binormal,
        }
    }

    pub fn from_equiform(e: &EquiformData) -> Self {
        QVectors::from_invariants(
            e.s,
            e.rho,
            e.curvature,
            e.torsion,
            e.curvature_dsigma(),
            e.torsion_dsigma(),
            e.epsilon(),
            e.normal,
            e.binormal,
        )
    }

    /// `N`-coefficient of `Q₃`.
    pub fn alpha(&self) -> f64 {
        self.a21
    }

    /// `B`-coefficient of `Q₃`.
    pub fn beta(&self) -> f64 {
        self.a22
    }

    /// `(2𝒦² + 𝒯² − 𝒦̇, 𝒯̇ − 3𝒦𝒯)`, the coefficients scaled by `ρ⁴`.
    pub fn scaled_coefficients(&self) -> (f64, f64) {
        let r4 = self.rho.powi(4);
        (self.a21 * r4, self.a22 * r4)
    }

    /// Residual normalization `Ω`; the equiform invariants are
    /// dimensionless, so the floor is one.
    pub fn omega(&self) -> f64 {
        let k = self.curvature;
        let t = self.torsion;
        1f64.max(k * k)
            .max(t * t)
            .max(self.curvature_dsigma.abs())
            .max(self.torsion_dsigma.abs())
    }
}

pub fn q_vectors(c: &CurveJet, s: f64) -> Result<QVectors> {
    Ok(QVectors::from_equiform(&equiform_data(c, s)?))
}

fn project(v: &PgVector, onto: &PgVector) -> PgVector {
    *onto * (v.dot(onto) / onto.dot(onto))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StarVectors {
    pub q1_star: PgVector,
    /// `None` when `Q₂` has no component off `Q₁*`.
    pub q2_star: Option<PgVector>,
}

pub fn star_vectors(q: &QVectors) -> Result<StarVectors> {
    let n11 = q.q1.dot(&q.q1);
    if n11 == 0.0 {
        return Err(Error::Q1Lightlike { s: q.s });
    }
    let q1_star = q.q1 * (1.0 / n11.abs().sqrt());
    let w = q.q2 - project(&q.q2, &q1_star);
    let nw = w.dot(&w);
    let scale = q.q2.sup_norm();
    let q2_star = if nw.abs() <= 1e-14 * scale * scale {
        None
    } else {
        Some(w * (1.0 / nw.abs().sqrt()))
    };
    Ok(StarVectors { q1_star, q2_star })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AwResiduals {
    pub aw1: f64,
    pub aw2: f64,
    pub aw3: f64,
    pub weak_aw2: f64,
    pub weak_aw3: f64,
}

impl AwResiduals {
    pub fn get(&self, t: AwType) -> f64 {
        match t {
            AwType::AW1 => self.aw1,
            AwType::AW2 => self.aw2,
            AwType::AW3 => self.aw3,
            AwType::WeakAW2 => self.weak_aw2,
            AwType::WeakAW3 => self.weak_aw3,
        }
    }
}

/// Dimensionless residuals of the scalar conditions at one point.
pub fn aw_conditions(q: &QVectors) -> AwResiduals {
    let (k, t) = (q.curvature, q.torsion);
    let (kd, td) = (q.curvature_dsigma, q.torsion_dsigma);
    let omega = q.omega();
    let n_coef = (2.0 * k * k + t * t - kd).abs();
    let b_coef = (td - 3.0 * k * t).abs();
    let det = (k * k * t - k * td + t * kd - t * t * t).abs();
    AwResiduals {
        aw1: n_coef.max(b_coef) / omega,
        aw2: det / omega.powf(1.5),
        aw3: b_coef / omega,
        weak_aw2: n_coef / omega,
        weak_aw3: b_coef / omega,
    }
}

/// Residuals of the vector identities themselves, on the same scale as
/// [`aw_conditions`]. The flag is set when `Q₂*` is degenerate; the weak
/// AW(2) projection then falls back to the binormal direction, which is the
/// limit of `Q₂*` as `𝒯 → 0`.
pub fn vector_residuals(q: &QVectors) -> Result<(AwResiduals, bool)> {
    let star = star_vectors(q)?;
    let rho = q.rho;
    let frame = q.normal.sup_norm().max(q.binormal.sup_norm()) / rho;
    let omega = q.omega();
    let unit = frame * omega;
    let (q1, q2, q3) = (q.q1, q.q2, q.q3);

    let aw1 = q3.sup_norm() * rho.powi(3) / unit;
    let aw2 = (q3 * q2.dot(&q2) - q2 * q3.dot(&q2)).sup_norm() * rho.powi(7) / (unit * omega);
    let aw3 = (q3 * q1.dot(&q1) - q1 * q3.dot(&q1)).sup_norm() * rho.powi(5) / unit;
    let weak_aw3 = (q3 - project(&q3, &star.q1_star)).sup_norm() * rho.powi(3) / unit;
    let q2_dir = star.q2_star.unwrap_or(q.binormal * (1.0 / rho));
    let weak_aw2 = (q3 - project(&q3, &q2_dir)).sup_norm() * rho.powi(3) / unit;
    Ok((
        AwResiduals {
            aw1,
            aw2,
            aw3,
            weak_aw2,
            weak_aw3,
        },
        star.q2_star.is_none(),
    ))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AwEntry {
    pub holds: bool,
    pub sup_residual: f64,
    pub vector_sup_residual: f64,
    pub grid_size: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AwReport {
    pub entries: BTreeMap<AwType, AwEntry>,
    pub tolerance: f64,
    pub degenerate_points: Vec<f64>,
    pub diagnostics: Vec<Diagnostic>,
}

impl AwReport {
    pub fn holding(&self) -> BTreeSet<AwType> {
        self.entries
            .iter()
            .filter(|(_, e)| e.holds)
            .map(|(t, _)| *t)
            .collect()
    }

    pub fn holds(&self, t: AwType) -> bool {
        self.entries[&t].holds
    }
}

pub fn classify(c: &CurveJet, grid: &[f64], tol: f64) -> Result<AwReport> {
    let data = equiform_sweep(c, grid)?;
    let mut scalar_sup = [0.0_f64; 5];
    let mut vector_sup = [0.0_f64; 5];
    let mut degenerate_points = Vec::new();
    for e in &data {
        let q = QVectors::from_equiform(e);
        let scalar = aw_conditions(&q);
        let (vector, degenerate) = vector_residuals(&q)?;
        if degenerate {
            degenerate_points.push(e.s);
        }
        for (i, t) in AwType::ALL.iter().enumerate() {
            scalar_sup[i] = scalar_sup[i].max(scalar.get(*t));
            vector_sup[i] = vector_sup[i].max(vector.get(*t));
        }
    }

    let aw1_holds = scalar_sup[0] < tol;
    let mut entries = BTreeMap::new();
    let mut diagnostics = Vec::new();
    for (i, t) in AwType::ALL.iter().enumerate() {
        // Q₃ = 0 satisfies every identity
        let holds = scalar_sup[i] < tol || aw1_holds;
        let vector_holds = vector_sup[i] < tol || vector_sup[0] < tol;
        if holds != vector_holds {
            diagnostics.push(Diagnostic::new(
                "scalar-vector-disagreement",
                format!(
                    "{t}: scalar condition gives {holds} (sup {:.3e}) but the vector identity gives {vector_holds} (sup {:.3e})",
                    scalar_sup[i], vector_sup[i]
                ),
            ));
        }
        entries.insert(
            *t,
            AwEntry {
                holds,
                sup_residual: scalar_sup[i],
                vector_sup_residual: vector_sup[i],
                grid_size: data.len(),
            },
        );
    }
    Ok(AwReport {
        entries,
        tolerance: tol,
        degenerate_points,
        diagnostics,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frame(epsilon: i8, phi: f64) -> (PgVector, PgVector) {
        let (c, s) = (phi.cosh(), phi.sinh());
        let e = f64::from(epsilon);
        if epsilon > 0 {
            (PgVector::new(0.0, c, s), PgVector::new(0.0, e * s, e * c))
        } else {
            (PgVector::new(0.0, s, c), PgVector::new(0.0, e * c, e * s))
        }
    }

    fn q_of(rho: f64, k: f64, t: f64, kd: f64, td: f64, epsilon: i8) -> QVectors {
        let (e2, e3) = frame(epsilon, 0.3);
        QVectors::from_invariants(0.0, rho, k, t, kd, td, epsilon, e2 * rho, e3 * rho)
    }

    #[test]
    fn spiral_point() {
        // ρ = 2, 𝒦 = 1, 𝒯 = 𝒦̇ = 𝒯̇ = 0 with N = (0, 2, 0)
        let q = QVectors::from_invariants(
            1.0,
            2.0,
            1.0,
            0.0,
            0.0,
            0.0,
            1,
            PgVector::new(0.0, 2.0, 0.0),
            PgVector::new(0.0, 0.0, 2.0),
        );
        assert_eq!(q.q1, PgVector::new(0.0, 0.5, 0.0));
        assert_eq!(q.q2, PgVector::new(0.0, -0.25, 0.0));
        assert_eq!(q.q3, PgVector::new(0.0, 0.25, 0.0));
        assert_eq!(q.q1.dot(&q.binormal), 0.0);

        let star = star_vectors(&q).unwrap();
        assert_eq!(star.q1_star, PgVector::new(0.0, 1.0, 0.0));
        assert!(star.q2_star.is_none());

        let r = aw_conditions(&q);
        assert_eq!(r.aw2, 0.0);
        assert_eq!(r.aw3, 0.0);
        assert_eq!(r.weak_aw3, 0.0);
        assert_eq!(r.aw1, 2.0);
        assert_eq!(r.weak_aw2, 2.0);
    }

    #[test]
    fn helix_point() {
        // ρ = 1, 𝒦 = 0, 𝒯 = 1 at s = 0 of (s, cosh s, sinh s)
        let n = PgVector::new(0.0, 1.0, 0.0);
        let b = PgVector::new(0.0, 0.0, 1.0);
        let q = QVectors::from_invariants(0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1, n, b);
        assert_eq!(q.q2, b);
        assert_eq!(q.q3, n);
        let star = star_vectors(&q).unwrap();
        assert_eq!(star.q1_star, n);
        assert_eq!(star.q2_star, Some(b));
        let r = aw_conditions(&q);
        assert_eq!((r.aw3, r.weak_aw3), (0.0, 0.0));
        assert_eq!((r.aw1, r.aw2, r.weak_aw2), (1.0, 1.0, 1.0));
    }

    #[test]
    fn isotropic_circle_point_satisfies_everything() {
        let q = q_of(1.0, 0.0, 0.0, 0.0, 0.0, 1);
        let r = aw_conditions(&q);
        for t in AwType::ALL {
            assert_eq!(r.get(t), 0.0);
        }
        let (v, _) = vector_residuals(&q).unwrap();
        for t in AwType::ALL {
            assert_eq!(v.get(t), 0.0, "{t}");
        }
    }

    #[test]
    fn q1_star_ignores_scale() {
        let mut q = q_of(1.7, 0.4, -0.9, 0.2, 0.1, -1);
        let before = star_vectors(&q).unwrap().q1_star;
        q.q1 = q.q1 * 10.0;
        let after = star_vectors(&q).unwrap().q1_star;
        assert!((before - after).sup_norm() < 1e-15);
    }

    #[test]
    fn lightlike_q1_is_an_error() {
        let mut q = q_of(1.0, 0.5, 0.5, 0.0, 0.0, 1);
        q.q1 = PgVector::new(0.0, 1.0, 1.0);
        assert!(matches!(star_vectors(&q), Err(Error::Q1Lightlike { .. })));
    }

    #[test]
    fn vector_and_scalar_agree_on_enforced_conditions() {
        for epsilon in [1, -1] {
            // weak AW(3): 𝒯̇ = 3𝒦𝒯
            let q = q_of(1.3, 0.7, -0.4, 0.3, 3.0 * 0.7 * -0.4, epsilon);
            let (v, _) = vector_residuals(&q).unwrap();
            assert!(aw_conditions(&q).weak_aw3 < 1e-15);
            assert!(v.weak_aw3 < 1e-14 && v.aw3 < 1e-14);
            assert!(v.weak_aw2 > 1e-3 && v.aw1 > 1e-3);
            // weak AW(2): 𝒦̇ = 2𝒦² + 𝒯²
            let (k, t) = (0.7, -0.4);
            let q = q_of(0.8, k, t, 2.0 * k * k + t * t, 1.1, epsilon);
            let (v, _) = vector_residuals(&q).unwrap();
            assert!(aw_conditions(&q).weak_aw2 < 1e-15);
            assert!(v.weak_aw2 < 1e-14);
            assert!(v.weak_aw3 > 1e-3);
        }
    }
}
