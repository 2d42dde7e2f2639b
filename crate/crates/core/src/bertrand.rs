//! Equiform Bertrand mates `γ̄ = γ + λN` and pair verification.
//!
//! Corresponding points share the arc-length parameter: the normal has no
//! first component, so the offset keeps `x₁ = s`.

use serde::Serialize;

use crate::algebra::PgVector;
use crate::curve::{point_degeneracy, CurveJet, DEFAULT_LIGHTLIKE_TOL};
use crate::equiform::{equiform_sweep, NaturalTolerances, Profile};
use crate::error::{Error, Result};
use crate::numeric::{balanced_step, richardson_derivative};

/// Grid size of the admissibility scan in [`bertrand_mate`].
pub const MATE_SCAN_POINTS: usize = 64;

/// `N = ρ²γ″` and its first two derivatives from the base jets.
fn normal_jets(d: &[PgVector; 5]) -> [PgVector; 3] {
    let (y2, y3, y4) = (d[2].x2, d[3].x2, d[4].x2);
    let (z2, z3, z4) = (d[2].x3, d[3].x3, d[4].x3);
    let q = y2 * y2 - z2 * z2;
    let eps = q.signum();
    let q1 = 2.0 * (y2 * y3 - z2 * z3);
    let q2 = 2.0 * (y3 * y3 + y2 * y4 - z3 * z3 - z2 * z4);
    let g = eps / q;
    let g1 = -eps * q1 / (q * q);
    let g2 = -eps * q2 / (q * q) + 2.0 * eps * q1 * q1 / (q * q * q);
    [
        d[2] * g,
        d[2] * g1 + d[3] * g,
        d[2] * g2 + d[3] * (2.0 * g1) + d[4] * g,
    ]
}

/// Offset curve `s ↦ γ(s) + λN(s)`.
///
/// Orders 0..=2 of the mate are exact in the base jets; orders 3 and 4 need
/// base derivatives beyond the fourth and are taken as extrapolated central
/// differences of the exact second-order term.
pub fn bertrand_mate(c: &CurveJet, lambda: f64) -> Result<CurveJet> {
    if !lambda.is_finite() {
        return Err(Error::NonFinite("lambda"));
    }
    let domain = c.domain();
    for s in domain.linspace(MATE_SCAN_POINTS) {
        let d = c.jets_upto(s, 4)?;
        if let Some(reason) = point_degeneracy(&d[1], &d[2], DEFAULT_LIGHTLIKE_TOL) {
            return Err(Error::Inadmissible { s, reason });
        }
    }

    let raw = c.raw();
    let jets = move |s: f64, k: usize| -> PgVector {
        let base = raw(s, k);
        if lambda == 0.0 {
            return base;
        }
        let all = |t: f64| [raw(t, 0), raw(t, 1), raw(t, 2), raw(t, 3), raw(t, 4)];
        let offset = if k <= 2 {
            normal_jets(&all(s))[k]
        } else {
            let second = |t: f64| normal_jets(&all(t))[2];
            let order = k - 2;
            richardson_derivative(&second, s, order, balanced_step(order, s))
        };
        base + offset * lambda
    };
    let mate = CurveJet::from_fn(domain, c.kind(), jets).with_max_order(c.max_order());

    for s in domain.linspace(MATE_SCAN_POINTS) {
        let d = mate.jets_upto(s, 2)?;
        if !(d[1].is_finite() && d[2].is_finite()) {
            return Err(Error::NonFinite("mate jets"));
        }
        if let Some(reason) = point_degeneracy(&d[1], &d[2], DEFAULT_LIGHTLIKE_TOL) {
            return Err(Error::MateInadmissible { s, reason });
        }
    }
    Ok(mate)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum BertrandNature {
    CircularHelix,
    IsotropicCircle,
    NotBertrand,
}

#[derive(Debug, Clone, Serialize)]
pub struct BertrandPair {
    #[serde(skip_serializing)]
    pub base: CurveJet,
    #[serde(skip_serializing)]
    pub mate: CurveJet,
    /// Mean of the offset recovered from `γ̄ − γ = λN`.
    pub lambda: f64,
    pub is_pair: bool,
    pub curvature_sup: f64,
    pub mate_curvature_sup: f64,
    /// Sup over the grid of `|N₂N̄₃ − N₃N̄₂| / (‖N‖‖N̄‖)`.
    pub normal_parallel_sup: f64,
    /// `max − min` of the recovered offset.
    pub lambda_variation: f64,
    /// Sup of `|λ_rec − λ(s)|` against the supplied offset function.
    pub lambda_mismatch: f64,
    /// Sup of `‖γ̄ − γ − λ_rec N‖ / max(1, ‖γ̄ − γ‖)`.
    pub offset_residual: f64,
    pub tangent_product_mean: f64,
    /// `max − min` of `⟨T̄, T⟩`.
    pub tangent_product_var: f64,
    pub nature: BertrandNature,
}

/// Pointwise `λ` with `other − c = λN`, together with the offset defect.
pub fn recover_offset(c: &CurveJet, other: &CurveJet, grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    let data = equiform_sweep(c, grid)?;
    data.iter()
        .map(|e| {
            let delta = other.point(e.s) - c.point(e.s);
            let lambda = delta.dot(&e.normal) / e.normal.dot(&e.normal);
            let defect = (delta - e.normal * lambda).sup_norm() / delta.sup_norm().max(1.0);
            Ok((lambda, defect))
        })
        .collect()
}

pub fn verify_bertrand_pair<L>(
    base: &CurveJet,
    mate: &CurveJet,
    lambda_fn: L,
    grid: &[f64],
    tol: f64,
) -> Result<BertrandPair>
where
    L: Fn(f64) -> f64,
{
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let b = equiform_sweep(base, grid)?;
    let m = equiform_sweep(mate, grid)?;

    let curvature = Profile::of(b.iter().map(|e| e.curvature));
    let mate_curvature = Profile::of(m.iter().map(|e| e.curvature));

    let normal_parallel_sup = b
        .iter()
        .zip(&m)
        .map(|(e, f)| {
            let (n, nb) = (e.normal, f.normal);
            (n.x2 * nb.x3 - n.x3 * nb.x2).abs() / (n.sup_norm() * nb.sup_norm())
        })
        .fold(0.0, f64::max);

    let recovered = recover_offset(base, mate, grid)?;
    let lambdas = Profile::of(recovered.iter().map(|r| r.0));
    let offset_residual = recovered.iter().map(|r| r.1).fold(0.0, f64::max);
    let given = Profile::of(grid.iter().map(|&s| lambda_fn(s)));
    let lambda_mismatch = grid
        .iter()
        .zip(&recovered)
        .map(|(&s, r)| (r.0 - lambda_fn(s)).abs())
        .fold(0.0, f64::max);

    let tangents = Profile::of(b.iter().zip(&m).map(|(e, f)| f.tangent.dot(&e.tangent)));

    let constant = |p: &Profile| p.variation < tol * p.mean.abs().max(1.0);
    let is_pair = curvature.is_zero(tol)
        && mate_curvature.is_zero(tol)
        && normal_parallel_sup < tol
        && constant(&lambdas)
        && constant(&given)
        && lambda_mismatch < tol * lambdas.mean.abs().max(1.0)
        && offset_residual < tol
        && constant(&tangents);

    Ok(BertrandPair {
        base: base.clone(),
        mate: mate.clone(),
        lambda: lambdas.mean,
        is_pair,
        curvature_sup: curvature.max_abs,
        mate_curvature_sup: mate_curvature.max_abs,
        normal_parallel_sup,
        lambda_variation: lambdas.variation,
        lambda_mismatch,
        offset_residual,
        tangent_product_mean: tangents.mean,
        tangent_product_var: tangents.variation,
        nature: bertrand_nature(base, grid, tol)?,
    })
}

pub fn bertrand_nature(c: &CurveJet, grid: &[f64], tol: f64) -> Result<BertrandNature> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let data = equiform_sweep(c, grid)?;
    let k = Profile::of(data.iter().map(|e| e.curvature));
    let t = Profile::of(data.iter().map(|e| e.torsion));
    let tol = NaturalTolerances {
        tol_const: tol,
        tol_zero: tol,
    };
    Ok(if !k.is_zero(tol.tol_zero) {
        BertrandNature::NotBertrand
    } else if t.is_zero(tol.tol_zero) {
        BertrandNature::IsotropicCircle
    } else if t.is_nonzero_constant(&tol) {
        BertrandNature::CircularHelix
    } else {
        BertrandNature::NotBertrand
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{linspace, make_analytic_curve, Domain};
    use crate::error::Degeneracy;
    use crate::frenet::frenet_data;

    fn hyperbola(r: f64) -> CurveJet {
        make_analytic_curve(
            move |s| PgVector::new(s, r * s.cosh(), r * s.sinh()),
            move |s| PgVector::new(1.0, r * s.sinh(), r * s.cosh()),
            move |s| PgVector::new(0.0, r * s.cosh(), r * s.sinh()),
            move |s| PgVector::new(0.0, r * s.sinh(), r * s.cosh()),
            move |s| PgVector::new(0.0, r * s.cosh(), r * s.sinh()),
            Domain::new(-1.0, 1.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn zero_offset_is_identity() {
        let c = hyperbola(1.0);
        let m = bertrand_mate(&c, 0.0).unwrap();
        for s in linspace(-1.0, 1.0, 9) {
            for k in 0..=4 {
                assert_eq!(m.jet(s, k).unwrap(), c.jet(s, k).unwrap());
            }
        }
    }

    #[test]
    fn unit_offset_doubles_the_hyperbola() {
        let c = hyperbola(1.0);
        let m = bertrand_mate(&c, 1.0).unwrap();
        let want = hyperbola(2.0);
        for s in linspace(-1.0, 1.0, 9) {
            for k in 0..=4 {
                let err = (m.jet(s, k).unwrap() - want.jet(s, k).unwrap()).sup_norm();
                assert!(err < 1e-9, "order {k} at {s}: {err}");
            }
        }
        let f = frenet_data(&m, 0.4).unwrap();
        assert!((f.kappa - 2.0).abs() < 1e-12);
        assert!((f.tau - 1.0).abs() < 1e-9);
    }

    #[test]
    fn collapsing_offset_is_rejected() {
        // λ = −1 shrinks (s, cosh s, sinh s) onto the line (s, 0, 0)
        let c = hyperbola(1.0);
        assert!(matches!(
            bertrand_mate(&c, -1.0),
            Err(Error::MateInadmissible {
                reason: Degeneracy::Inflection,
                ..
            })
        ));
        assert!(matches!(
            bertrand_mate(&c, f64::NAN),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn pair_verification() {
        let c = hyperbola(1.0);
        let m = bertrand_mate(&c, 1.0).unwrap();
        let grid = linspace(-1.0, 1.0, 21);
        let p = verify_bertrand_pair(&c, &m, |_| 1.0, &grid, 1e-8).unwrap();
        assert!(p.is_pair);
        assert!((p.lambda - 1.0).abs() < 1e-12);
        assert!((p.tangent_product_mean - 0.5).abs() < 1e-12);
        assert_eq!(p.nature, BertrandNature::CircularHelix);

        let q = verify_bertrand_pair(&c, &m, |s| s, &grid, 1e-8).unwrap();
        assert!(!q.is_pair);
        assert!(matches!(
            verify_bertrand_pair(&c, &m, |_| 1.0, &[], 1e-8),
            Err(Error::EmptyGrid)
        ));
    }
}
