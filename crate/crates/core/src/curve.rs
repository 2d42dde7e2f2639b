//! Admissible curves represented as providers of derivative jets.
//!
//! Every curve handled by the library is stored in arc-length form
//! `γ(s) = (s, y(s), z(s))`; constructors verify that `x(s) − s` is constant
//! and remove the constant.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::PgVector;
use crate::error::{Degeneracy, Error, Result};
use crate::numeric::{balanced_step, richardson_derivative, STENCIL_REACH};

/// Highest derivative order a curve can provide.
pub const MAX_JET_ORDER: usize = 4;

/// `γ′ × γ″` counts as vanishing below this multiple of the tangent scale.
pub const INFLECTION_TOL: f64 = 1e-12;

/// Default relative margin for `|y″² − z″²|` against `y″² + z″²`.
pub const DEFAULT_LIGHTLIKE_TOL: f64 = 1e-10;

type JetFn = dyn Fn(f64, usize) -> PgVector + Send + Sync;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum JetKind {
    AnalyticJets,
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo >= hi {
            return Err(Error::DomainEmpty(lo, hi));
        }
        Ok(Domain { lo, hi })
    }

    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// Membership with a relative slack of a few ulps at the ends.
    pub fn contains(&self, s: f64) -> bool {
        let slack = 1e-12 * self.lo.abs().max(self.hi.abs()).max(1.0);
        s >= self.lo - slack && s <= self.hi + slack
    }

    /// `n` equally spaced points covering the domain.
    pub fn linspace(&self, n: usize) -> Vec<f64> {
        linspace(self.lo, self.hi, n)
    }

    /// `n` equally spaced points strictly inside the domain.
    pub fn interior(&self, n: usize) -> Vec<f64> {
        let step = self.len() / (n + 1) as f64;
        (1..=n).map(|i| self.lo + i as f64 * step).collect()
    }
}

pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + i as f64 * step })
                .collect()
        }
    }
}

/// Curve in arc-length form, evaluated through its derivative jets.
#[derive(Clone)]
pub struct CurveJet {
    domain: Domain,
    kind: JetKind,
    max_order: usize,
    jets: Arc<JetFn>,
    warnings: Vec<String>,
}

impl fmt::Debug for CurveJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CurveJet")
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .field("max_order", &self.max_order)
            .field("warnings", &self.warnings)
            .finish()
    }
}

impl CurveJet {
    /// Wraps a raw jet evaluator. `jets(s, k)` must return the `k`-th
    /// arc-length derivative for `k` in `0..=4`.
    pub fn from_fn<F>(domain: Domain, kind: JetKind, jets: F) -> Self
    where
        F: Fn(f64, usize) -> PgVector + Send + Sync + 'static,
    {
        CurveJet {
            domain,
            kind,
            max_order: MAX_JET_ORDER,
            jets: Arc::new(jets),
            warnings: Vec::new(),
        }
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn kind(&self) -> JetKind {
        self.kind
    }

    pub fn max_order(&self) -> usize {
        self.max_order
    }

    /// Construction-time consistency warnings.
    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    /// Caps the available jet order, e.g. for data that cannot support
    /// fourth derivatives.
    pub fn with_max_order(mut self, order: usize) -> Self {
        self.max_order = order.min(MAX_JET_ORDER);
        self
    }

    pub fn jet(&self, s: f64, order: usize) -> Result<PgVector> {
        if order > self.max_order {
            return Err(Error::JetOrderTooLow {
                requested: order,
                available: self.max_order,
            });
        }
        Ok((self.jets)(s, order))
    }

    pub fn point(&self, s: f64) -> PgVector {
        (self.jets)(s, 0)
    }

    /// Jets of orders `0..=n` (unused slots are zero).
    pub fn jets_upto(&self, s: f64, n: usize) -> Result<[PgVector; 5]> {
        let mut out = [PgVector::ZERO; 5];
        for (k, slot) in out.iter_mut().enumerate().take(n + 1) {
            *slot = self.jet(s, k)?;
        }
        Ok(out)
    }

    pub(crate) fn raw(&self) -> Arc<JetFn> {
        Arc::clone(&self.jets)
    }
}

/// Offset `c` with `x(s) = s + c`, or `NotArcLength`.
fn arc_length_offset<F: Fn(f64) -> PgVector>(position: &F, domain: Domain) -> Result<f64> {
    let probes = domain.linspace(9);
    let offsets: Vec<f64> = probes.iter().map(|&s| position(s).x1 - s).collect();
    if offsets.iter().any(|o| !o.is_finite()) {
        return Err(Error::NonFinite("curve position"));
    }
    let lo = offsets.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = offsets.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let scale = domain.lo.abs().max(domain.hi.abs()).max(lo.abs()).max(1.0);
    if hi - lo > 1e-9 * scale {
        return Err(Error::NotArcLength { spread: hi - lo });
    }
    Ok(offsets[0])
}

/// Curve from closed-form position and derivative functions.
///
/// At five pseudo-random interior points each supplied derivative is compared
/// with a central difference of the next lower one; mismatches beyond
/// `1e-4` relative are kept as warnings on the returned curve.
pub fn make_analytic_curve<P, D1, D2, D3, D4>(
    position: P,
    d1: D1,
    d2: D2,
    d3: D3,
    d4: D4,
    domain: Domain,
) -> Result<CurveJet>
where
    P: Fn(f64) -> PgVector + Send + Sync + 'static,
    D1: Fn(f64) -> PgVector + Send + Sync + 'static,
    D2: Fn(f64) -> PgVector + Send + Sync + 'static,
    D3: Fn(f64) -> PgVector + Send + Sync + 'static,
    D4: Fn(f64) -> PgVector + Send + Sync + 'static,
{
    let shift = arc_length_offset(&position, domain)?;
    let funcs: [Box<dyn Fn(f64) -> PgVector + Send + Sync>; 5] = [
        Box::new(move |s| {
            let mut p = position(s);
            p.x1 -= shift;
            p
        }),
        Box::new(d1),
        Box::new(d2),
        Box::new(d3),
        Box::new(d4),
    ];
    let warnings = derivative_consistency(&funcs, domain);
    let mut curve = CurveJet::from_fn(domain, JetKind::AnalyticJets, move |s, k| funcs[k](s));
    curve.warnings = warnings;
    Ok(curve)
}

const CONSISTENCY_SEED: u64 = 0x5eed_c0ff_ee15_0001;
const CONSISTENCY_TOL: f64 = 1e-4;

fn derivative_consistency(
    funcs: &[Box<dyn Fn(f64) -> PgVector + Send + Sync>; 5],
    domain: Domain,
) -> Vec<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(CONSISTENCY_SEED);
    let margin = 0.1 * domain.len();
    let mut warnings = Vec::new();
    for _ in 0..5 {
        let s = rng.gen_range(domain.lo + margin..domain.hi - margin);
        for k in 1..=MAX_JET_ORDER {
            let lower = &funcs[k - 1];
            let fd: PgVector = richardson_derivative(&|t| lower(t), s, 1, balanced_step(1, s));
            let given = funcs[k](s);
            let scale = given.sup_norm().max(fd.sup_norm()).max(1e-8);
            let err = (given - fd).sup_norm() / scale;
            if !(err <= CONSISTENCY_TOL) {
                warnings.push(format!(
                    "derivative of order {k} disagrees with the difference quotient of order {} at s = {s:.6} (relative {err:.3e})",
                    k - 1
                ));
            }
        }
    }
    warnings
}

/// Curve from a position function only; derivatives come from
/// Richardson-extrapolated central differences.
///
/// `h` is the smallest step used. The order-`k` stencil runs on
/// `max(h, eps^(1/(6+k))·max(1,|s|))`, since a uniform step small enough for
/// first derivatives drowns fourth derivatives in cancellation error.
pub fn make_sampled_curve<P>(position: P, domain: Domain, h: f64) -> Result<CurveJet>
where
    P: Fn(f64) -> PgVector + Send + Sync + 'static,
{
    let s_scale = domain.lo.abs().max(domain.hi.abs()).max(1.0);
    let min_h = 64.0 * f64::EPSILON * s_scale;
    if !(h >= min_h) {
        return Err(Error::StepTooSmall { h, min: min_h });
    }
    if domain.len() < 8.0 * h {
        return Err(Error::DomainTooNarrow {
            len: domain.len(),
            h,
        });
    }
    let shift = arc_length_offset(&position, domain)?;
    let jets = move |s: f64, k: usize| -> PgVector {
        if k == 0 {
            let mut p = position(s);
            p.x1 -= shift;
            return p;
        }
        let step = h.max(balanced_step(k, s));
        let yz = |t: f64| {
            let p = position(t);
            PgVector::new(0.0, p.x2, p.x3)
        };
        let mut d: PgVector = richardson_derivative(&yz, s, k, step);
        d.x1 = if k == 1 { 1.0 } else { 0.0 };
        d
    };
    Ok(CurveJet::from_fn(domain, JetKind::FiniteDifference, jets))
}

/// How far beyond the domain a sampled curve evaluates its position.
pub fn sampled_reach(s: f64) -> f64 {
    STENCIL_REACH * balanced_step(MAX_JET_ORDER, s)
}

/// Report of [`check_admissibility`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    /// Smallest `‖γ′ × γ″‖∞` over the grid.
    pub worst_inflection_margin: f64,
    /// Smallest `|y″² − z″²| / (y″² + z″²)` over the grid.
    pub worst_lightlike_margin: f64,
    pub failing_params: Vec<f64>,
}

/// Pointwise admissibility from first and second derivatives.
pub(crate) fn point_degeneracy(d1: &PgVector, d2: &PgVector, tol_light: f64) -> Option<Degeneracy> {
    if d1.x1 == 0.0 {
        return Some(Degeneracy::IsotropicTangent);
    }
    let cross = d1.cross(d2).sup_norm();
    if !(cross > INFLECTION_TOL * d1.sup_norm().max(1.0)) {
        return Some(Degeneracy::Inflection);
    }
    let q = d2.x2 * d2.x2 - d2.x3 * d2.x3;
    let n = d2.x2 * d2.x2 + d2.x3 * d2.x3;
    if !(q.abs() > tol_light * n) {
        return Some(Degeneracy::LightlikeNormal);
    }
    None
}

pub fn check_admissibility(
    c: &CurveJet,
    grid: &[f64],
    tol_light: f64,
) -> Result<AdmissibilityReport> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut report = AdmissibilityReport {
        admissible: true,
        worst_inflection_margin: f64::INFINITY,
        worst_lightlike_margin: f64::INFINITY,
        failing_params: Vec::new(),
    };
    let mut signature: Option<bool> = None;
    for &s in grid {
        let d1 = c.jet(s, 1)?;
        let d2 = c.jet(s, 2)?;
        let cross = d1.cross(&d2).sup_norm();
        let q = d2.x2 * d2.x2 - d2.x3 * d2.x3;
        let n = d2.x2 * d2.x2 + d2.x3 * d2.x3;
        let light = if n > 0.0 { q.abs() / n } else { 0.0 };
        report.worst_inflection_margin = report.worst_inflection_margin.min(cross);
        report.worst_lightlike_margin = report.worst_lightlike_margin.min(light);
        let mut failed = point_degeneracy(&d1, &d2, tol_light).is_some();
        if !failed {
            let spacelike = q > 0.0;
            match signature {
                None => signature = Some(spacelike),
                Some(sig) if sig != spacelike => failed = true,
                Some(_) => {}
            }
        }
        if failed {
            report.admissible = false;
            report.failing_params.push(s);
        }
    }
    Ok(report)
}

/// Coefficient of a homothety centred at the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HomothetyFactor(f64);

impl HomothetyFactor {
    pub fn new(mu: f64) -> Result<Self> {
        if mu.is_finite() && mu > 0.0 {
            Ok(HomothetyFactor(mu))
        } else {
            Err(Error::ParamConstraintViolated(format!(
                "homothety factor must be positive, got {mu}"
            )))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

/// Image `s̄ ↦ μ·γ(s̄/μ)` in its own arc length `s̄ = μ s`.
pub fn apply_homothety(c: &CurveJet, mu: HomothetyFactor) -> CurveJet {
    let mu = mu.get();
    let inner = c.raw();
    let domain = Domain {
        lo: mu * c.domain.lo,
        hi: mu * c.domain.hi,
    };
    CurveJet {
        domain,
        kind: c.kind,
        max_order: c.max_order,
        jets: Arc::new(move |s, k| inner(s / mu, k).scale(mu.powi(1 - k as i32))),
        warnings: c.warnings.clone(),
    }
}

/// Draws `n` parameters uniformly from `domain` with a fixed seed.
pub fn random_params(domain: Domain, n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| rng.gen_range(domain.lo..domain.hi))
        .collect()
}
