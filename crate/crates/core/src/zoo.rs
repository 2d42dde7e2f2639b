//! Closed-form fixture curves with analytic jets and oracle tables.
//!
//! Every entry is arc-length parametrized as `s ↦ (s, y(s), z(s))`. The jets
//! are hand-differentiated closed forms; the oracle functions are
//! independent closed forms for the Frenet and equiform apparatus.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use crate::algebra::PgVector;
use crate::aw::AwType;
use crate::curve::{make_analytic_curve, CurveJet, Domain};
use crate::diagnostics::Diagnostic;
use crate::error::{Error, Result};

/// Smallest admissible value of the logarithm argument on a domain.
pub const LOG_ARGUMENT_MIN: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum ZooCurve {
    TimelikeGeneralHelix,
    SpacelikeGeneralHelix,
    TimelikeCircularHelix,
    SpacelikeCircularHelix,
    TimelikeLogSpiral,
    BertrandHelix,
    IsotropicCircle,
}

impl ZooCurve {
    pub const ALL: [ZooCurve; 7] = [
        ZooCurve::TimelikeGeneralHelix,
        ZooCurve::SpacelikeGeneralHelix,
        ZooCurve::TimelikeCircularHelix,
        ZooCurve::SpacelikeCircularHelix,
        ZooCurve::TimelikeLogSpiral,
        ZooCurve::BertrandHelix,
        ZooCurve::IsotropicCircle,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ZooCurve::TimelikeGeneralHelix => "timelike_general_helix",
            ZooCurve::SpacelikeGeneralHelix => "spacelike_general_helix",
            ZooCurve::TimelikeCircularHelix => "timelike_circular_helix",
            ZooCurve::SpacelikeCircularHelix => "spacelike_circular_helix",
            ZooCurve::TimelikeLogSpiral => "timelike_log_spiral",
            ZooCurve::BertrandHelix => "bertrand_helix",
            ZooCurve::IsotropicCircle => "isotropic_circle",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        ZooCurve::ALL
            .into_iter()
            .find(|c| c.name() == name)
            .ok_or_else(|| Error::UnknownName(name.to_string()))
    }

    /// Position 1..=5 in the worked-example sequence, if any.
    pub fn example_number(self) -> Option<u8> {
        match self {
            ZooCurve::TimelikeGeneralHelix => Some(1),
            ZooCurve::SpacelikeGeneralHelix => Some(2),
            ZooCurve::TimelikeCircularHelix => Some(3),
            ZooCurve::SpacelikeCircularHelix => Some(4),
            ZooCurve::TimelikeLogSpiral => Some(5),
            _ => None,
        }
    }

    pub fn from_example_number(n: u8) -> Result<Self> {
        ZooCurve::ALL
            .into_iter()
            .find(|c| c.example_number() == Some(n))
            .ok_or_else(|| Error::UnknownName(format!("example {n}")))
    }

    /// Human-readable parameter constraints.
    pub fn constraints(self) -> &'static str {
        match self {
            ZooCurve::TimelikeGeneralHelix | ZooCurve::SpacelikeGeneralHelix => {
                "a, b != 0, a != ±b"
            }
            ZooCurve::TimelikeCircularHelix | ZooCurve::SpacelikeCircularHelix => {
                "a, b != 0, a != ±b, a*s > 1e-3 on the domain"
            }
            ZooCurve::TimelikeLogSpiral => "a, b != 0, a*s + b >= 1e-3 on the domain",
            ZooCurve::BertrandHelix => "a > 0, b != 0",
            ZooCurve::IsotropicCircle => "a != 0 (b unused)",
        }
    }

    pub fn default_params(self) -> ZooParams {
        match self {
            ZooCurve::TimelikeLogSpiral | ZooCurve::BertrandHelix | ZooCurve::IsotropicCircle => {
                ZooParams { a: 1.0, b: 1.0 }
            }
            _ => ZooParams { a: 1.0, b: 2.0 },
        }
    }

    pub fn default_domain(self, p: ZooParams) -> Domain {
        let (lo, hi) = match self {
            ZooCurve::TimelikeGeneralHelix | ZooCurve::SpacelikeGeneralHelix => (0.0, 2.0),
            ZooCurve::TimelikeCircularHelix | ZooCurve::SpacelikeCircularHelix => {
                if p.a > 0.0 {
                    (0.6, 3.0)
                } else {
                    (-3.0, -0.6)
                }
            }
            ZooCurve::TimelikeLogSpiral => (0.0, 4.0),
            ZooCurve::BertrandHelix | ZooCurve::IsotropicCircle => (-1.0, 1.0),
        };
        Domain { lo, hi }
    }

    /// AW types asserted for the curve by its source; for the log spiral
    /// this differs from what the defining conditions give.
    pub fn claimed_aw(self) -> BTreeSet<AwType> {
        match self {
            ZooCurve::TimelikeLogSpiral => [AwType::AW2, AwType::AW3, AwType::WeakAW2].into(),
            ZooCurve::BertrandHelix => [AwType::AW3, AwType::WeakAW3].into(),
            ZooCurve::IsotropicCircle => AwType::ALL.into(),
            _ => BTreeSet::new(),
        }
    }
}

impl fmt::Display for ZooCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZooParams {
    pub a: f64,
    pub b: f64,
}

/// Closed-form Frenet and equiform apparatus at one parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Oracle {
    pub kappa: f64,
    pub tau: f64,
    pub epsilon: i8,
    pub e1: PgVector,
    pub e2: PgVector,
    pub e3: PgVector,
    pub curvature: f64,
    /// `ρτ`.
    pub torsion: f64,
    /// Equiform torsion as printed by the source, where it differs.
    pub printed_torsion: Option<f64>,
    /// `e₃` as printed by the source, where it differs.
    pub printed_e3: Option<PgVector>,
}

impl Oracle {
    pub fn rho(&self) -> f64 {
        1.0 / self.kappa
    }

    pub fn tangent(&self) -> PgVector {
        self.e1 * self.rho()
    }

    pub fn normal(&self) -> PgVector {
        self.e2 * self.rho()
    }

    pub fn binormal(&self) -> PgVector {
        self.e3 * self.rho()
    }
}

#[derive(Clone)]
pub struct ZooEntry {
    pub name: ZooCurve,
    pub params: ZooParams,
    pub curve: CurveJet,
    pub notes: Vec<Diagnostic>,
}

impl fmt::Debug for ZooEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ZooEntry")
            .field("name", &self.name)
            .field("params", &self.params)
            .field("domain", &self.curve.domain())
            .field("notes", &self.notes)
            .finish()
    }
}

impl ZooEntry {
    pub fn domain(&self) -> Domain {
        self.curve.domain()
    }

    pub fn position(&self, s: f64) -> PgVector {
        self.curve.point(s)
    }

    pub fn claimed_aw(&self) -> BTreeSet<AwType> {
        self.name.claimed_aw()
    }

    pub fn oracle(&self, s: f64) -> Oracle {
        let ZooParams { a, b } = self.params;
        match self.name {
            ZooCurve::TimelikeGeneralHelix | ZooCurve::SpacelikeGeneralHelix => {
                let timelike = self.name == ZooCurve::TimelikeGeneralHelix;
                let (ch, sh) = ((b * s).cosh(), (b * s).sinh());
                let decay = (-a * s).exp();
                let y1 = -decay * (a * ch + b * sh) / (a * a - b * b);
                let z1 = decay * (b * ch + a * sh) / (b * b - a * a);
                let grow = (a * s).exp();
                if timelike {
                    Oracle {
                        kappa: decay,
                        tau: b,
                        epsilon: 1,
                        e1: PgVector::new(1.0, y1, z1),
                        e2: PgVector::new(0.0, ch, sh),
                        e3: PgVector::new(0.0, sh, ch),
                        curvature: a * grow,
                        torsion: b * grow,
                        printed_torsion: Some(-b * grow),
                        printed_e3: None,
                    }
                } else {
                    Oracle {
                        kappa: decay,
                        tau: -b,
                        epsilon: -1,
                        e1: PgVector::new(1.0, z1, y1),
                        e2: PgVector::new(0.0, sh, ch),
                        e3: PgVector::new(0.0, -ch, -sh),
                        curvature: a * grow,
                        torsion: -b * grow,
                        printed_torsion: None,
                        printed_e3: None,
                    }
                }
            }
            ZooCurve::TimelikeCircularHelix | ZooCurve::SpacelikeCircularHelix => {
                let u = (b / a) * (a * s).ln();
                let (ch, sh) = (u.cosh(), u.sinh());
                let g = a * a / b;
                if self.name == ZooCurve::TimelikeCircularHelix {
                    Oracle {
                        kappa: a / s,
                        tau: -b / (a * s),
                        epsilon: -1,
                        e1: PgVector::new(1.0, g * ch, g * sh),
                        e2: PgVector::new(0.0, sh, ch),
                        e3: PgVector::new(0.0, -ch, -sh),
                        curvature: 1.0 / a,
                        torsion: -b / (a * a),
                        printed_torsion: None,
                        printed_e3: Some(PgVector::new(0.0, ch, sh)),
                    }
                } else {
                    Oracle {
                        kappa: a / s,
                        tau: b / (a * s),
                        epsilon: 1,
                        e1: PgVector::new(1.0, g * sh, g * ch),
                        e2: PgVector::new(0.0, ch, sh),
                        e3: PgVector::new(0.0, sh, ch),
                        curvature: 1.0 / a,
                        torsion: b / (a * a),
                        printed_torsion: None,
                        printed_e3: Some(PgVector::new(0.0, -sh, -ch)),
                    }
                }
            }
            ZooCurve::TimelikeLogSpiral => {
                let v = a * s + b;
                Oracle {
                    kappa: 1.0 / v,
                    tau: 0.0,
                    epsilon: 1,
                    e1: PgVector::new(1.0, v.ln() / a, 0.0),
                    e2: PgVector::new(0.0, 1.0, 0.0),
                    e3: PgVector::new(0.0, 0.0, 1.0),
                    curvature: a,
                    torsion: 0.0,
                    printed_torsion: None,
                    printed_e3: None,
                }
            }
            ZooCurve::BertrandHelix => {
                let (ch, sh) = ((b * s).cosh(), (b * s).sinh());
                Oracle {
                    kappa: a,
                    tau: b,
                    epsilon: 1,
                    e1: PgVector::new(1.0, (a / b) * sh, (a / b) * ch),
                    e2: PgVector::new(0.0, ch, sh),
                    e3: PgVector::new(0.0, sh, ch),
                    curvature: 0.0,
                    torsion: b / a,
                    printed_torsion: None,
                    printed_e3: None,
                }
            }
            ZooCurve::IsotropicCircle => {
                let sign = a.signum();
                Oracle {
                    kappa: a.abs(),
                    tau: 0.0,
                    epsilon: 1,
                    e1: PgVector::new(1.0, a * s, 0.0),
                    e2: PgVector::new(0.0, sign, 0.0),
                    e3: PgVector::new(0.0, 0.0, sign),
                    curvature: 0.0,
                    torsion: 0.0,
                    printed_torsion: None,
                    printed_e3: None,
                }
            }
        }
    }
}

fn violated(msg: String) -> Error {
    Error::ParamConstraintViolated(msg)
}

fn check_params(curve: ZooCurve, p: ZooParams, domain: Domain) -> Result<()> {
    let ZooParams { a, b } = p;
    if !a.is_finite() || !b.is_finite() {
        return Err(Error::NonFinite("curve parameter"));
    }
    if a == 0.0 {
        return Err(violated(format!("{curve}: a must be non-zero")));
    }
    if b == 0.0 && curve != ZooCurve::IsotropicCircle {
        return Err(violated(format!("{curve}: b must be non-zero")));
    }
    match curve {
        ZooCurve::TimelikeGeneralHelix
        | ZooCurve::SpacelikeGeneralHelix
        | ZooCurve::TimelikeCircularHelix
        | ZooCurve::SpacelikeCircularHelix => {
            if a.abs() == b.abs() {
                return Err(violated(format!("{curve}: a must differ from ±b")));
            }
        }
        ZooCurve::BertrandHelix if a <= 0.0 => {
            return Err(violated(format!("{curve}: a must be positive")));
        }
        _ => {}
    }
    match curve {
        ZooCurve::TimelikeCircularHelix | ZooCurve::SpacelikeCircularHelix => {
            let worst = (a * domain.lo).min(a * domain.hi);
            if worst <= LOG_ARGUMENT_MIN {
                return Err(violated(format!(
                    "{curve}: a*s must exceed {LOG_ARGUMENT_MIN} on the domain, got {worst}"
                )));
            }
        }
        ZooCurve::TimelikeLogSpiral => {
            let worst = (a * domain.lo + b).min(a * domain.hi + b);
            if worst < LOG_ARGUMENT_MIN {
                return Err(violated(format!(
                    "{curve}: a*s + b must be at least {LOG_ARGUMENT_MIN} on the domain, got {worst}"
                )));
            }
        }
        _ => {}
    }
    Ok(())
}

/// `dᵏ/dsᵏ e^{−as}(A cosh bs + B sinh bs)` as `(A, B)` coefficients.
fn damped_hyperbolic(a: f64, b: f64, mut coef: (f64, f64), k: usize) -> (f64, f64) {
    for _ in 0..k {
        let (p, q) = coef;
        coef = (-a * p + b * q, b * p - a * q);
    }
    coef
}

/// `dᵏ/dsᵏ (as)^q`.
fn power_derivative(a: f64, q: f64, s: f64, k: usize) -> f64 {
    let mut c = 1.0;
    for i in 0..k {
        c *= (q - i as f64) * a;
    }
    c * (a * s).powf(q - k as f64)
}

type Jet = Box<dyn Fn(f64, usize) -> PgVector + Send + Sync>;

fn general_helix_jet(a: f64, b: f64, swap: bool) -> Jet {
    let d = (a * a - b * b).powi(2);
    let y0 = ((a * a + b * b) / d, 2.0 * a * b / d);
    let z0 = (2.0 * a * b / d, (a * a + b * b) / d);
    Box::new(move |s, k| {
        let e = (-a * s).exp();
        let (ch, sh) = ((b * s).cosh(), (b * s).sinh());
        let eval = |c: (f64, f64)| {
            let c = damped_hyperbolic(a, b, c, k);
            e * (c.0 * ch + c.1 * sh)
        };
        let (y, z) = (eval(y0), eval(z0));
        let x = match k {
            0 => s,
            1 => 1.0,
            _ => 0.0,
        };
        if swap {
            PgVector::new(x, z, y)
        } else {
            PgVector::new(x, y, z)
        }
    })
}

fn circular_helix_jet(a: f64, b: f64, swap: bool) -> Jet {
    let c = a.powi(3) / (b * (b * b - a * a));
    let beta = b / a;
    let scale = c / (2.0 * a);
    Box::new(move |s, k| {
        let (y, z) = if k == 0 {
            let u = beta * (a * s).ln();
            (
                c * s * (b * u.sinh() - a * u.cosh()),
                c * s * (b * u.cosh() - a * u.sinh()),
            )
        } else {
            let up = (b - a) * power_derivative(a, 1.0 + beta, s, k);
            let down = (b + a) * power_derivative(a, 1.0 - beta, s, k);
            (scale * (up - down), scale * (up + down))
        };
        let x = match k {
            0 => s,
            1 => 1.0,
            _ => 0.0,
        };
        if swap {
            PgVector::new(x, z, y)
        } else {
            PgVector::new(x, y, z)
        }
    })
}

fn build(curve: ZooCurve, p: ZooParams, domain: Domain) -> Result<CurveJet> {
    let ZooParams { a, b } = p;
    let jet: Jet = match curve {
        ZooCurve::TimelikeGeneralHelix => general_helix_jet(a, b, false),
        ZooCurve::SpacelikeGeneralHelix => general_helix_jet(a, b, true),
        ZooCurve::TimelikeCircularHelix => circular_helix_jet(a, b, false),
        ZooCurve::SpacelikeCircularHelix => circular_helix_jet(a, b, true),
        ZooCurve::TimelikeLogSpiral => Box::new(move |s, k| {
            let v = a * s + b;
            match k {
                0 => PgVector::new(s, v / (a * a) * (v.ln() - 1.0), 0.0),
                1 => PgVector::new(1.0, v.ln() / a, 0.0),
                2 => PgVector::new(0.0, 1.0 / v, 0.0),
                3 => PgVector::new(0.0, -a / (v * v), 0.0),
                _ => PgVector::new(0.0, 2.0 * a * a / (v * v * v), 0.0),
            }
        }),
        ZooCurve::BertrandHelix => Box::new(move |s, k| {
            let r = a / (b * b) * b.powi(k as i32);
            let (ch, sh) = ((b * s).cosh(), (b * s).sinh());
            let (y, z) = if k % 2 == 0 {
                (r * ch, r * sh)
            } else {
                (r * sh, r * ch)
            };
            match k {
                0 => PgVector::new(s, y, z),
                1 => PgVector::new(1.0, y, z),
                _ => PgVector::new(0.0, y, z),
            }
        }),
        ZooCurve::IsotropicCircle => Box::new(move |s, k| match k {
            0 => PgVector::new(s, 0.5 * a * s * s, 0.0),
            1 => PgVector::new(1.0, a * s, 0.0),
            2 => PgVector::new(0.0, a, 0.0),
            _ => PgVector::ZERO,
        }),
    };
    let jet: std::sync::Arc<dyn Fn(f64, usize) -> PgVector + Send + Sync> = jet.into();
    let j = |k: usize| {
        let jet = jet.clone();
        move |s: f64| jet(s, k)
    };
    make_analytic_curve(j(0), j(1), j(2), j(3), j(4), domain)
}

fn notes_for(curve: ZooCurve, c: &CurveJet) -> Vec<Diagnostic> {
    let mut notes = Vec::new();
    match curve {
        ZooCurve::TimelikeGeneralHelix => notes.push(Diagnostic::new(
            "printed-torsion-sign",
            "printed equiform torsion is -b*e^(as); the definition rho*tau gives +b*e^(as), which is what is computed",
        )),
        ZooCurve::TimelikeCircularHelix | ZooCurve::SpacelikeCircularHelix => notes.push(Diagnostic::new(
            "printed-binormal-sign",
            "printed binormal gives det(e1,e2,e3) = -1; the oracle uses the opposite sign so that det = +1",
        )),
        ZooCurve::TimelikeLogSpiral => notes.push(Diagnostic::new(
            "claimed-weak-type",
            "source asserts weak AW(2) and not weak AW(3); the defining conditions give weak AW(3) and not weak AW(2) since the equiform curvature is non-zero",
        )),
        _ => {}
    }
    for w in c.warnings() {
        notes.push(Diagnostic::new("derivative-consistency", w.clone()));
    }
    notes
}

/// Builds a fixture by name; `domain` defaults to the curve's default domain.
pub fn zoo_entry(curve: ZooCurve, params: ZooParams, domain: Option<Domain>) -> Result<ZooEntry> {
    let domain = domain.unwrap_or_else(|| curve.default_domain(params));
    check_params(curve, params, domain)?;
    let c = build(curve, params, domain)?;
    Ok(ZooEntry {
        name: curve,
        notes: notes_for(curve, &c),
        params,
        curve: c,
    })
}

pub fn get_example(name: &str, a: f64, b: f64, domain: Option<Domain>) -> Result<ZooEntry> {
    zoo_entry(ZooCurve::from_name(name)?, ZooParams { a, b }, domain)
}

/// `(s, (a/b²) cosh bs, (a/b²) sinh bs)` with `κ = a`, `τ = b`.
pub fn bertrand_fixture(a: f64, b: f64, domain: Option<Domain>) -> Result<ZooEntry> {
    zoo_entry(ZooCurve::BertrandHelix, ZooParams { a, b }, domain)
}

/// `(s, a s²/2, 0)` with `κ = |a|`, `τ = 0`.
pub fn isotropic_circle(a: f64, domain: Option<Domain>) -> Result<ZooEntry> {
    zoo_entry(ZooCurve::IsotropicCircle, ZooParams { a, b: 0.0 }, domain)
}

/// Curve, parameters and sampling used to reproduce a figure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureSpec {
    pub number: u8,
    pub curve: ZooCurve,
    pub params: ZooParams,
    pub domain: Domain,
    pub samples: usize,
}

pub const FIGURE_SAMPLES: usize = 201;

pub fn figure_spec(n: u8) -> Result<FigureSpec> {
    let curve =
        ZooCurve::from_example_number(n).map_err(|_| Error::UnknownName(format!("figure {n}")))?;
    let params = curve.default_params();
    Ok(FigureSpec {
        number: n,
        curve,
        params,
        domain: curve.default_domain(params),
        samples: FIGURE_SAMPLES,
    })
}
