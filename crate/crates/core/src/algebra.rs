//! Vector algebra of the pseudo-Galilean space.
//!
//! The scalar product is degenerate: a vector with a non-zero first
//! (absolute) component only "sees" that component, while vectors lying in
//! the isotropic plane `x1 = 0` carry the Lorentzian form `x2·y2 − x3·y3`.

use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct PgVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl PgVector {
    pub const ZERO: PgVector = PgVector::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        PgVector { x1, x2, x3 }
    }

    /// Checked constructor rejecting NaN and infinite components.
    pub fn try_new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let v = PgVector::new(x1, x2, x3);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite("vector component"))
        }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    /// Pseudo-Galilean scalar product.
    ///
    /// The case split is an exact comparison of the stored first components
    /// with zero; it decides which bilinear form applies and is not a metric
    /// threshold.
    pub fn dot(&self, other: &PgVector) -> f64 {
        if self.x1 != 0.0 || other.x1 != 0.0 {
            self.x1 * other.x1
        } else {
            self.x2 * other.x2 - self.x3 * other.x3
        }
    }

    /// Formal determinant with first row `(0, −j, k)`.
    pub fn cross(&self, other: &PgVector) -> PgVector {
        PgVector::new(
            0.0,
            self.x1 * other.x3 - self.x3 * other.x1,
            self.x1 * other.x2 - self.x2 * other.x1,
        )
    }

    pub fn causal_class(&self) -> CausalClass {
        if self.x1 != 0.0 {
            return CausalClass::NonIsotropic;
        }
        let q = self.x2 * self.x2 - self.x3 * self.x3;
        if self.x2 == 0.0 && self.x3 == 0.0 {
            CausalClass::Zero
        } else if self.x2.abs() == self.x3.abs() {
            CausalClass::LightlikeIsotropic
        } else if q > 0.0 {
            CausalClass::SpacelikeIsotropic
        } else {
            CausalClass::TimelikeIsotropic
        }
    }

    /// Largest absolute component.
    pub fn sup_norm(&self) -> f64 {
        self.x1.abs().max(self.x2.abs()).max(self.x3.abs())
    }

    pub fn scale(self, k: f64) -> PgVector {
        PgVector::new(k * self.x1, k * self.x2, k * self.x3)
    }
}

/// Ordinary 3×3 determinant of the rows `a`, `b`, `c`.
pub fn det3(a: &PgVector, b: &PgVector, c: &PgVector) -> f64 {
    a.x1 * (b.x2 * c.x3 - b.x3 * c.x2) - a.x2 * (b.x1 * c.x3 - b.x3 * c.x1)
        + a.x3 * (b.x1 * c.x2 - b.x2 * c.x1)
}

impl Add for PgVector {
    type Output = PgVector;
    fn add(self, rhs: PgVector) -> PgVector {
        PgVector::new(self.x1 + rhs.x1, self.x2 + rhs.x2, self.x3 + rhs.x3)
    }
}

impl AddAssign for PgVector {
    fn add_assign(&mut self, rhs: PgVector) {
        *self = *self + rhs;
    }
}

impl Sub for PgVector {
    type Output = PgVector;
    fn sub(self, rhs: PgVector) -> PgVector {
        PgVector::new(self.x1 - rhs.x1, self.x2 - rhs.x2, self.x3 - rhs.x3)
    }
}

impl Neg for PgVector {
    type Output = PgVector;
    fn neg(self) -> PgVector {
        PgVector::new(-self.x1, -self.x2, -self.x3)
    }
}

impl Mul<PgVector> for f64 {
    type Output = PgVector;
    fn mul(self, v: PgVector) -> PgVector {
        v.scale(self)
    }
}

impl Mul<f64> for PgVector {
    type Output = PgVector;
    fn mul(self, k: f64) -> PgVector {
        self.scale(k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CausalClass {
    NonIsotropic,
    SpacelikeIsotropic,
    TimelikeIsotropic,
    LightlikeIsotropic,
    Zero,
}

/// Element of the similarity group `H8`.
///
/// `b = r = 1` restricts to the proper motions `B6`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityMotion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub r: f64,
    /// Hyperbolic angle of the boost in the isotropic plane.
    pub theta: f64,
}

impl SimilarityMotion {
    pub fn identity() -> Self {
        SimilarityMotion {
            a: 0.0,
            b: 1.0,
            c: 0.0,
            d: 0.0,
            e: 0.0,
            f: 0.0,
            r: 1.0,
            theta: 0.0,
        }
    }

    pub fn boost(theta: f64) -> Self {
        SimilarityMotion {
            theta,
            ..Self::identity()
        }
    }

    pub fn is_isometry(&self) -> bool {
        self.b == 1.0 && self.r == 1.0
    }

    /// Acts on point coordinates.
    pub fn apply_point(&self, p: &PgVector) -> PgVector {
        self.apply_linear(p) + PgVector::new(self.a, self.c, self.e)
    }

    /// Acts on a vector (point pair): the translation part `a, c, e` is dropped.
    pub fn apply_linear(&self, p: &PgVector) -> PgVector {
        let (ch, sh) = (self.theta.cosh(), self.theta.sinh());
        PgVector::new(
            self.b * p.x1,
            self.d * p.x1 + self.r * ch * p.x2 + self.r * sh * p.x3,
            self.f * p.x1 + self.r * sh * p.x2 + self.r * ch * p.x3,
        )
    }
}
