//! Finite-difference stencils and adaptive Simpson quadrature.

/// Offsets and weights of the fourth-order central stencils, with the
/// denominator multiplying `h^order`.
const STENCILS: [(&[i32], &[f64], f64); 4] = [
    (&[-2, -1, 1, 2], &[1.0, -8.0, 8.0, -1.0], 12.0),
    (&[-2, -1, 0, 1, 2], &[-1.0, 16.0, -30.0, 16.0, -1.0], 12.0),
    (
        &[-3, -2, -1, 1, 2, 3],
        &[1.0, -8.0, 13.0, -13.0, 8.0, -1.0],
        8.0,
    ),
    (
        &[-3, -2, -1, 0, 1, 2, 3],
        &[-1.0, 12.0, -39.0, 56.0, -39.0, 12.0, -1.0],
        6.0,
    ),
];

/// Widest stencil reach in units of the step.
pub const STENCIL_REACH: f64 = 3.0;

/// Round-off balanced step for a derivative of `order` evaluated near `s`.
///
/// The extrapolated stencils are sixth-order accurate, so truncation and
/// cancellation error balance at `eps^(1/(6 + order))`.
pub fn balanced_step(order: usize, s: f64) -> f64 {
    f64::EPSILON.powf(1.0 / (6.0 + order as f64)) * s.abs().max(1.0)
}

fn stencil<T, F>(f: &F, s: f64, order: usize, h: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    let (offsets, weights, den) = STENCILS[order - 1];
    let mut acc: Option<T> = None;
    for (&o, &w) in offsets.iter().zip(weights) {
        let term = f(s + o as f64 * h) * w;
        acc = Some(match acc {
            Some(a) => a + term,
            None => term,
        });
    }
    acc.expect("stencils are non-empty") * (1.0 / (den * h.powi(order as i32)))
}

/// Central difference of order 1..=4 with one Richardson level over the
/// steps `h` and `h/2`.
pub fn richardson_derivative<T, F>(f: &F, s: f64, order: usize, h: f64) -> T
where
    T: Copy + std::ops::Add<Output = T> + std::ops::Mul<f64, Output = T>,
    F: Fn(f64) -> T,
{
    assert!(
        (1..=4).contains(&order),
        "derivative order {order} unsupported"
    );
    let coarse = stencil(f, s, order, h);
    let fine = stencil(f, s, order, 0.5 * h);
    fine * (16.0 / 15.0) + coarse * (-1.0 / 15.0)
}

/// Maximum bisection depth of [`adaptive_simpson`].
pub const SIMPSON_MAX_DEPTH: u32 = 40;

/// Adaptive Simpson quadrature of `f` over `[a, b]` to absolute tolerance
/// `tol`. Errors raised by `f` abort the integration.
pub fn adaptive_simpson<E, F>(f: &mut F, a: f64, b: f64, tol: f64) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    if a == b {
        return Ok(0.0);
    }
    let fa = f(a)?;
    let fb = f(b)?;
    let m = 0.5 * (a + b);
    let fm = f(m)?;
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, SIMPSON_MAX_DEPTH)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<E, F>(
    f: &mut F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, E>
where
    F: FnMut(f64) -> Result<f64, E>,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm)?;
    let frm = f(rm)?;
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    Ok(
        simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)?
            + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)?,
    )
}
