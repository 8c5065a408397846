//! Adaptive Gauss–Kronrod quadrature over real intervals.
//!
//! One engine serves both real and complex integrands (complex values are
//! needed when the Laplace-domain kernel is evaluated on the Bromwich
//! contour). The rule is the classic 7/15 Gauss–Kronrod pair; intervals are
//! bisected worst-error-first, and the final sum runs left to right so the
//! result does not depend on the subdivision order.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Kronrod abscissae (positive half, descending), 15-point rule.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

/// Kronrod weights matching `XGK`.
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

/// Weights of the embedded 7-point Gauss rule (nodes XGK[1], XGK[3], ...).
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: Complex64,
    pub abs_error: f64,
    pub intervals: usize,
}

/// One 7/15 Gauss–Kronrod evaluation on [a, b]: returns the Kronrod value
/// and a conservative error estimate in the QUADPACK style.
pub(crate) fn gk15<F: Fn(f64) -> Complex64>(f: &F, a: f64, b: f64) -> (Complex64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut resk = WGK[7] * fc;
    let mut resg = WG[3] * fc;
    let mut samples = [Complex64::ZERO; 15];
    samples[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        samples[j] = f1;
        samples[14 - j] = f2;
        resk += WGK[j] * (f1 + f2);
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }

    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((samples[j] - reskh).norm() + (samples[14 - j] - reskh).norm());
    }
    resasc *= half.abs();

    let raw = ((resk - resg) * half).norm();
    let mut err = raw;
    if resasc != 0.0 && raw != 0.0 {
        err = resasc * f64::min(1.0, (200.0 * raw / resasc).powf(1.5));
    }
    (resk * half, err)
}

struct Interval {
    a: f64,
    b: f64,
    value: Complex64,
    error: f64,
}

/// Adaptively integrate a complex-valued function over [a, b] until the
/// summed error estimate drops below max(rel_tol·|value|, abs_tol).
pub fn integrate_complex<F: Fn(f64) -> Complex64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature> {
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::domain(format!(
            "integration interval [{a}, {b}] must be finite and ordered"
        )));
    }
    let (v0, e0) = gk15(&f, a, b);
    let mut parts = vec![Interval {
        a,
        b,
        value: v0,
        error: e0,
    }];
    loop {
        let total: Complex64 = parts.iter().map(|p| p.value).sum();
        let err: f64 = parts.iter().map(|p| p.error).sum();
        let target = f64::max(rel_tol * total.norm(), abs_tol);
        if err <= target {
            break;
        }
        if parts.len() >= max_intervals {
            return Err(Error::QuadratureNonConvergence {
                estimate: err,
                tolerance: target,
                intervals: parts.len(),
            });
        }
        // Split the interval with the largest error estimate. The linear
        // scan keeps selection deterministic.
        let mut worst = 0;
        for (i, p) in parts.iter().enumerate() {
            if p.error > parts[worst].error {
                worst = i;
            }
        }
        let Interval { a, b, .. } = parts[worst];
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            // The interval is at round-off width; accept what we have.
            let err: f64 = parts.iter().map(|p| p.error).sum();
            return Ok(ordered_sum(parts, err));
        }
        let (v1, e1) = gk15(&f, a, mid);
        let (v2, e2) = gk15(&f, mid, b);
        parts[worst] = Interval {
            a,
            b: mid,
            value: v1,
            error: e1,
        };
        parts.push(Interval {
            a: mid,
            b,
            value: v2,
            error: e2,
        });
    }
    let err: f64 = parts.iter().map(|p| p.error).sum();
    Ok(ordered_sum(parts, err))
}

fn ordered_sum(mut parts: Vec<Interval>, err: f64) -> Quadrature {
    parts.sort_by(|x, y| x.a.partial_cmp(&y.a).unwrap());
    let value = parts.iter().map(|p| p.value).sum();
    Quadrature {
        value,
        abs_error: err,
        intervals: parts.len(),
    }
}

/// Real-valued adaptive integration; thin wrapper over the complex engine.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
    max_intervals: usize,
) -> Result<(f64, f64)> {
    let q = integrate_complex(
        |x| Complex64::new(f(x), 0.0),
        a,
        b,
        rel_tol,
        abs_tol,
        max_intervals,
    )?;
    Ok((q.value.re, q.abs_error))
}
