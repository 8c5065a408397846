//! Cumulative quadrature on uniform time grids.
//!
//! Everything downstream of the Volterra solver works with functions
//! tabulated at t_n = n·h. The solvers also tabulate first (and second)
//! derivatives, which the cumulative rules here exploit: the corrected
//! trapezoid with endpoint derivatives is O(h^4) globally, and a
//! quintic-Hermite correction applied to the first panels keeps *relative*
//! accuracy for integrals that vanish like t^3 at the origin.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Number of grid steps covering `t_max`: the smallest `n` with n·h ≥ t_max
/// (up to round-off). The resulting grid is t_0 = 0 … t_n = n·h.
pub(crate) fn steps_covering(t_max: f64, h: f64) -> Result<usize> {
    if !(h > 0.0) || !h.is_finite() {
        return Err(Error::domain(format!("step h must be positive, got {h}")));
    }
    if !(t_max > 0.0) || !t_max.is_finite() {
        return Err(Error::domain(format!(
            "t_max must be positive, got {t_max}"
        )));
    }
    let n = (t_max / h - 1e-9).ceil().max(1.0);
    if n > 5e7 {
        return Err(Error::domain(format!(
            "grid of {n:.0} steps is unreasonably large (t_max = {t_max}, h = {h})"
        )));
    }
    Ok(n as usize)
}

/// Cumulative trapezoid rule: out[n] = ∫₀^{nh} y dt, O(h²).
pub fn cumtrapz(y: &[f64], h: f64) -> Vec<f64> {
    let mut out = vec![0.0; y.len()];
    let mut acc = 0.0;
    for i in 1..y.len() {
        acc += 0.5 * h * (y[i - 1] + y[i]);
        out[i] = acc;
    }
    out
}

/// Cumulative corrected trapezoid (two-point cubic Hermite): per panel
/// ∫ = h/2·(f₀+f₁) + h²/12·(f₀′−f₁′), exact for cubics, O(h⁴) globally.
pub fn cum_hermite(f: &[f64], fp: &[f64], h: f64) -> Vec<f64> {
    debug_assert_eq!(f.len(), fp.len());
    let mut out = vec![0.0; f.len()];
    let mut acc = 0.0;
    for i in 1..f.len() {
        acc += 0.5 * h * (f[i - 1] + f[i]) + h * h / 12.0 * (fp[i - 1] - fp[i]);
        out[i] = acc;
    }
    out
}

/// Replace the first two cumulative values of `out` by quintic-Hermite
/// panel integrals (exact for quintics): with second derivatives available
/// the head of the integral is accurate enough that quantities growing as
/// t³ keep six relative digits already at t = h.
///
/// Panel rule: ∫₀^h = h/2·(f₀+f₁) + h²/10·(f₀′−f₁′) + h³/120·(f₀″+f₁″).
pub fn quintic_head(out: &mut [f64], f: &[f64], fp: &[f64], fpp: &[f64], h: f64) {
    let panels = out.len().saturating_sub(1).min(2);
    if panels == 0 {
        return;
    }
    let old_last = out[panels];
    let mut acc = 0.0;
    for i in 1..=panels {
        acc += 0.5 * h * (f[i - 1] + f[i])
            + h * h / 10.0 * (fp[i - 1] - fp[i])
            + h * h * h / 120.0 * (fpp[i - 1] + fpp[i]);
        out[i] = acc;
    }
    // Shift the remainder of the series so later panels keep their own sums.
    let shift = acc - old_last;
    if shift != 0.0 {
        for v in out.iter_mut().skip(panels + 1) {
            *v += shift;
        }
    }
}

/// Cumulative oscillatory integral q(t_n) = ∫₀^{t_n} g(u)·e^{−iΩu} du with
/// g linear on each panel; the oscillatory weight is integrated exactly, so
/// the rule stays accurate for Ωh = O(1) where sampled rules alias.
pub fn oscillatory_cumint(g: &[f64], h: f64, omega: f64) -> Vec<Complex64> {
    let n = g.len();
    let mut out = vec![Complex64::ZERO; n];
    if n < 2 {
        return out;
    }
    let iw = Complex64::new(0.0, omega);
    let e = (-iw * h).exp();
    // Panel moments mu0 = ∫₀^h e^{−iΩu}du, mu1 = ∫₀^h u·e^{−iΩu}du.
    let (mu0, mu1) = if (omega * h).abs() > 1e-8 {
        let mu0 = (Complex64::ONE - e) / iw;
        let mu1 = (mu0 - e * h) / iw;
        (mu0, mu1)
    } else {
        // Series for Ωh → 0, error O((Ωh)² h) below round-off at the branch.
        let mu0 = Complex64::new(h, 0.0) - iw * (0.5 * h * h);
        let mu1 = Complex64::new(0.5 * h * h, 0.0) - iw * (h * h * h / 3.0);
        (mu0, mu1)
    };
    let mut acc = Complex64::ZERO;
    let mut phase = Complex64::ONE;
    for m in 0..n - 1 {
        if m % 256 == 0 {
            // Re-anchor the running phase so round-off does not accumulate
            // over long grids.
            phase = (-iw * (m as f64 * h)).exp();
        }
        acc += phase * (mu0 * g[m] + mu1 * ((g[m + 1] - g[m]) / h));
        phase *= e;
        out[m + 1] = acc;
    }
    out
}

/// Every `step`-th element, starting at index 0.
pub(crate) fn downsample(v: &[f64], step: usize) -> Vec<f64> {
    v.iter().step_by(step).copied().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn grid(n: usize, h: f64) -> Vec<f64> {
        (0..=n).map(|i| i as f64 * h).collect()
    }

    #[test]
    fn steps_covering_rounds_up() {
        assert_eq!(steps_covering(20.0, 0.02).unwrap(), 1000);
        assert_eq!(steps_covering(1.0, 0.3).unwrap(), 4);
        assert!(steps_covering(1.0, 0.0).is_err());
        assert!(steps_covering(-1.0, 0.1).is_err());
    }

    #[test]
    fn cumtrapz_is_exact_for_linear() {
        let h = 0.1;
        let t = grid(50, h);
        let y: Vec<f64> = t.iter().map(|t| 3.0 * t - 1.0).collect();
        let c = cumtrapz(&y, h);
        for (i, t) in t.iter().enumerate() {
            assert_abs_diff_eq!(c[i], 1.5 * t * t - t, epsilon = 1e-13);
        }
    }

    #[test]
    fn cum_hermite_is_exact_for_cubics() {
        let h = 0.25;
        let t = grid(40, h);
        let f: Vec<f64> = t.iter().map(|t| t * t * t - 2.0 * t * t + 0.5).collect();
        let fp: Vec<f64> = t.iter().map(|t| 3.0 * t * t - 4.0 * t).collect();
        let c = cum_hermite(&f, &fp, h);
        for (i, t) in t.iter().enumerate() {
            let exact = 0.25 * t.powi(4) - 2.0 / 3.0 * t.powi(3) + 0.5 * t;
            assert_abs_diff_eq!(c[i], exact, epsilon = 1e-11 * (1.0 + exact.abs()));
        }
    }

    #[test]
    fn quintic_head_is_exact_for_quintics() {
        let h = 0.2;
        let t = grid(10, h);
        let f: Vec<f64> = t.iter().map(|t| t.powi(5)).collect();
        let fp: Vec<f64> = t.iter().map(|t| 5.0 * t.powi(4)).collect();
        let fpp: Vec<f64> = t.iter().map(|t| 20.0 * t.powi(3)).collect();
        let mut c = cum_hermite(&f, &fp, h);
        quintic_head(&mut c, &f, &fp, &fpp, h);
        for i in 1..=2 {
            let exact = t[i].powi(6) / 6.0;
            assert_abs_diff_eq!(c[i], exact, epsilon = 1e-14);
        }
        // Later entries keep consistency: c[n] - c[2] is unchanged by the head fix.
        let exact3 = t[3].powi(6) / 6.0;
        assert!((c[3] - exact3).abs() < 1e-4);
    }

    #[test]
    fn quintic_head_improves_cos_head() {
        // ∫₀^t (1 − cos u) du = t − sin t vanishes like t³/6; the corrected
        // head must track it to ~1e-6 relative at t = h.
        let h = 0.02;
        let t = grid(4, h);
        let f: Vec<f64> = t.iter().map(|t| 1.0 - t.cos()).collect();
        let fp: Vec<f64> = t.iter().map(|t| t.sin()).collect();
        let fpp: Vec<f64> = t.iter().map(|t| t.cos()).collect();
        let mut c = cum_hermite(&f, &fp, h);
        let plain_rel = ((c[1] - (t[1] - t[1].sin())) / (t[1] - t[1].sin())).abs();
        quintic_head(&mut c, &f, &fp, &fpp, h);
        let fixed_rel = ((c[1] - (t[1] - t[1].sin())) / (t[1] - t[1].sin())).abs();
        assert!(plain_rel > 1e-6, "plain head unexpectedly good: {plain_rel:.3e}");
        assert!(fixed_rel < 1e-9, "quintic head too coarse: {fixed_rel:.3e}");
    }

    #[test]
    fn oscillatory_cumint_matches_closed_form() {
        // ∫₀^t sin(u) e^{−iΩu} du has the closed form
        //   [e^{−iΩu}(−cos u − iΩ sin u)]₀^t + ... ; compare against the
        // elementary antiderivative computed with complex exponentials.
        let h = 0.01;
        let n = 700;
        let t: Vec<f64> = grid(n, h);
        let g: Vec<f64> = t.iter().map(|t| t.sin()).collect();
        for &omega in &[0.0, 0.3, 1.0, 7.7, 40.0] {
            let q = oscillatory_cumint(&g, h, omega);
            for &i in &[1usize, 10, 350, 700] {
                let tt = t[i];
                let exact = exact_sin_transform(omega, tt);
                let err = (q[i] - exact).norm();
                // Linear interpolation of sin per panel: error O(h²) locally.
                assert!(
                    err < 2e-4 * (1.0 + exact.norm()),
                    "omega={omega} t={tt}: err={err:.3e}"
                );
            }
        }
    }

    fn exact_sin_transform(omega: f64, t: f64) -> Complex64 {
        // ∫₀^t sin(u) e^{−iΩu} du via sin u = (e^{iu} − e^{−iu}) / 2i.
        let int_exp = |a: Complex64, t: f64| -> Complex64 {
            // ∫₀^t e^{au} du, a ≠ 0
            ((a * t).exp() - 1.0) / a
        };
        let i = Complex64::I;
        let a1 = i * (1.0 - omega);
        let a2 = i * (-1.0 - omega);
        let term1 = if a1.norm() < 1e-12 {
            Complex64::new(t, 0.0)
        } else {
            int_exp(a1, t)
        };
        let term2 = if a2.norm() < 1e-12 {
            Complex64::new(t, 0.0)
        } else {
            int_exp(a2, t)
        };
        (term1 - term2) / (2.0 * i)
    }
}
