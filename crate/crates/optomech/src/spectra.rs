//! Bath spectral densities and the kernels derived from them.
//!
//! The bath family is σ(Ω) = γ Ω (Ω/Ω_C)^{k−1} e^{−Ω/Ω_C} with exponent
//! presets k = 1/2 (sub-Ohmic), 1 (Ohmic), 2 (super-Ohmic); all frequencies
//! are measured in units of the mechanical frequency. Three derived
//! quantities drive the dynamics:
//!
//! * the friction kernel Σ(t) ∝ ∫ dΩ σ(Ω) cos(Ωt)/Ω,
//! * its Laplace transform Σ̃(s) ∝ ∫ dΩ σ(Ω)/Ω · s/(Ω² + s²),
//! * the difference kernel C_k(t), a scaled sine transform of σ.
//!
//! Because σ is a power times an exponential, Σ, C_k and their first two
//! running moments all have closed forms through complex powers of
//! (1 − iΩ_C t); those forms are used everywhere performance matters, with
//! adaptive quadrature kept as an independent fallback and cross-check.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma;
use std::f64::consts::{FRAC_2_PI, PI};

use crate::error::{Error, Result};
use crate::quad;

/// Normalization convention tying the discrete couplings κ_j² to σ(Ω).
///
/// `TwoOverPi` sets Σ_j κ_j² = (2/π)∫σ dΩ, which makes the friction kernel
/// Σ(t) = (2/π)∫ dΩ σ cos(Ωt)/Ω; `Unit` drops the 2/π prefactor in both
/// places. The same switch scales the bath term of the nonlinearity, so an
/// oracle and a continuum run under one convention are directly comparable.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Convention {
    #[default]
    TwoOverPi,
    Unit,
}

impl Convention {
    /// Multiplicative factor applied to every ∫σ dΩ continuum sum.
    pub fn factor(self) -> f64 {
        match self {
            Convention::TwoOverPi => FRAC_2_PI,
            Convention::Unit => 1.0,
        }
    }
}

/// Normalization of the difference kernel C_k.
///
/// `CutoffNormalized` divides the sine transform by Ω_C, producing the
/// dimensionless closed forms whose amplitude stays O(γΩ_C) for every
/// cutoff (and which vanish as Ω_C → ∞ at fixed t > 0); `Spectral` is the
/// plain sine transform ∫σ sin(Ωt) dΩ, the scaling under which the bath
/// term of the nonlinearity equals the literal mode-sum expression.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KernelScaling {
    #[default]
    CutoffNormalized,
    Spectral,
}

/// Spectral exponent k of σ(Ω) ∝ Ω^k near the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralExponent {
    SubOhmic,
    Ohmic,
    SuperOhmic,
    General(f64),
}

impl SpectralExponent {
    pub fn value(self) -> f64 {
        match self {
            SpectralExponent::SubOhmic => 0.5,
            SpectralExponent::Ohmic => 1.0,
            SpectralExponent::SuperOhmic => 2.0,
            SpectralExponent::General(k) => k,
        }
    }

    pub fn label(self) -> String {
        match self {
            SpectralExponent::SubOhmic => "subohmic".to_string(),
            SpectralExponent::Ohmic => "ohmic".to_string(),
            SpectralExponent::SuperOhmic => "superohmic".to_string(),
            SpectralExponent::General(k) => format!("k{k}"),
        }
    }
}

/// The (k, γ, Ω_C) triple defining one bath.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathSpectrum {
    pub exponent: SpectralExponent,
    /// Dissipation rate γ ≥ 0 in units of the mechanical frequency.
    pub gamma: f64,
    /// Cutoff Ω_C > 0 in units of the mechanical frequency.
    pub cutoff: f64,
}

impl BathSpectrum {
    pub fn new(exponent: SpectralExponent, gamma: f64, cutoff: f64) -> Result<Self> {
        if !(exponent.value() > 0.0) || !exponent.value().is_finite() {
            return Err(Error::domain(format!(
                "spectral exponent must be positive, got {}",
                exponent.value()
            )));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return Err(Error::domain(format!(
                "dissipation rate gamma must be nonnegative, got {gamma}"
            )));
        }
        if !(cutoff > 0.0) || !cutoff.is_finite() {
            return Err(Error::domain(format!(
                "cutoff must be strictly positive, got {cutoff}"
            )));
        }
        Ok(BathSpectrum {
            exponent,
            gamma,
            cutoff,
        })
    }

    pub fn sub_ohmic(gamma: f64, cutoff: f64) -> Result<Self> {
        Self::new(SpectralExponent::SubOhmic, gamma, cutoff)
    }

    pub fn ohmic(gamma: f64, cutoff: f64) -> Result<Self> {
        Self::new(SpectralExponent::Ohmic, gamma, cutoff)
    }

    pub fn super_ohmic(gamma: f64, cutoff: f64) -> Result<Self> {
        Self::new(SpectralExponent::SuperOhmic, gamma, cutoff)
    }

    pub fn k(&self) -> f64 {
        self.exponent.value()
    }

    /// σ(Ω) = γ Ω_C (Ω/Ω_C)^k e^{−Ω/Ω_C}.
    pub fn spectral_density(&self, omega: f64) -> Result<f64> {
        if omega < 0.0 || !omega.is_finite() {
            return Err(Error::domain(format!(
                "spectral density requires omega >= 0, got {omega}"
            )));
        }
        let x = omega / self.cutoff;
        Ok(self.gamma * self.cutoff * x.powf(self.k()) * (-x).exp())
    }

    /// Total spectral weight ∫₀^∞ σ dΩ = γ Γ(k+1) Ω_C².
    pub fn spectral_mass_total(&self) -> f64 {
        self.gamma * gamma(self.k() + 1.0) * self.cutoff * self.cutoff
    }

    /// Truncated spectral weight ∫₀^X σ dΩ by adaptive quadrature.
    pub fn spectral_mass(&self, up_to: f64) -> Result<f64> {
        if !(up_to > 0.0) {
            return Err(Error::domain(format!(
                "truncation frequency must be positive, got {up_to}"
            )));
        }
        if self.gamma == 0.0 {
            return Ok(0.0);
        }
        let (v, _) = quad::integrate(
            |omega| self.spectral_density(omega).unwrap_or(0.0),
            0.0,
            up_to,
            1e-12,
            1e-14 * self.spectral_mass_total(),
            4000,
        )?;
        Ok(v)
    }

    /// Difference kernel C_k(t): the sine transform of σ divided by the
    /// cutoff, evaluated in closed form,
    ///
    ///   C_k(t) = γ Γ(k+1) Ω_C · Im[(1 − iΩ_C t)^{−(k+1)}],
    ///
    /// which reduces to, e.g., 2γtΩ_C²/(1 + t²Ω_C²)² for the Ohmic preset.
    /// Antisymmetric in t; O(1) cost for every k > 0.
    pub fn kernel_c(&self, t: f64) -> f64 {
        self.kernel_c_scaled(t, KernelScaling::CutoffNormalized)
    }

    /// C_k under a chosen normalization (see [`KernelScaling`]).
    pub fn kernel_c_scaled(&self, t: f64, scaling: KernelScaling) -> f64 {
        let p = self.k() + 1.0;
        let z = Complex64::new(1.0, -self.cutoff * t);
        let amp = self.gamma * gamma(p) * self.scaling_amplitude(scaling);
        amp * z.powf(-p).im
    }

    fn scaling_amplitude(&self, scaling: KernelScaling) -> f64 {
        match scaling {
            KernelScaling::CutoffNormalized => self.cutoff,
            KernelScaling::Spectral => self.cutoff * self.cutoff,
        }
    }

    /// Quadrature fallback for C_k: half-period cells of sin(Ωt), summed
    /// with repeated-averaging acceleration of the alternating tail.
    /// Returns the cutoff-normalized value, matching [`kernel_c`].
    pub fn kernel_c_quadrature(&self, t: f64, tol: f64) -> Result<f64> {
        if t == 0.0 || self.gamma == 0.0 {
            return Ok(0.0);
        }
        if t < 0.0 {
            return Ok(-self.kernel_c_quadrature(-t, tol)?);
        }
        let scale = self.gamma * gamma(self.k() + 1.0) * self.cutoff * self.cutoff;
        let omega_hi = 60.0 * self.cutoff * (1.0 + self.k() / 4.0);
        let half_period = PI / t;
        let integrand = |omega: f64| self.spectral_density(omega).unwrap() * (omega * t).sin();

        if half_period >= omega_hi {
            // Less than one oscillation inside the spectral support: plain
            // adaptive quadrature is enough.
            let (v, _) = quad::integrate(integrand, 0.0, omega_hi, tol, tol * scale, 4000)?;
            return Ok(v / self.cutoff);
        }

        let mut partials: Vec<f64> = Vec::new();
        let mut acc = 0.0;
        let max_cells = 400_000usize;
        let mut cell = 0usize;
        loop {
            let a = cell as f64 * half_period;
            if a >= omega_hi || cell >= max_cells {
                break;
            }
            let b = (a + half_period).min(omega_hi);
            let (v, _) = quad::integrate(integrand, a, b, 1e-9, 1e-13 * scale, 200)?;
            acc += v;
            partials.push(acc);
            cell += 1;
            // Accelerate the alternating tail once enough cells are in.
            if partials.len() >= 16 {
                let window = &partials[partials.len() - 12..];
                let (est, spread) = repeated_averages(window);
                if spread <= tol * est.abs().max(1e-3 * scale) {
                    return Ok(est / self.cutoff);
                }
            }
        }
        if cell >= max_cells {
            return Err(Error::QuadratureNonConvergence {
                estimate: f64::NAN,
                tolerance: tol,
                intervals: cell,
            });
        }
        // Ran off the spectral support: the plain sum is already converged.
        Ok(acc / self.cutoff)
    }

    /// Friction kernel Σ(t) = c·γ Γ(k) Ω_C · Re[(1 − iΩ_C t)^{−k}], with c
    /// the convention factor; equals c·∫ dΩ σ(Ω) cos(Ωt)/Ω.
    pub fn memory_sigma(&self, t: f64, convention: Convention) -> f64 {
        let k = self.k();
        let z = Complex64::new(1.0, -self.cutoff * t);
        convention.factor() * self.gamma * gamma(k) * self.cutoff * z.powf(-k).re
    }

    /// Laplace-domain friction kernel Σ̃(s) for real s > 0 under the default
    /// convention and tolerance (1e−10 relative). See [`laplace_kernel_at`]
    /// for the general entry point.
    pub fn laplace_kernel(&self, s: f64) -> Result<f64> {
        if !(s > 0.0) {
            return Err(Error::domain(format!(
                "laplace kernel requires s > 0 on the real path, got {s}"
            )));
        }
        Ok(self
            .laplace_kernel_at(Complex64::new(s, 0.0), Convention::default(), 1e-10)?
            .re)
    }

    /// Σ̃(s) = c·∫₀^∞ dΩ σ(Ω)/Ω · s/(Ω² + s²) for Re(s) > 0, by adaptive
    /// quadrature with a power substitution that removes the sub-Ohmic
    /// endpoint singularity and interval seeds at the Lorentzian peak.
    pub fn laplace_kernel_at(
        &self,
        s: Complex64,
        convention: Convention,
        rel_tol: f64,
    ) -> Result<Complex64> {
        if !(s.re > 0.0) {
            return Err(Error::domain(format!(
                "laplace kernel requires Re(s) > 0, got {s}"
            )));
        }
        if self.gamma == 0.0 {
            return Ok(Complex64::ZERO);
        }
        let k = self.k();
        let wc = self.cutoff;
        let smod = s.norm();
        // integrand in Ω: γ (Ω/Ω_C)^{k-1} e^{-Ω/Ω_C} · s/(Ω² + s²)
        let f = |omega: f64| -> Complex64 {
            let x = omega / wc;
            let weight = self.gamma * x.powf(k - 1.0) * (-x).exp();
            weight * s / (omega * omega + s * s)
        };
        let omega_hi = 45.0 * wc + 4.0 * smod;

        // Segment boundaries: resolve the Lorentzian peak near |s| and the
        // exponential rollover near Ω_C.
        let mut cuts = vec![0.0, 0.5 * smod, smod, 2.0 * smod, wc, 4.0 * wc, omega_hi];
        cuts.retain(|&c| c >= 0.0 && c <= omega_hi);
        cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        cuts.dedup_by(|a, b| (*a - *b).abs() < 1e-12 * omega_hi);

        let mut total = Complex64::ZERO;
        let mut err_total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            if b - a < 1e-300 {
                continue;
            }
            let q = if a == 0.0 && k < 1.0 {
                // Substitute u = Ω^k: the transformed integrand is regular
                // at the origin for every k in (0, 1).
                let bk = b.powf(k);
                quad::integrate_complex(
                    |u| {
                        let omega = u.powf(1.0 / k);
                        f(omega) * (omega / (k * u))
                    },
                    1e-280,
                    bk,
                    rel_tol,
                    0.0,
                    4000,
                )?
            } else {
                quad::integrate_complex(f, a, b, rel_tol, 0.0, 4000)?
            };
            total += q.value;
            err_total += q.abs_error;
        }
        if err_total > 10.0 * rel_tol * total.norm() + 1e-300 {
            return Err(Error::QuadratureNonConvergence {
                estimate: err_total,
                tolerance: rel_tol * total.norm(),
                intervals: 0,
            });
        }
        Ok(convention.factor() * total)
    }

    // ------------------------------------------------------------------
    // Closed-form running moments. The convolution stages integrate the
    // kernels against piecewise-linear factors, which needs, per panel,
    // ∫ K and ∫ s·K over [τ₁, τ₂]; both reduce to the two primitives below.
    // ------------------------------------------------------------------

    /// ∫₀^τ C_k(s) ds in closed form (even in τ).
    pub fn kernel_c_cumint(&self, tau: f64, scaling: KernelScaling) -> f64 {
        let p = self.k() + 1.0;
        let amp = self.gamma * gamma(p) * self.scaling_amplitude(scaling) * self.cutoff;
        amp * cint(p, self.cutoff, tau).im
    }

    /// ∫₀^τ s·C_k(s) ds in closed form (odd in τ).
    pub fn kernel_c_first_moment(&self, tau: f64, scaling: KernelScaling) -> f64 {
        let p = self.k() + 1.0;
        let amp = self.gamma * gamma(p) * self.scaling_amplitude(scaling) * self.cutoff;
        amp * smoment(p, self.cutoff, tau).im
    }

    /// ∫₀^τ Σ(s) ds in closed form.
    pub fn memory_cumint(&self, tau: f64, convention: Convention) -> f64 {
        let k = self.k();
        let amp = convention.factor() * self.gamma * gamma(k) * self.cutoff;
        amp * cint(k, self.cutoff, tau).re
    }

    /// ∫₀^τ s·Σ(s) ds in closed form.
    pub fn memory_first_moment(&self, tau: f64, convention: Convention) -> f64 {
        let k = self.k();
        let amp = convention.factor() * self.gamma * gamma(k) * self.cutoff;
        amp * smoment(k, self.cutoff, tau).re
    }
}

/// ∫₀^τ (1 − iWs)^{−p} ds.
fn cint(p: f64, w: f64, tau: f64) -> Complex64 {
    let x = Complex64::new(0.0, -w * tau); // = −iWτ
    if p == 0.0 {
        return Complex64::new(tau, 0.0);
    }
    if x.norm() < 1e-4 {
        // Series around τ = 0 avoids cancellation in the closed form.
        let q = 1.0 - p;
        let c1 = (q - 1.0) / 2.0;
        let c2 = (q - 1.0) * (q - 2.0) / 6.0;
        let c3 = (q - 1.0) * (q - 2.0) * (q - 3.0) / 24.0;
        return tau * (Complex64::ONE + x * (c1 + x * (c2 + x * c3)));
    }
    let z = Complex64::new(1.0, -w * tau);
    if (p - 1.0).abs() < 1e-12 {
        // ∫ (1 − iWs)^{-1} ds = (i/W)·ln(1 − iWτ); principal branch is safe
        // because Re(1 − iWτ) = 1 > 0.
        return Complex64::new(0.0, 1.0 / w) * z.ln();
    }
    (z.powf(1.0 - p) - 1.0) / (Complex64::new(0.0, w) * (p - 1.0))
}

/// ∫₀^τ s (1 − iWs)^{−p} ds = [cint(p) − cint(p−1)] / (iW).
fn smoment(p: f64, w: f64, tau: f64) -> Complex64 {
    let x = Complex64::new(0.0, -w * tau);
    if x.norm() < 1e-4 {
        // Direct series: τ²[1/2 − px/3 + p(p+1)x²/8 − p(p+1)(p+2)x³/30].
        let c1 = -p / 3.0;
        let c2 = p * (p + 1.0) / 8.0;
        let c3 = -p * (p + 1.0) * (p + 2.0) / 30.0;
        let half = Complex64::new(0.5, 0.0);
        return tau * tau * (half + x * (c1 + x * (c2 + x * c3)));
    }
    (cint(p, w, tau) - cint(p - 1.0, w, tau)) / Complex64::new(0.0, w)
}

/// Repeated averaging (Euler-style acceleration) of a partial-sum window;
/// returns the accelerated estimate and the spread of the last averaging
/// level as an error proxy.
fn repeated_averages(window: &[f64]) -> (f64, f64) {
    let mut row = window.to_vec();
    let mut prev_head = row[row.len() - 1];
    while row.len() > 1 {
        for i in 0..row.len() - 1 {
            row[i] = 0.5 * (row[i] + row[i + 1]);
        }
        row.pop();
        prev_head = if row.len() > 1 { row[row.len() - 1] } else { prev_head };
    }
    (row[0], (row[0] - prev_head).abs())
}
