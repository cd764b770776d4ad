//! Time-dependent Green's function for thermal Comptonization: the exact
//! closed solution, its Laplace-transform cross-check, photon-conservation
//! verification, and convolution against tabulated initial spectra.

use crate::confluent::{whittaker_m, whittaker_w, whittaker_w_log, WhittakerIndices};
use crate::gamma::{gamma_ratio, near_nonpositive_integer};
use crate::index_integral::x_ordering;
use crate::quad::integrate;
use crate::{c, cr, Complex, Error, Result};
use std::f64::consts::PI;

/// Dimensionless Green's-function arguments: photon energy x = ε/kTe, initial
/// energy x₀ = ε₀/kTe, and the scattering-time variable y.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GreensParams {
    pub x: f64,
    pub x0: f64,
    pub y: f64,
}

/// Physical inputs. Energies share one unit (e.g. keV); `n_e` is an electron
/// number density in cm⁻³; times are in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams {
    pub epsilon: f64,
    pub epsilon0: f64,
    pub k_te: f64,
    pub n_e: f64,
    pub t: f64,
    pub t0: f64,
}

/// Thomson cross section, cm².
pub const SIGMA_T: f64 = 6.652_458_732_1e-25;
/// Speed of light, cm/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e10;
/// Electron rest energy, keV.
pub const M_E_C2_KEV: f64 = 510.998_950_69;

/// x = ε/kTe, x₀ = ε₀/kTe, y = n_e σ_T c (kTe/m_e c²)(t − t₀).
///
/// Energies are interpreted in keV for the kTe/mₑc² ratio.
pub fn to_dimensionless(p: &PhysicalParams) -> Result<GreensParams> {
    if !(p.k_te > 0.0) {
        return Err(Error::Domain(format!(
            "electron temperature must be positive, got kTe = {}",
            p.k_te
        )));
    }
    if p.t < p.t0 {
        return Err(Error::Domain("t must not precede t0".into()));
    }
    Ok(GreensParams {
        x: p.epsilon / p.k_te,
        x0: p.epsilon0 / p.k_te,
        y: p.n_e * SIGMA_T * SPEED_OF_LIGHT * (p.k_te / M_E_C2_KEV) * (p.t - p.t0),
    })
}

/// Spectral kernel shared by the Green's function and the κ=2 member of the
/// index-integral family:
/// u sinh(πu) / [(1+4u²)(9+4u²)] · W_{2,iu}(x₀) W_{2,iu}(x).
///
/// Log-assembled so it stays representable at large u, where sinh(πu) and the
/// W pair balance to an algebraic tail.
pub fn spectral_kernel(u: f64, x: f64, x0: f64) -> Result<Complex> {
    if u == 0.0 {
        return Ok(Complex::new(0.0, 0.0));
    }
    let kappa = cr(2.0);
    let iu = c(0.0, u);
    let (w1, s1) = whittaker_w_log(kappa, iu, x0)?;
    let (w2, s2) = whittaker_w_log(kappa, iu, x)?;
    let uu = u * u;
    let ln_weight = PI * u + (0.5 * (1.0 - (-2.0 * PI * u).exp())).ln()
        - ((1.0 + 4.0 * uu) * (9.0 + 4.0 * uu)).ln();
    let total = ln_weight + s1 + s2;
    if total > 700.0 {
        return Err(Error::NonFinite { at: u });
    }
    Ok(cr(u * total.exp()) * w1 * w2)
}

fn validate(g: &GreensParams) -> Result<()> {
    if !(g.x > 0.0 && g.x0 > 0.0) {
        return Err(Error::Domain(format!(
            "x and x0 must be positive, got x={}, x0={}",
            g.x, g.x0
        )));
    }
    if g.y < 0.0 {
        return Err(Error::Domain(format!("y must be non-negative, got {}", g.y)));
    }
    Ok(())
}

/// The exact time-dependent Green's function,
///
/// ```text
/// f_G = (32/π) e^{−9y/4} x₀⁻² x⁻² e^{(x₀−x)/2}
///           ∫₀^∞ e^{−u²y} u sinh(πu)/[(1+4u²)(9+4u²)] W_{2,iu}(x₀) W_{2,iu}(x) du
///       + e^{−x}/2 + (e^{−x−2y}/2)(2−x)(2−x₀)/(x₀ x) .
/// ```
///
/// y = 0 is the monoenergetic (delta-distribution) initial condition and is
/// rejected: it is not pointwise evaluable.
pub fn greens_function(g: &GreensParams, tol: f64) -> Result<f64> {
    validate(g)?;
    if g.y == 0.0 {
        return Err(Error::Domain(
            "y = 0 is the delta-function initial condition; convolve against a spectrum instead"
                .into(),
        ));
    }
    let u_max = (46.0 / g.y).sqrt().max(8.0);
    let j = integrate(
        |u| {
            spectral_kernel(u, g.x, g.x0)
                .map(|k| k * cr((-u * u * g.y).exp()))
                .unwrap_or(Complex::new(f64::NAN, f64::NAN))
        },
        0.0,
        u_max,
        tol,
    )?;
    let integral_term = 32.0 / PI * (-2.25 * g.y).exp() / (g.x0 * g.x0) / (g.x * g.x)
        * ((g.x0 - g.x) / 2.0).exp()
        * j.value.re;
    let equilibrium = 0.5 * (-g.x).exp();
    let transient =
        0.5 * (-g.x - 2.0 * g.y).exp() * (2.0 - g.x) * (2.0 - g.x0) / (g.x0 * g.x);
    Ok(integral_term + equilibrium + transient)
}

/// Laplace transform of the Green's function over y,
/// F(x,x₀,s) = x₀⁻² x⁻² e^{(x₀−x)/2} Γ(μ−3/2)/Γ(1+2μ) M_{2,μ}(x_min) W_{2,μ}(x_max),
/// μ = √(s+9/4).
pub fn laplace_transform(x: f64, x0: f64, s: Complex) -> Result<Complex> {
    if !(x > 0.0 && x0 > 0.0) {
        return Err(Error::Domain("x and x0 must be positive".into()));
    }
    let mu = (s + cr(2.25)).sqrt();
    let arg = mu - cr(1.5);
    if near_nonpositive_integer(arg, 1e-9) {
        return Err(Error::Pole { z: arg });
    }
    let (x_min, x_max) = x_ordering(x, x0);
    let kappa = cr(2.0);
    let ratio = gamma_ratio(arg, cr(1.0) + cr(2.0) * mu)?;
    let m = whittaker_m(WhittakerIndices::new(kappa, mu), x_min)?;
    let w = whittaker_w(WhittakerIndices::new(kappa, mu), x_max)?;
    Ok(cr(((x0 - x) / 2.0).exp() / (x0 * x0 * x * x)) * ratio * m * w)
}

/// Photon-conservation check: ∫₀^∞ x² f_G(x, x₀, y) dx, which the evolution
/// preserves at exactly 1. The x-range is truncated where the integrand falls
/// below 1e-14 of its peak, and the small-x endpoint is closed with a local
/// power-law model.
pub fn check_normalization(x0: f64, y: f64, tol: f64) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    let inner_tol = (0.1 * tol).max(1e-9);
    let weighted = |x: f64| -> Result<f64> {
        Ok(x * x * greens_function(&GreensParams { x, x0, y }, inner_tol)?)
    };
    let x_lo = 1e-4;
    // upper cutoff: scan outward until the integrand is negligible
    let mut peak: f64 = 0.0;
    for &x in &[0.5, 1.0, 2.0, x0, 2.0 * x0] {
        peak = peak.max(weighted(x)?.abs());
    }
    let mut x_hi = 20.0;
    while x_hi < 58.0 && weighted(x_hi)?.abs() > 1e-14 * peak {
        x_hi += 5.0;
    }
    let body = integrate(
        |x| cr(weighted(x).unwrap_or(f64::NAN)),
        x_lo,
        x_hi,
        tol,
    )?;
    // local power-law closure of [0, x_lo]
    let g1 = weighted(x_lo)?;
    let g2 = weighted(2.0 * x_lo)?;
    let endpoint = if g1 > 0.0 && g2 > 0.0 {
        let p = (g2 / g1).ln() / 2f64.ln();
        if p > -0.9 {
            g1 * x_lo / (p + 1.0)
        } else {
            0.0
        }
    } else {
        0.0
    };
    Ok(body.value.re + endpoint)
}

/// A tabulated initial photon spectrum: ascending (x₀, value) samples with
/// linear interpolation between them and zero outside the tabulated range.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedSpectrum {
    points: Vec<(f64, f64)>,
}

impl TabulatedSpectrum {
    /// Parse the two-column whitespace-separated text format; `#` starts a
    /// comment line; x₀ values must be ascending and positive.
    pub fn parse(text: &str) -> Result<Self> {
        let mut points = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut fields = line.split_whitespace();
            let (Some(a), Some(b)) = (fields.next(), fields.next()) else {
                return Err(Error::Domain(format!(
                    "spectrum line {}: expected two columns, got {line:?}",
                    lineno + 1
                )));
            };
            let x: f64 = a
                .parse()
                .map_err(|_| Error::Domain(format!("spectrum line {}: bad x0 {a:?}", lineno + 1)))?;
            let v: f64 = b
                .parse()
                .map_err(|_| Error::Domain(format!("spectrum line {}: bad value {b:?}", lineno + 1)))?;
            if x <= 0.0 {
                return Err(Error::Domain(format!(
                    "spectrum line {}: x0 must be positive, got {x}",
                    lineno + 1
                )));
            }
            if let Some(&(prev, _)) = points.last() {
                if x <= prev {
                    return Err(Error::Domain(format!(
                        "spectrum line {}: x0 values must be ascending ({x} after {prev})",
                        lineno + 1
                    )));
                }
            }
            points.push((x, v));
        }
        if points.len() < 2 {
            return Err(Error::Domain(
                "spectrum needs at least two samples".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn support(&self) -> (f64, f64) {
        (self.points[0].0, self.points[self.points.len() - 1].0)
    }

    /// Piecewise-linear interpolation, zero outside the support.
    pub fn value_at(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x < lo || x > hi {
            return 0.0;
        }
        let idx = self.points.partition_point(|&(px, _)| px <= x);
        if idx == 0 {
            return self.points[0].1;
        }
        if idx >= self.points.len() {
            return self.points[self.points.len() - 1].1;
        }
        let (x1, v1) = self.points[idx - 1];
        let (x2, v2) = self.points[idx];
        v1 + (v2 - v1) * (x - x1) / (x2 - x1)
    }
}

/// Spectrum at time y for an arbitrary initial distribution g(x₀):
/// f(x, y) = ∫ x₀² g(x₀) f_G(x, x₀, y) dx₀ over the tabulated support.
pub fn convolve_spectrum(
    spectrum: &TabulatedSpectrum,
    x: f64,
    y: f64,
    tol: f64,
) -> Result<f64> {
    if !(y > 0.0) {
        return Err(Error::Domain(format!("y must be positive, got {y}")));
    }
    let (lo, hi) = spectrum.support();
    let inner_tol = (0.1 * tol).max(1e-9);
    let r = integrate(
        |x0| {
            let fg = greens_function(&GreensParams { x, x0, y }, inner_tol).unwrap_or(f64::NAN);
            cr(x0 * x0 * spectrum.value_at(x0) * fg)
        },
        lo,
        hi,
        tol,
    )?;
    Ok(r.value.re)
}
