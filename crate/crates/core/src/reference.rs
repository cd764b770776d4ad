//! Cross-checks of prior-literature integrals of Whittaker-function products
//! against the quadrature engine — an independent trust anchor for the
//! special-function stack. Each check returns (quadrature LHS, closed RHS).

use crate::bessel::bessel_k;
use crate::confluent::{whittaker_w_relaxed, WhittakerIndices};
use crate::gamma::{cgamma, rgamma, sin_pi};
use crate::quad::{integrate, tanh_sinh};
use crate::{c, cr, Complex, Error, Result};
use std::f64::consts::PI;

/// Upper cutoff for the x-integrals. The W products have decayed to ~e⁻⁴⁰
/// there, and beyond this the connection-formula roundoff noise (which grows
/// like ε²eˣ in the product) would start to outweigh the true values.
const X_CUT: f64 = 40.0;
/// Below this the integrands are cut to zero: the x-powers they carry keep
/// the neglected mass far under the check tolerances for moderate indices,
/// and reciprocals of smaller x overflow.
const X_FLOOR: f64 = 1e-140;

fn w(kappa: Complex, mu: Complex, x: f64) -> Complex {
    whittaker_w_relaxed(WhittakerIndices::new(kappa, mu), x)
        .unwrap_or(Complex::new(f64::NAN, f64::NAN))
}

/// ∫₀^∞ W_{κ,μ}(x) W_{σ,μ}(x) dx/x against its closed gamma form (with the
/// restored factor of π). Valid for |Re μ| < 1/2, κ ≠ σ, 2μ not an integer.
pub fn check_eq70(kappa: Complex, sigma: Complex, mu: Complex) -> Result<(Complex, Complex)> {
    if mu.re.abs() >= 0.5 {
        return Err(Error::Domain(format!(
            "requires |Re mu| < 1/2, got Re mu = {}",
            mu.re
        )));
    }
    let two_mu = cr(2.0) * mu;
    if (two_mu - cr(two_mu.re.round())).norm() < 1e-9 {
        return Err(Error::Domain(
            "2 mu at an integer: sin(2 pi mu) vanishes".into(),
        ));
    }
    if (kappa - sigma).norm() < 1e-12 {
        return Err(Error::Domain("kappa = sigma is excluded".into()));
    }
    let f = |x: f64| {
        if x < X_FLOOR {
            return Complex::new(0.0, 0.0);
        }
        w(kappa, mu, x) * w(sigma, mu, x) * cr(1.0 / x)
    };
    let head = tanh_sinh(&f, 0.0, 1.0, 1e-10)?;
    let body = integrate(&f, 1.0, X_CUT, 1e-10)?;
    let lhs = head.value + body.value;
    let rhs = cr(1.0) / (kappa - sigma) * cr(PI) / sin_pi(two_mu)
        * (rgamma(cr(0.5) - kappa + mu) * rgamma(cr(0.5) - sigma - mu)
            - rgamma(cr(0.5) - kappa - mu) * rgamma(cr(0.5) - sigma + mu));
    Ok((lhs, rhs))
}

/// ∫₀^∞ x^{σ−1} W_{κ,μ}(x) W_{−κ,μ}(x) dx against the gamma-ratio closed
/// form. Valid for Re σ > 2|Re μ| − 1.
pub fn check_eq71(kappa: Complex, mu: Complex, sigma: Complex) -> Result<(Complex, Complex)> {
    if sigma.re <= 2.0 * mu.re.abs() - 1.0 + 1e-12 {
        return Err(Error::Domain(format!(
            "requires Re sigma > 2|Re mu| - 1 ({} vs {})",
            sigma.re,
            2.0 * mu.re.abs() - 1.0
        )));
    }
    let f = |x: f64| {
        if x < X_FLOOR {
            return Complex::new(0.0, 0.0);
        }
        ((sigma - cr(1.0)) * cr(x.ln())).exp() * w(kappa, mu, x) * w(-kappa, mu, x)
    };
    let head = tanh_sinh(&f, 0.0, 1.0, 1e-10)?;
    let body = integrate(&f, 1.0, X_CUT, 1e-10)?;
    let lhs = head.value + body.value;
    let half = sigma * cr(0.5) + cr(0.5);
    let rhs = cgamma(sigma + cr(1.0))? * cgamma(half + mu)? * cgamma(half - mu)?
        / (cr(2.0) * cgamma(half + cr(0.5) + kappa)? * cgamma(half + cr(0.5) - kappa)?);
    Ok((lhs, rhs))
}

/// Upper truncation for the index-side integrals: the integrands decay like
/// e^{−c√u}; scan outward until the magnitude is negligible.
fn u_cutoff<F: Fn(f64) -> Complex>(f: &F) -> f64 {
    let mut peak: f64 = 0.0;
    for &u in &[0.5, 1.0, 2.0, 4.0, 8.0] {
        peak = peak.max(f(u).norm());
    }
    // The W factors grow like e^{πu/2}, so the connection formula eventually
    // cancels past what f64 resolves and the evaluation refuses; stop at the
    // last usable scan point (the integrand there is ~e^{-c√u}-small).
    let mut last_ok = 40.0;
    for &u in &[40.0, 55.0, 70.0, 85.0, 100.0, 120.0] {
        let v = f(u);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return last_ok;
        }
        if v.norm() < 1e-13 * peak {
            return u;
        }
        last_ok = u;
    }
    120.0
}

/// ∫₀^∞ Γ(k−iu) Γ(k+iu) W_{iu,k−1/2}(x) W_{−iu,k−1/2}(x₀) du against
/// √π Γ(2k) (x x₀)^k (x+x₀)^{1/2−2k} K_{2k−1/2}((x+x₀)/2).
pub fn check_eq72(k: f64, x: f64, x0: f64) -> Result<(Complex, Complex)> {
    if !(k > 0.0) {
        return Err(Error::Domain(format!("requires k > 0, got {k}")));
    }
    let mu = cr(k - 0.5);
    let f = |u: f64| {
        let g = match (cgamma(c(k, -u)), cgamma(c(k, u))) {
            (Ok(a), Ok(b)) => a * b,
            _ => return Complex::new(f64::NAN, f64::NAN),
        };
        g * w(c(0.0, u), mu, x) * w(c(0.0, -u), mu, x0)
    };
    let cut = u_cutoff(&f);
    let lhs = integrate(&f, 0.0, cut, 1e-9)?.value;
    let rhs = cr(PI.sqrt() * (x * x0).powf(k) * (x + x0).powf(0.5 - 2.0 * k))
        * cgamma(cr(2.0 * k))?
        * cr(bessel_k(2.0 * k - 0.5, (x + x0) / 2.0)?);
    Ok((lhs, rhs))
}

/// ∫₀^∞ sech(πu) W_{iu,0}(x) W_{−iu,0}(x₀) du against
/// √(x x₀)/(x+x₀) e^{−(x+x₀)/2} (the k = 1/2 reduction of the previous form).
pub fn check_eq73(x: f64, x0: f64) -> Result<(Complex, Complex)> {
    let f = |u: f64| {
        let sech = 1.0 / (PI * u).cosh();
        cr(sech) * w(c(0.0, u), cr(0.0), x) * w(c(0.0, -u), cr(0.0), x0)
    };
    let cut = u_cutoff(&f);
    let lhs = integrate(&f, 0.0, cut, 1e-10)?.value;
    let rhs = cr((x * x0).sqrt() / (x + x0) * (-(x + x0) / 2.0).exp());
    Ok((lhs, rhs))
}
