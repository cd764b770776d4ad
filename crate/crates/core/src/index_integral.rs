//! Closed-form evaluation of the second-index integral
//!
//! ```text
//! I(s) = ∫₀^∞ u sinh(2πu) Γ(1/2−κ−iu) Γ(1/2−κ+iu) / (s+u²)
//!            · W_{κ,iu}(x) W_{κ,iu}(x₀) du
//! ```
//!
//! as the residue of the leading pole at u = i√s plus a finite sum over the
//! gamma poles u_n = i(κ−1/2−n), including the double-pole limit where the
//! two coincide and the simplified κ = 0, 1, 2 forms.

use crate::confluent::{whittaker_m, whittaker_w, WhittakerIndices};
use crate::gamma::{cgamma, digamma, gamma_ratio, near_nonpositive_integer};
use crate::laguerre::laguerre;
use crate::{c, cr, Complex, Error, Result, Warning, EULER_GAMMA};
use std::f64::consts::PI;

/// Relative |s − s_m| below which the degenerate (double-pole) formula is used.
pub const DEGENERATE_TOL: f64 = 1e-10;
/// Relative |s − s_m| below which a conditioning warning is attached.
pub const CONDITIONING_BAND: f64 = 1e-6;

/// Parameters (κ, s, x, x₀) of the integral, validated on construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegralParams {
    pub kappa: Complex,
    pub s: Complex,
    pub x: f64,
    pub x0: f64,
    edge_allowed: bool,
}

impl IntegralParams {
    /// Strict constructor: rejects everything outside the convergence domain.
    pub fn new(kappa: Complex, s: Complex, x: f64, x0: f64) -> Result<Self> {
        let p = Self {
            kappa,
            s,
            x,
            x0,
            edge_allowed: false,
        };
        p.validate()?;
        Ok(p)
    }

    /// Permits parameters on the excluded edge lines (research use); the
    /// geometric requirements x, x₀ > 0 still hold.
    pub fn new_allow_edge(kappa: Complex, s: Complex, x: f64, x0: f64) -> Result<Self> {
        let p = Self {
            kappa,
            s,
            x,
            x0,
            edge_allowed: true,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        if !(self.x > 0.0 && self.x.is_finite()) || !(self.x0 > 0.0 && self.x0.is_finite()) {
            return Err(Error::Domain(format!(
                "x and x0 must be positive and finite, got x={}, x0={}",
                self.x, self.x0
            )));
        }
        if !self.kappa.re.is_finite()
            || !self.kappa.im.is_finite()
            || !self.s.re.is_finite()
            || !self.s.im.is_finite()
        {
            return Err(Error::Domain("kappa and s must be finite".into()));
        }
        if self.edge_allowed {
            return Ok(());
        }
        if self.s.re < 0.0 && self.s.im.abs() < 1e-12 {
            return Err(Error::Domain(
                "s on the negative real semiaxis is excluded (the integral diverges there)".into(),
            ));
        }
        // Positive half-integer Re kappa sits on the convergence boundary.
        let re = self.kappa.re;
        if re >= 0.5 - 1e-9 {
            let frac = re - 0.5;
            if (frac - frac.round()).abs() < 1e-9 {
                return Err(Error::Domain(format!(
                    "Re kappa = {re} is a positive half-integer, on the convergence boundary"
                )));
            }
        }
        Ok(())
    }

    /// √s on the principal branch (Re ≥ 0).
    pub fn sqrt_s(&self) -> Complex {
        self.s.sqrt()
    }

    /// Index m of the nearest degenerate point and the relative distance
    /// |s − s_m| / max(1, |s|), when any pole exists.
    pub fn nearest_degenerate(&self) -> Option<(usize, f64)> {
        let poles = enumerate_poles(self.kappa);
        let scale = self.s.norm().max(1.0);
        poles
            .entries
            .iter()
            .map(|e| {
                let beta = self.kappa - cr(0.5 + e.n as f64);
                let sm = beta * beta;
                (e.n, (self.s - sm).norm() / scale)
            })
            .min_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// One enumerated pole u_n = i(κ − 1/2 − n) with α_n = 2κ − 2n − 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleEntry {
    pub n: usize,
    pub u_n: Complex,
    pub alpha_n: Complex,
}

/// The gamma poles of the integrand captured by the closed contour.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PoleSet {
    pub entries: Vec<PoleEntry>,
}

/// Enumerate the poles u_n = i(κ−1/2−n), n = 0 … ⌊Re κ − 1/2⌋; empty for
/// Re κ < 1/2.
pub fn enumerate_poles(kappa: Complex) -> PoleSet {
    if kappa.re < 0.5 {
        return PoleSet::default();
    }
    let n_max = (kappa.re - 0.5).floor() as usize;
    let entries = (0..=n_max)
        .map(|n| {
            let shift = kappa - cr(0.5 + n as f64);
            PoleEntry {
                n,
                u_n: c(0.0, 1.0) * shift,
                alpha_n: cr(2.0) * shift,
            }
        })
        .collect();
    PoleSet { entries }
}

/// (min(x,x₀), max(x,x₀)): the M function takes the smaller argument, W the
/// larger one.
pub fn x_ordering(x: f64, x0: f64) -> (f64, f64) {
    (x.min(x0), x.max(x0))
}

/// The leading term of the closed form (the residue at u = i√s):
/// π² Γ(1/2−κ+√s)/Γ(1+2√s) · W_{κ,√s}(x_max) M_{κ,√s}(x_min).
pub fn leading_term(p: &IntegralParams) -> Result<Complex> {
    let rs = p.sqrt_s();
    let arg = cr(0.5) - p.kappa + rs;
    if near_nonpositive_integer(arg, 1e-9) {
        let m = (-arg.re.round()) as usize;
        return Err(Error::Degenerate { m });
    }
    let (x_min, x_max) = x_ordering(p.x, p.x0);
    let ratio = gamma_ratio(arg, cr(1.0) + cr(2.0) * rs)?;
    let w = whittaker_w(WhittakerIndices::new(p.kappa, rs), x_max)?;
    let m = whittaker_m(WhittakerIndices::new(p.kappa, rs), x_min)?;
    Ok(cr(PI * PI) * ratio * w * m)
}

/// The n-th residue summand of the closed form,
/// −4π² e^{−(x+x₀)/2} α n!/Γ(α+n+1) (x x₀)^{(α+1)/2}/(4s−α²) P_n(x) P_n(x₀),
/// α = 2κ − 2n − 1.
pub fn residue_term(p: &IntegralParams, n: usize) -> Result<Complex> {
    let poles = enumerate_poles(p.kappa);
    if n >= poles.entries.len() {
        return Err(Error::Domain(format!(
            "pole index {n} outside the enumerated range 0..{}",
            poles.entries.len()
        )));
    }
    let alpha = poles.entries[n].alpha_n;
    let denom = cr(4.0) * p.s - alpha * alpha;
    if denom.norm() < 1e-10 * (cr(4.0) * p.s).norm().max(1.0) {
        return Err(Error::Degenerate { m: n });
    }
    let mut nfac = 1.0;
    for k in 1..=n {
        nfac *= k as f64;
    }
    let xx = p.x * p.x0;
    let power = ((alpha + cr(1.0)) * cr(0.5 * xx.ln())).exp();
    let lag = laguerre(n as u32, alpha, p.x) * laguerre(n as u32, alpha, p.x0);
    Ok(cr(-4.0 * PI * PI * (-(p.x + p.x0) / 2.0).exp() * nfac) * alpha
        / cgamma(alpha + cr(n as f64 + 1.0))?
        * power
        / denom
        * lag)
}

/// Evaluation outcome: the value plus its decomposition and diagnostics.
#[derive(Debug, Clone)]
pub struct EvalResult {
    pub value: Complex,
    /// The W·M residue term at u = i√s (absent in the degenerate case, where
    /// it is folded into `k_term`).
    pub leading_term: Option<Complex>,
    pub residue_terms: Vec<Complex>,
    pub degenerate: bool,
    /// The limiting value K of the two coalescing terms (degenerate case).
    pub k_term: Option<Complex>,
    pub warnings: Vec<Warning>,
}

/// Closed-form evaluation of I(s). Routes automatically to the degenerate
/// formula when s coincides with one of the s_m = (κ−1/2−m)².
pub fn evaluate(p: &IntegralParams) -> Result<EvalResult> {
    let mut warnings = Vec::new();
    if let Some((m, dist)) = p.nearest_degenerate() {
        if dist < DEGENERATE_TOL {
            return evaluate_degenerate(p, m);
        }
        if dist < CONDITIONING_BAND {
            warnings.push(Warning::Conditioning { distance: dist });
        }
    }
    let lead = match leading_term(p) {
        Ok(v) => v,
        Err(Error::Degenerate { m }) => return evaluate_degenerate(p, m),
        Err(e) => return Err(e),
    };
    let poles = enumerate_poles(p.kappa);
    let mut residues = Vec::with_capacity(poles.entries.len());
    let mut value = lead;
    for entry in &poles.entries {
        let term = residue_term(p, entry.n)?;
        value += term;
        residues.push(term);
    }
    Ok(EvalResult {
        value,
        leading_term: Some(lead),
        residue_terms: residues,
        degenerate: false,
        k_term: None,
        warnings,
    })
}

/// d/dβ ln[W_{κ,β}(x_max)·M_{κ,β}(x_min)] at β = √s_m, by central differences
/// with one Richardson refinement. Errors with `ZeroProduct` when the product
/// vanishes at a stencil point.
pub fn index_log_derivative(
    kappa: Complex,
    s_m: Complex,
    x_min: f64,
    x_max: f64,
) -> Result<Complex> {
    let beta = s_m.sqrt();
    let h = 1e-3 * beta.norm().max(1.0);
    let log_prod = |b: Complex| -> Result<Complex> {
        let w = whittaker_w(WhittakerIndices::new(kappa, b), x_max)?;
        let m = whittaker_m(WhittakerIndices::new(kappa, b), x_min)?;
        let prod = w * m;
        if prod.norm() < 1e-300 {
            return Err(Error::ZeroProduct);
        }
        Ok(prod.ln())
    };
    let central = |h: f64| -> Result<Complex> {
        Ok((log_prod(beta + cr(h))? - log_prod(beta - cr(h))?) / cr(2.0 * h))
    };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    Ok((cr(4.0) * d2 - d1) / cr(3.0))
}

/// Harmonic bracket of the degenerate limit, written exactly as displayed:
/// −1/(m+1) + Σ_{n=1}^{m+1} 1/n  (which simplifies to Σ_{n=1}^{m} 1/n).
fn harmonic_bracket(m: usize) -> f64 {
    let mut sum = -1.0 / (m as f64 + 1.0);
    for n in 1..=(m + 1) {
        sum += 1.0 / n as f64;
    }
    sum
}

/// K via the displayed limit formula: the prefactor times
/// [−γ_E + 1/λ + H − 2ψ(λ+1) − 1/(m+1) + Σ 1/n].
fn k_term_logarithmic(p: &IntegralParams, m: usize) -> Result<Complex> {
    let lambda = cr(2.0) * p.kappa - cr(2.0 * m as f64 + 1.0);
    let s_m = (lambda * cr(0.5)) * (lambda * cr(0.5));
    let (x_min, x_max) = x_ordering(p.x, p.x0);
    let h = index_log_derivative(p.kappa, s_m, x_min, x_max)?;
    let bracket = cr(-EULER_GAMMA + harmonic_bracket(m)) + cr(1.0) / lambda + h
        - cr(2.0) * digamma(lambda + cr(1.0))?;
    let mut mfac = 1.0;
    for k in 1..=m {
        mfac *= k as f64;
    }
    let xx = p.x * p.x0;
    let power = ((lambda + cr(1.0)) * cr(0.5 * xx.ln())).exp();
    let lag = laguerre(m as u32, lambda, p.x) * laguerre(m as u32, lambda, p.x0);
    Ok(cr(PI * PI * (-(p.x + p.x0) / 2.0).exp() * mfac) * power * lag
        / cgamma(lambda + cr(m as f64 + 1.0))?
        * bracket)
}

/// K via the product-rule form K = π²/(2β_m) · d/dβ Λ(β)|_{β_m} with
/// Λ(β) = (β²−β_m²) Γ(1/2−κ+β) W_{κ,β}(x_max) M_{κ,β}(x_min) / Γ(1+2β).
///
/// Equivalent to the logarithmic form wherever both are defined, and the only
/// valid route when the Laguerre factor (hence W·M at β_m) vanishes.
fn k_term_product_rule(p: &IntegralParams, m: usize) -> Result<Complex> {
    let beta_m = p.kappa - cr(0.5 + m as f64);
    let (x_min, x_max) = x_ordering(p.x, p.x0);
    let lam = |b: Complex| -> Result<Complex> {
        let w = whittaker_w(WhittakerIndices::new(p.kappa, b), x_max)?;
        let mm = whittaker_m(WhittakerIndices::new(p.kappa, b), x_min)?;
        let g = cgamma(cr(0.5) - p.kappa + b)?;
        let gd = cgamma(cr(1.0) + cr(2.0) * b)?;
        Ok((b - beta_m) * (b + beta_m) * g * w * mm / gd)
    };
    let h = 1e-3 * beta_m.norm().max(1.0);
    let central = |h: f64| -> Result<Complex> {
        Ok((lam(beta_m + cr(h))? - lam(beta_m - cr(h))?) / cr(2.0 * h))
    };
    let d1 = central(h)?;
    let d2 = central(0.5 * h)?;
    let d = (cr(4.0) * d2 - d1) / cr(3.0);
    Ok(cr(PI * PI) * d / (cr(2.0) * beta_m))
}

/// Closed-form evaluation at the degenerate point s = s_m = (κ−1/2−m)²:
/// value = K + Σ_{n≠m} residue terms.
pub fn evaluate_degenerate(p: &IntegralParams, m: usize) -> Result<EvalResult> {
    let poles = enumerate_poles(p.kappa);
    if m >= poles.entries.len() {
        return Err(Error::Domain(format!(
            "degenerate index m={m} outside the allowed range 0..{}",
            poles.entries.len()
        )));
    }
    let beta_m = p.kappa - cr(0.5 + m as f64);
    let s_m = beta_m * beta_m;
    if (p.s - s_m).norm() > DEGENERATE_TOL * p.s.norm().max(1.0) {
        return Err(Error::Domain(format!(
            "s = {} is not within the degenerate tolerance of s_{m} = {s_m}",
            p.s
        )));
    }
    // The logarithmic form breaks down when the Laguerre product vanishes
    // (W·M = 0 at beta_m); route through the product rule there.
    let lambda = cr(2.0) * beta_m;
    let lag_x = laguerre(m as u32, lambda, p.x);
    let lag_x0 = laguerre(m as u32, lambda, p.x0);
    let lag_scale = (1.0 + lag_x.norm() + lag_x0.norm()).powi(2);
    let k = if (lag_x * lag_x0).norm() < 1e-3 * lag_scale {
        k_term_product_rule(p, m)?
    } else {
        match k_term_logarithmic(p, m) {
            Ok(v) => v,
            Err(Error::ZeroProduct) => k_term_product_rule(p, m)?,
            Err(e) => return Err(e),
        }
    };
    // remaining simple poles, with s pinned to s_m exactly
    let pinned = IntegralParams {
        kappa: p.kappa,
        s: s_m,
        x: p.x,
        x0: p.x0,
        edge_allowed: true,
    };
    let mut residues = Vec::new();
    let mut value = k;
    for entry in &poles.entries {
        if entry.n == m {
            continue;
        }
        let term = residue_term(&pinned, entry.n)?;
        value += term;
        residues.push(term);
    }
    Ok(EvalResult {
        value,
        leading_term: None,
        residue_terms: residues,
        degenerate: true,
        k_term: Some(k),
        warnings: Vec::new(),
    })
}

/// The quadratic normalization integral: I(s) with x₀ = x.
pub fn quadratic_norm(kappa: Complex, s: Complex, x: f64) -> Result<EvalResult> {
    evaluate(&IntegralParams::new(kappa, s, x, x)?)
}

/// Right-hand sides of the simplified integer-κ forms (κ = 0, 1, 2). These
/// carry the folded gamma-identity weights, so they equal I(s)/(2π), I(s)/(8π)
/// and I(s)/(32π) respectively.
pub fn eval_special_case(kappa: u8, s: Complex, x: f64, x0: f64) -> Result<Complex> {
    let (x_min, x_max) = x_ordering(x, x0);
    let rs = s.sqrt();
    let exclusions: &[f64] = match kappa {
        0 => &[],
        1 => &[0.25],
        2 => &[2.25, 0.25],
        _ => {
            return Err(Error::Domain(format!(
                "special-case forms exist for kappa = 0, 1, 2 only, got {kappa}"
            )))
        }
    };
    for (m, &sm) in exclusions.iter().enumerate() {
        if (s - cr(sm)).norm() < DEGENERATE_TOL * s.norm().max(1.0) {
            return Err(Error::Degenerate { m });
        }
    }
    let kappa_c = cr(kappa as f64);
    let ratio = gamma_ratio(rs + cr(0.5 - kappa as f64), cr(1.0) + cr(2.0) * rs)?;
    let w = whittaker_w(WhittakerIndices::new(kappa_c, rs), x_max)?;
    let m = whittaker_m(WhittakerIndices::new(kappa_c, rs), x_min)?;
    let wm = ratio * w * m;
    let expf = (-(x + x0) / 2.0).exp();
    Ok(match kappa {
        0 => cr(PI / 2.0) * wm,
        1 => cr(PI / 8.0) * wm - cr(PI / 2.0 * x * x0 * expf) / (cr(4.0) * s - cr(1.0)),
        _ => {
            let bracket = cr(x * x0) / (cr(4.0) * s - cr(9.0))
                + cr((2.0 - x) * (2.0 - x0)) / (cr(4.0) * s - cr(1.0));
            cr(PI / 32.0) * wm - cr(PI / 16.0 * x * x0 * expf) * bracket
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: Complex, b: Complex) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    fn params(kappa: Complex, s: Complex, x: f64, x0: f64) -> IntegralParams {
        IntegralParams::new(kappa, s, x, x0).unwrap()
    }

    #[test]
    fn pole_enumeration() {
        let p = enumerate_poles(cr(2.0));
        assert_eq!(p.entries.len(), 2);
        // s-values (kappa-1/2-n)^2 = 9/4, 1/4
        assert!((p.entries[0].u_n - c(0.0, 1.5)).norm() < 1e-15);
        assert!((p.entries[1].u_n - c(0.0, 0.5)).norm() < 1e-15);
        assert!((p.entries[0].alpha_n - cr(3.0)).norm() < 1e-15);

        assert!(enumerate_poles(cr(0.3)).entries.is_empty());

        let p = enumerate_poles(c(2.4, 0.5));
        assert_eq!(p.entries.len(), 2);
        assert!((p.entries[0].u_n - c(-0.5, 1.9)).norm() < 1e-14);
        assert!((p.entries[1].u_n - c(-0.5, 0.9)).norm() < 1e-14);
    }

    #[test]
    fn ordering() {
        assert_eq!(x_ordering(2.0, 5.0), (2.0, 5.0));
        assert_eq!(x_ordering(5.0, 2.0), (2.0, 5.0));
        assert_eq!(x_ordering(3.0, 3.0), (3.0, 3.0));
    }

    #[test]
    fn validity() {
        assert!(IntegralParams::new(cr(0.0), cr(-1.0), 1.0, 1.0).is_err());
        assert!(IntegralParams::new(cr(0.0), c(-1.0, 0.5), 1.0, 1.0).is_ok());
        assert!(IntegralParams::new(cr(1.5), cr(1.0), 1.0, 1.0).is_err());
        assert!(IntegralParams::new_allow_edge(cr(1.5), cr(1.0), 1.0, 1.0).is_ok());
        assert!(IntegralParams::new(cr(0.0), cr(1.0), 0.0, 1.0).is_err());
        assert!(IntegralParams::new(c(2.5, 1.0), cr(1.0), 1.0, 1.0).is_err());
    }

    #[test]
    fn leading_term_signals_degenerate() {
        let p = IntegralParams::new_allow_edge(cr(1.0), cr(0.25), 1.0, 1.0).unwrap();
        assert!(matches!(leading_term(&p), Err(Error::Degenerate { m: 0 })));
    }

    #[test]
    fn closed_form_anchor_values() {
        // frozen from an independent high-precision implementation of the
        // closed form, fixed before the build
        let cases: [(Complex, Complex, f64, f64, Complex); 7] = [
            (cr(0.0), cr(1.0), 1.0, 1.0, cr(4.21616405086750905)),
            (cr(2.0), cr(1.0), 1.0, 2.0, cr(0.383018440056217095)),
            (
                cr(2.4),
                c(2.0, 1.5),
                2.0,
                5.0,
                c(-2.91392318643094374, 1.24672395001912002),
            ),
            (
                cr(-1.3),
                c(0.5, -2.0),
                0.5,
                0.5,
                c(1.41732077339347201, 0.765184498760469085),
            ),
            (cr(0.7), cr(0.0), 1.0, 2.0, cr(24.9718231812856678)),
            (cr(1.0), cr(0.3), 2.0, 5.0, cr(5.39812286284689006)),
            (
                c(2.4, 0.5),
                cr(1.0),
                1.0,
                2.0,
                c(1.3571391239026242, -2.11867515997790097),
            ),
        ];
        for &(kappa, s, x, x0, expect) in &cases {
            let r = evaluate(&params(kappa, s, x, x0)).unwrap();
            assert!(
                rel(r.value, expect) < 1e-9,
                "kappa={kappa} s={s}: {} vs {expect}",
                r.value
            );
            // decomposition invariant
            let rebuilt = r.leading_term.unwrap() + r.residue_terms.iter().sum::<Complex>();
            assert!(rel(rebuilt, r.value) < 1e-14);
        }
    }

    #[test]
    fn swap_symmetry_is_exact() {
        let a = evaluate(&params(cr(2.0), cr(1.0), 1.0, 2.0)).unwrap();
        let b = evaluate(&params(cr(2.0), cr(1.0), 2.0, 1.0)).unwrap();
        assert_eq!(a.value, b.value);
    }

    #[test]
    fn conjugate_symmetry_in_s() {
        let s = c(1.3, 0.8);
        let a = evaluate(&params(cr(2.0), s, 1.0, 2.0)).unwrap();
        let b = evaluate(&params(cr(2.0), s.conj(), 1.0, 2.0)).unwrap();
        assert!(rel(a.value.conj(), b.value) < 1e-10);
    }

    #[test]
    fn quadratic_norm_equals_diagonal() {
        let a = quadratic_norm(cr(0.0), cr(1.0), 2.0).unwrap();
        let b = evaluate(&params(cr(0.0), cr(1.0), 2.0, 2.0)).unwrap();
        assert_eq!(a.value, b.value);
        assert!(rel(a.value, cr(6.71475280244799044)) < 1e-10, "{}", a.value);
    }

    #[test]
    fn degenerate_anchor_values() {
        // frozen from the s -> s_m limit of the closed form (independent
        // high-precision implementation, Richardson over eps)
        let cases: [(Complex, usize, f64, f64, Complex); 6] = [
            (cr(1.0), 0, 1.0, 1.0, cr(4.27288499812833)),
            (cr(1.0), 0, 1.0, 2.0, cr(2.98106510296527)),
            (cr(2.0), 0, 1.0, 1.0, cr(2.4338569771793)),
            (cr(2.0), 0, 1.0, 2.0, cr(0.0322850837477929)),
            (cr(2.0), 1, 1.0, 1.0, cr(5.25583242378086)),
            (cr(2.0), 1, 1.0, 2.0, cr(1.10110320530836)),
        ];
        for &(kappa, m, x, x0, expect) in &cases {
            let beta = kappa - cr(0.5 + m as f64);
            let p = IntegralParams {
                kappa,
                s: beta * beta,
                x,
                x0,
                edge_allowed: true,
            };
            let r = evaluate_degenerate(&p, m).unwrap();
            assert!(
                rel(r.value, expect) < 1e-7,
                "kappa={kappa} m={m} x={x} x0={x0}: {} vs {expect}",
                r.value
            );
            assert!(r.degenerate);
            let rebuilt = r.k_term.unwrap() + r.residue_terms.iter().sum::<Complex>();
            assert!(rel(rebuilt, r.value) < 1e-14);
        }
    }

    #[test]
    fn evaluate_routes_degenerate_automatically() {
        let p = params(cr(1.0), cr(0.25), 1.0, 1.0);
        let r = evaluate(&p).unwrap();
        assert!(r.degenerate);
        assert!(rel(r.value, cr(4.27288499812833)) < 1e-7);
    }

    #[test]
    fn degenerate_range_check() {
        let p = IntegralParams {
            kappa: cr(1.0),
            s: cr(0.25),
            x: 1.0,
            x0: 1.0,
            edge_allowed: true,
        };
        assert!(matches!(evaluate_degenerate(&p, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn conditioning_warning_near_degenerate() {
        let p = params(cr(1.0), cr(0.25 + 1e-8), 1.0, 1.0);
        let r = evaluate(&p).unwrap();
        assert!(!r.degenerate);
        assert!(r
            .warnings
            .iter()
            .any(|w| matches!(w, Warning::Conditioning { .. })));
    }

    #[test]
    fn harmonic_bracket_matches_plain_harmonic_sum() {
        // exact rational check of the bracket transcription
        fn add(a: (i128, i128), b: (i128, i128)) -> (i128, i128) {
            let (n, d) = (a.0 * b.1 + b.0 * a.1, a.1 * b.1);
            let g = gcd(n.abs().max(1), d);
            (n / g, d / g)
        }
        fn gcd(a: i128, b: i128) -> i128 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        for m in 0..=10i128 {
            let mut bracket = (-1, m + 1);
            for n in 1..=(m + 1) {
                bracket = add(bracket, (1, n));
            }
            let mut plain = (0, 1);
            for n in 1..=m {
                plain = add(plain, (1, n));
            }
            assert_eq!(bracket, plain, "m={m}");
            // and the f64 transcription agrees to roundoff
            let f = harmonic_bracket(m as usize);
            assert!((f - bracket.0 as f64 / bracket.1 as f64).abs() < 1e-14);
        }
    }

    #[test]
    fn log_derivative_value() {
        // fixed pre-build by h/2 vs h/4 Richardson comparison
        let h = index_log_derivative(cr(1.0), cr(0.25), 1.0, 1.0).unwrap();
        assert!(rel(h, cr(1.5996203229953587)) < 1e-6, "{h}");
        assert!(h.im.abs() < 1e-8);
    }

    #[test]
    fn special_cases_fold_back_to_the_general_form() {
        let weights = [2.0 * PI, 8.0 * PI, 32.0 * PI];
        let points = [
            (0u8, cr(1.0), 1.0, 2.0),
            (0u8, c(0.7, 0.4), 0.5, 0.5),
            (1u8, cr(0.9), 1.0, 2.0),
            (1u8, c(1.2, -0.3), 2.0, 5.0),
            (2u8, cr(1.0), 1.0, 1.0),
            (2u8, cr(0.9), 1.3, 1.3),
        ];
        for &(kappa, s, x, x0) in &points {
            let rhs = eval_special_case(kappa, s, x, x0).unwrap();
            let general = evaluate(&params(cr(kappa as f64), s, x, x0)).unwrap();
            let folded = rhs * cr(weights[kappa as usize]);
            assert!(
                rel(folded, general.value) < 1e-10,
                "kappa={kappa} s={s}: {folded} vs {}",
                general.value
            );
        }
    }

    #[test]
    fn special_case_excluded_points() {
        assert!(matches!(
            eval_special_case(1, cr(0.25), 1.0, 2.0),
            Err(Error::Degenerate { .. })
        ));
        assert!(matches!(
            eval_special_case(2, cr(2.25), 1.0, 2.0),
            Err(Error::Degenerate { .. })
        ));
        assert!(eval_special_case(2, cr(1.0), 1.0, 2.0).is_ok());
    }
}
