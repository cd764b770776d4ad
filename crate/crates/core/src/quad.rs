//! Adaptive one-dimensional integration: Gauss–Kronrod 15-point panels with
//! bisection, plus tanh-sinh for integrable endpoint singularities.
//!
//! Complex integrands share one panel stream; real and imaginary parts are
//! accumulated together and the error estimate takes the worse component.

use crate::{cr, Complex, Error, Result};

/// Hard cap on the number of accepted panels per call.
pub const PANEL_BUDGET: usize = 100_000;

/// Result of a quadrature evaluation.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult {
    pub value: Complex,
    pub abs_error_estimate: f64,
    /// Truncation point for semi-infinite evaluations (b for finite ones).
    pub u_max: f64,
    pub panels: usize,
}

// 15-point Kronrod nodes/weights and the embedded 7-point Gauss weights.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_17,
    0.207_784_955_007_898_46,
    0.0,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_94,
    0.417_959_183_673_469_4,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];

/// One GK15 panel. Returns (kronrod value, error estimate).
fn qk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex, f64)>
where
    F: Fn(f64) -> Complex + ?Sized,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let eval = |x: f64| -> Result<Complex> {
        let v = f(x);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(Error::NonFinite { at: x })
        }
    };

    let fc = eval(center)?;
    let mut kron = fc * cr(WGK[7]);
    let mut gauss = fc * cr(WG[3]);
    let mut resabs = fc.norm() * WGK[7];
    let mut fv = [Complex::new(0.0, 0.0); 15];
    fv[7] = fc;

    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv[j] = f1;
        fv[14 - j] = f2;
        let sum = f1 + f2;
        kron += sum * cr(WGK[j]);
        if j % 2 == 1 {
            gauss += sum * cr(WG[j / 2]);
        }
        resabs += WGK[j] * (f1.norm() + f2.norm());
    }

    let mean = kron * cr(0.5);
    let mut resasc = WGK[7] * (fc - mean).norm();
    for j in 0..7 {
        resasc += WGK[j] * ((fv[j] - mean).norm() + (fv[14 - j] - mean).norm());
    }
    resasc *= half.abs();
    resabs *= half.abs();

    let raw_err = ((kron - gauss) * cr(half)).norm();
    let mut err = raw_err;
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    let tiny_floor = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > tiny_floor {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    Ok((kron * cr(half), err))
}

struct Adaptive<'a> {
    f: &'a dyn Fn(f64) -> Complex,
    tol_abs: f64,
    total_width: f64,
    panels: usize,
}

impl Adaptive<'_> {
    fn run(&mut self, a: f64, b: f64) -> Result<(Complex, f64)> {
        let (val, err) = qk15(self.f, a, b)?;
        let weight = (b - a).abs() / self.total_width;
        // Panel narrower than a few ulps cannot be split further.
        let floor = 4.0 * f64::EPSILON * a.abs().max(b.abs()).max(1.0);
        if err <= self.tol_abs * weight || (b - a).abs() <= floor {
            self.panels += 1;
            return Ok((val, err));
        }
        if self.panels >= PANEL_BUDGET {
            return Err(Error::NoConvergence(format!(
                "panel budget {PANEL_BUDGET} exceeded on [{a}, {b}]"
            )));
        }
        let mid = 0.5 * (a + b);
        let (v1, e1) = self.run(a, mid)?;
        let (v2, e2) = self.run(mid, b)?;
        Ok((v1 + v2, e1 + e2))
    }
}

/// Adaptive Gauss–Kronrod integration of `f` over [a, b]; `b` may be
/// `f64::INFINITY`, in which case x = a + t/(1−t) maps the range onto [0, 1).
///
/// Subdivision stops once each panel's error is below tol scaled by the
/// panel's share of the interval (tolerance is applied relative to the
/// integral's magnitude when that exceeds one).
pub fn integrate<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex,
{
    if b.is_infinite() {
        let g = |t: f64| {
            let onem = 1.0 - t;
            f(a + t / onem) / cr(onem * onem)
        };
        let mut r = integrate_finite(&g, 0.0, 1.0, tol)?;
        r.u_max = f64::INFINITY;
        return Ok(r);
    }
    integrate_finite(&f, a, b, tol)
}

fn integrate_finite(f: &dyn Fn(f64) -> Complex, a: f64, b: f64, tol: f64) -> Result<QuadratureResult> {
    let tol = tol.max(1e-14);
    // Rough pass fixes the magnitude scale for the relative criterion.
    let (rough, _) = qk15(&f, a, b)?;
    let tol_abs = tol * rough.norm().max(1.0);
    let mut state = Adaptive {
        f,
        tol_abs,
        total_width: (b - a).abs().max(f64::MIN_POSITIVE),
        panels: 0,
    };
    let (value, err) = state.run(a, b)?;
    Ok(QuadratureResult {
        value,
        abs_error_estimate: err,
        u_max: b,
        panels: state.panels,
    })
}

/// Tanh-sinh (double-exponential) integration over the finite interval [a, b];
/// tolerates integrable singularities at either endpoint.
pub fn tanh_sinh<F>(f: F, a: f64, b: f64, tol: f64) -> Result<QuadratureResult>
where
    F: Fn(f64) -> Complex,
{
    let tol = tol.max(1e-14);
    let half = 0.5 * (b - a);
    let half_pi = 0.5 * std::f64::consts::PI;

    // Value of the transformed integrand at node t, weight folded in. The
    // abscissa is built from its exact distance to the nearer endpoint
    // (2e^{-2|s|}/(1+e^{-2|s|})) so integrands singular at an endpoint see
    // accurate arguments all the way down.
    let node = |t: f64| -> Option<(f64, Complex)> {
        let s = half_pi * t.sinh();
        let e = (-2.0 * s.abs()).exp();
        let d = half * 2.0 * e / (1.0 + e);
        if d == 0.0 {
            return None;
        }
        let x = if t >= 0.0 { b - d } else { a + d };
        let w = half * half_pi * t.cosh() * 4.0 * e / ((1.0 + e) * (1.0 + e));
        if !w.is_finite() || w < 1e-320 {
            return None;
        }
        Some((w, f(x)))
    };

    let t_cap = 6.5;
    let mut h = 1.0;
    let mut evals = 0usize;
    // level 0
    let mut sum = match node(0.0) {
        Some((w, v)) => v * cr(w),
        None => Complex::new(0.0, 0.0),
    };
    let mut k = 1.0;
    while k * h <= t_cap {
        for t in [k * h, -k * h] {
            if let Some((w, v)) = node(t) {
                if !(v.re.is_finite() && v.im.is_finite()) {
                    return Err(Error::NonFinite { at: t });
                }
                sum += v * cr(w);
                evals += 1;
            }
        }
        k += 1.0;
    }
    let mut prev = sum * cr(h);

    for _level in 0..12 {
        h *= 0.5;
        // add the new (odd-index) nodes
        let mut t = h;
        while t <= t_cap {
            for tt in [t, -t] {
                if let Some((w, v)) = node(tt) {
                    if !(v.re.is_finite() && v.im.is_finite()) {
                        return Err(Error::NonFinite { at: tt });
                    }
                    sum += v * cr(w);
                    evals += 1;
                }
            }
            t += 2.0 * h;
        }
        let cur = sum * cr(h);
        let diff = (cur - prev).norm();
        if diff <= tol * cur.norm().max(1.0) {
            return Ok(QuadratureResult {
                value: cur,
                abs_error_estimate: diff,
                u_max: b,
                panels: evals,
            });
        }
        prev = cur;
    }
    Err(Error::NoConvergence(
        "tanh-sinh level cap reached".to_string(),
    ))
}
