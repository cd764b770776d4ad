//! Closed-form evaluation of a family of definite integrals over the second
//! (imaginary) index of products of Whittaker W-functions,
//!
//! ```text
//! I(s) = ∫₀^∞ u sinh(2πu) Γ(1/2−κ−iu) Γ(1/2−κ+iu) / (s+u²)
//!            · W_{κ,iu}(x) W_{κ,iu}(x₀) du ,
//! ```
//!
//! together with an independent direct-quadrature engine that cross-checks the
//! closed forms, and the exact time-dependent Green's function for thermal
//! Comptonization built on the κ=2 member of the family.
//!
//! Module map:
//!
//! - [`gamma`]: complex gamma, log-gamma, digamma, Pochhammer symbols.
//! - [`bessel`]: modified Bessel function K_ν on the real half-line.
//! - [`laguerre`]: generalized Laguerre polynomials with complex order.
//! - [`confluent`]: Kummer Φ/Ψ and Whittaker M/W with complex indices,
//!   including the closed Laguerre forms at the pole indices.
//! - [`quad`]: adaptive Gauss–Kronrod and tanh-sinh integration.
//! - [`index_integral`]: pole enumeration, residue sums, the closed form for
//!   I(s), its degenerate double-pole limit, and the κ=0,1,2 shortcuts.
//! - [`oracle`]: direct numerical evaluation of I(s) (head quadrature plus an
//!   analytic tail), used as ground truth for the closed forms.
//! - [`compton`]: the thermal-Comptonization Green's function, its Laplace
//!   transform, photon-conservation checks and spectrum convolution.
//! - [`reference`]: cross-checks of prior-literature Whittaker integrals.

pub mod bessel;
pub mod compton;
pub mod confluent;
pub mod error;
pub mod gamma;
pub mod index_integral;
pub mod laguerre;
pub mod oracle;
pub mod quad;
pub mod reference;

/// Universal complex value type: double-precision rectangular form.
pub type Complex = num_complex::Complex64;

pub use error::{Error, Result, Warning};

/// Euler–Mascheroni constant γ.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

pub(crate) fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

pub(crate) fn cr(re: f64) -> Complex {
    Complex::new(re, 0.0)
}
