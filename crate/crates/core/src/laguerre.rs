//! Generalized Laguerre polynomials P_n^(α)(x) with complex order α.

use crate::{cr, Complex};

/// P_n^(α)(x) by the three-term recurrence
/// (k+1) P_{k+1} = (2k+1+α-x) P_k − (k+α) P_{k−1},
/// seeded with P_0 = 1, P_1 = 1+α−x.
pub fn laguerre(n: u32, alpha: Complex, x: f64) -> Complex {
    let mut p0 = cr(1.0);
    if n == 0 {
        return p0;
    }
    let mut p1 = cr(1.0) + alpha - cr(x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((cr(2.0 * kf + 1.0 - x) + alpha) * p1 - (cr(kf) + alpha) * p0) / cr(kf + 1.0);
        p0 = p1;
        p1 = next;
    }
    p1
}
