//! Fabry-Perot resonance factors of the concentric resonator.
//!
//! Odd modes have an anti-node at the center and resonate when
//! `|1 - rho e^{2i phi}|` is small; even modes have a node at the center
//! and resonate on `|1 + rho e^{2i phi}|`. The damping factors come from the
//! delta-function part of the mode sum, the shift factors from its principal
//! part.

use crate::error::{Error, Result};

/// The four Airy factors at one round-trip half phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryFactors {
    /// `T / |1 - rho e^{2i phi}|^2`
    pub odd_damping: f64,
    /// `T / |1 + rho e^{2i phi}|^2`
    pub even_damping: f64,
    /// `rho sin(2 phi) / |1 - rho e^{2i phi}|^2`
    pub odd_shift: f64,
    /// `-rho sin(2 phi) / |1 + rho e^{2i phi}|^2`
    pub even_shift: f64,
}

/// Validated entry point; see [`AiryFactors::eval`].
pub fn airy_factors(rho: f64, phi: f64) -> Result<AiryFactors> {
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::Domain(format!("reflectivity rho = {rho} must lie in [0, 1)")));
    }
    Ok(AiryFactors::eval(rho, phi))
}

impl AiryFactors {
    /// The factor set for no mirror: damping 1, shift 0, for both parities.
    pub const FREE: AiryFactors =
        AiryFactors { odd_damping: 1.0, even_damping: 1.0, odd_shift: 0.0, even_shift: 0.0 };

    /// Unchecked evaluation; `rho` must lie in `[0, 1)`.
    #[inline]
    pub fn eval(rho: f64, phi: f64) -> Self {
        if rho == 0.0 {
            return Self::FREE;
        }
        let t = 1.0 - rho * rho;
        let (s, c) = phi.sin_cos();
        let gap = (1.0 - rho) * (1.0 - rho);
        // (1-rho)^2 + 4 rho sin^2 stays accurate right at resonance where the
        // expanded 1 - 2 rho cos 2phi + rho^2 cancels.
        let den_odd = gap + 4.0 * rho * s * s;
        let den_even = gap + 4.0 * rho * c * c;
        let rs2 = rho * 2.0 * s * c;
        AiryFactors {
            odd_damping: t / den_odd,
            even_damping: t / den_even,
            odd_shift: rs2 / den_odd,
            even_shift: -rs2 / den_even,
        }
    }

    /// `d/dphi` of the odd and even shift factors.
    #[inline]
    pub fn shift_derivatives(rho: f64, phi: f64) -> (f64, f64) {
        if rho == 0.0 {
            return (0.0, 0.0);
        }
        let (s, c) = phi.sin_cos();
        let sin2 = 2.0 * s * c;
        let cos2 = c * c - s * s;
        let gap = (1.0 - rho) * (1.0 - rho);
        let den_odd = gap + 4.0 * rho * s * s;
        let den_even = gap + 4.0 * rho * c * c;
        let cross = 4.0 * rho * rho * sin2 * sin2;
        let d_odd = (2.0 * rho * cos2 * den_odd - cross) / (den_odd * den_odd);
        let d_even = -(2.0 * rho * cos2 * den_even + cross) / (den_even * den_even);
        (d_odd, d_even)
    }
}
