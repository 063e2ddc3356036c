//! Scalar functions and named constants behind the bound machinery: the
//! distance envelope Ψ and its reparametrization, the one-summand two-point
//! distance Δ₁, the trigonometric root x₀ with its derived κ and γ*, and the
//! t-thresholds feeding the incomplete-gamma upper bounds.
//!
//! Every constant is computed from its defining equation at startup; printed
//! digits appear only in tests.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::specfun::{find_root, std_normal_cdf, Bracket, Tolerance};

/// Constants derived from root-finding, cached process-wide.
#[derive(Debug, Clone, Copy)]
pub struct CoreConstants {
    /// Root of 8(cos x - 1) + 8x sin x - 4x² cos x - x³ sin x on (π, 2π).
    pub x0: f64,
    /// x⁻² √((cos x - 1 + x²/2)² + (sin x - x)²) at x = x0.
    pub kappa: f64,
    /// 1/√(6κ); the γ beyond which the Rozovskii-side upper bound is flat.
    pub gamma_star: f64,
    /// Argmax of Ψ; root of x e^{x²/2} (1+x²)⁻² = (8π)^{-1/2}.
    pub x_phi: f64,
    /// Ψ(x_phi), the largest possible one-summand distance to Φ.
    pub c_phi: f64,
    /// 1/(x_phi² + 1), the two-point weight attaining c_phi.
    pub p_phi: f64,
    /// Root of p³ + p - 1 on [1/2, 1].
    pub p0: f64,
}

/// Thresholds entering the incomplete-gamma upper bounds.
#[derive(Debug, Clone, Copy)]
pub struct TThresholds {
    pub t_gamma: f64,
    pub t1_gamma: f64,
    pub t2_gamma: f64,
}

/// Computes every member of [`CoreConstants`] from its defining equation.
pub fn compute_constants(tol: &Tolerance) -> Result<CoreConstants> {
    let x0 = find_root(
        |x| 8.0 * (x.cos() - 1.0) + 8.0 * x * x.sin() - 4.0 * x * x * x.cos() - x.powi(3) * x.sin(),
        Bracket::new(PI, 2.0 * PI)?,
        tol,
    )?;
    let kappa = ((x0.cos() - 1.0 + 0.5 * x0 * x0).powi(2) + (x0.sin() - x0).powi(2)).sqrt() / (x0 * x0);
    let gamma_star = 1.0 / (6.0 * kappa).sqrt();

    let c8pi = 1.0 / (8.0 * PI).sqrt();
    let x_phi = find_root(
        |x| x * (0.5 * x * x).exp() / (1.0 + x * x).powi(2) - c8pi,
        Bracket::new(0.05, 0.5)?,
        tol,
    )?;
    let c_phi = psi(x_phi);
    let p_phi = 1.0 / (x_phi * x_phi + 1.0);

    let p0 = find_root(|p| p * p * p + p - 1.0, Bracket::new(0.5, 1.0)?, tol)?;

    Ok(CoreConstants { x0, kappa, gamma_star, x_phi, c_phi, p_phi, p0 })
}

/// The cached constants record.
pub fn core_constants() -> &'static CoreConstants {
    static CELL: OnceLock<CoreConstants> = OnceLock::new();
    CELL.get_or_init(|| {
        compute_constants(&Tolerance::default()).expect("constants are computable from fixed brackets")
    })
}

/// Ψ(x) = 1/(1+x²) - Φ(-|x|). Even, positive, maximal at x_phi.
pub fn psi(x: f64) -> f64 {
    1.0 / (1.0 + x * x) - std_normal_cdf(-x.abs())
}

/// Ψ̃(p) = Ψ(√((1-p)/p)) = Φ(√((1-p)/p)) - (1-p) for p in (0,1).
pub fn psi_tilde(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("psi_tilde", format!("need p in (0,1), got {p}")));
    }
    let q = 1.0 - p;
    Ok(std_normal_cdf((q / p).sqrt()) - q)
}

/// Δ₁(p): uniform distance between the standardized two-point law with weight
/// p and Φ; equals Ψ̃(p ∨ (1-p)).
pub fn delta1(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("delta1", format!("need p in (0,1), got {p}")));
    }
    psi_tilde(p.max(1.0 - p))
}

/// t_γ, t_{1,γ}, t_{2,γ}. γ may be +∞ (all three collapse to 2/γ*).
pub fn t_thresholds(gamma: f64) -> Result<TThresholds> {
    if !(gamma > 0.0) {
        return Err(Error::domain("t_thresholds", format!("need gamma > 0, got {gamma}")));
    }
    let gs = core_constants().gamma_star;
    if gamma.is_infinite() {
        let t = 2.0 / gs;
        return Ok(TThresholds { t_gamma: t, t1_gamma: t, t2_gamma: t });
    }
    let ratio2 = (gamma / gs) * (gamma / gs);
    // (2/γ)(√(r²+1) - 1) rewritten to avoid cancellation for small γ.
    let t_gamma = 2.0 * gamma / (gs * gs * ((ratio2 + 1.0).sqrt() + 1.0));
    let t2_gamma = 2.0 * (1.0 / gamma).max(1.0 / gs);
    let t1_gamma = t2_gamma * (1.0 - (1.0 - ratio2).max(0.0).sqrt());
    Ok(TThresholds { t_gamma, t1_gamma, t2_gamma })
}
