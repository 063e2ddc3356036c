//! Special functions and bracketed root finding.
//!
//! Everything here is a pure function of its inputs and is safe to call from
//! any number of threads. Accuracy targets: Φ to 1e-14 absolute, incomplete
//! gammas to 1e-12 relative, I₀ to 1e-12 relative (scaled form stable for
//! arguments up to 1e6).

use crate::error::{Error, Result};

/// Convergence control for iterative routines.
#[derive(Debug, Clone, Copy)]
pub struct Tolerance {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_iter: usize,
}

impl Tolerance {
    pub fn new(abs_tol: f64, rel_tol: f64, max_iter: usize) -> Result<Self> {
        if !(abs_tol > 0.0) || !(rel_tol > 0.0) || max_iter == 0 {
            return Err(Error::domain(
                "Tolerance",
                format!("need abs_tol > 0, rel_tol > 0, max_iter >= 1 (got {abs_tol}, {rel_tol}, {max_iter})"),
            ));
        }
        Ok(Tolerance { abs_tol, rel_tol, max_iter })
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_tol: 1e-13, rel_tol: 1e-13, max_iter: 200 }
    }
}

/// An interval [lo, hi] on which a target function changes sign.
#[derive(Debug, Clone, Copy)]
pub struct Bracket {
    pub lo: f64,
    pub hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::domain("Bracket", format!("need finite lo < hi, got [{lo}, {hi}]")));
        }
        Ok(Bracket { lo, hi })
    }
}

/// Standard normal distribution function Φ(x).
pub fn std_normal_cdf(x: f64) -> f64 {
    // erfc keeps full relative accuracy in the tails, where 1 + erf loses it.
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// Γ(r) for r > 0.
pub fn gamma(r: f64) -> f64 {
    libm::tgamma(r)
}

fn check_gamma_args(what: &'static str, r: f64, x: f64) -> Result<()> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::domain(what, format!("need r > 0, got {r}")));
    }
    if !(x >= 0.0) {
        return Err(Error::domain(what, format!("need x >= 0, got {x}")));
    }
    Ok(())
}

/// Series for the lower incomplete gamma Υ(r, x), good for x < r + 1.
fn lower_gamma_series(r: f64, x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let mut term = 1.0 / r;
    let mut sum = term;
    for k in 1..500 {
        term *= x / (r + k as f64);
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    // Υ(r, x) = x^r e^{-x} Σ x^k / (r (r+1) ... (r+k))
    sum * libm::exp(r * libm::log(x) - x)
}

/// Continued fraction for the upper incomplete gamma Γ(r, x), good for x >= r + 1.
/// Modified Lentz evaluation of the classical even-part continued fraction.
fn upper_gamma_cf(r: f64, x: f64) -> f64 {
    const FPMIN: f64 = 1e-300;
    let mut b = x + 1.0 - r;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..500 {
        let an = -(i as f64) * (i as f64 - r);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h * libm::exp(r * libm::log(x) - x)
}

/// Upper incomplete gamma Γ(r, x) = ∫_x^∞ t^{r-1} e^{-t} dt, r > 0, x >= 0.
pub fn upper_gamma(r: f64, x: f64) -> Result<f64> {
    check_gamma_args("upper_gamma", r, x)?;
    if x == 0.0 {
        return Ok(gamma(r));
    }
    if x < r + 1.0 {
        Ok(gamma(r) - lower_gamma_series(r, x))
    } else {
        Ok(upper_gamma_cf(r, x))
    }
}

/// Lower incomplete gamma Υ(r, x) = Γ(r) - Γ(r, x).
pub fn lower_gamma(r: f64, x: f64) -> Result<f64> {
    check_gamma_args("lower_gamma", r, x)?;
    if x < r + 1.0 {
        Ok(lower_gamma_series(r, x))
    } else {
        Ok(gamma(r) - upper_gamma_cf(r, x))
    }
}

// The direct series stays cheap well past the point where the large-z
// expansion's optimal-truncation error clears 1e-15 relative.
const BESSEL_SERIES_CUTOFF: f64 = 20.0;

/// Power series Σ (z/2)^{2k} / (k!)², all terms positive.
fn bessel_i0_series(z: f64) -> f64 {
    let w = 0.25 * z * z;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..400 {
        let kf = k as f64;
        term *= w / (kf * kf);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Large-argument expansion of e^{-z} I₀(z); terms ((2k-1)!!)² / (k! (8z)^k)
/// with optimal truncation (stop once terms grow).
fn bessel_i0_scaled_asymptotic(z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut prev = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        term *= (2.0 * kf - 1.0) * (2.0 * kf - 1.0) / (kf * 8.0 * z);
        if term >= prev {
            break;
        }
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
        prev = term;
    }
    sum / libm::sqrt(2.0 * std::f64::consts::PI * z)
}

/// Modified Bessel function I₀(z), z >= 0. Overflows to +inf past z ≈ 713.
pub fn bessel_i0(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::domain("bessel_i0", format!("need z >= 0, got {z}")));
    }
    if z <= BESSEL_SERIES_CUTOFF {
        Ok(bessel_i0_series(z))
    } else {
        Ok(bessel_i0_scaled_asymptotic(z) * libm::exp(z))
    }
}

/// Scaled form e^{-z} I₀(z); stable for z up to 1e6 and beyond.
pub fn bessel_i0_scaled(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::domain("bessel_i0_scaled", format!("need z >= 0, got {z}")));
    }
    if z <= BESSEL_SERIES_CUTOFF {
        Ok(bessel_i0_series(z) * libm::exp(-z))
    } else {
        Ok(bessel_i0_scaled_asymptotic(z))
    }
}

/// Bracketed root finding: bisection with a secant proposal each step.
///
/// Deterministic; the bracket always keeps the sign change, so the result is
/// within `tol.abs_tol + tol.rel_tol * |root|` of a true root.
pub fn find_root<F: Fn(f64) -> f64>(f: F, bracket: Bracket, tol: &Tolerance) -> Result<f64> {
    let (mut lo, mut hi) = (bracket.lo, bracket.hi);
    let mut f_lo = f(lo);
    let mut f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::NoSignChange { lo, hi, f_lo, f_hi });
    }
    for _ in 0..tol.max_iter {
        let mid = 0.5 * (lo + hi);
        let width = hi - lo;
        if width <= tol.abs_tol + tol.rel_tol * mid.abs() {
            return Ok(mid);
        }
        // Secant proposal, clamped to the middle 80% of the bracket so a flat
        // stretch cannot stall progress.
        let mut x = mid;
        if f_hi != f_lo {
            let s = hi - f_hi * (hi - lo) / (f_hi - f_lo);
            if s > lo + 0.1 * width && s < hi - 0.1 * width {
                x = s;
            }
        }
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
            f_lo = fx;
        } else {
            hi = x;
            f_hi = fx;
        }
    }
    Err(Error::NoConvergence { what: "find_root", iterations: tol.max_iter, residual: hi - lo })
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn normal_cdf_reference_points() {
        assert_eq!(std_normal_cdf(0.0), 0.5);
        // Φ(1), the value the common lower-bound floor is built from.
        assert!((std_normal_cdf(1.0) - 0.8413447460685429).abs() < 1e-14);
        assert!((std_normal_cdf(-1.0) - (1.0 - std_normal_cdf(1.0))).abs() < 1e-15);
    }

    #[test]
    fn normal_cdf_symmetry_and_monotonicity() {
        let mut prev = 0.0;
        for i in 0..=800 {
            let x = -8.0 + i as f64 * 0.02;
            let p = std_normal_cdf(x);
            assert!((p + std_normal_cdf(-x) - 1.0).abs() < 1e-14, "symmetry at {x}");
            assert!(p >= prev, "monotone at {x}");
            prev = p;
        }
    }

    #[test]
    fn upper_gamma_closed_forms() {
        for x in [0.0, 1.0, 5.0] {
            assert!((upper_gamma(1.0, x).unwrap() - (-x).exp()).abs() < 1e-14);
        }
        assert!((upper_gamma(1.5, 0.0).unwrap() - SQRT_PI / 2.0).abs() < 1e-14);
    }

    /// Adaptive Simpson oracle for ∫_a^b t^{r-1} e^{-t} dt, independent of the
    /// series/continued-fraction implementation path.
    fn simpson(r: f64, a: f64, b: f64) -> f64 {
        let g = |t: f64| t.powf(r - 1.0) * (-t).exp();
        #[allow(clippy::too_many_arguments)]
        fn rec(g: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, f_b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
            let m = 0.5 * (a + b);
            let lm = 0.5 * (a + m);
            let rm = 0.5 * (m + b);
            let flm = g(lm);
            let frm = g(rm);
            let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
            let right = (b - m) / 6.0 * (fm + 4.0 * frm + f_b);
            let diff = left + right - whole;
            if depth == 0 || diff.abs() < 15.0 * tol {
                left + right + diff / 15.0
            } else {
                rec(g, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
                    + rec(g, m, b, fm, frm, f_b, right, tol / 2.0, depth - 1)
            }
        }
        let m = 0.5 * (a + b);
        let (fa, fm, fb) = (g(a), g(m), g(b));
        let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
        rec(&g, a, b, fa, fm, fb, whole, 1e-13, 40)
    }

    #[test]
    fn upper_gamma_matches_quadrature() {
        // Tail beyond t = 60 is below 1e-24 for r = 2.
        let oracle = simpson(2.0, 1.7, 60.0);
        assert!((upper_gamma(2.0, 1.7).unwrap() - oracle).abs() < 1e-10);
    }

    #[test]
    fn lower_gamma_basics() {
        for r in [0.7, 1.0, 1.5, 2.0, 3.3] {
            assert_eq!(lower_gamma(r, 0.0).unwrap(), 0.0);
        }
        assert!((lower_gamma(2.0, 700.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((lower_gamma(1.0, 1.0).unwrap() - (1.0 - (-1.0f64).exp())).abs() < 1e-14);
    }

    #[test]
    fn gamma_partition_identity() {
        // Γ(r) computed independently of the implementation split.
        let exact = [(1.0, 1.0), (1.5, SQRT_PI / 2.0), (2.0, 1.0)];
        for &(r, g) in &exact {
            for i in 0..=100 {
                let x = i as f64 * 0.5;
                let sum = upper_gamma(r, x).unwrap() + lower_gamma(r, x).unwrap();
                assert!((sum - g).abs() < 1e-12 * g, "r={r} x={x} sum={sum}");
            }
        }
    }

    #[test]
    fn gamma_domain_errors() {
        assert!(upper_gamma(0.0, 1.0).is_err());
        assert!(upper_gamma(-1.0, 1.0).is_err());
        assert!(lower_gamma(1.0, -0.5).is_err());
    }

    #[test]
    fn bessel_reference_points() {
        assert_eq!(bessel_i0(0.0).unwrap(), 1.0);
        // e^{-1} I₀(1), the three-point experiment's anchor value.
        assert!((bessel_i0_scaled(1.0).unwrap() - 0.46575960759364043).abs() < 1e-14);
        assert!(bessel_i0(-0.1).is_err());
    }

    #[test]
    fn bessel_series_vs_log_space_oracle() {
        // Independent route: terms exp(2k ln(z/2) - 2 lnΓ(k+1)) summed directly.
        let z: f64 = 10.0;
        let mut oracle = 0.0;
        for k in 0..40 {
            oracle += (2.0 * k as f64 * (z / 2.0).ln() - 2.0 * libm::lgamma(k as f64 + 1.0)).exp();
        }
        let got = bessel_i0(z).unwrap();
        assert!((got - oracle).abs() < 1e-12 * oracle, "got {got}, oracle {oracle}");
    }

    #[test]
    fn bessel_series_vs_integral_representation() {
        // I₀(z) = (1/π) ∫_0^π e^{z cos θ} dθ, composite Simpson with 4096 panels.
        for &z in &[0.3, 1.0, 5.0, 12.0, 20.0] {
            let n = 4096;
            let h = std::f64::consts::PI / n as f64;
            let g = |t: f64| (z * t.cos()).exp();
            let mut s = g(0.0) + g(std::f64::consts::PI);
            for i in 1..n {
                s += g(i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
            }
            let integral = s * h / 3.0 / std::f64::consts::PI;
            let got = bessel_i0(z).unwrap();
            assert!((got - integral).abs() < 1e-10 * integral, "z={z}");
        }
    }

    #[test]
    fn bessel_scaled_stable_for_huge_arguments() {
        for &z in &[30.0, 1e3, 1e6] {
            let v = bessel_i0_scaled(z).unwrap();
            let leading = 1.0 / (2.0 * std::f64::consts::PI * z).sqrt();
            assert!(v.is_finite() && v > leading && v < 1.2 * leading, "z={z} v={v}");
        }
        // The two evaluation routes agree at the switch point itself.
        let a = bessel_i0_series(BESSEL_SERIES_CUTOFF) * (-BESSEL_SERIES_CUTOFF).exp();
        let b = bessel_i0_scaled_asymptotic(BESSEL_SERIES_CUTOFF);
        assert!((a - b).abs() < 1e-13 * a);
    }

    #[test]
    fn find_root_named_constants() {
        let tol = Tolerance::default();
        let p0 = find_root(|p| p * p * p + p - 1.0, Bracket::new(0.5, 1.0).unwrap(), &tol).unwrap();
        assert!((p0 - 0.6823278038280193).abs() < 1e-10);

        let lin = find_root(|x| x - 2.0, Bracket::new(0.0, 5.0).unwrap(), &tol).unwrap();
        assert!((lin - 2.0).abs() < 1e-12);

        let f = |x: f64| 8.0 * (x.cos() - 1.0) + 8.0 * x * x.sin() - 4.0 * x * x * x.cos() - x.powi(3) * x.sin();
        let x0 = find_root(f, Bracket::new(std::f64::consts::PI, 2.0 * std::f64::consts::PI).unwrap(), &tol).unwrap();
        assert!((x0 - 5.487414539984539).abs() < 1e-9);
    }

    #[test]
    fn find_root_bracket_invariance() {
        let tol = Tolerance::default();
        let f = |p: f64| p * p * p + p - 1.0;
        let r1 = find_root(f, Bracket::new(0.5, 1.0).unwrap(), &tol).unwrap();
        let r2 = find_root(f, Bracket::new(0.6, 0.9).unwrap(), &tol).unwrap();
        let r3 = find_root(f, Bracket::new(0.01, 2.5).unwrap(), &tol).unwrap();
        assert!((r1 - r2).abs() < 1e-11 && (r1 - r3).abs() < 1e-11);
    }

    #[test]
    fn find_root_error_paths() {
        let tol = Tolerance::default();
        match find_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), &tol) {
            Err(Error::NoSignChange { .. }) => {}
            other => panic!("expected NoSignChange, got {other:?}"),
        }
        let tight = Tolerance::new(1e-300, 1e-300, 3).unwrap();
        match find_root(|x| x - 0.1234567, Bracket::new(0.0, 1.0).unwrap(), &tight) {
            Err(Error::NoConvergence { .. }) => {}
            other => panic!("expected NoConvergence, got {other:?}"),
        }
        assert!(Bracket::new(1.0, 1.0).is_err());
        assert!(Tolerance::new(0.0, 1.0, 5).is_err());
    }
}
