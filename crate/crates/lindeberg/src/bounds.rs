//! Upper and lower bounds for the convergence-rate constants: the
//! incomplete-gamma upper bounds for the asymptotically exact constants, the
//! one-summand lower bounds for the exact and most-optimistic constants
//! (optimized over the two-point weight p), the asymptotically-best lower
//! bounds driven by the lattice edge correction, and the asymptotic lower
//! bounds from the symmetric three-point family.

use std::f64::consts::PI;
use std::sync::OnceLock;

use crate::constants::{core_constants, delta1, t_thresholds};
use crate::error::{Error, Result};
use crate::fractions::{FractionKind, FractionParams};
use crate::specfun::{bessel_i0_scaled, find_root, lower_gamma, std_normal_cdf, upper_gamma, Bracket, Tolerance};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Upper,
    Lower,
}

/// Which constant a bound talks about.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundTarget {
    /// Asymptotically exact constant, Esseen-type inequality (upper bound).
    AexUpperEsseen,
    /// Asymptotically exact constant, Rozovskii-type inequality (upper bound).
    AexUpperRozovskii,
    /// Common floor for all four exact/absolute constants.
    ExactFloor,
    /// Exact (universal) constant, Esseen type.
    ExactEsseenLower,
    /// Exact (universal) constant, Rozovskii type.
    ExactRozovskiiLower,
    /// Absolute constant of the g* inequality, Esseen type.
    AEsseenLower,
    /// Absolute constant of the g* inequality, Rozovskii type.
    ARozovskiiLower,
    /// Most optimistic constant (weight g1), Esseen type.
    OptimisticEsseenLower,
    /// Most optimistic constant (weight g1), Rozovskii type.
    OptimisticRozovskiiLower,
    /// Asymptotically best constant, Esseen type.
    AbeEsseenLower,
    /// Asymptotically best constant, Rozovskii type.
    AbeRozovskiiLower,
    /// Lower asymptotically exact constant.
    LowAexLower,
    /// Conditional upper asymptotically exact constant, weight g0.
    CondUpAexG0Lower,
    /// Conditional upper asymptotically exact constant, weight g1.
    CondUpAexG1Lower,
    /// Asymptotically exact constant with weight g0, Esseen type.
    AexG0EsseenLower,
    /// Asymptotically exact constant with weight g0, Rozovskii type.
    AexG0RozovskiiLower,
}

/// A computed bound with its parameters and, for optimized bounds, the
/// extremal two-point weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstantBound {
    pub target: BoundTarget,
    pub kind: BoundKind,
    pub epsilon: f64,
    pub gamma: f64,
    pub value: f64,
    pub witness_p: Option<f64>,
}

/// Grid-then-golden-section maximizer over p in (1/2, 1).
#[derive(Debug, Clone, Copy)]
pub struct Optimizer1D {
    pub grid_points: usize,
    pub refine_iters: usize,
    pub clamp_delta: f64,
}

impl Default for Optimizer1D {
    fn default() -> Self {
        Optimizer1D { grid_points: 10_000, refine_iters: 80, clamp_delta: 1e-9 }
    }
}

/// Deterministic supremum of f over (1/2, 1): dense grid scan, then golden
/// section refinement inside the best grid cell. Returns (p*, f(p*)).
pub fn sup_over_p<F: Fn(f64) -> f64>(f: F, opt: &Optimizer1D) -> Result<(f64, f64)> {
    if opt.grid_points < 100 {
        return Err(Error::domain("sup_over_p", format!("grid_points must be >= 100, got {}", opt.grid_points)));
    }
    let lo = 0.5 + opt.clamp_delta;
    let hi = 1.0 - opt.clamp_delta;
    let n = opt.grid_points;
    let mut best_v = f64::NEG_INFINITY;
    let mut best_p = lo;
    for i in 0..=n {
        let p = lo + (hi - lo) * i as f64 / n as f64;
        let v = f(p);
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { p });
        }
        if v > best_v {
            best_v = v;
            best_p = p;
        }
    }
    let step = (hi - lo) / n as f64;
    let mut a = (best_p - step).max(lo);
    let mut b = (best_p + step).min(hi);
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    for _ in 0..opt.refine_iters {
        if fc < fd {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        } else {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        }
    }
    let pm = 0.5 * (a + b);
    let vm = f(pm);
    if !vm.is_finite() {
        return Err(Error::NonFiniteObjective { p: pm });
    }
    if vm > best_v {
        best_v = vm;
        best_p = pm;
    }
    Ok((best_p, best_v))
}

fn validate_params(params: &FractionParams, what: &'static str) -> Result<()> {
    if !(params.epsilon > 0.0) || !(params.gamma > 0.0) {
        return Err(Error::domain(what, format!("need epsilon, gamma > 0, got ({}, {})", params.epsilon, params.gamma)));
    }
    Ok(())
}

fn base_term() -> f64 {
    4.0 / (2.0 * PI).sqrt()
}

/// √(2(6κγ² + 1))/(6γ), with its γ → ∞ limit √(12κ)/6.
fn esseen_gamma_coefficient(gamma: f64) -> f64 {
    let kappa = core_constants().kappa;
    if gamma.is_infinite() {
        (12.0 * kappa).sqrt() / 6.0
    } else {
        (2.0 * (6.0 * kappa * gamma * gamma + 1.0)).sqrt() / (6.0 * gamma)
    }
}

/// Upper bound for the asymptotically exact constant in the Esseen-type
/// inequality. ε = ∞ and γ = ∞ are handled by their explicit limits
/// (Υ-terms vanish; t_γ → 2/γ*).
pub fn aex_upper_esseen(params: &FractionParams) -> Result<ConstantBound> {
    validate_params(params, "aex_upper_esseen")?;
    let eps = params.epsilon;
    let gamma = params.gamma;
    let kappa = core_constants().kappa;
    let coef = esseen_gamma_coefficient(gamma);
    let value = if eps.is_infinite() {
        base_term() + coef * (PI.sqrt() / 2.0) / PI
    } else {
        let t = t_thresholds(gamma)?.t_gamma;
        let x = t * t / (2.0 * eps * eps);
        base_term()
            + (kappa / eps * lower_gamma(1.0, x)?
                + eps / 12.0 * lower_gamma(2.0, x)?
                + coef * upper_gamma(1.5, x)?)
                / PI
    };
    Ok(ConstantBound {
        target: BoundTarget::AexUpperEsseen,
        kind: BoundKind::Upper,
        epsilon: eps,
        gamma,
        value,
        witness_p: None,
    })
}

/// Upper bound for the asymptotically exact constant in the Rozovskii-type
/// inequality; requires finite ε (the bound grows with ε).
pub fn aex_upper_rozovskii(params: &FractionParams) -> Result<ConstantBound> {
    validate_params(params, "aex_upper_rozovskii")?;
    let eps = params.epsilon;
    let gamma = params.gamma;
    if eps.is_infinite() {
        return Err(Error::domain("aex_upper_rozovskii", "epsilon must be finite".to_string()));
    }
    let c = core_constants();
    let t = t_thresholds(gamma)?;
    let x1 = t.t1_gamma * t.t1_gamma / (2.0 * eps * eps);
    let x2 = t.t2_gamma * t.t2_gamma / (2.0 * eps * eps);
    let mut term = c.kappa / eps * lower_gamma(1.0, x1)?
        + eps / 12.0 * lower_gamma(2.0, x1)?
        + eps / 6.0 * upper_gamma(2.0, x2)?;
    // For γ >= γ* the thresholds coincide and the bracket is identically 0.
    if gamma < c.gamma_star {
        term += 2.0_f64.sqrt() / (6.0 * gamma)
            * (PI.sqrt() / 2.0 - lower_gamma(1.5, x1)? - upper_gamma(1.5, x2)?);
    }
    Ok(ConstantBound {
        target: BoundTarget::AexUpperRozovskii,
        kind: BoundKind::Upper,
        epsilon: eps,
        gamma,
        value: base_term() + term / PI,
        witness_p: None,
    })
}

/// The six one-summand ratio functions Δ₁(p) / L_{•,1}(g, ε, γ) whose
/// suprema over p give the lower bounds for the exact, absolute, and
/// most-optimistic constants.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KFunction {
    EsseenG0,
    RozovskiiG0,
    EsseenGStar,
    RozovskiiGStar,
    EsseenG1,
    RozovskiiG1,
}

impl KFunction {
    /// The weight the denominator fraction is taken at.
    pub fn weight(self) -> crate::fractions::WeightKind {
        use crate::fractions::WeightKind::*;
        match self {
            KFunction::EsseenG0 | KFunction::RozovskiiG0 => G0,
            KFunction::EsseenGStar | KFunction::RozovskiiGStar => Star,
            KFunction::EsseenG1 | KFunction::RozovskiiG1 => G1,
        }
    }

    pub fn kind(self) -> FractionKind {
        match self {
            KFunction::EsseenG0 | KFunction::EsseenGStar | KFunction::EsseenG1 => FractionKind::Esseen,
            _ => FractionKind::Rozovskii,
        }
    }
}

fn max3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).max(c)
}

/// K(p, ε, γ) = Δ₁(p) / L_{•,1}(g, ε, γ) in explicit piecewise form,
/// p in (1/2, 1). The g* variants are defined for ε > 1; below that they
/// coincide with the g0 variants and delegate there. The g0/Esseen case for
/// ε > 1 carries the corrected extra term γ(p-q)/p (see the closed-form
/// notes in `fractions`).
pub fn k_function(which: KFunction, p: f64, params: &FractionParams) -> Result<f64> {
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::domain("k_function", format!("need p in (1/2, 1), got {p}")));
    }
    validate_params(params, "k_function")?;
    if !params.gamma.is_finite() {
        return Err(Error::domain("k_function", "gamma must be finite".to_string()));
    }
    let eps = params.epsilon;
    let gamma = params.gamma;
    let q = 1.0 - p;
    let d1 = delta1(p)?;
    let s_q = (q / p).sqrt();
    let s_q3 = (q * q * q / p).sqrt();
    let s_p3 = (p * p * p / q).sqrt();
    let s_pq = (p * q).sqrt();
    // p <= thr_lo ⟺ ε² <= q/p; p < thr_hi ⟺ ε² > p/q.
    let thr_lo = if eps.is_finite() { 1.0 / (eps * eps + 1.0) } else { 0.0 };
    let thr_hi = if eps.is_finite() { eps * eps / (eps * eps + 1.0) } else { 1.0 };

    let denom = match which {
        KFunction::EsseenG0 => {
            if eps <= 1.0 {
                if p <= thr_lo {
                    eps
                } else {
                    s_q.max(gamma * s_q3 + eps * p)
                }
            } else {
                let base = s_q.max(gamma * s_q3 + p);
                if p < thr_hi {
                    base.max(gamma * (p - q) / p)
                } else {
                    base
                }
            }
        }
        KFunction::RozovskiiG0 => {
            if eps <= 1.0 {
                if p <= thr_lo {
                    eps
                } else {
                    gamma * s_q3 + s_q.max(eps * p)
                }
            } else if p >= thr_hi {
                gamma / eps * s_q3 + s_q.max(p)
            } else {
                gamma * (p - q) / (eps * s_pq) + s_q.max(p)
            }
        }
        KFunction::EsseenGStar => {
            if eps <= 1.0 {
                return k_function(KFunction::EsseenG0, p, params);
            }
            if p >= thr_hi {
                s_q.max(gamma * s_q3 + eps * p)
            } else {
                max3(q, gamma * q * q + p * p, gamma * (p - q)) / s_pq
            }
        }
        KFunction::RozovskiiGStar => {
            if eps <= 1.0 {
                return k_function(KFunction::RozovskiiG0, p, params);
            }
            if p >= thr_hi {
                gamma * s_q3 + s_q.max(eps * p)
            } else {
                gamma * (p - q) / s_pq + s_q.max(s_p3)
            }
        }
        KFunction::EsseenG1 => {
            if eps <= 1.0 {
                if p <= thr_lo {
                    1.0
                } else {
                    1.0_f64.max(gamma * q + p)
                }
            } else if p < thr_hi {
                max3(1.0, gamma * q + p, (gamma * q * q + p * p) / s_pq).max(gamma * (p - q) / s_pq)
            } else {
                max3(1.0, gamma * q + p, gamma * s_q3 + p * eps)
            }
        }
        KFunction::RozovskiiG1 => {
            if eps <= 1.0 {
                if p <= thr_lo {
                    1.0
                } else {
                    1.0 + gamma / eps * s_q3
                }
            } else if p < thr_hi {
                gamma * (p - q) / s_pq + s_p3.max(1.0)
            } else {
                gamma * s_q3 + (eps * p).max(1.0)
            }
        }
    };
    Ok(d1 / denom)
}

/// The one-summand lower-bound family: the common floor
/// (Φ(1)-0.5)/min{1,ε} plus the six optimized sup-over-p bounds, each with
/// its witness p.
pub fn exact_constant_lower_bounds(params: &FractionParams, opt: &Optimizer1D) -> Result<Vec<ConstantBound>> {
    validate_params(params, "exact_constant_lower_bounds")?;
    let floor = (std_normal_cdf(1.0) - 0.5) / params.epsilon.min(1.0);
    let mut out = vec![ConstantBound {
        target: BoundTarget::ExactFloor,
        kind: BoundKind::Lower,
        epsilon: params.epsilon,
        gamma: params.gamma,
        value: floor,
        witness_p: None,
    }];
    let table: [(KFunction, BoundTarget); 6] = [
        (KFunction::EsseenG0, BoundTarget::ExactEsseenLower),
        (KFunction::RozovskiiG0, BoundTarget::ExactRozovskiiLower),
        (KFunction::EsseenGStar, BoundTarget::AEsseenLower),
        (KFunction::RozovskiiGStar, BoundTarget::ARozovskiiLower),
        (KFunction::EsseenG1, BoundTarget::OptimisticEsseenLower),
        (KFunction::RozovskiiG1, BoundTarget::OptimisticRozovskiiLower),
    ];
    for (which, target) in table {
        let (p, v) = sup_over_p(|p| k_function(which, p, params).unwrap_or(f64::NAN), opt)?;
        out.push(ConstantBound {
            target,
            kind: BoundKind::Lower,
            epsilon: params.epsilon,
            gamma: params.gamma,
            value: v,
            witness_p: Some(p),
        });
    }
    Ok(out)
}

fn abe_esseen_objective(p: f64, gamma: f64) -> f64 {
    let q = 1.0 - p;
    (p + 1.0) / (3.0 * (2.0 * PI).sqrt() * max3(q, gamma * q * q + p * p, gamma * (2.0 * p - 1.0)))
}

/// Lower bound for the asymptotically best constant in the Esseen-type
/// inequality; ε-uniform (it bounds the infimum over ε).
pub fn abe_lower_esseen(gamma: f64, opt: &Optimizer1D) -> Result<ConstantBound> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::domain("abe_lower_esseen", format!("need finite gamma > 0, got {gamma}")));
    }
    let (p, v) = sup_over_p(|p| abe_esseen_objective(p, gamma), opt)?;
    Ok(ConstantBound {
        target: BoundTarget::AbeEsseenLower,
        kind: BoundKind::Lower,
        epsilon: f64::INFINITY,
        gamma,
        value: v,
        witness_p: Some(p),
    })
}

/// Lower bound for the asymptotically best constant in the Rozovskii-type
/// inequality: piecewise in a = γ/(ε ∨ 1), continuous at a = 2/3.
pub fn abe_lower_rozovskii(params: &FractionParams) -> Result<ConstantBound> {
    validate_params(params, "abe_lower_rozovskii")?;
    let a = params.gamma / params.epsilon.max(1.0);
    let s5 = 5.0_f64.sqrt();
    let (value, witness) = if a < 2.0 / 3.0 {
        let v = (1.0 + s5) / (3.0 * (2.0 * PI).sqrt() * (2.0 * a * (s5 - 2.0) + 3.0 - s5));
        (v, Some((s5 - 1.0) / 2.0))
    } else {
        // The supremum is approached as p → 1/2+.
        (1.0 / (2.0 * PI).sqrt(), None)
    };
    Ok(ConstantBound {
        target: BoundTarget::AbeRozovskiiLower,
        kind: BoundKind::Lower,
        epsilon: params.epsilon,
        gamma: params.gamma,
        value,
        witness_p: witness,
    })
}

/// ε beyond which the g1 conditional bound freezes at its floor; comes from
/// the argmax α* ≈ 0.79 of √α e^{-α} I₀(α) (verified numerically in tests).
pub const COND_UP_AEX_G1_EPS_THRESHOLD: f64 = 1.1251;
pub const COND_UP_AEX_G1_FLOOR: f64 = 0.2344;

/// Lower bounds for the lower asymptotically exact constant and the two
/// conditional upper asymptotically exact constants.
pub fn asymptotic_lower_bounds(params: &FractionParams) -> Result<Vec<ConstantBound>> {
    validate_params(params, "asymptotic_lower_bounds")?;
    let eps = params.epsilon;
    let gamma = params.gamma;
    let make = |target, value| ConstantBound {
        target,
        kind: BoundKind::Lower,
        epsilon: eps,
        gamma,
        value,
        witness_p: None,
    };
    let g1 = if eps <= 1.0 {
        0.5
    } else if eps <= COND_UP_AEX_G1_EPS_THRESHOLD {
        bessel_i0_scaled(1.0 / (eps * eps))? / 2.0
    } else {
        COND_UP_AEX_G1_FLOOR
    };
    Ok(vec![
        make(BoundTarget::LowAexLower, 1.0 / (2.0 * (2.0 * PI).sqrt())),
        make(BoundTarget::CondUpAexG0Lower, 1.0 / (2.0 * eps.min(1.0))),
        make(BoundTarget::CondUpAexG1Lower, g1),
    ])
}

/// The γ where the asymptotically-best minorant crosses 1/(2√(2π)); beyond
/// it the lower asymptotically exact floor takes over.
pub fn gamma0() -> f64 {
    static CELL: OnceLock<f64> = OnceLock::new();
    *CELL.get_or_init(|| {
        let opt = Optimizer1D::default();
        let target = 1.0 / (2.0 * (2.0 * PI).sqrt());
        let f = |g: f64| {
            let (_, v) = sup_over_p(|p| abe_esseen_objective(p, g), &opt).expect("objective is finite");
            v - target
        };
        find_root(f, Bracket::new(1.0, 100.0).expect("valid"), &Tolerance { abs_tol: 1e-11, rel_tol: 1e-11, max_iter: 200 })
            .expect("the minorant is continuous and strictly decreasing in gamma")
    })
}

/// A lower/upper pair for one asymptotically exact constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSided {
    pub lower: ConstantBound,
    pub upper: ConstantBound,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AexTwoSided {
    pub esseen: TwoSided,
    /// Absent for ε = ∞ (no finite upper bound is available there).
    pub rozovskii: Option<TwoSided>,
}

/// Two-sided bounds for the asymptotically exact constants at (ε, γ):
/// Esseen lower = ABE minorant at γ ∧ γ₀; Rozovskii lower = the piecewise
/// ABE bound; uppers from the incomplete-gamma formulas.
pub fn aex_two_sided(params: &FractionParams) -> Result<AexTwoSided> {
    validate_params(params, "aex_two_sided")?;
    let opt = Optimizer1D::default();
    let g_eff = params.gamma.min(gamma0());
    let abe = abe_lower_esseen(g_eff, &opt)?;
    let esseen_lower = ConstantBound {
        target: BoundTarget::AexG0EsseenLower,
        kind: BoundKind::Lower,
        epsilon: params.epsilon,
        gamma: params.gamma,
        value: abe.value,
        witness_p: abe.witness_p,
    };
    let esseen = TwoSided { lower: esseen_lower, upper: aex_upper_esseen(params)? };
    let rozovskii = if params.epsilon.is_finite() {
        let lo = abe_lower_rozovskii(params)?;
        Some(TwoSided {
            lower: ConstantBound { target: BoundTarget::AexG0RozovskiiLower, ..lo },
            upper: aex_upper_rozovskii(params)?,
        })
    } else {
        None
    };
    Ok(AexTwoSided { esseen, rozovskii })
}

/// The γ entry of a quoted reference row: numeric, the symbolic γ*, or
/// "any" (used by the ε → 0 blow-up row).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RefGamma {
    Value(f64),
    GammaStar,
    Any,
}

impl RefGamma {
    pub fn resolve(self) -> f64 {
        match self {
            RefGamma::Value(v) => v,
            RefGamma::GammaStar => core_constants().gamma_star,
            RefGamma::Any => f64::NAN,
        }
    }
}

/// One quoted upper-bound row for an absolute constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub epsilon: f64,
    pub gamma: RefGamma,
    pub bound: f64,
}

const INF: f64 = f64::INFINITY;

/// Quoted prior-work upper bounds for the Esseen-type absolute constant.
/// Reference data, not computed here.
pub const REFERENCE_TABLE_ESSEEN: [ReferenceRow; 24] = [
    ReferenceRow { epsilon: 1.21, gamma: RefGamma::Value(0.2), bound: 2.8904 },
    ReferenceRow { epsilon: 1.24, gamma: RefGamma::Value(0.2), bound: 2.8900 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(0.2), bound: 2.8846 },
    ReferenceRow { epsilon: 1.76, gamma: RefGamma::Value(0.4), bound: 2.7360 },
    ReferenceRow { epsilon: 5.94, gamma: RefGamma::Value(0.4), bound: 2.7300 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(0.4), bound: 2.7299 },
    ReferenceRow { epsilon: 1.0, gamma: RefGamma::GammaStar, bound: 2.7367 },
    ReferenceRow { epsilon: 1.87, gamma: RefGamma::GammaStar, bound: 2.6999 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::GammaStar, bound: 2.6919 },
    ReferenceRow { epsilon: 1.0, gamma: RefGamma::Value(0.72), bound: 2.7298 },
    ReferenceRow { epsilon: 1.0, gamma: RefGamma::Value(INF), bound: 2.7286 },
    ReferenceRow { epsilon: 4.35, gamma: RefGamma::Value(1.0), bound: 2.6600 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(1.0), bound: 2.6588 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(0.97), bound: 2.6599 },
    ReferenceRow { epsilon: 2.56, gamma: RefGamma::Value(INF), bound: 2.6500 },
    ReferenceRow { epsilon: 2.62, gamma: RefGamma::Value(5.0), bound: 2.6500 },
    ReferenceRow { epsilon: 2.65, gamma: RefGamma::Value(4.0), bound: 2.6500 },
    ReferenceRow { epsilon: 2.74, gamma: RefGamma::Value(3.0), bound: 2.6500 },
    ReferenceRow { epsilon: 3.13, gamma: RefGamma::Value(2.0), bound: 2.6500 },
    ReferenceRow { epsilon: 4.0, gamma: RefGamma::Value(1.62), bound: 2.6500 },
    ReferenceRow { epsilon: 5.37, gamma: RefGamma::Value(1.5), bound: 2.6500 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(1.43), bound: 2.6500 },
    ReferenceRow { epsilon: INF, gamma: RefGamma::Value(INF), bound: 2.6409 },
    ReferenceRow { epsilon: 0.0, gamma: RefGamma::Any, bound: INF },
];

/// Quoted prior-work upper bounds for the Rozovskii-type absolute constant.
pub const REFERENCE_TABLE_ROZOVSKII: [ReferenceRow; 11] = [
    ReferenceRow { epsilon: 1.21, gamma: RefGamma::Value(0.2), bound: 2.8700 },
    ReferenceRow { epsilon: 5.39, gamma: RefGamma::Value(0.2), bound: 2.8635 },
    ReferenceRow { epsilon: 1.76, gamma: RefGamma::Value(0.4), bound: 2.6999 },
    ReferenceRow { epsilon: 2.63, gamma: RefGamma::Value(0.4), bound: 2.6933 },
    ReferenceRow { epsilon: 0.5, gamma: RefGamma::GammaStar, bound: 3.0396 },
    ReferenceRow { epsilon: 1.0, gamma: RefGamma::GammaStar, bound: 2.7286 },
    ReferenceRow { epsilon: 1.99, gamma: RefGamma::GammaStar, bound: 2.6600 },
    ReferenceRow { epsilon: 2.12, gamma: RefGamma::GammaStar, bound: 2.6593 },
    ReferenceRow { epsilon: 3.0, gamma: RefGamma::GammaStar, bound: 2.6769 },
    ReferenceRow { epsilon: 5.0, gamma: RefGamma::GammaStar, bound: 2.7562 },
    ReferenceRow { epsilon: 0.0, gamma: RefGamma::Any, bound: INF },
];

/// Looks a cell up by (ε, γ); γ* rows match the computed γ* value.
pub fn reference_lookup(table: &[ReferenceRow], epsilon: f64, gamma: f64) -> Option<f64> {
    let close = |a: f64, b: f64| {
        if a.is_infinite() || b.is_infinite() {
            a == b
        } else {
            (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
        }
    };
    table
        .iter()
        .find(|row| {
            close(row.epsilon, epsilon)
                && match row.gamma {
                    RefGamma::Any => true,
                    g => close(g.resolve(), gamma),
                }
        })
        .map(|row| row.bound)
}

/// The (ε, γ) grid of the computed upper-bound table, Esseen side.
pub const TABLE3_GRID_ESSEEN: [(f64, RefGamma); 22] = [
    (0.6, RefGamma::Value(0.3)),
    (1.21, RefGamma::Value(0.2)),
    (2.06, RefGamma::Value(0.2)),
    (INF, RefGamma::Value(0.2)),
    (1.48, RefGamma::Value(0.4)),
    (INF, RefGamma::Value(0.4)),
    (1.89, RefGamma::GammaStar),
    (2.03, RefGamma::GammaStar),
    (INF, RefGamma::GammaStar),
    (1.0, RefGamma::GammaStar),
    (1.0, RefGamma::Value(0.67)),
    (1.0, RefGamma::Value(INF)),
    (2.24, RefGamma::Value(1.0)),
    (INF, RefGamma::Value(1.0)),
    (3.07, RefGamma::Value(INF)),
    (3.2, RefGamma::Value(5.0)),
    (3.28, RefGamma::Value(4.0)),
    (4.0, RefGamma::Value(2.4)),
    (5.0, RefGamma::Value(2.06)),
    (5.37, RefGamma::Value(2.0)),
    (INF, RefGamma::Value(1.83)),
    (INF, RefGamma::Value(INF)),
];

/// The (ε, γ) grid of the computed upper-bound table, Rozovskii side.
pub const TABLE3_GRID_ROZOVSKII: [(f64, RefGamma); 16] = [
    (1.21, RefGamma::Value(0.2)),
    (1.89, RefGamma::Value(0.2)),
    (2.77, RefGamma::Value(0.2)),
    (5.39, RefGamma::Value(0.2)),
    (1.41, RefGamma::Value(0.4)),
    (1.76, RefGamma::Value(0.4)),
    (1.99, RefGamma::Value(0.4)),
    (2.63, RefGamma::Value(0.4)),
    (0.5, RefGamma::GammaStar),
    (1.0, RefGamma::GammaStar),
    (1.52, RefGamma::GammaStar),
    (1.89, RefGamma::GammaStar),
    (1.99, RefGamma::GammaStar),
    (2.12, RefGamma::GammaStar),
    (3.0, RefGamma::GammaStar),
    (5.0, RefGamma::GammaStar),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table3Row {
    pub kind: FractionKind,
    pub epsilon: f64,
    pub gamma: RefGamma,
    pub value: f64,
}

/// Computes every cell of the asymptotically-exact upper-bound table.
pub fn compute_table3() -> Result<Vec<Table3Row>> {
    let mut rows = Vec::with_capacity(TABLE3_GRID_ESSEEN.len() + TABLE3_GRID_ROZOVSKII.len());
    for &(eps, gamma) in &TABLE3_GRID_ESSEEN {
        let params = FractionParams { epsilon: eps, gamma: gamma.resolve() };
        rows.push(Table3Row {
            kind: FractionKind::Esseen,
            epsilon: eps,
            gamma,
            value: aex_upper_esseen(&params)?.value,
        });
    }
    for &(eps, gamma) in &TABLE3_GRID_ROZOVSKII {
        let params = FractionParams { epsilon: eps, gamma: gamma.resolve() };
        rows.push(Table3Row {
            kind: FractionKind::Rozovskii,
            epsilon: eps,
            gamma,
            value: aex_upper_rozovskii(&params)?.value,
        });
    }
    Ok(rows)
}

/// γ grid of the asymptotically-best lower-bound table.
pub const TABLE4_GAMMAS: [f64; 10] = [0.1, 0.2, 0.4, 0.56, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Table4Column {
    pub gamma: f64,
    pub witness_p: f64,
    pub value: f64,
}

/// Computes the asymptotically-best lower bound and its extremal p for every
/// γ column of the table.
pub fn compute_table4() -> Result<Vec<Table4Column>> {
    let opt = Optimizer1D::default();
    TABLE4_GAMMAS
        .iter()
        .map(|&g| {
            let b = abe_lower_esseen(g, &opt)?;
            Ok(Table4Column { gamma: g, witness_p: b.witness_p.unwrap(), value: b.value })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fractions::two_point_fraction_closed_form;

    fn params(eps: f64, gamma: f64) -> FractionParams {
        FractionParams { epsilon: eps, gamma }
    }

    #[test]
    fn aex_upper_esseen_spot_cells() {
        let gs = core_constants().gamma_star;
        assert!((aex_upper_esseen(&params(2.24, 1.0)).unwrap().value - 1.73996).abs() < 5e-5);
        assert!((aex_upper_esseen(&params(1.0, gs)).unwrap().value - 1.80596).abs() < 5e-5);
        assert!((aex_upper_esseen(&params(INF, INF)).unwrap().value - 1.71451).abs() < 5e-5);
    }

    #[test]
    fn aex_upper_rozovskii_spot_cells() {
        let gs = core_constants().gamma_star;
        assert!((aex_upper_rozovskii(&params(1.0, gs)).unwrap().value - 1.79154).abs() < 5e-5);
        assert!((aex_upper_rozovskii(&params(1.89, gs)).unwrap().value - 1.74383).abs() < 5e-5);
        assert!((aex_upper_rozovskii(&params(1.21, 0.2)).unwrap().value - 1.93474).abs() < 5e-5);
        assert!(aex_upper_rozovskii(&params(INF, 1.0)).is_err());
    }

    #[test]
    fn k_function_consistency_with_closed_forms() {
        // K = Δ₁(p) / L_{•,1}(g, ε, γ) must agree with the independently
        // branched closed-form dispatch at n = 1.
        let whichs = [
            KFunction::EsseenG0,
            KFunction::RozovskiiG0,
            KFunction::EsseenGStar,
            KFunction::RozovskiiGStar,
            KFunction::EsseenG1,
            KFunction::RozovskiiG1,
        ];
        for &eps in &[0.3, 0.7, 1.0, 1.4, 3.0, INF] {
            for &gamma in &[0.2, 0.56, 1.0, 2.0, 5.0] {
                let pr = params(eps, gamma);
                for i in 1..60 {
                    let p = 0.5 + 0.5 * i as f64 / 60.0;
                    for which in whichs {
                        let k = k_function(which, p, &pr).unwrap();
                        let l = two_point_fraction_closed_form(which.kind(), which.weight(), p, 1, &pr).unwrap();
                        let expect = delta1(p).unwrap() / l;
                        assert!(
                            (k - expect).abs() <= 1e-12 * expect.abs().max(1.0),
                            "{which:?} p={p} eps={eps} gamma={gamma}: {k} vs {expect}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn k_function_examples() {
        // Esseen g0 at (1,1) equals Δ₁(p)/(√(q³/p)+p) for p >= p0.
        let c = core_constants();
        for p in [c.p0 + 1e-6, 0.8, 0.95] {
            let q = 1.0 - p;
            let k = k_function(KFunction::EsseenG0, p, &params(1.0, 1.0)).unwrap();
            let expect = delta1(p).unwrap() / ((q * q * q / p).sqrt() + p);
            assert!((k - expect).abs() < 1e-13, "p={p}");
        }
        // g1/Esseen with ε <= 1, γ <= 1 is Δ₁(p) itself on p <= 1/(ε²+1).
        let pr = params(0.5, 0.8);
        let p = 0.7;
        assert!(p <= 1.0 / (0.25 + 1.0));
        assert!((k_function(KFunction::EsseenG1, p, &pr).unwrap() - delta1(p).unwrap()).abs() < 1e-15);
        assert!(k_function(KFunction::EsseenG0, 0.4, &pr).is_err());
    }

    #[test]
    fn sup_over_p_rejects_bad_configuration_and_objectives() {
        let coarse = Optimizer1D { grid_points: 50, ..Default::default() };
        assert!(matches!(sup_over_p(|_| 1.0, &coarse), Err(Error::Domain { .. })));
        match sup_over_p(|p| if p > 0.8 { f64::NAN } else { p }, &Optimizer1D::default()) {
            Err(Error::NonFiniteObjective { p }) => assert!(p > 0.8),
            other => panic!("expected NonFiniteObjective, got {other:?}"),
        }
    }

    #[test]
    fn sup_over_p_headline_numbers() {
        let opt = Optimizer1D::default();
        // sup K_E0(·, 1, 1) > 0.5685 at p = 0.9058...
        let (p, v) = sup_over_p(|p| k_function(KFunction::EsseenG0, p, &params(1.0, 1.0)).unwrap(), &opt).unwrap();
        assert!(v > 0.5685, "value {v}");
        assert!((p - 0.9058).abs() < 1e-3, "witness {p}");
        // sup Δ₁ = C_Φ at p_Φ.
        let c = core_constants();
        let (p, v) = sup_over_p(|p| delta1(p).unwrap(), &opt).unwrap();
        assert!((v - c.c_phi).abs() < 1e-12);
        assert!((p - c.p_phi).abs() < 1e-7);
        // sup K_R1(·, 1, 1) > 0.5370 at p = 0.9678...
        let (p, v) = sup_over_p(|p| k_function(KFunction::RozovskiiG1, p, &params(1.0, 1.0)).unwrap(), &opt).unwrap();
        assert!(v > 0.5370, "value {v}");
        assert!((p - 0.9678).abs() < 1e-3, "witness {p}");
    }

    #[test]
    fn exact_lower_bound_examples() {
        let opt = Optimizer1D::default();
        let bounds = exact_constant_lower_bounds(&params(1.0, 1.0), &opt).unwrap();
        let get = |t: BoundTarget| bounds.iter().find(|b| b.target == t).unwrap();
        assert!(get(BoundTarget::ExactEsseenLower).value > 0.5685);
        assert!(get(BoundTarget::ExactRozovskiiLower).value > 0.5685);
        assert!((get(BoundTarget::ExactFloor).value - 0.3413447460685429).abs() < 1e-14);

        let binf = exact_constant_lower_bounds(&params(INF, 1.0), &opt).unwrap();
        let ae = binf.iter().find(|b| b.target == BoundTarget::AEsseenLower).unwrap();
        assert!(ae.value > 0.3703);

        // ε <= x_Φ: the most optimistic bounds hit the distance envelope cap.
        let c = core_constants();
        let tiny = exact_constant_lower_bounds(&params(c.x_phi, 3.0), &opt).unwrap();
        for t in [BoundTarget::OptimisticEsseenLower, BoundTarget::OptimisticRozovskiiLower] {
            let b = tiny.iter().find(|b| b.target == t).unwrap();
            assert!((b.value - c.c_phi).abs() < 1e-9, "{t:?}: {}", b.value);
        }

        // Small-ε floor: (Φ(1) - 0.5)/0.1.
        let fl = exact_constant_lower_bounds(&params(0.1, 1.0), &opt).unwrap();
        assert!((fl[0].value - 3.413447460685429).abs() < 1e-12);
    }

    #[test]
    fn abe_esseen_reference_values() {
        let opt = Optimizer1D::default();
        let b = abe_lower_esseen(1.0, &opt).unwrap();
        let exact = (10.0_f64.sqrt() + 3.0) / (6.0 * (2.0 * PI).sqrt());
        assert!((b.value - exact).abs() < 1e-12);
        assert!((b.witness_p.unwrap() - (2.5_f64.sqrt() - 1.0)).abs() < 1e-7);

        let b02 = abe_lower_esseen(0.2, &opt).unwrap();
        assert!(b02.value >= 0.5384 && b02.value - 0.5384 < 1e-3);
        assert!((b02.witness_p.unwrap() - 0.6039).abs() < 1e-3);
        let b5 = abe_lower_esseen(5.0, &opt).unwrap();
        assert!(b5.value >= 0.1904 && b5.value - 0.1904 < 1e-3);
        assert!((b5.witness_p.unwrap() - 0.6126).abs() < 1e-3);
    }

    #[test]
    fn abe_esseen_nonincreasing_in_gamma() {
        let opt = Optimizer1D::default();
        let mut prev = f64::INFINITY;
        let mut g = 0.1;
        while g <= 10.0 {
            let v = abe_lower_esseen(g, &opt).unwrap().value;
            assert!(v <= prev + 1e-12, "gamma={g}");
            prev = v;
            g += 0.1;
        }
    }

    #[test]
    fn abe_rozovskii_branches() {
        // a >= 2/3 floor.
        let b = abe_lower_rozovskii(&params(1.0, 0.7)).unwrap();
        assert!((b.value - 0.3989422804014327).abs() < 1e-14);
        // a → 0 limit.
        let b0 = abe_lower_rozovskii(&params(1.0, 1e-12)).unwrap();
        assert!((b0.value - 0.5633155396264169).abs() < 1e-12);
        // Continuity at a = 2/3: evaluate both branches.
        let s5 = 5.0_f64.sqrt();
        let a = 2.0 / 3.0;
        let branch1 = (1.0 + s5) / (3.0 * (2.0 * PI).sqrt() * (2.0 * a * (s5 - 2.0) + 3.0 - s5));
        assert!((branch1 - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-12);
        // a = γ/(ε ∨ 1) uses ε ∨ 1.
        let wide = abe_lower_rozovskii(&params(3.0, 1.0)).unwrap();
        let narrow = abe_lower_rozovskii(&params(0.5, 1.0)).unwrap();
        assert!(wide.value > narrow.value);
    }

    #[test]
    fn asymptotic_bounds_values() {
        let all = asymptotic_lower_bounds(&params(2.0, 1.0)).unwrap();
        assert!((all[0].value - 0.19947114020071635).abs() < 1e-14);
        assert!((all[1].value - 0.5).abs() < 1e-15);
        assert_eq!(all[2].value, COND_UP_AEX_G1_FLOOR);

        let half = asymptotic_lower_bounds(&params(0.5, 1.0)).unwrap();
        assert!((half[1].value - 1.0).abs() < 1e-15);
        assert!((half[2].value - 0.5).abs() < 1e-15);

        let mid = asymptotic_lower_bounds(&params(1.05, 1.0)).unwrap();
        let expect = bessel_i0_scaled(1.0 / (1.05 * 1.05)).unwrap() / 2.0;
        assert!((mid[2].value - expect).abs() < 1e-15);
    }

    #[test]
    fn bessel_argmax_backs_the_g1_threshold() {
        // α* = argmax √α e^{-α} I₀(α), found by golden section on (0.1, 2).
        let f = |a: f64| a.sqrt() * bessel_i0_scaled(a).unwrap();
        let (mut a, mut b) = (0.1, 2.0);
        const INV_PHI: f64 = 0.618_033_988_749_894_9;
        let mut c = b - INV_PHI * (b - a);
        let mut d = a + INV_PHI * (b - a);
        for _ in 0..200 {
            if f(c) < f(d) {
                a = c;
                c = d;
                d = a + INV_PHI * (b - a);
            } else {
                b = d;
                d = c;
                c = b - INV_PHI * (b - a);
            }
        }
        let alpha_star = 0.5 * (a + b);
        assert!((alpha_star - 0.78998).abs() < 1e-3);
        assert!(f(alpha_star) > 0.4688);
        assert!((1.0 / alpha_star.sqrt() - COND_UP_AEX_G1_EPS_THRESHOLD).abs() < 2e-4);
        assert!((f(alpha_star) / 2.0 - COND_UP_AEX_G1_FLOOR).abs() < 5e-5);
    }

    #[test]
    fn gamma0_value_and_defining_property() {
        let g0 = gamma0();
        assert!((g0 - 4.7010).abs() < 1e-3, "gamma0 = {g0}");
        let opt = Optimizer1D::default();
        let v = abe_lower_esseen(g0, &opt).unwrap().value;
        assert!((v - 1.0 / (2.0 * (2.0 * PI).sqrt())).abs() < 1e-9);
        let at_one = abe_lower_esseen(1.0, &opt).unwrap().value;
        assert!(at_one > 1.0 / (2.0 * (2.0 * PI).sqrt()));
    }

    #[test]
    fn two_sided_pairs() {
        let r = aex_two_sided(&params(1.0, 1.0)).unwrap();
        assert!((r.esseen.lower.value - 0.4097321837023963).abs() < 1e-12);
        assert!(r.esseen.upper.value <= 1.80597);
        assert!(r.esseen.lower.value <= r.esseen.upper.value);
        let roz = r.rozovskii.unwrap();
        assert!((roz.lower.value - 0.3989422804014327).abs() < 1e-14);
        assert!(roz.lower.value <= roz.upper.value);

        // Lower <= upper across a parameter sweep.
        for &eps in &[0.4, 1.0, 2.0, 5.0, INF] {
            for &gamma in &[0.2, 0.56, 1.0, 3.0] {
                let r = aex_two_sided(&params(eps, gamma)).unwrap();
                assert!(r.esseen.lower.value <= r.esseen.upper.value, "eps={eps} gamma={gamma}");
                if let Some(roz) = r.rozovskii {
                    assert!(roz.lower.value <= roz.upper.value, "eps={eps} gamma={gamma}");
                }
            }
        }
    }

    #[test]
    fn reference_table_lookups() {
        assert_eq!(reference_lookup(&REFERENCE_TABLE_ESSEEN, 1.0, 0.72), Some(2.7298));
        let gs = core_constants().gamma_star;
        assert_eq!(reference_lookup(&REFERENCE_TABLE_ROZOVSKII, 1.0, gs), Some(2.7286));
        assert_eq!(reference_lookup(&REFERENCE_TABLE_ESSEEN, 9.99, 0.123), None);
    }

    #[test]
    fn lower_bounds_dominated_by_reference_uppers() {
        // Every computed A_E/A_R lower bound stays below the quoted upper
        // constant at the same (ε, γ).
        let opt = Optimizer1D::default();
        for row in REFERENCE_TABLE_ESSEEN.iter() {
            let gamma = row.gamma.resolve();
            if row.epsilon <= 0.0 || gamma.is_nan() || gamma.is_infinite() {
                continue;
            }
            let pr = params(row.epsilon, gamma);
            let (_, v) = sup_over_p(|p| k_function(KFunction::EsseenGStar, p, &pr).unwrap(), &opt).unwrap();
            assert!(v <= row.bound, "esseen ({}, {gamma}): {v} vs {}", row.epsilon, row.bound);
        }
        for row in REFERENCE_TABLE_ROZOVSKII.iter() {
            let gamma = row.gamma.resolve();
            if row.epsilon <= 0.0 || gamma.is_nan() || gamma.is_infinite() {
                continue;
            }
            let pr = params(row.epsilon, gamma);
            let (_, v) = sup_over_p(|p| k_function(KFunction::RozovskiiGStar, p, &pr).unwrap(), &opt).unwrap();
            assert!(v <= row.bound, "rozovskii ({}, {gamma}): {v} vs {}", row.epsilon, row.bound);
        }
    }

    #[test]
    fn table_grids_have_expected_sizes() {
        assert_eq!(TABLE3_GRID_ESSEEN.len() + TABLE3_GRID_ROZOVSKII.len(), 38);
        assert_eq!(compute_table3().unwrap().len(), 38);
        assert_eq!(compute_table4().unwrap().len(), 10);
    }
}
