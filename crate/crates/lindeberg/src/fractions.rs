//! Esseen-type and Rozovskii-type truncated-moment fractions.
//!
//! Both fractions are evaluated two ways: from their defining suprema (brute
//! force, any finite set of centered summands, any weight in the admissible
//! class) and through closed forms for i.i.d. two-point summands. The two
//! routes are held to 1e-12 relative agreement in tests.
//!
//! The admissible weight class consists of nondecreasing g with g(z) > 0 for
//! z > 0 and z/g(z) nondecreasing; its extreme members relative to the scale
//! B are g0(z) = min{z, B} and g1(z) = max{z, B}.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::sync::Arc;

use crate::dist::{DiscreteDistribution, KahanSum};
use crate::error::{Error, Result};

/// The four canonical weight functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WeightKind {
    /// g(z) = z.
    Star,
    /// g(z) = 1.
    Const,
    /// g(z) = min{z, B}.
    G0,
    /// g(z) = max{z, B}.
    G1,
}

type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A member of the admissible weight class.
#[derive(Clone)]
pub enum WeightFunction {
    Canonical(WeightKind),
    Custom(WeightFn),
}

impl std::fmt::Debug for WeightFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            WeightFunction::Canonical(k) => write!(f, "WeightFunction::Canonical({k:?})"),
            WeightFunction::Custom(_) => write!(f, "WeightFunction::Custom(..)"),
        }
    }
}

impl From<WeightKind> for WeightFunction {
    fn from(k: WeightKind) -> Self {
        WeightFunction::Canonical(k)
    }
}

impl WeightFunction {
    pub fn star() -> Self {
        WeightKind::Star.into()
    }

    pub fn constant() -> Self {
        WeightKind::Const.into()
    }

    pub fn g0() -> Self {
        WeightKind::G0.into()
    }

    pub fn g1() -> Self {
        WeightKind::G1.into()
    }

    /// Wraps an arbitrary evaluator after spot-verifying class membership
    /// (g nondecreasing, positive, z/g nondecreasing) on a 1000-point log
    /// grid over [1e-6, 1e6].
    pub fn custom<F>(f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let mut prev_g = f64::NEG_INFINITY;
        let mut prev_ratio = f64::NEG_INFINITY;
        for i in 0..1000 {
            let z = 10f64.powf(-6.0 + 12.0 * i as f64 / 999.0);
            let g = f(z);
            if !(g > 0.0) || !g.is_finite() {
                return Err(Error::InvalidWeight(format!("g({z}) = {g} is not positive and finite")));
            }
            if g < prev_g * (1.0 - 1e-12) {
                return Err(Error::InvalidWeight(format!("g is decreasing near z = {z}")));
            }
            let ratio = z / g;
            if ratio < prev_ratio * (1.0 - 1e-12) {
                return Err(Error::InvalidWeight(format!("z/g(z) is decreasing near z = {z}")));
            }
            prev_g = prev_g.max(g);
            prev_ratio = prev_ratio.max(ratio);
        }
        Ok(WeightFunction::Custom(Arc::new(f)))
    }

    /// Evaluates g(z) given the standardization scale B.
    pub fn eval(&self, z: f64, b: f64) -> f64 {
        match self {
            WeightFunction::Canonical(WeightKind::Star) => z,
            WeightFunction::Canonical(WeightKind::Const) => 1.0,
            WeightFunction::Canonical(WeightKind::G0) => z.min(b),
            WeightFunction::Canonical(WeightKind::G1) => z.max(b),
            WeightFunction::Custom(f) => f(z),
        }
    }

    /// lim_{z→∞} g(z)/z, which exists for every class member; unknown for
    /// custom evaluators.
    fn tail_linear_ratio(&self) -> Option<f64> {
        match self {
            WeightFunction::Canonical(WeightKind::Star) | WeightFunction::Canonical(WeightKind::G1) => Some(1.0),
            WeightFunction::Canonical(WeightKind::Const) | WeightFunction::Canonical(WeightKind::G0) => Some(0.0),
            WeightFunction::Custom(_) => None,
        }
    }

    fn is_custom(&self) -> bool {
        matches!(self, WeightFunction::Custom(_))
    }
}

/// (ε, γ) pair; ε may be `f64::INFINITY`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionParams {
    pub epsilon: f64,
    pub gamma: f64,
}

impl FractionParams {
    pub fn new(epsilon: f64, gamma: f64) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::domain("FractionParams", format!("need epsilon > 0, got {epsilon}")));
        }
        if !(gamma > 0.0) {
            return Err(Error::domain("FractionParams", format!("need gamma > 0, got {gamma}")));
        }
        Ok(FractionParams { epsilon, gamma })
    }
}

/// Where a supremum was attained (or approached from one side).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Attained {
    At(f64),
    FromLeft(f64),
    FromRight(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    BruteForce,
    ClosedForm,
}

/// A computed fraction value with the maximizing truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FractionValue {
    pub value: f64,
    pub attained_z: Attained,
    pub method: Method,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FractionKind {
    Esseen,
    Rozovskii,
}

/// Pooled truncated-moment sums over a multiset of summands, indexed by the
/// distinct atom magnitudes. Both μ (strict indicator) and σ² (non-strict)
/// are left-continuous step functions jumping exactly at these magnitudes.
struct Pooled {
    mags: Vec<f64>,
    /// sig2_from[i] = Σ x² mass at magnitudes >= mags[i]; last entry 0.
    sig2_from: Vec<f64>,
    /// mu_below[i] = Σ x³ mass at magnitudes < mags[i]; first entry 0.
    mu_below: Vec<f64>,
    /// abs3_below[i] = Σ |x|³ mass below mags[i].
    abs3_below: Vec<f64>,
    /// Σ_k E X_k² over all summands.
    b_sq: f64,
}

#[derive(Debug, Clone, Copy)]
enum Side {
    /// Evaluate exactly at z (left-continuous values).
    At,
    /// Right limit z+.
    Right,
}

impl Pooled {
    fn build(components: &[(&DiscreteDistribution, usize)]) -> Result<Pooled> {
        let mut entries: Vec<(f64, f64, f64, f64)> = Vec::new();
        let mut b_sq = KahanSum::default();
        for &(d, mult) in components {
            if mult == 0 {
                continue;
            }
            let m = mult as f64;
            for a in d.atoms() {
                b_sq.add(m * a.x * a.x * a.p);
                if a.x != 0.0 {
                    entries.push((a.x.abs(), m * a.x * a.x * a.p, m * a.x.powi(3) * a.p, m * a.x.abs().powi(3) * a.p));
                }
            }
        }
        let b_sq = b_sq.value();
        if !(b_sq > 0.0) {
            return Err(Error::DegenerateVariance);
        }
        entries.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut mags: Vec<f64> = Vec::new();
        let mut x2: Vec<f64> = Vec::new();
        let mut x3: Vec<f64> = Vec::new();
        let mut a3: Vec<f64> = Vec::new();
        for (m, v2, v3, va) in entries {
            if mags.last() == Some(&m) {
                let i = mags.len() - 1;
                x2[i] += v2;
                x3[i] += v3;
                a3[i] += va;
            } else {
                mags.push(m);
                x2.push(v2);
                x3.push(v3);
                a3.push(va);
            }
        }
        let len = mags.len();
        let mut sig2_from = vec![0.0; len + 1];
        let mut acc = KahanSum::default();
        for i in (0..len).rev() {
            acc.add(x2[i]);
            sig2_from[i] = acc.value();
        }
        let mut mu_below = vec![0.0; len + 1];
        let mut abs3_below = vec![0.0; len + 1];
        let mut mu_acc = KahanSum::default();
        let mut a3_acc = KahanSum::default();
        for i in 0..len {
            mu_acc.add(x3[i]);
            a3_acc.add(a3[i]);
            mu_below[i + 1] = mu_acc.value();
            abs3_below[i + 1] = a3_acc.value();
        }
        Ok(Pooled { mags, sig2_from, mu_below, abs3_below, b_sq })
    }

    fn index(&self, z: f64, side: Side) -> usize {
        match side {
            Side::At => self.mags.partition_point(|&m| m < z),
            Side::Right => self.mags.partition_point(|&m| m <= z),
        }
    }

    /// Σ_k E X_k² 1(|X_k| >= z) (with the side convention).
    fn sigma2(&self, z: f64, side: Side) -> f64 {
        self.sig2_from[self.index(z, side)]
    }

    /// Σ_k E X_k³ 1(|X_k| < z).
    fn mu(&self, z: f64, side: Side) -> f64 {
        self.mu_below[self.index(z, side)]
    }

    fn abs3(&self, z: f64, side: Side) -> f64 {
        self.abs3_below[self.index(z, side)]
    }

    fn total_mu(&self) -> f64 {
        self.mu_below[self.mags.len()]
    }
}

fn components_of(dists: &[DiscreteDistribution]) -> Vec<(&DiscreteDistribution, usize)> {
    dists.iter().map(|d| (d, 1)).collect()
}

/// Lindeberg fraction L_n(z) = Σ_k σ_k²(z B) / B².
pub fn lindeberg_fraction(dists: &[DiscreteDistribution], z: f64) -> Result<f64> {
    lindeberg_fraction_components(&components_of(dists), z)
}

pub fn lindeberg_fraction_iid(base: &DiscreteDistribution, n: usize, z: f64) -> Result<f64> {
    lindeberg_fraction_components(&[(base, n)], z)
}

fn lindeberg_fraction_components(components: &[(&DiscreteDistribution, usize)], z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::domain("lindeberg_fraction", format!("need z > 0, got {z}")));
    }
    let pooled = Pooled::build(components)?;
    let b = pooled.b_sq.sqrt();
    Ok(pooled.sigma2(z * b, Side::At) / pooled.b_sq)
}

/// Algebraic truncated third-moment fraction M_n(z) = Σ_k μ_k(z B) / B³.
pub fn third_moment_fraction(dists: &[DiscreteDistribution], z: f64) -> Result<f64> {
    let pooled = Pooled::build(&components_of(dists))?;
    if !(z > 0.0) {
        return Err(Error::domain("third_moment_fraction", format!("need z > 0, got {z}")));
    }
    let b = pooled.b_sq.sqrt();
    Ok(pooled.mu(z * b, Side::At) / (pooled.b_sq * b))
}

/// Absolute counterpart Λ_n(z) = Σ_k E|X_k|³ 1(|X_k| < z B) / B³.
pub fn abs_third_moment_fraction(dists: &[DiscreteDistribution], z: f64) -> Result<f64> {
    let pooled = Pooled::build(&components_of(dists))?;
    if !(z > 0.0) {
        return Err(Error::domain("abs_third_moment_fraction", format!("need z > 0, got {z}")));
    }
    let b = pooled.b_sq.sqrt();
    Ok(pooled.abs3(z * b, Side::At) / (pooled.b_sq * b))
}

/// Esseen-type fraction: sup over z in (0, εB) of
/// g(z)/(z B² g(B)) · (γ |Σ μ_k(z)| + z Σ σ_k²(z)).
pub fn esseen_fraction(
    dists: &[DiscreteDistribution],
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    esseen_fraction_components(&components_of(dists), g, params)
}

pub fn esseen_fraction_iid(
    base: &DiscreteDistribution,
    n: usize,
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    esseen_fraction_components(&[(base, n)], g, params)
}

fn require_finite_gamma(params: &FractionParams) -> Result<()> {
    if !params.gamma.is_finite() {
        return Err(Error::domain("fraction", "gamma must be finite for fraction evaluation".to_string()));
    }
    Ok(())
}

fn esseen_fraction_components(
    components: &[(&DiscreteDistribution, usize)],
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    require_finite_gamma(params)?;
    let pooled = Pooled::build(components)?;
    let b = pooled.b_sq.sqrt();
    let eps_b = params.epsilon * b;
    let gamma = params.gamma;
    let k_norm = 1.0 / (pooled.b_sq * g.eval(b, b));

    if g.is_custom() {
        return esseen_custom_sup(&pooled, g, gamma, eps_b, b, k_norm);
    }

    // Between consecutive magnitudes the integrand splits into a
    // nonincreasing part (γ|μ| g(z)/z) plus a nondecreasing part (σ² g(z));
    // for the canonical weights the only interior maximum can sit at the
    // g0 kink z = B, so magnitudes (both one-sided values), the kink, and
    // the left limit at εB are an exact candidate set.
    let h = |z: f64, side: Side| -> f64 {
        let mu = pooled.mu(z, side).abs();
        let s2 = pooled.sigma2(z, side);
        g.eval(z, b) / z * (gamma * mu + z * s2) * k_norm
    };

    let mut best = f64::NEG_INFINITY;
    let mut best_at = Attained::At(f64::NAN);
    let mut consider = |z: f64, side: Side, att: Attained| {
        let v = h(z, side);
        if v > best {
            best = v;
            best_at = att;
        }
    };
    for &m in &pooled.mags {
        if m < eps_b {
            consider(m, Side::At, Attained::At(m));
            consider(m, Side::Right, Attained::FromRight(m));
        } else {
            break;
        }
    }
    if b < eps_b {
        consider(b, Side::At, Attained::At(b));
        consider(b, Side::Right, Attained::FromRight(b));
    }
    if eps_b.is_finite() {
        consider(eps_b, Side::At, Attained::FromLeft(eps_b));
    }
    Ok(FractionValue { value: best, attained_z: best_at, method: Method::BruteForce })
}

/// Branch-and-bound supremum for a custom weight. On each constancy
/// interval the nonincreasing part is bounded by its left endpoint and the
/// nondecreasing part by its right endpoint.
fn esseen_custom_sup(
    pooled: &Pooled,
    g: &WeightFunction,
    gamma: f64,
    eps_b: f64,
    b: f64,
    k_norm: f64,
) -> Result<FractionValue> {
    if eps_b.is_infinite() && pooled.mags.is_empty() {
        return Err(Error::DegenerateVariance);
    }
    // Past the top magnitude the integrand is nonincreasing, so a finite cap
    // just beyond it loses nothing.
    let cap = if eps_b.is_finite() {
        eps_b
    } else {
        pooled.mags[pooled.mags.len() - 1] * (1.0 + 1e-9)
    };

    struct Iv {
        ub: f64,
        a: f64,
        b: f64,
        gm: f64,
        s2: f64,
    }
    impl PartialEq for Iv {
        fn eq(&self, other: &Self) -> bool {
            self.ub == other.ub && self.a == other.a
        }
    }
    impl Eq for Iv {}
    impl PartialOrd for Iv {
        fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Iv {
        fn cmp(&self, other: &Self) -> Ordering {
            self.ub.total_cmp(&other.ub).then(other.a.total_cmp(&self.a))
        }
    }

    let eval_g = |z: f64| g.eval(z, b);
    let point = |z: f64, gm: f64, s2: f64| (gm * eval_g(z) / z + s2 * eval_g(z)) * k_norm;
    let upper = |a: f64, bb: f64, gm: f64, s2: f64| {
        let dec = if gm == 0.0 { 0.0 } else { gm * eval_g(a) / a };
        (dec + s2 * eval_g(bb)) * k_norm
    };

    let mut heap: BinaryHeap<Iv> = BinaryHeap::new();
    let mut lb = f64::NEG_INFINITY;
    let mut lb_at = Attained::At(f64::NAN);
    let record = |v: f64, att: Attained, lb: &mut f64, lb_at: &mut Attained| {
        if v > *lb {
            *lb = v;
            *lb_at = att;
        }
    };

    let mut left = 0.0;
    let mut bps: Vec<f64> = pooled.mags.iter().copied().filter(|&m| m < cap).collect();
    bps.push(cap);
    for &right in &bps {
        let gm = gamma * pooled.mu(left, Side::Right).abs();
        let s2 = pooled.sigma2(left, Side::Right);
        if left > 0.0 {
            record(point(left, gm, s2), Attained::FromRight(left), &mut lb, &mut lb_at);
        }
        let att = if right == cap && eps_b.is_finite() {
            Attained::FromLeft(right)
        } else {
            Attained::At(right)
        };
        record(point(right, gm, s2), att, &mut lb, &mut lb_at);
        heap.push(Iv { ub: upper(left, right, gm, s2), a: left, b: right, gm, s2 });
        left = right;
    }

    for _ in 0..1_000_000 {
        let top = match heap.pop() {
            Some(t) => t,
            None => break,
        };
        if top.ub <= lb + 1e-12 * lb.abs().max(1e-9) {
            break;
        }
        let mid = 0.5 * (top.a + top.b);
        record(point(mid, top.gm, top.s2), Attained::At(mid), &mut lb, &mut lb_at);
        heap.push(Iv { ub: upper(top.a, mid, top.gm, top.s2), a: top.a, b: mid, gm: top.gm, s2: top.s2 });
        heap.push(Iv { ub: upper(mid, top.b, top.gm, top.s2), a: mid, b: top.b, gm: top.gm, s2: top.s2 });
    }
    if let Some(top) = heap.peek() {
        if top.ub > lb + 1e-9 * lb.abs().max(1e-6) {
            return Err(Error::NoConvergence {
                what: "custom-weight supremum refinement",
                iterations: 1_000_000,
                residual: top.ub - lb,
            });
        }
    }
    Ok(FractionValue { value: lb, attained_z: lb_at, method: Method::BruteForce })
}

/// Rozovskii-type fraction:
/// γ g(εB)/(εB) |Σ μ_k(εB)| / (B² g(B)) + sup_{0<z<εB} g(z) Σ σ_k²(z) / (B² g(B)).
///
/// ε = ∞ uses the tail limit of g(z)/z (canonical weights only).
pub fn rozovskii_fraction(
    dists: &[DiscreteDistribution],
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    rozovskii_fraction_components(&components_of(dists), g, params)
}

pub fn rozovskii_fraction_iid(
    base: &DiscreteDistribution,
    n: usize,
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    rozovskii_fraction_components(&[(base, n)], g, params)
}

fn rozovskii_fraction_components(
    components: &[(&DiscreteDistribution, usize)],
    g: &WeightFunction,
    params: &FractionParams,
) -> Result<FractionValue> {
    require_finite_gamma(params)?;
    let pooled = Pooled::build(components)?;
    let b = pooled.b_sq.sqrt();
    let eps_b = params.epsilon * b;
    let k_norm = 1.0 / (pooled.b_sq * g.eval(b, b));

    let mu_term = if eps_b.is_finite() {
        params.gamma * g.eval(eps_b, b) / eps_b * pooled.mu(eps_b, Side::At).abs() * k_norm
    } else {
        let ratio = g.tail_linear_ratio().ok_or(Error::InfiniteEpsilonUnsupported)?;
        params.gamma * ratio * pooled.total_mu().abs() * k_norm
    };

    // g nondecreasing times a left-continuous nonincreasing step: the sup
    // over each constancy interval sits at its right end, so the magnitudes
    // themselves plus the left limit at εB are exact candidates for *every*
    // admissible weight.
    let mut best = f64::NEG_INFINITY;
    let mut best_at = Attained::At(f64::NAN);
    let mut consider = |z: f64, att: Attained| {
        let v = g.eval(z, b) * pooled.sigma2(z, Side::At) * k_norm;
        if v > best {
            best = v;
            best_at = att;
        }
    };
    for &m in &pooled.mags {
        if m < eps_b {
            consider(m, Attained::At(m));
        } else {
            break;
        }
    }
    if eps_b.is_finite() {
        consider(eps_b, Attained::FromLeft(eps_b));
    }
    Ok(FractionValue { value: mu_term + best, attained_z: best_at, method: Method::BruteForce })
}

fn max3(a: f64, b: f64, c: f64) -> f64 {
    a.max(b).max(c)
}

/// Closed forms for both fractions under i.i.d. two-point summands with
/// weight p in [1/2, 1), every canonical weight, all n, ε, γ.
///
/// The g0/Esseen case with ε > 1 follows the exact max-decomposition
/// sup = max{ L(g*, 1, γ), sup_{B<=z<εB} (γ|μ₁(z)|/z + σ₁²(z)) }; the
/// simplified identity L(g0, ε, ·) = L(g*, ε∧1, ·) holds only for γ <= 1
/// and is not used.
pub fn two_point_fraction_closed_form(
    kind: FractionKind,
    g: WeightKind,
    p: f64,
    n: usize,
    params: &FractionParams,
) -> Result<f64> {
    if !(0.5..1.0).contains(&p) {
        return Err(Error::domain("two_point_fraction_closed_form", format!("need p in [1/2, 1), got {p}")));
    }
    if n == 0 {
        return Err(Error::domain("two_point_fraction_closed_form", "need n >= 1".to_string()));
    }
    require_finite_gamma(params)?;
    let eps = params.epsilon;
    let gamma = params.gamma;
    Ok(match (kind, g) {
        (FractionKind::Esseen, WeightKind::Star) => esseen_star(p, n, eps, gamma),
        (FractionKind::Esseen, WeightKind::Const) => esseen_const(p, n, eps, gamma),
        (FractionKind::Esseen, WeightKind::G0) => {
            if eps <= 1.0 || p == 0.5 {
                esseen_star(p, n, eps.min(1.0), gamma)
            } else {
                let q = 1.0 - p;
                let nf = n as f64;
                let ne2 = nf * eps * eps;
                let s_q = (q / (nf * p)).sqrt();
                let s_q3 = (q * q * q / (nf * p)).sqrt();
                if ne2 <= p / q {
                    s_q.max(gamma * s_q3 + p)
                } else if nf <= p / q {
                    max3(s_q, gamma * s_q3 + p, gamma * (p - q) / p)
                } else {
                    max3(q, gamma * q * q + p * p, gamma * (p - q)) / (nf * p * q).sqrt()
                }
            }
        }
        (FractionKind::Esseen, WeightKind::G1) => {
            if eps <= 1.0 {
                esseen_const(p, n, eps, gamma)
            } else if p == 0.5 {
                1.0
            } else {
                let q = 1.0 - p;
                let nf = n as f64;
                let ne2 = nf * eps * eps;
                let s_q3 = (q * q * q / (nf * p)).sqrt();
                let s_npq = (nf * p * q).sqrt();
                if ne2 <= p / q {
                    max3(1.0, gamma * q + p, gamma * s_q3 + p * eps)
                } else if nf <= p / q {
                    max3(1.0, gamma * q + p, (gamma * q * q + p * p) / s_npq)
                        .max(gamma * (p - q) / s_npq)
                } else {
                    max3(1.0, gamma * q + p, gamma * (p - q) / p)
                }
            }
        }
        (FractionKind::Rozovskii, WeightKind::Star) => rozovskii_star(p, n, eps, gamma),
        (FractionKind::Rozovskii, WeightKind::Const) => rozovskii_const(p, n, eps, gamma),
        (FractionKind::Rozovskii, WeightKind::G0) => {
            if eps <= 1.0 {
                rozovskii_star(p, n, eps, gamma)
            } else {
                let q = 1.0 - p;
                let nf = n as f64;
                let ne2 = nf * eps * eps;
                let s_q = (q / (nf * p)).sqrt();
                let s_q3 = (q * q * q / (nf * p)).sqrt();
                let s_p3 = (p * p * p / (nf * q)).sqrt();
                let s_npq = (nf * p * q).sqrt();
                if nf <= q / p {
                    if ne2 <= p / q {
                        gamma / eps * s_q3 + 1.0
                    } else {
                        gamma * (p - q) / (eps * s_npq) + 1.0
                    }
                } else if nf <= p / q {
                    if ne2 <= p / q {
                        gamma / eps * s_q3 + s_q.max(p)
                    } else {
                        gamma * (p - q) / (eps * s_npq) + s_q.max(p)
                    }
                } else {
                    gamma * (p - q) / (eps * s_npq) + s_q.max(s_p3)
                }
            }
        }
        (FractionKind::Rozovskii, WeightKind::G1) => {
            if eps <= 1.0 {
                rozovskii_const(p, n, eps, gamma)
            } else {
                let q = 1.0 - p;
                let nf = n as f64;
                let ne2 = nf * eps * eps;
                let s_q = (q / (nf * p)).sqrt();
                let s_q3 = (q * q * q / (nf * p)).sqrt();
                let s_p3 = (p * p * p / (nf * q)).sqrt();
                let s_npq = (nf * p * q).sqrt();
                if nf <= q / p {
                    if ne2 <= p / q {
                        gamma * s_q3 + s_q.max(eps * p)
                    } else {
                        gamma * (p - q) / s_npq + s_q.max(s_p3)
                    }
                } else if nf <= p / q {
                    if ne2 <= p / q {
                        gamma * s_q3 + (eps * p).max(1.0)
                    } else {
                        gamma * (p - q) / s_npq + s_p3.max(1.0)
                    }
                } else {
                    gamma * (p - q) / s_npq + 1.0
                }
            }
        }
    })
}

fn esseen_star(p: f64, n: usize, eps: f64, gamma: f64) -> f64 {
    let q = 1.0 - p;
    let nf = n as f64;
    let ne2 = nf * eps * eps;
    if ne2 <= q / p {
        eps
    } else if ne2 <= p / q {
        let s_q = (q / (nf * p)).sqrt();
        let s_q3 = (q * q * q / (nf * p)).sqrt();
        s_q.max(gamma * s_q3 + eps * p)
    } else {
        let mid = if p > 0.5 { gamma * q * q + p * p } else { 0.0 };
        max3(q, mid, gamma * (p - q)) / (nf * p * q).sqrt()
    }
}

fn esseen_const(p: f64, n: usize, eps: f64, gamma: f64) -> f64 {
    let q = 1.0 - p;
    let nf = n as f64;
    let ne2 = nf * eps * eps;
    if ne2 <= q / p {
        1.0
    } else if ne2 <= p / q {
        1.0f64.max(gamma * q + p)
    } else {
        let mid = if p > 0.5 { gamma * q + p } else { 0.0 };
        max3(1.0, mid, gamma * (p - q) / p)
    }
}

fn rozovskii_star(p: f64, n: usize, eps: f64, gamma: f64) -> f64 {
    let q = 1.0 - p;
    let nf = n as f64;
    let ne2 = nf * eps * eps;
    if ne2 <= q / p {
        eps
    } else if ne2 <= p / q {
        let s_q = (q / (nf * p)).sqrt();
        let s_q3 = (q * q * q / (nf * p)).sqrt();
        gamma * s_q3 + s_q.max(eps * p)
    } else {
        let s_q = (q / (nf * p)).sqrt();
        let s_p3 = (p * p * p / (nf * q)).sqrt();
        gamma * (p - q) / (nf * p * q).sqrt() + s_q.max(s_p3)
    }
}

fn rozovskii_const(p: f64, n: usize, eps: f64, gamma: f64) -> f64 {
    let q = 1.0 - p;
    let nf = n as f64;
    let ne2 = nf * eps * eps;
    if ne2 <= q / p {
        1.0
    } else if ne2 <= p / q {
        gamma / eps * (q * q * q / (nf * p)).sqrt() + 1.0
    } else {
        gamma * (p - q) / (eps * (nf * p * q).sqrt()) + 1.0
    }
}
