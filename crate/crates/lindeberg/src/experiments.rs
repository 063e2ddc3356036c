//! Convergence experiments and the randomized inequality fuzzer.
//!
//! The lattice-edge experiment tracks Δ_n √n for two-point sums against its
//! limit (p+1)/(3√(2π p q)); the three-point experiment tracks P(S_n = 0)/2
//! against e^{-α} I₀(α)/2; the fuzzer stresses the fraction inequalities and
//! structural properties on random centered lattice laws with a fixed seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bounds::{ReferenceRow, REFERENCE_TABLE_ESSEEN, REFERENCE_TABLE_ROZOVSKII};
use crate::dist::{convolve_iid, Atom, DiscreteDistribution, IidConvolution, DEFAULT_ATOM_LIMIT};
use crate::error::{Error, Result};
use crate::fractions::{
    abs_third_moment_fraction, esseen_fraction_iid, rozovskii_fraction_iid, third_moment_fraction,
    FractionParams, WeightFunction,
};
use crate::specfun::bessel_i0_scaled;

/// Observed-versus-target record of one convergence run.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub experiment: String,
    pub n_values: Vec<usize>,
    pub observed: Vec<f64>,
    pub target: f64,
    /// |running max of the final 20% of observations - target|.
    pub max_abs_error_at_tail: f64,
}

impl ConvergenceReport {
    fn finish(experiment: &str, n_values: Vec<usize>, observed: Vec<f64>, target: f64) -> Self {
        let tail_start = n_values.len() - (n_values.len() / 5).max(1);
        let tail_max = observed[tail_start..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ConvergenceReport {
            experiment: experiment.to_string(),
            n_values,
            observed,
            target,
            max_abs_error_at_tail: (tail_max - target).abs(),
        }
    }

    /// Largest observation among the final 20% of entries.
    pub fn tail_running_max(&self) -> f64 {
        let tail_start = self.n_values.len() - (self.n_values.len() / 5).max(1);
        self.observed[tail_start..].iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for (n, obs) in self.n_values.iter().zip(&self.observed) {
            out.push_str(&format_csv_row(&self.experiment, *n, *obs, self.target));
            out.push('\n');
        }
        out
    }
}

pub const CSV_HEADER: &str = "experiment,n,observed,target,error";

fn format_csv_row(experiment: &str, n: usize, observed: f64, target: f64) -> String {
    format!("{experiment},{n},{observed},{target},{}", observed - target)
}

/// One parsed CSV record, for round-trip checks and downstream tooling.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvRecord {
    pub experiment: String,
    pub n: usize,
    pub observed: f64,
    pub target: f64,
    pub error: f64,
}

/// Parses a report CSV back into records; inverse of the emitters here.
pub fn parse_csv(text: &str) -> Result<Vec<CsvRecord>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h == CSV_HEADER => {}
        other => {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: format!("expected header {CSV_HEADER:?}, got {other:?}"),
            })
        }
    }
    let mut out = Vec::new();
    for (i, line) in lines.enumerate() {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 5 {
            return Err(Error::Parse { line: i + 2, column: 1, message: format!("expected 5 fields, got {}", fields.len()) });
        }
        let parse_f = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| Error::Parse { line: i + 2, column: 1, message: format!("bad number {s:?}") })
        };
        out.push(CsvRecord {
            experiment: fields[0].to_string(),
            n: fields[1].parse().map_err(|_| Error::Parse { line: i + 2, column: 1, message: format!("bad n {:?}", fields[1]) })?,
            observed: parse_f(fields[2])?,
            target: parse_f(fields[3])?,
            error: parse_f(fields[4])?,
        });
    }
    Ok(out)
}

fn validate_n_values(n_values: &[usize], max_allowed: usize) -> Result<()> {
    if n_values.is_empty() {
        return Err(Error::domain("experiment", "n_values must be nonempty".to_string()));
    }
    if !n_values.windows(2).all(|w| w[0] < w[1]) {
        return Err(Error::domain("experiment", "n_values must be strictly increasing".to_string()));
    }
    let top = *n_values.last().unwrap();
    if top > max_allowed {
        return Err(Error::domain("experiment", format!("n = {top} exceeds the desk-scale cap {max_allowed}")));
    }
    Ok(())
}

/// Δ_n √n along `n_values` for i.i.d. two-point(p) sums, against the lattice
/// expansion limit (p+1)/(3 √(2π p q)). The limit is a limsup: the sequence
/// oscillates, so convergence is judged on running maxima.
pub fn esseen_expansion_experiment(p: f64, n_values: &[usize]) -> Result<ConvergenceReport> {
    if !(p > 0.5 && p < 1.0) {
        return Err(Error::domain("esseen_expansion_experiment", format!("need p in (1/2, 1), got {p}")));
    }
    validate_n_values(n_values, 10_000)?;
    let q = 1.0 - p;
    let target = (p + 1.0) / (3.0 * (2.0 * std::f64::consts::PI * p * q).sqrt());
    let base = DiscreteDistribution::two_point(p)?;
    let mut conv = IidConvolution::new(&base, DEFAULT_ATOM_LIMIT)?;
    let mut observed = Vec::with_capacity(n_values.len());
    let mut want = n_values.iter().copied().peekable();
    let top = *n_values.last().unwrap();
    for n in 1..=top {
        if n > 1 {
            conv.step()?;
        }
        if want.peek() == Some(&n) {
            want.next();
            observed.push(conv.distance_to_normal() * (n as f64).sqrt());
        }
    }
    Ok(ConvergenceReport::finish("esseen-expansion", n_values.to_vec(), observed, target))
}

/// P(S_n = 0)/2 for i.i.d. symmetric three-point(α/n) sums at even n,
/// against the limit e^{-α} I₀(α)/2.
pub fn three_point_bessel_experiment(alpha: f64, n_values: &[usize]) -> Result<ConvergenceReport> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::domain("three_point_bessel_experiment", format!("need finite alpha > 0, got {alpha}")));
    }
    validate_n_values(n_values, 100_000)?;
    for &n in n_values {
        if n % 2 != 0 || (n as f64) <= alpha {
            return Err(Error::domain(
                "three_point_bessel_experiment",
                format!("every n must be even and exceed alpha; offending n = {n}"),
            ));
        }
    }
    let target = bessel_i0_scaled(alpha)? / 2.0;
    let mut observed = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let base = DiscreteDistribution::symmetric_three_point(alpha / n as f64)?;
        let law = convolve_iid(&base, n)?;
        observed.push(law.prob_at_zero_sum() / 2.0);
    }
    Ok(ConvergenceReport::finish("bessel", n_values.to_vec(), observed, target))
}

/// Configuration of the randomized inequality fuzzer.
#[derive(Debug, Clone, Copy)]
pub struct FuzzConfig {
    pub seed: u64,
    pub trials: usize,
    /// Cap on the number of convolved summands per trial.
    pub max_n: usize,
}

impl Default for FuzzConfig {
    fn default() -> Self {
        FuzzConfig { seed: 0, trials: 100, max_n: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzViolation {
    pub trial: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FuzzRow {
    pub experiment: String,
    pub n: usize,
    pub observed: f64,
    pub target: f64,
}

/// Outcome of a fuzz run. Violations are findings: the run itself returns Ok
/// and callers decide how loudly to fail.
#[derive(Debug, Clone, PartialEq)]
pub struct FuzzReport {
    pub seed: u64,
    pub trials: usize,
    pub max_esseen_ratio: f64,
    pub max_rozovskii_ratio: f64,
    pub violations: Vec<FuzzViolation>,
    pub rows: Vec<FuzzRow>,
}

impl FuzzReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for row in &self.rows {
            out.push_str(&format_csv_row(&row.experiment, row.n, row.observed, row.target));
            out.push('\n');
        }
        out
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Random centered unit-variance law. Grid-valued raw atoms keep the support
/// a lattice, so exact convolution at n <= 200 stays small.
fn random_distribution(rng: &mut ChaCha8Rng) -> DiscreteDistribution {
    loop {
        match rng.random_range(0u8..4) {
            0 => {
                let p = rng.random_range(0.505..0.98);
                return DiscreteDistribution::two_point(p).expect("valid p");
            }
            1 => {
                let p = rng.random_range(0.05..0.95);
                return DiscreteDistribution::symmetric_three_point(p).expect("valid p");
            }
            _ => {
                let m = rng.random_range(2usize..=6);
                let mut ks: Vec<i32> = Vec::with_capacity(m);
                while ks.len() < m {
                    let k = rng.random_range(-20i32..=20);
                    if !ks.contains(&k) {
                        ks.push(k);
                    }
                }
                ks.sort_unstable();
                let mut ws: Vec<f64> = (0..m).map(|_| -rng.random::<f64>().max(1e-12).ln()).collect();
                let total: f64 = ws.iter().sum();
                for w in &mut ws {
                    *w /= total;
                }
                if ws.iter().any(|&w| w < 1e-4) {
                    continue;
                }
                let raw: Vec<Atom> = ks.iter().zip(&ws).map(|(&k, &w)| Atom { x: k as f64 / 4.0, p: w }).collect();
                let Ok(d) = DiscreteDistribution::new(raw) else { continue };
                let mean = d.mean();
                let sd = d.variance().sqrt();
                let centered: Vec<Atom> =
                    d.atoms().iter().map(|a| Atom { x: (a.x - mean) / sd, p: a.p }).collect();
                if let Ok(d) = DiscreteDistribution::new(centered) {
                    return d;
                }
            }
        }
    }
}

fn random_custom_weight(rng: &mut ChaCha8Rng) -> WeightFunction {
    match rng.random_range(0u8..3) {
        0 => {
            let c = rng.random_range(0.2..5.0);
            let delta = rng.random_range(0.0..1.0);
            WeightFunction::custom(move |z: f64| c * z.powf(delta)).expect("power weights are admissible")
        }
        1 => {
            let a = rng.random_range(0.2..5.0);
            WeightFunction::custom(move |z: f64| z.min(a)).expect("capped identity is admissible")
        }
        _ => {
            let a = rng.random_range(0.2..5.0);
            WeightFunction::custom(move |z: f64| z.max(a)).expect("floored identity is admissible")
        }
    }
}

fn usable_reference_cells(table: &[ReferenceRow]) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
    table.iter().filter_map(|row| {
        let gamma = row.gamma.resolve();
        if row.epsilon > 0.0 && gamma.is_finite() && gamma > 0.0 && row.bound.is_finite() {
            Some((row.epsilon, gamma, row.bound))
        } else {
            None
        }
    })
}

/// Runs `trials` randomized checks of the fraction inequalities against the
/// quoted reference constants plus the structural fraction properties
/// (weight sandwich, scale invariance, g1 bounds, |M| <= Λ). Deterministic
/// per seed; trial i derives its own sub-seed.
pub fn inequality_fuzzer(config: &FuzzConfig) -> Result<FuzzReport> {
    if config.trials == 0 {
        return Err(Error::domain("inequality_fuzzer", "need trials >= 1".to_string()));
    }
    let mut report = FuzzReport {
        seed: config.seed,
        trials: config.trials,
        max_esseen_ratio: 0.0,
        max_rozovskii_ratio: 0.0,
        violations: Vec::new(),
        rows: Vec::new(),
    };
    for trial in 0..config.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(config.seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)));
        let d = random_distribution(&mut rng);
        let n = rng.random_range(1..=config.max_n.max(1));
        let law = convolve_iid(&d, n)?;
        let delta = law.uniform_distance_to_normal();

        let violate = |msg: String, violations: &mut Vec<FuzzViolation>| {
            violations.push(FuzzViolation { trial, message: msg });
        };

        // Δ_n <= C(ε, γ) L_{E,n}(g*, ε, γ) for every quoted Esseen cell.
        let mut worst = (0.0_f64, 0.0_f64);
        for (eps, gamma, c) in usable_reference_cells(&REFERENCE_TABLE_ESSEEN) {
            let params = FractionParams { epsilon: eps, gamma };
            let l = esseen_fraction_iid(&d, n, &WeightFunction::star(), &params)?.value;
            if l <= 0.0 {
                continue;
            }
            let ratio = delta / l;
            if ratio > worst.0 {
                worst = (ratio, c);
            }
            if ratio > c + 1e-9 {
                violate(
                    format!("esseen ratio {ratio} exceeds reference {c} at (eps={eps}, gamma={gamma}), n={n}, base={:?}", d.atoms()),
                    &mut report.violations,
                );
            }
        }
        report.max_esseen_ratio = report.max_esseen_ratio.max(worst.0);
        report.rows.push(FuzzRow { experiment: "fuzz-esseen".to_string(), n, observed: worst.0, target: worst.1 });

        let mut worst = (0.0_f64, 0.0_f64);
        for (eps, gamma, c) in usable_reference_cells(&REFERENCE_TABLE_ROZOVSKII) {
            let params = FractionParams { epsilon: eps, gamma };
            let l = rozovskii_fraction_iid(&d, n, &WeightFunction::star(), &params)?.value;
            if l <= 0.0 {
                continue;
            }
            let ratio = delta / l;
            if ratio > worst.0 {
                worst = (ratio, c);
            }
            if ratio > c + 1e-9 {
                violate(
                    format!("rozovskii ratio {ratio} exceeds reference {c} at (eps={eps}, gamma={gamma}), n={n}, base={:?}", d.atoms()),
                    &mut report.violations,
                );
            }
        }
        report.max_rozovskii_ratio = report.max_rozovskii_ratio.max(worst.0);
        report.rows.push(FuzzRow { experiment: "fuzz-rozovskii".to_string(), n, observed: worst.0, target: worst.1 });

        // Structural properties at a random (ε, γ).
        let eps = [0.3, 0.75, 1.0, 1.6, 3.0][rng.random_range(0usize..5)];
        let gamma = rng.random_range(0.1..5.0);
        let params = FractionParams { epsilon: eps, gamma };

        // |M_n(z)| <= Λ_n(z).
        let single = [d.clone()];
        let top_mag = d.atoms().iter().map(|a| a.x.abs()).fold(0.0_f64, f64::max);
        for _ in 0..8 {
            let z = rng.random_range(1e-3..1.2 * top_mag.max(1.0));
            let m = third_moment_fraction(&single, z)?;
            let l = abs_third_moment_fraction(&single, z)?;
            if m.abs() > l + 1e-15 {
                violate(format!("|M({z})| = {} exceeds Lambda({z}) = {l}", m.abs()), &mut report.violations);
            }
        }

        // Sandwich g0 <= g <= g1 and scale invariance for a random custom g.
        let g = random_custom_weight(&mut rng);
        let scale = if trial % 2 == 0 { 0.1 } else { 7.0 };
        let g_scaled = {
            let g = g.clone();
            WeightFunction::custom(move |z: f64| scale * g.eval(z, f64::NAN)).expect("scaled copy stays admissible")
        };
        let e_g0 = esseen_fraction_iid(&d, n, &WeightFunction::g0(), &params)?.value;
        let e_g = esseen_fraction_iid(&d, n, &g, &params)?.value;
        let e_g1 = esseen_fraction_iid(&d, n, &WeightFunction::g1(), &params)?.value;
        if !(e_g0 <= e_g + 1e-9 && e_g <= e_g1 + 1e-9) {
            violate(format!("esseen sandwich broken: {e_g0} / {e_g} / {e_g1}"), &mut report.violations);
        }
        let e_gs = esseen_fraction_iid(&d, n, &g_scaled, &params)?.value;
        if (e_gs - e_g).abs() > 1e-12 * e_g.abs().max(1.0) {
            violate(format!("esseen scale invariance broken: {e_g} vs {e_gs}"), &mut report.violations);
        }
        let r_g0 = rozovskii_fraction_iid(&d, n, &WeightFunction::g0(), &params)?.value;
        let r_g = rozovskii_fraction_iid(&d, n, &g, &params)?.value;
        let r_g1 = rozovskii_fraction_iid(&d, n, &WeightFunction::g1(), &params)?.value;
        if !(r_g0 <= r_g + 1e-9 && r_g <= r_g1 + 1e-9) {
            violate(format!("rozovskii sandwich broken: {r_g0} / {r_g} / {r_g1}"), &mut report.violations);
        }
        let r_gs = rozovskii_fraction_iid(&d, n, &g_scaled, &params)?.value;
        if (r_gs - r_g).abs() > 1e-12 * r_g.abs().max(1.0) {
            violate(format!("rozovskii scale invariance broken: {r_g} vs {r_gs}"), &mut report.violations);
        }

        // g1 bounds: 1 <= L_E(g1) <= max{ε,1} max{γ,1}; 1 <= L_R(g1) <= max{ε,1}(γ+1).
        if e_g1 < 1.0 - 1e-12 || e_g1 > eps.max(1.0) * gamma.max(1.0) + 1e-9 {
            violate(format!("esseen g1 bound broken: {e_g1} at (eps={eps}, gamma={gamma})"), &mut report.violations);
        }
        if r_g1 < 1.0 - 1e-12 || r_g1 > eps.max(1.0) * (gamma + 1.0) + 1e-9 {
            violate(format!("rozovskii g1 bound broken: {r_g1} at (eps={eps}, gamma={gamma})"), &mut report.violations);
        }
    }
    Ok(report)
}

/// Binomial double-sum for P(S_n = 0) under the symmetric three-point(p)
/// law: (1-p)^n Σ_k n!/((n-2k)! (k!)²) ((p/2)/(1-p))^{2k}.
///
/// Test oracle for the convolution route; kept independent of it.
pub fn three_point_zero_mass_formula(p: f64, n: usize) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::domain("three_point_zero_mass_formula", format!("need p in (0,1), got {p}")));
    }
    let x = (0.5 * p) / (1.0 - p);
    let mut term = (1.0 - p).powi(n as i32);
    let mut sum = term;
    for k in 0..n / 2 {
        // term_{k+1}/term_k = (n-2k)(n-2k-1) x² / (k+1)².
        let kf = k as f64;
        let nf = n as f64;
        term *= (nf - 2.0 * kf) * (nf - 2.0 * kf - 1.0) * x * x / ((kf + 1.0) * (kf + 1.0));
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    Ok(sum)
}
