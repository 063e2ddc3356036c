//! Exact finite discrete distributions: construction, truncated moments,
//! n-fold i.i.d. convolution, and the exact uniform distance of the
//! standardized sum to the standard normal law.
//!
//! Convolution of lattice-supported laws is done in integer index space so no
//! floating-point atom merging can split or fuse lattice sites; general
//! supports fall back to exact pairwise sums with a tolerance merge.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::std_normal_cdf;

/// Default cap on the support size produced by convolution.
pub const DEFAULT_ATOM_LIMIT: usize = 2_000_000;

const LATTICE_REL_TOL: f64 = 1e-9;
const MERGE_REL_TOL: f64 = 1e-12;
const MAX_LATTICE_SPAN: usize = 100_000;

/// One support point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub p: f64,
}

/// Neumaier-compensated summation; keeps cumulative probabilities and moment
/// sums accurate enough for the 1e-12 contracts.
#[derive(Debug, Default, Clone, Copy)]
pub(crate) struct KahanSum {
    s: f64,
    c: f64,
}

impl KahanSum {
    pub(crate) fn add(&mut self, v: f64) {
        let t = self.s + v;
        if self.s.abs() >= v.abs() {
            self.c += (self.s - t) + v;
        } else {
            self.c += (v - t) + self.s;
        }
        self.s = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.s + self.c
    }
}

fn kahan_sum(it: impl Iterator<Item = f64>) -> f64 {
    let mut acc = KahanSum::default();
    for v in it {
        acc.add(v);
    }
    acc.value()
}

/// A finite discrete distribution with strictly increasing support and
/// positive probabilities summing to one (within 1e-12).
#[derive(Debug, Clone, PartialEq)]
pub struct DiscreteDistribution {
    atoms: Vec<Atom>,
}

/// Options for [`DiscreteDistribution::from_json_with`].
#[derive(Debug, Default, Clone, Copy)]
pub struct ParseOptions {
    /// Accept documents whose mean is not zero. Off by default: the moment
    /// fractions assume centered summands.
    pub allow_nonzero_mean: bool,
}

#[derive(Deserialize)]
struct DistributionDoc {
    atoms: Vec<Atom>,
}

impl DiscreteDistribution {
    /// Validates, sorts, and merges exactly duplicated support points.
    pub fn new(mut atoms: Vec<Atom>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::Validation("no atoms".into()));
        }
        for a in &atoms {
            if !a.x.is_finite() {
                return Err(Error::Validation(format!("non-finite value {}", a.x)));
            }
            if !(a.p > 0.0) || !a.p.is_finite() {
                return Err(Error::Validation(format!("probability {} at x = {} is not in (0, 1]", a.p, a.x)));
            }
        }
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        let mut merged: Vec<Atom> = Vec::with_capacity(atoms.len());
        for a in atoms {
            match merged.last_mut() {
                Some(last) if last.x == a.x => last.p += a.p,
                _ => merged.push(a),
            }
        }
        let total = kahan_sum(merged.iter().map(|a| a.p));
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Validation(format!("probabilities sum to {total}, not 1")));
        }
        let d = DiscreteDistribution { atoms: merged };
        if !(d.variance() > 0.0) {
            return Err(Error::Validation("zero variance (degenerate distribution)".into()));
        }
        Ok(d)
    }

    /// The zero-mean unit-variance two-point law: mass p at √(q/p) and mass
    /// q = 1-p at -√(p/q).
    pub fn two_point(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("two_point", format!("need p in (0,1), got {p}")));
        }
        let q = 1.0 - p;
        Self::new(vec![Atom { x: -(p / q).sqrt(), p: q }, Atom { x: (q / p).sqrt(), p }])
    }

    /// Mass p/2 at ±1 and 1-p at 0; zero mean, variance p.
    pub fn symmetric_three_point(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::domain("symmetric_three_point", format!("need p in (0,1), got {p}")));
        }
        Self::new(vec![
            Atom { x: -1.0, p: 0.5 * p },
            Atom { x: 0.0, p: 1.0 - p },
            Atom { x: 1.0, p: 0.5 * p },
        ])
    }

    /// Parses the JSON document `{"atoms":[{"x": ..., "p": ...}, ...]}`,
    /// rejecting non-normalized or non-centered inputs.
    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_json_with(text, ParseOptions::default())
    }

    pub fn from_json_with(text: &str, options: ParseOptions) -> Result<Self> {
        let doc: DistributionDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        let d = Self::new(doc.atoms)?;
        if !options.allow_nonzero_mean {
            let scale = d.atoms.iter().map(|a| a.x.abs()).fold(1.0_f64, f64::max);
            let mean = d.mean();
            if mean.abs() > 1e-12 * scale {
                return Err(Error::Validation(format!(
                    "mean is {mean}, not 0 (pass allow_nonzero_mean to accept)"
                )));
            }
        }
        Ok(d)
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mean(&self) -> f64 {
        kahan_sum(self.atoms.iter().map(|a| a.x * a.p))
    }

    /// Raw second moment E X².
    pub fn second_moment(&self) -> f64 {
        kahan_sum(self.atoms.iter().map(|a| a.x * a.x * a.p))
    }

    pub fn variance(&self) -> f64 {
        let m = self.mean();
        self.second_moment() - m * m
    }

    pub fn third_moment(&self) -> f64 {
        kahan_sum(self.atoms.iter().map(|a| a.x * a.x * a.x * a.p))
    }

    pub fn abs_third_moment(&self) -> f64 {
        kahan_sum(self.atoms.iter().map(|a| a.x.abs().powi(3) * a.p))
    }

    /// σ²(z) = E X² 1(|X| >= z): left-continuous nonincreasing step function.
    pub fn tail_second_moment(&self, z: f64) -> f64 {
        kahan_sum(self.atoms.iter().filter(|a| a.x.abs() >= z).map(|a| a.x * a.x * a.p))
    }

    /// μ(z) = E X³ 1(|X| < z); note the strict inequality.
    pub fn trunc_third_moment(&self, z: f64) -> f64 {
        kahan_sum(self.atoms.iter().filter(|a| a.x.abs() < z).map(|a| a.x * a.x * a.x * a.p))
    }

    /// E |X|³ 1(|X| < z).
    pub fn trunc_abs_third_moment(&self, z: f64) -> f64 {
        kahan_sum(self.atoms.iter().filter(|a| a.x.abs() < z).map(|a| a.x.abs().powi(3) * a.p))
    }
}

/// The exact law of the standardized sum S̃_n of n i.i.d. copies of a base
/// distribution.
#[derive(Debug, Clone)]
pub struct SumLaw {
    n: usize,
    base: DiscreteDistribution,
    b_n: f64,
    /// Standardized support with its probabilities, ascending.
    atoms: Vec<Atom>,
    /// Raw (unstandardized) sum values, aligned with `atoms`.
    raw_values: Vec<f64>,
}

impl SumLaw {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &DiscreteDistribution {
        &self.base
    }

    /// Standard deviation of the raw sum S_n.
    pub fn b_n(&self) -> f64 {
        self.b_n
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    /// sup_x |P(S̃_n < x) - Φ(x)|, exact for this discrete law.
    pub fn uniform_distance_to_normal(&self) -> f64 {
        uniform_distance(&self.atoms)
    }

    /// P(S_n = 0) in the raw sum scale (0 if the lattice misses the origin).
    pub fn prob_at_zero_sum(&self) -> f64 {
        let scale = self.raw_values.iter().fold(1.0_f64, |m, v| m.max(v.abs()));
        let mut best = (f64::INFINITY, 0.0);
        for (v, a) in self.raw_values.iter().zip(&self.atoms) {
            if v.abs() < best.0 {
                best = (v.abs(), a.p);
            }
        }
        if best.0 <= 1e-9 * scale {
            best.1
        } else {
            0.0
        }
    }
}

/// Distance of a left-continuous discrete c.d.f. (given by standardized
/// atoms) to Φ: at every atom both one-sided values are candidates.
pub(crate) fn uniform_distance(atoms: &[Atom]) -> f64 {
    let mut cum = KahanSum::default();
    let mut best = 0.0_f64;
    for a in atoms {
        let phi = std_normal_cdf(a.x);
        let left = cum.value();
        cum.add(a.p);
        let right = cum.value();
        best = best.max((left - phi).abs()).max((right - phi).abs());
    }
    best
}

/// Lattice structure of a support: values[i] = offset + index[i] * span.
struct Lattice {
    offset: f64,
    span: f64,
    indices: Vec<usize>,
}

fn detect_lattice(values: &[f64]) -> Option<Lattice> {
    debug_assert!(values.len() >= 2);
    let offset = values[0];
    let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs())).max(1e-300);
    let tol = LATTICE_REL_TOL * scale;
    let mut h = values[1] - offset;
    for w in values.windows(2).skip(1) {
        let mut a = h.max(w[1] - w[0]);
        let mut b = h.min(w[1] - w[0]);
        while b > tol {
            let r = a % b;
            a = b;
            b = r;
        }
        h = a;
    }
    if !(h > tol) {
        return None;
    }
    let mut indices = Vec::with_capacity(values.len());
    for &v in values {
        let k = ((v - offset) / h).round();
        if (v - (offset + k * h)).abs() > tol || k < 0.0 || k > MAX_LATTICE_SPAN as f64 {
            return None;
        }
        indices.push(k as usize);
    }
    Some(Lattice { offset, span: h, indices })
}

enum ConvState {
    /// Dense probabilities over lattice indices 0..len; raw value of index a
    /// after n steps is n*offset + a*span.
    Lattice { base_dense: Vec<f64>, offset: f64, span: f64, probs: Vec<f64> },
    /// Sorted atom list convolved pairwise with tolerance merging.
    General { base: Vec<Atom>, atoms: Vec<Atom> },
}

/// Incremental n-fold i.i.d. convolution. `step` advances n by one; the
/// standardized law or just its distance to Φ can be read at any point.
pub struct IidConvolution {
    base: DiscreteDistribution,
    base_mean: f64,
    base_var: f64,
    n: usize,
    limit: usize,
    state: ConvState,
}

impl IidConvolution {
    pub fn new(base: &DiscreteDistribution, limit: usize) -> Result<Self> {
        let base_var = base.variance();
        if !(base_var > 0.0) {
            return Err(Error::DegenerateVariance);
        }
        let values: Vec<f64> = base.atoms().iter().map(|a| a.x).collect();
        let state = match detect_lattice(&values) {
            Some(lat) => {
                let len = lat.indices[lat.indices.len() - 1] + 1;
                let mut dense = vec![0.0; len];
                for (a, &k) in base.atoms().iter().zip(&lat.indices) {
                    dense[k] = a.p;
                }
                ConvState::Lattice {
                    base_dense: dense.clone(),
                    offset: lat.offset,
                    span: lat.span,
                    probs: dense,
                }
            }
            None => ConvState::General { base: base.atoms().to_vec(), atoms: base.atoms().to_vec() },
        };
        Ok(IidConvolution {
            base: base.clone(),
            base_mean: base.mean(),
            base_var,
            n: 1,
            limit,
            state,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Convolves one more copy of the base law in.
    pub fn step(&mut self) -> Result<()> {
        match &mut self.state {
            ConvState::Lattice { base_dense, probs, .. } => {
                let new_len = probs.len() + base_dense.len() - 1;
                if new_len > self.limit {
                    return Err(Error::SizeLimit { limit: self.limit, needed: new_len });
                }
                let mut next = vec![0.0; new_len];
                for (i, &bp) in base_dense.iter().enumerate() {
                    if bp == 0.0 {
                        continue;
                    }
                    for (j, &op) in probs.iter().enumerate() {
                        next[i + j] += bp * op;
                    }
                }
                *probs = next;
            }
            ConvState::General { base, atoms } => {
                let needed = atoms.len().saturating_mul(base.len());
                if needed > self.limit {
                    return Err(Error::SizeLimit { limit: self.limit, needed });
                }
                let mut pairs: Vec<Atom> = Vec::with_capacity(needed);
                for b in base.iter() {
                    for a in atoms.iter() {
                        pairs.push(Atom { x: a.x + b.x, p: a.p * b.p });
                    }
                }
                pairs.sort_by(|a, b| a.x.total_cmp(&b.x));
                let scale = pairs
                    .last()
                    .map(|a| a.x.abs())
                    .unwrap_or(0.0)
                    .max(pairs.first().map(|a| a.x.abs()).unwrap_or(0.0))
                    .max(1e-300);
                let tol = MERGE_REL_TOL * scale;
                let mut merged: Vec<Atom> = Vec::with_capacity(pairs.len());
                for a in pairs {
                    match merged.last_mut() {
                        Some(last) if a.x - last.x <= tol => {
                            // Probability-weighted location keeps moments honest.
                            let w = last.p + a.p;
                            last.x = (last.x * last.p + a.x * a.p) / w;
                            last.p = w;
                        }
                        _ => merged.push(a),
                    }
                }
                *atoms = merged;
            }
        }
        self.n += 1;
        Ok(())
    }

    fn b_n(&self) -> f64 {
        (self.n as f64 * self.base_var).sqrt()
    }

    /// Snapshot of the standardized law.
    pub fn law(&self) -> SumLaw {
        let n = self.n;
        let b_n = self.b_n();
        let mean_n = n as f64 * self.base_mean;
        let (raw_values, atoms): (Vec<f64>, Vec<Atom>) = match &self.state {
            ConvState::Lattice { offset, span, probs, .. } => {
                let base_raw = n as f64 * offset;
                probs
                    .iter()
                    .enumerate()
                    .filter(|(_, &p)| p > 0.0)
                    .map(|(a, &p)| {
                        let raw = base_raw + a as f64 * span;
                        (raw, Atom { x: (raw - mean_n) / b_n, p })
                    })
                    .unzip()
            }
            ConvState::General { atoms, .. } => atoms
                .iter()
                .map(|a| (a.x, Atom { x: (a.x - mean_n) / b_n, p: a.p }))
                .unzip(),
        };
        SumLaw { n, base: self.base.clone(), b_n, atoms, raw_values }
    }

    /// Δ_n without materializing a `SumLaw`.
    pub fn distance_to_normal(&self) -> f64 {
        let b_n = self.b_n();
        let mean_n = self.n as f64 * self.base_mean;
        let mut cum = KahanSum::default();
        let mut best = 0.0_f64;
        let mut scan = |raw: f64, p: f64| {
            let phi = std_normal_cdf((raw - mean_n) / b_n);
            let left = cum.value();
            cum.add(p);
            let right = cum.value();
            best = best.max((left - phi).abs()).max((right - phi).abs());
        };
        match &self.state {
            ConvState::Lattice { offset, span, probs, .. } => {
                let base_raw = self.n as f64 * offset;
                for (a, &p) in probs.iter().enumerate() {
                    if p > 0.0 {
                        scan(base_raw + a as f64 * span, p);
                    }
                }
            }
            ConvState::General { atoms, .. } => {
                for a in atoms {
                    scan(a.x, a.p);
                }
            }
        }
        best
    }
}

/// Exact law of S̃_n for n i.i.d. copies of `base`, default atom limit.
pub fn convolve_iid(base: &DiscreteDistribution, n: usize) -> Result<SumLaw> {
    convolve_iid_limited(base, n, DEFAULT_ATOM_LIMIT)
}

pub fn convolve_iid_limited(base: &DiscreteDistribution, n: usize, limit: usize) -> Result<SumLaw> {
    if n == 0 {
        return Err(Error::domain("convolve_iid", "need n >= 1".to_string()));
    }
    let mut conv = IidConvolution::new(base, limit)?;
    for _ in 1..n {
        conv.step()?;
    }
    Ok(conv.law())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn two_point_atoms_and_moments() {
        let half = DiscreteDistribution::two_point(0.5).unwrap();
        assert_eq!(half.atoms(), &[Atom { x: -1.0, p: 0.5 }, Atom { x: 1.0, p: 0.5 }]);

        let d = DiscreteDistribution::two_point(0.9).unwrap();
        assert!(close(d.atoms()[0].x, -3.0, 1e-15));
        assert!(close(d.atoms()[0].p, 0.1, 1e-15));
        assert!(close(d.atoms()[1].x, 1.0 / 3.0, 1e-15));
        assert!(close(d.atoms()[1].p, 0.9, 1e-15));

        for p in [0.01, 0.3, 0.5, 0.77, 0.99] {
            let d = DiscreteDistribution::two_point(p).unwrap();
            assert!(d.mean().abs() < 1e-15, "p={p}");
            assert!(close(d.variance(), 1.0, 1e-15), "p={p}");
        }
        assert!(DiscreteDistribution::two_point(0.0).is_err());
        assert!(DiscreteDistribution::two_point(1.0).is_err());
    }

    #[test]
    fn three_point_atoms_and_moments() {
        let d = DiscreteDistribution::symmetric_three_point(0.5).unwrap();
        assert_eq!(
            d.atoms(),
            &[
                Atom { x: -1.0, p: 0.25 },
                Atom { x: 0.0, p: 0.5 },
                Atom { x: 1.0, p: 0.25 }
            ]
        );
        for p in [0.05, 0.4, 0.95] {
            let d = DiscreteDistribution::symmetric_three_point(p).unwrap();
            assert_eq!(d.mean(), 0.0);
            assert!(close(d.variance(), p, 1e-15), "p={p}");
        }
        assert!(DiscreteDistribution::symmetric_three_point(1.0).is_err());
    }

    #[test]
    fn tail_second_moment_two_point_branches() {
        let d = DiscreteDistribution::two_point(0.9).unwrap();
        // Only the atom at -3 survives z = 2: 9 * 0.1.
        assert!(close(d.tail_second_moment(2.0), 0.9, 1e-15));
        for p in [0.6, 0.75, 0.9] {
            let d = DiscreteDistribution::two_point(p).unwrap();
            let q = 1.0 - p;
            let lo = (q / p).sqrt();
            let hi = (p / q).sqrt();
            assert!(close(d.tail_second_moment(0.5 * lo), 1.0, 1e-15));
            assert!(close(d.tail_second_moment(lo), 1.0, 1e-15), "boundary included");
            assert!(close(d.tail_second_moment(hi * 1.0000001), 0.0, 1e-15));
            assert!(close(d.tail_second_moment(0.5 * (lo + hi)), p, 1e-15));
        }
    }

    #[test]
    fn trunc_third_moment_two_point_branches() {
        for p in [0.6, 0.8, 0.95] {
            let d = DiscreteDistribution::two_point(p).unwrap();
            let q = 1.0 - p;
            let lo = (q / p).sqrt();
            let hi = (p / q).sqrt();
            assert_eq!(d.trunc_third_moment(lo), 0.0, "strict truncation at the atom");
            let mid = 0.5 * (lo + hi);
            assert!(close(d.trunc_third_moment(mid).abs(), (q.powi(3) / p).sqrt(), 1e-15));
            assert!(close(
                d.trunc_third_moment(hi * 1.01).abs(),
                (p - q) / (p * q).sqrt(),
                1e-13
            ));
        }
    }

    #[test]
    fn trunc_abs_third_moment_cases() {
        let s = DiscreteDistribution::symmetric_three_point(0.5).unwrap();
        assert!(close(s.trunc_abs_third_moment(2.0), 0.5, 1e-15));
        for z in [0.3, 1.0, 5.0] {
            assert_eq!(s.trunc_third_moment(z), 0.0, "symmetric law has no odd moment");
        }
        let d = DiscreteDistribution::two_point(0.5).unwrap();
        assert_eq!(d.trunc_abs_third_moment(0.5), 0.0);
        assert!(close(d.trunc_abs_third_moment(f64::INFINITY), d.abs_third_moment(), 1e-15));
        // Λ dominates |μ| and grows with z.
        let a = DiscreteDistribution::two_point(0.8).unwrap();
        let mut prev = 0.0;
        for i in 1..40 {
            let z = i as f64 * 0.1;
            let lam = a.trunc_abs_third_moment(z);
            assert!(lam >= a.trunc_third_moment(z).abs() - 1e-16);
            assert!(lam >= prev);
            prev = lam;
        }
    }

    #[test]
    fn convolution_binomial_case() {
        let d = DiscreteDistribution::two_point(0.5).unwrap();
        let law = convolve_iid(&d, 4).unwrap();
        assert!(close(law.b_n(), 2.0, 1e-15));
        let expected = [
            (-2.0, 1.0 / 16.0),
            (-1.0, 4.0 / 16.0),
            (0.0, 6.0 / 16.0),
            (1.0, 4.0 / 16.0),
            (2.0, 1.0 / 16.0),
        ];
        assert_eq!(law.atoms().len(), 5);
        for (atom, (x, p)) in law.atoms().iter().zip(expected) {
            assert!(close(atom.x, x, 1e-14));
            assert!(close(atom.p, p, 1e-15));
        }
    }

    #[test]
    fn convolution_trinomial_case() {
        let p = 0.3;
        let d = DiscreteDistribution::symmetric_three_point(p).unwrap();
        let law = convolve_iid(&d, 2).unwrap();
        let (h, z) = (0.5 * p, 1.0 - p);
        // Raw sums -2..2; standardized by sqrt(2p).
        let b = (2.0 * p).sqrt();
        let expected = [
            (-2.0, h * h),
            (-1.0, 2.0 * h * z),
            (0.0, z * z + 2.0 * h * h),
            (1.0, 2.0 * h * z),
            (2.0, h * h),
        ];
        for (atom, (raw, prob)) in law.atoms().iter().zip(expected) {
            assert!(close(atom.x, raw / b, 1e-14));
            assert!(close(atom.p, prob, 1e-15));
        }
    }

    #[test]
    fn convolution_identity_case() {
        let d = DiscreteDistribution::symmetric_three_point(0.4).unwrap();
        let law = convolve_iid(&d, 1).unwrap();
        let s = d.variance().sqrt();
        for (a, b) in law.atoms().iter().zip(d.atoms()) {
            assert!(close(a.x, b.x / s, 1e-15));
            assert!(close(a.p, b.p, 1e-15));
        }
    }

    #[test]
    fn convolution_moment_conservation_large_n() {
        let d = DiscreteDistribution::two_point(0.7).unwrap();
        let mut conv = IidConvolution::new(&d, DEFAULT_ATOM_LIMIT).unwrap();
        for _ in 1..10_000 {
            conv.step().unwrap();
        }
        let law = conv.law();
        let mass = kahan_sum(law.atoms().iter().map(|a| a.p));
        let mean = kahan_sum(law.atoms().iter().map(|a| a.x * a.p));
        let var = kahan_sum(law.atoms().iter().map(|a| a.x * a.x * a.p)) - mean * mean;
        assert!(close(mass, 1.0, 1e-10));
        assert!(mean.abs() < 1e-10);
        assert!(close(var, 1.0, 1e-10));
    }

    #[test]
    fn convolution_size_limit() {
        let d = DiscreteDistribution::symmetric_three_point(0.5).unwrap();
        match convolve_iid_limited(&d, 100, 50) {
            Err(Error::SizeLimit { .. }) => {}
            other => panic!("expected SizeLimit, got {other:?}"),
        }
    }

    #[test]
    fn general_path_matches_lattice_path() {
        // Values on an irregular grid that still form a lattice, plus a
        // genuinely non-lattice law exercised through the pairwise path.
        let lat = DiscreteDistribution::new(vec![
            Atom { x: -1.5, p: 0.25 },
            Atom { x: 0.25, p: 0.5 },
            Atom { x: 2.0, p: 0.25 },
        ])
        .unwrap();
        // Force the general path by adding an incommensurable value.
        let gen = DiscreteDistribution::new(vec![
            Atom { x: -1.5, p: 0.25 },
            Atom { x: 0.25, p: 0.5 },
            Atom { x: 2.0_f64.sqrt(), p: 0.25 },
        ])
        .unwrap();
        let a = convolve_iid(&lat, 5).unwrap();
        let mass: f64 = a.atoms().iter().map(|x| x.p).sum();
        assert!(close(mass, 1.0, 1e-12));
        let b = convolve_iid(&gen, 5).unwrap();
        let mass: f64 = b.atoms().iter().map(|x| x.p).sum();
        assert!(close(mass, 1.0, 1e-12));
        // Both standardized laws carry mean 0, variance 1.
        for law in [&a, &b] {
            let mean = kahan_sum(law.atoms().iter().map(|x| x.x * x.p));
            let var = kahan_sum(law.atoms().iter().map(|x| x.x * x.x * x.p)) - mean * mean;
            assert!(mean.abs() < 1e-12);
            assert!(close(var, 1.0, 1e-10));
        }
    }

    #[test]
    fn uniform_distance_point_mass() {
        // Degenerate law pinned at 0 with unit "standardization" forced
        // externally: sup |1(x > 0) - Φ(x)| = 0.5.
        let atoms = [Atom { x: 0.0, p: 1.0 }];
        assert!(close(uniform_distance(&atoms), 0.5, 1e-15));
    }

    #[test]
    fn uniform_distance_matches_delta1_at_n1() {
        for i in 1..100 {
            let p = i as f64 / 100.0;
            let d = DiscreteDistribution::two_point(p).unwrap();
            let law = convolve_iid(&d, 1).unwrap();
            let direct = law.uniform_distance_to_normal();
            let formula = crate::constants::delta1(p).unwrap();
            assert!(close(direct, formula, 1e-12), "p={p}: {direct} vs {formula}");
        }
    }

    #[test]
    fn prob_at_zero_sum_three_point() {
        let d = DiscreteDistribution::symmetric_three_point(0.5).unwrap();
        let law = convolve_iid(&d, 4).unwrap();
        // P(S_4 = 0) by direct trinomial enumeration: sum over k of
        // C(4;k,k,4-2k) (1/4)^{2k} (1/2)^{4-2k}.
        let expected = (0.5_f64).powi(4) + 12.0 * (0.25_f64).powi(2) * 0.5 * 0.5
            + 6.0 * (0.25_f64).powi(4);
        assert!(close(law.prob_at_zero_sum(), expected, 1e-15));
        // Odd n has no mass at zero for the two-point(1/2) walk.
        let w = DiscreteDistribution::two_point(0.5).unwrap();
        assert_eq!(convolve_iid(&w, 3).unwrap().prob_at_zero_sum(), 0.0);
    }

    #[test]
    fn three_point_distance_dominates_half_zero_mass() {
        // By symmetry, Δ_n >= Φ(0) - P(S_n < 0) = P(S_n = 0)/2 for even n.
        for p in [0.1, 0.4, 0.8] {
            let d = DiscreteDistribution::symmetric_three_point(p).unwrap();
            for n in [2usize, 10, 40] {
                let law = convolve_iid(&d, n).unwrap();
                let dist = law.uniform_distance_to_normal();
                let floor = law.prob_at_zero_sum() / 2.0;
                assert!(dist >= floor - 1e-15, "p={p} n={n}: {dist} vs {floor}");
            }
        }
    }

    #[test]
    fn parse_accepts_and_sorts() {
        let d = DiscreteDistribution::from_json(r#"{"atoms":[{"x":1,"p":0.5},{"x":-1,"p":0.5}]}"#).unwrap();
        assert_eq!(d.atoms()[0].x, -1.0);
        assert_eq!(d, DiscreteDistribution::two_point(0.5).unwrap());
    }

    #[test]
    fn parse_rejects_bad_documents() {
        match DiscreteDistribution::from_json(r#"{"atoms":[{"x":-1,"p":0.5},{"x":1,"p":0.4}]}"#) {
            Err(Error::Validation(msg)) => assert!(msg.contains("sum")),
            other => panic!("expected validation error, got {other:?}"),
        }
        match DiscreteDistribution::from_json("{\"atoms\": [{\"x\": 1,,}]}") {
            Err(Error::Parse { line, column, .. }) => {
                assert!(line >= 1 && column > 0);
            }
            other => panic!("expected parse error, got {other:?}"),
        }
        // Non-zero mean rejected unless permitted.
        let doc = r#"{"atoms":[{"x":0.0,"p":0.5},{"x":2.0,"p":0.5}]}"#;
        assert!(DiscreteDistribution::from_json(doc).is_err());
        assert!(
            DiscreteDistribution::from_json_with(doc, ParseOptions { allow_nonzero_mean: true }).is_ok()
        );
        // Degenerate (zero-variance) input rejected at construction.
        assert!(DiscreteDistribution::new(vec![Atom { x: 1.0, p: 1.0 }]).is_err());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_centered_dist() -> impl Strategy<Value = DiscreteDistribution> {
            (2usize..=6)
                .prop_flat_map(|m| {
                    (
                        proptest::collection::vec(-20i32..=20, m),
                        proptest::collection::vec(0.05f64..1.0, m),
                    )
                })
                .prop_filter_map("degenerate support", |(ks, ws)| {
                    let mut ks = ks;
                    ks.sort_unstable();
                    ks.dedup();
                    if ks.len() < 2 {
                        return None;
                    }
                    let total: f64 = ws[..ks.len()].iter().sum();
                    let atoms: Vec<Atom> = ks
                        .iter()
                        .zip(&ws)
                        .map(|(&k, &w)| Atom { x: k as f64 / 4.0, p: w / total })
                        .collect();
                    let d = DiscreteDistribution::new(atoms).ok()?;
                    let mean = d.mean();
                    let sd = d.variance().sqrt();
                    let centered: Vec<Atom> = d
                        .atoms()
                        .iter()
                        .map(|a| Atom { x: (a.x - mean) / sd, p: a.p })
                        .collect();
                    DiscreteDistribution::new(centered).ok()
                })
        }

        proptest! {
            #[test]
            fn second_moment_partition_identity(d in arb_centered_dist(), z in 1e-3f64..10.0) {
                let below = kahan_sum(d.atoms().iter().filter(|a| a.x.abs() < z).map(|a| a.x * a.x * a.p));
                let tail = d.tail_second_moment(z);
                prop_assert!((below + tail - d.second_moment()).abs() < 1e-14);
            }

            #[test]
            fn small_n_convolution_matches_direct_enumeration(d in arb_centered_dist(), n in 1usize..=4) {
                let law = convolve_iid(&d, n).unwrap();
                // Oracle: enumerate all m^n outcomes directly.
                let atoms = d.atoms();
                let mut sums: Vec<(f64, f64)> = vec![(0.0, 1.0)];
                for _ in 0..n {
                    let mut next = Vec::with_capacity(sums.len() * atoms.len());
                    for &(x, p) in &sums {
                        for a in atoms {
                            next.push((x + a.x, p * a.p));
                        }
                    }
                    sums = next;
                }
                let mean: f64 = n as f64 * d.mean();
                let b = (n as f64 * d.variance()).sqrt();
                // Compare distribution functions at standardized query points.
                for t in [-2.0, -0.5, 0.0, 0.7, 1.9] {
                    let direct: f64 = sums.iter().filter(|(x, _)| (x - mean) / b < t).map(|(_, p)| p).sum();
                    let viaconv: f64 = law.atoms().iter().filter(|a| a.x < t).map(|a| a.p).sum();
                    prop_assert!((direct - viaconv).abs() < 1e-10, "t={} {} vs {}", t, direct, viaconv);
                }
            }
        }
    }
}
