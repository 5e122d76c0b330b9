//! Energy, gain, capacity-limit and normalized-second-moment figures.
//!
//! SNR values here are `P/σ²` per real dimension, which is also `Es/N0` of
//! the complex QAM formed by pairing two PAM dimensions.

use std::collections::HashMap;
use std::f64::consts::{E, PI};
use std::sync::{Arc, Mutex, OnceLock};

use thiserror::Error;

use crate::mapper::{GrayTable, MapperError, SignalSeq};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("empty signal set")]
    EmptySet,
    #[error("signal sequences of differing lengths {0} and {1}")]
    MixedLengths(usize, usize),
    #[error("energy must be positive, got {0}")]
    NonPositiveEnergy(f64),
    #[error("parameter must be positive, got {0}")]
    NonPositive(f64),
    #[error("dimension must be even and at least 2, got {0}")]
    OddDimension(usize),
    #[error("rate {rate} bits/QAM exceeds the {max} bits carried by the constellation")]
    RateTooHigh { rate: f64, max: f64 },
    #[error(transparent)]
    Mapper(#[from] MapperError),
}

/// Kind of threshold reported by [`capacity_sweep`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityKind {
    Shannon,
    CmQam,
    Bicm,
}

impl CapacityKind {
    pub fn name(self) -> &'static str {
        match self {
            CapacityKind::Shannon => "shannon",
            CapacityKind::CmQam => "cm_qam",
            CapacityKind::Bicm => "bicm",
        }
    }
}

/// SNR at which an information rate is reached.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CapacityPoint {
    pub snr_db: f64,
    pub bits_per_qam: f64,
    pub kind: CapacityKind,
}

/// Thresholds below this are reported as `f64::NEG_INFINITY`.
pub const SNR_FLOOR_DB: f64 = -40.0;
const SNR_CEIL_DB: f64 = 60.0;

/// Mean squared norm of the set divided by the sequence length.
pub fn avg_energy(points: &[SignalSeq]) -> Result<f64, MetricsError> {
    let n_s = common_len(points)?;
    let total: u64 = points.iter().map(SignalSeq::energy).sum();
    Ok(total as f64 / (points.len() * n_s) as f64)
}

fn common_len(points: &[SignalSeq]) -> Result<usize, MetricsError> {
    let first = points.first().ok_or(MetricsError::EmptySet)?.len();
    if let Some(p) = points.iter().find(|p| p.len() != first) {
        return Err(MetricsError::MixedLengths(first, p.len()));
    }
    if first == 0 {
        return Err(MetricsError::EmptySet);
    }
    Ok(first)
}

/// `10·log10(e_unshaped / e_shaped)`.
pub fn shaping_gain_db(e_unshaped: f64, e_shaped: f64) -> Result<f64, MetricsError> {
    for e in [e_unshaped, e_shaped] {
        if !(e > 0.0) {
            return Err(MetricsError::NonPositiveEnergy(e));
        }
    }
    Ok(10.0 * (e_unshaped / e_shaped).log10())
}

/// SNR in dB at which `log2(1 + snr)` equals `bits_per_qam`.
pub fn shannon_limit_snr(bits_per_qam: f64) -> f64 {
    10.0 * (bits_per_qam.exp2() - 1.0).log10()
}

/// Complex AWGN capacity `log2(1 + snr)` in bits per QAM symbol.
pub fn shannon_capacity(snr_db: f64) -> f64 {
    (1.0 + db_to_linear(snr_db)).log2()
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

/// Orthonormal Hermite polynomials `p_n(z)` and `p_{n-1}(z)` for the weight
/// `exp(-t²)`, divided by `exp(log_scale)` to stay finite.
fn hermite_scaled(n: usize, z: f64) -> (f64, f64, f64) {
    const PIM4: f64 = 0.751_125_544_464_942_5; // π^{-1/4}
    const RESCALE: f64 = 1e150;
    let (mut p1, mut p2, mut log_scale) = (PIM4, 0.0, 0.0);
    for j in 0..n {
        let p3 = p2;
        p2 = p1;
        let jf = j as f64;
        p1 = z * (2.0 / (jf + 1.0)).sqrt() * p2 - (jf / (jf + 1.0)).sqrt() * p3;
        if p1.abs() > RESCALE {
            p1 /= RESCALE;
            p2 /= RESCALE;
            log_scale += RESCALE.ln();
        }
    }
    (p1, p2, log_scale)
}

/// Nodes and weights of `n`-point Gauss–Hermite quadrature for the weight
/// `exp(-t²)`, nodes in decreasing order.
///
/// Positive roots are bracketed by sign changes on a grid finer than the
/// smallest root spacing, bisected, and polished by one Newton step.
pub fn gauss_hermite(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n > 0, "quadrature needs at least one node");
    let nf = n as f64;
    let p = |z: f64| hermite_scaled(n, z).0;
    let step = 0.2 * PI / (2.0 * nf).sqrt();
    let z_max = (2.0 * nf + 1.0).sqrt() + 1.0;
    let mut roots = Vec::with_capacity(n / 2);
    let mut a = if n % 2 == 1 { step / 2.0 } else { 0.0 };
    let mut pa = p(a);
    while a < z_max {
        let b = a + step;
        let pb = p(b);
        if pa.signum() != pb.signum() {
            let (mut lo, mut hi, mut plo) = (a, b, pa);
            for _ in 0..60 {
                let mid = 0.5 * (lo + hi);
                let pm = p(mid);
                if pm.signum() == plo.signum() {
                    lo = mid;
                    plo = pm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
        pa = pb;
    }
    assert_eq!(roots.len(), n / 2, "Gauss–Hermite root search missed roots for n = {n}");
    let weight = |z: f64| {
        let (_, p2, log_scale) = hermite_scaled(n, z);
        // w = 2 / (2n · p_{n-1}²), evaluated in logs.
        (-(nf.ln()) - 2.0 * (p2.abs().ln() + log_scale)).exp()
    };
    let polish = |z: f64| {
        let (p1, p2, _) = hermite_scaled(n, z);
        let pp = (2.0 * nf).sqrt() * p2;
        if pp != 0.0 {
            z - p1 / pp
        } else {
            z
        }
    };
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for (i, &r) in roots.iter().rev().enumerate() {
        let z = polish(r);
        x[i] = z;
        x[n - 1 - i] = -z;
        w[i] = weight(z);
        w[n - 1 - i] = w[i];
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
        w[n / 2] = weight(0.0);
    }
    (x, w)
}

type Rule = Arc<(Vec<f64>, Vec<f64>)>;

fn cached_rule(n: usize) -> Rule {
    static CACHE: OnceLock<Mutex<HashMap<usize, Rule>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.lock().expect("cache lock").get(&n) {
        return rule.clone();
    }
    let rule = Arc::new(gauss_hermite(n));
    cache.lock().expect("cache lock").insert(n, rule.clone());
    rule
}

/// Expectation over `z ~ N(0,1)`, refining the node count until two
/// successive estimates agree to `tol`.
fn normal_expectation(f: impl Fn(f64) -> f64, tol: f64) -> f64 {
    let eval = |n: usize| {
        let rule = cached_rule(n);
        let (x, w) = (&rule.0, &rule.1);
        x.iter().zip(w).map(|(&t, &wt)| wt * f(2f64.sqrt() * t)).sum::<f64>() / PI.sqrt()
    };
    let mut n = 24;
    let mut prev = eval(n);
    while n < 768 {
        n *= 2;
        let next = eval(n);
        if (next - prev).abs() < tol {
            return next;
        }
        prev = next;
    }
    prev
}

/// Quadrature tolerance per PAM dimension, in bits.
const MI_TOL: f64 = 2e-4;

fn pam_points(table: &GrayTable) -> Vec<f64> {
    table.amplitudes().map(f64::from).collect()
}

fn pam_sigma(table: &GrayTable, snr_db: f64) -> f64 {
    let m = table.levels() as f64;
    ((m * m - 1.0) / 3.0 / db_to_linear(snr_db)).sqrt()
}

fn log2_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()) / 2f64.ln()
}

/// Coded-modulation mutual information of uniform `2^m`-PAM, bits per
/// real dimension.
pub fn pam_cm_mi(m: usize, snr_db: f64) -> Result<f64, MetricsError> {
    let table = GrayTable::new(m)?;
    let x = pam_points(&table);
    let sigma = pam_sigma(&table, snr_db);
    let levels = x.len() as f64;
    let mut loss = 0.0;
    for &xi in &x {
        loss += normal_expectation(
            |z| {
                log2_sum_exp(x.iter().map(|&xj| {
                    let d = xi - xj;
                    -(d * d + 2.0 * sigma * z * d) / (2.0 * sigma * sigma)
                }))
            },
            MI_TOL / 4.0,
        );
    }
    Ok((levels.log2() - loss / levels).clamp(0.0, m as f64))
}

/// Coded-modulation mutual information of uniform square `2^{2m}`-QAM,
/// bits per QAM symbol.
pub fn qam_cm_mi(m: usize, snr_db: f64) -> Result<f64, MetricsError> {
    Ok(2.0 * pam_cm_mi(m, snr_db)?)
}

/// Sum of bit-level mutual informations of a labeled PAM, bits per real
/// dimension.
pub fn pam_bicm_mi(snr_db: f64, table: &GrayTable) -> f64 {
    let m = table.bits();
    let x = pam_points(table);
    let sigma = pam_sigma(table, snr_db);
    let levels = x.len() as f64;
    let mut loss = 0.0;
    for (i, &xi) in x.iter().enumerate() {
        let li = table.label(i);
        loss += normal_expectation(
            |z| {
                let metric: Vec<f64> = x
                    .iter()
                    .map(|&xj| {
                        let d = xi - xj;
                        -(d * d + 2.0 * sigma * z * d) / (2.0 * sigma * sigma)
                    })
                    .collect();
                let all = log2_sum_exp(metric.iter().cloned());
                (0..m)
                    .map(|t| {
                        let bit = (li >> t) & 1;
                        let same = metric
                            .iter()
                            .enumerate()
                            .filter(|&(j, _)| (table.label(j) >> t) & 1 == bit)
                            .map(|(_, &l)| l);
                        all - log2_sum_exp(same)
                    })
                    .sum::<f64>()
            },
            MI_TOL / 4.0,
        );
    }
    (m as f64 - loss / levels).clamp(0.0, m as f64)
}

/// BICM mutual information of the square QAM built from two copies of the
/// labeled PAM, bits per QAM symbol.
pub fn bicm_mi(snr_db: f64, table: &GrayTable) -> f64 {
    2.0 * pam_bicm_mi(snr_db, table)
}

/// Discrete NSM estimate `P / (4·|set|^{2/n_s})`.
///
/// Each point is given a cube cell of side 2 (the PAM spacing), so the set
/// occupies volume `2^{n_s}·|set|`. As the set becomes dense relative to its
/// extent the estimate approaches the NSM of the region it fills.
pub fn nsm_estimate(points: &[SignalSeq]) -> Result<f64, MetricsError> {
    let n_s = common_len(points)?;
    let p = avg_energy(points)?;
    Ok(p / (4.0 * (points.len() as f64).powf(2.0 / n_s as f64)))
}

/// Upper bound on the rate per dimension of a shaped scheme whose shaping
/// region has NSM `g`: `½log2(1 + P/σ²) − ½log2(2πe·g)`.
///
/// The vanishing finite-length term is omitted. At `g = 1/12` the penalty is
/// the ≈0.2546-bit loss of cubic shaping.
pub fn shaped_rate_bound(p: f64, sigma2: f64, g: f64) -> Result<f64, MetricsError> {
    if !(sigma2 > 0.0) {
        return Err(MetricsError::NonPositive(sigma2));
    }
    if !(g > 0.0) {
        return Err(MetricsError::NonPositive(g));
    }
    if !(p >= 0.0) {
        return Err(MetricsError::NonPositive(p));
    }
    Ok(0.5 * (1.0 + p / sigma2).log2() - 0.5 * (2.0 * PI * E * g).log2())
}

/// Asymptotic volume `(2πeσ²)^{n/2} / √(2πn)` of the `n`-ball of radius `σ√n`.
///
/// This is an approximation; [`sphere_volume_exact`] gives the Γ-function
/// value. Their ratio tends to √2, so the per-dimension ratio tends to 1.
pub fn sphere_volume(n_s: usize, sigma2: f64) -> Result<f64, MetricsError> {
    check_even(n_s)?;
    if !(sigma2 > 0.0) {
        return Err(MetricsError::NonPositive(sigma2));
    }
    let n = n_s as f64;
    Ok((2.0 * PI * E * sigma2).powf(n / 2.0) / (2.0 * PI * n).sqrt())
}

/// `π^{n/2} (nσ²)^{n/2} / (n/2)!` for even `n`.
pub fn sphere_volume_exact(n_s: usize, sigma2: f64) -> Result<f64, MetricsError> {
    check_even(n_s)?;
    if !(sigma2 > 0.0) {
        return Err(MetricsError::NonPositive(sigma2));
    }
    let half = n_s / 2;
    let n = n_s as f64;
    // Work in logs to stay finite at large n.
    let log_fact: f64 = (1..=half).map(|k| (k as f64).ln()).sum();
    Ok((half as f64 * (PI * n * sigma2).ln() - log_fact).exp())
}

fn check_even(n_s: usize) -> Result<(), MetricsError> {
    if n_s < 2 || n_s % 2 == 1 {
        return Err(MetricsError::OddDimension(n_s));
    }
    Ok(())
}

fn bisect(target: f64, f: impl Fn(f64) -> f64) -> f64 {
    if f(SNR_FLOOR_DB) >= target {
        return f64::NEG_INFINITY;
    }
    let (mut lo, mut hi) = (SNR_FLOOR_DB, SNR_CEIL_DB);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Shannon, square-QAM CM and Gray-BICM threshold SNRs at a rate in bits per
/// QAM symbol for `2^{2m}`-QAM. Thresholds below −40 dB are `-∞`.
pub fn capacity_sweep(m: usize, rate_bits_per_qam: f64) -> Result<[CapacityPoint; 3], MetricsError> {
    let table = GrayTable::new(m)?;
    let max = 2.0 * m as f64;
    if !(rate_bits_per_qam < max) {
        return Err(MetricsError::RateTooHigh {
            rate: rate_bits_per_qam,
            max,
        });
    }
    if !(rate_bits_per_qam > 0.0) {
        return Err(MetricsError::NonPositive(rate_bits_per_qam));
    }
    let shannon = shannon_limit_snr(rate_bits_per_qam);
    let point = |snr_db: f64, kind| CapacityPoint {
        snr_db: if snr_db < SNR_FLOOR_DB { f64::NEG_INFINITY } else { snr_db },
        bits_per_qam: rate_bits_per_qam,
        kind,
    };
    let cm = bisect(rate_bits_per_qam, |s| qam_cm_mi(m, s).expect("table already built"));
    let bicm = bisect(rate_bits_per_qam, |s| bicm_mi(s, &table));
    Ok([
        point(shannon, CapacityKind::Shannon),
        point(cm, CapacityKind::CmQam),
        point(bicm, CapacityKind::Bicm),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::RngSeed;
    use rand::Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn product_set(m: usize, n_s: usize) -> Vec<SignalSeq> {
        let t = GrayTable::new(m).unwrap();
        let amps: Vec<i32> = t.amplitudes().collect();
        let mut out = vec![vec![]];
        for _ in 0..n_s {
            out = out
                .into_iter()
                .flat_map(|p: Vec<i32>| {
                    amps.iter().map(move |&a| {
                        let mut q = p.clone();
                        q.push(a);
                        q
                    })
                })
                .collect();
        }
        out.into_iter().map(|a| SignalSeq::new(m, a).unwrap()).collect()
    }

    #[test]
    fn uniform_pam_energies() {
        assert_eq!(avg_energy(&product_set(3, 2)).unwrap(), 21.0);
        assert_eq!(avg_energy(&product_set(2, 3)).unwrap(), 5.0);
        assert_eq!(avg_energy(&[SignalSeq::new(1, vec![1, -1]).unwrap()]).unwrap(), 1.0);
        assert_eq!(avg_energy(&[]), Err(MetricsError::EmptySet));
    }

    #[test]
    fn gains() {
        assert!((shaping_gain_db(21.0, 9.0).unwrap() - 3.679).abs() < 1e-3);
        assert!((shaping_gain_db(5.0, 3.0).unwrap() - 2.218).abs() < 1e-3);
        assert_eq!(shaping_gain_db(7.0, 7.0).unwrap(), 0.0);
        assert!(shaping_gain_db(0.0, 1.0).is_err());
    }

    #[test]
    fn shannon_limits() {
        assert!(shannon_limit_snr(1.0).abs() < 1e-12);
        assert!((shannon_limit_snr(2.0) - 10.0 * 3f64.log10()).abs() < 1e-12);
        assert!((shannon_limit_snr(16.0 / 3.0) - 15.95).abs() < 0.05);
        assert!((shannon_capacity(shannon_limit_snr(3.3)) - 3.3).abs() < 1e-12);
    }

    #[test]
    fn gauss_hermite_moments() {
        for n in [1, 5, 20, 64, 200, 333, 768] {
            let (x, w) = gauss_hermite(n);
            assert!((w.iter().sum::<f64>() - PI.sqrt()).abs() < 1e-12, "n={n}");
            // ∫ t^{2k} e^{-t²} dt = Γ(k + 1/2) for 2k < 2n.
            let mut gamma = PI.sqrt();
            for k in 0..n.min(6) {
                let moment: f64 = x.iter().zip(&w).map(|(t, w)| w * t.powi(2 * k as i32)).sum();
                assert!((moment - gamma).abs() < 1e-10 * gamma.max(1.0), "n={n} k={k}");
                gamma *= k as f64 + 0.5;
            }
        }
    }

    /// Sampled estimate of the PAM coded-modulation MI with its standard error.
    fn monte_carlo_mi(m: usize, snr_db: f64, bicm: bool, samples: usize) -> (f64, f64) {
        let t = GrayTable::new(m).unwrap();
        let x: Vec<f64> = t.amplitudes().map(f64::from).collect();
        let sigma2 = (x.len() * x.len() - 1) as f64 / 3.0 / db_to_linear(snr_db);
        let mut rng = RngSeed::new(99, m as u64).rng();
        let ll = |y: f64, xj: f64| -(y - xj) * (y - xj) / (2.0 * sigma2);
        let lse = |v: &[f64]| {
            let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            max + v.iter().map(|a| (a - max).exp()).sum::<f64>().ln()
        };
        let mut acc = Vec::with_capacity(samples);
        for _ in 0..samples {
            let i = rng.random_range(0..x.len());
            let z: f64 = StandardNormal.sample(&mut rng);
            let y = x[i] + sigma2.sqrt() * z;
            let all: Vec<f64> = x.iter().map(|&xj| ll(y, xj)).collect();
            let value = if bicm {
                (0..m)
                    .map(|b| {
                        let bit = (t.label(i) >> b) & 1;
                        let same: Vec<f64> = (0..x.len())
                            .filter(|&j| (t.label(j) >> b) & 1 == bit)
                            .map(|j| all[j])
                            .collect();
                        1.0 - (lse(&all) - lse(&same)) / 2f64.ln()
                    })
                    .sum()
            } else {
                (x.len() as f64).log2() - (lse(&all) - all[i]) / 2f64.ln()
            };
            acc.push(value);
        }
        let mean = acc.iter().sum::<f64>() / samples as f64;
        let var = acc.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (samples - 1) as f64;
        (mean, (var / samples as f64).sqrt())
    }

    #[test]
    fn quadrature_matches_monte_carlo() {
        for (m, snr) in [(1, 0.0), (2, 6.0), (3, 12.0), (4, 16.0), (4, 22.0)] {
            let t = GrayTable::new(m).unwrap();
            let cm = pam_cm_mi(m, snr).unwrap();
            let bi = pam_bicm_mi(snr, &t);
            let (mc_cm, se_cm) = monte_carlo_mi(m, snr, false, 200_000);
            let (mc_bi, se_bi) = monte_carlo_mi(m, snr, true, 200_000);
            assert!((cm - mc_cm).abs() < 4.0 * se_cm + 1e-3, "CM m={m} snr={snr}: {cm} vs {mc_cm}±{se_cm}");
            assert!((bi - mc_bi).abs() < 4.0 * se_bi + 1e-3, "BICM m={m} snr={snr}: {bi} vs {mc_bi}±{se_bi}");
        }
    }

    #[test]
    fn mutual_information_limits_and_ordering() {
        for m in 1..=4 {
            let t = GrayTable::new(m).unwrap();
            assert!((qam_cm_mi(m, 60.0).unwrap() - 2.0 * m as f64).abs() < 1e-6);
            assert!(qam_cm_mi(m, -40.0).unwrap() < 1e-3);
            for snr in [-5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0] {
                let cm = qam_cm_mi(m, snr).unwrap();
                let bi = bicm_mi(snr, &t);
                assert!(bi <= cm + 1e-6, "m={m} snr={snr}: {bi} > {cm}");
                assert!(cm <= shannon_capacity(snr) + 1e-6);
                if m == 1 {
                    assert!((bi - cm).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn capacity_sweep_ordering_and_floor() {
        let [s, c, b] = capacity_sweep(2, 2.5).unwrap();
        assert!(s.snr_db <= c.snr_db && c.snr_db <= b.snr_db);
        assert_eq!((s.kind, c.kind, b.kind), (CapacityKind::Shannon, CapacityKind::CmQam, CapacityKind::Bicm));
        let tiny = capacity_sweep(2, 1e-9).unwrap();
        assert!(tiny.iter().all(|p| p.snr_db == f64::NEG_INFINITY));
        assert!(capacity_sweep(2, 4.0).is_err());
    }

    #[test]
    fn nsm_of_product_sets() {
        for m in 1..=5 {
            let big_m = (1usize << m) as f64;
            let expected = ((big_m * big_m - 1.0) / 3.0) / (4.0 * big_m * big_m);
            assert!((nsm_estimate(&product_set(m, 2)).unwrap() - expected).abs() < 1e-12);
        }
        assert!((nsm_estimate(&product_set(3, 1)).unwrap() - 21.0 / 256.0).abs() < 1e-12);
        assert!((nsm_estimate(&product_set(3, 2)).unwrap() - 21.0 / 256.0).abs() < 1e-12);
        assert!((nsm_estimate(&product_set(8, 1)).unwrap() - 1.0 / 12.0).abs() < 1e-5);
    }

    #[test]
    fn rate_bound_values() {
        let cube = shaped_rate_bound(10.0, 1.0, 1.0 / 12.0).unwrap();
        let ideal = shaped_rate_bound(10.0, 1.0, 1.0 / (2.0 * PI * E)).unwrap();
        assert!((ideal - 0.5 * 11f64.log2()).abs() < 1e-12);
        assert!((ideal - cube - 0.2546).abs() < 1e-3);
        let g = 0.07;
        assert!((shaped_rate_bound(0.0, 1.0, g).unwrap() + 0.5 * (2.0 * PI * E * g).log2()).abs() < 1e-12);
    }

    #[test]
    fn sphere_volumes() {
        assert!((sphere_volume(2, 1.0).unwrap() - 4.818).abs() < 1e-3);
        assert!(sphere_volume(3, 1.0).is_err());
        assert!(sphere_volume(4, 2.0).unwrap() > sphere_volume(4, 1.0).unwrap());
        // The exact disc of radius √2: area 2π.
        assert!((sphere_volume_exact(2, 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        let ratio = |n: usize| sphere_volume_exact(n, 1.0).unwrap() / sphere_volume(n, 1.0).unwrap();
        assert!((ratio(50) - 2f64.sqrt()).abs() < 0.02 * 2f64.sqrt());
        assert!((ratio(400) - 2f64.sqrt()).abs() < 0.002 * 2f64.sqrt());
        assert!((ratio(50).powf(1.0 / 50.0) - 1.0).abs() < 0.01);
    }
}
