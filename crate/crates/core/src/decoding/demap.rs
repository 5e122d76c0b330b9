use crate::mapper::GrayTable;

use super::{DecodingError, LlrVec};

/// Exact log-sum-exp or max-log bit metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum DemapMode {
    #[default]
    Exact,
    MaxLog,
}

fn log_sum_exp(values: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = values.collect();
    let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    max + v.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

/// Bit LLRs of Gray-mapped 2^m-PAM observations.
///
/// The result has `m·n_s` entries laid out like the codeword under ψ: entry
/// `t·n_s + j` is label bit `t` (counting from the label LSB) of signal `j`.
pub fn demap_llr(y: &[f64], m: usize, sigma2: f64, mode: DemapMode) -> Result<LlrVec, DecodingError> {
    if !(sigma2 > 0.0) {
        return Err(DecodingError::NonPositiveVariance(sigma2));
    }
    let table = GrayTable::new(m)?;
    let points: Vec<(f64, u16)> = (0..table.levels())
        .map(|i| (table.amplitude(i) as f64, table.label(i)))
        .collect();
    let n_s = y.len();
    let mut llr = vec![0.0; m * n_s];
    let mut metric = vec![0.0; points.len()];
    for (j, &yj) in y.iter().enumerate() {
        for (slot, &(x, _)) in metric.iter_mut().zip(&points) {
            *slot = -(yj - x) * (yj - x) / (2.0 * sigma2);
        }
        for t in 0..m {
            let side = |bit: u16| {
                metric
                    .iter()
                    .zip(&points)
                    .filter(move |(_, &(_, label))| (label >> t) & 1 == bit)
                    .map(|(&l, _)| l)
            };
            llr[t * n_s + j] = match mode {
                DemapMode::Exact => log_sum_exp(side(0)) - log_sum_exp(side(1)),
                DemapMode::MaxLog => {
                    side(0).fold(f64::NEG_INFINITY, f64::max) - side(1).fold(f64::NEG_INFINITY, f64::max)
                }
            };
        }
    }
    Ok(LlrVec::new(llr))
}

/// Posterior probabilities of each amplitude index given one observation,
/// under a uniform prior.
pub fn symbol_posteriors(y: f64, table: &GrayTable, sigma2: f64) -> Vec<f64> {
    let metric: Vec<f64> = table
        .amplitudes()
        .map(|x| -(y - x as f64).powi(2) / (2.0 * sigma2))
        .collect();
    let norm = log_sum_exp(metric.iter().cloned());
    metric.iter().map(|l| (l - norm).exp()).collect()
}
