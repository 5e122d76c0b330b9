use crate::gf2lin::BinVec;

use super::{DecodingError, LlrVec, ParityCheck};

/// Magnitude at which channel and message LLRs are saturated.
pub const LLR_CLIP: f64 = 30.0;

/// Check-node update rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CheckRule {
    /// Exact tanh-product rule.
    #[default]
    SumProduct,
    /// Sign-min approximation.
    MinSum,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BpOutput {
    pub codeword: BinVec,
    /// All checks hold and no bit decision was a tie.
    pub satisfied: bool,
    pub iterations: usize,
}

/// Flooding-schedule message-passing decoder bound to one parity-check matrix.
#[derive(Debug, Clone)]
pub struct BpDecoder {
    n: usize,
    /// Edges of check `c` are `check_start[c]..check_start[c + 1]`; edge `e`
    /// touches variable `edge_var[e]`.
    check_start: Vec<usize>,
    edge_var: Vec<usize>,
    var_edges: Vec<Vec<usize>>,
    rule: CheckRule,
}

impl BpDecoder {
    pub fn new(h: &ParityCheck) -> Self {
        let mut check_start = Vec::with_capacity(h.m() + 1);
        let mut edge_var = Vec::with_capacity(h.edges());
        let mut var_edges = vec![Vec::new(); h.n()];
        check_start.push(0);
        for row in h.checks() {
            for &v in row {
                var_edges[v].push(edge_var.len());
                edge_var.push(v);
            }
            check_start.push(edge_var.len());
        }
        BpDecoder {
            n: h.n(),
            check_start,
            edge_var,
            var_edges,
            rule: CheckRule::SumProduct,
        }
    }

    pub fn with_rule(mut self, rule: CheckRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn decode(&self, llr: &[f64], max_iters: usize) -> Result<BpOutput, DecodingError> {
        if llr.len() != self.n {
            return Err(DecodingError::LengthMismatch {
                expected: self.n,
                got: llr.len(),
            });
        }
        let channel: Vec<f64> = llr.iter().map(|x| x.clamp(-LLR_CLIP, LLR_CLIP)).collect();
        let mut v2c: Vec<f64> = self.edge_var.iter().map(|&v| channel[v]).collect();
        let mut c2v = vec![0.0; v2c.len()];
        let mut total = channel.clone();
        let mut scratch = Vec::new();
        let mut codeword = BinVec::zeros(self.n);
        let mut satisfied = false;
        let mut iterations = 0;

        while iterations < max_iters {
            iterations += 1;
            for c in 0..self.check_start.len() - 1 {
                let range = self.check_start[c]..self.check_start[c + 1];
                match self.rule {
                    CheckRule::SumProduct => sum_product(&v2c[range.clone()], &mut c2v[range], &mut scratch),
                    CheckRule::MinSum => min_sum(&v2c[range.clone()], &mut c2v[range]),
                }
            }
            for (v, edges) in self.var_edges.iter().enumerate() {
                let sum = channel[v] + edges.iter().map(|&e| c2v[e]).sum::<f64>();
                total[v] = sum;
                for &e in edges {
                    v2c[e] = (sum - c2v[e]).clamp(-LLR_CLIP, LLR_CLIP);
                }
            }
            let (word, decided) = hard_decision(&total);
            codeword = word;
            satisfied = decided && self.syndrome_is_zero(&codeword);
            if satisfied {
                break;
            }
        }
        Ok(BpOutput {
            codeword,
            satisfied,
            iterations,
        })
    }

    fn syndrome_is_zero(&self, v: &BinVec) -> bool {
        self.check_start
            .windows(2)
            .all(|w| self.edge_var[w[0]..w[1]].iter().filter(|&&i| v.get(i)).count() % 2 == 0)
    }
}

/// Ties (LLR exactly zero) decide 0 but are reported as undecided.
fn hard_decision(total: &[f64]) -> (BinVec, bool) {
    let mut word = BinVec::zeros(total.len());
    let mut decided = true;
    for (i, &l) in total.iter().enumerate() {
        if l < 0.0 {
            word.set(i, true);
        } else if l == 0.0 {
            decided = false;
        }
    }
    (word, decided)
}

fn sum_product(input: &[f64], output: &mut [f64], scratch: &mut Vec<f64>) {
    let d = input.len();
    scratch.clear();
    scratch.extend(input.iter().map(|&x| (0.5 * x).tanh()));
    // Suffix products in place of the output, then a forward pass with a
    // running prefix product.
    let mut suffix = 1.0;
    for i in (0..d).rev() {
        output[i] = suffix;
        suffix *= scratch[i];
    }
    let mut prefix = 1.0;
    for i in 0..d {
        let p = (prefix * output[i]).clamp(-1.0 + 1e-15, 1.0 - 1e-15);
        output[i] = (2.0 * p.atanh()).clamp(-LLR_CLIP, LLR_CLIP);
        prefix *= scratch[i];
    }
}

fn min_sum(input: &[f64], output: &mut [f64]) {
    let mut sign = 1.0;
    let (mut min1, mut min2, mut arg) = (f64::INFINITY, f64::INFINITY, 0);
    for (i, &x) in input.iter().enumerate() {
        if x < 0.0 {
            sign = -sign;
        }
        let a = x.abs();
        if a < min1 {
            min2 = min1;
            min1 = a;
            arg = i;
        } else if a < min2 {
            min2 = a;
        }
    }
    for (i, (&x, out)) in input.iter().zip(output.iter_mut()).enumerate() {
        let mag = if i == arg { min2 } else { min1 };
        let s = if x < 0.0 { -sign } else { sign };
        *out = s * mag.min(LLR_CLIP);
    }
}

/// One-shot sum-product decoding.
pub fn bp_decode(llr: &LlrVec, h: &ParityCheck, max_iters: usize) -> Result<BpOutput, DecodingError> {
    BpDecoder::new(h).decode(llr, max_iters)
}
