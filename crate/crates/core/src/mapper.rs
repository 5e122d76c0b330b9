//! Gray-labelled 2^m-PAM mapping of binary codewords.
//!
//! A length `n = m·n_s` codeword is read as `m` consecutive blocks
//! `(v_{m-1}, …, v_1, v_0)` of `n_s` bits. Signal `j` takes the column
//! `(v_{0,j}, v_{1,j}, …, v_{m-1,j})` as its Gray label, `v_0` being the most
//! significant bit. With the binary-reflected Gray code the most significant
//! label bit is the sign of the amplitude, so the last block carries sign bits
//! and the first `m - 1` blocks carry amplitude bits.

use std::fmt;

use thiserror::Error;

use crate::gf2lin::BinVec;

pub const MAX_BITS_PER_SIGNAL: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MapperError {
    #[error("bits per signal must be in 1..={MAX_BITS_PER_SIGNAL}, got {0}")]
    BitsOutOfRange(usize),
    #[error("codeword length {len} is not a multiple of m = {m}")]
    LengthNotDivisible { len: usize, m: usize },
    #[error("amplitude {amp} is not a {levels}-PAM point")]
    InvalidAmplitude { amp: i32, levels: usize },
    #[error("QAM pairing needs an even number of amplitudes, got {0}")]
    OddLength(usize),
}

fn check_bits(m: usize) -> Result<(), MapperError> {
    if (1..=MAX_BITS_PER_SIGNAL).contains(&m) {
        Ok(())
    } else {
        Err(MapperError::BitsOutOfRange(m))
    }
}

/// Binary-reflected Gray labels of a 2^m-PAM constellation.
///
/// Entry `i` is the label of amplitude `2i - 2^m + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrayTable {
    m: usize,
    labels: Vec<u16>,
    index_of_label: Vec<u16>,
}

impl GrayTable {
    pub fn new(m: usize) -> Result<Self, MapperError> {
        check_bits(m)?;
        let levels = 1usize << m;
        let labels: Vec<u16> = (0..levels).map(|i| (i ^ (i >> 1)) as u16).collect();
        let mut index_of_label = vec![0u16; levels];
        for (i, &l) in labels.iter().enumerate() {
            index_of_label[l as usize] = i as u16;
        }
        Ok(GrayTable {
            m,
            labels,
            index_of_label,
        })
    }

    pub fn bits(&self) -> usize {
        self.m
    }

    pub fn levels(&self) -> usize {
        self.labels.len()
    }

    /// Label of the `i`-th amplitude, as an integer whose MSB is bit 0 of the
    /// label string.
    pub fn label(&self, index: usize) -> u16 {
        self.labels[index]
    }

    pub fn labels(&self) -> &[u16] {
        &self.labels
    }

    /// Label string, most significant bit first.
    pub fn label_string(&self, index: usize) -> String {
        format!("{:0width$b}", self.labels[index], width = self.m)
    }

    pub fn amplitude(&self, index: usize) -> i32 {
        2 * index as i32 - self.levels() as i32 + 1
    }

    pub fn amplitudes(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.levels()).map(|i| self.amplitude(i))
    }

    pub fn amplitude_of_label(&self, label: u16) -> i32 {
        self.amplitude(self.index_of_label[label as usize] as usize)
    }

    pub fn index_of_amplitude(&self, amp: i32) -> Option<usize> {
        let levels = self.levels() as i32;
        if amp % 2 == 0 || amp.abs() >= levels {
            return None;
        }
        Some(((amp + levels - 1) / 2) as usize)
    }

    /// Bit `level` of the label of amplitude index `index`; level 0 is the
    /// label MSB (the sign bit).
    pub fn label_bit(&self, index: usize, level: usize) -> bool {
        (self.labels[index] >> (self.m - 1 - level)) & 1 == 1
    }

    /// Squared amplitude indexed by label.
    pub fn energy_by_label(&self) -> Vec<u32> {
        (0..self.levels() as u16)
            .map(|l| {
                let a = self.amplitude_of_label(l);
                (a * a) as u32
            })
            .collect()
    }
}

impl fmt::Display for GrayTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: Vec<String> = (0..self.levels()).map(|i| self.label_string(i)).collect();
        let amps: Vec<String> = self.amplitudes().map(|a| a.to_string()).collect();
        writeln!(f, "label     {}", labels.join(" "))?;
        writeln!(f, "amplitude {}", amps.join(" "))
    }
}

pub fn gray_table(m: usize) -> Result<GrayTable, MapperError> {
    GrayTable::new(m)
}

/// A sequence of 2^m-PAM amplitudes.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignalSeq {
    m: usize,
    amps: Vec<i32>,
}

impl SignalSeq {
    pub fn new(m: usize, amps: Vec<i32>) -> Result<Self, MapperError> {
        check_bits(m)?;
        let levels = 1i32 << m;
        if let Some(&bad) = amps.iter().find(|&&a| a % 2 == 0 || a.abs() >= levels) {
            return Err(MapperError::InvalidAmplitude {
                amp: bad,
                levels: levels as usize,
            });
        }
        Ok(SignalSeq { m, amps })
    }

    pub fn bits_per_signal(&self) -> usize {
        self.m
    }

    pub fn amps(&self) -> &[i32] {
        &self.amps
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    /// Squared Euclidean norm.
    pub fn energy(&self) -> u64 {
        self.amps.iter().map(|&a| (a as i64 * a as i64) as u64).sum()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.amps.iter().map(|&a| a as f64).collect()
    }
}

impl fmt::Display for SignalSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let amps: Vec<String> = self.amps.iter().map(|a| a.to_string()).collect();
        write!(f, "({})", amps.join(","))
    }
}

/// Gray label of signal `j` of codeword `v`, with `n_s` signals.
#[inline]
pub(crate) fn column_label(v: &BinVec, m: usize, n_s: usize, j: usize) -> u16 {
    let mut label = 0u16;
    for t in 0..m {
        // Label bit t (t = 0 is the LSB) comes from block v_{m-1-t}, which is
        // stored at offset t·n_s.
        label |= (v.get(t * n_s + j) as u16) << t;
    }
    label
}

/// Total squared norm of ψ(v) without materialising the signal sequence.
///
/// `energy_by_label` is [`GrayTable::energy_by_label`] for the same `m`.
#[inline]
pub(crate) fn psi_energy(v: &BinVec, m: usize, energy_by_label: &[u32]) -> u64 {
    let n_s = v.len() / m;
    (0..n_s)
        .map(|j| energy_by_label[column_label(v, m, n_s, j) as usize] as u64)
        .sum()
}

/// ψ: maps a length `m·n_s` codeword to its PAM image.
pub fn map_psi(v: &BinVec, table: &GrayTable) -> Result<SignalSeq, MapperError> {
    let m = table.bits();
    if v.is_empty() || v.len() % m != 0 {
        return Err(MapperError::LengthNotDivisible { len: v.len(), m });
    }
    let n_s = v.len() / m;
    let amps = (0..n_s)
        .map(|j| table.amplitude_of_label(column_label(v, m, n_s, j)))
        .collect();
    Ok(SignalSeq { m, amps })
}

/// Inverse of [`map_psi`].
pub fn unmap_psi(s: &SignalSeq, table: &GrayTable) -> Result<BinVec, MapperError> {
    let m = table.bits();
    assert_eq!(s.m, m, "signal sequence and table disagree on m");
    let n_s = s.len();
    let mut v = BinVec::zeros(m * n_s);
    for (j, &amp) in s.amps.iter().enumerate() {
        let idx = table
            .index_of_amplitude(amp)
            .ok_or(MapperError::InvalidAmplitude {
                amp,
                levels: table.levels(),
            })?;
        let label = table.label(idx);
        for t in 0..m {
            if (label >> t) & 1 == 1 {
                v.set(t * n_s + j, true);
            }
        }
    }
    Ok(v)
}

/// Groups consecutive amplitudes into (I, Q) points.
pub fn pair_qam(s: &SignalSeq) -> Result<Vec<(i32, i32)>, MapperError> {
    if s.len() % 2 != 0 {
        return Err(MapperError::OddLength(s.len()));
    }
    Ok(s.amps.chunks_exact(2).map(|p| (p[0], p[1])).collect())
}

/// Whether coordinate `i` of a length `m·n_s` codeword is a sign bit under ψ.
pub fn is_sign_coordinate(i: usize, m: usize, n_s: usize) -> bool {
    i >= (m - 1) * n_s
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(m: usize) -> GrayTable {
        GrayTable::new(m).unwrap()
    }

    #[test]
    fn eight_pam_brbg_table() {
        let t = table(3);
        let labels: Vec<String> = (0..8).map(|i| t.label_string(i)).collect();
        assert_eq!(
            labels,
            ["000", "001", "011", "010", "110", "111", "101", "100"]
        );
        assert_eq!(
            t.amplitudes().collect::<Vec<_>>(),
            [-7, -5, -3, -1, 1, 3, 5, 7]
        );
    }

    #[test]
    fn small_tables() {
        let t = table(1);
        assert_eq!((t.label_string(0), t.label_string(1)), ("0".into(), "1".into()));
        assert_eq!(t.amplitudes().collect::<Vec<_>>(), [-1, 1]);
        let t = table(2);
        let labels: Vec<String> = (0..4).map(|i| t.label_string(i)).collect();
        assert_eq!(labels, ["00", "01", "11", "10"]);
        assert_eq!(t.amplitudes().collect::<Vec<_>>(), [-3, -1, 1, 3]);
    }

    #[test]
    fn table_range_is_checked() {
        assert_eq!(GrayTable::new(0), Err(MapperError::BitsOutOfRange(0)));
        assert_eq!(GrayTable::new(9), Err(MapperError::BitsOutOfRange(9)));
    }

    #[test]
    fn gray_property_and_permutation() {
        for m in 1..=MAX_BITS_PER_SIGNAL {
            let t = table(m);
            for i in 1..t.levels() {
                assert_eq!((t.label(i) ^ t.label(i - 1)).count_ones(), 1);
            }
            let mut sorted = t.labels().to_vec();
            sorted.sort_unstable();
            assert_eq!(sorted, (0..t.levels() as u16).collect::<Vec<_>>());
        }
    }

    #[test]
    fn sign_bit_is_label_msb() {
        for m in 1..=6 {
            let t = table(m);
            for i in 0..t.levels() {
                assert_eq!(t.label_bit(i, 0), t.amplitude(i) > 0);
            }
        }
    }

    #[test]
    fn psi_worked_mappings() {
        let t = table(3);
        let s = map_psi(&"110011".parse().unwrap(), &t).unwrap();
        assert_eq!(s.amps(), [5, 5]);
        let s = map_psi(&"111000".parse().unwrap(), &t).unwrap();
        assert_eq!(s.amps(), [-3, -5]);
        let s = map_psi(&BinVec::zeros(6), &t).unwrap();
        assert_eq!(s.amps(), [-7, -7]);
    }

    #[test]
    fn unmap_worked_examples() {
        let t = table(3);
        let s = SignalSeq::new(3, vec![5, 5]).unwrap();
        assert_eq!(unmap_psi(&s, &t).unwrap().to_string(), "110011");
        let s = SignalSeq::new(3, vec![-7, -7]).unwrap();
        assert!(unmap_psi(&s, &t).unwrap().is_zero());
    }

    #[test]
    fn psi_rejects_bad_lengths_and_amplitudes() {
        let t = table(3);
        assert_eq!(
            map_psi(&BinVec::zeros(7), &t),
            Err(MapperError::LengthNotDivisible { len: 7, m: 3 })
        );
        assert!(SignalSeq::new(3, vec![9]).is_err());
        assert!(SignalSeq::new(3, vec![2]).is_err());
    }

    #[test]
    fn psi_is_a_bijection_exhaustively() {
        for (m, n_s) in [(1, 16), (2, 8), (3, 5), (4, 4), (8, 2)] {
            let t = table(m);
            let n = m * n_s;
            let mut seen = std::collections::HashSet::new();
            for x in 0..1u64 << n {
                let v = BinVec::from_msb_first(x, n);
                let s = map_psi(&v, &t).unwrap();
                assert_eq!(unmap_psi(&s, &t).unwrap(), v);
                assert!(seen.insert(s));
            }
        }
    }

    #[test]
    fn qam_pairing() {
        let s = SignalSeq::new(3, vec![5, 5]).unwrap();
        let p = pair_qam(&s).unwrap();
        assert_eq!(p, [(5, 5)]);
        assert_eq!(p[0].0 * p[0].0 + p[0].1 * p[0].1, 50);
        let s = SignalSeq::new(3, vec![-3, -5, 1, -1]).unwrap();
        assert_eq!(pair_qam(&s).unwrap(), [(-3, -5), (1, -1)]);
        let s = SignalSeq::new(3, vec![1, 3, 5]).unwrap();
        assert_eq!(pair_qam(&s), Err(MapperError::OddLength(3)));
    }

    proptest! {
        #[test]
        fn psi_acts_columnwise(m in 1usize..=4, n_s in 1usize..8, seed in any::<u64>(), j in 0usize..8, flips in any::<u8>()) {
            let j = j % n_s;
            let t = table(m);
            let n = m * n_s;
            let mut v = BinVec::zeros(n);
            for i in 0..n {
                v.set(i, (seed >> (i % 64)) & 1 == 1);
            }
            let before = map_psi(&v, &t).unwrap();
            for level in 0..m {
                if (flips >> level) & 1 == 1 {
                    v.flip(level * n_s + j);
                }
            }
            let after = map_psi(&v, &t).unwrap();
            for i in 0..n_s {
                if i != j {
                    prop_assert_eq!(before.amps()[i], after.amps()[i]);
                }
            }
        }

        #[test]
        fn pairing_preserves_energy(amps in proptest::collection::vec(0i32..8, 0..10)) {
            let mut amps: Vec<i32> = amps.into_iter().map(|i| 2 * i - 7).collect();
            if amps.len() % 2 == 1 {
                amps.pop();
            }
            let s = SignalSeq::new(3, amps).unwrap();
            let paired: u64 = pair_qam(&s).unwrap().iter().map(|&(i, q)| (i * i + q * q) as u64).sum();
            prop_assert_eq!(paired, s.energy());
        }
    }
}
