use crate::gf2lin::BinVec;
use crate::shaping::ShapingConstruction;

use super::DecodingError;

/// Largest code dimension the ML decoder will enumerate.
pub const ML_CAP: usize = 20;

/// Minimum-distance decoder over the full PAM image of a construction's code.
///
/// Images are precomputed in lexicographic order of the information vector
/// `(u_sh, u)`, so the first minimiser found is the lexicographically smallest.
#[derive(Debug, Clone)]
pub struct MlDecoder {
    k_c: usize,
    n_s: usize,
    images: Vec<f64>,
}

impl MlDecoder {
    pub fn new(c: &ShapingConstruction) -> Result<Self, DecodingError> {
        let k_c = c.params().k_c();
        if k_c > ML_CAP {
            return Err(DecodingError::EnumerationTooLarge {
                bits: k_c,
                cap: ML_CAP,
            });
        }
        let n_s = c.params().n_s;
        let mut images = Vec::with_capacity((1 << k_c) * n_s);
        for x in 0..1u64 << k_c {
            let v = c.encode_info(&BinVec::from_msb_first(x, k_c))?;
            images.extend(c.map(&v).amps().iter().map(|&a| a as f64));
        }
        Ok(MlDecoder { k_c, n_s, images })
    }

    /// Information vector whose image is closest to `y`.
    pub fn decode(&self, y: &[f64]) -> Result<BinVec, DecodingError> {
        if y.len() != self.n_s {
            return Err(DecodingError::LengthMismatch {
                expected: self.n_s,
                got: y.len(),
            });
        }
        let mut best = (f64::INFINITY, 0u64);
        for (x, image) in self.images.chunks_exact(self.n_s).enumerate() {
            let d: f64 = image.iter().zip(y).map(|(s, y)| (y - s) * (y - s)).sum();
            if d < best.0 {
                best = (d, x as u64);
            }
        }
        Ok(BinVec::from_msb_first(best.1, self.k_c))
    }
}

/// One-shot ML decoding; see [`MlDecoder`].
pub fn ml_decode(y: &[f64], c: &ShapingConstruction) -> Result<BinVec, DecodingError> {
    MlDecoder::new(c)?.decode(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::{add_noise_in_place, RngSeed};
    use crate::shaping::{decode_shaped, encode_shaped, presets};
    use rand::Rng;

    /// Independent naive minimiser: enumerate codewords, map, measure.
    fn naive(y: &[f64], c: &ShapingConstruction) -> BinVec {
        let k_c = c.params().k_c();
        let mut best: Option<(f64, BinVec)> = None;
        for x in 0..1u64 << k_c {
            let info = BinVec::from_msb_first(x, k_c);
            let s = c.map(&c.encode_info(&info).unwrap());
            let d: f64 = s
                .amps()
                .iter()
                .zip(y)
                .map(|(&a, &y)| (y - a as f64).powi(2))
                .sum();
            match &best {
                Some((bd, bi)) if (*bd, bi) <= (d, &info) => {}
                _ => best = Some((d, info)),
            }
        }
        best.unwrap().1
    }

    #[test]
    fn noiseless_round_trip() {
        let c = presets::pam8_ns2();
        let dec = MlDecoder::new(&c).unwrap();
        for x in 0..4 {
            let u = BinVec::from_msb_first(x, 2);
            let w = encode_shaped(&u, &c).unwrap();
            let info = dec.decode(&w.s.to_f64()).unwrap();
            assert_eq!(info, w.u_sh.concat(&u));
            assert_eq!(decode_shaped(&info, &c).unwrap(), u);
        }
    }

    #[test]
    fn ties_go_to_smaller_information_vector() {
        let c = presets::pam8_ns2();
        let dec = MlDecoder::new(&c).unwrap();
        let images: Vec<Vec<f64>> = (0..8)
            .map(|x| c.map(&c.encode_info(&BinVec::from_msb_first(x, 3)).unwrap()).to_f64())
            .collect();
        let dist = |y: &[f64], s: &[f64]| -> f64 { y.iter().zip(s).map(|(a, b)| (a - b).powi(2)).sum() };
        let mut exercised = 0;
        for a in 0..8 {
            for b in a + 1..8 {
                let y: Vec<f64> = images[a].iter().zip(&images[b]).map(|(p, q)| (p + q) / 2.0).collect();
                let d: Vec<f64> = images.iter().map(|s| dist(&y, s)).collect();
                let best = d.iter().cloned().fold(f64::INFINITY, f64::min);
                let winners: Vec<usize> = (0..8).filter(|&i| d[i] == best).collect();
                if winners == [a, b] {
                    let info = dec.decode(&y).unwrap();
                    assert_eq!(info.to_msb_first(), a as u64);
                    assert_eq!(info, naive(&y, &c));
                    exercised += 1;
                }
            }
        }
        assert!(exercised > 0);
    }

    #[test]
    fn matches_naive_minimiser() {
        let c = presets::pam4_ns3();
        let dec = MlDecoder::new(&c).unwrap();
        let mut rng = RngSeed::new(5, 0).rng();
        for _ in 0..500 {
            let y: Vec<f64> = (0..3).map(|_| rng.random_range(-5.0..5.0)).collect();
            assert_eq!(dec.decode(&y).unwrap(), naive(&y, &c));
        }
    }

    #[test]
    fn high_snr_is_error_free() {
        let c = presets::pam4_ns3();
        let dec = MlDecoder::new(&c).unwrap();
        let mut rng = RngSeed::new(99, 0).rng();
        for _ in 0..10_000 {
            let u = BinVec::from_msb_first(rng.random_range(0..16), 4);
            let w = encode_shaped(&u, &c).unwrap();
            let mut y = w.s.to_f64();
            add_noise_in_place(&mut y, 1e-4, &mut rng);
            let info = dec.decode(&y).unwrap();
            assert_eq!(decode_shaped(&info, &c).unwrap(), u);
        }
    }

    #[test]
    fn rejects_wrong_length() {
        let c = presets::pam4_ns3();
        assert!(matches!(
            ml_decode(&[0.0; 2], &c),
            Err(DecodingError::LengthMismatch { expected: 3, got: 2 })
        ));
    }
}
