use std::io::Write;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::channel::{add_noise_in_place, ChannelParams, RngSeed};
use crate::decoding::{demap_llr, BpDecoder, CheckRule, DemapMode, MlDecoder};
use crate::gf2lin::BinVec;
use crate::metrics::shaping_gain_db;
use crate::shaping::{
    code_energy_tally, decode_shaped, encode_shaped, info_from_codeword, shaped_energy_tally, ShapingConstruction,
};

use super::config::{parity_check_for, DecoderChoice, ExperimentConfig, Prepared, System};
use super::HarnessError;

/// Column order of the result CSV.
pub const CSV_HEADER: [&str; 8] = [
    "snr_db",
    "frames",
    "bit_errors",
    "frame_errors",
    "ber",
    "fer",
    "avg_energy",
    "seed",
];

/// Frames per parallel batch. The stopping rule is checked between batches,
/// so this also fixes how far a point may overshoot its error target.
const BATCH: u64 = 64;
/// Codes up to this dimension have their energies enumerated exactly.
const EXACT_ENERGY_BITS: usize = 20;
/// Messages drawn when the energy has to be estimated.
const ENERGY_SAMPLES: u64 = 4096;
/// Stream bit that separates energy-estimation streams from frame streams.
const SAMPLING_STREAM: u64 = 1 << 63;
const POINT_SHIFT: u32 = 40;

/// Outcome of one SNR point.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub snr_db: f64,
    pub sigma2: f64,
    pub frames: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    /// Message-bit error rate after shaping removal.
    pub ber: f64,
    pub fer: f64,
    /// Measured transmitted energy per PAM signal.
    pub avg_energy: f64,
    /// Mean per-signal energy saved by the coset-leader search.
    pub avg_energy_reduction: f64,
    pub codeword_bit_errors: u64,
    pub codeword_ber: f64,
    pub seed: u64,
}

/// Per-signal energies and rates of a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub shaped_energy: f64,
    /// Average over the PAM image of the whole code.
    pub unshaped_energy: f64,
    /// Uniform `2^m`-PAM reference `(M² − 1)/3`.
    pub uniform_energy: f64,
    pub gain_db: f64,
    /// Message bits per PAM signal.
    pub rate_per_signal: f64,
    /// Code bits (message plus shaping) per PAM signal.
    pub code_rate_per_signal: f64,
    /// Whether the energies were enumerated rather than sampled.
    pub exact: bool,
    /// Messages drawn per estimate when sampled, 0 when exact.
    pub samples: u64,
}

enum Receiver {
    Ml(MlDecoder),
    Bp { decoder: BpDecoder, max_iters: usize },
}

#[derive(Debug, Default, Clone, Copy)]
struct Tally {
    bit_errors: u64,
    frame_errors: u64,
    energy: u64,
    baseline_energy: u64,
    codeword_bit_errors: u64,
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> BinVec {
    let mut v = BinVec::zeros(len);
    for i in 0..len {
        if rng.random::<bool>() {
            v.set(i, true);
        }
    }
    v
}

/// Draws a message and builds the transmitted codeword with its energy and
/// the energy it would have had without the leader search.
fn transmit(
    c: &ShapingConstruction,
    system: System,
    rng: &mut ChaCha8Rng,
) -> Result<(BinVec, BinVec, u64, u64), HarnessError> {
    let p = c.params();
    let u = random_bits(p.k, rng);
    match system {
        System::Coset => {
            let w = encode_shaped(&u, c)?;
            Ok((u, w.v, w.energy, w.baseline_energy))
        }
        System::Unshaped => {
            let info = random_bits(p.k_sh, rng).concat(&u);
            let v = c.encode_info(&info)?;
            let e = c.energy_of(&v);
            Ok((u, v, e, e))
        }
    }
}

fn run_frame(
    c: &ShapingConstruction,
    system: System,
    rx: &Receiver,
    sigma2: f64,
    seed: RngSeed,
) -> Result<Tally, HarnessError> {
    let mut rng = seed.rng();
    let (u, v, energy, baseline_energy) = transmit(c, system, &mut rng)?;
    let mut y = c.map(&v).to_f64();
    add_noise_in_place(&mut y, sigma2, &mut rng);
    let (u_hat, v_hat) = match rx {
        Receiver::Ml(dec) => {
            let info = dec.decode(&y)?;
            (decode_shaped(&info, c)?, c.encode_info(&info)?)
        }
        Receiver::Bp { decoder, max_iters } => {
            let llr = demap_llr(&y, c.params().m, sigma2, DemapMode::Exact)?;
            let out = decoder.decode(&llr, *max_iters)?;
            let info = info_from_codeword(&out.codeword, c);
            (decode_shaped(&info, c)?, out.codeword)
        }
    };
    let bit_errors = u_hat.distance(&u) as u64;
    Ok(Tally {
        bit_errors,
        frame_errors: u64::from(bit_errors > 0),
        energy,
        baseline_energy,
        codeword_bit_errors: v_hat.distance(&v) as u64,
    })
}

/// Nominal per-signal energy of a transmitter: exact when the code is small
/// enough to enumerate, otherwise the mean over seeded random messages.
fn nominal_energy(c: &ShapingConstruction, system: System, seed: u64) -> Result<(f64, bool), HarnessError> {
    let p = c.params();
    if p.k_c() <= EXACT_ENERGY_BITS {
        let tally = match system {
            System::Coset => shaped_energy_tally(c)?,
            System::Unshaped => code_energy_tally(c)?,
        };
        return Ok((tally.per_signal(), true));
    }
    let total = (0..ENERGY_SAMPLES)
        .into_par_iter()
        .map(|i| {
            let mut rng = RngSeed::new(seed, SAMPLING_STREAM | i).rng();
            transmit(c, system, &mut rng).map(|(_, _, e, _)| e)
        })
        .collect::<Result<Vec<u64>, _>>()?
        .into_iter()
        .sum::<u64>();
    Ok((total as f64 / (ENERGY_SAMPLES * p.n_s as u64) as f64, false))
}

/// Shaped and unshaped energies, gain and rates of a construction.
pub fn energy_report_for(c: &ShapingConstruction, seed: u64) -> Result<EnergyReport, HarnessError> {
    let (shaped, exact) = nominal_energy(c, System::Coset, seed)?;
    let (unshaped, _) = nominal_energy(c, System::Unshaped, seed)?;
    let p = c.params();
    Ok(EnergyReport {
        shaped_energy: shaped,
        unshaped_energy: unshaped,
        uniform_energy: c.uniform_pam_energy(),
        gain_db: shaping_gain_db(unshaped, shaped)?,
        rate_per_signal: p.target_rate_per_signal(),
        code_rate_per_signal: p.code_rate_per_signal(),
        exact,
        samples: if exact { 0 } else { ENERGY_SAMPLES },
    })
}

pub fn energy_report(cfg: &ExperimentConfig) -> Result<EnergyReport, HarnessError> {
    energy_report_for(&cfg.construction.prepare()?.construction, cfg.seed)
}

/// Runs the configured sweep. See [`run_prepared`].
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<TrialResult>, HarnessError> {
    cfg.validate()?;
    run_prepared(&cfg.construction.prepare()?, cfg)
}

/// Simulates every SNR point of `cfg` on an already prepared construction.
///
/// The noise variance at each point is `Es / 10^{snr/10}` with `Es` the
/// nominal per-signal energy of the configured transmitter. Each point stops
/// after the batch in which it reaches `min_frame_errors` or `max_frames`.
pub fn run_prepared(prepared: &Prepared, cfg: &ExperimentConfig) -> Result<Vec<TrialResult>, HarnessError> {
    let c = &prepared.construction;
    let rx = match cfg.decoder {
        DecoderChoice::Ml => Receiver::Ml(MlDecoder::new(c)?),
        DecoderChoice::Bp { max_iters, min_sum } => {
            let h = match &prepared.parity_check {
                Some(h) => h.clone(),
                None => parity_check_for(c)?,
            };
            let rule = if min_sum { CheckRule::MinSum } else { CheckRule::SumProduct };
            Receiver::Bp {
                decoder: BpDecoder::new(&h).with_rule(rule),
                max_iters,
            }
        }
    };
    let body = || -> Result<Vec<TrialResult>, HarnessError> {
        let (es, _) = nominal_energy(c, cfg.system, cfg.seed)?;
        if !(es > 0.0) {
            return Err(HarnessError::Numerical(format!("nominal signal energy {es}")));
        }
        cfg.snr_db
            .iter()
            .enumerate()
            .map(|(point, &snr_db)| run_point(c, cfg, &rx, point as u64, snr_db, es))
            .collect()
    };
    match cfg.workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build()
            .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?
            .install(body),
        None => body(),
    }
}

fn run_point(
    c: &ShapingConstruction,
    cfg: &ExperimentConfig,
    rx: &Receiver,
    point: u64,
    snr_db: f64,
    es: f64,
) -> Result<TrialResult, HarnessError> {
    let sigma2 = ChannelParams::from_snr_db(snr_db, es)?.sigma2();
    let mut acc = Tally::default();
    let mut frames = 0;
    while frames < cfg.max_frames && acc.frame_errors < cfg.min_frame_errors {
        let end = (frames + BATCH).min(cfg.max_frames);
        let batch = (frames..end)
            .into_par_iter()
            .map(|f| run_frame(c, cfg.system, rx, sigma2, RngSeed::new(cfg.seed, (point << POINT_SHIFT) | f)))
            .collect::<Result<Vec<_>, _>>()?;
        for t in batch {
            acc.bit_errors += t.bit_errors;
            acc.frame_errors += t.frame_errors;
            acc.energy += t.energy;
            acc.baseline_energy += t.baseline_energy;
            acc.codeword_bit_errors += t.codeword_bit_errors;
        }
        frames = end;
    }
    let p = c.params();
    let signals = (frames * p.n_s as u64) as f64;
    Ok(TrialResult {
        snr_db,
        sigma2,
        frames,
        bit_errors: acc.bit_errors,
        frame_errors: acc.frame_errors,
        ber: acc.bit_errors as f64 / (frames * p.k as u64) as f64,
        fer: acc.frame_errors as f64 / frames as f64,
        avg_energy: acc.energy as f64 / signals,
        avg_energy_reduction: (acc.baseline_energy - acc.energy) as f64 / signals,
        codeword_bit_errors: acc.codeword_bit_errors,
        codeword_ber: acc.codeword_bit_errors as f64 / (frames * p.n() as u64) as f64,
        seed: cfg.seed,
    })
}

/// Writes results with the fixed [`CSV_HEADER`] columns.
pub fn write_csv<W: Write>(results: &[TrialResult], out: W) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in results {
        w.write_record([
            r.snr_db.to_string(),
            r.frames.to_string(),
            r.bit_errors.to_string(),
            r.frame_errors.to_string(),
            r.ber.to_string(),
            r.fer.to_string(),
            r.avg_energy.to_string(),
            r.seed.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
