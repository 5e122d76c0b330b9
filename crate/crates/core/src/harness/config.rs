use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::RngSeed;
use crate::decoding::{parse_alist, ParityCheck};
use crate::gf2lin::{self, BinMatrix};
use crate::shaping::{build_construction, presets, ShapingConstruction, ShapingParams};

use super::HarnessError;

/// Simulation setup, read from TOML. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub construction: ConstructionSource,
    #[serde(default)]
    pub system: System,
    pub snr_db: Vec<f64>,
    #[serde(default)]
    pub decoder: DecoderChoice,
    #[serde(default = "default_min_frame_errors")]
    pub min_frame_errors: u64,
    pub max_frames: u64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    /// Thread count; results do not depend on it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

fn default_min_frame_errors() -> u64 {
    100
}

fn default_max_iters() -> usize {
    50
}

fn default_wc() -> usize {
    3
}

fn default_wr() -> usize {
    6
}

/// Where the code and shaping structure come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "source", rename_all = "lowercase", deny_unknown_fields)]
pub enum ConstructionSource {
    /// A construction file in the text format of [`ShapingConstruction::to_text`].
    File { path: PathBuf },
    /// A systematic base generator and optional shaping code, rows as 0/1 strings.
    Inline {
        generator: Vec<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        shaping: Option<Vec<String>>,
        params: ShapingParams,
    },
    Preset { name: String },
    /// A binary LDPC code, read from an alist file or drawn from the Gallager
    /// ensemble, with a random systematic shaping code on its amplitude bits.
    Ldpc {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        alist: Option<PathBuf>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        gallager: Option<GallagerEnsemble>,
        m: usize,
        k_sh: usize,
        #[serde(default)]
        shaping_seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GallagerEnsemble {
    pub n: usize,
    #[serde(default = "default_wc")]
    pub wc: usize,
    #[serde(default = "default_wr")]
    pub wr: usize,
    #[serde(default)]
    pub seed: u64,
}

/// Transmitter variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum System {
    /// Minimum-energy coset leader per message.
    #[default]
    Coset,
    /// Uniformly random shaping bits, so the whole code is used uniformly.
    Unshaped,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum DecoderChoice {
    Ml,
    Bp {
        #[serde(default = "default_max_iters")]
        max_iters: usize,
        #[serde(default)]
        min_sum: bool,
    },
}

impl Default for DecoderChoice {
    fn default() -> Self {
        DecoderChoice::Bp {
            max_iters: default_max_iters(),
            min_sum: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: ExperimentConfig = toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file; relative paths inside it are resolved against
    /// the file's directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_paths(dir);
        }
        Ok(cfg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    fn resolve_paths(&mut self, dir: &Path) {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = dir.join(&*p);
            }
        };
        match &mut self.construction {
            ConstructionSource::File { path } => fix(path),
            ConstructionSource::Ldpc { alist: Some(path), .. } => fix(path),
            _ => {}
        }
        if let Some(out) = &mut self.output {
            fix(out);
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: &str| Err(HarnessError::Config(msg.into()));
        if self.snr_db.is_empty() {
            return bad("snr_db must list at least one point");
        }
        if self.snr_db.iter().any(|s| !s.is_finite()) {
            return bad("snr_db values must be finite");
        }
        if self.max_frames == 0 || self.min_frame_errors == 0 {
            return bad("max_frames and min_frame_errors must be positive");
        }
        if self.workers == Some(0) {
            return bad("workers must be positive");
        }
        if let DecoderChoice::Bp { max_iters: 0, .. } = self.decoder {
            return bad("max_iters must be positive");
        }
        if let ConstructionSource::Ldpc { alist, gallager, .. } = &self.construction {
            if alist.is_some() == gallager.is_some() {
                return bad("an ldpc construction needs exactly one of `alist` and `gallager`");
            }
        }
        Ok(())
    }
}

/// A construction together with the parity-check structure BP decodes on,
/// expressed in the construction's coordinates.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub construction: ShapingConstruction,
    pub parity_check: Option<ParityCheck>,
    /// Short human-readable description for logs.
    pub label: String,
}

fn parse_rows(rows: &[String], what: &str) -> Result<BinMatrix, HarnessError> {
    let bits: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| {
            r.chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    _ => Err(HarnessError::Config(format!("{what}: bad bit {c:?}"))),
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    BinMatrix::from_rows(&bits).map_err(|e| HarnessError::Config(format!("{what}: {e}")))
}

/// Random systematic `(I_k | P)` with i.i.d. fair bits in `P`.
pub fn random_systematic(k: usize, n: usize, seed: u64) -> Result<BinMatrix, HarnessError> {
    let mut g = BinMatrix::zeros(k, n).map_err(|e| HarnessError::Config(e.to_string()))?;
    let mut rng = RngSeed::new(seed, 0).rng();
    for r in 0..k {
        g.set(r, r, true);
        for c in k..n {
            g.set(r, c, rng.random::<bool>());
        }
    }
    Ok(g)
}

/// Shaping parameters that place a systematic `[m·n_s, k_c]` code on ψ with
/// `k_sh` shaping bits: information on amplitude bits first, then signs.
pub fn ldpc_params(m: usize, n_s: usize, k_c: usize, k_sh: usize) -> ShapingParams {
    let amp = (m - 1) * n_s;
    let (k_a, k_s, r_a, r_s) = if k_c <= amp {
        (k_c - k_sh, 0, amp - k_c, n_s)
    } else {
        (amp - k_sh, k_c - amp, 0, n_s - (k_c - amp))
    };
    ShapingParams {
        m,
        n_s,
        k: k_c - k_sh,
        k_sh,
        k_a,
        k_s,
        r_a,
        r_s,
    }
}

fn prepare_ldpc(h: &ParityCheck, m: usize, k_sh: usize, shaping_seed: u64) -> Result<Prepared, HarnessError> {
    let n = h.n();
    if m == 0 || n % m != 0 {
        return Err(HarnessError::Config(format!("code length {n} is not a multiple of m = {m}")));
    }
    let (g, perm) = gf2lin::generator_from_parity_check(&h.to_dense())?;
    let h = h.permute_columns(&perm)?;
    let k_c = g.rows();
    let n_s = n / m;
    if k_sh >= k_c.min((m - 1) * n_s) {
        return Err(HarnessError::Config(format!(
            "k_sh = {k_sh} leaves no room for a message in a [{n}, {k_c}] code with {} amplitude bits",
            (m - 1) * n_s
        )));
    }
    let params = ldpc_params(m, n_s, k_c, k_sh);
    let g_sh = if k_sh > 0 {
        Some(random_systematic(k_sh, params.n_sh(), shaping_seed)?)
    } else {
        None
    };
    let construction = build_construction(&g, g_sh.as_ref(), params)?;
    Ok(Prepared {
        construction,
        parity_check: Some(h),
        label: format!("binary LDPC [{n}, {k_c}], {}-PAM, k_sh = {k_sh}", 1 << m),
    })
}

impl ConstructionSource {
    /// Builds the construction, reading any referenced files.
    pub fn prepare(&self) -> Result<Prepared, HarnessError> {
        let plain = |construction: ShapingConstruction, label: String| -> Result<Prepared, HarnessError> {
            Ok(Prepared {
                construction,
                parity_check: None,
                label,
            })
        };
        match self {
            ConstructionSource::File { path } => {
                let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
                plain(ShapingConstruction::from_text(&text)?, path.display().to_string())
            }
            ConstructionSource::Inline {
                generator,
                shaping,
                params,
            } => {
                let g = parse_rows(generator, "generator")?;
                let g_sh = shaping.as_deref().map(|rows| parse_rows(rows, "shaping")).transpose()?;
                plain(build_construction(&g, g_sh.as_ref(), *params)?, "inline".into())
            }
            ConstructionSource::Preset { name } => {
                let c = presets::by_name(name).ok_or_else(|| {
                    HarnessError::Config(format!(
                        "unknown preset {name:?}; choose one of {}",
                        presets::NAMES.join(", ")
                    ))
                })?;
                plain(c, name.clone())
            }
            ConstructionSource::Ldpc {
                alist,
                gallager,
                m,
                k_sh,
                shaping_seed,
            } => {
                let h = match (alist, gallager) {
                    (Some(path), None) => {
                        let text = std::fs::read_to_string(path).map_err(|e| HarnessError::io(path, e))?;
                        parse_alist(&text)?
                    }
                    (None, Some(gs)) => ParityCheck::gallager(gs.n, gs.wc, gs.wr, gs.seed)?,
                    _ => {
                        return Err(HarnessError::Config(
                            "an ldpc construction needs exactly one of `alist` and `gallager`".into(),
                        ))
                    }
                };
                prepare_ldpc(&h, *m, *k_sh, *shaping_seed)
            }
        }
    }
}

/// Parity-check structure for BP on an arbitrary construction.
pub fn parity_check_for(c: &ShapingConstruction) -> Result<ParityCheck, HarnessError> {
    let h = gf2lin::parity_check_from_generator(c.generator())?;
    Ok(ParityCheck::from_dense(&h)?)
}
