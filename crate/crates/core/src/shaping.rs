//! Coset shaping.
//!
//! A `[n, k_c]` code with `k_c = k + k_sh` is put in shaping-oriented form:
//! its first `k_sh` rows generate the shaping (coset-leader) code and restrict
//! to a systematic `G_sh = (I | P_sh)` on the first `n_sh = k_a + k_sh`
//! coordinates, while the bottom `k` rows keep an identity block on the message
//! coordinates. A message `u` is sent as the minimum-energy PAM image among the
//! `2^{k_sh}` codewords `(u_sh u)·G_so`. The receiver decodes in the full code
//! and strips the shaping component.
//!
//! All energies here are integer squared norms of odd-integer amplitudes;
//! "per signal" averages divide by the number of PAM signals `n_s`.

use std::fmt;
use std::ops::Range;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf2lin::{self, BinMatrix, BinVec, Gf2Error};
use crate::mapper::{self, GrayTable, MapperError, SignalSeq};

/// Default cap on the exhaustive coset-leader search, in shaping bits.
pub const DEFAULT_SEARCH_CAP: usize = 24;

/// Shaping searches at least this large are split across threads.
const PARALLEL_SHAPING_BITS: usize = 14;
const CHUNK_BITS: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ShapingError {
    #[error("inconsistent shaping parameters: {0}")]
    Params(String),
    #[error("{0} is not in systematic form")]
    NotSystematic(&'static str),
    #[error("{what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("shaping-oriented matrix does not span the original code")]
    RankLoss,
    #[error("enumeration over 2^{bits} words exceeds the cap of 2^{cap}")]
    EnumerationTooLarge { bits: usize, cap: usize },
    #[error("malformed construction text: {0}")]
    Parse(String),
    #[error(transparent)]
    Gf2(#[from] Gf2Error),
    #[error(transparent)]
    Mapper(#[from] MapperError),
}

/// Dimensions of a shaping scheme.
///
/// `k_a`/`k_s` message bits and `r_a`/`r_s` parity bits ride on amplitude/sign
/// positions; `k_sh` auxiliary bits select the coset leader.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShapingParams {
    pub m: usize,
    pub n_s: usize,
    pub k: usize,
    pub k_sh: usize,
    pub k_a: usize,
    pub k_s: usize,
    pub r_a: usize,
    pub r_s: usize,
}

impl ShapingParams {
    /// Code length `m·n_s`.
    pub fn n(&self) -> usize {
        self.m * self.n_s
    }

    /// Code dimension `k + k_sh`.
    pub fn k_c(&self) -> usize {
        self.k + self.k_sh
    }

    /// Length of the shaping code, `k_a + k_sh`.
    pub fn n_sh(&self) -> usize {
        self.k_a + self.k_sh
    }

    /// `R_c = k_c / n`.
    pub fn code_rate(&self) -> f64 {
        self.k_c() as f64 / self.n() as f64
    }

    /// `R_T = k / n`.
    pub fn target_rate(&self) -> f64 {
        self.k as f64 / self.n() as f64
    }

    /// Code rate in bits per PAM signal.
    pub fn code_rate_per_signal(&self) -> f64 {
        self.k_c() as f64 / self.n_s as f64
    }

    /// Target rate in bits per PAM signal.
    pub fn target_rate_per_signal(&self) -> f64 {
        self.k as f64 / self.n_s as f64
    }

    /// `R_sh = k_sh / n_sh`.
    pub fn shaping_rate(&self) -> f64 {
        if self.n_sh() == 0 {
            0.0
        } else {
            self.k_sh as f64 / self.n_sh() as f64
        }
    }

    pub fn validate(&self) -> Result<(), ShapingError> {
        let bad = |msg: String| Err(ShapingError::Params(msg));
        if !(1..=mapper::MAX_BITS_PER_SIGNAL).contains(&self.m) {
            return bad(format!("m = {} out of range", self.m));
        }
        if self.n_s == 0 || self.k == 0 {
            return bad("n_s and k must be positive".into());
        }
        if self.k != self.k_a + self.k_s {
            return bad(format!("k = {} but k_a + k_s = {}", self.k, self.k_a + self.k_s));
        }
        if self.k_c() > self.n() {
            return bad(format!("k_c = {} exceeds n = {}", self.k_c(), self.n()));
        }
        if self.k_s + self.r_s != self.n_s {
            return bad(format!(
                "k_s + r_s = {} but n_s = {}",
                self.k_s + self.r_s,
                self.n_s
            ));
        }
        if self.k_a + self.r_a + self.k_sh != self.n_s * (self.m - 1) {
            return bad(format!(
                "k_a + r_a + k_sh = {} but n_s·(m-1) = {}",
                self.k_a + self.r_a + self.k_sh,
                self.n_s * (self.m - 1)
            ));
        }
        Ok(())
    }

    /// Role each coordinate must play for these parameters: shaping and
    /// amplitude message bits first, then sign message bits, then parity.
    fn expected_roles(&self) -> impl Iterator<Item = (usize, Option<BitRole>)> + '_ {
        (0..self.n()).map(move |c| {
            let role = if c < self.n_sh() {
                Some(BitRole::Amplitude)
            } else if c < self.k_c() {
                Some(BitRole::Sign)
            } else {
                None
            };
            (c, role)
        })
    }
}

/// Whether a codeword coordinate lands on an amplitude or a sign bit under ψ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BitRole {
    Amplitude,
    Sign,
}

impl BitRole {
    pub fn as_char(self) -> char {
        match self {
            BitRole::Amplitude => 'a',
            BitRole::Sign => 's',
        }
    }
}

/// Per-coordinate roles of a length `m·n_s` codeword under ψ.
pub fn psi_layout(m: usize, n_s: usize) -> Vec<BitRole> {
    (0..m * n_s)
        .map(|i| {
            if mapper::is_sign_coordinate(i, m, n_s) {
                BitRole::Sign
            } else {
                BitRole::Amplitude
            }
        })
        .collect()
}

fn layout_string(layout: &[BitRole]) -> String {
    layout.iter().map(|r| r.as_char()).collect()
}

/// A shaping-oriented generator matrix with its parameters and bit layout.
#[derive(Debug, Clone)]
pub struct ShapingConstruction {
    params: ShapingParams,
    generator: BinMatrix,
    layout: Vec<BitRole>,
    search_cap: usize,
    table: GrayTable,
    energy_by_label: Vec<u32>,
}

/// Result of shaped encoding of one message.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShapedWord {
    pub u: BinVec,
    /// Selected shaping bits; empty when `k_sh = 0`.
    pub u_sh: BinVec,
    pub v: BinVec,
    pub s: SignalSeq,
    /// `‖s‖²`.
    pub energy: u64,
    /// `‖ψ((0 u)·G_so)‖²`, the energy without the coset-leader search.
    pub baseline_energy: u64,
}

/// Exact integer energy total over a set of signal sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnergyTally {
    pub total: u64,
    pub words: u64,
    pub n_s: usize,
}

impl EnergyTally {
    pub fn per_signal(&self) -> f64 {
        self.total as f64 / (self.words as f64 * self.n_s as f64)
    }

    /// Whether the per-signal average equals `value` exactly.
    pub fn per_signal_is(&self, value: u64) -> bool {
        self.total == value * self.words * self.n_s as u64
    }
}

/// Replaces the first `k_sh` rows of the systematic `g = (I_{k_c} | B)` by the
/// row combinations that restrict to `g_sh` on the first `n_sh` coordinates.
///
/// `g_sh` is `None` exactly when `k_sh = 0`.
pub fn build_construction(
    g: &BinMatrix,
    g_sh: Option<&BinMatrix>,
    params: ShapingParams,
) -> Result<ShapingConstruction, ShapingError> {
    params.validate()?;
    let dim = |what, expected, got| {
        if expected == got {
            Ok(())
        } else {
            Err(ShapingError::DimensionMismatch {
                what,
                expected,
                got,
            })
        }
    };
    dim("generator rows (k_c)", params.k_c(), g.rows())?;
    dim("generator columns (n)", params.n(), g.cols())?;
    if !g.is_systematic() {
        return Err(ShapingError::NotSystematic("generator"));
    }
    let mut g_so = g.clone();
    match (g_sh, params.k_sh) {
        (None, 0) => {}
        (None, _) => return Err(ShapingError::Params("k_sh > 0 needs a shaping code".into())),
        (Some(_), 0) => {
            return Err(ShapingError::Params(
                "shaping code given but k_sh = 0".into(),
            ))
        }
        (Some(g_sh), k_sh) => {
            dim("shaping code rows (k_sh)", k_sh, g_sh.rows())?;
            dim("shaping code columns (n_sh)", params.n_sh(), g_sh.cols())?;
            if !g_sh.is_systematic() {
                return Err(ShapingError::NotSystematic("shaping code"));
            }
            for i in 0..k_sh {
                let mut combo = BinVec::zeros(g.cols());
                for j in (0..g_sh.cols()).filter(|&j| g_sh.get(i, j)) {
                    combo.xor_words(g.row_words(j));
                }
                g_so.set_row(i, &combo);
            }
            if !gf2lin::rowspace_equal(&g_so, g) {
                return Err(ShapingError::RankLoss);
            }
        }
    }
    ShapingConstruction::from_parts(params, g_so, psi_layout(params.m, params.n_s))
}

impl ShapingConstruction {
    /// Assembles a construction from an already shaping-oriented matrix,
    /// checking its structure against the parameters and layout.
    pub fn from_parts(
        params: ShapingParams,
        generator: BinMatrix,
        layout: Vec<BitRole>,
    ) -> Result<Self, ShapingError> {
        params.validate()?;
        let (k_sh, k_c, n) = (params.k_sh, params.k_c(), params.n());
        if generator.rows() != k_c || generator.cols() != n {
            return Err(ShapingError::DimensionMismatch {
                what: "shaping-oriented generator size (k_c·n)",
                expected: k_c * n,
                got: generator.rows() * generator.cols(),
            });
        }
        if layout != psi_layout(params.m, params.n_s) {
            return Err(ShapingError::Params(format!(
                "layout {} does not match the PAM mapping",
                layout_string(&layout)
            )));
        }
        for (c, role) in params.expected_roles() {
            if let Some(role) = role {
                if layout[c] != role {
                    return Err(ShapingError::Params(format!(
                        "coordinate {c} must be an {role:?} bit for these parameters"
                    )));
                }
            }
        }
        let parity_amp = layout[k_c..]
            .iter()
            .filter(|&&r| r == BitRole::Amplitude)
            .count();
        if parity_amp != params.r_a || n - k_c - parity_amp != params.r_s {
            return Err(ShapingError::Params(format!(
                "layout puts {parity_amp} parity bits on amplitudes, r_a = {}",
                params.r_a
            )));
        }
        // Shaping rows restrict to (I_ksh | P_sh | 0) and message rows to
        // (0 | I_k) on the first k_c coordinates.
        for r in 0..k_c {
            for c in 0..k_c {
                let bit = generator.get(r, c);
                let ok = if r < k_sh {
                    if c < k_sh {
                        bit == (r == c)
                    } else {
                        c < params.n_sh() || !bit
                    }
                } else {
                    bit == (r == c)
                };
                if !ok {
                    return Err(ShapingError::NotSystematic("shaping-oriented generator"));
                }
            }
        }
        let table = GrayTable::new(params.m)?;
        let energy_by_label = table.energy_by_label();
        Ok(ShapingConstruction {
            params,
            generator,
            layout,
            search_cap: DEFAULT_SEARCH_CAP,
            table,
            energy_by_label,
        })
    }

    /// Overrides the exhaustive-search cap (in bits).
    pub fn with_search_cap(mut self, cap: usize) -> Self {
        self.search_cap = cap.min(63);
        self
    }

    pub fn search_cap(&self) -> usize {
        self.search_cap
    }

    pub fn params(&self) -> &ShapingParams {
        &self.params
    }

    /// The shaping-oriented generator `G_so`.
    pub fn generator(&self) -> &BinMatrix {
        &self.generator
    }

    pub fn layout(&self) -> &[BitRole] {
        &self.layout
    }

    pub fn table(&self) -> &GrayTable {
        &self.table
    }

    /// Coordinates carrying the message in systematic form.
    pub fn message_cols(&self) -> Range<usize> {
        self.params.k_sh..self.params.k_c()
    }

    /// First `k_sh` rows of `G_so`, the coset-leader generators.
    pub fn shaping_rows(&self) -> Option<BinMatrix> {
        (self.params.k_sh > 0).then(|| {
            self.generator
                .row_range(0, self.params.k_sh)
                .expect("k_sh > 0")
        })
    }

    /// `G_sh`: the shaping rows restricted to the first `n_sh` coordinates.
    pub fn shaping_code(&self) -> Option<BinMatrix> {
        self.shaping_rows()
            .map(|rows| rows.col_range(0, self.params.n_sh()).expect("n_sh > 0"))
    }

    /// Total squared norm of ψ(v).
    pub fn energy_of(&self, v: &BinVec) -> u64 {
        mapper::psi_energy(v, self.params.m, &self.energy_by_label)
    }

    pub fn map(&self, v: &BinVec) -> SignalSeq {
        mapper::map_psi(v, &self.table).expect("codeword length is m·n_s")
    }

    /// Uniform 2^m-PAM per-signal energy `(M² - 1) / 3`.
    pub fn uniform_pam_energy(&self) -> f64 {
        let levels = (1u64 << self.params.m) as f64;
        (levels * levels - 1.0) / 3.0
    }

    /// `(u_sh u)·G_so` for an information vector of length `k_c`.
    pub fn encode_info(&self, info: &BinVec) -> Result<BinVec, ShapingError> {
        Ok(gf2lin::encode(info, &self.generator)?)
    }

    /// `(0 u)·G_so`.
    fn message_codeword(&self, u: &BinVec) -> BinVec {
        let k_sh = self.params.k_sh;
        let mut v = BinVec::zeros(self.params.n());
        for r in (0..u.len()).filter(|&r| u.get(r)) {
            v.xor_words(self.generator.row_words(k_sh + r));
        }
        v
    }

    /// Shaping row XORed in when bit `p` of a key flips. Key bit `k_sh - 1`
    /// is `u_sh,1`, so numeric key order is lexicographic `u_sh` order.
    #[inline]
    fn row_for_key_bit(&self, p: usize) -> &[u64] {
        self.generator.row_words(self.params.k_sh - 1 - p)
    }

    fn leader_codeword(&self, key: u64) -> BinVec {
        let mut v = BinVec::zeros(self.params.n());
        for p in (0..self.params.k_sh).filter(|&p| (key >> p) & 1 == 1) {
            v.xor_words(self.row_for_key_bit(p));
        }
        v
    }

    /// Minimum `(energy, key)` over Gray-ordered positions `start..end` of the
    /// key space. The range must be aligned to a power of two.
    fn search_range(&self, base: &BinVec, start: u64, end: u64) -> (u64, u64) {
        let gray = |i: u64| i ^ (i >> 1);
        let mut v = base.clone();
        v.xor_assign(&self.leader_codeword(gray(start)));
        let mut best = (self.energy_of(&v), gray(start));
        for i in start + 1..end {
            let p = i.trailing_zeros() as usize;
            v.xor_words(self.row_for_key_bit(p));
            let cand = (self.energy_of(&v), gray(i));
            if cand < best {
                best = cand;
            }
        }
        best
    }

    fn check_enumerable(&self, bits: usize) -> Result<(), ShapingError> {
        if bits > self.search_cap {
            Err(ShapingError::EnumerationTooLarge {
                bits,
                cap: self.search_cap,
            })
        } else {
            Ok(())
        }
    }

    /// Lexicographically smallest minimum-energy shaping key for `base`.
    fn best_leader(&self, base: &BinVec) -> (u64, u64) {
        let k_sh = self.params.k_sh;
        let total = 1u64 << k_sh;
        if k_sh < PARALLEL_SHAPING_BITS {
            return self.search_range(base, 0, total);
        }
        let chunk = 1u64 << CHUNK_BITS;
        (0..total / chunk)
            .into_par_iter()
            .map(|c| self.search_range(base, c * chunk, (c + 1) * chunk))
            .min()
            .expect("at least one chunk")
    }
}

/// Shaped encoding: the minimum-energy member of `{(u_sh u)·G_so}`, ties going
/// to the lexicographically smallest `u_sh`.
pub fn encode_shaped(u: &BinVec, c: &ShapingConstruction) -> Result<ShapedWord, ShapingError> {
    let p = c.params;
    if u.len() != p.k {
        return Err(ShapingError::DimensionMismatch {
            what: "message length (k)",
            expected: p.k,
            got: u.len(),
        });
    }
    c.check_enumerable(p.k_sh)?;
    let base = c.message_codeword(u);
    let baseline_energy = c.energy_of(&base);
    let (energy, key) = c.best_leader(&base);
    let mut v = base;
    v.xor_assign(&c.leader_codeword(key));
    debug_assert_eq!(c.energy_of(&v), energy);
    Ok(ShapedWord {
        u: u.clone(),
        u_sh: BinVec::from_msb_first(key, p.k_sh),
        s: c.map(&v),
        v,
        energy,
        baseline_energy,
    })
}

/// Recovers the message from an information estimate `(ũ_sh, ũ)` produced by
/// a decoder for the unshaped code: strips `ũ_sh·G_sh-rows` from the codeword
/// and reads the systematic message coordinates.
pub fn decode_shaped(info_hat: &BinVec, c: &ShapingConstruction) -> Result<BinVec, ShapingError> {
    let p = c.params;
    if info_hat.len() != p.k_c() {
        return Err(ShapingError::DimensionMismatch {
            what: "information estimate length (k_c)",
            expected: p.k_c(),
            got: info_hat.len(),
        });
    }
    let mut v = c.encode_info(info_hat)?;
    for r in (0..p.k_sh).filter(|&r| info_hat.get(r)) {
        v.xor_words(c.generator.row_words(r));
    }
    Ok(v.select(c.message_cols()))
}

/// Information vector `(ũ_sh, ũ)` of a codeword of `G_so`.
///
/// The shaping bits are read from the first `k_sh` coordinates; the message
/// from the systematic coordinates after removing the shaping rows.
pub fn info_from_codeword(v: &BinVec, c: &ShapingConstruction) -> BinVec {
    let k_sh = c.params.k_sh;
    let mut stripped = v.clone();
    for r in (0..k_sh).filter(|&r| v.get(r)) {
        stripped.xor_words(c.generator.row_words(r));
    }
    let mut info = BinVec::zeros(c.params.k_c());
    for r in 0..k_sh {
        info.set(r, v.get(r));
    }
    for (i, col) in c.message_cols().enumerate() {
        info.set(k_sh + i, stripped.get(col));
    }
    info
}

/// Enumerates every codeword `(u_sh u)·G_so` in Gray order, calling
/// `f(info_key, codeword)` where `info_key` is the MSB-first information
/// vector.
fn for_each_codeword(c: &ShapingConstruction, mut f: impl FnMut(u64, &BinVec)) {
    let k_c = c.params.k_c();
    let mut v = BinVec::zeros(c.params.n());
    f(0, &v);
    for i in 1..1u64 << k_c {
        let p = i.trailing_zeros() as usize;
        v.xor_words(c.generator.row_words(k_c - 1 - p));
        f(i ^ (i >> 1), &v);
    }
}

/// Minimum-energy baseline: the `2^k` lowest-energy points of the whole PAM
/// image of the code, ties broken by lexicographic codeword order.
pub fn sphere_shaper_bruteforce(c: &ShapingConstruction) -> Result<Vec<SignalSeq>, ShapingError> {
    let p = c.params;
    c.check_enumerable(p.k_c())?;
    let mut all = Vec::with_capacity(1 << p.k_c());
    for_each_codeword(c, |_, v| all.push((c.energy_of(v), v.clone())));
    all.sort_unstable();
    Ok(all
        .into_iter()
        .take(1 << p.k)
        .map(|(_, v)| c.map(&v))
        .collect())
}

/// Energy totals of each of the `2^{k_sh}` cosets, indexed by `u_sh` in
/// lexicographic order.
pub fn coset_energy_table(c: &ShapingConstruction) -> Result<Vec<EnergyTally>, ShapingError> {
    let p = c.params;
    c.check_enumerable(p.k_c())?;
    let mut totals = vec![0u64; 1 << p.k_sh];
    for_each_codeword(c, |key, v| totals[(key >> p.k) as usize] += c.energy_of(v));
    Ok(totals
        .into_iter()
        .map(|total| EnergyTally {
            total,
            words: 1 << p.k,
            n_s: p.n_s,
        })
        .collect())
}

/// Energy total of the shaped signal set, one minimum-energy word per message.
pub fn shaped_energy_tally(c: &ShapingConstruction) -> Result<EnergyTally, ShapingError> {
    let p = c.params;
    c.check_enumerable(p.k_c())?;
    let total = (0..1u64 << p.k)
        .into_par_iter()
        .map(|x| {
            let u = BinVec::from_msb_first(x, p.k);
            c.best_leader(&c.message_codeword(&u)).0
        })
        .sum();
    Ok(EnergyTally {
        total,
        words: 1 << p.k,
        n_s: p.n_s,
    })
}

/// Energy total of the PAM image of the whole code (no shaping).
pub fn code_energy_tally(c: &ShapingConstruction) -> Result<EnergyTally, ShapingError> {
    let p = c.params;
    c.check_enumerable(p.k_c())?;
    let mut total = 0;
    for_each_codeword(c, |_, v| total += c.energy_of(v));
    Ok(EnergyTally {
        total,
        words: 1 << p.k_c(),
        n_s: p.n_s,
    })
}

impl ShapingConstruction {
    /// Serializes as the matrix text format followed by `key = value` lines.
    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut out = self.generator.to_text();
        for (key, value) in [
            ("m", p.m),
            ("n_s", p.n_s),
            ("k", p.k),
            ("k_sh", p.k_sh),
            ("k_a", p.k_a),
            ("k_s", p.k_s),
            ("r_a", p.r_a),
            ("r_s", p.r_s),
        ] {
            out.push_str(&format!("{key} = {value}\n"));
        }
        out.push_str(&format!("layout = {}\n", layout_string(&self.layout)));
        out
    }

    /// Parses [`ShapingConstruction::to_text`] output. Blank lines and `#`
    /// comments are ignored; every key is required and unknown keys are
    /// rejected.
    pub fn from_text(text: &str) -> Result<Self, ShapingError> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        let (generator, _) = gf2lin::parse_matrix_lines(&mut lines)?;
        let mut values: [Option<usize>; 8] = [None; 8];
        const KEYS: [&str; 8] = ["m", "n_s", "k", "k_sh", "k_a", "k_s", "r_a", "r_s"];
        let mut layout = None;
        for line in lines {
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| ShapingError::Parse(format!("expected `key = value`, got {line:?}")))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "layout" {
                let roles = value
                    .chars()
                    .map(|ch| match ch {
                        'a' => Ok(BitRole::Amplitude),
                        's' => Ok(BitRole::Sign),
                        other => Err(ShapingError::Parse(format!("bad layout character {other:?}"))),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                layout = Some(roles);
                continue;
            }
            let slot = KEYS
                .iter()
                .position(|&k| k == key)
                .ok_or_else(|| ShapingError::Parse(format!("unknown key {key:?}")))?;
            if values[slot].is_some() {
                return Err(ShapingError::Parse(format!("duplicate key {key:?}")));
            }
            values[slot] = Some(
                value
                    .parse()
                    .map_err(|e| ShapingError::Parse(format!("{key}: {e}")))?,
            );
        }
        let get = |i: usize| values[i].ok_or_else(|| ShapingError::Parse(format!("missing key {:?}", KEYS[i])));
        let params = ShapingParams {
            m: get(0)?,
            n_s: get(1)?,
            k: get(2)?,
            k_sh: get(3)?,
            k_a: get(4)?,
            k_s: get(5)?,
            r_a: get(6)?,
            r_s: get(7)?,
        };
        let layout = layout.ok_or_else(|| ShapingError::Parse("missing key \"layout\"".into()))?;
        if layout.len() != params.n() {
            return Err(ShapingError::Parse(format!(
                "layout has {} entries, n = {}",
                layout.len(),
                params.n()
            )));
        }
        ShapingConstruction::from_parts(params, generator, layout)
    }
}

impl fmt::Display for ShapingConstruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Small worked constructions.
pub mod presets {
    use super::*;

    /// The systematic `[6,3]` code used for 8-PAM with two signals.
    pub fn pam8_ns2_code() -> BinMatrix {
        BinMatrix::from_rows(&[
            [1, 0, 0, 1, 1, 0],
            [0, 1, 0, 1, 0, 1],
            [0, 0, 1, 0, 1, 1],
        ])
        .expect("static matrix")
    }

    /// Systematic base of the 8-PAM, two-signal shaping construction.
    pub fn pam8_ns2_base() -> BinMatrix {
        BinMatrix::from_rows(&[
            [1, 0, 0, 0, 1, 1],
            [0, 1, 0, 1, 0, 1],
            [0, 0, 1, 1, 1, 0],
        ])
        .expect("static matrix")
    }

    pub fn pam8_ns2_params() -> ShapingParams {
        ShapingParams {
            m: 3,
            n_s: 2,
            k: 2,
            k_sh: 1,
            k_a: 2,
            k_s: 0,
            r_a: 1,
            r_s: 2,
        }
    }

    /// 8-PAM, `n_s = 2`, `k = 2`, one shaping bit with `G_sh = (1 1 1)`.
    pub fn pam8_ns2() -> ShapingConstruction {
        let g_sh = BinMatrix::from_rows(&[[1, 1, 1]]).expect("static matrix");
        build_construction(&pam8_ns2_base(), Some(&g_sh), pam8_ns2_params())
            .expect("valid preset")
    }

    /// The `[6,5]` single-parity-check code, systematic.
    pub fn pam4_ns3_base() -> BinMatrix {
        let mut g = BinMatrix::zeros(5, 6).expect("static size");
        for r in 0..5 {
            g.set(r, r, true);
            g.set(r, 5, true);
        }
        g
    }

    pub fn pam4_ns3_params() -> ShapingParams {
        ShapingParams {
            m: 2,
            n_s: 3,
            k: 4,
            k_sh: 1,
            k_a: 2,
            k_s: 2,
            r_a: 0,
            r_s: 1,
        }
    }

    /// 4-PAM, `n_s = 3`, `k = 4`, one shaping bit with `G_sh = (1 1 1)`.
    pub fn pam4_ns3() -> ShapingConstruction {
        let g_sh = BinMatrix::from_rows(&[[1, 1, 1]]).expect("static matrix");
        build_construction(&pam4_ns3_base(), Some(&g_sh), pam4_ns3_params())
            .expect("valid preset")
    }

    pub const NAMES: [&str; 2] = ["pam8-ns2", "pam4-ns3"];

    pub fn by_name(name: &str) -> Option<ShapingConstruction> {
        match name {
            "pam8-ns2" => Some(pam8_ns2()),
            "pam4-ns3" => Some(pam4_ns3()),
            _ => None,
        }
    }
}
