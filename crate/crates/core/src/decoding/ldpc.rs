use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::gf2lin::{BinMatrix, BinVec};

use super::DecodingError;

/// Sparse parity-check matrix stored as check and variable adjacency lists
/// (0-based indices, each list sorted).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParityCheck {
    n: usize,
    checks: Vec<Vec<usize>>,
    vars: Vec<Vec<usize>>,
}

impl ParityCheck {
    /// Builds the structure from the variable lists of each check.
    pub fn from_checks(n: usize, checks: Vec<Vec<usize>>) -> Result<Self, DecodingError> {
        if n == 0 || checks.is_empty() {
            return Err(DecodingError::InvalidStructure("empty parity-check matrix".into()));
        }
        let mut vars = vec![Vec::new(); n];
        let mut sorted = Vec::with_capacity(checks.len());
        for (c, mut row) in checks.into_iter().enumerate() {
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(DecodingError::InvalidStructure(format!("check {c} lists a variable twice")));
            }
            if row.is_empty() {
                return Err(DecodingError::InvalidStructure(format!("check {c} is empty")));
            }
            for &v in &row {
                if v >= n {
                    return Err(DecodingError::IndexOutOfRange { index: v + 1, max: n });
                }
                vars[v].push(c);
            }
            sorted.push(row);
        }
        if let Some(v) = vars.iter().position(|l| l.is_empty()) {
            return Err(DecodingError::InvalidStructure(format!("variable {v} is in no check")));
        }
        Ok(ParityCheck {
            n,
            checks: sorted,
            vars,
        })
    }

    pub fn from_dense(h: &BinMatrix) -> Result<Self, DecodingError> {
        let checks = (0..h.rows())
            .map(|r| (0..h.cols()).filter(|&c| h.get(r, c)).collect())
            .collect();
        Self::from_checks(h.cols(), checks)
    }

    pub fn to_dense(&self) -> BinMatrix {
        let mut h = BinMatrix::zeros(self.checks.len(), self.n).expect("non-empty by construction");
        for (r, row) in self.checks.iter().enumerate() {
            for &c in row {
                h.set(r, c, true);
            }
        }
        h
    }

    /// Code length (number of variable nodes).
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of check nodes.
    pub fn m(&self) -> usize {
        self.checks.len()
    }

    pub fn checks(&self) -> &[Vec<usize>] {
        &self.checks
    }

    pub fn vars(&self) -> &[Vec<usize>] {
        &self.vars
    }

    pub fn edges(&self) -> usize {
        self.checks.iter().map(Vec::len).sum()
    }

    /// Column `j` of the result is column `perm[j]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self, DecodingError> {
        if perm.len() != self.n {
            return Err(DecodingError::LengthMismatch {
                expected: self.n,
                got: perm.len(),
            });
        }
        let mut inverse = vec![usize::MAX; self.n];
        for (j, &p) in perm.iter().enumerate() {
            if p >= self.n || inverse[p] != usize::MAX {
                return Err(DecodingError::InvalidStructure("not a permutation".into()));
            }
            inverse[p] = j;
        }
        let checks = self
            .checks
            .iter()
            .map(|row| row.iter().map(|&v| inverse[v]).collect())
            .collect();
        Self::from_checks(self.n, checks)
    }

    pub fn is_codeword(&self, v: &BinVec) -> bool {
        v.len() == self.n && self.checks.iter().all(|row| row.iter().filter(|&&i| v.get(i)).count() % 2 == 0)
    }

    /// Regular Gallager ensemble: `n·wc/wr` checks in `wc` bands, the first
    /// band consecutive and the others random column permutations of it.
    /// Permutations that create 4-cycles are redrawn a bounded number of times.
    pub fn gallager(n: usize, wc: usize, wr: usize, seed: u64) -> Result<Self, DecodingError> {
        if wc == 0 || wr < 2 || n == 0 || n % wr != 0 {
            return Err(DecodingError::InvalidStructure(format!(
                "Gallager ensemble needs wr | n, got n={n}, wc={wc}, wr={wr}"
            )));
        }
        let band = n / wr;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut checks: Vec<Vec<usize>> = (0..band).map(|i| (i * wr..(i + 1) * wr).collect()).collect();
        for _ in 1..wc {
            let mut best: Option<(usize, Vec<Vec<usize>>)> = None;
            for _ in 0..64 {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(&mut rng);
                let rows: Vec<Vec<usize>> = (0..band)
                    .map(|i| perm[i * wr..(i + 1) * wr].to_vec())
                    .collect();
                let cycles = four_cycles(&checks, &rows, n);
                if best.as_ref().is_none_or(|(c, _)| cycles < *c) {
                    best = Some((cycles, rows));
                }
                if cycles == 0 {
                    break;
                }
            }
            checks.extend(best.expect("at least one draw").1);
        }
        Self::from_checks(n, checks)
    }

    /// Serializes in alist format without zero padding.
    pub fn to_alist(&self) -> String {
        let mut out = String::new();
        let col_max = self.vars.iter().map(Vec::len).max().unwrap_or(0);
        let row_max = self.checks.iter().map(Vec::len).max().unwrap_or(0);
        let join = |l: &[usize]| l.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
        let degrees = |l: &[Vec<usize>]| l.iter().map(|x| x.len().to_string()).collect::<Vec<_>>().join(" ");
        writeln!(out, "{} {}", self.n, self.m()).unwrap();
        writeln!(out, "{col_max} {row_max}").unwrap();
        writeln!(out, "{}", degrees(&self.vars)).unwrap();
        writeln!(out, "{}", degrees(&self.checks)).unwrap();
        for l in &self.vars {
            writeln!(out, "{}", join(l)).unwrap();
        }
        for l in &self.checks {
            writeln!(out, "{}", join(l)).unwrap();
        }
        out
    }
}

/// Number of variable pairs that would share two checks once `rows` joins `existing`.
fn four_cycles(existing: &[Vec<usize>], rows: &[Vec<usize>], n: usize) -> usize {
    let mut var_checks: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (c, row) in existing.iter().chain(rows).enumerate() {
        for &v in row {
            var_checks[v].push(c);
        }
    }
    let offset = existing.len();
    let mut count = 0;
    for (i, row) in rows.iter().enumerate() {
        for a in 0..row.len() {
            for b in a + 1..row.len() {
                let (x, y) = (&var_checks[row[a]], &var_checks[row[b]]);
                count += x.iter().filter(|&&c| c != offset + i && y.contains(&c)).count();
            }
        }
    }
    count
}

fn malformed(msg: impl Into<String>) -> DecodingError {
    DecodingError::MalformedAlist(msg.into())
}

/// Parses an alist description. Zero entries in the adjacency lists are
/// treated as padding and skipped.
pub fn parse_alist(text: &str) -> Result<ParityCheck, DecodingError> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let mut numbers = |what: &str| -> Result<Vec<usize>, DecodingError> {
        let line = lines.next().ok_or_else(|| malformed(format!("missing {what}")))?;
        line.split_whitespace()
            .map(|t| t.parse::<usize>().map_err(|_| malformed(format!("bad number {t:?} in {what}"))))
            .collect()
    };
    let header = numbers("header")?;
    let [n, m] = header[..] else {
        return Err(malformed("header must be `n m`"));
    };
    if n == 0 || m == 0 {
        return Err(malformed("zero dimension in header"));
    }
    let max = numbers("maximum degrees")?;
    let [col_max, row_max] = max[..] else {
        return Err(malformed("maximum degree line must hold two numbers"));
    };
    let col_deg = numbers("column degrees")?;
    let row_deg = numbers("row degrees")?;
    if col_deg.len() != n || row_deg.len() != m {
        return Err(DecodingError::DegreeMismatch(format!(
            "expected {n} column and {m} row degrees, got {} and {}",
            col_deg.len(),
            row_deg.len()
        )));
    }
    if col_deg.iter().any(|&d| d > col_max) || row_deg.iter().any(|&d| d > row_max) {
        return Err(DecodingError::DegreeMismatch("degree exceeds declared maximum".into()));
    }
    let mut read_lists = |count: usize, bound: usize, degrees: &[usize], what: &str| {
        (0..count)
            .map(|i| {
                let list: Vec<usize> = numbers(what)?.into_iter().filter(|&x| x != 0).collect();
                if let Some(&bad) = list.iter().find(|&&x| x > bound) {
                    return Err(DecodingError::IndexOutOfRange { index: bad, max: bound });
                }
                if list.len() != degrees[i] {
                    return Err(DecodingError::DegreeMismatch(format!(
                        "{what} {} has {} entries, declared degree {}",
                        i + 1,
                        list.len(),
                        degrees[i]
                    )));
                }
                Ok(list.into_iter().map(|x| x - 1).collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>, _>>()
    };
    let var_lists = read_lists(n, m, &col_deg, "column")?;
    let check_lists = read_lists(m, n, &row_deg, "row")?;
    let h = ParityCheck::from_checks(n, check_lists)?;
    for (v, list) in var_lists.into_iter().enumerate() {
        let mut list = list;
        list.sort_unstable();
        if list != h.vars[v] {
            return Err(DecodingError::DegreeMismatch(format!(
                "column {} disagrees with the row lists",
                v + 1
            )));
        }
    }
    Ok(h)
}
