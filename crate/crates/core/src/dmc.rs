//! Binary-input discrete memoryless channels.
//!
//! A [`DiscreteChannel`] is a 2×|Y| row-stochastic matrix; row `x` is the
//! conditional output distribution given input bit `x`. Output labels are
//! opaque integers `0..|Y|`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const ROW_SUM_TOL: f64 = 1e-12;

/// Binary entropy in bits, with `0·log2(0) = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    if p <= 0.0 || p >= 1.0 {
        return 0.0;
    }
    -p * p.log2() - (1.0 - p) * (1.0 - p).log2()
}

/// Secrecy capacity `h2(pe) - h2(pb)` of the degraded wiretap BSC.
pub fn secrecy_capacity(p_b: f64, p_e: f64) -> Result<f64> {
    if !(p_b > 0.0 && p_e < 0.5) {
        return Err(Error::InvalidParameter(format!("need 0 < p_b < p_e < 1/2, got p_b={p_b}, p_e={p_e}")));
    }
    if p_b >= p_e {
        return Err(Error::InvalidParameter(format!("eavesdropper channel is not degraded: p_b={p_b} >= p_e={p_e}")));
    }
    Ok(binary_entropy(p_e) - binary_entropy(p_b))
}

/// Capacity, Bhattacharyya parameter and ML bit-error probability of a channel.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelMetrics {
    pub capacity: f64,
    pub bhattacharyya: f64,
    pub error_prob: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ChannelRepr", into = "ChannelRepr")]
pub struct DiscreteChannel {
    rows: [Vec<f64>; 2],
}

#[derive(Serialize, Deserialize)]
struct ChannelRepr {
    outputs: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<ChannelRepr> for DiscreteChannel {
    type Error = Error;

    fn try_from(repr: ChannelRepr) -> Result<Self> {
        let [r0, r1]: [Vec<f64>; 2] =
            repr.rows.try_into().map_err(|_| Error::InvalidChannel("expected exactly two rows".into()))?;
        if r0.len() != repr.outputs {
            return Err(Error::SizeMismatch { expected: repr.outputs, got: r0.len() });
        }
        DiscreteChannel::new([r0, r1])
    }
}

impl From<DiscreteChannel> for ChannelRepr {
    fn from(w: DiscreteChannel) -> Self {
        let [r0, r1] = w.rows;
        ChannelRepr { outputs: r0.len(), rows: vec![r0, r1] }
    }
}

impl DiscreteChannel {
    pub fn new(rows: [Vec<f64>; 2]) -> Result<Self> {
        let outputs = rows[0].len();
        if outputs == 0 {
            return Err(Error::InvalidChannel("empty output alphabet".into()));
        }
        if rows[1].len() != outputs {
            return Err(Error::SizeMismatch { expected: outputs, got: rows[1].len() });
        }
        for row in &rows {
            if row.iter().any(|&p| !(0.0..=1.0).contains(&p)) {
                return Err(Error::InvalidChannel("probability outside [0, 1]".into()));
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > ROW_SUM_TOL {
                return Err(Error::InvalidChannel(format!("row sums to {sum}")));
            }
        }
        Ok(DiscreteChannel { rows })
    }

    /// Builds a channel without validation; rows are renormalized.
    pub(crate) fn from_rows_normalized(mut rows: [Vec<f64>; 2]) -> Self {
        for row in rows.iter_mut() {
            let sum: f64 = row.iter().sum();
            if sum > 0.0 {
                row.iter_mut().for_each(|p| *p /= sum);
            }
        }
        DiscreteChannel { rows }
    }

    /// Binary symmetric channel with crossover probability `p`.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidParameter(format!("crossover probability {p} not in (0, 1)")));
        }
        Ok(DiscreteChannel { rows: [vec![1.0 - p, p], vec![p, 1.0 - p]] })
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, x: u8) -> &[f64] {
        &self.rows[x as usize]
    }

    pub fn prob(&self, x: u8, y: usize) -> f64 {
        self.rows[x as usize][y]
    }

    /// Mutual information under a uniform input bit, in bits.
    pub fn capacity(&self) -> f64 {
        let mut total = 0.0;
        for (&a, &b) in self.rows[0].iter().zip(&self.rows[1]) {
            let avg = 0.5 * (a + b);
            if a > 0.0 {
                total += 0.5 * a * (a / avg).log2();
            }
            if b > 0.0 {
                total += 0.5 * b * (b / avg).log2();
            }
        }
        total.clamp(0.0, 1.0)
    }

    pub fn bhattacharyya(&self) -> f64 {
        self.rows[0].iter().zip(&self.rows[1]).map(|(a, b)| (a * b).sqrt()).sum::<f64>().min(1.0)
    }

    /// ML bit-error probability under a uniform input bit.
    pub fn error_prob(&self) -> f64 {
        0.5 * self.rows[0].iter().zip(&self.rows[1]).map(|(a, b)| a.min(*b)).sum::<f64>()
    }

    pub fn metrics(&self) -> ChannelMetrics {
        ChannelMetrics { capacity: self.capacity(), bhattacharyya: self.bhattacharyya(), error_prob: self.error_prob() }
    }

    /// Returns the channel with output `y` renamed to `perm[y]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.outputs() {
            return Err(Error::SizeMismatch { expected: self.outputs(), got: perm.len() });
        }
        let mut rows = [vec![0.0; perm.len()], vec![0.0; perm.len()]];
        for (y, &target) in perm.iter().enumerate() {
            rows[0][target] = self.rows[0][y];
            rows[1][target] = self.rows[1][y];
        }
        DiscreteChannel::new(rows)
    }

    /// Searches for an involutive output permutation `π` with
    /// `W(y|0) = W(π(y)|1)` for every `y`.
    pub fn is_symmetric(&self, tol: f64) -> Option<Vec<usize>> {
        find_symmetry(&self.rows[0], &self.rows[1], tol)
    }
}

/// Capacity (uniform-input mutual information) of `w`.
pub fn capacity(w: &DiscreteChannel) -> f64 {
    w.capacity()
}

pub(crate) fn approx_eq(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * x.abs().max(y.abs())
}

/// Finds an involution `π` on column indices such that `row0[j] = row1[π(j)]`
/// within relative tolerance `tol`.
///
/// Columns with equal entries are fixed points; the remaining columns are
/// matched greedily against their swapped counterparts in sorted order.
pub fn find_symmetry(row0: &[f64], row1: &[f64], tol: f64) -> Option<Vec<usize>> {
    let n = row0.len();
    if row1.len() != n {
        return None;
    }
    let mut perm: Vec<usize> = (0..n).collect();
    // Columns leaning towards input 0 (`hi`) must pair with columns leaning towards 1 (`lo`).
    let mut hi = Vec::new();
    let mut lo = Vec::new();
    for j in 0..n {
        let (a, b) = (row0[j], row1[j]);
        if approx_eq(a, b, tol) {
            continue;
        }
        if a > b {
            hi.push(j);
        } else {
            lo.push(j);
        }
    }
    if hi.len() != lo.len() {
        return None;
    }
    // hi column (a, b) matches lo column (b, a): sort both by their larger entry.
    let key_hi = |j: &usize| (row0[*j], row1[*j]);
    let key_lo = |j: &usize| (row1[*j], row0[*j]);
    hi.sort_by(|x, y| {
        let (kx, ky) = (key_hi(x), key_hi(y));
        kx.0.total_cmp(&ky.0).then(kx.1.total_cmp(&ky.1)).then(x.cmp(y))
    });
    lo.sort_by(|x, y| {
        let (kx, ky) = (key_lo(x), key_lo(y));
        kx.0.total_cmp(&ky.0).then(kx.1.total_cmp(&ky.1)).then(x.cmp(y))
    });
    let mut used = vec![false; lo.len()];
    let lo_keys: Vec<(f64, f64)> = lo.iter().map(key_lo).collect();
    for &j in &hi {
        let (a, b) = key_hi(&j);
        // First candidate whose leading entry may lie within tolerance.
        let start = lo_keys.partition_point(|k| k.0 < a && !approx_eq(k.0, a, tol));
        let mut found = None;
        for (idx, k) in lo_keys.iter().enumerate().skip(start) {
            if !approx_eq(k.0, a, tol) {
                if k.0 > a {
                    break;
                }
                continue;
            }
            if !used[idx] && approx_eq(k.1, b, tol) {
                found = Some(idx);
                break;
            }
        }
        let idx = found?;
        used[idx] = true;
        perm[j] = lo[idx];
        perm[lo[idx]] = j;
    }
    Some(perm)
}

/// A general `|X| × |Y|` transition matrix, used for message-level super-channels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransitionMatrix {
    rows: Vec<Vec<f64>>,
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let outputs = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || outputs == 0 {
            return Err(Error::InvalidChannel("empty transition matrix".into()));
        }
        for row in &rows {
            if row.len() != outputs {
                return Err(Error::SizeMismatch { expected: outputs, got: row.len() });
            }
            let sum: f64 = row.iter().sum();
            if (sum - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidChannel(format!("row sums to {sum}")));
            }
        }
        Ok(TransitionMatrix { rows })
    }

    pub fn inputs(&self) -> usize {
        self.rows.len()
    }

    pub fn outputs(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// `I(X;Y)` in bits for input distribution `px`.
    pub fn mutual_information(&self, px: &[f64]) -> Result<f64> {
        if px.len() != self.inputs() {
            return Err(Error::SizeMismatch { expected: self.inputs(), got: px.len() });
        }
        let mut py = vec![0.0; self.outputs()];
        for (row, &p) in self.rows.iter().zip(px) {
            for (acc, &w) in py.iter_mut().zip(row) {
                *acc += p * w;
            }
        }
        let mut mi = 0.0;
        for (row, &p) in self.rows.iter().zip(px) {
            if p == 0.0 {
                continue;
            }
            for (&w, &q) in row.iter().zip(&py) {
                if w > 0.0 {
                    mi += p * w * (w / q).log2();
                }
            }
        }
        Ok(mi.max(0.0))
    }

    pub fn uniform_mutual_information(&self) -> f64 {
        let px = vec![1.0 / self.inputs() as f64; self.inputs()];
        self.mutual_information(&px).expect("shape checked")
    }
}
