//! Exhaustive checks at tiny blocklengths.
//!
//! Bit channels are built by full enumeration of the input vector and the
//! channel output, with no quantization:
//! `W_i(y, w_0..w_{i-1} | w_i) = 2^{-(N-1)} Σ_{suffix} W^N(y | x(w))`, where
//! `w` is `v` (polar, `x = v G_N`) or `u` (PAC, `x = u T G_N`). All inputs are
//! uniform; frozen sets play no role in these definitions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{check_pow2, polar_transform, precode, CodeSpec, GeneratorPoly};
use crate::dmc::{find_symmetry, DiscreteChannel, TransitionMatrix};
use crate::polarize::exact_bit_channels;
use crate::{Bit, Error, Result};

/// Largest number of joint (input, output) states enumerated.
pub const ENUMERATION_BUDGET: u128 = 1 << 26;
const SYMMETRY_TOL: f64 = 1e-9;
const COLUMN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    /// Polar bit channels on `v`.
    V,
    /// PAC bit channels on `u`.
    U,
}

/// Bit channel `i` with columns grouped by prefix: column
/// `prefix · |Y|^N + y` where `y` is the base-`|Y|` index of `y_0..y_{N-1}`
/// and bit `j` of `prefix` is `w_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactBitChannel {
    pub index: usize,
    pub outputs_per_prefix: usize,
    pub rows: [Vec<f64>; 2],
}

impl ExactBitChannel {
    pub fn columns(&self) -> usize {
        self.rows[0].len()
    }

    pub fn prefixes(&self) -> usize {
        1 << self.index
    }

    /// The `2 × |Y|^N` block for one prefix value.
    pub fn submatrix(&self, prefix: usize) -> (&[f64], &[f64]) {
        let m = self.outputs_per_prefix;
        (&self.rows[0][prefix * m..(prefix + 1) * m], &self.rows[1][prefix * m..(prefix + 1) * m])
    }

    /// Mutual information under a uniform input bit, in bits.
    pub fn mutual_information(&self) -> f64 {
        let mut total = 0.0;
        for (&a, &b) in self.rows[0].iter().zip(&self.rows[1]) {
            let avg = 0.5 * (a + b);
            for p in [a, b] {
                if p > 0.0 {
                    total += 0.5 * p * (p / avg).log2();
                }
            }
        }
        total.max(0.0)
    }
}

fn check_budget(n_len: usize, outputs: usize) -> Result<()> {
    let states = (1u128 << n_len) * (outputs as u128).pow(n_len as u32);
    if n_len > 30 || states > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget(states));
    }
    Ok(())
}

fn bits_of(idx: usize, len: usize) -> Vec<Bit> {
    (0..len).map(|j| ((idx >> j) & 1) as Bit).collect()
}

/// `W^N(y | x)` for every `y`, indexed base `|Y|` with `y_0` least significant.
fn product_column(w: &DiscreteChannel, x: &[Bit], out: &mut [f64]) {
    let q = w.outputs();
    out[0] = 1.0;
    let mut filled = 1;
    for &xj in x {
        let row = w.row(xj);
        // Extend from the highest block down so sources are read before overwritten.
        for s in (0..q).rev() {
            for t in 0..filled {
                out[s * filled + t] = out[t] * row[s];
            }
        }
        filled *= q;
    }
}

/// All `N` exact bit channels of `spec` over `w` in one enumeration.
pub fn exact_bit_channels_enumerated(spec: &CodeSpec, w: &DiscreteChannel, domain: Domain) -> Result<Vec<ExactBitChannel>> {
    let n_len = spec.len();
    check_pow2(n_len)?;
    check_budget(n_len, w.outputs())?;
    let m = w.outputs().pow(n_len as u32);
    let mut chans: Vec<ExactBitChannel> = (0..n_len)
        .map(|i| ExactBitChannel { index: i, outputs_per_prefix: m, rows: [vec![0.0; m << i], vec![0.0; m << i]] })
        .collect();
    let scale = 0.5f64.powi(n_len as i32 - 1);
    let mut col = vec![0.0; m];
    for idx in 0..1usize << n_len {
        let wv = bits_of(idx, n_len);
        let v = match domain {
            Domain::V => wv,
            Domain::U => precode(spec, &wv),
        };
        let x = polar_transform(&v)?;
        product_column(w, &x, &mut col);
        for (i, ch) in chans.iter_mut().enumerate() {
            let prefix = idx & ((1 << i) - 1);
            let row = &mut ch.rows[(idx >> i) & 1][prefix * m..(prefix + 1) * m];
            for (r, &p) in row.iter_mut().zip(&col) {
                *r += scale * p;
            }
        }
    }
    Ok(chans)
}

/// Exact bit channel `i` (0-based) of `spec` over `w`.
pub fn exact_bit_channel(spec: &CodeSpec, w: &DiscreteChannel, i: usize, domain: Domain) -> Result<ExactBitChannel> {
    if i >= spec.len() {
        return Err(Error::InvalidParameter(format!("index {i} out of range for N={}", spec.len())));
    }
    Ok(exact_bit_channels_enumerated(spec, w, domain)?.swap_remove(i))
}

/// Labels values so that entries closer than `tol` (chained) share a label.
fn cluster_labels(values: &[f64], tol: f64) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    idx.sort_by(|&x, &y| values[x].total_cmp(&values[y]));
    let mut labels = vec![0; values.len()];
    let mut label = 0;
    for w in 0..idx.len() {
        if w > 0 && values[idx[w]] - values[idx[w - 1]] > tol {
            label += 1;
        }
        labels[idx[w]] = label;
    }
    labels
}

/// True when the two matrices have the same multiset of columns, entries
/// compared to within `1e-10`.
pub fn equivalent_by_column_permutation(a: &ExactBitChannel, b: &ExactBitChannel) -> bool {
    if a.columns() != b.columns() {
        return false;
    }
    let m = a.columns();
    let all: Vec<f64> = [&a.rows[0], &a.rows[1], &b.rows[0], &b.rows[1]].into_iter().flatten().copied().collect();
    let labels = cluster_labels(&all, COLUMN_TOL);
    let columns = |base: usize| {
        let mut cols: Vec<(usize, usize)> = (0..m).map(|j| (labels[base + j], labels[base + m + j])).collect();
        cols.sort_unstable();
        cols
    };
    columns(0) == columns(2 * m)
}

/// True when every per-prefix block admits an involutive column permutation
/// `π` with `A(0, j) = A(1, π(j))`.
pub fn check_submatrix_symmetry(p: &ExactBitChannel) -> bool {
    (0..p.prefixes()).all(|prefix| {
        let (r0, r1) = p.submatrix(prefix);
        find_symmetry(r0, r1, SYMMETRY_TOL).is_some()
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MiChainReport {
    pub i_u: f64,
    pub i_v: f64,
    pub i_x: f64,
    pub per_index_u: Vec<f64>,
    pub per_index_v: Vec<f64>,
    pub max_abs_error: f64,
}

impl MiChainReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.max_abs_error <= tol
    }
}

/// Per-index and total mutual informations in the `u`, `v` and `x` domains.
pub fn mi_chain_check(spec: &CodeSpec, w: &DiscreteChannel) -> Result<MiChainReport> {
    let n_len = spec.len();
    let uc = exact_bit_channels_enumerated(spec, w, Domain::U)?;
    let vc = exact_bit_channels_enumerated(spec, w, Domain::V)?;
    let per_u: Vec<f64> = uc.iter().map(ExactBitChannel::mutual_information).collect();
    let per_v: Vec<f64> = vc.iter().map(ExactBitChannel::mutual_information).collect();

    // I(X;Y) over the 2^N equiprobable codewords.
    let m = w.outputs().pow(n_len as u32);
    let mut py = vec![0.0; m];
    let mut cols = Vec::with_capacity(1 << n_len);
    let mut col = vec![0.0; m];
    for idx in 0..1usize << n_len {
        let x = polar_transform(&precode(spec, &bits_of(idx, n_len)))?;
        product_column(w, &x, &mut col);
        for (a, &p) in py.iter_mut().zip(&col) {
            *a += p / (1u64 << n_len) as f64;
        }
        cols.push(col.clone());
    }
    let mut i_x = 0.0;
    for c in &cols {
        for (&p, &q) in c.iter().zip(&py) {
            if p > 0.0 {
                i_x += p / (1u64 << n_len) as f64 * (p / q).log2();
            }
        }
    }
    let i_u: f64 = per_u.iter().sum();
    let i_v: f64 = per_v.iter().sum();
    let mut err = (i_u - i_x).abs().max((i_v - i_x).abs());
    for (a, b) in per_u.iter().zip(&per_v) {
        err = err.max((a - b).abs());
    }
    Ok(MiChainReport { i_u, i_v, i_x, per_index_u: per_u, per_index_v: per_v, max_abs_error: err })
}

/// Message-to-observation channel of a coset code `c = m·G' ⊕ r·G`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperChannel {
    pub matrix: TransitionMatrix,
    pub base: DiscreteChannel,
    /// Rows spanning the message cosets (`G'`), used for the output classes.
    pub message_rows: Vec<Vec<Bit>>,
    pub n: usize,
}

/// Rank over GF(2) of the given rows.
pub fn gf2_rank(rows: &[Vec<Bit>]) -> usize {
    let mut m: Vec<Vec<Bit>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&r| m[r][c] == 1) else { continue };
        m.swap(rank, p);
        for r in 0..m.len() {
            if r != rank && m[r][c] == 1 {
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(&pivot) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn combine(rows: &[Vec<Bit>], coeffs: usize, n: usize) -> Vec<Bit> {
    let mut out = vec![0; n];
    for (j, row) in rows.iter().enumerate() {
        if (coeffs >> j) & 1 == 1 {
            for (o, &b) in out.iter_mut().zip(row) {
                *o ^= b;
            }
        }
    }
    out
}

/// `W*(y | m) = 2^{-(n-k)} Σ_r Π_j W(y_j | c_j)` with `c = m·G' ⊕ r·G`.
///
/// `g` is the `(n-k) × n` randomizing basis, `gp` the `k × n` message basis;
/// the stack must have full row rank.
pub fn coset_superchannel(g: &[Vec<Bit>], gp: &[Vec<Bit>], w: &DiscreteChannel) -> Result<SuperChannel> {
    let n = g.first().or(gp.first()).map_or(0, Vec::len);
    if n == 0 || g.iter().chain(gp).any(|r| r.len() != n) {
        return Err(Error::InvalidParameter("generator rows must share a nonzero length".into()));
    }
    let stack: Vec<Vec<Bit>> = g.iter().chain(gp).cloned().collect();
    if gf2_rank(&stack) != stack.len() {
        return Err(Error::RankDeficient);
    }
    let states = (1u128 << (g.len() + gp.len())) * (w.outputs() as u128).pow(n as u32);
    if n > 30 || states > ENUMERATION_BUDGET {
        return Err(Error::EnumerationBudget(states));
    }
    let m_out = w.outputs().pow(n as u32);
    let scale = 0.5f64.powi(g.len() as i32);
    let mut col = vec![0.0; m_out];
    let mut rows = Vec::with_capacity(1 << gp.len());
    for msg in 0..1usize << gp.len() {
        let base = combine(gp, msg, n);
        let mut row = vec![0.0; m_out];
        for r in 0..1usize << g.len() {
            let c: Vec<Bit> = base.iter().zip(combine(g, r, n)).map(|(a, b)| a ^ b).collect();
            product_column(w, &c, &mut col);
            for (x, &p) in row.iter_mut().zip(&col) {
                *x += scale * p;
            }
        }
        rows.push(row);
    }
    Ok(SuperChannel { matrix: TransitionMatrix::new(rows)?, base: w.clone(), message_rows: gp.to_vec(), n })
}

fn sorted(v: impl Iterator<Item = f64>) -> Vec<f64> {
    let mut out: Vec<f64> = v.collect();
    out.sort_by(f64::total_cmp);
    out
}

fn same_multiset(x: &[f64], y: &[f64]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(a, b)| (a - b).abs() <= COLUMN_TOL)
}

/// Checks that `W*` is symmetric: rows are permutations of one another, and
/// within each output class `y ~ π^{v}(y)` (`v` in the row space of `G'`)
/// the identity `W*(y | m') = W*(π^{m·G'}(y) | m ⊕ m')` holds, so both rows
/// and columns are permuted inside every class.
pub fn check_superchannel_symmetry(ws: &SuperChannel) -> bool {
    let Some(pi) = ws.base.is_symmetric(SYMMETRY_TOL) else { return false };
    let rows = ws.matrix.rows();
    let first = sorted(rows[0].iter().copied());
    if rows.iter().any(|r| !same_multiset(&sorted(r.iter().copied()), &first)) {
        return false;
    }
    let q = ws.base.outputs();
    let n = ws.n;
    let k = ws.message_rows.len();
    let m_out = rows[0].len();
    let apply = |y: usize, v: &[Bit]| -> usize {
        let (mut rest, mut out, mut place) = (y, 0, 1);
        for &vj in v.iter().take(n) {
            let s = rest % q;
            rest /= q;
            out += place * if vj == 1 { pi[s] } else { s };
            place *= q;
        }
        out
    };
    let shifts: Vec<Vec<Bit>> = (0..1usize << k).map(|m| combine(&ws.message_rows, m, n)).collect();
    for (m, v) in shifts.iter().enumerate() {
        for y in 0..m_out {
            let y2 = apply(y, v);
            for mp in 0..1usize << k {
                let (a, b) = (rows[mp][y], rows[m ^ mp][y2]);
                if (a - b).abs() > SYMMETRY_TOL * a.abs().max(b.abs()).max(1e-300) {
                    return false;
                }
            }
        }
    }
    // Rows restricted to each class are permutations of each other.
    let mut class = vec![usize::MAX; m_out];
    for y in 0..m_out {
        if class[y] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = shifts.iter().map(|v| apply(y, v)).collect();
        for &z in &members {
            class[z] = y;
        }
        let mut members = members;
        members.sort_unstable();
        members.dedup();
        let reference = sorted(members.iter().map(|&z| rows[0][z]));
        if rows.iter().any(|r| !same_multiset(&sorted(members.iter().map(|&z| r[z])), &reference)) {
            return false;
        }
    }
    true
}

/// Rows `indices` of `G_N = B_N F^{⊗n}`.
pub fn polar_generator_rows(n_len: usize, indices: &[usize]) -> Result<Vec<Vec<Bit>>> {
    check_pow2(n_len)?;
    indices
        .iter()
        .map(|&i| {
            let mut e = vec![0; n_len];
            *e.get_mut(i).ok_or_else(|| Error::InvalidParameter(format!("row {i} out of range")))? = 1;
            polar_transform(&e)
        })
        .collect()
}

/// Exact `I(M;Z)` of a polar coset code with sets `A` (message) and `R`
/// (random), uniform message.
pub fn exact_coset_leakage(n_len: usize, a: &[usize], r: &[usize], w: &DiscreteChannel) -> Result<f64> {
    let sc = coset_superchannel(&polar_generator_rows(n_len, r)?, &polar_generator_rows(n_len, a)?, w)?;
    Ok(sc.matrix.uniform_mutual_information())
}

/// One line of a verification report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerificationRecord {
    pub check: String,
    pub instance: String,
    pub pass: bool,
    pub max_abs_error: f64,
}

fn record(check: &str, instance: String, pass: bool, err: f64) -> VerificationRecord {
    VerificationRecord { check: check.into(), instance, pass, max_abs_error: err }
}

/// Polynomials used for the equivalence sweep: `1+D`, `1+D+D²`, `1+D²+D³`.
pub fn sweep_generators() -> Vec<GeneratorPoly> {
    [vec![1, 1], vec![1, 1, 1], vec![1, 0, 1, 1]].into_iter().map(|c| GeneratorPoly::new(c).expect("valid")).collect()
}

/// Polar/PAC bit-channel equivalence over `N ∈ {2,4,8}`, every index,
/// `BSC(p)` for `p ∈ {0.11, 0.2, 0.3}` and the sweep generators.
pub fn equivalence_suite() -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::new();
    for n_len in [2usize, 4, 8] {
        for p in [0.11, 0.2, 0.3] {
            let w = DiscreteChannel::bsc(p)?;
            for g in sweep_generators() {
                let spec = CodeSpec::pac(n_len, vec![], g.clone())?;
                let vc = exact_bit_channels_enumerated(&spec, &w, Domain::V)?;
                let uc = exact_bit_channels_enumerated(&spec, &w, Domain::U)?;
                for (a, b) in vc.iter().zip(&uc) {
                    let err = (a.mutual_information() - b.mutual_information()).abs();
                    let inst = format!("N={n_len} p={p} g={} i={}", g.to_octal(), a.index);
                    out.push(record("column_permutation", inst.clone(), equivalent_by_column_permutation(a, b), 0.0));
                    out.push(record("bit_channel_mi", inst, err <= 1e-10, err));
                }
            }
        }
    }
    Ok(out)
}

/// Per-prefix symmetry of every polar bit channel in the equivalence sweep,
/// plus agreement of enumerated capacities with the recursive synthesis.
pub fn submatrix_symmetry_suite() -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::new();
    for n_len in [2usize, 4, 8] {
        for p in [0.11, 0.2, 0.3] {
            let w = DiscreteChannel::bsc(p)?;
            let spec = CodeSpec::polar(n_len, vec![])?;
            let chans = exact_bit_channels_enumerated(&spec, &w, Domain::V)?;
            let synth = exact_bit_channels(&w, n_len.trailing_zeros())?;
            for (c, s) in chans.iter().zip(&synth) {
                let inst = format!("N={n_len} p={p} i={}", c.index);
                out.push(record("submatrix_symmetry", inst.clone(), check_submatrix_symmetry(c), 0.0));
                let err = (c.mutual_information() - s.capacity()).abs();
                out.push(record("enumeration_vs_synthesis", inst, err <= 1e-12, err));
            }
        }
    }
    Ok(out)
}

/// Toy coset codes: the `(G, G')` pairs checked for super-channel symmetry.
pub fn toy_coset_codes() -> Result<Vec<(String, Vec<Vec<Bit>>, Vec<Vec<Bit>>, DiscreteChannel)>> {
    Ok(vec![
        ("n=2 repetition randomizer, BSC(0.3)".into(), vec![vec![1, 1]], vec![vec![1, 0]], DiscreteChannel::bsc(0.3)?),
        (
            "n=4 polar A={3} R={1,2}, BSC(0.25)".into(),
            polar_generator_rows(4, &[1, 2])?,
            polar_generator_rows(4, &[3])?,
            DiscreteChannel::bsc(0.25)?,
        ),
        (
            "n=4 polar A={2,3} R={1}, BSC(0.25)".into(),
            polar_generator_rows(4, &[1])?,
            polar_generator_rows(4, &[2, 3])?,
            DiscreteChannel::bsc(0.25)?,
        ),
        (
            "n=8 polar A={5,6,7} R={3}, BSC(0.11)".into(),
            polar_generator_rows(8, &[3])?,
            polar_generator_rows(8, &[5, 6, 7])?,
            DiscreteChannel::bsc(0.11)?,
        ),
        (
            "n=3 trivial code, BSC(0.2)".into(),
            vec![],
            vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]],
            DiscreteChannel::bsc(0.2)?,
        ),
    ])
}

/// Uniform input maximizes `I(M;Z)` against `samples` random distributions.
pub fn uniform_maximizes(ws: &SuperChannel, samples: usize, seed: u64) -> Result<(bool, f64)> {
    let uniform = ws.matrix.uniform_mutual_information();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_gap = f64::NEG_INFINITY;
    for _ in 0..samples {
        let raw: Vec<f64> = (0..ws.matrix.inputs()).map(|_| -rng.gen_range(f64::MIN_POSITIVE..1.0).ln()).collect();
        let total: f64 = raw.iter().sum();
        let px: Vec<f64> = raw.iter().map(|x| x / total).collect();
        worst_gap = worst_gap.max(ws.matrix.mutual_information(&px)? - uniform);
    }
    Ok((worst_gap <= 1e-12, worst_gap))
}

pub fn superchannel_suite() -> Result<Vec<VerificationRecord>> {
    let mut out = Vec::new();
    for (j, (name, g, gp, w)) in toy_coset_codes()?.into_iter().enumerate() {
        let ws = coset_superchannel(&g, &gp, &w)?;
        out.push(record("superchannel_symmetry", name.clone(), check_superchannel_symmetry(&ws), 0.0));
        let (ok, gap) = uniform_maximizes(&ws, 200, j as u64)?;
        out.push(record("uniform_maximizes_leakage", name, ok, gap.max(0.0)));
    }
    Ok(out)
}

/// Exact leakage of `trials` random `(A, R)` partitions at `N = 8` against
/// the sum of exact Eve bit-channel capacities outside `R`.
pub fn leakage_consistency_suite(pe: f64, trials: usize, seed: u64) -> Result<Vec<VerificationRecord>> {
    let n_len = 8;
    let w = DiscreteChannel::bsc(pe)?;
    let caps: Vec<f64> = exact_bit_channels(&w, 3)?.iter().map(|c| c.capacity()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    for _ in 0..trials {
        let (mut a, mut r) = (Vec::new(), Vec::new());
        for i in 0..n_len {
            match rng.gen_range(0..3) {
                0 => a.push(i),
                1 => r.push(i),
                _ => {}
            }
        }
        if a.is_empty() {
            a.push(n_len - 1);
            r.retain(|&i| i != n_len - 1);
        }
        let exact = exact_coset_leakage(n_len, &a, &r, &w)?;
        let bound: f64 = (0..n_len).filter(|i| !r.contains(i)).map(|i| caps[i]).sum();
        out.push(record(
            "leakage_le_bound",
            format!("N=8 p={pe} A={a:?} R={r:?} exact={exact:.6} bound={bound:.6}"),
            exact <= bound + 1e-12,
            (exact - bound).max(0.0),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polarize::channel_minus;
    use approx::assert_abs_diff_eq;

    fn bsc(p: f64) -> DiscreteChannel {
        DiscreteChannel::bsc(p).unwrap()
    }

    #[test]
    fn single_use_is_raw_channel() {
        let w = bsc(0.2);
        let c = exact_bit_channel(&CodeSpec::polar(1, vec![]).unwrap(), &w, 0, Domain::V).unwrap();
        assert_eq!(c.rows[0], w.row(0));
        assert_eq!(c.rows[1], w.row(1));
    }

    #[test]
    fn first_of_two_is_minus() {
        let w = bsc(0.15);
        let c = exact_bit_channel(&CodeSpec::polar(2, vec![]).unwrap(), &w, 0, Domain::V).unwrap();
        assert_abs_diff_eq!(c.mutual_information(), channel_minus(&w).capacity(), epsilon = 1e-12);
    }

    #[test]
    fn pac_second_channel_matches_polar() {
        let w = bsc(0.2);
        let spec = CodeSpec::pac(2, vec![], GeneratorPoly::new(vec![1, 1]).unwrap()).unwrap();
        let u = exact_bit_channel(&spec, &w, 1, Domain::U).unwrap();
        let v = exact_bit_channel(&spec, &w, 1, Domain::V).unwrap();
        assert_abs_diff_eq!(u.mutual_information(), v.mutual_information(), epsilon = 1e-12);
        assert!(equivalent_by_column_permutation(&u, &v));
    }

    #[test]
    fn column_multiset_comparison() {
        let w = bsc(0.2);
        let c = exact_bit_channel(&CodeSpec::polar(4, vec![]).unwrap(), &w, 2, Domain::V).unwrap();
        assert!(equivalent_by_column_permutation(&c, &c));
        let mut d = c.clone();
        d.rows[0][3] += 0.1;
        assert!(!equivalent_by_column_permutation(&c, &d));
        let mut e = c.clone();
        e.rows[0].swap(0, 5);
        e.rows[1].swap(0, 5);
        assert!(equivalent_by_column_permutation(&c, &e));
    }

    #[test]
    fn asymmetric_negative_control() {
        let w = DiscreteChannel::new([vec![0.7, 0.3], vec![0.6, 0.4]]).unwrap();
        let chans = exact_bit_channels_enumerated(&CodeSpec::polar(2, vec![]).unwrap(), &w, Domain::V).unwrap();
        assert!(chans.iter().any(|c| !check_submatrix_symmetry(c)));
        let ws = coset_superchannel(&[vec![1, 1]], &[vec![1, 0]], &w).unwrap();
        assert!(!check_superchannel_symmetry(&ws));
    }

    #[test]
    fn symmetric_instances() {
        let chans = exact_bit_channels_enumerated(&CodeSpec::polar(4, vec![]).unwrap(), &bsc(0.2), Domain::V).unwrap();
        assert!(chans.iter().all(check_submatrix_symmetry));
    }

    #[test]
    fn mi_chain_cases() {
        let spec = CodeSpec::pac(4, vec![], GeneratorPoly::new(vec![1, 1]).unwrap()).unwrap();
        let rep = mi_chain_check(&spec, &bsc(0.3)).unwrap();
        assert!(rep.holds(1e-12), "{rep:?}");
        assert_abs_diff_eq!(rep.i_x, 4.0 * bsc(0.3).capacity(), epsilon = 1e-12);
        let spec = CodeSpec::pac(8, vec![], GeneratorPoly::new(vec![1, 0, 1, 1]).unwrap()).unwrap();
        assert!(mi_chain_check(&spec, &bsc(0.11)).unwrap().holds(1e-10));
        let polar = CodeSpec::polar(4, vec![]).unwrap();
        assert!(mi_chain_check(&polar, &bsc(0.3)).unwrap().holds(1e-12));
    }

    #[test]
    fn superchannel_cases() {
        let ws = coset_superchannel(&[vec![1, 1]], &[vec![1, 0]], &bsc(0.3)).unwrap();
        assert_eq!((ws.matrix.inputs(), ws.matrix.outputs()), (2, 4));
        assert!(check_superchannel_symmetry(&ws));
        let trivial = coset_superchannel(&[], &[vec![1, 0], vec![0, 1]], &bsc(0.3)).unwrap();
        assert_abs_diff_eq!(trivial.matrix.uniform_mutual_information(), 2.0 * bsc(0.3).capacity(), epsilon = 1e-12);
        assert!(check_superchannel_symmetry(&trivial));
        assert!(matches!(coset_superchannel(&[vec![1, 1]], &[vec![1, 1]], &bsc(0.3)), Err(Error::RankDeficient)));
    }

    #[test]
    fn budget_enforced() {
        let w = DiscreteChannel::new([vec![0.5, 0.3, 0.1, 0.1], vec![0.1, 0.1, 0.3, 0.5]]).unwrap();
        let spec = CodeSpec::polar(16, vec![]).unwrap();
        assert!(matches!(exact_bit_channel(&spec, &w, 0, Domain::V), Err(Error::EnumerationBudget(_))));
    }

    #[test]
    fn rank_over_gf2() {
        assert_eq!(gf2_rank(&[vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]]), 2);
        assert_eq!(gf2_rank(&polar_generator_rows(8, &(0..8).collect::<Vec<_>>()).unwrap()), 8);
    }
}
