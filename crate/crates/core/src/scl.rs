//! Successive-cancellation (list) decoding for polar and PAC codes.
//!
//! LLRs are propagated through the `F^{⊗n}` butterfly in natural order; the
//! bit-reversal of `B_N` is absorbed by permuting the channel LLRs once per
//! frame. Decisions are made on `u`; for PAC codes each path carries its own
//! convolution history so that `v_i = u_i ⊕ Σ g_j u_{i-j}` is known when the
//! bit is placed into the butterfly. Frozen positions force `u_i = 0`.
//!
//! The path metric follows the usual hard-decision penalty: extending a path
//! with a value `v` that disagrees with `h(λ) = [λ <= 0]` costs `|λ|`.

use crate::codes::{bit_reverse, check_pow2, CodeSpec};
use crate::dmc::DiscreteChannel;
use crate::{Bit, Error, Result};

/// LLR magnitude clip.
pub const LLR_CLIP: f64 = 300.0;

/// Per-position `ln(W(y|0) / W(y|1))`, clipped to `±LLR_CLIP`.
pub fn channel_llrs(y: &[usize], w: &DiscreteChannel) -> Result<Vec<f64>> {
    let table = llr_table(w);
    y.iter()
        .map(|&s| {
            table
                .get(s)
                .copied()
                .ok_or_else(|| Error::InvalidParameter(format!("output label {s} outside alphabet of size {}", table.len())))
        })
        .collect()
}

/// LLR for every output label of `w`.
pub fn llr_table(w: &DiscreteChannel) -> Vec<f64> {
    (0..w.outputs())
        .map(|s| {
            let (p0, p1) = (w.prob(0, s), w.prob(1, s));
            if p0 == p1 {
                0.0
            } else {
                (p0.ln() - p1.ln()).clamp(-LLR_CLIP, LLR_CLIP)
            }
        })
        .collect()
}

#[inline]
fn log1p_exp_neg(x: f64) -> f64 {
    // ln(1 + e^{-x}) for x >= 0; below f64 resolution past 40.
    if x > 40.0 {
        0.0
    } else {
        (-x).exp().ln_1p()
    }
}

/// Check-node combine `2·atanh(tanh(a/2)·tanh(b/2))` in a stable log form.
#[inline]
pub fn f_exact(a: f64, b: f64) -> f64 {
    let m = a.abs().min(b.abs());
    let s = if (a < 0.0) != (b < 0.0) { -m } else { m };
    (s + log1p_exp_neg((a + b).abs()) - log1p_exp_neg((a - b).abs())).clamp(-LLR_CLIP, LLR_CLIP)
}

#[inline]
fn g_combine(a: f64, b: f64, s: Bit) -> f64 {
    let r = if s == 0 { b + a } else { b - a };
    r.clamp(-LLR_CLIP, LLR_CLIP)
}

#[inline]
fn hard(llr: f64) -> Bit {
    (llr <= 0.0) as Bit
}

/// One step of a surviving path: the decision LLR and the metric increment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceStep {
    pub llr: f64,
    pub increment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decoded {
    /// Bits at the profile positions of the selected path.
    pub data: Vec<Bit>,
    /// Full `u` estimate of the selected path.
    pub u: Vec<Bit>,
    pub path_metric: f64,
    /// Per-position LLR and metric increment of the selected path, when tracing.
    pub trace: Option<Vec<TraceStep>>,
}

/// Reusable list decoder for a fixed code and list size.
///
/// Paths are stored structure-of-arrays style: for each slot, `N-1` LLRs and
/// `N-1` left-child partial sums across layers `1..=n`, plus the `u` history.
/// A path clone copies the whole slot.
pub struct SclDecoder {
    n: u32,
    size: usize,
    list: usize,
    frozen: Vec<bool>,
    profile: Vec<usize>,
    taps: Vec<usize>,
    trace: bool,
    chan: Vec<f64>,
    llr: Vec<f64>,
    left: Vec<Bit>,
    u: Vec<Bit>,
    pm: Vec<f64>,
    active: Vec<bool>,
    traces: Vec<Vec<TraceStep>>,
    scratch_a: Vec<Bit>,
    scratch_b: Vec<Bit>,
    cands: Vec<(f64, f64, Bit, usize)>,
}

impl SclDecoder {
    pub fn new(spec: &CodeSpec, list: usize) -> Result<Self> {
        if list == 0 {
            return Err(Error::InvalidParameter("list size must be >= 1".into()));
        }
        let size = spec.len();
        let n = check_pow2(size)?;
        let slot = size - 1;
        let taps = spec
            .generator()
            .map(|g| g.coeffs().iter().enumerate().skip(1).filter(|(_, &c)| c == 1).map(|(j, _)| j).collect())
            .unwrap_or_default();
        Ok(SclDecoder {
            n,
            size,
            list,
            frozen: spec.info_mask().iter().map(|&b| !b).collect(),
            profile: spec.profile().to_vec(),
            taps,
            trace: false,
            chan: vec![0.0; size],
            llr: vec![0.0; slot * list],
            left: vec![0; slot * list],
            u: vec![0; size * list],
            pm: vec![0.0; list],
            active: vec![false; list],
            traces: vec![Vec::new(); list],
            scratch_a: Vec::with_capacity(size),
            scratch_b: Vec::with_capacity(size),
            cands: Vec::with_capacity(2 * list),
        })
    }

    /// Record per-position LLRs and metric increments of the surviving path.
    pub fn with_trace(mut self, on: bool) -> Self {
        self.trace = on;
        self
    }

    pub fn list_size(&self) -> usize {
        self.list
    }

    #[inline]
    fn offset(&self, layer: u32) -> usize {
        self.size - (self.size >> (layer - 1))
    }

    #[inline]
    fn slot(&self) -> usize {
        self.size - 1
    }

    /// Decodes from channel LLRs given in codeword order.
    pub fn decode_llrs(&mut self, llrs: &[f64]) -> Result<Decoded> {
        if llrs.len() != self.size {
            return Err(Error::SizeMismatch { expected: self.size, got: llrs.len() });
        }
        for j in 0..self.size {
            self.chan[j] = llrs[bit_reverse(j, self.n)];
        }
        self.active.iter_mut().for_each(|a| *a = false);
        self.active[0] = true;
        self.pm[0] = 0.0;
        for t in self.traces.iter_mut() {
            t.clear();
        }

        for phi in 0..self.size {
            for l in 0..self.list {
                if self.active[l] {
                    self.compute_llr(l, phi);
                }
            }
            if self.frozen[phi] {
                for l in 0..self.list {
                    if !self.active[l] {
                        continue;
                    }
                    let lam = self.leaf_llr(l);
                    let v = self.conv_bit(l, phi);
                    let inc = if v != hard(lam) { lam.abs() } else { 0.0 };
                    self.pm[l] += inc;
                    self.commit(l, phi, 0, v, lam, inc);
                }
            } else {
                self.branch(phi);
            }
        }

        let best = (0..self.list)
            .filter(|&l| self.active[l])
            .min_by(|&a, &b| self.pm[a].total_cmp(&self.pm[b]).then(a.cmp(&b)))
            .expect("at least one active path");
        let u = self.u[best * self.size..(best + 1) * self.size].to_vec();
        Ok(Decoded {
            data: self.profile.iter().map(|&i| u[i]).collect(),
            u,
            path_metric: self.pm[best],
            trace: self.trace.then(|| self.traces[best].clone()),
        })
    }

    fn branch(&mut self, phi: usize) {
        self.cands.clear();
        for l in 0..self.list {
            if !self.active[l] {
                continue;
            }
            let lam = self.leaf_llr(l);
            let c = self.conv_bit(l, phi);
            for ub in 0..2 {
                let v = ub ^ c;
                let inc = if v != hard(lam) { lam.abs() } else { 0.0 };
                self.cands.push((self.pm[l] + inc, inc, ub, l));
            }
        }
        // Equal metrics (including ones equal only after rounding) go to the
        // extension that agrees with its hard decision, then to u = 0, then
        // to the lower path slot.
        self.cands.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)).then(x.2.cmp(&y.2)).then(x.3.cmp(&y.3)));
        self.cands.truncate(self.list);

        // keep[l] bit ub set when path l extended with u = ub survives.
        let mut keep = [0u8; 64];
        let mut keep_vec;
        let keep: &mut [u8] = if self.list <= 64 {
            &mut keep[..self.list]
        } else {
            keep_vec = vec![0u8; self.list];
            &mut keep_vec
        };
        for &(_, _, ub, l) in &self.cands {
            keep[l] |= 1 << ub;
        }
        for l in 0..self.list {
            if self.active[l] && keep[l] == 0 {
                self.active[l] = false;
            }
        }
        let mut free = (0..self.list).filter(|&l| !self.active[l]).collect::<Vec<_>>().into_iter();
        for l in 0..self.list {
            if keep[l] == 3 {
                let dst = free.next().expect("free slot for clone");
                self.clone_path(l, dst);
                self.extend(dst, phi, 1);
                self.extend(l, phi, 0);
            } else if keep[l] != 0 {
                self.extend(l, phi, keep[l] >> 1);
            }
        }
    }

    fn extend(&mut self, l: usize, phi: usize, ub: Bit) {
        let lam = self.leaf_llr(l);
        let v = ub ^ self.conv_bit(l, phi);
        let inc = if v != hard(lam) { lam.abs() } else { 0.0 };
        self.pm[l] += inc;
        self.active[l] = true;
        self.commit(l, phi, ub, v, lam, inc);
    }

    fn clone_path(&mut self, src: usize, dst: usize) {
        let s = self.slot();
        self.llr.copy_within(src * s..(src + 1) * s, dst * s);
        self.left.copy_within(src * s..(src + 1) * s, dst * s);
        self.u.copy_within(src * self.size..(src + 1) * self.size, dst * self.size);
        self.pm[dst] = self.pm[src];
        if self.trace {
            let t = self.traces[src].clone();
            self.traces[dst] = t;
        }
    }

    #[inline]
    fn conv_bit(&self, l: usize, phi: usize) -> Bit {
        let u = &self.u[l * self.size..];
        self.taps.iter().filter(|&&j| j <= phi).fold(0, |acc, &j| acc ^ u[phi - j])
    }

    #[inline]
    fn leaf_llr(&self, l: usize) -> f64 {
        if self.n == 0 {
            self.chan[0]
        } else {
            self.llr[l * self.slot() + self.offset(self.n)]
        }
    }

    fn compute_llr(&mut self, l: usize, phi: usize) {
        let n = self.n;
        if n == 0 {
            return;
        }
        let start = if phi == 0 { 1 } else { n - phi.trailing_zeros() };
        let s = self.slot();
        let base = l * s;
        for layer in start..=n {
            let half = self.size >> layer;
            let out_off = base + self.offset(layer);
            let right = layer == start && phi != 0;
            if layer == 1 {
                let out = &mut self.llr[out_off..out_off + half];
                let parent = &self.chan;
                if right {
                    let sums = &self.left[out_off..out_off + half];
                    for j in 0..half {
                        out[j] = g_combine(parent[j], parent[j + half], sums[j]);
                    }
                } else {
                    for j in 0..half {
                        out[j] = f_exact(parent[j], parent[j + half]);
                    }
                }
            } else {
                let par_off = base + self.offset(layer - 1);
                let (lo, hi) = self.llr.split_at_mut(out_off);
                let parent = &lo[par_off..par_off + 2 * half];
                let out = &mut hi[..half];
                if right {
                    let sums = &self.left[out_off..out_off + half];
                    for j in 0..half {
                        out[j] = g_combine(parent[j], parent[j + half], sums[j]);
                    }
                } else {
                    for j in 0..half {
                        out[j] = f_exact(parent[j], parent[j + half]);
                    }
                }
            }
        }
    }

    /// Records decision `(u, v)` at position `phi` and propagates partial sums.
    fn commit(&mut self, l: usize, phi: usize, ub: Bit, v: Bit, lam: f64, inc: f64) {
        self.u[l * self.size + phi] = ub;
        if self.trace {
            self.traces[l].push(TraceStep { llr: lam, increment: inc });
        }
        let n = self.n;
        if n == 0 {
            return;
        }
        let base = l * self.slot();
        if phi & 1 == 0 {
            let off = base + self.offset(n);
            self.left[off] = v;
            return;
        }
        let mut t = std::mem::take(&mut self.scratch_a);
        let mut next = std::mem::take(&mut self.scratch_b);
        t.clear();
        t.push(v);
        let mut layer = n;
        loop {
            let len = t.len();
            let off = base + self.offset(layer);
            let sums = &self.left[off..off + len];
            next.clear();
            next.extend(sums.iter().zip(&t).map(|(s, x)| s ^ x));
            next.extend_from_slice(&t);
            layer -= 1;
            if layer == 0 {
                break;
            }
            if (phi >> (n - layer)) & 1 == 0 {
                let off = base + self.offset(layer);
                self.left[off..off + next.len()].copy_from_slice(&next);
                break;
            }
            std::mem::swap(&mut t, &mut next);
        }
        self.scratch_a = t;
        self.scratch_b = next;
    }
}

/// SCL decoding of the received labels `y` over `w`.
pub fn scl_decode(spec: &CodeSpec, y: &[usize], w: &DiscreteChannel, list: usize) -> Result<Decoded> {
    let llrs = channel_llrs(y, w)?;
    SclDecoder::new(spec, list)?.decode_llrs(&llrs)
}

/// Plain successive-cancellation decoding, implemented directly on the
/// recursive code structure. Ties (`λ = 0`) on data bits resolve to `u = 0`.
pub fn sc_decode(spec: &CodeSpec, y: &[usize], w: &DiscreteChannel) -> Result<Vec<Bit>> {
    let llrs = channel_llrs(y, w)?;
    sc_decode_llrs(spec, &llrs)
}

pub fn sc_decode_llrs(spec: &CodeSpec, llrs: &[f64]) -> Result<Vec<Bit>> {
    let n = check_pow2(spec.len())?;
    if llrs.len() != spec.len() {
        return Err(Error::SizeMismatch { expected: spec.len(), got: llrs.len() });
    }
    let chan: Vec<f64> = (0..llrs.len()).map(|j| llrs[bit_reverse(j, n)]).collect();
    let mut st = ScState {
        info: spec.info_mask(),
        taps: spec.generator().map(|g| g.coeffs()[1..].to_vec()).unwrap_or_default(),
        u: Vec::with_capacity(spec.len()),
    };
    st.node(&chan);
    Ok(spec.extract(&st.u))
}

struct ScState {
    info: Vec<bool>,
    taps: Vec<Bit>,
    u: Vec<Bit>,
}

impl ScState {
    /// Decodes the subtree rooted at `llr`, returning its partial sums.
    fn node(&mut self, llr: &[f64]) -> Vec<Bit> {
        if llr.len() == 1 {
            let phi = self.u.len();
            let c = self.taps.iter().enumerate().filter(|(j, _)| *j < phi).fold(0, |a, (j, &g)| a ^ (g & self.u[phi - 1 - j]));
            let lam = llr[0];
            let ub = if !self.info[phi] {
                0
            } else if lam == 0.0 {
                0
            } else {
                hard(lam) ^ c
            };
            self.u.push(ub);
            return vec![ub ^ c];
        }
        let h = llr.len() / 2;
        let a: Vec<f64> = (0..h).map(|j| f_exact(llr[j], llr[j + h])).collect();
        let s = self.node(&a);
        let b: Vec<f64> = (0..h).map(|j| g_combine(llr[j], llr[j + h], s[j])).collect();
        let t = self.node(&b);
        s.iter().zip(&t).map(|(x, y)| x ^ y).chain(t.iter().copied()).collect()
    }
}
