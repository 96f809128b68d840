//! Bit-channel synthesis with alphabet quantization.
//!
//! Symmetric channels are handled internally as lists of conjugate output
//! pairs: a pair `(a, b)` with `a >= b` stands for two outputs `y`, `ȳ` with
//! `W(y|0) = W(ȳ|1) = a` and `W(y|1) = W(ȳ|0) = b`. A pair is equivalently
//! described by its mass `a + b` and its crossover `ε = b / (a + b) ∈ [0, ½]`.
//!
//! Degrading merges combine two neighbouring pairs (in ε order) into one,
//! which never raises capacity. Upgrading merges remove a pair by splitting
//! its mass between its two neighbours so that their likelihood ratios are
//! unchanged, which never lowers capacity. Applying the merges after every
//! minus/plus step yields lower and upper capacity bounds on each bit channel.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use crate::dmc::{binary_entropy, DiscreteChannel};
use crate::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-9;
const DUPLICATE_LR_TOL: f64 = 1e-12;
/// Largest supported blocklength exponent.
pub const MAX_EXPONENT: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Pair {
    pub a: f64,
    pub b: f64,
}

impl Pair {
    fn new(x: f64, y: f64) -> Pair {
        if x >= y {
            Pair { a: x, b: y }
        } else {
            Pair { a: y, b: x }
        }
    }

    fn mass(&self) -> f64 {
        self.a + self.b
    }

    fn eps(&self) -> f64 {
        let m = self.mass();
        if m > 0.0 {
            self.b / m
        } else {
            0.5
        }
    }

    fn capacity(&self) -> f64 {
        self.mass() * (1.0 - binary_entropy(self.eps()))
    }

    fn same_ratio(&self, other: &Pair) -> bool {
        let x = self.a * other.b;
        let y = other.a * self.b;
        (x - y).abs() <= DUPLICATE_LR_TOL * x.max(y)
    }
}

/// A binary-input symmetric channel as a list of conjugate output pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricChannel {
    pairs: Vec<Pair>,
}

impl SymmetricChannel {
    pub fn from_channel(w: &DiscreteChannel) -> Result<Self> {
        let pi = w.is_symmetric(SYMMETRY_TOL).ok_or(Error::NotSymmetric)?;
        let mut pairs = Vec::with_capacity(w.outputs() / 2 + 1);
        for (y, &py) in pi.iter().enumerate() {
            let (a, b) = (w.prob(0, y), w.prob(1, y));
            if py == y {
                // Self-conjugate symbol, split into two identical halves.
                pairs.push(Pair::new(a / 2.0, a / 2.0));
            } else if y < py {
                pairs.push(Pair::new(a, b));
            }
        }
        Ok(Self::normalized(pairs))
    }

    fn normalized(mut pairs: Vec<Pair>) -> Self {
        pairs.retain(|p| p.mass() > 0.0);
        pairs.sort_by(|x, y| x.eps().total_cmp(&y.eps()));
        let mut merged: Vec<Pair> = Vec::with_capacity(pairs.len());
        for p in pairs {
            match merged.last_mut() {
                Some(last) if last.same_ratio(&p) => {
                    last.a += p.a;
                    last.b += p.b;
                }
                _ => merged.push(p),
            }
        }
        let total: f64 = merged.iter().map(Pair::mass).sum();
        if total > 0.0 {
            for p in merged.iter_mut() {
                p.a /= total;
                p.b /= total;
            }
        }
        SymmetricChannel { pairs: merged }
    }

    pub fn to_channel(&self) -> DiscreteChannel {
        let mut r0 = Vec::with_capacity(2 * self.pairs.len());
        let mut r1 = Vec::with_capacity(2 * self.pairs.len());
        for p in &self.pairs {
            r0.extend([p.a, p.b]);
            r1.extend([p.b, p.a]);
        }
        DiscreteChannel::from_rows_normalized([r0, r1])
    }

    /// Number of channel outputs (two per conjugate pair).
    pub fn outputs(&self) -> usize {
        2 * self.pairs.len()
    }

    pub fn capacity(&self) -> f64 {
        self.pairs.iter().map(Pair::capacity).sum::<f64>().clamp(0.0, 1.0)
    }

    pub fn error_prob(&self) -> f64 {
        self.pairs.iter().map(|p| p.b).sum()
    }

    pub fn bhattacharyya(&self) -> f64 {
        self.pairs.iter().map(|p| 2.0 * (p.a * p.b).sqrt()).sum::<f64>().min(1.0)
    }

    /// The check-node (minus) transform, with duplicate ratios collapsed.
    pub fn minus(&self) -> Self {
        let mut out = Vec::with_capacity(self.pairs.len() * self.pairs.len());
        for p in &self.pairs {
            for q in &self.pairs {
                out.push(Pair::new(p.a * q.a + p.b * q.b, p.a * q.b + p.b * q.a));
            }
        }
        Self::normalized(out)
    }

    /// The variable-node (plus) transform, with duplicate ratios collapsed.
    pub fn plus(&self) -> Self {
        let mut out = Vec::with_capacity(2 * self.pairs.len() * self.pairs.len());
        for p in &self.pairs {
            for q in &self.pairs {
                out.push(Pair::new(p.a * q.a, p.b * q.b));
                out.push(Pair::new(p.a * q.b, p.b * q.a));
            }
        }
        Self::normalized(out)
    }

    pub fn degrade(&self, mu: usize) -> Result<Self> {
        let target = pair_budget(mu)?;
        Ok(self.merge_to(target, Direction::Degrade))
    }

    pub fn upgrade(&self, mu: usize) -> Result<Self> {
        let target = pair_budget(mu)?;
        Ok(self.merge_to(target, Direction::Upgrade))
    }

    fn merge_to(&self, target: usize, direction: Direction) -> Self {
        if self.pairs.len() <= target {
            return self.clone();
        }
        let pairs = match direction {
            Direction::Degrade => degrade_pairs(&self.pairs, target),
            Direction::Upgrade => upgrade_pairs(&self.pairs, target),
        };
        Self::normalized(pairs)
    }
}

#[derive(Clone, Copy)]
enum Direction {
    Degrade,
    Upgrade,
}

fn pair_budget(mu: usize) -> Result<usize> {
    if mu < 2 || mu % 2 != 0 {
        return Err(Error::InvalidParameter(format!("alphabet budget mu={mu} must be even and >= 2")));
    }
    Ok(mu / 2)
}

/// Min-heap entry keyed on merge cost; ties go to the lower position.
#[derive(Debug, Clone, Copy)]
struct Candidate {
    cost: f64,
    pos: usize,
    stamp: u64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Candidate {}
impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.pos.cmp(&self.pos))
    }
}

/// Doubly linked list over pair positions in ε order.
struct Chain {
    pairs: Vec<Pair>,
    prev: Vec<Option<usize>>,
    next: Vec<Option<usize>>,
    alive: Vec<bool>,
    stamp: Vec<u64>,
    len: usize,
}

impl Chain {
    fn new(pairs: &[Pair]) -> Chain {
        let n = pairs.len();
        Chain {
            pairs: pairs.to_vec(),
            prev: (0..n).map(|i| i.checked_sub(1)).collect(),
            next: (0..n).map(|i| if i + 1 < n { Some(i + 1) } else { None }).collect(),
            alive: vec![true; n],
            stamp: vec![0; n],
            len: n,
        }
    }

    fn unlink(&mut self, i: usize) {
        let (p, n) = (self.prev[i], self.next[i]);
        if let Some(p) = p {
            self.next[p] = n;
        }
        if let Some(n) = n {
            self.prev[n] = p;
        }
        self.alive[i] = false;
        self.len -= 1;
    }

    fn into_pairs(self) -> Vec<Pair> {
        self.pairs.into_iter().zip(self.alive).filter_map(|(p, alive)| alive.then_some(p)).collect()
    }
}

fn degrade_cost(p: &Pair, q: &Pair) -> f64 {
    let merged = Pair { a: p.a + q.a, b: p.b + q.b };
    (p.capacity() + q.capacity() - merged.capacity()).max(0.0)
}

/// Greedy degrading merge: repeatedly merge the neighbouring pair with the
/// smallest capacity loss. Heap entries are keyed on the left position.
fn degrade_pairs(pairs: &[Pair], target: usize) -> Vec<Pair> {
    let mut chain = Chain::new(pairs);
    let mut heap = BinaryHeap::with_capacity(pairs.len());
    for i in 0..pairs.len().saturating_sub(1) {
        heap.push(Candidate { cost: degrade_cost(&pairs[i], &pairs[i + 1]), pos: i, stamp: 0 });
    }
    while chain.len > target {
        let Some(c) = heap.pop() else { break };
        let i = c.pos;
        if !chain.alive[i] || chain.stamp[i] != c.stamp {
            continue;
        }
        let Some(j) = chain.next[i] else { continue };
        chain.pairs[i].a += chain.pairs[j].a;
        chain.pairs[i].b += chain.pairs[j].b;
        chain.unlink(j);
        chain.stamp[i] += 1;
        if let Some(n) = chain.next[i] {
            let cost = degrade_cost(&chain.pairs[i], &chain.pairs[n]);
            heap.push(Candidate { cost, pos: i, stamp: chain.stamp[i] });
        }
        if let Some(p) = chain.prev[i] {
            chain.stamp[p] += 1;
            let cost = degrade_cost(&chain.pairs[p], &chain.pairs[i]);
            heap.push(Candidate { cost, pos: p, stamp: chain.stamp[p] });
        }
    }
    chain.into_pairs()
}

/// Split of the middle pair's mass onto its neighbours' crossovers.
fn upgrade_split(lo: &Pair, mid: &Pair, hi: &Pair) -> Option<(f64, f64)> {
    let (e1, e2, e3) = (lo.eps(), mid.eps(), hi.eps());
    let span = e3 - e1;
    if span <= 1e-15 {
        return None;
    }
    let m = mid.mass();
    let to_lo = m * ((e3 - e2) / span).clamp(0.0, 1.0);
    Some((to_lo, m - to_lo))
}

fn upgrade_cost(lo: &Pair, mid: &Pair, hi: &Pair) -> f64 {
    match upgrade_split(lo, mid, hi) {
        Some((x, z)) => {
            let gained = x * (1.0 - binary_entropy(lo.eps())) + z * (1.0 - binary_entropy(hi.eps()));
            (gained - mid.capacity()).max(0.0)
        }
        // Indistinguishable crossovers: merging into the better neighbour is free.
        None => 0.0,
    }
}

fn add_at_eps(target: &mut Pair, mass: f64) {
    let e = target.eps();
    target.a += mass * (1.0 - e);
    target.b += mass * e;
}

/// Greedy upgrading merge: remove interior pairs (smallest capacity gain first)
/// by splitting them onto their neighbours; a final two-to-one step, if
/// needed, moves everything onto the better (lowest ε) pair.
fn upgrade_pairs(pairs: &[Pair], target: usize) -> Vec<Pair> {
    let mut chain = Chain::new(pairs);
    let mut heap = BinaryHeap::with_capacity(pairs.len());
    let push_interior = |chain: &Chain, heap: &mut BinaryHeap<Candidate>, j: usize| {
        if let (Some(p), Some(n)) = (chain.prev[j], chain.next[j]) {
            let cost = upgrade_cost(&chain.pairs[p], &chain.pairs[j], &chain.pairs[n]);
            heap.push(Candidate { cost, pos: j, stamp: chain.stamp[j] });
        }
    };
    for j in 1..pairs.len().saturating_sub(1) {
        push_interior(&chain, &mut heap, j);
    }
    while chain.len > target.max(2) {
        let Some(c) = heap.pop() else { break };
        let j = c.pos;
        if !chain.alive[j] || chain.stamp[j] != c.stamp {
            continue;
        }
        let (Some(p), Some(n)) = (chain.prev[j], chain.next[j]) else { continue };
        let mid = chain.pairs[j];
        match upgrade_split(&chain.pairs[p], &mid, &chain.pairs[n]) {
            Some((x, z)) => {
                add_at_eps(&mut chain.pairs[p], x);
                add_at_eps(&mut chain.pairs[n], z);
            }
            None => add_at_eps(&mut chain.pairs[p], mid.mass()),
        }
        chain.unlink(j);
        for k in [p, n] {
            chain.stamp[k] += 1;
            push_interior(&chain, &mut heap, k);
        }
    }
    let mut out = chain.into_pairs();
    if target == 1 && out.len() == 2 {
        let total = out[0].mass() + out[1].mass();
        let e = out[0].eps();
        out = vec![Pair { a: total * (1.0 - e), b: total * e }];
    }
    out
}

/// Exact minus transform: `W⁻(y1, y2 | u1) = ½ Σ_{u2} W(y1 | u1⊕u2) W(y2 | u2)`.
///
/// Output `(y1, y2)` is labelled `y1·|Y| + y2`.
pub fn channel_minus(w: &DiscreteChannel) -> DiscreteChannel {
    let n = w.outputs();
    let mut rows = [vec![0.0; n * n], vec![0.0; n * n]];
    for u1 in 0..2u8 {
        for y1 in 0..n {
            for y2 in 0..n {
                let p = 0.5 * (w.prob(u1, y1) * w.prob(0, y2) + w.prob(u1 ^ 1, y1) * w.prob(1, y2));
                rows[u1 as usize][y1 * n + y2] = p;
            }
        }
    }
    DiscreteChannel::from_rows_normalized(rows)
}

/// Exact plus transform: `W⁺(y1, y2, v1 | v2) = ½ W(y1 | v1⊕v2) W(y2 | v2)`.
///
/// Output `(y1, y2, v1)` is labelled `2·(y1·|Y| + y2) + v1`.
pub fn channel_plus(w: &DiscreteChannel) -> DiscreteChannel {
    let n = w.outputs();
    let mut rows = [vec![0.0; 2 * n * n], vec![0.0; 2 * n * n]];
    for v2 in 0..2u8 {
        for y1 in 0..n {
            for y2 in 0..n {
                for v1 in 0..2u8 {
                    let p = 0.5 * w.prob(v1 ^ v2, y1) * w.prob(v2, y2);
                    rows[v2 as usize][2 * (y1 * n + y2) + v1 as usize] = p;
                }
            }
        }
    }
    DiscreteChannel::from_rows_normalized(rows)
}

/// A degraded version of `w` with at most `mu` outputs.
pub fn degrading_merge(w: &DiscreteChannel, mu: usize) -> Result<DiscreteChannel> {
    pair_budget(mu)?;
    let sym = SymmetricChannel::from_channel(w)?;
    if w.outputs() <= mu {
        return Ok(w.clone());
    }
    Ok(sym.degrade(mu)?.to_channel())
}

/// An upgraded version of `w` with at most `mu` outputs.
pub fn upgrading_merge(w: &DiscreteChannel, mu: usize) -> Result<DiscreteChannel> {
    pair_budget(mu)?;
    let sym = SymmetricChannel::from_channel(w)?;
    if w.outputs() <= mu {
        return Ok(w.clone());
    }
    Ok(sym.upgrade(mu)?.to_channel())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LowerBound {
    pub capacity_lb: f64,
    pub error_prob_ub: f64,
    pub bhattacharyya_ub: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UpperBound {
    pub capacity_ub: f64,
    pub error_prob_lb: f64,
}

/// Per-index bounds for the `N` synthesized bit channels, in natural order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BitChannelBounds {
    pub channel: DiscreteChannel,
    pub n: u32,
    pub mu: usize,
    pub lower: Vec<LowerBound>,
    pub upper: Vec<UpperBound>,
}

impl BitChannelBounds {
    pub fn len(&self) -> usize {
        self.lower.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lower.is_empty()
    }

    pub fn capacity_lb(&self, i: usize) -> f64 {
        self.lower[i].capacity_lb
    }

    pub fn capacity_ub(&self, i: usize) -> f64 {
        self.upper[i].capacity_ub
    }

    pub fn error_prob_ub(&self, i: usize) -> f64 {
        self.lower[i].error_prob_ub
    }

    /// Indices sorted from most to least reliable: larger `capacity_lb`
    /// first, then smaller `error_prob_ub`, then lower index.
    pub fn reliability_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&x, &y| {
            self.lower[y]
                .capacity_lb
                .total_cmp(&self.lower[x].capacity_lb)
                .then(self.lower[x].error_prob_ub.total_cmp(&self.lower[y].error_prob_ub))
                .then(x.cmp(&y))
        });
        idx
    }

    /// Indices sorted by decreasing `capacity_ub` (ties to the lower index).
    pub fn leakage_order(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.len()).collect();
        idx.sort_by(|&x, &y| self.upper[y].capacity_ub.total_cmp(&self.upper[x].capacity_ub).then(x.cmp(&y)));
        idx
    }
}

/// Bounds for all `2^n` bit channels of `w` at alphabet budget `mu`.
///
/// Bit `n-1-s` of an index (most significant first) selects minus (0) or plus
/// (1) at recursion level `s`; the merge is applied after every step.
pub fn construct_bounds(w: &DiscreteChannel, n: u32, mu: usize) -> Result<BitChannelBounds> {
    pair_budget(mu)?;
    if n > MAX_EXPONENT {
        return Err(Error::InvalidParameter(format!("blocklength exponent {n} exceeds {MAX_EXPONENT}")));
    }
    let base = SymmetricChannel::from_channel(w)?;
    let size = 1usize << n;
    let degraded = base.degrade(mu)?;
    let upgraded = base.upgrade(mu)?;
    let mut lower = vec![None; size];
    let mut upper = vec![None; size];
    rayon::join(
        || {
            descend(&degraded, n, 0, &mut |ch: &SymmetricChannel| ch.degrade(mu).expect("budget checked"), &mut |i, ch| {
                let m = rounding_margin(ch);
                lower[i] = Some(LowerBound {
                    capacity_lb: (ch.capacity() - m).max(0.0),
                    error_prob_ub: (ch.error_prob() + m).min(0.5),
                    bhattacharyya_ub: (ch.bhattacharyya() + m).min(1.0),
                })
            })
        },
        || {
            descend(&upgraded, n, 0, &mut |ch: &SymmetricChannel| ch.upgrade(mu).expect("budget checked"), &mut |i, ch| {
                let m = rounding_margin(ch);
                upper[i] =
                    Some(UpperBound { capacity_ub: (ch.capacity() + m).min(1.0), error_prob_lb: (ch.error_prob() - m).max(0.0) })
            })
        },
    );
    Ok(BitChannelBounds {
        channel: w.clone(),
        n,
        mu,
        lower: lower.into_iter().map(|b| b.expect("every index visited")).collect(),
        upper: upper.into_iter().map(|b| b.expect("every index visited")).collect(),
    })
}

/// Outward rounding applied to reported bounds, covering the floating-point
/// error of summing per-pair terms.
fn rounding_margin(ch: &SymmetricChannel) -> f64 {
    4.0 * f64::EPSILON * (ch.outputs() as f64 + 2.0)
}

fn descend(
    ch: &SymmetricChannel,
    levels: u32,
    index: usize,
    quantize: &mut dyn FnMut(&SymmetricChannel) -> SymmetricChannel,
    visit: &mut dyn FnMut(usize, &SymmetricChannel),
) {
    if levels == 0 {
        visit(index, ch);
        return;
    }
    let minus = quantize(&ch.minus());
    descend(&minus, levels - 1, index << 1, quantize, visit);
    drop(minus);
    let plus = quantize(&ch.plus());
    descend(&plus, levels - 1, (index << 1) | 1, quantize, visit);
}

/// Exact bit channels (no quantization beyond lossless collapse of equal
/// likelihood ratios). Only practical for small `n`.
pub fn exact_bit_channels(w: &DiscreteChannel, n: u32) -> Result<Vec<SymmetricChannel>> {
    if n > 6 {
        return Err(Error::InvalidParameter(format!("exact synthesis limited to n <= 6, got {n}")));
    }
    let mut level = vec![SymmetricChannel::from_channel(w)?];
    for _ in 0..n {
        level = level.iter().flat_map(|ch| [ch.minus(), ch.plus()]).collect();
    }
    Ok(level)
}
