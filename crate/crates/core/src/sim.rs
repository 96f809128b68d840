//! Seeded Monte Carlo estimation of Bob's frame error rate.
//!
//! Frame `f` of a run with seed `s` draws all of its randomness (message,
//! random bits, extractor seed, channel noise) from a ChaCha8 stream keyed by
//! `s` at stream position `f`, so results do not depend on the number of
//! workers or on how frames are scheduled.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::codes::{encode, CodeKind, CodeSpec, GeneratorPoly};
use crate::ie::{ie_decode, ie_encode, IeParams};
use crate::polarize::BitChannelBounds;
use crate::scl::{SclDecoder, LLR_CLIP};
use crate::wiretap::{coset_encode, design_sets, DesignOptions, SecrecyDesign};
use crate::{Bit, Error, Result};

/// Frames per scheduling batch; adaptive stopping is checked between batches.
pub const BATCH: u64 = 1024;
/// Errors required before an adaptive run may stop.
pub const ADAPTIVE_ERRORS: u64 = 100;
const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Polar,
    Pac,
    Ie,
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Scheme::Polar => "polar",
            Scheme::Pac => "pac",
            Scheme::Ie => "ie",
        })
    }
}

impl std::str::FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "polar" => Ok(Scheme::Polar),
            "pac" => Ok(Scheme::Pac),
            "ie" => Ok(Scheme::Ie),
            _ => Err(Error::InvalidParameter(format!("unknown scheme {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub scheme: Scheme,
    #[serde(rename = "N")]
    pub n_len: usize,
    pub k: usize,
    pub pb: f64,
    pub pe: f64,
    pub list: usize,
    /// Frame count; with `adaptive` this is the minimum before stopping is allowed.
    pub frames: u64,
    pub seed: u64,
    pub mu: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<GeneratorPoly>,
    #[serde(default)]
    pub adaptive: bool,
    /// Hard cap on frames for adaptive runs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_frames: Option<u64>,
}

impl SimConfig {
    pub fn new(scheme: Scheme, n_len: usize, k: usize, pb: f64, pe: f64) -> Self {
        SimConfig {
            scheme,
            n_len,
            k,
            pb,
            pe,
            list: 16,
            frames: 10_000,
            seed: 0,
            mu: 64,
            g: None,
            adaptive: false,
            max_frames: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.frames == 0 {
            return Err(Error::InvalidParameter("frames must be at least 1".into()));
        }
        if self.list == 0 {
            return Err(Error::InvalidParameter("list size must be at least 1".into()));
        }
        if !(self.pb > 0.0 && self.pb < self.pe && self.pe < 0.5) {
            return Err(Error::InvalidParameter(format!("need 0 < p_b < p_e < 1/2, got p_b={} p_e={}", self.pb, self.pe)));
        }
        if self.k > self.n_len {
            return Err(Error::InvalidParameter(format!("k={} exceeds N={}", self.k, self.n_len)));
        }
        Ok(())
    }

    fn run_params(&self) -> RunParams {
        RunParams {
            pb: self.pb,
            list: self.list,
            frames: self.frames,
            seed: self.seed,
            adaptive: self.adaptive,
            max_frames: self.max_frames,
        }
    }
}

/// What is transmitted in one frame.
#[derive(Debug, Clone, PartialEq)]
pub enum SimCode {
    /// Coset code; the frame is in error when the message bits on `A` differ.
    Coset(SecrecyDesign),
    /// `t + 1` blocks of `code` carrying an extractor-encoded message.
    Ie { params: IeParams, code: CodeSpec },
}

/// Wilson score interval at 95%.
pub fn wilson_interval(errors: u64, frames: u64) -> (f64, f64) {
    if frames == 0 {
        return (0.0, 1.0);
    }
    let n = frames as f64;
    let p = errors as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    ((center - half).max(0.0).min(p), (center + half).min(1.0).max(p))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimResult {
    pub fer: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub frames_run: u64,
    pub errors: u64,
    pub wall_time_s: f64,
}

impl SimResult {
    fn from_counts(errors: u64, frames: u64, wall_time_s: f64) -> Self {
        let (ci_low, ci_high) = wilson_interval(errors, frames);
        let fer = if frames == 0 { 0.0 } else { errors as f64 / frames as f64 };
        SimResult { fer, ci_low, ci_high, frames_run: frames, errors, wall_time_s }
    }

    pub fn ci_overlaps(&self, other: &SimResult) -> bool {
        self.ci_low <= other.ci_high && other.ci_low <= self.ci_high
    }
}

/// Channel and run-length settings for [`simulate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunParams {
    pub pb: f64,
    pub list: usize,
    pub frames: u64,
    pub seed: u64,
    pub adaptive: bool,
    pub max_frames: Option<u64>,
}

impl RunParams {
    pub fn fixed(pb: f64, list: usize, frames: u64, seed: u64) -> Self {
        RunParams { pb, list, frames, seed, adaptive: false, max_frames: None }
    }
}

/// The generator owned by frame `frame` of a run seeded with `seed`.
pub fn frame_rng(seed: u64, frame: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(frame);
    rng
}

fn random_bits(len: usize, rng: &mut ChaCha8Rng) -> Vec<Bit> {
    (0..len).map(|_| rng.gen_range(0..2u8)).collect()
}

/// BSC output of `x` as LLRs with magnitude `ln((1-p)/p)`.
fn bsc_llrs(x: &[Bit], p: f64, mag: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    x.iter()
        .map(|&b| {
            let y = b ^ u8::from(rng.gen::<f64>() < p);
            if y == 0 {
                mag
            } else {
                -mag
            }
        })
        .collect()
}

struct Worker {
    decoder: SclDecoder,
    positions: Vec<usize>,
}

fn make_worker(code: &SimCode, list: usize) -> Result<Worker> {
    Ok(match code {
        SimCode::Coset(d) => Worker { decoder: SclDecoder::new(&d.code_spec(), list)?, positions: d.message_positions() },
        SimCode::Ie { code, .. } => Worker { decoder: SclDecoder::new(code, list)?, positions: vec![] },
    })
}

/// Runs one frame; `Ok(true)` when Bob's message estimate is wrong.
fn run_frame(code: &SimCode, w: &mut Worker, pb: f64, mag: f64, seed: u64, frame: u64) -> Result<bool> {
    let mut rng = frame_rng(seed, frame);
    match code {
        SimCode::Coset(design) => {
            let msg = random_bits(design.k(), &mut rng);
            let x = coset_encode(design, &msg, &mut rng)?;
            let llrs = bsc_llrs(&x, pb, mag, &mut rng);
            let dec = w.decoder.decode_llrs(&llrs)?;
            Ok(w.positions.iter().zip(&msg).any(|(&j, &m)| dec.data[j] != m))
        }
        SimCode::Ie { params, code } => {
            let msg = random_bits(params.t * params.b, &mut rng);
            let blocks = ie_encode(params, &msg, code, &mut rng)?;
            let received: Vec<Vec<f64>> = blocks.iter().map(|x| bsc_llrs(x, pb, mag, &mut rng)).collect();
            match ie_decode(params, &received, |llrs| Ok(w.decoder.decode_llrs(llrs)?.data)) {
                Ok(est) => Ok(est != msg),
                Err(Error::SeedDecodeFailure) => Ok(true),
                Err(e) => Err(e),
            }
        }
    }
}

/// Estimates Bob's FER for `code` over `BSC(pb)` with SCL decoding.
///
/// Fixed runs process exactly `frames` frames. Adaptive runs proceed in
/// batches of [`BATCH`] and stop once at least `frames` frames and
/// [`ADAPTIVE_ERRORS`] errors are in, or at `max_frames`.
pub fn simulate(code: &SimCode, run: &RunParams) -> Result<SimResult> {
    if run.frames == 0 || run.list == 0 {
        return Err(Error::InvalidParameter("frames and list size must be at least 1".into()));
    }
    if !(run.pb > 0.0 && run.pb < 0.5) {
        return Err(Error::InvalidParameter(format!("need 0 < p_b < 1/2, got {}", run.pb)));
    }
    let mag = ((1.0 - run.pb).ln() - run.pb.ln()).min(LLR_CLIP);
    // Validate construction once before fanning out.
    make_worker(code, run.list)?;
    let cap = if run.adaptive { run.max_frames.unwrap_or(u64::MAX).max(run.frames) } else { run.frames };
    let start = Instant::now();
    let (mut done, mut errors) = (0u64, 0u64);
    while done < cap {
        let end = if run.adaptive { (done + BATCH).min(cap) } else { cap };
        let batch: Result<u64> = (done..end)
            .into_par_iter()
            .map_init(
                || make_worker(code, run.list).expect("validated above"),
                |w, f| run_frame(code, w, run.pb, mag, run.seed, f).map(u64::from),
            )
            .try_reduce(|| 0, |a, b| Ok(a + b));
        errors += batch?;
        done = end;
        if run.adaptive && done >= run.frames && errors >= ADAPTIVE_ERRORS {
            break;
        }
    }
    Ok(SimResult::from_counts(errors, done, start.elapsed().as_secs_f64()))
}

/// The `k` most reliable Bob indices as a plain code, for the extractor scheme.
pub fn best_code(bob: &BitChannelBounds, k: usize, kind: CodeKind, g: Option<GeneratorPoly>) -> Result<CodeSpec> {
    let profile = bob.reliability_order().into_iter().take(k).collect();
    CodeSpec::new(bob.len(), kind, profile, g)
}

/// Design for `config` from precomputed Bob and Eve bounds.
///
/// Polar and PAC use [`design_sets`] with `k` message bits; the extractor
/// scheme carries one `b = k` block behind a seed block on the
/// `ie_dimension`-dimensional polar code.
pub fn derive_code(config: &SimConfig, bob: &BitChannelBounds, eve: &BitChannelBounds, opts: &DesignOptions) -> Result<SimCode> {
    config.validate()?;
    match config.scheme {
        Scheme::Polar | Scheme::Pac => {
            let design = design_sets(bob, eve, config.k, opts)?;
            Ok(SimCode::Coset(match config.scheme {
                Scheme::Pac => {
                    design.with_kind(CodeKind::Pac, Some(config.g.clone().unwrap_or_else(GeneratorPoly::default_pac)))?
                }
                _ => design,
            }))
        }
        Scheme::Ie => {
            let params = IeParams::new(config.n_len, config.pb, 0.1, config.k.max(1), 1)?;
            let code = best_code(bob, params.k, CodeKind::Polar, None)?;
            Ok(SimCode::Ie { params, code })
        }
    }
}

/// Runs `config` against a code derived from the given bounds.
pub fn simulate_fer(config: &SimConfig, bob: &BitChannelBounds, eve: &BitChannelBounds) -> Result<SimResult> {
    let code = derive_code(config, bob, eve, &DesignOptions::default())?;
    simulate(&code, &config.run_params())
}

/// Outcome of searching `|A ∪ R|` for a target FER window.
#[derive(Debug, Clone, PartialEq)]
pub struct Calibration {
    pub d: usize,
    pub design: SecrecyDesign,
    pub sim: SimResult,
    pub in_window: bool,
    /// `(d, fer)` for every size simulated during the search.
    pub probes: Vec<(usize, f64)>,
}

/// Finds the smallest `d = |A ∪ R| ≥ k` whose simulated FER reaches
/// `window.0`, using the design rule with `max_data = d` and no union-bound
/// budget. That size and its two neighbours are re-simulated with `confirm`;
/// the one inside the window (closest to its center) is returned.
pub fn calibrate_dimension(
    bob: &BitChannelBounds,
    eve: &BitChannelBounds,
    k: usize,
    window: (f64, f64),
    poor_threshold: f64,
    search: &RunParams,
    confirm: &RunParams,
) -> Result<Calibration> {
    let n_len = bob.len();
    let design_at = |d: usize| {
        let opts = DesignOptions { fer_budget: f64::INFINITY, poor_threshold, max_data: Some(d) };
        design_sets(bob, eve, k, &opts)
    };
    let mut probes = Vec::new();
    let mut fer_at = |d: usize| -> Result<(f64, usize)> {
        let design = design_at(d)?;
        let actual = design.k() + design.r();
        let fer = simulate(&SimCode::Coset(design), search)?.fer;
        probes.push((d, fer));
        Ok((fer, actual))
    };
    // The rule may stop growing R before d; the reachable range ends there.
    let top = {
        let full = design_at(n_len)?;
        full.k() + full.r()
    };
    let (mut lo, mut hi) = (k, top);
    if fer_at(hi)?.0 < window.0 {
        lo = hi;
    } else {
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if fer_at(mid)?.0 >= window.0 {
                hi = mid;
            } else {
                lo = mid + 1;
            }
        }
    }
    // The search estimate is noisy at the boundary; confirm the neighbours too.
    let center = 0.5 * (window.0 + window.1);
    let mut best: Option<Calibration> = None;
    for d in lo.saturating_sub(1).max(k)..=(lo + 1).min(top) {
        let design = design_at(d)?;
        let sim = simulate(&SimCode::Coset(design.clone()), confirm)?;
        let in_window = sim.fer >= window.0 && sim.fer <= window.1;
        let better = match &best {
            None => true,
            Some(b) => (in_window, -(sim.fer - center).abs()) > (b.in_window, -(b.sim.fer - center).abs()),
        };
        if better {
            best = Some(Calibration { d, design, sim, in_window, probes: vec![] });
        }
    }
    let mut best = best.expect("candidate range is non-empty");
    best.probes = probes;
    Ok(best)
}

/// Codeword for `data` on `spec`; exposed for sanity checks of the pipeline.
pub fn noiseless_roundtrip(spec: &CodeSpec, data: &[Bit], list: usize) -> Result<bool> {
    let x = encode(spec, data)?;
    let llrs: Vec<f64> = x.iter().map(|&b| if b == 0 { LLR_CLIP } else { -LLR_CLIP }).collect();
    Ok(SclDecoder::new(spec, list)?.decode_llrs(&llrs)?.data == data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dmc::DiscreteChannel;
    use crate::polarize::construct_bounds;

    fn bounds(p: f64, n: u32) -> BitChannelBounds {
        construct_bounds(&DiscreteChannel::bsc(p).unwrap(), n, 16).unwrap()
    }

    #[test]
    fn wilson_properties() {
        let (lo, hi) = wilson_interval(0, 100);
        assert_eq!(lo, 0.0);
        assert!(hi > 0.0 && hi < 0.05);
        let (lo, hi) = wilson_interval(40, 1000);
        assert!(lo < 0.04 && hi > 0.04);
        assert!((lo - 0.02948).abs() < 1e-4 && (hi - 0.05409).abs() < 1e-4, "{lo} {hi}");
        assert_eq!(wilson_interval(10, 10).1, 1.0);
    }

    #[test]
    fn tiny_noise_gives_zero_fer() {
        let design = design_sets(&bounds(0.05, 6), &bounds(0.3, 6), 20, &DesignOptions::default()).unwrap();
        let r = simulate(&SimCode::Coset(design), &RunParams::fixed(1e-12, 4, 10_000, 3)).unwrap();
        assert_eq!((r.errors, r.frames_run), (0, 10_000));
        assert_eq!(r.fer, 0.0);
    }

    #[test]
    fn deterministic_across_thread_counts() {
        let design = design_sets(&bounds(0.1, 6), &bounds(0.3, 6), 30, &DesignOptions { fer_budget: 1.0, ..Default::default() })
            .unwrap()
            .with_kind(CodeKind::Pac, Some(GeneratorPoly::default_pac()))
            .unwrap();
        let code = SimCode::Coset(design);
        let run = RunParams::fixed(0.1, 4, 3000, 42);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap().install(|| simulate(&code, &run)).unwrap();
        let three = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap().install(|| simulate(&code, &run)).unwrap();
        assert_eq!((one.errors, one.frames_run), (three.errors, three.frames_run));
        assert!(one.errors > 0);
    }

    #[test]
    fn adaptive_stops_early_at_high_fer() {
        let design =
            design_sets(&bounds(0.2, 6), &bounds(0.3, 6), 40, &DesignOptions { fer_budget: 100.0, ..Default::default() })
                .unwrap();
        let run = RunParams { pb: 0.2, list: 2, frames: 1, seed: 1, adaptive: true, max_frames: Some(1 << 20) };
        let r = simulate(&SimCode::Coset(design), &run).unwrap();
        assert_eq!(r.frames_run, BATCH);
        assert!(r.errors >= ADAPTIVE_ERRORS);
        assert!(r.ci_low <= r.fer && r.fer <= r.ci_high);
    }

    #[test]
    fn ie_pipeline() {
        let bob = bounds(0.005, 6);
        let params = IeParams::new(64, 0.005, 0.1, 8, 2).unwrap();
        let code = best_code(&bob, params.k, CodeKind::Polar, None).unwrap();
        let r = simulate(&SimCode::Ie { params, code }, &RunParams::fixed(1e-9, 2, 200, 9)).unwrap();
        assert_eq!(r.errors, 0);
    }

    #[test]
    fn config_validation() {
        let mut c = SimConfig::new(Scheme::Polar, 64, 10, 0.05, 0.3);
        assert!(c.validate().is_ok());
        c.frames = 0;
        assert!(c.validate().is_err());
        let c = SimConfig::new(Scheme::Polar, 64, 10, 0.3, 0.05);
        assert!(c.validate().is_err());
        assert_eq!("PAC".parse::<Scheme>().unwrap(), Scheme::Pac);
    }

    #[test]
    fn roundtrip_helper() {
        let spec = CodeSpec::polar(16, vec![3, 5, 6, 7, 11, 13, 14, 15]).unwrap();
        assert!(noiseless_roundtrip(&spec, &[1, 0, 1, 1, 0, 0, 1, 0], 1).unwrap());
    }
}
