//! Coset secrecy codes over the degraded wiretap channel.
//!
//! The u-domain index set is split into an information set `A` carrying the
//! message, a random set `R` filled with fresh uniform bits, and a frozen set
//! `B` fixed to zero. Eve's leakage is bounded by the sum of her bit-channel
//! capacities outside `R`; the bound only depends on Eve's bit channels, so it
//! is the same for polar and PAC codes sharing `(A, R, B)`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{check_pow2, polar_transform, precode, CodeKind, CodeSpec, GeneratorPoly};
use crate::polarize::BitChannelBounds;
use crate::{Bit, Error, Result};

/// Default Eve capacity below which an index is considered poor (bits).
pub const DEFAULT_POOR_THRESHOLD: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "DesignRepr", into = "DesignRepr")]
pub struct SecrecyDesign {
    n_len: usize,
    a: Vec<usize>,
    r: Vec<usize>,
    b: Vec<usize>,
    kind: CodeKind,
    g: Option<GeneratorPoly>,
}

#[derive(Serialize, Deserialize)]
struct DesignRepr {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "A")]
    a: Vec<usize>,
    #[serde(rename = "R")]
    r: Vec<usize>,
    #[serde(rename = "B")]
    b: Vec<usize>,
    kind: CodeKind,
    #[serde(default)]
    g: Vec<Bit>,
}

impl TryFrom<DesignRepr> for SecrecyDesign {
    type Error = Error;
    fn try_from(d: DesignRepr) -> Result<Self> {
        let g = match d.kind {
            CodeKind::Polar => None,
            CodeKind::Pac => Some(GeneratorPoly::new(d.g)?),
        };
        let design = SecrecyDesign::new(d.n, d.a, d.r, d.kind, g)?;
        let mut b = d.b;
        b.sort_unstable();
        if b != design.b {
            return Err(Error::InvalidParameter("B is not the complement of A and R".into()));
        }
        Ok(design)
    }
}

impl From<SecrecyDesign> for DesignRepr {
    fn from(d: SecrecyDesign) -> Self {
        DesignRepr { n: d.n_len, a: d.a, r: d.r, b: d.b, kind: d.kind, g: d.g.map(Vec::from).unwrap_or_default() }
    }
}

impl SecrecyDesign {
    /// Builds a design from disjoint `A` and `R`; `B` is their complement.
    pub fn new(n_len: usize, mut a: Vec<usize>, mut r: Vec<usize>, kind: CodeKind, g: Option<GeneratorPoly>) -> Result<Self> {
        check_pow2(n_len)?;
        a.sort_unstable();
        r.sort_unstable();
        let mut seen = vec![false; n_len];
        for &i in a.iter().chain(&r) {
            if i >= n_len {
                return Err(Error::InvalidParameter(format!("index {i} out of range for N={n_len}")));
            }
            if seen[i] {
                return Err(Error::InvalidParameter(format!("index {i} appears twice in A and R")));
            }
            seen[i] = true;
        }
        let b = (0..n_len).filter(|&i| !seen[i]).collect();
        let g = match kind {
            CodeKind::Polar => None,
            CodeKind::Pac => Some(g.ok_or_else(|| Error::InvalidParameter("pac design needs a generator".into()))?),
        };
        Ok(SecrecyDesign { n_len, a, r, b, kind, g })
    }

    /// Same sets, different code family.
    pub fn with_kind(&self, kind: CodeKind, g: Option<GeneratorPoly>) -> Result<Self> {
        Self::new(self.n_len, self.a.clone(), self.r.clone(), kind, g)
    }

    pub fn len(&self) -> usize {
        self.n_len
    }

    pub fn is_empty(&self) -> bool {
        self.n_len == 0
    }

    pub fn info_set(&self) -> &[usize] {
        &self.a
    }

    pub fn random_set(&self) -> &[usize] {
        &self.r
    }

    pub fn frozen_set(&self) -> &[usize] {
        &self.b
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn generator(&self) -> Option<&GeneratorPoly> {
        self.g.as_ref()
    }

    /// Message length `k = |A|`.
    pub fn k(&self) -> usize {
        self.a.len()
    }

    /// Number of random bits `r = |R|`.
    pub fn r(&self) -> usize {
        self.r.len()
    }

    /// The code Bob decodes: profile `A ∪ R`.
    pub fn code_spec(&self) -> CodeSpec {
        let mut profile: Vec<usize> = self.a.iter().chain(&self.r).copied().collect();
        profile.sort_unstable();
        CodeSpec::new(self.n_len, self.kind, profile, self.g.clone()).expect("design sets are valid")
    }

    /// Positions of `A` inside the sorted profile of [`Self::code_spec`].
    pub fn message_positions(&self) -> Vec<usize> {
        let spec = self.code_spec();
        let mut pos = Vec::with_capacity(self.a.len());
        let mut it = self.a.iter().peekable();
        for (j, &i) in spec.profile().iter().enumerate() {
            if it.peek() == Some(&&i) {
                pos.push(j);
                it.next();
            }
        }
        pos
    }
}

/// `V_A = msg`, `V_R = random`, `V_B = 0`, then precode and polar transform.
pub fn coset_encode_with(design: &SecrecyDesign, msg: &[Bit], random: &[Bit]) -> Result<Vec<Bit>> {
    if msg.len() != design.k() {
        return Err(Error::SizeMismatch { expected: design.k(), got: msg.len() });
    }
    if random.len() != design.r() {
        return Err(Error::SizeMismatch { expected: design.r(), got: random.len() });
    }
    let mut u = vec![0; design.n_len];
    for (&i, &m) in design.a.iter().zip(msg) {
        u[i] = m & 1;
    }
    for (&i, &x) in design.r.iter().zip(random) {
        u[i] = x & 1;
    }
    polar_transform(&precode(&design.code_spec(), &u))
}

/// Coset encoding with fresh uniform bits on `R` drawn from `rng`.
pub fn coset_encode<G: Rng + ?Sized>(design: &SecrecyDesign, msg: &[Bit], rng: &mut G) -> Result<Vec<Bit>> {
    let random: Vec<Bit> = (0..design.r()).map(|_| rng.gen_range(0..2)).collect();
    coset_encode_with(design, msg, &random)
}

/// `Ī = Σ_{i ∉ R} capacity_ub(i)` over Eve's bit channels.
pub fn leakage_bound(design: &SecrecyDesign, eve: &BitChannelBounds) -> Result<f64> {
    if eve.len() != design.n_len {
        return Err(Error::SizeMismatch { expected: design.n_len, got: eve.len() });
    }
    let mut in_r = vec![false; design.n_len];
    for &i in &design.r {
        in_r[i] = true;
    }
    Ok((0..design.n_len).filter(|&i| !in_r[i]).map(|i| eve.capacity_ub(i)).sum())
}

/// Distinguishing-advantage bound `√(2·Ī)` from a mutual-information bound.
pub fn semantic_bound(leakage: f64) -> Result<f64> {
    if !(leakage >= 0.0) {
        return Err(Error::InvalidParameter(format!("leakage must be non-negative, got {leakage}")));
    }
    Ok((2.0 * leakage).sqrt())
}

/// `-log2(δ)` when `δ < 1`, the form used to compare tiny advantages.
pub fn neg_log2(delta: f64) -> Option<f64> {
    (delta > 0.0 && delta < 1.0).then(|| -delta.log2())
}

/// Rounds halves upward, as used when matching printed integer columns.
pub fn round_half_up(x: f64) -> i64 {
    (x + 0.5).floor() as i64
}

/// Summary row of a coset design against a given Eve channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecrecyReport {
    pub pe: f64,
    pub k: usize,
    pub leakage_ub: f64,
    pub secrecy_capacity: f64,
    pub rate: f64,
    pub effective_rate: f64,
    pub delta_ds: f64,
}

impl SecrecyReport {
    pub fn new(design: &SecrecyDesign, eve: &BitChannelBounds, pe: f64, secrecy_capacity: f64) -> Result<Self> {
        let leak = leakage_bound(design, eve)?;
        let n = design.n_len as f64;
        let k = design.k();
        Ok(SecrecyReport {
            pe,
            k,
            leakage_ub: leak,
            secrecy_capacity,
            rate: k as f64 / n,
            effective_rate: (k as f64 - leak) / n,
            delta_ds: semantic_bound(leak)?,
        })
    }

    pub fn csv_header() -> &'static str {
        "pe,k,I_bar,C_s,R_s,R_eff,delta_raw,delta_rounded"
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{}",
            sig6(self.pe),
            self.k,
            sig6(self.leakage_ub),
            sig6(self.secrecy_capacity),
            sig6(self.rate),
            sig6(self.effective_rate),
            sig6(self.delta_ds),
            round_half_up(self.delta_ds)
        )
    }
}

/// Formats with 6 significant digits, without trailing zeros.
pub fn sig6(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let digits = 5 - x.abs().log10().floor() as i32;
    let s = if (0..=17).contains(&digits) {
        format!("{:.*}", digits as usize, x)
    } else if digits < 0 {
        let scale = 10f64.powi(-digits);
        format!("{}", (x / scale).round() * scale)
    } else {
        return format!("{x:.5e}");
    };
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignOptions {
    /// Budget on `Σ error_prob_ub` over `A ∪ R` for Bob.
    pub fer_budget: f64,
    /// Eve indices with `capacity_ub` at or below this are not worth randomizing.
    pub poor_threshold: f64,
    /// Optional cap on `|A ∪ R|`.
    pub max_data: Option<usize>,
}

impl Default for DesignOptions {
    fn default() -> Self {
        DesignOptions { fer_budget: 0.06, poor_threshold: DEFAULT_POOR_THRESHOLD, max_data: None }
    }
}

/// Greedy `(A, R, B)` selection.
///
/// `R` takes Eve's strongest bit channels (largest `capacity_ub`) one at a
/// time. Growth stops at the first candidate at or below the poor threshold,
/// when `|A ∪ R|` would exceed `max_data`, or when Bob's union bound over `R`
/// plus the `k_target` best remaining indices would exceed the budget. `A`
/// is then the `k_target` best remaining indices by Bob's `capacity_lb`.
pub fn design_sets(
    bob: &BitChannelBounds,
    eve: &BitChannelBounds,
    k_target: usize,
    opts: &DesignOptions,
) -> Result<SecrecyDesign> {
    let n_len = bob.len();
    if eve.len() != n_len {
        return Err(Error::SizeMismatch { expected: n_len, got: eve.len() });
    }
    if k_target > n_len {
        return Err(Error::InvalidParameter(format!("k={k_target} exceeds N={n_len}")));
    }
    if let Some(d) = opts.max_data {
        if d < k_target {
            return Err(Error::InvalidParameter(format!("max_data={d} is below k={k_target}")));
        }
    }
    let bob_order = bob.reliability_order();
    let mut in_r = vec![false; n_len];
    let best_rest = |in_r: &[bool]| -> Vec<usize> { bob_order.iter().copied().filter(|&i| !in_r[i]).take(k_target).collect() };
    let union = |a: &[usize], in_r: &[bool]| -> f64 {
        a.iter().map(|&i| bob.error_prob_ub(i)).sum::<f64>()
            + (0..n_len).filter(|&i| in_r[i]).map(|i| bob.error_prob_ub(i)).sum::<f64>()
    };

    let a0 = best_rest(&in_r);
    let u0 = union(&a0, &in_r);
    if u0 > opts.fer_budget {
        return Err(Error::Infeasible(format!("k={k_target} needs union bound {u0:.3e} > budget {:.3e}", opts.fer_budget)));
    }
    let mut r_len = 0;
    for cand in eve.leakage_order() {
        if eve.capacity_ub(cand) <= opts.poor_threshold {
            break;
        }
        if r_len + 1 + k_target > opts.max_data.unwrap_or(n_len) {
            break;
        }
        in_r[cand] = true;
        let a = best_rest(&in_r);
        if a.len() < k_target || union(&a, &in_r) > opts.fer_budget {
            in_r[cand] = false;
            break;
        }
        r_len += 1;
    }
    let a = best_rest(&in_r);
    let r = (0..n_len).filter(|&i| in_r[i]).collect();
    SecrecyDesign::new(n_len, a, r, CodeKind::Polar, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::encode;
    use crate::dmc::DiscreteChannel;
    use crate::polarize::construct_bounds;
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn bounds(p: f64, n: u32) -> BitChannelBounds {
        construct_bounds(&DiscreteChannel::bsc(p).unwrap(), n, 16).unwrap()
    }

    #[test]
    fn semantic_values() {
        assert_eq!(semantic_bound(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(semantic_bound(7.0).unwrap(), 3.741657, epsilon = 1e-6);
        assert_abs_diff_eq!(semantic_bound(58.0).unwrap(), 10.770330, epsilon = 1e-6);
        assert!(semantic_bound(-1.0).is_err());
        assert_eq!(round_half_up(3.7417), 4);
        assert_eq!(round_half_up(2.5), 3);
        assert_eq!(neg_log2(0.25), Some(2.0));
        assert_eq!(neg_log2(3.0), None);
    }

    #[test]
    fn sig6_format() {
        assert_eq!(sig6(0.323443), "0.323443");
        assert_eq!(sig6(58.0), "58");
        assert_eq!(sig6(10.770329614), "10.7703");
        assert_eq!(sig6(0.00012345678), "0.000123457");
        assert_eq!(sig6(1234567.0), "1234570");
        assert_eq!(sig6(0.0), "0");
    }

    #[test]
    fn leakage_extremes() {
        let eve = bounds(0.3, 4);
        let all = SecrecyDesign::new(16, vec![], (0..16).collect(), CodeKind::Polar, None).unwrap();
        assert_eq!(leakage_bound(&all, &eve).unwrap(), 0.0);
        let none = SecrecyDesign::new(16, vec![15], vec![], CodeKind::Polar, None).unwrap();
        let full = leakage_bound(&none, &eve).unwrap();
        assert!(full >= 16.0 * DiscreteChannel::bsc(0.3).unwrap().capacity() - 1e-9);
    }

    #[test]
    fn growing_r_never_raises_leakage() {
        let eve = bounds(0.25, 5);
        let order = eve.leakage_order();
        let mut prev = f64::INFINITY;
        for r in 0..32 {
            let d = SecrecyDesign::new(32, vec![], order[..r].to_vec(), CodeKind::Polar, None).unwrap();
            let l = leakage_bound(&d, &eve).unwrap();
            assert!(l <= prev);
            prev = l;
        }
    }

    #[test]
    fn deterministic_when_r_empty() {
        let d = SecrecyDesign::new(8, vec![3, 5, 7], vec![], CodeKind::Polar, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let x = coset_encode(&d, &[1, 0, 1], &mut rng).unwrap();
        assert_eq!(x, encode(&CodeSpec::polar(8, vec![3, 5, 7]).unwrap(), &[1, 0, 1]).unwrap());
        assert!(coset_encode(&d, &[1, 0], &mut rng).is_err());
    }

    #[test]
    fn zero_message_lies_in_random_subcode() {
        let d = SecrecyDesign::new(8, vec![6, 7], vec![3, 5], CodeKind::Polar, None).unwrap();
        let sub = CodeSpec::polar(8, vec![3, 5]).unwrap();
        let codewords: Vec<Vec<Bit>> = [[0, 0], [0, 1], [1, 0], [1, 1]].iter().map(|r| encode(&sub, r).unwrap()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            assert!(codewords.contains(&coset_encode(&d, &[0, 0], &mut rng).unwrap()));
        }
    }

    #[test]
    fn coset_encode_is_linear() {
        let g = GeneratorPoly::default_pac();
        let d = SecrecyDesign::new(16, vec![9, 11, 15], vec![7, 13, 14], CodeKind::Pac, Some(g)).unwrap();
        let (m1, m2, r1, r2) = ([1, 0, 1], [1, 1, 0], [0, 1, 1], [1, 1, 0]);
        let xor = |a: &[Bit], b: &[Bit]| -> Vec<Bit> { a.iter().zip(b).map(|(x, y)| x ^ y).collect() };
        let lhs = coset_encode_with(&d, &xor(&m1, &m2), &xor(&r1, &r2)).unwrap();
        let rhs = xor(&coset_encode_with(&d, &m1, &r1).unwrap(), &coset_encode_with(&d, &m2, &r2).unwrap());
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_shape() {
        let d = SecrecyDesign::new(4, vec![3], vec![2], CodeKind::Polar, None).unwrap();
        let js = serde_json::to_string(&d).unwrap();
        assert_eq!(js, r#"{"N":4,"A":[3],"R":[2],"B":[0,1],"kind":"polar","g":[]}"#);
        assert_eq!(serde_json::from_str::<SecrecyDesign>(&js).unwrap(), d);
        assert!(serde_json::from_str::<SecrecyDesign>(r#"{"N":4,"A":[3],"R":[2],"B":[0],"kind":"polar"}"#).is_err());
        assert!(SecrecyDesign::new(4, vec![1], vec![1], CodeKind::Polar, None).is_err());
    }

    #[test]
    fn design_rule_cases() {
        let bob = bounds(0.05, 6);
        let eve = bounds(0.3, 6);
        let opts = DesignOptions::default();
        let empty = design_sets(&bob, &eve, 0, &opts).unwrap();
        assert_eq!(empty.k(), 0);
        let loose = DesignOptions { fer_budget: 1e9, ..DesignOptions::default() };
        let full = design_sets(&bob, &eve, 64, &loose).unwrap();
        assert_eq!(full.r(), 0);
        let tight = DesignOptions { fer_budget: 1e-9, ..DesignOptions::default() };
        assert!(matches!(design_sets(&bob, &eve, 20, &tight), Err(Error::Infeasible(_))));

        let d = design_sets(&bob, &eve, 16, &opts).unwrap();
        assert_eq!(d.k(), 16);
        let a_union: f64 = d.info_set().iter().chain(d.random_set()).map(|&i| bob.error_prob_ub(i)).sum();
        assert!(a_union <= opts.fer_budget);
        assert!(d.random_set().iter().all(|&i| eve.capacity_ub(i) > opts.poor_threshold));
        let capped = design_sets(&bob, &eve, 16, &DesignOptions { max_data: Some(20), ..opts.clone() }).unwrap();
        assert!(capped.r() <= 4);
    }

    #[test]
    fn polar_and_pac_share_leakage() {
        let bob = bounds(0.05, 6);
        let eve = bounds(0.25, 6);
        let d = design_sets(&bob, &eve, 20, &DesignOptions::default()).unwrap();
        let pac = d.with_kind(CodeKind::Pac, Some(GeneratorPoly::default_pac())).unwrap();
        assert_eq!(leakage_bound(&d, &eve).unwrap(), leakage_bound(&pac, &eve).unwrap());
    }

    #[test]
    fn report_row() {
        let eve = bounds(0.4, 4);
        let d = SecrecyDesign::new(16, vec![12, 13, 14, 15], vec![], CodeKind::Polar, None).unwrap();
        let rep = SecrecyReport::new(&d, &eve, 0.4, 0.684554).unwrap();
        assert_eq!(rep.rate, 0.25);
        assert!(rep.effective_rate <= rep.rate);
        assert_eq!(rep.csv_row().split(',').count(), SecrecyReport::csv_header().split(',').count());
    }
}
