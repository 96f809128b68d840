//! Polar and PAC encoding.
//!
//! A codeword is `x = u · T · G_N` where `T` is the identity for polar codes
//! and the upper-triangular Toeplitz matrix of a convolution polynomial for
//! PAC codes, and `G_N = B_N F^{⊗n}` with `F = [[1,0],[1,1]]` and `B_N` the
//! bit-reversal permutation. Indices are 0-based and in natural order.

use serde::{Deserialize, Serialize};

use crate::{Bit, Error, Result};

/// Arıkan's conventional PAC polynomial `1 + D² + D³ + D⁵ + D⁶` (octal 133).
pub const DEFAULT_PAC_OCTAL: &str = "133";

/// Convolution polynomial `g(D) = g_0 + g_1 D + … + g_m D^m` with `g_0 = g_m = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Bit>", into = "Vec<Bit>")]
pub struct GeneratorPoly {
    coeffs: Vec<Bit>,
}

impl GeneratorPoly {
    pub fn new(coeffs: Vec<Bit>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::InvalidParameter("generator polynomial needs memory m >= 1".into()));
        }
        if coeffs.iter().any(|&c| c > 1) {
            return Err(Error::InvalidParameter("generator coefficients must be bits".into()));
        }
        if coeffs[0] != 1 || coeffs[coeffs.len() - 1] != 1 {
            return Err(Error::InvalidParameter("generator polynomial needs g_0 = g_m = 1".into()));
        }
        Ok(GeneratorPoly { coeffs })
    }

    /// Parses an octal string whose binary expansion, read most significant
    /// digit first, lists `g_0, g_1, …, g_m` (so `"133"` is `1011011`).
    pub fn from_octal(s: &str) -> Result<Self> {
        let bad = || Error::InvalidParameter(format!("invalid octal generator {s:?}"));
        let mut bits = Vec::new();
        for ch in s.trim().chars() {
            let d = ch.to_digit(8).ok_or_else(bad)?;
            bits.extend([(d >> 2) & 1, (d >> 1) & 1, d & 1].map(|b| b as Bit));
        }
        let first = bits.iter().position(|&b| b == 1).ok_or_else(bad)?;
        Self::new(bits.split_off(first))
    }

    pub fn to_octal(&self) -> String {
        let pad = (3 - self.coeffs.len() % 3) % 3;
        let padded: Vec<Bit> = std::iter::repeat(0).take(pad).chain(self.coeffs.iter().copied()).collect();
        padded.chunks(3).map(|c| char::from(b'0' + (c[0] << 2 | c[1] << 1 | c[2]))).collect()
    }

    pub fn default_pac() -> Self {
        Self::from_octal(DEFAULT_PAC_OCTAL).expect("valid constant")
    }

    pub fn coeffs(&self) -> &[Bit] {
        &self.coeffs
    }

    pub fn memory(&self) -> usize {
        self.coeffs.len() - 1
    }
}

impl TryFrom<Vec<Bit>> for GeneratorPoly {
    type Error = Error;
    fn try_from(v: Vec<Bit>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<GeneratorPoly> for Vec<Bit> {
    fn from(g: GeneratorPoly) -> Self {
        g.coeffs
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CodeKind {
    Polar,
    Pac,
}

impl std::fmt::Display for CodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            CodeKind::Polar => "polar",
            CodeKind::Pac => "pac",
        })
    }
}

impl std::str::FromStr for CodeKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "polar" => Ok(CodeKind::Polar),
            "pac" => Ok(CodeKind::Pac),
            _ => Err(Error::InvalidParameter(format!("unknown code kind {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CodeSpecRepr", into = "CodeSpecRepr")]
pub struct CodeSpec {
    n_len: usize,
    kind: CodeKind,
    profile: Vec<usize>,
    g: Option<GeneratorPoly>,
}

#[derive(Serialize, Deserialize)]
struct CodeSpecRepr {
    #[serde(rename = "N")]
    n: usize,
    kind: CodeKind,
    profile: Vec<usize>,
    #[serde(default)]
    g: Vec<Bit>,
}

impl TryFrom<CodeSpecRepr> for CodeSpec {
    type Error = Error;
    fn try_from(r: CodeSpecRepr) -> Result<Self> {
        let g = match r.kind {
            CodeKind::Polar => None,
            CodeKind::Pac => Some(GeneratorPoly::new(r.g)?),
        };
        CodeSpec::new(r.n, r.kind, r.profile, g)
    }
}

impl From<CodeSpec> for CodeSpecRepr {
    fn from(c: CodeSpec) -> Self {
        CodeSpecRepr { n: c.n_len, kind: c.kind, profile: c.profile, g: c.g.map(Vec::from).unwrap_or_default() }
    }
}

impl CodeSpec {
    /// `profile` lists the non-frozen u-domain positions; it is sorted and
    /// must not contain duplicates. `g` is required for PAC and ignored for polar.
    pub fn new(n_len: usize, kind: CodeKind, mut profile: Vec<usize>, g: Option<GeneratorPoly>) -> Result<Self> {
        check_pow2(n_len)?;
        profile.sort_unstable();
        if profile.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidParameter("profile has duplicate indices".into()));
        }
        if let Some(&last) = profile.last() {
            if last >= n_len {
                return Err(Error::InvalidParameter(format!("profile index {last} out of range for N={n_len}")));
            }
        }
        let g = match kind {
            CodeKind::Polar => None,
            CodeKind::Pac => Some(g.ok_or_else(|| Error::InvalidParameter("pac code needs a generator".into()))?),
        };
        Ok(CodeSpec { n_len, kind, profile, g })
    }

    pub fn polar(n_len: usize, profile: Vec<usize>) -> Result<Self> {
        Self::new(n_len, CodeKind::Polar, profile, None)
    }

    pub fn pac(n_len: usize, profile: Vec<usize>, g: GeneratorPoly) -> Result<Self> {
        Self::new(n_len, CodeKind::Pac, profile, Some(g))
    }

    pub fn len(&self) -> usize {
        self.n_len
    }

    pub fn is_empty(&self) -> bool {
        self.n_len == 0
    }

    pub fn kind(&self) -> CodeKind {
        self.kind
    }

    pub fn profile(&self) -> &[usize] {
        &self.profile
    }

    pub fn dimension(&self) -> usize {
        self.profile.len()
    }

    pub fn generator(&self) -> Option<&GeneratorPoly> {
        self.g.as_ref()
    }

    /// Mask of non-frozen positions.
    pub fn info_mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.n_len];
        for &i in &self.profile {
            m[i] = true;
        }
        m
    }

    /// The u vector with `data` at profile positions and zeros elsewhere.
    pub fn embed(&self, data: &[Bit]) -> Result<Vec<Bit>> {
        if data.len() != self.profile.len() {
            return Err(Error::SizeMismatch { expected: self.profile.len(), got: data.len() });
        }
        let mut u = vec![0; self.n_len];
        for (&i, &b) in self.profile.iter().zip(data) {
            u[i] = b & 1;
        }
        Ok(u)
    }

    pub fn extract(&self, u: &[Bit]) -> Vec<Bit> {
        self.profile.iter().map(|&i| u[i]).collect()
    }
}

pub(crate) fn check_pow2(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    Ok(n.trailing_zeros())
}

/// In-place `v ← v · F^{⊗n}` (no bit reversal).
pub(crate) fn butterfly(v: &mut [Bit]) {
    let n = v.len();
    let mut s = 1;
    while s < n {
        for base in (0..n).step_by(2 * s) {
            for j in base..base + s {
                v[j] ^= v[j + s];
            }
        }
        s *= 2;
    }
}

pub(crate) fn bit_reverse(i: usize, bits: u32) -> usize {
    if bits == 0 {
        0
    } else {
        i.reverse_bits() >> (usize::BITS - bits)
    }
}

/// `x = v · B_N F^{⊗n}` over GF(2).
pub fn polar_transform(v: &[Bit]) -> Result<Vec<Bit>> {
    let bits = check_pow2(v.len())?;
    let mut w = v.to_vec();
    butterfly(&mut w);
    Ok((0..w.len()).map(|i| w[bit_reverse(i, bits)]).collect())
}

/// `v = u · T` with `v_i = Σ_j g_j u_{i-j}`.
pub fn toeplitz_precode(u: &[Bit], g: &GeneratorPoly) -> Vec<Bit> {
    let c = g.coeffs();
    (0..u.len()).map(|i| c.iter().enumerate().take(i + 1).fold(0, |acc, (j, &gj)| acc ^ (gj & u[i - j]))).collect()
}

/// Inverse of [`toeplitz_precode`]: `u_i = v_i ⊕ Σ_{j≥1} g_j u_{i-j}`.
pub fn conv_invert(v: &[Bit], g: &GeneratorPoly) -> Vec<Bit> {
    let c = g.coeffs();
    let mut u = Vec::with_capacity(v.len());
    for i in 0..v.len() {
        let fb = c.iter().enumerate().skip(1).take(i).fold(0, |acc, (j, &gj)| acc ^ (gj & u[i - j]));
        u.push(v[i] ^ fb);
    }
    u
}

/// The u → v map for a spec (identity for polar codes).
pub fn precode(spec: &CodeSpec, u: &[Bit]) -> Vec<Bit> {
    match &spec.g {
        Some(g) => toeplitz_precode(u, g),
        None => u.to_vec(),
    }
}

pub fn encode(spec: &CodeSpec, data: &[Bit]) -> Result<Vec<Bit>> {
    let u = spec.embed(data)?;
    polar_transform(&precode(spec, &u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn poly(c: &[Bit]) -> GeneratorPoly {
        GeneratorPoly::new(c.to_vec()).unwrap()
    }

    #[test]
    fn transform_small_cases() {
        assert_eq!(polar_transform(&[1]).unwrap(), vec![1]);
        assert_eq!(polar_transform(&[1, 0]).unwrap(), vec![1, 0]);
        assert_eq!(polar_transform(&[0, 1]).unwrap(), vec![1, 1]);
        assert_eq!(polar_transform(&[0, 0, 0, 1]).unwrap(), vec![1, 1, 1, 1]);
        assert!(matches!(polar_transform(&[0, 1, 1]), Err(Error::NotPowerOfTwo(3))));
        assert!(polar_transform(&[]).is_err());
    }

    /// Dense `B_N F^{⊗n}` built by Kronecker products and row permutation.
    fn dense_generator(n: u32) -> Vec<Vec<Bit>> {
        let mut f = vec![vec![1u8]];
        for _ in 0..n {
            let m = f.len();
            let mut next = vec![vec![0u8; 2 * m]; 2 * m];
            for r in 0..m {
                for c in 0..m {
                    next[r][c] = f[r][c];
                    next[m + r][c] = f[r][c];
                    next[m + r][m + c] = f[r][c];
                }
            }
            f = next;
        }
        (0..f.len()).map(|r| f[bit_reverse(r, n)].clone()).collect()
    }

    #[test]
    fn transform_matches_dense_matrix() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 0..6 {
            let g = dense_generator(n);
            let size = 1 << n;
            for _ in 0..20 {
                let v: Vec<Bit> = (0..size).map(|_| rng.gen_range(0..2)).collect();
                let expect: Vec<Bit> = (0..size).map(|c| (0..size).fold(0, |acc, r| acc ^ (v[r] & g[r][c]))).collect();
                assert_eq!(polar_transform(&v).unwrap(), expect);
            }
        }
    }

    #[test]
    fn transform_is_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for size in [2, 4, 8, 16] {
            let v: Vec<Bit> = (0..size).map(|_| rng.gen_range(0..2)).collect();
            assert_eq!(polar_transform(&polar_transform(&v).unwrap()).unwrap(), v);
        }
    }

    #[test]
    fn precode_impulse_and_matrix() {
        let g = poly(&[1, 0, 1, 1]);
        let mut u = vec![0; 10];
        u[0] = 1;
        assert_eq!(toeplitz_precode(&u, &g), vec![1, 0, 1, 1, 0, 0, 0, 0, 0, 0]);
        // Row i of T has g_0..g_m starting at column i.
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let u: Vec<Bit> = (0..10).map(|_| rng.gen_range(0..2)).collect();
        let mut t = vec![vec![0u8; 10]; 10];
        for (i, row) in t.iter_mut().enumerate() {
            for (j, &c) in g.coeffs().iter().enumerate() {
                if i + j < 10 {
                    row[i + j] = c;
                }
            }
        }
        let expect: Vec<Bit> = (0..10).map(|c| (0..10).fold(0, |a, r| a ^ (u[r] & t[r][c]))).collect();
        assert_eq!(toeplitz_precode(&u, &g), expect);
    }

    #[test]
    fn invert_hand_example() {
        assert_eq!(conv_invert(&[1, 1, 1, 1], &poly(&[1, 1])), vec![1, 0, 1, 0]);
        let g = GeneratorPoly::default_pac();
        let mut imp = g.coeffs().to_vec();
        imp.resize(16, 0);
        let mut e = vec![0; 16];
        e[0] = 1;
        assert_eq!(conv_invert(&imp, &g), e);
    }

    #[test]
    fn octal_round_trip() {
        let g = GeneratorPoly::default_pac();
        assert_eq!(g.coeffs(), &[1, 0, 1, 1, 0, 1, 1]);
        assert_eq!(g.memory(), 6);
        assert_eq!(g.to_octal(), "133");
        assert_eq!(GeneratorPoly::from_octal("3").unwrap().coeffs(), &[1, 1]);
        assert_eq!(GeneratorPoly::from_octal("15").unwrap().coeffs(), &[1, 1, 0, 1]);
        assert!(GeneratorPoly::from_octal("18").is_err());
        assert!(GeneratorPoly::from_octal("1").is_err());
        assert!(GeneratorPoly::from_octal("6").is_err());
        assert!(GeneratorPoly::new(vec![1, 0]).is_err());
    }

    #[test]
    fn encode_cases() {
        let s = CodeSpec::polar(8, vec![]).unwrap();
        assert_eq!(encode(&s, &[]).unwrap(), vec![0; 8]);
        let s = CodeSpec::polar(8, vec![7]).unwrap();
        assert_eq!(encode(&s, &[1]).unwrap(), vec![1; 8]);
        assert!(matches!(encode(&s, &[1, 0]), Err(Error::SizeMismatch { expected: 1, got: 2 })));
        assert!(CodeSpec::polar(8, vec![8]).is_err());
        assert!(CodeSpec::polar(8, vec![1, 1]).is_err());
        assert!(CodeSpec::new(8, CodeKind::Pac, vec![1], None).is_err());
    }

    #[test]
    fn spec_json_shape() {
        let s = CodeSpec::pac(4, vec![3, 2], poly(&[1, 1])).unwrap();
        let js = serde_json::to_string(&s).unwrap();
        assert_eq!(js, r#"{"N":4,"kind":"pac","profile":[2,3],"g":[1,1]}"#);
        assert_eq!(serde_json::from_str::<CodeSpec>(&js).unwrap(), s);
        let p: CodeSpec = serde_json::from_str(r#"{"N":2,"kind":"polar","profile":[1]}"#).unwrap();
        assert_eq!(p, CodeSpec::polar(2, vec![1]).unwrap());
        assert!(serde_json::from_str::<CodeSpec>(r#"{"N":3,"kind":"polar","profile":[]}"#).is_err());
    }

    proptest! {
        #[test]
        fn precode_round_trip(bits in prop::collection::vec(0u8..2, 1..64), tail in prop::collection::vec(0u8..2, 0..5)) {
            let mut c = vec![1u8];
            c.extend(tail);
            c.push(1);
            let g = GeneratorPoly::new(c).unwrap();
            prop_assert_eq!(conv_invert(&toeplitz_precode(&bits, &g), &g), bits);
        }

        #[test]
        fn encode_is_linear(n in 1u32..7, seed in any::<u64>()) {
            let size = 1usize << n;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let profile: Vec<usize> = (0..size).filter(|_| rng.gen_bool(0.5)).collect();
            let spec = CodeSpec::pac(size, profile, GeneratorPoly::default_pac()).unwrap();
            let k = spec.dimension();
            let a: Vec<Bit> = (0..k).map(|_| rng.gen_range(0..2)).collect();
            let b: Vec<Bit> = (0..k).map(|_| rng.gen_range(0..2)).collect();
            let ab: Vec<Bit> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
            let xa = encode(&spec, &a).unwrap();
            let xb = encode(&spec, &b).unwrap();
            let sum: Vec<Bit> = xa.iter().zip(&xb).map(|(x, y)| x ^ y).collect();
            prop_assert_eq!(encode(&spec, &ab).unwrap(), sum);
        }
    }
}
