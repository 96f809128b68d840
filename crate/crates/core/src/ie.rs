//! Invertible-extractor secrecy scheme over GF(2^k).
//!
//! A message is cut into `t` blocks of `b` bits, each padded with `k-b`
//! uniform bits to a field element `M[i] | R[i]`. With a uniform nonzero seed
//! `A`, the transmission is `C(A) || C(A ⊙ (M[1]|R[1])) || …` for a block
//! code `C` of dimension `k`. Bit `j` of a field element is the coefficient of
//! `x^j`; message bits occupy the low `b` positions.

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::codes::{encode, CodeSpec};
use crate::dmc::binary_entropy;
use crate::{Bit, Error, Result};

/// Polynomial over GF(2) as little-endian 64-bit limbs, without trailing zero limbs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    limbs: Vec<u64>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { limbs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { limbs: vec![1] }
    }

    pub fn from_limbs(mut limbs: Vec<u64>) -> Poly {
        while limbs.last() == Some(&0) {
            limbs.pop();
        }
        Poly { limbs }
    }

    /// Coefficient `j` is `bits[j]`.
    pub fn from_bits(bits: &[Bit]) -> Poly {
        let mut limbs = vec![0u64; bits.len().div_ceil(64)];
        for (j, &b) in bits.iter().enumerate() {
            if b & 1 == 1 {
                limbs[j / 64] |= 1 << (j % 64);
            }
        }
        Poly::from_limbs(limbs)
    }

    /// The first `len` coefficients.
    pub fn to_bits(&self, len: usize) -> Vec<Bit> {
        (0..len).map(|j| self.coeff(j)).collect()
    }

    pub fn monomial(d: usize) -> Poly {
        let mut limbs = vec![0u64; d / 64 + 1];
        limbs[d / 64] = 1 << (d % 64);
        Poly { limbs }
    }

    pub fn is_zero(&self) -> bool {
        self.limbs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.limbs == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        let top = *self.limbs.last()?;
        Some(64 * (self.limbs.len() - 1) + 63 - top.leading_zeros() as usize)
    }

    pub fn coeff(&self, j: usize) -> Bit {
        self.limbs.get(j / 64).map_or(0, |w| ((w >> (j % 64)) & 1) as Bit)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let (long, short) = if self.limbs.len() >= other.limbs.len() { (self, other) } else { (other, self) };
        let mut limbs = long.limbs.clone();
        for (x, y) in limbs.iter_mut().zip(&short.limbs) {
            *x ^= y;
        }
        Poly::from_limbs(limbs)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0u64; self.limbs.len() + other.limbs.len()];
        for (i, &a) in self.limbs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.limbs.iter().enumerate() {
                let (lo, hi) = clmul64(a, b);
                out[i + j] ^= lo;
                out[i + j + 1] ^= hi;
            }
        }
        Poly::from_limbs(out)
    }

    pub fn square(&self) -> Poly {
        let mut out = vec![0u64; 2 * self.limbs.len()];
        for (i, &w) in self.limbs.iter().enumerate() {
            out[2 * i] = spread32(w as u32);
            out[2 * i + 1] = spread32((w >> 32) as u32);
        }
        Poly::from_limbs(out)
    }

    fn xor_shifted(&mut self, other: &Poly, shift: usize) {
        let (ws, bs) = (shift / 64, shift % 64);
        let need = other.limbs.len() + ws + 1;
        if self.limbs.len() < need {
            self.limbs.resize(need, 0);
        }
        for (i, &w) in other.limbs.iter().enumerate() {
            self.limbs[i + ws] ^= w << bs;
            if bs > 0 {
                self.limbs[i + ws + 1] ^= w >> (64 - bs);
            }
        }
        while self.limbs.last() == Some(&0) {
            self.limbs.pop();
        }
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn div_rem(&self, m: &Poly) -> (Poly, Poly) {
        let dm = m.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        let mut q = Poly::zero();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            r.xor_shifted(m, dr - dm);
            q.xor_shifted(&Poly::one(), dr - dm);
        }
        (q, r)
    }

    pub fn rem(&self, m: &Poly) -> Poly {
        let dm = m.degree().expect("division by zero polynomial");
        let mut r = self.clone();
        while let Some(dr) = r.degree() {
            if dr < dm {
                break;
            }
            r.xor_shifted(m, dr - dm);
        }
        r
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a
    }
}

fn clmul64(a: u64, b: u64) -> (u64, u64) {
    let (mut lo, mut hi) = (0u64, 0u64);
    let mut x = a;
    while x != 0 {
        let i = x.trailing_zeros();
        lo ^= b << i;
        if i > 0 {
            hi ^= b >> (64 - i);
        }
        x &= x - 1;
    }
    (lo, hi)
}

fn spread32(x: u32) -> u64 {
    let mut v = x as u64;
    v = (v | (v << 16)) & 0x0000_FFFF_0000_FFFF;
    v = (v | (v << 8)) & 0x00FF_00FF_00FF_00FF;
    v = (v | (v << 4)) & 0x0F0F_0F0F_0F0F_0F0F;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

/// Ben-Or irreducibility test: `f` of degree `k` is irreducible iff
/// `gcd(x^{2^i} - x, f) = 1` for all `1 <= i <= k/2`.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(k) = f.degree() else { return false };
    if k == 0 {
        return false;
    }
    if f.coeff(0) == 0 {
        return k == 1;
    }
    let x = Poly::monomial(1);
    let mut h = x.rem(f);
    for _ in 1..=k / 2 {
        h = h.square().rem(f);
        if !h.add(&x).gcd(f).is_one() {
            return false;
        }
    }
    true
}

/// Smallest irreducible polynomial of degree `k` with constant term 1, in the
/// order of the integer whose bit `j` is the coefficient of `x^j`.
pub fn find_irreducible(k: usize) -> Result<Poly> {
    if k == 0 {
        return Err(Error::InvalidParameter("field degree must be >= 1".into()));
    }
    let mut cand = Poly::monomial(k).add(&Poly::one());
    loop {
        // Odd weight is necessary (otherwise x+1 divides) except for x+1 itself.
        let weight: u32 = cand.limbs.iter().map(|w| w.count_ones()).sum();
        if (weight % 2 == 1 || k == 1) && is_irreducible(&cand) {
            return Ok(cand);
        }
        cand = increment_middle(&cand, k);
    }
}

/// Next candidate with fixed top and constant bits: adds 2 to the integer.
fn increment_middle(p: &Poly, k: usize) -> Poly {
    let mut limbs = p.limbs.clone();
    let mut carry = 2u64;
    for w in limbs.iter_mut() {
        let (s, c) = w.overflowing_add(carry);
        *w = s;
        carry = c as u64;
        if carry == 0 {
            break;
        }
    }
    let q = Poly::from_limbs(limbs);
    assert_eq!(q.degree(), Some(k), "no irreducible polynomial of degree {k} found");
    q
}

/// GF(2^k) defined by an irreducible modulus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    k: usize,
    modulus: Poly,
}

impl Field {
    pub fn new(modulus: Poly) -> Result<Arc<Field>> {
        let k = modulus.degree().ok_or_else(|| Error::InvalidParameter("zero modulus".into()))?;
        if !is_irreducible(&modulus) {
            return Err(Error::InvalidParameter("modulus is not irreducible".into()));
        }
        Ok(Arc::new(Field { k, modulus }))
    }

    /// The field with the modulus chosen by [`find_irreducible`].
    pub fn standard(k: usize) -> Result<Arc<Field>> {
        Field::new(find_irreducible(k)?)
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: Poly,
    field: Arc<Field>,
}

impl FieldElement {
    pub fn new(value: Poly, field: &Arc<Field>) -> FieldElement {
        FieldElement { value: value.rem(&field.modulus), field: field.clone() }
    }

    pub fn from_bits(bits: &[Bit], field: &Arc<Field>) -> Result<FieldElement> {
        if bits.len() != field.k {
            return Err(Error::SizeMismatch { expected: field.k, got: bits.len() });
        }
        Ok(FieldElement { value: Poly::from_bits(bits), field: field.clone() })
    }

    pub fn to_bits(&self) -> Vec<Bit> {
        self.value.to_bits(self.field.k)
    }

    pub fn zero(field: &Arc<Field>) -> FieldElement {
        FieldElement { value: Poly::zero(), field: field.clone() }
    }

    pub fn one(field: &Arc<Field>) -> FieldElement {
        FieldElement { value: Poly::one(), field: field.clone() }
    }

    pub fn random<G: Rng + ?Sized>(field: &Arc<Field>, rng: &mut G) -> FieldElement {
        let bits: Vec<Bit> = (0..field.k).map(|_| rng.gen_range(0..2)).collect();
        FieldElement { value: Poly::from_bits(&bits), field: field.clone() }
    }

    pub fn random_nonzero<G: Rng + ?Sized>(field: &Arc<Field>, rng: &mut G) -> FieldElement {
        loop {
            let e = Self::random(field, rng);
            if !e.is_zero() {
                return e;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn value(&self) -> &Poly {
        &self.value
    }

    pub fn field(&self) -> &Arc<Field> {
        &self.field
    }

    fn same_field(&self, other: &FieldElement) -> Result<()> {
        if Arc::ptr_eq(&self.field, &other.field) || self.field.modulus == other.field.modulus {
            Ok(())
        } else {
            Err(Error::ModulusMismatch)
        }
    }

    pub fn add(&self, other: &FieldElement) -> Result<FieldElement> {
        self.same_field(other)?;
        Ok(FieldElement { value: self.value.add(&other.value), field: self.field.clone() })
    }
}

pub fn gf_mul(a: &FieldElement, b: &FieldElement) -> Result<FieldElement> {
    a.same_field(b)?;
    Ok(FieldElement { value: a.value.mul(&b.value).rem(&a.field.modulus), field: a.field.clone() })
}

/// Multiplicative inverse by the extended Euclidean algorithm.
pub fn gf_inv(a: &FieldElement) -> Result<FieldElement> {
    if a.is_zero() {
        return Err(Error::ZeroElement);
    }
    let m = &a.field.modulus;
    let (mut r0, mut r1) = (m.clone(), a.value.clone());
    let (mut s0, mut s1) = (Poly::zero(), Poly::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem(&r1);
        let s = s0.add(&q.mul(&s1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
    }
    debug_assert!(r0.is_one());
    Ok(FieldElement::new(s0, &a.field))
}

/// `k(s) = round((1 - h2(p_b) - ν)·N)`.
pub fn ie_dimension(n_len: usize, pb: f64, nu: f64) -> Result<usize> {
    let ratio = 1.0 - binary_entropy(pb) - nu;
    if !(pb > 0.0 && pb < 0.5) || !(ratio > 0.0) {
        return Err(Error::InvalidParameter(format!("no positive dimension for p_b={pb}, nu={nu}")));
    }
    Ok((ratio * n_len as f64).round() as usize)
}

/// Semantic-security bound `6·2^{-√N}` of the extractor scheme.
pub fn ie_semantic_bound(n_len: usize) -> Result<f64> {
    if n_len == 0 {
        return Err(Error::InvalidParameter("N must be >= 1".into()));
    }
    Ok(6.0 * (-(n_len as f64).sqrt()).exp2())
}

/// Mutual-information bound `2δ·log2(2^N/δ)` from a distinguishing advantage.
pub fn ie_mi_bound(delta: f64, n_len: usize) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
    }
    Ok(2.0 * delta * (n_len as f64 - delta.log2()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IeParams {
    #[serde(rename = "N")]
    pub n_len: usize,
    pub k: usize,
    pub b: usize,
    pub t: usize,
    pub nu: f64,
    /// Coefficients of the field modulus, constant term first.
    pub modulus: Vec<Bit>,
    /// Fixed seed element; drawn uniformly from the nonzero elements when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_element: Option<Vec<Bit>>,
}

impl IeParams {
    /// Parameters with `k` from the dimension formula and the standard modulus.
    pub fn new(n_len: usize, pb: f64, nu: f64, b: usize, t: usize) -> Result<Self> {
        let k = ie_dimension(n_len, pb, nu)?;
        let modulus = find_irreducible(k)?.to_bits(k + 1);
        let p = IeParams { n_len, k, b, t, nu, modulus, seed_element: None };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.b == 0 || self.b > self.k {
            return Err(Error::InvalidParameter(format!("need 0 < b <= k, got b={} k={}", self.b, self.k)));
        }
        if self.t == 0 {
            return Err(Error::InvalidParameter("need t >= 1".into()));
        }
        if self.modulus.len() != self.k + 1 {
            return Err(Error::SizeMismatch { expected: self.k + 1, got: self.modulus.len() });
        }
        Ok(())
    }

    pub fn field(&self) -> Result<Arc<Field>> {
        self.validate()?;
        Field::new(Poly::from_bits(&self.modulus))
    }
}

/// ItE encoding into `t + 1` codewords of `code` (which must have dimension `k`).
pub fn ie_encode<G: Rng + ?Sized>(params: &IeParams, msg: &[Bit], code: &CodeSpec, rng: &mut G) -> Result<Vec<Vec<Bit>>> {
    let field = params.field()?;
    if code.dimension() != params.k {
        return Err(Error::SizeMismatch { expected: params.k, got: code.dimension() });
    }
    if msg.len() != params.t * params.b {
        return Err(Error::SizeMismatch { expected: params.t * params.b, got: msg.len() });
    }
    let seed = match &params.seed_element {
        Some(bits) => {
            let e = FieldElement::from_bits(bits, &field)?;
            if e.is_zero() {
                return Err(Error::ZeroElement);
            }
            e
        }
        None => FieldElement::random_nonzero(&field, rng),
    };
    let mut out = Vec::with_capacity(params.t + 1);
    out.push(encode(code, &seed.to_bits())?);
    for block in msg.chunks(params.b) {
        let mut word = block.to_vec();
        word.extend((params.b..params.k).map(|_| rng.gen_range(0..2u8)));
        let x = gf_mul(&seed, &FieldElement::from_bits(&word, &field)?)?;
        out.push(encode(code, &x.to_bits())?);
    }
    Ok(out)
}

/// ItE decoding. `decode_block` maps one received block to `k` data bits.
pub fn ie_decode<T, F>(params: &IeParams, received: &[T], mut decode_block: F) -> Result<Vec<Bit>>
where
    F: FnMut(&T) -> Result<Vec<Bit>>,
{
    let field = params.field()?;
    if received.len() != params.t + 1 {
        return Err(Error::SizeMismatch { expected: params.t + 1, got: received.len() });
    }
    let seed = FieldElement::from_bits(&decode_block(&received[0])?, &field)?;
    if seed.is_zero() {
        return Err(Error::SeedDecodeFailure);
    }
    let inv = gf_inv(&seed)?;
    let mut msg = Vec::with_capacity(params.t * params.b);
    for block in &received[1..] {
        let y = FieldElement::from_bits(&decode_block(block)?, &field)?;
        let word = gf_mul(&inv, &y)?.to_bits();
        msg.extend_from_slice(&word[..params.b]);
    }
    Ok(msg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf8() -> Arc<Field> {
        Field::new(Poly::from_bits(&[1, 1, 0, 1])).unwrap()
    }

    fn el(bits: &[Bit], f: &Arc<Field>) -> FieldElement {
        FieldElement::from_bits(bits, f).unwrap()
    }

    #[test]
    fn small_field_products() {
        let f = gf8();
        let x = el(&[0, 1, 0], &f);
        let x1 = el(&[1, 1, 0], &f);
        let x2 = el(&[0, 0, 1], &f);
        assert_eq!(gf_mul(&x, &x1).unwrap().to_bits(), vec![0, 1, 1]);
        assert_eq!(gf_mul(&x2, &x2).unwrap().to_bits(), vec![0, 1, 1]);
        assert_eq!(gf_mul(&x, &FieldElement::one(&f)).unwrap(), x);
        assert_eq!(gf_inv(&x).unwrap().to_bits(), vec![1, 0, 1]);
        assert_eq!(gf_inv(&FieldElement::one(&f)).unwrap(), FieldElement::one(&f));
        assert!(matches!(gf_inv(&FieldElement::zero(&f)), Err(Error::ZeroElement)));
    }

    #[test]
    fn modulus_mismatch_rejected() {
        let f = gf8();
        let g = Field::new(Poly::from_bits(&[1, 0, 1, 1])).unwrap();
        assert!(matches!(gf_mul(&el(&[1, 0, 0], &f), &el(&[1, 0, 0], &g)), Err(Error::ModulusMismatch)));
    }

    #[test]
    fn irreducible_search() {
        assert_eq!(find_irreducible(1).unwrap(), Poly::from_bits(&[1, 1]));
        assert_eq!(find_irreducible(3).unwrap(), Poly::from_bits(&[1, 1, 0, 1]));
        assert_eq!(find_irreducible(8).unwrap(), Poly::from_limbs(vec![0x11B]));
        assert!(!is_irreducible(&Poly::from_limbs(vec![0b101])));
        assert!(is_irreducible(&Poly::from_limbs(vec![0b111])));
        let big = find_irreducible(438).unwrap();
        assert_eq!(big.degree(), Some(438));
        assert!(is_irreducible(&big));
    }

    #[test]
    fn irreducibility_matches_trial_division() {
        // Brute-force factor search for all degree <= 10 polynomials.
        for v in 2u64..(1 << 11) {
            let p = Poly::from_limbs(vec![v]);
            let d = p.degree().unwrap();
            let reducible = (2u64..v)
                .map(|q| Poly::from_limbs(vec![q]))
                .filter(|q| q.degree().unwrap() >= 1 && q.degree().unwrap() <= d / 2)
                .any(|q| p.rem(&q).is_zero());
            assert_eq!(is_irreducible(&p), !reducible && d >= 1, "{v:#b}");
        }
    }

    #[test]
    fn field_axioms_exhaustive() {
        for k in 1..=6 {
            let f = Field::standard(k).unwrap();
            let all: Vec<FieldElement> = (0..1u64 << k).map(|v| FieldElement::new(Poly::from_limbs(vec![v]), &f)).collect();
            for a in &all {
                if !a.is_zero() {
                    let inv = gf_inv(a).unwrap();
                    assert!(gf_mul(a, &inv).unwrap().value().is_one());
                    let mut image: Vec<Vec<Bit>> = all.iter().map(|x| gf_mul(a, x).unwrap().to_bits()).collect();
                    image.sort();
                    image.dedup();
                    assert_eq!(image.len(), all.len());
                }
                for b in &all {
                    assert_eq!(gf_mul(a, b).unwrap(), gf_mul(b, a).unwrap());
                    for c in all.iter().step_by(3) {
                        let lhs = gf_mul(&gf_mul(a, b).unwrap(), c).unwrap();
                        assert_eq!(lhs, gf_mul(a, &gf_mul(b, c).unwrap()).unwrap());
                        let dist = gf_mul(a, &b.add(c).unwrap()).unwrap();
                        assert_eq!(dist, gf_mul(a, b).unwrap().add(&gf_mul(a, c).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn large_field_inverses() {
        let f = Field::standard(438).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = FieldElement::random_nonzero(&f, &mut rng);
            assert!(gf_mul(&a, &gf_inv(&a).unwrap()).unwrap().value().is_one());
        }
    }

    #[test]
    fn bound_values() {
        assert_relative_eq!(ie_semantic_bound(256).unwrap(), 9.1553e-5, max_relative = 1e-4);
        assert_relative_eq!(-ie_semantic_bound(256).unwrap().log2(), 13.415, epsilon = 1e-3);
        assert_relative_eq!(ie_mi_bound(1.0, 1).unwrap(), 2.0);
        assert_relative_eq!(ie_mi_bound(ie_semantic_bound(256).unwrap(), 256).unwrap(), 0.04933, max_relative = 1e-3);
        assert!(ie_mi_bound(0.0, 8).is_err());
        assert!(ie_semantic_bound(1024).unwrap() < ie_semantic_bound(512).unwrap());
        assert_eq!(ie_dimension(512, 0.005, 0.1).unwrap(), 438);
    }

    #[test]
    fn params_json() {
        let p = IeParams { n_len: 8, k: 3, b: 2, t: 2, nu: 0.1, modulus: vec![1, 1, 0, 1], seed_element: None };
        let js = serde_json::to_string(&p).unwrap();
        assert_eq!(js, r#"{"N":8,"k":3,"b":2,"t":2,"nu":0.1,"modulus":[1,1,0,1]}"#);
        assert_eq!(serde_json::from_str::<IeParams>(&js).unwrap(), p);
    }

    fn identity_code(k: usize) -> CodeSpec {
        let n = k.next_power_of_two();
        CodeSpec::polar(n, (n - k..n).collect()).unwrap()
    }

    #[test]
    fn round_trip_noiseless() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (k, b, t) in [(3usize, 2usize, 2usize), (8, 8, 1), (13, 5, 3)] {
            let modulus = find_irreducible(k).unwrap().to_bits(k + 1);
            let p = IeParams { n_len: k.next_power_of_two(), k, b, t, nu: 0.1, modulus, seed_element: None };
            let code = identity_code(k);
            for _ in 0..30 {
                let msg: Vec<Bit> = (0..t * b).map(|_| rng.gen_range(0..2)).collect();
                let blocks = ie_encode(&p, &msg, &code, &mut rng).unwrap();
                assert_eq!(blocks.len(), t + 1);
                let out = ie_decode(&p, &blocks, |x: &Vec<Bit>| {
                    let v = crate::codes::polar_transform(x)?;
                    Ok(code.extract(&v))
                })
                .unwrap();
                assert_eq!(out, msg);
            }
        }
    }

    #[test]
    fn seed_handling() {
        let f = gf8();
        let mut p =
            IeParams { n_len: 4, k: 3, b: 3, t: 1, nu: 0.1, modulus: vec![1, 1, 0, 1], seed_element: Some(vec![1, 0, 0]) };
        let code = identity_code(3);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let blocks = ie_encode(&p, &[1, 0, 1], &code, &mut rng).unwrap();
        assert_eq!(blocks[1], encode(&code, &[1, 0, 1]).unwrap());
        p.seed_element = Some(vec![0, 1, 0]);
        let blocks = ie_encode(&p, &[1, 0, 1], &code, &mut rng).unwrap();
        let expect = gf_mul(&el(&[0, 1, 0], &f), &el(&[1, 0, 1], &f)).unwrap().to_bits();
        assert_eq!(blocks[1], encode(&code, &expect).unwrap());
        p.seed_element = Some(vec![0, 0, 0]);
        assert!(matches!(ie_encode(&p, &[1, 0, 1], &code, &mut rng), Err(Error::ZeroElement)));
        let zero_seed = vec![vec![0u8; 3], vec![1, 1, 1]];
        assert!(matches!(ie_decode(&p, &zero_seed, |x: &Vec<Bit>| Ok(x.clone())), Err(Error::SeedDecodeFailure)));
    }
}
