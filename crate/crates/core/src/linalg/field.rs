//! Exact scalar fields: the rationals and prime fields `F_p` with `p < 2^63`.

use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::LinalgError;

/// Exact rational number.
pub type Q = BigRational;

/// Shorthand for building a rational from an integer.
pub fn q(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

/// Shorthand for `num / den`.
pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// An exact field. Elements are plain values; all arithmetic goes through the
/// field handle so that prime fields can carry their modulus.
pub trait Field: Clone + fmt::Debug + PartialEq + Send + Sync + 'static {
    type Elem: Clone + fmt::Debug + PartialEq + Send + Sync + 'static;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse. Panics on zero.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    /// Image of a rational number, or `None` when the denominator vanishes.
    fn from_q(&self, v: &Q) -> Option<Self::Elem>;
    fn from_i64(&self, v: i64) -> Self::Elem;
    fn to_scalar(&self, a: &Self::Elem) -> FieldScalar;

    /// `a -= b * c`
    fn sub_mul_assign(&self, a: &mut Self::Elem, b: &Self::Elem, c: &Self::Elem) {
        *a = self.sub(a, &self.mul(b, c));
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }

    /// Short human-readable name, used in report provenance.
    fn describe(&self) -> String;
}

/// The field of rational numbers, backed by arbitrary precision integers.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = Q;

    fn zero(&self) -> Q {
        Q::zero()
    }
    fn one(&self) -> Q {
        Q::one()
    }
    fn is_zero(&self, a: &Q) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &Q, b: &Q) -> Q {
        a + b
    }
    fn sub(&self, a: &Q, b: &Q) -> Q {
        a - b
    }
    fn mul(&self, a: &Q, b: &Q) -> Q {
        a * b
    }
    fn neg(&self, a: &Q) -> Q {
        -a
    }
    fn inv(&self, a: &Q) -> Q {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_q(&self, v: &Q) -> Option<Q> {
        Some(v.clone())
    }
    fn from_i64(&self, v: i64) -> Q {
        q(v)
    }
    fn to_scalar(&self, a: &Q) -> FieldScalar {
        FieldScalar::Rational(a.clone())
    }
    fn sub_mul_assign(&self, a: &mut Q, b: &Q, c: &Q) {
        if b.is_integer() && c.is_integer() && a.is_integer() {
            let t = b.numer() * c.numer();
            *a = Q::from_integer(a.numer() - t);
        } else {
            *a -= b * c;
        }
    }
    fn describe(&self) -> String {
        "rational".to_string()
    }
}

/// The prime field `Z/pZ`. Elements are canonical residues in `[0, p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, LinalgError> {
        if p >= 1 << 63 || !primal_check::miller_rabin(p) {
            return Err(LinalgError::InvalidModulus(p));
        }
        Ok(PrimeField { p })
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1u64;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            exp >>= 1;
        }
        acc
    }

    fn reduce_big(&self, v: &BigInt) -> u64 {
        let m = BigInt::from(self.p);
        let r = v.mod_floor(&m);
        r.to_u64().expect("residue fits in u64")
    }
}

impl Field for PrimeField {
    type Elem = u64;

    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + (self.p - b)
        }
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        ((*a as u128 * *b as u128) % self.p as u128) as u64
    }
    fn neg(&self, a: &u64) -> u64 {
        if *a == 0 {
            0
        } else {
            self.p - a
        }
    }
    fn inv(&self, a: &u64) -> u64 {
        assert!(*a != 0, "inverse of zero");
        self.pow(*a, self.p - 2)
    }
    fn from_q(&self, v: &Q) -> Option<u64> {
        let den = self.reduce_big(v.denom());
        if den == 0 {
            return None;
        }
        let num = self.reduce_big(v.numer());
        Some(self.mul(&num, &self.inv(&den)))
    }
    fn from_i64(&self, v: i64) -> u64 {
        let m = self.p as i128;
        (((v as i128) % m + m) % m) as u64
    }
    fn to_scalar(&self, a: &u64) -> FieldScalar {
        FieldScalar::Prime { residue: *a, modulus: self.p }
    }
    fn sub_mul_assign(&self, a: &mut u64, b: &u64, c: &u64) {
        let t = ((*b as u128 * *c as u128) % self.p as u128) as u64;
        *a = self.sub(a, &t);
    }
    fn describe(&self) -> String {
        format!("prime:{}", self.p)
    }
}

/// A field element detached from its field handle, for reports and dumps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldScalar {
    Rational(Q),
    Prime { residue: u64, modulus: u64 },
}

impl fmt::Display for FieldScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldScalar::Rational(v) => write!(f, "{}/{}", v.numer(), v.denom()),
            FieldScalar::Prime { residue, .. } => write!(f, "{residue}"),
        }
    }
}

/// Draws `count` distinct primes from `[2^(bits-1), 2^bits)`, deterministically from `seed`.
pub fn random_primes(seed: u64, count: usize, bits: u32) -> Vec<u64> {
    assert!((32..=63).contains(&bits), "prime size must be between 32 and 63 bits");
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_9e37_79b9_7f4a);
    let lo = 1u64 << (bits - 1);
    let mut out: Vec<u64> = Vec::with_capacity(count);
    while out.len() < count {
        let cand = rng.gen_range(lo..lo << 1) | 1;
        if primal_check::miller_rabin(cand) && !out.contains(&cand) {
            out.push(cand);
        }
    }
    out
}

/// Combines residues `r_i mod m_i` (pairwise coprime moduli) into one residue
/// modulo the product.
pub fn crt(residues: &[(u64, u64)]) -> (BigInt, BigInt) {
    let mut acc = BigInt::zero();
    let mut modulus = BigInt::one();
    for &(r, m) in residues {
        let m_big = BigInt::from(m);
        // acc + modulus * t ≡ r (mod m)
        let diff = (BigInt::from(r) - &acc).mod_floor(&m_big);
        let inv = mod_inverse(&modulus.mod_floor(&m_big), &m_big).expect("coprime moduli");
        let t = (diff * inv).mod_floor(&m_big);
        acc += &modulus * t;
        modulus *= m_big;
    }
    (acc, modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let g = a.extended_gcd(m);
    if !g.gcd.is_one() {
        return None;
    }
    Some(g.x.mod_floor(m))
}

/// Rational reconstruction: finds `n/d` with `|n|, d <= sqrt(m/2)` and
/// `n ≡ a·d (mod m)`, if one exists.
pub fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Q> {
    let a = a.mod_floor(m);
    if a.is_zero() {
        return Some(Q::zero());
    }
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a);
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let quot = &r0 / &r1;
        let r2 = &r0 - &quot * &r1;
        let t2 = &t0 - &quot * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    let (num, den) = if t1.sign() == Sign::Minus { (-r1, -t1) } else { (r1, t1) };
    Some(Q::new(num, den))
}
