//! Exact arithmetic in the prime field F_p.
//!
//! Three preset moduli are supported (2^31-1, 2^63-25, 2^127-1) along with
//! custom primes in [5, 2^127). Multiplication picks a reduction strategy per
//! modulus: single widening multiply below 2^64, Mersenne folding for 2^127-1,
//! and a shift-add loop for other large primes.

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};

pub const M31: u128 = (1 << 31) - 1;
pub const P63: u128 = 9_223_372_036_854_775_783; // 2^63 - 25
pub const M127: u128 = (1 << 127) - 1;

/// Deterministic random stream; every randomized operation takes one
/// explicitly. No global randomness anywhere.
pub type RandomStream = rand_chacha::ChaCha12Rng;

/// Builds a stream from a 64-bit seed.
pub fn stream_from_seed(seed: u64) -> RandomStream {
    RandomStream::seed_from_u64(seed)
}

/// Derives the stream for run `index` from a master seed. Streams for
/// distinct indices are independent, and the derivation is a pure function
/// of (master_seed, index) so results do not depend on scheduling.
pub fn derive_stream(master_seed: u64, index: u64) -> RandomStream {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&master_seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(b"aelsemrs");
    RandomStream::from_seed(key)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Reduction {
    /// p < 2^64: one widening multiply suffices.
    Word,
    /// p = 2^127 - 1: Mersenne folding.
    Mersenne127,
    /// Anything else up to 2^127: binary shift-add multiplication.
    ShiftAdd,
}

/// Preset tag for a modulus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Preset {
    M31,
    P63,
    M127,
    Custom,
}

/// A prime modulus p >= 5, p < 2^127.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrimeModulus {
    p: u128,
    preset: Preset,
    reduction: Reduction,
}

impl PrimeModulus {
    pub fn m31() -> Self {
        PrimeModulus { p: M31, preset: Preset::M31, reduction: Reduction::Word }
    }

    pub fn p63() -> Self {
        PrimeModulus { p: P63, preset: Preset::P63, reduction: Reduction::Word }
    }

    pub fn m127() -> Self {
        PrimeModulus { p: M127, preset: Preset::M127, reduction: Reduction::Mersenne127 }
    }

    /// A custom prime modulus. Primality is checked with Miller-Rabin:
    /// deterministic witnesses below 3.3e24, extra derived witnesses above.
    pub fn custom(p: u128) -> Result<Self> {
        if p < 5 {
            return Err(Error::ModulusTooSmall(p.to_string()));
        }
        if p > M127 {
            return Err(Error::ModulusTooLarge);
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p.to_string()));
        }
        let reduction = if p <= u64::MAX as u128 {
            Reduction::Word
        } else if p == M127 {
            Reduction::Mersenne127
        } else {
            Reduction::ShiftAdd
        };
        Ok(PrimeModulus { p, preset: Preset::Custom, reduction })
    }

    /// Parses `m31`, `p63`, `m127`, or a decimal prime literal.
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "m31" => Ok(Self::m31()),
            "p63" => Ok(Self::p63()),
            "m127" => Ok(Self::m127()),
            _ => {
                let p: u128 = s
                    .parse()
                    .map_err(|_| Error::NotPrime(format!("cannot parse '{s}' as a prime")))?;
                Self::custom(p)
            }
        }
    }

    pub fn value(&self) -> u128 {
        self.p
    }

    pub fn preset(&self) -> Preset {
        self.preset
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { value: 0, modulus: *self }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { value: 1, modulus: *self }
    }

    /// Embeds an integer, reducing mod p.
    pub fn from_u128(&self, x: u128) -> FieldElement {
        FieldElement { value: x % self.p, modulus: *self }
    }

    pub fn from_i64(&self, x: i64) -> FieldElement {
        if x >= 0 {
            self.from_u128(x as u128)
        } else {
            -self.from_u128(x.unsigned_abs() as u128)
        }
    }

    /// (num mod p) * inv(den mod p). Errors if p divides den.
    pub fn from_rational(&self, num: i64, den: i64) -> Result<FieldElement> {
        let d = self.from_i64(den);
        if d.value == 0 {
            return Err(Error::DenominatorVanishes);
        }
        Ok(self.from_i64(num) * d.inv().expect("nonzero"))
    }

    /// Exactly uniform draw from [0, p) by rejection; no modulo bias.
    pub fn sample_uniform(&self, rng: &mut RandomStream) -> FieldElement {
        let bits = 128 - (self.p - 1).leading_zeros();
        let mask = if bits == 128 { u128::MAX } else { (1u128 << bits) - 1 };
        loop {
            let x = rng.gen::<u128>() & mask;
            if x < self.p {
                return FieldElement { value: x, modulus: *self };
            }
        }
    }

    fn mul_raw(&self, a: u128, b: u128) -> u128 {
        match self.reduction {
            Reduction::Word => (a * b) % self.p,
            Reduction::Mersenne127 => {
                let (hi, lo) = mul_wide(a, b);
                // a, b <= 2^127 - 2, so hi < 2^126 and 2*hi fits in u128.
                let mut s = (lo & M127) + (lo >> 127) + (hi << 1);
                s = (s & M127) + (s >> 127);
                if s >= M127 {
                    s -= M127;
                }
                s
            }
            Reduction::ShiftAdd => mulmod_shift_add(a, b, self.p),
        }
    }
}

/// A fully reduced residue in [0, p). Elements with different moduli never
/// combine; mixing them is a bug and panics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u128,
    modulus: PrimeModulus,
}

impl FieldElement {
    pub fn value(&self) -> u128 {
        self.value
    }

    pub fn modulus(&self) -> PrimeModulus {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    /// Multiplicative inverse via extended Euclid.
    pub fn inv(&self) -> Result<FieldElement> {
        if self.value == 0 {
            return Err(Error::ZeroInverse);
        }
        // p <= 2^127 - 1 = i128::MAX, and Bezout coefficients stay below p.
        let p = self.modulus.p as i128;
        let (mut r0, mut r1) = (p, self.value as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        let t = if t0 < 0 { t0 + p } else { t0 };
        Ok(FieldElement { value: t as u128, modulus: self.modulus })
    }

    pub fn pow(&self, mut e: u128) -> FieldElement {
        let mut base = *self;
        let mut acc = self.modulus.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    fn check_same_modulus(&self, other: &FieldElement) {
        assert_eq!(
            self.modulus, other.modulus,
            "field elements with different moduli must not combine"
        );
    }
}

impl std::ops::Add for FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        let p = self.modulus.p;
        let mut v = self.value + rhs.value; // both < 2^127, no overflow
        if v >= p {
            v -= p;
        }
        FieldElement { value: v, modulus: self.modulus }
    }
}

impl std::ops::Sub for FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        let p = self.modulus.p;
        let v = if self.value >= rhs.value {
            self.value - rhs.value
        } else {
            self.value + p - rhs.value
        };
        FieldElement { value: v, modulus: self.modulus }
    }
}

impl std::ops::Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        if self.value == 0 {
            self
        } else {
            FieldElement { value: self.modulus.p - self.value, modulus: self.modulus }
        }
    }
}

impl std::ops::Mul for FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.check_same_modulus(&rhs);
        FieldElement {
            value: self.modulus.mul_raw(self.value, rhs.value),
            modulus: self.modulus,
        }
    }
}

impl std::fmt::Display for FieldElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Full 128x128 -> 256 bit product as (hi, lo).
fn mul_wide(a: u128, b: u128) -> (u128, u128) {
    let (a0, a1) = (a & 0xFFFF_FFFF_FFFF_FFFF, a >> 64);
    let (b0, b1) = (b & 0xFFFF_FFFF_FFFF_FFFF, b >> 64);
    let ll = a0 * b0;
    let lh = a0 * b1;
    let hl = a1 * b0;
    let hh = a1 * b1;
    let mid = (ll >> 64) + (lh & 0xFFFF_FFFF_FFFF_FFFF) + (hl & 0xFFFF_FFFF_FFFF_FFFF);
    let lo = (mid << 64) | (ll & 0xFFFF_FFFF_FFFF_FFFF);
    let hi = hh + (lh >> 64) + (hl >> 64) + (mid >> 64);
    (hi, lo)
}

/// a*b mod p by binary doubling; used only on rare large custom primes.
fn mulmod_shift_add(a: u128, mut b: u128, p: u128) -> u128 {
    let mut acc = 0u128;
    let mut cur = a % p;
    while b > 0 {
        if b & 1 == 1 {
            acc += cur;
            if acc >= p {
                acc -= p;
            }
        }
        cur += cur;
        if cur >= p {
            cur -= p;
        }
        b >>= 1;
    }
    acc
}

fn powmod(mut base: u128, mut e: u128, p: u128) -> u128 {
    let mut acc = 1u128 % p;
    base %= p;
    let wide = p > u64::MAX as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = if wide { mulmod_shift_add(acc, base, p) } else { (acc * base) % p };
        }
        base = if wide { mulmod_shift_add(base, base, p) } else { (base * base) % p };
        e >>= 1;
    }
    acc
}

/// The first 13 primes witness deterministically for n < 3.3e24.
const SMALL_WITNESSES: [u128; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];
const DETERMINISTIC_LIMIT: u128 = 3_317_044_064_679_887_385_961_981;

pub fn is_prime(n: u128) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u128, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    let witness_ok = |a: u128| -> bool {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            return true;
        }
        for _ in 1..s {
            x = if n > u64::MAX as u128 { mulmod_shift_add(x, x, n) } else { (x * x) % n };
            if x == n - 1 {
                return true;
            }
        }
        false
    };
    for a in SMALL_WITNESSES {
        if !witness_ok(a) {
            return false;
        }
    }
    if n >= DETERMINISTIC_LIMIT {
        // Probabilistic regime: pseudorandom witnesses derived from n.
        let mut state = (n as u64) ^ 0x9E37_79B9_7F4A_7C15;
        for _ in 0..24 {
            state = state.wrapping_mul(0xBF58_476D_1CE4_E5B9).rotate_left(31);
            let a = 2 + (state as u128) % (n - 3);
            if !witness_ok(a) {
                return false;
            }
        }
    }
    true
}
