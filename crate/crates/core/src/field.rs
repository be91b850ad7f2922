//! Arithmetic in GF(2^q), characteristic two.
//!
//! Elements are stored as the low `q` bits of a `u64`, read as a polynomial
//! over GF(2) reduced modulo an irreducible polynomial of degree `q`. The
//! field is sized per instance: a graph on `n` vertices needs `2^q >= 12 n^6`
//! for the solvers' failure bounds to hold, and [`field_for_instance`] picks
//! the narrowest supported width that satisfies it.

use std::fmt;
use std::ops::{Add, AddAssign};

use rand::Rng;
use thiserror::Error;

/// Widths with a shipped modulus, narrowest first.
pub const SUPPORTED_WIDTHS: [u32; 3] = [16, 32, 64];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero in GF(2^{q})")]
    DivisionByZero { q: u32 },
    #[error("unsupported field width q = {0}; supported widths are 16, 32 and 64")]
    UnsupportedWidth(u32),
    #[error("modulus x^{q} + {reduction:#x} is not irreducible over GF(2)")]
    Reducible { q: u32, reduction: u64 },
    #[error("field width must be in 1..=64, got {0}")]
    InvalidWidth(u32),
    #[error("instance with {n} vertices needs 2^q >= 12 n^6, which no supported width provides")]
    InstanceTooLarge { n: usize },
    #[error("vertex count must be at least 1")]
    EmptyInstance,
}

/// An element of GF(2^q). The width is carried by the [`FieldConfig`] that
/// produced it; mixing elements of different fields is a logic error.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[repr(transparent)]
pub struct FieldElement(u64);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    /// Raw bit pattern; bit `i` is the coefficient of `x^i`.
    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

// Addition needs no modulus: it is XOR in every GF(2^q).
impl Add for FieldElement {
    type Output = FieldElement;

    #[inline]
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn add(self, rhs: FieldElement) -> FieldElement {
        FieldElement(self.0 ^ rhs.0)
    }
}

impl AddAssign for FieldElement {
    #[inline]
    #[allow(clippy::suspicious_op_assign_impl)]
    fn add_assign(&mut self, rhs: FieldElement) {
        self.0 ^= rhs.0;
    }
}

/// Defining parameters of GF(2^q): the width and the modulus
/// `x^q + reduction`, with `reduction` of degree below `q`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct FieldConfig {
    q: u32,
    reduction: u64,
}

impl fmt::Debug for FieldConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "GF(2^{}) mod x^{} + {:#x}",
            self.q, self.q, self.reduction
        )
    }
}

impl FieldConfig {
    /// x^16 + x^5 + x^3 + x + 1
    pub const GF2_16: FieldConfig = FieldConfig {
        q: 16,
        reduction: 0x2b,
    };
    /// x^32 + x^7 + x^3 + x^2 + 1
    pub const GF2_32: FieldConfig = FieldConfig {
        q: 32,
        reduction: 0x8d,
    };
    /// x^64 + x^4 + x^3 + x + 1
    pub const GF2_64: FieldConfig = FieldConfig {
        q: 64,
        reduction: 0x1b,
    };

    /// The shipped field of width `q`.
    pub fn for_width(q: u32) -> Result<FieldConfig, FieldError> {
        match q {
            16 => Ok(Self::GF2_16),
            32 => Ok(Self::GF2_32),
            64 => Ok(Self::GF2_64),
            other => Err(FieldError::UnsupportedWidth(other)),
        }
    }

    /// A field with a caller-chosen modulus `x^q + reduction`. The modulus
    /// is checked for irreducibility.
    pub fn with_modulus(q: u32, reduction: u64) -> Result<FieldConfig, FieldError> {
        if q == 0 || q > 64 {
            return Err(FieldError::InvalidWidth(q));
        }
        if q < 64 && reduction >> q != 0 {
            return Err(FieldError::Reducible { q, reduction });
        }
        if !is_irreducible(q, reduction) {
            return Err(FieldError::Reducible { q, reduction });
        }
        Ok(FieldConfig { q, reduction })
    }

    #[inline]
    pub const fn q(&self) -> u32 {
        self.q
    }

    /// Low part of the modulus (everything below `x^q`).
    #[inline]
    pub const fn reduction(&self) -> u64 {
        self.reduction
    }

    /// Full modulus as a bit pattern of `q + 1` bits.
    pub const fn modulus(&self) -> u128 {
        (1u128 << self.q) | self.reduction as u128
    }

    /// Number of elements, `2^q`.
    pub const fn order(&self) -> u128 {
        1u128 << self.q
    }

    #[inline]
    const fn mask(&self) -> u64 {
        if self.q == 64 {
            u64::MAX
        } else {
            (1u64 << self.q) - 1
        }
    }

    /// Whether `2^q >= 12 n^6`.
    pub fn satisfies_bound(&self, n: usize) -> bool {
        match size_bound(n) {
            Some(bound) => self.order() >= bound,
            None => false,
        }
    }

    /// Interprets `bits` as an element; `None` if it does not fit in `q` bits.
    pub fn element(&self, bits: u64) -> Option<FieldElement> {
        (bits & !self.mask() == 0).then_some(FieldElement(bits))
    }

    #[inline]
    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        a + b
    }

    #[inline]
    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        FieldElement(self.reduce(clmul(a.0, b.0)))
    }

    #[inline]
    pub fn square(&self, a: FieldElement) -> FieldElement {
        self.mul(a, a)
    }

    pub fn pow(&self, a: FieldElement, mut exp: u128) -> FieldElement {
        let mut base = a;
        let mut acc = FieldElement::ONE;
        while exp != 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.square(base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via `a^(2^q - 2)`.
    pub fn inv(&self, a: FieldElement) -> Result<FieldElement, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero { q: self.q });
        }
        Ok(self.pow(a, self.order() - 2))
    }

    /// Uniform element; consumes one `u64` from `rng`.
    #[inline]
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> FieldElement {
        FieldElement(rng.random::<u64>() & self.mask())
    }

    #[inline]
    fn reduce(&self, mut p: u128) -> u64 {
        // Each fold lowers the degree by q - deg(reduction) >= 1; for the
        // shipped sparse moduli two or three folds suffice.
        loop {
            let hi = p >> self.q;
            if hi == 0 {
                return p as u64;
            }
            let lo = p & self.mask() as u128;
            p = lo ^ clmul(hi as u64, self.reduction);
        }
    }
}

/// `12 n^6`, or `None` on overflow of `u128`.
pub fn size_bound(n: usize) -> Option<u128> {
    (n as u128).checked_pow(6)?.checked_mul(12)
}

/// Smallest supported field with `2^q >= 12 n^6`.
pub fn field_for_instance(n: usize) -> Result<FieldConfig, FieldError> {
    if n == 0 {
        return Err(FieldError::EmptyInstance);
    }
    SUPPORTED_WIDTHS
        .iter()
        .map(|&q| FieldConfig::for_width(q).expect("shipped width"))
        .find(|cfg| cfg.satisfies_bound(n))
        .ok_or(FieldError::InstanceTooLarge { n })
}

/// Carryless product of two 64-bit polynomials.
#[inline]
pub fn clmul(a: u64, b: u64) -> u128 {
    #[cfg(target_arch = "x86_64")]
    {
        if std::arch::is_x86_feature_detected!("pclmulqdq") {
            // SAFETY: the feature was detected at runtime.
            return unsafe { clmul_pclmul(a, b) };
        }
    }
    clmul_portable(a, b)
}

#[cfg(target_arch = "x86_64")]
#[target_feature(enable = "pclmulqdq,sse2")]
unsafe fn clmul_pclmul(a: u64, b: u64) -> u128 {
    use std::arch::x86_64::{_mm_clmulepi64_si128, _mm_cvtsi64_si128, _mm_storeu_si128};
    let x = _mm_cvtsi64_si128(a as i64);
    let y = _mm_cvtsi64_si128(b as i64);
    let r = _mm_clmulepi64_si128(x, y, 0);
    let mut out = 0u128;
    _mm_storeu_si128(&mut out as *mut u128 as *mut _, r);
    out
}

/// Four-bit windowed carryless multiply.
pub fn clmul_portable(a: u64, b: u64) -> u128 {
    let mut table = [0u128; 16];
    table[1] = a as u128;
    for i in 2..16 {
        table[i] = if i % 2 == 0 {
            table[i / 2] << 1
        } else {
            table[i - 1] ^ a as u128
        };
    }
    let mut r = 0u128;
    for nibble in (0..16).rev() {
        r <<= 4;
        r ^= table[((b >> (4 * nibble)) & 0xf) as usize];
    }
    r
}

/// Polynomial remainder of `a` modulo `m` over GF(2). `m` must be nonzero.
fn poly_rem(mut a: u128, m: u128) -> u128 {
    let dm = 127 - m.leading_zeros();
    while a != 0 && 127 - a.leading_zeros() >= dm {
        a ^= m << (127 - a.leading_zeros() - dm);
    }
    a
}

fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `f` of degree `q` is irreducible iff `x^(2^q) = x mod f`
/// and `gcd(x^(2^(q/p)) - x, f) = 1` for every prime `p | q`.
pub fn is_irreducible(q: u32, reduction: u64) -> bool {
    if q == 0 || q > 64 {
        return false;
    }
    if reduction & 1 == 0 {
        // divisible by x
        return q == 1 && reduction == 0;
    }
    let f = (1u128 << q) | reduction as u128;
    // operands have degree < q <= 64, so the product fits in 127 bits
    let mulmod = |a: u128, b: u128| poly_rem(clmul(a as u64, b as u64), f);
    // x^(2^i) mod f for i = 0..=q
    let mut frob = Vec::with_capacity(q as usize + 1);
    let mut cur = poly_rem(2, f);
    frob.push(cur);
    for _ in 0..q {
        cur = mulmod(cur, cur);
        frob.push(cur);
    }
    if frob[q as usize] != poly_rem(2, f) {
        return false;
    }
    let x = poly_rem(2, f);
    prime_factors(q).into_iter().all(|p| {
        let h = frob[(q / p) as usize] ^ x;
        poly_gcd(f, h) == 1
    })
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            out.push(p);
            while n.is_multiple_of(p) {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
