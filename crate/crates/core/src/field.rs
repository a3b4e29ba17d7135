//! Arithmetic in GF(2^s) for 2 <= s <= 16.
//!
//! Elements are bitmasks: bit `i` of an element is the coefficient of `ω^i`,
//! where `ω` is the class of `x` modulo the defining polynomial. Multiplication
//! goes through exponent/log tables built once per [`FieldCtx`].

use std::fmt;

use thiserror::Error;

pub const MIN_DEGREE: u32 = 2;
pub const MAX_DEGREE: u32 = 16;

/// A field element, encoded as a polynomial bitmask in `ω`.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct Felt(pub u32);

impl Felt {
    pub const ZERO: Felt = Felt(0);
    pub const ONE: Felt = Felt(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::LowerHex for Felt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::LowerHex::fmt(&self.0, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("extension degree {0} outside [{MIN_DEGREE}, {MAX_DEGREE}]")]
    UnsupportedDegree(u32),
    #[error("modulus {modulus:#x} does not have degree {s}")]
    DegreeMismatch { s: u32, modulus: u32 },
    #[error("modulus {0:#x} is reducible over GF(2)")]
    ReducibleModulus(u32),
    #[error("modulus {modulus:#x} is not primitive: ω has order {order}")]
    NonPrimitive { modulus: u32, order: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse field element {0:?}")]
    BadElement(String),
    #[error("element {value} is outside GF({q})")]
    OutOfRange { value: u32, q: u32 },
}

/// A primitive polynomial of degree `s`, used when no modulus is given.
pub fn default_modulus(s: u32) -> Option<u32> {
    let m = match s {
        2 => 0x7,
        3 => 0xB,
        4 => 0x13,
        5 => 0x25,
        6 => 0x43,
        7 => 0x89,
        8 => 0x11D,
        9 => 0x211,
        10 => 0x409,
        11 => 0x805,
        12 => 0x1053,
        13 => 0x201B,
        14 => 0x4443,
        15 => 0x8003,
        16 => 0x1100B,
        _ => return None,
    };
    Some(m)
}

fn degree(p: u64) -> i32 {
    63 - p.leading_zeros() as i32
}

fn poly_mod(mut a: u64, m: u64) -> u64 {
    let dm = degree(m);
    while a != 0 && degree(a) >= dm {
        a ^= m << (degree(a) - dm);
    }
    a
}

fn poly_mulmod(a: u64, b: u64, m: u64) -> u64 {
    let mut acc = 0u64;
    let mut a = a;
    let mut b = b;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a;
        }
        b >>= 1;
        a <<= 1;
        a = poly_mod(a, m);
    }
    poly_mod(acc, m)
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_mod(a, b);
        a = b;
        b = r;
    }
    a
}

/// Rabin's test: `m` of degree `s` is irreducible iff `x^(2^s) = x (mod m)` and
/// `gcd(x^(2^(s/p)) - x, m) = 1` for every prime `p | s`.
fn is_irreducible(m: u64, s: u32) -> bool {
    let x = poly_mod(0b10, m);
    let frob = |n: u32| {
        let mut t = x;
        for _ in 0..n {
            t = poly_mulmod(t, t, m);
        }
        t
    };
    if frob(s) != x {
        return false;
    }
    let mut n = s;
    let mut p = 2;
    while n > 1 {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            if poly_gcd(m, frob(s / p) ^ x) != 1 {
                return false;
            }
        }
        p += 1;
    }
    true
}

/// The field GF(2^s) with its exponent and log tables.
///
/// Immutable after construction; share it freely between threads.
#[derive(Clone)]
pub struct FieldCtx {
    s: u32,
    q: u32,
    modulus: u32,
    // exp[i] = ω^i for i in [0, 2(q-1)); doubled so products need no reduction.
    exp: Vec<u32>,
    log: Vec<u32>,
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldCtx")
            .field("s", &self.s)
            .field("q", &self.q)
            .field("modulus", &format_args!("{:#x}", self.modulus))
            .finish()
    }
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        self.s == other.s && self.modulus == other.modulus
    }
}

impl Eq for FieldCtx {}

impl FieldCtx {
    /// Builds GF(2^s) from a modulus bitmask (bit `i` = coefficient of `x^i`).
    pub fn new(s: u32, modulus: u32) -> Result<Self, FieldError> {
        if !(MIN_DEGREE..=MAX_DEGREE).contains(&s) {
            return Err(FieldError::UnsupportedDegree(s));
        }
        if degree(modulus as u64) != s as i32 {
            return Err(FieldError::DegreeMismatch { s, modulus });
        }
        if !is_irreducible(modulus as u64, s) {
            return Err(FieldError::ReducibleModulus(modulus));
        }
        let q = 1u32 << s;
        let order = q - 1;
        let mut exp = vec![0u32; 2 * order as usize];
        let mut log = vec![0u32; q as usize];
        let mut v = 1u32;
        for i in 0..order {
            if i > 0 && v == 1 {
                return Err(FieldError::NonPrimitive { modulus, order: i });
            }
            exp[i as usize] = v;
            log[v as usize] = i;
            v <<= 1;
            if v & q != 0 {
                v ^= modulus;
            }
        }
        if v != 1 {
            // Unreachable for an irreducible modulus, kept for completeness.
            return Err(FieldError::NonPrimitive { modulus, order: 0 });
        }
        for i in 0..order as usize {
            exp[i + order as usize] = exp[i];
        }
        Ok(FieldCtx {
            s,
            q,
            modulus,
            exp,
            log,
        })
    }

    /// GF(2^s) with the built-in primitive modulus for `s`.
    pub fn with_default_modulus(s: u32) -> Result<Self, FieldError> {
        let m = default_modulus(s).ok_or(FieldError::UnsupportedDegree(s))?;
        Self::new(s, m)
    }

    #[inline]
    pub fn s(&self) -> u32 {
        self.s
    }

    #[inline]
    pub fn q(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// The primitive element ω (encoding 2).
    pub fn omega(&self) -> Felt {
        Felt(2)
    }

    pub fn elements(&self) -> impl Iterator<Item = Felt> + Clone {
        (0..self.q).map(Felt)
    }

    pub fn element(&self, value: u32) -> Result<Felt, FieldError> {
        if value < self.q {
            Ok(Felt(value))
        } else {
            Err(FieldError::OutOfRange { value, q: self.q })
        }
    }

    #[inline]
    pub fn add(&self, a: Felt, b: Felt) -> Felt {
        Felt(a.0 ^ b.0)
    }

    #[inline]
    pub fn mul(&self, a: Felt, b: Felt) -> Felt {
        if a.0 == 0 || b.0 == 0 {
            return Felt::ZERO;
        }
        let i = self.log[a.0 as usize] + self.log[b.0 as usize];
        Felt(self.exp[i as usize])
    }

    #[inline]
    pub fn square(&self, a: Felt) -> Felt {
        self.mul(a, a)
    }

    pub fn inv(&self, a: Felt) -> Result<Felt, FieldError> {
        if a.0 == 0 {
            return Err(FieldError::DivisionByZero);
        }
        let order = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(Felt(self.exp[((order - l) % order) as usize]))
    }

    pub fn div(&self, a: Felt, b: Felt) -> Result<Felt, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^n`; the exponent is reduced mod `q-1` for nonzero `a`. `0^0 = 1`.
    pub fn pow(&self, a: Felt, n: u64) -> Felt {
        if n == 0 {
            return Felt::ONE;
        }
        if a.0 == 0 {
            return Felt::ZERO;
        }
        let order = (self.q - 1) as u64;
        let e = (self.log[a.0 as usize] as u64 * (n % order)) % order;
        Felt(self.exp[e as usize])
    }

    /// `a^(2^i)` by repeated squaring.
    pub fn frobenius(&self, a: Felt, i: u32) -> Felt {
        let mut x = a;
        for _ in 0..(i % self.s) {
            x = self.square(x);
        }
        x
    }

    /// `ω^i`.
    #[inline]
    pub fn exp(&self, i: u32) -> Felt {
        Felt(self.exp[(i % (self.q - 1)) as usize])
    }

    /// Discrete log to base ω; `None` for zero.
    #[inline]
    pub fn log(&self, a: Felt) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    /// Parses `0x1f`, `31`, `w`, `w^5`, `ω^5`.
    pub fn parse_element(&self, text: &str) -> Result<Felt, FieldError> {
        let t = text.trim();
        let bad = || FieldError::BadElement(text.to_string());
        let power = t.strip_prefix("w").or_else(|| t.strip_prefix("ω")).map(str::trim);
        if let Some(rest) = power {
            let n = if rest.is_empty() {
                1
            } else {
                rest.strip_prefix('^')
                    .ok_or_else(bad)?
                    .trim()
                    .parse::<u64>()
                    .map_err(|_| bad())?
            };
            return Ok(self.pow(self.omega(), n));
        }
        let v = if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
            u32::from_str_radix(h, 16).map_err(|_| bad())?
        } else {
            t.parse::<u32>().map_err(|_| bad())?
        };
        self.element(v)
    }

    /// Renders an element as `0`, `1` or `w^k`.
    pub fn format_power(&self, a: Felt) -> String {
        match self.log(a) {
            None => "0".to_string(),
            Some(0) => "1".to_string(),
            Some(1) => "w".to_string(),
            Some(k) => format!("w^{k}"),
        }
    }
}

/// Parses a modulus given as `0x25`, `37` or a binary string `0b100101`.
pub fn parse_modulus(text: &str) -> Option<u32> {
    let t = text.trim();
    if let Some(h) = t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        u32::from_str_radix(h, 16).ok()
    } else if let Some(b) = t.strip_prefix("0b") {
        u32::from_str_radix(b, 2).ok()
    } else {
        t.parse().ok()
    }
}
