//! Exact scalar fields.
//!
//! Everything above this module is generic over [`Field`]. Two concrete
//! fields are provided: [`Rational`] (ℚ, arbitrary precision with a fast
//! path for values fitting in `i64`) and [`Fp`] (prime fields).

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::atomic::{AtomicU32, Ordering};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Inv, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// An exact field usable by every algorithm in the crate.
pub trait Field:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Eq
    + Hash
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    /// Characteristic of the field (0 for ℚ).
    fn characteristic() -> u64;

    /// Image of an integer.
    fn from_i64(n: i64) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn try_inv(&self) -> Option<Self>;

    /// Parses the textual form produced by `Display`.
    fn parse(s: &str) -> Result<Self>;

    /// Residue modulo `p` when this is a rational with denominator prime to `p`.
    /// Used by the modular root finder; prime fields return their own value.
    fn residue_mod(&self, p: u64) -> Option<u64>;

    /// Rational reconstruction of a residue, the inverse of `residue_mod`.
    fn from_residue(r: u64, p: u64) -> Option<Self>;

    fn inv(&self) -> Self {
        self.try_inv().expect("inverse of zero")
    }
}

// ---------------------------------------------------------------------------
// Rationals

/// A rational number in lowest terms with positive denominator.
///
/// Values whose numerator and denominator fit in `i64` are stored inline;
/// anything larger falls back to a `BigRational`. The representation is
/// canonical, so derived equality and hashing are sound.
#[derive(Clone)]
pub enum Rational {
    Small(i64, i64),
    Big(BigRational),
}

fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Self::from_i128(num as i128, den as i128)
    }

    fn from_i128(num: i128, den: i128) -> Self {
        let g = gcd_i128(num, den);
        let (mut n, mut d) = if g > 1 { (num / g, den / g) } else { (num, den) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        if n == 0 {
            return Rational::Small(0, 1);
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Rational::Small(n, d),
            _ => Rational::Big(BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
        }
    }

    fn from_big(r: BigRational) -> Self {
        // BigRational::new already reduces; keep only the small-fit normalization.
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            return Rational::Small(n, d);
        }
        Rational::Big(r)
    }

    pub fn to_big(&self) -> BigRational {
        match self {
            Rational::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Rational::Big(r) => r.clone(),
        }
    }

    pub fn numer(&self) -> BigInt {
        match self {
            Rational::Small(n, _) => BigInt::from(*n),
            Rational::Big(r) => r.numer().clone(),
        }
    }

    pub fn denom(&self) -> BigInt {
        match self {
            Rational::Small(_, d) => BigInt::from(*d),
            Rational::Big(r) => r.denom().clone(),
        }
    }
}

impl PartialEq for Rational {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Rational::Small(a, b), Rational::Small(c, d)) => a == c && b == d,
            (Rational::Big(x), Rational::Big(y)) => x == y,
            _ => false,
        }
    }
}
impl Eq for Rational {}

impl Hash for Rational {
    fn hash<H: Hasher>(&self, state: &mut H) {
        match self {
            Rational::Small(n, d) => {
                0u8.hash(state);
                n.hash(state);
                d.hash(state);
            }
            Rational::Big(r) => {
                1u8.hash(state);
                r.hash(state);
            }
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rational::Small(n, 1) => write!(f, "{n}"),
            Rational::Small(n, d) => write!(f, "{n}/{d}"),
            Rational::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Rational::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (&self, &rhs) {
            if *b == 1 && *d == 1 {
                if let Some(s) = a.checked_add(*c) {
                    return Rational::Small(s, 1);
                }
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            if let (Some(x), Some(y)) = (a.checked_mul(d), c.checked_mul(b)) {
                if let (Some(n), Some(den)) = (x.checked_add(y), b.checked_mul(d)) {
                    return Rational::from_i128(n, den);
                }
            }
        }
        Rational::from_big(self.to_big() + rhs.to_big())
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        if let (Rational::Small(a, b), Rational::Small(c, d)) = (&self, &rhs) {
            if *a == 0 || *c == 0 {
                return Rational::Small(0, 1);
            }
            let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
            let g1 = gcd_i128(a, d);
            let g2 = gcd_i128(c, b);
            let n = (a / g1) * (c / g2);
            let den = (b / g2) * (d / g1);
            if let (Ok(n), Ok(den)) = (i64::try_from(n), i64::try_from(den)) {
                return Rational::Small(n, den);
            }
            return Rational::from_i128(n, den);
        }
        Rational::from_big(self.to_big() * rhs.to_big())
    }
}

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self * rhs.try_inv().expect("division by zero")
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        match self {
            Rational::Small(n, d) => match n.checked_neg() {
                Some(m) => Rational::Small(m, d),
                None => Rational::from_big(-BigRational::new_raw(BigInt::from(n), BigInt::from(d))),
            },
            Rational::Big(r) => Rational::from_big(-r),
        }
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational::Small(0, 1)
    }
    fn is_zero(&self) -> bool {
        matches!(self, Rational::Small(0, _))
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational::Small(1, 1)
    }
}

impl Inv for Rational {
    type Output = Rational;
    fn inv(self) -> Rational {
        self.try_inv().expect("inverse of zero")
    }
}

impl FromStr for Rational {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::Parse(format!("not a rational number: {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (s, "1"),
        };
        let n: BigInt = n.parse().map_err(|_| bad())?;
        let d: BigInt = d.parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        Ok(Rational::from_big(BigRational::new(n, d)))
    }
}

impl Field for Rational {
    fn characteristic() -> u64 {
        0
    }

    fn from_i64(n: i64) -> Self {
        Rational::Small(n, 1)
    }

    fn try_inv(&self) -> Option<Self> {
        match self {
            Rational::Small(0, _) => None,
            Rational::Small(n, d) => {
                if *n < 0 {
                    match (d.checked_neg(), n.checked_neg()) {
                        (Some(a), Some(b)) => Some(Rational::Small(a, b)),
                        _ => Some(Rational::from_big(self.to_big().recip())),
                    }
                } else {
                    Some(Rational::Small(*d, *n))
                }
            }
            Rational::Big(r) => Some(Rational::from_big(r.recip())),
        }
    }

    fn parse(s: &str) -> Result<Self> {
        s.parse()
    }

    fn residue_mod(&self, p: u64) -> Option<u64> {
        let pb = BigInt::from(p);
        let n = self.numer().mod_floor(&pb).to_u64()?;
        let d = self.denom().mod_floor(&pb).to_u64()?;
        if d == 0 {
            return None;
        }
        Some(mulmod(n, powmod(d, p - 2, p), p))
    }

    fn from_residue(r: u64, p: u64) -> Option<Self> {
        // Extended Euclid stopped at the first remainder below sqrt(p/2).
        let bound = ((p / 2) as f64).sqrt() as i128;
        let (mut r0, mut r1) = (p as i128, r as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 > bound {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        if t1 == 0 || t1.abs() > bound {
            return None;
        }
        let (n, d) = (r1, t1);
        Some(Rational::from_i128(n, d))
    }
}

impl Rational {
    pub fn abs(&self) -> Rational {
        match self {
            Rational::Small(n, d) if *n != i64::MIN => Rational::Small(n.abs(), *d),
            _ => Rational::from_big(self.to_big().abs()),
        }
    }
}

// ---------------------------------------------------------------------------
// Prime fields

static RUNTIME_MODULUS: AtomicU32 = AtomicU32::new(0);

/// Sets the modulus used by `Fp<0>`. Intended to be called once at startup.
pub fn set_runtime_modulus(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::Parse(format!("{p} is not prime")));
    }
    RUNTIME_MODULUS.store(p, Ordering::SeqCst);
    Ok(())
}

/// Element of 𝔽_P. `Fp<0>` takes its modulus from [`set_runtime_modulus`].
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp<const P: u32>(u32);

impl<const P: u32> Fp<P> {
    #[inline]
    pub fn modulus() -> u64 {
        if P == 0 {
            let p = RUNTIME_MODULUS.load(Ordering::Relaxed);
            assert!(p != 0, "runtime modulus for Fp<0> not set");
            p as u64
        } else {
            P as u64
        }
    }

    pub fn value(self) -> u32 {
        self.0
    }
}

impl<const P: u32> fmt::Debug for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Fp<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Fp<P> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 + rhs.0 as u64) % Self::modulus()) as u32)
    }
}

impl<const P: u32> Sub for Fp<P> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let p = Self::modulus();
        Fp(((self.0 as u64 + p - rhs.0 as u64) % p) as u32)
    }
}

impl<const P: u32> Mul for Fp<P> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Fp(((self.0 as u64 * rhs.0 as u64) % Self::modulus()) as u32)
    }
}

impl<const P: u32> Div for Fp<P> {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self * rhs.try_inv().expect("division by zero")
    }
}

impl<const P: u32> Neg for Fp<P> {
    type Output = Self;
    fn neg(self) -> Self {
        if self.0 == 0 {
            self
        } else {
            Fp((Self::modulus() - self.0 as u64) as u32)
        }
    }
}

impl<const P: u32> Zero for Fp<P> {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Fp<P> {
    fn one() -> Self {
        Fp(1)
    }
}

impl<const P: u32> Field for Fp<P> {
    fn characteristic() -> u64 {
        Self::modulus()
    }

    fn from_i64(n: i64) -> Self {
        Fp(n.rem_euclid(Self::modulus() as i64) as u32)
    }

    fn try_inv(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            let p = Self::modulus();
            Some(Fp(powmod(self.0 as u64, p - 2, p) as u32))
        }
    }

    fn parse(s: &str) -> Result<Self> {
        let r: Rational = s.parse()?;
        let v = r
            .residue_mod(Self::modulus())
            .ok_or_else(|| Error::Parse(format!("{s:?} has no residue mod {}", Self::modulus())))?;
        Ok(Fp(v as u32))
    }

    fn residue_mod(&self, p: u64) -> Option<u64> {
        (p == Self::modulus()).then_some(self.0 as u64)
    }

    fn from_residue(r: u64, p: u64) -> Option<Self> {
        (p == Self::modulus()).then_some(Fp(r as u32))
    }
}

// ---------------------------------------------------------------------------
// Integer helpers shared with the root finder

#[inline]
pub(crate) fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn powmod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, p);
        }
        a = mulmod(a, a, p);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let (mut d, mut s) = (n - 1, 0);
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type F7 = Fp<7>;

    #[test]
    fn rational_normal_form() {
        let r = Rational::new(6, -4);
        assert_eq!(r, Rational::new(-3, 2));
        assert_eq!(r.to_string(), "-3/2");
        assert_eq!("-6/4".parse::<Rational>().unwrap(), r);
        assert!(Rational::new(0, -5).is_zero());
    }

    #[test]
    fn rational_overflow_promotes_and_demotes() {
        let big = Rational::from_i64(i64::MAX);
        let sq = big.clone() * big.clone();
        assert!(matches!(sq, Rational::Big(_)));
        let back = sq / big.clone();
        assert_eq!(back, big);
        assert!(matches!(back, Rational::Small(..)));
    }

    #[test]
    fn prime_field_basics() {
        assert_eq!(F7::from_i64(-1), F7::from_i64(6));
        assert_eq!(F7::from_i64(3).inv() * F7::from_i64(3), F7::one());
        assert_eq!(F7::parse("1/2").unwrap(), F7::from_i64(4));
        assert!(is_prime(2147483647));
        assert!(!is_prime(2147483649));
    }

    #[test]
    fn rational_reconstruction_round_trip() {
        let p = (1u64 << 61) - 1;
        for (n, d) in [(3, 7), (-5, 11), (0, 1), (123456, 789)] {
            let r = Rational::new(n, d);
            let res = r.residue_mod(p).unwrap();
            assert_eq!(Rational::from_residue(res, p), Some(r));
        }
    }

    proptest! {
        #[test]
        fn rational_field_axioms(a in -1000i64..1000, b in 1i64..1000, c in -1000i64..1000, d in 1i64..1000) {
            let x = Rational::new(a, b);
            let y = Rational::new(c, d);
            prop_assert_eq!(x.clone() + y.clone() - y.clone(), x.clone());
            prop_assert_eq!(x.clone() * y.clone(), y.clone() * x.clone());
            if !y.is_zero() {
                prop_assert_eq!(x.clone() * y.clone() / y.clone(), x.clone());
            }
        }

        #[test]
        fn small_and_big_agree(a in any::<i64>(), b in any::<i64>()) {
            let x = Rational::from_i64(a);
            let y = Rational::from_i64(b);
            let s = x.clone() * y.clone() + x.clone();
            let t = Rational::from_big(x.to_big() * y.to_big() + x.to_big());
            prop_assert_eq!(s, t);
        }
    }
}
