//! Integer and Gaussian-integer arithmetic, residue symbols, sums of two squares.
//!
//! Kronecker symbol conventions, for `(a/n)`:
//!
//! | n            | value                                              |
//! |--------------|----------------------------------------------------|
//! | 0            | 1 if a = ±1, else 0                                |
//! | 1            | 1                                                  |
//! | −1           | 1 if a ≥ 0, −1 if a < 0                            |
//! | 2            | 0 if a even, 1 if a ≡ ±1 (mod 8), −1 if a ≡ ±3     |
//! | odd prime p  | Legendre symbol                                    |
//!
//! and the symbol is extended multiplicatively in `n` over the factorisation
//! `n = ±2^v · m` with `m` odd, where the odd part is the Jacobi symbol.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// ---------------------------------------------------------------------------
// Gaussian integers

/// An element `re + im·i` of Z[i].
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GaussianInt {
    pub re: BigInt,
    pub im: BigInt,
}

impl GaussianInt {
    pub fn new(re: impl Into<BigInt>, im: impl Into<BigInt>) -> Self {
        GaussianInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> Self {
        GaussianInt::new(0, 0)
    }

    pub fn one() -> Self {
        GaussianInt::new(1, 0)
    }

    pub fn i() -> Self {
        GaussianInt::new(0, 1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn norm(&self) -> BigInt {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -&self.im }
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    /// Multiply by `i^k`.
    pub fn mul_i_pow(&self, k: u32) -> Self {
        match k % 4 {
            0 => self.clone(),
            1 => GaussianInt { re: -&self.im, im: self.re.clone() },
            2 => -self.clone(),
            _ => GaussianInt { re: self.im.clone(), im: -&self.re },
        }
    }

    /// The associate with `re > 0, im ≥ 0` (zero maps to zero).
    pub fn first_quadrant(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        for k in 0..4 {
            let z = self.mul_i_pow(k);
            if z.re.is_positive() && !z.im.is_negative() {
                return z;
            }
        }
        unreachable!("some associate lies in the first quadrant")
    }

    /// Quotient rounded to the nearest Gaussian integer, with remainder of
    /// norm at most half the divisor's norm.
    pub fn div_rem_round(&self, d: &GaussianInt) -> (GaussianInt, GaussianInt) {
        let n = d.norm();
        assert!(!n.is_zero(), "division by zero Gaussian integer");
        let num = self * &d.conj();
        let q = GaussianInt { re: round_div(&num.re, &n), im: round_div(&num.im, &n) };
        let r = self - &(&q * d);
        (q, r)
    }

    /// True when `d` divides `self`.
    pub fn divisible_by(&self, d: &GaussianInt) -> bool {
        let n = d.norm();
        if n.is_zero() {
            return self.is_zero();
        }
        let num = self * &d.conj();
        num.re.is_multiple_of(&n) && num.im.is_multiple_of(&n)
    }

    /// Exact division; `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &GaussianInt) -> Option<GaussianInt> {
        let n = d.norm();
        if n.is_zero() {
            return None;
        }
        let num = self * &d.conj();
        if num.re.is_multiple_of(&n) && num.im.is_multiple_of(&n) {
            Some(GaussianInt { re: num.re / &n, im: num.im / &n })
        } else {
            None
        }
    }

    pub fn reduce_mod(&self, m: &BigInt) -> GaussianInt {
        GaussianInt { re: self.re.mod_floor(m), im: self.im.mod_floor(m) }
    }

    /// The associate congruent to 1 modulo (1+i)^3, for odd `self`.
    pub fn primary(&self) -> Option<GaussianInt> {
        if self.norm().is_even() {
            return None;
        }
        let two_plus_2i = GaussianInt::new(2, 2);
        for k in 0..4 {
            let z = self.mul_i_pow(k);
            let shifted = &z - &GaussianInt::one();
            if shifted.divisible_by(&two_plus_2i) {
                return Some(z);
            }
        }
        None
    }
}

fn round_div(a: &BigInt, n: &BigInt) -> BigInt {
    // floor((2a + n) / 2n) for n > 0
    let two = BigInt::from(2);
    (a * &two + n).div_floor(&(n * &two))
}

impl fmt::Display for GaussianInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_negative() {
            write!(f, "{}-{}i", self.re, -&self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl From<i64> for GaussianInt {
    fn from(v: i64) -> Self {
        GaussianInt::new(v, 0)
    }
}

impl From<BigInt> for GaussianInt {
    fn from(v: BigInt) -> Self {
        GaussianInt { re: v, im: BigInt::zero() }
    }
}

impl<'a> Add<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a GaussianInt> for &'a GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: &GaussianInt) -> GaussianInt {
        GaussianInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, o: GaussianInt) -> GaussianInt {
        &self + &o
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, o: GaussianInt) -> GaussianInt {
        &self - &o
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, o: GaussianInt) -> GaussianInt {
        &self * &o
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt { re: -self.re, im: -self.im }
    }
}

/// A greatest common divisor, normalised to the first quadrant.
pub fn gaussian_gcd(a: &GaussianInt, b: &GaussianInt) -> Result<GaussianInt> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::invalid("gcd(0, 0) is undefined"));
    }
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_zero() {
        let (_, r) = x.div_rem_round(&y);
        x = y;
        y = r;
    }
    Ok(x.first_quadrant())
}

/// Extended Euclid in Z[i]: returns `(g, s, t)` with `a·s + b·t = g`.
/// `g` is not unit-normalised.
pub fn gaussian_xgcd(a: &GaussianInt, b: &GaussianInt) -> (GaussianInt, GaussianInt, GaussianInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (GaussianInt::one(), GaussianInt::zero());
    let (mut t0, mut t1) = (GaussianInt::zero(), GaussianInt::one());
    while !r1.is_zero() {
        let (q, r) = r0.div_rem_round(&r1);
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &(&q * &s1);
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &(&q * &t1);
        t0 = std::mem::replace(&mut t1, t);
    }
    (r0, s0, t0)
}

// ---------------------------------------------------------------------------
// Residue symbols

const TAB2: [i32; 8] = [0, 1, 0, -1, 0, -1, 0, 1];

/// Kronecker symbol `(a/n)` on 64-bit inputs.
pub fn kronecker_i64(a: i64, n: i64) -> i32 {
    let mut a = a as i128;
    let mut n = n as i128;
    if n == 0 {
        return if a == 1 || a == -1 { 1 } else { 0 };
    }
    if a % 2 == 0 && n % 2 == 0 {
        return 0;
    }
    let mut k = 1;
    let v = n.trailing_zeros();
    n >>= v;
    if v % 2 == 1 {
        k = TAB2[(a & 7) as usize];
    }
    if n < 0 {
        n = -n;
        if a < 0 {
            k = -k;
        }
    }
    a = a.rem_euclid(n);
    loop {
        if a == 0 {
            return if n == 1 { k } else { 0 };
        }
        let v = a.trailing_zeros();
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(n & 7) as usize];
        }
        if a & n & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = n % r;
        n = r;
    }
}

fn low_bits(x: &BigInt) -> u64 {
    // two's complement low 64 bits, enough for residues mod 8
    let m = x.mod_floor(&BigInt::from(1u64 << 32));
    m.to_u64().unwrap_or(0)
}

fn trailing_zeros(x: &BigInt) -> u64 {
    x.trailing_zeros().unwrap_or(0)
}

/// Kronecker symbol `(a/n)` for arbitrary integers.
pub fn kronecker(a: &BigInt, n: &BigInt) -> i32 {
    if let (Some(x), Some(y)) = (a.to_i64(), n.to_i64()) {
        return kronecker_i64(x, y);
    }
    if n.is_zero() {
        return if a.abs().is_one() { 1 } else { 0 };
    }
    if a.is_even() && n.is_even() {
        return 0;
    }
    let mut k = 1;
    let v = trailing_zeros(n);
    let mut n: BigInt = n >> v;
    if v % 2 == 1 {
        k = TAB2[(low_bits(a) & 7) as usize];
    }
    if n.is_negative() {
        n = -n;
        if a.is_negative() {
            k = -k;
        }
    }
    let mut a = a.mod_floor(&n);
    loop {
        if a.is_zero() {
            return if n.is_one() { k } else { 0 };
        }
        let v = trailing_zeros(&a);
        a >>= v;
        if v % 2 == 1 {
            k *= TAB2[(low_bits(&n) & 7) as usize];
        }
        if low_bits(&a) & low_bits(&n) & 2 != 0 {
            k = -k;
        }
        let r = a;
        a = n.mod_floor(&r);
        n = r;
    }
}

/// Legendre symbol by Euler's criterion; `p` must be an odd prime.
pub fn legendre_euler(a: i64, p: u64) -> i32 {
    let r = a.rem_euclid(p as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    }
}

// ---------------------------------------------------------------------------
// Primes

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for 64-bit integers.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let s = d.trailing_zeros();
    d >>= s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Primality for arbitrary integers. Exact below 2^64; above that a
/// Miller–Rabin test over the first twelve prime bases.
pub fn is_prime(n: &BigInt) -> bool {
    if let Some(v) = n.to_u64() {
        return is_prime_u64(v);
    }
    if !n.is_positive() || n.is_even() {
        return false;
    }
    let one = BigInt::one();
    let nm1 = n - &one;
    let s = trailing_zeros(&nm1);
    let d: BigInt = &nm1 >> s;
    'witness: for a in [2u32, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = BigInt::from(a).modpow(&d, n);
        if x == one || x == nm1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == nm1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes strictly below `n`.
pub fn primes_below(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    sieve.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i as u64).collect()
}

/// Trial-division factorisation, `(prime, exponent)` ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    if n < 2 {
        return out;
    }
    let mut push = |p: u64, n: &mut u64| {
        let mut e = 0;
        while *n % p == 0 {
            *n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
    };
    push(2, &mut n);
    let mut p = 3;
    while p * p <= n {
        push(p, &mut n);
        p += 2;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// A square root of −1 modulo a prime `p ≡ 1 (mod 4)`.
pub fn sqrt_minus_one(p: u64) -> Option<u64> {
    if p % 4 != 1 {
        return None;
    }
    (2..p).find_map(|c| {
        if legendre_euler(c as i64, p) == -1 {
            Some(pow_mod(c, (p - 1) / 4, p))
        } else {
            None
        }
    })
}

/// `(x, y)` with `x² + y² = p` and `0 < x ≤ y`, for a prime `p`.
pub fn two_squares(p: &BigInt) -> Result<(BigInt, BigInt)> {
    if !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not prime")));
    }
    if *p == BigInt::from(2) {
        return Ok((BigInt::one(), BigInt::one()));
    }
    let four = BigInt::from(4);
    if p.mod_floor(&four) != BigInt::one() {
        return Err(Error::NotRepresentable(p.to_string()));
    }
    // Hermite–Serret: Euclid on (p, x) with x² ≡ −1 stops below √p.
    let x = match p.to_u64() {
        Some(pv) => BigInt::from(sqrt_minus_one(pv).expect("p ≡ 1 mod 4")),
        None => {
            let mut c = BigInt::from(2);
            while kronecker(&c, p) != -1 {
                c += 1;
            }
            c.modpow(&((p - 1u32) / 4u32), p)
        }
    };
    let bound = p.sqrt();
    let (mut a, mut b) = (p.clone(), x);
    while b > bound {
        let r = a.mod_floor(&b);
        a = b;
        b = r;
    }
    let rest = p - &b * &b;
    let c = rest.sqrt();
    if &c * &c != rest {
        return Err(Error::invariant(format!("two_squares failed for {p}")));
    }
    Ok(if b <= c { (b, c) } else { (c, b) })
}

/// `two_squares` on machine integers.
pub fn two_squares_u64(p: u64) -> Result<(u64, u64)> {
    let (x, y) = two_squares(&BigInt::from(p))?;
    Ok((x.to_u64().unwrap(), y.to_u64().unwrap()))
}

// ---------------------------------------------------------------------------
// Zagier's one-sentence proof

/// Zagier's involution on `S(p) = {(x,y,z) ∈ N³ : x² + 4yz = p}`.
pub fn zagier_involution(t: (u64, u64, u64), p: u64) -> Result<(u64, u64, u64)> {
    let (x, y, z) = t;
    let lhs = (x as u128) * (x as u128) + 4 * (y as u128) * (z as u128);
    if x == 0 || y == 0 || z == 0 || lhs != p as u128 {
        return Err(Error::invalid(format!("({x}, {y}, {z}) is not in S({p})")));
    }
    let (xi, yi, zi) = (x as i128, y as i128, z as i128);
    let out = if xi < yi - zi {
        (xi + 2 * zi, zi, yi - xi - zi)
    } else if xi > 2 * yi {
        (xi - 2 * yi, xi - yi + zi, yi)
    } else if yi - zi < xi && xi < 2 * yi {
        (2 * yi - xi, yi, xi - yi + zi)
    } else {
        return Err(Error::invalid(format!("({x}, {y}, {z}) lies on a boundary of the case split")));
    };
    Ok((out.0 as u64, out.1 as u64, out.2 as u64))
}

/// Every element of `S(p)`, lexicographically ordered.
pub fn zagier_solutions(p: u64) -> Vec<(u64, u64, u64)> {
    let mut out = Vec::new();
    let mut x = 1u64;
    while x * x < p {
        let rest = p - x * x;
        if rest % 4 == 0 {
            let m = rest / 4;
            for y in 1..=m {
                if m % y == 0 {
                    out.push((x, y, m / y));
                }
            }
        }
        x += 1;
    }
    out
}

// ---------------------------------------------------------------------------
// Quartic residue symbol

/// Factor an odd Gaussian integer into primary primes with multiplicity.
/// The leftover unit is dropped; the quartic symbol does not see it.
pub fn gaussian_factor(m: &GaussianInt) -> Result<Vec<(GaussianInt, u32)>> {
    let n = m.norm().to_u64().ok_or(Error::Overflow("gaussian_factor norm"))?;
    if n == 0 {
        return Err(Error::invalid("cannot factor 0"));
    }
    let mut rest = m.clone();
    let mut out = Vec::new();
    for (p, e) in factor_u64(n) {
        if p == 2 {
            return Err(Error::invalid(format!("{m} is even")));
        }
        if p % 4 == 3 {
            out.push((GaussianInt::new(p as i64, 0), e / 2));
            continue;
        }
        let (a, b) = two_squares_u64(p)?;
        for pi in [GaussianInt::new(a as i64, b as i64), GaussianInt::new(a as i64, -(b as i64))] {
            let mut k = 0;
            while let Some(q) = rest.div_exact(&pi) {
                rest = q;
                k += 1;
            }
            if k > 0 {
                out.push((pi.primary().expect("odd prime"), k));
            }
        }
    }
    out.sort_by(|x, y| (x.0.norm(), &x.0.re, &x.0.im).cmp(&(y.0.norm(), &y.0.re, &y.0.im)));
    Ok(out)
}

/// `[α/π]₄` for a single Gaussian prime `π` of odd norm, as the exponent
/// `k` with symbol `i^k`; `None` when `π | α`.
fn quartic_prime(alpha: &GaussianInt, pi: &GaussianInt) -> Result<Option<u8>> {
    let np = pi.norm().to_u64().ok_or(Error::Overflow("quartic symbol"))?;
    if pi.im.is_zero() || pi.re.is_zero() {
        // inert prime q: work in Z[i]/q, a field of q² elements
        let q = pi.re.abs().max(pi.im.abs());
        let a = alpha.reduce_mod(&q);
        if a.is_zero() {
            return Ok(None);
        }
        let e = (np - 1) / 4;
        let mut r = GaussianInt::one();
        let mut b = a;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = (&r * &b).reduce_mod(&q);
            }
            b = (&b * &b).reduce_mod(&q);
            e >>= 1;
        }
        for k in 0..4u8 {
            if r == GaussianInt::one().mul_i_pow(k as u32).reduce_mod(&q) {
                return Ok(Some(k));
            }
        }
        return Err(Error::invariant(format!("Euler criterion gave a non-unit mod {q}")));
    }
    // split prime: Z[i]/π ≅ F_p with i ↦ −a·b⁻¹
    let p = np;
    let pb = BigInt::from(p);
    let a = pi.re.mod_floor(&pb).to_u64().unwrap();
    let b = pi.im.mod_floor(&pb).to_u64().unwrap();
    let binv = pow_mod(b, p - 2, p);
    let i_img = (p - mul_mod(a, binv, p)) % p;
    let x = alpha.re.mod_floor(&pb).to_u64().unwrap();
    let y = alpha.im.mod_floor(&pb).to_u64().unwrap();
    let v = (x + mul_mod(y, i_img, p)) % p;
    if v == 0 {
        return Ok(None);
    }
    let r = pow_mod(v, (p - 1) / 4, p);
    let units = [1 % p, i_img, p - 1, (p - i_img) % p];
    match units.iter().position(|&u| u == r) {
        Some(k) => Ok(Some(k as u8)),
        None => Err(Error::invariant(format!("Euler criterion gave a non-unit mod {pi}"))),
    }
}

/// Quartic residue symbol `[α/m]₄` for odd `m` coprime to `α`, returned
/// as `k` with symbol `i^k`. Multiplicative over the primary prime
/// factorisation of `m`, each factor computed by Euler's criterion
/// `[α/π]₄ ≡ α^((Nπ−1)/4) (mod π)`.
pub fn quartic_symbol(alpha: &GaussianInt, m: &GaussianInt) -> Result<u8> {
    if m.norm().is_even() {
        return Err(Error::invalid(format!("modulus {m} must be odd")));
    }
    let mut k = 0u32;
    for (pi, e) in gaussian_factor(m)? {
        match quartic_prime(alpha, &pi)? {
            Some(v) => k += v as u32 * e,
            None => return Err(Error::invalid(format!("{alpha} and {m} are not coprime"))),
        }
    }
    Ok((k % 4) as u8)
}

/// Integer square root test.
pub fn is_square(n: &BigInt) -> bool {
    if n.is_negative() {
        return false;
    }
    let r = n.sqrt();
    &r * &r == *n
}

pub fn isqrt_u64(n: u64) -> u64 {
    n.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn legendre_brute(a: i64, p: i64) -> i32 {
        let r = a.rem_euclid(p);
        if r == 0 {
            return 0;
        }
        if (1..p).any(|x| x * x % p == r) {
            1
        } else {
            -1
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker(&big(8), &big(5)), -1);
        assert_eq!(kronecker(&big(2), &big(7)), 1);
        for p in primes_below(200).into_iter().skip(1) {
            assert_eq!(kronecker(&big(1), &big(p as i64)), 1);
        }
    }

    #[test]
    fn kronecker_matches_brute_force_legendre() {
        for p in primes_below(120).into_iter().skip(1) {
            for a in -50..50 {
                assert_eq!(kronecker_i64(a, p as i64), legendre_brute(a, p as i64), "({a}/{p})");
            }
        }
    }

    #[test]
    fn kronecker_conventions() {
        assert_eq!(kronecker_i64(1, 0), 1);
        assert_eq!(kronecker_i64(-1, 0), 1);
        assert_eq!(kronecker_i64(2, 0), 0);
        assert_eq!(kronecker_i64(-5, -1), -1);
        assert_eq!(kronecker_i64(5, -1), 1);
        assert_eq!(kronecker_i64(3, 2), -1);
        assert_eq!(kronecker_i64(7, 2), 1);
        assert_eq!(kronecker_i64(4, 2), 0);
        // multiplicative in n
        for a in -30i64..30 {
            for n in [3i64, 5, 6, 10, 12, 15, -9, 28] {
                let mut prod = 1;
                let mut m = n.abs();
                if n < 0 {
                    prod *= kronecker_i64(a, -1);
                }
                for (p, e) in factor_u64(m as u64) {
                    for _ in 0..e {
                        prod *= kronecker_i64(a, p as i64);
                        m /= p as i64;
                    }
                }
                assert_eq!(kronecker_i64(a, n), prod, "({a}/{n})");
            }
        }
    }

    #[test]
    fn bigint_kronecker_agrees_with_i64() {
        let shift = BigInt::from(1u64) << 80;
        for a in -40i64..40 {
            for n in [7i64, 9, 11, 45, 97] {
                // (a + k n / n) only depends on a mod n for odd positive n
                let big_a = big(a) + &shift * big(n);
                assert_eq!(kronecker(&big_a, &big(n)), kronecker_i64(a, n));
            }
        }
    }

    #[test]
    fn gcd_examples() {
        let g = gaussian_gcd(&GaussianInt::new(5, 0), &GaussianInt::new(3, 4)).unwrap();
        assert_eq!(g, GaussianInt::new(2, 1));
        let g = gaussian_gcd(&GaussianInt::new(1, 1), &GaussianInt::new(2, 0)).unwrap();
        assert_eq!(g, GaussianInt::new(1, 1));
        let z = GaussianInt::new(-3, 7);
        assert_eq!(gaussian_gcd(&z, &GaussianInt::zero()).unwrap(), z.first_quadrant());
        assert!(gaussian_gcd(&GaussianInt::zero(), &GaussianInt::zero()).is_err());
    }

    #[test]
    fn xgcd_bezout() {
        for (a, b) in [((3, 4), (5, 0)), ((7, -2), (1, 5)), ((12, 0), (0, 9))] {
            let a = GaussianInt::new(a.0, a.1);
            let b = GaussianInt::new(b.0, b.1);
            let (g, s, t) = gaussian_xgcd(&a, &b);
            assert_eq!(&(&a * &s) + &(&b * &t), g);
            assert_eq!(g.first_quadrant(), gaussian_gcd(&a, &b).unwrap());
        }
    }

    #[test]
    fn two_squares_examples() {
        assert_eq!(two_squares_u64(5).unwrap(), (1, 2));
        assert_eq!(two_squares_u64(13).unwrap(), (2, 3));
        assert_eq!(two_squares_u64(2).unwrap(), (1, 1));
        assert!(matches!(two_squares_u64(7), Err(Error::NotRepresentable(_))));
        assert!(two_squares_u64(15).is_err());
    }

    #[test]
    fn two_squares_large() {
        let p = BigInt::parse_bytes(b"170141183460469231731687303715884105727", 10).unwrap(); // 2^127 - 1 ≡ 3 mod 4
        assert!(matches!(two_squares(&p), Err(Error::NotRepresentable(_))));
        let p = BigInt::parse_bytes(b"1000000000000000000000000000057", 10).unwrap();
        if is_prime(&p) && p.mod_floor(&big(4)) == big(1) {
            let (x, y) = two_squares(&p).unwrap();
            assert_eq!(&x * &x + &y * &y, p);
        }
    }

    #[test]
    fn zagier_examples() {
        assert_eq!(zagier_involution((1, 1, 1), 5).unwrap(), (1, 1, 1));
        assert_eq!(zagier_involution((3, 1, 1), 13).unwrap(), (1, 3, 1));
        // brute-force the three-branch map on S(13)
        let s = zagier_solutions(13);
        assert_eq!(s, vec![(1, 1, 3), (1, 3, 1), (3, 1, 1)]);
        // (1,1,3) is the forced fixed point (1,1,k) for 13 = 4·3 + 1
        assert_eq!(zagier_involution((1, 1, 3), 13).unwrap(), (1, 1, 3));
        assert!(zagier_involution((2, 1, 1), 13).is_err());
    }

    #[test]
    fn gaussian_factorisation_reassembles() {
        for m in [5i64, 9, 13, 21, 45, 65, 125, 441] {
            let mut prod = GaussianInt::one();
            for (pi, e) in gaussian_factor(&GaussianInt::new(m, 0)).unwrap() {
                for _ in 0..e {
                    prod = &prod * &pi;
                }
            }
            assert_eq!(prod.norm(), big(m * m));
            assert!(GaussianInt::new(m, 0).divisible_by(&prod));
        }
    }

    #[test]
    fn quartic_symbol_matches_brute_force() {
        // [α/π]₄ = 1 iff α is a fourth power mod π
        for p in [5u64, 13, 17, 29, 37] {
            let (a, b) = two_squares_u64(p).unwrap();
            let pi = GaussianInt::new(a as i64, b as i64);
            let i_img = {
                let binv = pow_mod(b, p - 2, p);
                (p - mul_mod(a, binv, p)) % p
            };
            let fourth: std::collections::HashSet<u64> = (1..p).map(|x| pow_mod(x, 4, p)).collect();
            for x in 0..p as i64 {
                for y in 0..3i64 {
                    let alpha = GaussianInt::new(x, y);
                    let v = ((x as u64) + mul_mod(y as u64, i_img, p)) % p;
                    if v == 0 {
                        continue;
                    }
                    let k = quartic_symbol(&alpha, &pi).unwrap();
                    assert_eq!(k == 0, fourth.contains(&v), "[{alpha}/{pi}]");
                    // square of the quartic symbol is the quadratic character
                    assert_eq!(k % 2 == 0, legendre_euler(v as i64, p) == 1);
                }
            }
        }
    }

    #[test]
    fn quartic_reciprocity_on_primary_primes() {
        let mut primes = Vec::new();
        for p in primes_below(120).into_iter().skip(1) {
            if p % 4 == 1 {
                let (a, b) = two_squares_u64(p).unwrap();
                primes.push(GaussianInt::new(a as i64, b as i64).primary().unwrap());
                primes.push(GaussianInt::new(a as i64, -(b as i64)).primary().unwrap());
            } else {
                primes.push(GaussianInt::new(p as i64, 0).primary().unwrap());
            }
        }
        for x in &primes {
            for y in &primes {
                if x == y {
                    continue;
                }
                let nx = x.norm().to_u64().unwrap();
                let ny = y.norm().to_u64().unwrap();
                let k1 = quartic_symbol(x, y).unwrap() as u64;
                let k2 = quartic_symbol(y, x).unwrap() as u64;
                let sign = ((nx - 1) / 4) * ((ny - 1) / 4) % 2;
                // [x/y] = (−1)^sign [y/x]
                assert_eq!(k1 % 4, (k2 + 2 * sign) % 4, "{x} {y}");
            }
        }
    }
}
