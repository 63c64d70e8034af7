//! Oriented circles as points of the space of circles, Descartes quadruples,
//! Soddy swaps, and the action of (generalised) Möbius maps.
//!
//! A circle is stored as `(p, q, r, s)`: curvature `p`, co-curvature `q` and
//! curvature-centre `r + s i`, normalised to `r² + s² − pq = 1`. It is the
//! zero set of the Hermitian form
//!
//! ```text
//!     H = [[ p, −w ], [ −w̄, q ]],   w = r + s i,
//!     z ↦ p|z|² − 2 Re(w̄ z) + q,
//! ```
//!
//! whose negative side is the interior. Interior circles of a bounded packing
//! have `p > 0`, the bounding circle `p < 0`, and the real line `R̂` is stored
//! as `(0, 0, 0, −1)` (interior = lower half plane). Two circles with
//! disjoint interiors are tangent exactly when their inner product is −1.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numtheory::GaussianInt;

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Rational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(x: &Rational) -> Option<Rational> {
    if x.is_negative() {
        return None;
    }
    let n = x.numer().sqrt();
    let d = x.denom().sqrt();
    if &n * &n == *x.numer() && &d * &d == *x.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

pub fn rational_to_string(x: &Rational) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("cannot parse {s:?} as a rational"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            if let Ok(n) = s.parse::<BigInt>() {
                return Ok(BigRational::from_integer(n));
            }
            // decimal literal, read exactly
            let (neg, body) = match s.strip_prefix('-') {
                Some(b) => (true, b),
                None => (false, s),
            };
            let (ip, fp) = body.split_once('.').ok_or_else(bad)?;
            if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) || ip.len() + fp.len() == 0 {
                return Err(bad());
            }
            let digits: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
            let den = num_traits::pow(BigInt::from(10), fp.len());
            let v = BigRational::new(digits, den);
            Ok(if neg { -v } else { v })
        }
    }
}

mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&rational_to_string(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Exact complex rationals

/// `re + im·i` with rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ComplexQ {
    pub re: Rational,
    pub im: Rational,
}

impl ComplexQ {
    pub fn new(re: Rational, im: Rational) -> Self {
        ComplexQ { re, im }
    }

    pub fn int(re: i64, im: i64) -> Self {
        ComplexQ { re: q(re), im: q(im) }
    }

    pub fn zero() -> Self {
        ComplexQ::int(0, 0)
    }

    pub fn one() -> Self {
        ComplexQ::int(1, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ComplexQ { re: self.re.clone(), im: -&self.im }
    }

    pub fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(ComplexQ { re: &self.re / &n, im: -&self.im / &n })
    }

    pub fn div(&self, o: &ComplexQ) -> Option<Self> {
        o.inv().map(|v| self * &v)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        ComplexQ { re: &self.re * k, im: &self.im * k }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64().unwrap_or(f64::NAN), self.im.to_f64().unwrap_or(f64::NAN))
    }

    /// The Gaussian integer with these parts, if both are integers.
    pub fn to_gaussian(&self) -> Option<GaussianInt> {
        if self.re.is_integer() && self.im.is_integer() {
            Some(GaussianInt { re: self.re.to_integer(), im: self.im.to_integer() })
        } else {
            None
        }
    }
}

impl From<&GaussianInt> for ComplexQ {
    fn from(z: &GaussianInt) -> Self {
        ComplexQ {
            re: BigRational::from_integer(z.re.clone()),
            im: BigRational::from_integer(z.im.clone()),
        }
    }
}

impl fmt::Display for ComplexQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) + ({})i", self.re, self.im)
    }
}

impl<'a> Add<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn add(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn sub(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a ComplexQ> for &'a ComplexQ {
    type Output = ComplexQ;
    fn mul(self, o: &ComplexQ) -> ComplexQ {
        ComplexQ {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for &ComplexQ {
    type Output = ComplexQ;
    fn neg(self) -> ComplexQ {
        ComplexQ { re: -&self.re, im: -&self.im }
    }
}

/// A point of the Riemann sphere.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpherePoint {
    Finite(ComplexQ),
    Infinity,
}

// ---------------------------------------------------------------------------
// Circles

/// An oriented circle (or line) in normalised Minkowski coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circle {
    #[serde(with = "rational_str")]
    pub p: Rational,
    #[serde(with = "rational_str")]
    pub q: Rational,
    #[serde(with = "rational_str")]
    pub r: Rational,
    #[serde(with = "rational_str")]
    pub s: Rational,
}

impl Circle {
    /// Checked constructor; the vector must satisfy `r² + s² − pq = 1`.
    pub fn new(p: Rational, q: Rational, r: Rational, s: Rational) -> Result<Self> {
        let c = Circle { p, q, r, s };
        if c.self_norm() != Rational::one() {
            return Err(Error::invalid(format!("{c} is not normalised (r²+s²−pq = {})", c.self_norm())));
        }
        Ok(c)
    }

    pub fn from_ints(p: i64, qq: i64, r: i64, s: i64) -> Result<Self> {
        Circle::new(q(p), q(qq), q(r), q(s))
    }

    pub(crate) fn from_ints_unchecked(p: i64, qq: i64, r: i64, s: i64) -> Self {
        Circle { p: q(p), q: q(qq), r: q(r), s: q(s) }
    }

    /// `R̂` with the lower half plane as interior.
    pub fn real_line() -> Self {
        Circle::from_ints_unchecked(0, 0, 0, -1)
    }

    /// Circle of the given centre and radius; the disk is the interior when
    /// `inward` is true, the complement otherwise.
    pub fn from_center_radius(cx: Rational, cy: Rational, radius: Rational, inward: bool) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::invalid("radius must be positive"));
        }
        let mut p = radius.recip();
        if !inward {
            p = -p;
        }
        let r = &p * &cx;
        let s = &p * &cy;
        let qq = &p * (&cx * &cx + &cy * &cy) - p.recip();
        Circle::new(p, qq, r, s)
    }

    /// The horizontal line `Im z = h`; interior above it when `above`.
    pub fn horizontal_line(h: Rational, above: bool) -> Self {
        // form −2 Re(w̄ z) + q with w = ±i gives ∓2 Im z + q
        if above {
            Circle { p: q(0), q: &h * q(2), r: q(0), s: q(1) }
        } else {
            Circle { p: q(0), q: -&h * q(2), r: q(0), s: q(-1) }
        }
    }

    pub fn self_norm(&self) -> Rational {
        &self.r * &self.r + &self.s * &self.s - &self.p * &self.q
    }

    pub fn is_line(&self) -> bool {
        self.p.is_zero()
    }

    pub fn negate(&self) -> Self {
        Circle { p: -&self.p, q: -&self.q, r: -&self.r, s: -&self.s }
    }

    pub fn center(&self) -> Option<(Rational, Rational)> {
        if self.p.is_zero() {
            None
        } else {
            Some((&self.r / &self.p, &self.s / &self.p))
        }
    }

    pub fn radius(&self) -> Option<Rational> {
        if self.p.is_zero() {
            None
        } else {
            Some(self.p.abs().recip())
        }
    }

    /// `(cx, cy, radius)` in floating point, or `None` for lines.
    pub fn center_radius_f64(&self) -> Option<(f64, f64, f64)> {
        let p = self.p.to_f64()?;
        if p == 0.0 {
            return None;
        }
        Some((self.r.to_f64()? / p, self.s.to_f64()? / p, 1.0 / p.abs()))
    }

    /// Value of the Hermitian form at `z`; negative inside.
    pub fn form_at(&self, z: &ComplexQ) -> Rational {
        let w_bar_z_re = &self.r * &z.re + &self.s * &z.im;
        &self.p * z.norm() - q(2) * w_bar_z_re + &self.q
    }

    pub fn form_at_f64(&self, x: f64, y: f64) -> f64 {
        let p = self.p.to_f64().unwrap();
        let qq = self.q.to_f64().unwrap();
        let r = self.r.to_f64().unwrap();
        let s = self.s.to_f64().unwrap();
        p * (x * x + y * y) - 2.0 * (r * x + s * y) + qq
    }

    /// Whether `∞` lies on the circle (i.e. it is a line).
    pub fn passes_through_infinity(&self) -> bool {
        self.p.is_zero()
    }

    /// One orientation per geometric circle: `p > 0`, or for lines the
    /// orientation with `s < 0` (or `s = 0, r < 0`).
    pub fn canonical(&self) -> Self {
        let flip = if !self.p.is_zero() {
            self.p.is_negative()
        } else if !self.s.is_zero() {
            self.s.is_positive()
        } else {
            self.r.is_positive()
        };
        if flip {
            self.negate()
        } else {
            self.clone()
        }
    }

    pub fn is_integral(&self) -> bool {
        self.p.is_integer() && self.q.is_integer() && self.r.is_integer() && self.s.is_integer()
    }

    pub fn integer_vec(&self) -> Option<[BigInt; 4]> {
        if !self.is_integral() {
            return None;
        }
        Some([self.p.to_integer(), self.q.to_integer(), self.r.to_integer(), self.s.to_integer()])
    }

    pub fn coords(&self) -> [Rational; 4] {
        [self.p.clone(), self.q.clone(), self.r.clone(), self.s.clone()]
    }

    pub fn from_coords(v: [Rational; 4]) -> Self {
        let [p, qq, r, s] = v;
        Circle { p, q: qq, r, s }
    }
}

impl fmt::Display for Circle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {}, {})", self.p, self.q, self.r, self.s)
    }
}

/// `r₁r₂ + s₁s₂ − p₁q₂/2 − p₂q₁/2`.
pub fn inner_product(c1: &Circle, c2: &Circle) -> Rational {
    &c1.r * &c2.r + &c1.s * &c2.s - (&c1.p * &c2.q + &c2.p * &c1.q) / q(2)
}

/// Tangency with disjoint interiors.
pub fn tangent(c1: &Circle, c2: &Circle) -> bool {
    inner_product(c1, c2) == q(-1)
}

// ---------------------------------------------------------------------------
// Descartes quadruples and the Apollonian generators

/// `(a+b+c+d)² − 2(a²+b²+c²+d²)`.
pub fn descartes_form<T>(v: &[T; 4]) -> T
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T>,
{
    let sum = v[0].clone() + v[1].clone() + v[2].clone() + v[3].clone();
    let sq = v[0].clone() * v[0].clone()
        + v[1].clone() * v[1].clone()
        + v[2].clone() * v[2].clone()
        + v[3].clone() * v[3].clone();
    sum.clone() * sum - (sq.clone() + sq)
}

/// Replace entry `i` (0-based) by twice the sum of the other three minus itself.
pub fn soddy_swap<T>(v: &[T; 4], i: usize) -> [T; 4]
where
    T: Clone + Add<Output = T> + Sub<Output = T>,
{
    let mut out = v.clone();
    let mut others = None::<T>;
    for (j, x) in v.iter().enumerate() {
        if j != i {
            others = Some(match others {
                None => x.clone(),
                Some(acc) => acc + x.clone(),
            });
        }
    }
    let o = others.expect("four entries");
    out[i] = o.clone() + o - v[i].clone();
    out
}

/// The generator `S_i` (0-based): the identity with column `i` set to 2 and
/// entry `(i,i)` set to −1. Acts on row vectors from the right.
pub fn generator_matrix(i: usize) -> [[i64; 4]; 4] {
    let mut m = [[0i64; 4]; 4];
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = 1;
        row[i] = 2;
    }
    m[i][i] = -1;
    m
}

/// `S_i^⊥ = S_iᵀ`, the dual generator of the super-Apollonian group.
pub fn dual_generator_matrix(i: usize) -> [[i64; 4]; 4] {
    transpose(&generator_matrix(i))
}

pub fn transpose(m: &[[i64; 4]; 4]) -> [[i64; 4]; 4] {
    let mut t = [[0i64; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            t[i][j] = m[j][i];
        }
    }
    t
}

/// `v · m` for a row vector `v`.
pub fn row_times<T>(v: &[T; 4], m: &[[i64; 4]; 4]) -> [T; 4]
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T> + From<i64>,
{
    let mut out: [T; 4] = [T::zero(), T::zero(), T::zero(), T::zero()];
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (k, x) in v.iter().enumerate() {
            if m[k][j] != 0 {
                acc = acc + x.clone() * T::from(m[k][j]);
            }
        }
        *o = acc;
    }
    out
}

/// `v · S_i` (0-based `i`).
pub fn apply_generator<T>(v: &[T; 4], i: usize) -> [T; 4]
where
    T: Clone + Zero + Add<Output = T> + Mul<Output = T> + From<i64>,
{
    row_times(v, &generator_matrix(i))
}

/// Four curvatures forming a Descartes configuration, optionally with the
/// full circles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescartesQuadruple {
    pub curvatures: [BigInt; 4],
    pub circles: Option<[Circle; 4]>,
}

impl DescartesQuadruple {
    pub fn new(curvatures: [BigInt; 4]) -> Result<Self> {
        if !descartes_form(&curvatures).is_zero() {
            return Err(Error::NotDescartes(format_quad(&curvatures)));
        }
        Ok(DescartesQuadruple { curvatures, circles: None })
    }

    pub fn from_i64(v: [i64; 4]) -> Result<Self> {
        DescartesQuadruple::new(v.map(BigInt::from))
    }

    /// Four pairwise tangent circles; the curvatures must be integers.
    pub fn from_circles(circles: [Circle; 4]) -> Result<Self> {
        for i in 0..4 {
            for j in i + 1..4 {
                if !tangent(&circles[i], &circles[j]) {
                    return Err(Error::NotDescartes(format!("circles {i} and {j} are not tangent")));
                }
            }
        }
        let mut curvatures = [BigInt::zero(), BigInt::zero(), BigInt::zero(), BigInt::zero()];
        for (k, c) in circles.iter().enumerate() {
            if !c.p.is_integer() {
                return Err(Error::invalid("curvatures must be integers"));
            }
            curvatures[k] = c.p.to_integer();
        }
        let mut dq = DescartesQuadruple::new(curvatures)?;
        dq.circles = Some(circles);
        Ok(dq)
    }

    pub fn swap(&self, i: usize) -> Self {
        DescartesQuadruple {
            curvatures: soddy_swap(&self.curvatures, i),
            circles: self.circles.as_ref().map(|c| swap_circles(c, i)),
        }
    }

    pub fn is_primitive(&self) -> bool {
        let g = self.curvatures.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        g.is_one()
    }

    pub fn to_i64(&self) -> Option<[i64; 4]> {
        Some([
            self.curvatures[0].to_i64()?,
            self.curvatures[1].to_i64()?,
            self.curvatures[2].to_i64()?,
            self.curvatures[3].to_i64()?,
        ])
    }
}

pub(crate) fn format_quad<T: fmt::Display>(v: &[T; 4]) -> String {
    format!("({}, {}, {}, {})", v[0], v[1], v[2], v[3])
}

/// Soddy swap applied coordinate-wise to four circles.
pub fn swap_circles(c: &[Circle; 4], i: usize) -> [Circle; 4] {
    let mut out = c.clone();
    let coord = |k: usize| -> [Rational; 4] { [c[0].coords()[k].clone(), c[1].coords()[k].clone(), c[2].coords()[k].clone(), c[3].coords()[k].clone()] };
    let cols: Vec<[Rational; 4]> = (0..4).map(|k| soddy_swap(&coord(k), i)).collect();
    out[i] = Circle::from_coords([cols[0][i].clone(), cols[1][i].clone(), cols[2][i].clone(), cols[3][i].clone()]);
    out
}

// ---------------------------------------------------------------------------
// Möbius maps

/// `z ↦ (αz + β)/(γz + δ)`, or `z ↦ (α z̄ + β)/(γ z̄ + δ)` when `conj` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MobiusMap {
    pub a: ComplexQ,
    pub b: ComplexQ,
    pub c: ComplexQ,
    pub d: ComplexQ,
    pub conj: bool,
}

impl MobiusMap {
    pub fn new(a: ComplexQ, b: ComplexQ, c: ComplexQ, d: ComplexQ, conj: bool) -> Result<Self> {
        let m = MobiusMap { a, b, c, d, conj };
        if m.det().is_zero() {
            return Err(Error::invalid("singular Möbius map"));
        }
        Ok(m)
    }

    pub fn from_gaussian(a: &GaussianInt, b: &GaussianInt, c: &GaussianInt, d: &GaussianInt, conj: bool) -> Result<Self> {
        MobiusMap::new(a.into(), b.into(), c.into(), d.into(), conj)
    }

    /// Gaussian-integer entries given as `(re, im)` pairs.
    pub fn from_ints(e: [(i64, i64); 4], conj: bool) -> Result<Self> {
        MobiusMap::new(
            ComplexQ::int(e[0].0, e[0].1),
            ComplexQ::int(e[1].0, e[1].1),
            ComplexQ::int(e[2].0, e[2].1),
            ComplexQ::int(e[3].0, e[3].1),
            conj,
        )
    }

    pub fn identity() -> Self {
        MobiusMap { a: ComplexQ::one(), b: ComplexQ::zero(), c: ComplexQ::zero(), d: ComplexQ::one(), conj: false }
    }

    pub fn det(&self) -> ComplexQ {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    /// Entries in Z[i] and determinant a unit.
    pub fn is_bianchi(&self) -> bool {
        [&self.a, &self.b, &self.c, &self.d].iter().all(|e| e.to_gaussian().is_some()) && self.det().norm().is_one()
    }

    fn conj_entries(&self) -> Self {
        MobiusMap { a: self.a.conj(), b: self.b.conj(), c: self.c.conj(), d: self.d.conj(), conj: self.conj }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &MobiusMap) -> MobiusMap {
        let o = if self.conj { other.conj_entries() } else { other.clone() };
        MobiusMap {
            a: &(&self.a * &o.a) + &(&self.b * &o.c),
            b: &(&self.a * &o.b) + &(&self.b * &o.d),
            c: &(&self.c * &o.a) + &(&self.d * &o.c),
            d: &(&self.c * &o.b) + &(&self.d * &o.d),
            conj: self.conj ^ other.conj,
        }
    }

    pub fn inverse(&self) -> MobiusMap {
        let det = self.det();
        let inv = det.inv().expect("non-singular");
        let adj = MobiusMap { a: &self.d * &inv, b: &(-&self.b) * &inv, c: &(-&self.c) * &inv, d: &self.a * &inv, conj: self.conj };
        // (M ∘ conj)⁻¹ = conj ∘ M⁻¹ = conj(M⁻¹) ∘ conj
        if self.conj {
            adj.conj_entries()
        } else {
            adj
        }
    }

    pub fn apply_point(&self, z: &SpherePoint) -> SpherePoint {
        let (num, den) = match z {
            SpherePoint::Infinity => (self.a.clone(), self.c.clone()),
            SpherePoint::Finite(w) => {
                let w = if self.conj { w.conj() } else { w.clone() };
                (&(&self.a * &w) + &self.b, &(&self.c * &w) + &self.d)
            }
        };
        match num.div(&den) {
            Some(v) => SpherePoint::Finite(v),
            None => SpherePoint::Infinity,
        }
    }

    pub fn apply_f64(&self, x: f64, y: f64) -> Option<(f64, f64)> {
        let e = |c: &ComplexQ| c.to_f64();
        let (a, b, c, d) = (e(&self.a), e(&self.b), e(&self.c), e(&self.d));
        let y = if self.conj { -y } else { y };
        let mul = |u: (f64, f64), v: (f64, f64)| (u.0 * v.0 - u.1 * v.1, u.0 * v.1 + u.1 * v.0);
        let n = mul(a, (x, y));
        let n = (n.0 + b.0, n.1 + b.1);
        let dd = mul(c, (x, y));
        let dd = (dd.0 + d.0, dd.1 + d.1);
        let nn = dd.0 * dd.0 + dd.1 * dd.1;
        if nn == 0.0 {
            return None;
        }
        Some(((n.0 * dd.0 + n.1 * dd.1) / nn, (n.1 * dd.0 - n.0 * dd.1) / nn))
    }

    fn abs_det(&self) -> Result<Rational> {
        rational_sqrt(&self.det().norm()).ok_or_else(|| Error::invalid("|det| is irrational; the image circle cannot be normalised"))
    }
}

/// Image of `R̂` oriented with the upper half plane as interior:
/// curvature `2 Im(γ̄δ)`, co-curvature `2 Im(ᾱβ)`, curvature-centre
/// `i(αδ̄ − γ̄β)`, divided by `|det M|`. For a map with the conjugation flag
/// the orientation is reversed, since `z ↦ z̄` swaps the half planes.
pub fn mobius_image_of_line(m: &MobiusMap) -> Result<Circle> {
    let scale = m.abs_det()?;
    let p = (&m.c.conj() * &m.d).im * q(2);
    let qq = (&m.a.conj() * &m.b).im * q(2);
    let inner = &(&m.a * &m.d.conj()) - &(&m.c.conj() * &m.b);
    // i·(x + yi) = −y + xi
    let r = -inner.im.clone();
    let s = inner.re.clone();
    let c = Circle { p: p / &scale, q: qq / &scale, r: r / &scale, s: s / &scale };
    let c = if m.conj { c.negate() } else { c };
    if c.self_norm() != Rational::one() {
        return Err(Error::invariant(format!("image of R̂ {c} is off the hyperboloid")));
    }
    Ok(c)
}

/// Image of an oriented circle: `H ↦ adj(M)* H adj(M) / |det M|`, with the
/// circle conjugated first when the map carries the conjugation flag.
pub fn mobius_apply_circle(m: &MobiusMap, c: &Circle) -> Result<Circle> {
    let scale = m.abs_det()?;
    let s = if m.conj { -&c.s } else { c.s.clone() };
    let w = ComplexQ::new(c.r.clone(), s);
    let h = [[ComplexQ::new(c.p.clone(), q(0)), -&w], [-&w.conj(), ComplexQ::new(c.q.clone(), q(0))]];
    let adj = [[m.d.clone(), -&m.b], [-&m.c, m.a.clone()]];
    let mul = |x: &[[ComplexQ; 2]; 2], y: &[[ComplexQ; 2]; 2]| -> [[ComplexQ; 2]; 2] {
        let e = |i: usize, j: usize| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]);
        [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
    };
    let adj_star = [[adj[0][0].conj(), adj[1][0].conj()], [adj[0][1].conj(), adj[1][1].conj()]];
    let hp = mul(&adj_star, &mul(&h, &adj));
    let w2 = -&hp[0][1];
    let out = Circle {
        p: &hp[0][0].re / &scale,
        q: &hp[1][1].re / &scale,
        r: &w2.re / &scale,
        s: &w2.im / &scale,
    };
    if out.self_norm() != c.self_norm() {
        return Err(Error::invariant("Möbius action changed the Minkowski norm"));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(p: i64, qq: i64, r: i64, s: i64) -> Circle {
        Circle::from_ints(p, qq, r, s).unwrap()
    }

    fn random_bianchi(rng: &mut impl Rng, len: usize) -> MobiusMap {
        let gens = [
            MobiusMap::from_ints([(1, 0), (1, 0), (0, 0), (1, 0)], false).unwrap(),
            MobiusMap::from_ints([(1, 0), (0, 1), (0, 0), (1, 0)], false).unwrap(),
            MobiusMap::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)], false).unwrap(),
            MobiusMap::from_ints([(1, 0), (-1, 0), (0, 0), (1, 0)], false).unwrap(),
            MobiusMap::from_ints([(1, 0), (0, -1), (0, 0), (1, 0)], false).unwrap(),
            MobiusMap::from_ints([(0, 1), (0, 0), (0, 0), (1, 0)], false).unwrap(),
        ];
        let mut m = MobiusMap::identity();
        for _ in 0..len {
            m = m.compose(&gens[rng.gen_range(0..gens.len())]);
        }
        m
    }

    #[test]
    fn descartes_form_examples() {
        assert_eq!(descartes_form(&[-1i64, 2, 2, 3]), 0);
        assert_eq!(descartes_form(&[0i64, 0, 2, 2]), 0);
        assert_eq!(descartes_form(&[1i64, 1, 1, 1]), 8);
    }

    #[test]
    fn swap_examples() {
        assert_eq!(soddy_swap(&[-1i64, 2, 2, 3], 0), [15, 2, 2, 3]);
        assert_eq!(soddy_swap(&[0i64, 0, 2, 2], 0), [8, 0, 2, 2]);
        assert_eq!(soddy_swap(&soddy_swap(&[-1i64, 2, 2, 3], 2), 2), [-1, 2, 2, 3]);
    }

    #[test]
    fn generator_matrices_as_printed() {
        // S_1 = [[-1,0,0,0],[2,1,0,0],[2,0,1,0],[2,0,0,1]]
        assert_eq!(generator_matrix(0), [[-1, 0, 0, 0], [2, 1, 0, 0], [2, 0, 1, 0], [2, 0, 0, 1]]);
        assert_eq!(apply_generator(&[-1i64, 2, 2, 3], 0), [15, 2, 2, 3]);
        // (0,0,2,2)·S₄: 2(0+0+2) − 2 = 2
        assert_eq!(apply_generator(&[0i64, 0, 2, 2], 3), [0, 0, 2, 2]);
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for _ in 0..100 {
            let v: [i64; 4] = [rng.gen_range(-99..99), rng.gen_range(-99..99), rng.gen_range(-99..99), rng.gen_range(-99..99)];
            for i in 0..4 {
                assert_eq!(apply_generator(&apply_generator(&v, i), i), v);
                assert_eq!(apply_generator(&v, i), soddy_swap(&v, i));
            }
        }
    }

    #[test]
    fn image_of_line_examples() {
        // identity: R̂ with the upper half plane inside
        assert_eq!(mobius_image_of_line(&MobiusMap::identity()).unwrap(), Circle::real_line().negate());
        let s = MobiusMap::from_ints([(0, 0), (-1, 0), (1, 0), (0, 0)], false).unwrap();
        assert!(mobius_image_of_line(&s).unwrap().is_line());
        let m = MobiusMap::from_ints([(1, 0), (0, 0), (1, -1), (1, 0)], false).unwrap();
        let img = mobius_image_of_line(&m).unwrap();
        assert_eq!(img, c(2, 0, 0, 1));
        assert_eq!(img.center().unwrap(), (q(0), qf(1, 2)));
        // three image points lie on it
        for z in [SpherePoint::Finite(ComplexQ::int(0, 0)), SpherePoint::Finite(ComplexQ::int(1, 0)), SpherePoint::Infinity] {
            match m.apply_point(&z) {
                SpherePoint::Finite(w) => assert!(img.form_at(&w).is_zero()),
                SpherePoint::Infinity => panic!("finite circle"),
            }
        }
    }

    #[test]
    fn apply_circle_examples() {
        let t = MobiusMap::from_ints([(1, 0), (1, 0), (0, 0), (1, 0)], false).unwrap();
        let ford0 = c(2, 0, 0, 1);
        let moved = mobius_apply_circle(&t, &ford0).unwrap();
        assert_eq!(moved.center().unwrap(), (q(1), qf(1, 2)));
        assert_eq!(moved.radius().unwrap(), qf(1, 2));
        // inversion z ↦ 1/z: (p, q, r, s) ↦ (q, p, r, −s)
        let inv = MobiusMap::from_ints([(0, 0), (1, 0), (1, 0), (0, 0)], false).unwrap();
        let x = c(2, 2, 2, 1);
        assert_eq!(mobius_apply_circle(&inv, &x).unwrap(), c(2, 2, 2, -1));
    }

    #[test]
    fn apply_agrees_with_image_of_line() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        for _ in 0..200 {
            let mut m = random_bianchi(&mut rng, 8);
            m.conj = rng.gen_bool(0.5);
            let via_formula = mobius_image_of_line(&m).unwrap();
            let via_action = mobius_apply_circle(&m, &Circle::real_line().negate()).unwrap();
            assert_eq!(via_formula, via_action);
            // orientation: the image of i lies inside
            let inside = m.apply_f64(0.0, 1.0);
            if let Some((x, y)) = inside {
                assert!(via_formula.form_at_f64(x, y) < 1e-9);
            }
        }
    }

    #[test]
    fn conjugated_image_of_line_by_three_points() {
        let m = MobiusMap::from_ints([(1, 0), (0, 0), (1, -1), (1, 0)], true).unwrap();
        let img = mobius_image_of_line(&m).unwrap();
        for z in [SpherePoint::Finite(ComplexQ::int(0, 0)), SpherePoint::Finite(ComplexQ::int(1, 0)), SpherePoint::Finite(ComplexQ::int(-3, 0))] {
            if let SpherePoint::Finite(w) = m.apply_point(&z) {
                assert!(img.form_at(&w).is_zero());
            }
        }
        // the oriented image of the upper half plane: F(i) inside, F(−i) outside
        let (x, y) = m.apply_f64(0.0, 1.0).unwrap();
        assert!(img.form_at_f64(x, y) < 0.0);
        let (x, y) = m.apply_f64(0.0, -1.0).unwrap();
        assert!(img.form_at_f64(x, y) > 0.0);
        // and it is the negation of the unconjugated formula
        let plain = MobiusMap { conj: false, ..m.clone() };
        assert_eq!(img, mobius_image_of_line(&plain).unwrap().negate());
    }

    #[test]
    fn inner_product_examples() {
        assert_eq!(inner_product(&c(2, 0, 0, 1), &Circle::real_line()), q(-1));
        assert_eq!(inner_product(&c(2, 0, 0, 1), &c(2, 2, 2, 1)), q(-1));
        assert_eq!(inner_product(&c(2, 0, 0, 1), &c(2, 0, 0, 1)), q(1));
        assert!(!tangent(&c(2, 0, 0, 1), &c(2, 0, 0, 1)));
    }

    #[test]
    fn tangency_matches_geometry() {
        let a = Circle::from_center_radius(q(0), q(0), q(1), false).unwrap();
        let b = Circle::from_center_radius(qf(1, 2), q(0), qf(1, 2), true).unwrap();
        let cc = Circle::from_center_radius(q(0), qf(2, 3), qf(1, 3), true).unwrap();
        assert!(tangent(&a, &b) && tangent(&a, &cc) && tangent(&b, &cc));
        let far = Circle::from_center_radius(q(5), q(0), q(1), true).unwrap();
        assert!(!tangent(&b, &far));
        assert_eq!(a, c(-1, 1, 0, 0));
    }

    #[test]
    fn mobius_preserves_norm_and_tangency() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let base = [Circle::real_line(), c(0, 2, 0, 1), c(2, 0, 0, 1), c(2, 2, 2, 1)];
        for _ in 0..100 {
            let mut m = random_bianchi(&mut rng, 6);
            m.conj = rng.gen_bool(0.3);
            let imgs: Vec<Circle> = base.iter().map(|x| mobius_apply_circle(&m, x).unwrap()).collect();
            for i in 0..4 {
                assert_eq!(imgs[i].self_norm(), q(1));
                for j in 0..4 {
                    assert_eq!(inner_product(&imgs[i], &imgs[j]), inner_product(&base[i], &base[j]));
                }
            }
        }
    }

    #[test]
    fn compose_and_inverse() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(5);
        for _ in 0..50 {
            let mut m = random_bianchi(&mut rng, 5);
            m.conj = rng.gen_bool(0.5);
            let mut n = random_bianchi(&mut rng, 5);
            n.conj = rng.gen_bool(0.5);
            let z = SpherePoint::Finite(ComplexQ::new(qf(1, 3), qf(2, 7)));
            assert_eq!(m.compose(&n).apply_point(&z), m.apply_point(&n.apply_point(&z)));
            assert_eq!(m.inverse().apply_point(&m.apply_point(&z)), z);
        }
    }

    #[test]
    fn json_round_trip() {
        let x = Circle::from_center_radius(qf(1, 3), qf(1, 2), qf(1, 6), true).unwrap();
        let s = serde_json::to_string(&x).unwrap();
        assert!(s.contains("\"p\":\"6/1\""));
        let back: Circle = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn strip_base_is_descartes() {
        let base = [Circle::real_line(), c(0, 2, 0, 1), c(2, 0, 0, 1), c(2, 2, 2, 1)];
        let dq = DescartesQuadruple::from_circles(base.clone()).unwrap();
        assert_eq!(dq.curvatures, [0, 0, 2, 2].map(BigInt::from));
        let sw = dq.swap(0);
        let new = &sw.circles.as_ref().unwrap()[0];
        assert_eq!(*new, c(8, 8, 4, 7));
        for j in 1..4 {
            assert!(tangent(new, &base[j]));
        }
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("17/5").unwrap(), qf(17, 5));
        assert_eq!(parse_rational("-2").unwrap(), q(-2));
        assert_eq!(parse_rational("3.25").unwrap(), qf(13, 4));
        assert_eq!(parse_rational("-0.5").unwrap(), qf(-1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }
}
