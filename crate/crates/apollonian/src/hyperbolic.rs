//! Hyperbolic plane and space in two models each: projectivised Minkowski
//! space and the upper half plane / upper half space.
//!
//! Plane: `[A : B : C]` is the polynomial `Ax² + Bx + C` with form
//! `Δ = B² − 4AC` and pairing `B₁B₂ − 2A₁C₂ − 2A₂C₁`; the points are
//! `Δ < 0` and the isometry to the upper half plane takes a polynomial to
//! its root with positive imaginary part.
//!
//! Space: `[p : q : r : s]` with `Q = r² + s² − pq` and pairing
//! `r₁r₂ + s₁s₂ − (p₁q₂ + p₂q₁)/2`; the points are `Q < 0` and
//!
//! ```text
//!     [p : q : r : s]  ↦  r/p + (s/p)i + (√(pq − r² − s²)/p)j
//!     a + bi + cj      ↦  [1 : a² + b² + c² : a : b]
//! ```
//!
//! Distances are computed from `sinh² d = (⟨u,v⟩² − Q(u)Q(v)) / Q(u)Q(v)`,
//! which is exact in rationals, so nearby points do not lose precision in
//! `acosh`.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circlespace::Rational;
use crate::error::{Error, Result};

fn to_f(x: &Rational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Scale to a primitive integer vector with first nonzero entry positive.
pub fn normalize_projective<const N: usize>(v: &[Rational; N]) -> [BigInt; N] {
    let lcm = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    let g = if g.is_zero() { BigInt::one() } else { g * sign };
    let out: Vec<BigInt> = ints.into_iter().map(|x| x / &g).collect();
    out.try_into().expect("length N")
}

/// `[A : B : C]`, the polynomial `Ax² + Bx + C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkVec3(pub [Rational; 3]);

impl MinkVec3 {
    pub fn from_ints(a: i64, b: i64, c: i64) -> Self {
        MinkVec3([a, b, c].map(|x| BigRational::from_integer(x.into())))
    }

    pub fn disc(&self) -> Rational {
        let [a, b, c] = &self.0;
        b * b - BigRational::from_integer(4.into()) * a * c
    }

    pub fn pairing(&self, o: &MinkVec3) -> Rational {
        let two = BigRational::from_integer(2.into());
        &self.0[1] * &o.0[1] - &two * &self.0[0] * &o.0[2] - two * &o.0[0] * &self.0[2]
    }

    pub fn normalized(&self) -> [BigInt; 3] {
        normalize_projective(&self.0)
    }

    pub fn is_interior(&self) -> bool {
        self.disc().is_negative()
    }
}

/// `[p : q : r : s]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkVec4(pub [Rational; 4]);

impl MinkVec4 {
    pub fn from_ints(p: i64, q: i64, r: i64, s: i64) -> Self {
        MinkVec4([p, q, r, s].map(|x| BigRational::from_integer(x.into())))
    }

    pub fn norm(&self) -> Rational {
        let [p, q, r, s] = &self.0;
        r * r + s * s - p * q
    }

    pub fn pairing(&self, o: &MinkVec4) -> Rational {
        let [p1, q1, r1, s1] = &self.0;
        let [p2, q2, r2, s2] = &o.0;
        r1 * r2 + s1 * s2 - (p1 * q2 + p2 * q1) / BigRational::from_integer(2.into())
    }

    pub fn normalized(&self) -> [BigInt; 4] {
        normalize_projective(&self.0)
    }

    pub fn is_interior(&self) -> bool {
        self.norm().is_negative()
    }
}

/// `x + y·√d·i` with rational `x`, `y` and positive integer `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurdPoint {
    pub x: Rational,
    pub y: Rational,
    pub d: BigInt,
}

impl SurdPoint {
    pub fn new(x: Rational, y: Rational, d: BigInt) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::invalid("radicand must be positive"));
        }
        let mut p = SurdPoint { x, y, d };
        p.simplify();
        Ok(p)
    }

    /// Pull square factors out of `d`.
    fn simplify(&mut self) {
        let mut k = BigInt::from(2);
        let mut out = BigInt::one();
        let mut d = self.d.clone();
        while &k * &k <= d && k < BigInt::from(100_000) {
            let kk = &k * &k;
            while (&d % &kk).is_zero() {
                d /= &kk;
                out *= &k;
            }
            k += 1;
        }
        self.d = d;
        self.y *= BigRational::from_integer(out);
    }

    pub fn imag_is_positive(&self) -> bool {
        self.y.is_positive()
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(to_f(&self.x), to_f(&self.y) * self.d.to_f64().unwrap_or(f64::NAN).sqrt())
    }

    /// `|z|²`, rational.
    pub fn norm(&self) -> Rational {
        &self.x * &self.x + &self.y * &self.y * BigRational::from_integer(self.d.clone())
    }

    /// `z + z̄`, rational.
    pub fn trace(&self) -> Rational {
        &self.x * BigRational::from_integer(2.into())
    }

    /// Möbius image under a real matrix `(a b; c d)`, exactly.
    pub fn mobius(&self, m: &[[Rational; 2]; 2]) -> Result<SurdPoint> {
        // (az + b)(c z̄ + d) / |cz + d|²
        let (a, b, c, d) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
        let den = c * c * self.norm() + c * d * self.trace() + d * d;
        if den.is_zero() {
            return Err(Error::invalid("point sent to infinity"));
        }
        let re = a * c * self.norm() + (a * d + b * c) * &self.x + b * d;
        let im_coeff = (a * d - b * c) * &self.y;
        Ok(SurdPoint { x: re / &den, y: im_coeff / den, d: self.d.clone() })
    }
}

impl fmt::Display for SurdPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}·√{}·i", self.x, self.y, self.d)
    }
}

/// Root with positive imaginary part, exactly.
pub fn coeffs_to_root(v: &MinkVec3) -> Result<SurdPoint> {
    let disc = v.disc();
    if !disc.is_negative() {
        return Err(Error::invalid("need B² − 4AC < 0"));
    }
    let [a, b, _] = &v.0;
    let two_a = a * BigRational::from_integer(2.into());
    // √(−Δ) = √(num/den) = √(num·den)/den
    let nd = -disc;
    let rad = nd.numer() * nd.denom();
    let y = BigRational::new(BigInt::one(), nd.denom().clone()) / two_a.abs();
    SurdPoint::new(-b / &two_a, y, rad)
}

/// `z ↦ [1 : −z − z̄ : z z̄]`, primitive.
pub fn root_to_coeffs(z: &SurdPoint) -> Result<MinkVec3> {
    if z.y.is_zero() {
        return Err(Error::invalid("point on the real axis"));
    }
    let v = [BigRational::one(), -z.trace(), z.norm()];
    Ok(MinkVec3(normalize_projective(&v).map(BigRational::from_integer)))
}

pub fn coeffs_to_root_f64(a: f64, b: f64, c: f64) -> Result<Complex64> {
    let d = b * b - 4.0 * a * c;
    if d >= 0.0 {
        return Err(Error::invalid("need B² − 4AC < 0"));
    }
    Ok(Complex64::new(-b / (2.0 * a), (-d).sqrt() / (2.0 * a).abs()))
}

/// The 3×3 matrix attached to `(a b; c d)`:
/// `[[a², −ac, c²], [−2ab, bc+ad, −2cd], [b², −bd, d²]]`.
/// It preserves `Δ` and reverses products: `Φ(PQ) = Φ(Q)Φ(P)`.
pub fn psl2_to_oq3(m: &[[Rational; 2]; 2]) -> Result<[[Rational; 3]; 3]> {
    let (a, b, c, d) = (&m[0][0], &m[0][1], &m[1][0], &m[1][1]);
    if a * d - b * c != BigRational::one() {
        return Err(Error::invalid("determinant must be 1"));
    }
    let two = BigRational::from_integer(2.into());
    Ok([
        [a * a, -(a * c), c * c],
        [-(&two * a * b), b * c + a * d, -(&two * c * d)],
        [b * b, -(b * d), d * d],
    ])
}

/// Coefficients of `f∘M⁻¹` for `f = Ax² + Bx + C`: its roots are the
/// `M`-images of the roots of `f`. Equals `psl2_to_oq3` of `(d b; c a)`
/// applied to the column `(A, B, C)`.
pub fn act_on_coeffs(m: &[[Rational; 2]; 2], v: &MinkVec3) -> Result<MinkVec3> {
    let swapped = [[m[1][1].clone(), m[0][1].clone()], [m[1][0].clone(), m[0][0].clone()]];
    let phi = psl2_to_oq3(&swapped)?;
    let mut out: [Rational; 3] = [BigRational::zero(), BigRational::zero(), BigRational::zero()];
    for (i, o) in out.iter_mut().enumerate() {
        for (j, x) in v.0.iter().enumerate() {
            *o += &phi[i][j] * x;
        }
    }
    Ok(MinkVec3(out))
}

pub fn dist_uhp(z: Complex64, w: Complex64) -> Result<f64> {
    if z.im <= 0.0 || w.im <= 0.0 {
        return Err(Error::invalid("points must lie in the upper half plane"));
    }
    // cosh d − 1 = 2 sinh²(d/2) = |z − w|²/(2 Im z Im w)
    Ok(2.0 * ((z - w).norm() / (2.0 * (z.im * w.im).sqrt())).asinh())
}

fn dist_from_exact(pair: Rational, qu: Rational, qv: Rational) -> f64 {
    let prod = &qu * &qv;
    let sinh2 = (&pair * &pair - &prod) / prod;
    to_f(&sinh2).max(0.0).sqrt().asinh()
}

pub fn dist_mink3(u: &MinkVec3, v: &MinkVec3) -> Result<f64> {
    if !u.is_interior() || !v.is_interior() {
        return Err(Error::invalid("points must satisfy B² − 4AC < 0"));
    }
    Ok(dist_from_exact(u.pairing(v), u.disc(), v.disc()))
}

/// A point `a + bi + cj` of upper half space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UhsPoint {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn dist_uhs(x: &UhsPoint, y: &UhsPoint) -> Result<f64> {
    if x.c <= 0.0 || y.c <= 0.0 {
        return Err(Error::invalid("points must lie in upper half space"));
    }
    let num = (x.a - y.a).powi(2) + (x.b - y.b).powi(2) + (x.c - y.c).powi(2);
    Ok(2.0 * (num.sqrt() / (2.0 * (x.c * y.c).sqrt())).asinh())
}

pub fn dist_mink4(u: &MinkVec4, v: &MinkVec4) -> Result<f64> {
    if !u.is_interior() || !v.is_interior() {
        return Err(Error::invalid("points must satisfy r² + s² − pq < 0"));
    }
    Ok(dist_from_exact(u.pairing(v), u.norm(), v.norm()))
}

/// `|⟨u,v⟩| / √(Q(u)Q(v))` for any pair with `Q(u)Q(v) > 0`, without a
/// domain check; on interior points this is `cosh d`.
pub fn minkowski_cosh4(u: &MinkVec4, v: &MinkVec4) -> Result<f64> {
    let prod = u.norm() * v.norm();
    if !prod.is_positive() {
        return Err(Error::invalid("Q(u)Q(v) must be positive"));
    }
    Ok(to_f(&u.pairing(v)).abs() / to_f(&prod).sqrt())
}

pub fn uhs_from_mink(v: &MinkVec4) -> Result<UhsPoint> {
    if !v.is_interior() {
        return Err(Error::invalid("need r² + s² − pq < 0"));
    }
    let [p, _, r, s] = &v.0;
    let h = to_f(&(-v.norm())).sqrt() / to_f(p);
    let (a, b) = (to_f(&(r / p)), to_f(&(s / p)));
    // p and q share a sign inside the cone; flipping the representative fixes h > 0
    Ok(UhsPoint { a, b, c: h.abs() })
}

/// `a + bi + cj ↦ [1 : a² + b² + c² : a : b]` (exact when the inputs are).
pub fn mink_from_uhs_exact(a: &Rational, b: &Rational, c2: &Rational) -> Result<MinkVec4> {
    if !c2.is_positive() {
        return Err(Error::invalid("height must be positive"));
    }
    Ok(MinkVec4([BigRational::one(), a * a + b * b + c2, a.clone(), b.clone()]))
}

pub fn mink_from_uhs(x: &UhsPoint) -> Result<[f64; 4]> {
    if x.c <= 0.0 {
        return Err(Error::invalid("height must be positive"));
    }
    Ok([1.0, x.a * x.a + x.b * x.b + x.c * x.c, x.a, x.b])
}

/// The determinant of the rows `(1, zz̄, z + z̄)` for three points; it
/// vanishes exactly when they lie on one geodesic.
pub fn geodesic_dependency(z: &[SurdPoint; 3]) -> Rational {
    let row = |p: &SurdPoint| [BigRational::one(), p.norm(), p.trace()];
    let [a, b, c] = [row(&z[0]), row(&z[1]), row(&z[2])];
    &a[0] * (&b[1] * &c[2] - &b[2] * &c[1]) - &a[1] * (&b[0] * &c[2] - &b[2] * &c[0]) + &a[2] * (&b[0] * &c[1] - &b[1] * &c[0])
}

/// Rectangle `[x0, x1] × [y0, y1]` in the upper half plane.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Window {
    pub fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }
}

/// Upper-half-plane roots of primitive `(a, b, c)`, `a > 0`, with
/// `max(|a|, |b|, |c|) ≤ h` and `b² < 4ac`, inside `window`, with their
/// discriminants.
pub fn starscape_points(h: i64, window: Window) -> Result<Vec<(SurdPoint, i64)>> {
    if !(1..=1000).contains(&h) {
        return Err(Error::invalid("height bound must be in 1..=1000"));
    }
    let mut out: Vec<(SurdPoint, i64)> = (1..=h)
        .into_par_iter()
        .flat_map_iter(|a| {
            let mut local = Vec::new();
            for b in -h..=h {
                for c in 1..=h {
                    let d = b * b - 4 * a * c;
                    if d >= 0 || a.gcd(&b).gcd(&c) != 1 {
                        continue;
                    }
                    let z = Complex64::new(-(b as f64) / (2.0 * a as f64), ((-d) as f64).sqrt() / (2.0 * a as f64));
                    if window.contains(z) {
                        let p = coeffs_to_root(&MinkVec3::from_ints(a, b, c)).expect("interior");
                        local.push((p, d));
                    }
                }
            }
            local
        })
        .collect();
    out.sort_by(|x, y| (to_f(&x.0.x), to_f(&x.0.y)).partial_cmp(&(to_f(&y.0.x), to_f(&y.0.y))).unwrap());
    Ok(out)
}
