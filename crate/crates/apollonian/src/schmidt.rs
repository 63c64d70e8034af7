//! The Schmidt arrangement of `Q(i)`: all images of `R̂` under
//! `PSL₂(Z[i])`.
//!
//! As vectors these are exactly the integral `(p, q, r, s)` with
//! `(p, q, r, s) ≡ (0, 0, 0, 1) (mod 2)` on the hyperboloid
//! `r² + s² − pq = 1`. Writing `p = 2p'`, `r = 2r'`, `s = 2s' + 1`, the
//! condition on `q` is `p' | r'² + s'² + s'` and the centre is
//! `(r' + (s' + ½)i)/p'`. Bounds here are in reduced curvature `p'`, half
//! the curvature.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circlespace::{mobius_apply_circle, mobius_image_of_line, q, Circle, ComplexQ, MobiusMap};
use crate::error::{Error, Result};
use crate::numtheory::{gaussian_xgcd, GaussianInt};
use crate::packing::{sort_circles, Window};

/// Integral, `≡ (0, 0, 0, 1) (mod 2)` and on the hyperboloid.
pub fn is_schmidt_circle(c: &Circle) -> bool {
    let Some([p, qq, r, s]) = c.integer_vec() else { return false };
    p.is_even() && qq.is_even() && r.is_even() && s.is_odd() && &r * &r + &s * &s - &p * &qq == BigInt::one()
}

fn disk_meets(cx: f64, cy: f64, rad: f64, w: &Window) -> bool {
    let dx = (w.x0 - cx).max(0.0).max(cx - w.x1);
    let dy = (w.y0 - cy).max(0.0).max(cy - w.y1);
    dx.hypot(dy) <= rad * (1.0 + 1e-12)
}

/// The Schmidt circles with reduced curvature `≤ max_reduced` whose closed
/// disk meets the window, plus the lines `Im z = n` crossing it. Lines are
/// oriented like `R̂`, circles with the disk inside. Sorted by curvature,
/// then centre.
pub fn schmidt_circles(window: &Window, max_reduced: i64) -> Result<Vec<Circle>> {
    if max_reduced < 1 {
        return Err(Error::invalid("reduced curvature bound must be ≥ 1"));
    }
    let mut out: Vec<Circle> = ((window.y0.ceil() as i64)..=(window.y1.floor() as i64))
        .map(|n| Circle::from_ints_unchecked(0, -2 * n, 0, -1))
        .collect();
    let circles: Vec<Circle> = (1..=max_reduced)
        .into_par_iter()
        .flat_map_iter(|pp| {
            let pf = pp as f64;
            let r_lo = (pf * window.x0 - 0.5).ceil() as i64;
            let r_hi = (pf * window.x1 + 0.5).floor() as i64;
            let s_lo = (pf * window.y0 - 1.0).ceil() as i64;
            let s_hi = (pf * window.y1).floor() as i64;
            let mut local = Vec::new();
            for r in r_lo..=r_hi {
                for s in s_lo..=s_hi {
                    let t = r as i128 * r as i128 + s as i128 * s as i128 + s as i128;
                    if t % pp as i128 != 0 {
                        continue;
                    }
                    let (cx, cy) = (r as f64 / pf, (s as f64 + 0.5) / pf);
                    if !disk_meets(cx, cy, 0.5 / pf, window) {
                        continue;
                    }
                    let qq = 2 * t / pp as i128;
                    let c = Circle::from_coords([
                        q(2 * pp),
                        num_rational::BigRational::from_integer(BigInt::from(qq)),
                        q(2 * r),
                        q(2 * s + 1),
                    ]);
                    local.push(c);
                }
            }
            local
        })
        .collect();
    out.extend(circles);
    sort_circles(&mut out);
    Ok(out)
}

/// Circles tangent to `R̂` at `p/q ∈ [0, 1]` for `q ≤ qmax` (radius
/// `1/2q²`), and the line `Im z = 1` oriented away from them.
pub fn ford_circles(qmax: i64) -> Result<Vec<Circle>> {
    if qmax < 1 {
        return Err(Error::invalid("qmax must be ≥ 1"));
    }
    let mut out = vec![Circle::from_ints_unchecked(0, 2, 0, 1)];
    for den in 1..=qmax {
        for num in 0..=den {
            if num.gcd(&den) == 1 {
                out.push(Circle::from_ints_unchecked(2 * den * den, 2 * num * num, 2 * num * den, 1));
            }
        }
    }
    sort_circles(&mut out);
    Ok(out)
}

fn gauss(c: &ComplexQ) -> Result<GaussianInt> {
    c.to_gaussian().ok_or_else(|| Error::invalid("entry is not a Gaussian integer"))
}

/// Denominator data of the circle `M(R̂)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TangencyFamily {
    pub alpha: GaussianInt,
    pub beta: GaussianInt,
    /// `Λ = γZ + δZ`.
    pub gamma: GaussianInt,
    pub delta: GaussianInt,
    /// Signed curvature of `M(R̂)`, `2 Im(γ̄δ)` (the map has unit determinant).
    pub curvature: BigInt,
}

impl TangencyFamily {
    /// The tangency point `M(m/n) = σ/ρ` with `ρ = γm + δn ∈ Λ`.
    pub fn point(&self, m: i64, n: i64) -> (GaussianInt, GaussianInt) {
        let (mg, ng) = (GaussianInt::from(m), GaussianInt::from(n));
        (&(&self.alpha * &mg) + &(&self.beta * &ng), &(&self.gamma * &mg) + &(&self.delta * &ng))
    }

    /// Signed curvatures `2 Im(γ̄δ) + 2k·N(ρ)` of the circles tangent at a
    /// point with denominator `ρ`; `k = 0` is the circle itself. In reduced
    /// units this is `Im(γ̄δ) + k·N(ρ)`.
    pub fn curvatures(&self, rho: &GaussianInt, ks: std::ops::RangeInclusive<i64>) -> Vec<BigInt> {
        let step = BigInt::from(2) * rho.norm();
        ks.map(|k| &self.curvature + &step * k).collect()
    }
}

pub fn tangency_family(m: &MobiusMap) -> Result<TangencyFamily> {
    if m.conj {
        return Err(Error::invalid("expected an orientation-preserving map"));
    }
    if !m.is_bianchi() {
        return Err(Error::invalid("entries must be Gaussian integers with unit determinant"));
    }
    let (alpha, beta, gamma, delta) = (gauss(&m.a)?, gauss(&m.b)?, gauss(&m.c)?, gauss(&m.d)?);
    let curvature = BigInt::from(2) * (&gamma.conj() * &delta).im;
    Ok(TangencyFamily { alpha, beta, gamma, delta, curvature })
}

/// A Gaussian-rational point `u/v` on an integral circle, `u/v` in lowest
/// terms, searching denominators by norm up to `max_norm`.
pub fn gaussian_point_on(c: &Circle, max_norm: i64) -> Option<(GaussianInt, GaussianInt)> {
    let [p, qq, r, s] = c.integer_vec()?.map(|x| x.to_i128());
    let (p, qq, r, s) = (p?, qq?, r?, s?);
    if p == 0 {
        // a horizontal line hits n·i; other lines are not Schmidt lines
        if r == 0 && s != 0 && qq % (2 * s) == 0 {
            return Some((GaussianInt::new(0i64, (qq / (2 * s)) as i64), GaussianInt::one()));
        }
        return None;
    }
    let lim = (max_norm as f64).sqrt() as i64 + 1;
    let mut vs: Vec<(i64, i64)> = Vec::new();
    for a in 0..=lim {
        for b in 0..=lim {
            let n = a * a + b * b;
            if n >= 1 && n <= max_norm && (a > 0 || b == 0) && !(a == 0 && b == 0) {
                vs.push((a, b));
            }
        }
    }
    vs.sort_by_key(|&(a, b)| (a * a + b * b, a, b));
    for (va, vb) in vs {
        let (va, vb) = (va as i128, vb as i128);
        // u lies on the circle of centre w·v/p and radius |v|/p, w = r + si
        let (wr, wi) = (r * va - s * vb, r * vb + s * va);
        let nv = va * va + vb * vb;
        let rad = (nv as f64).sqrt() / p.abs() as f64;
        let (cx, cy) = (wr as f64 / p as f64, wi as f64 / p as f64);
        for ux in ((cx - rad).floor() as i128 - 1)..=((cx + rad).ceil() as i128 + 1) {
            for uy in ((cy - rad).floor() as i128 - 1)..=((cy + rad).ceil() as i128 + 1) {
                // p|u|² − 2 Re(u·conj(wv)) + q|v|² = 0
                let val = p * (ux * ux + uy * uy) - 2 * (ux * wr + uy * wi) + qq * nv;
                if val != 0 {
                    continue;
                }
                let u = GaussianInt::new(ux as i64, uy as i64);
                let v = GaussianInt::new(va as i64, vb as i64);
                let (g, _, _) = gaussian_xgcd(&u, &v);
                if g.is_unit() {
                    return Some((u, v));
                }
            }
        }
    }
    None
}

/// An explicit `M ∈ PSL₂(Z[i])` with `M(R̂) = C` as oriented circles, for a
/// circle satisfying the lattice criterion. A circle through 0 (so `q = 0`)
/// is the image of `R̂` under `(0, −s + ir; 1, ip/2)`, whose determinant
/// `s − ir` is a unit. Otherwise a Gaussian point `u/v` on `C` is moved to
/// 0 by `N = (v, −u; x, y)` with `vy + ux = 1`, and `M = N⁻¹·M'`.
pub fn realize(c: &Circle) -> Result<MobiusMap> {
    if !is_schmidt_circle(c) {
        return Err(Error::invalid(format!("{c} fails the lattice criterion")));
    }
    let through_zero = |c: &Circle| -> Result<MobiusMap> {
        let [p, _, r, s] = c.integer_vec().expect("integral").map(|x| x.to_i64().ok_or(Error::Overflow("realize")));
        let (p, r, s) = (p?, r?, s?);
        MobiusMap::from_ints([(0, 0), (-s, r), (1, 0), (0, p / 2)], false)
    };
    let m = if c.q.is_zero() {
        through_zero(c)?
    } else {
        let bound = c.p.abs().to_integer().to_i64().ok_or(Error::Overflow("realize"))? + 2;
        let (u, v) = gaussian_point_on(c, bound.max(2)).ok_or_else(|| Error::invariant(format!("no Gaussian point on {c}")))?;
        let (g, s, t) = gaussian_xgcd(&v, &u);
        // v·s + u·t = g, a unit
        let ginv = GaussianInt::one().div_exact(&g).ok_or_else(|| Error::invariant("gcd is not a unit"))?;
        let (y, x) = (&s * &ginv, &t * &ginv);
        let n = MobiusMap::from_gaussian(&v, &(-u), &x, &y, false)?;
        let moved = mobius_apply_circle(&n, c)?;
        if !moved.q.is_zero() {
            return Err(Error::invariant("translated circle misses 0"));
        }
        n.inverse().compose(&through_zero(&moved)?)
    };
    if !m.is_bianchi() {
        return Err(Error::invariant("constructed matrix left PSL₂(Z[i])"));
    }
    let img = mobius_image_of_line(&m)?;
    if &img != c {
        return Err(Error::invariant(format!("constructed matrix maps R̂ to {img}, not {c}")));
    }
    Ok(m)
}

/// Two distinct circles cross at two points iff `|⟨C, D⟩| < 1`.
pub fn properly_intersect(a: &Circle, b: &Circle) -> bool {
    let ip = crate::circlespace::inner_product(a, b).abs();
    ip < q(1)
}
