//! Orbits of a root quadruple under the Apollonian group: curvature counts,
//! root reduction, the growth exponent and exact circle geometry.
//!
//! Every circle of a packing other than the four root circles is created by
//! exactly one reduced word in the generators, so the enumeration is a plain
//! tree walk that never reapplies the generator it arrived by. Along the
//! tree the new curvature always exceeds the one it replaces (children are
//! inscribed in smaller and smaller interstices); this is checked at every
//! node and a violation aborts with [`Error::Invariant`].

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::circlespace::{self, format_quad, q, rational_sqrt, Circle, DescartesQuadruple, Rational};
use crate::error::{Error, Result};

/// Largest curvature bound accepted by the counting routines.
pub const MAX_BOUND: i64 = 100_000_000;

/// Depth cap for [`super_orbit`].
pub const MAX_SUPER_DEPTH: usize = 8;

fn swap_i64(v: &[i64; 4], i: usize) -> Option<[i64; 4]> {
    let mut others: i64 = 0;
    for (k, x) in v.iter().enumerate() {
        if k != i {
            others = others.checked_add(*x)?;
        }
    }
    let mut out = *v;
    out[i] = others.checked_mul(2)?.checked_sub(v[i])?;
    Some(out)
}

fn sum_decrease(v: &[BigInt; 4], i: usize) -> BigInt {
    // old sum − new sum = 4vᵢ − 2Σ
    let s: BigInt = v.iter().sum();
    BigInt::from(4) * &v[i] - BigInt::from(2) * s
}

/// Greedy root reduction: apply the swap with the largest decrease of the
/// curvature sum (lowest index on ties) until no swap decreases it.
pub fn reduce_to_root(quad: &DescartesQuadruple) -> Result<DescartesQuadruple> {
    if !circlespace::descartes_form(&quad.curvatures).is_zero() {
        return Err(Error::NotDescartes(format_quad(&quad.curvatures)));
    }
    let mut cur = quad.clone();
    for _ in 0..1_000_000 {
        let mut best: Option<(usize, BigInt)> = None;
        for i in 0..4 {
            let d = sum_decrease(&cur.curvatures, i);
            if d.is_positive() && best.as_ref().map_or(true, |(_, b)| d > *b) {
                best = Some((i, d));
            }
        }
        match best {
            None => return Ok(cur),
            Some((i, _)) => cur = cur.swap(i),
        }
    }
    Err(Error::CapExceeded { what: "root reduction steps", limit: 1_000_000 })
}

pub fn is_root(quad: &[i64; 4]) -> bool {
    let v = quad.map(BigInt::from);
    circlespace::descartes_form(&v).is_zero() && (0..4).all(|i| !sum_decrease(&v, i).is_positive())
}

/// Curvature counts of a packing up to a bound.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackingOrbit {
    pub root: [i64; 4],
    pub bound: i64,
    /// `counts[k]` circles of curvature `k`, for `0 ≤ k ≤ bound`.
    counts: Vec<u32>,
    /// The bounding circle, the only one with negative curvature.
    negative: Option<(i64, u64)>,
}

impl PackingOrbit {
    pub fn count(&self, k: i64) -> u64 {
        if k < 0 {
            return match self.negative {
                Some((c, n)) if c == k => n,
                _ => 0,
            };
        }
        self.counts.get(k as usize).map_or(0, |&c| c as u64)
    }

    /// Number of circles with curvature `≤ x`.
    pub fn count_up_to(&self, x: i64) -> u64 {
        let neg = match self.negative {
            Some((c, n)) if c <= x => n,
            _ => 0,
        };
        if x < 0 {
            return neg;
        }
        let top = (x.min(self.bound) as usize) + 1;
        neg + self.counts[..top].iter().map(|&c| c as u64).sum::<u64>()
    }

    pub fn total(&self) -> u64 {
        self.count_up_to(self.bound)
    }

    /// `(curvature, count)` in ascending order, zero counts omitted.
    pub fn multiset(&self) -> BTreeMap<i64, u64> {
        let mut m = BTreeMap::new();
        if let Some((c, n)) = self.negative {
            m.insert(c, n);
        }
        for (k, &c) in self.counts.iter().enumerate() {
            if c > 0 {
                m.insert(k as i64, c as u64);
            }
        }
        m
    }

    /// Sorted list with multiplicity.
    pub fn curvatures(&self) -> Vec<i64> {
        self.multiset().into_iter().flat_map(|(k, n)| std::iter::repeat(k).take(n as usize)).collect()
    }

    /// Distinct curvatures that occur.
    pub fn present(&self) -> impl Iterator<Item = i64> + '_ {
        self.negative.iter().map(|&(c, _)| c).chain(self.counts.iter().enumerate().filter(|(_, &c)| c > 0).map(|(k, _)| k as i64))
    }

    pub fn residues(&self, m: i64) -> BTreeSet<i64> {
        self.present().map(|k| k.rem_euclid(m)).collect()
    }

    pub fn contains(&self, k: i64) -> bool {
        self.count(k) > 0
    }
}

fn check_root(root: &[i64; 4], n: i64) -> Result<()> {
    if !circlespace::descartes_form(&root.map(BigInt::from)).is_zero() {
        return Err(Error::NotDescartes(format_quad(root)));
    }
    if !is_root(root) {
        return Err(Error::NotReduced(format_quad(root)));
    }
    if root.iter().any(|&x| x == 0) {
        return Err(Error::Unbounded("a packing bounded by a line has infinitely many circles of each curvature".into()));
    }
    if n > MAX_BOUND {
        return Err(Error::CapExceeded { what: "curvature bound", limit: MAX_BOUND as u64 });
    }
    if n < *root.iter().max().expect("four entries") {
        return Err(Error::invalid("bound is smaller than a root curvature"));
    }
    Ok(())
}

fn monotone_violation(parent: &[i64; 4], child: &[i64; 4], j: usize) -> Error {
    Error::invariant(format!(
        "swap {j} of {} gave {} (new curvature not larger)",
        format_quad(parent),
        format_quad(child)
    ))
}

/// Children of a non-root node `(quad, arrived_by)` with curvature `≤ n`.
fn children(quad: &[i64; 4], last: usize, n: i64) -> Result<Vec<([i64; 4], usize)>> {
    let mut out = Vec::with_capacity(3);
    for j in 0..4 {
        if j == last {
            continue;
        }
        let c = swap_i64(quad, j).ok_or(Error::Overflow("packing swap"))?;
        if c[j] <= quad[j] {
            return Err(monotone_violation(quad, &c, j));
        }
        if c[j] <= n {
            out.push((c, j));
        }
    }
    Ok(out)
}

/// Nodes at depth one and two from the root, with curvature `≤ n`.
fn frontier(root: &[i64; 4], n: i64) -> Result<(Vec<([i64; 4], usize)>, Vec<([i64; 4], usize)>)> {
    let mut d1 = Vec::new();
    for i in 0..4 {
        let c = swap_i64(root, i).ok_or(Error::Overflow("packing swap"))?;
        // a root may reproduce an equal curvature (a mirror-image circle)
        if c[i] < root[i] {
            return Err(monotone_violation(root, &c, i));
        }
        if c[i] <= n {
            d1.push((c, i));
        }
    }
    let mut d2 = Vec::new();
    for (c, i) in &d1 {
        d2.extend(children(c, *i, n)?);
    }
    Ok((d1, d2))
}

fn walk(start: ([i64; 4], usize), n: i64, counts: &mut [u32]) -> Result<()> {
    let mut stack = vec![start];
    while let Some((quad, last)) = stack.pop() {
        for (c, j) in children(&quad, last, n)? {
            counts[c[j] as usize] += 1;
            stack.push((c, j));
        }
    }
    Ok(())
}

/// All circles of the packing with curvature `≤ n`, counted with
/// multiplicity. The root must be reduced and contain no zero curvature.
pub fn enumerate(root: [i64; 4], n: i64) -> Result<PackingOrbit> {
    check_root(&root, n)?;
    let mut counts = vec![0u32; n as usize + 1];
    let mut negative = None;
    let mut add = |k: i64, counts: &mut Vec<u32>| {
        if k < 0 {
            let e: &mut Option<(i64, u64)> = &mut negative;
            match e {
                Some((c, m)) if *c == k => *m += 1,
                _ => *e = Some((k, 1)),
            }
        } else {
            counts[k as usize] += 1;
        }
    };
    for &k in &root {
        add(k, &mut counts);
    }
    let (d1, d2) = frontier(&root, n)?;
    for (c, i) in d1.iter().chain(d2.iter()) {
        add(c[*i], &mut counts);
    }
    let len = counts.len();
    let sub = d2
        .into_par_iter()
        .try_fold(
            || vec![0u32; len],
            |mut acc, node| {
                walk(node, n, &mut acc)?;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(
            || vec![0u32; len],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    for (x, y) in counts.iter_mut().zip(sub) {
        *x += y;
    }
    Ok(PackingOrbit { root, bound: n, counts, negative })
}

/// Curvatures (sorted, with multiplicity, `≤ n`) of the circles tangent
/// to root circle `k`, read off the orbit tree: a circle created while slot
/// `k` still holds the original circle is tangent to it, and every circle
/// tangent to it arises this way.
pub fn tangent_to_root_circle(root: [i64; 4], n: i64, k: usize) -> Result<Vec<i64>> {
    check_root(&root, n)?;
    if k > 3 {
        return Err(Error::invalid("root circle index must be 0..=3"));
    }
    let mut out: Vec<i64> = (0..4).filter(|&j| j != k && root[j] <= n).map(|j| root[j]).collect();
    let mut stack: Vec<([i64; 4], Option<usize>)> = vec![(root, None)];
    while let Some((quad, last)) = stack.pop() {
        for j in 0..4 {
            if Some(j) == last {
                continue;
            }
            let c = swap_i64(&quad, j).ok_or(Error::Overflow("packing swap"))?;
            let ok = if last.is_none() { c[j] >= quad[j] } else { c[j] > quad[j] };
            if !ok {
                return Err(monotone_violation(&quad, &c, j));
            }
            if c[j] > n {
                continue;
            }
            if j != k {
                out.push(c[j]);
                stack.push((c, Some(j)));
            }
            // once slot k is replaced the subtree no longer touches circle k
        }
    }
    out.sort_unstable();
    Ok(out)
}

/// Least-squares slope of `log N(X)` against `log X` at 20 logarithmically
/// spaced `X` in `[n/100, n]`.
pub fn count_exponent(root: [i64; 4], n: i64) -> Result<f64> {
    if n < 10_000 {
        return Err(Error::invalid("count_exponent needs n ≥ 10⁴"));
    }
    let orbit = enumerate(root, n)?;
    Ok(fit_exponent(&orbit, 20))
}

pub fn fit_exponent(orbit: &PackingOrbit, samples: usize) -> f64 {
    let n = orbit.bound as f64;
    let pts: Vec<(f64, f64)> = (0..samples)
        .map(|k| {
            let x = (n / 100.0) * 100f64.powf(k as f64 / (samples - 1) as f64);
            let x = x.floor().min(n);
            (x.ln(), (orbit.count_up_to(x as i64) as f64).ln())
        })
        .collect();
    let m = pts.len() as f64;
    let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
    let (mx, my) = (sx / m, sy / m);
    let (num, den) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + (x - mx) * (y - my), b + (x - mx) * (x - mx)));
    num / den
}

// ---------------------------------------------------------------------------
// Geometry

/// Axis-parallel rectangle `[x0, x1] × [y0, y1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Window {
    pub x0: f64,
    pub y0: f64,
    pub x1: f64,
    pub y1: f64,
}

impl Window {
    pub fn new(x0: f64, y0: f64, x1: f64, y1: f64) -> Result<Self> {
        if !(x0 < x1 && y0 < y1) {
            return Err(Error::invalid("window needs x0 < x1 and y0 < y1"));
        }
        Ok(Window { x0, y0, x1, y1 })
    }

    fn corners(&self) -> [(f64, f64); 4] {
        [(self.x0, self.y0), (self.x1, self.y0), (self.x0, self.y1), (self.x1, self.y1)]
    }

    fn dist_to(&self, x: f64, y: f64) -> f64 {
        let dx = (self.x0 - x).max(0.0).max(x - self.x1);
        let dy = (self.y0 - y).max(0.0).max(y - self.y1);
        dx.hypot(dy)
    }
}

/// `[p, q, r, s]` scaled by a common denominator.
type IVec = [i128; 4];

fn form_f64(v: &IVec, scale: f64, x: f64, y: f64) -> f64 {
    let [p, qq, r, s] = v.map(|t| t as f64 / scale);
    p * (x * x + y * y) - 2.0 * (r * x + s * y) + qq
}

/// Whether the closed disk (or half plane) bounded by `v` meets the window.
/// For a negatively oriented circle the geometric disk is used.
fn region_meets(v: &IVec, scale: f64, w: &Window) -> bool {
    let eps = 1e-9;
    if v[0] == 0 {
        // a line meets the rectangle iff the corners are not strictly on one side
        let vals = w.corners().map(|(x, y)| form_f64(v, scale, x, y));
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        return lo <= eps && hi >= -eps;
    }
    let p = v[0] as f64;
    let (cx, cy) = (v[2] as f64 / p, v[3] as f64 / p);
    let rad = (scale / p).abs();
    w.dist_to(cx, cy) <= rad * (1.0 + eps) + eps
}

/// Whether the subtree below a node whose new circle sits in slot `i` can
/// still reach the window. The subtree lives in the interstice of the other
/// three circles, which lies on one side of their dual circle.
fn subtree_meets(quad: &[IVec; 4], i: usize, scale: f64, w: &Window) -> bool {
    let mut dual = [0i128; 4];
    for (k, c) in quad.iter().enumerate() {
        for t in 0..4 {
            // twice the dual circle; only its zero set is used
            dual[t] += if k == i { -c[t] } else { c[t] };
        }
    }
    let new = &quad[i];
    if new[0] == 0 {
        return true;
    }
    let (nx, ny) = (new[2] as f64 / new[0] as f64, new[3] as f64 / new[0] as f64);
    let side = form_f64(&dual, scale, nx, ny);
    if dual[0] == 0 {
        return w.corners().iter().any(|&(x, y)| form_f64(&dual, scale, x, y) * side.signum() >= -1e-9);
    }
    let inside = side * (dual[0] as f64).signum() < 0.0;
    if !inside {
        return true;
    }
    let p = dual[0] as f64;
    let (cx, cy) = (dual[2] as f64 / p, dual[3] as f64 / p);
    // |2w|² norm is 4, so the radius of w is 2·scale/|2p|
    let rad = (2.0 * scale / p).abs();
    w.dist_to(cx, cy) <= rad * (1.0 + 1e-9) + 1e-9
}

fn to_ivecs(circles: &[Circle; 4]) -> Result<(Vec<IVec>, BigInt)> {
    let lcm = circles.iter().flat_map(|c| c.coords()).fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let lq = BigRational::from_integer(lcm.clone());
    let mut out = Vec::new();
    for c in circles {
        let v = c.coords().map(|x| (x * &lq).to_integer().to_i128());
        if v.iter().any(|x| x.is_none()) {
            return Err(Error::Overflow("circle coordinates"));
        }
        out.push(v.map(|x| x.unwrap()));
    }
    Ok((out, lcm))
}

fn from_ivec(v: &IVec, lcm: &BigInt) -> Circle {
    Circle::from_coords(v.map(|x| BigRational::new(BigInt::from(x), lcm.clone())))
}

fn swap_ivec(quad: &[IVec; 4], i: usize) -> Option<[IVec; 4]> {
    let mut out = *quad;
    for t in 0..4 {
        let mut others: i128 = 0;
        for (k, c) in quad.iter().enumerate() {
            if k != i {
                others = others.checked_add(c[t])?;
            }
        }
        out[i][t] = others.checked_mul(2)?.checked_sub(quad[i][t])?;
    }
    Some(out)
}

/// Scaled tangency check: `⟨u, v⟩ = −1` becomes `2(r r' + s s') − (p q' + p' q) = −2L²`.
fn tangent_scaled(u: &IVec, v: &IVec, l2: i128) -> Option<bool> {
    let a = u[2].checked_mul(v[2])?.checked_add(u[3].checked_mul(v[3])?)?.checked_mul(2)?;
    let b = u[0].checked_mul(v[1])?.checked_add(v[0].checked_mul(u[1])?)?;
    Some(a.checked_sub(b)? == -2 * l2)
}

pub(crate) fn sort_circles(v: &mut [Circle]) {
    v.sort_by(|a, b| {
        let key = |c: &Circle| {
            let (x, y) = if c.p.is_zero() { (c.r.clone(), c.s.clone()) } else { (&c.r / &c.p, &c.s / &c.p) };
            (c.p.clone(), x, y, c.q.clone())
        };
        key(a).cmp(&key(b))
    });
}

/// Circles of the packing generated by four mutually tangent seed circles
/// with curvature `≤ n` meeting the window. Each tangency created along the
/// way is checked exactly.
pub fn enumerate_geometry(seed: &[Circle; 4], n: i64, window: &Window) -> Result<Vec<Circle>> {
    DescartesQuadruple::from_circles(seed.clone())?;
    let (vs, lcm) = to_ivecs(seed)?;
    let l = lcm.to_i128().ok_or(Error::Overflow("common denominator"))?;
    let l2 = l.checked_mul(l).ok_or(Error::Overflow("common denominator"))?;
    let scale = l as f64;
    let nl = (n as i128).checked_mul(l).ok_or(Error::Overflow("bound"))?;
    let root: [IVec; 4] = [vs[0], vs[1], vs[2], vs[3]];
    let mut out: Vec<IVec> = root.iter().filter(|v| region_meets(v, scale, window)).cloned().collect();
    let mut stack: Vec<([IVec; 4], Option<usize>)> = vec![(root, None)];
    let mut nodes: u64 = 0;
    while let Some((quad, last)) = stack.pop() {
        for j in 0..4 {
            if Some(j) == last {
                continue;
            }
            let c = swap_ivec(&quad, j).ok_or(Error::Overflow("geometric swap"))?;
            // between two parallel lines equal curvatures repeat forever; the window bounds that walk
            let strip = quad.iter().filter(|v| v[0] == 0).count() >= 2;
            let grew = if last.is_none() || strip { c[j][0] >= quad[j][0] } else { c[j][0] > quad[j][0] };
            if !grew {
                return Err(Error::invariant("new curvature not larger along the tree"));
            }
            if c[j][0] > nl {
                continue;
            }
            for k in 0..4 {
                if k != j && !tangent_scaled(&c[j], &c[k], l2).ok_or(Error::Overflow("tangency check"))? {
                    return Err(Error::invariant("swap produced a non-tangent circle"));
                }
            }
            if !subtree_meets(&c, j, scale, window) {
                continue;
            }
            nodes += 1;
            if nodes > 50_000_000 {
                return Err(Error::CapExceeded { what: "geometry nodes", limit: 50_000_000 });
            }
            if region_meets(&c[j], scale, window) {
                out.push(c[j]);
            }
            stack.push((c, Some(j)));
        }
    }
    let mut circles: Vec<Circle> = out.iter().map(|v| from_ivec(v, &lcm)).collect();
    sort_circles(&mut circles);
    Ok(circles)
}

fn solve3(m: [[Rational; 3]; 3], rhs: [Rational; 3]) -> Option<[Rational; 3]> {
    let det = |m: &[[Rational; 3]; 3]| {
        &m[0][0] * (&m[1][1] * &m[2][2] - &m[1][2] * &m[2][1]) - &m[0][1] * (&m[1][0] * &m[2][2] - &m[1][2] * &m[2][0])
            + &m[0][2] * (&m[1][0] * &m[2][1] - &m[1][1] * &m[2][0])
    };
    let d = det(&m);
    if d.is_zero() {
        return None;
    }
    let mut out: [Rational; 3] = Default::default();
    for (c, o) in out.iter_mut().enumerate() {
        let mut mc = m.clone();
        for r in 0..3 {
            mc[r][c] = rhs[r].clone();
        }
        *o = det(&mc) / &d;
    }
    Some(out)
}

/// The circle of curvature `p` tangent to three mutually tangent circles,
/// on the side fixed by `upper` when the three centres are collinear.
fn fourth_circle(known: [&Circle; 3], p: Rational, upper: bool) -> Result<Circle> {
    // ⟨D, X⟩ = −1 is linear in (q, r, s) once p is fixed
    let rows: [[Rational; 3]; 3] = known.map(|x| [-&x.p / q(2), x.r.clone(), x.s.clone()]);
    let rhs: [Rational; 3] = known.map(|x| q(-1) + &p * &x.q / q(2));
    if let Some([qq, r, s]) = solve3(rows.clone(), rhs.clone()) {
        return Circle::new(p, qq, r, s);
    }
    if known.iter().all(|x| x.s.is_zero()) {
        let (a, b) = (&rows[0], &rows[1]);
        let det = &a[0] * &b[1] - &a[1] * &b[0];
        let (a, b, ra, rb) = if !det.is_zero() { (a, b, &rhs[0], &rhs[1]) } else { (&rows[0], &rows[2], &rhs[0], &rhs[2]) };
        let det = &a[0] * &b[1] - &a[1] * &b[0];
        if det.is_zero() {
            return Err(Error::invariant("degenerate seed configuration"));
        }
        let qq = (ra * &b[1] - &a[1] * rb) / &det;
        let r = (&a[0] * rb - ra * &b[0]) / &det;
        let s2 = q(1) + &p * &qq - &r * &r;
        let s = rational_sqrt(&s2).ok_or_else(|| Error::NotRepresentable("fourth circle has an irrational centre".into()))?;
        return Circle::new(p, qq, r, if upper { s } else { -s });
    }
    Err(Error::invariant("degenerate seed configuration"))
}

/// An exact placement of the root quadruple: the bounding circle centred at
/// 0 and a second circle centred on the positive real axis. Strip roots
/// `(0, 0, k, k)` use the lines `Im z = 0` and `Im z = 2/k`. Fails with
/// [`Error::NotRepresentable`] if no ordering gives rational centres.
pub fn root_circles(root: [i64; 4]) -> Result<[Circle; 4]> {
    DescartesQuadruple::from_i64(root)?;
    if !is_root(&root) {
        return Err(Error::NotReduced(format_quad(&root)));
    }
    let mut idx: Vec<usize> = (0..4).collect();
    idx.sort_by_key(|&i| root[i]);
    let k = |i: usize| q(root[i]);
    let mut out: [Option<Circle>; 4] = Default::default();
    if root[idx[0]] == 0 && root[idx[1]] == 0 {
        let kk = root[idx[2]];
        let h = BigRational::new(2.into(), kk.into());
        out[idx[0]] = Some(Circle::horizontal_line(q(0), false));
        out[idx[1]] = Some(Circle::horizontal_line(h.clone(), true));
        let rad = BigRational::new(1.into(), kk.into());
        out[idx[2]] = Some(Circle::from_center_radius(q(0), rad.clone(), rad.clone(), true)?);
        out[idx[3]] = Some(Circle::from_center_radius(h, rad.clone(), rad, true)?);
        return Ok(out.map(|c| c.expect("all placed")));
    }
    if root[idx[0]] >= 0 {
        return Err(Error::invalid("a root with a single line or no bounding circle is not supported"));
    }
    let a = idx[0];
    let big_r = BigRational::new(1.into(), (-root[a]).into());
    let outer = Circle::from_center_radius(q(0), q(0), big_r.clone(), false)?;
    for &b in &idx[1..] {
        for &c in &idx[1..] {
            if b == c {
                continue;
            }
            let d = *idx[1..].iter().find(|&&x| x != b && x != c).expect("third");
            let rb = k(b).recip();
            let rc = k(c).recip();
            let xb = &big_r - &rb;
            if xb.is_zero() {
                continue;
            }
            let circ_b = Circle::from_center_radius(xb.clone(), q(0), rb.clone(), true)?;
            let z2 = (&big_r - &rc) * (&big_r - &rc);
            let w2 = (&rb + &rc) * (&rb + &rc);
            let x = (&z2 - &w2 + &xb * &xb) / (q(2) * &xb);
            let Some(y) = rational_sqrt(&(&z2 - &x * &x)) else { continue };
            let circ_c = Circle::from_center_radius(x, y, rc, true)?;
            let circ_d = fourth_circle([&outer, &circ_b, &circ_c], k(d), true)?;
            out[a] = Some(outer.clone());
            out[b] = Some(circ_b);
            out[c] = Some(circ_c);
            out[d] = Some(circ_d);
            let placed = out.clone().map(|c| c.expect("all placed"));
            DescartesQuadruple::from_circles(placed.clone())?;
            return Ok(placed);
        }
    }
    Err(Error::NotRepresentable(format!("no rational placement of {}", format_quad(&root))))
}

// ---------------------------------------------------------------------------
// Super-Apollonian words

/// Letters `0..4` are `S_i`, letters `4..8` are `S_i^⊥`. A word is in normal
/// form when no letter repeats and no `S_i^⊥` is directly followed by an
/// `S_j` with `j ≠ i` (those commute and are written the other way round).
pub fn normal_form_allows(prev: Option<u8>, next: u8) -> bool {
    match prev {
        None => true,
        Some(p) if p == next => false,
        Some(p) if p >= 4 && next < 4 => p - 4 == next,
        _ => true,
    }
}

/// Number of normal-form words of each length `0..=d`.
pub fn normal_form_counts(d: usize) -> Vec<u64> {
    // by last letter class: none / S / S^⊥, and for S^⊥ which index
    let mut last = [0u64; 9];
    last[8] = 1;
    let mut out = vec![1];
    for _ in 0..d {
        let mut next = [0u64; 9];
        for (p, &cnt) in last.iter().enumerate() {
            if cnt == 0 {
                continue;
            }
            for l in 0..8u8 {
                let prev = if p == 8 { None } else { Some(p as u8) };
                if normal_form_allows(prev, l) {
                    next[l as usize] += cnt;
                }
            }
        }
        last = next;
        out.push(last.iter().sum());
    }
    out
}

fn apply_letter(quad: &[IVec; 4], letter: u8) -> Option<[IVec; 4]> {
    if letter < 4 {
        return swap_ivec(quad, letter as usize);
    }
    // inversion in circle i: v_j ↦ v_j + 2v_i, v_i ↦ −v_i
    let i = (letter - 4) as usize;
    let mut out = *quad;
    for (j, row) in out.iter_mut().enumerate() {
        for t in 0..4 {
            row[t] = if j == i { -quad[i][t] } else { quad[j][t].checked_add(quad[i][t].checked_mul(2)?)? };
        }
    }
    Some(out)
}

/// Circles (one orientation each, deduplicated, sorted) appearing in the
/// configurations reached from `base` by normal-form words of length `≤ d`
/// in the Apollonian generators and their duals.
pub fn super_orbit(base: &[Circle; 4], d: usize) -> Result<Vec<Circle>> {
    if d > MAX_SUPER_DEPTH {
        return Err(Error::CapExceeded { what: "super-Apollonian word length", limit: MAX_SUPER_DEPTH as u64 });
    }
    DescartesQuadruple::from_circles(base.clone())?;
    let (vs, lcm) = to_ivecs(base)?;
    let root: [IVec; 4] = [vs[0], vs[1], vs[2], vs[3]];
    let mut seen: HashSet<IVec> = HashSet::new();
    let canon = |v: &IVec| -> IVec {
        let flip = if v[0] != 0 { v[0] < 0 } else if v[3] != 0 { v[3] > 0 } else { v[2] > 0 };
        if flip {
            v.map(|x| -x)
        } else {
            *v
        }
    };
    let mut stack: Vec<([IVec; 4], Option<u8>, usize)> = vec![(root, None, 0)];
    while let Some((quad, prev, len)) = stack.pop() {
        for v in &quad {
            seen.insert(canon(v));
        }
        if len == d {
            continue;
        }
        for l in 0..8u8 {
            if normal_form_allows(prev, l) {
                let next = apply_letter(&quad, l).ok_or(Error::Overflow("super-Apollonian word"))?;
                stack.push((next, Some(l), len + 1));
            }
        }
    }
    let mut out: Vec<Circle> = seen.iter().map(|v| from_ivec(v, &lcm)).collect();
    sort_circles(&mut out);
    Ok(out)
}
