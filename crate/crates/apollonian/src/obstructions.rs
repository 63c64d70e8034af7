//! Local and reciprocity obstructions for integral packings.
//!
//! Reducing a packing mod 24 leaves one of six residue sets (the packing's
//! type `(n, k)`). On top of that, quadratic and quartic reciprocity force
//! whole families `u·x²`, `u·x⁴` out of some packings; which families depend
//! on the characters `χ₂` and `χ₄`. Both characters are computed here by
//! sampling tangent pairs and insisting the samples agree, since a general
//! closed form is fiddly.
//!
//! The residue graph mod `m` (ordered quadruples mod `m`, edges the four
//! swaps) gives the expander data, and the matrix closures of the
//! generators mod `p^m` give the strong-approximation comparison.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::fmt;

use nalgebra::{DMatrix, SymmetricEigen};
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::circlespace::{dual_generator_matrix, format_quad, generator_matrix};
use crate::error::{Error, Result};
use crate::numtheory::{is_prime_u64, kronecker_i64, quartic_symbol, two_squares_u64, GaussianInt};
use crate::packing;

/// The six admissible residue sets mod 24, keyed by `(n, k)`.
pub const ADMISSIBLE: [((u8, u8), [u8; 8], usize); 6] = [
    ((6, 1), [0, 1, 4, 9, 12, 16, 0, 0], 6),
    ((6, 5), [0, 5, 8, 12, 20, 21, 0, 0], 6),
    ((6, 13), [0, 4, 12, 13, 16, 21, 0, 0], 6),
    ((6, 17), [0, 8, 9, 12, 17, 20, 0, 0], 6),
    ((8, 7), [3, 6, 7, 10, 15, 18, 19, 22], 8),
    ((8, 11), [2, 3, 6, 11, 14, 15, 18, 23], 8),
];

pub fn admissible_set(n: u8, k: u8) -> Option<BTreeSet<i64>> {
    ADMISSIBLE.iter().find(|(t, _, _)| *t == (n, k)).map(|(_, r, len)| r[..*len].iter().map(|&x| x as i64).collect())
}

/// `(n, k)` together with the characters that decide the obstruction row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PackingType {
    pub n: u8,
    pub k: u8,
    pub chi2: i8,
    /// Only for types `(6, 1)` and `(6, 17)` with `χ₂ = 1`.
    pub chi4: Option<i8>,
}

impl PackingType {
    pub fn chi4_defined(n: u8, k: u8) -> bool {
        (n, k) == (6, 1) || (n, k) == (6, 17)
    }
}

impl fmt::Display for PackingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.chi4 {
            Some(c4) => write!(f, "({}, {}, {}, {})", self.n, self.k, self.chi2, c4),
            None => write!(f, "({}, {}, {})", self.n, self.k, self.chi2),
        }
    }
}

/// `{u·x²}` or `{u·x⁴}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Family {
    pub u: u32,
    pub power: u32,
}

impl Family {
    pub fn contains(&self, v: i64) -> bool {
        if v <= 0 || v % self.u as i64 != 0 {
            return false;
        }
        let w = (v / self.u as i64) as u64;
        let r = (w as f64).powf(1.0 / self.power as f64).round() as u64;
        (r.saturating_sub(1)..=r + 1).any(|x| x.checked_pow(self.power) == Some(w))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sup = if self.power == 2 { "²" } else { "⁴" };
        if self.u == 1 {
            write!(f, "n{sup}")
        } else {
            write!(f, "{}n{sup}", self.u)
        }
    }
}

fn fams(quad: &[u32], quart: &[u32]) -> Vec<Family> {
    quad.iter().map(|&u| Family { u, power: 2 }).chain(quart.iter().map(|&u| Family { u, power: 4 })).collect()
}

/// The obstruction row for a fully determined type.
pub fn obstruction_families(t: &PackingType) -> Result<Vec<Family>> {
    let need4 = PackingType::chi4_defined(t.n, t.k) && t.chi2 == 1;
    if need4 && t.chi4.is_none() {
        return Err(Error::Undefined(format!("type ({}, {}, 1) needs χ₄", t.n, t.k)));
    }
    let out = match (t.n, t.k, t.chi2, t.chi4) {
        (6, 1, 1, Some(1)) => fams(&[], &[]),
        (6, 1, 1, Some(-1)) => fams(&[], &[1, 4, 9, 36]),
        (6, 1, -1, _) => fams(&[1, 2, 3, 6], &[]),
        (6, 5, 1, _) => fams(&[2, 3], &[]),
        (6, 5, -1, _) => fams(&[1, 6], &[]),
        (6, 13, 1, _) => fams(&[2, 6], &[]),
        (6, 13, -1, _) => fams(&[1, 3], &[]),
        (6, 17, 1, Some(1)) => fams(&[3, 6], &[9, 36]),
        (6, 17, 1, Some(-1)) => fams(&[3, 6], &[1, 4]),
        (6, 17, -1, _) => fams(&[1, 2], &[]),
        (8, 7, 1, _) => fams(&[3, 6], &[]),
        (8, 7, -1, _) => fams(&[2], &[]),
        (8, 11, 1, _) => fams(&[], &[]),
        (8, 11, -1, _) => fams(&[2, 3, 6], &[]),
        _ => return Err(Error::invalid(format!("no obstruction row for {t}"))),
    };
    Ok(out)
}

// ---------------------------------------------------------------------------
// Residue graphs

/// Ordered quadruples mod `m` reachable from a root under the four swaps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueGraph {
    pub modulus: u32,
    pub vertices: Vec<[u32; 4]>,
    /// `adj[v][i]` is the image of `v` under swap `i`.
    pub adj: Vec<[usize; 4]>,
}

pub const MAX_GRAPH_VERTICES: usize = 2_000_000;

impl ResidueGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Union of the coordinates over all vertices.
    pub fn residues(&self) -> BTreeSet<i64> {
        self.vertices.iter().flat_map(|v| v.iter().map(|&x| x as i64)).collect()
    }

    pub fn disjoint_union(&self, other: &ResidueGraph) -> ResidueGraph {
        let off = self.len();
        let mut g = self.clone();
        g.vertices.extend(other.vertices.iter().cloned());
        g.adj.extend(other.adj.iter().map(|a| a.map(|x| x + off)));
        g
    }

    pub fn components(&self) -> Vec<usize> {
        let mut comp = vec![usize::MAX; self.len()];
        let mut c = 0;
        for s in 0..self.len() {
            if comp[s] != usize::MAX {
                continue;
            }
            comp[s] = c;
            let mut q = vec![s];
            while let Some(v) = q.pop() {
                for &w in &self.adj[v] {
                    if comp[w] == usize::MAX {
                        comp[w] = c;
                        q.push(w);
                    }
                }
            }
            c += 1;
        }
        comp
    }

    pub fn component_count(&self) -> usize {
        self.components().iter().max().map_or(0, |m| m + 1)
    }

    pub fn is_connected(&self) -> bool {
        self.component_count() == 1
    }
}

/// Breadth-first closure of `root mod m` under the swaps.
pub fn residue_orbit(root: [i64; 4], m: u32) -> Result<ResidueGraph> {
    if m == 0 {
        return Err(Error::invalid("modulus must be ≥ 1"));
    }
    let mm = m as i64;
    let start = root.map(|x| x.rem_euclid(mm) as u32);
    let mut index: HashMap<[u32; 4], usize> = HashMap::new();
    let mut vertices = vec![start];
    index.insert(start, 0);
    let mut adj: Vec<[usize; 4]> = Vec::new();
    let mut head = 0;
    while head < vertices.len() {
        let v = vertices[head];
        let mut row = [0usize; 4];
        for (i, slot) in row.iter_mut().enumerate() {
            let others: u64 = (0..4).filter(|&k| k != i).map(|k| v[k] as u64).sum();
            let mut w = v;
            w[i] = ((2 * others + (m as u64) * 2 - v[i] as u64) % m as u64) as u32;
            let next = vertices.len();
            let id = *index.entry(w).or_insert(next);
            if id == next {
                if next >= MAX_GRAPH_VERTICES {
                    return Err(Error::CapExceeded { what: "residue graph vertices", limit: MAX_GRAPH_VERTICES as u64 });
                }
                vertices.push(w);
            }
            *slot = id;
        }
        adj.push(row);
        head += 1;
    }
    Ok(ResidueGraph { modulus: m, vertices, adj })
}

/// `(n, k)` read off the residues mod 24.
pub fn classify_type(root: [i64; 4]) -> Result<(u8, u8)> {
    let res = residue_orbit(root, 24)?.residues();
    for ((n, k), _, _) in ADMISSIBLE {
        if admissible_set(n, k).as_ref() == Some(&res) {
            return Ok((n, k));
        }
    }
    Err(Error::invariant(format!("residues {res:?} of {} match no admissible set", format_quad(&root))))
}

// ---------------------------------------------------------------------------
// Spectra

/// Largest graph handed to the dense eigensolver.
pub const DENSE_LIMIT: usize = 2000;

/// All eigenvalues of `A/4`, ascending.
pub fn graph_spectrum(g: &ResidueGraph) -> Result<Vec<f64>> {
    let n = g.len();
    if n > DENSE_LIMIT {
        return Err(Error::CapExceeded { what: "dense spectrum vertices", limit: DENSE_LIMIT as u64 });
    }
    let mut a = DMatrix::<f64>::zeros(n, n);
    for (v, row) in g.adj.iter().enumerate() {
        for &w in row {
            a[(v, w)] += 0.25;
        }
    }
    let mut ev: Vec<f64> = SymmetricEigen::new(a).eigenvalues.iter().cloned().collect();
    ev.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
    Ok(ev)
}

/// Multiplicity of the eigenvalue 1 and the largest eigenvalue below it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralGap {
    pub top_multiplicity: usize,
    pub lambda1: f64,
}

/// Dense up to [`DENSE_LIMIT`] vertices; above that, power iteration on
/// `(I + A/4)/2` orthogonal to the component indicators.
pub fn spectral_gap(g: &ResidueGraph) -> Result<SpectralGap> {
    if g.len() <= DENSE_LIMIT {
        let ev = graph_spectrum(g)?;
        let top = ev.iter().filter(|&&x| (x - 1.0).abs() < 1e-9).count();
        let lambda1 = ev.iter().rev().find(|&&x| (x - 1.0).abs() >= 1e-9).cloned().unwrap_or(-1.0);
        return Ok(SpectralGap { top_multiplicity: top, lambda1 });
    }
    let comp = g.components();
    let nc = comp.iter().max().map_or(0, |m| m + 1);
    let mut sizes = vec![0f64; nc];
    for &c in &comp {
        sizes[c] += 1.0;
    }
    let project = |x: &mut Vec<f64>| {
        let mut sums = vec![0f64; nc];
        for (v, &c) in comp.iter().enumerate() {
            sums[c] += x[v];
        }
        for (v, &c) in comp.iter().enumerate() {
            x[v] -= sums[c] / sizes[c];
        }
        let norm = x.iter().map(|t| t * t).sum::<f64>().sqrt();
        for t in x.iter_mut() {
            *t /= norm;
        }
    };
    let n = g.len();
    let mut x: Vec<f64> = (0..n).map(|i| (i as f64 * 0.754_877_666).fract() - 0.5).collect();
    project(&mut x);
    let mut est = 0.0;
    for it in 0..20_000 {
        let mut y = vec![0f64; n];
        for (v, row) in g.adj.iter().enumerate() {
            let s: f64 = row.iter().map(|&w| x[w]).sum();
            y[v] = 0.5 * x[v] + 0.125 * s;
        }
        let ray: f64 = y.iter().zip(&x).map(|(a, b)| a * b).sum();
        project(&mut y);
        x = y;
        if it > 50 && (ray - est).abs() < 1e-12 {
            est = ray;
            break;
        }
        est = ray;
    }
    Ok(SpectralGap { top_multiplicity: nc, lambda1: 2.0 * est - 1.0 })
}

// ---------------------------------------------------------------------------
// Strong approximation

/// Sizes of the closures of the Apollonian and super-Apollonian generators
/// as 4×4 matrices mod `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClosureReport {
    pub modulus: u32,
    pub apollonian: usize,
    pub super_apollonian: usize,
}

impl ClosureReport {
    pub fn equal(&self) -> bool {
        self.apollonian == self.super_apollonian
    }
}

pub const MAX_CLOSURE: usize = 2_000_000;

type Mat4 = [u8; 16];

fn mat_mod(m: &[[i64; 4]; 4], modulus: u32) -> Mat4 {
    let mut out = [0u8; 16];
    for i in 0..4 {
        for j in 0..4 {
            out[4 * i + j] = m[i][j].rem_euclid(modulus as i64) as u8;
        }
    }
    out
}

fn mat_mul(a: &Mat4, b: &Mat4, modulus: u32) -> Mat4 {
    let mut out = [0u8; 16];
    for i in 0..4 {
        for j in 0..4 {
            let s: u32 = (0..4).map(|k| a[4 * i + k] as u32 * b[4 * k + j] as u32).sum();
            out[4 * i + j] = (s % modulus) as u8;
        }
    }
    out
}

/// Size of the group generated by `gens` mod `modulus`.
pub fn closure_size(gens: &[[[i64; 4]; 4]], modulus: u32) -> Result<usize> {
    if !(2..=255).contains(&modulus) {
        return Err(Error::invalid("closure modulus must be in 2..=255"));
    }
    let gs: Vec<Mat4> = gens.iter().map(|g| mat_mod(g, modulus)).collect();
    let mut id = [0u8; 16];
    for i in 0..4 {
        id[5 * i] = 1;
    }
    let mut seen: HashSet<Mat4> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in &gs {
            let y = mat_mul(&x, g, modulus);
            if seen.insert(y) {
                if seen.len() > MAX_CLOSURE {
                    return Err(Error::CapExceeded { what: "matrix closure size", limit: MAX_CLOSURE as u64 });
                }
                queue.push_back(y);
            }
        }
    }
    Ok(seen.len())
}

/// Compare the closures mod `p^m` (at most 27).
pub fn strong_approx_check(p: u32, m: u32) -> Result<ClosureReport> {
    if !is_prime_u64(p as u64) || m == 0 {
        return Err(Error::invalid("need a prime p and m ≥ 1"));
    }
    let modulus = p.checked_pow(m).filter(|&q| q <= 27).ok_or(Error::CapExceeded { what: "closure modulus", limit: 27 })?;
    let apo: Vec<[[i64; 4]; 4]> = (0..4).map(generator_matrix).collect();
    let mut sup = apo.clone();
    sup.extend((0..4).map(dual_generator_matrix));
    Ok(ClosureReport { modulus, apollonian: closure_size(&apo, modulus)?, super_apollonian: closure_size(&sup, modulus)? })
}

// ---------------------------------------------------------------------------
// Characters

/// Default number of agreeing samples required by [`chi2`] and [`chi4`].
pub const MIN_SAMPLES: usize = 20;

/// Tangent pairs `(new circle, neighbour)` of positive curvature, breadth
/// first through the orbit tree, until `max_nodes` nodes are seen.
fn tangent_pairs(root: [i64; 4], max_nodes: usize, mut visit: impl FnMut(i64, i64) -> bool) {
    for i in 0..4 {
        for j in 0..4 {
            if i != j && visit(root[i], root[j]) {
                return;
            }
        }
    }
    let mut queue: VecDeque<([i64; 4], Option<usize>)> = VecDeque::from([(root, None)]);
    let mut seen = 0;
    while let Some((quad, last)) = queue.pop_front() {
        for j in 0..4 {
            if Some(j) == last {
                continue;
            }
            let others: Option<i64> = (0..4).filter(|&k| k != j).try_fold(0i64, |s, k| s.checked_add(quad[k]));
            let Some(new) = others.and_then(|s| s.checked_mul(2)).and_then(|s| s.checked_sub(quad[j])) else { continue };
            if new > 1 << 40 {
                continue;
            }
            let mut c = quad;
            c[j] = new;
            for k in 0..4 {
                if k != j && (visit(new, quad[k]) || visit(quad[k], new)) {
                    return;
                }
            }
            seen += 1;
            if seen >= max_nodes {
                return;
            }
            queue.push_back((c, Some(j)));
        }
    }
}

/// Raw samples `(circle curvature b, tangent curvature a, value)`.
pub type Samples = Vec<(i64, i64, i8)>;

fn coprime6(x: i64) -> bool {
    x.gcd(&6) == 1
}

/// `χ₂`: the Kronecker symbol `(a/b)` over tangent pairs with `a`, `b`
/// positive, coprime, and prime to 6. For the eight-residue types both
/// curvatures are `≡ 3 (mod 4)` and the pair is oriented with `a ≡ 3` and
/// `b ≡ 7 (mod 8)`. Requires `samples` distinct agreeing pairs.
pub fn chi2_samples(root: [i64; 4], samples: usize, max_nodes: usize) -> Result<(i8, Samples)> {
    let (n, _) = classify_type(root)?;
    let mut got: Samples = Vec::new();
    let mut seen = HashSet::new();
    tangent_pairs(root, max_nodes, |b, a| {
        if a <= 0 || b <= 0 || !coprime6(a) || !coprime6(b) || a.gcd(&b) != 1 {
            return false;
        }
        if n == 8 && !(a % 8 == 3 && b % 8 == 7) {
            return false;
        }
        if seen.insert((b, a)) {
            got.push((b, a, kronecker_i64(a, b) as i8));
        }
        got.len() >= samples
    });
    settle(got, samples, "χ₂")
}

fn settle(got: Samples, samples: usize, what: &str) -> Result<(i8, Samples)> {
    if got.len() < samples {
        return Err(Error::NoSample(format!("only {} usable pairs for {what}", got.len())));
    }
    let v = got[0].2;
    if got.iter().any(|s| s.2 != v) {
        return Err(Error::Inconsistent(format!("{what} samples (b, a, value): {got:?}")));
    }
    Ok((v, got))
}

pub fn chi2(root: [i64; 4]) -> Result<i8> {
    chi2_samples(root, MIN_SAMPLES, 200_000).map(|x| x.0)
}

/// A Gaussian integer of norm `x`, if `x = 2^e·p` with `p = 1` or a prime
/// `≡ 1 (mod 4)`.
fn norm_witness(x: i64) -> Option<GaussianInt> {
    if x <= 0 {
        return None;
    }
    let e = x.trailing_zeros();
    let odd = (x >> e) as u64;
    let mut d = GaussianInt::one();
    for _ in 0..e {
        d = &d * &GaussianInt::new(1, 1);
    }
    if odd == 1 {
        return Some(d);
    }
    if odd % 4 != 1 || !is_prime_u64(odd) {
        return None;
    }
    let (u, v) = two_squares_u64(odd).ok()?;
    Some(&d * &GaussianInt::new(u as i64, v as i64))
}

/// `χ₄` for types `(6, 1)` and `(6, 17)` with `χ₂ = 1`: for a tangent
/// pair with `b` prime to 6 and `gcd(a, b) = 1`, write `a + b = N(δ)` and
/// take the quartic symbol `[δ/b]₄`, which is then `±1`. Pairs where
/// `a + b` is not `2^e` times 1 or a prime are skipped.
pub fn chi4_samples(root: [i64; 4], samples: usize, max_nodes: usize) -> Result<(i8, Samples)> {
    let (n, k) = classify_type(root)?;
    if !PackingType::chi4_defined(n, k) {
        return Err(Error::Undefined(format!("χ₄ is only defined for types (6, 1) and (6, 17), not ({n}, {k})")));
    }
    if chi2(root)? != 1 {
        return Err(Error::Undefined("χ₄ is only used when χ₂ = 1".into()));
    }
    let mut got: Samples = Vec::new();
    let mut seen = HashSet::new();
    let mut bad: Option<Error> = None;
    tangent_pairs(root, max_nodes, |b, a| {
        if b <= 1 || !coprime6(b) || a.gcd(&b) != 1 || seen.contains(&(b, a)) {
            return false;
        }
        let Some(delta) = norm_witness(a + b) else { return false };
        seen.insert((b, a));
        match quartic_symbol(&delta, &GaussianInt::new(b, 0)) {
            Ok(0) => got.push((b, a, 1)),
            Ok(2) => got.push((b, a, -1)),
            Ok(odd) => {
                bad = Some(Error::Inconsistent(format!("quartic symbol i^{odd} for b = {b}, a = {a}")));
                return true;
            }
            Err(e) => {
                bad = Some(e);
                return true;
            }
        }
        got.len() >= samples
    });
    if let Some(e) = bad {
        return Err(e);
    }
    settle(got, samples, "χ₄")
}

pub fn chi4(root: [i64; 4]) -> Result<i8> {
    chi4_samples(root, MIN_SAMPLES, 200_000).map(|x| x.0)
}

/// `(n, k, χ₂[, χ₄])`.
pub fn packing_type(root: [i64; 4]) -> Result<PackingType> {
    let (n, k) = classify_type(root)?;
    let c2 = chi2(root)?;
    let c4 = if PackingType::chi4_defined(n, k) && c2 == 1 { Some(chi4(root)?) } else { None };
    Ok(PackingType { n, k, chi2: c2, chi4: c4 })
}

/// Missing and sporadic curvatures in `1..=n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MissingReport {
    pub packing_type: PackingType,
    pub families: Vec<Family>,
    /// Admissible, absent.
    pub missing: Vec<i64>,
    /// Missing and in no obstruction family.
    pub sporadic: Vec<i64>,
}

pub fn missing_curvatures(root: [i64; 4], n: i64) -> Result<MissingReport> {
    let t = packing_type(root)?;
    let families = obstruction_families(&t)?;
    let adm = admissible_set(t.n, t.k).expect("classified");
    let orbit = packing::enumerate(root, n)?;
    let missing: Vec<i64> = (1..=n).filter(|x| adm.contains(&(x % 24)) && !orbit.contains(*x)).collect();
    let sporadic = missing.iter().cloned().filter(|&x| !families.iter().any(|f| f.contains(x))).collect();
    Ok(MissingReport { packing_type: t, families, missing, sporadic })
}

/// Admissible members of the obstruction families up to `n` that do occur
/// (should be empty).
pub fn family_violations(root: [i64; 4], n: i64) -> Result<Vec<i64>> {
    let t = packing_type(root)?;
    let families = obstruction_families(&t)?;
    let orbit = packing::enumerate(root, n)?;
    let mut out = Vec::new();
    for f in &families {
        let mut x: i64 = 1;
        loop {
            let v = (f.u as i64).checked_mul(x.checked_pow(f.power).unwrap_or(i64::MAX)).unwrap_or(i64::MAX);
            if v > n {
                break;
            }
            if orbit.contains(v) {
                out.push(v);
            }
            x += 1;
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Largest `x ≤ n` among `values`, used to judge whether a sporadic list
/// has stopped growing.
pub fn last_below(values: &[i64], n: i64) -> Option<i64> {
    values.iter().cloned().filter(|&x| x <= n).max()
}

/// The residue set of a graph as a sorted vector of `u64`.
pub fn residues_mod(root: [i64; 4], m: u32) -> Result<Vec<u64>> {
    Ok(residue_orbit(root, m)?.residues().into_iter().map(|x| x.to_u64().expect("non-negative")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[i64]) -> BTreeSet<i64> {
        v.iter().cloned().collect()
    }

    #[test]
    fn admissible_rows() {
        assert_eq!(residue_orbit([-1, 2, 2, 3], 24).unwrap().residues(), set(&[2, 3, 6, 11, 14, 15, 18, 23]));
        assert_eq!(residue_orbit([-3, 5, 8, 8], 24).unwrap().residues(), set(&[0, 5, 8, 12, 20, 21]));
        assert_eq!(residue_orbit([0, 0, 1, 1], 24).unwrap().residues(), set(&[0, 1, 4, 9, 12, 16]));
        let one = residue_orbit([-1, 2, 2, 3], 1).unwrap();
        assert_eq!((one.len(), one.residues()), (1, set(&[0])));
        assert_eq!(classify_type([-1, 2, 2, 3]).unwrap(), (8, 11));
        assert_eq!(classify_type([-3, 5, 8, 8]).unwrap(), (6, 5));
        assert_eq!(classify_type([0, 0, 1, 1]).unwrap(), (6, 1));
        // every root from a small search lands in a row
        for a in -12..0i64 {
            for b in -a..=4 * -a + 4 {
                for c in b..=8 * -a + 20 {
                    let s = a + b + c;
                    let disc = 4 * (a * b + b * c + c * a);
                    let r = (disc as f64).sqrt() as i64;
                    for rr in [r - 1, r, r + 1] {
                        if rr >= 0 && rr * rr == disc {
                            let d = s - rr;
                            let q = [a, b, c, d];
                            if d >= c && packing::is_root(&q) && q.iter().fold(0, |g, x| g.gcd(x)) == 1 {
                                classify_type(q).unwrap();
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn orbit_soundness() {
        for root in [[-1, 2, 2, 3], [-3, 5, 8, 8], [-2, 3, 6, 7], [-4, 8, 9, 9]] {
            let adm = residue_orbit(root, 24).unwrap().residues();
            let orbit = packing::enumerate(root, 100_000).unwrap();
            assert!(orbit.present().all(|k| adm.contains(&k.rem_euclid(24))));
            assert_eq!(orbit.residues(24), adm);
        }
    }

    #[test]
    fn graph_is_four_regular_and_closed() {
        for m in [2, 3, 4, 5, 8, 12] {
            let g = residue_orbit([-1, 2, 2, 3], m).unwrap();
            for (v, row) in g.adj.iter().enumerate() {
                for (i, &w) in row.iter().enumerate() {
                    // swaps are involutions
                    assert_eq!(g.adj[w][i], v);
                }
            }
            assert!(g.is_connected());
        }
        let g8 = residue_orbit([-1, 2, 2, 3], 8).unwrap();
        assert_eq!(g8.residues(), set(&[2, 3, 6, 7]));
    }

    #[test]
    fn spectra() {
        let g = residue_orbit([-1, 2, 2, 3], 5).unwrap();
        let ev = graph_spectrum(&g).unwrap();
        assert!(ev.iter().all(|&x| (-1.0 - 1e-9..=1.0 + 1e-9).contains(&x)));
        assert!((ev.last().unwrap() - 1.0).abs() < 1e-9);
        let gap = spectral_gap(&g).unwrap();
        assert_eq!(gap.top_multiplicity, 1);
        assert!(gap.lambda1 < 1.0 - 1e-6);
        let two = g.disjoint_union(&g);
        assert_eq!(spectral_gap(&two).unwrap().top_multiplicity, 2);
        assert_eq!(two.component_count(), 2);
        // the iterative path agrees with the dense one
        let g11 = residue_orbit([-1, 2, 2, 3], 11).unwrap();
        let dense = spectral_gap(&g11).unwrap();
        let big = g11.disjoint_union(&g11).disjoint_union(&g11);
        assert!(big.len() > DENSE_LIMIT);
        let it = spectral_gap(&big).unwrap();
        assert_eq!(it.top_multiplicity, 3);
        assert!((it.lambda1 - dense.lambda1).abs() < 1e-6, "{} vs {}", it.lambda1, dense.lambda1);
    }

    #[test]
    fn closures() {
        let r3 = strong_approx_check(3, 1).unwrap();
        assert_eq!((r3.apollonian, r3.super_apollonian), (120, 720));
        let r5 = strong_approx_check(5, 1).unwrap();
        assert!(r5.equal());
        let r4 = strong_approx_check(2, 2).unwrap();
        assert_eq!((r4.apollonian, r4.super_apollonian), (16, 128));
        // every generator is the identity mod 2
        let r2 = strong_approx_check(2, 1).unwrap();
        assert_eq!((r2.apollonian, r2.super_apollonian), (1, 1));
        assert!(strong_approx_check(4, 1).is_err());
        assert!(strong_approx_check(2, 5).is_err());
    }

    #[test]
    fn chi2_values() {
        let (v, s) = chi2_samples([-3, 5, 8, 8], 20, 200_000).unwrap();
        assert_eq!(v, -1);
        assert_eq!(s.len(), 20);
        assert_eq!(chi2([-1, 2, 2, 3]).unwrap(), 1);
        assert_eq!(chi2([-2, 3, 6, 7]).unwrap(), -1);
        assert_eq!(chi2([-6, 11, 14, 15]).unwrap(), -1);
        // the bounded horizon surfaces as NoSample
        assert!(matches!(chi2_samples([-3, 5, 8, 8], 20, 3), Err(Error::NoSample(_))));
    }

    #[test]
    fn chi4_values() {
        assert_eq!(chi4([0, 0, 1, 1]).unwrap(), 1);
        assert_eq!(chi4([-4, 8, 9, 9]).unwrap(), -1);
        assert_eq!(chi4([-8, 12, 25, 25]).unwrap(), -1);
        assert_eq!(chi4([-8, 9, 72, 73]).unwrap(), 1);
        assert!(matches!(chi4([-1, 2, 2, 3]), Err(Error::Undefined(_))));
    }

    #[test]
    fn table_lookup() {
        let t = |n, k, c2, c4| PackingType { n, k, chi2: c2, chi4: c4 };
        let show = |v: Vec<Family>| v.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(", ");
        assert_eq!(show(obstruction_families(&t(6, 5, -1, None)).unwrap()), "n², 6n²");
        assert_eq!(show(obstruction_families(&t(8, 11, 1, None)).unwrap()), "");
        assert_eq!(show(obstruction_families(&t(6, 17, 1, Some(-1))).unwrap()), "3n², 6n², n⁴, 4n⁴");
        assert!(obstruction_families(&t(6, 1, 1, None)).is_err());
        for ((n, k), _, _) in ADMISSIBLE {
            for c2 in [-1, 1] {
                let c4s: Vec<Option<i8>> = if PackingType::chi4_defined(n, k) && c2 == 1 { vec![Some(1), Some(-1)] } else { vec![None] };
                for c4 in c4s {
                    for f in obstruction_families(&t(n, k, c2, c4)).unwrap() {
                        // quadratic u | 6, quartic u | 36
                        assert!(if f.power == 2 { 6 % f.u == 0 } else { 36 % f.u == 0 });
                    }
                }
            }
        }
        assert!(Family { u: 6, power: 2 }.contains(54) && !Family { u: 6, power: 2 }.contains(12));
        assert!(Family { u: 4, power: 4 }.contains(64) && !Family { u: 4, power: 4 }.contains(16 * 4 * 2));
    }

    #[test]
    fn families_absent() {
        for root in [[-3, 5, 8, 8], [-2, 3, 6, 7], [-6, 11, 14, 15], [-4, 8, 9, 9], [-8, 12, 25, 25]] {
            assert_eq!(family_violations(root, 100_000).unwrap(), Vec::<i64>::new(), "{root:?}");
        }
        // an unobstructed (6, 1, 1, 1) packing reaches squares and fourth powers
        let o = packing::enumerate([-8, 9, 72, 73], 100_000).unwrap();
        let squares = (1..=316i64).filter(|x| o.contains(x * x)).count();
        assert!(squares > 100);
        assert!((2..=17i64).any(|x| o.contains(x.pow(4))));
    }

    #[test]
    fn missing_and_sporadic() {
        let r = missing_curvatures([-1, 2, 2, 3], 20_000).unwrap();
        assert!(r.families.is_empty());
        assert_eq!(r.missing, r.sporadic);
        let r = missing_curvatures([-3, 5, 8, 8], 50_000).unwrap();
        assert_eq!(r.packing_type.to_string(), "(6, 5, -1)");
        assert!(r.sporadic.len() < r.missing.len());
        assert!((1..=223i64).map(|x| x * x).filter(|v| [0, 5, 8, 12, 20, 21].contains(&(v % 24))).all(|v| r.missing.contains(&v)));
    }
}
