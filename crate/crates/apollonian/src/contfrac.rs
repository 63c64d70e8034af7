//! Continued fractions: classical expansions, convergents via L/R matrix
//! products, Farey cutting sequences, periodic expansions of quadratic
//! irrationals, good approximations and Zaremba denominators.
//!
//! Numbers other than rationals are handled exactly where possible. A
//! quadratic irrational is the root `(−b ± √Δ)/2a` of `ax² + bx + c`. A
//! float is read as the exact rational its bits encode. A transcendental
//! such as π is given by a rational bracket, and only quotients on which
//! both ends agree are reported.
//!
//! Cusp convention for the cutting sequence: when the target equals a
//! mediant the last letter is `L` and the word stops. For a rational this
//! reproduces whichever of its two expansions ends on an `L` block.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::quadforms::floor_surd;

/// π to 60 decimal places, truncated (lower end of the bracket).
const PI_60: &str = "3.141592653589793238462643383279502884197169399375105820974944";

const FLOAT_DEPTH_CAP: usize = 40;

/// A positive-or-negative real number in one of the supported exact forms.
#[derive(Clone, Debug, PartialEq)]
pub enum Real {
    Rational(BigRational),
    /// Root `(−b + √Δ)/2a` when `plus`, else `(−b − √Δ)/2a`.
    Quadratic { a: BigInt, b: BigInt, c: BigInt, plus: bool },
    Float(f64),
    /// Known to lie strictly between the two ends.
    Interval(BigRational, BigRational),
}

impl Real {
    pub fn rational(n: i64, d: i64) -> Self {
        Real::Rational(BigRational::new(n.into(), d.into()))
    }

    pub fn quadratic(a: i64, b: i64, c: i64, plus: bool) -> Result<Self> {
        let d = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        let s = (d.max(0) as f64).sqrt() as i128;
        if a == 0 || d <= 0 || (-1..=1).any(|e| (s + e) * (s + e) == d) {
            return Err(Error::invalid(format!("{a}x² + {b}x + {c} has no irrational real root")));
        }
        Ok(Real::Quadratic { a: a.into(), b: b.into(), c: c.into(), plus })
    }

    pub fn sqrt(n: i64) -> Result<Self> {
        Real::quadratic(1, 0, -n, true)
    }

    pub fn golden_ratio() -> Self {
        Real::quadratic(1, -1, -1, true).expect("x² − x − 1")
    }

    pub fn pi() -> Self {
        let lo = crate::circlespace::parse_rational(PI_60).expect("literal");
        let ulp = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), 60));
        let hi = &lo + ulp;
        Real::Interval(lo, hi)
    }

    /// Accepts `p/q`, decimals (read exactly), `pi`, `phi`, `sqrt(n)`,
    /// `quad(a,b,c)` / `quad(a,b,c,-)` and `float:<x>`.
    pub fn parse(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        if t == "pi" || t == "π" {
            return Ok(Real::pi());
        }
        if t == "phi" || t == "golden" {
            return Ok(Real::golden_ratio());
        }
        if let Some(x) = t.strip_prefix("float:") {
            let v: f64 = x.parse().map_err(|_| Error::invalid(format!("bad float {x:?}")))?;
            return Ok(Real::Float(v));
        }
        if let Some(inner) = t.strip_prefix("sqrt(").and_then(|x| x.strip_suffix(')')) {
            let n: i64 = inner.trim().parse().map_err(|_| Error::invalid(format!("bad radicand {inner:?}")))?;
            return Real::sqrt(n);
        }
        if let Some(inner) = t.strip_prefix("quad(").and_then(|x| x.strip_suffix(')')) {
            let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
            if parts.len() < 3 || parts.len() > 4 {
                return Err(Error::invalid("quad(a,b,c[,+|-]) expected"));
            }
            let num = |x: &str| x.parse::<i64>().map_err(|_| Error::invalid(format!("bad coefficient {x:?}")));
            let plus = parts.get(3).map_or(true, |x| *x != "-");
            return Real::quadratic(num(parts[0])?, num(parts[1])?, num(parts[2])?, plus);
        }
        Ok(Real::Rational(crate::circlespace::parse_rational(&t)?))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Real::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            Real::Float(x) => *x,
            Real::Interval(lo, hi) => ((lo + hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN),
            Real::Quadratic { a, b, c, plus } => {
                let (a, b, c) = (a.to_f64().unwrap(), b.to_f64().unwrap(), c.to_f64().unwrap());
                let s = (b * b - 4.0 * a * c).sqrt();
                if *plus {
                    (-b + s) / (2.0 * a)
                } else {
                    (-b - s) / (2.0 * a)
                }
            }
        }
    }

    /// Sign of `self − r`, exactly. Fails only for a bracket containing `r`.
    pub fn cmp_rational(&self, r: &BigRational) -> Result<Ordering> {
        match self {
            Real::Rational(x) => Ok(x.cmp(r)),
            Real::Float(x) => {
                let x = BigRational::from_float(*x).ok_or_else(|| Error::invalid("non-finite float"))?;
                Ok(x.cmp(r))
            }
            Real::Interval(lo, hi) => {
                if lo >= r {
                    Ok(Ordering::Greater)
                } else if hi <= r {
                    Ok(Ordering::Less)
                } else {
                    Err(Error::Undefined("bracket too wide to compare".into()))
                }
            }
            Real::Quadratic { a, b, c, plus } => {
                // self − r = (u ± √Δ)/2a with u = −b − 2ar
                let d = b * b - BigInt::from(4) * a * c;
                let u = BigRational::from_integer(-b) - BigRational::from_integer(BigInt::from(2) * a) * r;
                let u2 = &u * &u;
                let dq = BigRational::from_integer(d);
                let num_sign = if *plus {
                    if !u.is_negative() || dq > u2 {
                        Ordering::Greater
                    } else {
                        Ordering::Less
                    }
                } else if u.is_positive() && u2 > dq {
                    Ordering::Greater
                } else {
                    Ordering::Less
                };
                Ok(if a.is_negative() { num_sign.reverse() } else { num_sign })
            }
        }
    }

    /// `⌊self⌋`, exactly.
    pub fn floor(&self) -> Result<BigInt> {
        let est = self.to_f64();
        if !est.is_finite() {
            return Err(Error::invalid("value out of floating range"));
        }
        let mut k = BigInt::from(est.floor() as i128);
        loop {
            if self.cmp_rational(&BigRational::from_integer(k.clone()))? == Ordering::Less {
                k -= 1;
            } else if self.cmp_rational(&BigRational::from_integer(&k + 1))? != Ordering::Less {
                k += 1;
            } else {
                return Ok(k);
            }
        }
    }

    fn scaled(&self, q: &BigInt) -> Real {
        let qq = BigRational::from_integer(q.clone());
        match self {
            Real::Rational(x) => Real::Rational(x * &qq),
            Real::Float(x) => Real::Rational(BigRational::from_float(*x).unwrap_or_default() * &qq),
            Real::Interval(lo, hi) => Real::Interval(lo * &qq, hi * &qq),
            // root of a x² + b q x + c q²
            Real::Quadratic { a, b, c, plus } => Real::Quadratic { a: a.clone(), b: b * q, c: c * q * q, plus: *plus },
        }
    }
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Real::Rational(r) => write!(f, "{r}"),
            Real::Float(x) => write!(f, "{x}"),
            Real::Interval(lo, _) => write!(f, "≈{}", lo.to_f64().unwrap_or(f64::NAN)),
            Real::Quadratic { a, b, c, plus } => write!(f, "root{} of {a}x² + {b}x + {c}", if *plus { "+" } else { "−" }),
        }
    }
}

/// `a₀ + 1/(a₁ + 1/(a₂ + …))`; for quadratic irrationals the tail after
/// `quotients` repeats `period` forever.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CFExpansion {
    pub a0: BigInt,
    pub quotients: Vec<BigInt>,
    pub period: Vec<BigInt>,
    /// The expansion is the whole (finite) expansion of a rational.
    pub complete: bool,
}

impl CFExpansion {
    pub fn from_i64(a0: i64, quotients: &[i64]) -> Self {
        CFExpansion { a0: a0.into(), quotients: quotients.iter().map(|&x| x.into()).collect(), period: vec![], complete: true }
    }

    pub fn is_periodic(&self) -> bool {
        !self.period.is_empty()
    }

    /// The first `n` partial quotients after `a₀`, unrolling the period.
    pub fn terms(&self, n: usize) -> Vec<BigInt> {
        let mut out: Vec<BigInt> = self.quotients.iter().take(n).cloned().collect();
        if !self.period.is_empty() {
            let mut i = 0;
            while out.len() < n {
                out.push(self.period[i % self.period.len()].clone());
                i += 1;
            }
        }
        out
    }

    /// The other expansion of a rational: `[…, aₙ − 1, 1]` if `aₙ ≥ 2`, or
    /// `[…, aₙ₋₁ + 1]` if the last quotient is 1.
    pub fn alternate(&self) -> Option<CFExpansion> {
        if !self.complete {
            return None;
        }
        let mut alt = self.clone();
        match alt.quotients.last().cloned() {
            None => {
                alt.a0 -= 1;
                alt.quotients.push(BigInt::one());
            }
            Some(last) if last.is_one() => {
                alt.quotients.pop();
                match alt.quotients.last_mut() {
                    Some(x) => *x += 1,
                    None => alt.a0 += 1,
                }
            }
            Some(_) => {
                *alt.quotients.last_mut().unwrap() -= 1;
                alt.quotients.push(BigInt::one());
            }
        }
        Some(alt)
    }

    /// Run-length L/R blocks `L^{a₀} R^{a₁} L^{a₂} …` over the first
    /// `n` quotients; empty blocks are dropped.
    pub fn lr_blocks(&self, n: usize) -> Vec<(char, BigInt)> {
        let mut out = Vec::new();
        let all = std::iter::once(self.a0.clone()).chain(self.terms(n));
        for (i, e) in all.enumerate() {
            if e.is_positive() {
                out.push((if i % 2 == 0 { 'L' } else { 'R' }, e));
            }
        }
        out
    }

    pub fn lr_string(&self, n: usize) -> String {
        self.lr_blocks(n).iter().map(|(c, e)| if e.is_one() { c.to_string() } else { format!("{c}^{e}") }).collect::<Vec<_>>().join(" ")
    }
}

impl fmt::Display for CFExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}", self.a0)?;
        let mut sep = "; ";
        for q in &self.quotients {
            write!(f, "{sep}{q}")?;
            sep = ", ";
        }
        if !self.period.is_empty() {
            write!(f, "{sep}(")?;
            for (i, q) in self.period.iter().enumerate() {
                write!(f, "{}{q}", if i == 0 { "" } else { ", " })?;
            }
            write!(f, ")…")?;
        } else if !self.complete {
            write!(f, "{sep}…")?;
        }
        write!(f, "]")
    }
}

fn expand_rational(x: &BigRational) -> CFExpansion {
    let mut n = x.numer().clone();
    let mut d = x.denom().clone();
    let (a0, r) = n.div_mod_floor(&d);
    let mut out = CFExpansion { a0, quotients: vec![], period: vec![], complete: true };
    n = d;
    d = r;
    while !d.is_zero() {
        let (q, r) = n.div_mod_floor(&d);
        out.quotients.push(q);
        n = d;
        d = r;
    }
    out
}

/// Classical expansion. Rationals expand completely (`depth` is ignored),
/// quadratic irrationals return preperiod and period, floats return at most
/// `depth ≤ 40` quotients of their exact binary value, and brackets return
/// the quotients shared by both ends (at most `depth`).
pub fn cf_expand(x: &Real, depth: usize) -> Result<CFExpansion> {
    match x {
        Real::Rational(r) => Ok(expand_rational(r)),
        Real::Quadratic { a, b, c, plus } => periodic_cf(a, b, c, *plus),
        Real::Float(v) => {
            if depth > FLOAT_DEPTH_CAP {
                return Err(Error::CapExceeded { what: "float expansion depth", limit: FLOAT_DEPTH_CAP as u64 });
            }
            let r = BigRational::from_float(*v).ok_or_else(|| Error::invalid("non-finite float"))?;
            let mut e = expand_rational(&r);
            if e.quotients.len() > depth {
                e.quotients.truncate(depth);
                e.complete = false;
            }
            Ok(e)
        }
        Real::Interval(lo, hi) => {
            let (el, eh) = (expand_rational(lo), expand_rational(hi));
            if el.a0 != eh.a0 {
                return Err(Error::Undefined("bracket straddles an integer".into()));
            }
            // the last shared quotient may differ in the true value only if it
            // is the final term of one end, so drop it in that case
            let mut common = Vec::new();
            for (i, (p, q)) in el.quotients.iter().zip(&eh.quotients).enumerate() {
                let last = i + 1 == el.quotients.len() || i + 1 == eh.quotients.len();
                if p != q || last || common.len() == depth {
                    break;
                }
                common.push(p.clone());
            }
            Ok(CFExpansion { a0: el.a0, quotients: common, period: vec![], complete: false })
        }
    }
}

/// Exact expansion of a root of `ax² + bx + c` (`Δ > 0`, non-square), with the
/// period found by repetition of the complete-quotient state `(P, Q)`.
pub fn periodic_cf(a: &BigInt, b: &BigInt, c: &BigInt, plus: bool) -> Result<CFExpansion> {
    let d = b * b - BigInt::from(4) * a * c;
    if !d.is_positive() || a.is_zero() {
        return Err(Error::invalid("need Δ > 0 and a ≠ 0"));
    }
    let s = d.sqrt();
    if &s * &s == d {
        return Err(Error::invalid(format!("Δ = {d} is a square; the root is rational")));
    }
    // x = (P + √Δ)/Q with Q | Δ − P²
    let (mut p, mut q) = if plus { (-b, BigInt::from(2) * a) } else { (b.clone(), BigInt::from(-2) * a) };
    let mut seen: HashMap<(BigInt, BigInt), usize> = HashMap::new();
    let mut qs: Vec<BigInt> = Vec::new();
    loop {
        if let Some(&i) = seen.get(&(p.clone(), q.clone())) {
            let j = qs.len();
            let (a0, pre, per) = if i == 0 {
                let mut per: Vec<BigInt> = qs[1..j].to_vec();
                per.push(qs[0].clone());
                (qs[0].clone(), vec![], per)
            } else {
                (qs[0].clone(), qs[1..i].to_vec(), qs[i..j].to_vec())
            };
            return Ok(CFExpansion { a0, quotients: pre, period: per, complete: false });
        }
        seen.insert((p.clone(), q.clone()), qs.len());
        let k = floor_surd(&p, &d, &q);
        let p2 = &k * &q - &p;
        let q2 = (&d - &p2 * &p2) / &q;
        qs.push(k);
        p = p2;
        q = q2;
        if qs.len() > 10_000_000 {
            return Err(Error::CapExceeded { what: "period length", limit: 10_000_000 });
        }
    }
}

/// Convergents `p_k/q_k`, computed as columns of the products
/// `L^{a₀} R^{a₁} L^{a₂} …` with `L = (1 1; 0 1)`, `R = (1 0; 1 1)`.
/// For non-terminating expansions the first `count` are returned.
pub fn convergents(cf: &CFExpansion, count: usize) -> Vec<BigRational> {
    let n = if cf.complete { cf.quotients.len() } else { count.saturating_sub(1) };
    let quots: Vec<BigInt> = if cf.complete { cf.quotients.clone() } else { cf.terms(n) };
    // m = [[m00, m01], [m10, m11]]
    let (mut m00, mut m01, mut m10, mut m11) = (BigInt::one(), BigInt::zero(), BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    for (i, e) in std::iter::once(&cf.a0).chain(quots.iter()).enumerate() {
        if i % 2 == 0 {
            // right-multiply by L^e: second column += e·first
            m01 += e * &m00;
            m11 += e * &m10;
            out.push(BigRational::new(m01.clone(), m11.clone()));
        } else {
            // right-multiply by R^e: first column += e·second
            m00 += e * &m01;
            m10 += e * &m11;
            out.push(BigRational::new(m00.clone(), m10.clone()));
        }
        if !cf.complete && out.len() >= count {
            break;
        }
    }
    out
}

/// The Farey descent of `α > 0`: at each step compare with the mediant of
/// the current bracket, `L` when `α` is larger, `R` when smaller. Hitting a
/// mediant exactly emits `L` and stops.
pub fn cutting_sequence(alpha: &Real, steps: usize) -> Result<String> {
    if alpha.cmp_rational(&BigRational::zero())? != Ordering::Greater {
        return Err(Error::invalid("cutting sequences need α > 0"));
    }
    let (mut lp, mut lq) = (BigInt::zero(), BigInt::one());
    let (mut rp, mut rq) = (BigInt::one(), BigInt::zero());
    let mut word = String::with_capacity(steps);
    for _ in 0..steps {
        let mp = &lp + &rp;
        let mq = &lq + &rq;
        match alpha.cmp_rational(&BigRational::new(mp.clone(), mq.clone()))? {
            Ordering::Greater => {
                word.push('L');
                lp = mp;
                lq = mq;
            }
            Ordering::Less => {
                word.push('R');
                rp = mp;
                rq = mq;
            }
            Ordering::Equal => {
                word.push('L');
                break;
            }
        }
    }
    Ok(word)
}

/// Run-length encode an L/R word into exponents, starting with the L block.
pub fn word_to_quotients(word: &str) -> Vec<u64> {
    let mut out = vec![0u64];
    let mut cur = 'L';
    for ch in word.chars() {
        if ch != cur {
            out.push(0);
            cur = ch;
        }
        *out.last_mut().unwrap() += 1;
    }
    out
}

/// `|p/q − α| < 1/(2q²)`.
pub fn is_good_approximation(alpha: &Real, pq: &BigRational) -> Result<bool> {
    let q = pq.denom();
    let eps = BigRational::new(BigInt::one(), BigInt::from(2) * q * q);
    Ok(alpha.cmp_rational(&(pq - &eps))? == Ordering::Greater && alpha.cmp_rational(&(pq + &eps))? == Ordering::Less)
}

/// Every reduced `p/q` with `q ≤ qmax` and `|p/q − α| < 1/(2q²)`, by
/// checking the two integers nearest `αq` for each `q`.
pub fn best_approximations(alpha: &Real, qmax: u64) -> Result<Vec<BigRational>> {
    if qmax > 1_000_000 {
        return Err(Error::CapExceeded { what: "best_approximations denominator", limit: 1_000_000 });
    }
    let mut out = Vec::new();
    for q in 1..=qmax {
        let qb = BigInt::from(q);
        let fl = alpha.scaled(&qb).floor()?;
        for p in [fl.clone(), fl + 1] {
            if !p.gcd(&qb).is_one() && !(p.is_zero() && q == 1) {
                continue;
            }
            let r = BigRational::new(p, qb.clone());
            if is_good_approximation(alpha, &r)? {
                out.push(r);
            }
        }
    }
    Ok(out)
}

/// Which words count towards a Zaremba denominator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZarembaConvention {
    /// Only the expansion with last quotient ≥ 2 (the usual one).
    Canonical,
    /// Either expansion, i.e. any word with quotients in `[1, Z]`.
    AnyExpansion,
}

/// All `q ≤ n` that are denominators of some `[0; a₁, …, a_k]` with every
/// `a_i ≤ z` (and `1`, the denominator of `0` and `1`), as a membership
/// table indexed by `q`. Depth-first continuant growth, pruned at `q > n`,
/// split over the first quotient.
pub fn zaremba_table(z: u64, n: u64, conv: ZarembaConvention, node_cap: u64) -> Result<Vec<bool>> {
    if z == 0 {
        return Err(Error::invalid("Z must be at least 1"));
    }
    if n > 10_000_000 {
        return Err(Error::CapExceeded { what: "Zaremba bound", limit: 10_000_000 });
    }
    let len = n as usize + 1;
    let mut seen = vec![false; len];
    if n >= 1 {
        seen[1] = true;
    }
    let min_last = match conv {
        ZarembaConvention::Canonical => 2,
        ZarembaConvention::AnyExpansion => 1,
    };
    // (q_{k−1}, q_k, a_k), starting from (q_0, q_1) = (1, a₁)
    let starts: Vec<(u64, u64, u64)> = (1..=z.min(n)).map(|a| (1u64, a, a)).collect();
    let results: Vec<Result<Vec<bool>>> = starts
        .into_par_iter()
        .map(|start| {
            let mut local = vec![false; len];
            let mut stack = vec![start];
            let mut nodes = 0u64;
            while let Some((prev, cur, last)) = stack.pop() {
                if last >= min_last {
                    local[cur as usize] = true;
                }
                nodes += 1;
                if nodes > node_cap {
                    return Err(Error::CapExceeded { what: "Zaremba search nodes", limit: node_cap });
                }
                for a in 1..=z {
                    let next = a * cur + prev;
                    if next > n {
                        break;
                    }
                    stack.push((cur, next, a));
                }
            }
            Ok(local)
        })
        .collect();
    for r in results {
        for (s, l) in seen.iter_mut().zip(r?) {
            *s |= l;
        }
    }
    Ok(seen)
}

pub fn zaremba_denominators(z: u64, n: u64, conv: ZarembaConvention) -> Result<Vec<u64>> {
    let t = zaremba_table(z, n, conv, u64::MAX)?;
    Ok((1..=n).filter(|&q| t[q as usize]).collect())
}

pub fn zaremba_missing(z: u64, n: u64, conv: ZarembaConvention) -> Result<Vec<u64>> {
    let t = zaremba_table(z, n, conv, u64::MAX)?;
    Ok((1..=n).filter(|&q| !t[q as usize]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn ints(v: &[BigInt]) -> Vec<i64> {
        v.iter().map(|x| x.to_i64().unwrap()).collect()
    }

    // Euclid on i64, the oracle
    fn euclid(mut n: i64, mut d: i64) -> Vec<i64> {
        let mut out = vec![n.div_euclid(d)];
        let m = n.rem_euclid(d);
        n = d;
        d = m;
        while d != 0 {
            out.push(n / d);
            let m = n % d;
            n = d;
            d = m;
        }
        out
    }

    #[test]
    fn rational_expansions() {
        let e = cf_expand(&Real::rational(17, 5), 0).unwrap();
        assert_eq!(e.to_string(), "[3; 2, 2]");
        assert_eq!(e.alternate().unwrap().to_string(), "[3; 2, 1, 1]");
        assert_eq!(e.alternate().unwrap().alternate().unwrap(), e);
        assert_eq!(cf_expand(&Real::rational(0, 1), 0).unwrap().to_string(), "[0]");
        let mut rng = rand::rngs::StdRng::seed_from_u64(1);
        for _ in 0..500 {
            let (n, d) = (rng.gen_range(-5000..5000), rng.gen_range(1..5000));
            let e = cf_expand(&Real::rational(n, d), 0).unwrap();
            let mut got = vec![e.a0.to_i64().unwrap()];
            got.extend(ints(&e.quotients));
            assert_eq!(got, euclid(n, d));
            assert!(e.quotients.iter().all(|q| q >= &BigInt::one()));
            let last = convergents(&e, 0).pop().unwrap();
            assert_eq!(last, r(n, d));
            assert_eq!(convergents(&e.alternate().unwrap(), 0).pop().unwrap(), r(n, d));
        }
    }

    #[test]
    fn pi_expansion() {
        let e = cf_expand(&Real::pi(), 30).unwrap();
        assert_eq!(ints(&e.terms(7)), vec![7, 15, 1, 292, 1, 1, 1]);
        assert_eq!(e.a0, BigInt::from(3));
        assert!(e.quotients.len() >= 25);
        assert_eq!(e.lr_string(5), "L^3 R^7 L^15 R L^292 R");
        let c = convergents(&e, 4);
        assert_eq!(c, vec![r(3, 1), r(22, 7), r(333, 106), r(355, 113)]);
    }

    #[test]
    fn float_expansion() {
        let e = cf_expand(&Real::Float(std::f64::consts::PI), 10).unwrap();
        assert_eq!(ints(&e.quotients[..5]), vec![7, 15, 1, 292, 1]);
        assert!(cf_expand(&Real::Float(1.5), 41).is_err());
        assert_eq!(cf_expand(&Real::Float(0.375), 40).unwrap().to_string(), "[0; 2, 1, 2]");
    }

    #[test]
    fn convergent_recurrence_and_unimodality() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(2);
        for _ in 0..300 {
            let qs: Vec<i64> = (0..rng.gen_range(1..15)).map(|_| rng.gen_range(1..50)).collect();
            let cf = CFExpansion::from_i64(rng.gen_range(-10..10), &qs);
            let c = convergents(&cf, 0);
            // standard recurrence as the oracle
            let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
            let (mut p1, mut q1) = (cf.a0.clone(), BigInt::one());
            assert_eq!(c[0], BigRational::new(p1.clone(), q1.clone()));
            for (k, a) in cf.quotients.iter().enumerate() {
                let (p2, q2) = (a * &p1 + &p0, a * &q1 + &q0);
                assert_eq!(c[k + 1], BigRational::new(p2.clone(), q2.clone()));
                assert_eq!((&p2 * &q1 - &p1 * &q2).abs(), BigInt::one());
                (p0, q0, p1, q1) = (p1, q1, p2, q2);
            }
        }
        assert_eq!(convergents(&CFExpansion::from_i64(0, &[7]), 0), vec![r(0, 1), r(1, 7)]);
    }

    #[test]
    fn golden_ratio_convergents_are_fibonacci() {
        let e = cf_expand(&Real::golden_ratio(), 0).unwrap();
        let c = convergents(&e, 20);
        let mut fib = vec![1i64, 1];
        while fib.len() < 22 {
            fib.push(fib[fib.len() - 1] + fib[fib.len() - 2]);
        }
        for (k, x) in c.iter().enumerate() {
            assert_eq!(*x, r(fib[k + 1], fib[k]));
        }
    }

    #[test]
    fn periodic_examples() {
        let two = cf_expand(&Real::sqrt(2).unwrap(), 0).unwrap();
        assert_eq!((ints(&[two.a0.clone()]), ints(&two.quotients), ints(&two.period)), (vec![1], vec![], vec![2]));
        let g = cf_expand(&Real::golden_ratio(), 0).unwrap();
        assert_eq!((g.a0.to_i64().unwrap(), ints(&g.period)), (1, vec![1]));
        let three = cf_expand(&Real::sqrt(3).unwrap(), 0).unwrap();
        assert_eq!((three.a0.to_i64().unwrap(), ints(&three.quotients), ints(&three.period)), (1, vec![], vec![1, 2]));
        assert_eq!(cf_expand(&Real::sqrt(7).unwrap(), 0).unwrap().to_string(), "[2; (1, 1, 1, 4)…]");
        assert!(Real::sqrt(4).is_err());
        assert!(periodic_cf(&BigInt::from(1), &BigInt::from(0), &BigInt::from(-9), true).is_err());
        // a reduced root in (0,1) with conjugate below −1 is purely periodic
        let x = periodic_cf(&BigInt::from(1), &BigInt::from(1), &BigInt::from(-1), true).unwrap();
        assert_eq!((x.a0.to_i64().unwrap(), x.quotients.len()), (0, 0));
    }

    #[test]
    fn periodic_matches_floats() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let mut done = 0;
        while done < 100 {
            let (a, b, c) = (rng.gen_range(-20..20i64), rng.gen_range(-20..20i64), rng.gen_range(-20..20i64));
            let Ok(x) = Real::quadratic(a, b, c, rng.gen_bool(0.5)) else { continue };
            done += 1;
            let e = cf_expand(&x, 0).unwrap();
            let mut v = x.to_f64();
            let mut got = vec![v.floor() as i64];
            for _ in 0..8 {
                v = 1.0 / (v - v.floor());
                got.push(v.floor() as i64);
            }
            let mut want = vec![e.a0.to_i64().unwrap()];
            want.extend(ints(&e.terms(8)));
            assert_eq!(got[..6], want[..6], "{x}");
            // Dirichlet: every convergent is within 1/q²
            for pq in convergents(&e, 15) {
                let q = pq.denom().to_f64().unwrap();
                assert!((x.to_f64() - pq.to_f64().unwrap()).abs() <= 1.0 / (q * q) + 1e-12);
            }
        }
    }

    #[test]
    fn cutting_sequence_examples() {
        let w = cutting_sequence(&Real::pi(), 25).unwrap();
        assert_eq!(w, format!("{}{}{}", "L".repeat(3), "R".repeat(7), "L".repeat(15)));
        assert_eq!(cutting_sequence(&Real::rational(4, 1), 100).unwrap(), "LLLL");
        assert_eq!(cutting_sequence(&Real::rational(17, 5), 100).unwrap(), "LLLRRLL");
        assert!(cutting_sequence(&Real::rational(-1, 2), 5).is_err());
    }

    #[test]
    fn cutting_sequence_matches_expansion() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(4);
        for _ in 0..100 {
            let (n, d) = (rng.gen_range(1..100_000), rng.gen_range(1..=1000));
            let x = Real::rational(n, d);
            let e = cf_expand(&x, 0).unwrap();
            let w = cutting_sequence(&x, 1_000_000).unwrap();
            let flat = |e: &CFExpansion| {
                let mut v = vec![e.a0.to_u64().unwrap()];
                v.extend(e.quotients.iter().map(|q| q.to_u64().unwrap()));
                v
            };
            let got = word_to_quotients(&w);
            assert!(got == flat(&e) || got == flat(&e.alternate().unwrap()), "{n}/{d}");
            // the word ends on an L block
            assert_eq!(got.len() % 2, 1);
        }
        let g = cutting_sequence(&Real::golden_ratio(), 12).unwrap();
        assert_eq!(g, "LRLRLRLRLRLR");
    }

    #[test]
    fn good_approximations() {
        let pi = Real::pi();
        assert!(is_good_approximation(&pi, &r(22, 7)).unwrap());
        assert!(!is_good_approximation(&pi, &r(25, 8)).unwrap());
        let best = best_approximations(&pi, 10_000).unwrap();
        let conv = convergents(&cf_expand(&pi, 40).unwrap(), 40);
        assert!(!best.is_empty());
        for b in &best {
            assert!(conv.contains(b), "{b}");
        }
        // a rational has only finitely many
        let half = best_approximations(&Real::rational(1, 2), 10_000).unwrap();
        assert_eq!(half, vec![r(1, 2)]);
    }

    #[test]
    fn golden_ratio_is_badly_approximable() {
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let (mut worst, mut tail) = (f64::INFINITY, f64::INFINITY);
        for q in 1..=10_000u64 {
            let p = (phi * q as f64).round();
            let v = (phi - p / q as f64).abs() * (q * q) as f64;
            worst = worst.min(v);
            if q >= 100 {
                tail = tail.min(v);
            }
        }
        // K = 3 works for every q; the infimum tends to 1/√5
        assert!(worst >= 1.0 / 3.0, "{worst}");
        assert!((tail - 1.0 / 5f64.sqrt()).abs() < 1e-3, "{tail}");
    }

    #[test]
    fn zaremba_examples() {
        use ZarembaConvention::*;
        let fib = zaremba_denominators(1, 1000, AnyExpansion).unwrap();
        assert_eq!(fib, vec![1, 2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 233, 377, 610, 987]);
        assert_eq!(zaremba_denominators(1, 1000, Canonical).unwrap(), vec![1]);
        assert_eq!(zaremba_missing(4, 10_000, Canonical).unwrap(), vec![6, 54, 150]);
        // 5/6 = [0; 1, 4, 1]
        assert_eq!(zaremba_missing(4, 10_000, AnyExpansion).unwrap(), vec![54, 150]);
        assert!(zaremba_missing(5, 10_000, Canonical).unwrap().is_empty());
        assert!(matches!(zaremba_table(5, 10_000, Canonical, 10), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn zaremba_matches_brute_force() {
        // oracle: expand every p/q and check the largest quotient
        for z in 2..=3u64 {
            for (conv, both) in [(ZarembaConvention::Canonical, false), (ZarembaConvention::AnyExpansion, true)] {
                let got = zaremba_denominators(z, 300, conv).unwrap();
                let want: Vec<u64> = (1..=300u64)
                    .filter(|&q| {
                        (0..=q).any(|p| {
                            if num_integer::gcd(p, q) != 1 {
                                return false;
                            }
                            let e = expand_rational(&r(p as i64, q as i64));
                            let mut cands = vec![e.clone()];
                            if both {
                                cands.push(e.alternate().unwrap());
                            }
                            cands.iter().any(|x| x.a0.to_u64() <= Some(1) && x.quotients.iter().all(|a| a.to_u64().unwrap() <= z))
                        })
                    })
                    .collect();
                assert_eq!(got, want, "Z = {z}, {conv:?}");
            }
        }
    }

    #[test]
    fn parsing() {
        assert_eq!(Real::parse("17/5").unwrap(), Real::rational(17, 5));
        assert_eq!(Real::parse("pi").unwrap(), Real::pi());
        assert!(matches!(Real::parse("sqrt(2)").unwrap(), Real::Quadratic { .. }));
        assert!(matches!(Real::parse("quad(1,-1,-1,-)").unwrap(), Real::Quadratic { plus: false, .. }));
        assert_eq!(Real::parse("float:0.5").unwrap(), Real::Float(0.5));
        assert!(Real::parse("banana").is_err());
    }
}
