//! C ABI over the `apollonian` crate.
//!
//! Every fallible call returns an [`ApoStatus`]; results come back through
//! out-pointers. Handles are opaque and must be released with the matching
//! `*_free`. No Rust panic crosses the boundary: it is reported as
//! `APO_STATUS_PANIC`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use apollonian::circlespace::{descartes_form, DescartesQuadruple};
use apollonian::contfrac::{self, CFExpansion, Real};
use apollonian::numtheory::kronecker_i64;
use apollonian::packing::{self, PackingOrbit};
use apollonian::{obstructions, quadforms, Error};
use num_traits::ToPrimitive;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ApoStatus {
    Ok = 0,
    InvalidInput = 1,
    NotDescartes = 2,
    NotReduced = 3,
    CapExceeded = 4,
    Overflow = 5,
    Unbounded = 6,
    Undefined = 7,
    NoSample = 8,
    Inconsistent = 9,
    NotRepresentable = 10,
    Invariant = 11,
    NullPointer = 12,
    Panic = 13,
}

impl From<&Error> for ApoStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::InvalidInput(_) => ApoStatus::InvalidInput,
            Error::NotDescartes(_) => ApoStatus::NotDescartes,
            Error::NotReduced(_) => ApoStatus::NotReduced,
            Error::CapExceeded { .. } => ApoStatus::CapExceeded,
            Error::Overflow(_) => ApoStatus::Overflow,
            Error::Unbounded(_) => ApoStatus::Unbounded,
            Error::Undefined(_) => ApoStatus::Undefined,
            Error::NoSample(_) => ApoStatus::NoSample,
            Error::Inconsistent(_) => ApoStatus::Inconsistent,
            Error::NotRepresentable(_) => ApoStatus::NotRepresentable,
            Error::Invariant(_) => ApoStatus::Invariant,
        }
    }
}

/// Packing type and characters; `chi4` is 0 where it is undefined.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ApoPackingType {
    pub n: u8,
    pub k: u8,
    pub chi2: i8,
    pub chi4: i8,
}

/// Opaque curvature orbit.
pub struct ApoOrbit(PackingOrbit);

/// Opaque continued fraction: `a0` followed by the computed quotients.
pub struct ApoContinuedFraction(Vec<i64>);

fn guard(f: impl FnOnce() -> Result<(), ApoStatus>) -> ApoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ApoStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => ApoStatus::Panic,
    }
}

fn lift<T>(r: apollonian::Result<T>) -> Result<T, ApoStatus> {
    r.map_err(|e| ApoStatus::from(&e))
}

unsafe fn read4(p: *const i64) -> Result<[i64; 4], ApoStatus> {
    if p.is_null() {
        return Err(ApoStatus::NullPointer);
    }
    let s = std::slice::from_raw_parts(p, 4);
    Ok([s[0], s[1], s[2], s[3]])
}

unsafe fn write<T>(p: *mut T, v: T) -> Result<(), ApoStatus> {
    if p.is_null() {
        return Err(ApoStatus::NullPointer);
    }
    p.write(v);
    Ok(())
}

/// Static, NUL-terminated version string.
#[no_mangle]
pub extern "C" fn apo_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static, NUL-terminated description of a status code.
#[no_mangle]
pub extern "C" fn apo_error_string(status: ApoStatus) -> *const c_char {
    let s: &'static str = match status {
        ApoStatus::Ok => "ok\0",
        ApoStatus::InvalidInput => "invalid input\0",
        ApoStatus::NotDescartes => "not a Descartes quadruple\0",
        ApoStatus::NotReduced => "not a root quadruple\0",
        ApoStatus::CapExceeded => "cap exceeded\0",
        ApoStatus::Overflow => "arithmetic overflow\0",
        ApoStatus::Unbounded => "unbounded\0",
        ApoStatus::Undefined => "undefined\0",
        ApoStatus::NoSample => "no usable sample\0",
        ApoStatus::Inconsistent => "samples disagree\0",
        ApoStatus::NotRepresentable => "not representable\0",
        ApoStatus::Invariant => "internal invariant violated\0",
        ApoStatus::NullPointer => "null pointer argument\0",
        ApoStatus::Panic => "internal panic\0",
    };
    s.as_ptr().cast()
}

/// Kronecker symbol `(a/n)`.
#[no_mangle]
pub extern "C" fn apo_kronecker(a: i64, n: i64) -> i32 {
    kronecker_i64(a, n)
}

/// `(Σk)² − 2Σk²` for four curvatures; zero exactly for Descartes quadruples.
///
/// # Safety
/// `curvatures` must point to 4 readable `int64_t`, `out` to a writable one.
#[no_mangle]
pub unsafe extern "C" fn apo_descartes_form(curvatures: *const i64, out: *mut i64) -> ApoStatus {
    guard(|| {
        let k = read4(curvatures)?.map(i128::from);
        let v = descartes_form(&k);
        write(out, i64::try_from(v).map_err(|_| ApoStatus::Overflow)?)
    })
}

/// Root of the packing through a Descartes quadruple, sorted ascending.
///
/// # Safety
/// `curvatures` must point to 4 readable and `root_out` to 4 writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn apo_reduce_to_root(curvatures: *const i64, root_out: *mut i64) -> ApoStatus {
    guard(|| {
        let q = lift(DescartesQuadruple::from_i64(read4(curvatures)?))?;
        let mut root = lift(packing::reduce_to_root(&q))?.to_i64().ok_or(ApoStatus::Overflow)?;
        root.sort();
        if root_out.is_null() {
            return Err(ApoStatus::NullPointer);
        }
        ptr::copy_nonoverlapping(root.as_ptr(), root_out, 4);
        Ok(())
    })
}

/// Count curvatures `≤ n` in the packing of a root quadruple.
///
/// # Safety
/// `root` must point to 4 readable `int64_t`; `out` must be writable. On
/// success `*out` owns a handle to be released with [`apo_orbit_free`].
#[no_mangle]
pub unsafe extern "C" fn apo_orbit_enumerate(root: *const i64, n: i64, out: *mut *mut ApoOrbit) -> ApoStatus {
    guard(|| {
        let root = read4(root)?;
        let orbit = lift(packing::enumerate(root, n))?;
        write(out, Box::into_raw(Box::new(ApoOrbit(orbit))))
    })
}

/// Multiplicity of curvature `k` (0 for a null handle).
///
/// # Safety
/// `orbit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_orbit_count(orbit: *const ApoOrbit, k: i64) -> u64 {
    orbit.as_ref().map_or(0, |o| o.0.count(k))
}

/// Number of circles counted, with multiplicity.
///
/// # Safety
/// `orbit` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_orbit_total(orbit: *const ApoOrbit) -> u64 {
    orbit.as_ref().map_or(0, |o| o.0.total())
}

/// # Safety
/// `orbit` must be null or a handle from [`apo_orbit_enumerate`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apo_orbit_free(orbit: *mut ApoOrbit) {
    if !orbit.is_null() {
        drop(Box::from_raw(orbit));
    }
}

/// Type `(n, k)` mod 24 and the characters of a packing.
///
/// # Safety
/// `root` must point to 4 readable `int64_t`, `out` to a writable struct.
#[no_mangle]
pub unsafe extern "C" fn apo_classify(root: *const i64, out: *mut ApoPackingType) -> ApoStatus {
    guard(|| {
        let t = lift(obstructions::packing_type(read4(root)?))?;
        write(out, ApoPackingType { n: t.n, k: t.k, chi2: t.chi2, chi4: t.chi4.unwrap_or(0) })
    })
}

/// Fundamental solution of `X² − dY² = 4`.
///
/// # Safety
/// `x` and `y` must be writable.
#[no_mangle]
pub unsafe extern "C" fn apo_pell(d: i64, x: *mut i64, y: *mut i64) -> ApoStatus {
    guard(|| {
        let (a, b) = lift(quadforms::pell(d))?;
        write(x, a.to_i64().ok_or(ApoStatus::Overflow)?)?;
        write(y, b.to_i64().ok_or(ApoStatus::Overflow)?)
    })
}

/// Expand a number given as text (`17/5`, `sqrt(7)`, `pi`, ...) to `depth`
/// quotients after `a0`.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable. Release
/// the handle with [`apo_cf_free`].
#[no_mangle]
pub unsafe extern "C" fn apo_cf_expand(text: *const c_char, depth: usize, out: *mut *mut ApoContinuedFraction) -> ApoStatus {
    guard(|| {
        if text.is_null() {
            return Err(ApoStatus::NullPointer);
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| ApoStatus::InvalidInput)?;
        let cf: CFExpansion = lift(contfrac::cf_expand(&lift(Real::parse(s))?, depth))?;
        let terms: Option<Vec<i64>> = std::iter::once(cf.a0.clone()).chain(cf.terms(depth)).map(|t| t.to_i64()).collect();
        write(out, Box::into_raw(Box::new(ApoContinuedFraction(terms.ok_or(ApoStatus::Overflow)?))))
    })
}

/// Number of stored terms, `a0` included.
///
/// # Safety
/// `cf` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn apo_cf_len(cf: *const ApoContinuedFraction) -> usize {
    cf.as_ref().map_or(0, |c| c.0.len())
}

/// Term `i` (`i = 0` is `a0`).
///
/// # Safety
/// `cf` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn apo_cf_get(cf: *const ApoContinuedFraction, i: usize, out: *mut i64) -> ApoStatus {
    guard(|| {
        let c = cf.as_ref().ok_or(ApoStatus::NullPointer)?;
        write(out, *c.0.get(i).ok_or(ApoStatus::InvalidInput)?)
    })
}

/// # Safety
/// `cf` must be null or a handle from [`apo_cf_expand`] not yet freed.
#[no_mangle]
pub unsafe extern "C" fn apo_cf_free(cf: *mut ApoContinuedFraction) {
    if !cf.is_null() {
        drop(Box::from_raw(cf));
    }
}
