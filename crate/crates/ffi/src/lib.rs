//! C interface. Surfaces live behind an opaque handle; every call returns
//! an `int32_t` status (`OKZ_OK` or an error code) and writes results
//! through out-pointers.

use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_traits::ToPrimitive;
use origami_kz::cover::optimal_degree;
use origami_kz::spectrum::{exact_sum, lyapunov_estimate};
use origami_kz::{parse_origami, Error, Origami};

pub const OKZ_OK: i32 = 0;
/// A required pointer argument was null.
pub const OKZ_NULL_POINTER: i32 = -1;
/// An output buffer was too small; the needed length is still reported.
pub const OKZ_BUFFER_TOO_SMALL: i32 = -2;
/// A value does not fit the C type.
pub const OKZ_OVERFLOW: i32 = -3;
/// The library panicked; this is a bug.
pub const OKZ_PANIC: i32 = -4;

/// Opaque surface handle.
pub struct OrigamiHandle {
    inner: Origami,
}

fn guard(f: impl FnOnce() -> Result<(), i32>) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => OKZ_OK,
        Ok(Err(code)) => code,
        Err(_) => OKZ_PANIC,
    }
}

fn code(e: Error) -> i32 {
    e.numeric_code()
}

unsafe fn handle<'a>(h: *const OrigamiHandle) -> Result<&'a Origami, i32> {
    h.as_ref().map(|h| &h.inner).ok_or(OKZ_NULL_POINTER)
}

unsafe fn write<T>(out: *mut T, value: T) -> Result<(), i32> {
    if out.is_null() {
        return Err(OKZ_NULL_POINTER);
    }
    out.write(value);
    Ok(())
}

/// Parses a surface (JSON or cycle notation) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_parse(text: *const c_char, out: *mut *mut OrigamiHandle) -> i32 {
    guard(|| {
        if text.is_null() {
            return Err(OKZ_NULL_POINTER);
        }
        let s = CStr::from_ptr(text).to_str().map_err(|_| code(Error::Parse("input is not UTF-8".into())))?;
        let o = parse_origami(s).map_err(code)?;
        write(out, Box::into_raw(Box::new(OrigamiHandle { inner: o })))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `h` must come from `okz_parse` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn okz_free(h: *mut OrigamiHandle) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Number of squares.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_degree(h: *const OrigamiHandle, out: *mut u32) -> i32 {
    guard(|| {
        let n = handle(h)?.n();
        write(out, u32::try_from(n).map_err(|_| OKZ_OVERFLOW)?)
    })
}

/// Zero orders (descending) into `kappa[0..cap]`, their count into `len`,
/// and the genus.
///
/// # Safety
/// `kappa` must hold `cap` values (it may be null when `cap` is 0).
#[no_mangle]
pub unsafe extern "C" fn okz_stratum(
    h: *const OrigamiHandle,
    kappa: *mut u32,
    cap: usize,
    len: *mut usize,
    genus: *mut u32,
) -> i32 {
    guard(|| {
        let s = handle(h)?.stratum();
        write(len, s.kappa.len())?;
        write(genus, s.genus)?;
        if s.kappa.len() > cap {
            return Err(OKZ_BUFFER_TOO_SMALL);
        }
        if !s.kappa.is_empty() {
            if kappa.is_null() {
                return Err(OKZ_NULL_POINTER);
            }
            ptr::copy_nonoverlapping(s.kappa.as_ptr(), kappa, s.kappa.len());
        }
        Ok(())
    })
}

/// Exact sum of the non-negative Lyapunov exponents as `num / den`.
///
/// # Safety
/// `h` must be a live handle; `num` and `den` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_exact_sum(h: *const OrigamiHandle, num: *mut i64, den: *mut i64) -> i32 {
    guard(|| {
        let s = exact_sum(handle(h)?).map_err(code)?;
        write(num, s.value.numer().to_i64().ok_or(OKZ_OVERFLOW)?)?;
        write(den, s.value.denom().to_i64().ok_or(OKZ_OVERFLOW)?)
    })
}

/// 1 when the spectrum is completely degenerate (exact sum 1), else 0.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_is_degenerate(h: *const OrigamiHandle, out: *mut i32) -> i32 {
    guard(|| {
        let s = exact_sum(handle(h)?).map_err(code)?;
        write(out, i32::from(s.is_one()))
    })
}

/// Degree of the cover onto the torus of absolute periods.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_optimal_degree(h: *const OrigamiHandle, out: *mut u64) -> i32 {
    guard(|| write(out, optimal_degree(handle(h)?).map_err(code)?))
}

/// Normalized exponents `1 = l_1 >= .. >= l_g` into `out[0..cap]`.
///
/// # Safety
/// `out` must hold `cap` doubles; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_lyapunov(
    h: *const OrigamiHandle,
    steps: u64,
    trials: usize,
    seed: u64,
    out: *mut f64,
    cap: usize,
    len: *mut usize,
) -> i32 {
    guard(|| {
        let est = lyapunov_estimate(handle(h)?, steps, trials, seed).map_err(code)?;
        write(len, est.lambdas.len())?;
        if est.lambdas.len() > cap {
            return Err(OKZ_BUFFER_TOO_SMALL);
        }
        if out.is_null() {
            return Err(OKZ_NULL_POINTER);
        }
        ptr::copy_nonoverlapping(est.lambdas.as_ptr(), out, est.lambdas.len());
        Ok(())
    })
}

/// The surface as a JSON string; release it with `okz_string_free`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn okz_to_json(h: *const OrigamiHandle, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = CString::new(handle(h)?.to_json_string()).map_err(|_| OKZ_OVERFLOW)?;
        write(out, s.into_raw())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn okz_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Stable name of a status code, as a static string.
#[no_mangle]
pub extern "C" fn okz_status_name(status: i32) -> *const c_char {
    let s: &'static CStr = match status {
        OKZ_OK => c"Ok",
        OKZ_NULL_POINTER => c"NullPointer",
        OKZ_BUFFER_TOO_SMALL => c"BufferTooSmall",
        OKZ_OVERFLOW => c"Overflow",
        OKZ_PANIC => c"Panic",
        1 => c"ParseError",
        2 => c"NotBijection",
        3 => c"NotTransitive",
        4 => c"OrbitTooLarge",
        5 => c"NotCyclicConfiguration",
        6 => c"NonPeriodicTwist",
        7 => c"NumericalUnderflow",
        8 => c"KernelNotDim2",
        9 => c"SampleViolatesConstraints",
        10 => c"NonIntegerDegree",
        11 => c"CorruptRecord",
        12 => c"LockHeld",
        13 => c"InvalidArgument",
        14 => c"IoError",
        _ => c"Unknown",
    };
    s.as_ptr()
}
