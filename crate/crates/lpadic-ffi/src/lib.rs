//! C interface. Numbers are opaque handles owned by the caller and released
//! with `lpadic_number_free`; every call returns an `LpadicStatus` and writes
//! results through out-pointers. The message for the last failure on the
//! calling thread is available from `lpadic_last_error`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use lpadic::kl::{kl_special, KlError};
use lpadic::padic::{plog, teichmuller_of, PadicError, PadicNumber};
use num_bigint::BigInt;
use num_rational::BigRational;

/// Status codes returned by every entry point.
#[repr(i32)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LpadicStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotAUnit = 3,
    DivisionByZero = 4,
    PrecisionExhausted = 5,
    PrimeMismatch = 6,
    MathError = 7,
    BufferTooSmall = 8,
    Panic = 9,
}

/// Opaque p-adic number.
pub struct LpadicNumber {
    inner: PadicNumber,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn fail(status: LpadicStatus, msg: impl Into<String>) -> LpadicStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg.into());
    status
}

fn padic_status(e: &PadicError) -> LpadicStatus {
    match e {
        PadicError::NotAUnit(..) => LpadicStatus::NotAUnit,
        PadicError::DivisionByZero => LpadicStatus::DivisionByZero,
        PadicError::PrecisionExhausted => LpadicStatus::PrecisionExhausted,
        PadicError::BadPrime(_) => LpadicStatus::InvalidArgument,
        _ => LpadicStatus::MathError,
    }
}

fn guard(f: impl FnOnce() -> LpadicStatus) -> LpadicStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(LpadicStatus::Panic, "internal panic"),
    }
}

unsafe fn store(out: *mut *mut LpadicNumber, x: PadicNumber) -> LpadicStatus {
    *out = Box::into_raw(Box::new(LpadicNumber { inner: x }));
    LpadicStatus::Ok
}

fn is_odd_prime(p: u64) -> bool {
    p > 2 && p % 2 == 1 && (3..).step_by(2).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Creates `n` at absolute precision `prec`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_from_int(p: u64, n: i64, prec: u32, out: *mut *mut LpadicNumber) -> LpadicStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpadicStatus::NullPointer, "out is null");
        }
        if !is_odd_prime(p) || prec == 0 {
            return fail(LpadicStatus::InvalidArgument, format!("need an odd prime and positive precision, got p = {}, prec = {}", p, prec));
        }
        store(out, PadicNumber::from_int(p, n, prec))
    })
}

/// Creates `num / den`; the precision is relative to the valuation.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_from_rational(
    p: u64,
    num: i64,
    den: i64,
    prec: u32,
    out: *mut *mut LpadicNumber,
) -> LpadicStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpadicStatus::NullPointer, "out is null");
        }
        if den == 0 {
            return fail(LpadicStatus::DivisionByZero, "zero denominator");
        }
        if !is_odd_prime(p) || prec == 0 {
            return fail(LpadicStatus::InvalidArgument, "need an odd prime and positive precision");
        }
        let q = BigRational::new(BigInt::from(num), BigInt::from(den));
        store(out, PadicNumber::from_rational(p, &q, prec))
    })
}

/// Releases a handle. Null is ignored.
///
/// # Safety
/// `x` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_free(x: *mut LpadicNumber) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

unsafe fn binary(
    a: *const LpadicNumber,
    b: *const LpadicNumber,
    out: *mut *mut LpadicNumber,
    op: impl FnOnce(&PadicNumber, &PadicNumber) -> Result<PadicNumber, PadicError>,
) -> LpadicStatus {
    guard(|| {
        if a.is_null() || b.is_null() || out.is_null() {
            return fail(LpadicStatus::NullPointer, "null argument");
        }
        let (a, b) = (&(*a).inner, &(*b).inner);
        if a.p() != b.p() {
            return fail(LpadicStatus::PrimeMismatch, format!("p = {} and p = {}", a.p(), b.p()));
        }
        match op(a, b) {
            Ok(x) => store(out, x),
            Err(e) => fail(padic_status(&e), e.to_string()),
        }
    })
}

unsafe fn unary(
    a: *const LpadicNumber,
    out: *mut *mut LpadicNumber,
    op: impl FnOnce(&PadicNumber) -> Result<PadicNumber, PadicError>,
) -> LpadicStatus {
    guard(|| {
        if a.is_null() || out.is_null() {
            return fail(LpadicStatus::NullPointer, "null argument");
        }
        match op(&(*a).inner) {
            Ok(x) => store(out, x),
            Err(e) => fail(padic_status(&e), e.to_string()),
        }
    })
}

/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_add(a: *const LpadicNumber, b: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    binary(a, b, out, |x, y| Ok(x.add(y)))
}

/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_sub(a: *const LpadicNumber, b: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    binary(a, b, out, |x, y| Ok(x.sub(y)))
}

/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_mul(a: *const LpadicNumber, b: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    binary(a, b, out, |x, y| Ok(x.mul(y)))
}

/// # Safety
/// `a`, `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_div(a: *const LpadicNumber, b: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    binary(a, b, out, |x, y| x.div(y))
}

/// Logarithm of a unit.
///
/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_log(a: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    unary(a, out, plog)
}

/// # Safety
/// `a` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_teichmuller(a: *const LpadicNumber, out: *mut *mut LpadicNumber) -> LpadicStatus {
    unary(a, out, teichmuller_of)
}

/// Writes the valuation, or sets `*is_zero` when the number is zero to
/// its precision.
///
/// # Safety
/// `a` must be a live handle; `val` and `is_zero` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_valuation(a: *const LpadicNumber, val: *mut i64, is_zero: *mut bool) -> LpadicStatus {
    guard(|| {
        if a.is_null() || val.is_null() || is_zero.is_null() {
            return fail(LpadicStatus::NullPointer, "null argument");
        }
        let v = (*a).inner.valuation();
        *is_zero = v.is_none();
        *val = v.unwrap_or(0);
        LpadicStatus::Ok
    })
}

/// Absolute precision: the number is known modulo `p^abs`.
///
/// # Safety
/// `a` must be a live handle and `abs` writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_precision(a: *const LpadicNumber, abs: *mut i64) -> LpadicStatus {
    guard(|| {
        if a.is_null() || abs.is_null() {
            return fail(LpadicStatus::NullPointer, "null argument");
        }
        *abs = (*a).inner.absolute_precision();
        LpadicStatus::Ok
    })
}

unsafe fn write_str(s: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> LpadicStatus {
    if !needed.is_null() {
        *needed = s.len() + 1;
    }
    if buf.is_null() || len < s.len() + 1 {
        return fail(LpadicStatus::BufferTooSmall, format!("need {} bytes", s.len() + 1));
    }
    ptr::copy_nonoverlapping(s.as_ptr(), buf as *mut u8, s.len());
    *buf.add(s.len()) = 0;
    LpadicStatus::Ok
}

/// Writes `unit*p^v + O(p^N)` as a NUL-terminated string. `needed`, if not
/// null, receives the required buffer size including the terminator.
///
/// # Safety
/// `a` must be a live handle; `buf` must hold `len` bytes.
#[no_mangle]
pub unsafe extern "C" fn lpadic_number_to_string(a: *const LpadicNumber, buf: *mut c_char, len: usize, needed: *mut usize) -> LpadicStatus {
    guard(|| {
        if a.is_null() {
            return fail(LpadicStatus::NullPointer, "null argument");
        }
        write_str(&(*a).inner.to_string(), buf, len, needed)
    })
}

/// `L_p(ω^k, 1 - n)` at precision `prec`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn lpadic_kl_special_omega(p: u64, k: i64, n: u32, prec: u32, out: *mut *mut LpadicNumber) -> LpadicStatus {
    guard(|| {
        if out.is_null() {
            return fail(LpadicStatus::NullPointer, "out is null");
        }
        if !is_odd_prime(p) || n == 0 || prec == 0 {
            return fail(LpadicStatus::InvalidArgument, "need an odd prime, n >= 1 and positive precision");
        }
        let chi = lpadic::chars::DirichletCharacter::omega_power(p, k);
        match kl_special(&chi, n, p, prec) {
            Ok(v) => match v.padic() {
                Some(x) => store(out, x.clone()),
                None => fail(LpadicStatus::MathError, "value does not lie in Q_p"),
            },
            Err(KlError::Padic(e)) => fail(padic_status(&e), e.to_string()),
            Err(e) => fail(LpadicStatus::MathError, e.to_string()),
        }
    })
}

/// Copies the message for the last failure on this thread.
///
/// # Safety
/// `buf` must hold `len` bytes; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn lpadic_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> LpadicStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    write_str(&msg, buf, len, needed)
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn lpadic_version() -> *const c_char {
    static VERSION: &CStr = match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
        Ok(v) => v,
        Err(_) => panic!("version contains a NUL"),
    };
    VERSION.as_ptr()
}
