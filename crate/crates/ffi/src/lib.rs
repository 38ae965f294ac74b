//! C ABI for the metaplectic-ice engine.
//!
//! Systems and coefficient elements are opaque handles owned by the caller
//! and released with their `*_free` function. Strings returned through out
//! parameters are heap allocated and released with [`mice_string_free`].
//! Every fallible call returns a [`MiceStatus`]; on anything but `Ok` a
//! message is available from [`mice_last_error_message`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use metaplectic_ice::engine::{partition_function, partition_via_transfer};
use metaplectic_ice::lattice::{build_standard_system, build_two_row, min_columns, TwoRowOrder};
use metaplectic_ice::{verify, CoeffElem, ColumnSet, Partition, Ring, RowType, SystemSpec};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiceStatus {
    Ok = 0,
    /// The computation ran and found a counterexample.
    VerificationFailed = 1,
    InvalidArgument = 2,
    NullPointer = 3,
    /// A panic or other internal failure was caught at the boundary.
    Internal = 4,
}

pub const MICE_ROW_GAMMA: u32 = 0;
pub const MICE_ROW_DELTA: u32 = 1;

pub const MICE_METHOD_ENUMERATE: u32 = 0;
pub const MICE_METHOD_TRANSFER: u32 = 1;

pub const MICE_ORDER_GAMMA_DELTA: u32 = 0;
pub const MICE_ORDER_DELTA_GAMMA: u32 = 1;

/// A lattice system: dimensions, row types and boundary.
pub struct MiceSystem {
    spec: SystemSpec,
}

/// An element of the coefficient ring.
pub struct MiceCoeff {
    elem: CoeffElem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(MiceStatus, String);

impl<E: std::fmt::Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(MiceStatus::InvalidArgument, e.to_string())
    }
}

/// Run `f`, translating errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<MiceStatus, Failure>) -> MiceStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal panic".into());
            set_error(msg);
            MiceStatus::Internal
        }
    }
}

fn null(what: &str) -> Failure {
    Failure(MiceStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MiceStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_out<T>(out: *mut *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = Box::into_raw(Box::new(value));
    Ok(())
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    *out = CString::new(s).map_err(|e| Failure(MiceStatus::Internal, e.to_string()))?.into_raw();
    Ok(())
}

unsafe fn borrow<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

fn row_type(code: u32) -> Result<RowType, Failure> {
    match code {
        MICE_ROW_GAMMA => Ok(RowType::Gamma),
        MICE_ROW_DELTA => Ok(RowType::Delta),
        other => Err(Failure(MiceStatus::InvalidArgument, format!("unknown row type {other}"))),
    }
}

fn verdict(rep: &verify::VerificationReport) -> MiceStatus {
    if rep.passed() {
        MiceStatus::Ok
    } else {
        if let Some(c) = rep.failures.first() {
            set_error(format!("{}: {} != {}", c.case, c.lhs, c.rhs));
        }
        MiceStatus::VerificationFailed
    }
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn mice_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn mice_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mice_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Standard system for `lambda` (e.g. `"3,2,0"`) with `rows` rows.
/// `row_types` is `"gamma"`, `"delta"`, or one letter per row (`"G,D,G"`).
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_system_standard(
    lambda: *const c_char,
    rows: usize,
    row_types: *const c_char,
    n: u32,
    out: *mut *mut MiceSystem,
) -> MiceStatus {
    guard(|| {
        let lambda: Partition = read_str(lambda, "lambda")?.parse()?;
        let types = read_str(row_types, "row_types")?;
        let kinds = types.split(',').map(|t| t.parse::<RowType>()).collect::<Result<Vec<_>, _>>()?;
        let kinds = if kinds.len() == 1 { vec![kinds[0]; rows] } else { kinds };
        let spec = build_standard_system(&lambda, rows, &kinds, n)?;
        write_out(out, MiceSystem { spec })?;
        Ok(MiceStatus::Ok)
    })
}

/// Two-row system with explicit boundary column sets such as `"{4,2,1}"`.
/// `columns = 0` picks the smallest width that fits.
///
/// # Safety
/// String arguments must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_system_two_row(
    top: *const c_char,
    bottom: *const c_char,
    columns: usize,
    order: u32,
    n: u32,
    out: *mut *mut MiceSystem,
) -> MiceStatus {
    guard(|| {
        let top: ColumnSet = read_str(top, "top")?.parse()?;
        let bottom: ColumnSet = read_str(bottom, "bottom")?.parse()?;
        let order = match order {
            MICE_ORDER_GAMMA_DELTA => TwoRowOrder::GammaDelta,
            MICE_ORDER_DELTA_GAMMA => TwoRowOrder::DeltaGamma,
            other => return Err(Failure(MiceStatus::InvalidArgument, format!("unknown order {other}"))),
        };
        let columns = if columns == 0 { min_columns(&top, &bottom) } else { columns };
        let spec = build_two_row(&top, &bottom, order, columns, n)?;
        write_out(out, MiceSystem { spec })?;
        Ok(MiceStatus::Ok)
    })
}

/// # Safety
/// `system` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mice_system_free(system: *mut MiceSystem) {
    if !system.is_null() {
        drop(Box::from_raw(system));
    }
}

/// One-line description of a system.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_system_describe(system: *const MiceSystem, out: *mut *mut c_char) -> MiceStatus {
    guard(|| {
        let s = borrow(system, "system")?;
        write_string(out, s.spec.to_string())?;
        Ok(MiceStatus::Ok)
    })
}

/// Partition function by enumeration or transfer matrices.
///
/// # Safety
/// `system` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_partition_function(
    system: *const MiceSystem,
    method: u32,
    out: *mut *mut MiceCoeff,
) -> MiceStatus {
    guard(|| {
        let s = borrow(system, "system")?;
        let elem = match method {
            MICE_METHOD_ENUMERATE => partition_function(&s.spec).value,
            MICE_METHOD_TRANSFER => partition_via_transfer(&s.spec).value,
            other => return Err(Failure(MiceStatus::InvalidArgument, format!("unknown method {other}"))),
        };
        write_out(out, MiceCoeff { elem })?;
        Ok(MiceStatus::Ok)
    })
}

/// Parse canonical text into the ring with modulus `n` and `nvars` spectral
/// variables.
///
/// # Safety
/// `text` must be NUL-terminated; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_coeff_parse(text: *const c_char, n: u32, nvars: usize, out: *mut *mut MiceCoeff) -> MiceStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        if n == 0 {
            return Err(Failure(MiceStatus::InvalidArgument, "modulus must be at least 1".into()));
        }
        let elem = CoeffElem::parse(text, Ring::new(n, nvars))?;
        write_out(out, MiceCoeff { elem })?;
        Ok(MiceStatus::Ok)
    })
}

/// Canonical text of an element.
///
/// # Safety
/// `coeff` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_coeff_to_string(coeff: *const MiceCoeff, out: *mut *mut c_char) -> MiceStatus {
    guard(|| {
        let c = borrow(coeff, "coeff")?;
        write_string(out, c.elem.to_string())?;
        Ok(MiceStatus::Ok)
    })
}

/// Exact equality. Elements of different rings compare unequal.
///
/// # Safety
/// Both handles must be live; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_coeff_equal(a: *const MiceCoeff, b: *const MiceCoeff, out: *mut bool) -> MiceStatus {
    guard(|| {
        let (a, b) = (borrow(a, "a")?, borrow(b, "b")?);
        if out.is_null() {
            return Err(null("output pointer"));
        }
        *out = a.elem == b.elem;
        Ok(MiceStatus::Ok)
    })
}

/// # Safety
/// `coeff` must come from this library and not have been freed. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn mice_coeff_free(coeff: *mut MiceCoeff) {
    if !coeff.is_null() {
        drop(Box::from_raw(coeff));
    }
}

/// Yang-Baxter equation for `R^{XY}` on all `64 n^4` boundaries. Returns
/// `VerificationFailed` on a counterexample; `failures` (may be null)
/// receives their count.
///
/// # Safety
/// `failures` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn mice_verify_ybe(x: u32, y: u32, n: u32, failures: *mut usize) -> MiceStatus {
    guard(|| {
        let (x, y) = (row_type(x)?, row_type(y)?);
        if n == 0 {
            return Err(Failure(MiceStatus::InvalidArgument, "n must be at least 1".into()));
        }
        let rep = verify::verify_ybe(x, y, n);
        if !failures.is_null() {
            *failures = rep.failures.len();
        }
        Ok(verdict(&rep))
    })
}

/// `Z(ΓΔ) = Z(ΔΓ)` with swapped parameters for one boundary.
///
/// # Safety
/// String arguments must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mice_verify_two_row(top: *const c_char, bottom: *const c_char, columns: usize, n: u32) -> MiceStatus {
    guard(|| {
        let top: ColumnSet = read_str(top, "top")?.parse()?;
        let bottom: ColumnSet = read_str(bottom, "bottom")?.parse()?;
        let columns = if columns == 0 { min_columns(&top, &bottom) } else { columns };
        Ok(verdict(&verify::verify_two_row(&top, &bottom, columns, n)?))
    })
}

/// `Z(S^Γ_λ) = Z(S^Δ_λ)` with reversed parameters.
///
/// # Safety
/// `lambda` must be NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn mice_verify_duality(lambda: *const c_char, rows: usize, n: u32) -> MiceStatus {
    guard(|| {
        let lambda: Partition = read_str(lambda, "lambda")?.parse()?;
        Ok(verdict(&verify::verify_duality(&lambda, rows, n)?))
    })
}

/// Run a JSON config, as accepted by `mice --config`, and return the
/// rendered report. The status mirrors the CLI exit code (0, 1 or 2); on
/// status 2 the report is an object with an `error` field.
///
/// # Safety
/// `config_json` must be NUL-terminated; `report` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mice_run_json(config_json: *const c_char, report: *mut *mut c_char) -> MiceStatus {
    guard(|| {
        let cfg = read_str(config_json, "config_json")?;
        let (text, code) = metaplectic_ice::cli::run_json(cfg);
        let status = match code {
            0 => MiceStatus::Ok,
            1 => MiceStatus::VerificationFailed,
            _ => {
                set_error(
                    serde_json::from_str::<serde_json::Value>(&text)
                        .ok()
                        .and_then(|v| v["error"].as_str().map(str::to_string))
                        .unwrap_or_else(|| "invalid config".into()),
                );
                MiceStatus::InvalidArgument
            }
        };
        write_string(report, text)?;
        Ok(status)
    })
}
