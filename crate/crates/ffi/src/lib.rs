//! C ABI over `mplkit`.
//!
//! Every fallible function returns an [`MplStatus`]; on failure the message is
//! available from [`mpl_last_error`] on the same thread. Strings handed out by the
//! library must be released with [`mpl_string_free`], index handles with
//! [`mpl_index_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use mplkit::finite::{fmzv_series, ModRing};
use mplkit::index::Index;
use mplkit::numeric::mzv;
use mplkit::suite::{run_suite, RunConfig, Suite, Summary};
use mplkit::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MplStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    Domain = 5,
    Precision = 6,
    Config = 7,
    Panic = 8,
}

/// Opaque index handle.
pub struct MplIndex(Index);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> MplStatus {
    match e {
        Error::Parse(_) | Error::NonPositivePart(_) => MplStatus::Parse,
        Error::NotConvergent(_) | Error::LetterOnPath(_) | Error::DivergentWord(_) | Error::UnsupportedDomain(_) => {
            MplStatus::Domain
        }
        Error::TermCap { .. } | Error::StepUnderflow(_) | Error::Relation(_) => MplStatus::Precision,
        Error::Config(_) | Error::UnknownSuite(_) | Error::Io(_) => MplStatus::Config,
        _ => MplStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into a status and the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), (MplStatus, String)>) -> MplStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            MplStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            MplStatus::Panic
        }
    }
}

fn lib<T>(r: mplkit::Result<T>) -> Result<T, (MplStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn read_str<'a>(s: *const c_char) -> Result<&'a str, (MplStatus, String)> {
    if s.is_null() {
        return Err((MplStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| (MplStatus::InvalidUtf8, "string is not UTF-8".into()))
}

unsafe fn read_index<'a>(h: *const MplIndex) -> Result<&'a Index, (MplStatus, String)> {
    h.as_ref()
        .map(|i| &i.0)
        .ok_or((MplStatus::NullPointer, "null index handle".into()))
}

fn out_ptr<T>(out: *mut T) -> Result<(), (MplStatus, String)> {
    if out.is_null() {
        Err((MplStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn mpl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Release a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mpl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse `"1,2"` (or `"-"` for the empty index) into a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_parse(text: *const c_char, out: *mut *mut MplIndex) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        let k: Index = lib(read_str(text)?.parse())?;
        *out = Box::into_raw(Box::new(MplIndex(k)));
        Ok(())
    })
}

/// Release an index handle. Null is ignored.
///
/// # Safety
/// `h` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_free(h: *mut MplIndex) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Weight of the index, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_weight(h: *const MplIndex) -> u32 {
    h.as_ref().map_or(0, |i| i.0.weight())
}

/// Depth of the index, or 0 for a null handle.
///
/// # Safety
/// `h` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_depth(h: *const MplIndex) -> usize {
    h.as_ref().map_or(0, |i| i.0.depth())
}

/// Text form, e.g. `"1,2"`. Free with [`mpl_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_to_string(h: *const MplIndex, out: *mut *mut c_char) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        *out = to_c(read_index(h)?.to_string());
        Ok(())
    })
}

/// The dual index of an admissible index, as a new handle.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_dagger(h: *const MplIndex, out: *mut *mut MplIndex) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        let d = lib(read_index(h)?.dagger())?;
        *out = Box::into_raw(Box::new(MplIndex(d)));
        Ok(())
    })
}

/// The vee-dual of a nonempty index, as a new handle.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_index_vee(h: *const MplIndex, out: *mut *mut MplIndex) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        let v = lib(read_index(h)?.vee())?;
        *out = Box::into_raw(Box::new(MplIndex(v)));
        Ok(())
    })
}

/// `ζ(k)` of an admissible index as a decimal string with `digits` digits after the point.
/// Free the result with [`mpl_string_free`].
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_mzv(h: *const MplIndex, digits: u32, out: *mut *mut c_char) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        let v = lib(mzv(read_index(h)?, digits))?;
        *out = to_c(v.to_decimal(digits));
        Ok(())
    })
}

/// `Σ_{n<m} ζ*_{<p}(k, {1}^n) p^n` modulo `p^m`, as a residue in `[0, p^m)`.
///
/// # Safety
/// `h` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_fmzv_star_series(h: *const MplIndex, p: u64, m: u32, out: *mut u64) -> MplStatus {
    guard(|| {
        out_ptr(out)?;
        let k = read_index(h)?;
        if p == 2 {
            return lib(Err(Error::EvenPrime));
        }
        let ring = lib(ModRing::new(p, m))?;
        *out = lib(fmzv_series(&ring, k))?;
        Ok(())
    })
}

/// Run a named suite. `config_toml` may be null. On success `*out_jsonl` holds one
/// JSON report per line (free with [`mpl_string_free`]) and `*failures` the number of
/// FAIL reports.
///
/// # Safety
/// `suite` must be a NUL-terminated string, `config_toml` null or NUL-terminated;
/// both output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn mpl_run_suite(
    suite: *const c_char,
    config_toml: *const c_char,
    out_jsonl: *mut *mut c_char,
    failures: *mut usize,
) -> MplStatus {
    guard(|| {
        out_ptr(out_jsonl)?;
        out_ptr(failures)?;
        let suite: Suite = lib(read_str(suite)?.parse())?;
        let cfg = if config_toml.is_null() {
            RunConfig::default()
        } else {
            lib(RunConfig::from_toml(read_str(config_toml)?))?
        };
        let reports = lib(run_suite(&cfg, suite))?;
        let mut buf = Vec::new();
        lib(mplkit::suite::write_json_lines(&mut buf, &reports))?;
        *failures = Summary::of(&reports).failures();
        *out_jsonl = to_c(String::from_utf8(buf).expect("JSON is UTF-8"));
        Ok(())
    })
}
