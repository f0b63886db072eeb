//! C ABI for `entwine`.
//!
//! Structures cross the boundary as opaque handles created by
//! [`entwine_structure_from_json`] and released by [`entwine_structure_free`].
//! Every fallible function returns an [`EntwineStatus`]; on failure the
//! message is available from [`entwine_last_error_message`] on the same
//! thread. Strings returned through out-parameters are owned by the caller
//! and must be released with [`entwine_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use clap::Parser;

use entwine::cli::format::render;
use entwine::cli::{run, Cli, CliError, StructureFile};
use entwine::complexes::{check_size, cohomology_dims, Theory, DEFAULT_SIZE_GUARD};
use entwine::linalg::ExactField;
use entwine::structures::EntwiningStructure;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntwineStatus {
    Ok = 0,
    /// A check ran and failed, or a mathematical precondition does not hold.
    MathFailure = 1,
    ParseError = 2,
    InvalidArgument = 3,
    NullPointer = 4,
    Internal = 5,
}

/// Which subcomplex to take cohomology of.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EntwineTheory {
    Hochschild = 0,
    Cyclic = 1,
    Invariant = 2,
}

impl From<EntwineTheory> for Theory {
    fn from(t: EntwineTheory) -> Self {
        match t {
            EntwineTheory::Hochschild => Theory::Hochschild,
            EntwineTheory::Cyclic => Theory::Cyclic,
            EntwineTheory::Invariant => Theory::Invariant,
        }
    }
}

/// An entwining structure owned by the library.
pub struct EntwineStructure {
    inner: EntwiningStructure,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(msg).expect("no interior nul")));
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

fn fail(status: EntwineStatus, msg: impl Into<String>) -> EntwineStatus {
    set_error(msg);
    status
}

/// Runs `f`, turning a panic into [`EntwineStatus::Internal`].
fn guarded(f: impl FnOnce() -> EntwineStatus) -> EntwineStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "internal error".into());
            fail(EntwineStatus::Internal, msg)
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, EntwineStatus> {
    if p.is_null() {
        return Err(fail(EntwineStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(EntwineStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn write_string(out: *mut *mut c_char, s: String) {
    *out = CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw();
}

fn cli_status(e: &CliError) -> EntwineStatus {
    match e {
        CliError::Math(_) => EntwineStatus::MathFailure,
        CliError::Parse { .. } => EntwineStatus::ParseError,
        CliError::Io(_) | CliError::Usage(_) => EntwineStatus::InvalidArgument,
    }
}

/// Parses a structure file. `field` may be null to keep the file's field,
/// or `"q"` / `"fp:P"` to override it.
///
/// # Safety
/// `json` and a non-null `field` must be nul-terminated strings; `out` must
/// be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn entwine_structure_from_json(
    json: *const c_char,
    field: *const c_char,
    out: *mut *mut EntwineStructure,
) -> EntwineStatus {
    guarded(|| {
        if out.is_null() {
            return fail(EntwineStatus::NullPointer, "out is null");
        }
        *out = ptr::null_mut();
        let text = match read_str(json, "json") {
            Ok(t) => t,
            Err(s) => return s,
        };
        let over = if field.is_null() {
            None
        } else {
            let f = match read_str(field, "field") {
                Ok(f) => f,
                Err(s) => return s,
            };
            match f.parse::<ExactField>() {
                Ok(f) => Some(f),
                Err(e) => return fail(EntwineStatus::InvalidArgument, e.to_string()),
            }
        };
        match StructureFile::parse(text).and_then(|f| f.to_structure(over)) {
            Ok(inner) => {
                *out = Box::into_raw(Box::new(EntwineStructure { inner }));
                EntwineStatus::Ok
            }
            Err(e) => fail(EntwineStatus::ParseError, e.to_string()),
        }
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `handle` must come from [`entwine_structure_from_json`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn entwine_structure_free(handle: *mut EntwineStructure) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Dimensions of the algebra and the coalgebra.
///
/// # Safety
/// `handle` must be a live handle; `dim_a` and `dim_c` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn entwine_structure_dims(
    handle: *const EntwineStructure,
    dim_a: *mut usize,
    dim_c: *mut usize,
) -> EntwineStatus {
    guarded(|| {
        if handle.is_null() || dim_a.is_null() || dim_c.is_null() {
            return fail(EntwineStatus::NullPointer, "null argument");
        }
        let s = &(*handle).inner;
        *dim_a = s.dim_a();
        *dim_c = s.dim_c();
        EntwineStatus::Ok
    })
}

/// Checks the axioms. Writes 1 to `passed` when all hold and 0 otherwise;
/// the per-axiom report is written to `report_json` when it is non-null.
///
/// # Safety
/// `handle` must be a live handle; `passed` must be valid for a write;
/// `report_json` must be null or valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn entwine_validate(
    handle: *const EntwineStructure,
    passed: *mut i32,
    report_json: *mut *mut c_char,
) -> EntwineStatus {
    guarded(|| {
        if handle.is_null() || passed.is_null() {
            return fail(EntwineStatus::NullPointer, "null argument");
        }
        let outcome = match entwine::cli::commands::validate(&(*handle).inner) {
            Ok(o) => o,
            Err(e) => return fail(cli_status(&e), e.to_string()),
        };
        *passed = i32::from(outcome.passed);
        if !report_json.is_null() {
            write_string(report_json, outcome.to_json());
        }
        EntwineStatus::Ok
    })
}

/// Cohomology dimensions in degrees `0..=max_degree`, written to `out`,
/// which must hold at least `max_degree + 1` entries.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid for `out_len` writes.
#[no_mangle]
pub unsafe extern "C" fn entwine_cohomology_dims(
    handle: *const EntwineStructure,
    theory: EntwineTheory,
    max_degree: usize,
    out: *mut usize,
    out_len: usize,
) -> EntwineStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(EntwineStatus::NullPointer, "null argument");
        }
        if out_len <= max_degree {
            return fail(
                EntwineStatus::InvalidArgument,
                format!("out holds {out_len} entries, {} needed", max_degree + 1),
            );
        }
        let s = &(*handle).inner;
        if let Some(v) = s.validate().failures().next() {
            return fail(EntwineStatus::MathFailure, format!("the structure fails the {} axiom", v.axiom));
        }
        if let Err(e) = check_size(s, max_degree, DEFAULT_SIZE_GUARD) {
            return fail(EntwineStatus::InvalidArgument, e.to_string());
        }
        let dims = cohomology_dims(s, theory.into(), max_degree);
        std::slice::from_raw_parts_mut(out, dims.len()).copy_from_slice(&dims);
        EntwineStatus::Ok
    })
}

/// The structure in canonical file form.
///
/// # Safety
/// `handle` must be a live handle; `out` must be valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn entwine_structure_to_json(
    handle: *const EntwineStructure,
    out: *mut *mut c_char,
) -> EntwineStatus {
    guarded(|| {
        if handle.is_null() || out.is_null() {
            return fail(EntwineStatus::NullPointer, "null argument");
        }
        write_string(out, StructureFile::from_structure(&(*handle).inner).to_json());
        EntwineStatus::Ok
    })
}

/// Runs a command-line invocation such as `{"cohomology", "s.json",
/// "--max-degree", "3"}` (without the program name) and writes its JSON
/// report to `report_json`. A failed check returns
/// [`EntwineStatus::MathFailure`] together with the report.
///
/// # Safety
/// `argv` must point to `argc` nul-terminated strings; `report_json` must be
/// valid for a pointer write.
#[no_mangle]
pub unsafe extern "C" fn entwine_run(
    argc: usize,
    argv: *const *const c_char,
    report_json: *mut *mut c_char,
) -> EntwineStatus {
    guarded(|| {
        if report_json.is_null() || (argc > 0 && argv.is_null()) {
            return fail(EntwineStatus::NullPointer, "null argument");
        }
        *report_json = ptr::null_mut();
        let mut args = vec!["entwine".to_string()];
        for k in 0..argc {
            match read_str(*argv.add(k), "argument") {
                Ok(a) => args.push(a.to_string()),
                Err(s) => return s,
            }
        }
        let cli = match Cli::try_parse_from(&args) {
            Ok(c) => c,
            Err(e) => return fail(EntwineStatus::InvalidArgument, e.to_string()),
        };
        match run(&cli) {
            Ok(outcome) => {
                write_string(report_json, outcome.to_json());
                if outcome.passed {
                    EntwineStatus::Ok
                } else {
                    fail(EntwineStatus::MathFailure, format!("{} reported a failed check", outcome.command))
                }
            }
            Err(e) => {
                if let CliError::Math(msg) = &e {
                    write_string(report_json, render(&serde_json::json!({ "passed": false, "error": msg })));
                }
                fail(cli_status(&e), e.to_string())
            }
        }
    })
}

/// Releases a string returned by this library; null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn entwine_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The message of the last failed call on this thread, or null. The pointer
/// stays valid until the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn entwine_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn entwine_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
