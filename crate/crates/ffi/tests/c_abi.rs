use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use entwine_ffi::*;

fn corpus(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/corpus").join(name)
}

fn load(name: &str) -> *mut EntwineStructure {
    let text = CString::new(std::fs::read_to_string(corpus(name)).unwrap()).unwrap();
    let mut h = ptr::null_mut();
    let status = unsafe { entwine_structure_from_json(text.as_ptr(), ptr::null(), &mut h) };
    assert_eq!(status, EntwineStatus::Ok);
    assert!(!h.is_null());
    h
}

fn last_error() -> String {
    let p = entwine_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn take(s: *mut std::ffi::c_char) -> String {
    let out = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { entwine_string_free(s) };
    out
}

#[test]
fn ground_cyclic_dims() {
    let h = load("ground.json");
    let mut dims = [usize::MAX; 5];
    let status =
        unsafe { entwine_cohomology_dims(h, EntwineTheory::Cyclic, 4, dims.as_mut_ptr(), dims.len()) };
    assert_eq!(status, EntwineStatus::Ok);
    assert_eq!(dims, [1, 0, 1, 0, 1]);
    let status =
        unsafe { entwine_cohomology_dims(h, EntwineTheory::Hochschild, 4, dims.as_mut_ptr(), dims.len()) };
    assert_eq!(status, EntwineStatus::Ok);
    assert_eq!(dims, [1, 0, 0, 0, 0]);
    let status =
        unsafe { entwine_cohomology_dims(h, EntwineTheory::Cyclic, 5, dims.as_mut_ptr(), dims.len()) };
    assert_eq!(status, EntwineStatus::InvalidArgument);
    assert!(last_error().contains("6 needed"));
    unsafe { entwine_structure_free(h) };
}

#[test]
fn validation_reports_through_the_handle() {
    let h = load("broken_associativity.json");
    let (mut a, mut c) = (0, 0);
    assert_eq!(unsafe { entwine_structure_dims(h, &mut a, &mut c) }, EntwineStatus::Ok);
    assert_eq!((a, c), (3, 1));
    let mut passed = -1;
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { entwine_validate(h, &mut passed, &mut report) }, EntwineStatus::Ok);
    assert_eq!(passed, 0);
    assert!(take(report).contains("\"associativity\""));
    let mut dims = [0usize; 2];
    let status = unsafe { entwine_cohomology_dims(h, EntwineTheory::Cyclic, 1, dims.as_mut_ptr(), 2) };
    assert_eq!(status, EntwineStatus::MathFailure);
    assert!(last_error().contains("associativity"));
    unsafe { entwine_structure_free(h) };
}

#[test]
fn parse_errors_and_null_pointers() {
    let bad = CString::new("{\"field\": \"fp:91\"}").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { entwine_structure_from_json(bad.as_ptr(), ptr::null(), &mut h) },
        EntwineStatus::ParseError
    );
    assert!(h.is_null());
    assert!(last_error().contains("line 1"));
    assert_eq!(
        unsafe { entwine_structure_from_json(ptr::null(), ptr::null(), &mut h) },
        EntwineStatus::NullPointer
    );
    assert_eq!(
        unsafe { entwine_structure_dims(ptr::null(), ptr::null_mut(), ptr::null_mut()) },
        EntwineStatus::NullPointer
    );
    unsafe { entwine_structure_free(ptr::null_mut()) };
    unsafe { entwine_string_free(ptr::null_mut()) };
}

#[test]
fn field_override_and_canonical_echo() {
    let text = CString::new(std::fs::read_to_string(corpus("dual_numbers.json")).unwrap()).unwrap();
    let field = CString::new("fp:5").unwrap();
    let mut h = ptr::null_mut();
    assert_eq!(
        unsafe { entwine_structure_from_json(text.as_ptr(), field.as_ptr(), &mut h) },
        EntwineStatus::Ok
    );
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { entwine_structure_to_json(h, &mut out) }, EntwineStatus::Ok);
    let echoed = take(out);
    assert!(echoed.contains("\"field\": \"fp:5\""));
    unsafe { entwine_structure_free(h) };
}

#[test]
fn run_mirrors_the_command_line() {
    let args: Vec<CString> =
        ["cohomology", corpus("ground.json").to_str().unwrap(), "--max-degree", "2", "--output", "json"]
            .iter()
            .map(|a| CString::new(*a).unwrap())
            .collect();
    let argv: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    let mut report = ptr::null_mut();
    assert_eq!(unsafe { entwine_run(argv.len(), argv.as_ptr(), &mut report) }, EntwineStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take(report)).unwrap();
    assert_eq!(json["report"]["dims"], serde_json::json!([1, 0, 1]));

    let args: Vec<CString> = ["validate", corpus("broken_associativity.json").to_str().unwrap()]
        .iter()
        .map(|a| CString::new(*a).unwrap())
        .collect();
    let argv: Vec<*const std::ffi::c_char> = args.iter().map(|a| a.as_ptr()).collect();
    assert_eq!(unsafe { entwine_run(argv.len(), argv.as_ptr(), &mut report) }, EntwineStatus::MathFailure);
    assert!(take(report).contains("\"passed\": false"));

    let args = [CString::new("no-such-command").unwrap()];
    let argv = [args[0].as_ptr()];
    assert_eq!(unsafe { entwine_run(1, argv.as_ptr(), &mut report) }, EntwineStatus::InvalidArgument);
    assert!(report.is_null());
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(entwine_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn header_compiles_as_c_and_cpp() {
    let header = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/entwine.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for f in [
        "entwine_structure_from_json",
        "entwine_run",
        "entwine_last_error_message",
        "ENTWINE_STATUS_NULL_POINTER",
    ] {
        assert!(text.contains(f), "{f}");
    }
    for (compiler, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = Command::new(compiler).args(["-fsyntax-only", "-x", lang]).arg(&header).output() else {
            eprintln!("{compiler} not available; skipping");
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
