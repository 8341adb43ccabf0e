//! C ABI for the satotate toolkit. All handles are opaque; every function
//! returns an `StStatus` or a value guarded by one. Strings returned by the
//! library must be released with `st_string_free`.

use std::ffi::{c_char, CStr, CString};
use std::ptr;
use std::sync::Arc;

use satotate::equidist::Verdict;
use satotate::error::Error;
use satotate::frobenius::{self, CurveSpec};
use satotate::group_models::{builtin_model_with_cap, default_cap, GroupModel};
use satotate::pipeline::{run_test_pipeline, ModelSelection, PipelineConfig};

/// Status codes of every fallible C-ABI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    UnknownModel = 3,
    SingularCurve = 4,
    BadInput = 5,
    TooFewSamples = 6,
    TestFailed = 7,
    InternalError = 8,
}

fn status_of(err: &Error) -> StStatus {
    match err {
        Error::UnknownModel { .. } => StStatus::UnknownModel,
        Error::SingularCurve { .. } => StStatus::SingularCurve,
        Error::TooFewSamples { .. } => StStatus::TooFewSamples,
        Error::Csv { .. } | Error::HasseViolation { .. } | Error::Contract(_) => {
            StStatus::BadInput
        }
        _ => StStatus::InternalError,
    }
}

/// Opaque handle to a group model.
pub struct StModel {
    inner: Arc<GroupModel>,
}

/// Opaque handle to a sequence of (p, a_p) samples.
pub struct StSamples {
    traces: Vec<(u64, i64)>,
}

unsafe fn str_arg<'a>(s: *const c_char) -> Result<&'a str, StStatus> {
    if s.is_null() {
        return Err(StStatus::NullArgument);
    }
    CStr::from_ptr(s).to_str().map_err(|_| StStatus::InvalidUtf8)
}

fn string_out(s: String, out: *mut *mut c_char) -> StStatus {
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            StStatus::Ok
        }
        Err(_) => StStatus::InternalError,
    }
}

/// Creates a model by catalog name (e.g. "SU2", "N_U1", "O3_CANDIDATE").
/// `char_cap` <= 0 selects the model's default character cap.
///
/// # Safety
/// `name` must be a valid NUL-terminated string; `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn st_model_new(
    name: *const c_char,
    char_cap: i32,
    out: *mut *mut StModel,
) -> StStatus {
    if out.is_null() {
        return StStatus::NullArgument;
    }
    let name = match str_arg(name) {
        Ok(s) => s,
        Err(st) => return st,
    };
    let cap = if char_cap <= 0 {
        default_cap(name)
    } else {
        char_cap as u32
    };
    match builtin_model_with_cap(name, cap) {
        Ok(model) => {
            *out = Box::into_raw(Box::new(StModel { inner: model }));
            StStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Returns the model's metadata as a JSON string (release with
/// `st_string_free`).
///
/// # Safety
/// `model` must be a handle from `st_model_new`; `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn st_model_metadata_json(
    model: *const StModel,
    out: *mut *mut c_char,
) -> StStatus {
    if model.is_null() || out.is_null() {
        return StStatus::NullArgument;
    }
    let json = (*model).inner.metadata_json().to_string();
    string_out(json, out)
}

/// Releases a model handle.
///
/// # Safety
/// `model` must be a handle from `st_model_new` or null.
#[no_mangle]
pub unsafe extern "C" fn st_model_free(model: *mut StModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Generates Frobenius traces of y^2 = x^3 + a x + b for good primes
/// 5 <= p <= bound.
///
/// # Safety
/// `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn st_samples_generate(
    a: i64,
    b: i64,
    bound: u64,
    out: *mut *mut StSamples,
) -> StStatus {
    if out.is_null() {
        return StStatus::NullArgument;
    }
    let curve = match CurveSpec::new(a, b) {
        Ok(c) => c,
        Err(e) => return status_of(&e),
    };
    match frobenius::generate_traces(&curve, bound) {
        Ok((traces, _skipped)) => {
            *out = Box::into_raw(Box::new(StSamples { traces }));
            StStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Parses a `p,ap` CSV (with header) into a sample handle.
///
/// # Safety
/// `csv` must be a valid NUL-terminated string; `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn st_samples_from_csv(
    csv: *const c_char,
    negate_ap: bool,
    out: *mut *mut StSamples,
) -> StStatus {
    if out.is_null() {
        return StStatus::NullArgument;
    }
    let text = match str_arg(csv) {
        Ok(s) => s,
        Err(st) => return st,
    };
    match frobenius::read_csv(text.as_bytes(), negate_ap) {
        Ok(traces) => {
            *out = Box::into_raw(Box::new(StSamples { traces }));
            StStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Number of samples in the handle.
///
/// # Safety
/// `samples` must be a valid handle.
#[no_mangle]
pub unsafe extern "C" fn st_samples_len(samples: *const StSamples) -> usize {
    if samples.is_null() {
        return 0;
    }
    (*samples).traces.len()
}

/// Serializes the samples back to CSV (release with `st_string_free`).
///
/// # Safety
/// `samples` must be a valid handle; `out` must be non-null.
#[no_mangle]
pub unsafe extern "C" fn st_samples_write_csv(
    samples: *const StSamples,
    out: *mut *mut c_char,
) -> StStatus {
    if samples.is_null() || out.is_null() {
        return StStatus::NullArgument;
    }
    let mut buf = Vec::new();
    if frobenius::write_csv(&mut buf, &(*samples).traces).is_err() {
        return StStatus::InternalError;
    }
    match String::from_utf8(buf) {
        Ok(s) => string_out(s, out),
        Err(_) => StStatus::InternalError,
    }
}

/// Releases a sample handle.
///
/// # Safety
/// `samples` must be a handle from this library or null.
#[no_mangle]
pub unsafe extern "C" fn st_samples_free(samples: *mut StSamples) {
    if !samples.is_null() {
        drop(Box::from_raw(samples));
    }
}

/// Runs the full test battery. `model_selection` follows the CLI syntax
/// (`NAME`, `auto`, or `sym2:NAME`). On success `report_out` receives the
/// JSON report (release with `st_string_free`) and `verdict_out` receives
/// 0 = PASS, 1 = FAIL, 3 = INCONCLUSIVE.
///
/// # Safety
/// All pointer arguments must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn st_run_test(
    samples: *const StSamples,
    model_selection: *const c_char,
    char_cap: i32,
    z: f64,
    report_out: *mut *mut c_char,
    verdict_out: *mut i32,
) -> StStatus {
    if samples.is_null() || report_out.is_null() || verdict_out.is_null() {
        return StStatus::NullArgument;
    }
    let selection = match str_arg(model_selection) {
        Ok(s) => ModelSelection::parse(s),
        Err(st) => return st,
    };
    let cfg = PipelineConfig {
        selection,
        char_cap: if char_cap <= 0 { None } else { Some(char_cap as u32) },
        z,
    };
    match run_test_pipeline(&(*samples).traces, &cfg) {
        Ok(outcome) => {
            *verdict_out = match outcome.verdict {
                Verdict::Pass => 0,
                Verdict::Fail => 1,
                Verdict::Inconclusive => 3,
            };
            string_out(outcome.report.to_string(), report_out)
        }
        Err(e) => status_of(&e),
    }
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must have been returned by this library, or null.
#[no_mangle]
pub unsafe extern "C" fn st_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Always null-safe: returns a static library version string (do not free).
#[no_mangle]
pub extern "C" fn st_version() -> *const c_char {
    static VERSION: &[u8] = b"0.1.0\0";
    VERSION.as_ptr() as *const c_char
}

// Silence dead-code warnings for ptr when unused on some targets.
#[allow(unused)]
fn _assert_send() {
    let _ = ptr::null::<StModel>();
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::ffi::CString;

    unsafe fn take_string(p: *mut c_char) -> String {
        let s = CStr::from_ptr(p).to_str().unwrap().to_string();
        st_string_free(p);
        s
    }

    #[test]
    fn model_lifecycle_and_metadata() {
        unsafe {
            let name = CString::new("SU2").unwrap();
            let mut model: *mut StModel = ptr::null_mut();
            assert_eq!(st_model_new(name.as_ptr(), 0, &mut model), StStatus::Ok);
            let mut json: *mut c_char = ptr::null_mut();
            assert_eq!(st_model_metadata_json(model, &mut json), StStatus::Ok);
            let text = take_string(json);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["name"], "SU2");
            st_model_free(model);
        }
    }

    #[test]
    fn unknown_model_is_reported() {
        unsafe {
            let name = CString::new("NOPE").unwrap();
            let mut model: *mut StModel = ptr::null_mut();
            assert_eq!(
                st_model_new(name.as_ptr(), 0, &mut model),
                StStatus::UnknownModel
            );
        }
    }

    #[test]
    fn null_arguments_are_rejected() {
        unsafe {
            let mut model: *mut StModel = ptr::null_mut();
            assert_eq!(
                st_model_new(ptr::null(), 0, &mut model),
                StStatus::NullArgument
            );
            assert_eq!(st_samples_len(ptr::null()), 0);
            st_model_free(ptr::null_mut());
            st_samples_free(ptr::null_mut());
            st_string_free(ptr::null_mut());
        }
    }

    #[test]
    fn generate_csv_round_trip() {
        unsafe {
            let mut samples: *mut StSamples = ptr::null_mut();
            assert_eq!(st_samples_generate(1, 1, 100, &mut samples), StStatus::Ok);
            assert_eq!(st_samples_len(samples), 22);
            let mut csv: *mut c_char = ptr::null_mut();
            assert_eq!(st_samples_write_csv(samples, &mut csv), StStatus::Ok);
            let text = take_string(csv);
            assert!(text.starts_with("p,ap\n5,"));

            let ctext = CString::new(text).unwrap();
            let mut parsed: *mut StSamples = ptr::null_mut();
            assert_eq!(
                st_samples_from_csv(ctext.as_ptr(), false, &mut parsed),
                StStatus::Ok
            );
            assert_eq!(st_samples_len(parsed), 22);
            st_samples_free(parsed);
            st_samples_free(samples);
        }
    }

    #[test]
    fn singular_curve_status() {
        unsafe {
            let mut samples: *mut StSamples = ptr::null_mut();
            assert_eq!(
                st_samples_generate(0, 0, 100, &mut samples),
                StStatus::SingularCurve
            );
        }
    }

    #[test]
    fn bad_csv_status() {
        unsafe {
            let csv = CString::new("p,ap\n9,1\n").unwrap();
            let mut samples: *mut StSamples = ptr::null_mut();
            assert_eq!(
                st_samples_from_csv(csv.as_ptr(), false, &mut samples),
                StStatus::BadInput
            );
        }
    }

    #[test]
    fn end_to_end_test_run() {
        unsafe {
            let mut samples: *mut StSamples = ptr::null_mut();
            assert_eq!(
                st_samples_generate(1, 1, 20_000, &mut samples),
                StStatus::Ok
            );
            let sel = CString::new("SU2").unwrap();
            let mut report: *mut c_char = ptr::null_mut();
            let mut verdict: i32 = -1;
            assert_eq!(
                st_run_test(samples, sel.as_ptr(), 0, 4.0, &mut report, &mut verdict),
                StStatus::Ok
            );
            assert_eq!(verdict, 0);
            let text = take_string(report);
            let v: serde_json::Value = serde_json::from_str(&text).unwrap();
            assert_eq!(v["verdict"], "PASS");
            assert_eq!(v["schema"], 1);

            // The obstructed symmetric-square run returns FAIL via the
            // verdict, not an error status.
            let sel = CString::new("sym2:O3_CANDIDATE").unwrap();
            let mut report: *mut c_char = ptr::null_mut();
            assert_eq!(
                st_run_test(samples, sel.as_ptr(), 0, 4.0, &mut report, &mut verdict),
                StStatus::Ok
            );
            assert_eq!(verdict, 1);
            st_string_free(report);
            st_samples_free(samples);
        }
    }

    #[test]
    fn version_is_static() {
        let v = st_version();
        let s = unsafe { CStr::from_ptr(v) }.to_str().unwrap();
        assert_eq!(s, "0.1.0");
    }
}
