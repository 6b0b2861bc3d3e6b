//! C ABI for `respmod`.
//!
//! Models live behind an opaque [`RespmodModel`] handle. Every fallible
//! function returns a [`RespmodStatus`] and writes its result through an out
//! pointer; on failure [`respmod_last_error`] describes what went wrong.
//! Strings handed out by the library are NUL-terminated UTF-8 and must be
//! released with [`respmod_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{self, AssertUnwindSafe};
use std::ptr;

use respmod::analysis::{analyze_all, diff_models};
use respmod::dsl::{parse_answers, print_model};
use respmod::elicitation::{information_recorded_table, information_required_table, ingest_all, InfoTable};
use respmod::hazards::{coverage, generate_worksheet};
use respmod::reporting::{
    diff_report, findings_report, table_to_csv, table_to_markdown, to_dot, worksheet_table, ReportFormat,
};
use respmod::{LoadError, Mode, Model};

/// Result of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RespmodStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    ModelError = 4,
    NotFound = 5,
    InvalidArgument = 6,
    Panic = 7,
}

pub const RESPMOD_TABLE_REQUIRED: u32 = 0;
pub const RESPMOD_TABLE_RECORDED: u32 = 1;

pub const RESPMOD_FORMAT_MARKDOWN: u32 = 0;
pub const RESPMOD_FORMAT_CSV: u32 = 1;

/// An immutable, resolved model.
pub struct RespmodModel {
    model: Model,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Error {
    status: RespmodStatus,
    message: String,
}

impl Error {
    fn new(status: RespmodStatus, message: impl Into<String>) -> Self {
        Error {
            status,
            message: message.into(),
        }
    }
}

impl From<LoadError> for Error {
    fn from(e: LoadError) -> Self {
        let status = match e {
            LoadError::Parse(_) => RespmodStatus::ParseError,
            LoadError::Build(_) => RespmodStatus::ModelError,
        };
        Error::new(status, e.to_string())
    }
}

fn set_last_error(message: &str) {
    let c = CString::new(message.replace('\0', "\\0")).expect("NUL bytes replaced");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

/// Runs `body`, records any failure and converts it to a status.
fn guard(body: impl FnOnce() -> Result<(), Error>) -> RespmodStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => RespmodStatus::Ok,
        Ok(Err(e)) => {
            set_last_error(&e.message);
            e.status
        }
        Err(payload) => {
            let what = payload
                .downcast_ref::<String>()
                .map(String::as_str)
                .or_else(|| payload.downcast_ref::<&str>().copied())
                .unwrap_or("unknown panic");
            set_last_error(&format!("internal error: {what}"));
            RespmodStatus::Panic
        }
    }
}

/// # Safety
/// `ptr` must be null or point to a NUL-terminated string.
unsafe fn utf8<'a>(ptr: *const c_char, what: &str) -> Result<&'a str, Error> {
    if ptr.is_null() {
        return Err(Error::new(RespmodStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|e| Error::new(RespmodStatus::InvalidUtf8, format!("{what} is not UTF-8: {e}")))
}

/// # Safety
/// `ptr` must be null or a handle from this library that has not been freed.
unsafe fn model<'a>(ptr: *const RespmodModel, what: &str) -> Result<&'a Model, Error> {
    ptr.as_ref()
        .map(|h| &h.model)
        .ok_or_else(|| Error::new(RespmodStatus::NullArgument, format!("{what} is null")))
}

fn check_out<T>(out: *mut T) -> Result<(), Error> {
    if out.is_null() {
        Err(Error::new(RespmodStatus::NullArgument, "output pointer is null"))
    } else {
        Ok(())
    }
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Error> {
    let c = CString::new(s)
        .map_err(|_| Error::new(RespmodStatus::ModelError, "output contains a NUL byte"))?;
    *out = c.into_raw();
    Ok(())
}

fn not_found(e: impl ToString) -> Error {
    Error::new(RespmodStatus::NotFound, e.to_string())
}

fn table_text(table: &InfoTable, format: u32) -> Result<String, Error> {
    match format {
        RESPMOD_FORMAT_MARKDOWN => Ok(table_to_markdown(table)),
        RESPMOD_FORMAT_CSV => Ok(table_to_csv(table)),
        other => Err(Error::new(RespmodStatus::InvalidArgument, format!("unknown table format {other}"))),
    }
}

/// Parses and resolves `.resp` text. `file` labels error locations and may
/// be null.
///
/// # Safety
/// `text` and `file` must be null or NUL-terminated; `out` must be valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_model_parse(
    text: *const c_char,
    file: *const c_char,
    out: *mut *mut RespmodModel,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let source = utf8(text, "text")?;
        let label = if file.is_null() { "<input>" } else { utf8(file, "file")? };
        let model = respmod::load_model(label, source)?;
        *out = Box::into_raw(Box::new(RespmodModel { model }));
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle that has not already been freed.
#[no_mangle]
pub unsafe extern "C" fn respmod_model_free(model: *mut RespmodModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// The message for the last failed call on this thread, or null. The
/// pointer stays valid until the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn respmod_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Canonical `.resp` text of the model.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_model_print(model: *const RespmodModel, out: *mut *mut c_char) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        put_string(out, print_model(m))
    })
}

/// All findings as a JSON array. `load_threshold` must be at least 1.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_analyze_json(
    model: *const RespmodModel,
    load_threshold: u32,
    out: *mut *mut c_char,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        if load_threshold == 0 {
            return Err(Error::new(RespmodStatus::InvalidArgument, "load threshold must be at least 1"));
        }
        let findings = analyze_all(m, load_threshold as usize);
        put_string(out, findings_report(&findings, ReportFormat::Json))
    })
}

/// The information required (`RESPMOD_TABLE_REQUIRED`) or recorded
/// (`RESPMOD_TABLE_RECORDED`) table of a responsibility, as Markdown or CSV.
///
/// # Safety
/// `model` must be a live handle; `responsibility` NUL-terminated; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_table(
    model: *const RespmodModel,
    responsibility: *const c_char,
    which: u32,
    format: u32,
    out: *mut *mut c_char,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        let name = utf8(responsibility, "responsibility")?;
        let table = match which {
            RESPMOD_TABLE_REQUIRED => information_required_table(m, name).map_err(not_found)?,
            RESPMOD_TABLE_RECORDED => information_recorded_table(m, name).map_err(not_found)?,
            other => return Err(Error::new(RespmodStatus::InvalidArgument, format!("unknown table {other}"))),
        };
        put_string(out, table_text(&table, format)?)
    })
}

/// The hazard worksheet of a responsibility, as Markdown or CSV.
///
/// # Safety
/// As for [`respmod_table`].
#[no_mangle]
pub unsafe extern "C" fn respmod_worksheet(
    model: *const RespmodModel,
    responsibility: *const c_char,
    format: u32,
    out: *mut *mut c_char,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        let name = utf8(responsibility, "responsibility")?;
        let sheet = generate_worksheet(m, name).map_err(not_found)?;
        put_string(out, table_text(&worksheet_table(m, &sheet), format)?)
    })
}

/// Fraction of the responsibility's worksheet rows that are assessed.
///
/// # Safety
/// `model` must be a live handle; `responsibility` NUL-terminated; `out`
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_coverage(
    model: *const RespmodModel,
    responsibility: *const c_char,
    out: *mut f64,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        let name = utf8(responsibility, "responsibility")?;
        *out = coverage(m, name).map_err(not_found)?;
        Ok(())
    })
}

/// Merges `.answers` text into a copy of the model. The input handle is
/// left untouched; the result is a new handle.
///
/// # Safety
/// `model` must be a live handle; `answers` NUL-terminated; `out` valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_model_ingest(
    model: *const RespmodModel,
    answers: *const c_char,
    strict: bool,
    out: *mut *mut RespmodModel,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        let records = parse_answers(utf8(answers, "answers")?).map_err(|errors| {
            let lines: Vec<String> = errors.iter().map(|e| e.to_string()).collect();
            Error::new(RespmodStatus::ParseError, lines.join("\n"))
        })?;
        let mode = if strict { Mode::Strict } else { Mode::Lenient };
        let merged = ingest_all(m, &records, mode).map_err(|e| match e {
            respmod::elicitation::IngestError::UnknownResponsibility(e) => not_found(e),
            other => Error::new(RespmodStatus::ModelError, other.to_string()),
        })?;
        *out = Box::into_raw(Box::new(RespmodModel { model: merged }));
        Ok(())
    })
}

/// Graphviz DOT text of the model.
///
/// # Safety
/// `model` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_dot(model: *const RespmodModel, out: *mut *mut c_char) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let m = self::model(model, "model")?;
        put_string(out, to_dot(m))
    })
}

/// Perception inconsistencies between two models as a JSON array.
///
/// # Safety
/// `left` and `right` must be live handles; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn respmod_diff_json(
    left: *const RespmodModel,
    right: *const RespmodModel,
    out: *mut *mut c_char,
) -> RespmodStatus {
    guard(|| {
        check_out(out)?;
        let l = model(left, "left")?;
        let r = model(right, "right")?;
        put_string(out, diff_report(&diff_models(l, r), ReportFormat::Json))
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn respmod_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn respmod_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
