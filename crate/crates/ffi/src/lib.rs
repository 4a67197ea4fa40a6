//! C interface to the `multisect` library.
//!
//! Diagrams are opaque handles created by [`msd_diagram_parse`] or
//! [`msd_diagram_read`] and released with [`msd_diagram_free`]. Every fallible
//! call returns an [`MsdStatus`]; on failure a message for the calling thread
//! is available from [`msd_last_error_message`]. Strings handed out by the
//! library are owned by the caller and must be released with
//! [`msd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use multisect::format::DiagramFile;
use multisect::multisection::Variant;
use multisect::report::{run, Command, RunError, RunOptions};

/// Result of a library call. The nonzero codes for usage, parse, validation
/// and computation errors agree with the exit statuses of the command-line
/// tool.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsdStatus {
    Ok = 0,
    Usage = 2,
    Parse = 3,
    Invalid = 4,
    Computation = 5,
    NullArgument = 6,
    Utf8 = 7,
    Panic = 8,
}

/// Output rendering for [`msd_run`].
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsdFormat {
    Text = 0,
    Json = 1,
}

/// A parsed diagram file.
pub struct MsdDiagram {
    file: DiagramFile,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(MsdStatus, String);

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        let status = match e {
            RunError::Usage(_) => MsdStatus::Usage,
            RunError::Parse(_) => MsdStatus::Parse,
            RunError::Validation(..) => MsdStatus::Invalid,
            RunError::Computation(_) => MsdStatus::Computation,
        };
        Failure(status, e.to_string())
    }
}

fn set_last_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

/// Runs `f`, recording any failure or panic as the thread's last error.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> MsdStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => MsdStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(&msg);
            status
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "internal error".into());
            set_last_error(&format!("internal error: {msg}"));
            MsdStatus::Panic
        }
    }
}

/// Borrows a required C string argument.
unsafe fn required<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(MsdStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MsdStatus::Utf8, format!("{what} is not valid UTF-8")))
}

unsafe fn optional<'a>(p: *const c_char, what: &str) -> Result<Option<&'a str>, Failure> {
    if p.is_null() {
        Ok(None)
    } else {
        required(p, what).map(Some)
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

unsafe fn store_diagram(out: *mut *mut MsdDiagram, file: DiagramFile) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure(MsdStatus::NullArgument, "output pointer is null".into()));
    }
    *out = Box::into_raw(Box::new(MsdDiagram { file }));
    Ok(())
}

/// Parses diagram text. On success `*out` receives a new handle.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_parse(text: *const c_char, out: *mut *mut MsdDiagram) -> MsdStatus {
    guard(|| {
        if !out.is_null() {
            *out = ptr::null_mut();
        }
        let text = required(text, "text")?;
        let file = DiagramFile::parse(text).map_err(RunError::from)?;
        store_diagram(out, file)
    })
}

/// Reads and parses a diagram file. On success `*out` receives a new handle.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_read(path: *const c_char, out: *mut *mut MsdDiagram) -> MsdStatus {
    guard(|| {
        if !out.is_null() {
            *out = ptr::null_mut();
        }
        let path = required(path, "path")?;
        let file = DiagramFile::read(Path::new(path)).map_err(RunError::from)?;
        store_diagram(out, file)
    })
}

/// Releases a diagram handle. Null is ignored.
///
/// # Safety
/// `diagram` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_free(diagram: *mut MsdDiagram) {
    if !diagram.is_null() {
        drop(Box::from_raw(diagram));
    }
}

/// Number of cut systems in the diagram, or 0 for a null handle.
///
/// # Safety
/// `diagram` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_sections(diagram: *const MsdDiagram) -> usize {
    diagram.as_ref().map_or(0, |d| d.file.diagram.n())
}

/// Writes the diagram back out in the file format.
///
/// # Safety
/// `diagram` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_diagram_serialize(diagram: *const MsdDiagram, out: *mut *mut c_char) -> MsdStatus {
    guard(|| {
        let (Some(d), false) = (diagram.as_ref(), out.is_null()) else {
            return Err(Failure(MsdStatus::NullArgument, "diagram or output pointer is null".into()));
        };
        *out = to_c_string(d.file.serialize());
        Ok(())
    })
}

/// Runs one of the command-line commands (`validate`, `homology`,
/// `rel-homology`, `twisted-homology`, `torsion`, `intersection-form`,
/// `monodromy`, `boundary`) on a diagram.
///
/// `twist_override` and `variant` may be null. On success `*out` receives
/// the report, which the caller frees with [`msd_string_free`].
///
/// # Safety
/// `diagram` must be a live handle, the string arguments NUL-terminated or
/// null where allowed, and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn msd_run(
    diagram: *const MsdDiagram,
    command: *const c_char,
    twist_override: *const c_char,
    variant: *const c_char,
    format: MsdFormat,
    out: *mut *mut c_char,
) -> MsdStatus {
    guard(|| {
        if out.is_null() {
            return Err(Failure(MsdStatus::NullArgument, "output pointer is null".into()));
        }
        *out = ptr::null_mut();
        let d = diagram
            .as_ref()
            .ok_or_else(|| Failure(MsdStatus::NullArgument, "diagram is null".into()))?;
        let command: Command = required(command, "command")?.parse()?;
        let variant = optional(variant, "variant")?
            .map(|v| v.parse::<Variant>().map_err(|e| Failure(MsdStatus::Usage, e)))
            .transpose()?;
        let opts = RunOptions {
            twist_override: optional(twist_override, "twist override")?.map(str::to_owned),
            variant,
            trace: false,
        };
        let report = run(command, &d.file, &opts)?;
        *out = to_c_string(match format {
            MsdFormat::Text => report.text,
            MsdFormat::Json => report.json.to_string(),
        });
        Ok(())
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn msd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Message for the most recent failure on this thread, or null if the last
/// call succeeded. The pointer stays valid until the next call on this
/// thread and must not be freed.
#[no_mangle]
pub extern "C" fn msd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn msd_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
