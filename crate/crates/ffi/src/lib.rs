//! C ABI for the gybe library.
//!
//! Objects cross the boundary as opaque handles that the caller releases
//! with the matching `*_free` function. Every fallible function returns a
//! [`GybeStatus`]; on failure `gybe_last_error_message` describes the error
//! for the calling thread.

#![deny(unsafe_op_in_unsafe_fn)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use gybe::finder::is_gybe_object;
use gybe::fusion::{
    builtin_category, parse_category, parse_category_str, parse_label_list, CategoryData,
    ObjectExpr,
};
use gybe::linalg::MatrixFile;
use gybe::rep::{assemble_R, braid_rep};
use gybe::verify::{
    check_braid_relations, check_far_commutativity, check_gybe, group_closure, ClosureOrder,
};
use gybe::{Error, ExactMatrix};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GybeStatus {
    Ok = 0,
    InvalidArgument = 1,
    DataError = 2,
    Io = 3,
    Singular = 4,
    Unsupported = 5,
    Internal = 6,
}

/// Category data loaded from JSON or a built-in.
pub struct GybeCategory {
    inner: CategoryData,
}

/// Exact matrix over a cyclotomic field.
pub struct GybeMatrix {
    inner: ExactMatrix,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> GybeStatus {
    match err {
        Error::Data(_) | Error::Json(_) | Error::MissingSymbol(_) | Error::UnknownBuiltin(_) => {
            GybeStatus::DataError
        }
        Error::Io { .. } => GybeStatus::Io,
        Error::Singular { .. }
        | Error::NotInvertible(_)
        | Error::NonInvertibleGenerator { .. }
        | Error::DivisionByZero => GybeStatus::Singular,
        Error::Unsupported(_)
        | Error::SearchTooLarge { .. }
        | Error::SizeCap { .. }
        | Error::OrderTooLarge { .. } => GybeStatus::Unsupported,
        _ => GybeStatus::InvalidArgument,
    }
}

/// Run `f`, translating errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Error>) -> GybeStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            GybeStatus::Ok
        }
        Ok(Err(err)) => {
            let status = status_of(&err);
            set_error(err.to_string());
            status
        }
        Err(_) => {
            set_error("internal panic".into());
            GybeStatus::Internal
        }
    }
}

fn null_error(what: &str) -> Error {
    Error::InvalidArgument(format!("{what} is null"))
}

/// # Safety
/// `s` must be null or a valid NUL-terminated string.
unsafe fn text<'a>(s: *const c_char, what: &str) -> Result<&'a str, Error> {
    if s.is_null() {
        return Err(null_error(what));
    }
    // SAFETY: checked non-null; validity is the caller's contract
    unsafe { CStr::from_ptr(s) }
        .to_str()
        .map_err(|_| Error::InvalidArgument(format!("{what} is not UTF-8")))
}

/// # Safety
/// `p` must be null or point to a live handle.
unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Error> {
    // SAFETY: caller guarantees the pointer came from this library
    unsafe { p.as_ref() }.ok_or_else(|| null_error(what))
}

/// # Safety
/// `out` must be null or writable.
unsafe fn put<T>(out: *mut T, value: T, what: &str) -> Result<(), Error> {
    if out.is_null() {
        return Err(null_error(what));
    }
    // SAFETY: checked non-null; writability is the caller's contract
    unsafe { out.write(value) };
    Ok(())
}

/// Message for the last failed call on this thread, or null. Valid until the
/// next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn gybe_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static version string.
#[no_mangle]
pub extern "C" fn gybe_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Load a built-in category (`"jk6"` or `"ising"`).
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_category_builtin(
    name: *const c_char,
    out: *mut *mut GybeCategory,
) -> GybeStatus {
    guard(|| {
        let name = unsafe { text(name, "name") }?;
        let cat = builtin_category(name)?;
        unsafe {
            put(
                out,
                Box::into_raw(Box::new(GybeCategory { inner: cat })),
                "out",
            )
        }
    })
}

/// Load a category file from disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_category_load(
    path: *const c_char,
    out: *mut *mut GybeCategory,
) -> GybeStatus {
    guard(|| {
        let path = unsafe { text(path, "path") }?;
        let cat = parse_category(path)?;
        unsafe {
            put(
                out,
                Box::into_raw(Box::new(GybeCategory { inner: cat })),
                "out",
            )
        }
    })
}

/// Parse a category from JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_category_parse(
    json: *const c_char,
    out: *mut *mut GybeCategory,
) -> GybeStatus {
    guard(|| {
        let json = unsafe { text(json, "json") }?;
        let cat = parse_category_str(json)?;
        unsafe {
            put(
                out,
                Box::into_raw(Box::new(GybeCategory { inner: cat })),
                "out",
            )
        }
    })
}

/// # Safety
/// `cat` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gybe_category_free(cat: *mut GybeCategory) {
    if !cat.is_null() {
        drop(unsafe { Box::from_raw(cat) });
    }
}

/// Number of simple labels.
///
/// # Safety
/// `cat` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_category_rank(
    cat: *const GybeCategory,
    out: *mut usize,
) -> GybeStatus {
    guard(|| {
        let cat = unsafe { handle(cat, "category") }?;
        unsafe { put(out, cat.inner.ring().rank(), "out") }
    })
}

/// Assemble the (d,3,1) R-matrix for a comma-separated object and label set.
///
/// # Safety
/// `cat` must be a live handle, the strings NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_assemble_r(
    cat: *const GybeCategory,
    object: *const c_char,
    set: *const c_char,
    out: *mut *mut GybeMatrix,
) -> GybeStatus {
    guard(|| {
        let cat = &unsafe { handle(cat, "category") }?.inner;
        let ring = cat.ring();
        let x = ObjectExpr::parse(ring, unsafe { text(object, "object") }?)?;
        let s = parse_label_list(ring, unsafe { text(set, "set") }?)?;
        let cert = is_gybe_object(ring, &x, &s).map_err(|r| {
            Error::InvalidArgument(format!("not a gYBE pair: {}", r.describe(ring)))
        })?;
        let r = assemble_R(cat, &cert)?.r;
        unsafe { put(out, Box::into_raw(Box::new(GybeMatrix { inner: r })), "out") }
    })
}

/// Parse a matrix from matrix-file JSON text.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_from_json(
    json: *const c_char,
    out: *mut *mut GybeMatrix,
) -> GybeStatus {
    guard(|| {
        let file: MatrixFile = serde_json::from_str(unsafe { text(json, "json") }?)?;
        let m = ExactMatrix::from_file(&file)?;
        unsafe { put(out, Box::into_raw(Box::new(GybeMatrix { inner: m })), "out") }
    })
}

/// Load a matrix file from disk.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_load(
    path: *const c_char,
    out: *mut *mut GybeMatrix,
) -> GybeStatus {
    guard(|| {
        let path = unsafe { text(path, "path") }?;
        let body = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.into(),
            source,
        })?;
        let file: MatrixFile = serde_json::from_str(&body)?;
        let m = ExactMatrix::from_file(&file)?;
        unsafe { put(out, Box::into_raw(Box::new(GybeMatrix { inner: m })), "out") }
    })
}

/// # Safety
/// `m` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_free(m: *mut GybeMatrix) {
    if !m.is_null() {
        drop(unsafe { Box::from_raw(m) });
    }
}

/// # Safety
/// `m` must be a live handle; `rows` and `cols` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_dim(
    m: *const GybeMatrix,
    rows: *mut usize,
    cols: *mut usize,
) -> GybeStatus {
    guard(|| {
        let m = &unsafe { handle(m, "matrix") }?.inner;
        unsafe { put(rows, m.rows(), "rows") }?;
        unsafe { put(cols, m.cols(), "cols") }
    })
}

/// Floating-point rendering of one entry, for display only.
///
/// # Safety
/// `m` must be a live handle; `re` and `im` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_entry_f64(
    m: *const GybeMatrix,
    row: usize,
    col: usize,
    re: *mut f64,
    im: *mut f64,
) -> GybeStatus {
    guard(|| {
        let m = &unsafe { handle(m, "matrix") }?.inner;
        if row >= m.rows() || col >= m.cols() {
            return Err(Error::InvalidArgument(format!(
                "entry ({row}, {col}) outside a {}x{} matrix",
                m.rows(),
                m.cols()
            )));
        }
        let z = m.get(row, col).to_complex();
        unsafe { put(re, z.re, "re") }?;
        unsafe { put(im, z.im, "im") }
    })
}

/// Exact matrix-file JSON; release with [`gybe_string_free`].
///
/// # Safety
/// `m` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_matrix_to_json(
    m: *const GybeMatrix,
    out: *mut *mut c_char,
) -> GybeStatus {
    guard(|| {
        let m = &unsafe { handle(m, "matrix") }?.inner;
        let json = serde_json::to_string(&m.to_file(None)?)?;
        let c = CString::new(json).expect("JSON has no NUL bytes");
        unsafe { put(out, c.into_raw(), "out") }
    })
}

/// # Safety
/// `s` must be null or a string returned by this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn gybe_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Exact check of the (d,m,1) generalized Yang-Baxter equation.
///
/// # Safety
/// `r` must be a live handle and `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_check_gybe(
    r: *const GybeMatrix,
    d: usize,
    m: usize,
    holds: *mut bool,
) -> GybeStatus {
    guard(|| {
        let r = &unsafe { handle(r, "matrix") }?.inner;
        let result = check_gybe(r, d, m)?;
        unsafe { put(holds, result, "holds") }
    })
}

/// # Safety
/// `r` must be a live handle and `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_check_far_commutativity(
    r: *const GybeMatrix,
    d: usize,
    m: usize,
    holds: *mut bool,
) -> GybeStatus {
    guard(|| {
        let r = &unsafe { handle(r, "matrix") }?.inner;
        let result = check_far_commutativity(r, d, m)?;
        unsafe { put(holds, result, "holds") }
    })
}

/// Braid relations of the B_n representation built from a d³×d³ R-matrix.
///
/// # Safety
/// `r` must be a live handle and `holds` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_check_braid_relations(
    r: *const GybeMatrix,
    d: usize,
    n: usize,
    holds: *mut bool,
) -> GybeStatus {
    guard(|| {
        let r = &unsafe { handle(r, "matrix") }?.inner;
        let result = check_braid_relations(&braid_rep(r, d, n)?)?;
        unsafe { put(holds, result, "holds") }
    })
}

/// Order of the group generated by the B_n generators. `*order` is 0 and
/// `*exceeded_cap` true when more than `cap` elements were found.
///
/// # Safety
/// `r` must be a live handle; `order` and `exceeded_cap` writable.
#[no_mangle]
pub unsafe extern "C" fn gybe_group_order(
    r: *const GybeMatrix,
    d: usize,
    n: usize,
    projective: bool,
    cap: usize,
    order: *mut u64,
    exceeded_cap: *mut bool,
) -> GybeStatus {
    guard(|| {
        let r = &unsafe { handle(r, "matrix") }?.inner;
        let rep = braid_rep(r, d, n)?;
        let report = group_closure(&rep.generators, cap, projective)?;
        let (value, exceeded) = match report.order {
            ClosureOrder::Finite(k) => (k as u64, false),
            ClosureOrder::ExceededCap => (0, true),
        };
        unsafe { put(order, value, "order") }?;
        unsafe { put(exceeded_cap, exceeded, "exceeded_cap") }
    })
}
