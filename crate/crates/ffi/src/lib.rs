//! C ABI over the attenuata library.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `_free` function. Strings returned through out-pointers are
//! heap allocated and released with `att_string_free`. Every function
//! returns an `AttStatus`; on failure `att_last_error` describes it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use attenuata::budget::Budget;
use attenuata::scheme::{classify_unchecked, gaussian_binomial, valency};
use attenuata::{enumerate_type_m0, AmbientParams, ClassIndex, Error, Field, FieldElement, TypeM0Set};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AttStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotPrimePower = 3,
    FieldMismatch = 4,
    InadmissibleClass = 5,
    Budget = 6,
    Timeout = 7,
    OutOfRange = 8,
    Internal = 98,
    Panic = 99,
}

/// A finite field `GF(q)`.
pub struct AttField {
    field: Field,
}

/// The vertex set `X_m` for fixed `(q, n, l, m)`.
pub struct AttScheme {
    field: Field,
    vertices: TypeM0Set,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> AttStatus {
    match e {
        Error::NotPrimePower(_) => AttStatus::NotPrimePower,
        Error::FieldMismatch(..) => AttStatus::FieldMismatch,
        Error::InadmissibleClass { .. } => AttStatus::InadmissibleClass,
        Error::Scale { .. } => AttStatus::Budget,
        Error::Timeout { .. } => AttStatus::Timeout,
        Error::Internal(_) => AttStatus::Internal,
        _ => AttStatus::InvalidArgument,
    }
}

fn fail(status: AttStatus, msg: impl Into<String>) -> AttStatus {
    set_error(msg.into());
    status
}

fn from_error(e: Error) -> AttStatus {
    let s = status_of(&e);
    fail(s, e.to_string())
}

/// Runs `f`, turning panics into `AttStatus::Panic`.
fn guarded(f: impl FnOnce() -> AttStatus) -> AttStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(AttStatus::Panic, "panic inside attenuata"),
    }
}

unsafe fn write_string(out: *mut *mut c_char, s: String) -> AttStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            AttStatus::Ok
        }
        Err(_) => fail(AttStatus::Internal, "string contains a NUL byte"),
    }
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn att_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Copies the calling thread's last error message into a new string, or
/// stores NULL if there is none.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_last_error(out: *mut *mut c_char) -> AttStatus {
    if out.is_null() {
        return AttStatus::NullPointer;
    }
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    *out = msg.map_or(ptr::null_mut(), CString::into_raw);
    AttStatus::Ok
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn att_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_field_new(q: u32, out: *mut *mut AttField) -> AttStatus {
    if out.is_null() {
        return AttStatus::NullPointer;
    }
    guarded(|| match Field::new(q) {
        Ok(field) => {
            *out = Box::into_raw(Box::new(AttField { field }));
            AttStatus::Ok
        }
        Err(e) => from_error(e),
    })
}

/// # Safety
/// `f` must come from `att_field_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn att_field_free(f: *mut AttField) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// The field order, or 0 for NULL.
///
/// # Safety
/// `f` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn att_field_order(f: *const AttField) -> u32 {
    f.as_ref().map_or(0, |f| f.field.order())
}

#[derive(Clone, Copy)]
#[repr(C)]
pub enum AttFieldOp {
    Add = 0,
    Sub = 1,
    Mul = 2,
    /// `a^{-1}`; `b` is ignored.
    Inv = 3,
    /// `a^(p^b)`.
    Frobenius = 4,
}

/// Applies `op` to elements encoded as integers `0..q`.
///
/// # Safety
/// `f` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_field_op(f: *const AttField, op: AttFieldOp, a: u32, b: u32, out: *mut u32) -> AttStatus {
    let (Some(f), false) = (f.as_ref(), out.is_null()) else {
        return fail(AttStatus::NullPointer, "null field handle or output");
    };
    let q = f.field.order();
    if a >= q || (b >= q && !matches!(op, AttFieldOp::Inv | AttFieldOp::Frobenius)) {
        return fail(AttStatus::FieldMismatch, format!("operand outside GF({q})"));
    }
    let (x, y) = (FieldElement(a as u8), FieldElement(b.min(255) as u8));
    let r = match op {
        AttFieldOp::Add => f.field.add(x, y),
        AttFieldOp::Sub => f.field.sub(x, y),
        AttFieldOp::Mul => f.field.mul(x, y),
        AttFieldOp::Inv => match f.field.inv(x) {
            Some(r) => r,
            None => return fail(AttStatus::InvalidArgument, "zero has no inverse"),
        },
        AttFieldOp::Frobenius => f.field.frobenius(x, b),
    };
    *out = r.value();
    AttStatus::Ok
}

/// Enumerates `X_m` for `(q, n, l, m)` under the default work budget.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_scheme_new(q: u32, n: u32, l: u32, m: u32, out: *mut *mut AttScheme) -> AttStatus {
    if out.is_null() {
        return AttStatus::NullPointer;
    }
    guarded(|| {
        let build = || -> attenuata::Result<AttScheme> {
            let params = AmbientParams::new(q, n as usize, l as usize, m as usize)?;
            let v = params.vertex_count().unwrap_or(u128::MAX);
            Budget::default().check(v.saturating_mul(params.dim() as u128))?;
            let field = params.field()?;
            let vertices = enumerate_type_m0(&params, &field)?;
            Ok(AttScheme { field, vertices })
        };
        match build() {
            Ok(s) => {
                *out = Box::into_raw(Box::new(s));
                AttStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// # Safety
/// `s` must come from `att_scheme_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn att_scheme_free(s: *mut AttScheme) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// `|X_m|`, or 0 for NULL.
///
/// # Safety
/// `s` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn att_scheme_vertex_count(s: *const AttScheme) -> u64 {
    s.as_ref().map_or(0, |s| s.vertices.len() as u64)
}

/// Serialized basis of vertex `index` (rows separated by `;`).
///
/// # Safety
/// `s` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_scheme_vertex(s: *const AttScheme, index: u64, out: *mut *mut c_char) -> AttStatus {
    let (Some(s), false) = (s.as_ref(), out.is_null()) else {
        return fail(AttStatus::NullPointer, "null scheme handle or output");
    };
    if index >= s.vertices.len() as u64 {
        return fail(AttStatus::OutOfRange, format!("vertex {index} of {}", s.vertices.len()));
    }
    write_string(out, s.vertices.get(index as u32).serialize())
}

/// Relation class `(i, j - i)` of the vertex pair `(u, v)`.
///
/// # Safety
/// `s` must be a live handle; `i` and `jmi` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn att_scheme_classify(
    s: *const AttScheme,
    u: u64,
    v: u64,
    i: *mut u32,
    jmi: *mut u32,
) -> AttStatus {
    let (Some(s), false, false) = (s.as_ref(), i.is_null(), jmi.is_null()) else {
        return fail(AttStatus::NullPointer, "null scheme handle or output");
    };
    let len = s.vertices.len() as u64;
    if u >= len || v >= len {
        return fail(AttStatus::OutOfRange, format!("vertex pair ({u},{v}) of {len}"));
    }
    let c = classify_unchecked(s.vertices.get(u as u32), s.vertices.get(v as u32), &s.field);
    *i = c.i as u32;
    *jmi = c.jmi as u32;
    AttStatus::Ok
}

/// Valency of class `(i, jmi)` as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_valency(
    q: u32,
    n: u32,
    l: u32,
    m: u32,
    i: u32,
    jmi: u32,
    out: *mut *mut c_char,
) -> AttStatus {
    if out.is_null() {
        return AttStatus::NullPointer;
    }
    guarded(|| {
        let r = AmbientParams::new(q, n as usize, l as usize, m as usize)
            .and_then(|p| valency(&p, ClassIndex::new(i as usize, jmi as usize)));
        match r {
            Ok(v) => write_string(out, v.to_string()),
            Err(e) => from_error(e),
        }
    })
}

/// The Gaussian binomial `[a, b]_q` as a decimal string.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn att_gaussian_binomial(a: u32, b: u32, q: u32, out: *mut *mut c_char) -> AttStatus {
    if out.is_null() {
        return AttStatus::NullPointer;
    }
    if q < 2 {
        return fail(AttStatus::InvalidArgument, "q must be at least 2");
    }
    guarded(|| write_string(out, gaussian_binomial(a as usize, b as usize, q).to_string()))
}

/// Runs a command-line subcommand (`"check-all"`, `"valencies"`, ...) and
/// returns its JSON report. `exit_code` receives the command-line exit
/// code: 0 pass, 1 mismatch, 2 usage, 3 budget. `budget_ops = 0` keeps the
/// default budget.
///
/// # Safety
/// `command` must be a NUL-terminated string; `json` and `exit_code` valid
/// pointers.
#[no_mangle]
pub unsafe extern "C" fn att_run_check(
    command: *const c_char,
    q: u32,
    n: u32,
    l: u32,
    m: u32,
    budget_ops: u64,
    json: *mut *mut c_char,
    exit_code: *mut i32,
) -> AttStatus {
    if command.is_null() || json.is_null() || exit_code.is_null() {
        return AttStatus::NullPointer;
    }
    let Ok(command) = CStr::from_ptr(command).to_str() else {
        return fail(AttStatus::InvalidArgument, "command is not UTF-8");
    };
    guarded(|| {
        let mut args: Vec<String> = ["attenuata", command, "--format", "json"].iter().map(|s| s.to_string()).collect();
        for (flag, v) in [("--q", q), ("--n", n), ("--l", l), ("--m", m)] {
            args.push(flag.into());
            args.push(v.to_string());
        }
        if budget_ops > 0 {
            args.push("--budget-ops".into());
            args.push(budget_ops.to_string());
        }
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = attenuata::cli::run(args, &mut out, &mut err);
        *exit_code = code;
        if code == attenuata::report::EXIT_USAGE {
            *json = ptr::null_mut();
            return fail(AttStatus::InvalidArgument, String::from_utf8_lossy(&err).trim().to_string());
        }
        write_string(json, String::from_utf8_lossy(&out).into_owned())
    })
}
