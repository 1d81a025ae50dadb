//! C ABI over `branchkit`.
//!
//! Every fallible call returns a `BkStatus`; on failure, `bk_last_error`
//! gives a message for the calling thread. Strings handed out by the library
//! are owned by the caller and released with `bk_string_free`. Handles are
//! opaque and released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, c_int, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use branchkit::lattice::Weight;
use branchkit::oracle::{check_theorem1, OracleConfig};
use branchkit::quaternionic::{theorem1_branch, BranchingTable, QuaternionicContext};
use branchkit::repweights::HCParameter;
use branchkit::rootsystems::{compact_positive, FormLabel};
use branchkit::specialcases::{
    check_prop3, prop2_admissible, prop3_branch, theorem4_admissible, HermitianData, Sp1qContext,
};
use branchkit::Error;

/// Result codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BkStatus {
    Ok = 0,
    /// Malformed input: wrong dimension, unparsable weight.
    Structural = 1,
    /// Mathematically invalid input, e.g. a non-dominant parameter.
    Domain = 2,
    /// Unknown form label or out-of-range family parameter.
    Config = 3,
    /// A safety bound was exceeded.
    Resource = 4,
    Internal = 5,
    NullArgument = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Quaternionic form with its small positive system.
pub struct BkQuatContext(QuaternionicContext);

/// Sp(1, q) with its distinguished Sp(1, 1).
pub struct BkSp1qContext(Sp1qContext);

/// Finite branching table: parameters `mu` with multiplicities.
pub struct BkTable {
    table: BranchingTable,
    rows: Vec<(CString, CString)>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes replaced");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> BkStatus {
    match e {
        Error::Structural(_) => BkStatus::Structural,
        Error::Domain(_) => BkStatus::Domain,
        Error::Config(_) => BkStatus::Config,
        Error::Resource(_) => BkStatus::Resource,
        Error::Internal(_) => BkStatus::Internal,
    }
}

struct Fail(BkStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> BkStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => BkStatus::Ok,
        Ok(Err(Fail(code, msg))) => {
            set_error(msg);
            code
        }
        Err(_) => {
            set_error("panic inside branchkit".into());
            BkStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(BkStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(BkStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

fn out_arg<T>(p: *mut T, name: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(BkStatus::NullArgument, format!("{name} is null")))
    } else {
        Ok(())
    }
}

fn to_c(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes replaced").into_raw()
}

fn weight(s: &str) -> Result<Weight, Fail> {
    Ok(s.parse::<Weight>()?)
}

fn boxed_table(table: BranchingTable) -> *mut BkTable {
    let rows = table
        .entries
        .iter()
        .map(|(mu, m)| (CString::new(mu.to_string()).expect("no nul"), CString::new(m.to_string()).expect("no nul")))
        .collect();
    Box::into_raw(Box::new(BkTable { table, rows }))
}

/// Message for the last failing call on this thread, or null. Valid until the
/// next failing call on the same thread.
#[no_mangle]
pub extern "C" fn bk_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, static storage.
#[no_mangle]
pub extern "C" fn bk_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn bk_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds a quaternionic context from a label such as `"g2_2"`.
///
/// # Safety
/// `label` must be a valid C string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_quat_context_new(label: *const c_char, out: *mut *mut BkQuatContext) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        let label: FormLabel = str_arg(label, "label")?.parse()?;
        let ctx = QuaternionicContext::new(label)?;
        *out = Box::into_raw(Box::new(BkQuatContext(ctx)));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from `bk_quat_context_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn bk_quat_context_free(ctx: *mut BkQuatContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Half the number of noncompact roots in the small system, `d`.
///
/// # Safety
/// `ctx` must be a live context.
#[no_mangle]
pub unsafe extern "C" fn bk_quat_context_d(ctx: *const BkQuatContext) -> usize {
    ctx.as_ref().map_or(0, |c| c.0.d)
}

/// Closed-form table for the ambient parameter `lambda`, complete up to `cutoff`.
///
/// # Safety
/// Pointers must be valid; `out` receives a table to free with `bk_table_free`.
#[no_mangle]
pub unsafe extern "C" fn bk_quat_branch(
    ctx: *const BkQuatContext,
    lambda: *const c_char,
    cutoff: u32,
    out: *mut *mut BkTable,
) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        let ctx = &ctx.as_ref().ok_or(Fail(BkStatus::NullArgument, "ctx is null".into()))?.0;
        let hc = ctx.parameter(weight(str_arg(lambda, "lambda")?)?)?;
        *out = boxed_table(theorem1_branch(ctx, &hc, cutoff)?);
        Ok(())
    })
}

/// Oracle comparison report as JSON; `agree` tells whether the closed form matched.
///
/// # Safety
/// Pointers must be valid; `json_out` receives a string for `bk_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bk_quat_oracle_check(
    ctx: *const BkQuatContext,
    lambda: *const c_char,
    cutoff: u32,
    step_bound: u32,
    agree: *mut c_int,
    json_out: *mut *mut c_char,
) -> BkStatus {
    guard(|| {
        out_arg(agree, "agree")?;
        out_arg(json_out, "json_out")?;
        let ctx = &ctx.as_ref().ok_or(Fail(BkStatus::NullArgument, "ctx is null".into()))?.0;
        let lam = weight(str_arg(lambda, "lambda")?)?;
        let hc = ctx.parameter(lam.clone())?;
        let table = theorem1_branch(ctx, &hc, cutoff)?;
        let (_, rep) = check_theorem1(ctx, &lam, &table, &OracleConfig::with_step_bound(step_bound))?;
        *agree = c_int::from(rep.agree);
        *json_out = to_c(rep.to_json().to_string());
        Ok(())
    })
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_sp1q_context_new(q: u32, out: *mut *mut BkSp1qContext) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        *out = Box::into_raw(Box::new(BkSp1qContext(Sp1qContext::new(q as usize)?)));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from `bk_sp1q_context_new` or be null.
#[no_mangle]
pub unsafe extern "C" fn bk_sp1q_context_free(ctx: *mut BkSp1qContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// # Safety
/// Pointers must be valid; `out` receives a table to free with `bk_table_free`.
#[no_mangle]
pub unsafe extern "C" fn bk_sp1q_branch(
    ctx: *const BkSp1qContext,
    lambda: *const c_char,
    cutoff: u32,
    out: *mut *mut BkTable,
) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        let ctx = &ctx.as_ref().ok_or(Fail(BkStatus::NullArgument, "ctx is null".into()))?.0;
        let hc = ctx.parameter(weight(str_arg(lambda, "lambda")?)?)?;
        *out = boxed_table(prop3_branch(ctx, &hc, cutoff)?);
        Ok(())
    })
}

/// # Safety
/// As for `bk_quat_oracle_check`.
#[no_mangle]
pub unsafe extern "C" fn bk_sp1q_oracle_check(
    ctx: *const BkSp1qContext,
    lambda: *const c_char,
    cutoff: u32,
    step_bound: u32,
    agree: *mut c_int,
    json_out: *mut *mut c_char,
) -> BkStatus {
    guard(|| {
        out_arg(agree, "agree")?;
        out_arg(json_out, "json_out")?;
        let ctx = &ctx.as_ref().ok_or(Fail(BkStatus::NullArgument, "ctx is null".into()))?.0;
        let lam = weight(str_arg(lambda, "lambda")?)?;
        let hc = ctx.parameter(lam.clone())?;
        let table = prop3_branch(ctx, &hc, cutoff)?;
        let (_, rep) = check_prop3(ctx, &lam, &table, &OracleConfig::with_step_bound(step_bound))?;
        *agree = c_int::from(rep.agree);
        *json_out = to_c(rep.to_json().to_string());
        Ok(())
    })
}

/// Number of rows in the table.
///
/// # Safety
/// `t` must be a live table or null.
#[no_mangle]
pub unsafe extern "C" fn bk_table_len(t: *const BkTable) -> usize {
    t.as_ref().map_or(0, |t| t.rows.len())
}

/// Row `i` in lexicographic order of `mu`. The strings are borrowed from the
/// table and live as long as it does.
///
/// # Safety
/// `t` must be live; `mu` and `mult` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_table_entry(
    t: *const BkTable,
    i: usize,
    mu: *mut *const c_char,
    mult: *mut *const c_char,
) -> BkStatus {
    guard(|| {
        out_arg(mu, "mu")?;
        out_arg(mult, "mult")?;
        let t = t.as_ref().ok_or(Fail(BkStatus::NullArgument, "table is null".into()))?;
        let (a, b) = t
            .rows
            .get(i)
            .ok_or_else(|| Fail(BkStatus::Structural, format!("row {i} out of range ({} rows)", t.rows.len())))?;
        *mu = a.as_ptr();
        *mult = b.as_ptr();
        Ok(())
    })
}

/// Multiplicity at `mu` as a decimal string; zero outside the table.
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `bk_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bk_table_multiplicity(
    t: *const BkTable,
    mu: *const c_char,
    out: *mut *mut c_char,
) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        let t = t.as_ref().ok_or(Fail(BkStatus::NullArgument, "table is null".into()))?;
        let mu = weight(str_arg(mu, "mu")?)?;
        *out = to_c(t.table.multiplicity(&mu).to_string());
        Ok(())
    })
}

/// The table as JSON (`cutoff`, `completeFor`, `entries`).
///
/// # Safety
/// Pointers must be valid; `out` receives a string for `bk_string_free`.
#[no_mangle]
pub unsafe extern "C" fn bk_table_to_json(t: *const BkTable, out: *mut *mut c_char) -> BkStatus {
    guard(|| {
        out_arg(out, "out")?;
        let t = t.as_ref().ok_or(Fail(BkStatus::NullArgument, "table is null".into()))?;
        *out = to_c(t.table.to_json().to_string());
        Ok(())
    })
}

/// # Safety
/// `t` must come from a branch call or be null.
#[no_mangle]
pub unsafe extern "C" fn bk_table_free(t: *mut BkTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Admissibility over the semisimple part of `K` for a Hermitian form.
///
/// # Safety
/// Strings must be valid; `admissible` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_admissible_hermitian(
    form: *const c_char,
    lambda: *const c_char,
    admissible: *mut c_int,
) -> BkStatus {
    guard(|| {
        out_arg(admissible, "admissible")?;
        let hd = HermitianData::new(str_arg(form, "form")?.parse()?)?;
        let hc = HCParameter::new(&hd.rd, weight(str_arg(lambda, "lambda")?)?, compact_positive(&hd.rd))?;
        *admissible = c_int::from(theorem4_admissible(&hd, &hc)?.admissible);
        Ok(())
    })
}

/// Admissibility of SO(3, 2n) restricted to its SO(3) factor.
///
/// # Safety
/// `admissible` must be writable.
#[no_mangle]
pub unsafe extern "C" fn bk_admissible_so3(n: u32, admissible: *mut c_int) -> BkStatus {
    guard(|| {
        out_arg(admissible, "admissible")?;
        *admissible = c_int::from(prop2_admissible(n)?.admissible);
        Ok(())
    })
}
