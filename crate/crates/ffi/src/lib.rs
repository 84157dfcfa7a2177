//! C bindings for `eqdomain`.
//!
//! Semigroups cross the boundary as opaque `EqdSemigroup` handles. Every
//! fallible function returns an [`EqdStatus`]; on failure a message is
//! available from [`eqd_last_error`] on the same thread. Strings returned
//! through out-parameters are owned by the caller and released with
//! [`eqd_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use eqdomain::enumerate::{enumerate_tables, parse_corpus, CorpusError, Mode};
use eqdomain::geometry::{is_algebraic, PointSet, PointSpace};
use eqdomain::proof::{check_semigroup, ProofError};
use eqdomain::terms::{ClosureError, TermFunctions};
use eqdomain::{monogenic_equal, Classification, Semigroup, TableError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqdStatus {
    Ok = 0,
    NullPointer = 1,
    /// A table entry outside `0..order`, or a malformed table.
    InvalidTable = 2,
    NotAssociative = 3,
    InvalidArgument = 4,
    BudgetExceeded = 5,
    /// A witness could not be built or verified; indicates a bug.
    Inconsistent = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqdClassTag {
    Trivial = 0,
    IdempotentNowhereCommutative = 1,
    IdempotentCommutingPair = 2,
    BoundedNonIdempotent = 3,
    Unbounded = 4,
}

/// Classification with its carried witnesses. Unused slots hold `SIZE_MAX`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EqdClassification {
    pub tag: EqdClassTag,
    pub a: usize,
    pub b: usize,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EqdMode {
    Raw = 0,
    UpToIso = 1,
    UpToIsoAndAnti = 2,
}

/// Opaque handle to a validated semigroup.
pub struct EqdSemigroup {
    inner: Semigroup,
}

/// Sentinel for "no element" / "no point"; `SIZE_MAX` in C.
pub const EQD_NONE: usize = usize::MAX;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let message = CString::new(message.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(message));
}

fn fail(status: EqdStatus, message: impl Into<String>) -> EqdStatus {
    set_error(message);
    status
}

fn table_status(e: &TableError) -> EqdStatus {
    match e {
        TableError::AssociativityViolation { .. } => EqdStatus::NotAssociative,
        _ => EqdStatus::InvalidTable,
    }
}

fn closure_status(e: &ClosureError) -> EqdStatus {
    match e {
        ClosureError::BudgetExceeded { .. } => EqdStatus::BudgetExceeded,
        _ => EqdStatus::InvalidArgument,
    }
}

/// Runs `body`, converting a panic into [`EqdStatus::Panic`].
fn guard(body: impl FnOnce() -> EqdStatus) -> EqdStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => fail(EqdStatus::Panic, "internal panic"),
    }
}

fn into_handle(s: Semigroup) -> *mut EqdSemigroup {
    Box::into_raw(Box::new(EqdSemigroup { inner: s }))
}

/// Message for the last failed call on this thread, or NULL. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn eqd_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |m| m.as_ptr()))
}

/// Validates a row-major `order × order` table.
///
/// # Safety
/// `cells` must point to `order * order` readable values and `out` must be a
/// valid pointer to write the handle to.
#[no_mangle]
pub unsafe extern "C" fn eqd_semigroup_new(order: usize, cells: *const u32, out: *mut *mut EqdSemigroup) -> EqdStatus {
    guard(|| {
        if cells.is_null() || out.is_null() {
            return fail(EqdStatus::NullPointer, "null argument");
        }
        let Some(len) = order.checked_mul(order).filter(|&l| l > 0) else {
            return fail(EqdStatus::InvalidTable, "order must be positive");
        };
        let cells = std::slice::from_raw_parts(cells, len);
        if let Some(pos) = cells.iter().position(|&v| v as usize >= order) {
            let e = TableError::OutOfRangeEntry { row: pos / order, col: pos % order, value: cells[pos] as i64 };
            return fail(EqdStatus::InvalidTable, e.to_string());
        }
        match Semigroup::from_cells(order, cells.iter().map(|&v| v as u8).collect()) {
            Ok(s) => {
                *out = into_handle(s);
                EqdStatus::Ok
            }
            Err(e) => fail(table_status(&e), e.to_string()),
        }
    })
}

/// Parses the first table of a text corpus (order line, then rows).
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqd_semigroup_parse(text: *const c_char, out: *mut *mut EqdSemigroup) -> EqdStatus {
    guard(|| {
        if text.is_null() || out.is_null() {
            return fail(EqdStatus::NullPointer, "null argument");
        }
        let Ok(text) = CStr::from_ptr(text).to_str() else {
            return fail(EqdStatus::InvalidArgument, "text is not UTF-8");
        };
        match parse_corpus(text).into_iter().next() {
            Some(Ok(s)) => {
                *out = into_handle(s);
                EqdStatus::Ok
            }
            Some(Err(CorpusError::Invalid { source, .. })) => fail(table_status(&source), source.to_string()),
            Some(Err(e)) => fail(EqdStatus::InvalidTable, e.to_string()),
            None => fail(EqdStatus::InvalidTable, "no table found"),
        }
    })
}

/// # Safety
/// `handle` must be NULL or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqd_semigroup_free(handle: *mut EqdSemigroup) {
    if !handle.is_null() {
        drop(Box::from_raw(handle));
    }
}

/// Order of the semigroup, or 0 for NULL.
///
/// # Safety
/// `handle` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eqd_semigroup_order(handle: *const EqdSemigroup) -> usize {
    handle.as_ref().map_or(0, |h| h.inner.order())
}

/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqd_classify(handle: *const EqdSemigroup, out: *mut EqdClassification) -> EqdStatus {
    guard(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            return fail(EqdStatus::NullPointer, "null argument");
        };
        let (tag, a, b) = match h.inner.classify() {
            Classification::Trivial => (EqdClassTag::Trivial, EQD_NONE, EQD_NONE),
            Classification::IdempotentNowhereCommutative => {
                (EqdClassTag::IdempotentNowhereCommutative, EQD_NONE, EQD_NONE)
            }
            Classification::IdempotentCommutingPair { a, b } => (EqdClassTag::IdempotentCommutingPair, a, b),
            Classification::BoundedNonIdempotent { a } => (EqdClassTag::BoundedNonIdempotent, a, EQD_NONE),
            Classification::Unbounded { a } => (EqdClassTag::Unbounded, a, EQD_NONE),
        };
        *out = EqdClassification { tag, a, b };
        EqdStatus::Ok
    })
}

/// Index and period of the monogenic subsemigroup generated by `element`.
///
/// # Safety
/// `handle` must be a live handle; `index` and `period` valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eqd_element_profile(
    handle: *const EqdSemigroup,
    element: usize,
    index: *mut usize,
    period: *mut usize,
) -> EqdStatus {
    guard(|| {
        let Some(h) = handle.as_ref() else {
            return fail(EqdStatus::NullPointer, "null handle");
        };
        if index.is_null() || period.is_null() {
            return fail(EqdStatus::NullPointer, "null out-parameter");
        }
        if element >= h.inner.order() {
            return fail(EqdStatus::InvalidArgument, format!("element {element} out of range"));
        }
        let profile = h.inner.element_profile(element);
        *index = profile.index();
        *period = profile.period();
        EqdStatus::Ok
    })
}

/// Whether `a^p = a^q` in a monogenic semigroup of the given index and
/// period. Returns false when any argument is zero.
#[no_mangle]
pub extern "C" fn eqd_monogenic_equal(index: u64, period: u64, p: u64, q: u64) -> bool {
    index >= 1 && period >= 1 && p >= 1 && q >= 1 && monogenic_equal(index, period, p, q)
}

/// Runs the full check and writes the JSON witness report.
///
/// Returns [`EqdStatus::Inconsistent`] (with the report still written) when
/// an identity fails or no separating point was found.
///
/// # Safety
/// `handle` must be a live handle; `report_json` and `is_equational_domain`
/// valid pointers. `*report_json` must be released with [`eqd_string_free`].
#[no_mangle]
pub unsafe extern "C" fn eqd_check_semigroup(
    handle: *const EqdSemigroup,
    budget: usize,
    report_json: *mut *mut c_char,
    is_equational_domain: *mut bool,
) -> EqdStatus {
    guard(|| {
        let Some(h) = handle.as_ref() else {
            return fail(EqdStatus::NullPointer, "null handle");
        };
        if report_json.is_null() || is_equational_domain.is_null() {
            return fail(EqdStatus::NullPointer, "null out-parameter");
        }
        if budget == 0 {
            return fail(EqdStatus::InvalidArgument, "budget must be at least 1");
        }
        let report = match check_semigroup(&h.inner, budget) {
            Ok(r) => r,
            Err(ProofError::Closure(e)) => return fail(closure_status(&e), e.to_string()),
            Err(e) => return fail(EqdStatus::Inconsistent, e.to_string()),
        };
        let json = serde_json::to_string(&report).expect("reports serialize");
        *report_json = CString::new(json).expect("JSON has no NUL").into_raw();
        *is_equational_domain = report.is_equational_domain;
        if report.is_consistent() {
            EqdStatus::Ok
        } else {
            fail(EqdStatus::Inconsistent, "report has failed identities")
        }
    })
}

/// Number of distinct term functions in `arity` variables.
///
/// # Safety
/// `handle` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqd_term_function_count(
    handle: *const EqdSemigroup,
    arity: usize,
    budget: usize,
    out: *mut usize,
) -> EqdStatus {
    guard(|| {
        let (Some(h), false) = (handle.as_ref(), out.is_null()) else {
            return fail(EqdStatus::NullPointer, "null argument");
        };
        match TermFunctions::compute(&h.inner, arity, budget.max(1)) {
            Ok(fs) => {
                *out = fs.len();
                EqdStatus::Ok
            }
            Err(e) => fail(closure_status(&e), e.to_string()),
        }
    })
}

/// Decides whether a subset of `S^arity` is algebraic.
///
/// `membership` holds one byte per point (nonzero = member) in big-endian
/// point order, `len = order^arity`. On success `*separating_code` is the
/// least encoded point of `closure \ set`, or `SIZE_MAX` when algebraic.
///
/// # Safety
/// `handle` must be a live handle, `membership` must point to `len` readable
/// bytes, and `algebraic`, `separating_code` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn eqd_is_algebraic(
    handle: *const EqdSemigroup,
    arity: usize,
    membership: *const u8,
    len: usize,
    budget: usize,
    algebraic: *mut bool,
    separating_code: *mut usize,
) -> EqdStatus {
    guard(|| {
        let Some(h) = handle.as_ref() else {
            return fail(EqdStatus::NullPointer, "null handle");
        };
        if membership.is_null() || algebraic.is_null() || separating_code.is_null() {
            return fail(EqdStatus::NullPointer, "null argument");
        }
        let space = match PointSpace::new(h.inner.order(), arity) {
            Ok(space) => space,
            Err(e) => return fail(EqdStatus::InvalidArgument, e.to_string()),
        };
        if len != space.size() {
            return fail(EqdStatus::InvalidArgument, format!("expected {} membership bytes, got {len}", space.size()));
        }
        let bytes = std::slice::from_raw_parts(membership, len);
        let set = PointSet::from_codes(space, (0..len).filter(|&c| bytes[c] != 0));
        match is_algebraic(&h.inner, &set, budget.max(1)) {
            Ok(verdict) => {
                *algebraic = verdict.algebraic;
                *separating_code = verdict.certificate.closure.difference(&set).first_code().unwrap_or(EQD_NONE);
                EqdStatus::Ok
            }
            Err(e) => fail(closure_status(&e), e.to_string()),
        }
    })
}

/// Number of semigroups of the given order (1..=5) in the given mode.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn eqd_enumerate_count(order: usize, mode: EqdMode, out: *mut usize) -> EqdStatus {
    guard(|| {
        if out.is_null() {
            return fail(EqdStatus::NullPointer, "null out-parameter");
        }
        if !(1..=eqdomain::enumerate::SOFT_MAX_ORDER).contains(&order) {
            return fail(EqdStatus::InvalidArgument, format!("order {order} outside 1..=5"));
        }
        let mode = match mode {
            EqdMode::Raw => Mode::Raw,
            EqdMode::UpToIso => Mode::UpToIso,
            EqdMode::UpToIsoAndAnti => Mode::UpToIsoAndAnti,
        };
        *out = enumerate_tables(order, mode).count();
        EqdStatus::Ok
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eqd_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
