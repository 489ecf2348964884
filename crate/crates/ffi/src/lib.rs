//! C ABI for relcoef.
//!
//! Programs and solutions are opaque handles owned by the caller and freed
//! with the matching `_free` function. Every fallible call returns a
//! `RelcoefStatus`; on failure `relcoef_last_error_message` describes the
//! error for the calling thread. Strings returned to the caller are freed
//! with `relcoef_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use relcoef::coefficients::{CoeffSpec, ExtReal, Family, RangeType};
use relcoef::partition::{dist_from_2x2, BoolExpr, EventTable};
use relcoef::solver::{check_feasibility, Feasibility, QueryAnswer};
use relcoef::{answer_query, Error, Interval, Program, SolverConfig, Status};

/// Return codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelcoefStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    Domain = 4,
    Dimension = 5,
    UnknownEvent = 6,
    NumericFailure = 7,
    UnknownFeasibility = 8,
    IndexOutOfRange = 9,
    BufferTooSmall = 10,
    Panic = 11,
}

/// Range of a coefficient value: probability, odds or symmetric.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelcoefRange {
    P = 0,
    O = 1,
    S = 2,
}

/// Coefficient families. `P` and `O` take one event, the rest two.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelcoefFamily {
    P = 0,
    O = 1,
    CondP = 2,
    CondO = 3,
    QOdds = 4,
    QProb = 5,
    FOdds = 6,
    FProb = 7,
}

/// Certification of a query interval.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelcoefIntervalStatus {
    Exact = 0,
    InnerApprox = 1,
    Infeasible = 2,
    UndefinedQuery = 3,
}

/// Bounds of one query. `lo`/`hi` are NaN unless the status is exact or
/// inner approximate, and `hi` may be `+inf` for odds-type values.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelcoefInterval {
    pub lo: f64,
    pub hi: f64,
    pub status: RelcoefIntervalStatus,
}

/// Parsed program.
pub struct RelcoefProgram {
    program: Program,
}

/// Answers to every query of a program, in program order.
pub struct RelcoefSolution {
    answers: Vec<QueryAnswer>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn code(e: &Error) -> RelcoefStatus {
    match e {
        Error::Parse(_) => RelcoefStatus::Parse,
        Error::Domain(_) | Error::EventTable(_) | Error::Cycle(_) => RelcoefStatus::Domain,
        Error::Dimension { .. } => RelcoefStatus::Dimension,
        Error::UnknownEvent(_) => RelcoefStatus::UnknownEvent,
        Error::NumericFailure(_) => RelcoefStatus::NumericFailure,
        Error::UnknownFeasibility { .. } => RelcoefStatus::UnknownFeasibility,
    }
}

fn fail(status: RelcoefStatus, msg: &str) -> RelcoefStatus {
    set_error(msg);
    status
}

fn from_error(e: &Error) -> RelcoefStatus {
    fail(code(e), &e.to_string())
}

/// Runs `f`, turning panics into `Panic` so they never cross the boundary.
fn guard(f: impl FnOnce() -> RelcoefStatus) -> RelcoefStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(RelcoefStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, RelcoefStatus> {
    if s.is_null() {
        return Err(fail(RelcoefStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(s).to_str().map_err(|_| fail(RelcoefStatus::InvalidUtf8, "string is not UTF-8"))
}

fn range(r: RelcoefRange) -> RangeType {
    match r {
        RelcoefRange::P => RangeType::P,
        RelcoefRange::O => RangeType::O,
        RelcoefRange::S => RangeType::S,
    }
}

fn family(f: RelcoefFamily) -> Family {
    match f {
        RelcoefFamily::P => Family::P,
        RelcoefFamily::O => Family::O,
        RelcoefFamily::CondP => Family::CondP,
        RelcoefFamily::CondO => Family::CondO,
        RelcoefFamily::QOdds => Family::QOdds,
        RelcoefFamily::QProb => Family::QProb,
        RelcoefFamily::FOdds => Family::FOdds,
        RelcoefFamily::FProb => Family::FProb,
    }
}

fn interval_status(s: Status) -> RelcoefIntervalStatus {
    match s {
        Status::Exact => RelcoefIntervalStatus::Exact,
        Status::InnerApprox => RelcoefIntervalStatus::InnerApprox,
        Status::Infeasible => RelcoefIntervalStatus::Infeasible,
        Status::UndefinedQuery => RelcoefIntervalStatus::UndefinedQuery,
    }
}

/// Message for the last failed call on this thread. Valid until the next
/// failing call on the same thread; never null.
#[no_mangle]
pub extern "C" fn relcoef_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn relcoef_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Converts `value` from one range to another. `+inf` is a valid O-type
/// input; NaN passes through as undefined.
///
/// # Safety
/// `out` must be a valid pointer to a double.
#[no_mangle]
pub unsafe extern "C" fn relcoef_convert(value: f64, from: RelcoefRange, to: RelcoefRange, out: *mut f64) -> RelcoefStatus {
    guard(|| {
        if out.is_null() {
            return fail(RelcoefStatus::NullPointer, "null output");
        }
        match relcoef::convert(ExtReal::from_f64(value), range(from), range(to)) {
            Ok(v) => {
                *out = v.to_f64();
                RelcoefStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Evaluates a coefficient on the 2x2 table `x, y, z, w` =
/// P(A&B), P(A&-B), P(-A&B), P(-A&-B). One-event families use A. Undefined
/// values are NaN.
///
/// # Safety
/// `table` must point to 4 doubles and `out` to one.
#[no_mangle]
pub unsafe extern "C" fn relcoef_eval_table(
    table: *const f64,
    fam: RelcoefFamily,
    rng: RelcoefRange,
    out: *mut f64,
) -> RelcoefStatus {
    guard(|| {
        if table.is_null() || out.is_null() {
            return fail(RelcoefStatus::NullPointer, "null table or output");
        }
        let t = std::slice::from_raw_parts(table, 4);
        let events = EventTable::new(["A", "B"]).expect("two events");
        let fam = family(fam);
        let b = (fam.arity() == 2).then(|| BoolExpr::event("B"));
        let value = dist_from_2x2(t[0], t[1], t[2], t[3])
            .and_then(|d| CoeffSpec::new(fam, BoolExpr::event("A"), b, range(rng)).map(|s| (d, s)))
            .and_then(|(d, s)| s.evaluate(&d, &events));
        match value {
            Ok(v) => {
                *out = v.to_f64();
                RelcoefStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Parses a program. Queries are optional so that declaration-only
/// programs can go to `relcoef_check`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_program_parse(src: *const c_char, out: *mut *mut RelcoefProgram) -> RelcoefStatus {
    guard(|| {
        if out.is_null() {
            return fail(RelcoefStatus::NullPointer, "null output");
        }
        *out = ptr::null_mut();
        let src = match text(src) {
            Ok(s) => s,
            Err(s) => return s,
        };
        match relcoef::dsl::parse_declarations(src) {
            Ok(program) => {
                *out = Box::into_raw(Box::new(RelcoefProgram { program }));
                RelcoefStatus::Ok
            }
            Err(e) => fail(RelcoefStatus::Parse, &e.to_string()),
        }
    })
}

/// Frees a program. Null is ignored.
///
/// # Safety
/// `program` must come from `relcoef_program_parse` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn relcoef_program_free(program: *mut RelcoefProgram) {
    if !program.is_null() {
        drop(Box::from_raw(program));
    }
}

/// Number of queries in a program; 0 for null.
///
/// # Safety
/// `program` must be null or a live program handle.
#[no_mangle]
pub unsafe extern "C" fn relcoef_program_num_queries(program: *const RelcoefProgram) -> usize {
    program.as_ref().map_or(0, |p| p.program.queries.len())
}

/// Checks whether the declarations can hold together. `*feasible` is set
/// to 1 or 0.
///
/// # Safety
/// `program` must be a live handle and `feasible` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_check(program: *const RelcoefProgram, seed: u64, feasible: *mut i32) -> RelcoefStatus {
    guard(|| {
        let (Some(p), false) = (program.as_ref(), feasible.is_null()) else {
            return fail(RelcoefStatus::NullPointer, "null program or output");
        };
        let cfg = SolverConfig { seed, ..SolverConfig::default() };
        match check_feasibility(&p.program, &cfg) {
            Ok(Feasibility::Feasible(_)) => {
                *feasible = 1;
                RelcoefStatus::Ok
            }
            Ok(Feasibility::Infeasible { .. }) => {
                *feasible = 0;
                RelcoefStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Bounds every query. `starts` of 0 keeps the default search budget.
/// Per-query failures are reported by `relcoef_solution_interval`.
///
/// # Safety
/// `program` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solve(
    program: *const RelcoefProgram,
    seed: u64,
    starts: usize,
    out: *mut *mut RelcoefSolution,
) -> RelcoefStatus {
    guard(|| {
        let (Some(p), false) = (program.as_ref(), out.is_null()) else {
            return fail(RelcoefStatus::NullPointer, "null program or output");
        };
        *out = ptr::null_mut();
        let mut cfg = SolverConfig { seed, ..SolverConfig::default() };
        if starts > 0 {
            cfg.starts = starts;
        }
        match answer_query(&p.program, &cfg) {
            Ok(answers) => {
                *out = Box::into_raw(Box::new(RelcoefSolution { answers }));
                RelcoefStatus::Ok
            }
            Err(e) => from_error(&e),
        }
    })
}

/// Frees a solution. Null is ignored.
///
/// # Safety
/// `solution` must come from `relcoef_solve` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solution_free(solution: *mut RelcoefSolution) {
    if !solution.is_null() {
        drop(Box::from_raw(solution));
    }
}

/// Number of answers; 0 for null.
///
/// # Safety
/// `solution` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solution_len(solution: *const RelcoefSolution) -> usize {
    solution.as_ref().map_or(0, |s| s.answers.len())
}

unsafe fn answer<'a>(solution: *const RelcoefSolution, index: usize) -> Result<&'a QueryAnswer, RelcoefStatus> {
    let s = solution.as_ref().ok_or_else(|| fail(RelcoefStatus::NullPointer, "null solution"))?;
    s.answers.get(index).ok_or_else(|| {
        fail(RelcoefStatus::IndexOutOfRange, &format!("query {index} of {}", s.answers.len()))
    })
}

unsafe fn interval<'a>(solution: *const RelcoefSolution, index: usize) -> Result<&'a Interval, RelcoefStatus> {
    answer(solution, index)?.result.as_ref().map_err(from_error)
}

/// Interval of query `index`. Returns the query's own error if solving it
/// failed.
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solution_interval(
    solution: *const RelcoefSolution,
    index: usize,
    out: *mut RelcoefInterval,
) -> RelcoefStatus {
    guard(|| {
        if out.is_null() {
            return fail(RelcoefStatus::NullPointer, "null output");
        }
        match interval(solution, index) {
            Ok(iv) => {
                *out = RelcoefInterval { lo: iv.lo, hi: iv.hi, status: interval_status(iv.status) };
                RelcoefStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Canonical text of query `index`, such as `Q(T:A)`. Free the result with
/// `relcoef_string_free`.
///
/// # Safety
/// `solution` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solution_query_text(
    solution: *const RelcoefSolution,
    index: usize,
    out: *mut *mut c_char,
) -> RelcoefStatus {
    guard(|| {
        if out.is_null() {
            return fail(RelcoefStatus::NullPointer, "null output");
        }
        *out = ptr::null_mut();
        match answer(solution, index) {
            Ok(a) => {
                *out = CString::new(a.query.to_string()).unwrap_or_default().into_raw();
                RelcoefStatus::Ok
            }
            Err(s) => s,
        }
    })
}

/// Copies the distribution attaining the lower (`upper` = 0) or upper
/// endpoint of query `index` into `buf`. `*len` is set to the number of
/// atoms, first event most significant. Fails with `BufferTooSmall` when
/// `cap` is short, and with `Domain` when the interval has no witnesses.
///
/// # Safety
/// `buf` must hold `cap` doubles (or be null with `cap` 0) and `len` must
/// be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn relcoef_solution_witness(
    solution: *const RelcoefSolution,
    index: usize,
    upper: i32,
    buf: *mut f64,
    cap: usize,
    len: *mut usize,
) -> RelcoefStatus {
    guard(|| {
        if len.is_null() || (buf.is_null() && cap > 0) {
            return fail(RelcoefStatus::NullPointer, "null buffer or length");
        }
        let iv = match interval(solution, index) {
            Ok(iv) => iv,
            Err(s) => return s,
        };
        let Some((lo, hi)) = &iv.witnesses else {
            return fail(RelcoefStatus::Domain, "this interval has no witnesses");
        };
        let w = if upper != 0 { hi } else { lo }.as_slice();
        *len = w.len();
        if cap < w.len() {
            return fail(RelcoefStatus::BufferTooSmall, &format!("need {} doubles", w.len()));
        }
        std::slice::from_raw_parts_mut(buf, w.len()).copy_from_slice(w);
        RelcoefStatus::Ok
    })
}
