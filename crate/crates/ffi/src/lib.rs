//! C ABI for the `condmed` library.
//!
//! Instances live behind an opaque `CmInstance` handle created by
//! `cm_instance_from_json` or `cm_instance_new` and released with
//! `cm_instance_free`. Every fallible call returns a `CmStatus`; on anything
//! other than `CM_STATUS_OK` a description is available from
//! `cm_last_error_message` on the same thread. Strings returned through
//! `char **` out-parameters are owned by the caller and must be released
//! with `cm_string_free`.
//!
//! The header `include/condmed.h` is generated by the build script.

use std::cell::RefCell;
use std::ffi::{CStr, CString, c_char};
use std::panic::{AssertUnwindSafe, catch_unwind};
use std::ptr;

use condmed::{Agent, Instance, MechanismId, Objective, RatioFlag, Solution, oracle};

/// Opaque handle to a validated instance.
pub struct CmInstance {
    inner: Instance,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    InvalidInstance = 3,
    InvalidArgument = 4,
    UnknownMechanism = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmObjective {
    Social = 0,
    Max = 1,
}

impl From<CmObjective> for Objective {
    fn from(o: CmObjective) -> Self {
        match o {
            CmObjective::Social => Objective::Sc,
            CmObjective::Max => Objective::Mc,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmCaseTag {
    Case1NoCollision = 0,
    Case1Collision = 1,
    Case2 = 2,
    BaselineIntersect = 3,
    BaselineDisjoint = 4,
    Strawman = 5,
}

impl From<condmed::CaseTag> for CmCaseTag {
    fn from(t: condmed::CaseTag) -> Self {
        use condmed::CaseTag::*;
        match t {
            Case1NoCollision => CmCaseTag::Case1NoCollision,
            Case1Collision => CmCaseTag::Case1Collision,
            Case2 => CmCaseTag::Case2,
            BaselineIntersect => CmCaseTag::BaselineIntersect,
            BaselineDisjoint => CmCaseTag::BaselineDisjoint,
            Strawman => CmCaseTag::Strawman,
        }
    }
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmRatioFlag {
    Ok = 0,
    Unit = 1,
    Violation = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CmSolution {
    pub y1: f64,
    pub y2: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmOutcome {
    pub solution: CmSolution,
    pub case_tag: CmCaseTag,
    pub swapped: bool,
}

/// `ratio` is NaN unless `flag` is `CM_RATIO_FLAG_OK`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmRatio {
    pub mech_cost: f64,
    pub opt_cost: f64,
    pub ratio: f64,
    pub flag: CmRatioFlag,
    pub optimal: CmSolution,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn fail(status: CmStatus, msg: impl Into<String>) -> CmStatus {
    set_error(msg);
    status
}

/// Runs `f`, converting panics into `CmStatus::Panic`.
fn guard(f: impl FnOnce() -> CmStatus) -> CmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => fail(CmStatus::Panic, "internal panic"),
    }
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, CmStatus> {
    if s.is_null() {
        return Err(fail(CmStatus::NullPointer, format!("{what} is null")));
    }
    unsafe { CStr::from_ptr(s) }.to_str().map_err(|_| fail(CmStatus::InvalidUtf8, format!("{what} is not valid UTF-8")))
}

unsafe fn instance_arg<'a>(h: *const CmInstance) -> Result<&'a Instance, CmStatus> {
    if h.is_null() {
        return Err(fail(CmStatus::NullPointer, "instance handle is null"));
    }
    Ok(unsafe { &(*h).inner })
}

unsafe fn mechanism_arg(s: *const c_char) -> Result<MechanismId, CmStatus> {
    let s = unsafe { str_arg(s, "mechanism id") }?;
    s.parse().map_err(|e: condmed::Error| fail(CmStatus::UnknownMechanism, e.to_string()))
}

fn out_arg<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, CmStatus> {
    if p.is_null() { Err(fail(CmStatus::NullPointer, format!("{what} is null"))) } else { Ok(unsafe { &mut *p }) }
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(status) => return status,
        }
    };
}

fn boxed(instance: Instance, out: &mut *mut CmInstance) -> CmStatus {
    *out = Box::into_raw(Box::new(CmInstance { inner: instance }));
    CmStatus::Ok
}

/// Message for the last non-OK status on this thread. Valid until the next
/// call into this library from the same thread. Never null.
#[unsafe(no_mangle)]
pub extern "C" fn cm_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[unsafe(no_mangle)]
pub extern "C" fn cm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Parses an instance from its JSON form
/// `{"candidates": [...], "agents": [{"x": .., "f1": .., "f2": ..}, ...]}`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a writable pointer.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_instance_from_json(json: *const c_char, out: *mut *mut CmInstance) -> CmStatus {
    guard(|| {
        let out = tri!(out_arg(out, "out"));
        *out = ptr::null_mut();
        let text = tri!(unsafe { str_arg(json, "json") });
        match Instance::from_json(text) {
            Ok(inst) => boxed(inst, out),
            Err(e) => fail(CmStatus::InvalidInstance, e.to_string()),
        }
    })
}

/// Builds an instance from parallel arrays: `n_candidates` coordinates, and
/// for each of `n_agents` agents a position and two approval flags.
///
/// # Safety
/// Each array pointer must reference at least the stated number of elements.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_instance_new(
    candidates: *const f64,
    n_candidates: usize,
    positions: *const f64,
    approves_f1: *const bool,
    approves_f2: *const bool,
    n_agents: usize,
    out: *mut *mut CmInstance,
) -> CmStatus {
    guard(|| {
        let out = tri!(out_arg(out, "out"));
        *out = ptr::null_mut();
        if (n_candidates > 0 && candidates.is_null())
            || (n_agents > 0 && (positions.is_null() || approves_f1.is_null() || approves_f2.is_null()))
        {
            return fail(CmStatus::NullPointer, "array argument is null");
        }
        let slice =
            |p: *const f64, n: usize| if n == 0 { &[][..] } else { unsafe { std::slice::from_raw_parts(p, n) } };
        let cands = slice(candidates, n_candidates).to_vec();
        let xs = slice(positions, n_agents);
        let agents =
            (0..n_agents).map(|i| unsafe { Agent::new(xs[i], *approves_f1.add(i), *approves_f2.add(i)) }).collect();
        match Instance::new(cands, agents) {
            Ok(inst) => boxed(inst, out),
            Err(e) => fail(CmStatus::InvalidInstance, e.to_string()),
        }
    })
}

/// Releases an instance. Null is ignored.
///
/// # Safety
/// `instance` must come from this library and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_instance_free(instance: *mut CmInstance) {
    if !instance.is_null() {
        drop(unsafe { Box::from_raw(instance) });
    }
}

/// Number of agents, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_instance_agent_count(instance: *const CmInstance) -> usize {
    unsafe { instance.as_ref() }.map_or(0, |h| h.inner.len())
}

/// Number of candidate locations, or 0 for a null handle.
///
/// # Safety
/// `instance` must be null or a live handle.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_instance_candidate_count(instance: *const CmInstance) -> usize {
    unsafe { instance.as_ref() }.map_or(0, |h| h.inner.candidates().len())
}

/// Runs a mechanism (`conditional-median`, `zhao-sc`, `zhao-mc`,
/// `mean-strawman`).
///
/// # Safety
/// Pointers must be valid; `mechanism` NUL-terminated.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_run_mechanism(
    instance: *const CmInstance,
    mechanism: *const c_char,
    out: *mut CmOutcome,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let id = tri!(unsafe { mechanism_arg(mechanism) });
        let out = tri!(out_arg(out, "out"));
        let o = id.run(inst);
        *out = CmOutcome {
            solution: CmSolution { y1: o.solution.y1, y2: o.solution.y2 },
            case_tag: o.case_tag.into(),
            swapped: o.swapped,
        };
        CmStatus::Ok
    })
}

/// Cost of one agent for the solution `(y1, y2)`.
///
/// # Safety
/// Pointers must be valid.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_agent_cost(
    instance: *const CmInstance,
    agent_index: usize,
    y1: f64,
    y2: f64,
    out: *mut f64,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let out = tri!(out_arg(out, "out"));
        match condmed::agent_cost(inst, agent_index, Solution::new(y1, y2)) {
            Ok(c) => {
                *out = c;
                CmStatus::Ok
            }
            Err(e) => fail(CmStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Social or max cost of the solution `(y1, y2)`.
///
/// # Safety
/// Pointers must be valid.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_objective_value(
    instance: *const CmInstance,
    objective: CmObjective,
    y1: f64,
    y2: f64,
    out: *mut f64,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let out = tri!(out_arg(out, "out"));
        match inst.objective(objective.into(), Solution::new(y1, y2)) {
            Ok(c) => {
                *out = c;
                CmStatus::Ok
            }
            Err(e) => fail(CmStatus::InvalidArgument, e.to_string()),
        }
    })
}

/// Exact optimum by enumeration of all candidate pairs.
///
/// # Safety
/// Pointers must be valid.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_optimal_solution(
    instance: *const CmInstance,
    objective: CmObjective,
    out_solution: *mut CmSolution,
    out_cost: *mut f64,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let sol = tri!(out_arg(out_solution, "out_solution"));
        let cost = tri!(out_arg(out_cost, "out_cost"));
        let (s, c) = oracle::optimal_solution(inst, objective.into());
        *sol = CmSolution { y1: s.y1, y2: s.y2 };
        *cost = c;
        CmStatus::Ok
    })
}

/// Approximation ratio of a mechanism against the exact optimum.
///
/// # Safety
/// Pointers must be valid; `mechanism` NUL-terminated.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_approximation_ratio(
    instance: *const CmInstance,
    mechanism: *const c_char,
    objective: CmObjective,
    out: *mut CmRatio,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let id = tri!(unsafe { mechanism_arg(mechanism) });
        let out = tri!(out_arg(out, "out"));
        let (_, r) = oracle::evaluate(inst, id, objective.into());
        *out = CmRatio {
            mech_cost: r.mechanism_cost,
            opt_cost: r.optimal_cost,
            ratio: r.ratio.unwrap_or(f64::NAN),
            flag: match r.flag {
                RatioFlag::Ok => CmRatioFlag::Ok,
                RatioFlag::Unit => CmRatioFlag::Unit,
                RatioFlag::Violation => CmRatioFlag::Violation,
            },
            optimal: CmSolution { y1: r.opt_y1, y2: r.opt_y2 },
        };
        CmStatus::Ok
    })
}

/// Exhaustive single-agent deviation search. Writes the number of
/// profitable misreports found (0 means strategyproof on this instance) and
/// the number of probes evaluated. `out_probes` may be null.
///
/// # Safety
/// Pointers must be valid; `mechanism` NUL-terminated.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_verify_strategyproof(
    instance: *const CmInstance,
    mechanism: *const c_char,
    out_deviations: *mut usize,
    out_probes: *mut usize,
) -> CmStatus {
    guard(|| {
        let inst = tri!(unsafe { instance_arg(instance) });
        let id = tri!(unsafe { mechanism_arg(mechanism) });
        let devs = tri!(out_arg(out_deviations, "out_deviations"));
        let report = oracle::verify_strategyproof_with(inst, id);
        *devs = report.deviations.len();
        if let Some(p) = unsafe { out_probes.as_mut() } {
            *p = report.probe_count;
        }
        CmStatus::Ok
    })
}

/// Same search as `cm_verify_strategyproof`, returning the full report as
/// JSON (`{"deviations": [{"agent", "true_cost", "report", "new_cost"}],
/// "probe_count"}`). Free the string with `cm_string_free`.
///
/// # Safety
/// Pointers must be valid; `mechanism` NUL-terminated.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_verify_strategyproof_json(
    instance: *const CmInstance,
    mechanism: *const c_char,
    out_json: *mut *mut c_char,
) -> CmStatus {
    guard(|| {
        let out = tri!(out_arg(out_json, "out_json"));
        *out = ptr::null_mut();
        let inst = tri!(unsafe { instance_arg(instance) });
        let id = tri!(unsafe { mechanism_arg(mechanism) });
        let report = oracle::verify_strategyproof_with(inst, id);
        let text = serde_json::to_string(&report).expect("report serializes");
        *out = CString::new(text).expect("no interior NUL").into_raw();
        CmStatus::Ok
    })
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[unsafe(no_mangle)]
pub unsafe extern "C" fn cm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}
