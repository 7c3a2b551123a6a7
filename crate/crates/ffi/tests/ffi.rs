use std::ffi::{CStr, CString};
use std::ptr;

use condmed_ffi::*;

const MC_TIGHT: &str = r#"{"candidates": [0, 2, 6], "agents": [
  {"x": 1.001, "f1": true, "f2": false}, {"x": 1.001, "f1": true, "f2": false},
  {"x": 1.001, "f1": true, "f2": false}, {"x": 1.0, "f1": false, "f2": true},
  {"x": 3.001, "f1": false, "f2": true}, {"x": 3.001, "f1": false, "f2": true}]}"#;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cm_last_error_message()) }.to_string_lossy().into_owned()
}

struct Handle(*mut CmInstance);

impl Drop for Handle {
    fn drop(&mut self) {
        unsafe { cm_instance_free(self.0) };
    }
}

fn from_json(json: &str) -> Handle {
    let mut h = ptr::null_mut();
    let status = unsafe { cm_instance_from_json(c(json).as_ptr(), &mut h) };
    assert_eq!(status, CmStatus::Ok, "{}", last_error());
    assert!(!h.is_null());
    Handle(h)
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(cm_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

#[test]
fn mc_tight_end_to_end() {
    let h = from_json(MC_TIGHT);
    assert_eq!(unsafe { cm_instance_agent_count(h.0) }, 6);
    assert_eq!(unsafe { cm_instance_candidate_count(h.0) }, 3);

    let mech = c("conditional-median");
    let mut out = CmOutcome { solution: CmSolution::default(), case_tag: CmCaseTag::Case2, swapped: true };
    assert_eq!(unsafe { cm_run_mechanism(h.0, mech.as_ptr(), &mut out) }, CmStatus::Ok);
    assert_eq!(out.solution, CmSolution { y1: 2.0, y2: 6.0 });
    assert_eq!(out.case_tag, CmCaseTag::Case1Collision);
    assert!(!out.swapped);

    let mut cost = 0.0;
    assert_eq!(unsafe { cm_agent_cost(h.0, 3, 2.0, 6.0, &mut cost) }, CmStatus::Ok);
    assert_eq!(cost, 5.0);
    assert_eq!(unsafe { cm_objective_value(h.0, CmObjective::Max, 2.0, 6.0, &mut cost) }, CmStatus::Ok);
    assert_eq!(cost, 5.0);

    let mut best = CmSolution::default();
    assert_eq!(unsafe { cm_optimal_solution(h.0, CmObjective::Max, &mut best, &mut cost) }, CmStatus::Ok);
    assert_eq!(best, CmSolution { y1: 0.0, y2: 2.0 });
    assert!((cost - 1.001).abs() < 1e-12);

    let mut r = CmRatio {
        mech_cost: 0.0,
        opt_cost: 0.0,
        ratio: 0.0,
        flag: CmRatioFlag::Violation,
        optimal: CmSolution::default(),
    };
    assert_eq!(unsafe { cm_approximation_ratio(h.0, mech.as_ptr(), CmObjective::Max, &mut r) }, CmStatus::Ok);
    assert_eq!(r.flag, CmRatioFlag::Ok);
    assert!((r.ratio - 5.0 / 1.001).abs() < 1e-12);

    let (mut devs, mut probes) = (usize::MAX, 0);
    assert_eq!(unsafe { cm_verify_strategyproof(h.0, mech.as_ptr(), &mut devs, &mut probes) }, CmStatus::Ok);
    assert_eq!(devs, 0);
    assert!(probes > 0);
    assert_eq!(unsafe { cm_verify_strategyproof(h.0, mech.as_ptr(), &mut devs, ptr::null_mut()) }, CmStatus::Ok);
}

#[test]
fn parallel_array_constructor() {
    let cands = [0.0, 3.0, 4.0];
    let xs = [0.0, 4.0];
    let f1 = [true, true];
    let f2 = [false, false];
    let mut h = ptr::null_mut();
    let status = unsafe {
        cm_instance_new(cands.as_ptr(), cands.len(), xs.as_ptr(), f1.as_ptr(), f2.as_ptr(), xs.len(), &mut h)
    };
    assert_eq!(status, CmStatus::Ok);
    let h = Handle(h);

    let mut json = ptr::null_mut();
    let straw = c("mean-strawman");
    assert_eq!(unsafe { cm_verify_strategyproof_json(h.0, straw.as_ptr(), &mut json) }, CmStatus::Ok);
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_owned();
    unsafe { cm_string_free(json) };
    let report: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(!report["deviations"].as_array().unwrap().is_empty());
}

#[test]
fn errors_set_status_and_message() {
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { cm_instance_from_json(ptr::null(), &mut h) }, CmStatus::NullPointer);
    assert!(h.is_null());
    assert!(last_error().contains("json"));

    let bad = c(r#"{"candidates": [1], "agents": []}"#);
    assert_eq!(unsafe { cm_instance_from_json(bad.as_ptr(), &mut h) }, CmStatus::InvalidInstance);
    assert!(h.is_null());
    assert!(!last_error().is_empty());

    let invalid_utf8 = [0xffu8, 0xfe, 0];
    let status = unsafe { cm_instance_from_json(invalid_utf8.as_ptr().cast(), &mut h) };
    assert_eq!(status, CmStatus::InvalidUtf8);

    let inst = from_json(MC_TIGHT);
    let mut out = CmOutcome { solution: CmSolution::default(), case_tag: CmCaseTag::Case2, swapped: false };
    let unknown = c("median-of-means");
    assert_eq!(unsafe { cm_run_mechanism(inst.0, unknown.as_ptr(), &mut out) }, CmStatus::UnknownMechanism);
    assert!(last_error().contains("median-of-means"));

    let mech = c("conditional-median");
    assert_eq!(unsafe { cm_run_mechanism(ptr::null(), mech.as_ptr(), &mut out) }, CmStatus::NullPointer);
    assert_eq!(unsafe { cm_run_mechanism(inst.0, mech.as_ptr(), ptr::null_mut()) }, CmStatus::NullPointer);

    let mut cost = 0.0;
    assert_eq!(unsafe { cm_agent_cost(inst.0, 99, 0.0, 2.0, &mut cost) }, CmStatus::InvalidArgument);
    assert_eq!(
        unsafe { cm_objective_value(inst.0, CmObjective::Social, 2.0, 2.0, &mut cost) },
        CmStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cm_objective_value(inst.0, CmObjective::Social, 1.0, 2.0, &mut cost) },
        CmStatus::InvalidArgument
    );

    assert_eq!(unsafe { cm_instance_agent_count(ptr::null()) }, 0);
    unsafe { cm_instance_free(ptr::null_mut()) };
    unsafe { cm_string_free(ptr::null_mut()) };
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/condmed.h")).unwrap();
    for name in [
        "cm_last_error_message",
        "cm_version",
        "cm_instance_from_json",
        "cm_instance_new",
        "cm_instance_free",
        "cm_instance_agent_count",
        "cm_instance_candidate_count",
        "cm_run_mechanism",
        "cm_agent_cost",
        "cm_objective_value",
        "cm_optimal_solution",
        "cm_approximation_ratio",
        "cm_verify_strategyproof",
        "cm_verify_strategyproof_json",
        "cm_string_free",
        "CM_STATUS_OK",
        "typedef struct CmInstance CmInstance",
    ] {
        assert!(header.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_smoke_example_links_and_runs() {
    let Some(cc) = which_cc() else {
        eprintln!("no C compiler on PATH, skipping");
        return;
    };
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcondmed_ffi.a");
    assert!(lib.exists(), "static library not built at {}", lib.display());
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let manifest = env!("CARGO_MANIFEST_DIR");
    let status = std::process::Command::new(cc)
        .args(["-std=c99", "-Wall", "-Werror"])
        .arg(format!("{manifest}/examples/smoke.c"))
        .arg(format!("-I{manifest}/include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = std::process::Command::new(&exe).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout), "facilities at (2, 0), max-cost ratio 2.998\n");
}

fn which_cc() -> Option<&'static str> {
    ["cc", "gcc", "clang"]
        .into_iter()
        .find(|c| std::process::Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
}
