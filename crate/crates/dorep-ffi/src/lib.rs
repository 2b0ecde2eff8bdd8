//! C ABI over the `dorep` library.
//!
//! Handles are opaque pointers created and freed here; every other
//! value crosses the boundary as a JSON string. Functions return a
//! [`DorepStatus`]; on anything but `Ok`, [`dorep_last_error`] holds a
//! thread-local message. Strings returned through out-parameters are
//! owned by the caller and must be released with [`dorep_string_free`].

use dorep::actions::parse_action;
use dorep::axioms::{check_canc, check_cent, check_ssc, check_trans, derive_consequences};
use dorep::io::{representation_file, to_json_string, AxiomRunFile, MenuFile, ModelFile, PrefsFile};
use dorep::logic::Signature;
use dorep::pipeline::{generate_fixture, roundtrip_many, RoundtripConfig};
use dorep::preferences::{PreferenceRelation, SEURepresentation};
use dorep::rat::{rat_to_string, Rat};
use dorep::representation::{build_representation, verify_representation, PairSample, RepError};
use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DorepStatus {
    /// Success.
    Ok = 0,
    /// The operation ran but a check failed (axiom violation,
    /// infeasibility, or verification mismatch); output still holds the
    /// report.
    Failed = 2,
    /// Bad input: parse errors, richness or cap violations.
    Precondition = 3,
    /// A required pointer was null.
    NullPointer = 4,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 5,
    /// An internal panic was caught.
    Panic = 6,
}

/// A loaded selection model, optionally with probability and utility.
pub struct DorepModel {
    sm: dorep::models::SelectionModel,
    pi: Option<Vec<Rat>>,
    u: Option<Vec<Rat>>,
}

/// A menu plus a preference relation over its compiled acts.
pub struct DorepPrefs {
    menu: dorep::actions::Menu,
    pr: PreferenceRelation,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let text = msg.into().replace('\0', " ");
    LAST_ERROR.with(|slot| {
        *slot.borrow_mut() = CString::new(text).unwrap_or_default();
    });
}

/// Message for the most recent failure on this thread. Borrowed;
/// valid until the next failing call. Never null.
#[no_mangle]
pub extern "C" fn dorep_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn dorep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Release a string returned through an out-parameter.
///
/// # Safety
/// `s` must have come from this library and not been freed before.
#[no_mangle]
pub unsafe extern "C" fn dorep_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

unsafe fn arg_str<'a>(ptr: *const c_char) -> Result<&'a str, DorepStatus> {
    if ptr.is_null() {
        set_error("null pointer argument");
        return Err(DorepStatus::NullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        DorepStatus::InvalidUtf8
    })
}

fn write_out(text: String, out: *mut *mut c_char) -> DorepStatus {
    match CString::new(text) {
        Ok(cstring) => {
            unsafe { *out = cstring.into_raw() };
            DorepStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL");
            DorepStatus::Panic
        }
    }
}

fn guard(body: impl FnOnce() -> DorepStatus) -> DorepStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(status) => status,
        Err(_) => {
            set_error("internal panic");
            DorepStatus::Panic
        }
    }
}

fn precondition(err: impl std::fmt::Display) -> DorepStatus {
    set_error(err.to_string());
    DorepStatus::Precondition
}

/// Parse a model file (JSON) into a handle.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn dorep_model_from_json(
    json: *const c_char,
    out: *mut *mut DorepModel,
) -> DorepStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return DorepStatus::NullPointer;
        }
        let text = match arg_str(json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let file: ModelFile = match serde_json::from_str(text) {
            Ok(f) => f,
            Err(e) => return precondition(e),
        };
        match file.load() {
            Ok(loaded) => {
                let handle = Box::new(DorepModel {
                    sm: loaded.sm,
                    pi: loaded.pi,
                    u: loaded.u,
                });
                *out = Box::into_raw(handle);
                DorepStatus::Ok
            }
            Err(e) => precondition(e),
        }
    })
}

/// # Safety
/// `model` must come from [`dorep_model_from_json`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dorep_model_free(model: *mut DorepModel) {
    if !model.is_null() {
        drop(Box::from_raw(model));
    }
}

/// Parse a preference file, optionally against a separate menu file.
/// `menu_json` may be null when the preference file is self-contained.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dorep_prefs_from_json(
    prefs_json: *const c_char,
    menu_json: *const c_char,
    out: *mut *mut DorepPrefs,
) -> DorepStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return DorepStatus::NullPointer;
        }
        let prefs_text = match arg_str(prefs_json) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let external = if menu_json.is_null() {
            None
        } else {
            let menu_text = match arg_str(menu_json) {
                Ok(t) => t,
                Err(status) => return status,
            };
            let file: MenuFile = match serde_json::from_str(menu_text) {
                Ok(f) => f,
                Err(e) => return precondition(e),
            };
            match file.load() {
                Ok(pair) => Some(pair),
                Err(e) => return precondition(e),
            }
        };
        let file: PrefsFile = match serde_json::from_str(prefs_text) {
            Ok(f) => f,
            Err(e) => return precondition(e),
        };
        match file.load(external) {
            Ok((_, menu, pr)) => {
                *out = Box::into_raw(Box::new(DorepPrefs { menu, pr }));
                DorepStatus::Ok
            }
            Err(e) => precondition(e),
        }
    })
}

/// # Safety
/// `prefs` must come from [`dorep_prefs_from_json`], freed once.
#[no_mangle]
pub unsafe extern "C" fn dorep_prefs_free(prefs: *mut DorepPrefs) {
    if !prefs.is_null() {
        drop(Box::from_raw(prefs));
    }
}

/// Interpret an action in the model. Output JSON:
/// `{"action": "...", "map": {"state": "state", ...},
///   "expected_utility": "9/2" | null}`.
///
/// # Safety
/// Pointers must be valid; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn dorep_evaluate(
    model: *const DorepModel,
    action: *const c_char,
    out: *mut *mut c_char,
) -> DorepStatus {
    guard(|| {
        if model.is_null() || out.is_null() {
            set_error("null pointer argument");
            return DorepStatus::NullPointer;
        }
        let model = &*model;
        let text = match arg_str(action) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let sig = model.sm.menu().sig();
        let act = match parse_action(text, sig) {
            Ok(a) => a,
            Err(e) => return precondition(e),
        };
        let map = match act.interpret(&model.sm) {
            Ok(m) => m,
            Err(e) => return precondition(e),
        };
        let names: BTreeMap<String, String> = map
            .iter()
            .enumerate()
            .map(|(w, to)| {
                (
                    model.sm.model().state_name(w).to_string(),
                    model.sm.model().state_name(*to).to_string(),
                )
            })
            .collect();
        let eu = match (&model.pi, &model.u) {
            (Some(pi), Some(u)) => {
                match SEURepresentation::new(model.sm.clone(), pi.clone(), u.clone()) {
                    Ok(rep) => Some(rat_to_string(&rep.expected_utility_of_map(&map))),
                    Err(e) => return precondition(e),
                }
            }
            _ => None,
        };
        let body = serde_json::json!({
            "action": act.display(sig).to_string(),
            "map": names,
            "expected_utility": eu,
        });
        write_out(body.to_string(), out)
    })
}

/// Run the four axiom checks plus the derived-principle smoke tests.
/// Returns `Ok` when everything passes, `Failed` otherwise; the JSON
/// report lands in `out` either way.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dorep_check_axioms(
    prefs: *const DorepPrefs,
    canc_max_n: u32,
    canc_budget: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> DorepStatus {
    guard(|| {
        if prefs.is_null() || out.is_null() {
            set_error("null pointer argument");
            return DorepStatus::NullPointer;
        }
        let handle = &*prefs;
        let run = || -> Result<AxiomRunFile, dorep::preferences::PrefError> {
            let reports = vec![
                check_cent(&handle.pr, &handle.menu)?,
                check_ssc(&handle.pr, &handle.menu)?,
                check_trans(&handle.pr, &handle.menu)?,
                check_canc(&handle.pr, &handle.menu, canc_max_n, canc_budget, seed)?,
                derive_consequences(&handle.pr, &handle.menu, 2_000, seed)?,
            ];
            let all_pass = reports.iter().all(|r| r.pass);
            Ok(AxiomRunFile {
                seed,
                canc_max_n,
                canc_budget,
                reports,
                all_pass,
            })
        };
        match run() {
            Ok(file) => {
                let all_pass = file.all_pass;
                match to_json_string(&file) {
                    Ok(text) => {
                        let status = write_out(text, out);
                        if status == DorepStatus::Ok && !all_pass {
                            set_error("an axiom check failed");
                            DorepStatus::Failed
                        } else {
                            status
                        }
                    }
                    Err(e) => precondition(e),
                }
            }
            Err(e) => precondition(e),
        }
    })
}

/// Synthesize and verify a representation. On success the JSON is the
/// representation file; on a failed stage it is
/// `{"stage": ..., ...}` and the status is `Failed`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dorep_synthesize(
    prefs: *const DorepPrefs,
    seed: u64,
    pairs: u64,
    act_space_cap: u64,
    out: *mut *mut c_char,
) -> DorepStatus {
    guard(|| {
        if prefs.is_null() || out.is_null() {
            set_error("null pointer argument");
            return DorepStatus::NullPointer;
        }
        let handle = &*prefs;
        let synthesis = match build_representation(&handle.pr, &handle.menu, act_space_cap) {
            Ok(s) => s,
            Err(RepError::Axiom(report)) => {
                let body = serde_json::json!({ "stage": report.axiom, "report": *report });
                let status = write_out(body.to_string(), out);
                return if status == DorepStatus::Ok {
                    set_error("axiom stage failed");
                    DorepStatus::Failed
                } else {
                    status
                };
            }
            Err(RepError::Infeasible(report)) => {
                let body = serde_json::json!({ "stage": "lp", "certificate": *report });
                let status = write_out(body.to_string(), out);
                return if status == DorepStatus::Ok {
                    set_error("no additive utility exists");
                    DorepStatus::Failed
                } else {
                    status
                };
            }
            Err(other) => return precondition(other),
        };
        let outcome = match verify_representation(
            &synthesis.representation,
            &handle.pr,
            &handle.menu,
            PairSample::Auto {
                threshold: 300,
                samples: pairs,
                seed,
            },
        ) {
            Ok(o) => o,
            Err(e) => return precondition(e),
        };
        if let Some((left, right)) = &outcome.witness {
            let body = serde_json::json!({
                "stage": "verify",
                "witness": { "left": left, "right": right },
            });
            let status = write_out(body.to_string(), out);
            return if status == DorepStatus::Ok {
                set_error("verification found a disagreeing pair");
                DorepStatus::Failed
            } else {
                status
            };
        }
        let file = representation_file(&synthesis, Some(seed), outcome.checked_pairs, outcome.exhaustive);
        match to_json_string(&file) {
            Ok(text) => write_out(text, out),
            Err(e) => precondition(e),
        }
    })
}

/// Emit a seeded fixture as one JSON object:
/// `{"model": ..., "menu": ..., "prefs": ...}`.
///
/// # Safety
/// Pointers must be valid; `props` NUL-terminated, comma-separated.
#[no_mangle]
pub unsafe extern "C" fn dorep_generate(
    props: *const c_char,
    seed: u64,
    out: *mut *mut c_char,
) -> DorepStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return DorepStatus::NullPointer;
        }
        let props = match arg_str(props) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let sig = match Signature::new(props.split(',').map(|s| s.trim().to_string())) {
            Ok(s) => s,
            Err(e) => return precondition(e),
        };
        let fixture = generate_fixture(&sig, seed);
        let model_file = ModelFile::from_parts(
            fixture.rep.selection_model(),
            Some(fixture.rep.pi()),
            Some(fixture.rep.u()),
        );
        let menu_file = MenuFile::from_menu(&fixture.menu);
        let prefs_file = PrefsFile {
            props: Some(sig.props().to_vec()),
            menu: menu_file.formulas.clone(),
            classes: None,
            model: Some(model_file.clone()),
        };
        let body = serde_json::json!({
            "model": model_file,
            "menu": menu_file,
            "prefs": prefs_file,
        });
        write_out(body.to_string(), out)
    })
}

/// Run the round trip over an inclusive seed range; `Failed` when any
/// seed fails. The JSON summary lands in `out` either way.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn dorep_roundtrip(
    props: *const c_char,
    seed_lo: u64,
    seed_hi: u64,
    pairs: u64,
    out: *mut *mut c_char,
) -> DorepStatus {
    guard(|| {
        if out.is_null() {
            set_error("null out pointer");
            return DorepStatus::NullPointer;
        }
        let props = match arg_str(props) {
            Ok(t) => t,
            Err(status) => return status,
        };
        let sig = match Signature::new(props.split(',').map(|s| s.trim().to_string())) {
            Ok(s) => s,
            Err(e) => return precondition(e),
        };
        if seed_lo > seed_hi {
            return precondition("empty seed range");
        }
        let config = RoundtripConfig {
            pairs,
            ..RoundtripConfig::default()
        };
        let label = format!("{seed_lo}..{seed_hi}");
        match roundtrip_many(&sig, seed_lo..=seed_hi, &config, &label) {
            Ok(summary) => {
                let all = summary.passed == summary.total;
                match to_json_string(&summary) {
                    Ok(text) => {
                        let status = write_out(text, out);
                        if status == DorepStatus::Ok && !all {
                            set_error("some seeds failed the round trip");
                            DorepStatus::Failed
                        } else {
                            status
                        }
                    }
                    Err(e) => precondition(e),
                }
            }
            Err(e) => precondition(e),
        }
    })
}
