//! C interface to `ota-learn`.
//!
//! Automata cross the boundary as opaque `OtaAutomaton` handles. Every
//! fallible call returns an [`OtaStatus`]; on failure `ota_last_error`
//! describes what went wrong on the calling thread. Strings handed out by
//! the library are freed with `ota_string_free`, handles with
//! `ota_automaton_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ota_learn::cli::membership;
use ota_learn::generator::{generate, GenSpec};
use ota_learn::io::{automaton_from_json, automaton_to_json};
use ota_learn::word::{parse_word, WordKind};
use ota_learn::{equivalent, learn_normal, learn_smart, LearnError, NormalConfig, Oracle, Ota, SmartConfig};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OtaStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidArgument = 4,
    ResourceLimit = 5,
    LearnFailed = 6,
    Panic = 7,
}

/// Which teacher the learner talks to.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OtaMode {
    Smart = 0,
    Normal = 1,
}

/// Figures reported by `ota_learn`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct OtaLearnStats {
    pub membership_count: u64,
    pub equivalence_count: u64,
    /// All hypothesis locations, the sink included.
    pub locations_learned: u64,
    /// Zero in smart mode.
    pub explored_instances: u64,
}

/// Opaque automaton handle.
pub struct OtaAutomaton(Ota);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).expect("no interior nul"));
}

struct Fail(OtaStatus, String);

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> OtaStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            OtaStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            OtaStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(OtaStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Fail(OtaStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn handle<'a>(p: *const OtaAutomaton, what: &str) -> Result<&'a Ota, Fail> {
    p.as_ref().map(|h| &h.0).ok_or_else(|| Fail(OtaStatus::NullArgument, format!("{what} is null")))
}

fn out_ptr<T>(p: *mut T, what: &str) -> Result<(), Fail> {
    if p.is_null() {
        Err(Fail(OtaStatus::NullArgument, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread, or "" after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ota_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parse an automaton document.
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ota_automaton_from_json(json: *const c_char, out: *mut *mut OtaAutomaton) -> OtaStatus {
    guard(|| {
        out_ptr(out, "out")?;
        let a = automaton_from_json(text(json, "json")?).map_err(|e| Fail(OtaStatus::ParseError, e.to_string()))?;
        *out = Box::into_raw(Box::new(OtaAutomaton(a)));
        Ok(())
    })
}

/// Serialize an automaton; free the result with `ota_string_free`.
///
/// # Safety
/// `a` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ota_automaton_to_json(a: *const OtaAutomaton, out: *mut *mut c_char) -> OtaStatus {
    guard(|| {
        out_ptr(out, "out")?;
        *out = owned_string(automaton_to_json(handle(a, "automaton")?));
        Ok(())
    })
}

/// Number of locations, or 0 for a null handle.
///
/// # Safety
/// `a` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ota_automaton_locations(a: *const OtaAutomaton) -> usize {
    a.as_ref().map_or(0, |h| h.0.locations().len())
}

/// # Safety
/// `a` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn ota_automaton_free(a: *mut OtaAutomaton) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// # Safety
/// `s` must be null or a string returned by this library and not freed before.
#[no_mangle]
pub unsafe extern "C" fn ota_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Classify a word. `kind` is one of "delay", "logical", "reset-delay",
/// "reset-logical"; the verdict is written as '+', '-' or 'x'.
///
/// # Safety
/// `a` must be a live handle, `word` and `kind` nul-terminated strings,
/// `verdict` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ota_member(a: *const OtaAutomaton, word: *const c_char, kind: *const c_char, trick: bool, verdict: *mut c_char) -> OtaStatus {
    guard(|| {
        out_ptr(verdict, "verdict")?;
        let a = handle(a, "automaton")?;
        let kind: WordKind = text(kind, "kind")?.parse().map_err(|e: String| Fail(OtaStatus::InvalidArgument, e))?;
        let w = parse_word(text(word, "word")?, kind, a.alphabet()).map_err(|e| Fail(OtaStatus::ParseError, e.to_string()))?;
        *verdict = membership(a, &w, trick).symbol() as c_char;
        Ok(())
    })
}

/// Decide timed-language equivalence. When the automata differ and
/// `witness` is non-null, a separating delay word is stored there (free
/// it with `ota_string_free`); otherwise `*witness` is set to null.
///
/// # Safety
/// `a`, `b` must be live handles, `equal` a valid pointer, `witness` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ota_equivalent(a: *const OtaAutomaton, b: *const OtaAutomaton, equal: *mut bool, witness: *mut *mut c_char) -> OtaStatus {
    guard(|| {
        out_ptr(equal, "equal")?;
        let (a, b) = (handle(a, "a")?, handle(b, "b")?);
        if !a.alphabet().same_symbols(b.alphabet()) {
            return Err(Fail(OtaStatus::InvalidArgument, "automata use different alphabets".into()));
        }
        let w = equivalent(a, b).map_err(|e| Fail(OtaStatus::InvalidArgument, e.to_string()))?;
        *equal = w.is_none();
        if !witness.is_null() {
            *witness = match w {
                Some(w) => owned_string(ota_learn::word::WordText::to_text(&w[..], a.alphabet())),
                None => ptr::null_mut(),
            };
        }
        Ok(())
    })
}

/// Learn `target` with a simulated teacher. `stats` may be null.
///
/// # Safety
/// `target` must be a live handle, `hypothesis` a valid pointer, `stats` null or valid.
#[no_mangle]
pub unsafe extern "C" fn ota_learn(
    target: *const OtaAutomaton,
    mode: OtaMode,
    trick: bool,
    hypothesis: *mut *mut OtaAutomaton,
    stats: *mut OtaLearnStats,
) -> OtaStatus {
    guard(|| {
        out_ptr(hypothesis, "hypothesis")?;
        let target = handle(target, "target")?;
        let mut oracle = Oracle::new(target, trick).map_err(|e| Fail(OtaStatus::InvalidArgument, e.to_string()))?;
        let result = match mode {
            OtaMode::Smart => learn_smart(&mut oracle, target.alphabet(), &SmartConfig::default()),
            OtaMode::Normal => learn_normal(&mut oracle, target.alphabet(), &NormalConfig { trick, ..NormalConfig::default() }),
        };
        let r = result.map_err(|e| match e {
            LearnError::ResourceLimit(m) => Fail(OtaStatus::ResourceLimit, m),
            e => Fail(OtaStatus::LearnFailed, e.to_string()),
        })?;
        if let Some(s) = stats.as_mut() {
            *s = OtaLearnStats {
                membership_count: r.stats.membership_count,
                equivalence_count: r.stats.equivalence_count,
                locations_learned: r.hypothesis.locations().len() as u64,
                explored_instances: r.stats.normal.map_or(0, |n| n.explored_instances),
            };
        }
        *hypothesis = Box::into_raw(Box::new(OtaAutomaton(r.hypothesis)));
        Ok(())
    })
}

/// A random automaton; the same arguments always give the same automaton.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ota_generate(locations: usize, alphabet: usize, kappa: u64, seed: u64, density: f64, out: *mut *mut OtaAutomaton) -> OtaStatus {
    guard(|| {
        out_ptr(out, "out")?;
        if locations == 0 || alphabet == 0 || !(density > 0.0 && density <= 3.0) {
            return Err(Fail(OtaStatus::InvalidArgument, "need at least one location, one action and a density in (0, 3]".into()));
        }
        let a = generate(&GenSpec { locations, alphabet, kappa, seed, density });
        *out = Box::into_raw(Box::new(OtaAutomaton(a)));
        Ok(())
    })
}
