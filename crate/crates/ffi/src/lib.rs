//! C bindings. Every function returns a `CnlStatus`; on failure the message
//! is available from `cnl_last_error_message` on the same thread.
//! Strings handed out must be released with `cnl_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use cnl_core::executor::ScriptedIo;
use cnl_core::kb::KbError;
use cnl_core::lexicon::{Lexicon, LexiconError};
use cnl_core::session::{Outcome, Session, SessionError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CnlStatus {
    Ok = 0,
    /// The sentence contradicts the knowledge base.
    Rejected = 1,
    /// Several readings; pick one with `cnl_session_choose`.
    Ambiguous = 2,
    NullArgument = 3,
    InvalidUtf8 = 4,
    Parse = 5,
    /// Anaphora, translation or unknown names.
    Language = 6,
    Inference = 7,
    Io = 8,
    Format = 9,
    Execution = 10,
    Usage = 11,
    Panic = 12,
}

/// Opaque dialog state.
pub struct CnlSession {
    inner: Session,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Fail(CnlStatus, String);

impl From<SessionError> for Fail {
    fn from(e: SessionError) -> Self {
        let status = match &e {
            SessionError::Parse(_) => CnlStatus::Parse,
            SessionError::Discourse(_) | SessionError::Translate(_) | SessionError::UnknownName { .. } => {
                CnlStatus::Language
            }
            SessionError::Solve(_) => CnlStatus::Inference,
            SessionError::Kb(KbError::Io { .. }) | SessionError::Lexicon(LexiconError::Io(_)) => CnlStatus::Io,
            SessionError::Kb(_) | SessionError::Lexicon(_) => CnlStatus::Format,
            SessionError::Exec(_) => CnlStatus::Execution,
            _ => CnlStatus::Usage,
        };
        Fail(status, e.to_string())
    }
}

unsafe fn arg<'a>(p: *const c_char, name: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(Fail(CnlStatus::NullArgument, format!("{name} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fail(CnlStatus::InvalidUtf8, format!("{name} is not UTF-8")))
}

unsafe fn session<'a>(s: *mut CnlSession) -> Result<&'a mut Session, Fail> {
    s.as_mut()
        .map(|s| &mut s.inner)
        .ok_or_else(|| Fail(CnlStatus::NullArgument, "session is null".into()))
}

unsafe fn put(out: *mut *mut c_char, text: String) -> Result<(), Fail> {
    if out.is_null() {
        return Err(Fail(CnlStatus::NullArgument, "output pointer is null".into()));
    }
    let c = CString::new(text.replace('\0', " ")).expect("no interior nul");
    *out = c.into_raw();
    Ok(())
}

fn guard(f: impl FnOnce() -> Result<CnlStatus, Fail>) -> CnlStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(status)) => status,
        Ok(Err(Fail(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal error");
            CnlStatus::Panic
        }
    }
}

fn outcome_status(outcomes: &[Outcome]) -> CnlStatus {
    if outcomes.iter().any(|o| matches!(o, Outcome::Rejected(_))) {
        CnlStatus::Rejected
    } else if outcomes.iter().any(|o| matches!(o, Outcome::Ambiguous(_))) {
        CnlStatus::Ambiguous
    } else {
        CnlStatus::Ok
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn cnl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Message of the last failed call on this thread, or NULL. Valid until the next call.
#[no_mangle]
pub extern "C" fn cnl_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// A new session. `lexicon_path` may be NULL for the bundled ATM lexicon.
///
/// # Safety
/// `lexicon_path` is NULL or a nul-terminated string; `out` is writable.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_new(lexicon_path: *const c_char, out: *mut *mut CnlSession) -> CnlStatus {
    guard(|| {
        if out.is_null() {
            return Err(Fail(CnlStatus::NullArgument, "output pointer is null".into()));
        }
        let lexicon = if lexicon_path.is_null() {
            Lexicon::atm()
        } else {
            let path = arg(lexicon_path, "lexicon_path")?;
            Lexicon::load(Path::new(path)).map_err(|e| Fail::from(SessionError::from(e)))?
        };
        *out = Box::into_raw(Box::new(CnlSession { inner: Session::new(lexicon) }));
        Ok(CnlStatus::Ok)
    })
}

/// # Safety
/// `s` is NULL or came from `cnl_session_new` and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_free(s: *mut CnlSession) {
    if !s.is_null() {
        let _ = catch_unwind(AssertUnwindSafe(|| drop(Box::from_raw(s))));
    }
}

/// Processes statements and questions; `out_text` receives one line per sentence.
///
/// # Safety
/// `s` is a live session, `text` a nul-terminated string, `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_process(
    s: *mut CnlSession,
    text: *const c_char,
    out_text: *mut *mut c_char,
) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        let text = arg(text, "text")?;
        let mut outcomes = Vec::new();
        for r in session.process(text) {
            outcomes.push(r?);
        }
        let lines: Vec<String> = outcomes.iter().map(Outcome::message).collect();
        put(out_text, lines.join("\n"))?;
        Ok(outcome_status(&outcomes))
    })
}

/// Picks reading `n` (from 1) of the pending ambiguous sentence.
///
/// # Safety
/// As for `cnl_session_process`.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_choose(s: *mut CnlSession, n: usize, out_text: *mut *mut c_char) -> CnlStatus {
    guard(|| {
        let o = session(s)?.choose(n)?;
        put(out_text, o.message())?;
        Ok(outcome_status(std::slice::from_ref(&o)))
    })
}

/// The knowledge base in its file format.
///
/// # Safety
/// `s` is a live session and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_kb_text(s: *mut CnlSession, out_text: *mut *mut c_char) -> CnlStatus {
    guard(|| {
        let text = session(s)?.kb.to_text();
        put(out_text, text)?;
        Ok(CnlStatus::Ok)
    })
}

/// The knowledge base paraphrased in English, one sentence per line.
///
/// # Safety
/// `s` is a live session and `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_paraphrase(s: *mut CnlSession, out_text: *mut *mut c_char) -> CnlStatus {
    guard(|| {
        let lines = session(s)?.paraphrase();
        put(out_text, lines.join("\n"))?;
        Ok(CnlStatus::Ok)
    })
}

/// # Safety
/// `s` is a live session and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_save_kb(s: *mut CnlSession, path: *const c_char) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        session.save_kb(Path::new(arg(path, "path")?))?;
        Ok(CnlStatus::Ok)
    })
}

/// Replaces the knowledge base with the file's.
///
/// # Safety
/// `s` is a live session and `path` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_load_kb(s: *mut CnlSession, path: *const c_char) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        session.load_kb(Path::new(arg(path, "path")?))?;
        Ok(CnlStatus::Ok)
    })
}

/// Adds a lexicon entry in the lexicon file syntax.
///
/// # Safety
/// `s` is a live session and `entry` a nul-terminated string.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_add_word(s: *mut CnlSession, entry: *const c_char) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        session.add_lexicon_entry(arg(entry, "entry")?)?;
        Ok(CnlStatus::Ok)
    })
}

/// Asks `prompt` whenever `pred`/`arity` is executed in a scenario.
///
/// # Safety
/// `s` is a live session; `pred` and `prompt` are nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_register_prompt(
    s: *mut CnlSession,
    pred: *const c_char,
    arity: usize,
    prompt: *const c_char,
) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        session.register_prompt(arg(pred, "pred")?, arity, arg(prompt, "prompt")?)?;
        Ok(CnlStatus::Ok)
    })
}

/// Defines scenario `name`, one sentence per line of `sentences`.
///
/// # Safety
/// `s` is a live session; `name` and `sentences` are nul-terminated strings.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_define_scenario(
    s: *mut CnlSession,
    name: *const c_char,
    sentences: *const c_char,
) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        let name = arg(name, "name")?;
        let lines = arg(sentences, "sentences")?
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty())
            .map(str::to_string)
            .collect();
        session.define_scenario(name, lines);
        Ok(CnlStatus::Ok)
    })
}

/// Runs a scenario answering questions from `replies`, one per line (may be NULL).
/// `out_text` receives the trace, questions and replies included.
///
/// # Safety
/// `s` is a live session; strings are nul-terminated; `out_text` writable.
#[no_mangle]
pub unsafe extern "C" fn cnl_session_run_scenario(
    s: *mut CnlSession,
    name: *const c_char,
    replies: *const c_char,
    keep: bool,
    out_text: *mut *mut c_char,
) -> CnlStatus {
    guard(|| {
        let session = session(s)?;
        let name = arg(name, "name")?;
        let mut io = if replies.is_null() {
            ScriptedIo::default()
        } else {
            ScriptedIo::from_text(arg(replies, "replies")?)
        };
        let trace = session.run_scenario(name, &mut io, keep)?;
        put(out_text, trace.to_string())?;
        Ok(CnlStatus::Ok)
    })
}

/// # Safety
/// `p` is NULL or a string returned by this library, freed once.
#[no_mangle]
pub unsafe extern "C" fn cnl_string_free(p: *mut c_char) {
    if !p.is_null() {
        drop(CString::from_raw(p));
    }
}
