//! C ABI over the `qlb` core: opaque instance and session handles, status
//! codes, and a per-thread last-error message.
//!
//! Every function returns a [`QlbStatus`] and writes results through out
//! pointers. Strings returned by the library are freed with
//! [`qlb_string_free`]; handles with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use qlb::embeddings::{gap_label, materialize, EmbeddingError, EmbeddingInstance, InstanceFile};
use qlb::graph::{Query, QueryAnswer, QueryError};
use qlb::protocol::ProtocolSession;
use qlb::seed::{derive_seed, rng_from_seed};
use rand_chacha::ChaCha8Rng;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlbStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    InvalidParams = 4,
    VertexOutOfRange = 5,
    NeighborIndexOutOfRange = 6,
    NoEdges = 7,
    Unsupported = 8,
    BudgetExceeded = 9,
    CapExceeded = 10,
    CapabilityViolation = 11,
    Panic = 12,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QlbQueryKind {
    Degree = 0,
    Neighbor = 1,
    Pair = 2,
    RandomEdge = 3,
}

/// Answer to a simulated query.
///
/// Degree: `first` is the degree. Neighbor: `flag` says whether a neighbor
/// exists and `first` is it. Pair: `flag`. RandomEdge: `first < second`.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QlbAnswer {
    pub first: u64,
    pub second: u64,
    pub flag: bool,
}

/// An embedding instance plus the randomness for its random-edge queries.
pub struct QlbInstance {
    inst: EmbeddingInstance,
    rng: ChaCha8Rng,
}

/// A two-party session bound to one instance.
pub struct QlbSession {
    inst: EmbeddingInstance,
    session: ProtocolSession,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

struct Failure(QlbStatus, String);

impl From<QueryError> for Failure {
    fn from(e: QueryError) -> Self {
        let status = match e {
            QueryError::VertexOutOfRange { .. } => QlbStatus::VertexOutOfRange,
            QueryError::NeighborIndexOutOfRange { .. } => QlbStatus::NeighborIndexOutOfRange,
            QueryError::NoEdges => QlbStatus::NoEdges,
            QueryError::Unsupported { .. } => QlbStatus::Unsupported,
            QueryError::BudgetExceeded { .. } => QlbStatus::BudgetExceeded,
            QueryError::CapabilityViolation(_) => QlbStatus::CapabilityViolation,
        };
        Failure(status, e.to_string())
    }
}

impl From<EmbeddingError> for Failure {
    fn from(e: EmbeddingError) -> Self {
        let status = match e {
            EmbeddingError::CapExceeded { .. } => QlbStatus::CapExceeded,
            EmbeddingError::Unsupported { .. } => QlbStatus::Unsupported,
            _ => QlbStatus::InvalidParams,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(QlbStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, mapping errors and panics to a status and recording the message.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> QlbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            QlbStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            QlbStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn instance<'a>(inst: *const QlbInstance) -> Result<&'a QlbInstance, Failure> {
    inst.as_ref().ok_or_else(|| null("instance"))
}

unsafe fn instance_mut<'a>(inst: *mut QlbInstance) -> Result<&'a mut QlbInstance, Failure> {
    inst.as_mut().ok_or_else(|| null("instance"))
}

fn to_usize(v: u64) -> usize {
    usize::try_from(v).unwrap_or(usize::MAX)
}

fn answer_to_c(a: QueryAnswer) -> QlbAnswer {
    match a {
        QueryAnswer::DegreeIs(d) => QlbAnswer { first: d as u64, ..Default::default() },
        QueryAnswer::NeighborIs(w) => QlbAnswer { first: w.map_or(0, |w| w as u64), second: 0, flag: w.is_some() },
        QueryAnswer::PairIs(b) => QlbAnswer { flag: b, ..Default::default() },
        QueryAnswer::EdgeIs(u, v) => QlbAnswer { first: u as u64, second: v as u64, flag: true },
    }
}

fn query_from_c(kind: QlbQueryKind, a: u64, b: u64) -> Query {
    match kind {
        QlbQueryKind::Degree => Query::Degree(to_usize(a)),
        QlbQueryKind::Neighbor => Query::Neighbor(to_usize(a), to_usize(b)),
        QlbQueryKind::Pair => Query::Pair(to_usize(a), to_usize(b)),
        QlbQueryKind::RandomEdge => Query::RandomEdge,
    }
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on this thread.
#[no_mangle]
pub extern "C" fn qlb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses an instance JSON document as written by `qlb gen`.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_from_json(json: *const c_char, out: *mut *mut QlbInstance) -> QlbStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json)
            .to_str()
            .map_err(|e| Failure(QlbStatus::InvalidUtf8, e.to_string()))?;
        let file: InstanceFile =
            serde_json::from_str(text).map_err(|e| Failure(QlbStatus::ParseError, e.to_string()))?;
        let inst = EmbeddingInstance::from_file(&file)?;
        let rng = rng_from_seed(derive_seed(inst.seed(), 0));
        write(out, Box::into_raw(Box::new(QlbInstance { inst, rng })), "out")
    })
}

/// # Safety
/// `inst` must come from [`qlb_instance_from_json`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_free(inst: *mut QlbInstance) {
    if !inst.is_null() {
        drop(Box::from_raw(inst));
    }
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_vertex_count(inst: *const QlbInstance, out: *mut u64) -> QlbStatus {
    guard(|| write(out, instance(inst)?.inst.vertex_count() as u64, "out"))
}

/// Direct (non-simulated) query. Random edges draw from the handle's own
/// stream, seeded from the instance seed.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_query(
    inst: *mut QlbInstance,
    kind: QlbQueryKind,
    a: u64,
    b: u64,
    out: *mut QlbAnswer,
) -> QlbStatus {
    guard(|| {
        let h = instance_mut(inst)?;
        let answer = qlb::embeddings::lazy_answer(&h.inst, query_from_c(kind, a, b), &mut h.rng)?;
        write(out, answer_to_c(answer), "out")
    })
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_degree(inst: *mut QlbInstance, v: u64, out: *mut u64) -> QlbStatus {
    let mut a = QlbAnswer::default();
    let status = qlb_instance_query(inst, QlbQueryKind::Degree, v, 0, &mut a);
    if status == QlbStatus::Ok {
        return guard(|| write(out, a.first, "out"));
    }
    status
}

/// The `i`-th (1-based) neighbor of `v`; `found` is false past the degree.
///
/// # Safety
/// `inst` must be a live handle; `found` and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_neighbor(
    inst: *mut QlbInstance,
    v: u64,
    i: u64,
    found: *mut bool,
    out: *mut u64,
) -> QlbStatus {
    let mut a = QlbAnswer::default();
    let status = qlb_instance_query(inst, QlbQueryKind::Neighbor, v, i, &mut a);
    if status == QlbStatus::Ok {
        return guard(|| {
            write(found, a.flag, "found")?;
            write(out, a.first, "out")
        });
    }
    status
}

/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_pair(inst: *mut QlbInstance, u: u64, v: u64, out: *mut bool) -> QlbStatus {
    let mut a = QlbAnswer::default();
    let status = qlb_instance_query(inst, QlbQueryKind::Pair, u, v, &mut a);
    if status == QlbStatus::Ok {
        return guard(|| write(out, a.flag, "out"));
    }
    status
}

/// # Safety
/// `inst` must be a live handle; `u` and `v` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_random_edge(inst: *mut QlbInstance, u: *mut u64, v: *mut u64) -> QlbStatus {
    let mut a = QlbAnswer::default();
    let status = qlb_instance_query(inst, QlbQueryKind::RandomEdge, 0, 0, &mut a);
    if status == QlbStatus::Ok {
        return guard(|| {
            write(u, a.first, "u")?;
            write(v, a.second, "v")
        });
    }
    status
}

/// The value of the underlying two-party function on the instance's inputs.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_gap_label(inst: *const QlbInstance, out: *mut bool) -> QlbStatus {
    guard(|| write(out, gap_label(&instance(inst)?.inst)?, "out"))
}

/// The materialized graph in the text edge-list format. Free the result with
/// [`qlb_string_free`].
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_instance_to_edge_list(inst: *const QlbInstance, out: *mut *mut c_char) -> QlbStatus {
    guard(|| {
        let g = materialize(&instance(inst)?.inst)?;
        let text = CString::new(g.to_edge_list()).expect("edge list has no NUL");
        write(out, text.into_raw(), "out")
    })
}

/// # Safety
/// `s` must come from this library and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qlb_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Starts a two-party session on a copy of `inst`; `seed` drives the shared
/// randomness.
///
/// # Safety
/// `inst` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_session_new(inst: *const QlbInstance, seed: u64, out: *mut *mut QlbSession) -> QlbStatus {
    guard(|| {
        let inst = instance(inst)?.inst.clone();
        let session = ProtocolSession::from_pair(inst.inputs(), seed);
        write(out, Box::into_raw(Box::new(QlbSession { inst, session })), "out")
    })
}

/// # Safety
/// `session` must come from [`qlb_session_new`] and not be used again.
#[no_mangle]
pub unsafe extern "C" fn qlb_session_free(session: *mut QlbSession) {
    if !session.is_null() {
        drop(Box::from_raw(session));
    }
}

/// Answers one query through the parties; `bits` receives its cost.
///
/// # Safety
/// `session` must be a live handle; `out` and `bits` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_session_query(
    session: *mut QlbSession,
    kind: QlbQueryKind,
    a: u64,
    b: u64,
    out: *mut QlbAnswer,
    bits: *mut u64,
) -> QlbStatus {
    guard(|| {
        let s = session.as_mut().ok_or_else(|| null("session"))?;
        let answer = s.session.simulate_query(&s.inst, query_from_c(kind, a, b))?;
        let cost = s.session.transcript().entries().last().map_or(0, |e| e.bits);
        write(out, answer_to_c(answer), "out")?;
        write(bits, cost, "bits")
    })
}

/// # Safety
/// `session` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_session_total_bits(session: *const QlbSession, out: *mut u64) -> QlbStatus {
    guard(|| {
        let s = session.as_ref().ok_or_else(|| null("session"))?;
        write(out, s.session.transcript().total_bits(), "out")
    })
}

/// # Safety
/// `session` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn qlb_session_query_count(session: *const QlbSession, out: *mut u64) -> QlbStatus {
    guard(|| {
        let s = session.as_ref().ok_or_else(|| null("session"))?;
        write(out, s.session.transcript().len() as u64, "out")
    })
}
