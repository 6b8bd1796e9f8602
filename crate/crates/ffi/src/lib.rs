//! C interface to `symsep`.
//!
//! States and witnesses are opaque handles returned through out-pointers and
//! released with the matching `_free`. Every fallible call
//! returns a [`SymsepStatus`]; on failure a message is kept per thread and can
//! be copied out with [`symsep_last_error`]. Panics never cross the boundary.
//!
//! Calls that fill a caller buffer write the required size to `needed` first
//! and return `SYMSEP_STATUS_BUFFER_TOO_SMALL` when the buffer is null or
//! short, so a first call with a null buffer can be used to size it.

use std::cell::RefCell;
use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};

use symsep::criteria::{bipartition_report, full_report_with_tol, LocalOrthogonalBasis};
use symsep::io::{parse_state, state_to_json, StateFile};
use symsep::schmidt::schmidt_decompose;
use symsep::states::random::{random_separable_symmetric_state, random_symmetric_state};
use symsep::states::{builtin_rho33, smolin_state, Bipartition};
use symsep::witness::{build_rho33_witness, build_schmidt_witness, default_keep, Witness};
use symsep::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymsepStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    Validation = 4,
    NotSymmetric = 5,
    NotPermutationallyInvariant = 6,
    DimensionTooLarge = 7,
    DimensionMismatch = 8,
    BadPartition = 9,
    Numerical = 10,
    Unsupported = 11,
    BufferTooSmall = 12,
    Io = 13,
    Panic = 14,
}

impl From<&Error> for SymsepStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Parse(_) => SymsepStatus::Parse,
            Error::Validation(_) | Error::NonHermitian { .. } | Error::NonFinite | Error::NotPsd { .. } => {
                SymsepStatus::Validation
            }
            Error::NotSymmetric | Error::NotSymmetricOperator => SymsepStatus::NotSymmetric,
            Error::NotPermutationallyInvariant => SymsepStatus::NotPermutationallyInvariant,
            Error::DimensionTooLarge { .. } => SymsepStatus::DimensionTooLarge,
            Error::DimensionMismatch { .. } | Error::ShapeMismatch { .. } | Error::NonSquare { .. } => {
                SymsepStatus::DimensionMismatch
            }
            Error::BadPartition(_) => SymsepStatus::BadPartition,
            Error::Numerical(_) | Error::BadDecomposition(_) => SymsepStatus::Numerical,
            Error::Unsupported(_) | Error::NotPpt { .. } => SymsepStatus::Unsupported,
            Error::Io(_) => SymsepStatus::Io,
            _ => SymsepStatus::InvalidArgument,
        }
    }
}

/// Opaque state handle, bipartite or multi-qubit.
pub struct SymsepState {
    inner: StateFile,
}

/// Opaque witness handle.
pub struct SymsepWitness {
    inner: Witness,
}

/// Criteria values for a bipartite state. Verdict fields are 1 when the
/// criterion detects entanglement.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SymsepCriteria {
    pub ppt_min_eigenvalue: f64,
    pub ccnr_trace_norm: f64,
    pub observable_min_value: f64,
    pub eta_min_eigenvalue: f64,
    pub corr_min_eigenvalue: f64,
    pub covariance_lhs: f64,
    pub covariance_rhs: f64,
    pub ppt_violated: u8,
    pub ccnr_violated: u8,
    pub observable_violated: u8,
    pub eta_violated: u8,
    pub corr_violated: u8,
    pub covariance_violated: u8,
    pub symmetric: u8,
    pub permutationally_invariant: u8,
}

/// PPT and CCNR values across one multi-qubit bipartition.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct SymsepBipartition {
    pub pt_min_eigenvalue: f64,
    pub realigned_trace_norm: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<String> = const { RefCell::new(String::new()) };
}

fn set_error(msg: String) {
    LAST_ERROR.with(|e| *e.borrow_mut() = msg);
}

fn guard(f: impl FnOnce() -> Result<(), SymsepStatus>) -> SymsepStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error(String::new());
            SymsepStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic".into());
            SymsepStatus::Panic
        }
    }
}

fn fail(e: Error) -> SymsepStatus {
    let s = SymsepStatus::from(&e);
    set_error(e.to_string());
    s
}

fn invalid(msg: &str) -> SymsepStatus {
    set_error(msg.into());
    SymsepStatus::InvalidArgument
}

fn null(what: &str) -> SymsepStatus {
    set_error(format!("null pointer: {what}"));
    SymsepStatus::NullPointer
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, SymsepStatus> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, SymsepStatus> {
    p.as_mut().ok_or_else(|| null(what))
}

fn bipartite(s: &SymsepState) -> Result<&symsep::states::BipartiteState, SymsepStatus> {
    match &s.inner {
        StateFile::Bipartite(b) => Ok(b),
        StateFile::MultiQubit(_) => Err(invalid("expected a bipartite state")),
    }
}

fn store_state(out: *mut *mut SymsepState, s: StateFile) -> Result<(), SymsepStatus> {
    let slot = unsafe { out_ref(out, "out")? };
    *slot = Box::into_raw(Box::new(SymsepState { inner: s }));
    Ok(())
}

fn store_witness(out: *mut *mut SymsepWitness, w: Witness) -> Result<(), SymsepStatus> {
    let slot = unsafe { out_ref(out, "out")? };
    *slot = Box::into_raw(Box::new(SymsepWitness { inner: w }));
    Ok(())
}

/// Copies `text` plus a terminating NUL into `buf` when it fits. `needed`
/// always receives the full size including the NUL.
unsafe fn copy_string(text: &str, buf: *mut c_char, len: usize, needed: *mut usize) -> Result<(), SymsepStatus> {
    let size = text.len() + 1;
    if let Some(n) = needed.as_mut() {
        *n = size;
    }
    if buf.is_null() || len < size {
        // no set_error here: this also serves symsep_last_error
        return Err(SymsepStatus::BufferTooSmall);
    }
    std::ptr::copy_nonoverlapping(text.as_ptr(), buf.cast::<u8>(), text.len());
    *buf.add(text.len()) = 0;
    Ok(())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn symsep_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Static description of a status code, or of an unknown code.
#[no_mangle]
pub extern "C" fn symsep_status_message(status: i32) -> *const c_char {
    let s: &'static str = match status {
        0 => "ok\0",
        1 => "null pointer\0",
        2 => "invalid argument\0",
        3 => "parse error\0",
        4 => "validation error\0",
        5 => "not symmetric\0",
        6 => "not permutationally invariant\0",
        7 => "dimension too large\0",
        8 => "dimension mismatch\0",
        9 => "bad bipartition\0",
        10 => "numerical failure\0",
        11 => "unsupported\0",
        12 => "buffer too small\0",
        13 => "io error\0",
        14 => "internal panic\0",
        _ => "unknown status\0",
    };
    s.as_ptr().cast()
}

/// Copies the calling thread's last error message into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` bytes or null; `needed` may be null.
#[no_mangle]
pub unsafe extern "C" fn symsep_last_error(buf: *mut c_char, len: usize, needed: *mut usize) -> SymsepStatus {
    let msg = LAST_ERROR.with(|e| e.borrow().clone());
    match copy_string(&msg, buf, len, needed) {
        Ok(()) => SymsepStatus::Ok,
        Err(s) => s,
    }
}

/// Parses a state from JSON and validates it at `tol`.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_from_json(
    json: *const c_char,
    tol: f64,
    out: *mut *mut SymsepState,
) -> SymsepStatus {
    guard(|| {
        if json.is_null() {
            return Err(null("json"));
        }
        let text = CStr::from_ptr(json).to_str().map_err(|_| invalid("json is not UTF-8"))?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        store_state(out, parse_state(text, tol).map_err(fail)?)
    })
}

/// The built-in 3x3 PPT entangled state.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_rho33(out: *mut *mut SymsepState) -> SymsepStatus {
    guard(|| store_state(out, StateFile::Bipartite(builtin_rho33())))
}

/// Smolin state on `2n` qubits.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_smolin(n: usize, out: *mut *mut SymsepState) -> SymsepStatus {
    guard(|| store_state(out, StateFile::MultiQubit(smolin_state(n).map_err(fail)?)))
}

/// Random symmetric state of local dimension `d`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_random_symmetric(d: usize, seed: u64, out: *mut *mut SymsepState) -> SymsepStatus {
    guard(|| store_state(out, StateFile::Bipartite(random_symmetric_state(d, seed).map_err(fail)?)))
}

/// Random separable symmetric state with `terms` product terms.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_random_separable(
    d: usize,
    terms: usize,
    seed: u64,
    out: *mut *mut SymsepState,
) -> SymsepStatus {
    guard(|| {
        let s = random_separable_symmetric_state(d, terms, seed).map_err(fail)?;
        store_state(out, StateFile::Bipartite(s))
    })
}

/// Releases a state. Null is ignored.
///
/// # Safety
/// `s` must come from a `symsep_state_*` constructor and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_free(s: *mut SymsepState) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Local dimension of a bipartite state, or the qubit count of a multi-qubit
/// one. `is_multiqubit` receives 0 or 1.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_shape(
    s: *const SymsepState,
    size: *mut usize,
    is_multiqubit: *mut u8,
) -> SymsepStatus {
    guard(|| {
        let s = deref(s, "state")?;
        let (n, mq) = match &s.inner {
            StateFile::Bipartite(b) => (b.dim(), 0),
            StateFile::MultiQubit(q) => (q.qubits(), 1),
        };
        *out_ref(size, "size")? = n;
        *out_ref(is_multiqubit, "is_multiqubit")? = mq;
        Ok(())
    })
}

/// Serializes a state to JSON as a NUL-terminated string.
///
/// # Safety
/// `s` must be valid; `buf` valid for `len` bytes or null.
#[no_mangle]
pub unsafe extern "C" fn symsep_state_to_json(
    s: *const SymsepState,
    buf: *mut c_char,
    len: usize,
    needed: *mut usize,
) -> SymsepStatus {
    guard(|| {
        let s = deref(s, "state")?;
        let text = state_to_json(&s.inner).map_err(fail)?;
        copy_string(&text, buf, len, needed).inspect_err(|_| {
            set_error(format!("buffer of {len} bytes is too small, {} needed", text.len() + 1))
        })
    })
}

/// Runs the six separability criteria on a bipartite state.
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symsep_criteria(s: *const SymsepState, tol: f64, out: *mut SymsepCriteria) -> SymsepStatus {
    guard(|| {
        let b = bipartite(deref(s, "state")?)?;
        if !(tol.is_finite() && tol > 0.0) {
            return Err(invalid("tolerance must be positive"));
        }
        let basis = LocalOrthogonalBasis::hermitian(b.dim()).map_err(fail)?;
        let r = full_report_with_tol(b, &basis, tol).map_err(fail)?;
        let v = r.verdicts;
        *out_ref(out, "out")? = SymsepCriteria {
            ppt_min_eigenvalue: r.ppt_min_eigenvalue,
            ccnr_trace_norm: r.ccnr_trace_norm,
            observable_min_value: r.observable_min_value,
            eta_min_eigenvalue: r.eta_min_eigenvalue,
            corr_min_eigenvalue: r.corr_min_eigenvalue,
            covariance_lhs: r.covariance_lhs,
            covariance_rhs: r.covariance_rhs,
            ppt_violated: v.ppt.into(),
            ccnr_violated: v.ccnr.into(),
            observable_violated: v.observable_positivity.into(),
            eta_violated: v.expectation_matrix.into(),
            corr_violated: v.correlation_matrix.into(),
            covariance_violated: v.covariance.into(),
            symmetric: r.symmetric.into(),
            permutationally_invariant: r.permutationally_invariant.into(),
        };
        Ok(())
    })
}

/// Writes the `d*d` Schmidt coefficients of a permutationally invariant
/// state, largest first. `count` always receives `d*d`.
///
/// # Safety
/// `s` must be valid; `buf` valid for `len` doubles or null.
#[no_mangle]
pub unsafe extern "C" fn symsep_schmidt_coefficients(
    s: *const SymsepState,
    buf: *mut f64,
    len: usize,
    count: *mut usize,
) -> SymsepStatus {
    guard(|| {
        let b = bipartite(deref(s, "state")?)?;
        let basis = LocalOrthogonalBasis::hermitian(b.dim()).map_err(fail)?;
        let c = schmidt_decompose(b, &basis).map_err(fail)?.coefficients;
        if let Some(n) = count.as_mut() {
            *n = c.len();
        }
        if buf.is_null() || len < c.len() {
            set_error(format!("buffer holds {len} values, {} needed", c.len()));
            return Err(SymsepStatus::BufferTooSmall);
        }
        std::ptr::copy_nonoverlapping(c.as_ptr(), buf, c.len());
        Ok(())
    })
}

/// Builds the Schmidt witness of a symmetric state keeping the `keep`
/// largest coefficients (0 selects the default).
///
/// # Safety
/// `s` and `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn symsep_witness_build(
    s: *const SymsepState,
    keep: usize,
    restarts: usize,
    seed: u64,
    out: *mut *mut SymsepWitness,
) -> SymsepStatus {
    guard(|| {
        let b = bipartite(deref(s, "state")?)?;
        if restarts == 0 {
            return Err(invalid("restarts must be positive"));
        }
        let keep = if keep == 0 { default_keep(b.dim()) } else { keep };
        let sw = build_schmidt_witness(b, keep, restarts, seed).map_err(fail)?;
        store_witness(out, sw.witness)
    })
}

/// The reference witness for the built-in 3x3 state.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn symsep_witness_rho33(out: *mut *mut SymsepWitness) -> SymsepStatus {
    guard(|| store_witness(out, build_rho33_witness().map_err(fail)?))
}

/// Separable bound of a witness.
///
/// # Safety
/// Both pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn symsep_witness_constant(w: *const SymsepWitness, out: *mut f64) -> SymsepStatus {
    guard(|| {
        *out_ref(out, "out")? = deref(w, "witness")?.inner.constant();
        Ok(())
    })
}

/// Witness value on a bipartite state; negative means entangled.
///
/// # Safety
/// All pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn symsep_witness_evaluate(
    w: *const SymsepWitness,
    s: *const SymsepState,
    out: *mut f64,
) -> SymsepStatus {
    guard(|| {
        let w = deref(w, "witness")?;
        let b = bipartite(deref(s, "state")?)?;
        *out_ref(out, "out")? = w.inner.evaluate(b).map_err(fail)?;
        Ok(())
    })
}

/// Releases a witness. Null is ignored.
///
/// # Safety
/// `w` must come from a `symsep_witness_*` constructor and not be freed
/// twice.
#[no_mangle]
pub unsafe extern "C" fn symsep_witness_free(w: *mut SymsepWitness) {
    if !w.is_null() {
        drop(Box::from_raw(w));
    }
}

/// PPT and CCNR values of a multi-qubit state across the cut that puts the
/// qubits in `left` on one side.
///
/// # Safety
/// `s` and `out` must be valid; `left` valid for `n_left` entries.
#[no_mangle]
pub unsafe extern "C" fn symsep_bipartition(
    s: *const SymsepState,
    left: *const usize,
    n_left: usize,
    out: *mut SymsepBipartition,
) -> SymsepStatus {
    guard(|| {
        let q = match &deref(s, "state")?.inner {
            StateFile::MultiQubit(q) => q,
            StateFile::Bipartite(_) => return Err(invalid("expected a multi-qubit state")),
        };
        if left.is_null() && n_left > 0 {
            return Err(null("left"));
        }
        let left = if n_left == 0 { &[][..] } else { std::slice::from_raw_parts(left, n_left) };
        let p = Bipartition::new(q.qubits(), left).map_err(fail)?;
        let r = bipartition_report(q, &p).map_err(fail)?;
        *out_ref(out, "out")? = SymsepBipartition {
            pt_min_eigenvalue: r.pt_min_eigenvalue,
            realigned_trace_norm: r.realigned_trace_norm,
        };
        Ok(())
    })
}
