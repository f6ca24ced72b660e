//! C ABI over the `macrospin` library.
//!
//! Conventions:
//! * quantum numbers cross the boundary doubled (`twice_j = 1` is spin 1/2);
//! * every function returns an [`MsStatus`]; results go through out-pointers;
//! * on failure [`ms_last_error`] holds a message for the calling thread;
//! * handles from `*_new` / constructors are released with the matching
//!   `*_free`; strings returned through `char **` with [`ms_string_free`].

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use macrospin::collective::{
    block_projector, gamma_element, projector_tensor_sum, rotated_block_projector, witness, Direction, EnsembleSpec,
    Operator,
};
use macrospin::contextuality::{compatibility_graph, joint_feasibility, theorem_scan, ContextScenario};
use macrospin::su2::{legendre, wigner_d_element, wigner_d_matrix};
use macrospin::{Error, HalfInt};

/// Outcome of every call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MsStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidQuantumNumber = 2,
    Domain = 3,
    DenseLimitExceeded = 4,
    EnsembleMismatch = 5,
    RepresentationMismatch = 6,
    InvalidDirection = 7,
    InvalidOutcome = 8,
    AssignmentLimitExceeded = 9,
    InvalidScenario = 10,
    InconsistentMarginals = 11,
    Parse = 12,
    BufferTooSmall = 13,
    InvalidUtf8 = 14,
    Panic = 15,
}

/// N spin-s particles.
pub struct MsEnsemble {
    spec: EnsembleSpec,
}

/// An operator on an ensemble, dense or block-diagonal.
pub struct MsOperator {
    op: Operator,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

enum Fail {
    Library(Error),
    Null(&'static str),
    Buffer { needed: usize, given: usize },
    Utf8(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Library(e)
    }
}

impl Fail {
    fn status(&self) -> MsStatus {
        match self {
            Fail::Null(_) => MsStatus::NullPointer,
            Fail::Buffer { .. } => MsStatus::BufferTooSmall,
            Fail::Utf8(_) => MsStatus::InvalidUtf8,
            Fail::Library(e) => match e {
                Error::InvalidQuantumNumber(_) => MsStatus::InvalidQuantumNumber,
                Error::Domain(_) => MsStatus::Domain,
                Error::DenseLimitExceeded { .. } => MsStatus::DenseLimitExceeded,
                Error::EnsembleMismatch => MsStatus::EnsembleMismatch,
                Error::RepresentationMismatch => MsStatus::RepresentationMismatch,
                Error::InvalidDirection(_) => MsStatus::InvalidDirection,
                Error::InvalidOutcome { .. } => MsStatus::InvalidOutcome,
                Error::AssignmentLimitExceeded { .. } => MsStatus::AssignmentLimitExceeded,
                Error::InvalidScenario(_) => MsStatus::InvalidScenario,
                Error::InconsistentMarginals(_) => MsStatus::InconsistentMarginals,
                Error::Parse(_) => MsStatus::Parse,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Fail::Library(e) => e.to_string(),
            Fail::Null(name) => format!("null pointer passed as {name}"),
            Fail::Buffer { needed, given } => format!("buffer holds {given} values, {needed} needed"),
            Fail::Utf8(name) => format!("{name} is not valid UTF-8"),
        }
    }
}

fn set_last_error(message: String) {
    let text = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = text);
}

fn guard(body: impl FnOnce() -> Result<(), Fail>) -> MsStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => MsStatus::Ok,
        Ok(Err(fail)) => {
            set_last_error(fail.message());
            fail.status()
        }
        Err(_) => {
            set_last_error("internal panic".into());
            MsStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(ptr: *mut T, name: &'static str) -> Result<&'a mut T, Fail> {
    ptr.as_mut().ok_or(Fail::Null(name))
}

unsafe fn input<'a, T>(ptr: *const T, name: &'static str) -> Result<&'a T, Fail> {
    ptr.as_ref().ok_or(Fail::Null(name))
}

unsafe fn slice<'a, T>(ptr: *const T, len: usize, name: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if ptr.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(std::slice::from_raw_parts(ptr, len))
}

unsafe fn slice_mut<'a, T>(ptr: *mut T, len: usize, needed: usize, name: &'static str) -> Result<&'a mut [T], Fail> {
    if len < needed {
        return Err(Fail::Buffer { needed, given: len });
    }
    if ptr.is_null() {
        return Err(Fail::Null(name));
    }
    Ok(std::slice::from_raw_parts_mut(ptr, needed))
}

unsafe fn string<'a>(ptr: *const c_char, name: &'static str) -> Result<&'a str, Fail> {
    if ptr.is_null() {
        return Err(Fail::Null(name));
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| Fail::Utf8(name))
}

fn give_string(text: String, target: &mut *mut c_char) {
    *target = CString::new(text.replace('\0', " ")).unwrap_or_default().into_raw();
}

fn give_operator(op: impl Into<Operator>, target: &mut *mut MsOperator) {
    *target = Box::into_raw(Box::new(MsOperator { op: op.into() }));
}

fn half(twice: i32) -> HalfInt {
    HalfInt::from_twice(twice)
}

/// Message describing the most recent failure on this thread. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn ms_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
#[no_mangle]
pub unsafe extern "C" fn ms_string_free(text: *mut c_char) {
    if !text.is_null() {
        drop(CString::from_raw(text));
    }
}

/// Legendre polynomial `P_l(x)` for `x` in `[-1, 1]`.
#[no_mangle]
pub unsafe extern "C" fn ms_legendre(l: u32, x: f64, result: *mut f64) -> MsStatus {
    guard(|| {
        *out(result, "result")? = legendre(l, x)?;
        Ok(())
    })
}

/// Wigner small-d element `d^j_{m,m'}(beta)`.
#[no_mangle]
pub unsafe extern "C" fn ms_wigner_d_element(
    twice_j: i32,
    twice_m: i32,
    twice_m_prime: i32,
    beta: f64,
    result: *mut f64,
) -> MsStatus {
    guard(|| {
        *out(result, "result")? = wigner_d_element(half(twice_j), half(twice_m), half(twice_m_prime), beta)?;
        Ok(())
    })
}

/// Full `(2j+1) x (2j+1)` matrix, row-major, labels descending from `j`.
/// `capacity` is the number of doubles `matrix` can hold.
#[no_mangle]
pub unsafe extern "C" fn ms_wigner_d_matrix(twice_j: i32, beta: f64, matrix: *mut f64, capacity: usize) -> MsStatus {
    guard(|| {
        let d = wigner_d_matrix(half(twice_j), beta)?;
        let dim = d.nrows();
        let target = slice_mut(matrix, capacity, dim * dim, "matrix")?;
        for r in 0..dim {
            for c in 0..dim {
                target[r * dim + c] = d[(r, c)];
            }
        }
        Ok(())
    })
}

/// Creates an ensemble of `spin_count` particles of spin `twice_spin / 2`.
#[no_mangle]
pub unsafe extern "C" fn ms_ensemble_new(spin_count: u32, twice_spin: i32, ensemble: *mut *mut MsEnsemble) -> MsStatus {
    guard(|| {
        let target = out(ensemble, "ensemble")?;
        let spec = EnsembleSpec::new(spin_count, half(twice_spin))?;
        *target = Box::into_raw(Box::new(MsEnsemble { spec }));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ms_ensemble_free(ensemble: *mut MsEnsemble) {
    if !ensemble.is_null() {
        drop(Box::from_raw(ensemble));
    }
}

/// Caps the tensor-product dimension used by dense constructions.
#[no_mangle]
pub unsafe extern "C" fn ms_ensemble_set_dense_limit(ensemble: *mut MsEnsemble, limit: usize) -> MsStatus {
    guard(|| {
        let e = out(ensemble, "ensemble")?;
        e.spec = e.spec.clone().with_dense_limit(limit);
        Ok(())
    })
}

/// `(2s+1)^N` as a double (exact below 2^53).
#[no_mangle]
pub unsafe extern "C" fn ms_ensemble_dimension(ensemble: *const MsEnsemble, dimension: *mut f64) -> MsStatus {
    guard(|| {
        *out(dimension, "dimension")? = input(ensemble, "ensemble")?.spec.dimension_f64();
        Ok(())
    })
}

/// Number of copies of total spin `twice_j / 2`; `Domain` if it exceeds 2^64 - 1.
#[no_mangle]
pub unsafe extern "C" fn ms_ensemble_multiplicity(
    ensemble: *const MsEnsemble,
    twice_j: i32,
    multiplicity: *mut u64,
) -> MsStatus {
    guard(|| {
        let table = input(ensemble, "ensemble")?.spec.table();
        let value = table.multiplicity(half(twice_j));
        let target = out(multiplicity, "multiplicity")?;
        *target = u64::try_from(&value).map_err(|_| Error::Domain(format!("multiplicity {value} exceeds 64 bits")))?;
        Ok(())
    })
}

/// Block-diagonal projector onto magnetization `twice_m / 2` along z.
#[no_mangle]
pub unsafe extern "C" fn ms_block_projector(
    ensemble: *const MsEnsemble,
    twice_m: i32,
    operator: *mut *mut MsOperator,
) -> MsStatus {
    guard(|| {
        let target = out(operator, "operator")?;
        give_operator(block_projector(&input(ensemble, "ensemble")?.spec, half(twice_m))?, target);
        Ok(())
    })
}

/// Block-diagonal projector onto magnetization `twice_m / 2` along the
/// direction at angle `beta` from z in the XZ plane.
#[no_mangle]
pub unsafe extern "C" fn ms_rotated_block_projector(
    ensemble: *const MsEnsemble,
    twice_m: i32,
    beta: f64,
    operator: *mut *mut MsOperator,
) -> MsStatus {
    guard(|| {
        let target = out(operator, "operator")?;
        give_operator(rotated_block_projector(&input(ensemble, "ensemble")?.spec, half(twice_m), beta)?, target);
        Ok(())
    })
}

/// Dense tensor-product projector along `direction` (three doubles, unit
/// norm to 1e-12).
#[no_mangle]
pub unsafe extern "C" fn ms_dense_projector(
    ensemble: *const MsEnsemble,
    direction: *const f64,
    twice_m: i32,
    operator: *mut *mut MsOperator,
) -> MsStatus {
    guard(|| {
        let target = out(operator, "operator")?;
        let v = slice(direction, 3, "direction")?;
        let n = Direction::new([v[0], v[1], v[2]])?;
        give_operator(projector_tensor_sum(&input(ensemble, "ensemble")?.spec, &n, half(twice_m))?, target);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ms_operator_free(operator: *mut MsOperator) {
    if !operator.is_null() {
        drop(Box::from_raw(operator));
    }
}

/// `[a, b]`; both operands must share ensemble and representation.
#[no_mangle]
pub unsafe extern "C" fn ms_operator_commutator(
    a: *const MsOperator,
    b: *const MsOperator,
    result: *mut *mut MsOperator,
) -> MsStatus {
    guard(|| {
        let target = out(result, "result")?;
        let c = input(a, "a")?.op.commutator(&input(b, "b")?.op)?;
        give_operator(c, target);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ms_operator_frobenius_norm(operator: *const MsOperator, norm: *mut f64) -> MsStatus {
    guard(|| {
        *out(norm, "norm")? = input(operator, "operator")?.op.frobenius_norm();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn ms_operator_trace(operator: *const MsOperator, trace: *mut f64) -> MsStatus {
    guard(|| {
        *out(trace, "trace")? = input(operator, "operator")?.op.trace();
        Ok(())
    })
}

/// `Gamma^j_{k,k'}` for the commutator of `P_m` and the rotated `P_n`.
#[no_mangle]
pub unsafe extern "C" fn ms_gamma_element(
    twice_j: i32,
    twice_m: i32,
    twice_n: i32,
    twice_k: i32,
    twice_k_prime: i32,
    beta: f64,
    result: *mut f64,
) -> MsStatus {
    guard(|| {
        *out(result, "result")? =
            gamma_element(half(twice_j), half(twice_m), half(twice_n), half(twice_k), half(twice_k_prime), beta)?;
        Ok(())
    })
}

/// Searches `twice_j_values` for a witness of non-commutation. `found` is
/// set to 1 with `twice_j`, `twice_k` and `product` filled, or to 0.
#[no_mangle]
pub unsafe extern "C" fn ms_witness(
    twice_m: i32,
    twice_n: i32,
    beta: f64,
    twice_j_values: *const i32,
    count: usize,
    found: *mut i32,
    twice_j: *mut i32,
    twice_k: *mut i32,
    product: *mut f64,
) -> MsStatus {
    guard(|| {
        let js: Vec<HalfInt> = slice(twice_j_values, count, "twice_j_values")?.iter().map(|t| half(*t)).collect();
        let (found, twice_j, twice_k, product) =
            (out(found, "found")?, out(twice_j, "twice_j")?, out(twice_k, "twice_k")?, out(product, "product")?);
        match witness(half(twice_m), half(twice_n), beta, &js) {
            Some(w) => {
                *found = 1;
                *twice_j = w.j.twice();
                *twice_k = w.k.twice();
                *product = w.product;
            }
            None => *found = 0,
        }
        Ok(())
    })
}

/// `norms[i] = ||[P_m(z), P_{m'}(n(betas[i]))]||_F` via the block path.
#[no_mangle]
pub unsafe extern "C" fn ms_theorem_scan(
    ensemble: *const MsEnsemble,
    twice_m: i32,
    twice_m_prime: i32,
    betas: *const f64,
    count: usize,
    norms: *mut f64,
) -> MsStatus {
    guard(|| {
        let spec = &input(ensemble, "ensemble")?.spec;
        let grid = slice(betas, count, "betas")?;
        let samples = theorem_scan(spec, half(twice_m), half(twice_m_prime), grid)?;
        let target = slice_mut(norms, count, count, "norms")?;
        for (slot, (_, norm)) in target.iter_mut().zip(samples) {
            *slot = norm;
        }
        Ok(())
    })
}

/// Compatibility graph in DOT for `count` directions packed as `x, y, z`
/// triples (each normalized if within 1e-6 of unit norm).
#[no_mangle]
pub unsafe extern "C" fn ms_context_graph_dot(
    ensemble: *const MsEnsemble,
    directions: *const f64,
    count: usize,
    tolerance: f64,
    dot: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let target = out(dot, "dot")?;
        let coords = slice(directions, 3 * count, "directions")?;
        let dirs = coords
            .chunks_exact(3)
            .map(|v| Direction::normalized_within([v[0], v[1], v[2]], 1e-6))
            .collect::<Result<Vec<_>, _>>()?;
        let graph = compatibility_graph(&input(ensemble, "ensemble")?.spec, &dirs, tolerance)?;
        give_string(graph.to_dot(), target);
        Ok(())
    })
}

/// Joint-distribution feasibility for a scenario document; the result
/// (verdict, method and certificate) is returned as JSON.
#[no_mangle]
pub unsafe extern "C" fn ms_feasibility_json(
    scenario_json: *const c_char,
    tolerance: f64,
    result_json: *mut *mut c_char,
) -> MsStatus {
    guard(|| {
        let target = out(result_json, "result_json")?;
        *target = ptr::null_mut();
        let scenario = ContextScenario::from_json(string(scenario_json, "scenario_json")?)?;
        let result = joint_feasibility(&scenario, tolerance)?;
        give_string(serde_json::to_string(&result).expect("result serializes"), target);
        Ok(())
    })
}
