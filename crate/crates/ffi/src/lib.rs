//! C ABI for profin-core. Every fallible call returns a [`PfStatus`]; on
//! failure [`pf_last_error_message`] describes the error on the calling
//! thread. Handles are opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use profin_core::congruence::{fingerprint, Side};
use profin_core::localtree::{
    build_ball, max_tree_precision, witness_hyperbolic, DivisionRing, LatticeClass, SplitRing,
    TreeBall, TreeContext,
};
use profin_core::quatalg::{choose_algebra, maximal_order, QuaternionAlgebra, QuaternionOrder};
use profin_core::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PrecisionExhausted = 3,
    BudgetExceeded = 4,
    CheckFailed = 5,
    Internal = 6,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfTreeMode {
    Division = 0,
    Split = 1,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PfSide {
    Delta = 0,
    Gamma = 1,
}

/// Quaternion algebra ramified at {inf, p} with its maximal order.
pub struct PfAlgebra {
    alg: QuaternionAlgebra,
    order: QuaternionOrder,
}

/// Ball in the lattice tree around the standard vertex.
pub struct PfTreeBall {
    ball: TreeBall,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PfStatus {
    match e {
        Error::PrecisionExhausted(_) => PfStatus::PrecisionExhausted,
        Error::BudgetExceeded { .. } => PfStatus::BudgetExceeded,
        Error::TreeInvariant(_)
        | Error::WitnessNotHyperbolic(_)
        | Error::ReciprocityViolation { .. }
        | Error::DeterminantNotOne { .. } => PfStatus::CheckFailed,
        _ => PfStatus::InvalidArgument,
    }
}

/// Runs `f`, mapping errors and panics to status codes.
fn guard<F: FnOnce() -> Result<(), (PfStatus, String)>>(f: F) -> PfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            PfStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("panic inside profin".into());
            PfStatus::Internal
        }
    }
}

fn lift<T>(r: profin_core::Result<T>) -> Result<T, (PfStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null() -> (PfStatus, String) {
    (PfStatus::NullPointer, "null pointer argument".into())
}

fn out_string(s: String, out: *mut *mut c_char) -> Result<(), (PfStatus, String)> {
    let c = CString::new(s).map_err(|_| (PfStatus::Internal, "interior nul".to_string()))?;
    // SAFETY: caller checked `out` is non-null.
    unsafe { *out = c.into_raw() };
    Ok(())
}

/// Message for the last failed call on this thread, or NULL. The pointer
/// stays valid until the next profin call on the same thread.
#[no_mangle]
pub extern "C" fn pf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must come from a profin function returning `char *`, freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: `s` was produced by `CString::into_raw`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// # Safety
/// `out` must be a valid pointer to writable storage.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_new(p: u64, out: *mut *mut PfAlgebra) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let alg = lift(choose_algebra(p))?;
        let order = lift(maximal_order(&alg))?;
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(PfAlgebra { alg, order })) };
        Ok(())
    })
}

/// # Safety
/// `alg` must be NULL or a handle from `pf_algebra_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_free(alg: *mut PfAlgebra) {
    if !alg.is_null() {
        // SAFETY: handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(alg) });
    }
}

/// Writes the structure constants `a = a_num/a_den`, `b = b_num/b_den`.
///
/// # Safety
/// `alg` must be a live handle; `out` must point to four writable `int64_t`.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_constants(alg: *const PfAlgebra, out: *mut i64) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let alg = unsafe { alg.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let parts = [alg.alg.a().numer(), alg.alg.a().denom(), alg.alg.b().numer(), alg.alg.b().denom()];
        for (i, x) in parts.into_iter().enumerate() {
            let v = i64::try_from(x).map_err(|_| (PfStatus::Internal, "constant overflows int64".to_string()))?;
            // SAFETY: caller provides four slots.
            unsafe { *out.add(i) = v };
        }
        Ok(())
    })
}

/// # Safety
/// `alg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_algebra_discriminant(alg: *const PfAlgebra, out: *mut u64) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let alg = unsafe { alg.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        // SAFETY: checked non-null above.
        unsafe { *out = alg.order.discriminant() };
        Ok(())
    })
}

/// Builds the ball of `radius` around the standard vertex. `precision` 0
/// selects the largest supported value.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_new(
    p: u64,
    mode: PfTreeMode,
    radius: u32,
    precision: u32,
    budget: usize,
    out: *mut *mut PfTreeBall,
) -> PfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null());
        }
        let precision = if precision == 0 { max_tree_precision(p) } else { precision };
        let center = LatticeClass::standard();
        let ball = match mode {
            PfTreeMode::Split => {
                let ctx = TreeContext::new(lift(SplitRing::new(p, precision))?);
                lift(build_ball(&ctx, &center, radius, budget))?
            }
            PfTreeMode::Division => {
                let alg = lift(choose_algebra(p))?;
                let ctx = TreeContext::new(lift(DivisionRing::new(&alg, precision))?);
                lift(build_ball(&ctx, &center, radius, budget))?
            }
        };
        // SAFETY: checked non-null above.
        unsafe { *out = Box::into_raw(Box::new(PfTreeBall { ball })) };
        Ok(())
    })
}

/// # Safety
/// `ball` must be NULL or a handle from `pf_tree_ball_new`, freed once.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_free(ball: *mut PfTreeBall) {
    if !ball.is_null() {
        // SAFETY: handle came from `Box::into_raw`.
        drop(unsafe { Box::from_raw(ball) });
    }
}

/// # Safety
/// `ball` must be a live handle; outputs writable.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_counts(
    ball: *const PfTreeBall,
    vertices: *mut usize,
    edges: *mut usize,
    degree: *mut usize,
) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let b = unsafe { ball.as_ref() }.ok_or_else(null)?;
        if vertices.is_null() || edges.is_null() || degree.is_null() {
            return Err(null());
        }
        // SAFETY: checked non-null above.
        unsafe {
            *vertices = b.ball.len();
            *edges = b.ball.edges.len();
            *degree = b.ball.degree;
        }
        Ok(())
    })
}

/// Size of sphere `k` (0 for `k` beyond the radius).
///
/// # Safety
/// `ball` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_sphere_size(ball: *const PfTreeBall, k: u32, out: *mut usize) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let b = unsafe { ball.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        // SAFETY: checked non-null above.
        unsafe { *out = b.ball.sphere_sizes.get(k as usize).copied().unwrap_or(0) };
        Ok(())
    })
}

/// JSON export; free the result with `pf_string_free`.
///
/// # Safety
/// `ball` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_json(ball: *const PfTreeBall, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let b = unsafe { ball.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        out_string(b.ball.to_json().to_string(), out)
    })
}

/// DOT export; free the result with `pf_string_free`.
///
/// # Safety
/// `ball` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_tree_ball_dot(ball: *const PfTreeBall, out: *mut *mut c_char) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let b = unsafe { ball.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        out_string(b.ball.to_dot(), out)
    })
}

/// Translation length of the hyperbolic generator over the radius-3 ball.
///
/// # Safety
/// `alg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_witness(alg: *const PfAlgebra, budget: usize, out: *mut u32) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let a = unsafe { alg.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let precision = max_tree_precision(a.alg.p()).min(16);
        let (_, report) = lift(witness_hyperbolic(&a.alg, &a.order, precision, budget))?;
        // SAFETY: checked non-null above.
        unsafe { *out = report.translation_length };
        Ok(())
    })
}

/// Certified order of the level-`level` image, as a decimal string.
///
/// # Safety
/// `alg` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn pf_fingerprint_order(
    alg: *const PfAlgebra,
    side: PfSide,
    level: u64,
    seed: u64,
    out: *mut *mut c_char,
) -> PfStatus {
    guard(|| {
        // SAFETY: null-checked; caller guarantees validity.
        let a = unsafe { alg.as_ref() }.ok_or_else(null)?;
        if out.is_null() {
            return Err(null());
        }
        let side = match side {
            PfSide::Delta => Side::Delta,
            PfSide::Gamma => Side::Gamma,
        };
        let f = lift(fingerprint(side, level, &a.alg, &a.order, seed))?;
        out_string(f.order.to_string(), out)
    })
}
