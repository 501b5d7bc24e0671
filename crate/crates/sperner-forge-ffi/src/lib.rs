//! C ABI over sperner-forge.
//!
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free`. Every fallible call returns an [`SfStatus`]; on failure
//! [`sf_last_error_message`] describes the error on the calling thread.

use sperner_forge::base2d::BaseInstance;
use sperner_forge::lift::{LiftedColoring, Mode};
use sperner_forge::numerics::{parse_rational, rat, Rational};
use sperner_forge::recover::recover;
use sperner_forge::rect2d::{GeneratorKind, RectInstance};
use sperner_forge::simplex::SimplexPoint;
use sperner_forge::Error;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Status code of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RootOrderExceeded = 3,
    NotASolution = 4,
    Internal = 5,
}

/// Rect instance generator.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfKind {
    TrivialSplit = 0,
    PlantedPath = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SfMode {
    Warmup = 0,
    Symmetric = 1,
}

/// A 2D rectangular Sperner instance with its query counter.
pub struct SfRect {
    inner: RectInstance,
}

/// A lifted colouring of Δ^k over a base instance.
pub struct SfLift {
    inner: LiftedColoring,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> SfStatus {
    match e {
        Error::RootOrderExceeded { .. } => SfStatus::RootOrderExceeded,
        Error::NotASolution(_) | Error::NoSolution(_) => SfStatus::NotASolution,
        Error::Io(_) => SfStatus::Internal,
        _ => SfStatus::InvalidArgument,
    }
}

/// Runs `f`, translating errors and panics into a status and the thread's
/// last-error message.
fn guard(f: impl FnOnce() -> Result<(), (SfStatus, String)>) -> SfStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            SfStatus::Ok
        }
        Ok(Err((s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            SfStatus::Internal
        }
    }
}

fn core(e: Error) -> (SfStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (SfStatus, String) {
    (SfStatus::NullPointer, format!("{what} is null"))
}

fn invalid(msg: impl Into<String>) -> (SfStatus, String) {
    (SfStatus::InvalidArgument, msg.into())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], (SfStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

/// Builds a rect instance of side `2^n`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn sf_rect_new(kind: SfKind, n: u32, seed: u64, out: *mut *mut SfRect) -> SfStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let inner = match kind {
            SfKind::TrivialSplit => RectInstance::trivial_split(n),
            SfKind::PlantedPath => RectInstance::generate(GeneratorKind::PlantedPath, n, seed),
        }
        .map_err(core)?;
        *out = Box::into_raw(Box::new(SfRect { inner }));
        Ok(())
    })
}

/// Releases a rect handle; null is ignored.
///
/// # Safety
/// `rect` must come from [`sf_rect_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_rect_free(rect: *mut SfRect) {
    if !rect.is_null() {
        drop(Box::from_raw(rect));
    }
}

/// Colour of grid node `(x, y)`, `0 ≤ x, y ≤ 2^n`. Counts one query.
///
/// # Safety
/// `rect` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sf_rect_color(rect: *const SfRect, x: u64, y: u64, out: *mut u8) -> SfStatus {
    guard(|| {
        let r = rect.as_ref().ok_or_else(|| null("rect"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let max = r.inner.max_coord();
        if x > max || y > max {
            return Err(invalid(format!("node ({x}, {y}) outside 0..={max}")));
        }
        *out = r.inner.color(x, y);
        Ok(())
    })
}

/// Brute-force search for a trichromatic cell; writes its lower-left node.
///
/// # Safety
/// `rect` must be a live handle; `x` and `y` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn sf_rect_solve(rect: *const SfRect, x: *mut u64, y: *mut u64) -> SfStatus {
    guard(|| {
        let r = rect.as_ref().ok_or_else(|| null("rect"))?;
        if x.is_null() || y.is_null() {
            return Err(null("output"));
        }
        let s = r.inner.solve_bruteforce().map_err(core)?;
        *x = s.x;
        *y = s.y;
        Ok(())
    })
}

/// Number of colour queries made through this handle so far.
///
/// # Safety
/// `rect` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sf_rect_query_count(rect: *const SfRect, out: *mut u64) -> SfStatus {
    guard(|| {
        let r = rect.as_ref().ok_or_else(|| null("rect"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = r.inner.queries();
        Ok(())
    })
}

/// Lifts a rect instance to a colouring of Δ^k (`k ≥ 2`). The rect handle
/// is copied and stays owned by the caller.
///
/// # Safety
/// `rect` must be a live handle and `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sf_lift_new(rect: *const SfRect, mode: SfMode, k: usize, out: *mut *mut SfLift) -> SfStatus {
    guard(|| {
        let r = rect.as_ref().ok_or_else(|| null("rect"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let mode = match mode {
            SfMode::Warmup => Mode::Warmup,
            SfMode::Symmetric => Mode::Symmetric,
        };
        let base = BaseInstance::new(r.inner.clone()).map_err(core)?;
        let inner = LiftedColoring::new(mode, k, base).map_err(core)?;
        *out = Box::into_raw(Box::new(SfLift { inner }));
        Ok(())
    })
}

/// Releases a lift handle; null is ignored.
///
/// # Safety
/// `lift` must come from [`sf_lift_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sf_lift_free(lift: *mut SfLift) {
    if !lift.is_null() {
        drop(Box::from_raw(lift));
    }
}

fn point_from_ints(nums: &[i64], den: i64) -> Result<SimplexPoint, (SfStatus, String)> {
    if den <= 0 {
        return Err(invalid("denominator must be positive"));
    }
    SimplexPoint::new(nums.iter().map(|&p| rat(p, den)).collect()).map_err(core)
}

/// Colour (1-based) of the point `numerators[i] / denominator`, `len = k + 1`.
///
/// # Safety
/// `lift` must be a live handle, `numerators` readable for `len` values and
/// `out` valid for one write.
#[no_mangle]
pub unsafe extern "C" fn sf_lift_eval(
    lift: *const SfLift,
    numerators: *const i64,
    len: usize,
    denominator: i64,
    out: *mut u32,
) -> SfStatus {
    guard(|| {
        let l = lift.as_ref().ok_or_else(|| null("lift"))?;
        let nums = slice(numerators, len, "numerators")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let x = point_from_ints(nums, denominator)?;
        *out = l.inner.eval(&x).map_err(core)?;
        Ok(())
    })
}

/// Recovers a rect solution from three points of Δ^k carrying three distinct
/// colours. `coords` holds `3·(k+1)` NUL-terminated `"p/q"` strings, point
/// by point. On success writes the rect cell; a triple that does not verify
/// yields [`SfStatus::NotASolution`].
///
/// # Safety
/// `lift` must be a live handle, `coords` readable for `len` valid C strings
/// and `cell_x`, `cell_y` valid for one write each.
#[no_mangle]
pub unsafe extern "C" fn sf_recover(
    lift: *const SfLift,
    coords: *const *const c_char,
    len: usize,
    cell_x: *mut u64,
    cell_y: *mut u64,
) -> SfStatus {
    guard(|| {
        let l = lift.as_ref().ok_or_else(|| null("lift"))?;
        let strs = slice(coords, len, "coords")?;
        if cell_x.is_null() || cell_y.is_null() {
            return Err(null("output"));
        }
        let k = l.inner.k();
        if len != 3 * (k + 1) {
            return Err(invalid(format!("expected {} coordinates, got {len}", 3 * (k + 1))));
        }
        let mut vals: Vec<Rational> = Vec::with_capacity(len);
        for &s in strs {
            if s.is_null() {
                return Err(null("coordinate string"));
            }
            let text = CStr::from_ptr(s).to_str().map_err(|_| invalid("coordinate is not UTF-8"))?;
            vals.push(parse_rational(text).map_err(core)?);
        }
        let pts: Vec<SimplexPoint> =
            vals.chunks(k + 1).map(|c| SimplexPoint::new(c.to_vec())).collect::<Result<_, _>>().map_err(core)?;
        let triple: [SimplexPoint; 3] = pts.try_into().expect("three chunks");
        let out = recover(&l.inner, &triple).map_err(core)?;
        let cell = out
            .rect_cell
            .ok_or_else(|| (SfStatus::NotASolution, "recovered triple maps to no trichromatic rect cell".to_owned()))?;
        *cell_x = cell.x;
        *cell_y = cell.y;
        Ok(())
    })
}

/// Message of the last failed call on this thread (empty after a success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn sf_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn sf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
