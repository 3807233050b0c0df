//! C ABI over `knotvol`.
//!
//! Every fallible call returns a [`KvStatus`]; on failure the message is
//! available from [`kv_last_error_message`] on the same thread. Results that
//! carry structure come back as opaque handles, released with the matching
//! `*_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use knotvol::asymfit::{collect_series, fit_growth, FitModel, FitResult, GrowthSeries};
use knotvol::invariant::{
    kashaev_invariant_with, EvalConfig, EvalMode, GrowthPoint, InvariantValue,
};
use knotvol::qdilog::{faddeev_s, li2, lobachevsky, QdParams};
use knotvol::saddle::{hyperbolic_volume, VolumeResult};
use knotvol::{Error, KnotId};
use num_complex::Complex64;

pub const KV_KNOT_4_1: i32 = 0;
pub const KV_KNOT_5_2: i32 = 1;
pub const KV_KNOT_6_1: i32 = 2;

pub const KV_MODE_DIRECT: i32 = 0;
pub const KV_MODE_LOGSCALE: i32 = 1;
pub const KV_MODE_EXACT: i32 = 2;

pub const KV_MODEL_LINEAR: i32 = 0;
pub const KV_MODEL_LINEAR_PLUS_LOG: i32 = 1;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KvStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidOrder = 3,
    ExactBudget = 4,
    DirectOverflow = 5,
    Singular = 6,
    Pole = 7,
    NonConvergence = 8,
    Degenerate = 9,
    Selection = 10,
    RankDeficient = 11,
    InvalidSeries = 12,
    NotRepresentable = 13,
    OutOfRange = 14,
    Panic = 15,
}

/// ⟨L⟩ at one order.
pub struct KvInvariant {
    inner: InvariantValue,
}

/// Geometric stationary point and hyperbolic volume.
pub struct KvVolume {
    inner: VolumeResult,
}

/// Growth-rate fit.
pub struct KvFit {
    inner: FitResult,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> KvStatus {
    match e {
        Error::InvalidOrder(_) => KvStatus::InvalidOrder,
        Error::ExactBudget { .. } => KvStatus::ExactBudget,
        Error::DirectOverflow { .. } => KvStatus::DirectOverflow,
        Error::InvalidArgument(_) | Error::Io(_) | Error::Parse(_) => KvStatus::InvalidArgument,
        Error::Singular(_) => KvStatus::Singular,
        Error::Pole { .. } => KvStatus::Pole,
        Error::NonConvergence(_) => KvStatus::NonConvergence,
        Error::Degenerate(_) => KvStatus::Degenerate,
        Error::Selection { .. } => KvStatus::Selection,
        Error::RankDeficient(_) => KvStatus::RankDeficient,
        Error::InvalidSeries(_) => KvStatus::InvalidSeries,
    }
}

fn fail(status: KvStatus, msg: impl AsRef<str>) -> KvStatus {
    set_error(msg.as_ref());
    status
}

/// Runs `f`, turning errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), KvStatus>) -> KvStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            KvStatus::Ok
        }
        Ok(Err(s)) => s,
        Err(_) => fail(KvStatus::Panic, "internal panic"),
    }
}

fn lift(e: Error) -> KvStatus {
    fail(status_of(&e), e.to_string())
}

fn knot_of(code: i32) -> Result<KnotId, KvStatus> {
    match code {
        KV_KNOT_4_1 => Ok(KnotId::FourOne),
        KV_KNOT_5_2 => Ok(KnotId::FiveTwo),
        KV_KNOT_6_1 => Ok(KnotId::SixOne),
        _ => Err(fail(
            KvStatus::InvalidArgument,
            format!("unknown knot code {code}"),
        )),
    }
}

fn mode_of(code: i32) -> Result<EvalMode, KvStatus> {
    match code {
        KV_MODE_DIRECT => Ok(EvalMode::Direct),
        KV_MODE_LOGSCALE => Ok(EvalMode::Logscale),
        KV_MODE_EXACT => Ok(EvalMode::Exact),
        _ => Err(fail(
            KvStatus::InvalidArgument,
            format!("unknown mode code {code}"),
        )),
    }
}

fn model_of(code: i32) -> Result<FitModel, KvStatus> {
    match code {
        KV_MODEL_LINEAR => Ok(FitModel::Linear),
        KV_MODEL_LINEAR_PLUS_LOG => Ok(FitModel::LinearPlusLog),
        _ => Err(fail(
            KvStatus::InvalidArgument,
            format!("unknown model code {code}"),
        )),
    }
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, KvStatus> {
    p.as_mut()
        .ok_or_else(|| fail(KvStatus::NullPointer, "null output pointer"))
}

unsafe fn handle_ref<'a, T>(p: *const T) -> Result<&'a T, KvStatus> {
    p.as_ref()
        .ok_or_else(|| fail(KvStatus::NullPointer, "null handle"))
}

/// Message for the last failed call on this thread; empty after a success.
/// Valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn kv_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Static name of a status code.
#[no_mangle]
pub extern "C" fn kv_status_name(status: KvStatus) -> *const c_char {
    let s: &'static CStr = match status {
        KvStatus::Ok => c"ok",
        KvStatus::NullPointer => c"null pointer",
        KvStatus::InvalidArgument => c"invalid argument",
        KvStatus::InvalidOrder => c"invalid order",
        KvStatus::ExactBudget => c"exact budget exceeded",
        KvStatus::DirectOverflow => c"direct overflow",
        KvStatus::Singular => c"singular",
        KvStatus::Pole => c"pole",
        KvStatus::NonConvergence => c"no convergence",
        KvStatus::Degenerate => c"degenerate",
        KvStatus::Selection => c"selection failed",
        KvStatus::RankDeficient => c"rank deficient",
        KvStatus::InvalidSeries => c"invalid series",
        KvStatus::NotRepresentable => c"not representable",
        KvStatus::OutOfRange => c"out of range",
        KvStatus::Panic => c"panic",
    };
    s.as_ptr()
}

/// Evaluates ⟨knot⟩ at order `n`. `threads` of 0 or 1 runs on the caller.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_invariant_new(
    knot: i32,
    n: u64,
    mode: i32,
    threads: u32,
    out: *mut *mut KvInvariant,
) -> KvStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let config = EvalConfig::new(mode_of(mode)?).with_threads(threads as usize);
        let inner = kashaev_invariant_with(knot_of(knot)?, n, &config).map_err(lift)?;
        *out = Box::into_raw(Box::new(KvInvariant { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`kv_invariant_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kv_invariant_free(h: *mut KvInvariant) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// ln|⟨L⟩| and arg ⟨L⟩; always available.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_invariant_log_polar(
    h: *const KvInvariant,
    log_abs: *mut f64,
    arg: *mut f64,
) -> KvStatus {
    guard(|| {
        let v = &handle_ref(h)?.inner;
        *out_ref(log_abs)? = v.value.log_mag();
        *out_ref(arg)? = v.value.arg();
        Ok(())
    })
}

/// ⟨L⟩ as a complex double; `NotRepresentable` when it overflows.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_invariant_value(
    h: *const KvInvariant,
    re: *mut f64,
    im: *mut f64,
) -> KvStatus {
    guard(|| {
        let v = &handle_ref(h)?.inner;
        let c = v
            .plain()
            .ok_or_else(|| fail(KvStatus::NotRepresentable, "value exceeds the double range"))?;
        *out_ref(re)? = c.re;
        *out_ref(im)? = c.im;
        Ok(())
    })
}

/// 2π·ln|⟨L⟩|/N, number of summed terms, and the accumulation error estimate.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_invariant_stats(
    h: *const KvInvariant,
    volume_ratio: *mut f64,
    term_count: *mut u64,
    accum_error: *mut f64,
) -> KvStatus {
    guard(|| {
        let v = &handle_ref(h)?.inner;
        *out_ref(volume_ratio)? = v.volume_ratio();
        *out_ref(term_count)? = v.term_count;
        *out_ref(accum_error)? = v.accum_error_estimate;
        Ok(())
    })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_volume_new(knot: i32, out: *mut *mut KvVolume) -> KvStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let inner = hyperbolic_volume(knot_of(knot)?).map_err(lift)?;
        *out = Box::into_raw(Box::new(KvVolume { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from [`kv_volume_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kv_volume_free(h: *mut KvVolume) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Volume, residual of the stationary equations, and number of coordinates.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_volume_summary(
    h: *const KvVolume,
    volume: *mut f64,
    residual: *mut f64,
    dimension: *mut usize,
) -> KvStatus {
    guard(|| {
        let v = &handle_ref(h)?.inner;
        *out_ref(volume)? = v.volume;
        *out_ref(residual)? = v.solution.residual;
        *out_ref(dimension)? = v.solution.point.len();
        Ok(())
    })
}

/// Coordinate `index` (z, u, v order) of the stationary point.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_volume_coordinate(
    h: *const KvVolume,
    index: usize,
    re: *mut f64,
    im: *mut f64,
) -> KvStatus {
    guard(|| {
        let v = &handle_ref(h)?.inner;
        let c = v.solution.point.get(index).ok_or_else(|| {
            fail(
                KvStatus::OutOfRange,
                format!("coordinate {index} does not exist"),
            )
        })?;
        *out_ref(re)? = c.re;
        *out_ref(im)? = c.im;
        Ok(())
    })
}

/// Fits the growth of |⟨L⟩| over N = n_min, n_min + step, … ≤ n_max.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_fit_new_range(
    knot: i32,
    n_min: u64,
    n_max: u64,
    step: u64,
    model: i32,
    out: *mut *mut KvFit,
) -> KvStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        let model = model_of(model)?;
        let series = collect_series(knot_of(knot)?, n_min, n_max, step).map_err(lift)?;
        let inner = fit_growth(&series, model).map_err(lift)?;
        *out = Box::into_raw(Box::new(KvFit { inner }));
        Ok(())
    })
}

/// Fits caller-supplied (N, ln|⟨L⟩|) pairs.
///
/// # Safety
/// `ns` and `log_abs` must each point to `len` readable values; `out` must
/// be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_fit_new_points(
    knot: i32,
    ns: *const u64,
    log_abs: *const f64,
    len: usize,
    model: i32,
    out: *mut *mut KvFit,
) -> KvStatus {
    guard(|| {
        let out = out_ref(out)?;
        *out = ptr::null_mut();
        if len > 0 && (ns.is_null() || log_abs.is_null()) {
            return Err(fail(KvStatus::NullPointer, "null input array"));
        }
        let model = model_of(model)?;
        let points = if len == 0 {
            Vec::new()
        } else {
            let ns = std::slice::from_raw_parts(ns, len);
            let ys = std::slice::from_raw_parts(log_abs, len);
            ns.iter()
                .zip(ys)
                .map(|(&n, &y)| GrowthPoint { n, log_abs: y })
                .collect()
        };
        let series = GrowthSeries::new(knot_of(knot)?, points).map_err(lift)?;
        let inner = fit_growth(&series, model).map_err(lift)?;
        *out = Box::into_raw(Box::new(KvFit { inner }));
        Ok(())
    })
}

/// # Safety
/// `h` must come from a `kv_fit_new_*` call and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn kv_fit_free(h: *mut KvFit) {
    if !h.is_null() {
        drop(Box::from_raw(h));
    }
}

/// Coefficients of ln|⟨L⟩| ≈ a·N + b·ln N + c (b = 0 for the linear model).
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_fit_coefficients(
    h: *const KvFit,
    a: *mut f64,
    b: *mut f64,
    c: *mut f64,
) -> KvStatus {
    guard(|| {
        let f = &handle_ref(h)?.inner;
        *out_ref(a)? = f.a;
        *out_ref(b)? = f.b;
        *out_ref(c)? = f.c;
        Ok(())
    })
}

/// 2π·a and the rms residual of the fit.
///
/// # Safety
/// `h` must be a live handle; outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_fit_summary(
    h: *const KvFit,
    volume_estimate: *mut f64,
    rms_residual: *mut f64,
) -> KvStatus {
    guard(|| {
        let f = &handle_ref(h)?.inner;
        *out_ref(volume_estimate)? = f.volume_estimate;
        *out_ref(rms_residual)? = f.rms_residual;
        Ok(())
    })
}

/// Li₂(re + i·im) on the principal branch.
///
/// # Safety
/// Outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_li2(re: f64, im: f64, out_re: *mut f64, out_im: *mut f64) -> KvStatus {
    guard(|| {
        let v = li2(Complex64::new(re, im));
        *out_ref(out_re)? = v.re;
        *out_ref(out_im)? = v.im;
        Ok(())
    })
}

/// Lobachevsky's function Λ(θ).
#[no_mangle]
pub extern "C" fn kv_lobachevsky(theta: f64) -> f64 {
    lobachevsky(theta)
}

/// Faddeev's S_γ(re + i·im) with the default quadrature.
///
/// # Safety
/// Outputs must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn kv_faddeev_s(
    gamma: f64,
    re: f64,
    im: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> KvStatus {
    guard(|| {
        let q = QdParams::new(gamma).map_err(lift)?;
        let v = faddeev_s(&q, Complex64::new(re, im)).map_err(lift)?;
        *out_ref(out_re)? = v.re;
        *out_ref(out_im)? = v.im;
        Ok(())
    })
}
