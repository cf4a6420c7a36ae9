// Copyright 2026 The ERT Authors
// SPDX-License-Identifier: Apache-2.0

//! C ABI over `ert-core`.
//!
//! Every fallible function returns an [`ErtStatus`]; on failure a message is
//! stored for the calling thread and can be read with [`ert_last_error`].
//! Handles are opaque and owned by the caller, who releases them with the
//! matching `*_free` function. Panics never cross the boundary: they are
//! reported as [`ErtStatus::Panic`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ert_core::analysis::{integrated_error, TimeSeries};
use ert_core::cli::{parse_config, simulate, RunConfig};
use ert_core::ert::{evolve, ErtConfig};
use ert_core::models::ModelSpec;
use ert_core::reference::{exact_evolve, wmc_evolve, WmcConfig};
use ert_core::Error;

/// Result codes. Values 2 to 4 match the exit codes of the `ert` binary.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErtStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// Invalid configuration, argument or precondition.
    InvalidArgument = 2,
    /// The run would exceed its memory cap.
    ResourceCap = 3,
    /// Numerical failure: non-finite values or a failed decomposition.
    Numerical = 4,
    /// A caller buffer is shorter than the data to copy.
    BufferTooSmall = 5,
    /// Internal panic; the message holds the payload when it is a string.
    Panic = 6,
}

/// A model plus the run configuration it was parsed from.
pub struct ErtModel {
    spec: ModelSpec,
    config: RunConfig,
}

/// Sampled observable trajectories.
pub struct ErtSeries {
    series: TimeSeries,
    names: Vec<CString>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> ErtStatus {
    match e.exit_code() {
        3 => ErtStatus::ResourceCap,
        4 => ErtStatus::Numerical,
        _ => ErtStatus::InvalidArgument,
    }
}

fn fail(status: ErtStatus, message: impl Into<String>) -> ErtStatus {
    set_error(message.into());
    status
}

/// Runs `f`, converting errors and panics into a status.
fn guard(f: impl FnOnce() -> Result<(), ErtStatus>) -> ErtStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ErtStatus::Ok,
        Ok(Err(status)) => status,
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            fail(ErtStatus::Panic, msg)
        }
    }
}

fn lift<T>(r: ert_core::Result<T>) -> Result<T, ErtStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<'a, T>(p: *const T, what: &str) -> Result<&'a T, ErtStatus> {
    // SAFETY: callers pass either null or a pointer obtained from this
    // library that has not been freed.
    unsafe { p.as_ref() }.ok_or_else(|| fail(ErtStatus::NullPointer, format!("{what} is null")))
}

fn check_out<T>(out: *mut T, what: &str) -> Result<(), ErtStatus> {
    if out.is_null() {
        Err(fail(ErtStatus::NullPointer, format!("{what} is null")))
    } else {
        Ok(())
    }
}

fn publish_series(series: TimeSeries, out: *mut *mut ErtSeries) {
    let names = series
        .names
        .iter()
        .map(|n| CString::new(n.as_str()).unwrap_or_default())
        .collect();
    let handle = Box::new(ErtSeries { series, names });
    // SAFETY: `out` was checked non-null by the caller of this helper.
    unsafe { *out = Box::into_raw(handle) };
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn ert_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr().cast()
}

/// Message describing the last failure on this thread, or null when the
/// last call succeeded. Valid until the next library call on this thread.
#[no_mangle]
pub extern "C" fn ert_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a TOML run configuration (the format read by `ert run`) and
/// builds its model. The `[solver]` table and `t_final` are optional here;
/// they are only needed by [`ert_model_run`].
///
/// # Safety
/// `toml` must be null or a valid NUL-terminated string; `out` must be null
/// or valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ert_model_from_toml(toml: *const c_char, out: *mut *mut ErtModel) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        non_null(toml, "toml")?;
        let text = unsafe { CStr::from_ptr(toml) }
            .to_str()
            .map_err(|_| fail(ErtStatus::InvalidArgument, "toml is not valid UTF-8"))?;
        let config = lift(parse_config(text))?;
        let spec = lift(config.model.build(config.memory_cap()))?;
        unsafe { *out = Box::into_raw(Box::new(ErtModel { spec, config })) };
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from [`ert_model_from_toml`] that has
/// not been freed.
#[no_mangle]
pub unsafe extern "C" fn ert_model_free(model: *mut ErtModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Hilbert-space dimension of the model.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_model_dim(model: *const ErtModel, out: *mut usize) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = non_null(model, "model")?;
        unsafe { *out = m.spec.dim() };
        Ok(())
    })
}

/// Runs the solver named in the model's configuration.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_model_run(model: *const ErtModel, out: *mut *mut ErtSeries) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = non_null(model, "model")?;
        let series = lift(simulate(&m.config, &m.spec))?;
        publish_series(series, out);
        Ok(())
    })
}

/// Exact density-matrix evolution.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_solve_exact(
    model: *const ErtModel,
    dt: f64,
    t_final: f64,
    sample_every: usize,
    out: *mut *mut ErtSeries,
) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = non_null(model, "model")?;
        let series = lift(exact_evolve(&m.spec, dt, t_final, sample_every, m.config.memory_cap()))?;
        publish_series(series, out);
        Ok(())
    })
}

/// Rank-truncated ensemble evolution with trace renormalization.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_solve_ert(
    model: *const ErtModel,
    rank: usize,
    dt: f64,
    t_final: f64,
    sample_every: usize,
    out: *mut *mut ErtSeries,
) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = non_null(model, "model")?;
        let cfg = ErtConfig {
            memory_cap: m.config.memory_cap(),
            ..ErtConfig::new(rank, dt)
        };
        let series = lift(evolve(&m.spec, &cfg, t_final, sample_every))?;
        publish_series(series, out);
        Ok(())
    })
}

/// Quantum-jump Monte-Carlo average over `n_traj` trajectories.
///
/// # Safety
/// `model` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_solve_wmc(
    model: *const ErtModel,
    n_traj: usize,
    seed: u64,
    dt: f64,
    t_final: f64,
    sample_every: usize,
    out: *mut *mut ErtSeries,
) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let m = non_null(model, "model")?;
        let cfg = WmcConfig {
            memory_cap: m.config.memory_cap(),
            ..WmcConfig::new(n_traj, seed, dt)
        };
        let series = lift(wmc_evolve(&m.spec, &cfg, t_final, sample_every))?;
        publish_series(series, out);
        Ok(())
    })
}

/// Releases a series. Null is ignored.
///
/// # Safety
/// `series` must be null or a live handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn ert_series_free(series: *mut ErtSeries) {
    if !series.is_null() {
        drop(unsafe { Box::from_raw(series) });
    }
}

/// Number of samples.
///
/// # Safety
/// `series` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_series_len(series: *const ErtSeries, out: *mut usize) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = non_null(series, "series")?;
        unsafe { *out = s.series.len() };
        Ok(())
    })
}

/// Number of observable channels.
///
/// # Safety
/// `series` must be a live handle or null; `out` must be null or valid for
/// writes.
#[no_mangle]
pub unsafe extern "C" fn ert_series_channel_count(series: *const ErtSeries, out: *mut usize) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let s = non_null(series, "series")?;
        unsafe { *out = s.names.len() };
        Ok(())
    })
}

/// Name of channel `index`, or null when out of range. The string lives as
/// long as the series.
///
/// # Safety
/// `series` must be a live handle or null.
#[no_mangle]
pub unsafe extern "C" fn ert_series_channel_name(series: *const ErtSeries, index: usize) -> *const c_char {
    match unsafe { series.as_ref() }.and_then(|s| s.names.get(index)) {
        Some(name) => name.as_ptr(),
        None => ptr::null(),
    }
}

fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> Result<(), ErtStatus> {
    check_out(buf, "buffer")?;
    if len < src.len() {
        return Err(fail(
            ErtStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        ));
    }
    // SAFETY: `buf` is non-null and the caller guarantees room for `len`
    // values, which is at least `src.len()`.
    unsafe { ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len()) };
    Ok(())
}

/// Copies the sample times into `buf`, which must hold at least
/// [`ert_series_len`] values.
///
/// # Safety
/// `series` must be a live handle or null; `buf` must be null or valid for
/// `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ert_series_times(series: *const ErtSeries, buf: *mut f64, len: usize) -> ErtStatus {
    guard(|| {
        let s = non_null(series, "series")?;
        copy_out(&s.series.times, buf, len)
    })
}

/// Copies channel `index` into `buf`.
///
/// # Safety
/// `series` must be a live handle or null; `buf` must be null or valid for
/// `len` writes.
#[no_mangle]
pub unsafe extern "C" fn ert_series_channel(
    series: *const ErtSeries,
    index: usize,
    buf: *mut f64,
    len: usize,
) -> ErtStatus {
    guard(|| {
        let s = non_null(series, "series")?;
        let channel = s.series.channels.get(index).ok_or_else(|| {
            fail(
                ErtStatus::InvalidArgument,
                format!("channel {index} out of range ({} channels)", s.names.len()),
            )
        })?;
        copy_out(channel, buf, len)
    })
}

/// Integrated error of `approx` against `exact`, channels matched by name.
///
/// # Safety
/// Both series must be live handles or null; `out` must be null or valid
/// for writes.
#[no_mangle]
pub unsafe extern "C" fn ert_integrated_error(
    exact: *const ErtSeries,
    approx: *const ErtSeries,
    out: *mut f64,
) -> ErtStatus {
    guard(|| {
        check_out(out, "out")?;
        let (e, a) = (non_null(exact, "exact")?, non_null(approx, "approx")?);
        let value = lift(integrated_error(&e.series, &a.series))?;
        unsafe { *out = value };
        Ok(())
    })
}
