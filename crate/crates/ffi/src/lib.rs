//! C ABI for the `tcbm` library.
//!
//! Objects cross the boundary as opaque handles created by `tcbm_*_new`-style
//! constructors and released by the matching `tcbm_*_free`. Every fallible
//! call returns a [`TcbmStatus`]; on failure the message is available from
//! [`tcbm_last_error`] on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tcbm::estimators::{box_dim_fit, empirical_ft, energy_integral, BaseMeasure};
use tcbm::process::{sample_additive_bm, sample_additive_fbm, RngStream, SamplePath, TimeGrid};
use tcbm::self_similar::{lq_spectrum, predicted_graph_dim, Ifs};
use tcbm::variance::VarianceFunction;
use tcbm::Error;

/// Result code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TcbmStatus {
    Ok = 0,
    NullPointer = 1,
    Domain = 2,
    Range = 3,
    Validation = 4,
    Precondition = 5,
    State = 6,
    Resource = 7,
    Numerical = 8,
    Resolution = 9,
    Fit = 10,
    Degenerate = 11,
    Internal = 12,
    Io = 13,
    Usage = 14,
    Panic = 15,
}

/// A variance function `V` (the clock of the time change).
pub struct TcbmVariance(VarianceFunction);

/// An iterated function system of similarities with probability weights.
pub struct TcbmIfs(Ifs);

/// One sampled path `X_t = B^H_{V(t)}` on a time grid.
pub struct TcbmPath(SamplePath);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> TcbmStatus {
    match err {
        Error::Domain(_) => TcbmStatus::Domain,
        Error::Range(_) => TcbmStatus::Range,
        Error::Validation(_) => TcbmStatus::Validation,
        Error::Precondition(_) => TcbmStatus::Precondition,
        Error::State(_) => TcbmStatus::State,
        Error::Resource(_) => TcbmStatus::Resource,
        Error::Numerical(_) => TcbmStatus::Numerical,
        Error::Resolution(_) => TcbmStatus::Resolution,
        Error::Fit(_) => TcbmStatus::Fit,
        Error::Degenerate(_) => TcbmStatus::Degenerate,
        Error::Internal(_) => TcbmStatus::Internal,
        Error::Io(_) => TcbmStatus::Io,
        Error::Usage(_) => TcbmStatus::Usage,
    }
}

enum Failure {
    Null(&'static str),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TcbmStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => TcbmStatus::Ok,
        Ok(Err(Failure::Null(what))) => {
            set_last_error(format!("null pointer passed as {what}"));
            TcbmStatus::NullPointer
        }
        Ok(Err(Failure::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Err(_) => {
            set_last_error("panic inside tcbm".into());
            TcbmStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or(Failure::Null(what))
}

unsafe fn write<T>(out: *mut T, value: T, what: &'static str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(Failure::Null(what));
    }
    out.write(value);
    Ok(())
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Failure> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Failure::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn boxed<T>(value: T) -> *mut T {
    Box::into_raw(Box::new(value))
}

/// Message of the last failed call on this thread, or null. The pointer is
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tcbm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tcbm_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// `V(t) = t` on `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_identity(out: *mut *mut TcbmVariance) -> TcbmStatus {
    guard(|| {
        write(
            out,
            boxed(TcbmVariance(VarianceFunction::identity())),
            "out",
        )
    })
}

/// `V(t) = t^beta` on `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_power_law(
    beta: f64,
    out: *mut *mut TcbmVariance,
) -> TcbmStatus {
    guard(|| {
        write(
            out,
            boxed(TcbmVariance(VarianceFunction::power_law(beta)?)),
            "out",
        )
    })
}

/// The middle-third Cantor function on `[0, 1]`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one handle.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_cantor(out: *mut *mut TcbmVariance) -> TcbmStatus {
    guard(|| {
        write(
            out,
            boxed(TcbmVariance(VarianceFunction::cantor_staircase())),
            "out",
        )
    })
}

/// Piecewise-linear `V` through `(t[i], v[i])`, `i < len`.
///
/// # Safety
/// `t` and `v` must point to `len` readable doubles; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_piecewise_linear(
    t: *const f64,
    v: *const f64,
    len: usize,
    out: *mut *mut TcbmVariance,
) -> TcbmStatus {
    guard(|| {
        let t = slice(t, len, "t")?;
        let v = slice(v, len, "v")?;
        let points = t.iter().copied().zip(v.iter().copied()).collect();
        write(
            out,
            boxed(TcbmVariance(VarianceFunction::piecewise_linear(points)?)),
            "out",
        )
    })
}

/// Distribution function of the self-similar measure of `ifs`, evaluated by
/// tree descent to `depth` levels. The IFS handle is not consumed.
///
/// # Safety
/// `ifs` must be a live handle; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_self_similar(
    ifs: *const TcbmIfs,
    depth: usize,
    out: *mut *mut TcbmVariance,
) -> TcbmStatus {
    guard(|| {
        let ifs = deref(ifs, "ifs")?;
        write(
            out,
            boxed(TcbmVariance(VarianceFunction::self_similar_cdf(
                ifs.0.clone(),
                depth,
            )?)),
            "out",
        )
    })
}

/// Distribution function of the self-similar measure of `ifs`, computed by
/// iterating the self-similarity operator on a uniform grid.
///
/// # Safety
/// `ifs` must be a live handle; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_iterated(
    ifs: *const TcbmIfs,
    grid_size: usize,
    iterations: usize,
    out: *mut *mut TcbmVariance,
) -> TcbmStatus {
    guard(|| {
        let ifs = deref(ifs, "ifs")?;
        let v = VarianceFunction::build_iterated_cdf(ifs.0.clone(), grid_size, iterations)?;
        write(out, boxed(TcbmVariance(v)), "out")
    })
}

/// # Safety
/// `v` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_free(v: *mut TcbmVariance) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// `V(t)`.
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_eval(
    v: *const TcbmVariance,
    t: f64,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| write(out, deref(v, "v")?.0.eval(t)?, "out"))
}

/// `T(s) = inf{t : V(t) > s}`, located to within `tol`.
///
/// # Safety
/// `v` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_variance_inverse(
    v: *const TcbmVariance,
    s: f64,
    tol: f64,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| write(out, deref(v, "v")?.0.generalized_inverse(s, tol)?, "out"))
}

/// An IFS `S_i(x) = r_i x + d_i` with weights `p_i`, `i < len`.
///
/// # Safety
/// The three arrays must hold `len` readable doubles; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_ifs_new(
    ratios: *const f64,
    translations: *const f64,
    weights: *const f64,
    len: usize,
    out: *mut *mut TcbmIfs,
) -> TcbmStatus {
    guard(|| {
        let ifs = Ifs::new(
            slice(ratios, len, "ratios")?.to_vec(),
            slice(translations, len, "translations")?.to_vec(),
            slice(weights, len, "weights")?.to_vec(),
        )?;
        write(out, boxed(TcbmIfs(ifs)), "out")
    })
}

/// A named IFS: `"cantor3"`, `"uneven-2-4"` or `"golden-bernoulli"`.
///
/// # Safety
/// `name` must be a NUL-terminated string; `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_ifs_preset(
    name: *const c_char,
    out: *mut *mut TcbmIfs,
) -> TcbmStatus {
    guard(|| {
        if name.is_null() {
            return Err(Failure::Null("name"));
        }
        let name = CStr::from_ptr(name)
            .to_str()
            .map_err(|e| Error::Validation(format!("IFS name is not UTF-8: {e}")))?;
        write(out, boxed(TcbmIfs(Ifs::preset(name)?)), "out")
    })
}

/// # Safety
/// `ifs` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcbm_ifs_free(ifs: *mut TcbmIfs) {
    if !ifs.is_null() {
        drop(Box::from_raw(ifs));
    }
}

/// The `L^q` spectrum `τ(q)` of the self-similar measure.
///
/// # Safety
/// `ifs` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_lq_spectrum(
    ifs: *const TcbmIfs,
    q: f64,
    tol: f64,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| write(out, lq_spectrum(&deref(ifs, "ifs")?.0, q, tol)?, "out"))
}

/// Predicted graph dimension `1 - τ(H)` of fractional Brownian motion run on
/// the distribution function of the IFS measure.
///
/// # Safety
/// `ifs` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_predicted_graph_dim(
    ifs: *const TcbmIfs,
    hurst: f64,
    tol: f64,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| {
        write(
            out,
            predicted_graph_dim(&deref(ifs, "ifs")?.0, hurst, tol)?,
            "out",
        )
    })
}

/// Samples `B^H_{V(t)}` at `times[0..len]` from stream `(seed, stream)`.
/// `hurst = 0.5` uses independent increments, other values the exact
/// Cholesky sampler (at most 4096 points).
///
/// # Safety
/// `v` must be a live handle, `times` must hold `len` doubles, `out` as above.
#[no_mangle]
pub unsafe extern "C" fn tcbm_path_sample(
    v: *const TcbmVariance,
    hurst: f64,
    times: *const f64,
    len: usize,
    seed: u64,
    stream: u64,
    out: *mut *mut TcbmPath,
) -> TcbmStatus {
    guard(|| {
        let v = &deref(v, "v")?.0;
        let grid = TimeGrid::new(slice(times, len, "times")?.to_vec())?;
        let rng = RngStream::new(seed, stream);
        let path = if hurst == 0.5 {
            sample_additive_bm(v, &grid, rng)?
        } else {
            sample_additive_fbm(v, hurst, &grid, rng)?
        };
        write(out, boxed(TcbmPath(path)), "out")
    })
}

/// Number of grid points of the path; 0 for a null handle.
///
/// # Safety
/// `path` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tcbm_path_len(path: *const TcbmPath) -> usize {
    path.as_ref().map_or(0, |p| p.0.len())
}

/// Copies the path values into `buf`, which must hold `len` doubles with
/// `len` equal to [`tcbm_path_len`].
///
/// # Safety
/// `path` must be a live handle and `buf` writable for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn tcbm_path_values(
    path: *const TcbmPath,
    buf: *mut f64,
    len: usize,
) -> TcbmStatus {
    guard(|| {
        let values = &deref(path, "path")?.0.values;
        if len != values.len() {
            return Err(Error::Validation(format!(
                "buffer holds {len} values, path has {}",
                values.len()
            ))
            .into());
        }
        if buf.is_null() {
            return Err(Failure::Null("buf"));
        }
        ptr::copy_nonoverlapping(values.as_ptr(), buf, len);
        Ok(())
    })
}

/// # Safety
/// `path` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn tcbm_path_free(path: *mut TcbmPath) {
    if !path.is_null() {
        drop(Box::from_raw(path));
    }
}

/// Box-counting dimension of the graph fitted over dyadic levels
/// `n_min..=n_max`.
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_box_dimension(
    path: *const TcbmPath,
    n_min: u32,
    n_max: u32,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| {
        write(
            out,
            box_dim_fit(&deref(path, "path")?.0, n_min, n_max)?.value,
            "out",
        )
    })
}

/// Discretized `s`-energy of the graph measure over Lebesgue measure.
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_energy(path: *const TcbmPath, s: f64, out: *mut f64) -> TcbmStatus {
    guard(|| {
        write(
            out,
            energy_integral(&deref(path, "path")?.0, &BaseMeasure::LebesgueOnGrid, s)?,
            "out",
        )
    })
}

/// Modulus of the Fourier transform of the graph measure at `(xi1, xi2)`.
///
/// # Safety
/// `path` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tcbm_fourier_abs(
    path: *const TcbmPath,
    xi1: f64,
    xi2: f64,
    out: *mut f64,
) -> TcbmStatus {
    guard(|| {
        let value = empirical_ft(
            &deref(path, "path")?.0,
            &BaseMeasure::LebesgueOnGrid,
            (xi1, xi2),
        )?;
        write(out, value.norm(), "out")
    })
}
