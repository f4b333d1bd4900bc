//! C interface to `gbspec`.
//!
//! Every fallible function returns a [`GbsStatus`]; on failure the message
//! is available from [`gbs_last_error_message`] on the same thread. Objects
//! are opaque and must be released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gbspec::cardinal::cardinal_spline;
use gbspec::collocation::{assemble, gb_basis};
use gbspec::config::{parse_config, Config};
use gbspec::multidim::assemble_md;
use gbspec::nalgebra::DMatrix;
use gbspec::section::{Family, SectionFamily};
use gbspec::spectral::eigenvalues_dense;
use gbspec::symbols::{symbol_fn, SymbolFn, SymbolKind};
use gbspec::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbsStatus {
    Ok = 0,
    NullPointer = 1,
    Usage = 2,
    Constraint = 3,
    Validation = 4,
    Unsupported = 5,
    Syntax = 6,
    Eval = 7,
    Numerical = 8,
    NoConvergence = 9,
    Io = 10,
    Json = 11,
    BufferTooSmall = 12,
    Panic = 13,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbsFamily {
    Polynomial = 0,
    Hyperbolic = 1,
    Trigonometric = 2,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GbsSymbolKind {
    H = 0,
    G = 1,
    F = 2,
}

/// A spectral symbol h_p, g_p or f_p.
pub struct GbsSymbol {
    inner: SymbolFn,
}

/// An assembled collocation matrix (1D or multi-dimensional).
pub struct GbsCollocationSystem {
    a: DMatrix<f64>,
    a_normalized: DMatrix<f64>,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> GbsStatus {
    match e {
        Error::Usage(_) => GbsStatus::Usage,
        Error::Constraint(_) => GbsStatus::Constraint,
        Error::Validation(_) => GbsStatus::Validation,
        Error::Unsupported(_) => GbsStatus::Unsupported,
        Error::Syntax { .. } => GbsStatus::Syntax,
        Error::Eval(_) => GbsStatus::Eval,
        Error::Numerical(_) => GbsStatus::Numerical,
        Error::NoConvergence { .. } => GbsStatus::NoConvergence,
        Error::Io(_) => GbsStatus::Io,
        Error::Json(_) => GbsStatus::Json,
    }
}

/// Failure of an FFI call: a library error or an interface-level problem.
enum Fail {
    Lib(Error),
    Status(GbsStatus, String),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

fn null(what: &str) -> Fail {
    Fail::Status(GbsStatus::NullPointer, format!("{what} is null"))
}

/// Runs `f`, converting errors and panics into a status code.
fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GbsStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => GbsStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_error(&e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Status(s, msg))) => {
            set_error(&msg);
            s
        }
        Err(_) => {
            set_error("internal panic");
            GbsStatus::Panic
        }
    }
}

fn family(kind: GbsFamily, alpha: f64) -> gbspec::Result<SectionFamily> {
    let k = match kind {
        GbsFamily::Polynomial => return Ok(SectionFamily::polynomial()),
        GbsFamily::Hyperbolic => Family::Hyperbolic,
        GbsFamily::Trigonometric => Family::Trigonometric,
    };
    SectionFamily::new(k, alpha)
}

/// Copies `src` into a caller buffer of `capacity` entries.
unsafe fn write_slice(src: &[f64], dst: *mut f64, capacity: usize) -> Result<(), Fail> {
    if src.len() > capacity {
        return Err(Fail::Status(
            GbsStatus::BufferTooSmall,
            format!("buffer holds {capacity} values, {} needed", src.len()),
        ));
    }
    if dst.is_null() {
        return Err(null("output buffer"));
    }
    std::ptr::copy_nonoverlapping(src.as_ptr(), dst, src.len());
    Ok(())
}

/// Message of the last failed call on this thread. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn gbs_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Builds a symbol; `alpha` is ignored for the polynomial family.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for one pointer.
#[no_mangle]
pub unsafe extern "C" fn gbs_symbol_new(
    kind: GbsSymbolKind,
    p: usize,
    fam: GbsFamily,
    alpha: f64,
    out: *mut *mut GbsSymbol,
) -> GbsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let kind = match kind {
            GbsSymbolKind::H => SymbolKind::H,
            GbsSymbolKind::G => SymbolKind::G,
            GbsSymbolKind::F => SymbolKind::F,
        };
        let inner = symbol_fn(kind, p, family(fam, alpha)?)?;
        *out = Box::into_raw(Box::new(GbsSymbol { inner }));
        Ok(())
    })
}

/// # Safety
/// `sym` must come from [`gbs_symbol_new`]; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gbs_symbol_eval(sym: *const GbsSymbol, theta: f64, out: *mut f64) -> GbsStatus {
    guard(|| {
        let sym = sym.as_ref().ok_or_else(|| null("symbol"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = sym.inner.eval(theta);
        Ok(())
    })
}

/// Fourier coefficients c_k for k = −b..b, split into real and imaginary
/// parts. `len` receives 2b+1; if `capacity` is smaller the call fails with
/// `BufferTooSmall` and nothing is written to the buffers.
///
/// # Safety
/// `sym` must come from [`gbs_symbol_new`]; `re` and `im` must hold
/// `capacity` values; `len` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gbs_symbol_coefficients(
    sym: *const GbsSymbol,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
    len: *mut usize,
) -> GbsStatus {
    guard(|| {
        let sym = sym.as_ref().ok_or_else(|| null("symbol"))?;
        if len.is_null() {
            return Err(null("len"));
        }
        let coeffs = sym.inner.fourier_coefficients();
        *len = coeffs.len();
        let (r, i): (Vec<f64>, Vec<f64>) = coeffs.iter().map(|z| (z.re, z.im)).unzip();
        write_slice(&r, re, capacity)?;
        write_slice(&i, im, capacity)
    })
}

/// # Safety
/// `sym` must come from [`gbs_symbol_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gbs_symbol_free(sym: *mut GbsSymbol) {
    if !sym.is_null() {
        drop(Box::from_raw(sym));
    }
}

/// Value of the cardinal GB-spline φ_p at `t`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gbs_cardinal_eval(fam: GbsFamily, alpha: f64, p: usize, t: f64, out: *mut f64) -> GbsStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        *out = cardinal_spline(family(fam, alpha)?, p)?.eval(t);
        Ok(())
    })
}

/// Assembles the collocation matrix for a JSON problem description (the
/// same format the command-line tool reads) with `n` intervals per direction.
///
/// # Safety
/// `config_json` must be a NUL-terminated UTF-8 string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gbs_collocation_new(
    config_json: *const c_char,
    n: usize,
    out: *mut *mut GbsCollocationSystem,
) -> GbsStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|_| Fail::Status(GbsStatus::Validation, "config is not UTF-8".into()))?;
        let sys = match parse_config(text)? {
            Config::OneD(c) => {
                let basis = gb_basis(n, c.p, c.family, c.mode)?;
                let s = assemble(&c.problem, &c.geometry, &basis)?;
                GbsCollocationSystem { a: s.a, a_normalized: s.a_normalized }
            }
            Config::MultiD(c) => {
                let s = assemble_md(&c.problem, &c.geometry, n)?;
                GbsCollocationSystem { a: s.a, a_normalized: s.a_normalized }
            }
        };
        *out = Box::into_raw(Box::new(sys));
        Ok(())
    })
}

/// Matrix order, or 0 for a null handle.
///
/// # Safety
/// `sys` must be null or come from [`gbs_collocation_new`].
#[no_mangle]
pub unsafe extern "C" fn gbs_collocation_order(sys: *const GbsCollocationSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.a.nrows())
}

/// Copies the matrix, row-major, into `buf` (order² values). With
/// `normalized` non-zero the matrix is divided by n².
///
/// # Safety
/// `sys` must come from [`gbs_collocation_new`]; `buf` must hold `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn gbs_collocation_matrix(
    sys: *const GbsCollocationSystem,
    normalized: i32,
    buf: *mut f64,
    capacity: usize,
) -> GbsStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("system"))?;
        let m = if normalized != 0 { &sys.a_normalized } else { &sys.a };
        let row_major: Vec<f64> = m.transpose().iter().copied().collect();
        write_slice(&row_major, buf, capacity)
    })
}

/// Eigenvalues of the normalized matrix, sorted by real part.
///
/// # Safety
/// `sys` must come from [`gbs_collocation_new`]; `re` and `im` must hold
/// `capacity` values.
#[no_mangle]
pub unsafe extern "C" fn gbs_collocation_eigenvalues(
    sys: *const GbsCollocationSystem,
    re: *mut f64,
    im: *mut f64,
    capacity: usize,
) -> GbsStatus {
    guard(|| {
        let sys = sys.as_ref().ok_or_else(|| null("system"))?;
        let mut eigs = eigenvalues_dense(&sys.a_normalized, 1e-12)?;
        eigs.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        let (r, i): (Vec<f64>, Vec<f64>) = eigs.iter().map(|z| (z.re, z.im)).unzip();
        write_slice(&r, re, capacity)?;
        write_slice(&i, im, capacity)
    })
}

/// # Safety
/// `sys` must come from [`gbs_collocation_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gbs_collocation_free(sys: *mut GbsCollocationSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}
