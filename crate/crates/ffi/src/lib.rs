//! C ABI over `casimir-core`.
//!
//! Every function returns a [`CmStatus`]; results are written through out
//! pointers only on success. Models and pole scans are opaque handles that
//! the caller releases with the matching `*_free` function. The message of
//! the most recent failure on the calling thread is available from
//! [`cm_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, UnwindSafe};

use casimir_core::error::Error;
use casimir_core::lifshitz::{i_imag, interaction_energy, Material, PhysicalSetup};
use casimir_core::media::{branch_points, PermittivityModel, Polarization};
use casimir_core::numerics::QuadratureOptions;
use casimir_core::openmodes::{pole_scan, OpenPole, PoleScanOptions};
use casimir_core::plasmon::{vk_quadrature_energy, vk_series_energy, PlasmonSetup};

/// Result code of every exported function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Parse = 3,
    UnsupportedModel = 4,
    Domain = 5,
    Numerical = 6,
    OutOfRange = 7,
    Panic = 8,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CmPolarization {
    Te = 0,
    Tm = 1,
}

impl From<CmPolarization> for Polarization {
    fn from(p: CmPolarization) -> Self {
        match p {
            CmPolarization::Te => Polarization::TE,
            CmPolarization::Tm => Polarization::TM,
        }
    }
}

/// Opaque permittivity model.
pub struct CmModel(PermittivityModel);

/// Opaque list of real open-domain poles.
pub struct CmPoleScan(Vec<OpenPole>);

/// Energy and pressure per unit area of one gap.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default)]
pub struct CmEnergy {
    /// Dimensionless imaginary-axis integral summed over both polarizations.
    pub i_imag: f64,
    /// J/m^2.
    pub energy: f64,
    /// Pa; negative values attract.
    pub pressure: f64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CmStatus {
    match e {
        Error::Parse(_) => CmStatus::Parse,
        Error::InvalidArgument(_) | Error::InvalidInterval { .. } => CmStatus::InvalidArgument,
        Error::UnsupportedModel(_) => CmStatus::UnsupportedModel,
        Error::Domain(_) | Error::KinematicMismatch(_) | Error::BranchPoint { .. } => {
            CmStatus::Domain
        }
        _ => CmStatus::Numerical,
    }
}

/// Runs `f`, records any failure and converts panics into `CmStatus::Panic`.
fn guard(f: impl FnOnce() -> Result<(), (CmStatus, String)> + UnwindSafe) -> CmStatus {
    match catch_unwind(f) {
        Ok(Ok(())) => CmStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CmStatus::Panic
        }
    }
}

fn core<T>(r: casimir_core::error::Result<T>) -> Result<T, (CmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

fn null(what: &str) -> (CmStatus, String) {
    (CmStatus::NullPointer, format!("{what} is null"))
}

fn tolerance(rel_tol: f64) -> Result<QuadratureOptions, (CmStatus, String)> {
    if rel_tol > 0.0 && rel_tol < 1.0 {
        Ok(QuadratureOptions::with_rel_tol(rel_tol))
    } else {
        Err((
            CmStatus::InvalidArgument,
            format!("rel_tol must lie in (0, 1), got {rel_tol}"),
        ))
    }
}

/// # Safety
/// `model` must be null or a live handle from this library.
unsafe fn model_ref<'a>(
    model: *const CmModel,
) -> Result<&'a PermittivityModel, (CmStatus, String)> {
    unsafe { model.as_ref() }
        .map(|m| &m.0)
        .ok_or_else(|| null("model"))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn cm_status_str(status: CmStatus) -> *const c_char {
    let s: &'static CStr = match status {
        CmStatus::Ok => c"ok",
        CmStatus::NullPointer => c"null pointer",
        CmStatus::InvalidArgument => c"invalid argument",
        CmStatus::Parse => c"parse error",
        CmStatus::UnsupportedModel => c"unsupported model",
        CmStatus::Domain => c"domain error",
        CmStatus::Numerical => c"numerical failure",
        CmStatus::OutOfRange => c"index out of range",
        CmStatus::Panic => c"internal panic",
    };
    s.as_ptr()
}

/// Message of the last failure on this thread; valid until the next failing
/// call on the same thread. Empty if nothing has failed.
#[no_mangle]
pub extern "C" fn cm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Parses a model string such as `plasma:xi=30`, `const:xi=2`, `pc` or
/// `lorentz:kappa0=3,omega0=1`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_model_parse(spec: *const c_char, out: *mut *mut CmModel) -> CmStatus {
    guard(|| {
        if spec.is_null() {
            return Err(null("spec"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = unsafe { CStr::from_ptr(spec) }
            .to_str()
            .map_err(|e| (CmStatus::Parse, format!("model string is not UTF-8: {e}")))?;
        let m: PermittivityModel = core(text.parse())?;
        unsafe { *out = Box::into_raw(Box::new(CmModel(m))) };
        Ok(())
    })
}

/// Releases a model. Null is ignored.
///
/// # Safety
/// `model` must be null or a handle from `cm_model_parse` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_model_free(model: *mut CmModel) {
    if !model.is_null() {
        drop(unsafe { Box::from_raw(model) });
    }
}

/// Branch points `(Omega_B1, Omega_B2)` at transverse wavenumber `r`.
///
/// # Safety
/// Pointers must be valid; `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_branch_points(
    model: *const CmModel,
    r: f64,
    omega_b1: *mut f64,
    omega_b2: *mut f64,
) -> CmStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        if omega_b1.is_null() || omega_b2.is_null() {
            return Err(null("output"));
        }
        let bp = core(branch_points(m, r))?;
        unsafe {
            *omega_b1 = bp.omega_b1;
            *omega_b2 = bp.omega_b2;
        }
        Ok(())
    })
}

/// Imaginary-axis Lifshitz integral with cutoffs `r0` and `rho`; pass
/// `INFINITY` for no cutoff.
///
/// # Safety
/// Pointers must be valid; `error_estimate` may be null.
#[no_mangle]
pub unsafe extern "C" fn cm_i_imag(
    model: *const CmModel,
    polarization: CmPolarization,
    r0: f64,
    rho: f64,
    rel_tol: f64,
    value: *mut f64,
    error_estimate: *mut f64,
) -> CmStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        if value.is_null() {
            return Err(null("value"));
        }
        let res = core(i_imag(
            polarization.into(),
            m,
            r0,
            rho,
            &tolerance(rel_tol)?,
        ))?;
        unsafe {
            *value = res.value;
            if !error_estimate.is_null() {
                *error_estimate = res.error_estimate;
            }
        }
        Ok(())
    })
}

/// Casimir energy and pressure across a gap of `lz` metres, summed over
/// both polarizations. A plasma model's `xi` is read at this `lz`.
///
/// # Safety
/// Pointers must be valid; `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_casimir_energy(
    model: *const CmModel,
    lz: f64,
    rel_tol: f64,
    out: *mut CmEnergy,
) -> CmStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let setup = core(Material::from_model(m, lz).and_then(|mat| PhysicalSetup::new(lz, mat)))?;
        let rep = core(interaction_energy(&setup, None, &tolerance(rel_tol)?))?;
        let i = rep.parts.iter().map(|p| p.i_imag).sum();
        unsafe {
            *out = CmEnergy {
                i_imag: i,
                energy: rep.energy,
                pressure: rep.pressure,
            }
        };
        Ok(())
    })
}

/// Plasmon zero-point energy (J/m^2) between Lorentz half-spaces: the
/// `n_terms` series and the direct quadrature.
///
/// # Safety
/// `series` and `quadrature` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cm_plasmon_energy(
    kappa0: f64,
    omega0: f64,
    lz: f64,
    n_terms: u32,
    series: *mut f64,
    quadrature: *mut f64,
) -> CmStatus {
    guard(|| {
        if series.is_null() || quadrature.is_null() {
            return Err(null("output"));
        }
        let setup = core(PlasmonSetup::new(kappa0, omega0, lz))?;
        let s = core(vk_series_energy(&setup, n_terms))?;
        let q = core(vk_quadrature_energy(
            &setup,
            &QuadratureOptions::with_rel_tol(1e-11),
        ))?;
        unsafe {
            *series = s;
            *quadrature = q;
        }
        Ok(())
    })
}

/// Real zeros of `F` below `omega_max` at transverse wavenumber `r`,
/// validated against the argument principle.
///
/// # Safety
/// Pointers must be valid; `model` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_pole_scan(
    model: *const CmModel,
    polarization: CmPolarization,
    r: f64,
    omega_max: f64,
    out: *mut *mut CmPoleScan,
) -> CmStatus {
    guard(|| {
        let m = unsafe { model_ref(model) }?;
        if out.is_null() {
            return Err(null("out"));
        }
        let scan = core(pole_scan(
            polarization.into(),
            r,
            m,
            omega_max,
            &PoleScanOptions::default(),
        ))?;
        unsafe { *out = Box::into_raw(Box::new(CmPoleScan(scan.poles))) };
        Ok(())
    })
}

/// Number of poles in a scan; 0 for null.
///
/// # Safety
/// `scan` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cm_pole_scan_len(scan: *const CmPoleScan) -> usize {
    unsafe { scan.as_ref() }.map_or(0, |s| s.0.len())
}

/// Frequency of pole `index`, in scan order.
///
/// # Safety
/// `scan` must be a live handle and `omega` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cm_pole_scan_get(
    scan: *const CmPoleScan,
    index: usize,
    omega: *mut f64,
) -> CmStatus {
    guard(|| {
        let s = unsafe { scan.as_ref() }.ok_or_else(|| null("scan"))?;
        if omega.is_null() {
            return Err(null("omega"));
        }
        let p = s.0.get(index).ok_or((
            CmStatus::OutOfRange,
            format!("index {index} >= {}", s.0.len()),
        ))?;
        unsafe { *omega = p.omega };
        Ok(())
    })
}

/// Releases a pole scan. Null is ignored.
///
/// # Safety
/// `scan` must be null or a handle from `cm_pole_scan` not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cm_pole_scan_free(scan: *mut CmPoleScan) {
    if !scan.is_null() {
        drop(unsafe { Box::from_raw(scan) });
    }
}

/// Crate version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cm_version() -> *const c_char {
    const V: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    V.as_ptr()
}
