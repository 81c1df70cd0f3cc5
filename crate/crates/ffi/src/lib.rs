//! C ABI over `minimal-gap-lab`.
//!
//! Every fallible function returns an `int32_t` status: `MGL_OK` on success,
//! the CLI exit codes (`MGL_FAILURE`, `MGL_INPUT`, `MGL_DISTRUST`) for library
//! outcomes, and negative codes for misuse of the ABI itself. After a nonzero
//! status, `mgl_last_error` returns a message for the calling thread.
//!
//! Strings handed out by the library are owned by the caller and must be
//! released with `mgl_string_free`. Surfaces are opaque handles released with
//! `mgl_surface_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use minimal_gap_lab::gaps::{calabi_constants, pinching_roots, threshold_t};
use minimal_gap_lab::invariants::{evaluate_node, point_invariants, PointInvariants};
use minimal_gap_lab::lemmas::run_suite;
use minimal_gap_lab::pipeline::verify_sources;
use minimal_gap_lab::report::{verify_report, VerifyEcho};
use minimal_gap_lab::surface::{load_immersion, Chart, ImmersionSpec, ShapePair};
use minimal_gap_lab::tolerances::Tolerances;
use minimal_gap_lab::Error;

pub const MGL_OK: i32 = 0;
pub const MGL_FAILURE: i32 = 1;
pub const MGL_INPUT: i32 = 2;
pub const MGL_DISTRUST: i32 = 3;
pub const MGL_NULL_POINTER: i32 = -1;
pub const MGL_INVALID_UTF8: i32 = -2;
pub const MGL_PANIC: i32 = -3;

pub const MGL_CHART_SPHERE: i32 = 0;
pub const MGL_CHART_TORUS: i32 = 1;

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(text).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(e.exit_code(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(MGL_NULL_POINTER, format!("{what} is null"))
}

/// Runs `body`, converting errors and panics into a status and the thread's
/// last error.
fn guard(body: impl FnOnce() -> Result<i32, Failure>) -> i32 {
    clear_error();
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(code)) => code,
        Ok(Err(Failure(code, message))) => {
            set_error(message);
            code
        }
        Err(_) => {
            set_error("internal panic");
            MGL_PANIC
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(MGL_INVALID_UTF8, format!("{what} is not valid UTF-8")))
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).map_or(ptr::null_mut(), CString::into_raw)
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null("output pointer"));
    }
    out.write(value);
    Ok(())
}

/// Message for the last nonzero status on this thread, or null. The pointer
/// stays valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn mgl_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Releases a string returned by the library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mgl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// A validated minimal immersion.
pub struct MglSurface {
    spec: ImmersionSpec,
    tol: Tolerances,
}

/// Loads a catalog name or a spec file path and validates it.
///
/// # Safety
/// `source` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_surface_load(source: *const c_char, out: *mut *mut MglSurface) -> i32 {
    guard(|| {
        let source = read_str(source, "source")?;
        if out.is_null() {
            return Err(null("output pointer"));
        }
        let tol = Tolerances::default();
        let spec = load_immersion(source, &tol)?;
        out.write(Box::into_raw(Box::new(MglSurface { spec, tol })));
        Ok(MGL_OK)
    })
}

/// # Safety
/// `surface` must come from `mgl_surface_load` and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn mgl_surface_free(surface: *mut MglSurface) {
    if !surface.is_null() {
        drop(Box::from_raw(surface));
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglSurfaceInfo {
    /// `MGL_CHART_SPHERE` or `MGL_CHART_TORUS`.
    pub chart: i32,
    pub ambient_dim: u32,
    pub codimension: u32,
    pub euler_char: i32,
    pub domain_u_min: f64,
    pub domain_u_max: f64,
    pub domain_v_min: f64,
    pub domain_v_max: f64,
}

/// # Safety
/// `surface` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_surface_info(surface: *const MglSurface, out: *mut MglSurfaceInfo) -> i32 {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        let [(u0, u1), (v0, v1)] = s.spec.domain();
        write_out(
            out,
            MglSurfaceInfo {
                chart: match s.spec.chart {
                    Chart::Sphere => MGL_CHART_SPHERE,
                    Chart::Torus => MGL_CHART_TORUS,
                },
                ambient_dim: s.spec.ambient_dim as u32,
                codimension: s.spec.codimension() as u32,
                euler_char: s.spec.euler_char,
                domain_u_min: u0,
                domain_u_max: u1,
                domain_v_min: v0,
                domain_v_max: v1,
            },
        )?;
        Ok(MGL_OK)
    })
}

/// Pointwise invariants of a second fundamental form.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglInvariants {
    pub s: f64,
    pub k: f64,
    pub norm_a2: f64,
    pub rho0: f64,
    pub rho_perp: f64,
    pub lambda1: f64,
    pub lambda2: f64,
    pub u: f64,
    pub t: f64,
    pub ddvv_slack: f64,
}

impl From<&PointInvariants> for MglInvariants {
    fn from(p: &PointInvariants) -> Self {
        MglInvariants {
            s: p.s,
            k: p.k,
            norm_a2: p.norm_a2,
            rho0: p.rho0,
            rho_perp: p.rho_perp,
            lambda1: p.lambda1,
            lambda2: p.lambda2,
            u: p.u,
            t: p.t,
            ddvv_slack: p.ddvv_slack,
        }
    }
}

/// Invariants of the shape pair a = h₁₁, b = h₁₂, each of length `q`.
///
/// # Safety
/// `a` and `b` must point to `q` doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_point_invariants(
    a: *const f64,
    b: *const f64,
    q: usize,
    out: *mut MglInvariants,
) -> i32 {
    guard(|| {
        if a.is_null() || b.is_null() {
            return Err(null("shape vector"));
        }
        if q == 0 {
            return Err(Failure(MGL_INPUT, "codimension must be at least 1".into()));
        }
        let a = std::slice::from_raw_parts(a, q);
        let b = std::slice::from_raw_parts(b, q);
        let sp = ShapePair::from_ab(a.to_vec().into(), b.to_vec().into());
        let inv = point_invariants(&sp, Tolerances::default().ddvv)?;
        write_out(out, MglInvariants::from(&inv))?;
        Ok(MGL_OK)
    })
}

/// One evaluated chart point of a surface.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglNode {
    pub invariants: MglInvariants,
    pub area_element: f64,
    pub laplacian_s: f64,
    pub b1_simons: f64,
    pub b1_direct: f64,
    /// Nonzero when any numerical trust check failed at this point.
    pub flagged: i32,
}

/// Evaluates the surface at chart coordinates (u, v).
///
/// # Safety
/// `surface` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_surface_evaluate(surface: *const MglSurface, u: f64, v: f64, out: *mut MglNode) -> i32 {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        let n = evaluate_node(&s.spec, [u, v], &s.tol)?;
        write_out(
            out,
            MglNode {
                invariants: MglInvariants::from(&n.inv),
                area_element: n.area_element,
                laplacian_s: n.laplacian_s,
                b1_simons: n.b1_simons,
                b1_direct: n.b1_direct,
                flagged: n.flags.any() as i32,
            },
        )?;
        Ok(MGL_OK)
    })
}

/// Canonical spec text of the surface. Free with `mgl_string_free`.
///
/// # Safety
/// `surface` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_surface_canonical(surface: *const MglSurface, out: *mut *mut c_char) -> i32 {
    guard(|| {
        let s = surface.as_ref().ok_or_else(|| null("surface"))?;
        write_out(out, to_c_string(s.spec.to_canonical()))?;
        Ok(MGL_OK)
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglThresholds {
    pub tau: f64,
    pub t_a: f64,
    pub t_b: f64,
    pub hat_a: f64,
    pub hat_b: f64,
    pub sigma: f64,
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_thresholds(tau: f64, out: *mut MglThresholds) -> i32 {
    guard(|| {
        let t = threshold_t(tau)?;
        write_out(
            out,
            MglThresholds {
                tau: t.tau,
                t_a: t.t_a,
                t_b: t.t_b,
                hat_a: t.hat_a,
                hat_b: t.hat_b,
                sigma: t.sigma,
            },
        )?;
        Ok(MGL_OK)
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglPinching {
    pub gamma: f64,
    pub s0: f64,
    pub s0_prime: f64,
    pub gamma_bound: f64,
}

/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_pinching_roots(gamma: f64, out: *mut MglPinching) -> i32 {
    guard(|| {
        let r = pinching_roots(gamma)?;
        write_out(
            out,
            MglPinching {
                gamma: r.gamma,
                s0: r.s0,
                s0_prime: r.s0_prime,
                gamma_bound: r.gamma_bound,
            },
        )?;
        Ok(MGL_OK)
    })
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default)]
pub struct MglCalabi {
    pub s: u32,
    /// n of the target sphere Sⁿ, that is 2s.
    pub sphere_dim: u32,
    pub r: f64,
    pub k: f64,
    pub s_norm: f64,
    pub u: f64,
    pub area: f64,
}

/// Constants of the Calabi sphere of harmonic degree `s` and radius `r`.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_calabi_constants(s: u32, r: f64, out: *mut MglCalabi) -> i32 {
    guard(|| {
        let c = calabi_constants(s, r)?;
        write_out(
            out,
            MglCalabi {
                s: c.s,
                sphere_dim: c.ambient_dim,
                r: c.r,
                k: c.k,
                s_norm: c.s_norm,
                u: c.u,
                area: c.area,
            },
        )?;
        Ok(MGL_OK)
    })
}

/// Runs the exact identity suite for q = 1..=qmax. Returns `MGL_OK` when
/// every identity is proved and `MGL_FAILURE` otherwise.
///
/// # Safety
/// `proved` and `total` must be writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_identities(qmax: u32, proved: *mut u32, total: *mut u32) -> i32 {
    guard(|| {
        if proved.is_null() || total.is_null() {
            return Err(null("output pointer"));
        }
        if qmax < 1 {
            return Err(Failure(MGL_INPUT, "qmax must be at least 1".into()));
        }
        let suite = run_suite(qmax as usize, None);
        proved.write(suite.reports.iter().filter(|r| r.proved()).count() as u32);
        total.write(suite.reports.len() as u32);
        if suite.all_proved() {
            Ok(MGL_OK)
        } else {
            Err(Failure(MGL_FAILURE, format!("{} identities failed", suite.failures().count())))
        }
    })
}

/// Runs `verify` over `count` sources at `n_theta`×`n_phi` and writes the JSON
/// report to `json_out`. The status is the verify exit code; the report is
/// written for every status except null or non-UTF-8 input.
///
/// # Safety
/// `sources` must point to `count` NUL-terminated strings; `json_out` must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn mgl_verify_json(
    sources: *const *const c_char,
    count: usize,
    n_theta: u32,
    n_phi: u32,
    json_out: *mut *mut c_char,
) -> i32 {
    guard(|| {
        if sources.is_null() || json_out.is_null() {
            return Err(null("argument"));
        }
        let names = std::slice::from_raw_parts(sources, count)
            .iter()
            .map(|&p| read_str(p, "source").map(str::to_string))
            .collect::<Result<Vec<_>, _>>()?;
        let tol = Tolerances::default();
        let resolution = [n_theta as usize, n_phi as usize];
        let v = verify_sources(&names, resolution, &tol);
        let echo = VerifyEcho {
            surfaces: &names,
            resolution,
            tolerances: &tol,
            points: false,
        };
        json_out.write(to_c_string(verify_report(&echo, &v.runs, v.exit_code, &v.diagnostics).to_json()));
        if v.exit_code == MGL_OK {
            Ok(MGL_OK)
        } else {
            Err(Failure(v.exit_code, v.diagnostics.join("\n")))
        }
    })
}
