//! C ABI for the ring-dispersion simulator.
//!
//! Every function returns an [`RdStatus`]. On failure a description is kept
//! per thread and can be read with [`rd_last_error_message`]. Handles are
//! opaque; free them with the matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ring_dispersion::adversary::{AdversaryKind, Mode};
use ring_dispersion::algorithms::PolicyKind;
use ring_dispersion::cli::{default_mode, ExperimentSpec, InitialConfig, Visibility};
use ring_dispersion::error::VerifyError;
use ring_dispersion::scheduler::Simulation;
use ring_dispersion::verifier::{verify_worst_case, SearchOptions};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RdStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ScenarioError = 3,
    GuardExceeded = 4,
    BufferTooSmall = 5,
    Panic = 6,
}

/// A running simulation.
pub struct RdSimulation {
    inner: Simulation,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = CString::new(msg.into().replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(msg));
}

fn fail(status: RdStatus, msg: impl Into<String>) -> RdStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> RdStatus) -> RdStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(RdStatus::Panic, "internal panic"))
}

unsafe fn read_str<'a>(s: *const c_char, what: &str) -> Result<&'a str, RdStatus> {
    if s.is_null() {
        return Err(fail(RdStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(RdStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

unsafe fn parse<T: std::str::FromStr>(s: *const c_char, what: &str) -> Result<T, RdStatus>
where
    T::Err: std::fmt::Display,
{
    read_str(s, what)?
        .parse()
        .map_err(|e: T::Err| fail(RdStatus::InvalidArgument, e.to_string()))
}

/// The last error raised on this thread, or null. The pointer stays valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn rd_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Creates a simulation.
///
/// `mode` may be null for the policy's usual mode. A negative `k` means full
/// visibility. `multiplicities` (length `n`) may be null for a random start.
/// `orientations` (length `n`, nonzero for reversed, in label order) may be
/// null for the default assignment.
///
/// # Safety
/// String arguments must be null or NUL-terminated. Array arguments must be
/// null or point to `n` readable elements. `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_new(
    n: usize,
    policy: *const c_char,
    adversary: *const c_char,
    mode: *const c_char,
    k: i64,
    multiplicities: *const usize,
    orientations: *const u8,
    seed: u64,
    out: *mut *mut RdSimulation,
) -> RdStatus {
    guarded(|| {
        if out.is_null() {
            return fail(RdStatus::NullPointer, "out is null");
        }
        let build = || -> Result<RdSimulation, RdStatus> {
            let policy: PolicyKind = parse(policy, "policy")?;
            let adversary: AdversaryKind = parse(adversary, "adversary")?;
            let mut spec = ExperimentSpec::new(n, policy, adversary);
            if !mode.is_null() {
                spec.mode = parse(mode, "mode")?;
            }
            spec.k = if k < 0 {
                Visibility::Full
            } else {
                Visibility::Radius(k as usize)
            };
            if !multiplicities.is_null() {
                spec.config =
                    InitialConfig::Explicit(std::slice::from_raw_parts(multiplicities, n).to_vec());
            }
            if !orientations.is_null() {
                let bits = std::slice::from_raw_parts(orientations, n);
                spec.orientations = Some(
                    bits.iter()
                        .map(|&b| if b != 0 { '1' } else { '0' })
                        .collect(),
                );
            }
            spec.seed = seed;
            let world = spec
                .world(seed)
                .map_err(|e| fail(RdStatus::InvalidArgument, e.to_string()))?;
            let k = spec.k.radius(n);
            let inner = Simulation::new(world, policy, adversary.build(seed), k, spec.mode)
                .map_err(|e| fail(RdStatus::ScenarioError, e.to_string()))?;
            Ok(RdSimulation { inner })
        };
        match build() {
            Ok(sim) => {
                *out = Box::into_raw(Box::new(sim));
                RdStatus::Ok
            }
            Err(status) => status,
        }
    })
}

/// Plays one round. `dispersed` may be null.
///
/// # Safety
/// `sim` must come from [`rd_simulation_new`]; `dispersed` must be null or
/// writable.
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_step(
    sim: *mut RdSimulation,
    dispersed: *mut bool,
) -> RdStatus {
    guarded(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(RdStatus::NullPointer, "simulation is null");
        };
        if let Err(e) = sim.inner.step() {
            return fail(RdStatus::ScenarioError, e.to_string());
        }
        if !dispersed.is_null() {
            *dispersed = sim.inner.is_dispersed();
        }
        RdStatus::Ok
    })
}

/// Steps until dispersion or until `max_rounds` rounds have run in total.
///
/// # Safety
/// As for [`rd_simulation_step`]; `rounds` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_run(
    sim: *mut RdSimulation,
    max_rounds: usize,
    rounds: *mut usize,
    dispersed: *mut bool,
) -> RdStatus {
    guarded(|| {
        let Some(sim) = sim.as_mut() else {
            return fail(RdStatus::NullPointer, "simulation is null");
        };
        while !sim.inner.is_dispersed() && sim.inner.round() < max_rounds {
            if let Err(e) = sim.inner.step() {
                return fail(RdStatus::ScenarioError, e.to_string());
            }
        }
        if !rounds.is_null() {
            *rounds = sim.inner.round();
        }
        if !dispersed.is_null() {
            *dispersed = sim.inner.is_dispersed();
        }
        RdStatus::Ok
    })
}

/// Rounds played so far, or 0 for a null handle.
///
/// # Safety
/// `sim` must be null or come from [`rd_simulation_new`].
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_round(sim: *const RdSimulation) -> usize {
    sim.as_ref().map_or(0, |s| s.inner.round())
}

/// Copies the robots-per-node counts into `buf`, which must hold `n` entries.
///
/// # Safety
/// `sim` must come from [`rd_simulation_new`]; `buf` must point to `len`
/// writable elements.
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_multiplicities(
    sim: *const RdSimulation,
    buf: *mut usize,
    len: usize,
) -> RdStatus {
    guarded(|| {
        let Some(sim) = sim.as_ref() else {
            return fail(RdStatus::NullPointer, "simulation is null");
        };
        if buf.is_null() {
            return fail(RdStatus::NullPointer, "buffer is null");
        }
        let m = sim.inner.world().config().multiplicities();
        if len < m.len() {
            return fail(
                RdStatus::BufferTooSmall,
                format!("buffer holds {len} entries, ring has {}", m.len()),
            );
        }
        std::slice::from_raw_parts_mut(buf, m.len()).copy_from_slice(&m);
        RdStatus::Ok
    })
}

/// # Safety
/// `sim` must be null or come from [`rd_simulation_new`], and not be used
/// afterwards.
#[no_mangle]
pub unsafe extern "C" fn rd_simulation_free(sim: *mut RdSimulation) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Exhaustively checks that `policy` disperses within `bound` rounds on a ring
/// of `n` nodes. `worst_case` receives `SIZE_MAX` when some run never
/// disperses. `mode` may be null for the policy's usual mode.
///
/// # Safety
/// Strings must be NUL-terminated (or null for `mode`); `worst_case` and
/// `pass` must be writable.
#[no_mangle]
pub unsafe extern "C" fn rd_verify_worst_case(
    policy: *const c_char,
    mode: *const c_char,
    n: usize,
    bound: usize,
    worst_case: *mut usize,
    pass: *mut bool,
) -> RdStatus {
    guarded(|| {
        if worst_case.is_null() || pass.is_null() {
            return fail(RdStatus::NullPointer, "output pointer is null");
        }
        let run = || -> Result<(), RdStatus> {
            let policy: PolicyKind = parse(policy, "policy")?;
            let mode: Mode = if mode.is_null() {
                default_mode(policy)
            } else {
                parse(mode, "mode")?
            };
            let (report, _) = verify_worst_case(policy, mode, n, bound, SearchOptions::default())
                .map_err(|e| {
                let status = match e {
                    VerifyError::Guard { .. } => RdStatus::GuardExceeded,
                    _ => RdStatus::ScenarioError,
                };
                fail(status, e.to_string())
            })?;
            *worst_case = report.worst_case.unwrap_or(usize::MAX);
            *pass = report.pass;
            Ok(())
        };
        run().err().unwrap_or(RdStatus::Ok)
    })
}
