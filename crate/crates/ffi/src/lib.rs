//! C ABI for the exact-majority protocol library.
//!
//! The surface is handle-based: `popmaj_sim_new` builds a simulation from
//! an initial-configuration kind (or a snapshot file via `file:PATH`),
//! `popmaj_sim_run` drives it to silence or a budget, and accessors read
//! outputs and silence state. `popmaj_verify` runs the bounded exhaustive
//! checker. Every entry point returns a `PopmajStatus`; results travel
//! through out-parameters. Handles must be released with
//! `popmaj_sim_free`.
//!
//! The generated header lives at `include/popmaj.h`.

use std::ffi::{c_char, CStr};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;

use popmaj::engine::snapshot;
use popmaj::harness::{self, InitKind};
use popmaj::verifier::{self, VerifierCaps, VerifierError};
use popmaj::{majority_oracle, Configuration, Input, Opinion, Params, RunOptions, UniformScheduler};

/// Result codes for every FFI entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PopmajStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    IoError = 4,
    /// The verifier's configuration space exceeds its hard limit.
    TooLarge = 5,
    /// The simulation exhausted its interaction budget without silencing.
    DidNotSilence = 6,
    InternalError = 7,
}

/// Opaque simulation handle: one population, its parameters, and a seeded
/// scheduler.
pub struct PopmajSim {
    params: Params,
    config: Configuration,
    scheduler: UniformScheduler,
    interactions_run: u64,
}

/// Trial results in plain C types. `silenced` is false when the budget ran
/// out; `interactions` then holds the budget.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PopmajTrialResult {
    pub n: u32,
    pub num_a: u32,
    pub silenced: bool,
    pub interactions: u64,
    pub parallel_time: f64,
    pub resets: u64,
    /// All outputs equal the majority opinion of the inputs.
    pub correct: bool,
}

/// Verifier results in plain C types.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct PopmajVerifyResult {
    pub state_count: u64,
    pub configuration_count: u64,
    pub terminal_scc_count: u64,
    pub all_terminal_silent_correct: bool,
    pub violation_count: u64,
}

/// ABI revision; bump on any breaking change to this header.
#[no_mangle]
pub extern "C" fn popmaj_abi_version() -> u32 {
    1
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn popmaj_status_message(status: PopmajStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        PopmajStatus::Ok => b"ok\0",
        PopmajStatus::NullArgument => b"null argument\0",
        PopmajStatus::InvalidArgument => b"invalid argument\0",
        PopmajStatus::InvalidUtf8 => b"invalid utf-8\0",
        PopmajStatus::IoError => b"i/o error\0",
        PopmajStatus::TooLarge => b"state space too large\0",
        PopmajStatus::DidNotSilence => b"interaction budget exhausted\0",
        PopmajStatus::InternalError => b"internal error\0",
    };
    msg.as_ptr() as *const c_char
}

fn guard<F: FnOnce() -> PopmajStatus>(f: F) -> PopmajStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(status) => status,
        Err(_) => PopmajStatus::InternalError,
    }
}

unsafe fn cstr<'a>(ptr: *const c_char) -> Result<&'a str, PopmajStatus> {
    if ptr.is_null() {
        return Err(PopmajStatus::NullArgument);
    }
    CStr::from_ptr(ptr)
        .to_str()
        .map_err(|_| PopmajStatus::InvalidUtf8)
}

/// Create a simulation.
///
/// `init_kind` is one of `uniform_random_state`, `all_unsettled`,
/// `mid_reset`, `wrong_answers`, `duplicate_ranks`, `lb_flip`, or
/// `file:PATH`. `t_rank` of 0 selects the default. On success `*out`
/// owns the handle.
///
/// # Safety
/// `init_kind` must be a valid NUL-terminated string and `out` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_new(
    n: u32,
    num_a: u32,
    t_rank: u32,
    seed: u64,
    init_kind: *const c_char,
    out: *mut *mut PopmajSim,
) -> PopmajStatus {
    guard(|| {
        if out.is_null() {
            return PopmajStatus::NullArgument;
        }
        let kind_str = match cstr(init_kind) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let kind = match InitKind::parse(kind_str) {
            Ok(kind) => kind,
            Err(_) => return PopmajStatus::InvalidArgument,
        };
        let t_rank = if t_rank == 0 {
            popmaj::engine::DEFAULT_T_RANK
        } else {
            t_rank
        };
        let Ok(params) = Params::new(n, t_rank, seed) else {
            return PopmajStatus::InvalidArgument;
        };
        let gen_seed = popmaj::SimRng::derive(seed, &[0]);
        let sched_seed = popmaj::SimRng::derive(seed, &[1]);
        let config = match harness::generate(&kind, n, num_a, gen_seed, &params) {
            Ok(config) => config,
            Err(harness::HarnessError::Engine(popmaj::EngineError::Io(_))) => {
                return PopmajStatus::IoError
            }
            Err(_) => return PopmajStatus::InvalidArgument,
        };
        let Ok(scheduler) = UniformScheduler::new(n, sched_seed) else {
            return PopmajStatus::InvalidArgument;
        };
        let sim = Box::new(PopmajSim {
            params,
            config,
            scheduler,
            interactions_run: 0,
        });
        *out = Box::into_raw(sim);
        PopmajStatus::Ok
    })
}

/// Release a handle. A null pointer is a no-op.
///
/// # Safety
/// `sim` must have come from `popmaj_sim_new` and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_free(sim: *mut PopmajSim) {
    if !sim.is_null() {
        drop(Box::from_raw(sim));
    }
}

/// Total interactions executed so far on this handle.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_interactions(
    sim: *const PopmajSim,
    out: *mut u64,
) -> PopmajStatus {
    guard(|| {
        let Some(sim) = sim.as_ref() else {
            return PopmajStatus::NullArgument;
        };
        if out.is_null() {
            return PopmajStatus::NullArgument;
        }
        *out = sim.interactions_run;
        PopmajStatus::Ok
    })
}

/// Drive the simulation until silence or until `max_interactions` more
/// interactions have run (0 selects the default budget). The final
/// configuration stays in the handle; `result` may be null if only the
/// status matters.
///
/// # Safety
/// `sim` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_run(
    sim: *mut PopmajSim,
    max_interactions: u64,
    result: *mut PopmajTrialResult,
) -> PopmajStatus {
    guard(|| {
        let Some(sim) = sim.as_mut() else {
            return PopmajStatus::NullArgument;
        };
        let budget = if max_interactions == 0 {
            harness::default_max_interactions(sim.params.n)
        } else {
            max_interactions
        };
        let mut opts = RunOptions::new(budget);
        opts.collect_phases = false;
        let outcome = match popmaj::run(&sim.config, &sim.params, &mut sim.scheduler, &opts) {
            Ok(outcome) => outcome,
            Err(_) => return PopmajStatus::InvalidArgument,
        };
        sim.interactions_run += outcome.interactions_executed;
        let oracle = majority_oracle(sim.config.inputs()).expect("non-empty population");
        let correct = outcome.final_config.outputs().iter().all(|o| *o == oracle);
        let silenced = outcome.interactions_to_silence.is_some();
        if !result.is_null() {
            *result = PopmajTrialResult {
                n: sim.params.n,
                num_a: sim.config.num_a(),
                silenced,
                interactions: outcome.interactions_to_silence.unwrap_or(budget),
                parallel_time: outcome
                    .interactions_to_silence
                    .map(|i| i as f64 / sim.params.n as f64)
                    .unwrap_or(f64::NAN),
                resets: outcome.resets_triggered,
                correct,
            };
        }
        sim.config = outcome.final_config;
        if silenced {
            PopmajStatus::Ok
        } else {
            PopmajStatus::DidNotSilence
        }
    })
}

/// Current output of one agent: 0 = A, 1 = B, 2 = tie.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_output(
    sim: *const PopmajSim,
    agent: u32,
    out: *mut u8,
) -> PopmajStatus {
    guard(|| {
        let Some(sim) = sim.as_ref() else {
            return PopmajStatus::NullArgument;
        };
        if out.is_null() {
            return PopmajStatus::NullArgument;
        }
        if agent as usize >= sim.config.len() {
            return PopmajStatus::InvalidArgument;
        }
        let opinion = popmaj::output(
            &sim.config.state(agent as usize),
            sim.config.input(agent as usize),
        );
        *out = match opinion {
            Opinion::A => 0,
            Opinion::B => 1,
            Opinion::T => 2,
        };
        PopmajStatus::Ok
    })
}

/// Whether the current configuration is silent (no interaction can change
/// any state). O(n^2) exact check.
///
/// # Safety
/// `sim` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_is_silent(
    sim: *const PopmajSim,
    out: *mut bool,
) -> PopmajStatus {
    guard(|| {
        let Some(sim) = sim.as_ref() else {
            return PopmajStatus::NullArgument;
        };
        if out.is_null() {
            return PopmajStatus::NullArgument;
        }
        *out = popmaj::is_silent(&sim.config, &sim.params);
        PopmajStatus::Ok
    })
}

/// Write the current configuration as a snapshot file.
///
/// # Safety
/// `sim` must be a live handle and `path` a valid NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn popmaj_sim_save_snapshot(
    sim: *const PopmajSim,
    path: *const c_char,
) -> PopmajStatus {
    guard(|| {
        let Some(sim) = sim.as_ref() else {
            return PopmajStatus::NullArgument;
        };
        let path = match cstr(path) {
            Ok(p) => p,
            Err(status) => return status,
        };
        match snapshot::save_snapshot(&sim.config, Path::new(path)) {
            Ok(()) => PopmajStatus::Ok,
            Err(_) => PopmajStatus::IoError,
        }
    })
}

/// Exhaustively verify stabilization for the input string (over {A, B})
/// with the given counter caps.
///
/// # Safety
/// `inputs` must be a valid NUL-terminated string and `result` a valid
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn popmaj_verify(
    inputs: *const c_char,
    cap_reset: u32,
    cap_wait: u32,
    cap_timer: u32,
    result: *mut PopmajVerifyResult,
) -> PopmajStatus {
    guard(|| {
        if result.is_null() {
            return PopmajStatus::NullArgument;
        }
        let raw = match cstr(inputs) {
            Ok(s) => s,
            Err(status) => return status,
        };
        let parsed: Result<Vec<Input>, ()> = raw
            .chars()
            .map(|c| match c {
                'A' => Ok(Input::A),
                'B' => Ok(Input::B),
                _ => Err(()),
            })
            .collect();
        let Ok(input_vec) = parsed else {
            return PopmajStatus::InvalidArgument;
        };
        let caps = VerifierCaps::new(cap_reset, cap_wait, cap_timer);
        match verifier::check_stabilization(input_vec.len() as u32, &input_vec, &caps) {
            Ok(report) => {
                *result = PopmajVerifyResult {
                    state_count: report.state_count as u64,
                    configuration_count: report.reachable_count as u64,
                    terminal_scc_count: report.terminal_scc_count as u64,
                    all_terminal_silent_correct: report.all_terminal_silent_correct,
                    violation_count: report.bad_silent_configs.len() as u64,
                };
                PopmajStatus::Ok
            }
            Err(VerifierError::StateSpaceTooLarge { .. }) => PopmajStatus::TooLarge,
            Err(_) => PopmajStatus::InvalidArgument,
        }
    })
}
