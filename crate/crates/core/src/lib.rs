//! Silent self-stabilizing exact-majority population protocol: the agent
//! transition rules, a seeded uniform-scheduler simulator measuring
//! parallel silence time from adversarial starts, a bounded exhaustive
//! verifier for tiny populations, and an experiment harness with CSV/JSON
//! emission.
//!
//! Every agent holds an immutable opinion, `A` or `B`. From *any* initial
//! state assignment the population converges, with probability 1, to a
//! configuration where no state ever changes again and every agent outputs
//! the true majority opinion (`T` on a tie). The protocol needs knowledge
//! of `n` and uses O(n) states per agent: a self-stabilizing ranking layer
//! assigns distinct ranks in `[1, n]`, states are sorted so A-opinions
//! occupy the low ranks, the median rank reads off the answer, and a
//! timer-gated gossip wave both distributes the answer and restarts
//! everything when it catches an inconsistency.

pub mod engine;
pub mod harness;
pub mod majority;
pub mod ranking;
pub mod verifier;

pub use engine::{
    delta, is_silent, majority_oracle, output, run, step, AgentState, Answer, ChildMask,
    Configuration, EngineError, Input, InteractionPair, Leader, Opinion, Params, Role,
    RunOptions, RunOutcome, Scheduler, ScriptedScheduler, SimRng, UniformScheduler,
};
pub use harness::{
    generate, run_trial, summarize, sweep, InitKind, SweepSpec, TraceMetrics,
};
pub use majority::{decide, is_silent_shape, phase, PhasePredicates};
pub use ranking::{delta_ranking, detect_all_settled, trigger_reset, ResetCause, ResetOutcome};
pub use verifier::{
    audit_silent_set, check_stabilization, enumerate_fixpoints, enumerate_states, SilentAudit,
    VerifierCaps, VerifierError, VerifierReport,
};
