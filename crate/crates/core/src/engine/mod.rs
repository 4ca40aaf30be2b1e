//! Core population-protocol machinery: agent states, configurations, the
//! joint transition function, schedulers, the execution loop, and silence
//! detection.
//!
//! A population is `n` anonymous agents on a complete interaction graph.
//! Each agent carries an immutable binary input and a mutable state. A
//! scheduler picks one ordered pair `(initiator, responder)` per step and
//! the pair's states are rewritten by [`delta`]. An execution is silent
//! once no ordered pair can change any state.

pub mod rng;
pub mod snapshot;

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::majority::{self, PhaseTracker};
use crate::ranking::{self, ResetCause, ResetOutcome};

pub use rng::{Scheduler, ScriptedScheduler, SimRng, UniformScheduler};

/// Errors from engine-level construction and execution.
#[derive(Debug, Error)]
pub enum EngineError {
    #[error("population must have at least 2 agents, got {0}")]
    PopulationTooSmall(u64),
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("invalid interaction pair ({initiator},{responder}) for n={n}")]
    InvalidPair { initiator: u32, responder: u32, n: u32 },
    #[error("inputs vector is empty")]
    EmptyInputs,
    #[error("vector length {got} does not match n={want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("agent {index} state out of range: {reason}")]
    StateOutOfRange { index: usize, reason: String },
    #[error("snapshot line {line}: {reason}")]
    Snapshot { line: usize, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// An agent's immutable opinion. Inputs never change during an execution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Input {
    A,
    B,
}

/// The output alphabet; `T` encodes a tie.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Opinion {
    A,
    B,
    T,
}

/// The answer variable an agent carries; `Phi` is "no answer yet".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Answer {
    Phi,
    T,
    A,
    B,
}

impl Answer {
    /// The answer corresponding to an input opinion.
    pub fn from_input(input: Input) -> Answer {
        match input {
            Input::A => Answer::A,
            Input::B => Answer::B,
        }
    }

    /// Whether this answer literally equals the given opinion. `Phi` matches
    /// nothing (it merely *outputs* as a tie).
    pub fn matches(self, opinion: Opinion) -> bool {
        matches!(
            (self, opinion),
            (Answer::A, Opinion::A) | (Answer::B, Opinion::B) | (Answer::T, Opinion::T)
        )
    }
}

/// Protocol role. Variables of the other roles are kept at canonical zero
/// values so state equality and state counting stay well defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Role {
    Resetting,
    Settled,
    Unsettled,
}

/// Leader flag used while resetting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Leader {
    L,
    F,
}

/// Two-bit set recording which child ranks a settled agent has handed out.
/// Bit 0 is rank `2i`, bit 1 is rank `2i + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ChildMask(u8);

impl ChildMask {
    pub const EMPTY: ChildMask = ChildMask(0);
    pub const LEFT: u8 = 0b01;
    pub const RIGHT: u8 = 0b10;

    pub fn from_bits(bits: u8) -> Option<ChildMask> {
        (bits <= 0b11).then_some(ChildMask(bits))
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn has_left(self) -> bool {
        self.0 & Self::LEFT != 0
    }

    pub fn has_right(self) -> bool {
        self.0 & Self::RIGHT != 0
    }

    pub fn with_left(self) -> ChildMask {
        ChildMask(self.0 | Self::LEFT)
    }

    pub fn with_right(self) -> ChildMask {
        ChildMask(self.0 | Self::RIGHT)
    }
}

/// Full per-agent state.
///
/// Role-irrelevant fields are normalized: `leader = F` and `resetcount = 0`
/// unless resetting, `waitcount = 0` unless unsettled, `rank = 1` and
/// `childmask = ∅` unless settled. `answer` and `timer` are live in every
/// role. All constructors produce canonical states; [`delta`] preserves
/// canonicity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AgentState {
    pub role: Role,
    pub leader: Leader,
    pub resetcount: u32,
    pub waitcount: u32,
    pub rank: u32,
    pub childmask: ChildMask,
    pub answer: Answer,
    pub timer: u32,
}

impl AgentState {
    /// A resetting agent with `answer = Phi` and `timer = 0`.
    pub fn resetting(leader: Leader, resetcount: u32) -> AgentState {
        AgentState {
            role: Role::Resetting,
            leader,
            resetcount,
            waitcount: 0,
            rank: 1,
            childmask: ChildMask::EMPTY,
            answer: Answer::Phi,
            timer: 0,
        }
    }

    /// A settled agent with `answer = Phi` and `timer = 0`.
    pub fn settled(rank: u32, childmask: ChildMask) -> AgentState {
        AgentState {
            role: Role::Settled,
            leader: Leader::F,
            resetcount: 0,
            waitcount: 0,
            rank,
            childmask,
            answer: Answer::Phi,
            timer: 0,
        }
    }

    /// An unsettled agent with `answer = Phi` and `timer = 0`.
    pub fn unsettled(waitcount: u32) -> AgentState {
        AgentState {
            role: Role::Unsettled,
            leader: Leader::F,
            resetcount: 0,
            waitcount,
            rank: 1,
            childmask: ChildMask::EMPTY,
            answer: Answer::Phi,
            timer: 0,
        }
    }

    pub fn with_answer(mut self, answer: Answer) -> AgentState {
        self.answer = answer;
        self
    }

    pub fn with_timer(mut self, timer: u32) -> AgentState {
        self.timer = timer;
        self
    }

    /// Check canonical zeros and field ranges against `params`.
    pub fn validate(&self, params: &Params) -> Result<(), String> {
        match self.role {
            Role::Resetting => {
                if self.resetcount > params.r_max {
                    return Err(format!(
                        "resetcount {} exceeds R_max {}",
                        self.resetcount, params.r_max
                    ));
                }
                if self.waitcount != 0 || self.rank != 1 || self.childmask != ChildMask::EMPTY {
                    return Err("non-canonical fields on resetting agent".into());
                }
            }
            Role::Settled => {
                if self.rank < 1 || self.rank > params.n {
                    return Err(format!("rank {} outside [1, {}]", self.rank, params.n));
                }
                if self.leader != Leader::F || self.resetcount != 0 || self.waitcount != 0 {
                    return Err("non-canonical fields on settled agent".into());
                }
            }
            Role::Unsettled => {
                if self.waitcount > params.w_max {
                    return Err(format!(
                        "waitcount {} exceeds W_max {}",
                        self.waitcount, params.w_max
                    ));
                }
                if self.leader != Leader::F
                    || self.resetcount != 0
                    || self.rank != 1
                    || self.childmask != ChildMask::EMPTY
                {
                    return Err("non-canonical fields on unsettled agent".into());
                }
            }
        }
        if self.timer > params.timer_max {
            return Err(format!(
                "timer {} exceeds timer_max {}",
                self.timer, params.timer_max
            ));
        }
        Ok(())
    }
}

/// Ordered interacting pair; the initiator/responder distinction breaks
/// symmetry.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct InteractionPair {
    pub initiator: u32,
    pub responder: u32,
}

impl InteractionPair {
    pub fn new(initiator: u32, responder: u32) -> InteractionPair {
        InteractionPair {
            initiator,
            responder,
        }
    }

    pub fn validate(&self, n: u32) -> Result<(), EngineError> {
        if self.initiator == self.responder || self.initiator >= n || self.responder >= n {
            return Err(EngineError::InvalidPair {
                initiator: self.initiator,
                responder: self.responder,
                n,
            });
        }
        Ok(())
    }
}

/// Protocol parameters.
///
/// `r_max` and `w_max` default from `n`; `timer_max` is pinned to
/// `7 * (t_rank + 4)`. Verification builds shrink the counters through
/// [`Params::with_caps`]; the transition rules only ever reference the
/// fields symbolically, so capping changes no logic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Params {
    pub n: u32,
    pub t_rank: u32,
    pub r_max: u32,
    pub w_max: u32,
    pub timer_max: u32,
    pub seed: u64,
}

/// Default silence-time constant for the ranking layer.
pub const DEFAULT_T_RANK: u32 = 16;

impl Params {
    /// Parameters with default counter sizes.
    pub fn new(n: u32, t_rank: u32, seed: u64) -> Result<Params, EngineError> {
        if n < 2 {
            return Err(EngineError::PopulationTooSmall(n as u64));
        }
        if t_rank == 0 {
            return Err(EngineError::BadParameter("t_rank must be positive".into()));
        }
        Ok(Params {
            n,
            t_rank,
            r_max: Params::default_r_max(n),
            w_max: Params::default_w_max(n),
            timer_max: Params::timer_max_for(t_rank),
            seed,
        })
    }

    /// `R_max = ceil(60 · ln n)`.
    pub fn default_r_max(n: u32) -> u32 {
        (60.0 * (n as f64).ln()).ceil() as u32
    }

    /// `W_max = max(R_max, 8n)`.
    ///
    /// The wait counter must survive the longest legitimate wait for a rank:
    /// the final rank assignment takes ~n²/2 interactions, during which the
    /// waiting agent participates in ~n of them, and the full ranking costs
    /// it ~3n unproductive meetings. A logarithmic budget times out routinely
    /// once n is in the low hundreds; 8n keeps spurious restarts rare at any
    /// scale while the state count stays O(n).
    pub fn default_w_max(n: u32) -> u32 {
        Params::default_r_max(n).max(8 * n)
    }

    /// `timer_max = 7 · (t_rank + 4)`.
    pub fn timer_max_for(t_rank: u32) -> u32 {
        7 * (t_rank + 4)
    }

    /// Replace counter bounds with small caps for exhaustive verification.
    pub fn with_caps(mut self, r_max: u32, w_max: u32, timer_max: u32) -> Result<Params, EngineError> {
        if r_max < 1 || w_max < 1 || timer_max < 1 {
            return Err(EngineError::BadParameter("caps must be >= 1".into()));
        }
        self.r_max = r_max;
        self.w_max = w_max;
        self.timer_max = timer_max;
        Ok(self)
    }

    /// `⌈n/2⌉`, the deciding rank.
    pub fn mid_rank(&self) -> u32 {
        self.n.div_ceil(2)
    }

    pub fn n_usize(&self) -> usize {
        self.n as usize
    }
}

/// Joint (input, state) assignment of all agents. Inputs are immutable for
/// the lifetime of the value; only [`step`] and the run loop rewrite states.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    inputs: Vec<Input>,
    states: Vec<AgentState>,
}

impl Configuration {
    pub fn new(inputs: Vec<Input>, states: Vec<AgentState>) -> Result<Configuration, EngineError> {
        if inputs.is_empty() {
            return Err(EngineError::EmptyInputs);
        }
        if inputs.len() != states.len() {
            return Err(EngineError::LengthMismatch {
                got: states.len(),
                want: inputs.len(),
            });
        }
        Ok(Configuration { inputs, states })
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn inputs(&self) -> &[Input] {
        &self.inputs
    }

    pub fn states(&self) -> &[AgentState] {
        &self.states
    }

    pub fn input(&self, agent: usize) -> Input {
        self.inputs[agent]
    }

    pub fn state(&self, agent: usize) -> AgentState {
        self.states[agent]
    }

    /// Replace one agent's state. Meant for generators and tests; the
    /// execution path goes through [`step`].
    pub fn set_state(&mut self, agent: usize, state: AgentState) {
        self.states[agent] = state;
    }

    /// The agent-wise outputs.
    pub fn outputs(&self) -> Vec<Opinion> {
        self.states
            .iter()
            .zip(&self.inputs)
            .map(|(s, x)| output(s, *x))
            .collect()
    }

    /// Validate length against `params.n` and every state's field ranges.
    pub fn validate(&self, params: &Params) -> Result<(), EngineError> {
        if self.len() != params.n_usize() {
            return Err(EngineError::LengthMismatch {
                got: self.len(),
                want: params.n_usize(),
            });
        }
        for (i, s) in self.states.iter().enumerate() {
            s.validate(params)
                .map_err(|reason| EngineError::StateOutOfRange { index: i, reason })?;
        }
        Ok(())
    }

    pub fn num_a(&self) -> u32 {
        self.inputs.iter().filter(|x| **x == Input::A).count() as u32
    }
}

/// Output function: a tie while no answer is held, otherwise the answer.
pub fn output(state: &AgentState, _input: Input) -> Opinion {
    match state.answer {
        Answer::Phi | Answer::T => Opinion::T,
        Answer::A => Opinion::A,
        Answer::B => Opinion::B,
    }
}

/// The ground-truth majority opinion of an input vector.
pub fn majority_oracle(inputs: &[Input]) -> Result<Opinion, EngineError> {
    if inputs.is_empty() {
        return Err(EngineError::EmptyInputs);
    }
    let a = inputs.iter().filter(|x| **x == Input::A).count();
    let b = inputs.len() - a;
    Ok(match a.cmp(&b) {
        std::cmp::Ordering::Greater => Opinion::A,
        std::cmp::Ordering::Less => Opinion::B,
        std::cmp::Ordering::Equal => Opinion::T,
    })
}

/// The joint transition function: the ranking layer first, then the
/// majority layer over the updated states, with the interaction's lines
/// applied sequentially so later lines see earlier effects.
///
/// Rejects states that violate field ranges; such states signal corrupted
/// construction, not an adversarial configuration (adversarial states are
/// in-range by definition).
pub fn delta(
    pair_states: ((AgentState, Input), (AgentState, Input)),
    params: &Params,
) -> Result<(AgentState, AgentState), EngineError> {
    let ((s0, x0), (s1, x1)) = pair_states;
    s0.validate(params)
        .map_err(|reason| EngineError::StateOutOfRange { index: 0, reason })?;
    s1.validate(params)
        .map_err(|reason| EngineError::StateOutOfRange { index: 1, reason })?;
    let (t0, t1, _) = delta_inner(s0, x0, s1, x1, params);
    Ok((t0, t1))
}

/// [`delta`] plus the reset outcome of the interaction. States must already
/// be valid.
pub fn delta_with_outcome(
    s0: AgentState,
    x0: Input,
    s1: AgentState,
    x1: Input,
    params: &Params,
) -> (AgentState, AgentState, ResetOutcome) {
    delta_inner(s0, x0, s1, x1, params)
}

pub(crate) fn delta_inner(
    s0: AgentState,
    x0: Input,
    s1: AgentState,
    x1: Input,
    params: &Params,
) -> (AgentState, AgentState, ResetOutcome) {
    let pre = (s0, s1);
    let (r0, r1, ranking_outcome) = ranking::delta_ranking((s0, s1), params);
    let out = majority::apply_majority_layer(pre, (r0, r1), (x0, x1), params);
    let outcome = if out.triggered_reset {
        ResetOutcome::triggered(ResetCause::MajorityLayer)
    } else {
        ranking_outcome
    };
    (out.states.0, out.states.1, outcome)
}

/// Apply one interaction. Only the two named agents' states may change;
/// inputs are untouched.
pub fn step(
    config: &Configuration,
    pair: InteractionPair,
    params: &Params,
) -> Result<Configuration, EngineError> {
    pair.validate(config.len() as u32)?;
    let mut next = config.clone();
    apply_step_in_place(&mut next, pair, params);
    Ok(next)
}

/// In-place step for hot loops. Returns the reset outcome and whether each
/// participant's state changed.
pub(crate) fn apply_step_in_place(
    config: &mut Configuration,
    pair: InteractionPair,
    params: &Params,
) -> StepEffect {
    let u = pair.initiator as usize;
    let v = pair.responder as usize;
    let (s0, s1) = (config.states[u], config.states[v]);
    let (t0, t1, outcome) = delta_inner(s0, config.inputs[u], s1, config.inputs[v], params);
    let changed = [t0 != s0, t1 != s1];
    config.states[u] = t0;
    config.states[v] = t1;
    StepEffect { changed, outcome }
}

pub(crate) struct StepEffect {
    pub changed: [bool; 2],
    pub outcome: ResetOutcome,
}

/// Exact silence test: true iff every ordered pair leaves both states
/// unchanged. O(n²) delta evaluations.
pub fn is_silent(config: &Configuration, params: &Params) -> bool {
    let n = config.len();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (t0, t1, _) = delta_inner(
                config.states[u],
                config.inputs[u],
                config.states[v],
                config.inputs[v],
                params,
            );
            if t0 != config.states[u] || t1 != config.states[v] {
                return false;
            }
        }
    }
    true
}

/// First-hit interaction indices for the nested configuration sets tracked
/// during a run. `None` means the predicate never held.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTimes {
    pub s_rank: Option<u64>,
    pub s_swap: Option<u64>,
    pub t_swap: Option<u64>,
    pub s_dec: Option<u64>,
    pub s_out: Option<u64>,
    pub s_tim: Option<u64>,
    pub s_em: Option<u64>,
}

impl PhaseTimes {
    fn absorb(&mut self, preds: &majority::PhasePredicates, at: u64) {
        fn hit(slot: &mut Option<u64>, cond: bool, at: u64) {
            if slot.is_none() && cond {
                *slot = Some(at);
            }
        }
        hit(&mut self.s_rank, preds.in_s_rank, at);
        hit(&mut self.s_swap, preds.in_s_swap, at);
        hit(&mut self.t_swap, preds.in_t_swap, at);
        hit(&mut self.s_dec, preds.in_s_dec, at);
        hit(&mut self.s_out, preds.in_s_out, at);
        hit(&mut self.s_tim, preds.in_s_tim, at);
        hit(&mut self.s_em, preds.in_s_em, at);
    }
}

/// Knobs for [`run`].
#[derive(Debug, Clone)]
pub struct RunOptions {
    pub max_interactions: u64,
    /// Record first-hit times of the phase predicates.
    pub collect_phases: bool,
    /// Collect the set of distinct agent states observed (for state-census
    /// audits).
    pub collect_census: bool,
}

impl RunOptions {
    pub fn new(max_interactions: u64) -> RunOptions {
        RunOptions {
            max_interactions,
            collect_phases: true,
            collect_census: false,
        }
    }
}

/// Result of one execution.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub final_config: Configuration,
    /// First interaction index at which the configuration is silent; `None`
    /// if the budget ran out first ("did not silence").
    pub interactions_to_silence: Option<u64>,
    pub interactions_executed: u64,
    /// Interactions in which some reset was newly triggered.
    pub resets_triggered: u64,
    pub phase_times: PhaseTimes,
    pub observed_states: Option<HashSet<AgentState>>,
}

impl RunOutcome {
    /// Silence time in parallel-time units (interactions / n).
    pub fn parallel_time(&self, n: u32) -> Option<f64> {
        self.interactions_to_silence.map(|i| i as f64 / n as f64)
    }
}

/// Drive an execution until silence or until the interaction budget is
/// exhausted.
///
/// Silence is detected with an incrementally maintained shape predicate that
/// agrees with [`is_silent`] (equality is itself assert-checked by the
/// verifier's oracle-agreement audit), so the reported index is the exact
/// first silent interaction. The detected configuration is re-confirmed with
/// the O(n²) exact check before the loop exits.
pub fn run(
    config: &Configuration,
    params: &Params,
    scheduler: &mut dyn Scheduler,
    opts: &RunOptions,
) -> Result<RunOutcome, EngineError> {
    config.validate(params)?;
    if params.n < 2 {
        return Err(EngineError::PopulationTooSmall(params.n as u64));
    }
    let mut current = config.clone();
    let mut tracker = PhaseTracker::new(&current, params);
    let mut phase_times = PhaseTimes::default();
    let mut census: Option<HashSet<AgentState>> = if opts.collect_census {
        let mut set = HashSet::new();
        set.extend(current.states().iter().copied());
        Some(set)
    } else {
        None
    };
    if opts.collect_phases {
        phase_times.absorb(&tracker.predicates(), 0);
    }

    let mut resets = 0u64;
    let mut executed = 0u64;
    let mut silent_at: Option<u64> = None;

    if tracker.predicates().in_s_em && is_silent(&current, params) {
        silent_at = Some(0);
    } else {
        while executed < opts.max_interactions {
            let Some(pair) = scheduler.next_pair() else {
                break;
            };
            pair.validate(params.n)?;
            let before = [
                current.states[pair.initiator as usize],
                current.states[pair.responder as usize],
            ];
            let effect = apply_step_in_place(&mut current, pair, params);
            executed += 1;
            if effect.outcome.triggered {
                resets += 1;
            }
            let mut changes: [majority::AgentDelta; 2] = [majority::AgentDelta {
                agent: 0,
                before: before[0],
                after: before[0],
            }; 2];
            let mut num_changes = 0;
            for (i, agent) in [pair.initiator as usize, pair.responder as usize]
                .into_iter()
                .enumerate()
            {
                if effect.changed[i] {
                    let after = current.states[agent];
                    changes[num_changes] = majority::AgentDelta {
                        agent,
                        before: before[i],
                        after,
                    };
                    num_changes += 1;
                    if let Some(set) = census.as_mut() {
                        set.insert(after);
                    }
                }
            }
            if num_changes > 0 {
                tracker.apply(&changes[..num_changes], &current);
            }
            if opts.collect_phases {
                phase_times.absorb(&tracker.predicates(), executed);
            }
            if tracker.predicates().in_s_em && is_silent(&current, params) {
                silent_at = Some(executed);
                break;
            }
        }
    }

    Ok(RunOutcome {
        final_config: current,
        interactions_to_silence: silent_at,
        interactions_executed: executed,
        resets_triggered: resets,
        phase_times,
        observed_states: census,
    })
}

impl fmt::Display for Input {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Input::A => write!(f, "A"),
            Input::B => write!(f, "B"),
        }
    }
}

impl FromStr for Input {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => Ok(Input::A),
            "B" => Ok(Input::B),
            other => Err(format!("invalid input {other:?}, expected A or B")),
        }
    }
}

impl fmt::Display for Opinion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Opinion::A => write!(f, "A"),
            Opinion::B => write!(f, "B"),
            Opinion::T => write!(f, "T"),
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Answer::Phi => write!(f, "Phi"),
            Answer::T => write!(f, "T"),
            Answer::A => write!(f, "A"),
            Answer::B => write!(f, "B"),
        }
    }
}

impl FromStr for Answer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Phi" => Ok(Answer::Phi),
            "T" => Ok(Answer::T),
            "A" => Ok(Answer::A),
            "B" => Ok(Answer::B),
            other => Err(format!("invalid answer {other:?}")),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Resetting => write!(f, "Resetting"),
            Role::Settled => write!(f, "Settled"),
            Role::Unsettled => write!(f, "Unsettled"),
        }
    }
}

impl FromStr for Role {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Resetting" => Ok(Role::Resetting),
            "Settled" => Ok(Role::Settled),
            "Unsettled" => Ok(Role::Unsettled),
            other => Err(format!("invalid role {other:?}")),
        }
    }
}

impl fmt::Display for Leader {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Leader::L => write!(f, "L"),
            Leader::F => write!(f, "F"),
        }
    }
}

impl FromStr for Leader {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" => Ok(Leader::L),
            "F" => Ok(Leader::F),
            other => Err(format!("invalid leader flag {other:?}")),
        }
    }
}
