//! The exact-majority answer layer, applied after the ranking layer within
//! each interaction.
//!
//! In order: answers clear on entering a reset and the timer re-arms when
//! an agent settles at the deciding rank; a held answer spreads epidemically
//! between resetting agents; two settled agents swap full states when a
//! B-input agent sits below an A-input agent; the median rank(s) decide the
//! majority; and the deciding agent drains a timer against the rank-n agent
//! and, at zero, propagates its answer and re-arms the population reset on
//! any mismatch.

use crate::engine::{
    majority_oracle, AgentState, Answer, Configuration, Input, Opinion, Params, Role,
};
use crate::ranking::trigger_reset;

/// `T_swap`'s timer floor: the deciding agent still holds at least this
/// much budget after a full ranking pass. Equals
/// `7(t_rank + 4) - 7 t_rank`, independent of `t_rank`.
pub const TIMER_GUARD: u32 = 28;

/// Result of the majority layer for one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MajorityEffect {
    pub states: (AgentState, AgentState),
    /// True when the answer-propagation rule re-armed the reset.
    pub triggered_reset: bool,
}

/// Apply the answer layer. `pre` holds the states before the ranking layer
/// ran (needed for the became-resetting / became-settled transition flags),
/// `post_ranking` the states after it; rules execute sequentially so the
/// swap affects which ranks the decision and timer rules see.
pub fn apply_majority_layer(
    pre: (AgentState, AgentState),
    post_ranking: (AgentState, AgentState),
    inputs: (Input, Input),
    params: &Params,
) -> MajorityEffect {
    let mid = params.mid_rank();
    let (x0, x1) = inputs;
    let mut s = [post_ranking.0, post_ranking.1];
    let pre = [pre.0, pre.1];

    // Answer clearing on reset entry; timer re-arm on settling at the
    // deciding rank. The propagation trigger below runs later, so answers
    // it seeds are deliberately not cleared here.
    for i in 0..2 {
        if pre[i].role != Role::Resetting && s[i].role == Role::Resetting {
            s[i].answer = Answer::Phi;
        }
        if pre[i].role != Role::Settled && s[i].role == Role::Settled && s[i].rank == mid {
            s[i].timer = params.timer_max;
        }
    }

    // Epidemic answer copy between resetting agents: a held answer fills an
    // empty slot, never the reverse.
    if s[0].role == Role::Resetting && s[1].role == Role::Resetting {
        if s[0].answer == Answer::Phi && s[1].answer != Answer::Phi {
            s[0].answer = s[1].answer;
        } else if s[1].answer == Answer::Phi && s[0].answer != Answer::Phi {
            s[1].answer = s[0].answer;
        }
    }

    let mut triggered = false;
    if s[0].role == Role::Settled && s[1].role == Role::Settled {
        // Input-ordered state swap (everything except the inputs).
        if s[0].rank < s[1].rank && x0 == Input::B && x1 == Input::A {
            s.swap(0, 1);
        }

        // Median decision.
        let (d0, d1) = decide((s[0].rank, x0), (s[1].rank, x1), params.n);
        if let Some(a) = d0 {
            s[0].answer = a;
        }
        if let Some(a) = d1 {
            s[1].answer = a;
        }

        // Timer drain and answer propagation at the deciding rank. Ranks
        // are distinct here (equal ranks reset in the ranking layer), so at
        // most one agent matches.
        if let Some(i) = (0..2).find(|&i| s[i].rank == mid) {
            let j = 1 - i;
            if s[j].rank == params.n {
                s[i].timer = s[i].timer.saturating_sub(1);
            }
            if s[i].timer == 0 && s[i].answer != s[j].answer {
                s[j].answer = s[i].answer;
                s[i] = trigger_reset(s[i], params);
                s[j] = trigger_reset(s[j], params);
                triggered = true;
            }
        }
    }

    MajorityEffect {
        states: (s[0], s[1]),
        triggered_reset: triggered,
    }
}

/// The median decision as a pure function of ranks and inputs: for even
/// `n`, the agents at ranks `n/2` and `n/2 + 1` jointly decide (same inputs
/// win, different inputs tie); for odd `n`, the agent at rank `⌈n/2⌉`
/// adopts its own input. Both interaction orders are accepted. Returns the
/// per-agent answer updates, `None` meaning untouched.
pub fn decide(
    agent0: (u32, Input),
    agent1: (u32, Input),
    n: u32,
) -> (Option<Answer>, Option<Answer>) {
    let (r0, x0) = agent0;
    let (r1, x1) = agent1;
    if n.is_multiple_of(2) {
        let half = n / 2;
        let paired = (r0 == half && r1 == half + 1) || (r1 == half && r0 == half + 1);
        if paired {
            let answer = if x0 == x1 {
                Answer::from_input(x0)
            } else {
                Answer::T
            };
            return (Some(answer), Some(answer));
        }
    } else {
        let mid = n.div_ceil(2);
        if r0 == mid {
            return (Some(Answer::from_input(x0)), None);
        }
        if r1 == mid {
            return (None, Some(Answer::from_input(x1)));
        }
    }
    (None, None)
}

/// The nested instrumentation predicates over a configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhasePredicates {
    /// Ranking done: all settled, pairwise distinct ranks.
    pub in_s_rank: bool,
    /// Ranked and input-ordered: every A-input rank below every B-input rank.
    pub in_s_swap: bool,
    /// Ranked with the deciding agent's timer still at least [`TIMER_GUARD`].
    pub in_t_swap: bool,
    /// Swapped and the deciding agent's answer is the majority opinion.
    pub in_s_dec: bool,
    /// Ranked and every agent's answer is the majority opinion.
    pub in_s_out: bool,
    /// Both swapped and all answers correct.
    pub in_s_tim: bool,
    /// Silent shape: `s_tim` with the deciding agent's timer at zero.
    pub in_s_em: bool,
}

/// Compute all phase predicates in one pass over the configuration.
pub fn phase(config: &Configuration, params: &Params) -> PhasePredicates {
    PhaseCounters::scan(config, params).predicates()
}

/// Fast silent-shape test: all settled with distinct ranks, A-inputs below
/// B-inputs, every answer equal to the majority opinion, and the deciding
/// agent's timer at zero. Agrees with the exact `engine::is_silent`; the
/// verifier's oracle-agreement audit checks the equivalence exhaustively on
/// capped state spaces.
pub fn is_silent_shape(config: &Configuration, params: &Params) -> bool {
    phase(config, params).in_s_em
}

/// Counter set from which every phase predicate is a constant-time formula.
#[derive(Debug, Clone, PartialEq, Eq)]
struct PhaseCounters {
    oracle: Opinion,
    n: u32,
    mid_rank: u32,
    settled: u32,
    /// Per-rank settled-agent counts, index 1..=n.
    rank_count: Vec<u32>,
    /// Number of ranks held by two or more settled agents.
    dup_ranks: u32,
    /// Misordered settled pairs: (A-input u, B-input v) with v.rank < u.rank.
    misordered: u64,
    /// Agents whose answer equals the majority opinion.
    correct_answers: u32,
    /// Settled agents at the deciding rank, in total and split by answer
    /// and timer level.
    mid_present: u32,
    mid_answer_wrong: u32,
    mid_timer_ge_guard: u32,
    mid_timer_nonzero: u32,
}

impl PhaseCounters {
    fn scan(config: &Configuration, params: &Params) -> PhaseCounters {
        let oracle = majority_oracle(config.inputs()).expect("non-empty configuration");
        let mut c = PhaseCounters {
            oracle,
            n: params.n,
            mid_rank: params.mid_rank(),
            settled: 0,
            rank_count: vec![0; params.n_usize() + 1],
            dup_ranks: 0,
            misordered: 0,
            correct_answers: 0,
            mid_present: 0,
            mid_answer_wrong: 0,
            mid_timer_ge_guard: 0,
            mid_timer_nonzero: 0,
        };
        for state in config.states() {
            c.add_agent(*state);
        }
        for (i, si) in config.states().iter().enumerate() {
            if si.role != Role::Settled || config.input(i) != Input::A {
                continue;
            }
            for (j, sj) in config.states().iter().enumerate() {
                if j != i
                    && sj.role == Role::Settled
                    && config.input(j) == Input::B
                    && sj.rank < si.rank
                {
                    c.misordered += 1;
                }
            }
        }
        c
    }

    fn add_agent(&mut self, state: AgentState) {
        if state.role == Role::Settled {
            self.settled += 1;
            let slot = &mut self.rank_count[state.rank as usize];
            *slot += 1;
            if *slot == 2 {
                self.dup_ranks += 1;
            }
            if state.rank == self.mid_rank {
                self.mid_present += 1;
                if !state.answer.matches(self.oracle) {
                    self.mid_answer_wrong += 1;
                }
                if state.timer >= TIMER_GUARD {
                    self.mid_timer_ge_guard += 1;
                }
                if state.timer > 0 {
                    self.mid_timer_nonzero += 1;
                }
            }
        }
        if state.answer.matches(self.oracle) {
            self.correct_answers += 1;
        }
    }

    fn remove_agent(&mut self, state: AgentState) {
        if state.role == Role::Settled {
            self.settled -= 1;
            let slot = &mut self.rank_count[state.rank as usize];
            if *slot == 2 {
                self.dup_ranks -= 1;
            }
            *slot -= 1;
            if state.rank == self.mid_rank {
                self.mid_present -= 1;
                if !state.answer.matches(self.oracle) {
                    self.mid_answer_wrong -= 1;
                }
                if state.timer >= TIMER_GUARD {
                    self.mid_timer_ge_guard -= 1;
                }
                if state.timer > 0 {
                    self.mid_timer_nonzero -= 1;
                }
            }
        }
        if state.answer.matches(self.oracle) {
            self.correct_answers -= 1;
        }
    }

    /// Misordered-pair indicator for one unordered pair.
    fn pair_misordered(a: (Input, AgentState), b: (Input, AgentState)) -> u64 {
        let ((xa, sa), (xb, sb)) = (a, b);
        if sa.role != Role::Settled || sb.role != Role::Settled {
            return 0;
        }
        match (xa, xb) {
            (Input::A, Input::B) if sb.rank < sa.rank => 1,
            (Input::B, Input::A) if sa.rank < sb.rank => 1,
            _ => 0,
        }
    }

    /// Swap-order contribution of a hypothetical state at `agent` against
    /// all agents except `agent` and `skip`. O(n).
    fn misordered_against_others(
        &self,
        config: &Configuration,
        agent: usize,
        state: AgentState,
        skip: usize,
    ) -> u64 {
        if state.role != Role::Settled {
            return 0;
        }
        let my_input = config.input(agent);
        let mut count = 0;
        for (j, sj) in config.states().iter().enumerate() {
            if j == agent || j == skip {
                continue;
            }
            count += PhaseCounters::pair_misordered((my_input, state), (config.input(j), *sj));
        }
        count
    }

    fn predicates(&self) -> PhasePredicates {
        let in_s_rank = self.settled == self.n && self.dup_ranks == 0;
        let in_s_swap = in_s_rank && self.misordered == 0;
        let in_t_swap = in_s_rank && self.mid_timer_ge_guard > 0;
        let in_s_out = in_s_rank && self.correct_answers == self.n;
        let in_s_tim = in_s_swap && in_s_out;
        let in_s_em = in_s_tim && self.mid_timer_nonzero == 0;
        let in_s_dec = in_s_swap && self.mid_present > 0 && self.mid_answer_wrong == 0;
        PhasePredicates {
            in_s_rank,
            in_s_swap,
            in_t_swap,
            in_s_dec,
            in_s_out,
            in_s_tim,
            in_s_em,
        }
    }
}

/// Incremental phase tracking for the run loop: constant work per
/// interaction except when a settled rank changes hands, which costs one
/// O(n) rescan of the affected agents' swap-order contributions.
#[derive(Debug, Clone)]
pub struct PhaseTracker {
    counters: PhaseCounters,
}

/// One agent's state change within an interaction.
#[derive(Debug, Clone, Copy)]
pub struct AgentDelta {
    pub agent: usize,
    pub before: AgentState,
    pub after: AgentState,
}

impl PhaseTracker {
    pub fn new(config: &Configuration, params: &Params) -> PhaseTracker {
        PhaseTracker {
            counters: PhaseCounters::scan(config, params),
        }
    }

    /// Fold one interaction's changes into the counters. `config` must
    /// already hold the `after` states. Both changed agents must be passed
    /// together so cross terms are settled atomically.
    pub fn apply(&mut self, changes: &[AgentDelta], config: &Configuration) {
        for d in changes {
            self.counters.remove_agent(d.before);
            self.counters.add_agent(d.after);
        }
        let order_shifted = |d: &AgentDelta| {
            (d.before.role == Role::Settled) != (d.after.role == Role::Settled)
                || (d.before.role == Role::Settled && d.before.rank != d.after.rank)
        };
        if !changes.iter().any(order_shifted) {
            return;
        }
        match changes {
            [d] => {
                let skip = d.agent; // no second participant to exclude
                self.counters.misordered -=
                    self.counters
                        .misordered_against_others(config, d.agent, d.before, skip);
                self.counters.misordered +=
                    self.counters
                        .misordered_against_others(config, d.agent, d.after, skip);
            }
            [d0, d1] => {
                let (u, v) = (d0.agent, d1.agent);
                let xu = config.input(u);
                let xv = config.input(v);
                self.counters.misordered -= self
                    .counters
                    .misordered_against_others(config, u, d0.before, v)
                    + self
                        .counters
                        .misordered_against_others(config, v, d1.before, u)
                    + PhaseCounters::pair_misordered((xu, d0.before), (xv, d1.before));
                self.counters.misordered += self
                    .counters
                    .misordered_against_others(config, u, d0.after, v)
                    + self
                        .counters
                        .misordered_against_others(config, v, d1.after, u)
                    + PhaseCounters::pair_misordered((xu, d0.after), (xv, d1.after));
            }
            _ => {
                // interactions touch at most two agents
                debug_assert!(changes.len() <= 2);
            }
        }
    }

    pub fn predicates(&self) -> PhasePredicates {
        self.counters.predicates()
    }

    /// Current misordered-pair count (the swap potential).
    pub fn swap_potential(&self) -> u64 {
        self.counters.misordered
    }
}
