//! Reset propagation, leader election, and binary-doubling rank assignment.
//!
//! This is the layer executed first in every interaction. Detected
//! inconsistencies (rank conflicts, wait timeouts) arm a population-wide
//! reset: the `Resetting` role spreads epidemically while a shared
//! `resetcount` drains; leaders duel down to one; when the count reaches
//! zero the leader settles at rank 1 and everyone else re-enters the
//! unranked pool. A settled agent with rank `i` then hands out the child
//! ranks `2i` and `2i+1` (when they do not exceed `n`) until every agent
//! holds a distinct rank in `[1, n]`.
//!
//! Unranked agents burn a wait counter on every meeting that neither ranks
//! nor infects them; hitting zero re-arms the reset. This is what unsticks
//! adversarial configurations in which no agent could otherwise ever hand
//! out a rank (for example, an all-unsettled population).

use crate::engine::{AgentState, ChildMask, Configuration, Leader, Params, Role};

/// What, if anything, newly triggered a reset in one interaction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetCause {
    RankConflict,
    WaitTimeout,
    MajorityLayer,
    None,
}

/// Reset outcome of a single interaction. `by` is `None` iff `triggered`
/// is false.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResetOutcome {
    pub triggered: bool,
    pub by: ResetCause,
}

impl ResetOutcome {
    pub fn none() -> ResetOutcome {
        ResetOutcome {
            triggered: false,
            by: ResetCause::None,
        }
    }

    pub fn triggered(by: ResetCause) -> ResetOutcome {
        debug_assert!(by != ResetCause::None);
        ResetOutcome { triggered: true, by }
    }
}

/// Arm a reset on one agent: role `Resetting`, leader `L`, counter at
/// `R_max`. Rank, childmask, and waitcount are canonicalized; answer and
/// timer pass through untouched (the majority layer decides answer
/// handling).
pub fn trigger_reset(state: AgentState, params: &Params) -> AgentState {
    AgentState::resetting(Leader::L, params.r_max)
        .with_answer(state.answer)
        .with_timer(state.timer)
}

/// A resetting agent whose counter has drained leaves the reset: the leader
/// settles at rank 1, followers rejoin the unranked pool with a full wait
/// budget.
fn exit_reset_if_done(state: AgentState, params: &Params) -> AgentState {
    if state.role != Role::Resetting || state.resetcount != 0 {
        return state;
    }
    match state.leader {
        Leader::L => AgentState::settled(1, ChildMask::EMPTY)
            .with_answer(state.answer)
            .with_timer(state.timer),
        Leader::F => AgentState::unsettled(params.w_max)
            .with_answer(state.answer)
            .with_timer(state.timer),
    }
}

/// A front converts its partner only at or above this post-decrement
/// count. Wave drains stay synchronized to within a few counter levels,
/// so near-dead stragglers outlive the first exits; letting them convert
/// would re-absorb freshly settled agents (worst of all the rank-1 leader,
/// whose childmask cannot survive a bounce through the resetting role) and
/// force conflict-heal cycles. Measured on cold starts at n in [4, 64],
/// raising the floor from 1 to 4 roughly halves silence-time tails.
pub(crate) const DEAD_FRONT_MIN: u32 = 4;

/// Leadership carried into an infection. The rank-1 agent is the previous
/// wave's leader exit post; letting a late front demote it to follower
/// strands the population leaderless (an all-follower wave drains into an
/// all-unsettled state that only a wait timeout can rescue), so rank 1
/// re-enters a wave as leader. Extra leaders are harmless: duels demote
/// them.
fn infection_leader(state: &AgentState) -> Leader {
    if state.role == Role::Settled && state.rank == 1 {
        Leader::L
    } else {
        Leader::F
    }
}

/// Hand out the smallest free child rank (`2i` before `2i+1`, both capped
/// at `n`). Returns the updated (parent, child) states, or `None` when the
/// parent has nothing left to assign.
fn try_assign_rank(
    parent: AgentState,
    child: AgentState,
    params: &Params,
) -> Option<(AgentState, AgentState)> {
    let n = params.n as u64;
    let left = 2 * parent.rank as u64;
    let right = left + 1;
    let (child_rank, mask) = if !parent.childmask.has_left() && left <= n {
        (left as u32, parent.childmask.with_left())
    } else if !parent.childmask.has_right() && right <= n {
        (right as u32, parent.childmask.with_right())
    } else {
        return None;
    };
    let mut p = parent;
    p.childmask = mask;
    let c = AgentState::settled(child_rank, ChildMask::EMPTY)
        .with_answer(child.answer)
        .with_timer(child.timer);
    Some((p, c))
}

/// One ranking-layer interaction, `(initiator, responder)` ordered. The
/// rule groups are tried in order and the first match applies:
///
/// 1. two settled agents with equal ranks both arm a reset;
/// 2. the resetting role propagates while the front carries at least
///    [`DEAD_FRONT_MIN`], counters couple to `max - 1`, and a leader duel
///    demotes the responder;
/// 3. drained resetters exit (leader to rank 1, followers to unsettled);
/// 4. a settled agent ranks an unsettled partner;
/// 5. otherwise unsettled participants burn waitcount and time out at zero.
///
/// Rule 2's floor matters at the wave tail: a near-dead straggler would
/// hand its partner an almost-drained infection, and the partner (worst of
/// all the freshly exited rank-1 leader) would bounce straight back out,
/// losing its childmask and double-assigning ranks. Dying fronts therefore
/// stop converting; the straggler itself still drains and exits.
pub fn delta_ranking(
    states: (AgentState, AgentState),
    params: &Params,
) -> (AgentState, AgentState, ResetOutcome) {
    let (s0, s1) = states;

    // Rule 1: rank conflict.
    if s0.role == Role::Settled && s1.role == Role::Settled && s0.rank == s1.rank {
        return (
            trigger_reset(s0, params),
            trigger_reset(s1, params),
            ResetOutcome::triggered(ResetCause::RankConflict),
        );
    }

    // Rules 2 and 3: reset propagation, then exits.
    if s0.role == Role::Resetting || s1.role == Role::Resetting {
        let (mut t0, mut t1) = (s0, s1);
        match (s0.role == Role::Resetting, s1.role == Role::Resetting) {
            (true, true) => {
                let count = s0.resetcount.max(s1.resetcount).saturating_sub(1);
                t0.resetcount = count;
                t1.resetcount = count;
                if s0.leader == Leader::L && s1.leader == Leader::L {
                    t1.leader = Leader::F; // responder yields the duel
                }
            }
            (true, false) => {
                let count = s0.resetcount.saturating_sub(1);
                t0.resetcount = count;
                if count >= DEAD_FRONT_MIN {
                    t1 = AgentState::resetting(infection_leader(&s1), count)
                        .with_answer(s1.answer)
                        .with_timer(s1.timer);
                }
            }
            (false, true) => {
                let count = s1.resetcount.saturating_sub(1);
                t1.resetcount = count;
                if count >= DEAD_FRONT_MIN {
                    t0 = AgentState::resetting(infection_leader(&s0), count)
                        .with_answer(s0.answer)
                        .with_timer(s0.timer);
                }
            }
            (false, false) => unreachable!(),
        }
        t0 = exit_reset_if_done(t0, params);
        t1 = exit_reset_if_done(t1, params);
        return (t0, t1, ResetOutcome::none());
    }

    // Rule 4: rank assignment.
    if s0.role == Role::Settled && s1.role == Role::Unsettled {
        if let Some((parent, child)) = try_assign_rank(s0, s1, params) {
            return (parent, child, ResetOutcome::none());
        }
    }
    if s1.role == Role::Settled && s0.role == Role::Unsettled {
        if let Some((parent, child)) = try_assign_rank(s1, s0, params) {
            return (child, parent, ResetOutcome::none());
        }
    }

    // Rule 5: wait timeout for unsettled participants nothing above served.
    let mut outcome = ResetOutcome::none();
    let mut tick = |s: AgentState| -> AgentState {
        if s.role != Role::Unsettled {
            return s;
        }
        let wc = s.waitcount.saturating_sub(1);
        if wc == 0 {
            outcome = ResetOutcome::triggered(ResetCause::WaitTimeout);
            trigger_reset(s, params)
        } else {
            let mut t = s;
            t.waitcount = wc;
            t
        }
    };
    let t0 = tick(s0);
    let t1 = tick(s1);
    (t0, t1, outcome)
}

/// Ranking-layer completion predicate: every agent settled with pairwise
/// distinct ranks.
pub fn detect_all_settled(config: &Configuration) -> bool {
    let n = config.len();
    let mut seen = vec![false; n + 1];
    for s in config.states() {
        if s.role != Role::Settled {
            return false;
        }
        let r = s.rank as usize;
        if r == 0 || r > n || seen[r] {
            return false;
        }
        seen[r] = true;
    }
    true
}
