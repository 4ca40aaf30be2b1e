//! Bounded exhaustive model checking on tiny populations with capped
//! counters.
//!
//! With the counters capped the per-agent state space is finite and small,
//! so the full configuration digraph (every configuration, every ordered
//! interaction) fits in memory. Under the uniform random scheduler an
//! execution settles in a terminal strongly connected component with
//! probability 1, so almost-sure stabilization from *every* initial
//! configuration holds exactly when every terminal SCC is a single silent
//! configuration whose outputs all equal the majority opinion. Livelocks
//! and wrong silent outcomes both surface as violations with concrete
//! interaction paths.
//!
//! Agents are anonymous, so configurations that agree up to permuting
//! agents within equal-input groups are identified (states sorted within
//! each group); this cuts the space by up to `n!` without affecting
//! reachability, and every verdict predicate used here is permutation
//! invariant.

use std::collections::HashMap;
use std::io::Write;

use thiserror::Error;

use crate::engine::{
    self, majority_oracle, AgentState, ChildMask, Configuration, EngineError, Input,
    InteractionPair, Leader, Params, DEFAULT_T_RANK,
};

/// Hard ceiling on `|states|^n` dense configuration codes.
pub const CONFIG_SPACE_LIMIT: u128 = 50_000_000;

/// Input pairs in `input_pair_id` order (A = 0, B = 1).
const INPUT_PAIRS: [(Input, Input); 4] = [
    (Input::A, Input::A),
    (Input::A, Input::B),
    (Input::B, Input::A),
    (Input::B, Input::B),
];

#[derive(Debug, Error)]
pub enum VerifierError {
    #[error(
        "state space too large: {states} states for n={n} gives {configs} configurations (limit {limit})"
    )]
    StateSpaceTooLarge {
        states: usize,
        n: u32,
        configs: u128,
        limit: u128,
    },
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Counter caps replacing the production defaults during verification.
/// The protocol rules reference the bounds symbolically, so capping
/// changes no logic, only the reachable space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifierCaps {
    pub r_max_cap: u32,
    pub w_max_cap: u32,
    pub timer_max_cap: u32,
}

impl VerifierCaps {
    pub fn new(r_max_cap: u32, w_max_cap: u32, timer_max_cap: u32) -> VerifierCaps {
        VerifierCaps {
            r_max_cap,
            w_max_cap,
            timer_max_cap,
        }
    }

    pub fn params(&self, n: u32) -> Result<Params, EngineError> {
        Params::new(n, DEFAULT_T_RANK, 0)?.with_caps(
            self.r_max_cap,
            self.w_max_cap,
            self.timer_max_cap,
        )
    }
}

/// Why a terminal component or fixpoint is unacceptable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ViolationKind {
    /// A terminal SCC with more than one configuration: a livelock.
    Livelock,
    /// A terminal singleton whose configuration still has a state-changing
    /// interaction.
    NotSilent,
    /// A silent configuration whose outputs disagree with the majority.
    WrongOutput,
    /// A silent configuration with two A-input agents in the same state.
    DuplicateAState,
}

impl std::fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ViolationKind::Livelock => "livelock",
            ViolationKind::NotSilent => "not_silent",
            ViolationKind::WrongOutput => "wrong_output",
            ViolationKind::DuplicateAState => "duplicate_a_state",
        };
        write!(f, "{s}")
    }
}

/// A concrete witness: a legal initial configuration and an interaction
/// sequence exhibiting the violation (empty for a bad fixpoint, a cycle
/// for a livelock).
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub kind: ViolationKind,
    pub start: Configuration,
    pub pairs: Vec<InteractionPair>,
}

/// One flagged silent configuration from the silent-set audit.
#[derive(Debug, Clone)]
pub struct SilentViolation {
    pub kind: ViolationKind,
    pub config: Configuration,
}

/// Output of [`check_stabilization`].
#[derive(Debug, Clone)]
pub struct VerifierReport {
    pub n: u32,
    pub inputs: Vec<Input>,
    pub caps: VerifierCaps,
    pub state_count: usize,
    /// Canonical configurations in the digraph (the full space up to
    /// within-group permutation; every one is a legal start).
    pub reachable_count: usize,
    pub terminal_scc_count: usize,
    pub all_terminal_silent_correct: bool,
    pub bad_silent_configs: Vec<SilentViolation>,
    pub counterexample: Option<Counterexample>,
}

/// All canonical agent states under the caps: resetting states crossed
/// with leader and counter, settled states with rank and childmask,
/// unsettled states with the wait counter, everything crossed with answer
/// and timer.
pub fn enumerate_states(n: u32, caps: &VerifierCaps) -> Vec<AgentState> {
    let mut role_parts: Vec<AgentState> = Vec::new();
    for leader in [Leader::L, Leader::F] {
        for rc in 0..=caps.r_max_cap {
            role_parts.push(AgentState::resetting(leader, rc));
        }
    }
    for rank in 1..=n {
        for mask in 0..=3u8 {
            role_parts.push(AgentState::settled(rank, ChildMask::from_bits(mask).unwrap()));
        }
    }
    for wc in 0..=caps.w_max_cap {
        role_parts.push(AgentState::unsettled(wc));
    }

    let mut states = Vec::new();
    for base in role_parts {
        for answer in [
            crate::engine::Answer::Phi,
            crate::engine::Answer::T,
            crate::engine::Answer::A,
            crate::engine::Answer::B,
        ] {
            for timer in 0..=caps.timer_max_cap {
                states.push(base.with_answer(answer).with_timer(timer));
            }
        }
    }
    states
}

/// Number of canonical states under the caps, by the product formula the
/// enumeration follows.
pub fn state_space_size(n: u32, caps: &VerifierCaps) -> u64 {
    let role_parts = 2 * (caps.r_max_cap as u64 + 1) + 4 * n as u64 + (caps.w_max_cap as u64 + 1);
    role_parts * 4 * (caps.timer_max_cap as u64 + 1)
}

/// The `idx`-th state of [`enumerate_states`]' order without materializing
/// the list (generators draw uniform states from multimillion-state spaces).
pub fn unrank_state(idx: u64, n: u32, caps: &VerifierCaps) -> AgentState {
    use crate::engine::Answer;
    debug_assert!(idx < state_space_size(n, caps));
    let per_role_part = 4 * (caps.timer_max_cap as u64 + 1);
    let role_part = idx / per_role_part;
    let rem = idx % per_role_part;
    let answer = [Answer::Phi, Answer::T, Answer::A, Answer::B]
        [(rem / (caps.timer_max_cap as u64 + 1)) as usize];
    let timer = (rem % (caps.timer_max_cap as u64 + 1)) as u32;

    let resetting_parts = 2 * (caps.r_max_cap as u64 + 1);
    let settled_parts = 4 * n as u64;
    let base = if role_part < resetting_parts {
        let leader = if role_part < caps.r_max_cap as u64 + 1 {
            Leader::L
        } else {
            Leader::F
        };
        AgentState::resetting(leader, (role_part % (caps.r_max_cap as u64 + 1)) as u32)
    } else if role_part < resetting_parts + settled_parts {
        let k = role_part - resetting_parts;
        AgentState::settled(
            (k / 4) as u32 + 1,
            ChildMask::from_bits((k % 4) as u8).unwrap(),
        )
    } else {
        AgentState::unsettled((role_part - resetting_parts - settled_parts) as u32)
    };
    base.with_answer(answer).with_timer(timer)
}

/// Dense-coded configuration space with canonicalization by sorting state
/// indices within equal-input position groups.
struct ConfigSpace {
    n: usize,
    state_count: usize,
    params: Params,
    inputs: Vec<Input>,
    states: Vec<AgentState>,
    group_a: Vec<usize>,
    group_b: Vec<usize>,
    index_of: HashMap<AgentState, u16>,
    /// Precomputed transitions `table[input_pair][iu * S + iv] -> (iu', iv')`
    /// when the pair space is small enough, otherwise delta on demand.
    table: Option<Vec<Vec<(u16, u16)>>>,
}

/// Above this many ordered state pairs the transition table is skipped.
const TABLE_PAIR_LIMIT: usize = 8_000_000;

impl ConfigSpace {
    fn build(inputs: &[Input], caps: &VerifierCaps, params: &Params) -> Result<ConfigSpace, VerifierError> {
        let n = inputs.len();
        let states = enumerate_states(params.n, caps);
        let state_count = states.len();
        let configs = (state_count as u128).pow(n as u32);
        if configs > CONFIG_SPACE_LIMIT {
            return Err(VerifierError::StateSpaceTooLarge {
                states: state_count,
                n: params.n,
                configs,
                limit: CONFIG_SPACE_LIMIT,
            });
        }

        let index_of: HashMap<AgentState, u16> = states
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u16))
            .collect();

        let group_a: Vec<usize> = (0..n).filter(|&i| inputs[i] == Input::A).collect();
        let group_b: Vec<usize> = (0..n).filter(|&i| inputs[i] == Input::B).collect();

        let mut space = ConfigSpace {
            n,
            state_count,
            params: params.clone(),
            inputs: inputs.to_vec(),
            states,
            group_a,
            group_b,
            index_of,
            table: None,
        };

        if state_count * state_count <= TABLE_PAIR_LIMIT {
            let mut table = vec![vec![(0u16, 0u16); state_count * state_count]; 4];
            for pair_id in 0..4 {
                let (xu, xv) = INPUT_PAIRS[pair_id];
                for iu in 0..state_count {
                    for iv in 0..state_count {
                        table[pair_id][iu * state_count + iv] =
                            space.transition_direct(iu as u16, iv as u16, xu, xv);
                    }
                }
            }
            space.table = Some(table);
        }
        Ok(space)
    }

    fn transition_direct(&self, iu: u16, iv: u16, xu: Input, xv: Input) -> (u16, u16) {
        let (tu, tv, _) = engine::delta_with_outcome(
            self.states[iu as usize],
            xu,
            self.states[iv as usize],
            xv,
            &self.params,
        );
        let lookup = |s: &AgentState| {
            *self
                .index_of
                .get(s)
                .unwrap_or_else(|| panic!("delta left the enumerated state space: {s:?}"))
        };
        (lookup(&tu), lookup(&tv))
    }

    /// Transition of the ordered state-index pair under the given inputs.
    fn transition(&self, iu: u16, iv: u16, u: usize, v: usize) -> (u16, u16) {
        match &self.table {
            Some(table) => {
                table[self.input_pair_id(u, v)][iu as usize * self.state_count + iv as usize]
            }
            None => self.transition_direct(iu, iv, self.inputs[u], self.inputs[v]),
        }
    }

    fn input_pair_id(&self, u: usize, v: usize) -> usize {
        let a = usize::from(self.inputs[u] == Input::B);
        let b = usize::from(self.inputs[v] == Input::B);
        a * 2 + b
    }

    fn encode(&self, indices: &[u16]) -> u64 {
        let mut code = 0u64;
        for &i in indices.iter().rev() {
            code = code * self.state_count as u64 + i as u64;
        }
        code
    }

    fn decode(&self, mut code: u64, out: &mut [u16]) {
        for slot in out.iter_mut() {
            *slot = (code % self.state_count as u64) as u16;
            code /= self.state_count as u64;
        }
    }

    fn canonicalize(&self, indices: &mut [u16]) {
        sort_group(indices, &self.group_a);
        sort_group(indices, &self.group_b);
    }

    /// Apply the ordered interaction (u, v) and canonicalize, returning the
    /// successor's dense code.
    fn successor(&self, indices: &[u16], scratch: &mut Vec<u16>, u: usize, v: usize) -> u64 {
        scratch.clear();
        scratch.extend_from_slice(indices);
        let (tu, tv) = self.transition(scratch[u], scratch[v], u, v);
        scratch[u] = tu;
        scratch[v] = tv;
        self.canonicalize(scratch);
        self.encode(scratch)
    }

    fn config_from_indices(&self, indices: &[u16]) -> Configuration {
        Configuration::new(
            self.inputs.clone(),
            indices.iter().map(|&i| self.states[i as usize]).collect(),
        )
        .expect("index vector matches inputs length")
    }

    /// Every canonical configuration, in deterministic order.
    fn enumerate_canonical(&self) -> Vec<u64> {
        let mut nodes = Vec::new();
        let mut indices = vec![0u16; self.n];
        self.fill_group(0, &mut indices, &mut nodes);
        nodes.sort_unstable();
        nodes
    }

    fn fill_group(&self, group_idx: usize, indices: &mut Vec<u16>, nodes: &mut Vec<u64>) {
        let groups = [&self.group_a, &self.group_b];
        if group_idx == groups.len() {
            nodes.push(self.encode(indices));
            return;
        }
        let group = groups[group_idx];
        if group.is_empty() {
            self.fill_group(group_idx + 1, indices, nodes);
            return;
        }
        // non-decreasing sequences over the group's positions
        fn rec(
            space: &ConfigSpace,
            group: &[usize],
            pos: usize,
            min_idx: u16,
            indices: &mut Vec<u16>,
            group_idx: usize,
            nodes: &mut Vec<u64>,
        ) {
            if pos == group.len() {
                space.fill_group(group_idx + 1, indices, nodes);
                return;
            }
            for i in min_idx..space.state_count as u16 {
                indices[group[pos]] = i;
                rec(space, group, pos + 1, i, indices, group_idx, nodes);
            }
        }
        rec(self, group, 0, 0, indices, group_idx, nodes);
    }
}

fn sort_group(indices: &mut [u16], group: &[usize]) {
    // groups are tiny; insertion sort over the projected values
    for i in 1..group.len() {
        let mut j = i;
        while j > 0 && indices[group[j - 1]] > indices[group[j]] {
            indices.swap(group[j - 1], group[j]);
            j -= 1;
        }
    }
}

/// Exhaustively check almost-sure stabilization to correct silent
/// configurations for the given inputs, under capped counters.
pub fn check_stabilization(
    n: u32,
    inputs: &[Input],
    caps: &VerifierCaps,
) -> Result<VerifierReport, VerifierError> {
    let params = caps.params(n)?;
    if inputs.len() != n as usize {
        return Err(EngineError::LengthMismatch {
            got: inputs.len(),
            want: n as usize,
        }
        .into());
    }
    let oracle = majority_oracle(inputs).map_err(VerifierError::Engine)?;
    let space = ConfigSpace::build(inputs, caps, &params)?;
    let nodes = space.enumerate_canonical();
    let node_count = nodes.len();

    // dense code -> node id
    let dense_size = (space.state_count as u64).pow(space.n as u32) as usize;
    let mut id_of = vec![u32::MAX; dense_size];
    for (id, &code) in nodes.iter().enumerate() {
        id_of[code as usize] = id as u32;
    }

    let n_usize = space.n;
    let edges_per_node = n_usize * (n_usize - 1);
    let pair_for = |e: usize| -> (usize, usize) {
        let u = e / (n_usize - 1);
        let slot = e % (n_usize - 1);
        let v = slot + usize::from(slot >= u);
        (u, v)
    };

    // Iterative Tarjan over the quotient graph, successors on demand.
    const UNVISITED: u32 = u32::MAX;
    let mut order = vec![UNVISITED; node_count];
    let mut lowlink = vec![0u32; node_count];
    let mut on_stack = vec![false; node_count];
    let mut comp = vec![UNVISITED; node_count];
    let mut stack: Vec<u32> = Vec::new();
    let mut call: Vec<(u32, u32)> = Vec::new();
    let mut next_order = 0u32;
    let mut comp_count = 0u32;
    let mut indices = vec![0u16; n_usize];
    let mut scratch = vec![0u16; n_usize];

    for root in 0..node_count as u32 {
        if order[root as usize] != UNVISITED {
            continue;
        }
        order[root as usize] = next_order;
        lowlink[root as usize] = next_order;
        next_order += 1;
        stack.push(root);
        on_stack[root as usize] = true;
        call.push((root, 0));
        while let Some(frame) = call.last_mut() {
            let v = frame.0;
            if (frame.1 as usize) < edges_per_node {
                let e = frame.1 as usize;
                frame.1 += 1;
                let (pu, pv) = pair_for(e);
                space.decode(nodes[v as usize], &mut indices);
                let succ_code = space.successor(&indices, &mut scratch, pu, pv);
                let w = id_of[succ_code as usize];
                debug_assert_ne!(w, u32::MAX, "successor must be canonical");
                if order[w as usize] == UNVISITED {
                    order[w as usize] = next_order;
                    lowlink[w as usize] = next_order;
                    next_order += 1;
                    stack.push(w);
                    on_stack[w as usize] = true;
                    call.push((w, 0));
                } else if on_stack[w as usize] {
                    lowlink[v as usize] = lowlink[v as usize].min(order[w as usize]);
                }
            } else {
                call.pop();
                if let Some(parent) = call.last() {
                    let p = parent.0 as usize;
                    lowlink[p] = lowlink[p].min(lowlink[v as usize]);
                }
                if lowlink[v as usize] == order[v as usize] {
                    loop {
                        let w = stack.pop().expect("tarjan stack underflow");
                        on_stack[w as usize] = false;
                        comp[w as usize] = comp_count;
                        if w == v {
                            break;
                        }
                    }
                    comp_count += 1;
                }
            }
        }
    }

    // Terminality and component sizes.
    let mut comp_size = vec![0u32; comp_count as usize];
    let mut comp_terminal = vec![true; comp_count as usize];
    let mut comp_member = vec![u32::MAX; comp_count as usize];
    for (id, &c) in comp.iter().enumerate() {
        comp_size[c as usize] += 1;
        comp_member[c as usize] = comp_member[c as usize].min(id as u32);
    }
    for id in 0..node_count {
        space.decode(nodes[id], &mut indices);
        for e in 0..edges_per_node {
            let (pu, pv) = pair_for(e);
            let succ_code = space.successor(&indices, &mut scratch, pu, pv);
            let w = id_of[succ_code as usize];
            if comp[w as usize] != comp[id] {
                comp_terminal[comp[id] as usize] = false;
            }
        }
    }

    // Audit every terminal SCC.
    let mut bad: Vec<SilentViolation> = Vec::new();
    let mut counterexample: Option<Counterexample> = None;
    let mut terminal_scc_count = 0usize;
    for c in 0..comp_count as usize {
        if !comp_terminal[c] {
            continue;
        }
        terminal_scc_count += 1;
        let member = comp_member[c] as usize;
        space.decode(nodes[member], &mut indices);
        let config = space.config_from_indices(&indices);
        let violation = if comp_size[c] > 1 {
            Some(ViolationKind::Livelock)
        } else if !engine::is_silent(&config, &params) {
            Some(ViolationKind::NotSilent)
        } else if config.outputs().iter().any(|o| *o != oracle) {
            Some(ViolationKind::WrongOutput)
        } else {
            None
        };
        let Some(kind) = violation else { continue };
        bad.push(SilentViolation {
            kind,
            config: config.clone(),
        });
        if counterexample.is_none() {
            let pairs = match kind {
                ViolationKind::Livelock => shortest_cycle_within(
                    &space, &nodes, &id_of, &comp, c as u32, member, edges_per_node, &pair_for,
                ),
                ViolationKind::NotSilent => first_changing_pair(&config, &params)
                    .into_iter()
                    .collect(),
                _ => Vec::new(),
            };
            counterexample = Some(Counterexample {
                kind,
                start: config,
                pairs,
            });
        }
    }

    let all_good = bad.is_empty();
    Ok(VerifierReport {
        n,
        inputs: inputs.to_vec(),
        caps: *caps,
        state_count: space.state_count,
        reachable_count: node_count,
        terminal_scc_count,
        all_terminal_silent_correct: all_good,
        bad_silent_configs: bad,
        counterexample,
    })
}

/// Shortest interaction cycle from `member` back to its own SCC node set
/// witnessing a livelock: BFS restricted to the component.
#[allow(clippy::too_many_arguments)]
fn shortest_cycle_within(
    space: &ConfigSpace,
    nodes: &[u64],
    id_of: &[u32],
    comp: &[u32],
    target_comp: u32,
    member: usize,
    edges_per_node: usize,
    pair_for: &dyn Fn(usize) -> (usize, usize),
) -> Vec<InteractionPair> {
    use std::collections::VecDeque;
    let mut prev: HashMap<u32, (u32, InteractionPair)> = HashMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(member as u32);
    let mut indices = vec![0u16; space.n];
    let mut scratch = vec![0u16; space.n];
    while let Some(v) = queue.pop_front() {
        space.decode(nodes[v as usize], &mut indices);
        for e in 0..edges_per_node {
            let (pu, pv) = pair_for(e);
            let code = space.successor(&indices, &mut scratch, pu, pv);
            let w = id_of[code as usize];
            if comp[w as usize] != target_comp {
                continue;
            }
            let pair = InteractionPair::new(pu as u32, pv as u32);
            if w == member as u32 && v != member as u32 {
                // close the cycle
                let mut path = vec![pair];
                let mut cur = v;
                while cur != member as u32 {
                    let (p, edge) = prev[&cur];
                    path.push(edge);
                    cur = p;
                }
                path.reverse();
                return path;
            }
            if w != member as u32 && !prev.contains_key(&w) {
                prev.insert(w, (v, pair));
                queue.push_back(w);
            }
        }
    }
    Vec::new()
}

/// The first ordered pair whose interaction changes a supposedly silent
/// configuration, if any.
fn first_changing_pair(config: &Configuration, params: &Params) -> Option<InteractionPair> {
    let n = config.len();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let (t0, t1, _) = engine::delta_with_outcome(
                config.state(u),
                config.input(u),
                config.state(v),
                config.input(v),
                params,
            );
            if t0 != config.state(u) || t1 != config.state(v) {
                return Some(InteractionPair::new(u as u32, v as u32));
            }
        }
    }
    None
}

/// All delta-fixpoint configurations (canonical representatives) for the
/// given inputs under capped counters.
pub fn enumerate_fixpoints(
    n: u32,
    inputs: &[Input],
    caps: &VerifierCaps,
) -> Result<Vec<Configuration>, VerifierError> {
    let params = caps.params(n)?;
    if inputs.len() != n as usize {
        return Err(EngineError::LengthMismatch {
            got: inputs.len(),
            want: n as usize,
        }
        .into());
    }
    let space = ConfigSpace::build(inputs, caps, &params)?;
    let nodes = space.enumerate_canonical();
    let mut indices = vec![0u16; space.n];
    let edges = space.n * (space.n - 1);
    let mut fixpoints = Vec::new();
    'next: for &code in &nodes {
        space.decode(code, &mut indices);
        for e in 0..edges {
            let u = e / (space.n - 1);
            let slot = e % (space.n - 1);
            let v = slot + usize::from(slot >= u);
            // fixpoint demands agent-wise identity, not just orbit identity
            let (tu, tv) = space.transition(indices[u], indices[v], u, v);
            if tu != indices[u] || tv != indices[v] {
                continue 'next;
            }
        }
        fixpoints.push(space.config_from_indices(&indices));
    }
    Ok(fixpoints)
}

/// Result of [`audit_silent_set`].
#[derive(Debug, Clone)]
pub struct SilentAudit {
    pub n: u32,
    pub inputs: Vec<Input>,
    pub caps: VerifierCaps,
    pub fixpoint_count: usize,
    pub violations: Vec<SilentViolation>,
}

/// Enumerate every delta-fixpoint and flag silent-set violations: outputs
/// that disagree with the majority opinion, and two A-input agents sharing
/// a state.
pub fn audit_silent_set(
    n: u32,
    inputs: &[Input],
    caps: &VerifierCaps,
) -> Result<SilentAudit, VerifierError> {
    let oracle = majority_oracle(inputs).map_err(VerifierError::Engine)?;
    let fixpoints = enumerate_fixpoints(n, inputs, caps)?;
    let mut violations = Vec::new();
    for config in &fixpoints {
        if config.outputs().iter().any(|o| *o != oracle) {
            violations.push(SilentViolation {
                kind: ViolationKind::WrongOutput,
                config: config.clone(),
            });
        }
        let mut a_states: Vec<AgentState> = (0..config.len())
            .filter(|&i| config.input(i) == Input::A)
            .map(|i| config.state(i))
            .collect();
        a_states.sort();
        if a_states.windows(2).any(|w| w[0] == w[1]) {
            violations.push(SilentViolation {
                kind: ViolationKind::DuplicateAState,
                config: config.clone(),
            });
        }
    }
    Ok(SilentAudit {
        n,
        inputs: inputs.to_vec(),
        caps: *caps,
        fixpoint_count: fixpoints.len(),
        violations,
    })
}

fn inputs_string(inputs: &[Input]) -> String {
    inputs.iter().map(|x| x.to_string()).collect()
}

/// Write a stabilization report as a key=value header block followed by
/// one violation per line; counterexample paths are `(initiator,responder)`
/// sequences.
pub fn write_report<W: Write>(report: &VerifierReport, mut w: W) -> std::io::Result<()> {
    writeln!(w, "n={}", report.n)?;
    writeln!(w, "inputs={}", inputs_string(&report.inputs))?;
    writeln!(w, "cap_reset={}", report.caps.r_max_cap)?;
    writeln!(w, "cap_wait={}", report.caps.w_max_cap)?;
    writeln!(w, "cap_timer={}", report.caps.timer_max_cap)?;
    writeln!(w, "state_count={}", report.state_count)?;
    writeln!(w, "reachable_count={}", report.reachable_count)?;
    writeln!(w, "terminal_scc_count={}", report.terminal_scc_count)?;
    writeln!(
        w,
        "all_terminal_silent_correct={}",
        report.all_terminal_silent_correct
    )?;
    writeln!(w, "violations={}", report.bad_silent_configs.len())?;
    for v in &report.bad_silent_configs {
        let states: Vec<String> = (0..v.config.len())
            .map(|i| {
                let s = v.config.state(i);
                format!(
                    "{}:{}/{}/{}/{}/{}/{}/{}/{}",
                    v.config.input(i),
                    s.role,
                    s.leader,
                    s.resetcount,
                    s.waitcount,
                    s.rank,
                    s.childmask.bits(),
                    s.answer,
                    s.timer
                )
            })
            .collect();
        writeln!(w, "violation kind={} config=[{}]", v.kind, states.join(" "))?;
    }
    if let Some(cex) = &report.counterexample {
        let path: Vec<String> = cex
            .pairs
            .iter()
            .map(|p| format!("({},{})", p.initiator, p.responder))
            .collect();
        writeln!(w, "counterexample kind={} path={}", cex.kind, path.join(" "))?;
    }
    Ok(())
}
