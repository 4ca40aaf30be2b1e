//! Experiment harness: configuration generators (random and targeted
//! adversarial), instrumented trials, parallel sweeps with canonical
//! output, summary statistics, and CSV/JSON emission.

use std::collections::{BTreeMap, HashSet};
use std::io::Write;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{
    self, majority_oracle, AgentState, Answer, ChildMask, Configuration, EngineError, Input,
    Opinion, Params, RunOptions, RunOutcome, SimRng, UniformScheduler,
};
use crate::verifier::{state_space_size, unrank_state, VerifierCaps};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("num_a {num_a} outside [0, {n}]")]
    InvalidNumA { num_a: u32, n: u32 },
    #[error("lb_flip needs odd n >= 5 and num_a = floor(n/2), got n={n} num_a={num_a}")]
    LbFlip { n: u32, num_a: u32 },
    #[error("snapshot population n={got} does not match requested n={want}")]
    SnapshotMismatch { got: usize, want: usize },
    #[error("unknown init kind {0:?}")]
    UnknownKind(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

/// Initial-configuration families. All but `FromFile` are produced
/// deterministically from a seed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InitKind {
    /// Every agent's state drawn uniformly from the full canonical state
    /// set under the run's parameters.
    UniformRandomState,
    /// The canonical cold start: all unsettled with a full wait budget.
    AllUnsettled,
    /// A reset wave in flight: one leader, a random resetting cohort with
    /// near-full counters, the rest still ranked.
    MidReset,
    /// Fully ranked and input-ordered, but every answer is the minority
    /// opinion (ties get `A`) and the deciding agent's timer is spent.
    WrongAnswers,
    /// Every agent settled at rank 1.
    DuplicateRanks,
    /// The lower-bound construction: the silent configuration for
    /// `|V_A| = floor(n/2)`, with one B-input agent replaced by a copy of
    /// an A-agent's silent state, input flipped to `A`. All agents output
    /// `B` while the true majority is `A`; only the two identical agents
    /// meeting can tell the difference.
    LbFlip,
    /// Load a configuration snapshot.
    FromFile(PathBuf),
}

impl InitKind {
    pub fn name(&self) -> &'static str {
        match self {
            InitKind::UniformRandomState => "uniform_random_state",
            InitKind::AllUnsettled => "all_unsettled",
            InitKind::MidReset => "mid_reset",
            InitKind::WrongAnswers => "wrong_answers",
            InitKind::DuplicateRanks => "duplicate_ranks",
            InitKind::LbFlip => "lb_flip",
            InitKind::FromFile(_) => "from_file",
        }
    }

    /// Stable id used in per-trial seed derivation.
    pub fn id(&self) -> u64 {
        match self {
            InitKind::UniformRandomState => 0,
            InitKind::AllUnsettled => 1,
            InitKind::MidReset => 2,
            InitKind::WrongAnswers => 3,
            InitKind::DuplicateRanks => 4,
            InitKind::LbFlip => 5,
            InitKind::FromFile(_) => 6,
        }
    }

    /// The six generated kinds, in canonical order.
    pub fn generated() -> Vec<InitKind> {
        vec![
            InitKind::UniformRandomState,
            InitKind::AllUnsettled,
            InitKind::MidReset,
            InitKind::WrongAnswers,
            InitKind::DuplicateRanks,
            InitKind::LbFlip,
        ]
    }

    /// Parse a CLI spelling: a kind name or `file:PATH`.
    pub fn parse(s: &str) -> Result<InitKind, HarnessError> {
        if let Some(path) = s.strip_prefix("file:") {
            return Ok(InitKind::FromFile(PathBuf::from(path)));
        }
        match s {
            "uniform_random_state" => Ok(InitKind::UniformRandomState),
            "all_unsettled" => Ok(InitKind::AllUnsettled),
            "mid_reset" => Ok(InitKind::MidReset),
            "wrong_answers" => Ok(InitKind::WrongAnswers),
            "duplicate_ranks" => Ok(InitKind::DuplicateRanks),
            "lb_flip" => Ok(InitKind::LbFlip),
            other => Err(HarnessError::UnknownKind(other.to_string())),
        }
    }
}

/// `num_a` A-inputs first, then B-inputs.
fn inputs_for(num_a: u32, n: u32) -> Vec<Input> {
    (0..n)
        .map(|i| if i < num_a { Input::A } else { Input::B })
        .collect()
}

fn minority_answer(num_a: u32, n: u32) -> Answer {
    match (2 * num_a).cmp(&n) {
        std::cmp::Ordering::Greater => Answer::B,
        std::cmp::Ordering::Less => Answer::A,
        // a tie has no minority; any non-T answer is wrong, use A
        std::cmp::Ordering::Equal => Answer::A,
    }
}

fn majority_answer(num_a: u32, n: u32) -> Answer {
    match (2 * num_a).cmp(&n) {
        std::cmp::Ordering::Greater => Answer::A,
        std::cmp::Ordering::Less => Answer::B,
        std::cmp::Ordering::Equal => Answer::T,
    }
}

/// Childmask consistent with a fully assigned rank tree.
fn full_tree_mask(rank: u32, n: u32) -> ChildMask {
    let mut mask = ChildMask::EMPTY;
    if 2 * rank <= n {
        mask = mask.with_left();
    }
    if 2 * rank < n {
        mask = mask.with_right();
    }
    mask
}

/// The silent configuration for `num_a` A-inputs: ranks sorted with
/// A-agents low, answers equal to the majority opinion, deciding agent's
/// timer at zero, full-tree childmasks.
pub fn silent_configuration(num_a: u32, n: u32) -> Result<Configuration, HarnessError> {
    if num_a > n {
        return Err(HarnessError::InvalidNumA { num_a, n });
    }
    let answer = majority_answer(num_a, n);
    let states = (1..=n)
        .map(|rank| AgentState::settled(rank, full_tree_mask(rank, n)).with_answer(answer))
        .collect();
    Ok(Configuration::new(inputs_for(num_a, n), states)?)
}

/// Index of the agent [`InitKind::LbFlip`] overwrites (the highest-index
/// agent, which held rank n).
pub fn lb_flip_agent(n: u32) -> usize {
    n as usize - 1
}

/// Build an initial configuration.
pub fn generate(
    kind: &InitKind,
    n: u32,
    num_a: u32,
    seed: u64,
    params: &Params,
) -> Result<Configuration, HarnessError> {
    if num_a > n {
        return Err(HarnessError::InvalidNumA { num_a, n });
    }
    let mut rng = SimRng::new(seed);
    let config = match kind {
        InitKind::UniformRandomState => {
            let caps = VerifierCaps::new(params.r_max, params.w_max, params.timer_max);
            let total = state_space_size(n, &caps);
            let states = (0..n)
                .map(|_| unrank_state(rng.bounded(total), n, &caps))
                .collect();
            Configuration::new(inputs_for(num_a, n), states)?
        }
        InitKind::AllUnsettled => Configuration::new(
            inputs_for(num_a, n),
            vec![AgentState::unsettled(params.w_max); n as usize],
        )?,
        InitKind::MidReset => {
            let answers = [Answer::Phi, Answer::T, Answer::A, Answer::B];
            let mut ranks: Vec<u32> = (1..=n).collect();
            for i in (1..ranks.len()).rev() {
                let j = rng.bounded(i as u64 + 1) as usize;
                ranks.swap(i, j);
            }
            let leader_idx = rng.bounded(n as u64) as usize;
            let states = (0..n as usize)
                .map(|i| {
                    let in_wave = i == leader_idx || rng.bounded(2) == 0;
                    if in_wave {
                        let jitter = rng.bounded(4.min(params.r_max as u64)) as u32;
                        let leader = if i == leader_idx {
                            engine::Leader::L
                        } else {
                            engine::Leader::F
                        };
                        let answer = if i == leader_idx {
                            answers[1 + rng.bounded(3) as usize]
                        } else {
                            Answer::Phi
                        };
                        AgentState::resetting(leader, params.r_max - jitter)
                            .with_answer(answer)
                            .with_timer(rng.bounded(params.timer_max as u64 + 1) as u32)
                    } else {
                        AgentState::settled(ranks[i], full_tree_mask(ranks[i], n))
                            .with_answer(answers[rng.bounded(4) as usize])
                            .with_timer(rng.bounded(params.timer_max as u64 + 1) as u32)
                    }
                })
                .collect();
            Configuration::new(inputs_for(num_a, n), states)?
        }
        InitKind::WrongAnswers => {
            let mut config = silent_configuration(num_a, n)?;
            let wrong = minority_answer(num_a, n);
            for i in 0..n as usize {
                let s = config.state(i).with_answer(wrong);
                config.set_state(i, s);
            }
            config
        }
        InitKind::DuplicateRanks => Configuration::new(
            inputs_for(num_a, n),
            vec![AgentState::settled(1, ChildMask::EMPTY); n as usize],
        )?,
        InitKind::LbFlip => {
            if n < 5 || n.is_multiple_of(2) || num_a != n / 2 {
                return Err(HarnessError::LbFlip { n, num_a });
            }
            let silent = silent_configuration(num_a, n)?;
            let donor_state = silent.state(0); // an A-agent's silent state
            let flipped = lb_flip_agent(n);
            let mut inputs = inputs_for(num_a, n);
            inputs[flipped] = Input::A;
            let mut states: Vec<AgentState> = silent.states().to_vec();
            states[flipped] = donor_state;
            Configuration::new(inputs, states)?
        }
        InitKind::FromFile(path) => {
            let config = engine::snapshot::load_snapshot(path)?;
            if config.len() != n as usize {
                return Err(HarnessError::SnapshotMismatch {
                    got: config.len(),
                    want: n as usize,
                });
            }
            config
        }
    };
    config.validate(params)?;
    Ok(config)
}

/// Phase first-hit times in parallel-time units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize)]
pub struct PhaseParallelTimes {
    pub s_rank: Option<f64>,
    pub s_swap: Option<f64>,
    pub t_swap: Option<f64>,
    pub s_dec: Option<f64>,
    pub s_out: Option<f64>,
    pub s_tim: Option<f64>,
    pub s_em: Option<f64>,
}

impl PhaseParallelTimes {
    fn from_outcome(outcome: &RunOutcome, n: u32) -> PhaseParallelTimes {
        let f = |i: Option<u64>| i.map(|v| v as f64 / n as f64);
        let p = &outcome.phase_times;
        PhaseParallelTimes {
            s_rank: f(p.s_rank),
            s_swap: f(p.s_swap),
            t_swap: f(p.t_swap),
            s_dec: f(p.s_dec),
            s_out: f(p.s_out),
            s_tim: f(p.s_tim),
            s_em: f(p.s_em),
        }
    }
}

/// Per-trial record.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceMetrics {
    pub n: u32,
    pub seed: u64,
    pub trial: u32,
    /// A-inputs in the configuration actually run (for `lb_flip` this is
    /// the post-flip count).
    pub num_a: u32,
    pub init_kind: String,
    /// Interactions to the first silent configuration; `None` is the
    /// did-not-silence (overflow) marker.
    pub interactions: Option<u64>,
    pub parallel_time: Option<f64>,
    pub resets: u64,
    pub phases: PhaseParallelTimes,
    pub correct: bool,
}

/// Default interaction budget: `200 n² ln(n+1)`, an order above the
/// with-high-probability silence bound, so hitting it indicates a bug.
pub fn default_max_interactions(n: u32) -> u64 {
    (200.0 * (n as f64).powi(2) * ((n + 1) as f64).ln()).ceil() as u64
}

fn trial_streams(seed: u64) -> (u64, u64) {
    (SimRng::derive(seed, &[0]), SimRng::derive(seed, &[1]))
}

/// Run one instrumented trial.
pub fn run_trial(
    kind: &InitKind,
    n: u32,
    num_a: u32,
    seed: u64,
    params: &Params,
    max_interactions: u64,
) -> Result<TraceMetrics, HarnessError> {
    let (metrics, _) = run_trial_inner(kind, n, num_a, seed, params, max_interactions, false)?;
    Ok(metrics)
}

/// [`run_trial`] plus the set of distinct agent states observed along the
/// trace (for state-census audits).
pub fn run_trial_with_census(
    kind: &InitKind,
    n: u32,
    num_a: u32,
    seed: u64,
    params: &Params,
    max_interactions: u64,
) -> Result<(TraceMetrics, HashSet<AgentState>), HarnessError> {
    let (metrics, census) =
        run_trial_inner(kind, n, num_a, seed, params, max_interactions, true)?;
    Ok((metrics, census.unwrap_or_default()))
}

fn run_trial_inner(
    kind: &InitKind,
    n: u32,
    num_a: u32,
    seed: u64,
    params: &Params,
    max_interactions: u64,
    census: bool,
) -> Result<(TraceMetrics, Option<HashSet<AgentState>>), HarnessError> {
    let (gen_seed, sched_seed) = trial_streams(seed);
    let config = generate(kind, n, num_a, gen_seed, params)?;
    let mut scheduler = UniformScheduler::new(n, sched_seed)?;
    let opts = RunOptions {
        max_interactions,
        collect_phases: true,
        collect_census: census,
    };
    let outcome = engine::run(&config, params, &mut scheduler, &opts)?;
    let oracle = majority_oracle(config.inputs())?;
    let correct = outcome
        .final_config
        .outputs()
        .iter()
        .all(|o| *o == oracle);
    let metrics = TraceMetrics {
        n,
        seed,
        trial: 0,
        num_a: config.num_a(),
        init_kind: kind.name().to_string(),
        interactions: outcome.interactions_to_silence,
        parallel_time: outcome
            .interactions_to_silence
            .map(|i| i as f64 / n as f64),
        resets: outcome.resets_triggered,
        phases: PhaseParallelTimes::from_outcome(&outcome, n),
        correct,
    };
    Ok((metrics, outcome.observed_states))
}

/// How `num_a` values are chosen per population size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NumAPolicy {
    /// All of `0..=n` for n <= 8, otherwise the edge set
    /// `{0, 1, n/2-1, n/2, ceil(n/2), n-1, n}`.
    Auto,
    /// All of `0..=n` regardless of size.
    All,
    /// The edge set only.
    Edges,
    /// Explicit values (out-of-range ones are rejected).
    Explicit(Vec<u32>),
}

impl NumAPolicy {
    pub fn values(&self, n: u32) -> Vec<u32> {
        let edges = |n: u32| -> Vec<u32> {
            let mut vals = vec![0, 1, (n / 2).saturating_sub(1), n / 2, n.div_ceil(2), n - 1, n];
            vals.sort_unstable();
            vals.dedup();
            vals
        };
        match self {
            NumAPolicy::Auto => {
                if n <= 8 {
                    (0..=n).collect()
                } else {
                    edges(n)
                }
            }
            NumAPolicy::All => (0..=n).collect(),
            NumAPolicy::Edges => edges(n),
            NumAPolicy::Explicit(vals) => {
                let mut vals = vals.clone();
                vals.sort_unstable();
                vals.dedup();
                vals
            }
        }
    }
}

/// Sweep description. Rows come out in canonical order
/// (n, kind, num_a, trial) regardless of worker count.
#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub n_list: Vec<u32>,
    pub num_a_policy: NumAPolicy,
    pub kinds: Vec<InitKind>,
    pub trials: u32,
    pub base_seed: u64,
    pub t_rank: u32,
    /// `None` uses [`default_max_interactions`].
    pub max_interactions: Option<u64>,
    /// 0 lets rayon pick.
    pub workers: usize,
}

impl SweepSpec {
    pub fn new(n_list: Vec<u32>, trials: u32, base_seed: u64) -> SweepSpec {
        SweepSpec {
            n_list,
            num_a_policy: NumAPolicy::Auto,
            kinds: InitKind::generated(),
            trials,
            base_seed,
            t_rank: engine::DEFAULT_T_RANK,
            max_interactions: None,
            workers: 0,
        }
    }
}

/// Per-trial seed: splitmix-derived hash of (base seed, n, kind, trial).
pub fn derive_trial_seed(base: u64, n: u32, kind: &InitKind, trial: u32) -> u64 {
    SimRng::derive(base, &[n as u64, kind.id(), trial as u64])
}

struct Job {
    n: u32,
    kind: InitKind,
    num_a: u32,
    trial: u32,
    seed: u64,
}

fn sweep_jobs(spec: &SweepSpec) -> Vec<Job> {
    let mut jobs = Vec::new();
    let mut n_list = spec.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    for &n in &n_list {
        for kind in &spec.kinds {
            let num_a_values: Vec<u32> = match kind {
                // the construction only exists at odd n with a one-short A count
                InitKind::LbFlip => {
                    if n >= 5 && n % 2 == 1 {
                        vec![n / 2]
                    } else {
                        continue;
                    }
                }
                _ => spec.num_a_policy.values(n),
            };
            for &num_a in &num_a_values {
                for trial in 0..spec.trials {
                    jobs.push(Job {
                        n,
                        kind: kind.clone(),
                        num_a,
                        trial,
                        seed: derive_trial_seed(spec.base_seed, n, kind, trial),
                    });
                }
            }
        }
    }
    jobs
}

fn run_jobs<F, R>(spec: &SweepSpec, jobs: Vec<Job>, f: F) -> Result<Vec<R>, HarnessError>
where
    F: Fn(&Job) -> Result<R, HarnessError> + Sync,
    R: Send,
{
    let body = || jobs.par_iter().map(&f).collect();
    if spec.workers > 0 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(spec.workers)
            .build()
            .expect("thread pool");
        pool.install(body)
    } else {
        body()
    }
}

/// Run a full sweep. Output row order is canonical and independent of the
/// worker count; every emitted byte is determined by the spec.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<TraceMetrics>, HarnessError> {
    let jobs = sweep_jobs(spec);
    let rows = run_jobs(spec, jobs, |job| {
        let params = Params::new(job.n, spec.t_rank, job.seed)?;
        let max = spec.max_interactions.unwrap_or(default_max_interactions(job.n));
        let mut m = run_trial(&job.kind, job.n, job.num_a, job.seed, &params, max)?;
        m.trial = job.trial;
        Ok(m)
    })?;
    Ok(rows)
}

/// Sweep while also collecting, per n, the number of distinct agent states
/// observed across all trials.
pub fn sweep_with_census(
    spec: &SweepSpec,
) -> Result<(Vec<TraceMetrics>, BTreeMap<u32, usize>), HarnessError> {
    let jobs = sweep_jobs(spec);
    let results = run_jobs(spec, jobs, |job| {
        let params = Params::new(job.n, spec.t_rank, job.seed)?;
        let max = spec.max_interactions.unwrap_or(default_max_interactions(job.n));
        let (mut m, states) =
            run_trial_with_census(&job.kind, job.n, job.num_a, job.seed, &params, max)?;
        m.trial = job.trial;
        Ok((m, states))
    })?;
    let mut rows = Vec::with_capacity(results.len());
    let mut census: BTreeMap<u32, HashSet<AgentState>> = BTreeMap::new();
    for (m, states) in results {
        census.entry(m.n).or_default().extend(states);
        rows.push(m);
    }
    let counts = census.into_iter().map(|(n, set)| (n, set.len())).collect();
    Ok((rows, counts))
}

/// Group statistics for one (n, kind) cell.
#[derive(Debug, Clone, Serialize)]
pub struct GroupSummary {
    pub n: u32,
    pub init_kind: String,
    pub trials: usize,
    pub overflows: usize,
    pub mean_parallel_time: Option<f64>,
    /// Normal-approximation 95% half-width around the mean.
    pub ci95_half_width: Option<f64>,
    pub max_parallel_time: Option<f64>,
    pub correct_fraction: f64,
}

/// Least-squares fit of mean silence time against n for one kind.
#[derive(Debug, Clone, Serialize)]
pub struct KindFit {
    pub init_kind: String,
    pub slope: f64,
    pub intercept: f64,
    pub points: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub groups: Vec<GroupSummary>,
    pub fits: Vec<KindFit>,
    /// Distinct canonical states observed per n, when collected.
    pub state_census: Option<BTreeMap<u32, usize>>,
}

/// Aggregate a result table: per-(n, kind) statistics plus a linear fit of
/// mean silence time against n for each kind.
pub fn summarize(rows: &[TraceMetrics], census: Option<BTreeMap<u32, usize>>) -> Summary {
    let mut cells: BTreeMap<(u32, String), Vec<&TraceMetrics>> = BTreeMap::new();
    for row in rows {
        cells
            .entry((row.n, row.init_kind.clone()))
            .or_default()
            .push(row);
    }
    let mut groups = Vec::new();
    for ((n, kind), members) in &cells {
        let times: Vec<f64> = members.iter().filter_map(|m| m.parallel_time).collect();
        let overflows = members.len() - times.len();
        let mean = mean(&times);
        let ci = mean.and_then(|mu| {
            if times.len() < 2 {
                return None;
            }
            let var = times.iter().map(|t| (t - mu).powi(2)).sum::<f64>()
                / (times.len() as f64 - 1.0);
            Some(1.96 * (var / times.len() as f64).sqrt())
        });
        let max = times.iter().copied().fold(None, |acc: Option<f64>, t| {
            Some(acc.map_or(t, |a| a.max(t)))
        });
        let correct = members.iter().filter(|m| m.correct).count() as f64 / members.len() as f64;
        groups.push(GroupSummary {
            n: *n,
            init_kind: kind.clone(),
            trials: members.len(),
            overflows,
            mean_parallel_time: mean,
            ci95_half_width: ci,
            max_parallel_time: max,
            correct_fraction: correct,
        });
    }

    // per-kind linear fit over the per-n means
    let mut by_kind: BTreeMap<String, Vec<(f64, f64)>> = BTreeMap::new();
    for g in &groups {
        if let Some(mu) = g.mean_parallel_time {
            by_kind
                .entry(g.init_kind.clone())
                .or_default()
                .push((g.n as f64, mu));
        }
    }
    let mut fits = Vec::new();
    for (kind, points) in &by_kind {
        if points.len() < 2 {
            continue;
        }
        let (slope, intercept) = least_squares(points);
        fits.push(KindFit {
            init_kind: kind.clone(),
            slope,
            intercept,
            points: points.len(),
        });
    }

    Summary {
        groups,
        fits,
        state_census: census,
    }
}

fn mean(xs: &[f64]) -> Option<f64> {
    if xs.is_empty() {
        None
    } else {
        Some(xs.iter().sum::<f64>() / xs.len() as f64)
    }
}

fn least_squares(points: &[(f64, f64)]) -> (f64, f64) {
    let k = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = k * sxx - sx * sx;
    let slope = (k * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / k;
    (slope, intercept)
}

/// The fixed CSV header.
pub const CSV_HEADER: &str =
    "n,seed,trial,num_A,init_kind,interactions,parallel_time,resets,t_S_rank,t_T_swap,t_S_dec,t_S_tim,t_S_em,correct";

fn fmt_opt_u64(v: Option<u64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn fmt_opt_f64(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Write the table in the fixed column order; missing values (overflow,
/// phase never hit) are empty fields.
pub fn write_csv<W: Write>(rows: &[TraceMetrics], mut w: W) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for m in rows {
        writeln!(
            w,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            m.n,
            m.seed,
            m.trial,
            m.num_a,
            m.init_kind,
            fmt_opt_u64(m.interactions),
            fmt_opt_f64(m.parallel_time),
            m.resets,
            fmt_opt_f64(m.phases.s_rank),
            fmt_opt_f64(m.phases.t_swap),
            fmt_opt_f64(m.phases.s_dec),
            fmt_opt_f64(m.phases.s_tim),
            fmt_opt_f64(m.phases.s_em),
            m.correct,
        )?;
    }
    Ok(())
}

pub fn csv_string(rows: &[TraceMetrics]) -> String {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("csv is utf-8")
}

/// Sanity check used by callers that demand universal correctness: every
/// row silenced and stabilized to the majority opinion.
pub fn all_correct_no_overflow(rows: &[TraceMetrics]) -> bool {
    rows.iter().all(|m| m.correct && m.interactions.is_some())
}

/// Quick correctness probe of a final configuration against its inputs.
pub fn outputs_match_oracle(config: &Configuration) -> bool {
    let oracle = majority_oracle(config.inputs()).expect("non-empty");
    config.outputs().iter().all(|o: &Opinion| *o == oracle)
}
