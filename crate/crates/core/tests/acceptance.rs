//! Acceptance suite: one test per gate criterion, each printing a
//! PASS/FAIL line with the measured numbers (run with `--nocapture` to see
//! them on success).

use popmaj::engine::{self, DEFAULT_T_RANK};
use popmaj::harness::{
    self, default_max_interactions, derive_trial_seed, lb_flip_agent, silent_configuration,
    sweep_with_census, InitKind, NumAPolicy, SweepSpec,
};
use popmaj::majority::PhaseTracker;
use popmaj::verifier::{audit_silent_set, check_stabilization, enumerate_fixpoints, VerifierCaps};
use popmaj::{
    is_silent, AgentState, ChildMask, Configuration, Input, Params, Scheduler,
    SimRng, UniformScheduler,
};

fn all_input_vectors(n: u32) -> Vec<Vec<Input>> {
    (0..=n)
        .map(|k| {
            (0..n)
                .map(|i| if i < k { Input::A } else { Input::B })
                .collect()
        })
        .collect()
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "acceptance {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "{criterion} failed: {detail}");
}

/// Criterion 1: exhaustive stabilization at n = 2 and n = 3 with counters
/// capped at (1,1,1): every terminal SCC is a singleton silent
/// configuration with all outputs equal to the majority opinion.
#[test]
fn criterion_1_exhaustive_stabilization() {
    let caps = VerifierCaps::new(1, 1, 1);
    let start = std::time::Instant::now();
    let mut checked = 0usize;
    let mut ok = true;
    let mut detail = String::new();
    for n in [2u32, 3] {
        for inputs in all_input_vectors(n) {
            let label: String = inputs.iter().map(|x| x.to_string()).collect();
            let report = check_stabilization(n, &inputs, &caps).unwrap();
            checked += 1;
            if !report.all_terminal_silent_correct {
                ok = false;
                detail = format!(
                    "n={n} inputs={label}: {} bad terminal components",
                    report.bad_silent_configs.len()
                );
                break;
            }
        }
    }
    let elapsed = start.elapsed();
    if ok {
        detail = format!("{checked} input vectors verified in {elapsed:.1?}");
    }
    report("criterion 1 (exhaustive stabilization)", ok, &detail);
    assert!(elapsed.as_secs() < 600, "runtime target is 10 minutes");
}

/// Criterion 2: universal correctness at simulation scale: every trial of
/// the full sweep stabilizes to the majority opinion within the default
/// interaction budget.
#[test]
fn criterion_2_universal_correctness() {
    let start = std::time::Instant::now();
    let spec = SweepSpec::new(vec![4, 5, 8, 9, 16, 17, 32, 33, 64], 20, 0xACCE_0002);
    let rows = harness::sweep(&spec).unwrap();
    let incorrect = rows.iter().filter(|m| !m.correct).count();
    let overflows = rows.iter().filter(|m| m.interactions.is_none()).count();
    let detail = format!(
        "{} trials, {} incorrect, {} overflows, {:.1?}",
        rows.len(),
        incorrect,
        overflows,
        start.elapsed()
    );
    report(
        "criterion 2 (universal correctness)",
        incorrect == 0 && overflows == 0,
        &detail,
    );
    assert!(start.elapsed().as_secs() < 1800, "runtime target is 30 minutes");
}

/// Criterion 3: linear expected silence time from the cold start: each
/// doubling of n multiplies the mean parallel silence time by a factor in
/// [1.4, 3.2].
#[test]
fn criterion_3_linear_silence_time() {
    let trials = 200u32;
    let mut means = Vec::new();
    for &n in &[16u32, 32, 64, 128] {
        let mut total = 0.0;
        for trial in 0..trials {
            let seed = derive_trial_seed(0xACCE_0003, n, &InitKind::AllUnsettled, trial);
            let params = Params::new(n, DEFAULT_T_RANK, seed).unwrap();
            let m = harness::run_trial(
                &InitKind::AllUnsettled,
                n,
                n.div_ceil(2),
                seed,
                &params,
                default_max_interactions(n),
            )
            .unwrap();
            total += m
                .parallel_time
                .unwrap_or_else(|| panic!("overflow at n={n} trial={trial}"));
        }
        means.push((n, total / trials as f64));
    }
    let mut ok = true;
    let mut ratios = Vec::new();
    for w in means.windows(2) {
        let ratio = w[1].1 / w[0].1;
        ratios.push(format!("{}->{}: {ratio:.2}", w[0].0, w[1].0));
        if !(1.4..=3.2).contains(&ratio) {
            ok = false;
        }
    }
    let detail = format!(
        "means {:?}, doubling ratios [{}] target [1.4, 3.2]",
        means.iter().map(|(n, m)| format!("n={n}:{m:.0}")).collect::<Vec<_>>(),
        ratios.join(", ")
    );
    report("criterion 3 (linear expected silence time)", ok, &detail);
}

/// Criterion 4: with-high-probability tail: at n = 64 at least 99% of 500
/// adversarial trials silence within 40 * t_rank * n * ln n parallel-time
/// units.
#[test]
fn criterion_4_whp_tail() {
    let n = 64u32;
    let trials = 500u32;
    let bound = 40.0 * DEFAULT_T_RANK as f64 * n as f64 * (n as f64).ln();
    let mut within = 0u32;
    let mut worst: f64 = 0.0;
    for trial in 0..trials {
        let seed = derive_trial_seed(0xACCE_0004, n, &InitKind::UniformRandomState, trial);
        let params = Params::new(n, DEFAULT_T_RANK, seed).unwrap();
        let m = harness::run_trial(
            &InitKind::UniformRandomState,
            n,
            (trial % (n + 1)).min(n),
            seed,
            &params,
            default_max_interactions(n),
        )
        .unwrap();
        let t = m.parallel_time.unwrap_or(f64::INFINITY);
        if t <= bound {
            within += 1;
        }
        worst = worst.max(t);
    }
    let frac = within as f64 / trials as f64;
    let detail = format!(
        "{within}/{trials} within {bound:.0} parallel time (fraction {frac:.3}, worst {worst:.0})"
    );
    report("criterion 4 (w.h.p. tail)", frac >= 0.99, &detail);
}

/// Criterion 5: the lower-bound construction: from the flipped silent
/// configuration, the disguised agent's state stays frozen for at least
/// 0.3 * n(n-1)/2 interactions on average (the two identical agents must
/// meet).
#[test]
fn criterion_5_lower_bound_construction() {
    let trials = 200u32;
    let mut ok = true;
    let mut details = Vec::new();
    for &n in &[33u32, 65] {
        let params = Params::new(n, DEFAULT_T_RANK, 0).unwrap();
        let flipped = lb_flip_agent(n);
        let mut total: f64 = 0.0;
        for trial in 0..trials {
            let seed = derive_trial_seed(0xACCE_0005, n, &InitKind::LbFlip, trial);
            let config = harness::generate(&InitKind::LbFlip, n, n / 2, seed, &params).unwrap();
            let watched = config.state(flipped);
            let mut sched = UniformScheduler::new(n, SimRng::derive(seed, &[1])).unwrap();
            let mut current = config;
            let mut steps = 0u64;
            loop {
                let pair = sched.next_pair().unwrap();
                current = engine::step(&current, pair, &params).unwrap();
                steps += 1;
                if current.state(flipped) != watched {
                    break;
                }
                assert!(steps < 10_000_000, "flipped agent never changed");
            }
            total += steps as f64;
        }
        let mean = total / trials as f64;
        let target = 0.3 * (n as f64) * (n as f64 - 1.0) / 2.0;
        let expected = (n as f64) * (n as f64 - 1.0) / 2.0;
        details.push(format!(
            "n={n}: mean {mean:.0} vs target {target:.0} (theory {expected:.0})"
        ));
        if mean < target {
            ok = false;
        }
    }
    report(
        "criterion 5 (lower-bound construction)",
        ok,
        &details.join("; "),
    );
}

/// Criterion 6: silent-set audit: no fixpoint with wrong outputs or with
/// two A-input agents sharing a state at n in {2,3}; additionally 1000
/// randomized silent-shape configurations at n in 4..=8 pass the exact
/// silence check.
#[test]
fn criterion_6_silent_set_audit() {
    let caps = VerifierCaps::new(1, 1, 1);
    let mut violations = 0usize;
    let mut fixpoints = 0usize;
    for n in [2u32, 3] {
        for inputs in all_input_vectors(n) {
            let audit = audit_silent_set(n, &inputs, &caps).unwrap();
            violations += audit.violations.len();
            fixpoints += audit.fixpoint_count;
            // distinctness also holds unconditionally: distinct ranks force
            // distinct states in every fixpoint
            for fp in enumerate_fixpoints(n, &inputs, &caps).unwrap() {
                let mut a_states: Vec<AgentState> = (0..fp.len())
                    .filter(|&i| fp.input(i) == Input::A)
                    .map(|i| fp.state(i))
                    .collect();
                a_states.sort();
                assert!(
                    a_states.windows(2).all(|w| w[0] != w[1]),
                    "duplicate A-state in fixpoint at n={n}"
                );
            }
        }
    }

    // randomized silent shapes: free fields (childmasks, non-deciding
    // timers) must not break exact silence
    let mut rng = SimRng::new(0xACCE_0006);
    let mut shapes = 0usize;
    while shapes < 1000 {
        let n = 4 + (rng.bounded(5) as u32); // 4..=8
        let num_a = rng.bounded(n as u64 + 1) as u32;
        let params = Params::new(n, DEFAULT_T_RANK, 0).unwrap();
        let mut config = silent_configuration(num_a, n).unwrap();
        for i in 0..n as usize {
            let mut s = config.state(i);
            s.childmask = ChildMask::from_bits(rng.bounded(4) as u8).unwrap();
            if s.rank != params.mid_rank() {
                s.timer = rng.bounded(params.timer_max as u64 + 1) as u32;
            }
            config.set_state(i, s);
        }
        assert!(
            is_silent(&config, &params),
            "randomized silent shape moved: {config:?}"
        );
        shapes += 1;
    }
    let detail = format!(
        "{fixpoints} fixpoints audited with {violations} violations; {shapes} randomized silent shapes exactly silent"
    );
    report("criterion 6 (silent-set audit)", violations == 0, &detail);
}

/// Criterion 7: state census: distinct canonical states observed across
/// the sweep grow at most linearly, with the constant fit at n = 16.
#[test]
fn criterion_7_state_census() {
    let mut spec = SweepSpec::new(vec![16, 32, 64, 128], 20, 0xACCE_0007);
    spec.num_a_policy = NumAPolicy::Auto;
    let (rows, census) = sweep_with_census(&spec).unwrap();
    assert!(harness::all_correct_no_overflow(&rows));
    let c = census[&16] as f64 / 16.0;
    let mut ok = true;
    let mut details = vec![format!("fit c = {c:.1} at n=16 (census {})", census[&16])];
    for &n in &[32u32, 64, 128] {
        let observed = census[&n] as f64;
        let bound = c * n as f64;
        details.push(format!("n={n}: {observed} <= {bound:.0}"));
        if observed > bound {
            ok = false;
        }
    }
    report("criterion 7 (state census)", ok, &details.join(", "));
}

/// Criterion 8: swap potential: from 100 random fully ranked
/// configurations at n = 64, the misordered-pair count never increases and
/// the mean parallel time to the input-ordered set is at most 2n.
#[test]
fn criterion_8_swap_potential() {
    let n = 64u32;
    let params = Params::new(n, DEFAULT_T_RANK, 0).unwrap();
    let mut rng = SimRng::new(0xACCE_0008);
    let mut total_parallel = 0.0;
    let mut monotone = true;
    for trial in 0..100u32 {
        // random permutation of ranks over agents, random inputs, deciding
        // agent's timer fully armed so no propagation reset interferes
        let mut ranks: Vec<u32> = (1..=n).collect();
        for i in (1..ranks.len()).rev() {
            let j = rng.bounded(i as u64 + 1) as usize;
            ranks.swap(i, j);
        }
        let inputs: Vec<Input> = (0..n)
            .map(|_| if rng.bounded(2) == 0 { Input::A } else { Input::B })
            .collect();
        let states: Vec<AgentState> = ranks
            .iter()
            .map(|&r| {
                let timer = if r == params.mid_rank() { params.timer_max } else { 0 };
                AgentState::settled(r, ChildMask::EMPTY).with_timer(timer)
            })
            .collect();
        let mut config = Configuration::new(inputs, states).unwrap();
        assert!(popmaj::phase(&config, &params).in_s_rank);

        let mut tracker = PhaseTracker::new(&config, &params);
        let mut potential = tracker.swap_potential();
        let mut sched = UniformScheduler::new(n, 0x5AB0 + trial as u64).unwrap();
        let mut steps = 0u64;
        while potential > 0 {
            let pair = sched.next_pair().unwrap();
            let u = pair.initiator as usize;
            let v = pair.responder as usize;
            let before = [config.state(u), config.state(v)];
            config = engine::step(&config, pair, &params).unwrap();
            steps += 1;
            let mut changes = Vec::new();
            for (slot, agent) in [u, v].into_iter().enumerate() {
                if config.state(agent) != before[slot] {
                    changes.push(popmaj::majority::AgentDelta {
                        agent,
                        before: before[slot],
                        after: config.state(agent),
                    });
                }
            }
            if !changes.is_empty() {
                tracker.apply(&changes, &config);
            }
            let now = tracker.swap_potential();
            if now > potential {
                monotone = false;
            }
            potential = now;
            assert!(steps < 10_000_000, "never reached the ordered set");
        }
        total_parallel += steps as f64 / n as f64;
    }
    let mean = total_parallel / 100.0;
    let detail = format!(
        "monotone in all traces: {monotone}; mean parallel time to ordered set {mean:.1} (target <= {})",
        2 * n
    );
    report(
        "criterion 8 (swap potential)",
        monotone && mean <= 2.0 * n as f64,
        &detail,
    );
}
