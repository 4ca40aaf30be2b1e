//! Property tests over the transition function and the execution loop.

use proptest::prelude::*;

use popmaj::engine::{self, delta_with_outcome};
use popmaj::verifier::{state_space_size, unrank_state, VerifierCaps};
use popmaj::{
    AgentState, Configuration, Input, InteractionPair, Params, Role, RunOptions, Scheduler,
    UniformScheduler,
};

const TEST_N: u32 = 7;

fn test_params() -> Params {
    Params::new(TEST_N, 4, 0).unwrap()
}

fn caps_of(p: &Params) -> VerifierCaps {
    VerifierCaps::new(p.r_max, p.w_max, p.timer_max)
}

prop_compose! {
    /// Any canonical in-range state under the test parameters.
    fn arb_state()(idx in 0u64..state_space_size(TEST_N, &caps_of(&test_params()))) -> AgentState {
        unrank_state(idx, TEST_N, &caps_of(&test_params()))
    }
}

fn arb_input() -> impl Strategy<Value = Input> {
    prop_oneof![Just(Input::A), Just(Input::B)]
}

prop_compose! {
    fn arb_config()(
        states in prop::collection::vec(arb_state(), TEST_N as usize),
        inputs in prop::collection::vec(arb_input(), TEST_N as usize),
    ) -> Configuration {
        Configuration::new(inputs, states).unwrap()
    }
}

proptest! {
    /// Same pair of (state, input) pairs always maps to the same result.
    #[test]
    fn delta_is_deterministic(s0 in arb_state(), s1 in arb_state(),
                              x0 in arb_input(), x1 in arb_input()) {
        let p = test_params();
        let a = delta_with_outcome(s0, x0, s1, x1, &p);
        let b = delta_with_outcome(s0, x0, s1, x1, &p);
        prop_assert_eq!(a, b);
    }

    /// Valid states map to valid canonical states: the transition function
    /// is closed over the enumerated space, including counter bounds.
    #[test]
    fn delta_preserves_validity(s0 in arb_state(), s1 in arb_state(),
                                x0 in arb_input(), x1 in arb_input()) {
        let p = test_params();
        let (t0, t1, _) = delta_with_outcome(s0, x0, s1, x1, &p);
        prop_assert!(t0.validate(&p).is_ok(), "{:?}", t0);
        prop_assert!(t1.validate(&p).is_ok(), "{:?}", t1);
    }

    /// Closure also holds under verification-sized counter caps.
    #[test]
    fn delta_preserves_validity_under_caps(seed in any::<u64>()) {
        let p = Params::new(3, 4, 0).unwrap().with_caps(1, 1, 1).unwrap();
        let caps = VerifierCaps::new(1, 1, 1);
        let total = state_space_size(3, &caps);
        let mut rng = popmaj::SimRng::new(seed);
        for _ in 0..64 {
            let s0 = unrank_state(rng.bounded(total), 3, &caps);
            let s1 = unrank_state(rng.bounded(total), 3, &caps);
            let (t0, t1, _) = delta_with_outcome(s0, Input::A, s1, Input::B, &p);
            prop_assert!(t0.validate(&p).is_ok());
            prop_assert!(t1.validate(&p).is_ok());
        }
    }

    /// A step rewrites at most the two interacting agents.
    #[test]
    fn step_is_local(config in arb_config(), i in 0u32..TEST_N, j in 0u32..TEST_N) {
        prop_assume!(i != j);
        let p = test_params();
        let next = engine::step(&config, InteractionPair::new(i, j), &p).unwrap();
        prop_assert_eq!(next.inputs(), config.inputs(), "inputs are immutable");
        for k in 0..config.len() {
            if k != i as usize && k != j as usize {
                prop_assert_eq!(next.state(k), config.state(k));
            }
        }
    }

    /// Short runs keep inputs bit-identical and are reproducible from the
    /// seed.
    #[test]
    fn runs_are_reproducible_and_input_preserving(config in arb_config(), seed in any::<u64>()) {
        let p = test_params();
        let opts = RunOptions::new(2_000);
        let mut s1 = UniformScheduler::new(TEST_N, seed).unwrap();
        let mut s2 = UniformScheduler::new(TEST_N, seed).unwrap();
        let a = engine::run(&config, &p, &mut s1, &opts).unwrap();
        let b = engine::run(&config, &p, &mut s2, &opts).unwrap();
        prop_assert_eq!(a.final_config.inputs(), config.inputs());
        prop_assert_eq!(&a.final_config, &b.final_config);
        prop_assert_eq!(a.interactions_to_silence, b.interactions_to_silence);
        prop_assert_eq!(a.resets_triggered, b.resets_triggered);
    }

    /// The input-ordered swap exchanges the two full states. Ranks away
    /// from the deciding and top ranks keep the decision and timer rules
    /// out, isolating the swap itself.
    #[test]
    fn swap_permutes_states(r0 in 1u32..=TEST_N, r1 in 1u32..=TEST_N, timer in 0u32..50) {
        let p = test_params();
        let mid = p.mid_rank();
        prop_assume!(r0 < r1 && r0 != mid && r1 != mid);
        let s0 = AgentState::settled(r0, popmaj::ChildMask::EMPTY).with_timer(timer);
        let s1 = AgentState::settled(r1, popmaj::ChildMask::EMPTY);
        // initiator holds B and the lower rank, responder holds A
        let (t0, t1, _) = delta_with_outcome(s0, Input::B, s1, Input::A, &p);
        prop_assert_eq!(t0, s1);
        prop_assert_eq!(t1, s0);
    }

    /// The uniform scheduler only emits valid ordered pairs.
    #[test]
    fn scheduler_pairs_are_valid(seed in any::<u64>()) {
        let mut sched = UniformScheduler::new(TEST_N, seed).unwrap();
        for _ in 0..200 {
            let pair = sched.next_pair().unwrap();
            prop_assert!(pair.validate(TEST_N).is_ok());
        }
    }

    /// While either participant still carries a resetting counter above 1,
    /// the interaction cannot shrink the number of resetting participants.
    #[test]
    fn wave_does_not_recede_at_the_pair_level(s0 in arb_state(), s1 in arb_state(),
                                              x0 in arb_input(), x1 in arb_input()) {
        let p = test_params();
        let armed = |s: &AgentState| s.role == Role::Resetting && s.resetcount > 1;
        prop_assume!(armed(&s0) || armed(&s1));
        let resetting = |s: &AgentState| u32::from(s.role == Role::Resetting);
        let (t0, t1, _) = delta_with_outcome(s0, x0, s1, x1, &p);
        prop_assert!(resetting(&t0) + resetting(&t1) >= resetting(&s0) + resetting(&s1));
    }
}

/// Silence soundness: a silent configuration stays bit-identical under any
/// further scheduling (10 n² steps probed).
#[test]
fn silent_configurations_never_move() {
    for (n, num_a) in [(4u32, 2u32), (5, 3), (7, 1), (8, 8)] {
        let p = Params::new(n, 4, 0).unwrap();
        let config = popmaj::harness::silent_configuration(num_a, n).unwrap();
        assert!(engine::is_silent(&config, &p));
        let mut sched = UniformScheduler::new(n, 99).unwrap();
        let opts = RunOptions::new(10 * n as u64 * n as u64);
        let out = engine::run(&config, &p, &mut sched, &opts).unwrap();
        assert_eq!(out.final_config, config);
        assert_eq!(out.interactions_to_silence, Some(0));
    }
}

/// Empirical scheduler uniformity: each ordered pair within 5 sigma of
/// 1/(n(n-1)) over a million draws.
#[test]
fn scheduler_frequencies_are_uniform() {
    let n = 8u32;
    let mut sched = UniformScheduler::new(n, 4242).unwrap();
    let draws = 1_000_000u64;
    let mut counts = vec![0u64; (n * n) as usize];
    for _ in 0..draws {
        let p = sched.next_pair().unwrap();
        counts[(p.initiator * n + p.responder) as usize] += 1;
    }
    let pairs = (n * (n - 1)) as f64;
    let prob = 1.0 / pairs;
    let sigma = (draws as f64 * prob * (1.0 - prob)).sqrt();
    for u in 0..n {
        for v in 0..n {
            let c = counts[(u * n + v) as usize];
            if u == v {
                assert_eq!(c, 0);
            } else {
                let dev = (c as f64 - draws as f64 * prob).abs();
                assert!(dev < 5.0 * sigma, "pair ({u},{v}) deviates {dev:.0}");
            }
        }
    }
}
