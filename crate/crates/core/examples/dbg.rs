use popmaj::harness::*;
use popmaj::ranking::ResetCause;
use popmaj::*;

fn main() {
    let n = 32u32;
    let mut clean = 0u32;
    let trials = 300u32;
    for trial in 0..trials {
        let seed = derive_trial_seed(777, n, &InitKind::AllUnsettled, trial);
        let params = Params::new(n, engine::DEFAULT_T_RANK, seed).unwrap();
        let config = generate(&InitKind::AllUnsettled, n, 17, SimRng::derive(seed, &[0]), &params).unwrap();
        let mut sched = UniformScheduler::new(n, SimRng::derive(seed, &[1])).unwrap();
        let mut current = config;
        let mut conflict_free = true;
        let mut rank1_exits = 0u64;
        for _ in 0..default_max_interactions(n) {
            let pair = sched.next_pair().unwrap();
            let (u, v) = (pair.initiator as usize, pair.responder as usize);
            let pre = [current.state(u), current.state(v)];
            let (t0, t1, outcome) = engine::delta_with_outcome(
                pre[0], current.input(u), pre[1], current.input(v), &params);
            for (before, after) in [(pre[0], t0), (pre[1], t1)] {
                if before.role == Role::Resetting && after.role == Role::Settled && after.rank == 1 {
                    rank1_exits += 1;
                }
            }
            if outcome.by == ResetCause::RankConflict {
                conflict_free = false;
            }
            current.set_state(u, t0);
            current.set_state(v, t1);
            if is_silent(&current, &params) {
                break;
            }
        }
        if conflict_free && rank1_exits >= 1 {
            clean += 1;
        }
    }
    println!("clean {clean}/{trials} = {:.3}", clean as f64 / trials as f64);
}
