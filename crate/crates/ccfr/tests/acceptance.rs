//! Release acceptance suite: one test per criterion, each printing a
//! PASS/FAIL line with the measured quantities.
//!
//! Run with `cargo test -p ccfr --test acceptance -- --nocapture`.

use std::sync::OnceLock;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use ccfr::cfr::{exact_best_response, exploitability, CfrGame, CfrRun};
use ccfr::constraints::{
    build_exact_constraints, build_opponent_constraints, build_risk_constraint, patroller_risk,
    probe_strategy, robust_counter_profile, simulate_observations, two_seat_value,
    wilson_interval, LinearConstraint, OpponentModelOptions,
};
use ccfr::efg::{seq_of, BehavioralStrategy, GameTree, Player};
use ccfr::games::{build_kuhn, build_transit, target_profile_from_abstraction, PokerGame};
use ccfr::lp::{constrained_equilibrium, equilibrium_profile};
use ccfr::solver::{
    solve_view, tilted_value_closed_form, CcfrConfig, CcfrResult, CcfrRun, Constraint,
    ConstraintSet, StepRule,
};

fn report(criterion: usize, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:2} [{}] {name}: {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn uniform(game: &GameTree, player: Player) -> BehavioralStrategy {
    BehavioralStrategy::uniform(&game.seq_index(player).unwrap().layout, player)
}

fn avg_profile(run: &CfrRun<GameTree>) -> (BehavioralStrategy, BehavioralStrategy) {
    (
        BehavioralStrategy {
            player: Player::One,
            probs: run.average_behavioral(Player::One).unwrap(),
        },
        BehavioralStrategy {
            player: Player::Two,
            probs: run.average_behavioral(Player::Two).unwrap(),
        },
    )
}

#[test]
fn criterion_01_unconstrained_cfr_matches_lp() {
    let started = Instant::now();
    let g = build_kuhn().tree;
    let mut run = CfrRun::new(&g);
    run.run(1_000_000);
    let (b1, b2) = avg_profile(&run);
    let e = exploitability(&g, (&b1, &b2)).unwrap();
    let value = g.expected_value([&b1.probs, &b2.probs]);
    let (_, _, lp_value) = equilibrium_profile(&g, false).unwrap();
    let elapsed = started.elapsed().as_secs_f64();
    let pass = e <= 0.001 && (value - lp_value).abs() <= 1e-3 && elapsed < 60.0;
    report(
        1,
        "unconstrained correctness",
        pass,
        &format!(
            "exploitability {e:.3e} (<= 1e-3), |value - lp| {:.3e} (<= 1e-3), {elapsed:.1}s (< 60s)",
            (value - lp_value).abs()
        ),
    );
}

#[test]
fn criterion_02_ccfr_reduces_to_cfr_at_k_zero() {
    let g = build_kuhn().tree;
    let none = ConstraintSet::new(Player::One);
    let cfg = CcfrConfig::new(1_000);
    let mut constrained = CcfrRun::new(&g, &none, &cfg).unwrap();
    let mut vanilla = CfrRun::new(&g);
    let mut identical = true;
    for _ in 0..1_000 {
        constrained.iterate();
        vanilla.iterate();
        for p in [Player::One, Player::Two] {
            let a = &constrained.players[p.index()].strat;
            let b = &vanilla.players[p.index()].strat;
            identical &= a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits());
        }
    }
    for p in [Player::One, Player::Two] {
        let a = constrained.average_realization(p);
        let b = vanilla.average_realization(p).unwrap();
        identical &= a.iter().zip(b.iter()).all(|(x, y)| x.to_bits() == y.to_bits());
    }
    report(
        2,
        "k = 0 reduction",
        identical,
        "per-iteration strategies and averages bit-identical over 1000 iterations",
    );
}

/// Shared constrained-Kuhn run for criteria 3 and 6.
struct ConstrainedKuhn {
    result: CcfrResult,
    lp_value: f64,
    lambda_star: f64,
    seconds: f64,
}

fn constrained_kuhn() -> &'static ConstrainedKuhn {
    static RUN: OnceLock<ConstrainedKuhn> = OnceLock::new();
    RUN.get_or_init(|| {
        let g = build_kuhn().tree;
        let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
        let eq = constrained_equilibrium(&g, Player::One, &cs, false).unwrap();
        let started = Instant::now();
        let mut cfg = CcfrConfig::new(1_000_000);
        cfg.beta = Some(16.0);
        cfg.step_rule = StepRule::Constant { alpha: 1.0 };
        let result = solve_view(&g, &cs, &cfg).unwrap();
        ConstrainedKuhn {
            result,
            lp_value: eq.value,
            lambda_star: eq.lambda[0],
            seconds: started.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_03_constrained_optimality_vs_lp() {
    let g = build_kuhn().tree;
    let shared = constrained_kuhn();
    let violation = shared.result.final_violations[0];
    let worst_case =
        -g.best_response_value(Player::Two, &shared.result.avg_behavioral[0]);
    let gap = (worst_case - shared.lp_value).abs();
    let pass = violation <= 0.001 && gap <= 0.005 && shared.seconds < 300.0;
    report(
        3,
        "constrained optimality vs LP",
        pass,
        &format!(
            "violation {violation:.3e} (<= 1e-3), value gap {gap:.3e} (<= 5e-3), {:.1}s (< 300s)",
            shared.seconds
        ),
    );
}

#[test]
fn criterion_04_transit_sweep_risk_and_tradeoff() {
    let started = Instant::now();
    let game = build_transit(3).unwrap();
    let view = game.nfgss_view();
    let bounds = [0.02, 0.1, 0.5];
    let mut risks = Vec::new();
    let mut evader_br = Vec::new();
    for &b_r in &bounds {
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(build_risk_constraint(&view, b_r).unwrap());
        let mut cfg = CcfrConfig::new(100_000);
        cfg.step_rule = StepRule::Constant { alpha: 1.0 };
        let res = solve_view(&view, &cs, &cfg).unwrap();
        risks.push(patroller_risk(&view, &res.avg_behavioral[0]));
        evader_br.push(view.best_response_value(Player::Two, &res.avg_behavioral[0]));
    }
    let max_risk_err = risks
        .iter()
        .zip(&bounds)
        .map(|(r, b)| (r - b).abs())
        .fold(0.0f64, f64::max);
    let monotone = evader_br.windows(2).all(|w| w[1] <= w[0] + 0.005);
    let elapsed = started.elapsed().as_secs_f64();
    let pass = max_risk_err <= 0.001 && monotone && elapsed < 600.0;
    report(
        4,
        "transit sweep at w = 3",
        pass,
        &format!(
            "max |risk - b_r| {max_risk_err:.2e} (<= 1e-3), evader BR {evader_br:.5?} weakly decreasing, {elapsed:.1}s (< 600s)"
        ),
    );
}

#[test]
fn criterion_05_tilted_value_identities() {
    let g = build_kuhn().tree;
    let index = g.seq_index(Player::One).unwrap();
    let n = index.num_seqs();
    let mut rng = ChaCha20Rng::seed_from_u64(505);
    let mut worst_lemma1 = 0.0f64;
    let mut worst_lemma2 = 0.0f64;
    for _ in 0..100 {
        // Random profile, random two-constraint set, random multipliers.
        let b1 = BehavioralStrategy::random(&index.layout, Player::One, &mut rng);
        let b2 = BehavioralStrategy::random(
            &g.seq_index(Player::Two).unwrap().layout,
            Player::Two,
            &mut rng,
        );
        let mut cs = ConstraintSet::new(Player::One);
        for _ in 0..2 {
            let mut coeffs = Vec::new();
            for s in 1..n {
                if rng.gen_bool(0.4) {
                    coeffs.push((s, rng.gen_range(-1.0..1.0)));
                }
            }
            cs.push(LinearConstraint::new(coeffs, rng.gen_range(-0.5..0.5), n).unwrap());
        }
        let lambda = [rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0)];
        let x = seq_of(&b1, &g).unwrap();
        let mut tilt = vec![0.0; n];
        cs.tilt_into(&lambda, &x.values, &mut tilt);

        // Recurrence values from the sweep.
        let mut values = vec![0.0; n];
        let mut scratch = ccfr::cfr::SweepScratch::default();
        g.sweep_values(
            Player::One,
            [&b1.probs, &b2.probs],
            Some(&tilt),
            &mut values,
            &mut scratch,
        );

        for (id, info) in g.infosets(Player::One).iter().enumerate() {
            for a in 0..info.actions.len() {
                let closed =
                    tilted_value_closed_form(&g, (&b1, &b2), Player::One, &tilt, id, Some(a))
                        .unwrap();
                worst_lemma1 =
                    worst_lemma1.max((closed - values[index.layout.seq(id, a)]).abs());
            }
        }

        // Telescoping identity at the root infosets with a random deviation.
        let alt = BehavioralStrategy::random(&index.layout, Player::One, &mut rng);
        for (id, _) in g.infosets(Player::One).iter().enumerate() {
            let mut rel = vec![0.0; n];
            let mut set_reach = vec![0.0; index.layout.sets.len()];
            set_reach[id] = 1.0;
            for s in index.layout.seq_range(id) {
                rel[s] = alt.probs[s];
            }
            for set in index.topo() {
                if set == id {
                    continue;
                }
                let up = rel[index.parent_seq[set]];
                if up != 0.0 {
                    set_reach[set] = up;
                    for s in index.layout.seq_range(set) {
                        rel[s] = up * alt.probs[s];
                    }
                }
            }
            let mut lhs = 0.0;
            for (set, &reach) in set_reach.iter().enumerate() {
                if reach == 0.0 {
                    continue;
                }
                let v_set: f64 = index
                    .layout
                    .seq_range(set)
                    .map(|s| b1.probs[s] * values[s])
                    .sum();
                let r_alt: f64 = index
                    .layout
                    .seq_range(set)
                    .map(|s| alt.probs[s] * (values[s] - v_set))
                    .sum();
                lhs += reach * r_alt;
            }
            let rhs_alt =
                tilted_value_closed_form(&g, (&alt, &b2), Player::One, &tilt, id, None).unwrap();
            let rhs_cur =
                tilted_value_closed_form(&g, (&b1, &b2), Player::One, &tilt, id, None).unwrap();
            worst_lemma2 = worst_lemma2.max((lhs - (rhs_alt - rhs_cur)).abs());
        }
    }
    let pass = worst_lemma1 <= 1e-10 && worst_lemma2 <= 1e-10;
    report(
        5,
        "tilted-value identities",
        pass,
        &format!(
            "recurrence vs closed form {worst_lemma1:.2e} (<= 1e-10), telescoping {worst_lemma2:.2e} (<= 1e-10), 100 draws"
        ),
    );
}

#[test]
fn criterion_06_feasibility_bound_at_every_checkpoint() {
    let shared = constrained_kuhn();
    let mut violations = 0usize;
    let mut min_margin = f64::INFINITY;
    for d in &shared.result.diagnostics {
        for &v in &d.violations {
            if v > d.thm2_rhs + 1e-12 {
                violations += 1;
            }
            min_margin = min_margin.min(d.thm2_rhs - v);
        }
    }
    report(
        6,
        "feasibility bound audit",
        violations == 0,
        &format!(
            "{} checkpoints, 0 bound violations required, found {violations}; smallest margin {min_margin:.3e}",
            shared.result.diagnostics.len()
        ),
    );
}

#[test]
fn criterion_07_beta_above_dual_removes_the_floor() {
    let g = build_kuhn().tree;
    let shared = constrained_kuhn();
    let beta = 2.0 * (shared.lambda_star + 1.0);
    let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
    let n = g.num_seqs(Player::One).unwrap();
    let mut cs = ConstraintSet::new(Player::One);
    cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
    let mut cfg = CcfrConfig::new(1_000_000);
    cfg.beta = Some(beta);
    cfg.step_rule = StepRule::Constant { alpha: 1.0 };
    let res = solve_view(&g, &cs, &cfg).unwrap();
    let violation = res.final_violations[0];
    let floor = g.delta_u() / beta;
    let pass = violation <= 0.002 && 0.002 < floor;
    report(
        7,
        "beta above the LP dual",
        pass,
        &format!(
            "beta {beta:.3} > lambda* {:.3}; violation {violation:.3e} (<= 2e-3) with no delta_u/beta floor ({floor:.3})",
            shared.lambda_star
        ),
    );
}

#[test]
fn criterion_08_infeasible_pair_minimizes_total_violation() {
    let g = build_kuhn().tree;
    let seq = g.lookup_seq(Player::One, "J:", "bet").unwrap();
    let n = g.num_seqs(Player::One).unwrap();
    let mut cs = ConstraintSet::new(Player::One);
    cs.push(LinearConstraint::upper_bound(seq, 0.2, n).unwrap());
    cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
    let beta = 400.0;
    let mut cfg = CcfrConfig::new(100_000);
    cfg.beta = Some(beta);
    cfg.step_rule = StepRule::Constant { alpha: 1.0 };
    let res = solve_view(&g, &cs, &cfg).unwrap();
    let f_star = 0.3;
    let tolerance = 0.01 + g.delta_u() / beta;
    let err = (res.sum_positive_violation - f_star).abs();
    report(
        8,
        "infeasible pair",
        err <= tolerance,
        &format!(
            "sum of positive violations {:.5} vs f* = {f_star} (|err| {err:.2e} <= {tolerance:.3})",
            res.sum_positive_violation
        ),
    );
}

#[test]
fn criterion_09_wilson_coverage() {
    let gamma = 0.95;
    let n = 100u64;
    let datasets = 10_000usize;
    let mut rng = ChaCha20Rng::seed_from_u64(909);
    let mut detail = String::new();
    let mut pass = true;
    for p in [0.1, 0.5, 0.9] {
        let mut covered = 0usize;
        for _ in 0..datasets {
            let mut successes = 0u64;
            for _ in 0..n {
                if rng.gen_range(0.0..1.0) < p {
                    successes += 1;
                }
            }
            let (l, u) = wilson_interval(successes, n, gamma).unwrap();
            if l <= p && p <= u {
                covered += 1;
            }
        }
        let coverage = covered as f64 / datasets as f64;
        pass &= coverage >= 0.93;
        detail.push_str(&format!("p={p}: {coverage:.4}  "));
    }
    report(
        9,
        "Wilson coverage",
        pass,
        &format!("{detail}(all >= 0.93 at gamma = 0.95, n = 100, 10^4 datasets)"),
    );
}

struct OpponentModelRefs {
    game: PokerGame,
    target: (BehavioralStrategy, BehavioralStrategy),
    nash_ref: f64,
    br_ref: f64,
}

fn opponent_model_setup() -> OpponentModelRefs {
    let game = build_kuhn();
    let target = target_profile_from_abstraction(&game, "JQ.K", 50_000).unwrap();
    let (x, y, _) = equilibrium_profile(&game.tree, false).unwrap();
    let nash = (
        ccfr::efg::behavioral_of(&x, &game.tree).unwrap(),
        ccfr::efg::behavioral_of(&y, &game.tree).unwrap(),
    );
    let nash_ref = two_seat_value(&game, (&nash.0, &nash.1), (&target.0, &target.1));
    let br1 = exact_best_response(&game.tree, &target.1, Player::One).unwrap();
    let br2 = exact_best_response(&game.tree, &target.0, Player::Two).unwrap();
    let br_ref = two_seat_value(&game, (&br1.1, &br2.1), (&target.0, &target.1));
    OpponentModelRefs {
        game,
        target,
        nash_ref,
        br_ref,
    }
}

fn spearman(xs: &[f64], ys: &[f64]) -> f64 {
    let rank = |v: &[f64]| -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
        let mut r = vec![0.0; v.len()];
        for (pos, &i) in idx.iter().enumerate() {
            r[i] = pos as f64;
        }
        r
    };
    let rx = rank(xs);
    let ry = rank(ys);
    let n = xs.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

#[test]
fn criterion_10_opponent_modeling_trend() {
    let started = Instant::now();
    let refs = opponent_model_setup();
    let game = &refs.game;
    let target = (&refs.target.0, &refs.target.1);
    let probes = [
        probe_strategy(game, Player::One),
        probe_strategy(game, Player::Two),
    ];
    let mut cfg = CcfrConfig::new(100_000);
    cfg.step_rule = StepRule::Decaying { c: 1000.0 };
    let options = OpponentModelOptions {
        gamma: 0.99,
        use_estimated_own_reach: true,
    };
    let grid = [100usize, 1_000, 10_000, 100_000];
    let mut means = Vec::new();
    let mut above_nash_from_200 = true;
    for &n in [100usize, 200, 1_000, 10_000, 100_000].iter() {
        let mut values = Vec::new();
        for seed in 0..10u64 {
            let log1 = simulate_observations(game, target, Player::Two, n, 900 + seed).unwrap();
            let log2 =
                simulate_observations(game, target, Player::One, n, 91_000 + seed).unwrap();
            let cs1 = build_opponent_constraints(game, &log1, &options, &probes[1]).unwrap();
            let cs2 = build_opponent_constraints(game, &log2, &options, &probes[0]).unwrap();
            let counter = robust_counter_profile(game, [&cs1, &cs2], &cfg).unwrap();
            let v = two_seat_value(game, (&counter.ours[0], &counter.ours[1]), target);
            values.push(v);
            if n >= 200 && v < refs.nash_ref {
                above_nash_from_200 = false;
            }
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        if grid.contains(&n) {
            means.push(mean);
        }
    }
    let ns: Vec<f64> = grid.iter().map(|&n| n as f64).collect();
    let rho = spearman(&ns, &means);

    // Infinite-data mode.
    let cs1 = build_exact_constraints(game, target, Player::Two, &probes[1]).unwrap();
    let cs2 = build_exact_constraints(game, target, Player::One, &probes[0]).unwrap();
    let counter = robust_counter_profile(game, [&cs1, &cs2], &cfg).unwrap();
    let exact_value = two_seat_value(game, (&counter.ours[0], &counter.ours[1]), target);
    let exact_gap = (exact_value - refs.br_ref).abs();

    let elapsed = started.elapsed().as_secs_f64();
    let pass = rho > 0.0 && above_nash_from_200 && exact_gap <= 0.01 && elapsed < 180.0;
    report(
        10,
        "opponent-modeling trend",
        pass,
        &format!(
            "spearman(n, mean value) {rho:.2} (> 0), all seeds >= nash ref {:.4} from n = 200: {above_nash_from_200}, exact-mode gap {exact_gap:.2e} (<= 1e-2), {elapsed:.0}s (< 180s)",
            refs.nash_ref
        ),
    );
}

#[test]
fn criterion_11_subgradient_audits() {
    let mut rng = ChaCha20Rng::seed_from_u64(1111);
    let mut worst = 0.0f64;
    let h = 1e-6;
    let mut audit = |c: &dyn Constraint, points: &[Vec<f64>]| {
        for x in points {
            let grad = c.subgradient(x);
            for i in 0..x.len() {
                let mut hi = x.clone();
                hi[i] += h;
                let mut lo = x.clone();
                lo[i] -= h;
                let fd = (c.value(&hi) - c.value(&lo)) / (2.0 * h);
                worst = worst.max((fd - grad[i]).abs());
            }
        }
    };

    // Opponent-model constraints on Kuhn (both families), at 100 random
    // polytope points.
    let game = build_kuhn();
    let target = target_profile_from_abstraction(&game, "JQ.K", 10_000).unwrap();
    let log = simulate_observations(&game, (&target.0, &target.1), Player::Two, 500, 11).unwrap();
    let options = OpponentModelOptions {
        gamma: 0.95,
        use_estimated_own_reach: true,
    };
    let probe = probe_strategy(&game, Player::Two);
    let set = build_opponent_constraints(&game, &log, &options, &probe).unwrap();
    let points: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            ccfr::efg::random_realization(&game.tree, Player::One, &mut rng)
                .unwrap()
                .values
        })
        .collect();
    for c in set.iter() {
        audit(c, &points[..10]); // 10 points per generated constraint, 180 constraints
    }

    // Risk constraint on the transit occupancy polytope, 100 points.
    let transit = build_transit(2).unwrap();
    let view = transit.nfgss_view();
    let risk = build_risk_constraint(&view, 0.1).unwrap();
    let transit_points: Vec<Vec<f64>> = (0..100)
        .map(|_| {
            let strat = view.random_strategy(Player::One, &mut rng);
            let mut x = vec![0.0; view.seq_layout().num_seqs];
            view.realization_into(Player::One, &strat, &mut x);
            x
        })
        .collect();
    audit(&risk, &transit_points);

    // Generic sequence bounds at 100 points.
    let n = game.tree.num_seqs(Player::One).unwrap();
    let seq = game.tree.lookup_seq(Player::One, "Q:", "bet").unwrap();
    let upper = LinearConstraint::upper_bound(seq, 0.4, n).unwrap();
    let lower = LinearConstraint::lower_bound(seq, 0.2, n).unwrap();
    audit(&upper, &points);
    audit(&lower, &points);

    report(
        11,
        "subgradient audits",
        worst <= 1e-6,
        &format!("max central-difference error {worst:.2e} (<= 1e-6) across shipped constraints"),
    );
}

#[test]
fn uniform_profile_sanity_anchor() {
    // Not a numbered criterion: guards the suite's shared fixtures.
    let g = build_kuhn().tree;
    let e = exploitability(&g, (&uniform(&g, Player::One), &uniform(&g, Player::Two))).unwrap();
    assert!(e > 0.05);
}
