//! Constrained-solve driver.
//!
//! Each iteration follows the alternating order: the unconstrained player
//! updates from the previous profile with plain counterfactual values, the
//! multipliers take a projected gradient-ascent step on the violations of
//! the constrained player's current realization plan, and the constrained
//! player then updates against the refreshed opponent with values tilted by
//! the multiplier-weighted subgradients (evaluated at that same realization
//! plan). Averages accumulate the post-update strategies.

use serde::{Deserialize, Serialize};

use crate::cfr::{checkpoints, CfrGame, PlayerState, SweepScratch};
use crate::efg::{GameTree, Player};
use crate::error::{Error, Result};
use crate::solver::bounds::{compute_bound_constants, theorem_bounds, BoundReport};
use crate::solver::constraint::ConstraintSet;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepRule {
    /// αᵗ = alpha.
    Constant { alpha: f64 },
    /// αᵗ = c / √t.
    Decaying { c: f64 },
    /// αᵗ = β / (G √T) with T fixed in advance; G is resolved from the
    /// bound report unless supplied.
    Corollary { g: Option<f64> },
}

impl StepRule {
    fn validate(&self) -> Result<()> {
        let positive = match self {
            StepRule::Constant { alpha } => *alpha > 0.0,
            StepRule::Decaying { c } => *c > 0.0,
            StepRule::Corollary { g } => g.map_or(true, |g| g > 0.0),
        };
        if positive {
            Ok(())
        } else {
            Err(Error::InvalidParam("step size must be positive".into()))
        }
    }

    fn alpha(&self, t: usize, beta: f64, g_bound: f64, iterations: usize) -> f64 {
        match self {
            StepRule::Constant { alpha } => *alpha,
            StepRule::Decaying { c } => c / (t as f64).sqrt(),
            StepRule::Corollary { g } => {
                let g = g.unwrap_or(g_bound).max(f64::MIN_POSITIVE);
                beta / (g * (iterations as f64).sqrt())
            }
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcfrConfig {
    pub iterations: usize,
    /// Multiplier ceiling; `None` resolves to 100·Δ_u.
    pub beta: Option<f64>,
    pub step_rule: StepRule,
    pub constrained_player: Player,
    /// Clamp multipliers to [0, β] (can be disabled; the floor at 0 always
    /// applies).
    pub clamp_lambda: bool,
    pub beta_doubling: bool,
    /// Doubling triggers when a mean multiplier reaches θ·β.
    pub doubling_theta: f64,
    pub doubling_cap: u32,
    pub checkpoints_per_decade: u32,
    pub seed: u64,
}

impl CcfrConfig {
    pub fn new(iterations: usize) -> Self {
        CcfrConfig {
            iterations,
            beta: None,
            step_rule: StepRule::Constant { alpha: 1.0 },
            constrained_player: Player::One,
            clamp_lambda: true,
            beta_doubling: false,
            doubling_theta: 0.9,
            doubling_cap: 10,
            checkpoints_per_decade: 8,
            seed: 1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParam("iterations must be >= 1".into()));
        }
        if let Some(b) = self.beta {
            if !(b >= 0.0) {
                return Err(Error::InvalidParam("beta must be >= 0".into()));
            }
        }
        if !(self.doubling_theta > 0.0 && self.doubling_theta < 1.0) {
            return Err(Error::InvalidParam("doubling theta must be in (0,1)".into()));
        }
        self.step_rule.validate()
    }

    fn resolve_beta(&self, delta_u: f64) -> f64 {
        self.beta.unwrap_or(100.0 * delta_u)
    }
}

/// Multiplier state: λ ∈ [0,β]^k plus the running sums needed for the mean
/// and the exact multiplier regret.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LagrangeState {
    pub lambda: Vec<f64>,
    pub beta: f64,
    pub clamp: bool,
    pub t: usize,
    lambda_sum: Vec<f64>,
    f_sum: Vec<f64>,
    lf_sum: Vec<f64>,
}

impl LagrangeState {
    pub fn new(k: usize, beta: f64, clamp: bool) -> Self {
        LagrangeState {
            lambda: vec![0.0; k],
            beta,
            clamp,
            t: 0,
            lambda_sum: vec![0.0; k],
            f_sum: vec![0.0; k],
            lf_sum: vec![0.0; k],
        }
    }

    pub fn with_initial(mut self, lambda: &[f64]) -> Self {
        for (l, &v) in self.lambda.iter_mut().zip(lambda) {
            *l = v.clamp(0.0, self.beta);
        }
        self
    }

    /// λ_i ← clamp(λ_i + α·f_i, [0, β]), then record the applied pair
    /// (λᵗ, f(xᵗ)) for the regret bookkeeping.
    pub fn update(&mut self, violations: &[f64], alpha: f64) {
        debug_assert_eq!(violations.len(), self.lambda.len());
        for (i, (l, &f)) in self.lambda.iter_mut().zip(violations).enumerate() {
            *l += alpha * f;
            if *l < 0.0 {
                *l = 0.0;
            }
            if self.clamp && *l > self.beta {
                *l = self.beta;
            }
            self.lambda_sum[i] += *l;
            self.f_sum[i] += f;
            self.lf_sum[i] += *l * f;
        }
        self.t += 1;
    }

    pub fn mean(&self) -> Vec<f64> {
        if self.t == 0 {
            return vec![0.0; self.lambda.len()];
        }
        self.lambda_sum.iter().map(|s| s / self.t as f64).collect()
    }

    /// Exact time-averaged regret against the best fixed λ* ∈ [0,β]^k: the
    /// per-coordinate optimum sits at β when Σ_t f_i(xᵗ) > 0 and at 0
    /// otherwise.
    pub fn measured_regret(&self) -> f64 {
        if self.t == 0 {
            return 0.0;
        }
        let mut total = 0.0;
        for i in 0..self.lambda.len() {
            total += (self.beta * self.f_sum[i]).max(0.0) - self.lf_sum[i];
        }
        total / self.t as f64
    }
}

/// Exact R_λ^T(β) of an explicit history of applied (λᵗ, f(xᵗ)) pairs.
pub fn measure_lambda_regret(history: &[(Vec<f64>, Vec<f64>)], beta: f64) -> f64 {
    if history.is_empty() {
        return 0.0;
    }
    let k = history[0].0.len();
    let mut total = 0.0;
    for i in 0..k {
        let f_sum: f64 = history.iter().map(|(_, f)| f[i]).sum();
        let lf_sum: f64 = history.iter().map(|(l, f)| l[i] * f[i]).sum();
        total += (beta * f_sum).max(0.0) - lf_sum;
    }
    total / history.len() as f64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagRow {
    pub iteration: usize,
    /// u(x̄, ȳ) from the maximizer's perspective.
    pub value: f64,
    /// ½(BR₁ + BR₂) of the average profile, ignoring constraints.
    pub exploit_proxy: f64,
    pub violations: Vec<f64>,
    pub sum_positive: f64,
    pub lambda: Vec<f64>,
    pub lambda_mean: Vec<f64>,
    pub lambda_regret: f64,
    pub thm2_rhs: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DoublingStep {
    pub beta: f64,
    pub lambda_mean: Vec<f64>,
    pub triggered: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcfrResult {
    pub iterations: usize,
    pub beta: f64,
    /// Average behavioral strategies (flat), players 1 and 2.
    pub avg_behavioral: [Vec<f64>; 2],
    /// Average realization plans x̄ᵀ, ȳᵀ.
    pub avg_realization: [Vec<f64>; 2],
    pub lambda: Vec<f64>,
    pub lambda_mean: Vec<f64>,
    pub lambda_regret: f64,
    pub final_violations: Vec<f64>,
    pub sum_positive_violation: f64,
    pub value: f64,
    pub exploit_proxy: f64,
    pub diagnostics: Vec<DiagRow>,
    pub bound_report: BoundReport,
    pub doubling_trace: Vec<DoublingStep>,
    pub doubling_cap_hit: bool,
    /// Set when the game was internally transposed so the constrained
    /// player became the maximizer.
    pub transposed: bool,
}

/// One constrained solve in progress. The constrained player is always
/// player 1 here; [`solve`] handles transposition for trees.
pub struct CcfrRun<'a, G: CfrGame> {
    game: &'a G,
    constraints: &'a ConstraintSet,
    pub config: CcfrConfig,
    pub players: [PlayerState; 2],
    pub lagrange: LagrangeState,
    beta: f64,
    scratch: SweepScratch,
    tilt: Vec<f64>,
    x_buf: Vec<f64>,
    t: usize,
    diagnostics: Vec<DiagRow>,
    schedule: Vec<usize>,
    next_cp: usize,
    report: BoundReport,
}

impl<'a, G: CfrGame> CcfrRun<'a, G> {
    /// The constraint set always applies to player 1 of `game` (the
    /// maximizer); [`solve`] transposes tree games whose constrained seat is
    /// player 2 before reaching this point.
    pub fn new(game: &'a G, constraints: &'a ConstraintSet, config: &CcfrConfig) -> Result<Self> {
        config.validate()?;
        let (lo, hi) = game.utility_range();
        let beta = config.resolve_beta(hi - lo);
        let report = compute_bound_constants(game, constraints, config.seed);
        let n1 = game.layout(Player::One).num_seqs;
        Ok(CcfrRun {
            players: [
                PlayerState::new(game.layout(Player::One)),
                PlayerState::new(game.layout(Player::Two)),
            ],
            lagrange: LagrangeState::new(constraints.k(), beta, config.clamp_lambda),
            beta,
            scratch: SweepScratch::default(),
            tilt: vec![0.0; n1],
            x_buf: vec![0.0; n1],
            t: 0,
            diagnostics: Vec::new(),
            schedule: checkpoints(config.iterations, config.checkpoints_per_decade),
            next_cp: 0,
            report,
            game,
            constraints,
            config: config.clone(),
        })
    }

    pub fn warm_start_lambda(&mut self, lambda: &[f64]) {
        self.lagrange = LagrangeState::new(self.constraints.k(), self.beta, self.config.clamp_lambda)
            .with_initial(lambda);
    }

    pub fn iterations(&self) -> usize {
        self.t
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn bound_report(&self) -> &BoundReport {
        &self.report
    }

    /// Unconstrained player's regret update against the current profile.
    pub fn update_unconstrained(&mut self) {
        let (a, b) = self.players.split_at_mut(1);
        let strats = [a[0].strat.as_slice(), b[0].strat.as_slice()];
        self.game
            .sweep_values(Player::Two, strats, None, &mut b[0].values, &mut self.scratch);
        b[0].apply_values(self.game.layout(Player::Two));
    }

    /// Multiplier ascent on the violations of the constrained player's
    /// current realization plan; also leaves the plan (and its tilt) cached
    /// for the constrained update.
    pub fn update_lambda(&mut self) {
        if self.constraints.is_empty() {
            return;
        }
        self.game
            .realization_into(Player::One, &self.players[0].strat, &mut self.x_buf);
        let violations = self.constraints.values(&self.x_buf);
        let alpha = self.config.step_rule.alpha(
            self.t + 1,
            self.beta,
            self.report.value_bound,
            self.config.iterations,
        );
        self.lagrange.update(&violations, alpha);
        self.constraints
            .tilt_into(&self.lagrange.lambda, &self.x_buf, &mut self.tilt);
    }

    /// Constrained player's regret update with tilted values.
    pub fn update_constrained(&mut self) {
        let (a, b) = self.players.split_at_mut(1);
        let strats = [a[0].strat.as_slice(), b[0].strat.as_slice()];
        let tilt = if self.constraints.is_empty() {
            None
        } else {
            Some(self.tilt.as_slice())
        };
        self.game
            .sweep_values(Player::One, strats, tilt, &mut a[0].values, &mut self.scratch);
        a[0].apply_values(self.game.layout(Player::One));
    }

    pub fn iterate(&mut self) {
        self.update_unconstrained();
        self.update_lambda();
        self.update_constrained();
        for p in [Player::One, Player::Two] {
            let st = &mut self.players[p.index()];
            self.game.realization_into(p, &st.strat, &mut st.realization);
            for (s, r) in st.real_sum.iter_mut().zip(&st.realization) {
                *s += r;
            }
        }
        self.t += 1;
        if self.next_cp < self.schedule.len() && self.schedule[self.next_cp] == self.t {
            self.next_cp += 1;
            let row = self.diag_row();
            self.diagnostics.push(row);
        }
    }

    pub fn run(&mut self) {
        for _ in self.t..self.config.iterations {
            self.iterate();
        }
    }

    pub fn average_realization(&self, player: Player) -> Vec<f64> {
        let inv = 1.0 / self.t.max(1) as f64;
        let mut out: Vec<f64> = self.players[player.index()]
            .real_sum
            .iter()
            .map(|v| v * inv)
            .collect();
        out[0] = 1.0;
        out
    }

    pub fn average_behavioral(&self, player: Player) -> Vec<f64> {
        crate::cfr::normalize_to_behavioral(
            self.game.layout(player),
            &self.players[player.index()].real_sum,
        )
    }

    fn diag_row(&mut self) -> DiagRow {
        let x = self.average_realization(Player::One);
        let b1 = self.average_behavioral(Player::One);
        let b2 = self.average_behavioral(Player::Two);
        let violations = self.constraints.values(&x);
        let sum_positive = ConstraintSet::sum_positive(&violations);
        let value = self.game.expected_value([&b1, &b2]);
        let exploit_proxy = 0.5
            * (self.game.best_response_value(Player::One, &b2)
                + self.game.best_response_value(Player::Two, &b1));
        let lambda_regret = self.lagrange.measured_regret();
        let thm2_rhs = theorem_bounds(&self.report, self.t, self.beta, lambda_regret, None).thm2_rhs;
        DiagRow {
            iteration: self.t,
            value,
            exploit_proxy,
            violations,
            sum_positive,
            lambda: self.lagrange.lambda.clone(),
            lambda_mean: self.lagrange.mean(),
            lambda_regret,
            thm2_rhs,
        }
    }

    pub fn into_result(mut self) -> CcfrResult {
        // Guarantee a final row at T.
        if self.diagnostics.last().map(|d| d.iteration) != Some(self.t) {
            let row = self.diag_row();
            self.diagnostics.push(row);
        }
        let last = self.diagnostics.last().unwrap().clone();
        CcfrResult {
            iterations: self.t,
            beta: self.beta,
            avg_behavioral: [
                self.average_behavioral(Player::One),
                self.average_behavioral(Player::Two),
            ],
            avg_realization: [
                self.average_realization(Player::One),
                self.average_realization(Player::Two),
            ],
            lambda: self.lagrange.lambda.clone(),
            lambda_mean: self.lagrange.mean(),
            lambda_regret: self.lagrange.measured_regret(),
            final_violations: last.violations.clone(),
            sum_positive_violation: last.sum_positive,
            value: last.value,
            exploit_proxy: last.exploit_proxy,
            diagnostics: self.diagnostics,
            bound_report: self.report,
            doubling_trace: Vec::new(),
            doubling_cap_hit: false,
            transposed: false,
        }
    }
}

/// Solve over any solver-compatible game view. The constrained player must
/// already be the maximizer (player 1).
pub fn solve_view<G: CfrGame>(
    game: &G,
    constraints: &ConstraintSet,
    config: &CcfrConfig,
) -> Result<CcfrResult> {
    solve_view_warm(game, constraints, config, None)
}

fn solve_view_warm<G: CfrGame>(
    game: &G,
    constraints: &ConstraintSet,
    config: &CcfrConfig,
    warm_lambda: Option<&[f64]>,
) -> Result<CcfrResult> {
    let mut run = CcfrRun::new(game, constraints, config)?;
    if let Some(l) = warm_lambda {
        run.warm_start_lambda(l);
    }
    run.run();
    Ok(run.into_result())
}

/// Solve a tree game. When the constrained player is player 2 the game is
/// internally transposed (players swapped, utilities negated) so the
/// constrained player is the maximizer; results are mapped back.
pub fn solve(game: &GameTree, constraints: &ConstraintSet, config: &CcfrConfig) -> Result<CcfrResult> {
    if constraints.k() == 0 || constraints.player == Player::One {
        let mut cfg = config.clone();
        cfg.constrained_player = Player::One;
        return solve_view(game, constraints, &cfg);
    }
    // Sequence indexing per seat survives transposition unchanged, so the
    // same constraint objects index player 1 of the transposed game.
    let transposed = game.transposed();
    let mut cfg = config.clone();
    cfg.constrained_player = Player::One;
    let mut res = solve_view(&transposed, constraints, &cfg)?;
    res.transposed = true;
    res.avg_behavioral.swap(0, 1);
    res.avg_realization.swap(0, 1);
    res.value = -res.value;
    for d in &mut res.diagnostics {
        d.value = -d.value;
    }
    Ok(res)
}

/// β-doubling wrapper: rerun the solve with doubled β (floor at 1) while any
/// mean multiplier is within θ·β of the ceiling, warm-starting λ only.
pub fn beta_doubling_solve<G: CfrGame>(
    game: &G,
    constraints: &ConstraintSet,
    config: &CcfrConfig,
) -> Result<CcfrResult> {
    let (lo, hi) = game.utility_range();
    let mut beta = config.resolve_beta(hi - lo);
    let mut warm: Option<Vec<f64>> = None;
    let mut trace = Vec::new();
    let mut rounds = 0u32;
    loop {
        let mut cfg = config.clone();
        cfg.beta = Some(beta);
        let mut res = solve_view_warm(game, constraints, &cfg, warm.as_deref())?;
        let triggered = !constraints.is_empty()
            && res
                .lambda_mean
                .iter()
                .any(|&m| m >= config.doubling_theta * beta);
        trace.push(DoublingStep {
            beta,
            lambda_mean: res.lambda_mean.clone(),
            triggered,
        });
        if !triggered || rounds >= config.doubling_cap {
            res.doubling_cap_hit = triggered;
            res.doubling_trace = trace;
            return Ok(res);
        }
        warm = Some(res.lambda.clone());
        beta = (2.0 * beta).max(1.0);
        rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cfr::CfrRun;
    use crate::constraints::LinearConstraint;
    use crate::efg::GameTree;
    use crate::games::{build_kuhn, matching_pennies};
    use crate::lp::constrained_equilibrium;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha20Rng;

    fn kuhn() -> GameTree {
        build_kuhn().tree
    }

    fn q_bet_lower_bound(g: &GameTree, limit: f64) -> ConstraintSet {
        let seq = g.lookup_seq(Player::One, "Q:", "bet").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::lower_bound(seq, limit, n).unwrap());
        cs
    }

    #[test]
    fn k_zero_run_is_bit_identical_to_vanilla_cfr() {
        let g = kuhn();
        let none = ConstraintSet::new(Player::One);
        let cfg = CcfrConfig::new(300);
        let mut constrained = CcfrRun::new(&g, &none, &cfg).unwrap();
        let mut vanilla = CfrRun::new(&g);
        for _ in 0..300 {
            constrained.iterate();
            vanilla.iterate();
            for p in [Player::One, Player::Two] {
                let a = &constrained.players[p.index()].strat;
                let b = &vanilla.players[p.index()].strat;
                for (x, y) in a.iter().zip(b) {
                    assert_eq!(x.to_bits(), y.to_bits());
                }
            }
        }
        for p in [Player::One, Player::Two] {
            let a = constrained.average_realization(p);
            let b = vanilla.average_realization(p).unwrap();
            for (x, y) in a.iter().zip(&b) {
                assert_eq!(x.to_bits(), y.to_bits());
            }
        }
    }

    #[test]
    fn lambda_update_examples() {
        let mut s = LagrangeState::new(1, 10.0, true);
        s.update(&[-1.0], 1.0);
        assert_eq!(s.lambda[0], 0.0); // floor
        let mut s = LagrangeState::new(1, 10.0, true);
        s.update(&[0.5], 1.0);
        assert_eq!(s.lambda[0], 0.5);
        let mut s = LagrangeState::new(1, 2.0, true).with_initial(&[2.0]);
        s.update(&[1.0], 1.0);
        assert_eq!(s.lambda[0], 2.0); // ceiling
    }

    #[test]
    fn lambda_regret_trivial_cases() {
        // Constant optimal multiplier: zero regret.
        let history = vec![(vec![5.0], vec![1.0]); 10];
        assert!(measure_lambda_regret(&history, 5.0).abs() <= 1e-12);
        // All violations negative and λ ≡ 0: the best fixed λ* is 0 too.
        let history = vec![(vec![0.0], vec![-0.3]); 10];
        assert_eq!(measure_lambda_regret(&history, 5.0), 0.0);
    }

    #[test]
    fn lambda_regret_matches_grid_search() {
        let mut rng = ChaCha20Rng::seed_from_u64(107);
        let beta = 3.0;
        let k = 3usize;
        let history: Vec<(Vec<f64>, Vec<f64>)> = (0..40)
            .map(|_| {
                (
                    (0..k).map(|_| rng.gen_range(0.0..beta)).collect(),
                    (0..k).map(|_| rng.gen_range(-1.0..1.0)).collect(),
                )
            })
            .collect();
        let fast = measure_lambda_regret(&history, beta);
        // Coordinatewise linearity puts the optimum at a corner of {0,β}^k.
        let t = history.len() as f64;
        let mut best = f64::NEG_INFINITY;
        for mask in 0..(1 << k) {
            let mut total = 0.0;
            for (lam, f) in &history {
                for i in 0..k {
                    let star = if mask & (1 << i) != 0 { beta } else { 0.0 };
                    total += (star - lam[i]) * f[i];
                }
            }
            best = best.max(total / t);
        }
        assert!((fast - best).abs() <= 1e-10, "{fast} vs {best}");
    }

    #[test]
    fn multipliers_stay_in_the_box() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let mut cfg = CcfrConfig::new(500);
        cfg.beta = Some(2.0);
        cfg.step_rule = StepRule::Constant { alpha: 5.0 }; // aggressive on purpose
        let mut run = CcfrRun::new(&g, &cs, &cfg).unwrap();
        for _ in 0..500 {
            run.iterate();
            let l = run.lagrange.lambda[0];
            assert!((0.0..=2.0).contains(&l), "lambda {l}");
        }
    }

    #[test]
    fn all_zero_subgradients_behave_like_unconstrained() {
        let g = kuhn();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        // f ≡ 0.5 > 0: always violated, but the tilt is identically zero.
        cs.push(LinearConstraint::new(vec![], -0.5, n).unwrap());
        let mut cfg = CcfrConfig::new(200);
        cfg.beta = Some(4.0);
        let res = solve_view(&g, &cs, &cfg).unwrap();
        let mut vanilla = CfrRun::new(&g);
        vanilla.run(200);
        let base = vanilla.average_realization(Player::One).unwrap();
        for (a, b) in res.avg_realization[0].iter().zip(&base) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
        // λ still climbed to the ceiling.
        assert_eq!(res.lambda[0], 4.0);
    }

    #[test]
    fn constrained_solve_reaches_feasibility() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let mut cfg = CcfrConfig::new(20_000);
        cfg.beta = Some(16.0);
        let res = solve_view(&g, &cs, &cfg).unwrap();
        assert!(res.final_violations[0] <= 0.01, "violation {}", res.final_violations[0]);
        // Every checkpoint respects the feasibility bound.
        for d in &res.diagnostics {
            for &v in &d.violations {
                assert!(v <= d.thm2_rhs + 1e-9, "t={}: {v} > {}", d.iteration, d.thm2_rhs);
            }
        }
    }

    #[test]
    fn transposed_seat_two_solve_maps_back() {
        let g = kuhn();
        // Constrain player 2 to call with a jack after a bet at least half
        // the time (a deliberately bad commitment).
        let seq = g.lookup_seq(Player::Two, "J:b", "call").unwrap();
        let n = g.num_seqs(Player::Two).unwrap();
        let mut cs = ConstraintSet::new(Player::Two);
        cs.push(LinearConstraint::lower_bound(seq, 0.5, n).unwrap());
        let mut cfg = CcfrConfig::new(20_000);
        cfg.beta = Some(16.0);
        cfg.constrained_player = Player::Two;
        let res = solve(&g, &cs, &cfg).unwrap();
        assert!(res.transposed);
        // The constraint holds on player 2's average plan.
        assert!(res.final_violations[0] <= 0.02);
        assert!(res.avg_realization[1][seq] >= 0.45);
        // Player 1 profits from the handicap: value above the Nash value.
        assert!(res.value > -1.0 / 18.0);
    }

    #[test]
    fn beta_doubling_skips_when_beta_ample() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let mut cfg = CcfrConfig::new(5_000);
        cfg.beta = Some(64.0);
        let res = beta_doubling_solve(&g, &cs, &cfg).unwrap();
        assert_eq!(res.doubling_trace.len(), 1);
        assert!(!res.doubling_trace[0].triggered);
        assert!(!res.doubling_cap_hit);
    }

    #[test]
    fn beta_doubling_rises_from_zero_floor() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let mut cfg = CcfrConfig::new(2_000);
        cfg.beta = Some(0.0);
        cfg.doubling_cap = 12;
        let res = beta_doubling_solve(&g, &cs, &cfg).unwrap();
        assert!(res.doubling_trace.len() >= 2);
        assert_eq!(res.doubling_trace[0].beta, 0.0);
        assert_eq!(res.doubling_trace[1].beta, 1.0); // floor max(1, 2·0)
        assert!(res.beta >= 1.0);
    }

    #[test]
    fn beta_doubling_clears_the_lp_dual() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let eq = constrained_equilibrium(&g, Player::One, &cs, false).unwrap();
        let lambda_star = eq.lambda[0];
        assert!(lambda_star > 0.0);
        let mut cfg = CcfrConfig::new(30_000);
        cfg.beta = Some((lambda_star / 4.0).max(0.05));
        cfg.doubling_cap = 12;
        let res = beta_doubling_solve(&g, &cs, &cfg).unwrap();
        assert!(!res.doubling_cap_hit);
        assert!(
            res.beta > lambda_star,
            "final beta {} vs lambda* {lambda_star}",
            res.beta
        );
        assert!(res.final_violations[0] <= 0.02);
    }

    #[test]
    fn corollary_step_rule_bounds_lambda_regret() {
        let g = kuhn();
        let cs = q_bet_lower_bound(&g, 0.5);
        let t = 10_000usize;
        let mut cfg = CcfrConfig::new(t);
        cfg.beta = Some(8.0);
        cfg.step_rule = StepRule::Corollary { g: None };
        let run = {
            let mut r = CcfrRun::new(&g, &cs, &cfg).unwrap();
            r.run();
            r
        };
        let g_bound = run.bound_report().value_bound;
        let regret = run.lagrange.measured_regret();
        let beta = run.beta();
        assert!(
            regret <= beta * g_bound / (t as f64).sqrt() + 1e-9,
            "regret {regret} vs bound {}",
            beta * g_bound / (t as f64).sqrt()
        );
    }

    #[test]
    fn bounded_multipliers_act_as_regularization() {
        // One constraint with a small β on matching pennies: the converged
        // objective matches max_x [min_y u(x,y) − β(f(x))⁺] from a grid
        // search. Here min_y u = −|2p−1| for P1's heads probability p, and
        // f(x) = 0.8 − x_H.
        let g = matching_pennies();
        let seq_h = g.lookup_seq(Player::One, "p1", "H").unwrap();
        let n = g.num_seqs(Player::One).unwrap();
        let mut cs = ConstraintSet::new(Player::One);
        cs.push(LinearConstraint::lower_bound(seq_h, 0.8, n).unwrap());
        let beta = 0.3;
        let mut cfg = CcfrConfig::new(200_000);
        cfg.beta = Some(beta);
        cfg.step_rule = StepRule::Decaying { c: 2.0 };
        let res = solve_view(&g, &cs, &cfg).unwrap();
        let x = &res.avg_realization[0];
        let worst_case = -g.best_response_value(Player::Two, &res.avg_behavioral[0]);
        let achieved = worst_case - beta * res.final_violations[0].max(0.0);
        let mut grid_best = f64::NEG_INFINITY;
        for i in 0..=1000 {
            let p = i as f64 / 1000.0;
            let objective = -(2.0 * p - 1.0).abs() - beta * (0.8 - p).max(0.0);
            grid_best = grid_best.max(objective);
        }
        assert!(
            (achieved - grid_best).abs() <= 0.01,
            "achieved {achieved} vs grid {grid_best} (x_H = {})",
            x[seq_h]
        );
    }
}
