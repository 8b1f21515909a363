//! Grid pursuit game: an evader crosses a 2w × w 8-connected grid west to
//! east while a patroller tries to intercept, over d = 2w + 4 time steps.
//! Moves fail with probability 0.1 (the mover stays in place). The evader
//! scores +1 for escaping (reaching the east column), −1 per time step spent
//! in the patroller's cell, and −0.02 per time step before escaping; the
//! patroller's utility is the negation.
//!
//! Conventions not fixed by the rules, all reflected in the game hash:
//! the evader starts uniformly on the west column, the patroller's base
//! sits off the patrol routes at (column 1, row 0) so that returning to it
//! genuinely competes with interception, escape is checked before
//! encounters, and an escaped evader is absorbed (no further rewards).

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
pub struct TransitGame {
    pub w: usize,
    pub cols: usize,
    pub rows: usize,
    pub cells: usize,
    /// Number of decision epochs d; positions are snapshots 0..=d.
    pub horizon: usize,
    pub fail_prob: f64,
    pub step_cost: f64,
    pub encounter_penalty: f64,
    pub escape_reward: f64,
    /// Patroller start and return target.
    pub base: usize,
    /// Evader start distribution (west column, uniform).
    pub evader_start: Vec<(usize, f64)>,
    /// Per cell: destination cells (8 neighbors where in bounds, plus stay),
    /// ascending. The action index is the position in this list.
    moves: Vec<Vec<usize>>,
    hash: String,
}

impl TransitGame {
    pub fn cell(&self, col: usize, row: usize) -> usize {
        row * self.cols + col
    }

    pub fn col(&self, cell: usize) -> usize {
        cell % self.cols
    }

    pub fn row(&self, cell: usize) -> usize {
        cell / self.cols
    }

    pub fn is_east(&self, cell: usize) -> bool {
        self.col(cell) == self.cols - 1
    }

    pub fn moves(&self, cell: usize) -> &[usize] {
        &self.moves[cell]
    }

    pub fn num_actions(&self, cell: usize) -> usize {
        self.moves[cell].len()
    }

    /// Transition outcomes for (cell, action): destination with probability
    /// 0.9 and stay-in-place with 0.1, merged when the action is stay.
    pub fn kernel(&self, cell: usize, action: usize) -> [(usize, f64); 2] {
        let dest = self.moves[cell][action];
        if dest == cell {
            [(cell, 1.0), (cell, 0.0)]
        } else {
            [(dest, 1.0 - self.fail_prob), (cell, self.fail_prob)]
        }
    }

    /// Probability that (cell, action) does not land on the base.
    pub fn miss_base_probability(&self, cell: usize, action: usize) -> f64 {
        self.kernel(cell, action)
            .iter()
            .filter(|(dest, _)| *dest != self.base)
            .map(|(_, p)| p)
            .sum()
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }
}

pub fn build_transit(w: usize) -> Result<TransitGame> {
    if w < 2 {
        return Err(Error::InvalidParam(format!("transit needs w >= 2, got {w}")));
    }
    let cols = 2 * w;
    let rows = w;
    let cells = cols * rows;
    let horizon = 2 * w + 4;
    let mut moves = Vec::with_capacity(cells);
    for cell in 0..cells {
        let (c, r) = (cell % cols, cell / cols);
        let mut dests = Vec::new();
        for dc in -1i64..=1 {
            for dr in -1i64..=1 {
                let nc = c as i64 + dc;
                let nr = r as i64 + dr;
                if nc >= 0 && nc < cols as i64 && nr >= 0 && nr < rows as i64 {
                    dests.push((nr * cols as i64 + nc) as usize);
                }
            }
        }
        dests.sort_unstable();
        moves.push(dests);
    }
    let base = 1; // (column 1, row 0)
    let evader_start: Vec<(usize, f64)> = (0..rows)
        .map(|r| (r * cols, 1.0 / rows as f64))
        .collect();

    let mut game = TransitGame {
        w,
        cols,
        rows,
        cells,
        horizon,
        fail_prob: 0.1,
        step_cost: 0.02,
        encounter_penalty: 1.0,
        escape_reward: 1.0,
        base,
        evader_start,
        moves,
        hash: String::new(),
    };
    let desc = format!(
        "transit w={w} cols={cols} rows={rows} horizon={horizon} fail={} step={} enc={} esc={} \
         base={} starts=west-uniform escape-before-encounter fail-means-stay",
        game.fail_prob, game.step_cost, game.encounter_penalty, game.escape_reward, game.base
    );
    let mut hasher = Sha256::new();
    hasher.update(desc.as_bytes());
    let digest = hasher.finalize();
    game.hash = digest.iter().take(8).map(|b| format!("{b:02x}")).collect();
    Ok(game)
}
