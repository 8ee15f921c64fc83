//! Auction baseline for singleton-only assignment, and an exact
//! Hungarian-method oracle.
//!
//! The auction is the forward (bidder-side) Jacobi variant with a fixed
//! increment. Rectangular problems are padded to square with zero-utility
//! dummy rows or columns; dummies bid silently and are dropped at the end.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::PlanContext;
use crate::model::{ModuleId, Scenario, SpotId};
use crate::utility::NoPlacement;

/// Dense utility matrix: `rows[i][j]` is module `modules[i]` on spot `spots[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UtilityMatrix {
    pub modules: Vec<ModuleId>,
    pub spots: Vec<SpotId>,
    pub rows: Vec<Vec<f64>>,
}

impl UtilityMatrix {
    /// Builds a matrix with sequential ids from raw rows.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Self {
        let n_spots = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == n_spots), "ragged utility matrix");
        Self {
            modules: (0..rows.len() as u32).map(ModuleId).collect(),
            spots: (0..n_spots as u32).map(SpotId).collect(),
            rows,
        }
    }

    /// Every module treated as a singleton, nothing placed.
    pub fn for_scenario(ctx: &PlanContext<'_>) -> Self {
        let mut modules: Vec<ModuleId> = ctx.scenario.modules.iter().map(|m| m.id).collect();
        modules.sort_unstable();
        let spots: Vec<SpotId> = ctx.spots().iter().map(|s| s.id).collect();
        let cost = &ctx.scenario.cost_params;
        let rows = modules
            .iter()
            .map(|&m| {
                let module = ctx.module(m);
                spots
                    .iter()
                    .map(|&s| {
                        crate::utility::module_spot_utility(
                            module,
                            &[],
                            ctx.spot(s),
                            &ctx.values,
                            &NoPlacement,
                            cost,
                        )
                    })
                    .collect()
            })
            .collect();
        Self { modules, spots, rows }
    }

    pub fn n_modules(&self) -> usize {
        self.modules.len()
    }

    pub fn n_spots(&self) -> usize {
        self.spots.len()
    }

    /// Side of the padded square problem.
    pub fn order(&self) -> usize {
        self.n_modules().max(self.n_spots())
    }

    fn padded(&self, i: usize, j: usize) -> f64 {
        if i < self.n_modules() && j < self.n_spots() {
            self.rows[i][j]
        } else {
            0.0
        }
    }

    fn range(&self) -> f64 {
        let (lo, hi) = self
            .rows
            .iter()
            .flatten()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &u| (lo.min(u), hi.max(u)));
        if lo.is_finite() && hi.is_finite() {
            hi - lo
        } else {
            0.0
        }
    }

    /// Sum of utilities for a set of (module index, spot index) pairs.
    pub fn total(&self, pairs: &[(usize, usize)]) -> f64 {
        pairs.iter().map(|&(i, j)| self.rows[i][j]).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuctionParams {
    pub epsilon: f64,
    pub max_rounds: usize,
}

impl AuctionParams {
    /// `ε` is the utility range divided by `order + 1`, or `1 / (order + 1)`
    /// when every utility is equal.
    pub fn for_matrix(u: &UtilityMatrix) -> Self {
        let n = u.order() as f64 + 1.0;
        let range = u.range();
        let epsilon = if range > 0.0 { range / n } else { 1.0 / n };
        Self {
            epsilon,
            max_rounds: 1_000_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AuctionError {
    #[error("epsilon must be finite and > 0, got {0}")]
    InvalidEpsilon(f64),
    #[error("auction did not settle within {0} rounds")]
    NonTermination(usize),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuctionResult {
    pub assignment: BTreeMap<SpotId, ModuleId>,
    pub rounds: usize,
    /// Position broadcasts plus one per bid.
    pub broadcast_count: u64,
    pub bids: u64,
    pub total_utility: f64,
    pub epsilon: f64,
}

/// Forward auction to an `ε`-complementary-slackness fixed point.
pub fn auction_assign(u: &UtilityMatrix, params: AuctionParams) -> Result<AuctionResult, AuctionError> {
    if !(params.epsilon.is_finite() && params.epsilon > 0.0) {
        return Err(AuctionError::InvalidEpsilon(params.epsilon));
    }
    let n = u.order();
    let mut prices = vec![0.0f64; n];
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut holding: Vec<Option<usize>> = vec![None; n];
    let mut rounds = 0;
    let mut bids = 0u64;

    loop {
        let unassigned: Vec<usize> = (0..n).filter(|&i| holding[i].is_none()).collect();
        if unassigned.is_empty() {
            break;
        }
        if rounds == params.max_rounds {
            return Err(AuctionError::NonTermination(rounds));
        }
        rounds += 1;

        // Best bid per object this round: (price, bidder).
        let mut offers: Vec<Option<(f64, usize)>> = vec![None; n];
        for &i in &unassigned {
            let (mut best, mut best_v, mut second_v) = (0, f64::NEG_INFINITY, f64::NEG_INFINITY);
            for j in 0..n {
                let v = u.padded(i, j) - prices[j];
                if v > best_v {
                    second_v = best_v;
                    best_v = v;
                    best = j;
                } else if v > second_v {
                    second_v = v;
                }
            }
            if n == 1 {
                second_v = best_v;
            }
            let bid = prices[best] + (best_v - second_v) + params.epsilon;
            if i < u.n_modules() {
                bids += 1;
            }
            if offers[best].map_or(true, |(p, _)| bid > p) {
                offers[best] = Some((bid, i));
            }
        }
        for (j, offer) in offers.into_iter().enumerate() {
            if let Some((price, i)) = offer {
                if let Some(prev) = owner[j] {
                    holding[prev] = None;
                }
                owner[j] = Some(i);
                holding[i] = Some(j);
                prices[j] = price;
            }
        }
        debug_assert!(is_injective(&holding));
    }

    let mut assignment = BTreeMap::new();
    let mut total = 0.0;
    for (i, j) in holding.iter().enumerate() {
        let j = j.expect("square auction assigns everyone");
        if i < u.n_modules() && j < u.n_spots() {
            assignment.insert(u.spots[j], u.modules[i]);
            total += u.rows[i][j];
        }
    }
    Ok(AuctionResult {
        assignment,
        rounds,
        broadcast_count: u.n_modules() as u64 + bids,
        bids,
        total_utility: total,
        epsilon: params.epsilon,
    })
}

fn is_injective(holding: &[Option<usize>]) -> bool {
    let mut seen = vec![false; holding.len()];
    holding.iter().flatten().all(|&j| !std::mem::replace(&mut seen[j], true))
}

/// Runs the auction on a scenario with every module treated as a singleton.
pub fn auction_scenario(scenario: &Scenario) -> Result<AuctionResult, Box<dyn std::error::Error>> {
    let ctx = PlanContext::new(scenario)?;
    let u = UtilityMatrix::for_scenario(&ctx);
    Ok(auction_assign(&u, AuctionParams::for_matrix(&u))?)
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimalAssignment {
    /// (module index, spot index) pairs, sorted by module index.
    pub pairs: Vec<(usize, usize)>,
    pub total_utility: f64,
}

/// Utility-maximizing injective assignment (Hungarian method, O(n³)).
/// Covers `min(modules, spots)` pairs.
pub fn optimal_assignment(u: &UtilityMatrix) -> OptimalAssignment {
    let (r, c) = (u.n_modules(), u.n_spots());
    if r == 0 || c == 0 {
        return OptimalAssignment { pairs: vec![], total_utility: 0.0 };
    }
    let transpose = r > c;
    let (rows, cols) = if transpose { (c, r) } else { (r, c) };
    let cost = |i: usize, j: usize| {
        if transpose {
            -u.rows[j][i]
        } else {
            -u.rows[i][j]
        }
    };

    // Potentials formulation; index 0 is a sentinel column.
    let mut pu = vec![0.0f64; rows + 1];
    let mut pv = vec![0.0f64; cols + 1];
    let mut matched = vec![0usize; cols + 1];
    let mut way = vec![0usize; cols + 1];
    for i in 1..=rows {
        matched[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; cols + 1];
        let mut used = vec![false; cols + 1];
        loop {
            used[j0] = true;
            let i0 = matched[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=cols {
                if used[j] {
                    continue;
                }
                let cur = cost(i0 - 1, j - 1) - pu[i0] - pv[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=cols {
                if used[j] {
                    pu[matched[j]] += delta;
                    pv[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if matched[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            matched[j0] = matched[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut pairs: Vec<(usize, usize)> = (1..=cols)
        .filter(|&j| matched[j] != 0)
        .map(|j| {
            let (i, j) = (matched[j] - 1, j - 1);
            if transpose {
                (j, i)
            } else {
                (i, j)
            }
        })
        .collect();
    pairs.sort_unstable();
    let total_utility = u.total(&pairs);
    OptimalAssignment { pairs, total_utility }
}
