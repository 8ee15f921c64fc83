//! Random scenarios: grid-grown trees for the target and for every initial
//! configuration, singletons and leaders scattered uniformly.

use std::collections::HashSet;
use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::allocation::AlgoParams;
use crate::model::{
    validate_scenario, ConfigId, Configuration, ModelError, Module, ModuleId, Pose, Scenario,
    TargetConfiguration,
};
use crate::utility::CostParams;

/// Offset attempts per configuration before giving up.
const PLACEMENT_RETRIES: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenParams {
    pub n_spots: usize,
    /// Defaults to `n_spots`.
    pub n_modules: Option<usize>,
    pub arena: (f64, f64),
    /// Inclusive bounds on the size of each initial configuration.
    pub config_size_range: (usize, usize),
    /// Every configuration gets exactly this size; leftovers are singletons.
    pub equal_config_size: Option<usize>,
    /// Build the target by gluing together random trees shaped like the
    /// initial configurations, so a connection-preserving tiling exists.
    pub target_from_configs: bool,
    /// Chance that the next group of unassigned modules forms a
    /// configuration rather than a singleton.
    pub config_probability: f64,
    pub max_degree: usize,
    pub cost_params: CostParams,
    pub algo_params: AlgoParams,
    pub seed: u64,
}

impl Default for GenParams {
    fn default() -> Self {
        Self {
            n_spots: 10,
            n_modules: None,
            arena: (16.0, 16.0),
            config_size_range: (2, 10),
            equal_config_size: None,
            target_from_configs: false,
            config_probability: 0.5,
            max_degree: 3,
            cost_params: CostParams::default(),
            algo_params: AlgoParams::default(),
            seed: 0,
        }
    }
}

impl GenParams {
    pub fn new(n_spots: usize, seed: u64) -> Self {
        Self { n_spots, seed, ..Self::default() }
    }

    pub fn singletons_only(mut self) -> Self {
        self.config_probability = 0.0;
        self.equal_config_size = None;
        self
    }

    pub fn equal_configs(mut self, size: usize) -> Self {
        self.equal_config_size = Some(size);
        self
    }

    pub fn module_count(&self) -> usize {
        self.n_modules.unwrap_or(self.n_spots)
    }

    pub fn validate(&self) -> Result<(), GenError> {
        let bad = |m: &str| Err(GenError::InvalidParams(m.to_owned()));
        let (w, h) = self.arena;
        if self.n_spots == 0 {
            return bad("n_spots must be >= 1");
        }
        if self.module_count() == 0 {
            return bad("n_modules must be >= 1");
        }
        if !(w.is_finite() && h.is_finite() && w > 1.0 && h > 1.0) {
            return bad("arena sides must exceed one unit");
        }
        let (lo, hi) = self.config_size_range;
        if lo < 2 || lo > hi {
            return bad("config_size_range must satisfy 2 <= min <= max");
        }
        if self.equal_config_size.is_some_and(|k| k < 2) {
            return bad("equal_config_size must be >= 2");
        }
        if !(0.0..=1.0).contains(&self.config_probability) {
            return bad("config_probability must lie in [0, 1]");
        }
        if self.max_degree < 2 {
            return bad("max_degree must be >= 2");
        }
        if (self.n_spots as f64) > (w.floor() * h.floor()) {
            return bad("target does not fit the arena grid");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GenError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
    #[error("configuration {config} of size {size} could not be placed inside the arena")]
    UnplaceableConfiguration { config: u32, size: usize },
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

type Cell = (i32, i32);

const STEPS: [Cell; 4] = [(1, 0), (0, 1), (-1, 0), (0, -1)];

/// Grows a random tree of `n` unit-grid cells from `(0, 0)`, each new cell
/// attached to a uniformly drawn free side of an existing one. Cells must
/// satisfy `inside`; the root starts with `root_degree` outside links.
/// Returns cells and parent-child edges.
fn grow_tree(
    rng: &mut ChaCha8Rng,
    n: usize,
    max_degree: usize,
    root_degree: usize,
    inside: impl Fn(Cell) -> bool,
) -> Option<(Vec<Cell>, Vec<(u32, u32)>)> {
    let mut cells = vec![(0, 0)];
    let mut degree = vec![root_degree];
    let mut taken: HashSet<Cell> = cells.iter().copied().collect();
    let mut edges = Vec::with_capacity(n.saturating_sub(1));
    while cells.len() < n {
        let options: Vec<(usize, Cell)> = cells
            .iter()
            .enumerate()
            .filter(|&(i, _)| degree[i] < max_degree)
            .flat_map(|(i, &(x, y))| STEPS.iter().map(move |&(dx, dy)| (i, (x + dx, y + dy))))
            .filter(|&(_, c)| !taken.contains(&c) && inside(c))
            .collect();
        let &(parent, cell) = options.choose(rng)?;
        let child = cells.len();
        cells.push(cell);
        degree.push(1);
        degree[parent] += 1;
        taken.insert(cell);
        edges.push((parent as u32, child as u32));
    }
    Some((cells, edges))
}

fn group_sizes(p: &GenParams, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let n = p.module_count();
    let mut sizes = Vec::new();
    if let Some(k) = p.equal_config_size {
        sizes.extend(std::iter::repeat(k).take(n / k));
        sizes.extend(std::iter::repeat(1).take(n % k));
        return sizes;
    }
    let (lo, hi) = p.config_size_range;
    let mut left = n;
    while left > 0 {
        if left >= lo && rng.gen_bool(p.config_probability) {
            let k = rng.gen_range(lo..=hi.min(left));
            sizes.push(k);
            left -= k;
        } else {
            sizes.push(1);
            left -= 1;
        }
    }
    sizes
}

/// Independent random tree of `n` spots grown from the arena center.
fn random_target(p: &GenParams, rng: &mut ChaCha8Rng) -> Result<TargetConfiguration, GenError> {
    let (gw, gh) = grid(p);
    let (cx, cy) = (gw / 2, gh / 2);
    let (cells, edges) = grow_tree(rng, p.n_spots, p.max_degree, 0, |(x, y)| {
        (0..gw).contains(&(x + cx)) && (0..gh).contains(&(y + cy))
    })
    .ok_or_else(|| GenError::InvalidParams("target does not fit the arena".into()))?;
    let cells: Vec<Cell> = cells.iter().map(|&(x, y)| (x + cx, y + cy)).collect();
    Ok(target_from_cells(&cells, &edges))
}

fn grid(p: &GenParams) -> (i32, i32) {
    (p.arena.0.floor() as i32, p.arena.1.floor() as i32)
}

fn target_from_cells(cells: &[Cell], edges: &[(u32, u32)]) -> TargetConfiguration {
    let points: Vec<(f64, f64)> = cells.iter().map(|&(x, y)| (x as f64, y as f64)).collect();
    TargetConfiguration::from_edges(&points, edges)
}

/// One random piece per group, each glued by a single edge to the pieces
/// before it. Returns the target and each piece's cells relative to its root
/// with its internal edges. Spot ids are shuffled so they carry no piece order.
fn glued_target(
    p: &GenParams,
    sizes: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<(TargetConfiguration, Vec<(Vec<Cell>, Vec<(u32, u32)>)>), GenError> {
    let (gw, gh) = grid(p);
    let in_arena = |(x, y): Cell| (0..gw).contains(&x) && (0..gh).contains(&y);
    let mut cells: Vec<Cell> = Vec::with_capacity(p.n_spots);
    let mut degree: Vec<usize> = Vec::with_capacity(p.n_spots);
    let mut taken: HashSet<Cell> = HashSet::new();
    let mut edges: Vec<(u32, u32)> = Vec::new();
    let mut pieces = Vec::with_capacity(sizes.len());

    for (i, &size) in sizes.iter().enumerate() {
        let grown = (0..PLACEMENT_RETRIES).find_map(|_| {
            let (root, glue) = if cells.is_empty() {
                ((gw / 2, gh / 2), None)
            } else {
                let options: Vec<(usize, Cell)> = cells
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| degree[j] < p.max_degree)
                    .flat_map(|(j, &(x, y))| STEPS.iter().map(move |&(dx, dy)| (j, (x + dx, y + dy))))
                    .filter(|&(_, c)| in_arena(c) && !taken.contains(&c))
                    .collect();
                let &(parent, cell) = options.choose(rng)?;
                (cell, Some(parent))
            };
            let free = |(x, y): Cell| {
                let c = (root.0 + x, root.1 + y);
                in_arena(c) && !taken.contains(&c)
            };
            grow_tree(rng, size, p.max_degree, usize::from(glue.is_some()), free)
                .map(|piece| (root, glue, piece))
        });
        let (root, glue, (offsets, local)) = grown.ok_or(GenError::UnplaceableConfiguration {
            config: i as u32,
            size,
        })?;
        let base = cells.len() as u32;
        for &(x, y) in &offsets {
            let c = (root.0 + x, root.1 + y);
            cells.push(c);
            taken.insert(c);
            degree.push(0);
        }
        for &(a, b) in &local {
            edges.push((base + a, base + b));
        }
        if let Some(parent) = glue {
            edges.push((parent as u32, base));
        }
        for &(a, b) in &edges[edges.len() - local.len() - usize::from(glue.is_some())..] {
            degree[a as usize] += 1;
            degree[b as usize] += 1;
        }
        pieces.push((offsets, local));
    }

    let mut order: Vec<usize> = (0..cells.len()).collect();
    order.shuffle(rng);
    let mut new_index = vec![0u32; cells.len()];
    for (new, &old) in order.iter().enumerate() {
        new_index[old] = new as u32;
    }
    let shuffled: Vec<Cell> = order.iter().map(|&old| cells[old]).collect();
    let edges: Vec<(u32, u32)> = edges
        .iter()
        .map(|&(a, b)| (new_index[a as usize], new_index[b as usize]))
        .collect();
    Ok((target_from_cells(&shuffled, &edges), pieces))
}

fn rotate((x, y): Cell, quarter_turns: u8) -> Cell {
    match quarter_turns % 4 {
        0 => (x, y),
        1 => (-y, x),
        2 => (-x, -y),
        _ => (y, -x),
    }
}

/// Deterministic in `params.seed`.
pub fn generate_scenario(params: &GenParams) -> Result<Scenario, GenError> {
    params.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (w, h) = params.arena;
    let sizes = group_sizes(params, &mut rng);
    let (target, mut pieces) = if params.target_from_configs {
        if sizes.iter().sum::<usize>() != params.n_spots {
            return Err(GenError::InvalidParams(
                "target_from_configs needs as many modules as spots".into(),
            ));
        }
        let (t, pieces) = glued_target(params, &sizes, &mut rng)?;
        (t, pieces.into_iter().map(Some).collect())
    } else {
        (random_target(params, &mut rng)?, vec![None; sizes.len()])
    };

    let mut modules = Vec::new();
    let mut configurations = Vec::new();
    let mut next_id = 0u32;
    let spawn = (w - 1.0, h - 1.0);
    for (group, size) in sizes.into_iter().enumerate() {
        if size == 1 {
            let lx = rng.gen_range(0.0..=spawn.0);
            let ly = rng.gen_range(0.0..=spawn.1);
            let theta = rng.gen_range(0.0..=PI);
            modules.push(Module {
                id: ModuleId(next_id),
                pose: Pose::new(lx, ly, theta),
                config_id: None,
            });
            next_id += 1;
            continue;
        }
        let config = ConfigId(configurations.len() as u32);
        let unplaceable = GenError::UnplaceableConfiguration { config: config.0, size };
        let shape = pieces[group].take();
        let (lx, ly, offsets, tree) = (0..PLACEMENT_RETRIES)
            .find_map(|_| {
                let lx = rng.gen_range(0.0..=spawn.0);
                let ly = rng.gen_range(0.0..=spawn.1);
                let inside = |(x, y): Cell| {
                    let (px, py) = (lx + x as f64, ly + y as f64);
                    (0.0..=w).contains(&px) && (0.0..=h).contains(&py)
                };
                match &shape {
                    Some((cells, tree)) => {
                        let turns = rng.gen_range(0..4u8);
                        let turned: Vec<Cell> = cells.iter().map(|&c| rotate(c, turns)).collect();
                        turned.iter().all(|&c| inside(c)).then(|| (lx, ly, turned, tree.clone()))
                    }
                    None => grow_tree(&mut rng, size, params.max_degree, 0, inside)
                        .map(|(cells, tree)| (lx, ly, cells, tree)),
                }
            })
            .ok_or(unplaceable)?;
        let ids: Vec<ModuleId> = (0..size as u32).map(|i| ModuleId(next_id + i)).collect();
        for (&id, &(x, y)) in ids.iter().zip(&offsets) {
            let theta = rng.gen_range(0.0..=PI);
            modules.push(Module {
                id,
                pose: Pose::new(lx + x as f64, ly + y as f64, theta),
                config_id: Some(config),
            });
        }
        configurations.push(Configuration {
            id: config,
            members: ids.clone(),
            edges: tree.iter().map(|&(a, b)| (ids[a as usize], ids[b as usize])).collect(),
            leader: ids[0],
        });
        next_id += size as u32;
    }

    Ok(validate_scenario(Scenario {
        modules,
        configurations,
        target,
        cost_params: params.cost_params,
        algo_params: params.algo_params,
        seed: params.seed,
    })?)
}
