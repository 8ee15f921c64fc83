//! Embeddings of a configuration tree into the target tree.
//!
//! Both the full (subtree isomorphism) and the maximum-common-subtree
//! searches run on the same rooted dynamic program. For a configuration
//! vertex `u` entered from parent `pu` and a target vertex `v` entered from
//! `pv`, `best(u|pu, v|pv)` is the size of the largest connected partial
//! embedding rooted at `u -> v` that stays inside the two subtrees:
//!
//! ```text
//! best(u|pu, v|pv) = 1 + max over injective partial assignments of the
//!                        children of u to the children of v of
//!                        sum best(child|u, image|v)
//! ```
//!
//! A full embedding rooted at `u -> v` exists iff `best` equals the number of
//! configuration vertices. Embeddings are produced by walking only the
//! optimal assignments, so every branch of the walk ends in a valid mapping.
//! In a tree, a map that sends children to distinct non-parent neighbors is
//! automatically injective, since images of different branches lie in
//! different subtrees.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::centrality::SpotValueTable;
use crate::graph::Adjacency;
use crate::model::{Configuration, ModuleId, SpotId, TargetConfiguration};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EmbeddingKind {
    Full,
    Mcs,
}

/// Injective, edge-preserving map from configuration modules to spots.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Embedding {
    /// Sorted by module id.
    pub mapping: Vec<(ModuleId, SpotId)>,
    pub kind: EmbeddingKind,
}

impl Embedding {
    pub fn size(&self) -> usize {
        self.mapping.len()
    }

    pub fn spot_of(&self, module: ModuleId) -> Option<SpotId> {
        self.mapping
            .binary_search_by_key(&module, |&(m, _)| m)
            .ok()
            .map(|i| self.mapping[i].1)
    }

    pub fn spots(&self) -> impl Iterator<Item = SpotId> + '_ {
        self.mapping.iter().map(|&(_, s)| s)
    }

    pub fn spot_id_sum(&self) -> u64 {
        self.spots().map(|s| s.0 as u64).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IsoParams {
    pub max_embeddings: usize,
}

impl Default for IsoParams {
    fn default() -> Self {
        Self { max_embeddings: 20 }
    }
}

impl IsoParams {
    pub fn unbounded() -> Self {
        Self {
            max_embeddings: usize::MAX,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsoError {
    #[error("configuration or target is empty")]
    DegenerateInput,
}

/// Every (vertex, entered-from) pair of a tree, with its child views.
#[derive(Debug)]
struct RootedViews {
    node: Vec<usize>,
    children: Vec<Vec<usize>>,
    /// View of each vertex taken as the root.
    root: Vec<usize>,
}

impl RootedViews {
    fn new(g: &Adjacency, active: &[bool]) -> Self {
        let n = g.len();
        let mut node = Vec::new();
        let mut root = vec![usize::MAX; n];
        // Directed views keyed by (parent, child).
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for v in 0..n {
            if !active[v] {
                continue;
            }
            root[v] = node.len();
            node.push(v);
            for &w in g.neighbors(v) {
                if active[w] {
                    directed.insert((v, w), node.len());
                    node.push(w);
                }
            }
        }
        let mut children = vec![Vec::new(); node.len()];
        for v in 0..n {
            if !active[v] {
                continue;
            }
            children[root[v]] = g
                .neighbors(v)
                .iter()
                .filter(|&&w| active[w])
                .map(|&w| directed[&(v, w)])
                .collect();
        }
        for (&(p, v), &id) in &directed {
            children[id] = g
                .neighbors(v)
                .iter()
                .filter(|&&w| active[w] && w != p)
                .map(|&w| directed[&(v, w)])
                .collect();
        }
        Self {
            node,
            children,
            root,
        }
    }

    fn len(&self) -> usize {
        self.node.len()
    }
}

/// Value of the best injective partial assignment of rows to columns, where
/// `weight[i][j]` is the gain of assigning row `i` to column `j`.
fn best_assignment_value(weight: &[Vec<u32>]) -> u32 {
    fn go(weight: &[Vec<u32>], row: usize, used: u64) -> u32 {
        if row == weight.len() {
            return 0;
        }
        let mut best = go(weight, row + 1, used);
        for (j, &w) in weight[row].iter().enumerate() {
            if w > 0 && used & (1 << j) == 0 {
                best = best.max(w + go(weight, row + 1, used | (1 << j)));
            }
        }
        best
    }
    go(weight, 0, 0)
}

/// Every partial assignment whose gain equals `goal`.
fn optimal_assignments(weight: &[Vec<u32>], goal: u32) -> Vec<Vec<(usize, usize)>> {
    fn go(
        weight: &[Vec<u32>],
        row: usize,
        used: u64,
        remaining: u32,
        current: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if row == weight.len() {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        let upper: u32 = weight[row..]
            .iter()
            .map(|r| r.iter().copied().max().unwrap_or(0))
            .sum();
        if upper < remaining {
            return;
        }
        for (j, &w) in weight[row].iter().enumerate() {
            if w > 0 && w <= remaining && used & (1 << j) == 0 {
                current.push((row, j));
                go(weight, row + 1, used | (1 << j), remaining - w, current, out);
                current.pop();
            }
        }
        go(weight, row + 1, used, remaining, current, out);
    }
    let mut out = Vec::new();
    go(weight, 0, 0, goal, &mut Vec::new(), &mut out);
    out
}

/// Configuration-vs-target matcher holding the memoized DP.
struct Matcher {
    config: RootedViews,
    target: RootedViews,
    memo: Vec<u32>,
}

impl Matcher {
    fn new(config: RootedViews, target: RootedViews) -> Self {
        let memo = vec![u32::MAX; config.len() * target.len()];
        Self {
            config,
            target,
            memo,
        }
    }

    fn weights(&mut self, cv: usize, tv: usize) -> Vec<Vec<u32>> {
        let cc = self.config.children[cv].clone();
        let tc = self.target.children[tv].clone();
        cc.iter()
            .map(|&c| tc.iter().map(|&t| self.best(c, t)).collect())
            .collect()
    }

    fn best(&mut self, cv: usize, tv: usize) -> u32 {
        let key = cv * self.target.len() + tv;
        if self.memo[key] != u32::MAX {
            return self.memo[key];
        }
        let w = self.weights(cv, tv);
        let value = 1 + best_assignment_value(&w);
        self.memo[key] = value;
        value
    }

    /// Depth-first walk over optimal embeddings; `sink` returns false to stop.
    fn expand(
        &mut self,
        tasks: &mut Vec<(usize, usize)>,
        mapping: &mut Vec<(usize, usize)>,
        sink: &mut dyn FnMut(&[(usize, usize)]) -> bool,
    ) -> bool {
        let Some((cv, tv)) = tasks.pop() else {
            return sink(mapping);
        };
        mapping.push((self.config.node[cv], self.target.node[tv]));
        let goal = self.best(cv, tv) - 1;
        let w = self.weights(cv, tv);
        let cc = self.config.children[cv].clone();
        let tc = self.target.children[tv].clone();
        let mut keep_going = true;
        for assignment in optimal_assignments(&w, goal) {
            let depth = tasks.len();
            tasks.extend(assignment.iter().map(|&(i, j)| (cc[i], tc[j])));
            keep_going = self.expand(tasks, mapping, sink);
            tasks.truncate(depth);
            if !keep_going {
                break;
            }
        }
        mapping.pop();
        tasks.push((cv, tv));
        keep_going
    }
}

/// Embedding search for one configuration against one target, optionally
/// restricted to a subset of spots.
pub struct EmbeddingSearch<'a> {
    config: &'a Configuration,
    target: &'a TargetConfiguration,
    values: &'a SpotValueTable,
    available: Vec<bool>,
}

impl<'a> EmbeddingSearch<'a> {
    pub fn new(
        config: &'a Configuration,
        target: &'a TargetConfiguration,
        values: &'a SpotValueTable,
    ) -> Self {
        Self {
            config,
            target,
            values,
            available: vec![true; target.len()],
        }
    }

    /// Only spots for which `keep` returns true may appear in an image.
    pub fn restrict_to(mut self, keep: impl Fn(SpotId) -> bool) -> Self {
        for (flag, spot) in self.available.iter_mut().zip(&self.target.spots) {
            *flag = keep(spot.id);
        }
        self
    }

    fn config_graph(&self) -> (Adjacency, Vec<ModuleId>) {
        let mut members = self.config.members.clone();
        members.sort_unstable();
        let index: HashMap<ModuleId, usize> =
            members.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let mut g = Adjacency::from_edges(
            members.len(),
            self.config
                .edges
                .iter()
                .map(|(a, b)| (index[a], index[b])),
        );
        g.sort_neighbors();
        (g, members)
    }

    fn matcher(&self) -> (Matcher, Vec<ModuleId>) {
        let (cg, members) = self.config_graph();
        let config = RootedViews::new(&cg, &vec![true; cg.len()]);
        let target = RootedViews::new(&self.target.adjacency(), &self.available);
        (Matcher::new(config, target), members)
    }

    /// Target vertex indices by descending spot value, ties by lower id.
    fn target_roots(&self) -> Vec<usize> {
        let mut roots: Vec<usize> = (0..self.target.len())
            .filter(|&i| self.available[i])
            .collect();
        roots.sort_by(|&a, &b| {
            let (sa, sb) = (&self.target.spots[a], &self.target.spots[b]);
            self.values
                .get(sb.id)
                .total_cmp(&self.values.get(sa.id))
                .then(sa.id.cmp(&sb.id))
        });
        roots
    }

    /// Size of the largest connected common subtree.
    pub fn common_size(&self) -> usize {
        let (mut m, _) = self.matcher();
        let mut best = 0;
        for t in self.target_roots() {
            for c in 0..m.config.root.len() {
                best = best.max(m.best(m.config.root[c], m.target.root[t]));
            }
        }
        best as usize
    }

    fn collect(&self, want: Option<u32>, max: usize) -> Vec<Embedding> {
        if max == 0 || self.config.is_empty() || self.target.is_empty() {
            return Vec::new();
        }
        let (mut m, members) = self.matcher();
        let roots = self.target_roots();
        let n_config = members.len() as u32;
        let goal = match want {
            Some(k) => k,
            None => {
                let mut best = 0;
                for &t in &roots {
                    for c in 0..m.config.root.len() {
                        best = best.max(m.best(m.config.root[c], m.target.root[t]));
                    }
                }
                best
            }
        };
        if goal == 0 {
            return Vec::new();
        }
        let kind = if goal == n_config {
            EmbeddingKind::Full
        } else {
            EmbeddingKind::Mcs
        };
        let spots = &self.target.spots;
        let mut seen: HashSet<Vec<(ModuleId, SpotId)>> = HashSet::new();
        let mut out: Vec<Embedding> = Vec::new();
        'roots: for &t in &roots {
            for c in 0..m.config.root.len() {
                let (cv, tv) = (m.config.root[c], m.target.root[t]);
                if m.best(cv, tv) != goal {
                    continue;
                }
                let mut sink = |pairs: &[(usize, usize)]| {
                    let mut mapping: Vec<(ModuleId, SpotId)> = pairs
                        .iter()
                        .map(|&(ci, ti)| (members[ci], spots[ti].id))
                        .collect();
                    mapping.sort_unstable();
                    if seen.insert(mapping.clone()) {
                        out.push(Embedding { mapping, kind });
                    }
                    out.len() < max
                };
                if !m.expand(&mut vec![(cv, tv)], &mut Vec::new(), &mut sink) {
                    break 'roots;
                }
            }
        }
        out
    }

    /// Up to `params.max_embeddings` embeddings of the whole configuration.
    pub fn full(&self, params: IsoParams) -> Vec<Embedding> {
        if self.config.len() > self.available.iter().filter(|&&a| a).count() {
            return Vec::new();
        }
        self.collect(Some(self.config.len() as u32), params.max_embeddings)
    }

    /// Up to `params.max_embeddings` maximum common subtree embeddings, all of
    /// the same (maximum) size. The kind is `Full` if that size happens to be
    /// the whole configuration.
    pub fn mcs(&self, params: IsoParams) -> Result<Vec<Embedding>, IsoError> {
        if self.config.is_empty() || self.target.is_empty() {
            return Err(IsoError::DegenerateInput);
        }
        Ok(self.collect(None, params.max_embeddings))
    }
}

pub fn enumerate_full_embeddings(
    config: &Configuration,
    target: &TargetConfiguration,
    values: &SpotValueTable,
    params: IsoParams,
) -> Vec<Embedding> {
    EmbeddingSearch::new(config, target, values).full(params)
}

pub fn enumerate_mcs_embeddings(
    config: &Configuration,
    target: &TargetConfiguration,
    values: &SpotValueTable,
    params: IsoParams,
) -> Result<Vec<Embedding>, IsoError> {
    EmbeddingSearch::new(config, target, values).mcs(params)
}

/// Sorts by utility, highest first; ties by smaller spot-id sum, then by
/// mapping.
pub fn order_by_utility(
    embeddings: Vec<Embedding>,
    mut utility: impl FnMut(&Embedding) -> f64,
) -> Vec<(Embedding, f64)> {
    let mut scored: Vec<(Embedding, f64)> = embeddings
        .into_iter()
        .map(|e| {
            let u = utility(&e);
            (e, u)
        })
        .collect();
    scored.sort_by(|(ea, ua), (eb, ub)| {
        ub.total_cmp(ua)
            .then(ea.spot_id_sum().cmp(&eb.spot_id_sum()))
            .then(ea.mapping.cmp(&eb.mapping))
    });
    scored
}

/// True iff `embedding` is injective, maps configuration links to target
/// links, and its domain is a connected part of the configuration.
pub fn is_valid_embedding(
    embedding: &Embedding,
    config: &Configuration,
    target: &TargetConfiguration,
) -> bool {
    let mut images = HashSet::new();
    for &(m, s) in &embedding.mapping {
        if !config.contains(m) || target.spot(s).is_none() || !images.insert(s) {
            return false;
        }
    }
    let domain: Vec<ModuleId> = embedding.mapping.iter().map(|&(m, _)| m).collect();
    let index: HashMap<ModuleId, usize> = domain.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let mut induced = Adjacency::new(domain.len());
    for &(a, b) in &config.edges {
        if let (Some(&ia), Some(&ib)) = (index.get(&a), index.get(&b)) {
            let (sa, sb) = (embedding.mapping[ia].1, embedding.mapping[ib].1);
            let spot = target.spot(sa).expect("checked above");
            if !spot.neighbors.contains(&sb) {
                return false;
            }
            induced.add_edge(ia, ib);
        }
    }
    induced.is_connected()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::centrality::spot_values;
    use crate::model::ConfigId;

    fn path_target(n: usize) -> TargetConfiguration {
        let pts: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, 0.0)).collect();
        let edges: Vec<(u32, u32)> = (1..n as u32).map(|i| (i - 1, i)).collect();
        TargetConfiguration::from_edges(&pts, &edges)
    }

    fn config(n: u32, edges: &[(u32, u32)]) -> Configuration {
        Configuration {
            id: ConfigId(0),
            members: (0..n).map(ModuleId).collect(),
            edges: edges.iter().map(|&(a, b)| (ModuleId(a), ModuleId(b))).collect(),
            leader: ModuleId(0),
        }
    }

    fn path_config(n: u32) -> Configuration {
        let edges: Vec<(u32, u32)> = (1..n).map(|i| (i - 1, i)).collect();
        config(n, &edges)
    }

    #[test]
    fn pair_into_three_path() {
        let t = path_target(3);
        let v = spot_values(&t).unwrap();
        let e = enumerate_full_embeddings(&path_config(2), &t, &v, IsoParams::unbounded());
        assert_eq!(e.len(), 4);
        assert!(e.iter().all(|x| x.kind == EmbeddingKind::Full));
        let capped = enumerate_full_embeddings(&path_config(2), &t, &v, IsoParams { max_embeddings: 3 });
        assert_eq!(capped.len(), 3);
    }

    #[test]
    fn identical_path_has_two_orientations() {
        let t = path_target(5);
        let v = spot_values(&t).unwrap();
        let e = enumerate_full_embeddings(&path_config(5), &t, &v, IsoParams::unbounded());
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn star_does_not_embed_in_path() {
        let t = path_target(5);
        let v = spot_values(&t).unwrap();
        let star = config(4, &[(0, 1), (0, 2), (0, 3)]);
        assert!(enumerate_full_embeddings(&star, &t, &v, IsoParams::unbounded()).is_empty());
        let mcs = enumerate_mcs_embeddings(&star, &t, &v, IsoParams::unbounded()).unwrap();
        assert!(!mcs.is_empty());
        assert!(mcs.iter().all(|e| e.size() == 3 && e.kind == EmbeddingKind::Mcs));
        assert!(mcs.iter().all(|e| is_valid_embedding(e, &star, &t)));
    }

    #[test]
    fn config_larger_than_target_uses_mcs() {
        let t = path_target(3);
        let v = spot_values(&t).unwrap();
        let c = path_config(5);
        assert!(enumerate_full_embeddings(&c, &t, &v, IsoParams::unbounded()).is_empty());
        let mcs = enumerate_mcs_embeddings(&c, &t, &v, IsoParams::unbounded()).unwrap();
        // Three windows of the config path, two orientations each.
        assert_eq!(mcs.len(), 6);
        assert!(mcs.iter().all(|e| e.size() == 3));
    }

    #[test]
    fn first_embedding_touches_most_central_spot() {
        let t = path_target(7);
        let v = spot_values(&t).unwrap();
        let e = enumerate_full_embeddings(&path_config(2), &t, &v, IsoParams { max_embeddings: 1 });
        assert!(e[0].spots().any(|s| s == SpotId(3)));
    }

    #[test]
    fn restriction_excludes_spots() {
        let t = path_target(5);
        let v = spot_values(&t).unwrap();
        let c = path_config(3);
        let search = EmbeddingSearch::new(&c, &t, &v).restrict_to(|s| s != SpotId(2));
        assert!(search.full(IsoParams::unbounded()).is_empty());
        assert_eq!(search.common_size(), 2);
    }

    #[test]
    fn degenerate_inputs() {
        let t = TargetConfiguration::default();
        let v = SpotValueTable::default();
        assert_eq!(
            enumerate_mcs_embeddings(&path_config(2), &t, &v, IsoParams::default()),
            Err(IsoError::DegenerateInput)
        );
    }

    #[test]
    fn ordering_by_utility_then_spot_sum() {
        let a = Embedding { mapping: vec![(ModuleId(0), SpotId(5))], kind: EmbeddingKind::Full };
        let b = Embedding { mapping: vec![(ModuleId(0), SpotId(1))], kind: EmbeddingKind::Full };
        let c = Embedding { mapping: vec![(ModuleId(0), SpotId(9))], kind: EmbeddingKind::Full };
        let us = [(SpotId(5), 3.0), (SpotId(1), 3.0), (SpotId(9), 5.0)];
        let ordered = order_by_utility(vec![a, b, c], |e| {
            us.iter().find(|(s, _)| e.mapping[0].1 == *s).unwrap().1
        });
        let spots: Vec<u32> = ordered.iter().map(|(e, _)| e.mapping[0].1 .0).collect();
        assert_eq!(spots, vec![9, 1, 5]);
    }

    #[test]
    fn assignment_helpers() {
        let w = vec![vec![3, 1], vec![2, 0]];
        assert_eq!(best_assignment_value(&w), 3);
        assert_eq!(
            optimal_assignments(&w, 3),
            vec![vec![(0, 0)], vec![(0, 1), (1, 0)]]
        );
        let w = vec![vec![1, 1]];
        assert_eq!(optimal_assignments(&w, 1).len(), 2);
    }
}
