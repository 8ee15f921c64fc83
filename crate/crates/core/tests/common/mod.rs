//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeSet, VecDeque};

use msr_plan::model::{ConfigId, Configuration, ModuleId, SpotId, TargetConfiguration};
use proptest::prelude::*;

/// Edge list of a tree on `0..n` from a parent vector (`parents[i] < i + 1`).
pub fn tree_edges(parents: &[usize]) -> Vec<(u32, u32)> {
    parents
        .iter()
        .enumerate()
        .map(|(i, &p)| (p as u32, i as u32 + 1))
        .collect()
}

/// Random tree with `lo..=hi` vertices, as (vertex count, edges).
pub fn tree_strategy(lo: usize, hi: usize) -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    (lo..=hi).prop_flat_map(|n| {
        let parents: Vec<BoxedStrategy<usize>> = (1..n).map(|i| (0..i).boxed()).collect();
        parents.prop_map(move |ps| (n, tree_edges(&ps)))
    })
}

/// Random tree whose vertex degrees never exceed `max_degree`.
pub fn bounded_tree_strategy(
    lo: usize,
    hi: usize,
    max_degree: usize,
) -> impl Strategy<Value = (usize, Vec<(u32, u32)>)> {
    tree_strategy(lo, hi).prop_map(move |(n, edges)| {
        let mut degree = vec![0usize; n];
        let mut kept = Vec::new();
        for (p, c) in edges {
            // Re-attach to the first vertex with room, keeping the tree shape.
            let parent = if degree[p as usize] < max_degree {
                p
            } else {
                (0..c).find(|&v| degree[v as usize] < max_degree).unwrap()
            };
            degree[parent as usize] += 1;
            degree[c as usize] += 1;
            kept.push((parent, c));
        }
        (n, kept)
    })
}

pub fn target(n: usize, edges: &[(u32, u32)]) -> TargetConfiguration {
    let points: Vec<(f64, f64)> = (0..n).map(|i| (i as f64, (i % 3) as f64)).collect();
    TargetConfiguration::from_edges(&points, edges)
}

pub fn config(n: usize, edges: &[(u32, u32)]) -> Configuration {
    Configuration {
        id: ConfigId(0),
        members: (0..n as u32).map(ModuleId).collect(),
        edges: edges.iter().map(|&(a, b)| (ModuleId(a), ModuleId(b))).collect(),
        leader: ModuleId(0),
    }
}

pub fn adjacency_lists(n: usize, edges: &[(u32, u32)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for &(a, b) in edges {
        adj[a as usize].push(b as usize);
        adj[b as usize].push(a as usize);
    }
    adj
}

/// Distances and shortest-path counts from `s`.
fn bfs_counts(adj: &[Vec<usize>], s: usize) -> (Vec<Option<usize>>, Vec<u128>) {
    let n = adj.len();
    let mut dist = vec![None; n];
    let mut sigma = vec![0u128; n];
    dist[s] = Some(0);
    sigma[s] = 1;
    let mut q = VecDeque::from([s]);
    while let Some(v) = q.pop_front() {
        let d = dist[v].unwrap();
        for &w in &adj[v] {
            match dist[w] {
                None => {
                    dist[w] = Some(d + 1);
                    sigma[w] = sigma[v];
                    q.push_back(w);
                }
                Some(dw) if dw == d + 1 => sigma[w] += sigma[v],
                _ => {}
            }
        }
    }
    (dist, sigma)
}

/// Path-count betweenness straight from the definition: over unordered pairs
/// `{j, k}` not containing `i`, paths through `i` over all shortest paths.
pub fn brute_values(n: usize, edges: &[(u32, u32)]) -> Vec<f64> {
    let adj = adjacency_lists(n, edges);
    let all: Vec<_> = (0..n).map(|s| bfs_counts(&adj, s)).collect();
    (0..n)
        .map(|i| {
            let (mut through, mut total) = (0u128, 0u128);
            for j in 0..n {
                for k in j + 1..n {
                    if j == i || k == i {
                        continue;
                    }
                    let (dj, sj) = &all[j];
                    let Some(djk) = dj[k] else { continue };
                    total += sj[k];
                    if let (Some(dji), Some(dik)) = (dj[i], all[i].0[k]) {
                        if dji + dik == djk {
                            through += sj[i] * all[i].1[k];
                        }
                    }
                }
            }
            if total == 0 {
                0.0
            } else {
                through as f64 / total as f64
            }
        })
        .collect()
}

fn is_edge(adj: &[Vec<usize>], a: usize, b: usize) -> bool {
    adj[a].contains(&b)
}

/// Every injective, edge-preserving map of the vertex subset `domain` of the
/// configuration into the target.
fn maps_of(
    domain: &[usize],
    c_adj: &[Vec<usize>],
    t_adj: &[Vec<usize>],
    out: &mut BTreeSet<Vec<(ModuleId, SpotId)>>,
) {
    let mut image: Vec<Option<usize>> = vec![None; c_adj.len()];
    let mut used = vec![false; t_adj.len()];
    fn go(
        i: usize,
        domain: &[usize],
        c_adj: &[Vec<usize>],
        t_adj: &[Vec<usize>],
        image: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        out: &mut BTreeSet<Vec<(ModuleId, SpotId)>>,
    ) {
        if i == domain.len() {
            let mut m: Vec<(ModuleId, SpotId)> = domain
                .iter()
                .map(|&u| (ModuleId(u as u32), SpotId(image[u].unwrap() as u32)))
                .collect();
            m.sort_unstable();
            out.insert(m);
            return;
        }
        let u = domain[i];
        for t in 0..t_adj.len() {
            if used[t] {
                continue;
            }
            let ok = domain[..i].iter().all(|&w| {
                !is_edge(c_adj, u, w) || is_edge(t_adj, t, image[w].unwrap())
            });
            if ok {
                used[t] = true;
                image[u] = Some(t);
                go(i + 1, domain, c_adj, t_adj, image, used, out);
                image[u] = None;
                used[t] = false;
            }
        }
    }
    go(0, domain, c_adj, t_adj, &mut image, &mut used, out);
}

pub fn brute_full_embeddings(
    nc: usize,
    c_edges: &[(u32, u32)],
    nt: usize,
    t_edges: &[(u32, u32)],
) -> BTreeSet<Vec<(ModuleId, SpotId)>> {
    let c_adj = adjacency_lists(nc, c_edges);
    let t_adj = adjacency_lists(nt, t_edges);
    let mut out = BTreeSet::new();
    if nc <= nt {
        maps_of(&(0..nc).collect::<Vec<_>>(), &c_adj, &t_adj, &mut out);
    }
    out
}

fn connected(subset: &[usize], adj: &[Vec<usize>]) -> bool {
    let Some(&start) = subset.first() else { return false };
    let mut seen = vec![start];
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if subset.contains(&w) && !seen.contains(&w) {
                seen.push(w);
                stack.push(w);
            }
        }
    }
    seen.len() == subset.len()
}

/// Size of the largest connected configuration subset that embeds, and all
/// embeddings of that size.
pub fn brute_mcs(
    nc: usize,
    c_edges: &[(u32, u32)],
    nt: usize,
    t_edges: &[(u32, u32)],
) -> (usize, BTreeSet<Vec<(ModuleId, SpotId)>>) {
    let c_adj = adjacency_lists(nc, c_edges);
    let t_adj = adjacency_lists(nt, t_edges);
    for size in (1..=nc.min(nt)).rev() {
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << nc) {
            if mask.count_ones() as usize != size {
                continue;
            }
            let subset: Vec<usize> = (0..nc).filter(|&i| mask >> i & 1 == 1).collect();
            if connected(&subset, &c_adj) {
                maps_of(&subset, &c_adj, &t_adj, &mut out);
            }
        }
        if !out.is_empty() {
            return (size, out);
        }
    }
    (0, BTreeSet::new())
}

/// All permutations of `0..n` (Heap's algorithm).
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut a: Vec<usize> = (0..n).collect();
    let mut out = vec![a.clone()];
    let mut c = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                a.swap(0, i);
            } else {
                a.swap(c[i], i);
            }
            out.push(a.clone());
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

/// Best total over injective assignments of `min(rows, cols)` pairs.
pub fn brute_optimal(rows: &[Vec<f64>]) -> f64 {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if r == 0 || c == 0 {
        return 0.0;
    }
    let n = r.max(c);
    let get = |i: usize, j: usize| if i < r && j < c { rows[i][j] } else { 0.0 };
    permutations(n)
        .into_iter()
        .map(|p| (0..n).map(|i| get(i, p[i])).sum::<f64>())
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Random utility matrix with entries in `[-20, 5]`.
pub fn matrix_strategy(
    rows: std::ops::RangeInclusive<usize>,
    cols: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = Vec<Vec<f64>>> {
    (rows, cols).prop_flat_map(|(r, c)| {
        proptest::collection::vec(proptest::collection::vec(-20.0f64..5.0, c), r)
    })
}
