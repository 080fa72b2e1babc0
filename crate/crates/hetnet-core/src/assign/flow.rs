//! Exact max-weight association via successive-shortest-path min-cost flow.
//!
//! The instance maps onto a transportation network: source → user (cap 1),
//! user → BS over candidate pairs (cap 1, cost −w), BS → sink (cap L_j).
//! The constraint matrix of this polytope is totally unimodular, so the LP
//! relaxation has integral vertices and the flow optimum is the exact
//! integer optimum. In optional mode augmentation stops once the cheapest
//! path no longer has negative cost, which is what keeps negative-weight
//! pairs out of the solution.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::assign::{AssignMode, Assignment, WeightMatrix};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
struct Edge {
    to: usize,
    cap: u32,
    cost: f64,
}

struct Network {
    adj: Vec<Vec<usize>>,
    edges: Vec<Edge>,
}

impl Network {
    fn new(nodes: usize) -> Network {
        Network {
            adj: vec![Vec::new(); nodes],
            edges: Vec::new(),
        }
    }

    fn add_edge(&mut self, from: usize, to: usize, cap: u32, cost: f64) -> usize {
        let id = self.edges.len();
        self.edges.push(Edge { to, cap, cost });
        self.edges.push(Edge {
            to: from,
            cap: 0,
            cost: -cost,
        });
        self.adj[from].push(id);
        self.adj[to].push(id + 1);
        id
    }
}

struct HeapItem {
    dist: f64,
    node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.dist == other.dist && self.node == other.node
    }
}
impl Eq for HeapItem {}
impl Ord for HeapItem {
    fn cmp(&self, other: &Self) -> Ordering {
        // Reversed: BinaryHeap is a max-heap, we want the smallest distance.
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

const UNSET: usize = usize::MAX;

/// Maximizes `Σ w[k][j]·x[k][j]` subject to the per-BS load caps, the
/// row-sum mode, and the candidacy mask. Optional mode never assigns a
/// user at negative benefit; mandatory mode connects every user and fails
/// with an infeasibility error when it cannot.
pub fn solve_max_weight(w: &WeightMatrix, mode: AssignMode) -> Result<Assignment> {
    w.validate()?;
    let k_total = w.num_users();
    let j_total = w.num_bs();

    if mode == AssignMode::Mandatory {
        let cap_sum: usize = w.capacities.iter().sum();
        if cap_sum < k_total {
            return Err(Error::Infeasible(format!(
                "mandatory mode needs total capacity >= {k_total}, have {cap_sum}"
            )));
        }
    }
    if k_total == 0 {
        return Ok(Assignment::empty(0, j_total, mode));
    }

    // Node layout: source, users, BSs, sink.
    let source = 0usize;
    let user = |k: usize| 1 + k;
    let bs = |j: usize| 1 + k_total + j;
    let sink = 1 + k_total + j_total;
    let nodes = sink + 1;

    let mut net = Network::new(nodes);
    let mut pair_edge = vec![vec![UNSET; j_total]; k_total];
    for k in 0..k_total {
        net.add_edge(source, user(k), 1, 0.0);
        for j in 0..j_total {
            if w.allowed[k][j] {
                pair_edge[k][j] = net.add_edge(user(k), bs(j), 1, -w.w[k][j]);
            }
        }
    }
    for j in 0..j_total {
        net.add_edge(bs(j), sink, w.capacities[j] as u32, 0.0);
    }

    // Initial potentials via Bellman-Ford (edge costs may be negative).
    let mut potential = vec![0.0f64; nodes];
    {
        let mut dist = vec![f64::INFINITY; nodes];
        dist[source] = 0.0;
        for _ in 0..nodes {
            let mut changed = false;
            for from in 0..nodes {
                if !dist[from].is_finite() {
                    continue;
                }
                for &eid in &net.adj[from] {
                    let e = &net.edges[eid];
                    if e.cap > 0 && dist[from] + e.cost < dist[e.to] - 1e-15 {
                        dist[e.to] = dist[from] + e.cost;
                        changed = true;
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] = dist[v];
            }
        }
    }

    let mut dist = vec![f64::INFINITY; nodes];
    let mut parent_edge = vec![UNSET; nodes];
    let mut assigned = 0usize;

    loop {
        // Dijkstra over reduced costs.
        dist.iter_mut().for_each(|d| *d = f64::INFINITY);
        parent_edge.iter_mut().for_each(|p| *p = UNSET);
        dist[source] = 0.0;
        let mut heap = BinaryHeap::new();
        heap.push(HeapItem {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapItem { dist: d, node }) = heap.pop() {
            if d > dist[node] {
                continue;
            }
            for &eid in &net.adj[node] {
                let e = &net.edges[eid];
                if e.cap == 0 {
                    continue;
                }
                // Clamp tiny negative reduced costs from float round-off.
                let rc = (e.cost + potential[node] - potential[e.to]).max(0.0);
                let nd = d + rc;
                if nd < dist[e.to] {
                    dist[e.to] = nd;
                    parent_edge[e.to] = eid;
                    heap.push(HeapItem {
                        dist: nd,
                        node: e.to,
                    });
                }
            }
        }

        if !dist[sink].is_finite() {
            break;
        }
        let true_cost = dist[sink] + potential[sink] - potential[source];
        if mode == AssignMode::Optional && true_cost >= -1e-12 {
            break;
        }

        // Augment one unit along the shortest path.
        let mut v = sink;
        while v != source {
            let eid = parent_edge[v];
            net.edges[eid].cap -= 1;
            net.edges[eid ^ 1].cap += 1;
            v = net.edges[eid ^ 1].to;
        }
        assigned += 1;

        for v in 0..nodes {
            if dist[v].is_finite() {
                potential[v] += dist[v];
            }
        }

        if assigned == k_total {
            break;
        }
    }

    if mode == AssignMode::Mandatory && assigned < k_total {
        return Err(Error::Infeasible(format!(
            "only {assigned} of {k_total} users can be connected under the candidacy mask"
        )));
    }

    let mut result = Assignment::empty(k_total, j_total, mode);
    for k in 0..k_total {
        for j in 0..j_total {
            let eid = pair_edge[k][j];
            if eid != UNSET && net.edges[eid].cap == 0 {
                result.set(k, Some(j));
            }
        }
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair_is_assigned() {
        let w = WeightMatrix::new(vec![vec![4.0]], vec![1]).unwrap();
        let a = solve_max_weight(&w, AssignMode::Optional).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.total_weight(&w.w), 4.0);
    }

    #[test]
    fn three_users_two_bs_value_nine() {
        let w = WeightMatrix::new(
            vec![vec![5.0, 4.0], vec![5.0, 1.0], vec![2.0, 3.0]],
            vec![1, 1],
        )
        .unwrap();
        let a = solve_max_weight(&w, AssignMode::Optional).unwrap();
        assert!((a.total_weight(&w.w) - 9.0).abs() < 1e-9);
        assert_eq!(a.choice(0), Some(1));
        assert_eq!(a.choice(1), Some(0));
        assert_eq!(a.choice(2), None);
    }

    #[test]
    fn optional_skips_negative_weights() {
        let w = WeightMatrix::new(vec![vec![-1.0], vec![-2.0]], vec![1]).unwrap();
        let a = solve_max_weight(&w, AssignMode::Optional).unwrap();
        assert_eq!(a.num_assigned(), 0);
        assert_eq!(a.total_weight(&w.w), 0.0);
    }

    #[test]
    fn mandatory_takes_negative_weights_when_forced() {
        let w = WeightMatrix::new(vec![vec![-1.0], vec![-2.0]], vec![2]).unwrap();
        let a = solve_max_weight(&w, AssignMode::Mandatory).unwrap();
        assert_eq!(a.num_assigned(), 2);
        assert!((a.total_weight(&w.w) - -3.0).abs() < 1e-12);
    }

    #[test]
    fn mandatory_rejects_insufficient_capacity() {
        let w = WeightMatrix::new(vec![vec![1.0], vec![1.0]], vec![1]).unwrap();
        assert!(matches!(
            solve_max_weight(&w, AssignMode::Mandatory),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn mandatory_rejects_masked_out_user() {
        let w = WeightMatrix::with_mask(
            vec![vec![1.0], vec![1.0]],
            vec![2],
            vec![vec![true], vec![false]],
        )
        .unwrap();
        assert!(matches!(
            solve_max_weight(&w, AssignMode::Mandatory),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn mask_is_respected() {
        let w = WeightMatrix::with_mask(
            vec![vec![10.0, 1.0]],
            vec![1, 1],
            vec![vec![false, true]],
        )
        .unwrap();
        let a = solve_max_weight(&w, AssignMode::Optional).unwrap();
        assert_eq!(a.choice(0), Some(1));
    }

    #[test]
    fn capacity_sharing_prefers_heavier_users() {
        // Both users want BS 0 (cap 1); the solver must route the lighter
        // one to BS 1 even though its direct gain is lower.
        let w = WeightMatrix::new(vec![vec![9.0, 1.0], vec![8.0, 7.0]], vec![1, 1]).unwrap();
        let a = solve_max_weight(&w, AssignMode::Optional).unwrap();
        assert_eq!(a.choice(0), Some(0));
        assert_eq!(a.choice(1), Some(1));
        assert!((a.total_weight(&w.w) - 16.0).abs() < 1e-9);
    }
}
