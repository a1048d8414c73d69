//! Exact maximum independent set by branch and bound.
//!
//! Independent sets of the conflict graph are found as cliques of its
//! complement. Candidates are bounded by a greedy partition into cliques
//! of the conflict graph (each clique contributes at most one vertex), and
//! vertices are visited in degeneracy order.

use alloc::vec;
use alloc::vec::Vec;

use crate::construction::{intersection_size, Block};

#[derive(Clone, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn full(n: usize) -> Bits {
        let mut b = Bits::empty(n);
        for i in 0..n {
            b.insert(i);
        }
        b
    }

    fn insert(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn remove(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn contains(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }

    fn first(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
    }

    fn and_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= b;
        }
    }

    fn and_not_assign(&mut self, other: &Bits) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a &= !b;
        }
    }
}

/// Graph on blocks where an edge marks a pair that may not share a family.
pub struct ConflictGraph {
    blocks: Vec<Block>,
    adjacency: Vec<Bits>,
}

impl ConflictGraph {
    /// Edge between `A` and `B` iff `|A ∩ B| = k`.
    pub fn forbidden_intersection(blocks: Vec<Block>, k: u64) -> ConflictGraph {
        ConflictGraph::from_predicate(blocks, |a, b| intersection_size(a, b) as u64 == k)
    }

    /// Edge between distinct blocks whenever `conflict` holds; the predicate
    /// must be symmetric.
    pub fn from_predicate(
        blocks: Vec<Block>,
        conflict: impl Fn(Block, Block) -> bool,
    ) -> ConflictGraph {
        let n = blocks.len();
        let mut adjacency = vec![Bits::empty(n); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if conflict(blocks[i], blocks[j]) {
                    adjacency[i].insert(j);
                    adjacency[j].insert(i);
                }
            }
        }
        ConflictGraph { blocks, adjacency }
    }

    pub fn vertex_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Bits::count).sum::<usize>() / 2
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adjacency[i].contains(j)
    }

    pub fn is_independent(&self, members: &[usize]) -> bool {
        members.iter().enumerate().all(|(x, &i)| {
            members[x + 1..]
                .iter()
                .all(|&j| i != j && !self.adjacent(i, j))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome {
    /// Vertex indices of the best independent set found, ascending.
    pub members: Vec<usize>,
    /// True when the search finished, so `members` is a maximum.
    pub complete: bool,
    pub nodes: u64,
}

/// First-fit independent set in vertex order.
pub fn greedy_independent_set(graph: &ConflictGraph) -> Vec<usize> {
    let mut chosen: Vec<usize> = Vec::new();
    for v in 0..graph.vertex_count() {
        if chosen.iter().all(|&u| !graph.adjacent(u, v)) {
            chosen.push(v);
        }
    }
    chosen
}

/// Maximum independent set, exploring at most `node_budget` search nodes.
/// When the budget runs out the best set so far comes back with
/// `complete == false`.
pub fn maximum_independent_set(graph: &ConflictGraph, node_budget: u64) -> SearchOutcome {
    let n = graph.vertex_count();
    let order = degeneracy_order(graph);

    // Relabel so that position in `order` is the vertex id.
    let mut position = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        position[v] = pos;
    }
    let mut conflict = vec![Bits::empty(n); n];
    for (pos, &v) in order.iter().enumerate() {
        for (u, &pu) in position.iter().enumerate() {
            if graph.adjacent(v, u) {
                conflict[pos].insert(pu);
            }
        }
    }

    let incumbent: Vec<usize> = greedy_independent_set(graph)
        .into_iter()
        .map(|v| position[v])
        .collect();
    let mut search = Search {
        conflict: &conflict,
        best: incumbent,
        current: Vec::new(),
        nodes: 0,
        budget: node_budget,
        exhausted: false,
    };
    search.expand(Bits::full(n));

    let mut members: Vec<usize> = search.best.iter().map(|&pos| order[pos]).collect();
    members.sort_unstable();
    SearchOutcome {
        members,
        complete: !search.exhausted,
        nodes: search.nodes,
    }
}

struct Search<'a> {
    conflict: &'a [Bits],
    best: Vec<usize>,
    current: Vec<usize>,
    nodes: u64,
    budget: u64,
    exhausted: bool,
}

impl Search<'_> {
    fn expand(&mut self, mut candidates: Bits) {
        if self.nodes >= self.budget {
            self.exhausted = true;
            return;
        }
        self.nodes += 1;

        // Greedy clique cover of the candidates: vertex `order[i]` lies in
        // clique number `cover[i]`, which is nondecreasing along `order`.
        let mut order = Vec::with_capacity(candidates.count());
        let mut cover = Vec::with_capacity(order.capacity());
        let mut uncovered = candidates.clone();
        let mut cliques = 0;
        while !uncovered.is_empty() {
            cliques += 1;
            let mut open = uncovered.clone();
            while let Some(v) = open.first() {
                uncovered.remove(v);
                open.remove(v);
                open.and_assign(&self.conflict[v]);
                order.push(v);
                cover.push(cliques);
            }
        }

        for idx in (0..order.len()).rev() {
            if self.current.len() + cover[idx] <= self.best.len() {
                return;
            }
            let v = order[idx];
            self.current.push(v);
            let mut next = candidates.clone();
            next.remove(v);
            next.and_not_assign(&self.conflict[v]);
            if next.is_empty() {
                if self.current.len() > self.best.len() {
                    self.best = self.current.clone();
                }
            } else {
                self.expand(next);
            }
            self.current.pop();
            candidates.remove(v);
            if self.exhausted {
                return;
            }
        }
    }
}

/// Repeatedly removes a vertex of least remaining degree in the
/// compatibility graph (the complement of the conflict graph), then
/// reverses, so densely compatible vertices come first. Ties go to the
/// lowest index.
fn degeneracy_order(graph: &ConflictGraph) -> Vec<usize> {
    let n = graph.vertex_count();
    let mut degree: Vec<usize> = (0..n).map(|v| n - 1 - graph.adjacency[v].count()).collect();
    let mut removed = vec![false; n];
    let mut peeled = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("a vertex remains");
        removed[v] = true;
        peeled.push(v);
        for u in 0..n {
            if !removed[u] && u != v && !graph.adjacent(u, v) {
                degree[u] -= 1;
            }
        }
    }
    peeled.reverse();
    peeled
}
