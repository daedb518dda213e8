//! Automorphism groups of colored graphs.
//!
//! The search individualizes vertices inside the first non-singleton cell of
//! an equitable partition (iterated color-degree refinement), compares every
//! discrete partition reached against the first one, and verifies candidate
//! maps against the full adjacency structure. Discovered automorphisms prune
//! later branches through the orbits of the subgroup fixing the current
//! individualization prefix. The group order is obtained by explicit closure
//! of the generator set, which stays comfortably small for everything here.

use std::collections::{BTreeMap, HashSet};

/// Simple undirected colored graph on vertices `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColoredGraph {
    n: usize,
    color: Vec<u32>,
    adj: Vec<bool>,
}

impl ColoredGraph {
    pub fn new(n: usize, color: Vec<u32>) -> Self {
        assert_eq!(color.len(), n);
        ColoredGraph { n, color, adj: vec![false; n * n] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, v: usize) -> u32 {
        self.color[v]
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.adj[u * self.n + v] = true;
        self.adj[v * self.n + u] = true;
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.n + v]
    }

    /// Cycle graph on `n` vertices with a uniform color, for tests.
    pub fn cycle(n: usize) -> Self {
        let mut g = Self::new(n, vec![0; n]);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    /// The isomorphic copy with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &Perm) -> ColoredGraph {
        let mut color = vec![0; self.n];
        for v in 0..self.n {
            color[perm.apply(v)] = self.color[v];
        }
        let mut g = ColoredGraph::new(self.n, color);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.adjacent(u, v) {
                    g.add_edge(perm.apply(u), perm.apply(v));
                }
            }
        }
        g
    }
}

/// A permutation of `0..n`, stored as its image list.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Perm(Vec<u16>);

impl Perm {
    pub fn identity(n: usize) -> Self {
        Perm((0..n).map(|v| v as u16).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Self {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            assert!(v < n && !seen[v], "not a permutation");
            seen[v] = true;
        }
        Perm(images.into_iter().map(|v| v as u16).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn apply(&self, v: usize) -> usize {
        usize::from(self.0[v])
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.0.len(), other.0.len());
        Perm(other.0.iter().map(|&v| self.0[usize::from(v)]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u16; self.0.len()];
        for (v, &img) in self.0.iter().enumerate() {
            inv[usize::from(img)] = v as u16;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(v, &img)| usize::from(img) == v)
    }

    /// Nontrivial cycles, each rotated to start at its smallest element.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] || self.apply(start) == start {
                seen[start] = true;
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut v = self.apply(start);
            while v != start {
                seen[v] = true;
                cyc.push(v);
                v = self.apply(v);
            }
            out.push(cyc);
        }
        out
    }
}

/// A permutation group given by generators, with its order computed by
/// explicit closure and its orbit partition.
#[derive(Clone, Debug)]
pub struct PermGroup {
    pub degree: usize,
    pub generators: Vec<Perm>,
    pub order: u64,
    pub orbits: Vec<Vec<usize>>,
}

impl PermGroup {
    /// Build from generators: closes the set explicitly (so `order` is exact)
    /// and computes orbits. Panics if the closure exceeds `bound` elements.
    pub fn from_generators(degree: usize, generators: Vec<Perm>, bound: usize) -> Self {
        let elements = permutation_closure(degree, &generators, bound);
        let orbits = orbit_partition(degree, &generators);
        PermGroup { degree, generators, order: elements.len() as u64, orbits }
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(Vec::len).collect()
    }
}

/// Breadth-first closure of a generator set. For a finite group the products
/// of generators already contain all inverses.
pub fn permutation_closure(degree: usize, gens: &[Perm], bound: usize) -> Vec<Perm> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut elements = vec![id.clone()];
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for p in &frontier {
            for g in gens {
                let q = g.compose(p);
                if seen.insert(q.clone()) {
                    assert!(
                        seen.len() <= bound,
                        "permutation closure exceeded safety bound {bound}"
                    );
                    elements.push(q.clone());
                    next.push(q);
                }
            }
        }
        frontier = next;
    }
    elements
}

fn orbit_partition(degree: usize, gens: &[Perm]) -> Vec<Vec<usize>> {
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for v in 0..degree {
            uf.union(v, g.apply(v));
        }
    }
    let mut by_root: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..degree {
        by_root.entry(uf.find(v)).or_default().push(v);
    }
    let mut orbits: Vec<Vec<usize>> = by_root.into_values().collect();
    orbits.sort_by_key(|o| o[0]);
    orbits
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, v: usize) -> usize {
        if self.parent[v] != v {
            let root = self.find(self.parent[v]);
            self.parent[v] = root;
        }
        self.parent[v]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

const CLOSURE_BOUND: usize = 1_000_000;

/// Compute the color- and adjacency-preserving automorphism group of `g`.
pub fn automorphism_group(g: &ColoredGraph) -> PermGroup {
    let mut search = AutoSearch { graph: g, base_leaf: None, generators: Vec::new() };
    let initial = initial_partition(g);
    search.dfs(initial, &mut Vec::new());
    PermGroup::from_generators(g.n(), search.generators, CLOSURE_BOUND)
}

fn initial_partition(g: &ColoredGraph) -> Vec<Vec<u16>> {
    let mut by_color: BTreeMap<u32, Vec<u16>> = BTreeMap::new();
    for v in 0..g.n() {
        by_color.entry(g.color(v)).or_default().push(v as u16);
    }
    by_color.into_values().collect()
}

struct AutoSearch<'g> {
    graph: &'g ColoredGraph,
    base_leaf: Option<Vec<u16>>,
    generators: Vec<Perm>,
}

impl AutoSearch<'_> {
    fn dfs(&mut self, cells: Vec<Vec<u16>>, prefix: &mut Vec<u16>) {
        let cells = refine(self.graph, cells);
        let Some(target) = cells.iter().position(|c| c.len() > 1) else {
            self.handle_leaf(&cells);
            return;
        };
        let candidates = cells[target].clone();
        let mut tried: Vec<u16> = Vec::new();
        for &v in &candidates {
            if self.in_orbit_of_tried(v, &tried, prefix) {
                continue;
            }
            tried.push(v);
            let mut child = cells.clone();
            let rest: Vec<u16> = child[target].iter().copied().filter(|&u| u != v).collect();
            child[target] = vec![v];
            child.insert(target + 1, rest);
            prefix.push(v);
            self.dfs(child, prefix);
            prefix.pop();
        }
    }

    fn handle_leaf(&mut self, cells: &[Vec<u16>]) {
        let leaf: Vec<u16> = cells.iter().map(|c| c[0]).collect();
        match &self.base_leaf {
            None => self.base_leaf = Some(leaf),
            Some(base) => {
                let n = self.graph.n();
                let mut images = vec![0usize; n];
                for (b, l) in base.iter().zip(&leaf) {
                    images[usize::from(*b)] = usize::from(*l);
                }
                let candidate = Perm::from_images(images);
                if !candidate.is_identity() && self.is_automorphism(&candidate) {
                    self.generators.push(candidate);
                }
            }
        }
    }

    fn is_automorphism(&self, p: &Perm) -> bool {
        let g = self.graph;
        for v in 0..g.n() {
            if g.color(v) != g.color(p.apply(v)) {
                return false;
            }
        }
        for u in 0..g.n() {
            for v in u + 1..g.n() {
                if g.adjacent(u, v) != g.adjacent(p.apply(u), p.apply(v)) {
                    return false;
                }
            }
        }
        true
    }

    /// True when `v` is connected to an already-tried candidate by the
    /// subgroup of discovered automorphisms fixing the current prefix.
    fn in_orbit_of_tried(&self, v: u16, tried: &[u16], prefix: &[u16]) -> bool {
        if tried.is_empty() || self.generators.is_empty() {
            return false;
        }
        let fixing: Vec<&Perm> = self
            .generators
            .iter()
            .filter(|g| prefix.iter().all(|&p| g.apply(usize::from(p)) == usize::from(p)))
            .collect();
        if fixing.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.graph.n());
        for g in fixing {
            for u in 0..self.graph.n() {
                uf.union(u, g.apply(u));
            }
        }
        let rv = uf.find(usize::from(v));
        tried.iter().any(|&u| uf.find(usize::from(u)) == rv)
    }
}

/// Iterated color-degree refinement: split every cell by the vector of
/// neighbor counts into each current cell, until stable. Subcells replace
/// their parent in degree-key order, which keeps the procedure independent
/// of vertex labels.
fn refine(g: &ColoredGraph, mut cells: Vec<Vec<u16>>) -> Vec<Vec<u16>> {
    loop {
        let mut changed = false;
        let mut next: Vec<Vec<u16>> = Vec::with_capacity(cells.len());
        for cell in &cells {
            if cell.len() == 1 {
                next.push(cell.clone());
                continue;
            }
            let mut groups: BTreeMap<Vec<u32>, Vec<u16>> = BTreeMap::new();
            for &v in cell {
                let key: Vec<u32> = cells
                    .iter()
                    .map(|c| {
                        c.iter()
                            .filter(|&&u| g.adjacent(usize::from(v), usize::from(u)))
                            .count() as u32
                    })
                    .collect();
                groups.entry(key).or_default().push(v);
            }
            if groups.len() > 1 {
                changed = true;
            }
            next.extend(groups.into_values());
        }
        cells = next;
        if !changed {
            return cells;
        }
    }
}
