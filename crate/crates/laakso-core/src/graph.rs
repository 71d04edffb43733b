use std::collections::VecDeque;
use std::ops::Range;

use crate::error::{LaaksoError, Result};
use crate::params::{LaaksoParams, DEFAULT_VERTEX_CAP};
use crate::Rational;

pub type VertexId = u32;

/// Wildcard symbol in a digit word.
pub const WILDCARD: u8 = 0;

/// A vertex named by its height numerator (units of `1/D`) and digit word.
///
/// Digits take values `1..=M`; the value [`WILDCARD`] marks the single merged
/// position of a vertex sitting at a wormhole height.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LVertex {
    pub h: u64,
    pub digits: Vec<u8>,
}

impl LVertex {
    pub fn new(h: u64, digits: Vec<u8>) -> Self {
        Self { h, digits }
    }
}

/// The metric graph `G_n`: every edge has length `1/D` and weight `1/(D M^n)`.
#[derive(Clone, Debug)]
pub struct LaaksoGraph {
    params: LaaksoParams,
    denom: u64,
    offsets: Vec<u32>,
    wild: Vec<u8>,
    heights: Vec<u32>,
    digits: Vec<u8>,
    adj_start: Vec<u32>,
    adj: Vec<u32>,
    edges: Vec<[u32; 2]>,
}

/// Builds `G_n` with the default size cap.
pub fn build_graph(params: &LaaksoParams) -> Result<LaaksoGraph> {
    LaaksoGraph::build(params, DEFAULT_VERTEX_CAP)
}

impl LaaksoGraph {
    pub fn build(params: &LaaksoParams, vertex_cap: u64) -> Result<Self> {
        let bound = params.vertex_bound();
        if bound > vertex_cap {
            return Err(LaaksoError::TooLarge { vertices: bound, cap: vertex_cap });
        }
        let n = params.depth();
        let m = params.m();
        let denom = params.denom();

        let mut wild = Vec::with_capacity(denom as usize + 1);
        let mut offsets = Vec::with_capacity(denom as usize + 2);
        let mut total: u64 = 0;
        for h in 0..=denom {
            let w = match params.height_level(h) {
                Some(l) if l <= n => l as u8,
                _ => 0,
            };
            wild.push(w);
            offsets.push(total as u32);
            let free = if w == 0 { n } else { n - 1 };
            total += (m as u64).pow(free as u32);
        }
        offsets.push(total as u32);

        let nv = total as usize;
        let mut heights = Vec::with_capacity(nv);
        let mut digits = vec![0u8; nv * n];
        for h in 0..=denom as usize {
            let w = wild[h] as usize;
            let start = offsets[h] as usize;
            let count = (offsets[h + 1] - offsets[h]) as usize;
            for code in 0..count {
                heights.push(h as u32);
                let word = &mut digits[(start + code) * n..(start + code + 1) * n];
                let mut rest = code;
                for pos in (1..=n).rev() {
                    if pos == w {
                        word[pos - 1] = WILDCARD;
                    } else {
                        word[pos - 1] = (rest % m as usize) as u8 + 1;
                        rest /= m as usize;
                    }
                }
            }
        }

        let mut g = Self {
            params: params.clone(),
            denom,
            offsets,
            wild,
            heights,
            digits,
            adj_start: Vec::new(),
            adj: Vec::new(),
            edges: Vec::new(),
        };
        g.build_edges();
        Ok(g)
    }

    fn build_edges(&mut self) {
        let n = self.params.depth();
        let m = self.params.m() as u8;
        let mut edges = Vec::with_capacity((self.denom as usize) * (self.params.m() as usize).pow(n as u32));
        let mut scratch = vec![0u8; n];
        for h in 0..self.denom as usize {
            let up_wild = self.wild[h + 1] as usize;
            let here_wild = self.wild[h] as usize;
            for v in self.offsets[h]..self.offsets[h + 1] {
                scratch.copy_from_slice(self.digits_of(v));
                if up_wild != 0 {
                    scratch[up_wild - 1] = WILDCARD;
                    let w = self.code_lookup(h + 1, &scratch);
                    edges.push([v, w]);
                } else if here_wild != 0 {
                    for c in 1..=m {
                        scratch[here_wild - 1] = c;
                        let w = self.code_lookup(h + 1, &scratch);
                        edges.push([v, w]);
                    }
                } else {
                    let w = self.code_lookup(h + 1, &scratch);
                    edges.push([v, w]);
                }
            }
        }
        let nv = self.heights.len();
        let mut deg = vec![0u32; nv + 1];
        for e in &edges {
            deg[e[0] as usize] += 1;
            deg[e[1] as usize] += 1;
        }
        let mut start = vec![0u32; nv + 1];
        for i in 0..nv {
            start[i + 1] = start[i] + deg[i];
        }
        let mut fill = start.clone();
        let mut adj = vec![0u32; start[nv] as usize];
        for e in &edges {
            adj[fill[e[0] as usize] as usize] = e[1];
            fill[e[0] as usize] += 1;
            adj[fill[e[1] as usize] as usize] = e[0];
            fill[e[1] as usize] += 1;
        }
        self.adj_start = start;
        self.adj = adj;
        self.edges = edges;
    }

    /// Id of the vertex at height `h` with a digit word already known to be valid there.
    fn code_lookup(&self, h: usize, word: &[u8]) -> VertexId {
        let m = self.params.m();
        let w = self.wild[h] as usize;
        let mut code: u32 = 0;
        for (i, &d) in word.iter().enumerate() {
            if i + 1 != w {
                code = code * m + (d as u32 - 1);
            }
        }
        self.offsets[h] + code
    }

    pub fn params(&self) -> &LaaksoParams {
        &self.params
    }

    pub fn depth(&self) -> usize {
        self.params.depth()
    }

    pub fn m(&self) -> u32 {
        self.params.m()
    }

    /// `D`, the number of height steps.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn vertex_count(&self) -> usize {
        self.heights.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `[lower, upper]` endpoint pairs, the lower endpoint one height step below.
    pub fn edges(&self) -> &[[VertexId; 2]] {
        &self.edges
    }

    pub fn edge_length(&self) -> Rational {
        Rational::new(1, self.denom as i64)
    }

    pub fn edge_weight(&self) -> Rational {
        Rational::new(1, (self.denom * (self.m() as u64).pow(self.depth() as u32)) as i64)
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        let a = self.adj_start[v as usize] as usize;
        let b = self.adj_start[v as usize + 1] as usize;
        &self.adj[a..b]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    /// Height numerator of `v` in units of `1/D`.
    pub fn height(&self, v: VertexId) -> u64 {
        self.heights[v as usize] as u64
    }

    pub fn height_rational(&self, v: VertexId) -> Rational {
        Rational::new(self.height(v) as i64, self.denom as i64)
    }

    /// Digit word of `v` (positions `1..=n` stored at indices `0..n`).
    pub fn digits_of(&self, v: VertexId) -> &[u8] {
        let n = self.depth();
        &self.digits[v as usize * n..(v as usize + 1) * n]
    }

    /// Digit at 1-based position `pos`; [`WILDCARD`] at a merged position.
    pub fn digit(&self, v: VertexId, pos: usize) -> u8 {
        self.digits_of(v)[pos - 1]
    }

    /// Merged digit position of `v`, if it sits at a wormhole height of level `<= n`.
    pub fn wildcard(&self, v: VertexId) -> Option<usize> {
        let w = self.wild[self.heights[v as usize] as usize];
        (w != 0).then_some(w as usize)
    }

    /// Wildcard position at height `h`, if any.
    pub fn wildcard_at(&self, h: u64) -> Option<usize> {
        let w = self.wild[h as usize];
        (w != 0).then_some(w as usize)
    }

    pub fn vertices_at(&self, h: u64) -> Range<VertexId> {
        self.offsets[h as usize]..self.offsets[h as usize + 1]
    }

    pub fn vertex(&self, v: VertexId) -> LVertex {
        LVertex { h: self.height(v), digits: self.digits_of(v).to_vec() }
    }

    /// Vertex id of `x`, or a lookup error when `x` is not a vertex of this graph.
    ///
    /// At a merged position any digit (or the wildcard) names the same point.
    pub fn lookup(&self, x: &LVertex) -> Result<VertexId> {
        let n = self.depth();
        let m = self.m() as u8;
        if x.h > self.denom {
            return Err(LaaksoError::Lookup(format!("height {} exceeds D = {}", x.h, self.denom)));
        }
        if x.digits.len() != n {
            return Err(LaaksoError::Lookup(format!(
                "digit word has length {}, expected {n}",
                x.digits.len()
            )));
        }
        let w = self.wild[x.h as usize] as usize;
        for (i, &d) in x.digits.iter().enumerate() {
            let pos = i + 1;
            if pos == w {
                if d > m {
                    return Err(LaaksoError::Lookup(format!("digit {d} invalid at position {pos}")));
                }
            } else if d == WILDCARD || d > m {
                return Err(LaaksoError::Lookup(format!("digit {d} invalid at position {pos}")));
            }
        }
        Ok(self.code_lookup(x.h as usize, &x.digits))
    }

    /// Base vertex: height 0 with every digit equal to 1.
    pub fn base_vertex(&self) -> VertexId {
        0
    }

    /// Digit word carried by the interior of an edge (its endpoint without a wildcard).
    pub fn edge_digits(&self, e: usize) -> &[u8] {
        let [a, b] = self.edges[e];
        if self.wildcard(a).is_none() {
            self.digits_of(a)
        } else {
            self.digits_of(b)
        }
    }

    /// Measure of a vertex for density experiments: half the weight of its incident edges.
    pub fn vertex_measure(&self, v: VertexId) -> Rational {
        self.edge_weight() * Rational::from_integer(self.degree(v) as i64) / Rational::from_integer(2)
    }

    pub fn units_to_rational(&self, units: u64) -> Rational {
        Rational::new(units as i64, self.denom as i64)
    }

    /// Breadth-first hop counts from `src`; each hop is `1/D`. Unreached entries are `u32::MAX`.
    pub fn bfs_from(&self, src: VertexId) -> Vec<u32> {
        self.bfs_multi(&[src])
    }

    pub fn bfs_multi(&self, sources: &[VertexId]) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        for &s in sources {
            if dist[s as usize] != 0 {
                dist[s as usize] = 0;
                queue.push_back(s);
            }
        }
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize] + 1;
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dv;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Shortest-path distance in units of `1/D`.
    pub fn dist_units(&self, a: VertexId, b: VertexId) -> u64 {
        if a == b {
            return 0;
        }
        let mut dist = vec![u32::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[a as usize] = 0;
        queue.push_back(a);
        while let Some(v) = queue.pop_front() {
            let dv = dist[v as usize] + 1;
            for &w in self.neighbors(v) {
                if dist[w as usize] == u32::MAX {
                    if w == b {
                        return dv as u64;
                    }
                    dist[w as usize] = dv;
                    queue.push_back(w);
                }
            }
        }
        unreachable!("Laakso graphs are connected")
    }

    /// Exact shortest-path distance between two named vertices.
    pub fn dist(&self, x: &LVertex, y: &LVertex) -> Result<Rational> {
        let a = self.lookup(x)?;
        let b = self.lookup(y)?;
        Ok(self.units_to_rational(self.dist_units(a, b)))
    }

    /// Digit levels where both words carry a digit and the digits differ.
    pub fn differing_levels(&self, a: VertexId, b: VertexId) -> Vec<usize> {
        differing_levels(self.digits_of(a), self.digits_of(b))
    }
}

pub(crate) fn differing_levels(x: &[u8], y: &[u8]) -> Vec<usize> {
    x.iter()
        .zip(y)
        .enumerate()
        .filter(|(_, (&a, &b))| a != WILDCARD && b != WILDCARD && a != b)
        .map(|(i, _)| i + 1)
        .collect()
}
