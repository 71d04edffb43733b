//! The diamond graph `G(M; N_1, .., N_n)`.
//!
//! Heights are integers `m` in `0..=P` with `P = N_1 * .. * N_n`, standing for
//! `m / P`. A height of level `j` (the least `j` with `m / P` in `W_{<=j}`,
//! counting `0` and `1` as level 1) carries the fiber `[M]^{j-1}`. Two
//! vertices are adjacent when their heights differ by one and one word is a
//! prefix of the other.

use std::collections::VecDeque;
use std::io::{self, Write};

use laakso_core::heights;

use crate::error::{DiamondError, Result};

pub type DVertex = u32;

/// Largest vertex count accepted by [`build_diamond`].
pub const DIAMOND_VERTEX_CAP: usize = 5_000_000;

#[derive(Clone, Debug)]
pub struct DiamondGraph {
    m: u32,
    grid: Vec<u32>,
    denom: u64,
    levels: Vec<u8>,
    offsets: Vec<u32>,
    words: Vec<Vec<u8>>,
    heights: Vec<u32>,
    adj: Vec<Vec<DVertex>>,
    edges: Vec<[DVertex; 2]>,
}

/// Canonical label of a vertex: height numerator and digit word.
pub type Label = (u64, Vec<u8>);

fn check_params(m: u32, grid: &[u32]) -> Result<()> {
    if m < 2 {
        return Err(DiamondError::Param(format!("branching M = {m} must be at least 2")));
    }
    if grid.is_empty() {
        return Err(DiamondError::Param("empty subdivision sequence".into()));
    }
    if let Some(&n) = grid.iter().find(|&&n| n < 4 || n % 2 == 1) {
        return Err(DiamondError::Param(format!("N_i = {n} must be even and at least 4")));
    }
    Ok(())
}

/// Level of each height numerator.
pub fn height_levels(grid: &[u32]) -> Vec<u8> {
    let p = heights::prefix_products(grid);
    let total = p[grid.len()];
    (0..=total)
        .map(|h| {
            if h == 0 || h == total {
                1
            } else {
                (1..=grid.len()).find(|&j| h % (total / p[j]) == 0).expect("the finest level divides everything") as u8
            }
        })
        .collect()
}

fn word_of(code: usize, len: usize, m: usize) -> Vec<u8> {
    let mut w = vec![0u8; len];
    let mut rest = code;
    for pos in (0..len).rev() {
        w[pos] = (rest % m) as u8 + 1;
        rest /= m;
    }
    w
}

fn code_of(word: &[u8], m: usize) -> usize {
    word.iter().fold(0, |acc, &d| acc * m + (d as usize - 1))
}

pub fn build_diamond(m: u32, grid: &[u32]) -> Result<DiamondGraph> {
    check_params(m, grid)?;
    let levels = height_levels(grid);
    let mu = m as usize;
    let mut offsets = Vec::with_capacity(levels.len() + 1);
    let mut total = 0usize;
    for &l in &levels {
        offsets.push(total as u32);
        total += mu.pow(l as u32 - 1);
        if total > DIAMOND_VERTEX_CAP {
            return Err(DiamondError::Param(format!("more than {DIAMOND_VERTEX_CAP} vertices")));
        }
    }
    offsets.push(total as u32);
    let mut words = Vec::with_capacity(total);
    let mut hs = Vec::with_capacity(total);
    for (h, &l) in levels.iter().enumerate() {
        let len = l as usize - 1;
        for code in 0..mu.pow(len as u32) {
            words.push(word_of(code, len, mu));
            hs.push(h as u32);
        }
    }
    let mut adj = vec![Vec::new(); total];
    let mut edges = Vec::new();
    for h in 0..levels.len() - 1 {
        let (la, lb) = (levels[h] as usize - 1, levels[h + 1] as usize - 1);
        let (short, long, h_short, h_long) = if la <= lb { (la, lb, h, h + 1) } else { (lb, la, h + 1, h) };
        for code in 0..mu.pow(long as u32) {
            let w = word_of(code, long, mu);
            let a = offsets[h_long] + code as u32;
            let b = offsets[h_short] + code_of(&w[..short], mu) as u32;
            let (lo, hi) = if h_long < h_short { (a, b) } else { (b, a) };
            edges.push([lo, hi]);
            adj[lo as usize].push(hi);
            adj[hi as usize].push(lo);
        }
    }
    let denom = *heights::prefix_products(grid).last().unwrap();
    Ok(DiamondGraph { m, grid: grid.to_vec(), denom, levels, offsets, words, heights: hs, adj, edges })
}

impl DiamondGraph {
    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn grid(&self) -> &[u32] {
        &self.grid
    }

    pub fn depth(&self) -> usize {
        self.grid.len()
    }

    /// `P = N_1 * .. * N_n`; every edge has length `1/P`.
    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn vertex_count(&self) -> usize {
        self.words.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges with the lower height first.
    pub fn edges(&self) -> &[[DVertex; 2]] {
        &self.edges
    }

    pub fn neighbors(&self, v: DVertex) -> &[DVertex] {
        &self.adj[v as usize]
    }

    pub fn height(&self, v: DVertex) -> u64 {
        self.heights[v as usize] as u64
    }

    pub fn word(&self, v: DVertex) -> &[u8] {
        &self.words[v as usize]
    }

    /// Level `j` of a height numerator; its fiber is `[M]^{j-1}`.
    pub fn level_of(&self, h: u64) -> usize {
        self.levels[h as usize] as usize
    }

    pub fn fiber_len(&self, h: u64) -> usize {
        self.level_of(h) - 1
    }

    pub fn vertices_at(&self, h: u64) -> std::ops::Range<DVertex> {
        self.offsets[h as usize]..self.offsets[h as usize + 1]
    }

    pub fn lookup(&self, h: u64, word: &[u8]) -> Option<DVertex> {
        if h > self.denom || word.len() != self.fiber_len(h) || word.iter().any(|&d| d == 0 || d as u32 > self.m) {
            return None;
        }
        Some(self.offsets[h as usize] + code_of(word, self.m as usize) as u32)
    }

    pub fn label(&self, v: DVertex) -> Label {
        (self.height(v), self.word(v).to_vec())
    }

    /// Sorted vertex labels.
    pub fn labels(&self) -> Vec<Label> {
        let mut out: Vec<Label> = (0..self.vertex_count() as DVertex).map(|v| self.label(v)).collect();
        out.sort();
        out
    }

    /// Sorted edge labels, lower endpoint first.
    pub fn edge_labels(&self) -> Vec<(Label, Label)> {
        let mut out: Vec<_> = self.edges.iter().map(|&[a, b]| (self.label(a), self.label(b))).collect();
        out.sort();
        out
    }

    pub fn is_edge(&self, a: DVertex, b: DVertex) -> bool {
        self.adj[a as usize].contains(&b)
    }

    /// Hop counts from `src`; one hop is `1/P`.
    pub fn bfs_from(&self, src: DVertex) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.vertex_count()];
        dist[src as usize] = 0;
        let mut q = VecDeque::from([src]);
        while let Some(v) = q.pop_front() {
            for &w in &self.adj[v as usize] {
                if dist[w as usize] == u32::MAX {
                    dist[w as usize] = dist[v as usize] + 1;
                    q.push_back(w);
                }
            }
        }
        dist
    }

    pub fn dist_units(&self, a: DVertex, b: DVertex) -> u64 {
        self.bfs_from(a)[b as usize] as u64
    }

    pub fn is_connected(&self) -> bool {
        self.bfs_from(0).iter().all(|&d| d != u32::MAX)
    }

    /// Writes `source,target,source_height,source_word,target_height,target_word` rows.
    pub fn write_edge_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "source,target,source_height,source_word,target_height,target_word")?;
        let word = |v: DVertex| self.word(v).iter().map(|d| d.to_string()).collect::<String>();
        for &[a, b] in &self.edges {
            writeln!(out, "{a},{b},{}/{},{},{}/{},{}", self.height(a), self.denom, word(a), self.height(b), self.denom, word(b))?;
        }
        Ok(())
    }
}
