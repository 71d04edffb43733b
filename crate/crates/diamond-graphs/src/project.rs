//! Projection of a Laakso graph `G_n` onto the restricted diamond `G_{n,I}`.
//!
//! A Laakso vertex at a height of level `j` keeps its first `j - 1` digits,
//! which names a vertex of the diamond over the same grid `N_1, .., N_{n+1}`.
//! Composing with `pi_I` lands in the diamond over `N_I`.

use laakso_core::{LaaksoGraph, VertexId};
use shortcut_metric::ShortcutFamily;

use crate::error::{DiamondError, Result};
use crate::graph::{build_diamond, DVertex, DiamondGraph};
use crate::restrict::restrict;

#[derive(Clone, Debug)]
pub struct LaaksoProjection {
    pub levels: Vec<usize>,
    /// The diamond over `N_I`.
    pub diamond: DiamondGraph,
    /// Image of every Laakso vertex.
    pub map: Vec<DVertex>,
}

/// One member pair of a shortcut set, with its distance before and after projecting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairImage {
    pub level: usize,
    pub height: u64,
    pub u: VertexId,
    pub v: VertexId,
    pub in_levels: bool,
    pub laakso_units: u64,
    pub image_units: u64,
}

impl PairImage {
    /// Whether the image distance is `d(u, v)` for levels in `I` and `0` otherwise.
    pub fn matches(&self) -> bool {
        self.image_units == if self.in_levels { self.laakso_units } else { 0 }
    }
}

pub fn project_laakso(g: &LaaksoGraph, levels: &[usize]) -> Result<LaaksoProjection> {
    let full = build_diamond(g.m(), g.params().grid())?;
    let r = restrict(&full, levels)?;
    if full.denom() != g.denom() {
        return Err(DiamondError::Mismatch(format!("diamond unit 1/{} against Laakso unit 1/{}", full.denom(), g.denom())));
    }
    let map = (0..g.vertex_count() as VertexId)
        .map(|v| {
            let h = g.height(v);
            let word = &g.digits_of(v)[..full.fiber_len(h)];
            full.lookup(h, word)
                .map(|x| r.projection[x as usize])
                .ok_or_else(|| DiamondError::Mismatch(format!("Laakso vertex {v} has no diamond image")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LaaksoProjection { levels: levels.to_vec(), diamond: r.graph, map })
}

impl LaaksoProjection {
    pub fn image(&self, v: VertexId) -> DVertex {
        self.map[v as usize]
    }

    /// Whether every Laakso edge maps to a diamond edge or collapses to a vertex.
    pub fn is_one_lipschitz(&self, g: &LaaksoGraph) -> bool {
        g.edges().iter().all(|&[a, b]| {
            let (x, y) = (self.image(a), self.image(b));
            x == y || self.diamond.is_edge(x, y)
        })
    }

    /// Distances of every member pair of every shortcut set, before and after projecting.
    pub fn pair_images(&self, g: &LaaksoGraph, families: &[ShortcutFamily]) -> Vec<PairImage> {
        let mut out = Vec::new();
        for fam in families {
            let in_levels = self.levels.contains(&fam.level);
            for s in &fam.sets {
                for (k, &u) in s.members.iter().enumerate() {
                    let base = g.bfs_from(u);
                    let image = self.diamond.bfs_from(self.image(u));
                    for &v in &s.members[k + 1..] {
                        out.push(PairImage {
                            level: fam.level,
                            height: s.height,
                            u,
                            v,
                            in_levels,
                            laakso_units: base[v as usize] as u64,
                            image_units: image[self.image(v) as usize] as u64,
                        });
                    }
                }
            }
        }
        out
    }
}
