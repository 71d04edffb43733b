//! Restrictions `G_I` of a diamond graph to a set of digit positions.
//!
//! `pi_I(t, a)` keeps the digits `a(i)` with `i` in `I`. The restriction is
//! built twice: once as the image of `pi_I` with the image edges, and once
//! directly as the diamond over the merged counts `N_{I,j}`. The two are
//! compared through their sorted canonical labels.

use std::collections::BTreeSet;

use crate::error::{DiamondError, Result};
use crate::graph::{build_diamond, DVertex, DiamondGraph, Label};

/// Merged subdivision counts `N_{I,1}, .., N_{I,k+1}`.
///
/// `levels` must be strictly increasing inside `1..n`.
pub fn restricted_grid(grid: &[u32], levels: &[usize]) -> Result<Vec<u32>> {
    check_levels(levels, grid.len().saturating_sub(1))?;
    let mut cuts = vec![0];
    cuts.extend_from_slice(levels);
    cuts.push(grid.len());
    Ok(cuts.windows(2).map(|w| grid[w[0]..w[1]].iter().product()).collect())
}

fn check_levels(levels: &[usize], max: usize) -> Result<()> {
    if levels.is_empty() {
        return Err(DiamondError::LevelSet("empty level set".into()));
    }
    if levels.windows(2).any(|w| w[0] >= w[1]) {
        return Err(DiamondError::LevelSet(format!("{levels:?} is not strictly increasing")));
    }
    if levels[0] == 0 || *levels.last().unwrap() > max {
        return Err(DiamondError::LevelSet(format!("{levels:?} is not inside 1..={max}")));
    }
    Ok(())
}

/// `pi_I` on a label.
pub fn project_label(label: &Label, levels: &[usize]) -> Label {
    let (t, word) = label;
    (*t, levels.iter().filter(|&&i| i <= word.len()).map(|&i| word[i - 1]).collect())
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub levels: Vec<usize>,
    /// The diamond over `N_I`.
    pub graph: DiamondGraph,
    /// `projection[v]` is `pi_I(v)` as a vertex of [`Restriction::graph`].
    pub projection: Vec<DVertex>,
}

/// Builds `G_I` both ways and fails with [`DiamondError::Mismatch`] if they differ.
pub fn restrict(d: &DiamondGraph, levels: &[usize]) -> Result<Restriction> {
    let grid = restricted_grid(d.grid(), levels)?;
    let direct = build_diamond(d.m(), &grid)?;
    let images: Vec<Label> = (0..d.vertex_count() as DVertex).map(|v| project_label(&d.label(v), levels)).collect();
    let image_vertices: BTreeSet<&Label> = images.iter().collect();
    let image_edges: BTreeSet<(&Label, &Label)> =
        d.edges().iter().map(|&[a, b]| (&images[a as usize], &images[b as usize])).collect();
    let direct_vertices = direct.labels();
    if image_vertices.len() != direct_vertices.len() || !image_vertices.iter().zip(&direct_vertices).all(|(a, b)| *a == b) {
        return Err(DiamondError::Mismatch(format!(
            "image has {} vertices, direct diamond over {grid:?} has {}",
            image_vertices.len(),
            direct_vertices.len()
        )));
    }
    let direct_edges = direct.edge_labels();
    if image_edges.len() != direct_edges.len()
        || !image_edges.iter().zip(&direct_edges).all(|((a, b), (c, e))| *a == c && *b == e)
    {
        return Err(DiamondError::Mismatch(format!(
            "image has {} edges, direct diamond over {grid:?} has {}",
            image_edges.len(),
            direct_edges.len()
        )));
    }
    let projection = images
        .iter()
        .map(|(t, w)| direct.lookup(*t, w).ok_or_else(|| DiamondError::Mismatch(format!("no vertex ({t}, {w:?})"))))
        .collect::<Result<Vec<_>>>()?;
    Ok(Restriction { levels: levels.to_vec(), graph: direct, projection })
}

impl Restriction {
    /// Whether every edge of `source` maps to an edge of the restriction.
    pub fn is_homomorphism(&self, source: &DiamondGraph) -> bool {
        source.edges().iter().all(|&[a, b]| {
            let (x, y) = (self.projection[a as usize], self.projection[b as usize]);
            self.graph.is_edge(x, y)
        })
    }
}
