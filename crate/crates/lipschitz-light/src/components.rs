//! `r`-components of a vertex set.
//!
//! Two points are `r`-linked when some chain of points of the set joins them
//! with every hop at most `r`. Pairwise distances are taken in the whole
//! space, so chains may not leave the set but shortest paths may.

use laakso_core::VertexId;
use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use shortcut_metric::{EtaGraph, Metric};

use crate::error::{LightError, Result};

/// All pairwise distances inside a vertex set, in contracted units `1/(D L)`.
#[derive(Clone, Debug)]
pub struct DistanceTable {
    vertices: Vec<VertexId>,
    dist: Vec<u64>,
}

impl DistanceTable {
    pub fn new(eg: &EtaGraph, vertices: &[VertexId], metric: Metric) -> Self {
        let k = vertices.len();
        let rows: Vec<Vec<u64>> = vertices
            .par_iter()
            .map(|&v| {
                let d = eg.distances(metric, &[v], None);
                vertices.iter().map(|&w| d[w as usize]).collect()
            })
            .collect();
        let mut dist = Vec::with_capacity(k * k);
        for row in rows {
            dist.extend(row);
        }
        Self { vertices: vertices.to_vec(), dist }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.dist[i * self.len() + j]
    }

    pub fn diameter(&self) -> u64 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Components of the chain relation with hops at most `r`.
    pub fn components(&self, r: f64) -> Result<Components> {
        if !(r > 0.0) {
            return Err(LightError::Radius(format!("r = {r} must be positive")));
        }
        let k = self.len();
        let mut uf = UnionFind::<usize>::new(k);
        for i in 0..k {
            for j in i + 1..k {
                if self.get(i, j) as f64 <= r {
                    uf.union(i, j);
                }
            }
        }
        let labels = uf.into_labeling();
        let mut slot = vec![usize::MAX; k];
        let mut members: Vec<Vec<usize>> = Vec::new();
        for (i, &root) in labels.iter().enumerate() {
            if slot[root] == usize::MAX {
                slot[root] = members.len();
                members.push(Vec::new());
            }
            members[slot[root]].push(i);
        }
        let diameters = members
            .iter()
            .map(|m| m.iter().flat_map(|&a| m.iter().map(move |&b| (a, b))).map(|(a, b)| self.get(a, b)).max().unwrap_or(0))
            .collect();
        let groups = members.into_iter().map(|m| m.into_iter().map(|i| self.vertices[i]).collect()).collect();
        Ok(Components { r, groups, diameters })
    }
}

#[derive(Clone, Debug)]
pub struct Components {
    pub r: f64,
    /// Components ordered by the first position of a member in the input set.
    pub groups: Vec<Vec<VertexId>>,
    pub diameters: Vec<u64>,
}

impl Components {
    pub fn len(&self) -> usize {
        self.groups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn max_diameter(&self) -> u64 {
        self.diameters.iter().copied().max().unwrap_or(0)
    }
}

/// `r`-components of `vertices` in the chosen metric, `r` in contracted units.
pub fn r_components(eg: &EtaGraph, vertices: &[VertexId], r: f64, metric: Metric) -> Result<Components> {
    DistanceTable::new(eg, vertices, metric).components(r)
}
