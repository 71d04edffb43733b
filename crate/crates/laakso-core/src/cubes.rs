//! Cubical covers `Q_{I,a}`: a level-`i` interval times a digit prefix of length `i`.
//!
//! Level `n+1` is also accepted. Its intervals are single edges and, since the
//! graph carries only `n` digits, its prefixes have length `n`.

use crate::error::{LaaksoError, Result};
use crate::graph::{LaaksoGraph, VertexId, WILDCARD};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cube {
    pub level: usize,
    /// `m` such that the interval is `[m delta_i, (m+1) delta_i]`.
    pub interval: u64,
    /// Digit prefix, values in `1..=M`.
    pub prefix: Vec<u8>,
}

impl LaaksoGraph {
    fn check_cube_level(&self, i: usize) -> Result<()> {
        if i > self.depth() + 1 {
            return Err(LaaksoError::Level { level: i, min: 0, max: self.depth() + 1 });
        }
        Ok(())
    }

    pub fn prefix_len(&self, level: usize) -> usize {
        level.min(self.depth())
    }

    /// Number of cubes at a level: `(1/delta_i) * M^i`.
    pub fn cube_count(&self, level: usize) -> usize {
        let p = self.params().prefix_product(level) as usize;
        p * (self.m() as usize).pow(self.prefix_len(level) as u32)
    }

    /// All cubes of a level, ordered by interval and then by prefix.
    pub fn cubes(&self, level: usize) -> Result<Vec<Cube>> {
        self.check_cube_level(level)?;
        let k = self.prefix_len(level);
        let m = self.m() as usize;
        let per = m.pow(k as u32);
        let p = self.params().prefix_product(level);
        let mut out = Vec::with_capacity(self.cube_count(level));
        for interval in 0..p {
            for code in 0..per {
                let mut prefix = vec![0u8; k];
                let mut rest = code;
                for pos in (0..k).rev() {
                    prefix[pos] = (rest % m) as u8 + 1;
                    rest /= m;
                }
                out.push(Cube { level, interval, prefix });
            }
        }
        Ok(out)
    }

    /// Position of `q` in [`LaaksoGraph::cubes`] for its level.
    pub fn cube_index(&self, q: &Cube) -> usize {
        let m = self.m() as usize;
        let mut code = 0usize;
        for &d in &q.prefix {
            code = code * m + (d as usize - 1);
        }
        q.interval as usize * m.pow(q.prefix.len() as u32) + code
    }

    /// Canonical measure `delta_i * M^-i`.
    pub fn cube_measure(&self, q: &Cube) -> Rational {
        let denom = self.params().prefix_product(q.level) * (self.m() as u64).pow(q.prefix.len() as u32);
        Rational::new(1, denom as i64)
    }

    /// Height range of the cube's interval in units of `1/D`.
    pub fn cube_heights(&self, q: &Cube) -> (u64, u64) {
        let u = self.params().scale_units(q.level);
        (q.interval * u, (q.interval + 1) * u)
    }

    fn matches_prefix(&self, v: VertexId, prefix: &[u8]) -> bool {
        let word = self.digits_of(v);
        prefix.iter().zip(word).all(|(&p, &d)| d == WILDCARD || d == p)
    }

    /// Whether the closed cube contains `v`.
    pub fn cube_contains(&self, q: &Cube, v: VertexId) -> bool {
        let (lo, hi) = self.cube_heights(q);
        let h = self.height(v);
        lo <= h && h <= hi && self.matches_prefix(v, &q.prefix)
    }

    /// Vertices of the closed cube. Vertices on a shared face appear in every cube containing them.
    pub fn vertices_in(&self, q: &Cube) -> Vec<VertexId> {
        let (lo, hi) = self.cube_heights(q);
        let mut out = Vec::new();
        for h in lo..=hi {
            out.extend(self.vertices_at(h).filter(|&v| self.matches_prefix(v, &q.prefix)));
        }
        out
    }

    /// Vertices on the topological boundary: the interval endpoints that lie strictly inside `(0, 1)`.
    pub fn boundary_vertices(&self, q: &Cube) -> Vec<VertexId> {
        let (lo, hi) = self.cube_heights(q);
        let mut out = Vec::new();
        for h in [lo, hi] {
            if h > 0 && h < self.denom() {
                out.extend(self.vertices_at(h).filter(|&v| self.matches_prefix(v, &q.prefix)));
            }
        }
        out
    }

    pub fn is_boundary_height(&self, q: &Cube, h: u64) -> bool {
        let (lo, hi) = self.cube_heights(q);
        (h == lo || h == hi) && h > 0 && h < self.denom()
    }

    /// Index of the level-`level` cube whose interior contains edge `e`.
    pub fn edge_cube_index(&self, e: usize, level: usize) -> usize {
        let m = self.m() as usize;
        let k = self.prefix_len(level);
        let lower = self.height(self.edges()[e][0]);
        let interval = lower / self.params().scale_units(level);
        let mut code = 0usize;
        for &d in &self.edge_digits(e)[..k] {
            code = code * m + (d as usize - 1);
        }
        interval as usize * m.pow(k as u32) + code
    }

    /// Edge ids grouped by the level-`level` cube containing them.
    pub fn edges_by_cube(&self, level: usize) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.cube_count(level)];
        for e in 0..self.edge_count() {
            out[self.edge_cube_index(e, level)].push(e);
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use crate::{build_graph, LaaksoParams, Rational};

    #[test]
    fn level_one_cubes_small() {
        let g = build_graph(&LaaksoParams::new(2, vec![4, 4]).unwrap()).unwrap();
        let cubes = g.cubes(1).unwrap();
        assert_eq!(cubes.len(), 8);
        let total: Rational = cubes.iter().map(|q| g.cube_measure(q)).sum();
        assert_eq!(total, Rational::from_integer(1));
        for q in &cubes {
            assert_eq!(g.cube_measure(q), Rational::new(1, 8));
            assert_eq!(g.cube_index(q), cubes.iter().position(|c| c == q).unwrap());
        }
        let x = g.cubes(0).unwrap();
        assert_eq!(x.len(), 1);
        assert_eq!(g.vertices_in(&x[0]).len(), g.vertex_count());
        assert!(g.boundary_vertices(&x[0]).is_empty());
        assert!(g.cubes(3).is_err());
    }

    #[test]
    fn edge_cells_are_single_edges() {
        let g = build_graph(&LaaksoParams::new(2, vec![4, 4]).unwrap()).unwrap();
        let groups = g.edges_by_cube(2);
        assert_eq!(groups.len(), 32);
        assert!(groups.iter().all(|e| e.len() == 1));
    }
}
