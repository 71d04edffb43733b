//! Maps determined by vertex values and extended affinely along edges.

use std::io::{self, Write};
use std::sync::Arc;

use laakso_core::{LaaksoGraph, VertexId};
use shortcut_metric::EtaGraph;

use crate::error::{MapError, Result};

/// Norm on the target `R^k`.
#[derive(Clone, Debug, PartialEq)]
pub enum Norm {
    Euclidean,
    /// `sum_m ||v_{B_m}||_q` over disjoint coordinate blocks `B_m` covering `0..k`.
    BlockLq { q: f64, blocks: Vec<Vec<usize>> },
}

fn lq(v: impl Iterator<Item = f64>, q: f64) -> f64 {
    if q.is_infinite() {
        return v.fold(0.0, |m, x| m.max(x.abs()));
    }
    let s: f64 = v.map(|x| x.abs().powf(q)).sum();
    s.powf(1.0 / q)
}

impl Norm {
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            Norm::Euclidean => v.iter().map(|x| x * x).sum::<f64>().sqrt(),
            Norm::BlockLq { q, blocks } => blocks.iter().map(|b| lq(b.iter().map(|&k| v[k]), *q)).sum(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PAMap {
    graph: Arc<LaaksoGraph>,
    dim: usize,
    values: Vec<f64>,
    norm: Norm,
}

impl PAMap {
    pub fn new(graph: Arc<LaaksoGraph>, dim: usize, values: Vec<f64>, norm: Norm) -> Result<Self> {
        if dim == 0 {
            return Err(MapError::Invalid("target dimension must be positive".into()));
        }
        if values.len() != dim * graph.vertex_count() {
            return Err(MapError::Invalid(format!(
                "expected {} values, got {}",
                dim * graph.vertex_count(),
                values.len()
            )));
        }
        if values.iter().any(|x| !x.is_finite()) {
            return Err(MapError::Invalid("non-finite vertex value".into()));
        }
        if let Norm::BlockLq { q, blocks } = &norm {
            if !(*q >= 1.0) {
                return Err(MapError::Invalid(format!("block norm exponent {q} below 1")));
            }
            let mut seen = vec![false; dim];
            for &k in blocks.iter().flatten() {
                if k >= dim || seen[k] {
                    return Err(MapError::Invalid("coordinate blocks must partition the target".into()));
                }
                seen[k] = true;
            }
            if seen.iter().any(|s| !s) {
                return Err(MapError::Invalid("coordinate blocks must partition the target".into()));
            }
        }
        Ok(Self { graph, dim, values, norm })
    }

    pub fn zeros(graph: Arc<LaaksoGraph>, dim: usize) -> Self {
        let values = vec![0.0; dim * graph.vertex_count()];
        Self { graph, dim, values, norm: Norm::Euclidean }
    }

    pub fn scalar(graph: Arc<LaaksoGraph>, values: Vec<f64>) -> Result<Self> {
        Self::new(graph, 1, values, Norm::Euclidean)
    }

    /// The height map `h`.
    pub fn height(graph: Arc<LaaksoGraph>) -> Self {
        let d = graph.denom() as f64;
        let values = (0..graph.vertex_count() as u32).map(|v| graph.height(v) as f64 / d).collect();
        Self { graph, dim: 1, values, norm: Norm::Euclidean }
    }

    pub fn graph(&self) -> &Arc<LaaksoGraph> {
        &self.graph
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn norm(&self) -> &Norm {
        &self.norm
    }

    pub fn with_norm(mut self, norm: Norm) -> Result<Self> {
        let values = std::mem::take(&mut self.values);
        Self::new(self.graph, self.dim, values, norm)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn value(&self, v: VertexId) -> &[f64] {
        let k = v as usize * self.dim;
        &self.values[k..k + self.dim]
    }

    pub fn value_mut(&mut self, v: VertexId) -> &mut [f64] {
        let k = v as usize * self.dim;
        &mut self.values[k..k + self.dim]
    }

    /// Scalar value of a one-dimensional map.
    pub fn scalar_at(&self, v: VertexId) -> f64 {
        self.values[v as usize * self.dim]
    }

    /// `||f(a) - f(b)||` in the map's norm.
    pub fn diff_norm(&self, a: VertexId, b: VertexId) -> f64 {
        let d: Vec<f64> = self.value(a).iter().zip(self.value(b)).map(|(x, y)| x - y).collect();
        self.norm.eval(&d)
    }

    /// Largest distance between images of the given vertices.
    pub fn diam_of(&self, vs: &[VertexId]) -> f64 {
        let mut m: f64 = 0.0;
        for (k, &a) in vs.iter().enumerate() {
            for &b in &vs[k + 1..] {
                m = m.max(self.diff_norm(a, b));
            }
        }
        m
    }

    /// Pointwise sum. Both maps need the same graph, dimension and norm.
    pub fn add(&self, other: &PAMap) -> Result<PAMap> {
        if !Arc::ptr_eq(&self.graph, &other.graph) || self.dim != other.dim || self.norm != other.norm {
            return Err(MapError::Invalid("maps live on different graphs or targets".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(PAMap { graph: self.graph.clone(), dim: self.dim, values, norm: self.norm.clone() })
    }

    pub fn sub(&self, other: &PAMap) -> Result<PAMap> {
        let neg = other.scaled(-1.0);
        self.add(&neg)
    }

    pub fn scaled(&self, c: f64) -> PAMap {
        let values = self.values.iter().map(|x| c * x).collect();
        PAMap { graph: self.graph.clone(), dim: self.dim, values, norm: self.norm.clone() }
    }

    /// Coordinate `k` as a scalar map.
    pub fn coordinate(&self, k: usize) -> PAMap {
        let values = self.values.chunks(self.dim).map(|c| c[k]).collect();
        PAMap { graph: self.graph.clone(), dim: 1, values, norm: Norm::Euclidean }
    }

    /// Slope `||Delta f|| / l` along edge `e`.
    pub fn edge_slope(&self, e: usize) -> f64 {
        let [a, b] = self.graph.edges()[e];
        self.diff_norm(a, b) * self.graph.denom() as f64
    }

    /// `LIP(f)`: the largest edge slope.
    pub fn lip(&self) -> f64 {
        (0..self.graph.edge_count()).map(|e| self.edge_slope(e)).fold(0.0, f64::max)
    }

    /// Lipschitz constant for `d_eta`: largest slope over base edges and chords.
    pub fn lip_eta(&self, eg: &EtaGraph) -> f64 {
        let mut best = self.lip();
        for (id, s) in eg.sets().iter().enumerate() {
            let w = eg.chord_weight(id);
            let w = *w.numer() as f64 / *w.denom() as f64;
            best = best.max(self.diam_of(&s.members) / w);
        }
        best
    }

    /// Writes `vertex,height,digits,v0..` rows; digits use `*` for the wildcard.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        write!(out, "vertex,height,digits")?;
        for k in 0..self.dim {
            write!(out, ",v{k}")?;
        }
        writeln!(out)?;
        for v in 0..self.graph.vertex_count() as u32 {
            let digits: String = self
                .graph
                .digits_of(v)
                .iter()
                .map(|&d| if d == laakso_core::WILDCARD { '*' } else { char::from(b'0' + d) })
                .collect();
            write!(out, "{v},{},{digits}", self.graph.height_rational(v))?;
            for x in self.value(v) {
                write!(out, ",{x:?}")?;
            }
            writeln!(out)?;
        }
        Ok(())
    }
}
