//! Random 1-Lipschitz scalar maps `x -> min_j (v_j + d(x, p_j))`, rescaled to `LIP = 1`.

use std::sync::Arc;

use laakso_core::{LaaksoGraph, VertexId};
use lipschitz_maps::PAMap;
use rand::Rng;

use crate::error::{EnergyError, Result};

pub fn mcshane_map<R: Rng + ?Sized>(g: &Arc<LaaksoGraph>, anchors: usize, rng: &mut R) -> Result<PAMap> {
    if anchors == 0 {
        return Err(EnergyError::Config("at least one anchor is needed".into()));
    }
    let d = g.denom() as f64;
    let nv = g.vertex_count() as VertexId;
    let mut values = vec![f64::INFINITY; g.vertex_count()];
    for _ in 0..anchors {
        let p = rng.gen_range(0..nv);
        let offset: f64 = rng.gen_range(0.0..0.5);
        for (v, &k) in g.bfs_from(p).iter().enumerate() {
            values[v] = values[v].min(offset + k as f64 / d);
        }
    }
    let f = PAMap::scalar(g.clone(), values)?;
    let lip = f.lip();
    Ok(if lip > 0.0 { f.scaled(1.0 / lip) } else { f })
}
