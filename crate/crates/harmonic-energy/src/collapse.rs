//! Gate collapse sums `sum_{S in J, S in Q} (diam f(S))^s`.

use laakso_core::Cube;
use lipschitz_maps::PAMap;
use shortcut_metric::ShortcutFamily;

use crate::energy::check_cube;
use crate::error::Result;

#[derive(Clone, Debug, PartialEq)]
pub struct CollapseReport {
    /// Number of shortcut sets inside the cube.
    pub sets: usize,
    pub sum: f64,
    pub lip: f64,
    pub measure: f64,
    /// `sum / (LIP(f)^s mu(Q))`, zero for constant maps.
    pub ratio: f64,
}

pub fn collapse_sum(f: &PAMap, families: &[ShortcutFamily], cube: &Cube, s: f64) -> Result<CollapseReport> {
    let g = f.graph();
    check_cube(g, cube)?;
    let mut sets = 0;
    let mut sum = 0.0;
    for fam in families {
        for set in &fam.sets {
            if set.members.iter().all(|&v| g.cube_contains(cube, v)) {
                sets += 1;
                sum += f.diam_of(&set.members).powf(s);
            }
        }
    }
    let lip = f.lip();
    let m = g.cube_measure(cube);
    let measure = *m.numer() as f64 / *m.denom() as f64;
    let ratio = if lip > 0.0 { sum / (lip.powf(s) * measure) } else { 0.0 };
    Ok(CollapseReport { sets, sum, lip, measure, ratio })
}
