//! Exact lattice realizations of the synthetic benchmark geometries.

use crate::network::PointCloud;

fn grid(out: &mut Vec<(String, [f64; 2])>, prefix: &str, origin: [f64; 2], side: usize, step: f64) {
    for i in 0..side {
        for j in 0..side {
            let label = format!("{prefix}_{i}_{j}");
            let p = [origin[0] + i as f64 * step, origin[1] + j as f64 * step];
            out.push((label, p));
        }
    }
}

fn cloud(points: Vec<(String, [f64; 2])>) -> PointCloud {
    let (labels, coords): (Vec<_>, Vec<_>) = points.into_iter().unzip();
    let flat = coords.into_iter().flatten().collect();
    PointCloud::new(labels, 2, flat).expect("generator lattices have distinct points")
}

/// Two 11×11 unit grids whose centers are 22 apart. Indices `0..121` form
/// the left cloud and `121..242` the right one.
pub fn gen_two_clouds() -> PointCloud {
    let mut pts = Vec::with_capacity(242);
    grid(&mut pts, "L", [0.0, -5.0], 11, 1.0);
    grid(&mut pts, "R", [22.0, -5.0], 11, 1.0);
    cloud(pts)
}

/// Four 9×9 unit grids in a 2×2 block with gap 2, followed by a 9×9 grid of
/// spacing 2 centered 22 to the right of the block's center.
///
/// Indices `81k..81(k+1)` for `k < 4` are the left clouds; `324..405` is the
/// right cloud.
pub fn gen_multiple_resolutions() -> PointCloud {
    let mut pts = Vec::with_capacity(405);
    grid(&mut pts, "A", [0.0, 0.0], 9, 1.0);
    grid(&mut pts, "B", [10.0, 0.0], 9, 1.0);
    grid(&mut pts, "C", [0.0, 10.0], 9, 1.0);
    grid(&mut pts, "D", [10.0, 10.0], 9, 1.0);
    grid(&mut pts, "E", [23.0, 1.0], 9, 2.0);
    cloud(pts)
}

/// Two 9×9 unit grids joined by a straight 9-point bridge; every point has a
/// neighbour at distance exactly 1.
///
/// Indices `0..81` are the left grid, `81..90` the bridge, `90..171` the
/// right grid.
pub fn gen_dumbbell() -> PointCloud {
    let mut pts = Vec::with_capacity(171);
    grid(&mut pts, "L", [0.0, -4.0], 9, 1.0);
    for k in 0..9 {
        pts.push((format!("B_{k}"), [9.0 + k as f64, 0.0]));
    }
    grid(&mut pts, "R", [18.0, -4.0], 9, 1.0);
    cloud(pts)
}
