//! Exact planar polygons: near-regular ones on the unit circle, affinely
//! regular rational ones, and points on a parabola.

use std::sync::OnceLock;

use crate::exactgeom::{int, rat, Rat};

/// Radius of the lattice circle; `5 * 13 * 17 * 29 * 37`, a product of
/// primes 1 mod 4, so the circle carries 4 * 3^5 = 972 lattice points.
pub const CIRCLE_RADIUS: i64 = 1_185_665;

fn circle_points() -> &'static [(i64, i64)] {
    static POINTS: OnceLock<Vec<(i64, i64)>> = OnceLock::new();
    POINTS.get_or_init(|| {
        let r = CIRCLE_RADIUS;
        let mut pts = Vec::new();
        for x in -r..=r {
            let y2 = r * r - x * x;
            let y = (y2 as f64).sqrt().round() as i64;
            for y in [y - 1, y, y + 1] {
                if y >= 0 && y * y == y2 {
                    pts.push((x, y));
                    if y > 0 {
                        pts.push((x, -y));
                    }
                }
            }
        }
        pts.sort_unstable();
        pts.dedup();
        pts
    })
}

/// The lattice point of the circle closest in angle to `theta`.
pub fn circle_point_near(theta: f64) -> (i64, i64) {
    let dist = |&(x, y): &(i64, i64)| {
        let a = (y as f64).atan2(x as f64) - theta;
        a.sin().abs() + (1.0 - a.cos())
    };
    *circle_points()
        .iter()
        .min_by(|a, b| dist(a).total_cmp(&dist(b)))
        .unwrap()
}

/// Rational point `(x / R, y / R)` of the unit circle.
pub fn on_unit_circle(p: (i64, i64)) -> [Rat; 2] {
    [rat(p.0, CIRCLE_RADIUS), rat(p.1, CIRCLE_RADIUS)]
}

/// Vertices at angles `offset + 2 pi k / m`, rounded to the lattice circle,
/// counter-clockwise.
pub fn near_regular(m: usize, offset: f64) -> Vec<[Rat; 2]> {
    near_regular_lattice(m, offset)
        .into_iter()
        .map(on_unit_circle)
        .collect()
}

pub fn near_regular_lattice(m: usize, offset: f64) -> Vec<(i64, i64)> {
    (0..m)
        .map(|k| circle_point_near(offset + std::f64::consts::TAU * k as f64 / m as f64))
        .collect()
}

/// Rational affine images of the regular triangle, square and hexagon.
pub fn affinely_regular(m: usize) -> Option<Vec<[Rat; 2]>> {
    let pts: &[(i64, i64)] = match m {
        3 => &[(0, 0), (1, 0), (0, 1)],
        4 => &[(0, 0), (1, 0), (1, 1), (0, 1)],
        6 => &[(1, 0), (1, 1), (0, 1), (-1, 0), (-1, -1), (0, -1)],
        _ => return None,
    };
    Some(pts.iter().map(|&(x, y)| [int(x), int(y)]).collect())
}

/// `(i, i^2)` for `i = 0..m`, in convex position and counter-clockwise.
pub fn parabola(m: usize) -> Vec<[Rat; 2]> {
    (0..m as i64).map(|i| [int(i), int(i * i)]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn circle_has_expected_lattice_points() {
        assert_eq!(circle_points().len(), 972);
        let r = CIRCLE_RADIUS;
        assert!(circle_points().iter().all(|&(x, y)| x * x + y * y == r * r));
    }

    #[test]
    fn near_regular_is_distinct_and_ccw() {
        for m in 3..=14 {
            let p = near_regular_lattice(m, 0.1);
            for k in 0..m {
                let (a, b, c) = (p[k], p[(k + 1) % m], p[(k + 2) % m]);
                let cross = (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0);
                assert!(cross > 0, "m = {m}");
            }
        }
    }
}
