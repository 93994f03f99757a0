//! Test support: a brute-force pair oracle over exact rationals, the corpus
//! of small three-dimensional configurations, and the acceptance suite.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};

use dissect_core::families::{self, Coords, FamilyKind, FamilySpec};
use dissect_core::simplexrel::PairRelation;
use dissect_core::{PointConfiguration, Rat};

/// Solves `m x = rhs` by Gauss-Jordan elimination; `None` if singular.
fn solve(mut m: Vec<Vec<Rat>>, mut rhs: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = m.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = &m[r][col] / &m[col][col];
                for c in col..n {
                    let v = &f * &m[col][c];
                    m[r][c] -= v;
                }
                let v = &f * &rhs[col];
                rhs[r] -= v;
            }
        }
    }
    Some((0..n).map(|i| &rhs[i] / &m[i][i]).collect())
}

fn rank(mut rows: Vec<Vec<Rat>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            let f = &rows[i][c] / &rows[r][c];
            for j in c..cols {
                let v = &f * &rows[r][j];
                rows[i][j] -= v;
            }
        }
        r += 1;
    }
    r
}

/// Barycentric functionals `(c, w)` with `lambda_i(x) = c + w . x`.
fn barycentric(pts: &[Vec<Rat>]) -> Vec<(Rat, Vec<Rat>)> {
    let d = pts[0].len();
    (0..=d)
        .map(|i| {
            // row i of the inverse of [1 ...; p_0 ... p_d] as columns
            let m: Vec<Vec<Rat>> = (0..=d)
                .map(|j| {
                    let mut row = vec![Rat::one()];
                    row.extend(pts[j].iter().cloned());
                    row
                })
                .collect();
            let e: Vec<Rat> = (0..=d).map(|j| if j == i { Rat::one() } else { Rat::zero() }).collect();
            let r = solve(m, e).expect("full-dimensional simplex");
            (r[0].clone(), r[1..].to_vec())
        })
        .collect()
}

/// Classifies a pair by enumerating the vertices of `conv(a) & conv(b)` and
/// testing whether that polytope is full-dimensional or the common face.
pub fn oracle_relation(config: &PointConfiguration, a: &[usize], b: &[usize]) -> PairRelation {
    let d = config.dim();
    let coords = |s: &[usize]| s.iter().map(|&l| config.point(l).0.clone()).collect::<Vec<_>>();
    let mut ineqs = barycentric(&coords(a));
    ineqs.extend(barycentric(&coords(b)));
    let feasible = |x: &[Rat]| {
        ineqs.iter().all(|(c, w)| {
            let v = w.iter().zip(x).fold(c.clone(), |acc, (wi, xi)| acc + wi * xi);
            !v.is_negative()
        })
    };
    let mut vertices: Vec<Vec<Rat>> = Vec::new();
    let mut idx: Vec<usize> = (0..d).collect();
    loop {
        let m: Vec<Vec<Rat>> = idx.iter().map(|&i| ineqs[i].1.clone()).collect();
        let rhs: Vec<Rat> = idx.iter().map(|&i| -ineqs[i].0.clone()).collect();
        if let Some(x) = solve(m, rhs) {
            if feasible(&x) && !vertices.contains(&x) {
                vertices.push(x);
            }
        }
        let Some(k) = (0..d).rev().find(|&k| idx[k] < ineqs.len() - d + k) else {
            break;
        };
        idx[k] += 1;
        for j in k + 1..d {
            idx[j] = idx[j - 1] + 1;
        }
    }
    if vertices.is_empty() {
        return PairRelation::Disjoint;
    }
    let homog: Vec<Vec<Rat>> = vertices
        .iter()
        .map(|v| std::iter::once(Rat::one()).chain(v.iter().cloned()).collect())
        .collect();
    if rank(homog) == d + 1 {
        return PairRelation::InteriorOverlap;
    }
    let shared: Vec<Vec<Rat>> = a
        .iter()
        .filter(|l| b.contains(l))
        .map(|&l| config.point(l).0.clone())
        .collect();
    if vertices.iter().all(|v| shared.contains(v)) {
        PairRelation::CommonFace
    } else {
        PairRelation::ImproperBoundary
    }
}

/// Every three-dimensional family instance with at most nine points.
pub fn small_configs() -> Vec<(String, Arc<PointConfiguration>)> {
    use FamilyKind::*;
    let mut specs = vec![
        (String::from("lattice-p"), FamilySpec::new(LatticeP)),
        ("antiprism8-p".into(), FamilySpec::new(Antiprism8P)),
        ("trapezoid-cube".into(), FamilySpec::new(TrapezoidCube)),
        ("cube-3".into(), FamilySpec::new(Cube).with_d(3)),
        ("klee-minty-3".into(), FamilySpec::new(KleeMinty).with_d(3)),
    ];
    for m in 4..=5 {
        specs.push((format!("rm-{m}"), FamilySpec::new(Rm).with_m(m)));
        specs.push((format!("pm-{m}"), FamilySpec::new(Pm).with_m(m)));
    }
    for m in 3..=4 {
        for (cname, coords) in [("regular", Coords::RegularApprox), ("parabola", Coords::Parabola)] {
            specs.push((format!("prism-{m}-{cname}"), FamilySpec::new(Prism).with_m(m).with_coords(coords)));
            specs.push((format!("antiprism-{m}-{cname}"), FamilySpec::new(Antiprism).with_m(m).with_coords(coords)));
        }
    }
    specs
        .into_iter()
        .filter_map(|(name, spec)| {
            let built = families::build(&spec).ok()?;
            (built.config.dim() == 3 && built.config.len() <= 9).then_some((name, built.config))
        })
        .collect()
}
