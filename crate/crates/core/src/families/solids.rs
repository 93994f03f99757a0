//! Archimedean solids and Catalan duals with rational coordinates, and the
//! four-dimensional bipyramid over the twisted prism.

use std::collections::BTreeSet;

use itertools::Itertools;

use super::{assemble, Built};
use crate::complexes::{SimplexFamily, Status};
use crate::error::Result;
use crate::exactgeom::{int, parse_rat, Rat};

fn from_rows(rows: BTreeSet<[i64; 3]>) -> Result<Built> {
    assemble(
        3,
        rows.into_iter()
            .enumerate()
            .map(|(i, r)| (vec![format!("p{i}")], r.iter().map(|&x| int(x)).collect()))
            .collect(),
    )
}

/// All coordinate permutations and sign changes of `base`, filtered.
fn orbit(base: [i64; 3], keep: impl Fn(&[i64; 3]) -> bool) -> BTreeSet<[i64; 3]> {
    let mut out = BTreeSet::new();
    for p in base.iter().permutations(3) {
        for signs in 0..8 {
            let mut r = [0; 3];
            for k in 0..3 {
                r[k] = if signs >> k & 1 == 1 { -*p[k] } else { *p[k] };
            }
            if keep(&r) {
                out.insert(r);
            }
        }
    }
    out
}

pub(crate) fn cuboctahedron() -> Result<Built> {
    from_rows(orbit([1, 1, 0], |_| true))
}

pub(crate) fn truncated_octahedron() -> Result<Built> {
    from_rows(orbit([0, 1, 2], |_| true))
}

pub(crate) fn rhombic_dodecahedron() -> Result<Built> {
    let mut rows = orbit([1, 1, 1], |_| true);
    rows.extend(orbit([2, 0, 0], |_| true));
    from_rows(rows)
}

/// Permutations of (1, 1, 3) with an even number of minus signs.
pub(crate) fn truncated_tetrahedron() -> Result<Built> {
    from_rows(orbit([1, 1, 3], |r| r.iter().filter(|&&x| x < 0).count() % 2 == 0))
}

/// Top vertices 4, 5, 6 sit over 1, 2, 3 with a small twist; all three
/// twists turn the same way, which both cone lists require.
const TWISTED: [[&str; 3]; 8] = [
    ["10", "0", "0"],
    ["-6", "8", "0"],
    ["-6", "-8", "0"],
    ["10", "-0.1", "10"],
    ["-5.9", "8", "10"],
    ["-6.1", "-7.9", "10"],
    ["0", "0", "10.1"],
    ["0", "0", "-0.1"],
];

const CONE_7: [&str; 9] = ["1278", "1378", "2378", "1247", "2457", "2357", "3567", "1367", "1467"];
const CONE_8: [&str; 9] = ["4578", "4678", "5678", "1248", "2458", "2358", "3568", "1368", "1468"];
const SHARED: [&str; 3] = ["1245", "2356", "1346"];

/// Points 1..8 (labels 0..7) in the hyperplane x4 = 0, and apices `top`
/// (label 8) and `bottom` (label 9) above and below their centroid.
pub(crate) fn schoenhardt_bipyramid() -> Result<Built> {
    let pts: Vec<Vec<Rat>> = TWISTED
        .iter()
        .map(|r| r.iter().map(|s| parse_rat(s).expect("literal")).collect())
        .collect();
    let mut centroid = vec![int(0); 3];
    for p in &pts {
        for k in 0..3 {
            centroid[k] += &p[k] / int(8);
        }
    }
    let mut named: Vec<(Vec<String>, Vec<Rat>)> = pts
        .into_iter()
        .enumerate()
        .map(|(i, mut p)| {
            p.push(int(0));
            (vec![format!("{}", i + 1)], p)
        })
        .collect();
    for (name, h) in [("top", 1), ("bottom", -1)] {
        let mut c = centroid.clone();
        c.push(int(h));
        named.push((vec![name.into()], c));
    }
    assemble(4, named)
}

fn digits(s: &str) -> Vec<usize> {
    s.bytes().map(|b| (b - b'1') as usize).collect()
}

/// One triangulation of the twisted prism coned to each apex; the two
/// disagree across the equator, which carries a non-convex mismatched region.
pub fn schoenhardt_bipyramid_dissection(built: &Built) -> Result<SimplexFamily> {
    let (top, bottom) = (built.label("top")?, built.label("bottom")?);
    let mut sets = Vec::new();
    for (cone, apex) in [(&CONE_7, top), (&CONE_8, bottom)] {
        for s in cone.iter().chain(SHARED.iter()) {
            let mut t = digits(s);
            t.push(apex);
            sets.push(t);
        }
    }
    built.family(&sets)?.expect_status(Status::Dissection)
}

/// The two three-dimensional triangulations of the twisted prism, as label sets.
pub fn schoenhardt_halves() -> [Vec<Vec<usize>>; 2] {
    let half = |cone: &[&str; 9]| cone.iter().chain(SHARED.iter()).map(|s| digits(s)).collect();
    [half(&CONE_7), half(&CONE_8)]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solid_vertex_counts() {
        let n = |b: Result<Built>| b.unwrap().config.convex_hull().unwrap().vertices().len();
        assert_eq!(n(cuboctahedron()), 12);
        assert_eq!(n(truncated_octahedron()), 24);
        assert_eq!(n(rhombic_dodecahedron()), 14);
        assert_eq!(n(truncated_tetrahedron()), 12);
    }

    #[test]
    fn bipyramid_is_mismatching() {
        let b = schoenhardt_bipyramid().unwrap();
        let d = schoenhardt_bipyramid_dissection(&b).unwrap();
        assert_eq!(d.size(), 24);
    }
}
