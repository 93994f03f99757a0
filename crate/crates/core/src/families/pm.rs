//! The polytopes built around a horizontal polygon Q with one spine edge
//! above it and one below: P_m, its half R_m, and the two eight-vertex
//! examples. Halving triangulations triangulate the two halves independently.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};

use super::polygon::{circle_point_near, near_regular_lattice, CIRCLE_RADIUS};
use super::{assemble, Built};
use crate::complexes::{SimplexFamily, Status};
use crate::error::{structural, Error, Result};
use crate::exactgeom::{int, rat, Rat};

/// Half-length of the spine edges relative to the circumradius of Q.
const SPINE: (i64, i64) = (3, 4);

/// Offsets of Q and tilts of the spine tried in turn until genericity holds.
const OFFSETS: [f64; 4] = [0.1, 0.23, 0.37, 0.051];
const TILTS: [f64; 5] = [0.0137, 0.0291, -0.0419, 0.0613, -0.0877];

fn q_names(k: usize) -> String {
    format!("q{k}")
}

pub(crate) fn build_pm(m: usize, with_u: bool) -> Result<Built> {
    for &offset in &OFFSETS {
        for &tilt in &TILTS {
            if let Some(b) = try_pm(m, offset, tilt, with_u)? {
                return Ok(b);
            }
        }
    }
    Err(Error::Genericity(format!(
        "no tried coordinatization of P_{m} is generic"
    )))
}

fn cross(a: (i64, i64), b: (i64, i64)) -> i128 {
    a.0 as i128 * b.1 as i128 - a.1 as i128 * b.0 as i128
}

fn try_pm(m: usize, offset: f64, tilt: f64, with_u: bool) -> Result<Option<Built>> {
    let q = near_regular_lattice(m, offset);
    let dv = circle_point_near(std::f64::consts::FRAC_PI_2 + tilt);
    let du = (dv.1, -dv.0);
    // no chord of Q parallel to either spine
    for i in 0..m {
        for j in i + 1..m {
            let c = (q[j].0 - q[i].0, q[j].1 - q[i].1);
            if cross(c, dv) == 0 || cross(c, du) == 0 {
                return Ok(None);
            }
        }
    }
    let r = CIRCLE_RADIUS;
    let (sn, sd) = SPINE;
    // every segment v_i u_j crosses z = 0 at its midpoint, which must lie inside Q
    for sv in [-1i64, 1] {
        for su in [-1i64, 1] {
            // midpoint scaled by 2 R sd
            let p = (sn * (sv * dv.0 + su * du.0), sn * (sv * dv.1 + su * du.1));
            for k in 0..m {
                let a = q[k];
                let b = q[(k + 1) % m];
                let e = ((b.0 - a.0) as i128, (b.1 - a.1) as i128);
                let rel = (
                    p.0 as i128 - 2 * sd as i128 * a.0 as i128,
                    p.1 as i128 - 2 * sd as i128 * a.1 as i128,
                );
                if e.0 * rel.1 - e.1 * rel.0 <= 0 {
                    return Ok(None);
                }
            }
        }
    }
    let spine_pt = |d: (i64, i64), s: i64, z: i64| {
        vec![rat(s * sn * d.0, sd * r), rat(s * sn * d.1, sd * r), int(z)]
    };
    let mut named: Vec<(Vec<String>, Vec<Rat>)> = q
        .iter()
        .enumerate()
        .map(|(k, &(x, y))| (vec![q_names(k)], vec![rat(x, r), rat(y, r), int(0)]))
        .collect();
    named.push((vec!["v1".into()], spine_pt(dv, -1, 1)));
    named.push((vec!["v2".into()], spine_pt(dv, 1, 1)));
    if with_u {
        named.push((vec!["u1".into()], spine_pt(du, -1, -1)));
        named.push((vec!["u2".into()], spine_pt(du, 1, -1)));
    }
    let extreme = |d: (i64, i64), max: bool| {
        let key = |k: &usize| q[*k].0 as i128 * d.0 as i128 + q[*k].1 as i128 * d.1 as i128;
        if max {
            (0..m).max_by_key(key).unwrap()
        } else {
            (0..m).min_by_key(key).unwrap()
        }
    };
    for (name, k) in [
        ("n", extreme(dv, true)),
        ("s", extreme(dv, false)),
        ("e", extreme(du, true)),
        ("w", extreme(du, false)),
    ] {
        named[k].0.push(name.into());
    }
    let built = assemble(3, named)?;
    let hull = built.config.convex_hull()?;
    let expected = if with_u { m + 4 } else { m + 2 };
    if hull.vertices().len() != expected {
        return Ok(None);
    }
    if with_u && hull.facets.iter().any(|f| f.vertex_labels.len() != 3) {
        return Ok(None);
    }
    Ok(Some(built))
}

fn named_points(rows: &[(&str, [i64; 3])]) -> Result<Built> {
    assemble(
        3,
        rows.iter()
            .map(|(n, c)| {
                let mut names = vec![n.to_string()];
                if let Some(k) = ["s", "e", "n", "w"].iter().position(|x| x == n) {
                    names.push(q_names(k));
                }
                (names, c.iter().map(|&x| int(x)).collect())
            })
            .collect(),
    )
}

/// The lattice polytope whose unique maximal dissection beats its maximal
/// triangulations. Q = s e n w counter-clockwise.
pub(crate) fn build_lattice_p() -> Result<Built> {
    named_points(&[
        ("s", [0, 0, 0]),
        ("e", [1, 0, 0]),
        ("n", [1, 1, 0]),
        ("w", [0, 1, 0]),
        ("v1", [-1, 0, 1]),
        ("v2", [1, 1, 1]),
        ("u1", [0, 1, -1]),
        ("u2", [2, 0, -1]),
    ])
}

/// The combinatorial 4-antiprism whose minimal dissection beats its minimal
/// triangulations.
pub(crate) fn build_antiprism8_p() -> Result<Built> {
    let rows: [(&str, [i64; 3]); 8] = [
        ("u1", [1, 0, 0]),
        ("w", [1, 0, 1]),
        ("v1", [-1, 0, 0]),
        ("s", [-1, 0, -1]),
        ("v2", [0, 1, 1]),
        ("n", [1, 1, 1]),
        ("u2", [0, 1, -1]),
        ("e", [-1, 1, -1]),
    ];
    assemble(
        3,
        rows.iter()
            .map(|(n, c)| (vec![n.to_string()], c.iter().map(|&x| int(x)).collect()))
            .collect(),
    )
}

/// Q in counter-clockwise order and the spine labels.
struct Frame {
    q: Vec<usize>,
    v: Option<(usize, usize)>,
    u: Option<(usize, usize)>,
}

impl Frame {
    fn of(built: &Built) -> Result<Frame> {
        let q: Vec<usize> = (0..)
            .map_while(|k| built.names.get(&q_names(k)).copied())
            .collect();
        if q.len() < 3 {
            return structural("configuration has no named polygon q0, q1, ...");
        }
        let pair = |a: &str, b: &str| Some((built.label(a).ok()?, built.label(b).ok()?));
        Ok(Frame {
            q,
            v: pair("v1", "v2"),
            u: pair("u1", "u2"),
        })
    }

    fn spine(&self, top: bool) -> Result<(usize, usize)> {
        let s = if top { self.v } else { self.u };
        s.ok_or_else(|| Error::Structural(format!("no {} spine", if top { "top" } else { "bottom" })))
    }

    fn position(&self, l: usize) -> Result<usize> {
        self.q
            .iter()
            .position(|&x| x == l)
            .ok_or_else(|| Error::Structural(format!("label {l} is not on the polygon")))
    }
}

fn xy(built: &Built, l: usize) -> [Rat; 2] {
    let c = &built.config.point(l).0;
    [c[0].clone(), c[1].clone()]
}

fn dot(a: &[Rat; 2], b: &[Rat; 2]) -> Rat {
    &a[0] * &b[0] + &a[1] * &b[1]
}

/// Spine direction and the direction its paths are monotone in.
fn directions(built: &Built, frame: &Frame, top: bool) -> Result<([Rat; 2], [Rat; 2])> {
    let (a1, a2) = frame.spine(top)?;
    let (p, q) = (xy(built, a1), xy(built, a2));
    let s = [&q[0] - &p[0], &q[1] - &p[1]];
    let t = if top {
        [s[1].clone(), -s[0].clone()]
    } else {
        [-s[1].clone(), s[0].clone()]
    };
    Ok((s, t))
}

/// A path of polygon vertices, strictly increasing along `direction`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonotonePath {
    pub vertices: Vec<usize>,
    pub direction: [Rat; 2],
}

impl MonotonePath {
    pub fn new(built: &Built, vertices: Vec<usize>, direction: [Rat; 2]) -> Result<Self> {
        if vertices.len() < 2 {
            return structural("a path needs at least one edge");
        }
        let mut vertices = vertices;
        let t = |l: usize| dot(&direction, &xy(built, l));
        if t(vertices[0]) > t(vertices[vertices.len() - 1]) {
            vertices.reverse();
        }
        if vertices.windows(2).any(|w| t(w[0]) >= t(w[1])) {
            return structural(format!("path {vertices:?} is not strictly monotone"));
        }
        Ok(MonotonePath {
            vertices,
            direction,
        })
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// A triangulation of the polygon Q.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fill {
    pub triangles: Vec<[usize; 3]>,
}

impl Fill {
    fn new(mut triangles: Vec<[usize; 3]>) -> Self {
        for t in &mut triangles {
            t.sort_unstable();
        }
        triangles.sort_unstable();
        Fill { triangles }
    }

    pub fn edges(&self) -> BTreeSet<(usize, usize)> {
        self.triangles
            .iter()
            .flat_map(|t| [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])])
            .collect()
    }
}

fn crosses(a: (usize, usize), b: (usize, usize)) -> bool {
    let (a0, a1) = (a.0.min(a.1), a.0.max(a.1));
    let (b0, b1) = (b.0.min(b.1), b.0.max(b.1));
    (a0 < b0 && b0 < a1 && a1 < b1) || (b0 < a0 && a0 < b1 && b1 < a1)
}

/// Completes a set of non-crossing chords of Q to a triangulation, adding
/// further chords in lexicographic order of their polygon positions.
pub fn fill_containing(built: &Built, edges: &[(usize, usize)]) -> Result<Fill> {
    let frame = Frame::of(built)?;
    let m = frame.q.len();
    let mut chords: Vec<(usize, usize)> = Vec::new();
    for &(a, b) in edges {
        let (i, j) = (frame.position(a)?, frame.position(b)?);
        let (i, j) = (i.min(j), i.max(j));
        if j - i == 1 || (i == 0 && j == m - 1) || chords.contains(&(i, j)) {
            continue;
        }
        if let Some(c) = chords.iter().find(|&&c| crosses(c, (i, j))) {
            return structural(format!("required chords {c:?} and {:?} cross", (i, j)));
        }
        chords.push((i, j));
    }
    for i in 0..m {
        for j in i + 2..m {
            if (i == 0 && j == m - 1) || chords.contains(&(i, j)) {
                continue;
            }
            if chords.iter().all(|&c| !crosses(c, (i, j))) {
                chords.push((i, j));
            }
        }
    }
    let mut present = vec![vec![false; m]; m];
    for i in 0..m {
        let j = (i + 1) % m;
        present[i][j] = true;
        present[j][i] = true;
    }
    for &(i, j) in &chords {
        present[i][j] = true;
        present[j][i] = true;
    }
    let mut triangles = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                if present[i][j] && present[j][k] && present[i][k] {
                    triangles.push([frame.q[i], frame.q[j], frame.q[k]]);
                }
            }
        }
    }
    debug_assert_eq!(triangles.len(), m - 2);
    Ok(Fill::new(triangles))
}

fn path_through(built: &Built, top: bool, vertices: Vec<usize>) -> Result<MonotonePath> {
    let frame = Frame::of(built)?;
    let (_, t) = directions(built, &frame, top)?;
    MonotonePath::new(built, vertices, t)
}

fn sorted_polygon(built: &Built, top: bool) -> Result<MonotonePath> {
    let frame = Frame::of(built)?;
    let (_, t) = directions(built, &frame, top)?;
    let mut q = frame.q.clone();
    q.sort_by_key(|&l| dot(&t, &xy(built, l)));
    MonotonePath::new(built, q, t)
}

/// The longest path monotone for the top spine: all of Q, by the monotone order.
pub fn max_path_top(built: &Built) -> Result<MonotonePath> {
    sorted_polygon(built, true)
}

pub fn max_path_bottom(built: &Built) -> Result<MonotonePath> {
    sorted_polygon(built, false)
}

/// The single chord `w e`.
pub fn min_path_top(built: &Built) -> Result<MonotonePath> {
    path_through(built, true, built.labels(&["w", "e"])?)
}

/// The single chord `s n`.
pub fn min_path_bottom(built: &Built) -> Result<MonotonePath> {
    path_through(built, false, built.labels(&["s", "n"])?)
}

/// Tetrahedra of one half: path edges joined to the spine, fill triangles
/// below the path coned to the first spine vertex, those above to the second.
pub fn half_triangulation(
    built: &Built,
    path: &MonotonePath,
    fill: &Fill,
    top: bool,
) -> Result<Vec<Vec<usize>>> {
    let frame = Frame::of(built)?;
    let (a1, a2) = frame.spine(top)?;
    let (s, t) = directions(built, &frame, top)?;
    let t_of = |l: usize| dot(&t, &xy(built, l));
    let q_t: Vec<Rat> = frame.q.iter().map(|&l| t_of(l)).collect();
    let (lo, hi) = (q_t.iter().min().unwrap(), q_t.iter().max().unwrap());
    if &t_of(path.vertices[0]) != lo || &t_of(*path.vertices.last().unwrap()) != hi {
        return structural("path does not join the extreme vertices of the polygon");
    }
    let fill_edges = fill.edges();
    for e in path.edges() {
        if !fill_edges.contains(&e) {
            return structural(format!("path edge {e:?} is not in the fill"));
        }
    }
    let mut out = Vec::new();
    for (a, b) in path.edges() {
        out.push(vec![a, b, a1, a2]);
    }
    for tri in &fill.triangles {
        let c = tri.iter().fold([Rat::zero(), Rat::zero()], |acc, &l| {
            let p = xy(built, l);
            [acc[0].clone() + &p[0], acc[1].clone() + &p[1]]
        });
        let c = [&c[0] / int(3), &c[1] / int(3)];
        let tc = dot(&t, &c);
        let k = path
            .vertices
            .windows(2)
            .position(|w| t_of(w[0]) <= tc && tc <= t_of(w[1]))
            .ok_or_else(|| Error::Consistency("centroid outside path range".into()))?;
        let (p, q) = (xy(built, path.vertices[k]), xy(built, path.vertices[k + 1]));
        let (tp, tq) = (dot(&t, &p), dot(&t, &q));
        let (sp, sq) = (dot(&s, &p), dot(&s, &q));
        let height = &sp + (&sq - &sp) * (&tc - &tp) / (&tq - &tp);
        let diff = dot(&s, &c) - height;
        if diff.is_zero() {
            return structural(format!("fill triangle {tri:?} straddles the path"));
        }
        let apex = if diff.is_negative() { a1 } else { a2 };
        out.push(vec![tri[0], tri[1], tri[2], apex]);
    }
    Ok(out)
}

/// Both halves triangulated independently. A triangulation when the fills
/// agree, a dissection otherwise.
pub fn halving_triangulation(
    built: &Built,
    top_path: &MonotonePath,
    bottom_path: &MonotonePath,
    top_fill: &Fill,
    bottom_fill: &Fill,
) -> Result<SimplexFamily> {
    let m = Frame::of(built)?.q.len();
    let mut sets = half_triangulation(built, top_path, top_fill, true)?;
    sets.extend(half_triangulation(built, bottom_path, bottom_fill, false)?);
    let expected = 2 * (m - 2) + top_path.len() + bottom_path.len();
    if sets.len() != expected {
        return Err(Error::Consistency(format!(
            "halving family has {} tetrahedra, expected {expected}",
            sets.len()
        )));
    }
    let status = if top_fill == bottom_fill {
        Status::Triangulation
    } else {
        Status::Dissection
    };
    built.family(&sets)?.expect_status(status)
}

/// Both halves along their maximal paths: a mismatching dissection with
/// 4m - 6 tetrahedra.
pub fn max_halving_dissection(built: &Built) -> Result<SimplexFamily> {
    let (pt, pb) = (max_path_top(built)?, max_path_bottom(built)?);
    let ft = fill_containing(built, &pt.edges().collect::<Vec<_>>())?;
    let fb = fill_containing(built, &pb.edges().collect::<Vec<_>>())?;
    halving_triangulation(built, &pt, &pb, &ft, &fb)
}

/// The triangulation of R_m for a path and fill on the top spine alone.
pub fn half_family(built: &Built, path: &MonotonePath, fill: &Fill) -> Result<SimplexFamily> {
    let sets = half_triangulation(built, path, fill, true)?;
    built.family(&sets)?.expect_status(Status::Triangulation)
}

/// Five central tetrahedra around the two spines plus one fan per quarter
/// arc of Q; size m + 5.
pub fn small_pm_triangulation(built: &Built) -> Result<SimplexFamily> {
    let frame = Frame::of(built)?;
    let m = frame.q.len();
    let [n, s, e, w, v1, v2, u1, u2] = <[usize; 8]>::try_from(
        built.labels(&["n", "s", "e", "w", "v1", "v2", "u1", "u2"])?,
    )
    .unwrap();
    let mut sets = vec![
        vec![v1, v2, u1, u2],
        vec![v1, v2, u1, w],
        vec![v1, v2, u2, e],
        vec![v1, u1, u2, s],
        vec![v2, u1, u2, n],
    ];
    // counter-clockwise: e, n, w, s
    for (from, to, spine) in [(e, n, (v2, u2)), (n, w, (v2, u1)), (w, s, (v1, u1)), (s, e, (v1, u2))] {
        let mut i = frame.position(from)?;
        let j = frame.position(to)?;
        while i != j {
            let k = (i + 1) % m;
            sets.push(vec![frame.q[i], frame.q[k], spine.0, spine.1]);
            i = k;
        }
    }
    if sets.len() != m + 5 {
        return Err(Error::Consistency(format!(
            "arcs of Q are not split by n, e, s, w in order ({} tetrahedra)",
            sets.len()
        )));
    }
    built.family(&sets)?.expect_status(Status::Triangulation)
}

fn lattice_halves(built: &Built, bottom: &[&str]) -> Result<Vec<Vec<usize>>> {
    let top_path = path_through(built, true, built.labels(&["e", "s", "n", "w"])?)?;
    let bottom_path = path_through(built, false, built.labels(bottom)?)?;
    let tri = |a: &str, b: &str, c: &str| -> Result<[usize; 3]> {
        Ok([built.label(a)?, built.label(b)?, built.label(c)?])
    };
    let top_fill = Fill::new(vec![tri("s", "e", "n")?, tri("s", "n", "w")?]);
    let bottom_fill = if bottom.len() == 4 {
        Fill::new(vec![tri("s", "e", "w")?, tri("e", "w", "n")?])
    } else {
        top_fill.clone()
    };
    let mut sets = half_triangulation(built, &top_path, &top_fill, true)?;
    sets.extend(half_triangulation(built, &bottom_path, &bottom_fill, false)?);
    sets.push(built.labels(&["s", "w", "v1", "u1"])?);
    sets.push(built.labels(&["e", "n", "v2", "u2"])?);
    Ok(sets)
}

/// Twelve unimodular tetrahedra: two halves over the crossing fills of the
/// square plus the two tetrahedra left between them.
pub fn lattice_example_dissection(built: &Built) -> Result<SimplexFamily> {
    let sets = lattice_halves(built, &["s", "e", "w", "n"])?;
    built.family(&sets)?.expect_status(Status::Dissection)
}

/// Eleven tetrahedra; both halves use the same fill of the square.
pub fn lattice_example_triangulation11(built: &Built) -> Result<SimplexFamily> {
    let sets = lattice_halves(built, &["s", "e", "n"])?;
    built.family(&sets)?.expect_status(Status::Triangulation)
}
