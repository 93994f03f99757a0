//! Prisms and antiprisms over m-gons with parallel caps.
//!
//! Prism labels: u_i = i - 1 on the bottom cap z = 0, v_i = m + i - 1 on the
//! top cap z = 1, with v_i directly above u_i. Antiprism labels are the same,
//! with the side edges v_i u_i and u_i v_(i+1).

use std::collections::BTreeSet;

use super::polygon::{affinely_regular, near_regular, parabola};
use super::{assemble, cone_from, placing_triangulation, Built, Coords};
use crate::complexes::{SimplexFamily, Status};
use crate::error::{Error, Result};
use crate::exactgeom::{int, rat, Rat};

fn cap(m: usize, coords: Coords) -> Result<Vec<[Rat; 2]>> {
    Ok(match coords {
        Coords::Parabola => parabola(m),
        Coords::CanonicalRational => affinely_regular(m)
            .ok_or_else(|| Error::Structural(format!("no rational regular {m}-gon")))?,
        Coords::RegularApprox => affinely_regular(m).unwrap_or_else(|| near_regular(m, 0.0)),
    })
}

fn two_caps(m: usize, bottom: Vec<[Rat; 2]>, top: Vec<[Rat; 2]>) -> Result<Built> {
    let mut named = Vec::with_capacity(2 * m);
    for (i, [x, y]) in bottom.into_iter().enumerate() {
        named.push((vec![format!("u{}", i + 1)], vec![x, y, int(0)]));
    }
    for (i, [x, y]) in top.into_iter().enumerate() {
        named.push((vec![format!("v{}", i + 1)], vec![x, y, int(1)]));
    }
    let built = assemble(3, named)?;
    if built.config.convex_hull()?.vertices().len() != 2 * m {
        return Err(Error::Genericity("cap points are not all vertices".into()));
    }
    Ok(built)
}

pub(crate) fn build_prism(m: usize, coords: Coords) -> Result<Built> {
    let c = cap(m, coords)?;
    two_caps(m, c.clone(), c)
}

/// The caps interleave: v_i, u_i alternate around the projected 2m-gon.
/// Vertical scaling is affine, so unit height loses nothing.
pub(crate) fn build_antiprism(m: usize, coords: Coords) -> Result<Built> {
    let (top, bottom) = match coords {
        Coords::Parabola => {
            let ring = parabola(2 * m);
            let top = ring.iter().step_by(2).cloned().collect();
            (top, ring.into_iter().skip(1).step_by(2).collect())
        }
        Coords::CanonicalRational => turned_caps(m)
            .ok_or_else(|| Error::Structural(format!("no rational regular {m}-antiprism")))?,
        Coords::RegularApprox => turned_caps(m).unwrap_or_else(|| {
            let ring = near_regular(2 * m, 0.0);
            let top = ring.iter().step_by(2).cloned().collect();
            (top, ring.into_iter().skip(1).step_by(2).collect())
        }),
    };
    two_caps(m, bottom, top)
}

/// An affinely regular top cap and the bottom cap through the directions of
/// its edge midpoints. Every chord direction then matches the regular
/// antiprism, so the two have the same oriented matroid.
fn turned_caps(m: usize) -> Option<(Vec<[Rat; 2]>, Vec<[Rat; 2]>)> {
    let top = affinely_regular(m)?;
    // close to 1 / (2 cos(pi / m)), the ratio for equal radii
    let t = match m {
        3 => int(1),
        4 => rat(7, 10),
        6 => rat(4, 7),
        _ => return None,
    };
    let mm = int(m as i64);
    let c: [Rat; 2] = [0, 1].map(|k| top.iter().map(|p| p[k].clone()).sum::<Rat>() / &mm);
    let bottom = (0..m)
        .map(|i| {
            let (a, b) = (&top[i], &top[(i + 1) % m]);
            [0, 1].map(|k| &c[k] + &t * (&a[k] + &b[k] - &c[k] * int(2)))
        })
        .collect();
    Some((top, bottom))
}

fn m_of(built: &Built) -> usize {
    built.config.len() / 2
}

fn u(i: usize) -> usize {
    i - 1
}

fn v(m: usize, i: usize) -> usize {
    m + i - 1
}

/// Chop alternate vertices off both caps, then cone what remains from one
/// vertex; size 2m - 5 + ceil(m / 2).
pub fn prism_min_triangulation(built: &Built) -> Result<SimplexFamily> {
    let m = m_of(built);
    let next = |i: usize| i % m + 1;
    let prev = |i: usize| (i + m - 2) % m + 1;
    let mut sets = Vec::new();
    let mut chopped = BTreeSet::new();
    let odd_limit = if m % 2 == 0 { m } else { m - 2 };
    for i in (1..=odd_limit).step_by(2) {
        sets.push(vec![u(i), u(prev(i)), u(next(i)), v(m, i)]);
        chopped.insert(u(i));
    }
    for j in (2..=m).step_by(2) {
        sets.push(vec![v(m, j), v(m, prev(j)), v(m, next(j)), u(j)]);
        chopped.insert(v(m, j));
    }
    let rest: Vec<usize> = (0..2 * m).filter(|l| !chopped.contains(l)).collect();
    sets.extend(cone_from(&built.config, &rest, rest[0])?);
    let expected = 2 * m - 5 + m.div_ceil(2);
    if sets.len() != expected {
        return Err(Error::Consistency(format!(
            "minimal prism family has {} tetrahedra, expected {expected}",
            sets.len()
        )));
    }
    built.family(&sets)?.expect_status(Status::Triangulation)
}

/// Cone from v_1; size 3m - 5.
pub fn antiprism_min_triangulation(built: &Built) -> Result<SimplexFamily> {
    let m = m_of(built);
    let all: Vec<usize> = (0..2 * m).collect();
    let sets = cone_from(&built.config, &all, v(m, 1))?;
    if sets.len() != 3 * m - 5 {
        return Err(Error::Consistency(format!(
            "coned antiprism has {} tetrahedra, expected {}",
            sets.len(),
            3 * m - 5
        )));
    }
    built.family(&sets)?.expect_status(Status::Triangulation)
}

/// Placing u_1..u_m then v_1..v_m. When the caps project onto a side facet
/// this contains every mixed tetrahedron v_i v_(i+1) u_j u_(j+1), i < j < m,
/// and has (m^2 + m - 6) / 2 tetrahedra.
pub fn prism_max_placing(built: &Built) -> Result<SimplexFamily> {
    let m = m_of(built);
    let order: Vec<usize> = (0..2 * m).collect();
    let fam = placing_triangulation(&built.config, &order)?;
    let expected = (m * m + m - 6) / 2;
    if fam.size() != expected {
        return Err(Error::Validation(format!(
            "placing gives {} tetrahedra, expected {expected}; the caps do not project onto a side facet",
            fam.size()
        )));
    }
    let have: BTreeSet<Vec<usize>> = fam.label_sets().into_iter().collect();
    for i in 1..m {
        for j in i + 1..m {
            let mut t = vec![v(m, i), v(m, i + 1), u(j), u(j + 1)];
            t.sort_unstable();
            if !have.contains(&t) {
                return Err(Error::Validation(format!("mixed tetrahedron {t:?} missing")));
            }
        }
    }
    Ok(fam)
}

/// Placing orders of the subprism over the cap indices `cyc`: every rotation
/// and reflection of the cycle, with either cap inserted first.
fn subprism_orders(m: usize, cyc: &[usize]) -> Vec<Vec<usize>> {
    let p = cyc.len();
    let mut out = Vec::new();
    for r in 0..p {
        for rev in [false, true] {
            let mut seq: Vec<usize> = (0..p).map(|k| cyc[(r + k) % p]).collect();
            if rev {
                seq.reverse();
            }
            for u_first in [true, false] {
                let (a, b): (Vec<usize>, Vec<usize>) = (
                    seq.iter().map(|&i| u(i)).collect(),
                    seq.iter().map(|&i| v(m, i)).collect(),
                );
                let mut o = if u_first { a.clone() } else { b.clone() };
                o.extend(if u_first { b } else { a });
                out.push(o);
            }
        }
    }
    out
}

/// The diagonal a triangulation uses on the quadrilateral u_1 v_1 u_k v_k.
fn quad_diagonal(sets: &[Vec<usize>], m: usize, k: usize) -> Option<(usize, usize)> {
    let quad = [u(1), v(m, 1), u(k), v(m, k)];
    for t in sets {
        let on: Vec<usize> = t.iter().copied().filter(|l| quad.contains(l)).collect();
        if on.len() == 3 {
            for d in [(u(1), v(m, k)), (v(m, 1), u(k))] {
                if on.contains(&d.0) && on.contains(&d.1) {
                    return Some(d);
                }
            }
        }
    }
    None
}

/// Two subprisms of orders floor(m/2) + 1 and ceil(m/2) + 1 cut along
/// u_1 v_1 u_k v_k, each triangulated by its largest placing, matching on
/// the cut; size ceil((m^2 + 6m - 16) / 4).
pub fn prism_max_split(built: &Built) -> Result<SimplexFamily> {
    let m = m_of(built);
    if m == 3 {
        let order: Vec<usize> = (0..6).collect();
        return placing_triangulation(&built.config, &order);
    }
    let k = m / 2 + 1;
    let halves = [(1..=k).collect::<Vec<_>>(), {
        let mut c: Vec<usize> = (k..=m).collect();
        c.push(1);
        c
    }];
    // per half and per cut diagonal, the largest placing found
    let mut best: [Vec<Option<Vec<Vec<usize>>>>; 2] = [vec![None, None], vec![None, None]];
    for (h, cyc) in halves.iter().enumerate() {
        for order in subprism_orders(m, cyc) {
            let sets = built.config.placing(&order)?;
            let d = match quad_diagonal(&sets, m, k) {
                Some(d) => usize::from(d.0 != u(1)),
                None => continue,
            };
            if best[h][d].as_ref().is_none_or(|b| b.len() < sets.len()) {
                best[h][d] = Some(sets);
            }
        }
    }
    let mut choice: Option<Vec<Vec<usize>>> = None;
    for d in 0..2 {
        if let (Some(a), Some(b)) = (&best[0][d], &best[1][d]) {
            if choice.as_ref().is_none_or(|c| c.len() < a.len() + b.len()) {
                choice = Some(a.iter().chain(b).cloned().collect());
            }
        }
    }
    let sets = choice.ok_or_else(|| Error::Validation("no placings agree on the cut".into()))?;
    let expected = (m * m + 6 * m - 16).div_ceil(4);
    if sets.len() != expected {
        return Err(Error::Validation(format!(
            "split gives {} tetrahedra, expected {expected}",
            sets.len()
        )));
    }
    built.family(&sets)?.expect_status(Status::Triangulation)
}

/// Bottom cap fanned from u_1 and coned to v_1; top cap triangulated by the
/// zigzag v_1, v_2, v_m, v_3, v_(m-1), ... and coned to u_(floor(m/2)+1); mixed
/// tetrahedra v_i v_(i+1) u_j u_(j+1) for 1 <= i <= j <= floor(m/2) and
/// u_i u_(i+1) v_j v_(j+1) for floor(m/2) < i < j <= m. Indices wrap; size
/// floor((m^2 + 8m - 16) / 4).
pub fn antiprism_max_construction(built: &Built) -> Result<SimplexFamily> {
    let m = m_of(built);
    let wrap = |i: usize| (i - 1) % m + 1;
    let uu = |i: usize| u(wrap(i));
    let vv = |i: usize| v(m, wrap(i));
    let mut sets = Vec::new();
    for j in 2..m {
        sets.push(vec![uu(1), uu(j), uu(j + 1), vv(1)]);
    }
    let mut zigzag = vec![1, 2];
    let (mut lo, mut hi) = (3, m);
    while lo <= hi {
        zigzag.push(hi);
        hi -= 1;
        if lo <= hi {
            zigzag.push(lo);
            lo += 1;
        }
    }
    let apex = uu(m / 2 + 1);
    for w in zigzag.windows(3) {
        sets.push(vec![vv(w[0]), vv(w[1]), vv(w[2]), apex]);
    }
    let k = m / 2;
    for i in 1..=k {
        for j in i..=k {
            sets.push(vec![vv(i), vv(i + 1), uu(j), uu(j + 1)]);
        }
    }
    for i in k + 1..=m {
        for j in i + 1..=m {
            sets.push(vec![uu(i), uu(i + 1), vv(j), vv(j + 1)]);
        }
    }
    let expected = (m * m + 8 * m - 16) / 4;
    if sets.len() != expected {
        return Err(Error::Consistency(format!(
            "antiprism construction has {} tetrahedra, expected {expected}",
            sets.len()
        )));
    }
    built.family(&sets)?.expect_status(Status::Triangulation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::euler_audit;

    #[test]
    fn minimal_prisms_and_antiprisms() {
        for coords in [Coords::Parabola, Coords::RegularApprox] {
            for m in 3..=8 {
                let p = build_prism(m, coords).unwrap();
                let t = prism_min_triangulation(&p).unwrap();
                assert_eq!(t.size(), 2 * m - 5 + m.div_ceil(2));
                assert!(euler_audit(&t).unwrap().holds());
                let a = build_antiprism(m, coords).unwrap();
                assert_eq!(antiprism_min_triangulation(&a).unwrap().size(), 3 * m - 5);
            }
        }
    }

    #[test]
    fn maximal_prism_constructions() {
        for m in 3..=8 {
            let p = build_prism(m, Coords::Parabola).unwrap();
            assert_eq!(prism_max_placing(&p).unwrap().size(), (m * m + m - 6) / 2);
            assert_eq!(prism_max_split(&p).unwrap().size(), (m * m + 6 * m - 16).div_ceil(4));
        }
    }

    #[test]
    fn maximal_antiprism_construction() {
        for (m, coords) in (3..=12).map(|m| (m, Coords::RegularApprox)) {
            let a = build_antiprism(m, coords).unwrap();
            assert_eq!(antiprism_max_construction(&a).unwrap().size(), (m * m + 8 * m - 16) / 4);
        }
    }
}
