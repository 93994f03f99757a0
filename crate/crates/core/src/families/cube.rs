//! Combinatorial cubes: the regular cube, the prism over a trapezoid with
//! its seven-tetrahedron triangulation, Klee-Minty cubes, and products of
//! triangulated cubes.

use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use super::{assemble, Built};
use crate::complexes::{SimplexFamily, Status};
use crate::error::{structural, Error, Result};
use crate::exactgeom::{factorial, int, rat, Rat};
use crate::pointconfig::PointConfiguration;
use crate::simplexrel::{binomial, enumerate_simplices, Classifier, PairRelation, Simplex};

/// Vertex name of a 0/1 vector: `c` followed by its bits, first coordinate first.
fn bits_name(bits: usize, d: usize) -> String {
    let s: String = (0..d).map(|j| if bits >> j & 1 == 1 { '1' } else { '0' }).collect();
    format!("c{s}")
}

/// {0,1}^d; label b has coordinate j equal to bit j of b.
pub fn regular_cube(d: usize) -> Result<Built> {
    if d == 0 {
        return structural("cube dimension must be positive");
    }
    let named = (0..1usize << d)
        .map(|b| {
            let coords = (0..d).map(|j| int((b >> j & 1) as i64)).collect();
            (vec![bits_name(b, d)], coords)
        })
        .collect();
    assemble(d, named)
}

/// Deformed cube: x_1 in {0, 1}, x_j in {x_(j-1) / 3, 1 - x_(j-1) / 3}.
pub fn klee_minty(d: usize) -> Result<Built> {
    if d == 0 {
        return structural("cube dimension must be positive");
    }
    let eps = rat(1, 3);
    let named = (0..1usize << d)
        .map(|b| {
            let mut coords: Vec<Rat> = Vec::with_capacity(d);
            for j in 0..d {
                let prev = if j == 0 { int(0) } else { &eps * &coords[j - 1] };
                let bit = b >> j & 1 == 1;
                coords.push(if j == 0 {
                    int(bit as i64)
                } else if bit {
                    int(1) - prev
                } else {
                    prev
                });
            }
            (vec![bits_name(b, d)], coords)
        })
        .collect();
    assemble(d, named)
}

const TRAPEZOID: [(i64, i64); 4] = [(0, 0), (1, 1), (2, 4), (3, 9)];

/// Prism over the quadrilateral with vertices on y = x^2; b_i below t_i.
/// A = b0, B = b1, H = t2, G = t3.
pub(crate) fn build_trapezoid_cube() -> Result<Built> {
    prism_over(&TRAPEZOID)
}

fn prism_over(base: &[(i64, i64); 4]) -> Result<Built> {
    let mut named = Vec::new();
    for (z, prefix) in [(0, "b"), (1, "t")] {
        for (i, &(x, y)) in base.iter().enumerate() {
            named.push((vec![format!("{prefix}{i}")], vec![int(x), int(y), int(z)]));
        }
    }
    let mut built = assemble(3, named)?;
    for (letter, name) in [("A", "b0"), ("B", "b1"), ("H", "t2"), ("G", "t3")] {
        let l = built.label(name)?;
        built.names.insert(letter.into(), l);
    }
    Ok(built)
}

/// The square base with the same labelling, for the negative check.
pub fn square_prism() -> Result<Built> {
    prism_over(&[(0, 0), (1, 0), (1, 1), (0, 1)])
}

/// Tetrahedron ABGH plus three tetrahedra in each of the two pieces around
/// it. Fails when AB and GH are coplanar, as on the regular cube.
pub fn trapezoid_cube_7(built: &Built) -> Result<SimplexFamily> {
    let core_labels = built.labels(&["A", "B", "G", "H"])?;
    let config = &built.config;
    let core = match Simplex::new(config, &core_labels) {
        Ok(s) => s,
        Err(Error::Degenerate(_)) => {
            return Err(Error::Validation("AB and GH are coplanar".into()));
        }
        Err(e) => return Err(e),
    };
    let classifier = Classifier::new(config);
    let compatible = |a: &Simplex, b: &Simplex| {
        matches!(
            classifier.classify(a, b),
            PairRelation::Disjoint | PairRelation::CommonFace
        )
    };
    let candidates: Vec<Simplex> = enumerate_simplices(config)
        .into_iter()
        .filter(|s| s.labels != core.labels && compatible(s, &core))
        .collect();
    let total = config.total_volume()?;
    let mut chosen = vec![core.clone()];
    if search(&candidates, 0, &mut chosen, &core.volume, &total, 7, &compatible) {
        let fam = SimplexFamily::from_simplices(config.clone(), chosen);
        return fam.expect_status(Status::Triangulation);
    }
    Err(Error::Validation(
        "the boundary around ABGH does not extend to seven tetrahedra".into(),
    ))
}

fn search(
    cands: &[Simplex],
    from: usize,
    chosen: &mut Vec<Simplex>,
    vol: &Rat,
    total: &Rat,
    size: usize,
    compatible: &dyn Fn(&Simplex, &Simplex) -> bool,
) -> bool {
    if chosen.len() == size {
        return vol == total;
    }
    for i in from..cands.len() {
        let c = &cands[i];
        let v = vol + &c.volume;
        if &v > total || !chosen.iter().all(|s| compatible(s, c)) {
            continue;
        }
        chosen.push(c.clone());
        if search(cands, i + 1, chosen, &v, total, size, compatible) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// `base^(1/exponent)`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RootBound {
    #[serde(with = "crate::exactgeom::rat_one")]
    pub base: Rat,
    pub exponent: u32,
}

impl RootBound {
    /// Whether `base^(1/exponent) >= c`, decided exactly.
    pub fn at_least(&self, c: &Rat) -> bool {
        let mut p = int(1);
        for _ in 0..self.exponent {
            p *= c;
        }
        self.base >= p
    }

    pub fn approx(&self) -> f64 {
        use num_traits::ToPrimitive;
        self.base.to_f64().unwrap_or(f64::NAN).powf(1.0 / self.exponent as f64)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HaimanReport {
    pub d1: usize,
    pub d2: usize,
    pub s1: usize,
    pub s2: usize,
    /// s1 * s2 * C(d1 + d2, d1).
    pub product_size: usize,
    /// The size of the product triangulation, a lower bound for the
    /// maximal triangulation of the product cube.
    pub f_lower: usize,
    /// (f_lower / d!)^(1/d) with d = d1 + d2.
    pub g: RootBound,
}

/// Staircase triangulation of every cell product, using label order as the
/// global vertex order of each factor. Product label of (i, j) is i * n2 + j.
/// Validation is skipped above `validate_limit` simplices; the volume sum is
/// always checked.
pub fn haiman_product(
    a: &SimplexFamily,
    b: &SimplexFamily,
    validate_limit: usize,
) -> Result<(Built, SimplexFamily, HaimanReport)> {
    let (ca, cb) = (a.config(), b.config());
    let (d1, d2) = (ca.dim(), cb.dim());
    let n2 = cb.len();
    let mut named = Vec::new();
    for i in 0..ca.len() {
        for j in 0..n2 {
            let mut c = ca.point(i).0.clone();
            c.extend(cb.point(j).0.iter().cloned());
            named.push((vec![format!("p{i}_{j}")], c));
        }
    }
    let built = assemble(d1 + d2, named)?;
    let mut sets = Vec::new();
    for s in a.simplices() {
        for t in b.simplices() {
            staircases(&s.labels, &t.labels, n2, &mut sets);
        }
    }
    let (s1, s2) = (a.size(), b.size());
    let product_size = s1 * s2 * binomial(d1 + d2, d1);
    if sets.len() != product_size {
        return Err(Error::Consistency(format!(
            "{} staircase simplices, expected {product_size}",
            sets.len()
        )));
    }
    let family = built.family(&sets)?;
    let expected_volume = a.volume() * b.volume();
    if family.volume() != expected_volume {
        return Err(Error::Validation(format!(
            "product volume {} differs from {}",
            family.volume(),
            expected_volume
        )));
    }
    let family = if sets.len() <= validate_limit {
        family.expect_status(Status::Triangulation)?
    } else {
        family
    };
    let d = d1 + d2;
    let report = HaimanReport {
        d1,
        d2,
        s1,
        s2,
        product_size,
        f_lower: sets.len(),
        g: RootBound {
            base: Rat::new(BigInt::from(sets.len()), factorial(d)),
            exponent: d as u32,
        },
    };
    Ok((built, family, report))
}

/// Every monotone lattice path from (0, 0) to (|sa| - 1, |sb| - 1).
fn staircases(sa: &[usize], sb: &[usize], n2: usize, out: &mut Vec<Vec<usize>>) {
    fn walk(
        sa: &[usize],
        sb: &[usize],
        n2: usize,
        x: usize,
        y: usize,
        cur: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        cur.push(sa[x] * n2 + sb[y]);
        if x + 1 == sa.len() && y + 1 == sb.len() {
            let mut s = cur.clone();
            s.sort_unstable();
            out.push(s);
        }
        if x + 1 < sa.len() {
            walk(sa, sb, n2, x + 1, y, cur, out);
        }
        if y + 1 < sb.len() {
            walk(sa, sb, n2, x, y + 1, cur, out);
        }
        cur.pop();
    }
    walk(sa, sb, n2, 0, 0, &mut Vec::new(), out);
}

/// The unit segment with its single simplex.
pub fn segment() -> Result<SimplexFamily> {
    let c = Arc::new(PointConfiguration::from_ints(&[vec![0], vec![1]])?);
    SimplexFamily::new(c, &[vec![0, 1]])?.expect_status(Status::Triangulation)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::euler_audit;

    #[test]
    fn seven_tetrahedra_on_the_trapezoid_prism() {
        let b = build_trapezoid_cube().unwrap();
        let t = trapezoid_cube_7(&b).unwrap();
        assert_eq!(t.size(), 7);
        let audit = euler_audit(&t).unwrap();
        assert!(audit.holds());
        assert_eq!(audit.e_i, 2);
    }

    #[test]
    fn regular_cube_rejects_the_construction() {
        let b = square_prism().unwrap();
        assert!(matches!(trapezoid_cube_7(&b), Err(Error::Validation(_))));
    }

    #[test]
    fn products() {
        let s = segment().unwrap();
        let (_, f, r) = haiman_product(&s, &s, 100).unwrap();
        assert_eq!((f.size(), r.product_size), (2, 2));
        let b = build_trapezoid_cube().unwrap();
        let t = trapezoid_cube_7(&b).unwrap();
        let (_, f, r) = haiman_product(&t, &s, 100).unwrap();
        assert_eq!(f.size(), 28);
        assert_eq!(f.status(), Status::Triangulation);
        assert_eq!(r.g.base, rat(28, 24));
        assert!(r.g.at_least(&rat(1031, 1000)));
    }

    #[test]
    fn klee_minty_is_a_cube() {
        let b = klee_minty(3).unwrap();
        assert_eq!(b.config.convex_hull().unwrap().facets.len(), 6);
    }
}
