//! Concrete polytopes and the explicit triangulations and dissections built
//! on them.
//!
//! Every constructor returns a [`SimplexFamily`] that has already been
//! validated on the actual coordinates; a family that does not reach the
//! status its construction promises is an error, never a silent result.

mod cube;
mod pm;
pub mod polygon;
mod prism;
mod solids;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::complexes::{SimplexFamily, Status};
use crate::error::{structural, Error, Result};
use crate::exactgeom::{Point, Rat};
use crate::pointconfig::PointConfiguration;
use num_bigint::{BigInt, Sign};

pub use cube::{
    haiman_product, klee_minty, regular_cube, segment, square_prism, trapezoid_cube_7, HaimanReport, RootBound,
};

pub use pm::{
    fill_containing, half_family, half_triangulation, halving_triangulation, lattice_example_dissection,
    lattice_example_triangulation11, max_halving_dissection, max_path_bottom, max_path_top, min_path_bottom, min_path_top,
    small_pm_triangulation, Fill, MonotonePath,
};
pub use prism::{
    antiprism_max_construction, antiprism_min_triangulation, prism_max_placing, prism_max_split,
    prism_min_triangulation,
};
pub use solids::{schoenhardt_bipyramid_dissection, schoenhardt_halves};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FamilyKind {
    Pm,
    Rm,
    LatticeP,
    Antiprism8P,
    Prism,
    Antiprism,
    Cube,
    TrapezoidCube,
    KleeMinty,
    Cuboctahedron,
    TruncTetrahedron,
    TruncOctahedron,
    RhombicDodecahedron,
    SchoenhardtBipyramid,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Coords {
    /// Lattice points of a circle, nearest to equal spacing.
    #[default]
    RegularApprox,
    /// `(i, i^2)` caps.
    Parabola,
    /// Rational affine images of the regular polygon (m = 3, 4, 6 only).
    CanonicalRational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FamilySpec {
    pub kind: FamilyKind,
    /// Polygon order, where the kind has one.
    pub m: usize,
    /// Dimension, for cubes.
    pub d: usize,
    pub coords: Coords,
}

impl FamilySpec {
    pub fn new(kind: FamilyKind) -> Self {
        FamilySpec {
            kind,
            m: 0,
            d: 3,
            coords: Coords::default(),
        }
    }

    pub fn with_m(mut self, m: usize) -> Self {
        self.m = m;
        self
    }

    pub fn with_d(mut self, d: usize) -> Self {
        self.d = d;
        self
    }

    pub fn with_coords(mut self, coords: Coords) -> Self {
        self.coords = coords;
        self
    }
}

/// A configuration together with the names of its points.
#[derive(Clone, Debug)]
pub struct Built {
    pub config: Arc<PointConfiguration>,
    /// Name to label; a label may carry several names (`q2` and `n`, say).
    pub names: BTreeMap<String, usize>,
}

impl Built {
    pub fn label(&self, name: &str) -> Result<usize> {
        self.names
            .get(name)
            .copied()
            .ok_or_else(|| Error::Structural(format!("no point named {name:?}")))
    }

    pub fn labels(&self, names: &[&str]) -> Result<Vec<usize>> {
        names.iter().map(|n| self.label(n)).collect()
    }

    pub fn family(&self, label_sets: &[Vec<usize>]) -> Result<SimplexFamily> {
        SimplexFamily::new(self.config.clone(), label_sets)
    }
}

pub(crate) fn assemble(
    dim: usize,
    named: Vec<(Vec<String>, Vec<Rat>)>,
) -> Result<Built> {
    let mut names = BTreeMap::new();
    let mut points = Vec::with_capacity(named.len());
    for (i, (ns, coords)) in named.into_iter().enumerate() {
        for n in ns {
            names.insert(n, i);
        }
        points.push(Point(coords));
    }
    Ok(Built {
        config: Arc::new(PointConfiguration::new(dim, points)?),
        names,
    })
}

/// Builds the configuration a spec describes.
pub fn build(spec: &FamilySpec) -> Result<Built> {
    let need_m = |min: usize| {
        if spec.m < min {
            structural(format!("{:?} needs m >= {min}, got {}", spec.kind, spec.m))
        } else {
            Ok(())
        }
    };
    match spec.kind {
        FamilyKind::Pm => {
            need_m(4)?;
            pm::build_pm(spec.m, true)
        }
        FamilyKind::Rm => {
            need_m(4)?;
            pm::build_pm(spec.m, false)
        }
        FamilyKind::LatticeP => pm::build_lattice_p(),
        FamilyKind::Antiprism8P => pm::build_antiprism8_p(),
        FamilyKind::Prism => {
            need_m(3)?;
            prism::build_prism(spec.m, spec.coords)
        }
        FamilyKind::Antiprism => {
            need_m(3)?;
            prism::build_antiprism(spec.m, spec.coords)
        }
        FamilyKind::Cube => regular_cube(spec.d),
        FamilyKind::TrapezoidCube => cube::build_trapezoid_cube(),
        FamilyKind::KleeMinty => klee_minty(spec.d),
        FamilyKind::Cuboctahedron => solids::cuboctahedron(),
        FamilyKind::TruncTetrahedron => solids::truncated_tetrahedron(),
        FamilyKind::TruncOctahedron => solids::truncated_octahedron(),
        FamilyKind::RhombicDodecahedron => solids::rhombic_dodecahedron(),
        FamilyKind::SchoenhardtBipyramid => solids::schoenhardt_bipyramid(),
    }
}

/// The placing triangulation for an insertion order.
pub fn placing_triangulation(config: &Arc<PointConfiguration>, order: &[usize]) -> Result<SimplexFamily> {
    let sets = config.placing(order)?;
    SimplexFamily::new(config.clone(), &sets)?.expect_status(Status::Triangulation)
}

/// Simplices coning `apex` to every boundary facet of conv(`labels`) that
/// misses it; polygonal facets are fan-triangulated from their smallest
/// vertex in cyclic order. Only for 3-dimensional configurations.
pub(crate) fn cone_from(config: &PointConfiguration, labels: &[usize], apex: usize) -> Result<Vec<Vec<usize>>> {
    let pts: Vec<Point> = labels.iter().map(|&l| config.point(l).clone()).collect();
    let sub = PointConfiguration::new(config.dim(), pts)?;
    let hull = sub.convex_hull()?;
    let local_apex = labels
        .iter()
        .position(|&l| l == apex)
        .ok_or_else(|| Error::Structural("apex is not among the labels".into()))?;
    let mut out = Vec::new();
    for f in &hull.facets {
        if f.vertex_labels.contains(&local_apex) {
            continue;
        }
        for tri in fan_facet(&sub, &f.vertex_labels, &f.plane.normal) {
            let mut s: Vec<usize> = tri.iter().map(|&i| labels[i]).collect();
            s.push(apex);
            s.sort_unstable();
            out.push(s);
        }
    }
    out.sort();
    Ok(out)
}

/// Fan triangulation of a convex facet polygon of a 3-dimensional configuration.
fn fan_facet(config: &PointConfiguration, verts: &[usize], normal: &[BigInt]) -> Vec<[usize; 3]> {
    if verts.len() == 3 {
        return vec![[verts[0], verts[1], verts[2]]];
    }
    // order the vertices cyclically in the projection that drops a nonzero normal axis
    let drop = normal.iter().position(|c| c.sign() != Sign::NoSign).unwrap();
    let axes: Vec<usize> = (0..3).filter(|&a| a != drop).collect();
    let p = |l: usize| -> [BigInt; 2] {
        let c = config.int_coords(l);
        [c[axes[0]].clone(), c[axes[1]].clone()]
    };
    let base = verts[0];
    let mut rest: Vec<usize> = verts[1..].to_vec();
    let pb = p(base);
    // every other vertex lies on one side of `base`, so the cross sign is a total order
    rest.sort_by(|&a, &b| {
        let (pa, pc) = (p(a), p(b));
        let cross = (&pa[0] - &pb[0]) * (&pc[1] - &pb[1]) - (&pa[1] - &pb[1]) * (&pc[0] - &pb[0]);
        match cross.sign() {
            Sign::Plus => std::cmp::Ordering::Less,
            Sign::Minus => std::cmp::Ordering::Greater,
            Sign::NoSign => std::cmp::Ordering::Equal,
        }
    });
    rest.windows(2).map(|w| [base, w[0], w[1]]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn placing_on_a_simplex_is_one_simplex() {
        let c = Arc::new(
            PointConfiguration::from_ints(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
                .unwrap(),
        );
        assert_eq!(placing_triangulation(&c, &[3, 1, 2, 0]).unwrap().size(), 1);
    }

    #[test]
    fn coning_a_cube_corner() {
        let b = regular_cube(3).unwrap();
        let all: Vec<usize> = (0..8).collect();
        let sets = cone_from(&b.config, &all, 0).unwrap();
        // three facets miss vertex 0, two triangles each
        assert_eq!(sets.len(), 6);
        let f = b.family(&sets).unwrap().expect_status(Status::Triangulation).unwrap();
        assert_eq!(f.size(), 6);
    }
}
