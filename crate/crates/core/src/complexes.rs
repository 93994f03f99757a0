//! Dissections and triangulations: validation, mismatched regions, the
//! interior-edge count identity and the size bounds for mismatching
//! dissections of 3-polytopes.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use itertools::Itertools;
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{structural, Error, Result};
use crate::exactgeom::{self, ring, AffineFunctional, Rat};
use crate::pointconfig::{Hull, IntHyperplane, PointConfiguration};
use crate::simplexrel::{binomial, Classifier, PairRelation, Simplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Status {
    Unknown,
    Dissection,
    Triangulation,
    Invalid,
}

impl Status {
    pub fn is_dissection(self) -> bool {
        matches!(self, Status::Dissection | Status::Triangulation)
    }
}

/// A set of full-dimensional simplices over one configuration.
#[derive(Clone, Debug)]
pub struct SimplexFamily {
    config: Arc<PointConfiguration>,
    simplices: Vec<Simplex>,
    status: Status,
}

impl SimplexFamily {
    pub fn new(config: Arc<PointConfiguration>, label_sets: &[Vec<usize>]) -> Result<Self> {
        let simplices = label_sets
            .iter()
            .map(|s| Simplex::new(&config, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::from_simplices(config, simplices))
    }

    pub fn from_simplices(config: Arc<PointConfiguration>, simplices: Vec<Simplex>) -> Self {
        SimplexFamily {
            config,
            simplices,
            status: Status::Unknown,
        }
    }

    pub fn config(&self) -> &Arc<PointConfiguration> {
        &self.config
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    pub fn size(&self) -> usize {
        self.simplices.len()
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn label_sets(&self) -> Vec<Vec<usize>> {
        self.simplices.iter().map(|s| s.labels.clone()).collect()
    }

    /// Sorted label sets; equal for equal families regardless of order.
    pub fn canonical_labels(&self) -> Vec<Vec<usize>> {
        let mut v = self.label_sets();
        v.sort();
        v
    }

    pub fn volume(&self) -> Rat {
        let nvol = self.simplices.iter().fold(BigInt::zero(), |a, s| a + &s.nvol);
        self.config.volume_of_nvol(&nvol)
    }

    /// Validates and records the status.
    pub fn validate(&mut self) -> Validation {
        let v = validate(self);
        self.status = v.status;
        v
    }

    /// Validates and fails unless the status is at least `expected`.
    pub fn expect_status(mut self, expected: Status) -> Result<Self> {
        let v = self.validate();
        let ok = match expected {
            Status::Triangulation => v.status == Status::Triangulation,
            Status::Dissection => v.status.is_dissection(),
            _ => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::Validation(format!(
                "expected {expected:?}, got {:?}: {}",
                v.status,
                v.reasons.join("; ")
            )))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Validation {
    pub status: Status,
    /// Pairs of label sets whose interiors meet.
    pub overlapping: Vec<(Vec<usize>, Vec<usize>)>,
    /// Pairs that touch without meeting in a common face.
    pub improper: Vec<(Vec<usize>, Vec<usize>)>,
    #[serde(serialize_with = "ser_rat")]
    pub volume: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub expected_volume: Rat,
    pub reasons: Vec<String>,
}

impl Validation {
    /// `expected_volume - volume`.
    pub fn deficit(&self) -> Rat {
        &self.expected_volume - &self.volume
    }
}

fn ser_rat<S: serde::Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&exactgeom::format_rat(r))
}

pub fn validate(family: &SimplexFamily) -> Validation {
    let config = &family.config;
    let classifier = Classifier::new(config);
    validate_with(family, &classifier)
}

pub fn validate_with(family: &SimplexFamily, classifier: &Classifier) -> Validation {
    let config = &family.config;
    let s = &family.simplices;
    let mut rels: Vec<(usize, usize, PairRelation)> = (1..s.len())
        .into_par_iter()
        .flat_map_iter(|j| {
            (0..j).filter_map(move |i| {
                let r = classifier.classify(&s[i], &s[j]);
                (!r.is_proper()).then_some((i, j, r))
            })
        })
        .collect();
    rels.sort_by_key(|&(i, j, _)| (i, j));
    let pair = |i: usize, j: usize| (s[i].labels.clone(), s[j].labels.clone());
    let overlapping: Vec<_> = rels
        .iter()
        .filter(|r| r.2 == PairRelation::InteriorOverlap)
        .map(|r| pair(r.0, r.1))
        .collect();
    let improper: Vec<_> = rels
        .iter()
        .filter(|r| r.2 == PairRelation::ImproperBoundary)
        .map(|r| pair(r.0, r.1))
        .collect();
    let volume = family.volume();
    let expected_volume = config.total_volume().expect("configuration is full-dimensional");
    let mut reasons = Vec::new();
    if let Some((a, b)) = overlapping.first() {
        reasons.push(format!(
            "{} overlapping pairs, first {a:?} / {b:?}",
            overlapping.len()
        ));
    }
    if volume != expected_volume {
        reasons.push(format!(
            "volume {} differs from hull volume {} (deficit {})",
            exactgeom::format_rat(&volume),
            exactgeom::format_rat(&expected_volume),
            exactgeom::format_rat(&(&expected_volume - &volume))
        ));
    }
    if s.is_empty() {
        reasons.push("empty family".into());
    }
    let status = if !reasons.is_empty() {
        Status::Invalid
    } else if improper.is_empty() {
        Status::Triangulation
    } else {
        if let Some((a, b)) = improper.first() {
            reasons.push(format!(
                "{} improper pairs, first {a:?} / {b:?}",
                improper.len()
            ));
        }
        Status::Dissection
    };
    Validation {
        status,
        overlapping,
        improper,
        volume,
        expected_volume,
        reasons,
    }
}

/// A connected set of coplanar facets of the family that overlap improperly.
#[derive(Clone, Debug, Serialize)]
pub struct MismatchedRegion {
    pub hyperplane: AffineFunctional,
    #[serde(skip)]
    pub plane: IntHyperplane,
    /// Every (d-1)-simplex in the component, sorted.
    pub members: Vec<Vec<usize>>,
    /// Members that are facets of simplices on the positive side.
    #[serde(rename = "sideA")]
    pub side_a: Vec<Vec<usize>>,
    #[serde(rename = "sideB")]
    pub side_b: Vec<Vec<usize>>,
    /// Cyclic vertex order of the polygon (d = 3 only).
    pub polygon: Option<Vec<usize>>,
    /// Number of vertices of the region.
    pub k: usize,
}

/// Mismatched regions of a dissection.
///
/// In dimension 3 every region also gets its polygon structure, and the
/// convexity, covering and edge-disjointness properties are checked; a
/// violation is reported as a consistency error.
pub fn mismatched_regions(family: &SimplexFamily) -> Result<Vec<MismatchedRegion>> {
    if !family.status.is_dissection() {
        return structural(format!(
            "mismatched regions need a validated dissection, status is {:?}",
            family.status
        ));
    }
    let config = &family.config;
    let d = config.dim();
    // facet -> side sign of the simplices carrying it
    let mut facets: BTreeMap<Vec<usize>, BTreeSet<i8>> = BTreeMap::new();
    let mut planes: BTreeMap<IntHyperplane, Vec<Vec<usize>>> = BTreeMap::new();
    for s in &family.simplices {
        for i in 0..=d {
            let mut face = s.labels.clone();
            let apex = face.remove(i);
            let plane = config.plane_through(&face).expect("facet of a simplex spans");
            let side = plane.eval(config.int_coords(apex)).signum();
            let side = if side.is_positive() { 1 } else { -1 };
            let entry = facets.entry(face.clone()).or_default();
            if entry.is_empty() {
                planes.entry(plane).or_default().push(face);
            }
            entry.insert(side);
        }
    }
    let mut regions = Vec::new();
    for (plane, members) in planes {
        if members.len() < 2 {
            continue;
        }
        let drop = plane.normal.iter().position(|c| !c.is_zero()).unwrap();
        let axes: Vec<usize> = (0..d).filter(|&a| a != drop).collect();
        let proj = |l: usize| -> Vec<BigInt> {
            axes.iter().map(|&a| config.int_coords(l)[a].clone()).collect()
        };
        let m = members.len();
        let mut uf: Vec<usize> = (0..m).collect();
        fn root(uf: &mut [usize], mut x: usize) -> usize {
            while uf[x] != x {
                uf[x] = uf[uf[x]];
                x = uf[x];
            }
            x
        }
        let projected: Vec<Vec<Vec<BigInt>>> = members
            .iter()
            .map(|f| f.iter().map(|&l| proj(l)).collect())
            .collect();
        for (i, j) in (0..m).tuple_combinations() {
            let sep = if d == 1 {
                ring::Separation::Weak
            } else {
                ring::separation(&projected[i], &projected[j]).expect("BigInt")
            };
            if sep == ring::Separation::Overlap {
                let (a, b) = (root(&mut uf, i), root(&mut uf, j));
                uf[a] = b;
            }
        }
        let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for i in 0..m {
            let r = root(&mut uf, i);
            comps.entry(r).or_default().push(i);
        }
        for comp in comps.into_values().filter(|c| c.len() > 1) {
            let mut region_members: Vec<Vec<usize>> =
                comp.iter().map(|&i| members[i].clone()).collect();
            region_members.sort();
            let (mut side_a, mut side_b) = (Vec::new(), Vec::new());
            for f in &region_members {
                let sides = &facets[f];
                if sides.len() != 1 {
                    log::warn!("facet {f:?} is carried from both sides and overlaps improperly");
                    return Err(Error::Consistency(format!(
                        "facet {f:?} of a mismatched region has simplices on both sides"
                    )));
                }
                if sides.contains(&1) {
                    side_a.push(f.clone());
                } else {
                    side_b.push(f.clone());
                }
            }
            let labels: BTreeSet<usize> = region_members.iter().flatten().copied().collect();
            let polygon = if d == 3 {
                let pts: Vec<(usize, Vec<BigInt>)> =
                    labels.iter().map(|&l| (l, proj(l))).collect();
                Some(convex_polygon(&pts))
            } else {
                None
            };
            regions.push(MismatchedRegion {
                hyperplane: config.functional(&plane),
                plane: plane.clone(),
                members: region_members,
                side_a,
                side_b,
                polygon,
                k: labels.len(),
            });
        }
    }
    if d == 3 {
        let hull = config.convex_hull()?;
        for r in &regions {
            check_polygon_region(config, &hull, r)?;
        }
        check_disjoint_regions(config, &regions)?;
    }
    Ok(regions)
}

/// Strictly convex hull of projected 2D points, counter-clockwise, starting
/// from the lexicographically smallest point.
fn convex_polygon(pts: &[(usize, Vec<BigInt>)]) -> Vec<usize> {
    let mut p: Vec<&(usize, Vec<BigInt>)> = pts.iter().collect();
    p.sort_by(|a, b| a.1.cmp(&b.1));
    let cross = |o: &[BigInt], a: &[BigInt], b: &[BigInt]| -> BigInt {
        (&a[0] - &o[0]) * (&b[1] - &o[1]) - (&a[1] - &o[1]) * (&b[0] - &o[0])
    };
    let mut lower: Vec<&(usize, Vec<BigInt>)> = Vec::new();
    for q in &p {
        while lower.len() >= 2
            && !cross(&lower[lower.len() - 2].1, &lower[lower.len() - 1].1, &q.1).is_positive()
        {
            lower.pop();
        }
        lower.push(q);
    }
    let mut upper: Vec<&(usize, Vec<BigInt>)> = Vec::new();
    for q in p.iter().rev() {
        while upper.len() >= 2
            && !cross(&upper[upper.len() - 2].1, &upper[upper.len() - 1].1, &q.1).is_positive()
        {
            upper.pop();
        }
        upper.push(q);
    }
    lower.pop();
    upper.pop();
    lower.into_iter().chain(upper).map(|q| q.0).collect()
}

fn check_polygon_region(config: &PointConfiguration, hull: &Hull, r: &MismatchedRegion) -> Result<()> {
    let fail = |msg: String| Err(Error::Consistency(format!("region {:?}: {msg}", r.members)));
    let poly = r.polygon.as_ref().expect("d = 3");
    if poly.len() != r.k {
        return fail(format!("only {} of {} vertices are polygon corners", poly.len(), r.k));
    }
    if let Some(v) = poly.iter().find(|&&v| !hull.is_vertex[v]) {
        return fail(format!("corner {v} is not a vertex of the polytope"));
    }
    // area in the projection, doubled
    let proj_area = |tri: &[usize]| -> BigInt {
        let pts: Vec<Vec<BigInt>> = tri
            .iter()
            .map(|&l| {
                let drop = r.plane.normal.iter().position(|c| !c.is_zero()).unwrap();
                (0..3)
                    .filter(|&a| a != drop)
                    .map(|a| config.int_coords(l)[a].clone())
                    .collect()
            })
            .collect();
        ring::homog_det(&pts).expect("BigInt").abs()
    };
    let fan: Vec<Vec<usize>> = (1..poly.len() - 1)
        .map(|i| vec![poly[0], poly[i], poly[i + 1]])
        .collect();
    let total: BigInt = fan.iter().map(|t| proj_area(t)).sum();
    for (name, side) in [("A", &r.side_a), ("B", &r.side_b)] {
        let area: BigInt = side.iter().map(|t| proj_area(t)).sum();
        if area != total {
            return fail(format!("side {name} does not tile the polygon"));
        }
    }
    let boundary: BTreeSet<(usize, usize)> = (0..poly.len())
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % poly.len()]);
            (a.min(b), a.max(b))
        })
        .collect();
    let interior = |side: &[Vec<usize>]| -> BTreeSet<(usize, usize)> {
        side.iter()
            .flat_map(|t| t.iter().copied().tuple_combinations::<(usize, usize)>())
            .filter(|e| !boundary.contains(e))
            .collect()
    };
    let shared: Vec<_> = interior(&r.side_a)
        .intersection(&interior(&r.side_b))
        .copied()
        .collect();
    if !shared.is_empty() {
        return fail(format!("sides share interior edges {shared:?}"));
    }
    Ok(())
}

fn check_disjoint_regions(config: &PointConfiguration, regions: &[MismatchedRegion]) -> Result<()> {
    for (a, b) in regions.iter().tuple_combinations() {
        for (s, t) in a.members.iter().cartesian_product(&b.members) {
            let ps: Vec<_> = s.iter().map(|&l| config.point(l)).collect();
            let pt: Vec<_> = t.iter().map(|&l| config.point(l)).collect();
            if exactgeom::relative_interiors_meet(&ps, &pt)? {
                return Err(Error::Consistency(format!(
                    "regions {:?} and {:?} overlap",
                    a.members, b.members
                )));
            }
        }
    }
    Ok(())
}

/// Vertex and interior-edge counts of a 3-dimensional family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct EulerAudit {
    /// Used labels on the boundary of the polytope.
    pub n: usize,
    /// Used labels in the interior.
    pub n_prime: usize,
    /// Edges whose relative interior lies in the interior of the polytope.
    pub e_i: usize,
    pub tetra_count: usize,
}

impl EulerAudit {
    pub fn holds(&self) -> bool {
        self.tetra_count + self.n_prime + 3 == self.n + self.e_i
    }
}

/// Counts without asserting the identity; works for any 3-dimensional family.
pub fn edge_counts(family: &SimplexFamily, hull: &Hull) -> EulerAudit {
    let interior: BTreeSet<usize> = hull.interior_labels().into_iter().collect();
    let used: BTreeSet<usize> = family.simplices.iter().flat_map(|s| s.labels.clone()).collect();
    let edges: BTreeSet<(usize, usize)> = family
        .simplices
        .iter()
        .flat_map(|s| s.labels.iter().copied().tuple_combinations::<(usize, usize)>())
        .collect();
    let e_i = edges
        .iter()
        .filter(|&&(a, b)| !hull.on_common_facet(&[a, b]))
        .count();
    let n_prime = used.iter().filter(|l| interior.contains(l)).count();
    EulerAudit {
        n: used.len() - n_prime,
        n_prime,
        e_i,
        tetra_count: family.size(),
    }
}

/// `|T| = n + e_i - n' - 3` for a triangulation of a 3-polytope.
pub fn euler_audit(family: &SimplexFamily) -> Result<EulerAudit> {
    if family.config.dim() != 3 {
        return structural("the edge identity is stated for 3-polytopes");
    }
    if family.status != Status::Triangulation {
        return structural(format!("expected a triangulation, status is {:?}", family.status));
    }
    let audit = edge_counts(family, &family.config.convex_hull()?);
    if !audit.holds() {
        return Err(Error::Consistency(format!("edge identity fails: {audit:?}")));
    }
    Ok(audit)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Bounds {
    pub lower: usize,
    pub upper: usize,
    pub ok: bool,
}

/// `n - 2 <= |D| <= C(n - 2, 2)` with n the number of polytope vertices.
pub fn check_bounds(family: &SimplexFamily) -> Result<Bounds> {
    if family.config.dim() != 3 {
        return structural("size bounds are stated for 3-polytopes");
    }
    if family.status != Status::Dissection {
        return structural(format!(
            "expected a mismatching dissection, status is {:?}",
            family.status
        ));
    }
    let bounds = bounds_for(&family.config.convex_hull()?, family.size());
    if !bounds.ok {
        return Err(Error::Consistency(format!(
            "size {} outside [{}, {}]",
            family.size(),
            bounds.lower,
            bounds.upper
        )));
    }
    Ok(bounds)
}

fn bounds_for(hull: &Hull, size: usize) -> Bounds {
    let n = hull.vertices().len();
    let lower = n.saturating_sub(2);
    let upper = binomial(n.saturating_sub(2), 2);
    Bounds {
        lower,
        upper,
        ok: lower <= size && size <= upper,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RegionReport {
    pub k: usize,
    pub hyperplane: AffineFunctional,
    #[serde(rename = "sideA")]
    pub side_a: Vec<Vec<usize>>,
    #[serde(rename = "sideB")]
    pub side_b: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FamilyReport {
    pub status: Status,
    pub size: usize,
    pub n: Option<usize>,
    pub n_prime: Option<usize>,
    pub e_i: Option<usize>,
    pub regions: Vec<RegionReport>,
    pub bounds: Option<Bounds>,
    pub reasons: Vec<String>,
}

/// Validates the family and gathers everything the JSON report carries.
pub fn report(family: &mut SimplexFamily) -> Result<FamilyReport> {
    let v = family.validate();
    let config = family.config.clone();
    let (mut n, mut n_prime, mut e_i, mut bounds) = (None, None, None, None);
    if config.dim() == 3 {
        let hull = config.convex_hull()?;
        let counts = edge_counts(family, &hull);
        n = Some(counts.n);
        n_prime = Some(counts.n_prime);
        e_i = Some(counts.e_i);
        match v.status {
            Status::Triangulation => {
                euler_audit(family)?;
            }
            Status::Dissection => bounds = Some(check_bounds(family)?),
            _ => bounds = Some(bounds_for(&hull, family.size())),
        }
    }
    let regions = if v.status.is_dissection() {
        mismatched_regions(family)?
            .into_iter()
            .map(|r| RegionReport {
                k: r.k,
                hyperplane: r.hyperplane,
                side_a: r.side_a,
                side_b: r.side_b,
            })
            .collect()
    } else {
        Vec::new()
    };
    Ok(FamilyReport {
        status: v.status,
        size: family.size(),
        n,
        n_prime,
        e_i,
        regions,
        bounds,
        reasons: v.reasons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::rat;

    fn cube() -> Arc<PointConfiguration> {
        let rows: Vec<Vec<i64>> = (0..8)
            .map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1])
            .collect();
        Arc::new(PointConfiguration::from_ints(&rows).unwrap())
    }

    #[test]
    fn single_simplex_is_a_triangulation() {
        let c = Arc::new(
            PointConfiguration::from_ints(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
                .unwrap(),
        );
        let mut f = SimplexFamily::new(c, &[vec![0, 1, 2, 3]]).unwrap();
        assert_eq!(f.validate().status, Status::Triangulation);
        let audit = euler_audit(&f).unwrap();
        assert_eq!((audit.n, audit.n_prime, audit.e_i, audit.tetra_count), (4, 0, 0, 1));
        assert!(mismatched_regions(&f).unwrap().is_empty());
    }

    #[test]
    fn cube_corner_triangulation() {
        // corner cuts around the 0-7 diagonal plus the central tetrahedron
        let c = cube();
        let sets = vec![
            vec![0, 1, 2, 4],
            vec![1, 2, 3, 7],
            vec![1, 4, 5, 7],
            vec![2, 4, 6, 7],
            vec![1, 2, 4, 7],
        ];
        let mut f = SimplexFamily::new(c.clone(), &sets).unwrap();
        assert_eq!(f.validate().status, Status::Triangulation);
        let audit = euler_audit(&f).unwrap();
        assert_eq!(audit.e_i, 0);
        let mut short = SimplexFamily::new(c, &sets[..4]).unwrap();
        let v = short.validate();
        assert_eq!(v.status, Status::Invalid);
        assert_eq!(v.deficit(), rat(1, 3));
    }

    #[test]
    fn overlap_is_invalid() {
        let c = cube();
        let mut f = SimplexFamily::new(c, &[vec![0, 1, 2, 4], vec![0, 1, 2, 7]]).unwrap();
        let v = f.validate();
        assert_eq!(v.status, Status::Invalid);
        assert_eq!(v.overlapping.len(), 1);
    }
}
