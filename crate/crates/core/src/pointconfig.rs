//! Labeled point configurations, hulls, circuits and total volume.
//!
//! Coordinates are kept twice: as rationals, and as integers after scaling
//! by the common denominator `L`. Every predicate runs on the integer copy,
//! first in checked `i128` and then in `BigInt` if that overflows.

use std::collections::{BTreeMap, HashMap};

use itertools::Itertools;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{structural, Error, Result};
use crate::exactgeom::ring;
use crate::exactgeom::{factorial, format_rat, parse_rat, AffineFunctional, Point, Rat};

/// Largest configuration supported; label sets are packed into `u128` masks.
pub const MAX_POINTS: usize = 128;

#[derive(Clone, Debug)]
pub struct PointConfiguration {
    dim: usize,
    points: Vec<Point>,
    scale: BigInt,
    ints: Vec<Vec<BigInt>>,
    small: Option<Vec<Vec<i128>>>,
}

/// A hyperplane `normal . x + offset = 0` over the scaled integer coordinates,
/// primitive and oriented by construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct IntHyperplane {
    pub normal: Vec<BigInt>,
    pub offset: BigInt,
}

impl IntHyperplane {
    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        self.normal
            .iter()
            .zip(x)
            .fold(self.offset.clone(), |acc, (a, b)| acc + a * b)
    }

    fn primitive(mut self) -> Self {
        let g = self
            .normal
            .iter()
            .fold(self.offset.clone(), |acc, v| acc.gcd(v));
        if !g.is_zero() && !g.is_one() {
            for v in self.normal.iter_mut() {
                *v /= &g;
            }
            self.offset /= &g;
        }
        self
    }

    fn negated(self) -> Self {
        IntHyperplane {
            normal: self.normal.into_iter().map(|v| -v).collect(),
            offset: -self.offset,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Facet {
    /// Every label on the facet's hyperplane, sorted.
    pub vertex_labels: Vec<usize>,
    /// Nonnegative on the configuration, zero exactly on `vertex_labels`.
    pub inequality: AffineFunctional,
    pub plane: IntHyperplane,
}

#[derive(Clone, Debug)]
pub struct Hull {
    pub facets: Vec<Facet>,
    pub is_vertex: Vec<bool>,
}

impl Hull {
    pub fn vertices(&self) -> Vec<usize> {
        (0..self.is_vertex.len()).filter(|&i| self.is_vertex[i]).collect()
    }

    /// Labels lying on no facet.
    pub fn interior_labels(&self) -> Vec<usize> {
        let mut on = vec![false; self.is_vertex.len()];
        for f in &self.facets {
            for &v in &f.vertex_labels {
                on[v] = true;
            }
        }
        (0..on.len()).filter(|&i| !on[i]).collect()
    }

    /// Is the label set contained in a single facet?
    pub fn on_common_facet(&self, labels: &[usize]) -> bool {
        self.facets
            .iter()
            .any(|f| labels.iter().all(|l| f.vertex_labels.binary_search(l).is_ok()))
    }
}

/// A signed minimal affine dependency. The smallest label is always positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Circuit {
    pub positive: Vec<usize>,
    pub negative: Vec<usize>,
}

impl PointConfiguration {
    pub fn new(dim: usize, points: Vec<Point>) -> Result<Self> {
        if dim == 0 {
            return structural("dimension must be positive");
        }
        if points.len() > MAX_POINTS {
            return structural(format!("at most {MAX_POINTS} points are supported"));
        }
        if let Some(i) = points.iter().position(|p| p.dim() != dim) {
            return structural(format!("point {i} has {} coordinates, expected {dim}", points[i].dim()));
        }
        if points.len() < dim + 1 {
            return Err(Error::Degenerate(format!(
                "{} points cannot span dimension {dim}",
                points.len()
            )));
        }
        let scale = points
            .iter()
            .flat_map(|p| p.0.iter())
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let ints: Vec<Vec<BigInt>> = points
            .iter()
            .map(|p| p.0.iter().map(|v| v.numer() * (&scale / v.denom())).collect())
            .collect();
        for (i, j) in (0..ints.len()).tuple_combinations() {
            if ints[i] == ints[j] {
                return structural(format!("points {i} and {j} coincide"));
            }
        }
        let small = ints
            .iter()
            .map(|p| p.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>())
            .collect();
        let config = PointConfiguration {
            dim,
            points,
            scale,
            ints,
            small,
        };
        let all: Vec<usize> = (0..config.len()).collect();
        if config.affine_rank(&all) != dim + 1 {
            return Err(Error::Degenerate("points do not span the ambient space".into()));
        }
        Ok(config)
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        let dim = rows.first().map_or(0, |r| r.len());
        Self::new(dim, rows.iter().map(|r| Point::from_ints(r)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, i: usize) -> &Point {
        &self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Common denominator `L` of all coordinates.
    pub fn scale(&self) -> &BigInt {
        &self.scale
    }

    pub fn int_coords(&self, i: usize) -> &[BigInt] {
        &self.ints[i]
    }

    pub(crate) fn check_labels(&self, labels: &[usize]) -> Result<()> {
        match labels.iter().find(|&&l| l >= self.len()) {
            Some(l) => structural(format!("label {l} out of range 0..{}", self.len())),
            None => Ok(()),
        }
    }

    /// Scaled coordinates as `i128`, when they fit.
    pub(crate) fn small_coords(&self) -> Option<&[Vec<i128>]> {
        self.small.as_deref()
    }

    /// Runs an integer kernel on the scaled coordinates of `labels`.
    pub fn kernel<R>(
        &self,
        labels: &[usize],
        f: impl Fn(&[Vec<i128>]) -> Option<R>,
        g: impl Fn(&[Vec<BigInt>]) -> Option<R>,
    ) -> R {
        if let Some(small) = &self.small {
            let pts: Vec<Vec<i128>> = labels.iter().map(|&l| small[l].clone()).collect();
            if let Some(r) = f(&pts) {
                return r;
            }
        }
        let pts: Vec<Vec<BigInt>> = labels.iter().map(|&l| self.ints[l].clone()).collect();
        g(&pts).expect("BigInt arithmetic cannot overflow")
    }

    /// `det[(1, p_0); ...; (1, p_d)]` in scaled coordinates.
    pub fn homog_det(&self, labels: &[usize]) -> BigInt {
        debug_assert_eq!(labels.len(), self.dim + 1);
        self.kernel(
            labels,
            |p| ring::homog_det(p).map(BigInt::from),
            |p| ring::homog_det(p),
        )
    }

    pub fn orientation(&self, labels: &[usize]) -> i8 {
        if let (3, Some(small), [a, b, c, d]) = (self.dim, &self.small, labels) {
            if let Some(v) = ring::det3_diff(&small[*a], &small[*b], &small[*c], &small[*d]) {
                return v.signum() as i8;
            }
        }
        self.kernel(
            labels,
            |p| ring::homog_det(p).map(|v| v.signum() as i8),
            |p| ring::homog_det(p).map(|v| ring::ExactInt::signum(&v)),
        )
    }

    /// `|homog_det|`: the volume in units of `1 / (d! L^d)`.
    pub fn nvol(&self, labels: &[usize]) -> BigInt {
        self.homog_det(labels).abs()
    }

    /// Converts an `nvol`-scaled quantity back to a true volume.
    pub fn volume_of_nvol(&self, nvol: &BigInt) -> Rat {
        let den = factorial(self.dim) * num_traits::pow(self.scale.clone(), self.dim);
        Rat::new(nvol.clone(), den)
    }

    pub fn simplex_volume(&self, labels: &[usize]) -> Result<Rat> {
        if labels.len() != self.dim + 1 {
            return structural(format!(
                "a {}-simplex needs {} labels, got {}",
                self.dim,
                self.dim + 1,
                labels.len()
            ));
        }
        self.check_labels(labels)?;
        Ok(self.volume_of_nvol(&self.nvol(labels)))
    }

    /// Rank of the homogenized points, i.e. affine dimension plus one.
    pub fn affine_rank(&self, labels: &[usize]) -> usize {
        let homog = |p: &[Vec<BigInt>]| -> Vec<Vec<BigInt>> {
            p.iter()
                .map(|r| std::iter::once(BigInt::one()).chain(r.iter().cloned()).collect())
                .collect()
        };
        self.kernel(
            labels,
            |p| {
                let m: Vec<Vec<i128>> = p
                    .iter()
                    .map(|r| std::iter::once(1).chain(r.iter().copied()).collect())
                    .collect();
                ring::rank(m)
            },
            |p| ring::rank(homog(p)),
        )
    }

    /// Signs of the affine dependency on `labels` if they form a circuit.
    pub fn circuit_signs(&self, labels: &[usize]) -> Option<Vec<i8>> {
        self.kernel(labels, ring::circuit_signs, ring::circuit_signs)
    }

    /// The hyperplane through the d points `face`, positive on `side`.
    /// Returns `None` if the face is not spanning or `side` lies on it.
    pub fn hyperplane(&self, face: &[usize], side: usize) -> Option<IntHyperplane> {
        let h = self.plane_through(face)?;
        match h.eval(&self.ints[side]).sign() {
            num_bigint::Sign::Plus => Some(h),
            num_bigint::Sign::Minus => Some(h.negated()),
            num_bigint::Sign::NoSign => None,
        }
    }

    /// The hyperplane spanned by the d points `face`, primitive, with its
    /// first nonzero normal coordinate positive.
    pub fn plane_through(&self, face: &[usize]) -> Option<IntHyperplane> {
        let base = &self.ints[face[0]];
        let dirs: Vec<Vec<BigInt>> = face[1..]
            .iter()
            .map(|&l| self.ints[l].iter().zip(base).map(|(a, b)| a - b).collect())
            .collect();
        let refs: Vec<&[BigInt]> = dirs.iter().map(|v| v.as_slice()).collect();
        let normal = if self.dim == 1 {
            vec![BigInt::one()]
        } else {
            ring::cross_normal(&refs).expect("BigInt")
        };
        if normal.iter().all(|c| c.is_zero()) {
            return None;
        }
        let offset = -ring::dot(&normal, base).expect("BigInt");
        let h = IntHyperplane { normal, offset }.primitive();
        let lead = h.normal.iter().find(|c| !c.is_zero()).expect("nonzero normal");
        Some(if lead.is_negative() { h.negated() } else { h })
    }

    /// Rewrites an integer hyperplane as a functional on the rational coordinates.
    pub fn functional(&self, h: &IntHyperplane) -> AffineFunctional {
        AffineFunctional {
            coeffs: h
                .normal
                .iter()
                .map(|c| Rat::from_integer(c * &self.scale))
                .collect(),
            constant: Rat::from_integer(h.offset.clone()),
        }
    }

    /// Placing triangulation for the given insertion order, as sorted label sets.
    ///
    /// Lower-dimensional prefixes are triangulated inside their affine hull
    /// (using a coordinate projection that is injective on it); a point that
    /// raises the dimension is coned to every simplex.
    pub fn placing(&self, order: &[usize]) -> Result<Vec<Vec<usize>>> {
        self.check_labels(order)?;
        let mut simplices: Vec<Vec<usize>> = Vec::new();
        let mut basis: Vec<usize> = Vec::new();
        let mut axes: Vec<usize> = Vec::new();
        for &p in order {
            if basis.is_empty() {
                basis.push(p);
                simplices.push(vec![p]);
                continue;
            }
            let mut probe = basis.clone();
            probe.push(p);
            if self.affine_rank(&probe) > basis.len() {
                basis.push(p);
                for s in simplices.iter_mut() {
                    s.push(p);
                    s.sort_unstable();
                }
                axes = self.projection_axes(&basis);
                continue;
            }
            let mut added = Vec::new();
            for (face, opp) in boundary_faces(&simplices) {
                let mut with_opp = face.clone();
                with_opp.push(opp);
                let mut with_p = face.clone();
                with_p.push(p);
                if self.projected_orientation(&with_opp, &axes)
                    * self.projected_orientation(&with_p, &axes)
                    < 0
                {
                    with_p.sort_unstable();
                    added.push(with_p);
                }
            }
            simplices.extend(added);
        }
        if basis.len() != self.dim + 1 {
            return Err(Error::Degenerate(format!(
                "placing order spans only dimension {}",
                basis.len().saturating_sub(1)
            )));
        }
        simplices.sort();
        Ok(simplices)
    }

    fn projection_axes(&self, basis: &[usize]) -> Vec<usize> {
        let k = basis.len() - 1;
        let diffs: Vec<Vec<BigInt>> = basis[1..]
            .iter()
            .map(|&l| {
                self.ints[l]
                    .iter()
                    .zip(&self.ints[basis[0]])
                    .map(|(a, b)| a - b)
                    .collect()
            })
            .collect();
        let mut axes = Vec::with_capacity(k);
        for c in 0..self.dim {
            let mut trial = axes.clone();
            trial.push(c);
            let m: Vec<Vec<BigInt>> = trial
                .iter()
                .map(|&a| diffs.iter().map(|d| d[a].clone()).collect())
                .collect();
            if ring::rank(m).expect("BigInt") == trial.len() {
                axes = trial;
                if axes.len() == k {
                    break;
                }
            }
        }
        axes
    }

    fn projected_orientation(&self, labels: &[usize], axes: &[usize]) -> i8 {
        let pts: Vec<Vec<BigInt>> = labels
            .iter()
            .map(|&l| axes.iter().map(|&a| self.ints[l][a].clone()).collect())
            .collect();
        ring::ExactInt::signum(&ring::homog_det(&pts).expect("BigInt"))
    }

    pub fn convex_hull(&self) -> Result<Hull> {
        let order: Vec<usize> = (0..self.len()).collect();
        let simplices = self.placing(&order)?;
        let mut planes: BTreeMap<IntHyperplane, ()> = BTreeMap::new();
        for (face, opp) in boundary_faces(&simplices) {
            let h = self
                .hyperplane(&face, opp)
                .ok_or_else(|| Error::Consistency("flat boundary face".into()))?;
            planes.insert(h, ());
        }
        let mut facets: Vec<Facet> = planes
            .into_keys()
            .map(|plane| {
                let vertex_labels = (0..self.len())
                    .filter(|&l| plane.eval(&self.ints[l]).is_zero())
                    .collect();
                Facet {
                    vertex_labels,
                    inequality: self.functional(&plane),
                    plane,
                }
            })
            .collect();
        facets.sort_by(|a, b| a.vertex_labels.cmp(&b.vertex_labels));
        let is_vertex = (0..self.len())
            .map(|l| {
                let normals: Vec<Vec<BigInt>> = facets
                    .iter()
                    .filter(|f| f.vertex_labels.binary_search(&l).is_ok())
                    .map(|f| f.plane.normal.clone())
                    .collect();
                !normals.is_empty() && ring::rank(normals).expect("BigInt") == self.dim
            })
            .collect();
        Ok(Hull { facets, is_vertex })
    }

    /// Volume of the convex hull in `nvol` units.
    pub fn total_nvol(&self) -> Result<BigInt> {
        let order: Vec<usize> = (0..self.len()).collect();
        self.total_nvol_with_order(&order)
    }

    pub fn total_nvol_with_order(&self, order: &[usize]) -> Result<BigInt> {
        Ok(self
            .placing(order)?
            .iter()
            .map(|s| self.nvol(s))
            .fold(BigInt::zero(), |a, b| a + b))
    }

    pub fn total_volume(&self) -> Result<Rat> {
        Ok(self.volume_of_nvol(&self.total_nvol()?))
    }

    /// All circuits supported inside `support`, one representative each.
    pub fn circuits_within(&self, support: &[usize]) -> Vec<Circuit> {
        let mut support = support.to_vec();
        support.sort_unstable();
        support.dedup();
        let mut out = Vec::new();
        for k in 3..=(self.dim + 2).min(support.len()) {
            for sub in support.iter().copied().combinations(k) {
                if let Some(signs) = self.circuit_signs(&sub) {
                    out.push(circuit_from_signs(&sub, &signs));
                }
            }
        }
        out
    }

    /// Parses the polytope text format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or(Error::Parse {
            line: 1,
            msg: "missing header".into(),
        })?;
        let head: Vec<&str> = header.split_whitespace().collect();
        let bad_header = || Error::Parse {
            line: hl,
            msg: format!("expected \"d n\", got {header:?}"),
        };
        if head.len() != 2 {
            return Err(bad_header());
        }
        let d: usize = head[0].parse().map_err(|_| bad_header())?;
        let n: usize = head[1].parse().map_err(|_| bad_header())?;
        let mut points = Vec::with_capacity(n);
        for (line, l) in lines {
            let coords = l
                .split_whitespace()
                .map(|t| parse_rat(t).map_err(|msg| Error::Parse { line, msg }))
                .collect::<Result<Vec<Rat>>>()?;
            if coords.len() != d {
                return Err(Error::Parse {
                    line,
                    msg: format!("expected {d} coordinates, got {}", coords.len()),
                });
            }
            points.push(Point(coords));
        }
        if points.len() != n {
            return Err(Error::Parse {
                line: text.lines().count(),
                msg: format!("header announces {n} points, found {}", points.len()),
            });
        }
        Self::new(d, points)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.dim, self.len());
        for p in &self.points {
            s.push_str(&p.0.iter().map(format_rat).join(" "));
            s.push('\n');
        }
        s
    }
}

pub(crate) fn circuit_from_signs(labels: &[usize], signs: &[i8]) -> Circuit {
    let flip = signs[0] < 0;
    let (mut positive, mut negative) = (Vec::new(), Vec::new());
    for (&l, &s) in labels.iter().zip(signs) {
        if (s > 0) != flip {
            positive.push(l);
        } else {
            negative.push(l);
        }
    }
    Circuit { positive, negative }
}

/// Faces of codimension one lying in exactly one simplex, with that
/// simplex's opposite vertex. Deterministic order.
pub fn boundary_faces(simplices: &[Vec<usize>]) -> Vec<(Vec<usize>, usize)> {
    let mut seen: HashMap<Vec<usize>, (usize, usize)> = HashMap::new();
    for s in simplices {
        for i in 0..s.len() {
            let mut face = s.clone();
            let opp = face.remove(i);
            seen.entry(face).and_modify(|e| e.0 += 1).or_insert((1, opp));
        }
    }
    let mut out: Vec<(Vec<usize>, usize)> = seen
        .into_iter()
        .filter(|(_, (c, _))| *c == 1)
        .map(|(f, (_, o))| (f, o))
        .collect();
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactgeom::{int, rat};

    fn cube() -> PointConfiguration {
        let rows: Vec<Vec<i64>> = (0..8)
            .map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1])
            .collect();
        PointConfiguration::from_ints(&rows).unwrap()
    }

    fn unit_simplex(d: usize) -> PointConfiguration {
        let mut rows = vec![vec![0i64; d]];
        for i in 0..d {
            let mut r = vec![0; d];
            r[i] = 1;
            rows.push(r);
        }
        PointConfiguration::from_ints(&rows).unwrap()
    }

    #[test]
    fn simplex_hull_and_volume() {
        let t = unit_simplex(3);
        let hull = t.convex_hull().unwrap();
        assert_eq!(hull.facets.len(), 4);
        assert!(hull.is_vertex.iter().all(|&v| v));
        assert_eq!(t.total_volume().unwrap(), rat(1, 6));
        assert_eq!(unit_simplex(5).total_volume().unwrap(), rat(1, 120));
    }

    #[test]
    fn cube_hull_and_volume() {
        let c = cube();
        let hull = c.convex_hull().unwrap();
        assert_eq!(hull.facets.len(), 6);
        assert!(hull.facets.iter().all(|f| f.vertex_labels.len() == 4));
        assert_eq!(c.total_volume().unwrap(), int(1));
        for f in &hull.facets {
            for p in c.points() {
                assert!(!f.inequality.eval(&p.0).is_negative());
            }
        }
    }

    #[test]
    fn interior_point_is_not_a_vertex() {
        let mut rows: Vec<Vec<i64>> = (0..8)
            .map(|i| vec![2 * (i & 1), 2 * ((i >> 1) & 1), 2 * ((i >> 2) & 1)])
            .collect();
        rows.push(vec![1, 1, 1]);
        rows.push(vec![1, 0, 0]);
        let c = PointConfiguration::from_ints(&rows).unwrap();
        let hull = c.convex_hull().unwrap();
        assert!(!hull.is_vertex[8]);
        assert!(!hull.is_vertex[9]);
        assert_eq!(hull.interior_labels(), vec![8]);
        assert_eq!(c.total_volume().unwrap(), int(8));
    }

    #[test]
    fn degenerate_input_is_rejected() {
        let rows = vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]];
        assert!(matches!(
            PointConfiguration::from_ints(&rows),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn quadrilateral_has_one_circuit() {
        let rows = vec![vec![0, 0, 0], vec![1, 0, 0], vec![1, 1, 0], vec![0, 1, 0], vec![0, 0, 1]];
        let c = PointConfiguration::from_ints(&rows).unwrap();
        let circuits = c.circuits_within(&[0, 1, 2, 3]);
        assert_eq!(
            circuits,
            vec![Circuit {
                positive: vec![0, 2],
                negative: vec![1, 3]
            }]
        );
    }

    #[test]
    fn generic_points_have_one_circuit() {
        let rows = vec![vec![0, 0, 0], vec![3, 0, 1], vec![0, 5, 2], vec![1, 1, 7], vec![2, 3, 4]];
        let c = PointConfiguration::from_ints(&rows).unwrap();
        assert_eq!(c.circuits_within(&[0, 1, 2, 3, 4]).len(), 1);
    }

    #[test]
    fn placing_is_order_independent_in_volume() {
        let c = cube();
        let a = c.total_nvol_with_order(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        let b = c.total_nvol_with_order(&[7, 0, 3, 5, 6, 1, 2, 4]).unwrap();
        assert_eq!(a, b);
        // coplanar prefix exercises the lower-dimensional phase
        let t = c.placing(&[0, 1, 2, 3, 4, 5, 6, 7]).unwrap();
        assert!(t.len() == 5 || t.len() == 6);
    }

    #[test]
    fn file_round_trip() {
        let text = "3 5\n0 0 0\n1/2 0 0\n0 1 0\n0 0 -7/3\n1 1 1\n";
        let c = PointConfiguration::parse(text).unwrap();
        assert_eq!(c.to_text(), text);
        let with_comments = "# tetra\n3 4 # header\n0 0 0\n1 0 0\n0 1 0\n\n0 0 1\n";
        assert_eq!(PointConfiguration::parse(with_comments).unwrap().len(), 4);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = PointConfiguration::parse("3 2\n0 0 0\n1 x 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        let err = PointConfiguration::parse("3 4\n0 0 0\n1 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }
}
