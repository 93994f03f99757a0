//! Full-dimensional simplices of a configuration and the four-way relation
//! between any two of them.
//!
//! Classification never solves an LP. Interiors are compared with the
//! Minkowski-difference separation test from [`ring::separation`]; when the
//! two simplices touch, a violating circuit (C+ inside one, C- inside the
//! other) decides whether the contact is a common face.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU8, Ordering};

use itertools::Itertools;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::exactgeom::ring::{self, Separation};
use crate::exactgeom::{strict_common_point, Feasibility, HalfspaceSystem, Rat};
use crate::pointconfig::PointConfiguration;

/// Largest number of candidate supports for which all circuits are precomputed.
const CIRCUIT_MAP_LIMIT: usize = 300_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Simplex {
    /// Sorted, d+1 labels.
    pub labels: Vec<usize>,
    /// Always positive.
    pub volume: Rat,
    /// `|homog_det|` on the scaled integer coordinates.
    pub nvol: BigInt,
    pub mask: u128,
}

impl Simplex {
    pub fn new(config: &PointConfiguration, labels: &[usize]) -> Result<Self> {
        let mut labels = labels.to_vec();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != config.dim() + 1 {
            return structural(format!(
                "a {}-simplex needs {} distinct labels, got {:?}",
                config.dim(),
                config.dim() + 1,
                labels
            ));
        }
        config.check_labels(&labels)?;
        let nvol = config.nvol(&labels);
        if nvol.sign() == num_bigint::Sign::NoSign {
            return Err(Error::Degenerate(format!("simplex {labels:?} is flat")));
        }
        Ok(Simplex {
            volume: config.volume_of_nvol(&nvol),
            mask: mask_of(&labels),
            labels,
            nvol,
        })
    }

    pub fn contains_label(&self, l: usize) -> bool {
        self.mask >> l & 1 == 1
    }
}

pub fn mask_of(labels: &[usize]) -> u128 {
    labels.iter().fold(0u128, |m, &l| m | 1u128 << l)
}

fn labels_of(mut mask: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize);
        mask &= mask - 1;
    }
    out
}

/// All full-dimensional simplices, in lexicographic label order.
pub fn enumerate_simplices(config: &PointConfiguration) -> Vec<Simplex> {
    let subsets: Vec<Vec<usize>> = (0..config.len()).combinations(config.dim() + 1).collect();
    subsets
        .into_par_iter()
        .filter_map(|s| Simplex::new(config, &s).ok())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum PairRelation {
    /// Closed simplices do not meet.
    Disjoint,
    /// They meet in a nonempty common face.
    CommonFace,
    /// Interiors are disjoint but the intersection is not a face of both.
    ImproperBoundary,
    InteriorOverlap,
}

impl PairRelation {
    fn code(self) -> u8 {
        match self {
            PairRelation::Disjoint => 1,
            PairRelation::CommonFace => 2,
            PairRelation::ImproperBoundary => 3,
            PairRelation::InteriorOverlap => 4,
        }
    }

    fn from_code(c: u8) -> Option<Self> {
        match c {
            1 => Some(PairRelation::Disjoint),
            2 => Some(PairRelation::CommonFace),
            3 => Some(PairRelation::ImproperBoundary),
            4 => Some(PairRelation::InteriorOverlap),
            _ => None,
        }
    }

    /// Legal inside a triangulation.
    pub fn is_proper(self) -> bool {
        matches!(self, PairRelation::Disjoint | PairRelation::CommonFace)
    }
}

/// Pair classifier bound to one configuration.
pub struct Classifier<'a> {
    config: &'a PointConfiguration,
    /// support mask -> positive-part mask, for every circuit of the configuration
    circuits: Option<HashMap<u128, u128>>,
}

impl<'a> Classifier<'a> {
    pub fn new(config: &'a PointConfiguration) -> Self {
        let n = config.len();
        let supports: usize = (3..=config.dim() + 2).map(|k| binomial(n, k)).sum();
        let circuits = (supports <= CIRCUIT_MAP_LIMIT).then(|| {
            (3..=(config.dim() + 2).min(n))
                .flat_map(|k| (0..n).combinations(k))
                .collect::<Vec<_>>()
                .into_par_iter()
                .filter_map(|sub| {
                    let signs = config.circuit_signs(&sub)?;
                    let c = crate::pointconfig::circuit_from_signs(&sub, &signs);
                    Some((mask_of(&sub), mask_of(&c.positive)))
                })
                .collect()
        });
        Classifier { config, circuits }
    }

    /// A classifier that computes circuits on demand.
    pub fn without_circuit_map(config: &'a PointConfiguration) -> Self {
        Classifier {
            config,
            circuits: None,
        }
    }

    pub fn config(&self) -> &'a PointConfiguration {
        self.config
    }

    fn positive_part(&self, support: u128) -> Option<u128> {
        match &self.circuits {
            Some(map) => map.get(&support).copied(),
            None => {
                let labels = labels_of(support);
                let signs = self.config.circuit_signs(&labels)?;
                let c = crate::pointconfig::circuit_from_signs(&labels, &signs);
                Some(mask_of(&c.positive))
            }
        }
    }

    pub fn classify(&self, a: &Simplex, b: &Simplex) -> PairRelation {
        let d = self.config.dim();
        if a.mask == b.mask {
            return PairRelation::InteriorOverlap;
        }
        let shared = a.mask & b.mask;
        if shared.count_ones() as usize == d {
            let face = labels_of(shared);
            let x = (a.mask & !shared).trailing_zeros() as usize;
            let y = (b.mask & !shared).trailing_zeros() as usize;
            let mut fx = face.clone();
            fx.push(x);
            let mut fy = face;
            fy.push(y);
            return if self.config.orientation(&fx) * self.config.orientation(&fy) < 0 {
                PairRelation::CommonFace
            } else {
                PairRelation::InteriorOverlap
            };
        }
        let sep = self
            .facet_separation(a, b)
            .or_else(|| self.facet_separation(b, a))
            .or_else(|| self.overlap_witness(a, b).then_some(Separation::Overlap))
            .unwrap_or_else(|| self.separation(a, b));
        match sep {
            Separation::Overlap => return PairRelation::InteriorOverlap,
            Separation::Strict => return PairRelation::Disjoint,
            Separation::Weak => {}
        }
        if self.violating_circuit(a.mask, b.mask).is_some() {
            PairRelation::ImproperBoundary
        } else if shared == 0 {
            PairRelation::Disjoint
        } else {
            PairRelation::CommonFace
        }
    }

    /// Separation by the plane of a facet of `a`, found with orientations alone.
    fn facet_separation(&self, a: &Simplex, b: &Simplex) -> Option<Separation> {
        let mut pts = Vec::with_capacity(a.labels.len());
        'facets: for k in 0..a.labels.len() {
            pts.clear();
            pts.extend(a.labels.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &l)| l));
            pts.push(a.labels[k]);
            let inside = self.config.orientation(&pts);
            let mut touches = false;
            for &v in &b.labels {
                if v != a.labels[k] && a.contains_label(v) {
                    touches = true;
                    continue;
                }
                *pts.last_mut().expect("facet plus one point") = v;
                match self.config.orientation(&pts) * inside {
                    0 => touches = true,
                    s if s > 0 => continue 'facets,
                    _ => {}
                }
            }
            return Some(if touches { Separation::Weak } else { Separation::Strict });
        }
        None
    }

    /// Looks for a point interior to both among the two centroids and their
    /// midpoint. `false` decides nothing.
    fn overlap_witness(&self, a: &Simplex, b: &Simplex) -> bool {
        let Some(small) = self.config.small_coords() else {
            return false;
        };
        let dim = self.config.dim();
        let sum = |s: &Simplex| -> Option<Vec<i128>> {
            let mut acc = vec![0i128; dim];
            for &l in &s.labels {
                for (x, y) in acc.iter_mut().zip(&small[l]) {
                    *x = x.checked_add(*y)?;
                }
            }
            Some(acc)
        };
        let (Some(sa), Some(sb)) = (sum(a), sum(b)) else {
            return false;
        };
        let k = (dim + 1) as i128;
        // point p / w as (w, p)
        let candidates = [
            (k, sa.clone()),
            (k, sb.clone()),
            (2 * k, sa.iter().zip(&sb).map(|(x, y)| x + y).collect()),
        ];
        candidates
            .iter()
            .any(|(w, p)| inside_scaled(small, a, *w, p) == Some(true) && inside_scaled(small, b, *w, p) == Some(true))
    }

    /// Full separation test; callers have already tried the facet planes.
    fn separation(&self, a: &Simplex, b: &Simplex) -> Separation {
        let n_a = a.labels.len();
        let mut all = a.labels.clone();
        all.extend_from_slice(&b.labels);
        if self.config.dim() == 3 {
            return self.config.kernel(
                &all,
                |p| ring::cross_edge_separation(&p[..n_a], &p[n_a..]),
                |p| ring::cross_edge_separation(&p[..n_a], &p[n_a..]),
            );
        }
        self.config.kernel(
            &all,
            |p| ring::separation(&p[..n_a], &p[n_a..]),
            |p| ring::separation(&p[..n_a], &p[n_a..]),
        )
    }

    /// A circuit with C+ in one simplex and C- in the other, if any.
    pub fn violating_circuit(&self, a: u128, b: u128) -> Option<(u128, u128)> {
        let union = a | b;
        let labels = labels_of(union);
        let max = (self.config.dim() + 2).min(labels.len());
        for k in 3..=max {
            for sub in labels.iter().copied().combinations(k) {
                let s = mask_of(&sub);
                if s & !a == 0 || s & !b == 0 {
                    continue;
                }
                let Some(pos) = self.positive_part(s) else {
                    continue;
                };
                let neg = s & !pos;
                if (pos & !a == 0 && neg & !b == 0) || (pos & !b == 0 && neg & !a == 0) {
                    return Some((pos, neg));
                }
            }
        }
        None
    }
}

/// Is `p / w` in the open simplex `s`? `None` on overflow.
fn inside_scaled(small: &[Vec<i128>], s: &Simplex, w: i128, p: &[i128]) -> Option<bool> {
    let scaled: Vec<Vec<i128>> = s
        .labels
        .iter()
        .map(|&l| small[l].iter().map(|x| x.checked_mul(w)).collect::<Option<Vec<_>>>())
        .collect::<Option<_>>()?;
    let det = |rows: &[&[i128]]| match rows {
        [a, b, c, d] => ring::det3_diff(a, b, c, d),
        _ => ring::homog_det(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()),
    };
    let mut rows: Vec<&[i128]> = scaled.iter().map(Vec::as_slice).collect();
    let full = det(&rows)?.signum();
    for k in 0..rows.len() {
        rows[k] = p;
        if det(&rows)?.signum() != full {
            return Some(false);
        }
        rows[k] = &scaled[k];
    }
    Some(true)
}

/// Classifies one pair from scratch.
pub fn classify_pair(config: &PointConfiguration, a: &Simplex, b: &Simplex) -> Result<PairRelation> {
    for s in [a, b] {
        config.check_labels(&s.labels)?;
        if s.labels.len() != config.dim() + 1 || config.nvol(&s.labels) != s.nvol {
            return structural(format!("simplex {:?} does not belong to this configuration", s.labels));
        }
    }
    Ok(Classifier::without_circuit_map(config).classify(a, b))
}

/// Interior test through the exact slack LP; slower, but yields a witness.
pub fn interior_overlap_lp(config: &PointConfiguration, a: &Simplex, b: &Simplex) -> Result<Feasibility> {
    let sys = |s: &Simplex| {
        let pts: Vec<_> = s.labels.iter().map(|&l| config.point(l)).collect();
        HalfspaceSystem::from_simplex(&pts)
    };
    strict_common_point(&sys(a)?, &sys(b)?)
}

/// Lazily filled symmetric table of pair relations.
pub struct RelationTable<'a> {
    classifier: Classifier<'a>,
    simplices: &'a [Simplex],
    codes: Vec<AtomicU8>,
}

impl<'a> RelationTable<'a> {
    pub fn new(config: &'a PointConfiguration, simplices: &'a [Simplex]) -> Self {
        Self::with_classifier(Classifier::new(config), simplices)
    }

    pub fn with_classifier(classifier: Classifier<'a>, simplices: &'a [Simplex]) -> Self {
        let n = simplices.len();
        let codes = (0..n * n.saturating_sub(1) / 2).map(|_| AtomicU8::new(0)).collect();
        RelationTable {
            classifier,
            simplices,
            codes,
        }
    }

    pub fn simplices(&self) -> &'a [Simplex] {
        self.simplices
    }

    pub fn classifier(&self) -> &Classifier<'a> {
        &self.classifier
    }

    pub fn len(&self) -> usize {
        self.simplices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.simplices.is_empty()
    }

    /// Number of stored pairs.
    pub fn pair_count(&self) -> usize {
        self.codes.len()
    }

    fn slot(i: usize, j: usize) -> usize {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        j * (j - 1) / 2 + i
    }

    pub fn get(&self, i: usize, j: usize) -> PairRelation {
        if i == j {
            return PairRelation::InteriorOverlap;
        }
        let slot = &self.codes[Self::slot(i, j)];
        if let Some(r) = PairRelation::from_code(slot.load(Ordering::Relaxed)) {
            return r;
        }
        let r = self.classifier.classify(&self.simplices[i], &self.simplices[j]);
        slot.store(r.code(), Ordering::Relaxed);
        r
    }

    /// Classifies every pair, in parallel.
    pub fn fill(&self) {
        (1..self.len()).into_par_iter().for_each(|j| {
            for i in 0..j {
                self.get(i, j);
            }
        });
    }

    /// Pairs (i < j) with the given relation, in order.
    pub fn pairs_with(&self, rel: PairRelation) -> Vec<(usize, usize)> {
        (1..self.len())
            .flat_map(|j| (0..j).map(move |i| (i, j)))
            .filter(|&(i, j)| self.get(i, j) == rel)
            .collect()
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

/// Parses the simplex text format into label lists.
pub fn parse_simplices(text: &str) -> Result<Vec<Vec<usize>>> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .map(|(line, l)| {
            l.split_whitespace()
                .map(|t| {
                    t.parse::<usize>().map_err(|_| Error::Parse {
                        line,
                        msg: format!("bad label {t:?}"),
                    })
                })
                .collect()
        })
        .collect()
}

pub fn format_simplices<'s>(simplices: impl IntoIterator<Item = &'s Vec<usize>>) -> String {
    simplices
        .into_iter()
        .map(|s| s.iter().join(" ") + "\n")
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube() -> PointConfiguration {
        let rows: Vec<Vec<i64>> = (0..8)
            .map(|i| vec![i & 1, (i >> 1) & 1, (i >> 2) & 1])
            .collect();
        PointConfiguration::from_ints(&rows).unwrap()
    }

    #[test]
    fn cube_has_58_simplices() {
        assert_eq!(enumerate_simplices(&cube()).len(), 58);
    }

    #[test]
    fn generic_points_give_all_subsets() {
        let c = PointConfiguration::from_ints(&[
            vec![0, 0, 0],
            vec![3, 0, 1],
            vec![0, 5, 2],
            vec![1, 1, 7],
            vec![2, 3, 4],
        ])
        .unwrap();
        assert_eq!(enumerate_simplices(&c).len(), 5);
    }

    #[test]
    fn basic_relations() {
        let c = PointConfiguration::from_ints(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 1, 1],
            vec![-1, -1, -1],
        ])
        .unwrap();
        let s = |l: &[usize]| Simplex::new(&c, l).unwrap();
        let t = s(&[0, 1, 2, 3]);
        assert_eq!(classify_pair(&c, &t, &t).unwrap(), PairRelation::InteriorOverlap);
        // shares facet 123, opposite sides
        assert_eq!(classify_pair(&c, &t, &s(&[1, 2, 3, 4])).unwrap(), PairRelation::CommonFace);
        // shares vertex 0 only, on the far side
        assert_eq!(classify_pair(&c, &t, &s(&[0, 5, 1, 2])).unwrap(), PairRelation::CommonFace);
    }

    #[test]
    fn crossing_diagonals_are_improper() {
        let c = cube();
        // diagonals 0-3 and 1-2 of the bottom face
        let a = Simplex::new(&c, &[0, 3, 1, 4]).unwrap();
        let b = Simplex::new(&c, &[1, 2, 0, 7]).unwrap();
        let r = classify_pair(&c, &a, &b).unwrap();
        assert_ne!(r, PairRelation::CommonFace);
        let a = Simplex::new(&c, &[0, 3, 1, 5]).unwrap();
        let b = Simplex::new(&c, &[1, 2, 0, 4]).unwrap();
        assert_eq!(classify_pair(&c, &a, &b).unwrap(), PairRelation::InteriorOverlap);
    }

    #[test]
    fn table_matches_direct_classification() {
        let c = cube();
        let simplices = enumerate_simplices(&c);
        let table = RelationTable::new(&c, &simplices);
        table.fill();
        let fresh = Classifier::without_circuit_map(&c);
        for j in 1..simplices.len() {
            for i in 0..j {
                assert_eq!(table.get(i, j), table.get(j, i));
                assert_eq!(table.get(i, j), fresh.classify(&simplices[i], &simplices[j]));
            }
        }
    }

    #[test]
    fn simplex_file_round_trip() {
        let text = "0 1 2 3\n1 2 3 4\n";
        let s = parse_simplices(text).unwrap();
        assert_eq!(format_simplices(&s), text);
        assert!(matches!(
            parse_simplices("0 1 2 3\n# c\n1 a 2 3\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
