//! Facet incidences and generic probe points for the search.

use fixedbitset::FixedBitSet;
use num_bigint::{BigInt, Sign};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::pointconfig::{Hull, IntHyperplane, PointConfiguration};
use crate::simplexrel::{mask_of, Simplex};

/// A rational point `num / den` in scaled integer coordinates, `den > 0`.
#[derive(Clone, Debug)]
pub(crate) struct Probe {
    num: Vec<BigInt>,
    den: BigInt,
}

pub(crate) struct Geometry {
    /// Facets of each simplex as `(facet id, side)`; side 0 is the positive
    /// side of the facet's canonical plane.
    pub facets_of: Vec<Vec<(u32, u8)>>,
    pub on_hull: Vec<bool>,
    planes: Vec<IntHyperplane>,
    /// Simplices having facet `f` on side `s`, at index `2 f + s`.
    pub sides: Vec<FixedBitSet>,
}

const WEIGHTS: [i64; 12] = [101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157];

impl Geometry {
    pub fn new(config: &PointConfiguration, hull: &Hull, simplices: &[Simplex]) -> Self {
        let n = simplices.len();
        let mut ids: FxHashMap<u128, u32> = FxHashMap::default();
        let mut planes: Vec<IntHyperplane> = Vec::new();
        let mut on_hull = Vec::new();
        let mut facets_of = Vec::with_capacity(n);
        for s in simplices {
            let mut fs = Vec::with_capacity(s.labels.len());
            for (k, &opp) in s.labels.iter().enumerate() {
                let face: Vec<usize> = s.labels.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &l)| l).collect();
                let id = *ids.entry(mask_of(&face)).or_insert_with(|| {
                    planes.push(config.plane_through(&face).expect("facet of a full simplex spans a hyperplane"));
                    on_hull.push(hull.on_common_facet(&face));
                    (planes.len() - 1) as u32
                });
                let side = match planes[id as usize].eval(config.int_coords(opp)).sign() {
                    Sign::Plus => 0,
                    _ => 1,
                };
                fs.push((id, side));
            }
            facets_of.push(fs);
        }
        let mut sides = vec![FixedBitSet::with_capacity(n); 2 * planes.len()];
        for (i, fs) in facets_of.iter().enumerate() {
            for &(f, s) in fs {
                sides[2 * f as usize + s as usize].insert(i);
            }
        }
        Geometry {
            facets_of,
            on_hull,
            planes,
            sides,
        }
    }

    fn eval(&self, f: u32, p: &Probe) -> Sign {
        let h = &self.planes[f as usize];
        let v = h.normal.iter().zip(&p.num).fold(&h.offset * &p.den, |acc, (a, b)| acc + a * b);
        v.sign()
    }

    /// Is `p` in the open simplex `s`?
    pub fn contains(&self, s: usize, p: &Probe) -> bool {
        self.facets_of[s].iter().all(|&(f, side)| {
            let want = if side == 0 { Sign::Plus } else { Sign::Minus };
            self.eval(f, p) == want
        })
    }

    /// An interior point of `s` on none of the facet planes.
    pub fn probe(&self, config: &PointConfiguration, s: &Simplex) -> Result<Probe> {
        for shift in 0..WEIGHTS.len() {
            let w: Vec<i64> = (0..s.labels.len()).map(|k| WEIGHTS[(k * 5 + shift) % WEIGHTS.len()]).collect();
            let mut num = vec![BigInt::from(0); config.dim()];
            for (&l, &wk) in s.labels.iter().zip(&w) {
                for (acc, x) in num.iter_mut().zip(config.int_coords(l)) {
                    *acc += x * wk;
                }
            }
            let p = Probe {
                num,
                den: BigInt::from(w.iter().sum::<i64>()),
            };
            if (0..self.planes.len() as u32).all(|f| self.eval(f, &p) != Sign::NoSign) {
                return Ok(p);
            }
        }
        Err(Error::Genericity(format!("no generic interior point found in {:?}", s.labels)))
    }

    /// Simplices whose interior contains `p`.
    pub fn containing(&self, p: &Probe) -> FixedBitSet {
        let mut out = FixedBitSet::with_capacity(self.facets_of.len());
        for s in 0..self.facets_of.len() {
            if self.contains(s, p) {
                out.insert(s);
            }
        }
        out
    }
}
