//! Minimal and maximal triangulations and dissections as 0/1 programs over
//! the full-dimensional simplices, solved by exact branch and bound.
//!
//! A 0/1 point is feasible when its simplices are pairwise compatible and
//! their volumes add up to the volume of the polytope. In triangulation mode
//! compatible means meeting properly; in dissection mode it means having
//! disjoint interiors. Interior-disjoint closed simplices of full total
//! volume cover the polytope, so the feasible points are exactly the
//! triangulations, respectively dissections.

mod geometry;
mod search;

use std::sync::Arc;
use std::time::{Duration, Instant};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use crate::complexes::{SimplexFamily, Status};
use crate::error::{Error, Result};
use crate::exactgeom::{factorial, Rat};
use crate::pointconfig::PointConfiguration;
use crate::simplexrel::{enumerate_simplices, mask_of, PairRelation, RelationTable, Simplex};

use geometry::Geometry;
use search::{Search, NEG};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    #[serde(rename = "tri")]
    Triangulation,
    #[serde(rename = "diss")]
    Dissection,
}

impl Mode {
    pub fn allows(self, rel: PairRelation) -> bool {
        match self {
            Mode::Triangulation => rel.is_proper(),
            Mode::Dissection => rel != PairRelation::InteriorOverlap,
        }
    }

    pub fn status(self) -> Status {
        match self {
            Mode::Triangulation => Status::Triangulation,
            Mode::Dissection => Status::Dissection,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Min,
    Max,
}

/// The 0/1 program. Variables are ordered by volume, increasing for MAX and
/// decreasing for MIN, ties broken by labels.
pub struct IPModel {
    config: Arc<PointConfiguration>,
    simplices: Vec<Simplex>,
    pub(crate) nvol: Vec<u128>,
    pub(crate) total_nvol: u128,
    /// `compat[i]` holds every `j != i` allowed together with `i`.
    pub(crate) compat: Vec<FixedBitSet>,
    exclusions: usize,
    index: FxHashMap<u128, usize>,
    pub mode: Mode,
    pub sense: Sense,
}

impl IPModel {
    pub fn config(&self) -> &Arc<PointConfiguration> {
        &self.config
    }

    pub fn variables(&self) -> usize {
        self.simplices.len()
    }

    pub fn simplices(&self) -> &[Simplex] {
        &self.simplices
    }

    /// Number of excluded pairs.
    pub fn exclusion_pairs(&self) -> usize {
        self.exclusions
    }

    pub fn excludes(&self, i: usize, j: usize) -> bool {
        i != j && !self.compat[i].contains(j)
    }

    pub fn index_of(&self, labels: &[usize]) -> Option<usize> {
        let mut l = labels.to_vec();
        l.sort_unstable();
        self.index.get(&mask_of(&l)).copied()
    }

    /// Coefficients and right-hand side of the volume equality.
    pub fn volume_equality(&self) -> (Vec<Rat>, Rat) {
        let unit = self.config.volume_of_nvol(&BigInt::one());
        (
            self.simplices.iter().map(|s| s.volume.clone()).collect(),
            unit * BigInt::from(self.total_nvol),
        )
    }

    /// Whether the variables set to one form a feasible point.
    pub fn is_feasible(&self, ones: &[usize]) -> bool {
        let vol: u128 = ones.iter().map(|&i| self.nvol[i]).sum();
        vol == self.total_nvol
            && ones
                .iter()
                .enumerate()
                .all(|(a, &i)| ones[a + 1..].iter().all(|&j| !self.excludes(i, j)))
    }

    fn family(&self, ones: &[u32]) -> SimplexFamily {
        SimplexFamily::from_simplices(
            self.config.clone(),
            ones.iter().map(|&i| self.simplices[i as usize].clone()).collect(),
        )
    }

    fn label_sets(&self, ones: &[u32]) -> Vec<Vec<usize>> {
        let mut sets: Vec<Vec<usize>> = ones.iter().map(|&i| self.simplices[i as usize].labels.clone()).collect();
        sets.sort();
        sets
    }
}

fn to_u128(v: &BigInt) -> Result<u128> {
    v.to_u128()
        .ok_or_else(|| Error::Structural("normalized volumes exceed 128 bits".into()))
}

/// Builds the program from a relation table, filling it as needed.
pub fn build_model(
    config: &Arc<PointConfiguration>,
    table: &RelationTable,
    mode: Mode,
    sense: Sense,
) -> Result<IPModel> {
    let raw = table.simplices();
    let mut order: Vec<usize> = (0..raw.len()).collect();
    order.sort_by(|&a, &b| {
        let by_vol = raw[a].nvol.cmp(&raw[b].nvol);
        let by_vol = if sense == Sense::Min { by_vol.reverse() } else { by_vol };
        by_vol.then_with(|| raw[a].labels.cmp(&raw[b].labels))
    });
    let n = order.len();
    let compat: Vec<FixedBitSet> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = FixedBitSet::with_capacity(n);
            for j in 0..n {
                if j != i && mode.allows(table.get(order[i], order[j])) {
                    row.insert(j);
                }
            }
            row
        })
        .collect();
    let allowed: usize = compat.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2;
    let simplices: Vec<Simplex> = order.iter().map(|&i| raw[i].clone()).collect();
    let nvol = simplices.iter().map(|s| to_u128(&s.nvol)).collect::<Result<Vec<_>>>()?;
    let scaled = config.total_volume()? * Rat::from_integer(factorial(config.dim()) * num_traits::pow(config.scale().clone(), config.dim()));
    if !scaled.is_integer() {
        return Err(Error::Consistency("total volume is not a multiple of the unit simplex".into()));
    }
    let index = simplices.iter().enumerate().map(|(i, s)| (s.mask, i)).collect();
    Ok(IPModel {
        config: config.clone(),
        total_nvol: to_u128(&scaled.to_integer())?,
        nvol,
        compat,
        exclusions: n * n.saturating_sub(1) / 2 - allowed,
        index,
        simplices,
        mode,
        sense,
    })
}

/// Enumerates every simplex of `config` and builds the program over them.
pub fn model_for(config: &Arc<PointConfiguration>, mode: Mode, sense: Sense) -> Result<IPModel> {
    let simplices = enumerate_simplices(config);
    let table = RelationTable::new(config, &simplices);
    table.fill();
    build_model(config, &table, mode, sense)
}

/// Search limits. Only the node limit is reproducible.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub nodes: u64,
    pub time: Option<Duration>,
}

impl Budget {
    pub fn nodes(nodes: u64) -> Self {
        Budget { nodes, time: None }
    }

    pub fn unlimited() -> Self {
        Budget::nodes(u64::MAX)
    }
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolveOptions {
    /// Memoize triangulation subproblems on their open facets.
    pub memo: bool,
    pub memo_cap: usize,
    /// Start from the best of several placing triangulations.
    pub warm_start: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            memo: true,
            memo_cap: 20_000_000,
            warm_start: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Progress {
    pub nodes: u64,
    pub incumbent: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SolveStats {
    pub nodes: u64,
    pub memo_entries: usize,
    pub elapsed_ms: u64,
    pub bound_progression: Vec<Progress>,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub optimum: usize,
    pub certificate: SimplexFamily,
    /// No feasible point beats `optimum`.
    pub proven: bool,
    /// Proven bound on the optimum: an upper bound for MAX, a lower bound
    /// for MIN. Equals `optimum` when proven.
    pub bound: usize,
    pub all_optima: Option<Vec<Vec<Vec<usize>>>>,
    pub stats: SolveStats,
}

pub fn solve(model: &IPModel, budget: Budget) -> Result<SolveResult> {
    solve_with(model, budget, SolveOptions::default())
}

struct Prepared {
    geo: Geometry,
    seeds: FixedBitSet,
    cover: Vec<FixedBitSet>,
}

fn prepare(model: &IPModel) -> Result<Prepared> {
    let config = &model.config;
    let hull = config.convex_hull()?;
    let geo = Geometry::new(config, &hull, &model.simplices);
    if model.simplices.is_empty() {
        return Err(Error::Infeasible("no full-dimensional simplices".into()));
    }
    match model.mode {
        Mode::Triangulation => {
            // the probe inside the fewest simplices, among a few candidates
            let step = (model.simplices.len() / 16).max(1);
            let mut seeds: Option<FixedBitSet> = None;
            for i in (0..model.simplices.len()).step_by(step).take(16) {
                let p = geo.probe(config, &model.simplices[i])?;
                let c = geo.containing(&p);
                if seeds.as_ref().is_none_or(|s| c.count_ones(..) < s.count_ones(..)) {
                    seeds = Some(c);
                }
            }
            Ok(Prepared {
                seeds: seeds.expect("at least one simplex"),
                geo,
                cover: Vec::new(),
            })
        }
        Mode::Dissection => {
            let probes = model
                .simplices
                .iter()
                .map(|s| geo.probe(config, s))
                .collect::<Result<Vec<_>>>()?;
            let cover = probes.par_iter().map(|p| geo.containing(p)).collect();
            Ok(Prepared {
                seeds: FixedBitSet::new(),
                geo,
                cover,
            })
        }
    }
}

/// Placing triangulations over a few insertion orders, as variable sets.
fn warm_starts(model: &IPModel) -> Vec<Vec<u32>> {
    let n = model.config.len();
    let mut orders: Vec<Vec<usize>> = Vec::new();
    let step = (n / 4).max(1);
    for r in (0..n).step_by(step) {
        let o: Vec<usize> = (0..n).map(|i| (i + r) % n).collect();
        orders.push(o.iter().rev().copied().collect());
        orders.push(o);
    }
    let mut out = Vec::new();
    for o in orders {
        let Ok(sets) = model.config.placing(&o) else { continue };
        let ones: Option<Vec<usize>> = sets.iter().map(|s| model.index_of(s)).collect();
        if let Some(ones) = ones {
            if model.is_feasible(&ones) {
                out.push(ones.into_iter().map(|i| i as u32).collect());
            }
        }
    }
    out
}

fn certificate(model: &IPModel, ones: &[u32]) -> Result<SimplexFamily> {
    let mut fam = model.family(ones);
    let status = fam.validate().status;
    let ok = match model.mode {
        Mode::Triangulation => status == Status::Triangulation,
        Mode::Dissection => status.is_dissection(),
    };
    if !ok {
        return Err(Error::Consistency(format!(
            "solver certificate of size {} validates as {status:?}",
            ones.len()
        )));
    }
    Ok(fam)
}

pub fn solve_with(model: &IPModel, budget: Budget, options: SolveOptions) -> Result<SolveResult> {
    let start = Instant::now();
    let prep = prepare(model)?;
    let mut search = Search::new(
        model,
        &prep.geo,
        prep.seeds.clone(),
        prep.cover.clone(),
        options.memo,
        options.memo_cap,
        budget.nodes,
        budget.time.map(|t| start + t),
    );
    if options.warm_start {
        for ones in warm_starts(model) {
            search.offer(ones);
        }
    }
    search.run();
    if search.best <= NEG {
        return Err(Error::Infeasible(if search.aborted {
            "budget exhausted before any feasible point was found".into()
        } else {
            "no feasible point".into()
        }));
    }
    let proven = !search.aborted;
    let optimum = search.best_set.len();
    let bound = if proven {
        optimum
    } else {
        residual_bound(model, optimum)
    };
    let certificate = certificate(model, &search.best_set)?;
    Ok(SolveResult {
        optimum,
        certificate,
        proven,
        bound,
        all_optima: None,
        stats: SolveStats {
            nodes: search.nodes,
            memo_entries: search.memo_len(),
            elapsed_ms: start.elapsed().as_millis() as u64,
            bound_progression: search.progress,
        },
    })
}

/// The volume bound at the root, combined with the incumbent.
fn residual_bound(model: &IPModel, incumbent: usize) -> usize {
    let mut acc = 0u128;
    let mut k = 0usize;
    for &v in &model.nvol {
        acc += v;
        match model.sense {
            Sense::Max if acc > model.total_nvol => break,
            Sense::Max => k += 1,
            Sense::Min => {
                k += 1;
                if acc >= model.total_nvol {
                    break;
                }
            }
        }
    }
    match model.sense {
        Sense::Max => k.max(incumbent),
        Sense::Min => k.min(incumbent),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Enumeration {
    /// Sorted label sets of every optimum found, each sorted.
    pub optima: Vec<Vec<Vec<usize>>>,
    /// False if the budget ran out and the list may be partial.
    pub complete: bool,
    pub nodes: u64,
}

/// Every feasible point attaining `result.optimum`.
pub fn enumerate_optima(model: &IPModel, result: &SolveResult, budget: Budget) -> Result<Enumeration> {
    if !result.proven {
        return Err(Error::Structural("enumeration needs a proven optimum".into()));
    }
    let prep = prepare(model)?;
    let mut search = Search::new(
        model,
        &prep.geo,
        prep.seeds.clone(),
        prep.cover.clone(),
        true,
        SolveOptions::default().memo_cap,
        budget.nodes,
        budget.time.map(|t| Instant::now() + t),
    );
    let w = match model.sense {
        Sense::Max => 1,
        Sense::Min => -1,
    };
    let found = search.enumerate(w * result.optimum as i64);
    let mut optima: Vec<Vec<Vec<usize>>> = found.iter().map(|ones| model.label_sets(ones)).collect();
    optima.sort();
    optima.dedup();
    for o in &optima {
        let ones: Vec<u32> = o.iter().map(|s| model.index_of(s).expect("model simplex") as u32).collect();
        certificate(model, &ones)?;
    }
    Ok(Enumeration {
        optima,
        complete: !search.aborted,
        nodes: search.nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{build, FamilyKind, FamilySpec};

    fn lattice() -> Arc<PointConfiguration> {
        build(&FamilySpec::new(FamilyKind::LatticeP)).unwrap().config
    }

    #[test]
    fn simplex_model() {
        let c = Arc::new(
            PointConfiguration::from_ints(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap(),
        );
        for mode in [Mode::Triangulation, Mode::Dissection] {
            let m = model_for(&c, mode, Sense::Max).unwrap();
            assert_eq!((m.variables(), m.exclusion_pairs()), (1, 0));
            let r = solve(&m, Budget::unlimited()).unwrap();
            assert_eq!((r.optimum, r.proven), (1, true));
            let e = enumerate_optima(&m, &r, Budget::unlimited()).unwrap();
            assert_eq!(e.optima.len(), 1);
        }
    }

    #[test]
    fn dissection_model_is_looser() {
        let c = lattice();
        let t = model_for(&c, Mode::Triangulation, Sense::Max).unwrap();
        let d = model_for(&c, Mode::Dissection, Sense::Max).unwrap();
        assert_eq!(t.variables(), d.variables());
        assert!(d.exclusion_pairs() < t.exclusion_pairs());
    }

    #[test]
    fn lattice_extremes() {
        let c = lattice();
        let t = model_for(&c, Mode::Triangulation, Sense::Max).unwrap();
        let r = solve(&t, Budget::unlimited()).unwrap();
        assert_eq!((r.optimum, r.proven), (11, true));
        let d = model_for(&c, Mode::Dissection, Sense::Max).unwrap();
        let r = solve(&d, Budget::unlimited()).unwrap();
        assert_eq!((r.optimum, r.proven), (12, true));
        assert_eq!(enumerate_optima(&d, &r, Budget::unlimited()).unwrap().optima.len(), 1);
    }

    #[test]
    fn memo_agrees_with_plain_search() {
        let c = build(&FamilySpec::new(FamilyKind::Antiprism8P)).unwrap().config;
        for sense in [Sense::Min, Sense::Max] {
            let m = model_for(&c, Mode::Triangulation, sense).unwrap();
            let opts = |memo| SolveOptions {
                memo,
                warm_start: false,
                ..SolveOptions::default()
            };
            let a = solve_with(&m, Budget::unlimited(), opts(true)).unwrap();
            let b = solve_with(&m, Budget::unlimited(), opts(false)).unwrap();
            assert_eq!(a.optimum, b.optimum);
        }
    }
}
