//! Depth-first search over partial families.
//!
//! Triangulations grow across open facets: every interior facet of a
//! triangulation carries exactly one simplex on each side, so the simplices
//! that fill a chosen open facet partition the completions. The open facets
//! with their open sides determine the uncovered region, and with it the
//! rest of the problem, so subproblems are memoized on them.
//!
//! Dissections branch on a generic probe point of an uncovered candidate:
//! every completion covers it by exactly one simplex.
//!
//! Scores are `w * size` with `w = 1` for maximization and `-1` for
//! minimization, and every search maximizes the score.

use std::collections::BTreeSet;
use std::time::Instant;

use fixedbitset::FixedBitSet;
use rustc_hash::FxHashMap;

use super::geometry::Geometry;
use super::{IPModel, Mode, Progress, Sense};

pub(crate) const NEG: i64 = i64::MIN / 4;
const UNKNOWN: i64 = i64::MAX / 4;

#[derive(Clone, Copy, Debug)]
struct Val {
    v: i64,
    /// Otherwise `v` is only an upper bound.
    exact: bool,
}

impl Val {
    fn exact(v: i64) -> Self {
        Val { v, exact: true }
    }

    fn bound(v: i64) -> Self {
        Val { v, exact: false }
    }
}

#[derive(Clone, Copy)]
struct Entry {
    v: i64,
    exact: bool,
    arg: u32,
}

pub(crate) struct Search<'m> {
    model: &'m IPModel,
    geo: &'m Geometry,
    /// Probe containment sets, dissection mode only.
    cover: Vec<FixedBitSet>,
    seeds: FixedBitSet,
    w: i64,
    memo_on: bool,
    memo_cap: usize,
    /// Tighten cutoffs with the incumbent; off while enumerating.
    tighten: bool,
    memo: FxHashMap<Box<[u32]>, Entry>,
    occ: Vec<u8>,
    open: BTreeSet<u32>,
    chosen: Vec<u32>,
    pub nodes: u64,
    limit: u64,
    deadline: Option<Instant>,
    pub aborted: bool,
    pub best: i64,
    pub best_set: Vec<u32>,
    pub progress: Vec<Progress>,
}

impl<'m> Search<'m> {
    pub fn new(
        model: &'m IPModel,
        geo: &'m Geometry,
        seeds: FixedBitSet,
        cover: Vec<FixedBitSet>,
        memo_on: bool,
        memo_cap: usize,
        limit: u64,
        deadline: Option<Instant>,
    ) -> Self {
        Search {
            model,
            geo,
            cover,
            seeds,
            w: match model.sense {
                Sense::Max => 1,
                Sense::Min => -1,
            },
            memo_on,
            memo_cap,
            tighten: true,
            memo: FxHashMap::default(),
            occ: vec![0; geo.on_hull.len()],
            open: BTreeSet::new(),
            chosen: Vec::new(),
            nodes: 0,
            limit,
            deadline,
            aborted: false,
            best: NEG,
            best_set: Vec::new(),
            progress: Vec::new(),
        }
    }

    pub fn memo_len(&self) -> usize {
        self.memo.len()
    }

    pub fn offer(&mut self, set: Vec<u32>) {
        let score = self.w * set.len() as i64;
        if score > self.best {
            self.best = score;
            self.best_set = set;
            self.progress.push(Progress {
                nodes: self.nodes,
                incumbent: self.best_set.len(),
            });
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit {
            self.aborted = true;
        } else if self.nodes % 4096 == 0 {
            if let Some(d) = self.deadline {
                if Instant::now() >= d {
                    self.aborted = true;
                }
            }
        }
        self.aborted
    }

    fn prefix(&self) -> i64 {
        self.w * self.chosen.len() as i64
    }

    fn push(&mut self, c: usize) {
        self.chosen.push(c as u32);
        if self.model.mode != Mode::Triangulation {
            return;
        }
        for &(f, side) in &self.geo.facets_of[c] {
            if self.geo.on_hull[f as usize] {
                continue;
            }
            let o = &mut self.occ[f as usize];
            *o |= 1 << side;
            if *o == 3 {
                self.open.remove(&(2 * f + side as u32));
            } else {
                self.open.insert(2 * f + 1 - side as u32);
            }
        }
    }

    fn pop(&mut self, c: usize) {
        self.chosen.pop();
        if self.model.mode != Mode::Triangulation {
            return;
        }
        for &(f, side) in &self.geo.facets_of[c] {
            if self.geo.on_hull[f as usize] {
                continue;
            }
            let o = &mut self.occ[f as usize];
            if *o == 3 {
                self.open.insert(2 * f + side as u32);
            } else {
                self.open.remove(&(2 * f + 1 - side as u32));
            }
            *o &= !(1 << side);
        }
    }

    fn child(&self, cand: &FixedBitSet, c: usize) -> FixedBitSet {
        let mut out = cand.clone();
        out.intersect_with(&self.model.compat[c]);
        out
    }

    /// Upper bound on the score of any completion, or `None` if the
    /// candidates cannot make up the remaining volume.
    fn score_bound(&self, cand: &FixedBitSet, rem: u128) -> Option<i64> {
        if rem == 0 {
            return Some(0);
        }
        let nvol = &self.model.nvol;
        let mut acc = 0u128;
        let mut k = 0i64;
        match self.model.sense {
            // candidates are in increasing volume order
            Sense::Max => {
                for i in cand.ones() {
                    acc += nvol[i];
                    if acc > rem {
                        return Some(k);
                    }
                    k += 1;
                }
                (acc == rem).then_some(k)
            }
            // candidates are in decreasing volume order
            Sense::Min => {
                for i in cand.ones() {
                    acc += nvol[i];
                    k += 1;
                    if acc >= rem {
                        // one new simplex closes at most d + 1 open facets
                        let per = self.model.config.dim() as i64 + 1;
                        let by_facets = (self.open.len() as i64 + per - 1) / per;
                        return Some(-k.max(by_facets));
                    }
                }
                None
            }
        }
    }

    fn key(&self) -> Box<[u32]> {
        self.open.iter().copied().collect()
    }

    /// Candidates for the most constrained open facet; `None` if some open
    /// facet cannot be filled.
    fn facet_branch(&self, cand: &FixedBitSet) -> Option<FixedBitSet> {
        let mut pick: Option<(usize, u32)> = None;
        for &f in &self.open {
            let k = self.geo.sides[f as usize].intersection_count(cand);
            if k == 0 {
                return None;
            }
            if pick.is_none_or(|(best, _)| k < best) {
                pick = Some((k, f));
            }
        }
        let (_, f) = pick?;
        let mut out = self.geo.sides[f as usize].clone();
        out.intersect_with(cand);
        Some(out)
    }

    fn store(&mut self, key: Option<Box<[u32]>>, val: Val, arg: u32) {
        let Some(key) = key else { return };
        if self.aborted {
            return;
        }
        if let Some(e) = self.memo.get_mut(&key) {
            if !e.exact && (val.exact || val.v < e.v) {
                *e = Entry {
                    v: val.v,
                    exact: val.exact,
                    arg,
                };
            }
        } else if self.memo.len() < self.memo_cap {
            self.memo.insert(
                key,
                Entry {
                    v: val.v,
                    exact: val.exact,
                    arg,
                },
            );
        }
    }

    /// Follows memoized best choices from the current state to a completion.
    fn reconstruct(&mut self) -> Option<Vec<u32>> {
        let mut pushed = Vec::new();
        let mut ok = true;
        while !self.open.is_empty() {
            match self.memo.get(&self.key()) {
                Some(e) if e.exact && e.arg != u32::MAX => {
                    let c = e.arg as usize;
                    self.push(c);
                    pushed.push(c);
                }
                _ => {
                    ok = false;
                    break;
                }
            }
        }
        let out = self.chosen.clone();
        for &c in pushed.iter().rev() {
            self.pop(c);
        }
        ok.then_some(out)
    }

    /// Best completion score of the current triangulation state: exact when
    /// it exceeds `alpha`, otherwise possibly just a bound `<= alpha`.
    fn rec(&mut self, cand: &FixedBitSet, rem: u128, alpha: i64) -> Val {
        if self.tick() {
            return Val::bound(UNKNOWN);
        }
        if self.open.is_empty() {
            debug_assert_eq!(rem, 0);
            self.offer(self.chosen.clone());
            return Val::exact(0);
        }
        let alpha = if self.tighten {
            alpha.max(self.best - self.prefix())
        } else {
            alpha
        };
        let key = self.memo_on.then(|| self.key());
        if let Some(e) = key.as_ref().and_then(|k| self.memo.get(k)).copied() {
            if e.exact {
                if e.v > NEG && self.prefix() + e.v > self.best {
                    if let Some(set) = self.reconstruct() {
                        self.offer(set);
                    }
                }
                return Val::exact(e.v);
            }
            if e.v <= alpha {
                return Val::bound(e.v);
            }
        }
        let Some(ub) = self.score_bound(cand, rem) else {
            self.store(key, Val::exact(NEG), u32::MAX);
            return Val::exact(NEG);
        };
        if ub <= alpha {
            self.store(key, Val::bound(ub), u32::MAX);
            return Val::bound(ub);
        }
        let Some(branch) = self.facet_branch(cand) else {
            self.store(key, Val::exact(NEG), u32::MAX);
            return Val::exact(NEG);
        };
        let (mut best_exact, mut best_ub, mut arg) = (NEG, NEG, u32::MAX);
        for c in branch.ones() {
            let child_alpha = alpha.max(best_exact) - self.w;
            let child = self.child(cand, c);
            self.push(c);
            let r = self.rec(&child, rem - self.model.nvol[c], child_alpha);
            self.pop(c);
            if self.aborted {
                return Val::bound(UNKNOWN);
            }
            let vc = if r.v <= NEG { NEG } else { r.v + self.w };
            if r.exact {
                if vc > best_exact {
                    best_exact = vc;
                    arg = c as u32;
                }
            } else {
                best_ub = best_ub.max(vc);
            }
        }
        let val = if best_exact >= best_ub {
            Val::exact(best_exact)
        } else {
            Val::bound(best_ub)
        };
        self.store(key, val, arg);
        val
    }

    /// Runs the search from the empty family.
    pub fn run(&mut self) {
        let all = self.all();
        match self.model.mode {
            Mode::Triangulation => {
                let seeds = self.seeds.clone();
                for c in seeds.ones() {
                    let child = self.child(&all, c);
                    self.push(c);
                    self.rec(&child, self.model.total_nvol - self.model.nvol[c], NEG);
                    self.pop(c);
                    if self.aborted {
                        return;
                    }
                }
            }
            Mode::Dissection => self.drec(&all, self.model.total_nvol, None, &mut Vec::new()),
        }
    }

    fn all(&self) -> FixedBitSet {
        let mut all = FixedBitSet::with_capacity(self.model.nvol.len());
        all.insert_range(..);
        all
    }

    /// Every completion reaching the score `target`.
    pub fn enumerate(&mut self, target: i64) -> Vec<Vec<u32>> {
        self.tighten = false;
        let all = self.all();
        let mut out = Vec::new();
        match self.model.mode {
            Mode::Triangulation => {
                let seeds = self.seeds.clone();
                self.enum_children(&seeds, &all, self.model.total_nvol, target, &mut out);
            }
            Mode::Dissection => self.drec(&all, self.model.total_nvol, Some(target), &mut out),
        }
        out
    }

    fn enum_children(&mut self, branch: &FixedBitSet, cand: &FixedBitSet, rem: u128, need: i64, out: &mut Vec<Vec<u32>>) {
        for c in branch.ones() {
            let child = self.child(cand, c);
            let rem = rem - self.model.nvol[c];
            self.push(c);
            let r = self.rec(&child, rem, need - self.w - 1);
            if !self.aborted && r.exact && r.v == need - self.w {
                self.enum_tri(&child, rem, need - self.w, out);
            }
            self.pop(c);
            if self.aborted {
                return;
            }
        }
    }

    fn enum_tri(&mut self, cand: &FixedBitSet, rem: u128, need: i64, out: &mut Vec<Vec<u32>>) {
        if self.tick() {
            return;
        }
        if self.open.is_empty() {
            if need == 0 {
                out.push(self.chosen.clone());
            }
            return;
        }
        if let Some(branch) = self.facet_branch(cand) {
            self.enum_children(&branch, cand, rem, need, out);
        }
    }

    /// Dissection search. With a target, collects every completion of that
    /// score; otherwise improves the incumbent.
    fn drec(&mut self, cand: &FixedBitSet, rem: u128, target: Option<i64>, out: &mut Vec<Vec<u32>>) {
        if self.tick() {
            return;
        }
        let prefix = self.prefix();
        if rem == 0 {
            match target {
                Some(t) if t == prefix => out.push(self.chosen.clone()),
                Some(_) => {}
                None => self.offer(self.chosen.clone()),
            }
            return;
        }
        let Some(ub) = self.score_bound(cand, rem) else { return };
        let cut = match target {
            Some(t) => prefix + ub < t,
            None => prefix + ub <= self.best,
        };
        if cut {
            return;
        }
        // the probe covered by the fewest candidates
        let mut pick: Option<(usize, usize)> = None;
        for i in cand.ones() {
            let k = self.cover[i].intersection_count(cand);
            if pick.is_none_or(|(best, _)| k < best) {
                pick = Some((k, i));
                if k == 1 {
                    break;
                }
            }
        }
        let Some((_, i)) = pick else { return };
        let mut branch = self.cover[i].clone();
        branch.intersect_with(cand);
        for c in branch.ones() {
            let child = self.child(cand, c);
            self.push(c);
            self.drec(&child, rem - self.model.nvol[c], target, out);
            self.pop(c);
            if self.aborted {
                return;
            }
        }
    }
}
