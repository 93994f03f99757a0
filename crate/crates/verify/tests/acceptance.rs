//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. `ACCEPTANCE_LONG=1` adds the stretch
//! instances (truncated octahedron, Klee-Minty 4-cube).

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use dissect_core::complexes::{check_bounds, euler_audit, mismatched_regions, validate, SimplexFamily, Status};
use dissect_core::exactgeom::{int, rat};
use dissect_core::extremal::{enumerate_optima, model_for, solve, Budget, Mode, Sense, SolveResult};
use dissect_core::families::{self, Built, Coords, FamilyKind, FamilySpec};
use dissect_core::simplexrel::{classify_pair, enumerate_simplices};
use dissect_core::{PointConfiguration, Result};

use dissect_verify::{oracle_relation, small_configs};
use FamilyKind::*;

/// Node budget for every default-tier solve.
const NODE_BUDGET: u64 = 50_000_000;
/// Node budget for the long tier.
const LONG_NODE_BUDGET: u64 = 2_000_000_000;
/// Lower bound on the cube growth constant the product bound must reach.
const GROWTH_FLOOR: (i64, i64) = (1031, 1000);

struct Outcome {
    ok: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            ok: true,
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, note: impl Into<String>) {
        let note = note.into();
        if !ok {
            self.ok = false;
            self.notes.push(format!("FAILED {note}"));
        } else if !note.is_empty() {
            self.notes.push(note);
        }
    }

    fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }
}

fn long_tier() -> bool {
    std::env::var("ACCEPTANCE_LONG").is_ok_and(|v| v == "1")
}

fn built(spec: FamilySpec) -> Result<Built> {
    families::build(&spec)
}

fn optimum(config: &Arc<PointConfiguration>, mode: Mode, sense: Sense, nodes: u64) -> Result<SolveResult> {
    let model = model_for(config, mode, sense)?;
    solve(&model, Budget::nodes(nodes))
}

fn optima_count(config: &Arc<PointConfiguration>, mode: Mode, sense: Sense) -> Result<(SolveResult, Option<usize>)> {
    let model = model_for(config, mode, sense)?;
    let r = solve(&model, Budget::nodes(NODE_BUDGET))?;
    if !r.proven {
        return Ok((r, None));
    }
    let e = enumerate_optima(&model, &r, Budget::nodes(NODE_BUDGET))?;
    let count = e.complete.then_some(e.optima.len());
    Ok((r, count))
}

fn status_of(f: &SimplexFamily) -> Status {
    validate(f).status
}

/// `proven optimum == expected`, with the budget outcome spelled out.
fn solved_as(out: &mut Outcome, what: &str, r: &SolveResult, expected: usize, budget: u64) {
    if r.proven {
        out.check(r.optimum == expected, format!("{what} = {} (expected {expected})", r.optimum));
    } else {
        out.check(
            false,
            format!(
                "{what}: node budget {budget} exhausted, best {} bound {} (expected {expected})",
                r.optimum, r.bound
            ),
        );
    }
}

fn criterion_1() -> Result<Outcome> {
    let mut out = Outcome::new();
    let b = built(FamilySpec::new(LatticeP))?;
    let (d, nd) = optima_count(&b.config, Mode::Dissection, Sense::Max)?;
    solved_as(&mut out, "max dissection", &d, 12, NODE_BUDGET);
    out.check(nd == Some(1), format!("max dissection optima {nd:?}"));
    let unimodular = d.certificate.simplices().iter().all(|s| s.volume == rat(1, 6));
    out.check(unimodular, "every dissection tetrahedron has volume 1/6");
    let (t, nt) = optima_count(&b.config, Mode::Triangulation, Sense::Max)?;
    solved_as(&mut out, "max triangulation", &t, 11, NODE_BUDGET);
    out.check(nt.is_some_and(|k| k >= 2), format!("max triangulation optima {nt:?}"));
    Ok(out)
}

fn criterion_2() -> Result<Outcome> {
    let mut out = Outcome::new();
    let b = built(FamilySpec::new(Antiprism8P))?;
    let (min_d, n_min_d) = optima_count(&b.config, Mode::Dissection, Sense::Min)?;
    let (min_t, n_min_t) = optima_count(&b.config, Mode::Triangulation, Sense::Min)?;
    let max_t = optimum(&b.config, Mode::Triangulation, Sense::Max, NODE_BUDGET)?;
    let max_d = optimum(&b.config, Mode::Dissection, Sense::Max, NODE_BUDGET)?;
    solved_as(&mut out, "min dissection", &min_d, 6, NODE_BUDGET);
    solved_as(&mut out, "min triangulation", &min_t, 7, NODE_BUDGET);
    solved_as(&mut out, "max triangulation", &max_t, 9, NODE_BUDGET);
    solved_as(&mut out, "max dissection", &max_d, 10, NODE_BUDGET);
    out.check(n_min_d == Some(1), format!("min dissection optima {n_min_d:?}"));
    out.check(n_min_t.is_some_and(|k| k >= 2), format!("min triangulation optima {n_min_t:?}"));
    Ok(out)
}

fn criterion_3() -> Result<Outcome> {
    let mut out = Outcome::new();
    for coords in [Coords::Parabola, Coords::RegularApprox] {
        for m in 3..=12 {
            let p = built(FamilySpec::new(Prism).with_m(m).with_coords(coords))?;
            let t = families::prism_min_triangulation(&p)?;
            let want = 2 * m - 5 + m.div_ceil(2);
            let ok = t.size() == want && status_of(&t) == Status::Triangulation;
            out.check(ok, if ok { String::new() } else { format!("prism m={m} {coords:?} size {}", t.size()) });
            if m <= 6 {
                let r = optimum(&p.config, Mode::Triangulation, Sense::Min, NODE_BUDGET)?;
                solved_as(&mut out, &format!("prism m={m} {coords:?} min"), &r, want, NODE_BUDGET);
            }
            let a = built(FamilySpec::new(Antiprism).with_m(m).with_coords(coords))?;
            let t = families::antiprism_min_triangulation(&a)?;
            let want = 3 * m - 5;
            let ok = t.size() == want && status_of(&t) == Status::Triangulation;
            out.check(ok, if ok { String::new() } else { format!("antiprism m={m} {coords:?} size {}", t.size()) });
            if m <= 6 {
                let r = optimum(&a.config, Mode::Triangulation, Sense::Min, NODE_BUDGET)?;
                solved_as(&mut out, &format!("antiprism m={m} {coords:?} min"), &r, want, NODE_BUDGET);
            }
        }
    }
    Ok(out)
}

fn criterion_4() -> Result<Outcome> {
    let mut out = Outcome::new();
    for m in 3..=12 {
        let p = built(FamilySpec::new(Prism).with_m(m).with_coords(Coords::Parabola))?;
        let placing = families::prism_max_placing(&p)?;
        let ok = placing.size() == (m * m + m - 6) / 2 && status_of(&placing) == Status::Triangulation;
        out.check(ok, if ok { String::new() } else { format!("placing m={m} size {}", placing.size()) });
        let split = families::prism_max_split(&p)?;
        let ok = split.size() == (m * m + 6 * m - 16).div_ceil(4) && status_of(&split) == Status::Triangulation;
        out.check(ok, if ok { String::new() } else { format!("split m={m} size {}", split.size()) });
    }
    let table = [3, 6, 10, 14, 19];
    for m in 3..=7 {
        let p = built(FamilySpec::new(Prism).with_m(m).with_coords(Coords::RegularApprox))?;
        let r = optimum(&p.config, Mode::Triangulation, Sense::Max, NODE_BUDGET)?;
        solved_as(&mut out, &format!("regular prism m={m} max"), &r, table[m - 3], NODE_BUDGET);
    }
    Ok(out)
}

fn criterion_5() -> Result<Outcome> {
    let mut out = Outcome::new();
    for m in 3..=12 {
        let a = built(FamilySpec::new(Antiprism).with_m(m).with_coords(Coords::RegularApprox))?;
        let t = families::antiprism_max_construction(&a)?;
        let ok = t.size() == (m * m + 8 * m - 16) / 4 && status_of(&t) == Status::Triangulation;
        out.check(ok, if ok { String::new() } else { format!("construction m={m} size {}", t.size()) });
        if m <= 5 {
            let r = optimum(&a.config, Mode::Triangulation, Sense::Max, NODE_BUDGET)?;
            solved_as(&mut out, &format!("antiprism m={m} max"), &r, [4, 8, 12][m - 3], NODE_BUDGET);
        }
    }
    Ok(out)
}

fn criterion_6() -> Result<Outcome> {
    let mut out = Outcome::new();
    let mut rows = vec![
        (TruncTetrahedron, Sense::Min, 10),
        (TruncTetrahedron, Sense::Max, 13),
        (Cuboctahedron, Sense::Min, 13),
        (Cuboctahedron, Sense::Max, 17),
        (RhombicDodecahedron, Sense::Min, 12),
        (RhombicDodecahedron, Sense::Max, 21),
    ];
    if long_tier() {
        rows.push((TruncOctahedron, Sense::Min, 27));
    } else {
        out.note("truncated octahedron runs in the long tier");
    }
    for (kind, sense, want) in rows {
        let b = built(FamilySpec::new(kind))?;
        let budget = if kind == TruncOctahedron { LONG_NODE_BUDGET } else { NODE_BUDGET };
        let r = optimum(&b.config, Mode::Triangulation, sense, budget)?;
        solved_as(&mut out, &format!("{kind:?} {sense:?}"), &r, want, budget);
    }
    Ok(out)
}

fn criterion_7() -> Result<Outcome> {
    let mut out = Outcome::new();
    for m in (8..=14).step_by(2) {
        let b = built(FamilySpec::new(Pm).with_m(m))?;
        let d = families::max_halving_dissection(&b)?;
        let ok = d.size() == 4 * m - 6 && status_of(&d) == Status::Dissection;
        out.check(ok, if ok { String::new() } else { format!("halving m={m} size {} {:?}", d.size(), d.status()) });
        let t = families::small_pm_triangulation(&b)?;
        let ok = t.size() == m + 5 && status_of(&t) == Status::Triangulation;
        out.check(ok, if ok { String::new() } else { format!("small m={m} size {}", t.size()) });
    }
    let m = 8;
    let b = built(FamilySpec::new(Pm).with_m(m))?;
    let r = optimum(&b.config, Mode::Triangulation, Sense::Max, NODE_BUDGET)?;
    let ceiling = 7 * m / 2 + 1;
    out.check(r.bound <= ceiling, format!("max triangulation bound {} <= {ceiling}", r.bound));
    let construction = 4 * m - 6;
    out.note(format!(
        "max triangulation {}{}; dissection {construction} exceeds it: {}",
        r.optimum,
        if r.proven { "" } else { " (not proven)" },
        construction > r.bound
    ));
    Ok(out)
}

/// Every family the constructions and small solves produce.
fn corpus() -> Result<Vec<(String, SimplexFamily)>> {
    let mut fams = Vec::new();
    for coords in [Coords::Parabola, Coords::RegularApprox] {
        for m in 3..=12 {
            let p = built(FamilySpec::new(Prism).with_m(m).with_coords(coords))?;
            fams.push((format!("prism-min {m}"), families::prism_min_triangulation(&p)?));
            let a = built(FamilySpec::new(Antiprism).with_m(m).with_coords(coords))?;
            fams.push((format!("antiprism-min {m}"), families::antiprism_min_triangulation(&a)?));
            if coords == Coords::Parabola {
                fams.push((format!("prism-placing {m}"), families::prism_max_placing(&p)?));
                fams.push((format!("prism-split {m}"), families::prism_max_split(&p)?));
            } else {
                fams.push((format!("antiprism-max {m}"), families::antiprism_max_construction(&a)?));
            }
        }
    }
    for m in [4, 5, 6, 8, 10, 12, 14] {
        let b = built(FamilySpec::new(Pm).with_m(m))?;
        fams.push((format!("pm-small {m}"), families::small_pm_triangulation(&b)?));
        if m >= 8 && m % 2 == 0 {
            fams.push((format!("pm-halving {m}"), families::max_halving_dissection(&b)?));
        }
    }
    let lat = built(FamilySpec::new(LatticeP))?;
    fams.push(("lattice-dissection".into(), families::lattice_example_dissection(&lat)?));
    fams.push(("lattice-11".into(), families::lattice_example_triangulation11(&lat)?));
    let trap = built(FamilySpec::new(TrapezoidCube))?;
    fams.push(("trapezoid-7".into(), families::trapezoid_cube_7(&trap)?));
    for (name, config) in small_configs() {
        let order: Vec<usize> = (0..config.len()).rev().collect();
        fams.push((format!("placing {name}"), families::placing_triangulation(&config, &order)?));
        for (mode, sense) in [
            (Mode::Triangulation, Sense::Min),
            (Mode::Triangulation, Sense::Max),
            (Mode::Dissection, Sense::Min),
            (Mode::Dissection, Sense::Max),
        ] {
            let r = optimum(&config, mode, sense, NODE_BUDGET)?;
            fams.push((format!("{name} {mode:?} {sense:?}"), r.certificate));
        }
    }
    Ok(fams)
}

fn criterion_8() -> Result<Outcome> {
    let mut out = Outcome::new();
    let (mut tris, mut diss, mut regions) = (0, 0, 0);
    for (name, mut f) in corpus()? {
        match f.validate().status {
            Status::Triangulation => {
                tris += 1;
                let ok = euler_audit(&f).is_ok_and(|a| a.holds());
                out.check(ok, if ok { String::new() } else { format!("edge identity on {name}") });
            }
            Status::Dissection => {
                diss += 1;
                let ok = check_bounds(&f).is_ok_and(|b| b.ok);
                out.check(ok, if ok { String::new() } else { format!("size bounds on {name}") });
                match mismatched_regions(&f) {
                    Ok(r) if !r.is_empty() && r.iter().all(|x| x.polygon.is_some()) => regions += r.len(),
                    Ok(_) => out.check(false, format!("no polygonal region on {name}")),
                    Err(e) => out.check(false, format!("regions on {name}: {e}")),
                }
            }
            s => out.check(false, format!("{name} is {s:?}")),
        }
    }
    out.note(format!("{tris} triangulations, {diss} mismatching dissections, {regions} regions"));
    Ok(out)
}

fn criterion_9() -> Result<Outcome> {
    let mut out = Outcome::new();
    let b = built(FamilySpec::new(SchoenhardtBipyramid))?;
    let f = families::schoenhardt_bipyramid_dissection(&b)?;
    let v = validate(&f);
    out.check(
        v.status == Status::Dissection && f.config().dim() == 4,
        format!("status {:?} in dimension {}", v.status, f.config().dim()),
    );
    let height = |l: usize| f.config().point(l).0[3].clone();
    let zero = int(0);
    // a pair on opposite closed sides of x4 = 0 can only meet inside it
    let in_equator = v.improper.iter().all(|(a, c)| {
        let (lo_a, hi_a) = (a.iter().all(|&l| height(l) >= zero), a.iter().all(|&l| height(l) <= zero));
        let (lo_c, hi_c) = (c.iter().all(|&l| height(l) >= zero), c.iter().all(|&l| height(l) <= zero));
        (lo_a && hi_c) || (hi_a && lo_c)
    });
    out.check(!v.improper.is_empty() && in_equator, format!("{} improper pairs meet in x4 = 0", v.improper.len()));
    let regions = mismatched_regions(&f)?;
    let flat = regions
        .iter()
        .all(|r| r.hyperplane.coeffs[..3].iter().all(|c| *c == zero) && r.hyperplane.constant == zero);
    out.check(!regions.is_empty() && flat, format!("{} regions in the equator", regions.len()));
    Ok(out)
}

fn criterion_10() -> Result<Outcome> {
    let mut out = Outcome::new();
    let seg = families::segment()?;
    let (_, square, rep) = families::haiman_product(&seg, &seg, usize::MAX)?;
    out.check(
        square.size() == 2 && rep.product_size == 2 && status_of(&square) == Status::Triangulation,
        format!("segment x segment: {}", square.size()),
    );
    let trap = built(FamilySpec::new(TrapezoidCube))?;
    let seven = families::trapezoid_cube_7(&trap)?;
    let (_, cube, rep) = families::haiman_product(&seven, &seg, usize::MAX)?;
    out.check(
        cube.size() == 28 && rep.product_size == 7 * 4 && status_of(&cube) == Status::Triangulation,
        format!("trapezoid cube x segment: {}", cube.size()),
    );
    out.check(
        rep.g.base == rat(28, 24) && rep.g.exponent == 4 && rep.g.at_least(&rat(GROWTH_FLOOR.0, GROWTH_FLOOR.1)),
        format!("g(4) >= (28/24)^(1/4) = {:.5}", rep.g.approx()),
    );
    if long_tier() {
        let km = built(FamilySpec::new(KleeMinty).with_d(4))?;
        let r = optimum(&km.config, Mode::Triangulation, Sense::Max, LONG_NODE_BUDGET)?;
        solved_as(&mut out, "Klee-Minty 4-cube max", &r, 38, LONG_NODE_BUDGET);
    } else {
        out.note("Klee-Minty 4-cube runs in the long tier");
    }
    Ok(out)
}

fn criterion_11() -> Result<Outcome> {
    let mut out = Outcome::new();
    let (mut pairs, mut disagree) = (0usize, 0usize);
    for (name, config) in small_configs() {
        let simplices = enumerate_simplices(&config);
        for (i, a) in simplices.iter().enumerate() {
            for b in &simplices[..i] {
                pairs += 1;
                let ours = classify_pair(&config, a, b)?;
                let oracle = oracle_relation(&config, &a.labels, &b.labels);
                if ours != oracle {
                    disagree += 1;
                    if disagree <= 5 {
                        out.note(format!("{name} {:?} {:?}: {ours:?} vs {oracle:?}", a.labels, b.labels));
                    }
                }
            }
        }
    }
    out.check(disagree == 0, format!("{pairs} pairs, {disagree} disagreements"));
    Ok(out)
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 11] = [
        ("lattice polytope extremes", criterion_1),
        ("eight-vertex antiprism extremes", criterion_2),
        ("minimal prism and antiprism triangulations", criterion_3),
        ("maximal prism triangulations", criterion_4),
        ("maximal antiprism triangulations", criterion_5),
        ("rational solids", criterion_6),
        ("P_m halving dissections and gap", criterion_7),
        ("edge identity, size bounds and regions", criterion_8),
        ("four-dimensional bipyramid", criterion_9),
        ("cube products", criterion_10),
        ("classification against the oracle", criterion_11),
    ];
    let filter: Option<Vec<usize>> = std::env::var("ACCEPTANCE_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let id = i + 1;
        if filter.as_ref().is_some_and(|f| !f.contains(&id)) {
            continue;
        }
        let start = Instant::now();
        let (ok, notes) = match run() {
            Ok(o) => (o.ok, o.notes),
            Err(e) => (false, vec![format!("error: {e}")]),
        };
        failed += usize::from(!ok);
        println!(
            "criterion {id:>2} {} {title} ({:.1}s): {}",
            if ok { "PASS" } else { "FAIL" },
            start.elapsed().as_secs_f64(),
            notes.join("; ")
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
