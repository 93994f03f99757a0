use std::sync::Arc;
use std::time::Instant;

use anyhow::{Context, Result};
use serde_json::json;

use dissect_core::complexes::{report, validate as validate_family, SimplexFamily, Status};
use dissect_core::extremal::{enumerate_optima, model_for, solve as run_solver, Budget};
use dissect_core::families::{self, Built, FamilySpec};
use dissect_core::simplexrel::{format_simplices, parse_simplices};
use dissect_core::PointConfiguration;

use crate::report::{solve_json, Outcome, RunReport};
use crate::suites;
use crate::{Construction, ExpectArg, GenArgs, SolveArgs, TableArgs, ValidateArgs};

fn read(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

pub fn construct(built: &Built, c: Construction) -> Result<SimplexFamily> {
    use families::*;
    Ok(match c {
        Construction::Placing => {
            let order: Vec<usize> = (0..built.config.len()).collect();
            placing_triangulation(&built.config, &order)?
        }
        Construction::PrismMin => prism_min_triangulation(built)?,
        Construction::PrismMaxPlacing => prism_max_placing(built)?,
        Construction::PrismMaxSplit => prism_max_split(built)?,
        Construction::AntiprismMin => antiprism_min_triangulation(built)?,
        Construction::AntiprismMax => antiprism_max_construction(built)?,
        Construction::Trapezoid7 => trapezoid_cube_7(built)?,
        Construction::LatticeDissection => lattice_example_dissection(built)?,
        Construction::LatticeTriangulation => lattice_example_triangulation11(built)?,
        Construction::PmSmall => small_pm_triangulation(built)?,
        Construction::PmHalvingMax => max_halving_dissection(built)?,
        Construction::Bipyramid => schoenhardt_bipyramid_dissection(built)?,
    })
}

pub fn gen(argv: &[String], a: GenArgs) -> Result<Outcome> {
    let start = Instant::now();
    let spec = FamilySpec::new(a.family).with_m(a.m).with_d(a.d).with_coords(a.coords);
    let built = families::build(&spec)?;
    let text = built.config.to_text();
    std::fs::write(&a.out, &text).with_context(|| format!("writing {}", a.out.display()))?;
    let mut rep = RunReport::new(argv);
    rep.input("coordinates", text.as_bytes());
    let mut outputs = json!({
        "points": built.config.len(),
        "dim": built.config.dim(),
        "names": built.names,
    });
    if let (Some(c), Some(path)) = (a.construction, a.simplices_out.as_ref()) {
        let fam = construct(&built, c)?;
        let sets = fam.canonical_labels();
        std::fs::write(path, format_simplices(&sets)).with_context(|| format!("writing {}", path.display()))?;
        outputs["construction"] = json!({ "size": fam.size(), "status": fam.status() });
    }
    rep.outputs = outputs;
    rep.timing_ms = start.elapsed().as_millis() as u64;
    if let Some(p) = &a.report {
        rep.emit(Some(p))?;
    }
    Ok(Outcome::Pass)
}

pub fn validate(argv: &[String], a: ValidateArgs) -> Result<Outcome> {
    let start = Instant::now();
    let (ptext, stext) = (read(&a.polytope)?, read(&a.simplices)?);
    let config = Arc::new(PointConfiguration::parse(&ptext)?);
    let sets = parse_simplices(&stext)?;
    let mut fam = SimplexFamily::new(config, &sets)?;
    let v = validate_family(&fam);
    let fr = report(&mut fam)?;
    let mut rep = RunReport::new(argv);
    rep.input("polytope", ptext.as_bytes());
    rep.input("simplices", stext.as_bytes());
    rep.outcome = match a.expect {
        None => Outcome::Pass,
        Some(ExpectArg::Triangulation) if fr.status == Status::Triangulation => Outcome::Pass,
        Some(ExpectArg::Dissection) if fr.status == Status::Dissection => Outcome::Pass,
        Some(_) => Outcome::Mismatch,
    };
    rep.outputs = json!({
        "report": fr,
        "volume_deficit": dissect_core::exactgeom::format_rat(&v.deficit()),
    });
    rep.timing_ms = start.elapsed().as_millis() as u64;
    rep.emit(a.out.as_deref())?;
    Ok(rep.outcome)
}

pub fn solve(argv: &[String], a: SolveArgs) -> Result<Outcome> {
    let start = Instant::now();
    let ptext = read(&a.polytope)?;
    let config = Arc::new(PointConfiguration::parse(&ptext)?);
    let model = model_for(&config, a.mode.into(), a.sense.into())?;
    let budget = Budget::nodes(a.node_budget);
    let result = run_solver(&model, budget)?;
    let mut rep = RunReport::new(argv);
    rep.input("polytope", ptext.as_bytes());
    let mut outputs = json!({
        "variables": model.variables(),
        "exclusion_pairs": model.exclusion_pairs(),
        "solve": solve_json(&result),
    });
    let mut outcome = if result.proven {
        Outcome::Pass
    } else {
        Outcome::BudgetExhausted
    };
    if a.enumerate && result.proven {
        let e = enumerate_optima(&model, &result, budget)?;
        if !e.complete {
            outcome = Outcome::BudgetExhausted;
        }
        outputs["optima"] = json!({ "count": e.optima.len(), "complete": e.complete, "families": e.optima });
    }
    if outcome == Outcome::Pass && a.expect.is_some_and(|x| x != result.optimum) {
        outcome = Outcome::Mismatch;
    }
    rep.outcome = outcome;
    rep.outputs = outputs;
    rep.timing_ms = start.elapsed().as_millis() as u64;
    rep.emit(a.out.as_deref())?;
    Ok(outcome)
}

pub fn table(argv: &[String], a: TableArgs) -> Result<Outcome> {
    let start = Instant::now();
    let mut rep = RunReport::new(argv);
    let rows = suites::run(a.suite, Budget::nodes(a.node_budget), a.max_m, &mut rep)?;
    rep.outcome = rows.iter().map(|r| r.outcome).max().unwrap_or(Outcome::Pass);
    rep.outputs = json!({ "rows": rows });
    rep.timing_ms = start.elapsed().as_millis() as u64;
    rep.emit(a.out.as_deref())?;
    Ok(rep.outcome)
}
