use anyhow::Result;
use serde::Serialize;

use dissect_core::extremal::{enumerate_optima, model_for, solve, Budget, Mode, Sense};
use dissect_core::families::{self, Coords, FamilyKind, FamilySpec};

use crate::report::{sha256, Outcome, RunReport};
use crate::Suite;

const PRISM_MAX: [usize; 10] = [3, 6, 10, 14, 19, 24, 30, 36, 43, 50];
const ANTIPRISM_MAX: [usize; 10] = [4, 8, 12, 17, 22, 28, 34, 41, 48, 56];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Multiplicity {
    Unique,
    Several,
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub instance: String,
    pub mode: Mode,
    pub sense: Sense,
    pub expected: Option<usize>,
    pub expected_multiplicity: Option<Multiplicity>,
    /// Where the expected value comes from.
    pub source: String,
    pub computed: usize,
    pub proven: bool,
    pub bound: usize,
    pub nodes: u64,
    pub optima: Option<usize>,
    pub coords_hash: String,
    pub outcome: Outcome,
    pub note: Option<String>,
}

struct Case {
    spec: FamilySpec,
    instance: String,
    mode: Mode,
    sense: Sense,
    expected: Option<usize>,
    multiplicity: Option<Multiplicity>,
    source: String,
    /// Regular polygon orders without an exact rational model.
    irrational_base: bool,
}

fn case(spec: FamilySpec, instance: impl Into<String>, mode: Mode, sense: Sense, expected: Option<usize>, source: &str) -> Case {
    Case {
        spec,
        instance: instance.into(),
        mode,
        sense,
        expected,
        multiplicity: None,
        source: source.into(),
        irrational_base: false,
    }
}

fn run_case(c: &Case, budget: Budget, rep: &mut RunReport) -> Result<Row> {
    let built = families::build(&c.spec)?;
    let text = built.config.to_text();
    let hash = sha256(text.as_bytes());
    rep.input(c.instance.clone(), text.as_bytes());
    let model = model_for(&built.config, c.mode, c.sense)?;
    let r = solve(&model, budget)?;
    let mut optima = None;
    let mut complete = true;
    if c.multiplicity.is_some() && r.proven {
        let e = enumerate_optima(&model, &r, budget)?;
        complete = e.complete;
        optima = Some(e.optima.len());
    }
    let mut note = None;
    let outcome = if !r.proven || !complete {
        note = Some("node budget exhausted".into());
        Outcome::BudgetExhausted
    } else if c.expected.is_some_and(|e| e != r.optimum) {
        if c.irrational_base {
            note = Some("coordinatization-sensitive: the regular base has no rational realization".into());
        }
        Outcome::Mismatch
    } else {
        let mult_ok = match (c.multiplicity, optima) {
            (Some(Multiplicity::Unique), Some(k)) => k == 1,
            (Some(Multiplicity::Several), Some(k)) => k >= 2,
            _ => true,
        };
        if mult_ok {
            Outcome::Pass
        } else {
            note = Some("number of optima differs".into());
            Outcome::Mismatch
        }
    };
    Ok(Row {
        instance: c.instance.clone(),
        mode: c.mode,
        sense: c.sense,
        expected: c.expected,
        expected_multiplicity: c.multiplicity,
        source: c.source.clone(),
        computed: r.optimum,
        proven: r.proven,
        bound: r.bound,
        nodes: r.stats.nodes,
        optima,
        coords_hash: hash,
        outcome,
        note,
    })
}

fn cases(suite: Suite, max_m: usize) -> Vec<Case> {
    use FamilyKind::*;
    let (tri, diss) = (Mode::Triangulation, Mode::Dissection);
    match suite {
        Suite::Table1Rational => {
            let src = "extremal triangulations of Archimedean solids and duals";
            vec![
                case(FamilySpec::new(TruncTetrahedron), "truncated-tetrahedron", tri, Sense::Min, Some(10), src),
                case(FamilySpec::new(TruncTetrahedron), "truncated-tetrahedron", tri, Sense::Max, Some(13), src),
                case(FamilySpec::new(Cuboctahedron), "cuboctahedron", tri, Sense::Min, Some(13), src),
                case(FamilySpec::new(Cuboctahedron), "cuboctahedron", tri, Sense::Max, Some(17), src),
                case(FamilySpec::new(RhombicDodecahedron), "rhombic-dodecahedron", tri, Sense::Min, Some(12), src),
                case(FamilySpec::new(RhombicDodecahedron), "rhombic-dodecahedron", tri, Sense::Max, Some(21), src),
                case(FamilySpec::new(TruncOctahedron), "truncated-octahedron", tri, Sense::Min, Some(27), src),
            ]
        }
        Suite::Table2Prisms | Suite::Table2Antiprisms => {
            let (kind, values, name) = match suite {
                Suite::Table2Prisms => (Prism, PRISM_MAX, "prism"),
                _ => (Antiprism, ANTIPRISM_MAX, "antiprism"),
            };
            (3..=max_m.min(12))
                .map(|m| {
                    let spec = FamilySpec::new(kind).with_m(m).with_coords(Coords::RegularApprox);
                    let mut c = case(
                        spec,
                        format!("{name}-{m}"),
                        tri,
                        Sense::Max,
                        Some(values[m - 3]),
                        &format!("maximal triangulations of {name}s over regular polygons"),
                    );
                    c.irrational_base = ![3, 4, 6].contains(&m);
                    c
                })
                .collect()
        }
        Suite::Prop23 => {
            let src = "extremal dissections and triangulations of the two eight-vertex polytopes";
            let lat = FamilySpec::new(LatticeP);
            let anti = FamilySpec::new(Antiprism8P);
            let with = |mut c: Case, m: Multiplicity| {
                c.multiplicity = Some(m);
                c
            };
            use Multiplicity::*;
            vec![
                with(case(lat, "lattice-p", diss, Sense::Max, Some(12), src), Unique),
                with(case(lat, "lattice-p", tri, Sense::Max, Some(11), src), Several),
                case(lat, "lattice-p", diss, Sense::Min, None, "recorded only"),
                case(lat, "lattice-p", tri, Sense::Min, None, "recorded only"),
                with(case(anti, "antiprism8-p", diss, Sense::Min, Some(6), src), Unique),
                with(case(anti, "antiprism8-p", tri, Sense::Min, Some(7), src), Several),
                with(case(anti, "antiprism8-p", tri, Sense::Max, Some(9), src), Several),
                with(case(anti, "antiprism8-p", diss, Sense::Max, Some(10), src), Unique),
            ]
        }
        Suite::PmGap => Vec::new(),
    }
}

/// Maximal triangulation of P_8 against the 4m - 6 halving dissection and
/// the floor(7m/2) + 1 upper bound.
fn pm_gap(budget: Budget, rep: &mut RunReport) -> Result<Vec<Row>> {
    let m = 8;
    let spec = FamilySpec::new(FamilyKind::Pm).with_m(m);
    let built = families::build(&spec)?;
    let construction = families::max_halving_dissection(&built)?.size();
    let mut row = run_case(
        &case(spec, format!("pm-{m}"), Mode::Triangulation, Sense::Max, None, "recorded only"),
        budget,
        rep,
    )?;
    let ceiling = 7 * m / 2 + 1;
    if row.outcome == Outcome::Pass && row.bound > ceiling {
        row.outcome = Outcome::Mismatch;
    }
    row.note = Some(format!(
        "halving dissection {construction}, maximal triangulation {}{}, ceiling {ceiling}, gap {}",
        row.computed,
        if row.proven { "" } else { " (not proven)" },
        construction > row.bound
    ));
    Ok(vec![row])
}

pub fn run(suite: Suite, budget: Budget, max_m: usize, rep: &mut RunReport) -> Result<Vec<Row>> {
    if let Suite::PmGap = suite {
        return pm_gap(budget, rep);
    }
    cases(suite, max_m).iter().map(|c| run_case(c, budget, rep)).collect()
}
