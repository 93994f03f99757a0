//! Exact rational arithmetic, determinants and the two basic predicates:
//! orientation/volume and strict-interior feasibility of two simplices.

pub mod lp;
pub mod ring;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{structural, Error, Result};
use crate::pointconfig::PointConfiguration;

/// Exact rational, always in lowest terms with positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `p/q`, `p`, or a plain decimal such as `-0.1` into an exact rational.
pub fn parse_rat(s: &str) -> std::result::Result<Rat, String> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator in {s:?}"))?;
        let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator in {s:?}"))?;
        if q.is_zero() {
            return Err(format!("zero denominator in {s:?}"));
        }
        return Ok(Rat::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        let neg = whole.starts_with('-');
        let digits = format!("{}{}", whole.trim_start_matches(['-', '+']), frac);
        let num: BigInt = digits.parse().map_err(|_| format!("bad decimal {s:?}"))?;
        let den = num_traits::pow(BigInt::from(10), frac.len());
        let v = Rat::new(num, den);
        return Ok(if neg { -v } else { v });
    }
    s.parse::<BigInt>()
        .map(Rat::from_integer)
        .map_err(|_| format!("bad rational {s:?}"))
}

/// Canonical text form: `p/q`, or `p` when the denominator is one.
pub fn format_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Point(pub Vec<Rat>);

impl Point {
    pub fn from_ints(c: &[i64]) -> Self {
        Point(c.iter().map(|&v| int(v)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

/// Exact determinant of a square rational matrix.
pub fn det(matrix: &[Vec<Rat>]) -> Result<Rat> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return structural(format!("determinant of a non-square {n}-row matrix"));
    }
    // clear denominators row by row, then run Bareiss on integers
    let mut scale = BigInt::one();
    let rows: Vec<Vec<BigInt>> = matrix
        .iter()
        .map(|row| {
            let l = row.iter().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
            scale *= &l;
            row.iter().map(|v| v.numer() * (&l / v.denom())).collect()
        })
        .collect();
    let d = ring::bareiss_det(rows).expect("BigInt");
    Ok(Rat::new(d, scale))
}

/// Volume of the simplex spanned by `vertices` (d+1 labels) in `config`.
pub fn simplex_volume(config: &PointConfiguration, vertices: &[usize]) -> Result<Rat> {
    config.simplex_volume(vertices)
}

/// `coeffs . x + constant`, read as the inequality `>= 0` when part of a system.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AffineFunctional {
    #[serde(with = "rat_vec")]
    pub coeffs: Vec<Rat>,
    #[serde(with = "rat_one")]
    pub constant: Rat,
}

impl AffineFunctional {
    pub fn eval(&self, x: &[Rat]) -> Rat {
        self.coeffs
            .iter()
            .zip(x)
            .fold(self.constant.clone(), |acc, (a, b)| acc + a * b)
    }

    pub fn negated(&self) -> Self {
        AffineFunctional {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            constant: -&self.constant,
        }
    }

    /// Scales to coprime integer coefficients, keeping the sign of the functional.
    pub fn primitive(&self) -> Self {
        let den = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let nums: Vec<BigInt> = self
            .coeffs
            .iter()
            .chain(std::iter::once(&self.constant))
            .map(|v| v.numer() * (&den / v.denom()))
            .collect();
        let g = nums.iter().fold(BigInt::zero(), |acc, v| acc.gcd(v));
        if g.is_zero() {
            return self.clone();
        }
        let mut out: Vec<Rat> = nums.iter().map(|v| Rat::from_integer(v / &g)).collect();
        let constant = out.pop().unwrap();
        AffineFunctional { coeffs: out, constant }
    }
}

/// A conjunction of `f_i(x) >= 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct HalfspaceSystem {
    pub dim: usize,
    pub rows: Vec<AffineFunctional>,
}

impl HalfspaceSystem {
    /// The barycentric-coordinate description of a full-dimensional simplex:
    /// row i is the i-th barycentric coordinate, so slack 1 at vertex i.
    pub fn from_simplex(points: &[&Point]) -> Result<Self> {
        let d = points[0].dim();
        if points.len() != d + 1 || points.iter().any(|p| p.dim() != d) {
            return structural(format!("a {d}-simplex needs {} points", d + 1));
        }
        // invert the homogeneous matrix: columns (1, p_i)
        let mut m: Vec<Vec<Rat>> = (0..=d)
            .map(|r| {
                points
                    .iter()
                    .map(|p| if r == 0 { Rat::one() } else { p.0[r - 1].clone() })
                    .collect()
            })
            .collect();
        let inv = invert(&mut m).ok_or_else(|| Error::Degenerate("flat simplex".into()))?;
        // lambda = inv * (1, x): row i gives constant inv[i][0], coeffs inv[i][1..]
        let rows = inv
            .into_iter()
            .map(|row| AffineFunctional {
                constant: row[0].clone(),
                coeffs: row[1..].to_vec(),
            })
            .collect();
        Ok(HalfspaceSystem { dim: d, rows })
    }

    pub fn contains_strictly(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|f| f.eval(x).is_positive())
    }
}

fn invert(m: &mut [Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = m.len();
    let mut inv: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Rat::one() } else { Rat::zero() }).collect())
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&r| !m[r][c].is_zero())?;
        m.swap(c, p);
        inv.swap(c, p);
        let pv = m[c][c].clone();
        for j in 0..n {
            m[c][j] /= &pv;
            inv[c][j] /= &pv;
        }
        for r in 0..n {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n {
                    let a = &f * &m[c][j];
                    m[r][j] -= a;
                    let b = &f * &inv[c][j];
                    inv[r][j] -= b;
                }
            }
        }
    }
    Some(inv)
}

/// Result of the strict common point test.
#[derive(Clone, Debug, PartialEq)]
pub struct Feasibility {
    pub feasible: bool,
    /// Optimal minimum slack (capped at 1).
    pub slack: Rat,
    /// A point strictly inside every halfspace, when feasible.
    pub witness: Option<Vec<Rat>>,
}

/// Is there a point strictly satisfying every inequality of both systems?
///
/// Solved exactly by maximizing the minimum slack; the interiors meet iff
/// the optimum is positive, and the optimizer is returned as a witness.
pub fn strict_common_point(a: &HalfspaceSystem, b: &HalfspaceSystem) -> Result<Feasibility> {
    if a.dim != b.dim {
        return structural(format!("systems in dimensions {} and {}", a.dim, b.dim));
    }
    max_min_slack(a.dim, a.rows.iter().chain(&b.rows))
}

/// Maximizes `t` subject to `f(x) >= t` for every row and `t <= 1`.
pub fn max_min_slack<'a>(
    dim: usize,
    rows: impl Iterator<Item = &'a AffineFunctional>,
) -> Result<Feasibility> {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for f in rows {
        if f.coeffs.len() != dim {
            return structural("functional of the wrong dimension");
        }
        // -coeffs . x + t <= constant
        let mut row: Vec<Rat> = f.coeffs.iter().map(|c| -c).collect();
        row.push(Rat::one());
        a.push(row);
        b.push(f.constant.clone());
    }
    let mut cap = vec![Rat::zero(); dim];
    cap.push(Rat::one());
    a.push(cap);
    b.push(Rat::one());
    let mut c = vec![Rat::zero(); dim];
    c.push(Rat::one());
    match lp::maximize(&a, &b, &c) {
        lp::LpOutcome::Optimal { mut x, value } => {
            x.pop();
            let feasible = value.is_positive();
            Ok(Feasibility {
                feasible,
                slack: value,
                witness: feasible.then_some(x),
            })
        }
        // t can always be pushed down, and it is capped above
        _ => Err(Error::Consistency("slack LP must have an optimum".into())),
    }
}

/// Do the relative interiors of conv(a) and conv(b) meet? Each list must be
/// affinely independent (a simplex of any dimension in a common ambient space).
pub fn relative_interiors_meet(a: &[&Point], b: &[&Point]) -> Result<bool> {
    let d = a[0].dim();
    if a.iter().chain(b).any(|p| p.dim() != d) {
        return structural("points of different dimensions");
    }
    // variables: lambda (|a|), mu (|b|), t; maximize t
    let nv = a.len() + b.len() + 1;
    let t = nv - 1;
    let mut rows: Vec<Vec<Rat>> = Vec::new();
    let mut rhs: Vec<Rat> = Vec::new();
    let mut eq = |row: Vec<Rat>, v: Rat| {
        rows.push(row.iter().map(|x| -x).collect());
        rhs.push(-&v);
        rows.push(row);
        rhs.push(v);
    };
    let mut sum_a = vec![Rat::zero(); nv];
    let mut sum_b = vec![Rat::zero(); nv];
    for i in 0..a.len() {
        sum_a[i] = Rat::one();
    }
    for j in 0..b.len() {
        sum_b[a.len() + j] = Rat::one();
    }
    eq(sum_a, Rat::one());
    eq(sum_b, Rat::one());
    for c in 0..d {
        let mut row = vec![Rat::zero(); nv];
        for (i, p) in a.iter().enumerate() {
            row[i] = p.0[c].clone();
        }
        for (j, p) in b.iter().enumerate() {
            row[a.len() + j] = -&p.0[c];
        }
        eq(row, Rat::zero());
    }
    for i in 0..t {
        // t - x_i <= 0
        let mut row = vec![Rat::zero(); nv];
        row[i] = -Rat::one();
        row[t] = Rat::one();
        rows.push(row);
        rhs.push(Rat::zero());
    }
    let mut cap = vec![Rat::zero(); nv];
    cap[t] = Rat::one();
    rows.push(cap.clone());
    rhs.push(Rat::one());
    Ok(match lp::maximize(&rows, &rhs, &cap) {
        lp::LpOutcome::Optimal { value, .. } => value.is_positive(),
        _ => false,
    })
}

pub(crate) mod rat_vec {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rat], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(format_rat))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rat>, D::Error> {
        let raw: Vec<String> = Vec::deserialize(d)?;
        raw.iter()
            .map(|s| parse_rat(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub(crate) mod rat_one {
    use super::{format_rat, parse_rat, Rat};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Rat, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rat(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rat, D::Error> {
        let raw = String::deserialize(d)?;
        parse_rat(&raw).map_err(serde::de::Error::custom)
    }
}
