//! Integer kernels shared by the predicates.
//!
//! Every routine here is written once over [`ExactInt`] and instantiated
//! twice: with checked `i128` (returns `None` on overflow) and with `BigInt`
//! (never fails). Callers try the fast instance first and fall back.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait ExactInt: Clone + std::fmt::Debug + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn add(&self, o: &Self) -> Option<Self>;
    fn sub(&self, o: &Self) -> Option<Self>;
    fn mul(&self, o: &Self) -> Option<Self>;
    fn div_exact(&self, o: &Self) -> Option<Self>;
    fn neg(&self) -> Option<Self>;
    fn signum(&self) -> i8;
    fn to_big(&self) -> BigInt;

    fn is_zero(&self) -> bool {
        self.signum() == 0
    }
}

impl ExactInt for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn add(&self, o: &Self) -> Option<Self> {
        self.checked_add(*o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        self.checked_sub(*o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        self.checked_mul(*o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        self.checked_div(*o)
    }
    fn neg(&self) -> Option<Self> {
        self.checked_neg()
    }
    fn signum(&self) -> i8 {
        i128::signum(*self) as i8
    }
    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }
}

impl ExactInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn add(&self, o: &Self) -> Option<Self> {
        Some(self + o)
    }
    fn sub(&self, o: &Self) -> Option<Self> {
        Some(self - o)
    }
    fn mul(&self, o: &Self) -> Option<Self> {
        Some(self * o)
    }
    fn div_exact(&self, o: &Self) -> Option<Self> {
        Some(self.div_floor(o))
    }
    fn neg(&self) -> Option<Self> {
        Some(-self)
    }
    fn signum(&self) -> i8 {
        if self.is_positive() {
            1
        } else if self.is_negative() {
            -1
        } else {
            0
        }
    }
    fn to_big(&self) -> BigInt {
        self.clone()
    }
}

/// Runs `f` over checked `i128`, and over `BigInt` if that overflowed.
pub fn with_fallback<R>(
    points: &[&[BigInt]],
    f: impl Fn(&[Vec<i128>]) -> Option<R>,
    g: impl Fn(&[Vec<BigInt>]) -> Option<R>,
) -> R {
    let small: Option<Vec<Vec<i128>>> = points
        .iter()
        .map(|p| p.iter().map(|c| c.to_i128()).collect::<Option<Vec<_>>>())
        .collect();
    if let Some(small) = small {
        if let Some(r) = f(&small) {
            return r;
        }
    }
    let big: Vec<Vec<BigInt>> = points.iter().map(|p| p.to_vec()).collect();
    g(&big).expect("BigInt arithmetic cannot overflow")
}

/// Fraction-free (Bareiss) determinant.
pub fn bareiss_det<T: ExactInt>(mut m: Vec<Vec<T>>) -> Option<T> {
    let n = m.len();
    if n == 0 {
        return Some(T::one());
    }
    let mut negate = false;
    let mut prev = T::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !m[i][k].is_zero()) else {
                return Some(T::zero());
            };
            m.swap(k, p);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let a = m[i][j].mul(&m[k][k])?;
                let b = m[i][k].mul(&m[k][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev)?;
            }
        }
        prev = m[k][k].clone();
    }
    let d = m[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        Some(d)
    }
}

/// Rank of a (not necessarily square) integer matrix, fraction-free.
pub fn rank<T: ExactInt>(mut m: Vec<Vec<T>>) -> Option<usize> {
    let rows = m.len();
    if rows == 0 {
        return Some(0);
    }
    let cols = m[0].len();
    let mut r = 0;
    let mut prev = T::one();
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                let a = m[i][j].mul(&m[r][c])?;
                let b = m[i][c].mul(&m[r][j])?;
                m[i][j] = a.sub(&b)?.div_exact(&prev)?;
            }
            m[i][c] = T::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    Some(r)
}

/// Homogeneous determinant `det[(1, p_0); ...; (1, p_k)]` for k+1 points in R^k.
pub fn homog_det<T: ExactInt>(points: &[Vec<T>]) -> Option<T> {
    let m = points
        .iter()
        .map(|p| {
            let mut row = Vec::with_capacity(p.len() + 1);
            row.push(T::one());
            row.extend(p.iter().cloned());
            row
        })
        .collect();
    bareiss_det(m)
}

/// `det[b - a; c - a; d - a]`, equal to the homogeneous determinant.
pub fn det3_diff(a: &[i128], b: &[i128], c: &[i128], d: &[i128]) -> Option<i128> {
    let r = |p: &[i128]| -> Option<[i128; 3]> { Some([p[0].checked_sub(a[0])?, p[1].checked_sub(a[1])?, p[2].checked_sub(a[2])?]) };
    let (u, v, w) = (r(b)?, r(c)?, r(d)?);
    let m = |x: i128, y: i128| x.checked_mul(y);
    let c0 = m(v[1], w[2])?.checked_sub(m(v[2], w[1])?)?;
    let c1 = m(v[2], w[0])?.checked_sub(m(v[0], w[2])?)?;
    let c2 = m(v[0], w[1])?.checked_sub(m(v[1], w[0])?)?;
    m(u[0], c0)?.checked_add(m(u[1], c1)?)?.checked_add(m(u[2], c2)?)
}

/// Vector `n` with `n . x = det[v_1; ...; v_{k-1}; x]` for k-1 vectors in R^k.
pub fn cross_normal<T: ExactInt>(vectors: &[&[T]]) -> Option<Vec<T>> {
    let k = vectors.len() + 1;
    match vectors {
        [v] if v.len() == 2 => return Some(vec![v[1].neg()?, v[0].clone()]),
        [u, v] if u.len() == 3 && v.len() == 3 => {
            let c = |i: usize, j: usize| u[i].mul(&v[j])?.sub(&u[j].mul(&v[i])?);
            return Some(vec![c(1, 2)?, c(2, 0)?, c(0, 1)?]);
        }
        _ => {}
    }
    let mut n = Vec::with_capacity(k);
    for i in 0..k {
        let minor: Vec<Vec<T>> = vectors
            .iter()
            .map(|v| {
                v.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let d = bareiss_det(minor)?;
        n.push(if (k - 1 + i) % 2 == 1 { d.neg()? } else { d });
    }
    Some(n)
}

pub fn dot<T: ExactInt>(a: &[T], b: &[T]) -> Option<T> {
    let mut s = T::zero();
    for (x, y) in a.iter().zip(b) {
        s = s.add(&x.mul(y)?)?;
    }
    Some(s)
}

/// How two full-dimensional convex hulls of point sets sit relative to each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Separation {
    /// Open interiors intersect.
    Overlap,
    /// A hyperplane separates them but both touch it.
    Weak,
    /// Some hyperplane separates the closed sets with positive gap.
    Strict,
}

/// Decides whether conv(a) and conv(b) (both full-dimensional in R^k) have
/// disjoint interiors.
///
/// The interiors are disjoint iff some facet normal of the Minkowski
/// difference conv(a) - conv(b) weakly separates them, and every such normal
/// is orthogonal to k-1 independent edge directions drawn from a and b.
/// All pairwise differences are used as edge directions, so the point lists
/// need not be in convex position.
pub fn separation<T: ExactInt>(a: &[Vec<T>], b: &[Vec<T>]) -> Option<Separation> {
    let k = a[0].len();
    let mut dirs: Vec<Vec<T>> = Vec::new();
    for set in [a, b] {
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                let d = set[j]
                    .iter()
                    .zip(&set[i])
                    .map(|(x, y)| x.sub(y))
                    .collect::<Option<Vec<T>>>()?;
                dirs.push(d);
            }
        }
    }
    if k == 1 {
        return interval_separation(a, b);
    }
    let mut weak = false;
    let mut idx: Vec<usize> = (0..k - 1).collect();
    let m = dirs.len();
    loop {
        let vs: Vec<&[T]> = idx.iter().map(|&i| dirs[i].as_slice()).collect();
        let n = cross_normal(&vs)?;
        if n.iter().any(|c| !c.is_zero()) {
            let (amin, amax) = extent(&n, a)?;
            let (bmin, bmax) = extent(&n, b)?;
            let ab = amax.sub(&bmin)?.signum();
            let ba = bmax.sub(&amin)?.signum();
            if ab < 0 || ba < 0 {
                return Some(Separation::Strict);
            }
            if ab == 0 || ba == 0 {
                weak = true;
            }
        }
        // next combination
        let mut i = k - 1;
        loop {
            if i == 0 {
                return Some(if weak { Separation::Weak } else { Separation::Overlap });
            }
            i -= 1;
            if idx[i] < m - (k - 1) + i {
                idx[i] += 1;
                for j in i + 1..k - 1 {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// Separation of two tetrahedra in R^3 through the normals `e x f`, `e` an
/// edge of `a` and `f` an edge of `b`. Together with the facet normals of
/// both these are all facet normals of `a - b`; the caller has ruled out the
/// facet normals.
pub fn cross_edge_separation<T: ExactInt>(a: &[Vec<T>], b: &[Vec<T>]) -> Option<Separation> {
    let edges = |set: &[Vec<T>]| -> Option<Vec<Vec<T>>> {
        let mut out = Vec::with_capacity(6);
        for i in 0..set.len() {
            for j in i + 1..set.len() {
                out.push(set[j].iter().zip(&set[i]).map(|(x, y)| x.sub(y)).collect::<Option<Vec<T>>>()?);
            }
        }
        Some(out)
    };
    let (ea, eb) = (edges(a)?, edges(b)?);
    let mut weak = false;
    for e in &ea {
        for f in &eb {
            let n = cross_normal(&[e, f])?;
            if n.iter().all(|c| c.is_zero()) {
                continue;
            }
            let (amin, amax) = extent(&n, a)?;
            let (bmin, bmax) = extent(&n, b)?;
            let ab = amax.sub(&bmin)?.signum();
            let ba = bmax.sub(&amin)?.signum();
            if ab < 0 || ba < 0 {
                return Some(Separation::Strict);
            }
            weak |= ab == 0 || ba == 0;
        }
    }
    Some(if weak { Separation::Weak } else { Separation::Overlap })
}

fn interval_separation<T: ExactInt>(a: &[Vec<T>], b: &[Vec<T>]) -> Option<Separation> {
    let one = vec![T::one()];
    let (amin, amax) = extent(&one, a)?;
    let (bmin, bmax) = extent(&one, b)?;
    let ab = amax.sub(&bmin)?.signum();
    let ba = bmax.sub(&amin)?.signum();
    Some(if ab < 0 || ba < 0 {
        Separation::Strict
    } else if ab == 0 || ba == 0 {
        Separation::Weak
    } else {
        Separation::Overlap
    })
}

fn extent<T: ExactInt>(n: &[T], pts: &[Vec<T>]) -> Option<(T, T)> {
    let mut lo = dot(n, &pts[0])?;
    let mut hi = lo.clone();
    for p in &pts[1..] {
        let v = dot(n, p)?;
        if v.sub(&lo)?.signum() < 0 {
            lo = v.clone();
        }
        if v.sub(&hi)?.signum() > 0 {
            hi = v;
        }
    }
    Some((lo, hi))
}

/// Signs of the (unique up to scale) affine dependency among `points`, if
/// they form a circuit: rank k-1 and every coefficient nonzero.
pub fn circuit_signs<T: ExactInt>(points: &[Vec<T>]) -> Option<Option<Vec<i8>>> {
    let k = points.len();
    let d = points[0].len();
    // columns are homogenized points; we work with rows of the transposed view
    let rows: Vec<Vec<T>> = (0..=d)
        .map(|r| {
            points
                .iter()
                .map(|p| if r == 0 { T::one() } else { p[r - 1].clone() })
                .collect()
        })
        .collect();
    if rank(rows.clone())? != k - 1 {
        return Some(None);
    }
    // pick k-1 independent rows; the kernel is spanned by signed maximal minors
    let mut chosen: Vec<usize> = Vec::new();
    for r in 0..rows.len() {
        let mut trial: Vec<Vec<T>> = chosen.iter().map(|&i| rows[i].clone()).collect();
        trial.push(rows[r].clone());
        if rank(trial)? == chosen.len() + 1 {
            chosen.push(r);
            if chosen.len() == k - 1 {
                break;
            }
        }
    }
    let sub: Vec<&Vec<T>> = chosen.iter().map(|&i| &rows[i]).collect();
    let mut signs = Vec::with_capacity(k);
    for i in 0..k {
        let minor: Vec<Vec<T>> = sub
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .map(|(_, x)| x.clone())
                    .collect()
            })
            .collect();
        let s = bareiss_det(minor)?.signum();
        if s == 0 {
            return Some(None);
        }
        signs.push(if i % 2 == 1 { -s } else { s });
    }
    Some(Some(signs))
}
