//! Exact rational and integer linear algebra shared by every other module.
//!
//! Purpose: one small, heavily tested kernel of primitives on top of
//! arbitrary-precision arithmetic so the rest of the crate never touches
//! floating point and never re-implements elimination or gcd plumbing.
//!
//! Contents:
//! * floor/ceil and falling factorials on [`Rational`],
//! * parsing and rendering of rationals in the `p/q` wire format,
//! * exact nullspace computation ([`kernel_basis`]),
//! * primitive integer vectors ([`primitive`]),
//! * the unique positive relation among four rays ([`positive_relation`]),
//! * the index of the sublattice spanned by integer vectors
//!   ([`lattice_index`]).

use std::fmt;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, Zero};

/// Arbitrary-precision rational number, always kept in lowest terms with a
/// positive denominator by the underlying representation.
pub type Rational = BigRational;

/// Errors raised by the integer-vector helpers in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    /// [`primitive`] was asked to scale the zero vector, which has no
    /// primitive representative.
    ZeroVector,
    /// [`positive_relation`] found no one-dimensional strictly positive
    /// kernel: the rays do not support a unique positive linear relation.
    NoPositiveRelation(String),
}

impl fmt::Display for ExactError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactError::ZeroVector => write!(f, "zero vector has no primitive representative"),
            ExactError::NoPositiveRelation(why) => {
                write!(f, "rays admit no unique positive relation: {why}")
            }
        }
    }
}

impl std::error::Error for ExactError {}

/// Error returned when a string is not a valid `p` or `p/q` rational.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseRationalError {
    input: String,
}

impl fmt::Display for ParseRationalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid rational {:?} (expected `p` or `p/q` with q != 0)", self.input)
    }
}

impl std::error::Error for ParseRationalError {}

/// Build a rational from an integer pair.
///
/// # Panics
///
/// Panics when `denom == 0`.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Build a rational from an integer.
pub fn int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

/// Parse the `p/q` wire format (also plain integers `p`).
///
/// # Examples
///
/// ```
/// use mds_oracle::exact::{parse_rational, rat};
/// assert_eq!(parse_rational("-3/4").unwrap(), rat(-3, 4));
/// assert_eq!(parse_rational("7").unwrap(), rat(7, 1));
/// assert!(parse_rational("1/0").is_err());
/// assert!(parse_rational("0.5").is_err());
/// ```
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let err = || ParseRationalError { input: s.to_owned() };
    let mut parts = s.splitn(2, '/');
    let numer: BigInt = parts.next().ok_or_else(err)?.trim().parse().map_err(|_| err())?;
    let denom: BigInt = match parts.next() {
        Some(d) => d.trim().parse().map_err(|_| err())?,
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(err());
    }
    Ok(Rational::new(numer, denom))
}

/// Render a rational in the `p/q` wire format (`p` when the denominator
/// is one).  Inverse of [`parse_rational`] on its image.
pub fn format_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Largest integer `<= x`.
///
/// # Examples
///
/// ```
/// use mds_oracle::exact::{rat_floor, rat};
/// use num::BigInt;
/// assert_eq!(rat_floor(&rat(7, 2)), BigInt::from(3));
/// assert_eq!(rat_floor(&rat(-7, 2)), BigInt::from(-4));
/// assert_eq!(rat_floor(&rat(-6, 2)), BigInt::from(-3));
/// ```
pub fn rat_floor(x: &Rational) -> BigInt {
    x.floor().to_integer()
}

/// Smallest integer `>= x`.
pub fn rat_ceil(x: &Rational) -> BigInt {
    x.ceil().to_integer()
}

/// Falling factorial `[x]_k = x (x-1) ... (x-k+1)`, with `[x]_0 = 1`.
///
/// # Examples
///
/// ```
/// use mds_oracle::exact::{falling_factorial, int, rat};
/// assert_eq!(falling_factorial(&int(5), 3), int(60));
/// assert_eq!(falling_factorial(&rat(1, 2), 2), rat(-1, 4));
/// assert_eq!(falling_factorial(&rat(-9, 7), 0), int(1));
/// ```
pub fn falling_factorial(x: &Rational, k: u32) -> Rational {
    let mut acc = Rational::one();
    let mut term = x.clone();
    for _ in 0..k {
        acc *= &term;
        term -= Rational::one();
    }
    acc
}

/// `n!` as a rational (convenience for normalization constants).
pub fn factorial(n: u32) -> Rational {
    falling_factorial(&int(n as i64), n)
}

/// Exact basis of the right nullspace `{ v : M v = 0 }` of a rational
/// matrix given as rows.
///
/// The basis is deterministic: Gauss–Jordan elimination with the first
/// usable pivot, one basis vector per free column (in ascending column
/// order), each vector cleared to a primitive integer vector whose free
/// coordinate is positive.
///
/// # Panics
///
/// Panics when the rows do not all have length `ncols`.
pub fn kernel_basis(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    for row in rows {
        assert_eq!(row.len(), ncols, "kernel_basis: ragged matrix");
    }
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let nrows = m.len();
    let mut pivot_cols: Vec<usize> = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..nrows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..nrows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let delta = &f * &m[r][j];
                    m[i][j] -= delta;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_cols.contains(&free) {
            continue;
        }
        let mut v = vec![Rational::zero(); ncols];
        v[free] = Rational::one();
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = -m[row][free].clone();
        }
        basis.push(clear_to_primitive(&v));
    }
    basis
}

/// Scale a nonzero rational vector to the unique parallel primitive integer
/// vector pointing the same way (entries coprime, direction preserved).
fn clear_to_primitive(v: &[Rational]) -> Vec<Rational> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = lcm.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let scaled = primitive(&ints).expect("clear_to_primitive: zero vector");
    scaled.into_iter().map(Rational::from_integer).collect()
}

/// Divide an integer vector by the (positive) gcd of its entries, keeping
/// its direction.
///
/// # Examples
///
/// ```
/// use mds_oracle::exact::{primitive, ExactError};
/// use num::BigInt;
/// let v: Vec<BigInt> = [-2i64, -4, 6].iter().map(|&x| BigInt::from(x)).collect();
/// let p: Vec<BigInt> = [-1i64, -2, 3].iter().map(|&x| BigInt::from(x)).collect();
/// assert_eq!(primitive(&v).unwrap(), p);
/// let z = vec![BigInt::from(0), BigInt::from(0)];
/// assert_eq!(primitive(&z), Err(ExactError::ZeroVector));
/// ```
pub fn primitive(v: &[BigInt]) -> Result<Vec<BigInt>, ExactError> {
    let mut g = BigInt::zero();
    for x in v {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return Err(ExactError::ZeroVector);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

/// Scale a rational vector to a primitive integer vector with the same
/// direction.
pub fn primitive_from_rational(v: &[Rational]) -> Result<Vec<BigInt>, ExactError> {
    if v.iter().all(|x| x.is_zero()) {
        return Err(ExactError::ZeroVector);
    }
    let cleared = clear_to_primitive(v);
    Ok(cleared.into_iter().map(|x| x.to_integer()).collect())
}

/// The unique (up to scale) strictly positive integer relation
/// `w_1 r_1 + ... + w_k r_k = 0` among the given rays, scaled primitive.
///
/// Intended for the four rays of a complete simplicial fan with four
/// maximal cones, where the relation recovers the weights of the
/// associated (quotient of a) weighted projective space.
///
/// # Errors
///
/// [`ExactError::NoPositiveRelation`] when the kernel of the ray matrix is
/// not one-dimensional or its generator has entries of mixed sign or zero.
///
/// # Panics
///
/// Panics when the rays do not all have the same length.
pub fn positive_relation(rays: &[Vec<BigInt>]) -> Result<Vec<BigInt>, ExactError> {
    let dim = rays.first().map_or(0, Vec::len);
    let rows: Vec<Vec<Rational>> = (0..dim)
        .map(|coord| {
            rays.iter()
                .map(|ray| {
                    assert_eq!(ray.len(), dim, "positive_relation: ragged rays");
                    Rational::from_integer(ray[coord].clone())
                })
                .collect()
        })
        .collect();
    let kernel = kernel_basis(&rows, rays.len());
    if kernel.len() != 1 {
        return Err(ExactError::NoPositiveRelation(format!(
            "kernel dimension {} instead of 1",
            kernel.len()
        )));
    }
    let mut w: Vec<BigInt> = kernel[0].iter().map(|x| x.to_integer()).collect();
    if w.iter().all(|x| x.is_negative()) {
        for x in w.iter_mut() {
            *x = -x.clone();
        }
    }
    if w.iter().all(|x| x.is_positive()) {
        Ok(w)
    } else {
        Err(ExactError::NoPositiveRelation(format!(
            "kernel generator ({}) is not strictly one-signed",
            w.iter().map(BigInt::to_string).collect::<Vec<_>>().join(", ")
        )))
    }
}

/// Index of the sublattice of `Z^d` generated by the given integer vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LatticeIndex {
    /// The vectors span a finite-index sublattice; the index is positive.
    Finite(BigInt),
    /// The vectors span a rank-deficient sublattice (infinite index).
    Infinite,
}

impl fmt::Display for LatticeIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeIndex::Finite(ix) => write!(f, "{ix}"),
            LatticeIndex::Infinite => write!(f, "infinite"),
        }
    }
}

/// Index of the sublattice of `Z^d` generated by `vecs`.
///
/// Computed as the gcd of all maximal (`d x d`) minors of the matrix with
/// the vectors as rows, which equals the product of the elementary
/// divisors; [`LatticeIndex::Infinite`] when the rank is below `d`.
///
/// # Panics
///
/// Panics when the vectors do not all have the same length.
pub fn lattice_index(vecs: &[Vec<BigInt>]) -> LatticeIndex {
    let Some(d) = vecs.first().map(Vec::len) else {
        return LatticeIndex::Infinite;
    };
    for v in vecs {
        assert_eq!(v.len(), d, "lattice_index: ragged vectors");
    }
    if vecs.len() < d {
        return LatticeIndex::Infinite;
    }
    let mut g = BigInt::zero();
    for combo in combinations(vecs.len(), d) {
        let sub: Vec<&Vec<BigInt>> = combo.iter().map(|&i| &vecs[i]).collect();
        g = g.gcd(&det(&sub));
    }
    if g.is_zero() {
        LatticeIndex::Infinite
    } else {
        LatticeIndex::Finite(g)
    }
}

/// All size-`k` index subsets of `0..n` in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > n {
        return out;
    }
    loop {
        out.push(cur.clone());
        // advance to the next lexicographic combination
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Determinant of a square integer matrix by cofactor expansion (tiny
/// matrices only).
fn det(m: &[&Vec<BigInt>]) -> BigInt {
    let n = m.len();
    match n {
        0 => BigInt::one(),
        1 => m[0][0].clone(),
        2 => &m[0][0] * &m[1][1] - &m[0][1] * &m[1][0],
        _ => {
            let mut acc = BigInt::zero();
            for (j, pivot) in m[0].iter().enumerate() {
                if pivot.is_zero() {
                    continue;
                }
                let minor: Vec<Vec<BigInt>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|&(c, _)| c != j)
                            .map(|(_, x)| x.clone())
                            .collect()
                    })
                    .collect();
                let refs: Vec<&Vec<BigInt>> = minor.iter().collect();
                let term = pivot * det(&refs);
                if j % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            acc
        }
    }
}

/// Integer gcd helper on `u64` (used by the weighted-projective module).
pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Integer lcm helper on `u64`.
///
/// # Panics
///
/// Panics on overflow.
pub fn lcm_u64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / a.gcd(&b) * b
}

/// Sign of a `BigInt` as -1, 0, 1 (convenience re-export for callers that
/// only need coarse comparisons).
pub fn sign(x: &BigInt) -> i32 {
    match x.sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}
