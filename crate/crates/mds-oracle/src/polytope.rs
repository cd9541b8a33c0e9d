//! Lattice-point profiles of the rational polygons and 3-polytopes the
//! non-MDS criteria operate on.
//!
//! Purpose: exact counting of lattice points on the integral columns/slices
//! of the dilated bodies `m*Delta`, where `Delta` is
//!
//! * a plane 4-gon with vertices `(0,0)`, `(0,1)`, `p_left`, `p_right`
//!   ([`Polygon4`]), or
//! * a 3-polytope with vertices `(0,0,0)`, `(0,1,0)`, `(0,0,1)`, `p_left`,
//!   `p_right` ([`Polytope3`]), including the degenerate tetrahedron where
//!   the origin lies on the segment `p_left p_right` ([`TetraTuple`]).
//!
//! Why closed forms: every column/slice of `m*Delta` at integral `x` is an
//! interval (2D) or an axis-aligned right triangle (3D) cut out by the
//! edges/facets through the left or right vertex, so its lattice count is a
//! floor/ceil expression in the vertex coordinates.  The [`bruteforce`]
//! submodule recounts the same profiles by facet-based membership
//! enumeration and serves as the independent oracle for the closed forms.

use std::fmt;

use num::{BigInt, Integer, One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact::{format_rational, parse_rational, rat_ceil, rat_floor, Rational};

/// Errors raised by constructors and profile queries in this module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    /// The points do not satisfy the shape invariants (see the type docs).
    InvalidPolytope(String),
    /// A profile was requested at an `x` outside `[m*x_left, m*x_right]`.
    OutOfRange { x: BigInt, lo: BigInt, hi: BigInt },
}

impl fmt::Display for PolytopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolytopeError::InvalidPolytope(why) => write!(f, "invalid polytope: {why}"),
            PolytopeError::OutOfRange { x, lo, hi } => {
                write!(f, "x = {x} out of range [{lo}, {hi}]")
            }
        }
    }
}

impl std::error::Error for PolytopeError {}

/// Lattice-point profile of one integral column (2D) or slice (3D) of
/// `m*Delta`, or of the equivalent parameter sets used by the
/// weighted-projective module.
///
/// # Invariants
///
/// * `size == 0` if and only if `corner == None` (an empty profile has no
///   corner).
/// * In 2D the corner has one coordinate (lowest `y`); in 3D two
///   (componentwise minimum `(y, z)` of the triangle of lattice points).
/// * In 2D `size` is the number of lattice points of the column.  In 3D
///   the lattice points of a slice always form a complete triangular
///   array, and `size` is the number of points on each side of that array
///   (the array has `size * (size + 1) / 2` points in total).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SliceProfile {
    /// Coordinate of the profile along the distinguished axis.
    pub x: BigInt,
    /// Side count of the profile (see the type invariants).
    pub size: u64,
    /// Componentwise extremal lattice point, when the profile is nonempty.
    pub corner: Option<Vec<BigInt>>,
}

impl SliceProfile {
    fn empty(x: BigInt) -> Self {
        SliceProfile { x, size: 0, corner: None }
    }
}

fn big_to_u64(x: &BigInt) -> u64 {
    u64::try_from(x).expect("profile size exceeds u64")
}

/// A rational plane 4-gon with vertices `(0,0)`, `(0,1)`, `p_left`,
/// `p_right`.
///
/// # Invariants
///
/// * `p_left.x < 0 < p_right.x`;
/// * the four points are in weakly convex position: the segment
///   `p_left p_right` crosses the y-axis at height `sigma_y` with
///   `0 <= sigma_y <= 1`.  At `sigma_y = 0` the polygon degenerates to a
///   triangle through the origin (equal bottom slopes), at `sigma_y = 1`
///   to a triangle whose top edge passes through `(0,1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polygon4 {
    p_left: [Rational; 2],
    p_right: [Rational; 2],
}

/// A rational 3-polytope with vertices `(0,0,0)`, `(0,1,0)`, `(0,0,1)`,
/// `p_left`, `p_right`.
///
/// # Invariants
///
/// * `p_left.x < 0 < p_right.x`;
/// * the segment `p_left p_right` crosses the plane `x = 0` at a point
///   `sigma = (sigma_y, sigma_z)` of the base triangle
///   (`sigma_y, sigma_z >= 0`, `sigma_y + sigma_z <= 1`);
/// * `sigma` is not one of the base vertices `(1,0)`, `(0,1)` (which would
///   swallow a lattice vertex).  `sigma = (0,0)` is the allowed
///   degeneration: the origin lies on `p_left p_right` and the polytope is
///   a tetrahedron.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polytope3 {
    p_left: [Rational; 3],
    p_right: [Rational; 3],
}

/// A tetrahedron of [`Polytope3`] shape in tuple form: `p_left` and
/// `p_right` lie on the line through the origin with direction
/// `(1, slope_y, slope_z)`, so
/// `p_left = x_left * (1, slope_y, slope_z)` and
/// `p_right = x_right * (1, slope_y, slope_z)`.
///
/// # Invariants
///
/// * `x_left < 0 < x_right`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TetraTuple {
    x_left: Rational,
    x_right: Rational,
    slope_y: Rational,
    slope_z: Rational,
}

/// Coordinate plane a [`Polytope3`] can be projected to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProjectionPlane {
    /// Forget `z`, keep `(x, y)`.
    Xy,
    /// Forget `y`, keep `(x, z)`.
    Xz,
}

fn lcm_denominators(coords: &[&Rational]) -> BigInt {
    let mut m = BigInt::one();
    for c in coords {
        m = m.lcm(c.denom());
    }
    m
}

impl Polygon4 {
    /// Validating constructor; see the type invariants.
    pub fn new(p_left: [Rational; 2], p_right: [Rational; 2]) -> Result<Self, PolytopeError> {
        if !p_left[0].is_negative() || !p_right[0].is_positive() {
            return Err(PolytopeError::InvalidPolytope(format!(
                "need p_left.x < 0 < p_right.x, got p_left.x = {}, p_right.x = {}",
                format_rational(&p_left[0]),
                format_rational(&p_right[0])
            )));
        }
        let p = Polygon4 { p_left, p_right };
        let s = p.sigma_y();
        if s.is_negative() || s > Rational::one() {
            return Err(PolytopeError::InvalidPolytope(format!(
                "the segment p_left p_right crosses the y-axis at {} outside [0, 1]; \
                 the four points are not in convex position",
                format_rational(&s)
            )));
        }
        Ok(p)
    }

    /// Left vertex.
    pub fn p_left(&self) -> &[Rational; 2] {
        &self.p_left
    }

    /// Right vertex.
    pub fn p_right(&self) -> &[Rational; 2] {
        &self.p_right
    }

    /// Height at which the segment `p_left p_right` crosses the y-axis.
    pub fn sigma_y(&self) -> Rational {
        let w = self.width();
        (&self.p_right[0] * &self.p_left[1] - &self.p_left[0] * &self.p_right[1]) / w
    }

    /// Whether the 4-gon degenerates to a triangle (the crossing height is
    /// exactly 0 or 1, so one lattice point stops being a vertex).
    pub fn is_triangle(&self) -> bool {
        let s = self.sigma_y();
        s.is_zero() || s.is_one()
    }

    /// Width `p_right.x - p_left.x`.
    pub fn width(&self) -> Rational {
        &self.p_right[0] - &self.p_left[0]
    }

    /// Apply the lattice shear `(x, y) -> (x, y + a x)`.
    pub fn shear(&self, a: &BigInt) -> Polygon4 {
        let a = Rational::from_integer(a.clone());
        Polygon4 {
            p_left: [self.p_left[0].clone(), &self.p_left[1] + &a * &self.p_left[0]],
            p_right: [self.p_right[0].clone(), &self.p_right[1] + &a * &self.p_right[0]],
        }
    }

    /// Smallest positive integer `m` such that `m * Delta` has integral
    /// vertices (the lcm of the coordinate denominators).
    pub fn integrality_scale(&self) -> BigInt {
        lcm_denominators(&[&self.p_left[0], &self.p_left[1], &self.p_right[0], &self.p_right[1]])
    }
}

/// Shear a [`Polygon4`] so that the slope of the edge from the origin to
/// `p_right` lands in `[0, 1)`; returns the sheared polygon and the applied
/// shear coefficient `a`.
pub fn shear_normalize_2d(p: &Polygon4) -> (Polygon4, BigInt) {
    let slope = &p.p_right[1] / &p.p_right[0];
    let a = -rat_floor(&slope);
    (p.shear(&a), a)
}

impl Polytope3 {
    /// Validating constructor; see the type invariants.
    pub fn new(p_left: [Rational; 3], p_right: [Rational; 3]) -> Result<Self, PolytopeError> {
        if !p_left[0].is_negative() || !p_right[0].is_positive() {
            return Err(PolytopeError::InvalidPolytope(format!(
                "need p_left.x < 0 < p_right.x, got p_left.x = {}, p_right.x = {}",
                format_rational(&p_left[0]),
                format_rational(&p_right[0])
            )));
        }
        let p = Polytope3 { p_left, p_right };
        let (sy, sz) = p.sigma();
        if sy.is_negative() || sz.is_negative() || &sy + &sz > Rational::one() {
            return Err(PolytopeError::InvalidPolytope(format!(
                "the segment p_left p_right crosses x = 0 at ({}, {}) outside the base \
                 triangle; the five points are not in convex position",
                format_rational(&sy),
                format_rational(&sz)
            )));
        }
        let crossing_is_lattice_vertex =
            (sy.is_one() && sz.is_zero()) || (sy.is_zero() && sz.is_one());
        if crossing_is_lattice_vertex {
            return Err(PolytopeError::InvalidPolytope(format!(
                "the segment p_left p_right passes through the base vertex ({}, {}), \
                 which therefore is not a vertex of the hull",
                format_rational(&sy),
                format_rational(&sz)
            )));
        }
        Ok(p)
    }

    /// Left vertex.
    pub fn p_left(&self) -> &[Rational; 3] {
        &self.p_left
    }

    /// Right vertex.
    pub fn p_right(&self) -> &[Rational; 3] {
        &self.p_right
    }

    /// Point `(sigma_y, sigma_z)` at which the segment `p_left p_right`
    /// crosses the plane `x = 0`.
    pub fn sigma(&self) -> (Rational, Rational) {
        let w = self.width();
        let sy = (&self.p_right[0] * &self.p_left[1] - &self.p_left[0] * &self.p_right[1]) / &w;
        let sz = (&self.p_right[0] * &self.p_left[2] - &self.p_left[0] * &self.p_right[2]) / &w;
        (sy, sz)
    }

    /// Whether the polytope is the allowed tetrahedron degeneration (the
    /// origin lies on the segment `p_left p_right`).
    pub fn is_tetrahedron(&self) -> bool {
        let (sy, sz) = self.sigma();
        sy.is_zero() && sz.is_zero()
    }

    /// Width `p_right.x - p_left.x`.
    pub fn width(&self) -> Rational {
        &self.p_right[0] - &self.p_left[0]
    }

    /// Apply the lattice shear `(x, y, z) -> (x, y + a x, z + b x)`.
    pub fn shear(&self, a: &BigInt, b: &BigInt) -> Polytope3 {
        let a = Rational::from_integer(a.clone());
        let b = Rational::from_integer(b.clone());
        Polytope3 {
            p_left: [
                self.p_left[0].clone(),
                &self.p_left[1] + &a * &self.p_left[0],
                &self.p_left[2] + &b * &self.p_left[0],
            ],
            p_right: [
                self.p_right[0].clone(),
                &self.p_right[1] + &a * &self.p_right[0],
                &self.p_right[2] + &b * &self.p_right[0],
            ],
        }
    }

    /// Smallest positive integer `m` such that `m * Delta` has integral
    /// vertices.
    pub fn integrality_scale(&self) -> BigInt {
        lcm_denominators(&[
            &self.p_left[0],
            &self.p_left[1],
            &self.p_left[2],
            &self.p_right[0],
            &self.p_right[1],
            &self.p_right[2],
        ])
    }
}

/// Shear a [`Polytope3`] so that both slopes `p_right.y / p_right.x` and
/// `p_right.z / p_right.x` land in `[0, 1)`; returns the sheared polytope
/// and the applied pair `(a, b)`.
pub fn shear_normalize_3d(p: &Polytope3) -> (Polytope3, (BigInt, BigInt)) {
    let a = -rat_floor(&(&p.p_right[1] / &p.p_right[0]));
    let b = -rat_floor(&(&p.p_right[2] / &p.p_right[0]));
    (p.shear(&a, &b), (a, b))
}

impl TetraTuple {
    /// Validating constructor; see the type invariants.
    pub fn new(
        x_left: Rational,
        x_right: Rational,
        slope_y: Rational,
        slope_z: Rational,
    ) -> Result<Self, PolytopeError> {
        if !x_left.is_negative() || !x_right.is_positive() {
            return Err(PolytopeError::InvalidPolytope(format!(
                "need x_left < 0 < x_right, got x_left = {}, x_right = {}",
                format_rational(&x_left),
                format_rational(&x_right)
            )));
        }
        Ok(TetraTuple { x_left, x_right, slope_y, slope_z })
    }

    /// Leftmost x-coordinate.
    pub fn x_left(&self) -> &Rational {
        &self.x_left
    }

    /// Rightmost x-coordinate.
    pub fn x_right(&self) -> &Rational {
        &self.x_right
    }

    /// y-slope of the spine line through the origin.
    pub fn slope_y(&self) -> &Rational {
        &self.slope_y
    }

    /// z-slope of the spine line through the origin.
    pub fn slope_z(&self) -> &Rational {
        &self.slope_z
    }

    /// Width `x_right - x_left`.
    pub fn width(&self) -> Rational {
        &self.x_right - &self.x_left
    }

    /// Apply the lattice shear `(x, y, z) -> (x, y + a x, z + b x)`, which
    /// shifts both slopes by integers.
    pub fn shear(&self, a: &BigInt, b: &BigInt) -> TetraTuple {
        TetraTuple {
            x_left: self.x_left.clone(),
            x_right: self.x_right.clone(),
            slope_y: &self.slope_y + Rational::from_integer(a.clone()),
            slope_z: &self.slope_z + Rational::from_integer(b.clone()),
        }
    }

    /// Reflect across the plane `x = 0` (swaps the roles of the left and
    /// right vertices; both slopes flip sign).
    pub fn reflect(&self) -> TetraTuple {
        TetraTuple {
            x_left: -self.x_right.clone(),
            x_right: -self.x_left.clone(),
            slope_y: -self.slope_y.clone(),
            slope_z: -self.slope_z.clone(),
        }
    }
}

/// Realize a tuple as the tetrahedron [`Polytope3`] it describes.
pub fn tetra_to_polytope(t: &TetraTuple) -> Polytope3 {
    let p_left =
        [t.x_left.clone(), &t.x_left * &t.slope_y, &t.x_left * &t.slope_z];
    let p_right =
        [t.x_right.clone(), &t.x_right * &t.slope_y, &t.x_right * &t.slope_z];
    Polytope3::new(p_left, p_right).expect("a tetra tuple always realizes a valid polytope")
}

/// Smallest positive integer `m` such that `m * Delta` has integral
/// vertices, for the tetrahedron described by a tuple.
///
/// Note the vertices are `x * (1, slope_y, slope_z)` for
/// `x in {x_left, x_right}`; it is the denominators of the six products
/// that matter, not those of the slopes themselves.
pub fn tetra_integrality_scale(t: &TetraTuple) -> BigInt {
    tetra_to_polytope(t).integrality_scale()
}

fn in_range_or_err(x: &BigInt, lo: &Rational, hi: &Rational, m: &BigInt) -> Result<(), PolytopeError> {
    let lo_int =
        (lo * Rational::from_integer(m.clone())).to_integer();
    let hi_int =
        (hi * Rational::from_integer(m.clone())).to_integer();
    if x < &lo_int || x > &hi_int {
        return Err(PolytopeError::OutOfRange { x: x.clone(), lo: lo_int, hi: hi_int });
    }
    Ok(())
}

fn assert_scale(m: &BigInt, scale: &BigInt) {
    assert!(
        m.is_positive() && (m % scale).is_zero(),
        "m = {m} does not make the polytope integral (needs a positive multiple of {scale})"
    );
}

/// Lattice-point profile of the column of `m * Delta` at integral `x`.
///
/// For `x <= 0` the column is the interval between the edges from
/// `p_left` to `(0,0)` and to `(0,1)` (scaled by `m`); for `x >= 0` the
/// analogous interval through `p_right`.  No shear normalization is
/// required: shears translate each column by an integer.
///
/// # Panics
///
/// Panics when `m` is not a positive multiple of
/// [`Polygon4::integrality_scale`].
///
/// # Errors
///
/// [`PolytopeError::OutOfRange`] when `x` is outside `[m*x_left, m*x_right]`.
pub fn column(p: &Polygon4, m: &BigInt, x: &BigInt) -> Result<SliceProfile, PolytopeError> {
    assert_scale(m, &p.integrality_scale());
    in_range_or_err(x, &p.p_left[0], &p.p_right[0], m)?;
    let xr = Rational::from_integer(x.clone());
    let mr = Rational::from_integer(m.clone());
    let pv = if x.is_negative() { &p.p_left } else { &p.p_right };
    let lo = &xr * &pv[1] / &pv[0];
    let hi = &mr + &xr * (&pv[1] - Rational::one()) / &pv[0];
    let b = rat_ceil(&lo);
    let top = rat_floor(&hi);
    let size = &top - &b + BigInt::one();
    if size.is_positive() {
        Ok(SliceProfile { x: x.clone(), size: big_to_u64(&size), corner: Some(vec![b]) })
    } else {
        Ok(SliceProfile::empty(x.clone()))
    }
}

/// Lattice-point profile of the slice of `m * Delta` at integral `x`.
///
/// For `x <= 0` the slice is the axis-aligned right triangle
/// `{ y >= alpha, z >= beta, y + z <= gamma }` cut out by the three facets
/// through `p_left` (scaled by `m`); for `x >= 0` the analogous triangle
/// through `p_right`.  Its profile is therefore
/// `size = 1 + floor(gamma) - ceil(alpha) - ceil(beta)` (clamped at 0)
/// lattice points per side, with corner `(ceil(alpha), ceil(beta))`.
///
/// # Panics
///
/// Panics when `m` is not a positive multiple of
/// [`Polytope3::integrality_scale`].
///
/// # Errors
///
/// [`PolytopeError::OutOfRange`] when `x` is outside `[m*x_left, m*x_right]`.
pub fn slice(p: &Polytope3, m: &BigInt, x: &BigInt) -> Result<SliceProfile, PolytopeError> {
    assert_scale(m, &p.integrality_scale());
    in_range_or_err(x, &p.p_left[0], &p.p_right[0], m)?;
    let xr = Rational::from_integer(x.clone());
    let mr = Rational::from_integer(m.clone());
    let pv = if x.is_negative() { &p.p_left } else { &p.p_right };
    let alpha = &xr * &pv[1] / &pv[0];
    let beta = &xr * &pv[2] / &pv[0];
    let gamma = &mr + &xr * (&pv[1] + &pv[2] - Rational::one()) / &pv[0];
    let b = rat_ceil(&alpha);
    let c = rat_ceil(&beta);
    let size = BigInt::one() + rat_floor(&gamma) - &b - &c;
    if size.is_positive() {
        Ok(SliceProfile { x: x.clone(), size: big_to_u64(&size), corner: Some(vec![b, c]) })
    } else {
        Ok(SliceProfile::empty(x.clone()))
    }
}

/// Size of the slice of `m * Delta` adjacent to the left vertex (at
/// `x = m*x_left + 1`) for a tetrahedron in tuple form, by the closed form
/// `1 + floor(slope_y + slope_z - 1/x_left) - ceil(slope_y) - ceil(slope_z)`
/// (clamped at 0).  Independent of `m` and of integral shears.
pub fn tetra_slice_size_left(t: &TetraTuple) -> u64 {
    let sum = &t.slope_y + &t.slope_z - t.x_left.recip();
    let size =
        BigInt::one() + rat_floor(&sum) - rat_ceil(&t.slope_y) - rat_ceil(&t.slope_z);
    if size.is_positive() {
        big_to_u64(&size)
    } else {
        0
    }
}

/// Size of the slice of `m * Delta` at `x = m*x_right - (n - 1)` for a
/// tetrahedron in tuple form, by the closed form
/// `1 - ceil((n-1)(slope_y + slope_z - 1/x_right)) + floor((n-1) slope_y)
///  + floor((n-1) slope_z)` (clamped at 0).
pub fn tetra_slice_size_right(t: &TetraTuple, n: u64) -> u64 {
    let k = Rational::from_integer(BigInt::from(n) - BigInt::one());
    let sum = &t.slope_y + &t.slope_z - t.x_right.recip();
    let size = BigInt::one() - rat_ceil(&(&k * &sum))
        + rat_floor(&(&k * &t.slope_y))
        + rat_floor(&(&k * &t.slope_z));
    if size.is_positive() {
        big_to_u64(&size)
    } else {
        0
    }
}

/// Project a [`Polytope3`] to a coordinate plane.  The image is always a
/// valid [`Polygon4`]: the base triangle maps onto the segment from
/// `(0,0)` to `(0,1)` and the crossing height of the projected spine is
/// the corresponding sigma coordinate, which lies in `[0, 1]`.
pub fn project(p: &Polytope3, plane: ProjectionPlane) -> Polygon4 {
    let i = match plane {
        ProjectionPlane::Xy => 1,
        ProjectionPlane::Xz => 2,
    };
    Polygon4::new(
        [p.p_left[0].clone(), p.p_left[i].clone()],
        [p.p_right[0].clone(), p.p_right[i].clone()],
    )
    .expect("projection of a valid polytope is a valid polygon")
}

// ---------------------------------------------------------------------------
// serde wire format: rationals as "p/q" strings
// ---------------------------------------------------------------------------

fn rationals_to_strings<const N: usize>(v: &[Rational; N]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn strings_to_rationals<'de, D: Deserializer<'de>, const N: usize>(
    v: Vec<String>,
) -> Result<[Rational; N], D::Error> {
    if v.len() != N {
        return Err(D::Error::custom(format!("expected {N} coordinates, got {}", v.len())));
    }
    let mut out = Vec::with_capacity(N);
    for s in &v {
        out.push(parse_rational(s).map_err(D::Error::custom)?);
    }
    Ok(out.try_into().expect("length checked above"))
}

#[derive(Serialize, Deserialize)]
struct PointPairWire {
    p_left: Vec<String>,
    p_right: Vec<String>,
}

impl Serialize for Polygon4 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointPairWire {
            p_left: rationals_to_strings(&self.p_left).to_vec(),
            p_right: rationals_to_strings(&self.p_right).to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polygon4 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = PointPairWire::deserialize(d)?;
        let p_left = strings_to_rationals::<D, 2>(w.p_left)?;
        let p_right = strings_to_rationals::<D, 2>(w.p_right)?;
        Polygon4::new(p_left, p_right).map_err(D::Error::custom)
    }
}

impl Serialize for Polytope3 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PointPairWire {
            p_left: rationals_to_strings(&self.p_left).to_vec(),
            p_right: rationals_to_strings(&self.p_right).to_vec(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Polytope3 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = PointPairWire::deserialize(d)?;
        let p_left = strings_to_rationals::<D, 3>(w.p_left)?;
        let p_right = strings_to_rationals::<D, 3>(w.p_right)?;
        Polytope3::new(p_left, p_right).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct TetraWire {
    tuple: Vec<String>,
}

impl Serialize for TetraTuple {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        TetraWire {
            tuple: vec![
                format_rational(&self.x_left),
                format_rational(&self.x_right),
                format_rational(&self.slope_y),
                format_rational(&self.slope_z),
            ],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TetraTuple {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = TetraWire::deserialize(d)?;
        let [xl, xr, sy, sz] = strings_to_rationals::<D, 4>(w.tuple)?;
        TetraTuple::new(xl, xr, sy, sz).map_err(D::Error::custom)
    }
}

/// Independent recomputation of column/slice profiles by brute-force
/// membership enumeration.
///
/// Why: the closed forms in the parent module assume the two-pyramid
/// structure of the bodies.  This module derives the facet inequalities of
/// the scaled hull directly from the vertex list (every supporting
/// hyperplane through a vertex pair/triple) and enumerates lattice points
/// in a bounding box, so the two routes share no geometry reasoning.
pub mod bruteforce {
    use super::*;

    type Vec2 = [Rational; 2];
    type Vec3 = [Rational; 3];

    /// Half-plane description `n . p >= h` of the convex hull of `verts`.
    fn facets_2d(verts: &[Vec2]) -> Vec<(Vec2, Rational)> {
        let mut out = Vec::new();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                let d = [&verts[j][0] - &verts[i][0], &verts[j][1] - &verts[i][1]];
                if d[0].is_zero() && d[1].is_zero() {
                    continue;
                }
                let n = [-d[1].clone(), d[0].clone()];
                let h = &n[0] * &verts[i][0] + &n[1] * &verts[i][1];
                let mut above = false;
                let mut below = false;
                for v in verts {
                    let val = &n[0] * &v[0] + &n[1] * &v[1];
                    if val > h {
                        above = true;
                    } else if val < h {
                        below = true;
                    }
                }
                if !below {
                    out.push((n, h));
                } else if !above {
                    out.push(([-n[0].clone(), -n[1].clone()], -h));
                }
            }
        }
        out
    }

    /// Half-space description `n . p >= h` of the convex hull of `verts`.
    fn facets_3d(verts: &[Vec3]) -> Vec<(Vec3, Rational)> {
        let mut out = Vec::new();
        for i in 0..verts.len() {
            for j in i + 1..verts.len() {
                for k in j + 1..verts.len() {
                    let u = [
                        &verts[j][0] - &verts[i][0],
                        &verts[j][1] - &verts[i][1],
                        &verts[j][2] - &verts[i][2],
                    ];
                    let v = [
                        &verts[k][0] - &verts[i][0],
                        &verts[k][1] - &verts[i][1],
                        &verts[k][2] - &verts[i][2],
                    ];
                    let n = [
                        &u[1] * &v[2] - &u[2] * &v[1],
                        &u[2] * &v[0] - &u[0] * &v[2],
                        &u[0] * &v[1] - &u[1] * &v[0],
                    ];
                    if n.iter().all(Rational::is_zero) {
                        continue;
                    }
                    let h = &n[0] * &verts[i][0] + &n[1] * &verts[i][1] + &n[2] * &verts[i][2];
                    let mut above = false;
                    let mut below = false;
                    for w in verts {
                        let val = &n[0] * &w[0] + &n[1] * &w[1] + &n[2] * &w[2];
                        if val > h {
                            above = true;
                        } else if val < h {
                            below = true;
                        }
                    }
                    if !below {
                        out.push((n, h));
                    } else if !above {
                        out.push(([-n[0].clone(), -n[1].clone(), -n[2].clone()], -h));
                    }
                }
            }
        }
        out
    }

    fn scaled<const N: usize>(v: &[Rational; N], m: &BigInt) -> [Rational; N] {
        let mr = Rational::from_integer(m.clone());
        core::array::from_fn(|i| &v[i] * &mr)
    }

    /// Profile of the column of `m * Delta` at `x`, by enumeration.
    pub fn column_by_enumeration(p: &Polygon4, m: &BigInt, x: &BigInt) -> SliceProfile {
        let verts: Vec<Vec2> = vec![
            [Rational::zero(), Rational::zero()],
            [Rational::zero(), Rational::from_integer(m.clone())],
            scaled(p.p_left(), m),
            scaled(p.p_right(), m),
        ];
        let facets = facets_2d(&verts);
        let ymin = verts.iter().map(|v| rat_floor(&v[1])).min().unwrap();
        let ymax = verts.iter().map(|v| rat_ceil(&v[1])).max().unwrap();
        let xr = Rational::from_integer(x.clone());
        let mut size = 0u64;
        let mut corner: Option<Vec<BigInt>> = None;
        let mut y = ymin;
        while y <= ymax {
            let yr = Rational::from_integer(y.clone());
            if facets.iter().all(|(n, h)| &n[0] * &xr + &n[1] * &yr >= *h) {
                size += 1;
                if corner.is_none() {
                    corner = Some(vec![y.clone()]);
                }
            }
            y += 1;
        }
        SliceProfile { x: x.clone(), size, corner }
    }

    /// Profile of the slice of `m * Delta` at `x`, by enumeration.
    ///
    /// The lattice points of a slice always form a complete triangular array
    /// `{(y, z) : y >= y0, z >= z0, y + z <= y0 + z0 + s - 1}`; the profile
    /// size is the side count `s` of that array, not its cardinality
    /// `s (s + 1) / 2`.  This function recovers `s` from the enumerated
    /// point set and panics if the set is not such an array.
    pub fn slice_by_enumeration(p: &Polytope3, m: &BigInt, x: &BigInt) -> SliceProfile {
        let verts: Vec<Vec3> = vec![
            [Rational::zero(), Rational::zero(), Rational::zero()],
            [Rational::zero(), Rational::from_integer(m.clone()), Rational::zero()],
            [Rational::zero(), Rational::zero(), Rational::from_integer(m.clone())],
            scaled(p.p_left(), m),
            scaled(p.p_right(), m),
        ];
        let facets = facets_3d(&verts);
        let ymin = verts.iter().map(|v| rat_floor(&v[1])).min().unwrap();
        let ymax = verts.iter().map(|v| rat_ceil(&v[1])).max().unwrap();
        let zmin = verts.iter().map(|v| rat_floor(&v[2])).min().unwrap();
        let zmax = verts.iter().map(|v| rat_ceil(&v[2])).max().unwrap();
        let xr = Rational::from_integer(x.clone());
        let mut points: Vec<(BigInt, BigInt)> = Vec::new();
        let mut y = ymin;
        while y <= ymax {
            let yr = Rational::from_integer(y.clone());
            let mut z = zmin.clone();
            while z <= zmax {
                let zr = Rational::from_integer(z.clone());
                if facets
                    .iter()
                    .all(|(n, h)| &n[0] * &xr + &n[1] * &yr + &n[2] * &zr >= *h)
                {
                    points.push((y.clone(), z.clone()));
                }
                z += 1;
            }
            y += 1;
        }
        let Some(first) = points.first() else {
            return SliceProfile::empty(x.clone());
        };
        let mut y0 = first.0.clone();
        let mut z0 = first.1.clone();
        for (py, pz) in &points {
            y0 = y0.min(py.clone());
            z0 = z0.min(pz.clone());
        }
        // Recover the side count and verify the triangular-array shape.
        let side = points
            .iter()
            .map(|(py, pz)| py - &y0 + pz - &z0)
            .max()
            .unwrap()
            + 1u8;
        let s = big_to_u64(&side);
        assert_eq!(
            points.len() as u64,
            s * (s + 1) / 2,
            "slice at x = {x} is not a complete triangular array"
        );
        for (py, pz) in &points {
            assert!(py >= &y0 && pz >= &z0, "slice point below corner at x = {x}");
        }
        SliceProfile { x: x.clone(), size: s, corner: Some(vec![y0, z0]) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{int, rat};
    use num::ToPrimitive;
    use proptest::prelude::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    fn polygon(xl: (i64, i64), yl: (i64, i64), xr: (i64, i64), yr: (i64, i64)) -> Polygon4 {
        Polygon4::new([rat(xl.0, xl.1), rat(yl.0, yl.1)], [rat(xr.0, xr.1), rat(yr.0, yr.1)])
            .unwrap()
    }

    /// The worked plane 4-gon with p_left = (-3/4, 1/2), p_right = (1/4, 3/4).
    fn worked_polygon() -> Polygon4 {
        polygon((-3, 4), (1, 2), (1, 4), (3, 4))
    }

    /// The worked tetrahedron tuple (-3/5, 6/17, 1/3, 1/2).
    fn worked_tetra() -> TetraTuple {
        TetraTuple::new(rat(-3, 5), rat(6, 17), rat(1, 3), rat(1, 2)).unwrap()
    }

    #[test]
    fn polygon_constructor_validates_shape() {
        assert!(Polygon4::new([rat(3, 4), rat(1, 2)], [rat(1, 4), rat(3, 4)]).is_err());
        assert!(Polygon4::new([rat(-3, 4), rat(1, 2)], [rat(-1, 4), rat(3, 4)]).is_err());
        // Crossing height below 0 / above 1: not in convex position.
        assert!(Polygon4::new([rat(-1, 2), rat(-2, 1)], [rat(1, 2), rat(-2, 1)]).is_err());
        assert!(Polygon4::new([rat(-1, 2), rat(2, 1)], [rat(1, 2), rat(2, 1)]).is_err());
        // Degenerate triangles at heights exactly 0 and 1 are allowed.
        let through_origin =
            Polygon4::new([rat(-1, 2), rat(-1, 4)], [rat(1, 2), rat(1, 4)]).unwrap();
        assert!(through_origin.is_triangle());
        assert!(through_origin.sigma_y().is_zero());
        let through_top =
            Polygon4::new([rat(-3, 4), rat(1, 2)], [rat(1, 4), rat(7, 6)]).unwrap();
        assert!(through_top.is_triangle());
        assert!(through_top.sigma_y().is_one());
        assert!(!worked_polygon().is_triangle());
    }

    #[test]
    fn polytope_constructor_validates_shape() {
        // Valid strict case.
        let p = Polytope3::new(
            [rat(-3, 4), rat(1, 4), rat(1, 8)],
            [rat(1, 4), rat(1, 8), rat(1, 8)],
        )
        .unwrap();
        assert!(!p.is_tetrahedron());
        // Crossing outside the base triangle.
        assert!(Polytope3::new(
            [rat(-1, 2), rat(3, 4), rat(3, 4)],
            [rat(1, 2), rat(3, 4), rat(3, 4)],
        )
        .is_err());
        // Crossing at a base lattice vertex: rejected.
        assert!(Polytope3::new(
            [rat(-1, 2), rat(1, 2), rat(0, 1)],
            [rat(1, 2), rat(3, 2), rat(0, 1)],
        )
        .is_err());
        // Crossing at the origin: the allowed tetrahedron degeneration.
        let t = tetra_to_polytope(&worked_tetra());
        assert!(t.is_tetrahedron());
        // Convex position of the five points alone is not enough: this
        // segment crosses x = 0 outside the base triangle.
        assert!(Polytope3::new(
            [rat(-1, 1), rat(-5, 1), rat(1, 2)],
            [rat(1, 1), rat(4, 1), rat(0, 1)],
        )
        .is_err());
    }

    #[test]
    fn integrality_scale_examples() {
        assert_eq!(worked_polygon().integrality_scale(), bi(4));
        assert_eq!(tetra_integrality_scale(&worked_tetra()), bi(170));
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        assert_eq!(tetra_integrality_scale(&t), bi(126));
        let t = TetraTuple::new(rat(-2, 3), rat(1, 3), rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(tetra_integrality_scale(&t), bi(6));
    }

    #[test]
    fn shear_normalization_lands_slopes_in_unit_interval() {
        let (q, a) = shear_normalize_2d(&worked_polygon());
        assert_eq!(a, bi(-3));
        assert_eq!(q.p_right(), &[rat(1, 4), int(0)]);
        assert_eq!(q.p_left(), &[rat(-3, 4), rat(11, 4)]);
        // Slope 14/3 needs a = -4.
        let p = Polygon4::new([rat(-3, 4), rat(1, 2)], [rat(1, 4), rat(7, 6)]).unwrap();
        let (q, a) = shear_normalize_2d(&p);
        assert_eq!(a, bi(-4));
        assert_eq!(q.p_right(), &[rat(1, 4), rat(1, 6)]);

        let p = Polytope3::new(
            [rat(-2, 3), rat(1, 6), rat(1, 3)],
            [rat(1, 3), rat(1, 6), rat(1, 3)],
        )
        .unwrap();
        let (q, (a, b)) = shear_normalize_3d(&p);
        assert_eq!((a, b), (bi(0), bi(-1)));
        assert_eq!(q.p_right(), &[rat(1, 3), rat(1, 6), int(0)]);
        assert_eq!(q.p_left(), &[rat(-2, 3), rat(1, 6), int(1)]);
    }

    #[test]
    fn width_examples() {
        assert_eq!(worked_polygon().width(), int(1));
        assert_eq!(worked_tetra().width(), rat(81, 85));
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        assert_eq!(t.width(), rat(125, 126));
    }

    #[test]
    fn column_profiles_of_worked_polygon() {
        let (p, _) = shear_normalize_2d(&worked_polygon());
        let m = bi(4);
        let expect = [
            (-3, 1, Some(11)),
            (-2, 1, Some(8)),
            (-1, 3, Some(4)),
            (0, 5, Some(0)),
            (1, 1, Some(0)),
        ];
        for (x, size, corner) in expect {
            let prof = column(&p, &m, &bi(x)).unwrap();
            assert_eq!(prof.size, size, "size at x = {x}");
            assert_eq!(prof.corner, corner.map(|b| vec![bi(b)]), "corner at x = {x}");
        }
        assert!(matches!(
            column(&p, &m, &bi(2)),
            Err(PolytopeError::OutOfRange { .. })
        ));
        assert!(matches!(
            column(&p, &m, &bi(-4)),
            Err(PolytopeError::OutOfRange { .. })
        ));
    }

    #[test]
    fn column_at_zero_has_m_plus_one_points() {
        let p = worked_polygon();
        for mult in [1i64, 2, 3] {
            let m = bi(4 * mult);
            let prof = column(&p, &m, &bi(0)).unwrap();
            assert_eq!(prof.size, (4 * mult + 1) as u64);
            assert_eq!(prof.corner, Some(vec![bi(0)]));
        }
    }

    #[test]
    fn column_counts_are_shear_invariant() {
        let p = worked_polygon();
        let m = bi(4);
        for a in -3i64..=3 {
            let q = p.shear(&bi(a));
            for x in -3i64..=1 {
                let lhs = column(&p, &m, &bi(x)).unwrap();
                let rhs = column(&q, &m, &bi(x)).unwrap();
                assert_eq!(lhs.size, rhs.size);
                // corners shift by exactly a*x
                if let (Some(lc), Some(rc)) = (&lhs.corner, &rhs.corner) {
                    assert_eq!(&lc[0] + bi(a) * bi(x), rc[0].clone());
                }
            }
        }
    }

    #[test]
    fn slice_profiles_of_worked_tetrahedra() {
        // (-3/5, 6/17, 1/3, 1/2): m = 170, adjacent slice at -101 is a
        // single point; the right vertex slice is a single point.
        let t = worked_tetra();
        let p = tetra_to_polytope(&t);
        let m = bi(170);
        let left = slice(&p, &m, &bi(-101)).unwrap();
        assert_eq!(left.size, 1);
        let right = slice(&p, &m, &bi(60)).unwrap();
        assert_eq!(right.size, 1);
        // The slice at x = 0 is the base triangle of m * Delta, which has
        // m + 1 lattice points on each side.
        assert_eq!(slice(&p, &m, &bi(0)).unwrap().size, 171);

        // (-5/18, 5/7, 2/5, 1): m = 126, left-adjacent slice has size 4 but
        // the slice three steps left of the right vertex has size 5.
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        let p = tetra_to_polytope(&t);
        let m = bi(126);
        assert_eq!(slice(&p, &m, &bi(-34)).unwrap().size, 4);
        assert_eq!(slice(&p, &m, &bi(90 - 3)).unwrap().size, 5);
        assert_eq!(slice(&p, &m, &bi(90)).unwrap().size, 1);
    }

    #[test]
    fn tetra_closed_forms_match_slice_profiles() {
        let cases = [
            ((-3i64, 5i64), (6i64, 17i64), (1i64, 3i64), (1i64, 2i64)),
            ((-5, 18), (5, 7), (2, 5), (1, 1)),
            ((-2, 3), (1, 3), (1, 2), (1, 2)),
            ((-1, 2), (1, 2), (0, 1), (0, 1)),
            ((-3, 4), (1, 2), (2, 3), (1, 5)),
        ];
        for (xl, xr, sy, sz) in cases {
            let t = TetraTuple::new(rat(xl.0, xl.1), rat(xr.0, xr.1), rat(sy.0, sy.1), rat(sz.0, sz.1))
                .unwrap();
            let p = tetra_to_polytope(&t);
            let m = p.integrality_scale();
            let mxl = (&t.x_left * Rational::from_integer(m.clone())).to_integer();
            let mxr = (&t.x_right * Rational::from_integer(m.clone())).to_integer();
            let n_left = tetra_slice_size_left(&t);
            assert_eq!(
                n_left,
                slice(&p, &m, &(mxl + BigInt::one())).unwrap().size,
                "left closed form for {t:?}"
            );
            // The right closed form describes slices cut by the facets
            // through the right vertex, i.e. those at x >= 0.
            for n in 1..=4u64 {
                let x = &mxr - BigInt::from(n - 1);
                if !x.is_negative() {
                    assert_eq!(
                        tetra_slice_size_right(&t, n),
                        slice(&p, &m, &x).unwrap().size,
                        "right closed form (n = {n}) for {t:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn tetra_closed_forms_worked_values() {
        assert_eq!(tetra_slice_size_left(&worked_tetra()), 1);
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        assert_eq!(tetra_slice_size_left(&t), 4);
        assert_eq!(tetra_slice_size_right(&t, 4), 5);
        assert_eq!(tetra_slice_size_right(&t, 1), 1);
        let t = TetraTuple::new(rat(-2, 3), rat(1, 3), rat(1, 2), rat(1, 2)).unwrap();
        assert_eq!(tetra_slice_size_left(&t), 1);
        // A thin tetrahedron whose adjacent slice misses the lattice.
        let t = TetraTuple::new(rat(-9, 10), rat(1, 10), rat(1, 10), rat(1, 10)).unwrap();
        assert_eq!(tetra_slice_size_left(&t), 0);
    }

    #[test]
    fn reflection_mirrors_slice_sizes() {
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        let r = t.reflect();
        assert_eq!(r.x_left(), &rat(-5, 7));
        assert_eq!(r.x_right(), &rat(5, 18));
        // Left-adjacent slice of the reflection = slice one step left of the
        // original right vertex.
        assert_eq!(tetra_slice_size_left(&r), tetra_slice_size_right(&t, 2));
        let p = tetra_to_polytope(&t);
        let q = tetra_to_polytope(&r);
        let m = p.integrality_scale();
        assert_eq!(q.integrality_scale(), m);
        for x in [-34i64, -1, 0, 17, 90] {
            assert_eq!(
                slice(&p, &m, &bi(x)).unwrap().size,
                slice(&q, &m, &bi(-x)).unwrap().size
            );
        }
    }

    #[test]
    fn projections_of_worked_tetrahedron() {
        let p = tetra_to_polytope(&worked_tetra());
        let xy = project(&p, ProjectionPlane::Xy);
        assert_eq!(xy.p_left(), &[rat(-3, 5), rat(-1, 5)]);
        assert_eq!(xy.p_right(), &[rat(6, 17), rat(2, 17)]);
        let xz = project(&p, ProjectionPlane::Xz);
        assert_eq!(xz.p_left(), &[rat(-3, 5), rat(-3, 10)]);
        assert_eq!(xz.p_right(), &[rat(6, 17), rat(3, 17)]);
        // Projections of a tetrahedron degenerate to triangles through the
        // origin.
        assert!(xy.is_triangle());
        assert!(xy.sigma_y().is_zero());
    }

    #[test]
    fn serde_round_trips_and_validates() {
        let p = worked_polygon();
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"p_left":["-3/4","1/2"],"p_right":["1/4","3/4"]}"#);
        assert_eq!(serde_json::from_str::<Polygon4>(&json).unwrap(), p);
        let bad = r#"{"p_left":["3/4","1/2"],"p_right":["1/4","3/4"]}"#;
        assert!(serde_json::from_str::<Polygon4>(bad).is_err());

        let t = worked_tetra();
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(json, r#"{"tuple":["-3/5","6/17","1/3","1/2"]}"#);
        assert_eq!(serde_json::from_str::<TetraTuple>(&json).unwrap(), t);

        let p3 = tetra_to_polytope(&t);
        let json = serde_json::to_string(&p3).unwrap();
        assert_eq!(serde_json::from_str::<Polytope3>(&json).unwrap(), p3);
    }

    #[test]
    fn closed_forms_match_bruteforce_on_worked_examples() {
        let (p, _) = shear_normalize_2d(&worked_polygon());
        let m = bi(4);
        for x in -3i64..=1 {
            let closed = column(&p, &m, &bi(x)).unwrap();
            assert_eq!(closed, bruteforce::column_by_enumeration(&p, &m, &bi(x)));
        }
        let t = TetraTuple::new(rat(-5, 18), rat(5, 7), rat(2, 5), int(1)).unwrap();
        let p = tetra_to_polytope(&t);
        let m = bi(126);
        for x in [-35i64, -34, -1, 0, 1, 87, 90] {
            let closed = slice(&p, &m, &bi(x)).unwrap();
            assert_eq!(closed, bruteforce::slice_by_enumeration(&p, &m, &bi(x)), "x = {x}");
        }
    }

    /// Random small polygons: p_left = (-a1/b1, c1/d1), p_right = (a2/b2, c2/d2)
    /// filtered through the validating constructor.
    fn arb_polygon() -> impl Strategy<Value = Polygon4> {
        (
            (1i64..=6, 1i64..=4),
            (-6i64..=6, 1i64..=4),
            (1i64..=6, 1i64..=4),
            (-6i64..=6, 1i64..=4),
        )
            .prop_filter_map("valid polygon", |(xl, yl, xr, yr)| {
                Polygon4::new([rat(-xl.0, xl.1), rat(yl.0, yl.1)], [rat(xr.0, xr.1), rat(yr.0, yr.1)])
                    .ok()
            })
    }

    fn arb_polytope() -> impl Strategy<Value = Polytope3> {
        (
            (1i64..=5, 1i64..=3),
            (-5i64..=5, 1i64..=3),
            (-5i64..=5, 1i64..=3),
            (1i64..=5, 1i64..=3),
            (-5i64..=5, 1i64..=3),
            (-5i64..=5, 1i64..=3),
        )
            .prop_filter_map("valid polytope", |(xl, yl, zl, xr, yr, zr)| {
                Polytope3::new(
                    [rat(-xl.0, xl.1), rat(yl.0, yl.1), rat(zl.0, zl.1)],
                    [rat(xr.0, xr.1), rat(yr.0, yr.1), rat(zr.0, zr.1)],
                )
                .ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn prop_column_matches_bruteforce(p in arb_polygon(), xsel in 0.0f64..1.0) {
            let m = p.integrality_scale();
            let lo = (p.p_left()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let hi = (p.p_right()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let span = (&hi - &lo).to_i64().unwrap();
            let x = &lo + BigInt::from((span as f64 * xsel) as i64);
            let closed = column(&p, &m, &x).unwrap();
            let oracle = bruteforce::column_by_enumeration(&p, &m, &x);
            prop_assert_eq!(closed, oracle, "column mismatch for {:?}", p);
        }

        #[test]
        fn prop_slice_matches_bruteforce(p in arb_polytope(), xsel in 0.0f64..1.0) {
            let m = p.integrality_scale();
            let lo = (p.p_left()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let hi = (p.p_right()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let span = (&hi - &lo).to_i64().unwrap();
            let x = &lo + BigInt::from((span as f64 * xsel) as i64);
            let closed = slice(&p, &m, &x).unwrap();
            let oracle = bruteforce::slice_by_enumeration(&p, &m, &x);
            prop_assert_eq!(closed, oracle, "slice mismatch for {:?}", p);
        }

        #[test]
        fn prop_slice_size_at_most_projected_column_size(
            p in arb_polytope(), xsel in 0.0f64..1.0
        ) {
            let m = p.integrality_scale();
            let lo = (p.p_left()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let hi = (p.p_right()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let span = (&hi - &lo).to_i64().unwrap();
            let x = &lo + BigInt::from((span as f64 * xsel) as i64);
            let s = slice(&p, &m, &x).unwrap().size;
            for plane in [ProjectionPlane::Xy, ProjectionPlane::Xz] {
                let q = project(&p, plane);
                let mq = q.integrality_scale();
                // m is a multiple of the projection's scale
                let scaled_m = m.clone();
                prop_assert!((&scaled_m % &mq).is_zero());
                let col = column(&q, &scaled_m, &x).unwrap().size;
                prop_assert!(
                    s <= col,
                    "slice size {} exceeds projected column size {} at x = {}",
                    s, col, x
                );
            }
        }

        #[test]
        fn prop_slice_counts_shear_invariant(
            p in arb_polytope(), a in -3i64..=3, b in -3i64..=3, xsel in 0.0f64..1.0
        ) {
            let m = p.integrality_scale();
            let lo = (p.p_left()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let hi = (p.p_right()[0].clone() * Rational::from_integer(m.clone())).to_integer();
            let span = (&hi - &lo).to_i64().unwrap();
            let x = &lo + BigInt::from((span as f64 * xsel) as i64);
            let q = p.shear(&bi(a), &bi(b));
            let mq = q.integrality_scale();
            prop_assert_eq!(&mq, &m, "shears preserve the integrality scale");
            let orig = slice(&p, &m, &x).unwrap();
            let moved = slice(&q, &m, &x).unwrap();
            prop_assert_eq!(orig.size, moved.size);
        }
    }
}
