//! Exact-arithmetic criteria for showing that the blowup of a toric variety
//! at a general point of its torus is **not** a Mori Dream Space (MDS).
//!
//! The library works with three families of inputs:
//!
//! * rational plane 4-gons with two fixed lattice vertices on the y-axis
//!   ([`polytope::Polygon4`], checked by [`checker::check_2d`]),
//! * rational 3-polytopes with a fixed lattice triangle in the x = 0 plane
//!   ([`polytope::Polytope3`], checked by [`checker::check_3d`]), including
//!   the degenerate tetrahedron case ([`polytope::TetraTuple`],
//!   [`checker::check_tetra`]), and
//! * weighted projective spaces of dimension 3 and 4 given by their weights
//!   ([`wps`], checked by [`wps::check_wps`] and searched exhaustively by
//!   [`wps::search`]).
//!
//! Every criterion is *one-sided*: the verdict is either `NotMDS` (the
//! sufficient conditions hold, with exact witnesses) or `Inconclusive`.
//! All arithmetic is exact — arbitrary-precision rationals throughout, no
//! floating point anywhere.
//!
//! The criteria reduce to the non-vanishing of certain derivatives of
//! polynomials singled out by interpolation conditions.  The
//! [`derivative`] module recomputes those values from scratch with an
//! independent exact linear-algebra kernel computation so the closed forms
//! used by the checkers can be cross-validated ([`derivative::oracle_2d`],
//! [`derivative::oracle_3d`]).
//!
//! The [`cli`] module exposes all of the above as a command-line tool with
//! byte-stable JSON/CSV/markdown output.

pub mod checker;
pub mod cli;
pub mod derivative;
pub mod exact;
pub mod polytope;
pub mod wps;
