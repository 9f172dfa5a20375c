//! Exact symbolic workbench for quantized enveloping algebras U_q(g),
//! quantum symmetric pair coideal subalgebras, and spherical invariants.
//!
//! Everything is computed over the ordered field Q(s) with q = s^2; there is
//! no floating point anywhere.  The main layers, bottom up:
//!
//! * [`qfield`] — the coefficient field: exact rational functions in `s`,
//!   balanced q-integers and q-binomials, the sign test for the order on
//!   Q(s), and specialization at q = 1.
//! * [`rootdata`] — finite-type Cartan/root-lattice data, involutions of the
//!   root lattice, restricted root systems, spherical weight tests.
//! * [`uq`] — the quantized enveloping algebra itself: normal forms through a
//!   completed rewriting system, Hopf structure, adjoint actions, and the
//!   triangular/filtration projections.
//! * [`involution`] — quantum analogues of maximally split involutions:
//!   Satake-style validation and the algebra involution lifted to U_q(g).
//! * [`pair`] — coideal subalgebra presentations: generators, coideal
//!   certificates, modified Serre relations with defect terms, and
//!   specialization at q = 1 against a classical oracle.
//! * [`repn`] — simple highest-weight modules with the contravariant form,
//!   spherical invariants, positivity, and real-form scalings.

pub mod classical;
pub mod error;
pub mod involution;
pub mod linalg;
pub mod pair;
pub mod qfield;
pub mod repn;
pub mod rootdata;
pub mod text;
pub mod uq;

pub use error::Error;
pub use qfield::{QRat, Sign};
pub use rootdata::{LatticeMap, RestrictedSystem, RootDatum};
pub use uq::{AlgebraContext, Element, NormalWord, TensorElement};
