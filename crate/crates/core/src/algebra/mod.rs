//! Exact arithmetic in `F_q`, `F_q[t]` and `F_q(t)`.

pub mod factor;
pub mod field;
pub mod partial;
pub mod place;
pub mod poly;
pub mod ratfun;
pub mod resultant;
pub mod sample;
pub mod text;

pub use factor::{factor, is_irreducible, Factorization};
pub use field::{FieldCtx, FqElem};
pub use partial::{partial_fractions, LocalPart, PartialFractions};
pub use place::Place;
pub use poly::Poly;
pub use ratfun::{arith, ArithOp, RatFun};
pub use resultant::{discriminant, resultant, RatFunPoly};
