//! First-order syntax, its text form, and the compiler from arithmetic to
//! ring sentences.

pub mod corpus;
pub mod sexpr;
pub mod syntax;
pub mod translate;

pub use sexpr::{parse, parse_term, print};
pub use syntax::{Formula, Sig, Term};
pub use translate::{instantiate_wrapper, q_axioms, translate, wrap_parameter_free, TranslationEnv};
