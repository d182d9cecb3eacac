//! Evaluation of sentences.

pub mod arith;
pub mod ring;
pub mod report;
pub mod witness;

pub use arith::{eval_arith, eval_arith_with};
pub use ring::{eval_ring_bounded, search_points, universe, RingCtx, SEARCH_LIMIT};
pub use witness::{Candidates, ModelWitnesses, Truth, Verdict, Witness, WitnessBundle, WitnessEval, WitnessSource};
pub use report::{evaluate, formula_hash, Bounds, EvalConfig, EvalReport, Mode, WitnessValue};
