//! Evaluation settings and the JSON report.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::arith::eval_arith;
use super::ring::{eval_ring_bounded, search_points, RingCtx};
use super::witness::{Truth, WitnessBundle, WitnessEval};
use crate::algebra::text::{to_text, RatFunText};
use crate::algebra::{FieldCtx, RatFun};
use crate::error::{Error, Result};
use crate::logic::syntax::Formula;
use crate::logic::print;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Arith,
    RingBounded,
    RingWitness,
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "arith" => Ok(Mode::Arith),
            "ring-bounded" => Ok(Mode::RingBounded),
            "ring-witness" => Ok(Mode::RingWitness),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalConfig {
    pub mode: Mode,
    /// Integer quantifiers range over `1..=int_bound`.
    pub int_bound: u64,
    /// Bounded ring search over `f/g` with degrees at most this.
    pub degree_bound: u64,
    /// Coded integers `t^(B^s)` with `s <= s_max`.
    pub s_max: u64,
}

impl EvalConfig {
    pub fn new(mode: Mode) -> EvalConfig {
        EvalConfig { mode, int_bound: 30, degree_bound: 3, s_max: 6 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.int_bound == 0 || self.degree_bound == 0 || self.s_max == 0 {
            return Err(Error::InvalidArgument("N, d and s_max must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bounds {
    pub int_bound: u64,
    pub degree_bound: u64,
    pub s_max: u64,
    /// Points a bounded ring search may visit.
    pub search_points: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessValue {
    pub var: String,
    pub value: RatFunText,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub formula_hash: String,
    pub mode: Mode,
    pub bounds: Bounds,
    pub verdict: Truth,
    /// The verdict is relative to the bounds rather than absolute.
    pub bounded: bool,
    pub witnesses: Vec<WitnessValue>,
    pub wall_time_ms: f64,
}

/// SHA-256 of the printed formula, in hex.
pub fn formula_hash(phi: &Formula) -> String {
    Sha256::digest(print(phi).as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
}

fn truth(b: bool) -> Truth {
    if b {
        Truth::True
    } else {
        Truth::False
    }
}

/// Runs `phi` in the configured mode. Ring modes use `field`, the named
/// parameter values, and for witness mode an optional bundle.
pub fn evaluate(
    phi: &Formula,
    field: &FieldCtx,
    cfg: &EvalConfig,
    params: &BTreeMap<String, RatFun>,
    bundle: Option<WitnessBundle>,
) -> Result<EvalReport> {
    cfg.validate()?;
    let start = Instant::now();
    let quantified = phi.quantifier_depth() > 0;
    let mut bounds =
        Bounds { int_bound: cfg.int_bound, degree_bound: cfg.degree_bound, s_max: cfg.s_max, search_points: None };
    let (verdict, bounded, witnesses) = match cfg.mode {
        Mode::Arith => (truth(eval_arith(phi, cfg.int_bound)?), quantified, Vec::new()),
        Mode::RingBounded => {
            bounds.search_points = Some(search_points(field, cfg.degree_bound, phi.quantifier_depth()));
            let ctx = RingCtx::new(field, params.clone());
            (truth(eval_ring_bounded(phi, &ctx, cfg.degree_bound, &Vec::new())?), quantified, Vec::new())
        }
        Mode::RingWitness => {
            let mut ev = WitnessEval::with_ctx(RingCtx::new(field, params.clone()), cfg.s_max);
            if let Some(b) = bundle {
                ev = ev.with_source(Box::new(b));
            }
            let v = ev.eval(phi)?;
            let w = v
                .witnesses
                .into_iter()
                .map(|w| WitnessValue { var: w.var, value: to_text(&w.value), source: w.source })
                .collect();
            (v.truth, v.bounded, w)
        }
    };
    Ok(EvalReport {
        formula_hash: formula_hash(phi),
        mode: cfg.mode,
        bounds,
        verdict,
        bounded,
        witnesses,
        wall_time_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{parse, translate, Sig, TranslationEnv};
    use crate::model::ModelParams;

    #[test]
    fn reports_serialize() {
        let f3 = FieldCtx::prime(3).unwrap();
        let env = TranslationEnv::new(&ModelParams::new(&f3));
        let phi = translate(&parse("(divides 2 4)", Sig::Arith).unwrap(), &env).unwrap();
        let bundle = WitnessBundle::divides(&ModelParams::new(&f3), 2, 4).unwrap();
        let r = evaluate(&phi, &f3, &EvalConfig::new(Mode::RingWitness), &BTreeMap::new(), Some(bundle)).unwrap();
        assert_eq!(r.verdict, Truth::True);
        assert!(!r.bounded);
        let json = serde_json::to_string(&r).unwrap();
        let back: EvalReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back.formula_hash, r.formula_hash);
        assert_eq!(back.verdict, Truth::True);
        assert_eq!(r.formula_hash.len(), 64);
    }

    #[test]
    fn bundles_supply_existential_values() {
        let f3 = FieldCtx::prime(3).unwrap();
        let model = ModelParams::new(&f3);
        let env = TranslationEnv::new(&model);
        let phi = translate(&parse("(= (+ 1 1) 2)", Sig::Arith).unwrap(), &env).unwrap();
        let bundle = WitnessBundle::addition(&model, 1, 1).unwrap();
        let r = evaluate(&phi, &f3, &EvalConfig::new(Mode::RingWitness), &BTreeMap::new(), Some(bundle)).unwrap();
        assert_eq!(r.verdict, Truth::True);
        let w = model.add_witness(1, 1).unwrap();
        assert_eq!(r.witnesses[0].value, to_text(&w.x));
        assert_eq!(r.witnesses[1].value, to_text(&w.z));
    }
}
