use std::fmt;

use super::factor::is_irreducible;
use super::field::{FieldCtx, FqElem};
use super::poly::Poly;
use crate::error::{Error, Result};

/// A prime of `F_q(t)`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum Place {
    Finite(Poly),
    Infinity,
}

impl Place {
    /// Checks that `pi` is monic and irreducible.
    pub fn finite(pi: Poly) -> Result<Place> {
        if pi.is_zero() || pi.is_constant() || !pi.is_monic() || !is_irreducible(&pi) {
            return Err(Error::NotIrreducible(pi.to_string()));
        }
        Ok(Place::Finite(pi))
    }

    /// The zero of `t`.
    pub fn t(f: &FieldCtx) -> Place {
        Place::Finite(Poly::t(f))
    }

    /// The place `t - c`.
    pub fn linear(f: &FieldCtx, c: FqElem) -> Place {
        Place::Finite(Poly::from_terms(f, vec![(0, f.neg(c)), (1, FqElem::ONE)]))
    }

    pub fn degree(&self) -> u64 {
        match self {
            Place::Finite(p) => p.deg(),
            Place::Infinity => 1,
        }
    }

    pub fn poly(&self) -> Option<&Poly> {
        match self {
            Place::Finite(p) => Some(p),
            Place::Infinity => None,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity)
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(p) => write!(f, "({p})"),
            Place::Infinity => write!(f, "inf"),
        }
    }
}
