//! JSON shapes shared by the library and the command-line tool.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::boolean::{Subset, MAX_VARS};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::periodic::PeriodicRepresentation;

/// One coefficient: a set of 1-based variable indices and its value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Term {
    pub set: Vec<usize>,
    pub coeff: Dyadic,
}

impl Term {
    pub fn mask(&self, n: usize) -> Result<Subset> {
        let mut mask: Subset = 0;
        for &i in &self.set {
            if i == 0 || i > n {
                return Err(Error::Parameter(format!(
                    "variable index {i} is not in 1..={n}"
                )));
            }
            mask |= 1 << (i - 1);
        }
        Ok(mask)
    }
}

#[derive(Serialize, Deserialize)]
struct RepresentationJson {
    n: usize,
    phi: Vec<Term>,
}

impl Serialize for PeriodicRepresentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        RepresentationJson {
            n: self.n(),
            phi: terms(self.phi().iter()),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PeriodicRepresentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = RepresentationJson::deserialize(deserializer)?;
        representation_from_terms(raw.n, raw.phi).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn terms<'a>(coeffs: impl Iterator<Item = (&'a Subset, &'a Dyadic)>) -> Vec<Term> {
    coeffs
        .map(|(&s, c)| Term {
            set: crate::boolean::subset_indices(s),
            coeff: c.clone(),
        })
        .collect()
}

pub fn representation_from_terms(n: usize, phi: Vec<Term>) -> Result<PeriodicRepresentation> {
    if n > MAX_VARS {
        return Err(Error::TooManyVariables { n, cap: MAX_VARS });
    }
    let mut pairs = Vec::with_capacity(phi.len());
    for t in phi {
        pairs.push((t.mask(n)?, t.coeff));
    }
    PeriodicRepresentation::new(n, pairs)
}
