//! Structured text (JSON) formats for box states and polytope
//! representations. All rationals are serialized as `"p/q"` strings in
//! lowest terms (`"0"` and `"1"` permitted).

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::polytope::{HRep, VRep};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::state::{BoxSignature, BoxState};

/// Box-state document: `signature: [[in, out], ...]`, `table` rows indexed
/// by joint input (outer) and joint output (inner), canonical order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BoxStateFile {
    pub signature: Vec<[usize; 2]>,
    pub table: Vec<Vec<String>>,
}

impl BoxStateFile {
    pub fn from_state(state: &BoxState) -> Self {
        BoxStateFile {
            signature: state.signature().boxes().iter().map(|&(i, o)| [i, o]).collect(),
            table: state
                .table()
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
        }
    }

    pub fn to_state(&self) -> Result<BoxState, Error> {
        let signature =
            BoxSignature::new(self.signature.iter().map(|&[i, o]| (i, o)).collect())?;
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|s| parse_rational(s)).collect())
            .collect::<Result<Vec<Vec<Rational>>, Error>>()?;
        BoxState::new(signature, table)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConstraintFile {
    pub coeffs: Vec<String>,
    pub rhs: String,
}

/// H-representation document with `inequalities` (`coeffs . x <= rhs`) and
/// `equalities`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HRepFile {
    pub ambient_dim: usize,
    pub inequalities: Vec<ConstraintFile>,
    pub equalities: Vec<ConstraintFile>,
}

impl HRepFile {
    pub fn from_hrep(h: &HRep) -> Self {
        let conv = |rows: &[(Vec<Rational>, Rational)]| {
            rows.iter()
                .map(|(c, r)| ConstraintFile {
                    coeffs: c.iter().map(format_rational).collect(),
                    rhs: format_rational(r),
                })
                .collect()
        };
        HRepFile {
            ambient_dim: h.ambient_dim,
            inequalities: conv(&h.inequalities),
            equalities: conv(&h.equalities),
        }
    }

    pub fn to_hrep(&self) -> Result<HRep, Error> {
        let mut h = HRep::new(self.ambient_dim);
        for c in &self.inequalities {
            let coeffs = c
                .coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() != self.ambient_dim {
                return Err(Error::InvalidState("coefficient length mismatch".into()));
            }
            h.push_inequality(coeffs, parse_rational(&c.rhs)?);
        }
        for c in &self.equalities {
            let coeffs = c
                .coeffs
                .iter()
                .map(|s| parse_rational(s))
                .collect::<Result<Vec<_>, _>>()?;
            if coeffs.len() != self.ambient_dim {
                return Err(Error::InvalidState("coefficient length mismatch".into()));
            }
            h.push_equality(coeffs, parse_rational(&c.rhs)?);
        }
        Ok(h)
    }
}

/// V-representation document: `vertices`, `rays`, `linearities`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VRepFile {
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub rays: Vec<Vec<String>>,
    #[serde(default)]
    pub linearities: Vec<Vec<String>>,
}

impl VRepFile {
    pub fn from_vrep(v: &VRep) -> Self {
        let conv = |rows: &[Vec<Rational>]| {
            rows.iter()
                .map(|r| r.iter().map(format_rational).collect())
                .collect()
        };
        VRepFile {
            vertices: conv(&v.vertices),
            rays: conv(&v.rays),
            linearities: conv(&v.linearity_dirs),
        }
    }

    pub fn to_vrep(&self) -> Result<VRep, Error> {
        let conv = |rows: &[Vec<String>]| {
            rows.iter()
                .map(|r| r.iter().map(|s| parse_rational(s)).collect())
                .collect::<Result<Vec<Vec<Rational>>, Error>>()
        };
        Ok(VRep {
            vertices: conv(&self.vertices)?,
            rays: conv(&self.rays)?,
            linearity_dirs: conv(&self.linearities)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{noisy_pr_state, ns_polytope_hrep};

    #[test]
    fn box_state_round_trips_bit_exactly() {
        let s = noisy_pr_state();
        let file = BoxStateFile::from_state(&s);
        let json = serde_json::to_string(&file).unwrap();
        let back: BoxStateFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_state().unwrap(), s);
    }

    #[test]
    fn hrep_round_trips() {
        let h = ns_polytope_hrep();
        let file = HRepFile::from_hrep(&h);
        let json = serde_json::to_string(&file).unwrap();
        let back: HRepFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back.to_hrep().unwrap(), h);
    }

    #[test]
    fn malformed_entries_rejected() {
        let file = BoxStateFile {
            signature: vec![[2, 2]],
            table: vec![vec!["1/2".into(), "oops".into()], vec!["1".into(), "0".into()]],
        };
        assert!(file.to_state().is_err());
    }
}
