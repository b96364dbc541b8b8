//! Bob's deterministic sequential strategies on two boxes: query one box,
//! choose the second input from the first output, post-process the outputs
//! into a single bit. 2 orders x 2 first inputs x 4 second-input functions
//! x 16 output functions = 256 raw strategies.

use std::collections::BTreeMap;

use num::Zero;

use crate::catalog::{standard_pr, LocalExtremalId};
use crate::coupler::{chi_index, CanonicalAction, Coupler};
use crate::error::Error;
use crate::rational::{int, Rational};
use crate::state::{BoxSignature, BoxState};

/// A deterministic sequential wiring strategy.
///
/// The second input is `mu * b_first + nu` (mod 2); the output bit is
/// `output_table[b1 * 2 + b2]` over the physical box outputs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Wiring {
    /// Which box is queried first (0 or 1).
    pub first_box: usize,
    /// Input applied to the first box (lambda).
    pub first_input: bool,
    pub mu: bool,
    pub nu: bool,
    pub output_table: [bool; 4],
}

impl Wiring {
    /// All 256 raw strategies.
    pub fn all() -> Vec<Wiring> {
        let mut out = Vec::with_capacity(256);
        for first_box in 0..2 {
            for first_input in [false, true] {
                for mu in [false, true] {
                    for nu in [false, true] {
                        for t in 0..16u8 {
                            out.push(Wiring {
                                first_box,
                                first_input,
                                mu,
                                nu,
                                output_table: [
                                    t & 1 == 1,
                                    t >> 1 & 1 == 1,
                                    t >> 2 & 1 == 1,
                                    t >> 3 & 1 == 1,
                                ],
                            });
                        }
                    }
                }
            }
        }
        out
    }

    /// The input pair (y1, y2) this strategy applies when the physical
    /// outputs turn out to be (b1, b2).
    pub fn inputs_for(&self, b1: usize, b2: usize) -> (usize, usize) {
        let first_out = if self.first_box == 0 { b1 } else { b2 };
        let second = (self.mu as usize & first_out) ^ self.nu as usize;
        if self.first_box == 0 {
            (self.first_input as usize, second)
        } else {
            (second, self.first_input as usize)
        }
    }

    pub fn output(&self, b1: usize, b2: usize) -> usize {
        self.output_table[b1 * 2 + b2] as usize
    }
}

/// Joint distribution of (b1, b2, b') under the strategy, indexed
/// `b1 * 4 + b2 * 2 + b'`. Requires a no-signalling state (the first box's
/// marginal must not depend on the pending second input).
pub fn apply_wiring(state: &BoxState, w: &Wiring) -> Result<Vec<Rational>, Error> {
    if state.signature() != &BoxSignature::binary_pair() {
        return Err(Error::BadSignature("wiring acts on two binary boxes".into()));
    }
    let mut dist = vec![Rational::zero(); 8];
    for b1 in 0..2 {
        for b2 in 0..2 {
            let (y1, y2) = w.inputs_for(b1, b2);
            let p = state.prob(&[b1, b2], &[y1, y2]).clone();
            dist[b1 * 4 + b2 * 2 + w.output(b1, b2)] += p;
        }
    }
    Ok(dist)
}

/// The chi table whose linear action reproduces this wiring's b' marginal on
/// every two-box no-signalling state: chi(b', b1 b2 y1 y2) = 1 exactly on
/// the triples consistent with the strategy.
pub fn wiring_to_coupler(w: &Wiring) -> Coupler {
    let mut rows = vec![vec![int(0); 16]; 2];
    for b1 in 0..2 {
        for b2 in 0..2 {
            let (y1, y2) = w.inputs_for(b1, b2);
            rows[w.output(b1, b2)][chi_index(b1, b2, y1, y2)] = int(1);
        }
    }
    Coupler::new(rows).expect("wiring chi tables are universal")
}

/// The 256 strategies deduped by canonical coupler action.
pub fn enumerate_wiring_couplers() -> BTreeMap<CanonicalAction, Wiring> {
    let mut map = BTreeMap::new();
    for w in Wiring::all() {
        map.entry(wiring_to_coupler(&w).canonical_action()).or_insert(w);
    }
    map
}

/// The local extremal state Alice and Charlie are left with when Bob runs
/// the announced sequential strategy on PR x PR and sees outputs (b1, b2).
pub fn expected_swapped_state(
    first_box: usize,
    lambda: bool,
    mu: bool,
    nu: bool,
    b1: usize,
    b2: usize,
) -> LocalExtremalId {
    let first_out = if first_box == 0 { b1 } else { b2 };
    let second = (mu as usize & first_out) ^ nu as usize;
    if first_box == 0 {
        // a = lambda * x + b1, c = (mu b1 + nu) * z + b2
        LocalExtremalId::new(lambda, b1 == 1, second == 1, b2 == 1)
    } else {
        LocalExtremalId::new(second == 1, b1 == 1, lambda, b2 == 1)
    }
}

/// Runs a sequential strategy on Bob's two boxes of PR x PR (boxes 1 and 2
/// of [Alice, Bob, Bob, Charlie]) and returns, per Bob outcome (b1, b2), the
/// outcome probability and the conditional Alice-Charlie state.
pub fn swapping_by_wiring(
    first_box: usize,
    lambda: bool,
    mu: bool,
    nu: bool,
) -> Result<Vec<((usize, usize), Rational, BoxState)>, Error> {
    if first_box > 1 {
        return Err(Error::BadSignature("first_box must be 0 or 1".into()));
    }
    let four = standard_pr().tensor(&standard_pr());
    let mut out = Vec::with_capacity(4);
    for b1 in 0..2 {
        for b2 in 0..2 {
            let first_out = if first_box == 0 { b1 } else { b2 };
            let second_in = (mu as usize & first_out) ^ nu as usize;
            let (p_first, after_first) = if first_box == 0 {
                four.condition(1, lambda as usize, b1)?
            } else {
                four.condition(2, lambda as usize, b2)?
            };
            // after removing one of Bob's boxes the other sits at index 1
            let second_out = if first_box == 0 { b2 } else { b1 };
            let (p_second, ac) = after_first.condition(1, second_in, second_out)?;
            out.push(((b1, b2), &p_first * &p_second, ac));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{local_extremal, nonlocal_extremal, NonlocalExtremalId};
    use crate::rational::rat;
    use crate::state::BoxState;

    #[test]
    fn pr_wiring_outcomes_are_uniform() {
        // lambda = mu = nu = 1, b' = b2, applied to Bob's reduced state of
        // PR x PR (each box uniform, so every outcome pair has weight 1/4)
        let w = Wiring {
            first_box: 0,
            first_input: true,
            mu: true,
            nu: true,
            output_table: [false, true, false, true],
        };
        let bob = standard_pr()
            .tensor(&standard_pr())
            .marginal(&[1, 2])
            .unwrap();
        let dist = apply_wiring(&bob, &w).unwrap();
        for b1 in 0..2 {
            for b2 in 0..2 {
                let p = &dist[b1 * 4 + b2 * 2] + &dist[b1 * 4 + b2 * 2 + 1];
                assert_eq!(p, rat(1, 4));
            }
        }
    }

    #[test]
    fn deterministic_state_gives_deterministic_outcome() {
        let s = local_extremal(LocalExtremalId::new(false, false, false, false));
        for w in Wiring::all().into_iter().take(32) {
            let dist = apply_wiring(&s, &w).unwrap();
            assert!(dist.iter().any(|p| p == &int(1)));
        }
    }

    #[test]
    fn xor_wiring_on_pr_yields_zero() {
        // y1 = y2 = 0, b' = b1 xor b2; PR at x y = 0 0 forces b1 = b2
        let w = Wiring {
            first_box: 0,
            first_input: false,
            mu: false,
            nu: false,
            output_table: [false, true, true, false],
        };
        let dist = apply_wiring(&standard_pr(), &w).unwrap();
        let p_zero: Rational = [0, 1, 2, 3].iter().map(|i| dist[i * 2].clone()).sum();
        assert_eq!(p_zero, int(1));
    }

    #[test]
    fn coupler_action_matches_wiring_marginal() {
        // spot-check the oracle equivalence on every extremal state
        let states: Vec<BoxState> = crate::catalog::all_extremal_states();
        for w in Wiring::all() {
            let c = wiring_to_coupler(&w);
            for s in &states {
                let dist = apply_wiring(s, &w).unwrap();
                let b_marginal: Vec<Rational> = (0..2)
                    .map(|bp| (0..4).map(|o| dist[o * 2 + bp].clone()).sum())
                    .collect();
                assert_eq!(c.apply(s).unwrap(), b_marginal);
            }
        }
    }

    #[test]
    fn deduped_wirings_count_82() {
        assert_eq!(enumerate_wiring_couplers().len(), 82);
    }

    #[test]
    fn swapping_collapses_to_predicted_local_extremal() {
        for first_box in 0..2 {
            for lambda in [false, true] {
                for mu in [false, true] {
                    for nu in [false, true] {
                        for ((b1, b2), p, ac) in
                            swapping_by_wiring(first_box, lambda, mu, nu).unwrap()
                        {
                            assert_eq!(p, rat(1, 4));
                            let expected = expected_swapped_state(
                                first_box, lambda, mu, nu, b1, b2,
                            );
                            assert_eq!(ac, local_extremal(expected));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn wiring_set_closed_under_not_gates() {
        // negating the intermediate wire or the output wire maps the deduped
        // action set onto itself
        let actions = enumerate_wiring_couplers();
        for w in Wiring::all().into_iter().take(64) {
            let flipped_mid = Wiring {
                nu: !w.nu,
                ..w
            };
            let flipped_out = Wiring {
                output_table: [
                    !w.output_table[0],
                    !w.output_table[1],
                    !w.output_table[2],
                    !w.output_table[3],
                ],
                ..w
            };
            for v in [flipped_mid, flipped_out] {
                let action = wiring_to_coupler(&v).canonical_action();
                assert!(actions.contains_key(&action));
            }
        }
    }

    #[test]
    fn pr_marginal_under_any_pr_relabelling_is_quarter() {
        for id in NonlocalExtremalId::all() {
            let s = nonlocal_extremal(id);
            for w in Wiring::all().into_iter().step_by(16) {
                let dist = apply_wiring(&s, &w).unwrap();
                let total: Rational = dist.iter().cloned().sum();
                assert_eq!(total, int(1));
            }
        }
    }
}
