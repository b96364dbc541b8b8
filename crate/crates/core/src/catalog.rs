//! The 24 extremal states of the two-box binary no-signalling polytope,
//! CHSH evaluation, and exact local-polytope membership.

use num::Zero;

use crate::error::Error;
use crate::polytope::{lp_feasible, HRep};
use crate::rational::{int, rat, Rational};
use crate::state::{BoxSignature, BoxState};

/// Identifies one of the 16 deterministic local extremal states:
/// a = alpha*x + beta, b = gamma*y + delta (mod 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LocalExtremalId {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
    pub delta: bool,
}

impl LocalExtremalId {
    pub fn new(alpha: bool, beta: bool, gamma: bool, delta: bool) -> Self {
        LocalExtremalId {
            alpha,
            beta,
            gamma,
            delta,
        }
    }

    /// All 16 ids in lexicographic (alpha, beta, gamma, delta) order.
    pub fn all() -> Vec<LocalExtremalId> {
        (0..16)
            .map(|i| {
                LocalExtremalId::new(i >> 3 & 1 == 1, i >> 2 & 1 == 1, i >> 1 & 1 == 1, i & 1 == 1)
            })
            .collect()
    }

    pub fn index(&self) -> usize {
        (self.alpha as usize) << 3
            | (self.beta as usize) << 2
            | (self.gamma as usize) << 1
            | self.delta as usize
    }
}

/// Identifies one of the 8 extremal non-local (PR) states:
/// a + b = x*y + alpha*x + beta*y + gamma (mod 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NonlocalExtremalId {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl NonlocalExtremalId {
    pub fn new(alpha: bool, beta: bool, gamma: bool) -> Self {
        NonlocalExtremalId { alpha, beta, gamma }
    }

    pub fn all() -> Vec<NonlocalExtremalId> {
        (0..8)
            .map(|i| NonlocalExtremalId::new(i >> 2 & 1 == 1, i >> 1 & 1 == 1, i & 1 == 1))
            .collect()
    }

    pub fn index(&self) -> usize {
        (self.alpha as usize) << 2 | (self.beta as usize) << 1 | self.gamma as usize
    }
}

fn bit(b: bool) -> usize {
    b as usize
}

/// The deterministic local state P^L_{alpha beta gamma delta}.
pub fn local_extremal(id: LocalExtremalId) -> BoxState {
    let mut table = vec![vec![int(0); 4]; 4];
    for x in 0..2usize {
        for y in 0..2usize {
            let a = bit(id.alpha) * x + bit(id.beta) & 1;
            let b = bit(id.gamma) * y + bit(id.delta) & 1;
            table[x * 2 + y][a * 2 + b] = int(1);
        }
    }
    BoxState::new(BoxSignature::binary_pair(), table).unwrap()
}

/// The PR state P^N_{alpha beta gamma}.
pub fn nonlocal_extremal(id: NonlocalExtremalId) -> BoxState {
    let mut table = vec![vec![int(0); 4]; 4];
    for x in 0..2usize {
        for y in 0..2usize {
            for a in 0..2usize {
                for b in 0..2usize {
                    let parity =
                        x * y + bit(id.alpha) * x + bit(id.beta) * y + bit(id.gamma) & 1;
                    if a ^ b == parity {
                        table[x * 2 + y][a * 2 + b] = rat(1, 2);
                    }
                }
            }
        }
    }
    BoxState::new(BoxSignature::binary_pair(), table).unwrap()
}

/// The standard PR state P^N_000 (a + b = x*y mod 2).
pub fn standard_pr() -> BoxState {
    nonlocal_extremal(NonlocalExtremalId::new(false, false, false))
}

/// All 24 extremal states: the 16 locals (in id order) then the 8 PR states.
pub fn all_extremal_states() -> Vec<BoxState> {
    LocalExtremalId::all()
        .into_iter()
        .map(local_extremal)
        .chain(NonlocalExtremalId::all().into_iter().map(nonlocal_extremal))
        .collect()
}

fn require_binary_pair(state: &BoxState) -> Result<(), Error> {
    if state.signature() != &BoxSignature::binary_pair() {
        return Err(Error::BadSignature(
            "expected two binary-input/binary-output boxes".into(),
        ));
    }
    Ok(())
}

/// The correlator E_xy = sum_ab (-1)^(a+b) P(ab|xy).
fn correlator(state: &BoxState, x: usize, y: usize) -> Rational {
    let mut e = Rational::zero();
    for a in 0..2usize {
        for b in 0..2usize {
            let p = state.prob(&[a, b], &[x, y]);
            if (a ^ b) == 0 {
                e += p;
            } else {
                e -= p;
            }
        }
    }
    e
}

/// CHSH in the fixed convention E00 + E01 + E10 - E11.
pub fn chsh_value(state: &BoxState) -> Result<Rational, Error> {
    require_binary_pair(state)?;
    Ok(chsh_variant_value(state, CHSHVariant::standard()))
}

/// One of the 8 CHSH facet expressions:
/// sum_xy (-1)^(xy + alpha*x + beta*y + gamma) E_xy.
///
/// The standard convention is the variant (0,0,0). P^N_{abc} attains the
/// value 4 exactly on the matching variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CHSHVariant {
    pub alpha: bool,
    pub beta: bool,
    pub gamma: bool,
}

impl CHSHVariant {
    pub fn standard() -> Self {
        CHSHVariant {
            alpha: false,
            beta: false,
            gamma: false,
        }
    }

    pub fn all() -> Vec<CHSHVariant> {
        (0..8)
            .map(|i| CHSHVariant {
                alpha: i >> 2 & 1 == 1,
                beta: i >> 1 & 1 == 1,
                gamma: i & 1 == 1,
            })
            .collect()
    }
}

pub fn chsh_variant_value(state: &BoxState, variant: CHSHVariant) -> Rational {
    let mut total = Rational::zero();
    for x in 0..2usize {
        for y in 0..2usize {
            let sign =
                x * y + bit(variant.alpha) * x + bit(variant.beta) * y + bit(variant.gamma) & 1;
            let e = correlator(state, x, y);
            if sign == 0 {
                total += e;
            } else {
                total -= e;
            }
        }
    }
    total
}

/// A convex decomposition over the 16 local extremal states.
#[derive(Debug, Clone)]
pub struct LocalDecomposition {
    pub weights: Vec<(LocalExtremalId, Rational)>,
}

impl LocalDecomposition {
    /// The mixture this decomposition describes.
    pub fn reconstruct(&self) -> BoxState {
        let parts: Vec<(Rational, BoxState)> = self
            .weights
            .iter()
            .map(|(id, w)| (w.clone(), local_extremal(*id)))
            .collect();
        BoxState::mixture(&parts).unwrap()
    }
}

/// Exact membership test for the local polytope L = conv{16 P^L}.
///
/// Returns one witness decomposition when the state is local, `None`
/// otherwise. Decompositions are highly non-unique; only reconstruction is
/// meaningful, never witness identity.
pub fn local_membership(state: &BoxState) -> Result<Option<LocalDecomposition>, Error> {
    require_binary_pair(state)?;
    let locals: Vec<Vec<Rational>> = LocalExtremalId::all()
        .into_iter()
        .map(|id| local_extremal(id).flatten())
        .collect();
    let target = state.flatten();
    // Variables: 16 weights w_i >= 0 with sum_i w_i P^L_i = state.
    let mut h = HRep::new(16);
    for i in 0..16 {
        let mut coeffs = vec![int(0); 16];
        coeffs[i] = int(-1);
        h.push_inequality(coeffs, int(0)); // w_i >= 0
    }
    for k in 0..16 {
        let coeffs: Vec<Rational> = locals.iter().map(|l| l[k].clone()).collect();
        h.push_equality(coeffs, target[k].clone());
    }
    Ok(lp_feasible(&h).map(|witness| LocalDecomposition {
        weights: LocalExtremalId::all()
            .into_iter()
            .zip(witness)
            .filter(|(_, w)| !w.is_zero())
            .map(|(id, w)| (id, w))
            .collect(),
    }))
}

/// The noisy PR state P^B = 1/2 P^N_000 + 1/8 sum_{beta delta} P^L_{0 beta 0 delta},
/// which equals 1/8 sum_{alpha beta gamma} P^L_{alpha beta gamma (alpha gamma + beta)}.
pub fn noisy_pr_state() -> BoxState {
    let mut parts = vec![(rat(1, 2), standard_pr())];
    for beta in [false, true] {
        for delta in [false, true] {
            parts.push((
                rat(1, 8),
                local_extremal(LocalExtremalId::new(false, beta, false, delta)),
            ));
        }
    }
    let from_noise = BoxState::mixture(&parts).unwrap();

    let mut local_parts = Vec::new();
    for alpha in [false, true] {
        for beta in [false, true] {
            for gamma in [false, true] {
                let delta = (alpha && gamma) ^ beta;
                local_parts.push((
                    rat(1, 8),
                    local_extremal(LocalExtremalId::new(alpha, beta, gamma, delta)),
                ));
            }
        }
    }
    let from_locals = BoxState::mixture(&local_parts).unwrap();
    assert_eq!(from_noise, from_locals);
    from_noise
}

/// H-representation of the two-box binary no-signalling polytope over the 16
/// flattened table entries: positivity, per-input normalization, and the
/// marginal-independence equalities for each party.
pub fn ns_polytope_hrep() -> HRep {
    let idx = |x: usize, y: usize, a: usize, b: usize| (x * 2 + y) * 4 + a * 2 + b;
    let mut h = HRep::new(16);
    for k in 0..16 {
        let mut coeffs = vec![int(0); 16];
        coeffs[k] = int(-1);
        h.push_inequality(coeffs, int(0));
    }
    for x in 0..2 {
        for y in 0..2 {
            let mut coeffs = vec![int(0); 16];
            for a in 0..2 {
                for b in 0..2 {
                    coeffs[idx(x, y, a, b)] = int(1);
                }
            }
            h.push_equality(coeffs, int(1));
        }
    }
    // Bob's marginal independent of x: sum_a P(ab|0y) = sum_a P(ab|1y)
    for y in 0..2 {
        for b in 0..2 {
            let mut coeffs = vec![int(0); 16];
            for a in 0..2 {
                coeffs[idx(0, y, a, b)] = int(1);
                coeffs[idx(1, y, a, b)] = int(-1);
            }
            h.push_equality(coeffs, int(0));
        }
    }
    // Alice's marginal independent of y
    for x in 0..2 {
        for a in 0..2 {
            let mut coeffs = vec![int(0); 16];
            for b in 0..2 {
                coeffs[idx(x, 0, a, b)] = int(1);
                coeffs[idx(x, 1, a, b)] = int(-1);
            }
            h.push_equality(coeffs, int(0));
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn local_extremal_all_zero_outputs() {
        let s = local_extremal(LocalExtremalId::new(false, false, false, false));
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(s.prob(&[0, 0], &[x, y]), &int(1));
            }
        }
    }

    #[test]
    fn local_extremal_identity_outputs() {
        // alpha = gamma = 1, beta = delta = 0: a = x, b = y
        let s = local_extremal(LocalExtremalId::new(true, false, true, false));
        for x in 0..2 {
            for y in 0..2 {
                assert_eq!(s.prob(&[x, y], &[x, y]), &int(1));
            }
        }
    }

    #[test]
    fn all_extremals_are_no_signalling() {
        for s in all_extremal_states() {
            assert!(s.check_no_signalling().ok);
        }
    }

    #[test]
    fn flipped_pr_is_relabelled_pr() {
        // P^N_001 equals P^N_000 with Bob's output flipped.
        let flipped = nonlocal_extremal(NonlocalExtremalId::new(false, false, true));
        let pr = standard_pr();
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    for b in 0..2 {
                        assert_eq!(
                            flipped.prob(&[a, b], &[x, y]),
                            pr.prob(&[a, 1 - b], &[x, y])
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn pr_marginals_uniform() {
        for id in NonlocalExtremalId::all() {
            let s = nonlocal_extremal(id);
            for party in 0..2 {
                let m = s.marginal(&[party]).unwrap();
                for row in m.table() {
                    assert_eq!(row, &vec![rat(1, 2), rat(1, 2)]);
                }
            }
        }
    }

    #[test]
    fn chsh_of_pr_is_four() {
        assert_eq!(chsh_value(&standard_pr()).unwrap(), int(4));
    }

    #[test]
    fn chsh_of_uniform_noise_is_zero() {
        let uniform = BoxState::new(
            BoxSignature::binary_pair(),
            vec![vec![rat(1, 4); 4]; 4],
        )
        .unwrap();
        assert_eq!(chsh_value(&uniform).unwrap(), int(0));
    }

    #[test]
    fn chsh_max_over_locals_is_two() {
        let max = LocalExtremalId::all()
            .into_iter()
            .map(|id| chsh_value(&local_extremal(id)).unwrap())
            .max()
            .unwrap();
        assert_eq!(max, int(2));
    }

    #[test]
    fn chsh_rejects_wrong_signature() {
        let one = BoxState::new(
            BoxSignature::new(vec![(2, 2)]).unwrap(),
            vec![vec![rat(1, 2), rat(1, 2)]; 2],
        )
        .unwrap();
        assert!(matches!(chsh_value(&one), Err(Error::BadSignature(_))));
    }

    #[test]
    fn each_pr_maximizes_exactly_one_variant() {
        for id in NonlocalExtremalId::all() {
            let s = nonlocal_extremal(id);
            let values: Vec<Rational> = CHSHVariant::all()
                .into_iter()
                .map(|v| chsh_variant_value(&s, v))
                .collect();
            assert_eq!(values.iter().filter(|v| **v == int(4)).count(), 1);
            assert_eq!(values.iter().filter(|v| **v == int(-4)).count(), 1);
            assert_eq!(values.iter().filter(|v| v.is_zero()).count(), 6);
        }
    }

    #[test]
    fn local_extremals_are_members() {
        for id in LocalExtremalId::all() {
            let s = local_extremal(id);
            let d = local_membership(&s).unwrap().expect("local state in L");
            assert_eq!(d.reconstruct(), s);
        }
    }

    #[test]
    fn pr_is_not_local() {
        assert!(local_membership(&standard_pr()).unwrap().is_none());
    }

    #[test]
    fn noisy_pr_properties() {
        let pb = noisy_pr_state();
        assert_eq!(chsh_value(&pb).unwrap(), int(2));
        let d = local_membership(&pb).unwrap().expect("P^B is local");
        assert_eq!(d.reconstruct(), pb);
    }
}
