//! Couplers: linear maps from two-box binary states to an output
//! distribution, the coupler polytope, triviality classification, and the
//! impossibility analysis for the naive swapping coupler.
//!
//! A coupler is a chi table acting by
//! `P'(b) = sum_{b1 b2 y1 y2} chi(b, b1 b2 y1 y2) P(b1 b2 | y1 y2)`.
//! Validity on all 24 extremal two-box states (universality) is enforced at
//! construction; by convexity this extends to every no-signalling state.
//! Because adding a lineality direction of the polytope to chi changes no
//! output distribution, coupler equality is always judged by the canonical
//! action on the 24 extremal states, never by raw chi entries.

use num::{One, Signed, Zero};

use crate::catalog::{all_extremal_states, LocalExtremalId, NonlocalExtremalId};
use crate::error::Error;
use crate::polytope::{enumerate_vertices, lp_feasible, HRep, VRep};
use crate::rational::{int, rat, Rational};
use crate::state::{BoxSignature, BoxState};
use crate::wiring::{enumerate_wiring_couplers, Wiring};

/// Index of (b1, b2, y1, y2) into a 16-entry chi row.
pub fn chi_index(b1: usize, b2: usize, y1: usize, y2: usize) -> usize {
    ((b1 * 2 + b2) * 2 + y1) * 2 + y2
}

/// Coefficient vector of a two-box binary state in chi-row order, so that
/// `P'(b) = dot(chi_row_b, action_row(state))`.
pub fn action_row(state: &BoxState) -> Vec<Rational> {
    let mut row = vec![Rational::zero(); 16];
    for b1 in 0..2 {
        for b2 in 0..2 {
            for y1 in 0..2 {
                for y2 in 0..2 {
                    row[chi_index(b1, b2, y1, y2)] = state.prob(&[b1, b2], &[y1, y2]).clone();
                }
            }
        }
    }
    row
}

fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// A chi table with one 16-entry row per output value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coupler {
    chi: Vec<Vec<Rational>>,
}

impl Coupler {
    /// Builds a coupler from explicit chi rows, enforcing universality: the
    /// action on each of the 24 extremal states must be a probability
    /// distribution.
    pub fn new(chi: Vec<Vec<Rational>>) -> Result<Self, Error> {
        if chi.len() < 2 || chi.iter().any(|row| row.len() != 16) {
            return Err(Error::NotUniversal(
                "chi must have >= 2 rows of 16 entries".into(),
            ));
        }
        let c = Coupler { chi };
        for (i, v) in all_extremal_states().iter().enumerate() {
            let dist = c.apply(v)?;
            let mut sum = Rational::zero();
            for p in &dist {
                if p.is_negative() || *p > Rational::one() {
                    return Err(Error::NotUniversal(format!(
                        "action on extremal state {} leaves [0,1]: {}",
                        i, p
                    )));
                }
                sum += p;
            }
            if !sum.is_one() {
                return Err(Error::NotUniversal(format!(
                    "action on extremal state {} sums to {}",
                    i, sum
                )));
            }
        }
        Ok(c)
    }

    /// Binary coupler from the 16 parameters chi(0, .), with chi(1, .) fixed
    /// to the canonical gauge 1/4 - chi(0, .).
    pub fn binary_from_chi0(chi0: Vec<Rational>) -> Result<Self, Error> {
        if chi0.len() != 16 {
            return Err(Error::NotUniversal("chi0 must have 16 entries".into()));
        }
        let chi1: Vec<Rational> = chi0.iter().map(|c| rat(1, 4) - c).collect();
        Coupler::new(vec![chi0, chi1])
    }

    pub fn output_cardinality(&self) -> usize {
        self.chi.len()
    }

    pub fn chi(&self) -> &[Vec<Rational>] {
        &self.chi
    }

    pub fn chi0(&self) -> &[Rational] {
        &self.chi[0]
    }

    /// The linear action on a two-box binary state: the distribution of b'.
    pub fn apply(&self, state: &BoxState) -> Result<Vec<Rational>, Error> {
        if state.signature() != &BoxSignature::binary_pair() {
            return Err(Error::BadSignature(
                "coupler acts on two binary boxes".into(),
            ));
        }
        let row = action_row(state);
        Ok(self.chi.iter().map(|c| dot(c, &row)).collect())
    }

    /// The action fingerprint on the 24 extremal states (16 locals in id
    /// order, then the 8 PR states). Two chi tables describe the same
    /// coupler iff their canonical actions are equal.
    pub fn canonical_action(&self) -> CanonicalAction {
        let values = all_extremal_states()
            .iter()
            .map(|v| self.apply(v).unwrap())
            .collect();
        CanonicalAction { values }
    }

    /// Applies the coupler to boxes `(i, j)` of a larger state. The pair is
    /// removed and a single input-free box carrying b' is appended:
    /// `P'(rest b' | rest_in) = sum_{b y} chi(b', b y) P(rest b | rest_in y)`.
    pub fn apply_embedded(
        &self,
        state: &BoxState,
        target: (usize, usize),
    ) -> Result<BoxState, Error> {
        let (i, j) = target;
        let n = state.signature().num_boxes();
        if i >= n || j >= n || i == j {
            return Err(Error::BadSignature(format!(
                "bad target boxes ({}, {})",
                i, j
            )));
        }
        if state.signature().boxes()[i] != (2, 2) || state.signature().boxes()[j] != (2, 2) {
            return Err(Error::BadSignature(
                "target boxes must be binary-input/binary-output".into(),
            ));
        }
        let rest: Vec<usize> = (0..n).filter(|&b| b != i && b != j).collect();
        let mut boxes: Vec<(usize, usize)> = rest
            .iter()
            .map(|&b| state.signature().boxes()[b])
            .collect();
        boxes.push((1, self.chi.len()));
        let out_sig = BoxSignature::new(boxes)?;
        let rest_sig_inputs: usize = rest
            .iter()
            .map(|&b| state.signature().input_card(b))
            .product();
        let rest_outputs: usize = rest
            .iter()
            .map(|&b| state.signature().output_card(b))
            .product();

        let mut table = Vec::with_capacity(rest_sig_inputs);
        for ri in 0..rest_sig_inputs {
            // decode rest input assignment against the rest boxes only
            let mut rest_in = vec![0; rest.len()];
            {
                let mut idx = ri;
                let radices: Vec<usize> = rest
                    .iter()
                    .map(|&b| state.signature().input_card(b))
                    .collect();
                for (slot, r) in rest_in.iter_mut().zip(&radices).rev() {
                    *slot = idx % r;
                    idx /= r;
                }
            }
            let mut row = vec![Rational::zero(); rest_outputs * self.chi.len()];
            for ro in 0..rest_outputs {
                let mut rest_out = vec![0; rest.len()];
                {
                    let mut idx = ro;
                    let radices: Vec<usize> = rest
                        .iter()
                        .map(|&b| state.signature().output_card(b))
                        .collect();
                    for (slot, r) in rest_out.iter_mut().zip(&radices).rev() {
                        *slot = idx % r;
                        idx /= r;
                    }
                }
                for (bp, chi_row) in self.chi.iter().enumerate() {
                    let mut acc = Rational::zero();
                    for b1 in 0..2 {
                        for b2 in 0..2 {
                            for y1 in 0..2 {
                                for y2 in 0..2 {
                                    let coeff = &chi_row[chi_index(b1, b2, y1, y2)];
                                    if coeff.is_zero() {
                                        continue;
                                    }
                                    let mut full_in = vec![0; n];
                                    let mut full_out = vec![0; n];
                                    for (slot, &b) in rest.iter().enumerate() {
                                        full_in[b] = rest_in[slot];
                                        full_out[b] = rest_out[slot];
                                    }
                                    full_in[i] = y1;
                                    full_in[j] = y2;
                                    full_out[i] = b1;
                                    full_out[j] = b2;
                                    acc += coeff * state.prob(&full_out, &full_in);
                                }
                            }
                        }
                    }
                    row[ro * self.chi.len() + bp] = acc;
                }
            }
            table.push(row);
        }
        BoxState::new(out_sig, table)
    }

    /// Collapses a k-output coupler to a binary one distinguishing `b0` from
    /// everything else: chi'(0,.) = chi(b0,.), chi'(1,.) = sum of the rest.
    pub fn reduce_output_range(&self, b0: usize) -> Result<Coupler, Error> {
        if b0 >= self.chi.len() {
            return Err(Error::BadSignature(format!("no output {}", b0)));
        }
        let row0 = self.chi[b0].clone();
        let mut row1 = vec![Rational::zero(); 16];
        for (b, row) in self.chi.iter().enumerate() {
            if b != b0 {
                for (acc, v) in row1.iter_mut().zip(row) {
                    *acc += v;
                }
            }
        }
        Coupler::new(vec![row0, row1])
    }
}

/// The 24-state action fingerprint of a coupler; the equality and ordering
/// authority for coupler identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CanonicalAction {
    pub values: Vec<Vec<Rational>>,
}

/// H-representation of the coupler polytope over the 16 variables chi(0, .):
/// `0 <= action <= 1` on each of the 24 extremal states, 48 inequalities.
pub fn build_coupler_polytope() -> HRep {
    let mut h = HRep::new(16);
    for v in all_extremal_states() {
        let row = action_row(&v);
        let neg: Vec<Rational> = row.iter().map(|x| -x.clone()).collect();
        h.push_inequality(neg, int(0)); // action >= 0
        h.push_inequality(row, int(1)); // action <= 1
    }
    h
}

/// The five wiring classes of extremal potential couplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CouplerClass {
    Deterministic,
    OneSided,
    XorGated,
    AndGated,
    Sequential,
}

impl CouplerClass {
    pub fn name(&self) -> &'static str {
        match self {
            CouplerClass::Deterministic => "Deterministic",
            CouplerClass::OneSided => "One-sided",
            CouplerClass::XorGated => "XOR-gated",
            CouplerClass::AndGated => "AND-gated",
            CouplerClass::Sequential => "Sequential",
        }
    }
}

/// One parameterized family member: its class, parameter bits, and the 0/1
/// chi table it denotes.
pub struct FamilyMember {
    pub class: CouplerClass,
    pub params: Vec<bool>,
    pub coupler: Coupler,
}

fn bits(n: usize, k: usize) -> Vec<Vec<bool>> {
    (0..1usize << k)
        .map(|i| (0..k).map(|j| i >> (k - 1 - j) & 1 == 1).collect())
        .take(n)
        .collect()
}

fn chi_from_rule(rule: impl Fn(usize, usize) -> (usize, usize, usize)) -> Coupler {
    // rule(b1, b2) -> (y1, y2, b'): one chi entry per joint output
    let mut rows = vec![vec![int(0); 16]; 2];
    for b1 in 0..2 {
        for b2 in 0..2 {
            let (y1, y2, bp) = rule(b1, b2);
            rows[bp][chi_index(b1, b2, y1, y2)] = int(1);
        }
    }
    Coupler::new(rows).expect("wiring chi tables are universal")
}

/// The 82 parameterized extremal chi tables, by class: 2 deterministic,
/// 8 one-sided, 8 XOR-gated, 32 AND-gated, 32 sequential.
pub fn table_families() -> Vec<FamilyMember> {
    let mut out = Vec::with_capacity(82);
    for p in bits(2, 1) {
        let alpha = p[0] as usize;
        out.push(FamilyMember {
            class: CouplerClass::Deterministic,
            params: p,
            coupler: chi_from_rule(|_, _| (0, 0, alpha)),
        });
    }
    for p in bits(8, 3) {
        let (alpha, beta, gamma) = (p[0] as usize, p[1], p[2] as usize);
        out.push(FamilyMember {
            class: CouplerClass::OneSided,
            params: p.clone(),
            coupler: chi_from_rule(|b1, b2| {
                let watched = if beta { b2 } else { b1 };
                (alpha, alpha, watched ^ gamma)
            }),
        });
    }
    for p in bits(8, 3) {
        let (alpha, beta, gamma) = (p[0] as usize, p[1] as usize, p[2] as usize);
        out.push(FamilyMember {
            class: CouplerClass::XorGated,
            params: p.clone(),
            coupler: chi_from_rule(|b1, b2| (alpha, beta, b1 ^ b2 ^ gamma)),
        });
    }
    for p in bits(32, 5) {
        let (alpha, beta) = (p[0] as usize, p[1] as usize);
        let (gamma, delta, eps) = (p[2] as usize, p[3] as usize, p[4] as usize);
        out.push(FamilyMember {
            class: CouplerClass::AndGated,
            params: p.clone(),
            coupler: chi_from_rule(|b1, b2| (alpha, beta, (b1 ^ gamma) & (b2 ^ delta) ^ eps)),
        });
    }
    for p in bits(32, 5) {
        let first_is_box2 = p[0];
        let (beta, gamma, delta, eps) = (p[1] as usize, p[2] as usize, p[3] as usize, p[4] as usize);
        out.push(FamilyMember {
            class: CouplerClass::Sequential,
            params: p.clone(),
            coupler: chi_from_rule(|b1, b2| {
                // first box gets input beta; the other box's input copies the
                // first output (xor gamma); b' = other output xor delta*first xor eps
                let (first_out, other_out) = if first_is_box2 { (b2, b1) } else { (b1, b2) };
                let first_in = beta;
                let other_in = first_out ^ gamma;
                let bp = other_out ^ (delta & first_out) ^ eps;
                if first_is_box2 {
                    (other_in, first_in, bp)
                } else {
                    (first_in, other_in, bp)
                }
            }),
        });
    }
    out
}

/// Classification of one coupler-polytope vertex.
pub struct VertexClassification {
    pub chi0: Vec<Rational>,
    pub action: CanonicalAction,
    /// Matching parameterized family member, if any.
    pub family: Option<(CouplerClass, Vec<bool>)>,
    /// A 0/1 chi(0, .) representative of this vertex's equivalence class.
    pub zero_one_chi0: Option<Vec<Rational>>,
    /// Whether some deterministic wiring has the same canonical action.
    pub wiring_equivalent: Option<Wiring>,
}

pub struct ClassificationReport {
    pub vrep: VRep,
    pub vertices: Vec<VertexClassification>,
    pub histogram: Vec<(CouplerClass, usize)>,
    pub non_trivial_count: usize,
}

/// Enumerates the coupler polytope and matches every vertex against the
/// deterministic wirings and the parameterized classes. A vertex matched by
/// no wiring would be a non-trivial coupler.
pub fn classify_triviality() -> Result<ClassificationReport, Error> {
    let h = build_coupler_polytope();
    let vrep = enumerate_vertices(&h)?;
    let wirings = enumerate_wiring_couplers();
    let families = table_families();
    let mut family_by_action: Vec<(CanonicalAction, &FamilyMember)> = Vec::new();
    for fam in &families {
        let action = fam.coupler.canonical_action();
        // first class listed wins; Sequential is listed last
        if !family_by_action.iter().any(|(a, _)| *a == action) {
            family_by_action.push((action, fam));
        }
    }

    let mut vertices = Vec::new();
    let mut histogram: Vec<(CouplerClass, usize)> = [
        CouplerClass::Deterministic,
        CouplerClass::OneSided,
        CouplerClass::XorGated,
        CouplerClass::AndGated,
        CouplerClass::Sequential,
    ]
    .into_iter()
    .map(|c| (c, 0))
    .collect();
    let mut non_trivial_count = 0;
    for chi0 in &vrep.vertices {
        let coupler = Coupler::binary_from_chi0(chi0.clone())?;
        let action = coupler.canonical_action();
        let family = family_by_action
            .iter()
            .find(|(a, _)| *a == action)
            .map(|(_, f)| (f.class, f.params.clone()));
        let zero_one_chi0 = family_by_action
            .iter()
            .find(|(a, _)| *a == action)
            .map(|(_, f)| f.coupler.chi0().to_vec());
        let wiring_equivalent = wirings.get(&action).cloned();
        if wiring_equivalent.is_none() {
            non_trivial_count += 1;
        }
        if let Some((class, _)) = &family {
            for (c, n) in histogram.iter_mut() {
                if c == class {
                    *n += 1;
                }
            }
        }
        vertices.push(VertexClassification {
            chi0: chi0.clone(),
            action,
            family,
            zero_one_chi0,
            wiring_equivalent,
        });
    }
    Ok(ClassificationReport {
        vrep,
        vertices,
        histogram,
        non_trivial_count,
    })
}

/// The impossibility analysis for the naive swapping coupler.
#[derive(Debug, Clone)]
pub struct NaiveCouplerReport {
    /// Is there any chi reproducing the required deterministic outputs on
    /// the 16 local extremals while staying valid on the 8 PR states?
    pub local_rule_chi_feasible: bool,
    /// (lower bound on P'(1) at the noisy PR state from the noise
    /// decomposition, value forced by the all-local decomposition).
    pub contradiction: (Rational, Rational),
    /// The unique PR-state action [P'(0), P'(1)] once nonnegativity is
    /// dropped.
    pub affine_solution: Vec<Rational>,
}

/// Output bit the naive coupler must produce on P^L_{a b g d}.
fn naive_rule(id: LocalExtremalId) -> usize {
    ((id.alpha && id.gamma) ^ id.beta ^ id.delta) as usize
}

pub fn analyze_naive_coupler() -> NaiveCouplerReport {
    use crate::catalog::{local_extremal, nonlocal_extremal};

    // LP over chi(0, .): exact outputs on the locals, validity on the PRs.
    let mut h = HRep::new(16);
    for id in LocalExtremalId::all() {
        let row = action_row(&local_extremal(id));
        let target = if naive_rule(id) == 0 { int(1) } else { int(0) };
        h.push_equality(row, target);
    }
    for id in NonlocalExtremalId::all() {
        let row = action_row(&nonlocal_extremal(id));
        let neg: Vec<Rational> = row.iter().map(|x| -x.clone()).collect();
        h.push_inequality(neg, int(0));
        h.push_inequality(row, int(1));
    }
    let local_rule_chi_feasible = lp_feasible(&h).is_some();

    // All-local decomposition P^B = 1/8 sum P^L_{a b g (ag+b)}: every term
    // outputs b' = 0, so P'(1) is forced to 0.
    let mut forced = Rational::zero();
    for alpha in [false, true] {
        for beta in [false, true] {
            for gamma in [false, true] {
                let delta = (alpha && gamma) ^ beta;
                let id = LocalExtremalId::new(alpha, beta, gamma, delta);
                if naive_rule(id) == 1 {
                    forced += rat(1, 8);
                }
            }
        }
    }

    // Noise decomposition P^B = 1/2 P^N_000 + 1/8 sum_{b d} P^L_{0 b 0 d}:
    // the local part alone contributes this much to P'(1), a lower bound for
    // any nonnegative PR-state output distribution.
    let mut lower = Rational::zero();
    for beta in [false, true] {
        for delta in [false, true] {
            let id = LocalExtremalId::new(false, beta, false, delta);
            if naive_rule(id) == 1 {
                lower += rat(1, 8);
            }
        }
    }

    // Dropping nonnegativity: decomposition invariance reads
    // 1/2 p1 + lower = forced together with p0 + p1 = 1.
    let rows = vec![vec![int(0), rat(1, 2)], vec![int(1), int(1)]];
    let rhs = vec![&forced - &lower, int(1)];
    let (affine_solution, kernel) =
        crate::polytope::solve_affine(&rows, &rhs, 2).expect("consistent linear system");
    assert!(kernel.is_empty(), "PR-state action must be unique");

    NaiveCouplerReport {
        local_rule_chi_feasible,
        contradiction: (lower, forced),
        affine_solution,
    }
}
