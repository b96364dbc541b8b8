//! Box states: exact conditional probability tables over a box signature.
//!
//! Joint inputs and joint outputs are enumerated lexicographically with box 0
//! most significant; this single convention is used everywhere (tables, file
//! formats, flattened vectors).

use num::{One, Signed, Zero};

use crate::error::Error;
use crate::rational::Rational;

/// Per-box input/output cardinalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BoxSignature {
    boxes: Vec<(usize, usize)>,
}

impl BoxSignature {
    pub fn new(boxes: Vec<(usize, usize)>) -> Result<Self, Error> {
        if boxes.is_empty() {
            return Err(Error::BadSignature("signature must be non-empty".into()));
        }
        if boxes.iter().any(|&(i, o)| i == 0 || o == 0) {
            return Err(Error::BadSignature("cardinalities must be >= 1".into()));
        }
        Ok(BoxSignature { boxes })
    }

    /// Two binary-input/binary-output boxes.
    pub fn binary_pair() -> Self {
        BoxSignature {
            boxes: vec![(2, 2), (2, 2)],
        }
    }

    pub fn boxes(&self) -> &[(usize, usize)] {
        &self.boxes
    }

    pub fn num_boxes(&self) -> usize {
        self.boxes.len()
    }

    pub fn input_card(&self, i: usize) -> usize {
        self.boxes[i].0
    }

    pub fn output_card(&self, i: usize) -> usize {
        self.boxes[i].1
    }

    pub fn joint_inputs(&self) -> usize {
        self.boxes.iter().map(|b| b.0).product()
    }

    pub fn joint_outputs(&self) -> usize {
        self.boxes.iter().map(|b| b.1).product()
    }

    pub fn input_index(&self, inputs: &[usize]) -> usize {
        encode(inputs, self.boxes.iter().map(|b| b.0))
    }

    pub fn output_index(&self, outputs: &[usize]) -> usize {
        encode(outputs, self.boxes.iter().map(|b| b.1))
    }

    pub fn input_assignment(&self, index: usize) -> Vec<usize> {
        decode(index, &self.boxes.iter().map(|b| b.0).collect::<Vec<_>>())
    }

    pub fn output_assignment(&self, index: usize) -> Vec<usize> {
        decode(index, &self.boxes.iter().map(|b| b.1).collect::<Vec<_>>())
    }

    fn restrict(&self, keep: &[usize]) -> BoxSignature {
        BoxSignature {
            boxes: keep.iter().map(|&i| self.boxes[i]).collect(),
        }
    }
}

fn encode(values: &[usize], radices: impl Iterator<Item = usize>) -> usize {
    let mut idx = 0;
    let mut n = 0;
    for (v, r) in values.iter().zip(radices) {
        assert!(*v < r, "value {} out of range {}", v, r);
        idx = idx * r + v;
        n += 1;
    }
    assert_eq!(n, values.len());
    idx
}

fn decode(mut index: usize, radices: &[usize]) -> Vec<usize> {
    let mut out = vec![0; radices.len()];
    for (slot, r) in out.iter_mut().zip(radices).rev() {
        *slot = index % r;
        index /= r;
    }
    assert_eq!(index, 0);
    out
}

/// A no-signalling violation witness: the receiver marginal differs between
/// two sender input assignments.
#[derive(Debug, Clone)]
pub struct Violation {
    pub receiver: Vec<usize>,
    pub receiver_inputs: Vec<usize>,
    pub receiver_outputs: Vec<usize>,
    pub sender_inputs_a: Vec<usize>,
    pub sender_inputs_b: Vec<usize>,
    pub value_a: Rational,
    pub value_b: Rational,
}

#[derive(Debug, Clone)]
pub struct NoSignallingReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

/// Conditional probability table P(**O**|**I**) over a box signature.
///
/// `table[input_index][output_index]`, both indices in canonical
/// lexicographic order. Every entry is >= 0 and every row sums to 1 exactly.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoxState {
    signature: BoxSignature,
    table: Vec<Vec<Rational>>,
}

impl BoxState {
    pub fn new(signature: BoxSignature, table: Vec<Vec<Rational>>) -> Result<Self, Error> {
        if table.len() != signature.joint_inputs() {
            return Err(Error::InvalidState(format!(
                "table has {} rows, expected {}",
                table.len(),
                signature.joint_inputs()
            )));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != signature.joint_outputs() {
                return Err(Error::InvalidState(format!(
                    "row {} has {} entries, expected {}",
                    i,
                    row.len(),
                    signature.joint_outputs()
                )));
            }
            if row.iter().any(|p| p.is_negative()) {
                return Err(Error::InvalidState(format!("negative entry in row {}", i)));
            }
            let sum: Rational = row.iter().sum();
            if !sum.is_one() {
                return Err(Error::InvalidState(format!(
                    "row {} sums to {}, expected 1",
                    i, sum
                )));
            }
        }
        Ok(BoxState { signature, table })
    }

    pub fn signature(&self) -> &BoxSignature {
        &self.signature
    }

    pub fn table(&self) -> &[Vec<Rational>] {
        &self.table
    }

    pub fn prob(&self, outputs: &[usize], inputs: &[usize]) -> &Rational {
        &self.table[self.signature.input_index(inputs)][self.signature.output_index(outputs)]
    }

    /// Input-major flattening of the table into a single vector.
    pub fn flatten(&self) -> Vec<Rational> {
        self.table.iter().flatten().cloned().collect()
    }

    pub fn from_flat(signature: BoxSignature, flat: &[Rational]) -> Result<Self, Error> {
        let cols = signature.joint_outputs();
        if flat.len() != signature.joint_inputs() * cols {
            return Err(Error::InvalidState("flat vector length mismatch".into()));
        }
        let table = flat.chunks(cols).map(|c| c.to_vec()).collect();
        BoxState::new(signature, table)
    }

    /// For a receiver subset `keep`, the candidate reduced tables indexed by
    /// the discarded boxes' joint input: `[disc_input][keep_input][keep_output]`.
    fn reduced_tables(&self, keep: &[usize]) -> Vec<Vec<Vec<Rational>>> {
        let n = self.signature.num_boxes();
        let disc: Vec<usize> = (0..n).filter(|i| !keep.contains(i)).collect();
        let keep_sig = self.signature.restrict(keep);
        let disc_in: usize = disc.iter().map(|&i| self.signature.input_card(i)).product();
        let disc_out: usize = disc.iter().map(|&i| self.signature.output_card(i)).product();
        let disc_in_radices: Vec<usize> =
            disc.iter().map(|&i| self.signature.input_card(i)).collect();
        let disc_out_radices: Vec<usize> = disc
            .iter()
            .map(|&i| self.signature.output_card(i))
            .collect();

        let mut tables = Vec::with_capacity(disc_in);
        for di in 0..disc_in {
            let d_inputs = decode(di, &disc_in_radices);
            let mut rows = Vec::with_capacity(keep_sig.joint_inputs());
            for ki in 0..keep_sig.joint_inputs() {
                let k_inputs = keep_sig.input_assignment(ki);
                let mut full_in = vec![0; n];
                for (slot, &b) in keep.iter().enumerate() {
                    full_in[b] = k_inputs[slot];
                }
                for (slot, &b) in disc.iter().enumerate() {
                    full_in[b] = d_inputs[slot];
                }
                let row_idx = self.signature.input_index(&full_in);
                let mut row = vec![Rational::zero(); keep_sig.joint_outputs()];
                for ko in 0..keep_sig.joint_outputs() {
                    let k_outputs = keep_sig.output_assignment(ko);
                    let mut acc = Rational::zero();
                    for do_ in 0..disc_out {
                        let d_outputs = decode(do_, &disc_out_radices);
                        let mut full_out = vec![0; n];
                        for (slot, &b) in keep.iter().enumerate() {
                            full_out[b] = k_outputs[slot];
                        }
                        for (slot, &b) in disc.iter().enumerate() {
                            full_out[b] = d_outputs[slot];
                        }
                        acc += &self.table[row_idx][self.signature.output_index(&full_out)];
                    }
                    row[ko] = acc;
                }
                rows.push(row);
            }
            tables.push(rows);
        }
        tables
    }

    /// Checks the no-signalling condition on every bipartition of the boxes.
    ///
    /// `ok` iff for every receiver subset the marginal over the discarded
    /// (sender) outputs is independent of the sender inputs, exactly.
    pub fn check_no_signalling(&self) -> NoSignallingReport {
        let n = self.signature.num_boxes();
        let mut violations = Vec::new();
        if n > 1 {
            for mask in 1..(1usize << n) - 1 {
                let receiver: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 1).collect();
                let disc: Vec<usize> = (0..n).filter(|i| mask >> i & 1 == 0).collect();
                let keep_sig = self.signature.restrict(&receiver);
                let disc_in_radices: Vec<usize> =
                    disc.iter().map(|&i| self.signature.input_card(i)).collect();
                let tables = self.reduced_tables(&receiver);
                let (reference, rest) = tables.split_first().unwrap();
                for (di, other) in rest.iter().enumerate() {
                    for ki in 0..keep_sig.joint_inputs() {
                        for ko in 0..keep_sig.joint_outputs() {
                            if reference[ki][ko] != other[ki][ko] {
                                violations.push(Violation {
                                    receiver: receiver.clone(),
                                    receiver_inputs: keep_sig.input_assignment(ki),
                                    receiver_outputs: keep_sig.output_assignment(ko),
                                    sender_inputs_a: decode(0, &disc_in_radices),
                                    sender_inputs_b: decode(di + 1, &disc_in_radices),
                                    value_a: reference[ki][ko].clone(),
                                    value_b: other[ki][ko].clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        NoSignallingReport {
            ok: violations.is_empty(),
            violations,
        }
    }

    /// The reduced state on `keep`. Errors with [`Error::SignallingState`]
    /// when the marginal depends on the discarded boxes' inputs.
    pub fn marginal(&self, keep: &[usize]) -> Result<BoxState, Error> {
        let n = self.signature.num_boxes();
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() || keep.iter().any(|&i| i >= n) {
            return Err(Error::BadSignature(format!(
                "marginal boxes {:?} invalid for {} boxes",
                keep, n
            )));
        }
        let tables = self.reduced_tables(&keep);
        let (reference, rest) = tables.split_first().unwrap();
        if rest.iter().any(|t| t != reference) {
            return Err(Error::SignallingState { boxes: keep });
        }
        BoxState::new(self.signature.restrict(&keep), reference.clone())
    }

    /// Fixes `input` on one box and conditions on observing `output` there.
    ///
    /// Returns the outcome probability together with the renormalized state
    /// of the remaining boxes. Errors with [`Error::ZeroProbabilityOutcome`]
    /// when the outcome cannot occur.
    pub fn condition(
        &self,
        box_index: usize,
        input: usize,
        output: usize,
    ) -> Result<(Rational, BoxState), Error> {
        let n = self.signature.num_boxes();
        if box_index >= n || n < 2 {
            return Err(Error::BadSignature(format!(
                "cannot condition box {} of {}",
                box_index, n
            )));
        }
        let single = self.marginal(&[box_index])?;
        let p = single.table[input][output].clone();
        if p.is_zero() {
            return Err(Error::ZeroProbabilityOutcome {
                box_index,
                input,
                output,
            });
        }
        let rest: Vec<usize> = (0..n).filter(|&i| i != box_index).collect();
        let rest_sig = self.signature.restrict(&rest);
        let mut table = Vec::with_capacity(rest_sig.joint_inputs());
        for ri in 0..rest_sig.joint_inputs() {
            let r_inputs = rest_sig.input_assignment(ri);
            let mut full_in = vec![0; n];
            full_in[box_index] = input;
            for (slot, &b) in rest.iter().enumerate() {
                full_in[b] = r_inputs[slot];
            }
            let row_idx = self.signature.input_index(&full_in);
            let mut row = Vec::with_capacity(rest_sig.joint_outputs());
            for ro in 0..rest_sig.joint_outputs() {
                let r_outputs = rest_sig.output_assignment(ro);
                let mut full_out = vec![0; n];
                full_out[box_index] = output;
                for (slot, &b) in rest.iter().enumerate() {
                    full_out[b] = r_outputs[slot];
                }
                row.push(&self.table[row_idx][self.signature.output_index(&full_out)] / &p);
            }
            table.push(row);
        }
        Ok((p, BoxState::new(rest_sig, table)?))
    }

    /// Product state on the concatenated signature.
    pub fn tensor(&self, other: &BoxState) -> BoxState {
        let mut boxes = self.signature.boxes.clone();
        boxes.extend_from_slice(&other.signature.boxes);
        let signature = BoxSignature { boxes };
        let mut table = Vec::with_capacity(signature.joint_inputs());
        for row_a in &self.table {
            for row_b in &other.table {
                let mut row = Vec::with_capacity(signature.joint_outputs());
                for pa in row_a {
                    for pb in row_b {
                        row.push(pa * pb);
                    }
                }
                table.push(row);
            }
        }
        BoxState { signature, table }
    }

    /// Convex mixture of states on a common signature.
    pub fn mixture(parts: &[(Rational, BoxState)]) -> Result<BoxState, Error> {
        let (first_w, first) = parts
            .first()
            .ok_or_else(|| Error::InvalidState("empty mixture".into()))?;
        let signature = first.signature.clone();
        let mut total = first_w.clone();
        if first_w.is_negative() {
            return Err(Error::InvalidState("negative mixture weight".into()));
        }
        let mut table: Vec<Vec<Rational>> = first
            .table
            .iter()
            .map(|row| row.iter().map(|p| p * first_w).collect())
            .collect();
        for (w, s) in &parts[1..] {
            if s.signature != signature {
                return Err(Error::BadSignature("mixture signature mismatch".into()));
            }
            if w.is_negative() {
                return Err(Error::InvalidState("negative mixture weight".into()));
            }
            total += w;
            for (trow, srow) in table.iter_mut().zip(&s.table) {
                for (t, p) in trow.iter_mut().zip(srow) {
                    *t += p * w;
                }
            }
        }
        if !total.is_one() {
            return Err(Error::InvalidState(format!(
                "mixture weights sum to {}",
                total
            )));
        }
        BoxState::new(signature, table)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{local_extremal, nonlocal_extremal, LocalExtremalId, NonlocalExtremalId};
    use crate::rational::{int, rat};

    fn pr() -> BoxState {
        nonlocal_extremal(NonlocalExtremalId::new(false, false, false))
    }

    fn one_box(p0: Rational) -> BoxState {
        let p1 = int(1) - &p0;
        BoxState::new(
            BoxSignature::new(vec![(2, 2)]).unwrap(),
            vec![vec![p0.clone(), p1.clone()], vec![p0, p1]],
        )
        .unwrap()
    }

    #[test]
    fn pr_state_is_no_signalling() {
        assert!(pr().check_no_signalling().ok);
    }

    #[test]
    fn output_copying_other_input_signals() {
        // a = y deterministically, b = 0: Alice's marginal depends on Bob's input.
        let sig = BoxSignature::binary_pair();
        let mut table = vec![vec![int(0); 4]; 4];
        for x in 0..2 {
            for y in 0..2 {
                table[x * 2 + y][y * 2] = int(1); // a = y, b = 0
            }
        }
        let state = BoxState::new(sig, table).unwrap();
        let report = state.check_no_signalling();
        assert!(!report.ok);
        assert!(report.violations.iter().any(|v| v.receiver == vec![0]));
        assert!(state.marginal(&[0]).is_err());
    }

    #[test]
    fn product_of_one_box_states_is_no_signalling() {
        let s = one_box(rat(1, 3)).tensor(&one_box(rat(2, 5)));
        assert!(s.check_no_signalling().ok);
    }

    #[test]
    fn pr_marginals_are_uniform() {
        let m = pr().marginal(&[1]).unwrap();
        for row in m.table() {
            assert_eq!(row, &vec![rat(1, 2), rat(1, 2)]);
        }
    }

    #[test]
    fn deterministic_marginal() {
        let s = local_extremal(LocalExtremalId::new(false, false, false, false));
        let m = s.marginal(&[0]).unwrap();
        for row in m.table() {
            assert_eq!(row, &vec![int(1), int(0)]);
        }
    }

    #[test]
    fn mixture_marginal() {
        // 1/2 PR + 1/2 P^L_0000: Alice marginal is P(a=0|x) = 3/4.
        let mix = BoxState::mixture(&[
            (rat(1, 2), pr()),
            (
                rat(1, 2),
                local_extremal(LocalExtremalId::new(false, false, false, false)),
            ),
        ])
        .unwrap();
        let m = mix.marginal(&[0]).unwrap();
        for row in m.table() {
            assert_eq!(row, &vec![rat(3, 4), rat(1, 4)]);
        }
    }

    #[test]
    fn conditioning_pr_tensor_pr_collapses_bob_to_local_extremal() {
        // Boxes: 0 = Alice, 1,2 = Bob, 3 = Charlie.
        let four = pr().tensor(&pr());
        for x in 0..2usize {
            for a in 0..2usize {
                for z in 0..2usize {
                    for c in 0..2usize {
                        let (p1, s1) = four.condition(0, x, a).unwrap();
                        // after removing box 0, Charlie is box 2
                        let (p2, bob) = s1.condition(2, z, c).unwrap();
                        assert_eq!(&p1 * &p2, rat(1, 4));
                        let expected = local_extremal(LocalExtremalId::new(
                            x == 1,
                            a == 1,
                            z == 1,
                            c == 1,
                        ));
                        assert_eq!(bob, expected);
                    }
                }
            }
        }
    }

    #[test]
    fn conditioning_product_leaves_other_factor_unchanged() {
        let a = one_box(rat(1, 3));
        let b = pr();
        let prod = a.tensor(&b);
        let (_, rest) = prod.condition(0, 1, 0).unwrap();
        assert_eq!(rest, b);
    }

    #[test]
    fn conditioning_pr_on_bob_y1_b0_gives_a_equals_x() {
        let (p, collapsed) = pr().condition(1, 1, 0).unwrap();
        assert_eq!(p, rat(1, 2));
        // a = x deterministically
        assert_eq!(collapsed.table()[0], vec![int(1), int(0)]);
        assert_eq!(collapsed.table()[1], vec![int(0), int(1)]);
    }

    #[test]
    fn zero_probability_outcome_is_an_error() {
        let s = local_extremal(LocalExtremalId::new(false, false, false, false));
        match s.condition(0, 0, 1) {
            Err(Error::ZeroProbabilityOutcome { .. }) => {}
            other => panic!("expected ZeroProbabilityOutcome, got {:?}", other),
        }
    }

    #[test]
    fn tensor_marginal_round_trip() {
        let s = pr();
        let t = one_box(rat(2, 7));
        let st = s.tensor(&t);
        assert_eq!(st.marginal(&[0, 1]).unwrap(), s);
        assert_eq!(st.marginal(&[2]).unwrap(), t);
    }

    #[test]
    fn conditioning_disjoint_boxes_commutes() {
        let four = pr().tensor(&pr());
        let (p1, s1) = four.condition(0, 1, 0).unwrap();
        let (p2, s12) = s1.condition(2, 1, 1).unwrap(); // Charlie, shifted to index 2
        let (q1, t1) = four.condition(3, 1, 1).unwrap();
        let (q2, t12) = t1.condition(0, 1, 0).unwrap();
        assert_eq!(&p1 * &p2, &q1 * &q2);
        assert_eq!(s12, t12);
    }

    #[test]
    fn collapse_consistency_law_of_total_probability() {
        let four = pr().tensor(&pr());
        // fix Alice's input, mix collapsed states over her outcomes
        for x in 0..2usize {
            let mut parts = Vec::new();
            for a in 0..2usize {
                let (p, s) = four.condition(0, x, a).unwrap();
                parts.push((p, s));
            }
            let mixed = BoxState::mixture(&parts).unwrap();
            assert_eq!(mixed, four.marginal(&[1, 2, 3]).unwrap());
        }
    }

    #[test]
    fn invalid_tables_rejected() {
        let sig = BoxSignature::binary_pair();
        let bad_sum = vec![vec![rat(1, 2); 4]; 4];
        assert!(BoxState::new(sig.clone(), bad_sum).is_err());
        let mut neg = vec![vec![int(0); 4]; 4];
        neg[0][0] = rat(3, 2);
        neg[0][1] = rat(-1, 2);
        for row in neg.iter_mut().skip(1) {
            row[0] = int(1);
        }
        assert!(BoxState::new(sig, neg).is_err());
    }
}
