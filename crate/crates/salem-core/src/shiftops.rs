//! The shift operator (drop the first digit), the generalized shift (drop
//! the digit at position `m`), their compositions, and deletion plans that
//! turn a batch of target positions into a sequence of adjusted single
//! shifts.
//!
//! Digit-side semantics are authoritative: the generalized shift is defined
//! by deleting a digit and splicing the remainder, and the arithmetic form
//! derived from the expansion is checked against that oracle.

use alloc::vec;
use alloc::vec::Vec;

use crate::numrep::{decode, DigitString, ProbabilitySchedule};
use crate::{Error, EvalResult, Result};

/// The digit string with position `m` removed: positions before `m` are
/// unchanged and every later digit moves up by one. The tail policy is
/// preserved.
pub fn shift_digits(d: &DigitString, m: u32) -> DigitString {
    assert!(m >= 1, "positions are 1-based");
    d.remove_position(m)
}

/// `sigma_{n2} . sigma_{n1}` applied to the digit string.
///
/// The digits removed from the original are `{n1, n2}` when `n2 < n1` and
/// `{n1, n2 + 1}` otherwise.
pub fn compose_shifts(d: &DigitString, n1: u32, n2: u32) -> DigitString {
    shift_digits(&shift_digits(d, n1), n2)
}

/// Value of the generalized shift computed from the expansion itself:
///
/// `(s - (1 - p(i_m, m)) * v - cum(i_m, m) * prod_{k<m} p(i_k, k)) / p(i_m, m)`
///
/// where `v` is the value of the first `m - 1` digits zero-extended. The
/// result equals the decode of [`shift_digits`]`(d, m)` under the schedule
/// with position `m` removed.
///
/// Errors with [`Error::InconsistentValue`] when `s` differs from the
/// decoded value of `d` by more than `10 * tol`.
pub fn shift_value(
    s: f64,
    d: &DigitString,
    m: u32,
    sched: &ProbabilitySchedule,
    tol: f64,
) -> Result<EvalResult> {
    assert!(m >= 1, "positions are 1-based");
    assert!(tol > 0.0);
    let dec = decode(d, sched, tol);
    let drift = crate::fx::abs(dec.value - s);
    if drift > 10.0 * tol {
        return Err(Error::InconsistentValue {
            supplied: s,
            decoded: dec.value,
        });
    }
    let mut v = 0.0;
    let mut prod = 1.0;
    for k in 1..m {
        let pv = sched.vector_at(k);
        let digit = d.digit_at(k);
        v += pv.cum_weight(digit) * prod;
        prod *= pv.weight(digit);
    }
    let pv = sched.vector_at(m);
    let digit = d.digit_at(m);
    let p_m = pv.weight(digit);
    let value = (s - (1.0 - p_m) * v - pv.cum_weight(digit) * prod) / p_m;
    // The expression is affine in s with slope 1/p_m, so the uncertainty in
    // s propagates by that factor.
    let bound = (drift + dec.bound) / p_m;
    Ok(EvalResult { value, bound })
}

/// Rebuild the original value from the first `m` digits and the value of
/// the `m`-fold shift:
///
/// `sum_{k<=m} cum(i_k, k) * prod_{j<k} p(i_j, j) + shifted * prod_{t<=m} p(i_t, t)`.
pub fn reconstruct(prefix: &[u32], shifted_value: f64, sched: &ProbabilitySchedule) -> f64 {
    let mut value = 0.0;
    let mut prod = 1.0;
    for (k, &digit) in prefix.iter().enumerate() {
        let pv = sched.vector_at(k as u32 + 1);
        value += pv.cum_weight(digit) * prod;
        prod *= pv.weight(digit);
    }
    value + shifted_value * prod
}

/// Decode a post-deletion digit string under the schedule with the listed
/// original positions removed, i.e. position `k` of the string is weighted
/// by the `k`-th surviving schedule entry.
pub fn decode_deleted(
    d: &DigitString,
    sched: &ProbabilitySchedule,
    deleted: &[u32],
    tol: f64,
) -> EvalResult {
    let mut sorted = deleted.to_vec();
    sorted.sort_unstable();
    let prefix_len = d.prefix().len() as u32;
    let mut value = 0.0;
    let mut prod = 1.0;
    let mut k = 1u32;
    loop {
        if *d.tail() == crate::numrep::Tail::Zeros && k > prefix_len {
            return EvalResult { value, bound: 0.0 };
        }
        let digit = d.digit_at(k);
        let pv = sched.vector_at(surviving_position(k, &sorted));
        value += pv.cum_weight(digit) * prod;
        prod *= pv.weight(digit);
        if prod <= tol || k >= 16_384 {
            return EvalResult { value, bound: prod };
        }
        k += 1;
    }
}

/// The `k`-th positive integer not in the sorted deletion list.
pub(crate) fn surviving_position(k: u32, deleted_sorted: &[u32]) -> u32 {
    let mut pos = k;
    for &d in deleted_sorted {
        if d <= pos {
            pos += 1;
        } else {
            break;
        }
    }
    pos
}

/// A batch of distinct digit positions to delete, in application order,
/// together with the adjusted indices that realize the batch as a
/// composition of single generalized shifts.
///
/// The adjustment subtracts, from each target, the number of earlier
/// targets smaller than it, so that applying the shifts at the adjusted
/// indices (in order) deletes exactly the original target positions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DeletionPlan {
    targets: Vec<u32>,
    adjusted: Vec<u32>,
}

impl DeletionPlan {
    pub fn targets(&self) -> &[u32] {
        &self.targets
    }

    pub fn adjusted(&self) -> &[u32] {
        &self.adjusted
    }

    /// Targets in increasing order, as a deleted-position set.
    pub fn deleted_sorted(&self) -> Vec<u32> {
        let mut s = self.targets.clone();
        s.sort_unstable();
        s
    }

    /// Apply the adjusted shifts in order.
    pub fn apply(&self, d: &DigitString) -> DigitString {
        let mut cur = d.clone();
        for &m in &self.adjusted {
            cur = shift_digits(&cur, m);
        }
        cur
    }

    /// Apply only the first `steps` adjusted shifts.
    pub fn apply_prefix(&self, d: &DigitString, steps: usize) -> DigitString {
        let mut cur = d.clone();
        for &m in &self.adjusted[..steps] {
            cur = shift_digits(&cur, m);
        }
        cur
    }
}

// Order-statistic counter over compressed target values.
struct Fenwick {
    data: Vec<u32>,
}

impl Fenwick {
    fn new(n: usize) -> Self {
        Fenwick {
            data: vec![0; n + 1],
        }
    }

    fn add(&mut self, mut i: usize) {
        while i < self.data.len() {
            self.data[i] += 1;
            i += i & i.wrapping_neg();
        }
    }

    fn prefix(&self, mut i: usize) -> u32 {
        let mut s = 0;
        while i > 0 {
            s += self.data[i];
            i -= i & i.wrapping_neg();
        }
        s
    }
}

/// Compute the adjusted shift indices for deleting the target positions in
/// the given order. Counting uses a Fenwick tree over the compressed
/// targets, so a plan of `k` deletions costs `O(k log k)`.
pub fn plan_deletions(targets: &[u32]) -> Result<DeletionPlan> {
    for &t in targets {
        assert!(t >= 1, "positions are 1-based");
    }
    let mut sorted = targets.to_vec();
    sorted.sort_unstable();
    for w in sorted.windows(2) {
        if w[0] == w[1] {
            return Err(Error::DuplicateTarget(w[0]));
        }
    }
    let rank = |t: u32| sorted.partition_point(|&x| x < t) + 1; // 1-based
    let mut seen = Fenwick::new(targets.len());
    let mut adjusted = Vec::with_capacity(targets.len());
    for &t in targets {
        let r = rank(t);
        let smaller_before = seen.prefix(r - 1);
        adjusted.push(t - smaller_before);
        seen.add(r);
    }
    Ok(DeletionPlan {
        targets: targets.to_vec(),
        adjusted,
    })
}
