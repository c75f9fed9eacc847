//! The generalized Salem function `G` defined by a probability vector, a
//! coefficient vector, and an index sequence: series and functional-equation
//! evaluators, increments, the closed-form Lebesgue integral with a
//! cylinder-exact quadrature cross-check, and the continuity/monotonicity
//! classifications.

use alloc::vec::Vec;

use crate::fx;
use crate::numrep::{
    classify_rationality, decode, encode, CoefficientVector, DigitString,
    ProbabilitySchedule, ProbabilityVector, Rationality,
};
use crate::permspec::{DeviationClass, IndexSequence};
use crate::shiftops::{plan_deletions, shift_digits};
use crate::{Error, EvalResult, Result};

/// Iteration cap for series evaluation; reached only for coefficient
/// magnitudes close to 1, in which case the returned bound stays honest.
const MAX_SERIES_DEPTH: u32 = 65_536;

/// Tolerance used for internal tail evaluations.
const TAIL_TOL: f64 = 1e-15;

/// Numerical threshold deciding whether two one-sided limits coincide.
const LIMIT_EQ_TOL: f64 = 1e-9;

/// The triple defining one generalized Salem function.
#[derive(Debug, Clone, PartialEq)]
pub struct GenSalemSpec {
    weights: ProbabilityVector,
    coeffs: CoefficientVector,
    perm: IndexSequence,
}

impl GenSalemSpec {
    pub fn new(
        weights: ProbabilityVector,
        coeffs: CoefficientVector,
        perm: IndexSequence,
    ) -> Result<Self> {
        if weights.q() != coeffs.q() {
            return Err(Error::RadixMismatch {
                expected: weights.q(),
                found: coeffs.q(),
            });
        }
        Ok(GenSalemSpec {
            weights,
            coeffs,
            perm,
        })
    }

    pub fn q(&self) -> u32 {
        self.weights.q()
    }

    pub fn weights(&self) -> &ProbabilityVector {
        &self.weights
    }

    pub fn coeffs(&self) -> &CoefficientVector {
        &self.coeffs
    }

    pub fn perm(&self) -> &IndexSequence {
        &self.perm
    }

    /// The constant schedule carrying the argument representation.
    pub fn schedule(&self) -> ProbabilitySchedule {
        ProbabilitySchedule::constant(self.weights.clone())
    }
}

/// The classical Salem function: decode of the digit string under the
/// constant schedule of `weights`.
pub fn salem_value(d: &DigitString, weights: &ProbabilityVector, tol: f64) -> EvalResult {
    decode(
        d,
        &ProbabilitySchedule::constant(weights.clone()),
        tol,
    )
}

/// Sum the coefficient series reading the digits of `d` through the given
/// position map: term `k` contributes `cum_r(digit(pos(k)))` times the
/// running product of `r(digit(pos(t)))` for `t < k`.
///
/// Truncation stops once the remaining geometric mass
/// `|prod| * cum_max / (1 - max|r|)` drops to `tol`; that mass is the bound.
fn series_at_positions(
    d: &DigitString,
    coeffs: &CoefficientVector,
    pos: impl Fn(u32) -> u32,
    tol: f64,
) -> EvalResult {
    debug_assert!(tol > 0.0);
    let cap = coeffs.cum_abs_max();
    let rho = coeffs.abs_max();
    let mut value = 0.0;
    let mut prod = 1.0;
    let mut k = 1u32;
    loop {
        let digit = d.digit_at(pos(k));
        value += coeffs.cum_coeff(digit) * prod;
        prod *= coeffs.coeff(digit);
        let bound = fx::abs(prod) * cap / (1.0 - rho);
        if bound <= tol || k >= MAX_SERIES_DEPTH {
            return EvalResult { value, bound };
        }
        k += 1;
    }
}

/// Position of surviving original position `n` after deleting the sorted
/// set, i.e. `n` minus the number of deleted positions below it.
fn rank_after_deletions(n: u32, deleted_sorted: &[u32]) -> u32 {
    n - deleted_sorted.partition_point(|&d| d < n) as u32
}

/// Series evaluator: `G = cum_r(i_{n_1}) + sum_{k>=2} cum_r(i_{n_k})
/// prod_{t<k} r(i_{n_t})` where `i` are the digits of `d` and `n` is the
/// index sequence.
pub fn eval_series(d: &DigitString, spec: &GenSalemSpec, tol: f64) -> EvalResult {
    assert_eq!(d.q(), spec.q(), "digit string and spec radix differ");
    series_at_positions(d, &spec.coeffs, |k| spec.perm.position(k), tol)
}

/// Functional-equation evaluator: unroll the one-step relation `depth`
/// times on the digit side (reading each coefficient at its adjusted
/// position, then deleting it), and close with a series evaluation of the
/// remaining tail. Agrees with [`eval_series`] within the sum of both
/// bounds.
pub fn eval_functional(d: &DigitString, spec: &GenSalemSpec, depth: u32) -> EvalResult {
    assert!(depth >= 1);
    assert_eq!(d.q(), spec.q(), "digit string and spec radix differ");
    let targets: Vec<u32> = (1..=depth).map(|k| spec.perm.position(k)).collect();
    let plan = plan_deletions(&targets).expect("index sequence positions are distinct");
    let mut cur = d.clone();
    let mut value = 0.0;
    let mut prod = 1.0;
    for &m in plan.adjusted() {
        let digit = cur.digit_at(m);
        value += spec.coeffs.cum_coeff(digit) * prod;
        prod *= spec.coeffs.coeff(digit);
        cur = shift_digits(&cur, m);
    }
    let deleted = plan.deleted_sorted();
    let tail = series_at_positions(
        &cur,
        &spec.coeffs,
        |t| rank_after_deletions(spec.perm.position(depth + t), &deleted),
        TAIL_TOL,
    );
    EvalResult {
        value: value + prod * tail.value,
        bound: fx::abs(prod) * tail.bound,
    }
}

/// Residual of the `k`-th equation of the functional-equation system, with
/// the solution values on the deletion orbit of `d` taken to be the series
/// tails.
///
/// The left side reads every digit through `k - 1` iterated generalized
/// shifts; the right side reads the step coefficient directly from the
/// original string and the remaining tail through `k` shifts, so a defect
/// anywhere in the shift calculus shows up as a nonzero residual.
pub fn equation_residual(d: &DigitString, spec: &GenSalemSpec, k: u32) -> f64 {
    assert!(k >= 1);
    let targets: Vec<u32> = (1..=k).map(|j| spec.perm.position(j)).collect();
    let plan = plan_deletions(&targets).expect("index sequence positions are distinct");

    let before = plan.apply_prefix(d, (k - 1) as usize);
    let mut deleted_before = targets[..(k - 1) as usize].to_vec();
    deleted_before.sort_unstable();
    let lhs = series_at_positions(
        &before,
        &spec.coeffs,
        |t| rank_after_deletions(spec.perm.position(k - 1 + t), &deleted_before),
        1e-12,
    );

    let after = plan.apply(d);
    let deleted_after = plan.deleted_sorted();
    let tail = series_at_positions(
        &after,
        &spec.coeffs,
        |t| rank_after_deletions(spec.perm.position(k + t), &deleted_after),
        1e-12,
    );
    let digit = d.digit_at(spec.perm.position(k));
    let rhs = spec.coeffs.cum_coeff(digit) + spec.coeffs.coeff(digit) * tail.value;

    fx::abs(lhs.value - rhs)
}

/// Increment of `G` over the set of numbers whose digits at the first `t`
/// permuted positions are `base`: the product of the corresponding
/// coefficients.
pub fn increment(spec: &GenSalemSpec, base: &[u32]) -> f64 {
    assert!(!base.is_empty());
    for &c in base {
        assert!(c < spec.q(), "digit outside the radix");
    }
    base.iter().map(|&c| spec.coeffs.coeff(c)).product()
}

/// The extremal digit strings of that constrained set: digits `base[j]` at
/// positions `n_{j+1}`, all other positions filled with `q - 1` (sup) or
/// `0` (inf).
pub fn increment_extremes(spec: &GenSalemSpec, base: &[u32]) -> (DigitString, DigitString) {
    let t = base.len() as u32;
    let top = (1..=t).map(|j| spec.perm.position(j)).max().unwrap();
    let q = spec.q();
    let mut lo = alloc::vec![0u32; top as usize];
    let mut hi = alloc::vec![q - 1; top as usize];
    for (j, &c) in base.iter().enumerate() {
        let n = spec.perm.position(j as u32 + 1) as usize;
        lo[n - 1] = c;
        hi[n - 1] = c;
    }
    (
        DigitString::zeros(q, lo).unwrap(),
        DigitString::max_digits(q, hi).unwrap(),
    )
}

/// Closed form of the Lebesgue integral of `G` over `[0,1]`:
/// `sum_j cum_r(j) p(j) / (1 - sum_j p(j) r(j))`. The index sequence does
/// not enter.
pub fn integral(spec: &GenSalemSpec) -> f64 {
    let q = spec.q();
    let mut a = 0.0;
    let mut b = 0.0;
    for j in 0..q {
        a += spec.coeffs.cum_coeff(j) * spec.weights.weight(j);
        b += spec.weights.weight(j) * spec.coeffs.coeff(j);
    }
    a / (1.0 - b)
}

/// Series value of `G` at the zeros-tail string with the given prefix,
/// without materializing a digit string (positions past the prefix read 0).
fn series_over_prefix(digits: &[u32], spec: &GenSalemSpec, tol: f64) -> f64 {
    let cap = spec.coeffs.cum_abs_max();
    let rho = spec.coeffs.abs_max();
    let mut value = 0.0;
    let mut prod = 1.0;
    let mut k = 1u32;
    loop {
        let pos = spec.perm.position(k) as usize;
        let digit = if pos <= digits.len() { digits[pos - 1] } else { 0 };
        value += spec.coeffs.cum_coeff(digit) * prod;
        prod *= spec.coeffs.coeff(digit);
        if fx::abs(prod) * cap / (1.0 - rho) <= tol || k >= MAX_SERIES_DEPTH {
            return value;
        }
        k += 1;
    }
}

fn subtree_sum(
    spec: &GenSalemSpec,
    digits: &mut Vec<u32>,
    len: f64,
    max_cell_len: f64,
    eval_tol: f64,
    acc: &mut fx::KahanSum,
) {
    if len <= max_cell_len {
        acc.add(len * series_over_prefix(digits, spec, eval_tol));
        return;
    }
    for c in 0..spec.q() {
        digits.push(c);
        subtree_sum(
            spec,
            digits,
            len * spec.weights.weight(c),
            max_cell_len,
            eval_tol,
            acc,
        );
        digits.pop();
    }
}

/// Riemann sum of `G` over the cylinder with the given base prefix: the
/// cylinder is split until each cell is no longer than `max_cell_len`, and
/// each cell contributes its length times the series value at its zeros-tail
/// left endpoint. Cells are visited in digit order, so the result is
/// bitwise-deterministic.
pub fn quadrature_subtree(
    spec: &GenSalemSpec,
    prefix: &[u32],
    max_cell_len: f64,
    eval_tol: f64,
) -> f64 {
    let mut digits = prefix.to_vec();
    let len = prefix.iter().map(|&c| spec.weights.weight(c)).product();
    let mut acc = fx::KahanSum::default();
    subtree_sum(spec, &mut digits, len, max_cell_len, eval_tol, &mut acc);
    acc.value()
}

/// Digit prefixes whose cylinders partition `[0,1]` under the same
/// splitting rule as [`quadrature_subtree`], expanded (whole levels at a
/// time) until at least `min_nodes` nodes exist or every node is already a
/// single cell. Summing `quadrature_subtree` over the frontier in order
/// equals [`integral_quadrature`]; the frontier lets callers fan the
/// subtrees out to workers deterministically.
pub fn quadrature_frontier(
    spec: &GenSalemSpec,
    max_cell_len: f64,
    min_nodes: usize,
) -> Vec<Vec<u32>> {
    let mut frontier: Vec<(Vec<u32>, f64)> = alloc::vec![(Vec::new(), 1.0)];
    loop {
        let splittable = frontier.iter().any(|(_, len)| *len > max_cell_len);
        if !splittable || frontier.len() >= min_nodes {
            return frontier.into_iter().map(|(p, _)| p).collect();
        }
        let mut next = Vec::with_capacity(frontier.len() * spec.q() as usize);
        for (prefix, len) in frontier {
            if len <= max_cell_len {
                next.push((prefix, len));
            } else {
                for c in 0..spec.q() {
                    let mut child = prefix.clone();
                    child.push(c);
                    next.push((child, len * spec.weights.weight(c)));
                }
            }
        }
        frontier = next;
    }
}

/// Quadrature estimate of the integral of `G`: cylinder-exact Riemann sum
/// with cells no longer than `max_cell_len`, evaluated at `eval_tol`.
pub fn integral_quadrature(spec: &GenSalemSpec, max_cell_len: f64, eval_tol: f64) -> f64 {
    assert!(max_cell_len > 0.0 && max_cell_len < 1.0);
    quadrature_subtree(spec, &[], max_cell_len, eval_tol)
}

/// Continuity of `G` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ContinuityVerdict {
    Continuous,
    /// One-sided limits at a two-form rational point: `left` from below
    /// (max-digits twin), `right` from above (zeros twin).
    Jump { left: f64, right: f64 },
}

/// The structural condition under which the two twin evaluations coincide
/// at a rational point whose zeros form has length `m`: the last index
/// feeding positions `1..=m` must feed `m` itself, and every earlier index
/// must feed `1..m`.
pub fn continuity_predicate(perm: &IndexSequence, m: u32) -> bool {
    let k0 = perm.k0(m);
    perm.position(k0) == m && (1..k0).all(|k| perm.position(k) < m)
}

/// Classify continuity of `G` at the point named by the digit string.
///
/// Irrational points are continuity points. At a two-form rational point
/// the two twin representations are evaluated and compared; endpoint
/// rationals (0 and 1) have a single representation and are continuous
/// one-sidedly.
pub fn classify_continuity(d: &DigitString, spec: &GenSalemSpec) -> ContinuityVerdict {
    match classify_rationality(d) {
        Rationality::Irrational => ContinuityVerdict::Continuous,
        Rationality::Rational {
            zeros_form,
            max_form,
        } => match (zeros_form, max_form) {
            (Some(z), Some(x)) => {
                let right = eval_series(&z, spec, 1e-12).value;
                let left = eval_series(&x, spec, 1e-12).value;
                if fx::abs(left - right) <= LIMIT_EQ_TOL {
                    ContinuityVerdict::Continuous
                } else {
                    ContinuityVerdict::Jump { left, right }
                }
            }
            _ => ContinuityVerdict::Continuous,
        },
    }
}

/// Convenience path for raw reals: encode at depth 64, then classify.
pub fn classify_continuity_at(x: f64, spec: &GenSalemSpec) -> Result<ContinuityVerdict> {
    let d = encode(x, &spec.schedule(), 64)?;
    Ok(classify_continuity(&d, spec))
}

/// Cardinality class of the set of discontinuity points of `G`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscontinuityClass {
    Empty,
    Finite,
    Countable,
}

/// The cardinality of the discontinuity set, determined by how far the
/// index sequence deviates from the identity.
///
/// The classes assume coefficients that sum to 1 (twin representations of
/// a rational point then collapse under identity-like sequences); for other
/// coefficient vectors [`classify_continuity`] remains the pointwise
/// arbiter.
pub fn discontinuity_class(spec: &GenSalemSpec) -> DiscontinuityClass {
    match spec.perm.deviation_class() {
        DeviationClass::IdentityEverywhere => DiscontinuityClass::Empty,
        DeviationClass::FiniteDeviation => DiscontinuityClass::Finite,
        DeviationClass::InfiniteDeviation => DiscontinuityClass::Countable,
    }
}

/// Monotonicity classification of `G` over `[0,1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Monotonicity {
    StrictlyIncreasing,
    /// Retained for the nonnegative-coefficients case; a vanishing
    /// coefficient is always reported as the sharper `ConstantAe`.
    NonDecreasing,
    ConstantAe,
    NoMonotonicityIntervals,
    HasSomeMonotonicityInterval,
}

/// Symbolic classification by the signs of the coefficients and the
/// deviation class of the index sequence. Combinations outside the covered
/// parameter region are an error, never a guess.
pub fn classify_monotonicity(spec: &GenSalemSpec) -> Result<Monotonicity> {
    let coeffs = spec.coeffs.coeffs();
    if coeffs.contains(&0.0) {
        return Ok(Monotonicity::ConstantAe);
    }
    let negatives = coeffs.iter().filter(|&&r| r < 0.0).count();
    let deviation = spec.perm.deviation_class();
    if negatives == 0 {
        return Ok(match deviation {
            DeviationClass::IdentityEverywhere => Monotonicity::StrictlyIncreasing,
            DeviationClass::FiniteDeviation => Monotonicity::HasSomeMonotonicityInterval,
            DeviationClass::InfiniteDeviation => Monotonicity::NoMonotonicityIntervals,
        });
    }
    if negatives == 1 {
        // Covered whenever the sequence is the identity at all but
        // finitely many indices.
        return match deviation {
            DeviationClass::IdentityEverywhere | DeviationClass::FiniteDeviation => {
                Ok(Monotonicity::NoMonotonicityIntervals)
            }
            DeviationClass::InfiniteDeviation => Err(Error::UnclassifiedMonotonicity),
        };
    }
    Err(Error::UnclassifiedMonotonicity)
}

/// Ratio of the `G`-increment to the length of the rank-`m` cylinder
/// containing `d`, for `m = 1..=max_rank`; only defined for the identity
/// index sequence. Convergence of the ratios to zero signals singularity,
/// divergence or oscillation signals the absence of a finite derivative.
pub fn derivative_diagnostic(
    d: &DigitString,
    spec: &GenSalemSpec,
    max_rank: u32,
) -> Result<Vec<f64>> {
    assert!(max_rank >= 1);
    if spec.perm.deviation_class() != DeviationClass::IdentityEverywhere {
        return Err(Error::UnsupportedPermutation);
    }
    let mut out = Vec::with_capacity(max_rank as usize);
    let mut ratio = 1.0;
    for m in 1..=max_rank {
        let digit = d.digit_at(m);
        ratio *= spec.coeffs.coeff(digit) / spec.weights.weight(digit);
        out.push(ratio);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng;
    use alloc::vec;

    fn spec_uniform_skew(perm: IndexSequence) -> GenSalemSpec {
        GenSalemSpec::new(
            ProbabilityVector::uniform(2).unwrap(),
            CoefficientVector::new(&[0.3, 0.7]).unwrap(),
            perm,
        )
        .unwrap()
    }

    fn random_string(q: u32, len: u32, trial: u64) -> DigitString {
        let digits: Vec<u32> = (0..len)
            .map(|i| (rng::keyed(11, trial, i as u64) % q as u64) as u32)
            .collect();
        DigitString::zeros(q, digits).unwrap()
    }

    #[test]
    fn salem_value_is_decode() {
        let pv = ProbabilityVector::new(&[0.3, 0.7]).unwrap();
        let d = DigitString::zeros(2, vec![1]).unwrap();
        assert!((salem_value(&d, &pv, 1e-12).value - 0.3).abs() <= 1e-15);
        let d = DigitString::zeros(2, vec![1, 1]).unwrap();
        assert!((salem_value(&d, &pv, 1e-12).value - 0.51).abs() <= 1e-15);
    }

    #[test]
    fn series_single_term() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        let d = DigitString::zeros(2, vec![1]).unwrap();
        let r = eval_series(&d, &spec, 1e-12);
        assert!((r.value - 0.3).abs() <= r.bound + 1e-15);
    }

    #[test]
    fn series_with_swapped_leading_positions() {
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let d = DigitString::zeros(2, vec![1]).unwrap();
        let r = eval_series(&d, &spec, 1e-12);
        assert!((r.value - 0.09).abs() <= 1e-12, "got {}", r.value);
        let d = DigitString::zeros(2, vec![0, 1]).unwrap();
        let r = eval_series(&d, &spec, 1e-12);
        assert!((r.value - 0.3).abs() <= 1e-12, "got {}", r.value);
    }

    #[test]
    fn series_reduces_to_identity_when_coeffs_equal_weights() {
        let spec = GenSalemSpec::new(
            ProbabilityVector::new(&[0.3, 0.7]).unwrap(),
            CoefficientVector::new(&[0.3, 0.7]).unwrap(),
            IndexSequence::identity(),
        )
        .unwrap();
        let sched = spec.schedule();
        for trial in 0..200 {
            let d = random_string(2, 48, trial);
            let s = decode(&d, &sched, 1e-15);
            let g = eval_series(&d, &spec, 1e-12);
            assert!(
                (g.value - s.value).abs() <= 1e-9,
                "trial {trial}: {} vs {}",
                g.value,
                s.value
            );
        }
    }

    #[test]
    fn functional_matches_series_at_depth_forty() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        let d = DigitString::zeros(2, vec![1, 1]).unwrap();
        let a = eval_series(&d, &spec, 1e-13);
        let b = eval_functional(&d, &spec, 40);
        assert!((a.value - b.value).abs() <= 1e-12);
    }

    #[test]
    fn functional_matches_series_across_perms() {
        let perms = [
            IndexSequence::identity(),
            IndexSequence::finite_permutation(vec![2, 1]).unwrap(),
            IndexSequence::block_permutation(vec![2, 1]).unwrap(),
        ];
        for perm in perms {
            let spec = spec_uniform_skew(perm);
            for trial in 0..100 {
                let d = random_string(2, 60, trial);
                let a = eval_series(&d, &spec, 1e-12);
                let b = eval_functional(&d, &spec, 25);
                assert!(
                    (a.value - b.value).abs() <= a.bound + b.bound,
                    "trial {trial}: {} vs {} ({} + {})",
                    a.value,
                    b.value,
                    a.bound,
                    b.bound
                );
            }
        }
    }

    #[test]
    fn functional_swapped_example() {
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let d = DigitString::zeros(2, vec![1]).unwrap();
        let r = eval_functional(&d, &spec, 5);
        assert!((r.value - 0.09).abs() <= 1e-12, "got {}", r.value);
    }

    #[test]
    fn residuals_vanish() {
        let perms = [
            IndexSequence::identity(),
            IndexSequence::finite_permutation(vec![2, 1]).unwrap(),
            IndexSequence::block_permutation(vec![2, 1]).unwrap(),
        ];
        for perm in perms {
            let spec = spec_uniform_skew(perm);
            for trial in 0..50 {
                let d = random_string(2, 60, trial);
                for k in 1..=6 {
                    let res = equation_residual(&d, &spec, k);
                    assert!(res <= 1e-9, "trial {trial}, k = {k}: residual {res}");
                }
            }
        }
    }

    #[test]
    fn residual_zero_string_is_exact() {
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let d = DigitString::zeros(2, vec![]).unwrap();
        for k in 1..=5 {
            assert_eq!(equation_residual(&d, &spec, k), 0.0);
        }
    }

    #[test]
    fn increment_formula_and_oracle() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        assert!((increment(&spec, &[1]) - 0.7).abs() <= 1e-15);
        assert!((increment(&spec, &[1, 1]) - 0.49).abs() <= 1e-15);
        let zero_spec = GenSalemSpec::new(
            ProbabilityVector::uniform(2).unwrap(),
            CoefficientVector::new(&[0.0, 0.7]).unwrap(),
            IndexSequence::identity(),
        )
        .unwrap();
        assert_eq!(increment(&zero_spec, &[1, 0, 1]), 0.0);
        // Against the two extremal series evaluations, also through a
        // non-identity sequence.
        for perm in [
            IndexSequence::identity(),
            IndexSequence::finite_permutation(vec![3, 1, 2]).unwrap(),
        ] {
            let spec = spec_uniform_skew(perm);
            for base in [vec![1], vec![0, 1], vec![1, 1, 0]] {
                let (lo, hi) = increment_extremes(&spec, &base);
                let g_lo = eval_series(&lo, &spec, 1e-13).value;
                let g_hi = eval_series(&hi, &spec, 1e-13).value;
                let inc = increment(&spec, &base);
                assert!(
                    (g_hi - g_lo - inc).abs() <= 1e-9,
                    "base {base:?}: {} vs {inc}",
                    g_hi - g_lo
                );
            }
        }
    }

    #[test]
    fn integral_closed_form_examples() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        assert!((integral(&spec) - 0.3).abs() <= 1e-15);
        let uniform = GenSalemSpec::new(
            ProbabilityVector::uniform(2).unwrap(),
            CoefficientVector::new(&[0.5, 0.5]).unwrap(),
            IndexSequence::identity(),
        )
        .unwrap();
        assert!((integral(&uniform) - 0.5).abs() <= 1e-15);
        let ternary = GenSalemSpec::new(
            ProbabilityVector::uniform(3).unwrap(),
            CoefficientVector::new(&[0.2, 0.3, 0.5]).unwrap(),
            IndexSequence::identity(),
        )
        .unwrap();
        assert!((integral(&ternary) - 0.35).abs() <= 1e-12);
        // The closed form has no dependence on the index sequence.
        let permuted = spec_uniform_skew(IndexSequence::block_permutation(vec![2, 1]).unwrap());
        assert_eq!(integral(&permuted), integral(&spec));
    }

    #[test]
    fn quadrature_tracks_closed_form() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        let quad = integral_quadrature(&spec, 1e-4, 1e-9);
        assert!(
            (quad - 0.3).abs() <= 1e-3,
            "quadrature {quad} vs closed form 0.3"
        );
    }

    #[test]
    fn quadrature_frontier_partitions() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        let frontier = quadrature_frontier(&spec, 1e-3, 16);
        assert!(frontier.len() >= 16);
        let total: f64 = frontier
            .iter()
            .map(|p| quadrature_subtree(&spec, p, 1e-3, 1e-9))
            .sum();
        let whole = integral_quadrature(&spec, 1e-3, 1e-9);
        assert!((total - whole).abs() <= 1e-12);
    }

    #[test]
    fn continuity_identity_rationals_are_continuous() {
        let spec = spec_uniform_skew(IndexSequence::identity());
        for trial in 0..20 {
            let mut digits: Vec<u32> = (0..6)
                .map(|i| (rng::keyed(23, trial, i) % 2) as u32)
                .collect();
            digits.push(1);
            let d = DigitString::zeros(2, digits).unwrap();
            assert_eq!(
                classify_continuity(&d, &spec),
                ContinuityVerdict::Continuous
            );
        }
    }

    #[test]
    fn continuity_jump_at_half_under_swap() {
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let verdict = classify_continuity_at(0.5, &spec).unwrap();
        match verdict {
            ContinuityVerdict::Jump { left, right } => {
                assert!((left - 0.51).abs() <= 1e-9, "left {left}");
                assert!((right - 0.09).abs() <= 1e-9, "right {right}");
            }
            other => panic!("expected jump, got {other:?}"),
        }
    }

    #[test]
    fn continuity_predicate_matches_numerics_under_swap() {
        let perm = IndexSequence::finite_permutation(vec![2, 1]).unwrap();
        // Rank 1 and 2 rationals jump, deeper ones do not.
        assert!(!continuity_predicate(&perm, 1));
        assert!(!continuity_predicate(&perm, 2));
        assert!(continuity_predicate(&perm, 3));
        assert!(continuity_predicate(&perm, 4));
        let spec = spec_uniform_skew(perm);
        let d = DigitString::zeros(2, vec![0, 1]).unwrap(); // rank 2
        assert!(matches!(
            classify_continuity(&d, &spec),
            ContinuityVerdict::Jump { .. }
        ));
        let d = DigitString::zeros(2, vec![0, 1, 1]).unwrap(); // rank 3
        assert_eq!(
            classify_continuity(&d, &spec),
            ContinuityVerdict::Continuous
        );
    }

    #[test]
    fn endpoints_are_continuous() {
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let zero = DigitString::zeros(2, vec![]).unwrap();
        let one = DigitString::max_digits(2, vec![]).unwrap();
        assert_eq!(classify_continuity(&zero, &spec), ContinuityVerdict::Continuous);
        assert_eq!(classify_continuity(&one, &spec), ContinuityVerdict::Continuous);
    }

    #[test]
    fn discontinuity_class_follows_deviation() {
        assert_eq!(
            discontinuity_class(&spec_uniform_skew(IndexSequence::identity())),
            DiscontinuityClass::Empty
        );
        assert_eq!(
            discontinuity_class(&spec_uniform_skew(
                IndexSequence::finite_permutation(vec![2, 1]).unwrap()
            )),
            DiscontinuityClass::Finite
        );
        assert_eq!(
            discontinuity_class(&spec_uniform_skew(
                IndexSequence::block_permutation(vec![2, 1]).unwrap()
            )),
            DiscontinuityClass::Countable
        );
    }

    #[test]
    fn monotonicity_classification() {
        let make = |r: &[f64], perm: IndexSequence| {
            GenSalemSpec::new(
                ProbabilityVector::uniform(2).unwrap(),
                CoefficientVector::new(r).unwrap(),
                perm,
            )
            .unwrap()
        };
        assert_eq!(
            classify_monotonicity(&make(&[0.3, 0.7], IndexSequence::identity())).unwrap(),
            Monotonicity::StrictlyIncreasing
        );
        assert_eq!(
            classify_monotonicity(&make(&[0.0, 0.7], IndexSequence::identity())).unwrap(),
            Monotonicity::ConstantAe
        );
        assert_eq!(
            classify_monotonicity(&make(&[-0.3, 0.7], IndexSequence::identity())).unwrap(),
            Monotonicity::NoMonotonicityIntervals
        );
        assert_eq!(
            classify_monotonicity(&make(
                &[0.3, 0.7],
                IndexSequence::finite_permutation(vec![2, 1]).unwrap()
            ))
            .unwrap(),
            Monotonicity::HasSomeMonotonicityInterval
        );
        assert_eq!(
            classify_monotonicity(&make(
                &[0.3, 0.7],
                IndexSequence::block_permutation(vec![2, 1]).unwrap()
            ))
            .unwrap(),
            Monotonicity::NoMonotonicityIntervals
        );
        assert!(matches!(
            classify_monotonicity(&make(&[-0.3, -0.7], IndexSequence::identity())),
            Err(Error::UnclassifiedMonotonicity)
        ));
        assert!(matches!(
            classify_monotonicity(&make(
                &[-0.3, 0.7],
                IndexSequence::block_permutation(vec![2, 1]).unwrap()
            )),
            Err(Error::UnclassifiedMonotonicity)
        ));
    }

    #[test]
    fn non_monotone_sample_pair_under_swap() {
        // 0.25 maps above 0.5 under the swapped sequence.
        let spec = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        let quarter = DigitString::zeros(2, vec![0, 1]).unwrap();
        let half = DigitString::zeros(2, vec![1]).unwrap();
        let g_quarter = eval_series(&quarter, &spec, 1e-12).value;
        let g_half = eval_series(&half, &spec, 1e-12).value;
        assert!(g_quarter > g_half);
    }

    #[test]
    fn derivative_diagnostic_products() {
        let ident = GenSalemSpec::new(
            ProbabilityVector::new(&[0.3, 0.7]).unwrap(),
            CoefficientVector::new(&[0.3, 0.7]).unwrap(),
            IndexSequence::identity(),
        )
        .unwrap();
        let d = DigitString::zeros(2, vec![1, 0, 1, 0]).unwrap();
        for r in derivative_diagnostic(&d, &ident, 4).unwrap() {
            assert!((r - 1.0).abs() <= 1e-12);
        }
        let spec = spec_uniform_skew(IndexSequence::identity());
        let zeros = DigitString::zeros(2, vec![]).unwrap();
        let got = derivative_diagnostic(&zeros, &spec, 3).unwrap();
        for (m, r) in got.iter().enumerate() {
            assert!((r - 0.6f64.powi(m as i32 + 1)).abs() <= 1e-12);
        }
        let ones = DigitString::max_digits(2, vec![]).unwrap();
        let got = derivative_diagnostic(&ones, &spec, 3).unwrap();
        for (m, r) in got.iter().enumerate() {
            assert!((r - 1.4f64.powi(m as i32 + 1)).abs() <= 1e-12);
        }
        let permuted = spec_uniform_skew(IndexSequence::finite_permutation(vec![2, 1]).unwrap());
        assert!(matches!(
            derivative_diagnostic(&d, &permuted, 3),
            Err(Error::UnsupportedPermutation)
        ));
    }

    #[test]
    fn distributional_values_stay_in_unit_interval() {
        let perms = [
            IndexSequence::identity(),
            IndexSequence::finite_permutation(vec![3, 1, 2]).unwrap(),
            IndexSequence::block_permutation(vec![2, 3, 1]).unwrap(),
        ];
        for perm in perms {
            let spec = spec_uniform_skew(perm);
            for trial in 0..100 {
                let d = random_string(2, 50, trial);
                let g = eval_series(&d, &spec, 1e-12);
                assert!(g.value >= -1e-12 && g.value <= 1.0 + 1e-12);
            }
        }
    }
}
