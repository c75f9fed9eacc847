//! Representations of reals in `[0,1]` by probability-weighted digit
//! expansions: probability vectors and schedules, digit strings with total
//! tail policies, encode/decode, cylinders, and rationality classification.

use alloc::vec;
use alloc::vec::Vec;

use crate::fx;
use crate::rng;
use crate::{Error, EvalResult, Result};

/// Validation tolerance for weight sums.
pub const SUM_TOL: f64 = 1e-12;

/// Hard cap on decode depth; the remainder bound stays honest if it is hit.
const MAX_DECODE_DEPTH: u32 = 16_384;

/// Stream tag separating seeded-tail digits from other keyed draws.
const SEEDED_STREAM: u64 = 0x0064_6967_6974;

/// One expansion position: a radix `q` and strictly positive weights
/// `p_0..p_{q-1}` summing to 1, with the cumulative sums precomputed.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector {
    q: u32,
    p: Vec<f64>,
    cum: Vec<f64>, // cum[j] = p_0 + ... + p_{j-1}, cum[0] = 0, cum[q] = 1
}

impl ProbabilityVector {
    pub fn new(weights: &[f64]) -> Result<Self> {
        let q = weights.len() as u32;
        if q < 2 {
            return Err(Error::InvalidRadix(q));
        }
        for (j, &w) in weights.iter().enumerate() {
            if !w.is_finite() || w <= 0.0 {
                return Err(Error::NonPositiveWeight(j, w));
            }
        }
        let sum: f64 = weights.iter().sum();
        if fx::abs(sum - 1.0) > SUM_TOL {
            return Err(Error::WeightSumMismatch(sum));
        }
        let mut cum = Vec::with_capacity(weights.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for &w in weights {
            acc += w;
            cum.push(acc);
        }
        // Pin the final cumulative sum so interval arithmetic closes exactly.
        *cum.last_mut().unwrap() = 1.0;
        Ok(ProbabilityVector {
            q,
            p: weights.to_vec(),
            cum,
        })
    }

    /// Uniform weights `1/q`.
    pub fn uniform(q: u32) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidRadix(q));
        }
        ProbabilityVector::new(&vec![1.0 / q as f64; q as usize])
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn weight(&self, digit: u32) -> f64 {
        self.p[digit as usize]
    }

    pub fn weights(&self) -> &[f64] {
        &self.p
    }

    /// Cumulative weight before `digit`; defined for `0..=q` with
    /// `cum_weight(q) = 1`.
    pub fn cum_weight(&self, digit: u32) -> f64 {
        self.cum[digit as usize]
    }

    pub fn max_weight(&self) -> f64 {
        self.p.iter().fold(0.0, |a, &b| fx::max(a, b))
    }

    /// The digit whose sub-interval contains `y`, i.e. the largest `j` with
    /// `cum_weight(j) <= y` (clamped to `q - 1` for `y >= 1`).
    pub fn digit_for(&self, y: f64) -> u32 {
        let mut j = self.q - 1;
        while j > 0 && y < self.cum[j as usize] {
            j -= 1;
        }
        j
    }
}

/// Coefficients `r_0..r_{q-1}` in `(-1, 1)` with their cumulative sums.
///
/// When all entries are positive and sum to 1 the vector doubles as a digit
/// distribution and the generalized Salem function it induces is a CDF.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientVector {
    q: u32,
    r: Vec<f64>,
    cum: Vec<f64>, // cum[j] = r_0 + ... + r_{j-1}, cum[0] = 0
    distributional: bool,
}

impl CoefficientVector {
    pub fn new(coeffs: &[f64]) -> Result<Self> {
        let q = coeffs.len() as u32;
        if q < 2 {
            return Err(Error::InvalidRadix(q));
        }
        for (j, &r) in coeffs.iter().enumerate() {
            if !r.is_finite() || fx::abs(r) >= 1.0 {
                return Err(Error::CoefficientOutOfRange(j, r));
            }
        }
        let mut cum = Vec::with_capacity(coeffs.len() + 1);
        let mut acc = 0.0;
        cum.push(0.0);
        for &r in coeffs {
            acc += r;
            cum.push(acc);
        }
        let sum = acc;
        let distributional =
            coeffs.iter().all(|&r| r > 0.0) && fx::abs(sum - 1.0) <= SUM_TOL;
        if distributional {
            *cum.last_mut().unwrap() = 1.0;
        }
        Ok(CoefficientVector {
            q,
            r: coeffs.to_vec(),
            cum,
            distributional,
        })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn coeff(&self, digit: u32) -> f64 {
        self.r[digit as usize]
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.r
    }

    /// Cumulative coefficient before `digit`; defined for `0..=q`.
    pub fn cum_coeff(&self, digit: u32) -> f64 {
        self.cum[digit as usize]
    }

    pub fn is_distributional(&self) -> bool {
        self.distributional
    }

    pub fn abs_max(&self) -> f64 {
        self.r.iter().fold(0.0, |a, &b| fx::max(a, fx::abs(b)))
    }

    /// Bound on the cumulative coefficients used in remainder estimates;
    /// for a distributional vector the full sum 1 is included.
    pub fn cum_abs_max(&self) -> f64 {
        let m = self
            .cum
            .iter()
            .take(self.q as usize)
            .fold(0.0, |a, &b| fx::max(a, fx::abs(b)));
        if self.distributional {
            fx::max(m, 1.0)
        } else {
            m
        }
    }

    /// The digit whose cumulative sub-interval contains `y`; only meaningful
    /// for distributional vectors.
    pub fn digit_for(&self, y: f64) -> u32 {
        let mut j = self.q - 1;
        while j > 0 && y < self.cum[j as usize] {
            j -= 1;
        }
        j
    }
}

/// The sequence of probability vectors attached to expansion positions.
#[derive(Debug, Clone, PartialEq)]
pub enum ProbabilitySchedule {
    /// The same vector at every position.
    Constant(ProbabilityVector),
    /// `P_k = list[(k - 1) mod L]`.
    Periodic(Vec<ProbabilityVector>),
}

impl ProbabilitySchedule {
    pub fn constant(v: ProbabilityVector) -> Self {
        ProbabilitySchedule::Constant(v)
    }

    pub fn periodic(list: Vec<ProbabilityVector>) -> Result<Self> {
        if list.is_empty() {
            return Err(Error::EmptyPeriod);
        }
        let q = list[0].q();
        for v in &list[1..] {
            if v.q() != q {
                return Err(Error::RadixMismatch {
                    expected: q,
                    found: v.q(),
                });
            }
        }
        Ok(ProbabilitySchedule::Periodic(list))
    }

    pub fn q(&self) -> u32 {
        match self {
            ProbabilitySchedule::Constant(v) => v.q(),
            ProbabilitySchedule::Periodic(list) => list[0].q(),
        }
    }

    /// The vector at 1-based position `k`.
    pub fn vector_at(&self, k: u32) -> &ProbabilityVector {
        debug_assert!(k >= 1);
        match self {
            ProbabilitySchedule::Constant(v) => v,
            ProbabilitySchedule::Periodic(list) => {
                &list[((k - 1) as usize) % list.len()]
            }
        }
    }

    pub fn max_weight(&self) -> f64 {
        match self {
            ProbabilitySchedule::Constant(v) => v.max_weight(),
            ProbabilitySchedule::Periodic(list) => {
                list.iter().fold(0.0, |a, v| fx::max(a, v.max_weight()))
            }
        }
    }
}

/// Tail policy of a digit string past its finite prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tail {
    Zeros,
    MaxDigits,
    Periodic(Vec<u32>),
    Seeded(u64),
}

/// An infinite digit sequence: a finite prefix plus a total tail policy.
///
/// `digit_at` is defined for every position. Tail digits are indexed
/// relative to the end of the prefix, which keeps every tail policy exact
/// under digit deletion (see [`crate::shiftops`]). Structural equality is
/// derived; two structurally different strings may still be digit-equal
/// (compare with [`DigitString::agrees_with`]).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigitString {
    q: u32,
    prefix: Vec<u32>,
    tail: Tail,
    // Number of leading tail digits skipped by deletions inside the tail;
    // only meaningful for Seeded tails.
    seed_skip: u64,
}

impl DigitString {
    pub fn new(q: u32, prefix: Vec<u32>, tail: Tail) -> Result<Self> {
        if q < 2 {
            return Err(Error::InvalidRadix(q));
        }
        for (k, &d) in prefix.iter().enumerate() {
            if d >= q {
                return Err(Error::DigitOutOfRange(k + 1, d));
            }
        }
        if let Tail::Periodic(pat) = &tail {
            if pat.is_empty() {
                return Err(Error::EmptyPeriod);
            }
            for (k, &d) in pat.iter().enumerate() {
                if d >= q {
                    return Err(Error::DigitOutOfRange(prefix.len() + k + 1, d));
                }
            }
        }
        Ok(DigitString {
            q,
            prefix,
            tail,
            seed_skip: 0,
        })
    }

    pub fn zeros(q: u32, prefix: Vec<u32>) -> Result<Self> {
        DigitString::new(q, prefix, Tail::Zeros)
    }

    pub fn max_digits(q: u32, prefix: Vec<u32>) -> Result<Self> {
        DigitString::new(q, prefix, Tail::MaxDigits)
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn prefix(&self) -> &[u32] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// The digit at 1-based position `k`.
    pub fn digit_at(&self, k: u32) -> u32 {
        debug_assert!(k >= 1);
        let len = self.prefix.len() as u64;
        let k = k as u64;
        if k <= len {
            return self.prefix[(k - 1) as usize];
        }
        let i = k - len; // 1-based index into the tail
        match &self.tail {
            Tail::Zeros => 0,
            Tail::MaxDigits => self.q - 1,
            Tail::Periodic(pat) => pat[((i - 1) % pat.len() as u64) as usize],
            Tail::Seeded(seed) => {
                (rng::keyed(*seed, SEEDED_STREAM, self.seed_skip + i)
                    % self.q as u64) as u32
            }
        }
    }

    /// Materialize the first `depth` digits.
    pub fn digits_to(&self, depth: u32) -> Vec<u32> {
        (1..=depth).map(|k| self.digit_at(k)).collect()
    }

    /// Digit-wise equality up to `depth`.
    pub fn agrees_with(&self, other: &DigitString, depth: u32) -> bool {
        self.q == other.q
            && (1..=depth).all(|k| self.digit_at(k) == other.digit_at(k))
    }

    /// The string with the digit at position `m` removed and everything
    /// after it moved up by one; the tail policy is preserved exactly.
    pub(crate) fn remove_position(&self, m: u32) -> DigitString {
        debug_assert!(m >= 1);
        let len = self.prefix.len() as u64;
        if (m as u64) <= len {
            let mut prefix = self.prefix.clone();
            prefix.remove((m - 1) as usize);
            return DigitString {
                q: self.q,
                prefix,
                tail: self.tail.clone(),
                seed_skip: self.seed_skip,
            };
        }
        let i = m as u64 - len; // 1-based tail index of the deleted digit
        match &self.tail {
            // Deleting a constant tail digit leaves the string unchanged.
            Tail::Zeros | Tail::MaxDigits => self.clone(),
            Tail::Periodic(pat) => {
                // Absorb the tail digits before the deleted one into the
                // prefix and restart the pattern at the right phase.
                let mut prefix = self.prefix.clone();
                for t in 1..i {
                    prefix.push(pat[((t - 1) % pat.len() as u64) as usize]);
                }
                let shift = (i % pat.len() as u64) as usize;
                let mut rot = pat.clone();
                rot.rotate_left(shift);
                DigitString {
                    q: self.q,
                    prefix,
                    tail: Tail::Periodic(rot),
                    seed_skip: 0,
                }
            }
            Tail::Seeded(seed) => {
                let mut prefix = self.prefix.clone();
                for t in 1..i {
                    prefix.push(
                        (rng::keyed(*seed, SEEDED_STREAM, self.seed_skip + t)
                            % self.q as u64) as u32,
                    );
                }
                DigitString {
                    q: self.q,
                    prefix,
                    tail: self.tail.clone(),
                    seed_skip: self.seed_skip + i,
                }
            }
        }
    }
}

/// Rationality of a number with respect to the expansion: numbers whose
/// digits are eventually all `0` or all `q-1` have two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum Rationality {
    /// Both twin forms, except at the endpoints of `[0,1]` where only one
    /// exists (`zeros_form` at 0, `max_form` at 1).
    Rational {
        zeros_form: Option<DigitString>,
        max_form: Option<DigitString>,
    },
    Irrational,
}

/// Decide whether the digit string names a rational point of the expansion
/// and, if so, produce both twin representations.
pub fn classify_rationality(d: &DigitString) -> Rationality {
    let q = d.q();
    enum Kind {
        EventuallyZero,
        EventuallyMax,
        Neither,
    }
    let kind = match d.tail() {
        Tail::Zeros => Kind::EventuallyZero,
        Tail::MaxDigits => Kind::EventuallyMax,
        Tail::Periodic(pat) => {
            if pat.iter().all(|&x| x == 0) {
                Kind::EventuallyZero
            } else if pat.iter().all(|&x| x == q - 1) {
                Kind::EventuallyMax
            } else {
                Kind::Neither
            }
        }
        Tail::Seeded(_) => Kind::Neither,
    };
    match kind {
        Kind::Neither => Rationality::Irrational,
        Kind::EventuallyZero => {
            let mut base = d.prefix().to_vec();
            while base.last() == Some(&0) {
                base.pop();
            }
            if base.is_empty() {
                // x = 0: the would-be twin ends in digit -1.
                return Rationality::Rational {
                    zeros_form: Some(DigitString::zeros(q, Vec::new()).unwrap()),
                    max_form: None,
                };
            }
            let mut lowered = base.clone();
            *lowered.last_mut().unwrap() -= 1;
            Rationality::Rational {
                zeros_form: Some(DigitString::zeros(q, base).unwrap()),
                max_form: Some(DigitString::max_digits(q, lowered).unwrap()),
            }
        }
        Kind::EventuallyMax => {
            let mut base = d.prefix().to_vec();
            while base.last() == Some(&(q - 1)) {
                base.pop();
            }
            if base.is_empty() {
                // x = 1: the would-be twin starts with digit q.
                return Rationality::Rational {
                    zeros_form: None,
                    max_form: Some(DigitString::max_digits(q, Vec::new()).unwrap()),
                };
            }
            let mut raised = base.clone();
            *raised.last_mut().unwrap() += 1;
            Rationality::Rational {
                zeros_form: Some(DigitString::zeros(q, raised).unwrap()),
                max_form: Some(DigitString::max_digits(q, base).unwrap()),
            }
        }
    }
}

/// The closed interval of all numbers whose expansion starts with `base`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cylinder {
    q: u32,
    base: Vec<u32>,
}

impl Cylinder {
    pub fn new(q: u32, base: Vec<u32>) -> Result<Self> {
        if base.is_empty() {
            return Err(Error::EmptyInput);
        }
        // Reuse digit validation.
        let probe = DigitString::zeros(q, base)?;
        Ok(Cylinder {
            q,
            base: probe.prefix,
        })
    }

    pub fn rank(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[u32] {
        &self.base
    }

    pub fn lower_string(&self) -> DigitString {
        DigitString::zeros(self.q, self.base.clone()).unwrap()
    }

    pub fn upper_string(&self) -> DigitString {
        DigitString::max_digits(self.q, self.base.clone()).unwrap()
    }

    /// Product of the base digit weights, which is the interval length.
    pub fn length(&self, sched: &ProbabilitySchedule) -> f64 {
        self.base
            .iter()
            .enumerate()
            .map(|(j, &c)| sched.vector_at(j as u32 + 1).weight(c))
            .product()
    }
}

/// Value of the digit string under the schedule:
/// `cum(i_1, 1) + sum_{k>=2} cum(i_k, k) * prod_{j<k} p(i_j, j)`.
///
/// The sum is truncated at the first depth where the remaining mass
/// `prod_{j<=K} p(i_j, j)` drops to `tol`; that product is the returned
/// bound (zero when an all-zeros tail makes the value exact).
pub fn decode(d: &DigitString, sched: &ProbabilitySchedule, tol: f64) -> EvalResult {
    assert_eq!(d.q(), sched.q(), "digit string and schedule radix differ");
    assert!(tol > 0.0);
    let prefix_len = d.prefix().len() as u32;
    let mut value = 0.0;
    let mut prod = 1.0;
    let mut k = 1u32;
    loop {
        if *d.tail() == Tail::Zeros && k > prefix_len {
            // Every remaining term is zero.
            return EvalResult { value, bound: 0.0 };
        }
        let digit = d.digit_at(k);
        let pv = sched.vector_at(k);
        value += pv.cum_weight(digit) * prod;
        prod *= pv.weight(digit);
        if prod <= tol || k >= MAX_DECODE_DEPTH {
            return EvalResult { value, bound: prod };
        }
        k += 1;
    }
}

/// Canonical digits of `x` under the schedule: at each position pick the
/// digit whose sub-interval contains the residual, then rescale.
///
/// Returns the zeros-tail form with `depth` prefix digits, except that
/// `x = 1` yields the all-`q-1` string with a max-digits tail.
pub fn encode(x: f64, sched: &ProbabilitySchedule, depth: u32) -> Result<DigitString> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::OutOfDomain(x));
    }
    let q = sched.q();
    if x == 1.0 {
        return DigitString::max_digits(q, Vec::new());
    }
    let mut digits = Vec::with_capacity(depth as usize);
    let mut y = x;
    for k in 1..=depth {
        let pv = sched.vector_at(k);
        let j = pv.digit_for(y);
        digits.push(j);
        y = (y - pv.cum_weight(j)) / pv.weight(j);
        y = fx::min(fx::max(y, 0.0), 1.0);
    }
    DigitString::zeros(q, digits)
}

/// Endpoints of the cylinder: decode of the base padded with zeros and with
/// max digits respectively.
pub fn cylinder_bounds(c: &Cylinder, sched: &ProbabilitySchedule) -> (f64, f64) {
    let lo = decode(&c.lower_string(), sched, 1e-15);
    let hi = decode(&c.upper_string(), sched, 1e-15);
    (lo.value, hi.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary_skew() -> ProbabilitySchedule {
        ProbabilitySchedule::constant(ProbabilityVector::new(&[0.3, 0.7]).unwrap())
    }

    fn binary_uniform() -> ProbabilitySchedule {
        ProbabilitySchedule::constant(ProbabilityVector::uniform(2).unwrap())
    }

    #[test]
    fn probability_vector_validation() {
        assert!(matches!(
            ProbabilityVector::new(&[1.0]),
            Err(Error::InvalidRadix(1))
        ));
        assert!(matches!(
            ProbabilityVector::new(&[0.0, 1.0]),
            Err(Error::NonPositiveWeight(0, _))
        ));
        assert!(matches!(
            ProbabilityVector::new(&[0.3, 0.6]),
            Err(Error::WeightSumMismatch(_))
        ));
        let pv = ProbabilityVector::new(&[0.3, 0.7]).unwrap();
        assert_eq!(pv.cum_weight(0), 0.0);
        assert_eq!(pv.cum_weight(1), 0.3);
        assert_eq!(pv.cum_weight(2), 1.0);
    }

    #[test]
    fn coefficient_vector_validation() {
        assert!(matches!(
            CoefficientVector::new(&[1.0, 0.3]),
            Err(Error::CoefficientOutOfRange(0, _))
        ));
        let r = CoefficientVector::new(&[-0.3, 0.7]).unwrap();
        assert!(!r.is_distributional());
        assert_eq!(r.cum_coeff(1), -0.3);
        let r = CoefficientVector::new(&[0.3, 0.7]).unwrap();
        assert!(r.is_distributional());
        assert_eq!(r.cum_abs_max(), 1.0);
    }

    #[test]
    fn decode_all_zeros_is_exact_zero() {
        let d = DigitString::zeros(2, vec![0, 0, 0]).unwrap();
        let r = decode(&d, &binary_skew(), 1e-12);
        assert_eq!(r.value, 0.0);
        assert_eq!(r.bound, 0.0);
    }

    #[test]
    fn decode_uniform_reduces_to_binary() {
        let d = DigitString::zeros(2, vec![0, 1]).unwrap();
        let r = decode(&d, &binary_uniform(), 1e-15);
        assert!((r.value - 0.25).abs() <= 1e-15);
    }

    #[test]
    fn decode_skew_partial_sum() {
        // cum(1) + cum(1) * p(1) = 0.3 + 0.3 * 0.7
        let d = DigitString::zeros(2, vec![1, 1]).unwrap();
        let r = decode(&d, &binary_skew(), 1e-15);
        assert!((r.value - 0.51).abs() <= 1e-15);
    }

    #[test]
    fn decode_periodic_schedule() {
        let sched = ProbabilitySchedule::periodic(vec![
            ProbabilityVector::new(&[0.3, 0.7]).unwrap(),
            ProbabilityVector::new(&[0.5, 0.5]).unwrap(),
        ])
        .unwrap();
        let d = DigitString::zeros(2, vec![1, 1]).unwrap();
        let r = decode(&d, &sched, 1e-15);
        assert!((r.value - (0.3 + 0.5 * 0.7)).abs() <= 1e-15);
    }

    #[test]
    fn decode_max_digits_reaches_one() {
        let d = DigitString::max_digits(2, vec![]).unwrap();
        let r = decode(&d, &binary_skew(), 1e-13);
        assert!((r.value - 1.0).abs() <= 2.0 * r.bound + 1e-12);
        assert!(r.bound <= 1e-13);
    }

    #[test]
    fn encode_zero_and_one() {
        let z = encode(0.0, &binary_skew(), 8).unwrap();
        assert_eq!(z.prefix(), &[0, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(*z.tail(), Tail::Zeros);
        let one = encode(1.0, &binary_skew(), 8).unwrap();
        assert_eq!(*one.tail(), Tail::MaxDigits);
        assert_eq!(one.digit_at(5), 1);
        assert!(matches!(
            encode(1.5, &binary_skew(), 8),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn encode_hits_cumulative_boundary() {
        let d = encode(0.3, &binary_skew(), 6).unwrap();
        assert_eq!(d.prefix(), &[1, 0, 0, 0, 0, 0]);
        let d = encode(0.25, &binary_uniform(), 4).unwrap();
        assert_eq!(d.prefix(), &[0, 1, 0, 0]);
    }

    #[test]
    fn round_trip_error_within_bound() {
        let sched = binary_skew();
        for i in 0..200 {
            let x = rng::u01(7, 1, i);
            let d = encode(x, &sched, 64).unwrap();
            let back = decode(&d, &sched, 1e-15);
            let cap: f64 = d
                .prefix()
                .iter()
                .enumerate()
                .map(|(k, &c)| sched.vector_at(k as u32 + 1).weight(c))
                .product();
            assert!(
                (back.value - x).abs() <= cap + 1e-12,
                "x = {x}, back = {}",
                back.value
            );
        }
    }

    #[test]
    fn rationality_twins() {
        let d = DigitString::zeros(2, vec![1]).unwrap();
        match classify_rationality(&d) {
            Rationality::Rational {
                zeros_form: Some(z),
                max_form: Some(m),
            } => {
                assert_eq!(z.prefix(), &[1]);
                assert_eq!(m.prefix(), &[0]);
                assert_eq!(*m.tail(), Tail::MaxDigits);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rationality_endpoints_have_single_forms() {
        let zero = DigitString::zeros(2, vec![0, 0]).unwrap();
        match classify_rationality(&zero) {
            Rationality::Rational {
                zeros_form: Some(_),
                max_form: None,
            } => {}
            other => panic!("unexpected {other:?}"),
        }
        let one = DigitString::max_digits(3, vec![2]).unwrap();
        match classify_rationality(&one) {
            Rationality::Rational {
                zeros_form: None,
                max_form: Some(m),
            } => assert!(m.prefix().is_empty()),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rationality_periodic_and_seeded() {
        let d = DigitString::new(2, vec![1], Tail::Periodic(vec![0, 1])).unwrap();
        assert_eq!(classify_rationality(&d), Rationality::Irrational);
        let d = DigitString::new(2, vec![1], Tail::Periodic(vec![0, 0])).unwrap();
        assert!(matches!(
            classify_rationality(&d),
            Rationality::Rational { .. }
        ));
        let d = DigitString::new(2, vec![], Tail::Seeded(9)).unwrap();
        assert_eq!(classify_rationality(&d), Rationality::Irrational);
    }

    #[test]
    fn twin_forms_decode_equal() {
        let sched = binary_skew();
        let d = DigitString::zeros(2, vec![1, 1, 0, 1]).unwrap();
        if let Rationality::Rational {
            zeros_form: Some(z),
            max_form: Some(m),
        } = classify_rationality(&d)
        {
            let a = decode(&z, &sched, 1e-15);
            let b = decode(&m, &sched, 1e-15);
            assert!((a.value - b.value).abs() <= 1e-12);
        } else {
            panic!("expected twins");
        }
    }

    #[test]
    fn cylinder_bounds_match_decode_oracle() {
        let sched = binary_skew();
        let c = Cylinder::new(2, vec![1]).unwrap();
        let (lo, hi) = cylinder_bounds(&c, &sched);
        assert!((lo - 0.3).abs() <= 1e-12);
        assert!((hi - 1.0).abs() <= 1e-12);
        let c = Cylinder::new(2, vec![0]).unwrap();
        let (lo, hi) = cylinder_bounds(&c, &sched);
        assert!((lo - 0.0).abs() <= 1e-12);
        assert!((hi - 0.3).abs() <= 1e-12);
        assert!((hi - lo - c.length(&sched)).abs() <= 1e-12);
    }

    #[test]
    fn uniform_cylinder_is_dyadic() {
        let sched = binary_uniform();
        let c = Cylinder::new(2, vec![0, 0, 0]).unwrap();
        let (lo, hi) = cylinder_bounds(&c, &sched);
        assert!((lo - 0.0).abs() <= 1e-12);
        assert!((hi - 0.125).abs() <= 1e-12);
    }

    #[test]
    fn seeded_digits_are_deterministic() {
        let a = DigitString::new(3, vec![2], Tail::Seeded(42)).unwrap();
        let b = DigitString::new(3, vec![2], Tail::Seeded(42)).unwrap();
        assert!(a.agrees_with(&b, 200));
        let c = DigitString::new(3, vec![2], Tail::Seeded(43)).unwrap();
        assert!(!a.agrees_with(&c, 200));
        assert!(a.digits_to(50).iter().all(|&d| d < 3));
    }
}
