//! Generalized hypergeometric series: identification, parameter
//! reduction, and evaluation.
//!
//! A family member with leading exponent index `i` has inner function
//!
//! ```text
//! v_i(t) = t^i * sum_n c_n z^n,   z = t^c,
//! c_n = K^n * prod_{k<q} (N_k)_n / (n! * prod_{m<p, m != i} (D_m)_n)
//! ```
//!
//! with numerator parameters N_k = i/c + (b - k)/(a c) and denominator
//! parameters D_m = (i - m)/c + 1. The m = i slot supplies the n! and is
//! never listed. Because q <= p - 1 the series q F_{p-1} is entire in z.
//!
//! The choice of b drops each member's effective order by one: numerator
//! entry q-1 equals the denominator slot m = p-1. For i < p-1 that slot
//! is listed and [`reduce_params`] cancels the pair, leaving a
//! q-1 F p-2. For the top member i = p-1 the slot is the absorbed
//! factorial itself, so the numerator entry is exactly 1 and cancels
//! against the n! instead ((1)_n / n! = 1), recorded by the
//! `factorial_absorbed` flag. Either way exactly one pair cancels and
//! the represented function is unchanged.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::kernels::pochhammer;
use crate::numeric::KahanSum;
use crate::rational::{is_nonpositive_integer, rat_usize, to_f64, Rational};
use crate::similarity::{pow_rat, SimilarityParams};

/// Convergence behavior of a pFq in its argument.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConvergenceClass {
    /// At most as many numerator as denominator parameters: entire.
    Entire,
    /// One more numerator parameter: radius of convergence 1.
    UnitDisk,
    /// Two or more extra numerator parameters: formal/asymptotic only.
    Divergent,
}

/// A concrete pFq: parameter lists plus the scale multiplying the raw
/// argument z.
///
/// The implicit 1/n! of the pFq definition is itself a cancellable
/// denominator-type factor, since (1)_n = n!: reduction may absorb it
/// against a unit numerator parameter, after which the series runs
/// without the factorial. `factorial_absorbed` records that state; the
/// represented function is unchanged either way.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeomSpec {
    /// Numerator (Pochhammer) parameters.
    pub num_params: Vec<Rational>,
    /// Denominator parameters.
    pub den_params: Vec<Rational>,
    /// The series runs in powers of (scale * z).
    pub scale: Rational,
    /// Set once [`reduce_params`] has cancelled equal parameter pairs.
    pub reduced: bool,
    /// True when the 1/n! has been cancelled against a numerator
    /// parameter equal to 1; terms then omit the factorial.
    pub factorial_absorbed: bool,
}

impl HypergeomSpec {
    /// Validate parameter lists: a denominator parameter that is a
    /// nonpositive integer zeroes a term denominator and is rejected,
    /// unless an equal numerator parameter cancels it (the pair drops
    /// out of every term).
    pub fn new(
        num_params: Vec<Rational>,
        den_params: Vec<Rational>,
        scale: Rational,
    ) -> Result<Self> {
        let mut available = num_params.clone();
        for (slot, d) in den_params.iter().enumerate() {
            if is_nonpositive_integer(d) {
                if let Some(pos) = available.iter().position(|a| a == d) {
                    available.remove(pos);
                } else {
                    return Err(Error::PoleInDenominatorParam {
                        solution_index: None,
                        slot,
                        value: d.clone(),
                    });
                }
            }
        }
        Ok(HypergeomSpec {
            num_params,
            den_params,
            scale,
            reduced: false,
            factorial_absorbed: false,
        })
    }

    /// Denominator-type factor count: the reduced denominator list plus
    /// the implicit factorial when it is still present. The term ratio
    /// behaves like n^(num - this) * z, which decides convergence.
    fn down_factor_count(&self) -> usize {
        let (_, den) = reduced_lists(&self.num_params, &self.den_params);
        den.len() + usize::from(!self.factorial_absorbed)
    }

    /// Classify by the *reduced* parameter counts, so equal pairs that
    /// cancel in every term do not distort the verdict.
    pub fn convergence_class(&self) -> ConvergenceClass {
        let (num, _) = reduced_lists(&self.num_params, &self.den_params);
        let down = self.down_factor_count();
        if num.len() < down {
            ConvergenceClass::Entire
        } else if num.len() == down {
            ConvergenceClass::UnitDisk
        } else {
            ConvergenceClass::Divergent
        }
    }

    /// True when some (uncancelled) numerator parameter is a nonpositive
    /// integer, so the series has finitely many nonzero terms.
    pub fn terminates(&self) -> bool {
        let (num, _) = reduced_lists(&self.num_params, &self.den_params);
        num.iter().any(is_nonpositive_integer)
    }

    /// Exact n-th term coefficient: scale^n * prod (N)_n / (n! prod (D)_n)
    /// (without the n! once the factorial is absorbed), computed on the
    /// reduced lists so cancelled pairs never produce 0/0.
    pub fn term_exact(&self, n: usize) -> Rational {
        let (num_r, den_r) = reduced_lists(&self.num_params, &self.den_params);
        let mut numer = pow_rat(&self.scale, n as i64);
        for a in &num_r {
            numer *= pochhammer(a, n);
        }
        let mut denom = if self.factorial_absorbed {
            Rational::one()
        } else {
            pochhammer(&Rational::one(), n)
        };
        for d in &den_r {
            denom *= pochhammer(d, n);
        }
        numer / denom
    }

    /// Exact partial sum of the first `terms` terms at rational argument z.
    pub fn eval_exact(&self, z: &Rational, terms: usize) -> Rational {
        let (num_r, den_r) = reduced_lists(&self.num_params, &self.den_params);
        let mut term = Rational::one();
        let mut sum = Rational::zero();
        for n in 0..terms {
            sum += &term;
            let n_rat = rat_usize(n, 1);
            let mut step = &self.scale * z;
            for a in &num_r {
                step *= a + &n_rat;
            }
            for d in &den_r {
                step /= d + &n_rat;
            }
            if !self.factorial_absorbed {
                step /= &n_rat + Rational::one();
            }
            term *= step;
            if term.is_zero() {
                break;
            }
        }
        sum
    }
}

impl std::fmt::Display for HypergeomSpec {
    /// Canonical pFq notation. An absorbed factorial is displayed by
    /// reinstating the unit numerator parameter it cancelled, since
    /// sum prod(N)_n / prod(D)_n z^n written as a standard pFq is
    /// exactly that list with 1 appended.
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let join = |v: &[Rational]| {
            v.iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        };
        let mut shown_num = self.num_params.clone();
        if self.factorial_absorbed {
            shown_num.push(Rational::one());
        }
        write!(
            f,
            "{}F{}({}; {}; {} z)",
            shown_num.len(),
            self.den_params.len(),
            join(&shown_num),
            join(&self.den_params),
            self.scale
        )
    }
}

/// Multiset difference: drop each numerator parameter together with one
/// equal denominator parameter.
fn reduced_lists(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut den_left: Vec<Rational> = den.to_vec();
    let mut num_left = Vec::with_capacity(num.len());
    for a in num {
        if let Some(pos) = den_left.iter().position(|d| d == a) {
            den_left.remove(pos);
        } else {
            num_left.push(a.clone());
        }
    }
    (num_left, den_left)
}

/// Result of a floating-point series evaluation.
#[derive(Clone, Copy, Debug)]
pub struct EvalResult {
    pub value: f64,
    /// Terms actually summed.
    pub terms_used: usize,
    /// Bound on the absolute value of the discarded tail.
    pub tail_bound: f64,
}

/// Identify the full (unreduced) pFq of family member `i`.
///
/// Denominator slots are m = 0..p-1 with m = i omitted. A denominator
/// parameter that is a nonpositive integer is a genuine pole unless an
/// equal numerator parameter cancels it; an uncancelled pole is reported
/// with the offending slot m and value.
pub fn build_pfq(params: &SimilarityParams, p: usize, q: usize, i: usize) -> Result<HypergeomSpec> {
    if i >= p {
        return Err(Error::InvalidSpec(format!(
            "family index {} out of range for p = {}",
            i, p
        )));
    }
    let i_rat = rat_usize(i, 1);
    let ac = &params.a * &params.c;
    let mut num_params = Vec::with_capacity(q);
    for k in 0..q {
        let k_rat = rat_usize(k, 1);
        num_params.push(&i_rat / &params.c + (&params.b - k_rat) / &ac);
    }
    let mut den_params = Vec::with_capacity(p - 1);
    let mut den_slots = Vec::with_capacity(p - 1);
    for m in 0..p {
        if m == i {
            continue;
        }
        let m_rat = rat_usize(m, 1);
        den_params.push((&i_rat - m_rat) / &params.c + Rational::one());
        den_slots.push(m);
    }
    let mut available: Vec<Rational> = num_params.clone();
    for (slot_pos, d) in den_params.iter().enumerate() {
        if is_nonpositive_integer(d) {
            if let Some(pos) = available.iter().position(|a| a == d) {
                available.remove(pos);
            } else {
                return Err(Error::PoleInDenominatorParam {
                    solution_index: Some(i),
                    slot: den_slots[slot_pos],
                    value: d.clone(),
                });
            }
        }
    }
    Ok(HypergeomSpec {
        num_params,
        den_params,
        scale: params.scale_k.clone(),
        reduced: false,
        factorial_absorbed: false,
    })
}

/// Cancel equal numerator/denominator parameters (multiset difference),
/// treating the implicit 1/n! as one more denominator-type factor with
/// value 1: a surviving unit numerator parameter cancels against it
/// ((1)_n / n! = 1 term by term) and the factorial is marked absorbed.
///
/// For specs produced by [`build_pfq`] with the constraint-derived b,
/// exactly one pair cancels for every member: an explicit list pair for
/// i < p-1, the factorial pair for the top member i = p-1 (whose
/// denominator slot m = i is the factorial itself). The represented
/// function never changes.
pub fn reduce_params(spec: &HypergeomSpec) -> HypergeomSpec {
    let (mut num_params, den_params) = reduced_lists(&spec.num_params, &spec.den_params);
    let mut factorial_absorbed = spec.factorial_absorbed;
    if !factorial_absorbed {
        if let Some(pos) = num_params.iter().position(|a| a.is_one()) {
            num_params.remove(pos);
            factorial_absorbed = true;
        }
    }
    HypergeomSpec {
        num_params,
        den_params,
        scale: spec.scale.clone(),
        reduced: true,
        factorial_absorbed,
    }
}

/// Default relative tolerance for [`eval_pfq`].
pub const DEFAULT_TOL: f64 = 1e-12;
/// Default term cap for [`eval_pfq`].
pub const DEFAULT_MAX_TERMS: usize = 10_000;

/// Evaluate the series at raw argument z (terms run in (scale * z)^n)
/// in f64 with Kahan compensation.
///
/// Terms follow the one-step ratio recurrence
/// t_{n+1} = t_n * (scale z) prod(N + n) / ((n + 1) prod(D + n)).
///
/// Stopping rule: with A = max(0, max N), D = max(0, -min D), and
/// m = n + 1 beyond every parameter magnitude (so all factors are
/// positive), the term-ratio magnitude for every later index m' >= m is
/// at most g(m) = |scale z| (m + A)^len(N) / ((m + 1)(m - D)^len(D)),
/// which is strictly decreasing in m because len(N) <= len(D) for an
/// entire series. Once g(m) < 1/2 the discarded tail is geometric:
/// |tail| <= |t_m| / (1 - g(m)) <= 2 |t_m|. The sum stops when that
/// bound also drops below `tol` relative to the accumulated value.
///
/// Only entire or terminating series are accepted.
pub fn eval_pfq(spec: &HypergeomSpec, z: f64, tol: f64, max_terms: usize) -> Result<EvalResult> {
    if spec.convergence_class() != ConvergenceClass::Entire && !spec.terminates() {
        let (num, den) = reduced_lists(&spec.num_params, &spec.den_params);
        return Err(Error::ParameterCountInvalid {
            num: num.len(),
            den: den.len(),
        });
    }
    if !z.is_finite() {
        return Err(Error::Domain(format!(
            "series argument must be finite, got {}",
            z
        )));
    }
    let (num_r, den_r) = reduced_lists(&spec.num_params, &spec.den_params);
    let scaled = to_f64(&spec.scale) * z;
    let num: Vec<f64> = num_r.iter().map(to_f64).collect();
    let den: Vec<f64> = den_r.iter().map(to_f64).collect();
    let with_factorial = !spec.factorial_absorbed;
    // the decreasing-majorant argument needs strictly fewer numerator
    // than denominator-type factors (the factorial counts as one); a
    // terminating series that fails it simply runs to its last term
    let entire = num.len() < den.len() + usize::from(with_factorial);
    let num_sup = num.iter().cloned().fold(0.0f64, f64::max);
    let num_inf = num.iter().cloned().fold(0.0f64, |acc, a| acc.max(-a));
    let den_inf = den.iter().cloned().fold(0.0f64, |acc, d| acc.max(-d));
    // past this index every parameter factor is positive and the
    // majorant inequalities below are valid
    let guard_from = den_inf.max(num_inf) + 0.5;
    let majorant = |m: f64| -> f64 {
        let factorial = if with_factorial { m + 1.0 } else { 1.0 };
        scaled.abs() * (m + num_sup).powi(num.len() as i32)
            / (factorial * (m - den_inf).powi(den.len() as i32))
    };

    let mut sum = KahanSum::new();
    let mut term = 1.0f64;
    for n in 0..max_terms {
        sum.add(term);
        let mut ratio = if with_factorial {
            scaled / (n as f64 + 1.0)
        } else {
            scaled
        };
        for a in &num {
            ratio *= a + n as f64;
        }
        for d in &den {
            ratio /= d + n as f64;
        }
        let next = term * ratio;
        if next == 0.0 {
            // terminating series or underflow: tail is exactly/essentially 0
            return Ok(EvalResult {
                value: sum.value(),
                terms_used: n + 1,
                tail_bound: 0.0,
            });
        }
        let m = (n + 1) as f64;
        if entire && m > guard_from {
            let g = majorant(m);
            if g < 0.5 {
                let bound = next.abs() / (1.0 - g);
                if bound < tol * sum.value().abs().max(1.0) {
                    return Ok(EvalResult {
                        value: sum.value(),
                        terms_used: n + 1,
                        tail_bound: bound,
                    });
                }
            }
        }
        term = next;
    }
    Err(Error::MaxTermsExceeded {
        partial_value: sum.value(),
        bound_on_tail: 2.0 * term.abs(),
        terms_used: max_terms,
    })
}
