//! Equation descriptions and the similarity substitution u = y^b v(t),
//! t = x * y^a that collapses each two-variable equation to a
//! single-variable series problem.
//!
//! The four supported shapes (u = u(x, y), D_x^p the p-th x-derivative):
//!
//! ```text
//! 1:  x^alpha D_x^p u - y^beta  D_y^q u = 0     (0 <= alpha < p, 0 <= beta < q)
//! 2:  y^beta  D_x^p u - x^alpha D_y^q u = 0     (alpha, beta >= 0)
//! 3:  x^alpha y^beta D_x^p u -  D_y^q u = 0     (0 <= alpha < p, beta >= 0)
//! 4:  D_x^p u - x^alpha y^beta D_y^q u = 0      (alpha >= 0, 0 <= beta < q)
//! ```
//!
//! with p > q >= 1 throughout, and alpha, beta rational. All derived
//! quantities (a, b, c, the gamma ladder, the series scale factor) are
//! exact rationals.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{int, rat_usize, Rational};

/// Which of the four equation shapes is in play.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EquationKind {
    First,
    Second,
    Third,
    Fourth,
}

impl EquationKind {
    /// Map 1..=4 to a kind; anything else is an error.
    pub fn from_index(index: u32) -> Result<Self> {
        match index {
            1 => Ok(EquationKind::First),
            2 => Ok(EquationKind::Second),
            3 => Ok(EquationKind::Third),
            4 => Ok(EquationKind::Fourth),
            other => Err(Error::InvalidSpec(format!(
                "equation kind must be 1..=4, got {}",
                other
            ))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            EquationKind::First => 1,
            EquationKind::Second => 2,
            EquationKind::Third => 3,
            EquationKind::Fourth => 4,
        }
    }
}

impl std::fmt::Display for EquationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "kind {}", self.index())
    }
}

/// A validated instance of one of the four equations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquationSpec {
    kind: EquationKind,
    p: usize,
    q: usize,
    alpha: Rational,
    beta: Rational,
}

impl EquationSpec {
    /// Validate and build. Checks p > q >= 1 plus the per-kind ranges of
    /// alpha and beta listed in the module docs.
    pub fn new(
        kind: EquationKind,
        p: usize,
        q: usize,
        alpha: Rational,
        beta: Rational,
    ) -> Result<Self> {
        if q < 1 {
            return Err(Error::InvalidSpec(format!(
                "derivative orders must satisfy q >= 1, got q = {}",
                q
            )));
        }
        if p <= q {
            return Err(Error::InvalidSpec(format!(
                "derivative orders must satisfy p > q, got p = {}, q = {}",
                p, q
            )));
        }
        let p_rat = rat_usize(p, 1);
        let q_rat = rat_usize(q, 1);
        if alpha.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "alpha >= 0 violated: alpha = {}",
                alpha
            )));
        }
        if beta.is_negative() {
            return Err(Error::InvalidSpec(format!(
                "beta >= 0 violated: beta = {}",
                beta
            )));
        }
        match kind {
            EquationKind::First => {
                if alpha >= p_rat {
                    return Err(Error::InvalidSpec(format!(
                        "alpha < p violated for kind 1: alpha = {}, p = {}",
                        alpha, p
                    )));
                }
                if beta >= q_rat {
                    return Err(Error::InvalidSpec(format!(
                        "beta < q violated for kind 1: beta = {}, q = {}",
                        beta, q
                    )));
                }
            }
            EquationKind::Second => {}
            EquationKind::Third => {
                if alpha >= p_rat {
                    return Err(Error::InvalidSpec(format!(
                        "alpha < p violated for kind 3: alpha = {}, p = {}",
                        alpha, p
                    )));
                }
            }
            EquationKind::Fourth => {
                if beta >= q_rat {
                    return Err(Error::InvalidSpec(format!(
                        "beta < q violated for kind 4: beta = {}, q = {}",
                        beta, q
                    )));
                }
            }
        }
        Ok(EquationSpec { kind, p, q, alpha, beta })
    }

    pub fn kind(&self) -> EquationKind {
        self.kind
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn alpha(&self) -> &Rational {
        &self.alpha
    }

    pub fn beta(&self) -> &Rational {
        &self.beta
    }
}

impl std::fmt::Display for EquationSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} (p = {}, q = {}, alpha = {}, beta = {})",
            self.kind, self.p, self.q, self.alpha, self.beta
        )
    }
}

/// The exact similarity data for one equation instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimilarityParams {
    /// Exponent in t = x * y^a.
    pub a: Rational,
    /// Prefactor exponent in u = y^b v(t).
    pub b: Rational,
    /// Effective order: the series runs in powers of t^c.
    pub c: Rational,
    /// Leading exponents gamma_i = i / c, i = 0 .. p-1, one per family member.
    pub gammas: Vec<Rational>,
    /// Scale factor K = a^q / c^{p-q} multiplying z = t^c in the series.
    pub scale_k: Rational,
    /// Set when a published closed form for b disagrees with the value
    /// forced by the order-reduction constraint (kind 2 with q*alpha !=
    /// p*beta). The constraint value is the one used everywhere.
    pub b_printed_in_paper_differs: bool,
}

/// a and c for a spec, before b is chosen.
fn derive_a_c(spec: &EquationSpec) -> (Rational, Rational) {
    let p = rat_usize(spec.p(), 1);
    let q = rat_usize(spec.q(), 1);
    let alpha = spec.alpha().clone();
    let beta = spec.beta().clone();
    match spec.kind() {
        EquationKind::First => (-((&q - &beta) / (&p - &alpha)), p - alpha),
        EquationKind::Second => (-((&q + &beta) / (&p + &alpha)), p + alpha),
        EquationKind::Third => (-((&q + &beta) / (&p - &alpha)), p - alpha),
        EquationKind::Fourth => (-((&q - &beta) / (&p + &alpha)), p + alpha),
    }
}

/// b forced by the order-reduction constraint: after substitution the
/// y-exponents of the two sides match iff b = q - 1 + a (c + 1 - p).
pub fn derive_b(spec: &EquationSpec) -> Rational {
    let (a, c) = derive_a_c(spec);
    let p = rat_usize(spec.p(), 1);
    let q = rat_usize(spec.q(), 1);
    q - int(1) + a * (c + int(1) - p)
}

/// The published closed form for b for this kind.
///
/// Kinds 1, 3, 4 print forms algebraically identical to [`derive_b`].
/// Kind 2 prints q - 1 - (alpha + 1)(q - beta)/(p - alpha), which matches
/// the constraint value only when q*alpha == p*beta; it is undefined when
/// alpha == p (None).
pub fn reference_b(spec: &EquationSpec) -> Option<Rational> {
    let p = rat_usize(spec.p(), 1);
    let q = rat_usize(spec.q(), 1);
    let alpha = spec.alpha().clone();
    let beta = spec.beta().clone();
    let one = int(1);
    match spec.kind() {
        EquationKind::First => {
            Some(&q - &one + (&alpha - &one) * (&q - &beta) / (&p - &alpha))
        }
        EquationKind::Second => {
            if p == alpha {
                return None;
            }
            Some(&q - &one - (&alpha + &one) * (&q - &beta) / (&p - &alpha))
        }
        EquationKind::Third => {
            Some(&q - &one + (&alpha - &one) * (&q + &beta) / (&p - &alpha))
        }
        EquationKind::Fourth => {
            Some(&q - &one - (&alpha + &one) * (&q - &beta) / (&p + &alpha))
        }
    }
}

/// Does the published b differ from the constraint-derived b? An
/// undefined published form (kind 2, alpha == p) counts as differing.
pub fn reference_b_differs(spec: &EquationSpec) -> bool {
    match reference_b(spec) {
        Some(printed) => printed != derive_b(spec),
        None => true,
    }
}

/// Derive the full similarity data for a validated spec.
///
/// Fails with [`Error::DegenerateEquation`] when c = 0 (the substitution
/// would not produce a power ladder) — unreachable for kinds 2 and 4 and
/// for validated kind 1/3 specs, but kept as a hard guard.
pub fn derive_params(spec: &EquationSpec) -> Result<SimilarityParams> {
    let (a, c) = derive_a_c(spec);
    if c.is_zero() {
        return Err(Error::DegenerateEquation(format!(
            "effective order c vanished for {}",
            spec
        )));
    }
    let b = derive_b(spec);
    let gammas = (0..spec.p())
        .map(|i| rat_usize(i, 1) / &c)
        .collect::<Vec<_>>();
    let scale_k = pow_rat(&a, spec.q() as i64) / pow_rat(&c, (spec.p() - spec.q()) as i64);
    Ok(SimilarityParams {
        a,
        b,
        c,
        gammas,
        scale_k,
        b_printed_in_paper_differs: reference_b_differs(spec),
    })
}

/// r^e for integer e (e >= 0; r must be nonzero when e < 0 is requested).
pub fn pow_rat(r: &Rational, e: i64) -> Rational {
    if e >= 0 {
        let mut acc = Rational::one();
        for _ in 0..e {
            acc *= r;
        }
        acc
    } else {
        let mut acc = Rational::one();
        for _ in 0..(-e) {
            acc /= r;
        }
        acc
    }
}

/// Outcome of the published sufficient conditions for the family to
/// consist of p genuinely independent solutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndependenceReport {
    /// No violation of either condition below.
    pub ok: bool,
    /// Kinds 1 and 3 additionally require alpha not to be a positive
    /// integer (alpha = 0 is fine).
    pub alpha_integral_violation: bool,
    /// Pairs (i, s) with i/c + (b - s)/(a c) == 0: member i's numerator
    /// parameter s vanishes, collapsing its series to a bare monomial.
    pub violating_pairs: Vec<(usize, usize)>,
}

/// Evaluate the published independence conditions for the given b
/// (normally the constraint-derived one, but any candidate can be
/// probed).
pub fn independence_check(spec: &EquationSpec, b: &Rational) -> IndependenceReport {
    let (a, c) = derive_a_c(spec);
    let ac = &a * &c;
    let mut violating_pairs = Vec::new();
    for i in 0..spec.p() {
        for s in 0..spec.q() {
            let value = rat_usize(i, 1) / &c + (b - rat_usize(s, 1)) / &ac;
            if value.is_zero() {
                violating_pairs.push((i, s));
            }
        }
    }
    let alpha_integral_violation = matches!(
        spec.kind(),
        EquationKind::First | EquationKind::Third
    ) && spec.alpha().is_integer()
        && spec.alpha().is_positive();
    let ok = !alpha_integral_violation && violating_pairs.is_empty();
    IndependenceReport {
        ok,
        alpha_integral_violation,
        violating_pairs,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    fn eq1_airy() -> EquationSpec {
        EquationSpec::new(EquationKind::First, 3, 1, int(0), int(0)).unwrap()
    }

    #[test]
    fn validation_rejects_bad_orders() {
        let err = EquationSpec::new(EquationKind::First, 2, 2, int(0), int(0)).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
        let err = EquationSpec::new(EquationKind::First, 3, 0, int(0), int(0)).unwrap_err();
        assert!(matches!(err, Error::InvalidSpec(_)));
    }

    #[test]
    fn validation_rejects_out_of_range_weights() {
        assert!(EquationSpec::new(EquationKind::First, 3, 1, int(3), int(0)).is_err());
        assert!(EquationSpec::new(EquationKind::First, 3, 2, int(0), int(2)).is_err());
        assert!(EquationSpec::new(EquationKind::Third, 3, 1, rat(7, 2), int(5)).is_err());
        assert!(EquationSpec::new(EquationKind::Fourth, 3, 2, int(9), int(2)).is_err());
        assert!(EquationSpec::new(EquationKind::First, 3, 1, int(-1), int(0)).is_err());
        // kind 2 allows large alpha and beta
        assert!(EquationSpec::new(EquationKind::Second, 3, 1, int(9), int(4)).is_ok());
    }

    #[test]
    fn airy_parameters() {
        let params = derive_params(&eq1_airy()).unwrap();
        assert_eq!(params.a, rat(-1, 3));
        assert_eq!(params.b, rat(-1, 3));
        assert_eq!(params.c, int(3));
        assert_eq!(params.gammas, vec![int(0), rat(1, 3), rat(2, 3)]);
        assert_eq!(params.scale_k, rat(-1, 27));
        assert!(!params.b_printed_in_paper_differs);
    }

    #[test]
    fn a_times_c_identity_all_kinds() {
        // a * c collapses to -(q -+ beta) independent of alpha
        let cases = [
            (EquationKind::First, 4, 2, rat(1, 2), rat(1, 3)),
            (EquationKind::Second, 4, 2, rat(3, 2), rat(1, 2)),
            (EquationKind::Third, 4, 2, rat(1, 2), rat(5, 2)),
            (EquationKind::Fourth, 4, 2, rat(5, 2), rat(1, 3)),
        ];
        for (kind, p, q, alpha, beta) in cases {
            let spec = EquationSpec::new(kind, p, q, alpha.clone(), beta.clone()).unwrap();
            let params = derive_params(&spec).unwrap();
            let q_rat = rat_usize(q, 1);
            let expected = match kind {
                EquationKind::First | EquationKind::Fourth => -(q_rat - &beta),
                EquationKind::Second | EquationKind::Third => -(q_rat + &beta),
            };
            assert_eq!(&params.a * &params.c, expected, "{}", spec);
        }
    }

    #[test]
    fn printed_b_matches_constraint_for_kinds_1_3_4() {
        let cases = [
            (EquationKind::First, 5, 3, rat(1, 2), rat(1, 3)),
            (EquationKind::Third, 4, 2, rat(3, 4), rat(5, 2)),
            (EquationKind::Fourth, 4, 3, rat(7, 2), rat(1, 2)),
        ];
        for (kind, p, q, alpha, beta) in cases {
            let spec = EquationSpec::new(kind, p, q, alpha, beta).unwrap();
            assert_eq!(reference_b(&spec).unwrap(), derive_b(&spec), "{}", spec);
            assert!(!reference_b_differs(&spec));
        }
    }

    #[test]
    fn printed_b_flag_for_kind_2() {
        // q*alpha == p*beta keeps the printed form consistent
        let consistent =
            EquationSpec::new(EquationKind::Second, 3, 1, rat(3, 2), rat(1, 2)).unwrap();
        assert_eq!(reference_b(&consistent).unwrap(), rat(-5, 6));
        assert!(!reference_b_differs(&consistent));

        let differs = EquationSpec::new(EquationKind::Second, 3, 1, int(1), int(1)).unwrap();
        assert_eq!(reference_b(&differs).unwrap(), int(0));
        assert_eq!(derive_b(&differs), int(-1));
        assert!(reference_b_differs(&differs));
        assert!(derive_params(&differs).unwrap().b_printed_in_paper_differs);

        // alpha == p leaves the printed form undefined
        let undefined = EquationSpec::new(EquationKind::Second, 3, 1, int(3), int(1)).unwrap();
        assert!(reference_b(&undefined).is_none());
        assert!(reference_b_differs(&undefined));
    }

    #[test]
    fn gammas_are_roots_of_the_pivot_factorial() {
        // ff(c * gamma_i, p) == 0 exactly: gamma_i = i/c makes c*gamma_i = i
        // an integer in 0..p, a root of x(x-1)...(x-p+1).
        let spec = EquationSpec::new(EquationKind::Second, 4, 2, rat(3, 5), rat(1, 2)).unwrap();
        let params = derive_params(&spec).unwrap();
        for gamma in &params.gammas {
            let root = crate::kernels::falling_factorial(&(&params.c * gamma), spec.p());
            assert!(root.is_zero());
        }
    }

    #[test]
    fn order_reduction_constraint_holds() {
        // b - q + 1 == a (c + 1 - p) by construction; check via re-derivation
        let spec = EquationSpec::new(EquationKind::Third, 5, 2, rat(1, 3), rat(7, 4)).unwrap();
        let params = derive_params(&spec).unwrap();
        let lhs = &params.b - rat_usize(spec.q(), 1) + int(1);
        let rhs = &params.a * (&params.c + int(1) - rat_usize(spec.p(), 1));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn independence_clean_for_third_order_model() {
        // p = 3, q = 1, alpha = beta = 0: a = -1/3, c = 3, b = -1/3.
        // Numerator parameters i/c + b/(a c) = i/3 + 1/3 are 1/3, 2/3, 1:
        // none vanish, and alpha = 0 is not a positive integer.
        let spec = EquationSpec::new(EquationKind::First, 3, 1, int(0), int(0)).unwrap();
        let b = derive_b(&spec);
        assert_eq!(b, rat(-1, 3));
        let report = independence_check(&spec, &b);
        assert!(report.ok);
        assert!(!report.alpha_integral_violation);
        assert!(report.violating_pairs.is_empty());
    }

    #[test]
    fn independence_flags_positive_integer_alpha_for_kinds_one_and_three() {
        let spec = EquationSpec::new(EquationKind::First, 3, 1, int(2), int(0)).unwrap();
        let report = independence_check(&spec, &derive_b(&spec));
        assert!(!report.ok);
        assert!(report.alpha_integral_violation);

        let spec = EquationSpec::new(EquationKind::First, 3, 1, int(1), int(0)).unwrap();
        let report = independence_check(&spec, &derive_b(&spec));
        assert!(report.alpha_integral_violation);

        let spec = EquationSpec::new(EquationKind::Third, 4, 2, int(1), rat(1, 2)).unwrap();
        let report = independence_check(&spec, &derive_b(&spec));
        assert!(report.alpha_integral_violation);

        // the restriction applies only to kinds 1 and 3
        let spec = EquationSpec::new(EquationKind::Second, 3, 1, int(2), int(1)).unwrap();
        let report = independence_check(&spec, &derive_b(&spec));
        assert!(!report.alpha_integral_violation);

        let spec = EquationSpec::new(EquationKind::Fourth, 3, 2, int(3), rat(1, 2)).unwrap();
        let report = independence_check(&spec, &derive_b(&spec));
        assert!(!report.alpha_integral_violation);
    }

    #[test]
    fn independence_reports_vanishing_numerator_parameters() {
        // p = 2, q = 1, alpha = beta = 0 with b forced to 0: the member
        // i = 0 parameter 0/c + (0 - 0)/(a c) vanishes exactly.
        let spec = EquationSpec::new(EquationKind::First, 2, 1, int(0), int(0)).unwrap();
        let report = independence_check(&spec, &int(0));
        assert!(!report.ok);
        assert!(!report.alpha_integral_violation);
        assert_eq!(report.violating_pairs, vec![(0, 0)]);

        // a constructed collision at (i, s) = (1, 0): b = s - i a = 1/3
        let spec = EquationSpec::new(EquationKind::First, 3, 1, int(0), int(0)).unwrap();
        let report = independence_check(&spec, &rat(1, 3));
        assert!(!report.ok);
        assert_eq!(report.violating_pairs, vec![(1, 0)]);
    }

    #[test]
    fn kind_index_round_trip() {
        for index in 1..=4 {
            assert_eq!(EquationKind::from_index(index).unwrap().index(), index);
        }
        assert!(EquationKind::from_index(0).is_err());
        assert!(EquationKind::from_index(5).is_err());
    }
}
