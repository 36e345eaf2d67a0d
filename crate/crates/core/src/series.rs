//! Series solutions: exact coefficient sequences, the p-member family,
//! monomial expansions, and pointwise evaluation.
//!
//! Family member i (i = 0..p-1) is
//!
//! ```text
//! u_i = y^b t^i sum_n c_n t^{c n},   t = x y^a,
//! ```
//!
//! with c_0 = 1 and the one-step recurrence
//!
//! ```text
//! c_n * ff(i + n c, p) = c_{n-1} * ff(b + a (i + (n-1) c), q)
//! ```
//!
//! (ff = falling factorial). The pivot ff(i + n c, p) vanishes exactly
//! when (i - m)/c + 1 is a nonpositive integer for some m, i.e. when the
//! member resonates with another leading exponent; that aborts the
//! member with [`Error::ZeroPivot`] and the family with
//! [`Error::FamilyConstruction`].

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hypergeom::{build_pfq, eval_pfq, reduce_params, HypergeomSpec};
use crate::kernels::falling_factorial;
use crate::rational::{rat_usize, to_f64, Rational};
use crate::similarity::{derive_params, pow_rat, EquationSpec, SimilarityParams};

/// One exact monomial coef * x^x_exp * y^y_exp of an expanded solution.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialTerm {
    pub coefficient: Rational,
    pub x_exp: Rational,
    pub y_exp: Rational,
}

/// One member of the solution family, with its coefficients c_0..c_N.
#[derive(Clone, Debug)]
pub struct SeriesSolution {
    pub spec: EquationSpec,
    pub params: SimilarityParams,
    /// Leading exponent index i (t^i prefactor).
    pub index: usize,
    /// c_0..c_N of the series in t^c.
    pub coeffs: Vec<Rational>,
}

/// The full set of series solutions of one equation.
#[derive(Clone, Debug)]
pub struct SolutionFamily {
    pub spec: EquationSpec,
    pub params: SimilarityParams,
    pub members: Vec<SeriesSolution>,
}

/// Exact coefficients c_0..c_{n_max} of member i by the recurrence.
pub fn coeff_sequence(
    spec: &EquationSpec,
    params: &SimilarityParams,
    i: usize,
    n_max: usize,
) -> Result<Vec<Rational>> {
    if i >= spec.p() {
        return Err(Error::InvalidSpec(format!(
            "family index {} out of range for p = {}",
            i,
            spec.p()
        )));
    }
    let i_rat = rat_usize(i, 1);
    let mut coeffs = Vec::with_capacity(n_max + 1);
    coeffs.push(Rational::from_integer(1.into()));
    for n in 1..=n_max {
        let n_rat = rat_usize(n, 1);
        let pivot_arg = &i_rat + &n_rat * &params.c;
        let pivot = falling_factorial(&pivot_arg, spec.p());
        if pivot.is_zero() {
            return Err(Error::ZeroPivot {
                solution_index: i,
                n,
            });
        }
        let prev_arg = &params.b + &params.a * (&i_rat + (&n_rat - rat_usize(1, 1)) * &params.c);
        let rhs = falling_factorial(&prev_arg, spec.q());
        let prev = coeffs.last().expect("c_0 present").clone();
        coeffs.push(prev * rhs / pivot);
    }
    Ok(coeffs)
}

/// c_n of member i from the closed form
/// K^n prod_k (N_k)_n / (n! prod_{m != i} (D_m)_n).
///
/// Errors with [`Error::ZeroPivot`] when a denominator Pochhammer
/// vanishes (resonant member); the first failing step is reported by
/// [`coeff_sequence`].
pub fn coeff_closed_form(
    params: &SimilarityParams,
    p: usize,
    q: usize,
    i: usize,
    n: usize,
) -> Result<Rational> {
    let i_rat = rat_usize(i, 1);
    let ac = &params.a * &params.c;
    let mut numer = pow_rat(&params.scale_k, n as i64);
    for k in 0..q {
        let param = &i_rat / &params.c + (&params.b - rat_usize(k, 1)) / &ac;
        numer *= crate::kernels::pochhammer(&param, n);
    }
    let mut denom = Rational::from_integer(1.into());
    for m in 0..p {
        let param = if m == i {
            Rational::from_integer(1.into())
        } else {
            (&i_rat - rat_usize(m, 1)) / &params.c + Rational::from_integer(1.into())
        };
        denom *= crate::kernels::pochhammer(&param, n);
    }
    if denom.is_zero() {
        return Err(Error::ZeroPivot {
            solution_index: i,
            n,
        });
    }
    Ok(numer / denom)
}

/// Build every member of the family, each truncated after c_{n_terms}.
///
/// Pivot failures are collected across members: the error lists each
/// failing (member index, step n) pair so a caller sees the whole
/// resonance pattern at once.
pub fn solution_family(spec: &EquationSpec, n_terms: usize) -> Result<SolutionFamily> {
    let params = derive_params(spec)?;
    let mut members = Vec::with_capacity(spec.p());
    let mut failures = Vec::new();
    for i in 0..spec.p() {
        match coeff_sequence(spec, &params, i, n_terms) {
            Ok(coeffs) => members.push(SeriesSolution {
                spec: spec.clone(),
                params: params.clone(),
                index: i,
                coeffs,
            }),
            Err(Error::ZeroPivot { solution_index, n }) => failures.push((solution_index, n)),
            Err(other) => return Err(other),
        }
    }
    if !failures.is_empty() {
        return Err(Error::FamilyConstruction(failures));
    }
    Ok(SolutionFamily {
        spec: spec.clone(),
        params,
        members,
    })
}

impl SeriesSolution {
    /// Truncation order N (largest stored coefficient index).
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// The unreduced q F_{p-1} this member sums to.
    pub fn full_pfq(&self) -> Result<HypergeomSpec> {
        build_pfq(&self.params, self.spec.p(), self.spec.q(), self.index)
    }

    /// The reduced q-1 F p-2 after the built-in parameter cancellation.
    pub fn reduced_pfq(&self) -> Result<HypergeomSpec> {
        Ok(reduce_params(&self.full_pfq()?))
    }

    /// Exact monomials of the truncation: term n contributes
    /// c_n x^{i + n c} y^{b + a (i + n c)}. Zero coefficients are skipped.
    pub fn monomial_expansion(&self) -> Vec<MonomialTerm> {
        let i_rat = rat_usize(self.index, 1);
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (n, coefficient) in self.coeffs.iter().enumerate() {
            if coefficient.is_zero() {
                continue;
            }
            let x_exp = &i_rat + rat_usize(n, 1) * &self.params.c;
            let y_exp = &self.params.b + &self.params.a * &x_exp;
            terms.push(MonomialTerm {
                coefficient: coefficient.clone(),
                x_exp,
                y_exp,
            });
        }
        terms
    }

    /// Exact inner sum sum_n c_n z^n of the truncation (Horner).
    pub fn eval_inner_exact(&self, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Full solution value via the reduced hypergeometric series:
    /// y^b t^i F(K t^c) with t = x y^a. Requires x > 0, y > 0.
    pub fn eval(&self, x: f64, y: f64, tol: f64, max_terms: usize) -> Result<f64> {
        if !x.is_finite() || !y.is_finite() || x <= 0.0 || y <= 0.0 {
            return Err(Error::Domain(format!(
                "evaluation needs finite x > 0, y > 0; got x = {}, y = {}",
                x, y
            )));
        }
        let a = to_f64(&self.params.a);
        let b = to_f64(&self.params.b);
        let c = to_f64(&self.params.c);
        let t = x * y.powf(a);
        let z = t.powf(c);
        let reduced = self.reduced_pfq()?;
        let inner = eval_pfq(&reduced, z, tol, max_terms)?;
        Ok(y.powf(b) * t.powi(self.index as i32) * inner.value)
    }

    /// Truncated-ledger value sum_n c_n x^{x_exp} y^{y_exp} in f64. This
    /// is the polynomial-like object the finite-difference check probes,
    /// so a corrupted stored coefficient is visible to it.
    pub fn eval_ledger_f64(&self, x: f64, y: f64) -> f64 {
        let mut acc = 0.0;
        for term in self.monomial_expansion() {
            acc += to_f64(&term.coefficient)
                * x.powf(to_f64(&term.x_exp))
                * y.powf(to_f64(&term.y_exp));
        }
        acc
    }
}

impl SolutionFamily {
    pub fn member(&self, i: usize) -> Option<&SeriesSolution> {
        self.members.iter().find(|m| m.index == i)
    }
}

/// Does the recurrence stay regular for every member up to n_max?
/// Convenience used by samplers to skip resonant weight choices.
pub fn family_is_regular(spec: &EquationSpec, n_max: usize) -> bool {
    match derive_params(spec) {
        Ok(params) => (0..spec.p()).all(|i| coeff_sequence(spec, &params, i, n_max).is_ok()),
        Err(_) => false,
    }
}
