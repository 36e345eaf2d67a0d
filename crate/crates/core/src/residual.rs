//! Residual verification: apply the equation to a truncated series
//! exactly, and independently probe it with finite differences.
//!
//! Writing L for the p-th x-derivative side and R for the q-th
//! y-derivative side (the equation is L(u) - R(u) = 0), each monomial
//! coef x^ex y^ey maps term-by-term:
//!
//! ```text
//! kind 1:  L: (coef ff(ex,p), ex-p+alpha, ey)        R: (coef ff(ey,q), ex,       ey-q+beta)
//! kind 2:  L: (coef ff(ex,p), ex-p,       ey+beta)   R: (coef ff(ey,q), ex+alpha, ey-q)
//! kind 3:  L: (coef ff(ex,p), ex-p+alpha, ey+beta)   R: (coef ff(ey,q), ex,       ey-q)
//! kind 4:  L: (coef ff(ex,p), ex-p,       ey)        R: (coef ff(ey,q), ex+alpha, ey-q+beta)
//! ```
//!
//! For a family member the images telescope: L applied to term n lands on
//! the same (x, y) exponent slot as R applied to term n - 1, with equal
//! coefficients by the defining recurrence, and L kills term 0 outright
//! (ff(i, p) = 0 for i < p). The entire residual of an N-term truncation
//! is therefore the single trailing monomial -R(term N), and
//! [`residual_series`] checks that cancellation literally, in exact
//! arithmetic.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::kernels::falling_factorial;
use crate::rational::{rat_usize, to_f64, Rational};
use crate::series::{MonomialTerm, SeriesSolution};
use crate::similarity::EquationKind;

/// Exponent shifts of the two operator sides for one equation kind:
/// L sends (ex, ey) to (ex + dx, ey + dy) with the listed offsets.
fn operator_shifts(
    kind: EquationKind,
    p: usize,
    q: usize,
    alpha: &Rational,
    beta: &Rational,
) -> ((Rational, Rational), (Rational, Rational)) {
    let p_rat = rat_usize(p, 1);
    let q_rat = rat_usize(q, 1);
    let zero = Rational::zero;
    match kind {
        EquationKind::First => ((alpha - &p_rat, zero()), (zero(), beta - &q_rat)),
        EquationKind::Second => ((-&p_rat, beta.clone()), (alpha.clone(), -&q_rat)),
        EquationKind::Third => ((alpha - &p_rat, beta.clone()), (zero(), -&q_rat)),
        EquationKind::Fourth => ((-&p_rat, zero()), (alpha.clone(), beta - &q_rat)),
    }
}

/// Images of a set of monomials under the two sides of the equation.
/// Zero-coefficient images are dropped.
pub fn apply_operator(
    kind: EquationKind,
    p: usize,
    q: usize,
    alpha: &Rational,
    beta: &Rational,
    terms: &[MonomialTerm],
) -> (Vec<MonomialTerm>, Vec<MonomialTerm>) {
    let ((lx, ly), (rx, ry)) = operator_shifts(kind, p, q, alpha, beta);
    let mut left = Vec::new();
    let mut right = Vec::new();
    for term in terms {
        let lc = &term.coefficient * falling_factorial(&term.x_exp, p);
        if !lc.is_zero() {
            left.push(MonomialTerm {
                coefficient: lc,
                x_exp: &term.x_exp + &lx,
                y_exp: &term.y_exp + &ly,
            });
        }
        let rc = &term.coefficient * falling_factorial(&term.y_exp, q);
        if !rc.is_zero() {
            right.push(MonomialTerm {
                coefficient: rc,
                x_exp: &term.x_exp + &rx,
                y_exp: &term.y_exp + &ry,
            });
        }
    }
    (left, right)
}

/// Outcome of the exact residual computation for one truncated member.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    /// True when every residual coefficient except the single trailing
    /// monomial is exactly 0 and the trailing one matches its closed
    /// form (for a terminated series the residual must be exactly empty).
    pub interior_ok: bool,
    /// The single monomial -R(term N) the truncation should leave behind;
    /// None when the series has terminated and the truncation is an
    /// exact solution.
    pub trailing: Option<MonomialTerm>,
    /// Largest |coefficient| over residual monomials away from the
    /// trailing slot; exactly 0 when `interior_ok`.
    pub max_interior_coeff: Rational,
    /// Every monomial actually left in L(u_N) - R(u_N), sorted by
    /// exponent slot.
    pub residual_terms: Vec<MonomialTerm>,
    /// First residual monomial that differs from the prediction, if any.
    pub first_mismatch: Option<MonomialTerm>,
}

/// Apply the equation to the truncated member exactly and compare the
/// surviving monomials against the predicted single trailing term.
///
/// Interior cancellation is also cross-checked structurally: the L-image
/// of term n must land on the same exponent slot as the R-image of term
/// n - 1 (an internal invariant of the similarity parameters; violation
/// is a hard error, not a residual mismatch).
pub fn residual_series(solution: &SeriesSolution) -> Result<ResidualReport> {
    let spec = &solution.spec;
    let params = &solution.params;
    let (p, q) = (spec.p(), spec.q());
    let ((lx, ly), (rx, ry)) = operator_shifts(spec.kind(), p, q, spec.alpha(), spec.beta());
    let i_rat = rat_usize(solution.index, 1);

    let mut slots: BTreeMap<(Rational, Rational), Rational> = BTreeMap::new();
    let mut add = |key: (Rational, Rational), value: Rational| {
        let entry = slots.entry(key).or_insert_with(Rational::zero);
        *entry += value;
    };

    let mut prev_right_slot: Option<(Rational, Rational)> = None;
    for (n, coeff) in solution.coeffs.iter().enumerate() {
        let x_exp = &i_rat + rat_usize(n, 1) * &params.c;
        let y_exp = &params.b + &params.a * &x_exp;
        let left_coeff = coeff * falling_factorial(&x_exp, p);
        let right_coeff = coeff * falling_factorial(&y_exp, q);
        let left_slot = (&x_exp + &lx, &y_exp + &ly);
        let right_slot = (&x_exp + &rx, &y_exp + &ry);
        if n > 0 && !coeff.is_zero() {
            match &prev_right_slot {
                Some(prev) if *prev == left_slot => {}
                _ => {
                    return Err(Error::InvalidSpec(format!(
                        "operator images misaligned at term {} of member {}: \
                         left slot ({}, {}) does not continue the previous right slot",
                        n, solution.index, left_slot.0, left_slot.1
                    )));
                }
            }
        }
        if !left_coeff.is_zero() {
            add(left_slot, left_coeff);
        }
        if !right_coeff.is_zero() {
            add(right_slot.clone(), -right_coeff);
        }
        prev_right_slot = Some(right_slot);
    }

    let residual_terms: Vec<MonomialTerm> = slots
        .into_iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|((x_exp, y_exp), coefficient)| MonomialTerm {
            coefficient,
            x_exp,
            y_exp,
        })
        .collect();

    let trailing = predicted_trailing(solution);
    let interior_ok = match &trailing {
        None => residual_terms.is_empty(),
        Some(t) => residual_terms.len() == 1 && residual_terms[0] == *t,
    };
    let max_interior_coeff = residual_terms
        .iter()
        .filter(|term| match &trailing {
            Some(t) => (&term.x_exp, &term.y_exp) != (&t.x_exp, &t.y_exp),
            None => true,
        })
        .map(|term| term.coefficient.abs())
        .max()
        .unwrap_or_else(Rational::zero);
    let first_mismatch = if interior_ok {
        None
    } else {
        residual_terms
            .iter()
            .find(|term| match &trailing {
                Some(t) => *term != t,
                None => true,
            })
            .cloned()
            .or_else(|| trailing.clone())
    };
    Ok(ResidualReport {
        interior_ok,
        trailing,
        max_interior_coeff,
        residual_terms,
        first_mismatch,
    })
}

/// The monomial -R(term N) a clean truncation leaves behind, or None
/// when its coefficient vanishes (terminated series).
pub fn predicted_trailing(solution: &SeriesSolution) -> Option<MonomialTerm> {
    let spec = &solution.spec;
    let params = &solution.params;
    let n = solution.order();
    let c_n = solution.coeffs.last()?;
    let x_exp = rat_usize(solution.index, 1) + rat_usize(n, 1) * &params.c;
    let y_exp = &params.b + &params.a * &x_exp;
    let coefficient = -(c_n * falling_factorial(&y_exp, spec.q()));
    if coefficient.is_zero() {
        return None;
    }
    let ((_, _), (rx, ry)) =
        operator_shifts(spec.kind(), spec.p(), spec.q(), spec.alpha(), spec.beta());
    Some(MonomialTerm {
        coefficient,
        x_exp: x_exp + rx,
        y_exp: y_exp + ry,
    })
}

/// Finite-difference weights for the m-th derivative at 0 from the given
/// grid offsets, exact in rational arithmetic (Fornberg's recursion).
pub fn fd_weights(order: usize, grid: &[Rational]) -> Result<Vec<Rational>> {
    if grid.len() <= order {
        return Err(Error::Domain(format!(
            "{} grid points cannot resolve derivative order {}",
            grid.len(),
            order
        )));
    }
    let n = grid.len();
    // w[idx][k]: weight of grid[idx] for the k-th derivative at 0
    let mut w = vec![vec![Rational::zero(); order + 1]; n];
    w[0][0] = Rational::one();
    let mut c1 = Rational::one();
    let mut c4 = grid[0].clone();
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = Rational::one();
        let c5 = c4.clone();
        c4 = grid[i].clone();
        for j in 0..i {
            let c3 = &grid[i] - &grid[j];
            if c3.is_zero() {
                return Err(Error::Domain(
                    "finite-difference grid offsets must be distinct".into(),
                ));
            }
            c2 *= &c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let val = (&c1
                        * (rat_usize(k, 1) * &w[i - 1][k - 1] - &c5 * &w[i - 1][k]))
                        / &c2;
                    w[i][k] = val;
                }
                w[i][0] = -(&c1 * &c5 * &w[i - 1][0]) / &c2;
            }
            for k in (1..=mn).rev() {
                let val = (&c4 * &w[j][k] - rat_usize(k, 1) * &w[j][k - 1]) / &c3;
                w[j][k] = val;
            }
            let val0 = (&c4 * &w[j][0]) / &c3;
            w[j][0] = val0;
        }
        c1 = c2;
    }
    Ok(w.into_iter().map(|mut row| row.remove(order)).collect())
}

/// Symmetric offsets -(n-1)/2 .. (n-1)/2 (half-integers when n is even):
/// with n = order + 3 points the central weights are 4th-order accurate.
pub fn symmetric_grid(points: usize) -> Vec<Rational> {
    let shift = rat_usize(points - 1, 2);
    (0..points).map(|j| rat_usize(j, 1) - &shift).collect()
}

/// Relative residual of the truncated monomial sum at sample points,
/// with both derivative sides approximated by 4th-order central finite
/// differences of step `h`.
#[derive(Clone, Debug)]
pub struct ResidualSummary {
    /// (x, y, relative residual) per sample point.
    pub samples: Vec<(f64, f64, f64)>,
    pub max_rel_residual: f64,
    pub h: f64,
}

/// Probe L(u_N) - R(u_N) numerically at the given points.
///
/// The probe differentiates the truncated monomial sum itself (not the
/// hypergeometric evaluation), so any corruption of a stored coefficient
/// shows up directly. The relative residual at a point is
/// |L - R| / (|L| + |R| + tiny).
pub fn residual_numeric(
    solution: &SeriesSolution,
    points: &[(f64, f64)],
    h: f64,
) -> Result<ResidualSummary> {
    if !h.is_finite() || h <= 0.0 {
        return Err(Error::Domain(format!("step h must be positive, got {}", h)));
    }
    let spec = &solution.spec;
    let (p, q) = (spec.p(), spec.q());
    let alpha = to_f64(spec.alpha());
    let beta = to_f64(spec.beta());

    let grid_x = symmetric_grid(p + 3);
    let grid_y = symmetric_grid(q + 3);
    let wx: Vec<f64> = fd_weights(p, &grid_x)?.iter().map(to_f64).collect();
    let wy: Vec<f64> = fd_weights(q, &grid_y)?.iter().map(to_f64).collect();
    let offs_x: Vec<f64> = grid_x.iter().map(to_f64).collect();
    let offs_y: Vec<f64> = grid_y.iter().map(to_f64).collect();

    let mut samples = Vec::with_capacity(points.len());
    let mut max_rel = 0.0f64;
    for &(x, y) in points {
        if !x.is_finite() || !y.is_finite() || x <= 0.0 || y <= 0.0 {
            return Err(Error::Domain(format!(
                "sample points need x > 0, y > 0; got ({}, {})",
                x, y
            )));
        }
        let mut dp = 0.0;
        for (w, o) in wx.iter().zip(&offs_x) {
            dp += w * solution.eval_ledger_f64(x + o * h, y);
        }
        dp /= h.powi(p as i32);
        let mut dq = 0.0;
        for (w, o) in wy.iter().zip(&offs_y) {
            dq += w * solution.eval_ledger_f64(x, y + o * h);
        }
        dq /= h.powi(q as i32);

        let (left, right) = match spec.kind() {
            EquationKind::First => (x.powf(alpha) * dp, y.powf(beta) * dq),
            EquationKind::Second => (y.powf(beta) * dp, x.powf(alpha) * dq),
            EquationKind::Third => (x.powf(alpha) * y.powf(beta) * dp, dq),
            EquationKind::Fourth => (dp, x.powf(alpha) * y.powf(beta) * dq),
        };
        let rel = (left - right).abs() / (left.abs() + right.abs() + 1e-300);
        max_rel = max_rel.max(rel);
        samples.push((x, y, rel));
    }
    Ok(ResidualSummary {
        samples,
        max_rel_residual: max_rel,
        h,
    })
}
