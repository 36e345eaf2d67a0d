//! Exact combinatorial kernels: falling factorials, Pochhammer symbols,
//! binomial coefficients, and the coefficient triangle A_i^j(a) that
//! drives the chain-rule expansion of iterated derivatives.
//!
//! The triangle satisfies
//!
//! ```text
//! A_i^j(a) = a((i+1) A_i^{j-1}(a) + A_{i-1}^{j-1}(a)) - (j-1) A_i^{j-1}(a)
//! ```
//!
//! with A_0^1 = a and A_i^j = 0 for i >= j. [`a_coeff`] evaluates it by
//! this recurrence (memoized per argument); [`a_coeff_oracle`] evaluates
//! the defining nested sum over strictly decreasing index chains and is
//! retained as an independent cross-check.
//!
//! All arithmetic here is exact rational; no floats.

use std::cell::RefCell;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Falling factorial a(a-1)(a-2)...(a-n+1); the empty product is 1.
pub fn falling_factorial(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        if acc.is_zero() {
            return acc;
        }
        acc *= &factor;
        factor -= Rational::one();
    }
    acc
}

/// Pochhammer symbol (rising factorial) a(a+1)...(a+n-1); 1 when n = 0.
pub fn pochhammer(a: &Rational, n: usize) -> Rational {
    let mut acc = Rational::one();
    let mut factor = a.clone();
    for _ in 0..n {
        if acc.is_zero() {
            return acc;
        }
        acc *= &factor;
        factor += Rational::one();
    }
    acc
}

/// Binomial coefficient C(n, k). Errors when k > n.
pub fn binomial(n: usize, k: usize) -> Result<BigInt> {
    if k > n {
        return Err(Error::Domain(format!(
            "binomial({}, {}): k > n",
            n, k
        )));
    }
    Ok(num_integer::binomial(BigInt::from(n), BigInt::from(k)))
}

/// Triangle of A_i^j values for one fixed rational argument.
///
/// Row j (1-based) holds A_0^j .. A_{j-1}^j; everything at i >= j is 0.
#[derive(Clone, Debug)]
pub struct ACoeffTable {
    argument: Rational,
    /// rows[j - 1] holds the j entries of row j.
    rows: Vec<Vec<Rational>>,
}

impl ACoeffTable {
    /// Table for the given argument, filled up to row `max_j`.
    pub fn new(argument: Rational, max_j: usize) -> Self {
        let mut table = ACoeffTable {
            rows: vec![vec![argument.clone()]],
            argument,
        };
        table.extend_to(max_j);
        table
    }

    pub fn argument(&self) -> &Rational {
        &self.argument
    }

    /// Largest row currently computed.
    pub fn max_j(&self) -> usize {
        self.rows.len()
    }

    /// Fill rows up to `max_j` via the recurrence.
    pub fn extend_to(&mut self, max_j: usize) {
        while self.rows.len() < max_j {
            let j = self.rows.len() + 1;
            let prev = &self.rows[j - 2];
            let j_minus_1 = Rational::from_integer(BigInt::from(j - 1));
            let mut row = Vec::with_capacity(j);
            for i in 0..j {
                // entries beyond the previous row are zero
                let same = if i < prev.len() { prev[i].clone() } else { Rational::zero() };
                let below = if i >= 1 && i - 1 < prev.len() {
                    prev[i - 1].clone()
                } else {
                    Rational::zero()
                };
                let i_plus_1 = Rational::from_integer(BigInt::from(i + 1));
                let value = &self.argument * (i_plus_1 * &same + below) - &j_minus_1 * &same;
                row.push(value);
            }
            self.rows.push(row);
        }
    }

    /// A_i^j for this table's argument; 0 whenever i >= j or j == 0.
    /// Extends the table on demand.
    pub fn get(&mut self, i: usize, j: usize) -> Rational {
        if j == 0 || i >= j {
            return Rational::zero();
        }
        self.extend_to(j);
        self.rows[j - 1][i].clone()
    }

    /// A_i^j without extending; 0 for i >= j. Panics if j exceeds the
    /// computed rows.
    pub fn value(&self, i: usize, j: usize) -> Rational {
        if j == 0 || i >= j {
            return Rational::zero();
        }
        self.rows[j - 1][i].clone()
    }
}

thread_local! {
    static A_COEFF_CACHE: RefCell<BTreeMap<Rational, ACoeffTable>> =
        const { RefCell::new(BTreeMap::new()) };
}

/// A_i^j(a) by the recurrence, memoized per thread and per argument.
pub fn a_coeff(i: usize, j: usize, a: &Rational) -> Rational {
    if j == 0 || i >= j {
        return Rational::zero();
    }
    A_COEFF_CACHE.with(|cache| {
        let mut cache = cache.borrow_mut();
        let table = cache
            .entry(a.clone())
            .or_insert_with(|| ACoeffTable::new(a.clone(), j));
        table.get(i, j)
    })
}

/// A_i^j(a) by the defining nested sum over strictly decreasing chains
/// j = k_0 > k_1 > ... > k_i >= 1:
///
/// ```text
/// sum over chains of  ff(a, k_i) * prod_{s=1..i} C(k_{s-1} - 1, k_s) ff(a, k_{s-1} - k_s)
/// ```
///
/// For i = 0 the chain is just k_0 = j and the sum degenerates to the
/// single term ff(a, j). Combinatorial cost; test oracle only.
pub fn a_coeff_oracle(i: usize, j: usize, a: &Rational) -> Rational {
    if j == 0 || i >= j {
        return Rational::zero();
    }
    let mut total = Rational::zero();
    walk_chains(a, j, i, &Rational::one(), &mut total);
    total
}

/// Recursive chain enumeration: `prev` is k_{s-1}, `remaining` the number
/// of indices still to choose, `partial` the product accumulated so far.
fn walk_chains(a: &Rational, prev: usize, remaining: usize, partial: &Rational, total: &mut Rational) {
    if remaining == 0 {
        *total += partial * falling_factorial(a, prev);
        return;
    }
    // next must leave room for remaining-1 strictly smaller indices >= 1
    for next in remaining..prev {
        let choose = binomial(prev - 1, next).expect("next < prev");
        let contrib = partial
            * Rational::from_integer(choose)
            * falling_factorial(a, prev - next);
        walk_chains(a, next, remaining - 1, &contrib, total);
    }
}
