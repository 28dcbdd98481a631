//! Bernoulli numbers (convention B₁ = +1/2), Bernoulli polynomials and
//! Eulerian numbers, all exact.

use std::sync::{Mutex, OnceLock};

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};

use crate::number::{q_from_f64, q_int, q_to_f64, Q};

fn table() -> &'static Mutex<Vec<Q>> {
    static TABLE: OnceLock<Mutex<Vec<Q>>> = OnceLock::new();
    TABLE.get_or_init(|| Mutex::new(vec![Q::one()]))
}

/// Bernoulli number Bₙ with B₁ = +1/2.
///
/// The table stores the B₁ = −1/2 sequence produced by
/// Σ_{k<m+1} binom(m+1, k) B_k = 0 and flips the sign of B₁ on exit.
pub fn bernoulli_number(n: usize) -> Q {
    let mut tab = table().lock().unwrap_or_else(|e| e.into_inner());
    while tab.len() <= n {
        let m = tab.len();
        if m > 1 && m % 2 == 1 {
            tab.push(Q::zero());
            continue;
        }
        let mut acc = Q::zero();
        let mut binom = BigInt::one();
        for (k, bk) in tab.iter().enumerate() {
            if k > 0 {
                binom = binom * BigInt::from(m + 2 - k) / BigInt::from(k);
            }
            if !bk.is_zero() {
                acc += Q::from_integer(binom.clone()) * bk;
            }
        }
        tab.push(-acc / q_int(m as i64 + 1));
    }
    if n == 1 {
        -tab[1].clone()
    } else {
        tab[n].clone()
    }
}

pub fn bernoulli_f64(n: usize) -> f64 {
    q_to_f64(&bernoulli_number(n))
}

/// Standard Bernoulli polynomial Bₙ(x) = Σ binom(n,k) B_k x^{n−k} with the
/// B₁ = −1/2 convention inside the sum, so B₁(x) = x − 1/2 and
/// Bₙ(0) = Bₙ for n ≠ 1 while B₁(0) = −B₁.
pub fn bernoulli_polynomial_q(n: usize, x: &Q) -> Q {
    let mut acc = Q::zero();
    let mut binom = BigInt::one();
    for k in 0..=n {
        if k > 0 {
            binom = binom * BigInt::from(n + 1 - k) / BigInt::from(k);
        }
        let bk = if k == 1 { -bernoulli_number(1) } else { bernoulli_number(k) };
        if bk.is_zero() {
            continue;
        }
        acc += Q::from_integer(binom.clone()) * bk * num_traits::pow(x.clone(), n - k);
    }
    acc
}

/// Exact evaluation at the binary64 point `x`, rounded once at the end.
pub fn bernoulli_polynomial(n: usize, x: f64) -> f64 {
    match q_from_f64(x) {
        Some(xq) => q_to_f64(&bernoulli_polynomial_q(n, &xq)),
        None => f64::NAN,
    }
}

/// Eulerian number ⟨j k⟩: permutations of j elements with k descents.
pub fn eulerian_number(j: usize, k: usize) -> BigUint {
    eulerian_row(j).get(k).cloned().unwrap_or_else(BigUint::zero)
}

/// Row ⟨j 0⟩, …, ⟨j j−1⟩ (just `[1]` for j = 0).
pub fn eulerian_row(j: usize) -> Vec<BigUint> {
    let mut row = vec![BigUint::one()];
    for n in 1..=j {
        let mut next = vec![BigUint::zero(); n];
        for k in 0..n {
            let mut v = BigUint::zero();
            if k < row.len() {
                v += &row[k] * BigUint::from(k + 1);
            }
            if k >= 1 && k - 1 < row.len() {
                v += &row[k - 1] * BigUint::from(n - k);
            }
            next[k] = v;
        }
        row = next;
    }
    row
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::number::q_frac;

    #[test]
    fn small_bernoulli_numbers() {
        assert_eq!(bernoulli_number(0), q_int(1));
        assert_eq!(bernoulli_number(1), q_frac(1, 2));
        assert_eq!(bernoulli_number(2), q_frac(1, 6));
        assert_eq!(bernoulli_number(4), q_frac(-1, 30));
        assert_eq!(bernoulli_number(7), q_int(0));
        assert_eq!(bernoulli_number(12), q_frac(-691, 2730));
    }

    #[test]
    fn polynomial_at_zero_and_half() {
        assert_eq!(bernoulli_polynomial_q(1, &q_int(0)), q_frac(-1, 2));
        assert_eq!(bernoulli_polynomial_q(3, &q_frac(1, 2)), q_int(0));
        assert_eq!(bernoulli_polynomial_q(2, &q_frac(3, 2)), q_frac(11, 12));
    }

    #[test]
    fn eulerian_rows() {
        assert_eq!(eulerian_number(1, 0), BigUint::from(1u32));
        assert_eq!(eulerian_number(3, 1), BigUint::from(4u32));
        let s: BigUint = eulerian_row(4).iter().sum();
        assert_eq!(s, BigUint::from(24u32));
        assert_eq!(eulerian_number(3, 3), BigUint::zero());
    }
}
