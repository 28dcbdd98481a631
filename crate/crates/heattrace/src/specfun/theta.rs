//! Jacobi theta constants θ₃(0;q) = Σ_{n∈ℤ} q^{n²} and θ₄(0;q) = Σ (−1)ⁿ q^{n²}.

use super::SpecFunError;

const TAIL: f64 = 1e-17;

fn theta_sum(q: f64, sign: f64) -> Result<f64, SpecFunError> {
    if !(q > 0.0 && q < 1.0) {
        if q == 0.0 {
            return Ok(1.0);
        }
        return Err(SpecFunError::Domain(format!("theta nome must lie in (0,1), got {q}")));
    }
    let mut acc = 0.0;
    let mut n = 1u64;
    let mut sgn = sign;
    loop {
        let term = q.powf((n * n) as f64);
        acc += sgn * term;
        // Σ_{m>n} q^{m²} ≤ q^{(n+1)²} / (1 − q^{2n+3})
        let next = q.powf(((n + 1) * (n + 1)) as f64);
        let bound = 2.0 * next / (1.0 - q.powf((2 * n + 3) as f64));
        if bound < TAIL {
            break;
        }
        n += 1;
        sgn *= sign;
    }
    Ok(1.0 + 2.0 * acc)
}

pub fn theta3(q: f64) -> Result<f64, SpecFunError> {
    theta_sum(q, 1.0)
}

pub fn theta4(q: f64) -> Result<f64, SpecFunError> {
    theta_sum(q, -1.0)
}
