use crate::error::{Error, Result};

pub const HERMITE_MAX_DEGREE: usize = 200;

/// Physicists' Hermite polynomial `H_n(x)` by the three-term recurrence
/// `H_{n+1} = 2x H_n - 2n H_{n-1}`.
pub fn hermite_poly(n: usize, x: f64) -> Result<f64> {
    if n > HERMITE_MAX_DEGREE {
        return Err(Error::range(
            "hermite degree",
            format!("n = {n} exceeds {HERMITE_MAX_DEGREE}"),
        ));
    }
    if !x.is_finite() {
        return Err(Error::range("hermite argument", format!("x = {x}")));
    }
    let mut prev = 1.0;
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = 2.0 * x;
    for k in 1..n {
        let next = 2.0 * x * cur - 2.0 * k as f64 * prev;
        prev = cur;
        cur = next;
    }
    if cur.is_finite() {
        Ok(cur)
    } else {
        Err(Error::range(
            "hermite value",
            format!("H_{n}({x}) overflows f64"),
        ))
    }
}

/// `(2^n n!)^{-1/2} H_n(x) e^{-x^2/2}`, evaluated by the normalized recurrence
/// so that neither factor overflows. The `π^{-1/4}` of the orthonormal
/// Hermite function is left out: `∫ |h_n|^2 = √π` for every `n`.
pub fn hermite_function(n: usize, x: f64) -> f64 {
    let mut prev = (-0.5 * x * x).exp();
    if n == 0 {
        return prev;
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
    }
    cur
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_degrees() {
        assert_eq!(hermite_poly(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_poly(1, 2.0).unwrap(), 4.0);
    }

    #[test]
    fn degree_five_matches_expansion() {
        let x: f64 = 1.3;
        let expanded = 32.0 * x.powi(5) - 160.0 * x.powi(3) + 120.0 * x;
        assert!((hermite_poly(5, x).unwrap() - expanded).abs() < 1e-12);
    }

    #[test]
    fn degree_limit_and_overflow() {
        assert!(matches!(hermite_poly(201, 0.1), Err(Error::Range { .. })));
        assert!(matches!(hermite_poly(200, 1e3), Err(Error::Range { .. })));
        assert!(hermite_poly(200, 1.0).is_ok());
    }

    #[test]
    fn hermite_function_matches_polynomial() {
        let mut fact = 1.0;
        for n in 0..12usize {
            if n > 0 {
                fact *= n as f64;
            }
            let x = 0.83;
            let direct = hermite_poly(n, x).unwrap() * (-0.5 * x * x).exp()
                / (2f64.powi(n as i32) * fact).sqrt();
            assert!((hermite_function(n, x) - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }
}
