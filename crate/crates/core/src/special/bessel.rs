//! Bessel functions of the first kind for integer order.
//!
//! Below the turning point (`x < k`) and for moderate arguments the value comes
//! from Miller's downward recurrence normalized by `J_0 + 2 Σ J_{2j} = 1`; for
//! large arguments `J_0`, `J_1` come from the Hankel expansion and the order is
//! raised by the (then stable) upward recurrence.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use crate::error::{Error, Result};

const MAX_ORDER: i32 = 1000;
const MAX_ARGUMENT: f64 = 1e7;
const ASYMPTOTIC_FROM: f64 = 25.0;
const RESCALE_ABOVE: f64 = 1e250;

pub fn bessel_j(k: i32, x: f64) -> Result<f64> {
    if k.abs() > MAX_ORDER {
        return Err(Error::range("bessel order", format!("|k| = {} > {MAX_ORDER}", k.abs())));
    }
    if !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::range("bessel argument", format!("x = {x}")));
    }
    let n = k.unsigned_abs() as usize;
    // J_{-n} = (-1)^n J_n and J_n(-x) = (-1)^n J_n(x)
    let mut sign = 1.0;
    if k < 0 && n % 2 == 1 {
        sign = -sign;
    }
    if x < 0.0 && n % 2 == 1 {
        sign = -sign;
    }
    let x = x.abs();
    if x == 0.0 {
        return Ok(if n == 0 { 1.0 } else { 0.0 });
    }
    let value = if x < ASYMPTOTIC_FROM || n as f64 >= x {
        miller(n, x)
    } else {
        upward(n, x)
    };
    Ok(sign * value)
}

fn miller(n: usize, x: f64) -> f64 {
    let top = (n as f64).max(x.ceil());
    let start = 2 * ((top as usize + 15 + (160.0 * top).sqrt() as usize) / 2);
    let two_over_x = 2.0 / x;
    let (mut bj, mut bjp) = (1.0f64, 0.0f64);
    let mut sum = 0.0;
    let mut ans = 0.0;
    let mut add = false;
    for j in (1..=start).rev() {
        let bjm = j as f64 * two_over_x * bj - bjp;
        bjp = bj;
        bj = bjm;
        if bj.abs() > RESCALE_ABOVE {
            bj /= RESCALE_ABOVE;
            bjp /= RESCALE_ABOVE;
            ans /= RESCALE_ABOVE;
            sum /= RESCALE_ABOVE;
        }
        if add {
            sum += bj;
        }
        add = !add;
        if j - 1 == n {
            ans = bj;
        }
    }
    let norm = 2.0 * sum - bj;
    ans / norm
}

/// `a_j(k)` of the Hankel expansion `H^{(1)}_k(x) ~ √(2/πx) e^{iω} Σ i^j a_j / x^j`.
pub fn hankel_coefficients(k: i32, count: usize) -> Vec<f64> {
    let mu = 4.0 * (k as f64).powi(2);
    let mut out = Vec::with_capacity(count);
    let mut a = 1.0;
    for j in 0..count {
        if j > 0 {
            let odd = (2 * j - 1) as f64;
            a *= (mu - odd * odd) / (8.0 * j as f64);
        }
        out.push(a);
    }
    out
}

fn asymptotic(order: i32, x: f64) -> f64 {
    let coef = hankel_coefficients(order, 60);
    let (mut p, mut q) = (0.0, 0.0);
    let mut last = f64::INFINITY;
    let mut xpow = 1.0;
    for (j, &a) in coef.iter().enumerate() {
        let term = a / xpow;
        if term.abs() > last || term.abs() < 1e-18 {
            break;
        }
        last = term.abs();
        let sign = if (j / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if j % 2 == 0 {
            p += sign * term;
        } else {
            q += sign * term;
        }
        xpow *= x;
    }
    let omega = x - order as f64 * FRAC_PI_2 - FRAC_PI_4;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

fn upward(n: usize, x: f64) -> f64 {
    let j0 = asymptotic(0, x);
    if n == 0 {
        return j0;
    }
    let mut prev = j0;
    let mut cur = asymptotic(1, x);
    for m in 1..n {
        let next = 2.0 * m as f64 / x * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}
