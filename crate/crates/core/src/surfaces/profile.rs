//! Radius profiles `a(r)` of surfaces of revolution `dr² + a(r)² dθ²`.

use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Natural cubic spline through `(x_i, y_i)` with strictly increasing `x`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    /// Second derivatives at the knots.
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 3 || y.len() != n {
            return Err(Error::invalid("table", "needs at least three (r, a) rows"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) || x.iter().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::invalid("table", "r must be finite and strictly increasing"));
        }
        // tridiagonal system for interior second derivatives (Thomas algorithm)
        let mut m = vec![0.0; n];
        let mut diag = vec![0.0; n];
        let mut rhs = vec![0.0; n];
        let mut upper = vec![0.0; n];
        for i in 1..n - 1 {
            let h0 = x[i] - x[i - 1];
            let h1 = x[i + 1] - x[i];
            let lower = h0;
            diag[i] = 2.0 * (h0 + h1);
            upper[i] = h1;
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h1 - (y[i] - y[i - 1]) / h0);
            if i > 1 {
                let f = lower / diag[i - 1];
                diag[i] -= f * upper[i - 1];
                rhs[i] -= f * rhs[i - 1];
            }
        }
        for i in (1..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }
        Ok(CubicSpline { x, y, m })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], *self.x.last().unwrap())
    }

    fn segment(&self, t: f64) -> usize {
        let k = self.x.partition_point(|&v| v <= t);
        k.clamp(1, self.x.len() - 1) - 1
    }

    /// Value and first derivative.
    pub fn eval_with_derivative(&self, t: f64) -> (f64, f64) {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let value = a * self.y[i]
            + b * self.y[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0;
        let slope = (self.y[i + 1] - self.y[i]) / h
            + (-(3.0 * a * a - 1.0) * self.m[i] + (3.0 * b * b - 1.0) * self.m[i + 1]) * h / 6.0;
        (value, slope)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.eval_with_derivative(t).0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum RevolutionProfile {
    /// `a(r) = sin r` on `[0, π]`, the round sphere.
    Sine,
    /// `a(r) = sin r · (1 + κ sin² r)` on `[0, π]`, requires `κ > -1/3`.
    Deformed { kappa: f64 },
    /// Tabulated `(r, a(r))` rows interpolated by a natural cubic spline.
    Table { spline: CubicSpline },
}

impl RevolutionProfile {
    /// Reads whitespace- or comma-separated `r a` rows; `#` starts a comment.
    pub fn from_table_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_table_str(&text)
    }

    pub fn from_table_str(text: &str) -> Result<Self> {
        let (mut r, mut a) = (Vec::new(), Vec::new());
        for (lineno, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c == ',' || c.is_whitespace()).filter(|s| !s.is_empty()).collect();
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::invalid("table", format!("line {}: cannot parse {s:?}", lineno + 1)))
            };
            if cols.len() != 2 {
                return Err(Error::invalid("table", format!("line {}: expected two columns", lineno + 1)));
            }
            r.push(parse(cols[0])?);
            a.push(parse(cols[1])?);
        }
        let profile = RevolutionProfile::Table {
            spline: CubicSpline::new(r, a)?,
        };
        profile.validate()?;
        Ok(profile)
    }

    pub fn length(&self) -> f64 {
        match self {
            RevolutionProfile::Sine | RevolutionProfile::Deformed { .. } => PI,
            RevolutionProfile::Table { spline } => spline.domain().1 - spline.domain().0,
        }
    }

    fn start(&self) -> f64 {
        match self {
            RevolutionProfile::Table { spline } => spline.domain().0,
            _ => 0.0,
        }
    }

    /// `a(r)` and `a'(r)` for `r ∈ [0, length]`.
    pub fn eval_with_derivative(&self, r: f64) -> (f64, f64) {
        match self {
            RevolutionProfile::Sine => (r.sin(), r.cos()),
            RevolutionProfile::Deformed { kappa } => {
                let (s, c) = r.sin_cos();
                (s * (1.0 + kappa * s * s), c * (1.0 + 3.0 * kappa * s * s))
            }
            RevolutionProfile::Table { spline } => spline.eval_with_derivative(r + self.start()),
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.eval_with_derivative(r).0
    }

    /// Checks positivity in the interior and a single sign change of `a'`.
    pub fn validate(&self) -> Result<()> {
        if let RevolutionProfile::Deformed { kappa } = self {
            if !(kappa.is_finite() && *kappa > -1.0 / 3.0) {
                return Err(Error::invalid("kappa", "must exceed -1/3"));
            }
        }
        let len = self.length();
        let n = 4096;
        let mut changes = 0;
        let mut prev = self.eval_with_derivative(0.5 * len / n as f64).1;
        for i in 0..n {
            let r = (i as f64 + 0.5) * len / n as f64;
            let (a, da) = self.eval_with_derivative(r);
            if !(a > 0.0) {
                return Err(Error::invalid("profile", format!("a(r) must be positive inside, a({r:.4}) = {a:.3e}")));
            }
            if i > 0 && (da > 0.0) != (prev > 0.0) {
                changes += 1;
            }
            prev = da;
        }
        if changes != 1 {
            return Err(Error::invalid(
                "profile",
                format!("a' must change sign exactly once, found {changes} sign changes"),
            ));
        }
        Ok(())
    }

    /// The equator: the interior critical point of `a`.
    pub fn equator(&self) -> Result<f64> {
        self.validate()?;
        let len = self.length();
        let n = 4096;
        let step = len / n as f64;
        let mut lo = 0.5 * step;
        for i in 1..n {
            let r = (i as f64 + 0.5) * step;
            if self.eval_with_derivative(r).1 <= 0.0 {
                let mut hi = r;
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    if self.eval_with_derivative(mid).1 > 0.0 {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                return Ok(0.5 * (lo + hi));
            }
            lo = r;
        }
        Err(Error::invalid("profile", "no interior maximum"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spline_reproduces_smooth_data() {
        let x: Vec<f64> = (0..=200).map(|i| PI * i as f64 / 200.0).collect();
        let y: Vec<f64> = x.iter().map(|t| t.sin()).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for &t in &[0.3, 1.0, 1.5707, 2.9] {
            let (v, d) = s.eval_with_derivative(t);
            assert!((v - t.sin()).abs() < 1e-7);
            assert!((d - t.cos()).abs() < 1e-4);
        }
    }

    #[test]
    fn equators() {
        assert!((RevolutionProfile::Sine.equator().unwrap() - PI / 2.0).abs() < 1e-12);
        assert!((RevolutionProfile::Deformed { kappa: 0.3 }.equator().unwrap() - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn table_parsing() {
        let mut text = String::from("# r a\n");
        for i in 0..=100 {
            let r = PI * i as f64 / 100.0;
            text.push_str(&format!("{r} {}\n", r.sin()));
        }
        let p = RevolutionProfile::from_table_str(&text).unwrap();
        assert!((p.equator().unwrap() - PI / 2.0).abs() < 1e-3);
        assert!(RevolutionProfile::from_table_str("0 1\n1 x\n2 1\n").is_err());
    }

    #[test]
    fn two_bumps_rejected() {
        let mut text = String::new();
        for i in 0..=100 {
            let r = PI * i as f64 / 100.0;
            text.push_str(&format!("{r} {}\n", r.sin() * (1.0 + 0.8 * (4.0 * r).cos())));
        }
        assert!(RevolutionProfile::from_table_str(&text).is_err());
    }
}
