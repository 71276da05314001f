//! Linear-symplectic classification of quadratic Hamiltonians.
//!
//! A quadratic form on `ℝ^{2d}` with coordinates `z = (x_1..x_d, ξ_1..ξ_d)` is
//! stored as the symmetric matrix `H` with `q(z) = ½ zᵀ H z`. Its Hamiltonian
//! matrix is `JH` with `J = [[0, I], [-I, 0]]`, so that `ż = JHz`. The Poisson
//! bracket uses `{f, g} = ∂_ξ f · ∂_x g − ∂_x f · ∂_ξ g`, which gives
//! `{q₁, q₂} = ½ zᵀ (H₂JH₁ − H₁JH₂) z`.

use nalgebra::{Complex, DMatrix, DVector, Schur};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const SYMMETRY_TOL: f64 = 1e-12;
const GROUPING_TOL: f64 = 1e-8;
const BRACKET_TOL: f64 = 1e-10;
const RANK_TOL: f64 = 1e-10;

/// A coordinate of phase space, for building forms from monomials.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    X(usize),
    Xi(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticHamiltonian {
    matrix: DMatrix<f64>,
    dim: usize,
}

impl QuadraticHamiltonian {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        let n = matrix.nrows();
        if n != matrix.ncols() || n % 2 != 0 || n == 0 {
            return Err(Error::invalid(
                "matrix",
                format!("must be square of even size, got {}×{}", n, matrix.ncols()),
            ));
        }
        let scale = matrix.amax().max(1.0);
        let asym = (&matrix - matrix.transpose()).amax();
        if asym > SYMMETRY_TOL * scale {
            return Err(Error::invalid("matrix", format!("not symmetric (defect {asym:.3e})")));
        }
        Ok(QuadraticHamiltonian { dim: n / 2, matrix })
    }

    /// `q = Σ c · a · b` over the given monomials.
    pub fn from_terms(dim: usize, terms: &[(f64, Var, Var)]) -> Result<Self> {
        let index = |v: Var| -> Result<usize> {
            let (i, off) = match v {
                Var::X(i) => (i, 0),
                Var::Xi(i) => (i, dim),
            };
            if i >= dim {
                return Err(Error::Dimension { expected: dim, got: i + 1 });
            }
            Ok(i + off)
        };
        let mut m = DMatrix::zeros(2 * dim, 2 * dim);
        for &(c, a, b) in terms {
            let (i, j) = (index(a)?, index(b)?);
            m[(i, j)] += c;
            m[(j, i)] += c;
        }
        QuadraticHamiltonian::new(m)
    }

    /// `x_i ξ_i`.
    pub fn hyperbolic(dim: usize, i: usize) -> Result<Self> {
        Self::from_terms(dim, &[(1.0, Var::X(i), Var::Xi(i))])
    }

    /// `x_i² + ξ_i²`.
    pub fn elliptic(dim: usize, i: usize) -> Result<Self> {
        Self::from_terms(dim, &[(1.0, Var::X(i), Var::X(i)), (1.0, Var::Xi(i), Var::Xi(i))])
    }

    /// The commuting pair `(x_a ξ_a + x_b ξ_b, x_a ξ_b − x_b ξ_a)` of a loxodromic block.
    pub fn complex_hyperbolic_pair(dim: usize, a: usize, b: usize) -> Result<(Self, Self)> {
        let dilation = Self::from_terms(dim, &[(1.0, Var::X(a), Var::Xi(a)), (1.0, Var::X(b), Var::Xi(b))])?;
        let rotation = Self::from_terms(dim, &[(1.0, Var::X(a), Var::Xi(b)), (-1.0, Var::X(b), Var::Xi(a))])?;
        Ok((dilation, rotation))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `q(z)`.
    pub fn eval(&self, z: &[f64]) -> f64 {
        let v = DVector::from_column_slice(z);
        0.5 * v.dot(&(&self.matrix * &v))
    }

    /// The Hamiltonian matrix `JH`.
    pub fn hamiltonian_matrix(&self) -> DMatrix<f64> {
        symplectic_form(self.dim) * &self.matrix
    }

    /// `Sᵀ H S`, the form pulled back by a linear map.
    pub fn conjugated(&self, s: &DMatrix<f64>) -> Result<Self> {
        let m = s.transpose() * &self.matrix * s;
        QuadraticHamiltonian::new(0.5 * (&m + m.transpose()))
    }

    pub fn scaled(&self, c: f64) -> Self {
        QuadraticHamiltonian {
            matrix: &self.matrix * c,
            dim: self.dim,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(QuadraticHamiltonian {
            matrix: &self.matrix + &other.matrix,
            dim: self.dim,
        })
    }
}

/// `J = [[0, I], [-I, 0]]` on `ℝ^{2d}`.
pub fn symplectic_form(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(2 * dim, 2 * dim);
    for i in 0..dim {
        j[(i, dim + i)] = 1.0;
        j[(dim + i, i)] = -1.0;
    }
    j
}

pub fn poisson_bracket(q1: &QuadraticHamiltonian, q2: &QuadraticHamiltonian) -> Result<QuadraticHamiltonian> {
    if q1.dim != q2.dim {
        return Err(Error::Dimension {
            expected: q1.dim,
            got: q2.dim,
        });
    }
    let j = symplectic_form(q1.dim);
    let c = &q2.matrix * &j * &q1.matrix - &q1.matrix * &j * &q2.matrix;
    Ok(QuadraticHamiltonian { matrix: c, dim: q1.dim })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BlockType {
    Hyperbolic,
    ComplexHyperbolic,
    Elliptic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockSpectrum {
    pub block: BlockType,
    /// Representative eigenvalues `(re, im)` with non-negative parts; the
    /// remaining ones follow from the `±λ, ±λ̄` symmetry.
    pub eigenvalue: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockDecomposition {
    pub hyperbolic: usize,
    pub complex_hyperbolic: usize,
    pub elliptic: usize,
    pub block_spectra: Vec<BlockSpectrum>,
}

impl BlockDecomposition {
    pub fn counts(&self) -> (usize, usize, usize) {
        (self.hyperbolic, self.complex_hyperbolic, self.elliptic)
    }
}

const SCHUR_MAX_ITER: usize = 10_000;

/// Eigenvalues via real Schur form. If the QR iteration stalls, it is
/// restarted on a few orthogonally similar copies `PMP` with Householder
/// reflections `P`, which share the spectrum but not the stall.
fn eigenvalues(m: &DMatrix<f64>) -> Result<Vec<Complex<f64>>> {
    let n = m.nrows();
    for attempt in 0..4usize {
        let a = if attempt == 0 {
            m.clone()
        } else {
            let v = DVector::from_fn(n, |i, _| ((attempt * (i + 1)) as f64 * 1.618).sin() + 0.5);
            let p = DMatrix::identity(n, n) - (&v * v.transpose()) * (2.0 / v.norm_squared());
            &p * m * &p
        };
        if let Some(schur) = Schur::try_new(a, f64::EPSILON, SCHUR_MAX_ITER) {
            return Ok(schur.complex_eigenvalues().iter().copied().collect());
        }
    }
    Err(Error::NonConvergence {
        what: "Schur decomposition",
        achieved: f64::NAN,
    })
}

/// Groups the eigenvalues of `JH` into elliptic pairs, hyperbolic pairs and
/// loxodromic quadruples.
pub fn classify(q: &QuadraticHamiltonian) -> Result<BlockDecomposition> {
    let ev = eigenvalues(&q.hamiltonian_matrix())?;
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let smallest = ev.iter().map(|z| z.norm()).fold(f64::INFINITY, f64::min);
    if scale == 0.0 || smallest < GROUPING_TOL * scale.max(1.0) {
        return Err(Error::Degenerate { modulus: smallest });
    }
    let tol = GROUPING_TOL * scale;
    let (mut imag, mut real, mut complex) = (Vec::new(), Vec::new(), Vec::new());
    for z in &ev {
        if z.re.abs() <= tol {
            imag.push(*z);
        } else if z.im.abs() <= tol {
            real.push(*z);
        } else {
            complex.push(*z);
        }
    }
    if imag.len() % 2 != 0 || real.len() % 2 != 0 || complex.len() % 4 != 0 {
        return Err(Error::NonConvergence {
            what: "eigenvalue grouping",
            achieved: tol,
        });
    }
    let mut spectra = Vec::new();
    let mut push = |block, list: &[Complex<f64>], keep: &dyn Fn(&Complex<f64>) -> bool| {
        let mut reps: Vec<(f64, f64)> = list.iter().filter(|z| keep(z)).map(|z| (z.re.abs(), z.im.abs())).collect();
        reps.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for r in reps {
            spectra.push(BlockSpectrum { block, eigenvalue: r });
        }
    };
    push(BlockType::Hyperbolic, &real, &|z| z.re > 0.0);
    push(BlockType::ComplexHyperbolic, &complex, &|z| z.re > 0.0 && z.im > 0.0);
    push(BlockType::Elliptic, &imag, &|z| z.im > 0.0);
    let out = BlockDecomposition {
        hyperbolic: real.len() / 2,
        complex_hyperbolic: complex.len() / 4,
        elliptic: imag.len() / 2,
        block_spectra: spectra,
    };
    if out.hyperbolic + 2 * out.complex_hyperbolic + out.elliptic != q.dim {
        return Err(Error::NonConvergence {
            what: "eigenvalue grouping",
            achieved: tol,
        });
    }
    Ok(out)
}

/// Which part of the Cartan test failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "check", rename_all = "snake_case")]
pub enum CartanFailure {
    DimensionMismatch { expected: usize, got: usize },
    NotCommuting { i: usize, j: usize, bracket_norm: f64 },
    WrongSize { expected: usize, got: usize },
    SpanDeficient { rank: usize },
    NotRegular { distinct_eigenvalues: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CartanCertificate {
    pub is_cartan: bool,
    pub max_bracket: f64,
    pub span_rank: usize,
    pub distinct_eigenvalues: usize,
    pub failure: Option<CartanFailure>,
}

/// Whether `family` spans a Cartan subalgebra of the quadratic forms:
/// pairwise commuting, of full rank `d`, and containing an element whose
/// Hamiltonian matrix has `2d` distinct eigenvalues.
pub fn is_cartan(family: &[QuadraticHamiltonian]) -> CartanCertificate {
    let mut cert = CartanCertificate {
        is_cartan: false,
        max_bracket: 0.0,
        span_rank: 0,
        distinct_eigenvalues: 0,
        failure: None,
    };
    let Some(first) = family.first() else {
        cert.failure = Some(CartanFailure::WrongSize { expected: 1, got: 0 });
        return cert;
    };
    let d = first.dim;
    if let Some(bad) = family.iter().find(|q| q.dim != d) {
        cert.failure = Some(CartanFailure::DimensionMismatch { expected: d, got: bad.dim });
        return cert;
    }
    for i in 0..family.len() {
        for j in (i + 1)..family.len() {
            let b = poisson_bracket(&family[i], &family[j]).expect("dimensions checked");
            let norm = b.matrix.norm();
            let scale = (family[i].matrix.norm() * family[j].matrix.norm()).max(1.0);
            cert.max_bracket = cert.max_bracket.max(norm);
            if norm > BRACKET_TOL * scale && cert.failure.is_none() {
                cert.failure = Some(CartanFailure::NotCommuting { i, j, bracket_norm: norm });
            }
        }
    }
    let flat = DMatrix::from_fn(family.len(), 4 * d * d, |r, c| family[r].matrix[(c / (2 * d), c % (2 * d))]);
    let sv = flat.singular_values();
    let top = sv.iter().copied().fold(0.0, f64::max);
    cert.span_rank = sv.iter().filter(|&&s| s > RANK_TOL * top && top > 0.0).count();

    let mut generic = DMatrix::zeros(2 * d, 2 * d);
    for (i, q) in family.iter().enumerate() {
        // fixed, rationally independent weights
        let w = 1.0 + (i as f64 + 1.0) * std::f64::consts::SQRT_2.fract() + 0.1 * (i as f64).powi(2);
        generic += &q.matrix * w;
    }
    let ev = eigenvalues(&(symplectic_form(d) * generic)).unwrap_or_default();
    let scale = ev.iter().map(|z| z.norm()).fold(0.0, f64::max).max(1e-300);
    let mut distinct: Vec<Complex<f64>> = Vec::new();
    for z in ev {
        if z.norm() > 1e-8 * scale && distinct.iter().all(|w| (w - z).norm() > 1e-6 * scale) {
            distinct.push(z);
        }
    }
    cert.distinct_eigenvalues = distinct.len();

    if cert.failure.is_none() {
        cert.failure = if family.len() != d {
            Some(CartanFailure::WrongSize { expected: d, got: family.len() })
        } else if cert.span_rank != d {
            Some(CartanFailure::SpanDeficient { rank: cert.span_rank })
        } else if cert.distinct_eigenvalues != 2 * d {
            Some(CartanFailure::NotRegular {
                distinct_eigenvalues: cert.distinct_eigenvalues,
            })
        } else {
            None
        };
    }
    cert.is_cartan = cert.failure.is_none();
    cert
}

/// The standard commuting family with `h` hyperbolic, `l` loxodromic and `e`
/// elliptic blocks, on `d = h + 2l + e` degrees of freedom.
pub fn model_family(h: usize, l: usize, e: usize) -> Result<Vec<QuadraticHamiltonian>> {
    let d = h + 2 * l + e;
    if d == 0 {
        return Err(Error::invalid("blocks", "at least one block is required"));
    }
    let mut out = Vec::with_capacity(d);
    let mut next = 0;
    for _ in 0..h {
        out.push(QuadraticHamiltonian::hyperbolic(d, next)?);
        next += 1;
    }
    for _ in 0..l {
        let (a, b) = QuadraticHamiltonian::complex_hyperbolic_pair(d, next, next + 1)?;
        out.push(a);
        out.push(b);
        next += 2;
    }
    for _ in 0..e {
        out.push(QuadraticHamiltonian::elliptic(d, next)?);
        next += 1;
    }
    Ok(out)
}

/// `exp(JK)` for a random symmetric `K` with entries uniform in `[-scale, scale]`.
pub fn random_symplectic<R: Rng>(dim: usize, scale: f64, rng: &mut R) -> DMatrix<f64> {
    let mut k = DMatrix::zeros(2 * dim, 2 * dim);
    for i in 0..2 * dim {
        for j in i..2 * dim {
            let v = rng.gen_range(-scale..=scale);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    (symplectic_form(dim) * k).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MomentRank {
    pub rank: usize,
    pub leading_rank: usize,
    /// Whether the first `k` gradients already realize the full rank.
    pub realized_by_leading: bool,
}

/// Numerical rank of a family of gradients, with the rank of its first `k`.
pub fn moment_rank(gradients: &[Vec<f64>], k: usize) -> Result<MomentRank> {
    if gradients.is_empty() {
        return Err(Error::invalid("gradients", "empty input"));
    }
    let n = gradients[0].len();
    if let Some(g) = gradients.iter().find(|g| g.len() != n) {
        return Err(Error::Dimension { expected: n, got: g.len() });
    }
    let rank_of = |rows: &[Vec<f64>]| -> usize {
        if rows.is_empty() || n == 0 {
            return 0;
        }
        let m = DMatrix::from_fn(rows.len(), n, |r, c| rows[r][c]);
        let sv = m.singular_values();
        let top = sv.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_TOL * top).count()
    };
    let rank = rank_of(gradients);
    let leading_rank = rank_of(&gradients[..k.min(gradients.len())]);
    Ok(MomentRank {
        rank,
        leading_rank,
        realized_by_leading: leading_rank == rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bracket_of_oscillator_and_dilation() {
        let osc = QuadraticHamiltonian::elliptic(1, 0).unwrap();
        let dil = QuadraticHamiltonian::hyperbolic(1, 0).unwrap();
        let b = poisson_bracket(&osc, &dil).unwrap();
        // hand expansion: ∂_ξ(x²+ξ²)∂_x(xξ) − ∂_x(x²+ξ²)∂_ξ(xξ) = 2ξ² − 2x²
        for &(x, xi) in &[(1.0, 0.0), (0.0, 1.0), (0.3, -0.7)] {
            let want = 2.0 * xi * xi - 2.0 * x * x;
            assert!((b.eval(&[x, xi]) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn self_bracket_vanishes() {
        let q = QuadraticHamiltonian::from_terms(2, &[(0.7, Var::X(0), Var::Xi(1)), (1.3, Var::X(1), Var::X(1))]).unwrap();
        assert_eq!(poisson_bracket(&q, &q).unwrap().matrix().amax(), 0.0);
    }

    #[test]
    fn basic_classification() {
        assert_eq!(classify(&QuadraticHamiltonian::elliptic(1, 0).unwrap()).unwrap().counts(), (0, 0, 1));
        assert_eq!(classify(&QuadraticHamiltonian::hyperbolic(1, 0).unwrap()).unwrap().counts(), (1, 0, 0));
    }

    #[test]
    fn degenerate_form_is_rejected() {
        let q = QuadraticHamiltonian::from_terms(1, &[(1.0, Var::X(0), Var::X(0))]).unwrap();
        assert!(matches!(classify(&q), Err(Error::Degenerate { .. })));
    }

    #[test]
    fn asymmetric_matrix_is_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]);
        assert!(QuadraticHamiltonian::new(m).is_err());
    }
}
