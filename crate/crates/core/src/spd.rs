//! The manifold of real symmetric positive definite matrices: spectral matrix
//! functions, geodesics of weighted geometric means, the trace-metric
//! distance, and the Loewner order.

use crate::error::{Error, Result};
use crate::linalg::{sym_eig, Matrix, SpectralDecomposition, SymMatrix};

/// Positivity floor: construction rejects matrices with
/// λ_min ≤ `SPD_EIGENVALUE_FLOOR` · λ_max.
pub const SPD_EIGENVALUE_FLOOR: f64 = 1e-13;

/// Symmetric positive definite matrix together with its cached spectral
/// decomposition (computed once at construction, reused by every matrix
/// function).
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    sym: SymMatrix,
    spec: SpectralDecomposition,
}

impl PartialEq for SpdMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.sym == other.sym
    }
}

impl SpdMatrix {
    /// Validates positive definiteness through a spectral decomposition.
    pub fn new(sym: SymMatrix) -> Result<Self> {
        let spec = sym_eig(&sym)?;
        let lmin = spec.min_eigenvalue();
        let lmax = spec.max_eigenvalue();
        if !(lmax > 0.0) || lmin <= SPD_EIGENVALUE_FLOOR * lmax {
            return Err(Error::invalid(format!(
                "matrix is not positive definite (eigenvalue range [{lmin:.3e}, {lmax:.3e}])"
            )));
        }
        Ok(SpdMatrix { sym, spec })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        SpdMatrix::new(SymMatrix::from_rows(rows)?)
    }

    pub fn identity(dim: usize) -> Self {
        SpdMatrix {
            sym: SymMatrix::identity(dim),
            spec: SpectralDecomposition::from_parts(vec![1.0; dim], Matrix::identity(dim)),
        }
    }

    pub fn diag(values: &[f64]) -> Result<Self> {
        SpdMatrix::new(SymMatrix::diag(values))
    }

    // Builds a point straight from eigenpairs, skipping a redundant
    // eigensolve. Callers guarantee positivity; finiteness is still checked.
    fn from_eigen(mut pairs: Vec<(f64, usize)>, old_basis: &Matrix) -> Result<Self> {
        if pairs.iter().any(|(l, _)| !l.is_finite() || *l <= 0.0) {
            return Err(Error::numerical(
                "matrix function produced a non-finite or non-positive eigenvalue",
            ));
        }
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        let eigenvalues: Vec<f64> = pairs.iter().map(|(l, _)| *l).collect();
        let basis = Matrix::from_fn(old_basis.dim(), |i, j| old_basis[(i, pairs[j].1)]);
        let spec = SpectralDecomposition::from_parts(eigenvalues, basis);
        let sym = spec.apply(|l| l);
        Ok(SpdMatrix { sym, spec })
    }

    pub fn dim(&self) -> usize {
        self.sym.dim()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.sym.get(i, j)
    }

    pub fn sym(&self) -> &SymMatrix {
        &self.sym
    }

    pub fn matrix(&self) -> &Matrix {
        self.sym.matrix()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        self.spec.eigenvalues()
    }

    pub fn decomposition(&self) -> &SpectralDecomposition {
        &self.spec
    }

    /// Applies a scalar function on (0, ∞) to the spectrum: Q f(Λ) Qᵀ.
    pub fn mat_fn(&self, f: impl Fn(f64) -> f64) -> SymMatrix {
        self.spec.apply(f)
    }

    /// Principal matrix logarithm.
    pub fn log(&self) -> SymMatrix {
        self.mat_fn(f64::ln)
    }

    /// Principal power A^t for any real t.
    pub fn pow(&self, t: f64) -> Result<SpdMatrix> {
        let pairs = self
            .spec
            .eigenvalues()
            .iter()
            .enumerate()
            .map(|(i, &l)| (l.powf(t), i))
            .collect();
        SpdMatrix::from_eigen(pairs, self.spec.basis())
    }

    pub fn inverse(&self) -> Result<SpdMatrix> {
        self.pow(-1.0)
    }

    pub fn sqrt(&self) -> Result<SpdMatrix> {
        self.pow(0.5)
    }

    pub fn inv_sqrt(&self) -> Result<SpdMatrix> {
        self.pow(-0.5)
    }

    pub fn trace(&self) -> f64 {
        self.sym.trace()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.sym.frobenius_norm()
    }

    /// Largest eigenvalue (singular values coincide with eigenvalues here).
    pub fn operator_norm(&self) -> f64 {
        self.spec.max_eigenvalue()
    }

    pub fn ky_fan_norm(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.dim() {
            return Err(Error::invalid(format!(
                "ky fan index {} out of range 1..={}",
                k,
                self.dim()
            )));
        }
        let n = self.dim();
        Ok(self.spec.eigenvalues()[n - k..].iter().sum())
    }

    pub fn schatten_norm(&self, p: f64) -> Result<f64> {
        if !(p >= 1.0) {
            return Err(Error::invalid(format!("schatten exponent {p} must be >= 1")));
        }
        Ok(self
            .spec
            .eigenvalues()
            .iter()
            .map(|l| l.powf(p))
            .sum::<f64>()
            .powf(1.0 / p))
    }
}

/// Matrix exponential of a symmetric matrix; always positive definite.
pub fn mat_exp(h: &SymMatrix) -> Result<SpdMatrix> {
    let spec = sym_eig(h)?;
    let pairs = spec
        .eigenvalues()
        .iter()
        .enumerate()
        .map(|(i, &l)| (l.exp(), i))
        .collect();
    SpdMatrix::from_eigen(pairs, spec.basis())
}

/// Congruence M A Mᵀ by an invertible matrix M.
pub fn congruence(m: &Matrix, a: &SpdMatrix) -> Result<SpdMatrix> {
    if m.dim() != a.dim() {
        return Err(Error::invalid("congruence dimension mismatch"));
    }
    let gram = SymMatrix::new(&m.transpose() * m);
    let gram_spec = sym_eig(&gram)?;
    let smin = gram_spec.min_eigenvalue();
    let smax = gram_spec.max_eigenvalue();
    if !(smax > 0.0) || smin <= (SPD_EIGENVALUE_FLOOR * SPD_EIGENVALUE_FLOOR) * smax {
        return Err(Error::invalid("congruence by a singular matrix"));
    }
    let product = &(m * a.matrix()) * &m.transpose();
    SpdMatrix::new(SymMatrix::new(product))
}

/// Recenters A at X: X^{-1/2} A X^{-1/2}. The recentered barycenter of a
/// measure pushed forward this way sits at the identity.
pub fn recenter(x: &SpdMatrix, a: &SpdMatrix) -> Result<SpdMatrix> {
    if x.dim() != a.dim() {
        return Err(Error::invalid("recenter dimension mismatch"));
    }
    let xi = x.inv_sqrt()?;
    let product = &(xi.matrix() * a.matrix()) * xi.matrix();
    SpdMatrix::new(SymMatrix::new(product))
}

/// Weighted geometric mean A^{1/2} (A^{-1/2} B A^{-1/2})^t A^{1/2}, defined
/// for every real t; restricted to t ∈ [0,1] it is the geodesic from A to B.
pub fn geodesic(a: &SpdMatrix, b: &SpdMatrix, t: f64) -> Result<SpdMatrix> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("geodesic dimension mismatch"));
    }
    let s = a.sqrt()?;
    let inner = recenter(a, b)?.pow(t)?;
    let product = &(s.matrix() * inner.matrix()) * s.matrix();
    SpdMatrix::new(SymMatrix::new(product))
}

/// Riemannian trace-metric distance ‖log A^{-1/2} B A^{-1/2}‖_F.
pub fn riem_dist(a: &SpdMatrix, b: &SpdMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("distance dimension mismatch"));
    }
    Ok(recenter(a, b)?.log().frobenius_norm())
}

/// Loewner comparison A ≤ B up to `slack`: the smallest eigenvalue of B − A
/// must be at least −slack.
pub fn loewner_leq(a: &SpdMatrix, b: &SpdMatrix, slack: f64) -> Result<bool> {
    if a.dim() != b.dim() {
        return Err(Error::invalid("loewner comparison dimension mismatch"));
    }
    let diff = b.sym() - a.sym();
    let spec = sym_eig(&diff)?;
    Ok(spec.min_eigenvalue() >= -slack)
}
