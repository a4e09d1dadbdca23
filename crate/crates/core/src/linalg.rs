//! Small dense complex matrices and a symmetric tridiagonal eigensolver.
//!
//! Every Hamiltonian the dynamics module touches is real, symmetric and
//! tridiagonal in the walk basis, so a single implicit-QL routine covers
//! propagation, gap scans and norm estimates.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Index, IndexMut, Mul};

use num_complex::Complex64;
#[allow(unused_imports)] // inherent methods shadow these when std is linked
use num_traits::Float;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[&[Complex64]]) -> Self {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            assert_eq!(row.len(), dim, "matrix rows must be square");
            data.extend_from_slice(row);
        }
        Self { dim, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.dim);
        for r in 0..self.dim {
            for c in 0..self.dim {
                out[(c, r)] = self[(r, c)].conj();
            }
        }
        out
    }

    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|r| {
                let row = &self.data[r * self.dim..(r + 1) * self.dim];
                row.iter().zip(v).map(|(a, b)| a * b).sum()
            })
            .collect()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn scale(&self, k: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|v| v * k).collect(),
        }
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let gram = &self.adjoint() * self;
        gram.max_abs_diff(&CMatrix::identity(self.dim)) <= tol
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut out = CMatrix::identity(self.dim);
        for _ in 0..exp {
            out = &out * self;
        }
        out
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    #[inline]
    fn index(&self, (r, c): (usize, usize)) -> &Complex64 {
        &self.data[r * self.dim + c]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Complex64 {
        &mut self.data[r * self.dim + c]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;

    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let n = self.dim;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

/// Real symmetric tridiagonal matrix: `diag` has length `n`, `off` has
/// length `n - 1` with `off[i]` coupling rows `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

/// Eigenpairs sorted by ascending eigenvalue. Eigenvector `k` is column `k`
/// of the row-major `vectors` buffer.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    pub values: Vec<f64>,
    vectors: Vec<f64>,
    dim: usize,
}

impl SpectralDecomposition {
    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Component `row` of eigenvector `k`.
    #[inline]
    pub fn vector_entry(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.dim + k]
    }

    pub fn vector(&self, k: usize) -> Vec<f64> {
        (0..self.dim).map(|r| self.vector_entry(r, k)).collect()
    }

    /// `exp(-i H t) x` with `H` reconstructed from the eigenpairs.
    pub fn evolve(&self, x: &[Complex64], t: f64) -> Vec<Complex64> {
        let n = self.dim;
        assert_eq!(x.len(), n);
        let mut coeffs = vec![ZERO; n];
        for (r, &xr) in x.iter().enumerate() {
            if xr == ZERO {
                continue;
            }
            let row = &self.vectors[r * n..(r + 1) * n];
            for (c, &v) in coeffs.iter_mut().zip(row) {
                *c += xr * v;
            }
        }
        for (c, &lambda) in coeffs.iter_mut().zip(&self.values) {
            *c *= Complex64::from_polar(1.0, -lambda * t);
        }
        (0..n)
            .map(|r| {
                let row = &self.vectors[r * n..(r + 1) * n];
                row.iter().zip(&coeffs).map(|(&v, c)| c * v).sum()
            })
            .collect()
    }

    /// `<target| exp(-i H t) |source>` for basis vectors, in O(n).
    pub fn transition_amplitude(&self, source: usize, target: usize, t: f64) -> Complex64 {
        (0..self.dim)
            .map(|k| {
                let w = self.vector_entry(target, k) * self.vector_entry(source, k);
                Complex64::from_polar(w, -self.values[k] * t)
            })
            .sum()
    }
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::Degenerate("empty tridiagonal matrix"));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                found: off.len(),
            });
        }
        Ok(Self { diag, off })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = x[i] * self.diag[i];
                if i > 0 {
                    acc += x[i - 1] * self.off[i - 1];
                }
                if i + 1 < n {
                    acc += x[i + 1] * self.off[i];
                }
                acc
            })
            .collect()
    }

    pub fn apply_real(&self, x: &[f64]) -> Vec<f64> {
        let n = self.dim();
        (0..n)
            .map(|i| {
                let mut acc = x[i] * self.diag[i];
                if i > 0 {
                    acc += x[i - 1] * self.off[i - 1];
                }
                if i + 1 < n {
                    acc += x[i + 1] * self.off[i];
                }
                acc
            })
            .collect()
    }

    /// Linear combination `a * self + b * other`.
    pub fn combine(&self, a: f64, other: &SymTridiagonal, b: f64) -> SymTridiagonal {
        assert_eq!(self.dim(), other.dim());
        SymTridiagonal {
            diag: self.diag.iter().zip(&other.diag).map(|(x, y)| a * x + b * y).collect(),
            off: self.off.iter().zip(&other.off).map(|(x, y)| a * x + b * y).collect(),
        }
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut d = self.diag.clone();
        let mut e = self.padded_off();
        tql_implicit(&mut d, &mut e, None)?;
        d.sort_by(f64::total_cmp);
        Ok(d)
    }

    pub fn eigen(&self) -> Result<SpectralDecomposition> {
        let n = self.dim();
        let mut d = self.diag.clone();
        let mut e = self.padded_off();
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }
        tql_implicit(&mut d, &mut e, Some(&mut z))?;

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let values = order.iter().map(|&k| d[k]).collect();
        let mut vectors = vec![0.0; n * n];
        for r in 0..n {
            for (new_k, &old_k) in order.iter().enumerate() {
                vectors[r * n + new_k] = z[r * n + old_k];
            }
        }
        Ok(SpectralDecomposition {
            values,
            vectors,
            dim: n,
        })
    }

    /// Spectral norm, i.e. the largest eigenvalue modulus.
    pub fn spectral_norm(&self) -> Result<f64> {
        let ev = self.eigenvalues()?;
        Ok(ev.iter().fold(0.0, |m, v| m.max(v.abs())))
    }

    fn padded_off(&self) -> Vec<f64> {
        let mut e = self.off.clone();
        e.push(0.0);
        e
    }
}

/// Implicit QL with Wilkinson shifts on a symmetric tridiagonal matrix.
/// `d` holds the diagonal and is overwritten with eigenvalues (unsorted);
/// `e[i]` couples `i` and `i + 1` and is destroyed. When `z` is supplied
/// (row-major, initialised to the identity) its columns accumulate the
/// eigenvectors.
fn tql_implicit(d: &mut [f64], e: &mut [f64], mut z: Option<&mut [f64]>) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iterations += 1;
            if iterations > 60 {
                return Err(Error::NoConvergence);
            }

            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                if let Some(z) = z.as_deref_mut() {
                    for k in 0..n {
                        let row = k * n;
                        let zf = z[row + i + 1];
                        z[row + i + 1] = s * z[row + i] + c * zf;
                        z[row + i] = c * z[row + i] - s * zf;
                    }
                }
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}
