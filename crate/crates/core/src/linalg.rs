//! Small dense helpers: the canonical complex structure, exact rational
//! matrices, and numerical rank / spectrum utilities.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::number::Rational;

/// Canonical complex structure `J0 = ⊕ [[0,-1],[1,0]]` in the interleaved
/// coordinates `(x1, y1, x2, y2, ...)`.
pub fn j0(dim2n: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(dim2n, dim2n);
    for b in 0..dim2n / 2 {
        j[(2 * b, 2 * b + 1)] = -1.0;
        j[(2 * b + 1, 2 * b)] = 1.0;
    }
    j
}

pub fn rotation2(phi: f64) -> DMatrix<f64> {
    let (s, c) = phi.sin_cos();
    DMatrix::from_row_slice(2, 2, &[c, -s, s, c])
}

/// `exp(-eps J0 t)` on all blocks, i.e. a uniform negative rotation.
pub fn uniform_rotation(dim2n: usize, phi: f64) -> DMatrix<f64> {
    let r = rotation2(phi);
    block_diag(&vec![r; dim2n / 2])
}

pub fn block_diag(blocks: &[DMatrix<f64>]) -> DMatrix<f64> {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = DMatrix::zeros(n, n);
    let mut o = 0;
    for b in blocks {
        let k = b.nrows();
        m.view_mut((o, o), (k, k)).copy_from(b);
        o += k;
    }
    m
}

/// Symplectic inverse `M^{-1} = -J0 M^T J0`.
pub fn symplectic_inverse(m: &DMatrix<f64>) -> DMatrix<f64> {
    let j = j0(m.nrows());
    -(&j * m.transpose() * &j)
}

/// Numerical dimension of the kernel, thresholding singular values at
/// `tol * max(1, ||m||)`.
pub fn kernel_dim(m: &DMatrix<f64>, tol: f64) -> usize {
    let scale = m.norm().max(1.0);
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().filter(|s| **s <= tol * scale).count()
}

pub fn complex_kernel_dim(m: &DMatrix<Complex64>, tol: f64) -> usize {
    let scale = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt().max(1.0);
    let sv = m.clone().svd(false, false).singular_values;
    sv.iter().filter(|s| **s <= tol * scale).count()
}

pub fn to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Eigenvalues of a real square matrix.
pub fn eigenvalues(m: &DMatrix<f64>) -> Vec<Complex64> {
    m.complex_eigenvalues().iter().cloned().collect()
}

/// Eigenvalues of a complex square matrix via its Schur form.
pub fn complex_eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let schur = nalgebra::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    (0..t.nrows()).map(|i| t[(i, i)]).collect()
}

/// Dense matrix over exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::Structural("ragged matrix rows".into()));
        }
        Ok(RationalMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn diag(entries: &[Rational]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, e) in entries.iter().enumerate() {
            m[(i, i)] = *e;
        }
        m
    }

    pub fn j0(dim2n: usize) -> Self {
        let mut j = Self::zeros(dim2n, dim2n);
        for b in 0..dim2n / 2 {
            j[(2 * b, 2 * b + 1)] = -Rational::one();
            j[(2 * b + 1, 2 * b)] = Rational::one();
        }
        j
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.rows);
        let mut p = Self::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..o.cols {
                    p[(i, j)] += a * o[(k, j)];
                }
            }
        }
        p
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut d = self.clone();
        for (a, b) in d.data.iter_mut().zip(&o.data) {
            *a -= *b;
        }
        d
    }

    pub fn block_diag(blocks: &[RationalMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let mut m = Self::zeros(n, n);
        let mut o = 0;
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    m[(o + i, o + j)] = b[(i, j)];
                }
            }
            o += b.rows;
        }
        m
    }

    pub fn max_abs(&self) -> Rational {
        self.data
            .iter()
            .map(|x| x.abs())
            .max()
            .unwrap_or_else(Rational::zero)
    }

    /// Exact rank by Gaussian elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        for col in 0..a.cols {
            let Some(piv) = (rank..a.rows).find(|&r| !a[(r, col)].is_zero()) else {
                continue;
            };
            for j in 0..a.cols {
                a.data.swap(piv * a.cols + j, rank * a.cols + j);
            }
            let p = a[(rank, col)];
            for r in 0..a.rows {
                if r != rank && !a[(r, col)].is_zero() {
                    let f = a[(r, col)] / p;
                    for j in col..a.cols {
                        let v = a[(rank, j)];
                        a[(r, j)] -= f * v;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        use num_traits::ToPrimitive;
        DMatrix::from_fn(self.rows, self.cols, |i, j| {
            self[(i, j)].to_f64().unwrap_or(f64::NAN)
        })
    }
}

impl std::ops::Index<(usize, usize)> for RationalMatrix {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RationalMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        &mut self.data[i * self.cols + j]
    }
}

/// Solution set of an exact linear system `A x = b`.
#[derive(Debug, Clone)]
pub struct AffineSolution {
    pub particular: Vec<Rational>,
    /// Basis of the null space, one vector per free column.
    pub null_basis: Vec<Vec<Rational>>,
    pub free_columns: Vec<usize>,
}

/// Solve an (over- or under-determined) system exactly. Returns `None` when
/// the system is inconsistent.
pub fn solve_exact(a: &RationalMatrix, b: &[Rational]) -> Option<AffineSolution> {
    let (rows, cols) = (a.nrows(), a.ncols());
    let mut m = RationalMatrix::zeros(rows, cols + 1);
    for i in 0..rows {
        for j in 0..cols {
            m[(i, j)] = a[(i, j)];
        }
        m[(i, cols)] = b[i];
    }
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
            continue;
        };
        for j in 0..=cols {
            let (x, y) = (m[(piv, j)], m[(r, j)]);
            m[(piv, j)] = y;
            m[(r, j)] = x;
        }
        let p = m[(r, c)];
        for j in 0..=cols {
            m[(r, j)] /= p;
        }
        for i in 0..rows {
            if i != r && !m[(i, c)].is_zero() {
                let f = m[(i, c)];
                for j in 0..=cols {
                    let v = m[(r, j)];
                    m[(i, j)] -= f * v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    if (r..rows).any(|i| !m[(i, cols)].is_zero()) {
        return None;
    }
    let mut particular = vec![Rational::zero(); cols];
    for (i, &c) in pivots.iter().enumerate() {
        particular[c] = m[(i, cols)];
    }
    let free_columns: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let null_basis = free_columns
        .iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); cols];
            v[f] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = -m[(i, f)];
            }
            v
        })
        .collect();
    Some(AffineSolution {
        particular,
        null_basis,
        free_columns,
    })
}

pub fn frobenius_distance(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).norm()
}

pub fn column(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}
