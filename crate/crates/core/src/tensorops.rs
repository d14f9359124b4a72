//! Dense complex matrices on tensor powers `V^{(x)n}` and the operations the
//! rest of the crate is built on: Kronecker products, partial traces over
//! trailing factors, embeddings of local operators, and the trace inner
//! product.
//!
//! Multi-indices are lexicographic with the first tensor factor most
//! significant, so the basis vector `v_{i1} (x) ... (x) v_{in}` sits at
//! position `((i1 * d + i2) * d + ...) + in` (zero based).

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{cre, Real, C};

/// Square matrix of complex scalars stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if dim == 0 || data.len() != dim * dim {
            return Err(Error::Shape {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![C::zero(); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = C::one();
        }
        m
    }

    pub fn from_diag(diag: &[C<T>]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &z) in diag.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<C<T>>>) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::Shape {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend(row);
        }
        Self::new(dim, data)
    }

    /// Direct sum `a (+) b` as a block-diagonal matrix.
    pub fn direct_sum(a: &Self, b: &Self) -> Self {
        let dim = a.dim + b.dim;
        let mut m = Self::zeros(dim);
        for i in 0..a.dim {
            for j in 0..a.dim {
                m[(i, j)] = a[(i, j)];
            }
        }
        for i in 0..b.dim {
            for j in 0..b.dim {
                m[(a.dim + i, a.dim + j)] = b[(i, j)];
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C<T>] {
        &self.data
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> C<T> {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    /// Conjugate transpose.
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        m
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::Shape {
                expected: self.dim,
                found: other.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for l in 0..n {
                let a = self.data[i * n + l];
                if a.is_zero() {
                    continue;
                }
                let b_row = &other.data[l * n..(l + 1) * n];
                for (o, &b) in out_row.iter_mut().zip(b_row) {
                    *o = *o + a * b;
                }
            }
        }
        Ok(out)
    }

    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), T::max)
    }

    /// Largest entrywise absolute difference; infinite when the dimensions differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.dim != other.dim {
            return T::infinity();
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max)
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) < tol
    }

    pub fn is_identity(&self, tol: T) -> bool {
        self.approx_eq(&Self::identity(self.dim), tol)
    }

    /// `max |A^dagger A - I|`
    pub fn unitarity_residual(&self) -> T {
        // dagger * self cannot fail: same dimension
        self.dagger()
            .matmul(self)
            .map(|p| p.max_abs_diff(&Self::identity(self.dim)))
            .unwrap_or_else(|_| T::infinity())
    }

    pub fn inverse(&self) -> Result<Self> {
        self.inverse_with_tol(T::default_tolerance())
    }

    /// Gauss-Jordan inverse with partial pivoting. Fails when the residual
    /// `max |A A^{-1} - I|` is not below `tol`.
    pub fn inverse_with_tol(&self, tol: T) -> Result<Self> {
        let n = self.dim;
        let mut a = self.data.clone();
        let mut inv = Self::identity(n).data;
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&x, &y| {
                    a[x * n + col]
                        .norm()
                        .partial_cmp(&a[y * n + col].norm())
                        .unwrap_or(std::cmp::Ordering::Equal)
                })
                .unwrap_or(col);
            let p = a[pivot * n + col];
            if p.norm() == T::zero() || !p.norm().is_finite() {
                return Err(Error::Singular {
                    residual: f64::INFINITY,
                });
            }
            if pivot != col {
                for j in 0..n {
                    a.swap(pivot * n + j, col * n + j);
                    inv.swap(pivot * n + j, col * n + j);
                }
            }
            let p_inv = p.inv();
            for j in 0..n {
                a[col * n + j] = a[col * n + j] * p_inv;
                inv[col * n + j] = inv[col * n + j] * p_inv;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a[row * n + col];
                if factor.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let (ac, ic) = (a[col * n + j], inv[col * n + j]);
                    a[row * n + j] = a[row * n + j] - factor * ac;
                    inv[row * n + j] = inv[row * n + j] - factor * ic;
                }
            }
        }
        let inv = Self { dim: n, data: inv };
        let residual = self.matmul(&inv)?.max_abs_diff(&Self::identity(n));
        if residual.is_nan() || residual >= tol {
            return Err(Error::Singular {
                residual: residual.to_f64().unwrap_or(f64::INFINITY),
            });
        }
        Ok(inv)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;

    fn index(&self, (r, c): (usize, usize)) -> &C<T> {
        &self.data[r * self.dim + c]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C<T> {
        &mut self.data[r * self.dim + c]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    /// Panics on dimension mismatch; use [`ComplexMatrix::matmul`] to get an error instead.
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs).expect("matrix dimensions agree")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions agree");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a + *b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "matrix dimensions agree");
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| *a - *b).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for row in self.data.chunks(self.dim.max(1)) {
            writeln!(f, "  {row:?}")?;
        }
        write!(f, "]")
    }
}

/// `d` is the dimension of `V`, `n` the number of tensor factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TensorShape {
    pub d: usize,
    pub n: usize,
}

impl TensorShape {
    pub fn new(d: usize, n: usize) -> Self {
        assert!(d >= 1 && n >= 1, "tensor shape needs d >= 1 and n >= 1");
        Self { d, n }
    }

    pub fn dim(&self) -> usize {
        self.d.pow(self.n as u32)
    }

    pub fn check<T: Real>(&self, f: &ComplexMatrix<T>) -> Result<()> {
        if f.dim() != self.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                found: f.dim(),
            });
        }
        Ok(())
    }
}

/// Number of tensor factors `k` with `d^k = dim`, if `dim` is a power of `d`.
pub fn factor_count(d: usize, dim: usize) -> Option<usize> {
    if d < 2 {
        return (dim == 1 && d == 1).then_some(1);
    }
    let mut k = 0;
    let mut p = 1usize;
    while p < dim {
        p *= d;
        k += 1;
    }
    (p == dim && k >= 1).then_some(k)
}

/// Kronecker product; entry `((i1 i2), (j1 j2))` is `a[i1, j1] * b[i2, j2]`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = ComplexMatrix::zeros(n);
    for i1 in 0..na {
        for j1 in 0..na {
            let x = a[(i1, j1)];
            if x.is_zero() {
                continue;
            }
            for i2 in 0..nb {
                for j2 in 0..nb {
                    out[(i1 * nb + i2, j1 * nb + j2)] = x * b[(i2, j2)];
                }
            }
        }
    }
    out
}

/// Kronecker product of a sequence of matrices, left to right.
pub fn kron_all<'a, T: Real>(
    factors: impl IntoIterator<Item = &'a ComplexMatrix<T>>,
) -> ComplexMatrix<T> {
    factors
        .into_iter()
        .fold(ComplexMatrix::identity(1), |acc, f| kron(&acc, f))
}

/// Operator trace over the last `m` tensor factors of `f in End(V^{(x)n})`,
/// landing in `End(V^{(x)(n-m)})`.
pub fn partial_trace<T: Real>(
    f: &ComplexMatrix<T>,
    shape: TensorShape,
    m: usize,
) -> Result<ComplexMatrix<T>> {
    shape.check(f)?;
    if m >= shape.n {
        return Err(Error::InvalidPartialTrace { m, n: shape.n });
    }
    let q = shape.d.pow(m as u32);
    let outer = shape.d.pow((shape.n - m) as u32);
    let mut out = ComplexMatrix::zeros(outer);
    for j in 0..outer {
        for i in 0..outer {
            out[(j, i)] = (0..q).map(|l| f[(j * q + l, i * q + l)]).sum();
        }
    }
    Ok(out)
}

/// `<f, g> = tr(f^dagger g)`
pub fn trace_inner<T: Real>(f: &ComplexMatrix<T>, g: &ComplexMatrix<T>) -> Result<C<T>> {
    if f.dim() != g.dim() {
        return Err(Error::Shape {
            expected: f.dim(),
            found: g.dim(),
        });
    }
    Ok(f.as_slice()
        .iter()
        .zip(g.as_slice())
        .map(|(a, b)| a.conj() * *b)
        .sum())
}

/// `I^{(x)(p-1)} (x) f (x) I^{(x)rest}` on `V^{(x)n}`, where `f` acts on the
/// contiguous factors `p ..= p+k-1` (1-based) and `d^k = f.dim()`.
pub fn tensor_embed<T: Real>(
    f: &ComplexMatrix<T>,
    position: usize,
    shape: TensorShape,
) -> Result<ComplexMatrix<T>> {
    let k = factor_count(shape.d, f.dim()).ok_or(Error::Shape {
        expected: shape.d,
        found: f.dim(),
    })?;
    if position == 0 || position + k - 1 > shape.n {
        return Err(Error::Shape {
            expected: shape.n,
            found: position + k - 1,
        });
    }
    let high = shape.d.pow((position - 1) as u32);
    let low = shape.d.pow((shape.n - position + 1 - k) as u32);
    let block = f.dim();
    let mut out = ComplexMatrix::zeros(shape.dim());
    for h in 0..high {
        for r in 0..block {
            for c in 0..block {
                let v = f[(r, c)];
                if v.is_zero() {
                    continue;
                }
                for l in 0..low {
                    out[((h * block + r) * low + l, (h * block + c) * low + l)] = v;
                }
            }
        }
    }
    Ok(out)
}

/// Column-sparse copy of an operator on `k` factors, applied in place of its
/// dense embedding into a larger tensor power.
#[derive(Clone, Debug)]
pub struct LocalOperator<T> {
    d: usize,
    k: usize,
    /// For each input basis index, the nonzero `(output index, value)` pairs.
    cols: Vec<Vec<(usize, C<T>)>>,
}

impl<T: Real> LocalOperator<T> {
    /// Entries with magnitude at or below `machine epsilon * max |f|` are dropped.
    pub fn from_matrix(f: &ComplexMatrix<T>, d: usize) -> Result<Self> {
        let k = factor_count(d, f.dim()).ok_or(Error::Shape {
            expected: d,
            found: f.dim(),
        })?;
        let cutoff = T::epsilon() * f.max_abs();
        let cols = (0..f.dim())
            .map(|c| {
                (0..f.dim())
                    .filter_map(|r| {
                        let v = f[(r, c)];
                        (v.norm() > cutoff).then_some((r, v))
                    })
                    .collect()
            })
            .collect();
        Ok(Self { d, k, cols })
    }

    pub fn factors(&self) -> usize {
        self.k
    }

    /// `output = (I (x) f (x) I) input` with `f` starting at zero-based factor
    /// `offset` of a `total`-factor space. `output` is overwritten.
    pub fn apply(&self, input: &[C<T>], output: &mut [C<T>], offset: usize, total: usize) {
        debug_assert!(offset + self.k <= total);
        let block = self.cols.len();
        let high = self.d.pow(offset as u32);
        let low = self.d.pow((total - offset - self.k) as u32);
        debug_assert_eq!(input.len(), high * block * low);
        output.iter_mut().for_each(|z| *z = C::zero());
        for h in 0..high {
            let base = h * block * low;
            for (c, col) in self.cols.iter().enumerate() {
                let src = &input[base + c * low..base + (c + 1) * low];
                if src.iter().all(|z| z.is_zero()) {
                    continue;
                }
                for &(r, v) in col {
                    let dst = &mut output[base + r * low..base + (r + 1) * low];
                    for (o, &x) in dst.iter_mut().zip(src) {
                        *o = *o + v * x;
                    }
                }
            }
        }
    }
}

/// `mu^{(x)p}`
pub fn tensor_power<T: Real>(mu: &ComplexMatrix<T>, p: usize) -> ComplexMatrix<T> {
    kron_all(std::iter::repeat_n(mu, p))
}

#[allow(dead_code)]
pub(crate) fn real_matrix<T: Real>(rows: &[&[f64]]) -> ComplexMatrix<T> {
    ComplexMatrix::from_rows(
        rows.iter()
            .map(|r| r.iter().map(|&x| cre(T::lit(x))).collect())
            .collect(),
    )
    .expect("square rows")
}
