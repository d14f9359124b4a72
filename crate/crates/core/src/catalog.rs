//! Generalized Yang-Baxter operators: the known (2,3,1) families, the (2,3,2)
//! operator, user supplied matrices, and residual checks for the defining
//! equations.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{c, cis, cre, Real, C};
use crate::tensorops::{kron, ComplexMatrix, TensorShape};

/// Type triple `(d, k, m)`: `R` acts on `V^{(x)k}`, `dim V = d`, and adjacent
/// generators are shifted by `m` factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GybType {
    pub d: usize,
    pub k: usize,
    pub m: usize,
}

impl GybType {
    pub fn new(d: usize, k: usize, m: usize) -> Result<Self> {
        let reason = if d == 0 || k == 0 || m == 0 {
            Some("all entries must be positive")
        } else if m >= k {
            Some("need m < k")
        } else {
            None
        };
        match reason {
            Some(reason) => Err(Error::InvalidType { d, k, m, reason }),
            None => Ok(Self { d, k, m }),
        }
    }

    pub fn operator_dim(&self) -> usize {
        self.d.pow(self.k as u32)
    }
}

impl fmt::Display for GybType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.d, self.k, self.m)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OperatorId {
    Type1,
    Type2,
    Type3,
    R232,
    Custom,
}

impl OperatorId {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Type1 => "type1",
            Self::Type2 => "type2",
            Self::Type3 => "type3",
            Self::R232 => "r232",
            Self::Custom => "custom",
        }
    }
}

impl fmt::Display for OperatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct GybOperator<T> {
    gtype: GybType,
    r: ComplexMatrix<T>,
    r_inv: ComplexMatrix<T>,
    id: OperatorId,
    theta: Option<T>,
}

impl<T: Real> GybOperator<T> {
    pub fn gtype(&self) -> GybType {
        self.gtype
    }

    pub fn r(&self) -> &ComplexMatrix<T> {
        &self.r
    }

    pub fn r_inv(&self) -> &ComplexMatrix<T> {
        &self.r_inv
    }

    pub fn id(&self) -> OperatorId {
        self.id
    }

    pub fn theta(&self) -> Option<T> {
        self.theta
    }

    /// `R` or `R^{-1}` by sign.
    pub fn power(&self, sign: i32) -> &ComplexMatrix<T> {
        if sign < 0 {
            &self.r_inv
        } else {
            &self.r
        }
    }

    pub fn type1(theta: T) -> Self {
        warn_theta(theta);
        let (i, e1, e2) = (C::i(), cis(theta), cis(theta + theta));
        let (one, zero) = (C::one(), C::zero());
        let a = [
            [one, zero, one, zero],
            [zero, i, zero, e1],
            [-i, zero, i, zero],
            [zero, -i * e1.conj(), zero, one],
        ];
        let b = [
            [i, zero, e1, zero],
            [zero, one, zero, -e2],
            [-i * e1.conj(), zero, one, zero],
            [zero, i * e2.conj(), zero, i],
        ];
        Self::from_blocks(a, b, OperatorId::Type1, theta)
    }

    pub fn type2(theta: T) -> Self {
        warn_theta(theta);
        let (i, e1, e2) = (C::i(), cis(theta), cis(theta + theta));
        let (one, zero) = (C::one(), C::zero());
        let a = [
            [one, zero, one, zero],
            [zero, i, zero, e1],
            [-one, zero, one, zero],
            [zero, e1.conj(), zero, i],
        ];
        let b = [
            [i, zero, e1, zero],
            [zero, one, zero, -e2],
            [e1.conj(), zero, i, zero],
            [zero, e2.conj(), zero, one],
        ];
        Self::from_blocks(a, b, OperatorId::Type2, theta)
    }

    pub fn type3(theta: T) -> Self {
        warn_theta(theta);
        let (e1, e2) = (cis(theta), cis(theta + theta));
        let (one, zero) = (C::one(), C::zero());
        let a = [
            [one, zero, one, zero],
            [zero, one, zero, e1],
            [-one, zero, one, zero],
            [zero, -e1.conj(), zero, one],
        ];
        let b = [
            [one, zero, -e1, zero],
            [zero, one, zero, -e2],
            [e1.conj(), zero, one, zero],
            [zero, e2.conj(), zero, one],
        ];
        Self::from_blocks(a, b, OperatorId::Type3, theta)
    }

    /// `(1/sqrt 2) [[I, J], [-J, I]]` with `J` the 4x4 anti-diagonal involution.
    pub fn r232() -> Self {
        let s = T::FRAC_1_SQRT_2();
        let mut r = ComplexMatrix::zeros(8);
        for i in 0..4 {
            r[(i, i)] = cre(s);
            r[(4 + i, 4 + i)] = cre(s);
            r[(i, 4 + 3 - i)] = cre(s);
            r[(4 + i, 3 - i)] = cre(-s);
        }
        let r_inv = r.dagger();
        Self {
            gtype: GybType { d: 2, k: 3, m: 2 },
            r,
            r_inv,
            id: OperatorId::R232,
            theta: None,
        }
    }

    /// Block `a` acts on the basis vectors with first index 1, block `b` on
    /// those with first index 2 (lexicographic order).
    fn from_blocks(a: [[C<T>; 4]; 4], b: [[C<T>; 4]; 4], id: OperatorId, theta: T) -> Self {
        let s = cre(T::FRAC_1_SQRT_2());
        let to_matrix = |blk: [[C<T>; 4]; 4]| {
            ComplexMatrix::from_rows(blk.iter().map(|row| row.iter().map(|&z| z * s).collect()).collect())
                .expect("4x4 block")
        };
        let r = ComplexMatrix::direct_sum(&to_matrix(a), &to_matrix(b));
        // catalog operators are unitary
        let r_inv = r.dagger();
        Self {
            gtype: GybType { d: 2, k: 3, m: 1 },
            r,
            r_inv,
            id,
            theta: Some(theta),
        }
    }

    /// Catalog operator by name; `theta` is ignored for `r232`.
    pub fn catalog(id: OperatorId, theta: T) -> Option<Self> {
        match id {
            OperatorId::Type1 => Some(Self::type1(theta)),
            OperatorId::Type2 => Some(Self::type2(theta)),
            OperatorId::Type3 => Some(Self::type3(theta)),
            OperatorId::R232 => Some(Self::r232()),
            OperatorId::Custom => None,
        }
    }

    /// Wraps an arbitrary invertible matrix. Only invertibility is checked;
    /// the braid equations are left to [`verify_gybe`] and
    /// [`verify_far_commutativity`].
    pub fn custom(r: ComplexMatrix<T>, gtype: GybType) -> Result<Self> {
        Self::custom_with_tol(r, gtype, T::default_tolerance())
    }

    pub fn custom_with_tol(r: ComplexMatrix<T>, gtype: GybType, tol: T) -> Result<Self> {
        TensorShape::new(gtype.d, gtype.k).check(&r)?;
        let r_inv = r.inverse_with_tol(tol)?;
        Ok(Self {
            gtype,
            r,
            r_inv,
            id: OperatorId::Custom,
            theta: None,
        })
    }

    /// Same matrix, different claimed type. Fails if the dimension no longer fits.
    pub fn relabeled(&self, gtype: GybType) -> Result<Self> {
        TensorShape::new(gtype.d, gtype.k).check(&self.r)?;
        Ok(Self {
            gtype,
            id: OperatorId::Custom,
            theta: None,
            ..self.clone()
        })
    }
}

fn warn_theta<T: Real>(theta: T) {
    if theta < T::zero() || theta > T::PI() {
        log::warn!("theta = {theta} lies outside [0, pi]; the matrix is still well defined");
    }
}

/// Max-entry residual of `(R (x) I_m)(I_m (x) R)(R (x) I_m) - (I_m (x) R)(R (x) I_m)(I_m (x) R)`.
pub fn verify_gybe<T: Real>(op: &GybOperator<T>) -> T {
    let GybType { d, m, .. } = op.gtype;
    let id_m = ComplexMatrix::identity(d.pow(m as u32));
    let left = kron(&op.r, &id_m);
    let right = kron(&id_m, &op.r);
    let lhs = &(&left * &right) * &left;
    let rhs = &(&right * &left) * &right;
    lhs.max_abs_diff(&rhs)
}

/// Max residual of the far-commutativity relations
/// `(R (x) I_m^{(x)(j-2)})(I_m^{(x)(j-2)} (x) R) = (I_m^{(x)(j-2)} (x) R)(R (x) I_m^{(x)(j-2)})`
/// over the `j >= 4` for which the two copies of `R` still share a factor.
/// Copies with disjoint supports commute, so those `j` are skipped.
pub fn verify_far_commutativity<T: Real>(op: &GybOperator<T>) -> T {
    let GybType { d, k, m } = op.gtype;
    let mut worst = T::zero();
    let mut j = 4;
    while m * (j - 2) < k {
        let id = ComplexMatrix::identity(d.pow((m * (j - 2)) as u32));
        let left = kron(&op.r, &id);
        let right = kron(&id, &op.r);
        let res = (&left * &right).max_abs_diff(&(&right * &left));
        worst = worst.max(res);
        j += 1;
    }
    worst
}

pub fn unitarity_residual<T: Real>(op: &GybOperator<T>) -> T {
    op.r.unitarity_residual()
}

/// `max |R R^{-1} - I|`
pub fn inverse_residual<T: Real>(op: &GybOperator<T>) -> T {
    (&op.r * &op.r_inv).max_abs_diff(&ComplexMatrix::identity(op.r.dim()))
}

/// Whether `R` and `R^{-1}` preserve the first and the last tensor index:
/// `R^{j1..jk}_{i1..ik} = 0` unless `i1 = j1` and `ik = jk`. Needs `m = 1`.
pub fn check_outer_diagonal<T: Real>(op: &GybOperator<T>, tol: T) -> Result<bool> {
    let GybType { d, k, m } = op.gtype;
    if m != 1 || k < 2 {
        return Err(Error::WrongOperator {
            expected: "an operator of type (d,k,1)".into(),
            found: format!("type {}", op.gtype),
        });
    }
    let dim = op.r.dim();
    let head = d.pow((k - 1) as u32);
    let ok = |f: &ComplexMatrix<T>| {
        (0..dim).all(|row| {
            (0..dim).all(|col| {
                let same = row / head == col / head && row % d == col % d;
                same || f[(row, col)].norm() < tol
            })
        })
    };
    Ok(ok(&op.r) && ok(&op.r_inv))
}

/// Parses the text matrix format: a header line `d k m`, then `d^k` rows of
/// `d^k` whitespace separated complex entries such as `0.5-1.2i`.
pub fn parse_matrix_file<T: Real>(text: &str) -> Result<(GybType, ComplexMatrix<T>)> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::MatrixFormat("missing `d k m` header".into()))?;
    let nums: Vec<usize> = header
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::MatrixFormat(format!("bad header token {t:?}"))))
        .collect::<Result<_>>()?;
    let [d, k, m] = nums[..] else {
        return Err(Error::MatrixFormat(format!(
            "header needs 3 integers, found {}",
            nums.len()
        )));
    };
    let gtype = GybType::new(d, k, m)?;
    let dim = gtype.operator_dim();
    let mut rows = Vec::with_capacity(dim);
    for (i, line) in lines.enumerate() {
        let row: Vec<C<T>> = line
            .split_whitespace()
            .map(|t| parse_complex(t).ok_or_else(|| Error::MatrixFormat(format!("row {}: bad entry {t:?}", i + 1))))
            .collect::<Result<_>>()?;
        if row.len() != dim {
            return Err(Error::MatrixFormat(format!(
                "row {} has {} entries, expected {dim}",
                i + 1,
                row.len()
            )));
        }
        rows.push(row);
    }
    if rows.len() != dim {
        return Err(Error::MatrixFormat(format!(
            "found {} rows, expected {dim}",
            rows.len()
        )));
    }
    Ok((gtype, ComplexMatrix::from_rows(rows)?))
}

pub fn format_matrix_file<T: Real>(gtype: GybType, r: &ComplexMatrix<T>) -> String {
    let mut out = format!("{} {} {}\n", gtype.d, gtype.k, gtype.m);
    for row in 0..r.dim() {
        let line: Vec<String> = (0..r.dim())
            .map(|col| {
                let z = r[(row, col)];
                format!("{:e}{}{:e}i", z.re, if z.im.is_sign_negative() { "" } else { "+" }, z.im)
            })
            .collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Accepts `a`, `bi`, `a+bi`, `a-bi`, `i`, `-i` with optional exponents.
pub fn parse_complex<T: Real>(token: &str) -> Option<C<T>> {
    let t = token.trim();
    if t.is_empty() {
        return None;
    }
    let real = |s: &str| s.parse::<f64>().ok().map(T::lit);
    let Some(body) = t.strip_suffix('i') else {
        return real(t).map(cre);
    };
    // split at the last sign that is not the leading one or part of an exponent
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&p| (bytes[p] == b'+' || bytes[p] == b'-') && !matches!(bytes[p - 1], b'e' | b'E'));
    let imag = |s: &str| match s {
        "" | "+" => Some(T::one()),
        "-" => Some(-T::one()),
        s => real(s),
    };
    match split {
        Some(p) => Some(c(real(&body[..p])?, imag(&body[p..])?)),
        None => Some(c(T::zero(), imag(body)?)),
    }
}
