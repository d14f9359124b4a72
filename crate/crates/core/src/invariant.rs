//! Braid group representations from a gYB-operator, the invariant `T_S` and
//! its normalizations, and residual checks for the relations it satisfies.
//!
//! The representation image is never materialized: a braid word is applied
//! to vectors one letter at a time, each letter touching only the `k`
//! contiguous factors its copy of `R` acts on. Traces are summed over basis
//! vectors in fixed-size chunks whose partial sums are reduced in order, so
//! the result does not depend on the thread count.

use std::fmt;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::braid::BraidWord;
use crate::catalog::{GybOperator, GybType, OperatorId};
use crate::enhance::EgybOperator;
use crate::error::{Error, Result};
use crate::scalar::{cpowi, cre, Real, C};
use crate::tensorops::LocalOperator;

/// Columns per parallel work item in trace summation.
const TRACE_CHUNK: usize = 32;

/// Upper bound on the representation dimension `d^N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    pub max_dim: usize,
}

impl Limits {
    pub const DEFAULT_MAX_DIM: usize = 2048;

    pub fn unlimited() -> Self {
        Self { max_dim: usize::MAX }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_dim: Self::DEFAULT_MAX_DIM,
        }
    }
}

/// Number of tensor factors the `n`-strand representation acts on:
/// `k + m(n-2)` for `n >= 2` and `k - m` for the one-strand braid group.
pub fn factor_count(gtype: GybType, n: usize) -> usize {
    if n >= 2 {
        gtype.k + gtype.m * (n - 2)
    } else {
        gtype.k - gtype.m
    }
}

/// Matrix-free `rho^R_n`.
pub struct RepContext<'a, T> {
    op: &'a GybOperator<T>,
    n: usize,
    factors: usize,
    dim: usize,
    r: LocalOperator<T>,
    r_inv: LocalOperator<T>,
}

impl<'a, T: Real> RepContext<'a, T> {
    pub fn new(op: &'a GybOperator<T>, n: usize, limits: Limits) -> Result<Self> {
        let n = n.max(1);
        let gtype = op.gtype();
        let factors = factor_count(gtype, n);
        let dim = gtype
            .d
            .checked_pow(factors as u32)
            .filter(|&dim| dim <= limits.max_dim)
            .ok_or(Error::ResourceCap {
                strands: n,
                dim: gtype.d.saturating_pow(factors as u32),
                cap: limits.max_dim,
            })?;
        Ok(Self {
            op,
            n,
            factors,
            dim,
            r: LocalOperator::from_matrix(op.r(), gtype.d)?,
            r_inv: LocalOperator::from_matrix(op.r_inv(), gtype.d)?,
        })
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> usize {
        self.factors
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn operator(&self) -> &GybOperator<T> {
        self.op
    }

    /// Zero-based first factor touched by generator `i` (1-based).
    pub fn generator_offset(&self, i: usize) -> usize {
        self.op.gtype().m * (i - 1)
    }

    fn check_word(&self, word: &BraidWord) -> Result<()> {
        if word.strands() != self.n {
            return Err(Error::StrandMismatch {
                left: word.strands(),
                right: self.n,
            });
        }
        Ok(())
    }

    /// `rho(word) v`; the first letter acts first.
    pub fn rep_apply(&self, word: &BraidWord, v: &[C<T>]) -> Result<Vec<C<T>>> {
        self.check_word(word)?;
        if v.len() != self.dim {
            return Err(Error::Shape {
                expected: self.dim,
                found: v.len(),
            });
        }
        let mut cur = v.to_vec();
        let mut scratch = vec![C::zero(); self.dim];
        self.apply_letters(word.letters(), &mut cur, &mut scratch);
        Ok(cur)
    }

    fn apply_letters(&self, letters: &[i32], cur: &mut Vec<C<T>>, scratch: &mut Vec<C<T>>) {
        for &g in letters {
            let local = if g > 0 { &self.r } else { &self.r_inv };
            let offset = self.generator_offset(g.unsigned_abs() as usize);
            local.apply(cur, scratch, offset, self.factors);
            std::mem::swap(cur, scratch);
        }
    }

    /// `tr(rho(word) o P)` where `P` is the product of the embedded local
    /// operators in `right`, applied in order (zero-based factor offsets).
    pub fn trace_with(
        &self,
        word: &BraidWord,
        right: &[(usize, &LocalOperator<T>)],
    ) -> Result<C<T>> {
        self.check_word(word)?;
        for &(offset, op) in right {
            if offset + op.factors() > self.factors {
                return Err(Error::Shape {
                    expected: self.factors,
                    found: offset + op.factors(),
                });
            }
        }
        let chunks: Vec<C<T>> = (0..self.dim.div_ceil(TRACE_CHUNK))
            .into_par_iter()
            .map(|chunk| {
                let mut cur = vec![C::zero(); self.dim];
                let mut scratch = vec![C::zero(); self.dim];
                let mut acc = C::zero();
                let end = ((chunk + 1) * TRACE_CHUNK).min(self.dim);
                for b in chunk * TRACE_CHUNK..end {
                    cur.iter_mut().for_each(|z| *z = C::zero());
                    cur[b] = C::one();
                    for &(offset, op) in right {
                        op.apply(&cur, &mut scratch, offset, self.factors);
                        std::mem::swap(&mut cur, &mut scratch);
                    }
                    self.apply_letters(word.letters(), &mut cur, &mut scratch);
                    acc = acc + cur[b];
                }
                acc
            })
            .collect();
        Ok(chunks.into_iter().fold(C::zero(), |a, z| a + z))
    }

    /// `tr(rho(word) o mu^{(x)N})`
    pub fn trace(&self, word: &BraidWord, mu: Option<&LocalOperator<T>>) -> Result<C<T>> {
        match mu {
            None => self.trace_with(word, &[]),
            Some(mu) => {
                let right: Vec<_> = (0..self.factors).map(|f| (f, mu)).collect();
                self.trace_with(word, &right)
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Normalization {
    /// `T_S` itself.
    Raw,
    /// Catalog normalization with value 1 on the unknot.
    P,
    /// `tr(mu)^{2m-k} T_S`, multiplicative under disjoint union.
    Tilde,
}

impl Normalization {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Raw => "raw",
            Self::P => "P",
            Self::Tilde => "tilde",
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug)]
pub struct InvariantResult<T> {
    pub value: C<T>,
    pub operator_id: OperatorId,
    pub theta: Option<T>,
    pub braid: BraidWord,
    pub writhe: i64,
    pub normalization: Normalization,
}

fn mu_local<T: Real>(s: &EgybOperator<T>) -> Result<Option<LocalOperator<T>>> {
    if s.mu_is_identity() {
        return Ok(None);
    }
    Ok(Some(LocalOperator::from_matrix(s.mu(), s.op().gtype().d)?))
}

/// Raw value `alpha^{-w} beta^{-n} tr(rho(b) o mu^{(x)N})`.
pub fn t_value<T: Real>(s: &EgybOperator<T>, b: &BraidWord, limits: Limits) -> Result<C<T>> {
    let ctx = RepContext::new(s.op(), b.strands(), limits)?;
    let mu = mu_local(s)?;
    let tr = ctx.trace(b, mu.as_ref())?;
    let scale = cpowi(s.alpha(), -b.writhe()) * cpowi(s.beta(), -(b.strands() as i64));
    Ok(scale * tr)
}

pub fn t_invariant<T: Real>(s: &EgybOperator<T>, b: &BraidWord) -> Result<InvariantResult<T>> {
    t_invariant_with(s, b, Limits::default())
}

pub fn t_invariant_with<T: Real>(
    s: &EgybOperator<T>,
    b: &BraidWord,
    limits: Limits,
) -> Result<InvariantResult<T>> {
    normalized(s, b, Normalization::Raw, limits)
}

pub fn p_invariant<T: Real>(s: &EgybOperator<T>, b: &BraidWord) -> Result<InvariantResult<T>> {
    normalized(s, b, Normalization::P, Limits::default())
}

pub fn t_tilde<T: Real>(s: &EgybOperator<T>, b: &BraidWord) -> Result<InvariantResult<T>> {
    normalized(s, b, Normalization::Tilde, Limits::default())
}

/// Factor that turns `T_S` into the requested normalization.
pub fn normalization_factor<T: Real>(s: &EgybOperator<T>, norm: Normalization) -> Result<C<T>> {
    match norm {
        Normalization::Raw => Ok(C::one()),
        Normalization::P => s
            .p_factor()
            .map(cre)
            .ok_or_else(|| Error::NoNormalization(s.op().id().to_string())),
        Normalization::Tilde => Ok(s.multiplicativity_factor()),
    }
}

pub fn normalized<T: Real>(
    s: &EgybOperator<T>,
    b: &BraidWord,
    norm: Normalization,
    limits: Limits,
) -> Result<InvariantResult<T>> {
    let factor = normalization_factor(s, norm)?;
    let value = t_value(s, b, limits)? * factor;
    Ok(InvariantResult {
        value,
        operator_id: s.op().id(),
        theta: s.op().theta(),
        braid: b.clone(),
        writhe: b.writhe(),
        normalization: norm,
    })
}

/// Closed form on the trivial `n`-component link:
/// `beta^{-n} tr(mu)^{N}` with `N = k - m` for `n = 1` and `k + m(n-2)` otherwise.
pub fn trivial_link_value<T: Real>(s: &EgybOperator<T>, n: usize) -> C<T> {
    let n = n.max(1);
    let factors = factor_count(s.op().gtype(), n) as i64;
    cpowi(s.beta(), -(n as i64)) * cpowi(s.mu().trace(), factors)
}

/// `|x T(sigma_1 b) + x^{-1} T(sigma_1^{-1} b) - y T(b)|`
pub fn skein_check<T: Real>(s: &EgybOperator<T>, b: &BraidWord, x: C<T>, y: C<T>) -> Result<T> {
    let lim = Limits::default();
    let plus = t_value(s, &b.prefixed(1, 1)?, lim)?;
    let minus = t_value(s, &b.prefixed(1, -1)?, lim)?;
    let zero = t_value(s, b, lim)?;
    Ok((x * plus + x.inv() * minus - y * zero).norm())
}

/// `|T(sigma_1^2 b) - T(sigma_1 b) + T(b) - T(sigma_1^{-1} b)|`, type II only.
pub fn quartic_check_type2<T: Real>(s: &EgybOperator<T>, b: &BraidWord) -> Result<T> {
    if s.op().id() != OperatorId::Type2 {
        return Err(Error::WrongOperator {
            expected: "type2".into(),
            found: s.op().id().to_string(),
        });
    }
    let lim = Limits::default();
    let t = |w: &BraidWord| t_value(s, w, lim);
    let res = t(&b.prefixed(1, 2)?)? - t(&b.prefixed(1, 1)?)? + t(b)? - t(&b.prefixed(1, -1)?)?;
    Ok(res.norm())
}

/// Largest deviation of `T` under `trials` random conjugations (length up
/// to 8) and both stabilizations of `b`.
pub fn markov_check<T: Real>(s: &EgybOperator<T>, b: &BraidWord, trials: usize, seed: u64) -> Result<T> {
    markov_check_with(s, b, trials, seed, Limits::default())
}

pub fn markov_check_with<T: Real>(
    s: &EgybOperator<T>,
    b: &BraidWord,
    trials: usize,
    seed: u64,
    limits: Limits,
) -> Result<T> {
    let base = t_value(s, b, limits)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut moved = vec![b.stabilize(1), b.stabilize(-1)];
    for _ in 0..trials {
        let len = rng.gen_range(0..=8);
        let eta = BraidWord::random_with(&mut rng, b.strands(), len);
        moved.push(b.conjugate(&eta)?);
    }
    moved.iter().try_fold(T::zero(), |worst, w| {
        Ok(worst.max((t_value(s, w, limits)? - base).norm()))
    })
}

/// `|T(b1 * b2) - tr(mu)^{2m-k} T(b1) T(b2)|`
pub fn multiplicativity_check<T: Real>(s: &EgybOperator<T>, b1: &BraidWord, b2: &BraidWord) -> Result<T> {
    let lim = Limits::default();
    let joint = t_value(s, &b1.juxtapose(b2), lim)?;
    let product = s.multiplicativity_factor() * t_value(s, b1, lim)? * t_value(s, b2, lim)?;
    Ok((joint - product).norm())
}

/// `|T~(b1 * b2) - T~(b1) T~(b2)|`
pub fn tilde_multiplicativity_check<T: Real>(
    s: &EgybOperator<T>,
    b1: &BraidWord,
    b2: &BraidWord,
) -> Result<T> {
    let t = |b: &BraidWord| t_tilde(s, b).map(|r| r.value);
    Ok((t(&b1.juxtapose(b2))? - t(b1)? * t(b2)?).norm())
}

/// `|T_{III}(b) / 4 - T_{(2,3,2)}(b)|` for the catalog enhancements.
pub fn cross_operator_check<T: Real>(b: &BraidWord, theta: T) -> Result<T> {
    let type3 = EgybOperator::standard(GybOperator::type3(theta))?;
    let r232 = EgybOperator::standard(GybOperator::r232())?;
    let lim = Limits::default();
    let quarter = cre(T::lit(0.25));
    Ok((quarter * t_value(&type3, b, lim)? - t_value(&r232, b, lim)?).norm())
}
