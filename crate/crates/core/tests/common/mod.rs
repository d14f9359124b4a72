#![allow(dead_code)]

use egyb_core::tensorops::kron_all;
use egyb_core::{ComplexMatrix, Matrix, Operator};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut impl Rng, dim: usize) -> Matrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    ComplexMatrix::new(dim, data).unwrap()
}

/// Gram-Schmidt on the columns of a random matrix.
pub fn random_unitary(rng: &mut impl Rng, dim: usize) -> Matrix {
    let a = random_matrix(rng, dim);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    for j in 0..dim {
        let mut v: Vec<Complex64> = (0..dim).map(|i| a[(i, j)]).collect();
        for q in &cols {
            let proj: Complex64 = q.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, qi) in v.iter_mut().zip(q) {
                *vi -= proj * qi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        v.iter_mut().for_each(|z| *z /= norm);
        cols.push(v);
    }
    let mut u = Matrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

pub fn theta_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| std::f64::consts::PI * i as f64 / (points - 1) as f64)
        .collect()
}

pub fn catalog(theta: f64) -> Vec<Operator> {
    vec![
        Operator::type1(theta),
        Operator::type2(theta),
        Operator::type3(theta),
        Operator::r232(),
    ]
}

/// Dense `rho(word)` assembled from explicit Kronecker products, first
/// letter rightmost.
pub fn dense_rep(op: &Operator, word: &egyb_core::BraidWord) -> Matrix {
    let g = op.gtype();
    let n = word.strands();
    let factors = if n >= 2 { g.k + g.m * (n - 2) } else { g.k - g.m };
    let id = |f: usize| Matrix::identity(g.d.pow(f as u32));
    let mut acc = id(factors);
    for &letter in word.letters() {
        let i = letter.unsigned_abs() as usize;
        let before = g.m * (i - 1);
        let after = factors - before - g.k;
        let embedded = kron_all([&id(before), op.power(letter), &id(after)]);
        acc = &embedded * &acc;
    }
    acc
}
