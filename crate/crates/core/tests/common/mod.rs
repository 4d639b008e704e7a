#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use reebix::number::{rat, Rational, Real};
use reebix::sympath::{Block, Generator, SymplecticPath};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A block drawn for the corpus: rotation by `num/den · π` or a hyperbolic
/// block with `λ`.
#[derive(Debug, Clone)]
pub enum Drawn {
    Rot(Rational),
    Hyp(f64),
}

impl Drawn {
    pub fn block(&self) -> Block {
        match self {
            Drawn::Rot(a) => Block::rotation(*a),
            Drawn::Hyp(l) => Block::hyperbolic(*l).unwrap(),
        }
    }
}

/// Random block sum with `2n ≤ 6`, rotation angles of denominator ≤ 9 in
/// `(0, 4π)`, and an occasional hyperbolic block.
pub fn random_blocks(r: &mut ChaCha8Rng) -> Vec<Drawn> {
    let n = r.gen_range(1..=3);
    (0..n)
        .map(|_| {
            if r.gen_bool(0.2) {
                let l: f64 = r.gen_range(1.2..3.0);
                Drawn::Hyp(if r.gen_bool(0.5) { l } else { -l })
            } else {
                let den = r.gen_range(1..=9i128);
                let num = r.gen_range(0..4 * den);
                Drawn::Rot(rat(num, den))
            }
        })
        .collect()
}

pub fn path_of(blocks: &[Drawn]) -> SymplecticPath {
    SymplecticPath::blocks(blocks.iter().map(Drawn::block).collect()).unwrap()
}

/// Lower index and nullity of the `k`-th iterate counted plane by plane:
/// a rotation by `θ` winds `kθ/2π` times; hyperbolic blocks contribute their
/// half-turn count.
pub fn oracle_lower(blocks: &[Drawn], k: u64) -> (i64, u64) {
    let mut mu = 0;
    let mut nu = 0;
    for b in blocks {
        match b {
            Drawn::Rot(a) => {
                let x = *a * rat(k as i128, 2);
                if x.is_integer() {
                    mu += 2 * x.to_integer() as i64 - 1;
                    nu += 2;
                } else {
                    mu += 2 * x.floor().to_integer() as i64 + 1;
                }
            }
            Drawn::Hyp(l) => {
                if *l < 0.0 {
                    mu += k as i64;
                }
            }
        }
    }
    (mu, nu)
}

/// Random symmetric `2n × 2n` matrix with eigenvalues bounded away from 0
/// and spectral radius below `rho`.
pub fn random_symmetric(r: &mut ChaCha8Rng, dim: usize, rho: f64) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| r.gen_range(-1.0..1.0));
    let q = g.qr().q();
    let eig: Vec<f64> = (0..dim)
        .map(|_| {
            let m = r.gen_range(0.15..rho);
            if r.gen_bool(0.5) {
                m
            } else {
                -m
            }
        })
        .collect();
    let d = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(eig));
    let a = &q * d * q.transpose();
    (&a + a.transpose()) * 0.5
}

pub fn signature(a: &DMatrix<f64>) -> i64 {
    a.clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|x| if *x > 0.0 { 1 } else { -1 })
        .sum()
}

/// Loop `t ↦ ⊕ R(2π w_i t)`.
pub fn loop_generator(windings: &[i64]) -> Generator {
    Generator::rotation_sum(windings.iter().map(|w| Real::from(2 * w)).collect())
}

/// Random positive rationals `num/den` with small entries.
pub fn random_aspects(r: &mut ChaCha8Rng, count: usize, max_num: i128, max_den: i128) -> Vec<Real> {
    (0..count)
        .map(|_| Real::from(rat(r.gen_range(1..=max_num), r.gen_range(1..=max_den))))
        .collect()
}
