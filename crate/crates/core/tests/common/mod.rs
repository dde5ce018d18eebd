#![allow(dead_code)]

use ntop_core::operator::C64;
use ntop_core::{GhzFamilyParams, HermitianOp, StateSet};
use rand::Rng;

pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn random_complex<R: Rng>(rng: &mut R) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

/// `count` random mutually orthogonal unit vectors of length `n`.
pub fn random_orthonormal<R: Rng>(rng: &mut R, n: usize, count: usize) -> Vec<Vec<C64>> {
    assert!(count <= n, "cannot fit {count} orthonormal vectors in dimension {n}");
    let mut out: Vec<Vec<C64>> = Vec::new();
    while out.len() < count {
        let mut v: Vec<C64> = (0..n).map(|_| random_complex(rng)).collect();
        for _ in 0..2 {
            for b in &out {
                let k = inner(b, &v);
                for (x, y) in v.iter_mut().zip(b) {
                    *x -= k * y;
                }
            }
        }
        let len = inner(&v, &v).re.sqrt();
        if len < 1e-3 {
            continue;
        }
        v.iter_mut().for_each(|x| *x /= len);
        out.push(v);
    }
    out
}

pub fn random_state_set<R: Rng>(rng: &mut R, dims: Vec<usize>, count: usize) -> StateSet {
    let total = dims.iter().product();
    StateSet::new(dims, random_orthonormal(rng, total, count)).unwrap()
}

/// Random GHZ-family parameters; `zero` lists 0-based `x` indices forced to 0.
pub fn random_ghz_params<R: Rng>(rng: &mut R, zero: &[usize]) -> GhzFamilyParams {
    loop {
        let s = random_complex(rng);
        let t = random_complex(rng);
        let n = (s.norm_sqr() + t.norm_sqr()).sqrt();
        let (s, t) = (s / n, t / n);
        let mut x: [C64; 6] = std::array::from_fn(|_| random_complex(rng));
        for &i in zero {
            x[i] = c(0.0);
        }
        let xn: f64 = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xn < 1e-3 || (s * t).norm() < 1e-3 {
            continue;
        }
        x.iter_mut().for_each(|z| *z /= xn);
        if let Ok(p) = GhzFamilyParams::new(s, t, x) {
            return p;
        }
    }
}

pub fn approx_eq(a: &HermitianOp, b: &HermitianOp, tol: f64) -> bool {
    a.matrix().max_abs_diff(b.matrix()) <= tol
}

pub fn sx() -> HermitianOp {
    HermitianOp::pauli_x()
}

pub fn sy() -> HermitianOp {
    HermitianOp::pauli_y()
}

pub fn sz() -> HermitianOp {
    HermitianOp::pauli_z()
}
