//! Independent feasibility oracle.
//!
//! Parameterizes a Hermitian `X` on the party's space by `d²` real
//! coordinates in the basis `{E_aa} ∪ {E_ab + E_ba} ∪ {i(E_ab − E_ba)}` and
//! imposes `⟨φ_i|X ⊗ I|φ_j⟩ = 0` for every pair directly on the amplitudes.
//! The dimension of the solution space is read off a row-reduced echelon
//! form with partial pivoting. No Gram–Schmidt and no partial-trace code is
//! shared with the main engine.

use alloc::vec::Vec;

use crate::error::{check_tol, Result};
use crate::ntop::require_orthogonal;
use crate::operator::{C64, I, ZERO};
use crate::statespace::{PartyIndex, StateSet};

/// `M_ab = Σ_rest conj(φ_i[a, rest]) φ_j[b, rest]`, computed by decomposing
/// flat indices digit by digit.
fn pair_matrix(set: &StateSet, i: usize, j: usize, party: usize) -> Vec<C64> {
    let dims = set.dims();
    let d = dims[party];
    let below: usize = dims[party + 1..].iter().product();
    let phi_i = &set.states()[i];
    let phi_j = &set.states()[j];
    let mut m = alloc::vec![ZERO; d * d];
    for (x, ai) in phi_i.iter().enumerate() {
        if *ai == ZERO {
            continue;
        }
        let a = (x / below) % d;
        let rest = x - a * below;
        for b in 0..d {
            m[a * d + b] += ai.conj() * phi_j[rest + b * below];
        }
    }
    m
}

fn constraint_rows(set: &StateSet, party: usize, tol: f64) -> Vec<Vec<f64>> {
    let d = set.dims()[party];
    let mut rows = Vec::new();
    for i in 0..set.len() {
        if set.norm(i) <= tol {
            continue;
        }
        for j in i + 1..set.len() {
            if set.norm(j) <= tol {
                continue;
            }
            let m = pair_matrix(set, i, j, party);
            let mut coeffs: Vec<C64> = Vec::with_capacity(d * d);
            for a in 0..d {
                coeffs.push(m[a * d + a]);
            }
            for a in 0..d {
                for b in a + 1..d {
                    coeffs.push(m[a * d + b] + m[b * d + a]);
                }
            }
            for a in 0..d {
                for b in a + 1..d {
                    coeffs.push(I * (m[a * d + b] - m[b * d + a]));
                }
            }
            rows.push(coeffs.iter().map(|z| z.re).collect());
            rows.push(coeffs.iter().map(|z| z.im).collect());
        }
    }
    rows
}

/// Rank by Gaussian elimination with partial pivoting; pivots at or below
/// `tol · max(1, largest |entry|)` count as zero.
pub fn numerical_rank(mut rows: Vec<Vec<f64>>, tol: f64) -> usize {
    let Some(cols) = rows.first().map(Vec::len) else {
        return 0;
    };
    let scale = rows.iter().flatten().fold(1.0f64, |acc, x| acc.max(x.abs()));
    let threshold = tol * scale;
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows.len() {
            break;
        }
        let (pivot, value) = rows[rank..]
            .iter()
            .enumerate()
            .map(|(k, row)| (rank + k, row[col].abs()))
            .fold((rank, -1.0), |best, cand| if cand.1 > best.1 { cand } else { best });
        if value <= threshold {
            continue;
        }
        rows.swap(rank, pivot);
        let pivot_row = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            let factor = row[col] / pivot_row[col];
            if factor != 0.0 {
                for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                    *x -= factor * p;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of `{X Hermitian : ⟨φ_i|X ⊗ I|φ_j⟩ = 0 ∀ i ≠ j}`.
pub fn solution_space_dim(set: &StateSet, party: PartyIndex, tol: f64) -> Result<usize> {
    check_tol(tol)?;
    let d = set.local_dim(party)?;
    require_orthogonal(set, tol)?;
    let rows = constraint_rows(set, party.0, tol);
    Ok(d * d - numerical_rank(rows, tol))
}

/// True iff some admissible `X` is linearly independent of the identity.
pub fn ntop_oracle(set: &StateSet, party: PartyIndex, tol: f64) -> Result<bool> {
    Ok(solution_space_dim(set, party, tol)? >= 2)
}
