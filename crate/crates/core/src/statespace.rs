//! Multipartite pure-state sets and the Γ/Δ operator families.
//!
//! Amplitudes are stored row-major over the local indices with party 0 the
//! most significant digit, so `|i_0 i_1 … i_{k-1}⟩` lives at
//! `Σ_p i_p · Π_{q>p} d_q`.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::operator::{ComplexMatrix, HermitianOp, C64, I, ZERO};

/// 0-based subsystem label.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartyIndex(pub usize);

impl From<usize> for PartyIndex {
    fn from(i: usize) -> Self {
        Self(i)
    }
}

/// A list of (possibly unnormalized) pure states on a common multipartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct StateSet {
    dims: Vec<usize>,
    states: Vec<Vec<C64>>,
    names: Vec<Option<String>>,
}

impl StateSet {
    pub fn new(dims: Vec<usize>, states: Vec<Vec<C64>>) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::InvalidStateSet("no parties"));
        }
        if dims.contains(&0) {
            return Err(Error::InvalidStateSet("zero local dimension"));
        }
        if states.is_empty() {
            return Err(Error::InvalidStateSet("no states"));
        }
        let total = dims
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .ok_or(Error::InvalidStateSet("total dimension overflows"))?;
        for s in &states {
            if s.len() != total {
                return Err(Error::DimensionMismatch { expected: total, found: s.len() });
            }
            if s.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::NonFinite);
            }
        }
        let names = alloc::vec![None; states.len()];
        Ok(Self { dims, states, names })
    }

    pub fn with_names(mut self, names: Vec<Option<String>>) -> Result<Self> {
        if names.len() != self.states.len() {
            return Err(Error::LengthMismatch { expected: self.states.len(), found: names.len() });
        }
        self.names = names;
        Ok(self)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn num_parties(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[Vec<C64>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> Result<&[C64]> {
        self.states.get(i).map(Vec::as_slice).ok_or(Error::IndexOutOfRange { index: i, bound: self.states.len() })
    }

    pub fn names(&self) -> &[Option<String>] {
        &self.names
    }

    pub fn norm(&self, i: usize) -> f64 {
        norm(&self.states[i])
    }

    /// Whether state `i` has norm at most `tol`.
    pub fn is_zero(&self, i: usize, tol: f64) -> bool {
        self.norm(i) <= tol
    }

    pub fn local_dim(&self, party: PartyIndex) -> Result<usize> {
        self.dims.get(party.0).copied().ok_or(Error::IndexOutOfRange { index: party.0, bound: self.dims.len() })
    }
}

pub(crate) fn inner(u: &[C64], v: &[C64]) -> C64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).sum()
}

pub(crate) fn norm(v: &[C64]) -> f64 {
    libm::sqrt(v.iter().map(|z| z.norm_sqr()).sum())
}

/// Flat amplitude index of a multi-index (party 0 most significant).
pub fn amplitude_index(multi_index: &[usize], dims: &[usize]) -> Result<usize> {
    if multi_index.len() != dims.len() {
        return Err(Error::LengthMismatch { expected: dims.len(), found: multi_index.len() });
    }
    let mut flat = 0usize;
    for (&i, &d) in multi_index.iter().zip(dims) {
        if i >= d {
            return Err(Error::IndexOutOfRange { index: i, bound: d });
        }
        flat = flat * d + i;
    }
    Ok(flat)
}

/// Inverse of [`amplitude_index`].
pub fn multi_index(flat: usize, dims: &[usize]) -> Result<Vec<usize>> {
    let total: usize = dims.iter().product();
    if flat >= total {
        return Err(Error::IndexOutOfRange { index: flat, bound: total });
    }
    let mut out = alloc::vec![0; dims.len()];
    let mut rem = flat;
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = rem % d;
        rem /= d;
    }
    Ok(out)
}

/// `(outer, d, inner)` block sizes around `party`.
pub(crate) fn layout(dims: &[usize], party: usize) -> (usize, usize, usize) {
    let outer = dims[..party].iter().product();
    let inner = dims[party + 1..].iter().product();
    (outer, dims[party], inner)
}

/// Applies `op` to the `party` factor of `state`, identity elsewhere.
pub fn apply_local_operator(state: &[C64], dims: &[usize], party: PartyIndex, op: &ComplexMatrix) -> Result<Vec<C64>> {
    if party.0 >= dims.len() {
        return Err(Error::IndexOutOfRange { index: party.0, bound: dims.len() });
    }
    let (outer, d, inner) = layout(dims, party.0);
    if op.dim() != d {
        return Err(Error::DimensionMismatch { expected: d, found: op.dim() });
    }
    if state.len() != outer * d * inner {
        return Err(Error::DimensionMismatch { expected: outer * d * inner, found: state.len() });
    }
    let mut out = alloc::vec![ZERO; state.len()];
    for o in 0..outer {
        let base = o * d * inner;
        for a in 0..d {
            for b in 0..d {
                let m = op.get(a, b);
                if m == ZERO {
                    continue;
                }
                for r in 0..inner {
                    out[base + a * inner + r] += m * state[base + b * inner + r];
                }
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalityReport {
    pub ok: bool,
    /// Pair with the largest tolerance-scaled overlap, if there are at least two states.
    pub worst_pair: Option<(usize, usize)>,
    pub worst_overlap: f64,
}

/// Checks `|⟨φ_i|φ_j⟩| ≤ tol · max(1, ‖φ_i‖‖φ_j‖)` for all `i ≠ j`.
pub fn check_mutual_orthogonality(set: &StateSet, tol: f64) -> OrthogonalityReport {
    let mut worst: Option<(usize, usize, f64, f64)> = None;
    let norms: Vec<f64> = (0..set.len()).map(|i| set.norm(i)).collect();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let overlap = inner(&set.states[i], &set.states[j]).norm();
            let ratio = overlap / (norms[i] * norms[j]).max(1.0);
            if worst.is_none_or(|w| ratio > w.3) {
                worst = Some((i, j, overlap, ratio));
            }
        }
    }
    match worst {
        None => OrthogonalityReport { ok: true, worst_pair: None, worst_overlap: 0.0 },
        Some((i, j, overlap, ratio)) => {
            OrthogonalityReport { ok: ratio <= tol, worst_pair: Some((i, j)), worst_overlap: overlap }
        }
    }
}

/// `Tr_ā(|φ_m⟩⟨φ_n|)` on the space of `party`.
pub fn reduced_cross(set: &StateSet, m: usize, n: usize, party: PartyIndex) -> Result<ComplexMatrix> {
    let phi_m = set.state(m)?;
    let phi_n = set.state(n)?;
    set.local_dim(party)?;
    let (outer, d, inner) = layout(&set.dims, party.0);
    let mut entries = alloc::vec![ZERO; d * d];
    for o in 0..outer {
        let base = o * d * inner;
        for a in 0..d {
            for b in 0..d {
                let mut acc = ZERO;
                for r in 0..inner {
                    acc += phi_m[base + a * inner + r] * phi_n[base + b * inner + r].conj();
                }
                entries[a * d + b] += acc;
            }
        }
    }
    Ok(ComplexMatrix::from_fn(d, |a, b| entries[a * d + b]))
}

#[derive(Clone, Debug, PartialEq)]
pub struct GammaDeltaPair {
    pub i: usize,
    pub j: usize,
    pub gamma: HermitianOp,
    pub delta: HermitianOp,
}

/// The Γ/Δ operators of every pair `i < j` for one party.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaDeltaFamily {
    pub party: PartyIndex,
    pub pairs: Vec<GammaDeltaPair>,
}

impl GammaDeltaFamily {
    pub fn pair(&self, i: usize, j: usize) -> Option<&GammaDeltaPair> {
        self.pairs.iter().find(|p| p.i == i && p.j == j)
    }

    /// All operators in pair order, `Γ` before `Δ`.
    pub fn operators(&self) -> Vec<HermitianOp> {
        self.pairs.iter().flat_map(|p| [p.gamma.clone(), p.delta.clone()]).collect()
    }
}

/// `Γ_ij = R + R†` and `Δ_ij = iR − iR†` with `R = Tr_ā(|φ_i⟩⟨φ_j|)`.
pub fn gamma_delta(set: &StateSet, party: PartyIndex) -> Result<GammaDeltaFamily> {
    let mut pairs = Vec::new();
    for i in 0..set.len() {
        for j in i + 1..set.len() {
            let r = reduced_cross(set, i, j, party)?;
            let r_adj = r.adjoint();
            let gamma = HermitianOp::new(&r + &r_adj)?;
            let delta = HermitianOp::new(&r.scale(I) - &r_adj.scale(I))?;
            pairs.push(GammaDeltaPair { i, j, gamma, delta });
        }
    }
    Ok(GammaDeltaFamily { party, pairs })
}
