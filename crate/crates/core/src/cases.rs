//! Built-in state sets.
//!
//! * `bennett9`: the nine 3×3 "domino" product states
//!   `|1⟩|1⟩, |0⟩|0±1⟩, |2⟩|1±2⟩, |1±2⟩|0⟩, |0±1⟩|2⟩` with `|a±b⟩ = (|a⟩ ± |b⟩)/√2`.
//! * `upb4`: the three-qubit unextendible product basis
//!   `|0,1,+⟩, |1,+,0⟩, |+,0,1⟩, |−,−,−⟩`.
//! * `upb4_variation`: `φ₁, √2φ₂ + φ₄, φ₃, φ₂ − √2φ₄` built from `upb4`, left unnormalized.
//! * `ghz3`: two GHZ-like states and one state from their complement.
//! * `bells(k)`: the first `k` of `Φ+, Φ−, Ψ+, Ψ−`.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, SQRT_2};

use crate::error::{Error, Result};
use crate::ghz::GhzFamilyParams;
use crate::operator::{C64, ZERO};
use crate::statespace::StateSet;

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn ket(d: usize, k: usize) -> Vec<C64> {
    (0..d).map(|i| if i == k { re(1.0) } else { ZERO }).collect()
}

fn superpose(d: usize, a: usize, b: usize, sign: f64) -> Vec<C64> {
    let mut v = ket(d, a);
    v[b] = re(sign);
    v.iter_mut().for_each(|z| *z *= FRAC_1_SQRT_2);
    v
}

fn kron(factors: &[Vec<C64>]) -> Vec<C64> {
    factors.iter().fold(alloc::vec![re(1.0)], |acc, f| acc.iter().flat_map(|a| f.iter().map(move |b| a * b)).collect())
}

fn named(set: StateSet, names: &[&str]) -> StateSet {
    let names = names.iter().map(|n| Some(n.to_string())).collect();
    set.with_names(names).expect("name count matches state count")
}

pub fn bennett9() -> StateSet {
    let k = |i| ket(3, i);
    let states = alloc::vec![
        kron(&[k(1), k(1)]),
        kron(&[k(0), superpose(3, 0, 1, 1.0)]),
        kron(&[k(0), superpose(3, 0, 1, -1.0)]),
        kron(&[k(2), superpose(3, 1, 2, 1.0)]),
        kron(&[k(2), superpose(3, 1, 2, -1.0)]),
        kron(&[superpose(3, 1, 2, 1.0), k(0)]),
        kron(&[superpose(3, 1, 2, -1.0), k(0)]),
        kron(&[superpose(3, 0, 1, 1.0), k(2)]),
        kron(&[superpose(3, 0, 1, -1.0), k(2)]),
    ];
    let set = StateSet::new(alloc::vec![3, 3], states).expect("valid construction");
    named(set, &["psi1", "psi2", "psi3", "psi4", "psi5", "psi6", "psi7", "psi8", "psi9"])
}

fn upb4_vectors() -> [Vec<C64>; 4] {
    let zero = ket(2, 0);
    let one = ket(2, 1);
    let plus = superpose(2, 0, 1, 1.0);
    let minus = superpose(2, 0, 1, -1.0);
    [
        kron(&[zero.clone(), one.clone(), plus.clone()]),
        kron(&[one.clone(), plus.clone(), zero.clone()]),
        kron(&[plus, zero, one]),
        kron(&[minus.clone(), minus.clone(), minus]),
    ]
}

pub fn upb4() -> StateSet {
    let set = StateSet::new(alloc::vec![2, 2, 2], upb4_vectors().to_vec()).expect("valid construction");
    named(set, &["phi1", "phi2", "phi3", "phi4"])
}

pub fn upb4_variation() -> StateSet {
    let [p1, p2, p3, p4] = upb4_vectors();
    let bar2 = p2.iter().zip(&p4).map(|(a, b)| a * SQRT_2 + b).collect();
    let bar4 = p2.iter().zip(&p4).map(|(a, b)| a - b * SQRT_2).collect();
    let set = StateSet::new(alloc::vec![2, 2, 2], alloc::vec![p1, bar2, p3, bar4]).expect("valid construction");
    named(set, &["phi1_bar", "phi2_bar", "phi3_bar", "phi4_bar"])
}

/// `s|000⟩ + t|111⟩`, `t*|000⟩ − s*|111⟩`, and
/// `x₁|100⟩ + x₂|011⟩ + x₃|010⟩ + x₄|101⟩ + x₅|001⟩ + x₆|110⟩`.
pub fn ghz3(params: &GhzFamilyParams) -> StateSet {
    let (s, t, x) = (params.s(), params.t(), params.x());
    let mut phi1 = alloc::vec![ZERO; 8];
    phi1[0] = s;
    phi1[7] = t;
    let mut phi2 = alloc::vec![ZERO; 8];
    phi2[0] = t.conj();
    phi2[7] = -s.conj();
    let mut phi3 = alloc::vec![ZERO; 8];
    for (slot, value) in [4, 3, 2, 5, 1, 6].into_iter().zip(x) {
        phi3[slot] = *value;
    }
    let set = StateSet::new(alloc::vec![2, 2, 2], alloc::vec![phi1, phi2, phi3]).expect("valid construction");
    named(set, &["phi1", "phi2", "phi3"])
}

pub fn bells(k: usize) -> Result<StateSet> {
    if !(2..=4).contains(&k) {
        return Err(Error::IndexOutOfRange { index: k, bound: 5 });
    }
    let h = FRAC_1_SQRT_2;
    let all = [
        alloc::vec![re(h), ZERO, ZERO, re(h)],
        alloc::vec![re(h), ZERO, ZERO, re(-h)],
        alloc::vec![ZERO, re(h), re(h), ZERO],
        alloc::vec![ZERO, re(h), re(-h), ZERO],
    ];
    let names = ["phi_plus", "phi_minus", "psi_plus", "psi_minus"];
    let set = StateSet::new(alloc::vec![2, 2], all[..k].to_vec())?;
    Ok(named(set, &names[..k]))
}

/// Names accepted by [`builtin`].
pub const BUILTIN_NAMES: &[&str] = &["bennett9", "upb4", "upb4-variation", "ghz3", "bells2", "bells3", "bells4"];

/// Looks up a built-in set by name. `ghz3` uses `s = t = 1/√2`, `x₃ = 1`.
pub fn builtin(name: &str) -> Option<StateSet> {
    match name {
        "bennett9" => Some(bennett9()),
        "upb4" => Some(upb4()),
        "upb4-variation" => Some(upb4_variation()),
        "ghz3" => Some(ghz3(&GhzFamilyParams::default_example())),
        "bells2" => bells(2).ok(),
        "bells3" => bells(3).ok(),
        "bells4" => bells(4).ok(),
        _ => None,
    }
}

pub fn builtin_names() -> Vec<String> {
    BUILTIN_NAMES.iter().map(|s| s.to_string()).collect()
}
