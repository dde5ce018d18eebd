mod common;

use common::*;
use ntop_core::ghz::{alice_element, bob_condition_residual, charlie_condition_residual, random_ntop_measurement};
use ntop_core::operator::C64;
use ntop_core::statespace::{amplitude_index, apply_local_operator, multi_index};
use ntop_core::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TOL: f64 = DEFAULT_TOL;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_dims<R: Rng>(rng: &mut R) -> Vec<usize> {
    let parties = rng.gen_range(2..=3);
    (0..parties).map(|_| rng.gen_range(2..=3)).collect()
}

fn random_hermitian<R: Rng>(rng: &mut R, d: usize) -> HermitianOp {
    let rows: Vec<Vec<C64>> = (0..d).map(|_| (0..d).map(|_| random_complex(rng)).collect()).collect();
    let m = ComplexMatrix::from_rows(&rows).unwrap();
    HermitianOp::new((&m + &m.adjoint()).scale_real(0.5)).unwrap()
}

fn random_unitary<R: Rng>(rng: &mut R, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_rows(&random_orthonormal(rng, d, d)).unwrap()
}

fn t_of(set: &StateSet, party: usize) -> usize {
    ntop_check(set, PartyIndex(party), TOL).unwrap().t
}

/// Rank of the real span of `ops`.
fn span_rank(ops: &[HermitianOp]) -> usize {
    gram_schmidt_hs(ops, 1e-9).unwrap().len()
}

fn nonzero_family(set: &StateSet, party: usize) -> Vec<HermitianOp> {
    gamma_delta(set, PartyIndex(party)).unwrap().operators()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gram_schmidt_is_orthonormal_and_spans_input(seed in any::<u64>(), d in 2usize..=4, n in 0usize..12) {
        let mut rng = rng(seed);
        let mut ops: Vec<HermitianOp> = (0..n).map(|_| random_hermitian(&mut rng, d)).collect();
        // Inject exact dependencies.
        if n >= 2 {
            ops.push(ops[0].scale(2.5).add(&ops[1].scale(-0.5)));
        }
        let out = gram_schmidt_hs(&ops, TOL).unwrap();
        prop_assert!(out.len() <= ops.len().min(d * d));
        for (m, a) in out.iter().enumerate() {
            for (k, b) in out.iter().enumerate() {
                let want = if m == k { 2.0 } else { 0.0 };
                prop_assert!((hs_inner(a, b).unwrap() - want).abs() <= 10.0 * TOL);
            }
        }
        for op in &ops {
            let coeffs: Vec<f64> = out.iter().map(|b| hs_inner(b, op).unwrap() / 2.0).collect();
            let rebuilt = HermitianOp::real_combination(d, &coeffs, &out).unwrap_or_else(|_| HermitianOp::zeros(d));
            let residual = op.sub(&rebuilt).hs_norm();
            prop_assert!(residual <= TOL * op.hs_norm().max(1.0), "residual {residual:e}");
        }
    }

    #[test]
    fn completion_yields_generator_basis(seed in any::<u64>(), d in 2usize..=4, k in 0usize..4) {
        let mut rng = rng(seed);
        let raw: Vec<HermitianOp> = (0..k).map(|_| random_hermitian(&mut rng, d).traceless_part()).collect();
        let partial = gram_schmidt_hs(&raw, TOL).unwrap();
        let rest = complete_to_generator_basis(&partial, d, TOL).unwrap();
        prop_assert_eq!(partial.len() + rest.len(), d * d - 1);
        let all: Vec<HermitianOp> = partial.iter().chain(&rest).cloned().collect();
        prop_assert!(GeneratorBasis::new(d, all, TOL).is_ok());
    }

    #[test]
    fn hs_self_inner_is_nonnegative(seed in any::<u64>(), d in 1usize..=4) {
        let a = random_hermitian(&mut rng(seed), d);
        let v = hs_inner(&a, &a).unwrap();
        prop_assert!(v >= 0.0);
        prop_assert_eq!(hs_inner(&HermitianOp::zeros(d), &HermitianOp::zeros(d)).unwrap(), 0.0);
    }

    #[test]
    fn amplitude_index_round_trips(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let total: usize = dims.iter().product();
        let flat = rng.gen_range(0..total);
        let multi = multi_index(flat, &dims).unwrap();
        prop_assert_eq!(amplitude_index(&multi, &dims).unwrap(), flat);
    }

    #[test]
    fn gamma_delta_are_hermitian_and_traceless(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=4);
        let set = random_state_set(&mut rng, dims.clone(), count);
        for p in 0..dims.len() {
            let fam = gamma_delta(&set, PartyIndex(p)).unwrap();
            for pair in &fam.pairs {
                for op in [&pair.gamma, &pair.delta] {
                    prop_assert!(op.matrix().is_hermitian(1e-12));
                    prop_assert!(op.trace().abs() <= TOL * set.norm(pair.i) * set.norm(pair.j));
                }
            }
        }
    }

    #[test]
    fn reduced_cross_adjoint_and_trace(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let total: usize = dims.iter().product();
        // Arbitrary (non-orthogonal) vectors exercise the trace identity.
        let states: Vec<Vec<C64>> = (0..3).map(|_| (0..total).map(|_| random_complex(&mut rng)).collect()).collect();
        let set = StateSet::new(dims.clone(), states.clone()).unwrap();
        for p in 0..dims.len() {
            for m in 0..3 {
                for n in 0..3 {
                    let r_mn = reduced_cross(&set, m, n, PartyIndex(p)).unwrap();
                    let r_nm = reduced_cross(&set, n, m, PartyIndex(p)).unwrap();
                    prop_assert!(r_mn.adjoint().max_abs_diff(&r_nm) <= 1e-14);
                    let tr = r_mn.trace();
                    let want = inner(&states[n], &states[m]);
                    prop_assert!((tr - want).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn global_phase_leaves_span_unchanged(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=3);
        let set = random_state_set(&mut rng, dims.clone(), count);
        let which = rng.gen_range(0..count);
        let phase = C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU));
        let mut states = set.states().to_vec();
        states[which].iter_mut().for_each(|z| *z *= phase);
        let rotated = StateSet::new(dims.clone(), states).unwrap();
        for p in 0..dims.len() {
            let a = nonzero_family(&set, p);
            let b = nonzero_family(&rotated, p);
            let both: Vec<HermitianOp> = a.iter().chain(&b).cloned().collect();
            let (ra, rb, rab) = (span_rank(&a), span_rank(&b), span_rank(&both));
            prop_assert!(ra == rb && rb == rab, "{ra} {rb} {rab}");
        }
    }

    #[test]
    fn adding_a_state_never_decreases_t(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let total: usize = dims.iter().product();
        let count = rng.gen_range(2..=4).min(total - 1);
        let states = random_orthonormal(&mut rng, total, count + 1);
        let small = StateSet::new(dims.clone(), states[..count].to_vec()).unwrap();
        let large = StateSet::new(dims.clone(), states).unwrap();
        for p in 0..dims.len() {
            prop_assert!(t_of(&large, p) >= t_of(&small, p));
        }
    }

    #[test]
    fn t_invariant_under_other_party_unitary_and_permutation(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=4);
        let set = random_state_set(&mut rng, dims.clone(), count);
        let other = rng.gen_range(0..dims.len());
        let u = random_unitary(&mut rng, dims[other]);
        let rotated: Vec<Vec<C64>> = set
            .states()
            .iter()
            .map(|s| apply_local_operator(s, &dims, PartyIndex(other), &u).unwrap())
            .collect();
        let rotated = StateSet::new(dims.clone(), rotated).unwrap();
        let mut permuted = set.states().to_vec();
        permuted.reverse();
        permuted.rotate_left(1);
        let permuted = StateSet::new(dims.clone(), permuted).unwrap();
        for p in 0..dims.len() {
            let t = t_of(&set, p);
            if p != other {
                prop_assert_eq!(t_of(&rotated, p), t);
            }
            prop_assert_eq!(t_of(&permuted, p), t);
        }
    }

    #[test]
    fn feasibility_matches_oracle(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=4);
        let set = random_state_set(&mut rng, dims.clone(), count);
        for p in 0..dims.len() {
            let report = ntop_check(&set, PartyIndex(p), TOL).unwrap();
            prop_assert_eq!(report.feasible, ntop_oracle(&set, PartyIndex(p), TOL).unwrap());
            prop_assert_eq!(report.t + report.r, report.generator_count());
        }
    }

    #[test]
    fn residuals_of_preserving_measurements_stay_orthogonal(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=3);
        let set = random_state_set(&mut rng, dims.clone(), count);
        for p in 0..dims.len() {
            let report = ntop_check(&set, PartyIndex(p), TOL).unwrap();
            if !report.feasible {
                continue;
            }
            let meas = random_ntop_measurement(&report, &mut rng).unwrap();
            prop_assert!(verify_orthogonality_preserving(&meas, &set, TOL).unwrap().ok);
            for a in meas.kraus_operators().unwrap() {
                let out = apply_local_kraus(&set, PartyIndex(p), &a, TOL).unwrap();
                prop_assert!(check_mutual_orthogonality(&out.residual, 1e-8).ok);
            }
        }
    }

    #[test]
    fn constructed_povm_meets_contract(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let dims = random_dims(&mut rng);
        let count = rng.gen_range(2..=3);
        let set = random_state_set(&mut rng, dims.clone(), count);
        for p in 0..dims.len() {
            let report = ntop_check(&set, PartyIndex(p), TOL).unwrap();
            if !report.feasible {
                continue;
            }
            let direction: Vec<f64> = (0..report.r).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let meas = construct_ntop_povm(&report, &direction).unwrap();
            prop_assert!(meas.completeness_residual() <= 1e-9);
            prop_assert!(meas.min_eigenvalue() >= -1e-9);
            let pres = verify_orthogonality_preserving(&meas, &set, TOL).unwrap();
            prop_assert!(pres.ok && !pres.trivial);
            for e in meas.elements() {
                prop_assert!(e.distance_from_identity_span() >= 1e-3);
            }
        }
    }

    #[test]
    fn case_c_conditions_share_off_diagonal_phase(seed in any::<u64>()) {
        let mut rng = rng(seed);
        let params = random_ghz_params(&mut rng, &[0, 1, 3, 4]);
        let x = params.x();
        let (p1, p2) = (rng.gen_range(0.05..0.5), rng.gen_range(0.05..0.5));
        // Bob: x₃p + x₆w = 0.  Charlie: x₃w* + x₆p = 0.
        let w_bob = -x[2] * p1 / x[5];
        let w_charlie = -(x[5] / x[2]).conj() * p2;
        let e_bob = alice_element(p1, w_bob).unwrap();
        let e_charlie = alice_element(p2, w_charlie).unwrap();
        prop_assert!(bob_condition_residual(&params, &e_bob) <= 1e-12);
        prop_assert!(charlie_condition_residual(&params, &e_charlie) <= 1e-12);
        let (a, b) = (e_bob.get(0, 1), e_charlie.get(0, 1));
        let rel = a * b.conj() / (a.norm() * b.norm());
        prop_assert!((rel - c(1.0)).norm() <= 1e-9, "relative phase {rel}");
    }
}
