//! Randomized invariants of the algebra, the engine and the file formats.

mod common;

use std::collections::HashSet;

use adapt_xstate::pool::{binomial, pool_size};
use adapt_xstate::{
    fermionic_pool, multiply, nelder_mead, qubit_pool, uccsd_elements, Excitation, ExcitationElement, Flavor,
    MolecularProblem, NelderMeadOptions, Pauli, PauliString, PauliSum, PauliTerm, StateVector, TrigCurve,
};
use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli_string(n: usize) -> impl Strategy<Value = PauliString> {
    proptest::collection::vec(0u8..4, n).prop_map(|codes| {
        let ops: Vec<(usize, Pauli)> = codes
            .iter()
            .enumerate()
            .filter_map(|(q, c)| match c {
                1 => Some((q, Pauli::X)),
                2 => Some((q, Pauli::Y)),
                3 => Some((q, Pauli::Z)),
                _ => None,
            })
            .collect();
        PauliString::from_ops(&ops).unwrap()
    })
}

fn element(n: usize) -> impl Strategy<Value = ExcitationElement> {
    (any::<bool>(), any::<prop::sample::Index>()).prop_map(move |(fermionic, idx)| {
        let flavor = if fermionic { Flavor::Fermionic } else { Flavor::Qubit };
        let pool = adapt_xstate::pool::pool(n, flavor).unwrap();
        pool[idx.index(pool.len())]
    })
}

fn swapped(e: &ExcitationElement) -> ExcitationElement {
    match e.excitation() {
        Excitation::Single { i, k } => ExcitationElement::single(e.flavor(), k, i).unwrap(),
        Excitation::Double { i, j, k, l } => ExcitationElement::double(e.flavor(), k, l, i, j).unwrap(),
    }
}

fn close(a: &StateVector, b: &StateVector, tol: f64) -> bool {
    a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < tol)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn product_phase_matches_dense(a in pauli_string(3), b in pauli_string(3), c_ in pauli_string(3)) {
        let t = |s| PauliTerm::from_string(c(1.0, 0.0), s, 3).unwrap();
        let ab = multiply(&t(a), &t(b)).unwrap();
        let dense = pauli_string_matrix(ab.string(), 3) * ab.coefficient();
        prop_assert!(max_abs_diff(&dense, &(pauli_string_matrix(&a, 3) * pauli_string_matrix(&b, 3))) < 1e-12);
        // associativity including phases
        let left = multiply(&ab, &t(c_)).unwrap();
        let right = multiply(&t(a), &multiply(&t(b), &t(c_)).unwrap()).unwrap();
        prop_assert_eq!(left.string(), right.string());
        prop_assert!((left.coefficient() - right.coefficient()).norm() < 1e-15);
    }

    #[test]
    fn commutation_flag_matches_dense(a in pauli_string(4), b in pauli_string(4)) {
        let (ma, mb) = (pauli_string_matrix(&a, 4), pauli_string_matrix(&b, 4));
        let commute = max_abs_diff(&(&ma * &mb), &(&mb * &ma)) < 1e-12;
        prop_assert_eq!(a.commutes_with(&b), commute);
    }

    #[test]
    fn evolutions_are_unitary_and_invertible(e in element(5), theta in -7.0f64..7.0, seed in any::<u64>()) {
        let psi = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let mut s = psi.clone();
        s.apply_excitation(&e, theta).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        s.apply_excitation(&e, -theta).unwrap();
        prop_assert!(close(&s, &psi, 1e-12));
    }

    #[test]
    fn evolutions_are_two_pi_periodic(e in element(4), theta in -3.0f64..3.0, seed in any::<u64>()) {
        let psi = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 4);
        let (mut a, mut b) = (psi.clone(), psi);
        a.apply_excitation(&e, theta).unwrap();
        b.apply_excitation(&e, theta + 2.0 * std::f64::consts::PI).unwrap();
        prop_assert!(close(&a, &b, 1e-12));
    }

    #[test]
    fn swapping_sides_negates_the_angle(e in element(5), theta in -3.0f64..3.0, seed in any::<u64>()) {
        let psi = random_state(&mut ChaCha8Rng::seed_from_u64(seed), 5);
        let (mut a, mut b) = (psi.clone(), psi);
        a.apply_excitation(&e, theta).unwrap();
        b.apply_excitation(&swapped(&e), -theta).unwrap();
        prop_assert!(close(&a, &b, 1e-12));
        prop_assert_eq!(swapped(&e).canonical(), e);
    }

    #[test]
    fn evolutions_conserve_particle_number(e in element(6), theta in -3.0f64..3.0, ne in 0usize..=6) {
        let mut s = StateVector::reference(6, ne).unwrap();
        s.apply_excitation(&e, theta).unwrap();
        prop_assert!((s.particle_number() - ne as f64).abs() < 1e-12);
    }

    #[test]
    fn problem_text_round_trips(seed in any::<u64>(), n in 1usize..=8, n_terms in 0usize..30) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_hamiltonian(&mut rng, n, n_terms);
        let mut p = MolecularProblem::new("random r=1.250", n / 2, h).unwrap();
        p.fci_energies = Some(vec![-1.0 / 3.0, 0.1]);
        let text = p.to_text();
        let back = MolecularProblem::parse(&text).unwrap();
        prop_assert_eq!(back.to_text(), text);
        prop_assert_eq!(back.hamiltonian.max_abs_diff(&p.hamiltonian), 0.0);
        prop_assert_eq!(back.fci_energies, p.fci_energies);
    }

    #[test]
    fn qsv_round_trips(seed in any::<u64>(), n in 1usize..=6) {
        let psi = random_state(&mut ChaCha8Rng::seed_from_u64(seed), n);
        let mut bytes = Vec::new();
        psi.write_qsv(&mut bytes).unwrap();
        prop_assert_eq!(bytes.len(), 8 + (16 << n));
        prop_assert_eq!(StateVector::read_qsv(bytes.as_slice()).unwrap(), psi);
    }

    #[test]
    fn closed_form_minimum_bounds_nelder_mead(coeffs in proptest::array::uniform5(-1.0f64..1.0)) {
        let [a, b, c_, d, e] = coeffs;
        let f = |t: f64| a + b * t.sin() + c_ * t.cos() + d * (2.0 * t).sin() + e * (2.0 * t).cos();
        let curve = TrigCurve::fit(f);
        let (t, v) = curve.minimize();
        prop_assert!((f(t) - v).abs() < 1e-13);
        let nm = nelder_mead(|x| f(x[0]), &[0.0], &NelderMeadOptions::default()).unwrap();
        // Nelder-Mead is local; the closed form is global
        prop_assert!(v <= nm.value + 1e-12);
        let grid = (0..20_000).map(|j| f(-std::f64::consts::PI + j as f64 * 1e-4 * std::f64::consts::PI))
            .fold(f64::INFINITY, f64::min);
        prop_assert!(v <= grid + 1e-12);
    }

    #[test]
    fn nelder_mead_reports_its_best_point(x0 in -2.0f64..2.0, y0 in -2.0f64..2.0, budget in 3usize..60) {
        let f = |x: &[f64]| (x[0] - 0.3).powi(2) + 3.0 * (x[1] + 0.7).powi(2) + (x[0] * x[1]).sin();
        let opts = NelderMeadOptions { max_evals: budget, ..Default::default() };
        let r = nelder_mead(f, &[x0, y0], &opts).unwrap();
        prop_assert_eq!(r.value, f(&r.x));
        prop_assert!(r.value <= f(&[x0, y0]));
        prop_assert!(r.evaluations <= budget);
    }

    #[test]
    fn sums_are_linear(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_hamiltonian(&mut rng, 3, 6);
        let b = random_hamiltonian(&mut rng, 3, 6);
        let sum = a.add(&b).unwrap();
        let dense = |s: &PauliSum| if s.is_empty() { CMat::zeros(8, 8) } else { pauli_sum_matrix(s) };
        prop_assert!(max_abs_diff(&dense(&sum), &(dense(&a) + dense(&b))) < 1e-12);
        prop_assert!(max_abs_diff(&dense(&a.scale(Complex64::new(0.0, 2.0))), &(dense(&a) * c(0.0, 2.0))) < 1e-12);
    }
}

/// Canonical forms of every index tuple, enumerated without the library.
fn brute_force_pool(n: usize) -> HashSet<(usize, usize, usize, usize, bool)> {
    let mut set = HashSet::new();
    for i in 0..n {
        for k in 0..n {
            if i != k {
                set.insert((i.min(k), 0, i.max(k), 0, false));
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let idx = [i, j, k, l];
                    let distinct = (0..4).all(|a| (a + 1..4).all(|b| idx[a] != idx[b]));
                    if !distinct {
                        continue;
                    }
                    let p = (i.min(j), i.max(j));
                    let q = (k.min(l), k.max(l));
                    let (first, second) = if p.0 < q.0 { (p, q) } else { (q, p) };
                    set.insert((first.0, first.1, second.0, second.1, true));
                }
            }
        }
    }
    set
}

fn as_tuple(e: &ExcitationElement) -> (usize, usize, usize, usize, bool) {
    match e.excitation() {
        Excitation::Single { i, k } => (i, 0, k, 0, false),
        Excitation::Double { i, j, k, l } => (i, j, k, l, true),
    }
}

#[test]
fn pool_counts_match_independent_enumeration() {
    for n in 4..=14 {
        let expected = binomial(n, 2) + 3 * binomial(n, 4);
        let brute = brute_force_pool(n);
        assert_eq!(brute.len(), expected, "N={n}");
        let qubit = qubit_pool(n).unwrap();
        assert_eq!(qubit.len(), expected);
        assert_eq!(pool_size(n), expected);
        let listed: HashSet<_> = qubit.iter().map(as_tuple).collect();
        assert_eq!(listed, brute);
        assert_eq!(fermionic_pool(n).unwrap().len(), expected);
    }
    assert_eq!(qubit_pool(12).unwrap().len(), 1551);
    assert_eq!(qubit_pool(14).unwrap().len(), 3094);
}

#[test]
fn uccsd_is_a_subset_of_the_generalized_pool() {
    let ucc = uccsd_elements(12, 4).unwrap();
    assert_eq!(ucc.len(), 200);
    let full: HashSet<_> = fermionic_pool(12).unwrap().into_iter().collect();
    assert!(ucc.iter().all(|e| full.contains(e)));
    assert_eq!(uccsd_elements(14, 6).unwrap().len(), 6 * 8 + 15 * 28);
}
