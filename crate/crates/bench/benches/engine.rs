use std::hint::black_box;

use adapt_xstate::{
    ansatz_energy_and_gradient, qubit_pool, screen_pool_energy_reduction, screen_pool_gradient, ExcitationElement,
    Flavor, NelderMeadOptions, PenalizedHamiltonian, ScreeningMethod, SparseOperator,
};
use adapt_xstate_bench::fixture;
use criterion::{criterion_group, criterion_main, Criterion};

fn evolutions(c: &mut Criterion) {
    let lih = fixture("lih_1.546.prob").unwrap();
    let reference = lih.reference_state().unwrap();
    let mut group = c.benchmark_group("apply_excitation_12q");
    for flavor in [Flavor::Qubit, Flavor::Fermionic] {
        let single = ExcitationElement::single(flavor, 1, 9).unwrap();
        let double = ExcitationElement::double(flavor, 0, 3, 6, 11).unwrap();
        group.bench_function(format!("{flavor}"), |b| {
            let mut state = reference.clone();
            b.iter(|| {
                state.apply_excitation(&single, black_box(0.3)).unwrap();
                state.apply_excitation(&double, black_box(-0.2)).unwrap();
            })
        });
    }
    group.finish();
}

fn expectation(c: &mut Criterion) {
    let lih = fixture("lih_1.546.prob").unwrap();
    let op = SparseOperator::from_pauli_sum(&lih.hamiltonian).unwrap();
    let mut state = lih.reference_state().unwrap();
    state.apply_excitation(&ExcitationElement::double(Flavor::Qubit, 0, 1, 4, 5).unwrap(), 0.4).unwrap();
    c.bench_function("sparse_expectation_lih", |b| b.iter(|| op.expectation(black_box(state.amplitudes()))));
}

fn screening(c: &mut Criterion) {
    let h4 = fixture("h4_1.000.prob").unwrap();
    let h = PenalizedHamiltonian::new(h4.hamiltonian.clone()).unwrap();
    let reference = h4.reference_state().unwrap();
    let pool = qubit_pool(8).unwrap();
    let nm = NelderMeadOptions::default();
    let mut group = c.benchmark_group("screening_pass_h4");
    group.bench_function("nelder_mead", |b| {
        b.iter(|| screen_pool_energy_reduction(&h, &reference, &pool, ScreeningMethod::NelderMead, &nm).unwrap())
    });
    group.bench_function("closed_form", |b| {
        b.iter(|| screen_pool_energy_reduction(&h, &reference, &pool, ScreeningMethod::ClosedForm, &nm).unwrap())
    });
    group.bench_function("gradient", |b| b.iter(|| screen_pool_gradient(&h, &reference, &pool).unwrap()));
    group.finish();
}

fn adjoint_gradient(c: &mut Criterion) {
    let lih = fixture("lih_1.546.prob").unwrap();
    let h = PenalizedHamiltonian::new(lih.hamiltonian.clone()).unwrap();
    let reference = lih.reference_state().unwrap();
    let elements: Vec<_> = qubit_pool(12).unwrap().into_iter().step_by(50).take(25).collect();
    let theta = vec![0.05; elements.len()];
    c.bench_function("energy_and_gradient_lih_25", |b| {
        b.iter(|| ansatz_energy_and_gradient(&h, &reference, &elements, black_box(&theta)).unwrap())
    });
}

criterion_group!(benches, evolutions, expectation, screening, adjoint_gradient);
criterion_main!(benches);
