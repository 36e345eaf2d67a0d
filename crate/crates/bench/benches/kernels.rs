//! Benchmarks for the hot paths: the chain-rule coefficient triangle,
//! exact series-coefficient construction, float evaluation of the reduced
//! hypergeometric series, and the exact residual verifier.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use selfsim_core::hypergeom::reduce_params;
use selfsim_core::kernels::a_coeff_oracle;
use selfsim_core::rational::int;
use selfsim_core::series::{coeff_closed_form, coeff_sequence};
use selfsim_core::{
    build_pfq, derive_params, eval_pfq, rat, residual_series, solution_family, ACoeffTable,
    EquationKind, EquationSpec,
};

/// Third-order model equation: x-third-derivative balanced against a
/// first y-derivative, unit weights.
fn model_spec() -> EquationSpec {
    EquationSpec::new(EquationKind::First, 3, 1, int(0), int(0)).expect("valid fixture")
}

/// A fractional-weight case exercising non-integer exponents everywhere.
fn fractional_spec() -> EquationSpec {
    EquationSpec::new(EquationKind::Third, 3, 2, rat(1, 2), int(1)).expect("valid fixture")
}

fn bench_triangle(c: &mut Criterion) {
    let a = rat(-5, 7);
    c.bench_function("triangle_fill_to_row_16", |b| {
        b.iter(|| {
            let table = ACoeffTable::new(black_box(a.clone()), 16);
            black_box(table.value(7, 16))
        })
    });
    c.bench_function("triangle_oracle_i5_j10", |b| {
        b.iter(|| black_box(a_coeff_oracle(black_box(5), black_box(10), &a)))
    });
}

fn bench_series(c: &mut Criterion) {
    let spec = fractional_spec();
    let params = derive_params(&spec).expect("valid fixture");
    c.bench_function("coeff_sequence_n50", |b| {
        b.iter(|| black_box(coeff_sequence(&spec, &params, 0, 50).expect("regular member")))
    });
    c.bench_function("coeff_closed_form_single_n50", |b| {
        b.iter(|| black_box(coeff_closed_form(&params, 3, 2, 0, 50).expect("regular member")))
    });
    c.bench_function("solution_family_n12", |b| {
        b.iter(|| black_box(solution_family(&spec, 12).expect("resonance-free")))
    });
}

fn bench_eval(c: &mut Criterion) {
    let family = solution_family(&model_spec(), 30).expect("resonance-free");
    let member = family.members[0].clone();
    let reduced = member.reduced_pfq().expect("reducible");
    c.bench_function("eval_pfq_adaptive_z1", |b| {
        b.iter(|| black_box(eval_pfq(&reduced, black_box(1.0), 1e-12, 10_000).expect("entire")))
    });
    c.bench_function("eval_solution_point", |b| {
        b.iter(|| {
            black_box(
                member
                    .eval(black_box(1.3), black_box(0.8), 1e-12, 10_000)
                    .expect("entire"),
            )
        })
    });
}

fn bench_residual(c: &mut Criterion) {
    let family = solution_family(&fractional_spec(), 12).expect("resonance-free");
    let member = family.members[1].clone();
    c.bench_function("residual_series_n12", |b| {
        b.iter(|| black_box(residual_series(&member).expect("aligned images")))
    });
    let full = build_pfq(&family.params, 3, 2, 1).expect("valid member");
    c.bench_function("reduce_params_member", |b| {
        b.iter(|| black_box(reduce_params(&full)))
    });
}

criterion_group!(
    benches,
    bench_triangle,
    bench_series,
    bench_eval,
    bench_residual
);
criterion_main!(benches);
