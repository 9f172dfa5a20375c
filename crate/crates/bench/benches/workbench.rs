//! Criterion benchmarks over the hot paths: rewriting to normal form,
//! the coproduct, pair construction with its Serre defects, module and
//! Gram-matrix assembly, and the real-form scaling search.

use std::collections::{BTreeMap, BTreeSet};

use criterion::{criterion_group, criterion_main, Criterion};

use qsp_core::involution::validate_satake;
use qsp_core::pair::{build_pair, serre_defect, PairPresentation};
use qsp_core::repn::{find_real_form_scaling, invariants, simple_module};
use qsp_core::rootdata::{cartan_init, CartanSpec, DiagramMap};
use qsp_core::text::parse_expression;
use qsp_core::uq::hopf;
use qsp_core::AlgebraContext;

fn context(label: &str) -> AlgebraContext {
    let datum = cartan_init(&CartanSpec::Series(label.into())).expect("known series");
    AlgebraContext::with_defaults(datum).expect("default bounds")
}

fn split_pair(label: &str) -> PairPresentation {
    let datum = cartan_init(&CartanSpec::Series(label.into())).expect("known series");
    let theta = validate_satake(&datum, &BTreeSet::new(), &DiagramMap::Id).expect("split datum");
    let ctx = AlgebraContext::with_defaults(datum).expect("default bounds");
    build_pair(theta, ctx, BTreeMap::new(), BTreeMap::new()).expect("split pair")
}

fn bench_normal_form(c: &mut Criterion) {
    let ctx = context("B2");
    c.bench_function("nf: B2 six-letter cross product", |b| {
        b.iter(|| parse_expression(&ctx, "x1 x2 x1 y1 y2 y1").expect("in budget"))
    });
}

fn bench_coproduct(c: &mut Criterion) {
    let ctx = context("A2");
    let a = parse_expression(&ctx, "x1 y2 x2 y1").expect("in budget");
    c.bench_function("coproduct: A2 four-letter word", |b| {
        b.iter(|| hopf::coproduct(&ctx, &a).expect("in budget"))
    });
}

fn bench_pair_relations(c: &mut Criterion) {
    let pair = split_pair("A2");
    c.bench_function("serre defect: split A2", |b| {
        b.iter(|| serre_defect(&pair, 0, 1).expect("defect computes"))
    });
}

fn bench_module_assembly(c: &mut Criterion) {
    let ctx = context("A2");
    c.bench_function("simple module: A2 adjoint", |b| {
        b.iter(|| simple_module(&ctx, &[1, 1]).expect("dominant weight"))
    });
}

fn bench_invariants(c: &mut Criterion) {
    let pair = split_pair("A1");
    let module = simple_module(&pair.ctx, &[4]).expect("dominant weight");
    c.bench_function("invariants: rank-one five-dimensional module", |b| {
        b.iter(|| invariants(&module, &pair).expect("same datum"))
    });
}

fn bench_scaling_search(c: &mut Criterion) {
    let pair = split_pair("A1");
    c.bench_function("real-form scaling: rank one", |b| {
        b.iter(|| find_real_form_scaling(&pair).expect("search completes"))
    });
}

criterion_group!(
    benches,
    bench_normal_form,
    bench_coproduct,
    bench_pair_relations,
    bench_module_assembly,
    bench_invariants,
    bench_scaling_search
);
criterion_main!(benches);
