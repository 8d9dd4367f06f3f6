use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use rindler_discord::correlations::{geometric_discord, objective_hs, quantum_discord, trace_norm_to_chi, DiscordSide};
use rindler_discord::linalg::eig_hermitian;
use rindler_discord::random;
use rindler_discord::states::boson_rho_ar;
use rindler_discord::{BlochVector, OptimizerConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn objectives(c: &mut Criterion) {
    let mut group = c.benchmark_group("objective_hs");
    for n in [64usize, 128, 256] {
        let rho = boson_rho_ar(0.9, n.into()).unwrap();
        let x = BlochVector::from_angles(0.4, 1.1);
        group.bench_with_input(BenchmarkId::from_parameter(n), &rho, |b, rho| b.iter(|| objective_hs(black_box(rho), &x).unwrap()));
    }
    group.finish();
}

fn discords(c: &mut Criterion) {
    let cfg = OptimizerConfig::default().with_grid(8, 8);
    let rho = boson_rho_ar(0.9, 64.into()).unwrap();
    c.bench_function("geometric_discord_a_n64", |b| b.iter(|| geometric_discord(black_box(&rho), DiscordSide::A, &cfg).unwrap()));
    c.bench_function("quantum_discord_a_n64", |b| b.iter(|| quantum_discord(black_box(&rho), DiscordSide::A, &cfg).unwrap()));
    c.bench_function("quantum_discord_fock_n256", |b| {
        let rho = boson_rho_ar(0.99, 256.into()).unwrap();
        b.iter(|| quantum_discord(black_box(&rho), DiscordSide::BFockBound, &cfg).unwrap())
    });
    c.bench_function("trace_norm_to_chi_n512", |b| b.iter(|| trace_norm_to_chi(black_box(0.99), 512.into()).unwrap()));
}

fn eigensolver(c: &mut Criterion) {
    let mut group = c.benchmark_group("eig_hermitian_dense");
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [32usize, 128] {
        let h = random::hermitian(n, &mut rng);
        group.bench_with_input(BenchmarkId::from_parameter(n), &h, |b, h| b.iter(|| eig_hermitian(black_box(h)).unwrap()));
    }
    group.finish();
}

criterion_group!(benches, objectives, discords, eigensolver);
criterion_main!(benches);
