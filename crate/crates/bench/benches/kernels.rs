use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use lwreg_bench::{catalog, observers};
use lwreg_core::association::testfn::{LineFn, LineTest};
use lwreg_core::distalg::{numeric_pairing, solve_euler_delta, Atom};
use lwreg_core::fields::{default_fd_step, FieldModel};
use lwreg_core::regularization::HeavisideFamily;
use lwreg_core::retarded::{kinematics, DEFAULT_TOL};
use lwreg_core::selfenergy::{mass_renormalize, u_ele, u_mag};

fn retarded(c: &mut Criterion) {
    let mut g = c.benchmark_group("kinematics_100");
    for w in catalog() {
        let obs = observers(&w, 100, (0.1, 5.0));
        g.bench_with_input(BenchmarkId::from_parameter(w), &obs, |b, obs| {
            b.iter(|| {
                for o in obs {
                    black_box(kinematics(&w, &o.x, DEFAULT_TOL).unwrap());
                }
            })
        });
    }
    g.finish();
}

fn box_phi(c: &mut Criterion) {
    let m = FieldModel::new(HeavisideFamily::bump());
    let eps = 0.05;
    let w = catalog()[3];
    let obs = observers(&w, 50, (eps, 2.0 * eps));
    c.bench_function("box_phi_analytic_50", |b| {
        b.iter(|| {
            for o in &obs {
                black_box(m.box_phi_analytic(&w, &o.x, eps).unwrap());
            }
        })
    });
    c.bench_function("box_phi_fd_extrapolated_50", |b| {
        b.iter(|| {
            for o in &obs {
                black_box(
                    m.box_phi_fd_extrapolated(&w, &o.x, eps, default_fd_step(&o.x, o.xi, eps))
                        .unwrap(),
                );
            }
        })
    });
}

fn self_energy(c: &mut Criterion) {
    let f = HeavisideFamily::bump();
    c.bench_function("u_ele_u_mag", |b| {
        b.iter(|| black_box(u_ele(&f, 1.0, 0.01) + u_mag(&f, 1.0, 0.01)))
    });
    c.bench_function("mass_renormalize", |b| {
        b.iter(|| black_box(mass_renormalize(&f, 1.0, 1.0, 1e4).unwrap()))
    });
}

fn distalg(c: &mut Criterion) {
    c.bench_function("solve_euler_delta_8", |b| {
        b.iter(|| black_box(solve_euler_delta(8).unwrap()))
    });
    let phi = LineFn::Base(LineTest::new(vec![1.0, 0.3, -0.2], 0.1, 1.0));
    c.bench_function("finite_part_pairing_k4", |b| {
        b.iter(|| black_box(numeric_pairing(Atom::FpPlus(4), &phi).unwrap()))
    });
}

criterion_group!(benches, retarded, box_phi, self_energy, distalg);
criterion_main!(benches);
