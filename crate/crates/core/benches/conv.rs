use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use hexgconv::gconv::{gconv_first, gconv_full, GFeatureMap};
use hexgconv::hexconv::{hexconv, Backend, ConvSpec};
use hexgconv::rng::Instances;
use hexgconv::{Execution, Group};

const MODES: [(Execution, &str); 2] = [
    (Execution::Sequential, "sequential"),
    (Execution::Parallel, "parallel"),
];

fn planar(c: &mut Criterion) {
    let mut rng = Instances::new(1);
    let f = rng.disk_image(24, 8, 1);
    let psi = rng.filter(16, 8, 2);
    let mut group = c.benchmark_group("hexconv");
    for backend in Backend::ALL {
        for (exec, name) in MODES {
            let spec = ConvSpec::new(backend).with_exec(exec);
            group.bench_function(BenchmarkId::new(backend.name(), name), |b| {
                b.iter(|| hexconv(&f, &psi, spec).unwrap())
            });
        }
    }
    group.finish();
}

fn group_conv(c: &mut Criterion) {
    let mut rng = Instances::new(2);
    let mut bench = c.benchmark_group("gconv");
    bench.sample_size(20);
    for g in [Group::P6, Group::P6m] {
        let f = rng.disk_image(16, 4, 1);
        let psi1 = rng.filter(4, 4, 1);
        let fg = GFeatureMap::new(g, rng.disk_image(16, 4, g.order())).unwrap();
        let psi2 = rng.filter(4, 4 * g.order(), 1);
        for (exec, name) in MODES {
            let spec = ConvSpec::default().with_exec(exec);
            bench.bench_function(BenchmarkId::new(format!("{g}-first"), name), |b| {
                b.iter(|| gconv_first(&f, &psi1, g, spec).unwrap())
            });
            bench.bench_function(BenchmarkId::new(format!("{g}-full"), name), |b| {
                b.iter(|| gconv_full(&fg, &psi2, g, spec).unwrap())
            });
        }
    }
    bench.finish();
}

criterion_group!(benches, planar, group_conv);
criterion_main!(benches);
