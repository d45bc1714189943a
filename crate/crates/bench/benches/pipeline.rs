use std::hint::black_box;
use std::path::PathBuf;

use criterion::{criterion_group, criterion_main, Criterion};
use exstruct_core::defectcore::Analysis;
use exstruct_core::shell::{load, parse_input, run, Command, Loaded, Options};

fn fixture(file: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(file)
}

fn loaded(file: &str, p: Option<u64>) -> Loaded {
    load(parse_input(&fixture(file)).unwrap(), p).unwrap()
}

fn tables(c: &mut Criterion) {
    for file in ["a2.json", "dual.json", "a3.json"] {
        let l = loaded(file, None);
        c.bench_function(&format!("analysis/{file}"), |b| {
            b.iter(|| Analysis::new(black_box(l.atlas.clone())))
        });
    }
}

fn oracle(c: &mut Criterion) {
    let an = Analysis::new(loaded("a3.json", Some(2)).atlas);
    c.bench_function("oracle/a3.json p=2", |b| {
        b.iter(|| an.enumerate_substructures_oracle().unwrap())
    });
    c.bench_function("serre/a3.json p=2", |b| b.iter(|| an.serre_subsets()));
}

fn verify(c: &mut Criterion) {
    let opts = Options {
        samples: Some(20),
        ..Default::default()
    };
    let mut g = c.benchmark_group("verify");
    g.sample_size(10);
    for file in ["a2.json", "a3.json"] {
        let path = fixture(file);
        g.bench_function(file, |b| b.iter(|| run(&Command::Verify, &path, &opts)));
    }
    g.finish();
}

criterion_group!(benches, tables, oracle, verify);
criterion_main!(benches);
