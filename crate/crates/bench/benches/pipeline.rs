use std::hint::black_box;
use std::path::Path;

use criterion::{criterion_group, criterion_main, Criterion};
use sporlock_core::attack::{recover_key_sequences, to_cnf, unroll, AttackConfig, Oracle};
use sporlock_core::eval::{run_case, CaseId};
use sporlock_core::sim::simulate_lanes;
use sporlock_core::{emit_bench, encrypt, parse_bench, EncryptConfig};

fn s27_text() -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks/iscas89/s27.bench");
    std::fs::read_to_string(p).expect("s27 benchmark")
}

const TOY: &str = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\nOUTPUT(z)\nq = DFF(d)\nd = XOR(a, q)\ny = AND(b, q)\nz = OR(a, d)\n";

fn pipeline(c: &mut Criterion) {
    let text = s27_text();
    let nl = parse_bench(&text, "s27").unwrap();
    let cfg = EncryptConfig::default();
    let enc = encrypt(&nl, &cfg).unwrap();
    let enc_text = emit_bench(&enc.netlist);

    c.bench_function("parse_encrypted_s27", |b| {
        b.iter(|| parse_bench(black_box(&enc_text), "e").unwrap())
    });
    c.bench_function("encrypt_s27", |b| {
        b.iter(|| encrypt(black_box(&nl), &cfg).unwrap())
    });

    let inputs: Vec<Vec<u64>> = (0..500u64)
        .map(|t| {
            (0..4)
                .map(|k| t.wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(k))
                .collect()
        })
        .collect();
    c.bench_function("simulate_lanes_500x64", |b| {
        b.iter(|| simulate_lanes(black_box(&enc.netlist), &inputs))
    });
    c.bench_function("hd_case2_256_runs", |b| {
        b.iter(|| run_case(&nl, &enc, CaseId::Case2, 256, 500, 1).unwrap())
    });

    let u = unroll(&enc.netlist, 16);
    c.bench_function("cnf_unroll_16", |b| b.iter(|| to_cnf(black_box(&u), &[])));

    let toy = parse_bench(TOY, "toy").unwrap();
    let toy_cfg = EncryptConfig {
        lfsr_width: 3,
        enc_out_width: 2,
        key_len: 2,
        sbj_bits: 1,
        coverage: 1.0,
        master_seed: 1,
        ..EncryptConfig::default()
    };
    let toy_enc = encrypt(&toy, &toy_cfg).unwrap();
    let starts: Vec<usize> = toy_enc
        .schedule
        .windows(100)
        .iter()
        .map(|w| w.start)
        .take(4)
        .collect();
    let attack_cfg = AttackConfig {
        max_seq: 3,
        ..AttackConfig::default()
    };
    c.bench_function("attack_toy_3_windows", |b| {
        b.iter(|| {
            let oracle = Oracle::new(toy.clone());
            recover_key_sequences(&toy_enc.netlist, &oracle, &starts, 2, &attack_cfg).unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = pipeline
}
criterion_main!(benches);
