#![allow(dead_code)]

use std::path::PathBuf;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sporlock_core::netlist::{Dff, Gate, GateKind};
use sporlock_core::{parse_bench, Netlist};

/// Directory holding `<name>.bench` files. `SPORLOCK_BENCH_DIR` overrides
/// the bundled `benchmarks/iscas89`.
pub fn bench_dir() -> PathBuf {
    match std::env::var_os("SPORLOCK_BENCH_DIR") {
        Some(d) => PathBuf::from(d),
        None => PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks/iscas89"),
    }
}

pub fn load(name: &str) -> Result<Netlist, String> {
    let path = bench_dir().join(format!("{name}.bench"));
    let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_bench(&text, name).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn s27() -> Netlist {
    load("s27").expect("s27 is bundled")
}

/// A random well-formed sequential netlist.
pub fn random_netlist(seed: u64, max_in: usize, max_dff: usize, max_gates: usize) -> Netlist {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_in = rng.gen_range(1..=max_in);
    let n_dff = rng.gen_range(0..=max_dff);
    let n_gates = rng.gen_range(1..=max_gates);
    let inputs: Vec<String> = (0..n_in).map(|k| format!("i{k}")).collect();
    let qs: Vec<String> = (0..n_dff).map(|k| format!("q{k}")).collect();
    let mut avail: Vec<String> = inputs.iter().chain(&qs).cloned().collect();
    let mut gates = Vec::new();
    for g in 0..n_gates {
        let kind = *GateKind::ALL.choose(&mut rng).unwrap();
        let arity = if kind.is_unary() {
            1
        } else {
            rng.gen_range(2..=3)
        };
        let ins = (0..arity)
            .map(|_| avail.choose(&mut rng).unwrap().clone())
            .collect();
        let out = format!("g{g}");
        gates.push(Gate::new(out.clone(), kind, ins));
        avail.push(out);
    }
    let dffs = qs
        .iter()
        .map(|q| Dff::new(q.clone(), avail.choose(&mut rng).unwrap().clone()))
        .collect();
    let n_out = rng.gen_range(1..=avail.len().min(4));
    let outputs = avail.choose_multiple(&mut rng, n_out).cloned().collect();
    gates.shuffle(&mut rng);
    Netlist::new("rand", inputs, outputs, gates, dffs).expect("generator builds valid netlists")
}

pub const TOY: &str = "\
INPUT(a)
INPUT(b)
OUTPUT(y)
OUTPUT(z)
q = DFF(d)
d = XOR(a, q)
y = AND(b, q)
z = OR(a, d)
";

/// Toy configuration for the attack: i = 2, c = 2, l = 1, n = 3, m = 2.
pub fn toy_config(seed: u64) -> sporlock_core::EncryptConfig {
    sporlock_core::EncryptConfig {
        lfsr_width: 3,
        lfsr_taps: None,
        enc_out_width: 2,
        key_len: 2,
        sbj_bits: 1,
        coverage: 1.0,
        master_seed: seed,
    }
}

pub fn toy() -> Netlist {
    parse_bench(TOY, "toy").unwrap()
}
