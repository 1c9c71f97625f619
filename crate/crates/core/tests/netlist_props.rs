mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use sporlock_core::netlist::GateKind;
use sporlock_core::{emit_bench, parse_bench, Netlist};

// Recursive evaluation straight from the gate list, memoized by net name.
fn naive_eval(nl: &Netlist, inputs: &[bool], state: &[bool]) -> HashMap<String, bool> {
    let mut vals: HashMap<String, bool> = HashMap::new();
    for (n, &v) in nl.inputs().iter().zip(inputs) {
        vals.insert(n.clone(), v);
    }
    for (d, &v) in nl.dffs().iter().zip(state) {
        vals.insert(d.q.clone(), v);
    }
    let by_out: HashMap<&str, (GateKind, &[String])> = nl
        .gates()
        .iter()
        .map(|g| (g.output.as_str(), (g.kind, g.inputs.as_slice())))
        .collect();
    fn go(
        net: &str,
        by_out: &HashMap<&str, (GateKind, &[String])>,
        vals: &mut HashMap<String, bool>,
    ) -> bool {
        if let Some(&v) = vals.get(net) {
            return v;
        }
        let (kind, ins) = by_out[net];
        let args: Vec<bool> = ins.iter().map(|i| go(i, by_out, vals)).collect();
        let v = kind.eval(&args);
        vals.insert(net.to_string(), v);
        v
    }
    for g in nl.gates() {
        go(&g.output, &by_out, &mut vals);
    }
    vals
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn emit_parse_round_trip(seed in any::<u64>()) {
        let nl = common::random_netlist(seed, 4, 3, 12);
        let text = emit_bench(&nl);
        let back = parse_bench(&text, "rand").unwrap();
        prop_assert_eq!(&back, &nl);
        prop_assert_eq!(emit_bench(&back), text);
    }

    #[test]
    fn topological_matches_recursive(seed in any::<u64>(), bits in any::<u64>()) {
        let nl = common::random_netlist(seed, 4, 3, 12);
        let n_in = nl.inputs().len();
        let inputs: Vec<bool> = (0..n_in).map(|k| bits >> k & 1 == 1).collect();
        let state: Vec<bool> = (0..nl.dffs().len()).map(|k| bits >> (k + 8) & 1 == 1).collect();
        let (outs, next) = nl.eval_comb(&inputs, &state);
        let want = naive_eval(&nl, &inputs, &state);
        for (o, v) in nl.outputs().iter().zip(&outs) {
            prop_assert_eq!(want[o], *v);
        }
        for (d, v) in nl.dffs().iter().zip(&next) {
            prop_assert_eq!(want[&d.d], *v);
        }
    }
}

#[test]
fn s27_counts() {
    let nl = common::s27();
    assert_eq!(nl.stats().to_string(), "4/1/3/10");
}

#[test]
fn s27_round_trip() {
    let nl = common::s27();
    let again = parse_bench(&emit_bench(&nl), "s27").unwrap();
    assert_eq!(again, nl);
}
