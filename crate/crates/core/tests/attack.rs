mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sporlock_core::attack::{
    recover_key_sequences, recover_window, solve_clauses, to_cnf, unroll, validate_keys,
    AttackConfig, Oracle, SolveResult, WindowOutcome,
};
use sporlock_core::bits::Bits;
use sporlock_core::encrypt;
use sporlock_core::sim::{simulate, Stimulus};

fn toy_case(seed: u64) -> (sporlock_core::EncryptedDesign, Vec<usize>, Vec<Vec<Bits>>) {
    let enc = encrypt(&common::toy(), &common::toy_config(seed)).unwrap();
    let ws = enc.schedule.windows(200);
    let starts = ws.iter().map(|w| w.start).take(5).collect();
    let truth = ws
        .iter()
        .map(|w| enc.schedule.key_table[w.chain].clone())
        .collect();
    (enc, starts, truth)
}

#[test]
fn recovers_schedule_keys_with_known_timing() {
    for seed in 1..=4 {
        let (enc, starts, truth) = toy_case(seed);
        let oracle = Oracle::new(common::toy());
        let cfg = AttackConfig {
            max_seq: 3,
            ..AttackConfig::default()
        };
        let rep = recover_key_sequences(&enc.netlist, &oracle, &starts, 2, &cfg).unwrap();
        assert_eq!(rep.keys, truth[..3].to_vec(), "seed {seed}");
        assert!(rep.stopped.is_none());
        assert!(rep.oracle_queries > 0);
        let v = validate_keys(&enc.netlist, &oracle, &starts, 2, &rep.keys, 1000, 3).unwrap();
        assert!(v.compared >= 1000 && v.consistent(), "{v:?}");
    }
}

#[test]
fn wrong_keys_fail_validation() {
    let (enc, starts, truth) = toy_case(1);
    let oracle = Oracle::new(common::toy());
    let mut keys = truth[..2].to_vec();
    let v = keys[1][0].get(0);
    keys[1][0].set(0, !v);
    let val = validate_keys(&enc.netlist, &oracle, &starts, 2, &keys, 1000, 3).unwrap();
    assert!(!val.consistent());
}

#[test]
fn ignorant_attacker_finds_no_consistent_key() {
    let (enc, starts, truth) = toy_case(1);
    let oracle = Oracle::new(common::toy());
    let cfg = AttackConfig::default();
    for q in 1..3 {
        let true_start = starts[q];
        let lo = starts[q - 1] + 2 + 1;
        let hi = starts.get(q + 1).map_or(true_start + 6, |&n| n - 3);
        for guess in lo..=hi {
            if guess == true_start {
                continue;
            }
            let mut timing = starts[..q].to_vec();
            timing.push(guess);
            let r =
                recover_window(&enc.netlist, &oracle, &timing, 2, q, &truth[..q], &cfg).unwrap();
            if let WindowOutcome::Recovered(k) = r.outcome {
                let mut keys = truth[..q].to_vec();
                keys.push(k);
                let v = validate_keys(&enc.netlist, &oracle, &timing, 2, &keys, 1000, 5).unwrap();
                assert!(
                    !v.consistent(),
                    "window {q} guessed at {guess} passed validation"
                );
            }
        }
    }
}

#[test]
fn budget_truncates_attack() {
    let (enc, starts, _) = toy_case(1);
    let oracle = Oracle::new(common::toy());
    let cfg = AttackConfig {
        budget: Some(1),
        ..AttackConfig::default()
    };
    let rep = recover_key_sequences(&enc.netlist, &oracle, &starts, 2, &cfg).unwrap();
    assert!(rep.budget_exhausted);
    assert!(rep.keys.len() < starts.len());
}

#[test]
fn oracle_rejects_wrong_width() {
    let oracle = Oracle::new(common::toy());
    assert!(oracle.query(&[Bits::zeros(3)]).is_err());
}

#[test]
fn dimacs_round_trips_through_solver() {
    let nl = common::s27();
    let u = unroll(&nl, 3);
    let y = u.outputs()[2][0];
    let (cnf, _) = to_cnf(&u, &[(y, true)]);
    let text = cnf.to_dimacs();
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap().split_whitespace().collect();
    assert_eq!(header[..2], ["p", "cnf"]);
    let clauses: Vec<Vec<i32>> = lines
        .map(|l| {
            let mut v: Vec<i32> = l.split_whitespace().map(|x| x.parse().unwrap()).collect();
            assert_eq!(v.pop(), Some(0));
            v
        })
        .collect();
    assert_eq!(clauses, cnf.clauses);
    let n: usize = header[2].parse().unwrap();
    assert!(solve_clauses(n, &clauses, None).0.is_sat());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn unroll_matches_simulation(seed in any::<u64>(), frames in 1usize..=5) {
        let nl = common::random_netlist(seed, 4, 3, 10);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let ins: Vec<Vec<bool>> = (0..frames)
            .map(|_| (0..nl.inputs().len()).map(|_| rng.gen()).collect())
            .collect();
        let stim = Stimulus::workload_only(ins.iter().cloned().map(Bits::from_bools).collect());
        let tr = simulate(&nl, &stim, frames).unwrap();
        let u = unroll(&nl, frames);
        prop_assert_eq!(u.gates().len(), frames * nl.gates().len());
        let outs = u.eval_outputs(&ins);
        for (o, cyc) in outs.iter().zip(&tr.cycles) {
            prop_assert_eq!(o.as_slice(), cyc.outputs.as_slice());
        }
    }

    #[test]
    fn cnf_models_decode_to_evaluations(seed in any::<u64>()) {
        let nl = common::random_netlist(seed, 4, 0, 8);
        let u = unroll(&nl, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ins: Vec<bool> = (0..nl.inputs().len()).map(|_| rng.gen()).collect();
        let pins: Vec<(usize, bool)> = u.inputs()[0].iter().copied().zip(ins.iter().copied()).collect();
        let (cnf, lits) = to_cnf(&u, &pins);
        let model = match solve_clauses(cnf.n_vars, &cnf.clauses, None).0 {
            SolveResult::Sat(m) => m,
            r => panic!("{r:?}"),
        };
        let nets = nl.eval_nets(&ins, &[]);
        for (node, &l) in lits.iter().enumerate().skip(1) {
            let (_, net) = u.origin(node).unwrap();
            let v = model[l.unsigned_abs() as usize - 1] == (l > 0);
            prop_assert_eq!(v, nets[net.idx()]);
        }
    }
}
