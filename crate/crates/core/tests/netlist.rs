use std::collections::HashMap;

use ganti::blockgen::build_antisat;
use ganti::fixtures;
use ganti::netlist::*;
use ganti::satcore::{SatBackend, SolveResult, Solver, Var};
use ganti::truthsets::{BlockType, Key, LockBlock};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AND2: &str = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)\n";

#[test]
fn bench_roundtrip() {
    let net = parse_bench(AND2).unwrap();
    let text = emit_bench(&net);
    assert_eq!(parse_bench(&text).unwrap(), net);
    assert_eq!(emit_bench(&parse_bench(&text).unwrap()), text);

    let c17 = fixtures::c17();
    let again = parse_bench(&emit_bench(&c17)).unwrap();
    assert_eq!(again, c17);
}

#[test]
fn keyinput_prefix_marks_keys() {
    let net = parse_bench("INPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\ny = XOR(a, keyinput0)\n").unwrap();
    assert_eq!(net.num_inputs(), 1);
    assert_eq!(net.num_keys(), 1);
}

#[test]
fn parse_errors_carry_line_numbers() {
    let e = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = FOO(a)\n").unwrap_err();
    assert!(matches!(e, NetlistError::Parse { line: 4, .. }), "{e}");
    assert!(parse_bench("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\n").is_err());
    let cyc = parse_bench("INPUT(a)\nOUTPUT(y)\np = AND(a, q)\nq = AND(a, p)\ny = BUF(p)\n").unwrap_err();
    assert!(matches!(cyc, NetlistError::Cycle(_) | NetlistError::Parse { .. }), "{cyc}");
    assert!(parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUF(a)\n").is_err());
}

#[test]
fn simulate_basic_gates() {
    let net = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(p)\nOUTPUT(q)\np = AND(a, b)\nq = XOR(a, b)\n").unwrap();
    let out = net.simulate(&HashMap::from([("a".to_string(), true), ("b".to_string(), true)])).unwrap();
    assert!(out["p"]);
    assert!(!out["q"]);
    assert!(matches!(
        net.simulate(&HashMap::from([("a".to_string(), true)])),
        Err(NetlistError::MissingAssignment(_))
    ));
}

#[test]
fn antisat_structure() {
    let (b, _) = build_antisat(4, BlockType::Type0).unwrap();
    let net = synthesize_block(&b).unwrap();
    let h = net.gate_histogram();
    assert_eq!(h[&GateKind::Xor], 8);
    assert_eq!(h[&GateKind::Nand], 1);
    // f tree (3) + g tree below the NAND (2) + final gate.
    assert_eq!(h[&GateKind::And], 6);
    assert_eq!(net.num_keys(), 8);
    let g = net.gate_driving(net.wire(G_GATE).unwrap()).unwrap();
    assert_eq!(g.kind, GateKind::And);
}

#[test]
fn example1_f_is_one_and() {
    let b = fixtures::example1().unwrap();
    let net = synthesize_block(&b).unwrap();
    let f = net.gate_driving(net.wire("lock_f").unwrap()).unwrap();
    assert_eq!(f.kind, GateKind::And);
    let names: Vec<&str> = f.inputs.iter().map(|&w| net.wire_name(w)).collect();
    for (name, bit) in names.iter().zip([3, 2]) {
        let not = net.gate_driving(net.wire(name).unwrap()).unwrap();
        assert_eq!(not.kind, GateKind::Not);
        assert_eq!(net.wire_name(not.inputs[0]), format!("lock_f_l{bit}"));
    }
}

fn block_netlist_agrees(b: &LockBlock, vectors: usize, seed: u64) {
    let net = synthesize_block(b).unwrap();
    let n = b.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mask = (1u32 << n) - 1;
    for _ in 0..vectors {
        let (x, kf, kg) = (rng.gen::<u32>() & mask, rng.gen::<u32>() & mask, rng.gen::<u32>() & mask);
        let key = Key::new(kf, kg);
        let xs: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        assert_eq!(net.eval(&xs, &key.to_bits(n)).unwrap(), vec![b.eval(x, key)], "x={x} {key:?}");
    }
}

#[test]
fn synthesized_blocks_match_truth_tables() {
    let mut blocks = vec![fixtures::example1().unwrap(), fixtures::example2().unwrap(), fixtures::example3().unwrap()];
    for ty in [BlockType::Type0, BlockType::Type1] {
        blocks.push(build_antisat(6, ty).unwrap().0);
        blocks.push(ganti::blockgen::build_complementary(&ganti::CompSpec { block_type: ty, ..ganti::CompSpec::canonical(7, 3) }).unwrap().0);
        blocks.push(ganti::blockgen::build_noncomplementary(&ganti::NonCompSpec { block_type: ty, ..ganti::NonCompSpec::canonical(7, 3) }).unwrap().0);
    }
    for (i, b) in blocks.iter().enumerate() {
        block_netlist_agrees(b, 1000, i as u64);
    }
}

#[test]
fn integrate_and_host() {
    let host = parse_bench(AND2).unwrap();
    let (b, _) = build_antisat(2, BlockType::Type0).unwrap();
    let locked = integrate(&host, &synthesize_block(&b).unwrap(), "y", false).unwrap();
    let right = Key::new(1, 1).to_bits(2);
    for x in 0..4u32 {
        let xs = [x & 1 == 1, x & 2 == 2];
        assert_eq!(locked.eval(&xs, &right).unwrap(), host.eval(&xs, &[]).unwrap());
    }
    // Wrong key with e = 1: exactly one pattern differs.
    let wrong = Key::new(0, 1);
    assert_eq!(b.corruptibility(wrong), 1);
    let diffs = (0..4u32)
        .filter(|&x| {
            let xs = [x & 1 == 1, x & 2 == 2];
            locked.eval(&xs, &wrong.to_bits(2)).unwrap() != host.eval(&xs, &[]).unwrap()
        })
        .count();
    assert_eq!(diffs, 1);
    assert!(integrate(&host, &synthesize_block(&b).unwrap(), "nope", false).is_err());
}

#[test]
fn integrate_into_c17_matches_host_under_right_key() {
    let host = fixtures::c17();
    for n in [3u32, 5, 8, 10] {
        let (b, fam) = build_antisat(n, BlockType::Type0).unwrap();
        let locked = integrate(&host, &synthesize_block(&b).unwrap(), fixtures::C17_TARGET, false).unwrap();
        assert_eq!(locked.num_inputs(), 5.max(n as usize));
        let key = fam.representative().unwrap().to_bits(n);
        let oracle = Oracle::from_host(&host, &locked).unwrap();
        for x in 0..1u32 << locked.num_inputs() {
            let xs: Vec<bool> = (0..locked.num_inputs()).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(locked.eval(&xs, &key).unwrap(), oracle.query(&xs).unwrap());
        }
    }
}

#[test]
fn type1_blocks_integrate_with_xnor() {
    let host = fixtures::c17();
    for n in [4u32, 7] {
        let (b, fam) = build_antisat(n, BlockType::Type1).unwrap();
        assert!(b.correct_output());
        let locked = integrate(&host, &synthesize_block(&b).unwrap(), fixtures::C17_TARGET, true).unwrap();
        let g = locked.gate_driving(locked.wire(fixtures::C17_TARGET).unwrap()).unwrap();
        assert_eq!(g.kind, GateKind::Xnor);
        let oracle = Oracle::from_host(&host, &locked).unwrap();
        let key = fam.representative().unwrap().to_bits(n);
        for x in 0..1u32 << locked.num_inputs() {
            let xs: Vec<bool> = (0..locked.num_inputs()).map(|i| x >> i & 1 == 1).collect();
            assert_eq!(locked.eval(&xs, &key).unwrap(), oracle.query(&xs).unwrap());
        }
    }
}

#[test]
fn tseitin_examples() {
    let net = parse_bench(AND2).unwrap();
    let cnf = tseitin(&net);
    assert_eq!(cnf.clauses.len(), 3);
    let xor = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, b)\n").unwrap();
    assert_eq!(tseitin(&xor).clauses.len(), 4);
    assert!(tseitin(&xor).num_vars as usize >= xor.num_wires());
}

fn tseitin_differential(net: &Netlist, vectors: usize, seed: u64) {
    let cnf = tseitin(net);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (m, k) = (net.num_inputs(), net.num_keys());
    for _ in 0..vectors {
        let xs: Vec<bool> = (0..m).map(|_| rng.gen()).collect();
        let ks: Vec<bool> = (0..k).map(|_| rng.gen()).collect();
        let want = net.eval(&xs, &ks).unwrap();
        let mut s = Solver::new();
        for c in &cnf.clauses {
            ganti::satcore::ClauseSink::add_clause(&mut s, c);
        }
        let mut assume = Vec::new();
        for (&w, &v) in net.primary_inputs().iter().zip(&xs).chain(net.key_inputs().iter().zip(&ks)) {
            assume.push(cnf.wire_vars[w.index()].positive().xor(!v));
        }
        // Forcing the simulated outputs is satisfiable; flipping any is not.
        let outs: Vec<Var> = net.outputs().iter().map(|w| cnf.wire_vars[w.index()]).collect();
        let mut ok = assume.clone();
        ok.extend(outs.iter().zip(&want).map(|(v, &b)| v.positive().xor(!b)));
        match s.solve_with(&ok) {
            SolveResult::Sat(model) => assert!(model.satisfies(&cnf.clauses)),
            other => panic!("expected SAT, got {other:?}"),
        }
        for (i, v) in outs.iter().enumerate() {
            let mut bad = assume.clone();
            bad.push(v.positive().xor(want[i]));
            assert!(s.solve_with(&bad).is_unsat());
        }
    }
}

#[test]
fn tseitin_matches_simulation() {
    tseitin_differential(&fixtures::c17(), 1000, 1);
    let (b, _) = build_antisat(6, BlockType::Type1).unwrap();
    let locked = integrate(&fixtures::c17(), &synthesize_block(&b).unwrap(), "N23", true).unwrap();
    tseitin_differential(&locked, 1000, 2);
    let noncomp = ganti::blockgen::build_noncomplementary(&ganti::NonCompSpec::canonical(6, 3)).unwrap().0;
    tseitin_differential(&synthesize_block(&noncomp).unwrap(), 1000, 3);
}

#[test]
fn miter_examples() {
    let host = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = XOR(a, a)\n").unwrap();
    let (b, _) = build_antisat(2, BlockType::Type0).unwrap();
    let locked = integrate(&host, &synthesize_block(&b).unwrap(), "y", false).unwrap();
    let miter = build_miter(&locked).unwrap();
    let mut s = Solver::new();
    for _ in 0..miter.cnf.num_vars {
        ganti::satcore::ClauseSink::new_var(&mut s);
    }
    for c in &miter.cnf.clauses {
        ganti::satcore::ClauseSink::add_clause(&mut s, c);
    }
    assert!(s.solve().is_sat());
    assert!(matches!(build_miter(&host), Err(NetlistError::Unsupported(_))));
}

#[test]
fn dimacs_export_is_stable() {
    let net = fixtures::c17();
    let a = tseitin(&net);
    let b = tseitin(&net);
    assert_eq!(a.to_dimacs(), b.to_dimacs());
    assert!(a.to_dimacs().starts_with(&format!("p cnf {} {}", a.num_vars, a.clauses.len())));
    let map = VarMap::new(&net, &a);
    assert_eq!(map.inputs.len(), 5);
    assert_eq!(serde_json::to_string(&map).unwrap(), serde_json::to_string(&VarMap::new(&net, &b)).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn random_netlists_roundtrip_and_encode(
        gates in proptest::collection::vec((0usize..8, any::<u32>(), any::<u32>(), any::<u32>()), 1..25)
    ) {
        let kinds = [GateKind::And, GateKind::Nand, GateKind::Or, GateKind::Nor, GateKind::Xor, GateKind::Xnor, GateKind::Not, GateKind::Buf];
        let mut text = String::from("INPUT(i0)\nINPUT(i1)\nINPUT(i2)\nINPUT(keyinput0)\n");
        let mut wires = vec!["i0".to_string(), "i1".to_string(), "i2".to_string(), "keyinput0".to_string()];
        let mut body = String::new();
        for (gi, (k, a, b, c)) in gates.iter().enumerate() {
            let kind = kinds[*k];
            let pick = |r: u32| wires[r as usize % wires.len()].clone();
            let ins = if kind.is_unary() { vec![pick(*a)] } else if c % 3 == 0 { vec![pick(*a), pick(*b), pick(*c)] } else { vec![pick(*a), pick(*b)] };
            let out = format!("w{gi}");
            body.push_str(&format!("{out} = {}({})\n", kind.name(), ins.join(", ")));
            wires.push(out);
        }
        text.push_str(&format!("OUTPUT({})\n", wires.last().unwrap()));
        text.push_str(&body);
        let net = parse_bench(&text).unwrap();
        // Emission is in topological order, so compare text fixpoint and function.
        let text1 = emit_bench(&net);
        let back = parse_bench(&text1).unwrap();
        prop_assert_eq!(emit_bench(&back), text1);
        for x in 0..16u32 {
            let xs = [x & 1 == 1, x & 2 == 2, x & 4 == 4];
            let ks = [x & 8 == 8];
            prop_assert_eq!(back.eval(&xs, &ks).unwrap(), net.eval(&xs, &ks).unwrap());
        }
        tseitin_differential(&net, 8, gates.len() as u64);
    }
}
