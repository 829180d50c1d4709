use ganti::satcore::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn lit(v: i64) -> Lit {
    Lit::from_dimacs(v).unwrap()
}

fn clauses(cs: &[&[i64]]) -> Vec<Vec<Lit>> {
    cs.iter().map(|c| c.iter().map(|&v| lit(v)).collect()).collect()
}

fn brute_sat(num_vars: u32, cs: &[Vec<Lit>]) -> bool {
    (0..1u64 << num_vars).any(|m| {
        let model: Vec<bool> = (0..num_vars).map(|i| m >> i & 1 == 1).collect();
        Model(model).satisfies(cs)
    })
}

#[test]
fn tiny_cases() {
    let cs = clauses(&[&[1, 2], &[-1], &[-2, 3]]);
    let r = Solver::from_clauses(3, &cs, SolverConfig::default()).solve();
    let m = r.model().expect("sat");
    assert!(m.satisfies(&cs));
    assert!(!m.value(Var(0)) && m.value(Var(1)) && m.value(Var(2)));

    let unsat = clauses(&[&[1], &[-1, 2], &[-2]]);
    assert!(Solver::from_clauses(2, &unsat, SolverConfig::default()).solve().is_unsat());
    assert!(Solver::from_clauses(1, &clauses(&[&[]]), SolverConfig::default()).solve().is_unsat());
    assert!(Solver::new().solve().is_sat());
}

fn pigeonhole(p: u32, h: u32) -> (u32, Vec<Vec<Lit>>) {
    let v = |i: u32, j: u32| Var(i * h + j);
    let mut cs: Vec<Vec<Lit>> = (0..p).map(|i| (0..h).map(|j| v(i, j).positive()).collect()).collect();
    for j in 0..h {
        for a in 0..p {
            for b in a + 1..p {
                cs.push(vec![v(a, j).negative(), v(b, j).negative()]);
            }
        }
    }
    (p * h, cs)
}

#[test]
fn pigeonhole_is_unsat() {
    for (p, h) in [(4, 3), (5, 4), (6, 5)] {
        let (nv, cs) = pigeonhole(p, h);
        assert!(Solver::from_clauses(nv, &cs, SolverConfig::default()).solve().is_unsat(), "php({p},{h})");
    }
    let (nv, cs) = pigeonhole(4, 4);
    let r = Solver::from_clauses(nv, &cs, SolverConfig::seeded(3)).solve();
    assert!(r.model().unwrap().satisfies(&cs));
}

#[test]
fn incremental_and_assumptions() {
    let mut s = Solver::new();
    let x = s.new_var();
    let y = s.new_var();
    s.add_clause(&[x.positive(), y.positive()]);
    assert!(s.solve_with(&[x.negative()]).is_sat());
    assert!(s.solve_with(&[x.negative(), y.negative()]).is_unsat());
    // Assumptions do not stick.
    assert!(s.solve().is_sat());
    s.add_clause(&[x.positive()]);
    assert!(s.solve().is_sat());
    s.add_clause(&[x.negative()]);
    assert!(s.solve().is_unsat());
    assert!(s.solve().is_unsat());
}

#[test]
fn duplicates_and_tautologies() {
    let cs = clauses(&[&[1, 1, 2], &[1, -1], &[-2, -2], &[-1, 2, 2]]);
    assert!(Solver::from_clauses(2, &cs, SolverConfig::default()).solve().is_unsat());
    let cs = clauses(&[&[1, 1], &[1, 2, -2]]);
    let r = Solver::from_clauses(2, &cs, SolverConfig::default()).solve();
    assert!(r.model().unwrap().value(Var(0)));
}

#[test]
fn conflict_limit_times_out() {
    let (nv, cs) = pigeonhole(9, 8);
    let cfg = SolverConfig { conflict_limit: Some(10), ..Default::default() };
    assert_eq!(Solver::from_clauses(nv, &cs, cfg).solve(), SolveResult::Timeout);
}

fn random_3sat(rng: &mut ChaCha8Rng, nv: u32, nc: usize) -> Vec<Vec<Lit>> {
    (0..nc)
        .map(|_| {
            (0..3)
                .map(|_| Lit::new(Var(rng.gen_range(0..nv)), rng.gen()))
                .collect()
        })
        .collect()
}

#[test]
fn random_3sat_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut sat, mut unsat) = (0, 0);
    for i in 0..400 {
        let nv = rng.gen_range(3..=12);
        let nc = (nv as f64 * rng.gen_range(3.0..6.0)) as usize;
        let cs = random_3sat(&mut rng, nv, nc);
        let r = Solver::from_clauses(nv, &cs, SolverConfig::seeded(i)).solve();
        assert_eq!(r.is_sat(), brute_sat(nv, &cs), "instance {i}");
        match r {
            SolveResult::Sat(m) => {
                assert!(m.satisfies(&cs));
                sat += 1;
            }
            _ => unsat += 1,
        }
    }
    assert!(sat > 50 && unsat > 50, "{sat}/{unsat}");
}

#[test]
fn larger_random_instances_have_valid_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..10 {
        let cs = random_3sat(&mut rng, 150, 600);
        if let SolveResult::Sat(m) = Solver::from_clauses(150, &cs, SolverConfig::seeded(i)).solve() {
            assert!(m.satisfies(&cs));
        }
    }
}

#[test]
fn dimacs_roundtrip() {
    let cs = clauses(&[&[1, -3], &[2], &[-1, -2, 3]]);
    let text = write_dimacs(3, &cs);
    assert!(text.starts_with("p cnf 3 3"));
    assert_eq!(parse_dimacs(&text).unwrap(), (3, cs));
    let commented = "c hi\np cnf 2 2\n1 -2 0\n2\n0\n";
    assert_eq!(parse_dimacs(commented).unwrap().1, clauses(&[&[1, -2], &[2]]));
    assert!(parse_dimacs("p cnf 2 1\n3 0\n").is_err());
    assert!(parse_dimacs("1 2 0\n").is_err());
}

#[test]
fn answer_format_roundtrip() {
    let r = SolveResult::Sat(Model(vec![true, false, true]));
    assert_eq!(format_answer(&r), "s SATISFIABLE\nv 1 -2 3 0\n");
    assert_eq!(parse_answer(&format_answer(&r), 3).unwrap(), r);
    assert_eq!(parse_answer("s UNSATISFIABLE\n", 3).unwrap(), SolveResult::Unsat);
    assert_eq!(parse_answer("c x\ns UNKNOWN\n", 1).unwrap(), SolveResult::Timeout);
    assert!(parse_answer("v 1 0\n", 1).is_err());
    let split = parse_answer("s SATISFIABLE\nv -1\nv 2 0\n", 2).unwrap();
    assert_eq!(split, SolveResult::Sat(Model(vec![false, true])));
}

#[test]
fn seeded_runs_are_deterministic() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let cs = random_3sat(&mut rng, 80, 340);
    for seed in [None, Some(1), Some(99)] {
        let cfg = SolverConfig { seed, ..Default::default() };
        let mut a = Solver::from_clauses(80, &cs, cfg.clone());
        let mut b = Solver::from_clauses(80, &cs, cfg);
        assert_eq!(a.solve(), b.solve());
        assert_eq!(a.stats(), b.stats());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn assumptions_agree_with_units(
        cs in proptest::collection::vec(proptest::collection::vec((0u32..8, any::<bool>()), 1..4), 1..30),
        assume in proptest::collection::vec((0u32..8, any::<bool>()), 0..4),
    ) {
        let cs: Vec<Vec<Lit>> = cs.iter().map(|c| c.iter().map(|&(v, p)| Lit::new(Var(v), p)).collect()).collect();
        let a: Vec<Lit> = assume.iter().map(|&(v, p)| Lit::new(Var(v), p)).collect();
        let mut s = Solver::from_clauses(8, &cs, SolverConfig::default());
        let with = s.solve_with(&a);
        let mut all = cs.clone();
        all.extend(a.iter().map(|&l| vec![l]));
        prop_assert_eq!(with.is_sat(), brute_sat(8, &all));
        if let SolveResult::Sat(m) = &with {
            prop_assert!(m.satisfies(&all));
        }
        prop_assert_eq!(s.solve().is_sat(), brute_sat(8, &cs));
    }
}
