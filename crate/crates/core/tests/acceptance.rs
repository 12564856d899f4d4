//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! and fails if any of its checks fails.

mod common;

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::io::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{presentation_path, q, random_homogeneous, random_state, random_weight, virasoro, Fixture};
use zhuforge::cli::{run, RunConfig, Subcommand};
use zhuforge::parallel::Parallelism;
use zhuforge::presentation::complete_table;
use zhuforge::quotient::{check_matrix_model, quotient_basis, Matrix};
use zhuforge::reduction::ReductionStrategy;
use zhuforge::syntax::parse_state;
use zhuforge::zhu::{
    circ, collect_seeds, relation_closure, star, zhu_commutators, zhu_image, ClosureBounds, IdealMembership,
    Membership, NCPoly, SeedSelection, ZhuPresentation,
};
use zhuforge::{Scalar, State};

struct Criterion {
    number: u32,
    title: &'static str,
    failures: Vec<String>,
}

impl Criterion {
    fn new(number: u32, title: &'static str) -> Self {
        Criterion {
            number,
            title,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn eq<T: PartialEq + Debug>(&mut self, label: &str, got: &T, want: &T) {
        self.check(got == want, || format!("{label}: got {got:?}, want {want:?}"));
    }

    fn finish(self) {
        // Written to the stdout handle directly so the line shows up even
        // when the harness captures output.
        let mut out = std::io::stdout().lock();
        if self.failures.is_empty() {
            let _ = writeln!(out, "criterion {}: PASS  {}", self.number, self.title);
        } else {
            let _ = writeln!(out, "criterion {}: FAIL  {}", self.number, self.title);
            for f in &self.failures {
                let _ = writeln!(out, "    {f}");
            }
        }
        drop(out);
        assert!(self.failures.is_empty(), "criterion {} failed: {:#?}", self.number, self.failures);
    }
}

fn closure(f: &Fixture) -> ZhuPresentation {
    let seeds = collect_seeds(&f.p, &f.e, SeedSelection::Both, Parallelism::Parallel);
    relation_closure(&f.e, &f.p.name, &seeds, &ClosureBounds::default(), Parallelism::Parallel)
}

/// Every polynomial of `a` lies in the ideal generated by `b`, and back.
fn same_ideal(zp: &ZhuPresentation, a: &[NCPoly], b: &[NCPoly], bound: i64) -> Vec<String> {
    let sig = &zp.signature;
    let mut bad = Vec::new();
    for (from, to, dir) in [(a, b, "emitted in expected"), (b, a, "expected in emitted")] {
        let mut m = IdealMembership::new(zp.algebra.clone(), to.to_vec(), bound);
        for r in from {
            let v = m.test(r);
            if v != Membership::Zero {
                bad.push(format!("{dir}: {} is {v:?}", r.display(sig)));
            }
        }
    }
    bad
}

#[test]
fn criterion_01_virasoro_bootstrap() {
    let mut c = Criterion::new(1, "Virasoro table completion");
    let f = Fixture::load("virasoro");
    let table = complete_table(&f.p);
    let w = f.gen("w");
    c.eq("w_2 w", &table.value(w, w, 2), &State::zero());
    c.eq("w_0 w", &table.value(w, w, 0), &f.nf("w(-2)"));
    c.eq("w_1 w", &table.value(w, w, 1), &f.nf("2 w"));
    c.eq("w_3 w", &table.value(w, w, 3), &f.nf("-1"));
    c.finish();
}

#[test]
fn criterion_02_virasoro_commutators() {
    let mut c = Criterion::new(2, "Virasoro commutators against the brute-force bracket");
    let f = Fixture::load("virasoro");
    let central = Scalar::from_int(-2);
    let as_vir = |s: &State| virasoro::from_engine(s, &central);
    let mut states = 0;
    for weight in 0..=8 {
        for word in f.e.pbw_words(weight) {
            states += 1;
            let s = State::from_word(word);
            let vs = as_vir(&s);
            // single modes agree with the oracle
            for m in -3..=4 {
                let got = as_vir(&f.act("w", m, &s));
                let want = virasoro::apply(m - 1, &vs, &central);
                c.check(got == want, || format!("w_{m} on {}", f.show(&s)));
            }
            let two = Scalar::from_int(2);
            let br = f.e.commutator(f.op("w", 2), f.op("w", 0)).evaluate(&f.e, &s);
            c.eq("[w_2, w_0]", &br, &f.act("w", 1, &s).scaled(&two));
            let l1 = virasoro::apply(1, &virasoro::apply(-1, &vs, &central), &central);
            let l2 = virasoro::apply(-1, &virasoro::apply(1, &vs, &central), &central);
            let mut oracle = l1.clone();
            for (k, v) in &l2 {
                let e = oracle.entry(k.clone()).or_insert_with(Scalar::zero);
                *e -= v;
                if e.is_zero() {
                    oracle.remove(k);
                }
            }
            c.eq("[L(1), L(-1)] oracle", &as_vir(&br), &oracle);
            let br = f.e.commutator(f.op("w", 1), f.op("w", -1)).evaluate(&f.e, &s);
            c.eq("[w_1, w_-1]", &br, &f.act("w", -1, &s).scaled(&two));
        }
    }
    c.check(states > 10, || format!("only {states} basis states"));
    c.finish();
}

#[test]
fn criterion_03_w3_nondegenerate() {
    let mut c = Criterion::new(3, "W3 non-degeneracy and PBW independence");
    let f = Fixture::load("w3");
    let defects = f.e.c1_singular_elements(Parallelism::Parallel);
    c.check(defects.is_empty(), || format!("{} defects", defects.len()));
    let right = f.e.with_strategy(ReductionStrategy::RightmostFirst);
    let sig = f.p.signature();
    for weight in 0..=8 {
        for word in f.e.pbw_words(weight) {
            let s = State::from_word(word.clone());
            c.eq("irreducible word is fixed", &f.e.normal_form(&s), &s);
            for g in 0..sig.len() {
                for n in -6..=4 {
                    let op = zhuforge::ModeOp::new(g, n);
                    if weight + sig.op_weight(op) > 8 {
                        continue;
                    }
                    let t = State::from_word(word.prepend(op));
                    let (a, b) = (f.e.normal_form(&t), right.normal_form(&t));
                    c.check(a == b, || format!("strategies differ on {}", sig.display_word(&word.prepend(op))));
                }
            }
        }
    }
    c.finish();
}

#[test]
fn criterion_04_w3_closure_trace() {
    let mut c = Criterion::new(4, "W3 mode actions on the singular vectors");
    let f = Fixture::load("w3");
    let vs = f.e.normal_form(&f.p.singular_vectors[0].value);
    let vsp = f.nf("9/2 v(-4) + 9 w(-2) v - 6 w(-1) v(-2)");
    let d = |s: &State| f.e.apply_divided_D(1, s);
    c.eq("v_2 v_s", &f.act("v", 2, &vs), &vsp.scaled(&q(98, 27)));
    c.eq("v_2 v_s'", &f.act("v", 2, &vsp), &vs.scaled(&q(36, 1)));
    c.eq("v_1 v_s", &f.act("v", 1, &vs), &d(&vsp).scaled(&q(49, 54)));
    c.eq("v_1 v_s'", &f.act("v", 1, &vsp), &d(&vs).scaled(&q(9, 1)));
    c.eq("w_1 v_s", &f.act("w", 1, &vs), &vs.scaled(&q(6, 1)));
    c.finish();
}

#[test]
fn criterion_05_w3_zhu_algebra() {
    let mut c = Criterion::new(5, "W3 Zhu images and the extra relation");
    let f = Fixture::load("w3");
    let vs = f.e.normal_form(&f.p.singular_vectors[0].value);
    let vsp = f.nf("9/2 v(-4) + 9 w(-2) v - 6 w(-1) v(-2)");
    let g = f.poly(&[(3, 2, &["v", "v"]), (-8, 9, &["w", "w", "w"]), (-1, 9, &["w", "w"])]);
    c.eq("o(v_s)", &zhu_image(&f.e, &vs), &g);
    c.eq("o(v_s')", &zhu_image(&f.e, &vsp), &NCPoly::zero());
    let v0vsp = f.act("v", 0, &vsp);
    let want = f.poly(&[(-18, 1, &["v", "v"]), (32, 3, &["w", "w", "w"]), (4, 3, &["w", "w"])]);
    c.eq("o(v_0 v_s')", &zhu_image(&f.e, &v0vsp), &want);

    let zp = closure(&f);
    c.check(zp.is_complete(), || format!("closure status {:?}", zp.status));
    for bad in same_ideal(&zp, &zp.extra_polys(), std::slice::from_ref(&g), 8) {
        c.check(false, || bad);
    }
    c.finish();
}

#[test]
fn criterion_06_lattice_defects() {
    let mut c = Criterion::new(6, "lattice C1-singular elements");
    let f = Fixture::load("lattice");
    let j = f.nf("10 a(-1) ep - 10 ep(-2)");
    let l = f.nf("-10 em(-2) - 10 a(-1) em");
    let defects = f.e.c1_singular_elements(Parallelism::Parallel);
    let got: BTreeSet<String> = defects.iter().map(|d| f.show(&d.value)).collect();
    let want: BTreeSet<String> = [f.show(&j), f.show(&l)].into_iter().collect();
    c.eq("defect values", &got, &want);
    let (ep, em) = (f.gen("ep"), f.gen("em"));
    c.eq("ep_1 ep_0 em", &f.e.jacobi_defect(ep, 1, ep, 0, em).0, &j);
    c.eq("em_1 em_0 ep", &f.e.jacobi_defect(em, 1, em, 0, ep).0, &l);
    c.finish();
}

#[test]
fn criterion_07_lattice_mode_actions() {
    let mut c = Criterion::new(7, "lattice mode actions on J and L");
    let f = Fixture::load("lattice");
    let j_raw = parse_state(f.e.signature(), "ep(-2) - a(-1) ep").unwrap();
    let l_raw = parse_state(f.e.signature(), "em(-2) + a(-1) em").unwrap();
    let j = f.e.normal_form(&j_raw);
    let l = f.e.normal_form(&l_raw);
    // The modes act on the defining expression and the whole word is
    // normal-ordered once. The system is degenerate, so normal-ordering in
    // between can land on a different representative.
    let chain = |ops: &[(&str, i64)], x: &State| {
        let ops: Vec<_> = ops.iter().map(|&(s, n)| f.op(s, n)).collect();
        f.e.apply_word(&ops, x)
    };
    let d1 = |s: &State| f.e.apply_divided_D(1, s);
    let d2 = |s: &State| f.e.apply_divided_D(2, s);
    let zero = State::zero();
    // c1 X_{-3}1 + c2 a_{-1} X_{-2}1 + c3 a_{-2} X + c4 a_{-1} a_{-1} X
    let combo = |x: &State, k: [(i64, i64); 4]| {
        let mut s = d2(x).scaled(&q(k[0].0, k[0].1));
        s.add_scaled(&q(k[1].0, k[1].1), &f.act("a", -1, &d1(x)));
        s.add_scaled(&q(k[2].0, k[2].1), &f.act("a", -2, x));
        s.add_scaled(&q(k[3].0, k[3].1), &f.act("a", -1, &f.act("a", -1, x)));
        s
    };

    c.eq("a_0 J", &chain(&[("a", 0)], &j_raw), &j.scaled(&q(4, 1)));
    c.eq("a_0 L", &chain(&[("a", 0)], &l_raw), &l.scaled(&q(-4, 1)));
    for (name, x) in [("J", &j_raw), ("L", &l_raw)] {
        for sym in ["a", "ep", "em"] {
            for n in 1..=6 {
                c.eq(&format!("{sym}_{n} {name}"), &chain(&[(sym, n)], x), &zero);
            }
        }
    }
    c.eq("ep_0 J", &chain(&[("ep", 0)], &j_raw), &f.nf("4 ep(-1) ep"));
    c.eq(
        "em_0 J",
        &chain(&[("em", 0)], &j_raw),
        &f.nf("-4 em(-1) ep - a(-4) + 1/2 a(-2) a(-2) + 4/3 a(-3) a - a(-2) a(-1) a + 1/6 a(-1) a(-1) a(-1) a"),
    );
    c.eq("ep_0 ep_0 J", &chain(&[("ep", 0), ("ep", 0)], &j_raw), &zero);
    c.eq(
        "em_0 ep_0 J",
        &chain(&[("em", 0), ("ep", 0)], &j_raw),
        &combo(&j, [(20, 3), (-5, 3), (14, 3), (1, 3)]),
    );
    c.eq(
        "em_0 em_0 J",
        &chain(&[("em", 0), ("em", 0)], &j_raw),
        &combo(&l, [(20, 3), (50, 3), (-80, 3), (10, 3)]),
    );
    c.eq("em_0 L", &chain(&[("em", 0)], &l_raw), &f.nf("4 em(-1) em"));
    c.eq(
        "ep_0 L",
        &chain(&[("ep", 0)], &l_raw),
        &f.nf("-4 ep(-1) em + a(-4) + 1/2 a(-2) a(-2) + 4/3 a(-3) a + a(-2) a(-1) a + 1/6 a(-1) a(-1) a(-1) a"),
    );
    c.eq("em_0 em_0 L", &chain(&[("em", 0), ("em", 0)], &l_raw), &zero);
    c.eq(
        "ep_0 em_0 L",
        &chain(&[("ep", 0), ("em", 0)], &l_raw),
        &combo(&l, [(20, 3), (5, 3), (-14, 3), (1, 3)]),
    );
    c.eq(
        "ep_0 ep_0 L",
        &chain(&[("ep", 0), ("ep", 0)], &l_raw),
        &combo(&j, [(20, 3), (-50, 3), (80, 3), (10, 3)]),
    );
    c.finish();
}

#[test]
fn criterion_08_lattice_zhu_algebra() {
    let mut c = Criterion::new(8, "lattice Zhu algebra, quotient and matrix model");
    let f = Fixture::load("lattice");
    let sig = f.p.signature();
    let brackets: Vec<(String, String, NCPoly)> = zhu_commutators(&f.e)
        .into_iter()
        .map(|r| (sig.symbol(r.left).to_string(), sig.symbol(r.right).to_string(), r.bracket))
        .collect();
    let want = vec![
        ("a".to_string(), "ep".to_string(), f.poly(&[(4, 1, &["ep"])])),
        ("a".to_string(), "em".to_string(), f.poly(&[(-4, 1, &["em"])])),
        (
            "ep".to_string(),
            "em".to_string(),
            f.poly(&[(1, 6, &["a", "a", "a"]), (-1, 6, &["a"])]),
        ),
    ];
    c.eq("commutators", &brackets, &want);

    let zp = closure(&f);
    c.check(zp.is_complete(), || format!("closure status {:?}", zp.status));
    let six = vec![
        f.poly(&[(1, 1, &["em", "a"]), (-2, 1, &["em"])]),
        f.poly(&[(1, 1, &["ep", "a"]), (2, 1, &["ep"])]),
        f.poly(&[(1, 1, &["ep", "ep"])]),
        f.poly(&[
            (-4, 1, &["ep", "em"]),
            (-1, 3, &["a"]),
            (-1, 6, &["a", "a"]),
            (1, 3, &["a", "a", "a"]),
            (1, 6, &["a", "a", "a", "a"]),
        ]),
        f.poly(&[
            (-4, 1, &["em", "ep"]),
            (1, 3, &["a"]),
            (-1, 6, &["a", "a"]),
            (-1, 3, &["a", "a", "a"]),
            (1, 6, &["a", "a", "a", "a"]),
        ]),
        f.poly(&[(1, 1, &["em", "em"])]),
    ];
    for bad in same_ideal(&zp, &zp.extra_polys(), &six, 8) {
        c.check(false, || bad);
    }

    match quotient_basis(&zp, 12) {
        Ok(model) => {
            let got: BTreeSet<Vec<usize>> = model.basis.iter().cloned().collect();
            let want: BTreeSet<Vec<usize>> = [
                vec![],
                vec![f.gen("a")],
                vec![f.gen("ep")],
                vec![f.gen("em")],
                vec![f.gen("ep"), f.gen("em")],
                vec![f.gen("a"), f.gen("a")],
                vec![f.gen("a"), f.gen("a"), f.gen("a")],
            ]
            .into_iter()
            .collect();
            c.eq("dimension", &model.dimension(), &7);
            c.eq("basis", &got, &want);
        }
        Err(e) => c.check(false, || format!("quotient not stabilized: {e:?}")),
    }

    let mut e_plus = Matrix::zero(5);
    e_plus.set(1, 2, Scalar::one());
    let mut e_minus = Matrix::zero(5);
    e_minus.set(2, 1, Scalar::one());
    let mut alpha = Matrix::zero(5);
    for (i, v) in [0, 2, -2, 1, -1].into_iter().enumerate() {
        alpha.set(i, i, Scalar::from_int(v));
    }
    let matrices = [("a", alpha), ("ep", e_plus), ("em", e_minus)]
        .into_iter()
        .map(|(s, m)| (s.to_string(), m))
        .collect();
    match check_matrix_model(&zp, &matrices) {
        Ok(failed) => c.eq("failed relations", &failed, &Vec::new()),
        Err(e) => c.check(false, || format!("matrix model rejected: {e}")),
    }
    c.finish();
}

#[test]
fn criterion_09_property_suites() {
    let mut c = Criterion::new(9, "normal form, strategy, weight and Zhu product invariants");
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for name in ["virasoro", "w3", "lattice"] {
        let f = Fixture::load(name);
        let sig = f.p.signature();
        let right = f.e.with_strategy(ReductionStrategy::RightmostFirst);
        let check_strategies = name != "lattice";
        for _ in 0..1000 {
            let s = random_state(&f, &mut rng, 8);
            let n = f.e.normal_form(&s);
            c.check(f.e.normal_form(&n) == n, || format!("{name}: nf not idempotent on {}", f.show(&s)));
            if check_strategies {
                c.check(right.normal_form(&s) == n, || format!("{name}: strategies differ on {}", f.show(&s)));
            }
        }
        for _ in 0..200 {
            let w = random_weight(&f, &mut rng, 1, 6);
            let s = random_homogeneous(&f, &mut rng, w);
            let g = rng.gen_range(0..sig.len());
            let op = zhuforge::ModeOp::new(g, rng.gen_range(-4..=4));
            let t = f.e.apply_mode(op, &s);
            let expected = w + sig.op_weight(op);
            c.check(t.is_zero() || sig.state_weight(&t) == Some(expected), || {
                format!("{name}: weight of {} on {}", sig.display_word(&zhuforge::Word::new(vec![op])), f.show(&s))
            });
        }

        let zp = closure(&f);
        let mut m = IdealMembership::new(zp.algebra.clone(), zp.extra_polys(), 8);
        for _ in 0..200 {
            let (wu, wv) = (random_weight(&f, &mut rng, 1, 6), random_weight(&f, &mut rng, 1, 6));
            let u = random_homogeneous(&f, &mut rng, wu);
            let v = random_homogeneous(&f, &mut rng, wv);
            let prod = &zhu_image(&f.e, &u) * &zhu_image(&f.e, &v);
            let diff = &zhu_image(&f.e, &star(&f.e, &u, &v)) - &prod;
            let verdict = m.test(&diff);
            c.check(verdict == Membership::Zero, || {
                format!("{name}: o(u*v) - o(u)o(v) is {verdict:?} for u = {}, v = {}", f.show(&u), f.show(&v))
            });
            let verdict = m.test(&zhu_image(&f.e, &circ(&f.e, &u, &v)));
            c.check(verdict == Membership::Zero, || {
                format!("{name}: o(u o v) is {verdict:?} for u = {}, v = {}", f.show(&u), f.show(&v))
            });
        }
    }
    c.finish();
}

#[test]
fn criterion_10_determinism() {
    let mut c = Criterion::new(10, "byte-identical zhu and quotient output");
    for name in ["virasoro", "w3", "lattice"] {
        for sub in [Subcommand::Zhu, Subcommand::Quotient] {
            let mut config = RunConfig::new(sub.clone(), presentation_path(name));
            let first = run(&config);
            let second = run(&config);
            config.parallelism = Parallelism::Sequential;
            let third = run(&config);
            c.check(first.document.is_some(), || format!("{name} {sub:?}: no output"));
            c.eq(&format!("{name} {sub:?} rerun"), &first, &second);
            c.eq(&format!("{name} {sub:?} sequential"), &first, &third);
        }
    }
    c.finish();
}
