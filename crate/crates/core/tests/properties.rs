//! Randomized invariants across the library, driven by proptest seeds.

use proptest::prelude::*;

use qsyslab_core::cqg::{
    compose_intertwiners, corep_max_abs_diff, corep_to_left_module, corep_to_module,
    intertwiner_space, left_module_to_corep, module_to_corep, split_idempotent, tensor_intertwiners,
    verify_bimodule, verify_cqg, verify_intertwiner, FiniteQuantumGroup,
};
use qsyslab_core::diagram::{eval, MorphismExpr};
use qsyslab_core::frobenius::{
    ev_coev, matrix_algebra, split_dimension_obstruction, verify_qsys_bimodule, verify_qsystem,
    QSysBimodule, QSystem,
};
use qsyslab_core::group::FiniteGroup;
use qsyslab_core::qbe::{
    bimodule_to_qbe, check_frobenius_identities, check_isometries, qbe_from_qsystem,
    qbe_to_quantum_function, verify_qbe, verify_qbe_intertwiner, verify_quantum_element,
    verify_quantum_function, QuantumBiElement,
};
use qsyslab_core::random::{self, TestRng};
use qsyslab_core::tensor::{
    self, adjoint, compose, identity, is_coisometry, max_abs_diff, range_factorize, tensor, LinearMap,
    Space, Tolerance, Word,
};

fn tol() -> Tolerance {
    Tolerance::default()
}

fn tol10() -> Tolerance {
    tol().scaled(10.0)
}

fn random_qsystem(rng: &mut TestRng) -> QSystem {
    use rand::Rng;
    let qs = random::small_qsystems().unwrap();
    let q = &qs[rng.random_range(0..qs.len())];
    random::random_conjugate_qsystem(rng, q).unwrap()
}

fn random_space(rng: &mut TestRng, name: &str, max_dim: usize) -> Word {
    use rand::Rng;
    Word::from(Space::new(name, rng.random_range(1..=max_dim)).unwrap())
}

fn group_name(k: u8) -> &'static str {
    ["Z2", "Z3"][k as usize % 2]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn interchange_law(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let (a, b, c) = (random_space(&mut rng, "A", 4), random_space(&mut rng, "B", 4), random_space(&mut rng, "C", 4));
        let (x, y, z) = (random_space(&mut rng, "X", 4), random_space(&mut rng, "Y", 4), random_space(&mut rng, "Z", 4));
        let h = random::random_map(&mut rng, a.clone(), b.clone());
        let f = random::random_map(&mut rng, b, c);
        let k = random::random_map(&mut rng, x.clone(), y.clone());
        let g = random::random_map(&mut rng, y, z);
        let lhs = compose(&tensor(&f, &g), &tensor(&h, &k)).unwrap();
        let rhs = tensor(&compose(&f, &h).unwrap(), &compose(&g, &k).unwrap());
        prop_assert!(max_abs_diff(&lhs, &rhs).unwrap() <= 1e-12);
    }

    #[test]
    fn adjoint_is_an_exact_involution_and_reverses_composition(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let (a, b, c) = (random_space(&mut rng, "A", 5), random_space(&mut rng, "B", 5), random_space(&mut rng, "C", 5));
        let f = random::random_map(&mut rng, a, b.clone());
        let g = random::random_map(&mut rng, b, c);
        prop_assert_eq!(adjoint(&adjoint(&f)), f.clone());
        let gf = compose(&g, &f).unwrap();
        let rev = compose(&adjoint(&f), &adjoint(&g)).unwrap();
        prop_assert_eq!(adjoint(&gf), rev);
    }

    #[test]
    fn range_factorize_round_trip(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let v = random_space(&mut rng, "V", 6);
        let t = random::random_map(&mut rng, v.clone(), v.clone());
        let p = random::spectral_projection(&compose(&t, &adjoint(&t)).unwrap());
        let iso = range_factorize(&p, tol()).unwrap();
        let range = compose(&iso, &adjoint(&iso)).unwrap();
        prop_assert!(max_abs_diff(&range, &p).unwrap() <= tol10().eps());
        let back = compose(&adjoint(&iso), &iso).unwrap();
        prop_assert!(max_abs_diff(&back, &identity(iso.dom())).unwrap() <= tol10().eps());
    }

    #[test]
    fn evaluation_commutes_with_adjoint_exactly(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let env = random::random_environment(&mut rng, 3);
        let (e, direct) = random::random_typed_expr(&mut rng, &env, 3);
        let value = eval(&e, &env).unwrap();
        prop_assert!(max_abs_diff(&value, &direct).unwrap() <= 1e-12);
        let starred = eval(&MorphismExpr::adjoint(e), &env).unwrap();
        prop_assert_eq!(starred, adjoint(&value));
    }

    #[test]
    fn verified_qsystems_are_self_dual_and_coisometric(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let q = random_qsystem(&mut rng);
        prop_assert!(verify_qsystem(&q, tol()).passed());
        let (ev, _, zigzag) = ev_coev(&q, tol());
        prop_assert!(zigzag.passed(), "{}", zigzag);
        let scalar = compose(&ev, &adjoint(&ev)).unwrap().entry(0, 0);
        prop_assert!(scalar.re > 0.0 && scalar.im.abs() <= tol().eps());
        prop_assert!(is_coisometry(q.mult(), tol()));
        let self_bimodule = QSysBimodule::self_bimodule(&q);
        prop_assert!(verify_qsys_bimodule(&self_bimodule, tol()).passed());
    }

    #[test]
    fn transported_coactions_are_bimodules(seed in any::<u64>(), g in any::<u8>()) {
        let mut rng = random::seeded(seed);
        let v = random::random_unitary_bimodule(&mut rng, group_name(g), 6).unwrap();
        let p = random::random_intertwining_projection(&mut rng, &v).unwrap();
        let (w, iso) = split_idempotent(&p, &v, tol()).unwrap();
        let report = verify_bimodule(&w, tol10());
        prop_assert!(report.passed(), "{}", report);
        prop_assert!(verify_intertwiner(&iso, &w, &v, tol10()).unwrap().passed());
    }

    #[test]
    fn corep_module_round_trips(seed in any::<u64>(), g in 0usize..3) {
        let mut rng = random::seeded(seed);
        let u = random::random_corep(&mut rng, ["Z2", "Z3", "S3"][g], 5).unwrap();
        let group = u.group().clone();
        let right = module_to_corep(&corep_to_module(&u, tol()).unwrap(), &group, tol()).unwrap();
        let left = left_module_to_corep(&corep_to_left_module(&u, tol()).unwrap(), &group, tol()).unwrap();
        prop_assert!(corep_max_abs_diff(&u, &right).unwrap() <= 1e-12);
        prop_assert!(corep_max_abs_diff(&u, &left).unwrap() <= 1e-12);
    }

    #[test]
    fn intertwiners_compose_tensor_and_take_adjoints(seed in any::<u64>(), g in any::<u8>()) {
        let mut rng = random::seeded(seed);
        let name = group_name(g);
        let v = random::random_unitary_bimodule(&mut rng, name, 4).unwrap();
        let w = random::random_unitary_bimodule(&mut rng, name, 4).unwrap();
        let vw = intertwiner_space(&v, &w).unwrap();
        let ww = intertwiner_space(&w, &w).unwrap();
        let vv = intertwiner_space(&v, &v).unwrap();
        if let Some(t) = random::random_combination(&mut rng, &vw) {
            prop_assert!(verify_intertwiner(&t, &v, &w, tol()).unwrap().passed());
            let report = verify_intertwiner(&adjoint(&t), &w, &v, tol()).unwrap();
            prop_assert!(report.passed(), "adjoint of an intertwiner failed: {}", report);
            if let Some(s) = random::random_combination(&mut rng, &ww) {
                let (_, r) = compose_intertwiners(&s, &t, &v, &w, tol()).unwrap();
                prop_assert!(r.passed());
            }
        }
        let t = random::random_combination(&mut rng, &vv).unwrap();
        let s = random::random_combination(&mut rng, &ww).unwrap();
        let (_, r) = tensor_intertwiners(&t, (&v, &v), &s, (&w, &w), tol()).unwrap();
        prop_assert!(r.passed(), "{}", r);
    }

    #[test]
    fn verified_bi_elements_satisfy_the_consequences(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let m = random::random_qsys_bimodule(&mut rng, 6).unwrap();
        let e = bimodule_to_qbe(&m, tol()).unwrap();
        prop_assert!(verify_qbe(&e, tol()).passed());
        prop_assert!(check_isometries(&e, tol10()).passed());
        prop_assert!(check_frobenius_identities(&e, tol10()).unwrap().passed());
        let f = qbe_to_quantum_function(&e, tol()).unwrap();
        let r = verify_quantum_function(&f, tol10());
        prop_assert!(r.entry("QF1").unwrap().passed && r.entry("QF3").unwrap().passed);
        prop_assert!(r.entry("QF2").is_some());
        let id = identity(m.space());
        prop_assert!(verify_qbe_intertwiner(&id, &e, &e, tol()).unwrap().passed());
    }

    #[test]
    fn bi_elements_over_the_trivial_algebra_reduce_to_quantum_elements(seed in any::<u64>()) {
        let mut rng = random::seeded(seed);
        let a = random_qsystem(&mut rng);
        let b = qsyslab_core::frobenius::function_algebra(1).unwrap();
        let h = a.word();
        let q1 = qbe_from_qsystem(&a, tol()).unwrap().q1().clone();
        let q2 = identity(&h).retype(h.clone(), h.concat(&b.word())).unwrap();
        let e = QuantumBiElement::new(a.clone(), b, h.clone(), q1.clone(), q2).unwrap();
        let full = verify_qbe(&e, tol());
        let reduced = verify_quantum_element(&a, &h, &q1, tol()).unwrap();
        for entry in ["1b", "1c", "2.right", "3b"] {
            prop_assert!(full.entry(entry).unwrap().passed, "{} failed", entry);
        }
        for entry in ["1a", "2.left", "3a"] {
            prop_assert_eq!(full.residual(entry), reduced.residual(entry));
        }
    }
}

#[test]
fn matrix_algebras_are_never_obstructed() {
    for n in 1..=4 {
        let o = split_dimension_obstruction(&matrix_algebra(n).unwrap());
        assert_eq!(o.dim, n * n);
        assert!(o.is_perfect_square);
    }
}

#[test]
fn group_function_algebras_have_full_cancellation_rank() {
    let groups = [
        ("Z2", FiniteGroup::cyclic(2).unwrap()),
        ("Z3", FiniteGroup::cyclic(3).unwrap()),
        ("Z5", FiniteGroup::cyclic(5).unwrap()),
        ("S3", FiniteGroup::symmetric(3).unwrap()),
    ];
    for (name, g) in groups {
        let qg = FiniteQuantumGroup::function_algebra(&g, name).unwrap();
        let r = verify_cqg(&qg, tol());
        assert!(r.passed(), "{name}: {r}");
        assert_eq!(r.residual("cancellation.left"), 0.0);
        assert_eq!(r.residual("cancellation.right"), 0.0);
    }
}

#[test]
fn whiskering_agrees_with_explicit_tensor_products() {
    let mut rng = random::seeded(99);
    for _ in 0..20 {
        let (a, b, c) = (random_space(&mut rng, "A", 3), random_space(&mut rng, "B", 3), random_space(&mut rng, "C", 3));
        let d = random_space(&mut rng, "D", 3);
        let f = random::random_map(&mut rng, b.clone(), d);
        let x: LinearMap = random::random_map(&mut rng, Word::unit(), a.concat(&b).concat(&c));
        let fast = tensor::whisker(&a, &f, &c, &x).unwrap();
        let slow = compose(&tensor::tensor_all(&[&identity(&a), &f, &identity(&c)]), &x).unwrap();
        assert!(max_abs_diff(&fast, &slow).unwrap() <= 1e-13);
    }
}
