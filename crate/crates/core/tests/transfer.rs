mod common;

use ainf::commands::{run, Command, RunOptions};
use ainf::graded::Element;
use ainf::linalg::Scalar;
use ainf::model::{corpus_model, Model};
use ainf::transfer::{reduced_homology, transfer_algebra, verify_transfer, TransferOptions, TransferResult};
use proptest::prelude::*;

fn transfer(m: &Model, cap: i32, seed: Option<u64>) -> TransferResult {
    let a = m.algebra.as_ref().unwrap();
    let h = reduced_homology(a, cap).unwrap();
    transfer_algebra(a, &h, cap, TransferOptions { arity_cap: None, perturb: seed }).unwrap()
}

fn class(t: &TransferResult, name: &str) -> Element {
    let hb = &t.algebra.basis;
    Element::generator(hb, hb.lookup(name).unwrap(), t.source.field)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_nilpotent_models_transfer_cleanly(ext in common::exterior_strategy(), seed in any::<u64>()) {
        let m = Model::load(&ext.toml()).unwrap();
        let cap = ext.n as i32;
        let t = transfer(&m, cap, None);
        prop_assert!(t.algebra.ops[0].is_zero());
        let r = verify_transfer(&t);
        prop_assert!(r.is_empty(), "{}", r.defects[0]);
        let p = transfer(&m, cap, Some(seed));
        let r = verify_transfer(&p);
        prop_assert!(r.is_empty(), "{}", r.defects[0]);
    }

    #[test]
    fn x3_is_multilinear(i in 0usize..7, j in 0usize..7, k in 0usize..7, l in -5i64..6) {
        let m = corpus_model("heisenberg").unwrap();
        let t = transfer(&m, 6, None);
        let x3 = t.algebra.op(3).unwrap();
        let n = t.algebra.basis.len();
        let (a, b, c) = (Element::generator(&t.algebra.basis, i % n, t.source.field), Element::generator(&t.algebra.basis, j % n, t.source.field), Element::generator(&t.algebra.basis, k % n, t.source.field));
        let lam = Scalar::from_i64(t.source.field, l);
        let lhs = x3.evaluate(&[&a.scaled(&lam), &b, &c]).unwrap();
        let rhs = x3.evaluate(&[&a, &b, &c]).unwrap().scaled(&lam);
        prop_assert_eq!(lhs, rhs);
        let mut ab = a.clone();
        ab.add_assign(&a);
        prop_assert_eq!(x3.evaluate(&[&a, &b, &c]).unwrap().scaled(&Scalar::from_i64(t.source.field, 2)), x3.evaluate(&[&ab, &b, &c]).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn massey_products_match_the_textbook_coset(ext in common::exterior_strategy()) {
        prop_assume!(ext.n <= 4);
        let m = Model::load(&ext.toml()).unwrap();
        let report = run(Command::Massey, &m, &RunOptions::new(ext.n as i32)).unwrap();
        prop_assert!(report.passed(), "{}", report.to_table());
    }
}

#[test]
fn x2_sign_anchor() {
    let text = r#"
grading = "homological"
[algebra]
generators = [["1", 0], ["a", 2], ["b", 3], ["ab", 5], ["bb", 6]]
unit = "1"
[algebra.product]
"a*b" = "ab"
"b*b" = "bb"
"#;
    let m = Model::load(text).unwrap();
    let t = transfer(&m, 6, None);
    let x2 = t.algebra.op(2).unwrap();
    // X₂(a⊗b) = −(−1)^{|a|} a·b
    let v = x2.evaluate(&[&class(&t, "[a]"), &class(&t, "[b]")]).unwrap();
    assert_eq!(v, class(&t, "[ab]").negated());
    let v = x2.evaluate(&[&class(&t, "[b]"), &class(&t, "[b]")]).unwrap();
    assert_eq!(v, class(&t, "[bb]"));
}

#[test]
fn heisenberg_x2_and_massey_anchor() {
    let m = corpus_model("heisenberg").unwrap();
    let t = transfer(&m, 6, None);
    let x2 = t.algebra.op(2).unwrap();
    let v = x2.evaluate(&[&class(&t, "[e1]"), &class(&t, "[e23]")]).unwrap();
    assert_eq!(v, class(&t, "[e123]"));
    let x3 = t.algebra.op(3).unwrap();
    let v = x3.evaluate(&[&class(&t, "[e1]"), &class(&t, "[e2]"), &class(&t, "[e2]")]).unwrap();
    assert_eq!(v, class(&t, "[e23]"));
}

#[test]
fn zero_differential_models_have_no_higher_structure() {
    for name in ["s2", "s3", "wedge"] {
        let m = corpus_model(name).unwrap();
        let t = transfer(&m, 8, None);
        assert!(verify_transfer(&t).is_empty(), "{name}");
        for (i, x) in t.algebra.ops.iter().enumerate().skip(2) {
            assert!(x.is_zero(), "{name}: X{} nonzero", i + 1);
        }
        for (i, f) in t.morphism.comps.iter().enumerate().skip(1) {
            assert!(f.is_zero(), "{name}: f{} nonzero", i + 1);
        }
    }
}

#[test]
fn transfer_is_idempotent_on_formal_models() {
    // With d = 0 the homology is the algebra itself and X₂ is the sign-twisted product.
    let ext = common::Exterior { n: 3, base: 3, structure: vec![], field: "Q".into() };
    let m = Model::load(&ext.toml()).unwrap();
    let t = transfer(&m, 3, None);
    let a = m.algebra.as_ref().unwrap().reduced().unwrap();
    assert_eq!(t.algebra.basis.len(), a.basis().len());
    let source = &t.source;
    let x2 = t.algebra.op(2).unwrap();
    for (i, ni, _) in a.basis().generators() {
        for (j, nj, _) in a.basis().generators() {
            let lhs = x2.eval_gens(&[t.algebra.basis.lookup(&format!("[{ni}]")).unwrap(), t.algebra.basis.lookup(&format!("[{nj}]")).unwrap()]);
            let rhs = source.eval(2, &[i, j]);
            assert_eq!(lhs.display(&t.algebra.basis).to_string().replace(['[', ']'], ""), rhs.display(&source.basis).to_string());
        }
    }
}

#[test]
fn arity_above_the_cap_is_rejected() {
    let m = corpus_model("s2").unwrap();
    let a = m.algebra.as_ref().unwrap();
    let h = reduced_homology(a, 4).unwrap();
    let err = transfer_algebra(a, &h, 4, TransferOptions { arity_cap: Some(40), perturb: None }).unwrap_err();
    assert!(matches!(err, ainf::Error::CapExceeded(_)));
    assert!(transfer_algebra(a, &h, 4, TransferOptions { arity_cap: Some(2), perturb: None }).is_ok());
}

#[test]
fn transfer_is_deterministic_across_thread_pools() {
    let m = corpus_model("heisenberg").unwrap();
    let reference = transfer(&m, 6, Some(3));
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let t = pool.install(|| transfer(&m, 6, Some(3)));
        assert_eq!(*t.algebra, *reference.algebra);
        assert_eq!(*t.morphism, *reference.morphism);
    }
}

#[test]
fn injected_sign_error_is_named() {
    let m = corpus_model("heisenberg").unwrap();
    let mut t = transfer(&m, 6, None);
    let mut algebra = (*t.algebra).clone();
    let (tuple, value) = algebra.ops[2].entries().next().map(|(k, v)| (k.clone(), v.negated())).unwrap();
    algebra.ops[2].set(tuple, value).unwrap();
    let algebra = std::sync::Arc::new(algebra);
    let mut morphism = (*t.morphism).clone();
    morphism.source = algebra.clone();
    t.algebra = algebra;
    t.morphism = std::sync::Arc::new(morphism);
    let r = verify_transfer(&t);
    assert!(!r.is_empty());
    assert!(r.defects.iter().any(|d| d.identity.contains("Stasheff")), "{}", r.defects[0]);
}
