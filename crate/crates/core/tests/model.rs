mod common;

use ainf::commands::{run, Command, RunOptions};
use ainf::model::{corpus_model, parse_lincomb, Model, ModelFile, CORPUS};
use ainf::Error;
use proptest::prelude::*;

fn round_trip(m: &Model) {
    let text = m.file.emit();
    let again = Model::load(&text).unwrap();
    assert_eq!(again.file, m.file);
    assert_eq!(again.file.emit(), text);
    assert!(again.algebra == m.algebra, "algebra differs after a round trip");
    assert!(again.coalgebra == m.coalgebra, "coalgebra differs after a round trip");
    assert!(again.module == m.module, "module differs after a round trip");
    assert_eq!(again.twisting, m.twisting);
}

#[test]
fn corpus_round_trips() {
    for (name, _) in CORPUS {
        round_trip(&corpus_model(name).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn generated_models_round_trip(ext in common::exterior_strategy()) {
        round_trip(&Model::load(&ext.toml()).unwrap());
    }

    #[test]
    fn lincombs_parse(a in -20i64..20, b in 1i64..9, c in -20i64..20) {
        let field = ainf::linalg::Field::Rational;
        let text = format!("{a}/{b}*x + {c}*y");
        // A negative coefficient after `+` is accepted as written.
        let terms = parse_lincomb(field, &text).unwrap();
        prop_assert_eq!(terms.len(), 2);
        prop_assert_eq!(&terms[0].1, "x");
        prop_assert_eq!(&terms[1].1, "y");
        prop_assert_eq!(terms[0].0.clone(), ainf::linalg::Scalar::parse(field, &format!("{a}/{b}")).unwrap());
        prop_assert_eq!(terms[1].0.clone(), ainf::linalg::Scalar::from_i64(field, c));
    }
}

#[test]
fn heisenberg_loads_as_a_valid_dga() {
    let m = corpus_model("heisenberg").unwrap();
    let a = m.algebra.as_ref().unwrap();
    assert!(a.check(8).is_empty());
    assert_eq!(a.basis().len(), 8);
}

#[test]
fn empty_model_is_valid_and_reports_nothing() {
    let m = Model::load("[algebra]\n").unwrap();
    let r = run(Command::Transfer, &m, &RunOptions::new(4)).unwrap();
    assert!(r.passed());
    assert!(r.betti.values().all(|b| b.iter().all(|&x| x == 0)));
    assert!(r.operations.values().all(Vec::is_empty));
}

#[test]
fn dangling_names_are_named() {
    let text = "[algebra]\ngenerators = [[\"x\", 2]]\n[algebra.differential]\nx = \"ghost\"\n";
    let err = Model::load(text).unwrap_err();
    assert!(err.to_string().contains("ghost"), "{err}");
}

#[test]
fn parse_errors_carry_lines() {
    let err = ModelFile::parse("name = \"a\"\n\n[algebra\n").unwrap_err();
    assert!(matches!(err, Error::Parse { line: 3, .. }), "{err:?}");
    let err = ModelFile::parse("bogus = 1\n").unwrap_err();
    assert!(matches!(err, Error::Parse { .. }), "{err:?}");
}

#[test]
fn load_time_checks_name_the_witness() {
    // Leibniz fails: d(x·x) = 0 but dx·x ± x·dx = 2 y·x.
    let text = r#"
grading = "cohomological"
[algebra]
generators = [["x", 2], ["y", 3], ["xx", 4], ["yx", 5]]
[algebra.differential]
x = "y"
[algebra.product]
"x*x" = "xx"
"y*x" = "yx"
"x*y" = "yx"
"#;
    let err = Model::load(text).unwrap_err();
    assert!(matches!(err, Error::Validation(_)), "{err:?}");
    assert!(err.to_string().contains("Leibniz fails on x, x"), "{err}");

    let text = "[coalgebra]\ngenerators = [[\"c0\", 0], [\"c2\", 2], [\"c4\", 4]]\ncounit = \"c0\"\n[coalgebra.coproduct]\nc4 = \"c2|c2 + c4|c0\"\n";
    assert!(Model::load(text).is_err());
}

#[test]
fn field_override_changes_arithmetic() {
    let m = corpus_model("wedge").unwrap();
    let mut opts = RunOptions::new(6);
    opts.field = Some(ainf::linalg::Field::Prime(2));
    let r = run(Command::Transfer, &m, &opts).unwrap();
    assert_eq!(r.field, "Zp:2");
    assert!(r.passed());
}
