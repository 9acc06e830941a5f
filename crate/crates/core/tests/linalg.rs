use ainf::linalg::{kernel_basis, rank, rref, solve_particular, Field, Matrix, Scalar};
use proptest::prelude::*;

fn field() -> impl Strategy<Value = Field> {
    prop_oneof![Just(Field::Rational), Just(Field::Prime(2)), Just(Field::Prime(3)), Just(Field::Prime(101))]
}

fn matrix() -> impl Strategy<Value = Matrix> {
    (field(), 0usize..6, 0usize..6).prop_flat_map(|(f, r, c)| {
        proptest::collection::vec(-4i64..5, r * c).prop_map(move |xs| from_entries(f, r, c, &xs))
    })
}

fn from_entries(f: Field, r: usize, c: usize, xs: &[i64]) -> Matrix {
    let mut m = Matrix::zeros(f, r, c);
    for i in 0..r {
        for j in 0..c {
            m.set(i, j, Scalar::from_i64(f, xs[i * c + j]));
        }
    }
    m
}

proptest! {
    #[test]
    fn rank_plus_nullity(m in matrix()) {
        let r = rank(&m).unwrap();
        let k = kernel_basis(&m).unwrap();
        prop_assert_eq!(r + k.len(), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn rref_transform_reproduces_echelon(m in matrix()) {
        let r = rref(&m).unwrap();
        prop_assert_eq!(r.transform.mul(&m).unwrap(), r.echelon.clone());
        let again = rref(&r.echelon).unwrap();
        prop_assert_eq!(again.echelon, r.echelon);
    }

    #[test]
    fn solvable_systems_are_solved(m in matrix(), seed in proptest::collection::vec(-3i64..4, 6)) {
        let f = m.field();
        let x: Vec<Scalar> = (0..m.cols()).map(|j| Scalar::from_i64(f, seed[j])).collect();
        let b = m.mul_vec(&x).unwrap();
        let y = solve_particular(&m, &b).unwrap().expect("b is in the image");
        prop_assert_eq!(m.mul_vec(&y).unwrap(), b);
    }

    #[test]
    fn field_axioms(f in field(), a in -50i64..50, b in -50i64..50, c in -50i64..50) {
        let (a, b, c) = (Scalar::from_i64(f, a), Scalar::from_i64(f, b), Scalar::from_i64(f, c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        prop_assert_eq!(&a - &a, f.zero());
        if let Some(inv) = a.inv() {
            prop_assert!((&a * &inv).is_one());
        } else {
            prop_assert!(a.is_zero());
        }
    }

    #[test]
    fn scalar_text_round_trip(n in -1000i64..1000, d in 1i64..50) {
        let q = Field::Rational;
        let x = Scalar::parse(q, &format!("{n}/{d}")).unwrap();
        prop_assert_eq!(Scalar::parse(q, &x.to_string()).unwrap(), x);
        let p = Field::Prime(7);
        let y = Scalar::from_i64(p, n);
        prop_assert_eq!(Scalar::parse(p, &y.to_string()).unwrap(), y);
    }
}

#[test]
fn mixed_fields_are_rejected() {
    let mut m = Matrix::zeros(Field::Rational, 1, 1);
    m.set(0, 0, Scalar::from_i64(Field::Prime(3), 1));
    assert!(rank(&m).is_err());
}

#[test]
fn field_specs() {
    assert_eq!(Field::parse("Q").unwrap(), Field::Rational);
    assert_eq!(Field::parse("Zp:5").unwrap(), Field::Prime(5));
    assert!(Field::parse("Zp:6").is_err());
    assert!(Field::parse("R").is_err());
}
