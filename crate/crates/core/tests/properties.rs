mod common;

use common::strategies::{matrix, monomial, scalar};
use gybe::fusion::{builtin_category, gen_so_odd_level2, parse_category_str};
use gybe::linalg::{direct_sum, kron, MatrixFile};
use gybe::{CycloScalar, ExactMatrix};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn field_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a + &CycloScalar::zero(), a.clone());
        prop_assert_eq!(&a * &CycloScalar::one(), a.clone());
        prop_assert!((&a + &(-&a)).is_zero());
        if !a.is_zero() {
            prop_assert!((&a * &a.inverse().unwrap()).is_one());
            prop_assert_eq!(b.try_div(&a).unwrap().try_mul(&a).unwrap(), b.clone());
        } else {
            prop_assert!(a.inverse().is_err());
        }
    }

    #[test]
    fn conjugation_is_a_field_automorphism(a in scalar(), b in scalar()) {
        prop_assert_eq!((&a * &b).conj(), &a.conj() * &b.conj());
        prop_assert_eq!((&a + &b).conj(), &a.conj() + &b.conj());
        prop_assert_eq!(a.conj().conj(), a.clone());
        let z = a.to_complex().conj();
        let w = a.conj().to_complex();
        prop_assert!((z - w).norm() <= 1e-9 * (1.0 + z.norm()));
    }

    #[test]
    fn embedding_is_a_homomorphism(a in scalar(), b in scalar()) {
        let tol = 2f64.powi(-40);
        let (za, zb) = (a.to_complex(), b.to_complex());
        let scale = 1.0 + za.norm() * zb.norm() + za.norm() + zb.norm();
        prop_assert!(((&a * &b).to_complex() - za * zb).norm() <= tol * scale);
        prop_assert!(((&a + &b).to_complex() - (za + zb)).norm() <= tol * scale);
    }

    #[test]
    fn promotion_preserves_values(a in scalar(), b in scalar()) {
        let pa = a.promote(72).unwrap();
        prop_assert_eq!(&pa, &a);
        prop_assert_eq!(pa.order(), 72);
        prop_assert_eq!(pa.try_mul(&b).unwrap(), &a * &b);
    }

    #[test]
    fn serialized_terms_round_trip(a in scalar()) {
        let terms = a.to_terms(24).unwrap();
        let text = serde_json::to_string(&terms).unwrap();
        let back: Vec<gybe::scalar::Term> = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(CycloScalar::from_terms(&back, 24).unwrap(), a);
    }
}

#[test]
fn roots_of_unity_have_their_order() {
    for q in 1..=60u32 {
        for p in [1i64, -1, 7] {
            let z = CycloScalar::root_of_unity(p, q).unwrap();
            assert!(z.pow(q).is_one(), "zeta_{q}^{p}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_is_associative(a in matrix(2, 2), b in matrix(1, 2), c in matrix(2, 1)) {
        prop_assert_eq!(
            kron(&kron(&a, &b).unwrap(), &c).unwrap(),
            kron(&a, &kron(&b, &c).unwrap()).unwrap()
        );
    }

    #[test]
    fn kron_mixed_product(a in matrix(2, 2), b in matrix(2, 2), c in matrix(2, 2), d in matrix(2, 2)) {
        let lhs = kron(&a, &b).unwrap().matmul(&kron(&c, &d).unwrap()).unwrap();
        let rhs = kron(&a.matmul(&c).unwrap(), &b.matmul(&d).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn kron_is_bilinear(a in matrix(2, 2), a2 in matrix(2, 2), b in matrix(2, 2), s in monomial()) {
        prop_assert_eq!(
            kron(&a.add(&a2).unwrap(), &b).unwrap(),
            kron(&a, &b).unwrap().add(&kron(&a2, &b).unwrap()).unwrap()
        );
        prop_assert_eq!(
            kron(&a.scale(&s).unwrap(), &b).unwrap(),
            kron(&a, &b.scale(&s).unwrap()).unwrap()
        );
    }

    #[test]
    fn direct_sum_trace(a in matrix(2, 2), b in matrix(3, 3)) {
        let t = direct_sum(&[a.clone(), b.clone()]).unwrap().trace().unwrap();
        prop_assert_eq!(t, &a.trace().unwrap() + &b.trace().unwrap());
    }

    #[test]
    fn inverse_is_two_sided(a in matrix(3, 3)) {
        if let Ok(inv) = a.inverse() {
            prop_assert!(a.matmul(&inv).unwrap().is_identity());
            prop_assert!(inv.matmul(&a).unwrap().is_identity());
        } else {
            prop_assert!(a.is_singular().unwrap());
        }
    }

    #[test]
    fn matrix_files_round_trip(a in matrix(3, 2)) {
        let text = serde_json::to_string(&a.to_file(None).unwrap()).unwrap();
        let file: MatrixFile = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(ExactMatrix::from_file(&file).unwrap(), a);
    }
}

#[test]
fn builtin_categories_round_trip() {
    for name in ["jk6", "ising"] {
        let cat = builtin_category(name).unwrap();
        let again = parse_category_str(&cat.to_json().unwrap()).unwrap();
        assert_eq!(again, cat);
        assert_eq!(again.to_json().unwrap(), cat.to_json().unwrap());
    }
}

#[test]
fn generated_rings_are_associative() {
    for r in 1..=5 {
        gen_so_odd_level2(r).unwrap().validate().unwrap();
    }
}
