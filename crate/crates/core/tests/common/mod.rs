#![allow(dead_code)]

use gybe::finder::{is_gybe_object, GybeCertificate};
use gybe::fusion::{builtin_category, parse_label_list, CategoryData, ObjectExpr};
use gybe::linalg::MatrixFile;
use gybe::rep::assemble_R;
use gybe::ExactMatrix;

pub const JK6_PRINTED: &str = include_str!("../../data/jk6_printed_r.json");
pub const ISING_PRINTED: &str = include_str!("../../data/ising_printed_r.json");

pub fn matrix(text: &str) -> ExactMatrix {
    let file: MatrixFile = serde_json::from_str(text).unwrap();
    ExactMatrix::from_file(&file).unwrap()
}

pub fn certificate(cat: &CategoryData, object: &str, set: &str) -> GybeCertificate {
    let ring = cat.ring();
    let x = ObjectExpr::parse(ring, object).unwrap();
    let s = parse_label_list(ring, set).unwrap();
    is_gybe_object(ring, &x, &s).unwrap()
}

pub fn jk6() -> (CategoryData, GybeCertificate) {
    let cat = builtin_category("jk6").unwrap();
    let cert = certificate(&cat, "2", "1,3");
    (cat, cert)
}

pub fn ising() -> (CategoryData, GybeCertificate) {
    let cat = builtin_category("ising").unwrap();
    let cert = certificate(&cat, "1,psi", "1,psi");
    (cat, cert)
}

pub fn jk6_r() -> ExactMatrix {
    let (cat, cert) = jk6();
    assemble_R(&cat, &cert).unwrap().r
}

pub fn ising_r() -> ExactMatrix {
    let (cat, cert) = ising();
    assemble_R(&cat, &cert).unwrap().r
}

/// Flip the sign of one entry.
pub fn corrupt(m: &ExactMatrix, row: usize, col: usize) -> ExactMatrix {
    ExactMatrix::from_fn(m.rows(), m.cols(), |i, j| {
        let e = m.get(i, j).clone();
        if (i, j) == (row, col) {
            -e
        } else {
            e
        }
    })
    .unwrap()
}

pub mod strategies {
    use gybe::scalar::Term;
    use gybe::{CycloScalar, ExactMatrix};
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn term() -> impl Strategy<Value = Term> {
        (-9i64..=9, 1i64..=6, 0i64..24).prop_map(|(p, q, k)| Term {
            p: BigInt::from(p),
            q: BigInt::from(q),
            k,
        })
    }

    /// Sums of up to four rational multiples of 24th roots of unity.
    pub fn scalar() -> impl Strategy<Value = CycloScalar> {
        proptest::collection::vec(term(), 0..=4)
            .prop_map(|terms| CycloScalar::from_terms(&terms, 24).unwrap())
    }

    /// Scalars with a single term, so products of matrices stay small.
    pub fn monomial() -> impl Strategy<Value = CycloScalar> {
        proptest::collection::vec(term(), 0..=1)
            .prop_map(|terms| CycloScalar::from_terms(&terms, 24).unwrap())
    }

    pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = ExactMatrix> {
        proptest::collection::vec(monomial(), rows * cols)
            .prop_map(move |e| ExactMatrix::new(rows, cols, e).unwrap())
    }
}
