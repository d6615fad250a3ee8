mod common;

use common::{certificate, matrix as printed};
use gybe::finder::GybeCertificate;
use gybe::fusion::{builtin_category, CategoryData};
use gybe::rep::{assemble_R, braid_rep, sector_matrix, tree_basis};
use gybe::{kron, ExactMatrix};

/// Rebuild R entry by entry from the sector matrices, without any permutation matrix.
fn entrywise_r(cat: &CategoryData, cert: &GybeCertificate) -> ExactMatrix {
    let basis = tree_basis(cert, 2).unwrap();
    let set = cert.set();
    let n = basis.len();
    ExactMatrix::from_fn(n, n, |row, col| {
        let (a, b) = (&basis.tuples()[row], &basis.tuples()[col]);
        if a[0] != b[0] || a[2] != b[2] {
            return gybe::CycloScalar::zero();
        }
        let m = sector_matrix(cat, cert, set[a[0]], set[a[2]]).unwrap();
        m.reordered(set).unwrap().get(a[1], b[1]).clone()
    })
    .unwrap()
}

#[test]
fn jk6_r_matches_printed_matrix() {
    let cat = builtin_category("jk6").unwrap();
    let cert = certificate(&cat, "2", "1,3");
    let r = assemble_R(&cat, &cert).unwrap().r;
    assert_eq!(r, printed(common::JK6_PRINTED));
    assert_eq!(r, entrywise_r(&cat, &cert));
}

#[test]
fn ising_r_matches_printed_matrix() {
    let cat = builtin_category("ising").unwrap();
    let cert = certificate(&cat, "1,psi", "1,psi");
    let r = assemble_R(&cat, &cert).unwrap().r;
    assert_eq!(r, printed(common::ISING_PRINTED));
    assert_eq!(r, entrywise_r(&cat, &cert));
}

#[test]
fn jk6_r_has_order_six() {
    let cat = builtin_category("jk6").unwrap();
    let cert = certificate(&cat, "2", "1,3");
    let r = assemble_R(&cat, &cert).unwrap().r;
    for k in 1..6 {
        assert!(!r.pow(k).unwrap().is_identity(), "R^{k} = I");
    }
    assert!(r.pow(6).unwrap().is_identity());
}

#[test]
fn braid_generators_are_sandwiches() {
    let cat = builtin_category("jk6").unwrap();
    let cert = certificate(&cat, "2", "1,3");
    let r = assemble_R(&cat, &cert).unwrap().r;
    let rep = braid_rep(&r, 2, 3).unwrap();
    let i2 = ExactMatrix::identity(2).unwrap();
    assert_eq!(rep.generators[0], kron(&r, &i2).unwrap());
    assert_eq!(rep.generators[1], kron(&i2, &r).unwrap());
}
