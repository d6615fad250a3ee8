//! Tree bases, sector braiding matrices and the assembled `(d,3,1)` R-matrix.
//!
//! A basis vector `e_{i0 i1 ... in}` of the `(n+1)`-punctured disk has
//! leftmost label `i0`, internal labels `i1..i(n-1)` and boundary `in`, all
//! drawn from the certificate's label set `S`. Generator `σ_k` changes only
//! slot `k` and reads slots `k-1` and `k+1`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::finder::GybeCertificate;
use crate::fusion::{CategoryData, FusionRing, Label, ObjectExpr};
use crate::linalg::{direct_sum, sandwich, ExactMatrix, MatrixFile, ENTRY_CAP};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeBasis {
    alphabet: Vec<Label>,
    n: usize,
    /// Lexicographically ordered tuples of alphabet positions.
    tuples: Vec<Vec<usize>>,
}

impl TreeBasis {
    pub fn alphabet(&self) -> &[Label] {
        &self.alphabet
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn tuples(&self) -> &[Vec<usize>] {
        &self.tuples
    }

    pub fn labels(&self, k: usize) -> Vec<Label> {
        self.tuples[k].iter().map(|&p| self.alphabet[p]).collect()
    }

    /// Position of a tuple of alphabet positions in the lexicographic order.
    pub fn index_of(&self, tuple: &[usize]) -> usize {
        let d = self.alphabet.len();
        tuple.iter().fold(0, |acc, &p| acc * d + p)
    }

    /// Names like `e_{131}`; labels are comma-separated once any name is longer than one character.
    pub fn names(&self, ring: &FusionRing) -> Vec<String> {
        let sep = if self
            .alphabet
            .iter()
            .all(|&l| ring.name(l).chars().count() == 1)
        {
            ""
        } else {
            ","
        };
        (0..self.len())
            .map(|k| {
                let parts: Vec<&str> = self.labels(k).iter().map(|&l| ring.name(l)).collect();
                format!("e_{{{}}}", parts.join(sep))
            })
            .collect()
    }
}

fn power_dim(d: usize, exp: usize) -> Result<usize> {
    let dim = (d as u128).checked_pow(exp as u32).unwrap_or(u128::MAX);
    if dim.saturating_mul(dim) > ENTRY_CAP as u128 {
        return Err(Error::SizeCap {
            entries: dim.saturating_mul(dim),
            cap: ENTRY_CAP,
        });
    }
    Ok(dim as usize)
}

pub fn tree_basis(cert: &GybeCertificate, n: usize) -> Result<TreeBasis> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a tree basis needs n >= 2 strands".into(),
        ));
    }
    let d = cert.d();
    let total = power_dim(d, n + 1)?;
    let tuples = (0..total)
        .map(|mut k| {
            let mut t = vec![0; n + 1];
            for slot in t.iter_mut().rev() {
                *slot = k % d;
                k /= d;
            }
            t
        })
        .collect();
    Ok(TreeBasis {
        alphabet: cert.set().to_vec(),
        n,
        tuples,
    })
}

/// How sector matrices are obtained for a certificate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConstructionPath {
    /// Simple `X`: conjugate the diagonal of `R^{XX}_f` by `F^{iXX}_j`.
    FConjugation,
    /// `X` a sum of invertible simples: monomial matrices of braiding scalars.
    Monomial,
}

pub fn construction_path(cat: &CategoryData, cert: &GybeCertificate) -> Result<ConstructionPath> {
    path_for_object(cat.ring(), cert.object())
}

pub fn path_for_object(ring: &FusionRing, x: &ObjectExpr) -> Result<ConstructionPath> {
    if x.is_simple() {
        Ok(ConstructionPath::FConjugation)
    } else if x.summands().iter().all(|&a| ring.is_invertible(a)) {
        Ok(ConstructionPath::Monomial)
    } else {
        Err(Error::Unsupported(format!(
            "object {} is a sum containing non-invertible simples",
            x.names(ring).join("+")
        )))
    }
}

/// Sector matrix `M^{iXX}_j` together with the internal-label order of its rows and columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectorMatrix {
    pub channels: Vec<Label>,
    pub matrix: ExactMatrix,
}

impl SectorMatrix {
    /// Reindex rows and columns by `order` (a permutation of `channels`).
    pub fn reordered(&self, order: &[Label]) -> Result<ExactMatrix> {
        let pos = order
            .iter()
            .map(|l| {
                self.channels.iter().position(|c| c == l).ok_or_else(|| {
                    Error::InvalidArgument("sector channels differ from the label set".into())
                })
            })
            .collect::<Result<Vec<_>>>()?;
        if pos.len() != self.channels.len() {
            return Err(Error::InvalidArgument(
                "sector channels differ from the label set".into(),
            ));
        }
        ExactMatrix::from_fn(pos.len(), pos.len(), |a, b| {
            self.matrix.get(pos[a], pos[b]).clone()
        })
    }
}

/// `M^{iXX}_j` for `i, j ∈ S`.
///
/// For simple `X` this is `F⁻¹·D·F` with `F = F^{iXX}_j` and `D` the diagonal of
/// `R^{XX}_f` over the stored row channels of `F`; rows and columns follow the
/// stored column channels of `F`.
pub fn sector_matrix(
    cat: &CategoryData,
    cert: &GybeCertificate,
    i: Label,
    j: Label,
) -> Result<SectorMatrix> {
    if !cert.set().contains(&i) || !cert.set().contains(&j) {
        return Err(Error::InvalidArgument(format!(
            "sector ({}, {}) is not inside the certificate's label set",
            cat.ring().name(i),
            cat.ring().name(j)
        )));
    }
    match construction_path(cat, cert)? {
        ConstructionPath::FConjugation => f_conjugated_sector(cat, cert, i, j),
        ConstructionPath::Monomial => monomial_sector(cat, cert, i, j),
    }
}

fn f_conjugated_sector(
    cat: &CategoryData,
    cert: &GybeCertificate,
    i: Label,
    j: Label,
) -> Result<SectorMatrix> {
    let x = cert.object().summands()[0];
    let f = cat.f_matrix(i, x, x, j)?;
    let diag = f
        .row_channels
        .iter()
        .map(|&c| cat.r_symbol(x, x, c).cloned())
        .collect::<Result<Vec<_>>>()?;
    let d = ExactMatrix::diagonal(&diag)?;
    let matrix = f.matrix.inverse()?.matmul(&d)?.matmul(&f.matrix)?;
    Ok(SectorMatrix {
        channels: f.col_channels.clone(),
        matrix,
    })
}

/// With `X = ⊕ x` over invertible `x`, the tree `e_{i k j}` fixes the two
/// summands `x1` (`i⊗x1 = k`) and `x2` (`k⊗x2 = j`). Braiding them gives
/// `c_{x1,x2} · e_{i k' j}` with `k' = i⊗x2`.
fn monomial_sector(
    cat: &CategoryData,
    cert: &GybeCertificate,
    i: Label,
    j: Label,
) -> Result<SectorMatrix> {
    let ring = cat.ring();
    let set = cert.set();
    let summands = cert.object().summands();
    let single = |a: Label, b: Label| -> Option<Label> {
        match ring.fuse(a, b) {
            [c] => Some(*c),
            _ => None,
        }
    };
    let d = set.len();
    let mut entries = vec![crate::scalar::CycloScalar::zero(); d * d];
    for (col, &k) in set.iter().enumerate() {
        let x1 = summands.iter().copied().find(|&x| single(i, x) == Some(k));
        let x2 = summands.iter().copied().find(|&x| single(k, x) == Some(j));
        let (Some(x1), Some(x2)) = (x1, x2) else {
            return Err(Error::Unsupported(format!(
                "tree ({}, {}, {}) is not admissible",
                ring.name(i),
                ring.name(k),
                ring.name(j)
            )));
        };
        let target = single(i, x2).expect("invertible summand");
        let row = set.iter().position(|&l| l == target).ok_or_else(|| {
            Error::Unsupported(format!("{} leaves the label set", ring.name(target)))
        })?;
        let channel = single(x1, x2).expect("invertible summands");
        entries[row * d + col] = cat.r_symbol(x1, x2, channel)?.clone();
    }
    Ok(SectorMatrix {
        channels: set.to_vec(),
        matrix: ExactMatrix::new(d, d, entries)?,
    })
}

/// Intermediate and final artifacts of the R-matrix construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assembly {
    pub path: ConstructionPath,
    /// `(i, j)` pairs in block order, lexicographic over the label set.
    pub sectors: Vec<(Label, Label)>,
    /// One block per sector, rows and columns in label-set order.
    pub blocks: Vec<ExactMatrix>,
    /// `B = ⊕ blocks`, acting on the sector-ordered basis.
    pub braid_matrix: ExactMatrix,
    /// `P` maps lexicographic coordinates to sector-ordered coordinates.
    pub permutation: ExactMatrix,
    /// `R = P⁻¹ B P` in the lexicographic basis.
    pub r: ExactMatrix,
}

/// Basis permutation from lexicographic `(i, k, j)` order to sector order
/// `(i, j, k)`: row `m` holds a one in the column of the `m`-th sector vector.
pub fn sector_permutation(d: usize) -> Result<ExactMatrix> {
    let mut perm = Vec::with_capacity(d * d * d);
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                perm.push((i * d + k) * d + j);
            }
        }
    }
    ExactMatrix::permutation(&perm)
}

#[allow(non_snake_case)]
pub fn assemble_R(cat: &CategoryData, cert: &GybeCertificate) -> Result<Assembly> {
    let path = construction_path(cat, cert)?;
    let set = cert.set();
    let mut sectors = Vec::new();
    let mut blocks = Vec::new();
    for &i in set {
        for &j in set {
            let m = sector_matrix(cat, cert, i, j)?;
            blocks.push(m.reordered(set)?);
            sectors.push((i, j));
        }
    }
    let braid_matrix = direct_sum(&blocks)?;
    let permutation = sector_permutation(set.len())?;
    let p_inv = permutation.inverse()?;
    let r = p_inv.matmul(&braid_matrix)?.matmul(&permutation)?;
    if r.is_singular()? {
        return Err(Error::Unsupported(
            "assembled R-matrix is singular; the category data is inconsistent".into(),
        ));
    }
    Ok(Assembly {
        path,
        sectors,
        blocks,
        braid_matrix,
        permutation,
        r,
    })
}

/// Generators `σ_1..σ_{n-1}` on `V^{⊗(n+1)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BraidRep {
    pub n: usize,
    pub d: usize,
    pub generators: Vec<ExactMatrix>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BraidRepFile {
    pub n: usize,
    pub d: usize,
    pub generators: Vec<MatrixFile>,
}

impl BraidRep {
    pub fn dimension(&self) -> usize {
        self.generators.first().map_or(0, ExactMatrix::rows)
    }

    pub fn to_file(&self, order: Option<u32>) -> Result<BraidRepFile> {
        Ok(BraidRepFile {
            n: self.n,
            d: self.d,
            generators: self
                .generators
                .iter()
                .map(|g| g.to_file(order))
                .collect::<Result<_>>()?,
        })
    }
}

/// `R_{σ_k} = I^{⊗(k-1)} ⊗ R ⊗ I^{⊗(n-k-1)}` for a `d³×d³` matrix `R`.
pub fn braid_rep(r: &ExactMatrix, d: usize, n: usize) -> Result<BraidRep> {
    if d == 0 {
        return Err(Error::InvalidArgument("d must be positive".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(
            "a braid group needs n >= 2 strands".into(),
        ));
    }
    let expected = d * d * d;
    if r.rows() != expected || r.cols() != expected {
        return Err(Error::Shape(format!(
            "R must be {expected}x{expected} for d = {d}, got {}x{}",
            r.rows(),
            r.cols()
        )));
    }
    power_dim(d, n + 1)?;
    let generators = (1..n)
        .map(|k| sandwich(d.pow(k as u32 - 1), r, d.pow((n - k - 1) as u32)))
        .collect::<Result<Vec<_>>>()?;
    Ok(BraidRep { n, d, generators })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::finder::is_gybe_object;
    use crate::fusion::builtin_category;
    use crate::scalar::CycloScalar;

    fn jk6() -> (CategoryData, GybeCertificate) {
        let cat = builtin_category("jk6").unwrap();
        let ring = cat.ring();
        let l = |n| ring.label(n).unwrap();
        let cert = is_gybe_object(ring, &ObjectExpr::simple(l("2")), &[l("1"), l("3")]).unwrap();
        (cat, cert)
    }

    fn hdh(a: i64, b: i64) -> ExactMatrix {
        let h = CycloScalar::sqrt2().inverse().unwrap();
        let hm = ExactMatrix::new(2, 2, vec![h.clone(), h.clone(), h.clone(), -h]).unwrap();
        let d = ExactMatrix::diagonal(&[
            CycloScalar::root_of_unity(a, 6).unwrap(),
            CycloScalar::root_of_unity(b, 6).unwrap(),
        ])
        .unwrap();
        hm.matmul(&d).unwrap().matmul(&hm).unwrap()
    }

    #[test]
    fn jk6_tree_basis_order() {
        let (cat, cert) = jk6();
        let basis = tree_basis(&cert, 2).unwrap();
        assert_eq!(
            basis.names(cat.ring()),
            [
                "e_{111}", "e_{113}", "e_{131}", "e_{133}", "e_{311}", "e_{313}", "e_{331}",
                "e_{333}"
            ]
        );
        assert_eq!(tree_basis(&cert, 3).unwrap().len(), 16);
        assert!(tree_basis(&cert, 1).is_err());
        assert!(matches!(tree_basis(&cert, 12), Err(Error::SizeCap { .. })));
    }

    #[test]
    fn every_tree_is_admissible() {
        let (cat, cert) = jk6();
        let ring = cat.ring();
        let x = cert.object().summands()[0];
        let basis = tree_basis(&cert, 4).unwrap();
        for k in 0..basis.len() {
            let labels = basis.labels(k);
            assert!(labels
                .windows(2)
                .all(|w| ring.fuse(w[0], x).contains(&w[1])));
            assert_eq!(basis.index_of(&basis.tuples()[k]), k);
        }
    }

    #[test]
    fn jk6_sector_matrices() {
        let (cat, cert) = jk6();
        let l = |n| cat.ring().label(n).unwrap();
        let m11 = sector_matrix(&cat, &cert, l("1"), l("1")).unwrap();
        assert_eq!(m11.channels, vec![l("1"), l("3")]);
        assert_eq!(m11.matrix, hdh(2, 4));
        let m31 = sector_matrix(&cat, &cert, l("3"), l("1")).unwrap();
        assert_eq!(m31.matrix, hdh(5, 4));
        let m33 = sector_matrix(&cat, &cert, l("3"), l("3")).unwrap();
        assert_eq!(m33.matrix, m11.matrix);
        assert!(sector_matrix(&cat, &cert, l("0"), l("1")).is_err());
    }

    #[test]
    fn permutation_matches_block_sum() {
        let one = ExactMatrix::identity(1).unwrap();
        let sx = ExactMatrix::permutation(&[1, 0]).unwrap();
        let expected =
            direct_sum(&[one.clone(), sx.clone(), one.clone(), one.clone(), sx, one]).unwrap();
        assert_eq!(sector_permutation(2).unwrap(), expected);
        assert!(sector_permutation(3)
            .unwrap()
            .matmul(&sector_permutation(3).unwrap().transpose())
            .unwrap()
            .is_identity());
    }

    #[test]
    fn assembled_r_is_block_structured() {
        let (cat, cert) = jk6();
        let asm = assemble_R(&cat, &cert).unwrap();
        assert_eq!(asm.path, ConstructionPath::FConjugation);
        let basis = tree_basis(&cert, 2).unwrap();
        for row in 0..8 {
            for col in 0..8 {
                let (a, b) = (&basis.tuples()[row], &basis.tuples()[col]);
                if a[0] != b[0] || a[2] != b[2] {
                    assert!(asm.r.get(row, col).is_zero());
                }
            }
        }
        assert!(asm.r.pow(6).unwrap().is_identity());
        assert!(asm.r.is_unitary().unwrap());
    }

    #[test]
    fn ising_uses_monomial_blocks() {
        let cat = builtin_category("ising").unwrap();
        let ring = cat.ring();
        let s = [ring.unit(), ring.label("psi").unwrap()];
        let cert = is_gybe_object(ring, &ObjectExpr::parse(ring, "1,psi").unwrap(), &s).unwrap();
        let asm = assemble_R(&cat, &cert).unwrap();
        assert_eq!(asm.path, ConstructionPath::Monomial);
        for block in &asm.blocks {
            let nonzero = block.entries().iter().filter(|e| !e.is_zero()).count();
            assert_eq!(nonzero, 2);
        }
        // R^2 = I for the +-1 braiding scalars, and R is a signed permutation
        assert!(asm.r.pow(2).unwrap().is_identity());
    }

    #[test]
    fn sums_with_non_invertible_summands_are_unsupported() {
        let cat = builtin_category("jk6").unwrap();
        let ring = cat.ring();
        let x = ObjectExpr::parse(ring, "0,2").unwrap();
        assert!(matches!(
            path_for_object(ring, &x),
            Err(Error::Unsupported(_))
        ));
        let x = ObjectExpr::parse(ring, "0,1").unwrap();
        assert!(matches!(
            path_for_object(ring, &x),
            Err(Error::Unsupported(_))
        ));
        let x = ObjectExpr::parse(ring, "0,4").unwrap();
        assert_eq!(
            path_for_object(ring, &x).unwrap(),
            ConstructionPath::Monomial
        );
        let x = ObjectExpr::parse(ring, "2").unwrap();
        assert_eq!(
            path_for_object(ring, &x).unwrap(),
            ConstructionPath::FConjugation
        );
    }

    #[test]
    fn missing_f_symbol_is_named() {
        // jk6 with the F-matrices removed
        let mut file: crate::fusion::CategoryFile =
            serde_json::from_str(crate::fusion::JK6_JSON).unwrap();
        file.f.clear();
        let cat = CategoryData::from_file(&file).unwrap();
        let ring = cat.ring();
        let l = |n| ring.label(n).unwrap();
        let cert = is_gybe_object(ring, &ObjectExpr::simple(l("2")), &[l("1"), l("3")]).unwrap();
        let err = assemble_R(&cat, &cert).unwrap_err();
        assert_eq!(err.to_string(), "missing symbol F^{122}_{1}");
    }

    #[test]
    fn braid_rep_shapes() {
        let (cat, cert) = jk6();
        let r = assemble_R(&cat, &cert).unwrap().r;
        let rep = braid_rep(&r, 2, 2).unwrap();
        assert_eq!(rep.generators, vec![r.clone()]);
        let rep = braid_rep(&r, 2, 4).unwrap();
        assert_eq!(rep.generators.len(), 3);
        assert_eq!(rep.dimension(), 32);
        assert!(matches!(braid_rep(&r, 3, 3), Err(Error::Shape(_))));
        assert!(braid_rep(&r, 2, 1).is_err());
    }
}
