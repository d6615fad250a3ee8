//! Dense matrices over [`CycloScalar`].
//!
//! Tensor products are Kronecker products, so tensor bases are ordered
//! lexicographically; every other basis order enters through an explicit
//! permutation matrix.

use std::borrow::Cow;
use std::fmt;

use nalgebra::{Complex, DMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{CycloScalar, Term};

/// Largest number of entries a constructed matrix may hold.
pub const ENTRY_CAP: usize = 1 << 20;

/// Tolerance for the numeric eigenvalue proposals.
pub const PROPOSAL_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    /// Common cyclotomic order of every entry.
    order: u32,
    entries: Vec<CycloScalar>,
}

impl PartialEq for ExactMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for ExactMatrix {}

fn check_size(rows: usize, cols: usize) -> Result<()> {
    let entries = rows as u128 * cols as u128;
    if entries > ENTRY_CAP as u128 {
        return Err(Error::SizeCap {
            entries,
            cap: ENTRY_CAP,
        });
    }
    Ok(())
}

impl ExactMatrix {
    /// Build from row-major entries, promoting them to a common order.
    pub fn new(rows: usize, cols: usize, entries: Vec<CycloScalar>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Shape(
                "matrices must have positive dimensions".into(),
            ));
        }
        check_size(rows, cols)?;
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries given for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut order = 1u32;
        for e in &entries {
            if !order.is_multiple_of(e.order()) {
                order = lcm_order(order, e.order())?;
            }
        }
        let entries = entries
            .into_iter()
            .map(|e| e.promote(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix {
            rows,
            cols,
            order,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<CycloScalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycloScalar,
    ) -> Result<Self> {
        check_size(rows, cols)?;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::from_fn(n, n, |i, j| CycloScalar::from_integer((i == j) as i64))
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_fn(rows, cols, |_, _| CycloScalar::zero())
    }

    /// Square matrix with the given diagonal.
    pub fn diagonal(diag: &[CycloScalar]) -> Result<Self> {
        let n = diag.len();
        Self::from_fn(n, n, |i, j| {
            if i == j {
                diag[i].clone()
            } else {
                CycloScalar::zero()
            }
        })
    }

    /// Permutation matrix with a one at `(k, perm[k])` for each row `k`.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &p in perm {
            if p >= n || std::mem::replace(&mut seen[p], true) {
                return Err(Error::InvalidArgument(format!(
                    "{perm:?} is not a permutation"
                )));
            }
        }
        Self::from_fn(n, n, |i, j| {
            CycloScalar::from_integer((perm[i] == j) as i64)
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycloScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycloScalar] {
        &self.entries
    }

    pub fn promote(&self, order: u32) -> Result<Self> {
        if order == self.order {
            return Ok(self.clone());
        }
        let entries = self
            .entries
            .iter()
            .map(|e| e.promote(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            order,
            entries,
        })
    }

    /// Bring two matrices to a common order.
    fn unify(a: &Self, b: &Self) -> Result<(Self, Self)> {
        let order = lcm_order(a.order, b.order)?;
        Ok((a.promote(order)?, b.promote(order)?))
    }

    fn square_dim(&self, what: &str) -> Result<usize> {
        if !self.is_square() {
            return Err(Error::Shape(format!(
                "{what} needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(CycloScalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let e = self.get(i, j);
                    if i == j {
                        e.is_one()
                    } else {
                        e.is_zero()
                    }
                })
            })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (a, b) = if self.order == other.order {
            (Cow::Borrowed(self), Cow::Borrowed(other))
        } else {
            let (a, b) = Self::unify(self, other)?;
            (Cow::Owned(a), Cow::Owned(b))
        };
        let zero = CycloScalar::zero().promote(a.order)?;
        let mut out = vec![zero; a.rows * b.cols];
        // skip zero entries; most matrices here are sparse
        for i in 0..a.rows {
            for k in 0..a.cols {
                let aik = a.get(i, k);
                if aik.is_zero() {
                    continue;
                }
                for j in 0..b.cols {
                    let bkj = b.get(k, j);
                    if bkj.is_zero() {
                        continue;
                    }
                    let slot = &mut out[i * b.cols + j];
                    *slot = slot.try_add(&aik.try_mul(bkj)?)?;
                }
            }
        }
        Ok(ExactMatrix {
            rows: a.rows,
            cols: b.cols,
            order: a.order,
            entries: out,
        })
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CycloScalar, &CycloScalar) -> Result<CycloScalar>,
    ) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape(format!(
                "{}x{} and {}x{} differ in shape",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(x, y)| f(x, y))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, CycloScalar::try_add)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, CycloScalar::try_sub)
    }

    pub fn scale(&self, s: &CycloScalar) -> Result<Self> {
        let entries = self
            .entries
            .iter()
            .map(|e| e.try_mul(s))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        ExactMatrix {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            entries,
        }
    }

    pub fn conj(&self) -> Self {
        ExactMatrix {
            entries: self.entries.iter().map(CycloScalar::conj).collect(),
            ..self.clone()
        }
    }

    pub fn conj_transpose(&self) -> Self {
        self.transpose().conj()
    }

    pub fn trace(&self) -> Result<CycloScalar> {
        let n = self.square_dim("trace")?;
        (0..n).try_fold(CycloScalar::zero(), |acc, i| acc.try_add(self.get(i, i)))
    }

    pub fn is_unitary(&self) -> Result<bool> {
        self.square_dim("unitarity")?;
        Ok(self.matmul(&self.conj_transpose())?.is_identity())
    }

    pub fn pow(&self, mut e: u32) -> Result<Self> {
        let n = self.square_dim("power")?;
        let mut acc = Self::identity(n)?;
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.matmul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base)?;
            }
        }
        Ok(acc)
    }

    /// `self - λ I`.
    pub fn shift(&self, lambda: &CycloScalar) -> Result<Self> {
        let n = self.square_dim("shift")?;
        let mut entries = self.entries.clone();
        for i in 0..n {
            entries[i * n + i] = entries[i * n + i].try_sub(lambda)?;
        }
        Self::new(n, n, entries)
    }

    /// Row-reduce a copy; returns the rank and, on failure to find a pivot,
    /// the first stage at which that happened.
    fn eliminate(&self) -> Result<(usize, Option<usize>)> {
        let mut m: Vec<Vec<CycloScalar>> = (0..self.rows)
            .map(|i| self.entries[i * self.cols..(i + 1) * self.cols].to_vec())
            .collect();
        let mut rank = 0;
        let mut first_missing = None;
        for col in 0..self.cols {
            let Some(p) = (rank..self.rows).find(|&r| !m[r][col].is_zero()) else {
                first_missing.get_or_insert(col);
                continue;
            };
            m.swap(rank, p);
            let inv = m[rank][col].inverse()?;
            let pivot = m[rank].clone();
            for row in m.iter_mut().skip(rank + 1) {
                if row[col].is_zero() {
                    continue;
                }
                let factor = row[col].try_mul(&inv)?;
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x = x.try_sub(&factor.try_mul(p)?)?;
                }
            }
            rank += 1;
        }
        Ok((rank, first_missing))
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.eliminate()?.0)
    }

    pub fn is_singular(&self) -> Result<bool> {
        let n = self.square_dim("singularity test")?;
        Ok(self.rank()? < n)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.square_dim("inverse")?;
        let one = CycloScalar::one().promote(self.order)?;
        let zero = CycloScalar::zero().promote(self.order)?;
        let mut a: Vec<Vec<CycloScalar>> = (0..n)
            .map(|i| {
                let mut row = self.entries[i * n..(i + 1) * n].to_vec();
                row.extend((0..n).map(|j| if i == j { one.clone() } else { zero.clone() }));
                row
            })
            .collect();
        for col in 0..n {
            let p = (col..n)
                .find(|&r| !a[r][col].is_zero())
                .ok_or(Error::Singular { stage: col })?;
            a.swap(col, p);
            let inv = a[col][col].inverse()?;
            for x in a[col].iter_mut() {
                *x = x.try_mul(&inv)?;
            }
            let pivot = a[col].clone();
            for (r, row) in a.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let factor = row[col].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    if !p.is_zero() {
                        *x = x.try_sub(&factor.try_mul(p)?)?;
                    }
                }
            }
        }
        let inv = Self::new(
            n,
            n,
            a.into_iter()
                .flat_map(|row| row.into_iter().skip(n))
                .collect(),
        )?;
        debug_assert!(self.matmul(&inv)?.is_identity());
        Ok(inv)
    }

    /// Floating-point copy for diagnostics.
    pub fn to_complex(&self) -> DMatrix<Complex<f64>> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self.get(i, j).to_complex())
    }

    /// Numeric eigenvalues, used only to propose candidates for exact certification.
    pub fn numeric_eigenvalues(&self) -> Result<Vec<Complex<f64>>> {
        self.square_dim("eigenvalues")?;
        let schur = nalgebra::Schur::new(self.to_complex());
        let (_, t) = schur.unpack();
        Ok((0..self.rows).map(|i| t[(i, i)]).collect())
    }

    /// Propose roots of unity `ζ_order^k` lying within [`PROPOSAL_TOLERANCE`]
    /// of a numeric eigenvalue. Proposals still need exact certification.
    pub fn propose_roots_of_unity(&self, order: u32) -> Result<Vec<CycloScalar>> {
        let eigs = self.numeric_eigenvalues()?;
        let mut out: Vec<CycloScalar> = Vec::new();
        for k in 0..order as i64 {
            let root = CycloScalar::zeta_power(order, k)?;
            let z = root.to_complex();
            if eigs.iter().any(|e| (e - z).norm() < PROPOSAL_TOLERANCE) && !out.contains(&root) {
                out.push(root);
            }
        }
        Ok(out)
    }

    pub fn to_file(&self, order: Option<u32>) -> Result<MatrixFile> {
        let order = match order {
            Some(o) => lcm_order(o, self.order)?,
            None => self.order,
        };
        let entries = self
            .entries
            .iter()
            .map(|e| e.to_terms(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(MatrixFile {
            cyclotomic_order: order,
            rows: self.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn from_file(file: &MatrixFile) -> Result<Self> {
        let entries = file
            .entries
            .iter()
            .map(|t| CycloScalar::from_terms(t, file.cyclotomic_order))
            .collect::<Result<Vec<_>>>()?;
        Self::new(file.rows, file.cols, entries)
    }

    pub fn to_decimal_file(&self) -> DecimalMatrixFile {
        DecimalMatrixFile {
            non_authoritative: true,
            note: "decimal rendering for inspection only; exact data uses the term format".into(),
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .map(|e| {
                    let c = e.to_complex();
                    [c.re, c.im]
                })
                .collect(),
        }
    }
}

/// Least common multiple of two cyclotomic orders, capped at [`crate::scalar::ORDER_CAP`].
pub fn lcm_order(a: u32, b: u32) -> Result<u32> {
    let (mut x, mut y) = (a as u64, b as u64);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    let l = a as u64 / x * b as u64;
    if l > crate::scalar::ORDER_CAP as u64 {
        return Err(Error::OrderTooLarge {
            order: l,
            cap: crate::scalar::ORDER_CAP,
        });
    }
    Ok(l as u32)
}

/// Kronecker product; `(A ⊗ B)[i·rB + k, j·cB + l] = A[i,j]·B[k,l]`.
pub fn kron(a: &ExactMatrix, b: &ExactMatrix) -> Result<ExactMatrix> {
    let rows = a.rows.checked_mul(b.rows).ok_or(Error::SizeCap {
        entries: u128::MAX,
        cap: ENTRY_CAP,
    })?;
    let cols = a.cols * b.cols;
    check_size(rows, cols)?;
    let (a, b) = ExactMatrix::unify(a, b)?;
    let zero = CycloScalar::zero().promote(a.order)?;
    let mut entries = vec![zero; rows * cols];
    for i in 0..a.rows {
        for j in 0..a.cols {
            let aij = a.get(i, j);
            if aij.is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    let bkl = b.get(k, l);
                    if !bkl.is_zero() {
                        entries[(i * b.rows + k) * cols + j * b.cols + l] = aij.try_mul(bkl)?;
                    }
                }
            }
        }
    }
    Ok(ExactMatrix {
        rows,
        cols,
        order: a.order,
        entries,
    })
}

/// `I_left ⊗ m ⊗ I_right`.
pub fn sandwich(left: usize, m: &ExactMatrix, right: usize) -> Result<ExactMatrix> {
    let mut out = m.clone();
    if left > 1 {
        out = kron(&ExactMatrix::identity(left)?, &out)?;
    }
    if right > 1 {
        out = kron(&out, &ExactMatrix::identity(right)?)?;
    }
    Ok(out)
}

/// Block-diagonal matrix from square blocks, in the given order.
pub fn direct_sum(blocks: &[ExactMatrix]) -> Result<ExactMatrix> {
    if blocks.is_empty() {
        return Err(Error::Empty("direct_sum needs at least one block"));
    }
    for b in blocks {
        b.square_dim("direct_sum")?;
    }
    let n: usize = blocks.iter().map(ExactMatrix::rows).sum();
    check_size(n, n)?;
    let mut entries = vec![CycloScalar::zero(); n * n];
    let mut offset = 0;
    for b in blocks {
        for i in 0..b.rows {
            for j in 0..b.cols {
                entries[(offset + i) * n + offset + j] = b.get(i, j).clone();
            }
        }
        offset += b.rows;
    }
    ExactMatrix::new(n, n, entries)
}

/// True iff `∏ (M - λI)` over `roots` vanishes and every `M - λI` is singular.
pub fn annihilation_check(m: &ExactMatrix, roots: &[CycloScalar]) -> Result<bool> {
    if roots.is_empty() {
        return Err(Error::Empty("annihilation_check needs at least one root"));
    }
    let n = m.square_dim("annihilation_check")?;
    let mut product = ExactMatrix::identity(n)?;
    for lambda in roots {
        let shifted = m.shift(lambda)?;
        if !shifted.is_singular()? {
            return Ok(false);
        }
        product = product.matmul(&shifted)?;
    }
    Ok(product.is_zero())
}

/// Exact matrix file: header plus row-major serialized scalars.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFile {
    pub cyclotomic_order: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<Vec<Term>>,
}

/// Human-readable export; never read back.
#[derive(Clone, Debug, Serialize)]
pub struct DecimalMatrixFile {
    pub non_authoritative: bool,
    pub note: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<String> = self.entries.iter().map(ToString::to_string).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| format!("{:>width$}", cells[i * self.cols + j]))
                .collect();
            writeln!(f, "[ {} ]", row.join("  "))?;
        }
        Ok(())
    }
}
