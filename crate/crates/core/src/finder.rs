//! Fusion-ring level analysis: Frobenius-Perron dimensions and the search
//! for objects `X` with a label set `S` such that `X ⊗ s ≅ ⊕_{t∈S} t` for
//! every `s ∈ S`.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::fusion::{FusionRing, Label, ObjectExpr};

/// Power-iteration stopping threshold on the Rayleigh quotient.
pub const RAYLEIGH_TOLERANCE: f64 = 1e-13;
/// Power-iteration stopping threshold on the normalized eigenvector.
pub const VECTOR_TOLERANCE: f64 = 1e-10;
pub const MAX_POWER_STEPS: usize = 100_000;
/// Distance to an integer below which a dimension is tested for exactness.
pub const INTEGER_SNAP: f64 = 1e-9;
pub const MAX_EXACT_DIM: u64 = 1 << 10;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FpDim {
    pub value: f64,
    /// Set when the dimension is a certified integer.
    pub exact: Option<u64>,
    pub error_bound: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FpDims {
    dims: Vec<FpDim>,
}

impl FpDims {
    pub fn get(&self, l: Label) -> &FpDim {
        &self.dims[l.0]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &FpDim)> {
        self.dims.iter().enumerate().map(|(i, d)| (Label(i), d))
    }

    pub fn to_json(&self, ring: &FusionRing) -> serde_json::Value {
        let map: serde_json::Map<String, serde_json::Value> = self
            .iter()
            .map(|(l, d)| {
                (
                    ring.name(l).to_string(),
                    serde_json::to_value(d).expect("plain data"),
                )
            })
            .collect();
        serde_json::Value::Object(map)
    }
}

/// Frobenius-Perron dimensions of every label.
///
/// The dimension vector is the Perron eigenvector of `Σ_a N_a`, which is
/// entrywise positive for a fusion ring; normalizing its unit coordinate to 1
/// gives `d_a` as the `a` coordinate. Integer dimensions are then certified
/// exactly by exhibiting a positive rational eigenvector of `N_a`.
pub fn fp_dimensions(ring: &FusionRing) -> Result<FpDims> {
    let n = ring.rank();
    let fusion: Vec<Vec<Vec<u32>>> = ring.labels().map(|a| ring.fusion_matrix(a)).collect();
    let mut sum = vec![vec![0f64; n]; n];
    for m in &fusion {
        for (row, mrow) in sum.iter_mut().zip(m) {
            for (s, &v) in row.iter_mut().zip(mrow) {
                *s += v as f64;
            }
        }
    }

    let mut v = vec![1f64; n];
    let mut last = f64::NAN;
    let mut converged = false;
    for _ in 0..MAX_POWER_STEPS {
        let w = mat_vec(&sum, &v);
        let rayleigh = dot(&v, &w) / dot(&v, &v);
        let norm = dot(&w, &w).sqrt();
        let next: Vec<f64> = w.into_iter().map(|x| x / norm).collect();
        let moved = next
            .iter()
            .zip(&v)
            .map(|(a, b)| (a - b).abs())
            .fold(0f64, f64::max);
        v = next;
        if (rayleigh - last).abs() <= RAYLEIGH_TOLERANCE * rayleigh.abs().max(1.0)
            && moved <= VECTOR_TOLERANCE
        {
            converged = true;
            break;
        }
        last = rayleigh;
    }
    if !converged {
        return Err(Error::NoConvergence {
            steps: MAX_POWER_STEPS,
        });
    }
    let scale = v[ring.unit().0];
    let v: Vec<f64> = v.iter().map(|x| x / scale).collect();
    let vv = dot(&v, &v);

    let mut dims = Vec::with_capacity(n);
    for na in &fusion {
        // Rayleigh quotient of N_a: v^T N_a v only sees the symmetric part
        // (N_a + N_a*)/2, so the error is quadratic in the vector error.
        let value = dot(&v, &mat_vec(na, &v)) / vv;
        let image = mat_vec(na, &v);
        let residual = image
            .iter()
            .zip(&v)
            .map(|(x, y)| (x - value * y).abs())
            .fold(0f64, f64::max);
        let nearest = value.round();
        let exact = if (value - nearest).abs() < INTEGER_SNAP
            && nearest >= 1.0
            && nearest as u64 <= MAX_EXACT_DIM
            && certify_integer_perron_root(na, nearest as u64, &v)
        {
            Some(nearest as u64)
        } else {
            None
        };
        dims.push(FpDim {
            value: exact.map_or(value, |k| k as f64),
            exact,
            error_bound: if exact.is_some() {
                0.0
            } else {
                residual.max(f64::EPSILON * value)
            },
        });
    }
    let dims = FpDims { dims };

    // d_a d_b = Σ_c N_ab^c d_c
    for a in ring.labels() {
        for b in ring.labels() {
            let lhs = dims.get(a).value * dims.get(b).value;
            let rhs: f64 = ring.fuse(a, b).iter().map(|&c| dims.get(c).value).sum();
            if (lhs - rhs).abs() > 1e-12 * rhs.max(1.0) {
                return Err(Error::NoConvergence {
                    steps: MAX_POWER_STEPS,
                });
            }
        }
    }
    Ok(dims)
}

fn mat_vec(m: &[Vec<impl Copy + Into<f64>>], v: &[f64]) -> Vec<f64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(&a, b)| a.into() * b).sum())
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `k` is the Perron root of the nonnegative matrix `m` iff some entrywise
/// positive vector `u` has `m u = k u`. Such a `u` is found in the rational
/// kernel of `m - kI` by rounding the numeric Perron vector's coordinates
/// on the free variables.
fn certify_integer_perron_root(m: &[Vec<u32>], k: u64, perron: &[f64]) -> bool {
    let n = m.len();
    let shifted: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = m[i][j] as i64 - if i == j { k as i64 } else { 0 };
                    BigRational::from_integer(BigInt::from(v))
                })
                .collect()
        })
        .collect();
    let (rref, pivots) = rref(shifted);
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    if free.is_empty() {
        return false;
    }
    let denom = BigInt::from(1u64 << 20);
    let mut u = vec![BigRational::zero(); n];
    for &f in &free {
        let scaled = (perron[f] * (1u64 << 20) as f64).round();
        let Some(r) = BigRational::from_float(scaled) else {
            return false;
        };
        u[f] = r / BigRational::from_integer(denom.clone());
    }
    for (row, &p) in pivots.iter().enumerate() {
        let mut acc = BigRational::zero();
        for &f in &free {
            acc -= &rref[row][f] * &u[f];
        }
        u[p] = acc;
    }
    if !u.iter().all(|x| x.is_positive()) {
        return false;
    }
    let kq = BigRational::from_integer(BigInt::from(k));
    (0..n).all(|i| {
        let lhs: BigRational = (0..n)
            .map(|j| BigRational::from_integer(BigInt::from(m[i][j])) * &u[j])
            .fold(BigRational::zero(), |a, b| a + b);
        lhs == &kq * &u[i]
    })
}

/// Reduced row echelon form and pivot columns.
fn rref(mut a: Vec<Vec<BigRational>>) -> (Vec<Vec<BigRational>>, Vec<usize>) {
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

/// Evidence that `object ⊗ s ≅ ⊕ set` for every `s` in `set`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GybeCertificate {
    object: ObjectExpr,
    set: Vec<Label>,
    decompositions: Vec<(Label, Vec<Label>)>,
    outside_set: Vec<Label>,
}

impl GybeCertificate {
    pub fn object(&self) -> &ObjectExpr {
        &self.object
    }

    /// The label set `S`, in the order it was given.
    pub fn set(&self) -> &[Label] {
        &self.set
    }

    pub fn d(&self) -> usize {
        self.set.len()
    }

    pub fn decompositions(&self) -> &[(Label, Vec<Label>)] {
        &self.decompositions
    }

    /// Summands of the object that are not themselves in `S`.
    pub fn summands_outside_set(&self) -> &[Label] {
        &self.outside_set
    }

    pub fn to_json(&self, ring: &FusionRing) -> serde_json::Value {
        let names = |ls: &[Label]| -> Vec<String> {
            ls.iter().map(|&l| ring.name(l).to_string()).collect()
        };
        let decompositions: serde_json::Map<String, serde_json::Value> = self
            .decompositions
            .iter()
            .map(|(i, parts)| (ring.name(*i).to_string(), serde_json::json!(names(parts))))
            .collect();
        serde_json::json!({
            "object": self.object.names(ring),
            "set": names(&self.set),
            "d": self.d(),
            "decompositions": decompositions,
            "summands_outside_set": names(&self.outside_set),
        })
    }
}

/// Why a candidate `(X, S)` is not a gYBE pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GybeRefusal {
    /// `S` must hold at least two labels.
    TooFewLabels {
        d: usize,
    },
    RepeatedLabel(Label),
    /// `X ⊗ i` is not `⊕ S`.
    Mismatch {
        i: Label,
        actual: Vec<Label>,
    },
}

impl GybeRefusal {
    pub fn describe(&self, ring: &FusionRing) -> String {
        match self {
            GybeRefusal::TooFewLabels { d } => {
                format!("the set has {d} label(s); at least 2 are needed")
            }
            GybeRefusal::RepeatedLabel(l) => format!("label {} repeated in the set", ring.name(*l)),
            GybeRefusal::Mismatch { i, actual } => format!(
                "X x {} = {} is not the sum over the set",
                ring.name(*i),
                actual
                    .iter()
                    .map(|&l| ring.name(l))
                    .collect::<Vec<_>>()
                    .join(" + ")
            ),
        }
    }
}

pub fn is_gybe_object(
    ring: &FusionRing,
    x: &ObjectExpr,
    s: &[Label],
) -> Result<GybeCertificate, GybeRefusal> {
    if s.len() < 2 {
        return Err(GybeRefusal::TooFewLabels { d: s.len() });
    }
    let mut sorted = s.to_vec();
    sorted.sort();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(GybeRefusal::RepeatedLabel(w[0]));
    }
    let mut decompositions = Vec::with_capacity(s.len());
    for &i in s {
        let actual = ring.fuse_multiset(x.summands(), i);
        if actual != sorted {
            return Err(GybeRefusal::Mismatch { i, actual });
        }
        decompositions.push((i, actual));
    }
    let outside_set = x
        .summands()
        .iter()
        .copied()
        .filter(|l| !s.contains(l))
        .collect();
    Ok(GybeCertificate {
        object: x.clone(),
        set: s.to_vec(),
        decompositions,
        outside_set,
    })
}

/// Every certificate with `X` a sum of at most `max_summands` distinct
/// simples, sorted lexicographically by `(X, S)` in label order.
///
/// `S` is never enumerated blindly: for a valid pair, `S = X ⊗ i` for any
/// `i ∈ S`, so each `(X, i)` proposes the only possible `S`.
pub fn find_gybe_objects(ring: &FusionRing, max_summands: usize) -> Result<Vec<GybeCertificate>> {
    if max_summands == 0 {
        return Err(Error::InvalidArgument(
            "max_summands must be at least 1".into(),
        ));
    }
    if ring.rank() > 16 && max_summands > 2 {
        return Err(Error::SearchTooLarge {
            labels: ring.rank(),
            max_summands,
        });
    }
    let mut found: BTreeMap<(Vec<Label>, Vec<Label>), GybeCertificate> = BTreeMap::new();
    for summands in subsets_up_to(ring.rank(), max_summands) {
        let x = ObjectExpr::new(ring, summands.clone()).expect("distinct in-range labels");
        let mut proposals = BTreeSet::new();
        for i in ring.labels() {
            let t = ring.fuse_multiset(x.summands(), i);
            if t.len() >= 2 && t.contains(&i) && t.windows(2).all(|w| w[0] != w[1]) {
                proposals.insert(t);
            }
        }
        for s in proposals {
            if let Ok(cert) = is_gybe_object(ring, &x, &s) {
                found.insert((summands.clone(), s), cert);
            }
        }
    }
    Ok(found.into_values().collect())
}

/// Nonempty subsets of `0..n` with at most `k` elements, each sorted.
fn subsets_up_to(n: usize, k: usize) -> Vec<Vec<Label>> {
    fn extend(start: usize, n: usize, k: usize, cur: &mut Vec<Label>, out: &mut Vec<Vec<Label>>) {
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(Label(i));
            out.push(cur.clone());
            extend(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    extend(0, n, k, &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// `dim X = Σ d_a` over summands must equal `|S|`.
pub fn check_dim_integrality(cert: &GybeCertificate, dims: &FpDims) -> bool {
    let parts: Vec<&FpDim> = cert
        .object
        .summands()
        .iter()
        .map(|&a| dims.get(a))
        .collect();
    if parts.iter().all(|d| d.exact.is_some()) {
        return parts.iter().map(|d| d.exact.unwrap()).sum::<u64>() == cert.d() as u64;
    }
    let total: f64 = parts.iter().map(|d| d.value).sum();
    (total - cert.d() as f64).abs() < 1e-9
}

/// `l = Σ_Y dim Hom(Y, X ⊗ X)`, counting every ordered pair of summands.
pub fn eigenvalue_bound_l(ring: &FusionRing, x: &ObjectExpr) -> usize {
    let s = x.summands();
    s.iter()
        .flat_map(|&a| s.iter().map(move |&b| ring.fuse(a, b).len()))
        .sum()
}

/// Number of distinct simple channels in `X ⊗ X`.
pub fn distinct_channels(ring: &FusionRing, x: &ObjectExpr) -> usize {
    let s = x.summands();
    let set: BTreeSet<Label> = s
        .iter()
        .flat_map(|&a| s.iter().flat_map(move |&b| ring.fuse(a, b).iter().copied()))
        .collect();
    set.len()
}
