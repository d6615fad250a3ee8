//! Exact checks: the generalized Yang-Baxter equation, far commutativity,
//! braid relations, eigenvalue certification and finite group closure.

use std::collections::HashMap;

use num_bigint::BigInt;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{annihilation_check, lcm_order, sandwich, ExactMatrix};
use crate::rep::BraidRep;
use crate::scalar::CycloScalar;

/// Default number of distinct elements after which closure gives up.
pub const DEFAULT_CLOSURE_CAP: usize = 100_000;

/// Elements kept in a closure report.
pub const CLOSURE_SAMPLE: usize = 4;

/// First disagreement found by a failed check.
///
/// `indices` is `[relation, row, col]`; the relation index is 0 for the
/// gYBE, `j` for the far-commutation of `σ_1` with `σ_j`, and the position
/// in the relation list for braid representations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub relation: String,
    pub indices: [usize; 3],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub result: bool,
    pub dimensions: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl CheckReport {
    fn passing(check: &str, dimensions: usize) -> Self {
        CheckReport {
            check: check.into(),
            result: true,
            dimensions,
            witness: None,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serializes")
    }
}

fn first_difference(a: &ExactMatrix, b: &ExactMatrix) -> Option<(usize, usize)> {
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| a.get(i, j) != b.get(i, j))
}

fn compare(
    report: &mut CheckReport,
    relation: usize,
    name: String,
    lhs: &ExactMatrix,
    rhs: &ExactMatrix,
) {
    if let Some((row, col)) = first_difference(lhs, rhs) {
        report.result = false;
        report.witness = Some(Witness {
            relation: name,
            indices: [relation, row, col],
        });
    }
}

fn check_shape(r: &ExactMatrix, d: usize, m: usize) -> Result<()> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument("d and m must be positive".into()));
    }
    let expected = (d as u128).checked_pow(m as u32).unwrap_or(u128::MAX);
    if r.rows() as u128 != expected || r.cols() as u128 != expected {
        return Err(Error::Shape(format!(
            "R is {}x{} but d^m = {d}^{m} = {expected}",
            r.rows(),
            r.cols()
        )));
    }
    if r.is_singular()? {
        return Err(Error::NotInvertible("R-matrix"));
    }
    Ok(())
}

/// `(R⊗I)(I⊗R)(R⊗I) = (I⊗R)(R⊗I)(I⊗R)` on `V^{⊗(m+1)}`, with witness.
pub fn gybe_report(r: &ExactMatrix, d: usize, m: usize) -> Result<CheckReport> {
    check_shape(r, d, m)?;
    let left = sandwich(1, r, d)?;
    let right = sandwich(d, r, 1)?;
    let lhs = left.matmul(&right)?.matmul(&left)?;
    let rhs = right.matmul(&left)?.matmul(&right)?;
    let mut report = CheckReport::passing("gybe", lhs.rows());
    compare(&mut report, 0, "gybe".into(), &lhs, &rhs);
    Ok(report)
}

pub fn check_gybe(r: &ExactMatrix, d: usize, m: usize) -> Result<bool> {
    Ok(gybe_report(r, d, m)?.result)
}

/// `R_{σ_1} R_{σ_j} = R_{σ_j} R_{σ_1}` on `V^{⊗(j-1+m)}` for every `2 < j < m+1`.
pub fn far_commutativity_report(r: &ExactMatrix, d: usize, m: usize) -> Result<CheckReport> {
    check_shape(r, d, m)?;
    let mut report = CheckReport::passing("far_commutativity", 0);
    for j in 3..m + 1 {
        let shift = d.pow(j as u32 - 1);
        let s1 = sandwich(1, r, shift)?;
        let sj = sandwich(shift, r, 1)?;
        report.dimensions = s1.rows();
        let lhs = s1.matmul(&sj)?;
        let rhs = sj.matmul(&s1)?;
        compare(&mut report, j, format!("sigma_1 sigma_{j}"), &lhs, &rhs);
        if !report.result {
            break;
        }
    }
    Ok(report)
}

pub fn check_far_commutativity(r: &ExactMatrix, d: usize, m: usize) -> Result<bool> {
    Ok(far_commutativity_report(r, d, m)?.result)
}

/// Braid relations for adjacent generators and commutation for distant ones.
pub fn braid_relations_report(rep: &BraidRep) -> Result<CheckReport> {
    let g = &rep.generators;
    let mut report = CheckReport::passing("braid_relations", rep.dimension());
    let mut relation = 0;
    for k in 0..g.len() {
        for l in k + 1..g.len() {
            let (lhs, rhs, name) = if l == k + 1 {
                (
                    g[k].matmul(&g[l])?.matmul(&g[k])?,
                    g[l].matmul(&g[k])?.matmul(&g[l])?,
                    format!("sigma_{} sigma_{} sigma_{}", k + 1, l + 1, k + 1),
                )
            } else {
                (
                    g[k].matmul(&g[l])?,
                    g[l].matmul(&g[k])?,
                    format!("sigma_{} sigma_{}", k + 1, l + 1),
                )
            };
            compare(&mut report, relation, name, &lhs, &rhs);
            if !report.result {
                return Ok(report);
            }
            relation += 1;
        }
    }
    Ok(report)
}

pub fn check_braid_relations(rep: &BraidRep) -> Result<bool> {
    Ok(braid_relations_report(rep)?.result)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenCertification {
    /// Candidates `λ` with `R - λI` singular, in candidate order without repeats.
    pub certified: Vec<CycloScalar>,
    /// Whether `∏ (R - λI)` over the certified set vanishes.
    pub annihilates: bool,
}

impl EigenCertification {
    pub fn to_json(&self, order: Option<u32>) -> Result<Value> {
        let values = self
            .certified
            .iter()
            .map(|v| v.to_terms(lcm_order(order.unwrap_or(1), v.order())?))
            .collect::<Result<Vec<_>>>()?;
        let numeric: Vec<[f64; 2]> = self
            .certified
            .iter()
            .map(|v| {
                let z = v.to_complex();
                [z.re, z.im]
            })
            .collect();
        Ok(json!({
            "certified": values,
            "certified_decimal": numeric,
            "count": self.certified.len(),
            "annihilates": self.annihilates,
        }))
    }
}

pub fn certify_eigenvalues(
    r: &ExactMatrix,
    candidates: &[CycloScalar],
) -> Result<EigenCertification> {
    if !r.is_square() {
        return Err(Error::Shape("eigenvalues need a square matrix".into()));
    }
    let mut certified: Vec<CycloScalar> = Vec::new();
    for lambda in candidates {
        if certified.contains(lambda) {
            continue;
        }
        if r.shift(lambda)?.is_singular()? {
            certified.push(lambda.clone());
        }
    }
    let annihilates = !certified.is_empty() && annihilation_check(r, &certified)?;
    Ok(EigenCertification {
        certified,
        annihilates,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ClosureOrder {
    Finite(usize),
    ExceededCap,
}

#[derive(Clone, Debug)]
pub struct GroupClosureReport {
    pub generator_count: usize,
    pub dimensions: usize,
    pub projective: bool,
    pub order: ClosureOrder,
    pub cap: usize,
    /// Set when the final set was confirmed closed under every generator
    /// and contains every generator's inverse.
    pub closure_verified: bool,
    pub element_sample: Vec<ExactMatrix>,
}

impl GroupClosureReport {
    pub fn to_json(&self, order: Option<u32>) -> Result<Value> {
        let result = match self.order {
            ClosureOrder::Finite(n) => json!(n),
            ClosureOrder::ExceededCap => json!("exceeded_cap"),
        };
        let sample = self
            .element_sample
            .iter()
            .map(|m| m.to_file(order))
            .collect::<Result<Vec<_>>>()?;
        Ok(json!({
            "check": "group_closure",
            "result": result,
            "dimensions": self.dimensions,
            "generator_count": self.generator_count,
            "projective": self.projective,
            "cap": self.cap,
            "closure_verified": self.closure_verified,
            "element_sample": sample,
        }))
    }
}

type Key = Vec<(Vec<BigInt>, BigInt)>;

fn key(m: &ExactMatrix, order: u32) -> Result<Key> {
    m.entries()
        .iter()
        .map(|e| {
            let e = if e.order() == order {
                std::borrow::Cow::Borrowed(e)
            } else {
                std::borrow::Cow::Owned(e.promote(order)?)
            };
            let (num, den) = e.raw();
            Ok((num.to_vec(), den.clone()))
        })
        .collect()
}

fn normalize(m: ExactMatrix) -> Result<ExactMatrix> {
    let lead = m
        .entries()
        .iter()
        .find(|e| !e.is_zero())
        .cloned()
        .ok_or(Error::NotInvertible("closure element"))?;
    if lead.is_one() {
        Ok(m)
    } else {
        m.scale(&lead.inverse()?)
    }
}

/// Breadth-first closure of the group generated by `generators`.
///
/// Returns the report and, when finite, every element in discovery order.
pub fn closure_elements(
    generators: &[ExactMatrix],
    cap: usize,
    projective: bool,
) -> Result<(GroupClosureReport, Vec<ExactMatrix>)> {
    if generators.is_empty() {
        return Err(Error::Empty("group closure needs at least one generator"));
    }
    if cap == 0 {
        return Err(Error::InvalidArgument(
            "closure cap must be at least 1".into(),
        ));
    }
    let n = generators[0].rows();
    let mut order = 1;
    for (index, g) in generators.iter().enumerate() {
        if !g.is_square() || g.rows() != n {
            return Err(Error::Shape(
                "generators must be square of equal size".into(),
            ));
        }
        if g.is_singular()? {
            return Err(Error::NonInvertibleGenerator { index });
        }
        order = lcm_order(order, g.order())?;
    }
    let prepare = |m: ExactMatrix| -> Result<ExactMatrix> {
        let m = if projective { normalize(m)? } else { m };
        if m.order() == order {
            Ok(m)
        } else {
            m.promote(order)
        }
    };
    let gens = generators
        .iter()
        .map(|g| prepare(g.clone()))
        .collect::<Result<Vec<_>>>()?;

    let mut elements = vec![prepare(ExactMatrix::identity(n)?)?];
    let mut index: HashMap<Key, usize> = HashMap::new();
    index.insert(key(&elements[0], order)?, 0);
    let mut next = 0;
    let mut exceeded = false;
    while next < elements.len() && !exceeded {
        for g in &gens {
            let product = prepare(elements[next].matmul(g)?)?;
            let k = key(&product, order)?;
            if let std::collections::hash_map::Entry::Vacant(e) = index.entry(k) {
                if elements.len() == cap {
                    exceeded = true;
                    break;
                }
                e.insert(elements.len());
                elements.push(product);
            }
        }
        next += 1;
    }

    let mut report = GroupClosureReport {
        generator_count: generators.len(),
        dimensions: n,
        projective,
        order: ClosureOrder::ExceededCap,
        cap,
        closure_verified: false,
        element_sample: elements.iter().take(CLOSURE_SAMPLE).cloned().collect(),
    };
    if exceeded {
        return Ok((report, Vec::new()));
    }
    // every element was expanded against every generator; inverses close it up
    let mut verified = true;
    for g in generators {
        let inv = prepare(g.inverse()?)?;
        verified &= index.contains_key(&key(&inv, order)?);
    }
    report.order = ClosureOrder::Finite(elements.len());
    report.closure_verified = verified;
    Ok((report, elements))
}

pub fn group_closure(
    generators: &[ExactMatrix],
    cap: usize,
    projective: bool,
) -> Result<GroupClosureReport> {
    Ok(closure_elements(generators, cap, projective)?.0)
}
