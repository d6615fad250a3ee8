//! Fusion rings and braided category data (R-symbols and F-matrices).
//!
//! Only multiplicity-free rings are supported: every `N_{ab}^c` is 0 or 1.
//! F-matrix channel orderings are stored exactly as given and are never
//! re-sorted, since the order of the diagonal braiding entries depends on them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{DataError, Error, Result};
use crate::linalg::ExactMatrix;
use crate::scalar::{CycloScalar, Term};

/// Index of a simple object in its ring's label list.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(pub usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    names: Vec<String>,
    unit: Label,
    dual: Vec<Label>,
    /// `table[a][b]` lists the channels of `a ⊗ b` in label order.
    table: Vec<Vec<Vec<Label>>>,
}

impl FusionRing {
    /// Build and validate a ring from named data. `dual` may omit labels;
    /// missing duals are inferred from the fusion table.
    pub fn from_names(
        names: &[String],
        unit: &str,
        dual: &BTreeMap<String, String>,
        fusion: &[(String, String, Vec<String>)],
    ) -> Result<Self, DataError> {
        let mut seen = BTreeSet::new();
        for n in names {
            if !seen.insert(n.as_str()) {
                return Err(DataError::DuplicateLabel(n.clone()));
            }
        }
        if names.is_empty() {
            return Err(DataError::Malformed {
                location: "labels".into(),
                reason: "label list is empty".into(),
            });
        }
        let lookup = |name: &str, location: String| -> Result<Label, DataError> {
            names
                .iter()
                .position(|n| n == name)
                .map(Label)
                .ok_or_else(|| DataError::UnknownLabel {
                    label: name.to_string(),
                    location,
                })
        };
        let unit = lookup(unit, "unit".into())?;
        let n = names.len();
        let mut table: Vec<Vec<Option<Vec<Label>>>> = vec![vec![None; n]; n];
        for (idx, (a, b, cs)) in fusion.iter().enumerate() {
            let la = lookup(a, format!("fusion[{idx}].a"))?;
            let lb = lookup(b, format!("fusion[{idx}].b"))?;
            let mut channels = Vec::with_capacity(cs.len());
            for (k, c) in cs.iter().enumerate() {
                let lc = lookup(c, format!("fusion[{idx}].c[{k}]"))?;
                if channels.contains(&lc) {
                    return Err(DataError::FusionMultiplicity {
                        a: a.clone(),
                        b: b.clone(),
                        c: c.clone(),
                    });
                }
                channels.push(lc);
            }
            if channels.is_empty() {
                return Err(DataError::Malformed {
                    location: format!("fusion[{idx}].c"),
                    reason: "a product of simples cannot be zero".into(),
                });
            }
            channels.sort();
            for (x, y) in [(la, lb), (lb, la)] {
                match &table[x.0][y.0] {
                    Some(existing) if *existing != channels => {
                        return Err(DataError::NonCommutative {
                            a: names[x.0].clone(),
                            b: names[y.0].clone(),
                        })
                    }
                    _ => table[x.0][y.0] = Some(channels.clone()),
                }
            }
        }
        let mut full = vec![vec![Vec::new(); n]; n];
        for a in 0..n {
            for b in 0..n {
                full[a][b] = table[a][b]
                    .take()
                    .ok_or_else(|| DataError::IncompleteFusion {
                        a: names[a].clone(),
                        b: names[b].clone(),
                    })?;
            }
        }
        let mut duals = Vec::with_capacity(n);
        for (a, name) in names.iter().enumerate() {
            let d = match dual.get(name) {
                Some(dn) => lookup(dn, format!("dual.{name}"))?,
                None => (0..n)
                    .map(Label)
                    .find(|&b| full[a][b.0].contains(&unit))
                    .ok_or_else(|| DataError::BadDual {
                        label: name.clone(),
                        reason: "no label fuses with it to the unit".into(),
                    })?,
            };
            duals.push(d);
        }
        for key in dual.keys() {
            lookup(key, "dual".into())?;
        }
        let ring = FusionRing {
            names: names.to_vec(),
            unit,
            dual: duals,
            table: full,
        };
        ring.validate()?;
        Ok(ring)
    }

    /// Check unit law, commutativity, duality and associativity over all triples.
    pub fn validate(&self) -> Result<(), DataError> {
        let n = self.rank();
        for a in self.labels() {
            if self.fuse(self.unit, a) != [a] || self.fuse(a, self.unit) != [a] {
                return Err(DataError::UnitLaw {
                    unit: self.name(self.unit).into(),
                    a: self.name(a).into(),
                });
            }
            for b in self.labels() {
                if self.fuse(a, b) != self.fuse(b, a) {
                    return Err(DataError::NonCommutative {
                        a: self.name(a).into(),
                        b: self.name(b).into(),
                    });
                }
            }
            let d = self.dual(a);
            if self.dual(d) != a {
                return Err(DataError::BadDual {
                    label: self.name(a).into(),
                    reason: format!("dual of its dual '{}' is not itself", self.name(d)),
                });
            }
            if !self.fuse(a, d).contains(&self.unit) {
                return Err(DataError::BadDual {
                    label: self.name(a).into(),
                    reason: format!(
                        "unit does not appear in {} x {}",
                        self.name(a),
                        self.name(d)
                    ),
                });
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let (a, b, c) = (Label(a), Label(b), Label(c));
                    let left = self.fuse_multiset(self.fuse(a, b), c);
                    let bc = self.fuse(b, c);
                    let mut right = Vec::new();
                    for &y in bc {
                        right.extend_from_slice(self.fuse(a, y));
                    }
                    right.sort();
                    if left != right {
                        return Err(DataError::NonAssociative {
                            a: self.name(a).into(),
                            b: self.name(b).into(),
                            c: self.name(c).into(),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.names.len()
    }

    pub fn labels(&self) -> impl Iterator<Item = Label> + '_ {
        (0..self.names.len()).map(Label)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, l: Label) -> &str {
        &self.names[l.0]
    }

    pub fn label(&self, name: &str) -> Option<Label> {
        self.names.iter().position(|n| n == name).map(Label)
    }

    pub fn require_label(&self, name: &str) -> Result<Label, DataError> {
        self.label(name).ok_or_else(|| DataError::UnknownLabel {
            label: name.into(),
            location: "argument".into(),
        })
    }

    pub fn unit(&self) -> Label {
        self.unit
    }

    pub fn dual(&self, a: Label) -> Label {
        self.dual[a.0]
    }

    /// Channels of `a ⊗ b`, in label order.
    pub fn fuse(&self, a: Label, b: Label) -> &[Label] {
        &self.table[a.0][b.0]
    }

    pub fn coefficient(&self, a: Label, b: Label, c: Label) -> u32 {
        self.fuse(a, b).contains(&c) as u32
    }

    /// `(⊕ xs) ⊗ b` as a sorted multiset.
    pub fn fuse_multiset(&self, xs: &[Label], b: Label) -> Vec<Label> {
        let mut out: Vec<Label> = xs
            .iter()
            .flat_map(|&x| self.fuse(x, b).iter().copied())
            .collect();
        out.sort();
        out
    }

    /// Matrix `N_a` with `N_a[b][c] = N_{ab}^c`.
    pub fn fusion_matrix(&self, a: Label) -> Vec<Vec<u32>> {
        self.labels()
            .map(|b| self.labels().map(|c| self.coefficient(a, b, c)).collect())
            .collect()
    }

    pub fn is_invertible(&self, a: Label) -> bool {
        self.fuse(a, self.dual(a)) == [self.unit]
    }

    /// Rename and reorder labels. `mapping` lists `(old, new)` name pairs in
    /// the desired new order and must cover every label exactly once.
    pub fn relabeled(&self, mapping: &[(&str, &str)]) -> Result<FusionRing, DataError> {
        if mapping.len() != self.rank() {
            return Err(DataError::Malformed {
                location: "relabel".into(),
                reason: format!("{} names given for {} labels", mapping.len(), self.rank()),
            });
        }
        let rename = |old: Label| -> String {
            mapping
                .iter()
                .find(|(o, _)| *o == self.name(old))
                .map(|(_, n)| n.to_string())
                .unwrap_or_default()
        };
        let old_labels = mapping
            .iter()
            .map(|(o, _)| self.require_label(o))
            .collect::<Result<Vec<_>, _>>()?;
        let names: Vec<String> = mapping.iter().map(|(_, n)| n.to_string()).collect();
        let dual = old_labels
            .iter()
            .map(|&l| (rename(l), rename(self.dual(l))))
            .collect();
        let mut fusion = Vec::new();
        for &a in &old_labels {
            for &b in &old_labels {
                fusion.push((
                    rename(a),
                    rename(b),
                    self.fuse(a, b).iter().map(|&c| rename(c)).collect(),
                ));
            }
        }
        FusionRing::from_names(&names, &rename(self.unit), &dual, &fusion)
    }

    /// Same fusion rules up to label order (labels matched by name).
    pub fn same_rules_as(&self, other: &FusionRing) -> bool {
        let names: BTreeSet<&String> = self.names.iter().collect();
        if names != other.names.iter().collect() || self.name(self.unit) != other.name(other.unit) {
            return false;
        }
        self.labels().all(|a| {
            let oa = other.label(self.name(a)).expect("same label set");
            self.name(self.dual(a)) == other.name(other.dual(oa))
                && self.labels().all(|b| {
                    let ob = other.label(self.name(b)).expect("same label set");
                    let mine: BTreeSet<&str> =
                        self.fuse(a, b).iter().map(|&c| self.name(c)).collect();
                    let theirs: BTreeSet<&str> =
                        other.fuse(oa, ob).iter().map(|&c| other.name(c)).collect();
                    mine == theirs
                })
        })
    }

    /// Category file holding only this ring (no braiding data).
    pub fn to_file(&self, name: &str, cyclotomic_order: u32) -> CategoryFile {
        CategoryFile {
            name: name.into(),
            cyclotomic_order,
            labels: self.names.clone(),
            unit: self.name(self.unit).into(),
            dual: self
                .labels()
                .map(|l| {
                    (
                        self.name(l).to_string(),
                        self.name(self.dual(l)).to_string(),
                    )
                })
                .collect(),
            unitary: None,
            kauffman_variable: None,
            fusion: self.fusion_entries(),
            r: Vec::new(),
            f: Vec::new(),
        }
    }

    fn fusion_entries(&self) -> Vec<FusionEntry> {
        let mut out = Vec::new();
        for a in self.labels() {
            for b in self.labels().filter(|b| *b >= a) {
                out.push(FusionEntry {
                    a: self.name(a).into(),
                    b: self.name(b).into(),
                    c: self
                        .fuse(a, b)
                        .iter()
                        .map(|&c| self.name(c).to_string())
                        .collect(),
                });
            }
        }
        out
    }
}

/// A multiplicity-free direct sum of simple objects.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObjectExpr {
    summands: Vec<Label>,
}

impl ObjectExpr {
    pub fn new(ring: &FusionRing, mut summands: Vec<Label>) -> Result<Self, DataError> {
        if summands.is_empty() {
            return Err(DataError::Malformed {
                location: "object".into(),
                reason: "an object needs at least one summand".into(),
            });
        }
        if let Some(bad) = summands.iter().find(|l| l.0 >= ring.rank()) {
            return Err(DataError::UnknownLabel {
                label: format!("#{}", bad.0),
                location: "object".into(),
            });
        }
        summands.sort();
        let before = summands.len();
        summands.dedup();
        if summands.len() != before {
            return Err(DataError::Malformed {
                location: "object".into(),
                reason: "repeated summand (only multiplicity-free objects are supported)".into(),
            });
        }
        Ok(ObjectExpr { summands })
    }

    pub fn simple(label: Label) -> Self {
        ObjectExpr {
            summands: vec![label],
        }
    }

    /// Parse a comma-separated list of label names.
    pub fn parse(ring: &FusionRing, text: &str) -> Result<Self, DataError> {
        let labels = parse_label_list(ring, text)?;
        Self::new(ring, labels)
    }

    pub fn summands(&self) -> &[Label] {
        &self.summands
    }

    pub fn is_simple(&self) -> bool {
        self.summands.len() == 1
    }

    pub fn names(&self, ring: &FusionRing) -> Vec<String> {
        self.summands
            .iter()
            .map(|&l| ring.name(l).to_string())
            .collect()
    }
}

/// Parse `"a,b,c"` into labels, keeping the given order.
pub fn parse_label_list(ring: &FusionRing, text: &str) -> Result<Vec<Label>, DataError> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| ring.require_label(s))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FMatrix {
    /// Channels `f ∈ b⊗c` with `d ∈ a⊗f`; the braiding of `b` and `c` is diagonal here.
    pub row_channels: Vec<Label>,
    /// Channels `e ∈ a⊗b` with `d ∈ e⊗c`.
    pub col_channels: Vec<Label>,
    pub matrix: ExactMatrix,
}

pub type RKey = (Label, Label, Label);
pub type FKey = (Label, Label, Label, Label);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CategoryData {
    name: String,
    ring: FusionRing,
    field_order: u32,
    unitary: bool,
    kauffman_variable: Option<CycloScalar>,
    r_symbols: BTreeMap<RKey, CycloScalar>,
    f_matrices: BTreeMap<FKey, FMatrix>,
}

impl CategoryData {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn ring(&self) -> &FusionRing {
        &self.ring
    }

    pub fn field_order(&self) -> u32 {
        self.field_order
    }

    pub fn is_unitary(&self) -> bool {
        self.unitary
    }

    pub fn kauffman_variable(&self) -> Option<&CycloScalar> {
        self.kauffman_variable.as_ref()
    }

    pub fn r_symbols(&self) -> &BTreeMap<RKey, CycloScalar> {
        &self.r_symbols
    }

    pub fn f_matrices(&self) -> &BTreeMap<FKey, FMatrix> {
        &self.f_matrices
    }

    /// `R^{ab}_c`.
    pub fn r_symbol(&self, a: Label, b: Label, c: Label) -> Result<&CycloScalar> {
        self.r_symbols.get(&(a, b, c)).ok_or_else(|| {
            Error::MissingSymbol(format!(
                "R^{{{}{}}}_{{{}}}",
                self.ring.name(a),
                self.ring.name(b),
                self.ring.name(c)
            ))
        })
    }

    /// `F^{abc}_d`.
    pub fn f_matrix(&self, a: Label, b: Label, c: Label, d: Label) -> Result<&FMatrix> {
        self.f_matrices.get(&(a, b, c, d)).ok_or_else(|| {
            Error::MissingSymbol(format!(
                "F^{{{}{}{}}}_{{{}}}",
                self.ring.name(a),
                self.ring.name(b),
                self.ring.name(c),
                self.ring.name(d)
            ))
        })
    }

    /// Validate and assemble category data from a parsed file.
    pub fn from_file(file: &CategoryFile) -> Result<Self> {
        let order = file.cyclotomic_order;
        if order == 0 || order > crate::scalar::ORDER_CAP {
            return Err(DataError::Malformed {
                location: "cyclotomic_order".into(),
                reason: format!("must lie in 1..={}", crate::scalar::ORDER_CAP),
            }
            .into());
        }
        let fusion: Vec<_> = file
            .fusion
            .iter()
            .map(|e| (e.a.clone(), e.b.clone(), e.c.clone()))
            .collect();
        let ring = FusionRing::from_names(&file.labels, &file.unit, &file.dual, &fusion)?;
        let unitary = file.unitary.unwrap_or(false);
        let lookup = |name: &str, location: String| -> Result<Label> {
            ring.label(name).ok_or_else(|| {
                DataError::UnknownLabel {
                    label: name.into(),
                    location,
                }
                .into()
            })
        };
        let scalar = |terms: &[Term], location: String| -> Result<CycloScalar> {
            CycloScalar::from_terms(terms, order).map_err(|e| {
                DataError::Malformed {
                    location,
                    reason: e.to_string(),
                }
                .into()
            })
        };

        let kauffman_variable = file
            .kauffman_variable
            .as_ref()
            .map(|t| scalar(t, "kauffman_variable".into()))
            .transpose()?;

        let mut r_symbols = BTreeMap::new();
        for (idx, e) in file.r.iter().enumerate() {
            let a = lookup(&e.a, format!("R[{idx}].a"))?;
            let b = lookup(&e.b, format!("R[{idx}].b"))?;
            let c = lookup(&e.c, format!("R[{idx}].c"))?;
            let value = scalar(&e.value, format!("R[{idx}].value"))?;
            let invalid = |reason: &str| DataError::InvalidR {
                a: e.a.clone(),
                b: e.b.clone(),
                c: e.c.clone(),
                reason: reason.into(),
            };
            if !ring.fuse(a, b).contains(&c) {
                return Err(invalid("channel is not in the fusion product").into());
            }
            if value.is_zero() {
                return Err(invalid("braiding eigenvalue is zero").into());
            }
            if unitary && !(&value * &value.conj()).is_one() {
                return Err(invalid("not unimodular in a unitary category").into());
            }
            if r_symbols.insert((a, b, c), value).is_some() {
                return Err(invalid("listed twice").into());
            }
        }

        let mut f_matrices = BTreeMap::new();
        for (idx, e) in file.f.iter().enumerate() {
            let a = lookup(&e.a, format!("F[{idx}].a"))?;
            let b = lookup(&e.b, format!("F[{idx}].b"))?;
            let c = lookup(&e.c, format!("F[{idx}].c"))?;
            let d = lookup(&e.d, format!("F[{idx}].d"))?;
            let invalid = |reason: String| -> Error {
                DataError::InvalidF {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    c: e.c.clone(),
                    d: e.d.clone(),
                    reason,
                }
                .into()
            };
            let rows = e
                .row_channels
                .iter()
                .enumerate()
                .map(|(k, n)| lookup(n, format!("F[{idx}].row_channels[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let cols = e
                .col_channels
                .iter()
                .enumerate()
                .map(|(k, n)| lookup(n, format!("F[{idx}].col_channels[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let expected_rows: BTreeSet<Label> = ring
                .fuse(b, c)
                .iter()
                .copied()
                .filter(|&f| ring.fuse(a, f).contains(&d))
                .collect();
            let expected_cols: BTreeSet<Label> = ring
                .fuse(a, b)
                .iter()
                .copied()
                .filter(|&x| ring.fuse(x, c).contains(&d))
                .collect();
            let names =
                |s: &BTreeSet<Label>| -> Vec<&str> { s.iter().map(|&l| ring.name(l)).collect() };
            let row_set: BTreeSet<Label> = rows.iter().copied().collect();
            if row_set.len() != rows.len() || row_set != expected_rows {
                return Err(invalid(format!(
                    "row channels {:?} do not match the admissible channels {:?}",
                    e.row_channels,
                    names(&expected_rows)
                )));
            }
            let col_set: BTreeSet<Label> = cols.iter().copied().collect();
            if col_set.len() != cols.len() || col_set != expected_cols {
                return Err(invalid(format!(
                    "column channels {:?} do not match the admissible channels {:?}",
                    e.col_channels,
                    names(&expected_cols)
                )));
            }
            let n = rows.len();
            if cols.len() != n || e.entries.len() != n * n || n == 0 {
                return Err(invalid(format!(
                    "{} entries for {} row and {} column channels",
                    e.entries.len(),
                    rows.len(),
                    cols.len()
                )));
            }
            let entries = e
                .entries
                .iter()
                .enumerate()
                .map(|(k, t)| scalar(t, format!("F[{idx}].entries[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            let matrix = ExactMatrix::new(n, n, entries)?.promote(order)?;
            if matrix.is_singular()? {
                return Err(DataError::SingularF {
                    a: e.a.clone(),
                    b: e.b.clone(),
                    c: e.c.clone(),
                    d: e.d.clone(),
                }
                .into());
            }
            if unitary && !matrix.is_unitary()? {
                return Err(invalid("not unitary in a unitary category".into()));
            }
            let fm = FMatrix {
                row_channels: rows,
                col_channels: cols,
                matrix,
            };
            if f_matrices.insert((a, b, c, d), fm).is_some() {
                return Err(invalid("listed twice".into()));
            }
        }

        Ok(CategoryData {
            name: file.name.clone(),
            ring,
            field_order: order,
            unitary,
            kauffman_variable,
            r_symbols,
            f_matrices,
        })
    }

    pub fn to_file(&self) -> Result<CategoryFile> {
        let ring = &self.ring;
        let order = self.field_order;
        let n = |l: Label| ring.name(l).to_string();
        let mut file = ring.to_file(&self.name, order);
        file.unitary = Some(self.unitary);
        file.kauffman_variable = self
            .kauffman_variable
            .as_ref()
            .map(|k| k.to_terms(order))
            .transpose()?;
        file.r = self
            .r_symbols
            .iter()
            .map(|(&(a, b, c), v)| {
                Ok(REntry {
                    a: n(a),
                    b: n(b),
                    c: n(c),
                    value: v.to_terms(order)?,
                })
            })
            .collect::<Result<_>>()?;
        file.f = self
            .f_matrices
            .iter()
            .map(|(&(a, b, c, d), fm)| {
                Ok(FEntry {
                    a: n(a),
                    b: n(b),
                    c: n(c),
                    d: n(d),
                    row_channels: fm.row_channels.iter().map(|&l| n(l)).collect(),
                    col_channels: fm.col_channels.iter().map(|&l| n(l)).collect(),
                    entries: fm
                        .matrix
                        .entries()
                        .iter()
                        .map(|e| e.to_terms(order))
                        .collect::<Result<_>>()?,
                })
            })
            .collect::<Result<_>>()?;
        Ok(file)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(&self.to_file()?)?)
    }
}

impl fmt::Display for CategoryData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} ({} labels, {} R-symbols, {} F-matrices)",
            self.name,
            self.ring.rank(),
            self.r_symbols.len(),
            self.f_matrices.len()
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FusionEntry {
    pub a: String,
    pub b: String,
    pub c: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct REntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub value: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FEntry {
    pub a: String,
    pub b: String,
    pub c: String,
    pub d: String,
    pub row_channels: Vec<String>,
    pub col_channels: Vec<String>,
    pub entries: Vec<Vec<Term>>,
}

/// On-disk JSON layout of a category.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryFile {
    pub name: String,
    pub cyclotomic_order: u32,
    pub labels: Vec<String>,
    pub unit: String,
    #[serde(default)]
    pub dual: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub unitary: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kauffman_variable: Option<Vec<Term>>,
    pub fusion: Vec<FusionEntry>,
    #[serde(default, rename = "R")]
    pub r: Vec<REntry>,
    #[serde(default, rename = "F")]
    pub f: Vec<FEntry>,
}

pub fn parse_category_str(text: &str) -> Result<CategoryData> {
    let file: CategoryFile = serde_json::from_str(text)?;
    CategoryData::from_file(&file)
}

pub fn parse_category(path: impl AsRef<Path>) -> Result<CategoryData> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_category_str(&text)
}

pub const ISING_JSON: &str = include_str!("../data/ising.json");
pub const JK6_JSON: &str = include_str!("../data/jk6.json");

/// Built-in category data: `"ising"` or `"jk6"`.
pub fn builtin_category(name: &str) -> Result<CategoryData> {
    match name {
        "ising" => parse_category_str(ISING_JSON),
        "jk6" => parse_category_str(JK6_JSON),
        other => Err(Error::UnknownBuiltin(other.into())),
    }
}

/// Label names used by [`gen_so_odd_level2`].
pub mod so_names {
    pub const UNIT: &str = "1";
    pub const Z: &str = "Z";
    pub const EPS: &str = "Xeps";
    pub const EPS_PRIME: &str = "Xeps'";

    pub fn x(i: usize) -> String {
        format!("X{i}")
    }
}

/// Fusion ring of `SO(2r+1)_2`: labels `1, Z, X1..Xr, Xeps, Xeps'`.
pub fn gen_so_odd_level2(r: usize) -> Result<FusionRing> {
    use so_names::*;
    if r == 0 {
        return Err(Error::InvalidArgument("SO(2r+1)_2 needs r >= 1".into()));
    }
    let mut names = vec![UNIT.to_string(), Z.to_string()];
    names.extend((1..=r).map(x));
    names.push(EPS.into());
    names.push(EPS_PRIME.into());

    let xs: Vec<String> = (1..=r).map(x).collect();
    let s = |v: &str| v.to_string();
    let mut fusion: Vec<(String, String, Vec<String>)> = Vec::new();
    let mut rule = |a: &str, b: &str, c: Vec<String>| fusion.push((s(a), s(b), c));
    for n in &names {
        rule(UNIT, n, vec![n.clone()]);
    }
    let one_plus_xs = || {
        std::iter::once(s(UNIT))
            .chain(xs.iter().cloned())
            .collect::<Vec<_>>()
    };
    rule(EPS, EPS, one_plus_xs());
    rule(EPS_PRIME, EPS_PRIME, one_plus_xs());
    rule(
        EPS,
        EPS_PRIME,
        std::iter::once(s(Z)).chain(xs.iter().cloned()).collect(),
    );
    for xi in &xs {
        rule(EPS, xi, vec![s(EPS), s(EPS_PRIME)]);
        rule(EPS_PRIME, xi, vec![s(EPS), s(EPS_PRIME)]);
        rule(Z, xi, vec![xi.clone()]);
    }
    rule(Z, EPS, vec![s(EPS_PRIME)]);
    rule(Z, EPS_PRIME, vec![s(EPS)]);
    rule(Z, Z, vec![s(UNIT)]);
    for i in 1..=r {
        rule(
            &x(i),
            &x(i),
            vec![s(UNIT), s(Z), x((2 * i).min(2 * r + 1 - 2 * i))],
        );
        for j in i + 1..=r {
            rule(
                &x(i),
                &x(j),
                vec![x(j - i), x((i + j).min(2 * r + 1 - i - j))],
            );
        }
    }
    let dual = names.iter().map(|n| (n.clone(), n.clone())).collect();
    Ok(FusionRing::from_names(&names, UNIT, &dual, &fusion)?)
}

/// Rename the `r = 1` ring to the labels `0..4` of the Jones-Kauffman
/// theory at a 6th root of unity.
pub fn relabel_so3_as_jk(ring: &FusionRing) -> Result<FusionRing> {
    use so_names::*;
    Ok(ring.relabeled(&[
        (UNIT, "0"),
        (EPS, "1"),
        ("X1", "2"),
        (EPS_PRIME, "3"),
        (Z, "4"),
    ])?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(ring: &FusionRing, names: &[&str]) -> Vec<Label> {
        let mut v: Vec<Label> = names.iter().map(|n| ring.label(n).unwrap()).collect();
        v.sort();
        v
    }

    #[test]
    fn jk6_builtin_shape() {
        let cat = builtin_category("jk6").unwrap();
        let ring = cat.ring();
        assert_eq!(ring.names(), ["0", "1", "2", "3", "4"]);
        let l = |n| ring.label(n).unwrap();
        let f = cat.f_matrix(l("1"), l("2"), l("2"), l("1")).unwrap();
        assert_eq!(f.row_channels, vec![l("0"), l("2")]);
        assert_eq!(f.col_channels, vec![l("1"), l("3")]);
        let f = cat.f_matrix(l("3"), l("2"), l("2"), l("1")).unwrap();
        assert_eq!(f.row_channels, vec![l("4"), l("2")]);
        let a = CycloScalar::i() * CycloScalar::zeta_power(24, -1).unwrap();
        assert_eq!(cat.kauffman_variable(), Some(&a));
        assert_eq!(
            cat.r_symbol(l("2"), l("2"), l("0")).unwrap(),
            &CycloScalar::root_of_unity(1, 3).unwrap()
        );
        assert!(cat.is_unitary());
    }

    #[test]
    fn ising_builtin_shape() {
        let cat = builtin_category("ising").unwrap();
        let ring = cat.ring();
        let psi = ring.label("psi").unwrap();
        let sigma = ring.label("sigma").unwrap();
        assert_eq!(ring.fuse(psi, psi), [ring.unit()]);
        assert!(ring.is_invertible(psi));
        assert!(!ring.is_invertible(sigma));
        assert_eq!(
            cat.r_symbol(psi, psi, ring.unit()).unwrap(),
            &CycloScalar::from_integer(-1)
        );
        assert!(cat.f_matrices().is_empty());
        assert!(matches!(
            builtin_category("fibonacci"),
            Err(Error::UnknownBuiltin(_))
        ));
    }

    #[test]
    fn so_rules() {
        let ring = gen_so_odd_level2(1).unwrap();
        assert_eq!(ring.rank(), 5);
        let l = |n: &str| ring.label(n).unwrap();
        assert_eq!(
            ring.fuse(l("X1"), l("X1")),
            labels(&ring, &["1", "Z", "X1"])
        );

        let ring = gen_so_odd_level2(2).unwrap();
        let l = |n: &str| ring.label(n).unwrap();
        assert_eq!(ring.fuse(l("X1"), l("X2")), labels(&ring, &["X1", "X2"]));
        assert!(matches!(
            gen_so_odd_level2(0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn so_rings_validate_and_obey_z_rules() {
        for r in 1..=8 {
            let ring = gen_so_odd_level2(r).unwrap();
            assert_eq!(ring.rank(), r + 4);
            ring.validate().unwrap();
            let z = ring.label(so_names::Z).unwrap();
            assert_eq!(ring.fuse(z, z), [ring.unit()]);
            for i in 1..=r {
                let xi = ring.label(&so_names::x(i)).unwrap();
                assert_eq!(ring.fuse(z, xi), [xi]);
            }
        }
    }

    #[test]
    fn relabeled_so3_is_the_jk6_ring() {
        let jk = relabel_so3_as_jk(&gen_so_odd_level2(1).unwrap()).unwrap();
        let cat = builtin_category("jk6").unwrap();
        assert!(jk.same_rules_as(cat.ring()));
        assert_eq!(&jk, cat.ring());
        assert!(!gen_so_odd_level2(2).unwrap().same_rules_as(cat.ring()));
    }

    fn jk6_file() -> CategoryFile {
        serde_json::from_str(JK6_JSON).unwrap()
    }

    #[test]
    fn incomplete_fusion_table() {
        let mut file = jk6_file();
        file.fusion.retain(|e| !(e.a == "2" && e.b == "2"));
        let err = CategoryData::from_file(&file).unwrap_err();
        assert!(
            err.to_string().starts_with("incomplete fusion table"),
            "{err}"
        );
    }

    #[test]
    fn singular_f_matrix() {
        let mut file = jk6_file();
        let zero_entries = vec![Vec::new(); 4];
        file.f[0].entries = zero_entries;
        let err = CategoryData::from_file(&file).unwrap_err();
        assert!(
            matches!(err, Error::Data(ref e) if matches!(**e, DataError::SingularF { .. })),
            "{err}"
        );
        assert!(err.to_string().starts_with("singular F-matrix"));
    }

    #[test]
    fn unknown_label_and_multiplicity() {
        let mut file = jk6_file();
        file.fusion[3].c.push("7".into());
        let err = CategoryData::from_file(&file).unwrap_err();
        assert!(matches!(
            err,
            Error::Data(ref e) if matches!(**e, DataError::UnknownLabel { ref location, .. } if location == "fusion[3].c[1]")
        ));

        let mut file = jk6_file();
        let idx = file
            .fusion
            .iter()
            .position(|e| e.a == "2" && e.b == "2")
            .unwrap();
        file.fusion[idx].c.push("2".into());
        assert!(matches!(
            CategoryData::from_file(&file),
            Err(Error::Data(e)) if matches!(*e, DataError::FusionMultiplicity { .. })
        ));
    }

    #[test]
    fn non_associative_ring_is_rejected() {
        // a x a = 1 + a with a second self-dual label b that also fuses to 1 + a
        let names: Vec<String> = ["1", "a", "b"].iter().map(|s| s.to_string()).collect();
        let t = |a: &str, b: &str, c: &[&str]| {
            (
                a.to_string(),
                b.to_string(),
                c.iter().map(|s| s.to_string()).collect(),
            )
        };
        let fusion = vec![
            t("1", "1", &["1"]),
            t("1", "a", &["a"]),
            t("1", "b", &["b"]),
            t("a", "a", &["1", "a"]),
            t("a", "b", &["b"]),
            t("b", "b", &["1"]),
        ];
        let err = FusionRing::from_names(&names, "1", &BTreeMap::new(), &fusion).unwrap_err();
        assert!(matches!(err, DataError::NonAssociative { .. }), "{err}");
    }

    #[test]
    fn channel_order_must_match_admissible_set() {
        let mut file = jk6_file();
        file.f[0].row_channels = vec!["0".into(), "4".into()];
        assert!(matches!(
            CategoryData::from_file(&file),
            Err(Error::Data(e)) if matches!(*e, DataError::InvalidF { .. })
        ));
        // a permuted but admissible order is accepted and preserved
        let mut file = jk6_file();
        file.f[0].row_channels.reverse();
        let cat = CategoryData::from_file(&file).unwrap();
        let (_, fm) = cat.f_matrices().iter().next().unwrap();
        assert_eq!(cat.ring().name(fm.row_channels[0]), "2");
    }

    #[test]
    fn r_symbol_outside_fusion_is_rejected() {
        let mut file = jk6_file();
        file.r[0].c = "1".into();
        assert!(matches!(
            CategoryData::from_file(&file),
            Err(Error::Data(e)) if matches!(*e, DataError::InvalidR { .. })
        ));
        let mut file = jk6_file();
        file.r[0].value = vec![Term {
            p: 2.into(),
            q: 1.into(),
            k: 0,
        }];
        assert!(CategoryData::from_file(&file).is_err());
    }

    #[test]
    fn builtins_round_trip() {
        for name in ["ising", "jk6"] {
            let cat = builtin_category(name).unwrap();
            let again = parse_category_str(&cat.to_json().unwrap()).unwrap();
            assert_eq!(cat, again);
        }
    }

    #[test]
    fn object_expressions() {
        let cat = builtin_category("ising").unwrap();
        let ring = cat.ring();
        let x = ObjectExpr::parse(ring, "psi, 1").unwrap();
        assert_eq!(x.names(ring), ["1", "psi"]);
        assert!(!x.is_simple());
        assert!(ObjectExpr::parse(ring, "").is_err());
        assert!(ObjectExpr::parse(ring, "psi,psi").is_err());
        assert!(ObjectExpr::parse(ring, "tau").is_err());
    }
}
