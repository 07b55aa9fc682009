//! Exact rational row reduction over a basis of canonical keys.
//!
//! Pivot rule: rows are taken in input order; each is reduced at its leading
//! (lowest) column against existing pivots and, if something survives, it
//! becomes the pivot row of its leading column, scaled to 1. Every pivot row
//! remembers which combination of input relators produced it, so membership
//! answers come with certificates.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::diagram::Key;
use crate::lincomb::{format_q, parse_q, LinComb, TermDoc, Q};
use crate::relators::{regenerate, Relator};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("column {0} appears twice in the basis")]
    DuplicateColumn(Key),
    #[error("{context} mentions {key}, which is not in the basis")]
    UnknownKey { context: String, key: Key },
}

type Row = BTreeMap<usize, Q>;

fn axpy(target: &mut Row, factor: &Q, source: &Row) {
    for (&c, x) in source {
        let prod = factor * x;
        match target.entry(c) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(prod);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += prod;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }
}

/// Rows of sparse rational vectors over an indexed key basis.
#[derive(Debug, Clone, Default)]
pub struct SparseRationalMatrix {
    columns: Vec<Key>,
    index: HashMap<Key, usize>,
    rows: Vec<Row>,
}

impl SparseRationalMatrix {
    pub fn new(columns: Vec<Key>) -> Result<Self, LinalgError> {
        let mut index = HashMap::with_capacity(columns.len());
        for (i, k) in columns.iter().enumerate() {
            if index.insert(k.clone(), i).is_some() {
                return Err(LinalgError::DuplicateColumn(k.clone()));
            }
        }
        Ok(SparseRationalMatrix {
            columns,
            index,
            rows: Vec::new(),
        })
    }

    pub fn columns(&self) -> &[Key] {
        &self.columns
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn num_cols(&self) -> usize {
        self.columns.len()
    }

    fn to_row(&self, v: &LinComb, context: &str) -> Result<Row, LinalgError> {
        v.iter()
            .map(|(k, c)| {
                self.index
                    .get(k)
                    .map(|&i| (i, c.clone()))
                    .ok_or_else(|| LinalgError::UnknownKey {
                        context: context.to_string(),
                        key: k.clone(),
                    })
            })
            .collect()
    }

    fn to_lincomb(&self, row: &Row) -> LinComb {
        row.iter().map(|(&i, c)| (self.columns[i].clone(), c.clone())).collect()
    }

    pub fn push_row(&mut self, v: &LinComb) -> Result<(), LinalgError> {
        let row = self.to_row(v, "row")?;
        self.rows.push(row);
        Ok(())
    }

    pub fn from_rows(columns: Vec<Key>, rows: &[LinComb]) -> Result<Self, LinalgError> {
        let mut m = SparseRationalMatrix::new(columns)?;
        for r in rows {
            m.push_row(r)?;
        }
        Ok(m)
    }

    pub fn rank(&self) -> usize {
        let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
        for row in &self.rows {
            let mut r = row.clone();
            while let Some((&lead, x)) = r.iter().next() {
                match pivots.get(&lead) {
                    Some(p) => {
                        let f = -x.clone();
                        axpy(&mut r, &f, p);
                    }
                    None => {
                        let inv = x.recip();
                        r.values_mut().for_each(|y| *y *= &inv);
                        pivots.insert(lead, r);
                        break;
                    }
                }
            }
        }
        pivots.len()
    }
}

pub fn rank(m: &SparseRationalMatrix) -> usize {
    m.rank()
}

#[derive(Debug, Clone)]
struct Pivot {
    row: Row,
    /// Relator index → coefficient; `row = Σ coeff · relator`.
    combo: BTreeMap<usize, Q>,
}

/// Echelon form of a relator set, with provenance.
#[derive(Debug, Clone)]
pub struct Echelon {
    matrix: SparseRationalMatrix,
    ids: Vec<String>,
    pivots: BTreeMap<usize, Pivot>,
}

impl Echelon {
    /// Reduce `relators` over `basis`. Zero relators are kept in the id list
    /// but never become rows.
    pub fn build(basis: Vec<Key>, relators: &[Relator]) -> Result<Self, LinalgError> {
        let mut matrix = SparseRationalMatrix::new(basis)?;
        let mut ids = Vec::with_capacity(relators.len());
        let mut pivots: BTreeMap<usize, Pivot> = BTreeMap::new();
        for (ri, rel) in relators.iter().enumerate() {
            ids.push(rel.id.clone());
            let mut row = matrix.to_row(&rel.element, &format!("relator {}", rel.id))?;
            if row.is_empty() {
                continue;
            }
            matrix.rows.push(row.clone());
            let mut combo: BTreeMap<usize, Q> = BTreeMap::from([(ri, Q::one())]);
            while let Some((&lead, x)) = row.iter().next() {
                match pivots.get(&lead) {
                    Some(p) => {
                        let f = -x.clone();
                        axpy(&mut row, &f, &p.row);
                        axpy(&mut combo, &f, &p.combo);
                    }
                    None => {
                        let inv = x.recip();
                        row.values_mut().for_each(|y| *y *= &inv);
                        combo.values_mut().for_each(|y| *y *= &inv);
                        pivots.insert(lead, Pivot { row, combo });
                        break;
                    }
                }
            }
        }
        Ok(Echelon { matrix, ids, pivots })
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &[Key] {
        self.matrix.columns()
    }

    pub fn matrix(&self) -> &SparseRationalMatrix {
        &self.matrix
    }

    pub fn quotient_dim(&self) -> usize {
        self.matrix.num_cols() - self.rank()
    }

    /// Fully reduce `target`; the residual is zero exactly for span members.
    pub fn membership(&self, target: &LinComb) -> Result<MembershipCertificate, LinalgError> {
        let mut residual = self.matrix.to_row(target, "target")?;
        let mut combo: BTreeMap<usize, Q> = BTreeMap::new();
        let mut cursor = 0;
        loop {
            let next = residual
                .range(cursor..)
                .find(|(c, _)| self.pivots.contains_key(c))
                .map(|(&c, x)| (c, x.clone()));
            let Some((col, x)) = next else { break };
            let p = &self.pivots[&col];
            let f = -x;
            axpy(&mut residual, &f, &p.row);
            axpy(&mut combo, &f, &p.combo);
            cursor = col + 1;
        }
        let combination = combo
            .into_iter()
            .map(|(ri, c)| (self.ids[ri].clone(), -c))
            .collect();
        Ok(MembershipCertificate {
            target: target.clone(),
            combination,
            residual: self.matrix.to_lincomb(&residual),
        })
    }

    pub fn is_member(&self, target: &LinComb) -> Result<bool, LinalgError> {
        Ok(self.membership(target)?.is_member())
    }
}

pub fn quotient_dim(basis_size: usize, echelon: &Echelon) -> usize {
    basis_size - echelon.rank()
}

/// `Σ coeff · relator = target − residual`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MembershipCertificate {
    pub target: LinComb,
    pub combination: Vec<(String, Q)>,
    pub residual: LinComb,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertificateError {
    #[error("relator {0} cannot be rebuilt: {1}")]
    Regenerate(String, String),
    #[error("combination does not sum to target minus residual")]
    Mismatch,
    #[error("malformed certificate: {0}")]
    Malformed(String),
}

impl MembershipCertificate {
    pub fn is_member(&self) -> bool {
        self.residual.is_zero()
    }

    /// Re-sum the combination with relators rebuilt from their ids.
    pub fn verify(&self) -> Result<(), CertificateError> {
        self.verify_with(|id| {
            regenerate(id)
                .map(|r| r.element)
                .map_err(|e| CertificateError::Regenerate(id.to_string(), e.reason))
        })
    }

    /// Re-sum using a caller-supplied relator lookup.
    pub fn verify_with(
        &self,
        mut lookup: impl FnMut(&str) -> Result<LinComb, CertificateError>,
    ) -> Result<(), CertificateError> {
        let mut sum = self.residual.clone();
        for (id, c) in &self.combination {
            sum.add_scaled(&lookup(id)?, c);
        }
        if sum == self.target {
            Ok(())
        } else {
            Err(CertificateError::Mismatch)
        }
    }

    pub fn to_doc(&self) -> CertificateDoc {
        CertificateDoc {
            target: self.target.to_terms(),
            combination: self
                .combination
                .iter()
                .map(|(id, c)| CombinationDoc {
                    id: id.clone(),
                    coeff: format_q(c),
                })
                .collect(),
            residual: self.residual.to_terms(),
            member: self.is_member(),
        }
    }

    pub fn from_doc(doc: &CertificateDoc) -> Result<Self, CertificateError> {
        let target = LinComb::from_terms(&doc.target).map_err(CertificateError::Malformed)?;
        let residual = LinComb::from_terms(&doc.residual).map_err(CertificateError::Malformed)?;
        let combination = doc
            .combination
            .iter()
            .map(|c| {
                parse_q(&c.coeff)
                    .map(|q| (c.id.clone(), q))
                    .ok_or_else(|| CertificateError::Malformed(format!("bad coefficient {:?}", c.coeff)))
            })
            .collect::<Result<_, _>>()?;
        let cert = MembershipCertificate {
            target,
            combination,
            residual,
        };
        if cert.is_member() != doc.member {
            return Err(CertificateError::Malformed("member flag disagrees with residual".into()));
        }
        Ok(cert)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CombinationDoc {
    pub id: String,
    pub coeff: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDoc {
    pub target: Vec<TermDoc>,
    pub combination: Vec<CombinationDoc>,
    pub residual: Vec<TermDoc>,
    pub member: bool,
}
