//! Finite matrix groups paired with a representation.
//!
//! A group is described by source generators acting on ℝⁿ and representation
//! generators acting on the value space E; closure enumerates all products
//! breadth-first, verifying along the way that the source-to-rho pairing is a
//! well-defined homomorphism. Haar averaging for a finite group is the exact
//! uniform average with weight 1/|G|.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{self, Rat};

/// Default closure cap; per-degree linear algebra is O(|G|·monomials), so
/// desk-scale groups stay well under this.
pub const DEFAULT_CAP: usize = 10_000;

#[derive(Debug, Clone)]
struct GroupElement {
    source: DenseMatrix,
    rho: DenseMatrix,
}

/// A closed finite matrix group with its representation.
#[derive(Debug, Clone)]
pub struct FiniteGroupRep {
    n: usize,
    d: usize,
    elements: Vec<GroupElement>,
    identity_index: usize,
    inverse_index: Vec<usize>,
    source_lookup: HashMap<DenseMatrix, usize>,
}

impl FiniteGroupRep {
    /// Breadth-first closure over products of the generators.
    pub fn close(
        n: usize,
        d: usize,
        source_gens: &[DenseMatrix],
        rho_gens: &[DenseMatrix],
        cap: usize,
    ) -> Result<Self> {
        if source_gens.len() != rho_gens.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} source generators but {} rho generators",
                source_gens.len(),
                rho_gens.len()
            )));
        }
        for g in source_gens {
            if g.rows() != n || g.cols() != n {
                return Err(Error::DimensionMismatch(format!(
                    "source generator is {}x{}, expected {n}x{n}",
                    g.rows(),
                    g.cols()
                )));
            }
            g.inverse()?; // invertibility required
        }
        for r in rho_gens {
            if r.rows() != d || r.cols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "rho generator is {}x{}, expected {d}x{d}",
                    r.rows(),
                    r.cols()
                )));
            }
            r.inverse()?;
        }

        let mut elements = vec![GroupElement {
            source: DenseMatrix::identity(n),
            rho: DenseMatrix::identity(d),
        }];
        let mut lookup: HashMap<DenseMatrix, usize> = HashMap::new();
        lookup.insert(elements[0].source.clone(), 0);

        let mut head = 0;
        while head < elements.len() {
            for (sg, rg) in source_gens.iter().zip(rho_gens) {
                let new_source = elements[head].source.mul(sg)?;
                let new_rho = elements[head].rho.mul(rg)?;
                match lookup.get(&new_source) {
                    Some(&idx) => {
                        if elements[idx].rho != new_rho {
                            return Err(Error::NotAHomomorphism);
                        }
                    }
                    None => {
                        if elements.len() >= cap {
                            return Err(Error::CapExceeded { cap });
                        }
                        lookup.insert(new_source.clone(), elements.len());
                        elements.push(GroupElement {
                            source: new_source,
                            rho: new_rho,
                        });
                    }
                }
            }
            head += 1;
        }

        let mut inverse_index = Vec::with_capacity(elements.len());
        for e in &elements {
            let inv = e.source.inverse()?;
            let idx = *lookup
                .get(&inv)
                .expect("finite closure contains every inverse");
            inverse_index.push(idx);
        }

        Ok(Self {
            n,
            d,
            elements,
            identity_index: 0,
            inverse_index,
            source_lookup: lookup,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn identity_index(&self) -> usize {
        self.identity_index
    }

    pub fn source(&self, i: usize) -> &DenseMatrix {
        &self.elements[i].source
    }

    pub fn rho(&self, i: usize) -> &DenseMatrix {
        &self.elements[i].rho
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse_index[i]
    }

    /// `ρ(g)⁻¹`, read off as `ρ(g⁻¹)` from the closed table.
    pub fn rho_inv(&self, i: usize) -> &DenseMatrix {
        self.rho(self.inverse_index[i])
    }

    pub fn source_inv(&self, i: usize) -> &DenseMatrix {
        self.source(self.inverse_index[i])
    }

    pub fn index_of_source(&self, m: &DenseMatrix) -> Option<usize> {
        self.source_lookup.get(m).copied()
    }

    /// Index of the element whose source matrix is `source(i)·source(j)`.
    pub fn product_index(&self, i: usize, j: usize) -> usize {
        let prod = self
            .source(i)
            .mul(self.source(j))
            .expect("group matrices share dimension");
        *self
            .source_lookup
            .get(&prod)
            .expect("group is closed under products")
    }

    /// Exact uniform Haar weight `1/|G|`.
    pub fn haar_weight(&self) -> Rat {
        Rat::new(1.into(), (self.order() as i64).into())
    }

    /// Orbit of a rational point, deduplicated, in deterministic order.
    pub fn orbit(&self, x: &[Rat]) -> Result<Vec<Vec<Rat>>> {
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for i in 0..self.order() {
            let y = self.source(i).mul_vec(x)?;
            if seen.insert(y.clone()) {
                out.push(y);
            }
        }
        Ok(out)
    }
}

/// Per-element orthogonality of the source and rho matrices. The algebraic
/// pipeline does not need this, but the compactification maps assume the
/// euclidean norm is invariant and refuse groups where `all_source` is false.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormInvarianceReport {
    pub per_element: Vec<(bool, bool)>,
    pub all_source: bool,
    pub all_rho: bool,
}

pub fn check_norm_invariance(rep: &FiniteGroupRep) -> NormInvarianceReport {
    let per_element: Vec<(bool, bool)> = (0..rep.order())
        .map(|i| (rep.source(i).is_orthogonal(), rep.rho(i).is_orthogonal()))
        .collect();
    let all_source = per_element.iter().all(|&(s, _)| s);
    let all_rho = per_element.iter().all(|&(_, r)| r);
    NormInvarianceReport {
        per_element,
        all_source,
        all_rho,
    }
}

// ---------------------------------------------------------------------------
// Group/representation input file: JSON with matrices as arrays of rational
// strings, bit-exact under round-trip.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(default)]
    pub name: String,
    pub n: usize,
    pub d: usize,
    pub source_generators: Vec<Vec<Vec<String>>>,
    pub rho_generators: Vec<Vec<Vec<String>>>,
}

fn matrix_from_strings(rows: &[Vec<String>]) -> Result<DenseMatrix> {
    if rows.is_empty() {
        return Err(Error::Parse("empty matrix in group file".into()));
    }
    let cols = rows[0].len();
    let mut entries = Vec::with_capacity(rows.len() * cols);
    for row in rows {
        if row.len() != cols {
            return Err(Error::Parse("ragged matrix in group file".into()));
        }
        for s in row {
            entries.push(scalar::parse_rat(s)?);
        }
    }
    DenseMatrix::new(rows.len(), cols, entries)
}

pub fn matrix_to_strings(m: &DenseMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| {
            (0..m.cols())
                .map(|c| scalar::format_rat(m.at(r, c)))
                .collect()
        })
        .collect()
}

impl GroupSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("group file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("group spec serializes")
    }

    pub fn source_matrices(&self) -> Result<Vec<DenseMatrix>> {
        self.source_generators
            .iter()
            .map(|m| matrix_from_strings(m))
            .collect()
    }

    pub fn rho_matrices(&self) -> Result<Vec<DenseMatrix>> {
        self.rho_generators
            .iter()
            .map(|m| matrix_from_strings(m))
            .collect()
    }

    pub fn close(&self, cap: usize) -> Result<FiniteGroupRep> {
        FiniteGroupRep::close(
            self.n,
            self.d,
            &self.source_matrices()?,
            &self.rho_matrices()?,
            cap,
        )
    }
}
