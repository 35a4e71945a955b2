//! Generating families of the invariant ring and of the covariant module.
//!
//! Per degree, the space of invariants (resp. covariants) is extracted as the
//! exact row span of Reynolds images of monomial candidates; the span of
//! products of lower-degree generators (resp. of invariant multiples of the
//! generators found so far) is subtracted by comparing reduced-row-echelon
//! pivots in graded-lex order, which makes the emitted generators canonical.
//! Every per-degree rank is cross-checked against the Molien coefficient.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroupRep;
use crate::matrix::DenseMatrix;
use crate::molien::{self, SpaceKind};
use crate::poly::{Monomial, ScalarPolynomial, VectorPolynomial};
use crate::reynolds;
use crate::scalar::Rat;

/// Coordinates for homogeneous vector polynomials of one degree: columns run
/// over degree-m monomials in descending graded-lex order, components minor.
pub(crate) struct Vectorizer {
    n_vars: usize,
    dim: usize,
    monomials: Vec<Monomial>,
    index: BTreeMap<Monomial, usize>,
}

impl Vectorizer {
    pub(crate) fn new(n_vars: usize, degree: usize, dim: usize) -> Self {
        let monomials = Monomial::all_of_degree(n_vars, degree);
        let index = monomials
            .iter()
            .enumerate()
            .map(|(i, m)| (m.clone(), i))
            .collect();
        Self {
            n_vars,
            dim,
            monomials,
            index,
        }
    }

    pub(crate) fn cols(&self) -> usize {
        self.monomials.len() * self.dim
    }

    pub(crate) fn to_row(&self, p: &VectorPolynomial) -> Vec<Rat> {
        let mut row = vec![Rat::zero(); self.cols()];
        for comp in 0..p.dim() {
            for (m, c) in p.component(comp).terms() {
                let idx = self.index[m];
                row[idx * self.dim + comp] = c.clone();
            }
        }
        row
    }

    pub(crate) fn row_to_poly(&self, row: &[Rat]) -> VectorPolynomial {
        let mut comps = vec![ScalarPolynomial::zero(self.n_vars); self.dim];
        for (col, c) in row.iter().enumerate() {
            if !c.is_zero() {
                let mono = self.monomials[col / self.dim].clone();
                comps[col % self.dim].add_term(mono, c.clone());
            }
        }
        VectorPolynomial::new(comps).expect("vectorizer dimensions are consistent")
    }
}

/// Reduce rows to a canonical RREF basis; returns the basis rows and their
/// pivot columns.
pub(crate) fn rref_basis(rows: Vec<Vec<Rat>>, cols: usize) -> (Vec<Vec<Rat>>, Vec<usize>) {
    let nonzero: Vec<Vec<Rat>> = rows
        .into_iter()
        .filter(|r| r.iter().any(|c| !c.is_zero()))
        .collect();
    if nonzero.is_empty() {
        return (Vec::new(), Vec::new());
    }
    let flat: Vec<Rat> = nonzero.concat();
    let mut mat = DenseMatrix::new(nonzero.len(), cols, flat).expect("rows share the column count");
    let (rank, pivots) = mat.rref();
    let basis = (0..rank).map(|r| mat.row(r).to_vec()).collect();
    (basis, pivots)
}

/// Per-degree basis of the invariant ring with new-generator flags.
#[derive(Debug, Clone)]
pub struct DegreeBasis {
    pub degree: usize,
    pub basis: Vec<ScalarPolynomial>,
    pub is_generator: Vec<bool>,
}

/// Bases of all invariant degrees up to a cap, with the members that are new
/// generators (not products of lower-degree generators) flagged.
#[derive(Debug, Clone)]
pub struct InvariantBasisTable {
    n_vars: usize,
    per_degree: Vec<DegreeBasis>,
}

impl InvariantBasisTable {
    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn max_degree(&self) -> usize {
        self.per_degree.len() - 1
    }

    pub fn degree_basis(&self, m: usize) -> Option<&DegreeBasis> {
        self.per_degree.get(m)
    }

    /// Basis of the degree-`m` invariants; empty when `m` exceeds the table.
    pub fn basis(&self, m: usize) -> &[ScalarPolynomial] {
        self.per_degree
            .get(m)
            .map(|d| d.basis.as_slice())
            .unwrap_or(&[])
    }

    /// All flagged generators with their degrees, ascending.
    pub fn generators(&self) -> Vec<(ScalarPolynomial, usize)> {
        let mut out = Vec::new();
        for db in &self.per_degree {
            for (p, &flag) in db.basis.iter().zip(&db.is_generator) {
                if flag {
                    out.push((p.clone(), db.degree));
                }
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &DegreeBasis> {
        self.per_degree.iter()
    }
}

/// Ordered generating family of the covariant module.
#[derive(Debug, Clone)]
pub struct CovariantBasis {
    generators: Vec<VectorPolynomial>,
    degrees: Vec<usize>,
    certified_degree: usize,
}

impl CovariantBasis {
    /// Assemble from explicit parts; generators must be homogeneous with the
    /// stated degrees, sorted non-decreasing.
    pub fn from_parts(
        generators: Vec<VectorPolynomial>,
        degrees: Vec<usize>,
        certified_degree: usize,
    ) -> Result<Self> {
        if generators.len() != degrees.len() {
            return Err(Error::DimensionMismatch(
                "generator and degree lists differ in length".into(),
            ));
        }
        if degrees.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::DimensionMismatch(
                "generator degrees must be non-decreasing".into(),
            ));
        }
        for (g, &s) in generators.iter().zip(&degrees) {
            if !g.is_homogeneous() || (!g.is_zero() && g.degree() != Some(s)) {
                return Err(Error::DimensionMismatch(format!(
                    "generator is not homogeneous of degree {s}"
                )));
            }
        }
        Ok(Self {
            generators,
            degrees,
            certified_degree,
        })
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generator(&self, i: usize) -> &VectorPolynomial {
        &self.generators[i]
    }

    pub fn generators(&self) -> &[VectorPolynomial] {
        &self.generators
    }

    pub fn degree(&self, i: usize) -> usize {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn certified_degree(&self) -> usize {
        self.certified_degree
    }

    pub fn max_degree(&self) -> usize {
        self.degrees.iter().copied().max().unwrap_or(0)
    }
}

/// All products of the given (polynomial, degree) generators with total
/// degree exactly `target`; factors may repeat.
fn products_of_degree(
    gens: &[(ScalarPolynomial, usize)],
    target: usize,
    n_vars: usize,
) -> Vec<ScalarPolynomial> {
    fn rec(
        gens: &[(ScalarPolynomial, usize)],
        idx: usize,
        remaining: usize,
        acc: &ScalarPolynomial,
        out: &mut Vec<ScalarPolynomial>,
    ) {
        if remaining == 0 {
            out.push(acc.clone());
            return;
        }
        if idx >= gens.len() {
            return;
        }
        let (gen, deg) = &gens[idx];
        debug_assert!(*deg > 0);
        let mut power = acc.clone();
        let mut used = 0;
        loop {
            rec(gens, idx + 1, remaining - used, &power, out);
            used += deg;
            if used > remaining {
                break;
            }
            power = power.mul(gen);
        }
    }
    let mut out = Vec::new();
    rec(gens, 0, target, &ScalarPolynomial::one(n_vars), &mut out);
    out.retain(|p| !p.is_zero());
    out
}

/// Compute per-degree invariant bases up to `degree_cap`, flagging new
/// generators. The default cap is the Noether bound |G|.
pub fn invariant_generators(
    rep: &FiniteGroupRep,
    degree_cap: usize,
) -> Result<InvariantBasisTable> {
    let n = rep.n();
    let series = molien::molien_invariant(rep, degree_cap);
    let mut per_degree = vec![DegreeBasis {
        degree: 0,
        basis: vec![ScalarPolynomial::one(n)],
        is_generator: vec![false],
    }];
    let mut gens: Vec<(ScalarPolynomial, usize)> = Vec::new();

    for m in 1..=degree_cap {
        let vz = Vectorizer::new(n, m, 1);
        let rows: Vec<Vec<Rat>> = Monomial::all_of_degree(n, m)
            .into_iter()
            .map(|mono| {
                let p = ScalarPolynomial::monomial(n, mono, Rat::one());
                reynolds::invariant_average(&p, rep)
                    .map(|avg| vz.to_row(&VectorPolynomial::from_scalar(avg)))
            })
            .collect::<Result<_>>()?;
        let (basis_rows, basis_pivots) = rref_basis(rows, vz.cols());

        let expected = series.coefficient(m);
        if expected != Rat::from_integer((basis_rows.len() as i64).into()) {
            return Err(Error::MolienMismatch {
                degree: m,
                expected: usize::try_from(expected.to_integer()).unwrap_or(usize::MAX),
                found: basis_rows.len(),
            });
        }

        let product_rows: Vec<Vec<Rat>> = products_of_degree(&gens, m, n)
            .iter()
            .map(|p| vz.to_row(&VectorPolynomial::from_scalar(p.clone())))
            .collect();
        let (_, product_pivots) = rref_basis(product_rows, vz.cols());

        let basis: Vec<ScalarPolynomial> = basis_rows
            .iter()
            .map(|r| vz.row_to_poly(r).component(0).clone())
            .collect();
        let is_generator: Vec<bool> = basis_pivots
            .iter()
            .map(|p| !product_pivots.contains(p))
            .collect();
        for (p, &flag) in basis.iter().zip(&is_generator) {
            if flag {
                gens.push((p.clone(), m));
            }
        }
        per_degree.push(DegreeBasis {
            degree: m,
            basis,
            is_generator,
        });
    }

    Ok(InvariantBasisTable {
        n_vars: n,
        per_degree,
    })
}

/// Compute a generating family of the covariant module up to `degree_cap`,
/// certified at that degree. Requires the invariant table to cover the cap.
pub fn covariant_generators(
    rep: &FiniteGroupRep,
    inv: &InvariantBasisTable,
    degree_cap: usize,
) -> Result<CovariantBasis> {
    if inv.max_degree() < degree_cap {
        return Err(Error::DegreeBeyondCertification {
            degree: degree_cap,
            certified: inv.max_degree(),
        });
    }
    let n = rep.n();
    let d = rep.d();
    let series = molien::molien_covariant(rep, degree_cap);
    let mut generators: Vec<VectorPolynomial> = Vec::new();
    let mut degrees: Vec<usize> = Vec::new();

    for m in 0..=degree_cap {
        let vz = Vectorizer::new(n, m, d);
        let mut rows = Vec::new();
        for mono in Monomial::all_of_degree(n, m) {
            for comp in 0..d {
                let cand = VectorPolynomial::monomial_times_basis(n, d, mono.clone(), comp);
                rows.push(vz.to_row(&reynolds::covariant_average(&cand, rep)?));
            }
        }
        let (basis_rows, basis_pivots) = rref_basis(rows, vz.cols());

        let expected = series.coefficient(m);
        if expected != Rat::from_integer((basis_rows.len() as i64).into()) {
            return Err(Error::MolienMismatch {
                degree: m,
                expected: usize::try_from(expected.to_integer()).unwrap_or(usize::MAX),
                found: basis_rows.len(),
            });
        }

        let mut span_rows = Vec::new();
        for (gen, &s) in generators.iter().zip(&degrees) {
            if s > m {
                continue;
            }
            for q in inv.basis(m - s) {
                span_rows.push(vz.to_row(&gen.mul_scalar_poly(q)));
            }
        }
        let (_, span_pivots) = rref_basis(span_rows, vz.cols());

        for (row, pivot) in basis_rows.iter().zip(&basis_pivots) {
            if !span_pivots.contains(pivot) {
                generators.push(vz.row_to_poly(row));
                degrees.push(m);
            }
        }
    }

    CovariantBasis::from_parts(generators, degrees, degree_cap)
}

/// One degree of a certification run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub degree: usize,
    pub covariant_dim: usize,
    pub module_rank: usize,
}

/// Empirical completeness certificate for a covariant basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertificationReport {
    pub check_cap: usize,
    pub per_degree: Vec<DegreeCheck>,
    pub first_failure: Option<usize>,
}

impl CertificationReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Canonical basis of the degree-`m` invariants, computed by brute force.
pub fn invariant_basis_of_degree(rep: &FiniteGroupRep, m: usize) -> Result<Vec<ScalarPolynomial>> {
    let n = rep.n();
    if m == 0 {
        return Ok(vec![ScalarPolynomial::one(n)]);
    }
    let vz = Vectorizer::new(n, m, 1);
    let rows: Vec<Vec<Rat>> = Monomial::all_of_degree(n, m)
        .into_iter()
        .map(|mono| {
            let p = ScalarPolynomial::monomial(n, mono, Rat::one());
            reynolds::invariant_average(&p, rep)
                .map(|avg| vz.to_row(&VectorPolynomial::from_scalar(avg)))
        })
        .collect::<Result<_>>()?;
    let (basis_rows, _) = rref_basis(rows, vz.cols());
    Ok(basis_rows
        .iter()
        .map(|r| vz.row_to_poly(r).component(0).clone())
        .collect())
}

/// Verify, degree by degree up to `check_cap`, that every covariant space is
/// covered by invariant multiples of the basis generators. Failure is data,
/// not an error.
pub fn certify_generators(
    rep: &FiniteGroupRep,
    basis: &CovariantBasis,
    check_cap: usize,
) -> Result<CertificationReport> {
    let n = rep.n();
    let d = rep.d();
    let mut per_degree = Vec::new();
    let mut first_failure = None;

    for m in 0..=check_cap {
        let covariant_dim = molien::dimension_bruteforce(rep, m, SpaceKind::Covariant)?;
        let vz = Vectorizer::new(n, m, d);
        let mut span_rows = Vec::new();
        for (gen, &s) in basis.generators().iter().zip(basis.degrees()) {
            if s > m {
                continue;
            }
            for q in invariant_basis_of_degree(rep, m - s)? {
                span_rows.push(vz.to_row(&gen.mul_scalar_poly(&q)));
            }
        }
        let (span_basis, _) = rref_basis(span_rows, vz.cols());
        let module_rank = span_basis.len();
        if module_rank < covariant_dim && first_failure.is_none() {
            first_failure = Some(m);
        }
        per_degree.push(DegreeCheck {
            degree: m,
            covariant_dim,
            module_rank,
        });
    }

    Ok(CertificationReport {
        check_cap,
        per_degree,
        first_failure,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{covariant_action, parse_scalar};

    fn m(rows: usize, cols: usize, e: &[i64]) -> DenseMatrix {
        DenseMatrix::from_i64(rows, cols, e).unwrap()
    }

    fn c2_sign() -> FiniteGroupRep {
        FiniteGroupRep::close(1, 1, &[m(1, 1, &[-1])], &[m(1, 1, &[-1])], 10).unwrap()
    }

    fn s2_perm_trivial() -> FiniteGroupRep {
        FiniteGroupRep::close(2, 1, &[m(2, 2, &[0, 1, 1, 0])], &[m(1, 1, &[1])], 10).unwrap()
    }

    fn s2_perm_sign() -> FiniteGroupRep {
        FiniteGroupRep::close(2, 1, &[m(2, 2, &[0, 1, 1, 0])], &[m(1, 1, &[-1])], 10).unwrap()
    }

    fn c2c2_standard() -> FiniteGroupRep {
        FiniteGroupRep::close(
            2,
            2,
            &[m(2, 2, &[-1, 0, 0, 1]), m(2, 2, &[1, 0, 0, -1])],
            &[m(2, 2, &[-1, 0, 0, 1]), m(2, 2, &[1, 0, 0, -1])],
            10,
        )
        .unwrap()
    }

    fn trivial_r1() -> FiniteGroupRep {
        FiniteGroupRep::close(1, 1, &[], &[], 10).unwrap()
    }

    /// Exact membership of `p` in the span of `basis` (all homogeneous of the
    /// same degree).
    fn in_span(p: &ScalarPolynomial, basis: &[ScalarPolynomial], degree: usize) -> bool {
        let vz = Vectorizer::new(p.n_vars(), degree, 1);
        let mut rows: Vec<Vec<Rat>> = basis
            .iter()
            .map(|b| vz.to_row(&VectorPolynomial::from_scalar(b.clone())))
            .collect();
        let (_, before) = rref_basis(rows.clone(), vz.cols());
        rows.push(vz.to_row(&VectorPolynomial::from_scalar(p.clone())));
        let (_, after) = rref_basis(rows, vz.cols());
        before.len() == after.len()
    }

    #[test]
    fn c2_invariant_generators() {
        let table = invariant_generators(&c2_sign(), 2).unwrap();
        let gens = table.generators();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1, 2);
        assert!(in_span(&gens[0].0, &[parse_scalar("x^2", 1).unwrap()], 2));
    }

    #[test]
    fn s2_invariant_generators() {
        let table = invariant_generators(&s2_perm_trivial(), 2).unwrap();
        let gens = table.generators();
        let degrees: Vec<usize> = gens.iter().map(|(_, d)| *d).collect();
        assert_eq!(degrees, vec![1, 2]);
        assert!(in_span(
            &gens[0].0,
            &[parse_scalar("x0 + x1", 2).unwrap()],
            1
        ));
        assert_eq!(table.basis(2).len(), 2);
    }

    #[test]
    fn trivial_group_invariant_generators() {
        let table = invariant_generators(&trivial_r1(), 1).unwrap();
        let gens = table.generators();
        assert_eq!(gens.len(), 1);
        assert_eq!(gens[0].1, 1);
        assert!(in_span(&gens[0].0, &[parse_scalar("x", 1).unwrap()], 1));
    }

    #[test]
    fn c2_sign_covariant_generators() {
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        assert_eq!(basis.degrees(), &[1]);
        assert_eq!(basis.certified_degree(), 2);
        let gen = basis.generator(0);
        assert_eq!(gen.component(0), &parse_scalar("x", 1).unwrap());
        for g in 0..rep.order() {
            assert_eq!(&covariant_action(g, gen, &rep).unwrap(), gen);
        }
    }

    #[test]
    fn c2c2_covariant_generators() {
        let rep = c2c2_standard();
        let inv = invariant_generators(&rep, 4).unwrap();
        let basis = covariant_generators(&rep, &inv, 4).unwrap();
        assert_eq!(basis.degrees(), &[1, 1]);
        // the two generators span {(x,0),(0,y)}
        let vz = Vectorizer::new(2, 1, 2);
        let x_e1 = crate::poly::parse_vector("(x0, 0)", 2, 2).unwrap();
        let y_e2 = crate::poly::parse_vector("(0, x1)", 2, 2).unwrap();
        for target in [x_e1, y_e2] {
            let mut rows: Vec<Vec<Rat>> = basis.generators().iter().map(|g| vz.to_row(g)).collect();
            rows.push(vz.to_row(&target));
            let (b2, _) = rref_basis(rows, vz.cols());
            assert_eq!(b2.len(), 2);
        }
    }

    #[test]
    fn s2_sign_covariant_generator_is_x_minus_y() {
        let rep = s2_perm_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        assert_eq!(basis.degrees(), &[1]);
        let gen = basis.generator(0).component(0).clone();
        let target = parse_scalar("x0 - x1", 2).unwrap();
        assert!(in_span(&gen, &[target], 1));
    }

    #[test]
    fn trivial_rho_covariant_generator_is_constant() {
        let rep = s2_perm_trivial();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        assert_eq!(basis.degrees(), &[0]);
        assert_eq!(basis.generator(0).component(0), &ScalarPolynomial::one(2));
    }

    #[test]
    fn every_generator_is_exactly_covariant() {
        for rep in [c2_sign(), s2_perm_sign(), c2c2_standard()] {
            let inv = invariant_generators(&rep, rep.order()).unwrap();
            let basis = covariant_generators(&rep, &inv, rep.order()).unwrap();
            for gen in basis.generators() {
                for g in 0..rep.order() {
                    assert_eq!(&covariant_action(g, gen, &rep).unwrap(), gen);
                }
            }
        }
    }

    #[test]
    fn certify_passes_on_complete_basis() {
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        let report = certify_generators(&rep, &basis, 7).unwrap();
        assert!(report.passed());
        assert_eq!(report.per_degree.len(), 8);
    }

    #[test]
    fn certify_fails_on_empty_basis_at_degree_one() {
        let rep = c2_sign();
        let empty = CovariantBasis::from_parts(vec![], vec![], 2).unwrap();
        let report = certify_generators(&rep, &empty, 3).unwrap();
        assert_eq!(report.first_failure, Some(1));
    }

    #[test]
    fn certify_trivial_rep_constant_basis() {
        let rep = s2_perm_trivial();
        let basis = CovariantBasis::from_parts(
            vec![VectorPolynomial::from_scalar(ScalarPolynomial::one(2))],
            vec![0],
            2,
        )
        .unwrap();
        let report = certify_generators(&rep, &basis, 5).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn dropping_a_generator_fails_at_its_degree() {
        let rep = c2c2_standard();
        let inv = invariant_generators(&rep, 4).unwrap();
        let basis = covariant_generators(&rep, &inv, 4).unwrap();
        let dropped =
            CovariantBasis::from_parts(vec![basis.generator(0).clone()], vec![basis.degree(0)], 4)
                .unwrap();
        let report = certify_generators(&rep, &dropped, 4).unwrap();
        assert_eq!(report.first_failure, Some(1));
    }

    #[test]
    fn generator_output_is_deterministic() {
        let rep = c2c2_standard();
        let inv1 = invariant_generators(&rep, 4).unwrap();
        let inv2 = invariant_generators(&rep, 4).unwrap();
        let b1 = covariant_generators(&rep, &inv1, 4).unwrap();
        let b2 = covariant_generators(&rep, &inv2, 4).unwrap();
        assert_eq!(b1.generators(), b2.generators());
        for (a, b) in inv1.generators().iter().zip(inv2.generators().iter()) {
            assert_eq!(a, b);
        }
    }
}
