//! Decomposition of covariant polynomials over a generating family.
//!
//! A covariant `F` is written as `Σ pᵢ Pᵢ` with each `pᵢ` invariant. The
//! solve runs per homogeneous degree slice: the unknowns are the coordinates
//! of each `pᵢ` in the invariant basis of degree `m − sᵢ`, and the canonical
//! solution zeroes every non-pivot coordinate, so output is reproducible even
//! though the module need not be free.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::generators::{CovariantBasis, InvariantBasisTable, Vectorizer};
use crate::group::FiniteGroupRep;
use crate::matrix::{solve_linear, DenseMatrix};
use crate::poly::{covariant_action, ScalarPolynomial, VectorPolynomial};
use crate::scalar::Rat;

/// Exact covariance test against every group element.
pub fn is_covariant(p: &VectorPolynomial, rep: &FiniteGroupRep) -> Result<bool> {
    if p.n_vars() != rep.n() || p.dim() != rep.d() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial ({} vars, {} components) under group with n={}, d={}",
            p.n_vars(),
            p.dim(),
            rep.n(),
            rep.d()
        )));
    }
    for g in 0..rep.order() {
        if &covariant_action(g, p, rep)? != p {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Write a covariant polynomial as `Σ pᵢ Pᵢ` with invariant coefficients.
///
/// Returns one scalar polynomial per basis generator; the reassembled sum
/// equals `F` exactly. Coefficient tuples are canonical but not unique.
pub fn decompose(
    f: &VectorPolynomial,
    basis: &CovariantBasis,
    inv: &InvariantBasisTable,
    rep: &FiniteGroupRep,
) -> Result<Vec<ScalarPolynomial>> {
    let n = rep.n();
    let d = rep.d();
    let k = basis.len();
    if f.is_zero() {
        return Ok(vec![ScalarPolynomial::zero(n); k]);
    }
    if !is_covariant(f, rep)? {
        return Err(Error::NotCovariant);
    }
    let deg = f.degree().expect("nonzero polynomial has a degree");
    if deg > basis.certified_degree() {
        return Err(Error::DegreeBeyondCertification {
            degree: deg,
            certified: basis.certified_degree(),
        });
    }
    let min_s = basis.degrees().iter().copied().min().unwrap_or(0);
    if deg > inv.max_degree() + min_s {
        return Err(Error::DegreeBeyondCertification {
            degree: deg,
            certified: inv.max_degree(),
        });
    }

    let mut coeffs = vec![ScalarPolynomial::zero(n); k];
    for m in 0..=deg {
        let slice = f.homogeneous_component(m);
        if slice.is_zero() {
            continue;
        }
        let vz = Vectorizer::new(n, m, d);
        // columns: invariant basis element q of degree m - sᵢ times generator i
        let mut columns: Vec<Vec<Rat>> = Vec::new();
        let mut tags: Vec<(usize, &ScalarPolynomial)> = Vec::new();
        for i in 0..k {
            let s = basis.degree(i);
            if s > m {
                continue;
            }
            for q in inv.basis(m - s) {
                columns.push(vz.to_row(&basis.generator(i).mul_scalar_poly(q)));
                tags.push((i, q));
            }
        }
        if columns.is_empty() {
            return Err(Error::NotInModule { degree: m });
        }
        let rows = vz.cols();
        let mut a = DenseMatrix::zero(rows, columns.len());
        for (col, colv) in columns.iter().enumerate() {
            for (row, val) in colv.iter().enumerate() {
                if !val.is_zero() {
                    *a.at_mut(row, col) = val.clone();
                }
            }
        }
        let rhs = vz.to_row(&slice);
        let sol = solve_linear(&a, &rhs)?;
        let Some(x) = sol.particular else {
            return Err(Error::NotInModule { degree: m });
        };
        for (c, (i, q)) in x.iter().zip(&tags) {
            if !c.is_zero() {
                coeffs[*i] = coeffs[*i].add(&q.scale(c));
            }
        }
    }

    debug_assert_eq!(&reassemble(&coeffs, basis), f);
    Ok(coeffs)
}

/// `Σ pᵢ Pᵢ` for explicit coefficients.
pub fn reassemble(coeffs: &[ScalarPolynomial], basis: &CovariantBasis) -> VectorPolynomial {
    let n = basis
        .generators()
        .first()
        .map(|g| g.n_vars())
        .unwrap_or_else(|| coeffs.first().map(|c| c.n_vars()).unwrap_or(1));
    let d = basis.generators().first().map(|g| g.dim()).unwrap_or(1);
    let mut acc = VectorPolynomial::zero(n, d);
    for (p, gen) in coeffs.iter().zip(basis.generators()) {
        acc = acc.add(&gen.mul_scalar_poly(p));
    }
    acc
}
