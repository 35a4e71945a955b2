//! Averaging projections onto invariants and covariants.
//!
//! For a finite group the Haar integral is the exact uniform average, so both
//! projections are finite sums with weight 1/|G| and stay inside the rational
//! pipeline.

use crate::error::{Error, Result};
use crate::group::FiniteGroupRep;
use crate::poly::{covariant_action, ScalarPolynomial, VectorPolynomial};

/// Project a scalar polynomial onto the invariant ring:
/// `(1/|G|) Σ_g p(g x)`.
pub fn invariant_average(p: &ScalarPolynomial, rep: &FiniteGroupRep) -> Result<ScalarPolynomial> {
    if p.n_vars() != rep.n() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial in {} variables averaged over group with n={}",
            p.n_vars(),
            rep.n()
        )));
    }
    let mut acc = ScalarPolynomial::zero(p.n_vars());
    for g in 0..rep.order() {
        acc = acc.add(&p.compose_linear(rep.source(g))?);
    }
    Ok(acc.scale(&rep.haar_weight()))
}

/// Project a vector polynomial onto the covariant module:
/// `(1/|G|) Σ_g ρ(g)⁻¹ P(g x)`.
pub fn covariant_average(p: &VectorPolynomial, rep: &FiniteGroupRep) -> Result<VectorPolynomial> {
    let mut acc = VectorPolynomial::zero(p.n_vars(), p.dim());
    for g in 0..rep.order() {
        acc = acc.add(&covariant_action(g, p, rep)?);
    }
    Ok(acc.scale(&rep.haar_weight()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::DenseMatrix;
    use crate::poly::parse_scalar;

    fn c2_sign() -> FiniteGroupRep {
        FiniteGroupRep::close(
            1,
            1,
            &[DenseMatrix::from_i64(1, 1, &[-1]).unwrap()],
            &[DenseMatrix::from_i64(1, 1, &[-1]).unwrap()],
            10,
        )
        .unwrap()
    }

    #[test]
    fn odd_scalar_averages_to_zero() {
        let rep = c2_sign();
        let x = parse_scalar("x", 1).unwrap();
        assert!(invariant_average(&x, &rep).unwrap().is_zero());
    }

    #[test]
    fn even_scalar_is_fixed() {
        let rep = c2_sign();
        let x2 = parse_scalar("x^2", 1).unwrap();
        assert_eq!(invariant_average(&x2, &rep).unwrap(), x2);
        let one = parse_scalar("1", 1).unwrap();
        assert_eq!(invariant_average(&one, &rep).unwrap(), one);
    }

    #[test]
    fn covariant_average_examples() {
        let rep = c2_sign();
        let x = VectorPolynomial::from_scalar(parse_scalar("x", 1).unwrap());
        assert_eq!(covariant_average(&x, &rep).unwrap(), x);
        let one = VectorPolynomial::from_scalar(parse_scalar("1", 1).unwrap());
        assert!(covariant_average(&one, &rep).unwrap().is_zero());
        let x3 = VectorPolynomial::from_scalar(parse_scalar("x^3", 1).unwrap());
        assert_eq!(covariant_average(&x3, &rep).unwrap(), x3);
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rep = c2_sign();
        let p = parse_scalar("x0 + x1", 2).unwrap();
        assert!(invariant_average(&p, &rep).is_err());
    }
}
