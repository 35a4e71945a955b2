//! Float-backed compactification pipeline.
//!
//! The mutually inverse maps `φ: x ↦ x/√(1−‖x‖²)` and `ψ: x ↦ x/√(1+‖x‖²)`
//! transport rapidly decaying functions on ℝⁿ to boundary-flat functions on
//! the open unit ball and back. `compactify_function` samples the transported
//! function, `boundary_flatness_report` measures the quotient-form decay
//! `‖value‖/(1−‖x‖²)^p` near the sphere, and `schwartz_decompose` assembles a
//! covariant function from invariant ball coefficients by the explicit
//! formula `fᵢ(y) = (1+‖y‖²)^{−sᵢ/2} gᵢ(ψ(y))`.
//!
//! The maps assume the euclidean norm is G-invariant, so every group-aware
//! entry point refuses non-orthogonal source matrices.

use crate::error::{Error, Result};
use crate::generators::CovariantBasis;
use crate::group::{check_norm_invariance, FiniteGroupRep};
use crate::matrix::DenseMatrix;
use crate::scalar;

/// Default admissibility margin for `phi`: points with `‖x‖ ≥ 1 − tol` are
/// rejected rather than extrapolated.
pub const DEFAULT_PHI_TOL: f64 = 1e-9;

pub fn norm_sq(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

pub fn norm(x: &[f64]) -> f64 {
    norm_sq(x).sqrt()
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bp = s - a;
    let e = (a - (s - bp)) + (b - bp);
    (s, e)
}

/// `Σ xᵢ²` as an unevaluated double-double sum. The compensated form keeps
/// `1 − ‖x‖²` meaningful near the sphere, where the plain sum would cancel
/// away the digits the inverse-pair bounds depend on.
fn norm_sq_dd(x: &[f64]) -> (f64, f64) {
    let mut hi = 0.0f64;
    let mut lo = 0.0f64;
    for &v in x {
        let p = v * v;
        let e = v.mul_add(v, -p);
        let (s, err) = two_sum(hi, p);
        hi = s;
        lo += err + e;
    }
    two_sum(hi, lo)
}

/// Apply an exact matrix to a float point.
pub fn apply_matrix_f64(m: &DenseMatrix, x: &[f64]) -> Vec<f64> {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| scalar::to_f64(m.at(i, j)) * x[j])
                .sum()
        })
        .collect()
}

/// Refuse groups whose source matrices do not preserve the euclidean norm.
pub fn require_orthogonal(rep: &FiniteGroupRep) -> Result<()> {
    if check_norm_invariance(rep).all_source {
        Ok(())
    } else {
        Err(Error::NotOrthogonal)
    }
}

/// `φ(x) = x/√(1−‖x‖²)`, defined on the open unit ball.
pub fn phi(x: &[f64], tol: f64) -> Result<Vec<f64>> {
    let (hi, lo) = norm_sq_dd(x);
    if hi + lo >= (1.0 - tol) * (1.0 - tol) {
        return Err(Error::OutsideDomain);
    }
    // 1 − hi is exact for hi in [0.5, 2] and harmless below
    let diff = (1.0 - hi) - lo;
    let root = diff.sqrt();
    Ok(x.iter().map(|v| v / root).collect())
}

/// `ψ(x) = x/√(1+‖x‖²)`, the inverse of `φ`; lands in the open unit ball.
///
/// Each output coordinate is computed to a single final rounding: the root is
/// carried as a double-double and the division residual is corrected through
/// fused multiply-adds. Reconstruction through `phi` amplifies coordinate
/// roundings by 1+‖x‖², so the extra care is what keeps the inverse-pair
/// residual inside its bound at ‖x‖ ~ 10³.
pub fn psi(x: &[f64]) -> Vec<f64> {
    let (hi, lo) = norm_sq_dd(x);
    let (sum_hi, e) = two_sum(1.0, hi);
    let sum_lo = e + lo;
    let rt = sum_hi.sqrt();
    // exact sqrt residual via fma, one Newton correction, kept as hi+err
    let res = (-rt).mul_add(rt, sum_hi) + sum_lo;
    let (r_hi, r_err) = two_sum(rt, res / (2.0 * rt));
    x.iter()
        .map(|&v| {
            let q = v / r_hi;
            let rem = q.mul_add(r_hi, -v);
            let corr = (rem + q * r_err) / r_hi;
            q - corr
        })
        .collect()
}

/// Sample domain of a [`SampledFunction`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    Ball,
    WholeSpace,
}

/// Pointwise samples of a vector-valued function.
#[derive(Debug, Clone)]
pub struct SampledFunction {
    pub points: Vec<Vec<f64>>,
    pub values: Vec<Vec<f64>>,
    pub domain: Domain,
}

impl SampledFunction {
    pub fn new(points: Vec<Vec<f64>>, values: Vec<Vec<f64>>, domain: Domain) -> Result<Self> {
        if points.len() != values.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if domain == Domain::Ball && points.iter().any(|p| norm_sq(p) >= 1.0) {
            return Err(Error::OutsideDomain);
        }
        Ok(Self {
            points,
            values,
            domain,
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Sample `I(f)`: `f∘φ` inside the open ball, exact zero outside.
pub fn compactify_function<F>(f: F, grid: &[Vec<f64>]) -> SampledFunction
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut values: Vec<Vec<f64>> = Vec::with_capacity(grid.len());
    let mut all_inside = true;
    let mut dim = 1;
    for x in grid {
        let r2 = norm_sq(x);
        if r2 < 1.0 {
            let scale = 1.0 / (1.0 - r2).sqrt();
            let y: Vec<f64> = x.iter().map(|v| v * scale).collect();
            let v = f(&y);
            dim = v.len();
            values.push(v);
        } else {
            all_inside = false;
            values.push(vec![0.0; dim]);
        }
    }
    SampledFunction {
        points: grid.to_vec(),
        values,
        domain: if all_inside {
            Domain::Ball
        } else {
            Domain::WholeSpace
        },
    }
}

/// One row of a flatness table: the supremum of `‖value‖/(1−‖x‖²)^p` over
/// sampled points in the shell `0.9 < ‖x‖ < 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatnessEntry {
    pub order: u32,
    pub supremum: f64,
    pub points_used: usize,
}

pub fn boundary_flatness_report(s: &SampledFunction, orders: &[u32]) -> Vec<FlatnessEntry> {
    orders
        .iter()
        .map(|&p| {
            let mut sup = 0.0f64;
            let mut used = 0;
            for (x, v) in s.points.iter().zip(&s.values) {
                let r = norm(x);
                if r <= 0.9 || r >= 1.0 {
                    continue;
                }
                used += 1;
                let quotient = norm(v) / (1.0 - r * r).powi(p as i32);
                sup = sup.max(quotient);
            }
            FlatnessEntry {
                order: p,
                supremum: sup,
                points_used: used,
            }
        })
        .collect()
}

/// Scalar function on the open unit ball.
pub type BallFn = Box<dyn Fn(&[f64]) -> f64>;

/// Covariant function assembled from invariant ball coefficients:
/// `f(y) = Σ fᵢ(y) Pᵢ(y)` with `fᵢ(y) = (1+‖y‖²)^{−sᵢ/2} gᵢ(ψ(y))`.
pub struct SchwartzDecomposition<'a> {
    g_list: Vec<BallFn>,
    basis: &'a CovariantBasis,
}

impl<'a> SchwartzDecomposition<'a> {
    pub fn new(g_list: Vec<BallFn>, basis: &'a CovariantBasis) -> Result<Self> {
        if g_list.len() != basis.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} ball coefficients for a basis of {} generators",
                g_list.len(),
                basis.len()
            )));
        }
        Ok(Self { g_list, basis })
    }

    /// `fᵢ(y)`, by the explicit formula.
    pub fn coefficient(&self, i: usize, y: &[f64]) -> f64 {
        let s = self.basis.degree(i) as f64;
        let w = (1.0 + norm_sq(y)).powf(-s / 2.0);
        w * (self.g_list[i])(&psi(y))
    }

    /// `f(y) = Σ fᵢ(y) Pᵢ(y)`.
    pub fn eval(&self, y: &[f64]) -> Vec<f64> {
        let d = self
            .basis
            .generators()
            .first()
            .map(|g| g.dim())
            .unwrap_or(1);
        let mut acc = vec![0.0; d];
        for i in 0..self.basis.len() {
            let fi = self.coefficient(i, y);
            if fi == 0.0 {
                continue;
            }
            let pv = self.basis.generator(i).eval_f64(y);
            for (a, p) in acc.iter_mut().zip(&pv) {
                *a += fi * p;
            }
        }
        acc
    }

    /// Max over group elements and given points of `‖ρ(g)⁻¹f(g y) − f(y)‖`.
    pub fn covariance_residual(&self, rep: &FiniteGroupRep, points: &[Vec<f64>]) -> Result<f64> {
        require_orthogonal(rep)?;
        let mut worst = 0.0f64;
        for y in points {
            let fy = self.eval(y);
            for g in 0..rep.order() {
                let gy = apply_matrix_f64(rep.source(g), y);
                let fgy = self.eval(&gy);
                let pulled = apply_matrix_f64(rep.rho_inv(g), &fgy);
                let res = pulled
                    .iter()
                    .zip(&fy)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max);
                worst = worst.max(res);
            }
        }
        Ok(worst)
    }
}

/// Max equivariance residual of `φ` and `ψ` over the group and given ball
/// points: `‖φ(gx) − gφ(x)‖` and `‖ψ(gx) − gψ(x)‖`.
pub fn equivariance_residual(
    rep: &FiniteGroupRep,
    ball_points: &[Vec<f64>],
    tol: f64,
) -> Result<f64> {
    require_orthogonal(rep)?;
    let mut worst = 0.0f64;
    for x in ball_points {
        let px = phi(x, tol)?;
        for g in 0..rep.order() {
            let gx = apply_matrix_f64(rep.source(g), x);
            let lhs = phi(&gx, tol)?;
            let rhs = apply_matrix_f64(rep.source(g), &px);
            worst = worst.max(
                lhs.iter()
                    .zip(&rhs)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max),
            );
        }
        // psi is defined everywhere; exercise it on a scaled copy
        let sx: Vec<f64> = x.iter().map(|v| v * 3.0).collect();
        let psx = psi(&sx);
        for g in 0..rep.order() {
            let gx = apply_matrix_f64(rep.source(g), &sx);
            let lhs = psi(&gx);
            let rhs = apply_matrix_f64(rep.source(g), &psx);
            worst = worst.max(
                lhs.iter()
                    .zip(&rhs)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0f64, f64::max),
            );
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{covariant_generators, invariant_generators};
    use crate::rng::SplitMix64;

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

    fn random_ball_point(rng: &mut SplitMix64, n: usize, rmax: f64) -> Vec<f64> {
        loop {
            let x: Vec<f64> = (0..n).map(|_| rng.next_signed_f64()).collect();
            if norm(&x) <= 1.0 {
                return x.iter().map(|v| v * rmax).collect();
            }
        }
    }

    #[test]
    fn phi_fixed_point_and_reference_value() {
        assert_eq!(phi(&[0.0], DEFAULT_PHI_TOL).unwrap(), vec![0.0]);
        let v = phi(&[0.6], DEFAULT_PHI_TOL).unwrap();
        assert!((v[0] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn phi_rejects_boundary() {
        assert_eq!(phi(&[1.0], 1e-9), Err(Error::OutsideDomain));
        assert_eq!(phi(&[0.9999999999], 1e-9), Err(Error::OutsideDomain));
        assert!(phi(&[0.8, 0.3], 1e-9).is_ok());
    }

    #[test]
    fn psi_reference_values() {
        assert_eq!(psi(&[0.0, 0.0]), vec![0.0, 0.0]);
        let v = psi(&[0.75]);
        assert!((v[0] - 0.6).abs() < 1e-15);
        // ‖ψ(x)‖ → 1 as ‖x‖ → ∞
        let far = psi(&[1e6]);
        assert!(norm(&far) > 1.0 - 1e-11);
        assert!(norm(&psi(&[1e3, 1e3])) < 1.0);
    }

    #[test]
    fn inverse_pair_residuals() {
        let mut rng = SplitMix64::new(11);
        for _ in 0..200 {
            let x = random_ball_point(&mut rng, 3, 0.95);
            let back = psi(&phi(&x, 0.0).unwrap());
            for (a, b) in back.iter().zip(&x) {
                assert!((a - b).abs() < 1e-10);
            }
        }
        for _ in 0..200 {
            let r = 1000.0 * rng.next_f64();
            let mut y: Vec<f64> = (0..3).map(|_| rng.next_signed_f64()).collect();
            let n = norm(&y);
            if n < 1e-6 {
                continue;
            }
            for v in &mut y {
                *v *= r / n;
            }
            let back = phi(&psi(&y), 0.0).unwrap();
            for (a, b) in back.iter().zip(&y) {
                let rel = (a - b).abs() / b.abs().max(1.0);
                assert!(rel < 1e-10);
            }
        }
    }

    #[test]
    fn compactify_constant_function() {
        let grid = vec![vec![0.0], vec![0.5], vec![-0.3]];
        let s = compactify_function(|_| vec![7.0], &grid);
        assert_eq!(s.domain, Domain::Ball);
        assert!(s.values.iter().all(|v| v == &vec![7.0]));
    }

    #[test]
    fn compactify_gaussian_is_flat_at_boundary() {
        let grid = vec![vec![1.0 - 1e-3]];
        let s = compactify_function(|y| vec![(-norm_sq(y)).exp()], &grid);
        assert!(norm(&s.values[0]) < 1e-12);
    }

    #[test]
    fn compactify_identity_component() {
        // f(y) = y₁ gives I(f)(x) = x₁/√(1−‖x‖²)
        let grid = vec![vec![0.3, 0.4]];
        let s = compactify_function(|y| vec![y[0]], &grid);
        let expected = 0.3 / (1.0f64 - 0.25).sqrt();
        assert!((s.values[0][0] - expected).abs() < 1e-14);
    }

    #[test]
    fn compactify_outside_points_are_exact_zero() {
        let grid = vec![vec![0.5], vec![1.5]];
        let s = compactify_function(|_| vec![3.0], &grid);
        assert_eq!(s.domain, Domain::WholeSpace);
        assert_eq!(s.values[1], vec![0.0]);
    }

    #[test]
    fn flatness_gaussian_vs_constant() {
        let shell: Vec<Vec<f64>> = vec![vec![0.99], vec![0.993], vec![0.995]];
        let gauss = compactify_function(|y| vec![(-norm_sq(y)).exp()], &shell);
        let report = boundary_flatness_report(&gauss, &[3]);
        assert_eq!(report[0].points_used, 3);
        assert!(report[0].supremum < 1e-10);

        let ones = SampledFunction::new(shell.clone(), vec![vec![1.0]; shell.len()], Domain::Ball)
            .unwrap();
        let report = boundary_flatness_report(&ones, &[1]);
        // at r = 0.995 the quotient is 1/(1-r²) ≈ 100.25
        assert!(report[0].supremum > 1e2);

        let zeros = SampledFunction::new(shell.clone(), vec![vec![0.0]; shell.len()], Domain::Ball)
            .unwrap();
        for entry in boundary_flatness_report(&zeros, &[0, 1, 2, 3]) {
            assert_eq!(entry.supremum, 0.0);
        }
    }

    #[test]
    fn schwartz_zero_coefficients_give_zero() {
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        let dec = SchwartzDecomposition::new(vec![Box::new(|_: &[f64]| 0.0)], &basis).unwrap();
        for y in [[0.0], [1.0], [-2.5]] {
            assert_eq!(dec.eval(&y), vec![0.0]);
        }
    }

    #[test]
    fn schwartz_c2_sign_worked_example() {
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        let g1: BallFn = Box::new(|u: &[f64]| (1.0 - norm_sq(u)).powi(3));
        let dec = SchwartzDecomposition::new(vec![g1], &basis).unwrap();
        let mut rng = SplitMix64::new(5);
        for _ in 0..100 {
            let y = 10.0 * rng.next_signed_f64();
            // closed form: (1+y²)^{-1/2} (1/(1+y²))³ · y
            let expected = (1.0 + y * y).powf(-0.5) * (1.0 + y * y).powi(-3) * y;
            let got = dec.eval(&[y])[0];
            assert!((got - expected).abs() < 1e-12);
            // covariance: f(-y) = -f(y)
            let neg = dec.eval(&[-y])[0];
            assert!((neg + got).abs() < 1e-12);
        }
        let residual = dec
            .covariance_residual(&rep, &[vec![0.3], vec![-1.7], vec![42.0]])
            .unwrap();
        assert!(residual < 1e-12);
    }

    #[test]
    fn homogeneity_identity_of_generators() {
        // Pᵢ(ψ(y)) = (1+‖y‖²)^{−sᵢ/2} Pᵢ(y)
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        let mut rng = SplitMix64::new(17);
        for _ in 0..100 {
            let y = vec![20.0 * rng.next_signed_f64()];
            for i in 0..basis.len() {
                let s = basis.degree(i) as f64;
                let lhs = basis.generator(i).eval_f64(&psi(&y));
                let scale = (1.0 + norm_sq(&y)).powf(-s / 2.0);
                let rhs: Vec<f64> = basis
                    .generator(i)
                    .eval_f64(&y)
                    .iter()
                    .map(|v| v * scale)
                    .collect();
                for (a, b) in lhs.iter().zip(&rhs) {
                    assert!((a - b).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn equivariance_for_orthogonal_group() {
        let rep = c2_sign();
        let mut rng = SplitMix64::new(23);
        let points: Vec<Vec<f64>> = (0..50).map(|_| vec![0.9 * rng.next_signed_f64()]).collect();
        let res = equivariance_residual(&rep, &points, 1e-12).unwrap();
        assert!(res < 1e-12);
    }

    #[test]
    fn non_orthogonal_group_refused() {
        let shear_like = FiniteGroupRep::close(
            2,
            1,
            &[DenseMatrix::from_i64(2, 2, &[1, 1, 0, -1]).unwrap()],
            &[DenseMatrix::from_i64(1, 1, &[1]).unwrap()],
            10,
        )
        .unwrap();
        assert_eq!(require_orthogonal(&shear_like), Err(Error::NotOrthogonal));
        assert!(equivariance_residual(&shear_like, &[vec![0.1, 0.1]], 1e-9).is_err());
    }

    #[test]
    fn schwartz_decay_bound() {
        // (1+‖y‖²)^m ‖f(y)‖ stays bounded for m ≤ 3 when g vanishes to high
        // order at the boundary
        let rep = c2_sign();
        let inv = invariant_generators(&rep, 2).unwrap();
        let basis = covariant_generators(&rep, &inv, 2).unwrap();
        let g1: BallFn = Box::new(|u: &[f64]| (1.0 - norm_sq(u)).powi(4));
        let dec = SchwartzDecomposition::new(vec![g1], &basis).unwrap();
        let mut rng = SplitMix64::new(31);
        for m in 0..=3 {
            let mut sup = 0.0f64;
            for _ in 0..200 {
                let y = vec![1000.0 * rng.next_signed_f64()];
                let w = (1.0 + norm_sq(&y)).powi(m);
                sup = sup.max(w * norm(&dec.eval(&y)));
            }
            assert!(sup.is_finite());
            assert!(sup < 10.0, "m={m} sup={sup}");
        }
    }
}
