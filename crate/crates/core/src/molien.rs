//! Exact dimension counting of invariant and covariant spaces per degree.
//!
//! The Molien series is assembled by common-denominator rational-function
//! arithmetic over ℚ[t] (per-element determinants via fraction-free
//! elimination) and expanded by exact power-series division. The brute-force
//! rank of Reynolds images provides an independent oracle; agreement of the
//! two routes is the module's central cross-check.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroupRep;
use crate::matrix::DenseMatrix;
use crate::poly::{Monomial, VectorPolynomial};
use crate::reynolds;
use crate::scalar::{self, Rat};

/// Dense univariate polynomial in `t`, ascending coefficients, no trailing
/// zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UniPoly(Vec<Rat>);

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly(Vec::new())
    }

    pub fn one() -> Self {
        UniPoly(vec![Rat::one()])
    }

    pub fn constant(c: Rat) -> Self {
        let mut p = UniPoly(vec![c]);
        p.trim();
        p
    }

    pub fn from_coeffs(coeffs: Vec<Rat>) -> Self {
        let mut p = UniPoly(coeffs);
        p.trim();
        p
    }

    fn trim(&mut self) {
        while matches!(self.0.last(), Some(c) if c.is_zero()) {
            self.0.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.0.is_empty() {
            None
        } else {
            Some(self.0.len() - 1)
        }
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = vec![Rat::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] += c;
        }
        Self::from_coeffs(out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = vec![Rat::zero(); self.0.len().max(other.0.len())];
        for (i, c) in self.0.iter().enumerate() {
            out[i] += c;
        }
        for (i, c) in other.0.iter().enumerate() {
            out[i] -= c;
        }
        Self::from_coeffs(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self::from_coeffs(self.0.iter().map(|v| v * c).collect())
    }

    /// Exact division; panics if the division leaves a remainder. Used only
    /// inside fraction-free elimination, where exactness is an invariant.
    fn exact_div(&self, divisor: &Self) -> Self {
        assert!(!divisor.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let mut rem = self.0.clone();
        let dd = divisor.0.len() - 1;
        let lead = divisor.0.last().unwrap();
        if rem.len() < divisor.0.len() {
            panic!("inexact polynomial division in fraction-free elimination");
        }
        let mut quot = vec![Rat::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / lead;
            if !c.is_zero() {
                for (j, dc) in divisor.0.iter().enumerate() {
                    let sub = dc * &c;
                    rem[k + j] -= sub;
                }
            }
            quot[k] = c;
        }
        assert!(
            rem.iter().all(|c| c.is_zero()),
            "inexact polynomial division in fraction-free elimination"
        );
        Self::from_coeffs(quot)
    }

    /// Power-series inverse to the requested order; constant term must be
    /// nonzero.
    pub fn series_inverse(&self, order: usize) -> Result<Vec<Rat>> {
        let b0 = self.coeff(0);
        if b0.is_zero() {
            return Err(Error::Parse(
                "series inversion requires nonzero constant term".into(),
            ));
        }
        let mut inv = vec![Rat::zero(); order + 1];
        inv[0] = b0.recip();
        for k in 1..=order {
            let mut acc = Rat::zero();
            for j in 1..=k {
                let bj = self.coeff(j);
                if !bj.is_zero() {
                    acc += bj * &inv[k - j];
                }
            }
            inv[k] = -acc / &b0;
        }
        Ok(inv)
    }

    /// Render as a polynomial in the named variable, highest degree last.
    pub fn render(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    out.push('-');
                }
                first = false;
            } else if c.is_negative() {
                out.push_str(" - ");
            } else {
                out.push_str(" + ");
            }
            let body = match k {
                0 => scalar::format_rat(&mag),
                1 if mag.is_one() => var.to_string(),
                1 => format!("{}*{var}", scalar::format_rat(&mag)),
                _ if mag.is_one() => format!("{var}^{k}"),
                _ => format!("{}*{var}^{k}", scalar::format_rat(&mag)),
            };
            out.push_str(&body);
        }
        out
    }
}

/// Determinant over ℚ[t] by Bareiss fraction-free elimination.
fn det_bareiss(mut m: Vec<Vec<UniPoly>>) -> UniPoly {
    let n = m.len();
    if n == 0 {
        return UniPoly::one();
    }
    let mut negate = false;
    let mut prev = UniPoly::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return UniPoly::zero();
            };
            m.swap(k, r);
            negate = !negate;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[k][k].mul(&m[i][j]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.exact_div(&prev);
            }
            m[i][k] = UniPoly::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if negate {
        det.neg()
    } else {
        det
    }
}

/// `det(I − t·g)` as a univariate polynomial.
fn det_one_minus_tg(g: &DenseMatrix) -> UniPoly {
    let n = g.rows();
    let m: Vec<Vec<UniPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let c0 = if i == j { Rat::one() } else { Rat::zero() };
                    UniPoly::from_coeffs(vec![c0, -g.at(i, j).clone()])
                })
                .collect()
        })
        .collect();
    det_bareiss(m)
}

/// Closed-form rational series with its exact expansion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalSeries {
    pub numerator: UniPoly,
    pub denominator: UniPoly,
    pub expansion: Vec<Rat>,
}

impl RationalSeries {
    /// Coefficient of `t^m` in the expansion.
    pub fn coefficient(&self, m: usize) -> Rat {
        self.expansion.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Coefficients as usize; errors if any coefficient is not a non-negative
    /// integer (which would signal an internal bug for a Molien series).
    pub fn coefficients_usize(&self) -> Result<Vec<usize>> {
        self.expansion
            .iter()
            .map(|c| {
                if c.is_integer() && !c.is_negative() {
                    usize::try_from(c.to_integer())
                        .map_err(|_| Error::Parse("coefficient out of range".into()))
                } else {
                    Err(Error::Parse(format!(
                        "Molien coefficient {} is not a non-negative integer",
                        scalar::format_rat(c)
                    )))
                }
            })
            .collect()
    }
}

fn molien_series(rep: &FiniteGroupRep, order: usize, traces: &[Rat]) -> RationalSeries {
    let dets: Vec<UniPoly> = (0..rep.order())
        .map(|g| det_one_minus_tg(rep.source(g)))
        .collect();
    let count = dets.len();
    // prefix/suffix products to build Σ_g trace_g · Π_{h≠g} det_h
    let mut prefix = vec![UniPoly::one(); count + 1];
    for i in 0..count {
        prefix[i + 1] = prefix[i].mul(&dets[i]);
    }
    let mut suffix = vec![UniPoly::one(); count + 1];
    for i in (0..count).rev() {
        suffix[i] = suffix[i + 1].mul(&dets[i]);
    }
    let mut numerator = UniPoly::zero();
    for g in 0..count {
        if traces[g].is_zero() {
            continue;
        }
        let others = prefix[g].mul(&suffix[g + 1]);
        numerator = numerator.add(&others.scale(&traces[g]));
    }
    let mut denominator = prefix[count].scale(&Rat::from_integer((count as i64).into()));

    // cosmetic content normalization so the constant term of the denominator
    // is one (the series itself is unchanged)
    let c = denominator.coeff(0);
    if !c.is_zero() && !c.is_one() {
        let inv = c.recip();
        numerator = numerator.scale(&inv);
        denominator = denominator.scale(&inv);
    }

    let expansion = if numerator.is_zero() {
        vec![Rat::zero(); order + 1]
    } else {
        let inv_den = denominator
            .series_inverse(order)
            .expect("denominator has nonzero constant term");
        (0..=order)
            .map(|m| {
                let mut acc = Rat::zero();
                for k in 0..=m {
                    let nk = numerator.coeff(k);
                    if !nk.is_zero() {
                        acc += nk * &inv_den[m - k];
                    }
                }
                acc
            })
            .collect()
    };

    RationalSeries {
        numerator,
        denominator,
        expansion,
    }
}

/// Molien series of the invariant ring: coefficient of `t^m` is the dimension
/// of the degree-`m` invariants.
pub fn molien_invariant(rep: &FiniteGroupRep, order: usize) -> RationalSeries {
    let traces = vec![Rat::one(); rep.order()];
    molien_series(rep, order, &traces)
}

/// Equivariant Molien series: coefficient of `t^m` is the dimension of the
/// degree-`m` covariants of type rho.
pub fn molien_covariant(rep: &FiniteGroupRep, order: usize) -> RationalSeries {
    let traces: Vec<Rat> = (0..rep.order())
        .map(|g| {
            let rho_inv = rep.rho_inv(g);
            (0..rep.d()).map(|i| rho_inv.at(i, i).clone()).sum()
        })
        .collect();
    molien_series(rep, order, &traces)
}

/// Which space a brute-force dimension count targets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Invariant,
    Covariant,
}

/// Independent oracle: the exact rank of the span of Reynolds images of all
/// degree-`m` monomials (tensored with value-space basis vectors in the
/// covariant case).
pub fn dimension_bruteforce(rep: &FiniteGroupRep, m: usize, kind: SpaceKind) -> Result<usize> {
    let monomials = Monomial::all_of_degree(rep.n(), m);
    let images: Vec<VectorPolynomial> = match kind {
        SpaceKind::Invariant => monomials
            .iter()
            .map(|mon| {
                let p = crate::poly::ScalarPolynomial::monomial(rep.n(), mon.clone(), Rat::one());
                reynolds::invariant_average(&p, rep).map(VectorPolynomial::from_scalar)
            })
            .collect::<Result<_>>()?,
        SpaceKind::Covariant => {
            let mut out = Vec::new();
            for mon in &monomials {
                for comp in 0..rep.d() {
                    let cand =
                        VectorPolynomial::monomial_times_basis(rep.n(), rep.d(), mon.clone(), comp);
                    out.push(reynolds::covariant_average(&cand, rep)?);
                }
            }
            out
        }
    };

    let dim = match kind {
        SpaceKind::Invariant => 1,
        SpaceKind::Covariant => rep.d(),
    };
    let cols = monomials.len() * dim;
    let col_index = |mono_idx: usize, comp: usize| mono_idx * dim + comp;
    let mut rows = Vec::new();
    for img in &images {
        if img.is_zero() {
            continue;
        }
        let mut row = vec![Rat::zero(); cols];
        for comp in 0..img.dim() {
            for (mono, c) in img.component(comp).terms() {
                let idx = monomials
                    .iter()
                    .position(|m2| m2 == mono)
                    .expect("averaging preserves homogeneous degree");
                row[col_index(idx, comp)] = c.clone();
            }
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(0);
    }
    let flat: Vec<Rat> = rows.concat();
    let mut mat = DenseMatrix::new(rows.len(), cols, flat)?;
    let (rank, _) = mat.rref();
    Ok(rank)
}
