//! Exact calculus of point-supported vector-valued distributions.
//!
//! A distribution is a finite formal sum of weighted derivative-of-delta
//! terms. Test functions are polynomials: point-supported distributions of
//! bounded order are determined by polynomial pairings, so the whole calculus
//! stays inside exact rational arithmetic.
//!
//! The derivative-pairing sign convention is fixed globally as
//! `⟨∂^α δ_x ⊗ v, f⟩ = (−1)^{|α|} (D^α ⟨f, v⟩)(x)` and is pinned by the
//! adjointness property `pair(act(g,T), f) = pair(T, g·f)` in the tests.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generators::CovariantBasis;
use crate::group::FiniteGroupRep;
use crate::matrix::{solve_linear, DenseMatrix};
use crate::poly::{Monomial, ScalarPolynomial, VectorPolynomial};
use crate::scalar::{self, Rat};

/// Extra derivative-order headroom tried by `decompose_dist` beyond the
/// initial bound `order(T) + max sᵢ`.
pub const DEFAULT_ORDER_SLACK: usize = 3;

/// The fixed sign of the pairing convention: `(−1)^order`.
pub fn pairing_sign(order: usize) -> Rat {
    if order % 2 == 0 {
        Rat::one()
    } else {
        -Rat::one()
    }
}

type TermKey = (Vec<Rat>, Monomial);

/// Finite formal sum of vector-weighted derivative-of-delta terms, kept
/// normalized: duplicate `(location, multi_index)` merged, zero weights
/// dropped, terms ordered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointDistribution {
    n_vars: usize,
    dim: usize,
    terms: BTreeMap<TermKey, Vec<Rat>>,
}

impl PointDistribution {
    pub fn zero(n_vars: usize, dim: usize) -> Self {
        Self {
            n_vars,
            dim,
            terms: BTreeMap::new(),
        }
    }

    /// Single term `∂^α δ_loc ⊗ weight`.
    pub fn delta_derivative(location: Vec<Rat>, alpha: Monomial, weight: Vec<Rat>) -> Result<Self> {
        if location.len() != alpha.n_vars() {
            return Err(Error::DimensionMismatch(format!(
                "location has dimension {} but multi-index has {}",
                location.len(),
                alpha.n_vars()
            )));
        }
        let mut d = Self::zero(location.len(), weight.len());
        d.add_term(location, alpha, weight)?;
        Ok(d)
    }

    /// Plain delta `δ_loc ⊗ weight`.
    pub fn delta(location: Vec<Rat>, weight: Vec<Rat>) -> Result<Self> {
        let alpha = Monomial::constant(location.len());
        Self::delta_derivative(location, alpha, weight)
    }

    pub fn add_term(
        &mut self,
        location: Vec<Rat>,
        alpha: Monomial,
        weight: Vec<Rat>,
    ) -> Result<()> {
        if location.len() != self.n_vars || alpha.n_vars() != self.n_vars {
            return Err(Error::DimensionMismatch(
                "term dimension disagrees with distribution".into(),
            ));
        }
        if weight.len() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "weight has {} components, expected {}",
                weight.len(),
                self.dim
            )));
        }
        let key = (location, alpha);
        let entry = self
            .terms
            .entry(key.clone())
            .or_insert_with(|| vec![Rat::zero(); self.dim]);
        for (e, w) in entry.iter_mut().zip(weight) {
            *e += w;
        }
        if entry.iter().all(|c| c.is_zero()) {
            self.terms.remove(&key);
        }
        Ok(())
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Max derivative order across terms; zero for the empty sum.
    pub fn order(&self) -> usize {
        self.terms
            .keys()
            .map(|(_, a)| a.degree())
            .max()
            .unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<Rat>, &Monomial, &Vec<Rat>)> {
        self.terms.iter().map(|((loc, a), w)| (loc, a, w))
    }

    pub fn coefficient(&self, location: &[Rat], alpha: &Monomial, comp: usize) -> Rat {
        self.terms
            .get(&(location.to_vec(), alpha.clone()))
            .map(|w| w[comp].clone())
            .unwrap_or_else(Rat::zero)
    }

    /// Distinct term locations, in normalized order.
    pub fn support(&self) -> Vec<Vec<Rat>> {
        let mut out: Vec<Vec<Rat>> = Vec::new();
        for (loc, _) in self.terms.keys() {
            if out.last() != Some(loc) {
                out.push(loc.clone());
            }
        }
        out.dedup();
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars, self.dim);
        }
        Self {
            n_vars: self.n_vars,
            dim: self.dim,
            terms: self
                .terms
                .iter()
                .map(|(k, w)| (k.clone(), w.iter().map(|v| v * c).collect()))
                .collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n_vars != other.n_vars || self.dim != other.dim {
            return Err(Error::DimensionMismatch(
                "adding distributions of different shape".into(),
            ));
        }
        let mut out = self.clone();
        for ((loc, a), w) in &other.terms {
            out.add_term(loc.clone(), a.clone(), w.clone())?;
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-Rat::one()))
    }
}

/// `⟨T, f⟩` for a polynomial test function with matching value dimension.
pub fn pair(t: &PointDistribution, f: &VectorPolynomial) -> Result<Rat> {
    if f.n_vars() != t.n_vars() || f.dim() != t.dim() {
        return Err(Error::DimensionMismatch(format!(
            "pairing distribution (n={}, d={}) with polynomial (n={}, d={})",
            t.n_vars(),
            t.dim(),
            f.n_vars(),
            f.dim()
        )));
    }
    let mut acc = Rat::zero();
    for (loc, alpha, weight) in t.terms() {
        // ⟨f, w⟩ as a scalar polynomial
        let mut fw = ScalarPolynomial::zero(t.n_vars());
        for (comp, w) in weight.iter().enumerate() {
            if !w.is_zero() {
                fw = fw.add(&f.component(comp).scale(w));
            }
        }
        let value = fw.derivative_multi(alpha).eval(loc)?;
        acc += pairing_sign(alpha.degree()) * value;
    }
    Ok(acc)
}

/// Scalar pairing `⟨θ, h⟩` for a scalar distribution.
pub fn pair_scalar(theta: &PointDistribution, h: &ScalarPolynomial) -> Result<Rat> {
    if theta.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "scalar pairing requires a scalar distribution".into(),
        ));
    }
    pair(theta, &VectorPolynomial::from_scalar(h.clone()))
}

/// Operator polynomial of the linear chain rule: expanding
/// `D^α (h ∘ A)` over derivatives of `h` evaluated at `A x`. Encoded as a
/// scalar polynomial whose variables stand for the partial-derivative
/// operators.
fn chain_rule_operator(a: &DenseMatrix, alpha: &Monomial) -> ScalarPolynomial {
    let n = a.rows();
    let mut op = ScalarPolynomial::one(n);
    for (j, &e) in alpha.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        let mut form = ScalarPolynomial::zero(n);
        for i in 0..n {
            let c = a.at(i, j);
            if !c.is_zero() {
                form.add_term(Monomial::var(n, i), c.clone());
            }
        }
        op = op.mul(&form.pow(e));
    }
    op
}

fn act_with_rho(
    g: usize,
    t: &PointDistribution,
    rep: &FiniteGroupRep,
    rho_inv_t: Option<&DenseMatrix>,
) -> Result<PointDistribution> {
    let a = rep.source(g);
    let mut out = PointDistribution::zero(t.n_vars(), t.dim());
    for (loc, alpha, weight) in t.terms() {
        let new_loc = a.mul_vec(loc)?;
        let new_weight = match rho_inv_t {
            Some(m) => m.mul_vec(weight)?,
            None => weight.clone(),
        };
        for (beta, c) in chain_rule_operator(a, alpha).terms() {
            let w: Vec<Rat> = new_weight.iter().map(|v| v * c).collect();
            out.add_term(new_loc.clone(), beta.clone(), w)?;
        }
    }
    Ok(out)
}

/// Pushforward of a vector distribution: the unique `act(g,T)` with
/// `⟨act(g,T), f⟩ = ⟨T, g·f⟩` for every polynomial `f`.
pub fn act(g: usize, t: &PointDistribution, rep: &FiniteGroupRep) -> Result<PointDistribution> {
    if t.n_vars() != rep.n() || t.dim() != rep.d() {
        return Err(Error::DimensionMismatch(format!(
            "distribution (n={}, d={}) under group with n={}, d={}",
            t.n_vars(),
            t.dim(),
            rep.n(),
            rep.d()
        )));
    }
    let rho_inv_t = rep.rho_inv(g).transpose();
    act_with_rho(g, t, rep, Some(&rho_inv_t))
}

/// Pushforward of a scalar distribution under the source action alone:
/// `⟨act_scalar(g,θ), φ⟩ = ⟨θ, φ∘g⟩`.
pub fn act_scalar(
    g: usize,
    t: &PointDistribution,
    rep: &FiniteGroupRep,
) -> Result<PointDistribution> {
    if t.n_vars() != rep.n() || t.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "scalar action requires a scalar distribution on the group's source space".into(),
        ));
    }
    act_with_rho(g, t, rep, None)
}

/// Exact covariance: `act(g,T) = T` for every group element.
pub fn is_covariant_dist(t: &PointDistribution, rep: &FiniteGroupRep) -> Result<bool> {
    for g in 0..rep.order() {
        if &act(g, t, rep)? != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact invariance of a scalar distribution.
pub fn is_invariant_dist(t: &PointDistribution, rep: &FiniteGroupRep) -> Result<bool> {
    for g in 0..rep.order() {
        if &act_scalar(g, t, rep)? != t {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Group average `(1/|G|) Σ_g act(g, T)`: projects onto covariant
/// distributions and fixes covariant inputs.
pub fn reynolds_dist(t: &PointDistribution, rep: &FiniteGroupRep) -> Result<PointDistribution> {
    let mut acc = PointDistribution::zero(t.n_vars(), t.dim());
    for g in 0..rep.order() {
        acc = acc.add(&act(g, t, rep)?)?;
    }
    Ok(acc.scale(&rep.haar_weight()))
}

/// Scalar variant: `(1/|G|) Σ_g act_scalar(g, θ)`, projecting onto invariant
/// scalar distributions.
pub fn reynolds_dist_scalar(
    t: &PointDistribution,
    rep: &FiniteGroupRep,
) -> Result<PointDistribution> {
    let mut acc = PointDistribution::zero(t.n_vars(), 1);
    for g in 0..rep.order() {
        acc = acc.add(&act_scalar(g, t, rep)?)?;
    }
    Ok(acc.scale(&rep.haar_weight()))
}

fn multi_binomial(alpha: &Monomial, beta: &Monomial) -> Rat {
    let mut acc = BigInt::one();
    for (&a, &b) in alpha.0.iter().zip(&beta.0) {
        let mut c = BigInt::one();
        for i in 0..b {
            c = c * BigInt::from(a - i) / BigInt::from(i + 1);
        }
        acc *= c;
    }
    Rat::from_integer(acc)
}

/// All multi-indices `β ≤ α` componentwise.
fn lower_multi_indices(alpha: &Monomial) -> Vec<Monomial> {
    let mut out = vec![Monomial::constant(alpha.n_vars())];
    for (i, &e) in alpha.0.iter().enumerate() {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for b in out {
            for v in 0..=e {
                let mut nb = b.clone();
                nb.0[i] = v;
                next.push(nb);
            }
        }
        out = next;
    }
    out
}

/// Product of a scalar distribution with a vector polynomial: the unique
/// distribution with `⟨θ h, f⟩ = ⟨θ, ⟨f, h⟩⟩`, computed by the Leibniz rule.
pub fn multiply(theta: &PointDistribution, p: &VectorPolynomial) -> Result<PointDistribution> {
    if theta.dim() != 1 {
        return Err(Error::DimensionMismatch(
            "multiply requires a scalar distribution".into(),
        ));
    }
    if theta.n_vars() != p.n_vars() {
        return Err(Error::DimensionMismatch(format!(
            "distribution on {} variables times polynomial in {}",
            theta.n_vars(),
            p.n_vars()
        )));
    }
    let mut out = PointDistribution::zero(theta.n_vars(), p.dim());
    for (loc, alpha, weight) in theta.terms() {
        let w = &weight[0];
        for beta in lower_multi_indices(alpha) {
            let gamma = alpha.sub(&beta);
            let sign = pairing_sign(gamma.degree());
            let coeff = sign * multi_binomial(alpha, &beta) * w;
            let mut value = Vec::with_capacity(p.dim());
            for comp in 0..p.dim() {
                value.push(p.component(comp).derivative_multi(&gamma).eval(loc)?);
            }
            let wvec: Vec<Rat> = value.iter().map(|v| v * &coeff).collect();
            out.add_term(loc.clone(), beta, wvec)?;
        }
    }
    Ok(out)
}

/// Canonical orbit representative: the lexicographically smallest image.
fn orbit_representative(rep: &FiniteGroupRep, x: &[Rat]) -> Result<Vec<Rat>> {
    let orbit = rep.orbit(x)?;
    Ok(orbit
        .into_iter()
        .min()
        .expect("orbit of a point is nonempty"))
}

/// Decompose a covariant point distribution as `Σ θᵢ Pᵢ` with invariant
/// scalar `θᵢ`.
///
/// Candidates are Reynolds-symmetrized derivative-delta terms on the orbit of
/// `supp(T) ∪ {0}`; the derivative-order bound starts at
/// `order(T) + max sᵢ` and grows by up to `order_slack` single steps. The
/// returned family reassembles to `T` exactly (verified before returning).
pub fn decompose_dist(
    t: &PointDistribution,
    basis: &CovariantBasis,
    rep: &FiniteGroupRep,
    order_slack: usize,
) -> Result<Vec<PointDistribution>> {
    let n = rep.n();
    let k = basis.len();
    if t.is_zero() {
        return Ok(vec![PointDistribution::zero(n, 1); k]);
    }
    if t.n_vars() != rep.n() || t.dim() != rep.d() {
        return Err(Error::DimensionMismatch(format!(
            "distribution (n={}, d={}) under group with n={}, d={}",
            t.n_vars(),
            t.dim(),
            rep.n(),
            rep.d()
        )));
    }
    if !is_covariant_dist(t, rep)? {
        return Err(Error::NotCovariant);
    }

    // orbit representatives of supp(T), plus the origin
    let mut reps: Vec<Vec<Rat>> = vec![vec![Rat::zero(); n]];
    for loc in t.support() {
        let r = orbit_representative(rep, &loc)?;
        if !reps.contains(&r) {
            reps.push(r);
        }
    }
    reps.sort();

    let max_s = basis.degrees().iter().copied().max().unwrap_or(0);
    let base_order = t.order() + max_s;

    for slack in 0..=order_slack {
        let bound = base_order + slack;
        // symmetrized candidates, deduplicated
        let mut candidates: Vec<PointDistribution> = Vec::new();
        for r in &reps {
            for alpha in Monomial::all_up_to_degree(n, bound) {
                let seed = PointDistribution::delta_derivative(r.clone(), alpha, vec![Rat::one()])?;
                let sym = reynolds_dist_scalar(&seed, rep)?;
                if !sym.is_zero() && !candidates.contains(&sym) {
                    candidates.push(sym);
                }
            }
        }
        if candidates.is_empty() {
            continue;
        }
        // products candidate × generator, indexed by unknown
        let mut products: Vec<PointDistribution> = Vec::new();
        let mut tags: Vec<(usize, usize)> = Vec::new(); // (candidate, generator)
        for (j, cand) in candidates.iter().enumerate() {
            for i in 0..k {
                products.push(multiply(cand, basis.generator(i))?);
                tags.push((j, i));
            }
        }

        // coefficient-matching equations at orbit representatives: for
        // covariant sums this pins the whole distribution
        let rep_keys = |d: &PointDistribution| -> Vec<(Vec<Rat>, Monomial, usize)> {
            let mut keys = Vec::new();
            for (loc, alpha, w) in d.terms() {
                if !reps.contains(loc) {
                    continue;
                }
                for (comp, c) in w.iter().enumerate() {
                    if !c.is_zero() {
                        keys.push((loc.clone(), alpha.clone(), comp));
                    }
                }
            }
            keys
        };
        let mut keys: Vec<(Vec<Rat>, Monomial, usize)> = Vec::new();
        for d in products.iter().chain(std::iter::once(t)) {
            for key in rep_keys(d) {
                if !keys.contains(&key) {
                    keys.push(key);
                }
            }
        }
        keys.sort();

        let solve_with = |keys: &[(Vec<Rat>, Monomial, usize)]| -> Result<Option<Vec<Rat>>> {
            let mut a = DenseMatrix::zero(keys.len(), products.len());
            for (row, (loc, alpha, comp)) in keys.iter().enumerate() {
                for (col, prod) in products.iter().enumerate() {
                    let c = prod.coefficient(loc, alpha, *comp);
                    if !c.is_zero() {
                        *a.at_mut(row, col) = c;
                    }
                }
            }
            let rhs: Vec<Rat> = keys
                .iter()
                .map(|(loc, alpha, comp)| t.coefficient(loc, alpha, *comp))
                .collect();
            Ok(solve_linear(&a, &rhs)?.particular)
        };

        let assemble = |x: &[Rat]| -> Result<Vec<PointDistribution>> {
            let mut thetas = vec![PointDistribution::zero(n, 1); k];
            for (c, (j, i)) in x.iter().zip(&tags) {
                if !c.is_zero() {
                    thetas[*i] = thetas[*i].add(&candidates[*j].scale(c))?;
                }
            }
            Ok(thetas)
        };

        let reassembles = |thetas: &[PointDistribution]| -> Result<bool> {
            let mut acc = PointDistribution::zero(n, rep.d());
            for (theta, i) in thetas.iter().zip(0..k) {
                acc = acc.add(&multiply(theta, basis.generator(i))?)?;
            }
            Ok(&acc == t)
        };

        if let Some(x) = solve_with(&keys)? {
            let thetas = assemble(&x)?;
            if reassembles(&thetas)? {
                return Ok(thetas);
            }
            // representative equations were not sufficient (possible for
            // non-orthogonal rho); fall back to matching every coordinate
            let mut full_keys: Vec<(Vec<Rat>, Monomial, usize)> = Vec::new();
            for d in products.iter().chain(std::iter::once(t)) {
                for (loc, alpha, w) in d.terms() {
                    for (comp, c) in w.iter().enumerate() {
                        if !c.is_zero() {
                            let key = (loc.clone(), alpha.clone(), comp);
                            if !full_keys.contains(&key) {
                                full_keys.push(key);
                            }
                        }
                    }
                }
            }
            full_keys.sort();
            if let Some(x) = solve_with(&full_keys)? {
                let thetas = assemble(&x)?;
                if reassembles(&thetas)? {
                    return Ok(thetas);
                }
            }
        }
    }

    Err(Error::NoSolutionAtOrder {
        order: base_order + order_slack,
    })
}

// ---------------------------------------------------------------------------
// Distribution file format: rational strings, bit-exact round-trip.
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistTermSpec {
    pub location: Vec<String>,
    pub multi_index: Vec<u32>,
    pub weight: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistSpec {
    pub n: usize,
    pub dim: usize,
    pub terms: Vec<DistTermSpec>,
}

impl DistSpec {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("distribution file: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("distribution spec serializes")
    }

    pub fn to_distribution(&self) -> Result<PointDistribution> {
        let mut d = PointDistribution::zero(self.n, self.dim);
        for term in &self.terms {
            if term.multi_index.len() != self.n {
                return Err(Error::Parse(format!(
                    "multi-index {:?} does not have {} entries",
                    term.multi_index, self.n
                )));
            }
            let loc = term
                .location
                .iter()
                .map(|s| scalar::parse_rat(s))
                .collect::<Result<Vec<_>>>()?;
            let weight = term
                .weight
                .iter()
                .map(|s| scalar::parse_rat(s))
                .collect::<Result<Vec<_>>>()?;
            d.add_term(loc, Monomial(term.multi_index.clone()), weight)?;
        }
        Ok(d)
    }

    pub fn from_distribution(d: &PointDistribution) -> Self {
        Self {
            n: d.n_vars(),
            dim: d.dim(),
            terms: d
                .terms()
                .map(|(loc, alpha, w)| DistTermSpec {
                    location: loc.iter().map(scalar::format_rat).collect(),
                    multi_index: alpha.0.clone(),
                    weight: w.iter().map(scalar::format_rat).collect(),
                })
                .collect(),
        }
    }
}
