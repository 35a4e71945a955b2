//! Sparse multivariate polynomials with exact rational coefficients.
//!
//! Scalar polynomials are maps from monomials to coefficients; vector-valued
//! polynomials are component tuples sharing one ambient dimension. Monomials
//! are ordered graded-lexicographically (total degree first, then exponent
//! tuples with earlier variables dominating), which fixes term order in every
//! serialized report. Monomials double as derivative multi-indices.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroupRep;
use crate::matrix::DenseMatrix;
use crate::scalar::{self, Rat};

/// Exponent tuple; length equals the ambient dimension.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn constant(n_vars: usize) -> Self {
        Monomial(vec![0; n_vars])
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut e = vec![0; n_vars];
        e[idx] = 1;
        Monomial(e)
    }

    pub fn n_vars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise `≤`, the partial order used by the Leibniz rule.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn sub(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }

    /// All monomials in `n_vars` variables of total degree exactly `degree`,
    /// in descending graded-lex order.
    pub fn all_of_degree(n_vars: usize, degree: usize) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut current = vec![0u32; n_vars];
        fn rec(out: &mut Vec<Monomial>, current: &mut Vec<u32>, pos: usize, left: usize) {
            if pos + 1 == current.len() {
                current[pos] = left as u32;
                out.push(Monomial(current.clone()));
                return;
            }
            for e in (0..=left).rev() {
                current[pos] = e as u32;
                rec(out, current, pos + 1, left - e);
            }
        }
        if n_vars == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        rec(&mut out, &mut current, 0, degree);
        out
    }

    /// All monomials of total degree at most `degree`, ascending by degree.
    pub fn all_up_to_degree(n_vars: usize, degree: usize) -> Vec<Monomial> {
        (0..=degree)
            .flat_map(|d| Self::all_of_degree(n_vars, d))
            .collect()
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Sparse scalar polynomial; zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarPolynomial {
    n_vars: usize,
    terms: BTreeMap<Monomial, Rat>,
}

impl ScalarPolynomial {
    pub fn zero(n_vars: usize) -> Self {
        Self {
            n_vars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Rat) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::constant(n_vars), c);
        p
    }

    pub fn one(n_vars: usize) -> Self {
        Self::constant(n_vars, Rat::one())
    }

    pub fn var(n_vars: usize, idx: usize) -> Self {
        let mut p = Self::zero(n_vars);
        p.add_term(Monomial::var(n_vars, idx), Rat::one());
        p
    }

    pub fn monomial(n_vars: usize, m: Monomial, c: Rat) -> Self {
        debug_assert_eq!(m.n_vars(), n_vars);
        let mut p = Self::zero(n_vars);
        p.add_term(m, c);
        p
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.degree()).max()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Self {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars);
        }
        Self {
            n_vars: self.n_vars,
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut result = Self::one(self.n_vars);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Exact evaluation at a rational point.
    pub fn eval(&self, x: &[Rat]) -> Result<Rat> {
        if x.len() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables evaluated at point of dimension {}",
                self.n_vars,
                x.len()
            )));
        }
        let mut acc = Rat::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    term *= &x[i];
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Float evaluation, used by the compactification pipeline.
    pub fn eval_f64(&self, x: &[f64]) -> f64 {
        let mut acc = 0.0;
        for (m, c) in &self.terms {
            let mut term = scalar::to_f64(c);
            for (i, &e) in m.0.iter().enumerate() {
                term *= x[i].powi(e as i32);
            }
            acc += term;
        }
        acc
    }

    /// Substitute `x ↦ a·x`, fully expanded and normalized.
    pub fn compose_linear(&self, a: &DenseMatrix) -> Result<Self> {
        if a.rows() != self.n_vars || a.cols() != self.n_vars {
            return Err(Error::DimensionMismatch(format!(
                "polynomial in {} variables composed with {}x{} matrix",
                self.n_vars,
                a.rows(),
                a.cols()
            )));
        }
        // linear form substituted for each variable
        let forms: Vec<ScalarPolynomial> = (0..self.n_vars)
            .map(|i| {
                let mut f = ScalarPolynomial::zero(self.n_vars);
                for j in 0..self.n_vars {
                    f.add_term(Monomial::var(self.n_vars, j), a.at(i, j).clone());
                }
                f
            })
            .collect();
        // power tables up to the max exponent of each variable
        let mut max_exp = vec![0u32; self.n_vars];
        for m in self.terms.keys() {
            for (i, &e) in m.0.iter().enumerate() {
                max_exp[i] = max_exp[i].max(e);
            }
        }
        let powers: Vec<Vec<ScalarPolynomial>> = (0..self.n_vars)
            .map(|i| {
                let mut table = vec![ScalarPolynomial::one(self.n_vars)];
                for e in 1..=max_exp[i] {
                    let next = table[(e - 1) as usize].mul(&forms[i]);
                    table.push(next);
                }
                table
            })
            .collect();
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            let mut term = ScalarPolynomial::constant(self.n_vars, c.clone());
            for (i, &e) in m.0.iter().enumerate() {
                if e > 0 {
                    term = term.mul(&powers[i][e as usize]);
                }
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Terms of total degree exactly `m`.
    pub fn homogeneous_component(&self, m: usize) -> Self {
        Self {
            n_vars: self.n_vars,
            terms: self
                .terms
                .iter()
                .filter(|(mon, _)| mon.degree() == m)
                .map(|(mon, c)| (mon.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|m| m.degree());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Partial derivative with respect to variable `idx`.
    pub fn derivative(&self, idx: usize) -> Self {
        let mut out = Self::zero(self.n_vars);
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut lowered = m.clone();
            lowered.0[idx] -= 1;
            out.add_term(lowered, c * Rat::from_integer(e.into()));
        }
        out
    }

    /// Iterated partial derivative `D^α`.
    pub fn derivative_multi(&self, alpha: &Monomial) -> Self {
        let mut p = self.clone();
        for (i, &e) in alpha.0.iter().enumerate() {
            for _ in 0..e {
                p = p.derivative(i);
                if p.is_zero() {
                    return p;
                }
            }
        }
        p
    }
}

impl fmt::Display for ScalarPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_scalar(self))
    }
}

/// Vector-valued polynomial: one component per basis vector of the value space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorPolynomial {
    components: Vec<ScalarPolynomial>,
}

impl VectorPolynomial {
    pub fn new(components: Vec<ScalarPolynomial>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::DimensionMismatch(
                "vector polynomial needs at least one component".into(),
            ));
        }
        let n = components[0].n_vars();
        if components.iter().any(|c| c.n_vars() != n) {
            return Err(Error::DimensionMismatch(
                "vector polynomial components disagree on ambient dimension".into(),
            ));
        }
        Ok(Self { components })
    }

    pub fn zero(n_vars: usize, dim: usize) -> Self {
        Self {
            components: vec![ScalarPolynomial::zero(n_vars); dim],
        }
    }

    /// Monomial times a value-space basis vector.
    pub fn monomial_times_basis(n_vars: usize, dim: usize, m: Monomial, comp: usize) -> Self {
        let mut v = Self::zero(n_vars, dim);
        v.components[comp] = ScalarPolynomial::monomial(n_vars, m, Rat::one());
        v
    }

    pub fn from_scalar(p: ScalarPolynomial) -> Self {
        Self {
            components: vec![p],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn n_vars(&self) -> usize {
        self.components[0].n_vars()
    }

    pub fn component(&self, i: usize) -> &ScalarPolynomial {
        &self.components[i]
    }

    pub fn components(&self) -> &[ScalarPolynomial] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    pub fn degree(&self) -> Option<usize> {
        self.components.iter().filter_map(|c| c.degree()).max()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            components: self.components.iter().map(|p| p.scale(c)).collect(),
        }
    }

    /// Multiply every component by a scalar polynomial.
    pub fn mul_scalar_poly(&self, p: &ScalarPolynomial) -> Self {
        Self {
            components: self.components.iter().map(|c| c.mul(p)).collect(),
        }
    }

    /// Pointwise pairing `⟨f, h⟩(x) = Σ fᵢ(x)hᵢ(x)`.
    pub fn dot(&self, other: &Self) -> Result<ScalarPolynomial> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch(format!(
                "dot of vector polynomials with dims {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let mut acc = ScalarPolynomial::zero(self.n_vars());
        for (a, b) in self.components.iter().zip(&other.components) {
            acc = acc.add(&a.mul(b));
        }
        Ok(acc)
    }

    /// Apply a constant matrix to the component tuple: `(m·P)ᵢ = Σⱼ mᵢⱼ Pⱼ`.
    pub fn apply_matrix(&self, m: &DenseMatrix) -> Result<Self> {
        if m.cols() != self.dim() {
            return Err(Error::DimensionMismatch(format!(
                "matrix with {} columns applied to {}-component polynomial",
                m.cols(),
                self.dim()
            )));
        }
        let n = self.n_vars();
        let mut comps = vec![ScalarPolynomial::zero(n); m.rows()];
        for (i, comp) in comps.iter_mut().enumerate() {
            for j in 0..self.dim() {
                let c = m.at(i, j);
                if !c.is_zero() {
                    *comp = comp.add(&self.components[j].scale(c));
                }
            }
        }
        Ok(Self { components: comps })
    }

    /// Substitute `x ↦ a·x` in every component.
    pub fn compose_linear(&self, a: &DenseMatrix) -> Result<Self> {
        Ok(Self {
            components: self
                .components
                .iter()
                .map(|c| c.compose_linear(a))
                .collect::<Result<_>>()?,
        })
    }

    pub fn homogeneous_component(&self, m: usize) -> Self {
        Self {
            components: self
                .components
                .iter()
                .map(|c| c.homogeneous_component(m))
                .collect(),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.components.iter().filter_map(|c| c.degree());
        match degs.next() {
            None => true,
            Some(d) => {
                degs.all(|e| e == d)
                    && self
                        .components
                        .iter()
                        .all(|c| c.is_zero() || c.is_homogeneous())
            }
        }
    }

    pub fn eval(&self, x: &[Rat]) -> Result<Vec<Rat>> {
        self.components.iter().map(|c| c.eval(x)).collect()
    }

    pub fn eval_f64(&self, x: &[f64]) -> Vec<f64> {
        self.components.iter().map(|c| c.eval_f64(x)).collect()
    }
}

impl fmt::Display for VectorPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", render_vector(self))
    }
}

/// The group action on vector polynomials: `(g·P)(x) = ρ(g)⁻¹ P(g x)`.
pub fn covariant_action(
    g_index: usize,
    p: &VectorPolynomial,
    rep: &FiniteGroupRep,
) -> Result<VectorPolynomial> {
    if p.n_vars() != rep.n() || p.dim() != rep.d() {
        return Err(Error::DimensionMismatch(format!(
            "polynomial ({} vars, {} components) under group with n={}, d={}",
            p.n_vars(),
            p.dim(),
            rep.n(),
            rep.d()
        )));
    }
    let composed = p.compose_linear(rep.source(g_index))?;
    composed.apply_matrix(rep.rho_inv(g_index))
}

// ---------------------------------------------------------------------------
// Text grammar: "3*x0^2*x1 + 1/2*x2 - x0". Variables are x0, x1, ...; a bare
// `x` is accepted for x0. Vector polynomials are comma-separated component
// lists, optionally parenthesized.
// ---------------------------------------------------------------------------

fn render_monomial(m: &Monomial) -> String {
    let parts: Vec<String> =
        m.0.iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| {
                if e == 1 {
                    format!("x{i}")
                } else {
                    format!("x{i}^{e}")
                }
            })
            .collect();
    parts.join("*")
}

pub fn render_scalar(p: &ScalarPolynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    // highest-degree terms first
    for (i, (m, c)) in p.terms.iter().rev().enumerate() {
        let mag = c.abs();
        let negative = c.is_negative();
        if i == 0 {
            if negative {
                out.push('-');
            }
        } else if negative {
            out.push_str(" - ");
        } else {
            out.push_str(" + ");
        }
        let mon = render_monomial(m);
        if mon.is_empty() {
            out.push_str(&scalar::format_rat(&mag));
        } else if mag.is_one() {
            out.push_str(&mon);
        } else {
            out.push_str(&scalar::format_rat(&mag));
            out.push('*');
            out.push_str(&mon);
        }
    }
    out
}

pub fn render_vector(p: &VectorPolynomial) -> String {
    if p.dim() == 1 {
        render_scalar(p.component(0))
    } else {
        let parts: Vec<String> = p.components.iter().map(render_scalar).collect();
        format!("({})", parts.join(", "))
    }
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Number(Rat),
    Var(usize),
    Plus,
    Minus,
    Star,
    Caret,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Self {
            chars: s.chars().peekable(),
        }
    }

    fn next_token(&mut self) -> Result<Option<Token>> {
        while matches!(self.chars.peek(), Some(c) if c.is_whitespace()) {
            self.chars.next();
        }
        let Some(&c) = self.chars.peek() else {
            return Ok(None);
        };
        match c {
            '+' => {
                self.chars.next();
                Ok(Some(Token::Plus))
            }
            '-' | '\u{2212}' => {
                self.chars.next();
                Ok(Some(Token::Minus))
            }
            '*' => {
                self.chars.next();
                Ok(Some(Token::Star))
            }
            '^' => {
                self.chars.next();
                Ok(Some(Token::Caret))
            }
            'x' => {
                self.chars.next();
                let mut digits = String::new();
                while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(self.chars.next().unwrap());
                }
                let idx = if digits.is_empty() {
                    0
                } else {
                    digits
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad variable index x{digits}")))?
                };
                Ok(Some(Token::Var(idx)))
            }
            d if d.is_ascii_digit() => {
                let mut digits = String::new();
                while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                    digits.push(self.chars.next().unwrap());
                }
                // optional /denominator
                if self.chars.peek() == Some(&'/') {
                    let mut look = self.chars.clone();
                    look.next();
                    if matches!(look.peek(), Some(d) if d.is_ascii_digit()) {
                        self.chars.next();
                        let mut den = String::new();
                        while matches!(self.chars.peek(), Some(d) if d.is_ascii_digit()) {
                            den.push(self.chars.next().unwrap());
                        }
                        let r = scalar::parse_rat(&format!("{digits}/{den}"))?;
                        return Ok(Some(Token::Number(r)));
                    }
                }
                Ok(Some(Token::Number(scalar::parse_rat(&digits)?)))
            }
            other => Err(Error::Parse(format!(
                "unexpected character {other:?} in polynomial"
            ))),
        }
    }

    fn tokens(mut self) -> Result<Vec<Token>> {
        let mut out = Vec::new();
        while let Some(t) = self.next_token()? {
            out.push(t);
        }
        Ok(out)
    }
}

/// Parse the shared polynomial grammar into a scalar polynomial over `n_vars`
/// variables.
pub fn parse_scalar(s: &str, n_vars: usize) -> Result<ScalarPolynomial> {
    let tokens = Lexer::new(s).tokens()?;
    if tokens.is_empty() {
        return Err(Error::Parse("empty polynomial".into()));
    }
    let mut poly = ScalarPolynomial::zero(n_vars);
    let mut pos = 0;
    let mut sign = Rat::one();
    // leading sign
    loop {
        match tokens.get(pos) {
            Some(Token::Minus) => {
                sign = -sign;
                pos += 1;
            }
            Some(Token::Plus) => {
                pos += 1;
            }
            _ => break,
        }
    }
    loop {
        // one term: factors joined by '*'
        let mut coeff = sign.clone();
        let mut mono = Monomial::constant(n_vars);
        let mut saw_factor = false;
        loop {
            match tokens.get(pos) {
                Some(Token::Number(r)) => {
                    coeff *= r;
                    pos += 1;
                    saw_factor = true;
                }
                Some(Token::Var(idx)) => {
                    if *idx >= n_vars {
                        return Err(Error::Parse(format!(
                            "variable x{idx} out of range for dimension {n_vars}"
                        )));
                    }
                    let mut exp = 1u32;
                    pos += 1;
                    if tokens.get(pos) == Some(&Token::Caret) {
                        pos += 1;
                        match tokens.get(pos) {
                            Some(Token::Number(r)) if r.is_integer() && !r.is_negative() => {
                                exp = u32::try_from(r.to_integer())
                                    .map_err(|_| Error::Parse("exponent too large".into()))?;
                                pos += 1;
                            }
                            _ => return Err(Error::Parse("expected exponent after ^".into())),
                        }
                    }
                    mono.0[*idx] += exp;
                    saw_factor = true;
                }
                _ => break,
            }
            if tokens.get(pos) == Some(&Token::Star) {
                pos += 1;
                continue;
            }
            break;
        }
        if !saw_factor {
            return Err(Error::Parse("expected a term".into()));
        }
        poly.add_term(mono, coeff);
        // separator
        match tokens.get(pos) {
            None => break,
            Some(Token::Plus) => {
                sign = Rat::one();
                pos += 1;
            }
            Some(Token::Minus) => {
                sign = -Rat::one();
                pos += 1;
            }
            Some(t) => {
                return Err(Error::Parse(format!(
                    "expected '+' or '-' between terms, found {t:?}"
                )))
            }
        }
        // allow further signs after the separator
        loop {
            match tokens.get(pos) {
                Some(Token::Minus) => {
                    sign = -sign;
                    pos += 1;
                }
                Some(Token::Plus) => {
                    pos += 1;
                }
                _ => break,
            }
        }
    }
    Ok(poly)
}

/// Parse a vector polynomial: `dim` comma-separated components, optionally
/// wrapped in `(...)` or `[...]`. A single bare component is accepted for
/// `dim = 1`.
pub fn parse_vector(s: &str, n_vars: usize, dim: usize) -> Result<VectorPolynomial> {
    let trimmed = s.trim();
    let inner = if (trimmed.starts_with('(') && trimmed.ends_with(')'))
        || (trimmed.starts_with('[') && trimmed.ends_with(']'))
    {
        &trimmed[1..trimmed.len() - 1]
    } else {
        trimmed
    };
    let parts: Vec<&str> = inner.split(',').collect();
    if parts.len() != dim {
        return Err(Error::Parse(format!(
            "expected {dim} components, found {}",
            parts.len()
        )));
    }
    let comps = parts
        .iter()
        .map(|p| parse_scalar(p, n_vars))
        .collect::<Result<Vec<_>>>()?;
    VectorPolynomial::new(comps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, rat_int};

    fn p(s: &str, n: usize) -> ScalarPolynomial {
        parse_scalar(s, n).unwrap()
    }

    #[test]
    fn graded_lex_order() {
        let m = |e: &[u32]| Monomial(e.to_vec());
        assert!(m(&[2, 0]) > m(&[1, 1]));
        assert!(m(&[1, 1]) > m(&[0, 2]));
        assert!(m(&[0, 2]) > m(&[1, 0]));
        assert!(m(&[1, 0]) > m(&[0, 1]));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p("x^2", 1).eval(&[rat_int(3)]).unwrap(), rat_int(9));
        assert_eq!(
            ScalarPolynomial::zero(1).eval(&[rat_int(5)]).unwrap(),
            rat_int(0)
        );
        assert_eq!(
            p("x0 + x1", 2).eval(&[rat_int(1), rat_int(2)]).unwrap(),
            rat_int(3)
        );
        assert!(p("x", 1).eval(&[rat_int(0), rat_int(0)]).is_err());
    }

    #[test]
    fn compose_linear_sign_flip() {
        let neg = DenseMatrix::from_i64(1, 1, &[-1]).unwrap();
        assert_eq!(p("x^2", 1).compose_linear(&neg).unwrap(), p("x^2", 1));
        assert_eq!(p("x", 1).compose_linear(&neg).unwrap(), p("-x", 1));
    }

    #[test]
    fn compose_linear_swap() {
        // p = x*y under the transposition is x*y again
        let swap = DenseMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap();
        let xy = p("x0*x1", 2);
        assert_eq!(xy.compose_linear(&swap).unwrap(), xy);
        // and an asymmetric polynomial swaps
        assert_eq!(
            p("x0^2*x1", 2).compose_linear(&swap).unwrap(),
            p("x0*x1^2", 2)
        );
    }

    #[test]
    fn homogeneous_components() {
        let q = p("1 + x + x^2", 1);
        assert_eq!(q.homogeneous_component(1), p("x", 1));
        assert_eq!(q.homogeneous_component(0), p("1", 1));
        assert!(p("x^2", 1).homogeneous_component(0).is_zero());
        assert_eq!(
            p("x0*x1 + x0^2*x1^2", 2).homogeneous_component(2),
            p("x0*x1", 2)
        );
    }

    #[test]
    fn derivative_basic() {
        assert_eq!(p("x^3", 1).derivative(0), p("3*x^2", 1));
        assert_eq!(
            p("x0^2*x1", 2).derivative_multi(&Monomial(vec![1, 1])),
            p("2*x0", 2)
        );
        assert!(p("5", 1).derivative(0).is_zero());
    }

    #[test]
    fn render_parse_round_trip() {
        for s in [
            "0",
            "1",
            "-x0",
            "x0^2 - x1^2",
            "3*x0^2*x1 + 1/2*x2",
            "x0*x1*x2 - 2/3",
        ] {
            let q = p(s, 3);
            assert_eq!(render_scalar(&q), s.replace("x^", "x0^"));
            assert_eq!(parse_scalar(&render_scalar(&q), 3).unwrap(), q);
        }
    }

    #[test]
    fn parse_accepts_bare_x() {
        assert_eq!(p("x^5", 1), p("x0^5", 1));
        assert_eq!(p("2*x", 1), p("2*x0", 1));
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(parse_scalar("", 1).is_err());
        assert!(parse_scalar("x1", 1).is_err());
        assert!(parse_scalar("x0 x1", 2).is_err());
        assert!(parse_scalar("x^-2", 1).is_err());
        assert!(parse_scalar("q", 1).is_err());
    }

    #[test]
    fn vector_round_trip() {
        let v = parse_vector("(x0^3, x0^2*x1)", 2, 2).unwrap();
        assert_eq!(render_vector(&v), "(x0^3, x0^2*x1)");
        assert_eq!(parse_vector(&render_vector(&v), 2, 2).unwrap(), v);
        let s = parse_vector("x^5", 1, 1).unwrap();
        assert_eq!(render_vector(&s), "x0^5");
        assert!(parse_vector("(x0, x1)", 2, 3).is_err());
    }

    #[test]
    fn dot_and_apply_matrix() {
        let f = parse_vector("(x0, x1)", 2, 2).unwrap();
        let g = parse_vector("(x1, x0)", 2, 2).unwrap();
        assert_eq!(f.dot(&g).unwrap(), p("2*x0*x1", 2));
        let m = DenseMatrix::from_i64(2, 2, &[0, 1, 1, 0]).unwrap();
        assert_eq!(f.apply_matrix(&m).unwrap(), g);
    }

    #[test]
    fn covariant_action_examples() {
        use crate::group::FiniteGroupRep;
        let neg = DenseMatrix::from_i64(1, 1, &[-1]).unwrap();
        let sign_rep = FiniteGroupRep::close(1, 1, &[neg.clone()], &[neg.clone()], 10).unwrap();
        let trivial_rep = FiniteGroupRep::close(
            1,
            1,
            &[neg],
            &[DenseMatrix::from_i64(1, 1, &[1]).unwrap()],
            10,
        )
        .unwrap();
        let x = VectorPolynomial::from_scalar(p("x", 1));
        // identity fixes everything
        let e = sign_rep.identity_index();
        assert_eq!(covariant_action(e, &x, &sign_rep).unwrap(), x);
        // sign rep: x is covariant
        let g = 1 - e;
        assert_eq!(covariant_action(g, &x, &sign_rep).unwrap(), x);
        // trivial rep: x maps to -x
        let neg_x = VectorPolynomial::from_scalar(p("-x", 1));
        assert_eq!(covariant_action(g, &x, &trivial_rep).unwrap(), neg_x);
    }

    #[test]
    fn monomial_enumeration() {
        let all = Monomial::all_of_degree(2, 2);
        assert_eq!(
            all,
            vec![
                Monomial(vec![2, 0]),
                Monomial(vec![1, 1]),
                Monomial(vec![0, 2])
            ]
        );
        assert_eq!(Monomial::all_up_to_degree(3, 4).len(), 35);
        assert_eq!(Monomial::all_of_degree(1, 0), vec![Monomial(vec![0])]);
    }

    #[test]
    fn scale_and_arith() {
        let q = p("x0 + 1", 2);
        assert_eq!(q.scale(&rat(1, 2)), p("1/2*x0 + 1/2", 2));
        assert_eq!(q.sub(&q), ScalarPolynomial::zero(2));
        assert_eq!(q.mul(&q), p("x0^2 + 2*x0 + 1", 2));
        assert_eq!(q.pow(3), p("x0^3 + 3*x0^2 + 3*x0 + 1", 2));
        assert_eq!(q.pow(0), ScalarPolynomial::one(2));
    }
}
