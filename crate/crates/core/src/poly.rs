//! Sparse multivariate polynomials over Q, projective points, binary forms,
//! and local analysis of plane curves.
//!
//! Text format: a sum of terms, each a product of rational numbers and
//! powers `Xk^e` separated by `*` or whitespace, e.g.
//! `-3/2*X0^2*X1 + X2^3`. Lowercase `x` is accepted for `X`. Printing is
//! canonical (graded, then lexicographically descending exponents) and
//! parses back to the same polynomial.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exact::{det, kernel_basis, rank, rat_int, ExactError, Integer, QMatrix, Rational};
use crate::text::{Cursor, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("expected {expected} variables/coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("point does not lie on the locus")]
    NotOnLocus,
    #[error("parametrizing points are linearly dependent")]
    DependentPoints,
    #[error("polynomial is not homogeneous")]
    NotHomogeneous,
    #[error("expected degree {expected}, got {got}")]
    WrongDegree { expected: u32, got: i64 },
    #[error("all coordinates are zero")]
    ZeroPoint,
    #[error("curve is not reduced")]
    NonReduced,
    #[error("multiplicity exceeds working degree {0}")]
    AboveTruncation(u32),
    #[error("{0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Exact(#[from] ExactError),
}

pub type Exponents = Vec<u32>;

/// Largest exponent accepted by the parser.
pub const MAX_PARSED_EXPONENT: u32 = 64;
/// Largest variable index accepted by the parser.
pub const MAX_PARSED_VARIABLE: u32 = 63;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiPoly[{}]({})", self.nvars, self)
    }
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MultiPoly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MultiPoly::monomial(e, Rational::one())
    }

    pub fn monomial(exps: Exponents, c: Rational) -> Self {
        let mut p = MultiPoly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Builds from `(coefficient, exponents)` pairs; repeated exponents add up.
    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (Rational, Exponents)>) -> Self {
        let mut p = MultiPoly::zero(nvars);
        for (c, e) in terms {
            assert_eq!(e.len(), nvars, "exponent length");
            p.add_term(e, c);
        }
        p
    }

    /// Integer coefficients, convenient for tests and examples.
    pub fn from_i64_terms(nvars: usize, terms: &[(i64, &[u32])]) -> Self {
        MultiPoly::from_terms(nvars, terms.iter().map(|(c, e)| (rat_int(*c), e.to_vec())))
    }

    /// Linear form `sum c_i X_i`.
    pub fn linear(coeffs: &[Rational]) -> Self {
        let n = coeffs.len();
        MultiPoly::from_terms(
            n,
            coeffs.iter().enumerate().map(|(i, c)| {
                let mut e = vec![0; n];
                e[i] = 1;
                (c.clone(), e)
            }),
        )
    }

    pub(crate) fn add_term(&mut self, exps: Exponents, c: Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, exps: &[u32]) -> Rational {
        self.terms.get(exps).cloned().unwrap_or_else(Rational::zero)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).min()
    }

    /// Degree in one variable.
    pub fn degree_in(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).max()
    }

    /// The zero polynomial counts as homogeneous.
    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(|e| e.iter().sum::<u32>());
        match degs.next() {
            None => true,
            Some(d) => degs.all(|x| x == d),
        }
    }

    pub fn homogeneous_part(&self, d: u32) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| e.iter().sum::<u32>() == d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> MultiPoly {
        if k.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> MultiPoly {
        let mut acc = MultiPoly::one(self.nvars);
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    fn check_len(&self, got: usize) -> Result<(), PolyError> {
        if got == self.nvars {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch {
                expected: self.nvars,
                got,
            })
        }
    }

    pub fn eval(&self, x: &[Rational]) -> Result<Rational, PolyError> {
        self.check_len(x.len())?;
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    t *= num_traits::pow(xi.clone(), k as usize);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    pub fn eval_point(&self, p: &ProjPoint) -> Result<Rational, PolyError> {
        self.eval(p.coords())
    }

    pub fn partial(&self, i: usize) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * rat_int(e[i] as i64));
            }
        }
        out
    }

    pub fn gradient(&self) -> Vec<MultiPoly> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// Replaces `X_i` by `subs[i]`; all substitutes share one variable count.
    pub fn substitute(&self, subs: &[MultiPoly]) -> Result<MultiPoly, PolyError> {
        self.check_len(subs.len())?;
        let m = subs.first().map_or(0, |s| s.nvars);
        if let Some(bad) = subs.iter().find(|s| s.nvars != m) {
            return Err(PolyError::DimensionMismatch {
                expected: m,
                got: bad.nvars,
            });
        }
        let mut cache: Vec<Vec<MultiPoly>> = subs.iter().map(|s| vec![MultiPoly::one(m), s.clone()]).collect();
        let mut out = MultiPoly::zero(m);
        for (e, c) in &self.terms {
            let mut t = MultiPoly::constant(m, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while cache[i].len() <= k as usize {
                    let next = &cache[i][cache[i].len() - 1] * &subs[i];
                    cache[i].push(next);
                }
                t = &t * &cache[i][k as usize];
            }
            out = &out + &t;
        }
        Ok(out)
    }

    /// Reinterprets in `nvars` variables, sending `X_i` to `X_{map[i]}`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> MultiPoly {
        assert_eq!(map.len(), self.nvars, "map length");
        let mut out = MultiPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut f = vec![0; nvars];
            for (i, &k) in e.iter().enumerate() {
                f[map[i]] += k;
            }
            out.add_term(f, c.clone());
        }
        out
    }

    /// Pads with unused trailing variables.
    pub fn extend_vars(&self, nvars: usize) -> MultiPoly {
        let map: Vec<usize> = (0..self.nvars).collect();
        self.remap(&map, nvars)
    }

    /// `p(M x)` for a square matrix `M`.
    pub fn linear_change(&self, m: &QMatrix) -> Result<MultiPoly, PolyError> {
        self.check_len(m.rows())?;
        let subs: Vec<MultiPoly> = (0..m.rows()).map(|i| MultiPoly::linear(m.row(i))).collect();
        self.substitute(&subs)
    }

    /// Pullback along `[u:v:w] -> u P0 + v P1 + w P2`.
    pub fn restrict_to_plane(&self, pts: [&ProjPoint; 3]) -> Result<MultiPoly, PolyError> {
        for p in pts {
            self.check_len(p.dim())?;
        }
        let m = QMatrix::from_rows(pts.iter().map(|p| p.coords().to_vec()).collect())?;
        if rank(&m) < 3 {
            return Err(PolyError::DependentPoints);
        }
        let subs: Vec<MultiPoly> = (0..self.nvars)
            .map(|i| {
                MultiPoly::linear(&[
                    pts[0].coords()[i].clone(),
                    pts[1].coords()[i].clone(),
                    pts[2].coords()[i].clone(),
                ])
            })
            .collect();
        self.substitute(&subs)
    }

    /// Splits off the part divisible by `X_i`: returns `(q, r)` with
    /// `self = X_i q + r` and `r` free of `X_i`.
    pub fn divide_by_var(&self, i: usize) -> (MultiPoly, MultiPoly) {
        let mut q = MultiPoly::zero(self.nvars);
        let mut r = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                q.add_term(f, c.clone());
            } else {
                r.add_term(e.clone(), c.clone());
            }
        }
        (q, r)
    }

    /// Coefficient of `X_i^k` as a polynomial in the remaining variables
    /// (variable count unchanged, `X_i` absent).
    pub fn coefficient_of_power(&self, i: usize, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut f = e.clone();
                f[i] = 0;
                out.add_term(f, c.clone());
            }
        }
        out
    }

    /// Sets `X_i = value`.
    pub fn specialize(&self, i: usize, value: &Rational) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            let k = std::mem::replace(&mut f[i], 0);
            out.add_term(f, c * num_traits::pow(value.clone(), k as usize));
        }
        out
    }

    /// Univariate view of a polynomial in which only `X_i` occurs.
    pub fn to_univariate(&self, i: usize) -> Option<UniPoly> {
        let mut coeffs = Vec::new();
        for (e, c) in &self.terms {
            if e.iter().enumerate().any(|(j, &k)| j != i && k > 0) {
                return None;
            }
            let k = e[i] as usize;
            if coeffs.len() <= k {
                coeffs.resize(k + 1, Rational::zero());
            }
            coeffs[k] += c;
        }
        Some(UniPoly::new(coeffs))
    }

    /// Largest `k` with `X_i^k | self`; `None` for zero.
    pub fn var_valuation(&self, i: usize) -> Option<u32> {
        self.terms.keys().map(|e| e[i]).min()
    }

    /// Exact division by `X_i^k`; panics if not divisible.
    pub fn shift_down(&self, i: usize, k: u32) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            let mut f = e.clone();
            f[i] = f[i].checked_sub(k).expect("divisible by X_i^k");
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn parse_with_vars(s: &str, nvars: usize) -> Result<MultiPoly, PolyError> {
        let p: MultiPoly = s.parse()?;
        if p.nvars > nvars {
            return Err(PolyError::DimensionMismatch {
                expected: nvars,
                got: p.nvars,
            });
        }
        Ok(p.extend_vars(nvars))
    }

    /// Parses a polynomial spread over several lines; text after `#` on a
    /// line is ignored.
    pub fn parse_document(s: &str, nvars: usize) -> Result<MultiPoly, PolyError> {
        let body: Vec<&str> = s.lines().map(|l| l.split('#').next().unwrap_or("")).collect();
        MultiPoly::parse_with_vars(&body.join(" "), nvars)
    }
}

impl<'a> Add<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl<'a> Sub<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a MultiPoly> for &'a MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: &MultiPoly) -> MultiPoly {
        assert_eq!(self.nvars, rhs.nvars, "variable count");
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            for (f, d) in &rhs.terms {
                let g: Exponents = e.iter().zip(f).map(|(a, b)| a + b).collect();
                out.add_term(g, c * d);
            }
        }
        out
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.scale(&-Rational::one())
    }
}

/// Graded order, highest degree first, then lexicographically descending.
fn display_order(p: &MultiPoly) -> Vec<(&Exponents, &Rational)> {
    let mut v: Vec<_> = p.terms.iter().collect();
    v.sort_by(|(a, _), (b, _)| {
        let da: u32 = a.iter().sum();
        let db: u32 = b.iter().sum();
        db.cmp(&da).then_with(|| b.cmp(a))
    });
    v
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (e, c)) in display_order(self).into_iter().enumerate() {
            let negative = c.is_negative();
            let abs = c.abs();
            if n == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if negative { " - " } else { " + " })?;
            }
            let mut factors: Vec<String> = Vec::new();
            let constant = e.iter().all(|&k| k == 0);
            if !abs.is_one() || constant {
                factors.push(abs.to_string());
            }
            for (i, &k) in e.iter().enumerate() {
                match k {
                    0 => {}
                    1 => factors.push(format!("X{i}")),
                    _ => factors.push(format!("X{i}^{k}")),
                }
            }
            f.write_str(&factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = ParseError;

    /// The variable count is one more than the largest index that occurs.
    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let mut raw: Vec<(Rational, Vec<(usize, u32)>)> = Vec::new();
        let mut nvars = 0usize;
        if cur.at_end() {
            return Err(cur.error("empty polynomial"));
        }
        let mut first = true;
        loop {
            cur.skip_ws();
            let mut sign = Rational::one();
            if cur.eat(b'-') {
                sign = -sign;
            } else if !cur.eat(b'+') && !first {
                return Err(cur.unexpected());
            }
            first = false;
            let (c, vars) = parse_term(&mut cur)?;
            for &(i, _) in &vars {
                nvars = nvars.max(i + 1);
            }
            raw.push((sign * c, vars));
            if cur.at_end() {
                break;
            }
        }
        let mut p = MultiPoly::zero(nvars);
        for (c, vars) in raw {
            let mut e = vec![0u32; nvars];
            for (i, k) in vars {
                e[i] = e[i]
                    .checked_add(k)
                    .filter(|v| *v <= MAX_PARSED_EXPONENT)
                    .ok_or_else(|| ParseError::new(0, "exponent too large"))?;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}

fn parse_term(cur: &mut Cursor<'_>) -> Result<(Rational, Vec<(usize, u32)>), ParseError> {
    let mut coeff = Rational::one();
    let mut vars = Vec::new();
    let mut factors = 0;
    loop {
        cur.skip_ws();
        match cur.peek() {
            Some(b'0'..=b'9') => coeff *= cur.unsigned_rational()?,
            Some(b'X') | Some(b'x') => {
                cur.pos += 1;
                if !matches!(cur.peek(), Some(b'0'..=b'9')) {
                    return Err(cur.error("expected variable index"));
                }
                let i = cur.small_uint(MAX_PARSED_VARIABLE)? as usize;
                let save = cur.pos;
                let k = if cur.eat(b'^') {
                    cur.small_uint(MAX_PARSED_EXPONENT)?
                } else {
                    cur.pos = save;
                    1
                };
                vars.push((i, k));
            }
            _ => {
                if factors == 0 {
                    return Err(cur.unexpected());
                }
                return Err(cur.error("expected factor after '*'"));
            }
        }
        factors += 1;
        cur.skip_ws();
        match cur.peek() {
            Some(b'*') => cur.pos += 1,
            Some(b'0'..=b'9') | Some(b'X') | Some(b'x') => {}
            _ => return Ok((coeff, vars)),
        }
    }
}

/// Dense univariate polynomial, coefficients from degree 0 upward, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_i64(c: &[i64]) -> Self {
        UniPoly::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    /// `t^k`.
    pub fn monomial(k: usize) -> Self {
        let mut c = vec![Rational::zero(); k + 1];
        c[k] = Rational::one();
        UniPoly { coeffs: c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> UniPoly {
        UniPoly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * rat_int(k as i64))
                .collect(),
        )
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) + other.coeff(k)).collect())
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        UniPoly::new((0..n).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }

    pub fn scale(&self, k: &Rational) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UniPoly::new(out)
    }

    pub fn pow(&self, k: u32) -> UniPoly {
        let mut acc = UniPoly::from_i64(&[1]);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, d: &UniPoly) -> (UniPoly, UniPoly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.leading().expect("nonzero").clone();
        let mut r = self.coeffs.clone();
        let mut q = vec![Rational::zero(); r.len().saturating_sub(dd).max(1)];
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1 - dd;
            let c = &r[r.len() - 1] / &lead;
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k + j] -= &c * dc;
            }
            q[k] = c;
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        (UniPoly::new(q), UniPoly::new(r))
    }

    pub fn monic(&self) -> UniPoly {
        match self.leading() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&(Rational::one() / l)),
        }
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &UniPoly) -> UniPoly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn squarefree_part(&self) -> UniPoly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Number of distinct complex roots.
    pub fn distinct_root_count(&self) -> usize {
        self.squarefree_part().degree().unwrap_or(0)
    }

    /// Rational roots, by the rational root test on the primitive integer
    /// multiple. Returns `None` if a coefficient is too large to factor by
    /// trial division.
    pub fn rational_roots(&self) -> Option<Vec<Rational>> {
        if self.is_zero() {
            return None;
        }
        let mut roots = Vec::new();
        let shift = self.coeffs.iter().position(|c| !c.is_zero()).expect("nonzero");
        if shift > 0 {
            roots.push(Rational::zero());
        }
        let core = UniPoly::new(self.coeffs[shift..].to_vec());
        if core.degree() == Some(0) {
            return Some(roots);
        }
        let den_lcm = core
            .coeffs
            .iter()
            .fold(Integer::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<Integer> = core
            .coeffs
            .iter()
            .map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer())
            .collect();
        let ps = divisors(&ints[0].abs())?;
        let qs = divisors(&ints[ints.len() - 1].abs())?;
        let mut cands: Vec<Rational> = Vec::new();
        for p in &ps {
            for q in &qs {
                for s in [1, -1] {
                    let r = Rational::new(p * Integer::from(s), q.clone());
                    if !cands.contains(&r) {
                        cands.push(r);
                    }
                }
            }
        }
        cands.sort();
        roots.extend(cands.into_iter().filter(|r| core.eval(r).is_zero()));
        roots.sort();
        Some(roots)
    }
}

/// Trial-division divisor list; `None` above `10^12`.
fn divisors(n: &Integer) -> Option<Vec<Integer>> {
    let limit = Integer::from(1_000_000_000_000i64);
    if n > &limit || n.is_zero() {
        return None;
    }
    let m: u64 = n.try_into().ok()?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m.is_multiple_of(d) {
            out.push(Integer::from(d));
            if d * d != m {
                out.push(Integer::from(m / d));
            }
        }
        d += 1;
    }
    out.sort();
    Some(out)
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = MultiPoly::from_terms(
            1,
            self.coeffs.iter().enumerate().map(|(k, c)| (c.clone(), vec![k as u32])),
        );
        write!(f, "{p}")
    }
}

/// `sum_k c_k x^k y^(d-k)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinaryForm {
    degree: u32,
    coeffs: Vec<Rational>,
}

impl BinaryForm {
    pub fn new(degree: u32, coeffs: Vec<Rational>) -> Result<Self, PolyError> {
        if coeffs.len() != degree as usize + 1 {
            return Err(PolyError::WrongDegree {
                expected: degree,
                got: coeffs.len() as i64 - 1,
            });
        }
        Ok(BinaryForm { degree, coeffs })
    }

    /// From a homogeneous polynomial in two variables `(x, y)`.
    pub fn from_poly(p: &MultiPoly) -> Result<Self, PolyError> {
        if p.nvars() != 2 {
            return Err(PolyError::DimensionMismatch {
                expected: 2,
                got: p.nvars(),
            });
        }
        if !p.is_homogeneous() {
            return Err(PolyError::NotHomogeneous);
        }
        let d = p.degree().ok_or(PolyError::WrongDegree { expected: 0, got: -1 })?;
        let coeffs = (0..=d).map(|k| p.coefficient(&[k, d - k])).collect();
        BinaryForm::new(d, coeffs)
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Distinct points of `P^1` (over C) where the form vanishes: roots of
    /// `f(x, 1)`, plus `[1:0]` when the `x^d` coefficient vanishes.
    pub fn distinct_factors(&self) -> Result<usize, PolyError> {
        if self.is_zero() {
            return Err(PolyError::WrongDegree {
                expected: self.degree,
                got: -1,
            });
        }
        let affine = UniPoly::new(self.coeffs.clone());
        let at_infinity = usize::from(affine.degree() < Some(self.degree as usize));
        Ok(affine.distinct_root_count() + at_infinity)
    }
}

/// Homogeneous coordinates, not all zero. Equality is up to scalar.
#[derive(Clone, Debug)]
pub struct ProjPoint {
    coords: Vec<Rational>,
}

impl ProjPoint {
    pub fn new(coords: Vec<Rational>) -> Result<Self, PolyError> {
        if coords.iter().all(Zero::is_zero) {
            return Err(PolyError::ZeroPoint);
        }
        Ok(ProjPoint { coords })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self, PolyError> {
        ProjPoint::new(c.iter().map(|&x| rat_int(x)).collect())
    }

    /// `e_i` in `n` coordinates.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut c = vec![Rational::zero(); n];
        c[i] = Rational::one();
        ProjPoint { coords: c }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// First nonzero coordinate scaled to 1.
    pub fn normalized(&self) -> ProjPoint {
        let lead = self
            .coords
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero point")
            .clone();
        ProjPoint {
            coords: self.coords.iter().map(|c| c / &lead).collect(),
        }
    }

    /// Primitive integer representative with first nonzero coordinate positive.
    pub fn primitive_integer(&self) -> Vec<Integer> {
        let n = self.normalized();
        let l = n
            .coords
            .iter()
            .fold(Integer::one(), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
        let ints: Vec<Integer> = n
            .coords
            .iter()
            .map(|c| (c * Rational::from_integer(l.clone())).to_integer())
            .collect();
        let g = ints
            .iter()
            .fold(Integer::zero(), |acc, x| num_integer::Integer::gcd(&acc, x));
        ints.into_iter().map(|x| x / &g).collect()
    }
}

impl PartialEq for ProjPoint {
    fn eq(&self, other: &Self) -> bool {
        self.coords.len() == other.coords.len() && self.normalized().coords == other.normalized().coords
    }
}

impl Eq for ProjPoint {}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// Parses `a,b,c` or `[a, b, c]` with rational entries.
impl FromStr for ProjPoint {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut cur = Cursor::new(s);
        let bracket = cur.eat(b'[');
        let mut coords = vec![cur.rational()?];
        while cur.eat(b',') {
            coords.push(cur.rational()?);
        }
        if bracket {
            cur.expect(b']')?;
        }
        if !cur.at_end() {
            return Err(cur.unexpected());
        }
        ProjPoint::new(coords).map_err(|_| ParseError::new(0, "all coordinates are zero"))
    }
}

/// Rank of the Jacobian of `gens` at `x`, after checking `x` lies on all of them.
pub fn jacobian_rank_at(gens: &[MultiPoly], x: &ProjPoint) -> Result<usize, PolyError> {
    let mut rows = Vec::with_capacity(gens.len());
    for g in gens {
        if !g.eval_point(x)?.is_zero() {
            return Err(PolyError::NotOnLocus);
        }
        rows.push(
            g.gradient()
                .iter()
                .map(|d| d.eval_point(x))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    if rows.is_empty() {
        return Ok(0);
    }
    Ok(rank(&QMatrix::from_rows(rows)?))
}

/// Symmetric matrix of a quadratic form: `a_ii = coeff(X_i^2)`,
/// `a_ij = coeff(X_i X_j)/2`.
pub fn quadratic_form_matrix(q: &MultiPoly) -> Result<QMatrix, PolyError> {
    if !q.is_homogeneous() || q.degree().is_some_and(|d| d != 2) {
        return Err(PolyError::WrongDegree {
            expected: 2,
            got: q.degree().map_or(-1, |d| d as i64),
        });
    }
    let n = q.nvars();
    let half = Rational::new(1.into(), 2.into());
    Ok(QMatrix::from_fn(n, n, |i, j| {
        let mut e = vec![0u32; n];
        e[i] += 1;
        e[j] += 1;
        let c = q.coefficient(&e);
        if i == j {
            c
        } else {
            c * &half
        }
    }))
}

pub fn quadratic_form_rank(q: &MultiPoly) -> Result<usize, PolyError> {
    Ok(rank(&quadratic_form_matrix(q)?))
}

/// Options for local analysis of plane curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalOptions {
    /// Working degree of the local expansion.
    pub truncation: u32,
}

impl Default for LocalOptions {
    fn default() -> Self {
        LocalOptions { truncation: 6 }
    }
}

/// Expansion of a plane curve in the affine chart `X_k = 1` around `v`,
/// `k` the last nonzero coordinate of `v`. Variables `(u, w)` are the other
/// two coordinates in increasing index order, shifted to vanish at `v`.
pub fn local_expansion(curve: &MultiPoly, v: &ProjPoint) -> Result<MultiPoly, PolyError> {
    if curve.nvars() != 3 {
        return Err(PolyError::DimensionMismatch {
            expected: 3,
            got: curve.nvars(),
        });
    }
    if v.dim() != 3 {
        return Err(PolyError::DimensionMismatch {
            expected: 3,
            got: v.dim(),
        });
    }
    let k = (0..3).rev().find(|&i| !v.coords()[i].is_zero()).expect("nonzero point");
    let vk = &v.coords()[k];
    let mut next = 0;
    let subs: Vec<MultiPoly> = (0..3)
        .map(|i| {
            if i == k {
                MultiPoly::one(2)
            } else {
                let s = &MultiPoly::constant(2, &v.coords()[i] / vk) + &MultiPoly::var(2, next);
                next += 1;
                s
            }
        })
        .collect();
    curve.substitute(&subs)
}

/// Lowest total degree of the local expansion at `v`.
pub fn multiplicity_at(curve: &MultiPoly, v: &ProjPoint) -> Result<u32, PolyError> {
    if !curve.eval_point(v)?.is_zero() {
        return Err(PolyError::NotOnLocus);
    }
    let local = local_expansion(curve, v)?;
    local.min_degree().ok_or(PolyError::NotOnLocus)
}

/// Leading form of the local expansion at `v`.
pub fn tangent_cone(curve: &MultiPoly, v: &ProjPoint) -> Result<BinaryForm, PolyError> {
    let m = multiplicity_at(curve, v)?;
    BinaryForm::from_poly(&local_expansion(curve, v)?.homogeneous_part(m))
}

pub fn tangent_cone_distinct_factors(curve: &MultiPoly, v: &ProjPoint) -> Result<usize, PolyError> {
    tangent_cone(curve, v)?.distinct_factors()
}

/// Squarefreeness of a ternary form over Q (hence over C: squarefreeness is
/// preserved by field extension).
pub fn is_squarefree_plane_curve(curve: &MultiPoly) -> Result<bool, PolyError> {
    if curve.nvars() != 3 {
        return Err(PolyError::DimensionMismatch {
            expected: 3,
            got: curve.nvars(),
        });
    }
    if curve.is_zero() {
        return Ok(false);
    }
    if !curve.is_homogeneous() {
        return Err(PolyError::NotHomogeneous);
    }
    let e = curve.var_valuation(2).expect("nonzero");
    if e >= 2 {
        return Ok(false);
    }
    let g = curve.shift_down(2, e);
    // affine part g(x, y, 1) has the same factorization as g
    let affine = g.specialize(2, &Rational::one()).remap(&[0, 1, 0], 2);
    Ok(is_squarefree_bivariate(&affine))
}

/// `f(x, y)` over Q. After a shear making the `y^d` coefficient a nonzero
/// constant, `f` is squarefree iff its `y`-discriminant is a nonzero
/// polynomial in `x` of degree at most `d(d-1)`; that is decided by
/// specializing `x` at `d(d-1) + 1` points.
pub fn is_squarefree_bivariate(f: &MultiPoly) -> bool {
    assert_eq!(f.nvars(), 2);
    let d = match f.degree() {
        None => return false,
        Some(0) => return true,
        Some(d) => d,
    };
    let top = f.homogeneous_part(d);
    let c = (0i64..)
        .map(rat_int)
        .find(|c| !top.eval(&[c.clone(), Rational::one()]).expect("2 vars").is_zero())
        .expect("a nonzero form has a nonvanishing point among d+1 candidates");
    let x = MultiPoly::var(2, 0);
    let y = MultiPoly::var(2, 1);
    let sheared = f.substitute(&[&x + &y.scale(&c), y]).expect("2 vars");
    let dd = d as i64;
    for x0 in 0..=(dd * (dd - 1)) {
        let uni = sheared
            .specialize(0, &rat_int(x0))
            .to_univariate(1)
            .expect("only y remains");
        if uni.gcd(&uni.derivative()).degree() == Some(0) {
            return true;
        }
    }
    false
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DuValVerdict {
    pub multiplicity: u32,
    pub distinct_tangents: usize,
    pub accepted: bool,
}

/// Double covers branched along a reduced plane curve are Du Val over `v`
/// when `mult_v <= 2`, or `mult_v = 3` with at least two distinct tangents.
/// Anything else is reported as not certified (`accepted = false`).
pub fn du_val_plane_criterion(curve: &MultiPoly, v: &ProjPoint, opts: LocalOptions) -> Result<DuValVerdict, PolyError> {
    if !is_squarefree_plane_curve(curve)? {
        return Err(PolyError::NonReduced);
    }
    let m = multiplicity_at(curve, v)?;
    if m > opts.truncation {
        return Err(PolyError::AboveTruncation(opts.truncation));
    }
    let distinct = tangent_cone_distinct_factors(curve, v)?;
    Ok(DuValVerdict {
        multiplicity: m,
        distinct_tangents: distinct,
        accepted: m <= 2 || (m == 3 && distinct >= 2),
    })
}

/// Exponent vectors of degree `d` in `n` variables, lexicographically descending.
pub fn monomials(n: usize, d: u32) -> Vec<Exponents> {
    fn go(n: usize, d: u32, prefix: &mut Exponents, out: &mut Vec<Exponents>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for k in (0..=d).rev() {
            prefix.push(k);
            go(n, d - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    go(n, d, &mut Vec::new(), &mut out);
    out
}

/// Which conditions to impose along a parametrized curve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Vanishing {
    Simple,
    /// Value and all first partials.
    Double,
}

/// Linear conditions on degree-`d` forms in `gamma.len()` variables from
/// vanishing along `t -> gamma(t)`, keeping `t`-coefficients up to
/// `truncation` (default: `d * max deg gamma_i`, where the identities are
/// exact).
pub fn linear_conditions_matrix(
    d: u32,
    gamma: &[UniPoly],
    vanishing: Vanishing,
    truncation: Option<usize>,
) -> (QMatrix, Vec<Exponents>) {
    let n = gamma.len();
    let deg_gamma = gamma.iter().filter_map(UniPoly::degree).max().unwrap_or(0);
    let trunc = truncation.unwrap_or(d as usize * deg_gamma);
    let mons = monomials(n, d);
    let mut powers: Vec<Vec<UniPoly>> = gamma.iter().map(|g| vec![UniPoly::from_i64(&[1]), g.clone()]).collect();
    let mut power = |i: usize, k: u32| -> UniPoly {
        while powers[i].len() <= k as usize {
            let next = powers[i].last().expect("nonempty").mul(&gamma[i]);
            powers[i].push(next);
        }
        powers[i][k as usize].clone()
    };
    let mut eval_mon = |e: &[u32]| -> UniPoly {
        let mut acc = UniPoly::from_i64(&[1]);
        for (i, &k) in e.iter().enumerate() {
            if k > 0 {
                acc = acc.mul(&power(i, k));
            }
        }
        acc
    };
    let mut blocks: Vec<Vec<UniPoly>> = Vec::new();
    blocks.push(mons.iter().map(|e| eval_mon(e)).collect());
    if vanishing == Vanishing::Double {
        for j in 0..n {
            blocks.push(
                mons.iter()
                    .map(|e| {
                        if e[j] == 0 {
                            UniPoly::zero()
                        } else {
                            let mut f = e.clone();
                            f[j] -= 1;
                            eval_mon(&f).scale(&rat_int(e[j] as i64))
                        }
                    })
                    .collect(),
            );
        }
    }
    let mut rows = Vec::new();
    for block in &blocks {
        for k in 0..=trunc {
            let row: Vec<Rational> = block.iter().map(|u| u.coeff(k)).collect();
            if row.iter().any(|c| !c.is_zero()) {
                rows.push(row);
            }
        }
    }
    let m = if rows.is_empty() {
        QMatrix::zeros(0, mons.len())
    } else {
        QMatrix::from_rows(rows).expect("uniform rows")
    };
    (m, mons)
}

pub fn linear_conditions_kernel(
    d: u32,
    gamma: &[UniPoly],
    vanishing: Vanishing,
    truncation: Option<usize>,
) -> Vec<MultiPoly> {
    let n = gamma.len();
    let (m, mons) = linear_conditions_matrix(d, gamma, vanishing, truncation);
    let basis = if m.rows() == 0 {
        (0..mons.len())
            .map(|i| {
                (0..mons.len())
                    .map(|j| if i == j { Rational::one() } else { Rational::zero() })
                    .collect()
            })
            .collect()
    } else {
        kernel_basis(&m)
    };
    basis
        .into_iter()
        .map(|v| MultiPoly::from_terms(n, v.into_iter().zip(mons.iter().cloned())))
        .collect()
}

pub fn linear_conditions_dim(d: u32, gamma: &[UniPoly], vanishing: Vanishing, truncation: Option<usize>) -> usize {
    let (m, mons) = linear_conditions_matrix(d, gamma, vanishing, truncation);
    mons.len() - if m.rows() == 0 { 0 } else { rank(&m) }
}

/// `[1, t, ..., t^d]`.
pub fn rational_normal_curve(d: usize) -> Vec<UniPoly> {
    (0..=d).map(UniPoly::monomial).collect()
}

/// Determinant of a square matrix of polynomials by Laplace expansion
/// along the first row.
pub fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "square matrix");
    assert!(n > 0, "nonempty matrix");
    let cols: Vec<usize> = (0..n).collect();
    laplace(m, 0, &cols)
}

fn laplace(m: &[Vec<MultiPoly>], row: usize, cols: &[usize]) -> MultiPoly {
    if cols.len() == 1 {
        return m[row][cols[0]].clone();
    }
    let nv = m[0][0].nvars();
    let mut acc = MultiPoly::zero(nv);
    for (k, &c) in cols.iter().enumerate() {
        if m[row][c].is_zero() {
            continue;
        }
        let rest: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
        let minor = laplace(m, row + 1, &rest);
        let term = &m[row][c] * &minor;
        acc = if k % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Determinant of a rational matrix evaluated from polynomial entries.
pub fn eval_matrix(m: &[Vec<MultiPoly>], x: &[Rational]) -> Result<QMatrix, PolyError> {
    let rows = m
        .iter()
        .map(|r| r.iter().map(|p| p.eval(x)).collect::<Result<Vec<_>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(QMatrix::from_rows(rows)?)
}

pub fn eval_det(m: &[Vec<MultiPoly>], x: &[Rational]) -> Result<Rational, PolyError> {
    Ok(det(&eval_matrix(m, x)?)?)
}

/// Homogenizes a polynomial in `n` variables with a new last variable.
pub fn homogenize(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars();
    let d = p.degree().unwrap_or(0);
    let mut out = MultiPoly::zero(n + 1);
    for (e, c) in p.terms() {
        let mut f = e.clone();
        f.push(d - e.iter().sum::<u32>());
        out.add_term(f, c.clone());
    }
    out
}

/// Random form with integer coefficients in `[-bound, bound]`.
pub fn random_form<R: rand::Rng>(rng: &mut R, nvars: usize, degree: u32, bound: i64) -> MultiPoly {
    MultiPoly::from_terms(
        nvars,
        monomials(nvars, degree)
            .into_iter()
            .map(|e| (rat_int(rng.gen_range(-bound..=bound)), e)),
    )
}
