//! Integral lattices given by Gram matrices, the standard building blocks
//! (U, E8, A2, rank-one lattices) and vector invariants.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer as _;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::exact::{det_int, inertia, smith_normal_form, ExactError, Inertia, Integer, SmithForm, ZMatrix};
pub use crate::text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("vector has length {got}, lattice rank is {rank}")]
    DimensionMismatch { rank: usize, got: usize },
    #[error("zero vector has no {0}")]
    ZeroVector(&'static str),
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("vector has norm zero")]
    Isotropic,
    #[error("Gram matrix is not symmetric")]
    NotSymmetric,
    #[error("no partner found with support <= {max_support} and coefficients in [-{radius}, {radius}]")]
    SearchExhausted { radius: i64, max_support: usize },
    #[error("{0}")]
    Exact(#[from] ExactError),
}

/// Coordinates of a lattice vector in the lattice basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LatVector(pub Vec<Integer>);

impl LatVector {
    pub fn from_i64(v: &[i64]) -> Self {
        LatVector(v.iter().map(|&x| Integer::from(x)).collect())
    }

    pub fn zero(rank: usize) -> Self {
        LatVector(vec![Integer::zero(); rank])
    }

    pub fn basis(rank: usize, i: usize) -> Self {
        let mut v = Self::zero(rank);
        v.0[i] = Integer::one();
        v
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(Zero::is_zero)
    }

    pub fn content(&self) -> Integer {
        self.0.iter().fold(Integer::zero(), |g, x| g.gcd(x))
    }

    pub fn scaled(&self, k: i64) -> Self {
        LatVector(self.0.iter().map(|x| x * k).collect())
    }

    pub fn add(&self, other: &LatVector) -> Self {
        LatVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn sub(&self, other: &LatVector) -> Self {
        LatVector(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect())
    }
}

impl fmt::Display for LatVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    gram: ZMatrix,
}

/// Norm, divisibility and primitivity: invariants of the isometry orbit.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrbitInvariants {
    pub norm: Integer,
    pub divisibility: Integer,
    pub primitive: bool,
}

/// Bounded search region for [`Lattice::find_isotropic_partner`]: vectors
/// with at most `max_support` nonzero coordinates, each in `[-radius, radius]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBox {
    pub radius: i64,
    pub max_support: usize,
}

impl Default for SearchBox {
    fn default() -> Self {
        SearchBox {
            radius: 3,
            max_support: 3,
        }
    }
}

/// A saturated sublattice together with its embedding.
#[derive(Clone, Debug)]
pub struct Sublattice {
    /// Basis vectors in the coordinates of the ambient lattice.
    pub basis: Vec<LatVector>,
    pub lattice: Lattice,
}

const E8_EDGES: [(usize, usize); 7] = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];

impl Lattice {
    pub fn new(gram: ZMatrix) -> Result<Self, LatticeError> {
        if !gram.is_symmetric() {
            return Err(LatticeError::NotSymmetric);
        }
        Ok(Lattice { gram })
    }

    /// Hyperbolic plane: basis `e, f` with `e^2 = f^2 = 0`, `(e,f) = 1`.
    pub fn hyperbolic_plane() -> Self {
        Lattice {
            gram: ZMatrix::from_i64(&[&[0, 1], &[1, 0]]).unwrap(),
        }
    }

    /// E8 root lattice from its Cartan matrix, multiplied by `scale`.
    pub fn e8(scale: i64) -> Self {
        let mut g = ZMatrix::zeros(8, 8);
        for i in 0..8 {
            g[(i, i)] = Integer::from(2 * scale);
        }
        for &(i, j) in &E8_EDGES {
            g[(i, j)] = Integer::from(-scale);
            g[(j, i)] = Integer::from(-scale);
        }
        Lattice { gram: g }
    }

    /// `E8(-1)`, the negative definite even unimodular lattice.
    pub fn e8_negative() -> Self {
        Self::e8(-1)
    }

    pub fn a2(scale: i64) -> Self {
        Lattice {
            gram: ZMatrix::from_i64(&[&[2 * scale, -scale], &[-scale, 2 * scale]]).unwrap(),
        }
    }

    /// `<n>`.
    pub fn rank_one(n: i64) -> Self {
        Lattice {
            gram: ZMatrix::from_i64(&[&[n]]).unwrap(),
        }
    }

    pub fn direct_sum(parts: &[Lattice]) -> Self {
        let blocks: Vec<ZMatrix> = parts.iter().map(|p| p.gram.clone()).collect();
        Lattice {
            gram: ZMatrix::block_diagonal(&blocks),
        }
    }

    /// `U^3 + E8(-1)^2 + <-2>`, the second cohomology lattice of a
    /// Hilbert square of a K3 surface.
    pub fn lambda() -> Self {
        let u = Self::hyperbolic_plane();
        let e = Self::e8_negative();
        Self::direct_sum(&[u.clone(), u.clone(), u, e.clone(), e, Self::rank_one(-2)])
    }

    pub fn scaled(&self, k: i64) -> Self {
        Lattice {
            gram: self.gram.scaled(&Integer::from(k)),
        }
    }

    pub fn gram(&self) -> &ZMatrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> Integer {
        det_int(&self.gram).expect("Gram matrices are square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn signature(&self) -> Inertia {
        inertia(&self.gram.to_rational()).expect("Gram matrices are symmetric")
    }

    pub fn smith(&self) -> SmithForm {
        smith_normal_form(&self.gram)
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| self.gram[(i, i)].is_even())
    }

    fn check(&self, v: &LatVector) -> Result<(), LatticeError> {
        if v.len() == self.rank() {
            Ok(())
        } else {
            Err(LatticeError::DimensionMismatch {
                rank: self.rank(),
                got: v.len(),
            })
        }
    }

    /// `(v, e_k)` for every basis vector `e_k`.
    pub fn pairing_row(&self, v: &LatVector) -> Result<Vec<Integer>, LatticeError> {
        self.check(v)?;
        Ok((0..self.rank())
            .map(|k| {
                v.0.iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(i, x)| x * &self.gram[(i, k)])
                    .sum()
            })
            .collect())
    }

    pub fn pairing(&self, v: &LatVector, w: &LatVector) -> Result<Integer, LatticeError> {
        self.check(w)?;
        let row = self.pairing_row(v)?;
        Ok(row.iter().zip(&w.0).map(|(a, b)| a * b).sum())
    }

    pub fn norm(&self, v: &LatVector) -> Result<Integer, LatticeError> {
        self.pairing(v, v)
    }

    /// gcd of the pairings of `v` with the whole lattice.
    pub fn divisibility(&self, v: &LatVector) -> Result<Integer, LatticeError> {
        if v.is_zero() {
            self.check(v)?;
            return Err(LatticeError::ZeroVector("divisibility"));
        }
        let g = self.pairing_row(v)?.iter().fold(Integer::zero(), |g, x| g.gcd(x));
        Ok(g)
    }

    pub fn is_primitive(&self, v: &LatVector) -> bool {
        v.content().is_one()
    }

    pub fn orbit_invariants(&self, v: &LatVector) -> Result<OrbitInvariants, LatticeError> {
        Ok(OrbitInvariants {
            divisibility: self.divisibility(v)?,
            norm: self.norm(v)?,
            primitive: self.is_primitive(v),
        })
    }

    /// Saturated basis of `{w : (v, w) = 0}` with its Gram matrix.
    pub fn orthogonal_complement(&self, v: &LatVector) -> Result<Sublattice, LatticeError> {
        self.check(v)?;
        if v.is_zero() {
            return Err(LatticeError::ZeroVector("orthogonal complement"));
        }
        if !self.is_primitive(v) {
            return Err(LatticeError::NotPrimitive);
        }
        if self.norm(v)?.is_zero() {
            return Err(LatticeError::Isotropic);
        }
        let row = ZMatrix::from_rows(vec![self.pairing_row(v)?])?;
        // row * right = (g, 0, ..., 0) with `right` unimodular, so its
        // trailing columns are a Z-basis of the kernel.
        let snf = smith_normal_form(&row);
        let basis: Vec<LatVector> = (1..self.rank()).map(|j| LatVector(snf.right.column(j))).collect();
        Ok(Sublattice {
            lattice: self.restricted_to(&basis)?,
            basis,
        })
    }

    /// Gram matrix of the span of `basis`.
    pub fn restricted_to(&self, basis: &[LatVector]) -> Result<Lattice, LatticeError> {
        let rows: Vec<Vec<Integer>> = basis.iter().map(|b| self.pairing_row(b)).collect::<Result<_, _>>()?;
        let n = basis.len();
        let gram = ZMatrix::from_fn(n, n, |i, j| rows[i].iter().zip(&basis[j].0).map(|(a, b)| a * b).sum());
        Ok(Lattice { gram })
    }

    fn gram_i64(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| self.gram[(i, j)].to_i64().expect("Gram entries fit in i64"))
                    .collect()
            })
            .collect()
    }

    /// Some `beta` with `(alpha, beta) = 1` and `(beta, beta) = 0`, searched
    /// over sparse vectors in increasing support size. Exhausting the search
    /// region does not prove that no partner exists.
    pub fn find_isotropic_partner(&self, alpha: &LatVector, region: SearchBox) -> Result<LatVector, LatticeError> {
        let a: Vec<i64> = self
            .pairing_row(alpha)?
            .iter()
            .map(|x| x.to_i64().expect("pairings fit in i64"))
            .collect();
        let g = self.gram_i64();
        let n = self.rank();
        let values: Vec<i64> = (1..=region.radius).flat_map(|k| [k, -k]).collect();
        for support in 1..=region.max_support.min(n) {
            let mut positions: Vec<usize> = (0..support).collect();
            loop {
                let mut digits = vec![0usize; support];
                loop {
                    let coeffs: Vec<i64> = digits.iter().map(|&d| values[d]).collect();
                    let pair: i64 = positions.iter().zip(&coeffs).map(|(&p, c)| a[p] * c).sum();
                    if pair == 1 {
                        let mut norm = 0i64;
                        for (x, &p) in positions.iter().enumerate() {
                            for (y, &q) in positions.iter().enumerate() {
                                norm += coeffs[x] * coeffs[y] * g[p][q];
                            }
                        }
                        if norm == 0 {
                            let mut beta = vec![0i64; n];
                            for (&p, c) in positions.iter().zip(&coeffs) {
                                beta[p] = *c;
                            }
                            return Ok(LatVector::from_i64(&beta));
                        }
                    }
                    if !advance(&mut digits, values.len()) {
                        break;
                    }
                }
                if !next_combination(&mut positions, n) {
                    break;
                }
            }
        }
        Err(LatticeError::SearchExhausted {
            radius: region.radius,
            max_support: region.max_support,
        })
    }

    /// Every nonzero `v` with coefficients in `[-radius, radius]` and
    /// `(v, v) = target`, in lexicographic order.
    pub fn enumerate_square_vectors(&self, target: i64, radius: i64) -> Vec<LatVector> {
        let coords: Vec<usize> = (0..self.rank()).collect();
        self.enumerate_square_vectors_on(target, radius, &coords)
    }

    /// As [`Self::enumerate_square_vectors`], with all coordinates outside
    /// `coords` held at zero.
    pub fn enumerate_square_vectors_on(&self, target: i64, radius: i64, coords: &[usize]) -> Vec<LatVector> {
        let g = self.gram_i64();
        let k = coords.len();
        let width = (2 * radius + 1) as usize;
        let mut digits = vec![0usize; k];
        let mut out = Vec::new();
        if k == 0 || radius < 1 {
            return out;
        }
        loop {
            let c: Vec<i64> = digits.iter().map(|&d| d as i64 - radius).collect();
            if c.iter().any(|&x| x != 0) {
                let mut norm = 0i64;
                for x in 0..k {
                    if c[x] == 0 {
                        continue;
                    }
                    for y in 0..k {
                        norm += c[x] * c[y] * g[coords[x]][coords[y]];
                    }
                }
                if norm == target {
                    let mut v = vec![0i64; self.rank()];
                    for (x, &p) in coords.iter().enumerate() {
                        v[p] = c[x];
                    }
                    out.push(LatVector::from_i64(&v));
                }
            }
            if !advance(&mut digits, width) {
                break;
            }
        }
        out
    }
}

/// Odometer step, last digit fastest. Returns false after wrapping.
fn advance(digits: &mut [usize], base: usize) -> bool {
    for d in digits.iter_mut().rev() {
        *d += 1;
        if *d < base {
            return true;
        }
        *d = 0;
    }
    false
}

fn next_combination(pos: &mut [usize], n: usize) -> bool {
    let k = pos.len();
    for i in (0..k).rev() {
        if pos[i] < n - k + i {
            pos[i] += 1;
            for j in i + 1..k {
                pos[j] = pos[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Parses expressions such as `U + U + U + E8(-1) + E8(-1) + <-2>`.
///
/// Summands: `U`, `E8`, `A2` (each with an optional integer scale in
/// parentheses), `<n>`, and `Lambda`; any summand may carry a repetition
/// prefix `k*`.
impl FromStr for Lattice {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        let mut p = ExprParser {
            src: s.as_bytes(),
            pos: 0,
        };
        let mut parts = Vec::new();
        loop {
            parts.extend(p.summand()?);
            p.skip_ws();
            match p.peek() {
                None => break,
                Some(b'+') => p.pos += 1,
                Some(c) => return Err(ParseError::new(p.pos, format!("unexpected '{}'", c as char))),
            }
        }
        Ok(Lattice::direct_sum(&parts))
    }
}

const MAX_REPEAT: i64 = 64;
const MAX_SCALE: i64 = 1 << 20;

struct ExprParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl ExprParser<'_> {
    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(|c| c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn integer(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.peek(), Some(b'-' | b'+')) {
            self.pos += 1;
        }
        let digits = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == digits {
            return Err(ParseError::new(start, "expected integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<i64>()
            .ok()
            .filter(|v| v.abs() <= MAX_SCALE)
            .ok_or_else(|| ParseError::new(start, "integer out of range"))
    }

    fn expect(&mut self, c: u8) -> Result<(), ParseError> {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(ParseError::new(self.pos, format!("expected '{}'", c as char)))
        }
    }

    fn optional_scale(&mut self) -> Result<i64, ParseError> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let k = self.integer()?;
            self.expect(b')')?;
            Ok(k)
        } else {
            Ok(1)
        }
    }

    fn keyword(&mut self, word: &str) -> bool {
        let w = word.as_bytes();
        if self.src[self.pos..].starts_with(w) {
            let next = self.src.get(self.pos + w.len());
            if next.is_none_or(|c| !c.is_ascii_alphanumeric()) {
                self.pos += w.len();
                return true;
            }
        }
        false
    }

    fn summand(&mut self) -> Result<Vec<Lattice>, ParseError> {
        self.skip_ws();
        let mut repeat = 1;
        if self.peek().is_some_and(|c| c.is_ascii_digit()) {
            let at = self.pos;
            repeat = self.integer()?;
            if !(1..=MAX_REPEAT).contains(&repeat) {
                return Err(ParseError::new(at, "repetition count out of range"));
            }
            self.expect(b'*')?;
            self.skip_ws();
        }
        let at = self.pos;
        let atom = if self.keyword("Lambda") {
            Lattice::lambda()
        } else if self.keyword("U") {
            Lattice::hyperbolic_plane().scaled(self.optional_scale()?)
        } else if self.keyword("E8") {
            Lattice::e8(self.optional_scale()?)
        } else if self.keyword("A2") {
            Lattice::a2(self.optional_scale()?)
        } else if self.peek() == Some(b'<') {
            self.pos += 1;
            let n = self.integer()?;
            self.expect(b'>')?;
            Lattice::rank_one(n)
        } else {
            return Err(ParseError::new(at, "expected U, E8, A2, Lambda or <n>"));
        };
        Ok(vec![atom; repeat as usize])
    }
}

/// Integer kernel of a single row over Z, as used by the complement
/// construction; exposed for testing the saturation property.
pub fn integer_row_kernel(row: &[Integer]) -> Result<Vec<LatVector>, ExactError> {
    let m = ZMatrix::from_rows(vec![row.to_vec()])?;
    let snf = smith_normal_form(&m);
    let start = usize::from(row.iter().any(|x| !x.is_zero()));
    Ok((start..row.len()).map(|j| LatVector(snf.right.column(j))).collect())
}

/// `|det|` of a lattice.
pub fn abs_discriminant(l: &Lattice) -> Integer {
    l.determinant().abs()
}
