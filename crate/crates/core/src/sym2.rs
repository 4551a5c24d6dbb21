//! The symmetric square of a lattice's rational span with the pairing
//!
//! ```text
//! <a1 a2, a3 a4> = (a1,a2)(a3,a4) + (a1,a3)(a2,a4) + (a1,a4)(a2,a3)
//! ```
//!
//! and the distinguished class `q^vee` built from the inverse Gram matrix.
//!
//! Coordinates are taken on the monomial basis `a_i a_j`, `i <= j`, in
//! row-major order. A symmetric sum `sum_{ij} m_ij a_i a_j` over *all*
//! ordered pairs therefore has coordinate `m_ii` on `a_i^2` and `2 m_ij` on
//! `a_i a_j` for `i < j`.

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{
    det, inverse, kernel_basis, rank, rat, rat_int, square_class, ExactError, Integer, QMatrix, Rational,
};
use crate::lattice::{LatVector, Lattice, LatticeError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sym2Error {
    #[error("lattice is degenerate")]
    Degenerate,
    #[error("vector is isotropic")]
    Isotropic,
    #[error("expected (h,h) = {expected}, got {got}")]
    WrongNorm { expected: Integer, got: Integer },
    #[error("element has {got} coordinates, space has dimension {dim}")]
    DimensionMismatch { dim: usize, got: usize },
    #[error("check failed: {0}")]
    CheckFailed(String),
    #[error("{0}")]
    Lattice(#[from] LatticeError),
    #[error("{0}")]
    Exact(#[from] ExactError),
}

/// Rational coordinates on the monomial basis of a [`Sym2Space`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Sym2Element {
    coords: Vec<Rational>,
}

impl Sym2Element {
    pub fn zero(dim: usize) -> Self {
        Sym2Element {
            coords: vec![Rational::zero(); dim],
        }
    }

    pub fn from_coords(coords: Vec<Rational>) -> Self {
        Sym2Element { coords }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn scale(&self, k: &Rational) -> Self {
        Sym2Element {
            coords: self.coords.iter().map(|x| x * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        Sym2Element {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Sym2Element {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| a - b).collect(),
        }
    }

    /// `a*self + b*other`.
    pub fn combine(a: &Rational, x: &Self, b: &Rational, y: &Self) -> Self {
        x.scale(a).add(&y.scale(b))
    }

    fn nonzero(&self) -> impl Iterator<Item = (usize, &Rational)> {
        self.coords.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }
}

/// One nonzero coordinate, `(i, j, coefficient)` with `i <= j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SparseTerm {
    pub i: usize,
    pub j: usize,
    pub coeff: String,
}

#[derive(Clone, Debug)]
pub struct Sym2Space {
    base: Lattice,
    index: Vec<(usize, usize)>,
    pairing: QMatrix,
}

impl Sym2Space {
    /// Builds the monomial basis and the induced pairing matrix.
    pub fn new(base: Lattice) -> Self {
        let n = base.rank();
        let mut index = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                index.push((i, j));
            }
        }
        let g = base.gram();
        let pairing = QMatrix::from_fn(index.len(), index.len(), |a, b| {
            let (i, j) = index[a];
            let (k, l) = index[b];
            Rational::from_integer(&g[(i, j)] * &g[(k, l)] + &g[(i, k)] * &g[(j, l)] + &g[(i, l)] * &g[(j, k)])
        });
        Sym2Space { base, index, pairing }
    }

    pub fn base(&self) -> &Lattice {
        &self.base
    }

    pub fn dim(&self) -> usize {
        self.index.len()
    }

    pub fn index(&self) -> &[(usize, usize)] {
        &self.index
    }

    pub fn pairing_matrix(&self) -> &QMatrix {
        &self.pairing
    }

    pub fn position(&self, i: usize, j: usize) -> usize {
        let n = self.base.rank();
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * n - i * (i + 1) / 2 + j
    }

    fn check(&self, x: &Sym2Element) -> Result<(), Sym2Error> {
        if x.coords.len() == self.dim() {
            Ok(())
        } else {
            Err(Sym2Error::DimensionMismatch {
                dim: self.dim(),
                got: x.coords.len(),
            })
        }
    }

    pub fn monomial(&self, i: usize, j: usize) -> Sym2Element {
        let mut x = Sym2Element::zero(self.dim());
        x.coords[self.position(i, j)] = Rational::one();
        x
    }

    /// The product `v w` of two vectors of the base (rational coordinates).
    pub fn product(&self, v: &[Rational], w: &[Rational]) -> Sym2Element {
        let coords = self
            .index
            .iter()
            .map(|&(k, l)| {
                if k == l {
                    &v[k] * &w[k]
                } else {
                    &v[k] * &w[l] + &v[l] * &w[k]
                }
            })
            .collect();
        Sym2Element { coords }
    }

    pub fn product_lat(&self, v: &LatVector, w: &LatVector) -> Sym2Element {
        self.product(&to_rational(v), &to_rational(w))
    }

    pub fn square_lat(&self, v: &LatVector) -> Sym2Element {
        self.product_lat(v, v)
    }

    pub fn pair(&self, x: &Sym2Element, y: &Sym2Element) -> Result<Rational, Sym2Error> {
        self.check(x)?;
        self.check(y)?;
        let ys: Vec<(usize, &Rational)> = y.nonzero().collect();
        let mut acc = Rational::zero();
        for (a, xa) in x.nonzero() {
            for &(b, yb) in &ys {
                let p = &self.pairing[(a, b)];
                if !p.is_zero() {
                    acc += xa * yb * p;
                }
            }
        }
        Ok(acc)
    }

    /// `<x, m>` for every monomial `m`.
    pub fn pairing_row(&self, x: &Sym2Element) -> Result<Vec<Rational>, Sym2Error> {
        self.check(x)?;
        let mut row = vec![Rational::zero(); self.dim()];
        for (a, xa) in x.nonzero() {
            for (b, r) in row.iter_mut().enumerate() {
                let p = &self.pairing[(a, b)];
                if !p.is_zero() {
                    *r += xa * p;
                }
            }
        }
        Ok(row)
    }

    /// `q^vee = sum_{ij} m_ij a_i a_j` with `(m_ij)` the inverse Gram matrix.
    pub fn q_dual(&self) -> Result<Sym2Element, Sym2Error> {
        let g = self.base.gram().to_rational();
        let m = inverse(&g).map_err(|e| match e {
            ExactError::Singular => Sym2Error::Degenerate,
            other => other.into(),
        })?;
        Ok(self.symmetric_tensor(&m))
    }

    /// Image of a symmetric matrix `sum_{ij} m_ij a_i a_j`.
    pub fn symmetric_tensor(&self, m: &QMatrix) -> Sym2Element {
        let two = rat_int(2);
        let coords = self
            .index
            .iter()
            .map(|&(i, j)| if i == j { m[(i, i)].clone() } else { &m[(i, j)] * &two })
            .collect();
        Sym2Element { coords }
    }

    /// Contraction with `h`: `a b -> (h,a) b + (h,b) a`. Its kernel is
    /// `Sym^2(h^perp)` whenever `(h,h) != 0`.
    pub fn contraction(&self, h: &LatVector, x: &Sym2Element) -> Result<Vec<Rational>, Sym2Error> {
        self.check(x)?;
        let hk: Vec<Rational> = self
            .base
            .pairing_row(h)?
            .into_iter()
            .map(Rational::from_integer)
            .collect();
        let mut out = vec![Rational::zero(); self.base.rank()];
        for (a, c) in x.nonzero() {
            let (i, j) = self.index[a];
            out[j] += c * &hk[i];
            out[i] += c * &hk[j];
        }
        Ok(out)
    }

    pub fn contraction_matrix(&self, h: &LatVector) -> Result<QMatrix, Sym2Error> {
        let hk = self.base.pairing_row(h)?;
        let n = self.base.rank();
        let mut m = QMatrix::zeros(n, self.dim());
        for (a, &(i, j)) in self.index.iter().enumerate() {
            m[(j, a)] += Rational::from_integer(hk[i].clone());
            m[(i, a)] += Rational::from_integer(hk[j].clone());
        }
        Ok(m)
    }

    pub fn sparse_terms(&self, x: &Sym2Element) -> Vec<SparseTerm> {
        x.nonzero()
            .map(|(a, c)| {
                let (i, j) = self.index[a];
                SparseTerm {
                    i,
                    j,
                    coeff: c.to_string(),
                }
            })
            .collect()
    }
}

pub fn to_rational(v: &LatVector) -> Vec<Rational> {
    v.0.iter().map(|x| Rational::from_integer(x.clone())).collect()
}

fn norm_of(space: &Sym2Space, h: &LatVector) -> Result<Integer, Sym2Error> {
    let n = space.base.norm(h)?;
    if n.is_zero() {
        return Err(Sym2Error::Isotropic);
    }
    Ok(n)
}

/// `q^vee = (h,h)^{-1} h^2 + q_h^vee`, with `q_h^vee` built from the form
/// restricted to `h^perp`.
#[derive(Clone, Debug)]
pub struct QDecomposition {
    pub q_h_dual: Sym2Element,
    pub residual: Sym2Element,
}

pub fn qdecomp_check(space: &Sym2Space, h: &LatVector) -> Result<QDecomposition, Sym2Error> {
    let hh = norm_of(space, h)?;
    let q = space.q_dual()?;
    let primitive = LatVector(h.0.iter().map(|x| x / h.content()).collect());
    let perp = space.base.orthogonal_complement(&primitive)?;
    let m = inverse(&perp.lattice.gram().to_rational())?;
    let basis: Vec<Vec<Rational>> = perp.basis.iter().map(to_rational).collect();
    let mut q_h_dual = Sym2Element::zero(space.dim());
    for (a, ba) in basis.iter().enumerate() {
        for (b, bb) in basis.iter().enumerate() {
            let c = &m[(a, b)];
            if c.is_zero() {
                continue;
            }
            // ordered-pair sum: each unordered product appears twice
            q_h_dual = q_h_dual.add(&space.product(ba, bb).scale(c));
        }
    }
    let h2 = space.square_lat(h).scale(&Rational::new(Integer::one(), hh));
    let residual = q.sub(&h2).sub(&q_h_dual);
    Ok(QDecomposition { q_h_dual, residual })
}

/// The level decomposition `C h^2 + C q^vee`, `C h (x) h^perp`, `W(h)` of
/// the symmetric square, with the orthogonal projectors onto each summand.
#[derive(Clone, Debug)]
pub struct DecompositionReport {
    pub dims: [usize; 3],
    /// Columns: `h^2`, `q^vee`.
    pub tautological: Vec<Sym2Element>,
    /// Columns: `h b_i` for a basis `b_i` of `h^perp`.
    pub mixed: Vec<Sym2Element>,
    /// Rational basis of `W(h) = (q^vee)^perp ∩ Sym^2(h^perp)`.
    pub w_basis: Vec<Sym2Element>,
    pub projectors: [QMatrix; 3],
    /// Generator of `(C h^2 + C q^vee) ∩ (q^vee)^perp`, as `(a, b)` for `a h^2 + b q^vee`.
    pub perp_to_q_span: (Rational, Rational),
    /// Generator of `(C h^2 + C q^vee) ∩ Sym^2(h^perp)`.
    pub in_sym2_perp_span: (Rational, Rational),
}

fn normalize_pair(v: &[Rational]) -> (Rational, Rational) {
    let lead = if v[0].is_zero() { v[1].clone() } else { v[0].clone() };
    (&v[0] / &lead, &v[1] / &lead)
}

fn projector(space: &Sym2Space, cols: &[Sym2Element]) -> Result<(QMatrix, QMatrix), Sym2Error> {
    let rows: Vec<Vec<Rational>> = cols.iter().map(|c| space.pairing_row(c)).collect::<Result<_, _>>()?;
    let r = QMatrix::from_rows(rows)?;
    let b = QMatrix::from_columns(&cols.iter().map(|c| c.coords.clone()).collect::<Vec<_>>())?;
    let gram = r.checked_mul(&b)?;
    let dual = inverse(&gram)?.checked_mul(&r)?;
    Ok((b.checked_mul(&dual)?, dual))
}

pub fn decompose_h4(space: &Sym2Space, h: &LatVector) -> Result<DecompositionReport, Sym2Error> {
    norm_of(space, h)?;
    let q = space.q_dual()?;
    let h2 = space.square_lat(h);
    let perp = space.base.orthogonal_complement(h)?;
    let mixed: Vec<Sym2Element> = perp.basis.iter().map(|b| space.product_lat(h, b)).collect();

    let contraction = space.contraction_matrix(h)?;
    let mut conditions = contraction.to_rows();
    conditions.push(space.pairing_row(&q)?);
    let w_basis: Vec<Sym2Element> = kernel_basis(&QMatrix::from_rows(conditions)?)
        .into_iter()
        .map(Sym2Element::from_coords)
        .collect();

    let tautological = vec![h2.clone(), q.clone()];
    let (p0, _) = projector(space, &tautological)?;
    let (p1, _) = projector(space, &mixed)?;
    let p2 = &(&QMatrix::identity(space.dim()) - &p0) - &p1;

    // spans inside C h^2 + C q^vee
    let hq = space.pair(&h2, &q)?;
    let qq = space.pair(&q, &q)?;
    let k = kernel_basis(&QMatrix::from_rows(vec![vec![hq, qq]])?);
    let perp_to_q_span = normalize_pair(&k[0]);
    let ch = space.contraction(h, &h2)?;
    let cq = space.contraction(h, &q)?;
    let m = QMatrix::from_columns(&[ch, cq])?;
    let k = kernel_basis(&m);
    if k.len() != 1 {
        return Err(Sym2Error::CheckFailed(format!(
            "expected a line in C h^2 + C q^vee inside Sym^2(h^perp), got dimension {}",
            k.len()
        )));
    }
    let in_sym2_perp_span = normalize_pair(&k[0]);

    Ok(DecompositionReport {
        dims: [tautological.len(), mixed.len(), w_basis.len()],
        tautological,
        mixed,
        w_basis,
        projectors: [p0, p1, p2],
        perp_to_q_span,
        in_sym2_perp_span,
    })
}

impl DecompositionReport {
    /// `P_i P_j = delta_ij P_i`, `sum P_i = 1`, `trace P_i = dim_i`, and each
    /// projector fixes its own summand.
    pub fn verify(&self, space: &Sym2Space) -> Result<Vec<(String, bool)>, Sym2Error> {
        let mut out = Vec::new();
        let dim = space.dim();
        out.push(("dims-sum".to_string(), self.dims.iter().sum::<usize>() == dim));
        for (i, pi) in self.projectors.iter().enumerate() {
            for (j, pj) in self.projectors.iter().enumerate() {
                let prod = pi.checked_mul(pj)?;
                let ok = if i == j { &prod == pi } else { prod.is_zero() };
                out.push((format!("P{i}P{j}"), ok));
            }
            let trace: Rational = (0..dim).map(|k| pi[(k, k)].clone()).sum();
            out.push((format!("trace-P{i}"), trace == rat_int(self.dims[i] as i64)));
        }
        let sum = &(&self.projectors[0] + &self.projectors[1]) + &self.projectors[2];
        out.push(("sum-identity".to_string(), sum == QMatrix::identity(dim)));
        let summands = [&self.tautological, &self.mixed, &self.w_basis];
        for (i, s) in summands.iter().enumerate() {
            let fixed = s.iter().all(|v| {
                self.projectors[i]
                    .mul_vec(v.coords())
                    .map(|w| w == v.coords())
                    .unwrap_or(false)
            });
            out.push((format!("P{i}-fixes-summand"), fixed));
        }
        Ok(out)
    }
}

/// The lattice spanned by `h^2` and `2 q^vee / 5`.
#[derive(Clone, Debug)]
pub struct OmegaLattice {
    pub gram: QMatrix,
    pub discriminant: Rational,
    /// Largest `k` with `k^2 | disc`: a bound on the index of any overlattice.
    pub index_bound: Integer,
}

pub fn omega_lattice(space: &Sym2Space, h: &LatVector) -> Result<OmegaLattice, Sym2Error> {
    let hh = norm_of(space, h)?;
    if hh != Integer::from(2) {
        return Err(Sym2Error::WrongNorm {
            expected: Integer::from(2),
            got: hh,
        });
    }
    let gens = [space.square_lat(h), space.q_dual()?.scale(&rat(2, 5))];
    let gram = QMatrix::from_fn(2, 2, |i, j| space.pair(&gens[i], &gens[j]).expect("same space"));
    let discriminant = det(&gram)?;
    let d = discriminant.abs();
    let index_bound = if d.is_integer() {
        largest_square_divisor_root(&d.to_integer())
    } else {
        Integer::one()
    };
    Ok(OmegaLattice {
        gram,
        discriminant,
        index_bound,
    })
}

fn largest_square_divisor_root(n: &Integer) -> Integer {
    let mut k = n.sqrt();
    while !k.is_zero() {
        if (n % (&k * &k)).is_zero() {
            return k;
        }
        k -= 1;
    }
    Integer::one()
}

/// A linear form `x X + y Y` in two rational unknowns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct XYForm {
    pub x: Rational,
    pub y: Rational,
}

impl fmt::Display for XYForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x + {}y", self.x, self.y)
    }
}

/// `<x h^2 + y (2 q^vee / 5), target>` as a form in `(x, y)`.
pub fn pairing_form(space: &Sym2Space, h: &LatVector, target: &Sym2Element) -> Result<XYForm, Sym2Error> {
    let h2 = space.square_lat(h);
    let q = space.q_dual()?.scale(&rat(2, 5));
    Ok(XYForm {
        x: space.pair(&h2, target)?,
        y: space.pair(&q, target)?,
    })
}

/// Pairings that force `2x, 2y` to be integral for integral classes
/// `x h^2 + y (2 q^vee / 5)`.
#[derive(Clone, Debug)]
pub struct HalfIntegerCheck {
    pub beta: LatVector,
    /// Against `beta^2`, `(h,beta) = 1`, `beta^2 = 0`: expected `2x`.
    pub beta_form: XYForm,
    /// Against `gamma delta` with `(gamma,delta) = 1`, as
    /// `(gamma, delta, computed, predicted)` where the prediction is
    /// `2x(1 + (h,gamma)(h,delta)) + 10y`.
    pub pair_forms: Vec<(LatVector, LatVector, XYForm, XYForm)>,
}

impl HalfIntegerCheck {
    pub fn passes(&self) -> bool {
        self.beta_form
            == (XYForm {
                x: rat_int(2),
                y: Rational::zero(),
            })
            && self.pair_forms.iter().all(|(_, _, got, want)| got == want)
    }
}

pub fn half_integer_lattice_check(
    space: &Sym2Space,
    h: &LatVector,
    beta: &LatVector,
    pairs: &[(LatVector, LatVector)],
) -> Result<HalfIntegerCheck, Sym2Error> {
    let lat = space.base();
    let hh = norm_of(space, h)?;
    if hh != Integer::from(2) {
        return Err(Sym2Error::WrongNorm {
            expected: Integer::from(2),
            got: hh,
        });
    }
    if !lat.pairing(h, beta)?.is_one() || !lat.norm(beta)?.is_zero() {
        return Err(Sym2Error::CheckFailed("beta must satisfy (h,beta)=1, beta^2=0".into()));
    }
    let beta_form = pairing_form(space, h, &space.square_lat(beta))?;
    let mut pair_forms = Vec::new();
    for (g, d) in pairs {
        if !lat.pairing(g, d)?.is_one() {
            return Err(Sym2Error::CheckFailed("pairs must satisfy (gamma,delta)=1".into()));
        }
        let got = pairing_form(space, h, &space.product_lat(g, d))?;
        let hg = lat.pairing(h, g)?;
        let hd = lat.pairing(h, d)?;
        let want = XYForm {
            x: Rational::from_integer(Integer::from(2) * (Integer::one() + hg * hd)),
            y: rat_int(10),
        };
        pair_forms.push((g.clone(), d.clone(), got, want));
    }
    Ok(HalfIntegerCheck {
        beta: beta.clone(),
        beta_form,
        pair_forms,
    })
}

/// `<cl, h^2>` and `<cl, w^2> / (w,w)` for `cl = s h^2 + t (2 q^vee / 5)`
/// and `w` orthogonal to `h` with `(w,w) != 0`.
pub fn positivity_forms(space: &Sym2Space, h: &LatVector, w: &LatVector) -> Result<(XYForm, XYForm), Sym2Error> {
    let lat = space.base();
    if !lat.pairing(h, w)?.is_zero() {
        return Err(Sym2Error::CheckFailed("w must be orthogonal to h".into()));
    }
    let ww = Rational::from_integer(lat.norm(w)?);
    if ww.is_zero() {
        return Err(Sym2Error::Isotropic);
    }
    let on_h = pairing_form(space, h, &space.square_lat(h))?;
    let on_w = pairing_form(space, h, &space.square_lat(w))?;
    Ok((
        on_h,
        XYForm {
            x: on_w.x / &ww,
            y: on_w.y / &ww,
        },
    ))
}

/// Pairings of squares for `a1, a2` of norm 2 with odd `(a1,a2)` and
/// isotropic partners `b_i` with `(a_i, b_i) = 1`.
#[derive(Clone, Debug)]
pub struct SquarePairings {
    pub with_partner: [Rational; 2],
    pub mutual: Rational,
}

impl SquarePairings {
    /// `<a_i^2, b_i^2> = 2` bounds the divisibility of `a_i^2` by 2, and
    /// `<a1^2, a2^2> = 4 + 2 (a1,a2)^2` is not divisible by 4.
    pub fn rules_out_common_halving(&self) -> bool {
        let four = rat_int(4);
        self.with_partner.iter().all(|p| *p == rat_int(2))
            && self.mutual.is_integer()
            && !(&self.mutual / &four).is_integer()
    }
}

pub fn square_pairings(
    space: &Sym2Space,
    alphas: [&LatVector; 2],
    betas: [&LatVector; 2],
) -> Result<SquarePairings, Sym2Error> {
    let lat = space.base();
    for (a, b) in alphas.iter().zip(&betas) {
        let na = lat.norm(a)?;
        if na != Integer::from(2) {
            return Err(Sym2Error::WrongNorm {
                expected: Integer::from(2),
                got: na,
            });
        }
        if !lat.pairing(a, b)?.is_one() || !lat.norm(b)?.is_zero() {
            return Err(Sym2Error::CheckFailed("partner must satisfy (a,b)=1, b^2=0".into()));
        }
    }
    if (lat.pairing(alphas[0], alphas[1])? % 2u32).is_zero() {
        return Err(Sym2Error::CheckFailed("(a1,a2) must be odd".into()));
    }
    let sq = |v: &LatVector| space.square_lat(v);
    Ok(SquarePairings {
        with_partner: [
            space.pair(&sq(alphas[0]), &sq(betas[0]))?,
            space.pair(&sq(alphas[1]), &sq(betas[1]))?,
        ],
        mutual: space.pair(&sq(alphas[0]), &sq(alphas[1]))?,
    })
}

/// Two Gram determinants on the same rational space `Q h (x) h^perp` whose
/// square classes disagree.
#[derive(Clone, Debug)]
pub struct SquareClassObstruction {
    /// `|det|` of four times a rank-22 form of discriminant 3.
    pub pulled_back_det: Integer,
    /// `|det|` of `<h b_i, h b_j>` for a Z-basis `b_i` of `h^perp`.
    pub product_basis_det: Integer,
    pub perp_discriminant: Integer,
    pub class_a: Integer,
    pub class_b: Integer,
    pub distinct: bool,
}

/// Rank-22 even lattice of discriminant 3: `E8^2 + U^2 + A2`.
pub fn primitive_cubic_lattice() -> Lattice {
    let u = Lattice::hyperbolic_plane();
    Lattice::direct_sum(&[Lattice::e8(1), Lattice::e8(1), u.clone(), u, Lattice::a2(1)])
}

pub fn square_class_obstruction(space: &Sym2Space, h: &LatVector) -> Result<SquareClassObstruction, Sym2Error> {
    let prim = primitive_cubic_lattice();
    let pulled = prim.scaled(4);
    let pulled_back_det = pulled.determinant().abs();

    let perp = space.base().orthogonal_complement(h)?;
    let perp_discriminant = perp.lattice.determinant().abs();
    let products: Vec<Sym2Element> = perp.basis.iter().map(|b| space.product_lat(h, b)).collect();
    let k = products.len();
    let gram = QMatrix::from_fn(k, k, |i, j| space.pair(&products[i], &products[j]).expect("same space"));
    let hh = Rational::from_integer(space.base().norm(h)?);
    let expected = perp.lattice.gram().to_rational().scaled(&hh);
    if gram != expected {
        return Err(Sym2Error::CheckFailed(
            "<h b_i, h b_j> differs from (h,h)(b_i,b_j)".into(),
        ));
    }
    let product_basis_det = det(&gram)?.abs().to_integer();
    let class_a = square_class(&Rational::from_integer(pulled_back_det.clone()))?;
    let class_b = square_class(&Rational::from_integer(product_basis_det.clone()))?;
    Ok(SquareClassObstruction {
        distinct: class_a != class_b,
        pulled_back_det,
        product_basis_det,
        perp_discriminant,
        class_a,
        class_b,
    })
}

/// Rank of a family of elements.
pub fn span_rank(elems: &[Sym2Element]) -> usize {
    if elems.is_empty() {
        return 0;
    }
    let rows = elems.iter().map(|e| e.coords.clone()).collect();
    rank(&QMatrix::from_rows(rows).expect("equal lengths"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::int;

    fn lambda_h() -> (Sym2Space, LatVector) {
        let mut h = LatVector::zero(23);
        h.0[0] = int(1);
        h.0[1] = int(1);
        (Sym2Space::new(Lattice::lambda()), h)
    }

    #[test]
    fn positions_are_row_major() {
        let s = Sym2Space::new(Lattice::hyperbolic_plane());
        assert_eq!(s.index(), &[(0, 0), (0, 1), (1, 1)]);
        let s = Sym2Space::new(Lattice::lambda());
        for (a, &(i, j)) in s.index().iter().enumerate() {
            assert_eq!(s.position(i, j), a);
            assert_eq!(s.position(j, i), a);
        }
        assert_eq!(s.dim(), 276);
    }

    #[test]
    fn rank_one_square() {
        let s = Sym2Space::new(Lattice::rank_one(2));
        let h2 = s.monomial(0, 0);
        assert_eq!(s.pair(&h2, &h2).unwrap(), rat_int(12));
    }

    #[test]
    fn hyperbolic_plane_products() {
        let s = Sym2Space::new(Lattice::hyperbolic_plane());
        let ef = s.monomial(0, 1);
        assert_eq!(s.pair(&ef, &ef).unwrap(), rat_int(2));
        let q = s.q_dual().unwrap();
        assert_eq!(q.coords(), &[rat_int(0), rat_int(2), rat_int(0)]);
        assert_eq!(s.pair(&q, &ef).unwrap(), rat_int(4));
    }

    #[test]
    fn isotropic_partner_pairing() {
        // (a,b) = 1, a^2 = 2, b^2 = 0 inside U: a = e + f, b = f
        let s = Sym2Space::new(Lattice::hyperbolic_plane());
        let a = LatVector::from_i64(&[1, 1]);
        let b = LatVector::from_i64(&[0, 1]);
        assert_eq!(s.pair(&s.square_lat(&a), &s.square_lat(&b)).unwrap(), rat_int(2));
    }

    #[test]
    fn degenerate_lattice_has_no_q_dual() {
        let s = Sym2Space::new(Lattice::rank_one(0));
        assert_eq!(s.q_dual(), Err(Sym2Error::Degenerate));
    }

    #[test]
    fn qdecomp_in_u() {
        let s = Sym2Space::new(Lattice::hyperbolic_plane());
        let h = LatVector::from_i64(&[1, 1]);
        let d = qdecomp_check(&s, &h).unwrap();
        assert!(d.residual.is_zero());
        assert_eq!(d.q_h_dual.coords(), &[rat(-1, 2), rat_int(1), rat(-1, 2)]);
        let d2 = qdecomp_check(&s, &h.scaled(2)).unwrap();
        assert!(d2.residual.is_zero());
        assert_eq!(
            qdecomp_check(&s, &LatVector::from_i64(&[1, 0])).unwrap_err(),
            Sym2Error::Isotropic
        );
    }

    #[test]
    fn qdecomp_in_lambda() {
        let (s, h) = lambda_h();
        assert!(qdecomp_check(&s, &h).unwrap().residual.is_zero());
    }

    #[test]
    fn omega_in_lambda() {
        let (s, h) = lambda_h();
        let o = omega_lattice(&s, &h).unwrap();
        assert_eq!(o.gram, QMatrix::from_i64(&[&[12, 20], &[20, 92]]).unwrap());
        assert_eq!(o.discriminant, rat_int(704));
        assert_eq!(o.index_bound, int(8));
        assert!(matches!(
            omega_lattice(&s, &h.scaled(2)),
            Err(Sym2Error::WrongNorm { .. })
        ));
    }

    #[test]
    fn largest_square_divisor() {
        assert_eq!(largest_square_divisor_root(&int(704)), int(8));
        assert_eq!(largest_square_divisor_root(&int(12)), int(2));
        assert_eq!(largest_square_divisor_root(&int(7)), int(1));
    }

    #[test]
    fn half_integrality_witnesses() {
        let (s, h) = lambda_h();
        let lat = s.base().clone();
        let beta = lat.find_isotropic_partner(&h, Default::default()).unwrap();
        let e = |i| LatVector::basis(23, i);
        let pairs = vec![(e(2), e(3)), (e(0), e(1))];
        let c = half_integer_lattice_check(&s, &h, &beta, &pairs).unwrap();
        assert_eq!(
            c.beta_form,
            XYForm {
                x: rat_int(2),
                y: rat_int(0)
            }
        );
        assert_eq!(
            c.pair_forms[0].2,
            XYForm {
                x: rat_int(2),
                y: rat_int(10)
            }
        );
        assert_eq!(
            c.pair_forms[1].2,
            XYForm {
                x: rat_int(4),
                y: rat_int(10)
            }
        );
        assert!(c.passes());
    }

    #[test]
    fn obstruction() {
        let (s, h) = lambda_h();
        let o = square_class_obstruction(&s, &h).unwrap();
        assert_eq!(o.pulled_back_det, int(3) * int(2).pow(44u32));
        assert_eq!(o.product_basis_det, int(2).pow(24u32));
        assert_eq!(o.perp_discriminant, int(4));
        assert_eq!((o.class_a.clone(), o.class_b.clone()), (int(3), int(1)));
        assert!(o.distinct);
    }

    #[test]
    fn primitive_cubic_lattice_invariants() {
        let l = primitive_cubic_lattice();
        assert_eq!(l.rank(), 22);
        assert_eq!(l.determinant(), int(3));
        assert_eq!(l.signature().positive, 20);
    }

    #[test]
    fn decomposition_in_lambda() {
        let (s, h) = lambda_h();
        let d = decompose_h4(&s, &h).unwrap();
        assert_eq!(d.dims, [2, 22, 252]);
        assert_eq!(d.perp_to_q_span, (rat_int(1), rat(-2, 23)));
        assert_eq!(d.in_sym2_perp_span, (rat_int(1), rat_int(-2)));
        for (name, ok) in d.verify(&s).unwrap() {
            assert!(ok, "{name}");
        }
    }

    #[test]
    fn positivity_bookkeeping() {
        let (s, h) = lambda_h();
        // e - f of the block containing h, and e of a second block plus f
        let w1 = LatVector::from_i64(&{
            let mut v = [0i64; 23];
            v[0] = 1;
            v[1] = -1;
            v
        });
        let w2 = LatVector::basis(23, 2).add(&LatVector::basis(23, 3));
        for w in [w1, w2] {
            let (on_h, on_w) = positivity_forms(&s, &h, &w).unwrap();
            assert_eq!(
                on_h,
                XYForm {
                    x: rat_int(12),
                    y: rat_int(20)
                }
            );
            assert_eq!(
                on_w,
                XYForm {
                    x: rat_int(2),
                    y: rat_int(10)
                }
            );
        }
    }

    #[test]
    fn square_pairings_with_odd_product() {
        let s = Sym2Space::new(Lattice::lambda());
        // a1 = e1 + f1, a2 = e1 + e2 + f2: both norm 2, (a1,a2) = 1
        let e = |i| LatVector::basis(23, i);
        let a1 = e(0).add(&e(1));
        let a2 = e(0).add(&e(2)).add(&e(3));
        let lat = s.base();
        let b1 = lat.find_isotropic_partner(&a1, Default::default()).unwrap();
        let b2 = lat.find_isotropic_partner(&a2, Default::default()).unwrap();
        let p = square_pairings(&s, [&a1, &a2], [&b1, &b2]).unwrap();
        assert_eq!(p.with_partner, [rat_int(2), rat_int(2)]);
        assert_eq!(p.mutual, rat_int(6));
        assert!(p.rules_out_common_halving());
    }
}
