//! Singular cubic fourfolds in `P^5`: projection from a node, the surface of
//! lines through it, two-node discriminants, branch divisors, and auxiliary
//! cubics attached to rational normal curves.
//!
//! Coordinates on `P^5` are `X0..X5`. After [`adapt_to_node`] the node is
//! `e5` and the cubic reads `F(X0..X4) X5 + G(X0..X4)`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::Rng;
use thiserror::Error;

use crate::exact::{inverse, kernel_basis, rank, rat, rat_int, smith_normal_form, Integer, QMatrix, Rational, ZMatrix};
use crate::poly::{
    jacobian_rank_at, linear_conditions_kernel, monomials, poly_det, quadratic_form_matrix, quadratic_form_rank,
    random_form, rational_normal_curve, BinaryForm, MultiPoly, PolyError, ProjPoint, UniPoly, Vanishing,
};
use crate::text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CubicError {
    #[error("expected a cubic form in {0} variables")]
    NotCubic(usize),
    #[error("point is not a singular point of the cubic")]
    NotSingular,
    #[error("singularity is not quadratic: the cubic is a cone with vertex at the point")]
    NotQuadratic,
    #[error("point lies on V(F,G): projection is indeterminate there")]
    Indeterminate,
    #[error("point does not lie on the cubic")]
    NotOnCubic,
    #[error("point coincides with the node")]
    AtNode,
    #[error("the cubic is not singular at both coordinate points e4, e5")]
    NotNodes,
    #[error("expected degrees {expected:?}, got {got:?}")]
    DegreeMismatch { expected: Vec<u32>, got: Vec<Option<u32>> },
    #[error("net forms are linearly dependent or not binary cubics")]
    DegenerateNet,
    #[error("sampling did not determine a unique cubic (kernel dimension {0})")]
    Underdetermined(usize),
    #[error("no cubic passes through the sampled points")]
    NoCubic,
    #[error("identity check failed: {0}")]
    IdentityFailed(String),
    #[error("{0}")]
    Poly(#[from] PolyError),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

fn check_form(p: &MultiPoly, nvars: usize, degree: u32) -> Result<(), CubicError> {
    if p.nvars() != nvars || !p.is_homogeneous() || p.degree() != Some(degree) {
        return Err(CubicError::DegreeMismatch {
            expected: vec![degree],
            got: vec![p.degree()],
        });
    }
    Ok(())
}

/// Drops the (absent) last variable.
fn drop_last(p: &MultiPoly) -> MultiPoly {
    let n = p.nvars() - 1;
    MultiPoly::from_terms(
        n,
        p.terms().map(|(e, c)| {
            debug_assert_eq!(e[n], 0);
            (c.clone(), e[..n].to_vec())
        }),
    )
}

/// A cubic with a quadratic singularity at `e5`: `F X5 + G`.
#[derive(Clone, Debug)]
pub struct CubicWithNode {
    pub f: MultiPoly,
    pub g: MultiPoly,
    /// Integer matrix `U` with `U e5 = p`; the adapted cubic is `cubic(U y)`.
    pub change: ZMatrix,
    pub adapted: MultiPoly,
}

impl CubicWithNode {
    pub fn from_fg(f: MultiPoly, g: MultiPoly) -> Result<Self, CubicError> {
        check_form(&f, 5, 2)?;
        check_form(&g, 5, 3)?;
        let z = MultiPoly::var(6, 5);
        let adapted = &(&f.extend_vars(6) * &z) + &g.extend_vars(6);
        Ok(CubicWithNode {
            f,
            g,
            change: ZMatrix::identity(6),
            adapted,
        })
    }

    /// Reconstruction `F X5 + G`.
    pub fn reconstruct(&self) -> MultiPoly {
        &(&self.f.extend_vars(6) * &MultiPoly::var(6, 5)) + &self.g.extend_vars(6)
    }

    /// Adapted coordinates back to the original ones.
    pub fn to_original(&self, y: &ProjPoint) -> ProjPoint {
        let u = self.change.to_rational();
        ProjPoint::new(u.mul_vec(y.coords()).expect("6 coordinates")).expect("U invertible")
    }

    /// `[F(x) x, -G(x)]`: the point of the cubic on the line through `e5`
    /// and `x`, other than `e5`.
    pub fn psi_inverse(&self, x: &ProjPoint) -> Result<ProjPoint, CubicError> {
        let fx = self.f.eval_point(x)?;
        let gx = self.g.eval_point(x)?;
        if fx.is_zero() && gx.is_zero() {
            return Err(CubicError::Indeterminate);
        }
        let mut coords: Vec<Rational> = x.coords().iter().map(|c| c * &fx).collect();
        coords.push(-gx);
        let y = ProjPoint::new(coords)?;
        if !self.adapted.eval_point(&y)?.is_zero() {
            return Err(CubicError::IdentityFailed("psi_inverse left the cubic".into()));
        }
        Ok(y)
    }

    /// Projection from `e5`.
    pub fn project(&self, y: &ProjPoint) -> Result<ProjPoint, CubicError> {
        let a = y.coords()[..5].to_vec();
        ProjPoint::new(a).map_err(|_| CubicError::AtNode)
    }

    /// The surface of lines through the node, `V(F, G)` in `P^4`.
    pub fn lines_surface(&self) -> [&MultiPoly; 2] {
        [&self.f, &self.g]
    }

    pub fn sing_correspondence(&self, y: &ProjPoint) -> Result<SingReport, CubicError> {
        if y.dim() != 6 {
            return Err(PolyError::DimensionMismatch {
                expected: 6,
                got: y.dim(),
            }
            .into());
        }
        if !self.adapted.eval_point(y)?.is_zero() {
            return Err(CubicError::NotOnCubic);
        }
        let s = self.project(y)?;
        let b = y.coords()[5].clone();
        let fa = self.f.eval_point(&s)?;
        let ga = self.g.eval_point(&s)?;
        let grad_f: Vec<Rational> = self
            .f
            .gradient()
            .iter()
            .map(|d| d.eval_point(&s))
            .collect::<Result<_, _>>()?;
        let grad_g: Vec<Rational> = self
            .g
            .gradient()
            .iter()
            .map(|d| d.eval_point(&s))
            .collect::<Result<_, _>>()?;
        let y_singular = self
            .adapted
            .gradient()
            .iter()
            .map(|d| d.eval_point(y))
            .collect::<Result<Vec<_>, _>>()?
            .iter()
            .all(Zero::is_zero);
        let jacob = fa.is_zero() && ga.is_zero() && grad_f.iter().zip(&grad_g).all(|(df, dg)| (&b * df + dg).is_zero());
        let on_surface = fa.is_zero() && ga.is_zero();
        let (jacobian_rank, tangent_dim) = if on_surface {
            let r = jacobian_rank_at(&[self.f.clone(), self.g.clone()], &s)?;
            (Some(r), Some(4 - r))
        } else {
            (None, None)
        };
        Ok(SingReport {
            s,
            y_singular,
            jacob_solvable: jacob,
            on_surface,
            surface_singular: jacobian_rank.is_some_and(|r| r < 2),
            jacobian_rank,
            tangent_dim,
            quadric_smooth_at_s: grad_f.iter().any(|c| !c.is_zero()),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SingReport {
    pub s: ProjPoint,
    pub y_singular: bool,
    /// `F(a) = G(a) = 0` and `b dF(a) + dG(a) = 0`.
    pub jacob_solvable: bool,
    pub on_surface: bool,
    pub surface_singular: bool,
    pub jacobian_rank: Option<usize>,
    /// Zariski tangent dimension of `V(F,G)` at `s` inside `P^4`.
    pub tangent_dim: Option<usize>,
    pub quadric_smooth_at_s: bool,
}

/// Integer matrix `U`, unimodular, with `U e_{n-1} = v` for a primitive `v`.
pub fn unimodular_completion(v: &[Integer]) -> ZMatrix {
    let n = v.len();
    let last_basis = v
        .iter()
        .enumerate()
        .all(|(i, x)| if i + 1 == n { x.is_one() } else { x.is_zero() });
    if last_basis {
        return ZMatrix::identity(n);
    }
    let row = ZMatrix::from_rows(vec![v.to_vec()]).expect("one row");
    let snf = smith_normal_form(&row);
    // left * v * right = (1, 0, ..., 0), left = +-1
    let sign = snf.left[(0, 0)].clone();
    let rinv = inverse(&snf.right.to_rational())
        .expect("unimodular")
        .to_integer()
        .expect("integral inverse");
    let u = rinv.transpose();
    ZMatrix::from_fn(n, n, |i, j| {
        if j + 1 == n {
            &u[(i, 0)] * &sign
        } else {
            u[(i, j + 1)].clone()
        }
    })
}

/// Moves the singular point `p` to `e5` and splits off `F`, `G`.
pub fn adapt_to_node(cubic: &MultiPoly, p: &ProjPoint) -> Result<CubicWithNode, CubicError> {
    check_form(cubic, 6, 3).map_err(|_| CubicError::NotCubic(6))?;
    if p.dim() != 6 {
        return Err(PolyError::DimensionMismatch {
            expected: 6,
            got: p.dim(),
        }
        .into());
    }
    if !cubic.eval_point(p)?.is_zero() {
        return Err(CubicError::NotSingular);
    }
    for d in cubic.gradient() {
        if !d.eval_point(p)?.is_zero() {
            return Err(CubicError::NotSingular);
        }
    }
    let change = unimodular_completion(&p.primitive_integer());
    let adapted = cubic.linear_change(&change.to_rational())?;
    for k in [2, 3] {
        if !adapted.coefficient_of_power(5, k).is_zero() {
            return Err(CubicError::NotSingular);
        }
    }
    let f = drop_last(&adapted.coefficient_of_power(5, 1));
    let g = drop_last(&adapted.coefficient_of_power(5, 0));
    if f.is_zero() {
        return Err(CubicError::NotQuadratic);
    }
    Ok(CubicWithNode { f, g, change, adapted })
}

/// `F(F x) (-G) + G(F x)` in five variables; zero for all `F`, `G` of
/// degrees 2 and 3.
pub fn psi_inverse_identity(f: &MultiPoly, g: &MultiPoly) -> MultiPoly {
    let subs: Vec<MultiPoly> = (0..5).map(|i| f * &MultiPoly::var(5, i)).collect();
    let f_sigma = f.substitute(&subs).expect("5 variables");
    let g_sigma = g.substitute(&subs).expect("5 variables");
    &(&f_sigma * &-g) + &g_sigma
}

/// Components of a cubic singular at `e4` and `e5` with `X = X0..X3`,
/// `Z0 = X4`, `Z1 = X5`: cubic `= sum_j A_j X_j`,
/// `A_j = B_j + C_j Z0 + D_j Z1 + F_j Z0 Z1`.
#[derive(Clone, Debug)]
pub struct TwoNodeData {
    pub b_j: Vec<MultiPoly>,
    pub c_j: Vec<MultiPoly>,
    pub d_j: Vec<MultiPoly>,
    pub f_j: Vec<Rational>,
    /// `sum_j B_j X_j` and likewise; polynomials in `X0..X3`.
    pub b: MultiPoly,
    pub c: MultiPoly,
    pub d: MultiPoly,
    pub f: MultiPoly,
    pub m: Vec<Vec<MultiPoly>>,
    pub det_m: MultiPoly,
    /// `2 c d - b f`.
    pub quartic: MultiPoly,
}

/// Monomials in `X0..X3` go to the lowest index `j` that divides them.
fn split_by_lowest_var(p: &MultiPoly) -> Vec<MultiPoly> {
    let mut parts = vec![MultiPoly::zero(4); 4];
    for (e, c) in p.terms() {
        let j = (0..4).find(|&j| e[j] > 0).expect("positive degree in X");
        let mut f = e.clone();
        f[j] -= 1;
        parts[j] = &parts[j] + &MultiPoly::monomial(f, c.clone());
    }
    parts
}

pub fn two_node_discriminant(cubic: &MultiPoly) -> Result<TwoNodeData, CubicError> {
    check_form(cubic, 6, 3).map_err(|_| CubicError::NotCubic(6))?;
    for i in [4, 5] {
        let e = ProjPoint::basis(6, i);
        if !cubic.eval_point(&e)?.is_zero() {
            return Err(CubicError::NotNodes);
        }
        for d in cubic.gradient() {
            if !d.eval_point(&e)?.is_zero() {
                return Err(CubicError::NotNodes);
            }
        }
    }
    let to_x =
        |p: &MultiPoly| -> MultiPoly { MultiPoly::from_terms(4, p.terms().map(|(e, c)| (c.clone(), e[..4].to_vec()))) };
    let part = |a: u32, b: u32| -> MultiPoly {
        let mut out = MultiPoly::zero(6);
        for (e, c) in cubic.terms() {
            if e[4] == a && e[5] == b {
                let mut f = e.clone();
                f[4] = 0;
                f[5] = 0;
                out = &out + &MultiPoly::monomial(f, c.clone());
            }
        }
        to_x(&out)
    };
    let (b, c, d, f) = (part(0, 0), part(1, 0), part(0, 1), part(1, 1));
    let b_j = split_by_lowest_var(&b);
    let c_j = split_by_lowest_var(&c);
    let d_j = split_by_lowest_var(&d);
    let f_j: Vec<Rational> = split_by_lowest_var(&f)
        .iter()
        .map(|p| p.coefficient(&[0, 0, 0, 0]))
        .collect();
    let zero = MultiPoly::zero(4);
    let m = vec![
        vec![b.clone(), c.clone(), d.clone()],
        vec![c.clone(), zero.clone(), f.clone()],
        vec![d.clone(), f.clone(), zero],
    ];
    let det_m = poly_det(&m);
    let quartic = &(&(&c * &d) * &MultiPoly::constant(4, rat_int(2))) - &(&b * &f);
    Ok(TwoNodeData {
        b_j,
        c_j,
        d_j,
        f_j,
        b,
        c,
        d,
        f,
        m,
        det_m,
        quartic,
    })
}

impl TwoNodeData {
    /// `sum_j (B_j + C_j Z0 + D_j Z1 + F_j Z0 Z1) X_j`.
    pub fn reconstruct(&self) -> MultiPoly {
        let z0 = MultiPoly::var(6, 4);
        let z1 = MultiPoly::var(6, 5);
        let z01 = &z0 * &z1;
        let mut out = MultiPoly::zero(6);
        for j in 0..4 {
            let xj = MultiPoly::var(6, j);
            let a = &(&(&self.b_j[j].extend_vars(6) + &(&self.c_j[j].extend_vars(6) * &z0))
                + &(&self.d_j[j].extend_vars(6) * &z1))
                + &z01.scale(&self.f_j[j]);
            out = &out + &(&a * &xj);
        }
        out
    }

    /// `det M - f P`, zero by the factorization.
    pub fn factorization_residual(&self) -> MultiPoly {
        &self.det_m - &(&self.f * &self.quartic)
    }

    /// `dP/dX_s + F_s b - (2 dc d + 2 c dd - db f)` for each `s`; all zero.
    /// On `V(f, c, d)` this gives `dP/dX_s(e) = -F_s b(e)`.
    pub fn gradient_identity_residuals(&self) -> Vec<MultiPoly> {
        let two = MultiPoly::constant(4, rat_int(2));
        (0..4)
            .map(|s| {
                let lhs = &self.quartic.partial(s) + &self.b.scale(&self.f_j[s]);
                let rhs = &(&(&two * &(&self.c.partial(s) * &self.d)) + &(&two * &(&self.c * &self.d.partial(s))))
                    - &(&self.b.partial(s) * &self.f);
                &lhs - &rhs
            })
            .collect()
    }

    /// `P - (2c) d + b f`: `P` lies in the ideal `(f, d)`.
    pub fn first_fiber_residual(&self) -> MultiPoly {
        let two_c = self.c.scale(&rat_int(2));
        &(&self.quartic - &(&two_c * &self.d)) + &(&self.b * &self.f)
    }

    /// `P - (2d) c + b f`: `P` lies in the ideal `(f, c)`.
    pub fn second_fiber_residual(&self) -> MultiPoly {
        let two_d = self.d.scale(&rat_int(2));
        &(&self.quartic - &(&two_d * &self.c)) + &(&self.b * &self.f)
    }

    /// `(P(e), grad P(e), -F_s b(e))` at a point of `V(f, c, d)`.
    pub fn gradient_at(&self, e: &ProjPoint) -> Result<(Rational, Vec<Rational>, Vec<Rational>), CubicError> {
        for p in [&self.f, &self.c, &self.d] {
            if !p.eval_point(e)?.is_zero() {
                return Err(PolyError::NotOnLocus.into());
            }
        }
        let value = self.quartic.eval_point(e)?;
        let grad = self
            .quartic
            .gradient()
            .iter()
            .map(|d| d.eval_point(e))
            .collect::<Result<Vec<_>, _>>()?;
        let be = self.b.eval_point(e)?;
        let predicted = self.f_j.iter().map(|fs| -(fs * &be)).collect();
        Ok((value, grad, predicted))
    }

    /// Whether `b, c, d, f` have no common zero on the line through `u`, `v`.
    pub fn no_common_zero_on_line(&self, u: &[Rational], v: &[Rational]) -> Result<bool, CubicError> {
        let line: Vec<MultiPoly> = (0..4)
            .map(|i| MultiPoly::linear(&[u[i].clone(), v[i].clone()]))
            .collect();
        let mut affine_gcd: Option<UniPoly> = None;
        let mut infinity_common = true;
        for p in [&self.b, &self.c, &self.d, &self.f] {
            let r = p.substitute(&line)?;
            if r.is_zero() {
                continue;
            }
            let form = BinaryForm::from_poly(&r)?;
            let uni = UniPoly::new(form.coeffs().to_vec());
            infinity_common &= uni.degree() < Some(form.degree() as usize);
            affine_gcd = Some(match affine_gcd {
                None => uni,
                Some(g) => g.gcd(&uni),
            });
        }
        Ok(match affine_gcd {
            None => false,
            Some(g) => g.degree() == Some(0) && !infinity_common,
        })
    }
}

/// Random cubic singular at `e4` and `e5` with coefficients in `[-bound, bound]`.
pub fn random_two_node_cubic<R: Rng>(rng: &mut R, bound: i64) -> MultiPoly {
    let b = random_form(rng, 4, 3, bound).extend_vars(6);
    let c = random_form(rng, 4, 2, bound).extend_vars(6);
    let d = random_form(rng, 4, 2, bound).extend_vars(6);
    let f = random_form(rng, 4, 1, bound).extend_vars(6);
    let z0 = MultiPoly::var(6, 4);
    let z1 = MultiPoly::var(6, 5);
    &(&(&b + &(&c * &z0)) + &(&d * &z1)) + &(&f * &(&z0 * &z1))
}

/// `B^2 - 4AC` for `A Z^2 + B Z + C` with `deg A, B, C = 1, 2, 3`.
pub fn branch_divisor(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly) -> Result<MultiPoly, CubicError> {
    let n = a.nvars();
    let degs = [a.degree(), b.degree(), c.degree()];
    let ok = [(a, 1u32), (b, 2), (c, 3)]
        .iter()
        .all(|(p, d)| p.nvars() == n && p.is_homogeneous() && (p.is_zero() || p.degree() == Some(*d)));
    if !ok || a.is_zero() {
        return Err(CubicError::DegreeMismatch {
            expected: vec![1, 2, 3],
            got: degs.to_vec(),
        });
    }
    Ok(&(b * b) - &(&(a * c) * &MultiPoly::constant(n, rat_int(4))))
}

/// Local branch curve `b^2 - 4 a c` of affine functions in `(x, y)`,
/// homogenized to a plane curve with the origin at `[0:0:1]`.
pub fn local_branch_curve(a: &MultiPoly, b: &MultiPoly, c: &MultiPoly) -> MultiPoly {
    let d = &(b * b) - &(&(a * c) * &MultiPoly::constant(a.nvars(), rat_int(4)));
    crate::poly::homogenize(&d)
}

/// Branch curve of `A Z^2 + B Z + C` on the smooth quadric `X0 X3 = X1 X2`
/// with `A = X3`, `B = X0 X1 - X0 X2`, `C = X0^3`, in the chart
/// `(1, u, v, uv)` and homogenized at `[0:0:1]`.
pub fn quadric_branch_witness() -> Result<MultiPoly, CubicError> {
    let q = |s: &str| MultiPoly::parse_with_vars(s, 4);
    let d = branch_divisor(&q("X3")?, &q("X0*X1 - X0*X2")?, &q("X0^3")?)?;
    let u = MultiPoly::var(2, 0);
    let v = MultiPoly::var(2, 1);
    let chart = [MultiPoly::one(2), u.clone(), v.clone(), &u * &v];
    Ok(crate::poly::homogenize(&d.substitute(&chart)?))
}

/// Local branch curve with `a = y^2`, `b = y + x^2`, `c = 1/4 + x + y`:
/// an ordinary triple point at the origin.
pub fn triple_point_branch_witness() -> Result<MultiPoly, CubicError> {
    let q = |s: &str| MultiPoly::parse_with_vars(s, 2);
    Ok(local_branch_curve(&q("X1^2")?, &q("X1 + X0^2")?, &q("1/4 + X0 + X1")?))
}

/// `(d-1)(d-2)/2 - g`.
pub fn chord_secant_degree(d: i64, g: i64) -> i64 {
    (d - 1) * (d - 2) / 2 - g
}

/// The `3 x 3` Hankel determinant in `X0..X4`, vanishing on the secant
/// variety of the rational normal quartic.
pub fn chord_rnc4_cubic() -> MultiPoly {
    let x = |i| MultiPoly::var(5, i);
    let m: Vec<Vec<MultiPoly>> = (0..3).map(|i| (0..3).map(|j| x(i + j)).collect()).collect();
    poly_det(&m)
}

/// `P(gamma(t))` and `dP/dX_i(gamma(t))` as univariate polynomials.
pub fn restrict_to_curve(p: &MultiPoly, gamma: &[UniPoly]) -> Result<(UniPoly, Vec<UniPoly>), CubicError> {
    let subs: Vec<MultiPoly> = gamma
        .iter()
        .map(|g| {
            MultiPoly::from_terms(
                1,
                g.coeffs().iter().enumerate().map(|(k, c)| (c.clone(), vec![k as u32])),
            )
        })
        .collect();
    let on = |q: &MultiPoly| -> Result<UniPoly, CubicError> {
        Ok(q.substitute(&subs)?.to_univariate(0).expect("one variable"))
    };
    Ok((on(p)?, p.gradient().iter().map(on).collect::<Result<_, _>>()?))
}

/// Whether `p` vanishes to order two along `gamma`, identically in `t`.
pub fn vanishes_doubly_on(p: &MultiPoly, gamma: &[UniPoly]) -> Result<bool, CubicError> {
    let (v, grad) = restrict_to_curve(p, gamma)?;
    Ok(v.is_zero() && grad.iter().all(UniPoly::is_zero))
}

/// `p(l gamma(s) + m gamma(t))` as a polynomial in `(l, m, s, t)`.
pub fn restrict_to_chords(p: &MultiPoly, degree: usize) -> Result<MultiPoly, CubicError> {
    let l = MultiPoly::var(4, 0);
    let m = MultiPoly::var(4, 1);
    let s = MultiPoly::var(4, 2);
    let t = MultiPoly::var(4, 3);
    let subs: Vec<MultiPoly> = (0..=degree as u32)
        .map(|k| &(&l * &s.pow(k)) + &(&m * &t.pow(k)))
        .collect();
    Ok(p.substitute(&subs)?)
}

/// A net of binary cubics: three independent forms in `(t, s)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetOnQuinticRNC {
    forms: [MultiPoly; 3],
}

impl NetOnQuinticRNC {
    pub fn new(forms: [MultiPoly; 3]) -> Result<Self, CubicError> {
        for f in &forms {
            if f.nvars() != 2 || !f.is_homogeneous() || f.degree() != Some(3) {
                return Err(CubicError::DegenerateNet);
            }
        }
        let rows: Vec<Vec<Rational>> = forms
            .iter()
            .map(|f| (0..=3).map(|k| f.coefficient(&[k, 3 - k])).collect())
            .collect();
        if rank(&QMatrix::from_rows(rows).expect("4 columns")) < 3 {
            return Err(CubicError::DegenerateNet);
        }
        Ok(NetOnQuinticRNC { forms })
    }

    pub fn forms(&self) -> &[MultiPoly; 3] {
        &self.forms
    }

    /// Divisors through the point `t = p`: `t - p s` times all binary quadrics.
    pub fn base_point(p: &Rational) -> Self {
        let t = MultiPoly::var(2, 0);
        let s = MultiPoly::var(2, 1);
        let lin = &t - &s.scale(p);
        let forms = [&lin * &(&t * &t), &lin * &(&t * &s), &lin * &(&s * &s)];
        NetOnQuinticRNC::new(forms).expect("independent")
    }

    /// The net member vanishing at `t1`, `t2` (affine, `s = 1`), if unique.
    fn member_through(&self, t1: &Rational, t2: &Rational) -> Option<UniPoly> {
        let unis: Vec<UniPoly> = self
            .forms
            .iter()
            .map(|f| UniPoly::new((0..=3).map(|k| f.coefficient(&[k, 3 - k])).collect()))
            .collect();
        let m = QMatrix::from_rows(vec![
            unis.iter().map(|u| u.eval(t1)).collect(),
            unis.iter().map(|u| u.eval(t2)).collect(),
        ])
        .expect("3 columns");
        let k = kernel_basis(&m);
        if k.len() != 1 {
            return None;
        }
        let mut g = UniPoly::zero();
        for (c, u) in k[0].iter().zip(&unis) {
            g = g.add(&u.scale(c));
        }
        Some(g)
    }
}

impl fmt::Display for NetOnQuinticRNC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; {}; {}", self.forms[0], self.forms[1], self.forms[2])
    }
}

/// Three binary cubics in `X0 = t`, `X1 = s`, separated by `;` or newlines.
/// Lines starting with `#` are ignored.
impl FromStr for NetOnQuinticRNC {
    type Err = CubicError;

    fn from_str(s: &str) -> Result<Self, CubicError> {
        let mut forms = Vec::new();
        for line in s.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            for part in line.split(';') {
                let part = part.trim();
                if !part.is_empty() {
                    forms.push(MultiPoly::parse_with_vars(part, 2)?);
                }
            }
        }
        let forms: [MultiPoly; 3] = forms.try_into().map_err(|_| CubicError::DegenerateNet)?;
        NetOnQuinticRNC::new(forms)
    }
}

/// Point of the quintic normal curve at affine `t`, or `e5` at infinity.
pub fn quintic_point(t: Option<&Rational>) -> Vec<Rational> {
    match t {
        None => (0..6)
            .map(|k| if k == 5 { Rational::one() } else { Rational::zero() })
            .collect(),
        Some(t) => (0..6).map(|k| num_traits::pow(t.clone(), k)).collect(),
    }
}

#[derive(Clone, Debug)]
pub struct YgFitOptions {
    /// Parameter values for the two chosen roots.
    pub t_values: Vec<Rational>,
    /// Barycentric weights of the sample points in each plane.
    pub weights: Vec<[i64; 3]>,
    pub min_samples: usize,
    pub max_samples: usize,
}

impl Default for YgFitOptions {
    fn default() -> Self {
        YgFitOptions {
            t_values: [-3, -2, -1, 1, 2, 3, 4]
                .iter()
                .map(|&v| rat_int(v))
                .chain([rat(1, 2), rat(-1, 3)])
                .collect(),
            weights: vec![[1, 1, 1], [1, 2, 3], [3, -1, 2], [2, 5, -1]],
            min_samples: 60,
            max_samples: 400,
        }
    }
}

impl YgFitOptions {
    /// Parameter values and weights disjoint from the defaults.
    pub fn alternative() -> Self {
        YgFitOptions {
            t_values: [5, -4, 6, -5, 7]
                .iter()
                .map(|&v| rat_int(v))
                .chain([rat(2, 3), rat(-3, 2), rat(1, 4), rat(5, 2)])
                .collect(),
            weights: vec![[1, -2, 4], [4, 1, 1], [-1, 3, 3], [2, 2, -3]],
            min_samples: 60,
            max_samples: 400,
        }
    }
}

#[derive(Clone, Debug)]
pub struct YgFit {
    pub cubic: MultiPoly,
    pub samples: usize,
    /// Divisors used, as `(t1, t2, t3)` with `None` for the point at infinity.
    pub divisors: Vec<(Rational, Rational, Option<Rational>)>,
}

/// Scales so that the coefficient of the largest monomial is 1.
pub fn normalize_leading(p: &MultiPoly) -> MultiPoly {
    let first = p
        .terms()
        .max_by(|(a, _), (b, _)| {
            let da: u32 = a.iter().sum();
            let db: u32 = b.iter().sum();
            da.cmp(&db).then_with(|| a.cmp(b))
        })
        .map(|(_, c)| c.clone());
    match first {
        None => p.clone(),
        Some(c) => p.scale(&(Rational::one() / c)),
    }
}

/// The cubic swept by the planes spanned by divisors of the net on the
/// quintic normal curve, by interpolation through points of those planes.
pub fn y_g_fit(net: &NetOnQuinticRNC, opts: &YgFitOptions) -> Result<YgFit, CubicError> {
    let mons = monomials(6, 3);
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    let mut divisors = Vec::new();
    let eval_row = |x: &[Rational]| -> Vec<Rational> {
        mons.iter()
            .map(|e| {
                e.iter()
                    .zip(x)
                    .filter(|(k, _)| **k > 0)
                    .map(|(k, xi)| num_traits::pow(xi.clone(), *k as usize))
                    .fold(Rational::one(), |a, b| a * b)
            })
            .collect()
    };
    let mut result = None;
    'outer: for (i, t1) in opts.t_values.iter().enumerate() {
        for t2 in &opts.t_values[i + 1..] {
            let Some(g) = net.member_through(t1, t2) else { continue };
            let t3 = match g.degree() {
                Some(3) => {
                    let a3 = g.coeff(3);
                    let a2 = g.coeff(2);
                    Some(-(a2 / a3) - t1 - t2)
                }
                Some(2) => None,
                _ => continue,
            };
            if t3.as_ref().is_some_and(|t| t == t1 || t == t2) {
                continue;
            }
            let pts = [
                quintic_point(Some(t1)),
                quintic_point(Some(t2)),
                quintic_point(t3.as_ref()),
            ];
            divisors.push((t1.clone(), t2.clone(), t3.clone()));
            for w in &opts.weights {
                let x: Vec<Rational> = (0..6)
                    .map(|k| &pts[0][k] * rat_int(w[0]) + &pts[1][k] * rat_int(w[1]) + &pts[2][k] * rat_int(w[2]))
                    .collect();
                rows.push(eval_row(&x));
            }
            if rows.len() >= opts.min_samples {
                let k = kernel_basis(&QMatrix::from_rows(rows.clone()).expect("56 columns"));
                match k.len() {
                    0 => return Err(CubicError::NoCubic),
                    1 => {
                        result = Some(k[0].clone());
                        break 'outer;
                    }
                    _ if rows.len() >= opts.max_samples => return Err(CubicError::Underdetermined(k.len())),
                    _ => {}
                }
            }
        }
    }
    let coeffs = match result {
        Some(c) => c,
        None => {
            if rows.is_empty() {
                return Err(CubicError::Underdetermined(mons.len()));
            }
            let k = kernel_basis(&QMatrix::from_rows(rows.clone()).expect("56 columns"));
            return Err(if k.is_empty() {
                CubicError::NoCubic
            } else {
                CubicError::Underdetermined(k.len())
            });
        }
    };
    let cubic = normalize_leading(&MultiPoly::from_terms(6, coeffs.into_iter().zip(mons.iter().cloned())));
    Ok(YgFit {
        cubic,
        samples: rows.len(),
        divisors,
    })
}

/// Cubics singular along the quintic normal curve.
pub fn doubly_vanishing_cubics() -> Vec<MultiPoly> {
    linear_conditions_kernel(3, &rational_normal_curve(5), Vanishing::Double, None)
}

/// Whether `p` lies in the span of `basis`.
pub fn in_span(p: &MultiPoly, basis: &[MultiPoly]) -> bool {
    let mut all: Vec<&MultiPoly> = basis.iter().collect();
    let mons: Vec<Vec<u32>> = {
        let mut m: Vec<Vec<u32>> = basis
            .iter()
            .chain([p])
            .flat_map(|q| q.terms().map(|(e, _)| e.clone()))
            .collect();
        m.sort();
        m.dedup();
        m
    };
    let to_row = |q: &MultiPoly| -> Vec<Rational> { mons.iter().map(|e| q.coefficient(e)).collect() };
    let r0 = if basis.is_empty() {
        0
    } else {
        rank(&QMatrix::from_rows(basis.iter().map(to_row).collect()).expect("rows"))
    };
    all.push(p);
    let r1 = rank(&QMatrix::from_rows(all.iter().map(|q| to_row(q)).collect()).expect("rows"));
    r0 == r1
}

/// Whether `p` and `q` are nonzero scalar multiples.
pub fn proportional(p: &MultiPoly, q: &MultiPoly) -> bool {
    !p.is_zero() && !q.is_zero() && normalize_leading(p) == normalize_leading(q)
}

#[derive(Clone, Debug)]
pub struct PencilReport {
    pub f: MultiPoly,
    pub g: MultiPoly,
    pub cubic: MultiPoly,
    /// Ranks of `F(X0..X4, 0)` and `G(X0..X3, 0, X5)`.
    pub ranks: (usize, usize),
    /// Determinant of the residual quadric of `Y ∩ V(X5 - l X4)`.
    pub delta: UniPoly,
    pub roots: Vec<Rational>,
    /// Jacobian rank of the residual quadric at its vertex, for each root.
    pub singular_residuals: Vec<(Rational, ProjPoint, usize)>,
}

/// `Y = V(F X4 + G X5)` containing the plane `V(X4, X5)`, with
/// `F = X0 X1 + X2 X3` and `G = X0^2 + X1^2 + X2^2 + X3^2 + X5^2`.
pub fn tantipiani_example() -> Result<PencilReport, CubicError> {
    let f = MultiPoly::parse_with_vars("X0*X1 + X2*X3", 6)?;
    let g = MultiPoly::parse_with_vars("X0^2 + X1^2 + X2^2 + X3^2 + X5^2", 6)?;
    let x4 = MultiPoly::var(6, 4);
    let x5 = MultiPoly::var(6, 5);
    let cubic = &(&f * &x4) + &(&g * &x5);

    let f_restricted = f.specialize(5, &Rational::zero()).remap(&[0, 1, 2, 3, 4, 4], 5);
    let g_restricted = g.specialize(4, &Rational::zero()).remap(&[0, 1, 2, 3, 4, 4], 5);
    let ranks = (quadratic_form_rank(&f_restricted)?, quadratic_form_rank(&g_restricted)?);

    // residual quadric F + l G(X0..X3, 0, l X4) in X0..X4 over Q[l], l stored as X5
    let l = MultiPoly::var(6, 5);
    let subs: Vec<MultiPoly> = (0..6)
        .map(|i| match i {
            4 => MultiPoly::zero(6),
            5 => &l * &x4,
            _ => MultiPoly::var(6, i),
        })
        .collect();
    let residual = &f + &(&l * &g.substitute(&subs)?);
    let half = rat(1, 2);
    let entry = |i: usize, j: usize| -> MultiPoly {
        // coefficient of X_i X_j as a polynomial in l
        let mut out = MultiPoly::zero(1);
        for (e, c) in residual.terms() {
            let mut want = [0u32; 5];
            want[i] += 1;
            want[j] += 1;
            if e[..5] == want {
                let c = if i == j { c.clone() } else { c * &half };
                out = &out + &MultiPoly::monomial(vec![e[5]], c);
            }
        }
        out
    };
    let m: Vec<Vec<MultiPoly>> = (0..5).map(|i| (0..5).map(|j| entry(i, j)).collect()).collect();
    let delta = poly_det(&m).to_univariate(0).expect("one variable");
    let roots = delta.rational_roots().unwrap_or_default();
    let mut singular_residuals = Vec::new();
    for r in &roots {
        let q = residual.specialize(5, r).remap(&[0, 1, 2, 3, 4, 4], 5);
        let mat = quadratic_form_matrix(&q)?;
        let k = kernel_basis(&mat);
        if let Some(v) = k.first() {
            let pt = ProjPoint::new(v.clone())?;
            let jr = jacobian_rank_at(&[q], &pt)?;
            singular_residuals.push((r.clone(), pt, jr));
        }
    }
    Ok(PencilReport {
        f: f.specialize(5, &Rational::zero()),
        g,
        cubic,
        ranks,
        delta,
        roots,
        singular_residuals,
    })
}
