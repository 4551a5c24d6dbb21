//! Riemann–Roch arithmetic, Chern-class identities, invariants of the fixed
//! surface of an anti-symplectic involution, and the feasibility table for
//! the image of the map given by `|H|`.
//!
//! Model axioms: `b_3 = 0`, `Sym^2 H^2 ≅ H^4` over Q, Fujiki constant 3,
//! `c_4 = chi_top = 324`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::RangeInclusive;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact::{kernel_basis, rat, rat_int, rational_sqrt, QMatrix, Rational};
use crate::lattice::LatVector;
use crate::sym2::{pairing_form, Sym2Element, Sym2Error, Sym2Space};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CharError {
    #[error("inconsistent inputs: {0}")]
    Inconsistent(String),
    #[error("{0}")]
    Sym2(#[from] Sym2Error),
}

pub const FUJIKI_CONSTANT: i64 = 3;
pub const CHI_O: i64 = 3;
pub const EULER_NUMBER: i64 = 324;

/// `chi(O(nH)) = (h^4/24) n^4 + (<c_2, h^2>/24) n^2 + chi(O)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RiemannRoch {
    pub h4: Rational,
    pub c2_h2: Rational,
    pub chi_o: Rational,
}

impl RiemannRoch {
    pub fn eval(&self, n: &Rational) -> Rational {
        let n2 = n * n;
        let d = rat_int(24);
        &self.h4 / &d * &n2 * &n2 + &self.c2_h2 / &d * &n2 + &self.chi_o
    }

    /// Coefficients of `n^4, n^3, n^2, n, 1`.
    pub fn coefficients(&self) -> [Rational; 5] {
        let d = rat_int(24);
        [
            &self.h4 / &d,
            Rational::zero(),
            &self.c2_h2 / &d,
            Rational::zero(),
            self.chi_o.clone(),
        ]
    }

    /// Reads `h^4 = <h^2,h^2>` and `<c_2,h^2> = a <q^vee,h^2>` off the
    /// symmetric square.
    pub fn from_sym2(space: &Sym2Space, h: &LatVector, profile: &RRProfile) -> Result<Self, CharError> {
        let h2 = space.square_lat(h);
        let c2 = space.q_dual()?.scale(&profile.c2_coeff);
        Ok(RiemannRoch {
            h4: space.pair(&h2, &h2)?,
            c2_h2: space.pair(&c2, &h2)?,
            chi_o: rat_int(profile.chi_o),
        })
    }
}

/// `chi(O_X(nH)) = n^4/2 + 5n^2/2 + 3`.
pub fn chi_nh(n: &Rational) -> Rational {
    RiemannRoch {
        h4: rat_int(12),
        c2_h2: rat_int(60),
        chi_o: rat_int(CHI_O),
    }
    .eval(n)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RRProfile {
    pub fujiki: i64,
    pub c4: i64,
    pub chi_o: i64,
    /// `<c_2, c_2>`.
    pub c2_squared: Rational,
    /// `a` in `c_2 = a q^vee`.
    pub c2_coeff: Rational,
}

impl RRProfile {
    /// `240 chi(O) = c_2^2 - c_4/3`.
    pub fn todd_holds(&self) -> bool {
        rat_int(240 * self.chi_o) == &self.c2_squared - rat(self.c4, 3)
    }
}

/// Solves `c_2 = a q^vee` from `chi(O)`, `c_4`, `<q^vee,q^vee>` and the sign
/// condition `<c_2, h^2> = a <q^vee, h^2> >= 0`.
pub fn solve_c2(chi_o: i64, c4: i64, qq: &Rational, q_h2: &Rational) -> Result<RRProfile, CharError> {
    if qq.is_zero() {
        return Err(CharError::Inconsistent("<q^vee,q^vee> = 0".into()));
    }
    let c2_squared = rat_int(240 * chi_o) + rat(c4, 3);
    let a_sq = &c2_squared / qq;
    let a = rational_sqrt(&a_sq)
        .ok_or_else(|| CharError::Inconsistent(format!("c_2^2/<q^vee,q^vee> = {a_sq} is not a rational square")))?;
    let a = if (&a * q_h2).is_negative() { -a } else { a };
    Ok(RRProfile {
        fujiki: FUJIKI_CONSTANT,
        c4,
        chi_o,
        c2_squared,
        c2_coeff: a,
    })
}

/// The standard profile, read off the symmetric square of `space`.
pub fn standard_profile(space: &Sym2Space, h: &LatVector) -> Result<RRProfile, CharError> {
    let q = space.q_dual()?;
    let qq = space.pair(&q, &q)?;
    let q_h2 = space.pair(&q, &space.square_lat(h))?;
    solve_c2(CHI_O, EULER_NUMBER, &qq, &q_h2)
}

#[derive(Clone, Debug)]
pub struct FixedSurfaceInvariants {
    pub b4_y: usize,
    pub chi_y: i64,
    pub chi_f: i64,
    /// `<(15 h^2 - c_2)^2>`.
    pub lagrangian_norm: Rational,
    /// `k` with `cl(F) = k (15 h^2 - c_2)`.
    pub k: Rational,
    pub cl_f: Sym2Element,
    pub cl_f_squared: Rational,
    pub h2_cl_f: Rational,
    pub c1_f_squared: Rational,
    /// `cl(F)` in the `(h^2, 2 q^vee / 5)` coordinates.
    pub cl_f_coords: (Rational, Rational),
}

/// Invariants of the fixed surface `F` of an involution with `H^2_+ = C h`,
/// quotient `Y` a sextic. `K_F = 3H|_F` from `2K_F = 6H`.
pub fn fixed_surface(space: &Sym2Space, h: &LatVector) -> Result<FixedSurfaceInvariants, CharError> {
    let profile = standard_profile(space, h)?;
    let h2 = space.square_lat(h);
    let q = space.q_dual()?;
    let c2 = q.scale(&profile.c2_coeff);

    // b_4(Y) = dim (C h^2 + Sym^2(h^perp))
    let sym2_perp = kernel_basis(&space.contraction_matrix(h)?).len();
    let b4_y = 1 + sym2_perp;
    let betti_y = [1, 0, 1, 0, b4_y as i64, 0, 1, 0, 1];
    let chi_y: i64 = betti_y
        .iter()
        .enumerate()
        .map(|(i, b)| if i % 2 == 0 { *b } else { -b })
        .sum();
    let chi_f = 2 * chi_y - EULER_NUMBER;

    // Lagrangian classes s h^2 + t (2 q^vee/5): 2s + 10t = 0, oriented by <., h^2> > 0.
    let omega = space.base().orthogonal_complement(h).map_err(Sym2Error::from)?;
    let w = omega
        .basis
        .iter()
        .find(|b| space.base().norm(b).map(|n| !n.is_zero()).unwrap_or(false))
        .cloned()
        .ok_or_else(|| CharError::Inconsistent("h^perp is totally isotropic".into()))?;
    let sigma_form = pairing_form(space, h, &space.square_lat(&w))?;
    let dir = kernel_basis(&QMatrix::from_rows(vec![vec![sigma_form.x.clone(), sigma_form.y.clone()]]).expect("1x2"));
    let (mut s, mut t) = (dir[0][0].clone(), dir[0][1].clone());
    let on_h2 = pairing_form(space, h, &h2)?;
    if (&on_h2.x * &s + &on_h2.y * &t).is_negative() {
        s = -s;
        t = -t;
    }
    let q25 = q.scale(&rat(2, 5));
    let lagr = Sym2Element::combine(&s, &h2, &t, &q25);
    // express 15 h^2 - c_2 on this line
    let base = Sym2Element::combine(&rat_int(15), &h2, &-Rational::one(), &c2);
    let ratio =
        proportionality(&base, &lagr).ok_or_else(|| CharError::Inconsistent("15h^2 - c_2 is not Lagrangian".into()))?;
    if !ratio.is_positive() {
        return Err(CharError::Inconsistent("15h^2 - c_2 has the wrong orientation".into()));
    }

    let lagrangian_norm = space.pair(&base, &base)?;
    let k_sq = rat_int(chi_f) / &lagrangian_norm;
    let k = rational_sqrt(&k_sq).ok_or_else(|| CharError::Inconsistent(format!("k^2 = {k_sq} not a square")))?;
    let cl_f = base.scale(&k);
    let cl_f_squared = space.pair(&cl_f, &cl_f)?;
    let h2_cl_f = space.pair(&h2, &cl_f)?;
    let c1_f_squared = rat_int(9) * &h2_cl_f;
    let cl_f_coords = (&k * rat_int(15), -(&k * &profile.c2_coeff) * rat(5, 2));
    Ok(FixedSurfaceInvariants {
        b4_y,
        chi_y,
        chi_f,
        lagrangian_norm,
        k,
        cl_f,
        cl_f_squared,
        h2_cl_f,
        c1_f_squared,
        cl_f_coords,
    })
}

/// `r` with `x = r y`, if any.
fn proportionality(x: &Sym2Element, y: &Sym2Element) -> Option<Rational> {
    let (i, yi) = y.coords().iter().enumerate().find(|(_, c)| !c.is_zero())?;
    let r = &x.coords()[i] / yi;
    (y.scale(&r) == *x).then_some(r)
}

/// Removable constraints of the case enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum CaseConstraint {
    /// `dim Y >= 3`.
    DimAtLeastThree,
    /// `dim Y = 3 => 3 <= deg Y <= 6`.
    ThreefoldDegree,
    /// `dim Y = 4 => deg Y >= 2`.
    FourfoldNondegenerate,
    /// `dim Y = 4 => deg Y * deg f <= 12`.
    ProductBound,
    /// `deg f = 1 => deg Y >= 6`.
    BirationalDegree,
    /// `deg f = 2 => deg Y = 6`.
    DoubleCoverSextic,
}

impl CaseConstraint {
    pub const ALL: [CaseConstraint; 6] = [
        CaseConstraint::DimAtLeastThree,
        CaseConstraint::ThreefoldDegree,
        CaseConstraint::FourfoldNondegenerate,
        CaseConstraint::ProductBound,
        CaseConstraint::BirationalDegree,
        CaseConstraint::DoubleCoverSextic,
    ];

    fn admits(self, c: &Candidate) -> bool {
        match self {
            CaseConstraint::DimAtLeastThree => c.dim_y >= 3,
            CaseConstraint::ThreefoldDegree => c.dim_y != 3 || (3..=6).contains(&c.deg_y),
            CaseConstraint::FourfoldNondegenerate => c.dim_y != 4 || c.deg_y >= 2,
            CaseConstraint::ProductBound => c.deg_f.is_none_or(|f| c.deg_y * f <= 12),
            CaseConstraint::BirationalDegree => c.deg_f != Some(1) || c.deg_y >= 6,
            CaseConstraint::DoubleCoverSextic => c.deg_f != Some(2) || c.deg_y == 6,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Candidate {
    pub dim_y: u32,
    pub deg_y: u32,
    /// Only defined for `dim Y = 4`.
    pub deg_f: Option<u32>,
}

impl Candidate {
    /// Base locus empty iff `deg Y * deg f = 12`; nonempty when `dim Y < 4`.
    pub fn base_locus_empty(&self) -> bool {
        self.deg_f.is_some_and(|f| self.deg_y * f == 12)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum BaseLocus {
    Empty,
    Nonempty,
    Mixed,
}

impl fmt::Display for BaseLocus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaseLocus::Empty => "empty",
            BaseLocus::Nonempty => "nonempty",
            BaseLocus::Mixed => "mixed",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CaseRow {
    /// 1..=7, or 0 for candidates matching no case.
    pub label: u8,
    pub dim_y: RangeInclusive<u32>,
    pub deg_y: RangeInclusive<u32>,
    pub deg_f: Option<RangeInclusive<u32>>,
    pub base_locus: BaseLocus,
    pub note: Option<String>,
    pub members: usize,
}

impl fmt::Display for CaseRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = |r: &RangeInclusive<u32>| {
            if r.start() == r.end() {
                r.start().to_string()
            } else {
                format!("{}..{}", r.start(), r.end())
            }
        };
        let label = if self.label == 0 {
            "?".to_string()
        } else {
            format!("({})", self.label)
        };
        write!(
            f,
            "{label} dimY={} degY={} degf={} B={}",
            r(&self.dim_y),
            r(&self.deg_y),
            self.deg_f.as_ref().map_or("-".to_string(), r),
            self.base_locus
        )?;
        if let Some(n) = &self.note {
            write!(f, " [{n}]")?;
        }
        Ok(())
    }
}

fn classify(c: &Candidate) -> u8 {
    match (c.dim_y, c.deg_y, c.deg_f) {
        (3, 3..=6, None) => 1,
        (4, 2, Some(_)) => 2,
        (4, 3, Some(3)) => 3,
        (4, 3, Some(4)) if c.base_locus_empty() => 4,
        (4, 4, Some(3)) if c.base_locus_empty() => 5,
        (4, 6, Some(2)) => 6,
        (4, 6..=12, Some(1)) => 7,
        _ => 0,
    }
}

/// All `(dim Y, deg Y, deg f)` with `dim Y <= 4`, `deg Y <= 12`, `deg f <= 12`
/// that pass every active constraint.
pub fn feasible_candidates(active: &[CaseConstraint]) -> Vec<Candidate> {
    let mut out = Vec::new();
    for dim_y in 1..=4 {
        for deg_y in 1..=12 {
            let fs: Vec<Option<u32>> = if dim_y == 4 {
                (1..=12).map(Some).collect()
            } else {
                vec![None]
            };
            for deg_f in fs {
                let c = Candidate { dim_y, deg_y, deg_f };
                if active.iter().all(|k| k.admits(&c)) {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Groups feasible candidates by case label. A label whose members do not
/// fill a box `dim x deg Y x deg f` is split into one row per member.
pub fn enumerate_cases_with(active: &[CaseConstraint]) -> Vec<CaseRow> {
    let mut groups: BTreeMap<u8, Vec<Candidate>> = BTreeMap::new();
    for c in feasible_candidates(active) {
        groups.entry(classify(&c)).or_default().push(c);
    }
    let mut rows = Vec::new();
    let mut unlabeled = Vec::new();
    for (label, members) in groups {
        if label == 0 {
            unlabeled = members;
            continue;
        }
        match aggregate(label, &members) {
            Some(row) => rows.push(row),
            None => rows.extend(members.iter().map(|m| aggregate(label, &[*m]).expect("singleton"))),
        }
    }
    rows.sort_by_key(|r| r.label);
    rows.extend(unlabeled.iter().map(|m| aggregate(0, &[*m]).expect("singleton")));
    rows
}

pub fn enumerate_cases() -> Vec<CaseRow> {
    enumerate_cases_with(&CaseConstraint::ALL)
}

fn aggregate(label: u8, members: &[Candidate]) -> Option<CaseRow> {
    let span = |f: &dyn Fn(&Candidate) -> u32| {
        let lo = members.iter().map(f).min().expect("nonempty");
        let hi = members.iter().map(f).max().expect("nonempty");
        lo..=hi
    };
    let dim_y = span(&|c| c.dim_y);
    let deg_y = span(&|c| c.deg_y);
    let deg_f = if members.iter().all(|c| c.deg_f.is_some()) {
        Some(span(&|c| c.deg_f.expect("checked")))
    } else if members.iter().all(|c| c.deg_f.is_none()) {
        None
    } else {
        return None;
    };
    let box_size = dim_y.clone().count() * deg_y.clone().count() * deg_f.as_ref().map_or(1, |r| r.clone().count());
    if box_size != members.len() {
        return None;
    }
    let empties = members.iter().filter(|c| c.base_locus_empty()).count();
    let base_locus = match empties {
        0 => BaseLocus::Nonempty,
        n if n == members.len() => BaseLocus::Empty,
        _ => BaseLocus::Mixed,
    };
    let note = (label == 1).then(|| "deg Y = 6 => B is 0-dimensional".to_string());
    Some(CaseRow {
        label,
        dim_y,
        deg_y,
        deg_f,
        base_locus,
        note,
        members: members.len(),
    })
}

/// Both `A` and `h^2 - A` effective, with `cl(A) = x h^2 + y (2 q^vee/5)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntPropResult {
    pub feasible: Vec<(Rational, Rational)>,
    /// Half-integer radius searched: `|2x|, |2y| <= half_box`.
    pub half_box: i64,
    /// The bounded region `-1/2 < x < 3/2`, `|y| < 3/10` lies inside the box.
    pub region_covered: bool,
}

/// `3s + 5t > 0` and `s + 5t >= 0`.
pub fn positivity_condition(s: &Rational, t: &Rational) -> bool {
    let five = rat_int(5);
    (rat_int(3) * s + &five * t).is_positive() && !(s + &five * t).is_negative()
}

pub fn intprop_positivity(half_box: i64) -> IntPropResult {
    let mut feasible = Vec::new();
    for i in -half_box..=half_box {
        for j in -half_box..=half_box {
            let (x, y) = (rat(i, 2), rat(j, 2));
            let (bx, by) = (Rational::one() - &x, -y.clone());
            if positivity_condition(&x, &y) && positivity_condition(&bx, &by) {
                feasible.push((x, y));
            }
        }
    }
    // 2x < 3 and 2y < 3/5 bound the region; half-integers inside need |2x| <= 2
    let region_covered = half_box >= 2;
    IntPropResult {
        feasible,
        half_box,
        region_covered,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CubicCycleArith {
    /// `12 - deg Y * deg f`.
    pub remaining: u32,
    /// Solutions `(sum of multiplicities, m)` of `sum + 2m = remaining` with `sum, m >= 1`.
    pub solutions: Vec<(u32, u32)>,
    pub m: u32,
    pub sigma_degree: u32,
    /// Forcing multiplicity 2 at a point on `Sigma`.
    pub forced_total: u32,
    /// Conditions for a double point at `p` on a divisor already containing `Sigma`.
    pub codim_bound: u32,
    pub family_dim: u32,
}

impl CubicCycleArith {
    pub fn contradiction(&self) -> bool {
        self.forced_total > self.remaining
    }

    pub fn double_point_divisor_exists(&self) -> bool {
        self.codim_bound <= self.family_dim
    }
}

/// For `deg Y = deg f = 3`: `9 + sum mult + int_Sigma h = 12`, `int_Sigma h = 2m`.
pub fn cubic_curve_cycle_arith() -> CubicCycleArith {
    let remaining = 12 - 3 * 3;
    let solutions: Vec<(u32, u32)> = (1..=remaining)
        .flat_map(|m| (1..=remaining).map(move |s| (s, m)))
        .filter(|(s, m)| s + 2 * m == remaining)
        .collect();
    let m = solutions.first().map_or(0, |&(_, m)| m);
    let sigma_degree = 2 * m;
    // tangent space of P^4-hyperplane sections at p minus the tangent line of Sigma
    let codim_bound = 4 - 1;
    CubicCycleArith {
        remaining,
        solutions,
        m,
        sigma_degree,
        forced_total: 2 + sigma_degree,
        codim_bound,
        family_dim: 3,
    }
}
