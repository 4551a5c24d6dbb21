//! Registered checks, grouped by scope, and the report they produce.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::charclass::{
    chi_nh, cubic_curve_cycle_arith, enumerate_cases, enumerate_cases_with, fixed_surface, intprop_positivity,
    standard_profile, CaseConstraint, RiemannRoch,
};
use crate::cubic::{
    adapt_to_node, chord_rnc4_cubic, chord_secant_degree, doubly_vanishing_cubics, in_span, proportional,
    psi_inverse_identity, quadric_branch_witness, random_two_node_cubic, restrict_to_chords, tantipiani_example,
    triple_point_branch_witness, two_node_discriminant, vanishes_doubly_on, y_g_fit, CubicWithNode, NetOnQuinticRNC,
    YgFitOptions,
};
use crate::exact::{rat, rat_int, Integer, Rational, ZMatrix};
use crate::lattice::{abs_discriminant, LatVector, Lattice, SearchBox};
use crate::poly::{
    du_val_plane_criterion, linear_conditions_dim, random_form, rational_normal_curve, LocalOptions, MultiPoly,
    ProjPoint, Vanishing,
};
use crate::sym2::{
    decompose_h4, half_integer_lattice_check, omega_lattice, positivity_forms, qdecomp_check, square_class_obstruction,
    square_pairings, Sym2Element, Sym2Space,
};

pub const DEFAULT_SEED: u64 = 20_060_101;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Scope {
    All,
    Lattice,
    Sym2,
    Charclass,
    Cubic,
}

impl Scope {
    pub const NAMES: [&'static str; 5] = ["all", "lattice", "sym2", "charclass", "cubic"];

    fn includes(self, other: Scope) -> bool {
        self == Scope::All || self == other
    }
}

impl FromStr for Scope {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "all" => Ok(Scope::All),
            "lattice" => Ok(Scope::Lattice),
            "sym2" => Ok(Scope::Sym2),
            "charclass" => Ok(Scope::Charclass),
            "cubic" => Ok(Scope::Cubic),
            _ => Err(format!(
                "unknown scope '{s}' (expected one of {})",
                Scope::NAMES.join(", ")
            )),
        }
    }
}

impl fmt::Display for Scope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = *self as usize;
        f.write_str(Scope::NAMES[i])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Coefficient radius for lattice vector searches.
    pub search_radius: i64,
    /// Working degree for local expansions.
    pub truncation: u32,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            search_radius: SearchBox::default().radius,
            truncation: LocalOptions::default().truncation,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
        })
    }
}

/// One exact comparison. `expected` and `computed` are canonical text forms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Record {
    pub check_id: String,
    pub anchor: String,
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

impl fmt::Display for Record {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<28} expected={} computed={}  ({})",
            self.status, self.check_id, self.expected, self.computed, self.anchor
        )
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub version: String,
    pub scope: String,
    pub seed: u64,
    pub records: Vec<Record>,
}

impl VerificationReport {
    pub fn all_pass(&self) -> bool {
        self.records.iter().all(|r| r.status == Status::Pass)
    }

    pub fn failures(&self) -> usize {
        self.records.iter().filter(|r| r.status == Status::Fail).count()
    }

    pub fn find(&self, check_id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.check_id == check_id)
    }
}

struct Recorder {
    records: Vec<Record>,
}

impl Recorder {
    fn push(&mut self, id: &str, anchor: &str, expected: impl fmt::Display, computed: Result<String, String>) {
        let expected = expected.to_string();
        let (computed, status) = match computed {
            Ok(c) => {
                let s = if c == expected { Status::Pass } else { Status::Fail };
                (c, s)
            }
            Err(e) => (format!("error: {e}"), Status::Fail),
        };
        self.records.push(Record {
            check_id: id.to_string(),
            anchor: anchor.to_string(),
            expected,
            computed,
            status,
        });
    }

    fn check<T: fmt::Display, E: fmt::Display>(
        &mut self,
        id: &str,
        anchor: &str,
        expected: impl fmt::Display,
        f: impl FnOnce() -> Result<T, E>,
    ) {
        let c = f().map(|v| v.to_string()).map_err(|e| e.to_string());
        self.push(id, anchor, expected, c);
    }
}

fn lambda_h() -> (Sym2Space, LatVector) {
    let h = LatVector::basis(23, 0).add(&LatVector::basis(23, 1));
    (Sym2Space::new(Lattice::lambda()), h)
}

fn pair_text(p: &(Rational, Rational)) -> String {
    format!("({}, {})", p.0, p.1)
}

/// Runs every check registered for `scope`, ordered by check id.
pub fn verify(scope: Scope, opts: &VerifyOptions) -> VerificationReport {
    let mut r = Recorder { records: Vec::new() };
    if scope.includes(Scope::Lattice) {
        lattice_checks(&mut r, opts);
    }
    if scope.includes(Scope::Sym2) {
        sym2_checks(&mut r, opts);
    }
    if scope.includes(Scope::Charclass) {
        charclass_checks(&mut r);
    }
    if scope.includes(Scope::Cubic) {
        cubic_checks(&mut r, opts);
    }
    let mut records = r.records;
    records.sort_by(|a, b| a.check_id.cmp(&b.check_id));
    VerificationReport {
        version: env!("CARGO_PKG_VERSION").to_string(),
        scope: scope.to_string(),
        seed: opts.seed,
        records,
    }
}

fn lattice_checks(r: &mut Recorder, opts: &VerifyOptions) {
    let lam = Lattice::lambda();
    let h = LatVector::basis(23, 0).add(&LatVector::basis(23, 1));
    r.check("lambda-rank", "rank of U^3 + E8(-1)^2 + <-2>", 23, || {
        Ok::<_, String>(lam.rank())
    });
    r.check("lambda-disc", "discriminant of Lambda", 2, || {
        Ok::<_, String>(abs_discriminant(&lam))
    });
    r.check("lambda-signature", "signature of Lambda", "(3, 20)", || {
        let s = lam.signature();
        Ok::<_, String>(format!("({}, {})", s.positive, s.negative))
    });
    r.check("lambda-snf", "invariant factors of the Gram matrix", "1^22 2", || {
        let f = lam.smith().invariant_factors();
        let ones = f.iter().filter(|x| x.is_one()).count();
        let rest: Vec<String> = f.iter().filter(|x| !x.is_one()).map(|x| x.to_string()).collect();
        Ok::<_, String>(format!("1^{ones} {}", rest.join(" ")))
    });
    r.check("lambda-even", "Lambda is even", true, || Ok::<_, String>(lam.is_even()));
    r.check(
        "h-orbit",
        "h = e + f: norm, divisibility, primitive",
        "2 1 true",
        || {
            lam.orbit_invariants(&h)
                .map(|o| format!("{} {} {}", o.norm, o.divisibility, o.primitive))
        },
    );
    r.check(
        "hperp-disc",
        "discriminant of the orthogonal complement of h",
        4,
        || lam.orthogonal_complement(&h).map(|s| abs_discriminant(&s.lattice)),
    );
    r.check(
        "isotropic-partner",
        "beta with (h, beta) = 1 and beta^2 = 0",
        "1 0",
        || {
            let region = SearchBox {
                radius: opts.search_radius,
                ..SearchBox::default()
            };
            let b = lam.find_isotropic_partner(&h, region).map_err(|e| e.to_string())?;
            Ok::<_, String>(format!(
                "{} {}",
                lam.pairing(&h, &b).map_err(|e| e.to_string())?,
                lam.norm(&b).map_err(|e| e.to_string())?
            ))
        },
    );
}

/// Random nondegenerate symmetric integer Gram matrix with entries in `[-5, 5]`.
pub fn random_gram<R: Rng>(rng: &mut R, n: usize) -> Lattice {
    loop {
        let mut m = ZMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = Integer::from(rng.gen_range(-5i64..=5));
                m[(i, j)] = v.clone();
                m[(j, i)] = v;
            }
        }
        if let Ok(l) = Lattice::new(m) {
            if l.is_nondegenerate() {
                return l;
            }
        }
    }
}

/// `<q^vee, e_i e_j> = (n + 2)(e_i, e_j)` on every monomial, returning the
/// number of monomials checked.
fn qdual_identity_count(space: &Sym2Space) -> Result<usize, String> {
    let q = space.q_dual().map_err(|e| e.to_string())?;
    let n = space.base().rank();
    let g = space.base().gram();
    let mut ok = 0;
    for &(i, j) in space.index() {
        let v = space.pair(&q, &space.monomial(i, j)).map_err(|e| e.to_string())?;
        if v == Rational::from(g[(i, j)].clone()) * rat_int(n as i64 + 2) {
            ok += 1;
        }
    }
    Ok(ok)
}

fn sym2_checks(r: &mut Recorder, opts: &VerifyOptions) {
    let (s, h) = lambda_h();
    r.check("sym2-dim", "dim Sym^2 of a rank-23 lattice", 276, || {
        Ok::<_, String>(s.dim())
    });
    r.check(
        "qdualint-monomials",
        "<q^vee, ab> = 25 (a, b) on all basis monomials",
        276,
        || qdual_identity_count(&s),
    );
    r.check("qdualint-575", "<q^vee, q^vee> = n(n + 2) with n = 23", 575, || {
        let q = s.q_dual().map_err(|e| e.to_string())?;
        s.pair(&q, &q).map_err(|e| e.to_string())
    });
    r.check("qdecomp-residual", "q^vee = h^2/(h,h) + q_h^vee", true, || {
        qdecomp_check(&s, &h).map(|d| d.residual.is_zero())
    });
    r.check(
        "qdualint-random",
        "<q^vee, ab> = (n + 2)(a, b) on random Gram matrices of rank <= 6",
        "20/20",
        || {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            let mut good = 0;
            for case in 0..20 {
                let lat = random_gram(&mut rng, 1 + case % 6);
                let sp = Sym2Space::new(lat);
                if qdual_identity_count(&sp)? == sp.dim() {
                    good += 1;
                }
            }
            Ok::<_, String>(format!("{good}/20"))
        },
    );
    let decomp = decompose_h4(&s, &h);
    r.check(
        "decomp-dims",
        "dimensions of C h^2 + C q^vee, h (x) h^perp, W(h)",
        "2 22 252",
        || {
            decomp
                .as_ref()
                .map(|d| format!("{} {} {}", d.dims[0], d.dims[1], d.dims[2]))
                .map_err(|e| e.to_string())
        },
    );
    r.check(
        "decomp-projectors",
        "orthogonal projectors onto the three summands",
        "all hold",
        || {
            let d = decomp.as_ref().map_err(|e| e.to_string())?;
            let checks = d.verify(&s).map_err(|e| e.to_string())?;
            let bad: Vec<String> = checks.into_iter().filter(|(_, ok)| !ok).map(|(n, _)| n).collect();
            Ok::<_, String>(if bad.is_empty() {
                "all hold".to_string()
            } else {
                format!("failed: {}", bad.join(","))
            })
        },
    );
    r.check(
        "span-perp-q",
        "(C h^2 + C q^vee) meets (q^vee)^perp in h^2 - (2/23) q^vee",
        "(1, -2/23)",
        || {
            decomp
                .as_ref()
                .map(|d| pair_text(&d.perp_to_q_span))
                .map_err(|e| e.to_string())
        },
    );
    r.check(
        "span-sym2-perp",
        "(C h^2 + C q^vee) meets Sym^2(h^perp) in h^2 - 2 q^vee",
        "(1, -2)",
        || {
            decomp
                .as_ref()
                .map(|d| pair_text(&d.in_sym2_perp_span))
                .map_err(|e| e.to_string())
        },
    );
    let omega = omega_lattice(&s, &h);
    r.check("omega-gram", "Gram of h^2, 2 q^vee / 5", "[[12, 20], [20, 92]]", || {
        omega
            .as_ref()
            .map(|o| {
                format!(
                    "[[{}, {}], [{}, {}]]",
                    o.gram[(0, 0)],
                    o.gram[(0, 1)],
                    o.gram[(1, 0)],
                    o.gram[(1, 1)]
                )
            })
            .map_err(|e| e.to_string())
    });
    r.check(
        "smalldisc-704",
        "discriminant of the lattice spanned by h^2 and 2 q^vee / 5",
        704,
        || {
            omega
                .as_ref()
                .map(|o| o.discriminant.clone())
                .map_err(|e| e.to_string())
        },
    );
    r.check("smallindex-8", "index bound of an overlattice of that span", 8, || {
        omega.as_ref().map(|o| o.index_bound.clone()).map_err(|e| e.to_string())
    });
    r.check(
        "halfint-forms",
        "half-integrality forms: beta^2 and gamma delta",
        "2x + 0y | 2x + 10y | 4x + 10y",
        || {
            let beta = s
                .base()
                .find_isotropic_partner(&h, Default::default())
                .map_err(|e| e.to_string())?;
            let e = |i| LatVector::basis(23, i);
            let c =
                half_integer_lattice_check(&s, &h, &beta, &[(e(2), e(3)), (e(0), e(1))]).map_err(|e| e.to_string())?;
            if !c.passes() {
                return Err("half-integrality check failed".to_string());
            }
            Ok(format!(
                "{} | {} | {}",
                c.beta_form, c.pair_forms[0].2, c.pair_forms[1].2
            ))
        },
    );
    r.check(
        "positivity-forms",
        "forms on h^2 and w^2 for w orthogonal to h",
        "12x + 20y | 2x + 10y",
        || {
            let w = LatVector::basis(23, 2).add(&LatVector::basis(23, 3));
            positivity_forms(&s, &h, &w).map(|(a, b)| format!("{a} | {b}"))
        },
    );
    r.check(
        "square-pairings",
        "<a1^2, a2^2> for (a1, a2) = 1 is not divisible by 4",
        "2 2 6 true",
        || {
            let e = |i| LatVector::basis(23, i);
            let a1 = e(0).add(&e(1));
            let a2 = e(0).add(&e(2)).add(&e(3));
            let b1 = s
                .base()
                .find_isotropic_partner(&a1, Default::default())
                .map_err(|e| e.to_string())?;
            let b2 = s
                .base()
                .find_isotropic_partner(&a2, Default::default())
                .map_err(|e| e.to_string())?;
            let p = square_pairings(&s, [&a1, &a2], [&b1, &b2]).map_err(|e| e.to_string())?;
            Ok::<_, String>(format!(
                "{} {} {} {}",
                p.with_partner[0],
                p.with_partner[1],
                p.mutual,
                p.rules_out_common_halving()
            ))
        },
    );
    let obs = square_class_obstruction(&s, &h);
    r.check(
        "disctreper",
        "determinant of 4 (E8^2 + U^2 + A2)",
        Integer::from(3) * Integer::from(2).pow(44u32),
        || {
            obs.as_ref()
                .map(|o| o.pulled_back_det.clone())
                .map_err(|e| e.to_string())
        },
    );
    r.check(
        "ventiquattro",
        "product-basis determinant 2^22 |disc(h^perp)|",
        Integer::from(2).pow(24u32),
        || {
            obs.as_ref()
                .map(|o| o.product_basis_det.clone())
                .map_err(|e| e.to_string())
        },
    );
    r.check(
        "square-class",
        "square classes of the two determinants",
        "3 1 distinct",
        || {
            obs.as_ref()
                .map(|o| {
                    format!(
                        "{} {} {}",
                        o.class_a,
                        o.class_b,
                        if o.distinct { "distinct" } else { "equal" }
                    )
                })
                .map_err(|e| e.to_string())
        },
    );
}

fn charclass_checks(r: &mut Recorder) {
    let (s, h) = lambda_h();
    for (n, v) in [(0, 3), (1, 6), (2, 21)] {
        r.check(&format!("rr-chi-{n}"), "chi(O(nH)) = n^4/2 + 5n^2/2 + 3", v, || {
            Ok::<_, String>(chi_nh(&rat_int(n)))
        });
    }
    let profile = standard_profile(&s, &h);
    r.check(
        "rr-coefficients",
        "Riemann-Roch polynomial read off Sym^2",
        "1/2 0 5/2 0 3",
        || {
            let p = profile.as_ref().map_err(|e| e.to_string())?;
            let rr = RiemannRoch::from_sym2(&s, &h, p).map_err(|e| e.to_string())?;
            Ok::<_, String>(
                rr.coefficients()
                    .iter()
                    .map(|c| c.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
            )
        },
    );
    r.check("todd-828", "c_2^2 = 240 chi(O) + c_4/3", 828, || {
        profile
            .as_ref()
            .map(|p| p.c2_squared.clone())
            .map_err(|e| e.to_string())
    });
    r.check("todd-holds", "240 * 3 = 828 - 108", true, || {
        profile.as_ref().map(|p| p.todd_holds()).map_err(|e| e.to_string())
    });
    r.check("c2-coefficient", "c_2 = a q^vee", rat(6, 5), || {
        profile.as_ref().map(|p| p.c2_coeff.clone()).map_err(|e| e.to_string())
    });
    r.check("c2-sign", "<c_2, h^2> = 50 a >= 0", 60, || {
        let p = profile.as_ref().map_err(|e| e.to_string())?;
        let q = s.q_dual().map_err(|e| e.to_string())?;
        let v = s.pair(&q, &s.square_lat(&h)).map_err(|e| e.to_string())? * &p.c2_coeff;
        Ok::<_, String>(v)
    });
    let fixed = fixed_surface(&s, &h);
    let get = |f: fn(&crate::charclass::FixedSurfaceInvariants) -> String| -> Result<String, String> {
        fixed.as_ref().map(f).map_err(|e| e.to_string())
    };
    r.push(
        "b4-y",
        "b_4 of the quotient: 1 + dim Sym^2(h^perp)",
        254,
        get(|f| f.b4_y.to_string()),
    );
    r.push(
        "chi-y",
        "topological Euler number of the quotient",
        258,
        get(|f| f.chi_y.to_string()),
    );
    r.push(
        "chi-f-euler",
        "chi(F) = 2 chi(Y) - 324",
        192,
        get(|f| f.chi_f.to_string()),
    );
    r.push(
        "lagrangian-norm",
        "<(15 h^2 - c_2)^2>",
        1728,
        get(|f| f.lagrangian_norm.to_string()),
    );
    r.push(
        "cl-f-scale",
        "cl(F) = k (15 h^2 - c_2)",
        rat(1, 3),
        get(|f| f.k.to_string()),
    );
    r.push(
        "cl-f-coords",
        "cl(F) in the basis h^2, 2 q^vee / 5",
        "(5, -1)",
        get(|f| pair_text(&f.cl_f_coords)),
    );
    r.check("chi-f-class", "<cl(F)^2> for cl(F) = 5 h^2 - (2/5) q^vee", 192, || {
        let q = s.q_dual().map_err(|e| e.to_string())?;
        let c = Sym2Element::combine(&rat_int(5), &s.square_lat(&h), &rat(-2, 5), &q);
        s.pair(&c, &c).map_err(|e| e.to_string())
    });
    r.push("h2-cl-f", "<h^2, cl(F)>", 40, get(|f| f.h2_cl_f.to_string()));
    r.push(
        "c1-f-squared",
        "c_1(F)^2 = 9 <h^2, cl(F)>",
        360,
        get(|f| f.c1_f_squared.to_string()),
    );
    r.check("case-table-rows", "cases of the map to |H|^vee", 7, || {
        Ok::<_, String>(enumerate_cases().len())
    });
    r.check(
        "case-table-mutation",
        "dropping any one constraint changes the table",
        "6/6",
        || {
            let full = enumerate_cases();
            let changed = CaseConstraint::ALL
                .iter()
                .filter(|c| {
                    let active: Vec<CaseConstraint> = CaseConstraint::ALL.iter().copied().filter(|d| d != *c).collect();
                    enumerate_cases_with(&active) != full
                })
                .count();
            Ok::<_, String>(format!("{changed}/{}", CaseConstraint::ALL.len()))
        },
    );
    r.check(
        "intprop-feasible",
        "half-integral (s, t) with both classes positive",
        "{(1/2, 0)}",
        || {
            let res = intprop_positivity(6);
            let pts: Vec<String> = res.feasible.iter().map(pair_text).collect();
            Ok::<_, String>(format!("{{{}}}", pts.join(", ")))
        },
    );
    let arith = cubic_curve_cycle_arith();
    r.check("classesigma", "m and the degree of h on Sigma", "m=1 deg=2", || {
        Ok::<_, String>(format!("m={} deg={}", arith.m, arith.sigma_degree))
    });
    r.check(
        "cubic-curve-contradiction",
        "forced total exceeds the remaining degree",
        true,
        || Ok::<_, String>(arith.contradiction()),
    );
}

fn p6(s: &str) -> Result<MultiPoly, String> {
    MultiPoly::parse_with_vars(s, 6).map_err(|e| e.to_string())
}

fn p5(s: &str) -> Result<MultiPoly, String> {
    MultiPoly::parse_with_vars(s, 5).map_err(|e| e.to_string())
}

fn verdict(curve: &str, opts: &VerifyOptions) -> Result<String, String> {
    let c = MultiPoly::parse_with_vars(curve, 3).map_err(|e| e.to_string())?;
    let v = du_val_plane_criterion(
        &c,
        &ProjPoint::basis(3, 2),
        LocalOptions {
            truncation: opts.truncation,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(format!(
        "{} {}",
        v.multiplicity,
        if v.accepted { "accepted" } else { "rejected" }
    ))
}

fn witness_verdict(c: Result<MultiPoly, crate::cubic::CubicError>, opts: &VerifyOptions) -> Result<String, String> {
    let c = c.map_err(|e| e.to_string())?;
    let v = du_val_plane_criterion(
        &c,
        &ProjPoint::basis(3, 2),
        LocalOptions {
            truncation: opts.truncation,
        },
    )
    .map_err(|e| e.to_string())?;
    Ok(format!(
        "{} {}",
        v.multiplicity,
        if v.accepted { "accepted" } else { "rejected" }
    ))
}

fn cubic_checks(r: &mut Recorder, opts: &VerifyOptions) {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    r.check(
        "psi-inverse-identity",
        "F(Fx)(-G) + G(Fx) = 0 for random F, G",
        "5/5",
        || {
            let ok = (0..5)
                .filter(|_| {
                    let f = random_form(&mut rng, 5, 2, 5);
                    let g = random_form(&mut rng, 5, 3, 5);
                    psi_inverse_identity(&f, &g).is_zero()
                })
                .count();
            Ok::<_, String>(format!("{ok}/5"))
        },
    );
    let cubics: Vec<MultiPoly> = (0..5).map(|_| random_two_node_cubic(&mut rng, 5)).collect();
    let data: Vec<_> = cubics.iter().map(two_node_discriminant).collect();
    let count = |f: &dyn Fn(&MultiPoly, &crate::cubic::TwoNodeData) -> bool| -> Result<String, String> {
        let mut ok = 0;
        for (c, d) in cubics.iter().zip(&data) {
            if f(c, d.as_ref().map_err(|e| e.to_string())?) {
                ok += 1;
            }
        }
        Ok(format!("{ok}/5"))
    };
    r.push(
        "two-node-reconstruct",
        "cubic = sum_j (B_j + C_j Z0 + D_j Z1 + F_j Z0 Z1) X_j",
        "5/5",
        count(&|c, d| *c == d.reconstruct()),
    );
    r.push(
        "determatrix",
        "det M = f (2cd - bf)",
        "5/5",
        count(&|_, d| d.factorization_residual().is_zero()),
    );
    r.push(
        "quartic-degree",
        "deg (2cd - bf) = 4",
        "5/5",
        count(&|_, d| d.quartic.degree() == Some(4)),
    );
    r.push(
        "partialmod",
        "dP/dX_s + F_s b = 2 dc d + 2 c dd - db f",
        "5/5",
        count(&|_, d| d.gradient_identity_residuals().iter().all(MultiPoly::is_zero)),
    );
    r.push(
        "fiber-ideals",
        "P in (f, d) and P in (f, c)",
        "5/5",
        count(&|_, d| d.first_fiber_residual().is_zero() && d.second_fiber_residual().is_zero()),
    );
    r.check(
        "bastaconti",
        "grad P(e) = -F_s b(e) at a point of V(f, c, d)",
        "0 true",
        || {
            let cubic = p6("X0^3 + X1^3 + X2^2*X3 + X0*X1*X4 + X2^2*X4 + X0*X2*X5 + X3^2*X5 + X1*X4*X5 + 2*X3*X4*X5")?;
            let t = two_node_discriminant(&cubic).map_err(|e| e.to_string())?;
            let (v, grad, pred) = t.gradient_at(&ProjPoint::basis(4, 0)).map_err(|e| e.to_string())?;
            Ok::<_, String>(format!("{} {}", v, grad == pred && grad.iter().any(|g| !g.is_zero())))
        },
    );
    r.check(
        "adapt-roundtrip",
        "adapted node: cubic = F X5 + G",
        "X0*X1 + X2*X3 + X4^2 | X0*X1*X2 + X1^3",
        || {
            let cubic = p6("X0*X1*X5 + X2*X3*X5 + X4^2*X5 + X0*X1*X2 + X1^3")?;
            let c = adapt_to_node(&cubic, &ProjPoint::basis(6, 5)).map_err(|e| e.to_string())?;
            Ok::<_, String>(format!("{} | {}", c.f, c.g))
        },
    );
    let two_node = p5("X0*X1 + X2*X3 + X4^2").and_then(|f| {
        let g = p5("X0*X1*X2 + X1^3 + X2^3 + X3^3 + X4^3")?;
        CubicWithNode::from_fg(f, g).map_err(|e| e.to_string())
    });
    r.check(
        "singsing-node",
        "singular y off the node: Jacobian rank 1, tangent dim 3",
        "true true 1 3",
        || {
            let c = two_node.as_ref().map_err(|e| e.clone())?;
            let s = c
                .sing_correspondence(&ProjPoint::basis(6, 0))
                .map_err(|e| e.to_string())?;
            Ok::<_, String>(format!(
                "{} {} {} {}",
                s.y_singular,
                s.jacob_solvable,
                s.jacobian_rank.unwrap_or(9),
                s.tangent_dim.unwrap_or(9)
            ))
        },
    );
    r.check("singsing-smooth", "smooth y: neither side holds", "false false", || {
        let c = two_node.as_ref().map_err(|e| e.clone())?;
        let y = ProjPoint::from_i64(&[1, 1, 0, 0, 0, -1]).map_err(|e| e.to_string())?;
        let s = c.sing_correspondence(&y).map_err(|e| e.to_string())?;
        Ok::<_, String>(format!("{} {}", s.y_singular, s.jacob_solvable))
    });
    r.check(
        "singsing-line",
        "line of singular points: tangent dim 4",
        "true true 4",
        || {
            let c = CubicWithNode::from_fg(
                p5("X0*X2 + X1*X3 + X3^2")?,
                p5("X0*X1*X4 + X2^2*X4 + X0^3 + X1^3 + X2^3 + X3^3")?,
            )
            .map_err(|e| e.to_string())?;
            let s = c
                .sing_correspondence(&ProjPoint::basis(6, 4))
                .map_err(|e| e.to_string())?;
            Ok::<_, String>(format!(
                "{} {} {}",
                s.y_singular,
                s.jacob_solvable,
                s.tangent_dim.unwrap_or(9)
            ))
        },
    );
    r.push(
        "duval-node",
        "ordinary node",
        "2 accepted",
        verdict("X1^2*X2 - X0^3 - X0^2*X2", opts),
    );
    r.push(
        "duval-cusp",
        "cusp, tangent cone x^2",
        "2 accepted",
        verdict("X1^2*X2 - X0^3", opts),
    );
    r.push(
        "duval-triple-2",
        "triple point with tangent cone x^2 y",
        "3 accepted",
        verdict("X0^2*X1*X2 + X1^4", opts),
    );
    r.push(
        "duval-triple-1",
        "triple point with tangent cone x^3",
        "3 rejected",
        verdict("X0^3*X2 + X1^4", opts),
    );
    r.push(
        "duval-quadric",
        "branch curve on the smooth quadric: u^2 - 6uv + v^2",
        "2 accepted",
        witness_verdict(quadric_branch_witness(), opts),
    );
    r.push(
        "equaloc",
        "branch curve with an ordinary triple point",
        "3 accepted",
        witness_verdict(triple_point_branch_witness(), opts),
    );
    let rnc5 = rational_normal_curve(5);
    r.check(
        "eccecubica",
        "cubics singular along the quintic normal curve",
        4,
        || Ok::<_, String>(linear_conditions_dim(3, &rnc5, Vanishing::Double, None)),
    );
    r.check("eccecubica-stable", "same dimension at higher truncation", 4, || {
        Ok::<_, String>(linear_conditions_dim(3, &rnc5, Vanishing::Double, Some(15 + 10)))
    });
    let hankel = chord_rnc4_cubic();
    r.check(
        "razquattro-double",
        "Hankel cubic is singular along the normal quartic",
        true,
        || vanishes_doubly_on(&hankel, &rational_normal_curve(4)),
    );
    r.check(
        "razquattro-chords",
        "Hankel cubic vanishes on l gamma(s) + m gamma(t)",
        true,
        || restrict_to_chords(&hankel, 4).map(|p| p.is_zero()),
    );
    r.check(
        "secant-degrees",
        "(d-1)(d-2)/2 - g for (4,0), (5,0), (5,1)",
        "3 6 5",
        || {
            Ok::<_, String>(format!(
                "{} {} {}",
                chord_secant_degree(4, 0),
                chord_secant_degree(5, 0),
                chord_secant_degree(5, 1)
            ))
        },
    );
    let net_a: Result<NetOnQuinticRNC, String> = "X0^3 - X1^3; X0^2*X1 + X1^3; X0*X1^2 - X0^3"
        .parse()
        .map_err(|e: crate::cubic::CubicError| e.to_string());
    let net_b: Result<NetOnQuinticRNC, String> = "X0^3 + 2*X1^3; X0^2*X1 - X0*X1^2; X0*X1^2 + X1^3"
        .parse()
        .map_err(|e: crate::cubic::CubicError| e.to_string());
    let fit_a = net_a
        .as_ref()
        .map_err(Clone::clone)
        .and_then(|n| y_g_fit(n, &YgFitOptions::default()).map_err(|e| e.to_string()));
    r.check(
        "gidef-fit",
        "fitted cubic is singular along the quintic normal curve",
        "true true",
        || {
            let f = fit_a.as_ref().map_err(Clone::clone)?;
            let double = vanishes_doubly_on(&f.cubic, &rnc5).map_err(|e| e.to_string())?;
            Ok::<_, String>(format!("{} {}", double, in_span(&f.cubic, &doubly_vanishing_cubics())))
        },
    );
    r.check("gidef-samples", "fit is independent of the sample set", true, || {
        let n = net_a.as_ref().map_err(Clone::clone)?;
        let f = fit_a.as_ref().map_err(Clone::clone)?;
        let alt = y_g_fit(n, &YgFitOptions::alternative()).map_err(|e| e.to_string())?;
        Ok::<_, String>(proportional(&f.cubic, &alt.cubic))
    });
    r.check("birigata", "distinct nets give distinct cubics", false, || {
        let f = fit_a.as_ref().map_err(Clone::clone)?;
        let n = net_b.as_ref().map_err(Clone::clone)?;
        let g = y_g_fit(n, &YgFitOptions::default()).map_err(|e| e.to_string())?;
        Ok::<_, String>(proportional(&f.cubic, &g.cubic))
    });
    r.check(
        "gidef-cone",
        "base-point net at t = 0 gives a cone with vertex e0",
        true,
        || {
            let f = y_g_fit(
                &NetOnQuinticRNC::base_point(&Rational::zero()),
                &YgFitOptions::default(),
            )
            .map_err(|e| e.to_string())?;
            Ok::<_, String>(f.cubic.partial(0).is_zero() && !f.cubic.is_zero())
        },
    );
    let pencil = tantipiani_example();
    r.check(
        "tantipiani-ranks",
        "ranks of F(X0..X4, 0) and G(X0..X3, 0, X5)",
        "(4, 5)",
        || {
            pencil
                .as_ref()
                .map(|p| format!("({}, {})", p.ranks.0, p.ranks.1))
                .map_err(|e| e.to_string())
        },
    );
    r.check(
        "tantipiani-delta",
        "determinant of the residual quadric in the pencil",
        "(l^2 - 1/4)^2 l^3",
        || {
            let p = pencil.as_ref().map_err(|e| e.to_string())?;
            let expected = crate::poly::UniPoly::new(vec![
                rat_int(0),
                rat_int(0),
                rat_int(0),
                rat(1, 16),
                rat_int(0),
                rat(-1, 2),
                rat_int(0),
                rat_int(1),
            ]);
            Ok::<_, String>(if p.delta.monic() == expected {
                "(l^2 - 1/4)^2 l^3".to_string()
            } else {
                p.delta.to_string()
            })
        },
    );
    r.check(
        "tantipiani-singular",
        "residual quadrics at l = -1/2, 1/2 are singular",
        "-1/2:0 1/2:0",
        || {
            let p = pencil.as_ref().map_err(|e| e.to_string())?;
            let mut v: Vec<(Rational, usize)> = p
                .singular_residuals
                .iter()
                .filter(|(l, _, _)| !l.is_zero())
                .map(|(l, _, r)| (l.clone(), *r))
                .collect();
            v.sort();
            Ok::<_, String>(v.iter().map(|(l, r)| format!("{l}:{r}")).collect::<Vec<_>>().join(" "))
        },
    );
}
