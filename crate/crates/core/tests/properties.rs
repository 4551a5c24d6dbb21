use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use hk4_core::cubic::NetOnQuinticRNC;
use hk4_core::exact::{
    det, det_int, inverse, kernel_basis, rank, rat, rat_int, smith_normal_form, QMatrix, Rational, ZMatrix,
};
use hk4_core::lattice::{LatVector, Lattice};
use hk4_core::poly::{multiplicity_at, MultiPoly, ProjPoint};
use hk4_core::sym2::Sym2Space;

fn small_int() -> impl Strategy<Value = i64> {
    -6i64..=6
}

fn int_matrix(rows: usize, cols: usize) -> impl Strategy<Value = ZMatrix> {
    prop::collection::vec(small_int(), rows * cols)
        .prop_map(move |v| ZMatrix::from_fn(rows, cols, |i, j| v[i * cols + j].into()))
}

fn rat_matrix(rows: usize, cols: usize) -> impl Strategy<Value = QMatrix> {
    prop::collection::vec((small_int(), 1i64..=4), rows * cols)
        .prop_map(move |v| QMatrix::from_fn(rows, cols, |i, j| rat(v[i * cols + j].0, v[i * cols + j].1)))
}

/// Low-rank matrices exercise the free-column path of row reduction.
fn low_rank_matrix() -> impl Strategy<Value = QMatrix> {
    (1usize..=4, 1usize..=6, 1usize..=3)
        .prop_flat_map(|(rows, cols, r)| (rat_matrix(rows, r), rat_matrix(r, cols)))
        .prop_map(|(a, b)| a.checked_mul(&b).unwrap())
}

/// Polynomials with up to 6 terms of degree <= 3 in 3 variables.
fn poly3() -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((small_int(), 1i64..=3, 0u32..=3, 0u32..=3, 0u32..=3), 0..6)
        .prop_map(|terms| MultiPoly::from_terms(3, terms.into_iter().map(|(n, d, a, b, c)| (rat(n, d), vec![a, b, c]))))
}

fn form3(degree: u32) -> impl Strategy<Value = MultiPoly> {
    let mons = hk4_core::poly::monomials(3, degree);
    prop::collection::vec(small_int(), mons.len())
        .prop_map(move |c| MultiPoly::from_terms(3, c.into_iter().map(rat_int).zip(mons.clone())))
}

fn gram(n: usize) -> impl Strategy<Value = Lattice> {
    prop::collection::vec(-4i64..=4, n * (n + 1) / 2)
        .prop_map(move |v| {
            let mut m = ZMatrix::zeros(n, n);
            let mut k = 0;
            for i in 0..n {
                for j in i..n {
                    m[(i, j)] = v[k].into();
                    m[(j, i)] = v[k].into();
                    k += 1;
                }
            }
            Lattice::new(m).unwrap()
        })
        .prop_filter("nondegenerate", |l| l.is_nondegenerate())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn det_is_multiplicative(a in rat_matrix(4, 4), b in rat_matrix(4, 4)) {
        let ab = a.checked_mul(&b).unwrap();
        prop_assert_eq!(det(&ab).unwrap(), det(&a).unwrap() * det(&b).unwrap());
    }

    #[test]
    fn integer_and_rational_det_agree(m in int_matrix(5, 5)) {
        prop_assert_eq!(Rational::from(det_int(&m).unwrap()), det(&m.to_rational()).unwrap());
    }

    #[test]
    fn kernel_has_complementary_dimension(m in low_rank_matrix()) {
        let k = kernel_basis(&m);
        prop_assert_eq!(k.len() + rank(&m), m.cols());
        for v in &k {
            prop_assert!(m.mul_vec(v).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn inverse_is_two_sided(m in rat_matrix(4, 4)) {
        if let Ok(inv) = inverse(&m) {
            prop_assert_eq!(m.checked_mul(&inv).unwrap(), QMatrix::identity(4));
            prop_assert_eq!(inv.checked_mul(&m).unwrap(), QMatrix::identity(4));
        } else {
            prop_assert!(det(&m).unwrap().is_zero());
        }
    }

    #[test]
    fn smith_form_diagonalizes(m in (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| int_matrix(r, c))) {
        let s = smith_normal_form(&m);
        let d = s.left.checked_mul(&m).unwrap().checked_mul(&s.right).unwrap();
        for i in 0..d.rows() {
            for j in 0..d.cols() {
                let want = if i == j && i < s.diagonal.len() { s.diagonal[i].clone() } else { 0.into() };
                prop_assert_eq!(&d[(i, j)], &want);
            }
        }
        prop_assert!(det_int(&s.left).unwrap().abs().is_one());
        prop_assert!(det_int(&s.right).unwrap().abs().is_one());
        for w in s.diagonal.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
        }
    }

    #[test]
    fn leibniz_rule(p in poly3(), q in poly3(), i in 0usize..3) {
        let lhs = (&p * &q).partial(i);
        let rhs = &(&p.partial(i) * &q) + &(&p * &q.partial(i));
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn euler_identity(d in 1u32..=4, seed in any::<u64>()) {
        let mons = hk4_core::poly::monomials(3, d);
        let coeffs: Vec<i64> = (0..mons.len()).map(|k| ((seed >> (k % 60)) & 7) as i64 - 3).collect();
        let p = MultiPoly::from_terms(3, coeffs.into_iter().map(rat_int).zip(mons));
        let mut sum = MultiPoly::zero(3);
        for (i, dp) in p.gradient().iter().enumerate() {
            sum = &sum + &(&MultiPoly::var(3, i) * dp);
        }
        prop_assert_eq!(sum, p.scale(&rat_int(d as i64)));
    }

    #[test]
    fn polynomial_text_round_trip(p in poly3()) {
        let text = p.to_string();
        let back = MultiPoly::parse_with_vars(&text, 3).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn point_text_round_trip(c in prop::collection::vec((small_int(), 1i64..=5), 1..7)) {
        prop_assume!(c.iter().any(|(n, _)| *n != 0));
        let p = ProjPoint::new(c.iter().map(|&(n, d)| rat(n, d)).collect()).unwrap();
        let back: ProjPoint = p.to_string().parse().unwrap();
        prop_assert_eq!(back.coords(), p.coords());
    }

    #[test]
    fn multiplicity_is_invariant(p in form3(4), a in small_int(), b in small_int(), c in small_int()) {
        // x -> M x with M e2 = e2 and det M = 1 fixes the point [0:0:1]
        let m = QMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) | (1, 1) | (2, 2) => Rational::one(),
            (0, 1) => rat_int(a),
            (2, 0) => rat_int(b),
            (2, 1) => rat_int(c),
            _ => Rational::zero(),
        });
        let v = ProjPoint::basis(3, 2);
        // dropping the X2^4 term makes p vanish at v
        let p = &p - &MultiPoly::monomial(vec![0, 0, 4], p.coefficient(&[0, 0, 4]));
        prop_assume!(!p.is_zero());
        let q = p.linear_change(&m).unwrap();
        prop_assert_eq!(multiplicity_at(&p, &v).unwrap(), multiplicity_at(&q, &v).unwrap());
    }

    #[test]
    fn qdual_pairs_as_n_plus_two(l in (1usize..=6).prop_flat_map(gram), seed in any::<u64>()) {
        let n = l.rank();
        let s = Sym2Space::new(l.clone());
        let qd = s.q_dual().unwrap();
        let vec = |shift: u32| LatVector::from_i64(&(0..n).map(|k| ((seed >> ((k as u32 * 3 + shift) % 60)) & 7) as i64 - 3).collect::<Vec<_>>());
        let (a, b) = (vec(0), vec(17));
        let ab = s.product_lat(&a, &b);
        let lhs = s.pair(&qd, &ab).unwrap();
        prop_assert_eq!(lhs, rat_int(n as i64 + 2) * Rational::from(l.pairing(&a, &b).unwrap()));
        // <a^2, b^2> = (a,a)(b,b) + 2 (a,b)^2
        let aa = Rational::from(l.norm(&a).unwrap());
        let bb = Rational::from(l.norm(&b).unwrap());
        let ab_pair = Rational::from(l.pairing(&a, &b).unwrap());
        let sq = s.pair(&s.square_lat(&a), &s.square_lat(&b)).unwrap();
        prop_assert_eq!(sq, &aa * &bb + rat_int(2) * &ab_pair * &ab_pair);
    }

    #[test]
    fn sym2_pairing_is_symmetric(l in (1usize..=5).prop_flat_map(gram), i in 0usize..15, j in 0usize..15) {
        let s = Sym2Space::new(l);
        let (i, j) = (i % s.dim(), j % s.dim());
        let (x, y) = (s.monomial(s.index()[i].0, s.index()[i].1), s.monomial(s.index()[j].0, s.index()[j].1));
        prop_assert_eq!(s.pair(&x, &y).unwrap(), s.pair(&y, &x).unwrap());
    }

    #[test]
    fn net_text_round_trip(c in prop::collection::vec(small_int(), 12)) {
        let form = |k: usize| {
            MultiPoly::from_terms(2, (0..4u32).map(|e| (rat_int(c[4 * k + e as usize]), vec![e, 3 - e])))
        };
        if let Ok(net) = NetOnQuinticRNC::new([form(0), form(1), form(2)]) {
            let back: NetOnQuinticRNC = net.to_string().parse().unwrap();
            prop_assert_eq!(back, net);
        }
    }
}
