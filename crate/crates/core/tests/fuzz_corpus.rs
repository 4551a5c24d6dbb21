//! Replays the checked-in fuzz seeds through the same assertions as the fuzz targets.

use std::path::PathBuf;

use hk4_core::cubic::NetOnQuinticRNC;
use hk4_core::lattice::Lattice;
use hk4_core::poly::{MultiPoly, ProjPoint};

fn seeds(target: &str) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<String> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| std::fs::read_to_string(e.unwrap().path()).unwrap())
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn poly_parse_seeds() {
    for s in seeds("poly_parse") {
        for nvars in [3, 6] {
            if let Ok(p) = MultiPoly::parse_with_vars(&s, nvars) {
                assert_eq!(MultiPoly::parse_with_vars(&p.to_string(), nvars).unwrap(), p);
            }
        }
    }
}

#[test]
fn poly_document_seeds() {
    let mut parsed = 0;
    for s in seeds("poly_document") {
        if let Ok(p) = MultiPoly::parse_document(&s, 6) {
            assert_eq!(MultiPoly::parse_document(&p.to_string(), 6).unwrap(), p);
            parsed += 1;
        }
    }
    assert!(parsed >= 3);
}

#[test]
fn lattice_expr_seeds() {
    for s in seeds("lattice_expr") {
        let l: Lattice = s.parse().unwrap();
        let sig = l.signature();
        assert_eq!(sig.positive + sig.negative, l.rank());
    }
}

#[test]
fn proj_point_seeds() {
    for s in seeds("proj_point") {
        if let Ok(p) = s.parse::<ProjPoint>() {
            let back: ProjPoint = p.to_string().parse().unwrap();
            assert_eq!(back.coords(), p.coords());
        }
    }
}

#[test]
fn net_parse_seeds() {
    for s in seeds("net_parse") {
        let net: NetOnQuinticRNC = s.parse().unwrap();
        let back: NetOnQuinticRNC = net.to_string().parse().unwrap();
        assert_eq!(back, net);
    }
}
