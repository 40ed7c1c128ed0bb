//! End-to-end values through the public API, each against an oracle
//! computed here independently of the library.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use flagcoh::arith::binomial;
use flagcoh::assembler::{integral_ring, mod_p_ring};
use flagcoh::flag::e3_base_presentation;
use flagcoh::render::{self, Format};
use flagcoh::{CoeffRing, GroupSpec};

fn b(n: u64, k: u64) -> BigInt {
    (1..=k).fold(BigInt::zero(), |g, j| g.gcd(&binomial(n, j)))
}

#[test]
fn psu_e3_orders_are_binomial_gcds() {
    for n in 2..=9u32 {
        let spec = GroupSpec::psu(n).unwrap();
        let q = e3_base_presentation(&spec, CoeffRing::Integers).unwrap().quotient().unwrap();
        for k in 1..n as u64 {
            let piece = q.group_in_degree(2 * k as u32).unwrap();
            assert_eq!(piece.free, 0);
            let order: BigInt = piece.torsion.iter().product();
            assert_eq!(order, b(n as u64, k), "PSU({n}) degree {}", 2 * k);
            assert!(piece.torsion.len() <= 1, "cyclic");
        }
    }
}

#[test]
fn e3_base_json_for_psu4() {
    let doc = render::e3_base(&GroupSpec::psu(4).unwrap(), 10, None).unwrap();
    let j: serde_json::Value = serde_json::from_str(&doc.render(Format::Json)).unwrap();
    assert_eq!(j["schema"], render::SCHEMA);
    let got: Vec<(u64, String)> = j["result"]["groups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|g| (g["degree"].as_u64().unwrap(), g["order"].as_str().unwrap().to_string()))
        .collect();
    let want: Vec<(u64, String)> = (1..=3).map(|k| (2 * k, b(4, k).to_string())).collect();
    assert_eq!(got, want);
}

#[test]
fn theta_of_full_set_for_eight() {
    let doc = render::theta(8, &[1, 2, 4]).unwrap();
    assert_eq!(doc.payload["value"], "2·ρ3·ρ7");
}

/// dim H*(PSU(n); F_p) = p^r · 2^{n−1}: truncated ω, ι and the ζ's
/// except ζ_{2p^r−1}.
#[test]
fn mod_p_totals() {
    for (n, p) in [(2u32, 2u32), (4, 2), (6, 2), (6, 3), (8, 2), (9, 3), (10, 5)] {
        let mut r = 0;
        let mut m = n;
        while m % p == 0 {
            m /= p;
            r += 1;
        }
        let ring = mod_p_ring(&GroupSpec::psu(n).unwrap(), p).unwrap();
        let dim = (n * n - 1) as usize;
        let total: usize = ring.poincare(dim as u32).unwrap().iter().sum();
        assert_eq!(total, p.pow(r) as usize * (1 << (n - 1)), "PSU({n}) mod {p}");
    }
}

#[test]
fn pe6_mod3_presentation() {
    let ring = mod_p_ring(&GroupSpec::pe6(), 3).unwrap();
    let gens: Vec<&str> = ring.polynomial_part.generators.iter().map(|(n, _)| n.as_str()).collect();
    assert_eq!(gens, ["ω1", "x4"]);
    let rels: Vec<String> = ring.polynomial_part.relations.iter().map(|r| r.to_string()).collect();
    assert_eq!(rels, ["ω1^9", "x4^3"]);
    let odd: Vec<u32> = ring.odd_generators.iter().map(|g| g.degree).collect();
    assert_eq!(odd, [1, 3, 7, 9, 11, 15]);
}

#[test]
fn pe7_mod2_squares() {
    let ring = mod_p_ring(&GroupSpec::pe7(), 2).unwrap();
    let sq: Vec<(String, String)> = ring
        .odd_generators
        .iter()
        .map(|g| (g.name.clone(), g.square.as_ref().map(|s| s.to_string()).unwrap_or_else(|| "0".into())))
        .collect();
    let want = [("ι", "ω2"), ("ζ5", "x5"), ("ζ9", "x9"), ("ζ15", "0"), ("ζ17", "0"), ("ζ23", "0"), ("ζ27", "0")];
    assert_eq!(sq.len(), want.len());
    for ((n, s), (wn, ws)) in sq.iter().zip(want) {
        assert_eq!((n.as_str(), s.as_str()), (wn, ws));
    }
}

/// The free part of H*(PSU(n)) is an exterior algebra on n − 1 classes of
/// degrees 3, 5, …, 2n − 1, as for SU(n).
#[test]
fn integral_free_degrees() {
    for n in 2..=8u32 {
        let ring = integral_ring(&GroupSpec::psu(n).unwrap()).unwrap();
        let degs: Vec<u32> = ring.odd_generators.iter().map(|g| g.degree).collect();
        assert_eq!(degs, (2..=n).map(|s| 2 * s - 1).collect::<Vec<_>>());
    }
}

#[test]
fn documents_are_deterministic() {
    let a = render::integral(&GroupSpec::pe6()).unwrap().render(Format::Json);
    let b = render::integral(&GroupSpec::pe6()).unwrap().render(Format::Json);
    assert_eq!(a, b);
}
