use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use flagcoh::arith::{binomial, valuation};
use flagcoh::binomial::{a_ratio, b_gcd};
use flagcoh::flag::{e3_base_presentation, flag_presentation};
use flagcoh::koszul::{koszul_d2, KoszulElement};
use flagcoh::linalg::smith_normal_form;
use flagcoh::roots::{cartan_matrix, transgression};
use flagcoh::{par, CoeffRing, Context, Family, GroupSpec, IntMatrix, Lattice, Poly};

/// Kummer: ord_p C(n, s) is the number of carries adding s and n − s in base p.
fn carries(a: u64, b: u64, p: u64) -> u32 {
    let (mut a, mut b, mut carry, mut count) = (a, b, 0, 0);
    while a > 0 || b > 0 || carry > 0 {
        let d = a % p + b % p + carry;
        carry = u64::from(d >= p);
        count += carry as u32;
        a /= p;
        b /= p;
    }
    count
}

fn small_spec() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        (2u32..=10).prop_map(|n| GroupSpec::su(n).unwrap()),
        (1u32..=8).prop_map(|n| GroupSpec::sp(n).unwrap()),
        Just(GroupSpec::e6()),
        Just(GroupSpec::e7()),
    ]
}

fn random_poly(ctx: &Context, ring: CoeffRing, terms: &[(Vec<u16>, i64)]) -> Poly {
    Poly::from_terms(ctx, ring, terms.iter().map(|(m, c)| (m.clone(), BigInt::from(*c))))
}

/// Homogeneous random polynomial of degree `d` in the given context, from a
/// seed of (monomial index, coefficient) picks.
fn homogeneous(ctx: &Context, ring: CoeffRing, d: u32, picks: &[(usize, i64)]) -> Poly {
    let monos = flagcoh::graded::monomials_of_degree(&ctx.degrees(), &vec![false; ctx.len()], d);
    if monos.is_empty() {
        return Poly::zero(ctx, ring);
    }
    let terms: Vec<(Vec<u16>, i64)> = picks.iter().map(|(i, c)| (monos[i % monos.len()].clone(), *c)).collect();
    random_poly(ctx, ring, &terms)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn b_gcd_matches_brute_gcd(n in 2u64..300, k in 1u64..40) {
        let k = k.min(n);
        let brute = (1..=k).fold(BigInt::zero(), |g, j| g.gcd(&binomial(n, j)));
        prop_assert_eq!(b_gcd(n, k).unwrap(), brute);
    }

    #[test]
    fn a_ratios_multiply_to_n(n in 2u64..400) {
        let prod: u64 = (2..=n).map(|k| a_ratio(n, k).unwrap()).product();
        prop_assert_eq!(prod, n);
    }

    #[test]
    fn valuation_is_kummer_carries(n in 1u64..3000, s in 0u64..3000, pi in 0usize..5) {
        let p = [2u64, 3, 5, 7, 11][pi];
        let s = s % (n + 1);
        prop_assert_eq!(valuation(p, &binomial(n, s)), carries(s, n - s, p));
    }

    #[test]
    fn cartan_determinant_is_center_order(spec in small_spec()) {
        let det = cartan_matrix(&spec).determinant();
        prop_assert_eq!(det, BigInt::from(spec.center_order()));
    }

    #[test]
    fn snf_certificate_and_divisibility(rows in prop::collection::vec(prop::collection::vec(-9i64..10, 4), 1..5)) {
        let m = IntMatrix::from_rows(&rows);
        let s = smith_normal_form(&m);
        let nz: Vec<&BigInt> = s.diagonal.iter().filter(|d| !d.is_zero()).collect();
        for w in nz.windows(2) {
            prop_assert!(w[1].is_multiple_of(w[0]));
        }
        prop_assert!(nz.iter().all(|d| d.is_positive()));
        prop_assert!(s.left.determinant().abs().is_one());
        prop_assert!(s.right.determinant().abs().is_one());
        // square case: product of the factors is |det|
        if rows.len() == 4 {
            let prod: BigInt = s.diagonal.iter().product();
            prop_assert_eq!(prod, m.determinant().abs());
        }
    }

    #[test]
    fn poly_display_parses_back(terms in prop::collection::vec((prop::collection::vec(0u16..4, 3), -20i64..20), 0..6)) {
        let ctx = Context::new([("ω1", 2u32), ("x3", 6), ("c4", 8)]).unwrap();
        let p = random_poly(&ctx, CoeffRing::Integers, &terms);
        let q = Poly::parse(&ctx, CoeffRing::Integers, &p.to_string()).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn normal_form_is_idempotent_and_additive(
        n in 3u32..7,
        half in 1u32..8,
        a in prop::collection::vec((0usize..64, -5i64..6), 1..5),
        b in prop::collection::vec((0usize..64, -5i64..6), 1..5),
    ) {
        let pres = e3_base_presentation(&GroupSpec::new(Family::SU, n, Lattice::Adjoint).unwrap(), CoeffRing::Integers).unwrap();
        let q = pres.quotient().unwrap();
        let ctx = q.ctx().clone();
        let f = homogeneous(&ctx, CoeffRing::Integers, 2 * half, &a);
        let g = homogeneous(&ctx, CoeffRing::Integers, 2 * half, &b);
        let nf = q.normal_form(&f).unwrap();
        prop_assert_eq!(q.normal_form(&nf).unwrap(), nf.clone());
        let lhs = q.normal_form(&(&f + &g)).unwrap();
        let rhs = q.normal_form(&(&nf + &q.normal_form(&g).unwrap())).unwrap();
        prop_assert_eq!(lhs, rhs);
        let short = q.short_form(&f).unwrap();
        prop_assert_eq!(q.normal_form(&short).unwrap(), nf);
    }

    #[test]
    fn koszul_d2_squares_to_zero(
        n in 2u32..5,
        parts in prop::collection::vec((0u64..8, prop::collection::vec((0usize..32, -4i64..5), 1..3), 0u32..3), 1..4),
    ) {
        let spec = GroupSpec::su(n).unwrap();
        let pres = flag_presentation(&spec).unwrap();
        let tau = transgression(&spec, false).unwrap();
        let ctx = pres.ctx();
        let fiber = tau.rank();
        let mut x = KoszulElement::zero(&ctx, CoeffRing::Integers, fiber);
        for (mask, picks, half) in &parts {
            let mask = mask & ((1u64 << fiber) - 1);
            x.add(mask, homogeneous(&ctx, CoeffRing::Integers, 2 * half, picks));
        }
        let dd = koszul_d2(&koszul_d2(&x, &tau).unwrap(), &tau).unwrap();
        prop_assert!(dd.is_zero());
    }

    #[test]
    fn sequential_and_parallel_groups_agree(n in 2u32..6, d in 2u32..14) {
        let pres = flag_presentation(&GroupSpec::su(n).unwrap()).unwrap();
        let a = pres.quotient().unwrap().groups(d).unwrap();
        let b = par::sequential(|| pres.quotient().unwrap().groups(d).unwrap());
        prop_assert_eq!(a.degrees, b.degrees);
    }
}

/// Elimination of linear generators keeps every graded piece.
#[test]
fn simplified_presentations_keep_dimensions() {
    for (family, n, p) in [(Family::SU, 4, 2), (Family::SU, 6, 3), (Family::Sp, 3, 2), (Family::E6, 6, 3), (Family::E7, 7, 2)] {
        let spec = GroupSpec::new(family, n, Lattice::Adjoint).unwrap();
        let pres = e3_base_presentation(&spec, CoeffRing::Prime(p)).unwrap();
        let (small, images) = pres.simplified().unwrap();
        assert_eq!(images.len(), pres.generators.len());
        let (a, b) = (pres.quotient().unwrap(), small.quotient().unwrap());
        let dims = |q: &flagcoh::QuotientRing| -> BTreeMap<u32, usize> {
            (0..=40).step_by(2).map(|d| (d, q.dimension(d).unwrap())).collect()
        };
        assert_eq!(dims(&a), dims(&b), "{spec} mod {p}");
        assert!(small.generators.len() <= pres.generators.len());
        // every old relation maps to zero
        for r in &pres.relations {
            assert!(b.is_zero(&r.substitute(&images).unwrap()).unwrap(), "{spec}: {r}");
        }
    }
}

