//! The acceptance battery. Each check recomputes its values through the
//! library and compares them with an independent oracle (hand-built root
//! data, closed formulas, stored reference values). A check passes when no
//! comparison fails and it finishes within its time bound.

use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{binomial, is_prime, pow_u64, split_prime_power};
use crate::assembler::{
    self, bockstein_complex, bockstein_cohomology, char_polys, e6_rho23_check, exterior_series, integral_lifts,
    integral_ring, mod_p_ring, steenrod_with, CharPolySet, PhiTest, PolyRing,
};
use crate::binomial::{a_ratio, b_gcd, h_sequence, q_partition, theta_gamma};
use crate::engine::derivative_in_model;
use crate::error::Result;
use crate::flag::{chern_model, convert_ring, e3_base_presentation, flag_presentation, reduce_varpi_torsion, restriction_map};
use crate::graded::{graded_quotient, GradedAbelianGroup};
use crate::koszul::{koszul_homology, total_series};
use crate::linalg::IntMatrix;
use crate::poly::{CoeffRing, Context, Poly};
use crate::roots::{cartan_matrix, transgression, Family, GroupSpec, Lattice};
use crate::tables::{self, parse_with};

/// Outcome of one acceptance criterion.
#[derive(Clone, Debug)]
pub struct CheckReport {
    pub id: u32,
    pub title: &'static str,
    /// What in the source material the check reproduces.
    pub anchor: &'static str,
    pub bound: Duration,
    pub elapsed: Duration,
    pub details: Vec<String>,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty() && self.elapsed <= self.bound
    }

    /// `AC<id> PASS|FAIL <title> [<anchor>] (<elapsed> / bound <bound>)`.
    pub fn line(&self) -> String {
        format!(
            "AC{} {} {} [{}] ({:.2}s / bound {}s)",
            self.id,
            if self.passed() { "PASS" } else { "FAIL" },
            self.title,
            self.anchor,
            self.elapsed.as_secs_f64(),
            self.bound.as_secs()
        )
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "id": self.id,
            "title": self.title,
            "anchor": self.anchor,
            "passed": self.passed(),
            "elapsed_seconds": self.elapsed.as_secs_f64(),
            "bound_seconds": self.bound.as_secs(),
            "details": self.details,
            "failures": self.failures,
        })
    }
}

/// Time bounds, in seconds, indexed by criterion.
pub const BOUNDS: [u64; 9] = [1, 60, 120, 300, 600, 300, 120, 30, 60];

const TITLES: [(&str, &str); 9] = [
    ("transgression regression", "Borel transgression of the adjoint forms; explicit PSU(n) list"),
    ("flag-dimension oracle", "rank of H*(G/T) equals |W|, torsion-free"),
    ("E3 bottom row", "E3^{*,0}(PG) from the flag presentation against the gcd formula"),
    ("table battery", "characteristic polynomials, derivatives, lifts and integral recipes"),
    ("mod-p oracle equivalence", "H*(PG;F_p) against direct Koszul homology"),
    ("Bockstein/Steenrod battery", "Bockstein and Sq values on the generators; squares of odd generators"),
    ("Bockstein-cohomology dimensions", "delta_p-complexes of PE6 and PE7 and their images"),
    ("binomial battery", "gcd ratios, p-adic valuations, h-sequences, theta(gamma_I)"),
    ("integral assembly", "H*(PSU(n)) and H*(PSp(n)) with sigma_p ideals"),
];

/// Collects comparisons for one check.
#[derive(Default)]
struct Log {
    details: Vec<String>,
    failures: Vec<String>,
}

impl Log {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn eq<T: PartialEq + std::fmt::Debug>(&mut self, got: T, want: T, what: impl AsRef<str>) {
        if got != want {
            self.failures.push(format!("{}: got {got:?}, want {want:?}", what.as_ref()));
        }
    }

    fn note(&mut self, s: impl Into<String>) {
        self.details.push(s.into());
    }

    fn result<T>(&mut self, r: Result<T>, what: impl AsRef<str>) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.failures.push(format!("{}: {e}", what.as_ref()));
                None
            }
        }
    }
}

/// Runs criterion `id` (1-based).
pub fn run_check(id: u32) -> CheckReport {
    let start = Instant::now();
    let mut log = Log::default();
    match id {
        1 => ac1(&mut log),
        2 => ac2(&mut log),
        3 => ac3(&mut log),
        4 => ac4(&mut log),
        5 => ac5(&mut log),
        6 => ac6(&mut log),
        7 => ac7(&mut log),
        8 => ac8(&mut log),
        9 => ac9(&mut log),
        _ => log.failures.push(format!("no criterion {id}")),
    }
    let (title, anchor) = TITLES.get(id as usize - 1).copied().unwrap_or(("unknown", ""));
    CheckReport {
        id,
        title,
        anchor,
        bound: Duration::from_secs(BOUNDS.get(id as usize - 1).copied().unwrap_or(0)),
        elapsed: start.elapsed(),
        details: log.details,
        failures: log.failures,
    }
}

pub fn run_all() -> Vec<CheckReport> {
    (1..=9).map(run_check).collect()
}

fn groups_list() -> Vec<GroupSpec> {
    let mut out = Vec::new();
    out.extend((2..=10).filter_map(|n| GroupSpec::psu(n).ok()));
    out.extend((1..=8).filter_map(|n| GroupSpec::psp(n).ok()));
    out.push(GroupSpec::pe6());
    out.push(GroupSpec::pe7());
    out
}

// ------------------------------------------------------------------ AC1

/// Cartan matrix from the Dynkin diagram, entries 2(αᵢ,αⱼ)/(αⱼ,αⱼ).
fn dynkin_cartan(family: Family, n: usize) -> IntMatrix {
    let m = match family {
        Family::SU => n - 1,
        Family::Sp => n,
        Family::E6 => 6,
        Family::E7 => 7,
    };
    let mut a = IntMatrix::identity(m);
    for i in 0..m {
        a.set(i, i, BigInt::from(2));
    }
    let mut edge = |i: usize, j: usize, aij: i64, aji: i64| {
        a.set(i, j, BigInt::from(aij));
        a.set(j, i, BigInt::from(aji));
    };
    match family {
        Family::SU => (1..m).for_each(|i| edge(i - 1, i, -1, -1)),
        Family::Sp => {
            (1..m.saturating_sub(1)).for_each(|i| edge(i - 1, i, -1, -1));
            if m >= 2 {
                // the long root is last
                edge(m - 2, m - 1, -1, -2);
            }
        }
        Family::E6 | Family::E7 => {
            for (i, j) in [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (6, 7)] {
                if j <= m {
                    edge(i - 1, j - 1, -1, -1);
                }
            }
        }
    }
    a
}

fn ac1(log: &mut Log) {
    let mut count = 0;
    for spec in groups_list() {
        let Some(tau) = log.result(transgression(&spec, false), format!("transgression {spec}")) else { continue };
        let oracle = dynkin_cartan(spec.family, spec.n as usize);
        let m = spec.rank();
        log.eq(cartan_matrix(&spec), oracle.clone(), format!("Cartan matrix of {spec}"));
        // τ(tᵢ) = αᵢ = Σⱼ Aᵢⱼ ωⱼ
        for i in 0..m {
            let mut want = Poly::zero(&tau.ctx, CoeffRing::Integers);
            for j in 0..m {
                let mut e = vec![0u16; m];
                e[j] = 1;
                want.add_term(e, oracle.get(i, j).clone());
            }
            log.eq(tau.images[i].clone(), want, format!("τ(t{}) for {spec}", i + 1));
            count += 1;
        }
        // the cokernel is cyclic of order |Z|
        log.check(restriction_map(&spec).is_ok(), format!("cokernel of τ for {spec} is not ℤ/q"));
        log.eq(
            oracle.determinant().abs(),
            BigInt::from(spec.center_order()),
            format!("|det A| for {spec}"),
        );
        if spec.family == Family::SU {
            let n = spec.n as usize;
            let text: Vec<String> = (1..n)
                .map(|i| {
                    let mut t = String::new();
                    if i > 1 {
                        t.push_str(&format!("-ω{} + ", i - 1));
                    }
                    t.push_str(&format!("2ω{i}"));
                    if i < n - 1 {
                        t.push_str(&format!(" - ω{}", i + 1));
                    }
                    t
                })
                .collect();
            for (i, t) in text.iter().enumerate() {
                if let Some(want) = log.result(Poly::parse(&tau.ctx, CoeffRing::Integers, t), "parse PSU image") {
                    log.eq(tau.images[i].clone(), want, format!("explicit PSU({n}) image {}", i + 1));
                }
            }
            if let Some(c) = log.result(transgression(&spec, true), "circle transgression") {
                log.eq(c.varpi.map(|v| v.to_string()), Some("ω1".to_string()), format!("τ′(t0) for {spec}"));
            }
        }
    }
    log.note(format!("{count} transgression images compared"));
}

// ------------------------------------------------------------------ AC2

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * k)
}

/// The flag relations after the unimodular change ωⱼ = t₁ + ⋯ + tⱼ, which
/// turns them into elementary symmetric functions of the tᵢ (or tᵢ²).
fn split_coordinates(pres: &crate::flag::RingPresentation, m: usize) -> Result<(Context, Vec<Poly>)> {
    let tctx = Context::new((1..=m).map(|i| (format!("t{i}"), 2)))?;
    let z = CoeffRing::Integers;
    let mut images = Vec::with_capacity(m);
    let mut acc = Poly::zero(&tctx, z);
    for i in 0..m {
        acc = &acc + &Poly::var(&tctx, z, i);
        images.push(acc.clone());
    }
    let rels = pres.relations.iter().map(|r| r.substitute(&images)).collect::<Result<_>>()?;
    Ok((tctx, rels))
}

fn ac2(log: &mut Log) {
    let mut cases: Vec<(GroupSpec, BigInt)> = Vec::new();
    for n in 2..=5 {
        cases.push((GroupSpec::su(n).unwrap(), factorial(n as u64)));
    }
    for n in 1..=4 {
        cases.push((GroupSpec::sp(n).unwrap(), factorial(n as u64) * BigInt::from(1u64 << n)));
    }
    for (spec, want) in cases {
        let Some(pres) = log.result(flag_presentation(&spec), format!("flag presentation {spec}")) else { continue };
        let top = spec.dimension() - spec.rank() as u32;
        let split = split_coordinates(&pres, spec.rank())
            .and_then(|(ctx, rels)| crate::graded::QuotientRing::new(&ctx, CoeffRing::Integers, &rels)?.groups(top + 2));
        let Some(g) = log.result(split, format!("H*({spec}/T)")) else { continue };
        log.eq(BigInt::from(g.total_free_rank()), want.clone(), format!("rank H*({spec}/T)"));
        log.check(g.is_torsion_free(), format!("H*({spec}/T) has torsion"));
        log.eq(BigInt::from(g.total_free_rank()), spec.weyl_order(), format!("rank H*({spec}/T) against |W|"));
        for d in top + 1..=top + 2 {
            log.eq(g.piece(d).free, 0, format!("H^{d}({spec}/T) above the top degree"));
        }
        // the ω-coordinate presentation itself, where its Smith forms stay small
        let direct = spec.rank() <= 4 && !(spec.family == Family::Sp && spec.n == 4);
        if direct {
            if let Some(h) = log.result(pres.quotient().and_then(|q| q.groups(top + 2)), format!("ω-form of {spec}")) {
                for d in 0..=top + 2 {
                    log.eq(h.piece(d), g.piece(d), format!("{spec}/T degree {d} in both coordinate systems"));
                }
            }
        }
        log.note(format!("{spec}/T: rank {want}{}", if direct { "; both coordinate systems" } else { "" }));
    }
}

// ------------------------------------------------------------------ AC3

fn cyclic_order(g: &GradedAbelianGroup, d: u32) -> Option<BigInt> {
    let p = g.piece(d);
    match (p.free, p.torsion.len()) {
        (0, 0) => Some(BigInt::one()),
        (0, 1) => Some(p.torsion[0].clone()),
        _ => None,
    }
}

fn ac3(log: &mut Log) {
    for n in 2..=12u32 {
        let spec = GroupSpec::psu(n).unwrap();
        let max = 2 * n + 2;
        let Some(g) = log.result(
            e3_base_presentation(&spec, CoeffRing::Integers).and_then(|p| p.quotient()?.groups(max)),
            format!("E3 of {spec}"),
        ) else {
            continue;
        };
        log.eq(g.piece(0).free, 1, format!("{spec} degree 0"));
        for r in 1..=n + 1 {
            let want = if r <= n { b_gcd(n as u64, r as u64).unwrap() } else { BigInt::one() };
            log.eq(cyclic_order(&g, 2 * r), Some(want), format!("{spec} degree {}", 2 * r));
        }
        // third path: the τ ideal added to the flag relations in ω-coordinates
        if n <= 5 {
            direct_e3(log, &spec, &g, max);
        }
    }
    for n in 1..=8u32 {
        let spec = GroupSpec::psp(n).unwrap();
        let r = split_prime_power(n as u64, 2).0;
        let h = pow_u64(2, r + 1) as u32;
        let max = 2 * h + 4;
        let Some(g) = log.result(
            e3_base_presentation(&spec, CoeffRing::Integers).and_then(|p| p.quotient()?.groups(max)),
            format!("E3 of {spec}"),
        ) else {
            continue;
        };
        log.eq(g.piece(0).free, 1, format!("{spec} degree 0"));
        for k in 1..=max / 2 {
            let want = if k < h { BigInt::from(2) } else { BigInt::one() };
            log.eq(cyclic_order(&g, 2 * k), Some(want), format!("{spec} degree {}", 2 * k));
        }
        if n <= 3 {
            direct_e3(log, &spec, &g, max);
        }
    }
    // stored presentations of the exceptional bottom rows
    for spec in [GroupSpec::pe6(), GroupSpec::pe7()] {
        let (gens, rels) = tables::e3_presentation(spec.family, spec.n);
        let Some(res) = log.result(restriction_map(&spec), "restriction") else { continue };
        let gens: Vec<(String, u32)> =
            gens.into_iter().map(|(n, d)| (if n == "ϖ" { res.var_name.clone() } else { n }, d)).collect();
        let Some(ctx) = log.result(Context::new(gens.clone()), "context") else { continue };
        let Some(stored) = log.result(
            rels.iter().map(|t| parse_with(&ctx, CoeffRing::Integers, t, &res.var_name)).collect::<Result<Vec<_>>>(),
            "stored relations",
        ) else {
            continue;
        };
        let max = 60;
        let a = graded_quotient(&gens, &stored, &[], max, CoeffRing::Integers);
        let b = e3_base_presentation(&spec, CoeffRing::Integers).and_then(|p| p.quotient()?.groups(max));
        if let (Some(a), Some(b)) = (log.result(a, "stored E3"), log.result(b, "derived E3")) {
            for d in 0..=max {
                log.eq(a.piece(d), b.piece(d), format!("{spec} E3 degree {d}"));
            }
            log.note(format!("{spec}: stored and derived E3 agree through degree {max}"));
        }
    }
}

fn direct_e3(log: &mut Log, spec: &GroupSpec, via_restriction: &GradedAbelianGroup, max: u32) {
    let Some(pres) = log.result(flag_presentation(spec), "flag presentation") else { return };
    let Some(tau) = log.result(transgression(spec, false), "transgression") else { return };
    let g = graded_quotient(&pres.generators, &pres.relations, &tau.images, max, CoeffRing::Integers);
    if let Some(g) = log.result(g, format!("direct E3 of {spec}")) {
        for d in 0..=max {
            log.eq(g.piece(d), via_restriction.piece(d), format!("{spec} direct E3 degree {d}"));
        }
        log.note(format!("{spec}: direct quotient agrees through degree {max}"));
    }
}

// ------------------------------------------------------------------ AC4

fn table_pairs() -> Vec<(GroupSpec, u32)> {
    let mut out = Vec::new();
    for n in 2..=10u32 {
        for p in [2, 3, 5, 7] {
            if n % p == 0 {
                out.push((GroupSpec::psu(n).unwrap(), p));
            }
        }
    }
    for n in 1..=8 {
        out.push((GroupSpec::psp(n).unwrap(), 2));
    }
    out.push((GroupSpec::pe6(), 3));
    out.push((GroupSpec::pe7(), 2));
    out
}

fn ac4(log: &mut Log) {
    let pairs = table_pairs();
    let results = crate::par::par_map(&pairs, |&(spec, p)| {
        let mut l = Log::default();
        table_mod_p(&mut l, &spec, p);
        l
    });
    for l in results {
        log.details.extend(l.details);
        log.failures.extend(l.failures);
    }
    let mut integral: Vec<GroupSpec> = (2..=10).map(|n| GroupSpec::psu(n).unwrap()).collect();
    integral.extend((1..=8).map(|n| GroupSpec::psp(n).unwrap()));
    integral.push(GroupSpec::pe6());
    integral.push(GroupSpec::pe7());
    for spec in integral {
        table_integral(log, &spec);
    }
}

fn table_mod_p(log: &mut Log, spec: &GroupSpec, p: u32) {
    let ring = CoeffRing::Prime(p);
    let sc = spec.with_lattice(Lattice::SimplyConnected);
    let Some(set) = log.result(char_polys(&sc, PolyRing::ModP(p)), format!("S_{p}({sc})")) else { return };
    let model = chern_model(spec);
    let Some(res) = log.result(restriction_map(spec), "restriction") else { return };
    let tctx = res.target_ctx();
    let Some(stored) = log.result(tables::mod_p_derivatives(sc.family, sc.n, p), "stored derivatives") else { return };
    for (e, t) in set.entries.iter().zip(&stored) {
        let d = derivative_in_model(&model, &res, &e.characteristic_polynomial);
        let want = parse_with(&tctx, ring, t, &res.var_name);
        if let (Some(d), Some(w)) = (log.result(d, "derivative"), log.result(want, "parse")) {
            log.eq(convert_ring(&d, ring).to_string(), w.to_string(), format!("∂/∂ϖ of {} for ({sc}, {p})", e.label));
        }
    }
    let Some(adj) = log.result(char_polys(spec, PolyRing::ModP(p)), format!("S_{p}({spec})")) else { return };
    let exact = adj.certificates.iter().filter(|c| c.contains("equals the computed lift")).count();
    let modulo = adj.certificates.iter().filter(|c| c.contains("modulo")).count();
    for (e, c) in adj.entries.iter().zip(&adj.certificates) {
        log.check(!c.contains("differs"), format!("lift of {} for ({spec}, {p}): {c}", e.label));
    }
    log.note(format!(
        "({spec}, {p}): {} mod-p entries, {} lifted ({exact} identical, {modulo} modulo ⟨Im τ̃⟩·ker f)",
        set.entries.len(),
        adj.entries.len()
    ));
}

fn table_integral(log: &mut Log, spec: &GroupSpec) {
    let Some(set) = log.result(char_polys(spec, PolyRing::Integral), format!("S({spec})")) else { return };
    let stored = tables::integral_recipes(spec.family, spec.n);
    log.eq(set.recipes.len(), stored.len(), format!("recipe count for {spec}"));
    for (i, (got, want)) in set.recipes.iter().zip(&stored).enumerate() {
        if got != want {
            // the one sanctioned difference: a linear-relation correction that
            // makes the restriction divisible by ϖ
            let sanctioned = got.main == want.main && got.multiplier == want.multiplier && want.subtract.is_none();
            log.check(sanctioned, format!("recipe {i} for {spec}: {got} vs stored {want}"));
            if sanctioned {
                log.note(format!("{spec}: {want} normalized to {got}"));
            }
        }
    }
    let model = chern_model(spec);
    let Some(res) = log.result(restriction_map(spec), "restriction") else { return };
    let Some(e3) = log.result(e3_base_presentation(spec, CoeffRing::Integers).and_then(|p| p.quotient()), "E3") else {
        return;
    };
    let stored = tables::integral_derivatives(spec.family, spec.n);
    for (e, t) in set.entries.iter().zip(&stored) {
        // compared as classes in E3^{*,0}(PG)
        let d = derivative_in_model(&model, &res, &e.characteristic_polynomial)
            .and_then(|d| e3.normal_form(&reduce_varpi_torsion(&d, res.q).project(e3.ctx())?));
        let want = parse_with(e3.ctx(), CoeffRing::Integers, t, &res.var_name).and_then(|w| e3.normal_form(&w));
        if let (Some(d), Some(w)) = (log.result(d, "derivative"), log.result(want, "parse")) {
            log.eq(d.to_string(), w.to_string(), format!("∂/∂ϖ of {} for {spec}", e.label));
        }
    }
    log.note(format!("{spec}: {} integral entries", set.entries.len()));
}

// ------------------------------------------------------------------ AC5

fn ac5(log: &mut Log) {
    let mut cases = Vec::new();
    for n in 2..=6u32 {
        for p in [2, 3, 5] {
            if n % p == 0 {
                cases.push((GroupSpec::psu(n).unwrap(), p));
            }
        }
    }
    cases.extend((1..=4).map(|n| (GroupSpec::psp(n).unwrap(), 2)));
    let results = crate::par::par_map(&cases, |&(spec, p)| -> Result<(Vec<usize>, Vec<usize>)> {
        let top = spec.dimension();
        let ring = mod_p_ring(&spec, p)?;
        let ours = ring.poincare(top)?;
        let pres = flag_presentation(&spec)?;
        let tau = transgression(&spec, false)?;
        let h = koszul_homology(&pres, &tau, top, CoeffRing::Prime(p))?;
        Ok((ours, total_series(&h, top)))
    });
    for ((spec, p), r) in cases.iter().zip(results) {
        if let Some((ours, direct)) = log.result(r, format!("({spec}, {p})")) {
            log.eq(&ours, &direct, format!("Poincaré series of H*({spec};F{p})"));
            log.note(format!("({spec}, {p}): total {} through degree {}", ours.iter().sum::<usize>(), spec.dimension()));
        }
    }
}

// ------------------------------------------------------------------ AC6

fn ac6(log: &mut Log) {
    let mut cases: Vec<(GroupSpec, u32)> = Vec::new();
    for n in 2..=12u32 {
        for p in [2, 3, 5, 7, 11] {
            if n % p == 0 {
                cases.push((GroupSpec::psu(n).unwrap(), p));
            }
        }
    }
    cases.extend((1..=8).map(|n| (GroupSpec::psp(n).unwrap(), 2)));
    cases.push((GroupSpec::pe6(), 3));
    cases.push((GroupSpec::pe7(), 2));
    let results = crate::par::par_map(&cases, |&(spec, p)| {
        let mut l = Log::default();
        bockstein_battery(&mut l, &spec, p);
        if p == 2 {
            steenrod_battery(&mut l, &spec);
        }
        squares_battery(&mut l, &spec, p);
        l
    });
    for l in results {
        log.details.extend(l.details);
        log.failures.extend(l.failures);
    }
}

/// p-part of a positive integer.
fn p_part(n: &BigInt, p: u32) -> BigInt {
    let pb = BigInt::from(p);
    let mut out = BigInt::one();
    let mut m = n.clone();
    while !m.is_zero() && m.is_multiple_of(&pb) {
        m /= &pb;
        out *= &pb;
    }
    out
}

/// Compares two classes of the cyclic degree piece E₃^{2s,0}(PSU/PSp)
/// p-primarily, up to a p-local unit and modulo `indeterminacy`.
///
/// ζ_{2s−1} is fixed only up to adding E₃^{2s−2,0}·ι, which moves β(ζ) by
/// multiples of β(ϖ^{s−1}ι) = (q/p)·ϖ^s; values are equal when they agree
/// in the quotient by that subgroup.
fn cyclic_agree(e3: &crate::graded::QuotientRing, p: u32, a: &Poly, b: &Poly, indeterminacy: &Poly) -> Result<bool> {
    let Some(d) = a.degree()?.or(b.degree()?).or(indeterminacy.degree()?) else { return Ok(true) };
    let basis = e3.additive_basis(d)?;
    if basis.is_empty() {
        return Ok(true);
    }
    if basis.len() != 1 || basis[0].1.is_zero() {
        return Err(crate::Error::Inconsistent(format!("degree {d} piece is not finite cyclic")));
    }
    let np = p_part(&basis[0].1, p);
    let coord = |f: &Poly| -> Result<BigInt> {
        if f.is_zero() {
            return Ok(BigInt::zero());
        }
        Ok(e3.coordinates(f)?[0].mod_floor(&np))
    };
    let (ga, gb, gi) = (coord(a)?, coord(b)?, coord(indeterminacy)?);
    // ℤ/np modulo ⟨gi⟩ is ℤ/g with g = gcd(gi, np); unit multiples share their gcd with g
    let g = gi.gcd(&np);
    Ok(ga.gcd(&g) == gb.gcd(&g))
}

fn bockstein_battery(log: &mut Log, spec: &GroupSpec, p: u32) {
    let Some(lifts) = log.result(integral_lifts(spec, p), format!("lifts for ({spec}, {p})")) else { return };
    let Some(stored) = log.result(tables::bockstein_values(spec.family, spec.n, p), "stored Bockstein") else { return };
    let model = chern_model(spec);
    let Some(res) = log.result(restriction_map(spec), "restriction") else { return };
    let Some(e3) = log.result(e3_base_presentation(spec, CoeffRing::Integers).and_then(|p| p.quotient()), "E3") else {
        return;
    };
    log.eq(lifts.len(), stored.len(), format!("Bockstein count for ({spec}, {p})"));
    let exact = matches!(spec.family, Family::E6 | Family::E7);
    let mut shifted = 0;
    for (f, (s, t)) in lifts.iter().zip(&stored) {
        let got = assembler::bockstein_with(&model, &res, &e3, p, f);
        let want = parse_with(e3.ctx(), CoeffRing::Integers, t, &res.var_name).and_then(|w| e3.normal_form(&w));
        let (Some(got), Some(want)) = (log.result(got, format!("β{p}({})", f.label)), log.result(want, "parse")) else {
            continue;
        };
        let ok = if exact {
            got == want
        } else {
            let deg = f.characteristic_polynomial.degree().ok().flatten().unwrap_or(0);
            let ind = Poly::var(e3.ctx(), CoeffRing::Integers, 0).pow(deg / 2).scale(&BigInt::from(res.q / p));
            let plain = cyclic_agree(&e3, p, &got, &want, &Poly::zero(e3.ctx(), CoeffRing::Integers)).unwrap_or(false);
            let up_to = cyclic_agree(&e3, p, &got, &want, &ind).unwrap_or(false);
            if up_to && !plain {
                shifted += 1;
            }
            up_to
        };
        log.check(ok, format!("β{p}(ζ{}) for {spec}: computed {got}, stored {want}", 2 * s - 1));
    }
    if shifted > 0 {
        log.note(format!("({spec}, {p}): {shifted} values agree only after ζ ↦ ζ + λϖ^(s−1)ι"));
    }
    // β(ι) = (q/p)·ϖ has order p
    if let Some(b) = log.result(assembler::bockstein_iota(&res, p, e3.ctx()), "β(ι)") {
        log.eq(assembler::class_order(&e3, &b).ok(), Some(BigInt::from(p)), format!("order of β{p}(ι) for {spec}"));
    }
    log.note(format!("({spec}, {p}): {} Bockstein values", stored.len()));
}

fn steenrod_battery(log: &mut Log, spec: &GroupSpec) {
    let stored = tables::steenrod_values(spec.family, spec.n);
    if stored.is_empty() {
        return;
    }
    let model = chern_model(spec);
    let Some(res) = log.result(restriction_map(spec), "restriction") else { return };
    let Some(set): Option<CharPolySet> = log.result(char_polys(spec, PolyRing::ModP(2)), "S_2(PG)") else { return };
    let Some(phi) = log.result(PhiTest::new(&model, &res, 2), "φ test") else { return };
    for (s, k, target) in &stored {
        let Some(form) = set.entries.iter().find(|e| e.label == format!("ζ{}", 2 * s - 1)) else {
            log.check(false, format!("no ζ{} for {spec}", 2 * s - 1));
            continue;
        };
        let want: Vec<String> = target.iter().map(|t| format!("ζ{t}")).collect();
        if let Some(r) = log.result(steenrod_with(&model, &phi, &set, form, *k), format!("Sq^{k}ζ{} for {spec}", 2 * s - 1)) {
            log.eq(r.labels, want, format!("Sq^{k}ζ{} for {spec}", 2 * s - 1));
        }
    }
    log.note(format!("{spec}: {} Steenrod values", stored.len()));
}

/// Odd generators and squares of H*(PG;𝔽ₚ) against the stored shape.
fn squares_battery(log: &mut Log, spec: &GroupSpec, p: u32) {
    let Some(ring) = log.result(mod_p_ring(spec, p), format!("H*({spec};F{p})")) else { return };
    let Some((_, _, odd)) = log.result(tables::mod_p_ring_shape(spec.family, spec.n, p), "stored shape") else {
        return;
    };
    let res = restriction_map(spec).ok();
    let var = res.map(|r| r.var_name).unwrap_or_default();
    let Some(q) = log.result(ring.polynomial_part.quotient(), "polynomial part") else { return };
    log.eq(ring.odd_generators.len(), odd.len(), format!("odd generator count for ({spec}, {p})"));
    for (g, o) in ring.odd_generators.iter().zip(&odd) {
        log.eq((&g.name, g.degree), (&o.name, o.degree), format!("odd generator of ({spec}, {p})"));
        let got = match &g.square {
            Some(s) => q.normal_form(s).ok(),
            None => Some(Poly::zero(q.ctx(), q.ring())),
        };
        let want = match &o.square {
            Some(t) => parse_with(q.ctx(), q.ring(), t, &var).and_then(|w| q.normal_form(&w)).ok(),
            None => Some(Poly::zero(q.ctx(), q.ring())),
        };
        log.eq(got, want, format!("{}² in H*({spec};F{p})", g.name));
    }
}

// ------------------------------------------------------------------ AC7

fn ac7(log: &mut Log) {
    for family in [Family::E6, Family::E7] {
        let Some(c) = log.result(bockstein_complex(family), format!("{family:?} complex")) else { continue };
        if let Some(h) = log.result(bockstein_cohomology(&c, c.top_degree + 1), "δ-cohomology") {
            log.eq(h.total(), c.expected_total, format!("{family:?} δ-cohomology total"));
            log.eq(&h.image_dims, &h.presentation_dims, format!("{family:?} Im δ against the presentation"));
            log.note(format!(
                "{family:?}: algebra dimension {}, H(δ) total {}, top degree {}",
                h.algebra_dims.iter().sum::<usize>(),
                h.total(),
                c.top_degree
            ));
        }
        if family == Family::E6 {
            if let Some(z) = log.result(e6_rho23_check(&c), "PE6 reduction of ωρ23") {
                log.check(z.is_zero(), format!("r3(ωρ23) ≠ x4²·c14: residue {z}"));
            }
        }
    }
}

// ------------------------------------------------------------------ AC8

/// Base-p digit sum.
fn digit_sum(mut n: u64, p: u64) -> u64 {
    let mut s = 0;
    while n > 0 {
        s += n % p;
        n /= p;
    }
    s
}

/// ord_p C(n, s) by Legendre's formula.
fn legendre_ord(n: u64, s: u64, p: u64) -> u64 {
    (digit_sum(s, p) + digit_sum(n - s, p) - digit_sum(n, p)) / (p - 1)
}

fn ac8(log: &mut Log) {
    // gcd ratios against the prime-power blocks
    for n in 3..=200u64 {
        let Some(q) = log.result(q_partition(n), format!("Q-partition of {n}")) else { continue };
        let mut prev = BigInt::from(n);
        for k in 2..=n {
            let b: BigInt = (1..=k).fold(BigInt::zero(), |g, j| g.gcd(&binomial(n, j)));
            let ratio = &prev / &b;
            let want = BigInt::from(q.block_of(k).unwrap_or(1));
            log.eq(ratio.clone(), want, format!("a_{{{n},{k}}}"));
            if let Some(a) = log.result(a_ratio(n, k), format!("a_ratio({n},{k})")) {
                log.eq(BigInt::from(a), ratio, format!("a_ratio({n},{k}) against the gcd recurrence"));
            }
            prev = b;
        }
    }
    // valuations: ord ≥ r − t, with equality exactly for a single nonzero digit
    let mut checked = 0u64;
    let mut odd_equalities = 0u64;
    for p in [2u64, 3, 5, 7] {
        for n in 1..=10_000u64 {
            let (r, _) = split_prime_power(n, p);
            if r < 2 {
                continue;
            }
            let mut s = 1;
            while s <= n {
                let t = s.ilog(p);
                if t + 1 >= r {
                    break;
                }
                let v = legendre_ord(n, s, p);
                let bound = (r - t) as u64;
                log.check(v >= bound, format!("ord_{p} C({n},{s}) = {v} < {bound}"));
                let single = s % pow_u64(p, t) == 0;
                log.check((v == bound) == single, format!("equality case of ord_{p} C({n},{s})"));
                if v == bound && s != pow_u64(p, t) {
                    odd_equalities += 1;
                }
                if n <= 300 {
                    if let Some(c) = log.result(crate::binomial::ord_p_binom(n, s, p), "ord_p_binom") {
                        log.eq(c.valuation as u64, v, format!("ord_p_binom({n},{s},{p})"));
                    }
                }
                checked += 1;
                s += 1;
            }
        }
    }
    log.note(format!(
        "{checked} valuations checked; {odd_equalities} equalities at s = c·p^t with c > 1 (odd p only)"
    ));
    // h-sequences
    let mut hs = 0;
    for p in (2..=729u64).filter(|&p| is_prime(p)) {
        let mut r = 1;
        while pow_u64(p, r) <= 729 {
            for s in 1..=r {
                if let Some(h) = log.result(h_sequence(p, r, s), format!("h-sequence p={p} r={r} s={s}")) {
                    let n = pow_u64(p, r);
                    let lhs = binomial(n, pow_u64(p, s)) - BigInt::from(pow_u64(p, r - s));
                    let rhs: BigInt = h.iter().enumerate().map(|(i, hi)| hi * binomial(n, pow_u64(p, s - 1 - i as u32))).sum();
                    log.eq(lhs, rhs, format!("h-sequence certificate p={p} r={r} s={s}"));
                    hs += 1;
                }
            }
            r += 1;
        }
    }
    log.note(format!("{hs} h-sequences certified"));
    // θ(γ_I) identities for n = 8
    let cases: [(&[u64], &str); 5] = [
        (&[1, 2, 4], "2·ρ3·ρ7"),
        (&[1, 2, 8], "2·ρ3·ρ15 + ω^4·ρ3·ρ7"),
        (&[1, 4, 8], "2·ρ7·ρ15 + ω^2·ρ3·ρ15"),
        (&[2, 4, 8], "ω·ρ7·ρ15"),
        (&[1, 2, 4, 8], "ρ3·ρ7·ρ15"),
    ];
    for (set, want) in cases {
        if let Some(t) = log.result(theta_gamma(8, set), format!("θ(γ_{set:?})")) {
            log.eq(t.to_string(), want.to_string(), format!("θ(γ_{set:?}) for n = 8"));
        }
    }
    // divisibility by p when the top index is below r
    let mut div = 0;
    for (p, rmax) in [(2u64, 6u32), (3, 4), (5, 2), (7, 2)] {
        for r in 1..=rmax {
            let n = pow_u64(p, r);
            for set in crate::binomial::admissible_sets(p, r) {
                if *set.last().unwrap() >= n {
                    continue;
                }
                if let Some(t) = log.result(theta_gamma(n, &set), format!("θ(γ_{set:?}), n = {n}")) {
                    log.check(t.all_divisible_by(&BigInt::from(p)), format!("θ(γ_{set:?}) for n = {n} not divisible by {p}"));
                    div += 1;
                }
            }
        }
    }
    log.note(format!("{div} divisibility cases"));
}

// ------------------------------------------------------------------ AC9

fn ac9(log: &mut Log) {
    let mut specs: Vec<GroupSpec> = (1..=8).map(|n| GroupSpec::psp(n).unwrap()).collect();
    specs.extend((2..=12).map(|n| GroupSpec::psu(n).unwrap()));
    let results = crate::par::par_map(&specs, |spec| integral_ring(spec));
    for (spec, r) in specs.iter().zip(results) {
        let Some(ring) = log.result(r, format!("H*({spec})")) else { continue };
        let free: Vec<u32> = ring.odd_generators.iter().map(|g| g.degree).collect();
        let ds = tables::degree_set_integral(spec.family, spec.n);
        log.eq(free.clone(), ds.iter().map(|s| 2 * s - 1).collect::<Vec<_>>(), format!("free degrees of {spec}"));
        let series = exterior_series(&free, free.iter().sum());
        log.eq(series.iter().sum::<usize>(), 1usize << ds.len(), format!("free rank of {spec}"));
        for (p, pres) in &ring.torsion_ideals {
            log.check(pres.validate().is_ok(), format!("σ{p}({spec}) presentation is not homogeneous"));
            log.check(!pres.relations.is_empty(), format!("σ{p}({spec}) has no relations"));
        }
        let want_primes = spec.torsion_primes();
        log.eq(ring.torsion_ideals.keys().copied().collect::<Vec<_>>(), want_primes, format!("torsion primes of {spec}"));
        if spec.family == Family::SU {
            // ∏ a_{n,s} = n
            let prod: u64 = (2..=spec.n as u64).map(|s| a_ratio(spec.n as u64, s).unwrap_or(0)).product();
            log.eq(prod, spec.n as u64, format!("∏ a_(n,s) for {spec}"));
        }
    }
    log.note(format!("{} integral rings assembled", specs.len()));
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_small() {
        assert_eq!(legendre_ord(8, 2, 2), 2);
        // 84 = 2²·3·7
        assert_eq!(legendre_ord(9, 3, 3), 1);
        for p in [2u64, 3, 5] {
            for n in 1..60u64 {
                for s in 0..=n {
                    assert_eq!(legendre_ord(n, s, p), crate::arith::valuation(p, &binomial(n, s)) as u64, "C({n},{s}) at {p}");
                }
            }
        }
    }

    #[test]
    fn dynkin_small() {
        let a = dynkin_cartan(Family::Sp, 2);
        assert_eq!(a.get(1, 0), &BigInt::from(-2));
        assert_eq!(dynkin_cartan(Family::E6, 6).determinant(), BigInt::from(3));
        assert_eq!(dynkin_cartan(Family::E7, 7).determinant(), BigInt::from(2));
    }

    #[test]
    fn quick_checks() {
        for id in [1, 8] {
            let r = run_check(id);
            assert!(r.failures.is_empty(), "{:?}", r.failures);
        }
    }
}
