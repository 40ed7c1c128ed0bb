//! Final assembly: characteristic-polynomial sets, mod-p and integral rings,
//! Bockstein and Steenrod actions, and the Bockstein complexes of PE₆/PE₇.

use std::collections::{BTreeMap, HashMap};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::json;

use crate::arith::{binomial_signed, mod_u32, split_prime_power};
use crate::binomial::{a_ratio, admissible_sets, theta_gamma, ThetaExpression};
use crate::engine::{derivative_in_model, lift_characteristic, theta_bar, OneForm};
use crate::error::{Error, Result};
use crate::flag::{
    chern_model, convert_ring, e3_base_presentation, mod_p_presentation, proportional_modulo, reduce_varpi_torsion,
    restriction_map, special_pairs, ChernModel, Restriction, RingPresentation,
};
use crate::graded::{fp_ideal_certificate, monomials_of_degree, super_mul, QuotientRing};
use crate::linalg::{FpEchelon, SparseRow};
use crate::par::par_map;
use crate::poly::{CoeffRing, Context, Mono, Poly};
use crate::roots::{Family, GroupSpec, Lattice};
use crate::tables::{self, Recipe, StoredOdd};

// ---------------------------------------------------------------- scope

/// Whether (G, p) is one of the torsion pairs handled here.
pub fn torsion_pair(spec: &GroupSpec, p: u32) -> Result<()> {
    let q = spec.with_lattice(Lattice::Adjoint).center_order();
    if q % p != 0 {
        return Err(Error::Precondition(format!(
            "p = {p} does not divide |Z| = {q}: H*({};F_{p}) ≅ H*({};F_{p}) through the covering",
            spec.with_lattice(Lattice::Adjoint),
            spec.with_lattice(Lattice::SimplyConnected)
        )));
    }
    Ok(())
}

fn fp(p: u32) -> Result<CoeffRing> {
    CoeffRing::prime(p)
}

/// ker f ∩ A: the Chern-model relations, plus ω₁ⁿ (SU) or ω₁^{2n} (Sp) which
/// the model leaves implicit.
fn kernel_generators(model: &ChernModel, ring: CoeffRing) -> Vec<Poly> {
    let mut out: Vec<Poly> = model.relations.iter().map(|r| convert_ring(r, ring)).collect();
    let w = Poly::var(&model.ctx, ring, 0);
    match model.spec.family {
        Family::SU => out.push(w.pow(model.spec.n)),
        Family::Sp => out.push(w.pow(2 * model.spec.n)),
        _ => {}
    }
    out
}

// ---------------------------------------------------------------- char polys

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyRing {
    Integral,
    ModP(u32),
}

/// A set of primary characteristic polynomials with per-entry provenance.
#[derive(Clone, Debug)]
pub struct CharPolySet {
    pub group: GroupSpec,
    pub ring: PolyRing,
    pub entries: Vec<OneForm>,
    /// Half-degrees of the entries (the degree set).
    pub degree_set: Vec<u32>,
    pub certificates: Vec<String>,
    /// Integral sets: the recipe of each entry.
    pub recipes: Vec<Recipe>,
}

impl CharPolySet {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": self.group.to_string(),
            "ring": match self.ring { PolyRing::Integral => "Z".to_string(), PolyRing::ModP(p) => format!("F{p}") },
            "degree_set": self.degree_set,
            "entries": self.entries.iter().zip(&self.certificates).map(|(e, c)| {
                let mut j = e.to_json();
                j["certificate"] = json!(c);
                j
            }).collect::<Vec<_>>(),
            "recipes": self.recipes.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// S_p(G), S_p(PG) or S(G) depending on the ring and the lattice of `spec`.
pub fn char_polys(spec: &GroupSpec, ring: PolyRing) -> Result<CharPolySet> {
    match ring {
        PolyRing::Integral => integral_set(spec),
        PolyRing::ModP(p) => {
            torsion_pair(spec, p)?;
            if spec.is_adjoint() {
                adjoint_mod_p_set(spec, p)
            } else {
                mod_p_set(spec, p)
            }
        }
    }
}

fn zeta_label(s: u32) -> String {
    format!("ζ{}", 2 * s - 1)
}

/// S_p(G): the stored polynomials, each certified to lie in ker f_p and to
/// agree, up to a unit and the earlier entries, with the relation of the
/// derived mod-p presentation in the same degree.
fn mod_p_set(spec: &GroupSpec, p: u32) -> Result<CharPolySet> {
    let sc = spec.with_lattice(Lattice::SimplyConnected);
    let model = chern_model(&sc);
    let ring = fp(p)?;
    let pres = mod_p_presentation(&model, p)?;
    let kernel = kernel_generators(&model, ring);
    let stored = tables::mod_p_char_polys(sc.family, sc.n, p)?;
    if stored.len() != pres.deltas.len() {
        return Err(Error::Inconsistent(format!(
            "{} stored polynomials but {} relations in the mod-{p} presentation",
            stored.len(),
            pres.deltas.len()
        )));
    }
    let deltas = pres.delta_polys();
    let mut entries = Vec::new();
    let mut certificates = Vec::new();
    for (i, text) in stored.iter().enumerate() {
        let poly = Poly::parse(&model.ctx, ring, text)?;
        let s = pres.deltas[i].s;
        if poly.degree()? != Some(2 * s) {
            return Err(Error::Inconsistent(format!("{text} is not in half-degree {s}")));
        }
        if fp_ideal_certificate(&kernel, &poly)?.is_none() {
            return Err(Error::NotInIdeal(format!("{text} is not in ker f_{p}")));
        }
        let lambda = proportional_modulo(&poly, &deltas[i], &deltas[..i])?
            .ok_or_else(|| Error::Inconsistent(format!("{text} is not a unit multiple of {}", deltas[i])))?;
        entries.push(OneForm::new(format!("ξ{}", 2 * s - 1), poly)?);
        certificates.push(format!("in ker f_{p}; ≡ {lambda}·({}) modulo earlier entries", deltas[i]));
    }
    Ok(CharPolySet {
        group: sc,
        ring: PolyRing::ModP(p),
        entries,
        degree_set: pres.degree_set(),
        certificates,
        recipes: Vec::new(),
    })
}

/// θ̄ of every entry of S_p(G) in E₃^{*,0}(PG;𝔽ₚ), with h(G) located as the
/// unique entry of nonzero image.
#[derive(Clone, Debug)]
pub struct ThetaBarTable {
    pub values: Vec<(u32, Poly)>,
    pub h: u32,
}

pub fn theta_bar_table(spec: &GroupSpec, p: u32) -> Result<ThetaBarTable> {
    torsion_pair(spec, p)?;
    let adj = spec.with_lattice(Lattice::Adjoint);
    let set = mod_p_set(spec, p)?;
    let model = chern_model(&adj);
    let res = restriction_map(&adj)?;
    let e3 = e3_base_presentation(&adj, fp(p)?)?.quotient()?;
    let mut values = Vec::new();
    let mut hs = Vec::new();
    for (e, &s) in set.entries.iter().zip(&set.degree_set) {
        let v = theta_bar(&model, &res, &e3, e)?;
        if !v.is_zero() {
            hs.push(s);
        }
        values.push((s, v));
    }
    let [h] = hs[..] else {
        return Err(Error::Inconsistent(format!("θ̄ is nonzero in half-degrees {hs:?}; expected exactly one")));
    };
    Ok(ThetaBarTable { values, h })
}

/// S_p(PG): the stored lifted polynomials, certified to restrict to zero
/// and to lie in ker f_p, and compared with the output of the lifting
/// algorithm.
fn adjoint_mod_p_set(spec: &GroupSpec, p: u32) -> Result<CharPolySet> {
    let adj = spec.with_lattice(Lattice::Adjoint);
    let ring = fp(p)?;
    let model = chern_model(&adj);
    let res = restriction_map(&adj)?;
    let tb = theta_bar_table(spec, p)?;
    let base = mod_p_set(spec, p)?;
    let kernel = kernel_generators(&model, ring);
    let stored = tables::lifted_char_polys(adj.family, adj.n, p)?;
    let tctx = res.target_ctx();
    let mut entries = Vec::new();
    let mut certificates = Vec::new();
    let mut degree_set = Vec::new();
    let phi = PhiTest::new(&model, &res, p).ok();
    for (s, text) in stored {
        if s == tb.h {
            return Err(Error::Inconsistent(format!("stored lifted set contains the excluded degree {s}")));
        }
        let poly = Poly::parse(&model.ctx, ring, &text)?;
        if !res.restrict_model(&model, &poly, &tctx)?.is_zero() {
            return Err(Error::Inconsistent(format!("{text} does not restrict to zero mod {p}")));
        }
        if fp_ideal_certificate(&kernel, &poly)?.is_none() {
            return Err(Error::NotInIdeal(format!("{text} is not in ker f_{p}")));
        }
        let idx = base
            .degree_set
            .iter()
            .position(|&d| d == s)
            .ok_or_else(|| Error::Inconsistent(format!("half-degree {s} is not in D(G,{p})")))?;
        let lift = lift_characteristic(&model, &res, &base.entries[idx].characteristic_polynomial)?;
        let diff = &poly - &lift.lifted;
        let verdict = if diff.is_zero() {
            "equals the computed lift".to_string()
        } else {
            match &phi {
                Some(t) if t.is_trivial(&diff)? => "agrees with the computed lift modulo ⟨Im τ̃⟩·ker f".to_string(),
                _ => format!("differs from the computed lift {}", lift.lifted),
            }
        };
        entries.push(OneForm::new(zeta_label(s), poly)?);
        certificates.push(format!("restricts to 0; in ker f_{p}; {verdict}"));
        degree_set.push(s);
    }
    Ok(CharPolySet { group: adj, ring: PolyRing::ModP(p), entries, degree_set, certificates, recipes: Vec::new() })
}

/// Integral lifts used by the Bockstein: the stored H of each (H)ₚ.
pub fn integral_lifts(spec: &GroupSpec, p: u32) -> Result<Vec<OneForm>> {
    torsion_pair(spec, p)?;
    let model = chern_model(spec);
    tables::lifted_char_polys(spec.family, spec.n, p)?
        .into_iter()
        .map(|(s, t)| OneForm::new(zeta_label(s), Poly::parse(&model.ctx, CoeffRing::Integers, &t)?))
        .collect()
}

/// Derives S(G) from the relations: every special generator x with linear
/// relation p·x + α and power relation x^k + … contributes p·R_pow − x^{k−1}·R_lin;
/// the remaining relations enter as they are, corrected by x-multiples of
/// linear relations until they restrict to a multiple of ϖ.
pub fn derive_integral_recipes(model: &ChernModel, res: &Restriction) -> Result<Vec<(Recipe, Poly)>> {
    let z = CoeffRing::Integers;
    let ctx = &model.ctx;
    let pairs = special_pairs(model)?;
    let mut used = vec![false; model.relations.len()];
    let mut out: Vec<(u32, Recipe, Poly)> = Vec::new();
    for (x, &(lin, p)) in &pairs {
        used[lin] = true;
        let xi = ctx.index(x).unwrap();
        let pow = model.relations.iter().enumerate().find_map(|(ri, r)| {
            r.terms().iter().find_map(|(m, c)| {
                let pure = m.iter().enumerate().all(|(i, &e)| (i == xi) == (e > 0));
                (ri != lin && pure && m[xi] >= 2 && (c.is_one() || (-c).is_one())).then_some((ri, m[xi] as u32, c.clone()))
            })
        });
        let Some((ri, k, c)) = pow else {
            return Err(Error::Inconsistent(format!("no power relation for {x}")));
        };
        used[ri] = true;
        let xv = Poly::var(ctx, z, xi);
        let main = model.relations[ri].scale(&(BigInt::from(p) * &c));
        let poly = &main - &xv.pow(k - 1).checked_mul(&model.relations[lin])?;
        let factor = if k == 2 { x.clone() } else { format!("{x}^{}", k - 1) };
        let mult = if c.is_one() { p as i64 } else { -(p as i64) };
        let recipe = Recipe {
            main: model.labels[ri].clone(),
            multiplier: mult,
            subtract: Some((factor, model.labels[lin].clone())),
        };
        out.push((poly.degree()?.unwrap(), recipe, poly));
    }
    for (ri, r) in model.relations.iter().enumerate() {
        if used[ri] {
            continue;
        }
        let (poly, correction) = normalize_for_restriction(model, res, r, &pairs)?;
        let recipe = Recipe { main: model.labels[ri].clone(), multiplier: 1, subtract: correction };
        out.push((poly.degree()?.unwrap(), recipe, poly));
    }
    out.sort_by_key(|(d, _, _)| *d);
    Ok(out.into_iter().map(|(_, r, p)| (r, p)).collect())
}

/// Removes the ϖ-free part of the restriction of `r` with x-multiples of the
/// linear relations; returns the corrected polynomial and the correction.
fn normalize_for_restriction(
    model: &ChernModel,
    res: &Restriction,
    r: &Poly,
    pairs: &BTreeMap<String, (usize, u32)>,
) -> Result<(Poly, Option<(String, String)>)> {
    let Some(_) = res.a.first() else { return Ok((r.clone(), None)) };
    let tctx = res.target_ctx();
    let z = CoeffRing::Integers;
    let mut cur = r.clone();
    let mut parts: Vec<(Poly, String)> = Vec::new();
    for _ in 0..32 {
        let img = res.restrict_model(model, &cur, &tctx)?;
        let free: Vec<(Mono, BigInt)> = img.terms().iter().filter(|(m, _)| m[0] == 0).map(|(m, c)| (m.clone(), c.clone())).collect();
        let Some((m, c)) = free.into_iter().next() else {
            let correction = if parts.is_empty() {
                None
            } else {
                let factor = parts.iter().map(|(f, _)| f.to_string()).collect::<Vec<_>>().join(" + ");
                let labels = parts.iter().map(|(_, l)| l.clone()).collect::<Vec<_>>().join(", ");
                Some((factor, labels))
            };
            return Ok((cur, correction));
        };
        // pick x_t dividing m whose linear coefficient divides c
        let mut step = None;
        for (x, &(lin, p)) in pairs {
            let ti = tctx.index(x).unwrap();
            if m[ti] == 0 || !c.is_multiple_of(&BigInt::from(p)) {
                continue;
            }
            let mut rest = m.clone();
            rest[ti] -= 1;
            let mut mono = vec![0u16; model.ctx.len()];
            for (j, v) in tctx.vars().iter().enumerate().skip(1) {
                mono[model.ctx.index(&v.name).unwrap()] = rest[j];
            }
            let f = Poly::monomial(&model.ctx, z, mono, &c / BigInt::from(p));
            step = Some((f, model.labels[lin].clone(), lin));
            break;
        }
        let Some((f, label, lin)) = step else {
            return Err(Error::Inconsistent(format!("cannot clear the ϖ-free restriction of {r}")));
        };
        cur = &cur - &f.checked_mul(&model.relations[lin])?;
        parts.push((f, label));
    }
    Err(Error::Inconsistent(format!("normalization of {r} did not terminate")))
}

fn integral_set(spec: &GroupSpec) -> Result<CharPolySet> {
    let sc = spec.with_lattice(Lattice::SimplyConnected);
    let adj = spec.with_lattice(Lattice::Adjoint);
    let model = chern_model(&sc);
    let res = restriction_map(&adj)?;
    let derived = derive_integral_recipes(&model, &res)?;
    let stored = tables::integral_recipes(sc.family, sc.n);
    let mut entries = Vec::new();
    let mut certificates = Vec::new();
    let mut recipes = Vec::new();
    let mut degree_set = Vec::new();
    for (i, (recipe, poly)) in derived.into_iter().enumerate() {
        let s = poly.degree()?.unwrap() / 2;
        let note = match stored.get(i) {
            Some(st) if *st == recipe => "matches the stored recipe".to_string(),
            Some(st) => format!("stored recipe {st}; normalized to {recipe} so that the restriction is divisible by ϖ"),
            None => "no stored recipe".to_string(),
        };
        entries.push(OneForm::new(format!("γ{}", 2 * s - 1), poly)?);
        certificates.push(note);
        recipes.push(recipe);
        degree_set.push(s);
    }
    Ok(CharPolySet { group: sc, ring: PolyRing::Integral, entries, degree_set, certificates, recipes })
}

// ---------------------------------------------------------------- φ-triviality

/// Decides membership in (⟨Im τ̃⟩ ∩ A′)·(ker f ∩ A′) over 𝔽ₚ, where A′ is
/// the x-free part of the Chern model; products of that shape have φₚ = 0.
pub struct PhiTest {
    model: ChernModel,
    p: u32,
    /// A′ = 𝔽ₚ[w, c…].
    actx: Context,
    /// Generators cₖ − γₖ·a^{−k}·wᵏ of the restriction kernel, in A′.
    igens: Vec<Poly>,
    kernel: Vec<Poly>,
    jcache: Mutex<HashMap<u32, Vec<Poly>>>,
}

impl PhiTest {
    pub fn new(model: &ChernModel, res: &Restriction, p: u32) -> Result<Self> {
        let ring = fp(p)?;
        let aw = mod_u32(&res.a[model.w_index], p);
        if aw == 0 {
            return Err(Error::Unsupported(format!("w restricts to 0 mod {p}; the kernel is not generated by cₖ − λwᵏ")));
        }
        let inv = crate::arith::inv_mod(aw, p);
        let actx = model.yfree_ctx();
        let w = Poly::var(&actx, ring, 0);
        let mut igens = Vec::new();
        for v in actx.vars().iter().skip(1) {
            let k: u32 = v.name[1..].parse().map_err(|_| Error::Inconsistent(format!("unexpected variable {}", v.name)))?;
            let lam = (mod_u32(&res.gamma(k as usize), p) as u64 * crate::arith::pow_u64(inv as u64, k) % p as u64) as u64;
            let c = Poly::var_named(&actx, ring, &v.name)?;
            igens.push(&c - &w.pow(k).scale(&BigInt::from(lam)));
        }
        Ok(PhiTest {
            model: model.clone(),
            p,
            actx,
            igens,
            kernel: kernel_generators(model, ring),
            jcache: Mutex::new(HashMap::new()),
        })
    }

    /// Basis of (ker f ∩ A′) in degree d, by eliminating the x's.
    fn j_basis(&self, d: u32) -> Result<Vec<Poly>> {
        if let Some(v) = self.jcache.lock().unwrap().get(&d) {
            return Ok(v.clone());
        }
        let ring = fp(self.p)?;
        let ctx = &self.model.ctx;
        let degs = ctx.degrees();
        let ext = vec![false; degs.len()];
        let ys = self.model.y_indices();
        let mut cols = monomials_of_degree(&degs, &ext, d);
        // x-monomials first, so that echelon rows led by an x-free column are x-free
        cols.sort_by_key(|m| !ys.iter().any(|&i| m[i] > 0));
        let nfree_start = cols.iter().position(|m| !ys.iter().any(|&i| m[i] > 0)).unwrap_or(cols.len());
        let index: HashMap<Mono, u32> = cols.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut jobs = Vec::new();
        for r in &self.kernel {
            let Some(rd) = r.degree()? else { continue };
            if rd > d {
                continue;
            }
            for m in monomials_of_degree(&degs, &ext, d - rd) {
                jobs.push(r.shift(&m));
            }
        }
        let p = self.p;
        let rows: Vec<SparseRow> = par_map(&jobs, |g| {
            let mut row: SparseRow = g.terms().iter().map(|(m, c)| (index[m], mod_u32(c, p))).filter(|x| x.1 != 0).collect();
            row.sort_unstable();
            row
        });
        let mut e = FpEchelon::new(p, cols.len(), false);
        let mut scratch = vec![0u32; cols.len()];
        for r in &rows {
            e.insert_with(r, &mut scratch);
        }
        let out: Vec<Poly> = e
            .rows()
            .iter()
            .filter(|r| r.first().is_some_and(|&(c, _)| c as usize >= nfree_start))
            .map(|r| {
                let g = Poly::from_terms(ctx, ring, r.iter().map(|&(c, x)| (cols[c as usize].clone(), BigInt::from(x))));
                g.project(&self.actx)
            })
            .collect::<Result<_>>()?;
        self.jcache.lock().unwrap().insert(d, out.clone());
        Ok(out)
    }

    /// Whether `f` (x-free, homogeneous, in the model context) lies in the
    /// product ideal.
    pub fn is_trivial(&self, f: &Poly) -> Result<bool> {
        let ring = fp(self.p)?;
        let f = convert_ring(&f.project(&self.actx)?, ring);
        let Some(d) = f.degree()? else { return Ok(true) };
        let degs = self.actx.degrees();
        let ext = vec![false; degs.len()];
        let cols = monomials_of_degree(&degs, &ext, d);
        let index: HashMap<Mono, u32> = cols.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut e = FpEchelon::new(self.p, cols.len(), false);
        let mut scratch = vec![0u32; cols.len()];
        let to_row = |g: &Poly| -> SparseRow {
            let mut row: SparseRow =
                g.terms().iter().map(|(m, c)| (index[m], mod_u32(c, self.p))).filter(|x| x.1 != 0).collect();
            row.sort_unstable();
            row
        };
        for ig in &self.igens {
            let a = ig.degree()?.unwrap();
            if a > d {
                continue;
            }
            for j in self.j_basis(d - a)? {
                let prod = ig.checked_mul(&j)?;
                e.insert_with(&to_row(&prod), &mut scratch);
            }
        }
        Ok(e.reduce(&to_row(&f)).remainder.is_empty())
    }
}

// ---------------------------------------------------------------- Steenrod

/// Sq^{2k} c_m by the Wu formula, in the Chern model over 𝔽₂.
pub fn wu_formula(model: &ChernModel, k: u32, m: u32) -> Result<Poly> {
    let f2 = fp(2)?;
    let mut out = Poly::zero(&model.ctx, f2);
    if k > m {
        return Ok(out);
    }
    for j in 0..=k {
        let coef = binomial_signed(m as i64 - k as i64 + j as i64 - 1, j as u64);
        if coef.is_even() {
            continue;
        }
        let a = model.chern((k - j) as usize, f2);
        let b = model.chern((m + j) as usize, f2);
        out = &out + &a.checked_mul(&b)?;
    }
    Ok(out)
}

/// Total Sq images of the x-free model variables.
fn total_sq_images(model: &ChernModel) -> Result<Vec<Poly>> {
    let f2 = fp(2)?;
    let mut out = Vec::new();
    for (i, v) in model.ctx.vars().iter().enumerate() {
        let x = Poly::var(&model.ctx, f2, i);
        if i == 0 {
            out.push(&x + &x.pow(2));
        } else if let Some(m) = v.name.strip_prefix('c').and_then(|s| s.parse::<u32>().ok()) {
            let mut t = Poly::zero(&model.ctx, f2);
            for k in 0..=m {
                t = &t + &wu_formula(model, k, m)?;
            }
            out.push(t);
        } else {
            // Sq on the x's is never needed; keep them inert and reject their use
            out.push(x);
        }
    }
    Ok(out)
}

/// Sq^k of an x-free polynomial of the Chern model (k a cohomological degree).
pub fn sq(model: &ChernModel, f: &Poly, k: u32) -> Result<Poly> {
    if model.y_indices().iter().any(|&i| f.uses_var(i)) {
        return Err(Error::Unsupported("Sq is applied to x-free polynomials only".into()));
    }
    let f = f.reduce_mod(2);
    let Some(d) = f.degree()? else { return Ok(f) };
    if k % 2 == 1 {
        return Ok(Poly::zero(&model.ctx, f.ring()));
    }
    let images = total_sq_images(model)?;
    Ok(f.substitute(&images)?.component(d + k))
}

/// Outcome of [`steenrod_sq`]: the labels of the generators summing to the
/// result (empty for 0) and the raw Wu image.
#[derive(Clone, Debug)]
pub struct SteenrodResult {
    pub labels: Vec<String>,
    pub image: Poly,
}

impl SteenrodResult {
    pub fn display(&self) -> String {
        if self.labels.is_empty() {
            "0".into()
        } else {
            self.labels.join(" + ")
        }
    }
}

/// Sq^k on the class of `form`, identified among the forms of S₂(PG).
pub fn steenrod_sq(spec: &GroupSpec, form: &OneForm, k: u32) -> Result<SteenrodResult> {
    torsion_pair(spec, 2)?;
    let adj = spec.with_lattice(Lattice::Adjoint);
    let model = chern_model(&adj);
    let res = restriction_map(&adj)?;
    let set = char_polys(&adj, PolyRing::ModP(2))?;
    let phi = PhiTest::new(&model, &res, 2)?;
    steenrod_with(&model, &phi, &set, form, k)
}

pub fn steenrod_with(
    model: &ChernModel,
    phi: &PhiTest,
    set: &CharPolySet,
    form: &OneForm,
    k: u32,
) -> Result<SteenrodResult> {
    let image = sq(model, &form.characteristic_polynomial, k)?;
    let Some(d) = image.degree()? else { return Ok(SteenrodResult { labels: Vec::new(), image }) };
    let cands: Vec<&OneForm> =
        set.entries.iter().filter(|e| e.characteristic_polynomial.degree().ok().flatten() == Some(d)).collect();
    for mask in 0u32..(1 << cands.len()) {
        let mut t = image.clone();
        let mut labels = Vec::new();
        for (i, c) in cands.iter().enumerate() {
            if mask >> i & 1 == 1 {
                t = &t - &c.characteristic_polynomial.reduce_mod(2);
                labels.push(c.label.clone());
            }
        }
        if phi.is_trivial(&t)? {
            return Ok(SteenrodResult { labels, image });
        }
    }
    Err(Error::NotExpressible(format!("Sq^{k}({}) = {image}", form.label)))
}

// ---------------------------------------------------------------- Bockstein

/// βₚ of the class with integral characteristic polynomial `form`, as a
/// normal form in E₃^{*,0}(PG) over ℤ.
///
/// With H the polynomial and K ∈ ⟨R⟩ an integral lift of a mod-p ideal
/// certificate for H, the value is ((H − K)/p)|_{τ=0} − H|_{τ=0}/p.
pub fn bockstein(spec: &GroupSpec, p: u32, form: &OneForm) -> Result<Poly> {
    torsion_pair(spec, p)?;
    let adj = spec.with_lattice(Lattice::Adjoint);
    let model = chern_model(&adj);
    let res = restriction_map(&adj)?;
    let e3 = e3_base_presentation(&adj, CoeffRing::Integers)?.quotient()?;
    bockstein_with(&model, &res, &e3, p, form)
}

pub fn bockstein_with(model: &ChernModel, res: &Restriction, e3: &QuotientRing, p: u32, form: &OneForm) -> Result<Poly> {
    let z = CoeffRing::Integers;
    let h = convert_ring(&form.characteristic_polynomial, z);
    let ring = fp(p)?;
    let kz = kernel_generators(model, z);
    let kp: Vec<Poly> = kz.iter().map(|g| g.reduce_mod(p)).collect();
    let cert = fp_ideal_certificate(&kp, &h.reduce_mod(p))?
        .ok_or_else(|| Error::NotInIdeal(format!("{} is not in ker f_{p}", form.label)))?;
    let mut k = Poly::zero(&model.ctx, z);
    for (c, g) in cert.iter().zip(&kz) {
        if !c.is_zero() {
            k = &k + &c.lift_symmetric().checked_mul(g)?;
        }
    }
    let _ = ring;
    let pb = BigInt::from(p);
    let quotient = (&h - &k).div_exact(&pb)?;
    let tctx = res.target_ctx();
    let a = res.restrict_model(model, &quotient, &tctx)?;
    let hr = reduce_varpi_torsion(&res.restrict_model(model, &h, &tctx)?, res.q);
    let hr = hr
        .div_exact(&pb)
        .map_err(|_| Error::NoLift(format!("the restriction of {} is not divisible by {p}", form.label)))?;
    let beta = reduce_varpi_torsion(&(&a - &hr), res.q);
    e3.normal_form(&beta.project(e3.ctx())?)
}

/// βₚ(ι) = (q/p)·ϖ: ι reduces the generator of H¹(PG; ℤ/q).
pub fn bockstein_iota(res: &Restriction, p: u32, ctx: &Context) -> Result<Poly> {
    let c = BigInt::from(res.q / p);
    Ok(Poly::var(ctx, CoeffRing::Integers, 0).scale(&c))
}

/// Order of a class in a ℤ-quotient (0 = infinite).
pub fn class_order(q: &QuotientRing, f: &Poly) -> Result<BigInt> {
    let Some(d) = f.degree()? else { return Ok(BigInt::one()) };
    let basis = q.additive_basis(d)?;
    let y = q.coordinates(f)?;
    let mut ord = BigInt::one();
    for ((_, o), yi) in basis.iter().zip(&y) {
        if yi.is_zero() {
            continue;
        }
        if o.is_zero() {
            return Ok(BigInt::zero());
        }
        let part = o / o.gcd(yi);
        ord = ord.lcm(&part);
    }
    Ok(ord)
}

// ---------------------------------------------------------------- rings

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    /// Square forced to 0.
    Exterior,
    /// Square recorded.
    Delta,
}

#[derive(Clone, Debug)]
pub struct OddGenerator {
    pub name: String,
    pub degree: u32,
    pub flavor: Flavor,
    /// In the context of the polynomial part; None for Λ.
    pub square: Option<Poly>,
}

/// A cohomology ring: polynomial part ⊗ odd generators, plus torsion
/// components and action relations for integral answers.
#[derive(Clone, Debug)]
pub struct CohomologyRing {
    pub label: String,
    pub coefficients: CoeffRing,
    pub polynomial_part: RingPresentation,
    pub odd_generators: Vec<OddGenerator>,
    pub torsion_ideals: BTreeMap<u32, RingPresentation>,
    pub action_relations: Vec<String>,
    pub notes: Vec<String>,
}

impl CohomologyRing {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label,
            "coefficients": self.coefficients.label(),
            "generators": self.polynomial_part.generators.iter().map(|(n, d)| json!({"name": n, "degree": d, "kind": "polynomial"}))
                .chain(self.odd_generators.iter().map(|g| json!({
                    "name": g.name,
                    "degree": g.degree,
                    "kind": match g.flavor { Flavor::Exterior => "exterior", Flavor::Delta => "delta" },
                    "square": g.square.as_ref().map(|s| s.to_json()),
                })))
                .collect::<Vec<_>>(),
            "relations": self.polynomial_part.to_json()["relations"].clone(),
            "torsion_ideals": self.torsion_ideals.iter().map(|(p, r)| (p.to_string(), r.to_json())).collect::<serde_json::Map<_, _>>(),
            "action_relations": self.action_relations,
            "notes": self.notes,
        })
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n  polynomial part: {}\n", self.label, self.polynomial_part.to_text().replace('\n', "\n    "));
        for g in &self.odd_generators {
            let kind = match g.flavor {
                Flavor::Exterior => "Λ".to_string(),
                Flavor::Delta => format!("Δ, square {}", g.square.as_ref().map(|x| x.to_string()).unwrap_or_else(|| "0".into())),
            };
            s.push_str(&format!("  {} (deg {}): {kind}\n", g.name, g.degree));
        }
        for (p, r) in &self.torsion_ideals {
            s.push_str(&format!("  σ{p}: {}\n", r.metadata.get("shape").cloned().unwrap_or_else(|| r.to_text())));
        }
        for a in &self.action_relations {
            s.push_str(&format!("  relation: {a}\n"));
        }
        for n in &self.notes {
            s.push_str(&format!("  note: {n}\n"));
        }
        s
    }

    pub fn to_latex(&self) -> String {
        let mut s = self.polynomial_part.to_latex();
        let ext: Vec<String> = self
            .odd_generators
            .iter()
            .filter(|g| g.flavor == Flavor::Exterior)
            .map(|g| crate::poly::latex_name(&g.name).trim_end().to_string())
            .collect();
        let del: Vec<String> = self
            .odd_generators
            .iter()
            .filter(|g| g.flavor == Flavor::Delta)
            .map(|g| crate::poly::latex_name(&g.name).trim_end().to_string())
            .collect();
        if !del.is_empty() {
            s.push_str(&format!(" \\otimes \\Delta({})", del.join(", ")));
        }
        if !ext.is_empty() {
            s.push_str(&format!(" \\otimes \\Lambda({})", ext.join(", ")));
        }
        s
    }

    /// Poincaré series: polynomial-part dimensions (factor counts over ℤ)
    /// times ∏(1 + t^{deg}) over the odd generators.
    pub fn poincare(&self, max_degree: u32) -> Result<Vec<usize>> {
        let q = self.polynomial_part.quotient()?;
        let g = q.groups(max_degree)?;
        let mut series: Vec<usize> = (0..=max_degree).map(|d| g.piece(d).free + g.piece(d).torsion.len()).collect();
        for o in &self.odd_generators {
            let d = o.degree as usize;
            for i in (d..series.len()).rev() {
                series[i] += series[i - d];
            }
        }
        Ok(series)
    }
}

/// Exterior-algebra Poincaré series on the given odd degrees.
pub fn exterior_series(degrees: &[u32], max_degree: u32) -> Vec<usize> {
    let mut s = vec![0usize; max_degree as usize + 1];
    s[0] = 1;
    for &d in degrees {
        let d = d as usize;
        for i in (d..s.len()).rev() {
            s[i] += s[i - d];
        }
    }
    s
}

/// H*(PG; 𝔽ₚ) assembled from E₃^{*,0}(PG;𝔽ₚ), ι and the ζ's of S_p(PG).
pub fn mod_p_ring(spec: &GroupSpec, p: u32) -> Result<CohomologyRing> {
    torsion_pair(spec, p)?;
    let adj = spec.with_lattice(Lattice::Adjoint);
    let ring = fp(p)?;
    let poly = e3_base_presentation(&adj, ring)?;
    let pctx = poly.ctx();
    let e3 = poly.quotient()?;
    let tb = theta_bar_table(spec, p)?;
    let res = restriction_map(&adj)?;
    let model = chern_model(&adj);
    let ds: Vec<u32> = tb.values.iter().map(|(s, _)| *s).filter(|&s| s != tb.h).collect();
    let mut notes = vec![format!("h = {}; θ̄(ξ_{}) = {}", tb.h, 2 * tb.h - 1, tb.values.iter().find(|(s, _)| *s == tb.h).unwrap().1)];
    let mut odd = Vec::new();
    // ι² = δ₂ι = r₂((q/2)·ϖ)
    let iota_sq = if p == 2 && (res.q / 2) % 2 == 1 { Some(Poly::var(&pctx, ring, 0)) } else { None };
    odd.push(OddGenerator {
        name: "ι".into(),
        degree: 1,
        flavor: if iota_sq.is_some() { Flavor::Delta } else { Flavor::Exterior },
        square: iota_sq,
    });
    let squares = if p == 2 { zeta_squares(spec, &model, &res, &e3, &ds)? } else { vec![None; ds.len()] };
    for (&s, sq) in ds.iter().zip(squares) {
        odd.push(OddGenerator {
            name: zeta_label(s),
            degree: 2 * s - 1,
            flavor: if sq.is_some() { Flavor::Delta } else { Flavor::Exterior },
            square: sq,
        });
    }
    notes.push(format!("ζ_{} excluded", 2 * tb.h - 1));
    let (poly, images) = poly.simplified()?;
    let small = poly.quotient()?;
    for g in odd.iter_mut() {
        if let Some(sq) = g.square.take() {
            let v = small.normal_form(&sq.substitute(&images)?)?;
            g.square = (!v.is_zero()).then_some(v);
        }
    }
    Ok(CohomologyRing {
        label: format!("H*({adj};F{p})"),
        coefficients: ring,
        polynomial_part: poly,
        odd_generators: odd,
        torsion_ideals: BTreeMap::new(),
        action_relations: Vec::new(),
        notes,
    })
}

/// ζ² = Sq¹Sq^{2s−2}ζ = δ₂(Sq^{2s−2}ζ) for ζ = ζ_{2s−1}; zero outright when
/// the polynomial part vanishes in degree 4s − 2.
fn zeta_squares(
    spec: &GroupSpec,
    model: &ChernModel,
    res: &Restriction,
    e3: &QuotientRing,
    ds: &[u32],
) -> Result<Vec<Option<Poly>>> {
    let adj = spec.with_lattice(Lattice::Adjoint);
    let mut out = Vec::new();
    let mut set: Option<CharPolySet> = None;
    let mut phi: Option<PhiTest> = None;
    let lifts = integral_lifts(&adj, 2)?;
    let e3z = e3_base_presentation(&adj, CoeffRing::Integers)?.quotient()?;
    for &s in ds {
        if e3.dimension(4 * s - 2)? == 0 {
            out.push(None);
            continue;
        }
        if set.is_none() {
            set = Some(char_polys(&adj, PolyRing::ModP(2))?);
            phi = Some(PhiTest::new(model, res, 2)?);
        }
        let set_ref = set.as_ref().unwrap();
        let form = set_ref.entries.iter().find(|e| e.label == zeta_label(s)).unwrap();
        let r = steenrod_with(model, phi.as_ref().unwrap(), set_ref, form, 2 * s - 2)?;
        let mut value = Poly::zero(e3.ctx(), e3.ring());
        for l in &r.labels {
            let src = lifts.iter().find(|f| &f.label == l).unwrap();
            let b = bockstein_with(model, res, &e3z, 2, src)?;
            value = &value + &convert_ring(&b, e3.ring()).project(e3.ctx())?;
        }
        let value = e3.normal_form(&value)?;
        out.push(if value.is_zero() { None } else { Some(value) });
    }
    Ok(out)
}

/// Converts a θ-expression to a polynomial over ω and the ρ's.
pub fn theta_to_poly(e: &ThetaExpression, ctx: &Context, ring: CoeffRing) -> Result<Poly> {
    let mut out = Poly::zero(ctx, ring);
    for ((o, rhos), c) in &e.terms {
        let mut m = vec![0u16; ctx.len()];
        m[0] = *o as u16;
        for r in rhos {
            let i = ctx.index(&format!("ρ{r}")).ok_or_else(|| Error::Inconsistent(format!("ρ{r} outside the context")))?;
            m[i] = 1;
        }
        out.add_term(m, c.clone());
    }
    Ok(out)
}

/// H*(PSU(n)) and H*(PSp(n)): free exterior part and the σₚ components.
pub fn integral_ring(spec: &GroupSpec) -> Result<CohomologyRing> {
    let adj = spec.with_lattice(Lattice::Adjoint);
    let n = adj.n;
    let z = CoeffRing::Integers;
    let set = integral_set(&adj)?;
    let free: Vec<u32> = set.degree_set.iter().map(|s| 2 * s - 1).collect();
    let odd: Vec<OddGenerator> = free
        .iter()
        .map(|&d| OddGenerator { name: format!("ρ{d}"), degree: d, flavor: Flavor::Exterior, square: None })
        .collect();
    let poly = e3_base_presentation(&adj, z)?;
    let mut torsion = BTreeMap::new();
    let mut notes = Vec::new();
    match adj.family {
        Family::SU => {
            let orders: Vec<String> = (2..=n as u64)
                .map(|s| a_ratio(n as u64, s).map(|a| format!("a{s}={a}")))
                .collect::<Result<_>>()?;
            notes.push(format!("orders {}", orders.join(", ")));
            for p in adj.torsion_primes() {
                let (r, _) = split_prime_power(n as u64, p as u64);
                let pr = crate::arith::pow_u64(p as u64, r);
                let gens: Vec<(String, u32)> =
                    std::iter::once(("ω".to_string(), 2)).chain(free.iter().map(|&d| (format!("ρ{d}"), d))).collect();
                let mut pres = RingPresentation::new(z, gens);
                let ctx = pres.ctx();
                let w = Poly::var(&ctx, z, 0);
                for set in admissible_sets(p as u64, r) {
                    let theta = theta_gamma(pr, &set)?;
                    let rel = super_mul(&w, &theta_to_poly(&theta, &ctx, z)?);
                    let want: u32 = set.iter().map(|&s| 2 * s as u32 - 1).sum::<u32>() + 1;
                    match rel.degree() {
                        Ok(Some(d)) if d == want => {}
                        Ok(None) => continue,
                        _ => return Err(Error::Inhomogeneous(format!("ω·θ(γ_{set:?}) = {rel}"))),
                    }
                    let label = format!("ω·θ(γ_{{{}}})", set.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(","));
                    pres.push(label, rel);
                }
                pres.metadata.insert("shape".into(), format!("Z[ω]^+ ⊗ Λ(ρ3..ρ{}) / <ω·θ(γ_I)>, p = {p}", 2 * n - 1));
                torsion.insert(p, pres);
            }
        }
        Family::Sp => {
            let tb = theta_bar_table(&adj, 2)?;
            let f2 = fp(2)?;
            let gens: Vec<(String, u32)> =
                std::iter::once(("ω".to_string(), 2)).chain(free.iter().map(|&d| (format!("ρ{d}"), d))).collect();
            let mut pres = RingPresentation::new(f2, gens);
            let ctx = pres.ctx();
            let w = Poly::var(&ctx, f2, 0);
            pres.push(format!("ω^{}", tb.h), w.pow(tb.h));
            let k = 2 * tb.h - 1;
            let rho = Poly::var_named(&ctx, f2, &format!("ρ{k}"))?;
            pres.push(format!("ω·ρ{k}"), w.checked_mul(&rho)?);
            for &d in &free {
                let r = Poly::var_named(&ctx, f2, &format!("ρ{d}"))?;
                pres.push(format!("ρ{d}^2"), r.pow(2));
            }
            pres.metadata.insert("shape".into(), format!("F2[ω]^+ ⊗ Λ(ρ3..ρ{}) / <ω^{}, ω·ρ{k}>", 4 * n - 1, tb.h));
            torsion.insert(2, pres);
        }
        _ => return Err(Error::Unsupported("integral_ring covers PSU(n) and PSp(n); use adjoint_exceptional_ring".into())),
    }
    Ok(CohomologyRing {
        label: format!("H*({adj})"),
        coefficients: z,
        polynomial_part: poly,
        odd_generators: odd,
        torsion_ideals: torsion,
        action_relations: Vec::new(),
        notes,
    })
}

/// Orders a_s of θ̄(γ_{2s−1}) in E₃^{*,0}(PG), for the integral set S(G).
pub fn theta_orders(spec: &GroupSpec) -> Result<Vec<(u32, BigInt, Poly)>> {
    let adj = spec.with_lattice(Lattice::Adjoint);
    let model = chern_model(&adj);
    let res = restriction_map(&adj)?;
    let e3 = e3_base_presentation(&adj, CoeffRing::Integers)?.quotient()?;
    let set = integral_set(&adj)?;
    let mut out = Vec::new();
    for (e, &s) in set.entries.iter().zip(&set.degree_set) {
        let d = derivative_in_model(&model, &res, &e.characteristic_polynomial)?;
        let d = reduce_varpi_torsion(&d, res.q);
        let nf = e3.normal_form(&d.project(e3.ctx())?)?;
        out.push((s, class_order(&e3, &nf)?, nf));
    }
    Ok(out)
}

/// H*(PE₆), H*(PE₇): the curated presentation, with the free degrees and
/// the orders a_s recomputed.
pub fn adjoint_exceptional_ring(spec: &GroupSpec) -> Result<CohomologyRing> {
    let adj = spec.with_lattice(Lattice::Adjoint);
    let data = tables::exceptional_data(adj.family)?;
    let z = CoeffRing::Integers;
    let poly = e3_base_presentation(&adj, z)?;
    let pctx = poly.ctx();
    let set = integral_set(&adj)?;
    let derived: Vec<u32> = set.degree_set.iter().map(|s| 2 * s - 1).collect();
    let stored: Vec<u32> = data.free.iter().map(|o| o.degree).collect();
    if derived != stored {
        return Err(Error::Inconsistent(format!("free degrees {stored:?} differ from 2·D(G) − 1 = {derived:?}")));
    }
    let mut notes = Vec::new();
    let orders = theta_orders(&adj)?;
    let nontrivial: Vec<(u32, u32)> = orders
        .iter()
        .filter(|(_, o, _)| !o.is_one())
        .map(|(s, o, _)| (*s, o.to_u32().unwrap_or(0)))
        .collect();
    if nontrivial != data.orders {
        return Err(Error::Inconsistent(format!("orders {nontrivial:?} differ from the stored {:?}", data.orders)));
    }
    notes.push(format!(
        "orders a_s recomputed: {}",
        nontrivial.iter().map(|(s, a)| format!("a{s} = {a}")).collect::<Vec<_>>().join(", ")
    ));
    let odd = data
        .free
        .iter()
        .map(|o| {
            let sq = match &o.square {
                Some(t) => Some(Poly::parse(&pctx, z, t)?),
                None => None,
            };
            Ok(OddGenerator {
                name: o.name.clone(),
                degree: o.degree,
                flavor: if sq.is_some() { Flavor::Delta } else { Flavor::Exterior },
                square: sq,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut torsion = BTreeMap::new();
    for (p, shape) in &data.torsion {
        let mut pres = torsion_presentation(adj.family, *p)?;
        pres.metadata.insert("shape".into(), shape.clone());
        torsion.insert(*p, pres);
    }
    Ok(CohomologyRing {
        label: format!("H*({adj})"),
        coefficients: z,
        polynomial_part: poly,
        odd_generators: odd,
        torsion_ideals: torsion,
        action_relations: data.action_relations.clone(),
        notes,
    })
}

fn squares_zero(pres: &mut RingPresentation, names: &[&str]) -> Result<()> {
    let ctx = pres.ctx();
    for n in names {
        let v = Poly::var_named(&ctx, pres.ring, n)?;
        pres.push(format!("{n}^2"), v.pow(2));
    }
    Ok(())
}

/// σₚ of PE₆/PE₇ as an 𝔽ₚ-algebra presentation (the augmentation part of
/// its polynomial factor is meant; see the `shape` metadata).
pub fn torsion_presentation(family: Family, p: u32) -> Result<RingPresentation> {
    let ring = fp(p)?;
    let g = |n: &str, d: u32| (n.to_string(), d);
    match (family, p) {
        (Family::E6, 3) => {
            let gens = vec![
                g("ω", 2),
                g("x4", 8),
                g("C14", 9),
                g("ρ3", 3),
                g("ρ9", 9),
                g("ρ11", 11),
                g("ρ15", 15),
                g("ρ17", 17),
            ];
            let mut pres = RingPresentation::new(ring, gens);
            let ctx = pres.ctx();
            for t in ["ω^9", "x4^3", "ω ρ17", "ω^8 x4^2 C14"] {
                pres.push(t, Poly::parse(&ctx, ring, t)?);
            }
            Ok(pres)
        }
        (Family::E6, 2) => {
            let gens = vec![g("x3", 6), g("ρ3", 3), g("ρ9", 9), g("ρ15", 15), g("ρ17", 17), g("ρ23", 23)];
            let mut pres = RingPresentation::new(ring, gens);
            let ctx = pres.ctx();
            pres.push("x3^2", Poly::parse(&ctx, ring, "x3^2")?);
            pres.push("ρ3^2 - x3", Poly::parse(&ctx, ring, "ρ3^2 - x3")?);
            squares_zero(&mut pres, &["ρ9", "ρ15", "ρ17", "ρ23"])?;
            Ok(pres)
        }
        (Family::E7, 3) => {
            let gens = vec![g("x4", 8), g("ρ3", 3), g("ρ11", 11), g("ρ15", 15), g("ρ19", 19), g("ρ27", 27), g("ρ35", 35)];
            let mut pres = RingPresentation::new(ring, gens);
            let ctx = pres.ctx();
            pres.push("x4^3", Poly::parse(&ctx, ring, "x4^3")?);
            Ok(pres)
        }
        (Family::E7, 2) => {
            let (mut pres, _) = image_presentation(Family::E7)?;
            let mut gens = pres.generators.clone();
            gens.extend([g("ρ15", 15), g("ρ23", 23), g("ρ27", 27)]);
            let ctx = Context::new(gens.clone())?;
            let mut full = RingPresentation::new(ring, gens);
            for (l, r) in pres.labels.drain(..).zip(pres.relations.drain(..)) {
                full.push(l, r.embed(&ctx)?);
            }
            squares_zero(&mut full, &["ρ15", "ρ23", "ρ27"])?;
            Ok(full)
        }
        _ => Err(Error::Unsupported(format!("no torsion presentation for ({family:?}, {p})"))),
    }
}

// ---------------------------------------------------------------- Bockstein complexes

/// A finite-dimensional graded 𝔽ₚ-algebra with a degree +1 derivation δ.
#[derive(Debug)]
pub struct BocksteinComplex {
    pub family: Family,
    pub p: u32,
    pub ctx: Context,
    pub algebra: QuotientRing,
    pub relations: Vec<Poly>,
    /// δ of each variable of `ctx`.
    pub delta: Vec<Poly>,
    pub top_degree: u32,
    pub expected_total: usize,
}

fn odd_square_relations(ctx: &Context, ring: CoeffRing, odd: &[StoredOdd]) -> Result<Vec<Poly>> {
    let mut out = Vec::new();
    if ring.characteristic() != 2 {
        return Ok(out);
    }
    for o in odd {
        let v = Poly::var_named(ctx, ring, &o.name)?;
        let sq = match &o.square {
            Some(t) => Poly::parse(ctx, ring, t)?,
            None => Poly::zero(ctx, ring),
        };
        out.push(&v.pow(2) - &sq);
    }
    Ok(out)
}

pub fn bockstein_complex(family: Family) -> Result<BocksteinComplex> {
    let data = tables::complex_data(family)?;
    let ring = fp(data.p)?;
    let vars: Vec<(String, u32)> = data.even.iter().cloned().chain(data.odd.iter().map(|o| (o.name.clone(), o.degree))).collect();
    let ctx = Context::new(vars.clone())?;
    let mut relations: Vec<Poly> = data.even_relations.iter().map(|t| Poly::parse(&ctx, ring, t)).collect::<Result<_>>()?;
    relations.extend(odd_square_relations(&ctx, ring, &data.odd)?);
    let mut delta = vec![Poly::zero(&ctx, ring); ctx.len()];
    for (v, img) in &data.delta {
        let i = ctx.index(v).ok_or_else(|| Error::Inconsistent(format!("δ given on unknown {v}")))?;
        delta[i] = Poly::parse(&ctx, ring, img)?;
    }
    let algebra = QuotientRing::new(&ctx, ring, &relations)?;
    // top degree: each even generator to its truncation, each odd once
    let mut top = 0;
    for (name, d) in &data.even {
        let cap = data
            .even_relations
            .iter()
            .find_map(|t| t.strip_prefix(&format!("{name}^")).and_then(|e| e.parse::<u32>().ok()))
            .ok_or_else(|| Error::Inconsistent(format!("{name} is not truncated")))?;
        top += d * (cap - 1);
    }
    top += data.odd.iter().map(|o| o.degree).sum::<u32>();
    Ok(BocksteinComplex { family, p: data.p, ctx, algebra, relations, delta, top_degree: top, expected_total: data.expected_total })
}

impl BocksteinComplex {
    /// δ of a polynomial (Leibniz rule with Koszul signs), reduced.
    pub fn apply(&self, f: &Poly) -> Result<Poly> {
        let raw = self.apply_raw(f)?;
        self.algebra.normal_form_inhomogeneous(&raw)
    }

    fn apply_raw(&self, f: &Poly) -> Result<Poly> {
        let ring = f.ring();
        let degs = self.ctx.degrees();
        let mut out = Poly::zero(&self.ctx, ring);
        for (m, c) in f.terms() {
            let mut prefix_deg = 0u32;
            for i in 0..m.len() {
                if m[i] > 0 && !self.delta[i].is_zero() {
                    let mut pre = vec![0u16; m.len()];
                    pre[..i].copy_from_slice(&m[..i]);
                    let mut post = vec![0u16; m.len()];
                    post[i..].copy_from_slice(&m[i..]);
                    post[i] -= 1;
                    let a = Poly::monomial(&self.ctx, ring, pre, 1);
                    let b = Poly::monomial(&self.ctx, ring, post, 1);
                    let mut t = super_mul(&super_mul(&a, &self.delta[i]), &b);
                    let mut coef = c * BigInt::from(m[i]);
                    if prefix_deg % 2 == 1 {
                        coef = -coef;
                    }
                    t = t.scale(&coef);
                    out = &out + &t;
                }
                prefix_deg += degs[i] * m[i] as u32;
            }
        }
        Ok(out)
    }

    /// δ maps every relation into the ideal.
    pub fn check_well_defined(&self) -> Result<()> {
        for r in &self.relations {
            if !self.apply(r)?.is_zero() {
                return Err(Error::Inconsistent(format!("δ({r}) is not in the relation ideal")));
            }
        }
        Ok(())
    }

    fn basis(&self, d: u32) -> Result<Vec<Poly>> {
        Ok(self
            .algebra
            .standard_monomials(d)?
            .into_iter()
            .map(|m| Poly::monomial(&self.ctx, self.algebra.ring(), m, 1))
            .collect())
    }

    /// δ∘δ = 0 on every basis monomial.
    pub fn check_square_zero(&self) -> Result<()> {
        let degs: Vec<u32> = (0..=self.top_degree).collect();
        let bad: Vec<String> = par_map(&degs, |&d| -> Result<Vec<String>> {
            let mut v = Vec::new();
            for b in self.basis(d)? {
                let dd = self.apply(&self.apply(&b)?)?;
                if !dd.is_zero() {
                    v.push(format!("δδ({b}) = {dd}"));
                }
            }
            Ok(v)
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?
        .concat();
        if let Some(b) = bad.first() {
            return Err(Error::Inconsistent(format!("δ² ≠ 0: {b}")));
        }
        Ok(())
    }

    /// Rank of δ: degree d → d + 1.
    fn rank_from(&self, d: u32) -> Result<usize> {
        let basis = self.basis(d)?;
        let target = self.algebra.standard_monomials(d + 1)?;
        let index: HashMap<Mono, u32> = target.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut e = FpEchelon::new(self.p, target.len(), false);
        for b in basis {
            let img = self.apply(&b)?;
            let mut row: SparseRow = img
                .terms()
                .iter()
                .map(|(m, c)| (index[m], mod_u32(c, self.p)))
                .filter(|x| x.1 != 0)
                .collect();
            row.sort_unstable();
            e.insert(&row);
        }
        Ok(e.rank())
    }
}

/// Output of [`bockstein_cohomology`].
#[derive(Clone, Debug)]
pub struct BocksteinCohomology {
    pub algebra_dims: Vec<usize>,
    pub homology_dims: Vec<usize>,
    pub image_dims: Vec<usize>,
    /// The closed-form presentation of Im δ and its per-degree dimensions.
    pub image_presentation: RingPresentation,
    pub presentation_dims: Vec<usize>,
}

impl BocksteinCohomology {
    pub fn total(&self) -> usize {
        self.homology_dims.iter().sum()
    }
}

/// Kernel/image of δ degreewise, and the stored Im δ presentation's
/// dimensions for comparison.
pub fn bockstein_cohomology(c: &BocksteinComplex, max_degree: u32) -> Result<BocksteinCohomology> {
    c.check_well_defined()?;
    let top = max_degree.min(c.top_degree + 1);
    let degs: Vec<u32> = (0..=top).collect();
    c.algebra.prepare(&degs)?;
    let dims: Vec<usize> = degs.iter().map(|&d| c.algebra.dimension(d)).collect::<Result<_>>()?;
    let ranks: Vec<usize> = par_map(&degs, |&d| c.rank_from(d)).into_iter().collect::<Result<_>>()?;
    let mut homology = Vec::new();
    let mut image = Vec::new();
    for d in 0..=top as usize {
        let incoming = if d == 0 { 0 } else { ranks[d - 1] };
        homology.push(dims[d] - ranks[d] - incoming);
        image.push(incoming);
    }
    let (pres, extra) = image_presentation(c.family)?;
    let presentation_dims = presentation_series(&pres, &extra, top)?;
    Ok(BocksteinCohomology {
        algebra_dims: dims,
        homology_dims: homology,
        image_dims: image,
        image_presentation: pres,
        presentation_dims,
    })
}

/// Dimensions of (Q⁺) ⊗ Λ(extra) for a presentation Q.
pub fn presentation_series(pres: &RingPresentation, extra: &[u32], max_degree: u32) -> Result<Vec<usize>> {
    let q = pres.quotient()?;
    let degs: Vec<u32> = (1..=max_degree).collect();
    q.prepare(&degs)?;
    let mut s = vec![0usize; max_degree as usize + 1];
    for d in 1..=max_degree {
        s[d as usize] = q.dimension(d)?;
    }
    for &e in extra {
        let e = e as usize;
        for i in (e..s.len()).rev() {
            s[i] += s[i - e];
        }
    }
    Ok(s)
}

fn subset_name(set: &[u32]) -> String {
    format!("c_{}", set.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("_"))
}

/// The closed form of Im δₚ: a presentation of its polynomial factor (whose
/// augmentation part is meant) and the degrees of the exterior factor.
pub fn image_presentation(family: Family) -> Result<(RingPresentation, Vec<u32>)> {
    match family {
        Family::E6 => {
            let ring = fp(3)?;
            let mut pres = RingPresentation::new(ring, vec![("ω".into(), 2), ("x4".into(), 8), ("c14".into(), 9)]);
            let ctx = pres.ctx();
            for t in ["ω^9", "x4^3", "ω^8 x4^2 c14"] {
                pres.push(t, Poly::parse(&ctx, ring, t)?);
            }
            pres.metadata.insert("c14".into(), "δ(ς1ς7) = ως7 − ς1x4".into());
            Ok((pres, vec![3, 9, 11, 15]))
        }
        Family::E7 => {
            let ring = fp(2)?;
            let idx: [u32; 4] = [1, 3, 5, 9];
            let deg_of = |t: u32| 2 * t - 1;
            let mut subsets: Vec<Vec<u32>> = Vec::new();
            for mask in 0u32..16 {
                let s: Vec<u32> = (0..4).filter(|i| mask >> i & 1 == 1).map(|i| idx[i]).collect();
                if s.len() >= 2 {
                    subsets.push(s);
                }
            }
            subsets.sort_by_key(|s| (s.len(), s.clone()));
            let mut gens: Vec<(String, u32)> = vec![("ω".into(), 2), ("x3".into(), 6), ("x5".into(), 10), ("x9".into(), 18)];
            for s in &subsets {
                gens.push((subset_name(s), s.iter().map(|&t| deg_of(t)).sum::<u32>() + 1));
            }
            let mut pres = RingPresentation::new(ring, gens);
            let ctx = pres.ctx();
            let x = |t: u32| -> Poly {
                let name = if t == 1 { "ω".to_string() } else { format!("x{t}") };
                Poly::var_named(&ctx, ring, &name).unwrap()
            };
            let sq = |t: u32| -> Poly {
                match t {
                    1 => x(1),
                    3 => x(5),
                    5 => x(9),
                    _ => Poly::zero(&ctx, ring),
                }
            };
            let c = |s: &[u32]| -> Poly {
                match s.len() {
                    0 => Poly::zero(&ctx, ring),
                    1 => x(s[0]),
                    _ => Poly::var_named(&ctx, ring, &subset_name(s)).unwrap(),
                }
            };
            let minus = |s: &[u32], t: u32| -> Vec<u32> { s.iter().copied().filter(|&u| u != t).collect() };
            let symdiff = |a: &[u32], b: &[u32]| -> Vec<u32> {
                let mut v: Vec<u32> =
                    a.iter().filter(|u| !b.contains(u)).chain(b.iter().filter(|u| !a.contains(u))).copied().collect();
                v.sort_unstable();
                v
            };
            for t in ["ω^2", "x3^2", "x5^2", "x9^2"] {
                pres.push(t, Poly::parse(&ctx, ring, t)?);
            }
            for s in &subsets {
                let mut d = Poly::zero(&ctx, ring);
                for &t in s {
                    d = &d + &x(t).checked_mul(&c(&minus(s, t)))?;
                }
                if !d.is_zero() {
                    pres.push(format!("D{s:?}"), d);
                }
                let mut r = c(s);
                for &t in s {
                    r = r.checked_mul(&x(t))?;
                }
                pres.push(format!("R{s:?}"), r);
            }
            for (i, a) in subsets.iter().enumerate() {
                for b in &subsets[i..] {
                    let mut rel = c(a).checked_mul(&c(b))?;
                    for &t in a {
                        let at = minus(a, t);
                        let mut term = x(t);
                        for s in at.iter().filter(|s| b.contains(s)) {
                            term = term.checked_mul(&sq(*s))?;
                        }
                        rel = &rel + &term.checked_mul(&c(&symdiff(&at, b)))?;
                    }
                    if !rel.is_zero() {
                        pres.push(format!("S{a:?}{b:?}"), rel);
                    }
                }
            }
            Ok((pres, vec![15, 23, 27]))
        }
        _ => Err(Error::Unsupported("Im δ presentations exist for E6 and E7".into())),
    }
}

/// Poincaré series of a graded group: free rank plus number of cyclic
/// factors per degree.
pub fn poincare_series(g: &crate::graded::GradedAbelianGroup, max_degree: u32) -> Vec<usize> {
    (0..=max_degree).map(|d| g.factor_count(d)).collect()
}

/// The element r₃(ωρ₂₃) − x₄²·δ(ς₁ς₇) of the PE₆ complex, with r₃(ρ₂₃) = x₄²ς₇;
/// zero exactly when the stated reduction holds.
pub fn e6_rho23_check(c: &BocksteinComplex) -> Result<Poly> {
    let ring = c.algebra.ring();
    let lhs = Poly::parse(&c.ctx, ring, "ω x4^2 ς7")?;
    let c14 = c.apply(&Poly::parse(&c.ctx, ring, "ς1 ς7")?)?;
    let rhs = super_mul(&Poly::parse(&c.ctx, ring, "x4^2")?, &c14);
    c.algebra.normal_form_inhomogeneous(&(&lhs - &rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::omega_set;

    #[test]
    fn wu_examples() {
        let m = chern_model(&GroupSpec::e7());
        // Sq²c₂ = c₁c₂ + c₃ with c₁ = 3ω₂ ≡ ω₂
        let v = wu_formula(&m, 1, 2).unwrap();
        assert_eq!(v, Poly::parse(&m.ctx, fp(2).unwrap(), "ω2 c2 + c3").unwrap());
        // Sq^{2m} c_m = c_m²
        assert_eq!(wu_formula(&m, 3, 3).unwrap(), Poly::parse(&m.ctx, fp(2).unwrap(), "c3^2").unwrap());
    }

    #[test]
    fn wu_against_splitting() {
        // independent oracle: Sq(ωⱼ) = ωⱼ + ωⱼ² on H*(BT) and cₖ = eₖ(Ω)
        let spec = GroupSpec::su(4).unwrap();
        let m = chern_model(&spec);
        let f2 = fp(2).unwrap();
        let octx = m.omega_ctx();
        let images: Vec<Poly> = (0..octx.len()).map(|i| {
            let v = Poly::var(&octx, f2, i);
            &v + &v.pow(2)
        }).collect();
        let omega: Vec<Poly> = omega_set(&spec).iter().map(|f| f.embed(&octx).unwrap().reduce_mod(2)).collect();
        for mm in 2..=4u32 {
            let cm = crate::poly::elementary_symmetric(&omega, mm as usize).unwrap();
            let total = cm.substitute(&images).unwrap();
            for k in 0..=mm {
                let direct = total.component(2 * mm + 2 * k);
                let wu = m.to_omega(&wu_formula(&m, k, mm).unwrap()).unwrap().reduce_mod(2);
                assert_eq!(direct, wu, "Sq^{} c{}", 2 * k, mm);
            }
        }
    }

    #[test]
    fn mod_p_sets() {
        let s = char_polys(&GroupSpec::e6(), PolyRing::ModP(3)).unwrap();
        assert_eq!(s.degree_set, vec![2, 4, 5, 6, 8, 9]);
        assert_eq!(s.entries[0].characteristic_polynomial.to_string(), "ω2^2 + 2·c2");
        let s = char_polys(&GroupSpec::psu(4).unwrap(), PolyRing::ModP(2)).unwrap();
        assert_eq!(s.degree_set, vec![2, 3]);
    }

    #[test]
    fn integral_recipes_match() {
        let s = char_polys(&GroupSpec::e6(), PolyRing::Integral).unwrap();
        let shown: Vec<String> = s.recipes.iter().map(|r| r.to_string()).collect();
        assert_eq!(shown, vec!["R2", "R5", "2R6 - x3·R3", "R8", "R9", "3R12 - x4^2·R4"]);
        let s = char_polys(&GroupSpec::e7(), PolyRing::Integral).unwrap();
        assert_eq!(s.degree_set, vec![2, 6, 8, 10, 12, 14, 18]);
        assert_eq!(s.recipes[2].to_string(), "R8 - x4·R4");
    }

    #[test]
    fn bockstein_small() {
        let spec = GroupSpec::psu(4).unwrap();
        let lifts = integral_lifts(&spec, 2).unwrap();
        let b = bockstein(&spec, 2, &lifts[0]).unwrap();
        // −ω² with 2ω² = 0
        assert!(!b.is_zero());
        let e3 = e3_base_presentation(&spec, CoeffRing::Integers).unwrap().quotient().unwrap();
        let want = e3.normal_form(&Poly::parse(e3.ctx(), CoeffRing::Integers, "-ω1^2").unwrap()).unwrap();
        assert_eq!(b, want);
    }

    #[test]
    fn bockstein_e6() {
        let spec = GroupSpec::pe6();
        let lifts = integral_lifts(&spec, 3).unwrap();
        let e3 = e3_base_presentation(&spec, CoeffRing::Integers).unwrap().quotient().unwrap();
        let want = ["0", "-x4", "0", "0", "-x4^2"];
        for (f, w) in lifts.iter().zip(want) {
            let b = bockstein(&spec, 3, f).unwrap();
            let w = e3.normal_form(&Poly::parse(e3.ctx(), CoeffRing::Integers, w).unwrap()).unwrap();
            assert_eq!(b, w, "{}", f.label);
        }
    }

    #[test]
    fn mod_p_ring_examples() {
        let r = mod_p_ring(&GroupSpec::psp(2).unwrap(), 2).unwrap();
        assert_eq!(r.poincare(10).unwrap().iter().sum::<usize>(), 16);
        assert_eq!(r.odd_generators[0].flavor, Flavor::Delta);
        let r = mod_p_ring(&GroupSpec::psu(4).unwrap(), 2).unwrap();
        assert_eq!(r.poincare(15).unwrap().iter().sum::<usize>(), 32);
        let r = mod_p_ring(&GroupSpec::psu(6).unwrap(), 3).unwrap();
        let names: Vec<&str> = r.odd_generators.iter().map(|g| g.name.as_str()).collect();
        assert_eq!(names, vec!["ι", "ζ3", "ζ7", "ζ9", "ζ11"]);
        assert!(mod_p_ring(&GroupSpec::psu(6).unwrap(), 5).is_err());
    }

    #[test]
    fn steenrod_su8() {
        let spec = GroupSpec::psu(8).unwrap();
        let set = char_polys(&spec, PolyRing::ModP(2)).unwrap();
        let r = steenrod_sq(&spec, &set.entries[0], 2).unwrap();
        assert_eq!(r.labels, vec!["ζ5".to_string()]);
    }

    #[test]
    fn e6_complex() {
        let c = bockstein_complex(Family::E6).unwrap();
        c.check_square_zero().unwrap();
        let h = bockstein_cohomology(&c, 80).unwrap();
        assert_eq!(h.total(), 64);
        assert_eq!(h.image_dims, h.presentation_dims);
        assert!(e6_rho23_check(&c).unwrap().is_zero());
    }

    #[test]
    fn exterior_series_small() {
        assert_eq!(exterior_series(&[3], 3), vec![1, 0, 0, 1]);
    }
}

#[cfg(test)]
mod heavy_tests {
    use super::*;

    fn odd_degrees(r: &CohomologyRing) -> Vec<u32> {
        r.odd_generators.iter().map(|g| g.degree).collect()
    }

    #[test]
    fn e7_complex() {
        let c = bockstein_complex(Family::E7).unwrap();
        let h = bockstein_cohomology(&c, c.top_degree + 1).unwrap();
        assert_eq!(h.algebra_dims.iter().sum::<usize>(), 2048);
        assert_eq!(h.total(), 128);
        assert_eq!(h.image_dims, h.presentation_dims);
    }

    #[test]
    fn e7_mod2_ring() {
        let r = mod_p_ring(&GroupSpec::pe7(), 2).unwrap();
        assert_eq!(odd_degrees(&r), [1, 5, 9, 15, 17, 23, 27]);
        assert_eq!(r.polynomial_part.relations.len(), 4);
        // 2⁴ from the truncated polynomial part, 2⁷ from the odd generators
        assert_eq!(r.poincare(133).unwrap().iter().sum::<usize>(), 1 << 11);
    }

    #[test]
    fn exceptional_rings() {
        let e6 = adjoint_exceptional_ring(&GroupSpec::pe6()).unwrap();
        assert_eq!(odd_degrees(&e6), [3, 9, 11, 15, 17, 23]);
        assert_eq!(e6.torsion_ideals.keys().copied().collect::<Vec<_>>(), [2, 3]);
        let e7 = adjoint_exceptional_ring(&GroupSpec::pe7()).unwrap();
        assert_eq!(odd_degrees(&e7), [3, 11, 15, 19, 23, 27, 35]);
        assert_eq!(e7.torsion_ideals.keys().copied().collect::<Vec<_>>(), [2, 3]);
    }

    #[test]
    fn classical_integral() {
        for (spec, primes) in [
            (GroupSpec::psu(6).unwrap(), vec![2, 3]),
            (GroupSpec::psu(8).unwrap(), vec![2]),
            (GroupSpec::psp(4).unwrap(), vec![2]),
        ] {
            let r = integral_ring(&spec).unwrap();
            assert_eq!(r.torsion_ideals.keys().copied().collect::<Vec<_>>(), primes, "{spec}");
            let step = if spec.family == Family::Sp { 4 } else { 2 };
            let want: Vec<u32> = (0..spec.rank() as u32).map(|i| 3 + step * i).collect();
            assert_eq!(odd_degrees(&r), want, "{spec}");
        }
    }
}
