//! Degreewise quotients of graded (super)commutative polynomial rings.
//!
//! A [`QuotientRing`] computes, for each requested degree, the monomial
//! basis, the span of `monomial · relation` products and the resulting
//! quotient (via [`FpEchelon`] over 𝔽ₚ or [`IntQuotient`] over ℤ).
//! Odd-degree variables anticommute and square to zero unless the
//! characteristic is 2, where everything is commutative and squares must be
//! given as relations.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{FpEchelon, IntQuotient, IntRow, SparseRow};
use crate::par::par_map;
use crate::poly::{bigint_json, CoeffRing, Context, Mono, Poly};

/// Column cap per degree; override with `FLAGCOH_MAX_DIM`.
pub fn dimension_cap() -> usize {
    std::env::var("FLAGCOH_MAX_DIM").ok().and_then(|s| s.parse().ok()).unwrap_or(400_000)
}

// ------------------------------------------------------------ groups

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupPiece {
    pub free: usize,
    /// Orders d₁ | d₂ | ⋯ of the cyclic torsion factors.
    pub torsion: Vec<BigInt>,
}

impl GroupPiece {
    pub fn is_trivial(&self) -> bool {
        self.free == 0 && self.torsion.is_empty()
    }
}

/// Per-degree decomposition into cyclic factors. Over 𝔽ₚ every factor is
/// ℤ/p, so `torsion` lists p once per dimension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedAbelianGroup {
    pub ring: CoeffRing,
    pub degrees: BTreeMap<u32, GroupPiece>,
}

impl GradedAbelianGroup {
    pub fn new(ring: CoeffRing) -> Self {
        GradedAbelianGroup { ring, degrees: BTreeMap::new() }
    }

    pub fn insert(&mut self, d: u32, piece: GroupPiece) {
        if piece.is_trivial() {
            self.degrees.remove(&d);
        } else {
            self.degrees.insert(d, piece);
        }
    }

    pub fn piece(&self, d: u32) -> GroupPiece {
        self.degrees.get(&d).cloned().unwrap_or_default()
    }

    pub fn total_free_rank(&self) -> usize {
        self.degrees.values().map(|p| p.free).sum()
    }

    pub fn is_torsion_free(&self) -> bool {
        self.degrees.values().all(|p| p.torsion.is_empty())
    }

    /// Number of cyclic factors in degree d (the dimension over 𝔽ₚ).
    pub fn factor_count(&self, d: u32) -> usize {
        let p = self.piece(d);
        p.free + p.torsion.len()
    }

    pub fn total_factor_count(&self) -> usize {
        self.degrees.values().map(|p| p.free + p.torsion.len()).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let degrees: serde_json::Map<String, serde_json::Value> = self
            .degrees
            .iter()
            .map(|(d, p)| {
                (d.to_string(), serde_json::json!([p.free, p.torsion.iter().map(bigint_json).collect::<Vec<_>>()]))
            })
            .collect();
        serde_json::json!({ "ring": self.ring.label(), "degrees": degrees })
    }
}

impl Serialize for GradedAbelianGroup {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl std::fmt::Display for GradedAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.degrees.is_empty() {
            return f.write_str("0");
        }
        let mut first = true;
        for (d, p) in &self.degrees {
            if !first {
                f.write_str("; ")?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            if p.free > 0 {
                parts.push(if p.free == 1 { "Z".into() } else { format!("Z^{}", p.free) });
            }
            let mut i = 0;
            while i < p.torsion.len() {
                let t = &p.torsion[i];
                let run = p.torsion[i..].iter().take_while(|x| *x == t).count();
                parts.push(if run == 1 { format!("Z/{t}") } else { format!("(Z/{t})^{run}") });
                i += run;
            }
            write!(f, "deg {d}: {}", parts.join(" + "))?;
        }
        Ok(())
    }
}

// ------------------------------------------------------------ monomials

/// All exponent vectors of total degree `d`, in descending lexicographic
/// order (the order used for matrix columns). Variables flagged in
/// `exterior` get exponent at most 1.
pub fn monomials_of_degree(degs: &[u32], exterior: &[bool], d: u32) -> Vec<Mono> {
    let caps: Vec<u32> = degs.iter().enumerate().map(|(i, _)| if exterior.get(i).copied().unwrap_or(false) { 1 } else { u32::MAX }).collect();
    monomials_capped(degs, &caps, d)
}

/// Like [`monomials_of_degree`] with a per-variable exponent bound.
pub fn monomials_capped(degs: &[u32], caps: &[u32], d: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    let mut cur = vec![0u16; degs.len()];
    // reach[i][l]: can variables i.. fill degree l exactly
    let n = degs.len();
    let mut reach = vec![vec![false; d as usize + 1]; n + 1];
    reach[n][0] = true;
    for i in (0..n).rev() {
        for l in 0..=d as usize {
            let mut e = 0u32;
            while e <= caps[i] && (e * degs[i]) as usize <= l {
                if reach[i + 1][l - (e * degs[i]) as usize] {
                    reach[i][l] = true;
                    break;
                }
                e += 1;
            }
        }
    }
    fn rec(i: usize, left: u32, degs: &[u32], caps: &[u32], reach: &[Vec<bool>], cur: &mut Mono, out: &mut Vec<Mono>) {
        if i == degs.len() {
            out.push(cur.clone());
            return;
        }
        let maxe = (left / degs[i]).min(caps[i]);
        for e in (0..=maxe).rev() {
            let rest = left - e * degs[i];
            if !reach[i + 1][rest as usize] {
                continue;
            }
            cur[i] = e as u16;
            rec(i + 1, rest, degs, caps, reach, cur, out);
        }
        cur[i] = 0;
    }
    if reach[0][d as usize] {
        rec(0, d, degs, caps, &reach, &mut cur, &mut out);
    }
    out
}

/// Sign and product of monomials under supercommutativity; `None` when an
/// exterior variable would be squared.
pub fn super_mono_mul(a: &[u16], b: &[u16], degs: &[u32], exterior: &[bool]) -> Option<(Mono, bool)> {
    let mut neg = false;
    let mut odd_after = 0u32; // odd variables of `a` with larger index than the current one
    for i in (0..a.len()).rev() {
        if exterior[i] {
            if a[i] > 0 && b[i] > 0 {
                return None;
            }
            // b's odd variable i passes a's odd variables with index > i
            if b[i] > 0 && odd_after % 2 == 1 {
                neg = !neg;
            }
            if a[i] > 0 {
                odd_after += 1;
            }
        } else if degs[i] % 2 == 1 && a[i] % 2 == 1 && b[i] % 2 == 1 {
            // only reached in characteristic 2, where signs are irrelevant
        }
    }
    Some((a.iter().zip(b).map(|(x, y)| x + y).collect(), neg))
}

/// Which variables anticommute (odd degree, characteristic ≠ 2).
pub fn exterior_flags(ctx: &Context, ring: CoeffRing) -> Vec<bool> {
    ctx.degrees().iter().map(|d| d % 2 == 1 && ring.characteristic() != 2).collect()
}

/// Product in the free graded-commutative algebra on the context.
pub fn super_mul(a: &Poly, b: &Poly) -> Poly {
    let ctx = a.ctx();
    let ext = exterior_flags(ctx, a.ring());
    if !ext.iter().any(|x| *x) {
        return a * b;
    }
    let degs = ctx.degrees();
    let mut out = Poly::zero(ctx, a.ring());
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            if let Some((m, neg)) = super_mono_mul(ma, mb, &degs, &ext) {
                let c = ca * cb;
                out.add_term(m, if neg { -c } else { c });
            }
        }
    }
    out
}

// ------------------------------------------------------------ quotient ring

enum Reducer {
    Fp(FpEchelon),
    Int(IntQuotient),
}

struct Piece {
    basis: Vec<Mono>,
    index: HashMap<Mono, u32>,
    reducer: Reducer,
}

/// A graded quotient ring computed lazily degree by degree.
pub struct QuotientRing {
    ctx: Context,
    ring: CoeffRing,
    relations: Vec<(u32, Poly)>,
    killed: Vec<Mono>,
    exterior: Vec<bool>,
    caps: Vec<u32>,
    degs: Vec<u32>,
    cap: usize,
    cache: Mutex<BTreeMap<u32, Arc<Piece>>>,
}

impl std::fmt::Debug for QuotientRing {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("QuotientRing")
            .field("ring", &self.ring)
            .field("variables", &self.ctx.vars().iter().map(|v| &v.name).collect::<Vec<_>>())
            .field("relations", &self.relations.len())
            .finish()
    }
}

impl QuotientRing {
    /// Relations must be homogeneous and live in `ctx` over `ring`.
    pub fn new(ctx: &Context, ring: CoeffRing, relations: &[Poly]) -> Result<Self> {
        let exterior = exterior_flags(ctx, ring);
        let mut rels = Vec::new();
        let mut killed = Vec::new();
        for r in relations {
            if r.ctx() != ctx {
                return Err(Error::ContextMismatch);
            }
            if r.ring() != ring {
                return Err(Error::RingMismatch);
            }
            let Some(d) = r.degree()? else { continue };
            if r.len() == 1 {
                let (m, c) = r.terms().iter().next().unwrap();
                let unit = match ring {
                    CoeffRing::Integers => c.abs_is_one(),
                    CoeffRing::Prime(_) => true,
                };
                if unit {
                    killed.push(m.clone());
                    continue;
                }
            }
            rels.push((d, r.clone()));
        }
        let mut caps: Vec<u32> = exterior.iter().map(|&e| if e { 1 } else { u32::MAX }).collect();
        for k in &killed {
            let nz: Vec<usize> = (0..k.len()).filter(|&i| k[i] > 0).collect();
            if let [i] = nz[..] {
                caps[i] = caps[i].min(k[i] as u32 - 1);
            }
        }
        Ok(QuotientRing {
            ctx: ctx.clone(),
            ring,
            relations: rels,
            killed,
            exterior,
            caps,
            degs: ctx.degrees(),
            cap: dimension_cap(),
            cache: Mutex::new(BTreeMap::new()),
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.cap = cap;
        self
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }
    pub fn ring(&self) -> CoeffRing {
        self.ring
    }

    fn is_killed(&self, m: &[u16]) -> bool {
        self.killed.iter().any(|k| k.iter().zip(m).all(|(a, b)| a <= b))
    }

    fn basis_of(&self, d: u32) -> Vec<Mono> {
        monomials_capped(&self.degs, &self.caps, d).into_iter().filter(|m| !self.is_killed(m)).collect()
    }

    fn build(&self, d: u32) -> Result<Piece> {
        let basis = self.basis_of(d);
        if basis.len() > self.cap {
            return Err(Error::DimensionBudget { degree: d, needed: basis.len(), cap: self.cap });
        }
        let index: HashMap<Mono, u32> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
        let mut jobs: Vec<(usize, Mono)> = Vec::new();
        for (ri, (e, _)) in self.relations.iter().enumerate() {
            if *e > d {
                continue;
            }
            for m in self.basis_of(d - e) {
                jobs.push((ri, m));
            }
        }
        let rows: Vec<Vec<(u32, BigInt)>> = par_map(&jobs, |(ri, m)| {
            let rel = &self.relations[*ri].1;
            let mut row: Vec<(u32, BigInt)> = Vec::with_capacity(rel.len());
            for (t, c) in rel.terms() {
                let Some((prod, neg)) = super_mono_mul(m, t, &self.degs, &self.exterior) else { continue };
                if let Some(&col) = index.get(&prod) {
                    row.push((col, if neg { -c } else { c.clone() }));
                }
            }
            row.sort_unstable_by_key(|(c, _)| *c);
            row
        });
        let reducer = match self.ring {
            CoeffRing::Prime(p) => {
                let mut e = FpEchelon::new(p, basis.len(), false);
                let mut scratch = vec![0u32; basis.len()];
                for r in &rows {
                    if e.rank() == basis.len() {
                        break;
                    }
                    let sr: SparseRow = r.iter().map(|(c, x)| (*c, crate::arith::mod_u32(x, p))).collect();
                    e.insert_with(&sr, &mut scratch);
                }
                Reducer::Fp(e)
            }
            CoeffRing::Integers => Reducer::Int(IntQuotient::new(basis.len(), rows)),
        };
        Ok(Piece { basis, index, reducer })
    }

    fn piece(&self, d: u32) -> Result<Arc<Piece>> {
        if let Some(p) = self.cache.lock().unwrap().get(&d) {
            return Ok(p.clone());
        }
        let p = Arc::new(self.build(d)?);
        self.cache.lock().unwrap().entry(d).or_insert_with(|| p.clone());
        Ok(p)
    }

    /// Computes the listed degrees (in parallel when enabled).
    pub fn prepare(&self, degrees: &[u32]) -> Result<()> {
        let missing: Vec<u32> = {
            let c = self.cache.lock().unwrap();
            degrees.iter().copied().filter(|d| !c.contains_key(d)).collect()
        };
        let built = par_map(&missing, |&d| self.build(d).map(|p| (d, p)));
        let mut c = self.cache.lock().unwrap();
        for b in built {
            let (d, p) = b?;
            c.entry(d).or_insert_with(|| Arc::new(p));
        }
        Ok(())
    }

    /// Degrees reachable by monomials, up to `max_degree`.
    pub fn reachable_degrees(&self, max_degree: u32) -> Vec<u32> {
        let mut ok = vec![false; max_degree as usize + 1];
        ok[0] = true;
        for d in 1..=max_degree as usize {
            ok[d] = self.degs.iter().any(|&g| g as usize <= d && ok[d - g as usize]);
        }
        (0..=max_degree).filter(|&d| ok[d as usize]).collect()
    }

    pub fn group_in_degree(&self, d: u32) -> Result<GroupPiece> {
        let p = self.piece(d)?;
        Ok(match &p.reducer {
            Reducer::Fp(e) => {
                let dim = p.basis.len() - e.rank();
                GroupPiece { free: 0, torsion: vec![BigInt::from(e.prime()); dim] }
            }
            Reducer::Int(q) => {
                let (free, torsion) = q.group();
                GroupPiece { free, torsion }
            }
        })
    }

    /// Dimension over 𝔽ₚ, or number of cyclic factors over ℤ.
    pub fn dimension(&self, d: u32) -> Result<usize> {
        let g = self.group_in_degree(d)?;
        Ok(g.free + g.torsion.len())
    }

    pub fn groups(&self, max_degree: u32) -> Result<GradedAbelianGroup> {
        let degs = self.reachable_degrees(max_degree);
        self.prepare(&degs)?;
        let mut g = GradedAbelianGroup::new(self.ring);
        for d in degs {
            g.insert(d, self.group_in_degree(d)?);
        }
        Ok(g)
    }

    fn check(&self, p: &Poly) -> Result<()> {
        if p.ctx() != &self.ctx {
            return Err(Error::ContextMismatch);
        }
        if p.ring() != self.ring {
            return Err(Error::RingMismatch);
        }
        Ok(())
    }

    /// Canonical representative of the class of a homogeneous polynomial.
    pub fn normal_form(&self, p: &Poly) -> Result<Poly> {
        self.check(p)?;
        let Some(d) = p.degree()? else { return Ok(p.clone()) };
        let piece = self.piece(d)?;
        let mut out = Poly::zero(&self.ctx, self.ring);
        match &piece.reducer {
            Reducer::Fp(e) => {
                let CoeffRing::Prime(q) = self.ring else { unreachable!() };
                let v: SparseRow = p
                    .terms()
                    .iter()
                    .filter_map(|(m, c)| piece.index.get(m).map(|&i| (i, crate::arith::mod_u32(c, q))))
                    .collect::<Vec<_>>();
                let mut v = v;
                v.sort_unstable();
                for (c, x) in e.reduce(&v).remainder {
                    out.add_term(piece.basis[c as usize].clone(), BigInt::from(x));
                }
            }
            Reducer::Int(q) => {
                let mut v: IntRow =
                    p.terms().iter().filter_map(|(m, c)| piece.index.get(m).map(|&i| (i, c.clone()))).collect();
                v.sort_unstable_by_key(|(c, _)| *c);
                for (c, x) in q.normal_form(&v) {
                    out.add_term(piece.basis[c as usize].clone(), x);
                }
            }
        }
        Ok(out)
    }

    /// Readable representative: a single term c·m in the class of `p` when
    /// one exists with 0 < c ≤ 16 (first monomial in display order wins),
    /// otherwise the normal form.
    pub fn short_form(&self, p: &Poly) -> Result<Poly> {
        let nf = self.normal_form(p)?;
        let Some(d) = nf.degree()? else { return Ok(nf) };
        let piece = self.piece(d)?;
        let mut monos: Vec<&Mono> = piece.basis.iter().collect();
        monos.sort_by(|a, b| self.ctx.grlex_cmp(b, a));
        for m in monos {
            for c in 1..=16i64 {
                let t = Poly::monomial(&self.ctx, self.ring, m.clone(), c);
                if self.normal_form(&t)? == nf {
                    return Ok(t);
                }
            }
        }
        Ok(nf)
    }

    pub fn is_zero(&self, p: &Poly) -> Result<bool> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// Reduces every homogeneous component.
    pub fn normal_form_inhomogeneous(&self, p: &Poly) -> Result<Poly> {
        let degrees: HashSet<u32> = p.terms().keys().map(|m| self.ctx.mono_degree(m)).collect();
        let mut degrees: Vec<u32> = degrees.into_iter().collect();
        degrees.sort_unstable();
        let mut out = Poly::zero(&self.ctx, self.ring);
        for d in degrees {
            out = &out + &self.normal_form(&p.component(d))?;
        }
        Ok(out)
    }

    /// Product in the quotient, reduced.
    pub fn mul(&self, a: &Poly, b: &Poly) -> Result<Poly> {
        self.check(a)?;
        self.check(b)?;
        self.normal_form_inhomogeneous(&super_mul(a, b))
    }

    /// Standard monomials in degree d over 𝔽ₚ (non-pivot columns).
    pub fn standard_monomials(&self, d: u32) -> Result<Vec<Mono>> {
        let p = self.piece(d)?;
        match &p.reducer {
            Reducer::Fp(e) => Ok((0..p.basis.len()).filter(|&c| !e.is_pivot(c)).map(|c| p.basis[c].clone()).collect()),
            Reducer::Int(_) => Err(Error::Unsupported("standard monomials are defined over a field".into())),
        }
    }

    /// Additive ℤ-basis representatives and their orders in degree d
    /// (order 0 = infinite); over 𝔽ₚ the standard monomials with order p.
    pub fn additive_basis(&self, d: u32) -> Result<Vec<(Poly, BigInt)>> {
        let piece = self.piece(d)?;
        match &piece.reducer {
            Reducer::Fp(e) => Ok((0..piece.basis.len())
                .filter(|&c| !e.is_pivot(c))
                .map(|c| {
                    (
                        Poly::monomial(&self.ctx, self.ring, piece.basis[c].clone(), 1),
                        BigInt::from(e.prime()),
                    )
                })
                .collect()),
            Reducer::Int(q) => {
                let k = q.factors().len();
                let mut out = Vec::new();
                for i in 0..k {
                    let d = &q.factors()[i];
                    if d.is_one() {
                        continue;
                    }
                    let mut y = vec![BigInt::zero(); k];
                    y[i] = BigInt::one();
                    let mut p = Poly::zero(&self.ctx, self.ring);
                    for (c, x) in q.from_coordinates(&y) {
                        p.add_term(piece.basis[c as usize].clone(), x);
                    }
                    out.push((p, d.clone()));
                }
                Ok(out)
            }
        }
    }

    /// Coordinates of a class with respect to [`additive_basis`](Self::additive_basis).
    pub fn coordinates(&self, p: &Poly) -> Result<Vec<BigInt>> {
        self.check(p)?;
        let Some(d) = p.degree()? else { return Ok(Vec::new()) };
        let piece = self.piece(d)?;
        match &piece.reducer {
            Reducer::Fp(_) => {
                let nf = self.normal_form(p)?;
                let std = self.standard_monomials(d)?;
                Ok(std.iter().map(|m| nf.coefficient(m)).collect())
            }
            Reducer::Int(q) => {
                let mut v: IntRow =
                    p.terms().iter().filter_map(|(m, c)| piece.index.get(m).map(|&i| (i, c.clone()))).collect();
                v.sort_unstable_by_key(|(c, _)| *c);
                let y = q.coordinates(&v);
                Ok(y.into_iter().zip(q.factors()).filter(|(_, d)| !d.is_one()).map(|(y, _)| y).collect())
            }
        }
    }
}

trait AbsIsOne {
    fn abs_is_one(&self) -> bool;
}
impl AbsIsOne for BigInt {
    fn abs_is_one(&self) -> bool {
        self.to_i64().is_some_and(|x| x == 1 || x == -1)
    }
}

/// Degreewise quotient of the polynomial ring on `generators` by
/// `relations` and `ideal_extra`, reported for every degree up to
/// `max_degree`. Polynomials are matched to generators by variable name.
pub fn graded_quotient(
    generators: &[(String, u32)],
    relations: &[Poly],
    ideal_extra: &[Poly],
    max_degree: u32,
    ring: CoeffRing,
) -> Result<GradedAbelianGroup> {
    let ctx = Context::new(generators.iter().cloned())?;
    let mut rels = Vec::new();
    for r in relations.iter().chain(ideal_extra) {
        if !r.is_homogeneous() {
            return Err(Error::Inhomogeneous(r.to_string()));
        }
        let e = r.project(&ctx)?;
        rels.push(match ring {
            CoeffRing::Integers => e.lift_integral(),
            CoeffRing::Prime(p) => e.reduce_mod(p),
        });
    }
    QuotientRing::new(&ctx, ring, &rels)?.groups(max_degree)
}

/// Membership of `target` in the ideal generated by `gens` over 𝔽ₚ (in the
/// commutative polynomial ring), with a certificate: cofactors `q_i` with
/// `target = Σ q_i · gens_i`. `None` when not a member.
pub fn fp_ideal_certificate(gens: &[Poly], target: &Poly) -> Result<Option<Vec<Poly>>> {
    let ctx = target.ctx().clone();
    let CoeffRing::Prime(p) = target.ring() else {
        return Err(Error::Unsupported("certificates are computed over a prime field".into()));
    };
    let zero_cofactors = || gens.iter().map(|_| Poly::zero(&ctx, target.ring())).collect::<Vec<_>>();
    let Some(d) = target.degree()? else { return Ok(Some(zero_cofactors())) };
    let degs = ctx.degrees();
    let ext = vec![false; degs.len()];
    let basis = monomials_of_degree(&degs, &ext, d);
    let index: HashMap<Mono, u32> = basis.iter().enumerate().map(|(i, m)| (m.clone(), i as u32)).collect();
    let mut e = FpEchelon::new(p, basis.len(), true);
    let mut labels: Vec<(usize, Mono)> = Vec::new();
    for (gi, g) in gens.iter().enumerate() {
        if g.ctx() != &ctx || g.ring() != target.ring() {
            return Err(Error::ContextMismatch);
        }
        let Some(gd) = g.degree()? else { continue };
        if gd > d {
            continue;
        }
        for m in monomials_of_degree(&degs, &ext, d - gd) {
            let mut row: SparseRow = g
                .terms()
                .iter()
                .map(|(t, c)| {
                    let prod: Mono = t.iter().zip(&m).map(|(a, b)| a + b).collect();
                    (index[&prod], crate::arith::mod_u32(c, p))
                })
                .collect();
            row.sort_unstable();
            e.insert(&row);
            labels.push((gi, m));
        }
    }
    let mut v: SparseRow = target.terms().iter().map(|(m, c)| (index[m], crate::arith::mod_u32(c, p))).collect();
    v.sort_unstable();
    let red = e.reduce(&v);
    if !red.remainder.is_empty() {
        return Ok(None);
    }
    let mut cof = zero_cofactors();
    for (k, c) in red.combination {
        let (gi, m) = &labels[k as usize];
        cof[*gi].add_term(m.clone(), BigInt::from(c));
    }
    let mut check = Poly::zero(&ctx, target.ring());
    for (q, g) in cof.iter().zip(gens) {
        check = &check + &(q * g);
    }
    if &check != target {
        return Err(Error::Inconsistent("ideal certificate does not reproduce the target".into()));
    }
    Ok(Some(cof))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(v: &[(&str, u32)]) -> Vec<(String, u32)> {
        v.iter().map(|(n, d)| (n.to_string(), *d)).collect()
    }

    #[test]
    fn cyclic_omega_quotient() {
        let gens = names(&[("ω1", 2)]);
        let ctx = Context::new(gens.clone()).unwrap();
        let z = CoeffRing::Integers;
        let rels: Vec<Poly> =
            ["4ω1", "2ω1^2", "2ω1^3", "ω1^4"].iter().map(|s| Poly::parse(&ctx, z, s).unwrap()).collect();
        let g = graded_quotient(&gens, &rels, &[], 12, z).unwrap();
        assert_eq!(g.piece(0).free, 1);
        assert_eq!(g.piece(2).torsion, vec![BigInt::from(4)]);
        assert_eq!(g.piece(4).torsion, vec![BigInt::from(2)]);
        assert_eq!(g.piece(6).torsion, vec![BigInt::from(2)]);
        assert!(g.piece(8).is_trivial());
        let h = graded_quotient(&gens, &[Poly::parse(&ctx, z, "ω1").unwrap()], &[], 10, z).unwrap();
        assert_eq!(h.degrees.len(), 1);
        assert_eq!(h.piece(0).free, 1);
    }

    #[test]
    fn monomial_order_and_count() {
        let m = monomials_of_degree(&[2, 2, 6], &[false; 3], 6);
        assert_eq!(m.len(), 5);
        assert_eq!(m[0], vec![3, 0, 0]);
        assert_eq!(m[4], vec![0, 0, 1]);
    }

    #[test]
    fn exterior_signs() {
        let ctx = Context::new([("a", 3), ("b", 5)]).unwrap();
        let z = CoeffRing::Integers;
        let a = Poly::var(&ctx, z, 0);
        let b = Poly::var(&ctx, z, 1);
        assert_eq!(super_mul(&a, &b), -&super_mul(&b, &a));
        assert!(super_mul(&a, &a).is_zero());
        let f2 = CoeffRing::Prime(2);
        let a2 = a.reduce_mod(2);
        assert_eq!(super_mul(&a2, &a2).len(), 1);
        let _ = f2;
    }

    #[test]
    fn certificate_over_fp() {
        let ctx = Context::new([("x", 2), ("y", 2)]).unwrap();
        let f = CoeffRing::Prime(3);
        let g = vec![Poly::parse(&ctx, f, "x^2 - y^2").unwrap(), Poly::parse(&ctx, f, "x*y").unwrap()];
        let t = Poly::parse(&ctx, f, "x^3 + x^2*y - x*y^2").unwrap();
        let cof = fp_ideal_certificate(&g, &t).unwrap().unwrap();
        assert_eq!(cof.len(), 2);
        let t2 = Poly::parse(&ctx, f, "x^2").unwrap();
        assert!(fp_ideal_certificate(&g, &t2).unwrap().is_none());
    }
}
