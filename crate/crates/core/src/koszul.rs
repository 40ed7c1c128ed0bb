//! The E₂ page H*(G/T) ⊗ Λ(t₁..t_N) with d₂(a⊗t) = τ(t)·a, and its
//! homology by exact degreewise linear algebra.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::mod_u32;
use crate::error::{Error, Result};
use crate::flag::RingPresentation;
use crate::graded::{dimension_cap, GradedAbelianGroup, GroupPiece, QuotientRing};
use crate::linalg::{smith_normal_form, sparse_from_dense, FpEchelon, IntMatrix};
use crate::par::par_map;
use crate::poly::{CoeffRing, Context, Poly};
use crate::roots::TransgressionData;

/// Σ a_S ⊗ t_S over square-free fiber monomials S (bit masks).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KoszulElement {
    pub ctx: Context,
    pub ring: CoeffRing,
    pub fiber: usize,
    pub parts: BTreeMap<u64, Poly>,
}

impl KoszulElement {
    pub fn zero(ctx: &Context, ring: CoeffRing, fiber: usize) -> Self {
        KoszulElement { ctx: ctx.clone(), ring, fiber, parts: BTreeMap::new() }
    }

    /// a ⊗ t_{i₁}⋯t_{i_k} with the indices in increasing order.
    pub fn basic(a: Poly, fiber: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Precondition("fiber indices must increase".into()));
            }
        }
        for &i in indices {
            if i >= fiber {
                return Err(Error::Range(format!("fiber generator t{} of {fiber}", i + 1)));
            }
            mask |= 1 << i;
        }
        let mut e = Self::zero(a.ctx(), a.ring(), fiber);
        e.add(mask, a);
        Ok(e)
    }

    pub fn add(&mut self, mask: u64, a: Poly) {
        if a.is_zero() {
            return;
        }
        let entry = self.parts.entry(mask).or_insert_with(|| Poly::zero(&self.ctx, self.ring));
        *entry = &*entry + &a;
        if entry.is_zero() {
            self.parts.remove(&mask);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    /// (base degree, fiber degree) of every summand.
    pub fn bidegrees(&self) -> Result<Vec<(u32, u32)>> {
        self.parts.iter().map(|(m, a)| Ok((a.degree()?.unwrap_or(0), m.count_ones()))).collect()
    }
}

/// d₂ extended as a derivation: d(a⊗t_{i₁}⋯t_{i_k}) = Σⱼ (−1)ʲ τ(t_{iⱼ})·a ⊗ (omit t_{iⱼ}).
pub fn koszul_d2_images(x: &KoszulElement, images: &[Poly]) -> Result<KoszulElement> {
    if images.len() < x.fiber {
        return Err(Error::Precondition(format!("{} fiber generators but {} images", x.fiber, images.len())));
    }
    let mut out = KoszulElement::zero(&x.ctx, x.ring, x.fiber);
    for (&mask, a) in &x.parts {
        let mut j = 0;
        for i in 0..x.fiber {
            if mask >> i & 1 == 0 {
                continue;
            }
            let im = &images[i];
            if im.ctx() != &x.ctx || im.ring() != x.ring {
                return Err(Error::ContextMismatch);
            }
            let mut term = im.checked_mul(a)?;
            if j % 2 == 1 {
                term = -&term;
            }
            out.add(mask & !(1 << i), term);
            j += 1;
        }
    }
    Ok(out)
}

/// d₂ with the images of `tau` embedded into the element's context.
pub fn koszul_d2(x: &KoszulElement, tau: &TransgressionData) -> Result<KoszulElement> {
    let images: Vec<Poly> = tau.images_in(&x.ctx)?.into_iter().map(|p| crate::flag::convert_ring(&p, x.ring)).collect();
    koszul_d2_images(x, &images)
}

/// Homology of the Koszul complex, keyed by (base degree, fiber degree).
pub type KoszulHomology = BTreeMap<(u32, u32), GradedAbelianGroup>;

fn coords(q: &QuotientRing, p: &Poly, len: usize) -> Result<Vec<BigInt>> {
    if p.is_zero() {
        return Ok(vec![BigInt::zero(); len]);
    }
    let c = q.coordinates(p)?;
    debug_assert_eq!(c.len(), len);
    Ok(c)
}

fn masks_of_weight(n: usize, k: u32) -> Vec<u64> {
    (0u64..(1 << n)).filter(|m| m.count_ones() == k).collect()
}

/// Matrix of d₂ from bidegree (b, f) to (b + 2, f − 1) in quotient-basis
/// coordinates; rows index the source basis.
fn d2_matrix(q: &QuotientRing, images: &[Poly], b: u32, f: u32) -> Result<Vec<Vec<BigInt>>> {
    let n = images.len();
    let src_basis = q.additive_basis(b)?;
    let tgt_len = q.additive_basis(b + 2)?.len();
    let src_masks = masks_of_weight(n, f);
    let tgt_masks = masks_of_weight(n, f - 1);
    let tgt_index: BTreeMap<u64, usize> = tgt_masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
    let cells: Vec<(u64, usize)> =
        src_masks.iter().flat_map(|&m| (0..src_basis.len()).map(move |i| (m, i))).collect();
    let rows = par_map(&cells, |&(mask, bi)| -> Result<Vec<BigInt>> {
        let x = KoszulElement { ctx: q.ctx().clone(), ring: q.ring(), fiber: n, parts: BTreeMap::from([(mask, src_basis[bi].0.clone())]) };
        let dx = koszul_d2_images(&x, images)?;
        let mut row = vec![BigInt::zero(); tgt_len * tgt_masks.len()];
        for (m, a) in &dx.parts {
            let off = tgt_index[m] * tgt_len;
            for (k, c) in coords(q, a, tgt_len)?.into_iter().enumerate() {
                row[off + k] = c;
            }
        }
        Ok(row)
    });
    rows.into_iter().collect()
}

fn fp_rank(rows: &[Vec<BigInt>], p: u32, ncols: usize) -> usize {
    let mut e = FpEchelon::new(p, ncols, false);
    for r in rows {
        let v: Vec<u32> = r.iter().map(|x| mod_u32(x, p)).collect();
        e.insert(&sparse_from_dense(&v));
    }
    e.rank()
}

/// Koszul homology of `base` ⊗ Λ(t) with d₂ given by `tau`, up to total
/// degree `max_total_degree`. Over ℤ the base must be torsion-free.
pub fn koszul_homology(
    base: &RingPresentation,
    tau: &TransgressionData,
    max_total_degree: u32,
    ring: CoeffRing,
) -> Result<KoszulHomology> {
    let ctx = base.ctx();
    let rels: Vec<Poly> = base.relations.iter().map(|r| crate::flag::convert_ring(r, ring)).collect();
    let q = QuotientRing::new(&ctx, ring, &rels)?;
    let images: Vec<Poly> = tau.images_in(&ctx)?.into_iter().map(|p| crate::flag::convert_ring(&p, ring)).collect();
    koszul_homology_with(&q, &images, max_total_degree)
}

/// As [`koszul_homology`] on a prepared quotient ring and explicit images.
pub fn koszul_homology_with(q: &QuotientRing, images: &[Poly], max_total_degree: u32) -> Result<KoszulHomology> {
    let ring = q.ring();
    let n = images.len();
    if n > 20 {
        return Err(Error::DimensionBudget { degree: 0, needed: 1 << n, cap: 1 << 20 });
    }
    let cap = dimension_cap();
    let base_degrees: Vec<u32> = (0..=max_total_degree + 2).step_by(2).collect();
    q.prepare(&base_degrees)?;
    let mut dims = BTreeMap::new();
    for &b in &base_degrees {
        let g = q.group_in_degree(b)?;
        if ring == CoeffRing::Integers && !g.torsion.is_empty() {
            return Err(Error::Precondition(format!("base has torsion in degree {b}; Koszul homology over ℤ needs a free base")));
        }
        dims.insert(b, q.additive_basis(b)?.len());
    }
    let binom = |k: u32| masks_of_weight(n, k).len();
    let mut out: KoszulHomology = BTreeMap::new();
    // outgoing map ranks (and SNF for ℤ) cached per source bidegree
    let mut rank_out: BTreeMap<(u32, u32), usize> = BTreeMap::new();
    let mut snf_in: BTreeMap<(u32, u32), (usize, Vec<BigInt>)> = BTreeMap::new();
    let pairs: Vec<(u32, u32)> = base_degrees
        .iter()
        .flat_map(|&b| (0..=n as u32).map(move |f| (b, f)))
        .filter(|&(b, f)| b + f <= max_total_degree + 3)
        .collect();
    for &(b, f) in &pairs {
        if f == 0 {
            continue;
        }
        let src = dims[&b] * binom(f);
        let tgt = dims.get(&(b + 2)).copied().unwrap_or(0) * binom(f - 1);
        if src.max(tgt) > cap {
            return Err(Error::DimensionBudget { degree: b + f, needed: src.max(tgt), cap });
        }
        if src == 0 || tgt == 0 {
            rank_out.insert((b, f), 0);
            snf_in.insert((b + 2, f - 1), (0, Vec::new()));
            continue;
        }
        let rows = d2_matrix(q, images, b, f)?;
        match ring {
            CoeffRing::Prime(p) => {
                let r = fp_rank(&rows, p, tgt);
                rank_out.insert((b, f), r);
                snf_in.insert((b + 2, f - 1), (r, Vec::new()));
            }
            CoeffRing::Integers => {
                let m = IntMatrix::from_rows(&rows);
                let s = smith_normal_form(&m);
                let r = s.rank();
                let tors: Vec<BigInt> = s.diagonal.iter().filter(|d| !d.is_zero() && !d.is_one()).cloned().collect();
                rank_out.insert((b, f), r);
                snf_in.insert((b + 2, f - 1), (r, tors));
            }
        }
    }
    for &(b, f) in &pairs {
        if b + f > max_total_degree {
            continue;
        }
        let dim = dims[&b] * binom(f);
        let ro = rank_out.get(&(b, f)).copied().unwrap_or(0);
        let (ri, tors) = snf_in.get(&(b, f)).cloned().unwrap_or((0, Vec::new()));
        let free = dim - ro - ri;
        let piece = match ring {
            CoeffRing::Integers => GroupPiece { free, torsion: tors },
            CoeffRing::Prime(p) => GroupPiece { free: 0, torsion: vec![BigInt::from(p); free] },
        };
        let mut g = GradedAbelianGroup::new(ring);
        g.insert(b + f, piece);
        if !g.degrees.is_empty() {
            out.insert((b, f), g);
        }
    }
    Ok(out)
}

/// Dimension (over 𝔽ₚ) or rank plus torsion-factor count (over ℤ) by
/// total degree.
pub fn total_series(h: &KoszulHomology, max_total_degree: u32) -> Vec<usize> {
    let mut s = vec![0usize; max_total_degree as usize + 1];
    for ((b, f), g) in h {
        let d = (b + f) as usize;
        if d < s.len() {
            s[d] += g.degrees.values().map(|p| p.free + p.torsion.len()).sum::<usize>();
        }
    }
    s
}

/// Σ pᵢ ⊗ tᵢ, the standard lift P̃ of an expansion P = Σ pᵢ·τ(tᵢ).
pub fn lift_expansion(coefficients: &[Poly]) -> Result<KoszulElement> {
    let first = coefficients.first().ok_or_else(|| Error::Precondition("empty expansion".into()))?;
    let mut x = KoszulElement::zero(first.ctx(), first.ring(), coefficients.len());
    for (i, c) in coefficients.iter().enumerate() {
        x.add(1 << i, c.clone());
    }
    Ok(x)
}

/// Unit element 1 ⊗ 1.
pub fn unit(ctx: &Context, ring: CoeffRing, fiber: usize) -> KoszulElement {
    let mut x = KoszulElement::zero(ctx, ring, fiber);
    x.add(0, Poly::one(ctx, ring));
    x
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flag::flag_presentation;
    use crate::roots::{transgression, GroupSpec};
    use proptest::prelude::*;

    #[test]
    fn d2_examples() {
        let tau = transgression(&GroupSpec::psu(3).unwrap(), false).unwrap();
        let ctx = tau.ctx.clone();
        let z = CoeffRing::Integers;
        let x = KoszulElement::basic(Poly::one(&ctx, z), 2, &[0]).unwrap();
        let d = koszul_d2(&x, &tau).unwrap();
        assert_eq!(d.parts[&0].to_string(), "2·ω1 - ω2");
        let a = KoszulElement::basic(Poly::var(&ctx, z, 0), 2, &[]).unwrap();
        assert!(koszul_d2(&a, &tau).unwrap().is_zero());
        let x = KoszulElement::basic(Poly::one(&ctx, z), 2, &[0, 1]).unwrap();
        let d = koszul_d2(&x, &tau).unwrap();
        assert_eq!(d.parts[&0b10], tau.images[0]);
        assert_eq!(d.parts[&0b01], -&tau.images[1]);
    }

    #[test]
    fn e3_bottom_row_psu4() {
        let spec = GroupSpec::psu(4).unwrap();
        let base = flag_presentation(&spec).unwrap();
        let tau = transgression(&spec, false).unwrap();
        let h = koszul_homology(&base, &tau, 8, CoeffRing::Integers).unwrap();
        let t = |b: u32| h.get(&(b, 0)).map(|g| g.piece(b).torsion.clone()).unwrap_or_default();
        assert_eq!(t(2), vec![BigInt::from(4)]);
        assert_eq!(t(4), vec![BigInt::from(2)]);
        assert_eq!(t(6), vec![BigInt::from(2)]);
        // ker τ = 0 on H¹(T)
        assert!(h.get(&(0, 1)).is_none());
        assert_eq!(h[&(0, 0)].piece(0).free, 1);
    }

    #[test]
    fn circle_times_su2_mod2() {
        // base ℤ[ω]/ω², τ(t₁) = ω, τ(t₀) = 0: homology Λ(ξ₁) ⊗ Λ(ξ₃)
        let ctx = Context::new([("ω1", 2)]).unwrap();
        let f2 = CoeffRing::Prime(2);
        let w = Poly::var(&ctx, f2, 0);
        let q = QuotientRing::new(&ctx, f2, &[w.pow(2)]).unwrap();
        let h = koszul_homology_with(&q, &[w.clone(), Poly::zero(&ctx, f2)], 4).unwrap();
        let s = total_series(&h, 4);
        assert_eq!(s, vec![1, 1, 0, 1, 1]);
    }

    fn random_element(spec: &GroupSpec, seed: u64) -> (KoszulElement, TransgressionData) {
        let tau = transgression(spec, false).unwrap();
        let ctx = tau.ctx.clone();
        let z = CoeffRing::Integers;
        let n = tau.rank();
        let mut x = KoszulElement::zero(&ctx, z, n);
        let mut s = seed;
        for mask in 0..(1u64 << n) {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let mut a = Poly::zero(&ctx, z);
            for v in 0..ctx.len() {
                let c = ((s >> (8 * v)) % 7) as i64 - 3;
                let mut e = vec![0u16; ctx.len()];
                e[v] = ((s >> (3 * v + 1)) % 3) as u16;
                a.add_term(e, BigInt::from(c));
            }
            x.add(mask, a);
        }
        (x, tau)
    }

    proptest! {
        #[test]
        fn d2_squares_to_zero(seed in any::<u64>(), which in 0usize..5) {
            let spec = [
                GroupSpec::psu(3).unwrap(),
                GroupSpec::su(4).unwrap(),
                GroupSpec::psp(2).unwrap(),
                GroupSpec::sp(3).unwrap(),
                GroupSpec::psu(4).unwrap(),
            ][which];
            let (x, tau) = random_element(&spec, seed);
            let dd = koszul_d2(&koszul_d2(&x, &tau).unwrap(), &tau).unwrap();
            prop_assert!(dd.is_zero());
        }
    }
}
