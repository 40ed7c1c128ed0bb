//! Calculus on the E₃ page: expansions in the transgression ideal, the
//! ϖ-derivation, θ̄, and lifting characteristic polynomials.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde_json::json;

use crate::arith::mod_u32;
use crate::error::{Error, Result};
use crate::flag::{convert_ring, restriction_map, ChernModel, Restriction};
use crate::graded::{monomials_of_degree, QuotientRing};
use crate::linalg::{smith_normal_form, sparse_from_dense, FpEchelon};
use crate::poly::{CoeffRing, Context, Mono, Poly};
use crate::roots::TransgressionData;

/// A primary 1-form, recorded through its characteristic polynomial.
#[derive(Clone, Debug)]
pub struct OneForm {
    pub label: String,
    pub characteristic_polynomial: Poly,
    /// 2·deg(P) − 1 with deg in half-degrees.
    pub degree: u32,
    pub ring: CoeffRing,
    /// Expansion coefficients P = Σ pᵢ·τ(tᵢ), when computed.
    pub expansion: Option<Vec<Poly>>,
}

impl OneForm {
    pub fn new(label: impl Into<String>, p: Poly) -> Result<Self> {
        let d = p.degree()?.ok_or_else(|| Error::Precondition("zero characteristic polynomial".into()))?;
        let ring = p.ring();
        Ok(OneForm { label: label.into(), characteristic_polynomial: p, degree: d - 1, ring, expansion: None })
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "label": self.label,
            "degree": self.degree,
            "ring": self.ring.label(),
            "characteristic_polynomial": self.characteristic_polynomial.to_json(),
            "expansion": self.expansion.as_ref().map(|e| e.iter().map(|p| p.to_string()).collect::<Vec<_>>()),
        })
    }
}

/// Coefficients pᵢ with P = Σ pᵢ·τ(tᵢ).
///
/// Works in Smith coordinates v = V⁻¹ω where the ideal is generated by
/// dₖ·vₖ; membership is then termwise.
pub fn expand_in_tau(p: &Poly, tau: &TransgressionData) -> Result<Vec<Poly>> {
    let ctx = p.ctx().clone();
    let ring = p.ring();
    let m = tau.ctx.len();
    let n = tau.rank();
    let omega_idx: Vec<usize> = (0..m)
        .map(|j| ctx.index(tau.ctx.name(j)).ok_or_else(|| Error::ContextMismatch))
        .collect::<Result<_>>()?;
    let t = tau.coefficient_matrix();
    let snf = smith_normal_form(&t);
    let unit = |d: &BigInt| match ring {
        CoeffRing::Integers => d.is_one(),
        CoeffRing::Prime(q) => mod_u32(d, q) != 0,
    };
    // ω_j = Σ_k V[j][k]·v_k; v_k named by the ω slot it replaces
    let mut to_v: Vec<Poly> = (0..ctx.len()).map(|i| Poly::var(&ctx, ring, i)).collect();
    for j in 0..m {
        let mut im = Poly::zero(&ctx, ring);
        for k in 0..m {
            let c = snf.right.get(j, k);
            if !c.is_zero() {
                let mut e = vec![0u16; ctx.len()];
                e[omega_idx[k]] = 1;
                im.add_term(e, c.clone());
            }
        }
        to_v[omega_idx[j]] = im;
    }
    let pv = p.substitute(&to_v)?;
    let diag: Vec<BigInt> = (0..m).map(|k| snf.diagonal.get(k).cloned().unwrap_or_default()).collect();
    let mut q: Vec<Poly> = vec![Poly::zero(&ctx, ring); m];
    for (mono, c) in pv.terms() {
        // a unit slot first; over ℤ any slot whose factor divides c
        let present = |k: usize| mono[omega_idx[k]] > 0 && !diag[k].is_zero();
        let slot = (0..m).find(|&k| present(k) && unit(&diag[k])).or_else(|| match ring {
            CoeffRing::Integers => (0..m).find(|&k| present(k) && c.is_multiple_of(&diag[k])),
            CoeffRing::Prime(_) => None,
        });
        let Some(k) = slot else {
            return Err(Error::NotInIdeal(format!("{p} is not in the transgression ideal")));
        };
        let mut e: Mono = mono.clone();
        e[omega_idx[k]] -= 1;
        let coef = match ring {
            CoeffRing::Integers => c / &diag[k],
            CoeffRing::Prime(pr) => {
                BigInt::from(mod_u32(c, pr) as u64 * crate::arith::inv_mod(mod_u32(&diag[k], pr), pr) as u64)
            }
        };
        q[k].add_term(e, coef);
    }
    // back to ω-coordinates: v = V⁻¹ω
    let mut to_omega: Vec<Poly> = (0..ctx.len()).map(|i| Poly::var(&ctx, ring, i)).collect();
    for k in 0..m {
        let mut im = Poly::zero(&ctx, ring);
        for j in 0..m {
            let c = snf.right_inverse.get(k, j);
            if !c.is_zero() {
                let mut e = vec![0u16; ctx.len()];
                e[omega_idx[j]] = 1;
                im.add_term(e, c.clone());
            }
        }
        to_omega[omega_idx[k]] = im;
    }
    let q: Vec<Poly> = q.iter().map(|x| x.substitute(&to_omega)).collect::<Result<_>>()?;
    // pᵢ = Σ_k Q_k·U[k][i]
    let mut coeffs = vec![Poly::zero(&ctx, ring); n];
    for (k, qk) in q.iter().enumerate() {
        if qk.is_zero() {
            continue;
        }
        for (i, ci) in coeffs.iter_mut().enumerate() {
            let u = snf.left.get(k, i);
            if !u.is_zero() {
                *ci = &*ci + &qk.scale(u);
            }
        }
    }
    let images: Vec<Poly> = tau.images_in(&ctx)?.iter().map(|x| convert_ring(x, ring)).collect();
    let mut check = Poly::zero(&ctx, ring);
    for (c, t) in coeffs.iter().zip(&images) {
        check = &check + &c.checked_mul(t)?;
    }
    if check != *p {
        return Err(Error::Inconsistent("expansion does not reproduce the polynomial".into()));
    }
    Ok(coeffs)
}

/// ∂P/∂ϖ for P in ω-coordinates (optionally with special generators):
/// the restriction along τ = 0 divided by ϖ, exactly.
pub fn derivative_wrt_varpi(p: &Poly, tau: &TransgressionData) -> Result<Poly> {
    let res = restriction_map(&tau.spec)?;
    derivative_with(p, &res)
}

pub fn derivative_with(p: &Poly, res: &Restriction) -> Result<Poly> {
    let target = target_for(p.ctx(), res)?;
    let r = res.restrict_omega(p, &target)?;
    r.div_var(0).map_err(|_| Error::NotDivisible(format!("restriction of {p} is not divisible by {}", res.var_name)))
}

/// ∂P/∂ϖ for P in the Chern model.
pub fn derivative_in_model(model: &ChernModel, res: &Restriction, p: &Poly) -> Result<Poly> {
    let target = res.target_ctx();
    let r = res.restrict_model(model, p, &target)?;
    r.div_var(0).map_err(|_| Error::NotDivisible(format!("restriction of {p} is not divisible by {}", res.var_name)))
}

fn target_for(ctx: &Context, res: &Restriction) -> Result<Context> {
    let full = res.target_ctx();
    let mut vars = vec![(res.var_name.clone(), 2)];
    for v in ctx.vars() {
        if !v.name.starts_with('ω') && full.index(&v.name).is_some() {
            vars.push((v.name.clone(), v.degree));
        }
    }
    Context::new(vars)
}

/// θ̄(φ(P)) as a normal form in E₃^{*,0}(PG).
pub fn theta_bar(model: &ChernModel, res: &Restriction, e3: &QuotientRing, form: &OneForm) -> Result<Poly> {
    let d = derivative_in_model(model, res, &form.characteristic_polynomial)?;
    let d = convert_ring(&d.project(e3.ctx())?, e3.ring());
    e3.normal_form(&d)
}

/// θ̄(ξ₁) = q, the order of the central quotient.
pub fn theta_bar_xi1(res: &Restriction) -> BigInt {
    BigInt::from(res.q)
}

/// Output of [`lift_characteristic`].
#[derive(Clone, Debug)]
pub struct Lift {
    pub lifted: Poly,
    /// The element K of the relation ideal with K|_{τ=0} = ∂P/∂ϖ.
    pub correction: Poly,
    pub derivative: Poly,
}

/// P′ = P − K·ϖ with K in the relation ideal and K|_{τ=0} = ∂P/∂ϖ, so that
/// P′ restricts to zero. Over 𝔽ₚ the search is linear algebra over the
/// products (monomial)·Rᵢ, trying powers of ϖ times a single relation first.
pub fn lift_characteristic(model: &ChernModel, res: &Restriction, p: &Poly) -> Result<Lift> {
    let ring = p.ring();
    let d = derivative_in_model(model, res, p)?;
    let ctx = model.ctx.clone();
    let w = Poly::var(&ctx, ring, 0);
    if d.is_zero() {
        return Ok(Lift { lifted: p.clone(), correction: Poly::zero(&ctx, ring), derivative: d });
    }
    let deg = p.degree()?.unwrap();
    let target_deg = deg - 2;
    let rels: Vec<Poly> = model.relations.iter().map(|r| convert_ring(r, ring)).collect();
    let tctx = res.target_ctx();
    let restrict = |x: &Poly| res.restrict_model(model, x, &tctx);
    // single candidates w^j·R_i with a scalar multiple
    for r in &rels {
        let Some(rd) = r.degree()? else { continue };
        if rd > target_deg || (target_deg - rd) % 2 == 1 {
            continue;
        }
        let cand = r.checked_mul(&w.pow((target_deg - rd) / 2))?;
        let img = restrict(&cand)?;
        if let Some(s) = scalar_ratio(&d, &img) {
            let k = cand.scale(&s);
            return finish(model, res, p, k, d);
        }
    }
    let CoeffRing::Prime(pr) = ring else {
        return Err(Error::NoLift(format!("no integral multiple of a single relation lifts ∂({p})/∂ϖ")));
    };
    // general search over monomial multiples of the relations
    let degs = ctx.degrees();
    let ext = vec![false; ctx.len()];
    let mut cands: Vec<Poly> = Vec::new();
    for r in &rels {
        let Some(rd) = r.degree()? else { continue };
        if rd > target_deg {
            continue;
        }
        for m in monomials_of_degree(&degs, &ext, target_deg - rd) {
            cands.push(r.shift(&m));
        }
    }
    let images: Vec<Poly> = cands.iter().map(|c| restrict(c)).collect::<Result<_>>()?;
    let mut index: BTreeMap<Mono, u32> = BTreeMap::new();
    for x in images.iter().chain(std::iter::once(&d)) {
        for m in x.terms().keys() {
            let l = index.len() as u32;
            index.entry(m.clone()).or_insert(l);
        }
    }
    let row = |x: &Poly| {
        let mut v = vec![0u32; index.len()];
        for (m, c) in x.terms() {
            v[index[m] as usize] = mod_u32(c, pr);
        }
        sparse_from_dense(&v)
    };
    let mut ech = FpEchelon::new(pr, index.len(), true);
    for x in &images {
        ech.insert(&row(x));
    }
    let red = ech.reduce(&row(&d));
    if !red.remainder.is_empty() {
        return Err(Error::NoLift(format!("θ̄ of ({p}) is nonzero in E3^{{*,0}}")));
    }
    let mut k = Poly::zero(&ctx, ring);
    for (i, c) in red.combination {
        k = &k + &cands[i as usize].scale(&BigInt::from(c));
    }
    finish(model, res, p, k, d)
}

fn finish(model: &ChernModel, res: &Restriction, p: &Poly, k: Poly, d: Poly) -> Result<Lift> {
    let ring = p.ring();
    let w = Poly::var(&model.ctx, ring, 0);
    let lifted = p - &k.checked_mul(&w)?;
    let tctx = res.target_ctx();
    if !res.restrict_model(model, &lifted, &tctx)?.is_zero() {
        return Err(Error::Inconsistent(format!("lift of {p} does not restrict to zero")));
    }
    Ok(Lift { lifted, correction: k, derivative: d })
}

/// λ with a = λ·b, if any (over 𝔽ₚ a unit, over ℤ an integer).
pub fn scalar_ratio(a: &Poly, b: &Poly) -> Option<BigInt> {
    if b.is_zero() {
        return None;
    }
    let (m, cb) = b.terms().iter().next()?;
    let ca = a.coefficient(m);
    let lambda = match a.ring() {
        CoeffRing::Integers => {
            if !ca.is_multiple_of(cb) {
                return None;
            }
            &ca / cb
        }
        CoeffRing::Prime(p) => BigInt::from(
            mod_u32(&ca, p) as u64 * crate::arith::inv_mod(mod_u32(cb, p), p) as u64 % p as u64,
        ),
    };
    (b.scale(&lambda) == *a).then_some(lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::binomial;
    use crate::flag::{chern_class, chern_model};
    use crate::roots::{transgression, GroupSpec};

    #[test]
    fn expansion_examples() {
        let tau = transgression(&GroupSpec::su(4).unwrap(), false).unwrap();
        let ctx = tau.ctx.clone();
        let z = CoeffRing::Integers;
        let w1 = Poly::var(&ctx, z, 0);
        let p = tau.images[0].checked_mul(&w1).unwrap();
        let e = expand_in_tau(&p, &tau).unwrap();
        assert_eq!(e[0], w1);
        assert!(e[1].is_zero() && e[2].is_zero());
        let c2 = chern_class(&GroupSpec::su(4).unwrap(), 2).unwrap();
        let e = expand_in_tau(&c2, &tau).unwrap();
        assert_eq!(e.len(), 3);
        let zero = expand_in_tau(&Poly::zero(&ctx, z), &tau).unwrap();
        assert!(zero.iter().all(|x| x.is_zero()));
    }

    #[test]
    fn expansion_psu3_and_failure() {
        let spec = GroupSpec::psu(3).unwrap();
        let tau = transgression(&spec, false).unwrap();
        let c2 = chern_class(&spec, 2).unwrap();
        let c2 = c2.embed(&tau.ctx).unwrap();
        // c₂ restricts to −3ω₁² = −ω₁·(3ω₁), inside the ideal; ω₁² is not
        assert!(expand_in_tau(&c2, &tau).is_ok());
        let sq = Poly::var(&tau.ctx, CoeffRing::Integers, 0).pow(2);
        assert!(matches!(expand_in_tau(&sq, &tau), Err(Error::NotInIdeal(_))));
        let three_w = Poly::var(&tau.ctx, CoeffRing::Integers, 0).scale(&BigInt::from(3));
        assert!(expand_in_tau(&three_w, &tau).is_ok());
        let c2f = c2.reduce_mod(3);
        assert!(expand_in_tau(&c2f, &tau).is_ok());
    }

    #[test]
    fn derivative_su() {
        for n in 2..=6u32 {
            let spec = GroupSpec::psu(n).unwrap();
            let tau = transgression(&spec, true).unwrap();
            let res = restriction_map(&spec).unwrap();
            for s in 2..=n as usize {
                let c = chern_class(&spec, s).unwrap();
                let d = derivative_wrt_varpi(&c, &tau).unwrap();
                let want = binomial(n as u64, s as u64);
                // equal modulo n·ω₁ when s ≥ 2
                let got = d.coefficient(&[s as u16 - 1]);
                assert_eq!((got - &want).mod_floor(&BigInt::from(n)), BigInt::zero());
                let _ = &res;
            }
        }
    }

    #[test]
    fn lift_su_mod_p() {
        // n = 4, p = 2: c₄ lifts to c₄ − t·c₄ω… (k = p^r itself is excluded), c₃ stays
        let spec = GroupSpec::psu(6).unwrap();
        let model = chern_model(&spec);
        let res = restriction_map(&spec).unwrap();
        let f3 = CoeffRing::Prime(3);
        let c2 = model.chern(2, f3);
        let l = lift_characteristic(&model, &res, &c2).unwrap();
        assert_eq!(l.lifted, c2);
        let c4 = model.chern(4, f3);
        let l = lift_characteristic(&model, &res, &c4).unwrap();
        // C(6,4) = 15 ≡ 0, so nothing to do; c₅: C(6,5) = 6 ≡ 0 as well
        assert_eq!(l.lifted, c4);
        let spec = GroupSpec::psu(4).unwrap();
        let model = chern_model(&spec);
        let res = restriction_map(&spec).unwrap();
        let f2 = CoeffRing::Prime(2);
        let c3 = model.chern(3, f2);
        let l = lift_characteristic(&model, &res, &c3).unwrap();
        // C(4,3) = 4 ≡ 0
        assert_eq!(l.lifted, c3);
    }
}
