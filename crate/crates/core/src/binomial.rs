//! Binomial arithmetic behind the PSU computations: the gcd sequence
//! b_{n,k}, the prime-power partition of {2..n}, and the recurrence for
//! θ(γ_I).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::{binomial, factorize, pow_u64, split_prime_power, valuation};
use crate::error::{Error, Result};

/// b_{n,k} = gcd(C(n,1), …, C(n,k)).
pub fn b_gcd(n: u64, k: u64) -> Result<BigInt> {
    if k < 1 || k > n {
        return Err(Error::Range(format!("b_gcd needs 1 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    let mut g = BigInt::zero();
    for j in 1..=k {
        g = g.gcd(&binomial(n, j));
        if g.is_one() {
            break;
        }
    }
    Ok(g)
}

/// All of b_{n,1}, …, b_{n,n} (index 0 unused, set to n).
pub fn b_sequence(n: u64) -> Vec<BigInt> {
    let mut out = vec![BigInt::from(n)];
    let mut g = BigInt::zero();
    for j in 1..=n {
        if !g.is_one() {
            g = g.gcd(&binomial(n, j));
        }
        out.push(g.clone());
    }
    out
}

/// {2..n} = Q₀ ⊔ ∐ Q_p with Q_p = {p, p², …, p^{r_p}}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QPartition {
    pub n: u64,
    pub q0: Vec<u64>,
    pub blocks: BTreeMap<u64, Vec<u64>>,
}

impl QPartition {
    /// The prime whose block contains k, if any.
    pub fn block_of(&self, k: u64) -> Option<u64> {
        self.blocks.iter().find(|(_, b)| b.contains(&k)).map(|(&p, _)| p)
    }
}

pub fn q_partition(n: u64) -> Result<QPartition> {
    if n < 2 {
        return Err(Error::Range(format!("q_partition needs n ≥ 2, got {n}")));
    }
    let mut blocks = BTreeMap::new();
    for (p, r) in factorize(n) {
        blocks.insert(p, (1..=r).map(|e| pow_u64(p, e)).collect::<Vec<_>>());
    }
    let q0 = (2..=n).filter(|k| !blocks.values().any(|b: &Vec<u64>| b.contains(k))).collect();
    Ok(QPartition { n, q0, blocks })
}

/// a_{n,k} = b_{n,k−1}/b_{n,k}, checked against the partition prediction.
pub fn a_ratio(n: u64, k: u64) -> Result<u64> {
    if k < 2 || k > n {
        return Err(Error::Range(format!("a_ratio needs 2 ≤ k ≤ n, got n = {n}, k = {k}")));
    }
    let prev = b_gcd(n, k - 1)?;
    let cur = b_gcd(n, k)?;
    let (a, rem) = prev.div_rem(&cur);
    if !rem.is_zero() {
        return Err(Error::Inconsistent(format!("b_{{{n},{k}}} does not divide b_{{{n},{}}}", k - 1)));
    }
    let a = a.to_u64().ok_or_else(|| Error::Inconsistent("ratio overflow".into()))?;
    let predicted = q_partition(n)?.block_of(k).unwrap_or(1);
    if a != predicted {
        return Err(Error::Inconsistent(format!("a_{{{n},{k}}} = {a}, partition predicts {predicted}")));
    }
    Ok(a)
}

/// Outcome of the valuation bound for C(n, s).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrdCheck {
    pub valuation: u32,
    /// r − t.
    pub bound: u32,
    pub equality: bool,
    /// s = p^t exactly.
    pub prime_power: bool,
    /// s = c·p^t with 1 ≤ c < p.
    pub leading_digit_only: bool,
}

/// ord_p C(n, s) for p^t ≤ s < p^{t+1} with t + 1 < r, where n = p^r·n′.
/// The bound ord ≥ r − t is asserted, and equality is asserted to coincide
/// with s having a single nonzero base-p digit. For p = 2 that means s = 2^t;
/// for odd p, s = c·p^t with c > 1 also attains the bound.
pub fn ord_p_binom(n: u64, s: u64, p: u64) -> Result<OrdCheck> {
    if p < 2 || !crate::arith::is_prime(p) {
        return Err(Error::Precondition(format!("{p} is not prime")));
    }
    if s == 0 || s > n {
        return Err(Error::Precondition(format!("s = {s} out of range for n = {n}")));
    }
    let (r, _) = split_prime_power(n, p);
    let t = s.ilog(p);
    if t + 1 >= r {
        return Err(Error::Precondition(format!("t + 1 < r fails: n = {n}, s = {s}, p = {p} (t = {t}, r = {r})")));
    }
    let v = valuation(p, &binomial(n, s));
    let bound = r - t;
    if v < bound {
        return Err(Error::Inconsistent(format!("ord_{p} C({n},{s}) = {v} < {bound}")));
    }
    let pt = pow_u64(p, t);
    let leading = s % pt == 0;
    let equality = v == bound;
    if equality != leading {
        return Err(Error::Inconsistent(format!("equality case of ord_{p} C({n},{s}) misclassified")));
    }
    Ok(OrdCheck { valuation: v, bound, equality, prime_power: s == pt, leading_digit_only: leading })
}

/// Integers h₁..h_s with C(p^r, p^s) − p^{r−s} = Σ hᵢ·C(p^r, p^{s−i}).
pub fn h_sequence(p: u64, r: u32, s: u32) -> Result<Vec<BigInt>> {
    if s < 1 || s > r {
        return Err(Error::Range(format!("h_sequence needs 1 ≤ s ≤ r, got r = {r}, s = {s}")));
    }
    let n = pow_u64(p, r);
    let target = binomial(n, pow_u64(p, s)) - BigInt::from(pow_u64(p, r - s));
    let cols: Vec<BigInt> = (1..=s).map(|i| binomial(n, pow_u64(p, s - i))).collect();
    let h = greedy_solve(&target, &cols).or_else(|| gcd_solve(&target, &cols)).ok_or_else(|| {
        Error::Inconsistent(format!("no integer sequence for p = {p}, r = {r}, s = {s}"))
    })?;
    let check: BigInt = h.iter().zip(&cols).map(|(a, b)| a * b).sum();
    if check != target {
        return Err(Error::Inconsistent("h-sequence certificate does not recombine".into()));
    }
    Ok(h)
}

// Divide the remainder by each column in turn, keeping what the later
// columns can still absorb.
fn greedy_solve(target: &BigInt, cols: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut rem = target.clone();
    let mut h = Vec::with_capacity(cols.len());
    for (i, c) in cols.iter().enumerate() {
        let later = cols[i + 1..].iter().fold(BigInt::zero(), |g, x| g.gcd(x));
        if later.is_zero() {
            let (q, r) = rem.div_rem(c);
            if !r.is_zero() {
                return None;
            }
            h.push(q);
            rem = BigInt::zero();
            continue;
        }
        // smallest non-negative h with rem − h·c ≡ 0 (mod later)
        let mut found = None;
        let bound = later.to_u64().unwrap_or(u64::MAX).min(1 << 16);
        for k in 0..bound {
            let cand = BigInt::from(k);
            if (&rem - &cand * c).is_multiple_of(&later) {
                found = Some(cand);
                break;
            }
        }
        let k = found?;
        rem -= &k * c;
        h.push(k);
    }
    rem.is_zero().then_some(h)
}

// Fold the columns with the extended Euclidean algorithm.
fn gcd_solve(target: &BigInt, cols: &[BigInt]) -> Option<Vec<BigInt>> {
    let mut g = BigInt::zero();
    let mut coeffs: Vec<BigInt> = Vec::new();
    for c in cols {
        let e = g.extended_gcd(c);
        coeffs.iter_mut().for_each(|x| *x *= &e.x);
        coeffs.push(e.y.clone());
        g = e.gcd;
    }
    if g.is_zero() || !target.is_multiple_of(&g) {
        return None;
    }
    let k = target / &g;
    Some(coeffs.into_iter().map(|x| x * &k).collect())
}

/// A formal ℤ-combination of ω^a·ρ_{i₁}⋯ρ_{i_k} (ρ's exterior, indices
/// ascending, each index the odd degree 2j − 1).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ThetaExpression {
    pub terms: BTreeMap<(u32, Vec<u32>), BigInt>,
}

#[derive(Serialize)]
struct TermJson {
    coefficient: serde_json::Value,
    omega_power: u32,
    rho_indices: Vec<u32>,
}

impl ThetaExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: BigInt) -> Self {
        let mut e = Self::zero();
        e.add(0, Vec::new(), c);
        e
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&mut self, omega: u32, rho: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let key = (omega, rho);
        let v = self.terms.entry(key.clone()).or_default();
        *v += c;
        if v.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn plus(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for ((o, r), c) in &other.terms {
            out.add(*o, r.clone(), c.clone());
        }
        out
    }

    /// Multiplies by ρ_j on the right (sign from moving past larger indices).
    pub fn times_rho(&self, j: u32) -> Self {
        let mut out = Self::zero();
        for ((o, r), c) in &self.terms {
            if r.contains(&j) {
                continue;
            }
            let larger = r.iter().filter(|&&x| x > j).count();
            let mut rr = r.clone();
            rr.push(j);
            rr.sort_unstable();
            out.add(*o, rr, if larger % 2 == 1 { -c } else { c.clone() });
        }
        out
    }

    pub fn times_omega(&self, a: u32) -> Self {
        let mut out = Self::zero();
        for ((o, r), c) in &self.terms {
            out.add(o + a, r.clone(), c.clone());
        }
        out
    }

    /// Exact division of every coefficient.
    pub fn div_exact(&self, d: &BigInt) -> Result<Self> {
        let mut out = Self::zero();
        for ((o, r), c) in &self.terms {
            let (q, rem) = c.div_rem(d);
            if !rem.is_zero() {
                return Err(Error::NotDivisible(format!("{c} by {d} in a θ-expression")));
            }
            out.add(*o, r.clone(), q);
        }
        Ok(out)
    }

    pub fn all_divisible_by(&self, d: &BigInt) -> bool {
        self.terms.values().all(|c| c.is_multiple_of(d))
    }

    /// Reduces coefficients using p^{r−t}·ω^{p^t} = 0 (t = 0..r).
    pub fn reduce_omega_torsion(&self, p: u64, r: u32) -> Self {
        let mut out = Self::zero();
        for ((o, rho), c) in &self.terms {
            if *o == 0 {
                out.add(0, rho.clone(), c.clone());
                continue;
            }
            let t = (*o as u64).ilog(p).min(r);
            let m = BigInt::from(pow_u64(p, r - t));
            out.add(*o, rho.clone(), c.mod_floor(&m));
        }
        out
    }

    fn ordered(&self) -> Vec<(&(u32, Vec<u32>), &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0 .0.cmp(&b.0 .0).then_with(|| b.0 .1.cmp(&a.0 .1)));
        v
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<TermJson> = self
            .ordered()
            .into_iter()
            .map(|((o, r), c)| TermJson {
                coefficient: crate::poly::bigint_json(c),
                omega_power: *o,
                rho_indices: r.clone(),
            })
            .collect();
        serde_json::to_value(terms).expect("serializable")
    }

    pub fn to_latex(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, ((o, r), c)) in self.ordered().into_iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                s.push_str(if neg { " - " } else { " + " });
            } else if neg {
                s.push('-');
            }
            let a = c.abs();
            let mut f: Vec<String> = Vec::new();
            if !a.is_one() || (*o == 0 && r.is_empty()) {
                f.push(a.to_string());
            }
            match o {
                0 => {}
                1 => f.push("\\omega".into()),
                _ => f.push(format!("\\omega^{{{o}}}")),
            }
            f.extend(r.iter().map(|j| format!("\\rho_{{{j}}}")));
            s.push_str(&f.join(""));
        }
        s
    }
}

impl fmt::Display for ThetaExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, ((o, r), c)) in self.ordered().into_iter().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            let mut parts: Vec<String> = Vec::new();
            if !a.is_one() || (*o == 0 && r.is_empty()) {
                parts.push(a.to_string());
            }
            match o {
                0 => {}
                1 => parts.push("ω".into()),
                _ => parts.push(format!("ω^{o}")),
            }
            parts.extend(r.iter().map(|j| format!("ρ{j}")));
            write!(f, "{}", parts.join("·"))?;
        }
        Ok(())
    }
}

type ThetaKey = (u64, u32, Vec<u32>);

fn theta_cache() -> &'static Mutex<HashMap<ThetaKey, Arc<ThetaExpression>>> {
    static CACHE: OnceLock<Mutex<HashMap<ThetaKey, Arc<ThetaExpression>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// θ(γ_I) for n = p^r, with I ⊆ {1, p, …, p^r} given as its members.
///
/// Exact integers throughout; the singleton {p^s} is p^{r−s}·ω^{p^s−1}.
/// Call [`ThetaExpression::reduce_omega_torsion`] for the form in J(ω).
pub fn theta_gamma(n: u64, set: &[u64]) -> Result<ThetaExpression> {
    let fac = factorize(n);
    let [(p, r)] = fac[..] else {
        return Err(Error::Precondition(format!("θ(γ_I) needs n a prime power, got {n}")));
    };
    let mut exps = Vec::with_capacity(set.len());
    for &k in set {
        let e = if k == 1 { Some(0) } else { (1..=r).find(|&e| pow_u64(p, e) == k) };
        match e {
            Some(e) => exps.push(e),
            None => return Err(Error::Precondition(format!("{k} is not in {{1}} ⊔ Q_{p}({n})"))),
        }
    }
    exps.sort_unstable();
    if exps.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Precondition("index set has repeated members".into()));
    }
    if exps.is_empty() {
        return Err(Error::Precondition("θ(γ_∅) is the caller's base case".into()));
    }
    theta_rec(p, r, &exps).map(|e| (*e).clone())
}

fn theta_rec(p: u64, r: u32, exps: &[u32]) -> Result<Arc<ThetaExpression>> {
    let key = (p, r, exps.to_vec());
    if let Some(v) = theta_cache().lock().unwrap().get(&key) {
        return Ok(v.clone());
    }
    let out = if exps.len() == 1 {
        let s = exps[0];
        ThetaExpression::constant(BigInt::from(pow_u64(p, r - s))).times_omega((pow_u64(p, s) - 1) as u32)
    } else {
        let k = *exps.last().unwrap();
        let head = &exps[..exps.len() - 1];
        let pb = BigInt::from(p);
        let rho = (2 * pow_u64(p, k) - 1) as u32;
        let first = theta_rec(p, r, head)?.times_rho(rho).div_exact(&pb)?;
        let prev_in = head.contains(&(k - 1)) || k == 0;
        let second = if prev_in {
            ThetaExpression::zero()
        } else {
            let mut d = head.to_vec();
            d.push(k - 1);
            let shift = (pow_u64(p, k) - pow_u64(p, k - 1)) as u32;
            theta_rec(p, r, &d)?.times_omega(shift).div_exact(&pb)?
        };
        first.plus(&second)
    };
    let out = Arc::new(out);
    theta_cache().lock().unwrap().insert(key, out.clone());
    Ok(out)
}

/// Every admissible I ⊆ {1} ⊔ Q_p(p^r), nonempty, as member lists.
pub fn admissible_sets(p: u64, r: u32) -> Vec<Vec<u64>> {
    let members: Vec<u64> = std::iter::once(1).chain((1..=r).map(|e| pow_u64(p, e))).collect();
    (1u32..(1 << members.len()))
        .map(|mask| members.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &m)| m).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn brute_gcd(n: u64, k: u64) -> BigInt {
        // independent: multiplicative recurrence C(n, j) = C(n, j−1)·(n−j+1)/j
        let mut c = BigInt::one();
        let mut g = BigInt::zero();
        for j in 1..=k {
            c = c * BigInt::from(n - j + 1) / BigInt::from(j);
            g = g.gcd(&c);
        }
        g
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(b_gcd(4, 2).unwrap(), BigInt::from(2));
        assert_eq!(b_gcd(8, 4).unwrap(), BigInt::from(2));
        assert_eq!(b_gcd(9, 1).unwrap(), BigInt::from(9));
        assert!(b_gcd(3, 0).is_err());
        assert!(b_gcd(3, 4).is_err());
        assert_eq!(b_sequence(12)[3], BigInt::from(2));
    }

    #[test]
    fn partition_examples() {
        let q = q_partition(12).unwrap();
        assert_eq!(q.blocks[&2], vec![2, 4]);
        assert_eq!(q.blocks[&3], vec![3]);
        assert_eq!(q.q0, (5..=12).collect::<Vec<_>>());
        let q = q_partition(6).unwrap();
        assert_eq!(q.blocks[&2], vec![2]);
        assert_eq!(q.blocks[&3], vec![3]);
        let q = q_partition(7).unwrap();
        assert_eq!(q.blocks[&7], vec![7]);
        assert_eq!(q.q0, vec![2, 3, 4, 5, 6]);
    }

    #[test]
    fn ratio_examples() {
        assert_eq!(a_ratio(6, 2).unwrap(), 2);
        assert_eq!(a_ratio(6, 3).unwrap(), 3);
        assert_eq!(a_ratio(6, 5).unwrap(), 1);
    }

    #[test]
    fn ord_examples() {
        let c = ord_p_binom(8, 2, 2).unwrap();
        assert_eq!((c.valuation, c.equality), (2, true));
        let c = ord_p_binom(8, 3, 2).unwrap();
        assert_eq!((c.valuation, c.equality), (3, false));
        assert!(matches!(ord_p_binom(9, 3, 3), Err(Error::Precondition(_))));
        // odd p: a leading digit c > 1 also attains the bound
        let c = ord_p_binom(27, 6, 3).unwrap();
        assert!(c.equality && !c.prime_power);
    }

    #[test]
    fn h_examples() {
        assert_eq!(h_sequence(2, 2, 1).unwrap(), vec![BigInt::from(1)]);
        assert_eq!(h_sequence(2, 3, 1).unwrap(), vec![BigInt::from(3)]);
        assert_eq!(h_sequence(3, 1, 1).unwrap(), vec![BigInt::zero()]);
        for s in 1..=4 {
            h_sequence(2, 4, s).unwrap();
        }
    }

    #[test]
    fn theta_example_identities() {
        let cases: [(&[u64], &str); 5] = [
            (&[1, 2, 4], "2·ρ3·ρ7"),
            (&[1, 2, 8], "2·ρ3·ρ15 + ω^4·ρ3·ρ7"),
            (&[1, 4, 8], "2·ρ7·ρ15 + ω^2·ρ3·ρ15"),
            (&[2, 4, 8], "ω·ρ7·ρ15"),
            (&[1, 2, 4, 8], "ρ3·ρ7·ρ15"),
        ];
        for (set, want) in cases {
            assert_eq!(theta_gamma(8, set).unwrap().to_string(), want, "{set:?}");
        }
        assert_eq!(theta_gamma(8, &[2]).unwrap().to_string(), "4·ω");
        assert_eq!(theta_gamma(8, &[1]).unwrap().to_string(), "8");
        assert!(theta_gamma(12, &[2]).is_err());
        assert!(theta_gamma(8, &[3]).is_err());
    }

    #[test]
    fn theta_json_shape() {
        let j = theta_gamma(8, &[1, 2, 8]).unwrap().to_json();
        assert_eq!(j[1]["omega_power"], 4);
        assert_eq!(j[1]["rho_indices"], serde_json::json!([3, 7]));
    }

    #[test]
    fn torsion_reduction() {
        // 4ω vanishes in ℤ[ω]⁺/⟨8ω, 4ω², 2ω⁴, ω⁸⟩
        let e = theta_gamma(8, &[2]).unwrap();
        assert_eq!(e.reduce_omega_torsion(2, 3).to_string(), "4·ω");
        assert!(e.times_omega(1).reduce_omega_torsion(2, 3).is_zero());
    }

    proptest! {
        #[test]
        fn gcd_matches_recurrence(n in 1u64..80, k in 1u64..80) {
            prop_assume!(k <= n);
            prop_assert_eq!(b_gcd(n, k).unwrap(), brute_gcd(n, k));
        }

        #[test]
        fn partition_covers(n in 2u64..500) {
            let q = q_partition(n).unwrap();
            let mut all: Vec<u64> = q.q0.clone();
            for b in q.blocks.values() { all.extend(b); }
            all.sort_unstable();
            prop_assert_eq!(all, (2..=n).collect::<Vec<_>>());
        }
    }
}
