//! Root data for SU(n), Sp(n), E₆ and E₇: Cartan matrices, transition
//! matrices, transgression images and the Ω-sets whose elementary symmetric
//! functions give the Chern classes cᵣ(G).
//!
//! Node ordering is Bourbaki's throughout. For Aₙ₋₁ and Cₙ the simple roots
//! are eᵢ − eᵢ₊₁ (and 2eₙ for Cₙ); for E₆ ⊂ E₇ ⊂ E₈ they are realized in ℝ⁸
//! as α₁ = ½(e₁ + e₈ − e₂ − ⋯ − e₇), α₂ = e₁ + e₂, α₃ = e₂ − e₁,
//! α₄ = e₃ − e₂, α₅ = e₄ − e₃, α₆ = e₅ − e₄, α₇ = e₆ − e₅.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::IntMatrix;
use crate::poly::{CoeffRing, Context, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    SU,
    Sp,
    E6,
    E7,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Lattice {
    SimplyConnected,
    Adjoint,
}

/// A compact simple group G (simply connected) or its adjoint form PG.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupSpec {
    pub family: Family,
    pub n: u32,
    pub lattice: Lattice,
    /// Order of the central quotient: 1 when simply connected.
    pub quotient_order: u32,
}

impl GroupSpec {
    pub fn new(family: Family, n: u32, lattice: Lattice) -> Result<Self> {
        let n = match family {
            Family::SU if n < 2 => return Err(Error::Range(format!("SU(n) needs n >= 2, got {n}"))),
            Family::Sp if n < 1 => return Err(Error::Range("Sp(n) needs n >= 1".into())),
            Family::E6 => 6,
            Family::E7 => 7,
            _ => n,
        };
        let center = match family {
            Family::SU => n,
            Family::Sp => 2,
            Family::E6 => 3,
            Family::E7 => 2,
        };
        let quotient_order = match lattice {
            Lattice::SimplyConnected => 1,
            Lattice::Adjoint => center,
        };
        Ok(GroupSpec { family, n, lattice, quotient_order })
    }

    pub fn su(n: u32) -> Result<Self> {
        Self::new(Family::SU, n, Lattice::SimplyConnected)
    }
    pub fn psu(n: u32) -> Result<Self> {
        Self::new(Family::SU, n, Lattice::Adjoint)
    }
    pub fn sp(n: u32) -> Result<Self> {
        Self::new(Family::Sp, n, Lattice::SimplyConnected)
    }
    pub fn psp(n: u32) -> Result<Self> {
        Self::new(Family::Sp, n, Lattice::Adjoint)
    }
    pub fn e6() -> Self {
        Self::new(Family::E6, 6, Lattice::SimplyConnected).unwrap()
    }
    pub fn pe6() -> Self {
        Self::new(Family::E6, 6, Lattice::Adjoint).unwrap()
    }
    pub fn e7() -> Self {
        Self::new(Family::E7, 7, Lattice::SimplyConnected).unwrap()
    }
    pub fn pe7() -> Self {
        Self::new(Family::E7, 7, Lattice::Adjoint).unwrap()
    }

    /// Order of the center of the simply connected form.
    pub fn center_order(&self) -> u32 {
        match self.family {
            Family::SU => self.n,
            Family::Sp => 2,
            Family::E6 => 3,
            Family::E7 => 2,
        }
    }

    /// Rank of the semisimple group.
    pub fn rank(&self) -> usize {
        match self.family {
            Family::SU => self.n as usize - 1,
            Family::Sp => self.n as usize,
            Family::E6 => 6,
            Family::E7 => 7,
        }
    }

    /// Real dimension of G.
    pub fn dimension(&self) -> u32 {
        match self.family {
            Family::SU => self.n * self.n - 1,
            Family::Sp => self.n * (2 * self.n + 1),
            Family::E6 => 78,
            Family::E7 => 133,
        }
    }

    /// Order of the Weyl group.
    pub fn weyl_order(&self) -> BigInt {
        let fact = |k: u32| (1..=k).fold(BigInt::from(1), |a, i| a * i);
        match self.family {
            Family::SU => fact(self.n),
            Family::Sp => fact(self.n) * (BigInt::from(1) << self.n),
            Family::E6 => BigInt::from(51840),
            Family::E7 => BigInt::from(2903040),
        }
    }

    /// The same group with the other lattice.
    pub fn with_lattice(&self, lattice: Lattice) -> Self {
        Self::new(self.family, self.n, lattice).expect("valid spec stays valid")
    }

    pub fn is_adjoint(&self) -> bool {
        self.lattice == Lattice::Adjoint
    }

    /// Index of ϖ among ω₁..ω_m (0-based): ω₂ for E₇, ω₁ otherwise.
    pub fn varpi_index(&self) -> usize {
        match self.family {
            Family::E7 => 1,
            _ => 0,
        }
    }

    /// Primes dividing the center order.
    pub fn torsion_primes(&self) -> Vec<u32> {
        crate::arith::factorize(self.center_order() as u64).into_iter().map(|(p, _)| p as u32).collect()
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = if self.is_adjoint() { "P" } else { "" };
        match self.family {
            Family::SU => write!(f, "{prefix}SU({})", self.n),
            Family::Sp => write!(f, "{prefix}Sp({})", self.n),
            Family::E6 => write!(f, "{prefix}E6"),
            Family::E7 => write!(f, "{prefix}E7"),
        }
    }
}

/// Parses `SU`, `PSU`, `Sp`, `PSp`, `E6`, `PE6`, `E7`, `PE7` (case-insensitive).
impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(parse_group_name(s)?.0)
    }
}

pub fn parse_group_name(s: &str) -> Result<(Family, Lattice)> {
    let u = s.to_ascii_uppercase();
    let (adj, rest) = match u.strip_prefix('P') {
        Some(r) if !r.is_empty() => (true, r.to_string()),
        _ => (false, u.clone()),
    };
    let family = match rest.as_str() {
        "SU" => Family::SU,
        "SP" => Family::Sp,
        "E6" => Family::E6,
        "E7" => Family::E7,
        _ => return Err(Error::Unsupported(format!("group {s}"))),
    };
    Ok((family, if adj { Lattice::Adjoint } else { Lattice::SimplyConnected }))
}

/// Simple roots in an integral model of the ambient Euclidean space.
fn simple_roots(spec: &GroupSpec) -> Vec<Vec<i64>> {
    let m = spec.rank();
    match spec.family {
        Family::SU => (0..m)
            .map(|i| {
                let mut v = vec![0; m + 1];
                v[i] = 1;
                v[i + 1] = -1;
                v
            })
            .collect(),
        Family::Sp => (0..m)
            .map(|i| {
                let mut v = vec![0; m];
                if i + 1 < m {
                    v[i] = 1;
                    v[i + 1] = -1;
                } else {
                    v[i] = 2;
                }
                v
            })
            .collect(),
        Family::E6 | Family::E7 => {
            // doubled coordinates in ℝ⁸
            let mut roots = vec![vec![1, -1, -1, -1, -1, -1, -1, 1], {
                let mut v = vec![0; 8];
                v[0] = 2;
                v[1] = 2;
                v
            }];
            for k in 0..m - 2 {
                let mut v = vec![0; 8];
                v[k] = -2;
                v[k + 1] = 2;
                roots.push(v);
            }
            roots
        }
    }
}

fn dot(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Cartan matrix with entries bᵢⱼ = 2(αᵢ, αⱼ)/(αⱼ, αⱼ).
pub fn cartan_matrix(spec: &GroupSpec) -> IntMatrix {
    let roots = simple_roots(spec);
    let m = roots.len();
    let mut a = IntMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let num = 2 * dot(&roots[i], &roots[j]);
            let den = dot(&roots[j], &roots[j]);
            assert_eq!(num % den, 0, "Cartan entry must be integral");
            a.set(i, j, BigInt::from(num / den));
        }
    }
    a
}

/// C(Θ): identity for the simply connected lattice, Aᵗ for the adjoint one.
pub fn transition_matrix(spec: &GroupSpec) -> IntMatrix {
    match spec.lattice {
        Lattice::SimplyConnected => IntMatrix::identity(spec.rank()),
        Lattice::Adjoint => cartan_matrix(spec).transpose(),
    }
}

/// Context ω₁..ω_m (each of degree 2).
pub fn omega_context(spec: &GroupSpec) -> Context {
    Context::new((1..=spec.rank()).map(|i| (format!("ω{i}"), 2))).expect("distinct names")
}

/// Transgression images τ(tᵢ) in H²(G/T), optionally with the circle
/// generator t₀ ↦ ϖ appended.
#[derive(Clone, Debug)]
pub struct TransgressionData {
    pub spec: GroupSpec,
    pub ctx: Context,
    pub fiber_names: Vec<String>,
    pub images: Vec<Poly>,
    /// ϖ = τ′(t₀) when the circle factor is present.
    pub varpi: Option<Poly>,
}

impl TransgressionData {
    pub fn rank(&self) -> usize {
        self.images.len()
    }

    /// Integer matrix whose row i holds the ω-coefficients of image i.
    pub fn coefficient_matrix(&self) -> IntMatrix {
        let m = self.ctx.len();
        let mut out = IntMatrix::zeros(self.images.len(), m);
        for (i, im) in self.images.iter().enumerate() {
            for (mono, c) in im.terms() {
                let j = mono.iter().position(|&e| e == 1).expect("linear form");
                out.set(i, j, c.clone());
            }
        }
        out
    }

    /// Same images embedded into a larger context (e.g. with x-generators).
    pub fn images_in(&self, target: &Context) -> Result<Vec<Poly>> {
        self.images.iter().map(|p| p.embed(target)).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "group": self.spec.to_string(),
            "fiber": self.fiber_names,
            "images": self.images.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
            "varpi": self.varpi.as_ref().map(|p| p.to_string()),
        })
    }
}

pub fn transgression(spec: &GroupSpec, with_circle: bool) -> Result<TransgressionData> {
    if with_circle && !(spec.is_adjoint() && spec.quotient_order > 1) {
        return Err(Error::Precondition("the circle extension needs an adjoint group with nontrivial center".into()));
    }
    let ctx = omega_context(spec);
    let c = transition_matrix(spec);
    let m = spec.rank();
    let z = CoeffRing::Integers;
    let mut images = Vec::with_capacity(m + 1);
    for i in 0..m {
        let mut p = Poly::zero(&ctx, z);
        for j in 0..m {
            let x = c.get(j, i);
            if !x.is_zero() {
                let mut e = vec![0u16; m];
                e[j] = 1;
                p.add_term(e, x.clone());
            }
        }
        images.push(p);
    }
    let mut fiber_names: Vec<String> = (1..=m).map(|i| format!("t{i}")).collect();
    let varpi = if with_circle {
        let v = Poly::var(&ctx, z, spec.varpi_index());
        images.push(v.clone());
        fiber_names.push("t0".into());
        Some(v)
    } else {
        None
    };
    Ok(TransgressionData { spec: *spec, ctx, fiber_names, images, varpi })
}

/// The Ω-set of linear forms in ω₁..ω_m.
pub fn omega_set(spec: &GroupSpec) -> Vec<Poly> {
    let ctx = omega_context(spec);
    let z = CoeffRing::Integers;
    let parse = |s: &str| Poly::parse(&ctx, z, s).expect("valid Ω form");
    match spec.family {
        Family::SU => {
            let n = spec.n as usize;
            let mut out = vec![parse("ω1")];
            for k in 2..n {
                out.push(parse(&format!("ω{k} - ω{}", k - 1)));
            }
            out.push(parse(&format!("-ω{}", n - 1)));
            out
        }
        Family::Sp => {
            let n = spec.n as usize;
            let mut out = vec![parse("ω1"), parse("-ω1")];
            for k in 2..=n {
                out.push(parse(&format!("ω{k} - ω{}", k - 1)));
                out.push(parse(&format!("ω{} - ω{k}", k - 1)));
            }
            out
        }
        Family::E6 => ["ω6", "ω5 - ω6", "ω4 - ω5", "ω2 + ω3 - ω4", "ω1 + ω2 - ω3", "ω2 - ω1"]
            .iter()
            .map(|s| parse(s))
            .collect(),
        Family::E7 => ["ω7", "ω6 - ω7", "ω5 - ω6", "ω4 - ω5", "ω2 + ω3 - ω4", "ω1 + ω2 - ω3", "ω2 - ω1"]
            .iter()
            .map(|s| parse(s))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(m: &IntMatrix) -> Vec<Vec<i64>> {
        (0..m.rows).map(|i| m.row(i).iter().map(|x| i64::try_from(x).unwrap()).collect()).collect()
    }

    #[test]
    fn small_cartan_matrices() {
        assert_eq!(rows(&cartan_matrix(&GroupSpec::su(2).unwrap())), vec![vec![2]]);
        assert_eq!(rows(&cartan_matrix(&GroupSpec::su(3).unwrap())), vec![vec![2, -1], vec![-1, 2]]);
        assert_eq!(rows(&cartan_matrix(&GroupSpec::sp(2).unwrap())), vec![vec![2, -1], vec![-2, 2]]);
    }

    #[test]
    fn determinants_are_center_orders() {
        let specs = [
            GroupSpec::su(5).unwrap(),
            GroupSpec::sp(4).unwrap(),
            GroupSpec::e6(),
            GroupSpec::e7(),
        ];
        for s in specs {
            assert_eq!(cartan_matrix(&s).determinant(), BigInt::from(s.center_order()), "{s}");
        }
    }

    #[test]
    fn cartan_shape() {
        for s in [GroupSpec::e6(), GroupSpec::e7(), GroupSpec::sp(3).unwrap()] {
            let a = cartan_matrix(&s);
            for i in 0..a.rows {
                for j in 0..a.cols {
                    let x = i64::try_from(a.get(i, j)).unwrap();
                    if i == j {
                        assert_eq!(x, 2);
                    } else {
                        assert!(x <= 0);
                    }
                }
            }
        }
    }

    #[test]
    fn psu3_transgression() {
        let t = transgression(&GroupSpec::psu(3).unwrap(), false).unwrap();
        assert_eq!(t.images[0].to_string(), "2·ω1 - ω2");
        assert_eq!(t.images[1].to_string(), "-ω1 + 2·ω2");
        let s = transgression(&GroupSpec::su(4).unwrap(), false).unwrap();
        for (i, im) in s.images.iter().enumerate() {
            assert_eq!(im.to_string(), format!("ω{}", i + 1));
        }
        let e = transgression(&GroupSpec::pe7(), true).unwrap();
        assert_eq!(e.images.last().unwrap().to_string(), "ω2");
        assert!(transgression(&GroupSpec::e7(), true).is_err());
    }

    #[test]
    fn omega_sets() {
        let s: Vec<String> = omega_set(&GroupSpec::su(3).unwrap()).iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["ω1", "-ω1 + ω2", "-ω2"]);
        let s: Vec<String> = omega_set(&GroupSpec::sp(1).unwrap()).iter().map(|p| p.to_string()).collect();
        assert_eq!(s, vec!["ω1", "-ω1"]);
        assert_eq!(omega_set(&GroupSpec::e6()).len(), 6);
        assert_eq!(omega_set(&GroupSpec::e7()).len(), 7);
        assert_eq!(omega_set(&GroupSpec::sp(3).unwrap()).len(), 6);
    }

    #[test]
    fn group_names() {
        assert_eq!(parse_group_name("PSp").unwrap(), (Family::Sp, Lattice::Adjoint));
        assert_eq!(parse_group_name("e7").unwrap(), (Family::E7, Lattice::SimplyConnected));
        assert!(parse_group_name("G2").is_err());
        assert_eq!(GroupSpec::pe6().to_string(), "PE6");
    }
}
