//! Stored reference values: characteristic polynomials, derivatives,
//! Bockstein and Steenrod values, E₃^{*,0} presentations and the curated
//! exceptional-group data. Polynomials are kept as text and parsed on demand;
//! `ϖ` stands for the surviving class of the adjoint group, renamed to the
//! restriction's variable when parsed.
//!
//! SU/Sp rows are formulas in n; E₆/E₇ rows are literal.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::arith::{binomial, inv_mod, mod_u32, pow_u64, split_prime_power};
use crate::error::{Error, Result};
use crate::poly::{CoeffRing, Context, Poly};
use crate::roots::Family;

/// Parses `text` after substituting `ϖ` by `varpi`.
pub fn parse_with(ctx: &Context, ring: CoeffRing, text: &str, varpi: &str) -> Result<Poly> {
    Poly::parse(ctx, ring, &text.replace('ϖ', varpi))
}

fn prime_power_part(n: u32, p: u32) -> (u32, u64) {
    split_prime_power(n as u64, p as u64)
}

fn check_pair(family: Family, n: u32, p: u32) -> Result<()> {
    let ok = match family {
        Family::SU => n >= 2 && n % p == 0,
        Family::Sp => p == 2,
        Family::E6 => p == 3,
        Family::E7 => p == 2,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Precondition(format!("({family:?}({n}), {p}) is not a torsion pair")))
    }
}

/// D(G,p): half-degrees of the mod-p characteristic polynomials.
pub fn degree_set_mod_p(family: Family, n: u32, p: u32) -> Result<Vec<u32>> {
    check_pair(family, n, p)?;
    Ok(match family {
        Family::SU => (2..=n).collect(),
        Family::Sp => (1..=n).map(|k| 2 * k).collect(),
        Family::E6 => vec![2, 4, 5, 6, 8, 9],
        Family::E7 => vec![2, 3, 5, 8, 9, 12, 14],
    })
}

/// D(G): half-degrees of the integral characteristic polynomials.
pub fn degree_set_integral(family: Family, n: u32) -> Vec<u32> {
    match family {
        Family::SU => (2..=n).collect(),
        Family::Sp => (1..=n).map(|k| 2 * k).collect(),
        Family::E6 => vec![2, 5, 6, 8, 9, 12],
        Family::E7 => vec![2, 6, 8, 10, 12, 14, 18],
    }
}

/// h(G): the excluded half-degree, p^r, 2^{r+1}, 9, 2.
pub fn h_value(family: Family, n: u32, p: u32) -> Result<u32> {
    check_pair(family, n, p)?;
    Ok(match family {
        Family::SU => pow_u64(p as u64, prime_power_part(n, p).0) as u32,
        Family::Sp => 2 * pow_u64(2, prime_power_part(n, 2).0) as u32,
        Family::E6 => 9,
        Family::E7 => 2,
    })
}

/// D(PG,p) = D(G,p) without h(G).
pub fn degree_set_adjoint(family: Family, n: u32, p: u32) -> Result<Vec<u32>> {
    let h = h_value(family, n, p)?;
    Ok(degree_set_mod_p(family, n, p)?.into_iter().filter(|&s| s != h).collect())
}

// ------------------------------------------------------------ mod-p tables

const E6_MOD3: [&str; 6] =
    ["ω2^2 - c2", "c2^2 - c4", "c5 + c2 c3", "c6 - c2 c4 - c3^2", "-c3 c5 - c2 c6", "c6 c3"];

const E7_MOD2: [&str; 7] = [
    "c2",
    "c3",
    "c5 + ω2 c4",
    "c4^2 + ω2^2 c6 + ω2^3 c5 + ω2^8",
    "ω2^2 c7 + ω2^3 c6",
    "c6^2 + c4^3",
    "c7^2 + c4^2 c6 + ω2^2 c6^2",
];

/// S_p(G): primary characteristic polynomials over 𝔽ₚ, Chern-model text.
pub fn mod_p_char_polys(family: Family, n: u32, p: u32) -> Result<Vec<String>> {
    check_pair(family, n, p)?;
    Ok(match family {
        Family::SU => (2..=n).map(|k| format!("c{k}")).collect(),
        Family::Sp => (1..=n).map(|k| format!("c{}", 2 * k)).collect(),
        Family::E6 => E6_MOD3.iter().map(|s| s.to_string()).collect(),
        Family::E7 => E7_MOD2.iter().map(|s| s.to_string()).collect(),
    })
}

/// ∂P/∂ϖ for P ∈ S_p(G), in 𝔽ₚ[ϖ].
pub fn mod_p_derivatives(family: Family, n: u32, p: u32) -> Result<Vec<String>> {
    check_pair(family, n, p)?;
    let pb = BigInt::from(p);
    let red = |c: BigInt| c.mod_floor(&pb);
    Ok(match family {
        Family::SU => (2..=n).map(|k| format!("{}ϖ^{}", red(binomial(n as u64, k as u64)), k - 1)).collect(),
        Family::Sp => (1..=n).map(|k| format!("{}ϖ^{}", red(binomial(n as u64, k as u64)), 2 * k - 1)).collect(),
        Family::E6 => ["0", "0", "0", "0", "0", "ϖ^8"].iter().map(|s| s.to_string()).collect(),
        Family::E7 => ["ϖ", "ϖ^2", "0", "0", "0", "0", "ϖ^13"].iter().map(|s| s.to_string()).collect(),
    })
}

/// Least positive t with t·C(n, m) ≡ C(n, k) mod p.
pub fn least_t(n: u32, m: u32, k: u32, p: u32) -> u32 {
    let a = mod_u32(&binomial(n as u64, m as u64), p);
    let b = mod_u32(&binomial(n as u64, k as u64), p);
    let t = (b as u64 * inv_mod(a, p) as u64 % p as u64) as u32;
    if t == 0 {
        p
    } else {
        t
    }
}

const E6_LIFTED: [&str; 5] = ["ω2^2 - c2", "c2^2 - c4", "c5 + c2 c3", "c6 - c2 c4 - c3^2", "-c3 c5 - c2 c6"];

const E7_LIFTED: [&str; 6] = [
    "c3 - c2 ω2",
    "c5 + ω2 c4",
    "c4^2 + ω2^2 c6 + ω2^3 c5 + ω2^8",
    "ω2^2 c7 + ω2^3 c6",
    "c6^2 + c4^3",
    "c7^2 + c4^2 c6 + ω2^2 c6^2 - c2 ω2^12",
];

/// S_p(PG): the lifted set, one entry per s ∈ D(PG,p), with s.
///
/// These are the enclosed integral polynomials H of (H)ₚ; the Bockstein
/// uses them as integral lifts.
pub fn lifted_char_polys(family: Family, n: u32, p: u32) -> Result<Vec<(u32, String)>> {
    check_pair(family, n, p)?;
    let ds = degree_set_adjoint(family, n, p)?;
    Ok(match family {
        Family::SU => {
            let pr = h_value(family, n, p)?;
            ds.into_iter()
                .map(|k| {
                    if k < pr {
                        (k, format!("c{k}"))
                    } else {
                        (k, format!("c{k} - {}c{pr} ω1^{}", least_t(n, pr, k, p), k - pr))
                    }
                })
                .collect()
        }
        Family::Sp => {
            // half-degree s = 2k; the excluded entry is k = 2^r
            let two_r = pow_u64(2, prime_power_part(n, 2).0) as u32;
            ds.into_iter()
                .map(|s| {
                    let k = s / 2;
                    if k < two_r {
                        (s, format!("c{s}"))
                    } else {
                        (s, format!("c{s} - {}c{} ω1^{}", least_t(n, two_r, k, 2), 2 * two_r, 2 * (k - two_r)))
                    }
                })
                .collect()
        }
        Family::E6 => ds.into_iter().zip(E6_LIFTED).map(|(s, t)| (s, t.to_string())).collect(),
        Family::E7 => ds.into_iter().zip(E7_LIFTED).map(|(s, t)| (s, t.to_string())).collect(),
    })
}

// ------------------------------------------------------------ integral tables

/// One entry of S(G): `multiplier·R_main − subtract·R_sub`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recipe {
    pub main: String,
    pub multiplier: i64,
    pub subtract: Option<(String, String)>,
}

impl Recipe {
    fn plain(main: &str) -> Self {
        Recipe { main: main.into(), multiplier: 1, subtract: None }
    }
    fn combo(m: i64, main: &str, factor: &str, sub: &str) -> Self {
        Recipe { main: main.into(), multiplier: m, subtract: Some((factor.into(), sub.into())) }
    }
}

impl std::fmt::Display for Recipe {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.multiplier != 1 {
            write!(f, "{}", self.multiplier)?;
        }
        write!(f, "{}", self.main)?;
        if let Some((x, r)) = &self.subtract {
            write!(f, " - {x}·{r}")?;
        }
        Ok(())
    }
}

/// S(G) as recipes over the Chern-model relations (labelled c_k for SU/Sp).
pub fn integral_recipes(family: Family, n: u32) -> Vec<Recipe> {
    match family {
        Family::SU => (2..=n).map(|k| Recipe::plain(&format!("c{k}"))).collect(),
        Family::Sp => (1..=n).map(|k| Recipe::plain(&format!("c{}", 2 * k))).collect(),
        Family::E6 => vec![
            Recipe::plain("R2"),
            Recipe::plain("R5"),
            Recipe::combo(2, "R6", "x3", "R3"),
            Recipe::plain("R8"),
            Recipe::plain("R9"),
            Recipe::combo(3, "R12", "x4^2", "R4"),
        ],
        Family::E7 => vec![
            Recipe::plain("R2"),
            Recipe::combo(2, "R6", "x3", "R3"),
            Recipe::plain("R8"),
            Recipe::combo(2, "R10", "x5", "R5"),
            Recipe::combo(3, "R12", "x4^2", "R4"),
            Recipe::plain("R14"),
            Recipe::combo(2, "R18", "x9", "R9"),
        ],
    }
}

/// ∂P/∂ϖ for P ∈ S(G), integral, over ℤ[ϖ, x].
pub fn integral_derivatives(family: Family, n: u32) -> Vec<String> {
    match family {
        Family::SU => (2..=n).map(|s| format!("{}ϖ^{}", binomial(n as u64, s as u64), s - 1)).collect(),
        Family::Sp => (1..=n).map(|s| format!("{}ϖ^{}", binomial(n as u64, s as u64), 2 * s - 1)).collect(),
        Family::E6 => ["0", "0", "0", "0", "ϖ^8", "0"].iter().map(|s| s.to_string()).collect(),
        // the printed y's are the x's of the flag presentation
        Family::E7 => [
            "ϖ",
            "ϖ^2 x3",
            "ϖ^2 x5",
            "0",
            "ϖ^2 (x9 + x4 x5 + x4 ϖ^5)",
            "ϖ^9 (x4 + ϖ^4)",
            "0",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect(),
    }
}

// ------------------------------------------------------------ E₃^{*,0}(PG)

/// The stored presentation of E₃^{*,0}(PG) over ℤ: generators and relations.
pub fn e3_presentation(family: Family, n: u32) -> (Vec<(String, u32)>, Vec<String>) {
    let u = ("ϖ".to_string(), 2);
    match family {
        Family::SU => {
            let rels = (1..=n)
                .map(|r| {
                    let b = (1..=r as u64).fold(BigInt::zero(), |g, k| g.gcd(&binomial(n as u64, k)));
                    format!("{b}ϖ^{r}")
                })
                .collect();
            (vec![u], rels)
        }
        Family::Sp => {
            let r = prime_power_part(n, 2).0;
            (vec![u], vec!["2ϖ".into(), format!("ϖ^{}", pow_u64(2, r + 1))])
        }
        Family::E6 => (
            vec![u, ("x3".into(), 6), ("x4".into(), 8)],
            ["3ϖ", "2(x3 + ϖ^3)", "3x4", "(x3 + ϖ^3)^2", "ϖ^9", "x4^3"].iter().map(|s| s.to_string()).collect(),
        ),
        // printed with x6 in place of x5
        Family::E7 => (
            vec![u, ("x3".into(), 6), ("x4".into(), 8), ("x5".into(), 10), ("x9".into(), 18)],
            ["2ϖ", "ϖ^2", "2x3", "3x4", "2x5", "2x9", "x3^2", "x4^3", "x5^2", "x9^2"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
        ),
    }
}

// ------------------------------------------------------------ Bockstein, Sq

/// βₚ(ζ_{2s−1}) for s ∈ D(PG,p), as integral text over ℤ[ϖ, x].
///
/// For SU(n) with n not a power of p the value is meaningful p-locally
/// (compare up to a p-local unit).
pub fn bockstein_values(family: Family, n: u32, p: u32) -> Result<Vec<(u32, String)>> {
    let ds = degree_set_adjoint(family, n, p)?;
    Ok(match family {
        Family::SU => {
            let (r, _) = prime_power_part(n, p);
            ds.into_iter()
                .map(|s| {
                    let t = (0..r).find(|&t| pow_u64(p as u64, t) == s as u64);
                    match t {
                        Some(t) => (s, format!("-{}ϖ^{}", pow_u64(p as u64, r - t - 1), s)),
                        None => (s, "0".into()),
                    }
                })
                .collect()
        }
        Family::Sp => {
            let r = prime_power_part(n, 2).0;
            ds.into_iter()
                .map(|half| {
                    let s = half / 2;
                    if r >= 1 && s == pow_u64(2, r - 1) as u32 {
                        (half, format!("ϖ^{}", pow_u64(2, r)))
                    } else {
                        (half, "0".into())
                    }
                })
                .collect()
        }
        Family::E6 => ds.into_iter().zip(["0", "-x4", "0", "0", "-x4^2"]).map(|(s, v)| (s, v.into())).collect(),
        Family::E7 => ds
            .into_iter()
            .zip(["x3", "x5", "x3 x5", "x9", "x3 x9", "x5 x9"])
            .map(|(s, v)| (s, v.into()))
            .collect(),
    })
}

/// Steenrod values: (s, k, result) meaning Sq^k ζ_{2s−1} = ζ_{result}
/// (None = 0). The symplectic row uses Sq^{4s−4}ζ_{4s−1} = ζ_{8s−5}, which
/// is what the Wu formula gives on c_{2s}.
pub fn steenrod_values(family: Family, n: u32) -> Vec<(u32, u32, Option<u32>)> {
    match family {
        Family::SU => {
            let r = prime_power_part(n, 2).0;
            if r == 0 {
                return Vec::new();
            }
            let bound = pow_u64(2, r - 1) as u32;
            (2..=n).filter(|&s| 2 * s - 1 <= bound).map(|s| (s, 2 * s - 2, Some(4 * s - 3))).collect()
        }
        Family::Sp => {
            let r = prime_power_part(n, 2).0;
            let bound = pow_u64(2, r) as u32;
            // ζ_{4s−1} has half-degree 2s
            (1..=n).filter(|&s| 4 * s - 1 <= bound && s >= 2).map(|s| (2 * s, 4 * s - 4, Some(8 * s - 5))).collect()
        }
        Family::E6 => Vec::new(),
        Family::E7 => vec![
            (3, 4, Some(9)),
            (5, 8, Some(17)),
            (8, 14, None),
            (9, 16, None),
            (12, 22, None),
            (14, 26, None),
        ],
    }
}

// ------------------------------------------------------------ mod-p rings

/// An odd generator of a stored ring: name, degree, square (text; "0" for Λ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StoredOdd {
    pub name: String,
    pub degree: u32,
    pub square: Option<String>,
}

/// The stored shape of H*(PG;𝔽ₚ): polynomial part relations over
/// 𝔽ₚ[ϖ, x…] and the odd generators with squares (None = Λ).
pub fn mod_p_ring_shape(family: Family, n: u32, p: u32) -> Result<(Vec<(String, u32)>, Vec<String>, Vec<StoredOdd>)> {
    check_pair(family, n, p)?;
    let odd = |name: String, degree: u32, square: Option<&str>| StoredOdd { name, degree, square: square.map(String::from) };
    let zetas = |s: &[u32]| s.iter().map(|&s| odd(format!("ζ{}", 2 * s - 1), 2 * s - 1, None)).collect::<Vec<_>>();
    let u = ("ϖ".to_string(), 2);
    Ok(match family {
        Family::SU => {
            let r = prime_power_part(n, p).0;
            let pr = pow_u64(p as u64, r) as u32;
            let iota_sq = if p == 2 && r == 1 { Some("ϖ") } else { None };
            let s: Vec<u32> = (2..=n).filter(|&s| s != pr).collect();
            let mut gens = vec![odd("ι".into(), 1, iota_sq)];
            gens.extend(zetas(&s));
            (vec![u], vec![format!("ϖ^{pr}")], gens)
        }
        Family::Sp => {
            let r = prime_power_part(n, 2).0;
            let h = 2 * pow_u64(2, r) as u32;
            let s: Vec<u32> = (1..=n).map(|k| 2 * k).filter(|&s| s != h).collect();
            let mut gens = vec![odd("ι".into(), 1, Some("ϖ"))];
            gens.extend(zetas(&s));
            (vec![u], vec![format!("ϖ^{h}")], gens)
        }
        Family::E6 => {
            let mut gens = vec![odd("ι".into(), 1, None)];
            gens.extend(zetas(&[2, 4, 5, 6, 8]));
            (vec![u, ("x4".into(), 8)], vec!["ϖ^9".into(), "x4^3".into()], gens)
        }
        Family::E7 => {
            let gens = vec![
                odd("ι".into(), 1, Some("ϖ")),
                odd("ζ5".into(), 5, Some("x5")),
                odd("ζ9".into(), 9, Some("x9")),
                odd("ζ15".into(), 15, None),
                odd("ζ17".into(), 17, None),
                odd("ζ23".into(), 23, None),
                odd("ζ27".into(), 27, None),
            ];
            (
                vec![u, ("x3".into(), 6), ("x5".into(), 10), ("x9".into(), 18)],
                ["ϖ^2", "x3^2", "x5^2", "x9^2"].iter().map(|s| s.to_string()).collect(),
                gens,
            )
        }
    })
}

// ------------------------------------------------------------ Bockstein complexes

/// Data of a Bockstein complex: even generators with truncation relations,
/// odd generators with squares (None = 0), δ on generators, and how each ς
/// is built from ζ's (coefficient polynomial, ζ label).
#[derive(Clone, Debug)]
pub struct ComplexData {
    pub p: u32,
    pub even: Vec<(String, u32)>,
    pub even_relations: Vec<String>,
    pub odd: Vec<StoredOdd>,
    pub delta: Vec<(String, String)>,
    pub sigma_from_zeta: Vec<(String, Vec<(String, String)>)>,
    pub expected_total: usize,
}

pub fn complex_data(family: Family) -> Result<ComplexData> {
    let odd = |name: &str, degree: u32, square: Option<&str>| StoredOdd {
        name: name.into(),
        degree,
        square: square.map(String::from),
    };
    let pair = |a: &str, b: &str| (a.to_string(), b.to_string());
    match family {
        Family::E6 => Ok(ComplexData {
            p: 3,
            even: vec![("ω".into(), 2), ("x4".into(), 8)],
            even_relations: vec!["ω^9".into(), "x4^3".into()],
            odd: vec![
                odd("ς1", 1, None),
                odd("ς3", 3, None),
                odd("ς7", 7, None),
                odd("ς9", 9, None),
                odd("ς11", 11, None),
                odd("ς15", 15, None),
            ],
            delta: vec![pair("ς1", "ω"), pair("ς7", "x4")],
            sigma_from_zeta: vec![
                ("ς1".into(), vec![pair("1", "ι")]),
                ("ς3".into(), vec![pair("1", "ζ3")]),
                ("ς7".into(), vec![pair("1", "ζ7")]),
                ("ς9".into(), vec![pair("1", "ζ9")]),
                ("ς11".into(), vec![pair("1", "ζ11")]),
                ("ς15".into(), vec![pair("1", "ζ15"), pair("-x4", "ζ7")]),
            ],
            expected_total: 64,
        }),
        Family::E7 => Ok(ComplexData {
            p: 2,
            even: vec![("ω".into(), 2), ("x3".into(), 6), ("x5".into(), 10), ("x9".into(), 18)],
            even_relations: ["ω^2", "x3^2", "x5^2", "x9^2"].iter().map(|s| s.to_string()).collect(),
            odd: vec![
                odd("ς1", 1, Some("ω")),
                odd("ς5", 5, Some("x5")),
                odd("ς9", 9, Some("x9")),
                odd("ς15", 15, None),
                odd("ς17", 17, None),
                odd("ς23", 23, None),
                odd("ς27", 27, None),
            ],
            delta: vec![pair("ς1", "ω"), pair("ς5", "x3"), pair("ς9", "x5"), pair("ς17", "x9")],
            sigma_from_zeta: vec![
                ("ς1".into(), vec![pair("1", "ι")]),
                ("ς5".into(), vec![pair("1", "ζ5")]),
                ("ς9".into(), vec![pair("1", "ζ9")]),
                ("ς15".into(), vec![pair("1", "ζ15"), pair("x3", "ζ9")]),
                ("ς17".into(), vec![pair("1", "ζ17")]),
                ("ς23".into(), vec![pair("1", "ζ23"), pair("x3", "ζ17")]),
                ("ς27".into(), vec![pair("1", "ζ27"), pair("x5", "ζ17")]),
            ],
            expected_total: 128,
        }),
        _ => Err(Error::Unsupported("Bockstein complexes are stored for E6 and E7".into())),
    }
}

// ------------------------------------------------------------ exceptional integral rings

/// Curated integral data for PE₆/PE₇.
#[derive(Clone, Debug)]
pub struct ExceptionalData {
    /// Free part: odd degrees, with squares (text) for the Δ ones.
    pub free: Vec<StoredOdd>,
    /// (p, presentation text) of the torsion components.
    pub torsion: Vec<(u32, String)>,
    pub action_relations: Vec<String>,
    /// (s, a_s): the nontrivial orders of the free generators.
    pub orders: Vec<(u32, u32)>,
}

pub fn exceptional_data(family: Family) -> Result<ExceptionalData> {
    let rho = |d: u32, sq: Option<&str>| StoredOdd { name: format!("ρ{d}"), degree: d, square: sq.map(String::from) };
    match family {
        Family::E6 => Ok(ExceptionalData {
            free: vec![rho(3, Some("x3")), rho(9, None), rho(11, None), rho(15, None), rho(17, None), rho(23, None)],
            torsion: vec![
                (2, "F2[x3]^+/<x3^2> ⊗ Δ(ρ3) ⊗ Λ(ρ9, ρ15, ρ17, ρ23)".into()),
                (3, "F3[ω, x4, C14]^+ ⊗ Λ(ρ3, ρ9, ρ11, ρ15, ρ17)/<ω^9, x4^3, ω ρ17, C14^2, ω^8 x4^2 C14>".into()),
            ],
            action_relations: ["ρ3^2 = x3", "x3 ρ11 = 0", "x4 ρ23 = 0", "ω ρ23 = x4^2 C14", "C14 ρ23 = 0"]
                .iter()
                .map(|s| s.to_string())
                .collect(),
            orders: vec![(9, 3)],
        }),
        Family::E7 => Ok(ExceptionalData {
            free: [3, 11, 15, 19, 23, 27, 35].iter().map(|&d| rho(d, None)).collect(),
            torsion: vec![
                (2, "Im δ2 of the E7 complex ⊗ Λ(ρ15, ρ23, ρ27)".into()),
                (3, "F3[x4]^+/<x4^3> ⊗ Λ(ρ3, ρ11, ρ15, ρ19, ρ27, ρ35)".into()),
            ],
            action_relations: [
                "x4 ρ23 = 0",
                "ρ3 C_K = 0 if 2 ∈ K, else x1 C_{K∪{2}}",
                "ρ11 C_K = 0 if 6 ∈ K, else x3 C_{K∪{6}}",
                "ρ19 C_K = 0 if 10 ∈ K, else x5 C_{K∪{10}}",
                "ρ35 C_K = 0 if 18 ∈ K, else x9 C_{K∪{18}}",
            ]
            .iter()
            .map(|s| s.to_string())
            .collect(),
            orders: vec![(2, 2)],
        }),
        _ => Err(Error::Unsupported("curated integral data exists for E6 and E7".into())),
    }
}

/// θ(γ) values for E₆/E₇: (s, value text over ϖ), nonzero ones only.
pub fn exceptional_theta(family: Family) -> Vec<(u32, String)> {
    match family {
        Family::E6 => vec![(9, "ϖ^8".into())],
        Family::E7 => vec![(2, "ϖ".into())],
        _ => Vec::new(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sets_and_h() {
        assert_eq!(degree_set_adjoint(Family::SU, 6, 3).unwrap(), vec![2, 4, 5, 6]);
        assert_eq!(h_value(Family::Sp, 2, 2).unwrap(), 4);
        assert_eq!(degree_set_adjoint(Family::Sp, 2, 2).unwrap(), vec![2]);
        assert_eq!(h_value(Family::SU, 12, 2).unwrap(), 4);
        assert!(h_value(Family::SU, 5, 2).is_err());
    }

    #[test]
    fn su_lifted_entries() {
        // n = 6, p = 3: t·C(6,3) ≡ C(6,k) mod 3 with C(6,3) = 20 ≡ 2
        let l = lifted_char_polys(Family::SU, 6, 3).unwrap();
        assert_eq!(l[0], (2, "c2".to_string()));
        // C(6,4) = 15 ≡ 0, so t = p (least positive)
        assert_eq!(l[1], (4, "c4 - 3c3 ω1^1".to_string()));
        // C(6,5) = 6 ≡ 0 again
        assert_eq!(l[2].0, 5);
    }

    #[test]
    fn bockstein_su_formula() {
        let b = bockstein_values(Family::SU, 8, 2).unwrap();
        assert_eq!(b[0], (2, "-2ϖ^2".to_string()));
        assert_eq!(b[2], (4, "-1ϖ^4".to_string()));
        assert_eq!(b[1], (3, "0".to_string()));
    }

    #[test]
    fn steenrod_rows() {
        assert_eq!(steenrod_values(Family::SU, 8), vec![(2, 2, Some(5))]);
        assert!(steenrod_values(Family::SU, 4).is_empty());
        assert_eq!(steenrod_values(Family::Sp, 8), vec![(4, 4, Some(11))]);
    }
}
