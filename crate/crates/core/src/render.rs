//! Output documents for the command-line front end.
//!
//! Every builder returns a [`Document`] holding the three renderings; the
//! JSON form is wrapped in an envelope carrying [`SCHEMA`] and the command
//! name. Output is a pure function of the inputs: maps are ordered and no
//! timing or host data leaks into documents except in `verify`.

use std::fmt::Write as _;
use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::assembler::{self, CohomologyRing, PolyRing};
use crate::binomial;
use crate::error::{Error, Result};
use crate::flag::{e3_base_presentation, flag_presentation};
use crate::koszul::{koszul_homology, total_series};
use crate::poly::{latex_name, CoeffRing};
use crate::roots::{cartan_matrix, parse_group_name, transgression, Family, GroupSpec};
use crate::verify;

pub const SCHEMA: &str = "flagcoh/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "text" | "txt" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "latex" | "tex" => Ok(Format::Latex),
            _ => Err(Error::Unsupported(format!("format {s}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub command: String,
    pub payload: Value,
    pub text: String,
    pub latex: String,
}

impl Document {
    fn new(command: &str, payload: Value, text: String, latex: String) -> Self {
        Document { command: command.into(), payload, text, latex }
    }

    pub fn json(&self) -> Value {
        json!({ "schema": SCHEMA, "command": self.command, "result": self.payload })
    }

    /// Final bytes, newline-terminated.
    pub fn render(&self, format: Format) -> String {
        let mut s = match format {
            Format::Text => self.text.clone(),
            Format::Json => serde_json::to_string_pretty(&self.json()).expect("serializable"),
            Format::Latex => self.latex.clone(),
        };
        if !s.ends_with('\n') {
            s.push('\n');
        }
        s
    }
}

/// One-line reason for a failed command, `error kind=<token> msg=<text>`.
pub fn error_line(e: &Error) -> String {
    format!("error kind={} msg={}", e.kind(), e.to_string().replace('\n', " "))
}

/// `PSU` + n → spec. Exceptional families ignore `n`.
pub fn group(name: &str, n: Option<u32>) -> Result<GroupSpec> {
    let (family, lattice) = parse_group_name(name)?;
    let n = match family {
        Family::E6 => 6,
        Family::E7 => 7,
        _ => n.ok_or_else(|| Error::Precondition(format!("{name} needs --n")))?,
    };
    GroupSpec::new(family, n, lattice)
}

fn ring_of(prime: Option<u32>) -> Result<CoeffRing> {
    match prime {
        None => Ok(CoeffRing::Integers),
        Some(p) if crate::arith::is_prime(p as u64) => Ok(CoeffRing::Prime(p)),
        Some(p) => Err(Error::Range(format!("{p} is not prime"))),
    }
}

fn latex_matrix(rows: &[Vec<String>]) -> String {
    let body: Vec<String> = rows.iter().map(|r| r.join(" & ")).collect();
    format!("\\begin{{pmatrix}} {} \\end{{pmatrix}}", body.join(" \\\\ "))
}

fn latex_group(spec: &GroupSpec) -> String {
    spec.to_string().replace("Sp", "\\mathrm{Sp}").replace("SU", "\\mathrm{SU}").replace('E', "E_")
}

// ------------------------------------------------------------ commands

pub fn cartan(spec: &GroupSpec) -> Document {
    let m = cartan_matrix(spec);
    let rows: Vec<Vec<String>> = (0..spec.rank()).map(|i| m.row(i).iter().map(|x| x.to_string()).collect()).collect();
    let text = format!(
        "Cartan matrix of {spec} (rank {}, center order {}):\n{}",
        spec.rank(),
        spec.center_order(),
        rows.iter().map(|r| format!("  [{}]", r.join(", "))).collect::<Vec<_>>().join("\n")
    );
    let payload = json!({ "group": spec.to_string(), "rank": spec.rank(), "matrix": rows, "determinant": m.determinant().to_string() });
    Document::new("cartan", payload, text, format!("C({}) = {}", latex_group(spec), latex_matrix(&rows)))
}

pub fn transgression_doc(spec: &GroupSpec, with_circle: bool) -> Result<Document> {
    let t = transgression(spec, with_circle)?;
    let mut text = format!("Transgression of {spec}:\n");
    for (f, im) in t.fiber_names.iter().zip(&t.images) {
        let _ = writeln!(text, "  τ({f}) = {im}");
    }
    if let Some(v) = &t.varpi {
        let _ = writeln!(text, "  ϖ = {v}");
    }
    let latex: Vec<String> =
        t.fiber_names.iter().zip(&t.images).map(|(f, im)| format!("\\tau({}) = {}", latex_name(f).trim_end(), im.to_latex())).collect();
    Ok(Document::new("transgression", t.to_json(), text, latex.join(",\\quad ")))
}

pub fn flag_doc(spec: &GroupSpec) -> Result<Document> {
    let pres = flag_presentation(spec)?;
    let text = format!("H*({spec}/T) = {}", pres.to_text());
    let latex = format!("H^*({}/T) = {}", latex_group(spec), pres.to_latex());
    let mut payload = pres.to_json();
    payload["group"] = Value::from(spec.to_string());
    Ok(Document::new("flag", payload, text, latex))
}

pub fn e3_base(spec: &GroupSpec, max_degree: u32, prime: Option<u32>) -> Result<Document> {
    let ring = ring_of(prime)?;
    let pres = e3_base_presentation(spec, ring)?;
    let groups = pres.quotient()?.groups(max_degree)?;
    let nontrivial: Vec<Value> = groups
        .degrees
        .iter()
        .filter(|(d, p)| **d > 0 && !p.is_trivial())
        .map(|(d, p)| {
            json!({
                "degree": d,
                "free": p.free,
                "torsion": p.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
                "order": if p.free == 0 { Value::from(p.torsion.iter().product::<BigInt>().to_string()) } else { Value::Null },
            })
        })
        .collect();
    let payload = json!({
        "group": spec.to_string(),
        "max_degree": max_degree,
        "presentation": pres.to_json(),
        "groups": nontrivial,
    });
    let text = format!("E3^(*,0)({spec}) = {}\n{groups}", pres.to_text());
    let latex = format!("E_3^{{*,0}}({}) = {}", latex_group(spec), pres.to_latex());
    Ok(Document::new("e3-base", payload, text, latex))
}

pub fn koszul(spec: &GroupSpec, max_degree: u32, prime: Option<u32>) -> Result<Document> {
    let ring = ring_of(prime)?;
    let pres = flag_presentation(spec)?;
    let tau = transgression(spec, false)?;
    let h = koszul_homology(&pres, &tau, max_degree, ring)?;
    let series = total_series(&h, max_degree);
    let cells: Vec<Value> = h
        .iter()
        .filter(|(_, g)| g.degrees.values().any(|p| !p.is_trivial()))
        .map(|((b, f), g)| {
            let p = &g.degrees[&(b + f)];
            json!({ "base": b, "fiber": f, "free": p.free, "torsion": p.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>() })
        })
        .collect();
    let mut text = format!("Koszul homology of {spec} over {ring} through degree {max_degree}:\n");
    for ((b, f), g) in &h {
        let p = &g.degrees[&(b + f)];
        if !p.is_trivial() {
            let _ = writeln!(text, "  E3^({b},{f}): {g}");
        }
    }
    let _ = write!(text, "  total series: {series:?}");
    let payload = json!({ "group": spec.to_string(), "ring": ring.label(), "cells": cells, "total_series": series });
    let latex = format!(
        "P_{{{}}}(t) = {}",
        latex_group(spec),
        series_latex(&series)
    );
    Ok(Document::new("koszul", payload, text, latex))
}

fn series_latex(s: &[usize]) -> String {
    let terms: Vec<String> = s
        .iter()
        .enumerate()
        .filter(|(_, c)| **c > 0)
        .map(|(d, c)| match (d, c) {
            (0, c) => c.to_string(),
            (d, 1) => format!("t^{{{d}}}"),
            (d, c) => format!("{c}t^{{{d}}}"),
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

pub fn charpolys(spec: &GroupSpec, prime: Option<u32>) -> Result<Document> {
    let ring = match prime {
        Some(p) => PolyRing::ModP(p),
        None => PolyRing::Integral,
    };
    let set = assembler::char_polys(spec, ring)?;
    let mut text = format!("Characteristic polynomials of {spec}:\n");
    for e in &set.entries {
        let _ = writeln!(text, "  {} (deg {}): {}", e.label, e.degree, e.characteristic_polynomial);
    }
    for c in &set.certificates {
        let _ = writeln!(text, "  . {c}");
    }
    let latex: Vec<String> =
        set.entries.iter().map(|e| format!("{} &: {}", latex_name(&e.label).trim_end(), e.characteristic_polynomial.to_latex())).collect();
    Ok(Document::new(
        "charpolys",
        set.to_json(),
        text.trim_end().to_string(),
        format!("\\begin{{aligned}} {} \\end{{aligned}}", latex.join(" \\\\ ")),
    ))
}

fn ring_doc(command: &str, ring: CohomologyRing) -> Result<Document> {
    Ok(Document::new(command, ring.to_json(), ring.to_text(), ring.to_latex()))
}

pub fn modp(spec: &GroupSpec, p: u32) -> Result<Document> {
    ring_doc("modp", assembler::mod_p_ring(spec, p)?)
}

pub fn integral(spec: &GroupSpec) -> Result<Document> {
    let ring = match spec.family {
        Family::SU | Family::Sp => assembler::integral_ring(spec)?,
        Family::E6 | Family::E7 => assembler::adjoint_exceptional_ring(spec)?,
    };
    ring_doc("integral", ring)
}

pub fn bockstein(spec: &GroupSpec, p: u32) -> Result<Document> {
    assembler::torsion_pair(spec, p)?;
    let lifts = assembler::integral_lifts(spec, p)?;
    let adj = spec.with_lattice(crate::roots::Lattice::Adjoint);
    let res = crate::flag::restriction_map(&adj)?;
    let model = crate::flag::chern_model(&adj);
    let e3 = e3_base_presentation(&adj, CoeffRing::Integers)?.quotient()?;
    let iota = assembler::bockstein_iota(&res, p, e3.ctx())?;
    let mut rows = vec![("ι".to_string(), e3.short_form(&iota)?)];
    for f in &lifts {
        rows.push((f.label.clone(), e3.short_form(&assembler::bockstein_with(&model, &res, &e3, p, f)?)?));
    }
    let mut text = format!("Bockstein β{p} on H*({spec};F{p}):\n");
    for (l, v) in &rows {
        let _ = writeln!(text, "  β{p}({l}) = {v}");
    }
    let payload = json!({
        "group": spec.to_string(),
        "prime": p,
        "values": rows.iter().map(|(l, v)| json!({ "generator": l, "value": v.to_string() })).collect::<Vec<_>>(),
    });
    let latex: Vec<String> =
        rows.iter().map(|(l, v)| format!("\\beta_{{{p}}}({}) &= {}", latex_name(l).trim_end(), v.to_latex())).collect();
    Ok(Document::new(
        "bockstein",
        payload,
        text.trim_end().to_string(),
        format!("\\begin{{aligned}} {} \\end{{aligned}}", latex.join(" \\\\ ")),
    ))
}

/// Sq^k on every ζ of S₂(PG); `k = None` uses Sq^{2s−2} on ζ_{2s−1}.
pub fn steenrod(spec: &GroupSpec, k: Option<u32>) -> Result<Document> {
    assembler::torsion_pair(spec, 2)?;
    let adj = spec.with_lattice(crate::roots::Lattice::Adjoint);
    let model = crate::flag::chern_model(&adj);
    let res = crate::flag::restriction_map(&adj)?;
    let set = assembler::char_polys(&adj, PolyRing::ModP(2))?;
    let phi = assembler::PhiTest::new(&model, &res, 2)?;
    let mut rows = Vec::new();
    for form in &set.entries {
        let kk = k.unwrap_or(form.degree - 1);
        let value = match assembler::steenrod_with(&model, &phi, &set, form, kk) {
            Ok(r) => Ok(r.display()),
            Err(e @ (Error::NotExpressible(_) | Error::DimensionBudget { .. })) => Err(e.kind()),
            Err(e) => return Err(e),
        };
        rows.push((form.label.clone(), kk, value));
    }
    let mut text = format!("Steenrod squares on H*({spec};F2):\n");
    for (l, kk, v) in &rows {
        let _ = writeln!(text, "  Sq^{kk}({l}) = {}", v.as_ref().map(|s| s.as_str()).unwrap_or_else(|e| e));
    }
    let payload = json!({
        "group": spec.to_string(),
        "values": rows.iter().map(|(l, kk, v)| match v {
            Ok(s) => json!({ "generator": l, "k": kk, "value": s }),
            Err(e) => json!({ "generator": l, "k": kk, "error": e }),
        }).collect::<Vec<_>>(),
    });
    let latex: Vec<String> = rows
        .iter()
        .filter_map(|(l, kk, v)| v.as_ref().ok().map(|s| format!("Sq^{{{kk}}}{} &= {}", latex_name(l).trim_end(), latex_labels(s))))
        .collect();
    Ok(Document::new(
        "steenrod",
        payload,
        text.trim_end().to_string(),
        format!("\\begin{{aligned}} {} \\end{{aligned}}", latex.join(" \\\\ ")),
    ))
}

fn latex_labels(s: &str) -> String {
    s.split(" + ").map(|t| latex_name(t).trim_end().to_string()).collect::<Vec<_>>().join(" + ")
}

/// θ(γ_I) for n = p^r, reduced into J(ω).
pub fn theta(n: u64, set: &[u64]) -> Result<Document> {
    let raw = binomial::theta_gamma(n, set)?;
    let fac = crate::arith::factorize(n);
    let (p, r) = fac[0];
    let e = raw.reduce_omega_torsion(p, r);
    let payload = json!({ "n": n, "set": set, "value": e.to_string(), "terms": e.to_json(), "unreduced": raw.to_string() });
    let text = format!("θ(γ_{{{}}}) = {e}", set.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","));
    Ok(Document::new("theta", payload, text, e.to_latex()))
}

pub fn binomial_doc(n: u64, prime: Option<u64>) -> Result<Document> {
    if n < 2 {
        return Err(Error::Range(format!("n must be at least 2, got {n}")));
    }
    let b = binomial::b_sequence(n).split_off(1);
    let part = binomial::q_partition(n)?;
    let a: Vec<u64> = (2..=n).map(|k| binomial::a_ratio(n, k)).collect::<Result<_>>()?;
    let mut payload = json!({
        "n": n,
        "b": b.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
        "a": a,
        "partition": format!("{part:?}"),
    });
    let mut text = format!("n = {n}\n  b_(n,k), k = 1..n: {}\n  a_(n,k), k = 2..n: {a:?}", b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "));
    if let Some(p) = prime {
        // only s in the range where the valuation bound applies
        let mut ords = Vec::new();
        for s in 1..n {
            match binomial::ord_p_binom(n, s, p) {
                Ok(o) => ords.push((s, o)),
                Err(Error::Precondition(_)) => {}
                Err(e) => return Err(e),
            }
        }
        let _ = write!(
            text,
            "\n  ord_{p} C(n,s) against r - t: {}",
            ords.iter().map(|(s, o)| format!("s={s}: {}/{}", o.valuation, o.bound)).collect::<Vec<_>>().join(", ")
        );
        payload["ord"] = ords.iter().map(|(s, o)| json!({ "s": s, "check": o })).collect::<Vec<_>>().into();
        payload["prime"] = Value::from(p);
    }
    let latex = format!(
        "b_{{{n},k}} = {}",
        b.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",\\ ")
    );
    Ok(Document::new("binomial", payload, text, latex))
}

/// Runs the acceptance battery (or one check); the second value is true
/// when every check passed.
pub fn verify_doc(only: Option<u32>) -> Result<(Document, bool)> {
    let reports = match only {
        Some(id) if (1..=verify::BOUNDS.len() as u32).contains(&id) => vec![verify::run_check(id)],
        Some(id) => return Err(Error::Range(format!("no acceptance check {id}"))),
        None => verify::run_all(),
    };
    let ok = reports.iter().all(|r| r.passed());
    let text = reports.iter().map(|r| r.line()).collect::<Vec<_>>().join("\n");
    let latex = format!(
        "\\begin{{tabular}}{{lll}} {} \\end{{tabular}}",
        reports
            .iter()
            .map(|r| format!("{} & {} & {}", r.id, r.title, if r.passed() { "PASS" } else { "FAIL" }))
            .collect::<Vec<_>>()
            .join(" \\\\ ")
    );
    let payload = json!({ "passed": ok, "checks": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>() });
    Ok((Document::new("verify", payload, text, latex), ok))
}
