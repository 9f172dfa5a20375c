//! Command-line workbench for quantized enveloping algebras and their
//! coideal subalgebra presentations.
//!
//! Every invocation names a Cartan datum, either inline (`--cartan A2`,
//! which sets up the split presentation) or through a pair descriptor file
//! (`--config pair.json`).  Subcommands cover normal forms and the Hopf
//! maps, the filtration projections, pair construction with its
//! certificates, and the module-level computations.  `--json` switches the
//! output to a schema-stable report
//! `{pair, subcommand, inputs, result, certificates}`.
//!
//! Exit codes: 0 on success, 1 for validation and parse errors, 2 when a
//! degree or step budget is exceeded, 3 when a structural invariant the
//! library guarantees fails.

mod config;
mod render;

use std::collections::BTreeSet;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use qsp_core::error::exit_code;
use qsp_core::involution::admissible_sequence;
use qsp_core::pair::{
    coideal_certificate, coset_support_check, parabolic_generator, serre_defect,
    CosetReport, PairPresentation, ParabolicSide, Relation, SpecializationReport,
};
use qsp_core::repn::{
    find_real_form_scaling, invariants, shapovalov_positivity, simple_module, unitary_check,
};
use qsp_core::rootdata::{flocal_torus_test, restricted_roots, spherical_weight_test};
use qsp_core::text::{parse_expression, parse_weight, print_element, print_tensor, WeightBasis};
use qsp_core::uq::{filtration, hopf};
use qsp_core::{Element, Error, Sign};

use config::{PairConfig, Workbench};
use render::{pretty_element, pretty_scalar};

// ---------------------------------------------------------------------------
// invocation
// ---------------------------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "qsp",
    version,
    about = "Exact workbench for quantized enveloping algebras and quantum symmetric pairs"
)]
struct Cli {
    /// Cartan series label (A1, A1xA1, A2, B2, ...) for the split pair
    #[arg(long, global = true, value_name = "LABEL")]
    cartan: Option<String>,
    /// pair descriptor file (JSON)
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// emit a JSON report instead of text
    #[arg(long, global = true)]
    json: bool,
    /// normal-form degree bound override
    #[arg(long, global = true, value_name = "D")]
    max_degree: Option<usize>,
    /// rewriting step budget override
    #[arg(long, global = true, value_name = "N")]
    budget: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of an expression
    Nf {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Coproduct of an expression
    Coprod {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Antipode of an expression
    Antipode {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Counit of an expression
    Counit {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Conjugate-linear antiautomorphism kappa
    Kappa {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Left adjoint action (ad a) b
    Ad {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Right adjoint action (ad_r a) b
    Adr {
        #[arg(allow_hyphen_values = true)]
        a: String,
        #[arg(allow_hyphen_values = true)]
        b: String,
    },
    /// Weight of a homogeneous expression (root coordinates)
    Weight {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Bidegree (y-length, x-length) of an expression
    Bideg {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Leading bihomogeneous part of an expression
    Tip {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Triangular projection: the component with y-content LAMBDA and
    /// x-content MU, or the coset over torus coordinate LAMBDA when --mu is
    /// absent
    Proj {
        #[arg(long, value_name = "LAMBDA", allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, value_name = "MU", allow_hyphen_values = true)]
        mu: Option<String>,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Build the coideal presentation and report generators, certificates,
    /// and deformed Serre relations
    BuildPair,
    /// Coproduct-membership certificate for every generator
    CoidealCheck,
    /// Deformed Serre relation for generators I and J with its defect terms
    SerreDefect { i: usize, j: usize },
    /// Support constraints on the projected Serre relation for I and J
    Lemma73 { i: usize, j: usize },
    /// q = 1 specialization report for the pair
    Specialize,
    /// Whether the simple module with this highest weight has an invariant
    Spherical {
        #[arg(long, value_name = "W", allow_hyphen_values = true)]
        weight: String,
    },
    /// Build the simple module: weights, dimensions, Gram data
    Simple {
        #[arg(long, value_name = "W", allow_hyphen_values = true)]
        weight: String,
        /// also solve for the coideal-invariant vectors
        #[arg(long)]
        invariants: bool,
    },
    /// Orthogonalized norms of the contravariant form
    Shapovalov {
        #[arg(long, value_name = "W", allow_hyphen_values = true)]
        weight: String,
    },
    /// Restricted root system of the pair's involution
    RestrictedRoots,
    /// Torus local-finiteness test for a root-lattice vector
    Flocal {
        #[arg(long, value_name = "LAMBDA", allow_hyphen_values = true)]
        lambda: String,
    },
    /// Raising sequence behind the generator lift for index I
    Sequence { i: usize },
    /// One-sided generator over a subdiagram
    Parabolic {
        #[arg(long, value_name = "LIST")]
        pi_prime: String,
        #[arg(long, value_name = "LIST", default_value = "")]
        tuple: String,
        #[arg(long, value_name = "J")]
        j: usize,
        /// use the right-handed family
        #[arg(long)]
        right: bool,
    },
    /// Diagonal reweighting making kappa stabilize the generator set, and
    /// the unitarity report for a module
    Unitary {
        #[arg(long, value_name = "W", allow_hyphen_values = true)]
        weight: String,
    },
}

impl Cmd {
    fn name(&self) -> &'static str {
        match self {
            Cmd::Nf { .. } => "nf",
            Cmd::Coprod { .. } => "coprod",
            Cmd::Antipode { .. } => "antipode",
            Cmd::Counit { .. } => "counit",
            Cmd::Kappa { .. } => "kappa",
            Cmd::Ad { .. } => "ad",
            Cmd::Adr { .. } => "adr",
            Cmd::Weight { .. } => "weight",
            Cmd::Bideg { .. } => "bideg",
            Cmd::Tip { .. } => "tip",
            Cmd::Proj { .. } => "proj",
            Cmd::BuildPair => "build-pair",
            Cmd::CoidealCheck => "coideal-check",
            Cmd::SerreDefect { .. } => "serre-defect",
            Cmd::Lemma73 { .. } => "lemma73",
            Cmd::Specialize => "specialize",
            Cmd::Spherical { .. } => "spherical",
            Cmd::Simple { .. } => "simple",
            Cmd::Shapovalov { .. } => "shapovalov",
            Cmd::RestrictedRoots => "restricted-roots",
            Cmd::Flocal { .. } => "flocal",
            Cmd::Sequence { .. } => "sequence",
            Cmd::Parabolic { .. } => "parabolic",
            Cmd::Unitary { .. } => "unitary",
        }
    }
}

// ---------------------------------------------------------------------------
// argument helpers
// ---------------------------------------------------------------------------

fn one_based(k: usize, n: usize, what: &str) -> Result<usize, Error> {
    if k == 0 || k > n {
        return Err(Error::Argument(format!(
            "{what} index {k} is out of range 1..={n}"
        )));
    }
    Ok(k - 1)
}

fn bare_coords(src: &str) -> Result<Vec<i64>, Error> {
    src.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| Error::Argument(format!("bad coordinate {p:?} in {src:?}")))
        })
        .collect()
}

/// Root-lattice coordinates: a bare comma list or an `r:` tagged vector.
fn root_coords(src: &str, n: usize) -> Result<Vec<i64>, Error> {
    let coords = if let Some(rest) = src.strip_prefix("r:") {
        bare_coords(rest)?
    } else if src.starts_with("w:") {
        return Err(Error::Argument(
            "this argument takes root coordinates (bare or r:), not fundamental weights".into(),
        ));
    } else {
        bare_coords(src)?
    };
    if coords.len() != n {
        return Err(Error::Argument(format!(
            "vector {src:?} has {} coordinates, expected {n}",
            coords.len()
        )));
    }
    Ok(coords)
}

/// Fundamental-weight coordinates, converting tagged root coordinates
/// exactly through the Cartan matrix.
fn fw_coords(src: &str, pair: &PairPresentation) -> Result<Vec<i64>, Error> {
    let datum = &pair.ctx.datum;
    let (basis, coords) = parse_weight(src, datum.n)?;
    match basis {
        WeightBasis::Fundamental => Ok(coords),
        WeightBasis::Root => Ok((0..datum.n)
            .map(|i| (0..datum.n).map(|j| datum.cartan[i][j] * coords[j]).sum())
            .collect()),
    }
}

fn index_list(src: &str, n: usize, what: &str) -> Result<Vec<usize>, Error> {
    if src.trim().is_empty() {
        return Ok(Vec::new());
    }
    src.split(',')
        .map(|p| {
            let k: usize = p.trim().parse().map_err(|_| {
                Error::Argument(format!("bad {what} index {p:?} in {src:?}"))
            })?;
            one_based(k, n, what)
        })
        .collect()
}

fn root_string(v: &[i64]) -> String {
    let coords: Vec<String> = v.iter().map(|k| k.to_string()).collect();
    format!("r:{}", coords.join(","))
}

fn tuple_string(tuple: &[usize]) -> String {
    tuple
        .iter()
        .map(|&k| format!("B{}", k + 1))
        .collect::<Vec<_>>()
        .join(" ")
}

// ---------------------------------------------------------------------------
// report assembly
// ---------------------------------------------------------------------------

struct Output {
    text: String,
    result: Value,
    certificates: Vec<Value>,
}

impl Output {
    fn new(text: String, result: Value) -> Output {
        Output {
            text,
            result,
            certificates: Vec::new(),
        }
    }
}

fn cert(name: String, pass: bool) -> Value {
    json!({ "name": name, "pass": pass })
}

fn element_value(e: &Element) -> Value {
    json!(print_element(e))
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

fn defect_string(r: &Relation, n: usize) -> String {
    if !r.closed {
        return "(not closed)".into();
    }
    if r.terms.is_empty() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for t in &r.terms {
        let b = tuple_string(&t.tuple);
        let piece = match t.coefficient.as_scalar(n) {
            Some(c) => {
                let cs = pretty_scalar(&c);
                if b.is_empty() {
                    cs
                } else if cs == "1" {
                    b
                } else {
                    format!("{cs} * {b}")
                }
            }
            None => {
                let cs = pretty_element(&t.coefficient);
                if b.is_empty() {
                    cs
                } else {
                    format!("{b} * ({cs})")
                }
            }
        };
        parts.push(piece);
    }
    parts.join(" + ")
}

fn relation_value(r: &Relation, n: usize) -> Value {
    json!({
        "i": r.i + 1,
        "j": r.j + 1,
        "closed": r.closed,
        "degenerate": r.degenerate,
        "lhs": element_value(&r.lhs),
        "defect": r.terms.iter().map(|t| json!({
            "tuple": t.tuple.iter().map(|&k| k + 1).collect::<Vec<_>>(),
            "coefficient": element_value(&t.coefficient),
        })).collect::<Vec<_>>(),
        "display": defect_string(r, n),
    })
}

fn coset_report_value(rep: &CosetReport) -> (Value, Vec<Value>) {
    let mut certs = Vec::new();
    for ch in &rep.checks {
        certs.push(cert(
            format!(
                "support beta={} gamma={}",
                root_string(&ch.beta),
                root_string(&ch.gamma)
            ),
            ch.pair_nonzero && ch.beta_escapes && ch.gamma_escapes,
        ));
    }
    let value = json!({
        "i": rep.i + 1,
        "j": rep.j + 1,
        "lambda": root_string(&rep.lambda),
        "vacuous": rep.vacuous,
        "pass": rep.pass,
        "checks": rep.checks.iter().map(|ch| json!({
            "beta": root_string(&ch.beta),
            "gamma": root_string(&ch.gamma),
            "pair_nonzero": ch.pair_nonzero,
            "beta_escapes": ch.beta_escapes,
            "gamma_escapes": ch.gamma_escapes,
        })).collect::<Vec<_>>(),
    });
    (value, certs)
}

fn specialization_value(rep: &SpecializationReport) -> (String, Value, Vec<Value>) {
    let mut lines = Vec::new();
    let mut certs = Vec::new();
    for g in &rep.generators {
        let name = format!("B{}", g.index + 1);
        let expr = match (&g.expression, g.pole) {
            (_, true) => "pole at q = 1".to_string(),
            (Some(e), _) => e.clone(),
            (None, _) => "-".to_string(),
        };
        let fixed = match g.theta_fixed {
            Some(true) => "theta-fixed",
            Some(false) => "NOT theta-fixed",
            None => "no involution oracle",
        };
        let tip = if g.tip_ok { "tip ok" } else { "tip WRONG" };
        let mut line = format!("{name} -> {expr}  [{fixed}, {tip}]");
        if let Some(note) = &g.note {
            line.push_str(&format!("  ({note})"));
        }
        lines.push(line);
        certs.push(cert(
            format!("{name} specialization"),
            !g.pole && g.theta_fixed != Some(false) && g.tip_ok,
        ));
    }
    lines.push(format!(
        "t_theta fixed: {}, realized: {}, pass: {}",
        rep.t_theta_fixed, rep.realized, rep.pass
    ));
    certs.push(cert("T_Theta classically fixed".into(), rep.t_theta_fixed));
    let value = json!({
        "pass": rep.pass,
        "realized": rep.realized,
        "t_theta_fixed": rep.t_theta_fixed,
        "generators": rep.generators.iter().map(|g| json!({
            "index": g.index + 1,
            "pole": g.pole,
            "expression": g.expression,
            "theta_fixed": g.theta_fixed,
            "tip_ok": g.tip_ok,
            "note": g.note,
        })).collect::<Vec<_>>(),
    });
    (lines.join("\n"), value, certs)
}

fn run_command(cli: &Cli, wb: &Workbench) -> Result<Output, Error> {
    let pair = &wb.pair;
    let ctx = &pair.ctx;
    let n = ctx.n();
    match &cli.cmd {
        Cmd::Nf { expr } => {
            let e = parse_expression(ctx, expr)?;
            Ok(Output::new(pretty_element(&e), element_value(&e)))
        }
        Cmd::Coprod { expr } => {
            let e = parse_expression(ctx, expr)?;
            let d = hopf::coproduct(ctx, &e)?;
            Ok(Output::new(print_tensor(&d), json!(print_tensor(&d))))
        }
        Cmd::Antipode { expr } => {
            let e = parse_expression(ctx, expr)?;
            let s = hopf::antipode(ctx, &e)?;
            Ok(Output::new(pretty_element(&s), element_value(&s)))
        }
        Cmd::Counit { expr } => {
            let e = parse_expression(ctx, expr)?;
            let c = hopf::counit(&e);
            Ok(Output::new(pretty_scalar(&c), json!(pretty_scalar(&c))))
        }
        Cmd::Kappa { expr } => {
            let e = parse_expression(ctx, expr)?;
            let k = hopf::kappa(ctx, &e)?;
            Ok(Output::new(pretty_element(&k), element_value(&k)))
        }
        Cmd::Ad { a, b } => {
            let ea = parse_expression(ctx, a)?;
            let eb = parse_expression(ctx, b)?;
            let r = hopf::adjoint_left_elem(ctx, &ea, &eb)?;
            Ok(Output::new(pretty_element(&r), element_value(&r)))
        }
        Cmd::Adr { a, b } => {
            let ea = parse_expression(ctx, a)?;
            let eb = parse_expression(ctx, b)?;
            let r = hopf::adjoint_right_elem(ctx, &ea, &eb)?;
            Ok(Output::new(pretty_element(&r), element_value(&r)))
        }
        Cmd::Weight { expr } => {
            let e = parse_expression(ctx, expr)?;
            let w = ctx.weight(&e)?;
            Ok(Output::new(root_string(&w), json!(root_string(&w))))
        }
        Cmd::Bideg { expr } => {
            let e = parse_expression(ctx, expr)?;
            let (dy, dx) = filtration::bidegree(&e)?;
            Ok(Output::new(format!("({dy}, {dx})"), json!([dy, dx])))
        }
        Cmd::Tip { expr } => {
            let e = parse_expression(ctx, expr)?;
            let t = filtration::tip(&e)?;
            Ok(Output::new(pretty_element(&t), element_value(&t)))
        }
        Cmd::Proj { lambda, mu, expr } => {
            let e = parse_expression(ctx, expr)?;
            let lam = root_coords(lambda, n)?;
            let p = match mu {
                Some(m) => filtration::project_trihomog(&e, &lam, &root_coords(m, n)?),
                None => filtration::project_coset(&e, &lam),
            };
            Ok(Output::new(pretty_element(&p), element_value(&p)))
        }
        Cmd::BuildPair => {
            let mut lines = Vec::new();
            let mut certs = Vec::new();
            let td = &pair.theta;
            lines.push(format!(
                "pair: {}, pi_theta = {{{}}}, parity: {}",
                ctx.datum.label,
                td.pi_theta
                    .iter()
                    .map(|&k| (k + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                if td.parity_ok() { "ok" } else { "violated" }
            ));
            certs.push(cert("parity".into(), td.parity_ok()));
            lines.push(format!(
                "p: [{}], pi_star: {{{}}}",
                td.p
                    .iter()
                    .map(|&k| (k + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(", "),
                td.pi_star
                    .iter()
                    .map(|&k| (k + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(", ")
            ));
            for (&i, s) in &td.sequences {
                lines.push(format!(
                    "sequence {}: indices [{}], powers [{}], m = {}",
                    i + 1,
                    s.indices
                        .iter()
                        .map(|&k| (k + 1).to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    s.powers
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(", "),
                    td.m_of.get(&i).copied().unwrap_or(0)
                ));
            }
            let basis: Vec<String> = pair
                .t_theta_basis
                .iter()
                .map(|b| pretty_element(&ctx.torus(b).expect("basis vector in range")))
                .collect();
            lines.push(format!(
                "T_Theta basis: {}",
                if basis.is_empty() {
                    "(trivial)".to_string()
                } else {
                    basis.join(", ")
                }
            ));
            let mut gens = Vec::new();
            for (i, b) in pair.generators.iter().enumerate() {
                lines.push(format!("B{} = {}", i + 1, pretty_element(b)));
                gens.push(json!({ "index": i + 1, "element": element_value(b) }));
            }
            for i in 0..n {
                let c = coideal_certificate(pair, i)?;
                lines.push(format!(
                    "coideal B{}: {}",
                    i + 1,
                    if c.pass { "pass" } else { "FAIL" }
                ));
                certs.push(cert(format!("B{} coideal", i + 1), c.pass));
            }
            let mut relations = Vec::new();
            for i in 0..n {
                for j in 0..n {
                    if i == j {
                        continue;
                    }
                    let r = serre_defect(pair, i, j)?;
                    lines.push(format!(
                        "F(B{}, B{}) = {}",
                        i + 1,
                        j + 1,
                        defect_string(&r, n)
                    ));
                    certs.push(cert(format!("relation ({}, {})", i + 1, j + 1), r.closed));
                    relations.push(relation_value(&r, n));
                }
            }
            let result = json!({
                "label": ctx.datum.label,
                "theta": td.theta.m,
                "p": td.p.iter().map(|&k| k + 1).collect::<Vec<_>>(),
                "pi_star": td.pi_star.iter().map(|&k| k + 1).collect::<Vec<_>>(),
                "sequences": td.sequences.iter().map(|(&i, s)| ((i + 1).to_string(), json!({
                    "indices": s.indices.iter().map(|&k| k + 1).collect::<Vec<_>>(),
                    "powers": s.powers,
                }))).collect::<std::collections::BTreeMap<_, _>>(),
                "m": td.m_of.iter().map(|(&i, &m)| ((i + 1).to_string(), m))
                    .collect::<std::collections::BTreeMap<_, _>>(),
                "parity_ok": td.parity_ok(),
                "t_theta_basis": pair.t_theta_basis.iter().map(|b| root_string(b)).collect::<Vec<_>>(),
                "generators": gens,
                "relations": relations,
            });
            Ok(Output {
                text: lines.join("\n"),
                result,
                certificates: certs,
            })
        }
        Cmd::CoidealCheck => {
            let mut lines = Vec::new();
            let mut certs = Vec::new();
            let mut all = true;
            let mut reports = Vec::new();
            for i in 0..n {
                let c = coideal_certificate(pair, i)?;
                all &= c.pass;
                lines.push(format!(
                    "B{}: {}",
                    i + 1,
                    if c.pass { "pass" } else { "FAIL" }
                ));
                certs.push(cert(format!("B{} coideal", i + 1), c.pass));
                reports.push(json!({
                    "index": i + 1,
                    "pass": c.pass,
                    "components": c.components.len(),
                }));
            }
            lines.push(format!("pass: {all}"));
            Ok(Output {
                text: lines.join("\n"),
                result: json!({ "pass": all, "generators": reports }),
                certificates: certs,
            })
        }
        Cmd::SerreDefect { i, j } => {
            let i = one_based(*i, n, "generator")?;
            let j = one_based(*j, n, "generator")?;
            let r = serre_defect(pair, i, j)?;
            let mut lines = vec![format!("closed: {}", r.closed)];
            if r.degenerate {
                lines.push("degenerate: true".into());
            }
            lines.push(format!("defect: {}", defect_string(&r, n)));
            Ok(Output {
                text: lines.join("\n"),
                result: relation_value(&r, n),
                certificates: vec![cert(
                    format!("relation ({}, {})", i + 1, j + 1),
                    r.closed,
                )],
            })
        }
        Cmd::Lemma73 { i, j } => {
            let i = one_based(*i, n, "generator")?;
            let j = one_based(*j, n, "generator")?;
            let rep = coset_support_check(pair, i, j)?;
            let (value, certs) = coset_report_value(&rep);
            let mut lines = vec![format!("vacuous: {}", rep.vacuous)];
            for ch in &rep.checks {
                lines.push(format!(
                    "beta={} gamma={} nonzero={} escapes=({}, {})",
                    root_string(&ch.beta),
                    root_string(&ch.gamma),
                    ch.pair_nonzero,
                    ch.beta_escapes,
                    ch.gamma_escapes
                ));
            }
            lines.push(format!("pass: {}", rep.pass));
            Ok(Output {
                text: lines.join("\n"),
                result: value,
                certificates: certs,
            })
        }
        Cmd::Specialize => {
            let rep = qsp_core::pair::specialize_pair(pair)?;
            let (text, value, certs) = specialization_value(&rep);
            Ok(Output {
                text,
                result: value,
                certificates: certs,
            })
        }
        Cmd::Spherical { weight } => {
            let fw = fw_coords(weight, pair)?;
            let s = spherical_weight_test(&ctx.datum, &pair.theta.theta, &fw)?;
            Ok(Output::new(format!("{s}"), json!(s)))
        }
        Cmd::Simple { weight, invariants: want_inv } => {
            let fw = fw_coords(weight, pair)?;
            let m = simple_module(ctx, &fw)?;
            let mut lines = vec![format!("dimension: {}", m.dimension)];
            let spaces: Vec<Value> = m
                .spaces
                .iter()
                .map(|sp| {
                    lines.push(format!(
                        "eta={} dim={}",
                        root_string(&sp.eta),
                        sp.words.len()
                    ));
                    json!({
                        "eta": root_string(&sp.eta),
                        "dimension": sp.words.len(),
                        "gram": sp.gram.iter().map(|row| {
                            row.iter().map(pretty_scalar).collect::<Vec<_>>()
                        }).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let mut result = json!({
                "highest_weight": weight,
                "dimension": m.dimension,
                "spaces": spaces,
            });
            let mut certs = Vec::new();
            if *want_inv {
                let (dim, basis) = invariants(&m, pair)?;
                lines.push(format!("invariants: {dim}"));
                let coords: Vec<Vec<String>> = basis
                    .iter()
                    .map(|v| v.iter().map(pretty_scalar).collect())
                    .collect();
                for v in &coords {
                    lines.push(format!("  [{}]", v.join(", ")));
                }
                result["invariants"] = json!({ "dimension": dim, "basis": coords });
                certs.push(cert("invariant dimension at most one".into(), dim <= 1));
            }
            Ok(Output {
                text: lines.join("\n"),
                result,
                certificates: certs,
            })
        }
        Cmd::Shapovalov { weight } => {
            let fw = fw_coords(weight, pair)?;
            let m = simple_module(ctx, &fw)?;
            let rep = shapovalov_positivity(&m);
            let mut lines = Vec::new();
            let mut certs = Vec::new();
            let spaces: Vec<Value> = rep
                .spaces
                .iter()
                .map(|sp| {
                    let norms: Vec<String> = sp.norms.iter().map(pretty_scalar).collect();
                    let signs: Vec<&str> = sp
                        .signs
                        .iter()
                        .map(|s| match s {
                            Sign::Positive => "+",
                            Sign::Negative => "-",
                            Sign::Zero => "0",
                        })
                        .collect();
                    lines.push(format!(
                        "eta={} norms=[{}] signs=[{}]",
                        root_string(&sp.eta),
                        norms.join(", "),
                        signs.join(", ")
                    ));
                    certs.push(cert(format!("positive at eta={}", root_string(&sp.eta)), sp.pass));
                    json!({
                        "eta": root_string(&sp.eta),
                        "norms": norms,
                        "signs": signs,
                        "pass": sp.pass,
                    })
                })
                .collect();
            lines.push(format!("positive: {}", rep.pass));
            Ok(Output {
                text: lines.join("\n"),
                result: json!({ "pass": rep.pass, "spaces": spaces }),
                certificates: certs,
            })
        }
        Cmd::RestrictedRoots => {
            let sys = restricted_roots(&ctx.datum, &pair.theta.theta)?;
            let mut lines = Vec::new();
            for comp in &sys.components {
                lines.push(format!(
                    "component: {}{}",
                    comp.label,
                    if comp.nonreduced { " (nonreduced)" } else { "" }
                ));
            }
            if sys.components.is_empty() {
                lines.push("component: (empty)".into());
            }
            let pairs: Vec<String> = sys
                .variation_pairs
                .iter()
                .map(|&(a, b)| format!("{{{}, {}}}", a + 1, b + 1))
                .collect();
            lines.push(format!(
                "variation pairs: {}",
                if pairs.is_empty() {
                    "none".to_string()
                } else {
                    pairs.join(", ")
                }
            ));
            let result = json!({
                "components": sys.components.iter().map(|c| json!({
                    "label": c.label,
                    "nonreduced": c.nonreduced,
                })).collect::<Vec<_>>(),
                "simples": sys.simples.iter().map(|r| {
                    r.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>()
                }).collect::<Vec<_>>(),
                "variation_pairs": sys.variation_pairs.iter()
                    .map(|&(a, b)| json!([a + 1, b + 1])).collect::<Vec<_>>(),
            });
            Ok(Output::new(lines.join("\n"), result))
        }
        Cmd::Flocal { lambda } => {
            let lam = root_coords(lambda, n)?;
            let ok = flocal_torus_test(&ctx.datum, &lam)?;
            Ok(Output::new(format!("{ok}"), json!(ok)))
        }
        Cmd::Sequence { i } => {
            let i = one_based(*i, n, "generator")?;
            let seq = admissible_sequence(&pair.theta, i)?;
            let m = pair.theta.m_of.get(&i).copied().unwrap_or(0);
            let indices: Vec<String> =
                seq.indices.iter().map(|&k| (k + 1).to_string()).collect();
            let powers: Vec<String> = seq.powers.iter().map(|p| p.to_string()).collect();
            let text = format!(
                "indices: [{}]\npowers: [{}]\nm: {m}",
                indices.join(", "),
                powers.join(", ")
            );
            Ok(Output::new(
                text,
                json!({
                    "indices": seq.indices.iter().map(|&k| k + 1).collect::<Vec<_>>(),
                    "powers": seq.powers,
                    "m": m,
                }),
            ))
        }
        Cmd::Parabolic {
            pi_prime,
            tuple,
            j,
            right,
        } => {
            let pi: BTreeSet<usize> = index_list(pi_prime, n, "subdiagram")?.into_iter().collect();
            let tup = index_list(tuple, n, "tuple")?;
            let j = one_based(*j, n, "generator")?;
            let side = if *right {
                ParabolicSide::Right
            } else {
                ParabolicSide::Left
            };
            let rep = parabolic_generator(ctx, &pi, &tup, j, side)?;
            let mut lines = vec![pretty_element(&rep.element)];
            lines.push(format!(
                "shape: {}",
                if rep.shape_pass { "pass" } else { "FAIL" }
            ));
            for v in &rep.violations {
                lines.push(format!("  {v}"));
            }
            Ok(Output {
                text: lines.join("\n"),
                result: json!({
                    "element": element_value(&rep.element),
                    "shape_pass": rep.shape_pass,
                    "violations": rep.violations,
                }),
                certificates: vec![cert("one-sided coproduct shape".into(), rep.shape_pass)],
            })
        }
        Cmd::Unitary { weight } => {
            let fw = fw_coords(weight, pair)?;
            let m = simple_module(ctx, &fw)?;
            let scaling = find_real_form_scaling(pair)?;
            let Some(sc) = scaling else {
                return Ok(Output::new(
                    "scaling: not found".into(),
                    json!({ "scaling": Value::Null, "unitary": false }),
                ));
            };
            let rep = unitary_check(&m, pair, &sc)?;
            let sc_text: Vec<String> = sc
                .iter()
                .map(|(&i, &e)| format!("e{} = {e}", i + 1))
                .collect();
            let mut lines = vec![format!("scaling: {}", sc_text.join(", "))];
            let mut certs = Vec::new();
            for (name, ok) in &rep.contravariant {
                lines.push(format!("contravariant {name}: {ok}"));
                certs.push(cert(format!("contravariant {name}"), *ok));
            }
            lines.push(format!(
                "symmetric: {}, positive: {}, unitary: {}",
                rep.symmetric, rep.positive, rep.unitary
            ));
            certs.push(cert("form symmetric".into(), rep.symmetric));
            certs.push(cert("form positive".into(), rep.positive));
            Ok(Output {
                text: lines.join("\n"),
                result: json!({
                    "scaling": sc.iter().map(|(&i, &e)| ((i + 1).to_string(), e))
                        .collect::<std::collections::BTreeMap<_, _>>(),
                    "contravariant": rep.contravariant.iter()
                        .map(|(nm, ok)| json!({ "generator": nm, "pass": ok }))
                        .collect::<Vec<_>>(),
                    "symmetric": rep.symmetric,
                    "positive": rep.positive,
                    "unitary": rep.unitary,
                }),
                certificates: certs,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// inputs echo
// ---------------------------------------------------------------------------

fn inputs_value(cli: &Cli) -> Value {
    let mut m = serde_json::Map::new();
    match &cli.cmd {
        Cmd::Nf { expr }
        | Cmd::Coprod { expr }
        | Cmd::Antipode { expr }
        | Cmd::Counit { expr }
        | Cmd::Kappa { expr }
        | Cmd::Weight { expr }
        | Cmd::Bideg { expr }
        | Cmd::Tip { expr } => {
            m.insert("expr".into(), json!(expr));
        }
        Cmd::Ad { a, b } | Cmd::Adr { a, b } => {
            m.insert("a".into(), json!(a));
            m.insert("b".into(), json!(b));
        }
        Cmd::Proj { lambda, mu, expr } => {
            m.insert("lambda".into(), json!(lambda));
            if let Some(mu) = mu {
                m.insert("mu".into(), json!(mu));
            }
            m.insert("expr".into(), json!(expr));
        }
        Cmd::SerreDefect { i, j } | Cmd::Lemma73 { i, j } => {
            m.insert("i".into(), json!(i));
            m.insert("j".into(), json!(j));
        }
        Cmd::Spherical { weight } | Cmd::Shapovalov { weight } | Cmd::Unitary { weight } => {
            m.insert("weight".into(), json!(weight));
        }
        Cmd::Simple { weight, invariants } => {
            m.insert("weight".into(), json!(weight));
            m.insert("invariants".into(), json!(invariants));
        }
        Cmd::Flocal { lambda } => {
            m.insert("lambda".into(), json!(lambda));
        }
        Cmd::Sequence { i } => {
            m.insert("i".into(), json!(i));
        }
        Cmd::Parabolic {
            pi_prime,
            tuple,
            j,
            right,
        } => {
            m.insert("pi_prime".into(), json!(pi_prime));
            m.insert("tuple".into(), json!(tuple));
            m.insert("j".into(), json!(j));
            m.insert("right".into(), json!(right));
        }
        Cmd::BuildPair | Cmd::CoidealCheck | Cmd::Specialize | Cmd::RestrictedRoots => {}
    }
    if let Some(d) = cli.max_degree {
        m.insert("max_degree".into(), json!(d));
    }
    if let Some(b) = cli.budget {
        m.insert("budget".into(), json!(b));
    }
    Value::Object(m)
}

// ---------------------------------------------------------------------------
// entry point
// ---------------------------------------------------------------------------

fn execute(cli: &Cli) -> Result<String, Error> {
    let cfg = match (&cli.cartan, &cli.config) {
        (Some(_), Some(_)) => {
            return Err(Error::Validation(
                "use exactly one of --cartan and --config".into(),
            ))
        }
        (Some(label), None) => PairConfig::split(label),
        (None, Some(path)) => PairConfig::load(path)?,
        (None, None) => {
            return Err(Error::Validation(
                "a Cartan label (--cartan) or a pair descriptor (--config) is required".into(),
            ))
        }
    };
    let wb = config::realize(&cfg, cli.max_degree, cli.budget)?;
    let out = run_command(cli, &wb)?;
    if cli.json {
        let report = json!({
            "pair": wb.descriptor,
            "subcommand": cli.cmd.name(),
            "inputs": inputs_value(cli),
            "result": out.result,
            "certificates": out.certificates,
        });
        serde_json::to_string_pretty(&report)
            .map_err(|e| Error::Internal(format!("report serialization failed: {e}")))
    } else {
        Ok(out.text)
    }
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    match execute(&cli) {
        Ok(text) => println!("{text}"),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(exit_code(&e));
        }
    }
}
