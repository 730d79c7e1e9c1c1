//! `levelset` — command-line front end for the coset calculus.
//!
//! Output is a single JSON object on stdout (keys sorted, no timestamps;
//! identical invocations produce byte-identical output). Exit codes:
//! 0 for a computed value or a passing verdict, 1 for a computed negative
//! verdict (axioms fail, not covered, non-uniform, equivalence broken),
//! 2 for usage or parse errors. `--pretty` switches to an explicitly
//! non-stable human rendering.

mod parser;

use clap::{Parser as ClapParser, Subcommand};
use levelset_core::cover::{self, CoverInstance};
use levelset_core::hlf::{DistinguishedSet, FieldShape};
use levelset_core::measure;
use levelset_core::multi_index::MultiIndex;
use levelset_core::sample::{Rng, SafeWindow};
use levelset_core::setalg::{self, Classification, LevelResult, SymbolicSet};
use levelset_core::structure::{
    check_axioms, check_rigidity, IndexWindow, Mode, NbhdId, StructureDescriptor,
};
use levelset_core::zlevels::{self, StrideStructure, ZWindowSet};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(ClapParser)]
#[command(
    name = "levelset",
    version,
    about = "Exact coset calculus for iterated Laurent-series fields over Q_p",
    disable_help_subcommand = true
)]
struct Cli {
    /// Human-readable output (format not stable)
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the indexing conditions of a structure on a finite window
    Axioms {
        /// Structure descriptor JSON, e.g. {"kind":"field","p":2,"n":2}
        #[arg(long)]
        desc: String,
        #[arg(long, value_parser = ["strict", "compatible"], default_value = "compatible")]
        mode: String,
        /// Ball range a..b for the base neighbourhoods
        #[arg(long, default_value = "-1..1", allow_hyphen_values = true)]
        nbhd: String,
        /// Index box lo..hi per component, comma separated
        #[arg(long, allow_hyphen_values = true)]
        gamma_box: String,
    },
    /// Check rigidity (level of the set at gamma is gamma) on a window
    Rigidity {
        #[arg(long)]
        desc: String,
        #[arg(long, default_value = "-1..1", allow_hyphen_values = true)]
        nbhd: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma_box: String,
    },
    /// Intersect two distinguished sets
    Intersect {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        a: String,
        b: String,
    },
    /// Canonical form of a distinguished set
    Canon {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Level of a symbolic set
    Level {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Uniform-level test of a symbolic set (non-uniform exits 1)
    Uniform {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Type classification of a symbolic set
    Classify {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Measure of a symbolic set, as a Laurent polynomial
    Measure {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Disjoint region form of a symbolic set in the ring of ddd-sets
    Ddd {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        expr: String,
    },
    /// Cover decision under the compactness hypotheses
    Cover {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        /// Target coset expression
        #[arg(long)]
        target: Option<String>,
        /// Declared level, comma-separated components
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        /// Family member (repeatable)
        #[arg(long = "member")]
        members: Vec<String>,
        /// Cover instance JSON file {"target":..,"gamma":..,"family":[..]}
        #[arg(long)]
        json_in: Option<PathBuf>,
    },
    /// Subcover extraction for mixed-level families
    Subcover {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        /// Target coset expression
        #[arg(long)]
        target: Option<String>,
        /// Declared level, comma-separated components
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long = "member")]
        members: Vec<String>,
        #[arg(long)]
        json_in: Option<PathBuf>,
    },
    /// Finite-intersection-property dual of a cover instance
    Fip {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        /// Target coset expression
        #[arg(long)]
        target: Option<String>,
        /// Declared level, comma-separated components
        #[arg(long, allow_hyphen_values = true)]
        gamma: Option<String>,
        #[arg(long = "member")]
        members: Vec<String>,
        #[arg(long)]
        json_in: Option<PathBuf>,
    },
    /// The canonical no-finite-subcover family of disjoint t-cosets
    DemoNoSubcover {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        j: i64,
        #[arg(long, default_value_t = 3)]
        k: u32,
    },
    /// Run-length level of a finite subset of Z under the stride-d structure
    Zlevel {
        #[arg(long, default_value_t = 1)]
        d: u64,
        /// Window a,b
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        /// Comma-separated members
        #[arg(long, allow_hyphen_values = true)]
        members: Option<String>,
        /// JSON file `{"d":..,"window":[a,b],"members":[..]}`
        #[arg(long)]
        json_in: Option<PathBuf>,
    },
    /// Stride-2 statistic on a window of primes
    Twin {
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long = "N")]
        n: u64,
        /// Optional sieve bitmap cache file
        #[arg(long)]
        cache: Option<PathBuf>,
    },
    /// The structure induced on Q_p inside the two-dimensional field
    Induce {
        #[arg(long)]
        p: u64,
    },
    /// Raise the elevation of a structure by one around a pivot
    Inflate {
        #[arg(long)]
        desc: String,
        #[arg(long, allow_hyphen_values = true)]
        pivot: i64,
    },
    /// Compose a structure over X with a structure for X over X'
    Stack {
        #[arg(long)]
        upper: String,
        #[arg(long)]
        lower: String,
    },
    /// Rigidity of the product of two structures on a window
    ProductCheck {
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        #[arg(long, default_value = "-1..1", allow_hyphen_values = true)]
        nbhd: String,
        #[arg(long, allow_hyphen_values = true)]
        gamma_box: String,
    },
    /// Cross-check membership and trichotomy against the quotient model
    OracleCheck {
        /// Field shape "p,n"
        #[arg(long)]
        field: String,
        #[arg(long, default_value_t = 100)]
        samples: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(msg: impl Into<String>) -> Failure {
        Failure {
            code: 2,
            message: msg.into(),
        }
    }
}

impl From<levelset_core::Error> for Failure {
    fn from(e: levelset_core::Error) -> Failure {
        Failure::usage(e.to_string())
    }
}

impl From<parser::ParseError> for Failure {
    fn from(e: parser::ParseError) -> Failure {
        Failure::usage(e.to_string())
    }
}

type Out = Result<(u8, Value), Failure>;

fn parse_field(s: &str) -> Result<FieldShape, Failure> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(Failure::usage(format!("--field wants \"p,n\", got {s:?}")));
    }
    let p: u64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::usage("bad prime in --field"))?;
    let n: u8 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::usage("bad dimension in --field"))?;
    Ok(FieldShape::new(p, n)?)
}

fn parse_gamma(s: &str) -> Result<MultiIndex, Failure> {
    let comps: Result<Vec<i64>, _> = s.split(',').map(|c| c.trim().parse()).collect();
    Ok(MultiIndex::new(
        comps.map_err(|_| Failure::usage(format!("bad index {s:?}")))?,
    ))
}

fn parse_range(s: &str) -> Result<(i64, i64), Failure> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(Failure::usage(format!("bad range {s:?}, want lo..hi")));
    }
    let lo: i64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| Failure::usage("bad range bound"))?;
    let hi: i64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| Failure::usage("bad range bound"))?;
    if lo > hi {
        return Err(Failure::usage(format!("empty range {s:?}")));
    }
    Ok((lo, hi))
}

fn parse_desc(s: &str) -> Result<StructureDescriptor, Failure> {
    let desc: StructureDescriptor =
        serde_json::from_str(s).map_err(|e| Failure::usage(format!("bad descriptor JSON: {e}")))?;
    desc.validate()?;
    Ok(desc)
}

fn window_ids(desc: &StructureDescriptor, a_lo: i64, a_hi: i64) -> Vec<NbhdId> {
    match desc {
        StructureDescriptor::Field { base_dim, .. } => (a_lo..=a_hi)
            .map(|a| NbhdId::Ideal {
                i1: a,
                subtail: vec![0; (*base_dim - 1) as usize],
            })
            .collect(),
        StructureDescriptor::ZStride { .. } => vec![NbhdId::Point],
        StructureDescriptor::InducedBaseField { .. } => (a_lo..=a_hi).map(NbhdId::ball).collect(),
        StructureDescriptor::Product { left, right } => {
            let ls = window_ids(left, a_lo, a_hi);
            let rs = window_ids(right, a_lo, a_hi);
            let mut out = Vec::new();
            for l in &ls {
                for r in &rs {
                    out.push(NbhdId::Pair(Box::new(l.clone()), Box::new(r.clone())));
                }
            }
            out
        }
        StructureDescriptor::Inflated { inner, .. } => window_ids(inner, a_lo, a_hi),
        StructureDescriptor::Stacked { lower, .. } => window_ids(lower, a_lo, a_hi),
    }
}

fn build_window(
    desc: &StructureDescriptor,
    nbhd: &str,
    gamma_box: &str,
) -> Result<IndexWindow, Failure> {
    let (a_lo, a_hi) = parse_range(nbhd)?;
    let mut lo = Vec::new();
    let mut hi = Vec::new();
    for part in gamma_box.split(',') {
        let (l, h) = parse_range(part)?;
        lo.push(l);
        hi.push(h);
    }
    if lo.len() != desc.elevation() {
        return Err(Failure::usage(format!(
            "--gamma-box has {} component(s) but the structure has elevation {}",
            lo.len(),
            desc.elevation()
        )));
    }
    Ok(IndexWindow::new(
        window_ids(desc, a_lo, a_hi),
        MultiIndex::new(lo),
        MultiIndex::new(hi),
    )?)
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serialization of reports cannot fail")
}

fn load_instance(
    shape: FieldShape,
    target: &Option<String>,
    gamma: &Option<String>,
    members: &[String],
    json_in: &Option<PathBuf>,
) -> Result<CoverInstance, Failure> {
    if let Some(path) = json_in {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::usage(format!("bad instance JSON: {e}")))?;
        let target = DistinguishedSet::from_json(
            shape,
            v.get("target")
                .ok_or_else(|| Failure::usage("instance needs \"target\""))?,
        )?;
        let gamma: Vec<i64> = serde_json::from_value(
            v.get("gamma")
                .cloned()
                .ok_or_else(|| Failure::usage("instance needs \"gamma\""))?,
        )
        .map_err(|e| Failure::usage(format!("bad gamma: {e}")))?;
        let family = v
            .get("family")
            .and_then(|f| f.as_array())
            .ok_or_else(|| Failure::usage("instance needs \"family\" array"))?
            .iter()
            .map(|m| SymbolicSet::from_json(shape, m))
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(CoverInstance::new(target, MultiIndex::new(gamma), family)?);
    }
    let target = parser::parse_dset(
        target
            .as_deref()
            .ok_or_else(|| Failure::usage("--target or --json-in required"))?,
        shape,
    )?;
    let gamma = parse_gamma(
        gamma
            .as_deref()
            .ok_or_else(|| Failure::usage("--gamma required"))?,
    )?;
    if members.is_empty() {
        return Err(Failure::usage("at least one --member required"));
    }
    let family = members
        .iter()
        .map(|m| parser::parse_set(m, shape))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CoverInstance::new(target, gamma, family)?)
}

fn cover_report_out(report: &cover::CoverReport) -> (u8, Value) {
    let code = if report.is_covered() { 0 } else { 1 };
    (code, report.to_json())
}

fn level_result_value(r: &LevelResult) -> Value {
    match r {
        LevelResult::HasLevel(g) => json!({"kind": "has_level", "level": g.components()}),
        LevelResult::Uniform(g) => json!({"kind": "uniform", "level": g.components()}),
        LevelResult::NonUniform(g) => json!({"kind": "non_uniform", "level": g.components()}),
        LevelResult::NoDistinguishedSubset => json!({"kind": "no_distinguished_subset"}),
    }
}

fn run(cmd: &Cmd) -> Out {
    match cmd {
        Cmd::Axioms {
            desc,
            mode,
            nbhd,
            gamma_box,
        } => {
            let desc = parse_desc(desc)?;
            let window = build_window(&desc, nbhd, gamma_box)?;
            let mode = if mode == "strict" {
                Mode::Strict
            } else {
                Mode::Compatible
            };
            let report = check_axioms(&desc, &window, mode)?;
            Ok((if report.passed { 0 } else { 1 }, to_value(&report)))
        }
        Cmd::Rigidity {
            desc,
            nbhd,
            gamma_box,
        } => {
            let desc = parse_desc(desc)?;
            let window = build_window(&desc, nbhd, gamma_box)?;
            let report = check_rigidity(&desc, &window)?;
            Ok((if report.passed { 0 } else { 1 }, to_value(&report)))
        }
        Cmd::Intersect { field, a, b } => {
            let shape = parse_field(field)?;
            let a = parser::parse_dset(a, shape)?;
            let b = parser::parse_dset(b, shape)?;
            Ok(match a.intersect(&b)? {
                None => (0, json!({"empty": true})),
                Some(m) => (
                    0,
                    json!({"empty": false, "set": to_value(&m), "text": m.to_string()}),
                ),
            })
        }
        Cmd::Canon { field, expr } => {
            let shape = parse_field(field)?;
            let d = parser::parse_dset(expr, shape)?;
            Ok((0, json!({"set": to_value(&d), "text": d.to_string()})))
        }
        Cmd::Level { field, expr } => {
            let shape = parse_field(field)?;
            let s = setalg::normalize(&parser::parse_set(expr, shape)?)?;
            Ok((0, level_result_value(&setalg::level(&s)?)))
        }
        Cmd::Uniform { field, expr } => {
            let shape = parse_field(field)?;
            let s = setalg::normalize(&parser::parse_set(expr, shape)?)?;
            let r = setalg::uniform_level(&s)?;
            let code = u8::from(!matches!(r, LevelResult::Uniform(_)));
            Ok((code, level_result_value(&r)))
        }
        Cmd::Classify { field, expr } => {
            let shape = parse_field(field)?;
            let s = setalg::normalize(&parser::parse_set(expr, shape)?)?;
            Ok((
                0,
                match setalg::classify(&s)? {
                    Classification::TypeS => json!({"class": "type_s"}),
                    Classification::HasLevel(g) => {
                        json!({"class": "has_level", "level": g.components()})
                    }
                },
            ))
        }
        Cmd::Measure { field, expr } => {
            let shape = parse_field(field)?;
            let s = setalg::normalize(&parser::parse_set(expr, shape)?)?;
            let value = measure::mu_symbolic(&s)?;
            Ok((
                0,
                json!({"text": value.to_string(), "value": to_value(&value)}),
            ))
        }
        Cmd::Ddd { field, expr } => {
            let shape = parse_field(field)?;
            let s = setalg::normalize(&parser::parse_set(expr, shape)?)?;
            let ddd = measure::to_ddd(&s)?;
            Ok((0, json!({"regions": to_value(&ddd.regions)})))
        }
        Cmd::Cover {
            field,
            target,
            gamma,
            members,
            json_in,
        } => {
            let shape = parse_field(field)?;
            let inst = load_instance(shape, target, gamma, members, json_in)?;
            Ok(cover_report_out(&cover::covers(&inst)?))
        }
        Cmd::Subcover {
            field,
            target,
            gamma,
            members,
            json_in,
        } => {
            let shape = parse_field(field)?;
            let inst = load_instance(shape, target, gamma, members, json_in)?;
            Ok(cover_report_out(&cover::find_subcover(&inst)?))
        }
        Cmd::Fip {
            field,
            target,
            gamma,
            members,
            json_in,
        } => {
            let shape = parse_field(field)?;
            let inst = load_instance(shape, target, gamma, members, json_in)?;
            let rep = cover::fip_dual(&inst)?;
            Ok((u8::from(!rep.equivalence_holds), to_value(&rep)))
        }
        Cmd::DemoNoSubcover { field, j, k } => {
            let shape = parse_field(field)?;
            let (inst, report) = cover::demo_no_subcover(shape, *j, *k)?;
            let family: Vec<Value> = inst.family.iter().map(|m| m.to_json()).collect();
            Ok((
                u8::from(!report.is_covered()),
                json!({
                    "instance": {
                        "target": to_value(&inst.target),
                        "gamma": inst.gamma.components(),
                        "family": family,
                    },
                    "report": report.to_json(),
                }),
            ))
        }
        Cmd::Zlevel {
            d,
            window,
            members,
            json_in,
        } => {
            let (stride, set) = if let Some(path) = json_in {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
                let v: Value = serde_json::from_str(&text)
                    .map_err(|e| Failure::usage(format!("bad JSON: {e}")))?;
                let d = v.get("d").and_then(|d| d.as_u64()).unwrap_or(*d);
                let set: ZWindowSet = serde_json::from_value(v)
                    .map_err(|e| Failure::usage(format!("bad window set JSON: {e}")))?;
                (StrideStructure::new(d)?, set)
            } else {
                let window = parse_gamma(
                    window
                        .as_deref()
                        .ok_or_else(|| Failure::usage("--window a,b required"))?,
                )?;
                if window.components().len() != 2 {
                    return Err(Failure::usage("--window wants two bounds a,b"));
                }
                let members: Vec<i64> = match members {
                    None => Vec::new(),
                    Some(m) if m.trim().is_empty() => Vec::new(),
                    Some(m) => m
                        .split(',')
                        .map(|x| x.trim().parse())
                        .collect::<Result<_, _>>()
                        .map_err(|_| Failure::usage("bad --members list"))?,
                };
                (
                    StrideStructure::new(*d)?,
                    ZWindowSet::new((window.components()[0], window.components()[1]), members)?,
                )
            };
            let level = zlevels::z_level(stride, &set);
            let uniform = if set.is_empty() {
                None
            } else {
                Some(zlevels::z_uniform(stride, &set)?)
            };
            Ok((
                0,
                json!({
                    "d": stride.d,
                    "window": [set.window.0, set.window.1],
                    "level": level,
                    "uniform": uniform,
                }),
            ))
        }
        Cmd::Twin { k, n, cache } => {
            let report = match cache {
                Some(path) if path.exists() => {
                    let set = zlevels::read_sieve_cache(path, *k)?;
                    let stride = StrideStructure::new(2)?;
                    let neg = zlevels::z_level(stride, &set).map(|l| -l).unwrap_or(0);
                    zlevels::TwinReport {
                        neg_level: neg,
                        window: set.window,
                        note: if neg < 2 {
                            Some("window too small: no prime pair at distance 2 inside it".into())
                        } else {
                            None
                        },
                    }
                }
                _ => {
                    let rep = zlevels::twin_level(*k, *n)?;
                    if let Some(path) = cache {
                        let set = zlevels::primes_window(*k, *n)?;
                        zlevels::write_sieve_cache(path, &set)?;
                    }
                    rep
                }
            };
            Ok((0, to_value(&report)))
        }
        Cmd::Induce { p } => {
            let shape = FieldShape::new(*p, 2)?;
            let desc = levelset_core::hlf::induced_base_structure(shape)?;
            let at = |i: i64, j: i64| {
                desc.construct(&NbhdId::ball(i), &MultiIndex::new(vec![j]))
                    .map(|h| h.to_string())
            };
            Ok((
                0,
                json!({
                    "p": p,
                    "descriptor": to_value(&desc),
                    "table": {
                        "j<0": at(0, -1)?,
                        "j=0": at(0, 0)?,
                        "j>0": at(0, 1)?,
                    },
                    "ball_level": [0],
                }),
            ))
        }
        Cmd::Inflate { desc, pivot } => {
            let desc = parse_desc(desc)?;
            let inflated = levelset_core::structure::inflate(&desc, *pivot);
            Ok((
                0,
                json!({
                    "descriptor": to_value(&inflated),
                    "elevation": inflated.elevation(),
                }),
            ))
        }
        Cmd::Stack { upper, lower } => {
            let upper = parse_desc(upper)?;
            let lower = parse_desc(lower)?;
            let stacked = levelset_core::structure::stack(&upper, &lower)?;
            Ok((
                0,
                json!({
                    "descriptor": to_value(&stacked),
                    "elevation": stacked.elevation(),
                }),
            ))
        }
        Cmd::ProductCheck {
            left,
            right,
            nbhd,
            gamma_box,
        } => {
            let left = parse_desc(left)?;
            let right = parse_desc(right)?;
            let prod = levelset_core::structure::product(&left, &right)?;
            let window = build_window(&prod, nbhd, gamma_box)?;
            let report = check_rigidity(&prod, &window)?;
            Ok((if report.passed { 0 } else { 1 }, to_value(&report)))
        }
        Cmd::OracleCheck {
            field,
            samples,
            seed,
        } => {
            let shape = parse_field(field)?;
            let w = SafeWindow::standard(shape);
            let model = w.model()?;
            let mut rng = Rng::new(*seed);
            let mut member_agreements = 0u32;
            let mut trichotomy_agreements = 0u32;
            for _ in 0..*samples {
                let d = w.dset(&mut rng, 0);
                let x = model.element_at(rng.below(model.point_count() as u64) as usize);
                let direct = d.member(&x)?;
                let modeled = model.member_model(&x, &SymbolicSet::Dist(d.clone()))?;
                if direct == modeled {
                    member_agreements += 1;
                }
                let d2 = w.dset(&mut rng, 0);
                let meet = d.intersect(&d2)?;
                let bits = model
                    .points_of_dset(&d)?
                    .intersect(&model.points_of_dset(&d2)?);
                let agree = match meet {
                    None => bits.is_empty(),
                    Some(m) => bits == model.points_of_dset(&m)?,
                };
                if agree {
                    trichotomy_agreements += 1;
                }
            }
            let pass = member_agreements == *samples && trichotomy_agreements == *samples;
            Ok((
                u8::from(!pass),
                json!({
                    "samples": samples,
                    "member_agreements": member_agreements,
                    "trichotomy_agreements": trichotomy_agreements,
                    "pass": pass,
                }),
            ))
        }
    }
}

fn render_pretty(v: &Value, indent: usize) -> String {
    // explicitly non-stable human format
    match v {
        Value::Object(map) => {
            let mut out = String::new();
            for (k, val) in map {
                out.push_str(&" ".repeat(indent));
                out.push_str(k);
                out.push_str(": ");
                match val {
                    Value::Object(_) | Value::Array(_) => {
                        out.push('\n');
                        out.push_str(&render_pretty(val, indent + 2));
                    }
                    other => {
                        out.push_str(&other.to_string());
                        out.push('\n');
                    }
                }
            }
            out
        }
        Value::Array(items) => {
            let mut out = String::new();
            for item in items {
                out.push_str(&" ".repeat(indent));
                out.push_str("- ");
                out.push_str(&item.to_string());
                out.push('\n');
            }
            out
        }
        other => format!("{}{}\n", " ".repeat(indent), other),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.cmd) {
        Ok((code, value)) => {
            if cli.pretty {
                print!("{}", render_pretty(&value, 0));
            } else {
                println!("{}", serde_json::to_string(&value).expect("JSON output"));
            }
            ExitCode::from(code)
        }
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}
