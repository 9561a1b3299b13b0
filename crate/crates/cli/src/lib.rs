//! Subcommands of the `zsfusion` binary.
//!
//! Every command produces a [`RunReport`]; the binary prints it either as
//! text or, with `--json`, as one JSON object, and exits with
//! [`Status::exit_code`].

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use zsfusion::bicross::{bicrossed_ring, verify_exact_factorization};
use zsfusion::crossact::verify_crossed_action;
use zsfusion::dualgt::dual_ring_group_theoretical;
use zsfusion::equivar::{equivariant_census_general, equivariantize_pointed};
use zsfusion::fusring::{find_based_iso, fpdim, validate_fusion_ring, FusionRing};
use zsfusion::grp::{FiniteGroup, Subgroup};
use zsfusion::io::{self, DualSimpleDoc, EquivariantSimpleDoc, MatchedPairDoc};
use zsfusion::matched::{derive_matched_pair, verify_matched_pair, zappa_szep};
use zsfusion::numlin::DEFAULT_TOL;
use zsfusion::theorem::theorem1;
use zsfusion::{Error, Options, Report, Violation};

#[derive(Debug, Parser)]
#[command(name = "zsfusion", version, about = "Matched pairs, bicrossed products and crossed extensions of fusion rings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Print the report as a single JSON object.
    #[arg(long, global = true)]
    pub json: bool,

    /// Seed of the randomized splitting steps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Relative singular-value threshold for rank decisions.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,

    /// Omit wall-clock timings so that output is reproducible byte for byte.
    #[arg(long, global = true)]
    pub no_timings: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Auto,
    Group,
    MatchedPair,
    FusionRing,
    CrossedAction,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate a group, matched pair, fusion ring or crossed action.
    Verify {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
    },
    /// List the exact factorizations of a group.
    Factorize {
        path: PathBuf,
        /// Largest generating set used when enumerating subgroups.
        #[arg(long, default_value_t = 2)]
        max_generators: usize,
    },
    /// Derive the matched pair of an exact factorization Σ = GΓ.
    Derive {
        path: PathBuf,
        /// Generators of G, as element indices or names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        g: Vec<String>,
        /// Generators of Γ, as element indices or names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        gamma: Vec<String>,
        /// Write the matched pair document to this file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the Zappa–Szép product of a matched pair.
    Zappa { path: PathBuf },
    /// Build the bicrossed product ring of a crossed action.
    Bicross {
        path: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Equivariantize a pointed crossed action (or a matched pair), or take
    /// the orbit census of a general one.
    Equivariantize {
        path: PathBuf,
        /// Only count simples and their dimensions.
        #[arg(long)]
        census: bool,
    },
    /// Ring of H-bimodules in Σ-graded spaces.
    DualGt {
        path: PathBuf,
        /// Generators of H, as element indices or names.
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        h: Vec<String>,
    },
    /// Search for a based isomorphism between two fusion rings.
    Compare { first: PathBuf, second: PathBuf },
    /// Compare the crossed extension of a matched pair with the dual model.
    Theorem1 { path: PathBuf },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Verify { .. } => "verify",
            Command::Factorize { .. } => "factorize",
            Command::Derive { .. } => "derive",
            Command::Zappa { .. } => "zappa",
            Command::Bicross { .. } => "bicross",
            Command::Equivariantize { .. } => "equivariantize",
            Command::DualGt { .. } => "dual-gt",
            Command::Compare { .. } => "compare",
            Command::Theorem1 { .. } => "theorem1",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Violation,
    InputError,
    Undecided,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Pass => 0,
            Status::Violation => 1,
            Status::InputError => 2,
            Status::Undecided => 3,
        }
    }
}

/// What a command reports; `status` is `pass` exactly when `findings` is empty.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub findings: Vec<Violation>,
    pub ms: Option<u64>,
    pub details: Value,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable report")
    }

    pub fn to_text(&self) -> String {
        let status = serde_json::to_value(self.status).expect("serializable status");
        let mut out = format!("{}: {}", self.command, status.as_str().unwrap_or_default());
        if let Some(ms) = self.ms {
            out.push_str(&format!(" ({ms} ms)"));
        }
        out.push('\n');
        for v in &self.findings {
            out.push_str(&format!("  {}: witness {:?}", v.axiom, v.witness));
            if v.count > 1 {
                out.push_str(&format!(" ({} violations)", v.count));
            }
            if let Some(d) = &v.detail {
                out.push_str(&format!(" [{d}]"));
            }
            out.push('\n');
        }
        if let Some(e) = self.details.get("error").and_then(Value::as_str) {
            out.push_str(&format!("  {e}\n"));
        }
        if let Some(summary) = self.details.get("summary").and_then(Value::as_array) {
            for line in summary {
                if let Some(s) = line.as_str() {
                    out.push_str(&format!("  {s}\n"));
                }
            }
        }
        out
    }
}

/// A finished command: violations found and structured output. The
/// `summary` entry of `details`, if present, lists human-readable lines.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub findings: Report,
    pub details: Value,
}

impl Outcome {
    fn new(findings: Report, details: Value) -> Self {
        Outcome { findings, details }
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> RunReport {
    let opts = Options {
        tol: cli.tol,
        seed: cli.seed,
    };
    let start = Instant::now();
    let result = dispatch(&cli.command, &opts);
    let ms = (!cli.no_timings).then(|| start.elapsed().as_millis() as u64);
    let command = cli.command.name().to_string();
    match result {
        Ok(out) => RunReport {
            command,
            status: if out.findings.is_ok() {
                Status::Pass
            } else {
                Status::Violation
            },
            findings: out.findings.violations,
            ms,
            details: out.details,
        },
        Err(e) => {
            let (status, findings) = classify(&e);
            RunReport {
                command,
                status,
                findings,
                ms,
                details: json!({ "error": e.to_string() }),
            }
        }
    }
}

/// Exit status of an error: malformed or out-of-scope input is an input
/// error, an undecided search is its own outcome, and everything else is a
/// violation found while computing.
fn classify(e: &Error) -> (Status, Vec<Violation>) {
    let finding = |axiom: String, witness: Vec<usize>| {
        vec![Violation {
            axiom,
            witness,
            count: 1,
            detail: None,
        }]
    };
    match e {
        Error::Timeout { .. } => (Status::Undecided, Vec::new()),
        Error::Format(_)
        | Error::Io(_)
        | Error::Json(_)
        | Error::Size { .. }
        | Error::Containment(_)
        | Error::Domain(_)
        | Error::Axiom(_) => (Status::InputError, Vec::new()),
        Error::Validation { what, witness } => (Status::Violation, finding(what.clone(), witness.clone())),
        Error::Factorization {
            g,
            gamma,
            intersection,
            sigma,
        } => (
            Status::Violation,
            finding(
                "exact factorization: |G ∩ Γ| = 1 and |G|·|Γ| = |Σ|".into(),
                vec![*g, *gamma, *intersection, *sigma],
            ),
        ),
        other => (Status::Violation, finding(other.to_string(), Vec::new())),
    }
}

fn dispatch(cmd: &Command, opts: &Options) -> zsfusion::Result<Outcome> {
    match cmd {
        Command::Verify { path, kind } => cmd_verify(path, *kind),
        Command::Factorize {
            path,
            max_generators,
        } => cmd_factorize(path, *max_generators),
        Command::Derive { path, g, gamma, out } => cmd_derive(path, g, gamma, out.as_deref()),
        Command::Zappa { path } => cmd_zappa(path),
        Command::Bicross { path, out } => cmd_bicross(path, out.as_deref()),
        Command::Equivariantize { path, census } => cmd_equivariantize(path, *census, opts),
        Command::DualGt { path, h } => cmd_dual_gt(path, h, opts),
        Command::Compare { first, second } => cmd_compare(first, second),
        Command::Theorem1 { path } => cmd_theorem1(path, opts),
    }
}

fn read_json(path: &Path) -> zsfusion::Result<Value> {
    Ok(serde_json::from_str(&std::fs::read_to_string(path)?)?)
}

fn detect_kind(doc: &Value) -> zsfusion::Result<Kind> {
    let has = |k: &str| doc.get(k).is_some();
    if has("ring") && has("act") {
        Ok(Kind::CrossedAction)
    } else if has("G") && has("Gamma") {
        Ok(Kind::MatchedPair)
    } else if has("rank") && has("N") {
        Ok(Kind::FusionRing)
    } else if has("table") || has("permutations") {
        Ok(Kind::Group)
    } else {
        Err(Error::Format(
            "cannot tell the document kind; pass --kind".into(),
        ))
    }
}

fn kind_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Auto => "auto",
        Kind::Group => "group",
        Kind::MatchedPair => "matched-pair",
        Kind::FusionRing => "fusion-ring",
        Kind::CrossedAction => "crossed-action",
    }
}

pub fn cmd_verify_doc(doc: &Value, kind: Kind) -> zsfusion::Result<(Kind, Report, Vec<String>)> {
    let kind = if kind == Kind::Auto { detect_kind(doc)? } else { kind };
    let text = doc.to_string();
    let (report, summary) = match kind {
        Kind::Group => {
            let g = io::parse_group(&text)?;
            let abelian = if g.is_abelian() { "abelian" } else { "nonabelian" };
            (Report::new(), vec![format!("group of order {} ({abelian})", g.order())])
        }
        Kind::MatchedPair => {
            let mp = io::parse_matched_pair(&text)?;
            let summary = vec![format!("|G| = {}, |Γ| = {}", mp.g().order(), mp.gamma().order())];
            (verify_matched_pair(&mp), summary)
        }
        Kind::FusionRing => {
            let r = io::parse_fusion_ring(&text)?;
            (validate_fusion_ring(&r), vec![format!("rank {}", r.rank())])
        }
        Kind::CrossedAction => {
            let d = io::parse_crossed_action(&text)?;
            let summary = vec![format!("rank {}, |G| = {}", d.ring.rank(), d.mp.g().order())];
            (verify_crossed_action(&d), summary)
        }
        Kind::Auto => unreachable!("resolved above"),
    };
    Ok((kind, report, summary))
}

pub fn cmd_verify(path: &Path, kind: Kind) -> zsfusion::Result<Outcome> {
    let doc = read_json(path)?;
    let (kind, report, summary) = cmd_verify_doc(&doc, kind)?;
    Ok(Outcome::new(
        report,
        json!({ "kind": kind_name(kind), "summary": summary }),
    ))
}

fn names(g: &FiniteGroup, sub: &Subgroup) -> Vec<String> {
    sub.elements().iter().map(|&x| g.name(x)).collect()
}

pub fn cmd_factorize(path: &Path, max_generators: usize) -> zsfusion::Result<Outcome> {
    let sigma = io::load_group(path)?;
    let fs = sigma.exact_factorizations_with(max_generators)?;
    let list: Vec<Value> = fs
        .iter()
        .map(|(g, k)| {
            json!({
                "G": g.elements(),
                "Gamma": k.elements(),
                "G_names": names(&sigma, g),
                "Gamma_names": names(&sigma, k),
            })
        })
        .collect();
    let mut summary = vec![format!("{} exact factorizations of a group of order {}", fs.len(), sigma.order())];
    summary.extend(fs.iter().map(|(g, k)| {
        format!(
            "G = {{{}}}, Γ = {{{}}}",
            names(&sigma, g).join(", "),
            names(&sigma, k).join(", ")
        )
    }));
    Ok(Outcome::new(
        Report::new(),
        json!({ "order": sigma.order(), "factorizations": list, "summary": summary }),
    ))
}

/// Resolves element indices or display names.
fn resolve_elements(g: &FiniteGroup, specs: &[String]) -> zsfusion::Result<Vec<usize>> {
    specs
        .iter()
        .map(|s| s.trim())
        .filter(|s| !s.is_empty())
        .map(|s| {
            if let Ok(i) = s.parse::<usize>() {
                if i < g.order() {
                    return Ok(i);
                }
                return Err(Error::Format(format!("element {i} out of range")));
            }
            g.elements()
                .find(|&a| g.name(a) == s)
                .ok_or_else(|| Error::Format(format!("no element named {s:?}")))
        })
        .collect()
}

fn write_json(path: &Path, value: &Value) -> zsfusion::Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")?;
    Ok(())
}

pub fn cmd_derive(
    path: &Path,
    g: &[String],
    gamma: &[String],
    out: Option<&Path>,
) -> zsfusion::Result<Outcome> {
    let sigma = io::load_group(path)?;
    let g_sub = sigma.subgroup_generated(&resolve_elements(&sigma, g)?)?;
    let k_sub = sigma.subgroup_generated(&resolve_elements(&sigma, gamma)?)?;
    let mp = derive_matched_pair(&sigma, &g_sub, &k_sub)?;
    let doc = io::matched_pair_json(&mp);
    if let Some(p) = out {
        write_json(p, &doc)?;
    }
    let summary = vec![format!(
        "|G| = {}, |Γ| = {}, ▶ {}, ◀ {}",
        mp.g().order(),
        mp.gamma().order(),
        if mp.is_lact_trivial() { "trivial" } else { "nontrivial" },
        if mp.is_ract_trivial() { "trivial" } else { "nontrivial" },
    )];
    Ok(Outcome::new(
        verify_matched_pair(&mp),
        json!({ "matched_pair": doc, "summary": summary }),
    ))
}

pub fn cmd_zappa(path: &Path) -> zsfusion::Result<Outcome> {
    let mp = io::load_matched_pair(path)?;
    let sigma = zappa_szep(&mp)?;
    let abelian = if sigma.is_abelian() { "abelian" } else { "nonabelian" };
    Ok(Outcome::new(
        Report::new(),
        json!({
            "order": sigma.order(),
            "abelian": sigma.is_abelian(),
            "group": io::group_json(&sigma),
            "summary": [format!("group of order {} ({abelian})", sigma.order())],
        }),
    ))
}

fn ring_summary(r: &FusionRing) -> zsfusion::Result<(Value, String)> {
    let d = fpdim(r)?;
    Ok((
        json!({ "dims": d.dims, "total": d.total }),
        format!("rank {}, FPdim {}", r.rank(), d.total),
    ))
}

pub fn cmd_bicross(path: &Path, out: Option<&Path>) -> zsfusion::Result<Outcome> {
    let d = io::load_crossed_action(path)?;
    let b = bicrossed_ring(&d)?;
    let mut report = validate_fusion_ring(&b.ring);
    report.merge(
        "exact factorization: ",
        verify_exact_factorization(&b.ring, &b.g_labels(), &b.c_labels())?,
    );
    let doc = io::fusion_ring_json(&b.ring);
    if let Some(p) = out {
        write_json(p, &doc)?;
    }
    let (fp, line) = ring_summary(&b.ring)?;
    Ok(Outcome::new(
        report,
        json!({ "ring": doc, "fpdim": fp, "summary": [line] }),
    ))
}

pub fn cmd_equivariantize(path: &Path, census_only: bool, opts: &Options) -> zsfusion::Result<Outcome> {
    let doc = read_json(path)?;
    let d = match detect_kind(&doc)? {
        Kind::MatchedPair => {
            let mp = io::parse_matched_pair(&doc.to_string())?;
            if !verify_matched_pair(&mp).is_ok() {
                return Err(Error::Axiom("invalid matched pair".into()));
            }
            zsfusion::crossact::CrossedActionData::pointed(&mp)
        }
        Kind::CrossedAction => io::parse_crossed_action(&doc.to_string())?,
        _ => {
            return Err(Error::Format(
                "expected a matched pair or a crossed action".into(),
            ))
        }
    };
    let census = |d: &zsfusion::crossact::CrossedActionData| -> zsfusion::Result<Outcome> {
        let c = equivariant_census_general(d, opts)?;
        let entries: Vec<Value> = c
            .entries
            .iter()
            .map(|e| {
                json!({
                    "orbit": e.orbit,
                    "stabilizer_order": e.stabilizer_order,
                    "irrep_count": e.irrep_count,
                    "fp_dims": e.fp_dims,
                })
            })
            .collect();
        let summary = vec![
            format!("{} simples over {} orbits", c.fp_dims().len(), c.entries.len()),
            format!(
                "Σ fp² = {:.6}, |G|·FPdim(C) = {:.6} ({})",
                c.sum_squares,
                c.expected,
                if c.consistent { "consistent" } else { "inconsistent" }
            ),
        ];
        Ok(Outcome::new(
            Report::new(),
            json!({
                "mode": "census",
                "entries": entries,
                "sum_squares": c.sum_squares,
                "expected": c.expected,
                "consistent": c.consistent,
                "summary": summary,
            }),
        ))
    };
    let rep = verify_crossed_action(&d);
    if !rep.is_ok() {
        return Err(Error::Axiom(format!("invalid crossed action:\n{rep}")));
    }
    if census_only {
        return census(&d);
    }
    match equivariantize_pointed(&d, opts) {
        Err(Error::Domain(_)) => census(&d),
        Err(e) => Err(e),
        Ok(eq) => {
            let simples: Vec<EquivariantSimpleDoc> = eq.simples.iter().map(Into::into).collect();
            let (fp, line) = ring_summary(&eq.ring)?;
            Ok(Outcome::new(
                validate_fusion_ring(&eq.ring),
                json!({
                    "mode": "pointed",
                    "simples": simples,
                    "ring": io::fusion_ring_json(&eq.ring),
                    "fpdim": fp,
                    "summary": [line],
                }),
            ))
        }
    }
}

pub fn cmd_dual_gt(path: &Path, h: &[String], opts: &Options) -> zsfusion::Result<Outcome> {
    let sigma = io::load_group(path)?;
    let h = sigma.subgroup_generated(&resolve_elements(&sigma, h)?)?;
    let dual = dual_ring_group_theoretical(&sigma, &h, opts)?;
    let simples: Vec<DualSimpleDoc> = dual.simples.iter().map(Into::into).collect();
    let (fp, line) = ring_summary(&dual.ring)?;
    Ok(Outcome::new(
        validate_fusion_ring(&dual.ring),
        json!({
            "subgroup": h.elements(),
            "simples": simples,
            "ring": io::fusion_ring_json(&dual.ring),
            "fpdim": fp,
            "summary": [line],
        }),
    ))
}

fn iso_pairs(r1: &FusionRing, r2: &FusionRing, map: &[usize]) -> Vec<Value> {
    map.iter()
        .enumerate()
        .map(|(a, &b)| json!({ "from": r1.label(a), "to": r2.label(b) }))
        .collect()
}

pub fn cmd_compare(first: &Path, second: &Path) -> zsfusion::Result<Outcome> {
    let r1 = io::load_fusion_ring(first)?;
    let r2 = io::load_fusion_ring(second)?;
    for (name, r) in [("first", &r1), ("second", &r2)] {
        let rep = validate_fusion_ring(r);
        if !rep.is_ok() {
            return Err(Error::Format(format!("the {name} ring is not a fusion ring:\n{rep}")));
        }
    }
    let mut report = Report::new();
    let iso = find_based_iso(&r1, &r2)?;
    let details = match &iso {
        Some(i) => json!({
            "isomorphic": true,
            "map": i.map,
            "bijection": iso_pairs(&r1, &r2, &i.map),
            "summary": [format!("isomorphic: {}", describe_map(&r1, &r2, &i.map))],
        }),
        None => {
            report.record("based isomorphism", &[r1.rank(), r2.rank()]);
            json!({ "isomorphic": false })
        }
    };
    Ok(Outcome::new(report, details))
}

fn describe_map(r1: &FusionRing, r2: &FusionRing, map: &[usize]) -> String {
    map.iter()
        .enumerate()
        .map(|(a, &b)| format!("{} ↦ {}", r1.label(a), r2.label(b)))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn cmd_theorem1(path: &Path, opts: &Options) -> zsfusion::Result<Outcome> {
    let mp = io::load_matched_pair(path)?;
    let out = theorem1(&mp, opts)?;
    let k1 = &out.extension_ring.ring;
    let k2 = &out.dual_ring.ring;
    let (fp, line) = ring_summary(k1)?;
    let mut summary = vec![
        format!("crossed extension: {line}"),
        format!("dual model: rank {}", k2.rank()),
    ];
    if let Some(i) = &out.iso {
        summary.push(format!("bijection: {}", describe_map(k1, k2, &i.map)));
    }
    let extension_simples: Vec<EquivariantSimpleDoc> =
        out.extension_ring.simples.iter().map(Into::into).collect();
    let dual_simples: Vec<DualSimpleDoc> = out.dual_ring.simples.iter().map(Into::into).collect();
    Ok(Outcome::new(
        out.report.clone(),
        json!({
            "matched_pair": serde_json::to_value(MatchedPairDoc::from_pair(&mp))?,
            "extension_ring": io::fusion_ring_json(k1),
            "extension_simples": extension_simples,
            "dual_ring": io::fusion_ring_json(k2),
            "dual_simples": dual_simples,
            "fpdim": fp,
            "bijection": out.iso.as_ref().map(|i| iso_pairs(k1, k2, &i.map)),
            "summary": summary,
        }),
    ))
}
