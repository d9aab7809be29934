//! The `compspace` command line: instance files, commands and reports.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use compspace_core::bridge::{
    build_section_algebra, classify_rank2, generation_check, sections_dim_p1, trivial_iff_irreducible_pair,
    GenerationPoints,
};
use compspace_core::json::{as_object, parse_certificate, parse_lie_algebra, parse_matrix_space, parse_representation};
use compspace_core::lie::{
    adjoint_representation, derived_series, invariant_subspace_witness, is_absolutely_irreducible, verify_lie_algebra,
    verify_representation, LieAlgebra, Representation,
};
use compspace_core::pencil::{kronecker_minimal_indices, pencil_constant_rank, pencil_of};
use compspace_core::space::{
    brute_force_compression_fp, brute_force_rank2, check_desk_scale, common_kernel_and_image, constant_rank_verdict,
    detect_compression_rank2, search_size, verify_certificate, DEFAULT_BUDGET, DEFAULT_EXHAUSTION_BUDGET,
    DEFAULT_RETRIES,
};
use compspace_core::{Error, Field, MatrixSpace};

pub const DEFAULT_PRIME: u64 = 101;

#[derive(Debug, Parser)]
#[command(name = "compspace", version, about = "Exact analysis of linear spaces of matrices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Work over this field instead of the instance's own: `q` or `fp:<p>`.
    #[arg(long, global = true)]
    pub field: Option<String>,
    /// Prime for finite-field exhaustion (default: the instance's own prime, else 101).
    #[arg(long, global = true)]
    pub prime: Option<u64>,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = DEFAULT_RETRIES)]
    pub retries: usize,
    /// Compact single-line JSON on stdout.
    #[arg(long, global = true)]
    pub json: bool,
    /// Suppress the human-readable summary on stderr.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Cap on the number of subspace pairs the oracle may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u128,
    /// Exit with status 2 when the instance's `metadata.expect` disagrees with the report.
    #[arg(long, global = true)]
    pub strict_expect: bool,
    /// Run symbolic minors beyond the desk-scale limits.
    #[arg(long, global = true)]
    pub force: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full pipeline for the instance kind.
    Analyze {
        instance: PathBuf,
        /// Also run the exhaustive compression oracle over this prime.
        #[arg(long)]
        oracle_prime: Option<u64>,
    },
    /// Generic rank and constant-rank verdict.
    ConstantRank { instance: PathBuf },
    /// Rank-2 compression detection, or verification of a saved certificate.
    Compression {
        instance: PathBuf,
        #[arg(long)]
        verify: Option<PathBuf>,
    },
    /// Kronecker minimal indices and minor gcd of a two-dimensional space.
    PencilInvariants { instance: PathBuf },
    /// Jacobi identity and derived series, or the homomorphism check of a representation.
    LieCheck { instance: PathBuf },
    /// Absolute irreducibility of a representation (or of the adjoint of an algebra).
    Irreducible { instance: PathBuf },
    /// Line-bundle dictionary: `--sections-dim n`, or rank-2 classification of a space.
    Bridge {
        instance: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        sections_dim: Option<i64>,
    },
    /// Exhaustive finite-field compression search.
    Oracle {
        instance: PathBuf,
        #[arg(long, requires = "k2")]
        k1: Option<usize>,
        #[arg(long, requires = "k1")]
        k2: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Analyze { .. } => "analyze",
            Command::ConstantRank { .. } => "constant-rank",
            Command::Compression { .. } => "compression",
            Command::PencilInvariants { .. } => "pencil-invariants",
            Command::LieCheck { .. } => "lie-check",
            Command::Irreducible { .. } => "irreducible",
            Command::Bridge { .. } => "bridge",
            Command::Oracle { .. } => "oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Payload {
    MatrixSpace(MatrixSpace),
    Pencil(MatrixSpace),
    LieAlgebra(LieAlgebra),
    Representation(Representation),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub name: Option<String>,
    /// Expected report fields, keyed by command name.
    pub expect: Option<serde_json::Map<String, Value>>,
    pub payload: Payload,
}

impl Instance {
    fn kind(&self) -> &'static str {
        match self.payload {
            Payload::MatrixSpace(_) => "matrix-space",
            Payload::Pencil(_) => "pencil",
            Payload::LieAlgebra(_) => "lie-algebra",
            Payload::Representation(_) => "representation",
        }
    }
}

/// Parses an instance document. `base` resolves relative algebra paths in
/// representation files.
pub fn parse_instance_str(text: &str, base: &Path) -> compspace_core::Result<Instance> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Schema {
        pointer: "/".into(),
        message: format!("malformed JSON: {e}"),
    })?;
    let obj = as_object(&doc, "")?;
    let kind = obj.get("kind").and_then(Value::as_str).ok_or_else(|| Error::Schema {
        pointer: "/kind".into(),
        message: "expected one of matrix-space, pencil, lie-algebra, representation".into(),
    })?;
    // a referenced algebra file may be a bare algebra or a lie-algebra instance
    let resolve = |p: &str| -> compspace_core::Result<Value> {
        let path = base.join(p);
        let text = std::fs::read_to_string(&path)
            .map_err(|e| Error::BadRepresentation(format!("cannot read {}: {e}", path.display())))?;
        let v: Value = serde_json::from_str(&text)
            .map_err(|e| Error::BadRepresentation(format!("malformed JSON in {}: {e}", path.display())))?;
        Ok(v)
    };
    let payload = match kind {
        "matrix-space" => Payload::MatrixSpace(parse_matrix_space(&doc, "")?),
        "pencil" => {
            let s = parse_matrix_space(&doc, "")?;
            if s.dim() != 2 {
                return Err(Error::Schema {
                    pointer: "/basis".into(),
                    message: format!("a pencil has exactly 2 basis matrices, found {}", s.dim()),
                });
            }
            Payload::Pencil(s)
        }
        "lie-algebra" => Payload::LieAlgebra(parse_lie_algebra(&doc, "")?),
        "representation" => Payload::Representation(parse_representation(&doc, "", &resolve)?),
        other => {
            return Err(Error::Schema {
                pointer: "/kind".into(),
                message: format!("unknown kind {other:?}"),
            })
        }
    };
    let meta = obj.get("metadata");
    let name = meta
        .and_then(|m| m.get("name"))
        .and_then(Value::as_str)
        .map(String::from);
    let expect = meta.and_then(|m| m.get("expect")).and_then(Value::as_object).cloned();
    Ok(Instance { name, expect, payload })
}

pub fn parse_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse_instance_str(&text, base).with_context(|| format!("invalid instance {}", path.display()))
}

/// What a command produced: the JSON report, a human summary and the exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub human: String,
    pub exit: i32,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize to JSON")
}

fn target_field(flags: &Flags) -> anyhow::Result<Option<Field>> {
    flags
        .field
        .as_deref()
        .map(|s| s.parse::<Field>().map_err(anyhow::Error::from))
        .transpose()
}

fn space_in_field(space: &MatrixSpace, flags: &Flags) -> anyhow::Result<MatrixSpace> {
    Ok(match target_field(flags)? {
        Some(f) => space.reduce(f)?,
        None => space.clone(),
    })
}

fn exhaustion_prime(space: &MatrixSpace, flags: &Flags) -> u64 {
    flags.prime.or(space.field().order()).unwrap_or(DEFAULT_PRIME)
}

fn desk_guard(space: &MatrixSpace, flags: &Flags) -> anyhow::Result<()> {
    if !flags.force {
        check_desk_scale(space)?;
    }
    Ok(())
}

fn expect_space(inst: &Instance, flags: &Flags) -> anyhow::Result<MatrixSpace> {
    match &inst.payload {
        Payload::MatrixSpace(s) | Payload::Pencil(s) => space_in_field(s, flags),
        _ => bail!("command needs a matrix-space or pencil instance, got {}", inst.kind()),
    }
}

fn algebra_in_field(g: &LieAlgebra, flags: &Flags) -> anyhow::Result<LieAlgebra> {
    Ok(match target_field(flags)? {
        Some(f) if f != g.field() => g.reduce(f)?,
        _ => g.clone(),
    })
}

fn rep_in_field(pi: &Representation, flags: &Flags) -> anyhow::Result<Representation> {
    match target_field(flags)? {
        Some(f) if f != pi.algebra.field() => {
            let rho = pi.rho.iter().map(|m| m.reduce(f)).collect::<Result<Vec<_>, _>>()?;
            Ok(Representation::new(pi.algebra.reduce(f)?, rho)?)
        }
        _ => Ok(pi.clone()),
    }
}

fn compression_report(space: &MatrixSpace, flags: &Flags) -> anyhow::Result<(Value, String)> {
    let cert = detect_compression_rank2(space, flags.seed, flags.retries)?;
    let human = match &cert {
        Some(c) => format!("compression space of rank 2, split ({}, {})", c.k1, c.k2),
        None => format!("no rank-2 compression found (retries {})", flags.retries),
    };
    let verified = cert.as_ref().map(|c| verify_certificate(space, c));
    Ok((
        json!({
            "primitive": cert.is_none(),
            "split": cert.as_ref().map(|c| c.split()),
            "certificate": cert,
            "verified": verified,
            "seed": flags.seed,
            "retries": flags.retries,
        }),
        human,
    ))
}

fn oracle_report(space: &MatrixSpace, split: Option<(usize, usize)>, budget: u128) -> anyhow::Result<(Value, String)> {
    match split {
        Some((k1, k2)) => {
            let pairs = search_size(space, k1, k2)?;
            let cert = brute_force_compression_fp(space, k1, k2, budget)?;
            let human = match &cert {
                Some(_) => format!("({k1}, {k2}) certificate found among {pairs} pairs"),
                None => format!("no ({k1}, {k2}) certificate among {pairs} pairs"),
            };
            Ok((
                json!({"k1": k1, "k2": k2, "pairs": pairs, "compression": cert.is_some(), "certificate": cert}),
                human,
            ))
        }
        None => {
            let outcomes = brute_force_rank2(space, budget)?;
            let found: Vec<String> = outcomes
                .iter()
                .filter(|o| o.certificate.is_some())
                .map(|o| format!("({}, {})", o.k1, o.k2))
                .collect();
            let human = if found.is_empty() {
                "no rank-2 compression over any split".to_string()
            } else {
                format!("rank-2 compression for splits {}", found.join(", "))
            };
            Ok((json!({"splits": outcomes, "compression": !found.is_empty()}), human))
        }
    }
}

fn analyze_space(space: &MatrixSpace, flags: &Flags, oracle_prime: Option<u64>) -> anyhow::Result<(Value, String)> {
    desk_guard(space, flags)?;
    let prime = exhaustion_prime(space, flags);
    let verdict = constant_rank_verdict(space, prime)?;
    let common = common_kernel_and_image(space);
    let mut human = vec![format!(
        "{}x{} space of dimension {} over {}: generic rank {} ({} upper bound)",
        space.rows(),
        space.cols(),
        space.dim(),
        space.field(),
        verdict.generic_rank,
        to_value(&verdict.upper_bound).as_str().unwrap_or_default()
    )];
    if let Some(c) = verdict.is_constant_rank() {
        human.push(format!("constant rank: {c}"));
    }
    let mut report = json!({
        "kind": "matrix-space",
        "field": space.field(),
        "rows": space.rows(),
        "cols": space.cols(),
        "dim": space.dim(),
        "rank": verdict,
        "common_kernel_dim": common.kernel.dim(),
        "common_image_dim": common.image.dim(),
    });
    if verdict.generic_rank <= 2 {
        let classification = classify_rank2(space, flags.seed, flags.retries)?;
        human.push(if classification.primitive {
            "compression: none (primitive)".to_string()
        } else {
            format!(
                "compression: split {:?}",
                classification.split.expect("certificate present")
            )
        });
        report["compression"] = to_value(&classification);
    } else {
        human.push("compression: rank-2 detector not applicable".into());
        report["compression"] = Value::Null;
    }
    if space.dim() == 2 {
        let (a, b) = pencil_of(space)?;
        report["pencil"] = to_value(&kronecker_minimal_indices(a, b)?);
    }
    let oracle_field = match (oracle_prime, space.field()) {
        (Some(p), _) => Some(Field::prime(p)?),
        (None, f @ Field::Prime(_)) => Some(f),
        (None, Field::Rational) => None,
    };
    if let (Some(f), true) = (oracle_field, verdict.generic_rank <= 2) {
        let reduced = space.reduce(f)?;
        let (o, h) = oracle_report(&reduced, None, flags.budget)?;
        human.push(format!("oracle over {f}: {h}"));
        report["oracle"] = json!({"field": f, "result": o});
    }
    Ok((report, human.join("\n")))
}

fn lie_report(g: &LieAlgebra) -> (Value, String) {
    let jacobi = verify_lie_algebra(g);
    let series = derived_series(g);
    let human = format!(
        "{}-dimensional algebra over {}: Jacobi {}, derived dims {:?}, {}",
        g.dim(),
        g.field(),
        if jacobi { "holds" } else { "FAILS" },
        series.dims,
        if series.solvable { "solvable" } else { "not solvable" }
    );
    (
        json!({"kind": "lie-algebra", "dim": g.dim(), "jacobi": jacobi, "derived_series": series}),
        human,
    )
}

fn irreducible_report(pi: &Representation, flags: &Flags) -> (Value, String) {
    let homomorphism = verify_representation(pi);
    let irr = is_absolutely_irreducible(pi);
    let witness = if irr.irreducible {
        None
    } else {
        invariant_subspace_witness(pi, flags.seed, flags.retries)
    };
    let human = format!(
        "representation on dimension {}: {} (enveloping algebra dimension {} of {})",
        pi.dim_v,
        if irr.irreducible {
            "absolutely irreducible"
        } else {
            "reducible"
        },
        irr.enveloping_dim,
        pi.dim_v * pi.dim_v
    );
    (
        json!({
            "dimV": pi.dim_v,
            "homomorphism": homomorphism,
            "irreducible": irr.irreducible,
            "enveloping_dim": irr.enveloping_dim,
            "invariant_subspace": witness,
        }),
        human,
    )
}

fn sections_report(n: i64) -> anyhow::Result<(Value, String)> {
    let dim = sections_dim_p1(n);
    let mut report = json!({"degree": n, "sections_dim": dim});
    let mut human = format!("{dim}");
    if n >= 0 {
        let sa = build_section_algebra(n, Field::Rational)?;
        let pair = trivial_iff_irreducible_pair(n)?;
        report["section_algebra"] = json!({
            "bracket": sa.bracket,
            "algebra": sa.algebra,
            "derived_series": derived_series(&sa.algebra),
        });
        human.push_str(&format!(
            "\nO({n}): {} bundle, irreducible pair {}",
            if pair.trivial { "trivial" } else { "nontrivial" },
            if pair.has_irreducible_pair {
                "exists"
            } else {
                "does not exist"
            }
        ));
        report["pair"] = to_value(&pair);
    }
    Ok((report, human))
}

/// Compares `expect` entries with the report. Keys starting with `/` are
/// JSON pointers, other keys name top-level fields.
pub fn check_expectations(expect: &serde_json::Map<String, Value>, report: &Value) -> Vec<String> {
    expect
        .iter()
        .filter_map(|(k, want)| {
            let got = if k.starts_with('/') {
                report.pointer(k)
            } else {
                report.get(k)
            };
            (got != Some(want)).then(|| {
                format!(
                    "{k}: expected {want}, got {}",
                    got.map_or("nothing".to_string(), Value::to_string)
                )
            })
        })
        .collect()
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let flags = &cli.flags;
    let mut instance: Option<Instance> = None;
    let (mut report, human) = match &cli.command {
        Command::Analyze {
            instance: path,
            oracle_prime,
        } => {
            let inst = instance.insert(parse_instance(path)?);
            match &inst.payload {
                Payload::MatrixSpace(s) | Payload::Pencil(s) => {
                    analyze_space(&space_in_field(s, flags)?, flags, *oracle_prime)?
                }
                Payload::LieAlgebra(g) => {
                    let g = algebra_in_field(g, flags)?;
                    let (mut r, h) = lie_report(&g);
                    let (ad, h2) = irreducible_report(&adjoint_representation(&g), flags);
                    r["adjoint"] = ad;
                    (r, format!("{h}\nadjoint {h2}"))
                }
                Payload::Representation(pi) => {
                    let pi = rep_in_field(pi, flags)?;
                    let (alg, h1) = lie_report(&pi.algebra);
                    let (mut r, h2) = irreducible_report(&pi, flags);
                    r["kind"] = json!("representation");
                    r["algebra"] = alg;
                    (r, format!("{h1}\n{h2}"))
                }
            }
        }
        Command::ConstantRank { instance: path } => {
            let inst = instance.insert(parse_instance(path)?);
            let space = expect_space(inst, flags)?;
            desk_guard(&space, flags)?;
            let verdict = constant_rank_verdict(&space, exhaustion_prime(&space, flags))?;
            let human = format!(
                "generic rank {}; constant rank: {}",
                verdict.generic_rank,
                verdict
                    .is_constant_rank()
                    .map_or("undecided".to_string(), |b| b.to_string())
            );
            (to_value(&verdict), human)
        }
        Command::Compression { instance: path, verify } => {
            let inst = instance.insert(parse_instance(path)?);
            let space = expect_space(inst, flags)?;
            match verify {
                Some(cert_path) => {
                    let text = std::fs::read_to_string(cert_path)
                        .with_context(|| format!("cannot read {}", cert_path.display()))?;
                    let doc: Value = serde_json::from_str(&text)
                        .with_context(|| format!("malformed JSON in {}", cert_path.display()))?;
                    // accept a bare certificate or any report embedding one
                    let cert_value = doc
                        .pointer("/certificate")
                        .or_else(|| doc.pointer("/compression/certificate"))
                        .filter(|v| !v.is_null())
                        .unwrap_or(&doc);
                    let cert = parse_certificate(cert_value, "", space.rows(), space.cols())?;
                    let valid = verify_certificate(&space, &cert);
                    if !valid {
                        bail!("certificate does not verify against the space");
                    }
                    (
                        json!({"valid": true, "split": cert.split()}),
                        "certificate verified".to_string(),
                    )
                }
                None => compression_report(&space, flags)?,
            }
        }
        Command::PencilInvariants { instance: path } => {
            let inst = instance.insert(parse_instance(path)?);
            let space = expect_space(inst, flags)?;
            let (a, b) = pencil_of(&space)?;
            let inv = kronecker_minimal_indices(a, b)?;
            let cr = pencil_constant_rank(a, b)?;
            let human = format!(
                "normal rank {}, right indices {:?}, left indices {:?}, minor gcd {} ({})",
                inv.normal_rank,
                inv.right_minimal_indices,
                inv.left_minimal_indices,
                inv.minor_gcd,
                if cr.constant_rank {
                    "constant rank"
                } else {
                    "rank drops"
                }
            );
            let mut r = to_value(&inv);
            r["constant_rank"] = json!(cr.constant_rank);
            (r, human)
        }
        Command::LieCheck { instance: path } => {
            let inst = instance.insert(parse_instance(path)?);
            match &inst.payload {
                Payload::LieAlgebra(g) => lie_report(&algebra_in_field(g, flags)?),
                Payload::Representation(pi) => {
                    let pi = rep_in_field(pi, flags)?;
                    let (alg, h) = lie_report(&pi.algebra);
                    let hom = verify_representation(&pi);
                    (
                        json!({"kind": "representation", "algebra": alg, "homomorphism": hom}),
                        format!("{h}\nhomomorphism: {hom}"),
                    )
                }
                _ => bail!(
                    "lie-check needs a lie-algebra or representation instance, got {}",
                    inst.kind()
                ),
            }
        }
        Command::Irreducible { instance: path } => {
            let inst = instance.insert(parse_instance(path)?);
            match &inst.payload {
                Payload::Representation(pi) => irreducible_report(&rep_in_field(pi, flags)?, flags),
                Payload::LieAlgebra(g) => {
                    let (r, h) = irreducible_report(&adjoint_representation(&algebra_in_field(g, flags)?), flags);
                    (r, format!("adjoint {h}"))
                }
                _ => bail!(
                    "irreducible needs a representation or lie-algebra instance, got {}",
                    inst.kind()
                ),
            }
        }
        Command::Bridge {
            instance: path,
            sections_dim,
        } => match (path, sections_dim) {
            (None, Some(n)) => sections_report(*n)?,
            (Some(path), None) => {
                let inst = instance.insert(parse_instance(path)?);
                let space = expect_space(inst, flags)?;
                let report = classify_rank2(&space, flags.seed, flags.retries)?;
                let mut r = to_value(&report);
                let prime = exhaustion_prime(&space, flags);
                let rank = compspace_core::space::sampled_rank(&space, flags.seed, 32).0;
                r["generation"] = match generation_check(
                    &space,
                    &GenerationPoints::Exhaustive {
                        prime,
                        max_points: DEFAULT_EXHAUSTION_BUDGET,
                    },
                    rank,
                ) {
                    Ok(g) => to_value(&g),
                    Err(e) => json!({"error": e.to_string()}),
                };
                let human = match report.split {
                    Some((k1, k2)) => format!(
                        "compression ({k1}, {k2}): {k1} trivial summand(s) on the L side, {k2} on the T side, each with an irreducible 1-dimensional representation"
                    ),
                    None => "primitive: no rank-2 compression".to_string(),
                };
                (r, human)
            }
            _ => bail!("bridge takes either an instance or --sections-dim <n>"),
        },
        Command::Oracle { instance: path, k1, k2 } => {
            let inst = instance.insert(parse_instance(path)?);
            let space = expect_space(inst, flags)?;
            if space.field() == Field::Rational {
                bail!("the oracle enumerates a finite field; pass --field fp:<p>");
            }
            oracle_report(&space, k1.zip(*k2), flags.budget)?
        }
    };
    let mut exit = 0;
    let mut human = human;
    if let Some(inst) = &instance {
        if let Some(name) = &inst.name {
            report["instance"] = json!(name);
        }
        if let Some(expect) = inst
            .expect
            .as_ref()
            .and_then(|e| e.get(cli.command.name()))
            .and_then(Value::as_object)
        {
            let mismatches = check_expectations(expect, &report);
            for m in &mismatches {
                human.push_str(&format!("\nexpectation mismatch: {m}"));
            }
            if !mismatches.is_empty() && flags.strict_expect {
                exit = 2;
            }
        }
    }
    Ok(Outcome { report, human, exit })
}

/// Renders the report for stdout.
pub fn render(report: &Value, compact: bool) -> String {
    if compact {
        serde_json::to_string(report).expect("JSON values render")
    } else {
        serde_json::to_string_pretty(report).expect("JSON values render")
    }
}
