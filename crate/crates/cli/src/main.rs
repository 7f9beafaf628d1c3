use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use cyquot::chamber::{chamber_cap, chamber_test, reflect_into_chamber, NodalOrbitClass, QuadLattice};
use cyquot::classify::{
    check_cy_type_a, check_cy_type_k, derive_type_a, derive_type_k, pi1_criterion, Existence, Pi1Verdict, Status, TraceStep, TypeKSpec, Verdict,
};
use cyquot::cyclotomic::set_conductor_bound;
use cyquot::picard::{picard_crepant, picard_quotient_torus, solve_k3_invariants, type_k_picard, PicardError};
use cyquot::schema::{canonical_json, load_spec, preset_document, LoadedSpec};
use cyquot::torus::{ActionSpec, FixedKind};

/// Calabi-Yau quotients of abelian and K3 x elliptic threefolds.
#[derive(Parser)]
#[command(name = "cyquot", version)]
struct Cli {
    /// Print the machine-readable JSON block instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Include the elimination trace.
    #[arg(long, global = true)]
    trace: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    TypeA,
    TypeK,
}

#[derive(Subcommand)]
enum Command {
    /// Run a classification pipeline.
    Derive {
        #[arg(value_enum)]
        kind: Kind,
    },
    /// Check the Calabi-Yau conditions for a preset or JSON file.
    Verify { spec: String },
    /// Picard number of the quotient (and its crepant resolution).
    Picard { spec: String },
    /// Lefschetz number and fixed points of one group element.
    Lefschetz {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        element: String,
    },
    /// Test a lattice vector against a wall system of nodal orbits.
    Chamber {
        /// JSON file holding the Gram matrix.
        #[arg(long)]
        gram: String,
        /// JSON file holding a list of orbits, each a list of vectors.
        #[arg(long)]
        orbits: String,
        /// Comma-separated integer coordinates.
        #[arg(long, allow_hyphen_values = true)]
        vector: String,
        /// Reflect the vector into the chamber.
        #[arg(long)]
        reduce: bool,
        /// Positive vector pairing positively with every wall, used to drive the walk.
        #[arg(long, allow_hyphen_values = true)]
        reference: Option<String>,
    },
    /// Print a table.
    Table {
        #[arg(value_enum)]
        kind: TableKind,
    },
    /// Whether a Picard number forces a finite fundamental group.
    Pi1 { rho: u64 },
    /// Print the JSON document of a preset.
    Export { preset: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum TableKind {
    TypeK,
}

struct Report {
    json: Value,
    text: String,
    failed: bool,
}

impl Report {
    fn ok(json: Value, text: String) -> Self {
        Report { json, text, failed: false }
    }
}

/// Distinguishes malformed input (exit 2) from failures of the computation itself.
#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for InputError {}

fn input<T, E: std::fmt::Display>(r: std::result::Result<T, E>) -> Result<T> {
    r.map_err(|e| InputError(e.to_string()).into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Ok(v) = std::env::var("CYQUOT_MAX_CONDUCTOR") {
        match v.parse::<u32>() {
            Ok(b) => set_conductor_bound(b),
            Err(_) => {
                eprintln!("error: CYQUOT_MAX_CONDUCTOR must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                match canonical_json(&report.json) {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return ExitCode::from(2);
                    }
                }
            } else {
                print!("{}", report.text);
            }
            ExitCode::from(if report.failed { 1 } else { 0 })
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::Derive { kind: Kind::TypeA } => derive_a(cli.trace),
        Command::Derive { kind: Kind::TypeK } => derive_k(cli.trace),
        Command::Verify { spec } => verify(spec),
        Command::Picard { spec } => picard(spec),
        Command::Lefschetz { spec, element } => lefschetz(spec, element),
        Command::Chamber { gram, orbits, vector, reduce, reference } => chamber(gram, orbits, vector, *reduce, reference.as_deref()),
        Command::Table { kind: TableKind::TypeK } => table_k(),
        Command::Pi1 { rho } => pi1(*rho),
        Command::Export { preset } => {
            let doc = input(preset_document(preset))?;
            let json = serde_json::to_value(&doc)?;
            let text = canonical_json(&doc)? + "\n";
            Ok(Report::ok(json, text))
        }
    }
}

fn trace_text(trace: &[TraceStep]) -> String {
    let mut out = String::from("\nElimination trace:\n");
    for step in trace {
        let outcome = if step.certificate.eliminated { "eliminated" } else { "survives" };
        out += &format!("  {:<14} {:<22} {}\n", step.candidate, serde_json::to_value(step.rule).unwrap_or_default().as_str().unwrap_or(""), outcome);
        for a in &step.certificate.steps {
            out += &format!("      {} = {}{}\n", a.claim, a.value, if a.holds { "" } else { "  (false)" });
        }
    }
    out
}

fn derive_a(trace: bool) -> Result<Report> {
    let result = derive_type_a()?;
    let mut text = format!(
        "Possible group orders of a pre-Calabi-Yau group: {:?}\n\nCalabi-Yau groups of Type A ({} classes):\n",
        result.order_bound.orders,
        result.classes.len()
    );
    for c in &result.classes {
        text += &format!(
            "  {:<5} realized by {:<14} verdict {}  quotient Picard number {}\n        action on 1-forms: {}\n",
            c.group,
            c.preset,
            c.verdict.status,
            c.rho,
            c.normal_form.join("  ")
        );
    }
    if trace {
        text += &trace_text(&result.trace);
    }
    let mut json = json!({
        "command": "derive type-a",
        "order_bound": result.order_bound.orders,
        "classes": result.classes,
    });
    if trace {
        json["trace"] = serde_json::to_value(&result.trace)?;
    }
    Ok(Report::ok(json, text))
}

fn derive_k(trace: bool) -> Result<Report> {
    let result = derive_type_k()?;
    let mut text = format!("Calabi-Yau groups of Type K ({} candidates):\n", result.candidates.len());
    for c in &result.candidates {
        text += &format!(
            "  {:<8} H = C{}xC{}  order {:<3} Picard number {:<3} existence {:<10} preset {}\n",
            c.group, c.pair.0, c.pair.1, c.order, c.rho, c.existence, c.preset
        );
    }
    if trace {
        text += &trace_text(&result.trace);
    }
    let mut json = json!({ "command": "derive type-k", "candidates": result.candidates });
    if trace {
        json["trace"] = serde_json::to_value(&result.trace)?;
    }
    Ok(Report::ok(json, text))
}

fn verdict_text(v: &Verdict) -> String {
    let mut out = String::new();
    for r in &v.reasons {
        match &r.witness {
            Some(w) => out += &format!("  violated: {} (witness {w}: {})\n", r.condition, r.data),
            None => out += &format!("  {}: {}\n", r.condition, r.data),
        }
    }
    out
}

fn verify(name: &str) -> Result<Report> {
    match input(load_spec(name))? {
        LoadedSpec::TypeA(spec) => {
            let v = check_cy_type_a(&spec)?;
            let text = format!("{name}: Calabi-Yau action of {} on an abelian threefold: {}\n{}", spec.group().name(), v.status, verdict_text(&v));
            Ok(Report { json: json!({ "command": "verify", "spec": name, "kind": "type-a", "verdict": v }), text, failed: !v.passed() })
        }
        LoadedSpec::TypeK(spec) => {
            let v = check_cy_type_k(&spec)?;
            let status = match (v.status, spec.existence) {
                (Status::Fail, _) => "fail".to_string(),
                (_, Existence::Realized) => v.status.to_string(),
                (_, e) => format!("candidate, existence {e}"),
            };
            let text = format!("{name}: Type K action of {}: {status}\n{}", spec.group().name(), verdict_text(&v));
            Ok(Report {
                json: json!({ "command": "verify", "spec": name, "kind": "type-k", "existence": spec.existence, "summary": status, "verdict": v }),
                text,
                failed: !v.passed(),
            })
        }
    }
}

fn type_k_rho(spec: &TypeKSpec) -> Result<(u64, Value)> {
    let inv = solve_k3_invariants(spec.group(), &spec.fixed_counts)?;
    Ok((type_k_picard(&inv), serde_json::to_value(&inv)?))
}

fn picard(name: &str) -> Result<Report> {
    match input(load_spec(name))? {
        LoadedSpec::TypeA(spec) => match picard_crepant(&spec) {
            Ok(r) => {
                let mut text = format!(
                    "{name}: Picard number of the quotient {} (invariant classes {})\n",
                    r.quotient_rho,
                    r.invariant_basis.join(", ")
                );
                text += &format!("{name}: exceptional divisors of a crepant resolution {}\n", r.exceptional_contribution);
                for o in &r.orbit_census {
                    text += &format!(
                        "    orbit of size {:<3} stabilizer C{} generated by {} with weights {:?}\n",
                        o.orbit_size, o.stabilizer_order, o.stabilizer_generator, o.weights
                    );
                }
                text += &format!("{name}: Picard number of the crepant resolution {}\n", r.total_rho);
                Ok(Report::ok(json!({ "command": "picard", "spec": name, "kind": "type-a", "report": r }), text))
            }
            Err(PicardError::PositiveDimensional(_) | PicardError::NotThreefold(_) | PicardError::NonCyclicStabilizer(_)) => {
                let q = picard_quotient_torus(&spec)?;
                let text = format!("{name}: Picard number of the quotient {} (invariant classes {})\n", q.rho, q.basis.join(", "));
                Ok(Report::ok(json!({ "command": "picard", "spec": name, "kind": "type-a", "quotient": q }), text))
            }
            Err(e) => Err(e.into()),
        },
        LoadedSpec::TypeK(spec) => {
            let (rho, inv) = type_k_rho(&spec)?;
            let text = format!("{name}: Picard number of (K3 x E)/{} is {rho} (invariant part of H^2 of the K3 side plus one)\n", spec.group().name());
            Ok(Report::ok(json!({ "command": "picard", "spec": name, "kind": "type-k", "rho": rho, "k3_invariants": inv }), text))
        }
    }
}

fn lefschetz(name: &str, word: &str) -> Result<Report> {
    let spec: ActionSpec = match input(load_spec(name))? {
        LoadedSpec::TypeA(s) => s,
        LoadedSpec::TypeK(k) => k.elliptic,
    };
    let g = input(spec.element(word))?;
    let l = g.lefschetz_number();
    let fixed = g.fixed_points();
    let (kind, count) = match fixed.kind {
        FixedKind::Empty => ("empty", Some(0)),
        FixedKind::Isolated(n) => ("isolated", Some(n)),
        FixedKind::PositiveDimensional => ("positive-dimensional", None),
    };
    let points: Vec<Vec<String>> = fixed.points.iter().map(|p| p.iter().map(|x| x.to_string()).collect()).collect();
    let mut text = format!("{name}: element {word} has linear part {}\n", g.linear());
    text += &format!("  Lefschetz number det(I - M) = {l}\n  fixed locus: {kind}");
    if let Some(n) = count {
        text += &format!(", {n} points");
    }
    text += "\n";
    Ok(Report::ok(
        json!({ "command": "lefschetz", "spec": name, "element": word, "lefschetz": l, "fixed_kind": kind, "fixed_count": count, "fixed_points": points }),
        text,
    ))
}

fn parse_csv(s: &str) -> Result<Vec<i64>> {
    input(s.split(',').map(|t| t.trim().parse::<i64>().with_context(|| format!("bad integer {t:?} in {s:?}"))).collect::<Result<Vec<_>>>())
}

fn read_json(path: &str) -> Result<Value> {
    let text = input(std::fs::read_to_string(path).with_context(|| format!("cannot read {path}")))?;
    input(serde_json::from_str(&text).with_context(|| format!("malformed {path}")))
}

fn chamber(gram: &str, orbits: &str, vector: &str, reduce: bool, reference: Option<&str>) -> Result<Report> {
    let lattice = input(QuadLattice::new(input(serde_json::from_value(read_json(gram)?))?))?;
    let orbit_vectors: Vec<Vec<Vec<i64>>> = input(serde_json::from_value(read_json(orbits)?))?;
    let orbits = orbit_vectors.into_iter().map(|o| input(NodalOrbitClass::new(&lattice, o))).collect::<Result<Vec<_>>>()?;
    let x = parse_csv(vector)?;
    let inside = input(chamber_test(&lattice, &x, &orbits))?;
    let mut text = format!("vector {x:?} lies in the chamber: {inside}\n");
    let mut json = json!({ "command": "chamber", "vector": x, "in_chamber": inside });
    if reduce {
        let Some(h) = reference else { bail!(InputError("--reduce needs --reference".into())) };
        let h = parse_csv(h)?;
        let walk = input(reflect_into_chamber(&lattice, &x, &orbits, &h, chamber_cap()))?;
        text += &format!("reduced to {:?} by the orbit reflections {:?}\n", walk.y, walk.word);
        json["reduced"] = json!(walk.y);
        json["word"] = json!(walk.word);
    }
    Ok(Report::ok(json, text))
}

fn table_k() -> Result<Report> {
    let result = derive_type_k()?;
    let groups: Vec<&str> = result.candidates.iter().map(|c| c.group.as_str()).collect();
    let rhos: Vec<u64> = result.candidates.iter().map(|c| c.rho).collect();
    let width = groups.iter().map(|g| g.len()).max().unwrap_or(1).max(3);
    let row = |label: &str, cells: Vec<String>| format!("{label:<6}{}\n", cells.iter().map(|c| format!(" {c:>width$}")).collect::<String>());
    let mut text = String::from("Picard numbers of Type K Calabi-Yau threefolds by Galois group\n");
    text += &row("G", groups.iter().map(|g| g.to_string()).collect());
    text += &row("rho", rhos.iter().map(|r| r.to_string()).collect());
    text += &row("exist", result.candidates.iter().map(|c| c.existence.to_string()).collect());
    let rows: Vec<Value> = result.candidates.iter().map(|c| json!({ "group": c.group, "rho": c.rho, "existence": c.existence })).collect();
    Ok(Report::ok(json!({ "command": "table type-k", "rows": rows }), text))
}

fn pi1(rho: u64) -> Result<Report> {
    let v = pi1_criterion(rho)?;
    let text = match &v {
        Pi1Verdict::Finite => format!("Picard number {rho}: the fundamental group is finite\n"),
        Pi1Verdict::PossiblyInfinite { witness } => {
            format!("Picard number {rho}: the fundamental group may be infinite (attained by {witness})\n")
        }
    };
    Ok(Report::ok(json!({ "command": "pi1", "rho": rho, "result": v }), text))
}
