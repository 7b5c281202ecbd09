//! `mpair`: run the normal-form pipeline on `.mpair` documents.
//!
//! Reports go to stdout as JSON, a one-line summary goes to stderr. Exit codes:
//! 0 ok, 1 domain error (bad input, failed validation), 2 usage error,
//! 3 internal integrity failure.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use mpair_core::decompose::canonical_form;
use mpair_core::format::{emit, parse, parse_scenario, WitnessFile};
use mpair_core::minimize::minimize;
use mpair_core::modelgen::{
    enumerate_all, model_from_interval, random_mdifferential, random_scenario, random_triple, Provenance,
};
use mpair_core::reduction::{
    self, block_elementary, invariant_signature, reduce_elementary, reduce_quasi_elementary, ReductionResult,
};
use mpair_core::render::{render, RenderFormat};
use mpair_core::report::{
    to_json, DecomposeBody, EnumerateBody, GeneratedBody, InvariantsBody, MinimizeBody, PairingBody, PartitionBody,
    StageBody, ValidationBody,
};
use mpair_core::{oracle, Error, Field, MDifferential};

#[derive(Parser)]
#[command(name = "mpair", version, about = "Canonical forms of M-pairs with exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Input {
    /// Input `.mpair` document, a JSON report carrying an `output` field, or `-` for stdin.
    input: String,
}

#[derive(Args, Clone, Default)]
struct Outputs {
    /// Write the resulting `.mpair` document to this file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the change-of-basis witness (`.witness.json`) to this file.
    #[arg(long)]
    witness: Option<PathBuf>,
    /// Print the resulting `.mpair` document instead of the JSON report.
    #[arg(long)]
    emit: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Check the five invariants; exit 1 when any fails.
    Validate(Input),
    /// Parse and print in canonical form.
    Fmt(Input),
    /// Elementary reduction under ordered changes of basis.
    Reduce {
        #[command(flatten)]
        input: Input,
        /// Reduce B and A/B separately (ordered-pair witness) instead.
        #[arg(long)]
        block: bool,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Quasi-elementary reduction.
    Quasi {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Pairing, trivial set, P/Q/R/X/Y/Z partition, H and h+, homology of A and B.
    Invariants(Input),
    /// Minimal form by elimination of mixed entries.
    Minimize {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Canonical decomposition into labelled indecomposable summands.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Draw the pair: circles by order, boundary left of the axis.
    Render {
        #[command(flatten)]
        input: Input,
        /// `ascii` or `svg`.
        #[arg(long, default_value = "ascii")]
        format: String,
        /// Write the drawing here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Algebraic model of a function on an interval.
    GenInterval {
        /// `.scenario` file or `-`; omit to draw a random scenario.
        scenario: Option<String>,
        /// Number of interior critical points of a random scenario.
        #[arg(long, default_value_t = 2)]
        interior: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "GF(2)")]
        field: String,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Random admissible differential on a random triple.
    GenRandom {
        /// Number of elements.
        #[arg(long, short, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "GF(2)")]
        field: String,
        /// Probability that an admissible entry is sampled nonzero.
        #[arg(long, default_value_t = 0.7)]
        density: f64,
        #[arg(long, default_value_t = 2)]
        max_degree: i64,
        /// Probability that an eligible boundary element is marked trivial.
        #[arg(long, default_value_t = 0.3)]
        trivial_rate: f64,
        #[command(flatten)]
        outputs: Outputs,
    },
    /// Count (and optionally list) every admissible differential on the
    /// triple of a document over a prime field; its equations are ignored.
    Enumerate {
        #[command(flatten)]
        input: Input,
        /// Override the document's field.
        #[arg(long)]
        field: Option<String>,
        /// Refuse when p^(admissible cells) exceeds this.
        #[arg(long, default_value_t = 1 << 20)]
        budget: u128,
        /// Include every document in the report.
        #[arg(long)]
        list: bool,
    },
    /// Apply a witness to a document.
    Conjugate {
        #[command(flatten)]
        input: Input,
        /// `.witness.json` file.
        witness_file: PathBuf,
        #[command(flatten)]
        outputs: Outputs,
    },
}

enum Failure {
    Domain(String),
    Usage(String),
    Integrity(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_integrity() {
            Failure::Integrity(e.to_string())
        } else {
            Failure::Domain(e.to_string())
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}")))
    }
}

fn write_file(path: &PathBuf, text: &str) -> Outcome {
    fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

/// Accepts a raw document or a report whose `result.output` is one.
fn load(input: &Input) -> Result<MDifferential, Failure> {
    let text = read_text(&input.input)?;
    if text.trim_start().starts_with('{') {
        let v: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| Failure::Domain(format!("{}: {e}", input.input)))?;
        let doc = v["result"]["output"]
            .as_str()
            .ok_or_else(|| Failure::Domain(format!("{}: report has no result.output document", input.input)))?;
        return Ok(parse(doc)?);
    }
    Ok(parse(&text)?)
}

fn require_valid(d: &MDifferential) -> Outcome {
    let report = d.validate();
    if report.is_ok() {
        Ok(())
    } else {
        Err(Failure::Domain(format!("input is not valid: {report}")))
    }
}

fn finish<T: Serialize>(command: &str, body: &T, output: Option<&MDifferential>, outputs: &Outputs) -> Outcome {
    if let (Some(path), Some(d)) = (&outputs.out, output) {
        write_file(path, &emit(d))?;
    }
    match (outputs.emit, output) {
        (true, Some(d)) => print!("{}", emit(d)),
        _ => print!("{}", to_json(command, body)),
    }
    Ok(())
}

fn stage(command: &str, mut body: StageBody, r: &ReductionResult, outputs: &Outputs) -> Outcome {
    if let Some(path) = &outputs.witness {
        write_file(path, &WitnessFile::from_transform(&r.witness).to_json())?;
    }
    body.output = emit(&r.output);
    finish(command, &body, Some(&r.output), outputs)
}

fn field_arg(s: &str) -> Result<Field, Failure> {
    s.parse().map_err(|e: Error| Failure::Usage(e.to_string()))
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Validate(input) => {
            let d = load(&input)?;
            let report = d.validate();
            print!("{}", to_json("validate", &ValidationBody::new(&d, &report)));
            if report.is_ok() {
                eprintln!("ok: {} elements over {}", d.len(), d.field());
                Ok(())
            } else {
                Err(Failure::Domain(format!("invalid: {report}")))
            }
        }
        Command::Fmt(input) => {
            print!("{}", emit(&load(&input)?));
            Ok(())
        }
        Command::Reduce { input, block, outputs } => {
            let d = load(&input)?;
            let r = if block { block_elementary(&d)? } else { reduce_elementary(&d)? };
            let mut body = StageBody::new(if block { "block-elementary" } else { "elementary" }, &r);
            if !block {
                body.pairing = Some(PairingBody::new(d.triple(), &reduction::pairing(&d)?));
            }
            eprintln!("{}: {} elements, witness {}", body.stage, d.len(), body.witness_kind);
            stage("reduce", body, &r, &outputs)
        }
        Command::Quasi { input, outputs } => {
            let d = load(&input)?;
            require_valid(&d)?;
            let r = reduce_quasi_elementary(&d)?;
            let mut body = StageBody::new("quasi-elementary", &r);
            body.partition = Some(PartitionBody::new(r.output.triple(), &reduction::partition_pqrxyz(&r.output)?));
            eprintln!("quasi-elementary: {} elements", d.len());
            stage("quasi", body, &r, &outputs)
        }
        Command::Invariants(input) => {
            let d = load(&input)?;
            require_valid(&d)?;
            let all: Vec<usize> = (0..d.len()).collect();
            let b = d.triple().boundary_indices();
            let body = InvariantsBody::new(
                &d,
                &reduction::pairing(&d)?,
                &invariant_signature(&d)?,
                &oracle::homology_dims(&d, &all)?,
                &oracle::homology_dims(&d, &b)?,
            );
            eprintln!(
                "{} pairs, {} essential, |H| = {}",
                body.pairing.pairs.len(),
                body.pairing.essentials.len(),
                body.h.len()
            );
            print!("{}", to_json("invariants", &body));
            Ok(())
        }
        Command::Minimize { input, outputs } => {
            let d = load(&input)?;
            let m = minimize(&d)?;
            if let Some(path) = &outputs.witness {
                write_file(path, &WitnessFile::from_transform(&m.result.witness).to_json())?;
            }
            eprintln!("minimal: {} eliminations, {} certified mixed entries", m.steps.len(), m.certificate.len());
            finish("minimize", &MinimizeBody::new(&m), Some(&m.result.output), &outputs)
        }
        Command::Decompose { input, outputs } => {
            let d = load(&input)?;
            let c = canonical_form(&d)?;
            if let Some(path) = &outputs.witness {
                write_file(path, &WitnessFile::from_transform(&c.minimized.result.witness).to_json())?;
            }
            eprintln!("{}", c.labels.join(" + "));
            finish("decompose", &DecomposeBody::new(&c), Some(&c.minimized.result.output), &outputs)
        }
        Command::Render { input, format, out } => {
            let d = load(&input)?;
            let format: RenderFormat = format.parse().map_err(|e: Error| Failure::Usage(e.to_string()))?;
            let drawing = render(&d, format);
            match out {
                Some(path) => write_file(&path, &drawing),
                None => {
                    print!("{drawing}");
                    Ok(())
                }
            }
        }
        Command::GenInterval { scenario, interior, seed, field, outputs } => {
            let field = field_arg(&field)?;
            let (events, seed) = match scenario {
                Some(path) => (parse_scenario(&read_text(&path)?)?, None),
                None => (random_scenario(seed, interior), Some(seed)),
            };
            let model = model_from_interval(&events, field)?;
            let d = &model.differential;
            let provenance = model
                .provenance
                .iter()
                .map(|p| match p {
                    Provenance::Event { index } => format!("event {index}"),
                    Provenance::Plus { index } => format!("plus {index}"),
                })
                .collect();
            let body = GeneratedBody { seed, valid: d.is_valid(), output: emit(d), provenance };
            eprintln!(
                "|A| = {}, |B| = {}, |C| = {}",
                d.len(),
                d.triple().boundary_indices().len(),
                d.triple().trivial_indices().len()
            );
            finish("gen-interval", &body, Some(d), &outputs)
        }
        Command::GenRandom { n, seed, field, density, max_degree, trivial_rate, outputs } => {
            let field = field_arg(&field)?;
            if !(0.0..=1.0).contains(&density) || !(0.0..=1.0).contains(&trivial_rate) {
                return Err(Failure::Usage("--density and --trivial-rate must lie in [0, 1]".into()));
            }
            let t = random_triple(seed, n, max_degree, trivial_rate);
            let d = random_mdifferential(&t, field, seed, density)?;
            let body =
                GeneratedBody { seed: Some(seed), valid: d.is_valid(), output: emit(&d), provenance: Vec::new() };
            eprintln!("{} elements over {}, seed {seed}", d.len(), field);
            finish("gen-random", &body, Some(&d), &outputs)
        }
        Command::Enumerate { input, field, budget, list } => {
            let d = load(&input)?;
            let field = match field {
                Some(f) => field_arg(&f)?,
                None => d.field(),
            };
            let mut count = 0;
            let mut documents = Vec::new();
            for e in enumerate_all(d.triple(), field, budget)? {
                count += 1;
                if list {
                    documents.push(emit(&e));
                }
            }
            eprintln!("{count} admissible differentials over {field}");
            print!("{}", to_json("enumerate", &EnumerateBody { field: field.to_string(), count, documents }));
            Ok(())
        }
        Command::Conjugate { input, witness_file, outputs } => {
            let d = load(&input)?;
            let text = fs::read_to_string(&witness_file)
                .map_err(|e| Failure::Usage(format!("{}: {e}", witness_file.display())))?;
            let g = WitnessFile::from_json(&text)?.to_transform(d.triple())?;
            let out = d.conjugate(&g)?;
            let body = StageBody {
                stage: "conjugate".into(),
                witness_kind: g.kind().to_string(),
                pairing: None,
                partition: None,
                output: emit(&out),
            };
            eprintln!("applied {} witness", g.kind());
            finish("conjugate", &body, Some(&out), &outputs)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(m)) => {
            eprintln!("usage error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Integrity(m)) => {
            eprintln!("integrity failure: {m}");
            ExitCode::from(3)
        }
    }
}
