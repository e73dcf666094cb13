mod codec;
mod doc;
mod report;

use clap::{Args, Parser, Subcommand};
use doc::{Document, Meta};
use serde_json::{json, Value};
use std::path::PathBuf;
use std::process::ExitCode;
use toricbunch::bunch::enumerate_bunches;
use toricbunch::classify::{enumerate_kleinschmidt, kleinschmidt_fano_diagnosis};
use toricbunch::fan::{bunch_to_fan, fan_to_bunch, projectable_fan_to_bunch};
use toricbunch::{catalog, divisor, par, Bunch, Error, Limits};

#[derive(Debug)]
pub enum CliError {
    /// Malformed input: exit code 2.
    Parse(String),
    /// The data fails a required condition: exit code 1.
    Verify(String),
    /// A configured cap was hit: exit code 3.
    Cap(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FaceEnumerationTooLarge { .. }
            | Error::EnumerationTooLarge { .. }
            | Error::SearchTooLarge { .. } => CliError::Cap(e.to_string()),
            Error::InvalidParameters(_) => CliError::Parse(e.to_string()),
            _ => CliError::Verify(e.to_string()),
        }
    }
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Verify(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Cap(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Parse(m) | CliError::Verify(m) | CliError::Cap(m) => m,
        }
    }
}

/// Bunches of cones and toric varieties in exact arithmetic.
#[derive(Parser)]
#[command(name = "toricbunch", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args)]
struct Opts {
    /// Machine-readable output.
    #[arg(long, global = true)]
    json: bool,
    /// Run the library's data-parallel loops on N threads.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
    /// Largest face lattice that may be walked.
    #[arg(long, global = true, default_value_t = 1 << 16)]
    max_faces: usize,
    /// Largest number of distinct projected faces in bunch enumeration.
    #[arg(long, global = true, env = "TORICBUNCH_MAX_ENUM", default_value_t = 24)]
    max_enum: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Load and verify a document and report its properties.
    Check { path: PathBuf },
    /// Convert a bunch or projectable fan into a fan document.
    ToFan { path: PathBuf },
    /// Convert a fan or projectable fan into a bunch document.
    ToBunch { path: PathBuf },
    /// Picard group and the semiample, ample and Mori cones.
    Cones { path: PathBuf },
    /// Smooth complete varieties with class group of rank two.
    Classify {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        max_b: u64,
        #[arg(long)]
        fano_only: bool,
    },
    /// All bunches in the projected cone of a bunch document.
    EnumerateBunches { path: PathBuf },
    /// Print a built-in example document; without a name, list them.
    Example { name: Option<String> },
}

struct Ctx {
    json: bool,
    limits: Limits,
}

impl Ctx {
    fn load(&self, path: &PathBuf) -> Result<Document, CliError> {
        let text =
            std::fs::read_to_string(path).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        doc::parse(&text, &self.limits).map_err(|e| match e {
            CliError::Parse(m) => CliError::Parse(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    fn emit(&self, v: &Value, extra: Option<String>) {
        if self.json {
            print!("{}", codec::to_string(v));
        } else {
            print!("{}", report::render(v));
            if let Some(x) = extra {
                print!("\n{x}");
            }
        }
    }
}

fn need_bunch(d: Document) -> Result<(Meta, Bunch), CliError> {
    match d {
        Document::Bunch {
            meta, bunch: Some(b), ..
        } => Ok((meta, b)),
        Document::Bunch { bunch: None, .. } => {
            Err(CliError::Parse("bunch document has no \"bunch\" field".into()))
        }
        _ => Err(CliError::Parse("expected a bunch document".into())),
    }
}

/// A bunch from a bunch document, or from a fan via its Cox construction.
fn bunch_of(d: Document, limits: &Limits) -> Result<(Meta, Bunch), CliError> {
    match d {
        Document::Fan { meta, fan } => Ok((meta, fan_to_bunch(&fan, limits)?)),
        Document::ProjectableFan { meta, pf } => Ok((meta, projectable_fan_to_bunch(&pf, limits)?)),
        d => need_bunch(d),
    }
}

fn picture(b: &toricbunch::ProjectedCone) -> Option<String> {
    report::picture(b).map(|p| format!("weights\n{p}"))
}

fn run(cli: Cli) -> Result<(), CliError> {
    let o = &cli.opts;
    let ctx = Ctx {
        json: o.json,
        limits: Limits {
            max_faces: o.max_faces,
            max_enum: o.max_enum,
            ..Limits::default()
        },
    };
    par::set_parallel(false);
    if let Some(n) = o.threads {
        if n == 0 {
            return Err(CliError::Parse("--threads must be positive".into()));
        }
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        par::set_parallel(n > 1);
    }
    match &cli.command {
        Command::Check { path } => {
            let (mut v, pic) = match ctx.load(path)? {
                Document::Bunch { pc, bunch, .. } => match bunch {
                    Some(b) => (report::bunch(&b), picture(&pc)),
                    None => (report::projected_cone(&pc), picture(&pc)),
                },
                Document::Fan { fan, .. } => (report::fan(&fan, &ctx.limits), None),
                Document::ProjectableFan { pf, .. } => (report::projectable_fan(&pf, &ctx.limits)?, None),
                Document::ProjectedCone { raw, faces, .. } => {
                    (report::raw_projected_cone(&raw, &faces), None)
                }
            };
            if let Value::Object(m) = &mut v {
                m.shift_insert(0, "valid".into(), true.into());
            }
            ctx.emit(&v, pic);
        }
        Command::ToFan { path } => {
            let (meta, fan) = match ctx.load(path)? {
                Document::ProjectableFan { meta, pf } => (meta, pf.quotient_fan().0),
                d => {
                    let (meta, b) = need_bunch(d)?;
                    (meta, bunch_to_fan(&b)?)
                }
            };
            print!("{}", doc::to_string(&Document::Fan { meta, fan }));
        }
        Command::ToBunch { path } => {
            let d = ctx.load(path)?;
            if matches!(d, Document::Bunch { .. }) {
                return Err(CliError::Parse(
                    "expected a fan or projectable-fan document".into(),
                ));
            }
            let (meta, b) = bunch_of(d, &ctx.limits)?;
            print!(
                "{}",
                doc::to_string(&Document::Bunch {
                    meta,
                    pc: b.pc().clone(),
                    bunch: Some(b)
                })
            );
        }
        Command::Cones { path } => {
            let (_, b) = bunch_of(ctx.load(path)?, &ctx.limits)?;
            let r = divisor::report(&b)?;
            ctx.emit(&report::divisors(&b, &r), picture(b.pc()));
        }
        Command::Classify {
            dim,
            max_b,
            fano_only,
        } => {
            let mut rows = Vec::new();
            for d in enumerate_kleinschmidt(*dim, *max_b, &ctx.limits)? {
                let f = kleinschmidt_fano_diagnosis(&d, &ctx.limits)?;
                if !fano_only || f.ample {
                    rows.push(report::kleinschmidt_row(&d, &f));
                }
            }
            if ctx.json {
                print!("{}", codec::to_string(&Value::Array(rows)));
            } else {
                print_table(&rows);
            }
        }
        Command::EnumerateBunches { path } => {
            let (meta, pc) = match ctx.load(path)? {
                Document::Bunch { meta, pc, .. } => (meta, pc),
                _ => return Err(CliError::Parse("expected a bunch document".into())),
            };
            let bs = enumerate_bunches(&pc, &ctx.limits)?;
            let docs: Vec<Value> = bs
                .into_iter()
                .map(|b| {
                    doc::to_value(&Document::Bunch {
                        meta: meta.clone(),
                        pc: pc.clone(),
                        bunch: Some(b),
                    })
                })
                .collect();
            if ctx.json {
                print!("{}", codec::to_string(&Value::Array(docs)));
            } else {
                let listed: Vec<Value> = docs.iter().map(|d| d["bunch"].clone()).collect();
                ctx.emit(
                    &json!({"bunches": docs.len(), "weight_index_sets": listed}),
                    picture(&pc),
                );
            }
        }
        Command::Example { name: None } => {
            if ctx.json {
                print!("{}", codec::to_string(&json!(catalog::NAMES)));
            } else {
                for n in catalog::NAMES {
                    println!("{n}");
                }
            }
        }
        Command::Example { name: Some(name) } => {
            let ex = catalog::example(name, &ctx.limits)?.ok_or_else(|| {
                CliError::Parse(format!(
                    "unknown example {name:?}; known: {}",
                    catalog::NAMES.join(", ")
                ))
            })?;
            print!("{}", doc::to_string(&doc::from_example(name, ex)));
        }
    }
    Ok(())
}

fn print_table(rows: &[Value]) {
    let cols = [
        "dimension",
        "b",
        "mu",
        "fano",
        "closed_form",
        "literal_inequality",
    ];
    let cell = |v: &Value| match v {
        Value::Array(a) => format!(
            "({})",
            a.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        ),
        x => x.to_string(),
    };
    let cells: Vec<Vec<String>> = rows
        .iter()
        .map(|r| cols.iter().map(|c| cell(&r[*c])).collect())
        .collect();
    let width: Vec<usize> = (0..cols.len())
        .map(|i| {
            cells
                .iter()
                .map(|r| r[i].len())
                .chain([cols[i].len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let line = |r: Vec<String>| {
        r.iter()
            .zip(&width)
            .map(|(s, w)| format!("{s:w$}"))
            .collect::<Vec<_>>()
            .join("  ")
    };
    println!(
        "{}",
        line(cols.iter().map(|s| s.to_string()).collect()).trim_end()
    );
    for (r, row) in cells.into_iter().zip(rows) {
        let note = if row["literal_disagrees"] == Value::Bool(true) {
            "  literal inequality disagrees"
        } else {
            ""
        };
        println!("{}{note}", line(r).trim_end());
    }
    println!("{} rows", rows.len());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
