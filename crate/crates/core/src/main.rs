use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subsemi::enumeration::{self, Caps, Constraint, EnumerationQuery, Mode};
use subsemi::free_band::{canonical_form, word_equal, BandWord};
use subsemi::harness::{self, Harness};
use subsemi::table::parse_sgt;
use subsemi::{ConstructionSpec, Error};

#[derive(Parser)]
#[command(name = "subsemi")]
#[command(about = "Subsemigroup orders in finite semigroups with x^r = x")]
#[command(version)]
struct Cli {
    /// Output format
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Print timings and census progress (progress goes to stderr)
    #[arg(long, short, global = true)]
    verbose: bool,

    /// Largest band order the census may enumerate
    #[arg(long, global = true, default_value_t = 7)]
    band_cap: usize,

    /// Largest order the census may enumerate for x^r = x
    #[arg(long, global = true, default_value_t = 5)]
    exp_cap: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Check that every band of order n..=max-order has a subsemigroup of order n
    VerifyBand {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_order: usize,
    },
    /// Same check over semigroups with x^r = x
    VerifyExponent {
        #[arg(long)]
        r: u32,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        max_order: usize,
    },
    /// Build a semigroup of order > n without a subsemigroup of order n
    Counterexample {
        #[arg(long)]
        n: usize,
        /// Exponent of the identity x^r = x the table must satisfy
        #[arg(long, default_value_t = 2)]
        r: u64,
        /// Write the table here in .sgt format
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Subsemigroup witnesses (and optionally the spectrum) of a .sgt table
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long, value_delimiter = ',')]
        k: Vec<usize>,
        #[arg(long)]
        spectrum: bool,
    },
    /// Build a construction such as rect:3x3, union:(rect:3x3,rect:2x2), zq:3^2
    Build {
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Free band on K generators
    FreeBand {
        #[arg(long)]
        gens: usize,
        /// Write the table here; the legend goes to FILE.legend
        #[arg(long)]
        table_out: Option<PathBuf>,
    },
    /// Canonical form of a word over a, b, c; with two words, whether they are equal
    Word { u: String, v: Option<String> },
    /// Census of small bands (band) or x^r = x semigroups (exp:R)
    Census {
        #[arg(long)]
        order: usize,
        #[arg(long, default_value = "band")]
        constraint: String,
        #[arg(long)]
        count_only: bool,
        /// Every labeled table instead of one per isomorphism class
        #[arg(long)]
        labeled: bool,
        /// One manifest line per table instead of .sgt blocks
        #[arg(long)]
        manifest: bool,
    },
    /// (p, q) with max{(p-1)q, p(q-1)} < n < pq
    Pq {
        #[arg(long)]
        n: u64,
    },
    /// Forced subsemigroup orders by exponent, with the runs backing each row
    Results {
        #[arg(long, default_value_t = 7)]
        max_band_order: usize,
        #[arg(long, default_value_t = 5)]
        max_exp_order: usize,
    },
}

fn emit<T: Serialize + std::fmt::Display>(format: Format, value: &T) -> Result<(), Error> {
    match format {
        Format::Text => print!("{}", value),
        Format::Json => println!(
            "{}",
            serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?
        ),
    }
    Ok(())
}

/// `Ok(true)` when every claim came out as expected.
fn run(cli: Cli) -> Result<bool, Error> {
    let caps = Caps {
        band: cli.band_cap,
        exponent: cli.exp_cap,
    };
    let h = Harness::new(caps).verbose(cli.verbose);
    let fmt = cli.format;
    match cli.command {
        Command::VerifyBand { n, max_order } => {
            let report = h.verify_band_theorem(n, max_order)?;
            emit(fmt, &report)?;
            Ok(report.is_consistent())
        }
        Command::VerifyExponent { r, n, max_order } => {
            let report = h.verify_exponent_theorem(r, n, max_order)?;
            emit(fmt, &report)?;
            Ok(report.is_consistent())
        }
        Command::Counterexample { n, r, out } => {
            let report = h.counterexample(n, r)?;
            if let Some(path) = out {
                fs::write(path, report.table.to_sgt())?;
            }
            emit(fmt, &report)?;
            Ok(report.is_valid())
        }
        Command::Check { file, k, spectrum } => {
            let text = fs::read_to_string(&file)?;
            let table = parse_sgt(&text)?;
            let report = harness::check_table(&table, &k, spectrum)?;
            emit(fmt, &report)?;
            Ok(true)
        }
        Command::Build { spec, out } => {
            let spec: ConstructionSpec = spec.parse()?;
            let table = spec.build()?;
            match out {
                Some(path) => fs::write(path, table.to_sgt())?,
                None => match fmt {
                    Format::Text => print!("{}", table.to_sgt()),
                    Format::Json => emit_json(&table.to_record())?,
                },
            }
            Ok(true)
        }
        Command::FreeBand { gens, table_out } => {
            let (report, fb) = harness::free_band_report(gens)?;
            if let Some(path) = table_out {
                let mut legend = path.clone().into_os_string();
                legend.push(".legend");
                fs::write(&path, fb.table.to_sgt())?;
                fs::write(PathBuf::from(legend), fb.legend_text())?;
            }
            emit(fmt, &report)?;
            Ok(report.formula_order == report.table_order.to_string())
        }
        Command::Word { u, v } => {
            let u = BandWord::parse(&u, 3)?;
            let cu = canonical_form(&u);
            match v {
                None => {
                    match fmt {
                        Format::Text => println!("{}", cu),
                        Format::Json => emit_json(&serde_json::json!({ "word": u.to_string(), "canonical": cu.to_string() }))?,
                    }
                    Ok(true)
                }
                Some(v) => {
                    let v = BandWord::parse(&v, 3)?;
                    let eq = word_equal(&u, &v)?;
                    let cv = canonical_form(&v);
                    match fmt {
                        Format::Text => {
                            println!("{} -> {}", u, cu);
                            println!("{} -> {}", v, cv);
                            println!("equal: {}", eq);
                        }
                        Format::Json => emit_json(&serde_json::json!({
                            "u": u.to_string(), "v": v.to_string(),
                            "canonical_u": cu.to_string(), "canonical_v": cv.to_string(),
                            "equal": eq,
                        }))?,
                    }
                    Ok(true)
                }
            }
        }
        Command::Census {
            order,
            constraint,
            count_only,
            labeled,
            manifest,
        } => {
            let constraint = Constraint::parse_tag(&constraint)?;
            let q = EnumerationQuery {
                order,
                constraint,
                mode: if labeled { Mode::AllLabeled } else { Mode::CanonicalOnly },
            };
            let tables = enumeration::enumerate_with_caps(q, caps)?;
            if count_only {
                match fmt {
                    Format::Text => println!("{}", tables.len()),
                    Format::Json => emit_json(&serde_json::json!({
                        "order": order, "constraint": constraint.tag(), "labeled": labeled, "count": tables.len(),
                    }))?,
                }
            } else if fmt == Format::Json {
                let records: Vec<_> = tables.iter().map(|t| t.to_record()).collect();
                emit_json(&records)?;
            } else if manifest {
                for t in &tables {
                    println!("{}", enumeration::manifest_line(t, constraint));
                }
            } else {
                let blocks: Vec<String> = tables.iter().map(|t| t.to_sgt()).collect();
                print!("{}", blocks.join("\n"));
            }
            Ok(true)
        }
        Command::Pq { n } => {
            emit(fmt, &harness::pq_report(n)?)?;
            Ok(true)
        }
        Command::Results {
            max_band_order,
            max_exp_order,
        } => {
            let table = h.results_table(max_band_order, max_exp_order)?;
            emit(fmt, &table)?;
            Ok(table.is_consistent())
        }
    }
}

fn emit_json<T: Serialize>(value: &T) -> Result<(), Error> {
    println!(
        "{}",
        serde_json::to_string_pretty(value).map_err(|e| Error::Io(e.to_string()))?
    );
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(2),
            };
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {}", e);
            ExitCode::from(2)
        }
    }
}
