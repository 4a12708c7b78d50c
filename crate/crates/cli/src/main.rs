use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use cax::analyse::{
    census, classify, column_deletion_analysis, latin_square_extract, obstruction_report,
    scan_bound,
};
use cax::binary::{
    family_isomorphism_classes, family_k_t_plus_1, k2t_feasibility, Infeasibility, K2tOptions,
    K2tOutcome,
};
use cax::derive::{
    constant_row_average, derive_family, multiplicity_census, observed_constant_row_average,
};
use cax::format::{
    parse_catalogue, parse_records, read_compact, write_array, write_catalogue, write_compact,
    Record,
};
use cax::verify::{verify_ca, verify_cax, verify_oa, verify_psca, verify_sca};
use cax::{automorphisms, canonical_form, catalogue, Array, Catalogue, EnumerateOptions, ScaSet};

/// Excess coverage arrays: verification, enumeration and analysis.
#[derive(Parser)]
#[command(name = "cax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check every record in a file; exit 0 on pass, 1 on fail, 2 on error.
    Verify {
        file: PathBuf,
        #[arg(long)]
        kind: VerifyKind,
        #[arg(long)]
        t: usize,
        /// For cax: require exactly μ(T) coverage.
        #[arg(long)]
        exact: bool,
        /// For psca: required coverage of every sequence.
        #[arg(long, default_value_t = 1)]
        lambda: u64,
    },
    /// Catalogue exact CA_X(v(v+1);2,k,v) up to isomorphism.
    Enumerate {
        #[arg(long)]
        v: usize,
        #[arg(long)]
        k: usize,
        /// Only classes containing no orthogonal array.
        #[arg(long)]
        oa_free: bool,
        #[command(flatten)]
        run: RunArgs,
        /// Write the compact binary format instead of text.
        #[arg(long)]
        compact: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Extend every member of a catalogue by one column.
    Extend {
        catalogue: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        compact: bool,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Per-class TSV: constant rows, OA containment, automorphism group order.
    Classify { catalogue: PathBuf },
    /// Class counts split by OA containment, and the constant-row histogram.
    Census { catalogue: PathBuf },
    /// Arrays derived from a set of permutations by deleting `a` symbols.
    Derive {
        file: PathBuf,
        #[arg(long)]
        a: usize,
        /// Print the multiplicity-vector census instead of the arrays.
        #[arg(long)]
        census: bool,
    },
    /// Canonical form of every array record.
    Canon { file: PathBuf },
    /// Automorphism group of an array.
    Auto { file: PathBuf },
    /// Column deletions, the Latin square inside an OA, and the SCA obstruction.
    #[command(subcommand)]
    Analyse(Analyse),
    /// Binary CA_X with N = (t+1)!: the k = t+1 family and the k = 2t system.
    #[command(subcommand)]
    Binary(Binary),
    /// Lower bound a!·canx on SCAN(t,v).
    Bound {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        canx: u64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Allow runs expected to take longer than a few minutes.
    #[arg(long)]
    deep: bool,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Directory for resumable per-depth results.
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long)]
    verbose: bool,
}

impl RunArgs {
    fn options(&self) -> EnumerateOptions {
        EnumerateOptions {
            jobs: self.jobs.max(1),
            checkpoint: self.checkpoint.clone(),
            verbose: self.verbose,
            ..EnumerateOptions::default()
        }
    }
}

#[derive(Subcommand)]
enum Analyse {
    /// Effect of deleting each column.
    DeleteColumns { file: PathBuf },
    /// Latin square read off the OA left after dropping two columns.
    Latin {
        file: PathBuf,
        /// Two column indices, e.g. `3,4`.
        #[arg(long, value_parser = parse_pair)]
        drop: (usize, usize),
    },
    /// The SCA(7!;7,10) nonexistence argument from a (k=5, v=6) catalogue.
    Obstruction { catalogue: PathBuf },
}

#[derive(Subcommand)]
enum Binary {
    /// Weight profiles of every exact binary array on t+1 columns.
    Family {
        #[arg(long)]
        t: usize,
        /// Print only the number of profiles.
        #[arg(long)]
        count: bool,
    },
    /// Complement structure of that family.
    Classes {
        #[arg(long)]
        t: usize,
    },
    /// Weight-uniform exact binary array on 2t columns.
    K2t {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        deep: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        #[arg(long)]
        verbose: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifyKind {
    Ca,
    Cax,
    Oa,
    Sca,
    Psca,
}

fn parse_pair(s: &str) -> std::result::Result<(usize, usize), String> {
    let bad = || format!("expected two column indices `c1,c2`, got `{s}`");
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn read_records(path: &Path) -> Result<Vec<Record>> {
    parse_records(&read_text(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn read_arrays(path: &Path) -> Result<Vec<Array>> {
    read_records(path)?
        .into_iter()
        .enumerate()
        .map(|(i, r)| match r {
            Record::Array(a) => Ok(a),
            Record::Sca(_) => Err(anyhow!(
                "{}: record {} is `sca`, expected `cax`",
                path.display(),
                i + 1
            )),
        })
        .collect()
}

fn read_single_array(path: &Path) -> Result<Array> {
    let mut arrays = read_arrays(path)?;
    if arrays.len() != 1 {
        bail!(
            "{}: expected one array record, found {}",
            path.display(),
            arrays.len()
        );
    }
    Ok(arrays.remove(0))
}

fn read_catalogue(path: &Path) -> Result<Catalogue> {
    let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let cat = if bytes.starts_with(b"CAXC") {
        read_compact(&bytes[..])
    } else {
        let text =
            String::from_utf8(bytes).with_context(|| format!("{} is not UTF-8", path.display()))?;
        parse_catalogue(&text)
    };
    cat.with_context(|| format!("parsing catalogue {}", path.display()))
}

fn write_output(cat: &Catalogue, output: Option<&Path>, compact: bool) -> Result<()> {
    let Some(path) = output else { return Ok(()) };
    let tmp = path.with_extension("tmp");
    {
        let mut w = BufWriter::new(
            fs::File::create(&tmp).with_context(|| format!("creating {}", tmp.display()))?,
        );
        if compact {
            write_compact(cat, &mut w)?;
        } else {
            w.write_all(write_catalogue(cat).as_bytes())?;
        }
        w.flush()?;
    }
    fs::rename(&tmp, path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

/// `r s`: classes containing an OA and classes without one. For an OA-free
/// catalogue the first count was not searched for and prints as `-`.
fn print_counts(cat: &Catalogue) -> Result<()> {
    let c = census(cat)?;
    if cat.oa_free {
        println!("- {}", c.without_oa);
    } else {
        println!("{} {}", c.with_oa, c.without_oa);
    }
    Ok(())
}

/// Runs above desk scale, by (v, k).
fn enumeration_is_deep(v: usize, k: usize) -> bool {
    match v {
        0..=4 => false,
        5 => k > 4,
        _ => k > 2,
    }
}

const K2T_DESK_LIMIT: usize = 12;

fn run(cli: Cli) -> Result<ExitCode> {
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Verify {
            file,
            kind,
            t,
            exact,
            lambda,
        } => {
            let mut pass = true;
            for (i, record) in read_records(&file)?.into_iter().enumerate() {
                let report = match (kind, record) {
                    (VerifyKind::Ca, Record::Array(a)) => verify_ca(&a, t)?,
                    (VerifyKind::Cax, Record::Array(a)) => verify_cax(&a, t, exact)?,
                    (VerifyKind::Oa, Record::Array(a)) => verify_oa(&a, t)?,
                    (VerifyKind::Sca, Record::Sca(x)) => verify_sca(&x, t)?,
                    (VerifyKind::Psca, Record::Sca(x)) => verify_psca(&x, t, lambda)?,
                    (VerifyKind::Sca | VerifyKind::Psca, Record::Array(_)) => {
                        bail!("record {}: expected an `sca` record", i + 1)
                    }
                    (_, Record::Sca(_)) => bail!("record {}: expected a `cax` record", i + 1),
                };
                pass &= report.pass;
                write!(out, "{report}")?;
            }
            return Ok(if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            });
        }
        Command::Enumerate {
            v,
            k,
            oa_free,
            run,
            compact,
            output,
        } => {
            if enumeration_is_deep(v, k) && !run.deep {
                bail!("v={v}, k={k} is a long run; pass --deep to start it");
            }
            let cat = catalogue(v, k, oa_free, &run.options())?;
            write_output(&cat, output.as_deref(), compact)?;
            print_counts(&cat)?;
        }
        Command::Extend {
            catalogue: path,
            run,
            compact,
            output,
        } => {
            let cat = read_catalogue(&path)?;
            if enumeration_is_deep(cat.v, cat.k + 1) && !run.deep {
                bail!(
                    "extending to v={}, k={} is a long run; pass --deep to start it",
                    cat.v,
                    cat.k + 1
                );
            }
            let next = cax::enumerate::extend_catalogue(&cat, &run.options())?;
            write_output(&next, output.as_deref(), compact)?;
            print_counts(&next)?;
        }
        Command::Classify { catalogue: path } => {
            let cat = read_catalogue(&path)?;
            writeln!(
                out,
                "index\tconstant_rows\tconstant_row_symbols\tcontains_oa\tautomorphism_order"
            )?;
            for (i, a) in cat.members.iter().enumerate() {
                let r = classify(a).with_context(|| format!("member {i}"))?;
                let symbols: Vec<String> = r
                    .constant_row_symbols
                    .iter()
                    .map(|s| s.to_string())
                    .collect();
                writeln!(
                    out,
                    "{i}\t{}\t{}\t{}\t{}",
                    r.constant_row_count,
                    if symbols.is_empty() {
                        "-".to_string()
                    } else {
                        symbols.join(",")
                    },
                    r.contains_oa,
                    r.automorphism_order
                )?;
            }
        }
        Command::Census { catalogue: path } => {
            let cat = read_catalogue(&path)?;
            let c = census(&cat)?;
            writeln!(out, "v\tk\twith_oa\twithout_oa")?;
            let with = if cat.oa_free {
                "-".to_string()
            } else {
                c.with_oa.to_string()
            };
            writeln!(out, "{}\t{}\t{with}\t{}", cat.v, cat.k, c.without_oa)?;
            writeln!(out)?;
            writeln!(out, "constant_rows\tclasses")?;
            for (n, count) in &c.constant_rows {
                writeln!(out, "{n}\t{count}")?;
            }
        }
        Command::Derive { file, a, census } => {
            let x = read_single_sca(&file)?;
            let family = derive_family(&x, a)?;
            if census {
                let arrays: Vec<Array> = family.into_iter().map(|(_, c)| c).collect();
                writeln!(out, "multiplicity_vector\trows")?;
                for (m, n) in multiplicity_census(&arrays, a)? {
                    writeln!(out, "{m}\t{n}")?;
                }
                let observed = observed_constant_row_average(&arrays).expect("non-empty family");
                writeln!(out, "constant_row_average\t{observed}")?;
                if let Ok(expected) = constant_row_average(x.t(), x.v(), a) {
                    writeln!(out, "psca_constant_row_average\t{expected}")?;
                }
            } else {
                let texts: Vec<String> = family.iter().map(|(_, c)| write_array(c)).collect();
                write!(out, "{}", texts.join("\n"))?;
            }
        }
        Command::Canon { file } => {
            let texts: Vec<String> = read_arrays(&file)?
                .iter()
                .map(|a| write_array(canonical_form(a).array()))
                .collect();
            write!(out, "{}", texts.join("\n"))?;
        }
        Command::Auto { file } => {
            write!(out, "{}", automorphisms(&read_single_array(&file)?))?;
        }
        Command::Analyse(Analyse::DeleteColumns { file }) => {
            let a = read_single_array(&file)?;
            writeln!(out, "column\tcontains_oa\tclass")?;
            for r in column_deletion_analysis(&a)? {
                writeln!(out, "{}\t{}\t{}", r.column, r.contains_oa, r.class)?;
            }
        }
        Command::Analyse(Analyse::Latin { file, drop }) => {
            let a = read_single_array(&file)?;
            let x = latin_square_extract(&a, drop)?;
            write!(out, "{}", x.square)?;
            writeln!(out, "transversals\t{}", x.transversals)?;
        }
        Command::Analyse(Analyse::Obstruction { catalogue: path }) => {
            let report = obstruction_report(&read_catalogue(&path)?)?;
            write!(out, "{report}")?;
            if report.conclusion.is_none() {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Binary(Binary::Family { t, count }) => {
            if t == 0 {
                bail!("t must be at least 1");
            }
            if count {
                writeln!(out, "{}", family_k_t_plus_1(t).count())?;
            } else {
                let mut w = BufWriter::new(out.by_ref());
                for p in family_k_t_plus_1(t) {
                    writeln!(w, "{p}")?;
                }
                w.flush()?;
            }
        }
        Command::Binary(Binary::Classes { t }) => {
            write!(out, "{}", family_isomorphism_classes(t)?)?;
        }
        Command::Binary(Binary::K2t {
            t,
            deep,
            node_limit,
            verbose,
        }) => {
            if t > K2T_DESK_LIMIT && !deep {
                bail!("t={t} is above {K2T_DESK_LIMIT}; pass --deep to start it");
            }
            match k2t_feasibility(
                t,
                &K2tOptions {
                    node_limit,
                    verbose,
                },
            )? {
                K2tOutcome::Feasible { profile, nodes } => {
                    writeln!(out, "{profile}")?;
                    eprintln!("feasible after {nodes} nodes");
                }
                K2tOutcome::Infeasible(Infeasibility::Relaxation) => {
                    writeln!(out, "infeasible\trelaxation")?;
                    return Ok(ExitCode::from(1));
                }
                K2tOutcome::Infeasible(Infeasibility::Exhausted { nodes }) => {
                    writeln!(out, "infeasible\texhausted\t{nodes}")?;
                    return Ok(ExitCode::from(1));
                }
                K2tOutcome::Unknown { nodes } => {
                    writeln!(out, "unknown\tnode_limit\t{nodes}")?;
                    return Ok(ExitCode::from(1));
                }
            }
        }
        Command::Bound { t, v, a, canx } => {
            writeln!(out, "{}", scan_bound(t, v, a, canx)?)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn read_single_sca(path: &Path) -> Result<ScaSet> {
    let mut records = read_records(path)?;
    match (records.len(), records.pop()) {
        (1, Some(Record::Sca(x))) => Ok(x),
        (n, _) => bail!(
            "{}: expected one `sca` record, found {n} record(s)",
            path.display()
        ),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e)
            if e.downcast_ref::<io::Error>()
                .is_some_and(|e| e.kind() == io::ErrorKind::BrokenPipe) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
