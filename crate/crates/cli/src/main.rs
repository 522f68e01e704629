use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use rysbench::granules::{check_admissible, check_property, default_bounds, TermBounds};
use rysbench::model::{check_approximations, check_duality};
use rysbench::model_file::LoadedModel;
use rysbench::qrst::{build_cera, build_crad};
use rysbench::quotient::QuotientStructure;
use rysbench::rough_equality::{generalized_quotient, RoughEqualitySpec};
use rysbench::rys::{check_rys_axioms, iota_agreement, supplementation_check};
use rysbench::verify::represent::DEFAULT_MAX_N;
use rysbench::verify::{
    load_suite, representation_search, run_suite, HybridAlgebra, TableAlgebra, Verdict, VerifyOptions,
};
use rysbench::{Error, MereologyMode, ScanMode};

mod text;

#[derive(Parser)]
#[command(name = "rysbench", version, about = "Finite-model checks for rough Y-systems and hybrid rough algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Sampled,
}

#[derive(Args)]
struct Input {
    /// Model file (JSON).
    #[arg(long)]
    input: String,
}

#[derive(Args)]
struct Scan {
    #[arg(long, value_enum)]
    mode: Option<Mode>,
    #[arg(long, default_value_t = 10_000)]
    samples: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl Scan {
    fn resolve(&self, default: ScanMode) -> ScanMode {
        match self.mode {
            None => default,
            Some(Mode::Exhaustive) => ScanMode::Exhaustive,
            Some(Mode::Sampled) => ScanMode::Sampled {
                samples: self.samples,
                seed: self.seed,
            },
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mereology {
    Literal,
    NonemptyWitness,
}

impl From<Mereology> for MereologyMode {
    fn from(m: Mereology) -> Self {
        match m {
            Mereology::Literal => MereologyMode::Literal,
            Mereology::NonemptyWitness => MereologyMode::NonemptyWitness,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Approximation laws of every operator family.
    CheckApprox {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        scan: Scan,
    },
    /// `l(u(A)) = u(A)` and `u(l(A)) = l(A)`.
    CheckDuality {
        #[command(flatten)]
        input: Input,
        /// Family index (default: every family).
        #[arg(long)]
        family: Option<u32>,
        #[command(flatten)]
        scan: Scan,
    },
    /// Rough Y-system axioms, supplementation and the ι-characterizations.
    CheckRys {
        #[command(flatten)]
        input: Input,
        /// Overrides the mereology mode of the model file.
        #[arg(long, value_enum)]
        mereology: Option<Mereology>,
    },
    /// Admissibility profile of a granule set.
    CheckGranules {
        #[command(flatten)]
        input: Input,
        /// Granule set name; `blocks` uses the partition.
        #[arg(long)]
        granules: String,
        /// Check one property (RA, WRA, ACG, WCG, MER, LS, US, ST, AS, NO, FU, UU).
        #[arg(long)]
        property: Option<String>,
        /// Term depth bound for the term-based properties.
        #[arg(long)]
        max_depth: Option<usize>,
        #[arg(long, value_enum)]
        mereology: Option<Mereology>,
    },
    /// Runs a quasi-identity suite on the derived algebra (or a table algebra).
    CheckIdentities {
        #[arg(long, required_unless_present = "algebra", conflicts_with = "algebra")]
        input: Option<String>,
        /// Table algebra file (JSON) instead of a model.
        #[arg(long)]
        algebra: Option<String>,
        /// Built-in suite name or suite file.
        #[arg(long)]
        suite: String,
        #[command(flatten)]
        scan: Scan,
        /// Add per-identity wall time to the report.
        #[arg(long)]
        timing: bool,
    },
    /// Summary of the derived hybrid algebra.
    BuildCera {
        #[command(flatten)]
        input: Input,
        /// Emit the full operation tables as a table algebra.
        #[arg(long)]
        table: bool,
    },
    /// Quotient by a rough-equality specification.
    Quotient {
        #[command(flatten)]
        input: Input,
        #[arg(long, default_value = "x^l=y^l and x^u=y^u")]
        spec: String,
        #[arg(long, value_enum)]
        mereology: Option<Mereology>,
    },
    /// Searches for an approximation space representing an algebra.
    Represent {
        #[arg(long, required_unless_present = "algebra", conflicts_with = "algebra")]
        input: Option<String>,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long, default_value_t = DEFAULT_MAX_N)]
        max_n: usize,
    },
    /// Size and closure counts of the pair structure.
    CradInfo {
        #[command(flatten)]
        input: Input,
    },
}

struct Outcome {
    json: Value,
    text: String,
    pass: bool,
}

fn outcome(json: Value, text: String, pass: bool) -> Outcome {
    Outcome { json, text, pass }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("reports serialize")
}

fn load_algebra(path: &str) -> Result<TableAlgebra, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read algebra file {path}: {e}")))?;
    TableAlgebra::from_json(&text)
}

fn identities<A: HybridAlgebra>(alg: &A, suite: &str, opts: &VerifyOptions) -> Result<Outcome, Error> {
    let (name, qs) = load_suite(suite)?;
    let report = run_suite(alg, &name, &qs, opts)?;
    let pass = report.results.iter().all(|r| r.verdict == Verdict::Holds);
    Ok(outcome(to_value(&report), text::identities(&report), pass))
}

fn represent<A: HybridAlgebra>(alg: &A, max_n: usize) -> Result<Outcome, Error> {
    let r = representation_search(alg, max_n)?;
    let pass = r.found.is_some();
    Ok(outcome(to_value(&r), text::represent(&r), pass))
}

fn run(command: Command) -> Result<Outcome, Error> {
    match command {
        Command::CheckApprox { input, scan } => {
            let m = LoadedModel::from_path(&input.input)?;
            let ctx = &m.context;
            let r = check_approximations(ctx, scan.resolve(ctx.default_mode()))?;
            Ok(outcome(to_value(&r), text::approx(&r), r.all_hold()))
        }
        Command::CheckDuality { input, family, scan } => {
            let m = LoadedModel::from_path(&input.input)?;
            let ctx = &m.context;
            let mode = scan.resolve(ctx.default_mode());
            let indices: Vec<u32> = match family {
                Some(i) => vec![i],
                None => ctx.families.iter().map(|f| f.index).collect(),
            };
            let reports = indices
                .into_iter()
                .map(|i| check_duality(ctx, i, mode))
                .collect::<Result<Vec<_>, _>>()?;
            let pass = reports.iter().all(|r| r.dual);
            let json = json!({ "model": ctx.name, "families": reports });
            Ok(outcome(json, text::duality(&ctx.name, &reports), pass))
        }
        Command::CheckRys { input, mereology } => {
            let m = LoadedModel::from_path(&input.input)?;
            let rys = m.rys_model(mereology.map(Into::into))?;
            let axioms = check_rys_axioms(&rys);
            let supp = supplementation_check(&rys)?;
            let iota = iota_agreement(&rys)?;
            let json = json!({ "axioms": axioms, "supplementation": supp, "iota": iota });
            let text = text::rys(&axioms, &supp, &iota);
            Ok(outcome(json, text, axioms.all_hold()))
        }
        Command::CheckGranules {
            input,
            granules,
            property,
            max_depth,
            mereology,
        } => {
            let m = LoadedModel::from_path(&input.input)?;
            let rys = m.rys_model(mereology.map(Into::into))?;
            let g = m.granule_set(&granules)?;
            let mut bounds: TermBounds = default_bounds(&g);
            if let Some(d) = max_depth {
                bounds.depth = d;
            }
            match property {
                Some(p) => {
                    let v = check_property(&rys, &g, &p, bounds)?;
                    Ok(outcome(to_value(&v), text::property(&v), v.holds))
                }
                None => {
                    let r = check_admissible(&rys, &g, bounds)?;
                    Ok(outcome(to_value(&r), text::granules(&r), r.admissible))
                }
            }
        }
        Command::CheckIdentities {
            input,
            algebra,
            suite,
            scan,
            timing,
        } => {
            let opts = VerifyOptions {
                mode: scan.resolve(ScanMode::Exhaustive),
                timing,
                ..VerifyOptions::default()
            };
            match (input, algebra) {
                (Some(path), _) => {
                    let m = LoadedModel::from_path(&path)?;
                    identities(&build_cera(&m.context)?, &suite, &opts)
                }
                (None, Some(path)) => identities(&load_algebra(&path)?, &suite, &opts),
                (None, None) => Err(Error::Config("--input or --algebra is required".into())),
            }
        }
        Command::BuildCera { input, table } => {
            let m = LoadedModel::from_path(&input.input)?;
            let cera = build_cera(&m.context)?;
            if table {
                let t = TableAlgebra::of(&cera)?;
                let json: Value = serde_json::from_str(&t.to_json_string())?;
                let text = format!("{}\n", t.to_json_string());
                return Ok(outcome(json, text, true));
            }
            let classes = QuotientStructure::symbolic(&m.context)?.classes.len();
            let json = json!({
                "model": cera.name,
                "universe": cera.universe.names_of(m.context.full()),
                "blocks": cera.partition.blocks().iter().map(|b| cera.universe.names_of(*b)).collect::<Vec<_>>(),
                "size": cera.size().to_string(),
                "tau1": cera.tau1_count().to_string(),
                "tau2": classes,
            });
            Ok(outcome(json.clone(), text::cera(&json), true))
        }
        Command::Quotient { input, spec, mereology } => {
            let m = LoadedModel::from_path(&input.input)?;
            let rys = m.rys_model(mereology.map(Into::into))?;
            let spec = RoughEqualitySpec::parse(&spec)?;
            let r = generalized_quotient(&rys, &spec)?;
            Ok(outcome(to_value(&r), text::quotient(&r), r.all_well_defined()))
        }
        Command::Represent { input, algebra, max_n } => match (input, algebra) {
            (Some(path), _) => {
                let m = LoadedModel::from_path(&path)?;
                represent(&build_cera(&m.context)?, max_n)
            }
            (None, Some(path)) => represent(&load_algebra(&path)?, max_n),
            (None, None) => Err(Error::Config("--input or --algebra is required".into())),
        },
        Command::CradInfo { input } => {
            let m = LoadedModel::from_path(&input.input)?;
            let cera = build_cera(&m.context)?;
            let r = build_crad(&cera)?.report();
            Ok(outcome(to_value(&r), text::crad(&r), true))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(j) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(j).build_global() {
            eprintln!("rysbench: cannot start {j} workers: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok(out) => {
            let body = match cli.format {
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json).expect("json")),
                Format::Text => out.text,
            };
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            if out.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("rysbench: {e}");
            ExitCode::from(2)
        }
    }
}
