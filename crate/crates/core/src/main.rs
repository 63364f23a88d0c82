use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use mgl_core::bounds::{alpha_n, forall_bound, foreach_bound, sample_size_cardinality, sample_size_vc, BoundParams};
use mgl_core::combinatorics::{sauer_bound, vc_dimension, BinaryClassView};
use mgl_core::concepts::{enumerate_concepts, find_consistent, ErmOutcome};
use mgl_core::format::{parse_sample, InstanceFile};
use mgl_core::harness::{
    draw_sample, fit_rate_exponent, generate, learning_curve, lemma1_coverage, worst_group_error, ClassSpec,
    GeneratorSpec, Learner,
};
use mgl_core::improper::{improper_learn, DEFAULT_ETA};
use mgl_core::reduction::{build_reduction, parse_cnf, verify_reduction};
use mgl_core::{Error, Result};

#[derive(Parser)]
#[command(name = "mgl", version, about = "Multi-group learning toolkit over finite domains")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassKind {
    Groups,
    Hypotheses,
    Concepts,
}

#[derive(Subcommand)]
enum Cmd {
    /// Reduce a DIMACS 3-CNF formula to a consistency instance.
    Reduce {
        cnf: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the reduction against brute force on one formula or every .cnf in a directory.
    VerifyReduction { path: PathBuf },
    /// Find a group-realizable concept consistent with a sample.
    SolveErm {
        instance: PathBuf,
        /// Sample file; defaults to the instance's [sample] section.
        sample: Option<PathBuf>,
    },
    /// VC dimension of the groups, the hypotheses or the enumerated concept class.
    Vc {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "concepts")]
        class: ClassKind,
    },
    /// Evaluate the closed-form rates and sample sizes.
    Bounds {
        #[arg(long, default_value_t = 100)]
        n: u64,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        /// VC dimension of the class on one group.
        #[arg(long, default_value_t = 1)]
        dg: u64,
        /// VC dimension of the group family.
        #[arg(long = "dG", default_value_t = 1)]
        d_groups: u64,
        /// Largest restricted VC dimension over groups.
        #[arg(long = "dGH", default_value_t = 1)]
        d_gh: u64,
        /// VC dimension of the whole class; defaults to --dGH.
        #[arg(long = "dH")]
        d_h: Option<u64>,
        #[arg(long = "cardG", default_value_t = 1)]
        card_groups: u64,
        #[arg(long = "bigC", default_value_t = 4.0)]
        big_c: f64,
    },
    /// Train the improper learner on a sample drawn from an instance.
    Improper {
        instance: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_ETA)]
        eta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Writes the expert weight table as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Learning curve of worst-group error over a sample-size grid.
    Curve {
        #[arg(long)]
        learner: String,
        #[arg(long)]
        spec: String,
        #[arg(long, value_delimiter = ',', default_value = "64,128,256,512,1024,2048")]
        n_grid: Vec<usize>,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Monte Carlo coverage of the relative deviation inequality.
    Lemma1 {
        #[arg(long, default_value = "thresholds:points=32,count=16")]
        spec: String,
        #[arg(long, default_value_t = 200)]
        n: usize,
        #[arg(long, default_value_t = 0.05)]
        delta: f64,
        #[arg(long, default_value_t = 500)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write a synthetic instance.
    Generate {
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path) -> Result<InstanceFile> {
    InstanceFile::parse(&read(path)?)
}

fn cnf_files(path: &Path) -> Result<Vec<PathBuf>> {
    if !path.is_dir() {
        return Ok(vec![path.to_path_buf()]);
    }
    let mut files: Vec<PathBuf> = fs::read_dir(path)
        .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "cnf"))
        .collect();
    files.sort();
    Ok(files)
}

fn run(cmd: Cmd) -> Result<()> {
    match cmd {
        Cmd::Reduce { cnf, out } => {
            let phi = parse_cnf(&read(&cnf)?)?;
            let text = build_reduction(&phi).to_instance_file()?.to_string();
            emit(&text, out.as_deref())
        }
        Cmd::VerifyReduction { path } => {
            let files = cnf_files(&path)?;
            let mut agree = 0;
            for f in &files {
                let r = verify_reduction(&parse_cnf(&read(f)?)?)?;
                println!(
                    "{} sat={} erm={} agree={}",
                    f.display(),
                    r.sat,
                    r.erm_consistent,
                    r.agree
                );
                agree += usize::from(r.agree);
            }
            println!(
                "formulas={} agree={} disagree={}",
                files.len(),
                agree,
                files.len() - agree
            );
            if agree == files.len() {
                Ok(())
            } else {
                Err(Error::invalid("reduction disagrees with brute force"))
            }
        }
        Cmd::SolveErm { instance, sample } => {
            let file = load_instance(&instance)?;
            let s = match sample {
                Some(p) => parse_sample(&read(&p)?, &file.domain)?,
                None => file
                    .sample
                    .clone()
                    .ok_or_else(|| Error::invalid("no sample file and no [sample] section"))?,
            };
            match find_consistent(&file.groups, &file.hypotheses, &s, file.domain.len())? {
                ErmOutcome::Consistent { concept, witness } => {
                    let mut text = String::from("consistent\n[concept]\n");
                    for (x, y) in concept.values().iter().enumerate() {
                        let _ = writeln!(text, "{} {}", file.domain.name(x), y);
                    }
                    text.push_str("[witness]\n");
                    for w in witness {
                        let _ = writeln!(text, "{}: {}", w.group, w.hypothesis);
                    }
                    print!("{text}");
                    Ok(())
                }
                ErmOutcome::Inconsistent => {
                    println!("inconsistent");
                    Ok(())
                }
                ErmOutcome::ConflictingSample { point } => Err(Error::invalid(format!(
                    "sample labels `{}` both ways",
                    file.domain.name(point)
                ))),
            }
        }
        Cmd::Vc { instance, class } => {
            let file = load_instance(&instance)?;
            let n = file.domain.len();
            let view = match class {
                ClassKind::Groups => BinaryClassView::from_groups(&file.groups, n)?,
                ClassKind::Hypotheses => BinaryClassView::from_hypotheses(&file.hypotheses)?,
                ClassKind::Concepts => {
                    let cs = enumerate_concepts(&file.groups, &file.hypotheses, n)?;
                    println!("members={}", cs.len());
                    BinaryClassView::from_concepts(n, &cs)?
                }
            };
            println!("vc={}", vc_dimension(&view)?);
            Ok(())
        }
        Cmd::Bounds {
            n,
            delta,
            epsilon,
            gamma,
            dg,
            d_groups,
            d_gh,
            d_h,
            card_groups,
            big_c,
        } => {
            let p = BoundParams {
                n,
                delta,
                epsilon,
                gamma,
                d_g: dg,
                d_groups,
                d_gh,
                d_h,
                card_groups,
                big_c,
            };
            let shatter: BigUint = sauer_bound(2 * n, dg);
            println!("alpha_n={}", alpha_n(n, &shatter, delta)?);
            println!("foreach_bound={}", foreach_bound(n, dg, delta)?);
            println!("forall_bound={}", forall_bound(n, d_groups, d_gh, delta)?);
            println!("sample_size_vc={}", sample_size_vc(&p)?);
            println!("sample_size_cardinality={}", sample_size_cardinality(&p)?);
            Ok(())
        }
        Cmd::Improper {
            instance,
            n,
            eta,
            seed,
            out,
        } => {
            let inst = load_instance(&instance)?.instance()?;
            let s = draw_sample(&inst, n, &mut ChaCha8Rng::seed_from_u64(seed))?;
            let clf = improper_learn(&inst, &s, eta)?;
            let w = worst_group_error(&clf, &inst)?;
            println!("worst_group_error={} group={}", w.error, w.group);
            emit(&clf.report(), out.as_deref())
        }
        Cmd::Curve {
            learner,
            spec,
            n_grid,
            trials,
            seed,
            out,
        } => {
            let learner: Learner = learner.parse()?;
            let gen: GeneratorSpec = spec.parse()?;
            let inst = generate(&gen)?;
            let table = learning_curve(learner, &inst, &gen.to_string(), &n_grid, trials, seed)?;
            emit(&table.to_csv(), out.as_deref())?;
            for f in &table.failures {
                eprintln!("failed n={} trial={}: {}", f.n, f.trial, f.reason);
            }
            let summary = match fit_rate_exponent(&table) {
                Ok(fit) => format!(
                    "slope={} intercept={} residual={}",
                    fit.slope, fit.intercept, fit.residual
                ),
                Err(e) => format!("no rate fit: {e}"),
            };
            if out.is_some() {
                println!(
                    "rows={} failures={} gamma={} {summary}",
                    table.rows.len(),
                    table.failures.len(),
                    table.gamma
                );
            } else {
                eprintln!(
                    "rows={} failures={} gamma={} {summary}",
                    table.rows.len(),
                    table.failures.len(),
                    table.gamma
                );
            }
            Ok(())
        }
        Cmd::Lemma1 {
            spec,
            n,
            delta,
            trials,
            seed,
        } => {
            let class: ClassSpec = spec.parse()?;
            let r = lemma1_coverage(&class.view()?, &class.mass(), n, delta, trials, seed)?;
            println!(
                "shatter={} alpha_n={} violations={} trials={} fraction={}",
                r.shatter,
                r.alpha,
                r.violations,
                r.trials,
                r.fraction()
            );
            Ok(())
        }
        Cmd::Generate { spec, out } => {
            let inst = generate(&spec.parse()?)?;
            emit(&InstanceFile::from_instance(&inst).to_string(), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage problems are validation errors; 2 is reserved for caps
            return ExitCode::from(u8::from(e.use_stderr()));
        }
    };
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_cap() { 2 } else { 1 })
        }
    }
}
