use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use septimic::dimension::dim_invariants;
use septimic::grading::{z_basis, FormDegree};
use septimic::io::{DiskCache, Manifest};
use septimic::scalar::SCREEN_PRIME;
use septimic::search::eval::{persist_entries, run_recipe, Evaluator};
use septimic::search::invariants::{certify, complete_system, named_ledger, LedgerReport, SystemOptions, SyzygyStatus};
use septimic::verify::{verify_manifest, Check, VerifyOptions};

#[derive(Parser)]
#[command(name = "septimic", version, about = "Semi-invariants and invariants of binary forms")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Print z_2 .. z_d in x-coordinates.
    Zbasis {
        #[arg(long)]
        d: u32,
    },
    /// Evaluate a recipe and store the results.
    St {
        #[arg(long)]
        recipe: PathBuf,
        /// Evaluate only this name and what it depends on.
        #[arg(long)]
        target: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 7)]
        d: u32,
        /// Skip the on-disk semitransvectant cache.
        #[arg(long)]
        no_cache: bool,
    },
    /// Discover generators and build the invariant system.
    Discover {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        max_degree: u32,
        #[arg(long)]
        out: PathBuf,
        /// Worker threads (defaults to all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Print the screening prime; a value must match the built-in one.
        #[arg(long, num_args = 0..=1, default_missing_value = "0")]
        screen_prime: Option<u64>,
        /// Count the ledger through this degree (defaults to --max-degree).
        #[arg(long)]
        ledger_degree: Option<u32>,
        /// Degrees whose syzygies are certified exactly, comma separated.
        #[arg(long, value_delimiter = ',')]
        certify: Vec<u32>,
        #[arg(long, default_value_t = 0x5eed)]
        seed: u64,
    },
    /// Print dim I_i for the form of degree d.
    Dim {
        #[arg(long)]
        d: u32,
        #[arg(long)]
        i: u32,
    },
    /// Dimension and certified relations of the syzygies of one degree.
    Syzygy {
        #[arg(long)]
        degree: u32,
        /// Manifest file or the directory holding manifest.toml.
        #[arg(long)]
        manifest: PathBuf,
    },
    /// Replay property checks over stored results.
    Verify {
        #[arg(long)]
        manifest: PathBuf,
        #[arg(long, default_value = "d1,d2,division,sl2,grading")]
        checks: String,
    },
}

fn form_degree(d: u32) -> Result<FormDegree> {
    Ok(FormDegree::new(d)?)
}

fn manifest_dir(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.to_path_buf()
    } else {
        path.parent().map_or_else(|| PathBuf::from("."), Path::to_path_buf)
    }
}

fn manifest_file(path: &Path) -> PathBuf {
    if path.is_dir() {
        path.join("manifest.toml")
    } else {
        path.to_path_buf()
    }
}

fn print_ledger(rep: &LedgerReport) {
    println!("{:>4} {:>6} {:>6} {:>6} {:>6}", "n", "dim", "sigma", "S_n", "delta");
    for (n, row) in rep.ledger.rows().filter(|(_, r)| r.dim > 0 || r.sigma > 0) {
        println!("{n:>4} {:>6} {:>6} {:>6} {:>6}", row.dim, row.sigma, row.syzygies, row.delta);
    }
    println!("total delta {}", rep.ledger.total());
    for (n, k) in &rep.missing {
        println!("degree {n}: {k} invariant(s) counted but not constructed");
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Zbasis { d } => {
            for (i, z) in z_basis(form_degree(d)?).iter().enumerate() {
                println!("z{} = {z}", i + 2);
            }
        }
        Cmd::St { recipe, target, out, d, no_cache } => {
            let script = std::fs::read_to_string(&recipe).with_context(|| format!("reading {}", recipe.display()))?;
            let mut ev = Evaluator::new(form_degree(d)?);
            if !no_cache {
                ev = ev.with_cache(DiskCache::from_env());
            }
            let entries = run_recipe(&script, &mut ev, target.as_deref(), |e| {
                eprintln!("{} {} terms over t^{}", e.name, e.value.num().len(), e.value.s());
            })?;
            let m = persist_entries(&entries, form_degree(d)?, &out)?;
            println!("{} entries written to {}", m.entries.len(), out.display());
            if let Some(t) = target.and_then(|t| m.get(&t).cloned()) {
                println!("{}: {} terms, s = {}, hash {}", t.name, t.terms, t.denominator_exponent, t.hash);
            }
        }
        Cmd::Discover { d, max_degree, out, jobs, screen_prime, ledger_degree, certify, seed } => {
            if let Some(p) = screen_prime {
                if p != 0 && p != SCREEN_PRIME {
                    bail!("only the built-in screening prime {SCREEN_PRIME} is supported");
                }
                println!("screening prime {SCREEN_PRIME}");
            }
            if let Some(j) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(j).build_global()?;
            }
            let mut opts = SystemOptions::new(max_degree);
            opts.ledger_degree = ledger_degree.unwrap_or(max_degree);
            opts.certify = certify;
            opts.seed = seed;
            let sys = complete_system(form_degree(d)?, &opts, |m| eprintln!("{m}"))?;
            for (n, c) in sys.discovery.table().counts() {
                println!("degree {n}: {c} semi-invariant generators");
            }
            print_ledger(&sys.report);
            for g in &sys.report.invariants {
                println!("{} = {}  ({} terms over t^{})", g.name, g.expr, g.value.num().len(), g.value.s());
            }
            for (n, rec) in &sys.report.syzygies {
                if rec.status == SyzygyStatus::Certified {
                    println!("degree {n}: {} relations certified", rec.relations.len());
                }
            }
            let m = sys.persist(&out)?;
            println!("{} entries written to {}", m.entries.len(), out.display());
        }
        Cmd::Dim { d, i } => println!("{}", dim_invariants(form_degree(d)?.get(), i)),
        Cmd::Syzygy { degree, manifest } => {
            let dir = manifest_dir(&manifest);
            let m = Manifest::read(&manifest_file(&manifest))?;
            let d = form_degree(m.form_degree)?;
            let named: Vec<_> = m.entries.iter().filter(|e| e.order == 0 && e.name.starts_with("p_")).collect();
            let mut items = Vec::new();
            for e in named.into_iter().filter(|e| (e.degree as u32) < degree) {
                let f = m.load(&dir, &e.name)?;
                items.push((e.name.clone(), septimic::search::expr::ConstructionExpr::gen(e.name.clone()), f));
            }
            let rep = named_ledger(d, degree, &items, 0x5eed, |_, _| {})?;
            let row = rep.ledger.row(degree).context("degree outside the ledger")?;
            println!("dim I_{degree} = {}, sigma = {}, dim S_{degree} = {}", row.dim, row.sigma, row.syzygies);
            if let Some(rec) = rep.syzygies.get(&degree) {
                let cert = certify(rec, &rep.invariants, 0x5eed ^ degree as u64)?;
                for i in 0..cert.relations.len() {
                    println!("{}", cert.render(i));
                }
            }
        }
        Cmd::Verify { manifest, checks } => {
            let checks = Check::parse_list(&checks)?;
            let rep = verify_manifest(&manifest_dir(&manifest), &checks, &VerifyOptions::default())?;
            let failed: Vec<_> = rep.failed().collect();
            println!("{} checks, {} failed", rep.outcomes.len(), failed.len());
            for o in &failed {
                println!("FAIL {} {}: {}", o.entry, o.check, o.detail);
            }
            if !failed.is_empty() {
                bail!("{} checks failed", failed.len());
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
