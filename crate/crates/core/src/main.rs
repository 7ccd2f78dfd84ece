//! `k0silting`: load a quiver algebra, complexes and silting collections
//! from JSON, run the verification suites, and emit JSON reports.
//!
//! Exit codes: 0 = all assertions pass, 1 = a mathematical assertion failed,
//! 2 = usage, parse or precondition error.

use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use serde_json::Value;

use k0silting::cli;
use k0silting::error::Error;
use k0silting::homotopycat::Complex;
use k0silting::pathalgebra::{Algebra, Presentation, DEFAULT_PATH_BOUND};
use k0silting::report::Report;
use k0silting::session::SessionConfig;
use k0silting::silting::SiltingCollection;

const USAGE: &str = "\
k0silting <command> [options]

Commands:
  hom          dim Hom(X, Σ^k Y) with a basis summary
               (--algebra, --complex X [--complex Y], [--shift k])
  gamma        filtration stages and the gamma vector of a complex
               (--algebra, --silting, --complex, [--class])
  verify WHICH run a verification suite; WHICH is one of
               presilting | silting-cert | theorem-a | jordan-holder |
               horseshoe | fd-closure | cluster-n | example-4-3
               (--algebra, --silting, [--complex], [--samples N], [--d N])

Options:
  --algebra FILE    algebra presentation (JSON)
  --silting FILE    silting collection (JSON)
  --complex FILE    complex (JSON); may be given twice for `hom`
  --field Q|Fp:p    coefficient field (default Q)
  --seed N          PRNG seed (default 1)
  --samples N       sample count (default depends on the command)
  --shift N         shift k for `hom` (default 0)
  --d N             rigidity parameter override for fd-closure / cluster-n
  --max-len N       filtration stage cap override
  --bound N         multiplicity bound for membership obstructions (default 4)
  --jobs N          accepted for compatibility; runs sequentially
  --class           also print the normalized class (gamma command)
";

struct Args {
    command: String,
    which: Option<String>,
    algebra: Option<String>,
    silting: Option<String>,
    complexes: Vec<String>,
    session: SessionConfig,
    samples: Option<usize>,
    shift: i64,
    d: Option<u32>,
    class: bool,
}

fn parse_args() -> Result<Args, Error> {
    let mut argv = std::env::args().skip(1);
    let command = argv
        .next()
        .ok_or_else(|| Error::Parse(format!("missing command\n\n{USAGE}")))?;
    let mut args = Args {
        which: None,
        command,
        algebra: None,
        silting: None,
        complexes: Vec::new(),
        session: SessionConfig::default(),
        samples: None,
        shift: 0,
        d: None,
        class: false,
    };
    if args.command == "verify" {
        args.which = Some(
            argv.next()
                .ok_or_else(|| Error::Parse("verify: missing sub-verification name".into()))?,
        );
    }
    while let Some(flag) = argv.next() {
        let mut value = |name: &str| -> Result<String, Error> {
            argv.next()
                .ok_or_else(|| Error::Parse(format!("{name} expects a value")))
        };
        match flag.as_str() {
            "--algebra" => args.algebra = Some(value("--algebra")?),
            "--silting" => args.silting = Some(value("--silting")?),
            "--complex" => args.complexes.push(value("--complex")?),
            "--field" => args.session.field = SessionConfig::parse_field(&value("--field")?)?,
            "--seed" => {
                args.session.seed = value("--seed")?
                    .parse()
                    .map_err(|_| Error::Parse("--seed expects an integer".into()))?
            }
            "--samples" => {
                args.samples = Some(
                    value("--samples")?
                        .parse()
                        .map_err(|_| Error::Parse("--samples expects an integer".into()))?,
                )
            }
            "--shift" => {
                args.shift = value("--shift")?
                    .parse()
                    .map_err(|_| Error::Parse("--shift expects an integer".into()))?
            }
            "--d" => {
                args.d = Some(
                    value("--d")?
                        .parse()
                        .map_err(|_| Error::Parse("--d expects an integer >= 2".into()))?,
                )
            }
            "--max-len" => {
                args.session.max_len = Some(
                    value("--max-len")?
                        .parse()
                        .map_err(|_| Error::Parse("--max-len expects an integer".into()))?,
                )
            }
            "--bound" => {
                args.session.bound = value("--bound")?
                    .parse()
                    .map_err(|_| Error::Parse("--bound expects an integer".into()))?
            }
            "--jobs" => {
                args.session.jobs = value("--jobs")?
                    .parse()
                    .map_err(|_| Error::Parse("--jobs expects an integer".into()))?
            }
            "--class" => args.class = true,
            "--help" | "-h" => {
                return Err(Error::Parse(USAGE.into()));
            }
            other => return Err(Error::Parse(format!("unknown flag {other:?}\n\n{USAGE}"))),
        }
    }
    Ok(args)
}

struct Loader<'a> {
    args: &'a Args,
    report: &'a mut Report,
}

impl Loader<'_> {
    fn algebra(&mut self) -> Result<Arc<Algebra>, Error> {
        let path = self
            .args
            .algebra
            .as_ref()
            .ok_or_else(|| Error::Parse("--algebra is required".into()))?;
        let bytes = std::fs::read(path)?;
        self.report.input("algebra", &bytes);
        let pres: Presentation = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        Ok(Arc::new(Algebra::load(
            &pres,
            self.args.session.field,
            DEFAULT_PATH_BOUND,
        )?))
    }

    fn silting(&mut self, algebra: &Arc<Algebra>) -> Result<SiltingCollection, Error> {
        let path = self
            .args
            .silting
            .as_ref()
            .ok_or_else(|| Error::Parse("--silting is required".into()))?;
        let bytes = std::fs::read(path)?;
        self.report.input("silting", &bytes);
        let value: Value =
            serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        SiltingCollection::from_json(algebra.clone(), &value)
    }

    fn complex(
        &mut self,
        algebra: &Arc<Algebra>,
        index: usize,
        role: &str,
    ) -> Result<Complex, Error> {
        let path = self
            .args
            .complexes
            .get(index)
            .ok_or_else(|| Error::Parse(format!("--complex ({role}) is required")))?;
        let bytes = std::fs::read(path)?;
        self.report.input(role, &bytes);
        let value: Value =
            serde_json::from_slice(&bytes).map_err(|e| Error::Parse(format!("{path}: {e}")))?;
        Complex::from_json(algebra.clone(), &value)
    }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let args = match parse_args() {
        Ok(a) => a,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    let command_name = match &args.which {
        Some(w) => format!("verify {w}"),
        None => args.command.clone(),
    };
    let mut report = Report::new(&command_name, args.session.seed);
    match run(&args, &mut report) {
        Ok(()) => {
            report.emit(start.elapsed());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(args: &Args, report: &mut Report) -> Result<(), Error> {
    let outcome = match args.command.as_str() {
        "hom" => {
            let mut loader = Loader { args, report };
            let algebra = loader.algebra()?;
            let x = loader.complex(&algebra, 0, "complex-x")?;
            let y = if args.complexes.len() > 1 {
                loader.complex(&algebra, 1, "complex-y")?
            } else {
                x.clone()
            };
            let out = cli::hom_op(&x, &y, args.shift);
            eprintln!(
                "dim Hom(X, Σ^{} Y) = {}",
                args.shift, out.details["dimension"]
            );
            out
        }
        "gamma" => {
            let mut loader = Loader { args, report };
            let algebra = loader.algebra()?;
            let mut collection = loader.silting(&algebra)?;
            let x = loader.complex(&algebra, 0, "complex")?;
            let out = cli::gamma_op(&mut collection, &x, args.class, &args.session)?;
            if out.passed {
                let key = if args.class { "class" } else { "gamma" };
                eprintln!("{key}: {}", out.details[key]);
            }
            out
        }
        "verify" => {
            let which = args.which.as_deref().unwrap_or("");
            let mut loader = Loader { args, report };
            let algebra = loader.algebra()?;
            let mut collection = loader.silting(&algebra)?;
            let complex = if args.complexes.is_empty() {
                None
            } else {
                Some(loader.complex(&algebra, 0, "complex")?)
            };
            cli::verify_op(
                which,
                &algebra,
                &mut collection,
                complex.as_ref(),
                &args.session,
                args.samples,
                args.d,
            )?
        }
        other => return Err(Error::Parse(format!("unknown command {other:?}\n\n{USAGE}"))),
    };
    if !outcome.passed {
        report.verdict = "fail".into();
    }
    report.details = outcome.details;
    Ok(())
}
