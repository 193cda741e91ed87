//! Command-line front end: Hermite tables, divergences and the verification
//! suites, with text or JSON output.
//!
//! Exit codes: 0 success/pass, 1 verification failure, 2 usage error.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use malliavin::divergence::{
    self, delta_alt, delta_binomial, delta_iterative, delta_moment, DivergenceResult, Method,
};
use malliavin::exact::{self, rat, ratio, Rational};
use malliavin::hermite::{self, hermite_recurrence};
use malliavin::isonormal::{self, Direction, IsonormalSpace, TensorFunctional};
use malliavin::poly::Polynomial;

#[derive(Parser)]
#[command(name = "malliavin", version, about = "Hermite polynomials and Gaussian divergence operators, exactly")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Output format for reports.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    output: OutputFormat,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Binomial,
    Iterative,
    Alt,
    Moment,
}

#[derive(Subcommand)]
enum Command {
    /// Print the Hermite polynomial H_n.
    Hermite {
        #[arg(long)]
        n: u32,
    },
    /// Compute delta^n g for a polynomial g.
    Delta {
        /// Coefficients of g as a JSON array, ascending powers, e.g. "[0,1]".
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = MethodArg::Binomial)]
        method: MethodArg,
    },
    /// Check the duality E[f^(n) g] = E[f delta^n g] exactly.
    VerifyDuality {
        #[arg(long)]
        f: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        n: u32,
    },
    /// Run the one-dimensional identity suite (recurrences, four-way delta
    /// agreement, commutation, composition).
    VerifyIdentities {
        #[arg(long, default_value_t = 12)]
        max_n: u32,
    },
    /// Run the isonormal-space suite (tensor divergences, exact bivariate
    /// duality, Monte Carlo cross-check).
    IsonormalVerify {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, env = "MALLIAVIN_SEED", default_value_t = 20190710)]
        seed: u64,
        #[arg(long, default_value_t = 4)]
        dim: usize,
    },
}

#[derive(Serialize)]
struct CheckLine {
    check: String,
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

impl CheckLine {
    fn new(check: &str, pass: bool) -> Self {
        CheckLine {
            check: check.to_string(),
            pass,
            detail: None,
        }
    }

    fn with_detail(check: &str, pass: bool, detail: String) -> Self {
        CheckLine {
            check: check.to_string(),
            pass,
            detail: Some(detail),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(all_pass) => {
            if all_pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn parse_poly(label: &str, text: &str) -> Result<Polynomial, String> {
    Polynomial::from_json(text).map_err(|e| format!("--{label}: {e}"))
}

fn run(cli: Cli) -> Result<bool, String> {
    match cli.command {
        Command::Hermite { n } => {
            let table = hermite_recurrence(n);
            match cli.output {
                OutputFormat::Text => println!("{}", table.get(n)),
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string(table.get(n)).unwrap())
                }
            }
            Ok(true)
        }
        Command::Delta { g, n, method } => {
            let g = parse_poly("g", &g)?;
            let table = hermite_recurrence(n);
            let (output, method) = match method {
                MethodArg::Binomial => (
                    delta_binomial(&g, n, &table).map_err(|e| e.to_string())?,
                    Method::Binomial,
                ),
                MethodArg::Iterative => (delta_iterative(&g, n), Method::Iterative),
                MethodArg::Alt => (
                    delta_alt(&g, n, &table).map_err(|e| e.to_string())?,
                    Method::AltSum,
                ),
                MethodArg::Moment => (delta_moment(&g, n), Method::Moment),
            };
            match cli.output {
                OutputFormat::Text => println!("{output}"),
                OutputFormat::Json => {
                    let result = DivergenceResult {
                        n,
                        input: g,
                        output,
                        method,
                    };
                    println!("{}", serde_json::to_string(&result).unwrap());
                }
            }
            Ok(true)
        }
        Command::VerifyDuality { f, g, n } => {
            let f = parse_poly("f", &f)?;
            let g = parse_poly("g", &g)?;
            let report = divergence::duality_check(&f, &g, n);
            match cli.output {
                OutputFormat::Text => println!(
                    "duality n={n}: lhs = {} rhs = {} -> {}",
                    exact::fmt_frac(&report.lhs),
                    exact::fmt_frac(&report.rhs),
                    verdict(report.pass)
                ),
                OutputFormat::Json => {
                    println!("{}", serde_json::to_string(&report).unwrap())
                }
            }
            Ok(report.pass)
        }
        Command::VerifyIdentities { max_n } => {
            let checks = identity_suite(max_n);
            emit_checks(&checks, cli.output);
            Ok(checks.iter().all(|c| c.pass))
        }
        Command::IsonormalVerify { samples, seed, dim } => {
            if dim < 2 {
                return Err("isonormal-verify needs --dim >= 2 for correlated directions".into());
            }
            let checks = isonormal_suite(samples, seed, dim)?;
            emit_checks(&checks, cli.output);
            Ok(checks.iter().all(|c| c.pass))
        }
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "FAIL"
    }
}

fn emit_checks(checks: &[CheckLine], output: OutputFormat) {
    match output {
        OutputFormat::Text => {
            for c in checks {
                match &c.detail {
                    Some(d) => println!("{}: {} ({})", c.check, verdict(c.pass), d),
                    None => println!("{}: {}", c.check, verdict(c.pass)),
                }
            }
        }
        OutputFormat::Json => println!("{}", serde_json::to_string(checks).unwrap()),
    }
}

fn small_corpus() -> Vec<Polynomial> {
    let mut corpus: Vec<Polynomial> = (0..=4)
        .map(|d| Polynomial::monomial(d, rat(1)))
        .collect();
    corpus.push(Polynomial::from_integers(&[-1, 2, 0, 3]));
    corpus.push(Polynomial::new(vec![ratio(1, 2), ratio(-2, 3), ratio(5, 7)]));
    corpus.push(Polynomial::zero());
    corpus
}

fn identity_suite(max_n: u32) -> Vec<CheckLine> {
    let mut checks = Vec::new();
    let table = hermite_recurrence(max_n + 1);

    let triple = (0..=max_n).all(|n| {
        table.get(n) == &hermite::hermite_rodrigues(n) && table.get(n) == &hermite::hermite_moment(n)
    });
    checks.push(CheckLine::new("hermite triple agreement", triple));

    let derivative = (1..=max_n).all(|n| {
        table.get(n).derivative(1) == table.get(n - 1).scale(&rat(n as i64))
    });
    checks.push(CheckLine::new("H_n' = n H_{n-1}", derivative));

    let at_zero = (0..=max_n)
        .all(|n| table.get(n).eval_exact(&rat(0)) == hermite::hermite_at_zero(n));
    checks.push(CheckLine::new("values at zero", at_zero));

    let order = max_n.min(12);
    let series = hermite::generating_series(order as usize);
    let gen = (0..=order).all(|n| {
        let scaled = series
            .term(n as usize)
            .scale(&Rational::from_integer(exact::factorial(n)));
        &scaled == table.get(n)
    });
    checks.push(CheckLine::with_detail(
        "generating series",
        gen,
        format!("t^n -> H_n/n! for n <= {order}"),
    ));

    let corpus = small_corpus();
    let four_way = corpus.iter().all(|g| {
        (0..=max_n).all(|n| {
            let canonical = delta_binomial(g, n, &table).unwrap();
            canonical == delta_iterative(g, n)
                && canonical == delta_alt(g, n, &table).unwrap()
                && canonical == delta_moment(g, n)
        })
    });
    checks.push(CheckLine::with_detail(
        "four-way delta agreement",
        four_way,
        format!("n <= {max_n}, {} corpus polynomials", corpus.len()),
    ));

    let composition = corpus.iter().all(|g| {
        (0..=max_n.min(10)).all(|total| {
            (0..=total).all(|n| {
                let inner = delta_binomial(g, n, &table).unwrap();
                delta_binomial(&inner, total - n, &table).unwrap()
                    == delta_binomial(g, total, &table).unwrap()
            })
        })
    });
    checks.push(CheckLine::new("composition delta^{n+m}", composition));

    let commutation = corpus
        .iter()
        .all(|g| (1..=max_n).all(|n| divergence::commutator_check(g, n)));
    checks.push(CheckLine::new("derivative commutation", commutation));

    checks
}

fn isonormal_suite(samples: usize, seed: u64, dim: usize) -> Result<Vec<CheckLine>, String> {
    let mut checks = Vec::new();
    let table = hermite_recurrence(10);
    let space = IsonormalSpace::new(dim);
    let mut h_vec = vec![0.0; dim];
    h_vec[0] = 1.0;
    let h = Direction::new(&space, h_vec).map_err(|e| e.to_string())?;

    let special = (0..=8u32).all(|n| {
        let ones = TensorFunctional {
            g: Polynomial::one(),
            h: h.clone(),
            order: n,
        };
        let xs = TensorFunctional {
            g: Polynomial::x(),
            h: h.clone(),
            order: n,
        };
        isonormal::divergence_tensor(&ones, &table).unwrap() == *table.get(n)
            && isonormal::divergence_tensor(&xs, &table).unwrap() == *table.get(n + 1)
    });
    checks.push(CheckLine::new("tensor divergence special values", special));

    let corollary = (1..=8u32).all(|n| {
        let u = TensorFunctional {
            g: Polynomial::from_integers(&[1, -1, 2]),
            h: h.clone(),
            order: n,
        };
        isonormal::corollary_derivative(&u, &table).is_ok()
    });
    checks.push(CheckLine::new("corollary derivative bridge", corollary));

    let rhos = [rat(0), ratio(1, 4), ratio(-1, 4), ratio(1, 2), ratio(-1, 2), rat(1), rat(-1)];
    let mut bivariate = true;
    for rho in &rhos {
        let rho_f = exact::to_f64(rho);
        let mut v_vec = vec![0.0; dim];
        v_vec[0] = rho_f;
        v_vec[1] = (1.0 - rho_f * rho_f).sqrt();
        let v = Direction::new(&space, v_vec).map_err(|e| e.to_string())?;
        for fd in 0..=4usize {
            for gd in 0..=4usize {
                for n in 0..=3u32 {
                    let u = TensorFunctional {
                        g: Polynomial::monomial(gd, rat(1)),
                        h: h.clone(),
                        order: n,
                    };
                    let f = Polynomial::monomial(fd, rat(1));
                    let report = isonormal::duality_bivariate(&f, &u, &v, rho)
                        .map_err(|e| e.to_string())?;
                    bivariate &= report.pass;
                }
            }
        }
    }
    checks.push(CheckLine::with_detail(
        "bivariate duality grid",
        bivariate,
        format!("monomials deg <= 4, n <= 3, {} correlations", rhos.len()),
    ));

    let rho = ratio(1, 2);
    let mut v_vec = vec![0.0; dim];
    v_vec[0] = 0.5;
    v_vec[1] = 0.75f64.sqrt();
    let v = Direction::new(&space, v_vec).map_err(|e| e.to_string())?;
    let u = TensorFunctional {
        g: Polynomial::x(),
        h: h.clone(),
        order: 1,
    };
    let f = Polynomial::from_integers(&[0, 0, 1]);
    let mc = isonormal::duality_monte_carlo(&f, &u, &v, &rho, samples, seed)
        .map_err(|e| e.to_string())?;
    checks.push(CheckLine::with_detail(
        "monte carlo duality",
        mc.pass,
        serde_json::to_string(&mc).unwrap(),
    ));

    Ok(checks)
}
