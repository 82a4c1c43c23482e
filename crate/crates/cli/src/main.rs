//! `skewbez`: skew Bezoutians, isometry synthesis, spinor norms and lattice
//! classification from the command line.
//!
//! Exit status is 0 on success, 1 when the computation itself fails (for
//! example a degenerate pair or an infeasible Jordan form) and 2 on usage
//! errors, including malformed flag values and unreadable input files.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use skewbez::bezoutian::recover_p;
use skewbez::format::{read_document, to_json, MatrixDocument};
use skewbez::jordan::{realize, JordanSpec};
use skewbez::lattice::{classify, search_cyclotomic, IntegerGram, LatticeClass};
use skewbez::poly::{format_coeff_list, parse_poly};
use skewbez::spinor::{spinor_norm, spinor_norm_by_reflections, zassenhaus};
use skewbez::synthesis::{
    orthogonal_with_charpoly, orthogonal_with_spinor, symplectic_with_charpoly, OrthogonalOptions,
    SynthesisResult,
};
use skewbez::{square_class, BilinearSpace, Field, Matrix, Poly, Sign, SkewBezoutian};

const POLY_HELP: &str = "Polynomial as ascending coefficients (constant term first) or a \
cyclotomic product. The Lehmer polynomial x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1 is \
\"1,1,0,-1,-1,-1,-1,-1,0,1,1\"; \"Phi1^3*Phi2*Phi3*Phi5\" is also accepted.";

#[derive(Parser, Debug)]
#[command(name = "skewbez", version, about = "Skew Bezoutian bilinear spaces in exact arithmetic")]
struct Cli {
    /// Base field: Q or Fp:<p> for an odd prime p < 2^32.
    #[arg(long, global = true, default_value = "Q")]
    field: String,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Write the result to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpinorMethod {
    Formula,
    Reflections,
    Zassenhaus,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Gram matrix of B(p, q) and the isometry gamma.
    Bezoutian {
        #[arg(long, allow_hyphen_values = true, help = POLY_HELP)]
        p: String,
        #[arg(long, allow_hyphen_values = true, help = POLY_HELP)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
    },
    /// A space with an isometry of characteristic polynomial q.
    Synthesize {
        #[arg(long, allow_hyphen_values = true, help = POLY_HELP)]
        q: String,
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        /// Requested spinor norm, as an integer (symmetric case only).
        #[arg(long, allow_hyphen_values = true)]
        spinor_target: Option<i64>,
        /// Odd exponent e in p0 = (T-1)^e (T+1)^(d0-e) (symmetric case only).
        #[arg(long)]
        e: Option<usize>,
    },
    /// Spinor norm of an isometry of a symmetric space.
    Spinor {
        /// Gram matrix file (JSON or text). A JSON document may carry the isometry too.
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        isometry: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = SpinorMethod::Formula)]
        method: SpinorMethod,
    },
    /// Classify an integral symmetric Gram matrix.
    Classify {
        #[arg(long)]
        gram: PathBuf,
    },
    /// Cyclotomic products p of the given degree with B(p, q) in the target class.
    SearchCyclotomic {
        #[arg(long, allow_hyphen_values = true, help = POLY_HELP)]
        q: String,
        #[arg(long)]
        degree: usize,
        /// E8, A<n>, I<p>,<q> (odd) or II<p>,<q> (even).
        #[arg(long)]
        target: String,
    },
    /// Realize a Jordan form by an isometry.
    Jordan {
        #[arg(long, allow_hyphen_values = true)]
        epsilon: String,
        /// Blocks as lambda:size:multiplicity, comma separated, e.g. "1:3:1,-1:2:2".
        #[arg(long, allow_hyphen_values = true)]
        blocks: String,
    },
    /// Recover p from a space, the isometry gamma and the base vector.
    Recover {
        #[arg(long)]
        gram: PathBuf,
        #[arg(long)]
        isometry: Option<PathBuf>,
        /// Base vector, comma separated; defaults to the first unit vector.
        #[arg(long, allow_hyphen_values = true)]
        v0: Option<String>,
        /// Symmetry of the form; inferred from the Gram matrix when omitted.
        #[arg(long, allow_hyphen_values = true)]
        epsilon: Option<String>,
    },
}

enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

type Outcome<T> = std::result::Result<T, Failure>;

fn usage<E: Into<anyhow::Error>>(flag: &str) -> impl FnOnce(E) -> Failure + '_ {
    move |e| Failure::Usage(e.into().context(format!("invalid value for --{flag}")))
}

fn domain<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Domain(e.into())
}

fn parse_sign(text: &str, flag: &str) -> Outcome<Sign> {
    text.parse::<Sign>().map_err(usage(flag))
}

fn read_input(path: &Path, field: Field, flag: &str) -> Outcome<MatrixDocument> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(usage(flag))?;
    read_document(&text, field).map_err(usage(flag))
}

/// Gram matrix plus isometry, from `--gram` and optionally `--isometry`.
fn read_pair(gram: &Path, isometry: Option<&Path>, field: Field) -> Outcome<MatrixDocument> {
    let mut doc = read_input(gram, field, "gram")?;
    if let Some(path) = isometry {
        doc.isometry = Some(read_input(path, field, "isometry")?.gram);
    }
    if doc.isometry.is_none() {
        return Err(Failure::Usage(anyhow::anyhow!(
            "no isometry: pass --isometry or a JSON --gram document with an \"isometry\" entry"
        )));
    }
    Ok(doc)
}

fn matrices_text(gram: &Matrix, isometry: Option<&Matrix>) -> String {
    match isometry {
        None => gram.to_string(),
        Some(m) => format!("# gram\n{gram}# isometry\n{m}"),
    }
}

fn render_space(format: OutputFormat, space: &BilinearSpace, isometry: &Matrix, text_gram_only: bool) -> String {
    match format {
        OutputFormat::Json => {
            let doc = MatrixDocument {
                epsilon: Some(space.epsilon()),
                gram: space.gram().clone(),
                isometry: Some(isometry.clone()),
            };
            to_json(&doc) + "\n"
        }
        OutputFormat::Text if text_gram_only => space.gram().to_string(),
        OutputFormat::Text => matrices_text(space.gram(), Some(isometry)),
    }
}

fn synthesize(q: &Poly, epsilon: Sign, spinor_target: Option<i64>, e: Option<usize>) -> Outcome<SynthesisResult> {
    match epsilon {
        Sign::Minus => {
            if spinor_target.is_some() || e.is_some() {
                return Err(Failure::Usage(anyhow::anyhow!(
                    "--spinor-target and --e only apply to epsilon = +1"
                )));
            }
            symplectic_with_charpoly(q).map_err(domain)
        }
        Sign::Plus => match spinor_target {
            Some(s) => {
                if e.is_some() {
                    return Err(Failure::Usage(anyhow::anyhow!("--e cannot be combined with --spinor-target")));
                }
                let class = square_class(&q.field().from_i64(s)).map_err(usage("spinor-target"))?;
                orthogonal_with_spinor(q, &class).map_err(domain)
            }
            None => {
                let opts = OrthogonalOptions { e: e.unwrap_or(1), ..OrthogonalOptions::default() };
                orthogonal_with_charpoly(q, opts).map_err(domain)
            }
        },
    }
}

fn infer_epsilon(gram: &Matrix) -> Outcome<Sign> {
    if gram.transpose() == *gram {
        Ok(Sign::Plus)
    } else if gram.transpose() == -gram {
        Ok(Sign::Minus)
    } else {
        Err(domain(anyhow::anyhow!("Gram matrix is neither symmetric nor skew-symmetric")))
    }
}

fn run(cli: Cli) -> Outcome<String> {
    let field: Field = cli.field.parse().map_err(usage("field"))?;
    let format = cli.format;
    match cli.command {
        Command::Bezoutian { p, q, epsilon } => {
            let p = parse_poly(&p, field).map_err(usage("p"))?;
            let q = parse_poly(&q, field).map_err(usage("q"))?;
            let epsilon = parse_sign(&epsilon, "epsilon")?;
            let bez = SkewBezoutian::build(&p, &q, epsilon).map_err(domain)?;
            Ok(render_space(format, bez.space(), bez.gamma(), true))
        }
        Command::Synthesize { q, epsilon, spinor_target, e } => {
            let q = parse_poly(&q, field).map_err(usage("q"))?;
            let epsilon = parse_sign(&epsilon, "epsilon")?;
            let r = synthesize(&q, epsilon, spinor_target, e)?;
            Ok(render_space(format, &r.space, &r.gamma, false))
        }
        Command::Spinor { gram, isometry, method } => {
            let doc = read_pair(&gram, isometry.as_deref(), field)?;
            let space = BilinearSpace::new(doc.gram, Sign::Plus).map_err(domain)?;
            let m = doc.isometry.expect("checked by read_pair");
            let class = match method {
                SpinorMethod::Formula => spinor_norm(&space, &m),
                SpinorMethod::Reflections => spinor_norm_by_reflections(&space, &m),
                SpinorMethod::Zassenhaus => zassenhaus(&space, &m),
            }
            .map_err(domain)?;
            Ok(match format {
                OutputFormat::Text => format!("{class}\n"),
                OutputFormat::Json => format!("{{\"spinor_norm\": \"{class}\"}}\n"),
            })
        }
        Command::Classify { gram } => {
            if field != Field::Rational {
                return Err(Failure::Usage(anyhow::anyhow!("classify works over Q only")));
            }
            let doc = read_input(&gram, field, "gram")?;
            let g = IntegerGram::new(doc.gram).map_err(domain)?;
            let class = classify(&g).map_err(domain)?;
            Ok(match format {
                OutputFormat::Text => format!("{class}\n"),
                OutputFormat::Json => format!("{{\"class\": \"{class}\"}}\n"),
            })
        }
        Command::SearchCyclotomic { q, degree, target } => {
            if field != Field::Rational {
                return Err(Failure::Usage(anyhow::anyhow!("search-cyclotomic works over Q only")));
            }
            let q = parse_poly(&q, field).map_err(usage("q"))?;
            let target: LatticeClass = target.parse().map_err(usage("target"))?;
            let found = search_cyclotomic(&q, degree, &target).map_err(domain)?;
            if let (true, LatticeClass::I(a, b)) = (found.is_empty(), &target) {
                eprintln!("note: symmetric Bezoutians have 2 on the diagonal, so they are even; try --target II{a},{b}");
            }
            Ok(match format {
                OutputFormat::Text => found.iter().map(|p| format!("{p}\n")).collect(),
                OutputFormat::Json => {
                    let items: Vec<String> = found.iter().map(|p| format!("\"{p}\"")).collect();
                    format!("[{}]\n", items.join(", "))
                }
            })
        }
        Command::Jordan { epsilon, blocks } => {
            let epsilon = parse_sign(&epsilon, "epsilon")?;
            let spec = JordanSpec::parse(field, epsilon, &blocks).map_err(usage("blocks"))?;
            let (space, m) = realize(&spec).map_err(domain)?;
            Ok(match format {
                OutputFormat::Text => format!("feasible: {spec}\n{}", matrices_text(space.gram(), Some(&m))),
                OutputFormat::Json => render_space(format, &space, &m, false),
            })
        }
        Command::Recover { gram, isometry, v0, epsilon } => {
            let doc = read_pair(&gram, isometry.as_deref(), field)?;
            let epsilon = match (epsilon, doc.epsilon) {
                (Some(text), _) => parse_sign(&text, "epsilon")?,
                (None, Some(eps)) => eps,
                (None, None) => infer_epsilon(&doc.gram)?,
            };
            let space = BilinearSpace::new(doc.gram, epsilon).map_err(domain)?;
            let d = space.dim();
            let v0 = match v0 {
                Some(text) => text
                    .split(',')
                    .map(|s| field.parse_element(s))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(usage("v0"))?,
                None => (0..d).map(|i| if i == 0 { field.one() } else { field.zero() }).collect(),
            };
            let m = doc.isometry.expect("checked by read_pair");
            let p = recover_p(&space, &m, &v0).map_err(domain)?;
            Ok(match format {
                OutputFormat::Text => format!("{}\n{p}\n", format_coeff_list(&p)),
                OutputFormat::Json => format!(
                    "{{\"p\": [{}], \"poly\": \"{p}\"}}\n",
                    format_coeff_list(&p).split(',').map(|c| format!("\"{c}\"")).collect::<Vec<_>>().join(", ")
                ),
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    let result = run(cli).and_then(|text| match &out {
        Some(path) => fs::write(path, text)
            .with_context(|| format!("cannot write {}", path.display()))
            .map_err(Failure::Usage),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Domain(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(e)) => {
            eprintln!("usage error: {e:#}");
            ExitCode::from(2)
        }
    }
}
