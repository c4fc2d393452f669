//! Command-line driver. Exit codes: 0 success, 2 input error, 3 violated
//! mathematical precondition.

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::group::{compose, invert, log_star};
use crate::io::{self, FieldDoc, JetDoc, MuDoc, PowerSeriesDoc};
use crate::quotients::{bernoulli_numbers, phi, psi};
use crate::rational::{self, Rational};
use crate::series::{exp_star, TreeSeries};
use crate::trees::{self, DEFAULT_MAX_ORDER};
use crate::vectorfields::{flow_taylor, parse_point, recover_field, PolyVectorField};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PRECONDITION: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "prelie",
    version,
    about = "Exact rooted-tree series, their group, and formal flows"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List rooted trees up to a given number of nodes.
    Trees {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = ListFormat::Text)]
        format: ListFormat,
    },
    /// Expand exp* or log* up to a given order.
    Expand {
        #[arg(value_enum)]
        which: Which,
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value_t = SeriesFormat::Json)]
        format: SeriesFormat,
    },
    /// Group arithmetic on series documents.
    Group {
        #[command(subcommand)]
        op: GroupOp,
    },
    /// Same as `group compose`.
    Compose(ComposeArgs),
    /// Same as `group invert`.
    Invert(InvertArgs),
    /// Project a series onto a quotient group.
    Project {
        #[arg(value_enum)]
        map: Projection,
        #[command(flatten)]
        args: ProjectArgs,
    },
    /// Same as `project phi`.
    Phi(ProjectArgs),
    /// Same as `project psi`.
    Psi(ProjectArgs),
    /// Taylor jet of the flow of a polynomial field.
    Flow {
        /// Number of variables.
        #[arg(long)]
        dim: usize,
        /// Components separated by `;`, e.g. "y; -x".
        #[arg(long)]
        field: String,
        /// Initial point, comma-separated rationals.
        #[arg(long)]
        point: String,
        /// Number of Taylor coefficients after the constant term.
        #[arg(long)]
        terms: usize,
    },
    /// Recover a field from the time-one displacement of its flow.
    Recover {
        /// Number of variables.
        #[arg(long)]
        dim: usize,
        /// Displacement components separated by `;`; every term of degree >= 2.
        #[arg(long)]
        field: String,
        /// Truncation degree of the result.
        #[arg(long)]
        degree: usize,
    },
    /// Bernoulli numbers B_0..B_n (B_1 = -1/2).
    Bernoulli {
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
    /// Run the built-in checks.
    Selftest {
        #[arg(long, default_value_t = 8)]
        order: usize,
    },
}

#[derive(Subcommand, Debug)]
enum GroupOp {
    /// `A × B`.
    Compose(ComposeArgs),
    /// Two-sided inverse.
    Invert(InvertArgs),
}

#[derive(Args, Debug)]
struct ComposeArgs {
    /// Series document, or `-` for standard input.
    a: PathBuf,
    b: PathBuf,
    /// Truncate both inputs to this order first.
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = SeriesFormat::Json)]
    format: SeriesFormat,
}

#[derive(Args, Debug)]
struct InvertArgs {
    a: PathBuf,
    #[arg(long)]
    order: Option<usize>,
    #[arg(long, value_enum, default_value_t = SeriesFormat::Json)]
    format: SeriesFormat,
}

#[derive(Args, Debug)]
struct ProjectArgs {
    input: PathBuf,
    #[arg(long)]
    order: Option<usize>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Which {
    Exp,
    Log,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Projection {
    Phi,
    Psi,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ListFormat {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SeriesFormat {
    Text,
    Json,
    Latex,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precondition() {
                EXIT_PRECONDITION
            } else {
                EXIT_INPUT
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    let text = match command {
        Command::Trees { order, format } => trees_listing(order, format)?,
        Command::Expand {
            which,
            order,
            format,
        } => {
            check_cap(order)?;
            let s = match which {
                Which::Exp => exp_star(order)?,
                Which::Log => log_star(order)?,
            };
            render_series(&s, format)
        }
        Command::Group {
            op: GroupOp::Compose(a),
        }
        | Command::Compose(a) => {
            let (x, y) = read_pair(&a.a, &a.b, a.order)?;
            render_series(&compose(&x, &y)?, a.format)
        }
        Command::Group {
            op: GroupOp::Invert(a),
        }
        | Command::Invert(a) => {
            let x = read_series(&a.a, a.order)?;
            render_series(&invert(&x)?, a.format)
        }
        Command::Project { map, args } => project(map, &args)?,
        Command::Phi(args) => project(Projection::Phi, &args)?,
        Command::Psi(args) => project(Projection::Psi, &args)?,
        Command::Flow {
            dim,
            field,
            point,
            terms,
        } => {
            let f = PolyVectorField::parse(&field, dim, usize::MAX)?;
            let g0 = parse_point(&point, dim)?;
            io::to_json(&JetDoc::from_jet(&flow_taylor(&f, &g0, terms)?))
        }
        Command::Recover { dim, field, degree } => {
            let g = PolyVectorField::parse(&field, dim, degree)?;
            if degree > DEFAULT_MAX_ORDER + 1 {
                return Err(Error::OrderTooLarge {
                    requested: degree,
                    cap: DEFAULT_MAX_ORDER + 1,
                });
            }
            io::to_json(&FieldDoc::from_field(&recover_field(&g, degree)?))
        }
        Command::Bernoulli { count } => {
            let mut s = String::new();
            for (n, b) in bernoulli_numbers(count).iter().enumerate() {
                s.push_str(&format!("B_{n} = {b}\n"));
            }
            s
        }
        Command::Selftest { order } => {
            check_cap(order)?;
            let report = crate::selftest::run(order);
            out.write_all(report.to_string().as_bytes())
                .map_err(|e| Error::Schema(e.to_string()))?;
            return Ok(if report.passed() { EXIT_OK } else { 1 });
        }
    };
    out.write_all(text.as_bytes())
        .map_err(|e| Error::Schema(format!("write failed: {e}")))?;
    Ok(EXIT_OK)
}

fn check_cap(order: usize) -> Result<()> {
    if order == 0 {
        return Err(Error::ZeroOrder);
    }
    if order > DEFAULT_MAX_ORDER {
        return Err(Error::OrderTooLarge {
            requested: order,
            cap: DEFAULT_MAX_ORDER,
        });
    }
    Ok(())
}

fn trees_listing(order: usize, format: ListFormat) -> Result<String> {
    check_cap(order)?;
    let tab = trees::table();
    let rows: Vec<_> = tab
        .ids_up_to(order)
        .map(|t| {
            (
                tab.format_code(t),
                tab.nodes(t),
                tab.symmetry_factor(t),
                tab.depth(t),
                tab.is_linear(t),
                tab.is_corolla(t),
            )
        })
        .collect();
    Ok(match format {
        ListFormat::Text => rows
            .iter()
            .map(|(code, nodes, aut, depth, lin, cor)| {
                format!(
                    "{code}\tnodes={nodes}\taut={aut}\tdepth={depth}\tlinear={lin}\tcorolla={cor}\n"
                )
            })
            .collect(),
        ListFormat::Json => {
            let docs: Vec<_> = rows
                .iter()
                .map(|(code, nodes, aut, depth, lin, cor)| {
                    serde_json::json!({
                        "tree": code,
                        "nodes": nodes,
                        "aut": aut,
                        "depth": depth,
                        "linear": lin,
                        "corolla": cor,
                    })
                })
                .collect();
            io::to_json(&serde_json::json!({ "order": order, "trees": docs }))
        }
    })
}

fn render_series(s: &TreeSeries, format: SeriesFormat) -> String {
    let tab = trees::table();
    match format {
        SeriesFormat::Json => io::series_to_json(s),
        SeriesFormat::Text => s
            .terms()
            .map(|(t, c)| format!("{c} * {}\n", tab.format_code(t)))
            .collect(),
        SeriesFormat::Latex => {
            let mut body = String::new();
            for (i, (t, c)) in s.terms().enumerate() {
                let sign = if c.is_negative() { "-" } else { "+" };
                if i > 0 || c.is_negative() {
                    body.push_str(sign);
                    body.push(' ');
                }
                let mag = c.abs();
                if mag != Rational::from(1) {
                    body.push_str(&latex_rational(&mag));
                    body.push_str("\\,");
                }
                body.push_str(&format!("\\tree{{{}}}\n", tab.format_code(t)));
            }
            if body.is_empty() {
                body.push_str("0\n");
            }
            body
        }
    }
}

fn latex_rational(q: &Rational) -> String {
    if q.is_integer() {
        rational::render(q)
    } else {
        format!("\\frac{{{}}}{{{}}}", q.numer(), q.denom())
    }
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    let res = if path == Path::new("-") {
        std::io::stdin().read_to_string(&mut text).map(|_| ())
    } else {
        std::fs::read_to_string(path).map(|t| text = t)
    };
    res.map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
    Ok(text)
}

fn read_series(path: &Path, order: Option<usize>) -> Result<TreeSeries> {
    let s = io::series_from_json(&read_input(path)?)?;
    match order {
        Some(n) => retruncate(s, n),
        None => Ok(s),
    }
}

fn retruncate(s: TreeSeries, order: usize) -> Result<TreeSeries> {
    if order > s.order() {
        return Err(Error::Schema(format!(
            "requested order {order} exceeds the document order {}",
            s.order()
        )));
    }
    s.truncate(order)
}

fn read_pair(a: &Path, b: &Path, order: Option<usize>) -> Result<(TreeSeries, TreeSeries)> {
    let x = read_series(a, order)?;
    let y = read_series(b, order)?;
    if x.order() != y.order() {
        return Err(Error::OrderMismatch {
            left: x.order(),
            right: y.order(),
        });
    }
    Ok((x, y))
}

fn project(map: Projection, args: &ProjectArgs) -> Result<String> {
    let s = read_series(&args.input, args.order)?;
    Ok(match map {
        Projection::Phi => io::to_json(&PowerSeriesDoc::from_series(&phi(&s))),
        Projection::Psi => io::to_json(&MuDoc::from_image(&psi(&s))),
    })
}
