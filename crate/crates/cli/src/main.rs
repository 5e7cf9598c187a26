mod input;
mod output;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hammology::filtration::{Filtration, DEFAULT_MAX_SET_SIZE};
use hammology::isometry::{filtration_isomorphism_with_cap, hamming_isometry_with_cap, DEFAULT_MAX_SEARCH_SIZE};
use hammology::matching::{d_new, register_cycles, DistanceOptions, EmbeddedSide, RegistrationPolicy};
use hammology::metrics::hausdorff;
use hammology::miniball::{minimal_generators, radius};
use hammology::persistence::compute_persistence;
use hammology::separation::{default_epsilon, separate_union_with_cap, separate_with_cap, union_of, RadiusTable};
use hammology::{Error, Mode, Rational, Simplex};
use serde::Serialize;
use serde_json::{json, Value};

use input::InputDocument;
use output::{barcodes, radius_table, strings, DnewOut, RegistrationOut, SeparationOut, StringOut};

#[derive(Parser)]
#[command(name = "hammology", version, about = "Persistent homology and barcode distances for sets of Hamming strings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result document here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Override the set-size cap of the command.
    #[arg(long, global = true)]
    max_set_size: Option<usize>,
    /// Allow caps above twice their default.
    #[arg(long, global = true)]
    i_know: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Discrete,
    Generalized,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Discrete => Mode::Discrete,
            ModeArg::Generalized => Mode::Generalized,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum IsoKind {
    Filtration,
    Hamming,
}

#[derive(Subcommand)]
enum Command {
    /// Radius table and barcodes of one set.
    Barcode {
        input: PathBuf,
        /// Metric space; defaults to the kind of strings in the input.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        max_dim: Option<usize>,
        /// Also draw the barcodes to this SVG file.
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hybrid distance d_new between two sets of equal size.
    Dnew {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_parser = positive_rational)]
        epsilon: Option<Rational>,
        /// Fail instead of skipping registration on non-Morse filtrations.
        #[arg(long)]
        strict: bool,
    },
    /// Separate simplex radii so non-equivalent simplices get distinct radii.
    Separate {
        input: PathBuf,
        #[arg(long, value_parser = positive_rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        max_dim: Option<usize>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Hausdorff distance between two sets.
    Hausdorff {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Filtration isomorphism or Hamming isometry between two sets.
    Iso {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_enum, default_value = "filtration")]
        kind: IsoKind,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Radius, a center and the minimal generators of one simplex.
    Radius {
        input: PathBuf,
        /// Vertices as 1-based indices or names, e.g. "s1,s3" or "1,3".
        #[arg(long)]
        simplex: String,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
    },
    /// Cycle registration of two sets through their separated union.
    Register {
        first: PathBuf,
        second: PathBuf,
        #[arg(long, value_parser = positive_rational)]
        epsilon: Option<Rational>,
        #[arg(long)]
        max_dim: Option<usize>,
    },
}

/// Exit status classes.
#[derive(Debug)]
enum Failure {
    Input(String),
    Limit(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => 2,
            Failure::Limit(_) => 3,
            Failure::Internal(_) => 4,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Input(m) | Failure::Limit(m) | Failure::Internal(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::CapExceeded { .. } => Failure::Limit(e.to_string()),
            Error::Invariant(_) => Failure::Internal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn positive_rational(s: &str) -> Result<Rational, String> {
    let r: Rational = s.parse().map_err(|e: hammology::rational::ParseRationalError| e.to_string())?;
    if r.is_positive() {
        Ok(r)
    } else {
        Err(format!("`{s}` is not positive"))
    }
}

fn load(path: &Path) -> Result<InputDocument, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    InputDocument::parse(&text, &path.display().to_string()).map_err(|e| Failure::Input(e.to_string()))
}

/// The effective cap, refusing overrides beyond twice the default unless acknowledged.
fn cap(cli: &Cli, default: usize) -> Result<usize, Failure> {
    match cli.max_set_size {
        Some(c) if c > 2 * default && !cli.i_know => Err(Failure::Limit(format!(
            "--max-set-size {c} is more than twice the default {default}; pass --i-know to proceed"
        ))),
        Some(c) => Ok(c),
        None => Ok(default),
    }
}

fn write_svg(path: &Path, content: &str) -> Result<(), Failure> {
    std::fs::write(path, content).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

const TIE_BREAKS: [(&str, &str); 4] = [
    ("conflict_order", "radius,size,lex"),
    ("moved_vertex", "lex-smaller-generator-difference"),
    ("union_phases", "first,second,mixed"),
    ("union_order", "lex-smaller-set-first"),
];

fn policies() -> Value {
    TIE_BREAKS.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>().into()
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

fn parse_simplex(text: &str, m: usize) -> Result<Simplex, Failure> {
    let mut vertices = Vec::new();
    for part in text.split(',') {
        let token = part.trim();
        let digits = token.strip_prefix(['s', 'S']).unwrap_or(token);
        let i: usize = digits
            .parse()
            .map_err(|_| Failure::Input(format!("invalid vertex `{token}` in --simplex")))?;
        if i == 0 || i > m {
            return Err(Failure::Input(format!("vertex `{token}` is outside 1..={m}")));
        }
        vertices.push(i - 1);
    }
    Simplex::from_vertices(&vertices).map_err(Failure::from)
}

fn run(cli: &Cli) -> Result<Value, Failure> {
    match &cli.command {
        Command::Barcode {
            input,
            mode,
            max_dim,
            svg: svg_path,
        } => {
            let doc = load(input)?;
            let mode = mode.map_or(doc.mode, Mode::from);
            let cap = cap(cli, DEFAULT_MAX_SET_SIZE)?;
            let f = Filtration::build_with_cap(&doc.set, mode, cap)?;
            let p = compute_persistence(&f);
            let bars = barcodes(p.barcodes(), *max_dim);
            if let Some(path) = svg_path {
                write_svg(path, &svg::render(&bars, f.levels()))?;
            }
            Ok(json!({
                "command": "barcode",
                "inputs": [doc.to_value()],
                "config": {"mode": mode, "max_dim": max_dim, "max_set_size": cap},
                "result": {
                    "levels": f.levels(),
                    "table": radius_table(&f),
                    "barcodes": bars,
                    "morse": p.is_morse(),
                }
            }))
        }
        Command::Dnew {
            first,
            second,
            epsilon,
            strict,
        } => {
            let (a, b) = (load(first)?, load(second)?);
            let options = DistanceOptions {
                epsilon: epsilon.clone(),
                max_set_size: cap(cli, DEFAULT_MAX_SET_SIZE)?,
                registration: if *strict {
                    RegistrationPolicy::Strict
                } else {
                    RegistrationPolicy::SkipWhenNotMorse
                },
            };
            let report = d_new(&a.set, &b.set, &options)?;
            Ok(json!({
                "command": "dnew",
                "inputs": [a.to_value(), b.to_value()],
                "config": {
                    "mode": Mode::Generalized,
                    "epsilon": report.epsilon,
                    "epsilon_source": if epsilon.is_some() { "flag" } else { "default" },
                    "max_set_size": options.max_set_size,
                    "registration": if *strict { "strict" } else { "skip-when-not-morse" },
                    "policies": policies(),
                },
                "result": to_value(&DnewOut::from(&report)),
            }))
        }
        Command::Separate {
            input,
            epsilon,
            max_dim,
            svg: svg_path,
        } => {
            let doc = load(input)?;
            let cap = cap(cli, DEFAULT_MAX_SET_SIZE)?;
            if doc.set.len() > cap {
                return Err(Error::CapExceeded {
                    what: "separation set size",
                    size: doc.set.len(),
                    cap,
                }
                .into());
            }
            let eps = match epsilon {
                Some(e) => e.clone(),
                None => default_epsilon(&RadiusTable::compute(&doc.set)?),
            };
            let sep = separate_with_cap(&doc.set, &eps, cap)?;
            let f = sep.filtration()?;
            let p = compute_persistence(&f);
            let bars = barcodes(p.barcodes(), *max_dim);
            if let Some(path) = svg_path {
                write_svg(path, &svg::render(&bars, f.levels()))?;
            }
            Ok(json!({
                "command": "separate",
                "inputs": [doc.to_value()],
                "config": {"mode": Mode::Generalized, "epsilon": eps, "max_set_size": cap, "policies": policies()},
                "result": {
                    "original": strings(&sep.original),
                    "separation": to_value(&SeparationOut::from(&sep)),
                    "morse": p.is_morse(),
                    "crowded_levels": p.crowded_levels(),
                    "barcodes": bars,
                }
            }))
        }
        Command::Hausdorff { first, second, mode } => {
            let (a, b) = (load(first)?, load(second)?);
            let mode = mode.map_or(if a.mode == Mode::Discrete && b.mode == Mode::Discrete { Mode::Discrete } else { Mode::Generalized }, Mode::from);
            let d = hausdorff(&a.set, &b.set, mode)?;
            Ok(json!({
                "command": "hausdorff",
                "inputs": [a.to_value(), b.to_value()],
                "config": {"mode": mode},
                "result": {"hausdorff": d},
            }))
        }
        Command::Iso {
            first,
            second,
            kind,
            mode,
        } => {
            let (a, b) = (load(first)?, load(second)?);
            let cap = cap(cli, DEFAULT_MAX_SEARCH_SIZE)?;
            let (kind_name, mapping, extra) = match kind {
                IsoKind::Filtration => {
                    let mode = mode.map_or(a.mode, Mode::from);
                    let fa = Filtration::build(&a.set, mode)?;
                    let fb = Filtration::build(&b.set, mode)?;
                    ("filtration", filtration_isomorphism_with_cap(&fa, &fb, cap)?, Value::Null)
                }
                IsoKind::Hamming => match hamming_isometry_with_cap(&a.set, &b.set, cap)? {
                    Some(iso) => {
                        let extra = json!({
                            "positions": iso.isometry.positions,
                            "letters": iso.isometry.letters,
                        });
                        ("hamming", Some(iso.bijection), extra)
                    }
                    None => ("hamming", None, Value::Null),
                },
            };
            let bijection = match &mapping {
                Some(m) => json!(m.iter().map(|v| v + 1).collect::<Vec<_>>()),
                None => json!("none"),
            };
            Ok(json!({
                "command": "iso",
                "inputs": [a.to_value(), b.to_value()],
                "config": {"kind": kind_name, "max_set_size": cap},
                "result": {"bijection": bijection, "isometry": extra},
            }))
        }
        Command::Radius { input, simplex, mode } => {
            let doc = load(input)?;
            let mode = mode.map_or(doc.mode, Mode::from);
            let s = parse_simplex(simplex, doc.set.len())?;
            let cert = radius(&doc.set, s, mode)?;
            let generators = match mode {
                Mode::Generalized => {
                    let g = minimal_generators(&doc.set, s)?;
                    json!({"generators": g.generators, "witness_center": StringOut::new(&g.witness_center)})
                }
                Mode::Discrete => Value::Null,
            };
            Ok(json!({
                "command": "radius",
                "inputs": [doc.to_value()],
                "config": {"mode": mode},
                "result": {
                    "simplex": s,
                    "radius": cert.radius,
                    "center": StringOut::new(&cert.center),
                    "minimal_generators": generators,
                },
            }))
        }
        Command::Register {
            first,
            second,
            epsilon,
            max_dim,
        } => {
            let (a, b) = (load(first)?, load(second)?);
            let cap = cap(cli, DEFAULT_MAX_SET_SIZE)?;
            let eps = match epsilon {
                Some(e) => e.clone(),
                None => default_epsilon(&RadiusTable::compute(&union_of(&a.set, &b.set)?.0)?),
            };
            let union = separate_union_with_cap(&a.set, &b.set, &eps, cap)?;
            let table = union.result.table();
            let uf = union.result.filtration()?;
            let up = compute_persistence(&uf);
            let fa = table.sub_filtration(&union.index.left)?;
            let fb = table.sub_filtration(&union.index.right)?;
            let (pa, pb) = (compute_persistence(&fa), compute_persistence(&fb));
            let left = EmbeddedSide {
                filtration: &fa,
                persistence: &pa,
                union_ids: &union.index.left,
            };
            let right = EmbeddedSide {
                filtration: &fb,
                persistence: &pb,
                union_ids: &union.index.right,
            };
            let top = pa.barcodes().num_dims().max(pb.barcodes().num_dims()).saturating_sub(1);
            let top = max_dim.map_or(top, |d| d.min(top));
            let mut reports = Vec::new();
            for k in 1..=top {
                reports.push(RegistrationOut::from(&register_cycles(left, right, &uf, &up, k)?));
            }
            Ok(json!({
                "command": "register",
                "inputs": [a.to_value(), b.to_value()],
                "config": {"mode": Mode::Generalized, "epsilon": eps, "max_set_size": cap, "policies": policies()},
                "result": {
                    "union": strings(&union.result.original),
                    "first_ids": union.index.left,
                    "second_ids": union.index.right,
                    "separation": to_value(&SeparationOut::from(&union.result)),
                    "first_barcodes": barcodes(pa.barcodes(), *max_dim),
                    "second_barcodes": barcodes(pb.barcodes(), *max_dim),
                    "registrations": reports,
                }
            }))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(doc) => {
            let text = serde_json::to_string_pretty(&doc).expect("results serialize") + "\n";
            match &cli.output {
                Some(path) => {
                    if let Err(e) = std::fs::write(path, text) {
                        eprintln!("error: {}: {e}", path.display());
                        return ExitCode::from(2);
                    }
                }
                None => print!("{text}"),
            }
            ExitCode::SUCCESS
        }
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
