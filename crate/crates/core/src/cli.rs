//! Command-line front end. [`run`] parses arguments, dispatches to the
//! library and returns the process exit code: 0 when everything checked
//! out, 1 when a property fails (the witness is printed), 2 on bad input.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::algebra::algebra_report;
use crate::constructions::builtin_loop;
use crate::gf::{Field, FieldSpec, PrimeField, Rationals};
use crate::loopcore::{
    central_series, check_cml_identity, check_properties, composition_factors, group_type_radical, CayleyJson,
    CheckConfig, FiniteLoop, PropertyCheck, SeriesKind, DEFAULT_RADICAL_BOUND,
};
use crate::radical::{embeddability, in_class_S, wedderburn_report, Outcome, RadicalError};

#[derive(Debug, Parser)]
#[command(name = "loopforge", version, about = "Finite Moufang loops and their alternative loop algebras")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Property {
    Moufang,
    Associative,
    Commutative,
    Ip,
    Identity44,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Series {
    Lower,
    Upper,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Cayley JSON file or builtin name (s3, cyclic:n, chein12, cml81, paige:q, A*B)
    #[arg(long = "loop", value_name = "FILE|BUILTIN")]
    loop_arg: String,
    /// Output file instead of stdout
    #[arg(short = 'o', value_name = "FILE")]
    output: Option<PathBuf>,
    /// Print JSON instead of a text summary
    #[arg(long)]
    json: bool,
}

#[derive(Debug, clap::Args)]
struct Sampling {
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = crate::DEFAULT_SEED, value_parser = parse_seed)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a fixture loop and write its Cayley table
    Construct {
        #[arg(long, value_name = "cyclic:n|s3|chein:<name>|cml81|paige:q")]
        kind: String,
        #[arg(short = 'o', value_name = "FILE")]
        output: Option<PathBuf>,
    },
    /// Check one loop property
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        property: Property,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Central series and nilpotency class
    Series {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "lower")]
        series: Series,
    },
    /// Build F[Q] and report its ideals
    Algebra {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Group-type radical, composition factors and class membership
    Radical {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
    },
    /// Embeddability of Q into the invertible elements of F[Q]
    Embed {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = crate::DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
    },
    /// Radical of F[Q] and the semisimple quotient
    Report {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_parser = parse_field)]
        field: FieldSpec,
        #[arg(long, default_value_t = 16)]
        samples: usize,
        #[arg(long, default_value_t = crate::DEFAULT_SEED, value_parser = parse_seed)]
        seed: u64,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse().map_err(|e: crate::gf::FieldError| e.to_string())
}

/// Decimal or `0x` hexadecimal.
fn parse_seed(s: &str) -> Result<u64, String> {
    let r = match s.strip_prefix("0x").or_else(|| s.strip_prefix("0X")) {
        Some(hex) => u64::from_str_radix(hex, 16),
        None => s.parse(),
    };
    r.map_err(|e| format!("bad seed `{s}`: {e}"))
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

impl From<RadicalError> for Failure {
    fn from(e: RadicalError) -> Self {
        let code = match e {
            RadicalError::CrossCheckMismatch(_) | RadicalError::NotMoufang(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

/// Loads `--loop`: an existing file is read as Cayley JSON, anything else
/// is looked up as a builtin.
fn load_loop(arg: &str) -> Result<FiniteLoop, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("--loop {arg}: {e}")))?;
        let json: CayleyJson =
            serde_json::from_str(&text).map_err(|e| usage(format!("--loop {arg}: not Cayley JSON: {e}")))?;
        return FiniteLoop::from_json(&json).map_err(|e| usage(format!("--loop {arg}: {e}")));
    }
    builtin_loop(arg).map_err(|e| usage(format!("--loop {arg}: {e}")))
}

/// Output sink for one command: `-o` file or the given writer.
struct Sink<'a> {
    out: &'a mut dyn Write,
    file: Option<PathBuf>,
    json: bool,
}

impl Sink<'_> {
    fn emit<T: Serialize>(&mut self, value: &T, text: impl FnOnce() -> String) -> Result<(), Failure> {
        let pretty = serde_json::to_string_pretty(value).expect("reports serialize") + "\n";
        match &self.file {
            Some(p) => std::fs::write(p, pretty).map_err(|e| usage(format!("-o {}: {e}", p.display()))),
            None => {
                let s = if self.json { pretty } else { text() + "\n" };
                self.out.write_all(s.as_bytes()).map_err(|e| usage(e.to_string()))
            }
        }
    }
}

fn names_of(l: &FiniteLoop, idx: &[usize]) -> Vec<String> {
    idx.iter().map(|&i| l.name(i)).collect()
}

fn check_json(l: &FiniteLoop, id: &str, property: &str, c: &PropertyCheck) -> serde_json::Value {
    json!({
        "loop": id,
        "property": property,
        "holds": c.holds,
        "witness": c.witness,
        "witness_names": c.witness.as_ref().map(|w| names_of(l, w)),
        "check": c.mode,
    })
}

macro_rules! with_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::PrimeField(p) => {
                let $f = PrimeField::new(p as u64).map_err(|e| usage(format!("--field: {e}")))?;
                $body
            }
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
        }
    };
}

fn radical_command<F: Field>(l: &FiniteLoop, id: &str, f: &F, sink: &mut Sink) -> Result<i32, Failure> {
    let radical = group_type_radical(l, DEFAULT_RADICAL_BOUND).map_err(|e| usage(e.to_string()))?;
    let factors = composition_factors(l).map_err(|e| usage(e.to_string()))?;
    let class = in_class_S(l, f);
    let (class_json, code) = match &class {
        Ok(r) => (json!(r), 0),
        Err(RadicalError::CrossCheckMismatch(m)) => (json!({ "cross_check_mismatch": m }), 1),
        Err(e) => return Err(usage(e.to_string())),
    };
    let value = json!({
        "loop": id,
        "field": f.spec().to_string(),
        "radical_order": radical.order(),
        "radical": names_of(l, radical.members()),
        "composition_factors": factors,
        "in_class": class_json,
    });
    sink.emit(&value, || {
        let orders: Vec<String> = factors.iter().map(|c| c.order.to_string()).collect();
        format!(
            "group-type radical: order {} of {}\ncomposition factors: {}\nclass check: {}",
            radical.order(),
            l.order(),
            orders.join(", "),
            match &class {
                Ok(r) => r.value.to_string(),
                Err(e) => e.to_string(),
            }
        )
    })?;
    Ok(code)
}

fn execute(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Construct { kind, output } => {
            let l = builtin_loop(&kind).map_err(|e| usage(format!("--kind {kind}: {e}")))?;
            let json = l.to_json().map_err(|e| usage(e.to_string()))?;
            let text = serde_json::to_string(&json).expect("tables serialize") + "\n";
            match output {
                Some(p) => std::fs::write(&p, text).map_err(|e| usage(format!("-o {}: {e}", p.display())))?,
                None => out.write_all(text.as_bytes()).map_err(|e| usage(e.to_string()))?,
            }
            Ok(0)
        }
        Command::Check { common, property, sampling } => {
            let l = load_loop(&common.loop_arg)?;
            let id = common.loop_arg.clone();
            let mut sink = Sink { out, file: common.output, json: common.json };
            if let Property::Identity44 = property {
                let r = check_cml_identity(&l, sampling.samples, sampling.seed).map_err(|e| usage(e.to_string()))?;
                let value = json!({ "loop": id, "property": "identity44", "report": r });
                sink.emit(&value, || match r.witness {
                    None => format!("identity44 holds on {} samples (seed {})", r.samples, r.seed),
                    Some(w) => format!("identity44 fails at {:?}", names_of(&l, &w)),
                })?;
                return Ok(if r.holds { 0 } else { 1 });
            }
            let cfg = CheckConfig { samples: sampling.samples, seed: sampling.seed, ..CheckConfig::default() };
            let report = check_properties(&l, &cfg);
            let (name, c) = match property {
                Property::Moufang => ("moufang", &report.moufang),
                Property::Associative => ("associative", &report.associative),
                Property::Commutative => ("commutative", &report.commutative),
                Property::Ip => ("ip", &report.ip),
                Property::Identity44 => unreachable!("handled above"),
            };
            sink.emit(&check_json(&l, &id, name, c), || match &c.witness {
                None => format!("{name}: holds"),
                Some(w) => format!("{name}: fails at {:?}", names_of(&l, w)),
            })?;
            Ok(if c.holds { 0 } else { 1 })
        }
        Command::Series { common, series } => {
            let l = load_loop(&common.loop_arg)?;
            let kind = match series {
                Series::Lower => SeriesKind::LowerCentral,
                Series::Upper => SeriesKind::UpperCentral,
            };
            let r = central_series(&l, kind).map_err(|e| usage(e.to_string()))?;
            let value = json!({ "loop": common.loop_arg, "series": r });
            let mut sink = Sink { out, file: common.output, json: common.json };
            sink.emit(&value, || {
                let orders: Vec<String> = r.terms.iter().map(|t| t.order().to_string()).collect();
                format!(
                    "term orders: {}\nnilpotency class: {}",
                    orders.join(", "),
                    r.nilpotency_class.map_or("none".to_string(), |c| c.to_string())
                )
            })?;
            Ok(0)
        }
        Command::Algebra { common, field, sampling } => {
            let l = load_loop(&common.loop_arg)?;
            let mut sink = Sink { out, file: common.output, json: common.json };
            with_field!(field, f => {
                let r = algebra_report(&f, &l, sampling.samples as u64, sampling.seed)
                    .map_err(|e| usage(e.to_string()))?;
                let value = json!({ "loop": common.loop_arg, "report": r });
                sink.emit(&value, || {
                    format!(
                        "dim I(Q) = {}, dim F[Q] = {}, dim omega = {}, e in omega: {}, nilpotency index: {}",
                        r.ideal_dim,
                        r.dim,
                        r.omega_dim.map_or("-".into(), |d| d.to_string()),
                        r.unit_in_omega.map_or("-".into(), |b| b.to_string()),
                        r.nilpotency_index.map_or("none".into(), |d| d.to_string())
                    )
                })?;
                let alternative = r.alternative.as_ref().is_none_or(|a| a.ok);
                Ok(if alternative { 0 } else { 1 })
            })
        }
        Command::Radical { common, field } => {
            let l = load_loop(&common.loop_arg)?;
            let mut sink = Sink { out, file: common.output, json: common.json };
            with_field!(field, f => radical_command(&l, &common.loop_arg, &f, &mut sink))
        }
        Command::Embed { common, field, seed } => {
            let l = load_loop(&common.loop_arg)?;
            let mut sink = Sink { out, file: common.output, json: common.json };
            with_field!(field, f => {
                let v = embeddability(&l, &f, &common.loop_arg, seed)?;
                sink.emit(&v, || {
                    let mut s = format!("outcome: {}", v.outcome.as_str());
                    if let Some(w) = &v.witness {
                        s += &format!("\nwitness: simple nonassociative subloop of order {} generated by {:?}", w.order, w.generators);
                    }
                    if let Some((a, b)) = v.collision {
                        s += &format!("\ncollision: {} and {} have the same image", l.name(a), l.name(b));
                    }
                    s
                })?;
                Ok(if v.outcome == Outcome::Embeds { 0 } else { 1 })
            })
        }
        Command::Report { common, field, samples, seed } => {
            let l = load_loop(&common.loop_arg)?;
            let mut sink = Sink { out, file: common.output, json: common.json };
            with_field!(field, f => {
                let r = wedderburn_report(&l, &f, samples, seed)?;
                let value = json!({ "loop": common.loop_arg, "report": r });
                sink.emit(&value, || {
                    format!(
                        "S(Q) order {}, dim F[Q] = {}, dim R = {}, quotient dim {}",
                        r.radical_order, r.fq_dim, r.radical_ideal_dim, r.quotient_dim
                    )
                })?;
                let c = &r.checks;
                let ok = c.omega_whole.unwrap_or(true) && c.no_nilpotent_principal && c.direct_sum.unwrap_or(true);
                Ok(if ok { 0 } else { 1 })
            })
        }
    }
}

/// Runs one command, writing results to `out` and diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}
