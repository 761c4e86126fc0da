//! Command-line front end: argument handling, input parsing and canonical
//! JSON or text output for every subcommand.

mod args;
pub mod report;

use std::ffi::OsString;
use std::io::Write;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::Parser;

use kmnub::nub::{infinite_depth_witness, nub_on_slice, same_nub, trivial_nub, NubOptions};
use kmnub::orbit::Dynamics;
use kmnub::weyl::{standardize, StandardizeOptions};
use kmnub::{scale, Error, Gcm, RootSlice, WeylElement};

pub use args::{Cli, Command, Common, Format};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_INCONCLUSIVE: i32 = 4;

/// Failure of a CLI invocation, mapped onto an exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Domain(e) if e.is_inconclusive() => EXIT_INCONCLUSIVE,
            Failure::Domain(_) => EXIT_DOMAIN,
        }
    }

    /// One-line `error: <code>: <message>` reason.
    pub fn reason(&self) -> String {
        match self {
            Failure::Usage(m) => format!("error: usage: {m}"),
            Failure::Domain(e) => format!("error: {}: {e}", e.code()),
        }
    }
}

/// Parses a space- or comma-separated list of 1-based generator indices.
pub fn parse_word(text: &str, rank: usize) -> Result<Vec<usize>, Failure> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|t| !t.is_empty())
        .map(|t| {
            let i: usize = t
                .parse()
                .map_err(|_| Failure::Usage(format!("bad generator `{t}` in word")))?;
            if i == 0 || i > rank {
                return Err(Failure::Domain(Error::IndexOutOfRange { index: i, rank }));
            }
            Ok(i - 1)
        })
        .collect()
}

fn load_gcm(common: &Common) -> Result<Arc<Gcm>, Failure> {
    let text = std::fs::read_to_string(&common.gcm).map_err(|e| {
        Failure::Usage(format!("cannot read {}: {e}", common.gcm.display()))
    })?;
    Ok(Arc::new(Gcm::parse(&text)?))
}

fn element(gcm: &Arc<Gcm>, word: &str) -> Result<WeylElement, Failure> {
    let w = parse_word(word, gcm.rank())?;
    Ok(WeylElement::from_word(gcm, &w)?)
}

fn nub_options(common: &Common) -> NubOptions {
    NubOptions {
        height: common.height,
        n_max: common.nmax,
        standardize: StandardizeOptions {
            height: common.height,
            ..Default::default()
        },
        paranoid: false,
    }
}

/// Executes one command and returns the text to print on stdout.
pub fn execute(cli: &Cli) -> Result<String, Failure> {
    use report::*;
    match &cli.command {
        Command::Roots { common } => {
            let gcm = load_gcm(common)?;
            let slice = RootSlice::new(&gcm, common.height)?;
            Ok(render(common.format, roots_json(&slice), || roots_text(&slice)))
        }
        Command::Classify { common, word } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let sf = standardize(&w, &nub_options(common).standardize)?;
            let dynamics = Dynamics::new(&sf, common.height, common.nmax)?;
            let slice = RootSlice::new(&gcm, common.height)?;
            let classes = dynamics.classify_slice(&slice, common.threads)?;
            let j = classify_json(&gcm, &w, &sf.element, common.height, &classes)?;
            Ok(render(common.format, j, || classify_text(&classes)))
        }
        Command::Nub { common, word } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let slice = RootSlice::new(&gcm, common.height)?;
            let d = nub_on_slice(&w, &slice, &nub_options(common))?;
            let j = nub_json(&gcm, &w, &d)?;
            Ok(render(common.format, j, || nub_text(&d)))
        }
        Command::Scale {
            common,
            word,
            q,
            audit,
        } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            match audit {
                Some(n) => {
                    let r = scale::tidiness_index_audit(&w, *q, *n)?;
                    Ok(render(common.format, audit_json(&r), || audit_text(&r)))
                }
                None => {
                    let s = scale::scale(&w, *q, StandardizeOptions::default().straight_n)?;
                    Ok(render(common.format, scale_json(*q, &s), || format!("{s}\n")))
                }
            }
        }
        Command::TrivialNub { common, word } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let t = trivial_nub(&w, StandardizeOptions::default().straight_n)?;
            Ok(render(
                common.format,
                serde_json::json!({ "trivial": t }),
                || format!("{t}\n"),
            ))
        }
        Command::SameNub {
            common,
            word,
            word2,
        } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let v = element(&gcm, word2)?;
            let s = same_nub(&w, &v, &nub_options(common))?;
            Ok(render(
                common.format,
                serde_json::json!({ "same_nub": s }),
                || format!("{s}\n"),
            ))
        }
        Command::Standardize { common, word } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let sf = standardize(&w, &nub_options(common).standardize)?;
            let j = standard_json(&sf)?;
            let t = standard_text(&sf)?;
            Ok(render(common.format, j, || t))
        }
        Command::Witness { common, word, n } => {
            let gcm = load_gcm(common)?;
            let w = element(&gcm, word)?;
            let wit = infinite_depth_witness(&w, *n, &nub_options(common))?;
            Ok(render(common.format, witness_json(&wit), || {
                format!("{}\n", wit.beta)
            }))
        }
        Command::Oracle { common, word, nbig } => {
            let gcm = load_gcm(common)?;
            let w = parse_word(word, gcm.rank())?;
            let slice = RootSlice::new(&gcm, common.height)?;
            let rows = oracle_rows(&gcm, &slice, &w, *nbig, common.height)?;
            Ok(render(common.format, rows.0, || rows.1.clone()))
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    // clap's message spans several lines; keep the reason on one
                    let msg = e.render().to_string();
                    let reason: Vec<&str> = msg
                        .lines()
                        .map(str::trim)
                        .take_while(|l| !l.starts_with("Usage:") && !l.starts_with("For more"))
                        .filter(|l| !l.is_empty())
                        .collect();
                    let reason = reason.join(" ");
                    let reason = reason.trim_start_matches("error: ");
                    let _ = writeln!(err, "error: usage: {reason}");
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(f) => {
            let _ = writeln!(err, "{}", f.reason());
            f.exit_code()
        }
    }
}
