//! Command dispatch for the `tmpat` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use tmpatterns::avoidance::{self, Unavoidability};
use tmpatterns::thue_morse::{self, DEFAULT_MAX_PREFIX};
use tmpatterns::typicality::{self, Evidence, Verdict};
use tmpatterns::{verify, Alphabet, Error, Morphism, Word};

/// Overrides the ceiling on `prefix N`.
pub const MAX_PREFIX_ENV: &str = "TMPAT_MAX_PREFIX";

#[derive(Debug, Parser)]
#[command(name = "tmpat", version, about = "Binary patterns in the Thue-Morse word")]
pub struct Cli {
    /// Print a JSON object instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the first N letters of t.
    Prefix { n: usize },
    /// Is W a segment of t?
    Segment { word: String },
    /// Is W unavoidable in t, and why?
    Unavoidable { word: String },
    /// Search for a morphism mapping pattern P onto a segment of t.
    Witness {
        pattern: String,
        #[arg(long)]
        max_image_len: usize,
        /// Pattern alphabet; defaults to ab, or the sorted letters of P.
        #[arg(long)]
        alphabet: Option<String>,
        #[arg(long, default_value_t = 1 << 15)]
        prefix_len: usize,
    },
    /// Is W in the ideal generated by Shur's generators?
    Avoided { word: String },
    /// Typical, atypical or not a segment.
    Classify { word: String },
    /// List the segments of a given length.
    Enumerate {
        #[arg(long)]
        length: usize,
        /// Only special segments (both extensions are segments).
        #[arg(long)]
        special: bool,
    },
    /// All u of length up to N whose square is a segment, with u = mu^n(x).
    Squares {
        #[arg(long)]
        max_root_len: usize,
    },
    /// Optimal recurrence window for segments of length K.
    Recurrence { k: usize },
    /// List atypical words; optionally write the J-order diagram as DOT.
    Atypical {
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Is the morphism literal (e.g. a->ab,b->ba) a product of mu and xi?
    InMonoid { morphism: String },
    /// Run verification suites.
    Verify {
        #[arg(long)]
        suite: Option<String>,
        #[arg(long)]
        max_len: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Yes,
    No,
    Value,
    Error,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Yes | Status::Value => 0,
            Status::No => 1,
            Status::Error => 2,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandResult {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub elapsed_ms: f64,
    #[serde(skip)]
    pub text: String,
}

impl CommandResult {
    pub fn render(&self, json: bool) -> String {
        if json {
            serde_json::to_string_pretty(self).expect("payload is plain JSON")
        } else {
            self.text.trim_end().to_string()
        }
    }
}

struct Outcome {
    status: Status,
    payload: Value,
    text: String,
}

impl Outcome {
    fn verdict(yes: bool, payload: Value, text: String) -> Self {
        Outcome {
            status: if yes { Status::Yes } else { Status::No },
            payload,
            text,
        }
    }

    fn value(payload: Value, text: String) -> Self {
        Outcome {
            status: Status::Value,
            payload,
            text,
        }
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn binary_word(text: &str) -> Result<Word, Error> {
    Word::binary(text)
}

fn pattern_word(text: &str, alphabet: Option<&str>) -> Result<Word, Error> {
    let alphabet = match alphabet {
        Some(a) => Alphabet::new(a)?,
        None => {
            let mut letters: Vec<char> = text.chars().collect();
            letters.sort_unstable();
            letters.dedup();
            if letters.iter().all(|&c| c == 'a' || c == 'b') {
                Alphabet::binary()
            } else {
                Alphabet::new(&letters.into_iter().collect::<String>())?
            }
        }
    };
    Word::parse(text, &alphabet)
}

fn max_prefix() -> usize {
    std::env::var(MAX_PREFIX_ENV)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_PREFIX)
}

fn word_list(words: &[Word]) -> (Value, String) {
    let texts: Vec<String> = words.iter().map(ToString::to_string).collect();
    let text = texts.join("\n");
    (json!(texts), text)
}

fn execute(command: &Command) -> Result<Outcome, Error> {
    Ok(match command {
        Command::Prefix { n } => {
            let prefix = thue_morse::tm_prefix_with_limit(*n, max_prefix())?;
            let text = prefix.to_string();
            Outcome::value(json!({ "length": n, "prefix": text }), text)
        }
        Command::Segment { word } => {
            let w = binary_word(word)?;
            let seg = thue_morse::is_segment(&w)?;
            Outcome::verdict(seg, json!({ "word": word, "segment": seg }), yes_no(seg).into())
        }
        Command::Unavoidable { word } => {
            let w = binary_word(word)?;
            let reason = avoidance::unavoidability(&w)?;
            let yes = reason.is_unavoidable();
            let reason_text = match reason {
                Unavoidability::ExceptionWord => "exception-word",
                Unavoidability::Segment => "segment",
                Unavoidability::Avoided => "avoided",
            };
            Outcome::verdict(
                yes,
                json!({ "word": word, "unavoidable": yes, "reason": reason }),
                format!("{}\nreason: {reason_text}", yes_no(yes)),
            )
        }
        Command::Witness {
            pattern,
            max_image_len,
            alphabet,
            prefix_len,
        } => {
            let p = pattern_word(pattern, alphabet.as_deref())?;
            match avoidance::find_witness(&p, *max_image_len, *prefix_len)? {
                Some(w) => Outcome::verdict(
                    true,
                    json!({ "pattern": pattern, "witness": w }),
                    format!(
                        "yes\nmorphism: {}\nimage: {}\nposition: {}",
                        w.morphism, w.image, w.position
                    ),
                ),
                None => Outcome::verdict(
                    false,
                    json!({ "pattern": pattern, "witness": null }),
                    format!("no\nno witness with images of length <= {max_image_len}"),
                ),
            }
        }
        Command::Avoided { word } => {
            let w = binary_word(word)?;
            match avoidance::avoidance_certificate(&w)? {
                Some(cert) => Outcome::verdict(
                    true,
                    json!({ "word": word, "avoided": true, "certificate": cert }),
                    format!(
                        "yes\ngenerator: {}\nmorphism: {}\nposition: {}",
                        cert.generator.word, cert.morphism, cert.position
                    ),
                ),
                None => Outcome::verdict(
                    false,
                    json!({ "word": word, "avoided": false }),
                    "no".into(),
                ),
            }
        }
        Command::Classify { word } => {
            let w = binary_word(word)?;
            let verdict = typicality::classify(&w)?;
            let mut text = match verdict.verdict {
                Verdict::Typical => "typical".to_string(),
                Verdict::Atypical => "atypical".to_string(),
                Verdict::NotASegment => "not-a-segment".to_string(),
            };
            match &verdict.evidence {
                Evidence::Criterion {
                    length3_factors,
                    criterion_satisfied,
                } => {
                    let _ = write!(
                        text,
                        "\nlength-3 segments: {}\ncriterion satisfied: {}",
                        length3_factors.join(" "),
                        yes_no(*criterion_satisfied)
                    );
                }
                Evidence::Membership {
                    maximal,
                    variant,
                    position,
                } => {
                    let _ = write!(text, "\nfactor of {variant} at {position} (variant of {maximal})");
                }
                Evidence::NotASegment => {}
            }
            Outcome::value(serde_json::to_value(&verdict).expect("serializable"), text)
        }
        Command::Enumerate { length, special } => {
            let mut words = thue_morse::segments_of_length(*length)?;
            if *special {
                let mut kept = Vec::new();
                for w in words {
                    if thue_morse::is_special(&w)? {
                        kept.push(w);
                    }
                }
                words = kept;
            }
            let (payload, text) = word_list(&words);
            Outcome::value(
                json!({ "length": length, "special": special, "count": words.len(), "words": payload }),
                text,
            )
        }
        Command::Squares { max_root_len } => {
            if *max_root_len == 0 || *max_root_len > 512 {
                return Err(Error::OutOfRange {
                    what: "max root length",
                    value: *max_root_len as u64,
                    allowed: "1..=512".into(),
                });
            }
            let mut rows = Vec::new();
            let mut text = String::new();
            // a square segment has a segment root
            for u in thue_morse::segments_up_to(*max_root_len)? {
                if let Some(root) = thue_morse::classify_square_root(&u)? {
                    let _ = writeln!(text, "{u} mu^{}({})", root.power, root.base);
                    rows.push(json!({ "root": u.to_string(), "base": root.base.to_string(), "power": root.power }));
                }
            }
            Outcome::value(json!({ "max_root_len": max_root_len, "squares": rows }), text)
        }
        Command::Recurrence { k } => {
            let ell = thue_morse::recurrence_window(*k)?;
            Outcome::value(json!({ "k": k, "window": ell }), ell.to_string())
        }
        Command::Atypical { dot } => {
            let words = typicality::atypical_words();
            let (list, mut text) = word_list(words);
            let mut payload = json!({ "count": words.len(), "words": list });
            if let Some(path) = dot {
                let rendered = typicality::export_jorder_dot(&typicality::build_s0());
                std::fs::write(path, rendered).map_err(|e| Error::OutOfRange {
                    what: "dot path",
                    value: 0,
                    allowed: format!("writable file ({e})"),
                })?;
                payload["dot"] = json!(path.display().to_string());
                let _ = write!(text, "\nwrote {}", path.display());
            }
            Outcome::value(payload, text)
        }
        Command::InMonoid { morphism } => {
            let phi: Morphism = morphism.parse()?;
            if !phi.is_binary_endomorphism() {
                return Err(Error::NotBinary(phi.to_string()));
            }
            match phi.in_mu_xi_monoid() {
                Some(form) => {
                    let name = if form.exchange {
                        format!("xi.mu^{}", form.power)
                    } else {
                        format!("mu^{}", form.power)
                    };
                    Outcome::verdict(
                        true,
                        json!({ "morphism": phi.to_string(), "form": form }),
                        format!("yes\n{name}"),
                    )
                }
                None => Outcome::verdict(
                    false,
                    json!({ "morphism": phi.to_string(), "form": null }),
                    "no".into(),
                ),
            }
        }
        Command::Verify { suite, max_len } => {
            let reports = match suite {
                Some(name) => vec![verify::run_suite(name, *max_len)?],
                None => verify::run_all(*max_len)?,
            };
            let mut text = String::new();
            for r in &reports {
                let _ = writeln!(
                    text,
                    "{} {} (size {}, {} cases, {} ms)",
                    if r.passed() { "PASS" } else { "FAIL" },
                    r.name,
                    r.size,
                    r.cases,
                    r.elapsed_ms
                );
                for f in &r.failures {
                    let _ = writeln!(text, "  {f}");
                }
            }
            let all = reports.iter().all(verify::SuiteReport::passed);
            Outcome::verdict(all, json!({ "passed": all, "suites": reports }), text)
        }
    })
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Prefix { .. } => "prefix",
        Command::Segment { .. } => "segment",
        Command::Unavoidable { .. } => "unavoidable",
        Command::Witness { .. } => "witness",
        Command::Avoided { .. } => "avoided",
        Command::Classify { .. } => "classify",
        Command::Enumerate { .. } => "enumerate",
        Command::Squares { .. } => "squares",
        Command::Recurrence { .. } => "recurrence",
        Command::Atypical { .. } => "atypical",
        Command::InMonoid { .. } => "in-monoid",
        Command::Verify { .. } => "verify",
    }
}

/// Runs a parsed command.
pub fn run_command(command: &Command) -> CommandResult {
    let started = Instant::now();
    let outcome = execute(command).unwrap_or_else(|e| Outcome {
        status: Status::Error,
        payload: json!({ "error": e.to_string() }),
        text: format!("error: {e}"),
    });
    CommandResult {
        command: command_name(command).to_string(),
        status: outcome.status,
        payload: outcome.payload,
        elapsed_ms: started.elapsed().as_secs_f64() * 1000.0,
        text: outcome.text,
    }
}

/// Parses `argv` and runs it. Usage errors come back as `Status::Error`;
/// `--help` and `--version` come back as `Err` with clap's rendered message.
pub fn run<I, T>(argv: I) -> Result<(CommandResult, bool), clap::Error>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let json = args.iter().any(|a| a == "--json");
    match Cli::try_parse_from(&args) {
        Ok(cli) => Ok((run_command(&cli.command), cli.json)),
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => Err(e),
        Err(e) => Ok((
            CommandResult {
                command: "usage".into(),
                status: Status::Error,
                payload: json!({ "error": e.to_string() }),
                elapsed_ms: 0.0,
                text: e.render().to_string(),
            },
            json,
        )),
    }
}
