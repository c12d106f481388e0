//! Command-line front end for `skewring`.

pub mod parse;

use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::{Parser, ValueEnum};
use serde_json::{json, Value};

use skewring::endo::Endomorphism;
use skewring::properties::{evaluate, Property};
use skewring::ring::{idempotents, FiniteRing};
use skewring::search::{parse_query, search, Family};
use skewring::skew::{find_idempotents_bounded, truncated_skew_ring, SkewPolynomial};
use skewring::theorems::{self, verdict_json, Bounds, ClaimReport, Status, VerifyOptions};
use skewring::verdict::{Scan, Verdict, DEFAULT_SEED};
use skewring::zoo::{build_endo, build_ring, registry, registry_entry, EndoSpec, RegistryEntry, RingSpec};

pub use parse::{parse_element, parse_endo_spec, parse_ring_spec, ParseError};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Verb {
    /// Check the ring axioms.
    Validate,
    /// Print every property verdict for (ring, endomorphism).
    Props,
    /// List the idempotents of the ring.
    Idempotents,
    /// List the idempotents of R[x;σ] up to a degree.
    SkewIdempotents,
    /// Run one claim against one or all registry entries.
    Claim,
    /// Run every claim against every registry entry.
    VerifyPaper,
    /// Search generated rings for a combination of properties.
    Search,
}

impl Verb {
    pub fn name(self) -> &'static str {
        match self {
            Verb::Validate => "validate",
            Verb::Props => "props",
            Verb::Idempotents => "idempotents",
            Verb::SkewIdempotents => "skew-idempotents",
            Verb::Claim => "claim",
            Verb::VerifyPaper => "verify-paper",
            Verb::Search => "search",
        }
    }
}

fn ring_arg(s: &str) -> Result<RingSpec, ParseError> {
    parse_ring_spec(s)
}

fn endo_arg(s: &str) -> Result<EndoSpec, ParseError> {
    parse_endo_spec(s)
}

fn family_arg(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: skewring::Error| e.to_string())
}

/// A parsed invocation.
#[derive(Clone, Debug, PartialEq, Eq, Parser)]
#[command(name = "skewring", version, about = "Idempotent properties of finite rings and their skew polynomial extensions")]
pub struct Command {
    #[arg(value_enum)]
    pub verb: Verb,
    /// Claim id (`claim` only), e.g. C11.
    pub claim: Option<String>,
    #[arg(long, value_parser = ring_arg)]
    pub ring: Option<RingSpec>,
    #[arg(long, value_parser = endo_arg)]
    pub endo: Option<EndoSpec>,
    /// Maximal polynomial degree d.
    #[arg(long)]
    pub degree: Option<usize>,
    /// Truncation order m of R[x;σ]/(x^m).
    #[arg(long)]
    pub trunc: Option<usize>,
    /// Property name; for `search`, a comma-separated list where `!name`
    /// asks for failure.
    #[arg(long)]
    pub property: Option<String>,
    #[arg(long, value_parser = family_arg)]
    pub family: Option<Family>,
    #[arg(long)]
    pub max_order: Option<usize>,
    #[arg(long)]
    pub json: bool,
    /// Seed for sampled scans.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Sample instead of scanning exhaustively (required above order 4096).
    #[arg(long)]
    pub sampled: bool,
    /// Worker threads.
    #[arg(long)]
    pub threads: Option<usize>,
    /// Include elapsed times in claim reports.
    #[arg(long)]
    pub timings: bool,
}

impl Command {
    /// Arguments (without the program name) that parse back to `self`.
    pub fn render(&self) -> Vec<String> {
        let mut args = vec![self.verb.name().to_string()];
        if let Some(c) = &self.claim {
            args.push(c.clone());
        }
        let mut opt = |flag: &str, value: Option<String>| {
            if let Some(v) = value {
                args.push(format!("--{flag}"));
                args.push(v);
            }
        };
        opt("ring", self.ring.as_ref().map(ToString::to_string));
        opt("endo", self.endo.as_ref().map(ToString::to_string));
        opt("degree", self.degree.map(|d| d.to_string()));
        opt("trunc", self.trunc.map(|m| m.to_string()));
        opt("property", self.property.clone());
        opt("family", self.family.map(|f| f.to_string()));
        opt("max-order", self.max_order.map(|n| n.to_string()));
        opt("seed", self.seed.map(|s| s.to_string()));
        opt("threads", self.threads.map(|t| t.to_string()));
        for (flag, on) in [("json", self.json), ("sampled", self.sampled), ("timings", self.timings)] {
            if on {
                args.push(format!("--{flag}"));
            }
        }
        args
    }

    /// Parses arguments without the program name.
    pub fn parse_args<I, S>(args: I) -> Result<Self, clap::Error>
    where
        I: IntoIterator<Item = S>,
        S: Into<std::ffi::OsString> + Clone,
    {
        let argv = std::iter::once(std::ffi::OsString::from("skewring")).chain(args.into_iter().map(Into::into));
        Command::try_parse_from(argv)
    }

    fn scan(&self) -> Scan {
        if self.sampled {
            Scan::sampled(self.seed.unwrap_or(DEFAULT_SEED))
        } else {
            Scan::Exhaustive
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] skewring::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

type CliResult<T> = Result<T, CliError>;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Ring and endomorphism of the command. A registry name without `--endo`
/// brings its own endomorphism; anything else defaults to the identity.
fn subject(cmd: &Command) -> CliResult<RegistryEntry> {
    let spec = cmd.ring.as_ref().ok_or_else(|| usage("--ring is required"))?;
    let named = match spec {
        RingSpec::Named(name) => Some(registry_entry(name)?),
        _ => None,
    };
    let ring = match named {
        Some(e) => e.ring.clone(),
        None => build_ring(spec)?,
    };
    let sigma = match (&cmd.endo, named) {
        (None, Some(e)) => e.sigma.clone(),
        (None, None) => Arc::new(Endomorphism::identity(ring.clone())),
        (Some(endo), _) => build_endo(&ring, endo)?,
    };
    let name = match named {
        Some(e) if cmd.endo.as_ref().map_or(true, |s| s.to_string() == e.sigma.label()) => e.name.clone(),
        _ => format!("{spec} / {}", sigma.label()),
    };
    let mut entry = RegistryEntry::new(name, ring, sigma);
    if let Some(e) = named {
        entry.surrogate = e.surrogate;
        entry.provenance = e.provenance.clone();
    }
    Ok(entry)
}

/// `prop: holds` or `prop: fails (detail) witness (a, b) power k`.
pub fn format_verdict(ring: &FiniteRing, v: &Verdict) -> String {
    let mut s = format!("{}: {}", v.property, if v.holds { "holds" } else { "fails" });
    if !v.holds {
        if let Some(d) = &v.detail {
            let _ = write!(s, " ({d})");
        }
        let elems: Vec<String> = v.witness.iter().map(|&e| ring.format(e)).collect();
        let _ = write!(s, " witness ({})", elems.join(", "));
        if let Some(k) = v.power {
            let _ = write!(s, " power {k}");
        }
    }
    if v.sampled {
        s.push_str(" [sampled]");
    }
    s
}

fn emit(out: &mut dyn Write, cmd: &Command, value: Value, text: &str) -> CliResult<()> {
    if cmd.json {
        writeln!(out, "{}", serde_json::to_string_pretty(&value).expect("serializable"))?;
    } else {
        write!(out, "{text}")?;
    }
    Ok(())
}

fn run_validate(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let spec = cmd.ring.as_ref().ok_or_else(|| usage("--ring is required"))?;
    let (ring, verdict) = match build_ring(spec) {
        Ok(r) => {
            let v = r.validate();
            (Some(r), v)
        }
        Err(skewring::Error::InvalidRing(v)) => (None, v),
        Err(e) => return Err(e.into()),
    };
    let label = ring.as_ref().map_or_else(|| spec.to_string(), |r| r.label().to_string());
    let order = ring.as_ref().map(|r| r.order());
    let mut text = format!("{label}");
    if let Some(n) = order {
        let _ = write!(text, " (order {n})");
    }
    let _ = writeln!(text, ": {verdict}");
    let value = json!({ "ring": label, "order": order, "verdict": verdict });
    emit(out, cmd, value, &text)?;
    Ok(if verdict.holds { 0 } else { 1 })
}

fn run_props(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let entry = subject(cmd)?;
    let scan = cmd.scan();
    let only: Option<Property> = cmd.property.as_deref().map(str::parse).transpose()?;
    let selected: Vec<Property> = match only {
        Some(p) => vec![p],
        None => Property::ALL.to_vec(),
    };
    let (ring, sigma, label) = match cmd.trunc {
        Some(m) => {
            let t = Arc::new(truncated_skew_ring(&entry.sigma, m)?);
            let id = Arc::new(Endomorphism::identity(t.clone()));
            let label = t.label().to_string();
            (t, id, label)
        }
        None => (entry.ring.clone(), entry.sigma.clone(), entry.name.clone()),
    };
    let mut verdicts = Vec::new();
    for p in selected {
        if cmd.trunc.is_some() && p.uses_sigma() {
            if only.is_some() {
                return Err(usage(format!("{p} needs an endomorphism; drop --trunc")));
            }
            continue;
        }
        verdicts.push(evaluate(p, &sigma, scan)?);
    }
    let mut text = String::new();
    for v in &verdicts {
        let _ = writeln!(text, "{}", format_verdict(&ring, v));
    }
    let value = json!({
        "ring": label,
        "endo": if cmd.trunc.is_some() { "id".to_string() } else { sigma.label().to_string() },
        "verdicts": verdicts.iter().map(|v| verdict_json(&ring, v)).collect::<Vec<_>>(),
    });
    emit(out, cmd, value, &text)?;
    Ok(if only.is_some() && !verdicts[0].holds { 1 } else { 0 })
}

fn run_idempotents(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let entry = subject(cmd)?;
    let ring = match cmd.trunc {
        Some(m) => Arc::new(truncated_skew_ring(&entry.sigma, m)?),
        None => entry.ring.clone(),
    };
    let ids: Vec<String> = idempotents(&ring).into_iter().map(|e| ring.format(e)).collect();
    let mut text = String::new();
    for e in &ids {
        let _ = writeln!(text, "{e}");
    }
    emit(out, cmd, json!({ "ring": ring.label(), "idempotents": ids }), &text)?;
    Ok(0)
}

fn run_skew_idempotents(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let entry = subject(cmd)?;
    let d = cmd.degree.unwrap_or(Bounds::DEFAULT.d);
    let ids: Vec<String> = find_idempotents_bounded(&entry.sigma, d)?
        .iter()
        .map(SkewPolynomial::to_string)
        .collect();
    let mut text = String::new();
    for e in &ids {
        let _ = writeln!(text, "{e}");
    }
    let value = json!({
        "ring": entry.ring.label(),
        "endo": entry.sigma.label(),
        "degree": d,
        "idempotents": ids,
    });
    emit(out, cmd, value, &text)?;
    Ok(0)
}

fn bounds(cmd: &Command) -> Bounds {
    Bounds {
        d: cmd.degree.unwrap_or(Bounds::DEFAULT.d),
        m: cmd.trunc.unwrap_or(Bounds::DEFAULT.m),
    }
}

fn report_out(cmd: &Command, out: &mut dyn Write, reports: &[ClaimReport]) -> CliResult<i32> {
    let mut text = String::new();
    for r in reports {
        let _ = writeln!(text, "{r}");
    }
    let value = serde_json::to_value(reports).expect("serializable");
    emit(out, cmd, value, &text)?;
    Ok(if reports.iter().any(|r| r.status == Status::Fail) { 1 } else { 0 })
}

fn run_claim(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let id = cmd.claim.as_deref().ok_or_else(|| usage("claim needs an id, e.g. `claim C11`"))?;
    theorems::claim(id)?;
    let b = bounds(cmd);
    let entries: Vec<RegistryEntry> = match &cmd.ring {
        Some(_) => vec![subject(cmd)?],
        None => registry().to_vec(),
    };
    let mut reports = Vec::new();
    for e in &entries {
        let mut r = theorems::run_claim(id, e, b)?;
        if !cmd.timings {
            r.elapsed_ms = None;
        }
        reports.push(r);
    }
    report_out(cmd, out, &reports)
}

fn run_verify(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let reports = theorems::verify_paper(VerifyOptions {
        bounds: bounds(cmd),
        timings: cmd.timings,
    })?;
    report_out(cmd, out, &reports)
}

fn run_search(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    let text_query = cmd.property.as_deref().ok_or_else(|| usage("search needs --property"))?;
    let query = parse_query(text_query)?;
    let family = cmd.family.unwrap_or(Family::All);
    let max_order = cmd.max_order.unwrap_or(16);
    let hits = search(&query, family, max_order)?;
    let mut text = String::new();
    for h in &hits {
        let _ = writeln!(text, "{} / {} (order {})", h.ring, h.sigma, h.order);
    }
    if hits.is_empty() {
        let _ = writeln!(text, "no ring of family {family} up to order {max_order} matches {text_query}");
    }
    let value = json!({
        "query": query.iter().map(ToString::to_string).collect::<Vec<_>>(),
        "family": family.name(),
        "max_order": max_order,
        "hits": hits,
    });
    emit(out, cmd, value, &text)?;
    Ok(if hits.is_empty() { 1 } else { 0 })
}

fn dispatch(cmd: &Command, out: &mut dyn Write) -> CliResult<i32> {
    match cmd.verb {
        Verb::Validate => run_validate(cmd, out),
        Verb::Props => run_props(cmd, out),
        Verb::Idempotents => run_idempotents(cmd, out),
        Verb::SkewIdempotents => run_skew_idempotents(cmd, out),
        Verb::Claim => run_claim(cmd, out),
        Verb::VerifyPaper => run_verify(cmd, out),
        Verb::Search => run_search(cmd, out),
    }
}

/// Runs a command, writing its report to `out`. Returns the exit status:
/// 0 when everything passes (or the search finds something), 1 on a
/// failing verdict, failing claim or empty search.
pub fn run_command(cmd: &Command, out: &mut (dyn Write + Send)) -> CliResult<i32> {
    if cmd.claim.is_some() && cmd.verb != Verb::Claim {
        return Err(usage(format!("unexpected argument for {}", cmd.verb.name())));
    }
    match cmd.threads {
        Some(0) => Err(usage("--threads must be positive")),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(e.to_string()))?;
            pool.install(|| dispatch(cmd, out))
        }
        None => dispatch(cmd, out),
    }
}

/// Parses and runs `args` (without the program name), returning the exit
/// status together with the standard output and error text.
pub fn run_args<I, S>(args: I) -> (i32, String, String)
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cmd = match Command::parse_args(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 { (0, text, String::new()) } else { (code, String::new(), text) };
        }
    };
    let mut out = Vec::new();
    match run_command(&cmd, &mut out) {
        Ok(code) => (code, String::from_utf8(out).expect("utf-8 output"), String::new()),
        Err(e) => (
            e.exit_code(),
            String::from_utf8(out).expect("utf-8 output"),
            format!("error: {e}\n"),
        ),
    }
}
