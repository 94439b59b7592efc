//! Argument and config-file parsing.
//!
//! Every command declares its parameters in a table ([`Key`]). The same table
//! drives the clap parser, the `key = value` config file and the
//! required-key check, so flags and config keys can never drift apart.
//! Precedence: flags, then config file, then the table's defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Arg, ArgAction, ArgMatches};
use wva_core::SpectrumForm;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Simulate,
    Sweep,
    Design,
    Geometry,
    Classical,
}

impl Command {
    pub const ALL: [Command; 5] = [
        Command::Simulate,
        Command::Sweep,
        Command::Design,
        Command::Geometry,
        Command::Classical,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Sweep => "sweep",
            Command::Design => "design",
            Command::Geometry => "geometry",
            Command::Classical => "classical",
        }
    }

    fn about(self) -> &'static str {
        match self {
            Command::Simulate => "Post-selected output spectrum at one rotation rate",
            Command::Sweep => "Rotation-rate sweep of the centre-wavelength shift and sensitivity k",
            Command::Design => "Smallest loop area and post-selection angle meeting detector limits",
            Command::Geometry => "Turns and equivalent area of the multipass curved-mirror loop",
            Command::Classical => "Fringe shift and intensity of the classical Sagnac interferometer",
        }
    }

    /// Artifact format used when `--format` is not given.
    pub fn default_format(self) -> Format {
        match self {
            Command::Simulate | Command::Sweep => Format::Csv,
            Command::Design | Command::Geometry | Command::Classical => Format::Json,
        }
    }

    pub fn keys(self) -> &'static [Key] {
        match self {
            Command::Simulate => SIMULATE,
            Command::Sweep => SWEEP,
            Command::Design => DESIGN,
            Command::Geometry => GEOMETRY,
            Command::Classical => CLASSICAL,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Number,
    Count,
    Text,
}

/// One command parameter.
#[derive(Debug, Clone, Copy)]
pub struct Key {
    pub name: &'static str,
    pub kind: Kind,
    pub required: bool,
    pub default: Option<&'static str>,
    pub help: &'static str,
}

const fn req(name: &'static str, kind: Kind, help: &'static str) -> Key {
    Key {
        name,
        kind,
        required: true,
        default: None,
        help,
    }
}

const fn opt(name: &'static str, kind: Kind, default: Option<&'static str>, help: &'static str) -> Key {
    Key {
        name,
        kind,
        required: false,
        default,
        help,
    }
}

const ALPHA: Key = req("alpha", Kind::Number, "pre-selection angle α, rad");
const BETA: Key = req("beta", Kind::Number, "post-selection angle β, rad");
const AREA: Key = req("area", Kind::Number, "loop area S, m²");
const LAMBDA0: Key = req("lambda0", Kind::Number, "centre wavelength λ₀, nm");
const DLAMBDA: Key = req("dlambda", Kind::Number, "spectral width Δλ, nm");
const I0: Key = opt("i0", Kind::Number, Some("1"), "source peak intensity");
const SHAPE: Key = opt(
    "probe-shape",
    Kind::Text,
    Some("rms"),
    "probe intensity convention: rms | envelope | squared",
);

const SIMULATE: &[Key] = &[
    ALPHA,
    BETA,
    AREA,
    req("omega", Kind::Number, "rotation rate Ω, rad/s"),
    LAMBDA0,
    DLAMBDA,
    I0,
    SHAPE,
    opt("points", Kind::Count, Some("2048"), "grid points over λ₀ ± 4Δλ"),
];

const SWEEP: &[Key] = &[
    ALPHA,
    BETA,
    AREA,
    LAMBDA0,
    DLAMBDA,
    req("omega-min", Kind::Number, "lowest rotation rate, rad/s"),
    req("omega-max", Kind::Number, "highest rotation rate, rad/s"),
    req("steps", Kind::Count, "number of rotation rates"),
    I0,
    SHAPE,
    opt("window-lo", Kind::Number, None, "sensitivity window lower edge, rad/s"),
    opt("window-hi", Kind::Number, None, "sensitivity window upper edge, rad/s"),
    opt("name", Kind::Text, Some("sweep"), "label stored in the JSON artifact"),
];

const DESIGN: &[Key] = &[
    ALPHA,
    LAMBDA0,
    DLAMBDA,
    req("i0", Kind::Number, "source peak intensity"),
    req("i-min", Kind::Number, "spectrometer detection floor"),
    req("dlambda-res", Kind::Number, "smallest resolvable shift, nm"),
    req("omega-target", Kind::Number, "rotation rate to resolve, rad/s"),
    req("area-lo", Kind::Number, "smallest loop area considered, m²"),
    req("area-hi", Kind::Number, "largest loop area considered, m²"),
    opt("betas", Kind::Text, None, "comma-separated post-selection angles, rad"),
    opt("beta-min", Kind::Number, None, "first post-selection angle, rad"),
    opt("beta-max", Kind::Number, None, "last post-selection angle, rad"),
    opt("beta-steps", Kind::Count, None, "number of post-selection angles"),
    SHAPE,
];

const GEOMETRY: &[Key] = &[
    req("theta-deg", Kind::Number, "injection angle θ_r, whole degrees"),
    req("rs", Kind::Number, "device radius R_s, m"),
];

const CLASSICAL: &[Key] = &[
    AREA,
    LAMBDA0,
    req("omega", Kind::Number, "rotation rate Ω, rad/s"),
    opt("amplitude", Kind::Number, Some("1"), "intensity amplitude A"),
    opt("mod-phase", Kind::Number, Some("0"), "modulation phase Δφ_m, rad"),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}' (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Output {
    Stdout,
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Number(f64),
    Count(usize),
    Text(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub command: Command,
    pub params: BTreeMap<String, Value>,
    pub output: Output,
    pub format: Format,
    pub form: SpectrumForm,
}

impl RunConfig {
    pub fn number(&self, key: &str) -> Result<f64, CliError> {
        match self.params.get(key) {
            Some(Value::Number(v)) => Ok(*v),
            _ => Err(CliError::Usage(format!("missing required parameter --{key}"))),
        }
    }

    pub fn maybe_number(&self, key: &str) -> Option<f64> {
        match self.params.get(key) {
            Some(Value::Number(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn count(&self, key: &str) -> Result<usize, CliError> {
        match self.params.get(key) {
            Some(Value::Count(v)) => Ok(*v),
            _ => Err(CliError::Usage(format!("missing required parameter --{key}"))),
        }
    }

    pub fn maybe_count(&self, key: &str) -> Option<usize> {
        match self.params.get(key) {
            Some(Value::Count(v)) => Some(*v),
            _ => None,
        }
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        match self.params.get(key) {
            Some(Value::Text(v)) => Some(v),
            _ => None,
        }
    }
}

const GLOBAL_KEYS: [&str; 3] = ["out", "format", "form"];

fn cli() -> clap::Command {
    let global = |name: &'static str, help: &'static str| {
        Arg::new(name)
            .long(name)
            .value_name("VALUE")
            .action(ArgAction::Set)
            .help(help)
            .global(true)
    };
    let mut root = clap::Command::new("wva")
        .about("Weak-value amplified Sagnac rotation sensing: spectra, sweeps, design and geometry")
        .version(env!("CARGO_PKG_VERSION"))
        .subcommand_required(true)
        .arg_required_else_help(true)
        .arg(global("config", "read parameters from a `key = value` file"))
        .arg(global("out", "output file (default: standard output)"))
        .arg(global("format", "artifact format: csv | json"))
        .arg(global("form", "spectrum form: paper | exact (default exact)"));
    for command in Command::ALL {
        let mut sub = clap::Command::new(command.name()).about(command.about());
        for key in command.keys() {
            let mut help = key.help.to_string();
            if key.required {
                help.push_str(" [required]");
            } else if let Some(d) = key.default {
                help.push_str(&format!(" [default: {d}]"));
            }
            sub = sub.arg(
                Arg::new(key.name)
                    .long(key.name)
                    .value_name("VALUE")
                    .action(ArgAction::Set)
                    .allow_negative_numbers(true)
                    .allow_hyphen_values(key.kind == Kind::Text)
                    .help(help),
            );
        }
        root = root.subcommand(sub);
    }
    root
}

/// Parses `argv` (without the program name).
pub fn parse_args<I, S>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    let tokens = std::iter::once("wva".to_string()).chain(argv.into_iter().map(Into::into));
    let matches = cli().try_get_matches_from(tokens).map_err(|e| match e.kind() {
        clap::error::ErrorKind::DisplayHelp
        | clap::error::ErrorKind::DisplayVersion
        | clap::error::ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
            CliError::Help(e.render().to_string())
        }
        _ => CliError::Usage(e.render().to_string().trim_end().to_string()),
    })?;

    let (name, sub) = matches.subcommand().expect("subcommand is required");
    let command = Command::ALL
        .into_iter()
        .find(|c| c.name() == name)
        .expect("clap only accepts known subcommands");

    let mut raw: BTreeMap<String, (String, &'static str)> = BTreeMap::new();
    for key in command.keys() {
        if let Some(d) = key.default {
            raw.insert(key.name.to_string(), (d.to_string(), "default"));
        }
    }
    if let Some(path) = global_value(&matches, sub, "config") {
        for (key, value) in read_config(&PathBuf::from(path), command)? {
            raw.insert(key, (value, "config"));
        }
    }
    for key in command.keys() {
        if let Some(v) = sub.get_one::<String>(key.name) {
            raw.insert(key.name.to_string(), (v.clone(), "flag"));
        }
    }
    for key in GLOBAL_KEYS {
        if let Some(v) = global_value(&matches, sub, key) {
            raw.insert(key.to_string(), (v, "flag"));
        }
    }

    let mut params = BTreeMap::new();
    for key in command.keys() {
        let Some((text, _)) = raw.get(key.name) else {
            continue;
        };
        params.insert(key.name.to_string(), parse_value(key, text)?);
    }
    check_required(command, &params)?;

    let output = match raw.get("out") {
        Some((p, _)) if p != "-" => Output::File(PathBuf::from(p)),
        _ => Output::Stdout,
    };
    let format = match raw.get("format") {
        Some((f, _)) => f.parse().map_err(|e: String| CliError::Usage(format!("--format: {e}")))?,
        None => command.default_format(),
    };
    let form = match raw.get("form") {
        Some((f, _)) => f
            .parse()
            .map_err(|e: wva_core::Error| CliError::Usage(format!("--form: {e}")))?,
        None => SpectrumForm::Exact,
    };
    Ok(RunConfig {
        command,
        params,
        output,
        format,
        form,
    })
}

fn global_value(root: &ArgMatches, sub: &ArgMatches, key: &str) -> Option<String> {
    sub.get_one::<String>(key)
        .or_else(|| root.get_one::<String>(key))
        .cloned()
}

fn parse_value(key: &Key, text: &str) -> Result<Value, CliError> {
    let bad = |why: &str| CliError::Usage(format!("invalid value '{text}' for --{}: {why}", key.name));
    match key.kind {
        Kind::Number => {
            let v: f64 = text.trim().parse().map_err(|_| bad("not a number"))?;
            if v.is_finite() {
                Ok(Value::Number(v))
            } else {
                Err(bad("must be finite"))
            }
        }
        Kind::Count => text
            .trim()
            .parse()
            .map(Value::Count)
            .map_err(|_| bad("not a non-negative integer")),
        Kind::Text => Ok(Value::Text(text.trim().to_string())),
    }
}

fn check_required(command: Command, params: &BTreeMap<String, Value>) -> Result<(), CliError> {
    if let Some(missing) = command
        .keys()
        .iter()
        .find(|k| k.required && !params.contains_key(k.name))
    {
        return Err(CliError::Usage(format!(
            "{command}: missing required parameter --{} ({})",
            missing.name, missing.help
        )));
    }
    if command == Command::Design && !params.contains_key("betas") {
        for key in ["beta-min", "beta-max", "beta-steps"] {
            if !params.contains_key(key) {
                return Err(CliError::Usage(format!(
                    "design: missing --{key} (give --betas or all of --beta-min, --beta-max, --beta-steps)"
                )));
            }
        }
    }
    Ok(())
}

/// Reads a flat `key = value` file. `#` starts a comment.
pub fn read_config(path: &PathBuf, command: Command) -> Result<Vec<(String, String)>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    parse_config(&text, command)
}

pub fn parse_config(text: &str, command: Command) -> Result<Vec<(String, String)>, CliError> {
    let mut entries = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CliError::Usage(format!(
                "config line {}: expected `key = value`, got '{line}'",
                lineno + 1
            )));
        };
        let key = key.trim().replace('_', "-");
        let known = command.keys().iter().any(|k| k.name == key) || GLOBAL_KEYS.contains(&key.as_str());
        if !known {
            return Err(CliError::Usage(format!(
                "config line {}: unknown key '{key}' for {command}",
                lineno + 1
            )));
        }
        entries.push((key, value.trim().to_string()));
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(s: &str) -> Vec<String> {
        s.split_whitespace().map(String::from).collect()
    }

    #[test]
    fn simulate_happy_path() {
        let cfg = parse_args(args(
            "simulate --alpha 0.1 --beta -0.3 --area 16 --omega 0.05 --lambda0 1550 --dlambda 10",
        ))
        .unwrap();
        assert_eq!(cfg.command, Command::Simulate);
        assert_eq!(cfg.number("beta").unwrap(), -0.3);
        assert_eq!(cfg.count("points").unwrap(), 2048);
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.output, Output::Stdout);
        assert_eq!(cfg.form, SpectrumForm::Exact);
    }

    #[test]
    fn sweep_steps() {
        let cfg = parse_args(args(
            "sweep --omega-min -0.1 --omega-max 0.1 --steps 201 --alpha 0.1 --beta -0.5 --area 16 --lambda0 1550 --dlambda 10",
        ))
        .unwrap();
        assert_eq!(cfg.count("steps").unwrap(), 201);
        assert_eq!(cfg.number("omega-min").unwrap(), -0.1);
    }

    #[test]
    fn unknown_flag_is_named() {
        let err = parse_args(args("geometry --theta-deg 25 --rs 1 --bogus 3")).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("--bogus")), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_command_is_rejected() {
        let err = parse_args(args("teleport --alpha 1")).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("teleport")), "{err}");
    }

    #[test]
    fn bad_number_is_named() {
        let err = parse_args(args("geometry --theta-deg twenty --rs 1")).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("twenty") && m.contains("--theta-deg")));
        let err = parse_args(args("geometry --theta-deg inf --rs 1")).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("finite")));
    }

    #[test]
    fn physics_parameters_have_no_defaults() {
        for missing in ["alpha", "beta", "area", "lambda0", "dlambda"] {
            let full = "--alpha 0.1 --beta -0.3 --area 16 --omega 0.05 --lambda0 1550 --dlambda 10";
            let mut tokens = vec!["simulate".to_string()];
            let mut it = full.split_whitespace();
            while let (Some(flag), Some(value)) = (it.next(), it.next()) {
                if flag != format!("--{missing}") {
                    tokens.push(flag.into());
                    tokens.push(value.into());
                }
            }
            let err = parse_args(tokens).unwrap_err();
            assert!(matches!(&err, CliError::Usage(m) if m.contains(&format!("--{missing}"))), "{err}");
        }
    }

    #[test]
    fn config_values_sit_between_defaults_and_flags() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        fs::write(
            &path,
            "# ring\nalpha = 0.1\nbeta=-0.3\narea = 16 # m²\nomega = 0.05\nlambda0 = 1550\ndlambda = 10\npoints = 512\nformat = json\n",
        )
        .unwrap();
        let cfg = parse_args(vec![
            "simulate".to_string(),
            "--config".into(),
            path.display().to_string(),
            "--area".into(),
            "3".into(),
        ])
        .unwrap();
        assert_eq!(cfg.number("area").unwrap(), 3.0);
        assert_eq!(cfg.number("alpha").unwrap(), 0.1);
        assert_eq!(cfg.count("points").unwrap(), 512);
        assert_eq!(cfg.format, Format::Json);
    }

    #[test]
    fn config_rejects_unknown_keys() {
        let err = parse_config("alpha = 1\nwobble = 2\n", Command::Simulate).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("wobble")));
        let err = parse_config("alpha 1\n", Command::Simulate).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("line 1")));
        let ok = parse_config("omega_min = -1\n", Command::Sweep).unwrap();
        assert_eq!(ok, vec![("omega-min".to_string(), "-1".to_string())]);
    }

    #[test]
    fn global_flags_parse() {
        let cfg = parse_args(args(
            "geometry --theta-deg 25 --rs 1 --format csv --out - --form paper",
        ))
        .unwrap();
        assert_eq!(cfg.format, Format::Csv);
        assert_eq!(cfg.output, Output::Stdout);
        assert_eq!(cfg.form, SpectrumForm::Paper);
        let err = parse_args(args("geometry --theta-deg 25 --rs 1 --format xml")).unwrap_err();
        assert!(matches!(&err, CliError::Usage(m) if m.contains("xml")));
    }

    #[test]
    fn design_needs_a_beta_grid() {
        let base = "design --alpha 0.1 --lambda0 1550 --dlambda 10 --i0 1 --i-min 0 --dlambda-res 0 --omega-target 0.01 --area-lo 1 --area-hi 10";
        assert!(parse_args(args(base)).is_err());
        assert!(parse_args(args(&format!("{base} --betas -0.3,-0.5"))).is_ok());
        assert!(parse_args(args(&format!("{base} --beta-min -0.5 --beta-max -0.2 --beta-steps 4"))).is_ok());
    }
}
