use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use odl_core::circle_dyn::DEFAULT_ORBIT_CAP;
use odl_core::torus_group::BallOptions;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Experiment {
    Gap,
    GlasnerDilation,
    RotationQd,
    RotationCounterexample,
    PairQd,
    IetQd,
    SlSearch,
    WalkEqui,
    AbelianSearch,
    RamanujanVerify,
    BumpDecay,
}

impl Experiment {
    pub const ALL: [Experiment; 11] = [
        Experiment::Gap,
        Experiment::GlasnerDilation,
        Experiment::RotationQd,
        Experiment::RotationCounterexample,
        Experiment::PairQd,
        Experiment::IetQd,
        Experiment::SlSearch,
        Experiment::WalkEqui,
        Experiment::AbelianSearch,
        Experiment::RamanujanVerify,
        Experiment::BumpDecay,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Gap => "gap",
            Experiment::GlasnerDilation => "glasner-dilation",
            Experiment::RotationQd => "rotation-qd",
            Experiment::RotationCounterexample => "rotation-counterexample",
            Experiment::PairQd => "pair-qd",
            Experiment::IetQd => "iet-qd",
            Experiment::SlSearch => "sl-search",
            Experiment::WalkEqui => "walk-equi",
            Experiment::AbelianSearch => "abelian-search",
            Experiment::RamanujanVerify => "ramanujan-verify",
            Experiment::BumpDecay => "bump-decay",
        }
    }

    /// Position in [`Experiment::ALL`]; part of every random stream id.
    pub fn index(self) -> u64 {
        Experiment::ALL.iter().position(|&e| e == self).expect("listed") as u64
    }

    fn schema(self) -> &'static [KeySpec] {
        use Kind::*;
        macro_rules! k {
            ($name:expr, $kind:expr, $default:expr) => {
                KeySpec { name: $name, kind: $kind, default: $default }
            };
        }
        match self {
            Experiment::Gap => &[
                k!("space", Choice(&["circle", "interval", "torus"]), Some("circle")),
                k!("points", Text, None),
                k!("dim", Int, Some("2")),
                k!("resolution", Int, Some("64")),
            ],
            Experiment::GlasnerDilation => &[
                k!("sets", Int, Some("20")),
                k!("size", Int, Some("25")),
                k!("eps", Float, Some("0.05")),
                k!("n_max", Int, Some("5000")),
                k!("density_n_max", Int, Some("2000")),
            ],
            Experiment::RotationQd => &[
                k!("alphas", Int, Some("50")),
                k!("terms", Int, Some("30")),
                k!("n_max", Int, Some("100000")),
                k!("ratio", Float, Some("1.25")),
            ],
            Experiment::RotationCounterexample => &[
                k!("alpha", Choice(&["golden", "silver"]), Some("golden")),
                k!("rule", Text, Some("square")),
                k!("depth", Int, Some("6")),
                k!("n_max", Int, Some("10000")),
                k!("ratio", Float, Some("1.25")),
            ],
            Experiment::PairQd => &[
                k!("alpha", Text, Some("0.6180339887498949")),
                k!("set1", Text, Some("0")),
                k!("set2", Text, Some("1/2")),
                k!("n_max", Int, Some("10000")),
                k!("ratio", Float, Some("1.25")),
            ],
            Experiment::IetQd => &[
                k!("trials", Int, Some("50")),
                k!("terms", Int, Some("30")),
                k!("n_max", Int, Some("10000")),
                k!("ratio", Float, Some("1.25")),
            ],
            Experiment::SlSearch => &[
                k!("sets", Int, Some("10")),
                k!("size", Int, Some("10")),
                k!("radius", Int, Some("8")),
                k!("eps", Float, Some("0.2")),
                k!("resolution", Int, Some("64")),
            ],
            Experiment::WalkEqui => &[
                k!("x", Text, Some("1/5 2/5")),
                k!("generators", Choice(&["st", "symmetric"]), Some("st")),
                k!("weights", Text, Some("")),
                k!("steps", Int, Some("100000")),
                k!("trials", Int, Some("1")),
            ],
            Experiment::AbelianSearch => &[
                k!("family", Choice(&["cubic", "cat"]), Some("cubic")),
                k!("eps", Float, Some("0.05")),
                k!("box_radius", Int, Some("30")),
                k!("leaf_index", Int, Some("0")),
                k!("leaf_points", Int, Some("8")),
                k!("leaf_spacing", Float, Some("0.37")),
                k!("search_eps", Float, Some("0.35")),
                k!("search_radius", Int, Some("4")),
                k!("resolution", Int, Some("32")),
            ],
            Experiment::RamanujanVerify => &[
                k!("n", Int, Some("1")),
                k!("q_max", Int, Some("100")),
                k!("m_max", Int, Some("10")),
                k!("emit", Choice(&["mismatches", "all"]), Some("mismatches")),
            ],
            Experiment::BumpDecay => &[
                k!("eps", Float, Some("0.1")),
                k!("n", Int, Some("1")),
                k!("grid", Int, Some("4096")),
                k!("max_norm", Int, Some("200")),
            ],
        }
    }
}

impl fmt::Display for Experiment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Experiment {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Experiment, ConfigError> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| ConfigError::plain(format!("unknown experiment `{s}`")))
    }
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Int,
    Float,
    Text,
    Choice(&'static [&'static str]),
}

#[derive(Clone, Copy, Debug)]
struct KeySpec {
    name: &'static str,
    kind: Kind,
    /// `None` marks a required key.
    default: Option<&'static str>,
}

/// Keys accepted at the top of the file and in every section.
const COMMON_KEYS: [&str; 3] = ["seed", "output", "workers"];

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub struct ConfigError {
    pub line: Option<usize>,
    pub key: Option<String>,
    pub message: String,
}

impl ConfigError {
    fn plain(message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: None,
            key: None,
            message: message.into(),
        }
    }

    fn at(line: usize, key: Option<&str>, message: impl Into<String>) -> ConfigError {
        ConfigError {
            line: Some(line),
            key: key.map(str::to_string),
            message: message.into(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(line) = self.line {
            write!(f, "line {line}: ")?;
        }
        if let Some(key) = &self.key {
            write!(f, "key `{key}`: ")?;
        }
        f.write_str(&self.message)
    }
}

/// Memory caps derived from `ODL_BUDGET_MB`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub orbit_cap: u64,
    pub ball_budget: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            orbit_cap: DEFAULT_ORBIT_CAP,
            ball_budget: BallOptions::default().budget,
        }
    }
}

impl Budget {
    const ORBIT_POINT_BYTES: u64 = 32;
    const BALL_ELEMENT_BYTES: u64 = 256;

    pub fn from_megabytes(mb: u64) -> Budget {
        let bytes = mb.saturating_mul(1 << 20);
        Budget {
            orbit_cap: bytes / Self::ORBIT_POINT_BYTES,
            ball_budget: (bytes / Self::BALL_ELEMENT_BYTES) as usize,
        }
    }

    pub fn from_env() -> Result<Budget, ConfigError> {
        match std::env::var("ODL_BUDGET_MB") {
            Err(_) => Ok(Budget::default()),
            Ok(v) => v
                .trim()
                .parse()
                .map(Budget::from_megabytes)
                .map_err(|_| ConfigError::plain(format!("ODL_BUDGET_MB must be a whole number, got `{v}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: Experiment,
    pub seed: u64,
    /// Every schema key, defaults filled in.
    pub params: BTreeMap<String, String>,
    pub output_path: Option<PathBuf>,
    pub workers: usize,
    pub budget: Budget,
}

#[derive(Debug)]
struct Entry {
    line: usize,
    value: String,
}

type Section = BTreeMap<String, Entry>;

/// Splits the file into the top-level block and named sections, rejecting
/// malformed lines, duplicate keys and duplicate sections.
fn parse_ini(text: &str) -> Result<(Section, BTreeMap<String, (usize, Section)>), ConfigError> {
    let mut top = Section::new();
    let mut sections: BTreeMap<String, (usize, Section)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split(['#', ';']).next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[') {
            let name = name
                .strip_suffix(']')
                .ok_or_else(|| ConfigError::at(line, None, "unterminated section header"))?
                .trim()
                .to_string();
            if name.parse::<Experiment>().is_err() {
                return Err(ConfigError::at(line, None, format!("unknown section `{name}`")));
            }
            if sections.contains_key(&name) {
                return Err(ConfigError::at(line, None, format!("section `{name}` appears twice")));
            }
            sections.insert(name.clone(), (line, Section::new()));
            current = Some(name);
            continue;
        }
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| ConfigError::at(line, None, "expected `key = value`"))?;
        let key = key.trim();
        if key.is_empty() {
            return Err(ConfigError::at(line, None, "empty key"));
        }
        let target = match &current {
            None => &mut top,
            Some(name) => &mut sections.get_mut(name).expect("inserted").1,
        };
        if target.contains_key(key) {
            return Err(ConfigError::at(line, Some(key), "duplicate key"));
        }
        target.insert(
            key.to_string(),
            Entry {
                line,
                value: value.trim().to_string(),
            },
        );
    }
    Ok((top, sections))
}

fn check_value(spec: &KeySpec, value: &str, line: usize) -> Result<(), ConfigError> {
    let bad = |what: &str| ConfigError::at(line, Some(spec.name), format!("expected {what}, got `{value}`"));
    match spec.kind {
        Kind::Int => value.parse::<u64>().map(drop).map_err(|_| bad("a nonnegative integer")),
        Kind::Float => match value.parse::<f64>() {
            Ok(x) if x.is_finite() => Ok(()),
            _ => Err(bad("a finite number")),
        },
        Kind::Text => Ok(()),
        Kind::Choice(options) => {
            if options.contains(&value) {
                Ok(())
            } else {
                Err(bad(&format!("one of {}", options.join(", "))))
            }
        }
    }
}

fn check_common(key: &str, value: &str, line: usize) -> Result<(), ConfigError> {
    let ok = match key {
        "seed" => value.parse::<u64>().is_ok(),
        "workers" => value.parse::<usize>().is_ok_and(|w| w >= 1),
        _ => !value.is_empty(),
    };
    if ok {
        Ok(())
    } else {
        Err(ConfigError::at(line, Some(key), format!("invalid value `{value}`")))
    }
}

impl ExperimentConfig {
    /// Parses a config file for `experiment`. Every section is validated,
    /// not only the selected one, so a typo anywhere aborts the run.
    pub fn parse(text: &str, experiment: Experiment) -> Result<ExperimentConfig, ConfigError> {
        let (top, sections) = parse_ini(text)?;
        for (key, e) in &top {
            if !COMMON_KEYS.contains(&key.as_str()) {
                return Err(ConfigError::at(e.line, Some(key), "unknown key outside any section"));
            }
            check_common(key, &e.value, e.line)?;
        }
        for (name, (_, section)) in &sections {
            let exp: Experiment = name.parse().expect("checked while parsing");
            for (key, e) in section {
                if COMMON_KEYS.contains(&key.as_str()) {
                    check_common(key, &e.value, e.line)?;
                    continue;
                }
                let spec = exp
                    .schema()
                    .iter()
                    .find(|s| s.name == key)
                    .ok_or_else(|| ConfigError::at(e.line, Some(key), format!("unknown key for {name}")))?;
                check_value(spec, &e.value, e.line)?;
            }
        }

        let empty = Section::new();
        let (header_line, section) = sections
            .get(experiment.name())
            .map(|(l, s)| (Some(*l), s))
            .unwrap_or((None, &empty));
        let lookup = |key: &str| section.get(key).or_else(|| top.get(key)).map(|e| e.value.as_str());
        let mut params = BTreeMap::new();
        for spec in experiment.schema() {
            let value = section
                .get(spec.name)
                .map(|e| e.value.clone())
                .or_else(|| spec.default.map(str::to_string))
                .ok_or_else(|| ConfigError {
                    line: header_line,
                    key: Some(spec.name.to_string()),
                    message: format!("required by {experiment}"),
                })?;
            params.insert(spec.name.to_string(), value);
        }
        Ok(ExperimentConfig {
            experiment,
            seed: lookup("seed").map_or(0, |v| v.parse().expect("checked")),
            params,
            output_path: lookup("output").map(PathBuf::from),
            workers: lookup("workers").map_or(1, |v| v.parse().expect("checked")),
            budget: Budget::default(),
        })
    }

    /// Defaults only; `overrides` are `(key, value)` pairs for the experiment section.
    pub fn with_params(experiment: Experiment, seed: u64, overrides: &[(&str, &str)]) -> Result<ExperimentConfig, ConfigError> {
        let mut text = format!("seed = {seed}\n[{experiment}]\n");
        for (k, v) in overrides {
            text.push_str(&format!("{k} = {v}\n"));
        }
        ExperimentConfig::parse(&text, experiment)
    }

    fn raw(&self, key: &str) -> &str {
        self.params
            .get(key)
            .unwrap_or_else(|| panic!("`{key}` is not a {} key", self.experiment))
    }

    pub fn int(&self, key: &str) -> u64 {
        self.raw(key).parse().expect("validated at parse time")
    }

    pub fn float(&self, key: &str) -> f64 {
        self.raw(key).parse().expect("validated at parse time")
    }

    pub fn text(&self, key: &str) -> &str {
        self.raw(key)
    }

    /// `key: value` lines echoing the resolved configuration.
    pub fn echo(&self) -> Vec<(String, String)> {
        let mut out = vec![
            ("experiment".to_string(), self.experiment.to_string()),
            ("seed".to_string(), self.seed.to_string()),
            ("workers".to_string(), self.workers.to_string()),
            ("orbit_cap".to_string(), self.budget.orbit_cap.to_string()),
            ("ball_budget".to_string(), self.budget.ball_budget.to_string()),
        ];
        out.extend(self.params.iter().map(|(k, v)| (format!("config.{k}"), v.clone())));
        out
    }
}
