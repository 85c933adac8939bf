//! Sectioned `key = value` run configuration.
//!
//! ```text
//! # comment
//! [problem]
//! n = 1
//! m = 1
//! p = 2
//! epsilon = 0.1          # trailing comments are allowed
//! eps_list = 0.4, 0.2, 0.1
//!
//! [grid]
//! N = auto
//! L = auto
//! ```
//!
//! Keys are also addressable as `section.key`, which is the form taken by
//! `--set` overrides. Every key has a default except the ones a verb needs
//! (`problem.epsilon` for `simulate` and `testfn-verify`, `problem.eps_list`
//! for `sweep`); see [`SCHEMA`] for the full list.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use fujita_core::harness::DomainPolicy;
use fujita_core::integrator::{InitialProfile, Nonlinearity, Scheme, SimParams, SnapshotPolicy};
use fujita_core::spectral::{Exponent, GridSpec};
use fujita_core::testfn::min_exponent;

/// `(section, key, default)`; an empty default means "required by some verb"
/// or "derived".
pub const SCHEMA: &[(&str, &str, &str)] = &[
    ("problem", "n", "1"),
    ("problem", "m", "1"),
    ("problem", "p", "2"),
    ("problem", "epsilon", ""),
    ("problem", "eps_list", ""),
    ("problem", "u0", "gaussian"),
    ("problem", "u0_mass", "1"),
    ("problem", "u0_width", "1"),
    ("problem", "u0_value", "1"),
    ("problem", "t_end", "100"),
    ("grid", "N", "auto"),
    ("grid", "L", "auto"),
    ("integrator", "dt0", "0.01"),
    ("integrator", "dt_min", "1e-12"),
    ("integrator", "dt_max", "auto"),
    ("integrator", "U_max", "1e8"),
    ("integrator", "growth_cap", "1.25"),
    ("integrator", "rate_cap", "0.05"),
    ("integrator", "scheme", "etdrk4"),
    ("integrator", "nonlinearity", "power"),
    ("integrator", "dealias", "false"),
    ("integrator", "snapshot_levels", "128"),
    ("integrator", "snapshot_growth", "2"),
    ("harness", "c_dom", "12"),
    ("harness", "convergence_tol", "0.01"),
    ("harness", "max_doublings", "4"),
    ("harness", "min_width_multiple", "20"),
    ("harness", "horizon_factor", "8"),
    ("harness", "max_extensions", "4"),
    ("harness", "max_points", "32768"),
    ("harness", "eps_cap_critical", "0.4"),
    ("testfn", "R_list", "16, 32, 64"),
    ("testfn", "l", "auto"),
    ("testfn", "R0", "4"),
    ("testfn", "xyw_points", "16"),
    ("testfn", "horizon", "auto"),
    ("kernel", "t_list", "0.25"),
    ("decay", "p", "1"),
    ("decay", "q", "inf"),
    ("decay", "t_list", "0.5, 1, 2, 4, 8"),
    ("decay", "tolerance", "0.02"),
    ("output", "directory", "fujita-out"),
    ("output", "formats", "csv, json, bin"),
];

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Line(usize),
    Override,
    Default,
}

impl fmt::Display for Origin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Origin::Line(l) => write!(f, "line {l}"),
            Origin::Override => f.write_str("--set"),
            Origin::Default => f.write_str("default"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{origin}: {key}: {message}")]
pub struct ConfigError {
    pub origin: Origin,
    pub key: String,
    pub message: String,
}

fn err(origin: Origin, key: &str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        origin,
        key: key.to_string(),
        message: message.into(),
    }
}

/// Raw `section.key → (value, origin)` map, schema-checked.
#[derive(Debug, Clone, Default)]
pub struct Document {
    entries: BTreeMap<String, (String, Origin)>,
}

fn known(section: &str, key: &str) -> bool {
    SCHEMA.iter().any(|(s, k, _)| *s == section && *k == key)
}

fn split_key(full: &str) -> Option<(&str, &str)> {
    full.split_once('.')
}

impl Document {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut doc = Document::default();
        let mut section: Option<String> = None;
        for (i, raw) in text.lines().enumerate() {
            let origin = Origin::Line(i + 1);
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(rest) = line.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(origin, line, "unterminated section header"))?
                    .trim();
                if !SCHEMA.iter().any(|(s, _, _)| *s == name) {
                    return Err(err(origin, name, "unknown section"));
                }
                section = Some(name.to_string());
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| err(origin, line, "expected `key = value`"))?;
            let key = key.trim();
            let full = match (&section, split_key(key)) {
                (_, Some(_)) => key.to_string(),
                (Some(s), None) => format!("{s}.{key}"),
                (None, None) => return Err(err(origin, key, "key outside any section")),
            };
            doc.insert(&full, value.trim(), origin)?;
        }
        Ok(doc)
    }

    /// Applies a `section.key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<(), ConfigError> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| err(Origin::Override, assignment, "expected `section.key=value`"))?;
        self.insert(key.trim(), value.trim(), Origin::Override)
    }

    fn insert(&mut self, full: &str, value: &str, origin: Origin) -> Result<(), ConfigError> {
        let (section, key) = split_key(full).ok_or_else(|| err(origin, full, "expected `section.key`"))?;
        if !known(section, key) {
            return Err(err(origin, full, "unknown key"));
        }
        if let (Some((_, Origin::Line(first))), Origin::Line(_)) = (self.entries.get(full), origin) {
            return Err(err(origin, full, format!("duplicate key (first set on line {first})")));
        }
        self.entries.insert(full.to_string(), (value.to_string(), origin));
        Ok(())
    }

    fn get(&self, full: &str) -> (&str, Origin) {
        if let Some((v, o)) = self.entries.get(full) {
            return (v, *o);
        }
        let (section, key) = split_key(full).expect("schema keys are qualified");
        let default = SCHEMA
            .iter()
            .find(|(s, k, _)| *s == section && *k == key)
            .map(|(_, _, d)| *d)
            .expect("schema key");
        (default, Origin::Default)
    }

    fn is_set(&self, full: &str) -> bool {
        self.entries.contains_key(full)
    }
}

struct Reader<'a> {
    doc: &'a Document,
}

impl Reader<'_> {
    fn raw(&self, key: &str) -> (&str, Origin) {
        self.doc.get(key)
    }

    fn parse<T: std::str::FromStr>(&self, key: &str, what: &str) -> Result<T, ConfigError> {
        let (v, o) = self.raw(key);
        v.parse()
            .map_err(|_| err(o, key, format!("expected {what}, got `{v}`")))
    }

    fn f64(&self, key: &str) -> Result<f64, ConfigError> {
        let x: f64 = self.parse(key, "a number")?;
        if !x.is_finite() {
            return Err(err(self.raw(key).1, key, "must be finite"));
        }
        Ok(x)
    }

    fn positive(&self, key: &str) -> Result<f64, ConfigError> {
        let x = self.f64(key)?;
        if !(x > 0.0) {
            return Err(err(self.raw(key).1, key, format!("must be positive, got {x}")));
        }
        Ok(x)
    }

    fn uint(&self, key: &str) -> Result<usize, ConfigError> {
        self.parse(key, "a non-negative integer")
    }

    fn auto<T>(&self, key: &str, f: impl Fn(&Self) -> Result<T, ConfigError>) -> Result<Option<T>, ConfigError> {
        if self.raw(key).0 == "auto" {
            Ok(None)
        } else {
            f(self).map(Some)
        }
    }

    fn list(&self, key: &str) -> Result<Vec<f64>, ConfigError> {
        let (v, o) = self.raw(key);
        if v.is_empty() {
            return Ok(Vec::new());
        }
        v.split(',')
            .map(|item| {
                let item = item.trim();
                item.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or_else(|| {
                    err(
                        o,
                        key,
                        format!("expected a comma-separated list of numbers, got `{item}`"),
                    )
                })
            })
            .collect()
    }

    fn exponent(&self, key: &str) -> Result<Exponent, ConfigError> {
        let (v, o) = self.raw(key);
        if matches!(v, "inf" | "infinity") {
            return Ok(Exponent::Infinity);
        }
        let x = self.f64(key)?;
        Exponent::finite(x).map_err(|_| err(o, key, format!("Lebesgue exponent must be >= 1, got {x}")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub n: usize,
    pub m: u32,
    pub p: f64,
    pub epsilon: Option<f64>,
    pub eps_list: Vec<f64>,
    pub u0: InitialProfile,
    pub t_end: f64,
}

/// `None` means `auto`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub points: Option<usize>,
    pub length: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Integrator {
    pub dt0: f64,
    pub dt_min: f64,
    pub dt_max: Option<f64>,
    pub u_max: f64,
    pub growth_cap: f64,
    pub rate_cap: f64,
    pub scheme: Scheme,
    pub nonlinearity: Nonlinearity,
    pub dealias: bool,
    pub snapshots: SnapshotPolicy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Harness {
    pub policy: DomainPolicy,
    pub eps_cap_critical: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Testfn {
    pub r_list: Vec<f64>,
    pub l: u32,
    pub r0: f64,
    pub xyw_points: usize,
    /// Time horizon of the weak identity; `None` runs to the last uniform
    /// snapshot.
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    pub t_list: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decay {
    pub p: Exponent,
    pub q: Exponent,
    pub t_list: Vec<f64>,
    pub tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Formats {
    pub csv: bool,
    pub json: bool,
    pub bin: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub directory: PathBuf,
    pub formats: Formats,
}

/// Fully validated configuration with defaults applied.
#[derive(Debug, Clone)]
pub struct Config {
    pub problem: Problem,
    pub grid: Grid,
    pub integrator: Integrator,
    pub harness: Harness,
    pub testfn: Testfn,
    pub kernel: Kernel,
    pub decay: Decay,
    pub output: Output,
    doc: Document,
}

pub fn parse_config(text: &str) -> Result<Config, ConfigError> {
    Config::from_document(Document::parse(text)?)
}

fn times(r: &Reader, key: &str) -> Result<Vec<f64>, ConfigError> {
    let list = r.list(key)?;
    let o = r.raw(key).1;
    if list.is_empty() {
        return Err(err(o, key, "needs at least one time"));
    }
    if list.iter().any(|t| !(*t > 0.0)) {
        return Err(err(o, key, "times must be positive"));
    }
    Ok(list)
}

impl Config {
    pub fn from_document(doc: Document) -> Result<Config, ConfigError> {
        let r = Reader { doc: &doc };

        let n = r.uint("problem.n")?;
        if !(1..=3).contains(&n) {
            return Err(err(r.raw("problem.n").1, "problem.n", "dimension must be 1, 2 or 3"));
        }
        let m: u32 = r.parse("problem.m", "a positive integer")?;
        if m < 1 {
            return Err(err(r.raw("problem.m").1, "problem.m", "operator order must be >= 1"));
        }
        let p = r.f64("problem.p")?;
        if !(p > 1.0) {
            return Err(err(r.raw("problem.p").1, "problem.p", "p must exceed 1"));
        }
        let epsilon = match r.raw("problem.epsilon").0 {
            "" => None,
            _ => Some(r.positive("problem.epsilon")?),
        };
        let eps_list = r.list("problem.eps_list")?;
        if eps_list.iter().any(|e| !(*e > 0.0)) {
            return Err(err(
                r.raw("problem.eps_list").1,
                "problem.eps_list",
                "every epsilon must be positive",
            ));
        }
        let u0 = match r.raw("problem.u0").0 {
            "gaussian" => InitialProfile::Gaussian {
                mass: r.f64("problem.u0_mass")?,
                width: r.positive("problem.u0_width")?,
            },
            "constant" => InitialProfile::Constant {
                value: r.f64("problem.u0_value")?,
            },
            "zero" => InitialProfile::Zero,
            other => {
                return Err(err(
                    r.raw("problem.u0").1,
                    "problem.u0",
                    format!("unknown profile `{other}` (gaussian, constant, zero)"),
                ))
            }
        };
        let problem = Problem {
            n,
            m,
            p,
            epsilon,
            eps_list,
            u0,
            t_end: r.positive("problem.t_end")?,
        };

        let points = r.auto("grid.N", |r| r.uint("grid.N"))?;
        if let Some(np) = points {
            if np < 16 || !np.is_power_of_two() {
                return Err(err(r.raw("grid.N").1, "grid.N", "N must be a power of two (>= 16)"));
            }
        }
        let grid = Grid {
            points,
            length: r.auto("grid.L", |r| r.positive("grid.L"))?,
        };

        let scheme = match r.raw("integrator.scheme").0 {
            "etdrk4" => Scheme::Etdrk4,
            "etd1" => Scheme::Etd1,
            other => {
                return Err(err(
                    r.raw("integrator.scheme").1,
                    "integrator.scheme",
                    format!("unknown scheme `{other}` (etdrk4, etd1)"),
                ))
            }
        };
        let nonlinearity = match r.raw("integrator.nonlinearity").0 {
            "power" => Nonlinearity::Power,
            "off" => Nonlinearity::Off,
            other => {
                return Err(err(
                    r.raw("integrator.nonlinearity").1,
                    "integrator.nonlinearity",
                    format!("unknown source `{other}` (power, off)"),
                ))
            }
        };
        let integrator = Integrator {
            dt0: r.positive("integrator.dt0")?,
            dt_min: r.positive("integrator.dt_min")?,
            dt_max: r.auto("integrator.dt_max", |r| r.positive("integrator.dt_max"))?,
            u_max: r.positive("integrator.U_max")?,
            growth_cap: r.f64("integrator.growth_cap")?,
            rate_cap: r.positive("integrator.rate_cap")?,
            scheme,
            nonlinearity,
            dealias: r.parse("integrator.dealias", "true or false")?,
            snapshots: SnapshotPolicy {
                uniform_levels: r.uint("integrator.snapshot_levels")?,
                growth_factor: r.f64("integrator.snapshot_growth")?,
            },
        };

        let policy = DomainPolicy {
            c_dom: r.f64("harness.c_dom")?,
            convergence_tol: r.f64("harness.convergence_tol")?,
            max_doublings: r.uint("harness.max_doublings")?,
            dx_target: None,
            min_width_multiple: r.f64("harness.min_width_multiple")?,
            horizon_factor: r.f64("harness.horizon_factor")?,
            max_extensions: r.uint("harness.max_extensions")?,
            max_points: r.uint("harness.max_points")?,
        };
        policy
            .validate()
            .map_err(|e| err(Origin::Default, "harness", e.to_string()))?;
        let harness = Harness {
            policy,
            eps_cap_critical: r.positive("harness.eps_cap_critical")?,
        };

        let r0 = r.positive("testfn.R0")?;
        let r_list = r.list("testfn.R_list")?;
        let o = r.raw("testfn.R_list").1;
        if r_list.is_empty() {
            return Err(err(o, "testfn.R_list", "needs at least one radius"));
        }
        if let Some(bad) = r_list.iter().find(|x| !(**x >= r0)) {
            return Err(err(o, "testfn.R_list", format!("R = {bad} is below R0 = {r0}")));
        }
        let floor = min_exponent(m, p);
        let l = r.auto("testfn.l", |r| r.parse::<u32>("testfn.l", "a positive integer"))?;
        if let Some(l) = l {
            if l < floor {
                return Err(err(
                    r.raw("testfn.l").1,
                    "testfn.l",
                    format!("cutoff exponent must be at least ceil(2m p') = {floor}"),
                ));
            }
        }
        let xyw_points = r.uint("testfn.xyw_points")?;
        if xyw_points < fujita_core::testfn::MIN_R_POINTS {
            return Err(err(
                r.raw("testfn.xyw_points").1,
                "testfn.xyw_points",
                format!("need at least {} radii", fujita_core::testfn::MIN_R_POINTS),
            ));
        }
        let testfn = Testfn {
            r_list,
            l: l.unwrap_or(floor),
            r0,
            xyw_points,
            horizon: r.auto("testfn.horizon", |r| r.positive("testfn.horizon"))?,
        };

        let kernel = Kernel {
            t_list: times(&r, "kernel.t_list")?,
        };
        let decay = Decay {
            p: r.exponent("decay.p")?,
            q: r.exponent("decay.q")?,
            t_list: times(&r, "decay.t_list")?,
            tolerance: r.positive("decay.tolerance")?,
        };
        if decay.p.reciprocal() < decay.q.reciprocal() {
            return Err(err(r.raw("decay.q").1, "decay.q", "need q >= p"));
        }

        let (dir, _) = r.raw("output.directory");
        if dir.is_empty() {
            return Err(err(
                r.raw("output.directory").1,
                "output.directory",
                "must not be empty",
            ));
        }
        let mut formats = Formats {
            csv: false,
            json: false,
            bin: false,
        };
        let (fv, fo) = r.raw("output.formats");
        for f in fv.split(',').map(str::trim).filter(|f| !f.is_empty()) {
            match f {
                "csv" => formats.csv = true,
                "json" => formats.json = true,
                "bin" => formats.bin = true,
                other => {
                    return Err(err(
                        fo,
                        "output.formats",
                        format!("unknown format `{other}` (csv, json, bin)"),
                    ))
                }
            }
        }
        let output = Output {
            directory: PathBuf::from(dir),
            formats,
        };

        let config = Config {
            problem,
            grid,
            integrator,
            harness,
            testfn,
            kernel,
            decay,
            output,
            doc,
        };
        // integrator ranges are checked by the core validator on a probe run
        config
            .sim_params(config.problem.epsilon.unwrap_or(1.0))
            .map(|_| config.clone())
    }

    /// Origin of a key, for error messages raised after parsing.
    pub fn origin(&self, key: &str) -> Origin {
        self.doc.get(key).1
    }

    pub fn is_set(&self, key: &str) -> bool {
        self.doc.is_set(key)
    }

    pub fn error(&self, key: &str, message: impl Into<String>) -> ConfigError {
        err(self.origin(key), key, message)
    }

    /// Box `(L, N)`: explicit values win; `auto` uses the domain policy
    /// with `t_end` as time scale.
    pub fn grid_spec(&self) -> Result<GridSpec, ConfigError> {
        let (l_auto, n_auto) = self
            .harness
            .policy
            .initial_box(&self.problem.u0, self.problem.m, self.problem.t_end);
        let length = self.grid.length.unwrap_or(l_auto);
        let points = self.grid.points.unwrap_or(n_auto);
        GridSpec::new(self.problem.n, points, length).map_err(|e| self.error("grid.N", e.to_string()))
    }

    /// Integrator parameters for amplitude `epsilon`.
    pub fn sim_params(&self, epsilon: f64) -> Result<SimParams, ConfigError> {
        let mut params = SimParams::new(
            self.problem.m,
            self.problem.p,
            self.grid_spec()?,
            epsilon,
            self.problem.u0.clone(),
            self.problem.t_end,
        );
        let ig = &self.integrator;
        params.dt0 = ig.dt0;
        params.dt_min = ig.dt_min;
        params.dt_max = ig.dt_max;
        params.u_max = ig.u_max;
        params.growth_cap = ig.growth_cap;
        params.rate_cap = ig.rate_cap;
        params.scheme = ig.scheme;
        params.nonlinearity = ig.nonlinearity;
        params.dealias = ig.dealias;
        params.snapshots = ig.snapshots;
        params.validate().map_err(|e| match e {
            fujita_core::Error::InvalidParameter { name, reason } => {
                let key = schema_key(name);
                self.error(&key, reason)
            }
            other => err(Origin::Default, "integrator", other.to_string()),
        })?;
        Ok(params)
    }

    /// Canonical text form: every schema key with its effective value, in
    /// schema order. `output.directory` is left out so the same experiment
    /// hashes the same wherever it is written.
    pub fn snapshot(&self) -> String {
        let mut out = String::new();
        let mut current = "";
        for (section, key, _) in SCHEMA {
            if (*section, *key) == ("output", "directory") {
                continue;
            }
            if *section != current {
                if !current.is_empty() {
                    out.push('\n');
                }
                out.push_str(&format!("[{section}]\n"));
                current = section;
            }
            let (value, _) = self.doc.get(&format!("{section}.{key}"));
            out.push_str(&format!("{key} = {value}\n"));
        }
        out
    }
}

/// Maps a core parameter name back to its config key.
fn schema_key(name: &str) -> String {
    SCHEMA
        .iter()
        .find(|(_, k, _)| k.eq_ignore_ascii_case(name))
        .map(|(s, k, _)| format!("{s}.{k}"))
        .unwrap_or_else(|| match name {
            "snapshots" => "integrator.snapshot_levels".into(),
            other => format!("integrator.{other}"),
        })
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = "[problem]\nn = 1\nm = 1\np = 2\nepsilon = 0.1\n";

    #[test]
    fn minimal_file_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.problem.epsilon, Some(0.1));
        assert_eq!(c.integrator.u_max, 1e8);
        assert_eq!(c.integrator.growth_cap, 1.25);
        assert_eq!(c.integrator.dt_min, 1e-12);
        assert_eq!(c.harness.policy, DomainPolicy::default());
        assert_eq!(c.testfn.l, 4);
        assert_eq!(c.testfn.r0, 4.0);
        assert_eq!(c.grid.points, None);
        assert!(c.output.formats.csv && c.output.formats.json && c.output.formats.bin);
    }

    #[test]
    fn p_at_most_one_is_rejected() {
        let e = parse_config("[problem]\np = 0.5\n").unwrap_err();
        assert_eq!(e.origin, Origin::Line(2));
        assert_eq!(e.key, "problem.p");
        assert!(e.to_string().contains("p must exceed 1"), "{e}");
    }

    #[test]
    fn grid_points_must_be_power_of_two() {
        let e = parse_config("[grid]\nN = 100\n").unwrap_err();
        assert!(e.to_string().contains("N must be a power of two"), "{e}");
        assert_eq!(e.to_string(), "line 2: grid.N: N must be a power of two (>= 16)");
    }

    #[test]
    fn unknown_keys_and_sections_name_the_line() {
        let e = parse_config("[problem]\nn = 1\nfoo = 2\n").unwrap_err();
        assert_eq!(e.to_string(), "line 3: problem.foo: unknown key");
        let e = parse_config("\n[nope]\n").unwrap_err();
        assert_eq!(e.to_string(), "line 2: nope: unknown section");
        let e = parse_config("n = 1\n").unwrap_err();
        assert!(e.to_string().contains("outside any section"));
    }

    #[test]
    fn duplicates_and_type_errors() {
        let e = parse_config("[problem]\nm = 1\nm = 2\n").unwrap_err();
        assert_eq!(e.origin, Origin::Line(3));
        let e = parse_config("[problem]\nm = two\n").unwrap_err();
        assert!(e.to_string().starts_with("line 2: problem.m: expected"), "{e}");
    }

    #[test]
    fn overrides_shadow_file_values() {
        let mut doc = Document::parse(MINIMAL).unwrap();
        doc.set("problem.epsilon=0.3").unwrap();
        doc.set("grid.N = 64").unwrap();
        let c = Config::from_document(doc).unwrap();
        assert_eq!(c.problem.epsilon, Some(0.3));
        assert_eq!(c.grid.points, Some(64));
        assert_eq!(c.origin("grid.N"), Origin::Override);

        let mut doc = Document::parse(MINIMAL).unwrap();
        let e = doc.set("problem.bogus=1").unwrap_err();
        assert_eq!(e.to_string(), "--set: problem.bogus: unknown key");
    }

    #[test]
    fn integrator_ranges_come_back_with_keys() {
        let e = parse_config("[integrator]\ngrowth_cap = 3\n").unwrap_err();
        assert_eq!(e.key, "integrator.growth_cap");
        assert_eq!(e.origin, Origin::Line(2));
        let e = parse_config("[integrator]\nU_max = 10\n").unwrap_err();
        assert_eq!(e.key, "integrator.U_max");
    }

    #[test]
    fn cutoff_exponent_floor_and_radii() {
        let e = parse_config("[testfn]\nl = 2\n").unwrap_err();
        assert!(e.to_string().contains("at least ceil(2m p') = 4"), "{e}");
        let e = parse_config("[testfn]\nR_list = 2, 16\n").unwrap_err();
        assert!(e.to_string().contains("below R0"), "{e}");
    }

    #[test]
    fn snapshot_is_canonical_and_reparses() {
        let a = parse_config("[problem]\nepsilon=0.1 # c\n").unwrap();
        let b = parse_config("# header\n[problem]\n  epsilon   =   0.1\n").unwrap();
        assert_eq!(a.snapshot(), b.snapshot());
        let again = parse_config(&a.snapshot()).unwrap();
        assert_eq!(again.snapshot(), a.snapshot());
    }

    #[test]
    fn auto_grid_follows_the_domain_policy() {
        let c = parse_config("[problem]\nm = 1\nt_end = 16\n").unwrap();
        let g = c.grid_spec().unwrap();
        assert_eq!(g.length(), 48.0);
        assert_eq!(g.points(), 128);
    }
}
