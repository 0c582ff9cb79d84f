//! Line-oriented experiment configuration.
//!
//! The format is `[section]` headers over `key = value` lines. `#` starts
//! a full-line comment; blank lines are skipped; list values are
//! whitespace-separated. Sections: `[model]`, `[study]`, `[output]`,
//! `[check]`. Every key is optional except `model.kind`; defaults are the
//! `Default` impls below. Unknown sections, unknown keys, duplicate keys,
//! and out-of-range values are all hard errors carrying the line number.

use std::collections::HashSet;
use std::fmt;

use frv_core::fuzzy::uniform_grid;
use frv_core::ModelSpec;

/// Config failure; `line` is 0 for errors that have no single source line
/// (a missing required key, a rejected parameter combination).
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub line: usize,
    pub msg: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "config error: {}", self.msg)
        } else {
            write!(f, "config error at line {}: {}", self.line, self.msg)
        }
    }
}

impl std::error::Error for ConfigError {}

fn err(line: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError {
        line,
        msg: msg.into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModelSection {
    pub kind: Option<String>,
    /// Line where `kind` was set, for the unknown-kind error.
    kind_line: usize,
    pub center: f64,
    pub left: f64,
    pub right: f64,
    pub noise: f64,
    pub w0: f64,
    pub beta0: f64,
    pub alpha_knots: usize,
}

impl Default for ModelSection {
    fn default() -> Self {
        ModelSection {
            kind: None,
            kind_line: 0,
            center: 0.0,
            left: 1.0,
            right: 1.0,
            noise: 1.0,
            w0: 1.0,
            beta0: 0.5,
            alpha_knots: 101,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudySection {
    pub schedule: Vec<usize>,
    pub eps: f64,
    pub replications: usize,
    pub master_seed: u64,
    pub target_p: f64,
    pub decrease_factor: f64,
}

impl Default for StudySection {
    fn default() -> Self {
        StudySection {
            schedule: vec![10, 100, 1_000, 10_000],
            eps: 0.1,
            replications: 500,
            master_seed: 42,
            target_p: 0.02,
            decrease_factor: 5.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutputSection {
    pub study_csv: String,
    pub study_plot: String,
    pub distance_plot: String,
    pub cov_csv: String,
    pub varcond_plot: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        OutputSection {
            study_csv: "study.csv".into(),
            study_plot: "study_plot.txt".into(),
            distance_plot: "distance_plot.txt".into(),
            cov_csv: "cov_report.csv".into(),
            varcond_plot: "varcond_plot.txt".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSection {
    pub z: f64,
    pub max_k: usize,
    pub n_draws: usize,
    pub alpha_grid: Vec<f64>,
}

impl Default for CheckSection {
    fn default() -> Self {
        CheckSection {
            z: 4.0,
            max_k: 6,
            n_draws: 100_000,
            alpha_grid: vec![0.1, 0.3, 0.5, 0.7, 0.9],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct ExperimentConfig {
    pub model: ModelSection,
    pub study: StudySection,
    pub output: OutputSection,
    pub check: CheckSection,
}

#[derive(Clone, Copy, PartialEq)]
enum Section {
    None,
    Model,
    Study,
    Output,
    Check,
}

impl Section {
    fn name(self) -> &'static str {
        match self {
            Section::None => "",
            Section::Model => "model",
            Section::Study => "study",
            Section::Output => "output",
            Section::Check => "check",
        }
    }
}

fn f64_value(value: &str, line: usize, key: &str) -> Result<f64, ConfigError> {
    let v: f64 = value.parse().map_err(|_| {
        err(
            line,
            format!("key `{key}`: expected a number, got `{value}`"),
        )
    })?;
    if !v.is_finite() {
        return Err(err(line, format!("key `{key}`: value must be finite")));
    }
    Ok(v)
}

fn usize_value(value: &str, line: usize, key: &str) -> Result<usize, ConfigError> {
    value.parse().map_err(|_| {
        err(
            line,
            format!("key `{key}`: expected a nonnegative integer, got `{value}`"),
        )
    })
}

fn u64_value(value: &str, line: usize, key: &str) -> Result<u64, ConfigError> {
    value.parse().map_err(|_| {
        err(
            line,
            format!("key `{key}`: expected a nonnegative integer, got `{value}`"),
        )
    })
}

fn usize_list(value: &str, line: usize, key: &str) -> Result<Vec<usize>, ConfigError> {
    let items: Result<Vec<usize>, ConfigError> = value
        .split_whitespace()
        .map(|w| usize_value(w, line, key))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(err(
            line,
            format!("key `{key}`: expected at least one value"),
        ));
    }
    Ok(items)
}

fn f64_list(value: &str, line: usize, key: &str) -> Result<Vec<f64>, ConfigError> {
    let items: Result<Vec<f64>, ConfigError> = value
        .split_whitespace()
        .map(|w| f64_value(w, line, key))
        .collect();
    let items = items?;
    if items.is_empty() {
        return Err(err(
            line,
            format!("key `{key}`: expected at least one value"),
        ));
    }
    Ok(items)
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<ExperimentConfig, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut section = Section::None;
        let mut seen: HashSet<String> = HashSet::new();

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let t = raw.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            if let Some(rest) = t.strip_prefix('[') {
                let name = rest
                    .strip_suffix(']')
                    .ok_or_else(|| err(line, "unterminated `[section]` header"))?
                    .trim();
                section = match name {
                    "model" => Section::Model,
                    "study" => Section::Study,
                    "output" => Section::Output,
                    "check" => Section::Check,
                    other => {
                        return Err(err(
                            line,
                            format!(
                                "unknown section `[{other}]`; expected [model], [study], [output], or [check]"
                            ),
                        ))
                    }
                };
                continue;
            }
            let (key, value) = t
                .split_once('=')
                .ok_or_else(|| err(line, "expected `key = value`"))?;
            let key = key.trim();
            let value = value.trim();
            if key.is_empty() {
                return Err(err(line, "empty key before `=`"));
            }
            if section == Section::None {
                return Err(err(
                    line,
                    format!("key `{key}` appears before any `[section]` header"),
                ));
            }
            if !seen.insert(format!("{}.{key}", section.name())) {
                return Err(err(
                    line,
                    format!("duplicate key `{key}` in [{}]", section.name()),
                ));
            }
            cfg.apply(section, key, value, line)?;
        }
        Ok(cfg)
    }

    fn apply(
        &mut self,
        section: Section,
        key: &str,
        value: &str,
        line: usize,
    ) -> Result<(), ConfigError> {
        let unknown =
            |line: usize| err(line, format!("unknown key `{key}` in [{}]", section.name()));
        match section {
            Section::None => unreachable!("checked by the caller"),
            Section::Model => match key {
                "kind" => {
                    self.model.kind = Some(value.to_string());
                    self.model.kind_line = line;
                }
                "center" => self.model.center = f64_value(value, line, key)?,
                "left" => self.model.left = f64_value(value, line, key)?,
                "right" => self.model.right = f64_value(value, line, key)?,
                "noise" => self.model.noise = f64_value(value, line, key)?,
                "w0" => self.model.w0 = f64_value(value, line, key)?,
                "beta0" => self.model.beta0 = f64_value(value, line, key)?,
                "alpha_knots" => {
                    let v = usize_value(value, line, key)?;
                    if v < 2 {
                        return Err(err(line, "key `alpha_knots`: need at least 2 knots"));
                    }
                    self.model.alpha_knots = v;
                }
                _ => return Err(unknown(line)),
            },
            Section::Study => match key {
                "schedule" => {
                    let v = usize_list(value, line, key)?;
                    if !v.windows(2).all(|w| w[0] < w[1]) {
                        return Err(err(line, "key `schedule`: values must increase strictly"));
                    }
                    if v[0] == 0 {
                        return Err(err(line, "key `schedule`: values must be positive"));
                    }
                    self.study.schedule = v;
                }
                "eps" => {
                    let v = f64_value(value, line, key)?;
                    if v <= 0.0 {
                        return Err(err(line, "key `eps`: must be positive"));
                    }
                    self.study.eps = v;
                }
                "replications" => {
                    let v = usize_value(value, line, key)?;
                    if v == 0 {
                        return Err(err(line, "key `replications`: must be at least 1"));
                    }
                    self.study.replications = v;
                }
                "master_seed" => self.study.master_seed = u64_value(value, line, key)?,
                "target_p" => {
                    let v = f64_value(value, line, key)?;
                    if v <= 0.0 {
                        return Err(err(line, "key `target_p`: must be positive"));
                    }
                    self.study.target_p = v;
                }
                "decrease_factor" => {
                    let v = f64_value(value, line, key)?;
                    if v < 1.0 {
                        return Err(err(line, "key `decrease_factor`: must be at least 1"));
                    }
                    self.study.decrease_factor = v;
                }
                _ => return Err(unknown(line)),
            },
            Section::Output => match key {
                "study_csv" => self.output.study_csv = value.to_string(),
                "study_plot" => self.output.study_plot = value.to_string(),
                "distance_plot" => self.output.distance_plot = value.to_string(),
                "cov_csv" => self.output.cov_csv = value.to_string(),
                "varcond_plot" => self.output.varcond_plot = value.to_string(),
                _ => return Err(unknown(line)),
            },
            Section::Check => match key {
                "z" => {
                    let v = f64_value(value, line, key)?;
                    if v <= 0.0 {
                        return Err(err(line, "key `z`: must be positive"));
                    }
                    self.check.z = v;
                }
                "max_k" => {
                    let v = usize_value(value, line, key)?;
                    if v < 2 {
                        return Err(err(line, "key `max_k`: need at least 2 indices"));
                    }
                    self.check.max_k = v;
                }
                "n_draws" => {
                    let v = usize_value(value, line, key)?;
                    if v < 30 {
                        return Err(err(line, "key `n_draws`: need at least 30 draws"));
                    }
                    self.check.n_draws = v;
                }
                "alpha_grid" => {
                    let v = f64_list(value, line, key)?;
                    if v.iter().any(|&a| !(0.0..=1.0).contains(&a)) {
                        return Err(err(line, "key `alpha_grid`: values must lie in [0, 1]"));
                    }
                    self.check.alpha_grid = v;
                }
                _ => return Err(unknown(line)),
            },
        }
        Ok(())
    }

    /// Builds the model named by `[model] kind` with the section's
    /// parameters; `kind` is the one required key.
    pub fn build_model(&self) -> Result<ModelSpec, ConfigError> {
        let m = &self.model;
        let Some(kind) = &m.kind else {
            return Err(err(0, "missing required key `kind` in [model]"));
        };
        let grid = uniform_grid(m.alpha_knots);
        let built = match kind.as_str() {
            "iid-triangular" => {
                ModelSpec::iid_triangular(m.center, m.left, m.right, m.noise, grid)
            }
            "cosine-center" => ModelSpec::cosine_center(m.center, m.left, m.right, grid),
            "cosine-center-spread" => {
                ModelSpec::cosine_center_spread(m.center, m.w0, m.beta0, grid)
            }
            "shared-shift" => {
                ModelSpec::shared_shift(m.center, m.left, m.right, m.noise, grid)
            }
            other => {
                return Err(err(
                    m.kind_line,
                    format!(
                        "unknown model kind `{other}`; expected iid-triangular, cosine-center, cosine-center-spread, or shared-shift"
                    ),
                ))
            }
        };
        built.map_err(|e| err(0, format!("invalid [model] parameters: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_fill_everything_but_kind() {
        let cfg = ExperimentConfig::parse("[model]\nkind = cosine-center\n").unwrap();
        assert_eq!(cfg.study.schedule, vec![10, 100, 1_000, 10_000]);
        assert_eq!(cfg.study.eps, 0.1);
        assert_eq!(cfg.study.replications, 500);
        assert_eq!(cfg.check.max_k, 6);
        assert_eq!(cfg.output.study_csv, "study.csv");
        cfg.build_model().unwrap();
    }

    #[test]
    fn full_config_parses() {
        let text = "\
# experiment: spread family
[model]
kind = cosine-center-spread
center = 2.5
w0 = 1.5
beta0 = 0.25
alpha_knots = 51

[study]
schedule = 10 100 1000
eps = 0.05
replications = 200
master_seed = 7
target_p = 0.05
decrease_factor = 4

[output]
study_csv = spread.csv

[check]
z = 3.5
max_k = 4
n_draws = 5000
alpha_grid = 0.2 0.8
";
        let cfg = ExperimentConfig::parse(text).unwrap();
        assert_eq!(cfg.model.kind.as_deref(), Some("cosine-center-spread"));
        assert_eq!(cfg.model.alpha_knots, 51);
        assert_eq!(cfg.study.schedule, vec![10, 100, 1000]);
        assert_eq!(cfg.study.master_seed, 7);
        assert_eq!(cfg.output.study_csv, "spread.csv");
        assert_eq!(cfg.output.cov_csv, "cov_report.csv");
        assert_eq!(cfg.check.alpha_grid, vec![0.2, 0.8]);
        cfg.build_model().unwrap();
    }

    #[test]
    fn errors_carry_line_numbers() {
        let cases: [(&str, usize, &str); 8] = [
            ("[model]\nbogus = 1\n", 2, "unknown key `bogus`"),
            ("[mystery]\n", 1, "unknown section"),
            ("kind = x\n", 1, "before any `[section]`"),
            ("[model]\nkind cosine\n", 2, "expected `key = value`"),
            ("[study]\n\neps = 0\n", 3, "must be positive"),
            ("[study]\nschedule = 10 10\n", 2, "increase strictly"),
            ("[study]\neps = 0.1\neps = 0.2\n", 3, "duplicate key"),
            ("[model\nkind = x\n", 1, "unterminated"),
        ];
        for (text, line, needle) in cases {
            let e = ExperimentConfig::parse(text).unwrap_err();
            assert_eq!(e.line, line, "{text:?} → {e}");
            assert!(e.msg.contains(needle), "{text:?} → {e}");
        }
    }

    #[test]
    fn unknown_kind_points_at_its_line() {
        let cfg = ExperimentConfig::parse("[model]\n\nkind = kaboom\n").unwrap();
        let e = cfg.build_model().unwrap_err();
        assert_eq!(e.line, 3);
        assert!(e.msg.contains("kaboom"));
    }

    #[test]
    fn missing_kind_is_reported_without_a_line() {
        let cfg = ExperimentConfig::parse("[study]\neps = 0.2\n").unwrap();
        let e = cfg.build_model().unwrap_err();
        assert_eq!(e.line, 0);
        assert!(e.to_string().contains("missing required key `kind`"));
    }

    #[test]
    fn rejected_parameters_surface_the_model_error() {
        let cfg =
            ExperimentConfig::parse("[model]\nkind = cosine-center-spread\nbeta0 = 1.5\n").unwrap();
        let e = cfg.build_model().unwrap_err();
        assert!(e.msg.contains("invalid [model] parameters"), "{e}");
    }
}
