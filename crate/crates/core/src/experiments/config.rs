use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geometry::DensityField;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Study {
    CityTrials,
    NnScaling,
    Covariance,
    Scaling,
    Unconstrained,
}

impl Study {
    pub fn name(self) -> &'static str {
        match self {
            Study::CityTrials => "city_trials",
            Study::NnScaling => "nn_scaling",
            Study::Covariance => "covariance",
            Study::Scaling => "scaling",
            Study::Unconstrained => "unconstrained",
        }
    }
}

impl FromStr for Study {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "city_trials" => Study::CityTrials,
            "nn_scaling" => Study::NnScaling,
            "covariance" => Study::Covariance,
            "scaling" => Study::Scaling,
            "unconstrained" => Study::Unconstrained,
            other => return Err(Error::param(format!("unknown study `{other}`"))),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProcessKind {
    Binomial,
    Poisson,
}

impl FromStr for ProcessKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "binomial" => Ok(ProcessKind::Binomial),
            "poisson" => Ok(ProcessKind::Poisson),
            other => Err(Error::param(format!("unknown process `{other}` (binomial | poisson)"))),
        }
    }
}

impl ProcessKind {
    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::Binomial => "binomial",
            ProcessKind::Poisson => "poisson",
        }
    }
}

/// Experiment parameters, read from flat `key = value` lines.
///
/// | key | meaning | default |
/// |---|---|---|
/// | `study` | `city_trials`, `nn_scaling`, `covariance`, `scaling`, `unconstrained` | required |
/// | `r`, `s` | city side and gap | `0.1`, `0.2` |
/// | `N` | number of cities (`city_trials`) | `4` |
/// | `n` | node count, or comma-separated schedule | `32` |
/// | `N_schedule` | city counts paired with `n` (`scaling`, `covariance`) | empty |
/// | `density` | `uniform` or `checker:<ratio>` | `uniform` |
/// | `trials` | trials per schedule point | `100` |
/// | `seed` | master seed | `1` |
/// | `M` | when set, require `r² ≥ M ln n / n` | unset |
/// | `exact_threshold` | largest city solved exactly | `12` |
/// | `exact_only` | fail instead of using strips above the threshold | `false` |
/// | `process` | `binomial` or `poisson` | `binomial` |
/// | `pair` | two selection indices (`covariance`) | `0,1` |
/// | `k` | point counts (`nn_scaling`) | `8,16,32,64,128` |
/// | `samples` | samples per `k` (`nn_scaling`) | `10000` |
/// | `bootstrap` | bootstrap resamples for standard errors | `200` |
///
/// Lines starting with `#` are comments. Unknown keys are errors.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub study: Study,
    pub r: f64,
    pub s: f64,
    pub n_cities: usize,
    pub n: Vec<usize>,
    pub n_cities_schedule: Vec<usize>,
    pub density: String,
    pub trials: usize,
    pub seed: u64,
    pub m_const: Option<f64>,
    pub exact_threshold: usize,
    pub exact_only: bool,
    pub process: ProcessKind,
    pub pair: (usize, usize),
    pub k_schedule: Vec<usize>,
    pub samples: usize,
    pub bootstrap: usize,
    /// Test hook: corrupt the merged tour of the first trial.
    pub inject_fault: bool,
}

impl ExperimentConfig {
    pub fn new(study: Study) -> Self {
        ExperimentConfig {
            study,
            r: 0.1,
            s: 0.2,
            n_cities: 4,
            n: vec![32],
            n_cities_schedule: Vec::new(),
            density: "uniform".into(),
            trials: 100,
            seed: 1,
            m_const: None,
            exact_threshold: 12,
            exact_only: false,
            process: ProcessKind::Binomial,
            pair: (0, 1),
            k_schedule: vec![8, 16, 32, 64, 128],
            samples: 10_000,
            bootstrap: 200,
            inject_fault: false,
        }
    }

    pub fn density_field(&self) -> Result<DensityField> {
        DensityField::parse(&self.density)
    }

    /// Schedule of `(n, N)` pairs: `n` zipped with `N_schedule`, or every `n`
    /// with the fixed `N`.
    pub fn schedule(&self) -> Result<Vec<(usize, usize)>> {
        if self.n_cities_schedule.is_empty() {
            return Ok(self.n.iter().map(|&n| (n, self.n_cities)).collect());
        }
        if self.n_cities_schedule.len() != self.n.len() {
            return Err(Error::param(format!(
                "n has {} entries but N_schedule has {}",
                self.n.len(),
                self.n_cities_schedule.len()
            )));
        }
        Ok(self.n.iter().copied().zip(self.n_cities_schedule.iter().copied()).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::param("trials must be at least 1"));
        }
        if self.n.is_empty() {
            return Err(Error::param("n schedule is empty"));
        }
        if self.exact_threshold > crate::tours::EXACT_CAP {
            return Err(Error::param(format!("exact_threshold above the solver cap {}", crate::tours::EXACT_CAP)));
        }
        self.density_field()?;
        self.schedule()?;
        if let Some(m) = self.m_const {
            for &n in &self.n {
                let need = m * (n as f64).ln() / n as f64;
                if self.r * self.r < need {
                    return Err(Error::Regime(format!(
                        "r^2 >= M ln(n)/n fails at n={n}: r^2 = {} < {need}",
                        self.r * self.r
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolved configuration as `key = value` lines, parseable by [`FromStr`].
    pub fn to_kv(&self) -> String {
        let list = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(",");
        let mut out = String::new();
        let _ = writeln!(out, "study = {}", self.study.name());
        let _ = writeln!(out, "r = {}", self.r);
        let _ = writeln!(out, "s = {}", self.s);
        let _ = writeln!(out, "N = {}", self.n_cities);
        let _ = writeln!(out, "n = {}", list(&self.n));
        if !self.n_cities_schedule.is_empty() {
            let _ = writeln!(out, "N_schedule = {}", list(&self.n_cities_schedule));
        }
        let _ = writeln!(out, "density = {}", self.density);
        let _ = writeln!(out, "trials = {}", self.trials);
        let _ = writeln!(out, "seed = {}", self.seed);
        if let Some(m) = self.m_const {
            let _ = writeln!(out, "M = {m}");
        }
        let _ = writeln!(out, "exact_threshold = {}", self.exact_threshold);
        let _ = writeln!(out, "exact_only = {}", self.exact_only);
        let _ = writeln!(out, "process = {}", self.process.name());
        let _ = writeln!(out, "pair = {},{}", self.pair.0, self.pair.1);
        let _ = writeln!(out, "k = {}", list(&self.k_schedule));
        let _ = writeln!(out, "samples = {}", self.samples);
        let _ = writeln!(out, "bootstrap = {}", self.bootstrap);
        if self.inject_fault {
            let _ = writeln!(out, "inject_fault = true");
        }
        out
    }
}

fn parse_num<T: FromStr>(key: &str, value: &str) -> Result<T> {
    value.parse().map_err(|_| Error::param(format!("bad value `{value}` for `{key}`")))
}

fn parse_list(key: &str, value: &str) -> Result<Vec<usize>> {
    value.split(',').map(|v| parse_num(key, v.trim())).collect()
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut study = None;
        let mut cfg = ExperimentConfig::new(Study::CityTrials);
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::param(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            match key {
                "study" => study = Some(value.parse()?),
                "r" => cfg.r = parse_num(key, value)?,
                "s" => cfg.s = parse_num(key, value)?,
                "N" => cfg.n_cities = parse_num(key, value)?,
                "n" => cfg.n = parse_list(key, value)?,
                "N_schedule" => cfg.n_cities_schedule = parse_list(key, value)?,
                "density" => cfg.density = value.to_string(),
                "trials" => cfg.trials = parse_num(key, value)?,
                "seed" => cfg.seed = parse_num(key, value)?,
                "M" => cfg.m_const = Some(parse_num(key, value)?),
                "exact_threshold" => cfg.exact_threshold = parse_num(key, value)?,
                "exact_only" => cfg.exact_only = parse_num(key, value)?,
                "process" => cfg.process = value.parse()?,
                "pair" => {
                    let v = parse_list(key, value)?;
                    if v.len() != 2 {
                        return Err(Error::param("pair needs exactly two indices"));
                    }
                    cfg.pair = (v[0], v[1]);
                }
                "k" => cfg.k_schedule = parse_list(key, value)?,
                "samples" => cfg.samples = parse_num(key, value)?,
                "bootstrap" => cfg.bootstrap = parse_num(key, value)?,
                "inject_fault" => cfg.inject_fault = parse_num(key, value)?,
                other => return Err(Error::param(format!("line {}: unknown key `{other}`", lineno + 1))),
            }
        }
        cfg.study = study.ok_or_else(|| Error::param("missing `study`"))?;
        cfg.validate()?;
        Ok(cfg)
    }
}
