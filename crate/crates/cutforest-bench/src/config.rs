//! Experiment configuration: which learner, which graph family, which sizes
//! and seeds, and where the CSV goes. Settings come from a line-oriented
//! `key=value` file, command-line overrides, or both; overrides win field by
//! field.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use cutforest::graph::{DegreeProfile, GraphFamily, GraphFamilySpec, WeightDistribution};
use cutforest::randomized::{BudgetFormula, PhaseConfig};

/// Which learner a trial runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    Randomized,
    Deterministic,
    HarveyBaseline,
}

impl Algorithm {
    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::Randomized => "randomized",
            Algorithm::Deterministic => "deterministic",
            Algorithm::HarveyBaseline => "harvey-baseline",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim() {
            "randomized" => Ok(Algorithm::Randomized),
            "deterministic" => Ok(Algorithm::Deterministic),
            "harvey-baseline" | "harvey_baseline" => Ok(Algorithm::HarveyBaseline),
            other => bail!(
                "unknown algorithm {other:?} (expected randomized, deterministic, or harvey-baseline)"
            ),
        }
    }
}

/// Graph family shape; the per-trial size and seed are filled in later.
#[derive(Debug, Clone, PartialEq)]
pub enum FamilyKind {
    ErdosRenyi { p: f64 },
    Path,
    Cycle,
    Star,
    Clique,
    Bipartite(DegreeProfile),
}

impl FamilyKind {
    /// Parses the `--family` syntax; `p` feeds only the random family.
    pub fn parse(s: &str, p: Option<f64>) -> Result<Self> {
        let kind = match s.trim() {
            "erdos-renyi" | "erdos_renyi" => {
                let p = p.context("family erdos-renyi needs p (via --p or `p = ...`)")?;
                FamilyKind::ErdosRenyi { p }
            }
            "path" => FamilyKind::Path,
            "cycle" => FamilyKind::Cycle,
            "star" => FamilyKind::Star,
            "clique" => FamilyKind::Clique,
            "bipartite-matching" => FamilyKind::Bipartite(DegreeProfile::Matching),
            "bipartite-mixed" => FamilyKind::Bipartite(DegreeProfile::Mixed),
            "bipartite-complete" => FamilyKind::Bipartite(DegreeProfile::Complete),
            other => {
                if let Some(d) = other.strip_prefix("bipartite-uniform:") {
                    let d: usize =
                        d.parse().with_context(|| format!("bad bipartite degree {d:?}"))?;
                    FamilyKind::Bipartite(DegreeProfile::Uniform(d))
                } else {
                    bail!(
                        "unknown family {other:?} (expected erdos-renyi, path, cycle, star, \
                         clique, bipartite-matching, bipartite-uniform:D, bipartite-mixed, or \
                         bipartite-complete)"
                    );
                }
            }
        };
        Ok(kind)
    }

    /// Stable CSV label; never contains a comma.
    pub fn label(&self) -> String {
        match self {
            FamilyKind::ErdosRenyi { p } => format!("erdos-renyi-p{p}"),
            FamilyKind::Path => "path".into(),
            FamilyKind::Cycle => "cycle".into(),
            FamilyKind::Star => "star".into(),
            FamilyKind::Clique => "clique".into(),
            FamilyKind::Bipartite(DegreeProfile::Matching) => "bipartite-matching".into(),
            FamilyKind::Bipartite(DegreeProfile::Uniform(d)) => format!("bipartite-uniform{d}"),
            FamilyKind::Bipartite(DegreeProfile::Mixed) => "bipartite-mixed".into(),
            FamilyKind::Bipartite(DegreeProfile::Complete) => "bipartite-complete".into(),
        }
    }

    fn to_family(&self) -> GraphFamily {
        match self {
            FamilyKind::ErdosRenyi { p } => GraphFamily::ErdosRenyi { p: *p },
            FamilyKind::Path => GraphFamily::Path,
            FamilyKind::Cycle => GraphFamily::Cycle,
            FamilyKind::Star => GraphFamily::Star,
            FamilyKind::Clique => GraphFamily::Clique,
            FamilyKind::Bipartite(profile) => {
                GraphFamily::BipartitePromise { profile: profile.clone() }
            }
        }
    }
}

fn parse_weights(s: &str) -> Result<WeightDistribution> {
    let s = s.trim();
    if s == "unit" {
        return Ok(WeightDistribution::Unit);
    }
    if s == "heavy-tail" || s == "heavy_tail" {
        return Ok(WeightDistribution::HeavyTail);
    }
    if let Some(rest) = s.strip_prefix("uniform:") {
        let (lo, hi) = rest
            .split_once(':')
            .with_context(|| format!("weights {s:?}: expected uniform:LO:HI"))?;
        let lo: u64 = lo.parse().with_context(|| format!("bad weight bound {lo:?}"))?;
        let hi: u64 = hi.parse().with_context(|| format!("bad weight bound {hi:?}"))?;
        return Ok(WeightDistribution::UniformInt { lo, hi });
    }
    bail!("unknown weights {s:?} (expected unit, uniform:LO:HI, or heavy-tail)");
}

fn weights_label(w: &WeightDistribution) -> String {
    match w {
        WeightDistribution::Unit => "unit".into(),
        WeightDistribution::UniformInt { lo, hi } => format!("uniform:{lo}:{hi}"),
        WeightDistribution::HeavyTail => "heavy-tail".into(),
    }
}

fn parse_formula(s: &str) -> Result<BudgetFormula> {
    match s.trim() {
        "linear" => Ok(BudgetFormula::Linear),
        "baseline-logn" | "baseline_logn" => Ok(BudgetFormula::BaselineLogN),
        other => bail!("unknown budget formula {other:?} (expected linear or baseline-logn)"),
    }
}

/// A fully validated experiment: everything a run needs, nothing optional
/// left implicit.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub family: FamilyKind,
    pub weights: WeightDistribution,
    pub n_list: Vec<usize>,
    pub trials: u64,
    pub base_seed: u64,
    pub budget_constant: u64,
    pub budget_formula: BudgetFormula,
    pub output: Option<PathBuf>,
    pub record_timings: bool,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.trials < 1 {
            bail!("trials must be at least 1 (got {})", self.trials);
        }
        if self.n_list.is_empty() {
            bail!("n list must be nonempty");
        }
        for &n in &self.n_list {
            if n < 1 {
                bail!("graph sizes must be at least 1 (got {n})");
            }
        }
        if let FamilyKind::ErdosRenyi { p } = self.family {
            if !(0.0..=1.0).contains(&p) || !p.is_finite() {
                bail!("edge probability must lie in [0, 1] (got {p})");
            }
        }
        if self.budget_constant < 1 {
            bail!("budget constant must be at least 1");
        }
        if self.algorithm == Algorithm::Deterministic && self.weights != WeightDistribution::Unit {
            bail!(
                "the deterministic learner handles unweighted graphs only; use weights = unit \
                 or another algorithm"
            );
        }
        Ok(())
    }

    /// CSV label for the family column.
    pub fn family_label(&self) -> String {
        let mut label = self.family.label();
        if self.weights != WeightDistribution::Unit {
            label.push('-');
            label.push_str(&weights_label(&self.weights).replace(':', "-"));
        }
        label
    }

    /// Concrete generator spec for one trial.
    pub fn spec_for(&self, n: usize, graph_seed: u64) -> GraphFamilySpec {
        GraphFamilySpec::new(self.family.to_family(), n, self.weights.clone(), graph_seed)
    }

    /// Learner settings for one trial.
    pub fn phase_config(&self, algo_seed: u64) -> PhaseConfig {
        PhaseConfig {
            budget_constant: self.budget_constant,
            budget_formula: self.budget_formula,
            seed: algo_seed,
        }
    }
}

/// Raw settings before validation; `None` means "not given here".
#[derive(Debug, Clone, Default)]
pub struct RawSettings {
    pub algorithm: Option<String>,
    pub family: Option<String>,
    pub n: Option<String>,
    pub p: Option<f64>,
    pub weights: Option<String>,
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub budget_constant: Option<u64>,
    pub budget_formula: Option<String>,
    pub out: Option<PathBuf>,
    pub timings: Option<bool>,
}

impl RawSettings {
    /// Reads a `key = value` file; `#` starts a comment, blank lines are
    /// skipped, unknown keys are errors.
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        let mut raw = RawSettings::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .with_context(|| format!("{}:{}: expected key=value", path.display(), idx + 1))?;
            let (key, value) = (key.trim(), value.trim().to_string());
            let loc = || format!("{}:{} ({key})", path.display(), idx + 1);
            match key {
                "algorithm" => raw.algorithm = Some(value),
                "family" => raw.family = Some(value),
                "n" => raw.n = Some(value),
                "p" => raw.p = Some(value.parse().with_context(loc)?),
                "weights" => raw.weights = Some(value),
                "trials" => raw.trials = Some(value.parse().with_context(loc)?),
                "seed" => raw.seed = Some(value.parse().with_context(loc)?),
                "budget-constant" | "budget_constant" => {
                    raw.budget_constant = Some(value.parse().with_context(loc)?)
                }
                "budget-formula" | "budget_formula" => raw.budget_formula = Some(value),
                "out" => raw.out = Some(PathBuf::from(value)),
                "timings" => raw.timings = Some(value.parse().with_context(loc)?),
                other => bail!("{}:{}: unknown config key {other:?}", path.display(), idx + 1),
            }
        }
        Ok(raw)
    }

    /// Field-by-field override: values in `over` win where present.
    pub fn overlay(mut self, over: RawSettings) -> RawSettings {
        macro_rules! take {
            ($field:ident) => {
                if over.$field.is_some() {
                    self.$field = over.$field;
                }
            };
        }
        take!(algorithm);
        take!(family);
        take!(n);
        take!(p);
        take!(weights);
        take!(trials);
        take!(seed);
        take!(budget_constant);
        take!(budget_formula);
        take!(out);
        take!(timings);
        self
    }

    /// Validates and fills defaults: unit weights, 1 trial, seed 0, budget
    /// constant 64 under the log-overhead formula, no output file.
    pub fn build(&self) -> Result<ExperimentConfig> {
        let algorithm =
            Algorithm::parse(self.algorithm.as_deref().context("missing setting: algorithm")?)?;
        let family =
            FamilyKind::parse(self.family.as_deref().context("missing setting: family")?, self.p)?;
        let n_text = self.n.as_deref().context("missing setting: n")?;
        let mut n_list = Vec::new();
        for part in n_text.split(',') {
            let part = part.trim();
            if part.is_empty() {
                continue;
            }
            n_list.push(part.parse::<usize>().with_context(|| format!("bad size {part:?}"))?);
        }
        let weights = match self.weights.as_deref() {
            Some(w) => parse_weights(w)?,
            None => WeightDistribution::Unit,
        };
        let budget_formula = match self.budget_formula.as_deref() {
            Some(f) => parse_formula(f)?,
            None => BudgetFormula::BaselineLogN,
        };
        let config = ExperimentConfig {
            algorithm,
            family,
            weights,
            n_list,
            trials: self.trials.unwrap_or(1),
            base_seed: self.seed.unwrap_or(0),
            budget_constant: self.budget_constant.unwrap_or(64),
            budget_formula,
            output: self.out.clone(),
            record_timings: self.timings.unwrap_or(false),
        };
        config.validate()?;
        Ok(config)
    }
}
