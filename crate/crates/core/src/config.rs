//! Problem and study configuration, read from TOML.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::fem::{QoISpec, TimeRule};
use crate::field::CovarianceSpec;
use crate::geometry::Point;
use crate::jump::{AdvectionMap, Clamp, CoefficientModel, JumpTable, PositiveMap};
use crate::sparse::SolverKind;

/// Spatial discretization strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Discretization {
    /// Meshes resolve the partition interfaces of each sample.
    Adapted,
    /// Structured meshes independent of the sample.
    Nonadapted,
}

/// Multilevel estimator variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimatorKind {
    Standard,
    Coupled,
}

/// A discretization paired with an estimator, written `adapted-standard`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodSpec {
    pub discretization: Discretization,
    pub estimator: EstimatorKind,
}

impl MethodSpec {
    pub const fn new(discretization: Discretization, estimator: EstimatorKind) -> Self {
        MethodSpec {
            discretization,
            estimator,
        }
    }

    /// Expand a comma-separated list such as `adapted,nonadapted,coupled`.
    ///
    /// Tokens name a discretization, an estimator, or a full pair
    /// (`adapted-coupled`). Bare discretizations and bare estimators combine
    /// as a cross product; a missing side defaults to both discretizations or
    /// to the standard estimator.
    pub fn parse_list(text: &str) -> Result<Vec<MethodSpec>> {
        let mut pairs = Vec::new();
        let mut discs = Vec::new();
        let mut ests = Vec::new();
        for token in text.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            if token.contains('-') {
                pairs.push(token.parse()?);
            } else if let Ok(d) = parse_discretization(token) {
                discs.push(d);
            } else if let Ok(e) = parse_estimator(token) {
                ests.push(e);
            } else {
                return Err(Error::Config(format!("unknown method '{token}'")));
            }
        }
        if !discs.is_empty() || !ests.is_empty() {
            if discs.is_empty() {
                discs = vec![Discretization::Adapted, Discretization::Nonadapted];
            }
            if ests.is_empty() {
                ests = vec![EstimatorKind::Standard];
            }
            for &d in &discs {
                for &e in &ests {
                    pairs.push(MethodSpec::new(d, e));
                }
            }
        }
        if pairs.is_empty() {
            return Err(Error::Config("empty method list".into()));
        }
        pairs.sort();
        pairs.dedup();
        Ok(pairs)
    }
}

fn parse_discretization(s: &str) -> Result<Discretization> {
    match s {
        "adapted" => Ok(Discretization::Adapted),
        "nonadapted" => Ok(Discretization::Nonadapted),
        _ => Err(Error::Config(format!("unknown discretization '{s}'"))),
    }
}

fn parse_estimator(s: &str) -> Result<EstimatorKind> {
    match s {
        "standard" => Ok(EstimatorKind::Standard),
        "coupled" => Ok(EstimatorKind::Coupled),
        _ => Err(Error::Config(format!("unknown estimator '{s}'"))),
    }
}

impl fmt::Display for Discretization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Discretization::Adapted => "adapted",
            Discretization::Nonadapted => "nonadapted",
        })
    }
}

impl fmt::Display for EstimatorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EstimatorKind::Standard => "standard",
            EstimatorKind::Coupled => "coupled",
        })
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.discretization, self.estimator)
    }
}

impl FromStr for MethodSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (d, e) = s
            .split_once('-')
            .ok_or_else(|| Error::Config(format!("method '{s}' is not of the form <discretization>-<estimator>")))?;
        Ok(MethodSpec::new(parse_discretization(d)?, parse_estimator(e)?))
    }
}

impl Serialize for MethodSpec {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for MethodSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Inclusive range of levels, written `0..3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelRange {
    pub first: usize,
    pub last: usize,
}

impl LevelRange {
    pub fn levels(&self) -> impl Iterator<Item = usize> {
        self.first..=self.last
    }
}

impl fmt::Display for LevelRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.first, self.last)
    }
}

impl FromStr for LevelRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("level range '{s}' must look like 0..3"));
        let (a, b) = match s.split_once("..") {
            Some((a, b)) => (a, b.trim_start_matches('=')),
            None => (s, s),
        };
        let first: usize = a.trim().parse().map_err(|_| bad())?;
        let last: usize = b.trim().parse().map_err(|_| bad())?;
        if first > last {
            return Err(bad());
        }
        Ok(LevelRange { first, last })
    }
}

impl Serialize for LevelRange {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for LevelRange {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Deterministic coefficient ingredients: `a = a_bar + exp(W) + P` and
/// `b = clamp(b1 * a, b2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CoefficientSection {
    pub a_bar: Expr,
    pub b1: Expr,
    pub b2: Expr,
    pub clamp: Clamp,
}

impl Default for CoefficientSection {
    fn default() -> Self {
        CoefficientSection {
            a_bar: Expr::constant(0.0),
            b1: Expr::constant(-2.0),
            b2: Expr::constant(-5.0),
            clamp: Clamp::Max,
        }
    }
}

impl CoefficientSection {
    pub fn model(&self) -> CoefficientModel {
        CoefficientModel {
            a_bar: self.a_bar.clone(),
            phi: PositiveMap::Exp,
            advection: AdvectionMap {
                scale: self.b1.clone(),
                cap: self.b2.clone(),
                clamp: self.clamp,
            },
        }
    }
}

/// Which studies to run and how.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StudySection {
    pub methods: Vec<MethodSpec>,
    pub levels: LevelRange,
    pub reps: usize,
    pub ref_level: usize,
    pub seed: u64,
    /// Worker threads; 0 means all available cores.
    pub threads: usize,
}

impl Default for StudySection {
    fn default() -> Self {
        StudySection {
            methods: vec![
                MethodSpec::new(Discretization::Adapted, EstimatorKind::Standard),
                MethodSpec::new(Discretization::Nonadapted, EstimatorKind::Standard),
            ],
            levels: LevelRange { first: 0, last: 3 },
            reps: 20,
            ref_level: 5,
            seed: 20240501,
            threads: 0,
        }
    }
}

/// Everything needed to reproduce a run. Missing keys take the defaults of
/// the reference experiment; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ProblemConfig {
    pub t_final: f64,
    pub u0: Expr,
    pub f: Expr,
    /// Regularity exponent used by the sample-count schedule, in (1/2, 1].
    pub kappa: f64,
    pub solver: SolverKind,
    pub coefficients: CoefficientSection,
    pub covariance: CovarianceSpec,
    pub jumps: JumpTable,
    pub qoi: QoISpec,
    pub study: StudySection,
}

impl Default for ProblemConfig {
    fn default() -> Self {
        ProblemConfig {
            t_final: 1.0,
            u0: Expr::parse("0.1*sin(pi*x)*sin(pi*y)").expect("default initial condition"),
            f: Expr::constant(1.0),
            kappa: 1.0,
            solver: SolverKind::Direct,
            coefficients: CoefficientSection::default(),
            covariance: CovarianceSpec::default(),
            jumps: JumpTable::default(),
            qoi: QoISpec::default(),
            study: StudySection::default(),
        }
    }
}

impl ProblemConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: ProblemConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Lists every violated invariant at once.
    pub fn validate(&self) -> Result<()> {
        let mut problems = Vec::new();
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            problems.push(format!("t_final must be positive, got {}", self.t_final));
        }
        if !(self.kappa > 0.5 && self.kappa <= 1.0) {
            problems.push(format!("kappa must lie in (0.5, 1], got {}", self.kappa));
        }
        if let Err(e) = self.covariance.validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = self.jumps.validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = self.coefficients.model().validate() {
            problems.push(e.to_string());
        }
        if let Err(e) = self.qoi.validate() {
            problems.push(e.to_string());
        }
        for (name, e) in [("u0", &self.u0), ("f", &self.f)] {
            let bad = (0..=16).flat_map(|j| (0..=16).map(move |i| (i, j))).any(|(i, j)| {
                let p = Point::new(i as f64 / 16.0, j as f64 / 16.0);
                !e.eval(p, 0.0).is_finite() || !e.eval(p, self.t_final).is_finite()
            });
            if bad {
                problems.push(format!("{name} is not finite on the domain"));
            }
        }
        let s = &self.study;
        if s.methods.is_empty() {
            problems.push("study.methods is empty".into());
        }
        if s.reps == 0 {
            problems.push("study.reps must be at least 1".into());
        }
        if s.ref_level <= s.levels.last {
            problems.push(format!(
                "study.ref_level ({}) must exceed every studied level (up to {})",
                s.ref_level, s.levels.last
            ));
        }
        if problems.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(problems.join("; ")))
        }
    }

    /// SHA-256 over everything that affects numerical results: the problem
    /// definition and the seed. Worker count and study shape are excluded.
    pub fn fingerprint(&self) -> String {
        let mut canonical = self.clone();
        canonical.study = StudySection {
            seed: self.study.seed,
            ..StudySection::default()
        };
        let text = serde_json::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(text.as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn coefficient_model(&self) -> CoefficientModel {
        self.coefficients.model()
    }

    pub fn time_rule(&self) -> TimeRule {
        self.qoi.time_rule
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = ProblemConfig::from_toml("").unwrap();
        assert_eq!(c, ProblemConfig::default());
        assert_eq!(c.t_final, 1.0);
        assert_eq!(c.f.as_constant(), Some(1.0));
        assert_eq!(c.covariance, CovarianceSpec::new(1.5, 0.25, 0.1).unwrap());
        let mid = Point::new(0.5, 0.5);
        assert!((c.u0.eval(mid, 0.0) - 0.1).abs() < 1e-15);
        let model = c.coefficient_model();
        assert_eq!(model.advection.apply(mid, 1.0), -2.0);
        assert_eq!(model.advection.apply(mid, 3.0), -5.0);
    }

    #[test]
    fn kappa_range_enforced() {
        let e = ProblemConfig::from_toml("kappa = 0.4").unwrap_err();
        assert!(e.is_config(), "{e}");
        assert!(e.to_string().contains("kappa"));
        assert!(ProblemConfig::from_toml("kappa = 0.75").is_ok());
    }

    #[test]
    fn unknown_keys_rejected() {
        let e = ProblemConfig::from_toml("t_finale = 2.0").unwrap_err();
        assert!(e.to_string().contains("t_finale"), "{e}");
        assert!(ProblemConfig::from_toml("[covariance]\nrho = 1.0").is_err());
    }

    #[test]
    fn violations_listed_together() {
        let e = ProblemConfig::from_toml("t_final = -1\nkappa = 2").unwrap_err().to_string();
        assert!(e.contains("t_final") && e.contains("kappa"), "{e}");
    }

    #[test]
    fn round_trip() {
        let mut c = ProblemConfig {
            u0: Expr::parse("x*(1-x)*y*(1-y)").unwrap(),
            ..ProblemConfig::default()
        };
        c.coefficients.clamp = Clamp::Min;
        c.qoi.time_rule = TimeRule::Integral;
        c.study.methods = MethodSpec::parse_list("adapted,coupled").unwrap();
        c.study.levels = "1..2".parse().unwrap();
        let text = c.to_toml().unwrap();
        assert_eq!(ProblemConfig::from_toml(&text).unwrap(), c);
    }

    #[test]
    fn fingerprint_tracks_numerics_only() {
        let a = ProblemConfig::default();
        let mut b = a.clone();
        b.study.threads = 7;
        b.study.reps = 3;
        assert_eq!(a.fingerprint(), b.fingerprint());
        b.covariance.chi = 0.2;
        assert_ne!(a.fingerprint(), b.fingerprint());
        let mut c = a.clone();
        c.study.seed += 1;
        assert_ne!(a.fingerprint(), c.fingerprint());
    }

    #[test]
    fn method_lists() {
        use Discretization::*;
        use EstimatorKind::*;
        let all = MethodSpec::parse_list("adapted,nonadapted,standard,coupled").unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(
            MethodSpec::parse_list("nonadapted").unwrap(),
            vec![MethodSpec::new(Nonadapted, Standard)]
        );
        assert_eq!(
            MethodSpec::parse_list("adapted-coupled").unwrap(),
            vec![MethodSpec::new(Adapted, Coupled)]
        );
        assert!(MethodSpec::parse_list("fancy").is_err());
        assert_eq!(MethodSpec::new(Adapted, Coupled).to_string(), "adapted-coupled");
    }

    #[test]
    fn level_ranges() {
        let r: LevelRange = "0..3".parse().unwrap();
        assert_eq!(r.levels().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        let r: LevelRange = "2".parse().unwrap();
        assert_eq!((r.first, r.last), (2, 2));
        assert!("3..1".parse::<LevelRange>().is_err());
        assert!("a..b".parse::<LevelRange>().is_err());
    }
}
