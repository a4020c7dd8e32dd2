use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::SolverError;

/// Iteration scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// One-step gradient iteration with the closed-form step.
    Ss1,
    /// Two-step scheme with acceleration factor `T_k`.
    Ss2,
    /// Three-step scheme with acceleration factor `T_k`.
    Ss3,
    /// Two-step scalar-coefficient variant (`β_k`).
    Ss2s,
    /// Three-step scalar-coefficient variant (`β_k`, `γ_k`).
    Ss3s,
    /// Barzilai–Borwein baseline.
    Bb,
    /// Linear conjugate gradient, quadratics only.
    Cg,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::Ss1,
        Method::Ss2,
        Method::Ss3,
        Method::Ss2s,
        Method::Ss3s,
        Method::Bb,
        Method::Cg,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::Ss1 => "ss1",
            Method::Ss2 => "ss2",
            Method::Ss3 => "ss3",
            Method::Ss2s => "ss2s",
            Method::Ss3s => "ss3s",
            Method::Bb => "bb",
            Method::Cg => "cg",
        }
    }

    /// Column label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Ss1 => "SS1",
            Method::Ss2 => "SS2",
            Method::Ss3 => "SS3",
            Method::Ss2s => "SS2s",
            Method::Ss3s => "SS3s",
            Method::Bb => "BB",
            Method::Cg => "CG",
        }
    }
}

/// Methods that appear in published comparisons but have no definition here.
pub const EXTERNAL_METHODS: [&str; 4] = ["na", "abb", "abbmin1", "odh1"];

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        if let Some(m) = Method::ALL.into_iter().find(|m| m.as_str() == key) {
            return Ok(m);
        }
        if EXTERNAL_METHODS.contains(&key.as_str()) {
            return Err(SolverError::ExternalMethod(s.trim().to_string()));
        }
        Err(SolverError::UnknownMethod(s.to_string()))
    }
}

/// Which closed-form step size the SS schemes use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepRule {
    /// `α = (g(w)-g(x))ᵀg(x) / ‖g(w)-g(x)‖²`
    #[default]
    Primal,
    /// `α = ‖g(x)‖² / g(x)ᵀ(g(w)-g(x))`
    Dual,
}

impl StepRule {
    pub fn as_str(self) -> &'static str {
        match self {
            StepRule::Primal => "primal",
            StepRule::Dual => "dual",
        }
    }
}

impl FromStr for StepRule {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "primal" => Ok(StepRule::Primal),
            "dual" => Ok(StepRule::Dual),
            _ => Err(SolverError::UnknownStepRule(s.to_string())),
        }
    }
}

/// Barzilai–Borwein step formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BbVariant {
    /// `α = sᵀy / ‖y‖²`
    Bb1,
    /// `α = ‖s‖² / sᵀy`
    #[default]
    Bb2,
}

impl FromStr for BbVariant {
    type Err = SolverError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "bb1" => Ok(BbVariant::Bb1),
            "bb2" => Ok(BbVariant::Bb2),
            _ => Err(SolverError::UnknownBbVariant(s.to_string())),
        }
    }
}

/// Norm used by the stopping test. Traces always record the Euclidean norm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StopNorm {
    #[default]
    Euclidean,
    Max,
}

pub const DEFAULT_TOL: f64 = 1e-6;
pub const ACOC_TOL: f64 = 1e-13;
pub const DEFAULT_MAX_ITER: usize = 2000;
pub const DEFAULT_DENOM_FLOOR: f64 = 1e-30;
pub const DEFAULT_REL_GUARD: f64 = 1e-16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub method: Method,
    pub step_rule: StepRule,
    pub tol: f64,
    pub max_iter: usize,
    /// Absolute floor of the denominator guard.
    pub denom_floor: f64,
    /// Relative factor of the denominator guard.
    pub rel_guard: f64,
    pub acoc_mode: bool,
    pub bb_variant: BbVariant,
    pub stop_norm: StopNorm,
}

impl SolverConfig {
    pub fn new(method: Method) -> Self {
        SolverConfig {
            method,
            step_rule: StepRule::Primal,
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
            denom_floor: DEFAULT_DENOM_FLOOR,
            rel_guard: DEFAULT_REL_GUARD,
            acoc_mode: false,
            bb_variant: BbVariant::Bb2,
            stop_norm: StopNorm::Euclidean,
        }
    }

    /// Order-estimation settings: tolerance tightened to 1e-13, cap unchanged.
    pub fn acoc(method: Method) -> Self {
        SolverConfig::new(method).with_acoc_mode(true)
    }

    pub fn with_acoc_mode(mut self, on: bool) -> Self {
        self.acoc_mode = on;
        if on {
            self.tol = ACOC_TOL;
        }
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_step_rule(mut self, rule: StepRule) -> Self {
        self.step_rule = rule;
        self
    }

    pub fn with_bb_variant(mut self, variant: BbVariant) -> Self {
        self.bb_variant = variant;
        self
    }

    pub fn with_stop_norm(mut self, norm: StopNorm) -> Self {
        self.stop_norm = norm;
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SolverError::InvalidConfig(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(SolverError::InvalidConfig(
                "max_iter must be at least 1".into(),
            ));
        }
        if self.denom_floor.is_nan()
            || self.denom_floor < 0.0
            || self.rel_guard.is_nan()
            || self.rel_guard < 0.0
        {
            return Err(SolverError::InvalidConfig(
                "guards must be nonnegative".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults() {
        let cfg = SolverConfig::new(Method::Ss2);
        assert_eq!(cfg.tol, 1e-6);
        assert_eq!(cfg.max_iter, 2000);
        assert_eq!(cfg.step_rule, StepRule::Primal);
        assert_eq!(cfg.bb_variant, BbVariant::Bb2);
        assert!(cfg.validate().is_ok());
        let acoc = SolverConfig::acoc(Method::Ss1);
        assert_eq!(acoc.tol, 1e-13);
        assert_eq!(acoc.max_iter, 2000);
    }

    #[test]
    fn validation() {
        assert!(SolverConfig::new(Method::Ss1)
            .with_tol(0.0)
            .validate()
            .is_err());
        assert!(SolverConfig::new(Method::Ss1)
            .with_tol(f64::NAN)
            .validate()
            .is_err());
        assert!(SolverConfig::new(Method::Ss1)
            .with_max_iter(0)
            .validate()
            .is_err());
    }

    #[test]
    fn names() {
        for m in Method::ALL {
            assert_eq!(m.as_str().parse::<Method>().unwrap(), m);
        }
        assert!(matches!(
            "ABBmin1".parse::<Method>(),
            Err(SolverError::ExternalMethod(_))
        ));
        assert!(matches!(
            "newton".parse::<Method>(),
            Err(SolverError::UnknownMethod(_))
        ));
        assert_eq!("dual".parse::<StepRule>().unwrap(), StepRule::Dual);
        assert!("exact".parse::<StepRule>().is_err());
        assert_eq!("bb1".parse::<BbVariant>().unwrap(), BbVariant::Bb1);
    }
}
