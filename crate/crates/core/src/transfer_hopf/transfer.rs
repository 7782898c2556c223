//! Particle transfer through an absorbing half-space.

use crate::error::{Error, Result};
use crate::group::{Generator, VariableSpace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferConfig {
    /// Particle number entering at the boundary.
    pub alpha0: f64,
    /// Linear absorption rate.
    pub nu: f64,
    /// Absorption proportional to the particle stream.
    pub beta: f64,
    pub depth_max: f64,
}

impl TransferConfig {
    pub fn new(alpha0: f64, nu: f64, beta: f64, depth_max: f64) -> Result<Self> {
        if alpha0 < 0.0 || nu < 0.0 || beta < 0.0 || !(depth_max > 0.0) {
            return Err(Error::InvalidInput(
                "transfer needs alpha0, nu, beta >= 0 and depth_max > 0".into(),
            ));
        }
        if (nu != 0.0) == (beta != 0.0) {
            return Err(Error::InvalidInput("exactly one of nu, beta must be nonzero".into()));
        }
        Ok(Self {
            alpha0,
            nu,
            beta,
            depth_max,
        })
    }

    pub fn linear(alpha0: f64, nu: f64) -> Result<Self> {
        Self::new(alpha0, nu, 0.0, 10.0)
    }

    pub fn nonlinear(alpha0: f64, beta: f64) -> Result<Self> {
        Self::new(alpha0, 0.0, beta, 10.0)
    }

    pub fn is_linear(&self) -> bool {
        self.nu != 0.0
    }

    /// Boundary-layer slope `dA/dlambda` as a function of the local number.
    pub fn rate(&self, a: f64) -> f64 {
        if self.is_linear() {
            -self.nu * a
        } else {
            -self.beta * a * a
        }
    }
}

/// Improved solution at depth `lambda` for boundary number `alpha`.
pub fn transfer_map(cfg: &TransferConfig, alpha: f64, lambda: f64) -> f64 {
    if cfg.is_linear() {
        alpha * (-cfg.nu * lambda).exp()
    } else {
        alpha / (1.0 + cfg.beta * alpha * lambda)
    }
}

pub fn transfer_rg(cfg: &TransferConfig, lambda: f64) -> f64 {
    transfer_map(cfg, cfg.alpha0, lambda)
}

/// First-order expansion; goes negative past the breakdown depth.
pub fn transfer_pt(cfg: &TransferConfig, lambda: f64) -> f64 {
    cfg.alpha0 + cfg.rate(cfg.alpha0) * lambda
}

/// Generator on `{x, alpha}`: unit shift in depth, boundary-layer rate in `alpha`.
pub fn transfer_generator(cfg: &TransferConfig) -> Generator {
    let c = *cfg;
    Generator::zero(VariableSpace::new(["x", "alpha"]).expect("distinct names"))
        .with("x", |_| 1.0)
        .and_then(|g| g.with("alpha", move |p| c.rate(p[1])))
        .expect("names exist")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let lin = TransferConfig::linear(1.0, 1.0).unwrap();
        assert_eq!(transfer_rg(&lin, 0.0), 1.0);
        let nl = TransferConfig::nonlinear(1.0, 1.0).unwrap();
        assert_eq!(transfer_rg(&nl, 3.0), 0.25);
        let lin2 = TransferConfig::linear(2.0, 0.5).unwrap();
        assert!((transfer_rg(&lin2, 4f64.ln()) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn perturbative() {
        let lin = TransferConfig::linear(1.0, 1.0).unwrap();
        assert!((transfer_pt(&lin, 0.01) - 0.99).abs() < 1e-15);
        assert_eq!(transfer_pt(&lin, 0.0), 1.0);
        let nl = TransferConfig::nonlinear(1.0, 1.0).unwrap();
        assert_eq!(transfer_pt(&nl, 2.0), -1.0);
    }

    #[test]
    fn exactly_one_mechanism() {
        assert!(TransferConfig::new(1.0, 1.0, 1.0, 1.0).is_err());
        assert!(TransferConfig::new(1.0, 0.0, 0.0, 1.0).is_err());
    }
}
