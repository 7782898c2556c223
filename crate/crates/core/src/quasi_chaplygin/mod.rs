//! Quasi-Chaplygin and gas-dynamic media: exact beam and slab solutions, the
//! axis functional, and Lie-Backlund invariance checks in hodograph form.

mod hodograph;
mod liebacklund;
mod solutions;

pub use hodograph::*;
pub use liebacklund::*;
pub use solutions::*;

use crate::error::{Error, Result};
use crate::numerics::Tolerance;
use crate::oracles::{Equation, Phi};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChaplyginProfile {
    /// `N(x) = sech^2 x`
    Soliton,
    /// `N(x) = exp(-x^2)`
    Gaussian,
}

/// Medium and boundary data; the boundary velocity is always zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChaplyginConfig {
    pub alpha: f64,
    pub phi: Phi,
    pub profile: ChaplyginProfile,
}

impl ChaplyginConfig {
    pub fn new(alpha: f64, phi: Phi, profile: ChaplyginProfile) -> Result<Self> {
        if alpha == 0.0 || !alpha.is_finite() {
            return Err(Error::InvalidInput("alpha must be nonzero".into()));
        }
        if profile == ChaplyginProfile::Soliton && phi != Phi::Unity {
            return Err(Error::InvalidInput("the soliton profile pairs with phi = 1".into()));
        }
        Ok(Self { alpha, phi, profile })
    }

    /// Focusing soliton beam: `alpha = 1`, `phi = 1`.
    pub fn soliton() -> Self {
        Self {
            alpha: 1.0,
            phi: Phi::Unity,
            profile: ChaplyginProfile::Soliton,
        }
    }

    /// Expanding slab: `alpha = -1`, `phi = 1/n`.
    pub fn slab() -> Self {
        Self {
            alpha: -1.0,
            phi: Phi::Inverse,
            profile: ChaplyginProfile::Gaussian,
        }
    }

    /// Elliptic when `alpha phi(n) > 0`.
    pub fn is_elliptic(&self) -> bool {
        self.alpha > 0.0
    }

    pub fn equation(&self) -> Equation {
        Equation::Kcs {
            alpha: self.alpha,
            phi: self.phi,
        }
    }

    /// The closed-form solution for the two exact cases.
    pub fn solve(&self, t: f64, x: f64, tol: Tolerance) -> Result<(f64, f64)> {
        match (self.profile, self.phi) {
            (ChaplyginProfile::Soliton, _) if self.alpha == 1.0 => soliton_solution(t, x, tol),
            (ChaplyginProfile::Gaussian, Phi::Inverse) if self.alpha == -1.0 => slab_solution(t, x, tol),
            _ => Err(Error::InvalidInput("no closed-form solution for this medium".into())),
        }
    }
}
