//! Closed-form Holevo bounds on Eve's information, driven by the
//! Anticorrelation Check statistics `(P01, P10)` and Eve's hidden
//! parameters `(c, d)`.
//!
//! The post-attack ensemble has overlaps `p = <mu+|nu->` and `q = <mu+|nu+>`,
//! which fix the spectrum of the averaged state:
//!
//! ```text
//! p = (c - d)/2 - P01 (1 + c) - P10 (1 - d)
//! q = (c + d)/2 - P01 (1 + c) + P10 (1 - d)
//! lambda = (1 -+ p -+ q)/4,  lambda' = (1 -+ q)/2
//! I_BE = S(lambda) - 1,      I_AE = S(lambda) - S(lambda')
//! ```

mod maximize;
mod security;
mod surface;

pub use maximize::{
    max_holevo, max_holevo_ae, max_holevo_be, max_holevo_grid, max_holevo_grid_exhaustive, Maximum,
    COARSE_STEP,
};
pub use security::{analyze_experiment, diagonal_max, security_condition, SecurityVerdict};
pub use surface::{surface_grid, write_surface_csv, SurfacePoint};

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::qmath::spectrum_entropy;

/// Slack on the probability and parameter domains for values computed from simulations.
const DOMAIN_SLACK: f64 = 1e-9;
const LAMBDA_SLACK: f64 = 1e-12;

/// Observed anticorrelation probabilities, each in `[0, 0.5]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelStats {
    p01: f64,
    p10: f64,
}

impl ChannelStats {
    pub fn new(p01: f64, p10: f64) -> Result<Self> {
        let check = |x: f64| {
            if (-DOMAIN_SLACK..=0.5 + DOMAIN_SLACK).contains(&x) {
                Ok(x.clamp(0.0, 0.5))
            } else {
                Err(Error::OutOfDomain {
                    value: x,
                    domain: "[0, 0.5] for an anticorrelation probability",
                })
            }
        };
        Ok(Self {
            p01: check(p01)?,
            p10: check(p10)?,
        })
    }

    pub fn p01(&self) -> f64 {
        self.p01
    }

    pub fn p10(&self) -> f64 {
        self.p10
    }

    /// Mean anticorrelation parameter `(P01 + P10)/2`.
    pub fn p_anticorr(&self) -> f64 {
        0.5 * (self.p01 + self.p10)
    }
}

/// Eve's hidden parameters `c = <Γ|Z_B|Γ>`, `d = <Δ|Z_B|Δ>`, each in `[-1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EveParams {
    pub c: f64,
    pub d: f64,
}

impl EveParams {
    pub fn new(c: f64, d: f64) -> Result<Self> {
        let check = |x: f64| {
            if (-1.0 - DOMAIN_SLACK..=1.0 + DOMAIN_SLACK).contains(&x) {
                Ok(x.clamp(-1.0, 1.0))
            } else {
                Err(Error::OutOfDomain {
                    value: x,
                    domain: "[-1, 1] for c and d",
                })
            }
        };
        Ok(Self {
            c: check(c)?,
            d: check(d)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundsResult {
    pub p: f64,
    pub q: f64,
    pub lambdas: [f64; 4],
    pub lambda_primes: [f64; 2],
    pub i_be: f64,
    pub i_ae: f64,
}

/// Which information bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Bound {
    /// Bob-Eve, `I_B:E`.
    Be,
    /// Alice-Eve, `I_A:E`.
    Ae,
}

impl Bound {
    pub fn pick(self, r: &BoundsResult) -> f64 {
        match self {
            Bound::Be => r.i_be,
            Bound::Ae => r.i_ae,
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Bound::Be => "be",
            Bound::Ae => "ae",
        })
    }
}

impl FromStr for Bound {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "be" => Ok(Bound::Be),
            "ae" => Ok(Bound::Ae),
            other => Err(Error::Config(format!("unknown bound '{other}' (expected be or ae)"))),
        }
    }
}

pub fn pq_from_stats(stats: ChannelStats, eve: EveParams) -> (f64, f64) {
    let EveParams { c, d } = eve;
    let a = stats.p01 * (1.0 + c);
    let b = stats.p10 * (1.0 - d);
    ((c - d) / 2.0 - a - b, (c + d) / 2.0 - a + b)
}

/// Spectra and both bounds for given overlaps `p`, `q`.
pub fn bounds_from_pq(p: f64, q: f64) -> Result<BoundsResult> {
    let mut lambdas = [
        (1.0 - p - q) / 4.0,
        (1.0 + p + q) / 4.0,
        (1.0 - p + q) / 4.0,
        (1.0 + p - q) / 4.0,
    ];
    let mut lambda_primes = [(1.0 - q) / 2.0, (1.0 + q) / 2.0];
    for x in lambdas.iter_mut().chain(lambda_primes.iter_mut()) {
        if !(-LAMBDA_SLACK..=1.0 + LAMBDA_SLACK).contains(x) {
            return Err(Error::InvalidParameters { value: *x });
        }
        *x = x.clamp(0.0, 1.0);
    }
    let s = spectrum_entropy(&lambdas)?;
    let s_prime = spectrum_entropy(&lambda_primes)?;
    // + 0.0 folds -0.0 into 0.0.
    Ok(BoundsResult {
        p,
        q,
        lambdas,
        lambda_primes,
        i_be: s - 1.0 + 0.0,
        i_ae: s - s_prime + 0.0,
    })
}

pub fn holevo_bounds(stats: ChannelStats, eve: EveParams) -> Result<BoundsResult> {
    let (p, q) = pq_from_stats(stats, eve);
    bounds_from_pq(p, q)
}

pub fn holevo_be(stats: ChannelStats, eve: EveParams) -> Result<f64> {
    holevo_bounds(stats, eve).map(|r| r.i_be)
}

pub fn holevo_ae(stats: ChannelStats, eve: EveParams) -> Result<f64> {
    holevo_bounds(stats, eve).map(|r| r.i_ae)
}
