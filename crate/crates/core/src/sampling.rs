//! Seeded chart sample plans, tolerance profiles and deterministic sweeps.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::DomainBox;
use crate::scalar::{nan_max, Real};

/// Seed used when neither `--seed` nor `GAUSSMAP_SEED` is given.
pub const DEFAULT_SEED: u64 = 42;

/// Number of pseudorandom points in a default plan.
pub const DEFAULT_SAMPLES: usize = 64;

/// Chart points at which a check is evaluated.
#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan<S> {
    pub points: Vec<Vec<S>>,
}

impl<S: Real> SamplePlan<S> {
    /// `count` uniform points of the domain box drawn from a ChaCha8 stream
    /// seeded with `seed`, followed (optionally) by the `2^n` box corners.
    pub fn seeded(domain: &DomainBox<S>, seed: u64, count: usize, corners: bool) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = domain.dim();
        let mut points = Vec::with_capacity(count + (1 << n));
        for _ in 0..count {
            let p = domain
                .intervals()
                .iter()
                .map(|iv| {
                    let t: f64 = rng.gen();
                    iv.lo + (iv.hi - iv.lo) * S::lit(t)
                })
                .collect();
            points.push(p);
        }
        if corners {
            points.extend(domain.corners());
        }
        SamplePlan { points }
    }

    /// Default plan: 64 seeded points plus corners.
    pub fn standard(domain: &DomainBox<S>, seed: u64) -> Self {
        Self::seeded(domain, seed, DEFAULT_SAMPLES, true)
    }

    pub fn single(point: Vec<S>) -> Self {
        SamplePlan {
            points: vec![point],
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Residuals of one sweep, in plan order.
#[derive(Clone, Debug)]
pub struct Sweep<S> {
    pub values: Vec<S>,
}

impl<S: Real> Sweep<S> {
    pub fn max(&self) -> S {
        self.values.iter().fold(S::zero(), |m, &v| nan_max(m, v))
    }

    pub fn min(&self) -> S {
        self.values
            .iter()
            .fold(S::infinity(), |m, &v| if v.is_nan() || v < m { v } else { m })
    }
}

/// Evaluates `f` at every plan point, possibly in parallel; the output order
/// (and hence any later reduction) follows the plan order.
pub fn sweep<S, F>(plan: &SamplePlan<S>, f: F) -> Result<Sweep<S>>
where
    S: Real,
    F: Fn(&[S]) -> Result<S> + Sync + Send,
{
    if plan.is_empty() {
        return Err(Error::Domain("empty sample plan".into()));
    }
    let values: Result<Vec<S>> = plan.points.par_iter().map(|p| f(p)).collect();
    Ok(Sweep { values: values? })
}

/// Named tolerance set. Structural invariants (orthonormality, normality)
/// use `structural`; derived identities use `derived`. `separation` and
/// `control` are the lower bounds a negative control must exceed; they are
/// not scaled by the strict and loose profiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToleranceProfile {
    pub name: String,
    pub structural: f64,
    pub derived: f64,
    pub parallel: f64,
    /// Spread of Simons eigenvalues across samples.
    pub spectrum: f64,
    /// Off-solution angles and non-existence grids.
    pub separation: f64,
    /// Non-CMC negative controls.
    pub control: f64,
}

impl Default for ToleranceProfile {
    fn default() -> Self {
        ToleranceProfile {
            name: "default".into(),
            structural: 1e-10,
            derived: 1e-8,
            parallel: 1e-9,
            spectrum: 1e-9,
            separation: 1e-4,
            control: 1e-3,
        }
    }
}

impl ToleranceProfile {
    pub fn by_name(name: &str) -> Result<Self> {
        let base = Self::default();
        let scaled = |name: &str, k: f64| ToleranceProfile {
            name: name.into(),
            structural: base.structural * k,
            derived: base.derived * k,
            parallel: base.parallel * k,
            spectrum: base.spectrum * k,
            ..base.clone()
        };
        match name {
            "default" => Ok(base),
            "strict" => Ok(scaled("strict", 0.1)),
            "loose" => Ok(scaled("loose", 100.0)),
            other => Err(Error::Usage(format!(
                "unknown tolerance profile '{other}' (expected default, strict or loose)"
            ))),
        }
    }

    pub fn names() -> &'static [&'static str] {
        &["default", "strict", "loose"]
    }
}
