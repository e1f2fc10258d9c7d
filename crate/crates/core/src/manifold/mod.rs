//! Immersions into space forms and their pointwise extrinsic geometry.
//!
//! An [`Immersion`] is a chart evaluated through [`Jet3`]s into the
//! coordinates of a model embedding space: `ℝ^m` for flat space, `ℝ^{m+1}`
//! for the unit sphere `S^m`, and Minkowski `ℝ^{m,1}` for the hyperboloid
//! model of `H^m`. Which directions count as normal is decided by a [`View`]
//! chosen per call, so the same chart into `ℝ^{n+2}` can be analysed as
//! `M ⊂ ℝ^{n+2}` or as `M ⊂ S^{n+1}`.

mod frame;
mod section;

pub use frame::{
    frame_at, is_parallel, normal_connection, normal_ricci, second_form_rank, shape_operator,
    simons_apply, simons_matrix, simons_matrix_in_basis, ParallelReport, PointFrame,
    SimonsMatrix,
};
pub(crate) use frame::{parallel_residual, simons_vector, Probe};
pub use section::{
    projected_normal_frame, FieldAlongM, FieldDerivs, FieldFn, NormalSection, SectionDefect,
};

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::{lift_vars, Jet3};
use crate::linalg::Signature;
use crate::scalar::Real;

/// Model space with constant sectional curvature.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AmbientSpace {
    /// `ℝ^m`.
    Flat(usize),
    /// Unit sphere `S^m ⊂ ℝ^{m+1}`.
    Sphere(usize),
    /// Unit hyperboloid `H^m ⊂ ℝ^{m,1}`.
    Hyperbolic(usize),
}

impl AmbientSpace {
    /// Dimension of the model space itself.
    pub fn dim(self) -> usize {
        match self {
            AmbientSpace::Flat(m) | AmbientSpace::Sphere(m) | AmbientSpace::Hyperbolic(m) => m,
        }
    }

    /// Dimension of the vector space the chart lands in.
    pub fn embedding_dim(self) -> usize {
        match self {
            AmbientSpace::Flat(m) => m,
            AmbientSpace::Sphere(m) | AmbientSpace::Hyperbolic(m) => m + 1,
        }
    }

    pub fn curvature(self) -> i32 {
        match self {
            AmbientSpace::Flat(_) => 0,
            AmbientSpace::Sphere(_) => 1,
            AmbientSpace::Hyperbolic(_) => -1,
        }
    }

    pub fn signature(self) -> Signature {
        match self {
            AmbientSpace::Hyperbolic(_) => Signature::Minkowski,
            _ => Signature::Euclidean,
        }
    }

    /// The view that treats the model space itself as the ambient manifold.
    pub fn native_view(self) -> View {
        match self {
            AmbientSpace::Flat(_) => View::Flat,
            AmbientSpace::Sphere(_) => View::Sphere,
            AmbientSpace::Hyperbolic(_) => View::Hyperbolic,
        }
    }
}

impl fmt::Display for AmbientSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AmbientSpace::Flat(m) => write!(f, "R^{m}"),
            AmbientSpace::Sphere(m) => write!(f, "S^{m}"),
            AmbientSpace::Hyperbolic(m) => write!(f, "H^{m}"),
        }
    }
}

/// Which ambient manifold the normal space is taken in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum View {
    /// The flat embedding space; for a spherical immersion the position
    /// vector is a normal direction.
    Flat,
    /// The unit sphere; normals are orthogonal to the position vector.
    Sphere,
    /// The hyperboloid in the Lorentz model.
    Hyperbolic,
}

impl View {
    /// Sectional curvature `c` of the viewed ambient space.
    pub fn curvature(self) -> i32 {
        match self {
            View::Flat => 0,
            View::Sphere => 1,
            View::Hyperbolic => -1,
        }
    }

    /// Whether the position vector is removed from the normal space.
    pub fn is_model(self) -> bool {
        self != View::Flat
    }

    pub fn check_compatible(self, ambient: AmbientSpace) -> Result<()> {
        let ok = matches!(
            (self, ambient),
            (View::Flat, AmbientSpace::Flat(_))
                | (View::Flat, AmbientSpace::Sphere(_))
                | (View::Sphere, AmbientSpace::Sphere(_))
                | (View::Hyperbolic, AmbientSpace::Hyperbolic(_))
        );
        if ok {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "view {self:?} is not available for an immersion into {ambient}"
            )))
        }
    }
}

/// One chart parameter range.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval<S> {
    pub lo: S,
    pub hi: S,
    /// Periodic parameters accept any real value.
    pub periodic: bool,
}

impl<S: Real> Interval<S> {
    pub fn new(lo: S, hi: S, periodic: bool) -> Self {
        Interval { lo, hi, periodic }
    }

    pub fn contains(&self, x: S) -> bool {
        if self.periodic {
            return x.is_finite();
        }
        let slack = S::lit(1e-12) * (S::one() + self.hi.abs().max(self.lo.abs()));
        x >= self.lo - slack && x <= self.hi + slack
    }
}

/// Product of parameter intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct DomainBox<S>(Vec<Interval<S>>);

impl<S: Real> DomainBox<S> {
    pub fn new(intervals: Vec<Interval<S>>) -> Self {
        DomainBox(intervals)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn intervals(&self) -> &[Interval<S>] {
        &self.0
    }

    pub fn contains(&self, p: &[S]) -> bool {
        p.len() == self.0.len() && self.0.iter().zip(p).all(|(iv, &x)| iv.contains(x))
    }

    pub fn center(&self) -> Vec<S> {
        self.0
            .iter()
            .map(|iv| (iv.lo + iv.hi) * S::lit(0.5))
            .collect()
    }

    /// All `2^n` corners, enumerated with variable 0 as the fastest bit.
    pub fn corners(&self) -> Vec<Vec<S>> {
        let n = self.0.len();
        (0..(1usize << n))
            .map(|mask| {
                self.0
                    .iter()
                    .enumerate()
                    .map(|(i, iv)| if mask >> i & 1 == 1 { iv.hi } else { iv.lo })
                    .collect()
            })
            .collect()
    }
}

/// Chart map: lifted chart variables to ambient coordinates.
pub type ChartFn<S> = Arc<dyn Fn(&[Jet3<S>]) -> Result<Vec<Jet3<S>>> + Send + Sync>;

/// A chart-to-ambient map with its model space and parameter box.
#[derive(Clone)]
pub struct Immersion<S> {
    name: String,
    n: usize,
    ambient: AmbientSpace,
    domain: DomainBox<S>,
    chart: ChartFn<S>,
    orientation: S,
}

impl<S: Real> fmt::Debug for Immersion<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Immersion")
            .field("name", &self.name)
            .field("n", &self.n)
            .field("ambient", &self.ambient)
            .field("domain", &self.domain)
            .finish()
    }
}

/// Jets of the chart at one point: position through order 3, first
/// partials through order 2 and second partials through order 1.
#[derive(Clone, Debug)]
pub struct PointJets<S> {
    pub point: Vec<S>,
    pub vars: Vec<Jet3<S>>,
    pub position: Vec<Jet3<S>>,
    /// `d1[i][a] = ∂_i f^a`.
    pub d1: Vec<Vec<Jet3<S>>>,
    /// `d2[i][j][a] = ∂_i ∂_j f^a`.
    pub d2: Vec<Vec<Vec<Jet3<S>>>>,
}

impl<S: Real> Immersion<S> {
    pub fn new(
        name: impl Into<String>,
        ambient: AmbientSpace,
        domain: DomainBox<S>,
        chart: ChartFn<S>,
    ) -> Result<Self> {
        let n = domain.dim();
        if n == 0 || n > crate::jets::MAX_DIM {
            return Err(Error::Domain(format!("unsupported chart dimension {n}")));
        }
        if ambient.dim() <= n {
            return Err(Error::Domain(format!(
                "a {n}-dimensional immersion needs an ambient of larger dimension than {ambient}"
            )));
        }
        Ok(Immersion {
            name: name.into(),
            n,
            ambient,
            domain,
            chart,
            orientation: S::one(),
        })
    }

    /// Sets the sign applied to [`Immersion::hypersurface_normal`].
    pub fn with_orientation(mut self, sign: S) -> Self {
        self.orientation = if sign < S::zero() { -S::one() } else { S::one() };
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Intrinsic dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ambient(&self) -> AmbientSpace {
        self.ambient
    }

    pub fn domain(&self) -> &DomainBox<S> {
        &self.domain
    }

    pub fn orientation(&self) -> S {
        self.orientation
    }

    pub fn embedding_dim(&self) -> usize {
        self.ambient.embedding_dim()
    }

    pub fn signature(&self) -> Signature {
        self.ambient.signature()
    }

    /// Evaluates the chart on already-lifted variables.
    pub fn chart_jets(&self, vars: &[Jet3<S>]) -> Result<Vec<Jet3<S>>> {
        let out = (self.chart)(vars)?;
        if out.len() != self.embedding_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.embedding_dim(),
                found: out.len(),
            });
        }
        Ok(out)
    }

    /// Ambient position (values only).
    pub fn position(&self, p: &[S]) -> Result<Vec<S>> {
        Ok(crate::jets::values(&self.jets_at(p)?.position))
    }

    pub fn jets_at(&self, p: &[S]) -> Result<PointJets<S>> {
        if !self.domain.contains(p) {
            return Err(Error::Domain(format!(
                "chart point {:?} outside the domain of {}",
                p, self.name
            )));
        }
        let vars = lift_vars(p)?;
        let position = self.chart_jets(&vars)?;
        match self.ambient {
            AmbientSpace::Sphere(_) | AmbientSpace::Hyperbolic(_) => {
                let target = S::from_i32(self.ambient.curvature()).unwrap();
                let pos = crate::jets::values(&position);
                let q = self.signature().inner(&pos, &pos);
                if (q - target).abs() > S::lit(1e-12) {
                    return Err(Error::Embedding(format!(
                        "{} leaves its model space: <f,f> = {q}",
                        self.name
                    )));
                }
            }
            AmbientSpace::Flat(_) => {}
        }
        let d1 = (0..self.n)
            .map(|i| position.iter().map(|c| c.partial(i)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let d2 = d1
            .iter()
            .map(|di| {
                (0..self.n)
                    .map(|j| di.iter().map(|c| c.partial(j)).collect::<Result<Vec<_>>>())
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PointJets {
            point: p.to_vec(),
            vars,
            position,
            d1,
            d2,
        })
    }

    /// Unit normal of a hypersurface of its model space (codimension one in
    /// `S^m` or `ℝ^m`), computed as the normalised generalised cross product
    /// of `∂_1 f, …, ∂_n f` (and `f` for spherical immersions), times the
    /// immersion's orientation sign.
    pub fn hypersurface_normal(&self) -> Result<NormalSection<S>> {
        let (model, m) = match self.ambient {
            AmbientSpace::Sphere(m) => (true, m + 1),
            AmbientSpace::Flat(m) => (false, m),
            AmbientSpace::Hyperbolic(_) => {
                return Err(Error::Contract(
                    "hypersurface normals are only built for flat or spherical immersions".into(),
                ))
            }
        };
        let expected = if model { m - 2 } else { m - 1 };
        if self.n != expected {
            return Err(Error::Contract(format!(
                "{} is not a hypersurface of {}",
                self.name, self.ambient
            )));
        }
        let sign = self.orientation;
        let label = format!("nu[{}]", self.name);
        Ok(NormalSection::new(
            label,
            Arc::new(move |pj: &PointJets<S>| {
                let mut cols: Vec<Vec<Jet3<S>>> = pj.d1.clone();
                if model {
                    cols.push(pj.position.clone());
                }
                let raw = cross_product(&cols);
                let len = crate::jets::dot(&raw, &raw).sqrt()?;
                let inv = len.recip()?.scale(sign);
                Ok(raw.iter().map(|c| c * &inv).collect())
            }),
        ))
    }
}

/// Generalised cross product of `m − 1` jet vectors in `ℝ^m`: the vector `N`
/// with `⟨N, w⟩ = det[v_1, …, v_{m−1}, w]`.
pub fn cross_product<S: Real>(cols: &[Vec<Jet3<S>>]) -> Vec<Jet3<S>> {
    let m = cols.len() + 1;
    let perms = permutations(m - 1);
    (0..m)
        .map(|c| {
            let rows: Vec<usize> = (0..m).filter(|&r| r != c).collect();
            // cofactor of entry (c, m−1)
            let sign = if (c + m - 1).is_multiple_of(2) { S::one() } else { -S::one() };
            let mut acc: Option<Jet3<S>> = None;
            for (perm, psign) in &perms {
                let mut term = cols[0][rows[perm[0]]].clone();
                for (k, col) in cols.iter().enumerate().skip(1) {
                    term = &term * &col[rows[perm[k]]];
                }
                let term = term.scale(if *psign { sign } else { -sign });
                acc = Some(match acc {
                    None => term,
                    Some(a) => a + term,
                });
            }
            acc.expect("at least one permutation")
        })
        .collect()
}

/// All permutations of `0..k` with their parity (`true` = even).
fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, even: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        if rest.is_empty() {
            out.push((prefix.clone(), even));
            return;
        }
        for idx in 0..rest.len() {
            let v = rest.remove(idx);
            prefix.push(v);
            // moving element `idx` to the front takes `idx` transpositions
            rec(prefix, rest, even ^ (idx % 2 == 1), out);
            prefix.pop();
            rest.insert(idx, v);
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut (0..k).collect(), true, &mut out);
    out
}
