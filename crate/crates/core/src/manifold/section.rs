//! Vector fields along an immersion and unit normal sections.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::linalg;
use crate::scalar::Real;

use super::{Immersion, PointJets, View};

/// Angle as a jet in the chart variables.
pub type Phase<S> = Arc<dyn Fn(&[Jet3<S>]) -> Jet3<S> + Send + Sync>;

/// Field evaluator: chart jets in, ambient components out.
pub type FieldFn<S> = Arc<dyn Fn(&PointJets<S>) -> Result<Vec<Jet3<S>>> + Send + Sync>;

/// A vector field `W` along `M`, given in ambient coordinates.
#[derive(Clone)]
pub struct FieldAlongM<S> {
    label: String,
    f: FieldFn<S>,
}

impl<S> fmt::Debug for FieldAlongM<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FieldAlongM({})", self.label)
    }
}

/// Value, first and second chart derivatives of a field at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldDerivs<S> {
    pub value: Vec<S>,
    /// `d1[i] = ∂_i W`.
    pub d1: Vec<Vec<S>>,
    /// `d2[i][j] = ∂_i ∂_j W`.
    pub d2: Vec<Vec<Vec<S>>>,
}

impl<S: Real> FieldAlongM<S> {
    pub fn new(label: impl Into<String>, f: FieldFn<S>) -> Self {
        FieldAlongM {
            label: label.into(),
            f,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn jets(&self, pj: &PointJets<S>) -> Result<Vec<Jet3<S>>> {
        (self.f)(pj)
    }

    pub fn derivs(&self, pj: &PointJets<S>) -> Result<FieldDerivs<S>> {
        let w = self.jets(pj)?;
        if w.len() != pj.position.len() {
            return Err(Error::DimensionMismatch {
                expected: pj.position.len(),
                found: w.len(),
            });
        }
        if let Some(low) = w.iter().map(Jet3::order).min() {
            if low < 2 {
                return Err(Error::InsufficientOrder { have: low, need: 2 });
            }
        }
        let n = pj.point.len();
        Ok(FieldDerivs {
            value: w.iter().map(Jet3::value).collect(),
            d1: (0..n).map(|i| w.iter().map(|c| c.d1(i)).collect()).collect(),
            d2: (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| w.iter().map(|c| c.d2(i, j)).collect())
                        .collect()
                })
                .collect(),
        })
    }
}

/// Unit normal section `η` of an immersion.
#[derive(Clone, Debug)]
pub struct NormalSection<S> {
    field: FieldAlongM<S>,
}

/// How far a section is from being a unit normal at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SectionDefect<S> {
    /// `|‖η‖ − 1|`.
    pub unit: S,
    /// Largest `|⟨η, ∂_i f⟩|`, and `|⟨η, f⟩|` in a model view.
    pub normal: S,
}

impl<S: Real> NormalSection<S> {
    pub fn new(label: impl Into<String>, f: FieldFn<S>) -> Self {
        NormalSection {
            field: FieldAlongM::new(label, f),
        }
    }

    pub fn label(&self) -> &str {
        self.field.label()
    }

    pub fn field(&self) -> &FieldAlongM<S> {
        &self.field
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.field.label = label.into();
        self
    }

    /// `μ`, the position vector, a unit normal of a spherical immersion in
    /// the flat view.
    pub fn position() -> Self {
        NormalSection::new("mu", Arc::new(|pj: &PointJets<S>| Ok(pj.position.clone())))
    }

    /// A constant ambient vector.
    pub fn constant(label: impl Into<String>, v: Vec<S>) -> Self {
        NormalSection::new(
            label,
            Arc::new(move |pj: &PointJets<S>| {
                let d = pj.point.len();
                Ok(v.iter().map(|&x| Jet3::constant(x, d)).collect())
            }),
        )
    }

    /// `Σ c_k η_k` with constant coefficients.
    pub fn combination(label: impl Into<String>, parts: Vec<(S, NormalSection<S>)>) -> Self {
        NormalSection::new(
            label,
            Arc::new(move |pj: &PointJets<S>| {
                let mut acc: Option<Vec<Jet3<S>>> = None;
                for (c, s) in &parts {
                    let v: Vec<Jet3<S>> = s.field.jets(pj)?.iter().map(|x| x.scale(*c)).collect();
                    acc = Some(match acc {
                        None => v,
                        Some(a) => a.iter().zip(&v).map(|(x, y)| x + y).collect(),
                    });
                }
                acc.ok_or_else(|| Error::Contract("empty combination".into()))
            }),
        )
    }

    /// `cos φ · η_1 + sin φ · η_2` with a phase depending on the chart
    /// variables.
    pub fn rotation(
        label: impl Into<String>,
        first: NormalSection<S>,
        second: NormalSection<S>,
        phase: Phase<S>,
    ) -> Self {
        NormalSection::new(
            label,
            Arc::new(move |pj: &PointJets<S>| {
                let phi = phase(&pj.vars);
                let (c, s) = (phi.cos(), phi.sin());
                let a = first.field.jets(pj)?;
                let b = second.field.jets(pj)?;
                Ok(a.iter()
                    .zip(&b)
                    .map(|(x, y)| &(&c * x) + &(&s * y))
                    .collect())
            }),
        )
    }

    /// Deviation from the unit-normal contract at `p`.
    pub fn defect(&self, imm: &Immersion<S>, view: View, p: &[S]) -> Result<SectionDefect<S>> {
        view.check_compatible(imm.ambient())?;
        let pj = imm.jets_at(p)?;
        let sig = imm.signature();
        let eta: Vec<S> = self.field.jets(&pj)?.iter().map(Jet3::value).collect();
        let unit = (sig.inner(&eta, &eta).sqrt() - S::one()).abs();
        let mut normal = S::zero();
        for t in &pj.d1 {
            let t: Vec<S> = t.iter().map(Jet3::value).collect();
            normal = normal.max(sig.inner(&eta, &t).abs());
        }
        if view.is_model() {
            let f: Vec<S> = pj.position.iter().map(Jet3::value).collect();
            normal = normal.max(sig.inner(&eta, &f).abs());
        }
        Ok(SectionDefect { unit, normal })
    }
}

/// Smooth orthonormal normal fields obtained by projecting fixed ambient
/// vectors onto the normal space of the view and orthonormalising, all at
/// the jet level. Valid wherever the projected seeds stay independent.
pub fn projected_normal_frame<S: Real>(
    imm: &Immersion<S>,
    view: View,
    seeds: Vec<Vec<S>>,
) -> Result<Vec<NormalSection<S>>> {
    view.check_compatible(imm.ambient())?;
    let sig = imm.signature();
    let model = view.is_model();
    let m = imm.embedding_dim();
    if seeds.iter().any(|s| s.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: seeds.iter().map(Vec::len).find(|&l| l != m).unwrap_or(0),
        });
    }
    let count = seeds.len();
    let seeds = Arc::new(seeds);
    let build = move |pj: &PointJets<S>| -> Result<Vec<Vec<Jet3<S>>>> {
        let n = pj.point.len();
        let g: Vec<Vec<Jet3<S>>> = (0..n)
            .map(|i| (0..n).map(|j| sig.inner_jets(&pj.d1[i], &pj.d1[j])).collect())
            .collect();
        let ginv = linalg::inverse_spd_jets(&g)?;
        let q = sig.inner_jets(&pj.position, &pj.position);
        let mut out: Vec<Vec<Jet3<S>>> = Vec::with_capacity(seeds.len());
        for s in seeds.iter() {
            let mut w: Vec<Jet3<S>> = s.iter().map(|&x| Jet3::constant(x, n)).collect();
            let pairs: Vec<Jet3<S>> = pj.d1.iter().map(|t| sig.inner_jets(&w, t)).collect();
            for j in 0..n {
                let mut c = &ginv[j][0] * &pairs[0];
                for (i, pi) in pairs.iter().enumerate().skip(1) {
                    c = c + &ginv[j][i] * pi;
                }
                w = sub_scaled(&w, &c, &pj.d1[j]);
            }
            if model {
                let c = sig.inner_jets(&w, &pj.position).try_div(&q)?;
                w = sub_scaled(&w, &c, &pj.position);
            }
            for prev in &out {
                let c = sig.inner_jets(&w, prev);
                w = sub_scaled(&w, &c, prev);
            }
            let len = sig.inner_jets(&w, &w).sqrt().map_err(|_| {
                Error::Frame("projected normal seeds became dependent".into())
            })?;
            let inv = len.recip()?;
            out.push(w.iter().map(|x| x * &inv).collect());
        }
        Ok(out)
    };
    let build = Arc::new(build);
    Ok((0..count)
        .map(|k| {
            let b = Arc::clone(&build);
            NormalSection::new(
                format!("projected[{k}]"),
                Arc::new(move |pj: &PointJets<S>| Ok(b(pj)?.swap_remove(k))),
            )
        })
        .collect())
}

fn sub_scaled<S: Real>(w: &[Jet3<S>], c: &Jet3<S>, v: &[Jet3<S>]) -> Vec<Jet3<S>> {
    w.iter().zip(v).map(|(x, y)| x - &(c * y)).collect()
}
