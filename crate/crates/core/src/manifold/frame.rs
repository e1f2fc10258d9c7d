//! Pointwise frames, second fundamental form, shape operators and the
//! Simons operator.

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::linalg::{self, determinant, inverse, inverse_spd_jets, Matrix, Signature};
use crate::sampling::{sweep, SamplePlan};
use crate::scalar::{nan_max, Real};

use super::section::{FieldAlongM, FieldDerivs, NormalSection};
use super::{Immersion, PointJets, View};

/// Smallest admissible metric determinant.
const RANK_TOL: f64 = 1e-10;
/// A Gram–Schmidt seed is accepted in the first pass when its residual
/// has at least this length.
const SEED_ACCEPT: f64 = 0.25;
/// Tangential leakage tolerated by [`shape_operator`].
const NORMALITY_TOL: f64 = 1e-8;

/// Extrinsic data of an immersion at one chart point, in one ambient view.
#[derive(Clone, Debug)]
pub struct PointFrame<S> {
    pub view: View,
    pub signature: Signature,
    pub n: usize,
    pub point: Vec<S>,
    /// Position vector `f(p)` (the vector `μ` of a spherical immersion).
    pub position: Vec<S>,
    /// `∂_i f`.
    pub coord_tangents: Vec<Vec<S>>,
    /// `∂_i ∂_j f`.
    pub coord_hessian: Vec<Vec<Vec<S>>>,
    pub metric: Matrix<S>,
    pub metric_inv: Matrix<S>,
    /// `christoffel[k][i][j] = Γ^k_ij`.
    pub christoffel: Vec<Vec<Vec<S>>>,
    /// Orthonormal tangent frame `E_1..E_n`.
    pub tangent: Vec<Vec<S>>,
    /// `E_a = Σ_i tangent_coeffs[a][i] ∂_i f`.
    pub tangent_coeffs: Matrix<S>,
    /// Orthonormal frame of the normal space of the view.
    pub normal: Vec<Vec<S>>,
    /// `second_form[i][j] = B(∂_i, ∂_j)`.
    pub second_form: Vec<Vec<Vec<S>>>,
    /// Mean curvature vector `H⃗ = tr_g B / n`.
    pub mean_curvature: Vec<S>,
    /// `∂_i H⃗` (chart derivatives of the ambient components).
    pub mean_curvature_d1: Vec<Vec<S>>,
}

impl<S: Real> PointFrame<S> {
    pub fn inner(&self, a: &[S], b: &[S]) -> S {
        self.signature.inner(a, b)
    }

    pub fn embedding_dim(&self) -> usize {
        self.position.len()
    }

    /// Codimension in the view.
    pub fn codim(&self) -> usize {
        self.normal.len()
    }

    /// `⟨f, f⟩` in a model view (±1), `None` in the flat view.
    pub fn model_norm2(&self) -> Option<S> {
        if self.view.is_model() {
            Some(self.inner(&self.position, &self.position))
        } else {
            None
        }
    }

    /// Orthogonal projection onto the tangent space of the viewed ambient
    /// manifold (identity in the flat view).
    pub fn project_view(&self, v: &[S]) -> Vec<S> {
        match self.model_norm2() {
            Some(q) => {
                let c = self.inner(v, &self.position) / q;
                let mut out = v.to_vec();
                linalg::axpy(&mut out, -c, &self.position);
                out
            }
            None => v.to_vec(),
        }
    }

    /// `v^⊤`, the projection onto `T_pM`.
    pub fn tangent_part(&self, v: &[S]) -> Vec<S> {
        let mut out = linalg::zeros(v.len());
        for e in &self.tangent {
            linalg::axpy(&mut out, self.inner(v, e), e);
        }
        out
    }

    /// Projection onto the normal space of `M` in the viewed ambient.
    pub fn normal_part(&self, v: &[S]) -> Vec<S> {
        let w = self.project_view(v);
        linalg::sub(&w, &self.tangent_part(&w))
    }

    /// Chart coefficients `x^i` of a tangent vector `X = x^i ∂_i f`.
    pub fn chart_coords(&self, x: &[S]) -> Vec<S> {
        let pairings: Vec<S> = self
            .coord_tangents
            .iter()
            .map(|t| self.inner(x, t))
            .collect();
        linalg::mat_vec(&self.metric_inv, &pairings)
    }

    /// Ambient vector `Σ_i x^i ∂_i f`.
    pub fn push_forward(&self, coords: &[S]) -> Vec<S> {
        let mut out = linalg::zeros(self.embedding_dim());
        for (c, t) in coords.iter().zip(&self.coord_tangents) {
            linalg::axpy(&mut out, *c, t);
        }
        out
    }

    /// Gradient on `M` of a scalar with chart derivatives `d1`, as an
    /// ambient vector.
    pub fn gradient(&self, d1: &[S]) -> Vec<S> {
        let up = linalg::mat_vec(&self.metric_inv, d1);
        self.push_forward(&up)
    }

    /// Laplace–Beltrami `g^{ij}(∂_ij φ − Γ^k_ij ∂_k φ)` of a scalar given by
    /// its chart derivatives.
    pub fn laplace_beltrami(&self, d1: &[S], d2: &[Vec<S>]) -> S {
        let mut acc = S::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                let mut h = d2[i][j];
                for (k, dk) in d1.iter().enumerate() {
                    h = h - self.christoffel[k][i][j] * *dk;
                }
                acc = acc + self.metric_inv[i][j] * h;
            }
        }
        acc
    }

    /// Laplace–Beltrami of a scalar jet (valid through order 2).
    pub fn laplace_beltrami_jet(&self, phi: &Jet3<S>) -> S {
        let d1 = phi.gradient();
        let d2: Vec<Vec<S>> = (0..self.n)
            .map(|i| (0..self.n).map(|j| phi.d2(i, j)).collect())
            .collect();
        self.laplace_beltrami(&d1, &d2)
    }

    /// `∇_{∂_i} W = P(∂_i W)`.
    pub fn covariant(&self, w: &FieldDerivs<S>, i: usize) -> Vec<S> {
        self.project_view(&w.d1[i])
    }

    /// `∇_X W` for a tangent vector `X` given by chart coefficients.
    pub fn covariant_along(&self, w: &FieldDerivs<S>, coords: &[S]) -> Vec<S> {
        let mut d = linalg::zeros(self.embedding_dim());
        for (c, di) in coords.iter().zip(&w.d1) {
            linalg::axpy(&mut d, *c, di);
        }
        self.project_view(&d)
    }

    /// `∇_{∂_i} ∇_{∂_j} W`.
    pub fn second_covariant(&self, w: &FieldDerivs<S>, i: usize, j: usize) -> Vec<S> {
        let mut out = self.project_view(&w.d2[i][j]);
        if let Some(q) = self.model_norm2() {
            let c = self.inner(&w.d1[j], &self.position) / q;
            linalg::axpy(&mut out, -c, &self.coord_tangents[i]);
        }
        out
    }

    /// Rough Laplacian `g^{ij}(∇_i∇_j W − Γ^k_ij ∇_k W)`.
    pub fn rough_laplacian(&self, w: &FieldDerivs<S>) -> Vec<S> {
        let m = self.embedding_dim();
        let first: Vec<Vec<S>> = (0..self.n).map(|k| self.covariant(w, k)).collect();
        let mut out = linalg::zeros(m);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut h = self.second_covariant(w, i, j);
                for (k, fk) in first.iter().enumerate() {
                    linalg::axpy(&mut h, -self.christoffel[k][i][j], fk);
                }
                linalg::axpy(&mut out, self.metric_inv[i][j], &h);
            }
        }
        out
    }

    /// `B(X, Y)` for tangent vectors given by chart coefficients.
    pub fn second_form_at(&self, x: &[S], y: &[S]) -> Vec<S> {
        let mut out = linalg::zeros(self.embedding_dim());
        for i in 0..self.n {
            for j in 0..self.n {
                linalg::axpy(&mut out, x[i] * y[j], &self.second_form[i][j]);
            }
        }
        out
    }

    /// `‖B‖² = Σ_ab ‖B(E_a, E_b)‖²`.
    pub fn second_form_norm2(&self) -> S {
        let mut acc = S::zero();
        for a in &self.tangent_coeffs {
            for b in &self.tangent_coeffs {
                let v = self.second_form_at(a, b);
                acc = acc + self.inner(&v, &v);
            }
        }
        acc
    }

    /// Gradient on `M` of the scalar `⟨H⃗, η⟩`, as an ambient vector.
    pub fn grad_mean_pairing(&self, eta: &FieldDerivs<S>) -> Vec<S> {
        let d1: Vec<S> = (0..self.n)
            .map(|i| {
                self.inner(&self.mean_curvature_d1[i], &eta.value)
                    + self.inner(&self.mean_curvature, &eta.d1[i])
            })
            .collect();
        self.gradient(&d1)
    }
}

/// Matrix of `⟨S_{η_a}, S_{η_b}⟩` in a normal basis `η_1..η_r`.
#[derive(Clone, Debug, PartialEq)]
pub struct SimonsMatrix<S> {
    pub entries: Matrix<S>,
    /// The normal basis the entries refer to.
    pub basis: Vec<Vec<S>>,
}

impl<S: Real> SimonsMatrix<S> {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn eigen(&self) -> linalg::SymmetricEigen<S> {
        linalg::symmetric_eigen(&self.entries)
    }

    /// Ambient vector with the given coordinates in [`SimonsMatrix::basis`].
    pub fn vector(&self, coords: &[S]) -> Vec<S> {
        let mut out = linalg::zeros(self.basis[0].len());
        for (c, b) in coords.iter().zip(&self.basis) {
            linalg::axpy(&mut out, *c, b);
        }
        out
    }
}

/// Chart jets and the frame at one point. Fields along `M` are evaluated
/// against the same jets.
pub(crate) struct Probe<S> {
    pub pj: PointJets<S>,
    pub frame: PointFrame<S>,
}

impl<S: Real> Probe<S> {
    pub fn new(imm: &Immersion<S>, view: View, p: &[S]) -> Result<Self> {
        view.check_compatible(imm.ambient())?;
        let pj = imm.jets_at(p)?;
        let frame = build_frame(imm, view, &pj)?;
        Ok(Probe { pj, frame })
    }

    pub fn field(&self, w: &FieldAlongM<S>) -> Result<FieldDerivs<S>> {
        w.derivs(&self.pj)
    }

    pub fn section(&self, eta: &NormalSection<S>) -> Result<FieldDerivs<S>> {
        eta.field().derivs(&self.pj)
    }
}

fn values<S: Real>(v: &[Jet3<S>]) -> Vec<S> {
    v.iter().map(Jet3::value).collect()
}

fn build_frame<S: Real>(imm: &Immersion<S>, view: View, pj: &PointJets<S>) -> Result<PointFrame<S>> {
    let n = imm.n();
    let m = imm.embedding_dim();
    let sig = imm.signature();
    let position = values(&pj.position);
    let coord_tangents: Vec<Vec<S>> = pj.d1.iter().map(|v| values(v)).collect();
    let coord_hessian: Vec<Vec<Vec<S>>> = pj
        .d2
        .iter()
        .map(|row| row.iter().map(|v| values(v)).collect())
        .collect();

    let metric: Matrix<S> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| sig.inner(&coord_tangents[i], &coord_tangents[j]))
                .collect()
        })
        .collect();
    let det = determinant(&metric);
    if !(det >= S::lit(RANK_TOL)) {
        return Err(Error::Rank(format!(
            "metric determinant {det} at {:?} is below {RANK_TOL:e}",
            pj.point
        )));
    }
    let metric_inv = inverse(&metric)?;

    // jet-level metric data; H⃗ is needed together with its first derivatives
    let g_jets: Vec<Vec<Jet3<S>>> = (0..n)
        .map(|i| (0..n).map(|j| sig.inner_jets(&pj.d1[i], &pj.d1[j])).collect())
        .collect();
    let ginv_jets = inverse_spd_jets(&g_jets)?;
    let lower: Vec<Vec<Vec<Jet3<S>>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|l| sig.inner_jets(&pj.d2[i][j], &pj.d1[l])).collect())
                .collect()
        })
        .collect();
    let mut gamma_jets: Vec<Vec<Vec<Jet3<S>>>> = Vec::with_capacity(n);
    for k in 0..n {
        let mut gk = Vec::with_capacity(n);
        for i in 0..n {
            let mut row = Vec::with_capacity(n);
            for j in 0..n {
                let mut acc = &ginv_jets[k][0] * &lower[i][j][0];
                for l in 1..n {
                    acc = acc + &ginv_jets[k][l] * &lower[i][j][l];
                }
                row.push(acc);
            }
            gk.push(row);
        }
        gamma_jets.push(gk);
    }
    let christoffel: Vec<Vec<Vec<S>>> = gamma_jets
        .iter()
        .map(|gk| gk.iter().map(|row| values(row)).collect())
        .collect();

    // Δf = g^{ij}(∂_ij f − Γ^k_ij ∂_k f), as jets
    let mut lap: Vec<Jet3<S>> = (0..m).map(|_| Jet3::constant(S::zero(), n)).collect();
    for i in 0..n {
        for j in 0..n {
            for a in 0..m {
                let mut x = pj.d2[i][j][a].clone();
                for k in 0..n {
                    x = x - &gamma_jets[k][i][j] * &pj.d1[k][a];
                }
                lap[a] = &lap[a] + &ginv_jets[i][j] * &x;
            }
        }
    }
    let inv_n = S::one() / S::from_count(n);
    let mut h_jets: Vec<Jet3<S>> = lap.iter().map(|c| c.scale(inv_n)).collect();
    let model_q = if view.is_model() {
        Some(sig.inner(&position, &position))
    } else {
        None
    };
    if let Some(q) = model_q {
        let c = sig.inner_jets(&h_jets, &pj.position).scale(S::one() / q);
        h_jets = h_jets
            .iter()
            .zip(&pj.position)
            .map(|(h, f)| h - &(&c * f))
            .collect();
    }
    let mean_curvature = values(&h_jets);
    let mean_curvature_d1: Vec<Vec<S>> = (0..n)
        .map(|i| h_jets.iter().map(|h| h.d1(i)).collect())
        .collect();

    let second_form: Vec<Vec<Vec<S>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let mut x = coord_hessian[i][j].clone();
                    for k in 0..n {
                        linalg::axpy(&mut x, -christoffel[k][i][j], &coord_tangents[k]);
                    }
                    if let Some(q) = model_q {
                        let c = sig.inner(&x, &position) / q;
                        linalg::axpy(&mut x, -c, &position);
                    }
                    x
                })
                .collect()
        })
        .collect();

    // orthonormal tangent frame by Gram–Schmidt on ∂_1 f, …, ∂_n f
    let mut tangent: Vec<Vec<S>> = Vec::with_capacity(n);
    let mut tangent_coeffs: Matrix<S> = Vec::with_capacity(n);
    for i in 0..n {
        let mut v = coord_tangents[i].clone();
        let mut c = linalg::zeros(n);
        c[i] = S::one();
        for _ in 0..2 {
            for (e, ce) in tangent.iter().zip(&tangent_coeffs) {
                let t = sig.inner(&v, e);
                linalg::axpy(&mut v, -t, e);
                linalg::axpy(&mut c, -t, ce);
            }
        }
        let len = sig.inner(&v, &v);
        if !(len > S::zero()) {
            return Err(Error::Rank("tangent vectors are not spacelike".into()));
        }
        let inv = S::one() / len.sqrt();
        tangent.push(linalg::scaled(&v, inv));
        tangent_coeffs.push(linalg::scaled(&c, inv));
    }

    let codim = m - n - usize::from(view.is_model());
    let normal = normal_frame(sig, &position, model_q, &tangent, codim)?;

    Ok(PointFrame {
        view,
        signature: sig,
        n,
        point: pj.point.clone(),
        position,
        coord_tangents,
        coord_hessian,
        metric,
        metric_inv,
        christoffel,
        tangent,
        tangent_coeffs,
        normal,
        second_form,
        mean_curvature,
        mean_curvature_d1,
    })
}

/// Residual of `v` after removing tangent, position (model views) and the
/// already accepted normal directions.
fn residual<S: Real>(
    sig: Signature,
    v: &[S],
    position: &[S],
    model_q: Option<S>,
    tangent: &[Vec<S>],
    accepted: &[Vec<S>],
) -> Vec<S> {
    let mut w = v.to_vec();
    for _ in 0..2 {
        if let Some(q) = model_q {
            let c = sig.inner(&w, position) / q;
            linalg::axpy(&mut w, -c, position);
        }
        for e in tangent.iter().chain(accepted) {
            let c = sig.inner(&w, e);
            linalg::axpy(&mut w, -c, e);
        }
    }
    w
}

/// Gram–Schmidt of the coordinate basis against the tangent space (and the
/// position vector in a model view). Seeds are tried in the order
/// `e_1..e_m` and kept when their residual has length at least 1/4. If
/// that leaves the frame incomplete, the frame is rebuilt by always taking
/// the seed with the largest residual.
fn normal_frame<S: Real>(
    sig: Signature,
    position: &[S],
    model_q: Option<S>,
    tangent: &[Vec<S>],
    codim: usize,
) -> Result<Vec<Vec<S>>> {
    let m = position.len();
    let basis = |k: usize| {
        let mut e = linalg::zeros::<S>(m);
        e[k] = S::one();
        e
    };
    let len = |w: &[S]| sig.inner(w, w).max(S::zero()).sqrt();

    let mut out: Vec<Vec<S>> = Vec::with_capacity(codim);
    for k in 0..m {
        if out.len() == codim {
            break;
        }
        let w = residual(sig, &basis(k), position, model_q, tangent, &out);
        let l = len(&w);
        if l >= S::lit(SEED_ACCEPT) {
            out.push(linalg::scaled(&w, S::one() / l));
        }
    }
    if out.len() == codim {
        return Ok(out);
    }

    out.clear();
    while out.len() < codim {
        let mut best: Option<(S, Vec<S>)> = None;
        for k in 0..m {
            let w = residual(sig, &basis(k), position, model_q, tangent, &out);
            let l = len(&w);
            if best.as_ref().is_none_or(|(b, _)| l > *b) {
                best = Some((l, w));
            }
        }
        let (l, w) = best.expect("nonempty basis");
        if !(l > S::lit(1e-8)) {
            return Err(Error::Frame(format!(
                "normal Gram–Schmidt exhausted after {} of {codim} vectors",
                out.len()
            )));
        }
        out.push(linalg::scaled(&w, S::one() / l));
    }
    Ok(out)
}

/// Metric, Christoffels, orthonormal frames, second fundamental form and
/// mean curvature vector of `imm` at chart point `p`.
pub fn frame_at<S: Real>(imm: &Immersion<S>, view: View, p: &[S]) -> Result<PointFrame<S>> {
    Ok(Probe::new(imm, view, p)?.frame)
}

/// `S_η` in the orthonormal tangent frame: `(S_η)_ab = ⟨B(E_a, E_b), η⟩`.
pub fn shape_operator<S: Real>(frame: &PointFrame<S>, eta: &[S]) -> Result<Matrix<S>> {
    let mut leak = S::zero();
    for e in &frame.tangent {
        leak = leak + frame.inner(eta, e).powi(2);
    }
    let mut leak = leak.sqrt();
    if frame.view.is_model() {
        leak = leak + frame.inner(eta, &frame.position).abs();
    }
    if !(leak <= S::lit(NORMALITY_TOL)) {
        return Err(Error::Contract(format!(
            "shape operator needs a normal vector; tangential component {leak:e}"
        )));
    }
    Ok(shape_unchecked(frame, eta))
}

fn shape_unchecked<S: Real>(frame: &PointFrame<S>, eta: &[S]) -> Matrix<S> {
    let c = &frame.tangent_coeffs;
    (0..frame.n)
        .map(|a| {
            (0..frame.n)
                .map(|b| frame.inner(&frame.second_form_at(&c[a], &c[b]), eta))
                .collect()
        })
        .collect()
}

fn hilbert_schmidt<S: Real>(a: &Matrix<S>, b: &Matrix<S>) -> S {
    let mut acc = S::zero();
    for (ra, rb) in a.iter().zip(b) {
        for (&x, &y) in ra.iter().zip(rb) {
            acc = acc + x * y;
        }
    }
    acc
}

/// Simons matrix in the frame's own normal basis.
pub fn simons_matrix<S: Real>(frame: &PointFrame<S>) -> SimonsMatrix<S> {
    simons_matrix_in_basis(frame, &frame.normal).expect("frame normals are normal")
}

/// Simons matrix in a caller-supplied normal basis (for example `{ν, μ}`).
pub fn simons_matrix_in_basis<S: Real>(
    frame: &PointFrame<S>,
    basis: &[Vec<S>],
) -> Result<SimonsMatrix<S>> {
    let shapes = basis
        .iter()
        .map(|b| shape_operator(frame, b))
        .collect::<Result<Vec<_>>>()?;
    let entries = shapes
        .iter()
        .map(|sa| shapes.iter().map(|sb| hilbert_schmidt(sa, sb)).collect())
        .collect();
    Ok(SimonsMatrix {
        entries,
        basis: basis.to_vec(),
    })
}

/// Coordinates of `B̃η` in the frame's normal basis, given the coordinates
/// of `η` in that basis.
pub fn simons_apply<S: Real>(frame: &PointFrame<S>, eta_coords: &[S]) -> Vec<S> {
    linalg::mat_vec(&simons_matrix(frame).entries, eta_coords)
}

/// Ambient vector `B̃η` for an ambient normal vector `η`, using
/// `B̃η = Σ_b ⟨S_η, S_{ν_b}⟩ ν_b` over the frame normals.
pub(crate) fn simons_vector<S: Real>(frame: &PointFrame<S>, eta: &[S]) -> Vec<S> {
    let se = shape_unchecked(frame, eta);
    let mut out = linalg::zeros(frame.embedding_dim());
    for nb in &frame.normal {
        let c = hilbert_schmidt(&se, &shape_unchecked(frame, nb));
        linalg::axpy(&mut out, c, nb);
    }
    out
}

/// `(∇_X η)^⊥` at chart point `p` for a tangent vector `X` (ambient
/// coordinates).
pub fn normal_connection<S: Real>(
    imm: &Immersion<S>,
    view: View,
    section: &NormalSection<S>,
    p: &[S],
    direction: &[S],
) -> Result<Vec<S>> {
    let probe = Probe::new(imm, view, p)?;
    let eta = probe.section(section)?;
    let coords = probe.frame.chart_coords(direction);
    let d = probe.frame.covariant_along(&eta, &coords);
    Ok(probe.frame.normal_part(&d))
}

/// `max_a ‖(∇_{E_a} η)^⊥‖` at one point.
pub(crate) fn parallel_residual<S: Real>(frame: &PointFrame<S>, eta: &FieldDerivs<S>) -> S {
    frame
        .tangent_coeffs
        .iter()
        .map(|c| linalg::norm(&frame.normal_part(&frame.covariant_along(eta, c))))
        .fold(S::zero(), nan_max)
}

/// Outcome of [`is_parallel`].
#[derive(Clone, Debug, PartialEq)]
pub struct ParallelReport<S> {
    pub max_residual: S,
    pub samples: usize,
    pub tolerance: S,
    pub parallel: bool,
}

/// Checks `(∇_{E_a} η)^⊥ = 0` over a sample plan.
pub fn is_parallel<S: Real>(
    imm: &Immersion<S>,
    view: View,
    section: &NormalSection<S>,
    plan: &SamplePlan<S>,
    tolerance: S,
) -> Result<ParallelReport<S>> {
    let sw = sweep(plan, |p| {
        let probe = Probe::new(imm, view, p)?;
        let eta = probe.section(section)?;
        Ok(parallel_residual(&probe.frame, &eta))
    })?;
    let max_residual = sw.max();
    Ok(ParallelReport {
        max_residual,
        samples: plan.len(),
        tolerance,
        parallel: max_residual <= tolerance,
    })
}

/// `Ric^⊥(η) = c n η` in normal-frame coordinates.
pub fn normal_ricci<S: Real>(view: View, n: usize, eta_coords: &[S]) -> Vec<S> {
    let k = S::from_i32(view.curvature()).unwrap() * S::from_count(n);
    eta_coords.iter().map(|&x| k * x).collect()
}

/// Dimension of the span of `{B(∂_i, ∂_j)}`: singular values of the
/// normal-coordinate matrix above `threshold`.
pub fn second_form_rank<S: Real>(frame: &PointFrame<S>, threshold: S) -> usize {
    let r = frame.codim();
    let mut gram = vec![vec![S::zero(); r]; r];
    for i in 0..frame.n {
        for j in i..frame.n {
            let b = &frame.second_form[i][j];
            let coords: Vec<S> = frame.normal.iter().map(|nu| frame.inner(b, nu)).collect();
            for a in 0..r {
                for c in 0..r {
                    gram[a][c] = gram[a][c] + coords[a] * coords[c];
                }
            }
        }
    }
    linalg::symmetric_eigen(&gram)
        .values
        .iter()
        .filter(|&&v| v.max(S::zero()).sqrt() > threshold)
        .count()
}
