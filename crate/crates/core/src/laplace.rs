//! Rough Laplacians along an immersion, Killing fields, Gauss-map
//! Laplacians and the lemma-level identities built on them.
//!
//! All second-order quantities come from the chart jets of the immersion
//! and of the field in question. Ambient covariant derivatives are the flat
//! derivatives of the embedding space followed by the model projection
//! (see [`PointFrame::second_covariant`]).

use std::sync::Arc;

use rand::Rng;

use crate::cayley_dickson::{right_translation_matrix, CDNumber};
use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::linalg::{self, Matrix};
use crate::manifold::{
    parallel_residual, shape_operator, simons_vector, FieldAlongM, FieldDerivs, Immersion,
    NormalSection, PointFrame, PointJets, Probe, View,
};
use crate::scalar::Real;

/// Tolerance on `A^T G + G A = 0` and `Re(v) = 0`.
pub const KILLING_TOL: f64 = 1e-12;

/// Parallelism demanded by identities that assume `∇^⊥η = 0`.
pub const PARALLEL_TOL: f64 = 1e-9;

/// Largest accepted `|‖η‖ − 1|` and tangential (or radial) leak of a
/// normal section.
pub const SECTION_TOL: f64 = 1e-8;

/// A Killing field of a model space, restricted to a linear (plus
/// translation) map of the embedding space.
#[derive(Clone, Debug, PartialEq)]
pub enum KillingField<S> {
    /// `V(p) = A p + b` with `A` skew.
    Euclidean { a: Matrix<S>, b: Vec<S> },
    /// `V(p) = A p` with `A` skew.
    Spherical { a: Matrix<S> },
    /// `V(p) = A p` with `A^T G + G A = 0`, `G = diag(1, …, 1, −1)`.
    Hyperbolic { a: Matrix<S> },
    /// `V(x) = x · v` for an imaginary octonion `v`.
    Octonionic { v: Vec<S> },
}

fn check_square<S: Real>(a: &Matrix<S>) -> Result<usize> {
    let m = a.len();
    if m == 0 {
        return Err(Error::Contract("empty Killing matrix".into()));
    }
    if let Some(row) = a.iter().find(|r| r.len() != m) {
        return Err(Error::DimensionMismatch {
            expected: m,
            found: row.len(),
        });
    }
    Ok(m)
}

/// `max |(A^T G + G A)_ij|` for `G = diag(g)`.
fn skew_defect<S: Real>(a: &Matrix<S>, g: &[S]) -> S {
    let m = a.len();
    let mut worst = S::zero();
    for i in 0..m {
        for j in 0..m {
            worst = worst.max((a[j][i] * g[j] + g[i] * a[i][j]).abs());
        }
    }
    worst
}

fn euclid<S: Real>(m: usize) -> Vec<S> {
    vec![S::one(); m]
}

fn minkowski<S: Real>(m: usize) -> Vec<S> {
    let mut g = vec![S::one(); m];
    g[m - 1] = -S::one();
    g
}

fn require_skew<S: Real>(a: &Matrix<S>, g: &[S], what: &str) -> Result<()> {
    let d = skew_defect(a, g);
    if d <= S::lit(KILLING_TOL) {
        Ok(())
    } else {
        Err(Error::Contract(format!("{what} matrix is not skew: defect {d:e}")))
    }
}

fn random_skew<S: Real, R: Rng + ?Sized>(m: usize, rng: &mut R) -> Matrix<S> {
    let mut a = vec![vec![S::zero(); m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let x = S::lit(rng.gen_range(-1.0..1.0));
            a[i][j] = x;
            a[j][i] = -x;
        }
    }
    a
}

impl<S: Real> KillingField<S> {
    pub fn euclidean(a: Matrix<S>, b: Vec<S>) -> Result<Self> {
        let m = check_square(&a)?;
        if b.len() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: b.len(),
            });
        }
        require_skew(&a, &euclid(m), "Euclidean Killing")?;
        Ok(KillingField::Euclidean { a, b })
    }

    pub fn spherical(a: Matrix<S>) -> Result<Self> {
        let m = check_square(&a)?;
        require_skew(&a, &euclid(m), "spherical Killing")?;
        Ok(KillingField::Spherical { a })
    }

    pub fn hyperbolic(a: Matrix<S>) -> Result<Self> {
        let m = check_square(&a)?;
        require_skew(&a, &minkowski(m), "Lorentz Killing")?;
        Ok(KillingField::Hyperbolic { a })
    }

    pub fn octonionic(v: Vec<S>) -> Result<Self> {
        if v.len() != 8 {
            return Err(Error::DimensionMismatch {
                expected: 8,
                found: v.len(),
            });
        }
        if v[0].abs() > S::lit(KILLING_TOL) {
            return Err(Error::Contract(format!(
                "octonionic Killing vector needs Re(v) = 0, got {}",
                v[0]
            )));
        }
        Ok(KillingField::Octonionic { v })
    }

    pub fn random_euclidean<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let a = random_skew(m, rng);
        let b = (0..m).map(|_| S::lit(rng.gen_range(-1.0..1.0))).collect();
        KillingField::Euclidean { a, b }
    }

    pub fn random_spherical<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        KillingField::Spherical {
            a: random_skew(m, rng),
        }
    }

    /// `A = G K` with `K` skew, so `A^T G + G A = K^T + K = 0`.
    pub fn random_hyperbolic<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Self {
        let mut a: Matrix<S> = random_skew(m, rng);
        for x in a[m - 1].iter_mut() {
            *x = -*x;
        }
        KillingField::Hyperbolic { a }
    }

    pub fn random_octonionic<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let mut v: Vec<S> = (0..8).map(|_| S::lit(rng.gen_range(-1.0..1.0))).collect();
        v[0] = S::zero();
        KillingField::Octonionic { v }
    }

    /// Linear part as a matrix of the embedding space.
    pub fn matrix(&self) -> Matrix<S> {
        match self {
            KillingField::Euclidean { a, .. }
            | KillingField::Spherical { a }
            | KillingField::Hyperbolic { a } => a.clone(),
            KillingField::Octonionic { v } => {
                let v = CDNumber::new(v.clone()).expect("eight coefficients");
                right_translation_matrix(&v)
            }
        }
    }

    pub fn translation(&self) -> Option<&[S]> {
        match self {
            KillingField::Euclidean { b, .. } => Some(b),
            _ => None,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            KillingField::Euclidean { a, .. }
            | KillingField::Spherical { a }
            | KillingField::Hyperbolic { a } => a.len(),
            KillingField::Octonionic { .. } => 8,
        }
    }

    /// Derivative of `V` along an ambient vector `w`: `A w`.
    pub fn linear(&self, w: &[S]) -> Vec<S> {
        linalg::mat_vec(&self.matrix(), w)
    }

    pub fn value(&self, x: &[S]) -> Vec<S> {
        let mut v = self.linear(x);
        if let Some(b) = self.translation() {
            v = linalg::add(&v, b);
        }
        v
    }

    /// The views in which `V` is a Killing field of the ambient.
    pub fn supports(&self, view: View) -> bool {
        match self {
            KillingField::Euclidean { .. } => view == View::Flat,
            KillingField::Spherical { .. } | KillingField::Octonionic { .. } => {
                matches!(view, View::Flat | View::Sphere)
            }
            KillingField::Hyperbolic { .. } => view == View::Hyperbolic,
        }
    }

    /// `V ∘ f` as a field along the immersion.
    pub fn field(&self) -> FieldAlongM<S> {
        let a = self.matrix();
        let b = self.translation().map(<[S]>::to_vec);
        FieldAlongM::new(
            "killing",
            Arc::new(move |pj: &PointJets<S>| {
                let x = &pj.position;
                if x.len() != a.len() {
                    return Err(Error::DimensionMismatch {
                        expected: a.len(),
                        found: x.len(),
                    });
                }
                let d = pj.point.len();
                Ok(a.iter()
                    .enumerate()
                    .map(|(i, row)| {
                        let mut acc =
                            Jet3::constant(b.as_ref().map_or(S::zero(), |b| b[i]), d);
                        for (c, xj) in row.iter().zip(x) {
                            if *c != S::zero() {
                                acc = acc + xj.scale(*c);
                            }
                        }
                        acc
                    })
                    .collect())
            }),
        )
    }

    fn require(&self, view: View) -> Result<()> {
        if self.supports(view) {
            Ok(())
        } else {
            Err(Error::Contract(format!(
                "this Killing field is not a Killing field of the {view:?} view"
            )))
        }
    }
}

fn curvature<S: Real>(view: View) -> S {
    S::from_i32(view.curvature()).expect("small integer")
}

/// `Ric_M(Z, W) = c (n⟨Z, W⟩ − ⟨Z^⊤, W^⊤⟩)` for ambient vectors in the
/// view's tangent space.
pub fn ambient_ricci<S: Real>(frame: &PointFrame<S>, z: &[S], w: &[S]) -> S {
    let c: S = curvature(frame.view);
    if c == S::zero() {
        return S::zero();
    }
    let n = S::from_count(frame.n);
    c * (n * frame.inner(z, w) - frame.inner(&frame.tangent_part(z), &frame.tangent_part(w)))
}

/// `∇_X V = P(A X)` for a Killing field and ambient `X`.
fn killing_derivative<S: Real>(frame: &PointFrame<S>, v: &KillingField<S>, x: &[S]) -> Vec<S> {
    frame.project_view(&v.linear(x))
}

/// `∇²W` at `p`.
pub fn rough_laplacian<S: Real>(
    imm: &Immersion<S>,
    view: View,
    w: &FieldAlongM<S>,
    p: &[S],
) -> Result<Vec<S>> {
    let probe = Probe::new(imm, view, p)?;
    let d = probe.field(w)?;
    Ok(probe.frame.rough_laplacian(&d))
}

/// `|∇²V − RHS|` for the closed form of the view.
#[derive(Clone, Debug, PartialEq)]
pub struct KillingCheck<S> {
    pub residual: S,
    /// `‖∇²V‖`, to show the identity is not vacuous.
    pub magnitude: S,
}

/// Checks `∇²V = n∇_{H⃗}V − c(nV − V^⊤)`: the flat, spherical and
/// hyperbolic closed forms in one expression.
pub fn killing_residual<S: Real>(
    imm: &Immersion<S>,
    view: View,
    v: &KillingField<S>,
    p: &[S],
) -> Result<KillingCheck<S>> {
    v.require(view)?;
    let probe = Probe::new(imm, view, p)?;
    let frame = &probe.frame;
    let w = probe.field(&v.field())?;
    let lhs = frame.rough_laplacian(&w);
    let n = S::from_count(frame.n);
    let c: S = curvature(view);
    let mut rhs = linalg::scaled(&killing_derivative(frame, v, &frame.mean_curvature), n);
    if c != S::zero() {
        let vt = frame.tangent_part(&w.value);
        for a in 0..rhs.len() {
            rhs[a] = rhs[a] - c * (n * w.value[a] - vt[a]);
        }
    }
    Ok(KillingCheck {
        residual: linalg::norm(&linalg::sub(&lhs, &rhs)),
        magnitude: linalg::norm(&lhs),
    })
}

/// `(∇_{E_b}η)^⊥` for every orthonormal tangent direction.
fn normal_derivatives<S: Real>(frame: &PointFrame<S>, eta: &FieldDerivs<S>) -> Vec<Vec<S>> {
    frame
        .tangent_coeffs
        .iter()
        .map(|c| frame.normal_part(&frame.covariant_along(eta, c)))
        .collect()
}

/// `tr(S_{∇^⊥η}(X)) = Σ_b ⟨B(X, E_b), ∇^⊥_{E_b}η⟩` for `X` in chart
/// coordinates.
fn shape_trace<S: Real>(frame: &PointFrame<S>, nd: &[Vec<S>], x_coords: &[S]) -> S {
    frame
        .tangent_coeffs
        .iter()
        .zip(nd)
        .fold(S::zero(), |acc, (cb, db)| {
            acc + frame.inner(&frame.second_form_at(x_coords, cb), db)
        })
}

/// Terms of the tangent-part identity, maximised over the frame
/// directions.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentPartCheck<S> {
    pub residual: S,
    /// `max |⟨∇²η, E_a⟩|`.
    pub lhs: S,
    /// `max |Ric_M(η, E_a)|`.
    pub ricci: S,
    /// `max |n⟨grad⟨H⃗, η⟩, E_a⟩|`.
    pub gradient: S,
    /// `max |n⟨H⃗, ∇_{E_a}η⟩|`.
    pub mean: S,
    /// `max |2 tr(S_{∇^⊥η}(E_a))|`.
    pub shape: S,
}

/// `⟨∇²η, X⟩ = Ric_M(η, X) − n⟨grad⟨H⃗,η⟩, X⟩ + n⟨H⃗, ∇_Xη⟩
/// − 2 tr(S_{∇^⊥η}(X))` along each `E_a`.
pub fn check_tangent_part<S: Real>(
    imm: &Immersion<S>,
    view: View,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<TangentPartCheck<S>> {
    let probe = Probe::new(imm, view, p)?;
    let frame = &probe.frame;
    let e = section_at(&probe, eta)?;
    let lap = frame.rough_laplacian(&e);
    let grad = frame.grad_mean_pairing(&e);
    let nd = normal_derivatives(frame, &e);
    let n = S::from_count(frame.n);
    let two = S::lit(2.0);
    let mut out = TangentPartCheck {
        residual: S::zero(),
        lhs: S::zero(),
        ricci: S::zero(),
        gradient: S::zero(),
        mean: S::zero(),
        shape: S::zero(),
    };
    for (ea, ca) in frame.tangent.iter().zip(&frame.tangent_coeffs) {
        let lhs = frame.inner(&lap, ea);
        let ric = ambient_ricci(frame, &e.value, ea);
        let g = n * frame.inner(&grad, ea);
        let h = n * frame.inner(&frame.mean_curvature, &frame.covariant_along(&e, ca));
        let s = two * shape_trace(frame, &nd, ca);
        let res = (lhs - (ric - g + h - s)).abs();
        out.residual = out.residual.max(res);
        out.lhs = out.lhs.max(lhs.abs());
        out.ricci = out.ricci.max(ric.abs());
        out.gradient = out.gradient.max(g.abs());
        out.mean = out.mean.max(h.abs());
        out.shape = out.shape.max(s.abs());
    }
    Ok(out)
}

/// Checks the unit-normal contract of `η` in the frame's view.
fn section_at<S: Real>(probe: &Probe<S>, eta: &NormalSection<S>) -> Result<FieldDerivs<S>> {
    let e = probe.section(eta)?;
    let frame = &probe.frame;
    let unit = (frame.inner(&e.value, &e.value).sqrt() - S::one()).abs();
    let leak = linalg::norm(&linalg::sub(&e.value, &frame.normal_part(&e.value)));
    if !(unit <= S::lit(SECTION_TOL) && leak <= S::lit(SECTION_TOL)) {
        return Err(Error::Contract(format!(
            "{} is not a unit normal in the {:?} view: |‖η‖−1| = {unit:e}, off-normal part {leak:e}",
            eta.label(),
            frame.view
        )));
    }
    Ok(e)
}

fn require_parallel<S: Real>(frame: &PointFrame<S>, eta: &FieldDerivs<S>, what: &str) -> Result<()> {
    let r = parallel_residual(frame, eta);
    if r <= S::lit(PARALLEL_TOL) {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "{what} needs a parallel normal section; ‖∇^⊥η‖ = {r:e}"
        )))
    }
}

/// `‖(∇²η)^⊥ + B̃η‖` for a parallel section.
pub fn check_n2eta<S: Real>(
    imm: &Immersion<S>,
    view: View,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<S> {
    let probe = Probe::new(imm, view, p)?;
    let frame = &probe.frame;
    let e = section_at(&probe, eta)?;
    require_parallel(frame, &e, "(∇²η)^⊥ = −B̃η")?;
    let lap = frame.normal_part(&frame.rough_laplacian(&e));
    let bt = simons_vector(frame, &e.value);
    Ok(linalg::norm(&linalg::add(&lap, &bt)))
}

/// Residuals of the Killing pairing identities at one point.
#[derive(Clone, Debug, PartialEq)]
pub struct PairingCheck<S> {
    /// `−⟨∇²V, η⟩ = Ric_M(η, V) + n⟨H⃗, ∇_ηV⟩`.
    pub eq_a: S,
    /// Laplacian of `f = ⟨η, V⟩` against the seven-term expansion.
    pub eq_lemma: S,
    /// `−Δf = n⟨grad⟨H⃗,η⟩, V⟩ + n⟨H⃗, ∇_ηV⟩ + ⟨B̃η, V⟩ + ⟨Ric^⊥η, V⟩`,
    /// only for parallel `η`.
    pub eq_useful: Option<S>,
    /// `|Δ_M f|`.
    pub laplacian: S,
}

pub fn check_killing_pairing<S: Real>(
    imm: &Immersion<S>,
    view: View,
    eta: &NormalSection<S>,
    v: &KillingField<S>,
    p: &[S],
    useful: bool,
) -> Result<PairingCheck<S>> {
    v.require(view)?;
    let probe = Probe::new(imm, view, p)?;
    let frame = &probe.frame;
    let e = section_at(&probe, eta)?;
    if useful {
        require_parallel(frame, &e, "the parallel-section pairing formula")?;
    }
    let vfield = v.field();
    let w = probe.field(&vfield)?;
    let n = S::from_count(frame.n);
    let c: S = curvature(view);
    let two = S::lit(2.0);

    let lap_v = frame.rough_laplacian(&w);
    let nabla_eta_v = killing_derivative(frame, v, &e.value);
    let h_eta_v = n * frame.inner(&frame.mean_curvature, &nabla_eta_v);
    let ric = ambient_ricci(frame, &e.value, &w.value);
    let eq_a = (-frame.inner(&lap_v, &e.value) - (ric + h_eta_v)).abs();

    // Δ_M f straight from the jets of f = ⟨η, V⟩
    let ej = eta.field().jets(&probe.pj)?;
    let vj = vfield.jets(&probe.pj)?;
    let fj = frame.signature.inner_jets(&ej, &vj);
    let lap_f = frame.laplace_beltrami_jet(&fj);

    let lap_eta = frame.rough_laplacian(&e);
    let lap_eta_perp = frame.normal_part(&lap_eta);
    let ric_perp = linalg::scaled(&e.value, c * n);
    let grad = frame.grad_mean_pairing(&e);
    let vt = frame.tangent_part(&w.value);
    let vt_coords = frame.chart_coords(&vt);
    let nabla_vt_eta = frame.covariant_along(&e, &vt_coords);
    let mut cross = S::zero();
    for ca in &frame.tangent_coeffs {
        let de = frame.covariant_along(&e, ca);
        let dv = killing_derivative(frame, v, &frame.push_forward(ca));
        cross = cross + frame.inner(&de, &dv);
    }
    let nd = normal_derivatives(frame, &e);
    let rhs = frame.inner(&lap_eta_perp, &w.value) - frame.inner(&ric_perp, &w.value)
        - n * frame.inner(&grad, &w.value)
        + n * frame.inner(&frame.mean_curvature, &nabla_vt_eta)
        - h_eta_v
        + two * cross
        - two * shape_trace(frame, &nd, &vt_coords);
    let eq_lemma = (lap_f - rhs).abs();

    let eq_useful = if useful {
        let bt = simons_vector(frame, &e.value);
        let rhs = n * frame.inner(&grad, &w.value)
            + h_eta_v
            + frame.inner(&bt, &w.value)
            + frame.inner(&ric_perp, &w.value);
        Some((-lap_f - rhs).abs())
    } else {
        None
    };
    Ok(PairingCheck {
        eq_a,
        eq_lemma,
        eq_useful,
        laplacian: lap_f.abs(),
    })
}

fn require_sphere_valued<S: Real>(imm: &Immersion<S>) -> Result<()> {
    if imm.ambient().curvature() < 0 {
        return Err(Error::Contract(
            "Gauss maps of Lorentz-model immersions are not sphere-valued".into(),
        ));
    }
    Ok(())
}

/// `Δγ_η`, componentwise Laplace–Beltrami of `η` in the coordinates of the
/// embedding space.
pub fn gauss_map_laplacian<S: Real>(
    imm: &Immersion<S>,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<Vec<S>> {
    require_sphere_valued(imm)?;
    let probe = Probe::new(imm, View::Flat, p)?;
    gauss_laplacian_at(&probe, eta)
}

fn gauss_laplacian_at<S: Real>(probe: &Probe<S>, eta: &NormalSection<S>) -> Result<Vec<S>> {
    let e = probe.section(eta)?;
    Ok((0..e.value.len())
        .map(|a| {
            let d1: Vec<S> = e.d1.iter().map(|v| v[a]).collect();
            let d2: Vec<Vec<S>> = e
                .d2
                .iter()
                .map(|row| row.iter().map(|v| v[a]).collect())
                .collect();
            probe.frame.laplace_beltrami(&d1, &d2)
        })
        .collect())
}

/// `‖Δγ − ⟨Δγ, γ⟩γ‖`.
pub fn harmonicity_residual<S: Real>(
    imm: &Immersion<S>,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<S> {
    require_sphere_valued(imm)?;
    let probe = Probe::new(imm, View::Flat, p)?;
    let gamma: Vec<S> = eta
        .field()
        .jets(&probe.pj)?
        .iter()
        .map(Jet3::value)
        .collect();
    let lap = gauss_laplacian_at(&probe, eta)?;
    Ok(tension(&lap, &gamma))
}

fn tension<S: Real>(lap: &[S], gamma: &[S]) -> S {
    let c = linalg::dot(lap, gamma);
    let mut t = lap.to_vec();
    linalg::axpy(&mut t, -c, gamma);
    linalg::norm(&t)
}

/// Pieces of `−Δγ_η` for `η = sin θ ν + cos θ μ` on a hypersurface of the
/// unit sphere.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereDecomposition<S> {
    /// `n a grad H`.
    pub grad_term: Vec<S>,
    /// `a‖S_ν‖² − nbH`.
    pub nu_coeff: S,
    /// `nb − naH`.
    pub mu_coeff: S,
    /// `H = ⟨H⃗, ν⟩` in the sphere.
    pub mean_curvature: S,
    /// `‖S_ν‖²`.
    pub shape_norm2: S,
    /// `‖grad_term + nu_coeff ν + mu_coeff μ + Δγ_η‖`.
    pub residual: S,
}

pub fn sphere_hypersurface_laplacian<S: Real>(
    imm: &Immersion<S>,
    nu: &NormalSection<S>,
    theta: S,
    p: &[S],
    tolerance: S,
) -> Result<SphereDecomposition<S>> {
    match imm.ambient() {
        crate::manifold::AmbientSpace::Sphere(m) if m == imm.n() + 1 => {}
        other => {
            return Err(Error::Contract(format!(
                "needs a hypersurface of a unit sphere, got {}-manifold in {other}",
                imm.n()
            )))
        }
    }
    let sphere = Probe::new(imm, View::Sphere, p)?;
    let frame = &sphere.frame;
    let nud = sphere.section(nu)?;
    let n = S::from_count(frame.n);
    let (a, b) = theta.sin_cos();
    let h = frame.inner(&frame.mean_curvature, &nud.value);
    let grad_h = frame.grad_mean_pairing(&nud);
    let s = shape_operator(frame, &nud.value)?;
    let shape_norm2 = s
        .iter()
        .flat_map(|r| r.iter())
        .fold(S::zero(), |acc, &x| acc + x * x);
    let grad_term = linalg::scaled(&grad_h, n * a);
    let nu_coeff = a * shape_norm2 - n * b * h;
    let mu_coeff = n * b - n * a * h;

    let eta = NormalSection::combination(
        "eta",
        vec![(a, nu.clone()), (b, NormalSection::position())],
    );
    let flat = Probe::new(imm, View::Flat, p)?;
    let lap = gauss_laplacian_at(&flat, &eta)?;
    let mut sum = grad_term.clone();
    linalg::axpy(&mut sum, nu_coeff, &nud.value);
    linalg::axpy(&mut sum, mu_coeff, &frame.position);
    let residual = linalg::norm(&linalg::add(&sum, &lap));
    if !(residual <= tolerance) {
        return Err(Error::IdentityViolation {
            what: "sphere hypersurface Gauss-map decomposition".into(),
            residual: residual.to_f64_lossy(),
            tolerance: tolerance.to_f64_lossy(),
        });
    }
    Ok(SphereDecomposition {
        grad_term,
        nu_coeff,
        mu_coeff,
        mean_curvature: h,
        shape_norm2,
        residual,
    })
}

/// `‖(∇²η)^⊥ + ‖∇η‖² η‖`; zero exactly for harmonic unit normal sections.
pub fn euler_lagrange_residual<S: Real>(
    imm: &Immersion<S>,
    view: View,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<S> {
    let probe = Probe::new(imm, view, p)?;
    let frame = &probe.frame;
    let e = section_at(&probe, eta)?;
    let grad2 = frame
        .tangent_coeffs
        .iter()
        .map(|c| {
            let d = frame.covariant_along(&e, c);
            frame.inner(&d, &d)
        })
        .fold(S::zero(), |a, b| a + b);
    let mut r = frame.normal_part(&frame.rough_laplacian(&e));
    linalg::axpy(&mut r, grad2, &e.value);
    Ok(linalg::norm(&r))
}

/// `‖B̃η − ⟨B̃η, η⟩η‖`: how far `η` is from an eigenvector of the Simons
/// operator.
pub fn eigen_defect<S: Real>(
    imm: &Immersion<S>,
    view: View,
    eta: &NormalSection<S>,
    p: &[S],
) -> Result<S> {
    let probe = Probe::new(imm, view, p)?;
    let e = section_at(&probe, eta)?;
    let bt = simons_vector(&probe.frame, &e.value);
    let c = probe.frame.inner(&bt, &e.value);
    let mut r = bt;
    linalg::axpy(&mut r, -c, &e.value);
    Ok(linalg::norm(&r))
}

/// Laplace–Beltrami of a scalar built from the chart jets.
pub fn scalar_laplacian<S: Real>(
    imm: &Immersion<S>,
    view: View,
    f: &dyn Fn(&PointJets<S>) -> Result<Jet3<S>>,
    p: &[S],
) -> Result<S> {
    let probe = Probe::new(imm, view, p)?;
    let phi = f(&probe.pj)?;
    if phi.order() < 2 {
        return Err(Error::InsufficientOrder {
            have: phi.order(),
            need: 2,
        });
    }
    Ok(probe.frame.laplace_beltrami_jet(&phi))
}
