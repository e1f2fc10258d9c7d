//! Model immersions, normal-section constructors and the scalar solvers
//! for `P_H`, `B_H` and the angle equation.
//!
//! Every spherical fixture lands in the unit sphere `S^{n+1} ⊂ ℝ^{n+2}`.
//! Product fixtures `S^k(r₁) × S^l(r₂)` (with `r₁² + r₂² = 1`) carry the
//! unit normal `ν = (−r₂ ω, r₁ ω')` where `ω, ω'` are the unit-sphere
//! factors; with this choice the principal curvatures are `r₂/r₁` on the
//! first factor and `−r₁/r₂` on the second. The small sphere at height
//! `h = √(1−ρ²)` carries `ν = (−h ω, ρ)` and is umbilical with `λ = h/ρ`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::manifold::{
    AmbientSpace, ChartFn, DomainBox, Immersion, Interval, NormalSection, PointJets,
};
use crate::scalar::Real;

/// Distance kept from the coordinate poles of spherical charts.
pub const POLE_MARGIN: f64 = 0.35;

/// Closed-form data of a fixture, with respect to its catalog normal `ν`.
#[derive(Clone, Debug, PartialEq)]
pub struct KnownData<S> {
    /// Principal curvatures with multiplicity, in ascending order.
    pub principal_curvatures: Option<Vec<S>>,
    /// Mean curvature `H` in the sphere (`⟨H⃗, ν⟩`), or `‖H⃗‖` for
    /// fixtures without a distinguished normal.
    pub mean_curvature: S,
    /// `‖B‖²` of the immersion in its model space (`‖S_ν‖²` for
    /// hypersurfaces).
    pub second_form_norm2: S,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    Clifford,
    Circles,
    HTorus,
    Umbilical,
    Veronese,
    Perturbed,
    Plane,
    UnitSphere,
    Lorentz,
}

/// One catalog fixture.
#[derive(Clone)]
pub struct CatalogEntry<S> {
    pub name: String,
    pub family: Family,
    pub immersion: Immersion<S>,
    /// Unit normal in the sphere for hypersurfaces of `S^{n+1}`.
    pub nu: Option<NormalSection<S>>,
    pub known: Option<KnownData<S>>,
    /// Constant principal curvatures along every parallel normal field of
    /// `M ⊂ ℝ^{n+2}`.
    pub isoparametric: bool,
    pub note: &'static str,
}

impl<S: Real> fmt::Debug for CatalogEntry<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CatalogEntry")
            .field("name", &self.name)
            .field("family", &self.family)
            .field("known", &self.known)
            .finish()
    }
}

impl<S: Real> CatalogEntry<S> {
    pub fn n(&self) -> usize {
        self.immersion.n()
    }

    /// The catalog normal, or a contract error for entries without one.
    pub fn nu(&self) -> Result<&NormalSection<S>> {
        self.nu.as_ref().ok_or_else(|| {
            Error::Contract(format!("{} is not a hypersurface of a sphere", self.name))
        })
    }
}

/// `(cos φ₁, sin φ₁ cos φ₂, …, sin φ₁⋯sin φ_{k−1} cos φ_k, sin φ₁⋯sin φ_k)`.
fn unit_sphere<S: Real>(phi: &[Jet3<S>]) -> Vec<Jet3<S>> {
    let mut out = Vec::with_capacity(phi.len() + 1);
    let mut prefix: Option<Jet3<S>> = None;
    for p in phi {
        let c = p.cos();
        let s = p.sin();
        match &prefix {
            None => {
                out.push(c);
                prefix = Some(s);
            }
            Some(pre) => {
                out.push(pre * &c);
                prefix = Some(pre * &s);
            }
        }
    }
    out.push(prefix.expect("at least one angle"));
    out
}

fn sphere_box<S: Real>(k: usize) -> Vec<Interval<S>> {
    let mut iv: Vec<Interval<S>> = (0..k - 1)
        .map(|_| Interval::new(S::lit(POLE_MARGIN), S::lit(PI - POLE_MARGIN), false))
        .collect();
    iv.push(Interval::new(S::zero(), S::lit(2.0 * PI), true));
    iv
}

fn domain_error(msg: String) -> Error {
    Error::Domain(msg)
}

fn open_unit<S: Real>(what: &str, x: S) -> Result<()> {
    if x > S::zero() && x < S::one() {
        Ok(())
    } else {
        Err(domain_error(format!("{what} = {x} must lie in (0, 1)")))
    }
}

fn fmt_num<S: Real>(x: S) -> String {
    format!("{}", x.to_f64_lossy())
}

/// `S^k(r) × S^{n−k}(√(1−r²)) ⊂ S^{n+1}`.
fn product<S: Real>(
    name: String,
    family: Family,
    r1: S,
    k: usize,
    n: usize,
    note: &'static str,
) -> Result<CatalogEntry<S>> {
    if k == 0 || k >= n {
        return Err(domain_error(format!("need 1 ≤ k ≤ n−1, got k={k}, n={n}")));
    }
    if n + 2 > 8 {
        return Err(domain_error(format!("n = {n} exceeds the supported n ≤ 6")));
    }
    open_unit("r", r1)?;
    let r2 = (S::one() - r1 * r1).sqrt();
    let l = n - k;
    let chart: ChartFn<S> = Arc::new(move |v: &[Jet3<S>]| {
        let mut x: Vec<Jet3<S>> = unit_sphere(&v[..k]).iter().map(|c| c.scale(r1)).collect();
        x.extend(unit_sphere(&v[k..]).iter().map(|c| c.scale(r2)));
        Ok(x)
    });
    let mut iv = sphere_box(k);
    iv.extend(sphere_box(l));
    let imm = Immersion::new(name.clone(), AmbientSpace::Sphere(n + 1), DomainBox::new(iv), chart)?;
    let nu = NormalSection::new(
        "nu",
        Arc::new(move |pj: &PointJets<S>| {
            let v = &pj.vars;
            let mut x: Vec<Jet3<S>> = unit_sphere(&v[..k]).iter().map(|c| c.scale(-r2)).collect();
            x.extend(unit_sphere(&v[k..]).iter().map(|c| c.scale(r1)));
            Ok(x)
        }),
    );
    let kappa1 = r2 / r1;
    let kappa2 = -r1 / r2;
    let mut pcs = vec![kappa2; l];
    pcs.extend(std::iter::repeat_n(kappa1, k));
    let (kf, lf, nf) = (S::from_count(k), S::from_count(l), S::from_count(n));
    Ok(CatalogEntry {
        name,
        family,
        immersion: imm,
        nu: Some(nu),
        known: Some(KnownData {
            principal_curvatures: Some(pcs),
            mean_curvature: (kf * kappa1 + lf * kappa2) / nf,
            second_form_norm2: kf * kappa1 * kappa1 + lf * kappa2 * kappa2,
        }),
        isoparametric: true,
        note,
    })
}

/// Minimal Clifford torus `S^k(√(k/n)) × S^{n−k}(√((n−k)/n))`.
pub fn clifford_torus<S: Real>(k: usize, n: usize) -> Result<CatalogEntry<S>> {
    if n < 2 {
        return Err(domain_error(format!("clifford torus needs n ≥ 2, got {n}")));
    }
    let r = (S::from_count(k) / S::from_count(n)).sqrt();
    product(
        format!("clifford({k},{n})"),
        Family::Clifford,
        r,
        k,
        n,
        "minimal Clifford torus; principal curvatures ±√((n−k)/k), ±√(k/(n−k))",
    )
}

/// Product of circles `S¹(r) × S¹(√(1−r²)) ⊂ S³`.
pub fn circle_product<S: Real>(r: S) -> Result<CatalogEntry<S>> {
    product(
        format!("circles({})", fmt_num(r)),
        Family::Circles,
        r,
        1,
        2,
        "flat CMC torus; principal curvatures √(1−r²)/r and −r/√(1−r²)",
    )
}

/// `H(r)`-torus `S^{n−1}(r) × S¹(√(1−r²)) ⊂ S^{n+1}`.
pub fn h_torus<S: Real>(r: S, n: usize) -> Result<CatalogEntry<S>> {
    if n < 2 {
        return Err(domain_error(format!("H(r)-torus needs n ≥ 2, got {n}")));
    }
    product(
        format!("htorus({},{n})", fmt_num(r)),
        Family::HTorus,
        r,
        n - 1,
        n,
        "CMC torus with principal curvatures √(1−r²)/r (multiplicity n−1) and −r/√(1−r²)",
    )
}

/// Totally umbilical small sphere `S^n(ρ)` at height `√(1−ρ²)` in `S^{n+1}`.
pub fn umbilical_sphere<S: Real>(rho: S, n: usize) -> Result<CatalogEntry<S>> {
    open_unit("rho", rho)?;
    if n == 0 || n + 2 > 8 {
        return Err(domain_error(format!("umbilical sphere needs 1 ≤ n ≤ 6, got {n}")));
    }
    let h = (S::one() - rho * rho).sqrt();
    let chart: ChartFn<S> = Arc::new(move |v: &[Jet3<S>]| {
        let mut x: Vec<Jet3<S>> = unit_sphere(v).iter().map(|c| c.scale(rho)).collect();
        x.push(Jet3::constant(h, v.len()));
        Ok(x)
    });
    let name = format!("umbilical({},{n})", fmt_num(rho));
    let imm = Immersion::new(
        name.clone(),
        AmbientSpace::Sphere(n + 1),
        DomainBox::new(sphere_box(n)),
        chart,
    )?;
    let nu = NormalSection::new(
        "nu",
        Arc::new(move |pj: &PointJets<S>| {
            let mut x: Vec<Jet3<S>> = unit_sphere(&pj.vars).iter().map(|c| c.scale(-h)).collect();
            x.push(Jet3::constant(rho, pj.vars.len()));
            Ok(x)
        }),
    );
    let lambda = h / rho;
    let nf = S::from_count(n);
    Ok(CatalogEntry {
        name,
        family: Family::Umbilical,
        immersion: imm,
        nu: Some(nu),
        known: Some(KnownData {
            principal_curvatures: Some(vec![lambda; n]),
            mean_curvature: lambda,
            second_form_norm2: nf * lambda * lambda,
        }),
        isoparametric: true,
        note: "totally umbilical sphere; principal curvature √(1−ρ²)/ρ",
    })
}

/// Veronese surface `S²(√3) → S⁴` by degree-two spherical harmonics, on
/// spherical coordinates away from the poles.
pub fn veronese<S: Real>() -> Result<CatalogEntry<S>> {
    let chart: ChartFn<S> = Arc::new(|v: &[Jet3<S>]| {
        let w = unit_sphere(v);
        // w = (cos θ, sin θ cos φ, sin θ sin φ) = (z, x, y)
        let (z, x, y) = (&w[0], &w[1], &w[2]);
        let s3 = S::lit(3.0).sqrt();
        let xx = x * x;
        let yy = y * y;
        let zz = z * z;
        Ok(vec![
            (x * y).scale(s3),
            (x * z).scale(s3),
            (y * z).scale(s3),
            (&xx - &yy).scale(s3 * S::lit(0.5)),
            (&(&xx + &yy) - &zz.scale(S::lit(2.0))).scale(S::lit(0.5)),
        ])
    });
    let imm = Immersion::new(
        "veronese",
        AmbientSpace::Sphere(4),
        DomainBox::new(sphere_box(2)),
        chart,
    )?;
    Ok(CatalogEntry {
        name: "veronese".into(),
        family: Family::Veronese,
        immersion: imm,
        nu: None,
        known: Some(KnownData {
            principal_curvatures: None,
            mean_curvature: S::zero(),
            second_form_norm2: S::lit(4.0 / 3.0),
        }),
        isoparametric: false,
        note: "minimal surface of S⁴ whose second fundamental form spans the normal space",
    })
}

/// Orthonormal normal frame of the Veronese surface in `S⁴`.
///
/// In the model `x ↦ x xᵀ − I/3` on traceless symmetric matrices the normal
/// plane at `x` is spanned by `e_θ e_θᵀ − e_φ e_φᵀ` and `e_θ e_φᵀ + e_φ e_θᵀ`;
/// the chart coordinates are `√(3/2)` times an isometric image of that model.
pub fn veronese_normal_frame<S: Real>() -> [NormalSection<S>; 2] {
    fn coords<S: Real>(m: [[Jet3<S>; 3]; 3]) -> Vec<Jet3<S>> {
        // rows/columns in (x, y, z) order, scaled to unit length
        let s3 = S::lit(3.0).sqrt();
        let k = S::one() / s3;
        vec![
            m[0][1].scale(s3 * k),
            m[0][2].scale(s3 * k),
            m[1][2].scale(s3 * k),
            (&m[0][0] - &m[1][1]).scale(s3 * S::lit(0.5) * k),
            (&(&m[0][0] + &m[1][1]) - &m[2][2].scale(S::lit(2.0))).scale(S::lit(0.5) * k),
        ]
    }
    fn basis<S: Real>(v: &[Jet3<S>]) -> ([Jet3<S>; 3], [Jet3<S>; 3]) {
        let (ct, st) = (v[0].cos(), v[0].sin());
        let (cp, sp) = (v[1].cos(), v[1].sin());
        let zero = Jet3::constant(S::zero(), v.len());
        ([&ct * &cp, &ct * &sp, -&st], [-&sp, cp, zero])
    }
    let sym = |a: &[Jet3<S>; 3], b: &[Jet3<S>; 3], sign: S| -> [[Jet3<S>; 3]; 3] {
        std::array::from_fn(|i| {
            std::array::from_fn(|j| &(&a[i] * &a[j]) + &(&b[i] * &b[j]).scale(sign))
        })
    };
    let first = NormalSection::new(
        "veronese-n1",
        Arc::new(move |pj: &PointJets<S>| {
            let (t, f) = basis(&pj.vars);
            Ok(coords(sym(&t, &f, -S::one())))
        }),
    );
    let second = NormalSection::new(
        "veronese-n2",
        Arc::new(move |pj: &PointJets<S>| {
            let (t, f) = basis(&pj.vars);
            let m: [[Jet3<S>; 3]; 3] = std::array::from_fn(|i| {
                std::array::from_fn(|j| &(&t[i] * &f[j]) + &(&f[i] * &t[j]))
            });
            Ok(coords(m))
        }),
    );
    [first, second]
}

/// Radial perturbation `ρ = r + ε cos u cos v` of the product of circles;
/// not CMC for `ε ≠ 0`.
pub fn perturbed_torus<S: Real>(r: S, eps: S) -> Result<CatalogEntry<S>> {
    open_unit("r", r)?;
    if eps.abs() > S::lit(0.05) || !(r - eps.abs() > S::zero() && r + eps.abs() < S::one()) {
        return Err(domain_error(format!(
            "perturbation eps = {eps} must satisfy |eps| ≤ 0.05 and keep r ± eps in (0, 1)"
        )));
    }
    let rho = move |v: &[Jet3<S>]| (&v[0].cos() * &v[1].cos()).scale(eps).add_scalar(r);
    let chart: ChartFn<S> = Arc::new(move |v: &[Jet3<S>]| {
        let p = rho(v);
        let q = (&p * &p).scale(-S::one()).add_scalar(S::one()).sqrt()?;
        Ok(vec![
            &p * &v[0].cos(),
            &p * &v[0].sin(),
            &q * &v[1].cos(),
            &q * &v[1].sin(),
        ])
    });
    let name = format!("perturbed({},{})", fmt_num(r), fmt_num(eps));
    let mut iv = sphere_box::<S>(1);
    iv.extend(sphere_box::<S>(1));
    let imm = Immersion::new(name.clone(), AmbientSpace::Sphere(3), DomainBox::new(iv), chart)?;
    // orient like the unperturbed torus: ⟨ν, (−√(1−ρ²) ω, ρ ω')⟩ > 0
    let centre = imm.domain().center();
    let pj = imm.jets_at(&centre)?;
    let raw = imm.hypersurface_normal()?;
    let n0: Vec<S> = raw.field().jets(&pj)?.iter().map(Jet3::value).collect();
    let pos: Vec<S> = pj.position.iter().map(Jet3::value).collect();
    let reference = [-pos[2], -pos[3], pos[0], pos[1]];
    let dot = n0.iter().zip(reference).fold(S::zero(), |a, (x, y)| a + *x * y);
    let imm = imm.with_orientation(if dot < S::zero() { -S::one() } else { S::one() });
    let nu = imm.hypersurface_normal()?.relabel("nu");
    Ok(CatalogEntry {
        name,
        family: Family::Perturbed,
        immersion: imm,
        nu: Some(nu),
        known: None,
        isoparametric: false,
        note: "non-CMC negative control",
    })
}

/// The plane `z = 0` in `ℝ³`.
pub fn plane<S: Real>() -> Result<CatalogEntry<S>> {
    let chart: ChartFn<S> = Arc::new(|v: &[Jet3<S>]| {
        Ok(vec![v[0].clone(), v[1].clone(), Jet3::constant(S::zero(), 2)])
    });
    let iv = vec![
        Interval::new(-S::one(), S::one(), false),
        Interval::new(-S::one(), S::one(), false),
    ];
    let imm = Immersion::new("plane", AmbientSpace::Flat(3), DomainBox::new(iv), chart)?;
    Ok(CatalogEntry {
        name: "plane".into(),
        family: Family::Plane,
        immersion: imm,
        nu: None,
        known: Some(KnownData {
            principal_curvatures: Some(vec![S::zero(), S::zero()]),
            mean_curvature: S::zero(),
            second_form_norm2: S::zero(),
        }),
        isoparametric: true,
        note: "totally geodesic",
    })
}

/// The unit round sphere `S^n ⊂ ℝ^{n+1}` as a flat-space hypersurface.
pub fn unit_sphere_entry<S: Real>(n: usize) -> Result<CatalogEntry<S>> {
    if n == 0 || n + 1 > 8 {
        return Err(domain_error(format!("unit sphere needs 1 ≤ n ≤ 7, got {n}")));
    }
    let chart: ChartFn<S> = Arc::new(|v: &[Jet3<S>]| Ok(unit_sphere(v)));
    let name = format!("unit-sphere({n})");
    let imm = Immersion::new(
        name.clone(),
        AmbientSpace::Flat(n + 1),
        DomainBox::new(sphere_box(n)),
        chart,
    )?;
    Ok(CatalogEntry {
        name,
        family: Family::UnitSphere,
        immersion: imm,
        nu: None,
        known: Some(KnownData {
            principal_curvatures: None,
            mean_curvature: S::one(),
            second_form_norm2: S::from_count(n),
        }),
        isoparametric: true,
        note: "round sphere; mean curvature vector −μ",
    })
}

/// A graph surface `x₃ = 0.3 x₁x₂ + 0.2 x₁²` lifted to the hyperboloid
/// `H³ ⊂ ℝ^{3,1}`.
pub fn lorentz_surface<S: Real>() -> Result<CatalogEntry<S>> {
    let chart: ChartFn<S> = Arc::new(|v: &[Jet3<S>]| {
        let (u, w) = (&v[0], &v[1]);
        let z = &(u * w).scale(S::lit(0.3)) + &(u * u).scale(S::lit(0.2));
        let t = (&(&(u * u) + &(w * w)) + &(&z * &z)).add_scalar(S::one()).sqrt()?;
        Ok(vec![u.clone(), w.clone(), z, t])
    });
    let iv = vec![
        Interval::new(-S::one(), S::one(), false),
        Interval::new(-S::one(), S::one(), false),
    ];
    let imm = Immersion::new("lorentz", AmbientSpace::Hyperbolic(3), DomainBox::new(iv), chart)?;
    Ok(CatalogEntry {
        name: "lorentz".into(),
        family: Family::Lorentz,
        immersion: imm,
        nu: None,
        known: None,
        isoparametric: false,
        note: "generic surface of H³ in the Lorentz model",
    })
}

/// Same chart, viewed inside `S⁷ ⊂ ℝ⁸` by zero-padding (spherical entries
/// only).
pub fn into_s7<S: Real>(imm: &Immersion<S>) -> Result<Immersion<S>> {
    match imm.ambient() {
        AmbientSpace::Sphere(m) if m <= 7 => {}
        other => {
            return Err(Error::Contract(format!(
                "only spheres of dimension ≤ 7 sit inside S⁷, got {other}"
            )))
        }
    }
    let inner = imm.clone();
    let chart: ChartFn<S> = Arc::new(move |v: &[Jet3<S>]| {
        let mut x = inner.chart_jets(v)?;
        x.resize(8, Jet3::constant(S::zero(), v.len()));
        Ok(x)
    });
    Immersion::new(
        format!("{}⊂S7", imm.name()),
        AmbientSpace::Sphere(7),
        imm.domain().clone(),
        chart,
    )
}

/// `η = sin θ · ν + cos θ · μ`, parallel in the normal bundle of
/// `M ⊂ ℝ^{n+2}`.
pub fn section_theta<S: Real>(entry: &CatalogEntry<S>, theta: S) -> Result<NormalSection<S>> {
    let nu = entry.nu()?.clone();
    Ok(NormalSection::combination(
        format!("theta={}", fmt_num(theta)),
        vec![(theta.sin(), nu), (theta.cos(), NormalSection::position())],
    ))
}

/// `sin(u)·ν + cos(u)·μ`, a unit normal that is not parallel.
pub fn twisted_section<S: Real>(entry: &CatalogEntry<S>) -> Result<NormalSection<S>> {
    let nu = entry.nu()?.clone();
    Ok(NormalSection::rotation(
        "sin(u)nu+cos(u)mu",
        NormalSection::position(),
        nu,
        Arc::new(|v: &[Jet3<S>]| v[0].clone()),
    ))
}

/// `P_H(x) = x² + b x + c` and `B_H`, the square of its positive root.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhBh<S> {
    pub b: S,
    pub c: S,
    pub positive_root: S,
    pub b_h: S,
}

impl<S: Real> PhBh<S> {
    pub fn eval(&self, x: S) -> S {
        x * x + self.b * x + self.c
    }
}

pub fn p_h_and_b_h<S: Real>(n: usize, h: S) -> Result<PhBh<S>> {
    if n < 2 || h < S::zero() {
        return Err(domain_error(format!("P_H needs n ≥ 2 and H ≥ 0, got n={n}, H={h}")));
    }
    let nf = S::from_count(n);
    let b = nf * (nf - S::lit(2.0)) / (nf * (nf - S::one())).sqrt() * h;
    let c = -nf * (h * h + S::one());
    // c < 0: the roots have opposite signs; this form avoids cancellation
    let x = -S::lit(2.0) * c / (b + (b * b - S::lit(4.0) * c).sqrt());
    // x² = −b x − c, exact when b = 0
    let b_h = -c - b * x;
    Ok(PhBh {
        b,
        c,
        positive_root: x,
        b_h,
    })
}

/// The two angles solving `nH(cot θ − tan θ) = C`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaSolution<S> {
    pub theta1: S,
    pub theta2: S,
    /// `tan θ₁`.
    pub t: S,
    /// Largest `|nH(cot θ − tan θ) − C|` over both angles.
    pub residual: S,
}

pub fn solve_theta<S: Real>(n: usize, h: S, c: S) -> Result<ThetaSolution<S>> {
    if h == S::zero() || !h.is_finite() {
        return Err(Error::Degenerate(format!(
            "angle equation degenerates for H = {h}"
        )));
    }
    let a = S::from_count(n) * h;
    // a t² + C t − a = 0, roots of opposite sign with product −1
    let s = (c * c + S::lit(4.0) * a * a).sqrt();
    let q = if c >= S::zero() {
        -(c + s) / S::lit(2.0)
    } else {
        (s - c) / S::lit(2.0)
    };
    let roots = [q / a, -a / q];
    let t = roots
        .into_iter()
        .find(|&x| x > S::zero())
        .ok_or_else(|| Error::Degenerate("no positive root".into()))?;
    let theta1 = t.atan();
    let theta2 = theta1 + S::FRAC_PI_2();
    let f = |th: S| {
        let (sn, cs) = th.sin_cos();
        a * (cs / sn - sn / cs) - c
    };
    let residual = f(theta1).abs().max(f(theta2).abs());
    Ok(ThetaSolution {
        theta1,
        theta2,
        t,
        residual,
    })
}

/// Angles predicted harmonic for a CMC sphere hypersurface:
/// `nH(cot θ − tan θ) = ‖S_ν‖² − n`.
pub fn predicted_theta<S: Real>(entry: &CatalogEntry<S>) -> Result<ThetaSolution<S>> {
    let known = entry.known.as_ref().ok_or_else(|| {
        Error::Contract(format!("{} has no closed-form data", entry.name))
    })?;
    entry.nu()?;
    let n = entry.n();
    solve_theta(
        n,
        known.mean_curvature,
        known.second_form_norm2 - S::from_count(n),
    )
}

/// Fixture names accepted by [`by_name`], with their parameter shapes.
pub fn names() -> &'static [(&'static str, &'static str)] {
    &[
        ("clifford(k,n)", "minimal Clifford torus in S^{n+1}"),
        ("circles(r)", "S^1(r) x S^1(sqrt(1-r^2)) in S^3"),
        ("htorus(r,n)", "H(r)-torus S^{n-1}(r) x S^1(sqrt(1-r^2)) in S^{n+1}"),
        ("umbilical(rho,n)", "small sphere S^n(rho) in S^{n+1}"),
        ("veronese", "Veronese surface in S^4"),
        ("perturbed(r,eps)", "non-CMC perturbation of circles(r)"),
        ("plane", "plane z=0 in R^3"),
        ("unit-sphere(n)", "round S^n in R^{n+1}"),
        ("lorentz", "graph surface in H^3"),
    ]
}

fn parse_args(name: &str) -> Result<(String, Vec<String>)> {
    let name = name.trim();
    match name.find('(') {
        None => Ok((name.to_string(), vec![])),
        Some(i) => {
            let head = name[..i].trim().to_string();
            let rest = name[i + 1..]
                .strip_suffix(')')
                .ok_or_else(|| Error::Usage(format!("unbalanced parentheses in '{name}'")))?;
            Ok((head, rest.split(',').map(|s| s.trim().to_string()).collect()))
        }
    }
}

fn arg_f64(name: &str, args: &[String], i: usize) -> Result<f64> {
    args.get(i)
        .ok_or_else(|| Error::Usage(format!("'{name}' is missing argument {}", i + 1)))?
        .parse::<f64>()
        .map_err(|e| Error::Usage(format!("bad number in '{name}': {e}")))
}

fn arg_usize(name: &str, args: &[String], i: usize) -> Result<usize> {
    args.get(i)
        .ok_or_else(|| Error::Usage(format!("'{name}' is missing argument {}", i + 1)))?
        .parse::<usize>()
        .map_err(|e| Error::Usage(format!("bad integer in '{name}': {e}")))
}

/// Parses names such as `circles(0.6)` or `htorus(0.5,3)`. Unknown names
/// and malformed arguments are usage errors; out-of-range parameters are
/// domain errors.
pub fn by_name<S: Real>(name: &str) -> Result<CatalogEntry<S>> {
    let (head, args) = parse_args(name)?;
    let want = |k: usize| -> Result<()> {
        if args.len() == k {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "'{head}' takes {k} argument(s), got {}",
                args.len()
            )))
        }
    };
    match head.as_str() {
        "clifford" => {
            want(2)?;
            clifford_torus(arg_usize(name, &args, 0)?, arg_usize(name, &args, 1)?)
        }
        "circles" => {
            want(1)?;
            circle_product(S::lit(arg_f64(name, &args, 0)?))
        }
        "htorus" => {
            want(2)?;
            h_torus(S::lit(arg_f64(name, &args, 0)?), arg_usize(name, &args, 1)?)
        }
        "umbilical" => {
            want(2)?;
            umbilical_sphere(S::lit(arg_f64(name, &args, 0)?), arg_usize(name, &args, 1)?)
        }
        "veronese" => {
            want(0)?;
            veronese()
        }
        "perturbed" => {
            want(2)?;
            perturbed_torus(
                S::lit(arg_f64(name, &args, 0)?),
                S::lit(arg_f64(name, &args, 1)?),
            )
        }
        "plane" => {
            want(0)?;
            plane()
        }
        "unit-sphere" => {
            want(1)?;
            unit_sphere_entry(arg_usize(name, &args, 0)?)
        }
        "lorentz" => {
            want(0)?;
            lorentz_surface()
        }
        other => Err(Error::Usage(format!("unknown example '{other}'"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ph_n2_and_h0() {
        let p = p_h_and_b_h(2, 0.7).unwrap();
        assert_eq!(p.b, 0.0);
        assert_eq!(p.b_h, 2.0 * (0.7 * 0.7 + 1.0));
        for n in 2..7 {
            assert_eq!(p_h_and_b_h(n, 0.0).unwrap().b_h, n as f64);
        }
    }

    #[test]
    fn ph_n3_h1_root() {
        let p = p_h_and_b_h(3, 1.0).unwrap();
        let x = (-3.0 / 6f64.sqrt() + (9.0 / 6.0 + 24.0f64).sqrt()) / 2.0;
        assert!((p.positive_root - x).abs() < 1e-14);
        assert!(p.eval(p.positive_root).abs() <= 1e-12);
        assert!((p.b_h - x * x).abs() < 1e-12);
    }

    #[test]
    fn theta_zero_rhs_is_quarter_turn() {
        let s = solve_theta(2, 0.3, 0.0).unwrap();
        assert!((s.theta1 - PI / 4.0).abs() < 1e-15);
        assert_eq!(s.theta2 - s.theta1, PI / 2.0);
    }

    #[test]
    fn theta_rejects_zero_h() {
        assert!(matches!(solve_theta(2, 0.0, 1.0), Err(Error::Degenerate(_))));
    }

    #[test]
    fn theta_negative_h() {
        let s = solve_theta(3, -0.4, 2.5).unwrap();
        assert!(s.theta1 > 0.0 && s.theta1 < PI / 2.0);
        assert!(s.residual <= 1e-12);
    }

    #[test]
    fn names_parse() {
        assert_eq!(by_name::<f64>("circles(0.6)").unwrap().name, "circles(0.6)");
        assert_eq!(by_name::<f64>("htorus(0.5, 3)").unwrap().n(), 3);
        assert!(matches!(by_name::<f64>("torus(1)"), Err(Error::Usage(_))));
        assert!(matches!(by_name::<f64>("circles(1.5)"), Err(Error::Domain(_))));
        assert!(matches!(by_name::<f64>("circles"), Err(Error::Usage(_))));
        assert!(matches!(by_name::<f64>("clifford(2,2)"), Err(Error::Domain(_))));
        assert!(matches!(by_name::<f64>("perturbed(0.6,0.2)"), Err(Error::Domain(_))));
    }

    #[test]
    fn unit_sphere_chart_is_unit() {
        let v = crate::jets::lift_vars(&[0.4, 1.1, 2.0]).unwrap();
        let w = unit_sphere(&v);
        let s: f64 = w.iter().map(|c| c.value() * c.value()).sum();
        assert!((s - 1.0).abs() < 1e-15);
    }

    fn shape_spectrum(e: &CatalogEntry<f64>, p: &[f64]) -> Vec<f64> {
        use crate::manifold::{frame_at, shape_operator, View};
        let probe = frame_at(&e.immersion, View::Sphere, p).unwrap();
        let pj = e.immersion.jets_at(p).unwrap();
        let nu: Vec<f64> = e.nu().unwrap().field().jets(&pj).unwrap().iter().map(Jet3::value).collect();
        let s = shape_operator(&probe, &nu).unwrap();
        crate::linalg::symmetric_eigen(&s).values
    }

    #[test]
    fn product_principal_curvatures() {
        for name in ["circles(0.6)", "htorus(0.5,3)", "clifford(2,4)", "umbilical(0.7,3)"] {
            let e = by_name::<f64>(name).unwrap();
            let c = e.immersion.domain().center();
            let got = shape_spectrum(&e, &c);
            let want = e.known.as_ref().unwrap().principal_curvatures.clone().unwrap();
            for (g, w) in got.iter().zip(&want) {
                assert!((g - w).abs() < 1e-10, "{name}: {got:?} vs {want:?}");
            }
        }
    }

    #[test]
    fn veronese_second_form() {
        use crate::manifold::{frame_at, View};
        let e = veronese::<f64>().unwrap();
        for p in [[0.9, 0.4], [1.7, 5.0], [0.5, 2.2]] {
            let f = frame_at(&e.immersion, View::Sphere, &p).unwrap();
            assert!((f.second_form_norm2() - 4.0 / 3.0).abs() < 1e-10);
            assert!(crate::linalg::norm(&f.mean_curvature) < 1e-10);
        }
    }
}
