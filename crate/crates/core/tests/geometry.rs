#![allow(clippy::needless_range_loop)]

//! Frame invariants, Simons matrix cross-checks and a finite-difference
//! oracle for every Laplacian the library computes.

use std::sync::Arc;

use gaussmap::catalog::{self, CatalogEntry};
use gaussmap::jets::Jet3;
use gaussmap::laplace::{self, KillingField};
use gaussmap::linalg::Signature;
use gaussmap::manifold::{
    frame_at, shape_operator, simons_matrix, simons_matrix_in_basis, AmbientSpace, ChartFn,
    DomainBox, Immersion, Interval, NormalSection, View,
};
use gaussmap::sampling::SamplePlan;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Entry = CatalogEntry<f64>;

const ALL: [&str; 12] = [
    "clifford(1,2)",
    "clifford(2,4)",
    "circles(0.3)",
    "circles(0.6)",
    "htorus(0.5,3)",
    "umbilical(0.5,2)",
    "umbilical(0.7,3)",
    "veronese",
    "perturbed(0.6,0.03)",
    "plane",
    "unit-sphere(2)",
    "lorentz",
];

const HYPERSURFACES: [&str; 6] = [
    "clifford(1,2)",
    "circles(0.3)",
    "circles(0.6)",
    "htorus(0.5,3)",
    "umbilical(0.5,2)",
    "umbilical(0.7,3)",
];

fn entry(name: &str) -> Entry {
    catalog::by_name(name).unwrap()
}

fn views(e: &Entry) -> Vec<View> {
    match e.immersion.ambient() {
        AmbientSpace::Flat(_) => vec![View::Flat],
        AmbientSpace::Sphere(_) => vec![View::Flat, View::Sphere],
        AmbientSpace::Hyperbolic(_) => vec![View::Hyperbolic],
    }
}

fn plan(e: &Entry, count: usize) -> SamplePlan<f64> {
    SamplePlan::seeded(e.immersion.domain(), 42, count, false)
}

/// Sample points at least `margin` inside every non-periodic bound.
fn interior(e: &Entry, count: usize, margin: f64) -> Vec<Vec<f64>> {
    let iv = e.immersion.domain().intervals().to_vec();
    plan(e, 4 * count)
        .points
        .into_iter()
        .filter(|p| {
            p.iter()
                .zip(&iv)
                .all(|(x, i)| i.periodic || (*x > i.lo + margin && *x < i.hi - margin))
        })
        .take(count)
        .collect()
}

#[test]
fn frame_invariants_on_every_fixture() {
    for name in ALL {
        let e = entry(name);
        for view in views(&e) {
            for p in &plan(&e, 50).points {
                let f = frame_at(&e.immersion, view, p).unwrap();
                let ip = |a: &[f64], b: &[f64]| f.inner(a, b);
                for (a, ea) in f.tangent.iter().enumerate() {
                    for (b, eb) in f.tangent.iter().enumerate() {
                        assert!((ip(ea, eb) - f64::from(u8::from(a == b))).abs() <= 1e-10, "{name}");
                    }
                    for nu in &f.normal {
                        assert!(ip(ea, nu).abs() <= 1e-10, "{name}");
                    }
                }
                for (a, na) in f.normal.iter().enumerate() {
                    for (b, nb) in f.normal.iter().enumerate() {
                        assert!((ip(na, nb) - f64::from(u8::from(a == b))).abs() <= 1e-10, "{name}");
                    }
                    if view == View::Sphere {
                        assert!(ip(na, &f.position).abs() <= 1e-10, "{name}");
                    }
                }
                assert_eq!(f.tangent.len() + f.normal.len() + usize::from(view.is_model()), f.embedding_dim());
                for row in &f.second_form {
                    for b in row {
                        for ea in &f.tangent {
                            assert!(ip(b, ea).abs() <= 1e-9, "{name}");
                        }
                    }
                }
                let det = gaussmap::linalg::determinant(&f.metric);
                assert!(det >= 1e-10, "{name}: metric determinant {det}");
                let norm2 = f.inner(&f.position, &f.position);
                match e.immersion.ambient() {
                    AmbientSpace::Sphere(_) => assert!((norm2 - 1.0).abs() <= 1e-12),
                    AmbientSpace::Hyperbolic(_) => assert!((norm2 + 1.0).abs() <= 1e-12),
                    AmbientSpace::Flat(_) => {}
                }
            }
        }
    }
}

#[test]
fn catalog_sections_are_unit_and_normal() {
    for name in HYPERSURFACES {
        let e = entry(name);
        let mut sections = vec![(View::Sphere, e.nu().unwrap().clone())];
        for theta in [0.0, 0.4, 1.1, 2.5] {
            sections.push((View::Flat, catalog::section_theta(&e, theta).unwrap()));
        }
        sections.push((View::Flat, catalog::twisted_section(&e).unwrap()));
        for (view, s) in &sections {
            for p in &plan(&e, 50).points {
                let d = s.defect(&e.immersion, *view, p).unwrap();
                assert!(d.unit <= 1e-12 && d.normal <= 1e-10, "{name} {}: {d:?}", s.label());
            }
        }
    }
    let v = entry("veronese");
    for s in catalog::veronese_normal_frame::<f64>() {
        for p in &plan(&v, 50).points {
            let d = s.defect(&v.immersion, View::Sphere, p).unwrap();
            assert!(d.unit <= 1e-12 && d.normal <= 1e-10, "{}: {d:?}", s.label());
        }
    }
}

fn solve_small(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    // Gauss-Jordan inverse for the tiny metrics used here
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| f64::from(u8::from(i == j))));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).max_by(|&x, &y| m[x][c].abs().total_cmp(&m[y][c].abs())).unwrap();
        m.swap(c, piv);
        let d = m[c][c];
        m[c].iter_mut().for_each(|x| *x /= d);
        for r in 0..n {
            if r != c {
                let f = m[r][c];
                let pivot_row = m[c].clone();
                m[r].iter_mut().zip(&pivot_row).for_each(|(x, y)| *x -= f * y);
            }
        }
    }
    m.into_iter().map(|r| r[n..].to_vec()).collect()
}

#[test]
fn simons_matrix_matches_coordinate_brute_force() {
    for name in ALL {
        let e = entry(name);
        for view in views(&e) {
            for p in &plan(&e, 20).points {
                let f = frame_at(&e.immersion, view, p).unwrap();
                let sm = simons_matrix(&f);
                let gi = solve_small(&f.metric);
                let n = f.n;
                // ⟨S_a, S_b⟩ = g^{ik} g^{jl} ⟨B_ij, ν_a⟩ ⟨B_kl, ν_b⟩
                for (a, na) in f.normal.iter().enumerate() {
                    for (b, nb) in f.normal.iter().enumerate() {
                        let mut acc = 0.0;
                        for i in 0..n {
                            for j in 0..n {
                                for k in 0..n {
                                    for l in 0..n {
                                        acc += gi[i][k]
                                            * gi[j][l]
                                            * f.inner(&f.second_form[i][j], na)
                                            * f.inner(&f.second_form[k][l], nb);
                                    }
                                }
                            }
                        }
                        let d = (sm.entries[a][b] - acc).abs();
                        assert!(d <= 1e-12 * acc.abs().max(1.0), "{name}: {d:e}");
                    }
                }
                for v in sm.eigen().values {
                    assert!(v >= -1e-10, "{name}: negative Simons eigenvalue {v}");
                }
            }
        }
    }
}

fn random_orthogonal(r: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let mut q: Vec<Vec<f64>> = Vec::new();
    while q.len() < r {
        let mut v: Vec<f64> = (0..r).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for u in &q {
            let c: f64 = v.iter().zip(u).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(u).for_each(|(x, y)| *x -= c * y);
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-3 {
            q.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    q
}

#[test]
fn simons_spectrum_is_gauge_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for name in ALL {
        let e = entry(name);
        for view in views(&e) {
            for p in &plan(&e, 10).points {
                let f = frame_at(&e.immersion, view, p).unwrap();
                let r = f.normal.len();
                let q = random_orthogonal(r, &mut rng);
                let mixed: Vec<Vec<f64>> = q
                    .iter()
                    .map(|row| {
                        let mut v = vec![0.0; f.embedding_dim()];
                        for (c, nu) in row.iter().zip(&f.normal) {
                            v.iter_mut().zip(nu).for_each(|(x, y)| *x += c * y);
                        }
                        v
                    })
                    .collect();
                let a = simons_matrix(&f).eigen().values;
                let b = simons_matrix_in_basis(&f, &mixed).unwrap().eigen().values;
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() <= 1e-10, "{name}: {a:?} vs {b:?}");
                }
            }
        }
    }
}

#[test]
fn hypersurface_simons_matrix_in_nu_mu_basis() {
    for name in HYPERSURFACES {
        let e = entry(name);
        let known = e.known.clone().unwrap();
        let n = e.n() as f64;
        let (s2, h) = (known.second_form_norm2, known.mean_curvature);
        for p in &plan(&e, 20).points {
            let f = frame_at(&e.immersion, View::Flat, p).unwrap();
            let pj = e.immersion.jets_at(p).unwrap();
            let nu: Vec<f64> = e.nu().unwrap().field().jets(&pj).unwrap().iter().map(Jet3::value).collect();
            let m = simons_matrix_in_basis(&f, &[nu, f.position.clone()]).unwrap().entries;
            let want = [[s2, -n * h], [-n * h, n]];
            for a in 0..2 {
                for b in 0..2 {
                    assert!((m[a][b] - want[a][b]).abs() <= 1e-10, "{name}: {m:?} vs {want:?}");
                }
            }
        }
    }
}

#[test]
fn known_data_over_50_samples() {
    for name in ALL {
        let e = entry(name);
        let Some(known) = e.known.clone() else { continue };
        let view = e.immersion.ambient().native_view();
        for p in &plan(&e, 50).points {
            let f = frame_at(&e.immersion, view, p).unwrap();
            assert!((f.second_form_norm2() - known.second_form_norm2).abs() <= 1e-10, "{name}");
            match &e.nu {
                Some(nu) => {
                    let pj = e.immersion.jets_at(p).unwrap();
                    let v: Vec<f64> = nu.field().jets(&pj).unwrap().iter().map(Jet3::value).collect();
                    let h = f.inner(&f.mean_curvature, &v);
                    assert!((h - known.mean_curvature).abs() <= 1e-10, "{name}: H {h}");
                    if let Some(k) = &known.principal_curvatures {
                        let mut got = gaussmap::linalg::symmetric_eigen(&shape_operator(&f, &v).unwrap()).values;
                        got.sort_by(f64::total_cmp);
                        for (x, y) in got.iter().zip(k) {
                            assert!((x - y).abs() <= 1e-10, "{name}: {got:?} vs {k:?}");
                        }
                    }
                }
                None => {
                    let h = gaussmap::linalg::norm(&f.mean_curvature);
                    assert!((h - known.mean_curvature).abs() <= 1e-10, "{name}: |H| {h}");
                }
            }
        }
    }
}

/// Divergence-form oracle: `∇²W = P ∂_i(√g g^{ij} P ∂_j W) / √g`, with
/// `P` the projection onto the tangent space of the model (identity in
/// the flat view) and every derivative a central difference.
fn fd_rough_laplacian(
    imm: &Immersion<f64>,
    view: View,
    w: &dyn Fn(&[f64]) -> Vec<f64>,
    p: &[f64],
    h: f64,
) -> Vec<f64> {
    let sig = if view == View::Hyperbolic {
        Signature::Minkowski
    } else {
        Signature::Euclidean
    };
    let pos = |x: &[f64]| -> Vec<f64> {
        let c: Vec<Jet3<f64>> = x.iter().map(|&v| Jet3::constant(v, x.len())).collect();
        imm.chart_jets(&c).unwrap().iter().map(Jet3::value).collect()
    };
    let shift = |x: &[f64], i: usize, s: f64| {
        let mut y = x.to_vec();
        y[i] += s;
        y
    };
    let diff = |f: &dyn Fn(&[f64]) -> Vec<f64>, x: &[f64], i: usize| -> Vec<f64> {
        let (a, b) = (f(&shift(x, i, h)), f(&shift(x, i, -h)));
        a.iter().zip(&b).map(|(u, v)| (u - v) / (2.0 * h)).collect()
    };
    let project = |x: &[f64], v: Vec<f64>| -> Vec<f64> {
        if view == View::Flat {
            return v;
        }
        let f = pos(x);
        let c = sig.inner(&v, &f) / sig.inner(&f, &f);
        v.iter().zip(&f).map(|(a, b)| a - c * b).collect()
    };
    let n = p.len();
    let metric = |x: &[f64]| -> (Vec<Vec<f64>>, f64) {
        let d: Vec<Vec<f64>> = (0..n).map(|i| diff(&pos, x, i)).collect();
        let g: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| sig.inner(&d[i], &d[j])).collect()).collect();
        let det = gaussmap::linalg::determinant(&g);
        (solve_small(&g), det.sqrt())
    };
    let flux = |i: usize| {
        move |x: &[f64]| -> Vec<f64> {
            let (gi, sq) = metric(x);
            let mut out = vec![0.0; pos(x).len()];
            for j in 0..n {
                let dj = project(x, diff(w, x, j));
                out.iter_mut().zip(&dj).for_each(|(o, v)| *o += sq * gi[i][j] * v);
            }
            out
        }
    };
    let mut div = vec![0.0; pos(p).len()];
    for i in 0..n {
        let d = diff(&flux(i), p, i);
        div.iter_mut().zip(&d).for_each(|(o, v)| *o += v);
    }
    let (_, sq) = metric(p);
    project(p, div).into_iter().map(|v| v / sq).collect()
}

fn section_values<'a>(imm: &'a Immersion<f64>, s: &'a NormalSection<f64>) -> impl Fn(&[f64]) -> Vec<f64> + 'a {
    move |x: &[f64]| {
        let pj = imm.jets_at(x).unwrap();
        s.field().jets(&pj).unwrap().iter().map(Jet3::value).collect()
    }
}

fn rel_diff(a: &[f64], b: &[f64]) -> f64 {
    let scale = b.iter().map(|x| x.abs()).fold(1.0, f64::max);
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max) / scale
}

#[test]
fn rough_laplacian_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut cases: Vec<(String, View, KillingField<f64>)> = Vec::new();
    for name in ["circles(0.6)", "htorus(0.5,3)", "veronese", "perturbed(0.6,0.03)"] {
        let m = entry(name).immersion.embedding_dim();
        cases.push((name.into(), View::Flat, KillingField::random_euclidean(m, &mut rng)));
        cases.push((name.into(), View::Sphere, KillingField::random_spherical(m, &mut rng)));
    }
    cases.push(("plane".into(), View::Flat, KillingField::random_euclidean(3, &mut rng)));
    cases.push(("lorentz".into(), View::Hyperbolic, KillingField::random_hyperbolic(4, &mut rng)));
    for (name, view, v) in &cases {
        let e = entry(name);
        for p in interior(&e, 4, 1e-3) {
            let got = laplace::rough_laplacian(&e.immersion, *view, &v.field(), &p).unwrap();
            let pos = |x: &[f64]| -> Vec<f64> {
                let pj = e.immersion.jets_at(x).unwrap();
                v.value(&pj.position.iter().map(Jet3::value).collect::<Vec<_>>())
            };
            let want = fd_rough_laplacian(&e.immersion, *view, &pos, &p, 1e-4);
            assert!(rel_diff(&got, &want) <= 1e-5, "{name} {view:?}: {got:?} vs {want:?}");
        }
    }
}

#[test]
fn section_laplacians_match_finite_differences() {
    let mut sections: Vec<(Entry, View, NormalSection<f64>)> = Vec::new();
    for name in ["circles(0.6)", "htorus(0.5,3)", "umbilical(0.5,2)", "perturbed(0.6,0.03)"] {
        let e = entry(name);
        let nu = e.nu().unwrap().clone();
        let tw = catalog::twisted_section(&e).unwrap();
        let th = catalog::section_theta(&e, 0.7).unwrap();
        sections.push((e.clone(), View::Sphere, nu));
        sections.push((e.clone(), View::Flat, tw));
        sections.push((e, View::Flat, th));
    }
    let v = entry("veronese");
    let [n1, _] = catalog::veronese_normal_frame();
    sections.push((v, View::Sphere, n1));
    for (e, view, s) in &sections {
        let w = section_values(&e.immersion, s);
        for p in interior(e, 4, 1e-3) {
            let got = laplace::rough_laplacian(&e.immersion, *view, s.field(), &p).unwrap();
            let want = fd_rough_laplacian(&e.immersion, *view, &w, &p, 1e-4);
            assert!(rel_diff(&got, &want) <= 1e-5, "{} {}: {got:?} vs {want:?}", e.name, s.label());
            if *view == View::Flat {
                let g = laplace::gauss_map_laplacian(&e.immersion, s, &p).unwrap();
                assert!(rel_diff(&g, &want) <= 1e-5, "{} {}", e.name, s.label());
            }
        }
    }
}

#[test]
fn mean_curvature_is_the_laplacian_of_the_position() {
    // Δf = n H⃗ for the flat view
    for name in ["circles(0.6)", "htorus(0.5,3)", "veronese", "perturbed(0.6,0.03)", "unit-sphere(2)"] {
        let e = entry(name);
        for p in interior(&e, 4, 1e-3) {
            let f = frame_at(&e.immersion, View::Flat, &p).unwrap();
            let pos = |x: &[f64]| e.immersion.position(x).unwrap();
            let lap = fd_rough_laplacian(&e.immersion, View::Flat, &pos, &p, 1e-4);
            let nh: Vec<f64> = f.mean_curvature.iter().map(|x| x * f.n as f64).collect();
            assert!(rel_diff(&nh, &lap) <= 1e-5, "{name}");
            let s = laplace::scalar_laplacian(&e.immersion, View::Flat, &|pj| Ok(pj.position[0].clone()), &p).unwrap();
            assert!((s - lap[0]).abs() <= 1e-5 * lap[0].abs().max(1.0), "{name}");
        }
    }
}

/// The chart `u ↦ f(σ(u) + c)` for a permutation `σ` of the variables.
fn reparametrised(imm: &Immersion<f64>, perm: Vec<usize>, c: Vec<f64>) -> Immersion<f64> {
    let iv = imm.domain().intervals();
    let dom = DomainBox::new(
        perm.iter()
            .zip(&c)
            .map(|(&k, &ck)| Interval::new(iv[k].lo - ck, iv[k].hi - ck, iv[k].periodic))
            .collect(),
    );
    let inner = imm.clone();
    let chart: ChartFn<f64> = Arc::new(move |v: &[Jet3<f64>]| {
        let mut w = v.to_vec();
        for (slot, &k) in perm.iter().enumerate() {
            w[k] = v[slot].add_scalar(c[slot]);
        }
        inner.chart_jets(&w)
    });
    Immersion::new("reparametrised", imm.ambient(), dom, chart).unwrap()
}

#[test]
fn laplacians_are_chart_independent() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for name in ["circles(0.6)", "htorus(0.5,3)", "veronese"] {
        let e = entry(name);
        let n = e.n();
        let m = e.immersion.embedding_dim();
        let perm: Vec<usize> = (0..n).rev().collect();
        let c: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.2..0.2)).collect();
        let re = reparametrised(&e.immersion, perm.clone(), c.clone());
        let v = KillingField::random_spherical(m, &mut rng);
        for p in interior(&e, 6, 0.3) {
            let q: Vec<f64> = perm.iter().zip(&c).map(|(&k, &ck)| p[k] - ck).collect();
            for view in [View::Flat, View::Sphere] {
                let a = laplace::rough_laplacian(&e.immersion, view, &v.field(), &p).unwrap();
                let b = laplace::rough_laplacian(&re, view, &v.field(), &q).unwrap();
                assert!(rel_diff(&a, &b) <= 1e-10, "{name} {view:?}");
            }
            let fa = frame_at(&e.immersion, View::Sphere, &p).unwrap();
            let fb = frame_at(&re, View::Sphere, &q).unwrap();
            assert!(rel_diff(&fa.mean_curvature, &fb.mean_curvature) <= 1e-10);
            let sa = simons_matrix(&fa).eigen().values;
            let sb = simons_matrix(&fb).eigen().values;
            assert!(rel_diff(&sa, &sb) <= 1e-10);
        }
    }
}

#[test]
fn angle_identity_characterises_harmonic_sections() {
    for name in ["circles(0.3)", "circles(0.6)", "circles(0.8)", "umbilical(0.5,2)", "umbilical(0.7,3)", "clifford(1,2)"] {
        let e = entry(name);
        let known = e.known.clone().unwrap();
        let n = e.n() as f64;
        let sol = if known.mean_curvature.abs() > 1e-12 { Some(catalog::predicted_theta(&e).unwrap()) } else { None };
        let mut thetas: Vec<f64> = (0..16).map(|k| k as f64 * std::f64::consts::PI / 16.0).collect();
        if let Some(s) = &sol {
            thetas.extend([s.theta1, s.theta2]);
        }
        for theta in thetas {
            let s = catalog::section_theta(&e, theta).unwrap();
            let harm = plan(&e, 16)
                .points
                .iter()
                .map(|p| laplace::harmonicity_residual(&e.immersion, &s, p).unwrap())
                .fold(0.0, f64::max);
            // ‖S_ν‖² = nH(cot θ − tan θ) + n, multiplied through by sin θ cos θ
            let (sn, cs) = theta.sin_cos();
            let identity = (sn * cs * (known.second_form_norm2 - n)
                - n * known.mean_curvature * (cs * cs - sn * sn))
                .abs();
            assert_eq!(harm <= 1e-8, identity <= 1e-8, "{name} θ={theta}: harm {harm:e}, identity {identity:e}");
        }
    }
}

#[test]
fn perturbed_torus_is_a_negative_control() {
    let e = entry("perturbed(0.6,0.03)");
    let nu = e.nu().unwrap();
    let pts = plan(&e, 64).points;
    let grad = pts
        .iter()
        .map(|p| {
            let d = laplace::sphere_hypersurface_laplacian(&e.immersion, nu, 1.0, p, f64::INFINITY).unwrap();
            gaussmap::linalg::norm(&d.grad_term) / 2.0 / 1f64.sin()
        })
        .fold(0.0, f64::max);
    assert!(grad > 1e-3, "max |grad H| = {grad}");
    for k in 0..32 {
        let theta = k as f64 * std::f64::consts::PI / 32.0;
        let s = catalog::section_theta(&e, theta).unwrap();
        let r = pts
            .iter()
            .map(|p| laplace::harmonicity_residual(&e.immersion, &s, p).unwrap())
            .fold(0.0, f64::max);
        assert!(r > 1e-3, "θ = {theta}: {r:e}");
    }
}

#[test]
fn minimal_clifford_decomposition() {
    let e = entry("clifford(1,2)");
    let nu = e.nu().unwrap();
    for theta in [0.0, 0.3, 1.2, 2.9] {
        for p in &plan(&e, 10).points {
            let d = laplace::sphere_hypersurface_laplacian(&e.immersion, nu, theta, p, 1e-8).unwrap();
            assert!(gaussmap::linalg::norm(&d.grad_term) <= 1e-12);
            assert!((d.nu_coeff - 2.0 * theta.sin()).abs() <= 1e-10);
            assert!((d.mu_coeff - 2.0 * theta.cos()).abs() <= 1e-10);
        }
    }
}

#[test]
fn twisted_section_is_not_harmonic_at_generic_points() {
    let e = entry("circles(0.6)");
    let s = catalog::twisted_section(&e).unwrap();
    let r = laplace::harmonicity_residual(&e.immersion, &s, &[0.7, 1.9]).unwrap();
    assert!(r > 1e-3, "{r:e}");
}
