use gaussmap::catalog;
use gaussmap::jets::Jet3;
use gaussmap::cayley_dickson::{
    cd_conj, cd_inv, cd_mul, cd_norm, format_table, left_translation_matrix, multiplication_table,
    octonionic_gauss_map, octonionic_laplacian_check, right_translation_matrix, CDNumber,
};
use gaussmap::laplace::scalar_laplacian;
use gaussmap::manifold::View;
use gaussmap::sampling::SamplePlan;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type O = CDNumber<f64>;

fn oct(c: Vec<f64>) -> O {
    CDNumber::new(c).unwrap()
}

fn random_oct(rng: &mut ChaCha8Rng) -> O {
    oct((0..8).map(|_| rng.gen_range(-1.0..1.0)).collect())
}

fn mat_mul(a: &[Vec<f64>], b: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a.len())
        .map(|i| (0..b[0].len()).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

fn transpose(a: &[Vec<f64>]) -> Vec<Vec<f64>> {
    (0..a[0].len()).map(|j| a.iter().map(|r| r[j]).collect()).collect()
}

fn max_abs_diff(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn table_matches_golden_file() {
    let golden = include_str!("fixtures/octonion_table.txt");
    assert_eq!(format_table(&multiplication_table(3)), golden);
}

#[test]
fn table_entries_unrolled_by_hand() {
    // (x1, x2)(y1, y2) = (x1 y1 - conj(y2) x2, y2 x1 + x2 conj(y1)) over
    // quaternion halves: e4 = (0, 1), e1 = (i, 0), e2 = (j, 0).
    //   e1 e2 = (ij, 0) = e3
    //   e4 e1 = (0, 1 * conj(i)) = -e5
    //   e1 e4 = (0, 1 * i) = e5
    //   e4 e4 = (-conj(1) 1, 0) = -e0
    let t = multiplication_table(3);
    assert_eq!(t[1][2], (1, 3));
    assert_eq!(t[4][1], (-1, 5));
    assert_eq!(t[1][4], (1, 5));
    assert_eq!(t[4][4], (-1, 0));
}

#[test]
fn norm_is_multiplicative_over_1000_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let (x, y) = (random_oct(&mut rng), random_oct(&mut rng));
        let lhs = cd_norm(&cd_mul(&x, &y).unwrap());
        // Euclidean norms computed directly from coordinates
        let nx = x.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt();
        let ny = y.coeffs().iter().map(|c| c * c).sum::<f64>().sqrt();
        worst = worst.max((lhs - nx * ny).abs());
    }
    assert!(worst <= 1e-12, "{worst:e}");
}

#[test]
fn octonions_are_not_associative() {
    let e = |k| CDNumber::<f64>::basis(3, k).unwrap();
    let witness = (1..8).any(|a| {
        (1..8).any(|b| {
            (1..8).any(|c| {
                let l = cd_mul(&cd_mul(&e(a), &e(b)).unwrap(), &e(c)).unwrap();
                let r = cd_mul(&e(a), &cd_mul(&e(b), &e(c)).unwrap()).unwrap();
                l != r
            })
        })
    });
    assert!(witness);
}

#[test]
fn lower_levels_are_associative() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for level in 0..3u32 {
        let m = 1usize << level;
        for _ in 0..200 {
            let mut r = || CDNumber::new((0..m).map(|_| rng.gen_range(-2.0..2.0)).collect()).unwrap();
            let (x, y, z) = (r(), r(), r());
            let l = cd_mul(&cd_mul(&x, &y).unwrap(), &z).unwrap();
            let rr = cd_mul(&x, &cd_mul(&y, &z).unwrap()).unwrap();
            let d = l
                .coeffs()
                .iter()
                .zip(rr.coeffs())
                .map(|(a, b): (&f64, &f64)| (a - b).abs())
                .fold(0.0, f64::max);
            assert!(d <= 1e-14 * 8.0, "level {level}: {d:e}");
        }
    }
}

#[test]
fn real_part_is_half_the_sum_with_the_conjugate() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let x = random_oct(&mut rng);
    let s: Vec<f64> = x
        .coeffs()
        .iter()
        .zip(cd_conj(&x).coeffs())
        .map(|(a, b)| (a + b) / 2.0)
        .collect();
    assert_eq!(s[0], x.re());
    assert!(s[1..].iter().all(|&c| c == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn unit_translations_are_orthogonal(c in prop::collection::vec(-1.0..1.0f64, 8)) {
        let n = c.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assume!(n > 0.1);
        let x = oct(c.iter().map(|v| v / n).collect());
        let id: Vec<Vec<f64>> = (0..8).map(|i| (0..8).map(|j| f64::from(u8::from(i == j))).collect()).collect();
        for m in [left_translation_matrix(&x), right_translation_matrix(&x)] {
            prop_assert!(max_abs_diff(&mat_mul(&transpose(&m), &m), &id) <= 1e-12);
        }
    }

    #[test]
    fn imaginary_translations_are_skew(c in prop::collection::vec(-1.0..1.0f64, 7)) {
        let mut v = vec![0.0];
        v.extend(c);
        let x = oct(v);
        for m in [left_translation_matrix(&x), right_translation_matrix(&x)] {
            let neg: Vec<Vec<f64>> = m.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
            prop_assert!(max_abs_diff(&transpose(&m), &neg) <= 1e-12);
        }
    }

    #[test]
    fn neutral_element_and_inverse(c in prop::collection::vec(-1.0..1.0f64, 8)) {
        prop_assume!(c.iter().map(|v| v * v).sum::<f64>() > 0.01);
        let x = oct(c);
        let one = CDNumber::<f64>::one(3).unwrap();
        prop_assert_eq!(cd_mul(&one, &x).unwrap(), x.clone());
        prop_assert_eq!(cd_mul(&x, &one).unwrap(), x.clone());
        let p = cd_mul(&cd_inv(&x).unwrap(), &x).unwrap();
        prop_assert!((p.coeffs()[0] - 1.0).abs() <= 1e-12);
        prop_assert!(p.coeffs()[1..].iter().all(|c| c.abs() <= 1e-12));
    }
}

#[test]
fn gauss_map_lands_in_the_imaginary_unit_sphere() {
    for name in ["clifford(1,2)", "circles(0.3)", "umbilical(0.5,2)", "perturbed(0.6,0.03)", "htorus(0.5,3)"] {
        let e = catalog::by_name::<f64>(name).unwrap();
        let imm = e.immersion.clone();
        let plan = SamplePlan::standard(imm.domain(), 42);
        for p in &plan.points {
            let g = octonionic_gauss_map(&imm, p).unwrap();
            assert!(g[0].abs() <= 1e-12, "{name}");
            let n = g.iter().map(|c| c * c).sum::<f64>().sqrt();
            assert!((n - 1.0).abs() <= 1e-12, "{name}");
        }
    }
}

#[test]
fn lapoc_eigenvalue_on_the_clifford_torus() {
    let e = catalog::clifford_torus::<f64>(1, 2).unwrap();
    let imm = e.immersion.clone();
    // ‖B‖² = 2 for the minimal Clifford torus in S³ and k = 3
    let c = octonionic_laplacian_check(&imm, &imm.domain().center()).unwrap();
    assert!((c.f - 4.0).abs() <= 1e-10);
    assert!(c.harmonic_residual <= 1e-8);
}

/// `⟨x̄·η(x), v⟩` as a chart jet.
fn pairing_jet(
    imm: &gaussmap::Immersion,
    pj: &gaussmap::manifold::PointJets<f64>,
    v: &[f64],
) -> gaussmap::Result<Jet3<f64>> {
    let d = pj.point.len();
    let zero = Jet3::constant(0.0, d);
    let pad = |mut w: Vec<Jet3<f64>>| {
        w.resize(8, zero.clone());
        w
    };
    let eta = imm.hypersurface_normal()?.field().jets(pj)?;
    let x = CDNumber::new(pad(pj.position.clone()))?;
    let g = cd_mul(&cd_conj(&x), &CDNumber::new(pad(eta))?)?;
    let mut acc = zero.clone();
    for (gi, vi) in g.coeffs().iter().zip(v) {
        acc = &acc + &gi.scale(*vi);
    }
    Ok(acc)
}

#[test]
fn hemisphere_superharmonicity() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for name in ["clifford(1,2)", "circles(0.6)", "umbilical(0.5,2)", "htorus(0.5,3)"] {
        let e = catalog::by_name::<f64>(name).unwrap();
        let imm = e.immersion.clone();
        let v: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let plan = SamplePlan::seeded(imm.domain(), 42, 16, false);
        for p in &plan.points {
            let gamma = octonionic_gauss_map(&imm, p).unwrap();
            let pairing = gamma.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>();
            let f = octonionic_laplacian_check(&imm, p).unwrap().f;
            // Δ⟨γ, v⟩ through the octonionic Gauss map's chart jets
            let lap = scalar_laplacian(
                &imm,
                View::Sphere,
                &|pj| pairing_jet(&imm, pj, &v),
                p,
            )
            .unwrap();
            assert!((lap + f * pairing).abs() <= 1e-8, "{name}: {lap} vs {}", -f * pairing);
        }
    }
}
