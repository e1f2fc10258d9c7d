//! Cayley–Dickson algebras `ℝ → ℂ → ℍ → 𝕆` and the octonionic Gauss map.
//!
//! Multiplication follows the doubling recursion
//!
//! ```text
//! (x1, x2)·(y1, y2) = (x1 y1 − ȳ2 x2,  y2 x1 + x2 ȳ1),   conj(x1, x2) = (x̄1, −x2)
//! ```
//!
//! on the standard coordinate basis `e_0 = 1, e_1, …`. The induced octonion
//! table (row `a`, column `b`, entry `e_a·e_b`) is
//!
//! ```text
//!      e0  e1  e2  e3  e4  e5  e6  e7
//! e0  +e0 +e1 +e2 +e3 +e4 +e5 +e6 +e7
//! e1  +e1 -e0 +e3 -e2 +e5 -e4 -e7 +e6
//! e2  +e2 -e3 -e0 +e1 +e6 +e7 -e4 -e5
//! e3  +e3 +e2 -e1 -e0 +e7 -e6 +e5 -e4
//! e4  +e4 -e5 -e6 -e7 -e0 +e1 +e2 +e3
//! e5  +e5 +e4 -e7 +e6 -e1 -e0 -e3 +e2
//! e6  +e6 +e7 +e4 -e5 -e2 +e3 -e0 -e1
//! e7  +e7 -e6 +e5 +e4 -e3 -e2 +e1 -e0
//! ```
//!
//! and is frozen in `tests/fixtures/octonion_table.txt`.

use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::jets::Jet3;
use crate::linalg::{self, Matrix};
use crate::manifold::{frame_at, AmbientSpace, Immersion, View};
use crate::scalar::Real;

/// Highest supported doubling level (octonions).
pub const MAX_LEVEL: u32 = 3;

/// Coefficient ring for the recursion: reals, integers or jets.
pub trait Ring:
    Clone + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<T> Ring for T where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T>
{
}

/// Element of the level-`n` algebra on `ℝ^{2^n}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CDNumber<T> {
    coeffs: Vec<T>,
}

impl<T: Ring> CDNumber<T> {
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        let len = coeffs.len();
        if !len.is_power_of_two() || len > 1 << MAX_LEVEL {
            return Err(Error::Contract(format!(
                "{len} coefficients do not form a Cayley–Dickson level 0..={MAX_LEVEL}"
            )));
        }
        Ok(CDNumber { coeffs })
    }

    pub fn level(&self) -> u32 {
        self.coeffs.len().trailing_zeros()
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    /// Real part (first coordinate).
    pub fn re(&self) -> T {
        self.coeffs[0].clone()
    }
}

impl<S: Real> CDNumber<S> {
    /// Basis element `e_k` of level `level`.
    pub fn basis(level: u32, k: usize) -> Result<Self> {
        let mut c = vec![S::zero(); 1 << level];
        if k >= c.len() {
            return Err(Error::Contract(format!("basis index {k} out of range")));
        }
        c[k] = S::one();
        CDNumber::new(c)
    }

    pub fn one(level: u32) -> Result<Self> {
        Self::basis(level, 0)
    }
}

fn mul_rec<T: Ring>(x: &[T], y: &[T]) -> Vec<T> {
    if x.len() == 1 {
        return vec![x[0].clone() * y[0].clone()];
    }
    let h = x.len() / 2;
    let (x1, x2) = x.split_at(h);
    let (y1, y2) = y.split_at(h);
    let a = mul_rec(x1, y1);
    let b = mul_rec(&conj_rec(y2), x2);
    let c = mul_rec(y2, x1);
    let d = mul_rec(x2, &conj_rec(y1));
    a.into_iter()
        .zip(b)
        .map(|(p, q)| p - q)
        .chain(c.into_iter().zip(d).map(|(p, q)| p + q))
        .collect()
}

fn conj_rec<T: Ring>(x: &[T]) -> Vec<T> {
    if x.len() == 1 {
        return vec![x[0].clone()];
    }
    let h = x.len() / 2;
    let mut out = conj_rec(&x[..h]);
    out.extend(x[h..].iter().map(|c| -c.clone()));
    out
}

/// Product by the doubling recursion.
pub fn cd_mul<T: Ring>(x: &CDNumber<T>, y: &CDNumber<T>) -> Result<CDNumber<T>> {
    if x.coeffs.len() != y.coeffs.len() {
        return Err(Error::Contract(format!(
            "level mismatch: {} vs {}",
            x.level(),
            y.level()
        )));
    }
    Ok(CDNumber {
        coeffs: mul_rec(&x.coeffs, &y.coeffs),
    })
}

pub fn cd_conj<T: Ring>(x: &CDNumber<T>) -> CDNumber<T> {
    CDNumber {
        coeffs: conj_rec(&x.coeffs),
    }
}

/// `‖x‖ = sqrt(x·x̄)`; the product `x·x̄` is real.
pub fn cd_norm<S: Real>(x: &CDNumber<S>) -> S {
    let p = mul_rec(&x.coeffs, &conj_rec(&x.coeffs));
    p[0].max(S::zero()).sqrt()
}

/// `x̄ / ‖x‖²`.
pub fn cd_inv<S: Real>(x: &CDNumber<S>) -> Result<CDNumber<S>> {
    let n2 = cd_norm(x).powi(2);
    if !(n2 > S::zero()) {
        return Err(Error::Singular("inverse of the zero element".into()));
    }
    Ok(CDNumber {
        coeffs: conj_rec(&x.coeffs).into_iter().map(|c| c / n2).collect(),
    })
}

/// `L_x`: column `i` is `x·e_i`.
pub fn left_translation_matrix<S: Real>(x: &CDNumber<S>) -> Matrix<S> {
    translation(x, true)
}

/// `R_x`: column `i` is `e_i·x`.
pub fn right_translation_matrix<S: Real>(x: &CDNumber<S>) -> Matrix<S> {
    translation(x, false)
}

fn translation<S: Real>(x: &CDNumber<S>, left: bool) -> Matrix<S> {
    let m = x.coeffs.len();
    let cols: Vec<Vec<S>> = (0..m)
        .map(|i| {
            let mut e = vec![S::zero(); m];
            e[i] = S::one();
            if left {
                mul_rec(&x.coeffs, &e)
            } else {
                mul_rec(&e, &x.coeffs)
            }
        })
        .collect();
    linalg::transpose(&cols)
}

/// `table[a][b] = (sign, c)` with `e_a·e_b = sign·e_c`.
pub fn multiplication_table(level: u32) -> Vec<Vec<(i8, usize)>> {
    let m = 1usize << level;
    let unit = |k: usize| -> Vec<i64> {
        let mut e = vec![0; m];
        e[k] = 1;
        e
    };
    (0..m)
        .map(|a| {
            (0..m)
                .map(|b| {
                    let p = mul_rec(&unit(a), &unit(b));
                    let (c, v) = p
                        .iter()
                        .enumerate()
                        .find(|(_, v)| **v != 0)
                        .expect("basis products are signed basis elements");
                    (if *v > 0 { 1 } else { -1 }, c)
                })
                .collect()
        })
        .collect()
}

/// Text rendering of [`multiplication_table`], one row per line.
pub fn format_table(table: &[Vec<(i8, usize)>]) -> String {
    let mut out = String::new();
    for row in table {
        let cells: Vec<String> = row
            .iter()
            .map(|(s, c)| format!("{}e{c}", if *s > 0 { '+' } else { '-' }))
            .collect();
        out.push_str(&cells.join(" "));
        out.push('\n');
    }
    out
}

fn check_octonionic_target<S: Real>(imm: &Immersion<S>) -> Result<usize> {
    match imm.ambient() {
        AmbientSpace::Sphere(k) if (3..=7).contains(&k) && imm.n() + 1 == k => Ok(k),
        other => Err(Error::Contract(format!(
            "the octonionic Gauss map needs a hypersurface of S^k, 3 ≤ k ≤ 7; got a {}-manifold in {other}",
            imm.n()
        ))),
    }
}

fn pad8<T: Clone>(v: Vec<T>, zero: T) -> Vec<T> {
    let mut v = v;
    v.resize(8, zero);
    v
}

/// Jets of `γ(x) = x̄·η(x) ∈ ℝ⁸` for the inclusion `S^k ⊂ S⁷` that zeroes
/// the trailing coordinates. `x̄ = x^{-1}` on the unit sphere.
fn gauss_jets<S: Real>(imm: &Immersion<S>, p: &[S]) -> Result<Vec<Jet3<S>>> {
    let pj = imm.jets_at(p)?;
    let nu = imm.hypersurface_normal()?;
    let eta = nu.field().jets(&pj)?;
    let d = p.len();
    let zero = Jet3::constant(S::zero(), d);
    let x = CDNumber::new(pad8(pj.position.clone(), zero.clone()))?;
    let e = CDNumber::new(pad8(eta, zero))?;
    Ok(cd_mul(&cd_conj(&x), &e)?.into_coeffs())
}

/// `γ_η(x) = x^{-1}·η(x) ∈ S⁶ ⊂ T_1 S⁷` with `η` the immersion's unit normal
/// in `S^k`.
pub fn octonionic_gauss_map<S: Real>(imm: &Immersion<S>, p: &[S]) -> Result<Vec<S>> {
    check_octonionic_target(imm)?;
    let pos = pad8(imm.position(p)?, S::zero());
    let pj = imm.jets_at(p)?;
    let eta: Vec<S> = imm
        .hypersurface_normal()?
        .field()
        .jets(&pj)?
        .iter()
        .map(Jet3::value)
        .collect();
    let x = CDNumber::new(pos)?;
    let g = cd_mul(&cd_inv(&x)?, &CDNumber::new(pad8(eta, S::zero()))?)?;
    let g = g.into_coeffs();
    let re = g[0].abs();
    let unit = (linalg::norm(&g) - S::one()).abs();
    if re > S::lit(1e-10) || unit > S::lit(1e-10) {
        return Err(Error::Embedding(format!(
            "octonionic Gauss value leaves S⁶: |Re| = {re:e}, |‖γ‖ − 1| = {unit:e}"
        )));
    }
    Ok(g)
}

/// Result of [`octonionic_laplacian_check`].
#[derive(Clone, Debug, PartialEq)]
pub struct OctonionLaplacian<S> {
    /// `‖−Δγ − (k−1)Γ(grad H) − (‖B‖² + k − 1)γ‖`.
    pub identity_residual: S,
    /// `‖−Δγ − (‖B‖² + k − 1)γ‖`; vanishes exactly when `γ` is an eigenmap
    /// with that eigenvalue.
    pub harmonic_residual: S,
    /// `‖B‖² + k − 1`.
    pub f: S,
    /// `‖grad H‖`.
    pub grad_h: S,
}

/// Evaluates both sides of the octonionic Laplacian identity at `p`.
pub fn octonionic_laplacian_check<S: Real>(
    imm: &Immersion<S>,
    p: &[S],
) -> Result<OctonionLaplacian<S>> {
    let k = check_octonionic_target(imm)?;
    let gamma = octonionic_gauss_map(imm, p)?;
    let jets = gauss_jets(imm, p)?;
    let frame = frame_at(imm, View::Sphere, p)?;
    let lap: Vec<S> = jets.iter().map(|c| frame.laplace_beltrami_jet(c)).collect();

    let pj = imm.jets_at(p)?;
    let nu = imm.hypersurface_normal()?.field().derivs(&pj)?;
    let grad_h = frame.grad_mean_pairing(&nu);
    let b2 = frame.second_form_norm2();
    let km1 = S::from_count(k - 1);
    let f = b2 + km1;

    let x = CDNumber::new(pad8(frame.position.clone(), S::zero()))?;
    let gh = cd_mul(&cd_inv(&x)?, &CDNumber::new(pad8(grad_h.clone(), S::zero()))?)?;

    let mut harm = linalg::zeros(8);
    let mut full = linalg::zeros(8);
    for a in 0..8 {
        harm[a] = -lap[a] - f * gamma[a];
        full[a] = harm[a] - km1 * gh.coeffs()[a];
    }
    Ok(OctonionLaplacian {
        identity_residual: linalg::norm(&full),
        harmonic_residual: linalg::norm(&harm),
        f,
        grad_h: linalg::norm(&grad_h),
    })
}
