//! Truncated third-order forward-mode differentiation in `d` chart variables.
//!
//! A [`Jet3`] stores the value of a scalar function together with all of its
//! partial derivatives up to order three at a single point.
//!
//! # Storage convention
//!
//! Coefficients are **raw derivatives** `∂^α f` (not Taylor coefficients
//! `∂^α f / α!`). Slots are ordered degree-major; within one degree a slot is
//! identified by its nondecreasing tuple of variable indices and tuples are
//! sorted lexicographically. For `d = 2` the order is
//!
//! ```text
//! f, ∂u, ∂v, ∂uu, ∂uv, ∂vv, ∂uuu, ∂uuv, ∂uvv, ∂vvv
//! ```
//!
//! A jet also carries a *valid order* `0..=3`. Differentiating a jet lowers
//! it by one and every binary operation keeps the minimum of its operands, so
//! derivatives that were never computed cannot be read back by accident.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Largest supported number of chart variables.
pub const MAX_DIM: usize = 8;

/// Number of coefficients of an order-3 jet in `d` variables: `C(d+3, 3)`.
pub const fn coeff_count(d: usize) -> usize {
    (d + 3) * (d + 2) * (d + 1) / 6
}

struct Layout {
    dim: usize,
    degree: Vec<u8>,
    idx1: Vec<usize>,
    idx2: Vec<usize>,
    idx3: Vec<usize>,
    /// `(out, a, b, multinomial)` terms of the Leibniz rule.
    mul_terms: Vec<(usize, usize, usize, f64)>,
    /// For each variable `i`: `(dst, src)` pairs with `src = dst + e_i`.
    shift: Vec<Vec<(usize, usize)>>,
}

fn binom(n: u8, k: u8) -> f64 {
    let mut r = 1.0;
    for t in 0..k {
        r = r * f64::from(n - t) / f64::from(t + 1);
    }
    r
}

impl Layout {
    fn build(dim: usize) -> Layout {
        let mut tuples: Vec<Vec<usize>> = vec![vec![]];
        for i in 0..dim {
            tuples.push(vec![i]);
        }
        for i in 0..dim {
            for j in i..dim {
                tuples.push(vec![i, j]);
            }
        }
        for i in 0..dim {
            for j in i..dim {
                for k in j..dim {
                    tuples.push(vec![i, j, k]);
                }
            }
        }
        debug_assert_eq!(tuples.len(), coeff_count(dim));

        let exps: Vec<Vec<u8>> = tuples
            .iter()
            .map(|t| {
                let mut e = vec![0u8; dim];
                for &v in t {
                    e[v] += 1;
                }
                e
            })
            .collect();
        let slot_of: HashMap<Vec<u8>, usize> =
            exps.iter().enumerate().map(|(s, e)| (e.clone(), s)).collect();
        let degree = tuples.iter().map(|t| t.len() as u8).collect();

        let sorted_slot = |mut t: Vec<usize>| {
            t.sort_unstable();
            let mut e = vec![0u8; dim];
            for v in t {
                e[v] += 1;
            }
            slot_of[&e]
        };
        let mut idx1 = vec![0; dim];
        let mut idx2 = vec![0; dim * dim];
        let mut idx3 = vec![0; dim * dim * dim];
        for i in 0..dim {
            idx1[i] = sorted_slot(vec![i]);
            for j in 0..dim {
                idx2[i * dim + j] = sorted_slot(vec![i, j]);
                for k in 0..dim {
                    idx3[(i * dim + j) * dim + k] = sorted_slot(vec![i, j, k]);
                }
            }
        }

        let mut mul_terms = Vec::new();
        for (out, g) in exps.iter().enumerate() {
            for (a, alpha) in exps.iter().enumerate() {
                if alpha.iter().zip(g).any(|(x, y)| x > y) {
                    continue;
                }
                let beta: Vec<u8> = g.iter().zip(alpha).map(|(x, y)| x - y).collect();
                let b = slot_of[&beta];
                let coef: f64 = g.iter().zip(alpha).map(|(&x, &y)| binom(x, y)).product();
                mul_terms.push((out, a, b, coef));
            }
        }

        let mut shift = vec![Vec::new(); dim];
        for (i, sh) in shift.iter_mut().enumerate() {
            for (dst, e) in exps.iter().enumerate() {
                if e.iter().map(|&x| x as usize).sum::<usize>() >= 3 {
                    continue;
                }
                let mut up = e.clone();
                up[i] += 1;
                sh.push((dst, slot_of[&up]));
            }
        }

        Layout {
            dim,
            degree,
            idx1,
            idx2,
            idx3,
            mul_terms,
            shift,
        }
    }
}

fn layout(dim: usize) -> &'static Layout {
    static LAYOUTS: OnceLock<Vec<Layout>> = OnceLock::new();
    let all = LAYOUTS.get_or_init(|| (1..=MAX_DIM).map(Layout::build).collect());
    assert!(
        (1..=MAX_DIM).contains(&dim),
        "jet dimension {dim} outside 1..={MAX_DIM}"
    );
    &all[dim - 1]
}

/// Value and raw partial derivatives through order three of a scalar
/// function of `dim` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct Jet3<S> {
    dim: usize,
    order: u8,
    coeffs: Vec<S>,
}

/// Binary operations accepted by [`arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

/// Unary elementary functions accepted by [`elementary`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Elementary {
    Sqrt,
    Sin,
    Cos,
    Exp,
    Reciprocal,
}

/// Seeds one jet per chart variable: jet `i` has value `values[i]` and unit
/// first derivative in slot `i`.
pub fn lift_vars<S: Real>(values: &[S]) -> Result<Vec<Jet3<S>>> {
    let d = values.len();
    if d == 0 {
        return Err(Error::Domain("lift_vars needs at least one variable".into()));
    }
    if d > MAX_DIM {
        return Err(Error::Domain(format!(
            "{d} chart variables exceed the supported maximum {MAX_DIM}"
        )));
    }
    Ok(values
        .iter()
        .enumerate()
        .map(|(i, &v)| Jet3::variable(v, i, d))
        .collect())
}

/// Dimension-checked binary arithmetic.
pub fn arith<S: Real>(a: &Jet3<S>, b: &Jet3<S>, op: ArithOp) -> Result<Jet3<S>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.try_div(b)?,
    })
}

/// Applies one of the supported elementary functions.
pub fn elementary<S: Real>(a: &Jet3<S>, f: Elementary) -> Result<Jet3<S>> {
    match f {
        Elementary::Sqrt => a.sqrt(),
        Elementary::Sin => Ok(a.sin()),
        Elementary::Cos => Ok(a.cos()),
        Elementary::Exp => Ok(a.exp()),
        Elementary::Reciprocal => a.recip(),
    }
}

impl<S: Real> Jet3<S> {
    /// A constant (all derivatives zero), valid through order three.
    pub fn constant(value: S, dim: usize) -> Self {
        let n = coeff_count(layout(dim).dim);
        let mut coeffs = vec![S::zero(); n];
        coeffs[0] = value;
        Jet3 {
            dim,
            order: 3,
            coeffs,
        }
    }

    /// The coordinate function `x_i` evaluated at `value`.
    pub fn variable(value: S, i: usize, dim: usize) -> Self {
        assert!(i < dim, "variable index {i} out of range for dim {dim}");
        let mut j = Self::constant(value, dim);
        j.coeffs[layout(dim).idx1[i]] = S::one();
        j
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Highest derivative order whose coefficients are meaningful.
    pub fn order(&self) -> u8 {
        self.order
    }

    /// Raw coefficient slice in canonical slot order.
    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn value(&self) -> S {
        self.coeffs[0]
    }

    fn need(&self, k: u8) {
        assert!(
            self.order >= k,
            "jet valid through order {} queried at order {k}",
            self.order
        );
    }

    /// `∂f/∂x_i`.
    pub fn d1(&self, i: usize) -> S {
        self.need(1);
        self.coeffs[layout(self.dim).idx1[i]]
    }

    /// `∂²f/∂x_i∂x_j`.
    pub fn d2(&self, i: usize, j: usize) -> S {
        self.need(2);
        self.coeffs[layout(self.dim).idx2[i * self.dim + j]]
    }

    /// `∂³f/∂x_i∂x_j∂x_k`.
    pub fn d3(&self, i: usize, j: usize, k: usize) -> S {
        self.need(3);
        let d = self.dim;
        self.coeffs[layout(d).idx3[(i * d + j) * d + k]]
    }

    pub fn gradient(&self) -> Vec<S> {
        (0..self.dim).map(|i| self.d1(i)).collect()
    }

    /// The jet of `∂f/∂x_i`, valid through one order less.
    pub fn partial(&self, i: usize) -> Result<Self> {
        if self.order == 0 {
            return Err(Error::InsufficientOrder { have: 0, need: 1 });
        }
        if i >= self.dim {
            return Err(Error::Domain(format!(
                "partial index {i} out of range for dim {}",
                self.dim
            )));
        }
        let lay = layout(self.dim);
        let mut coeffs = vec![S::zero(); self.coeffs.len()];
        for &(dst, src) in &lay.shift[i] {
            if lay.degree[dst] < self.order {
                coeffs[dst] = self.coeffs[src];
            }
        }
        Ok(Jet3 {
            dim: self.dim,
            order: self.order - 1,
            coeffs,
        })
    }

    /// Drops coefficients above `order`.
    pub fn truncated(&self, order: u8) -> Self {
        let order = order.min(self.order);
        let lay = layout(self.dim);
        let mut out = self.clone();
        out.order = order;
        for (c, &deg) in out.coeffs.iter_mut().zip(&lay.degree) {
            if deg > order {
                *c = S::zero();
            }
        }
        out
    }

    pub fn scale(&self, s: S) -> Self {
        Jet3 {
            dim: self.dim,
            order: self.order,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
    }

    pub fn add_scalar(&self, s: S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0] + s;
        out
    }

    fn check_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "jet dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }

    fn zip_with(&self, other: &Self, f: impl Fn(S, S) -> S) -> Self {
        self.check_dim(other);
        let order = self.order.min(other.order);
        let lay = layout(self.dim);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .zip(&lay.degree)
            .map(|((&a, &b), &deg)| if deg > order { S::zero() } else { f(a, b) })
            .collect();
        Jet3 {
            dim: self.dim,
            order,
            coeffs,
        }
    }

    fn leibniz(&self, other: &Self) -> Self {
        self.check_dim(other);
        let order = self.order.min(other.order);
        let lay = layout(self.dim);
        let mut coeffs = vec![S::zero(); self.coeffs.len()];
        for &(out, a, b, c) in &lay.mul_terms {
            if lay.degree[out] > order {
                continue;
            }
            coeffs[out] = coeffs[out] + S::lit(c) * self.coeffs[a] * other.coeffs[b];
        }
        Jet3 {
            dim: self.dim,
            order,
            coeffs,
        }
    }

    /// `g(self)` for a univariate `g` given its derivatives `[g, g', g'', g''']`
    /// at `self.value()`.
    fn compose(&self, g: [S; 4]) -> Self {
        let mut delta = self.clone();
        delta.coeffs[0] = S::zero();
        let d2 = delta.leibniz(&delta);
        let d3 = d2.leibniz(&delta);
        let half = S::lit(0.5);
        let sixth = S::lit(1.0 / 6.0);
        let mut out = delta.scale(g[1]);
        for ((o, &b), &c) in out.coeffs.iter_mut().zip(&d2.coeffs).zip(&d3.coeffs) {
            *o = *o + g[2] * half * b + g[3] * sixth * c;
        }
        out.coeffs[0] = g[0];
        out
    }

    pub fn recip(&self) -> Result<Self> {
        let x = self.value();
        if x == S::zero() || !x.is_finite() {
            return Err(Error::SingularJet(format!("reciprocal of value {x}")));
        }
        let r = S::one() / x;
        let r2 = r * r;
        Ok(self.compose([r, -r2, S::lit(2.0) * r2 * r, S::lit(-6.0) * r2 * r2]))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        let inv = other.recip()?;
        Ok(self * &inv)
    }

    pub fn sqrt(&self) -> Result<Self> {
        let x = self.value();
        if x <= S::zero() || !x.is_finite() {
            return Err(Error::Domain(format!("sqrt of nonpositive value {x}")));
        }
        let s = x.sqrt();
        let d1 = S::lit(0.5) / s;
        let d2 = -d1 / (S::lit(2.0) * x);
        let d3 = S::lit(-1.5) * d2 / x;
        Ok(self.compose([s, d1, d2, d3]))
    }

    pub fn sin(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Self {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(&self) -> Self {
        let e = self.value().exp();
        self.compose([e, e, e, e])
    }

    /// Four-quadrant arctangent of `y / x`.
    pub fn atan2(y: &Self, x: &Self) -> Result<Self> {
        y.check_dim(x);
        let (y0, x0) = (y.value(), x.value());
        let r2 = x0 * x0 + y0 * y0;
        if r2 == S::zero() {
            return Err(Error::Domain("atan2 at the origin".into()));
        }
        // atan2(y, x) = θ0 + atan(u), u = (x0 y − y0 x) / (x0 x + y0 y), u(p) = 0
        let num = &y.scale(x0) - &x.scale(y0);
        let den = &x.scale(x0) + &y.scale(y0);
        let u = num.try_div(&den)?;
        let atan = u.compose([S::zero(), S::one(), S::zero(), S::lit(-2.0)]);
        Ok(atan.add_scalar(y0.atan2(x0)))
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $body:expr) => {
        impl<S: Real> $tr<&Jet3<S>> for &Jet3<S> {
            type Output = Jet3<S>;
            fn $m(self, rhs: &Jet3<S>) -> Jet3<S> {
                $body(self, rhs)
            }
        }
        impl<S: Real> $tr<Jet3<S>> for Jet3<S> {
            type Output = Jet3<S>;
            fn $m(self, rhs: Jet3<S>) -> Jet3<S> {
                $body(&self, &rhs)
            }
        }
        impl<S: Real> $tr<&Jet3<S>> for Jet3<S> {
            type Output = Jet3<S>;
            fn $m(self, rhs: &Jet3<S>) -> Jet3<S> {
                $body(&self, rhs)
            }
        }
        impl<S: Real> $tr<Jet3<S>> for &Jet3<S> {
            type Output = Jet3<S>;
            fn $m(self, rhs: Jet3<S>) -> Jet3<S> {
                $body(self, &rhs)
            }
        }
    };
}

binop!(Add, add, |a: &Jet3<S>, b: &Jet3<S>| a.zip_with(b, |x, y| x + y));
binop!(Sub, sub, |a: &Jet3<S>, b: &Jet3<S>| a.zip_with(b, |x, y| x - y));
binop!(Mul, mul, |a: &Jet3<S>, b: &Jet3<S>| a.leibniz(b));

impl<S: Real> Neg for Jet3<S> {
    type Output = Jet3<S>;
    fn neg(self) -> Jet3<S> {
        self.scale(-S::one())
    }
}

impl<S: Real> Neg for &Jet3<S> {
    type Output = Jet3<S>;
    fn neg(self) -> Jet3<S> {
        self.scale(-S::one())
    }
}

/// Euclidean dot product of two jet-valued vectors.
pub fn dot<S: Real>(a: &[Jet3<S>], b: &[Jet3<S>]) -> Jet3<S> {
    assert_eq!(a.len(), b.len());
    let mut acc = &a[0] * &b[0];
    for (x, y) in a.iter().zip(b).skip(1) {
        acc = acc + x * y;
    }
    acc
}

/// Values of a jet-valued vector.
pub fn values<S: Real>(v: &[Jet3<S>]) -> Vec<S> {
    v.iter().map(Jet3::value).collect()
}
