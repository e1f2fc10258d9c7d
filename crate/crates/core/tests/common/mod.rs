//! Random compositions of the jet operation set and a finite-difference
//! oracle for their derivatives.

use gaussmap::jets::{arith, elementary, lift_vars, ArithOp, Elementary, Jet3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Random expression over the jet operation set. Divisions and square
/// roots are guarded so every node stays away from its singular set.
#[derive(Clone, Debug)]
pub enum Expr {
    Var(usize),
    Const(f64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// `a / (2 + sin b)`
    Div(Box<Expr>, Box<Expr>),
    Sin(Box<Expr>),
    Cos(Box<Expr>),
    /// `exp(a / 4)`
    Exp(Box<Expr>),
    /// `sqrt(1 + a²)`
    Sqrt(Box<Expr>),
}

pub fn random_expr(rng: &mut ChaCha8Rng, d: usize, depth: u32) -> Expr {
    if depth == 0 || rng.gen_bool(0.2) {
        return if rng.gen_bool(0.75) {
            Expr::Var(rng.gen_range(0..d))
        } else {
            Expr::Const(rng.gen_range(-2.0..2.0))
        };
    }
    let op = rng.gen_range(0..8);
    let mut sub = || Box::new(random_expr(rng, d, depth - 1));
    match op {
        0 => Expr::Add(sub(), sub()),
        1 => Expr::Sub(sub(), sub()),
        2 => Expr::Mul(sub(), sub()),
        3 => Expr::Div(sub(), sub()),
        4 => Expr::Sin(sub()),
        5 => Expr::Cos(sub()),
        6 => Expr::Exp(sub()),
        _ => Expr::Sqrt(sub()),
    }
}

pub fn eval_f(e: &Expr, x: &[f64]) -> f64 {
    match e {
        Expr::Var(i) => x[*i],
        Expr::Const(c) => *c,
        Expr::Add(a, b) => eval_f(a, x) + eval_f(b, x),
        Expr::Sub(a, b) => eval_f(a, x) - eval_f(b, x),
        Expr::Mul(a, b) => eval_f(a, x) * eval_f(b, x),
        Expr::Div(a, b) => eval_f(a, x) / (2.0 + eval_f(b, x).sin()),
        Expr::Sin(a) => eval_f(a, x).sin(),
        Expr::Cos(a) => eval_f(a, x).cos(),
        Expr::Exp(a) => (eval_f(a, x) / 4.0).exp(),
        Expr::Sqrt(a) => (1.0 + eval_f(a, x).powi(2)).sqrt(),
    }
}

pub fn eval_j(e: &Expr, v: &[Jet3<f64>]) -> Jet3<f64> {
    let d = v.len();
    let bin = |a: &Expr, b: &Expr, op| arith(&eval_j(a, v), &eval_j(b, v), op).unwrap();
    let el = |a: &Jet3<f64>, f| elementary(a, f).unwrap();
    match e {
        Expr::Var(i) => v[*i].clone(),
        Expr::Const(c) => Jet3::constant(*c, d),
        Expr::Add(a, b) => bin(a, b, ArithOp::Add),
        Expr::Sub(a, b) => bin(a, b, ArithOp::Sub),
        Expr::Mul(a, b) => bin(a, b, ArithOp::Mul),
        Expr::Div(a, b) => {
            let den = el(&eval_j(b, v), Elementary::Sin).add_scalar(2.0);
            arith(&eval_j(a, v), &den, ArithOp::Div).unwrap()
        }
        Expr::Sin(a) => el(&eval_j(a, v), Elementary::Sin),
        Expr::Cos(a) => el(&eval_j(a, v), Elementary::Cos),
        Expr::Exp(a) => el(&eval_j(a, v).scale(0.25), Elementary::Exp),
        Expr::Sqrt(a) => {
            let j = eval_j(a, v);
            let s = arith(&j, &j, ArithOp::Mul).unwrap().add_scalar(1.0);
            el(&s, Elementary::Sqrt)
        }
    }
}

/// Central difference along each listed axis in turn.
pub fn fd(f: &dyn Fn(&[f64]) -> f64, x: &[f64], axes: &[usize], h: f64) -> f64 {
    match axes.split_first() {
        None => f(x),
        Some((&i, rest)) => {
            let mut xp = x.to_vec();
            let mut xm = x.to_vec();
            xp[i] += h;
            xm[i] -= h;
            (fd(f, &xp, rest, h) - fd(f, &xm, rest, h)) / (2.0 * h)
        }
    }
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}

/// Worst relative error of orders 1, 2 and 3 over `cases` random
/// compositions of one to three variables.
pub fn jet_oracle_errors(seed: u64, cases: usize) -> [f64; 3] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = [0.0f64; 3];
    for case in 0..cases {
        let d = 1 + case % 3;
        let e = random_expr(&mut rng, d, 4);
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let jet = eval_j(&e, &lift_vars(&x).unwrap());
        let f = |y: &[f64]| eval_f(&e, y);
        assert!((jet.value() - f(&x)).abs() <= 1e-13 * f(&x).abs().max(1.0));
        for i in 0..d {
            worst[0] = worst[0].max(rel_err(jet.d1(i), fd(&f, &x, &[i], 1e-4)));
            for j in 0..d {
                worst[1] = worst[1].max(rel_err(jet.d2(i, j), fd(&f, &x, &[i, j], 1e-3)));
                for k in 0..d {
                    worst[2] = worst[2].max(rel_err(jet.d3(i, j, k), fd(&f, &x, &[i, j, k], 1e-3)));
                }
            }
        }
    }
    worst
}
