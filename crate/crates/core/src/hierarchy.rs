//! AKNS differential polynomials `H_1..H_5`, the explicit `V_1^0`, `V_2^0`
//! matrices, and residual operators for single flows, Hirota-type combined
//! flows and the zero-curvature condition.
//!
//! Normalization: `p_{t_k} = i^k H_k(p, q)` and `q_{t_k} = (-i)^k H_k(q, p)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jet::{Jet, Scalar, C64, I};
use crate::solutions::SolutionSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reduction {
    General,
    /// `q = -p*`
    Focusing,
    /// `q = +p*`
    Defocusing,
}

/// The pair `(p, q)` as jets in `x`, possibly with t-jet coefficients.
#[derive(Debug, Clone)]
pub struct FieldSample<S> {
    pub p: Jet<S>,
    pub q: Jet<S>,
    pub reduction: Reduction,
}

impl<S: Scalar> FieldSample<S> {
    pub fn general(p: Jet<S>, q: Jet<S>) -> Self {
        Self {
            p,
            q,
            reduction: Reduction::General,
        }
    }

    pub fn focusing(p: Jet<S>) -> Self {
        let q = -p.conj_on_real_axis();
        Self {
            p,
            q,
            reduction: Reduction::Focusing,
        }
    }

    pub fn defocusing(p: Jet<S>) -> Self {
        let q = p.conj_on_real_axis();
        Self {
            p,
            q,
            reduction: Reduction::Defocusing,
        }
    }

    pub fn with_reduction(p: Jet<S>, reduction: Reduction) -> Self {
        match reduction {
            Reduction::Focusing => Self::focusing(p),
            Reduction::Defocusing => Self::defocusing(p),
            Reduction::General => {
                let q = p.zero_like();
                Self::general(p, q)
            }
        }
    }

    pub fn order(&self) -> usize {
        self.p.order().min(self.q.order())
    }

    /// `(q, p)`, the argument order of the second component's flow.
    pub fn swapped(&self) -> Self {
        Self {
            p: self.q.clone(),
            q: self.p.clone(),
            reduction: self.reduction,
        }
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

/// `sum coeff * prod(factors)` over jets.
fn poly<S: Scalar>(terms: &[(f64, &[&Jet<S>])]) -> Jet<S> {
    let mut acc: Option<Jet<S>> = None;
    for (coef, factors) in terms {
        let mut m = factors[0].clone();
        for f in &factors[1..] {
            m = &m * *f;
        }
        let m = m.scale_by(c(*coef));
        acc = Some(match acc {
            None => m,
            Some(a) => &a + &m,
        });
    }
    acc.expect("at least one term")
}

/// `H_k(p, q)` for `k = 1..=5`. Output order is the input order minus `k + 1`.
pub fn eval_h<S: Scalar>(k: usize, f: &FieldSample<S>) -> Result<Jet<S>> {
    if !(1..=5).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    let need = k + 1;
    if f.order() < need {
        return Err(Error::OrderTooLow {
            needed: need,
            got: f.order(),
        });
    }
    let pd = f.p.derivatives(need)?;
    let qd = f.q.derivatives((k - 1).max(1))?;
    let (p, p1, p2) = (&pd[0], &pd[1], &pd[2]);
    let (q, q1) = (&qd[0], &qd[1]);
    let h = match k {
        1 => poly(&[(1.0, &[p2]), (-2.0, &[p, p, q])]),
        2 => poly(&[(1.0, &[&pd[3]]), (-6.0, &[p, q, p1])]),
        3 => {
            let (p4, q2) = (&pd[4], &qd[2]);
            poly(&[
                (1.0, &[p4]),
                (-8.0, &[p, q, p2]),
                (-2.0, &[p, p, q2]),
                (-6.0, &[p1, p1, q]),
                (-4.0, &[p, p1, q1]),
                (6.0, &[p, p, p, q, q]),
            ])
        }
        4 => {
            let (p3, p5, q2) = (&pd[3], &pd[5], &qd[2]);
            poly(&[
                (1.0, &[p5]),
                (-10.0, &[p, q, p3]),
                (-20.0, &[q, p1, p2]),
                (-10.0, &[p, q1, p2]),
                (-10.0, &[p, p1, q2]),
                (-10.0, &[p1, p1, q1]),
                (30.0, &[q, q, p, p, p1]),
            ])
        }
        5 => {
            let (p3, p4, p6) = (&pd[3], &pd[4], &pd[6]);
            let (q2, q3, q4) = (&qd[2], &qd[3], &qd[4]);
            poly(&[
                (1.0, &[p6]),
                (-12.0, &[p, q, p4]),
                (-2.0, &[p, p, q4]),
                (-30.0, &[p1, q, p3]),
                (-18.0, &[p, q1, p3]),
                (-8.0, &[p, p1, q3]),
                (-50.0, &[p1, q1, p2]),
                (50.0, &[q, q, p, p, p2]),
                (-20.0, &[p2, p2, q]),
                (-22.0, &[p, q2, p2]),
                (-20.0, &[q2, p1, p1]),
                (20.0, &[q2, q, p, p, p]),
                (10.0, &[p, p, p, q1, q1]),
                (70.0, &[q, q, p, p1, p1]),
                (60.0, &[q, p, p, p1, q1]),
                (-20.0, &[q, q, q, p, p, p, p]),
            ])
        }
        _ => unreachable!(),
    };
    Ok(h)
}

/// `i^k` for integer `k >= 0`.
pub fn i_pow(k: usize) -> C64 {
    match k % 4 {
        0 => c(1.0),
        1 => I,
        2 => c(-1.0),
        _ => -I,
    }
}

/// 2×2 matrix with jet entries.
pub type Mat2<S> = [[Jet<S>; 2]; 2];

/// `U^0 = [[0, i p], [-i q, 0]]`.
pub fn u0_matrix<S: Scalar>(f: &FieldSample<S>) -> Mat2<S> {
    let z = f.p.zero_like();
    [[z.clone(), f.p.scale_by(I)], [f.q.scale_by(-I), z]]
}

/// Explicit `V_k^0` for `k = 1, 2`.
pub fn v0_matrix<S: Scalar>(k: usize, f: &FieldSample<S>) -> Result<Mat2<S>> {
    let need = match k {
        1 => 1,
        2 => 2,
        _ => return Err(Error::UnsupportedK(k)),
    };
    if f.order() < need {
        return Err(Error::OrderTooLow {
            needed: need,
            got: f.order(),
        });
    }
    let pd = f.p.derivatives(need)?;
    let qd = f.q.derivatives(need)?;
    let pq = &pd[0] * &qd[0];
    Ok(if k == 1 {
        [[pq.scale_by(-I), -&pd[1]], [-&qd[1], pq.scale_by(I)]]
    } else {
        let diag = &(&pd[1] * &qd[0]) - &(&qd[1] * &pd[0]);
        let upper = &(&pq * &pd[0]).scale_by(c(2.0) * I) - &pd[2].scale_by(I);
        let lower = &(&pq * &qd[0]).scale_by(c(-2.0) * I) + &qd[2].scale_by(I);
        [[diag.clone(), upper], [lower, -&diag]]
    })
}

fn mat_map<S: Scalar>(m: &Mat2<S>, f: impl Fn(&Jet<S>) -> Jet<S>) -> Mat2<S> {
    [[f(&m[0][0]), f(&m[0][1])], [f(&m[1][0]), f(&m[1][1])]]
}

fn mat_try_map<S: Scalar>(m: &Mat2<S>, f: impl Fn(&Jet<S>) -> Result<Jet<S>>) -> Result<Mat2<S>> {
    Ok([[f(&m[0][0])?, f(&m[0][1])?], [f(&m[1][0])?, f(&m[1][1])?]])
}

fn mat_add<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Mat2<S> {
    [
        [&a[0][0] + &b[0][0], &a[0][1] + &b[0][1]],
        [&a[1][0] + &b[1][0], &a[1][1] + &b[1][1]],
    ]
}

fn mat_sub<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Mat2<S> {
    [
        [&a[0][0] - &b[0][0], &a[0][1] - &b[0][1]],
        [&a[1][0] - &b[1][0], &a[1][1] - &b[1][1]],
    ]
}

fn mat_mul<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Mat2<S> {
    let e = |i: usize, j: usize| &(&a[i][0] * &b[0][j]) + &(&a[i][1] * &b[1][j]);
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn commutator<S: Scalar>(a: &Mat2<S>, b: &Mat2<S>) -> Mat2<S> {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

fn mat_max_value(m: &Mat2<C64>) -> f64 {
    m.iter().flatten().map(|j| j.coeff(0).norm()).fold(0.0, f64::max)
}

/// Real linear combination of flows for `i p_t + α H_1 − iβ H_2 + γ1 H_3 − iγ2 H_4 + γ3 H_5 = 0`.
///
/// Weights are real: the time substitution `t_k = s_k t` must stay on the
/// real axis for the focusing reduction to remain valid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlowCoefficients {
    pub weights: [f64; 5],
}

impl FlowCoefficients {
    /// `(α, β, γ1, γ2, γ3)`.
    pub fn new(weights: [f64; 5]) -> Result<Self> {
        if weights.iter().all(|w| *w == 0.0) {
            return Err(Error::ZeroFlowWeights);
        }
        Ok(Self { weights })
    }

    /// Coefficient `e_k` multiplying `H_k` in the combined equation.
    pub fn equation_coefficient(&self, k: usize) -> C64 {
        let w = c(self.weights[k - 1]);
        if k.is_multiple_of(2) {
            -I * w
        } else {
            w
        }
    }
}

/// Speeds `s_k` in `t_k = t_k^0 + s_k t` under which a hierarchy solution
/// solves the combined equation: `s_k = -e_k / i^{k+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeSubstitution {
    pub speeds: [f64; 5],
}

impl TimeSubstitution {
    pub fn from_weights(w: &FlowCoefficients) -> Self {
        let mut speeds = [0.0; 5];
        for (k, s) in (1..=5).zip(speeds.iter_mut()) {
            let v = -w.equation_coefficient(k) / i_pow(k + 1);
            debug_assert!(v.im.abs() < 1e-14);
            *s = v.re;
        }
        Self { speeds }
    }

    pub fn single(flow: usize) -> Self {
        let mut speeds = [0.0; 5];
        speeds[flow - 1] = 1.0;
        Self { speeds }
    }
}

/// Residual of a flow equation with its magnitude scale, so callers can
/// judge it absolutely or relative to the local field size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowResidual {
    pub residual: C64,
    /// Sum of the magnitudes of the terms being balanced.
    pub scale: f64,
}

impl FlowResidual {
    pub fn abs(&self) -> f64 {
        self.residual.norm()
    }

    pub fn relative(&self) -> f64 {
        self.residual.norm() / self.scale.max(1.0)
    }
}

/// Collapses an x-jet of t-jets to an x-jet of the `n`-th t-coefficient.
fn t_coefficient(j: &Jet<Jet<C64>>, n: usize) -> Jet<C64> {
    j.map(|inner| *inner.coeff(n))
}

fn t_slice(f: &FieldSample<Jet<C64>>, n: usize) -> FieldSample<C64> {
    FieldSample {
        p: t_coefficient(&f.p, n),
        q: t_coefficient(&f.q, n),
        reduction: f.reduction,
    }
}

/// `p_{t_k} − i^k H_k(p, q)` at `(x0, fixed times)`.
pub fn flow_residual(s: &SolutionSpec, k: usize, x0: f64) -> Result<FlowResidual> {
    if !(1..=5).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    s.check_flow(k)?;
    let f = s.eval_field_in_time(x0, k + 1, &TimeSubstitution::single(k), 1)?;
    let pt = *t_slice(&f, 1).p.coeff(0);
    let h = eval_h(k, &t_slice(&f, 0))?;
    let rhs = i_pow(k) * h.coeff(0);
    Ok(FlowResidual {
        residual: pt - rhs,
        scale: pt.norm() + rhs.norm(),
    })
}

/// Residual of the combined equation under the substitution `t_map`.
pub fn combined_flow_residual(
    s: &SolutionSpec,
    w: &FlowCoefficients,
    t_map: &TimeSubstitution,
    x0: f64,
) -> Result<FlowResidual> {
    let active: Vec<usize> = (1..=5).filter(|&k| w.weights[k - 1] != 0.0).collect();
    for &k in &active {
        s.check_flow(k)?;
    }
    let top = *active.last().expect("nonzero weights");
    let f = s.eval_field_in_time(x0, top + 1, t_map, 1)?;
    let slice = t_slice(&f, 0);
    let pt = *t_slice(&f, 1).p.coeff(0);
    let mut res = I * pt;
    let mut scale = res.norm();
    for &k in &active {
        let term = w.equation_coefficient(k) * eval_h(k, &slice)?.coeff(0);
        scale += term.norm();
        res += term;
    }
    Ok(FlowResidual { residual: res, scale })
}

/// Largest entry of `(U^0)_{t_k} − (V_k^0)_x − [V_k^0, U^0]` at `x0`, together
/// with the λ-dependent form `U_{t_k} − (V_k)_x + [U, V_k]` at `lambda` and
/// three further fixed spectral values.
pub fn zero_curvature_residual(s: &SolutionSpec, k: usize, lambda: C64, x0: f64) -> Result<f64> {
    if !(1..=2).contains(&k) {
        return Err(Error::UnsupportedK(k));
    }
    s.check_flow(k)?;
    let f = s.eval_field_in_time(x0, k + 2, &TimeSubstitution::single(k), 1)?;
    let now = t_slice(&f, 0);
    let rate = t_slice(&f, 1);
    let lambdas = [
        lambda,
        C64::new(0.37, -1.21),
        C64::new(-0.83, 0.44),
        C64::new(1.9, 0.05),
    ];
    zero_curvature_of(&now, &rate, k, &lambdas)
}

/// Zero-curvature residual given the field (`now`) and its t_k-derivative (`rate`).
pub fn zero_curvature_of(
    now: &FieldSample<C64>,
    rate: &FieldSample<C64>,
    k: usize,
    lambdas: &[C64],
) -> Result<f64> {
    let u0 = u0_matrix(now);
    let u0_t = u0_matrix(rate);
    let v1 = v0_matrix(1, now)?;
    let vk = v0_matrix(k, now)?;
    let vk_x = mat_try_map(&vk, |j| j.derivative())?;
    let base = mat_sub(&mat_sub(&u0_t, &vk_x), &commutator(&vk, &u0));
    let mut worst = mat_max_value(&base);

    let bp = now.p.base_point();
    let order = now.order();
    let j_mat = |lam: C64| -> Mat2<C64> {
        let z = Jet::constant_c(bp, order, C64::new(0.0, 0.0));
        [
            [Jet::constant_c(bp, order, -I * lam), z.clone()],
            [z, Jet::constant_c(bp, order, I * lam)],
        ]
    };
    for &lam in lambdas {
        let u = mat_add(&j_mat(lam), &u0);
        let two_lam = c(2.0) * lam;
        let v_1 = mat_add(&mat_map(&u, |e| e.scale_by(two_lam)), &v1);
        let v = if k == 1 {
            v_1
        } else {
            mat_add(&mat_map(&v_1, |e| e.scale_by(two_lam)), &vk)
        };
        let v_x = mat_try_map(&v, |j| j.derivative())?;
        let full = mat_add(&mat_sub(&u0_t, &v_x), &commutator(&u, &v));
        worst = worst.max(mat_max_value(&full));
    }
    Ok(worst)
}
