//! Appell-equation ansatz `Y = Σ γ_j λ^{g−j}`: γ coefficients, the closure
//! fit for the constants `c_k`, the curve polynomial `R(λ) = ν²`, and the
//! Baker-function and Wronskian checks.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{eval_h, FieldSample};
use crate::jet::{Jet, Scalar, C64, I};
use crate::solutions::SolutionSpec;

/// `γ_g` needs `H_{g−1}`, and only `H_1..H_5` are available.
pub const MAX_GENUS: usize = 6;
/// Explicit sample points with `|p|` below this are rejected.
pub const P_FLOOR: f64 = 1e-6;
/// Generated sample points keep well away from zeros of `p`.
pub const GENERATED_P_FLOOR: f64 = 0.1;
pub const Y_FLOOR: f64 = 1e-8;
/// Smallest accepted `σ_min / σ_max` of the column-equilibrated closure system.
pub const RANK_TOL: f64 = 1e-9;
/// `x_spread` above this means the constants or the genus are wrong.
pub const SPREAD_LIMIT: f64 = 1e-3;
pub const DEFAULT_FIT_TOL: f64 = 1e-7;
pub const DEFAULT_SEED: u64 = 20_160_901;
pub const SAMPLE_INTERVAL: (f64, f64) = (-2.0, 2.0);

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn half_i_pow(j: usize) -> C64 {
    (I * 0.5).powu(j as u32)
}

/// Jet order needed for genus `g`: `H_{g−1}` consumes `g` derivatives,
/// `Y_xxx` three more, plus one spare.
pub fn required_order(g: usize) -> usize {
    g + 4
}

fn check_genus(g: usize) -> Result<()> {
    if g > MAX_GENUS {
        Err(Error::UnsupportedGenus(g))
    } else {
        Ok(())
    }
}

/// `[H_{−1}, H_0, H_1, …, H_{g−1}]` with `H_{−1} = p`, `H_0 = p_x`.
fn extended_h(f: &FieldSample<C64>, g: usize) -> Result<Vec<Jet<C64>>> {
    let need = required_order(g);
    if f.order() < need {
        return Err(Error::OrderTooLow {
            needed: need,
            got: f.order(),
        });
    }
    let mut hs = vec![f.p.clone(), f.p.derivative()?];
    for k in 1..g {
        hs.push(eval_h(k, f)?);
    }
    Ok(hs)
}

/// `γ_0..γ_g` as x-jets.
#[derive(Debug, Clone)]
pub struct GammaSequence {
    pub g: usize,
    pub gammas: Vec<Jet<C64>>,
}

impl GammaSequence {
    /// `Y(λ)` as an x-jet.
    pub fn y_at(&self, lambda: C64) -> Jet<C64> {
        let mut acc = self.gammas[0].clone();
        for gj in &self.gammas[1..] {
            acc = acc.scale_by(lambda) + gj;
        }
        acc
    }

    /// `n`-th x-derivative of every `γ_j` at the base point.
    pub fn derivative_values(&self, n: usize) -> Vec<C64> {
        self.gammas.iter().map(|g| g.derivative_at(n)).collect()
    }
}

/// `γ_j = γ_j^0 + Σ_k c_k γ_j^k`, linear in the unknown constants.
#[derive(Debug, Clone)]
pub struct SymbolicGammas {
    pub g: usize,
    pub base: Vec<Jet<C64>>,
    /// `parts[j][k − 1] = γ_j^k`; zero for `k > j`.
    pub parts: Vec<Vec<Jet<C64>>>,
}

impl SymbolicGammas {
    pub fn assemble(&self, consts: &[C64]) -> GammaSequence {
        let gammas = self
            .base
            .iter()
            .zip(&self.parts)
            .map(|(b, parts)| {
                let mut acc = b.clone();
                for (ck, part) in consts.iter().zip(parts) {
                    acc = acc + part.scale_by(*ck);
                }
                acc
            })
            .collect();
        GammaSequence { g: self.g, gammas }
    }
}

/// Decomposition `γ_j^0 = (i/2)^j H_{j−1}`, `γ_j^k = (i/2)^j H_{j−1−k}`.
pub fn build_gammas_symbolic(f: &FieldSample<C64>, g: usize) -> Result<SymbolicGammas> {
    check_genus(g)?;
    let hs = extended_h(f, g)?;
    let zero = f.p.zero_like();
    let mut base = Vec::with_capacity(g + 1);
    let mut parts = Vec::with_capacity(g + 1);
    for j in 0..=g {
        let w = half_i_pow(j);
        base.push(hs[j].scale_by(w));
        parts.push(
            (1..=g)
                .map(|k| {
                    if k <= j {
                        hs[j - k].scale_by(w)
                    } else {
                        zero.clone()
                    }
                })
                .collect(),
        );
    }
    Ok(SymbolicGammas { g, base, parts })
}

/// `γ_j = (i/2)^j Σ_{k=0}^{j} c_k H_{j−1−k}` with `c_0 = 1`.
pub fn build_gammas(f: &FieldSample<C64>, g: usize, consts: &[C64]) -> Result<GammaSequence> {
    if consts.len() != g {
        return Err(Error::InvalidArgument(format!(
            "genus {g} needs {g} constants, got {}",
            consts.len()
        )));
    }
    Ok(build_gammas_symbolic(f, g)?.assemble(consts))
}

/// Pointwise coefficients of the closure operators at the base point.
#[derive(Debug, Clone, Copy)]
struct Closure {
    /// `p_x / p`
    px_p: C64,
    /// `(p_xx p − 3 p_x²) / p²`
    s2: C64,
    /// `4pq + s2`
    v: C64,
    /// `2(p q_x − q p_x)`
    w: C64,
}

impl Closure {
    fn at(f: &FieldSample<C64>) -> Result<Self> {
        let p = f.p.derivative_at(0);
        if p.norm() < P_FLOOR {
            return Err(Error::SampleNearZeroOfP {
                x: f.p.base_point(),
                magnitude: p.norm(),
            });
        }
        let (p1, p2) = (f.p.derivative_at(1), f.p.derivative_at(2));
        let (q, q1) = (f.q.derivative_at(0), f.q.derivative_at(1));
        let s2 = (p2 * p - 3.0 * p1 * p1) / (p * p);
        Ok(Self {
            px_p: p1 / p,
            s2,
            v: 4.0 * p * q + s2,
            w: 2.0 * (p * q1 - q * p1),
        })
    }

    /// `L[γ] = γ''' − 3(p_x/p)γ'' − vγ' − wγ` and the sum of its term magnitudes.
    fn l(&self, d: [C64; 4]) -> (C64, f64) {
        let t = [d[3], -3.0 * self.px_p * d[2], -self.v * d[1], -self.w * d[0]];
        (t.iter().sum(), t.iter().map(|z| z.norm()).sum())
    }

    /// `M[γ] = −4i(p_x/p)γ' − 2i s2 γ`.
    fn m(&self, d: [C64; 4]) -> (C64, f64) {
        let t = [-4.0 * I * self.px_p * d[1], -2.0 * I * self.s2 * d[0]];
        (t.iter().sum(), t.iter().map(|z| z.norm()).sum())
    }

    /// The two closure equations for `(γ_{g−1}, γ_g)`.
    fn equations(&self, prev: Option<[C64; 4]>, last: [C64; 4]) -> [(C64, f64); 2] {
        let (m, mt) = self.m(last);
        let (lp, lpt) = prev.map(|d| self.l(d)).unwrap_or((c(0.0), 0.0));
        [(m + lp, mt + lpt), self.l(last)]
    }
}

fn derivs(j: &Jet<C64>) -> [C64; 4] {
    std::array::from_fn(|n| {
        if n <= j.order() {
            j.derivative_at(n)
        } else {
            c(0.0)
        }
    })
}

/// Fitted constants `c_1..c_g` (with `c_0 = 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstantsVector {
    pub g: usize,
    pub c: Vec<C64>,
    /// Largest closure-equation residual relative to its term magnitudes.
    pub fit_residual: f64,
    pub sample_points: Vec<f64>,
    /// `σ_min / σ_max` of the column-equilibrated system (1 when `g = 0`).
    pub conditioning: f64,
}

struct Row {
    coeffs: Vec<C64>,
    rhs: C64,
    /// Term magnitudes of `E^0` and each `E^k`.
    scales: Vec<f64>,
}

fn closure_rows(f: &FieldSample<C64>, g: usize) -> Result<Vec<Row>> {
    let cl = Closure::at(f)?;
    let sym = build_gammas_symbolic(f, g)?;
    let pick = |j: usize, k: usize| -> [C64; 4] {
        if k == 0 {
            derivs(&sym.base[j])
        } else {
            derivs(&sym.parts[j][k - 1])
        }
    };
    let mut rows: Vec<Row> = (0..2)
        .map(|_| Row {
            coeffs: vec![c(0.0); g],
            rhs: c(0.0),
            scales: vec![0.0; g + 1],
        })
        .collect();
    for k in 0..=g {
        let prev = (g >= 1).then(|| pick(g - 1, k));
        let eqs = cl.equations(prev, pick(g, k));
        for (row, (val, mag)) in rows.iter_mut().zip(eqs) {
            row.scales[k] = mag;
            if k == 0 {
                row.rhs = -val;
            } else {
                row.coeffs[k - 1] = val;
            }
        }
    }
    Ok(rows)
}

fn row_residual(row: &Row, consts: &[C64]) -> f64 {
    let mut val = -row.rhs;
    let mut scale = row.scales[0];
    for (k, ck) in consts.iter().enumerate() {
        val += row.coeffs[k] * ck;
        scale += ck.norm() * row.scales[k + 1];
    }
    if scale == 0.0 {
        0.0
    } else {
        val.norm() / scale
    }
}

/// Least squares through thin QR. Rows are scaled by their term magnitudes,
/// so a column of rounding noise is recognized as a free direction; the
/// surviving columns are then equilibrated. Returns the solution and
/// `σ_min / σ_max`.
fn solve_least_squares(rows: &[Row], g: usize) -> Result<(Vec<C64>, f64)> {
    let live: Vec<&Row> = rows
        .iter()
        .filter(|r| r.scales.iter().any(|s| *s > 0.0))
        .collect();
    let m = live.len();
    let singular = |s: f64| Error::RankDeficientSystem {
        smallest_singular_value: s,
    };
    if m < g {
        return Err(singular(0.0));
    }
    let mut a = DMatrix::<C64>::zeros(m, g);
    let mut b = DVector::<C64>::zeros(m);
    for (i, r) in live.iter().enumerate() {
        let norm: f64 = r.scales.iter().sum();
        for k in 0..g {
            a[(i, k)] = r.coeffs[k] / norm;
        }
        b[i] = r.rhs / norm;
    }
    let col: Vec<f64> = (0..g).map(|k| a.column(k).norm()).collect();
    let dead = col.iter().copied().fold(f64::INFINITY, f64::min);
    if dead < RANK_TOL {
        return Err(singular(dead));
    }
    for (k, n) in col.iter().enumerate() {
        a.column_mut(k).scale_mut(1.0 / n);
    }
    let sv = a.clone().svd(false, false).singular_values;
    let (smax, smin) = sv
        .iter()
        .fold((0.0f64, f64::INFINITY), |(hi, lo), s| (hi.max(*s), lo.min(*s)));
    let ratio = smin / smax;
    if ratio.is_nan() || ratio < RANK_TOL {
        return Err(singular(ratio));
    }
    let qr = a.qr();
    let rhs = qr.q().adjoint() * &b;
    let y = qr
        .r()
        .solve_upper_triangular(&rhs)
        .ok_or_else(|| singular(ratio))?;
    let x = (0..g).map(|k| y[k] / col[k]).collect();
    Ok((x, ratio))
}

/// Fits `c_1..c_g` from the two closure equations stacked over `xs`.
pub fn fit_constants(s: &SolutionSpec, g: usize, xs: &[f64]) -> Result<ConstantsVector> {
    check_genus(g)?;
    let needed = g.max(1);
    if xs.len() < needed {
        return Err(Error::TooFewSamples {
            needed,
            got: xs.len(),
        });
    }
    let order = required_order(g);
    let rows: Vec<Vec<Row>> = xs
        .par_iter()
        .map(|&x| closure_rows(&s.eval_field(x, order)?, g))
        .collect::<Result<_>>()?;
    let rows: Vec<Row> = rows.into_iter().flatten().collect();
    let (consts, conditioning) = if g == 0 {
        (Vec::new(), 1.0)
    } else {
        solve_least_squares(&rows, g)?
    };
    let fit_residual = rows.iter().map(|r| row_residual(r, &consts)).fold(0.0, f64::max);
    Ok(ConstantsVector {
        g,
        c: consts,
        fit_residual,
        sample_points: xs.to_vec(),
        conditioning,
    })
}

/// `n` jittered points in [`SAMPLE_INTERVAL`], one per equal-width bin,
/// redrawn inside the bin while `|p| < GENERATED_P_FLOOR` at the base times.
pub fn sample_points(s: &SolutionSpec, n: usize, seed: u64) -> Result<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = SAMPLE_INTERVAL;
    let width = (hi - lo) / n as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let left = lo + width * i as f64;
        for _ in 0..32 {
            let x = left + width * rng.gen_range(0.1..0.9);
            match s.value_at(x, s.times) {
                Ok(p) if p.norm() >= GENERATED_P_FLOOR => {
                    out.push(x);
                    break;
                }
                Ok(_) | Err(Error::PoleAtPoint { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
    }
    // Bins where |p| stays small are refilled from the whole interval.
    let min_gap = 0.1 * width;
    let mut tries = 0;
    while out.len() < n && tries < 64 * n {
        tries += 1;
        let x = rng.gen_range(lo..hi);
        if out.iter().any(|y| (x - y).abs() < min_gap) {
            continue;
        }
        match s.value_at(x, s.times) {
            Ok(p) if p.norm() >= GENERATED_P_FLOOR => out.push(x),
            Ok(_) | Err(Error::PoleAtPoint { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    out.sort_by(f64::total_cmp);
    if out.len() < n {
        return Err(Error::TooFewSamples {
            needed: n,
            got: out.len(),
        });
    }
    Ok(out)
}

/// Smallest `g ≤ g_max` whose closure fit at `2g + 4` points has residual
/// below `tol`.
pub fn detect_genus(s: &SolutionSpec, g_max: usize, tol: f64, seed: u64) -> Result<usize> {
    check_genus(g_max)?;
    let mut best = (0, f64::INFINITY);
    for g in 0..=g_max {
        let xs = sample_points(s, 2 * g + 4, seed)?;
        match fit_constants(s, g, &xs) {
            Ok(cv) if cv.fit_residual < tol => return Ok(g),
            Ok(cv) => {
                if cv.fit_residual < best.1 {
                    best = (g, cv.fit_residual);
                }
            }
            Err(Error::RankDeficientSystem { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    Err(Error::NoGenusFound {
        g_max,
        best_genus: best.0,
        best_residual: best.1,
    })
}

/// `R(λ) = Σ r_m λ^m` with its variation across x and t samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvePolynomial {
    pub g: usize,
    /// `r_0..r_{2g+2}`, ascending powers.
    pub coeffs: Vec<C64>,
    pub x_spread: f64,
    pub t_spread: f64,
}

impl CurvePolynomial {
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn eval(&self, lambda: C64) -> C64 {
        self.coeffs.iter().rev().fold(c(0.0), |acc, r| acc * lambda + r)
    }

    /// `max_m |Im r_m|`: zero when `R(λ*)* = R(λ)`.
    pub fn conjugation_defect(&self) -> f64 {
        self.coeffs.iter().map(|r| r.im.abs()).fold(0.0, f64::max)
    }
}

fn convolve(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![c(0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Curve coefficients from the field and `γ` jets at one base point.
pub fn curve_coefficients(f: &FieldSample<C64>, gammas: &GammaSequence) -> Result<Vec<C64>> {
    let g = gammas.g;
    let p = f.p.derivative_at(0);
    if p.norm() < P_FLOOR {
        return Err(Error::SampleNearZeroOfP {
            x: f.p.base_point(),
            magnitude: p.norm(),
        });
    }
    let p1 = f.p.derivative_at(1);
    let q = f.q.derivative_at(0);
    // ascending powers of λ: Y_m = γ_{g−m}
    let poly = |n: usize| -> Vec<C64> { gammas.derivative_values(n).into_iter().rev().collect() };
    let (y, yx, yxx) = (poly(0), poly(1), poly(2));
    let y2 = convolve(&y, &y);
    let yyxx = convolve(&y, &yxx);
    let yx2 = convolve(&yx, &yx);
    let yxy = convolve(&yx, &y);
    let mut r = vec![c(0.0); 2 * g + 3];
    let (p2i, p3i) = (1.0 / (p * p), 1.0 / (p * p * p));
    for m in 0..=2 * g {
        r[m + 2] += y2[m] * p2i;
        r[m + 1] += -I * p1 * y2[m] * p3i;
        let num = 4.0 * p * p * q * y2[m] - 2.0 * p * yyxx[m] + p * yx2[m] + 2.0 * p1 * yxy[m];
        r[m] -= num * p3i / 4.0;
    }
    Ok(r)
}

fn coefficient_spread(reference: &[C64], others: &[Vec<C64>]) -> f64 {
    others
        .iter()
        .flat_map(|o| {
            o.iter()
                .zip(reference)
                .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
        })
        .fold(0.0, f64::max)
}

/// Time shifts used for `t_spread`: every supported `t_k` moves so that its
/// leading phase changes by `0.2 s` for `s = 1, 2`.
pub fn spread_time_settings(s: &SolutionSpec) -> Vec<[f64; 5]> {
    const PHASE_RATE: [f64; 5] = [4.0, 48.0, 96.0, 3840.0, 7680.0];
    let flows = s.supported_flows();
    (1..=2)
        .map(|step| {
            let mut t = s.times;
            for &k in &flows {
                t[k - 1] += 0.05 * step as f64 * 4.0 / PHASE_RATE[k - 1];
            }
            t
        })
        .collect()
}

fn curve_at(s: &SolutionSpec, g: usize, consts: &[C64], x: f64) -> Result<Vec<C64>> {
    let f = s.eval_field(x, required_order(g))?;
    let gam = build_gammas(&f, g, consts)?;
    curve_coefficients(&f, &gam)
}

/// `R(λ)` at `x0`, with `x_spread` over `x0` and four fitted sample points and
/// `t_spread` over three time settings.
pub fn curve_polynomial(
    s: &SolutionSpec,
    g: usize,
    cv: &ConstantsVector,
    x0: f64,
) -> Result<CurvePolynomial> {
    check_genus(g)?;
    let reference = curve_at(s, g, &cv.c, x0)?;
    let xs: Vec<f64> = cv
        .sample_points
        .iter()
        .copied()
        .filter(|x| *x != x0)
        .take(4)
        .collect();
    let at_x: Vec<Vec<C64>> = xs
        .par_iter()
        .map(|&x| curve_at(s, g, &cv.c, x))
        .collect::<Result<_>>()?;
    let x_spread = coefficient_spread(&reference, &at_x);
    if x_spread > SPREAD_LIMIT {
        return Err(Error::SpreadTooLarge {
            spread: x_spread,
            limit: SPREAD_LIMIT,
        });
    }
    let candidates: Vec<f64> = std::iter::once(x0).chain(xs.iter().copied()).collect();
    let at_t: Vec<Vec<C64>> = spread_time_settings(s)
        .par_iter()
        .map(|times| {
            let shifted = s.with_times(*times);
            let mut last = None;
            for &x in &candidates {
                match curve_at(&shifted, g, &cv.c, x) {
                    Ok(r) => return Ok(r),
                    Err(e @ Error::SampleNearZeroOfP { .. }) => last = Some(e),
                    Err(e) => return Err(e),
                }
            }
            Err(last.expect("at least one candidate"))
        })
        .collect::<Result<_>>()?;
    let t_spread = coefficient_spread(&reference, &at_t);
    Ok(CurvePolynomial {
        g,
        coeffs: reference,
        x_spread,
        t_spread,
    })
}

/// A residual with the sum of the magnitudes of the terms it balances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Balanced {
    pub residual: C64,
    pub scale: f64,
}

impl Balanced {
    pub fn relative(&self) -> f64 {
        if self.scale == 0.0 {
            0.0
        } else {
            self.residual.norm() / self.scale
        }
    }
}

/// `3|p_x/p| + |s2| + |v| + |w|`: size of the λ-independent coefficients of
/// the Appell operator at the base point.
pub fn operator_size(f: &FieldSample<C64>) -> Result<f64> {
    let cl = Closure::at(f)?;
    Ok(3.0 * cl.px_p.norm() + cl.s2.norm() + cl.v.norm() + cl.w.norm())
}

/// The third-order operator
/// `Y''' − 3(p_x/p)Y'' + (4λ² − 4iλ p_x/p − s2 − 4pq)Y' − (4λ² p_x/p + 2iλ s2 + w)Y`
/// applied to `Y(λ)` at the base point.
pub fn appell_residual(f: &FieldSample<C64>, gammas: &GammaSequence, lambda: C64) -> Result<Balanced> {
    let y = gammas.y_at(lambda);
    if y.order() < 3 {
        return Err(Error::OrderTooLow {
            needed: 3,
            got: y.order(),
        });
    }
    let cl = Closure::at(f)?;
    let d = derivs(&y);
    let l2 = lambda * lambda;
    let t = [
        d[3],
        -3.0 * cl.px_p * d[2],
        (4.0 * l2 - 4.0 * I * lambda * cl.px_p - cl.v) * d[1],
        -(4.0 * l2 * cl.px_p + 2.0 * I * lambda * cl.s2 + cl.w) * d[0],
    ];
    Ok(Balanced {
        residual: t.iter().sum(),
        scale: t.iter().map(|z| z.norm()).sum(),
    })
}

/// Residuals of `ψ_1`, `ψ_2` in `ψ'' − (p_x/p)ψ' + (λ² − iλ p_x/p − pq)ψ = 0`
/// and the relative deviation of `W[ψ_1, ψ_2]` from `−2iνp`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BakerResidual {
    pub psi1: f64,
    pub psi2: f64,
    pub wronskian: f64,
    pub nu: C64,
}

impl BakerResidual {
    pub fn max(&self) -> f64 {
        self.psi1.max(self.psi2).max(self.wronskian)
    }
}

/// Builds `ψ_{1,2} = √Y exp(±iν ∫ p/Y)` as jets at `x0` with `ν = √R(λ)`.
pub fn baker_residual(
    s: &SolutionSpec,
    g: usize,
    cv: &ConstantsVector,
    curve: &CurvePolynomial,
    lambda: C64,
    x0: f64,
) -> Result<BakerResidual> {
    let f = s.eval_field(x0, required_order(g))?;
    let gam = build_gammas(&f, g, &cv.c)?;
    baker_from_parts(&f, &gam, curve.eval(lambda).sqrt(), lambda)
}

pub fn baker_from_parts(
    f: &FieldSample<C64>,
    gammas: &GammaSequence,
    nu: C64,
    lambda: C64,
) -> Result<BakerResidual> {
    let p0 = f.p.derivative_at(0).norm();
    if p0 < P_FLOOR {
        return Err(Error::SampleNearZeroOfP {
            x: f.p.base_point(),
            magnitude: p0,
        });
    }
    let y = gammas.y_at(lambda).truncate(3);
    let y0 = y.derivative_at(0).norm();
    if y0 < Y_FLOOR {
        return Err(Error::YVanishesAtBase(y0));
    }
    let p = f.p.truncate(3);
    let q = f.q.truncate(3);
    let root = y.sqrt()?;
    let phase = p.checked_div(&y)?.antiderivative().truncate(3).scale_by(I * nu);
    let psi1 = &root * &phase.exp();
    let psi2 = &root * &(-&phase).exp();
    let px_p = p.derivative()?.checked_div(&p.truncate(2))?;
    let pot = (&px_p.scale_by(-I * lambda) - &(&p * &q).truncate(2)).add_constant(lambda * lambda);
    let eq = |psi: &Jet<C64>| -> Result<f64> {
        let d1 = psi.derivative()?;
        let d2 = d1.derivative()?;
        let t = [
            d2.derivative_at(0),
            -(px_p.derivative_at(0) * d1.derivative_at(0)),
            pot.derivative_at(0) * psi.derivative_at(0),
        ];
        let scale: f64 = t.iter().map(|z| z.norm()).sum();
        let r: C64 = t.iter().sum();
        Ok(if scale == 0.0 { 0.0 } else { r.norm() / scale })
    };
    let (a1, a2) = (psi1.derivative_at(0), psi2.derivative_at(0));
    let (b1, b2) = (psi1.derivative_at(1), psi2.derivative_at(1));
    let w = b2 * a1 - b1 * a2;
    let expected = -2.0 * I * nu * f.p.derivative_at(0);
    let scale = (b2 * a1).norm() + (b1 * a2).norm() + expected.norm();
    let wronskian = if scale == 0.0 {
        0.0
    } else {
        (w - expected).norm() / scale
    };
    Ok(BakerResidual {
        psi1: eq(&psi1)?,
        psi2: eq(&psi2)?,
        wronskian,
        nu,
    })
}

/// Consistency of the antiderivative recursion for `γ_{j+2}` at fixed
/// constants: `(γ_{j+2}/p)' = F_j(γ_j, γ_{j+1})` for `j = 0..g−2`. The
/// integration constant `c_{j+2}` drops out after differentiation.
pub fn gamma_recursion_residual(f: &FieldSample<C64>, gammas: &GammaSequence) -> Result<f64> {
    let g = gammas.g;
    if g < 2 {
        return Ok(0.0);
    }
    let p = f.p.derivative_at(0);
    let (p1, p2) = (f.p.derivative_at(1), f.p.derivative_at(2));
    let (q, q1) = (f.q.derivative_at(0), f.q.derivative_at(1));
    let mut worst = 0.0f64;
    for j in 0..=g - 2 {
        let ratio = gammas.gammas[j + 2].checked_div(&f.p)?;
        let lhs = ratio.derivative_at(1);
        let d1 = derivs(&gammas.gammas[j + 1]);
        let d0 = derivs(&gammas.gammas[j]);
        let t = [
            I * p1 / (p * p) * d1[1],
            I * (p2 * p - 3.0 * p1 * p1) / (2.0 * p * p * p) * d1[0],
            -d0[3] / (4.0 * p),
            3.0 * p1 / (4.0 * p * p) * d0[2],
            ((p2 * p - 3.0 * p1 * p1) / (4.0 * p * p * p) + q) * d0[1],
            -(p1 * q - q1 * p) / (2.0 * p) * d0[0],
        ];
        let rhs: C64 = t.iter().sum();
        let scale = lhs.norm() + t.iter().map(|z| z.norm()).sum::<f64>();
        if scale > 0.0 {
            worst = worst.max((lhs - rhs).norm() / scale);
        }
    }
    Ok(worst)
}
