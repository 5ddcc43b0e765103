//! The end-to-end pipeline: genus, constants, curve, branch points and the
//! residual checks, collected into a serializable report.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::curvealg::{
    cluster_branch_points_with_noise, coefficient_distance, compare_curves, genera, poly_roots,
    BranchPointCluster, GenusReport,
};
use crate::error::{Error, Result};
use crate::golden::{expected_constants, expected_curve};
use crate::hierarchy::{flow_residual, zero_curvature_residual};
use crate::jet::C64;
use crate::solutions::SolutionSpec;
use crate::spectral::{
    appell_residual, baker_residual, build_gammas, curve_polynomial, detect_genus, fit_constants,
    operator_size, required_order, sample_points, ConstantsVector, CurvePolynomial, DEFAULT_FIT_TOL,
    DEFAULT_SEED, MAX_GENUS,
};

pub const SCHEMA: u32 = 1;
pub const APPELL_LAMBDAS: usize = 5;
pub const BAKER_LAMBDAS: usize = 10;
pub const BAKER_RADIUS: f64 = 2.0;
const LAMBDA_STREAM: u64 = 0x5eed_1a3b;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub genus: Option<usize>,
    /// Replaces every tolerance of the ladder.
    pub tol: Option<f64>,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            genus: None,
            tol: None,
            seed: DEFAULT_SEED,
        }
    }
}

/// Per-check tolerances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub fit: f64,
    pub flow: f64,
    pub zero_curvature: f64,
    pub appell: f64,
    pub baker: f64,
    pub spread: f64,
    pub curve: f64,
    pub constants: f64,
    pub monic: f64,
    pub subleading: f64,
    pub conjugation: f64,
}

impl Tolerances {
    /// Absolute `1e−8` class for `g ≤ 2`, relative `1e−6` at genus 4 and
    /// `1e−5` beyond.
    pub fn ladder(g: usize) -> Self {
        let low = Self {
            fit: 1e-8,
            flow: 1e-7,
            zero_curvature: 1e-9,
            appell: 1e-8,
            baker: 1e-7,
            spread: 1e-8,
            curve: 1e-8,
            constants: 1e-8,
            monic: 1e-10,
            subleading: 1e-8,
            conjugation: 1e-9,
        };
        match g {
            0..=2 => low,
            3..=4 => Self {
                baker: 1e-5,
                spread: 1e-6,
                curve: 1e-6,
                constants: 1e-6,
                subleading: 1e-6,
                conjugation: 1e-6,
                ..low
            },
            _ => Self {
                flow: 1e-5,
                baker: 1e-5,
                spread: 1e-6,
                curve: 1e-5,
                constants: 1e-5,
                subleading: 1e-5,
                conjugation: 1e-5,
                ..low
            },
        }
    }

    pub fn uniform(tol: f64) -> Self {
        Self {
            fit: tol,
            flow: tol,
            zero_curvature: tol,
            appell: tol,
            baker: tol,
            spread: tol,
            curve: tol,
            constants: tol,
            monic: tol,
            subleading: tol,
            conjugation: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(value: f64, tolerance: f64) -> Self {
        Self {
            value,
            tolerance,
            pass: value <= tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveReport {
    pub schema: u32,
    pub version: String,
    pub precision: String,
    pub seed: u64,
    pub solution: SolutionSpec,
    pub genus: usize,
    pub genus_detected: bool,
    pub constants: ConstantsVector,
    pub curve: CurvePolynomial,
    pub expected_curve: Vec<C64>,
    pub expected_constants: Option<Vec<C64>>,
    pub branch_points: Vec<BranchPointCluster>,
    pub genera: Option<GenusReport>,
    pub clustering_error: Option<String>,
    pub residuals: BTreeMap<String, f64>,
    pub verdict: BTreeMap<String, Check>,
    pub pass: bool,
}

impl CurveReport {
    /// Failing checks in key order.
    pub fn failures(&self) -> Vec<(&str, &Check)> {
        self.verdict
            .iter()
            .filter(|(_, c)| !c.pass)
            .map(|(k, c)| (k.as_str(), c))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Fit points for genus `g`: `2g + 4`, and at least five so the x-spread
/// always sees five points.
pub fn sample_count(g: usize) -> usize {
    (2 * g + 4).max(5)
}

/// Spectral values for the Appell checks: uniform in the square `|Re|, |Im| ≤ 2`.
pub fn appell_lambdas(seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ LAMBDA_STREAM);
    (0..APPELL_LAMBDAS)
        .map(|_| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0)))
        .collect()
}

/// Uniform angles on `|λ| = 2`.
pub fn baker_lambdas(seed: u64) -> Vec<C64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ LAMBDA_STREAM.rotate_left(17));
    (0..BAKER_LAMBDAS)
        .map(|_| C64::from_polar(BAKER_RADIUS, rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect()
}

/// Largest `|Appell residual|` over `lambdas` at `x0`.
pub fn appell_max(s: &SolutionSpec, g: usize, consts: &[C64], x0: f64, lambdas: &[C64]) -> Result<f64> {
    let f = s.eval_field(x0, required_order(g))?;
    let gam = build_gammas(&f, g, consts)?;
    lambdas.iter().try_fold(0.0f64, |acc, &l| {
        Ok(acc.max(appell_residual(&f, &gam, l)?.residual.norm()))
    })
}

/// The sample point minimizing `operator_size / |p|`: small Appell
/// coefficients on a field of sizeable amplitude.
pub fn reference_point(s: &SolutionSpec, xs: &[f64]) -> Result<f64> {
    let mut best = (xs[0], f64::INFINITY);
    for &x in xs {
        let f = s.eval_field(x, 2)?;
        let m = operator_size(&f)? / f.p.derivative_at(0).norm();
        if m < best.1 {
            best = (x, m);
        }
    }
    Ok(best.0)
}

/// `(max ψ residual, max Wronskian deviation)`; spectral values where `Y`
/// vanishes at `x0` are skipped.
pub fn baker_max(
    s: &SolutionSpec,
    cv: &ConstantsVector,
    curve: &CurvePolynomial,
    x0: f64,
    lambdas: &[C64],
) -> Result<(f64, f64)> {
    let mut worst = (0.0f64, 0.0f64);
    for &l in lambdas {
        match baker_residual(s, cv.g, cv, curve, l, x0) {
            Ok(b) => {
                worst.0 = worst.0.max(b.psi1).max(b.psi2);
                worst.1 = worst.1.max(b.wronskian);
            }
            Err(Error::YVanishesAtBase(_)) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(worst)
}

/// Runs the whole pipeline. Errors from detection, fitting or the curve
/// extraction abort the run; check failures are recorded in the verdict.
pub fn run(s: &SolutionSpec, opts: &Options) -> Result<CurveReport> {
    s.validate()?;
    let (g, detected) = match opts.genus {
        Some(g) => (g, false),
        None => (detect_genus(s, MAX_GENUS, DEFAULT_FIT_TOL, opts.seed)?, true),
    };
    let xs = sample_points(s, sample_count(g), opts.seed)?;
    let cv = fit_constants(s, g, &xs)?;
    let x0 = reference_point(s, &xs)?;
    let curve = curve_polynomial(s, g, &cv, x0)?;
    let tol = match opts.tol {
        Some(t) => Tolerances::uniform(t),
        None => Tolerances::ladder(g),
    };

    let mut residuals = BTreeMap::new();
    let mut verdict = BTreeMap::new();
    let mut record = |key: String, value: f64, tolerance: f64| {
        residuals.insert(key.clone(), value);
        verdict.insert(key, Check::new(value, tolerance));
    };

    record("fit".into(), cv.fit_residual, tol.fit);
    let probe_x: Vec<f64> = std::iter::once(x0)
        .chain(xs.iter().copied().filter(|x| *x != x0).take(4))
        .collect();
    for k in s.supported_flows() {
        let mut worst = 0.0f64;
        for &x in &probe_x {
            worst = worst.max(flow_residual(s, k, x)?.relative());
        }
        record(format!("flow_{k}"), worst, tol.flow);
    }
    if g <= 2 {
        for k in s.supported_flows().into_iter().filter(|k| *k <= 2) {
            let zc = zero_curvature_residual(s, k, C64::new(0.5, 0.5), x0)?;
            record(format!("zero_curvature_{k}"), zc, tol.zero_curvature);
        }
    }
    record("x_spread".into(), curve.x_spread, tol.spread);
    record("t_spread".into(), curve.t_spread, tol.spread);
    record(
        "appell".into(),
        appell_max(s, g, &cv.c, x0, &appell_lambdas(opts.seed))?,
        tol.appell,
    );
    let (baker, wronskian) = baker_max(s, &cv, &curve, x0, &baker_lambdas(opts.seed))?;
    record("baker_max".into(), baker, tol.baker);
    record("wronskian_max".into(), wronskian, tol.baker);

    let r = &curve.coeffs;
    record("monic".into(), (r[2 * g + 2] - 1.0).norm(), tol.monic);
    if g >= 1 {
        let ic1 = C64::new(0.0, 1.0) * cv.c[0];
        record(
            "subleading".into(),
            (r[2 * g + 1] - ic1).norm() / ic1.norm().max(1.0),
            tol.subleading,
        );
    }
    let conj = r
        .iter()
        .map(|z| z.im.abs() / z.norm().max(1.0))
        .fold(0.0, f64::max);
    record("conjugation".into(), conj, tol.conjugation);

    let expected = expected_curve(s);
    record(
        "curve_golden".into(),
        compare_curves(&curve, &expected, tol.curve)?.distance,
        tol.curve,
    );
    let expected_c = expected_constants(s);
    if let Some(ec) = &expected_c {
        if g == ec.len() {
            record(
                "constants_golden".into(),
                coefficient_distance(&cv.c, ec)?,
                tol.constants,
            );
        }
    }

    let noise = [cv.fit_residual, curve.x_spread, curve.t_spread]
        .into_iter()
        .fold(f64::EPSILON, f64::max);
    let (branch_points, genera_report, clustering_error) = match poly_roots(r)
        .and_then(|roots| cluster_branch_points_with_noise(&roots, 2 * g + 2, noise))
        .and_then(|cl| genera(&cl).map(|gr| (cl, gr)))
    {
        Ok((cl, gr)) => (cl, Some(gr), None),
        Err(e) => (Vec::new(), None, Some(e.to_string())),
    };
    verdict.insert(
        "clustering".into(),
        Check {
            value: if clustering_error.is_some() { 1.0 } else { 0.0 },
            tolerance: 0.0,
            pass: clustering_error.is_none(),
        },
    );

    let pass = verdict.values().all(|c| c.pass);
    Ok(CurveReport {
        schema: SCHEMA,
        version: env!("CARGO_PKG_VERSION").to_string(),
        precision: "double".into(),
        seed: opts.seed,
        solution: *s,
        genus: g,
        genus_detected: detected,
        constants: cv,
        curve,
        expected_curve: expected,
        expected_constants: expected_c,
        branch_points,
        genera: genera_report,
        clustering_error,
        residuals,
        verdict,
        pass,
    })
}
