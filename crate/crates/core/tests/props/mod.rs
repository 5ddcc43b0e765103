//! Property checks shared by the `properties` tests and the acceptance
//! binary. Each returns `Err` with the shrunk counterexample on failure.

use akns_spectra::curvealg::{
    cluster_branch_points, coefficient_distance, expand_clusters, genera, poly_roots, tau, BranchPointCluster,
};
use akns_spectra::golden::expected_curve;
use akns_spectra::hierarchy::{eval_h, flow_residual, FieldSample};
use akns_spectra::report::{reference_point, sample_count};
use akns_spectra::spectral::{
    build_gammas, curve_polynomial, fit_constants, gamma_recursion_residual, required_order, sample_points,
};
use akns_spectra::{Jet, SolutionSpec, Variant, C64};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};

pub type Check = fn() -> Result<(), String>;

/// Every property, by name.
pub const ALL: &[(&str, Check)] = &[
    ("jet arithmetic is exact on integer polynomials", jet_exactness),
    ("exp(a + b) = exp(a) exp(b)", exp_composition),
    ("nested mixed partials commute", nested_symmetry),
    ("Jacobi identities hold on jets", jacobi_identities),
    (
        "H_k agrees with an independent expression tree",
        h_expression_tree,
    ),
    ("catalog solutions satisfy their flows", catalog_flows),
    ("scaled families satisfy the first flow", scaled_families),
    ("dnoidal wave tends to the soliton", dnoidal_limit),
    ("unit parametrized Peregrine is canonical", peregrine_canonical),
    ("closed-form gammas match explicit gamma_1..3", explicit_gammas),
    (
        "curve identities (monic, subleading, conjugation, spread, sample independence)",
        curve_identities,
    ),
    ("rogue-wave curve identities", rogue_curve_identities),
    ("cluster round trip on golden curves", cluster_round_trip),
    (
        "genera are permutation and translation invariant",
        genera_invariance,
    ),
    ("genera classification table", genera_table),
    ("coefficient distance is a symmetric metric", comparison_symmetry),
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn check<S>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S: Strategy,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn err(e: akns_spectra::Error) -> TestCaseError {
    TestCaseError::fail(e.to_string())
}

fn cplx(range: f64) -> impl Strategy<Value = C64> {
    (-range..range, -range..range).prop_map(|(a, b)| C64::new(a, b))
}

fn int_cplx() -> impl Strategy<Value = C64> {
    (-9i32..=9, -9i32..=9).prop_map(|(a, b)| C64::new(a as f64, b as f64))
}

fn max_norm(v: &[C64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn close(got: &[C64], want: &[C64], tol: f64) -> Result<(), TestCaseError> {
    let scale = max_norm(want).max(1.0);
    for (k, (a, b)) in got.iter().zip(want).enumerate() {
        prop_assert!((a - b).norm() <= tol * scale, "coefficient {}: {} vs {}", k, a, b);
    }
    Ok(())
}

fn exact(got: &Jet<C64>, want: &[C64]) -> Result<(), TestCaseError> {
    prop_assert_eq!(got.coeffs(), want);
    Ok(())
}

pub fn jet_exactness() -> Result<(), String> {
    let strategy = (0usize..8).prop_flat_map(|n| {
        (
            prop::collection::vec(int_cplx(), n + 1),
            prop::collection::vec(int_cplx(), n + 1),
            prop::sample::select(vec![1.0, -1.0, 2.0, -2.0, 4.0, -4.0]),
            -3.0..3.0f64,
        )
    });
    check(256, strategy, |(a, mut b, pivot, x0)| {
        b[0] = C64::new(pivot, 0.0);
        let n = a.len() - 1;
        let ja = Jet::from_coeffs(x0, a.clone());
        let jb = Jet::from_coeffs(x0, b.clone());
        let sum: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
        let diff: Vec<C64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
        let prod: Vec<C64> = (0..=n).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect();
        exact(&(&ja + &jb), &sum)?;
        exact(&(&ja - &jb), &diff)?;
        let jp = &ja * &jb;
        exact(&jp, &prod)?;
        exact(&jp.checked_div(&jb).map_err(err)?, &a)?;
        let w = C64::new(3.0, -2.0);
        exact(&ja.scale_by(w), &a.iter().map(|z| z * w).collect::<Vec<_>>())?;
        if n > 0 {
            let d: Vec<C64> = (1..=n).map(|k| a[k] * k as f64).collect();
            exact(&ja.derivative().map_err(err)?, &d)?;
        }
        Ok(())
    })
}

pub fn exp_composition() -> Result<(), String> {
    let strategy = (1usize..10).prop_flat_map(|n| {
        (
            prop::collection::vec(cplx(1.0), n + 1),
            prop::collection::vec(cplx(1.0), n + 1),
            -2.0..2.0f64,
        )
    });
    check(256, strategy, |(a, b, x0)| {
        let ja = Jet::from_coeffs(x0, a);
        let jb = Jet::from_coeffs(x0, b);
        let lhs = (&ja + &jb).exp();
        let rhs = &ja.exp() * &jb.exp();
        close(lhs.coeffs(), rhs.coeffs(), 1e-12)
    })
}

pub fn nested_symmetry() -> Result<(), String> {
    let strategy = (prop::array::uniform4(cplx(1.0)), -1.0..1.0f64, -1.0..1.0f64);
    check(128, strategy, |([al, be, ga, de], x0, t0)| {
        let order = 3;
        let f = |x: &Jet<Jet<C64>>, t: &Jet<Jet<C64>>| {
            let e = (&(x * t).scale_by(al) + &(x * x).scale_by(be)).exp();
            let s = (&x.scale_by(ga) + &t.scale_by(de)).sin();
            &e * &s
        };
        let zero = C64::new(0.0, 0.0);
        let x = Jet::variable_like(x0, order, &Jet::constant_c(t0, order, zero));
        let t = Jet::constant(x0, order, Jet::variable(t0, order));
        let xt = f(&x, &t);
        let t2 = Jet::variable_like(t0, order, &Jet::constant_c(x0, order, zero));
        let x2 = Jet::constant(t0, order, Jet::variable(x0, order));
        let tx = f(&x2, &t2);
        let mut a = Vec::new();
        let mut b = Vec::new();
        for i in 0..=order {
            for j in 0..=order {
                a.push(*xt.coeff(i).coeff(j));
                b.push(*tx.coeff(j).coeff(i));
            }
        }
        close(&a, &b, 1e-12)
    })
}

pub fn jacobi_identities() -> Result<(), String> {
    let strategy = (
        1usize..=10,
        -3.0..3.0f64,
        0.01..0.99f64,
        prop::collection::vec(-1.0..1.0f64, 10),
    );
    check(128, strategy, |(n, u0, k, extra)| {
        let mut coeffs = vec![C64::new(u0, 0.0), C64::new(1.0, 0.0)];
        coeffs.extend(extra.iter().map(|v| C64::new(0.3 * v, 0.0)));
        coeffs.truncate(n + 1);
        let u = Jet::from_coeffs(u0, coeffs);
        let (sn, cn, dn) = u.jacobi(k);
        let one = C64::new(-1.0, 0.0);
        let id1 = (&(&sn * &sn) + &(&cn * &cn)).add_constant(one);
        let id2 = (&(&dn * &dn) + &(&sn * &sn).scale_by(C64::new(k * k, 0.0))).add_constant(one);
        for z in id1.coeffs().iter().chain(id2.coeffs()) {
            prop_assert!(z.norm() <= 1e-10, "{}", z);
        }
        Ok(())
    })
}

/// `H_k(u, v)` as sums of monomials, read off the second-component
/// equations with the roles of the two fields exchanged.
const H_TERMS: [&[&str]; 5] = [
    &["u2", "-2 u u v"],
    &["u3", "-6 v u u1"],
    &[
        "u4",
        "-8 v u u2",
        "-2 u u v2",
        "-6 v u1 u1",
        "-4 u v1 u1",
        "6 v v u u u",
    ],
    &[
        "u5",
        "-10 u v u3",
        "-20 v u1 u2",
        "-10 u v1 u2",
        "-10 u u1 v2",
        "-10 u1 u1 v1",
        "30 u u v v u1",
    ],
    &[
        "u6",
        "-12 u v u4",
        "-2 u u v4",
        "-30 u1 v u3",
        "-18 u v1 u3",
        "-8 u u1 v3",
        "-50 u1 v1 u2",
        "50 u u v v u2",
        "-20 u2 u2 v",
        "-22 u v2 u2",
        "-20 v2 u1 u1",
        "20 v2 u u u v",
        "10 u u u v1 v1",
        "70 u v v u1 u1",
        "60 u u v u1 v1",
        "-20 u u u u v v v",
    ],
];

enum Expr {
    Field { second: bool, d: usize },
    Scaled(f64, Box<Expr>),
    Product(Vec<Expr>),
    Sum(Vec<Expr>),
}

impl Expr {
    fn parse(terms: &[&str]) -> Expr {
        Expr::Sum(
            terms
                .iter()
                .map(|t| {
                    let mut coef = 1.0;
                    let mut factors = Vec::new();
                    for tok in t.split_whitespace() {
                        if let Ok(c) = tok.parse::<f64>() {
                            coef = c;
                            continue;
                        }
                        let (name, d) = tok.split_at(1);
                        factors.push(Expr::Field {
                            second: name == "v",
                            d: if d.is_empty() { 0 } else { d.parse().unwrap() },
                        });
                    }
                    Expr::Scaled(coef, Box::new(Expr::Product(factors)))
                })
                .collect(),
        )
    }

    fn eval(&self, u: &Jet<C64>, v: &Jet<C64>) -> Jet<C64> {
        match self {
            Expr::Field { second, d } => {
                let mut j = if *second { v.clone() } else { u.clone() };
                for _ in 0..*d {
                    j = j.derivative().unwrap();
                }
                j
            }
            Expr::Scaled(c, e) => e.eval(u, v).scale_by(C64::new(*c, 0.0)),
            Expr::Product(fs) => fs[1..]
                .iter()
                .fold(fs[0].eval(u, v), |acc, f| &acc * &f.eval(u, v)),
            Expr::Sum(ts) => ts[1..]
                .iter()
                .fold(ts[0].eval(u, v), |acc, t| &acc + &t.eval(u, v)),
        }
    }
}

pub fn h_expression_tree() -> Result<(), String> {
    let trees: Vec<Expr> = H_TERMS.iter().map(|t| Expr::parse(t)).collect();
    for (i, tree) in trees.iter().enumerate() {
        let k = i + 1;
        let order = k + 3;
        let strategy = (
            prop::collection::vec(cplx(1.0), order + 1),
            prop::collection::vec(cplx(1.0), order + 1),
            -2.0..2.0f64,
        );
        check(20, strategy, |(p, q, x0)| {
            let p = Jet::from_coeffs(x0, p);
            let q = Jet::from_coeffs(x0, q);
            let want = tree.eval(&p, &q);
            let got = eval_h(k, &FieldSample::general(p, q)).map_err(err)?;
            prop_assert_eq!(got.order(), want.order());
            close(got.coeffs(), want.coeffs(), 1e-10)
        })
        .map_err(|e| format!("k = {k}: {e}"))?;
    }
    Ok(())
}

pub fn catalog_flows() -> Result<(), String> {
    let strategy = (0usize..8, prop::collection::vec(-2.0..2.0f64, 5));
    check(24, strategy, |(vi, xs)| {
        let s = SolutionSpec::new(Variant::ALL[vi]);
        for k in s.supported_flows() {
            for &x in &xs {
                let r = flow_residual(&s, k, x).map_err(err)?;
                let (value, tol) = if s.variant == Variant::RogueRank3 {
                    (r.relative(), 1e-5)
                } else {
                    (r.abs(), 1e-7)
                };
                prop_assert!(value < tol, "{} k = {} x = {}: {:e}", s.variant, k, x, value);
            }
        }
        Ok(())
    })
}

fn scaled_spec() -> impl Strategy<Value = SolutionSpec> {
    (0usize..6, 0.5..2.0f64, -1.0..1.0f64, 0.2..1.2f64, 0.1..0.9f64).prop_map(|(vi, a, b, theta, k1)| {
        SolutionSpec::new(Variant::ALL[vi])
            .with_ab(a, b)
            .with_theta(theta)
            .with_k1(k1)
    })
}

pub fn scaled_families() -> Result<(), String> {
    check(64, (scaled_spec(), -2.0..2.0f64), |(s, x)| {
        let r = flow_residual(&s, 1, x).map_err(err)?;
        prop_assert!(r.abs() < 1e-7, "{:?} x = {}: {:e}", s, x, r.abs());
        Ok(())
    })
}

pub fn dnoidal_limit() -> Result<(), String> {
    let dn = SolutionSpec::new(Variant::DnoidalWave).with_k1(1e-3);
    let sol = SolutionSpec::new(Variant::Soliton);
    check(128, -2.0..2.0f64, |x| {
        let d = dn.value_at(x, [0.0; 5]).map_err(err)? - sol.value_at(x, [0.0; 5]).map_err(err)?;
        prop_assert!(d.norm() < 5e-3, "x = {}: {:e}", x, d.norm());
        Ok(())
    })
}

pub fn peregrine_canonical() -> Result<(), String> {
    let param = SolutionSpec::new(Variant::Peregrine).with_ab(1.0, 0.0);
    let canon = SolutionSpec::canonical(Variant::Peregrine);
    check(128, (-3.0..3.0f64, -2.0..2.0f64), |(x, t)| {
        let times = [t, 0.0, 0.0, 0.0, 0.0];
        prop_assert_eq!(
            param.value_at(x, times).map_err(err)?,
            canon.value_at(x, times).map_err(err)?
        );
        Ok(())
    })
}

pub fn explicit_gammas() -> Result<(), String> {
    let strategy = (scaled_spec(), -2.0..2.0f64, prop::array::uniform3(cplx(2.0)));
    check(64, strategy, |(s, x0, cs)| {
        let f = s.eval_field(x0, required_order(3)).map_err(err)?;
        let gam = build_gammas(&f, 3, &cs).map_err(err)?;
        let c = |v: f64| C64::new(v, 0.0);
        let i = C64::new(0.0, 1.0);
        let (p, q) = (&f.p, &f.q);
        let px = p.derivative().map_err(err)?;
        let pxx = px.derivative().map_err(err)?;
        let pxxx = pxx.derivative().map_err(err)?;
        let h1 = &pxx - &(&(p * p) * q).scale_by(c(2.0));
        let h2 = &pxxx - &(&(p * q) * &px).scale_by(c(6.0));
        let g1 = (&px + &p.scale_by(cs[0])).scale_by(i * 0.5);
        let g2 = (&(&h1 + &px.scale_by(cs[0])) + &p.scale_by(cs[1])).scale_by(c(-0.25));
        let g3 =
            (&(&(&h2 + &h1.scale_by(cs[0])) + &px.scale_by(cs[1])) + &p.scale_by(cs[2])).scale_by(-i / 8.0);
        for (got, want) in gam.gammas[1..].iter().zip([g1, g2, g3]) {
            close(got.coeffs(), want.coeffs(), 1e-12)?;
        }
        let rec = gamma_recursion_residual(&f, &gam).map_err(err)?;
        prop_assert!(rec < 1e-10, "recursion residual {:e}", rec);
        Ok(())
    })
}

struct CurveRun {
    g: usize,
    c: Vec<C64>,
    coeffs: Vec<C64>,
    x_spread: f64,
    t_spread: f64,
    other_c: Vec<C64>,
}

fn curve_run(s: &SolutionSpec, seed: u64) -> Result<CurveRun, TestCaseError> {
    let g = s.genus_hint();
    let xs = sample_points(s, sample_count(g), seed).map_err(err)?;
    let cv = fit_constants(s, g, &xs).map_err(err)?;
    let x0 = reference_point(s, &xs).map_err(err)?;
    let curve = curve_polynomial(s, g, &cv, x0).map_err(err)?;
    let other = sample_points(s, sample_count(g), seed ^ 0x9e37_79b9).map_err(err)?;
    prop_assert!(other.iter().all(|x| !xs.contains(x)));
    let other_c = fit_constants(s, g, &other).map_err(err)?.c;
    Ok(CurveRun {
        g,
        c: cv.c,
        coeffs: curve.coeffs,
        x_spread: curve.x_spread,
        t_spread: curve.t_spread,
        other_c,
    })
}

fn conjugation_defect(r: &[C64]) -> f64 {
    r.iter()
        .map(|z| z.im.abs() / z.norm().max(1.0))
        .fold(0.0, f64::max)
}

pub fn curve_identities() -> Result<(), String> {
    let spec =
        (scaled_spec(), prop::bool::ANY).prop_map(|(s, zero_b)| if zero_b { s.with_ab(s.a, 0.0) } else { s });
    check(48, (spec, any::<u64>()), |(s, seed)| {
        let run = curve_run(&s, seed)?;
        let g = run.g;
        let r = &run.coeffs;
        prop_assert!((r[2 * g + 2] - 1.0).norm() <= 1e-10, "monic {}", r[2 * g + 2]);
        if g >= 1 {
            let ic1 = C64::new(0.0, 1.0) * run.c[0];
            prop_assert!(
                (r[2 * g + 1] - ic1).norm() <= 1e-8,
                "subleading {} vs {}",
                r[2 * g + 1],
                ic1
            );
            if s.b == 0.0 {
                prop_assert!(r[2 * g + 1].norm() <= 1e-8);
            }
        }
        prop_assert!(
            conjugation_defect(r) < 1e-9,
            "conjugation {:e}",
            conjugation_defect(r)
        );
        prop_assert!(
            run.x_spread < 1e-8 && run.t_spread < 1e-8,
            "spread {:e} {:e}",
            run.x_spread,
            run.t_spread
        );
        let dc = run
            .c
            .iter()
            .zip(&run.other_c)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        prop_assert!(dc < 1e-7, "sample dependence {:e}", dc);
        Ok(())
    })
}

pub fn rogue_curve_identities() -> Result<(), String> {
    check(4, (prop::bool::ANY, any::<u64>()), |(rank3, seed)| {
        let v = if rank3 {
            Variant::RogueRank3
        } else {
            Variant::RogueRank2
        };
        let run = curve_run(&SolutionSpec::new(v), seed)?;
        let g = run.g;
        let tol = if rank3 { 1e-5 } else { 1e-6 };
        let r = &run.coeffs;
        prop_assert!((r[2 * g + 2] - 1.0).norm() <= 1e-10);
        prop_assert!(r[2 * g + 1].norm() <= tol);
        prop_assert!(conjugation_defect(r) < tol);
        prop_assert!(
            run.x_spread < 1e-6 && run.t_spread < 1e-6,
            "spread {:e} {:e}",
            run.x_spread,
            run.t_spread
        );
        let rel = run
            .c
            .iter()
            .zip(&run.other_c)
            .map(|(a, b)| (a - b).norm() / b.norm().max(1.0))
            .fold(0.0, f64::max);
        prop_assert!(rel < tol, "sample dependence {:e}", rel);
        Ok(())
    })
}

fn sorted(mut cl: Vec<BranchPointCluster>) -> Vec<BranchPointCluster> {
    cl.sort_by(|a, b| {
        a.center
            .im
            .total_cmp(&b.center.im)
            .then(a.center.re.total_cmp(&b.center.re))
    });
    cl
}

fn golden_spec() -> impl Strategy<Value = SolutionSpec> {
    (0usize..8, 0.5..2.0f64, -1.0..1.0f64, 0.3..1.2f64, 0.1..0.9f64).prop_map(|(vi, a, b, theta, k1)| {
        let v = Variant::ALL[vi];
        let s = SolutionSpec::new(v).with_theta(theta).with_k1(k1);
        if v.is_rogue() {
            s
        } else {
            s.with_ab(a, b)
        }
    })
}

/// `Σ|a_k||c|^k / |Π_{j≠i} (c − c_j)^{m_j}|` for cluster `i` of a monic
/// polynomial: the amplification of relative coefficient noise into the
/// `m`-th power of the center error.
fn cluster_condition(coeffs: &[C64], clusters: &[BranchPointCluster], i: usize) -> f64 {
    let c = clusters[i].center;
    let size: f64 = coeffs
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm() * c.norm().powi(k as i32))
        .sum();
    let rest: f64 = clusters
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != i)
        .map(|(_, o)| (c - o.center).norm().powi(o.multiplicity as i32))
        .product();
    (size / rest).max(1.0)
}

pub fn cluster_round_trip() -> Result<(), String> {
    check(64, golden_spec(), |s| {
        let r = expected_curve(&s);
        let degree = r.len() - 1;
        let first = sorted(cluster_branch_points(&poly_roots(&r).map_err(err)?, degree).map_err(err)?);
        let rebuilt = expand_clusters(&first);
        let second = sorted(cluster_branch_points(&poly_roots(&rebuilt).map_err(err)?, degree).map_err(err)?);
        prop_assert_eq!(first.len(), second.len());
        for (i, (a, b)) in first.iter().zip(&second).enumerate() {
            prop_assert_eq!(a.multiplicity, b.multiplicity);
            let d = (a.center - b.center).norm();
            let eps = f64::EPSILON * cluster_condition(&rebuilt, &first, i);
            prop_assert!(
                d <= tau(a.multiplicity, eps),
                "{} vs {}: {:e}",
                a.center,
                b.center,
                d
            );
        }
        Ok(())
    })
}

fn cluster_set() -> impl Strategy<Value = Vec<BranchPointCluster>> {
    prop::collection::vec((cplx(3.0), 1usize..5), 1..7).prop_map(|v| {
        let mut cl: Vec<BranchPointCluster> = v
            .into_iter()
            .map(|(center, multiplicity)| BranchPointCluster {
                center,
                multiplicity,
                radius: 0.0,
            })
            .collect();
        let total: usize = cl.iter().map(|c| c.multiplicity).sum();
        if total % 2 == 1 || total < 2 {
            cl[0].multiplicity += if total < 2 { 2 - total } else { 1 };
        }
        cl
    })
}

pub fn genera_invariance() -> Result<(), String> {
    let strategy = cluster_set().prop_flat_map(|cl| (Just(cl.clone()), Just(cl).prop_shuffle(), cplx(2.0)));
    check(256, strategy, |(cl, shuffled, shift)| {
        let base = genera(&cl).map_err(err)?;
        prop_assert_eq!(&genera(&shuffled).map_err(err)?, &base);
        let moved: Vec<_> = cl
            .iter()
            .map(|c| BranchPointCluster {
                center: c.center + shift,
                ..*c
            })
            .collect();
        prop_assert_eq!(&genera(&moved).map_err(err)?, &base);
        Ok(())
    })
}

pub fn genera_table() -> Result<(), String> {
    let at = |m: &[usize]| -> Vec<BranchPointCluster> {
        m.iter()
            .enumerate()
            .map(|(i, &m)| BranchPointCluster {
                center: C64::new(0.0, i as f64),
                multiplicity: m,
                radius: 0.0,
            })
            .collect()
    };
    let mut table: Vec<(Vec<usize>, (usize, usize, bool))> = vec![
        (vec![1, 1], (0, 0, false)),
        (vec![2, 2], (1, 0, true)),
        (vec![1, 1, 1, 1], (1, 1, false)),
        (vec![3, 3], (2, 0, false)),
        (vec![1, 2, 2, 1], (2, 0, false)),
        (vec![5, 5], (4, 0, false)),
        (vec![7, 7], (6, 0, false)),
    ];
    for n in 1..=4 {
        let mut m = vec![1, 1, 1, 1];
        m.extend(std::iter::repeat_n(2, 2 * n));
        table.push((m, (2 * n + 1, 1, false)));
    }
    for (m, want) in table {
        let g = genera(&at(&m)).map_err(|e| e.to_string())?;
        let got = (g.arithmetic_genus, g.topological_genus, g.reducible);
        if got != want {
            return Err(format!("multiplicities {m:?}: got {got:?}, want {want:?}"));
        }
    }
    Ok(())
}

pub fn comparison_symmetry() -> Result<(), String> {
    let strategy = (1usize..15).prop_flat_map(|n| {
        (
            prop::collection::vec(cplx(50.0), n),
            prop::collection::vec(cplx(1e-3), n),
        )
    });
    check(256, strategy, |(a, delta)| {
        let b: Vec<C64> = a.iter().zip(&delta).map(|(x, d)| x + d).collect();
        prop_assert_eq!(coefficient_distance(&a, &a).map_err(err)?, 0.0);
        let ab = coefficient_distance(&a, &b).map_err(err)?;
        let ba = coefficient_distance(&b, &a).map_err(err)?;
        prop_assert!((ab - ba).abs() <= 4.0 * f64::EPSILON * ab, "{:e} vs {:e}", ab, ba);
        prop_assert!(ab <= 1e-3 * 2f64.sqrt());
        Ok(())
    })
}
