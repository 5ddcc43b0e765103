//! Closed-form curves and constants for the catalog solutions.

use crate::jet::C64;
use crate::solutions::{SolutionSpec, Variant};

fn mul(a: &[C64], b: &[C64]) -> Vec<C64> {
    let mut out = vec![C64::new(0.0, 0.0); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `(λ − b)² + s²`, ascending.
fn shifted_quadratic(b: f64, s2: f64) -> Vec<C64> {
    [b * b + s2, -2.0 * b, 1.0].map(|v| C64::new(v, 0.0)).to_vec()
}

fn power(base: &[C64], n: usize) -> Vec<C64> {
    (0..n).fold(vec![C64::new(1.0, 0.0)], |acc, _| mul(&acc, base))
}

/// Ascending coefficients of `R(λ)`.
pub fn expected_curve(s: &SolutionSpec) -> Vec<C64> {
    let (a, b) = s.effective_ab();
    let base = shifted_quadratic(b, a * a);
    match s.variant {
        Variant::PlaneWave => base,
        Variant::Soliton => power(&base, 2),
        Variant::DnoidalWave => {
            let (lo, hi) = (a * (1.0 - s.k1), a * (1.0 + s.k1));
            mul(&shifted_quadratic(b, lo * lo), &shifted_quadratic(b, hi * hi))
        }
        Variant::Peregrine => power(&base, 3),
        Variant::KuznetsovMa => {
            let inner = a * s.theta.cos();
            mul(&base, &power(&shifted_quadratic(b, inner * inner), 2))
        }
        Variant::AkhmedievBreather => {
            let inner = a * s.theta.cosh();
            mul(&base, &power(&shifted_quadratic(b, inner * inner), 2))
        }
        Variant::RogueRank2 => power(&base, 5),
        Variant::RogueRank3 => power(&base, 7),
    }
}

/// `c_1..c_g` where a closed form is known.
pub fn expected_constants(s: &SolutionSpec) -> Option<Vec<C64>> {
    let (a, b) = s.effective_ab();
    let r = |v: f64| C64::new(v, 0.0);
    let at_origin = (a, b) == (1.0, 0.0);
    match s.variant {
        Variant::PlaneWave => Some(vec![]),
        Variant::Soliton => Some(vec![C64::new(0.0, 4.0 * b)]),
        Variant::Peregrine => Some(vec![C64::new(0.0, 6.0 * b), r(-6.0 * a * a - 12.0 * b * b)]),
        Variant::KuznetsovMa if at_origin => {
            let cs = s.theta.cos();
            Some(vec![r(0.0), r(-2.0 - 4.0 * cs * cs)])
        }
        Variant::AkhmedievBreather if at_origin => {
            let ch = s.theta.cosh();
            Some(vec![r(0.0), r(-2.0 - 4.0 * ch * ch)])
        }
        Variant::RogueRank2 => Some([0.0, -10.0, 0.0, 30.0].map(r).to_vec()),
        Variant::RogueRank3 => Some([0.0, -14.0, 0.0, 70.0, 0.0, -140.0].map(r).to_vec()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rogue_curves_are_binomial() {
        let r = expected_curve(&SolutionSpec::new(Variant::RogueRank3));
        let re: Vec<f64> = r.iter().map(|z| z.re).collect();
        assert_eq!(
            re,
            vec![1.0, 0.0, 7.0, 0.0, 21.0, 0.0, 35.0, 0.0, 35.0, 0.0, 21.0, 0.0, 7.0, 0.0, 1.0]
        );
    }

    #[test]
    fn shifted_soliton() {
        let s = SolutionSpec::new(Variant::Soliton).with_ab(1.0, 0.5);
        let r: Vec<f64> = expected_curve(&s).iter().map(|z| z.re).collect();
        assert_eq!(r, vec![1.5625, -2.5, 3.5, -2.0, 1.0]);
    }

    #[test]
    fn km_constants_only_at_origin() {
        assert!(expected_constants(&SolutionSpec::new(Variant::KuznetsovMa).with_ab(1.0, 0.2)).is_none());
        let c = expected_constants(&SolutionSpec::new(Variant::KuznetsovMa)).unwrap();
        let cs = (std::f64::consts::PI / 5.0).cos();
        assert!((c[1].re + 2.0 + 4.0 * cs * cs).abs() < 1e-15);
    }
}
