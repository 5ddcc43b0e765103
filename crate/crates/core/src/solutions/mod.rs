//! Closed-form catalog of focusing AKNS solutions, evaluated as jets.
//!
//! Every variant is written once as a function of generic [`Scalar`]
//! arguments `x, t1..t5`, so the same code produces x-jets (`Jet<C64>`) and
//! x-jets of t-jets (`Jet<Jet<C64>>`) for mixed partials.

pub mod polytab;
pub mod rogue;

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hierarchy::{FieldSample, TimeSubstitution};
use crate::jet::{Jet, Scalar, C64, I};

use rogue::RogueTable;

/// Denominators smaller than this are treated as poles.
pub const POLE_THRESHOLD: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    #[serde(rename = "planewave")]
    PlaneWave,
    #[serde(rename = "soliton")]
    Soliton,
    #[serde(rename = "dnoidal")]
    DnoidalWave,
    #[serde(rename = "peregrine")]
    Peregrine,
    #[serde(rename = "km")]
    KuznetsovMa,
    #[serde(rename = "akhmediev")]
    AkhmedievBreather,
    #[serde(rename = "rogue2")]
    RogueRank2,
    #[serde(rename = "rogue3")]
    RogueRank3,
}

impl Variant {
    pub const ALL: [Variant; 8] = [
        Variant::PlaneWave,
        Variant::Soliton,
        Variant::DnoidalWave,
        Variant::Peregrine,
        Variant::KuznetsovMa,
        Variant::AkhmedievBreather,
        Variant::RogueRank2,
        Variant::RogueRank3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::PlaneWave => "planewave",
            Variant::Soliton => "soliton",
            Variant::DnoidalWave => "dnoidal",
            Variant::Peregrine => "peregrine",
            Variant::KuznetsovMa => "km",
            Variant::AkhmedievBreather => "akhmediev",
            Variant::RogueRank2 => "rogue2",
            Variant::RogueRank3 => "rogue3",
        }
    }

    /// Number of phases (arithmetic genus of the curve).
    pub fn genus_hint(self) -> usize {
        match self {
            Variant::PlaneWave => 0,
            Variant::Soliton | Variant::DnoidalWave => 1,
            Variant::Peregrine | Variant::KuznetsovMa | Variant::AkhmedievBreather => 2,
            Variant::RogueRank2 => 4,
            Variant::RogueRank3 => 6,
        }
    }

    pub fn is_rogue(self) -> bool {
        matches!(self, Variant::RogueRank2 | Variant::RogueRank3)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Variant::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solution {s:?}")))
    }
}

/// A catalog solution with its parameters and the fixed times `t1..t5`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolutionSpec {
    pub variant: Variant,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    /// Complementary modulus `k1`, with `k^2 + k1^2 = 1`.
    pub k1: f64,
    pub times: [f64; 5],
    /// Forces `a = 1, b = 0` (phases `X = 2x`, `T = 4t`).
    pub canonical: bool,
}

impl SolutionSpec {
    pub fn new(variant: Variant) -> Self {
        Self {
            variant,
            a: 1.0,
            b: 0.0,
            theta: PI / 5.0,
            k1: 0.6,
            times: [0.0; 5],
            canonical: variant.is_rogue(),
        }
    }

    pub fn canonical(variant: Variant) -> Self {
        Self {
            canonical: true,
            ..Self::new(variant)
        }
    }

    pub fn with_ab(mut self, a: f64, b: f64) -> Self {
        self.a = a;
        self.b = b;
        self
    }

    pub fn with_theta(mut self, theta: f64) -> Self {
        self.theta = theta;
        self
    }

    pub fn with_k1(mut self, k1: f64) -> Self {
        self.k1 = k1;
        self
    }

    pub fn with_times(mut self, times: [f64; 5]) -> Self {
        self.times = times;
        self
    }

    pub fn genus_hint(&self) -> usize {
        self.variant.genus_hint()
    }

    /// Elliptic modulus `k = sqrt(1 − k1²)`.
    pub fn modulus_k(&self) -> f64 {
        ((1.0 - self.k1) * (1.0 + self.k1)).sqrt()
    }

    /// `(a, b)` after applying the canonical flag.
    pub fn effective_ab(&self) -> (f64, f64) {
        if self.canonical {
            (1.0, 0.0)
        } else {
            (self.a, self.b)
        }
    }

    /// Whether the solution carries the full `t1..t5` dependence.
    pub fn is_multi_time(&self) -> bool {
        match self.variant {
            Variant::Soliton | Variant::RogueRank2 | Variant::RogueRank3 => true,
            Variant::PlaneWave | Variant::Peregrine => self.effective_ab() == (1.0, 0.0),
            _ => false,
        }
    }

    pub fn supported_flows(&self) -> Vec<usize> {
        if self.is_multi_time() {
            (1..=5).collect()
        } else {
            vec![1]
        }
    }

    pub fn check_flow(&self, k: usize) -> Result<()> {
        if !(1..=5).contains(&k) {
            return Err(Error::UnsupportedK(k));
        }
        if k > 1 && !self.is_multi_time() {
            return Err(Error::UnsupportedFlow {
                variant: self.variant.name().to_string(),
                flow: k,
            });
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let (a, b) = self.effective_ab();
        if !(a.is_finite() && a > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "amplitude a = {a} must be positive"
            )));
        }
        if !b.is_finite() || !self.theta.is_finite() || self.times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("parameters must be finite".into()));
        }
        match self.variant {
            Variant::DnoidalWave => {
                if !(self.k1 > 0.0 && self.k1 < 1.0) {
                    return Err(Error::ModulusOutOfRange(self.modulus_k()));
                }
            }
            Variant::RogueRank2 | Variant::RogueRank3 if (a, b) != (1.0, 0.0) => {
                return Err(Error::UnsupportedParametrization(format!(
                    "{} is only available with a = 1, b = 0 (got a = {a}, b = {b})",
                    self.variant
                )));
            }
            _ => {}
        }
        for k in 2..=5 {
            if self.times[k - 1] != 0.0 {
                self.check_flow(k)?;
            }
        }
        Ok(())
    }

    /// `p(x, t1..t5)` on generic scalars.
    pub fn eval_p<S: Scalar>(&self, x: &S, t: &[S; 5]) -> Result<S> {
        self.validate()?;
        let (a, b) = self.effective_ab();
        let x0 = x.value().re;
        let t1 = &t[0];
        // Galilean-scaled carrier of the one-flow variants.
        let carrier = |x: &S, t1: &S| -> S {
            (t1.scale(c(2.0 * (a * a - 2.0 * b * b))) + x.scale(c(-2.0 * b)))
                .scale(I)
                .exp()
        };
        match self.variant {
            Variant::PlaneWave => {
                if self.is_multi_time() {
                    Ok(multi_carrier(t))
                } else {
                    Ok(carrier(x, t1).scale(c(a)))
                }
            }
            Variant::Soliton => {
                // E = −2i Σ (2λ1)^k λ1 t_k with t_0 = x and λ1 = b + ia; at
                // t2..t5 = 0 this is `2a e^{4i(a²−b²)t−2ibx} / cosh(2ax + 8abt)`.
                let lam = C64::new(b, a);
                let mut re = x.scale(c((-2.0 * I * lam).re));
                let mut im = x.scale(c((-2.0 * I * lam).im));
                let mut w = -2.0 * I * lam;
                for tk in t {
                    w *= 2.0 * lam;
                    re = re + tk.scale(c(w.re));
                    im = im + tk.scale(c(w.im));
                }
                let (_, ch) = re.sinh_cosh();
                Ok(im.scale(I).exp().scale(c(2.0 * a)) * checked_recip(&ch, x0)?)
            }
            Variant::DnoidalWave => {
                let k = self.modulus_k();
                let arg = x.scale(c(2.0 * a)) + t1.scale(c(8.0 * a * b));
                let w = 4.0 * (2.0 * a * a - k * k * a * a - b * b);
                let phase = (t1.scale(c(w)) + x.scale(c(-2.0 * b))).scale(I).exp();
                let (_, _, dn) = arg.jacobi(k);
                Ok(phase.scale(c(2.0 * a)) * dn)
            }
            Variant::Peregrine => {
                if self.is_multi_time() {
                    rogue_field(rogue::rank1(), x, t)
                } else {
                    let xx = x.scale(c(2.0 * a)) + t1.scale(c(8.0 * a * b));
                    let tt = t1.scale(c(4.0 * a * a));
                    let env = peregrine_envelope(&xx, &tt, x0)?;
                    Ok(env.scale(c(a)) * carrier(x, t1))
                }
            }
            Variant::KuznetsovMa | Variant::AkhmedievBreather => {
                let xx = x.scale(c(2.0 * a)) + t1.scale(c(8.0 * a * b));
                let tt = t1.scale(c(4.0 * a * a));
                let theta = if self.variant == Variant::KuznetsovMa {
                    c(self.theta)
                } else {
                    C64::new(0.0, self.theta)
                };
                let env = km_envelope(&xx, &tt, theta, x0)?;
                Ok(env.scale(c(a)) * carrier(x, t1))
            }
            Variant::RogueRank2 => rogue_field(rogue::rank2(), x, t),
            Variant::RogueRank3 => rogue_field(rogue::rank3(), x, t),
        }
    }

    /// `p` and `q = −p*` as x-jets of order `x_order` at `x0`, times fixed.
    pub fn eval_field(&self, x0: f64, x_order: usize) -> Result<FieldSample<C64>> {
        let x = Jet::variable(x0, x_order);
        let t = self.times.map(|tk| Jet::constant_c(x0, x_order, c(tk)));
        let p = self.eval_p(&x, &t)?;
        Ok(FieldSample::focusing(p))
    }

    /// x-jets of t-jets under `t_k = t_k^0 + s_k τ`, expanded to order
    /// `t_order` in `τ` at `τ = 0`.
    pub fn eval_field_in_time(
        &self,
        x0: f64,
        x_order: usize,
        t_map: &TimeSubstitution,
        t_order: usize,
    ) -> Result<FieldSample<Jet<C64>>> {
        for (k, s) in (1..=5).zip(t_map.speeds) {
            if s != 0.0 {
                self.check_flow(k)?;
            }
        }
        let proto = Jet::constant_c(0.0, t_order, c(0.0));
        let tau = Jet::variable(0.0, t_order);
        let x = Jet::variable_like(x0, x_order, &proto);
        let t: [Jet<Jet<C64>>; 5] = std::array::from_fn(|k| {
            let inner = tau.scale_by(c(t_map.speeds[k])).add_constant(c(self.times[k]));
            Jet::constant(x0, x_order, inner)
        });
        let p = self.eval_p(&x, &t)?;
        Ok(FieldSample::focusing(p))
    }

    /// Scalar value `p(x, times)`.
    pub fn value_at(&self, x: f64, times: [f64; 5]) -> Result<C64> {
        self.eval_p(&c(x), &times.map(c))
    }

    /// `p` on the grid `ts × xs` (`t` drives `t1`, the other times stay
    /// fixed), ordered by `t` then `x`.
    pub fn field_grid(&self, xs: &[f64], ts: &[f64]) -> Result<Vec<(f64, f64, C64)>> {
        self.validate()?;
        let pts: Vec<(f64, f64)> = ts.iter().flat_map(|&t| xs.iter().map(move |&x| (x, t))).collect();
        pts.par_iter()
            .map(|&(x, t)| {
                let mut times = self.times;
                times[0] = t;
                Ok((x, t, self.value_at(x, times)?))
            })
            .collect()
    }
}

fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}

fn checked_recip<S: Scalar>(d: &S, x0: f64) -> Result<S> {
    let m = d.value().norm();
    if m < POLE_THRESHOLD {
        return Err(Error::PoleAtPoint { x: x0, magnitude: m });
    }
    d.recip()
}

/// `exp(i(2t1 − 6t3 + 20t5))`.
fn multi_carrier<S: Scalar>(t: &[S; 5]) -> S {
    let mut phase = t[0].zero_like();
    for (tk, w) in t.iter().zip(rogue::CARRIER) {
        if w != 0.0 {
            phase = phase + tk.scale(c(w));
        }
    }
    phase.scale(I).exp()
}

fn rogue_field<S: Scalar>(table: &RogueTable, x: &S, t: &[S; 5]) -> Result<S> {
    let vars: [S; 6] = std::array::from_fn(|row| {
        let m = &table.phase_map[row];
        let mut acc = x.scale(c(m[0]));
        for (tk, w) in t.iter().zip(&m[1..]) {
            if *w != 0.0 {
                acc = acc + tk.scale(c(*w));
            }
        }
        acc
    });
    let g = table.g.eval(&vars);
    let h = table.h.eval(&vars);
    let q = table.q.eval(&vars);
    let inv_q = checked_recip(&q, x.value().re)?;
    let frac = (g + h.scale(I)) * inv_q;
    let env = frac.scale(c(-table.prefactor)) + x.constant_like(c(1.0));
    Ok(env * multi_carrier(t))
}

/// `1 − 4(1 + iT)/(X² + T² + 1)`.
fn peregrine_envelope<S: Scalar>(xx: &S, tt: &S, x0: f64) -> Result<S> {
    let one = xx.constant_like(c(1.0));
    let den = xx.clone() * xx.clone() + tt.clone() * tt.clone() + one.clone();
    let num = (one.clone() + tt.scale(I)).scale(c(4.0));
    Ok(one - num * checked_recip(&den, x0)?)
}

/// The breather envelope
/// `1 − 2k(k cosh(kϰT) + iϰ sinh(kϰT)) / (sqrt(ϰ² + k²) cosh(kϰT) − ϰ cos(kX))`
/// with `k = sin θ`, `ϰ = cos θ` for complex `θ`. Real `θ` gives the
/// Kuznetsov–Ma soliton, imaginary `θ` the Akhmediev breather. At `θ = 0`
/// the removable singularity is replaced by its Peregrine limit.
fn km_envelope<S: Scalar>(xx: &S, tt: &S, theta: C64, x0: f64) -> Result<S> {
    if theta == c(0.0) {
        return peregrine_envelope(xx, tt, x0);
    }
    let k = theta.sin();
    let kap = theta.cos();
    let root = (kap * kap + k * k).sqrt();
    let (sh, ch) = tt.scale(k * kap).sinh_cosh();
    let (_, cs) = xx.scale(k).sin_cos();
    let num = (ch.scale(k) + sh.scale(I * kap)).scale(2.0 * k);
    let den = ch.scale(root) - cs.scale(kap);
    Ok(xx.constant_like(c(1.0)) - num * checked_recip(&den, x0)?)
}

/// Akhmediev breather at `θ` minus the Kuznetsov–Ma formula continued to
/// `iθ`, maximized over `(x, t)` points. Both are built from their own closed
/// forms.
pub fn km_akhmediev_duality_check(theta: f64, points: &[(f64, f64)]) -> Result<f64> {
    let mut worst = 0.0f64;
    for &(x, t) in points {
        let akh = akhmediev_direct(x, t, theta)?;
        let km = km_envelope(&c(2.0 * x), &c(4.0 * t), C64::new(0.0, theta), x)? * (I * c(2.0 * t)).exp();
        worst = worst.max((akh - km).norm());
    }
    Ok(worst)
}

/// `(1 + 2k(k cos(kϰT) + iϰ sin(kϰT)) / (sqrt(ϰ² − k²) cos(kϰT) − ϰ cosh(kX))) e^{2i(ϰ² − k²)t}`
/// with `k = sinh θ`, `ϰ = cosh θ`, `X = 2x`, `T = 4t`.
fn akhmediev_direct(x: f64, t: f64, theta: f64) -> Result<C64> {
    let (xx, tt) = (2.0 * x, 4.0 * t);
    let phase = (I * 2.0 * t * (theta.cosh().powi(2) - theta.sinh().powi(2))).exp();
    if theta == 0.0 {
        return Ok(peregrine_envelope(&c(xx), &c(tt), x)? * phase);
    }
    let k = theta.sinh();
    let kap = theta.cosh();
    let arg = k * kap * tt;
    let num = 2.0 * k * C64::new(k * arg.cos(), kap * arg.sin());
    let den = (kap * kap - k * k).sqrt() * arg.cos() - kap * (k * xx).cosh();
    if den.abs() < POLE_THRESHOLD {
        return Err(Error::PoleAtPoint {
            x,
            magnitude: den.abs(),
        });
    }
    Ok((c(1.0) + num / den) * phase)
}
