//! Truncated Taylor series ("jets") over complex scalars.
//!
//! A [`Jet`] of order `N` at base point `x0` stores `c_0..c_N` with
//! `f(x0 + h) = sum c_k h^k + O(h^{N+1})`. Coefficients are generic over
//! [`Scalar`], and `Jet<S>` is itself a `Scalar`, so an x-jet of t-jets
//! (`Jet<Jet<C64>>`) carries mixed partial derivatives.
//!
//! Mixed-order arithmetic truncates to the smaller order.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub const I: C64 = C64::new(0.0, 1.0);

/// Coefficient ring of a jet.
///
/// `value` always reports the innermost constant term, so nested jets can be
/// tested for vanishing the same way as plain complex numbers.
pub trait Scalar:
    Clone
    + fmt::Debug
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn constant_like(&self, c: C64) -> Self;
    fn scale(&self, c: C64) -> Self;
    fn value(&self) -> C64;
    /// Largest coefficient magnitude, recursively.
    fn magnitude(&self) -> f64;
    /// Coefficientwise conjugation. Only meaningful for jets in real variables.
    fn conj(&self) -> Self;
    fn exp(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);
    fn sinh_cosh(&self) -> (Self, Self);
    fn sqrt(&self) -> Result<Self>;
    fn recip(&self) -> Result<Self>;
    /// `(sn, cn, dn)` for elliptic modulus `k`.
    fn jacobi(&self, k: f64) -> (Self, Self, Self);
}

impl Scalar for C64 {
    fn zero_like(&self) -> Self {
        C64::new(0.0, 0.0)
    }
    fn constant_like(&self, c: C64) -> Self {
        c
    }
    fn scale(&self, c: C64) -> Self {
        self * c
    }
    fn value(&self) -> C64 {
        *self
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
    fn conj(&self) -> Self {
        Complex64::conj(self)
    }
    fn exp(&self) -> Self {
        Complex64::exp(*self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        (Complex64::sin(*self), Complex64::cos(*self))
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        (Complex64::sinh(*self), Complex64::cosh(*self))
    }
    fn sqrt(&self) -> Result<Self> {
        Ok(Complex64::sqrt(*self))
    }
    fn recip(&self) -> Result<Self> {
        let n = self.norm();
        if n < f64::MIN_POSITIVE {
            return Err(Error::DivisionByZeroJet(n));
        }
        Ok(self.inv())
    }
    fn jacobi(&self, k: f64) -> (Self, Self, Self) {
        jacobi_complex(*self, k)
    }
}

/// Truncated Taylor expansion at `base_point`.
#[derive(Clone, PartialEq)]
pub struct Jet<S> {
    base_point: f64,
    coeffs: Vec<S>,
}

impl<S: fmt::Debug> fmt::Debug for Jet<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet@{}{:?}", self.base_point, self.coeffs)
    }
}

impl<S: Scalar> Jet<S> {
    /// Builds a jet from explicit coefficients. Panics on an empty vector.
    pub fn from_coeffs(base_point: f64, coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a jet needs at least c_0");
        Self { base_point, coeffs }
    }

    pub fn constant(base_point: f64, order: usize, c: S) -> Self {
        let zero = c.zero_like();
        let mut coeffs = vec![zero; order + 1];
        coeffs[0] = c;
        Self { base_point, coeffs }
    }

    /// The identity function `x` at `base_point`, with coefficients shaped like `proto`.
    pub fn variable_like(base_point: f64, order: usize, proto: &S) -> Self {
        let mut j = Self::constant(base_point, order, proto.constant_like(C64::new(base_point, 0.0)));
        if order >= 1 {
            j.coeffs[1] = proto.constant_like(C64::new(1.0, 0.0));
        }
        j
    }

    pub fn base_point(&self) -> f64 {
        self.base_point
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// `k!·c_k`, the k-th derivative at the base point.
    pub fn derivative_at(&self, k: usize) -> S {
        let f: f64 = (1..=k).map(|j| j as f64).product();
        self.coeffs[k].scale(C64::new(f, 0.0))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let n = order.min(self.order());
        Self {
            base_point: self.base_point,
            coeffs: self.coeffs[..=n].to_vec(),
        }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Jet<T> {
        Jet {
            base_point: self.base_point,
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderTooLow { needed: 1, got: 0 });
        }
        let coeffs = self.coeffs[1..]
            .iter()
            .enumerate()
            .map(|(k, c)| c.scale(C64::new((k + 1) as f64, 0.0)))
            .collect();
        Ok(Self {
            base_point: self.base_point,
            coeffs,
        })
    }

    /// `[f, f', f'', …, f^(n)]`, each truncated by one order per derivative.
    pub fn derivatives(&self, n: usize) -> Result<Vec<Self>> {
        if self.order() < n {
            return Err(Error::OrderTooLow {
                needed: n,
                got: self.order(),
            });
        }
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.clone());
        for _ in 0..n {
            let next = out.last().unwrap().derivative()?;
            out.push(next);
        }
        Ok(out)
    }

    /// Antiderivative vanishing at the base point; order grows by one.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(self.coeffs[0].zero_like());
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs.push(c.scale(C64::new(1.0 / (k + 1) as f64, 0.0)));
        }
        Self {
            base_point: self.base_point,
            coeffs,
        }
    }

    pub fn scale_by(&self, c: C64) -> Self {
        self.map(|x| x.scale(c))
    }

    pub fn mul_scalar(&self, s: &S) -> Self {
        self.map(|x| x.clone() * s.clone())
    }

    pub fn add_scalar(&self, s: &S) -> Self {
        let mut out = self.clone();
        out.coeffs[0] = out.coeffs[0].clone() + s.clone();
        out
    }

    pub fn add_constant(&self, c: C64) -> Self {
        let s = self.coeffs[0].constant_like(c);
        self.add_scalar(&s)
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut acc = Self::constant(
            self.base_point,
            self.order(),
            self.coeffs[0].constant_like(C64::new(1.0, 0.0)),
        );
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        let d = rhs.coeffs[0].magnitude_of_value();
        if d < f64::MIN_POSITIVE {
            return Err(Error::DivisionByZeroJet(d));
        }
        Ok(self / rhs)
    }

    fn check_base(&self, other: &Self) {
        debug_assert!(
            (self.base_point - other.base_point).abs() <= 1e-12 * (1.0 + self.base_point.abs()),
            "jet base points differ: {} vs {}",
            self.base_point,
            other.base_point
        );
    }

    fn scaled_index(c: &S, k: usize, n: usize) -> S {
        c.scale(C64::new(k as f64 / n as f64, 0.0))
    }

    fn exp_coeffs(&self) -> Vec<S> {
        let n = self.order();
        let mut e: Vec<S> = Vec::with_capacity(n + 1);
        e.push(self.coeffs[0].exp());
        for k in 1..=n {
            let mut acc = self.coeffs[0].zero_like();
            for j in 1..=k {
                acc = acc + Self::scaled_index(&self.coeffs[j], j, k) * e[k - j].clone();
            }
            e.push(acc);
        }
        e
    }

    /// Shared recurrence for (sin, cos) with `sign = -1` and (sinh, cosh) with `sign = +1`.
    fn trig_pair(&self, s0: S, c0: S, sign: f64) -> (Self, Self) {
        let n = self.order();
        let mut s = vec![s0];
        let mut c = vec![c0];
        for k in 1..=n {
            let mut sk = self.coeffs[0].zero_like();
            let mut ck = self.coeffs[0].zero_like();
            for j in 1..=k {
                let aj = Self::scaled_index(&self.coeffs[j], j, k);
                sk = sk + aj.clone() * c[k - j].clone();
                ck = ck + aj * s[k - j].clone();
            }
            s.push(sk);
            c.push(ck.scale(C64::new(sign, 0.0)));
        }
        (
            Self::from_coeffs(self.base_point, s),
            Self::from_coeffs(self.base_point, c),
        )
    }

    pub fn exp(&self) -> Self {
        Self::from_coeffs(self.base_point, self.exp_coeffs())
    }

    pub fn sin(&self) -> Self {
        self.sin_cos().0
    }

    pub fn cos(&self) -> Self {
        self.sin_cos().1
    }

    pub fn sinh(&self) -> Self {
        self.sinh_cosh().0
    }

    pub fn cosh(&self) -> Self {
        self.sinh_cosh().1
    }

    pub fn sin_cos(&self) -> (Self, Self) {
        let (s0, c0) = self.coeffs[0].sin_cos();
        self.trig_pair(s0, c0, -1.0)
    }

    pub fn sinh_cosh(&self) -> (Self, Self) {
        let (s0, c0) = self.coeffs[0].sinh_cosh();
        self.trig_pair(s0, c0, 1.0)
    }

    /// Square root continuous from the principal root of `c_0`.
    pub fn sqrt(&self) -> Result<Self> {
        let m = self.coeffs[0].magnitude_of_value();
        if m < f64::MIN_POSITIVE {
            return Err(Error::BranchPointAtBase(m));
        }
        let n = self.order();
        let r0 = self.coeffs[0].sqrt()?;
        let inv2r0 = r0.scale(C64::new(2.0, 0.0)).recip()?;
        let mut r = vec![r0];
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..k {
                acc = acc - r[j].clone() * r[k - j].clone();
            }
            r.push(acc * inv2r0.clone());
        }
        Ok(Self::from_coeffs(self.base_point, r))
    }

    pub fn recip(&self) -> Result<Self> {
        let m = self.coeffs[0].magnitude_of_value();
        if m < f64::MIN_POSITIVE {
            return Err(Error::BranchPointAtBase(m));
        }
        let one = Self::constant(
            self.base_point,
            self.order(),
            self.coeffs[0].constant_like(C64::new(1.0, 0.0)),
        );
        Ok(&one / self)
    }

    /// Coefficientwise conjugate; valid for jets in a real variable.
    pub fn conj_on_real_axis(&self) -> Self {
        self.map(|c| c.conj())
    }

    /// Jacobi `(sn, cn, dn)` of this jet for modulus `k`, via
    /// `sn' = cn·dn·u'`, `cn' = -sn·dn·u'`, `dn' = -k²·sn·cn·u'`.
    pub fn jacobi(&self, k: f64) -> (Self, Self, Self) {
        let n = self.order();
        let m = k * k;
        let (s0, c0, d0) = self.coeffs[0].jacobi(k);
        let mut s = vec![s0];
        let mut c = vec![c0];
        let mut d = vec![d0];
        let prod = |x: &[S], y: &[S], i: usize| -> S {
            let mut acc = x[0].zero_like();
            for j in 0..=i {
                acc = acc + x[j].clone() * y[i - j].clone();
            }
            acc
        };
        for kk in 1..=n {
            let mut sk = self.coeffs[0].zero_like();
            let mut ck = self.coeffs[0].zero_like();
            let mut dk = self.coeffs[0].zero_like();
            for j in 1..=kk {
                let aj = Self::scaled_index(&self.coeffs[j], j, kk);
                let i = kk - j;
                sk = sk + aj.clone() * prod(&c, &d, i);
                ck = ck - aj.clone() * prod(&s, &d, i);
                dk = dk - aj.scale(C64::new(m, 0.0)) * prod(&s, &c, i);
            }
            s.push(sk);
            c.push(ck);
            d.push(dk);
        }
        let bp = self.base_point;
        (
            Self::from_coeffs(bp, s),
            Self::from_coeffs(bp, c),
            Self::from_coeffs(bp, d),
        )
    }
}

impl Jet<C64> {
    pub fn variable(base_point: f64, order: usize) -> Self {
        Self::variable_like(base_point, order, &C64::new(0.0, 0.0))
    }

    pub fn constant_c(base_point: f64, order: usize, c: C64) -> Self {
        Self::constant(base_point, order, c)
    }
}

trait ValueMagnitude {
    fn magnitude_of_value(&self) -> f64;
}

impl<S: Scalar> ValueMagnitude for S {
    fn magnitude_of_value(&self) -> f64 {
        self.value().norm()
    }
}

impl<'a, S: Scalar> Add<&'a Jet<S>> for &'a Jet<S> {
    type Output = Jet<S>;
    fn add(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.check_base(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Jet {
            base_point: self.base_point,
            coeffs,
        }
    }
}

impl<'a, S: Scalar> Sub<&'a Jet<S>> for &'a Jet<S> {
    type Output = Jet<S>;
    fn sub(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.check_base(rhs);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&rhs.coeffs)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Jet {
            base_point: self.base_point,
            coeffs,
        }
    }
}

impl<'a, S: Scalar> Mul<&'a Jet<S>> for &'a Jet<S> {
    type Output = Jet<S>;
    fn mul(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.check_base(rhs);
        let n = self.order().min(rhs.order());
        let coeffs = (0..=n)
            .map(|k| {
                let mut acc = self.coeffs[0].clone() * rhs.coeffs[k].clone();
                for j in 1..=k {
                    acc = acc + self.coeffs[j].clone() * rhs.coeffs[k - j].clone();
                }
                acc
            })
            .collect();
        Jet {
            base_point: self.base_point,
            coeffs,
        }
    }
}

impl<'a, S: Scalar> Div<&'a Jet<S>> for &'a Jet<S> {
    type Output = Jet<S>;
    /// Long division. Does not check the divisor; see [`Jet::checked_div`].
    fn div(self, rhs: &'a Jet<S>) -> Jet<S> {
        self.check_base(rhs);
        let n = self.order().min(rhs.order());
        let mut q: Vec<S> = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let mut acc = self.coeffs[k].clone();
            for j in 1..=k {
                acc = acc - rhs.coeffs[j].clone() * q[k - j].clone();
            }
            q.push(acc / rhs.coeffs[0].clone());
        }
        Jet {
            base_point: self.base_point,
            coeffs: q,
        }
    }
}

impl<S: Scalar> Neg for &Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        self.map(|c| -c.clone())
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl<S: Scalar> $tr<Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: Jet<S>) -> Jet<S> {
                (&self).$m(&rhs)
            }
        }
        impl<'a, S: Scalar> $tr<&'a Jet<S>> for Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: &'a Jet<S>) -> Jet<S> {
                (&self).$m(rhs)
            }
        }
        impl<'a, S: Scalar> $tr<Jet<S>> for &'a Jet<S> {
            type Output = Jet<S>;
            fn $m(self, rhs: Jet<S>) -> Jet<S> {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);
owned_binop!(Div, div);

impl<S: Scalar> Neg for Jet<S> {
    type Output = Jet<S>;
    fn neg(self) -> Jet<S> {
        -&self
    }
}

impl<S: Scalar> Scalar for Jet<S> {
    fn zero_like(&self) -> Self {
        self.map(|c| c.zero_like())
    }
    fn constant_like(&self, c: C64) -> Self {
        Jet::constant(self.base_point, self.order(), self.coeffs[0].constant_like(c))
    }
    fn scale(&self, c: C64) -> Self {
        self.scale_by(c)
    }
    fn value(&self) -> C64 {
        self.coeffs[0].value()
    }
    fn magnitude(&self) -> f64 {
        self.coeffs.iter().map(|c| c.magnitude()).fold(0.0, f64::max)
    }
    fn conj(&self) -> Self {
        self.conj_on_real_axis()
    }
    fn exp(&self) -> Self {
        Jet::exp(self)
    }
    fn sin_cos(&self) -> (Self, Self) {
        Jet::sin_cos(self)
    }
    fn sinh_cosh(&self) -> (Self, Self) {
        Jet::sinh_cosh(self)
    }
    fn sqrt(&self) -> Result<Self> {
        Jet::sqrt(self)
    }
    fn recip(&self) -> Result<Self> {
        Jet::recip(self)
    }
    fn jacobi(&self, k: f64) -> (Self, Self, Self) {
        Jet::jacobi(self, k)
    }
}

/// Stop the descending Landen sequence once the transformed modulus drops below this.
pub const LANDEN_TOL: f64 = 1e-14;

/// `(sn, cn, dn)` of a real argument by descending Landen (AGM) transformation.
pub fn jacobi_real(u: f64, k: f64) -> (f64, f64, f64) {
    let mut a = vec![1.0_f64];
    let mut c = vec![k];
    let mut b = (1.0 - k * k).max(0.0).sqrt();
    while c.last().unwrap() / a.last().unwrap() >= LANDEN_TOL && a.len() < 64 {
        let an = *a.last().unwrap();
        a.push(0.5 * (an + b));
        c.push(0.5 * (an - b));
        b = (an * b).sqrt();
    }
    let n = a.len() - 1;
    if n == 0 {
        return (u.sin(), u.cos(), 1.0);
    }
    let mut phi = (2.0_f64).powi(n as i32) * a[n] * u;
    for j in (1..=n).rev() {
        phi = 0.5 * (phi + (c[j] / a[j] * phi.sin()).asin());
    }
    let (s, cn) = phi.sin_cos();
    // dn^2 = k'^2 + k^2 cn^2 has no cancellation, unlike cn/cos(phi_1 - phi_0) near cn = 0
    let kp2 = (1.0 - k) * (1.0 + k);
    (s, cn, (kp2 + k * k * cn * cn).sqrt())
}

/// Complex argument via Jacobi's imaginary transformation.
pub fn jacobi_complex(z: C64, k: f64) -> (C64, C64, C64) {
    let (s, c, d) = jacobi_real(z.re, k);
    if z.im == 0.0 {
        return (C64::new(s, 0.0), C64::new(c, 0.0), C64::new(d, 0.0));
    }
    let kp = (1.0 - k * k).max(0.0).sqrt();
    let (s1, c1, d1) = jacobi_real(z.im, kp);
    let m = k * k;
    let den = c1 * c1 + m * s * s * s1 * s1;
    (
        C64::new(s * d1, c * d * s1 * c1) / den,
        C64::new(c * c1, -s * d * s1 * d1) / den,
        C64::new(d * c1 * d1, -m * s * c * s1) / den,
    )
}

/// Jets of `(sn, cn, dn)(x; k)` in `x` at `x0`.
pub fn jacobi_dn_jet(x0: f64, k: f64, order: usize) -> Result<(Jet<C64>, Jet<C64>, Jet<C64>)> {
    if !(k > 0.0 && k < 1.0) {
        return Err(Error::ModulusOutOfRange(k));
    }
    Ok(Jet::variable(x0, order).jacobi(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    #[test]
    fn identity_times_anything() {
        let one = Jet::constant_c(0.3, 4, c(1.0, 0.0));
        let x = Jet::from_coeffs(
            0.3,
            vec![c(1.0, 2.0), c(0.5, 0.0), c(-1.0, 1.0), c(0.0, 3.0), c(2.0, 0.0)],
        );
        assert_eq!(&one * &x, x);
    }

    #[test]
    fn square_of_linear() {
        let x = Jet::from_coeffs(2.0, vec![c(2.0, 0.0), c(1.0, 0.0)]);
        let sq = &x * &x;
        assert_eq!(sq.coeffs(), &[c(4.0, 0.0), c(4.0, 0.0)]);
        let x2 = Jet::variable(2.0, 2);
        let sq2 = &x2 * &x2;
        assert_eq!(sq2.coeffs(), &[c(4.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)]);
    }

    #[test]
    fn self_division_is_one() {
        let e = Jet::variable(0.0, 3).exp();
        let r = e.checked_div(&e).unwrap();
        for (k, v) in r.coeffs().iter().enumerate() {
            let want = if k == 0 { 1.0 } else { 0.0 };
            assert!(close(*v, c(want, 0.0), 1e-15));
        }
    }

    #[test]
    fn division_by_zero_jet_errors() {
        let a = Jet::variable(1.0, 2);
        let z = Jet::from_coeffs(1.0, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert!(matches!(a.checked_div(&z), Err(Error::DivisionByZeroJet(_))));
        assert!(matches!(z.recip(), Err(Error::BranchPointAtBase(_))));
        assert!(matches!(z.sqrt(), Err(Error::BranchPointAtBase(_))));
    }

    #[test]
    fn exp_series() {
        let e = Jet::from_coeffs(0.0, vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).exp();
        let want = [1.0, 1.0, 0.5, 1.0 / 6.0];
        for (v, w) in e.coeffs().iter().zip(want) {
            assert!(close(*v, c(w, 0.0), 1e-15));
        }
    }

    #[test]
    fn trig_series() {
        let x = Jet::variable(0.0, 5);
        let (s, co) = x.sin_cos();
        let (sh, ch) = x.sinh_cosh();
        let sw = [0.0, 1.0, 0.0, -1.0 / 6.0, 0.0, 1.0 / 120.0];
        let cw = [1.0, 0.0, -0.5, 0.0, 1.0 / 24.0, 0.0];
        for k in 0..=5 {
            assert!(close(s.coeffs()[k], c(sw[k], 0.0), 1e-15));
            assert!(close(co.coeffs()[k], c(cw[k], 0.0), 1e-15));
            assert!(close(sh.coeffs()[k], c(sw[k].abs(), 0.0), 1e-15));
            assert!(close(ch.coeffs()[k], c(cw[k].abs(), 0.0), 1e-15));
        }
    }

    #[test]
    fn conj_on_real_axis_is_coefficientwise() {
        let j = Jet::from_coeffs(0.0, vec![c(0.0, 1.0), c(2.0, 1.0)]);
        assert_eq!(j.conj_on_real_axis().coeffs(), &[c(0.0, -1.0), c(2.0, -1.0)]);
    }

    #[test]
    fn sqrt_inverts_square() {
        let j = Jet::from_coeffs(0.0, vec![c(4.0, 0.0), c(4.0, 0.0), c(1.0, 0.0)]);
        let r = j.sqrt().unwrap();
        assert_eq!(r.coeffs(), &[c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        let back = &r * &r;
        assert_eq!(back, j);
    }

    #[test]
    fn antiderivative_examples() {
        let one = Jet::from_coeffs(0.0, vec![c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(
            one.antiderivative().coeffs(),
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]
        );
        let two_x = Jet::from_coeffs(0.0, vec![c(0.0, 0.0), c(2.0, 0.0)]);
        assert_eq!(
            two_x.antiderivative().coeffs(),
            &[c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]
        );
        let j = Jet::from_coeffs(0.5, vec![c(1.0, -1.0), c(0.3, 2.0), c(-4.0, 0.25)]);
        assert_eq!(j.antiderivative().derivative().unwrap(), j);
    }

    #[test]
    fn derivative_extraction_matches_factorials() {
        // exp(2x) at x0 = 0.4: k-th derivative = 2^k e^{0.8}
        let e = Jet::variable(0.4, 6).scale_by(c(2.0, 0.0)).exp();
        for k in 0..=6 {
            let want = 2f64.powi(k as i32) * 0.8f64.exp();
            assert!((e.derivative_at(k) - c(want, 0.0)).norm() < 1e-12 * want);
        }
    }

    #[test]
    fn derivative_of_order_zero_fails() {
        let j = Jet::constant_c(0.0, 0, c(1.0, 0.0));
        assert!(matches!(j.derivative(), Err(Error::OrderTooLow { .. })));
    }

    #[test]
    fn mixed_order_truncates_to_min() {
        let a = Jet::variable(0.0, 5);
        let b = Jet::variable(0.0, 2);
        assert_eq!((&a * &b).order(), 2);
        assert_eq!((&a + &b).order(), 2);
        assert_eq!((&a / &b.add_constant(c(1.0, 0.0))).order(), 2);
    }

    #[test]
    fn dn_at_origin() {
        let k = 0.7;
        let (_, _, dn) = jacobi_dn_jet(0.0, k, 4).unwrap();
        assert!(close(dn.coeffs()[0], c(1.0, 0.0), 1e-15));
        assert!(close(dn.coeffs()[1], c(0.0, 0.0), 1e-15));
        assert!(close(dn.coeffs()[2], c(-k * k / 2.0, 0.0), 1e-14));
        assert!(close(dn.coeffs()[3], c(0.0, 0.0), 1e-15));
    }

    #[test]
    fn dn_small_modulus_is_one() {
        let (_, _, dn) = jacobi_dn_jet(0.9, 1e-9, 5).unwrap();
        assert!(close(dn.coeffs()[0], c(1.0, 0.0), 1e-12));
        for v in &dn.coeffs()[1..] {
            assert!(v.norm() < 1e-12);
        }
    }

    #[test]
    fn dn_near_unit_modulus_is_sech() {
        for &x0 in &[-1.5, 0.0, 0.4, 2.0] {
            let (_, _, dn) = jacobi_dn_jet(x0, 0.99999, 3).unwrap();
            let sech = Jet::variable(x0, 3).cosh().recip().unwrap();
            for (a, b) in dn.coeffs().iter().zip(sech.coeffs()) {
                assert!((a - b).norm() < 1e-4, "x0 = {x0}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn modulus_out_of_range() {
        assert!(matches!(
            jacobi_dn_jet(0.0, 1.0, 2),
            Err(Error::ModulusOutOfRange(_))
        ));
        assert!(matches!(
            jacobi_dn_jet(0.0, 0.0, 2),
            Err(Error::ModulusOutOfRange(_))
        ));
        assert!(matches!(
            jacobi_dn_jet(0.0, -0.3, 2),
            Err(Error::ModulusOutOfRange(_))
        ));
    }

    #[test]
    fn jacobi_known_values() {
        // k = 1/sqrt(2): K(k) = 1.8540746773013719, sn(K) = 1, cn(K) = 0, dn(K) = k'
        let k = std::f64::consts::FRAC_1_SQRT_2;
        let kk = 1.854_074_677_301_371_9;
        let (s, c, d) = jacobi_real(kk, k);
        assert!((s - 1.0).abs() < 1e-13);
        assert!(c.abs() < 1e-7);
        assert!((d - k).abs() < 1e-13);
    }

    #[test]
    fn jacobi_complex_identities() {
        for &(re, im) in &[(0.3, 0.2), (-1.1, 0.7), (2.0, -0.4)] {
            let (s, c, d) = jacobi_complex(C64::new(re, im), 0.6);
            assert!((s * s + c * c - 1.0).norm() < 1e-13);
            assert!((d * d + 0.36 * s * s - 1.0).norm() < 1e-13);
        }
    }

    #[test]
    fn jacobi_jet_identities() {
        for order in [0usize, 3, 10] {
            let (s, c, d) = jacobi_dn_jet(0.37, 0.8, order).unwrap();
            let one = Jet::constant_c(0.37, order, C64::new(1.0, 0.0));
            let e1 = &(&(&s * &s) + &(&c * &c)) - &one;
            let e2 = &(&(&d * &d) + &(&s * &s).scale_by(C64::new(0.64, 0.0))) - &one;
            for v in e1.coeffs().iter().chain(e2.coeffs()) {
                assert!(v.norm() < 1e-10);
            }
        }
    }

    #[test]
    fn nested_mixed_partials_commute() {
        // f(x, t) = exp(i(x t) + x^2 - 0.3 t)
        let x0 = 0.4;
        let t0 = -0.2;
        let f = |x: &Jet<Jet<C64>>, t: &Jet<Jet<C64>>| {
            let arg = &(&(x * t).scale_by(I) + &(x * x)) - &t.scale_by(C64::new(0.3, 0.0));
            arg.exp()
        };
        let inner_proto = Jet::constant_c(t0, 2, C64::new(0.0, 0.0));
        let x = Jet::variable_like(x0, 2, &inner_proto);
        let t = Jet::constant(x0, 2, Jet::variable(t0, 2));
        let xt = f(&x, &t);

        let inner_proto = Jet::constant_c(x0, 2, C64::new(0.0, 0.0));
        let t2 = Jet::variable_like(t0, 2, &inner_proto);
        let x2 = Jet::constant(t0, 2, Jet::variable(x0, 2));
        let tx = f(&x2, &t2);

        let dxdt = xt.coeffs()[1].coeffs()[1];
        let dtdx = tx.coeffs()[1].coeffs()[1];
        assert!((dxdt - dtdx).norm() <= 1e-12 * dxdt.norm());
    }
}
