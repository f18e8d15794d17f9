//! Expression trees for radial functions with closed-form first and second
//! derivatives.
//!
//! Every node carries analytic derivative rules, so `deriv` never falls back
//! to finite differences, and `derivative()` produces a new tree (sharing
//! subtrees, including quadrature caches) rather than a numerical view.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::funcspace::quadrature::CumulativeCache;

/// Interval on which a radial function is defined.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Domain {
    /// All of the real line.
    FullLine,
    /// The open half-line (0, inf).
    HalfLine,
    /// The punctured line, r != 0.
    PuncturedLine,
}

impl Domain {
    pub fn contains(self, r: f64) -> bool {
        if !r.is_finite() {
            return false;
        }
        match self {
            Domain::FullLine => true,
            Domain::HalfLine => r > 0.0,
            Domain::PuncturedLine => r != 0.0,
        }
    }

    /// Intersection of two domains.
    pub fn meet(self, other: Domain) -> Domain {
        use Domain::*;
        match (self, other) {
            (FullLine, d) | (d, FullLine) => d,
            (HalfLine, _) | (_, HalfLine) => HalfLine,
            (PuncturedLine, PuncturedLine) => PuncturedLine,
        }
    }
}

#[derive(Debug)]
pub(crate) enum Expr {
    Constant(f64),
    /// coeff * r^power, integer power (negative punctures the domain at 0).
    Monomial { coeff: f64, power: i32 },
    /// coeff * r^power for real power, defined on r > 0.
    RPow { coeff: f64, power: f64 },
    /// coeff * exp(-rate * r^2)
    Gauss { coeff: f64, rate: f64 },
    /// coeff * tanh(rate * r)
    ScaledTanh { coeff: f64, rate: f64 },
    /// coeff * sech(rate * r)^power, nonzero integer power.
    SechPow { coeff: f64, power: i32, rate: f64 },
    Sum(Vec<Arc<Expr>>),
    Product(Arc<Expr>, Arc<Expr>),
    Scale { factor: f64, inner: Arc<Expr> },
    /// inner evaluated at (r - offset); restricted to full-line inners.
    Shift { offset: f64, inner: Arc<Expr> },
    /// base(r)^power for real power; base must evaluate positive.
    PowF { base: Arc<Expr>, power: f64 },
    /// exp(scale * int_0^r integrand), value by cached adaptive quadrature,
    /// derivatives in closed form.
    ExpIntegral {
        scale: f64,
        integrand: Arc<Expr>,
        tol: f64,
        cache: CumulativeCache,
    },
}

fn finite(v: f64, r: f64, what: &str) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::domain(r, format!("{what} is not finite")))
    }
}

impl Expr {
    pub(crate) fn domain(&self) -> Domain {
        match self {
            Expr::Constant(_) | Expr::Gauss { .. } | Expr::ScaledTanh { .. } | Expr::SechPow { .. } => {
                Domain::FullLine
            }
            Expr::Monomial { power, .. } => {
                if *power < 0 {
                    Domain::PuncturedLine
                } else {
                    Domain::FullLine
                }
            }
            Expr::RPow { .. } => Domain::HalfLine,
            Expr::Sum(parts) => parts
                .iter()
                .fold(Domain::FullLine, |d, p| d.meet(p.domain())),
            Expr::Product(a, b) => a.domain().meet(b.domain()),
            Expr::Scale { inner, .. } | Expr::Shift { inner, .. } => inner.domain(),
            Expr::PowF { base, .. } => base.domain(),
            Expr::ExpIntegral { integrand, .. } => integrand.domain(),
        }
    }

    pub(crate) fn eval(&self, r: f64) -> Result<f64> {
        let v = match self {
            Expr::Constant(c) => *c,
            Expr::Monomial { coeff, power } => {
                if *power < 0 && r == 0.0 {
                    return Err(Error::domain(r, "negative power of r at r = 0"));
                }
                coeff * r.powi(*power)
            }
            Expr::RPow { coeff, power } => {
                if r <= 0.0 {
                    return Err(Error::domain(r, "fractional power of r needs r > 0"));
                }
                coeff * r.powf(*power)
            }
            Expr::Gauss { coeff, rate } => coeff * (-rate * r * r).exp(),
            Expr::ScaledTanh { coeff, rate } => coeff * (rate * r).tanh(),
            Expr::SechPow { coeff, power, rate } => coeff * (rate * r).cosh().powi(-power),
            Expr::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.eval(r)?;
                }
                acc
            }
            Expr::Product(a, b) => a.eval(r)? * b.eval(r)?,
            Expr::Scale { factor, inner } => factor * inner.eval(r)?,
            Expr::Shift { offset, inner } => inner.eval(r - offset)?,
            Expr::PowF { base, power } => {
                let b = base.eval(r)?;
                if b <= 0.0 {
                    return Err(Error::domain(
                        r,
                        format!("fractional power needs a positive base, got {b}"),
                    ));
                }
                b.powf(*power)
            }
            Expr::ExpIntegral {
                scale,
                integrand,
                tol,
                cache,
            } => {
                let integral = cache.eval(&|z| integrand.eval(z), 0.0, r, *tol)?;
                (scale * integral).exp()
            }
        };
        finite(v, r, "value")
    }

    pub(crate) fn d1(&self, r: f64) -> Result<f64> {
        let v = match self {
            Expr::Constant(_) => 0.0,
            Expr::Monomial { coeff, power } => {
                if *power == 0 {
                    0.0
                } else {
                    if *power < 1 && r == 0.0 {
                        return Err(Error::domain(r, "negative power of r at r = 0"));
                    }
                    coeff * *power as f64 * r.powi(power - 1)
                }
            }
            Expr::RPow { coeff, power } => {
                if r <= 0.0 {
                    return Err(Error::domain(r, "fractional power of r needs r > 0"));
                }
                coeff * power * r.powf(power - 1.0)
            }
            Expr::Gauss { rate, .. } => -2.0 * rate * r * self.eval(r)?,
            Expr::ScaledTanh { coeff, rate } => {
                let s = 1.0 / (rate * r).cosh();
                coeff * rate * s * s
            }
            Expr::SechPow { power, rate, .. } => {
                let val = self.eval(r)?;
                -(*power as f64) * rate * (rate * r).tanh() * val
            }
            Expr::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.d1(r)?;
                }
                acc
            }
            Expr::Product(a, b) => a.d1(r)? * b.eval(r)? + a.eval(r)? * b.d1(r)?,
            Expr::Scale { factor, inner } => factor * inner.d1(r)?,
            Expr::Shift { offset, inner } => inner.d1(r - offset)?,
            Expr::PowF { base, power } => {
                let b = base.eval(r)?;
                if b <= 0.0 {
                    return Err(Error::domain(
                        r,
                        format!("fractional power needs a positive base, got {b}"),
                    ));
                }
                power * b.powf(power - 1.0) * base.d1(r)?
            }
            Expr::ExpIntegral {
                scale, integrand, ..
            } => scale * integrand.eval(r)? * self.eval(r)?,
        };
        finite(v, r, "first derivative")
    }

    pub(crate) fn d2(&self, r: f64) -> Result<f64> {
        let v = match self {
            Expr::Constant(_) => 0.0,
            Expr::Monomial { coeff, power } => {
                let p = *power;
                if p == 0 || p == 1 {
                    0.0
                } else {
                    if p < 2 && r == 0.0 {
                        return Err(Error::domain(r, "negative power of r at r = 0"));
                    }
                    coeff * (p as f64) * (p as f64 - 1.0) * r.powi(p - 2)
                }
            }
            Expr::RPow { coeff, power } => {
                if r <= 0.0 {
                    return Err(Error::domain(r, "fractional power of r needs r > 0"));
                }
                coeff * power * (power - 1.0) * r.powf(power - 2.0)
            }
            Expr::Gauss { rate, .. } => {
                let val = self.eval(r)?;
                (4.0 * rate * rate * r * r - 2.0 * rate) * val
            }
            Expr::ScaledTanh { coeff, rate } => {
                let t = rate * r;
                let s = 1.0 / t.cosh();
                -2.0 * coeff * rate * rate * s * s * t.tanh()
            }
            Expr::SechPow { power, rate, .. } => {
                let val = self.eval(r)?;
                let p = *power as f64;
                let t = rate * r;
                let th = t.tanh();
                let s2 = 1.0 / (t.cosh() * t.cosh());
                rate * rate * (p * p * th * th - p * s2) * val
            }
            Expr::Sum(parts) => {
                let mut acc = 0.0;
                for p in parts {
                    acc += p.d2(r)?;
                }
                acc
            }
            Expr::Product(a, b) => {
                a.d2(r)? * b.eval(r)? + 2.0 * a.d1(r)? * b.d1(r)? + a.eval(r)? * b.d2(r)?
            }
            Expr::Scale { factor, inner } => factor * inner.d2(r)?,
            Expr::Shift { offset, inner } => inner.d2(r - offset)?,
            Expr::PowF { base, power } => {
                let b = base.eval(r)?;
                if b <= 0.0 {
                    return Err(Error::domain(
                        r,
                        format!("fractional power needs a positive base, got {b}"),
                    ));
                }
                let b1 = base.d1(r)?;
                let b2 = base.d2(r)?;
                power * (power - 1.0) * b.powf(power - 2.0) * b1 * b1
                    + power * b.powf(power - 1.0) * b2
            }
            Expr::ExpIntegral {
                scale, integrand, ..
            } => {
                let f = integrand.eval(r)?;
                let f1 = integrand.d1(r)?;
                scale * (f1 + scale * f * f) * self.eval(r)?
            }
        };
        finite(v, r, "second derivative")
    }

    /// Magnitude of the largest additive term at `r`, used to normalize
    /// residuals of expressions that cancel across a sum.
    pub(crate) fn term_scale(&self, r: f64) -> Result<f64> {
        match self {
            Expr::Sum(parts) => {
                let mut m: f64 = 0.0;
                for p in parts {
                    m = m.max(p.term_scale(r)?);
                }
                Ok(m)
            }
            Expr::Scale { factor, inner } => Ok(factor.abs() * inner.term_scale(r)?),
            _ => Ok(self.eval(r)?.abs()),
        }
    }
}

fn is_zero(e: &Expr) -> bool {
    matches!(e, Expr::Constant(c) if *c == 0.0)
}

fn is_one(e: &Expr) -> bool {
    matches!(e, Expr::Constant(c) if *c == 1.0)
}

/// Smart constructors; they fold constants and drop identities but do no
/// deeper rewriting.
pub(crate) mod build {
    use super::*;

    pub fn constant(c: f64) -> Arc<Expr> {
        Arc::new(Expr::Constant(c))
    }

    pub fn monomial(coeff: f64, power: i32) -> Arc<Expr> {
        if coeff == 0.0 || power == 0 {
            constant(coeff)
        } else {
            Arc::new(Expr::Monomial { coeff, power })
        }
    }

    pub fn rpow(coeff: f64, power: f64) -> Arc<Expr> {
        if power == 0.0 || coeff == 0.0 {
            constant(coeff)
        } else if power.fract() == 0.0 && power.abs() <= i32::MAX as f64 {
            monomial(coeff, power as i32)
        } else {
            Arc::new(Expr::RPow { coeff, power })
        }
    }

    pub fn gauss(coeff: f64, rate: f64) -> Arc<Expr> {
        if rate == 0.0 {
            constant(coeff)
        } else {
            Arc::new(Expr::Gauss { coeff, rate })
        }
    }

    pub fn scaled_tanh(coeff: f64, rate: f64) -> Arc<Expr> {
        Arc::new(Expr::ScaledTanh { coeff, rate })
    }

    pub fn sech_pow(coeff: f64, power: i32, rate: f64) -> Arc<Expr> {
        if power == 0 {
            constant(coeff)
        } else {
            Arc::new(Expr::SechPow { coeff, power, rate })
        }
    }

    pub fn sum(parts: Vec<Arc<Expr>>) -> Arc<Expr> {
        let mut kept: Vec<Arc<Expr>> = Vec::with_capacity(parts.len());
        for p in parts {
            if !is_zero(&p) {
                // flatten nested sums
                if let Expr::Sum(inner) = &*p {
                    kept.extend(inner.iter().cloned());
                } else {
                    kept.push(p);
                }
            }
        }
        match kept.len() {
            0 => constant(0.0),
            1 => kept.pop().unwrap(),
            _ => Arc::new(Expr::Sum(kept)),
        }
    }

    pub fn product(a: Arc<Expr>, b: Arc<Expr>) -> Arc<Expr> {
        if is_zero(&a) || is_zero(&b) {
            return constant(0.0);
        }
        if is_one(&a) {
            return b;
        }
        if is_one(&b) {
            return a;
        }
        if let (Expr::Constant(x), Expr::Constant(y)) = (&*a, &*b) {
            return constant(x * y);
        }
        if let Expr::Constant(x) = &*a {
            return scale(*x, b);
        }
        if let Expr::Constant(y) = &*b {
            return scale(*y, a);
        }
        Arc::new(Expr::Product(a, b))
    }

    pub fn scale(factor: f64, inner: Arc<Expr>) -> Arc<Expr> {
        if factor == 0.0 || is_zero(&inner) {
            return constant(0.0);
        }
        if factor == 1.0 {
            return inner;
        }
        match &*inner {
            Expr::Constant(c) => constant(factor * c),
            Expr::Scale { factor: f2, inner: i2 } => scale(factor * f2, i2.clone()),
            _ => Arc::new(Expr::Scale { factor, inner }),
        }
    }

    pub fn shift(offset: f64, inner: Arc<Expr>) -> Arc<Expr> {
        if offset == 0.0 {
            inner
        } else {
            Arc::new(Expr::Shift { offset, inner })
        }
    }

    pub fn powf(base: Arc<Expr>, power: f64) -> Arc<Expr> {
        if power == 0.0 {
            constant(1.0)
        } else if power == 1.0 {
            base
        } else {
            Arc::new(Expr::PowF { base, power })
        }
    }

    pub fn exp_integral(scale_c: f64, integrand: Arc<Expr>, tol: f64) -> Arc<Expr> {
        if scale_c == 0.0 || is_zero(&integrand) {
            return constant(1.0);
        }
        Arc::new(Expr::ExpIntegral {
            scale: scale_c,
            integrand,
            tol,
            cache: CumulativeCache::new(),
        })
    }

    /// Symbolic first derivative. Subtrees (and quadrature caches) are shared
    /// with the source tree.
    pub fn deriv(node: &Arc<Expr>) -> Arc<Expr> {
        match &**node {
            Expr::Constant(_) => constant(0.0),
            Expr::Monomial { coeff, power } => match power {
                0 => constant(0.0),
                1 => constant(*coeff),
                p => monomial(coeff * *p as f64, p - 1),
            },
            Expr::RPow { coeff, power } => rpow(coeff * power, power - 1.0),
            Expr::Gauss { coeff, rate } => {
                product(monomial(-2.0 * rate, 1), gauss(*coeff, *rate))
            }
            Expr::ScaledTanh { coeff, rate } => sech_pow(coeff * rate, 2, *rate),
            Expr::SechPow { coeff, power, rate } => product(
                sech_pow(-coeff * *power as f64 * rate, *power, *rate),
                scaled_tanh(1.0, *rate),
            ),
            Expr::Sum(parts) => sum(parts.iter().map(deriv).collect()),
            Expr::Product(a, b) => sum(vec![
                product(deriv(a), b.clone()),
                product(a.clone(), deriv(b)),
            ]),
            Expr::Scale { factor, inner } => scale(*factor, deriv(inner)),
            Expr::Shift { offset, inner } => shift(*offset, deriv(inner)),
            Expr::PowF { base, power } => scale(
                *power,
                product(powf(base.clone(), power - 1.0), deriv(base)),
            ),
            Expr::ExpIntegral {
                scale: c,
                integrand,
                ..
            } => scale(*c, product(integrand.clone(), node.clone())),
        }
    }
}
