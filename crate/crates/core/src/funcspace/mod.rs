//! Algebra of radial functions with exact derivatives up to second order and
//! numerically evaluated antiderivatives.

mod descriptor;
mod expr;
pub mod quadrature;

use std::sync::Arc;

pub use descriptor::Descriptor;
pub use expr::Domain;

use crate::error::{Error, Result};
use expr::{build, Expr};

/// Default absolute tolerance for quadrature-backed function values.
pub const DEFAULT_QUAD_TOL: f64 = 1e-12;

/// An immutable real function of one radial variable with analytic first and
/// second derivatives.
///
/// Values are cheap pure evaluations of an expression tree; cloning shares
/// the tree (including any quadrature caches), so clones are free and the
/// type is safe to use from several threads at once.
#[derive(Debug, Clone)]
pub struct RadialFunction {
    root: Arc<Expr>,
    domain: Domain,
}

impl RadialFunction {
    fn from_node(root: Arc<Expr>) -> Self {
        let domain = root.domain();
        RadialFunction { root, domain }
    }

    pub fn constant(c: f64) -> Self {
        Self::from_node(build::constant(c))
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn one() -> Self {
        Self::constant(1.0)
    }

    /// coeff * r^power with integer power; a negative power punctures the
    /// domain at r = 0.
    pub fn monomial(coeff: f64, power: i32) -> Self {
        Self::from_node(build::monomial(coeff, power))
    }

    /// coeff * r^power with real power, defined on r > 0. Integer powers are
    /// lowered to `monomial`.
    pub fn rpow(coeff: f64, power: f64) -> Self {
        Self::from_node(build::rpow(coeff, power))
    }

    /// coeff * exp(-rate * r^2)
    pub fn gauss(coeff: f64, rate: f64) -> Self {
        Self::from_node(build::gauss(coeff, rate))
    }

    /// coeff * tanh(rate * r)
    pub fn scaled_tanh(coeff: f64, rate: f64) -> Self {
        Self::from_node(build::scaled_tanh(coeff, rate))
    }

    /// coeff * sech(r)^power
    pub fn sech_pow(coeff: f64, power: i32) -> Self {
        Self::from_node(build::sech_pow(coeff, power, 1.0))
    }

    pub fn sum(parts: Vec<RadialFunction>) -> Self {
        Self::from_node(build::sum(parts.into_iter().map(|p| p.root).collect()))
    }

    pub fn add(self, other: RadialFunction) -> Self {
        Self::sum(vec![self, other])
    }

    pub fn product(a: RadialFunction, b: RadialFunction) -> Self {
        Self::from_node(build::product(a.root, b.root))
    }

    pub fn scale(factor: f64, inner: RadialFunction) -> Self {
        Self::from_node(build::scale(factor, inner.root))
    }

    /// inner(r - offset); only full-line inners can be shifted, since the
    /// domain representation has no shifted intervals.
    pub fn shift(offset: f64, inner: RadialFunction) -> Result<Self> {
        if offset != 0.0 && inner.domain != Domain::FullLine {
            return Err(Error::spec(
                "shift is only defined for full-line functions",
            ));
        }
        Ok(Self::from_node(build::shift(offset, inner.root)))
    }

    /// base(r)^power for real power; the base must evaluate positive
    /// (checked at evaluation time).
    pub fn powf(base: RadialFunction, power: f64) -> Self {
        Self::from_node(build::powf(base.root, power))
    }

    /// exp(scale * int_0^r integrand(z) dz), the integral evaluated by
    /// cached adaptive quadrature at absolute tolerance `tol`; derivatives
    /// are closed forms.
    pub fn exp_integral(scale: f64, integrand: &RadialFunction, tol: f64) -> Self {
        Self::from_node(build::exp_integral(scale, integrand.root.clone(), tol))
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Value at `r`.
    pub fn eval(&self, r: f64) -> Result<f64> {
        if !self.domain.contains(r) {
            return Err(Error::domain(r, "outside the function domain"));
        }
        self.root.eval(r)
    }

    /// Analytic derivative of order 1 or 2 at `r`.
    pub fn deriv(&self, order: u32, r: f64) -> Result<f64> {
        if !self.domain.contains(r) {
            return Err(Error::domain(r, "outside the function domain"));
        }
        match order {
            1 => self.root.d1(r),
            2 => self.root.d2(r),
            other => Err(Error::spec(format!(
                "derivative order must be 1 or 2, got {other}"
            ))),
        }
    }

    pub fn d1(&self, r: f64) -> Result<f64> {
        self.deriv(1, r)
    }

    pub fn d2(&self, r: f64) -> Result<f64> {
        self.deriv(2, r)
    }

    /// The derivative as a function in its own right, built symbolically;
    /// shares subtrees (and quadrature caches) with `self`.
    pub fn derivative(&self) -> RadialFunction {
        let node = build::deriv(&self.root);
        // A derivative can widen the nominal domain (e.g. of r^1), never
        // narrow the set of points where the original was differentiable;
        // keep the original domain so callers see consistent behavior.
        RadialFunction {
            domain: self.domain.meet(node.domain()),
            root: node,
        }
    }

    /// Definite integral over [lower, upper] with absolute error <= tol.
    pub fn antiderivative(&self, lower: f64, upper: f64, tol: f64) -> Result<f64> {
        quadrature::integrate(|z| self.root.eval(z), lower, upper, tol)
    }

    /// Magnitude of the largest additive term at `r`; normalization scale
    /// for residuals of cancelling sums.
    pub fn term_scale(&self, r: f64) -> Result<f64> {
        self.root.term_scale(r)
    }
}
