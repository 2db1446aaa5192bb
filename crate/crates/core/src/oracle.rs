//! Product-integration quadrature for the Caputo derivative and the
//! Riemann-Liouville integral of sampled functions at a frozen order.
//!
//! Data are treated as the piecewise-linear interpolant of the samples and the
//! singular kernels are integrated exactly on every interval (the L1 scheme for
//! the derivative). Both rules are exact for piecewise-linear data.

use crate::error::{Error, Result};
use crate::gammafn::gamma;

/// Samples on a strictly increasing grid starting at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl SampledFunction {
    pub fn new(nodes: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if nodes.len() < 2 || nodes.len() != values.len() {
            return Err(Error::Domain(
                "need at least two nodes and one value per node".into(),
            ));
        }
        if nodes[0] != 0.0 {
            return Err(Error::Domain("the first node must be 0".into()));
        }
        if nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("nodes must be strictly increasing".into()));
        }
        Ok(Self { nodes, values })
    }

    /// `f` sampled on `n` uniform intervals of `[0, t_end]`.
    pub fn uniform(f: impl Fn(f64) -> f64, t_end: f64, n: usize) -> Result<Self> {
        if n == 0 || t_end.is_nan() || t_end <= 0.0 {
            return Err(Error::Domain("need n >= 1 and t_end > 0".into()));
        }
        let nodes: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
        let values = nodes.iter().map(|&t| f(t)).collect();
        Self::new(nodes, values)
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn t_end(&self) -> f64 {
        *self.nodes.last().expect("at least two nodes")
    }

    /// Linear interpolant.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check_time(t)?;
        let i = self.interval(t);
        let (a, b) = (self.nodes[i], self.nodes[i + 1]);
        let s = (t - a) / (b - a);
        Ok(self.values[i] * (1.0 - s) + self.values[i + 1] * s)
    }

    /// `a·self + b·other` on a shared grid.
    pub fn combine(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        if self.nodes != other.nodes {
            return Err(Error::Structural(
                "sampled functions on different grids".into(),
            ));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.nodes.clone(), values)
    }

    /// Every `stride`-th node, keeping `t_end`.
    fn coarsen(&self, stride: usize) -> Option<Self> {
        let intervals = self.nodes.len() - 1;
        if stride == 0 || !intervals.is_multiple_of(stride) || intervals / stride < 1 {
            return None;
        }
        let pick = |v: &[f64]| v.iter().step_by(stride).copied().collect::<Vec<_>>();
        Self::new(pick(&self.nodes), pick(&self.values)).ok()
    }

    fn check_time(&self, t: f64) -> Result<()> {
        if !(0.0..=self.t_end()).contains(&t) {
            return Err(Error::Domain(format!(
                "time {t} outside the sampled range [0, {}]",
                self.t_end()
            )));
        }
        Ok(())
    }

    /// Index `i` with `t ∈ [nodes[i], nodes[i+1]]`.
    fn interval(&self, t: f64) -> usize {
        let i = self.nodes.partition_point(|&n| n <= t);
        i.saturating_sub(1).min(self.nodes.len() - 2)
    }

    /// Visits each linear piece clipped to `[0, t]` as `(a, b, f(a), slope)`.
    fn pieces(&self, t: f64, mut visit: impl FnMut(f64, f64, f64, f64)) {
        for i in 0..self.nodes.len() - 1 {
            let a = self.nodes[i];
            if a >= t {
                break;
            }
            let b_full = self.nodes[i + 1];
            let slope = (self.values[i + 1] - self.values[i]) / (b_full - a);
            visit(a, b_full.min(t), self.values[i], slope);
        }
    }
}

/// A quadrature value with an empirical convergence order from grid halving.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub n_nodes: usize,
    /// `log2` of successive differences at strides 4, 2, 1; infinite when the
    /// coarser grids already agree to rounding.
    pub estimated_order: f64,
}

fn check_order(alpha: f64, allow_one: bool) -> Result<()> {
    let ok = alpha > 0.0 && (alpha < 1.0 || (allow_one && alpha == 1.0));
    if !ok || !alpha.is_finite() {
        return Err(Error::Domain(format!(
            "order {alpha} outside the admissible range"
        )));
    }
    Ok(())
}

fn caputo_value(f: &SampledFunction, alpha: f64, t: f64) -> f64 {
    let one_m = 1.0 - alpha;
    let mut acc = 0.0;
    f.pieces(t, |a, b, _, slope| {
        acc += slope * ((t - a).powf(one_m) - (t - b).powf(one_m)) / one_m;
    });
    acc / gamma(one_m).expect("1 - alpha lies in (0, 1)")
}

fn integral_value(f: &SampledFunction, alpha: f64, t: f64) -> f64 {
    let mut acc = 0.0;
    f.pieces(t, |a, b, fa, slope| {
        // with u = t - τ: f = fa + slope·(t - a) - slope·u
        let (u0, u1) = (t - b, t - a);
        let base = fa + slope * (t - a);
        let m0 = (u1.powf(alpha) - u0.powf(alpha)) / alpha;
        let m1 = (u1.powf(alpha + 1.0) - u0.powf(alpha + 1.0)) / (alpha + 1.0);
        acc += base * m0 - slope * m1;
    });
    acc / gamma(alpha).expect("alpha lies in (0, 1]")
}

fn with_order(
    f: &SampledFunction,
    rule: impl Fn(&SampledFunction, f64) -> f64,
    t: f64,
) -> QuadratureResult {
    let fine = rule(f, t);
    let order = match (f.coarsen(2), f.coarsen(4)) {
        (Some(c2), Some(c4)) => {
            let (v2, v4) = (rule(&c2, t), rule(&c4, t));
            let (d_coarse, d_fine) = ((v4 - v2).abs(), (v2 - fine).abs());
            let floor = 1e-14 * fine.abs().max(1e-300);
            if d_fine <= floor {
                f64::INFINITY
            } else {
                (d_coarse / d_fine).log2()
            }
        }
        _ => f64::NAN,
    };
    QuadratureResult {
        value: fine,
        n_nodes: f.nodes().len(),
        estimated_order: order,
    }
}

/// Caputo derivative of order `alpha ∈ (0, 1)` at time `t`.
pub fn caputo_quadrature(f: &SampledFunction, alpha: f64, t: f64) -> Result<QuadratureResult> {
    check_order(alpha, false)?;
    f.check_time(t)?;
    Ok(with_order(f, |g, s| caputo_value(g, alpha, s), t))
}

/// Riemann-Liouville integral of order `alpha ∈ (0, 1]` at time `t`.
pub fn integral_quadrature(f: &SampledFunction, alpha: f64, t: f64) -> Result<QuadratureResult> {
    check_order(alpha, true)?;
    f.check_time(t)?;
    Ok(with_order(f, |g, s| integral_value(g, alpha, s), t))
}

/// Power-rule check for one operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawCheck {
    pub value: f64,
    pub closed_form: f64,
    pub rel_error: f64,
    /// `log2(err(n/2)/err(n))`; infinite when the quadrature is exact.
    pub order: f64,
}

impl PowerLawCheck {
    pub fn passes(&self, tol: f64) -> bool {
        self.rel_error < tol && self.order >= 1.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawReport {
    pub alpha: f64,
    pub beta: f64,
    pub t: f64,
    pub n_nodes: usize,
    pub derivative: PowerLawCheck,
    pub integral: PowerLawCheck,
}

fn rel_err(v: f64, exact: f64) -> f64 {
    if exact == 0.0 {
        v.abs()
    } else {
        ((v - exact) / exact).abs()
    }
}

fn power_check(
    beta: f64,
    t: f64,
    n: usize,
    exact: f64,
    rule: impl Fn(&SampledFunction) -> Result<f64>,
) -> Result<PowerLawCheck> {
    let fine = SampledFunction::uniform(|s| s.powf(beta), t, n)?;
    let half = SampledFunction::uniform(|s| s.powf(beta), t, (n / 2).max(1))?;
    let value = rule(&fine)?;
    let e_fine = rel_err(value, exact);
    let e_half = rel_err(rule(&half)?, exact);
    let order = if e_fine <= 1e-13 {
        f64::INFINITY
    } else {
        (e_half / e_fine).log2()
    };
    Ok(PowerLawCheck {
        value,
        closed_form: exact,
        rel_error: e_fine,
        order,
    })
}

/// Compares both quadratures on `τ^β` against
/// `Γ(1+β)/Γ(1+β∓α)·t^{β∓α}`.
pub fn check_power_law(alpha: f64, beta: f64, t: f64, n_nodes: usize) -> Result<PowerLawReport> {
    check_order(alpha, false)?;
    if beta.is_nan() || beta < 0.0 || t.is_nan() || t <= 0.0 || n_nodes < 2 {
        return Err(Error::Domain(format!(
            "need beta >= 0, t > 0 and n >= 2 (got {beta}, {t}, {n_nodes})"
        )));
    }
    let g = gamma(1.0 + beta)?;
    let d_exact = if beta == 0.0 {
        0.0
    } else {
        g / gamma(1.0 + beta - alpha)? * t.powf(beta - alpha)
    };
    let i_exact = g / gamma(1.0 + beta + alpha)? * t.powf(beta + alpha);
    let derivative = power_check(beta, t, n_nodes, d_exact, |f| {
        Ok(caputo_quadrature(f, alpha, t)?.value)
    })?;
    let integral = power_check(beta, t, n_nodes, i_exact, |f| {
        Ok(integral_quadrature(f, alpha, t)?.value)
    })?;
    Ok(PowerLawReport {
        alpha,
        beta,
        t,
        n_nodes,
        derivative,
        integral,
    })
}
