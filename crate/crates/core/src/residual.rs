//! Squared-residual functionals of a partial sum and selection of the
//! convergence-control parameter ℏ.
//!
//! The averaged residual over a space-time grid is kept as an exact
//! polynomial in ℏ. Evaluation goes through the per-node residual
//! polynomials (sum of squares) rather than the expanded coefficients, since
//! near the minimizer the expanded form loses every significant digit to
//! cancellation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ham::SeriesSolution;
use crate::poly::{HbarPoly, Poly};
use crate::term::Expression;

/// Which grid nodes enter the averaged sum. Both use the normalizer
/// `1/((M_x+1)(M_t+1))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GridConvention {
    /// Nodes `j = 1..M_x`, `k = 1..M_t`.
    PaperLiteral,
    /// Nodes `j = 0..M_x`, `k = 0..M_t`.
    FullGrid,
}

impl GridConvention {
    pub fn as_str(&self) -> &'static str {
        match self {
            GridConvention::PaperLiteral => "paper-literal",
            GridConvention::FullGrid => "full-grid",
        }
    }
}

/// How x-derivatives of the partial sum are taken when the residual is
/// evaluated at a node.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpatialDerivative {
    /// The exponent kα is held fixed, as in the series recursion.
    #[default]
    Frozen,
    /// Total derivative, including the x-dependence of α(x, t) in the time
    /// factors and gamma ratios.
    ThroughAlpha,
}

impl SpatialDerivative {
    pub fn as_str(&self) -> &'static str {
        match self {
            SpatialDerivative::Frozen => "frozen",
            SpatialDerivative::ThroughAlpha => "through-alpha",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualConfig {
    pub mx: usize,
    pub mt: usize,
    /// Extent of the spatial nodes; `Δx = x_max / M_x`.
    pub x_max: f64,
    /// Extent of the temporal nodes; `Δt = t_max / M_t`.
    pub t_max: f64,
    pub convention: GridConvention,
    /// Evaluate the order field by its formula at nodes outside its domain.
    #[serde(default)]
    pub extrapolate: bool,
    #[serde(default)]
    pub spatial: SpatialDerivative,
}

impl ResidualConfig {
    pub fn new(mx: usize, mt: usize, x_max: f64, t_max: f64) -> Self {
        Self {
            mx,
            mt,
            x_max,
            t_max,
            convention: GridConvention::PaperLiteral,
            extrapolate: false,
            spatial: SpatialDerivative::Frozen,
        }
    }

    pub fn with_spatial(mut self, spatial: SpatialDerivative) -> Self {
        self.spatial = spatial;
        self
    }

    pub fn with_convention(mut self, convention: GridConvention) -> Self {
        self.convention = convention;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.mx == 0 || self.mt == 0 {
            return Err(Error::Config(
                "grid sizes M_x and M_t must be positive".into(),
            ));
        }
        if !(self.x_max > 0.0
            && self.x_max.is_finite()
            && self.t_max > 0.0
            && self.t_max.is_finite())
        {
            return Err(Error::Config(format!(
                "grid extents must be positive, got x_max = {}, t_max = {}",
                self.x_max, self.t_max
            )));
        }
        Ok(())
    }

    pub fn normalizer(&self) -> f64 {
        ((self.mx + 1) * (self.mt + 1)) as f64
    }

    /// Grid nodes in row-major (x outer, t inner) order.
    pub fn nodes(&self) -> Vec<(f64, f64)> {
        let start = match self.convention {
            GridConvention::PaperLiteral => 1,
            GridConvention::FullGrid => 0,
        };
        let mut out = Vec::with_capacity((self.mx + 1) * (self.mt + 1));
        for j in start..=self.mx {
            let x = self.x_max * j as f64 / self.mx as f64;
            for k in start..=self.mt {
                let t = self.t_max * k as f64 / self.mt as f64;
                out.push((x, t));
            }
        }
        out
    }
}

/// `N[φ_N]` as a symbolic expression in ℏ.
pub fn residual_expression(series: &SeriesSolution, n: usize) -> Result<Expression> {
    let phi = series.partial_sum(n)?;
    series.problem.apply_operator(&phi)
}

/// Evaluates `N[φ_N]` node by node from the value and x-derivatives of `φ_N`.
struct NodeResidual<'a> {
    series: &'a SeriesSolution,
    phi: Expression,
    d_phi: Expression,
    spatial: SpatialDerivative,
    extrapolate: bool,
}

impl<'a> NodeResidual<'a> {
    fn new(
        series: &'a SeriesSolution,
        n: usize,
        spatial: SpatialDerivative,
        extrapolate: bool,
    ) -> Result<Self> {
        let phi = series.partial_sum(n)?;
        let d_phi = phi.caputo_d();
        Ok(Self {
            series,
            phi,
            d_phi,
            spatial,
            extrapolate,
        })
    }

    fn at(&self, x: f64, t: f64) -> Result<HbarPoly> {
        let field = &self.series.problem.field;
        let alpha = if field.contains(x, t) {
            field.eval(x, t)?
        } else if self.extrapolate {
            field.formula(x, t)
        } else {
            return Err(Error::Domain(format!(
                "grid node ({x}, {t}) lies outside [0, {}] x [0, {}]",
                field.length, field.horizon
            )));
        };
        let alpha_x = match self.spatial {
            SpatialDerivative::Frozen => 0.0,
            SpatialDerivative::ThroughAlpha => field.d_dx(x, t),
        };
        let [u, ux, uxx] = self.phi.evaluate_jet(alpha, alpha_x, x, t)?;
        let ops = &self.series.problem.ops;
        let mut r = self.d_phi.evaluate_with_alpha(alpha, x, t)?;
        r = &r - &uxx.scale(ops.a);
        r = &r - &(&ux * &ux).scale(ops.b);
        r = &r - &(&u * &uxx).scale(ops.c_nl);
        r = &r - &u.scale(ops.d_lin);
        r = &r + &(&u * &u).scale(ops.e_quad);
        Ok(r)
    }
}

/// `E(ℏ)` assembled on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualPoly {
    /// Expanded coefficients of `E(ℏ)`.
    pub poly: HbarPoly,
    pub config: ResidualConfig,
    node_polys: Vec<HbarPoly>,
    node_d1: Vec<HbarPoly>,
    node_d2: Vec<HbarPoly>,
    norm: f64,
}

impl ResidualPoly {
    fn from_nodes(node_polys: Vec<HbarPoly>, config: ResidualConfig) -> Self {
        let norm = config.normalizer();
        let sum = node_polys
            .iter()
            .fold(Poly::zero(), |acc, p| &acc + &(p * p));
        let node_d1: Vec<HbarPoly> = node_polys.iter().map(Poly::derivative).collect();
        let node_d2 = node_d1.iter().map(Poly::derivative).collect();
        Self {
            poly: sum.scale(1.0 / norm),
            config,
            node_polys,
            node_d1,
            node_d2,
            norm,
        }
    }

    /// Residual at each grid node as a polynomial in ℏ.
    pub fn node_polys(&self) -> &[HbarPoly] {
        &self.node_polys
    }

    /// `E(h)` computed as a sum of squares of the node residuals.
    pub fn value(&self, h: f64) -> f64 {
        self.node_polys
            .iter()
            .map(|p| {
                let v = p.eval(h);
                v * v
            })
            .sum::<f64>()
            / self.norm
    }

    /// `E'(h)`
    pub fn derivative(&self, h: f64) -> f64 {
        2.0 * self
            .node_polys
            .iter()
            .zip(&self.node_d1)
            .map(|(p, d)| p.eval(h) * d.eval(h))
            .sum::<f64>()
            / self.norm
    }

    /// `E''(h)`
    pub fn second_derivative(&self, h: f64) -> f64 {
        2.0 * self
            .node_polys
            .iter()
            .zip(self.node_d1.iter().zip(&self.node_d2))
            .map(|(p, (d1, d2))| {
                let v = d1.eval(h);
                v * v + p.eval(h) * d2.eval(h)
            })
            .sum::<f64>()
            / self.norm
    }

    /// Scale for derivative tolerances: the size of `Σ|p||p'|/norm` at `h`.
    fn derivative_scale(&self, h: f64) -> f64 {
        2.0 * self
            .node_polys
            .iter()
            .zip(&self.node_d1)
            .map(|(p, d)| {
                let ap: f64 = p
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.abs() * h.abs().powi(i as i32))
                    .sum();
                let ad: f64 = d
                    .coeffs()
                    .iter()
                    .enumerate()
                    .map(|(i, c)| c.abs() * h.abs().powi(i as i32))
                    .sum();
                ap * ad
            })
            .sum::<f64>()
            / self.norm
    }

    /// `E` does not vary with ℏ.
    pub fn is_constant(&self) -> bool {
        self.node_polys.iter().all(|p| p.degree().unwrap_or(0) == 0)
    }

    /// `(h, E(h))` samples over `[lo, hi]`.
    pub fn curve(&self, lo: f64, hi: f64, points: usize) -> Vec<(f64, f64)> {
        let points = points.max(2);
        (0..points)
            .map(|i| {
                let h = lo + (hi - lo) * i as f64 / (points - 1) as f64;
                (h, self.value(h))
            })
            .collect()
    }
}

/// Averaged squared residual of `φ_N` on the configured grid.
pub fn averaged_residual(
    series: &SeriesSolution,
    n: usize,
    config: &ResidualConfig,
) -> Result<ResidualPoly> {
    config.validate()?;
    let eval = NodeResidual::new(series, n, config.spatial, config.extrapolate)?;
    let node_polys = config
        .nodes()
        .into_iter()
        .map(|(x, t)| eval.at(x, t))
        .collect::<Result<Vec<_>>>()?;
    Ok(ResidualPoly::from_nodes(node_polys, *config))
}

/// Recomputes the grid average at a fixed ℏ, substituting before squaring.
pub fn averaged_residual_at(
    series: &SeriesSolution,
    n: usize,
    config: &ResidualConfig,
    h: f64,
) -> Result<f64> {
    config.validate()?;
    let eval = NodeResidual::new(series, n, config.spatial, config.extrapolate)?;
    let mut acc = 0.0;
    for (x, t) in config.nodes() {
        let v = eval.at(x, t)?.eval(h);
        acc += v * v;
    }
    Ok(acc / config.normalizer())
}

/// Gauss-Legendre nodes and weights on [-1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 1..=n {
        let mut z = (std::f64::consts::PI * (i as f64 - 0.25) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        out.push((z, 2.0 / ((1.0 - z * z) * dp * dp)));
    }
    out.reverse();
    out
}

/// `∬_Ω N[φ_N]² dx dt` at fixed ℏ by tensor Gauss-Legendre quadrature over
/// `[0, L] × [0, T]`.
pub fn exact_residual(
    series: &SeriesSolution,
    n: usize,
    h: f64,
    quad_nodes: usize,
    spatial: SpatialDerivative,
) -> Result<f64> {
    if quad_nodes < 2 {
        return Err(Error::Config("quadrature needs at least 2 nodes".into()));
    }
    let eval = NodeResidual::new(series, n, spatial, false)?;
    let field = &series.problem.field;
    let (l, tt) = (field.length, field.horizon);
    let rule = gauss_legendre(quad_nodes);
    let mut acc = 0.0;
    for &(zx, wx) in &rule {
        let x = 0.5 * l * (zx + 1.0);
        for &(zt, wt) in &rule {
            let t = 0.5 * tt * (zt + 1.0);
            let v = eval.at(x, t)?.eval(h);
            acc += wx * wt * v * v;
        }
    }
    Ok(acc * 0.25 * l * tt)
}

/// Outcome of the one-dimensional minimization of `E(ℏ)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimResult {
    pub hbar_star: f64,
    pub e_min: f64,
    /// `|E'(ℏ*)|`
    pub stationarity: f64,
    pub curvature_nonneg: bool,
    pub scan_window: [f64; 2],
    /// False when `E` is constant in ℏ; `hbar_star` is then the window midpoint.
    pub depends_on_hbar: bool,
    /// The minimizer is a stationary point strictly inside the window.
    pub interior: bool,
}

/// Largest scan step used to bracket local minima.
pub const SCAN_STEP: f64 = 1e-3;

fn refine_bracket(rp: &ResidualPoly, mut a: f64, mut b: f64) -> f64 {
    let (da, db) = (rp.derivative(a), rp.derivative(b));
    if da <= 0.0 && db >= 0.0 {
        for _ in 0..200 {
            let mid = 0.5 * (a + b);
            if mid <= a || mid >= b {
                break;
            }
            if rp.derivative(mid) < 0.0 {
                a = mid;
            } else {
                b = mid;
            }
        }
        return 0.5 * (a + b);
    }
    // no sign change at the ends: golden-section search on E itself
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    for _ in 0..200 {
        if rp.value(c) < rp.value(d) {
            b = d;
        } else {
            a = c;
        }
        c = b - inv_phi * (b - a);
        d = a + inv_phi * (b - a);
        if (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            break;
        }
    }
    0.5 * (a + b)
}

/// Global minimizer of `E(ℏ)` over `window`: dense scan, then root refinement
/// of `E'` inside each bracketed local minimum.
pub fn optimize_hbar(rp: &ResidualPoly, window: [f64; 2]) -> Result<OptimResult> {
    let [lo, hi] = window;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!(
            "degenerate scan window [{lo}, {hi}]"
        )));
    }
    if rp.is_constant() {
        let mid = 0.5 * (lo + hi);
        return Ok(OptimResult {
            hbar_star: mid,
            e_min: rp.value(mid),
            stationarity: 0.0,
            curvature_nonneg: true,
            scan_window: window,
            depends_on_hbar: false,
            interior: false,
        });
    }
    let steps = ((hi - lo) / SCAN_STEP).ceil().max(2.0) as usize;
    let hs: Vec<f64> = (0..=steps)
        .map(|i| lo + (hi - lo) * i as f64 / steps as f64)
        .collect();
    let vals: Vec<f64> = hs.iter().map(|&h| rp.value(h)).collect();

    let mut candidates = Vec::new();
    for i in 1..steps {
        if vals[i] <= vals[i - 1] && vals[i] <= vals[i + 1] {
            candidates.push(refine_bracket(rp, hs[i - 1], hs[i + 1]));
        }
    }
    candidates.push(lo);
    candidates.push(hi);

    let best = candidates
        .into_iter()
        .map(|h| (h, rp.value(h)))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("candidate list is never empty");
    let (h, e) = best;
    let stationarity = rp.derivative(h).abs();
    let interior = h > lo && h < hi;
    if !e.is_finite() {
        return Err(Error::Numerical(format!(
            "residual is not finite at h = {h}"
        )));
    }
    Ok(OptimResult {
        hbar_star: h,
        e_min: e,
        stationarity,
        curvature_nonneg: rp.second_derivative(h) >= -1e-8 * rp.derivative_scale(h).max(1e-300),
        scan_window: window,
        depends_on_hbar: true,
        interior,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alpha::AlphaField;
    use crate::ham::{generate_series, sine_decay_rate, ProblemSpec};
    use std::f64::consts::PI;

    fn quadratic_rp() -> ResidualPoly {
        // one node with residual (ℏ+1): E = (ℏ+1)² / norm, norm = 1
        let cfg = ResidualConfig::new(1, 1, 1.0, 1.0);
        let mut rp = ResidualPoly::from_nodes(vec![Poly::new(vec![1.0, 1.0])], cfg);
        rp.norm = 1.0;
        rp.poly = Poly::new(vec![1.0, 2.0, 1.0]);
        rp
    }

    #[test]
    fn grid_conventions() {
        let cfg = ResidualConfig::new(10, 10, 1.0, 1.0);
        let nodes = cfg.nodes();
        assert_eq!(nodes.len(), 100);
        assert_eq!(nodes[0], (0.1, 0.1));
        assert_eq!(*nodes.last().unwrap(), (1.0, 1.0));
        assert_eq!(cfg.normalizer(), 121.0);
        let full = cfg.with_convention(GridConvention::FullGrid);
        assert_eq!(full.nodes().len(), 121);
        assert_eq!(full.nodes()[0], (0.0, 0.0));
        assert!(ResidualConfig::new(0, 3, 1.0, 1.0).validate().is_err());
    }

    #[test]
    fn optimize_simple_parabola() {
        let r = optimize_hbar(&quadratic_rp(), [-2.0, 0.0]).unwrap();
        assert!((r.hbar_star + 1.0).abs() < 1e-12);
        assert!(r.e_min < 1e-24);
        assert!(r.interior && r.curvature_nonneg && r.depends_on_hbar);
    }

    #[test]
    fn optimize_rejects_degenerate_window() {
        assert!(optimize_hbar(&quadratic_rp(), [0.0, 0.0]).is_err());
        assert!(optimize_hbar(&quadratic_rp(), [1.0, -1.0]).is_err());
    }

    #[test]
    fn optimize_flags_constant_residual() {
        let p = ProblemSpec::linear_benchmark(0.01, 1.0, 10.0).unwrap();
        let s = generate_series(&p, 1).unwrap();
        let cfg = ResidualConfig::new(34, 34, 1.0, 10.0);
        let rp = averaged_residual(&s, 1, &cfg).unwrap();
        assert!(rp.is_constant());
        let r = optimize_hbar(&rp, [-2.0, 0.0]).unwrap();
        assert!(!r.depends_on_hbar);
    }

    #[test]
    fn residual_expression_examples() {
        let p1 = ProblemSpec::linear_benchmark(0.01, 1.0, 10.0).unwrap();
        let s1 = generate_series(&p1, 2).unwrap();
        let r = residual_expression(&s1, 1).unwrap();
        assert!(r.approx_eq(&Expression::sine(1.0, sine_decay_rate(0.01, 1.0)), 1e-15));

        let p2 = ProblemSpec::nonlinear_benchmark(1.0).unwrap();
        let s2 = generate_series(&p2, 3).unwrap();
        let r = residual_expression(&s2, 1).unwrap();
        assert_eq!(
            r,
            Expression::polynomial(1.0, &Poly::new(vec![-1.0, -1.0, 1.0]))
        );

        // ℏ = 0 collapses N[φ] to N[u_0]
        let r3 = residual_expression(&s2, 3).unwrap();
        let field = p2.field;
        for &(x, t) in &[(0.2, 0.4), (0.9, 0.9)] {
            let a = r3.evaluate(&field, x, t).unwrap().eval(0.0);
            let b = r.evaluate(&field, x, t).unwrap().eval(0.0);
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn one_term_linear_average_matches_grid_mean_of_sine() {
        let p = ProblemSpec::linear_benchmark(0.01, 1.0, 10.0).unwrap();
        let s = generate_series(&p, 1).unwrap();
        let cfg = ResidualConfig::new(34, 34, 1.0, 10.0);
        let rp = averaged_residual(&s, 1, &cfg).unwrap();
        // oracle: Σ_j sin²(πj/34) over j = 1..34 is 17 exactly
        let sum_sin2: f64 = (1..=34).map(|j| (PI * j as f64 / 34.0).sin().powi(2)).sum();
        assert!((sum_sin2 - 17.0).abs() < 1e-12);
        let c = sine_decay_rate(0.01, 1.0);
        let expected = c * c * 17.0 * 34.0 / (35.0 * 35.0);
        assert!((rp.value(-0.7) - expected).abs() < 1e-15);
        assert!((expected - 4.6e-3).abs() < 1e-4);
    }

    #[test]
    fn exact_residual_examples() {
        let p = ProblemSpec::linear_benchmark(0.01, 1.0, 10.0).unwrap();
        let s = generate_series(&p, 1).unwrap();
        let c = sine_decay_rate(0.01, 1.0);
        let analytic = c * c * 0.5 * 10.0;
        let v = exact_residual(&s, 1, -1.0, 12, SpatialDerivative::Frozen).unwrap();
        assert!((v - analytic).abs() < 1e-12 * analytic);
        assert!((analytic - 0.048_705_5).abs() < 1e-6);
        assert!(exact_residual(&s, 1, -1.0, 1, SpatialDerivative::Frozen).is_err());
    }

    #[test]
    fn exact_residual_of_zero_expression() {
        // D^α u = 0 with u = const has zero residual
        let field = AlphaField::constant(0.5, 1.0, 1.0).unwrap();
        let ops = crate::ham::OperatorCoeffs {
            a: 1.0,
            b: 0.0,
            c_nl: 0.0,
            d_lin: 0.0,
            e_quad: 0.0,
        };
        let p = ProblemSpec::new(field, ops, Expression::constant(1.0, 3.0)).unwrap();
        let s = generate_series(&p, 2).unwrap();
        assert_eq!(
            exact_residual(&s, 3, -0.5, 5, SpatialDerivative::Frozen).unwrap(),
            0.0
        );
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let rule = gauss_legendre(5);
        let w: f64 = rule.iter().map(|r| r.1).sum();
        assert!((w - 2.0).abs() < 1e-14);
        let i8: f64 = rule.iter().map(|(z, w)| w * z.powi(8)).sum();
        assert!((i8 - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn domain_violation_without_extrapolation() {
        let p = ProblemSpec::linear_benchmark(0.01, 1.0, 10.0).unwrap();
        let s = generate_series(&p, 2).unwrap();
        let cfg = ResidualConfig::new(34, 34, 10.0, 1.0);
        assert!(averaged_residual(&s, 2, &cfg).is_err());
        let ext = ResidualConfig {
            extrapolate: true,
            ..cfg
        };
        assert!(averaged_residual(&s, 2, &ext).is_ok());
    }

    #[test]
    fn nodewise_frozen_residual_matches_symbolic() {
        let p2 = ProblemSpec::nonlinear_benchmark(1.0).unwrap();
        let s2 = generate_series(&p2, 3).unwrap();
        let symbolic = residual_expression(&s2, 4).unwrap();
        let eval = NodeResidual::new(&s2, 4, SpatialDerivative::Frozen, false).unwrap();
        for &(x, t) in &[(0.1, 0.2), (0.5, 0.5), (1.0, 1.0), (0.3, 0.0)] {
            let a = eval.at(x, t).unwrap();
            let b = symbolic.evaluate(&p2.field, x, t).unwrap();
            assert!(
                (&a - &b).max_abs() < 1e-12 * (1.0 + b.max_abs()),
                "({x}, {t})"
            );
        }
    }

    #[test]
    fn through_alpha_agrees_with_frozen_for_constant_order() {
        let field = AlphaField::constant(0.7, 1.0, 1.0).unwrap();
        let ops = crate::ham::OperatorCoeffs {
            a: 0.5,
            b: 1.0,
            c_nl: 1.0,
            d_lin: 0.3,
            e_quad: 0.2,
        };
        let u0 = Expression::polynomial(1.0, &Poly::new(vec![0.0, 1.0]));
        let p = ProblemSpec::new(field, ops, u0).unwrap();
        let s = generate_series(&p, 3).unwrap();
        let cfg = ResidualConfig::new(6, 6, 1.0, 1.0);
        let a = averaged_residual(&s, 4, &cfg).unwrap();
        let b =
            averaged_residual(&s, 4, &cfg.with_spatial(SpatialDerivative::ThroughAlpha)).unwrap();
        for h in [-1.0, -0.3, 0.2] {
            assert!((a.value(h) - b.value(h)).abs() < 1e-14 * (1.0 + a.value(h)));
        }
    }
}
