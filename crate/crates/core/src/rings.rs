//! Mobility-ring boundaries in the complex-energy plane.
//!
//! The boundary is the zero set of the Lyapunov exponent. For κ = 1 it is a
//! circle |E − δ| = |vw|/(λe^{|h|}); for κ = 2 it is the curve
//! |z|·|z² − (v² + w²)| = v²w²e^{−|h|}/λ with z = E − δ, traced here in polar
//! form. Any κ can be handled numerically by contouring an LE field.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::contour::{march, ScalarField};
use crate::lyapunov::{le_grid, ComplexGrid, LeField, LeGrid, TransferSettings};
use crate::model::ModelParams;
use crate::{Error, Result};

pub const DEFAULT_RESOLUTION: usize = 2048;
pub const DEFAULT_EPSILON: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RingMethod {
    ClosedFormK1,
    TracedK2,
    NumericContour,
}

/// A boundary made of disjoint closed polylines of complex energies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RingCurve {
    /// Each component repeats its first point at the end.
    pub components: Vec<Vec<Complex64>>,
    pub params: ModelParams,
    pub method: RingMethod,
}

impl RingCurve {
    pub fn num_points(&self) -> usize {
        self.components.iter().map(Vec::len).sum()
    }

    pub fn points(&self) -> impl Iterator<Item = Complex64> + '_ {
        self.components.iter().flatten().copied()
    }
}

fn check_ring_params(params: &ModelParams) -> Result<()> {
    params.validate()?;
    if params.v == 0.0 {
        return Err(Error::SingularParameter("v"));
    }
    if params.w == 0.0 {
        return Err(Error::SingularParameter("w"));
    }
    Ok(())
}

/// Radius of the κ = 1 ring, or `None` when λ = 0 (no boundary).
pub fn ring_k1_radius(params: &ModelParams) -> Option<f64> {
    (params.lambda > 0.0).then(|| (params.v * params.w).abs() / (params.lambda * params.h.abs().exp()))
}

/// The κ = 1 circle, sampled at `resolution` angles.
pub fn ring_k1(params: &ModelParams, resolution: usize) -> Result<RingCurve> {
    check_ring_params(params)?;
    if resolution < 3 {
        return Err(Error::param("resolution", "must be >= 3"));
    }
    let components = match ring_k1_radius(params) {
        None => vec![],
        Some(r) => {
            let mut pts: Vec<Complex64> = (0..resolution)
                .map(|k| params.delta + Complex64::from_polar(r, 2.0 * PI * k as f64 / resolution as f64))
                .collect();
            pts.push(pts[0]);
            vec![pts]
        }
    };
    Ok(RingCurve { components, params: *params, method: RingMethod::ClosedFormK1 })
}

/// Coefficients (a, c) of the κ = 2 polar cubic
/// u³ − 2a·cos(2φ)·u² + a²·u − c² = 0, u = r².
pub fn k2_coefficients(params: &ModelParams) -> (f64, f64) {
    let (v2, w2) = (params.v * params.v, params.w * params.w);
    (v2 + w2, v2 * w2 * (-params.h.abs()).exp() / params.lambda)
}

/// Real roots of the monic cubic u³ + b·u² + c·u + d, ascending, each polished
/// by Newton steps. Returns three roots (possibly coincident) when the
/// discriminant is nonnegative, one otherwise.
pub fn solve_cubic(b: f64, c: f64, d: f64) -> Vec<f64> {
    let p = c - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    let shift = -b / 3.0;
    let disc = -(4.0 * p * p * p + 27.0 * q * q);
    let mut roots = if disc >= 0.0 && p < 0.0 {
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos() / 3.0;
        (0..3).map(|k| m * (phi - 2.0 * PI * k as f64 / 3.0).cos() + shift).collect::<Vec<_>>()
    } else {
        let s = (q * q / 4.0 + p * p * p / 27.0).max(0.0).sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() + shift]
    };
    for u in roots.iter_mut() {
        for _ in 0..4 {
            let f = ((*u + b) * *u + c) * *u + d;
            let df = (3.0 * *u + 2.0 * b) * *u + c;
            if df == 0.0 {
                break;
            }
            let step = f / df;
            if !step.is_finite() {
                break;
            }
            let next = *u - step;
            let f_next = ((next + b) * next + c) * next + d;
            if f_next.abs() < f.abs() {
                *u = next;
            } else {
                break;
            }
        }
    }
    roots.sort_by(f64::total_cmp);
    roots
}

fn cubic_discriminant(a: f64, c: f64, phi: f64) -> f64 {
    let (b, cc, d) = (-2.0 * a * (2.0 * phi).cos(), a * a, -c * c);
    let p = cc - b * b / 3.0;
    let q = 2.0 * b * b * b / 27.0 - b * cc / 3.0 + d;
    -(4.0 * p * p * p + 27.0 * q * q)
}

/// Positive radii r of the κ = 2 curve along direction φ (1 or 3 values).
pub fn k2_radii(a: f64, c: f64, phi: f64) -> Vec<f64> {
    solve_cubic(-2.0 * a * (2.0 * phi).cos(), a * a, -c * c)
        .into_iter()
        .filter(|&u| u > 0.0)
        .map(f64::sqrt)
        .collect()
}

/// Radii along φ, forced to the count implied by the discriminant sign.
fn radii_at(a: f64, c: f64, phi: f64) -> Result<Vec<f64>> {
    let radii = k2_radii(a, c, phi);
    match radii.len() {
        1 | 3 => Ok(radii),
        _ => Err(Error::TracerDiscontinuity { phi }),
    }
}

/// The κ = 2 boundary traced in polar coordinates about δ.
pub fn ring_k2(params: &ModelParams, angular_resolution: usize) -> Result<RingCurve> {
    check_ring_params(params)?;
    if angular_resolution < 8 {
        return Err(Error::param("angular_resolution", "must be >= 8"));
    }
    if params.lambda == 0.0 {
        return Ok(RingCurve { components: vec![], params: *params, method: RingMethod::TracedK2 });
    }
    let (a, c) = k2_coefficients(params);
    let n = angular_resolution;
    let dphi = 2.0 * PI / n as f64;

    // Graph of (φ, r) nodes; every node ends up with exactly two neighbours.
    let mut nodes: Vec<(f64, f64)> = vec![];
    let mut adjacency: Vec<Vec<usize>> = vec![];
    let mut sample_nodes: Vec<Vec<usize>> = Vec::with_capacity(n);
    for k in 0..n {
        let phi = k as f64 * dphi;
        let ids = radii_at(a, c, phi)?
            .into_iter()
            .map(|r| {
                nodes.push((phi, r));
                adjacency.push(vec![]);
                nodes.len() - 1
            })
            .collect();
        sample_nodes.push(ids);
    }
    let link = |adjacency: &mut Vec<Vec<usize>>, x: usize, y: usize| {
        adjacency[x].push(y);
        adjacency[y].push(x);
    };

    for k in 0..n {
        let next = (k + 1) % n;
        let (phi0, phi1) = (k as f64 * dphi, (k + 1) as f64 * dphi);
        let (here, there) = (sample_nodes[k].clone(), sample_nodes[next].clone());
        let mid_count = radii_at(a, c, 0.5 * (phi0 + phi1))?.len();
        if here.len() == there.len() {
            if mid_count != here.len() {
                return Err(Error::TracerDiscontinuity { phi: 0.5 * (phi0 + phi1) });
            }
            for (&x, &y) in here.iter().zip(&there) {
                link(&mut adjacency, x, y);
            }
            continue;
        }
        // One side has three radii, the other one: two of the three meet at a
        // turning point between the samples.
        let (triple, single, phi_in, phi_out) = if here.len() == 3 {
            (here, there[0], phi0, phi1)
        } else {
            (there, here[0], phi1, phi0)
        };
        let (mut lo, mut hi) = (phi_in, phi_out);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cubic_discriminant(a, c, mid) >= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let edge = radii_at(a, c, lo)?;
        if edge.len() != 3 {
            return Err(Error::TracerDiscontinuity { phi: lo });
        }
        let lower_pair = edge[1] - edge[0] <= edge[2] - edge[1];
        let (meet, survivor) = if lower_pair { ((0, 1), 2) } else { ((1, 2), 0) };
        nodes.push((lo, 0.5 * (edge[meet.0] + edge[meet.1])));
        adjacency.push(vec![]);
        let turn = nodes.len() - 1;
        link(&mut adjacency, triple[meet.0], turn);
        link(&mut adjacency, triple[meet.1], turn);
        link(&mut adjacency, triple[survivor], single);
    }

    if let Some(bad) = adjacency.iter().position(|nbrs| nbrs.len() != 2) {
        return Err(Error::TracerDiscontinuity { phi: nodes[bad].0 });
    }

    let mut visited = vec![false; nodes.len()];
    let mut components = vec![];
    for start in 0..nodes.len() {
        if visited[start] {
            continue;
        }
        let mut loop_ids = vec![start];
        visited[start] = true;
        let (mut prev, mut cur) = (start, adjacency[start][0]);
        while cur != start {
            visited[cur] = true;
            loop_ids.push(cur);
            let next = if adjacency[cur][0] == prev { adjacency[cur][1] } else { adjacency[cur][0] };
            prev = cur;
            cur = next;
        }
        let mut pts: Vec<Complex64> = loop_ids
            .iter()
            .map(|&id| params.delta + Complex64::from_polar(nodes[id].1, nodes[id].0))
            .collect();
        pts.push(pts[0]);
        components.push(pts);
    }
    Ok(RingCurve { components, params: *params, method: RingMethod::TracedK2 })
}

pub fn count_components(curve: &RingCurve) -> usize {
    curve.components.len()
}

/// Even-odd point-in-polygon test; `polygon` repeats its first point at the end.
pub fn encloses(polygon: &[Complex64], p: Complex64) -> bool {
    let mut inside = false;
    for s in polygon.windows(2) {
        let (a, b) = (s[0], s[1]);
        if (a.im > p.im) != (b.im > p.im) && p.re < a.re + (p.im - a.im) * (b.re - a.re) / (b.im - a.im) {
            inside = !inside;
        }
    }
    inside
}

/// Components holding part of the spectrum: at least one eigenvalue lies
/// inside the loop or within `tol` of it. Extended states fill the interior
/// of a ring, so loops that enclose no eigenvalue are boundaries of an empty
/// region of the complex plane.
pub fn count_populated_components(curve: &RingCurve, eigenvalues: &[Complex64], tol: f64) -> usize {
    curve
        .components
        .iter()
        .filter(|comp| eigenvalues.iter().any(|&e| encloses(comp, e) || distance_to_polyline(e, comp) <= tol))
        .count()
}

fn distance_to_segment(p: Complex64, a: Complex64, b: Complex64) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (p - a).norm();
    }
    let t = (((p - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (p - (a + ab * t)).norm()
}

pub fn distance_to_polyline(p: Complex64, line: &[Complex64]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [only] => (p - only).norm(),
        _ => line.windows(2).map(|s| distance_to_segment(p, s[0], s[1])).fold(f64::INFINITY, f64::min),
    }
}

fn distance_to_curve(p: Complex64, curve: &[Vec<Complex64>]) -> f64 {
    curve.iter().map(|c| distance_to_polyline(p, c)).fold(f64::INFINITY, f64::min)
}

/// Symmetric Hausdorff distance between two sets of polylines.
pub fn hausdorff_distance(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> f64 {
    let one_way = |x: &[Vec<Complex64>], y: &[Vec<Complex64>]| {
        x.iter().flatten().map(|&p| distance_to_curve(p, y)).fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Relative residual of the κ = 2 boundary condition at `energy`:
/// λe^{|h|}·|z(z² − v² − w²)|/(v²w²) − 1.
pub fn k2_boundary_residual(params: &ModelParams, energy: Complex64) -> f64 {
    let (v2, w2) = (params.v * params.v, params.w * params.w);
    let z = energy - params.delta;
    (z * (z * z - (v2 + w2))).norm() * params.lambda * params.h.abs().exp() / (v2 * w2) - 1.0
}

/// Relative residual (LHS/RHS − 1) of the expanded quartic obtained by
/// squaring the κ = 2 boundary condition and dividing by v⁴w²|z|².
pub fn expanded_quartic_residual(params: &ModelParams, energy: Complex64) -> f64 {
    let (v, w, lambda, h) = (params.v, params.w, params.lambda, params.h.abs());
    let z = energy - params.delta;
    let (x2, y2) = (z.re * z.re, z.im * z.im);
    let rho2 = x2 + y2;
    let (v2, v4, w2) = (v * v, v.powi(4), w * w);
    let lhs = rho2 * rho2 / (v4 * w2) - 2.0 * (x2 - y2) / (v2 * w2) - 2.0 * (x2 - y2) / v4
        + 1.0 / w2
        + 2.0 / v2
        + w2 / v4;
    let rhs = w2 * (-2.0 * h).exp() / (lambda * lambda * rho2);
    lhs / rhs - 1.0
}

/// Relative residual of the quartic as commonly printed for this model,
/// which carries 2(x² + y²)/v⁴ in place of 2(x² − y²)/v⁴ and (w/e^{λh})² on
/// the right-hand side.
pub fn printed_quartic_residual(params: &ModelParams, energy: Complex64) -> f64 {
    let (v, w, lambda, h) = (params.v, params.w, params.lambda, params.h.abs());
    let z = energy - params.delta;
    let (x2, y2) = (z.re * z.re, z.im * z.im);
    let rho2 = x2 + y2;
    let (v2, v4, w2) = (v * v, v.powi(4), w * w);
    let lhs = rho2 * rho2 / (v4 * w2) - 2.0 * (x2 - y2) / (v2 * w2) + 1.0 / w2 - (2.0 * rho2 - w2) / v4 + 2.0 / v2;
    let rhs = (w / (lambda * h).exp()).powi(2) / rho2;
    lhs / rhs - 1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuarticComparison {
    pub max_factored_residual: f64,
    pub max_expanded_residual: f64,
    pub max_printed_residual: f64,
}

/// Evaluate the three κ = 2 boundary forms on every point of `curve`.
pub fn compare_quartic_forms(curve: &RingCurve) -> QuarticComparison {
    let p = &curve.params;
    let max_abs = |f: &dyn Fn(Complex64) -> f64| curve.points().map(|e| f(e).abs()).fold(0.0, f64::max);
    QuarticComparison {
        max_factored_residual: max_abs(&|e| k2_boundary_residual(p, e)),
        max_expanded_residual: max_abs(&|e| expanded_quartic_residual(p, e)),
        max_printed_residual: max_abs(&|e| printed_quartic_residual(p, e)),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NumericBoundary {
    /// Closed contour components.
    pub curve: RingCurve,
    /// Contour pieces cut by the grid edge.
    pub open_pieces: Vec<Vec<Complex64>>,
    pub epsilon: f64,
    pub field: LeGrid,
}

impl NumericBoundary {
    /// True when part of the boundary leaves the grid: enlarge it.
    pub fn touches_edge(&self) -> bool {
        !self.open_pieces.is_empty()
    }
}

/// ε-level contour of the asymptotic LE field over `grid`.
pub fn numeric_boundary(
    params: &ModelParams,
    grid: &ComplexGrid,
    settings: &TransferSettings,
    epsilon: f64,
) -> Result<NumericBoundary> {
    numeric_boundary_with_field(params, grid, settings, epsilon, LeField::default())
}

pub fn numeric_boundary_with_field(
    params: &ModelParams,
    grid: &ComplexGrid,
    settings: &TransferSettings,
    epsilon: f64,
    field: LeField,
) -> Result<NumericBoundary> {
    check_ring_params(params)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::param("epsilon", "must be positive"));
    }
    let le = le_grid(params, grid, settings, field)?;
    let scalar = ScalarField {
        nx: grid.n_re,
        ny: grid.n_im,
        x0: grid.re_min,
        dx: grid.re_step(),
        y0: grid.im_min,
        dy: grid.im_step(),
        values: &le.values,
    };
    let mut components = vec![];
    let mut open_pieces = vec![];
    for line in march(&scalar, epsilon) {
        let pts: Vec<Complex64> = line.points.iter().map(|&(x, y)| Complex64::new(x, y)).collect();
        if line.closed {
            components.push(pts);
        } else {
            open_pieces.push(pts);
        }
    }
    Ok(NumericBoundary {
        curve: RingCurve { components, params: *params, method: RingMethod::NumericContour },
        open_pieces,
        epsilon,
        field: le,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::E as EULER;

    fn k2_params() -> ModelParams {
        ModelParams { kappa: 2, v: 1.0, w: 1.0, lambda: 0.5, h: 1.0, ..Default::default() }
    }

    /// Bisection root of g on [lo, hi] (g changes sign).
    fn bisect(g: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
        let glo = g(lo);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if (g(mid) > 0.0) == (glo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn cubic_roots() {
        // (u − 1)(u − 2)(u − 3)
        let r = solve_cubic(-6.0, 11.0, -6.0);
        assert_eq!(r.len(), 3);
        for (x, e) in r.iter().zip([1.0, 2.0, 3.0]) {
            assert_abs_diff_eq!(*x, e, epsilon = 1e-12);
        }
        // u³ + u + 1 has one real root near −0.6823
        let r = solve_cubic(0.0, 1.0, 1.0);
        assert_eq!(r.len(), 1);
        assert_abs_diff_eq!(r[0].powi(3) + r[0] + 1.0, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn k1_circle() {
        let p = ModelParams { h: 1.0, ..Default::default() };
        let ring = ring_k1(&p, 256).unwrap();
        assert_abs_diff_eq!(ring_k1_radius(&p).unwrap(), 2.0 / EULER, epsilon = 1e-15);
        assert_abs_diff_eq!(2.0 / EULER, 0.73576, epsilon = 1e-5);
        assert_eq!(count_components(&ring), 1);
        let comp = &ring.components[0];
        assert_eq!(comp.first(), comp.last());

        let hermitian = ModelParams { h: 0.0, ..p };
        assert_abs_diff_eq!(ring_k1_radius(&hermitian).unwrap(), 2.0, epsilon = 1e-15);

        let shifted = ModelParams { delta: Complex64::new(1.0, 1.0), ..p };
        let ring = ring_k1(&shifted, 64).unwrap();
        for z in ring.points() {
            assert_abs_diff_eq!((z - Complex64::new(1.0, 1.0)).norm(), 2.0 / EULER, epsilon = 1e-12);
        }
    }

    #[test]
    fn k1_zero_lambda_is_empty() {
        let p = ModelParams { lambda: 0.0, ..Default::default() };
        let ring = ring_k1(&p, 64).unwrap();
        assert_eq!(count_components(&ring), 0);
        assert_eq!(count_components(&ring_k2(&ModelParams { kappa: 2, ..p }, 64).unwrap()), 0);
    }

    #[test]
    fn k2_three_components_with_oracle_crossings() {
        let p = k2_params();
        let ring = ring_k2(&p, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(count_components(&ring), 3);

        let c = 2.0 / EULER;
        let inner = bisect(|r| r * (2.0 - r * r) - c, 0.0, (2.0f64 / 3.0).sqrt());
        let mid = bisect(|r| r * (2.0 - r * r) - c, (2.0f64 / 3.0).sqrt(), 2f64.sqrt());
        let outer = bisect(|r| r * (r * r - 2.0) - c, 2f64.sqrt(), 3.0);
        let imag = bisect(|r| r * (r * r + 2.0) - c, 0.0, 1.0);
        assert_abs_diff_eq!(inner, 0.4003, epsilon = 1e-3);
        assert_abs_diff_eq!(mid, 1.171, epsilon = 1e-3);
        assert_abs_diff_eq!(outer, 1.572, epsilon = 1e-3);
        assert_abs_diff_eq!(imag, 0.347, epsilon = 1e-3);

        let (a, cc) = k2_coefficients(&p);
        let radii = k2_radii(a, cc, 0.0);
        assert_eq!(radii.len(), 3);
        for (r, e) in radii.iter().zip([inner, mid, outer]) {
            assert_abs_diff_eq!(*r, e, epsilon = 1e-12);
        }
        let u: Vec<f64> = radii.iter().map(|r| r * r).collect();
        assert_abs_diff_eq!(u.iter().sum::<f64>(), 2.0 * a, epsilon = 1e-9);
        assert_abs_diff_eq!(u.iter().product::<f64>(), cc * cc, epsilon = 1e-9);
        assert_abs_diff_eq!(k2_radii(a, cc, PI / 2.0)[0], imag, epsilon = 1e-12);
    }

    #[test]
    fn k2_points_satisfy_boundary_condition() {
        let p = k2_params();
        let ring = ring_k2(&p, 1024).unwrap();
        let cmp = compare_quartic_forms(&ring);
        assert!(cmp.max_factored_residual < 1e-9, "{cmp:?}");
        assert!(cmp.max_expanded_residual < 1e-9, "{cmp:?}");
        assert!(cmp.max_printed_residual > 1e-3, "{cmp:?}");
        for comp in &ring.components {
            assert_eq!(comp.first(), comp.last());
        }
    }

    #[test]
    fn k2_radii_shrink_with_h() {
        let small = |h: f64| {
            let (a, c) = k2_coefficients(&ModelParams { h, ..k2_params() });
            k2_radii(a, c, 0.3)[0]
        };
        let (r4, r8) = (small(4.0), small(8.0));
        assert!(r8 < r4);
        assert_abs_diff_eq!(r8 / r4, (-4.0f64).exp(), epsilon = 1e-3);
    }

    #[test]
    fn k2_merge_at_saddle_value() {
        // At φ = 0 the cubic is u(u − a)² = c²; the two lower roots meet at
        // c = 2a^{3/2}/(3√3). With v = w = 1, h = 0: c = 1/λ.
        let a: f64 = 2.0;
        let saddle = 2.0 * a.powf(1.5) / (3.0 * 3f64.sqrt());
        let count = |c: f64| {
            let p = ModelParams { kappa: 2, h: 0.0, lambda: 1.0 / c, ..Default::default() };
            let (_, cc) = k2_coefficients(&p);
            (k2_radii(a, cc, 0.0).len(), count_components(&ring_k2(&p, 2048).unwrap()))
        };
        let (below_roots, below) = count(saddle * 0.98);
        let (above_roots, above) = count(saddle * 1.02);
        assert_eq!(below_roots, 3);
        assert_eq!(above_roots, 1);
        assert_eq!(below, 3);
        assert!(above < below, "components above saddle: {above}");
        assert!(cubic_discriminant(a, saddle * 0.98, 0.0) > 0.0);
        assert!(cubic_discriminant(a, saddle * 1.02, 0.0) < 0.0);
    }

    #[test]
    fn k2_mirror_symmetry() {
        let ring = ring_k2(&k2_params(), 2048).unwrap();
        let comps = &ring.components;
        let mirrored = |f: fn(Complex64) -> Complex64| -> Vec<Vec<Complex64>> {
            comps.iter().map(|c| c.iter().map(|&z| f(z)).collect()).collect()
        };
        for f in [|z: Complex64| Complex64::new(-z.re, z.im), |z: Complex64| z.conj(), |z: Complex64| -z] {
            assert!(hausdorff_distance(comps, &mirrored(f)) < 5e-3);
        }
    }

    #[test]
    fn scaling_maps_boundary_points() {
        let p = k2_params();
        let s = 2.5;
        let base = ring_k2(&p, 512).unwrap();
        let scaled = ring_k2(&p.scaled(s), 512).unwrap();
        assert_eq!(base.components.len(), scaled.components.len());
        // Turning points come from a bisection, which limits agreement near them.
        for (z, zs) in base.points().zip(scaled.points()) {
            assert_abs_diff_eq!((z * s - zs).norm(), 0.0, epsilon = 1e-6);
        }
        let k1 = ring_k1(&ModelParams { h: 1.0, ..Default::default() }, 64).unwrap();
        let k1s = ring_k1(&ModelParams { h: 1.0, ..Default::default() }.scaled(s), 64).unwrap();
        for (z, zs) in k1.points().zip(k1s.points()) {
            assert_abs_diff_eq!((z * s - zs).norm(), 0.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn populated_components() {
        let ring = ring_k1(&ModelParams { h: 1.0, ..Default::default() }, 256).unwrap();
        let r = 2.0 / EULER;
        assert_eq!(count_populated_components(&ring, &[Complex64::new(r, 0.001)], 0.01), 1);
        assert_eq!(count_populated_components(&ring, &[Complex64::new(0.0, 0.0)], 0.01), 1);
        assert_eq!(count_populated_components(&ring, &[Complex64::new(1.0, 0.5)], 0.01), 0);
        assert!(encloses(&ring.components[0], Complex64::new(0.1, -0.2)));
        assert!(!encloses(&ring.components[0], Complex64::new(0.8, 0.0)));
    }

    #[test]
    fn only_two_loops_hold_spectrum_at_large_ratio() {
        // At w/v = 1.9 the inner loop encloses no eigenvalue: three boundary
        // components, two of them populated.
        let p = ModelParams { kappa: 2, w: 1.9, h: 1.0, num_cells: 144, ..Default::default() };
        let curve = ring_k2(&p, 1024).unwrap();
        let spectrum = crate::eigen::solve(&p).unwrap();
        assert_eq!(count_components(&curve), 3);
        assert_eq!(count_populated_components(&curve, &spectrum.eigenvalues, 0.02), 2);
    }

    #[test]
    fn hausdorff_of_concentric_circles() {
        let a = ring_k1(&ModelParams { h: 1.0, ..Default::default() }, 512).unwrap();
        let b = ring_k1(&ModelParams { h: 1.1, ..Default::default() }, 512).unwrap();
        let expected = 2.0 / EULER - 2.0 / 1.1f64.exp();
        assert_abs_diff_eq!(hausdorff_distance(&a.components, &b.components), expected, epsilon = 1e-4);
    }
}
