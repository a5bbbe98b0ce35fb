//! Rate-distortion bound for the Gaussian CEO problem and a numerical check
//! that the maximal correlation of a Gaussian pair is attained by linear maps.

use nalgebra::{DMatrix, DVector, RealField};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A point on the distortion-rate curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RdPoint<T = f64> {
    /// Bits per source sample.
    pub rate: T,
    pub distortion: T,
}

fn beta_energy<T: Scalar>(betas: &[T]) -> T {
    betas.iter().map(|b| *b * *b).sum()
}

/// Estimation part of the distortion, `sigma_S^2 / (1 + sum beta^2)`.
pub fn ceo_estimation_distortion<T: Scalar>(betas: &[T], sigma_s2: T) -> T {
    sigma_s2 / (T::one() + beta_energy(betas))
}

/// Variance of the conditional mean `E{S | U}`.
pub fn ceo_sigma_t<T: Scalar>(betas: &[T], sigma_s2: T) -> T {
    let e = beta_energy(betas);
    sigma_s2 * e / (T::one() + e)
}

/// `D(R) = D_est + sigma_T^2 2^(-2R)`, evaluated as
/// `sigma_S^2 (1 + E 2^(-2R)) / (1 + E)` so that `D(0)` is exactly `sigma_S^2`.
pub fn ceo_distortion<T: Scalar>(rate: T, betas: &[T], sigma_s2: T) -> T {
    let e = beta_energy(betas);
    sigma_s2 * ((T::one() + e * T::lit(2.0).powf(-(rate + rate))) / (T::one() + e))
}

/// Compression part `sigma_T^2 2^(-2R)`.
pub fn ceo_rate_distortion_part<T: Scalar>(rate: T, betas: &[T], sigma_s2: T) -> T {
    ceo_sigma_t(betas, sigma_s2) * T::lit(2.0).powf(-(rate + rate))
}

/// Samples `D(R)` at `steps` evenly spaced rates in `[from, to]`.
pub fn ceo_curve<T: Scalar>(from: T, to: T, steps: usize, betas: &[T], sigma_s2: T) -> Vec<RdPoint<T>> {
    (0..steps)
        .map(|i| {
            let rate = if steps == 1 {
                from
            } else {
                from + (to - from) * T::count(i) / T::count(steps - 1)
            };
            RdPoint {
                rate,
                distortion: ceo_distortion(rate, betas, sigma_s2),
            }
        })
        .collect()
}

/// Covariance of `U = beta S + W` for unit-variance source and noise.
pub fn ru_matrix<T: Scalar + RealField>(betas: &[T]) -> DMatrix<T> {
    let b = DVector::from_column_slice(betas);
    DMatrix::identity(betas.len(), betas.len()) + &b * b.transpose()
}

/// Eigenvalues of the observation covariance, ascending: `M - 1` ones and `1 + sum beta^2`.
pub fn ru_spectrum<T: Scalar>(betas: &[T]) -> Vec<T> {
    if betas.is_empty() {
        return Vec::new();
    }
    let mut out = vec![T::one(); betas.len() - 1];
    out.push(T::one() + beta_energy(betas));
    out
}

/// Eigenvalues of the explicit covariance matrix, ascending.
pub fn ru_spectrum_numeric<T: Scalar + RealField>(betas: &[T]) -> Vec<T> {
    let mut ev: Vec<T> = ru_matrix(betas).symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));
    ev
}

/// `sigma_T^2 = R_SU R_U^-1 R_SU^T` by an explicit linear solve.
pub fn ceo_sigma_t_numeric<T: Scalar + RealField>(betas: &[T], sigma_s2: T) -> Result<T> {
    if betas.is_empty() {
        return Ok(T::zero());
    }
    let b = DVector::from_column_slice(betas);
    let r_su = &b * sigma_s2;
    let r_u = DMatrix::identity(betas.len(), betas.len()) + &b * b.transpose() * sigma_s2;
    let x = r_u
        .lu()
        .solve(&r_su)
        .ok_or_else(|| Error::NumericalFailure("observation covariance is singular".into()))?;
    Ok(r_su.dot(&x))
}

/// How grid cells receive probability mass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum CellMass {
    /// Exact mass of each cell under the truncated bivariate normal, by
    /// Gauss-Legendre quadrature in `x` of the conditional normal CDF in `y`.
    /// Refining the grid can only increase the discrete maximal correlation.
    #[default]
    Exact,
    /// Density at the cell center, renormalized.
    Midpoint,
}

/// Second singular value of the conditional-expectation operator of a
/// standard bivariate normal with correlation `rho`, discretized on an
/// `n x n` grid over `[-range, range]` standard deviations.
pub fn maximal_correlation_discrete(rho: f64, grid_n: usize, range_sigmas: f64) -> Result<f64> {
    Ok(maximal_correlation_with_functions(rho, grid_n, range_sigmas)?.value)
}

/// Discretized maximal correlation together with the maximizing functions.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalCorrelation {
    pub value: f64,
    /// Cell centers.
    pub grid: Vec<f64>,
    /// Zero-mean, unit-variance maximizer `f(x)` on the grid.
    pub f: Vec<f64>,
    /// Zero-mean, unit-variance maximizer `g(y)` on the grid.
    pub g: Vec<f64>,
}

pub fn maximal_correlation_with_functions(rho: f64, grid_n: usize, range_sigmas: f64) -> Result<MaximalCorrelation> {
    maximal_correlation_with_masses(rho, grid_n, range_sigmas, CellMass::default())
}

// 10-point Gauss-Legendre nodes and weights on [-1, 1].
const GL_NODES: [f64; 10] = [
    -0.973_906_528_517_171_7,
    -0.865_063_366_688_984_5,
    -0.679_409_568_299_024_4,
    -0.433_395_394_129_247_2,
    -0.148_874_338_981_631_2,
    0.148_874_338_981_631_2,
    0.433_395_394_129_247_2,
    0.679_409_568_299_024_4,
    0.865_063_366_688_984_5,
    0.973_906_528_517_171_7,
];
const GL_WEIGHTS: [f64; 10] = [
    0.066_671_344_308_688_1,
    0.149_451_349_150_580_6,
    0.219_086_362_515_982,
    0.269_266_719_309_996_3,
    0.295_524_224_714_752_9,
    0.295_524_224_714_752_9,
    0.269_266_719_309_996_3,
    0.219_086_362_515_982,
    0.149_451_349_150_580_6,
    0.066_671_344_308_688_1,
];

fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

fn exact_masses(rho: f64, edges: &[f64]) -> DMatrix<f64> {
    let n = edges.len() - 1;
    let sd = (1.0 - rho * rho).sqrt();
    let norm = 1.0 / (2.0 * std::f64::consts::PI).sqrt();
    let mut p = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        let (a, b) = (edges[i], edges[i + 1]);
        for (node, weight) in GL_NODES.iter().zip(GL_WEIGHTS) {
            let x = 0.5 * (a + b) + 0.5 * (b - a) * node;
            let w = 0.5 * (b - a) * weight * norm * (-0.5 * x * x).exp();
            let mut below = normal_cdf((edges[0] - rho * x) / sd);
            for j in 0..n {
                let upto = normal_cdf((edges[j + 1] - rho * x) / sd);
                p[(i, j)] += w * (upto - below);
                below = upto;
            }
        }
    }
    p
}

pub fn maximal_correlation_with_masses(
    rho: f64,
    grid_n: usize,
    range_sigmas: f64,
    mass: CellMass,
) -> Result<MaximalCorrelation> {
    if !(rho.abs() < 1.0) {
        return Err(Error::InvalidScenario(format!("|rho| = {} must be < 1", rho.abs())));
    }
    if grid_n < 3 {
        return Err(Error::InvalidScenario("grid needs at least 3 points".into()));
    }
    if !(range_sigmas > 0.0 && range_sigmas.is_finite()) {
        return Err(Error::InvalidScenario("range must be positive".into()));
    }
    let n = grid_n;
    let h = 2.0 * range_sigmas / n as f64;
    let grid: Vec<f64> = (0..n).map(|i| -range_sigmas + (i as f64 + 0.5) * h).collect();
    let mut p = match mass {
        CellMass::Exact => {
            let edges: Vec<f64> = (0..=n).map(|i| -range_sigmas + i as f64 * h).collect();
            exact_masses(rho, &edges)
        }
        CellMass::Midpoint => {
            let one_minus = 1.0 - rho * rho;
            DMatrix::<f64>::from_fn(n, n, |i, j| {
                let (x, y) = (grid[i], grid[j]);
                (-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * one_minus)).exp()
            })
        }
    };
    let total: f64 = p.iter().sum();
    if !(total > 0.0 && total.is_finite()) {
        return Err(Error::NumericalFailure(format!("joint mass sums to {total}")));
    }
    p /= total;
    let px: Vec<f64> = (0..n).map(|i| p.row(i).sum()).collect();
    let py: Vec<f64> = (0..n).map(|j| p.column(j).sum()).collect();
    if px.iter().chain(&py).any(|m| !(*m > 0.0)) {
        return Err(Error::NumericalFailure("a marginal cell has zero mass".into()));
    }
    let b = DMatrix::from_fn(n, n, |i, j| p[(i, j)] / (px[i] * py[j]).sqrt());
    let svd = b.svd(true, true);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|a, c| svd.singular_values[*c].total_cmp(&svd.singular_values[*a]));
    let second = order[1];
    let u = svd.u.as_ref().expect("requested u");
    let vt = svd.v_t.as_ref().expect("requested v_t");
    let f: Vec<f64> = (0..n).map(|i| u[(i, second)] / px[i].sqrt()).collect();
    let g: Vec<f64> = (0..n).map(|j| vt[(second, j)] / py[j].sqrt()).collect();
    Ok(MaximalCorrelation {
        value: svd.singular_values[second],
        grid,
        f,
        g,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distortion_endpoints() {
        assert_eq!(ceo_distortion(0.0, &[1.0, 2.0], 1.0), 1.0);
        assert!((ceo_distortion(0.5, &[1.0f64], 1.0) - 0.75).abs() < 1e-15);
        assert!((ceo_distortion(50.0, &[1.0f64], 1.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn sigma_t_values() {
        assert!((ceo_sigma_t(&[1.0f64], 1.0) - 0.5).abs() < 1e-15);
        assert_eq!(ceo_sigma_t::<f64>(&[], 1.0), 0.0);
        let b = [1.0f64, 1.0, 1.0];
        assert!((ceo_sigma_t(&b, 1.0) - 0.75).abs() < 1e-15);
        assert!((ceo_sigma_t_numeric(&b, 1.0).unwrap() - 0.75).abs() < 1e-12);
    }

    #[test]
    fn spectrum_small_cases() {
        assert_eq!(ru_spectrum(&[1.0, 1.0]), vec![1.0, 3.0]);
        assert_eq!(ru_spectrum(&[0.5]), vec![1.25]);
        assert_eq!(ru_spectrum(&[1.0, 2.0]), vec![1.0, 6.0]);
        let num = ru_spectrum_numeric(&[1.0f64, 2.0]);
        assert!((num[0] - 1.0).abs() < 1e-12 && (num[1] - 6.0).abs() < 1e-12);
    }

    #[test]
    fn independent_pair_has_no_correlation() {
        assert!(maximal_correlation_discrete(0.0, 65, 5.0).unwrap() < 1e-10);
    }

    #[test]
    fn maximizers_are_affine() {
        let mc = maximal_correlation_with_functions(0.5, 129, 5.0).unwrap();
        assert!((mc.value - 0.5).abs() < 1e-2);
        // Fit f on the central cells to a line through the origin.
        let central: Vec<usize> = (0..mc.grid.len()).filter(|i| mc.grid[*i].abs() < 2.0).collect();
        let slope = central.iter().map(|i| mc.f[*i] * mc.grid[*i]).sum::<f64>()
            / central.iter().map(|i| mc.grid[*i] * mc.grid[*i]).sum::<f64>();
        for i in central {
            assert!(
                (mc.f[i] - slope * mc.grid[i]).abs() < 5e-2,
                "{} vs {}",
                mc.f[i],
                slope * mc.grid[i]
            );
        }
    }

    #[test]
    fn exact_masses_sum_to_truncated_probability() {
        let edges: Vec<f64> = (0..=40).map(|i| -5.0 + i as f64 * 0.25).collect();
        let p = exact_masses(0.6, &edges);
        // P(|X| < 5, |Y| < 5) is 1 - O(1e-6).
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 2e-6);
        let p0 = exact_masses(0.0, &edges);
        let a = normal_cdf(-4.75) - normal_cdf(-5.0);
        let b = normal_cdf(0.25) - normal_cdf(0.0);
        assert!((p0[(0, 20)] - a * b).abs() < 1e-15);
    }

    #[test]
    fn midpoint_rule_also_within_tolerance() {
        let v = maximal_correlation_with_masses(0.9, 129, 5.0, CellMass::Midpoint)
            .unwrap()
            .value;
        assert!((v - 0.9).abs() < 1e-2);
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(maximal_correlation_discrete(1.0, 65, 5.0).is_err());
        assert!(maximal_correlation_discrete(0.5, 2, 5.0).is_err());
    }
}
