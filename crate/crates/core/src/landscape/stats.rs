//! Extremal energies, Bayesian-bootstrap uncertainties, and run comparison.

use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::LandscapeGrid;
use crate::error::{Error, Result};
use crate::seed::rng_for;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalReport {
    pub extremal_abs_energy: f64,
    pub gamma: f64,
    pub beta: f64,
    pub two_sigma: f64,
    pub n_bootstrap: usize,
    pub max_energy: f64,
    pub max_gamma: f64,
    pub max_beta: f64,
    pub min_energy: f64,
    pub min_gamma: f64,
    pub min_beta: f64,
}

/// Point indices sorted by `(γ, β)`.
fn lexicographic(l: &LandscapeGrid) -> Vec<usize> {
    let mut order: Vec<usize> = (0..l.points.len()).collect();
    order.sort_by(|&i, &j| {
        let (p, q) = (&l.points[i], &l.points[j]);
        p.gamma.total_cmp(&q.gamma).then(p.beta.total_cmp(&q.beta))
    });
    order
}

/// First index in `order` maximizing `key`.
fn first_best(order: &[usize], values: &[f64], key: impl Fn(f64) -> f64) -> usize {
    let mut best = order[0];
    for &i in &order[1..] {
        if key(values[i]) > key(values[best]) {
            best = i;
        }
    }
    best
}

/// `max |E|` over the grid and where it occurs, plus the signed extremes.
/// Ties go to the smallest `(γ, β)`.
pub fn extremal(l: &LandscapeGrid) -> Result<ExtremalReport> {
    if l.points.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let order = lexicographic(l);
    let energies: Vec<f64> = l.points.iter().map(|p| p.energy).collect();
    let abs = &l.points[first_best(&order, &energies, f64::abs)];
    let max = &l.points[first_best(&order, &energies, |e| e)];
    let min = &l.points[first_best(&order, &energies, |e| -e)];
    Ok(ExtremalReport {
        extremal_abs_energy: abs.energy.abs(),
        gamma: abs.gamma,
        beta: abs.beta,
        two_sigma: 0.0,
        n_bootstrap: 0,
        max_energy: max.energy,
        max_gamma: max.gamma,
        max_beta: max.beta,
        min_energy: min.energy,
        min_gamma: min.gamma,
        min_beta: min.beta,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct BootstrapResult {
    pub report: ExtremalReport,
    /// Twice the bootstrap standard deviation of each point's mean energy.
    pub point_two_sigma: Vec<f64>,
}

fn two_sd(values: &[f64]) -> f64 {
    let n = values.len();
    if n < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    2.0 * (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
}

/// Bayesian bootstrap over every point's pooled shots.
///
/// Each resample puts Dirichlet(1, …, 1) weights on the shots of every
/// point (drawn per energy level, which is equivalent), recomputes every
/// weighted mean, and records the signed energy at the resample's
/// `argmax |E|`. The report's `two_sigma` is twice the standard deviation of
/// those values.
pub fn bootstrap_landscape(l: &LandscapeGrid, n_resamples: usize, seed: u64) -> Result<BootstrapResult> {
    let mut report = extremal(l)?;
    if n_resamples == 0 {
        return Err(Error::InvalidConfig(
            "at least one bootstrap resample is required".into(),
        ));
    }
    let with_shots = l.points.iter().filter(|p| p.shots.is_some()).count();
    if with_shots == 0 && l.deterministic {
        return Ok(BootstrapResult {
            report,
            point_two_sigma: vec![0.0; l.points.len()],
        });
    }
    if with_shots < l.points.len() {
        return Err(Error::MissingCounts);
    }

    let mut levels: Vec<Vec<(f64, Gamma<f64>)>> = Vec::with_capacity(l.points.len());
    for p in &l.points {
        let hist = p.shots.as_ref().unwrap();
        if hist.total() == 0 {
            return Err(Error::MissingCounts);
        }
        levels.push(
            hist.levels()
                .iter()
                .map(|&(e, k)| (e, Gamma::new(k as f64, 1.0).expect("positive shape")))
                .collect(),
        );
    }
    let order = lexicographic(l);
    let resamples: Vec<(Vec<f64>, f64)> = (0..n_resamples as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rng_for(seed, &[r]);
            let means: Vec<f64> = levels
                .iter()
                .map(|point| {
                    let (mut num, mut den) = (0.0, 0.0);
                    for (e, g) in point {
                        let w = g.sample(&mut rng);
                        num += w * e;
                        den += w;
                    }
                    num / den
                })
                .collect();
            let at = first_best(&order, &means, f64::abs);
            let value = means[at];
            (means, value)
        })
        .collect();

    let extremes: Vec<f64> = resamples.iter().map(|r| r.1).collect();
    report.two_sigma = two_sd(&extremes);
    report.n_bootstrap = n_resamples;
    let point_two_sigma = (0..l.points.len())
        .map(|i| two_sd(&resamples.iter().map(|r| r.0[i]).collect::<Vec<_>>()))
        .collect();
    Ok(BootstrapResult {
        report,
        point_two_sigma,
    })
}

pub fn bayesian_bootstrap(l: &LandscapeGrid, n_resamples: usize, seed: u64) -> Result<ExtremalReport> {
    Ok(bootstrap_landscape(l, n_resamples, seed)?.report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointDelta {
    pub gamma: f64,
    pub beta: f64,
    /// `b - a`.
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub deltas: Vec<PointDelta>,
    pub a: ExtremalReport,
    pub b: ExtremalReport,
    /// `|E|_b - |E|_a` at the respective extrema.
    pub extremal_delta: f64,
    pub max_abs_delta: f64,
}

pub fn compare_runs(a: &LandscapeGrid, b: &LandscapeGrid) -> Result<Comparison> {
    if a.points.len() != b.points.len() {
        return Err(Error::GridMismatch(format!(
            "{} points vs {}",
            a.points.len(),
            b.points.len()
        )));
    }
    let mut deltas = Vec::with_capacity(a.points.len());
    for (k, (p, q)) in a.points.iter().zip(&b.points).enumerate() {
        if p.gamma != q.gamma || p.beta != q.beta {
            return Err(Error::GridMismatch(format!(
                "point {k} is ({}, {}) in one run and ({}, {}) in the other",
                p.gamma, p.beta, q.gamma, q.beta
            )));
        }
        deltas.push(PointDelta {
            gamma: p.gamma,
            beta: p.beta,
            delta: q.energy - p.energy,
        });
    }
    let (ra, rb) = (extremal(a)?, extremal(b)?);
    Ok(Comparison {
        max_abs_delta: deltas.iter().map(|d| d.delta.abs()).fold(0.0, f64::max),
        extremal_delta: rb.extremal_abs_energy - ra.extremal_abs_energy,
        deltas,
        a: ra,
        b: rb,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landscape::{EnergyHistogram, LandscapePoint};

    fn grid(points: Vec<LandscapePoint>, deterministic: bool) -> LandscapeGrid {
        LandscapeGrid {
            points,
            backend: if deterministic { "exact" } else { "sampled" }.into(),
            deterministic,
            shots: 0,
            n_compilations: 1,
        }
    }

    fn point(gamma: f64, beta: f64, energy: f64) -> LandscapePoint {
        LandscapePoint::new(gamma, beta, vec![energy], None)
    }

    #[test]
    fn extremal_takes_largest_magnitude_with_lexicographic_ties() {
        let l = grid(
            vec![
                point(0.5, 0.0, 3.0),
                point(0.0, 0.5, -3.0),
                point(0.0, 0.0, 1.0),
                point(1.0, 1.0, -2.0),
            ],
            true,
        );
        let r = extremal(&l).unwrap();
        assert_eq!((r.extremal_abs_energy, r.gamma, r.beta), (3.0, 0.0, 0.5));
        assert_eq!((r.max_energy, r.max_gamma), (3.0, 0.5));
        assert_eq!((r.min_energy, r.min_gamma, r.min_beta), (-3.0, 0.0, 0.5));
        let single = grid(vec![point(0.25, 0.75, -0.5)], true);
        let r = extremal(&single).unwrap();
        assert_eq!((r.extremal_abs_energy, r.gamma, r.beta), (0.5, 0.25, 0.75));
        assert!(matches!(extremal(&grid(vec![], true)), Err(Error::EmptyGrid)));
    }

    #[test]
    fn zero_subgrid_has_zero_extremal() {
        let l = grid((0..5).map(|k| point(0.0, k as f64 / 4.0, 0.0)).collect(), true);
        assert_eq!(extremal(&l).unwrap().extremal_abs_energy, 0.0);
    }

    #[test]
    fn exact_grids_have_no_bootstrap_spread() {
        let l = grid(vec![point(0.0, 0.0, 1.0)], true);
        let r = bayesian_bootstrap(&l, 100, 1).unwrap();
        assert_eq!(r.two_sigma, 0.0);
        let missing = grid(vec![point(0.0, 0.0, 1.0)], false);
        assert!(matches!(
            bayesian_bootstrap(&missing, 100, 1),
            Err(Error::MissingCounts)
        ));
    }

    fn shot_point(gamma: f64, beta: f64, hist: EnergyHistogram) -> LandscapePoint {
        LandscapePoint::new(gamma, beta, vec![hist.mean().unwrap()], Some(hist))
    }

    #[test]
    fn degenerate_counts_have_zero_spread() {
        let l = grid(
            vec![
                shot_point(0.0, 0.0, EnergyHistogram::new([(-4.0, 5000)])),
                shot_point(0.0, 1.0, EnergyHistogram::new([(2.0, 5000)])),
            ],
            false,
        );
        let r = bootstrap_landscape(&l, 200, 4).unwrap();
        assert!(r.report.two_sigma < 1e-12);
        assert!(r.point_two_sigma.iter().all(|s| *s < 1e-12));
    }

    #[test]
    fn two_outcome_point_matches_dirichlet_closed_form() {
        let n = 5000u64;
        let l = grid(
            vec![shot_point(
                0.0,
                0.0,
                EnergyHistogram::new([(-10.0, n / 2), (10.0, n / 2)]),
            )],
            false,
        );
        let r = bayesian_bootstrap(&l, 1000, 12).unwrap();
        // Var = s² (n-1) / (n (n+1)) with s² the sample variance
        let s2 = 100.0 * n as f64 / (n - 1) as f64;
        let sd = (s2 * (n - 1) as f64 / (n as f64 * (n + 1) as f64)).sqrt();
        assert!((sd - 10.0 / (n as f64).sqrt()).abs() < 1e-3);
        let got = r.two_sigma / 2.0;
        assert!((got - sd).abs() / sd < 0.1, "{got} vs {sd}");
        assert_eq!(r.n_bootstrap, 1000);
    }

    #[test]
    fn bootstrap_is_deterministic_per_seed() {
        let l = grid(
            vec![shot_point(0.0, 0.0, EnergyHistogram::new([(-1.0, 30), (3.0, 20)]))],
            false,
        );
        assert_eq!(
            bayesian_bootstrap(&l, 300, 5).unwrap(),
            bayesian_bootstrap(&l, 300, 5).unwrap()
        );
        assert_ne!(
            bayesian_bootstrap(&l, 300, 5).unwrap(),
            bayesian_bootstrap(&l, 300, 6).unwrap()
        );
        assert!(bayesian_bootstrap(&l, 0, 5).is_err());
    }

    #[test]
    fn comparison_of_a_run_with_itself() {
        let l = grid(vec![point(0.0, 0.0, 1.0), point(0.0, 1.0, -2.0)], true);
        let c = compare_runs(&l, &l).unwrap();
        assert!(c.deltas.iter().all(|d| d.delta == 0.0));
        assert_eq!(c.extremal_delta, 0.0);
        let other = grid(vec![point(0.0, 0.0, 1.0), point(1.0, 1.0, -2.0)], true);
        assert!(matches!(compare_runs(&l, &other), Err(Error::GridMismatch(_))));
        assert!(compare_runs(&l, &grid(vec![point(0.0, 0.0, 1.0)], true)).is_err());
    }
}
