//! Photon-number distributions shown in the figures, as `(m, p)` series.

use crate::error::{Error, Result};
use crate::squeeze::{distribution, element_hermite_approx, FockPair, SqueezeParam};
use serde::Serialize;
use std::str::FromStr;

/// Regression bound on [`hermite_sup_distance`] for `n = 5`, `r = 1.5`
/// (computed value 0.01506).
pub const HERMITE_SUP_BOUND: f64 = 0.016;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Figure {
    /// `p_m(0)` at `r = 1.5`
    Fig1a,
    /// `4 p_m(1)` at `r = 1.5`
    Fig1b,
    /// `p_m(5)` at `r = 1.5`
    Fig2a,
    /// Hermite approximation of `p_m(5)` at `r = 1.5`
    Fig2b,
    /// `p_m(30)` at `r = 1`
    Fig3,
}

impl Figure {
    pub const ALL: [Figure; 5] = [Figure::Fig1a, Figure::Fig1b, Figure::Fig2a, Figure::Fig2b, Figure::Fig3];

    pub fn name(&self) -> &'static str {
        match self {
            Figure::Fig1a => "fig1a",
            Figure::Fig1b => "fig1b",
            Figure::Fig2a => "fig2a",
            Figure::Fig2b => "fig2b",
            Figure::Fig3 => "fig3",
        }
    }

    /// `(n, r, plotted multiple of p_m)`
    pub fn setup(&self) -> (u64, f64, f64) {
        match self {
            Figure::Fig1a => (0, 1.5, 1.0),
            Figure::Fig1b => (1, 1.5, 4.0),
            Figure::Fig2a | Figure::Fig2b => (5, 1.5, 1.0),
            Figure::Fig3 => (30, 1.0, 1.0),
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::domain("Figure", format!("unknown figure '{s}' (fig1a, fig1b, fig2a, fig2b, fig3)")))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FigureData {
    pub figure: Figure,
    pub n: u64,
    pub r: f64,
    pub scale: f64,
    /// `(m, scale · p_m)` over the indices of the parity of `n`.
    pub points: Vec<(u64, f64)>,
    /// `Σ (m + ½) p_m` of the exact distribution.
    pub mean_energy: f64,
    pub captured_mass: f64,
}

pub fn figure_data(figure: Figure) -> Result<FigureData> {
    let (n, r, scale) = figure.setup();
    let param = SqueezeParam::real(r)?;
    let d = distribution(n, param)?;
    let points = match figure {
        Figure::Fig2b => hermite_points(n, param, d.cutoff())?,
        _ => d.probs.iter().map(|&(m, p)| (m, scale * p)).collect(),
    };
    Ok(FigureData { figure, n, r, scale, points, mean_energy: d.mean_energy, captured_mass: d.captured_mass })
}

/// `|approximate ⟨m|S|n⟩|²` for `m` of the parity of `n` in `1..=cutoff`.
pub fn hermite_points(n: u64, param: SqueezeParam, cutoff: u64) -> Result<Vec<(u64, f64)>> {
    let first = if n % 2 == 0 { 2 } else { 1 };
    (first..=cutoff)
        .step_by(2)
        .map(|m| Ok((m, element_hermite_approx(FockPair::new(m, n), param)?.probability())))
        .collect()
}

/// `max_m |p_m(n) − p_m^{approx}(n)|` over the exact distribution's support
/// (`m ≥ 1`).
pub fn hermite_sup_distance(n: u64, param: SqueezeParam) -> Result<f64> {
    let d = distribution(n, param)?;
    let approx = hermite_points(n, param, d.cutoff())?;
    Ok(approx.iter().map(|&(m, a)| (d.prob(m) - a).abs()).fold(0.0, f64::max))
}

/// Number of points strictly above both neighbours with `lo ≤ m ≤ hi`.
pub fn interior_maxima(points: &[(u64, f64)], lo: u64, hi: u64) -> usize {
    points.windows(3).filter(|w| w[1].0 >= lo && w[1].0 <= hi && w[1].1 > w[0].1 && w[1].1 > w[2].1).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for f in Figure::ALL {
            assert_eq!(f.name().parse::<Figure>().unwrap(), f);
        }
        assert!("fig4".parse::<Figure>().is_err());
    }

    #[test]
    fn caption_energies() {
        let e = |f| figure_data(f).unwrap().mean_energy;
        assert!((e(Figure::Fig1a) - 5.03).abs() < 0.05);
        assert!((e(Figure::Fig1b) - 15.1).abs() < 0.05);
        assert!((e(Figure::Fig2a) - 55.4).abs() < 0.05);
    }

    #[test]
    fn fig1b_is_scaled() {
        let d = figure_data(Figure::Fig1b).unwrap();
        let p1 = crate::squeeze::transition_probability(FockPair::new(1, 1), SqueezeParam::real(1.5).unwrap());
        assert_eq!(d.points[0], (1, 4.0 * p1));
    }

    #[test]
    fn fig3_oscillates() {
        let d = figure_data(Figure::Fig3).unwrap();
        assert!(interior_maxima(&d.points, 0, 200) >= 5);
    }

    #[test]
    fn hermite_close_to_exact() {
        let s = hermite_sup_distance(5, SqueezeParam::real(1.5).unwrap()).unwrap();
        assert!(s <= HERMITE_SUP_BOUND && s > 0.01, "{s}");
    }

    #[test]
    fn maxima_counting() {
        let pts = [(0, 0.0), (2, 1.0), (4, 0.5), (6, 0.7), (8, 0.1)];
        assert_eq!(interior_maxima(&pts, 0, 10), 2);
        assert_eq!(interior_maxima(&pts, 3, 10), 1);
    }
}
