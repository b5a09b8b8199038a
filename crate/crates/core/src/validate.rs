//! The invariant suite: every cross-check between routes, oracle,
//! superpositions and figures, on a fast or a full grid.
//!
//! Grid points run on a rayon pool; results are collected in grid order, so
//! reports do not depend on the thread count.

use crate::error::{Error, Result};
use crate::figures::{figure_data, hermite_sup_distance, interior_maxima, Figure, HERMITE_SUP_BOUND};
use crate::oracle::{unitarity_defect, verify_normal_form, verify_spinor, BlockExp, CertifiedExp};
use crate::squeeze::{
    distribution, element_finite_sum, element_gegenbauer, element_hypergeometric, element_legendre, ElementResult,
    FockPair, SqueezeParam,
};
use crate::superpose::{
    coherent_closed_rhs, coherent_sum_lhs, gaussian_average, gaussian_average_quadrature, semiclassical_comparison,
    thermal_absorption, thermal_absorption_sum, thermal_emission, thermal_emission_sum, CoherentPair, ThermalField,
};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_3;
use std::str::FromStr;

pub type RouteFn = fn(FockPair, SqueezeParam) -> ElementResult;

/// The four closed-form routes under their function names.
pub const CLOSED_ROUTES: [(&str, RouteFn); 4] = [
    ("element_gegenbauer", element_gegenbauer),
    ("element_hypergeometric", element_hypergeometric),
    ("element_finite_sum", element_finite_sum),
    ("element_legendre", element_legendre),
];

pub const ORACLE_TOL: f64 = 1e-8;
pub const ROUTE_TOL: f64 = 1e-9;
/// Elements below this magnitude are left out of the relative route check.
pub const ROUTE_FLOOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Tier {
    /// Indices up to 24 and thinned parameter grids.
    Fast,
    /// The complete grids.
    Full,
}

impl FromStr for Tier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fast" => Ok(Tier::Fast),
            "full" => Ok(Tier::Full),
            _ => Err(Error::domain("Tier", format!("unknown tier '{s}' (fast, full)"))),
        }
    }
}

impl Tier {
    fn max_index(self) -> u64 {
        match self {
            Tier::Fast => 24,
            Tier::Full => 60,
        }
    }

    fn oracle_rs(self) -> &'static [f64] {
        match self {
            Tier::Fast => &[0.5, 1.5],
            Tier::Full => &[0.1, 0.5, 1.0, 1.5, 2.0],
        }
    }

    fn oracle_phis(self) -> &'static [f64] {
        match self {
            Tier::Fast => &[0.0, 2.0],
            Tier::Full => &[0.0, FRAC_PI_3, 2.0],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
}

/// One invariant, evaluated at its worst grid point.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub criterion: Option<u8>,
    pub passed: bool,
    pub value: f64,
    pub bound: f64,
    pub kind: Bound,
    pub points: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub worst_point: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    fn at_most(name: impl Into<String>, criterion: Option<u8>, worst: Worst, bound: f64) -> Self {
        Check {
            name: name.into(),
            criterion,
            passed: worst.value <= bound,
            value: worst.value,
            bound,
            kind: Bound::AtMost,
            points: worst.points,
            worst_point: worst.at,
            error: None,
        }
    }

    fn at_least(name: impl Into<String>, criterion: Option<u8>, value: f64, bound: f64, at: String) -> Self {
        Check {
            name: name.into(),
            criterion,
            passed: value >= bound,
            value,
            bound,
            kind: Bound::AtLeast,
            points: 1,
            worst_point: Some(at),
            error: None,
        }
    }

    fn failed(name: impl Into<String>, criterion: Option<u8>, bound: f64, err: Error) -> Self {
        Check {
            name: name.into(),
            criterion,
            passed: false,
            value: f64::NAN,
            bound,
            kind: Bound::AtMost,
            points: 0,
            worst_point: None,
            error: Some(err.to_string()),
        }
    }
}

/// Largest deviation over a grid, with the first point attaining it.
#[derive(Clone, Debug, Default)]
struct Worst {
    value: f64,
    at: Option<String>,
    points: usize,
}

impl Worst {
    fn of(items: impl IntoIterator<Item = (f64, String)>) -> Self {
        let mut w = Worst::default();
        for (v, at) in items {
            w.points += 1;
            let worse = w.at.is_none() || (!w.value.is_nan() && (v.is_nan() || v > w.value));
            if worse {
                w.value = v;
                w.at = Some(at);
            }
        }
        w
    }

    fn merge(parts: Vec<Worst>) -> Self {
        let mut out = Worst::of(parts.iter().filter_map(|p| p.at.clone().map(|a| (p.value, a))));
        out.points = parts.iter().map(|p| p.points).sum();
        out
    }
}

fn point(m: u64, n: u64, r: f64, phi: f64) -> String {
    format!("m={m} n={n} r={r} phi={phi}")
}

fn param(r: f64, phi: f64) -> SqueezeParam {
    SqueezeParam::new(r, phi).expect("grid parameters are valid")
}

/// `|a − b| / max(|a|, |b|)`, or `None` when both are below [`ROUTE_FLOOR`].
fn rel_dev(a: Complex64, b: Complex64) -> Option<f64> {
    let scale = a.norm().max(b.norm());
    (scale > ROUTE_FLOOR).then(|| (a - b).norm() / scale)
}

fn grid_params(rs: &[f64], phis: &[f64]) -> Vec<(f64, f64)> {
    rs.iter().flat_map(|&r| phis.iter().map(move |&phi| (r, phi))).collect()
}

/// Criterion 1: `|element_gegenbauer − oracle| ≤ 1e−8` on every same-parity
/// pair up to the tier's index limit.
pub fn oracle_agreement(tier: Tier) -> Check {
    const NAME: &str = "oracle_agreement";
    let top = tier.max_index();
    let parts: Result<Vec<Worst>> = grid_params(tier.oracle_rs(), tier.oracle_phis())
        .into_par_iter()
        .map(|(r, phi)| {
            let p = param(r, phi);
            let exact = CertifiedExp::new(p, top as usize, None)?;
            let items = (0..=top).flat_map(|m| (m % 2..=top).step_by(2).map(move |n| (m, n)));
            Ok(Worst::of(items.map(|(m, n)| {
                let g = element_gegenbauer(FockPair::new(m, n), p).value;
                ((g - exact.get(m as usize, n as usize)).norm(), point(m, n, r, phi))
            })))
        })
        .collect();
    match parts {
        Ok(parts) => Check::at_most(NAME, Some(1), Worst::merge(parts), ORACLE_TOL),
        Err(e) => Check::failed(NAME, Some(1), ORACLE_TOL, e),
    }
}

/// Criterion 2: pairwise relative agreement of the routes. Besides the
/// overall check, each route gets its own check on its distance to the
/// nearest other route, so a single faulty route is named.
pub fn route_agreement(routes: &[(&'static str, RouteFn)], tier: Tier) -> Vec<Check> {
    let top = tier.max_index();
    let rs = [0.1, 0.5, 1.0, 1.5, 2.0];
    let phis = [0.0, FRAC_PI_3, 2.0];
    let mut points = Vec::new();
    for &(r, phi) in &grid_params(&rs, &phis) {
        for m in 0..=top {
            for n in (m % 2..=top).step_by(2) {
                points.push((m, n, r, phi));
            }
        }
    }
    // per point: (overall pairwise max, per-route nearest distance)
    let per_point: Vec<Option<(f64, Vec<f64>)>> = points
        .par_iter()
        .map(|&(m, n, r, phi)| {
            let p = param(r, phi);
            let vals: Vec<Complex64> = routes.iter().map(|(_, f)| f(FockPair::new(m, n), p).value).collect();
            let mut pair_max = 0.0f64;
            let mut nearest = vec![f64::INFINITY; vals.len()];
            let mut any = false;
            for i in 0..vals.len() {
                for j in i + 1..vals.len() {
                    if let Some(d) = rel_dev(vals[i], vals[j]) {
                        any = true;
                        let d = if d.is_nan() { f64::INFINITY } else { d };
                        pair_max = pair_max.max(d);
                        nearest[i] = nearest[i].min(d);
                        nearest[j] = nearest[j].min(d);
                    }
                }
            }
            any.then_some((pair_max, nearest))
        })
        .collect();
    let labelled = || {
        points.iter().zip(&per_point).filter_map(|(&(m, n, r, phi), v)| v.as_ref().map(|v| (v, point(m, n, r, phi))))
    };
    let mut out =
        vec![Check::at_most("route_agreement", Some(2), Worst::of(labelled().map(|(v, at)| (v.0, at))), ROUTE_TOL)];
    for (i, (name, _)) in routes.iter().enumerate() {
        out.push(Check::at_most(
            format!("route_agreement:{name}"),
            Some(2),
            Worst::of(labelled().map(|(v, at)| (v.1[i], at))),
            ROUTE_TOL,
        ));
    }
    out
}

/// Criterion 3: the quoted scalars, with energies from distribution sums.
pub fn reference_scalars() -> Vec<Check> {
    let mut out = vec![
        Check::at_most("scalar:s=e^1.5", Some(3), single((1.5f64.exp() - 4.48).abs(), "r=1.5"), 0.005),
        Check::at_most("scalar:tanh^2(1.5)", Some(3), single((1.5f64.tanh().powi(2) - 0.82).abs(), "r=1.5"), 0.005),
    ];
    for (n, want) in [(0u64, 5.03), (1, 15.1), (5, 55.4)] {
        let name = format!("scalar:energy(n={n})");
        match distribution(n, param(1.5, 0.0)) {
            Ok(d) => out.push(Check::at_most(name, Some(3), single((d.mean_energy - want).abs(), "r=1.5"), 0.05)),
            Err(e) => out.push(Check::failed(name, Some(3), 0.05, e)),
        }
    }
    out
}

fn single(v: f64, at: &str) -> Worst {
    Worst { value: v, at: Some(at.to_string()), points: 1 }
}

/// Criterion 4: `|Σ_m w_{m,n} − 1| ≤ 1e−9` for `n ≤ 40`, `r ≤ 2`.
pub fn unitarity(tier: Tier) -> Check {
    const NAME: &str = "unitarity";
    let ns: Vec<u64> = match tier {
        Tier::Fast => (0..=24).step_by(3).collect(),
        Tier::Full => (0..=40).collect(),
    };
    let rs = [0.1, 0.5, 1.0, 1.5, 2.0];
    let grid: Vec<(u64, f64)> = ns.iter().flat_map(|&n| rs.iter().map(move |&r| (n, r))).collect();
    let devs: Result<Vec<(f64, String)>> = grid
        .par_iter()
        .map(|&(n, r)| {
            let d = distribution(n, param(r, 0.0))?;
            let mass: f64 = d.probs.iter().map(|e| e.1).sum();
            Ok(((mass - 1.0).abs(), format!("n={n} r={r}")))
        })
        .collect();
    match devs {
        Ok(d) => Check::at_most(NAME, Some(4), Worst::of(d), 1e-9),
        Err(e) => Check::failed(NAME, Some(4), 1e-9, e),
    }
}

fn worst_of_results(name: &str, criterion: Option<u8>, bound: f64, items: Result<Vec<(f64, String)>>) -> Check {
    match items {
        Ok(v) => Check::at_most(name, criterion, Worst::of(v), bound),
        Err(e) => Check::failed(name.to_string(), criterion, bound, e),
    }
}

/// Criterion 5, coherent part: the generating-function identity.
pub fn coherent_identity(tier: Tier) -> Check {
    let mags: &[f64] = match tier {
        Tier::Fast => &[0.5, 3.0],
        Tier::Full => &[0.5, 1.0, 2.0, 3.0],
    };
    let rs: &[f64] = match tier {
        Tier::Fast => &[0.8],
        Tier::Full => &[0.3, 0.8, 1.2],
    };
    let args = [0.0, 0.7];
    let mut grid = Vec::new();
    for &a in mags {
        for &b in mags {
            for &aa in &args {
                for &ab in &args {
                    for k in 0..=4u64 {
                        for &r in rs {
                            grid.push((a, aa, b, ab, k, r));
                        }
                    }
                }
            }
        }
    }
    let items: Result<Vec<(f64, String)>> = grid
        .par_iter()
        .map(|&(a, aa, b, ab, k, r)| {
            let pair = CoherentPair::new(Complex64::from_polar(a, aa), Complex64::from_polar(b, ab));
            let p = param(r, 0.4);
            let lhs = coherent_sum_lhs(pair, k, p, 1e-15)?;
            let rhs = coherent_closed_rhs(pair, k, p)?;
            let dev = (lhs - rhs).norm() / lhs.norm().max(1e-30);
            Ok((dev, format!("|alpha|={a} arg={aa} |beta|={b} arg={ab} k={k} r={r}")))
        })
        .collect();
    worst_of_results("coherent_identity", Some(5), 1e-8, items)
}

/// Criterion 5, Gaussian part: closed form against quadrature.
pub fn gaussian_identity(tier: Tier) -> Check {
    let ks: Vec<u64> = match tier {
        Tier::Fast => vec![0, 2, 5],
        Tier::Full => (0..=5).collect(),
    };
    let gs = [0.1, 0.5, 1.0, 3.0];
    let grid: Vec<(u64, f64)> = ks.iter().flat_map(|&k| gs.iter().map(move |&g| (k, g))).collect();
    let items: Result<Vec<(f64, String)>> = grid
        .par_iter()
        .map(|&(k, g)| {
            let closed = gaussian_average(k, g, 1.0)?;
            let quad = gaussian_average_quadrature(k, g, 1.0)?;
            Ok(((quad - closed).abs() / closed, format!("k={k} gamma*I0={g}")))
        })
        .collect();
    worst_of_results("gaussian_identity", Some(5), 1e-6, items)
}

fn thermal_grid(tier: Tier) -> Vec<(u64, f64, f64)> {
    let ks: Vec<u64> = match tier {
        Tier::Fast => vec![0, 1, 5],
        Tier::Full => (0..=5).collect(),
    };
    let mut g = Vec::new();
    for &k in &ks {
        for &nbar in &[0.1, 1.0, 5.0] {
            for &r in &[0.5, 1.0, 1.5] {
                g.push((k, nbar, r));
            }
        }
    }
    g
}

/// Criterion 5, thermal part: Planck-Bose sums against closed forms.
pub fn thermal_identities(tier: Tier) -> Vec<Check> {
    let grid = thermal_grid(tier);
    let run = |absorb: bool| -> Result<Vec<(f64, String)>> {
        grid.par_iter()
            .map(|&(k, nbar, r)| {
                let f = ThermalField::from_nbar(nbar)?;
                let p = param(r, 0.0);
                let (closed, sum) = if absorb {
                    (thermal_absorption(k, f, p)?, thermal_absorption_sum(k, f, p, 1e-13)?)
                } else {
                    (thermal_emission(k, f, p)?, thermal_emission_sum(k, f, p, 1e-13)?)
                };
                Ok(((sum - closed).abs() / closed, format!("k={k} nbar={nbar} r={r}")))
            })
            .collect()
    };
    vec![
        worst_of_results("thermal_emission_identity", Some(5), 1e-8, run(false)),
        worst_of_results("thermal_absorption_identity", Some(5), 1e-8, run(true)),
    ]
}

/// Criterion 6: detailed balance and the Rayleigh-Jeans / Wien contrast.
pub fn thermal_comparison(tier: Tier) -> Vec<Check> {
    let grid = thermal_grid(tier);
    let balance: Result<Vec<(f64, String)>> = grid
        .par_iter()
        .map(|&(k, nbar, r)| {
            let f = ThermalField::from_nbar(nbar)?;
            let p = param(r, 0.0);
            let q = thermal_emission(k, f, p)? / thermal_absorption(k, f, p)?;
            let want = f.b.powi(-2 * k as i32);
            Ok(((q - want).abs() / want, format!("k={k} nbar={nbar} r={r}")))
        })
        .collect();
    let weak = param(0.1, 0.0);
    let rj: Result<Vec<(f64, String)>> = (1..=3u64)
        .map(|k| {
            let rep = semiclassical_comparison(k, ThermalField::from_b(0.99)?, weak)?;
            Ok(((rep.ratio - 1.0).abs(), format!("b=0.99 k={k} r=0.1")))
        })
        .collect();
    let wien = ThermalField::from_b(0.02).and_then(|f| semiclassical_comparison(2, f, weak));
    vec![
        worst_of_results("detailed_balance", Some(6), 1e-10, balance),
        worst_of_results("semiclassical_rayleigh_jeans", Some(6), 0.06, rj),
        match wien {
            Ok(rep) => Check::at_least("semiclassical_wien", Some(6), rep.ratio, 100.0, "b=0.02 k=2 r=0.1".into()),
            Err(e) => Check::failed("semiclassical_wien", Some(6), 100.0, e),
        },
    ]
}

/// Criterion 7: Hermite approximation of `p_m(5)` at `r = 1.5`.
pub fn hermite_asymptotic() -> Check {
    match hermite_sup_distance(5, param(1.5, 0.0)) {
        Ok(s) => Check::at_most("hermite_asymptotic", Some(7), single(s, "n=5 r=1.5"), HERMITE_SUP_BOUND),
        Err(e) => Check::failed("hermite_asymptotic", Some(7), HERMITE_SUP_BOUND, e),
    }
}

/// Criterion 8: interior maxima of `p_m(30)` at `r = 1`, `m ≤ 200`.
pub fn fig3_oscillations() -> Check {
    match figure_data(Figure::Fig3) {
        Ok(d) => {
            let count = interior_maxima(&d.points, 0, 200) as f64;
            Check::at_least("fig3_oscillations", Some(8), count, 5.0, "n=30 r=1 m<=200".into())
        }
        Err(e) => Check::failed("fig3_oscillations", Some(8), 5.0, e),
    }
}

/// Criterion 9: operator orderings at `r = 0.8`, `dim = 128`, and the
/// spinor identities.
pub fn orderings() -> Vec<Check> {
    let p = param(0.8, 1.1);
    let mut out = match verify_normal_form(p, 128) {
        Ok(c) => vec![
            Check::at_most("normal_form", Some(9), single(c.normal_spectral, "r=0.8 phi=1.1 dim=128"), 1e-9),
            Check::at_most(
                "anti_normal_form",
                Some(9),
                single(c.anti_normal_spectral.unwrap_or(f64::INFINITY), "r=0.8 phi=1.1 dim=128"),
                1e-9,
            ),
        ],
        Err(e) => vec![
            Check::failed("normal_form", Some(9), 1e-9, e.clone()),
            Check::failed("anti_normal_form", Some(9), 1e-9, e),
        ],
    };
    let spin = [(0.3, 0.0), (0.8, 1.1), (1.5, -2.0), (2.0, 3.0)].map(|(r, phi)| {
        let c = verify_spinor(param(r, phi));
        // relative to the largest entry, cosh r
        (c.max_deviation() / f64::cosh(r), format!("r={r} phi={phi}"))
    });
    out.push(Check::at_most("spinor", Some(9), Worst::of(spin), 1e-14));
    out
}

/// Unitarity of the truncated exponential on its leading half-block.
pub fn oracle_unitarity(tier: Tier) -> Check {
    let rs: &[f64] = match tier {
        Tier::Fast => &[1.0],
        Tier::Full => &[0.5, 1.0, 2.0],
    };
    let items: Result<Vec<(f64, String)>> = rs
        .par_iter()
        .map(|&r| {
            let u = BlockExp::compute(128, param(r, 0.7))?.to_full();
            Ok((unitarity_defect(&u, 64), format!("r={r} dim=128")))
        })
        .collect();
    worst_of_results("oracle_unitarity", None, 1e-10, items)
}

/// Emission and absorption probabilities of all orders add up to one.
pub fn thermal_total_probability() -> Check {
    let items: Result<Vec<(f64, String)>> = [(0.1, 0.5), (1.0, 1.0), (5.0, 0.5)]
        .par_iter()
        .map(|&(nbar, r)| {
            let f = ThermalField::from_nbar(nbar)?;
            let p = param(r, 0.0);
            let mut total = thermal_emission(0, f, p)?;
            let mut k = 1;
            loop {
                let step = thermal_emission(k, f, p)? + thermal_absorption(k, f, p)?;
                total += step;
                if step < 1e-12 * total || k > 20_000 {
                    break;
                }
                k += 1;
            }
            Ok(((total - 1.0).abs(), format!("nbar={nbar} r={r}")))
        })
        .collect();
    worst_of_results("thermal_total_probability", None, 1e-6, items)
}

/// All checks of one criterion.
pub fn criterion(id: u8, tier: Tier) -> Vec<Check> {
    match id {
        1 => vec![oracle_agreement(tier)],
        2 => route_agreement(&CLOSED_ROUTES, tier),
        3 => reference_scalars(),
        4 => vec![unitarity(tier)],
        5 => {
            let mut v = vec![coherent_identity(tier), gaussian_identity(tier)];
            v.extend(thermal_identities(tier));
            v
        }
        6 => thermal_comparison(tier),
        7 => vec![hermite_asymptotic()],
        8 => vec![fig3_oscillations()],
        9 => orderings(),
        _ => Vec::new(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub tier: Tier,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Runs every check on a pool of `threads` workers (rayon's default when
/// `None`).
pub fn validate(tier: Tier, threads: Option<usize>) -> Result<Report> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(t) = threads {
        builder = builder.num_threads(t.max(1));
    }
    let pool = builder.build().map_err(|e| Error::domain("validate", format!("thread pool: {e}")))?;
    let checks = pool.install(|| {
        let mut checks: Vec<Check> = (1..=9).flat_map(|id| criterion(id, tier)).collect();
        checks.push(oracle_unitarity(tier));
        checks.push(thermal_total_probability());
        checks
    });
    Ok(Report { tier, passed: checks.iter().all(|c| c.passed), checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flipped_legendre(pair: FockPair, p: SqueezeParam) -> ElementResult {
        let mut e = element_legendre(pair, p);
        if pair.k().rem_euclid(2) == 1 {
            e.value = -e.value;
        }
        e
    }

    #[test]
    fn routes_agree_on_fast_grid() {
        let checks = route_agreement(&CLOSED_ROUTES, Tier::Fast);
        assert_eq!(checks.len(), 5);
        for c in &checks {
            assert!(c.passed, "{c:?}");
        }
    }

    #[test]
    fn sign_flip_is_attributed_to_its_route() {
        let mut routes = CLOSED_ROUTES;
        routes[3].1 = flipped_legendre;
        let checks = route_agreement(&routes, Tier::Fast);
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
        assert_eq!(failed, ["route_agreement", "route_agreement:element_legendre"]);
        assert!(checks[4].worst_point.is_some());
    }

    #[test]
    fn worst_point_is_first_maximum() {
        let w = Worst::of([(1.0, "a".into()), (3.0, "b".into()), (3.0, "c".into())]);
        assert_eq!((w.value, w.at.as_deref(), w.points), (3.0, Some("b"), 3));
        let w = Worst::of([(1.0, "a".into()), (f64::NAN, "b".into()), (2.0, "c".into())]);
        assert!(w.value.is_nan() && w.at.as_deref() == Some("b"));
    }

    #[test]
    fn tier_names() {
        assert_eq!("fast".parse::<Tier>().unwrap(), Tier::Fast);
        assert!("slow".parse::<Tier>().is_err());
    }

    #[test]
    fn cheap_criteria_pass() {
        for id in [3, 6, 7, 8] {
            for c in criterion(id, Tier::Fast) {
                assert!(c.passed, "{c:?}");
            }
        }
    }
}
