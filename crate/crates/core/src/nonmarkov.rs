//! Non-Markovianity diagnostics and trajectory feature detectors.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bell::{BellLabel, BellSpectrum};
use crate::correlations::binary_entropy;
use crate::dynamics::{evolve_bell_spectrum, Tau};
use crate::error::{Error, Result};
use crate::linalg::trace_distance;

/// How entanglement changes along a grid are turned into the accumulated
/// non-Markovianity `I^E`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `∫|E'| + ΔE`: every increase of E counts twice, decay counts zero.
    #[default]
    IncreaseCounting,
    /// `∫|E'| − ΔE` with `ΔE = E(t) − E(t₀)`, as the formula is usually
    /// printed; accumulates on decay instead.
    Literal,
}

impl Convention {
    fn increment(self, delta: f64) -> f64 {
        match self {
            Convention::IncreaseCounting => 2.0 * delta.max(0.0),
            Convention::Literal => delta.abs() - delta,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Convention::IncreaseCounting => "rhp",
            Convention::Literal => "literal",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rhp" | "increase-counting" | "increase_counting" => Ok(Convention::IncreaseCounting),
            "literal" => Ok(Convention::Literal),
            other => Err(Error::InvalidArgument(format!(
                "unknown convention '{other}' (expected rhp or literal)"
            ))),
        }
    }
}

/// Entanglement between a noiseless ancilla and a qubit under the field
/// channel, starting from `|2+>`: the state stays a mixture
/// `cos²τ |2+><2+| + sin²τ |1-><1-|`, so `E = 1 − h(max(cos²τ, sin²τ))`
/// above the ½ threshold and zero otherwise.
pub fn ancilla_entanglement(tau: Tau) -> f64 {
    let c2 = tau.value().cos().powi(2);
    let top = c2.max(1.0 - c2);
    if top > 0.5 {
        (1.0 - binary_entropy(top)).max(0.0)
    } else {
        0.0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NonMarkovTrace {
    pub tau_grid: Vec<f64>,
    pub e_anc: Vec<f64>,
    pub i_e: Vec<f64>,
    pub convention: Convention,
}

fn strictly_ascending(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] > w[0])
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() || grid[0] != 0.0 || !strictly_ascending(grid) {
        return Err(Error::BadGrid);
    }
    Ok(())
}

/// Prefix sum of the per-step increments of `values`.
pub fn accumulate(values: &[f64], convention: Convention) -> Vec<f64> {
    let mut out = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    if !values.is_empty() {
        out.push(0.0);
    }
    for w in values.windows(2) {
        acc += convention.increment(w[1] - w[0]);
        out.push(acc);
    }
    out
}

/// `I^E` along `tau_grid` for the ancilla protocol.
pub fn nonmarkovianity_measure(tau_grid: &[f64], convention: Convention) -> Result<NonMarkovTrace> {
    check_grid(tau_grid)?;
    let e_anc: Vec<f64> = tau_grid
        .iter()
        .map(|&t| ancilla_entanglement(Tau::new(t).expect("grid starts at 0 and ascends")))
        .collect();
    let i_e = accumulate(&e_anc, convention);
    Ok(NonMarkovTrace {
        tau_grid: tau_grid.to_vec(),
        e_anc,
        i_e,
        convention,
    })
}

/// Trace distance between `Λ(τ₂)λ₀` and `Λ(τ₂ − τ₁)Λ(τ₁)λ₀`; zero whenever
/// the family composes like a Markovian semigroup on this input.
pub fn composition_violation(spectrum: &BellSpectrum, tau1: Tau, tau2: Tau) -> Result<f64> {
    if tau1 > tau2 {
        return Err(Error::InvalidArgument(format!(
            "tau1 = {} must not exceed tau2 = {}",
            tau1.value(),
            tau2.value()
        )));
    }
    let (direct, restarted) = composition_states(spectrum, tau1, tau2)?;
    Ok(trace_distance(&direct.to_density(), &restarted.to_density()))
}

/// The two spectra compared by [`composition_violation`].
pub fn composition_states(
    spectrum: &BellSpectrum,
    tau1: Tau,
    tau2: Tau,
) -> Result<(BellSpectrum, BellSpectrum)> {
    let gap = Tau::new(tau2.value() - tau1.value())?;
    let direct = evolve_bell_spectrum(spectrum, tau2);
    let restarted = evolve_bell_spectrum(&evolve_bell_spectrum(spectrum, tau1), gap);
    Ok((direct, restarted))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub fn contains(&self, x: f64) -> bool {
        self.start <= x && x <= self.end
    }

    pub fn covers(&self, start: f64, end: f64) -> bool {
        self.start <= start && end <= self.end
    }

    pub fn length(&self) -> f64 {
        self.end - self.start
    }
}

/// Disjoint intervals in ascending order.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct IntervalSet(pub Vec<Interval>);

impl IntervalSet {
    pub fn iter(&self) -> impl Iterator<Item = &Interval> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.0.iter().any(|i| i.contains(x))
    }

    /// First interval containing all of `[start, end]`.
    pub fn covering(&self, start: f64, end: f64) -> Option<&Interval> {
        self.0.iter().find(|i| i.covers(start, end))
    }
}

fn check_series(tau: &[f64], values: &[f64]) -> Result<()> {
    if tau.len() != values.len() {
        return Err(Error::InvalidArgument(format!(
            "grid has {} points but series has {}",
            tau.len(),
            values.len()
        )));
    }
    if !strictly_ascending(tau) {
        return Err(Error::BadGrid);
    }
    Ok(())
}

pub const FROZEN_MIN_POINTS: usize = 3;

/// Maximal runs of grid points on which every value stays within `tol` of
/// the run mean. Runs shorter than three points are dropped.
pub fn detect_frozen_intervals(tau: &[f64], values: &[f64], tol: f64) -> Result<IntervalSet> {
    check_series(tau, values)?;
    let n = values.len();
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let (mut lo, mut hi, mut sum) = (values[start], values[start], values[start]);
        let mut end = start + 1;
        while end < n {
            let v = values[end];
            let (lo2, hi2, sum2) = (lo.min(v), hi.max(v), sum + v);
            let mean = sum2 / (end - start + 1) as f64;
            if hi2 - mean < tol && mean - lo2 < tol {
                lo = lo2;
                hi = hi2;
                sum = sum2;
                end += 1;
            } else {
                break;
            }
        }
        if end - start >= FROZEN_MIN_POINTS {
            out.push(Interval {
                start: tau[start],
                end: tau[end - 1],
            });
            start = end;
        } else {
            start += 1;
        }
    }
    Ok(IntervalSet(out))
}

const TIE_TOL: f64 = 1e-12;

/// Bell label holding the second-largest weight; near-equal weights are
/// ordered by label index.
pub fn second_largest_label(spectrum: &BellSpectrum) -> BellLabel {
    let mut labels = BellLabel::ALL;
    labels.sort_by(|a, b| {
        let (wa, wb) = (spectrum.get(*a), spectrum.get(*b));
        if (wa - wb).abs() <= TIE_TOL {
            a.index().cmp(&b.index())
        } else {
            wb.total_cmp(&wa)
        }
    });
    labels[1]
}

const BISECTION_TOL: f64 = 1e-9;

fn bisect<F: Fn(f64) -> bool>(mut lo: f64, mut hi: f64, same_as_lo: F) -> f64 {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if same_as_lo(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Times at which the label of the second-largest Bell weight changes,
/// bracketed on a `steps`-interval grid over `[0, tau_max]` and refined by
/// bisection.
pub fn detect_switching_times(spectrum: &BellSpectrum, tau_max: Tau, steps: usize) -> Result<Vec<f64>> {
    if steps == 0 {
        return Err(Error::InvalidArgument("steps must be positive".into()));
    }
    let label_at = |t: f64| second_largest_label(&evolve_bell_spectrum(spectrum, Tau(t)));
    let h = tau_max.value() / steps as f64;
    let mut out = Vec::new();
    let mut prev = label_at(0.0);
    for i in 1..=steps {
        let (a, b) = ((i - 1) as f64 * h, i as f64 * h);
        let cur = label_at(b);
        if cur != prev {
            out.push(bisect(a, b, |t| label_at(t) == prev));
        }
        prev = cur;
    }
    Ok(out)
}

/// Maximal intervals where entanglement is at most `threshold`.
///
/// With `closed_form` the interval edges are bisected on it between the
/// bracketing grid points; otherwise each edge sits halfway between the last
/// entangled and the first dead sample.
pub fn detect_death_revival(
    tau: &[f64],
    e: &[f64],
    threshold: f64,
    closed_form: Option<&dyn Fn(f64) -> f64>,
) -> Result<IntervalSet> {
    check_series(tau, e)?;
    let n = e.len();
    let dead = |i: usize| e[i] <= threshold;
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        if !dead(i) {
            i += 1;
            continue;
        }
        let first = i;
        while i + 1 < n && dead(i + 1) {
            i += 1;
        }
        let last = i;
        let start = if first == 0 {
            tau[0]
        } else {
            match closed_form {
                Some(f) => bisect(tau[first - 1], tau[first], |t| f(t) > threshold),
                None => 0.5 * (tau[first - 1] + tau[first]),
            }
        };
        let end = if last == n - 1 {
            tau[n - 1]
        } else {
            match closed_form {
                Some(f) => bisect(tau[last], tau[last + 1], |t| f(t) <= threshold),
                None => 0.5 * (tau[last] + tau[last + 1]),
            }
        };
        if end > start {
            out.push(Interval { start, end });
        }
        i += 1;
    }
    Ok(IntervalSet(out))
}

/// Bell-diagonal E at `τ` from the closed form `max(0, 1 − h(λ_max(τ)))`.
pub fn bell_entanglement_closed_form(spectrum: &BellSpectrum, tau: f64) -> f64 {
    let top = evolve_bell_spectrum(spectrum, Tau(tau.max(0.0))).max_weight();
    if top > 0.5 {
        (1.0 - binary_entropy(top)).max(0.0)
    } else {
        0.0
    }
}

/// Period of the Bell-diagonal dynamics in `τ`.
pub const BELL_PERIOD: f64 = FRAC_PI_2;
