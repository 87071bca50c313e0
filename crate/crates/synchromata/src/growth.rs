//! Core growth measurement: state counts, levels and core distances of the
//! minimized cores of successive powers.

use crate::error::{Error, Result};
use crate::order::{decide_order, OrderBudget, OrderVerdict};
use crate::sync::{core_distance, min_core_lenient, sync_level};
use crate::transducer::Transducer;
use crate::Caps;

/// One row of a growth series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthRecord {
    pub power: usize,
    /// States of the minimized core of the power (minimized power when the
    /// machine is not synchronizing).
    pub states: usize,
    /// Absent when the power does not synchronize.
    pub sync_level: Option<usize>,
    /// `max(sync level, inverse sync level)` when the power is invertible
    /// with synchronizing inverse.
    pub bisync_level: Option<usize>,
    /// Core distance of the unreduced incremental product; absent when it
    /// does not synchronize.
    pub coredist_raw: Option<usize>,
}

/// A heuristic label for the measured growth; never a theorem claim.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthClass {
    AtLeastExponential { base: f64 },
    PolynomialFit { degree: f64 },
    Bounded,
}

impl std::fmt::Display for GrowthClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GrowthClass::AtLeastExponential { base } => {
                write!(f, "at_least_exponential(base~{base:.3})")
            }
            GrowthClass::PolynomialFit { degree } => {
                write!(f, "polynomial_fit(degree~{degree:.2})")
            }
            GrowthClass::Bounded => write!(f, "bounded"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GrowthSeries {
    pub machine: String,
    pub records: Vec<GrowthRecord>,
    /// Set when a cap stopped the series early.
    pub truncated: Option<String>,
    pub classification: GrowthClass,
    pub method_note: &'static str,
}

impl GrowthSeries {
    pub fn states(&self, power: usize) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.power == power)
            .map(|r| r.states)
    }

    /// CSV with the header `m,states,sync_level,bisync_level,coredist_raw`.
    pub fn to_csv(&self) -> String {
        let cell = |v: Option<usize>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut s = String::from("m,states,sync_level,bisync_level,coredist_raw\n");
        for r in &self.records {
            s.push_str(&format!(
                "{},{},{},{},{}\n",
                r.power,
                r.states,
                cell(r.sync_level),
                cell(r.bisync_level),
                cell(r.coredist_raw)
            ));
        }
        s
    }
}

/// Measures the growth series up to power `max_power` or until a cap bites.
pub fn growth_series(
    t: &Transducer,
    machine: &str,
    max_power: usize,
    caps: &Caps,
) -> Result<GrowthSeries> {
    let base = min_core_lenient(t, caps)?;
    let mut records = Vec::new();
    let mut truncated = None;
    let mut current = base.clone();
    let mut coredist_raw = core_distance(t, caps).ok();
    for m in 1..=max_power {
        let record = GrowthRecord {
            power: m,
            states: current.state_count(),
            sync_level: sync_level(&current, caps).ok(),
            bisync_level: bisync_level(&current, caps),
            coredist_raw,
        };
        records.push(record);
        if m == max_power {
            break;
        }
        let raw = current.product(&base)?;
        if raw.state_count() > caps.state_cap {
            truncated = Some(format!(
                "power {} has {} states, over the cap {}",
                m + 1,
                raw.state_count(),
                caps.state_cap
            ));
            break;
        }
        coredist_raw = core_distance(&raw, caps).ok();
        current = min_core_lenient(&raw, caps)?;
    }
    let classification = classify(&records);
    Ok(GrowthSeries {
        machine: machine.to_string(),
        records,
        truncated,
        classification,
        method_note: "log-linear regression on the state counts; heuristic label only",
    })
}

fn bisync_level(t: &Transducer, caps: &Caps) -> Option<usize> {
    let inv = t.inverse().ok()?;
    let inv_level = sync_level(&inv, caps).ok()?;
    let level = sync_level(t, caps).ok()?;
    Some(level.max(inv_level))
}

fn classify(records: &[GrowthRecord]) -> GrowthClass {
    if records.len() < 3 {
        return GrowthClass::Bounded;
    }
    let last = records.last().unwrap().states;
    if records.iter().rev().take(3).all(|r| r.states == last) {
        return GrowthClass::Bounded;
    }
    // Least-squares slope of log2(states) against the power.
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.power as f64, (r.states as f64).log2()))
        .collect();
    let slope = regression_slope(&points);
    if slope >= 0.2 {
        return GrowthClass::AtLeastExponential {
            base: 2f64.powf(slope),
        };
    }
    // Slope of log(states) against log(power) estimates a polynomial degree.
    let log_points: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.states > 0)
        .map(|r| ((r.power as f64).ln(), (r.states as f64).ln()))
        .collect();
    GrowthClass::PolynomialFit {
        degree: regression_slope(&log_points),
    }
}

fn regression_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        0.0
    } else {
        (n * sxy - sx * sy) / denom
    }
}

/// True iff every recorded state count meets the bound.
pub fn lower_bound_check(series: &GrowthSeries, bound: impl Fn(usize) -> usize) -> bool {
    !series.records.is_empty() && series.records.iter().all(|r| r.states >= bound(r.power))
}

/// Verifies that the synchronizing level of the minimized core powers grows
/// at least linearly over the recorded range, reporting the slope. Requires
/// an infinite-order verdict backed by a bad-pairs circuit.
pub fn sync_level_linear_check(
    t: &Transducer,
    max_power: usize,
    budget: &OrderBudget,
) -> Result<(bool, f64)> {
    match decide_order(t, budget)? {
        OrderVerdict::Infinite { .. } => {}
        other => {
            return Err(Error::PreconditionUnmet(format!(
                "linear level growth needs an infinite-order circuit, verdict was {other:?}"
            )))
        }
    }
    let series = growth_series(t, "sync-level-check", max_power, &budget.caps)?;
    let first = series
        .records
        .first()
        .and_then(|r| r.sync_level)
        .ok_or_else(|| {
            Error::PreconditionUnmet("the machine itself does not synchronize".into())
        })?;
    let mut slope = f64::INFINITY;
    for r in series.records.iter().skip(1) {
        let Some(level) = r.sync_level else {
            return Err(Error::PreconditionUnmet(format!(
                "power {} does not synchronize",
                r.power
            )));
        };
        let s = (level as f64 - first as f64) / (r.power as f64 - 1.0);
        slope = slope.min(s);
    }
    if !slope.is_finite() {
        return Ok((false, 0.0));
    }
    Ok((slope > 0.0, slope))
}
