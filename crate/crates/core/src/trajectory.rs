//! Sampled trajectories and their CSV/JSON encodings.

use std::io::{self, BufRead, Write};

use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::bell::BellSpectrum;
use crate::correlations::{bell_report, CorrelationVector};
use crate::dynamics::{evolve_bell_spectrum, mixing_fraction, FieldChannel, Tau};
use crate::error::{Error, Result};
use crate::nonmarkov::{accumulate, ancilla_entanglement, Convention};

/// Significant digits written to CSV.
pub const CSV_SIGNIFICANT_DIGITS: usize = 12;

/// Uniform grid of `steps + 1` points on `[0, tau_max]`.
pub fn tau_grid(tau_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(tau_max.is_finite() && tau_max > 0.0) {
        return Err(Error::InvalidArgument(format!("tau_max must be positive, got {tau_max}")));
    }
    if steps < 2 {
        return Err(Error::InvalidArgument(format!("steps must be at least 2, got {steps}")));
    }
    Ok((0..=steps)
        .map(|i| tau_max * i as f64 / steps as f64)
        .collect())
}

/// One sample of a Bell-diagonal trajectory.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrajectoryPoint {
    pub tau: f64,
    pub f: f64,
    pub spectrum: BellSpectrum,
    pub c: CorrelationVector,
    pub total: f64,
    pub discord: f64,
    pub classical: f64,
    pub entanglement: f64,
}

pub fn trajectory_point(initial: &BellSpectrum, tau: Tau) -> TrajectoryPoint {
    let spectrum = evolve_bell_spectrum(initial, tau);
    let report = bell_report(&spectrum);
    TrajectoryPoint {
        tau: tau.value(),
        f: mixing_fraction(tau),
        spectrum,
        c: report.c_vector,
        total: report.total,
        discord: report.discord,
        classical: report.classical,
        entanglement: report.entanglement.unwrap_or(0.0),
    }
}

/// Samples the correlation dynamics on `grid`; rows come back in grid order.
pub fn bell_trajectory(initial: &BellSpectrum, grid: &[f64]) -> Result<Vec<TrajectoryPoint>> {
    let taus = grid.iter().map(|&t| Tau::new(t)).collect::<Result<Vec<_>>>()?;
    Ok(taus
        .par_iter()
        .map(|&t| trajectory_point(initial, t))
        .collect())
}

/// Named columns of equal length.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }

    /// Header row then one line per row, comma separated, LF endings.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let line: Vec<String> = row
                .iter()
                .map(|&x| format_significant(x, CSV_SIGNIFICANT_DIGITS))
                .collect();
            writeln!(w, "{}", line.join(","))?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(r: R) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::InvalidArgument("empty CSV".into()))?
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
        let mut table = Table::new(header.split(','));
        for line in lines {
            let line = line.map_err(|e| Error::InvalidArgument(e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|s| {
                    s.parse::<f64>()
                        .map_err(|e| Error::InvalidArgument(format!("bad number '{s}': {e}")))
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != table.columns.len() {
                return Err(Error::InvalidArgument("ragged CSV row".into()));
            }
            table.push(row);
        }
        Ok(table)
    }

    /// Object mapping each column name to its array of values.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (k, name) in self.columns.iter().enumerate() {
            let values: Vec<Value> = self.rows.iter().map(|r| Value::from(r[k])).collect();
            map.insert(name.clone(), Value::Array(values));
        }
        Value::Object(map)
    }
}

/// `%.{digits}g`-style formatting: plain decimal for moderate exponents,
/// scientific otherwise, trailing zeros removed.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return if x.is_nan() { "NaN".into() } else if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{:.*e}", digits.saturating_sub(1), x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        format!("{}e{}", trim_zeros(mantissa), exp)
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{:.*}", decimals, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Column layout shared by `evolve`, `figure2` and `figure3`.
pub fn trajectory_columns(with_time: bool, with_ancilla: bool) -> Vec<&'static str> {
    let mut cols = vec!["tau"];
    if with_time {
        cols.push("t");
    }
    cols.extend([
        "f", "lambda_1p", "lambda_1m", "lambda_2p", "lambda_2m", "c1", "c2", "c3", "T", "D", "C",
        "E",
    ]);
    if with_ancilla {
        cols.extend(["E_anc", "I_E"]);
    }
    cols
}

/// Trajectory table; an absolute-time column appears when `g != 1` and the
/// ancilla columns when `ancilla` names an `I^E` convention.
pub fn trajectory_table(
    initial: &BellSpectrum,
    channel: &FieldChannel,
    grid: &[f64],
    ancilla: Option<Convention>,
) -> Result<Table> {
    let with_time = channel.g() != 1.0;
    let points = bell_trajectory(initial, grid)?;
    let ancilla_cols = match ancilla {
        Some(conv) => {
            let e: Vec<f64> = grid
                .iter()
                .map(|&t| ancilla_entanglement(Tau::new(t).expect("validated grid")))
                .collect();
            let i = accumulate(&e, conv);
            Some((e, i))
        }
        None => None,
    };
    let mut table = Table::new(trajectory_columns(with_time, ancilla.is_some()));
    for (k, p) in points.iter().enumerate() {
        let mut row = vec![p.tau];
        if with_time {
            row.push(channel.time_at(Tau::new(p.tau)?));
        }
        row.push(p.f);
        row.extend(p.spectrum.weights());
        row.extend(p.c.to_array());
        row.extend([p.total, p.discord, p.classical, p.entanglement]);
        if let Some((e, i)) = &ancilla_cols {
            row.extend([e[k], i[k]]);
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_formatting() {
        assert_eq!(format_significant(0.0, 12), "0");
        assert_eq!(format_significant(-0.0, 12), "0");
        assert_eq!(format_significant(1.0, 12), "1");
        assert_eq!(format_significant(0.25, 12), "0.25");
        assert_eq!(format_significant(1.0 / 3.0, 12), "0.333333333333");
        assert_eq!(format_significant(-2.0 / 3.0, 12), "-0.666666666667");
        assert_eq!(format_significant(123456.789, 12), "123456.789");
        assert_eq!(format_significant(1.5e-9, 12), "1.5e-9");
        assert_eq!(format_significant(3.0e14, 12), "3e14");
        assert_eq!(format_significant(9.9999999999999e-1, 12), "1");
    }

    #[test]
    fn grid_validation() {
        assert!(tau_grid(1.0, 1).is_err());
        assert!(tau_grid(0.0, 10).is_err());
        let g = tau_grid(std::f64::consts::PI, 2000).unwrap();
        assert_eq!(g.len(), 2001);
        assert_eq!(g[500], std::f64::consts::FRAC_PI_4);
    }

    #[test]
    fn csv_round_trip_preserves_shape() {
        let mut t = Table::new(["a", "b"]);
        t.push(vec![0.1, 2.0]);
        t.push(vec![1e-20, -3.5]);
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "a,b\n0.1,2\n1e-20,-3.5\n");
        let back = Table::read_csv(&buf[..]).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_mirrors_columns() {
        let mut t = Table::new(["tau", "E"]);
        t.push(vec![0.0, 1.0]);
        t.push(vec![0.5, 0.25]);
        assert_eq!(
            t.to_json().to_string(),
            r#"{"tau":[0.0,0.5],"E":[1.0,0.25]}"#
        );
    }

    #[test]
    fn time_column_only_off_unit_coupling() {
        let s = BellSpectrum::maximally_mixed();
        let grid = tau_grid(1.0, 4).unwrap();
        let t1 = trajectory_table(&s, &FieldChannel::default(), &grid, None).unwrap();
        assert!(t1.column("t").is_none());
        let t2 = trajectory_table(&s, &FieldChannel::new(2.0).unwrap(), &grid, None).unwrap();
        assert_eq!(t2.column("t").unwrap()[4], 0.5);
    }
}
