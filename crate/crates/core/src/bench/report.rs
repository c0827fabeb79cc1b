use std::fmt::Write as _;
use std::io::{Read, Write};

use crate::error::{invalid, Error, Result};
use crate::output::{sci, sci_opt};
use crate::solver::SchemeKind;

/// Observed orders between successive halvings of τ.
///
/// `errors` holds (τ, E) rows with τ halving from row to row. Entry k is the
/// rate ln(E_{k-1}/E_k)/ln 2 reported on the finer row k; the first entry, and
/// any involving a zero error, are `None`.
pub fn compute_rates(errors: &[(f64, f64)]) -> Result<Vec<Option<f64>>> {
    let mut rates = Vec::with_capacity(errors.len());
    for (k, &(tau, e)) in errors.iter().enumerate() {
        if k == 0 {
            rates.push(None);
            continue;
        }
        let (coarse_tau, coarse_e) = errors[k - 1];
        if ((coarse_tau / tau) - 2.0).abs() > 1e-9 {
            return Err(invalid(format!(
                "step sizes must halve, got {coarse_tau} then {tau}"
            )));
        }
        let rate = (e > 0.0 && coarse_e > 0.0).then(|| (coarse_e / e).ln() / std::f64::consts::LN_2);
        rates.push(rate);
    }
    Ok(rates)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub tau: f64,
    pub e1: f64,
    pub rate1: Option<f64>,
    pub e2: f64,
    pub rate2: Option<f64>,
    /// Wall time of the run, setup included.
    pub seconds: f64,
}

/// One convergence table: a scheme at one order pair.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub scheme: SchemeKind,
    pub alpha1: f64,
    pub alpha2: f64,
    pub ref_scheme: SchemeKind,
    pub ref_tau: f64,
    pub rows: Vec<ConvergenceRow>,
}

const HEADER: [&str; 6] = ["tau", "E1", "rate1", "E2", "rate2", "seconds"];

impl ConvergenceReport {
    /// Builds the rows from (τ, E₁, E₂, seconds), filling in the rates.
    pub fn from_errors(
        scheme: SchemeKind,
        (alpha1, alpha2): (f64, f64),
        (ref_scheme, ref_tau): (SchemeKind, f64),
        runs: &[(f64, f64, f64, f64)],
    ) -> Result<Self> {
        let r1 = compute_rates(&runs.iter().map(|r| (r.0, r.1)).collect::<Vec<_>>())?;
        let r2 = compute_rates(&runs.iter().map(|r| (r.0, r.2)).collect::<Vec<_>>())?;
        let rows = runs
            .iter()
            .zip(r1.into_iter().zip(r2))
            .map(|(&(tau, e1, e2, seconds), (rate1, rate2))| ConvergenceRow {
                tau,
                e1,
                rate1,
                e2,
                rate2,
                seconds,
            })
            .collect();
        Ok(ConvergenceReport {
            scheme,
            alpha1,
            alpha2,
            ref_scheme,
            ref_tau,
            rows,
        })
    }

    /// File stem such as `convergence_fastbe_0.3_0.6`.
    pub fn file_stem(&self) -> String {
        format!("convergence_{}_{}_{}", self.scheme, self.alpha1, self.alpha2)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(HEADER)?;
        for r in &self.rows {
            w.write_record([
                sci(r.tau),
                sci(r.e1),
                sci_opt(r.rate1),
                sci(r.e2),
                sci_opt(r.rate2),
                sci(r.seconds),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Parses rows written by [`ConvergenceReport::write_csv`].
    pub fn read_rows<R: Read>(input: R) -> Result<Vec<ConvergenceRow>> {
        let mut rd = csv::Reader::from_reader(input);
        if rd.headers()?.iter().ne(HEADER) {
            return Err(invalid("not a convergence table"));
        }
        let num = |s: &str| -> Result<f64> {
            s.parse().map_err(|_| invalid(format!("bad number `{s}`")))
        };
        let opt = |s: &str| -> Result<Option<f64>> {
            if s.is_empty() {
                Ok(None)
            } else {
                num(s).map(Some)
            }
        };
        rd.records()
            .map(|rec| {
                let rec = rec?;
                Ok(ConvergenceRow {
                    tau: num(&rec[0])?,
                    e1: num(&rec[1])?,
                    rate1: opt(&rec[2])?,
                    e2: num(&rec[3])?,
                    rate2: opt(&rec[4])?,
                    seconds: num(&rec[5])?,
                })
            })
            .collect()
    }

    /// Aligned text table for the terminal.
    pub fn to_table(&self) -> String {
        let mut s = format!(
            "{}  alpha = ({}, {})  reference: {} at tau = {}\n",
            self.scheme, self.alpha1, self.alpha2, self.ref_scheme, self.ref_tau
        );
        let _ = writeln!(
            s,
            "{:>10}  {:>11}  {:>7}  {:>11}  {:>7}  {:>9}",
            "tau", "E1", "rate1", "E2", "rate2", "seconds"
        );
        let rate = |r: Option<f64>| r.map(|v| format!("{v:.4}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{:>10}  {:>11.4e}  {:>7}  {:>11.4e}  {:>7}  {:>9.3}",
                tau_label(r.tau),
                r.e1,
                rate(r.rate1),
                r.e2,
                rate(r.rate2),
                r.seconds
            );
        }
        s
    }
}

/// `1/3200` for reciprocals of integers, else the plain value.
pub fn tau_label(tau: f64) -> String {
    let inv = 1.0 / tau;
    if (inv - inv.round()).abs() < 1e-9 * inv && inv >= 1.0 {
        format!("1/{}", inv.round())
    } else {
        format!("{tau}")
    }
}

/// One timing row of a bench sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scheme: SchemeKind,
    pub n: usize,
    pub seconds_loop: f64,
    pub seconds_setup: f64,
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["scheme", "N", "seconds_loop", "seconds_setup"])?;
    for r in rows {
        w.write_record([
            r.scheme.to_string(),
            r.n.to_string(),
            sci(r.seconds_loop),
            sci(r.seconds_setup),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_bench_csv<R: Read>(input: R) -> Result<Vec<BenchRow>> {
    let mut rd = csv::Reader::from_reader(input);
    rd.records()
        .map(|rec| {
            let rec = rec?;
            let bad = |s: &str| Error::InvalidParameter(format!("bad bench field `{s}`"));
            Ok(BenchRow {
                scheme: rec[0].parse()?,
                n: rec[1].parse().map_err(|_| bad(&rec[1]))?,
                seconds_loop: rec[2].parse().map_err(|_| bad(&rec[2]))?,
                seconds_setup: rec[3].parse().map_err(|_| bad(&rec[3]))?,
            })
        })
        .collect()
}
