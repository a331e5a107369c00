//! Parameter sweeps along the transmit SNR or the antenna count.

use rayon::prelude::*;

use super::table::{PointSpec, Row};
use crate::channel::{ChannelParams, SystemParams};
use crate::error::{Error, Result};
use crate::rate::{
    closed_form_supported, rate_dispatch, EvalOptions, Method, MethodChoice, RateResult,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepAxis {
    /// transmit SNR rho in dB
    RhoDb,
    /// transmit antenna count L
    Antennas,
}

impl SweepAxis {
    pub fn column_name(self) -> &'static str {
        match self {
            SweepAxis::RhoDb => "rho_db",
            SweepAxis::Antennas => "antennas",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub step: f64,
    /// Values for everything that is not swept; the swept field is overwritten.
    pub base: PointSpec,
    pub methods: Vec<Method>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        for (field, v) in [
            ("start", self.start),
            ("stop", self.stop),
            ("step", self.step),
        ] {
            if !v.is_finite() {
                return Err(Error::domain(field, v, "sweep bounds must be finite"));
            }
        }
        if self.start > self.stop {
            return Err(Error::domain(
                "stop",
                self.stop,
                "sweep needs start <= stop",
            ));
        }
        if self.step <= 0.0 {
            return Err(Error::domain("step", self.step, "sweep step must be > 0"));
        }
        if self.axis == SweepAxis::Antennas {
            for (field, v) in [
                ("start", self.start),
                ("stop", self.stop),
                ("step", self.step),
            ] {
                if v.fract() != 0.0 || v < 1.0 {
                    return Err(Error::domain(
                        field,
                        v,
                        "antenna sweeps use positive integers",
                    ));
                }
            }
        }
        if self.methods.is_empty() {
            return Err(Error::domain(
                "methods",
                0.0,
                "at least one method is required",
            ));
        }
        Ok(())
    }

    /// start, start + step, ... up to and including stop (within rounding).
    pub fn axis_values(&self) -> Vec<f64> {
        let count = ((self.stop - self.start) / self.step + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|i| self.start + i as f64 * self.step)
            .collect()
    }

    pub fn point_at(&self, value: f64) -> PointSpec {
        let mut p = self.base;
        match self.axis {
            SweepAxis::RhoDb => p.rho_db = value,
            SweepAxis::Antennas => p.antennas = value as u32,
        }
        p
    }
}

/// Validated channel and link parameters for a CLI point.
pub fn params_for(point: &PointSpec) -> Result<(ChannelParams, SystemParams)> {
    let ch = ChannelParams::from_db(point.kappa, point.mu, point.m, point.gamma_bar_db)?;
    let sys = SystemParams::from_db(point.antennas, point.rho_db, point.a_exp)?;
    Ok((ch, sys))
}

/// The concrete method `choice` runs for this channel.
pub fn resolve_method(choice: MethodChoice, ch: &ChannelParams) -> Method {
    match choice {
        MethodChoice::Only(m) => m,
        MethodChoice::Auto if closed_form_supported(ch) => Method::ClosedInteger,
        MethodChoice::Auto => Method::Quadrature,
    }
}

pub fn evaluate_point(point: &PointSpec, method: Method, opts: &EvalOptions) -> Result<RateResult> {
    let (ch, sys) = params_for(point)?;
    rate_dispatch(&ch, &sys, MethodChoice::Only(method), opts)
}

/// Evaluates every (axis value, method) pair on the current rayon pool.
///
/// Rows come back ordered by axis value, then by the declared method order.
/// Evaluation errors become rows with an empty rate and a filled `error` column.
pub fn run_sweep(spec: &SweepSpec, opts: &EvalOptions) -> Result<Vec<Row>> {
    spec.validate()?;
    let axis = spec.axis.column_name();
    let jobs: Vec<(f64, Method)> = spec
        .axis_values()
        .into_iter()
        .flat_map(|v| spec.methods.iter().map(move |&m| (v, m)))
        .collect();
    Ok(jobs
        .par_iter()
        .map(|&(value, method)| {
            let point = spec.point_at(value);
            let result = evaluate_point(&point, method, opts);
            Row::from_result(axis, Some(value), point, method, &result)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(axis: SweepAxis, start: f64, stop: f64, step: f64) -> SweepSpec {
        SweepSpec {
            axis,
            start,
            stop,
            step,
            base: PointSpec {
                kappa: 3.0,
                mu: 1.0,
                m: 1.0,
                gamma_bar_db: -5.0,
                a_exp: 2.0,
                antennas: 2,
                rho_db: 15.0,
            },
            methods: vec![Method::Quadrature],
        }
    }

    #[test]
    fn axis_values_include_stop() {
        assert_eq!(
            spec(SweepAxis::RhoDb, 0.0, 40.0, 1.0).axis_values().len(),
            41
        );
        assert_eq!(
            spec(SweepAxis::RhoDb, 0.0, 1.0, 0.1).axis_values().len(),
            11
        );
        assert_eq!(
            spec(SweepAxis::RhoDb, 5.0, 5.0, 1.0).axis_values(),
            vec![5.0]
        );
    }

    #[test]
    fn invalid_specs() {
        assert!(spec(SweepAxis::RhoDb, 10.0, 0.0, 1.0).validate().is_err());
        assert!(spec(SweepAxis::RhoDb, 0.0, 10.0, 0.0).validate().is_err());
        assert!(spec(SweepAxis::Antennas, 1.0, 4.0, 0.5).validate().is_err());
        assert!(spec(SweepAxis::Antennas, 0.0, 4.0, 1.0).validate().is_err());
        assert!(spec(SweepAxis::Antennas, 1.0, 8.0, 1.0).validate().is_ok());
    }

    #[test]
    fn asymptote_holes_are_row_local() {
        let mut s = spec(SweepAxis::RhoDb, 10.0, 12.0, 1.0);
        s.methods = vec![Method::Quadrature, Method::Asymptotic];
        let rows = run_sweep(&s, &EvalOptions::default()).unwrap();
        assert_eq!(rows.len(), 6);
        for pair in rows.chunks(2) {
            assert!(pair[0].rate.is_some());
            assert!(pair[1].rate.is_none());
            assert!(pair[1].error.as_deref().unwrap().contains("A > L*mu"));
        }
    }
}
