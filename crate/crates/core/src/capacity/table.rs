use std::io::Write;

use serde::{Deserialize, Serialize};

use super::{capacity_closed_form, ChannelKind};
use crate::error::{invalid, Error, Result};

/// One row; `None` marks a level below that column's noise floor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CapacityRow {
    pub a: f64,
    pub c_gauss: Option<f64>,
    pub c_2d: Option<f64>,
    pub c_3d: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CapacityTable {
    pub lambda: f64,
    pub sigma: f64,
    pub rows: Vec<CapacityRow>,
}

fn column(kind: ChannelKind, a: f64, floor: f64) -> Result<Option<f64>> {
    match capacity_closed_form(kind, a, floor) {
        Ok(r) => Ok(Some(r.capacity)),
        Err(Error::BelowNoiseFloor { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Capacities in nats at each level: `ln(A/σ)`, `ln(A/λ)`, `2 ln(A/λ)`.
pub fn capacity_table(a_values: &[f64], lambda: f64, sigma: f64) -> Result<CapacityTable> {
    if !(lambda > 0.0) || !(sigma > 0.0) || !lambda.is_finite() || !sigma.is_finite() {
        return Err(invalid(format!("lambda and sigma must be positive, got {lambda} and {sigma}")));
    }
    let rows = a_values
        .iter()
        .map(|&a| {
            Ok(CapacityRow {
                a,
                c_gauss: column(ChannelKind::Gaussian, a, sigma)?,
                c_2d: column(ChannelKind::Fap2d, a, lambda)?,
                c_3d: column(ChannelKind::Fap3d, a, lambda)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CapacityTable { lambda, sigma, rows })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "infeasible".to_string(), |c| c.to_string())
}

impl CapacityTable {
    /// CSV with header `A,C_gauss,C_2d,C_3d`.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "A,C_gauss,C_2d,C_3d")?;
        for r in &self.rows {
            writeln!(w, "{},{},{},{}", r.a, cell(r.c_gauss), cell(r.c_2d), cell(r.c_3d))?;
        }
        Ok(())
    }

    /// Feasible `(A, C)` points of one column.
    pub fn curve(&self, kind: ChannelKind) -> Vec<(f64, f64)> {
        self.rows
            .iter()
            .filter_map(|r| {
                let c = match kind {
                    ChannelKind::Gaussian => r.c_gauss,
                    ChannelKind::Fap2d => r.c_2d,
                    ChannelKind::Fap3d => r.c_3d,
                };
                c.map(|c| (r.a, c))
            })
            .collect()
    }

    /// Two-column whitespace-separated data for one curve, gnuplot style.
    pub fn write_dat<W: Write>(&self, kind: ChannelKind, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# A C_{} (nats)", kind.name())?;
        for (a, c) in self.curve(kind) {
            writeln!(w, "{a} {c}")?;
        }
        Ok(())
    }
}
