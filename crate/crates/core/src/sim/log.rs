use std::io::{Read, Write};

use crate::guidance::GuidanceLaw;

/// One logged control tick. Quantities are sampled at `t`, before the plant is
/// advanced; `beta_hat` is the estimate used to form `psi_d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogRow {
    pub t: f64,
    pub north: f64,
    pub east: f64,
    pub yaw: f64,
    pub surge_u: f64,
    pub sway_v: f64,
    pub yaw_rate_r: f64,
    pub cross_track: f64,
    /// Distance to the arc centre; `None` on straight segments.
    pub dist_to_center: Option<f64>,
    /// Error driven to zero by the guidance law (`d - r_v` on vector-field turns).
    pub field_error: f64,
    pub beta: f64,
    pub beta_hat: f64,
    pub psi_d: f64,
    pub u_d: f64,
    pub tau_u: f64,
    pub tau_r: f64,
    pub f1: f64,
    pub f2: f64,
    pub segment: usize,
    pub lyapunov: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimLog {
    pub scenario: String,
    pub law: GuidanceLaw,
    pub dt: f64,
    pub rows: Vec<LogRow>,
}

pub const CSV_HEADER: [&str; 20] = [
    "t",
    "north",
    "east",
    "yaw",
    "surge_u",
    "sway_v",
    "yaw_rate_r",
    "y_e",
    "d",
    "e_field",
    "beta",
    "beta_hat",
    "psi_d",
    "u_d",
    "tau_u",
    "tau_r",
    "f1",
    "f2",
    "segment",
    "lyapunov_v",
];

/// Shortest representation that parses back to the same `f64`.
pub(crate) fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

impl SimLog {
    pub fn new(scenario: impl Into<String>, law: GuidanceLaw, dt: f64) -> Self {
        Self {
            scenario: scenario.into(),
            law,
            dt,
            rows: Vec::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.t).collect()
    }

    pub fn cross_track(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.cross_track).collect()
    }

    pub fn last(&self) -> Option<&LogRow> {
        self.rows.last()
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        for r in &self.rows {
            let fields = [
                fmt_f64(r.t),
                fmt_f64(r.north),
                fmt_f64(r.east),
                fmt_f64(r.yaw),
                fmt_f64(r.surge_u),
                fmt_f64(r.sway_v),
                fmt_f64(r.yaw_rate_r),
                fmt_f64(r.cross_track),
                r.dist_to_center.map(fmt_f64).unwrap_or_default(),
                fmt_f64(r.field_error),
                fmt_f64(r.beta),
                fmt_f64(r.beta_hat),
                fmt_f64(r.psi_d),
                fmt_f64(r.u_d),
                fmt_f64(r.tau_u),
                fmt_f64(r.tau_r),
                fmt_f64(r.f1),
                fmt_f64(r.f2),
                r.segment.to_string(),
                fmt_f64(r.lyapunov),
            ];
            w.write_record(&fields)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }

    /// Reads a log written by [`write_csv`](Self::write_csv). Scenario name and law are
    /// not part of the file and must be supplied.
    pub fn read_csv<R: Read>(reader: R, scenario: &str, law: GuidanceLaw) -> Result<Self, String> {
        let mut rdr = csv::Reader::from_reader(reader);
        let header = rdr.headers().map_err(|e| e.to_string())?.clone();
        if header.iter().ne(CSV_HEADER.iter().copied()) {
            return Err(format!("unexpected header: {header:?}"));
        }
        let mut rows = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record.map_err(|e| e.to_string())?;
            let num = |i: usize| -> Result<f64, String> {
                record[i]
                    .parse::<f64>()
                    .map_err(|e| format!("row {line}, column {}: {e}", CSV_HEADER[i]))
            };
            rows.push(LogRow {
                t: num(0)?,
                north: num(1)?,
                east: num(2)?,
                yaw: num(3)?,
                surge_u: num(4)?,
                sway_v: num(5)?,
                yaw_rate_r: num(6)?,
                cross_track: num(7)?,
                dist_to_center: if record[8].is_empty() { None } else { Some(num(8)?) },
                field_error: num(9)?,
                beta: num(10)?,
                beta_hat: num(11)?,
                psi_d: num(12)?,
                u_d: num(13)?,
                tau_u: num(14)?,
                tau_r: num(15)?,
                f1: num(16)?,
                f2: num(17)?,
                segment: record[18].parse().map_err(|e| format!("row {line}, column segment: {e}"))?,
                lyapunov: num(19)?,
            });
        }
        let dt = match rows.as_slice() {
            [a, b, ..] => b.t - a.t,
            _ => 0.0,
        };
        Ok(Self {
            scenario: scenario.to_string(),
            law,
            dt,
            rows,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn any_f64() -> impl Strategy<Value = f64> {
        prop_oneof![any::<f64>().prop_filter("finite", |x| x.is_finite()), -1e3f64..1e3]
    }

    proptest! {
        #[test]
        fn csv_round_trip_is_exact(values in proptest::collection::vec(any_f64(), 19), seg in 0usize..10, has_d in any::<bool>()) {
            let v = &values;
            let row = LogRow {
                t: v[0], north: v[1], east: v[2], yaw: v[3], surge_u: v[4], sway_v: v[5],
                yaw_rate_r: v[6], cross_track: v[7], dist_to_center: has_d.then_some(v[8]),
                field_error: v[9], beta: v[10], beta_hat: v[11], psi_d: v[12], u_d: v[13],
                tau_u: v[14], tau_r: v[15], f1: v[16], f2: v[17], segment: seg, lyapunov: v[18],
            };
            let log = SimLog { scenario: "s".into(), law: GuidanceLaw::Alos, dt: 0.1, rows: vec![row, row] };
            let text = log.to_csv_string();
            let back = SimLog::read_csv(text.as_bytes(), "s", GuidanceLaw::Alos).unwrap();
            prop_assert_eq!(back.rows, log.rows);
        }
    }

    #[test]
    fn header_is_fixed() {
        let log = SimLog::new("x", GuidanceLaw::Los, 0.1);
        assert_eq!(log.to_csv_string().trim(), CSV_HEADER.join(","));
    }
}
