//! Text serialization for the solver's artifacts: CSV writers and readers
//! for trajectories, energy ledgers, and shot sweeps, plus a gnuplot-script
//! emitter for the trajectory files.
//!
//! Every float is written with `{}` formatting — the shortest decimal that
//! parses back to the identical bit pattern — so a write/read round trip is
//! exact and rerunning a deterministic computation reproduces its files
//! byte for byte.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::integrate::EnergyLedger;
use crate::ode::Trajectory;
use crate::shooting::{ShotTag, SweepResult};

/// Header of the trajectory CSV format.
pub const TRAJECTORY_HEADER: &str = "r,value,slope";

/// Header of the energy-ledger CSV format.
pub const LEDGER_HEADER: &str = "r,c,i_cubic,j_linear";

/// Header of the sweep CSV format.
pub const SWEEP_HEADER: &str =
    "a,outcome,event_radius,terminal_coord,terminal_value,ell,ell_converged,constant_profile";

/// Renders a trajectory's samples as `r,value,slope` rows.
pub fn trajectory_csv(traj: &Trajectory) -> String {
    let mut out = String::with_capacity(32 * traj.len() + TRAJECTORY_HEADER.len() + 1);
    out.push_str(TRAJECTORY_HEADER);
    out.push('\n');
    for i in 0..traj.len() {
        writeln!(
            out,
            "{},{},{}",
            traj.coords[i], traj.values[i], traj.slopes[i]
        )
        .expect("writing to a String cannot fail");
    }
    out
}

fn parse_field(s: &str, what: &str, line: usize) -> Result<f64> {
    s.trim().parse::<f64>().map_err(|e| Error::CsvParse {
        line,
        msg: format!("{what}: cannot parse {:?} as a number ({e})", s.trim()),
    })
}

/// Parses the columns written by [`trajectory_csv`] back into
/// `(coords, values, slopes)`.
///
/// The header row is required, every data row must have exactly three
/// comma-separated numeric fields, and blank lines are ignored. Errors
/// carry the 1-based line number.
pub fn parse_trajectory_csv(text: &str) -> Result<(Vec<f64>, Vec<f64>, Vec<f64>)> {
    let mut coords = Vec::new();
    let mut values = Vec::new();
    let mut slopes = Vec::new();
    let mut saw_header = false;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let row = raw.trim();
        if row.is_empty() {
            continue;
        }
        if !saw_header {
            if row != TRAJECTORY_HEADER {
                return Err(Error::CsvParse {
                    line,
                    msg: format!("expected header {TRAJECTORY_HEADER:?}, found {row:?}"),
                });
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = row.split(',').collect();
        if fields.len() != 3 {
            return Err(Error::CsvParse {
                line,
                msg: format!("expected 3 comma-separated fields, found {}", fields.len()),
            });
        }
        coords.push(parse_field(fields[0], "r", line)?);
        values.push(parse_field(fields[1], "value", line)?);
        slopes.push(parse_field(fields[2], "slope", line)?);
    }
    if !saw_header {
        return Err(Error::CsvParse {
            line: 1,
            msg: "empty input: missing header row".into(),
        });
    }
    if coords.is_empty() {
        return Err(Error::CsvParse {
            line: 2,
            msg: "no data rows after the header".into(),
        });
    }
    Ok((coords, values, slopes))
}

/// Renders an energy ledger as `r,c,i_cubic,j_linear` rows.
pub fn ledger_csv(ledger: &EnergyLedger) -> String {
    let mut out = String::with_capacity(48 * ledger.r.len() + LEDGER_HEADER.len() + 1);
    out.push_str(LEDGER_HEADER);
    out.push('\n');
    for i in 0..ledger.r.len() {
        writeln!(
            out,
            "{},{},{},{}",
            ledger.r[i], ledger.c[i], ledger.i_cubic[i], ledger.j_linear[i]
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Renders a sweep as one row per center value: the classification outcome,
/// the event radius for zero hits and escapes (empty otherwise), the
/// terminal sample, and the tail estimate with its convergence flag (the
/// estimate is empty when no converged tail exists).
pub fn sweep_csv(sweep: &SweepResult) -> String {
    let mut out = String::with_capacity(64 * sweep.entries.len() + SWEEP_HEADER.len() + 1);
    out.push_str(SWEEP_HEADER);
    out.push('\n');
    for entry in &sweep.entries {
        let cls = &entry.classification;
        let event_radius = match cls.tag {
            ShotTag::HitsZero { radius } | ShotTag::Blowup { radius } => format!("{radius}"),
            ShotTag::PositiveDecaying | ShotTag::Undetermined => String::new(),
        };
        let ell = cls.ell.map(|v| format!("{v}")).unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            entry.a,
            cls.tag.class(),
            event_radius,
            cls.terminal.coord,
            cls.terminal.value,
            ell,
            cls.ell_converged,
            cls.constant_profile
        )
        .expect("writing to a String cannot fail");
    }
    out
}

/// Emits a gnuplot script that plots the value column of a trajectory CSV
/// written by [`trajectory_csv`].
pub fn gnuplot_script(csv_path: &str, title: &str) -> String {
    format!(
        "set datafile separator \",\"\n\
         set key autotitle columnhead\n\
         set logscale x\n\
         set xlabel \"r\"\n\
         set ylabel \"value\"\n\
         set title \"{title}\"\n\
         plot \"{csv_path}\" using 1:2 with lines\n"
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponents::Params;
    use crate::integrate::{integrate, series_start, IntegrationOptions};
    use crate::ode::{Frame, ProfileKind};
    use crate::shooting::run_sweep;

    fn computed_profile() -> Trajectory {
        let params = Params::new(3.0, 5.0).unwrap();
        let state = series_start(ProfileKind::Forward, &params, 1.0, 1e-4).unwrap();
        let mut opts = IntegrationOptions::new(1e-4, 5.0);
        opts.n_output = 200;
        integrate(&state, &opts).unwrap()
    }

    #[test]
    fn trajectory_round_trip_is_bit_exact() {
        let traj = computed_profile();
        let text = trajectory_csv(&traj);
        let (coords, values, slopes) = parse_trajectory_csv(&text).unwrap();
        assert_eq!(coords.len(), traj.len());
        for i in 0..traj.len() {
            assert_eq!(coords[i].to_bits(), traj.coords[i].to_bits());
            assert_eq!(values[i].to_bits(), traj.values[i].to_bits());
            assert_eq!(slopes[i].to_bits(), traj.slopes[i].to_bits());
        }
    }

    #[test]
    fn identical_runs_serialize_to_identical_bytes() {
        let a = trajectory_csv(&computed_profile());
        let b = trajectory_csv(&computed_profile());
        assert_eq!(a, b);
    }

    #[test]
    fn malformed_rows_are_rejected_with_line_numbers() {
        let missing_header = "1.0,2.0,3.0\n";
        let err = parse_trajectory_csv(missing_header).unwrap_err();
        assert!(matches!(err, Error::CsvParse { line: 1, .. }), "{err}");

        let bad_arity = "r,value,slope\n1.0,2.0\n";
        let err = parse_trajectory_csv(bad_arity).unwrap_err();
        assert!(matches!(err, Error::CsvParse { line: 2, .. }), "{err}");

        let bad_number = "r,value,slope\n1.0,2.0,3.0\n2.0,oops,3.0\n";
        let err = parse_trajectory_csv(bad_number).unwrap_err();
        match err {
            Error::CsvParse { line, msg } => {
                assert_eq!(line, 3);
                assert!(msg.contains("oops"), "{msg}");
            }
            other => panic!("unexpected error {other}"),
        }

        let empty = "\n\n";
        assert!(parse_trajectory_csv(empty).is_err());

        let header_only = "r,value,slope\n";
        assert!(parse_trajectory_csv(header_only).is_err());
    }

    #[test]
    fn ledger_rows_match_the_ledger_length() {
        let traj = computed_profile().transform(Frame::NormalizedH).unwrap();
        let ledger = crate::integrate::energy_ledger(&traj).unwrap();
        let text = ledger_csv(&ledger);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], LEDGER_HEADER);
        assert_eq!(rows.len(), ledger.r.len() + 1);
        // Spot-check one row round-trips.
        let mid = rows[1 + ledger.r.len() / 2];
        let fields: Vec<f64> = mid.split(',').map(|f| f.parse().unwrap()).collect();
        let i = ledger.r.len() / 2;
        assert_eq!(fields[0].to_bits(), ledger.r[i].to_bits());
        assert_eq!(fields[1].to_bits(), ledger.c[i].to_bits());
    }

    #[test]
    fn sweep_rows_carry_outcomes_and_optional_fields() {
        let params = Params::new(3.0, 5.0).unwrap();
        let kappa = params.kappa;
        // Stop at r = 6: beyond that the e^{r²/4} instability of the
        // constant backward profile amplifies rounding into a real deviation.
        let mut opts = IntegrationOptions::new(1e-4, 6.0);
        opts.n_output = 300;
        let sweep = run_sweep(
            ProfileKind::Backward,
            &params,
            &[0.5 * kappa, kappa, 10.0 * kappa],
            &opts,
            false,
        )
        .unwrap();
        let text = sweep_csv(&sweep);
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(rows[0], SWEEP_HEADER);
        assert_eq!(rows.len(), 4);
        // The constant profile row: no event radius, constant flag set.
        let kappa_row: Vec<&str> = rows[2].split(',').collect();
        assert_eq!(kappa_row[1], "positive_decaying");
        assert_eq!(kappa_row[2], "");
        assert_eq!(kappa_row[7], "true");
        // The large shot leaves the positive class with an event radius.
        let big_row: Vec<&str> = rows[3].split(',').collect();
        assert_ne!(big_row[1], "positive_decaying");
        assert!(!big_row[2].is_empty());
        let radius: f64 = big_row[2].parse().unwrap();
        assert!(radius > 0.0 && radius < 60.0);
    }

    #[test]
    fn gnuplot_script_references_the_data_file() {
        let script = gnuplot_script("run/profile.csv", "forward profile");
        assert!(script.contains("run/profile.csv"));
        assert!(script.contains("forward profile"));
        assert!(script.contains("plot"));
    }
}
