use std::io::Write;

use crate::bounds::{subentropy_bound_table, RelationId};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::logbase::LogBase;
use crate::mub::is_prime;
use crate::states::{epsilon_spectrum, DensityOperator};

pub const FIG1_HEADER: &str = "epsilon,Q_exact,bound_qupper,bound_ht,bound_jrw,bound_ddj";

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fig1Row {
    pub epsilon: f64,
    pub q_exact: f64,
    pub bound_qupper: f64,
    pub bound_ht: f64,
    pub bound_jrw: f64,
    pub bound_ddj: f64,
}

impl Fig1Row {
    pub fn bounds(&self) -> [f64; 4] {
        [self.bound_qupper, self.bound_ht, self.bound_jrw, self.bound_ddj]
    }
}

/// Subentropy and its four upper bounds for `rho_eps`, `eps` uniform on `[0, 1 - 1/d]`.
pub fn fig1_rows(d: usize, points: usize, base: LogBase) -> Result<Vec<Fig1Row>> {
    if !is_prime(d) {
        return Err(Error::NonPrimeDimension(d));
    }
    if points < 2 {
        return Err(Error::InvalidState(format!("need at least 2 points, got {points}")));
    }
    let eps_max = 1.0 - 1.0 / d as f64;
    (0..points)
        .map(|k| {
            let epsilon = if k + 1 == points {
                eps_max
            } else {
                eps_max * k as f64 / (points - 1) as f64
            };
            // rho_eps is diagonal in a basis containing |b>; the spectrum is all that matters.
            let rho = DensityOperator::new(ComplexMatrix::from_diagonal(&epsilon_spectrum(d, epsilon)))?;
            let table = subentropy_bound_table(&rho, base)?;
            let get = |id| table.bound(id).expect("prime d has every bound");
            Ok(Fig1Row {
                epsilon,
                q_exact: table.q_exact,
                bound_qupper: get(RelationId::QUpperMub),
                bound_ht: get(RelationId::QHt),
                bound_jrw: get(RelationId::QJrw),
                bound_ddj: get(RelationId::QDdj),
            })
        })
        .collect()
}

pub fn write_csv(rows: &[Fig1Row], out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "{FIG1_HEADER}")?;
    for r in rows {
        let cells = [
            r.epsilon,
            r.q_exact,
            r.bound_qupper,
            r.bound_ht,
            r.bound_jrw,
            r.bound_ddj,
        ];
        let line: Vec<String> = cells.iter().map(|&x| format_g12(x)).collect();
        writeln!(out, "{}", line.join(","))?;
    }
    Ok(())
}

/// Formats like C's `%.12g`.
pub fn format_g12(x: f64) -> String {
    const PRECISION: i32 = 12;
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let sci = format!("{:.*e}", (PRECISION - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= PRECISION {
        let mantissa = trim_fraction(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PRECISION - 1 - exp) as usize;
        trim_fraction(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g12_matches_printf() {
        let cases = [
            (0.0, "0"),
            (1.0, "1"),
            (0.5, "0.5"),
            (0.278652479396, "0.278652479396"),
            (1.0 / 3.0, "0.333333333333"),
            (2.0 / 3.0, "0.666666666667"),
            (123456.789, "123456.789"),
            (1e-5, "1e-05"),
            (1.5e-5, "1.5e-05"),
            (0.0001, "0.0001"),
            (-2.5e-17, "-2.5e-17"),
            (1e12, "1e+12"),
            (999999999999.5, "1e+12"),
            (99999.99999999999, "100000"),
            (-0.75, "-0.75"),
        ];
        for (x, want) in cases {
            assert_eq!(format_g12(x), want, "{x}");
        }
    }

    #[test]
    fn rows_cover_interval() {
        let rows = fig1_rows(2, 11, LogBase::BITS).unwrap();
        assert_eq!(rows.len(), 11);
        assert_eq!(rows[0].epsilon, 0.0);
        assert_eq!(rows[10].epsilon, 0.5);
        assert_eq!(rows[0].q_exact, 0.0);
        assert_eq!(rows[0].bound_ddj, 0.0);
        assert!((rows[10].q_exact - 0.278652).abs() < 1e-6);
        for r in &rows {
            assert!((r.bound_qupper - r.bound_ht).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(fig1_rows(4, 10, LogBase::BITS), Err(Error::NonPrimeDimension(4))));
        assert!(fig1_rows(3, 1, LogBase::BITS).is_err());
    }

    #[test]
    fn csv_layout() {
        let rows = fig1_rows(3, 2, LogBase::BITS).unwrap();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.split('\n').collect();
        assert_eq!(lines[0], FIG1_HEADER);
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[3], "");
        assert!(lines[1].starts_with("0,0,"));
        assert!(!text.contains(",\n") && !text.contains('\r'));
    }
}
