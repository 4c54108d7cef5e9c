//! CSV output for tradeoff curves.

use std::io::Write;
use std::path::Path;

use decompq_core::randsphere::TradeoffPoint;
use tempfile::NamedTempFile;

use crate::error::{CliError, Result};

pub const CSV_HEADER: &str = "param,delta_h_bits,info_bits";
const SIGNIFICANT_DIGITS: usize = 12;

/// `printf("%.12g")`: shortest of fixed and scientific notation at 12
/// significant digits, trailing zeros removed.
pub fn format_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("exponent is an integer");
    if exp < -4 || exp >= SIGNIFICANT_DIGITS as i32 {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mantissa), exp.abs())
    } else {
        let decimals = (SIGNIFICANT_DIGITS as i32 - 1 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn curve_csv(points: &[TradeoffPoint]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{}\n",
            format_g(p.param),
            format_g(p.delta_h_bits),
            format_g(p.info_bits)
        ));
    }
    out
}

/// Strictly monotone `delta_h_bits` with `info_bits` moving the same way.
pub fn check_monotone(points: &[TradeoffPoint]) -> Result<()> {
    for w in points.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        if !(b.delta_h_bits > a.delta_h_bits && b.info_bits >= a.info_bits) {
            return Err(CliError::Invariant(format!(
                "curve is not monotone between param {} and {}",
                format_g(a.param),
                format_g(b.param)
            )));
        }
    }
    Ok(())
}

/// Writes through a temporary file in the target directory, so a failed run
/// leaves no partial output.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = NamedTempFile::new_in(dir).map_err(|e| CliError::io(path, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// Fails early when the output directory cannot take a new file.
pub fn check_writable(path: &Path) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    NamedTempFile::new_in(dir).map(drop).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_printf_g() {
        assert_eq!(format_g(0.0), "0");
        assert_eq!(format_g(1.0), "1");
        assert_eq!(format_g(-2.5), "-2.5");
        assert_eq!(format_g(std::f64::consts::PI), "3.14159265359");
        assert_eq!(format_g(45.2972035), "45.2972035");
        assert_eq!(format_g(1e-5), "1e-05");
        assert_eq!(format_g(1.234e-7), "1.234e-07");
        assert_eq!(format_g(0.0001), "0.0001");
        assert_eq!(format_g(123456789012.0), "123456789012");
        assert_eq!(format_g(1234567890123.0), "1.23456789012e+12");
        assert_eq!(format_g(0.1 + 0.2), "0.3");
    }

    #[test]
    fn monotonicity() {
        let p = |d: f64, i: f64| TradeoffPoint {
            param: 0.0,
            delta_h_bits: d,
            info_bits: i,
        };
        assert!(check_monotone(&[p(0.0, 0.0), p(0.1, 1.0)]).is_ok());
        assert!(check_monotone(&[p(0.1, 0.0), p(0.1, 1.0)]).is_err());
        assert!(check_monotone(&[p(0.0, 1.0), p(0.1, 0.5)]).is_err());
    }

    #[test]
    fn csv_layout() {
        let pts = [TradeoffPoint {
            param: 1.5,
            delta_h_bits: 0.0,
            info_bits: 2.0,
        }];
        assert_eq!(curve_csv(&pts), "param,delta_h_bits,info_bits\n1.5,0,2\n");
    }
}
