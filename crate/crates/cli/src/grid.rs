//! Numeric values and grids written with an optional `pi` factor.
//!
//! A value is a plain number or `[coef][*]pi[/den]`, e.g. `0.3pi`, `-pi/2`,
//! `3*pi/4`. A grid is a comma-separated list of values and inclusive ranges
//! `start:stop:count`.

use crate::error::CliError;

pub fn parse_value(text: &str) -> Result<f64, CliError> {
    let bad = || CliError::Config(format!("cannot parse `{text}` as a number"));
    let s: String = text.trim().to_ascii_lowercase().split_whitespace().collect();
    if s.is_empty() {
        return Err(bad());
    }
    let value = match s.split_once("pi") {
        None => s.parse::<f64>().map_err(|_| bad())?,
        Some((before, after)) => {
            let before = before.strip_suffix('*').unwrap_or(before);
            let coef = match before {
                "" | "+" => 1.0,
                "-" => -1.0,
                c => c.parse::<f64>().map_err(|_| bad())?,
            };
            let den = match after {
                "" => 1.0,
                d => d
                    .strip_prefix('/')
                    .ok_or_else(bad)?
                    .parse::<f64>()
                    .map_err(|_| bad())?,
            };
            coef * std::f64::consts::PI / den
        }
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(bad())
    }
}

pub fn parse_grid(text: &str) -> Result<Vec<f64>, CliError> {
    let mut out = Vec::new();
    for item in text.split(',') {
        let parts: Vec<&str> = item.split(':').collect();
        match parts.as_slice() {
            [single] => out.push(parse_value(single)?),
            [start, stop, count] => {
                let (a, b) = (parse_value(start)?, parse_value(stop)?);
                let n: usize = count.trim().parse().map_err(|_| {
                    CliError::Config(format!("range `{item}` needs an integer point count"))
                })?;
                match n {
                    0 => {
                        return Err(CliError::Config(format!("range `{item}` has no points")));
                    }
                    1 => out.push(a),
                    _ => {
                        let last = (n - 1) as f64;
                        out.extend((0..n).map(|i| {
                            let t = i as f64;
                            (a * (last - t) + b * t) / last
                        }));
                    }
                }
            }
            _ => return Err(CliError::Config(format!("cannot parse grid item `{item}`"))),
        }
    }
    Ok(out)
}
