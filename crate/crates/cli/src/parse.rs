//! Value parsers for command-line flags.

use std::f64::consts::PI;

/// A real number, optionally a multiple of π: `1.2`, `pi`, `pi/3`,
/// `0.32pi`, `2pi/3`, `3*pi/4`, `-pi/2`.
pub fn angle(s: &str) -> Result<f64, String> {
    let t: String = s.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    if let Ok(v) = t.parse::<f64>() {
        return finite(v, s);
    }
    let (head, den) = match t.split_once('/') {
        Some((h, d)) => (h, d.parse::<f64>().map_err(|_| format!("bad denominator in `{s}`"))?),
        None => (t.as_str(), 1.0),
    };
    let coef = head
        .strip_suffix("pi")
        .or_else(|| head.strip_suffix('π'))
        .ok_or_else(|| format!("`{s}` is neither a number nor a multiple of pi"))?;
    let coef = coef.strip_suffix('*').unwrap_or(coef);
    let c = match coef {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| format!("bad coefficient in `{s}`"))?,
    };
    finite(c * PI / den, s)
}

fn finite(v: f64, s: &str) -> Result<f64, String> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

/// A parsed list of numbers. Clap would treat a bare `Vec` as a
/// multi-valued flag.
#[derive(Debug, Clone, PartialEq)]
pub struct List(pub Vec<f64>);

/// Either a comma list (`10,12,15`) or an inclusive linear grid
/// `start:stop:count`. Entries accept the [`angle`] syntax.
pub fn grid(s: &str) -> Result<List, String> {
    grid_values(s).map(List)
}

fn grid_values(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    match parts.as_slice() {
        [a, b, n] => {
            let (a, b) = (angle(a)?, angle(b)?);
            let n: usize = n.trim().parse().map_err(|_| format!("bad point count in `{s}`"))?;
            match n {
                0 => Err("a grid needs at least one point".into()),
                1 => Ok(vec![a]),
                _ => Ok((0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()),
            }
        }
        [_] => s.split(',').map(angle).collect(),
        _ => Err(format!("`{s}`: expected `a,b,c` or `start:stop:count`")),
    }
}

/// Exactly `n` comma-separated numbers.
pub fn tuple(s: &str, n: usize) -> Result<List, String> {
    let v: Vec<f64> = s.split(',').map(angle).collect::<Result<_, _>>()?;
    if v.len() == n {
        Ok(List(v))
    } else {
        Err(format!("`{s}`: expected {n} comma-separated numbers"))
    }
}
