//! Shell-friendly grid syntax: comma-separated items, each either a single
//! value or an inclusive range `lo:hi:step`.

use std::fmt;
use std::str::FromStr;

const MAX_POINTS: usize = 1_000_000;

/// Real-valued grid, e.g. `0.1:2.0:0.1` or `0.05,0.2,0.8`.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

/// Integer grid, e.g. `1000,2000` or `500:4000:500`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeList(pub Vec<usize>);

/// Drops the representation noise that accumulates in `lo + i * step`.
fn tidy(x: f64) -> f64 {
    format!("{x:.12e}").parse().unwrap_or(x)
}

fn parse_f64(item: &str) -> Result<f64, String> {
    let v: f64 = item
        .trim()
        .parse()
        .map_err(|_| format!("`{}` is not a number", item.trim()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{}` is not finite", item.trim()))
    }
}

fn parse_float_range(lo: &str, hi: &str, step: &str) -> Result<Vec<f64>, String> {
    let (lo, hi, step) = (parse_f64(lo)?, parse_f64(hi)?, parse_f64(step)?);
    if step <= 0.0 {
        return Err(format!("range step must be positive, got {step}"));
    }
    if hi < lo {
        return Err(format!("range end {hi} is below its start {lo}"));
    }
    let span = (hi - lo) / step;
    if span >= MAX_POINTS as f64 {
        return Err("range has too many points".into());
    }
    let count = (span + 1e-9).floor() as usize + 1;
    Ok((0..count).map(|i| tidy(lo + i as f64 * step)).collect())
}

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let mut out = Vec::new();
        for item in s.split(',') {
            let parts: Vec<&str> = item.split(':').collect();
            match parts.as_slice() {
                [v] => out.push(parse_f64(v)?),
                [lo, hi, step] => out.extend(parse_float_range(lo, hi, step)?),
                _ => return Err(format!("`{item}` is neither a value nor lo:hi:step")),
            }
        }
        if out.len() > MAX_POINTS {
            return Err("grid has too many points".into());
        }
        Ok(FloatList(out))
    }
}

impl FromStr for SizeList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let int = |v: &str| -> Result<usize, String> {
            v.trim()
                .parse()
                .map_err(|_| format!("`{}` is not a non-negative integer", v.trim()))
        };
        let mut out = Vec::new();
        for item in s.split(',') {
            let parts: Vec<&str> = item.split(':').collect();
            match parts.as_slice() {
                [v] => out.push(int(v)?),
                [lo, hi, step] => {
                    let (lo, hi, step) = (int(lo)?, int(hi)?, int(step)?);
                    if step == 0 {
                        return Err("range step must be positive".into());
                    }
                    if hi < lo {
                        return Err(format!("range end {hi} is below its start {lo}"));
                    }
                    if (hi - lo) / step >= MAX_POINTS {
                        return Err("range has too many points".into());
                    }
                    out.extend((lo..=hi).step_by(step));
                }
                _ => return Err(format!("`{item}` is neither a value nor lo:hi:step")),
            }
        }
        Ok(SizeList(out))
    }
}

impl fmt::Display for FloatList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&items.join(","))
    }
}

impl fmt::Display for SizeList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        f.write_str(&items.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_gamma_points() {
        let g: FloatList = "0.1:2.0:0.1".parse().unwrap();
        assert_eq!(g.0.len(), 20);
        assert_eq!(g.0[0], 0.1);
        assert_eq!(g.0[2], 0.3);
        assert_eq!(g.0[19], 2.0);
    }

    #[test]
    fn mixed_items() {
        let g: FloatList = "0.05, 0.2,1:2:0.5".parse().unwrap();
        assert_eq!(g.0, vec![0.05, 0.2, 1.0, 1.5, 2.0]);
        let n: SizeList = "1000,2000:4000:1000".parse().unwrap();
        assert_eq!(n.0, vec![1000, 2000, 3000, 4000]);
    }

    #[test]
    fn rejects_garbage() {
        for bad in ["", "a", "1:2", "2:1:0.1", "0:1:0", "1:2:3:4", "nan", "inf"] {
            assert!(bad.parse::<FloatList>().is_err(), "{bad}");
        }
        for bad in ["", "-1", "1.5", "5:1:1", "1:5:0"] {
            assert!(bad.parse::<SizeList>().is_err(), "{bad}");
        }
    }
}
