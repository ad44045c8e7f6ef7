//! Parsing of comma-separated probability vectors.

use std::fmt;

use passive_battery::{parse_rational, DiagonalState, QubitBattery, Scalar};

/// Inputs whose sum is off by at most this much are renormalised.
pub const RENORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Malformed(pub String);

impl fmt::Display for Malformed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn number(text: &str) -> Result<f64, Malformed> {
    let text = text.trim();
    let value = match text.parse::<f64>() {
        Ok(v) => v,
        Err(_) => parse_rational(text)
            .map(|r| r.to_f64_lossy())
            .ok_or_else(|| Malformed(format!("`{text}` is not a number")))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Malformed(format!("`{text}` is not finite")))
    }
}

/// Reads `a,b,c` as a probability vector, rescaling sums within
/// [`RENORMALIZATION_TOLERANCE`] of one.
pub fn probabilities(text: &str) -> Result<Vec<f64>, Malformed> {
    let values = text.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
    if let Some((i, v)) = values.iter().enumerate().find(|(_, &v)| v < 0.0) {
        return Err(Malformed(format!("entry {i} of `{text}` is negative ({v})")));
    }
    let total: f64 = values.iter().sum();
    if (total - 1.0).abs() > RENORMALIZATION_TOLERANCE {
        return Err(Malformed(format!("`{text}` sums to {total}, not 1")));
    }
    Ok(values.into_iter().map(|v| v / total).collect())
}

pub fn state(text: &str) -> Result<DiagonalState<f64>, Malformed> {
    let q = probabilities(text)?;
    DiagonalState::on_ladder(q).map_err(|e| Malformed(format!("`{text}`: {e}")))
}

pub fn battery(text: &str, gap: f64) -> Result<QubitBattery<f64>, Malformed> {
    let p = probabilities(text)?;
    if p.len() != 2 {
        return Err(Malformed(format!("battery `{text}` must have two entries")));
    }
    QubitBattery::with_gap(p[0], p[1], gap).map_err(|e| Malformed(format!("`{text}`: {e}")))
}

pub fn scalar(text: &str) -> Result<f64, Malformed> {
    number(text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn renormalises_small_drift() {
        let q = probabilities("0.5, 0.3, 0.2000000001").unwrap();
        assert!((q.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert_eq!(probabilities("1/3,1/3,1/3").unwrap().len(), 3);
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(probabilities("0.5,0.4").is_err());
        assert!(probabilities("1.1,-0.1").is_err());
        assert!(probabilities("0.5,x").is_err());
        assert!(probabilities("").is_err());
        assert!(battery("0.2,0.3,0.5", 1.0).is_err());
    }
}
