use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A per-iteration value sequence (temperature or pump amplitude) stretched
/// over a given number of iterations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Schedule {
    /// Straight line from `start` at the first iteration to `end` at the last.
    Linear { start: f64, end: f64 },
    /// Constant ratio between consecutive iterations; both ends must be positive.
    Geometric { start: f64, end: f64 },
    /// Piecewise-constant levels, each held for an equal share of the iterations.
    Steps { levels: Vec<f64> },
}

impl Schedule {
    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Linear { start, end } => {
                if !start.is_finite() || !end.is_finite() {
                    return Err(Error::param("linear schedule ends must be finite"));
                }
            }
            Schedule::Geometric { start, end } => {
                if !(*start > 0.0 && *end > 0.0 && start.is_finite() && end.is_finite()) {
                    return Err(Error::param("geometric schedule ends must be positive"));
                }
            }
            Schedule::Steps { levels } => {
                if levels.is_empty() || levels.iter().any(|v| !v.is_finite()) {
                    return Err(Error::param(
                        "step schedule needs at least one finite level",
                    ));
                }
            }
        }
        Ok(())
    }

    /// Value at iteration `k` of `iters`.
    pub fn at(&self, k: usize, iters: usize) -> f64 {
        let frac = if iters > 1 {
            k as f64 / (iters - 1) as f64
        } else {
            0.0
        };
        match self {
            Schedule::Linear { start, end } => start + (end - start) * frac,
            Schedule::Geometric { start, end } => start * (end / start).powf(frac),
            Schedule::Steps { levels } => {
                let idx = (k * levels.len()) / iters.max(1);
                levels[idx.min(levels.len() - 1)]
            }
        }
    }
}

/// Text form `linear:START,END`, `geometric:START,END` or `steps:L1,L2,...`.
impl FromStr for Schedule {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let (kind, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::param(format!("schedule {text:?} lacks a kind prefix")))?;
        let values = rest
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::param(format!("bad schedule value {v:?}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        let pair = |values: &[f64]| match values {
            [a, b] => Ok((*a, *b)),
            _ => Err(Error::param(format!("{kind} schedule needs two values"))),
        };
        let schedule = match kind.trim() {
            "linear" => {
                let (start, end) = pair(&values)?;
                Schedule::Linear { start, end }
            }
            "geometric" => {
                let (start, end) = pair(&values)?;
                Schedule::Geometric { start, end }
            }
            "steps" => Schedule::Steps { levels: values },
            other => return Err(Error::param(format!("unknown schedule kind {other:?}"))),
        };
        schedule.validate()?;
        Ok(schedule)
    }
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Linear { start, end } => write!(f, "linear:{start:?},{end:?}"),
            Schedule::Geometric { start, end } => write!(f, "geometric:{start:?},{end:?}"),
            Schedule::Steps { levels } => {
                f.write_str("steps:")?;
                for (k, v) in levels.iter().enumerate() {
                    if k > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v:?}")?;
                }
                Ok(())
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints() {
        let lin = Schedule::Linear {
            start: 2.0,
            end: 0.0,
        };
        assert_eq!(lin.at(0, 5), 2.0);
        assert_eq!(lin.at(4, 5), 0.0);
        assert_eq!(lin.at(2, 5), 1.0);
        let geo = Schedule::Geometric {
            start: 1.0,
            end: 0.01,
        };
        assert_eq!(geo.at(0, 3), 1.0);
        assert!((geo.at(1, 3) - 0.1).abs() < 1e-12);
        assert!((geo.at(2, 3) - 0.01).abs() < 1e-12);
        assert_eq!(lin.at(0, 1), 2.0);
    }

    #[test]
    fn steps_are_stretched() {
        let s = Schedule::Steps {
            levels: vec![3.0, 2.0, 1.0],
        };
        let seq: Vec<f64> = (0..6).map(|k| s.at(k, 6)).collect();
        assert_eq!(seq, vec![3.0, 3.0, 2.0, 2.0, 1.0, 1.0]);
        assert_eq!(s.at(0, 1), 3.0);
    }

    #[test]
    fn validation() {
        assert!(Schedule::Geometric {
            start: 0.0,
            end: 1.0
        }
        .validate()
        .is_err());
        assert!(Schedule::Steps { levels: vec![] }.validate().is_err());
        assert!(Schedule::Linear {
            start: f64::NAN,
            end: 1.0
        }
        .validate()
        .is_err());
    }

    #[test]
    fn text_form_round_trips() {
        for text in ["linear:-1.0,1.0", "geometric:2.0,0.01", "steps:1.0,0.5,0.1"] {
            let s: Schedule = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert_eq!(
            "steps: 3, 1".parse::<Schedule>().unwrap(),
            Schedule::Steps {
                levels: vec![3.0, 1.0]
            }
        );
        assert!("linear:1".parse::<Schedule>().is_err());
        assert!("cubic:1,2".parse::<Schedule>().is_err());
        assert!("1,2".parse::<Schedule>().is_err());
        assert!("geometric:0,1".parse::<Schedule>().is_err());
    }
}
