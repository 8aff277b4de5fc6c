use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Exact nonnegative rational used for algorithm parameters, so that
/// `floor(f * n)` and `ceil(f * n)` never suffer rounding error.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fraction {
    num: u64,
    den: u64,
}

impl Fraction {
    pub const fn new(num: u64, den: u64) -> Self {
        assert!(den > 0, "zero denominator");
        Fraction { num, den }
    }

    pub fn num(&self) -> u64 {
        self.num
    }

    pub fn den(&self) -> u64 {
        self.den
    }

    pub fn floor_mul(&self, n: usize) -> usize {
        (n as u128 * self.num as u128 / self.den as u128) as usize
    }

    pub fn ceil_mul(&self, n: usize) -> usize {
        (n as u128 * self.num as u128).div_ceil(self.den as u128) as usize
    }

    pub fn as_f64(&self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Strictly between 0 and 1.
    pub fn is_proper(&self) -> bool {
        self.num > 0 && self.num < self.den
    }

    /// `floor(n^self)`, tolerant of floating-point error at exact powers.
    pub fn floor_pow(&self, n: usize) -> usize {
        let x = (n as f64).powf(self.as_f64());
        let r = x.round();
        if (x - r).abs() <= 1e-9 * r.max(1.0) {
            r as usize
        } else {
            x.floor() as usize
        }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Fraction {
    type Err = String;

    /// Accepts `a/b` or a plain nonnegative integer.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|e| format!("bad fraction {s:?}: {e}"))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let (num, den) = (parse(n)?, parse(d)?);
                if den == 0 {
                    return Err(format!("bad fraction {s:?}: zero denominator"));
                }
                Ok(Fraction { num, den })
            }
            None => Ok(Fraction {
                num: parse(s)?,
                den: 1,
            }),
        }
    }
}
