use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Base of the logarithm used for entropic quantities.
///
/// Everything entropic is computed in nats and converted once at the end.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogBase(f64);

impl LogBase {
    pub const BITS: LogBase = LogBase(2.0);
    pub const NATS: LogBase = LogBase(std::f64::consts::E);
    pub const DITS: LogBase = LogBase(10.0);

    /// Returns `None` unless `base > 1`.
    pub fn new(base: f64) -> Option<Self> {
        (base.is_finite() && base > 1.0).then_some(LogBase(base))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Converts a quantity measured in nats into this base.
    pub fn from_nats(self, nats: f64) -> f64 {
        if self == Self::NATS {
            nats
        } else {
            nats / self.0.ln()
        }
    }

    /// `log_base(x)`
    pub fn log(self, x: f64) -> f64 {
        self.from_nats(x.ln())
    }
}

impl Default for LogBase {
    fn default() -> Self {
        Self::BITS
    }
}

impl fmt::Display for LogBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Self::NATS {
            write!(f, "e")
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl FromStr for LogBase {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "2" => Ok(Self::BITS),
            "e" => Ok(Self::NATS),
            "10" => Ok(Self::DITS),
            other => Err(format!("unsupported log base '{other}' (expected 2, e or 10)")),
        }
    }
}
