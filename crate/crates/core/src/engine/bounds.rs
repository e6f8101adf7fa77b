use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// A bound as a function of the game depth `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BoundFn {
    /// 2^n
    Pow2,
    /// n
    Linear,
    Const(u64),
}

impl BoundFn {
    pub fn eval(self, n: u32) -> u64 {
        match self {
            BoundFn::Pow2 => 1u64 << n.min(62),
            BoundFn::Linear => u64::from(n),
            BoundFn::Const(c) => c,
        }
    }
}

impl fmt::Display for BoundFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundFn::Pow2 => f.write_str("2^n"),
            BoundFn::Linear => f.write_str("n"),
            BoundFn::Const(c) => write!(f, "{c}"),
        }
    }
}

/// Positive rational `num/den`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Scale {
    pub num: u64,
    pub den: u64,
}

impl Scale {
    pub const ONE: Scale = Scale { num: 1, den: 1 };

    pub fn new(num: u64, den: u64) -> Option<Scale> {
        (num > 0 && den > 0).then_some(Scale { num, den })
    }
}

impl fmt::Display for Scale {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid scale '{0}': expected a positive integer, fraction a/b, or decimal")]
pub struct ScaleParseError(String);

impl FromStr for Scale {
    type Err = ScaleParseError;

    fn from_str(s: &str) -> Result<Scale, ScaleParseError> {
        let err = || ScaleParseError(s.to_string());
        let s = s.trim();
        let (num, den) = if let Some((a, b)) = s.split_once('/') {
            (
                a.trim().parse::<u64>().map_err(|_| err())?,
                b.trim().parse::<u64>().map_err(|_| err())?,
            )
        } else if let Some((int, frac)) = s.split_once('.') {
            if frac.len() > 9 || !frac.chars().all(|c| c.is_ascii_digit()) {
                return Err(err());
            }
            let den = 10u64.pow(frac.len() as u32);
            let int: u64 = if int.is_empty() {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            let frac: u64 = if frac.is_empty() {
                0
            } else {
                frac.parse().map_err(|_| err())?
            };
            (int * den + frac, den)
        } else {
            (s.parse::<u64>().map_err(|_| err())?, 1)
        };
        Scale::new(num, den).ok_or_else(err)
    }
}

/// Caps on the finite enumerations used by the engine.
///
/// The theory algebra stops each enumeration at the first repeated theory,
/// which is exact; these values only cap that search. Every time a cap is
/// reached before a repeat the engine counts a bound hit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BoundsConfig {
    pub copy: BoundFn,
    pub unroll: BoundFn,
    pub cnf_exp: BoundFn,
    pub cnf_coeff: BoundFn,
    pub scale: Scale,
}

impl Default for BoundsConfig {
    fn default() -> Self {
        BoundsConfig {
            copy: BoundFn::Pow2,
            unroll: BoundFn::Pow2,
            cnf_exp: BoundFn::Linear,
            cnf_coeff: BoundFn::Pow2,
            scale: Scale::ONE,
        }
    }
}

impl BoundsConfig {
    pub fn scaled(scale: Scale) -> BoundsConfig {
        BoundsConfig {
            scale,
            ..BoundsConfig::default()
        }
    }

    fn apply(&self, f: BoundFn, n: u32) -> u64 {
        let raw = u128::from(f.eval(n)) * u128::from(self.scale.num);
        let den = u128::from(self.scale.den);
        let v = raw.div_ceil(den);
        u64::try_from(v).unwrap_or(u64::MAX).max(1)
    }

    pub fn copy_bound(&self, n: u32) -> u64 {
        self.apply(self.copy, n)
    }

    pub fn unroll_bound(&self, n: u32) -> u64 {
        self.apply(self.unroll, n)
    }

    pub fn cnf_exp_bound(&self, n: u32) -> u64 {
        self.apply(self.cnf_exp, n)
    }

    pub fn cnf_coeff_bound(&self, n: u32) -> u64 {
        self.apply(self.cnf_coeff, n)
    }

    /// Short stable digest identifying this configuration.
    pub fn digest(&self) -> String {
        let text = format!(
            "copy={};unroll={};cnf_exp={};cnf_coeff={};scale={}",
            self.copy, self.unroll, self.cnf_exp, self.cnf_coeff, self.scale
        );
        let hash = Sha256::digest(text.as_bytes());
        hex::encode(&hash[..8])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_bounds() {
        let cfg = BoundsConfig::default();
        assert_eq!(cfg.copy_bound(3), 8);
        assert_eq!(cfg.cnf_exp_bound(3), 3);
        assert_eq!(cfg.cnf_exp_bound(0), 1);
    }

    #[test]
    fn scaling_rounds_up() {
        let cfg = BoundsConfig::scaled("3/2".parse().unwrap());
        assert_eq!(cfg.copy_bound(1), 3);
        assert_eq!(cfg.cnf_exp_bound(3), 5);
        let cfg = BoundsConfig::scaled("0.5".parse().unwrap());
        assert_eq!(cfg.copy_bound(0), 1);
    }

    #[test]
    fn scale_parsing() {
        assert_eq!("2".parse::<Scale>().unwrap(), Scale { num: 2, den: 1 });
        assert_eq!("1.25".parse::<Scale>().unwrap(), Scale { num: 125, den: 100 });
        assert!("0".parse::<Scale>().is_err());
        assert!("x".parse::<Scale>().is_err());
    }

    #[test]
    fn digest_depends_on_scale() {
        let a = BoundsConfig::default().digest();
        let b = BoundsConfig::scaled(Scale { num: 2, den: 1 }).digest();
        assert_ne!(a, b);
        assert_eq!(a, BoundsConfig::default().digest());
        assert_eq!(a.len(), 16);
    }
}
