use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Exponential { limit: f64, initial: f64, decay: f64 },
    Power { limit: f64, scale: f64, exponent: f64 },
    Tabulated { values: Vec<f64> },
    Staircase { base: Box<RewardCurve>, plateau: u64, jump: f64 },
}

/// A deterministic ground-truth reward function `n ↦ r(n)` for `n ≥ 1`.
///
/// Every curve is bounded in `[0, 1]` and non-decreasing. The exponential and
/// power families are also concave, so the linear extrapolation used by the
/// rising bandit is a valid upper bound for them. Staircases are deliberately
/// not concave.
///
/// Curves are validated when built; [`RewardCurve::eval`] only rejects `n = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardCurve(Shape);

impl RewardCurve {
    /// `r(n) = limit − (limit − initial) · decay^(n−1)`.
    pub fn exponential(limit: f64, initial: f64, decay: f64) -> Result<Self> {
        let ok = initial > 0.0 && initial <= limit && limit <= 1.0 && decay > 0.0 && decay < 1.0;
        if !ok {
            return Err(Error::InvalidCurve(format!(
                "exponential requires 0 < initial <= limit <= 1 and 0 < decay < 1, got limit={limit}, initial={initial}, decay={decay}"
            )));
        }
        Ok(RewardCurve(Shape::Exponential { limit, initial, decay }))
    }

    /// `r(n) = limit − scale · n^(−exponent)`.
    pub fn power(limit: f64, scale: f64, exponent: f64) -> Result<Self> {
        let ok = scale > 0.0 && exponent > 0.0 && limit <= 1.0 && limit - scale >= 0.0;
        if !ok || !exponent.is_finite() {
            return Err(Error::InvalidCurve(format!(
                "power requires scale > 0, exponent > 0 and 0 <= limit - scale, limit <= 1, got limit={limit}, scale={scale}, exponent={exponent}"
            )));
        }
        Ok(RewardCurve(Shape::Power { limit, scale, exponent }))
    }

    /// A table of `r(1), r(2), …`; the last value is held beyond the table.
    pub fn tabulated(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidCurve("tabulated curve needs at least one value".into()));
        }
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidCurve(format!("tabulated value {v} outside [0, 1]")));
        }
        if let Some(i) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::InvalidCurve(format!(
                "tabulated values decrease at position {}",
                i + 2
            )));
        }
        Ok(RewardCurve(Shape::Tabulated { values }))
    }

    /// Holds `base.eval(1)` for `plateau` pulls, then closes a fraction `jump`
    /// of the remaining gap to `base`'s limit, and repeats.
    pub fn staircase(base: RewardCurve, plateau: u64, jump: f64) -> Result<Self> {
        if plateau == 0 || !(jump > 0.0 && jump <= 1.0) {
            return Err(Error::InvalidCurve(format!(
                "staircase requires plateau >= 1 and 0 < jump <= 1, got plateau={plateau}, jump={jump}"
            )));
        }
        Ok(RewardCurve(Shape::Staircase { base: Box::new(base), plateau, jump }))
    }

    /// Reward after the `n`-th pull.
    pub fn eval(&self, n: u64) -> Result<f64> {
        if n == 0 {
            return Err(Error::Domain("reward curves are defined for n >= 1".into()));
        }
        Ok(self.eval_unchecked(n))
    }

    pub(crate) fn eval_unchecked(&self, n: u64) -> f64 {
        debug_assert!(n >= 1);
        match &self.0 {
            Shape::Exponential { limit, initial, decay } => {
                limit - (limit - initial) * pow_count(*decay, n - 1)
            }
            Shape::Power { limit, scale, exponent } => limit - scale * (n as f64).powf(-exponent),
            Shape::Tabulated { values } => {
                let idx = usize::try_from(n - 1).unwrap_or(usize::MAX).min(values.len() - 1);
                values[idx]
            }
            Shape::Staircase { base, plateau, jump } => {
                let start = base.eval_unchecked(1);
                let limit = base.limit();
                let steps = (n - 1) / plateau;
                limit - (limit - start) * pow_count(1.0 - jump, steps)
            }
        }
    }

    /// `lim_{n→∞} r(n)`.
    pub fn limit(&self) -> f64 {
        match &self.0 {
            Shape::Exponential { limit, .. } | Shape::Power { limit, .. } => *limit,
            Shape::Tabulated { values } => *values.last().expect("validated non-empty"),
            Shape::Staircase { base, .. } => base.limit(),
        }
    }

    /// True for the families whose first differences are non-increasing.
    pub fn is_concave(&self) -> bool {
        matches!(self.0, Shape::Exponential { .. } | Shape::Power { .. })
    }

    /// The same curve with every reward multiplied by `factor ∈ (0, 1]`.
    pub fn scaled(&self, factor: f64) -> Result<Self> {
        if !(factor > 0.0 && factor <= 1.0) {
            return Err(Error::Domain(format!("scale factor {factor} outside (0, 1]")));
        }
        match &self.0 {
            Shape::Exponential { limit, initial, decay } => {
                Self::exponential(limit * factor, initial * factor, *decay)
            }
            Shape::Power { limit, scale, exponent } => {
                Self::power(limit * factor, scale * factor, *exponent)
            }
            Shape::Tabulated { values } => {
                Self::tabulated(values.iter().map(|v| v * factor).collect())
            }
            Shape::Staircase { base, plateau, jump } => {
                Self::staircase(base.scaled(factor)?, *plateau, *jump)
            }
        }
    }

    /// `[r(1), …, r(horizon)]`.
    pub fn values(&self, horizon: u64) -> Vec<f64> {
        (1..=horizon).map(|n| self.eval_unchecked(n)).collect()
    }
}

fn pow_count(base: f64, exp: u64) -> f64 {
    match i32::try_from(exp) {
        Ok(e) => base.powi(e),
        Err(_) => base.powf(exp as f64),
    }
}

/// Formats a curve in the configuration-file syntax, e.g.
/// `exponential 0.9 0.5 0.5` or `staircase 7 0.6 power 0.9 0.4 1`.
impl fmt::Display for RewardCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Shape::Exponential { limit, initial, decay } => {
                write!(f, "exponential {limit} {initial} {decay}")
            }
            Shape::Power { limit, scale, exponent } => write!(f, "power {limit} {scale} {exponent}"),
            Shape::Tabulated { values } => {
                write!(f, "tabulated")?;
                for v in values {
                    write!(f, " {v}")?;
                }
                Ok(())
            }
            Shape::Staircase { base, plateau, jump } => write!(f, "staircase {plateau} {jump} {base}"),
        }
    }
}

/// Parses the syntax written by `Display`.
impl FromStr for RewardCurve {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        parse_tokens(&tokens)
    }
}

fn parse_tokens(tokens: &[&str]) -> Result<RewardCurve> {
    let number = |t: &str| {
        t.parse::<f64>()
            .map_err(|_| Error::InvalidCurve(format!("`{t}` is not a number")))
    };
    let fixed = |args: &[&str], name: &str| -> Result<[f64; 3]> {
        match args {
            [a, b, c] => Ok([number(a)?, number(b)?, number(c)?]),
            _ => Err(Error::InvalidCurve(format!("{name} takes 3 parameters, got {}", args.len()))),
        }
    };
    match tokens {
        ["exponential", args @ ..] => {
            let [limit, initial, decay] = fixed(args, "exponential")?;
            RewardCurve::exponential(limit, initial, decay)
        }
        ["power", args @ ..] => {
            let [limit, scale, exponent] = fixed(args, "power")?;
            RewardCurve::power(limit, scale, exponent)
        }
        ["tabulated", args @ ..] => {
            RewardCurve::tabulated(args.iter().map(|t| number(t)).collect::<Result<_>>()?)
        }
        ["staircase", plateau, jump, base @ ..] => {
            let plateau = plateau
                .parse::<u64>()
                .map_err(|_| Error::InvalidCurve(format!("plateau `{plateau}` is not a count")))?;
            RewardCurve::staircase(parse_tokens(base)?, plateau, number(jump)?)
        }
        [] => Err(Error::InvalidCurve("empty curve".into())),
        [kind, ..] => Err(Error::InvalidCurve(format!(
            "unknown curve `{kind}` (expected exponential, power, tabulated or staircase)"
        ))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_inverts_display() {
        for text in [
            "exponential 0.9 0.5 0.5",
            "power 0.95 0.3 1.5",
            "tabulated 0.1 0.4 0.6",
            "staircase 7 0.6 power 0.9 0.4 1",
        ] {
            let curve: RewardCurve = text.parse().unwrap();
            assert_eq!(curve.to_string(), text);
        }
        assert!("exponential 0.9 0.5".parse::<RewardCurve>().is_err());
        assert!("logistic 1 2 3".parse::<RewardCurve>().is_err());
        assert!("exponential 1.2 0.5 0.5".parse::<RewardCurve>().is_err());
    }

    #[test]
    fn exponential_closed_form() {
        let c = RewardCurve::exponential(0.9, 0.5, 0.5).unwrap();
        assert_eq!(c.eval(1).unwrap(), 0.5);
        assert!((c.eval(3).unwrap() - 0.8).abs() < 1e-15);
    }

    #[test]
    fn power_closed_form() {
        let c = RewardCurve::power(0.95, 0.5, 1.0).unwrap();
        assert!((c.eval(5).unwrap() - 0.85).abs() < 1e-15);
    }

    #[test]
    fn zero_pull_is_a_domain_error() {
        let c = RewardCurve::power(0.95, 0.5, 1.0).unwrap();
        assert!(matches!(c.eval(0), Err(Error::Domain(_))));
    }

    #[test]
    fn tabulated_holds_last_value() {
        let c = RewardCurve::tabulated(vec![0.1, 0.4, 0.5]).unwrap();
        assert_eq!(c.eval(2).unwrap(), 0.4);
        assert_eq!(c.eval(3).unwrap(), 0.5);
        assert_eq!(c.eval(1000).unwrap(), 0.5);
        assert_eq!(c.limit(), 0.5);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(RewardCurve::exponential(1.2, 0.5, 0.5).is_err());
        assert!(RewardCurve::exponential(0.9, 0.95, 0.5).is_err());
        assert!(RewardCurve::exponential(0.9, 0.5, 1.0).is_err());
        assert!(RewardCurve::exponential(0.9, 0.0, 0.5).is_err());
        assert!(RewardCurve::power(0.5, 0.6, 1.0).is_err());
        assert!(RewardCurve::power(0.9, 0.5, 0.0).is_err());
        assert!(RewardCurve::tabulated(vec![]).is_err());
        assert!(RewardCurve::tabulated(vec![0.5, 0.4]).is_err());
        assert!(RewardCurve::tabulated(vec![0.5, 1.4]).is_err());
        let base = RewardCurve::exponential(0.9, 0.3, 0.5).unwrap();
        assert!(RewardCurve::staircase(base.clone(), 0, 0.5).is_err());
        assert!(RewardCurve::staircase(base, 3, 0.0).is_err());
    }

    #[test]
    fn staircase_plateaus_and_jumps() {
        let base = RewardCurve::exponential(0.9, 0.5, 0.5).unwrap();
        let s = RewardCurve::staircase(base, 3, 0.5).unwrap();
        let v = s.values(7);
        assert_eq!(&v[..3], &[0.5, 0.5, 0.5]);
        assert!((v[3] - 0.7).abs() < 1e-15);
        assert_eq!(v[3], v[5]);
        assert!((v[6] - 0.8).abs() < 1e-15);
        assert!(!s.is_concave());
    }

    #[test]
    fn display_round_trips_through_config_syntax() {
        let base = RewardCurve::power(0.9, 0.4, 1.0).unwrap();
        let s = RewardCurve::staircase(base, 7, 0.6).unwrap();
        assert_eq!(s.to_string(), "staircase 7 0.6 power 0.9 0.4 1");
    }
}
