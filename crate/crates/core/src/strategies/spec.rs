//! Textual strategy descriptions, `name[:key=value]*`, used on the command
//! line and in output headers. Portfolios are comma-separated lists.

use std::fmt;
use std::str::FromStr;

use super::{
    AlwaysTop, CrossingFollower, GoodBoxNavigator, GreedyMax, GreedyMin, MultiscaleChaser, Player1,
    Player2, StrategyError, ZeroPathTrap,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum P1Spec {
    AlwaysTop,
    /// Window half-width, initial half-height and cap; defaults follow the
    /// horizon.
    ZeroTrap {
        width: Option<u32>,
        height: Option<u32>,
        max_height: Option<u32>,
    },
    Greedy,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum P2Spec {
    /// Box half-height (default twice the horizon) and optional fixed
    /// half-width.
    Follower { height: Option<u32>, width: Option<u32> },
    Multiscale { sigma: f64 },
    GoodBox { n: u32, sigma: f64 },
    Greedy,
}

pub const DEFAULT_SIGMA: f64 = 0.75;

type Params<'a> = Vec<(&'a str, &'a str)>;

fn split(s: &str) -> Result<(&str, Params<'_>), StrategyError> {
    let mut parts = s.trim().split(':');
    let name = parts.next().unwrap_or_default();
    let params = parts
        .map(|kv| {
            kv.split_once('=').ok_or_else(|| StrategyError::BadParameter {
                name: name.to_string(),
                reason: format!("expected key=value, got `{kv}`"),
            })
        })
        .collect::<Result<_, _>>()?;
    Ok((name, params))
}

fn parse_value<T: FromStr>(name: &str, key: &str, value: &str) -> Result<T, StrategyError> {
    value.parse().map_err(|_| StrategyError::BadParameter {
        name: name.to_string(),
        reason: format!("invalid value `{value}` for `{key}`"),
    })
}

fn unknown_key(name: &str, key: &str) -> StrategyError {
    StrategyError::BadParameter {
        name: name.to_string(),
        reason: format!("unknown parameter `{key}`"),
    }
}

fn positive(name: &str, key: &str, v: u32) -> Result<u32, StrategyError> {
    if v == 0 {
        Err(StrategyError::BadParameter {
            name: name.to_string(),
            reason: format!("`{key}` must be positive"),
        })
    } else {
        Ok(v)
    }
}

fn sigma_in_range(name: &str, sigma: f64) -> Result<f64, StrategyError> {
    if sigma > 0.0 && sigma < 1.0 {
        Ok(sigma)
    } else {
        Err(StrategyError::BadParameter {
            name: name.to_string(),
            reason: format!("sigma must lie in (0, 1), got {sigma}"),
        })
    }
}

impl FromStr for P1Spec {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = split(s)?;
        match name {
            "always_top" | "top" => match params.first() {
                Some((k, _)) => Err(unknown_key(name, k)),
                None => Ok(P1Spec::AlwaysTop),
            },
            "greedy" => match params.first() {
                Some((k, _)) => Err(unknown_key(name, k)),
                None => Ok(P1Spec::Greedy),
            },
            "zero_trap" => {
                let (mut width, mut height, mut max_height) = (None, None, None);
                for (k, v) in params {
                    let slot = match k {
                        "width" => &mut width,
                        "height" => &mut height,
                        "max_height" => &mut max_height,
                        _ => return Err(unknown_key(name, k)),
                    };
                    *slot = Some(positive(name, k, parse_value(name, k, v)?)?);
                }
                Ok(P1Spec::ZeroTrap {
                    width,
                    height,
                    max_height,
                })
            }
            _ => Err(StrategyError::UnknownStrategy(name.to_string())),
        }
    }
}

impl fmt::Display for P1Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P1Spec::AlwaysTop => write!(f, "always_top"),
            P1Spec::Greedy => write!(f, "greedy"),
            P1Spec::ZeroTrap {
                width,
                height,
                max_height,
            } => {
                write!(f, "zero_trap")?;
                for (k, v) in [("width", width), ("height", height), ("max_height", max_height)] {
                    if let Some(v) = v {
                        write!(f, ":{k}={v}")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl P1Spec {
    pub fn build(&self, horizon: u64) -> Box<dyn Player1> {
        match *self {
            P1Spec::AlwaysTop => Box::new(AlwaysTop),
            P1Spec::Greedy => Box::new(GreedyMin),
            P1Spec::ZeroTrap {
                width,
                height,
                max_height,
            } => {
                let default = ZeroPathTrap::for_horizon(horizon);
                let (w, h, m) = default.dimensions();
                let h = height.unwrap_or(h);
                Box::new(ZeroPathTrap::new(
                    width.unwrap_or(w),
                    h,
                    max_height.unwrap_or(m.max(h)),
                ))
            }
        }
    }
}

impl FromStr for P2Spec {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, params) = split(s)?;
        match name {
            "greedy" => match params.first() {
                Some((k, _)) => Err(unknown_key(name, k)),
                None => Ok(P2Spec::Greedy),
            },
            "follower" => {
                let (mut height, mut width) = (None, None);
                for (k, v) in params {
                    let slot = match k {
                        "height" => &mut height,
                        "width" => &mut width,
                        _ => return Err(unknown_key(name, k)),
                    };
                    *slot = Some(positive(name, k, parse_value(name, k, v)?)?);
                }
                Ok(P2Spec::Follower { height, width })
            }
            "multiscale" => {
                let mut sigma = DEFAULT_SIGMA;
                for (k, v) in params {
                    match k {
                        "sigma" => sigma = sigma_in_range(name, parse_value(name, k, v)?)?,
                        _ => return Err(unknown_key(name, k)),
                    }
                }
                Ok(P2Spec::Multiscale { sigma })
            }
            "goodbox" => {
                let (mut n, mut sigma) = (None, DEFAULT_SIGMA);
                for (k, v) in params {
                    match k {
                        "n" => n = Some(parse_value(name, k, v)?),
                        "sigma" => sigma = sigma_in_range(name, parse_value(name, k, v)?)?,
                        _ => return Err(unknown_key(name, k)),
                    }
                }
                let n: u32 = n.ok_or_else(|| StrategyError::BadParameter {
                    name: name.to_string(),
                    reason: "`n` is required".into(),
                })?;
                if n < 2 {
                    return Err(StrategyError::BadParameter {
                        name: name.to_string(),
                        reason: "`n` must be at least 2".into(),
                    });
                }
                Ok(P2Spec::GoodBox { n, sigma })
            }
            _ => Err(StrategyError::UnknownStrategy(name.to_string())),
        }
    }
}

impl fmt::Display for P2Spec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            P2Spec::Greedy => write!(f, "greedy"),
            P2Spec::Follower { height, width } => {
                write!(f, "follower")?;
                for (k, v) in [("height", height), ("width", width)] {
                    if let Some(v) = v {
                        write!(f, ":{k}={v}")?;
                    }
                }
                Ok(())
            }
            P2Spec::Multiscale { sigma } => write!(f, "multiscale:sigma={sigma}"),
            P2Spec::GoodBox { n, sigma } => write!(f, "goodbox:n={n}:sigma={sigma}"),
        }
    }
}

impl P2Spec {
    pub fn build(&self, horizon: u64) -> Box<dyn Player2> {
        match *self {
            P2Spec::Greedy => Box::new(GreedyMax),
            P2Spec::Follower { height, width } => {
                let h = height.unwrap_or_else(|| u32::try_from(2 * horizon.max(1)).unwrap_or(u32::MAX));
                let f = CrossingFollower::new(h);
                Box::new(match width {
                    Some(w) => f.with_half_width(w),
                    None => f,
                })
            }
            P2Spec::Multiscale { sigma } => Box::new(MultiscaleChaser::new(sigma, horizon)),
            P2Spec::GoodBox { n, sigma } => Box::new(GoodBoxNavigator::new(n, sigma)),
        }
    }
}

/// A non-empty list of strategy descriptions.
#[derive(Debug, Clone, PartialEq)]
pub struct Portfolio<S>(pub Vec<S>);

impl<S: FromStr<Err = StrategyError>> FromStr for Portfolio<S> {
    type Err = StrategyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let items = s
            .split(',')
            .filter(|t| !t.trim().is_empty())
            .map(str::parse)
            .collect::<Result<Vec<S>, _>>()?;
        if items.is_empty() {
            return Err(StrategyError::UnknownStrategy(s.to_string()));
        }
        Ok(Portfolio(items))
    }
}

impl<S: fmt::Display> fmt::Display for Portfolio<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

impl Portfolio<P1Spec> {
    /// Every Player 1 construction with default parameters.
    pub fn default_p1() -> Self {
        Portfolio(vec![
            P1Spec::AlwaysTop,
            P1Spec::ZeroTrap {
                width: None,
                height: None,
                max_height: None,
            },
            P1Spec::Greedy,
        ])
    }
}

impl Portfolio<P2Spec> {
    /// Every Player 2 construction; the good-box scale follows the horizon.
    pub fn default_p2(horizon: u64) -> Self {
        let n = ((horizon as f64).sqrt().ceil() as u32).max(4);
        Portfolio(vec![
            P2Spec::Follower {
                height: None,
                width: None,
            },
            P2Spec::Multiscale { sigma: DEFAULT_SIGMA },
            P2Spec::GoodBox {
                n,
                sigma: DEFAULT_SIGMA,
            },
            P2Spec::Greedy,
        ])
    }
}
