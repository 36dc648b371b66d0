//! Test-function mini-language.
//!
//! ```text
//! gn:<n>                        the cut-off angle function g_n
//! bump:<center>:<width>[:<amp>] smooth bump on the line, half-width <width>
//! fourier:a0,a1,b1,a2,b2,...    a0 + Σ a_k cos kθ + b_k sin kθ on the circle
//! ```
//!
//! A `fourier` function must vanish at the point at infinity; its vanishing
//! order is detected from the coefficients.

use std::fmt;
use std::str::FromStr;

use chiral_core::fnspace::{gn_family, CircleFourier, LineBump, LineObject};

/// Highest vanishing order probed for `fourier` specs.
const MAX_DETECTED_ORDER: u32 = 8;

#[derive(Clone, Debug, PartialEq)]
pub enum FunctionSpec {
    Gn(u32),
    Bump {
        center: f64,
        width: f64,
        amplitude: f64,
    },
    Fourier(Vec<f64>),
}

#[derive(Debug, thiserror::Error)]
pub enum SpecError {
    #[error("unknown function kind `{0}` (expected gn, bump or fourier)")]
    UnknownKind(String),
    #[error("malformed function spec `{0}`")]
    Malformed(String),
    #[error("invalid number `{0}`")]
    Number(String),
    #[error(transparent)]
    Core(#[from] chiral_core::Error),
    #[error("{0}")]
    Unsupported(String),
}

fn number(s: &str) -> Result<f64, SpecError> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| SpecError::Number(s.to_string()))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(SpecError::Number(s.to_string()))
    }
}

impl FromStr for FunctionSpec {
    type Err = SpecError;

    fn from_str(s: &str) -> Result<Self, SpecError> {
        let (kind, rest) = s
            .split_once(':')
            .ok_or_else(|| SpecError::Malformed(s.to_string()))?;
        match kind {
            "gn" => {
                let n: u32 = rest
                    .trim()
                    .parse()
                    .map_err(|_| SpecError::Number(rest.to_string()))?;
                if n == 0 {
                    return Err(SpecError::Malformed(s.to_string()));
                }
                Ok(FunctionSpec::Gn(n))
            }
            "bump" => {
                let parts: Vec<&str> = rest.split(':').collect();
                if !(2..=3).contains(&parts.len()) {
                    return Err(SpecError::Malformed(s.to_string()));
                }
                let amplitude = match parts.get(2) {
                    Some(a) => number(a)?,
                    None => 1.0,
                };
                Ok(FunctionSpec::Bump {
                    center: number(parts[0])?,
                    width: number(parts[1])?,
                    amplitude,
                })
            }
            "fourier" => {
                let coeffs = rest.split(',').map(number).collect::<Result<Vec<_>, _>>()?;
                Ok(FunctionSpec::Fourier(coeffs))
            }
            other => Err(SpecError::UnknownKind(other.to_string())),
        }
    }
}

impl fmt::Display for FunctionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctionSpec::Gn(n) => write!(f, "gn:{n}"),
            FunctionSpec::Bump {
                center,
                width,
                amplitude,
            } => write!(f, "bump:{center}:{width}:{amplitude}"),
            FunctionSpec::Fourier(c) => {
                let list: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "fourier:{}", list.join(","))
            }
        }
    }
}

impl FunctionSpec {
    fn trig(coeffs: &[f64]) -> CircleFourier {
        let pairs: Vec<(f64, f64)> = coeffs[1..]
            .chunks(2)
            .map(|c| (c[0], c.get(1).copied().unwrap_or(0.0)))
            .collect();
        CircleFourier::from_trig(coeffs[0], &pairs)
    }

    /// The spec as a test function (weight 0).
    pub fn function(&self) -> Result<LineObject, SpecError> {
        match self {
            FunctionSpec::Gn(n) => Ok(LineObject::function(gn_family(*n)?)),
            FunctionSpec::Bump {
                center,
                width,
                amplitude,
            } => Ok(LineObject::function(LineBump::new(
                *center, *width, *amplitude,
            )?)),
            FunctionSpec::Fourier(c) => {
                let f = LineObject::function(Self::trig(c));
                let order = (0..=MAX_DETECTED_ORDER)
                    .rev()
                    .find(|&k| f.clone().with_vanishing_order(k).is_ok())
                    .unwrap_or(0);
                Ok(f.with_vanishing_order(order)?)
            }
        }
    }

    /// The spec as a vector field `h(θ)∂_θ`; only `fourier` specs qualify.
    pub fn vector_field(&self) -> Result<LineObject, SpecError> {
        match self {
            FunctionSpec::Fourier(c) => {
                let h = Self::trig(c);
                let order = (0..=MAX_DETECTED_ORDER)
                    .rev()
                    .find(|&k| LineObject::vector_field(h.clone(), k).is_ok())
                    .unwrap_or(0);
                Ok(LineObject::vector_field(h, order)?)
            }
            other => Err(SpecError::Unsupported(format!(
                "vector fields must be given as fourier specs, got `{other}`"
            ))),
        }
    }
}
