//! Hankel-determinant periodicity conditions.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::series::{scaled_sqrt_series, series_divide_linear, PowerSeries};
use super::CertError;
use crate::dynamics::MagicKind;

/// Value of a Cayley-type condition, or a marker that none can hold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CayleyValue {
    Value(f64),
    /// No trajectory of this system and parity is periodic, for any caustic.
    AlwaysFalse,
}

impl CayleyValue {
    pub fn value(self) -> Option<f64> {
        match self {
            CayleyValue::Value(v) => Some(v),
            CayleyValue::AlwaysFalse => None,
        }
    }
}

/// Which coefficient sequence fills the Hankel matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HankelSource {
    /// Coefficients of the square root of the cubic.
    Sqrt,
    /// Coefficients of the square root divided by `b − x`.
    Quotient,
}

/// Shape of the matrix `[S_{first+i+j}]_{i,j<size}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HankelShape {
    pub source: HankelSource,
    pub first: usize,
    pub size: usize,
}

impl HankelShape {
    /// Highest coefficient index referenced.
    pub fn last(&self) -> usize {
        self.first + 2 * (self.size - 1)
    }
}

/// Matrix shape of the condition, `None` when it can never hold.
pub fn hankel_shape(
    system: MagicKind,
    n: usize,
    hyperbola: bool,
) -> Result<Option<HankelShape>, CertError> {
    if n.is_multiple_of(2) {
        if n < 4 {
            return Err(CertError::InvalidPeriod { n });
        }
        return Ok(Some(HankelShape {
            source: HankelSource::Sqrt,
            first: 3,
            size: n / 2 - 1,
        }));
    }
    if n < 3 {
        return Err(CertError::InvalidPeriod { n });
    }
    let size = (n - 1) / 2;
    match system {
        MagicKind::FlipLong if hyperbola => Ok(Some(HankelShape {
            source: HankelSource::Quotient,
            first: 2,
            size,
        })),
        MagicKind::FlipLong | MagicKind::FlipShort => Ok(None),
        MagicKind::HalfTurn => Ok(Some(HankelShape {
            source: HankelSource::Sqrt,
            first: 2,
            size,
        })),
        MagicKind::Identity => Err(CertError::UnsupportedParity { system, n }),
    }
}

fn hankel_det(s: &PowerSeries, first: usize, size: usize) -> f64 {
    DMatrix::from_fn(size, size, |i, j| s.get(first + i + j)).determinant()
}

/// Cayley-type determinant for `system` and period `n` at caustic `β`.
///
/// Computed from the series in `ξ = x/a`, so the value differs from the
/// unscaled determinant by a positive factor (a power of `a`) and has the
/// same zeros.
pub fn cayley_det(
    system: MagicKind,
    n: usize,
    a: f64,
    b: f64,
    beta: f64,
) -> Result<CayleyValue, CertError> {
    let Some(shape) = hankel_shape(system, n, beta > b)? else {
        return Ok(CayleyValue::AlwaysFalse);
    };
    let s = scaled_sqrt_series(a, b, beta, shape.last() + 1)?;
    let s = match shape.source {
        HankelSource::Sqrt => s,
        HankelSource::Quotient => series_divide_linear(&s, b / a),
    };
    Ok(CayleyValue::Value(hankel_det(&s, shape.first, shape.size)))
}
