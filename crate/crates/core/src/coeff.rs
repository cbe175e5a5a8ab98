use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::Rational64;
use num_traits::{ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// A segment coefficient: exact rational for integer inputs, float otherwise.
///
/// Mixed arithmetic degrades to `Approx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coeff {
    Exact(Rational64),
    Approx(f64),
}

impl Coeff {
    pub fn zero(exact: bool) -> Coeff {
        if exact {
            Coeff::Exact(Rational64::zero())
        } else {
            Coeff::Approx(0.0)
        }
    }

    /// Lift an entry value. Integral values become exact when `exact` is set.
    pub fn from_value(v: f64, exact: bool) -> Coeff {
        if exact && v.fract() == 0.0 && v.abs() < (1u64 << 53) as f64 {
            Coeff::Exact(Rational64::from_integer(v as i64))
        } else {
            Coeff::Approx(v)
        }
    }

    pub fn integer(v: i64, exact: bool) -> Coeff {
        if exact {
            Coeff::Exact(Rational64::from_integer(v))
        } else {
            Coeff::Approx(v as f64)
        }
    }

    pub fn to_f64(self) -> f64 {
        match self {
            Coeff::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Coeff::Approx(v) => v,
        }
    }

    pub fn is_exact(self) -> bool {
        matches!(self, Coeff::Exact(_))
    }

    pub fn as_rational(self) -> Option<Rational64> {
        match self {
            Coeff::Exact(r) => Some(r),
            Coeff::Approx(_) => None,
        }
    }

    pub fn is_zero(self) -> bool {
        match self {
            Coeff::Exact(r) => r.is_zero(),
            Coeff::Approx(v) => v == 0.0,
        }
    }

    pub fn is_negative(self) -> bool {
        match self {
            Coeff::Exact(r) => r < Rational64::zero(),
            Coeff::Approx(v) => v < 0.0,
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Coeff {
            type Output = Coeff;

            fn $method(self, rhs: Coeff) -> Coeff {
                match (self, rhs) {
                    (Coeff::Exact(a), Coeff::Exact(b)) => Coeff::Exact(a.$method(b)),
                    (a, b) => Coeff::Approx(a.to_f64().$method(b.to_f64())),
                }
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for Coeff {
    type Output = Coeff;

    fn neg(self) -> Coeff {
        match self {
            Coeff::Exact(a) => Coeff::Exact(-a),
            Coeff::Approx(v) => Coeff::Approx(-v),
        }
    }
}

impl fmt::Display for Coeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coeff::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Coeff::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Coeff::Approx(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Coeff {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}
