use std::fmt;
use std::ops::{Mul, MulAssign};

use num_complex::Complex64;

/// An element of `{0} ∪ {2^(p/2) · ω^q}` with `ω = e^(iπ/4)`.
///
/// This ring is closed under everything the affine-signature operations do
/// to scalars, which keeps simulation bit-exact.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct ExactScalar {
    zero: bool,
    p: i32,
    q: u8,
}

impl ExactScalar {
    pub const ZERO: ExactScalar = ExactScalar {
        zero: true,
        p: 0,
        q: 0,
    };
    pub const ONE: ExactScalar = ExactScalar {
        zero: false,
        p: 0,
        q: 0,
    };

    /// `2^(p/2) · ω^q`, with `q` taken mod 8.
    pub fn new(p: i32, q: i64) -> Self {
        ExactScalar {
            zero: false,
            p,
            q: q.rem_euclid(8) as u8,
        }
    }

    /// `ω^q`.
    pub fn omega(q: i64) -> Self {
        Self::new(0, q)
    }

    /// `i^k = ω^(2k)`.
    pub fn i_pow(k: i64) -> Self {
        Self::new(0, 2 * k)
    }

    /// `2^(p/2)`.
    pub fn sqrt2_pow(p: i32) -> Self {
        Self::new(p, 0)
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.zero
    }

    /// Exponent of `√2`; 0 for the zero scalar.
    #[inline]
    pub fn p(&self) -> i32 {
        self.p
    }

    /// Exponent of `ω` in `0..8`; 0 for the zero scalar.
    #[inline]
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn with_p(self, p: i32) -> Self {
        if self.zero {
            self
        } else {
            Self::new(p, self.q as i64)
        }
    }

    pub fn conj(self) -> Self {
        if self.zero {
            self
        } else {
            Self::new(self.p, -(self.q as i64))
        }
    }

    /// `|z|²`, which is `2^p` for nonzero `z`.
    pub fn norm_sqr(self) -> Self {
        if self.zero {
            self
        } else {
            Self::new(2 * self.p, 0)
        }
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self) -> Option<Self> {
        (!self.zero).then(|| Self::new(-self.p, -(self.q as i64)))
    }

    pub fn to_complex(self) -> Complex64 {
        if self.zero {
            return Complex64::new(0.0, 0.0);
        }
        let mag = 2f64.powf(self.p as f64 / 2.0);
        Complex64::from_polar(mag, std::f64::consts::FRAC_PI_4 * self.q as f64)
    }

    /// Ring form followed by a 10-decimal approximation, e.g.
    /// `2^(-1/2) * w^0  (≈ 0.7071067812)`.
    pub fn describe(self) -> String {
        format!("{self}  (≈ {})", format_complex(self.to_complex()))
    }
}

/// Formats a complex value with 10 decimals, dropping a vanishing imaginary part.
pub fn format_complex(z: Complex64) -> String {
    let clean = |v: f64| if v.abs() < 5e-11 { 0.0 } else { v };
    let (re, im) = (clean(z.re), clean(z.im));
    if im == 0.0 {
        format!("{re:.10}")
    } else if re == 0.0 {
        format!("{im:.10}i")
    } else {
        format!("{re:.10}{im:+.10}i")
    }
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::ONE
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;

    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        if self.zero || rhs.zero {
            ExactScalar::ZERO
        } else {
            ExactScalar::new(self.p + rhs.p, self.q as i64 + rhs.q as i64)
        }
    }
}

impl MulAssign for ExactScalar {
    fn mul_assign(&mut self, rhs: ExactScalar) {
        *self = *self * rhs;
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.zero {
            f.write_str("0")
        } else {
            write!(f, "2^({}/2) * w^{}", self.p, self.q)
        }
    }
}
