//! Forward-mode dual numbers over the complex field.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::params::C64;

/// Arithmetic shared by plain and dual complex numbers.
pub trait Scalar:
    Copy
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<C64, Output = Self>
    + Sub<C64, Output = Self>
    + Mul<C64, Output = Self>
{
    fn constant(z: C64) -> Self;
    fn value(self) -> C64;

    fn real(x: f64) -> Self {
        Self::constant(C64::new(x, 0.0))
    }

    fn powi(self, n: u32) -> Self {
        let mut acc = Self::real(1.0);
        let mut base = self;
        let mut k = n;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            k >>= 1;
        }
        acc
    }
}

impl Scalar for C64 {
    fn constant(z: C64) -> Self {
        z
    }
    fn value(self) -> C64 {
        self
    }
}

/// `value + eps * derivative` with `eps^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dual {
    pub re: C64,
    pub eps: C64,
}

impl Dual {
    pub fn variable(z: C64) -> Self {
        Dual {
            re: z,
            eps: C64::new(1.0, 0.0),
        }
    }
}

impl Scalar for Dual {
    fn constant(z: C64) -> Self {
        Dual {
            re: z,
            eps: C64::new(0.0, 0.0),
        }
    }
    fn value(self) -> C64 {
        self.re
    }
}

impl Add for Dual {
    type Output = Dual;
    fn add(self, o: Dual) -> Dual {
        Dual {
            re: self.re + o.re,
            eps: self.eps + o.eps,
        }
    }
}

impl Sub for Dual {
    type Output = Dual;
    fn sub(self, o: Dual) -> Dual {
        Dual {
            re: self.re - o.re,
            eps: self.eps - o.eps,
        }
    }
}

impl Mul for Dual {
    type Output = Dual;
    fn mul(self, o: Dual) -> Dual {
        Dual {
            re: self.re * o.re,
            eps: self.re * o.eps + self.eps * o.re,
        }
    }
}

impl Div for Dual {
    type Output = Dual;
    fn div(self, o: Dual) -> Dual {
        let q = self.re / o.re;
        Dual {
            re: q,
            eps: (self.eps - q * o.eps) / o.re,
        }
    }
}

impl Neg for Dual {
    type Output = Dual;
    fn neg(self) -> Dual {
        Dual {
            re: -self.re,
            eps: -self.eps,
        }
    }
}

impl Add<C64> for Dual {
    type Output = Dual;
    fn add(self, o: C64) -> Dual {
        Dual { re: self.re + o, ..self }
    }
}

impl Sub<C64> for Dual {
    type Output = Dual;
    fn sub(self, o: C64) -> Dual {
        Dual { re: self.re - o, ..self }
    }
}

impl Mul<C64> for Dual {
    type Output = Dual;
    fn mul(self, o: C64) -> Dual {
        Dual {
            re: self.re * o,
            eps: self.eps * o,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn derivative_of_rational_function() {
        // f(z) = z^3 / (z + 2),  f'(z) = (2 z^3 + 6 z^2) / (z + 2)^2
        let z = C64::new(0.4, -0.7);
        let two = C64::new(2.0, 0.0);
        let d = Dual::variable(z);
        let f = d.powi(3) / (d + two);
        let expected = (z * z * z * 2.0 + z * z * 6.0) / ((z + two) * (z + two));
        assert!((f.eps - expected).norm() < 1e-14);
        assert!((f.re - z * z * z / (z + two)).norm() < 1e-15);
    }
}
