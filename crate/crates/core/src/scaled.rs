//! Complex numbers stored as exp(log_scale)·mantissa, for evaluating at e^{sξ+iν}
//! with large s.

use num_complex::Complex64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scaled {
    pub log_scale: f64,
    pub mant: Complex64,
}

impl Scaled {
    pub fn new(log_scale: f64, mant: Complex64) -> Self {
        Scaled { log_scale, mant }.normalized()
    }

    pub fn zero() -> Self {
        Scaled { log_scale: f64::NEG_INFINITY, mant: Complex64::new(0.0, 0.0) }
    }

    pub fn from_complex(z: Complex64) -> Self {
        Scaled::new(0.0, z)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.norm() == 0.0 || self.log_scale == f64::NEG_INFINITY
    }

    fn normalized(self) -> Self {
        let r = self.mant.norm();
        if r == 0.0 || !r.is_finite() || self.log_scale == f64::NEG_INFINITY {
            if r.is_finite() {
                return Scaled::zero();
            }
            return self;
        }
        let l = r.ln();
        Scaled { log_scale: self.log_scale + l, mant: self.mant / r }
    }

    /// log |value|; -inf for zero.
    pub fn ln_abs(&self) -> f64 {
        if self.is_zero() {
            f64::NEG_INFINITY
        } else {
            self.log_scale + self.mant.norm().ln()
        }
    }

    pub fn arg(&self) -> f64 {
        self.mant.arg()
    }

    pub fn to_complex(&self) -> Complex64 {
        if self.is_zero() {
            return Complex64::new(0.0, 0.0);
        }
        self.mant * self.log_scale.exp()
    }

    pub fn mul(&self, o: &Scaled) -> Scaled {
        if self.is_zero() || o.is_zero() {
            return Scaled::zero();
        }
        Scaled::new(self.log_scale + o.log_scale, self.mant * o.mant)
    }

    pub fn div(&self, o: &Scaled) -> Option<Scaled> {
        if o.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Scaled::zero());
        }
        Some(Scaled::new(self.log_scale - o.log_scale, self.mant / o.mant))
    }

    pub fn scale(&self, c: Complex64) -> Scaled {
        if self.is_zero() {
            return *self;
        }
        Scaled::new(self.log_scale, self.mant * c)
    }

    pub fn add(&self, o: &Scaled) -> Scaled {
        if self.is_zero() {
            return *o;
        }
        if o.is_zero() {
            return *self;
        }
        let m = self.log_scale.max(o.log_scale);
        let z = self.mant * (self.log_scale - m).exp() + o.mant * (o.log_scale - m).exp();
        Scaled::new(m, z)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn survives_overflow_range() {
        let a = Scaled::new(900.0, Complex64::new(1.0, 1.0));
        let b = Scaled::new(-900.0, Complex64::new(2.0, 0.0));
        let p = a.mul(&b);
        assert!((p.to_complex() - Complex64::new(2.0, 2.0)).norm() < 1e-12);
        let s = a.add(&a.scale(Complex64::new(-1.0, 0.0)));
        assert!(s.is_zero() || s.ln_abs() < 880.0);
    }
}
