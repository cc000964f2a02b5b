//! Minimal double-double arithmetic (~32 significant digits) for the few
//! alternating-series evaluations whose intermediate terms outgrow the
//! final sum by several orders of magnitude. This is compensated
//! summation carried one level further: every value is an unevaluated
//! sum hi + lo with |lo| ≤ ulp(hi)/2.

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> Dd {
    // requires |a| >= |b|
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

#[inline]
fn two_prod(a: f64, b: f64) -> Dd {
    let p = a * b;
    Dd { hi: p, lo: a.mul_add(b, -p) }
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };

    #[inline]
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// a/b carried to double-double precision.
    pub fn from_div(a: f64, b: f64) -> Dd {
        let q0 = a / b;
        let r = two_prod(q0, b);
        let rem = (a - r.hi) - r.lo;
        quick_two_sum(q0, rem / b)
    }

    #[inline]
    pub fn add(self, other: Dd) -> Dd {
        let s = two_sum(self.hi, other.hi);
        let lo = s.lo + self.lo + other.lo;
        quick_two_sum(s.hi, lo)
    }

    #[inline]
    pub fn add_f64(self, other: f64) -> Dd {
        let s = two_sum(self.hi, other);
        quick_two_sum(s.hi, s.lo + self.lo)
    }

    #[inline]
    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd { hi: -other.hi, lo: -other.lo })
    }

    #[inline]
    pub fn mul(self, other: Dd) -> Dd {
        let p = two_prod(self.hi, other.hi);
        let lo = p.lo + self.hi * other.lo + self.lo * other.hi;
        quick_two_sum(p.hi, lo)
    }

    #[inline]
    pub fn mul_f64(self, other: f64) -> Dd {
        let p = two_prod(self.hi, other);
        quick_two_sum(p.hi, p.lo + self.lo * other)
    }

    pub fn div(self, other: Dd) -> Dd {
        let q0 = self.hi / other.hi;
        let r = self.sub(other.mul_f64(q0));
        let q1 = r.hi / other.hi;
        let r2 = r.sub(other.mul_f64(q1));
        let q2 = r2.hi / other.hi;
        quick_two_sum(q0, q1).add_f64(q2)
    }

    pub fn sqrt(self) -> Dd {
        let y0 = self.hi.sqrt();
        if y0 == 0.0 {
            return Dd::ZERO;
        }
        // one Newton step in double-double
        let y = Dd::from(y0);
        let r = self.sub(y.mul(y));
        y.add_f64(r.hi / (2.0 * y0))
    }

    #[inline]
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    #[inline]
    pub fn abs(self) -> f64 {
        self.hi.abs()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn div_round_trip() {
        let third = Dd::from_div(2.0, 3.0);
        let back = third.mul_f64(3.0);
        assert!((back.to_f64() - 2.0).abs() < 1e-30);
        assert!(third.lo.abs() > 0.0);
    }

    #[test]
    fn sqrt_two_squared() {
        let r = Dd::from(2.0).sqrt();
        let sq = r.mul(r);
        assert!((sq.to_f64() - 2.0).abs() < 1e-30);
        assert!((sq.sub(Dd::from(2.0)).hi).abs() < 1e-30);
    }

    #[test]
    fn catastrophic_sum_survives() {
        let big = Dd::from(1e16);
        let s = big.add_f64(1.0).sub(big);
        assert_eq!(s.to_f64(), 1.0);
    }
}
