//! Double-double arithmetic: unevaluated sums hi + lo with |lo| <= ulp(hi)/2,
//! giving roughly 106 bits of mantissa — twice the f64 working precision.
//! Classic error-free transformations (two_sum, two_prod via FMA) in the
//! style of the QD library.

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

impl Dd {
    pub const ZERO: Dd = Dd { hi: 0.0, lo: 0.0 };
    pub const ONE: Dd = Dd { hi: 1.0, lo: 0.0 };

    #[inline]
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    #[inline]
    pub fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }

    #[inline]
    pub fn neg(self) -> Dd {
        Dd { hi: -self.hi, lo: -self.lo }
    }

    #[inline]
    pub fn sub(self, o: Dd) -> Dd {
        self.add(o.neg())
    }

    #[inline]
    pub fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + self.hi * o.lo + self.lo * o.hi;
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }

    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.sub(o.mul(Dd::from_f64(q1)));
        let q2 = r.hi / o.hi;
        let r = r.sub(o.mul(Dd::from_f64(q2)));
        let q3 = r.hi / o.hi;
        let (s, e) = quick_two_sum(q1, q2);
        Dd { hi: s, lo: e }.add(Dd::from_f64(q3))
    }

    /// Square root for nonnegative values (Karp's method: one Newton step on
    /// the f64 seed carried out in double-double).
    pub fn sqrt(self) -> Dd {
        if self.hi == 0.0 && self.lo == 0.0 {
            return Dd::ZERO;
        }
        debug_assert!(self.hi > 0.0, "sqrt of negative double-double");
        let x = 1.0 / self.hi.sqrt();
        let ax = self.hi * x;
        let axd = Dd::from_f64(ax);
        let err = self.sub(axd.mul(axd)).hi * (x * 0.5);
        let (hi, lo) = quick_two_sum(ax, err);
        Dd { hi, lo }
    }

    #[inline]
    pub fn abs(self) -> Dd {
        if self.hi < 0.0 || (self.hi == 0.0 && self.lo < 0.0) {
            self.neg()
        } else {
            self
        }
    }

    #[inline]
    pub fn lt(self, o: Dd) -> bool {
        self.hi < o.hi || (self.hi == o.hi && self.lo < o.lo)
    }

    #[inline]
    pub fn scale(self, s: f64) -> Dd {
        self.mul(Dd::from_f64(s))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn carries_bits_beyond_f64() {
        // 1e16 + 1 - 1e16 collapses to 0 in f64 but not in double-double.
        let big = Dd::from_f64(1e16);
        let one = Dd::ONE;
        let r = big.add(one).sub(big);
        assert_eq!(r.hi, 1.0);
        assert_eq!(r.lo, 0.0);
    }

    #[test]
    fn sqrt_squares_back() {
        for &v in &[2.0_f64, 3.0, 10.0, 0.5, 1e-8, 12345.6789] {
            let s = Dd::from_f64(v).sqrt();
            let back = s.mul(s).sub(Dd::from_f64(v));
            assert!(back.hi.abs() <= 1e-30 * v.max(1.0), "v={v}: {:?}", back);
        }
    }

    #[test]
    fn division_inverts_multiplication() {
        let a = Dd::from_f64(std::f64::consts::PI);
        let b = Dd::from_f64(std::f64::consts::E);
        let r = a.mul(b).div(b).sub(a);
        assert!(r.hi.abs() < 1e-31);
    }

    #[test]
    fn accumulated_sums_are_exact() {
        // sum of 0.1 a thousand times: double-double error ~1e-18 at worst,
        // far below the f64 error.
        let step = Dd::from_f64(0.1);
        let mut acc = Dd::ZERO;
        for _ in 0..1000 {
            acc = acc.add(step);
        }
        // 0.1 is not exactly representable; compare against 1000 * (the f64 0.1).
        let expect = Dd::from_f64(0.1).mul(Dd::from_f64(1000.0));
        let err = acc.sub(expect);
        assert!(err.hi.abs() < 1e-25);
    }
}
