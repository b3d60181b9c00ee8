use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arbitrary-precision rational, always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn rat_int(value: i64) -> Rational {
    Rational::from_integer(BigInt::from(value))
}

pub fn rational_to_f64(x: &Rational) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // Values too large for direct conversion; go through the quotient.
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

/// Closest rational to `x` with denominator at most `max_denominator`.
///
/// Walks the continued-fraction expansion of the exact binary value of `x`
/// and picks the better of the last convergent and the best semiconvergent,
/// which is the closest fraction under the bound. Non-finite input maps to 0.
pub fn rationalize(x: f64, max_denominator: u64) -> Rational {
    assert!(max_denominator >= 1, "max_denominator must be at least 1");
    let Some(exact) = Rational::from_float(x) else {
        return Rational::zero();
    };
    limit_denominator(&exact, &BigInt::from(max_denominator))
}

pub fn limit_denominator(x: &Rational, max_denominator: &BigInt) -> Rational {
    if x.denom() <= max_denominator {
        return x.clone();
    }
    let negative = x.is_negative();
    let target = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (BigInt::zero(), BigInt::one(), BigInt::one(), BigInt::zero());
    let mut n = target.numer().clone();
    let mut d = target.denom().clone();
    loop {
        let a = n.div_floor(&d);
        let q2 = &q0 + &a * &q1;
        if &q2 > max_denominator {
            break;
        }
        let p2 = &p0 + &a * &p1;
        p0 = std::mem::replace(&mut p1, p2);
        q0 = std::mem::replace(&mut q1, q2);
        let r = &n - &a * &d;
        n = std::mem::replace(&mut d, r);
        if d.is_zero() {
            break;
        }
    }
    let k = (max_denominator - &q0).div_floor(&q1);
    let semi = Rational::new(&p0 + &k * &p1, &q0 + &k * &q1);
    let conv = Rational::new(p1, q1);
    let best = if (&conv - &target).abs() <= (&semi - &target).abs() { conv } else { semi };
    if negative {
        -best
    } else {
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_values() {
        assert_eq!(rationalize(0.5, 10), rat(1, 2));
        assert_eq!(rationalize(0.333334, 100), rat(1, 3));
        assert_eq!(rationalize(-0.25, 3), rat(-1, 3));
        assert_eq!(rationalize(3.0, 1), rat_int(3));
        assert_eq!(rationalize(f64::NAN, 5), rat_int(0));
    }

    #[test]
    fn matches_exhaustive_scan() {
        let x = 0.7071067_f64;
        let exact = Rational::from_float(x).unwrap();
        let mut best: Option<Rational> = None;
        for b in 1..=50i64 {
            for a in 0..=b {
                let cand = rat(a, b);
                let better = match &best {
                    None => true,
                    Some(cur) => (&cand - &exact).abs() < (cur - &exact).abs(),
                };
                if better {
                    best = Some(cand);
                }
            }
        }
        // exhaustive scan lands on 29/41
        assert_eq!(best.unwrap(), rat(29, 41));
        assert_eq!(rationalize(x, 50), rat(29, 41));
    }
}
