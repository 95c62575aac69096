//! Rational functions in one variable, kept in canonical reduced form.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use super::poly::Poly;
use super::qint;
use crate::error::{Error, Result};

/// A quotient of polynomials with gcd 1 and monic denominator.
///
/// The canonical form makes structural equality semantic equality.  The zero
/// function is stored as `0 / 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

/// Laurent expansion of a rational function around infinity.
///
/// Represents `sum_k coeffs[k] * z^(leading_exponent - k)`; the first
/// coefficient is nonzero.  The zero function has `leading_exponent: None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InfinitySeries {
    pub leading_exponent: Option<i64>,
    pub coeffs: Vec<BigRational>,
}

impl InfinitySeries {
    /// The coefficient of `z^exponent`, or `None` when the expansion was not
    /// computed to that depth.
    pub fn coefficient_at(&self, exponent: i64) -> Option<BigRational> {
        let lead = match self.leading_exponent {
            None => return Some(BigRational::zero()),
            Some(l) => l,
        };
        if exponent > lead {
            return Some(BigRational::zero());
        }
        let idx = (lead - exponent) as usize;
        self.coeffs.get(idx).cloned()
    }
}

impl RatFunc {
    /// Builds `num / den` in canonical form.
    ///
    /// # Errors
    /// Domain error if `den` is the zero polynomial.
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if den.is_zero() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RatFunc {
                num: Poly::zero(),
                den: Poly::one(),
            });
        }
        let g = num.gcd(&den);
        let (num, r1) = num.div_rem(&g);
        debug_assert!(r1.is_zero());
        let (den, r2) = den.div_rem(&g);
        debug_assert!(r2.is_zero());
        let lead_inv = BigRational::one() / den.leading_coeff().unwrap();
        Ok(RatFunc {
            num: num.scale(&lead_inv),
            den: den.scale(&lead_inv),
        })
    }

    pub fn zero() -> RatFunc {
        RatFunc {
            num: Poly::zero(),
            den: Poly::one(),
        }
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        RatFunc {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: BigRational) -> RatFunc {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// The reciprocal of a product of linear factors `(z + c)`.
    pub fn inverse_linear_offsets(offsets: &[BigRational]) -> RatFunc {
        RatFunc::new(Poly::one(), Poly::from_linear_offsets(offsets))
            .expect("nonzero denominator by construction")
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn scale(&self, s: &BigRational) -> RatFunc {
        if s.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(s),
            den: self.den.clone(),
        }
    }

    /// Exact evaluation at `x`.
    ///
    /// # Errors
    /// Pole error when the reduced denominator vanishes at `x`; by canonicity
    /// this is a genuine pole, not a removable singularity.
    pub fn eval_at(&self, x: &BigRational) -> Result<BigRational> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::Pole(x.clone()));
        }
        Ok(self.num.eval(x) / d)
    }

    /// Exact evaluation at the integer `x`.
    pub fn eval_at_int(&self, x: i64) -> Result<BigRational> {
        self.eval_at(&qint(x))
    }

    /// The composed function `f(z + c)`.
    pub fn translate(&self, c: &BigRational) -> RatFunc {
        RatFunc::new(self.num.translate(c), self.den.translate(c))
            .expect("translation preserves nonzero denominators")
    }

    /// The composed function `f(z + 1)`.
    pub fn shift_up(&self) -> RatFunc {
        self.translate(&qint(1))
    }

    /// The composed function `f(z - 1)`.
    pub fn shift_down(&self) -> RatFunc {
        self.translate(&qint(-1))
    }

    /// First `order` Laurent coefficients of `f(z)` as `z` goes to infinity.
    ///
    /// The expansion starts at `z^(deg num - deg den)` with the ratio of the
    /// leading coefficients; successive coefficients multiply decreasing
    /// powers of `z`.
    pub fn series_at_infinity(&self, order: usize) -> InfinitySeries {
        if self.is_zero() {
            return InfinitySeries {
                leading_exponent: None,
                coeffs: vec![BigRational::zero(); order],
            };
        }
        let p = self.num.degree().unwrap();
        let q = self.den.degree().unwrap();
        // Reverse both polynomials into power series in t = 1/z and divide.
        let nrev = |k: usize| {
            if k <= p {
                self.num.coeff(p - k)
            } else {
                BigRational::zero()
            }
        };
        let drev = |k: usize| {
            if k <= q {
                self.den.coeff(q - k)
            } else {
                BigRational::zero()
            }
        };
        let d0 = drev(0);
        let mut coeffs: Vec<BigRational> = Vec::with_capacity(order);
        for k in 0..order {
            let mut c = nrev(k);
            for j in 1..=k {
                c -= drev(j) * &coeffs[k - j];
            }
            coeffs.push(c / &d0);
        }
        InfinitySeries {
            leading_exponent: Some(p as i64 - q as i64),
            coeffs,
        }
    }

    /// Numerator and denominator scaled to integer coefficients.
    ///
    /// The pair `(a, b)` satisfies `f = a / b` with integer-coefficient
    /// polynomials whose contents share no factor, `b` having positive
    /// leading coefficient.  Coefficients ascend by degree.
    pub fn integer_pair(&self) -> (Vec<BigInt>, Vec<BigInt>) {
        if self.is_zero() {
            return (vec![BigInt::zero()], vec![BigInt::one()]);
        }
        let (ncont, nprim) = self.num.integer_primitive();
        let (dcont, dprim) = self.den.integer_primitive();
        let scalar = ncont / dcont;
        let a: Vec<BigInt> = nprim.iter().map(|c| c * scalar.numer()).collect();
        let b: Vec<BigInt> = dprim.iter().map(|c| c * scalar.denom()).collect();
        (a, b)
    }

    /// Renders with `z` as the variable; see [`RatFunc::render`].
    pub fn display_factored(&self) -> String {
        self.render("z")
    }

    /// Canonical display with a caller-chosen variable name.
    ///
    /// Coefficients are cleared to integers.  The denominator is shown as a
    /// product of linear factors when all its roots are integers in the
    /// search window `[-root_window, root_window]` with `root_window = 12`;
    /// factors with nonnegative offsets come first in ascending offset order,
    /// then negative offsets in descending order.  Otherwise the denominator
    /// is shown expanded.
    pub fn render(&self, var: &str) -> String {
        const ROOT_WINDOW: i64 = 12;
        if self.is_zero() {
            return "0".to_string();
        }
        let (a, b) = self.integer_pair();
        let num_poly = int_poly(&a);
        let num_str = num_poly.render(var);
        if b.len() == 1 && b[0].is_one() {
            return num_str;
        }
        let num_wrapped = if num_poly.term_count() > 1 {
            format!("({num_str})")
        } else {
            num_str
        };
        let den_str = render_den(&b, var, ROOT_WINDOW);
        format!("{num_wrapped}/{den_str}")
    }
}

fn int_poly(coeffs: &[BigInt]) -> Poly {
    Poly::new(
        coeffs
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect(),
    )
}

/// Renders an integer-coefficient denominator, factored when possible.
fn render_den(coeffs: &[BigInt], var: &str, root_window: i64) -> String {
    let poly = int_poly(coeffs);
    let mut rest = poly.clone();
    let mut factors: Vec<(i64, usize)> = Vec::new();
    for root in -root_window..=root_window {
        let r = qint(root);
        let linear = Poly::new(vec![-&r, qint(1)]);
        while !rest.is_zero() && rest.eval(&r).is_zero() {
            let (q, rem) = rest.div_rem(&linear);
            debug_assert!(rem.is_zero());
            rest = q;
            match factors.iter_mut().find(|(o, _)| *o == -root) {
                Some((_, m)) => *m += 1,
                None => factors.push((-root, 1)),
            }
        }
    }
    if rest.degree() != Some(0) {
        // Irreducible remainder: fall back to the expanded form.
        let s = poly.render(var);
        return if poly.term_count() > 1 {
            format!("({s})")
        } else {
            s
        };
    }
    let constant = rest.coeff(0);
    debug_assert!(constant.is_integer() && constant.is_positive());
    let mut atoms: Vec<String> = Vec::new();
    if !constant.is_one() {
        atoms.push(constant.numer().to_string());
    }
    // Nonnegative offsets ascending, then negative offsets descending.
    factors.sort_by_key(|&(offset, _)| {
        if offset >= 0 {
            (0, offset)
        } else {
            (1, -offset)
        }
    });
    for (offset, mult) in factors {
        let base = match offset.cmp(&0) {
            std::cmp::Ordering::Equal => var.to_string(),
            std::cmp::Ordering::Greater => format!("({var}+{offset})"),
            std::cmp::Ordering::Less => format!("({var}-{})", -offset),
        };
        if mult > 1 {
            atoms.push(format!("{base}^{mult}"));
        } else {
            atoms.push(base);
        }
    }
    let joined = atoms.join("*");
    if atoms.len() > 1 {
        format!("({joined})")
    } else {
        joined
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render("z"))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, other: &RatFunc) -> RatFunc {
        let num = &(&self.num * &other.den) + &(&other.num * &self.den);
        let den = &self.den * &other.den;
        RatFunc::new(num, den).expect("nonzero denominator product")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, other: &RatFunc) -> RatFunc {
        self + &(-other)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, other: &RatFunc) -> RatFunc {
        let num = &self.num * &other.num;
        let den = &self.den * &other.den;
        RatFunc::new(num, den).expect("nonzero denominator product")
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, other: &RatFunc) -> RatFunc {
        if other.is_zero() {
            panic!("division by the zero rational function");
        }
        let num = &self.num * &other.den;
        let den = &self.den * &other.num;
        RatFunc::new(num, den).expect("nonzero denominator")
    }
}

impl Add for RatFunc {
    type Output = RatFunc;
    fn add(self, other: RatFunc) -> RatFunc {
        &self + &other
    }
}

impl Sub for RatFunc {
    type Output = RatFunc;
    fn sub(self, other: RatFunc) -> RatFunc {
        &self - &other
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Mul for RatFunc {
    type Output = RatFunc;
    fn mul(self, other: RatFunc) -> RatFunc {
        &self * &other
    }
}

impl Div for RatFunc {
    type Output = RatFunc;
    fn div(self, other: RatFunc) -> RatFunc {
        &self / &other
    }
}

#[cfg(test)]
mod tests {
    use super::super::qrat;
    use super::*;

    fn over(num: &[i64], den: &[i64]) -> RatFunc {
        RatFunc::new(Poly::from_i64(num), Poly::from_i64(den)).unwrap()
    }

    #[test]
    fn canonical_form_reduces_and_normalizes() {
        // (2z^2 - 2) / (2z - 2) = z + 1
        let f = over(&[-2, 0, 2], &[-2, 2]);
        assert_eq!(f, RatFunc::from_poly(Poly::from_i64(&[1, 1])));
        // denominator made monic: 3 / (3z) = 1/z
        assert_eq!(over(&[3], &[0, 3]), over(&[1], &[0, 1]));
        assert!(RatFunc::new(Poly::one(), Poly::zero()).is_err());
    }

    #[test]
    fn sum_with_cancellation() {
        // 2/((z+1)(z-1)) - 2/(z(z+1)(z-1)) = 2/(z(z+1))
        let a = RatFunc::new(Poly::from_i64(&[2]), Poly::from_i64(&[-1, 0, 1])).unwrap();
        let b = RatFunc::new(Poly::from_i64(&[-2]), Poly::from_i64(&[0, -1, 0, 1])).unwrap();
        let sum = &a + &b;
        assert_eq!(sum, over(&[2], &[0, 1, 1]));
    }

    #[test]
    fn product_and_quotient_invert() {
        let a = over(&[1, 3], &[0, 1, 1]);
        let b = over(&[-5, 1, 7], &[2, 1]);
        let p = &a * &b;
        assert_eq!(&p / &b, a);
        assert_eq!(&p / &a, b);
    }

    #[test]
    fn eval_and_pole_detection() {
        let f = over(&[1], &[0, 1]); // 1/z
        assert_eq!(f.eval_at_int(4).unwrap(), qrat(1, 4));
        assert_eq!(f.eval_at(&qrat(1, 2)).unwrap(), qint(2));
        assert!(matches!(f.eval_at_int(0), Err(Error::Pole(_))));
        // removable singularity disappears on reduction
        let g = over(&[0, 1], &[0, 1, 1]); // z/(z(z+1)) = 1/(z+1)
        assert_eq!(g.eval_at_int(0).unwrap(), qint(1));
    }

    #[test]
    fn translate_shifts_argument() {
        let f = over(&[1], &[0, 1]); // 1/z
        assert_eq!(f.shift_up(), over(&[1], &[1, 1])); // 1/(z+1)
        assert_eq!(f.shift_up().shift_down(), f);
    }

    #[test]
    fn series_at_infinity_basics() {
        // 1/z: exponent -1, coefficients [1, 0, 0]
        let f = over(&[1], &[0, 1]);
        let s = f.series_at_infinity(3);
        assert_eq!(s.leading_exponent, Some(-1));
        assert_eq!(s.coeffs, vec![qint(1), qint(0), qint(0)]);
        // (z+1)/(z(z+2)(z-1)): expansion z^-2 + 0*z^-3 + ...
        let g = over(&[1, 1], &[0, -2, 1, 1]);
        let s = g.series_at_infinity(2);
        assert_eq!(s.leading_exponent, Some(-2));
        assert_eq!(s.coeffs[0], qint(1));
        assert_eq!(s.coeffs[1], qint(0));
        assert_eq!(s.coefficient_at(-1), Some(qint(0)));
        assert_eq!(s.coefficient_at(-2), Some(qint(1)));
        assert_eq!(s.coefficient_at(-5), None);
    }

    #[test]
    fn series_of_polynomial_and_zero() {
        // z^2 + 3: exponent 2, coefficients [1, 0, 3]
        let p = RatFunc::from_poly(Poly::from_i64(&[3, 0, 1]));
        let s = p.series_at_infinity(3);
        assert_eq!(s.leading_exponent, Some(2));
        assert_eq!(s.coeffs, vec![qint(1), qint(0), qint(3)]);
        let z = RatFunc::zero().series_at_infinity(2);
        assert_eq!(z.leading_exponent, None);
        assert_eq!(z.coefficient_at(-7), Some(qint(0)));
    }

    #[test]
    fn series_matches_evaluation() {
        // partial sums of the expansion approach the function value
        let f = over(&[3, 1, 5], &[0, -2, 0, 0, 1]);
        let s = f.series_at_infinity(12);
        let x = qint(100);
        let mut approx = BigRational::zero();
        let lead = s.leading_exponent.unwrap();
        for (k, c) in s.coeffs.iter().enumerate() {
            let e = lead - k as i64;
            let power = if e >= 0 {
                num::pow::pow(x.clone(), e as usize)
            } else {
                qint(1) / num::pow::pow(x.clone(), (-e) as usize)
            };
            approx += c * power;
        }
        let err = (f.eval_at(&x).unwrap() - approx).abs();
        assert!(err < qrat(1, 1_000_000_000_000));
    }

    #[test]
    fn render_factored_denominators() {
        assert_eq!(over(&[1], &[0, 1]).display_factored(), "1/z");
        assert_eq!(
            over(&[-1], &[0, -2, 1, 1]).display_factored(),
            "-1/(z*(z+2)*(z-1))"
        );
        assert_eq!(
            over(&[1, 1], &[0, -2, 1, 1]).display_factored(),
            "(z+1)/(z*(z+2)*(z-1))"
        );
        // z(z+2)(z+4) expands to z^3 + 6z^2 + 8z
        assert_eq!(
            over(&[48], &[0, 8, 6, 1]).display_factored(),
            "48/(z*(z+2)*(z+4))"
        );
        assert_eq!(over(&[1], &[0, 0, 1]).display_factored(), "1/z^2");
        assert_eq!(over(&[1], &[2, 1]).display_factored(), "1/(z+2)");
        assert_eq!(over(&[0], &[1]).display_factored(), "0");
        assert_eq!(over(&[5, 1], &[1]).display_factored(), "z+5");
    }

    #[test]
    fn render_with_constants_and_irreducibles() {
        // 1/(3z) keeps the integer constant in the denominator
        let f = RatFunc::new(Poly::from_i64(&[1]), Poly::from_i64(&[0, 3])).unwrap();
        assert_eq!(f.display_factored(), "1/(3*z)");
        // irreducible denominator stays expanded
        let g = over(&[1], &[1, 1, 1]);
        assert_eq!(g.display_factored(), "1/(z^2+z+1)");
        // repeated factor uses an exponent
        let h = over(&[1], &[1, 2, 1]);
        assert_eq!(h.display_factored(), "1/(z+1)^2");
        // alternative variable name
        let m = over(&[2], &[1, 1]);
        assert_eq!(m.render("N"), "2/(N+1)");
    }

    #[test]
    fn integer_pair_clears_denominators() {
        // (1/2) / (z + 1/3) = 3 / (6z + 2) as integer polynomials... reduced:
        // canonical monic den z + 1/3, num 1/2; integer pair (3, 6z + 2)
        let f = RatFunc::new(
            Poly::new(vec![qrat(1, 2)]),
            Poly::new(vec![qrat(1, 3), qint(1)]),
        )
        .unwrap();
        let (a, b) = f.integer_pair();
        assert_eq!(a, vec![BigInt::from(3)]);
        assert_eq!(b, vec![BigInt::from(2), BigInt::from(6)]);
    }
}
