use num_complex::Complex64;

use super::PrecisionPolicy;
use crate::error::{Error, Result};

/// Appell's `F₃(a,a′,b,b′;c;x,y) = Σ (a)_m(a′)_n(b)_m(b′)_n / ((c)_{m+n} m! n!) x^m y^n`
/// inside the polydisc `|x|, |y| < 1`. Rows in `m` are summed with the same
/// three-small-terms rule as the Gauss series; `max_terms` caps each index.
pub fn f3(
    a: Complex64,
    a1: Complex64,
    b: Complex64,
    b1: Complex64,
    c: Complex64,
    x: Complex64,
    y: Complex64,
    policy: &PrecisionPolicy,
) -> Result<Complex64> {
    if x.norm() >= 1.0 || y.norm() >= 1.0 {
        return Err(Error::Domain(format!("F3 arguments ({x}, {y}) outside the unit polydisc")));
    }
    let one = Complex64::new(1.0, 0.0);
    let mut row_head = one; // (a)_m (b)_m x^m / ((c)_m m!)
    let mut total = Complex64::new(0.0, 0.0);
    let mut quiet_rows = 0;
    for m in 0..policy.max_terms {
        let mf = m as f64;
        let mut term = row_head;
        let mut row = term;
        let mut quiet = 0;
        let mut converged = false;
        for n in 0..policy.max_terms {
            let nf = n as f64;
            let cm = c + mf + nf;
            if cm == Complex64::new(0.0, 0.0) {
                return Err(Error::Pole(format!("(c)_{{m+n}} vanishes at c = {c}")));
            }
            term = term * (a1 + nf) * (b1 + nf) * y / ((nf + 1.0) * cm);
            row += term;
            quiet = if term.norm() <= policy.target * row.norm().max(f64::MIN_POSITIVE) { quiet + 1 } else { 0 };
            if quiet >= 3 && n + 1 >= 16 {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NonConvergence { what: "F3 inner series".into(), terms: policy.max_terms });
        }
        total += row;
        quiet_rows = if row.norm() <= policy.target * total.norm().max(f64::MIN_POSITIVE) { quiet_rows + 1 } else { 0 };
        if quiet_rows >= 3 && m + 1 >= 16 {
            return Ok(total);
        }
        let cm = c + mf;
        if cm == Complex64::new(0.0, 0.0) {
            return Err(Error::Pole(format!("(c)_m vanishes at c = {c}")));
        }
        row_head = row_head * (a + mf) * (b + mf) * x / ((mf + 1.0) * cm);
    }
    Err(Error::NonConvergence { what: "F3 outer series".into(), terms: policy.max_terms })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::gauss_2f1;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn degenerations_and_symmetry() {
        let pol = PrecisionPolicy::default();
        let (a, a1, b, b1, cc) = (c(0.5, 1.0), c(-0.5, 1.0), c(0.5, -1.0), c(-0.5, -1.0), c(1.25, 0.0));
        assert_eq!(f3(a, a1, b, b1, cc, c(0.0, 0.0), c(0.0, 0.0), &pol).unwrap(), c(1.0, 0.0));
        let y = c(0.3, 0.1);
        let collapsed = f3(a, a1, b, b1, cc, c(0.0, 0.0), y, &pol).unwrap();
        let gauss = gauss_2f1(a1, b1, cc, y, &pol).unwrap();
        assert!((collapsed - gauss).norm() < 1e-13);
        let x = c(-0.2, 0.25);
        let lhs = f3(a, a1, b, b1, cc, x, y, &pol).unwrap();
        let rhs = f3(a1, a, b1, b, cc, y, x, &pol).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
        assert!(f3(a, a1, b, b1, cc, c(1.0, 0.0), y, &pol).is_err());
    }

    #[test]
    fn reference_value() {
        // mpmath.appellf3
        let pol = PrecisionPolicy::default();
        let v = f3(c(0.5, 0.0), c(-0.5, 0.0), c(0.5, 0.0), c(-0.5, 0.0), c(0.25, 0.0), c(0.2, 0.0), c(0.2, 0.0), &pol).unwrap();
        assert!((v - c(1.457_535_735_020_926_3, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn stable_under_term_cap_doubling() {
        let mut pol = PrecisionPolicy { max_terms: 400, ..Default::default() };
        let args = (c(1.5, 1.0), c(0.5, 1.0), c(1.5, -1.0), c(0.5, -1.0), c(3.25, 0.0), c(0.6, 0.0), c(-0.7, 0.0));
        let v1 = f3(args.0, args.1, args.2, args.3, args.4, args.5, args.6, &pol).unwrap();
        pol.max_terms = 800;
        let v2 = f3(args.0, args.1, args.2, args.3, args.4, args.5, args.6, &pol).unwrap();
        assert!((v1 - v2).norm() < pol.target * v1.norm().max(1.0) * 10.0);
    }
}
