//! Dense polynomials in Z[t], just enough for exact determinants.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::laurent::{LaurentPoly, Monomial};

/// Coefficients from degree 0 upward, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub(crate) struct UPoly(Vec<BigInt>);

impl UPoly {
    pub fn zero() -> Self {
        UPoly(Vec::new())
    }

    pub fn constant(c: i128) -> Self {
        UPoly(vec![BigInt::from(c)]).trimmed()
    }

    /// `a + b t`
    pub fn linear(a: i128, b: i128) -> Self {
        UPoly(vec![BigInt::from(a), BigInt::from(b)]).trimmed()
    }

    fn trimmed(mut self) -> Self {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_default();
        UPoly((0..n).map(|i| get(&self.0, i) + get(&o.0, i)).collect()).trimmed()
    }

    pub fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c).collect())
    }

    pub fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        UPoly(out).trimmed()
    }

    /// Exact quotient; panics if `d` does not divide `self` in Z[t].
    pub fn div_exact(&self, d: &UPoly) -> UPoly {
        assert!(!d.is_zero(), "division by the zero polynomial");
        if self.is_zero() {
            return UPoly::zero();
        }
        let mut rem = self.0.clone();
        let dd = d.degree();
        let lead = d.0[dd].clone();
        assert!(self.degree() >= dd, "inexact polynomial division");
        let mut q = vec![BigInt::zero(); self.degree() - dd + 1];
        for k in (0..q.len()).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            let (c, r) = top.div_rem(&lead);
            assert!(r.is_zero(), "inexact polynomial division");
            for (j, dc) in d.0.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            q[k] = c;
        }
        assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
        UPoly(q).trimmed()
    }

    pub fn to_laurent(&self, var: &str) -> LaurentPoly {
        LaurentPoly::from_terms(
            self.0
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(var, i as i64), c.clone())),
        )
    }
}

/// Determinant of a square matrix over Z[t] by Bareiss elimination.
pub(crate) fn determinant(mut a: Vec<Vec<UPoly>>) -> UPoly {
    let n = a.len();
    if n == 0 {
        return UPoly(vec![BigInt::one()]);
    }
    let mut negate = false;
    let mut prev = UPoly(vec![BigInt::one()]);
    for k in 0..n {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return UPoly::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        d.neg()
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn det_of_trefoil_form() {
        // V - tV^T for V = [[-1, 1], [0, -1]]
        let m = vec![
            vec![UPoly::linear(-1, 1), UPoly::linear(1, 0)],
            vec![UPoly::linear(0, -1), UPoly::linear(-1, 1)],
        ];
        assert_eq!(determinant(m), UPoly(vec![1.into(), (-1).into(), 1.into()]));
    }

    #[test]
    fn det_with_pivot_swap() {
        let m = vec![
            vec![UPoly::zero(), UPoly::constant(1)],
            vec![UPoly::linear(0, 1), UPoly::constant(5)],
        ];
        assert_eq!(determinant(m), UPoly::linear(0, -1));
    }

    #[test]
    fn exact_division() {
        let a = UPoly::linear(1, 1).mul(&UPoly::linear(-2, 3));
        assert_eq!(a.div_exact(&UPoly::linear(1, 1)), UPoly::linear(-2, 3));
    }
}
