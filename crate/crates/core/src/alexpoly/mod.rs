//! Alexander polynomials of knots and factor counting over the rationals.

mod factor;
mod laurent;
mod poly;

pub use laurent::LaurentPolynomial;

use num_bigint::BigInt;
use num_traits::Zero;
use thiserror::Error;

use crate::diagram::LinkDiagram;
use crate::grouppres::GroupPresentation;
use poly::ZPoly;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlexError {
    #[error("the zero polynomial has no factorization")]
    ZeroPolynomial,
    #[error("{0}")]
    Parse(String),
    #[error("expected a knot, got {0} components")]
    NotAKnot(usize),
}

/// Normalized Alexander polynomial of a one-component diagram.
pub fn alexander_of_knot(d: &LinkDiagram) -> Result<LaurentPolynomial, AlexError> {
    if d.component_count() != 1 {
        return Err(AlexError::NotAKnot(d.component_count()));
    }
    if d.crossing_count() == 0 {
        return Ok(LaurentPolynomial::one());
    }
    let g = GroupPresentation::wirtinger(d);
    let m = fox_matrix(&g);
    let n = g.generator_count();
    // drop the last relator and the last generator
    let minor: Vec<Vec<LaurentPolynomial>> = m[..m.len() - 1]
        .iter()
        .map(|row| row[..n - 1].to_vec())
        .collect();
    Ok(determinant(&minor).normalize())
}

/// Fox derivatives of each relator, abelianized by sending every
/// generator to `t`.
pub fn fox_matrix(g: &GroupPresentation) -> Vec<Vec<LaurentPolynomial>> {
    let n = g.generator_count();
    g.relators()
        .iter()
        .map(|r| {
            let mut row = vec![LaurentPolynomial::zero(); n];
            let mut prefix = 0i64;
            for &x in r {
                let k = x.unsigned_abs() as usize - 1;
                if x > 0 {
                    row[k] = row[k].add(&LaurentPolynomial::monomial(1, prefix));
                    prefix += 1;
                } else {
                    prefix -= 1;
                    row[k] = row[k].add(&LaurentPolynomial::monomial(-1, prefix));
                }
            }
            row
        })
        .collect()
}

/// Determinant over `Z[t, 1/t]` by fraction-free elimination.
pub fn determinant(m: &[Vec<LaurentPolynomial>]) -> LaurentPolynomial {
    let n = m.len();
    let mut shift = 0i64;
    let mut a: Vec<Vec<ZPoly>> = Vec::with_capacity(n);
    for row in m {
        let low = row.iter().filter_map(LaurentPolynomial::low).min().unwrap_or(0);
        shift += low;
        a.push(
            row.iter()
                .map(|p| {
                    let q = p.shift(-low);
                    let d = q.high().map_or(0, |h| h as usize + 1);
                    let mut out = vec![BigInt::zero(); d];
                    for (k, c) in q.coefficients() {
                        out[*k as usize] = c.clone();
                    }
                    out
                })
                .collect(),
        );
    }
    let det = bareiss(a);
    LaurentPolynomial::from_zpoly(&det).shift(shift)
}

fn bareiss(mut a: Vec<Vec<ZPoly>>) -> ZPoly {
    let n = a.len();
    if n == 0 {
        return vec![BigInt::from(1)];
    }
    let mut negate = false;
    let mut prev: ZPoly = vec![BigInt::from(1)];
    for k in 0..n {
        if a[k][k].is_empty() {
            match (k + 1..n).find(|&i| !a[i][k].is_empty()) {
                Some(i) => {
                    a.swap(k, i);
                    negate = !negate;
                }
                None => return Vec::new(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = poly::sub(
                    &poly::mul(&a[k][k], &a[i][j]),
                    &poly::mul(&a[i][k], &a[k][j]),
                );
                a[i][j] = poly::exact_div(&num, &prev).expect("fraction-free step is exact");
            }
            a[i][k] = Vec::new();
        }
        prev = a[k][k].clone();
    }
    let d = a[n - 1][n - 1].clone();
    if negate {
        poly::scale(&d, &BigInt::from(-1))
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lp(c: &[i64]) -> LaurentPolynomial {
        LaurentPolynomial::from_coeffs(0, c)
    }

    #[test]
    fn small_determinants() {
        let m = vec![vec![lp(&[1, 1]), lp(&[0, 1])], vec![lp(&[1]), lp(&[1, 1])]];
        // (1+t)^2 - t
        assert_eq!(determinant(&m), lp(&[1, 1, 1]));
        let swap = vec![vec![lp(&[]), lp(&[1])], vec![lp(&[1]), lp(&[])]];
        assert_eq!(determinant(&swap), lp(&[-1]));
        let laurent = vec![vec![LaurentPolynomial::monomial(1, -1)]];
        assert_eq!(determinant(&laurent), LaurentPolynomial::monomial(1, -1));
    }

    #[test]
    fn hopf_is_not_a_knot() {
        let h = crate::diagram::tests::hopf(1);
        assert_eq!(alexander_of_knot(&h), Err(AlexError::NotAKnot(2)));
        assert_eq!(alexander_of_knot(&LinkDiagram::unknot()).unwrap(), LaurentPolynomial::one());
    }

    #[test]
    fn factor_counts() {
        assert_eq!(lp(&[1, -1, 1]).factor_count().unwrap(), 1);
        assert_eq!(lp(&[1, -2, 3, -2, 1]).factor_count().unwrap(), 2);
        assert_eq!(lp(&[1]).factor_count().unwrap(), 0);
        assert_eq!(LaurentPolynomial::zero().factor_count(), Err(AlexError::ZeroPolynomial));
    }
}
