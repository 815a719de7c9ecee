use num_bigint::BigInt;
use num_traits::Zero;

use super::charpoly::{adjugate_3, char_poly, char_poly_3, CharPolyK};
use super::matrix::SquareMatrix;
use super::sequence::CoefficientSequence;

/// `b_0 .. b_{k-1}` with `A^n = sum_i b_i A^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleyCoefficients {
    pub n: u64,
    pub b: Vec<BigInt>,
}

impl CayleyCoefficients {
    /// `b_{k-1-r} = sum_{i=0..r} (-1)^i s_i a(n-k+1+r-i)`, valid for every
    /// `n >= 0` under the convention `a(j) = 0` for `j < 0`.
    pub fn new(poly: &CharPolyK, n: u64) -> Self {
        let k = poly.degree();
        let mut seq = CoefficientSequence::new(poly.clone());
        seq.extend_to(n as usize);
        let base = n as i64 - k as i64 + 1;
        let mut b = vec![BigInt::zero(); k];
        for r in 0..k {
            let mut acc = BigInt::zero();
            for i in 0..=r {
                let term = poly.s(i) * seq.get(base + r as i64 - i as i64);
                if i % 2 == 0 {
                    acc += term;
                } else {
                    acc -= term;
                }
            }
            b[k - 1 - r] = acc;
        }
        CayleyCoefficients { n, b }
    }

    pub fn k(&self) -> usize {
        self.b.len()
    }

    pub fn apply(&self, a: &SquareMatrix) -> SquareMatrix {
        let mut power = SquareMatrix::identity(a.dim());
        let mut acc = SquareMatrix::zeros(a.dim());
        for (i, bi) in self.b.iter().enumerate() {
            if i > 0 {
                power = &power * a;
            }
            acc = acc.add(&power.scale(bi));
        }
        acc
    }
}

/// `A^n` from the characteristic polynomial without repeated products.
///
/// For 3x3 input this uses `A^n = a_{n-1} A + a_{n-2} Adj(A) + (a_n - t a_{n-1}) I`;
/// otherwise the general combination of `I, A, ..., A^{k-1}`.
pub fn power_via_cayley(a: &SquareMatrix, n: u64) -> SquareMatrix {
    if a.dim() == 3 {
        let cp = char_poly_3(a).expect("dimension checked");
        let adj = adjugate_3(a).expect("dimension checked");
        let mut seq = CoefficientSequence::from_cubic(&cp);
        let n = n as i64;
        let (an, an1, an2) = (seq.at(n), seq.at(n - 1), seq.at(n - 2));
        let mut out = a.scale(&an1).add(&adj.scale(&an2));
        out.add_scalar(&(an - &cp.t * &an1));
        out
    } else {
        power_via_cayley_general(a, n)
    }
}

/// The order-`k` combination for any dimension, including 3.
pub fn power_via_cayley_general(a: &SquareMatrix, n: u64) -> SquareMatrix {
    let poly = char_poly(a);
    CayleyCoefficients::new(&poly, n).apply(a)
}
