use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use super::matrix::SquareMatrix;
use crate::error::Result;

/// `X^3 = t X^2 - s X + d`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharPoly3 {
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub t: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub s: BigInt,
    #[serde(serialize_with = "crate::report::ser_bigint")]
    pub d: BigInt,
}

impl CharPoly3 {
    pub fn new(t: impl Into<BigInt>, s: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        CharPoly3 {
            t: t.into(),
            s: s.into(),
            d: d.into(),
        }
    }
}

/// `T^k - s_1 T^(k-1) + s_2 T^(k-2) - ... + (-1)^k s_k`; `s[0]` holds `s_1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharPolyK {
    s: Vec<BigInt>,
}

impl CharPolyK {
    pub fn new(s: Vec<BigInt>) -> Self {
        assert!(!s.is_empty(), "characteristic polynomial needs degree >= 1");
        CharPolyK { s }
    }

    pub fn from_i64(s: &[i64]) -> Self {
        Self::new(s.iter().map(|&x| BigInt::from(x)).collect())
    }

    pub fn degree(&self) -> usize {
        self.s.len()
    }

    /// `s_i` for `1 <= i <= k`; `s_0 = 1` and zero beyond the degree.
    pub fn s(&self, i: usize) -> BigInt {
        match i {
            0 => BigInt::one(),
            i if i <= self.s.len() => self.s[i - 1].clone(),
            _ => BigInt::zero(),
        }
    }

    pub fn coefficients(&self) -> &[BigInt] {
        &self.s
    }
}

impl From<&CharPoly3> for CharPolyK {
    fn from(cp: &CharPoly3) -> Self {
        CharPolyK::new(vec![cp.t.clone(), cp.s.clone(), cp.d.clone()])
    }
}

/// Trace, sum of principal 2x2 minors, and determinant of a 3x3 matrix.
pub fn char_poly_3(a: &SquareMatrix) -> Result<CharPoly3> {
    a.require_dim(3)?;
    let e = |i: usize, j: usize| &a[(i, j)];
    let minor = |i: usize, j: usize| e(i, i) * e(j, j) - e(i, j) * e(j, i);
    let t = a.trace();
    let s = minor(0, 1) + minor(0, 2) + minor(1, 2);
    let d = e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
        - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
        + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0));
    Ok(CharPoly3 { t, s, d })
}

/// Characteristic polynomial of any square matrix by the Faddeev-LeVerrier
/// recursion; every division in it is exact over the integers.
pub fn char_poly(a: &SquareMatrix) -> CharPolyK {
    let n = a.dim();
    // c[i] is the coefficient of T^(n-i) in det(T I - A)
    let mut c = vec![BigInt::one()];
    let mut m = SquareMatrix::zeros(n);
    for k in 1..=n {
        let mut next = &*a * &m;
        next.add_scalar(&c[k - 1]);
        m = next;
        let am = &*a * &m;
        let ck = -am.trace() / BigInt::from(k);
        c.push(ck);
    }
    // s_i = (-1)^i c_i
    let s = (1..=n)
        .map(|i| if i % 2 == 0 { c[i].clone() } else { -c[i].clone() })
        .collect();
    CharPolyK::new(s)
}

/// Adjugate of a 3x3 matrix: transpose of the cofactor matrix.
pub fn adjugate_3(a: &SquareMatrix) -> Result<SquareMatrix> {
    a.require_dim(3)?;
    let cofactor = |i: usize, j: usize| {
        let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
        let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
        let det = &a[(rows[0], cols[0])] * &a[(rows[1], cols[1])]
            - &a[(rows[0], cols[1])] * &a[(rows[1], cols[0])];
        if (i + j) % 2 == 0 {
            det
        } else {
            -det
        }
    };
    Ok(SquareMatrix::from_fn(3, |i, j| cofactor(j, i)))
}
