use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::charpoly::{CharPoly3, CharPolyK};
use crate::exactnum::binomial;

/// The coefficient sequence `a_0 = 1, a_1, ...` attached to a characteristic
/// polynomial: `a(n) = s_1 a(n-1) - s_2 a(n-2) + ... + (-1)^(k-1) s_k a(n-k)`
/// with `a(j) = 0` for `j < 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoefficientSequence {
    poly: CharPolyK,
    values: Vec<BigInt>,
}

impl CoefficientSequence {
    pub fn new(poly: CharPolyK) -> Self {
        CoefficientSequence {
            poly,
            values: vec![BigInt::one()],
        }
    }

    pub fn from_cubic(cp: &CharPoly3) -> Self {
        Self::new(cp.into())
    }

    pub fn poly(&self) -> &CharPolyK {
        &self.poly
    }

    pub fn values(&self) -> &[BigInt] {
        &self.values
    }

    /// Number of stored terms (`a_0` through `a_{len-1}`).
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Extend so that `a_upto` is stored.
    pub fn extend_to(&mut self, upto: usize) {
        let k = self.poly.degree();
        while self.values.len() <= upto {
            let n = self.values.len();
            let mut next = BigInt::zero();
            for i in 1..=k.min(n) {
                let term = self.poly.s(i) * &self.values[n - i];
                if i % 2 == 1 {
                    next += term;
                } else {
                    next -= term;
                }
            }
            self.values.push(next);
        }
    }

    pub fn extended(mut self, upto: usize) -> Self {
        self.extend_to(upto);
        self
    }

    /// `a_n`, with the convention `a_n = 0` for negative `n`.
    pub fn at(&mut self, n: i64) -> BigInt {
        if n < 0 {
            return BigInt::zero();
        }
        self.extend_to(n as usize);
        self.values[n as usize].clone()
    }

    /// Stored `a_n` for `n >= 0`, zero for negative `n`; panics if not yet
    /// extended that far.
    pub fn get(&self, n: i64) -> BigInt {
        if n < 0 {
            BigInt::zero()
        } else {
            self.values[n as usize].clone()
        }
    }
}

/// `a_n = sum over 2i + 3j <= n of (-1)^i C(i+j, j) C(n-i-2j, i+j) t^(n-2i-3j) s^i d^j`.
pub fn a_seq_closed_form(cp: &CharPoly3, n: u64) -> BigInt {
    let mut total = BigInt::zero();
    let mut j = 0u64;
    while 3 * j <= n {
        let mut i = 0u64;
        while 2 * i + 3 * j <= n {
            let coef = binomial(i + j, j) * binomial(n - i - 2 * j, i + j);
            if !coef.is_zero() {
                let term = coef
                    * cp.t.pow((n - 2 * i - 3 * j) as u32)
                    * cp.s.pow(i as u32)
                    * cp.d.pow(j as u32);
                if i % 2 == 0 {
                    total += term;
                } else {
                    total -= term;
                }
            }
            i += 1;
        }
        j += 1;
    }
    total
}

/// The multinomial closed form for an order-`k` characteristic polynomial:
/// a sum over `(i_2, ..., i_k) >= 0` with `i_1 = n - 2 i_2 - ... - k i_k >= 0`
/// of `(i_1 + ... + i_k)! / (i_1! ... i_k!) * s_1^(i_1) * prod ((-1)^(j-1) s_j)^(i_j)`.
pub fn general_a_n(cp: &CharPolyK, n: u64) -> BigInt {
    let k = cp.degree();
    // e_j = (-1)^(j-1) s_j
    let e: Vec<BigInt> = (1..=k)
        .map(|j| if j % 2 == 1 { cp.s(j) } else { -cp.s(j) })
        .collect();
    let mut exps = vec![0u64; k + 1];
    let mut total = BigInt::zero();
    accumulate(&e, n, 2, &mut exps, &mut total);
    total
}

fn accumulate(e: &[BigInt], budget: u64, j: usize, exps: &mut [u64], total: &mut BigInt) {
    let k = e.len();
    if j > k {
        // i_1 soaks up what remains of the weight
        exps[1] = budget;
        let mut coef = BigInt::one();
        let mut placed = 0u64;
        for &i in &exps[1..] {
            placed += i;
            coef *= binomial(placed, i);
        }
        let mut term = coef;
        for (idx, &i) in exps[1..].iter().enumerate() {
            if i > 0 {
                term *= e[idx].pow(i as u32);
            }
        }
        *total += term;
        return;
    }
    let w = j as u64;
    let mut i = 0u64;
    while i * w <= budget {
        exps[j] = i;
        accumulate(e, budget - i * w, j + 1, exps, total);
        i += 1;
    }
    exps[j] = 0;
}
