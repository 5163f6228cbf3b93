//! Classical Schur polynomials by Jacobi–Trudi, built only from ring
//! arithmetic. Shares no code with tableau enumeration, so it can serve as
//! an independent check on the specialized loop Schur functions.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{Monomial, Polynomial, Variable};
use crate::shapes::Partition;

/// `y_j` in the single-color ring.
pub fn y(j: usize) -> Monomial {
    Monomial::var(Variable::new(0, j as i64))
}

/// `h_0, …, h_max` in `y_1..y_N`, via `h_k(y_1..y_m) = h_k(y_1..y_{m−1}) + y_m·h_{k−1}(y_1..y_m)`.
pub fn complete_homogeneous(max: usize, bound: usize) -> Vec<Polynomial> {
    let mut h: Vec<Polynomial> = (0..=max)
        .map(|k| {
            if k == 0 {
                Polynomial::one(1)
            } else {
                Polynomial::zero(1)
            }
        })
        .collect();
    for m in 1..=bound {
        let ym = y(m);
        for k in 1..=max {
            let step = h[k - 1].mul_monomial(&ym);
            h[k] = h[k].add(&step).expect("same ring");
        }
    }
    h
}

/// `Σ_j y_j^m`.
pub fn classical_power_sum(m: u32, bound: usize) -> Polynomial {
    Polynomial::from_terms(
        1,
        (1..=bound).map(|j| {
            (
                Monomial::var_pow(Variable::new(0, j as i64), m),
                BigInt::one(),
            )
        }),
    )
}

/// `s_λ(y_1..y_N) = det(h_{λ_i − i + j})`.
pub fn classical_schur_oracle(lambda: &Partition, bound: usize) -> Polynomial {
    let l = lambda.len();
    if l == 0 {
        return Polynomial::one(1);
    }
    let max = (lambda.part(1) as usize) + l;
    let h = complete_homogeneous(max, bound);
    let entry = |i: usize, j: usize| -> Option<&Polynomial> {
        let idx = lambda.part(i + 1) as i64 - i as i64 + j as i64;
        if idx < 0 {
            None
        } else {
            Some(&h[idx as usize])
        }
    };
    let mut memo: HashMap<u64, Polynomial> = HashMap::new();
    laplace(0, (1u64 << l) - 1, l, &entry, &mut memo)
}

/// Determinant of rows `row..l` against the columns in `cols`, expanding
/// along the first remaining row.
fn laplace<'a, F>(
    row: usize,
    cols: u64,
    l: usize,
    entry: &F,
    memo: &mut HashMap<u64, Polynomial>,
) -> Polynomial
where
    F: Fn(usize, usize) -> Option<&'a Polynomial>,
{
    if row == l {
        return Polynomial::one(1);
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    let mut out = Polynomial::zero(1);
    let mut sign = 1i32;
    for j in 0..l {
        if cols & (1 << j) == 0 {
            continue;
        }
        if let Some(e) = entry(row, j) {
            if !e.is_zero() {
                let minor = laplace(row + 1, cols & !(1 << j), l, entry, memo);
                let term = e.mul(&minor).expect("same ring");
                out.add_scaled(&term, &BigInt::from(sign))
                    .expect("same ring");
            }
        }
        sign = -sign;
    }
    memo.insert(cols, out.clone());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Partition {
        s.parse().unwrap()
    }

    #[test]
    fn small_cases() {
        let s1 = classical_schur_oracle(&p("1"), 2);
        assert_eq!(
            s1,
            Polynomial::from_terms(1, [(y(1), BigInt::one()), (y(2), BigInt::one())])
        );
        assert_eq!(
            classical_schur_oracle(&p("2,1"), 5).eval_ones(),
            BigInt::from(40)
        );
        assert!(classical_schur_oracle(&p("1,1,1"), 2).is_zero());
        assert_eq!(
            classical_schur_oracle(&Partition::empty(), 3),
            Polynomial::one(1)
        );
    }

    #[test]
    fn h_counts_are_binomials() {
        let h = complete_homogeneous(5, 4);
        // h_k(1,…,1) = C(N+k−1, k)
        let expected = [1, 4, 10, 20, 35, 56];
        for (k, e) in expected.iter().enumerate() {
            assert_eq!(h[k].eval_ones(), BigInt::from(*e));
        }
    }

    #[test]
    fn dimension_matches_hook_content() {
        // s_λ(1^N) = Π (N + c) / hook
        for size in 0..=6 {
            for lam in Partition::all_of_size(size) {
                for n in 1..=5usize {
                    let mut num = BigInt::one();
                    let mut den = BigInt::one();
                    for c in lam.cells() {
                        let arm = lam.part(c.row as usize) as i64 - c.col;
                        let leg = (c.row as usize + 1..=lam.len())
                            .filter(|&r| lam.part(r) as i64 >= c.col)
                            .count() as i64;
                        num *= n as i64 + c.content();
                        den *= arm + leg + 1;
                    }
                    assert_eq!(
                        classical_schur_oracle(&lam, n).eval_ones(),
                        num / den,
                        "{lam} N={n}"
                    );
                }
            }
        }
    }
}
