use num_bigint::BigInt;
use num_rational::Ratio;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use loopschur::involutions::{master_gf, Domain, Instance, DEFAULT_CAP};
use loopschur::poly::{Degree, Polynomial};
use loopschur::shapes::enumerate_border_strips;
use loopschur::tableaux::{loop_power_sum, loop_schur, shifted_loop_schur, x_delta, ShiftParams};
use loopschur::verify::{check_involution, theorem2_bound, verify_theorem1, InvolutionMode, Which};
use loopschur::Partition;

fn small_partition() -> impl Strategy<Value = Partition> {
    prop::sample::select(vec!["", "1", "2", "1,1", "2,1", "3", "1,1,1", "2,2", "3,1"])
        .prop_map(|s| s.parse().unwrap())
}

/// `(λ, n, k, N)` small enough to sample from.
fn instance() -> impl Strategy<Value = Instance> {
    (small_partition(), 1u32..=3, 1u32..=2, 0usize..=2)
        .prop_filter("kn ≤ 4", |(_, n, k, _)| n * k <= 4)
        .prop_map(|(lam, n, k, extra)| {
            let bound = (lam.len() + extra).clamp(1, 5);
            Instance::new(lam, n, k, bound).unwrap()
        })
}

fn which() -> impl Strategy<Value = Which> {
    prop::sample::select(vec![Which::I1, Which::I2, Which::I3, Which::I4])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn involutions_hold_on_random_samples(inst in instance(), w in which(), seed: u64, l_pick in 0u32..3) {
        let l = if inst.n == 1 { 0 } else { l_pick % inst.n };
        prop_assume!(!(w == Which::I4 && l == 0));
        prop_assume!(!(w == Which::I4 && (inst.bound as u32) <= inst.k * l));
        let r = check_involution(w, &inst, l, InvolutionMode::Sampled { samples: 25, seed }).unwrap();
        prop_assert!(r.pass, "{}", r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn truncation_is_monotone(lam in small_partition(), n in 1u32..=3, bound in 1usize..=4) {
        let small = loop_schur(&lam, n, bound);
        let big = loop_schur(&lam, n, bound + 1);
        for (m, c) in small.terms() {
            prop_assert!(big.coeff(m) >= *c);
        }
    }

    #[test]
    fn builders_have_nonnegative_coefficients(lam in small_partition(), n in 1u32..=3, bound in 1usize..=4, l in 0u32..3, k in 1u32..=3) {
        let p = ShiftParams::new(n, l % n).unwrap();
        prop_assert!(loop_schur(&lam, n, bound).has_nonnegative_coefficients());
        prop_assert!(shifted_loop_schur(&lam, p, bound).has_nonnegative_coefficients());
        prop_assert!(loop_power_sum(k, n, bound).unwrap().has_nonnegative_coefficients());
    }

    #[test]
    fn theorem1_at_minimal_bound(lam in small_partition(), n in 1u32..=2) {
        let bound = n as usize + lam.len();
        let r = verify_theorem1(&lam, n, 1, bound).unwrap();
        prop_assert!(r.pass, "{}", r);
    }
}

#[test]
fn degree_floor_on_the_bare_staircase() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut checked = 0;
    for bound in 2..=6 {
        let sampler = Domain::t(&Partition::empty(), bound)
            .unwrap()
            .sampler()
            .unwrap();
        for n in 1..=3 {
            for l in 0..n {
                let p = ShiftParams::new(n, l).unwrap();
                let floor = x_delta(bound, p).unwrap().degree(n);
                for _ in 0..100 {
                    let x = sampler.sample(&mut rng);
                    assert!(x.weight(p).degree(n) >= floor, "{x}");
                    checked += 1;
                }
            }
        }
    }
    assert!(checked >= 1000);
}

/// `F^l = x^{δ,l} Σ (−1)^{ht} s^l_σ` and its degree clears
/// `deg x^{δ,l} + N − kn − (l/n)N`.
#[test]
fn shifted_master_function_chain() {
    for lam in ["", "1"] {
        let lam: Partition = lam.parse().unwrap();
        for n in 2..=3u32 {
            for l in 1..n {
                for bound in 2..=4usize {
                    let inst = Instance::new(lam.clone(), n, 1, bound).unwrap();
                    let p = ShiftParams::new(n, l).unwrap();
                    let f = master_gf(&inst, l, DEFAULT_CAP).unwrap().value;
                    let mut sum = Polynomial::zero(n);
                    for s in enumerate_border_strips(&lam, n) {
                        let sign = if s.height % 2 == 0 { 1 } else { -1 };
                        sum.add_scaled(
                            &shifted_loop_schur(&s.sigma, p, bound),
                            &BigInt::from(sign),
                        )
                        .unwrap();
                    }
                    let delta = x_delta(bound, p).unwrap();
                    assert_eq!(f, sum.mul_monomial(&delta), "{lam} n={n} l={l} N={bound}");
                    let floor: Ratio<i64> = delta.degree(n) + theorem2_bound(n, 1, l, bound);
                    assert!(f.min_degree() >= Degree::Finite(floor));
                }
            }
        }
    }
}
