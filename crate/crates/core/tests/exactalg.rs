use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use trkr::exactalg::{kernel, rank, rank_kernel_image, solve, Poly, QMatrix, Rat};

fn big(r: &Rat) -> BigRational {
    r.to_big()
}

fn rat() -> impl Strategy<Value = Rat> {
    prop_oneof![
        (-50i64..50, 1i64..20).prop_map(|(n, d)| Rat::from_ratio(n, d)),
        (any::<i64>(), 1i64..i64::MAX).prop_map(|(n, d)| Rat::from_ratio(n, d)),
    ]
}

/// Rank by fraction-free Gaussian elimination over `BigInt` on a dense copy.
fn bareiss_rank(m: &[Vec<i64>]) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&v| BigInt::from(v)).collect())
        .collect();
    let (rows, cols) = (a.len(), a.first().map_or(0, Vec::len));
    let mut rank = 0;
    let mut prev = BigInt::from(1);
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| a[r][c] != BigInt::from(0)) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                a[r][k] = (&a[rank][c] * &a[r][k] - &a[r][c] * &a[rank][k]) / &prev;
            }
            a[r][c] = BigInt::from(0);
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

fn int_matrix() -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1usize..10, 1usize..10).prop_flat_map(|(r, c)| {
        proptest::collection::vec(
            proptest::collection::vec(prop_oneof![3 => Just(0i64), 2 => -4i64..=4], c),
            r,
        )
    })
}

proptest! {
    #[test]
    fn rationals_agree_with_bigrational(a in rat(), b in rat()) {
        prop_assert_eq!(big(&(&a + &b)), big(&a) + big(&b));
        prop_assert_eq!(big(&(&a - &b)), big(&a) - big(&b));
        prop_assert_eq!(big(&(&a * &b)), big(&a) * big(&b));
        if !b.is_zero() {
            prop_assert_eq!(big(&(&a / &b)), big(&a) / big(&b));
        }
        prop_assert_eq!(a.cmp(&b), big(&a).cmp(&big(&b)));
    }

    #[test]
    fn rank_agrees_with_fraction_free_elimination(m in int_matrix()) {
        let q = QMatrix::from_ints(&m);
        let r = bareiss_rank(&m);
        prop_assert_eq!(rank(&q), r);
        prop_assert_eq!(rank(&q.transpose()), r);
        let rki = rank_kernel_image(&q);
        prop_assert_eq!(rki.rank, r);
        prop_assert_eq!(rki.kernel.len(), q.cols() - r);
    }

    #[test]
    fn kernel_vectors_are_killed(m in int_matrix()) {
        let q = QMatrix::from_ints(&m);
        for v in kernel(&q) {
            prop_assert!(q.mul_vec(&v).is_empty());
        }
    }

    #[test]
    fn solve_finds_preimages(m in int_matrix(), x in proptest::collection::vec(-3i64..=3, 10)) {
        let q = QMatrix::from_ints(&m);
        let x: Vec<(u32, Rat)> = x.iter().take(q.cols()).enumerate()
            .filter(|(_, v)| **v != 0).map(|(i, v)| (i as u32, Rat::from_int(*v))).collect();
        let b = q.mul_vec(&x);
        let y = solve(&q, &b).expect("b is in the image");
        prop_assert_eq!(q.mul_vec(&y), b);
    }

    #[test]
    fn polynomial_division_inverts_multiplication(
        c1 in proptest::collection::vec(-3i64..=3, 6),
        c2 in proptest::collection::vec(-3i64..=3, 6),
    ) {
        // Linear forms in a, x1, x2 plus a constant.
        let lin = |c: &[i64]| {
            let mut p = Poly::constant(3, Rat::from_int(c[0]));
            for (i, &v) in c[1..3].iter().enumerate() {
                p = &p + &Poly::var(3, i).scale(&Rat::from_int(v));
            }
            &p + &Poly::var(3, 2).pow(2).scale(&Rat::from_int(c[3]))
        };
        let (p, q) = (lin(&c1), lin(&c2));
        prop_assume!(!q.is_zero());
        let prod = &p * &q;
        prop_assert_eq!(prod.divide_exact(&q).unwrap(), p.clone());
        // Evaluation is a ring map.
        let pt = [Rat::from_int(2), Rat::from_ratio(-1, 3), Rat::from_int(5)];
        prop_assert_eq!(prod.eval_rat(&pt), &p.eval_rat(&pt) * &q.eval_rat(&pt));
    }
}
