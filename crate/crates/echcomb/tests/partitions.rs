use echcomb::lattice::{floor, int, rat, Rat};
use echcomb::partitions::{hyperbolic_partition, lambda_plus, p_minus, p_plus};
use num_integer::Integer;
use proptest::prelude::*;

fn generic_phi() -> impl Strategy<Value = (Rat, i64)> {
    (2i64..=64, -128i64..=128)
        .prop_filter("reduced", |(q, p)| p.gcd(q) == 1)
        .prop_flat_map(|(q, p)| (Just(rat(p, q)), 1..q.min(9)))
}

#[test]
fn documented_examples() {
    let p = lambda_plus(rat(8, 5), 3);
    assert_eq!(p.vertices, vec![(0, 0), (2, 3), (3, 4)]);
    assert_eq!(p.entries, vec![2, 1]);
    assert_eq!(p_plus(rat(8, 5), 1), vec![1]);
    assert_eq!(p_plus(rat(13, 10), 3), vec![1, 1, 1]);
    assert_eq!(p_minus(rat(8, 5), 2), vec![1, 1]);
    assert_eq!(p_plus(rat(5, 16), 2), vec![1, 1]);
    assert_eq!(hyperbolic_partition(4), vec![1, 1, 1, 1]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn segments_are_primitive_and_below_the_line((phi, m) in generic_phi()) {
        let path = lambda_plus(phi, m);
        prop_assert_eq!(path.entries.iter().sum::<i64>(), m);
        prop_assert_eq!(*path.vertices.last().unwrap(), (m, floor(&(phi * int(m)))));
        for (w, n) in path.vertices.windows(2).zip(&path.entries) {
            let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
            prop_assert_eq!(dx, *n);
            prop_assert_eq!(dx.gcd(&dy), 1);
            prop_assert_eq!(dy, floor(&(phi * int(dx))));
            prop_assert!(Rat::from_integer(w[1].1) <= phi * int(w[1].0));
        }
        for w in path.vertices.windows(3) {
            let turn = (w[1].0 - w[0].0) * (w[2].1 - w[1].1) - (w[1].1 - w[0].1) * (w[2].0 - w[1].0);
            prop_assert!(turn <= 0, "not concave at {:?}", w);
        }
        prop_assert_eq!(p_minus(phi, m), p_plus(-phi, m));
    }

    /// Agreement at `m` forces agreement at every smaller multiplicity.
    #[test]
    fn stability_under_smaller_multiplicity((phi, m) in generic_phi(), shift in 1i64..40) {
        let other = phi + rat(shift, 4096);
        let gen = (1..=m).all(|k| !(other * int(k)).is_integer());
        prop_assume!(gen);
        if lambda_plus(phi, m).vertices == lambda_plus(other, m).vertices {
            for k in 1..m {
                prop_assert_eq!(lambda_plus(phi, k).vertices, lambda_plus(other, k).vertices);
            }
        }
    }
}
