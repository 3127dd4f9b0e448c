use proptest::prelude::*;
use shadowlat::arith::{q, qr, Q};
use shadowlat::qseries::{theta3, QSeries, GRID};

const ORDER: i64 = 10 * GRID;

/// Series on the quarter grid with small rational coefficients.
fn series() -> impl Strategy<Value = QSeries> {
    prop::collection::vec((0i64..40, -6i64..=6, 1i64..=3), 0..8)
        .prop_map(|v| QSeries::from_terms(v.into_iter().map(|(j, a, b)| (j * GRID / 4, qr(a, b))), ORDER))
}

/// Series with a unit constant term.
fn unit_series() -> impl Strategy<Value = QSeries> {
    series().prop_map(|s| s.add(&QSeries::constant(q(1) - s.coeff(0), ORDER)))
}

/// Equality below the common working order (exact factors may carry higher precision).
fn same(x: &QSeries, y: &QSeries) -> bool {
    x.truncate(ORDER) == y.truncate(ORDER)
}

proptest! {
    #[test]
    fn multiplication_is_a_commutative_ring(a in series(), b in series(), c in series()) {
        prop_assert!(same(&a.mul(&b), &b.mul(&a)));
        prop_assert!(same(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
        prop_assert!(same(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn inverse_and_powers(a in unit_series(), k in -4i64..=4) {
        let inv = a.inverse().unwrap();
        prop_assert!(same(&a.mul(&inv), &QSeries::one(ORDER)));
        let p = a.pow_int(k).unwrap();
        let back = p.mul(&a.pow_int(-k).unwrap());
        prop_assert!(same(&back, &QSeries::one(ORDER)));
        let r = a.pow_rational(1, 2).unwrap();
        prop_assert!(same(&r.mul(&r), &a));
    }

    #[test]
    fn theta_operator_is_a_derivation(a in series(), b in series()) {
        let lhs = a.mul(&b).theta_op();
        let rhs = a.theta_op().mul(&b).add(&a.mul(&b.theta_op()));
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn log_derivative_of_product(a in unit_series(), b in unit_series()) {
        let lhs = a.mul(&b).log_derivative().unwrap();
        let rhs = a.log_derivative().unwrap().add(&b.log_derivative().unwrap());
        prop_assert!(same(&lhs, &rhs));
    }

    #[test]
    fn truncation_commutes_with_ring_operations(a in series(), b in series(), t in 1i64..ORDER) {
        prop_assert_eq!(a.mul(&b).truncate(t), a.truncate(t).mul(&b.truncate(t)).truncate(t));
        prop_assert_eq!(a.add(&b).truncate(t), a.truncate(t).add(&b.truncate(t)));
    }

    #[test]
    fn serialization_round_trips(a in series()) {
        let s = serde_json::to_string(&a).unwrap();
        let back: QSeries = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn shift_is_an_involutive_ring_map(a in series(), b in series()) {
        let ints = |s: &QSeries| QSeries::from_terms(s.terms().filter(|(e, _)| e % GRID == 0).map(|(e, c)| (e, c.clone())), ORDER);
        let (a, b) = (ints(&a), ints(&b));
        let sa = a.shift_z_plus_1().unwrap();
        prop_assert_eq!(sa.shift_z_plus_1().unwrap(), a.clone());
        prop_assert!(same(&a.mul(&b).shift_z_plus_1().unwrap(), &sa.mul(&b.shift_z_plus_1().unwrap())));
    }
}

#[test]
fn theta3_squared_counts_sums_of_two_squares() {
    let t2 = theta3(30 * GRID).pow_int(2).unwrap();
    // r₂(n) = 4(d₁(n) − d₃(n))
    for n in 1..30i64 {
        let (d1, d3) = (1..=n).filter(|d| n % d == 0).fold((0, 0), |(a, b), d| match d % 4 {
            1 => (a + 1, b),
            3 => (a, b + 1),
            _ => (a, b),
        });
        assert_eq!(t2.coeff_q(n), Q::from_integer((4 * (d1 - d3)).into()), "n={n}");
    }
}
