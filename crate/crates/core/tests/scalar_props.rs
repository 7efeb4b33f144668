use proptest::prelude::*;
use tiletransport::Scalar;

fn scalar() -> impl Strategy<Value = Scalar> {
    (-50i64..50, 1i64..12, -50i64..50, 1i64..12).prop_map(|(a, b, c, d)| {
        Scalar::ratio(a, b) + Scalar::ratio(c, d) * Scalar::phi()
    })
}

proptest! {
    #[test]
    fn ring_laws(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
        prop_assert_eq!((&a * &b) * &c, &a * (&b * &c));
        prop_assert_eq!(&a * (&b + &c), &a * &b + &a * &c);
        prop_assert_eq!(&a - &a, Scalar::zero());
    }

    #[test]
    fn inverse_is_exact(a in scalar()) {
        match a.inverse() {
            Some(inv) => prop_assert_eq!(&a * &inv, Scalar::one()),
            None => prop_assert!(a.is_zero()),
        }
    }

    #[test]
    fn order_agrees_with_floats(a in scalar(), b in scalar()) {
        let (x, y) = (a.to_f64(), b.to_f64());
        if (x - y).abs() > 1e-9 {
            prop_assert_eq!(a < b, x < y);
        }
        prop_assert_eq!(a.abs().to_f64(), x.abs());
    }

    #[test]
    fn text_round_trip(a in scalar()) {
        let back: Scalar = a.to_string().parse().unwrap();
        prop_assert_eq!(&back, &a);
        let json = serde_json::to_string(&a).unwrap();
        let back: Scalar = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn floor_and_ceil_bracket(a in scalar()) {
        let (lo, hi) = (Scalar::from(a.floor()), Scalar::from(a.ceil()));
        prop_assert!(lo <= a && a <= hi);
        prop_assert!(&hi - &lo <= Scalar::one());
    }
}

#[test]
fn phi_satisfies_its_minimal_polynomial() {
    let phi = Scalar::phi();
    assert_eq!(&phi * &phi, &phi + &Scalar::one());
    assert_eq!(phi.pow(-1).unwrap(), &phi - &Scalar::one());
    assert_eq!(phi.norm(), num_rational::BigRational::from_integer((-1).into()));
}
