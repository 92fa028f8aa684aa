use deltoid::algebra::{rat, FieldScalar, MPoly, Monomial, VarList};
use deltoid::models::deltoid_model;
use proptest::prelude::*;

fn scalar() -> impl Strategy<Value = FieldScalar> {
    (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5, 1i64..=4)
        .prop_map(|(a, b, c, d, q)| FieldScalar::new(rat(a, q), rat(b, q), rat(c, q), rat(d, q)))
}

fn poly() -> impl Strategy<Value = MPoly> {
    prop::collection::vec((0u32..4, 0u32..4, scalar()), 0..6).prop_map(|terms| {
        let v = VarList::new(&["Z", "Zb"]);
        MPoly::from_terms(&v, terms.into_iter().map(|(a, b, c)| (Monomial(vec![a, b]), c)))
    })
}

proptest! {
    #[test]
    fn field_ring_laws(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!((&x * &y).conj(), &x.conj() * &y.conj());
        if let Some(inv) = x.inv() {
            prop_assert!((&x * &inv).is_one());
        } else {
            prop_assert!(x.is_zero());
        }
    }

    #[test]
    fn scalar_text_round_trip(x in scalar()) {
        prop_assert_eq!(x.to_string().parse::<FieldScalar>().unwrap(), x);
    }

    #[test]
    fn poly_ring_laws(f in poly(), g in poly(), h in poly()) {
        prop_assert_eq!(&(&f * &g) * &h, &f * &(&g * &h));
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
        if !g.is_zero() {
            prop_assert_eq!((&f * &g).divide_exact(&g).unwrap(), f.clone());
        }
    }

    #[test]
    fn poly_text_round_trip(f in poly()) {
        prop_assert_eq!(MPoly::parse(f.vars(), &f.to_string()).unwrap(), f);
    }

    #[test]
    fn conj_swap_is_an_involution(f in poly()) {
        let back = f.conj_swap(&[("Z", "Zb")]).unwrap().conj_swap(&[("Z", "Zb")]).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn leibniz_rule(f in poly(), g in poly()) {
        prop_assert_eq!((&f * &g).derivative(0), &(&f.derivative(0) * &g) + &(&f * &g.derivative(0)));
    }

    // L(fg) = f L(g) + g L(f) + 2 Gamma(f, g) for a diffusion operator.
    #[test]
    fn carre_du_champ_identity(f in poly(), g in poly(), q in 1i64..8) {
        let m = deltoid_model(&rat(q, 2)).unwrap();
        let lhs = m.l_apply(&(&f * &g)).unwrap();
        let two = rat(2, 1);
        let rhs = &(&(&f * &m.l_apply(&g).unwrap()) + &(&g * &m.l_apply(&f).unwrap())) + &m.gamma_apply(&f, &g).unwrap().scale_rational(&two);
        prop_assert_eq!(lhs, rhs);
    }
}
