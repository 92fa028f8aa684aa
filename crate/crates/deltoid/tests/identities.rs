use std::time::Instant;

use deltoid::algebra::{det_fraction_free, rat, rat_int, FieldScalar, MPoly};
use deltoid::diffusion::{boundary_ideal_check, divergence_identity_check, drift_from_measure, pushforward};
use deltoid::models::*;

#[test]
fn sixdim_determinant_factorizes() {
    let m = sixdim_model(&rat_int(3)).unwrap();
    let t = Instant::now();
    let d = det_fraction_free(m.gamma_matrix()).unwrap();
    let (p1, p2) = p1_p2();
    assert_eq!(d, (&p1 * &p2).scale_rational(&rat(243, 64)));
    assert!(t.elapsed().as_secs() < 60, "took {:?}", t.elapsed());
}

#[test]
fn deltoid_determinant_is_minus_p() {
    let m = deltoid_model(&rat_int(1)).unwrap();
    let d = det_fraction_free(m.gamma_matrix()).unwrap();
    assert_eq!(d, -deltoid_boundary());
}

#[test]
fn boundary_cofactors() {
    let m = deltoid_model(&rat(7, 3)).unwrap();
    let c = boundary_ideal_check(&m, &deltoid_boundary()).unwrap();
    assert_eq!(c[0], m.var("Z").unwrap().scale_rational(&rat_int(-3)));
    assert_eq!(c[1], m.var("Zb").unwrap().scale_rational(&rat_int(-3)));

    let s = sixdim_model(&rat_int(3)).unwrap();
    let c = boundary_ideal_check(&s, &p1_p2().0).unwrap();
    for (i, ci) in c.iter().enumerate() {
        assert_eq!(ci, &MPoly::var_at(s.vars(), i).scale_rational(&rat_int(-3)));
    }

    let g = g2_model(&rat(-1, 2), &rat(1, 6)).unwrap();
    let (q1, q2) = q1_q2();
    let v = g.vars();
    let c1 = boundary_ideal_check(&g, &q1).unwrap();
    assert_eq!(c1[0], MPoly::parse(v, "(-2)*s + (-2)").unwrap());
    assert_eq!(c1[1], MPoly::parse(v, "(-2)*s + (-3)*p + (1)").unwrap());
    let c2 = boundary_ideal_check(&g, &q2).unwrap();
    assert_eq!(c2[0], MPoly::parse(v, "(-3)*s").unwrap());
    assert_eq!(c2[1], MPoly::parse(v, "(-6)*p").unwrap());
}

#[test]
fn divergence_is_minus_eleven_halves() {
    let s = sixdim_model(&rat_int(1)).unwrap();
    assert!(divergence_identity_check(&s, &rat(-11, 2)).iter().all(|r| r.holds()));
}

#[test]
fn projection_chain() {
    for l in [rat_int(2), rat_int(3), rat(11, 2)] {
        let six = sixdim_model(&l).unwrap();
        let del = pushforward(&six, &pi_map(), "pi").unwrap();
        assert_eq!(del.first_difference(&deltoid_model(&l).unwrap()), None);
        let g = pushforward(&del, &psi_map(), "psi").unwrap();
        assert_eq!(g.first_difference(&g2_from_lambda(&l).unwrap()), None);
    }
}

#[test]
fn reversible_measure_of_sixdim() {
    for l in [rat_int(3), rat(11, 2)] {
        let s = sixdim_model(&l).unwrap();
        let b = drift_from_measure(s.vars(), s.gamma_matrix(), &sixdim_measure(&l)).unwrap();
        assert_eq!(b, s.drift());
    }
}

#[test]
fn psi1_printed_and_corrected() {
    let a2 = rat(1, 2);
    let printed = psi1_intertwining(&rat(-1, 2), &a2, Psi1Variant::Printed).unwrap();
    assert!(printed.factor.is_none());
    let corrected = psi1_intertwining(&rat(-1, 2), &a2, Psi1Variant::Corrected).unwrap();
    assert_eq!(corrected.factor, Some(rat_int(3)));
    let zero = psi1_intertwining(&rat_int(0), &a2, Psi1Variant::Corrected).unwrap();
    assert!(zero.image.is_err());
}

#[test]
fn q2_under_psi_contains_p() {
    let (q1, q2) = q1_q2();
    let psi = psi_map();
    let back = q2.substitute(&psi.images).unwrap();
    assert!(back.divide_exact(&deltoid_boundary()).is_ok());
    let q1b = q1.substitute(&psi.images).unwrap();
    let v = q1b.vars().clone();
    let d = &MPoly::var_at(&v, 0) - &MPoly::var_at(&v, 1);
    assert_eq!(q1b, &d * &d);
    let _ = FieldScalar::one();
}
