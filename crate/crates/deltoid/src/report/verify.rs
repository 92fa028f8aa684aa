//! The one-shot verification suite.

use std::fmt::Display;

use num::Zero;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::{Config, ReportEntry, Status, VerificationReport};
use crate::algebra::{det_fraction_free, rat, rat_int, FieldScalar, MPoly, Rational};
use crate::diffusion::{
    boundary_ideal_check, divergence_identity_check, drift_from_measure, identity_for_all_lambda, pushforward,
    DiffusionModel,
};
use crate::error::ReportError;
use crate::hypergroup::*;
use crate::models::*;
use crate::quadrature::{integrate_exact, jacobian_weight_audit, TorusGrid};
use crate::sampling::*;
use crate::spectral::{eigen_g2, eigen_r, lambda_nk, verify_rotation, EigenTable};

const ALGEBRA: &str = "exact-algebra";
const DIFFUSION: &str = "diffusion-core";
const MODELS: &str = "model-zoo";
const SPECTRAL: &str = "spectral";
const QUADRATURE: &str = "quadrature";
const SAMPLING: &str = "sampling";
const HYPERGROUP: &str = "hypergroup-probe";

/// Quadrature grid for the probe norms at lambda = 11/2.
const PROBE_NORM_GRID: usize = 256;

struct Suite<'a> {
    cfg: &'a Config,
    entries: Vec<ReportEntry>,
}

fn exact(r: Result<(), String>) -> Status {
    match r {
        Ok(()) => Status::ProvenExact,
        Err(witness) => Status::ExactFail { witness },
    }
}

fn numeric(ok: bool, tol: impl Display) -> Status {
    let tolerance = tol.to_string();
    if ok {
        Status::NumericPass { tolerance }
    } else {
        Status::NumericFail { tolerance }
    }
}

fn interpolated(r: Result<crate::diffusion::LambdaProof, crate::error::DiffusionError>) -> Status {
    match r {
        Ok(p) => match p.failure {
            None => Status::ProvenByInterpolation { lambdas: p.lambdas.iter().map(|l| l.to_string()).collect() },
            Some((l, why)) => Status::ExactFail { witness: format!("lambda = {l}: {why}") },
        },
        Err(e) => Status::ExactFail { witness: e.to_string() },
    }
}

fn ensure(ok: bool, witness: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(witness())
    }
}

impl Suite<'_> {
    fn push(&mut self, module: &str, name: &str, anchor: &str, status: Status, details: impl Into<String>) {
        self.entries.push(ReportEntry {
            name: name.into(),
            anchor: anchor.into(),
            module: module.into(),
            status,
            details: details.into(),
        });
    }

    fn sigma(&self) -> f64 {
        self.cfg.sigma
    }
}

/// The deltoid model, or its corrupted copy under the test fixture.
fn deltoid_for(cfg: &Config, lambda: &Rational) -> Result<DiffusionModel, ReportError> {
    let m = deltoid_model(lambda)?;
    if !cfg.fixture_corrupt_gamma {
        return Ok(m);
    }
    let mut g = m.gamma_matrix().to_vec();
    g[0][0] = &g[0][0] + &MPoly::one(m.vars());
    Ok(DiffusionModel::new("deltoid-corrupted", m.vars().clone(), g, m.drift().to_vec(), m.params().clone())?)
}

fn random_poly(r: &mut ChaCha8Rng, degree: u32) -> MPoly {
    let v = deltoid_vars();
    let mut terms = Vec::new();
    for a in 0..=degree {
        for b in 0..=degree - a {
            let re = r.gen_range(-3..=3);
            let im = r.gen_range(-3..=3);
            let c = &FieldScalar::from_int(re) + &(&FieldScalar::i() * &FieldScalar::from_int(im));
            terms.push((crate::algebra::Monomial(vec![a, b]), c));
        }
    }
    MPoly::from_terms(&v, terms)
}

pub fn run_verify(cfg: &Config) -> Result<VerificationReport, ReportError> {
    cfg.validate()?;
    let mut s = Suite { cfg, entries: Vec::new() };
    algebra_checks(&mut s)?;
    diffusion_checks(&mut s)?;
    spectral_checks(&mut s)?;
    quadrature_checks(&mut s)?;
    sampling_checks(&mut s)?;
    hypergroup_checks(&mut s)?;
    Ok(VerificationReport { config: cfg.to_map(), entries: s.entries })
}

fn algebra_checks(s: &mut Suite) -> Result<(), ReportError> {
    let j = FieldScalar::j();
    let r = ensure(j.pow(3).is_one(), || format!("j^3 = {}", j.pow(3))).and_then(|_| {
        ensure((&(&FieldScalar::one() + &j) + &FieldScalar::jbar()).is_zero(), || "1 + j + jbar != 0".into())
    });
    s.push(ALGEBRA, "cube roots of unity", "number field Q(i, sqrt3)", exact(r), "j^3 = 1 and 1 + j + jbar = 0");

    let x: FieldScalar = "1+1*i+1*r3+2*i*r3".parse()?;
    let r = x
        .inv()
        .ok_or_else(|| "x has no inverse".to_string())
        .and_then(|y| ensure((&x * &y).is_one(), || format!("x * x^-1 = {}", &x * &y)));
    s.push(ALGEBRA, "field inverse", "number field Q(i, sqrt3)", exact(r), "x * x^-1 = 1 for x = 1 + i + r3 + 2 i r3");

    let (p1, _) = p1_p2();
    let r = [deltoid_boundary(), p1, q1_q2().1].iter().try_for_each(|p| {
        let back = MPoly::parse(p.vars(), &p.to_string()).map_err(|e| e.to_string())?;
        ensure(&back == p, || format!("round trip changed {p}"))
    });
    s.push(
        ALGEBRA,
        "canonical text round trip",
        "polynomial serialization",
        exact(r),
        "P, P1 and Q2 re-parse to themselves",
    );
    Ok(())
}

fn diffusion_checks(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let two = [rat_int(2), rat_int(3)];

    let d = deltoid_for(cfg, &rat_int(2))?;
    let det = det_fraction_free(d.gamma_matrix())?;
    let r = ensure(det == -deltoid_boundary(), || format!("det = {det}"));
    s.push(
        DIFFUSION,
        "deltoid metric determinant",
        "deltoid operator, boundary polynomial",
        exact(r),
        "det Gamma = -P",
    );

    let r = boundary_ideal_check(&d, &deltoid_boundary()).map_err(|e| e.to_string()).and_then(|c| {
        let want = |v: &str| d.var(v).map(|x| x.scale_rational(&rat_int(-3))).map_err(|e| e.to_string());
        ensure(c[0] == want("Z")? && c[1] == want("Zb")?, || format!("cofactors {} and {}", c[0], c[1]))
    });
    s.push(
        DIFFUSION,
        "deltoid boundary ideal",
        "deltoid operator, boundary equation",
        exact(r),
        "Gamma(P, Z) = -3 Z P, Gamma(P, Zb) = -3 Zb P",
    );

    let proof = identity_for_all_lambda(1, &two, |l| {
        let m = deltoid_for(cfg, l).map_err(|e| e.to_string())?;
        let b = drift_from_measure(m.vars(), m.gamma_matrix(), &deltoid_measure(l)).map_err(|e| e.to_string())?;
        ensure(b == m.drift(), || format!("drift from P^alpha: {}, {}", b[0], b[1]))
    });
    s.push(
        DIFFUSION,
        "deltoid reversible measure",
        "deltoid measure density",
        interpolated(proof),
        "drift recovered from P^((2 lambda - 5)/6); degree 1 in lambda",
    );

    let six = sixdim_model(&rat_int(3))?;
    let (p1, p2) = p1_p2();
    let det = det_fraction_free(six.gamma_matrix())?;
    let want = (&p1 * &p2).scale_rational(&rat(243, 64));
    let r = ensure(det == want, || "det differs from (243/64) P1 P2".into());
    s.push(
        DIFFUSION,
        "sixdim metric determinant",
        "six-dimensional operator, determinant",
        exact(r),
        "det = (243/64) P1 P2, 6 x 6 Bareiss",
    );

    let r = boundary_ideal_check(&six, &p1).map_err(|e| e.to_string()).and_then(|c| {
        c.iter().enumerate().try_for_each(|(i, ci)| {
            let want = MPoly::var_at(six.vars(), i).scale_rational(&rat_int(-3));
            ensure(ci == &want, || format!("cofactor of {} is {ci}", six.vars().names()[i]))
        })
    });
    s.push(
        DIFFUSION,
        "sixdim boundary ideal",
        "six-dimensional operator, boundary",
        exact(r),
        "Gamma(P1, v) = -3 v P1 for all six variables",
    );

    let div = divergence_identity_check(&six, &rat(-11, 2));
    let r = div.iter().find(|d| !d.holds()).map_or(Ok(()), |d| Err(format!("{d:?}")));
    s.push(
        DIFFUSION,
        "sixdim divergence identity",
        "six-dimensional operator, divergence",
        exact(r),
        "sum of derivatives of the metric = -(11/2) z_i",
    );

    let proof = identity_for_all_lambda(1, &two, |l| {
        let m = sixdim_model(l).map_err(|e| e.to_string())?;
        let b = drift_from_measure(m.vars(), m.gamma_matrix(), &sixdim_measure(l)).map_err(|e| e.to_string())?;
        ensure(b == m.drift(), || "drift from P1^beta differs".into())
    });
    s.push(
        DIFFUSION,
        "sixdim reversible measure",
        "six-dimensional reversible measure",
        interpolated(proof),
        "drift recovered from P1^((2 lambda - 11)/6)",
    );

    let proof = identity_for_all_lambda(1, &two, |l| {
        let six = sixdim_model(l).map_err(|e| e.to_string())?;
        let del = pushforward(&six, &pi_map(), "pi").map_err(|e| e.to_string())?;
        let target = deltoid_for(cfg, l).map_err(|e| e.to_string())?;
        del.first_difference(&target).map_or(Ok(()), Err)
    });
    s.push(
        DIFFUSION,
        "projection to the deltoid",
        "projection pi = (z1 + z2 + z3)/3",
        interpolated(proof),
        "pi pushes sixdim(lambda) to deltoid(lambda)",
    );

    let proof = identity_for_all_lambda(1, &two, |l| {
        let del = deltoid_for(cfg, l).map_err(|e| e.to_string())?;
        let g = pushforward(&del, &psi_map(), "psi").map_err(|e| e.to_string())?;
        g.first_difference(&g2_from_lambda(l).map_err(|e| e.to_string())?).map_or(Ok(()), Err)?;
        let v = g2_vars();
        let ls = MPoly::var_at(&v, 0).scale_rational(&-l);
        let lp = &MPoly::one(&v) - &MPoly::var_at(&v, 1).scale_rational(&(l * rat_int(2) + rat_int(1)));
        ensure(g.drift() == [ls, lp], || "G2 drift is not (-lambda s, 1 - (2 lambda + 1) p)".into())
    });
    s.push(
        DIFFUSION,
        "projection to G2",
        "map Psi = (Z + Zb, Z Zb)",
        interpolated(proof),
        "Psi pushes deltoid(lambda) to g2(-1/2, (2 lambda - 5)/6) with drift (-lambda s, 1 - (2 lambda + 1) p)",
    );

    let (q1, q2) = q1_q2();
    let det = g2_determinant();
    let r = ensure(det == (&q1 * &q2).scale_rational(&rat(1, 4)), || format!("det = {det}"));
    s.push(
        DIFFUSION,
        "G2 determinant factorization",
        "G2 operator, boundary",
        exact(r),
        "det = Q1 Q2 / 4 with Q1 = s^2 - 4p",
    );

    let g = g2_model(&rat(-1, 2), &rat(1, 6))?;
    let v = g.vars().clone();
    let parse = |t: &str| MPoly::parse(&v, t).expect("fixed text");
    let r = (|| {
        let c1 = boundary_ideal_check(&g, &q1).map_err(|e| e.to_string())?;
        let c2 = boundary_ideal_check(&g, &q2).map_err(|e| e.to_string())?;
        ensure(c1[0] == parse("(-2)*s + (-2)"), || format!("Gamma(Q1, s) / Q1 = {}", c1[0]))?;
        ensure(c1[1] == parse("(-3)*p + (-2)*s + (1)"), || format!("Gamma(Q1, p) / Q1 = {}", c1[1]))?;
        ensure(c2[0] == parse("(-3)*s"), || format!("Gamma(Q2, s) / Q2 = {}", c2[0]))?;
        ensure(c2[1] == parse("(-6)*p"), || format!("Gamma(Q2, p) / Q2 = {}", c2[1]))
    })();
    s.push(
        DIFFUSION,
        "G2 boundary ideal",
        "G2 gradient identities",
        exact(r),
        "Gamma(Q1,s) = (-2s-2) Q1, Gamma(Q1,p) = (-3p-2s+1) Q1, Gamma(Q2,s) = -3s Q2, Gamma(Q2,p) = -6p Q2",
    );

    let psi = psi_map();
    let r = (|| {
        let a = q1.substitute(&psi.images).map_err(|e| e.to_string())?;
        let dv = a.vars().clone();
        let diff = &MPoly::var_at(&dv, 0) - &MPoly::var_at(&dv, 1);
        ensure(a == &diff * &diff, || format!("Q1 o Psi = {a}"))?;
        let b = q2.substitute(&psi.images).map_err(|e| e.to_string())?;
        b.divide_exact(&deltoid_boundary()).map(|_| ()).map_err(|e| format!("P does not divide Q2 o Psi: {e}"))
    })();
    s.push(
        DIFFUSION,
        "G2 boundary under Psi",
        "G2 boundary components",
        exact(r),
        "Q1 o Psi = (Z - Zb)^2 and P divides Q2 o Psi",
    );

    let [(det_label, det_form), (named_label, named_form)] = q2_printed_variants();
    let status = if q2 == named_form && q2 != det_form {
        Status::DiscrepancyNoted {
            computed: format!("Q2 = det / (Q1/4) = {q2}"),
            printed: format!("{det_label} (determinant display) vs {named_label} (named factor)"),
        }
    } else if q2 == named_form && q2 == det_form {
        Status::ProvenExact
    } else {
        Status::ExactFail { witness: format!("computed Q2 = {q2} matches neither printing") }
    };
    s.push(
        DIFFUSION,
        "Q2 printed variants",
        "G2 determinant display",
        status,
        "exact division resolves the two printings",
    );

    psi1_checks(s)?;

    let pts: Vec<(f64, f64)> = (0..50).map(|i| (0.37 * i as f64 + 0.1, 1.3 - 0.61 * i as f64)).collect();
    let fc = flat_check(&pts);
    let status = if fc.max_residual < 1e-12 && fc.max_residual_plus_sign > 1e-3 {
        Status::DiscrepancyNoted {
            computed: "Gamma(z_i, zb_j) = (e_i . e_j) z_i zb_j = -(1/2) z_i zb_j for i != j".into(),
            printed: "+(1/2) z_i zb_j".into(),
        }
    } else if fc.max_residual_plus_sign < 1e-12 {
        Status::NumericPass { tolerance: "1e-12".into() }
    } else {
        Status::NumericFail { tolerance: "1e-12".into() }
    };
    s.push(
        MODELS,
        "flat torus cross term",
        "flat model on the torus",
        status,
        format!(
            "residual {:.1e} with the computed sign, {:.2} with the printed sign, deltoid image residual {:.1e} on {} torus points",
            fc.max_residual, fc.max_residual_plus_sign, fc.deltoid_residual, fc.points
        ),
    );

    membership_checks(s);
    Ok(())
}

fn psi1_checks(s: &mut Suite) -> Result<(), ReportError> {
    let a2s = [rat_int(0), rat(1, 2), rat(3, 2)];
    let mut printed_ok = true;
    let mut corrected_ok = true;
    let mut printed_note = String::new();
    for a2 in &a2s {
        let p = psi1_intertwining(&rat(-1, 2), a2, Psi1Variant::Printed)?;
        if p.factor != Some(rat(1, 3)) {
            printed_ok = false;
            printed_note = match (&p.image, &p.factor) {
                (Err(e), _) => format!("printed map: {e}"),
                (Ok(img), None) => {
                    format!("printed map closes but Gamma(S,S) = {} is no multiple of the target", img.gamma(0, 0))
                }
                (Ok(_), Some(f)) => format!("printed map gives factor {f}"),
            };
        }
        let c = psi1_intertwining(&rat(-1, 2), a2, Psi1Variant::Corrected)?;
        corrected_ok &= c.factor == Some(rat_int(3));
    }
    let status = match (printed_ok, corrected_ok) {
        (true, _) => Status::ProvenExact,
        (false, true) => Status::DiscrepancyNoted {
            computed: "(S, P) = (3p - 1, 1 + 3s^3 - 9ps - 6p) pushes g2(-1/2, a2) to exactly 3 g2(a2, -1/2)".into(),
            printed: "(S, P) = (3p - 1, 1 + s^3 - 3ps - 6p) with factor 1/3".into(),
        },
        (false, false) => Status::ExactFail { witness: printed_note.clone() },
    };
    s.push(
        DIFFUSION,
        "Psi_1 intertwining",
        "map Psi_1 and the G2 family",
        status,
        format!("a2 in {{0, 1/2, 3/2}}; {printed_note}"),
    );

    let r = a2s.iter().try_for_each(|a2| {
        [Psi1Variant::Printed, Psi1Variant::Corrected].iter().try_for_each(|v| {
            let o = psi1_intertwining(&rat_int(0), a2, *v).map_err(|e| e.to_string())?;
            match o.image {
                Err(crate::error::DiffusionError::NotClosed { .. }) => Ok(()),
                Err(e) => Err(format!("unexpected error {e}")),
                Ok(_) => Err(format!("closed at a1 = 0, a2 = {a2}, {v:?}")),
            }
        })
    });
    s.push(
        DIFFUSION,
        "Psi_1 not closed at a1 = 0",
        "map Psi_1 and the G2 family",
        exact(r),
        "both variants report not-closed",
    );
    Ok(())
}

fn membership_checks(s: &mut Suite) {
    let mut r = ChaCha8Rng::seed_from_u64(s.cfg.seed);
    let mut bad = 0;
    let n = 20_000;
    for _ in 0..n {
        let z = Complex64::new(r.gen_range(-1.2..1.2), r.gen_range(-1.2..1.2));
        if !membership_report(z).consistent {
            bad += 1;
        }
    }
    let cusps_ok = cusps().iter().all(|c| membership_deltoid(c.to_complex()) == Membership::Boundary);
    s.push(
        MODELS,
        "deltoid membership by cubic roots",
        "cubic characterization of the deltoid",
        numeric(bad == 0 && cusps_ok, "1e-9 on root moduli"),
        format!("{bad} of {n} random points disagree with the sign of P; cusps classed boundary: {cusps_ok}"),
    );
}

type BlockCheck = dyn Fn(&Rational, &DiffusionModel, u32, u32) -> Result<(), String> + Sync;

fn spectral_checks(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let d = cfg.degree_max;
    let idx: Vec<(u32, u32)> = (0..=d).flat_map(|t| (0..=t).map(move |n| (n, t - n))).collect();
    let models: Vec<(Rational, DiffusionModel)> =
        cfg.lambdas.iter().map(|l| Ok((l.clone(), deltoid_for(cfg, l)?))).collect::<Result<_, ReportError>>()?;

    let per_lambda = |check: &BlockCheck| -> Result<(), String> {
        models.par_iter().try_for_each(|(l, m)| idx.iter().try_for_each(|&(n, k)| check(l, m, n, k)))
    };

    let r = per_lambda(&|l, m, n, k| {
        let e = eigen_r(m, n, k).map_err(|e| format!("lambda {l} ({n},{k}): {e}"))?;
        let want = lambda_nk(l, n, k);
        ensure(e.eigenvalue == want, || format!("lambda {l} ({n},{k}): eigenvalue {} vs {want}", e.eigenvalue))?;
        let lr = m.l_apply(&e.poly).map_err(|e| e.to_string())?;
        ensure(lr == e.poly.scale_rational(&-want), || format!("lambda {l} ({n},{k}): L(R) + mu R != 0"))
    });
    let ls: Vec<String> = cfg.lambdas.iter().map(|l| l.to_string()).collect();
    s.push(
        SPECTRAL,
        "deltoid eigen relation",
        "eigenbasis R of the deltoid operator",
        exact(r),
        format!("L(R_nk) = -((lambda-1)(n+k) + n^2 + k^2 + nk) R_nk for n+k <= {d}, lambda in {{{}}}", ls.join(", ")),
    );

    let r = per_lambda(&|l, m, n, k| {
        let a = eigen_r(m, n, k).map_err(|e| e.to_string())?;
        let b = eigen_r(m, k, n).map_err(|e| e.to_string())?;
        let sw = a.poly.conj_swap(&[("Z", "Zb")]).map_err(|e| e.to_string())?;
        ensure(sw == b.poly, || format!("lambda {l}: conj_swap(R_{n}{k}) != R_{k}{n}"))
    });
    s.push(SPECTRAL, "conjugation swap", "eigenbasis R of the deltoid operator", exact(r), "conj_swap(R_nk) = R_kn");

    let r = per_lambda(&|l, m, n, k| {
        if n < k {
            return Ok(());
        }
        let a = eigen_r(m, n, k).map_err(|e| e.to_string())?;
        let b = eigen_r(m, k, n).map_err(|e| e.to_string())?;
        let half = rat(1, 2);
        let p = (&a.poly + &b.poly).scale_rational(&half);
        let q = (&a.poly - &b.poly).scale(&FieldScalar::i()).scale_rational(&-half);
        ensure(a.poly.has_rational_coeffs() && p.has_rational_coeffs(), || {
            format!("lambda {l} ({n},{k}): R or P not rational")
        })?;
        let imaginary = q.terms().all(|(_, c)| {
            let [a, _, c3, d3] = c.parts();
            a.is_zero() && c3.is_zero() && d3.is_zero()
        });
        ensure(imaginary, || format!("lambda {l} ({n},{k}): Q not purely imaginary"))
    });
    s.push(
        SPECTRAL,
        "coefficient realness",
        "eigenbasis P, Q of the deltoid operator",
        exact(r),
        "R and P rational, Q in i Q",
    );

    let r = per_lambda(&|l, m, n, k| {
        if n < k {
            return Ok(());
        }
        let rep = verify_rotation(m, n, k).map_err(|e| e.to_string())?;
        ensure(rep.holds(), || format!("lambda {l} ({n},{k}): {rep:?}"))
    });
    s.push(
        SPECTRAL,
        "rotation relation",
        "rotation of P, Q by j",
        exact(r),
        "P(jZ), Q(jZ) as the rotation by 2(n-k)pi/3 of (P, Q); compact form (P - iQ)(jZ) = jbar^(n-k) (P - iQ)(Z) with Q = -i(R_nk - R_kn)/2",
    );

    let r = cfg.lambdas.par_iter().try_for_each(|l| {
        let g = g2_from_lambda(l).map_err(|e| e.to_string())?;
        (0..=d).try_for_each(|w| {
            let polys = eigen_g2(&g, w).map_err(|e| format!("lambda {l}, weight {w}: {e}"))?;
            polys.iter().try_for_each(|e| {
                let lr = g.l_apply(&e.poly).map_err(|e| e.to_string())?;
                ensure(lr == e.poly.scale_rational(&-e.eigenvalue.clone()), || {
                    format!("lambda {l}: G2 ({},{}) fails", e.n, e.k)
                })?;
                ensure(e.eigenvalue == lambda_nk(l, e.n, e.k), || {
                    format!("lambda {l}: G2 ({},{}) eigenvalue {}", e.n, e.k, e.eigenvalue)
                })
            })
        })
    });
    s.push(
        SPECTRAL,
        "G2 eigen relation",
        "G2 operator, weighted degree",
        exact(r),
        format!("leading term s^r p^t graded by r + 2t (printed as s + 2t); eigenvalue lambda_(r+t, t); weight <= {d}"),
    );

    cusp_check(s)?;
    Ok(())
}

/// Grid points of the bounding box with `cells` cells per side.
fn cusp_argmax(table: &EigenTable, cells: usize) -> Vec<(f64, Complex64)> {
    let (hx, hy) = (1.5 / cells as f64, 3f64.sqrt() / cells as f64);
    let rows: Vec<Vec<(f64, Complex64)>> = (0..=cells)
        .into_par_iter()
        .map(|i| {
            let mut best = vec![(0.0, Complex64::zero()); table.blocks().len()];
            for j in 0..=cells {
                let z = Complex64::new(-0.5 + i as f64 * hx, -3f64.sqrt() / 2.0 + j as f64 * hy);
                if deltoid_boundary_value(z) <= 0.0 {
                    continue;
                }
                for (b, (p, _)) in table.eval_all(z).into_iter().enumerate() {
                    if p.abs() > best[b].0 {
                        best[b] = (p.abs(), z);
                    }
                }
            }
            best
        })
        .collect();
    let mut best = vec![(0.0, Complex64::zero()); table.blocks().len()];
    for row in rows {
        for (b, v) in row.into_iter().enumerate() {
            if v.0 > best[b].0 {
                best[b] = v;
            }
        }
    }
    best
}

fn cusp_check(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let cells = cfg.cusp_grid;
    let (hx, hy) = (1.5 / cells as f64, 3f64.sqrt() / cells as f64);
    let mut far = Vec::new();
    for l in &cfg.cusp_lambdas {
        let table = EigenTable::build(l, cfg.scan_degree_max)?;
        for (b, (v, z)) in table.blocks().iter().zip(cusp_argmax(&table, cells)) {
            if b.n + b.k == 0 {
                continue;
            }
            if (z.re - 1.0).abs() > hx * (1.0 + 1e-9) || z.im.abs() > hy * (1.0 + 1e-9) {
                far.push(format!("lambda {l} ({},{}): max {v:.3e} at {z:.4}", b.n, b.k));
            }
        }
    }
    s.push(
        SPECTRAL,
        "maximum at the cusp",
        "hypergroup point x0 = 1",
        numeric(far.is_empty(), "one grid cell"),
        if far.is_empty() {
            format!(
                "max |P_nk| on the interior nodes of a {cells} x {cells} grid sits next to Z = 1 for 1 <= n+k <= {}",
                cfg.scan_degree_max
            )
        } else {
            far.join("; ")
        },
    );
    Ok(())
}

fn gram_basis(table: &EigenTable) -> (Vec<MPoly>, Vec<(u32, u32, bool)>) {
    let mut basis = Vec::new();
    let mut tags = Vec::new();
    for b in table.blocks() {
        basis.push(b.p.poly.clone());
        tags.push((b.n, b.k, false));
        if let Some(q) = &b.q {
            basis.push(q.poly.clone());
            tags.push((b.n, b.k, true));
        }
    }
    (basis, tags)
}

fn quadrature_checks(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let mut off: f64 = 0.0;
    let mut rot_diff: f64 = 0.0;
    let mut fixed_diff: f64 = 0.0;
    let mut refine: f64 = 0.0;
    let mut recovery: f64 = 0.0;
    for l in &cfg.gram_lambdas {
        let table = EigenTable::build(l, cfg.gram_degree_max)?;
        let (basis, tags) = gram_basis(&table);
        let grid = TorusGrid::new(l, cfg.grid)?;
        let g = grid.gram(&basis);
        let g2 = TorusGrid::new(l, 2 * cfg.grid)?.gram(&basis);
        refine = refine.max((&g - &g2).abs().max());
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                if i != j {
                    off = off.max(g[(i, j)].abs());
                }
            }
            if tags[i].2 {
                let d = (g[(i, i)].sqrt() - g[(i - 1, i - 1)].sqrt()).abs();
                if (tags[i].0 as i64 - tags[i].1 as i64).rem_euclid(3) != 0 {
                    rot_diff = rot_diff.max(d);
                } else {
                    fixed_diff = fixed_diff.max(d / g[(i, i)].sqrt());
                }
            }
        }
        let model = deltoid_model(l)?;
        for b in table.blocks().iter().filter(|b| b.n + b.k > 0) {
            let lp = model.l_apply(&b.p.poly)?;
            let num = grid.integrate_poly(&(&b.p.poly * &lp)).re;
            let den = grid.integrate_poly(&(&b.p.poly * &b.p.poly)).re;
            let mu = crate::algebra::rational_to_f64(&b.eigenvalue);
            recovery = recovery.max((num / den + mu).abs());
        }
    }
    let ls: Vec<String> = cfg.gram_lambdas.iter().map(|l| l.to_string()).collect();
    let ls = ls.join(", ");
    s.push(
        QUADRATURE,
        "Gram orthogonality",
        "orthogonal polynomial basis",
        numeric(off < cfg.gram_tol, cfg.gram_tol),
        format!(
            "max off-diagonal {off:.2e} for P, Q with n+k <= {}, lambda in {{{ls}}}, N = {}",
            cfg.gram_degree_max, cfg.grid
        ),
    );
    s.push(
        QUADRATURE,
        "norm equality off the diagonal classes",
        "norms of P and Q",
        numeric(rot_diff < cfg.gram_tol, cfg.gram_tol),
        format!("max | |P| - |Q| | = {rot_diff:.2e} for n - k not divisible by 3"),
    );
    s.push(
        QUADRATURE,
        "norm ratio on the diagonal classes",
        "norms of P and Q, n = k mod 3",
        numeric(fixed_diff.is_finite(), "measured only"),
        format!("measured max relative | |P| - |Q| | = {fixed_diff:.2e} for n = k mod 3 (not asserted)"),
    );
    s.push(
        QUADRATURE,
        "grid refinement",
        "periodic trapezoid convergence",
        numeric(refine < 1e-10, "1e-10"),
        format!("max Gram change N -> 2N = {refine:.2e}"),
    );
    s.push(
        QUADRATURE,
        "eigenvalue recovery",
        "eigenbasis R of the deltoid operator",
        numeric(recovery < 1e-7, "1e-7"),
        format!("max | int P L(P) / int P^2 + mu | = {recovery:.2e}"),
    );

    let mut r = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x5a);
    let mut worst: f64 = 0.0;
    let mut invariant: f64 = 0.0;
    for l in &cfg.gram_lambdas {
        let model = deltoid_model(l)?;
        let grid = TorusGrid::new(l, cfg.grid)?;
        for _ in 0..cfg.selfadjoint_pairs {
            let f = random_poly(&mut r, 3);
            let g = random_poly(&mut r, 3);
            worst = worst.max(grid.selfadjoint_residual(&model, &f, &g)?);
            invariant = invariant.max(grid.integrate_poly(&model.l_apply(&f)?).norm());
        }
    }
    s.push(
        QUADRATURE,
        "self-adjointness",
        "integration by parts",
        numeric(worst < cfg.selfadjoint_tol, cfg.selfadjoint_tol),
        format!(
            "max |int f L(g) + int Gamma(f, g)| = {worst:.2e} over {} random pairs per lambda",
            cfg.selfadjoint_pairs
        ),
    );
    s.push(
        QUADRATURE,
        "invariant measure",
        "integration by parts",
        numeric(invariant < cfg.selfadjoint_tol, cfg.selfadjoint_tol),
        format!("max |int L(f)| = {invariant:.2e}"),
    );

    let l = rat_int(4);
    let wrong = deltoid_model(&rat_int(5))?;
    let grid = TorusGrid::new(&l, cfg.grid)?;
    let v = deltoid_vars();
    let sz = &MPoly::var_at(&v, 0) + &MPoly::var_at(&v, 1);
    let good = grid.selfadjoint_residual(&deltoid_model(&l)?, &sz, &sz)?;
    let bad = grid.selfadjoint_residual(&wrong, &sz, &sz)?;
    s.push(
        QUADRATURE,
        "self-adjointness negative control",
        "integration by parts",
        numeric(good < cfg.selfadjoint_tol && bad > 1e-3, "1e-3"),
        format!("f = g = Z + Zb at lambda 4: residual {good:.1e}; with the lambda 5 drift {bad:.3}"),
    );

    let r2 = (|| {
        let mut r = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xe7);
        for l in [rat_int(1), rat_int(4)] {
            let m = deltoid_model(&l).map_err(|e| e.to_string())?;
            for _ in 0..5 {
                let g = random_poly(&mut r, 4);
                let v =
                    integrate_exact(&m.l_apply(&g).map_err(|e| e.to_string())?, &l, 12).map_err(|e| e.to_string())?;
                ensure(v.is_zero(), || format!("lambda {l}: int L(g) = {v}"))?;
            }
        }
        Ok(())
    })();
    s.push(
        QUADRATURE,
        "exact summation mode",
        "integration by parts",
        exact(r2),
        "int 1 L(g) + int Gamma(1, g) = 0 exactly on the 12 x 12 grid, lambda in {1, 4}",
    );

    let a = jacobian_weight_audit(64);
    s.push(
        QUADRATURE,
        "Jacobian weight audit",
        "torus parametrization of the deltoid",
        numeric(a.max_rel_deviation < 1e-9 && a.lambda1_weight_deviation < 1e-9 && a.critical_max.0 < 1e-12, "1e-9"),
        format!(
            "|J|^2 / P = {:.15} (max rel. deviation {:.1e}, {} nodes); P^(-1/2)|J| deviation {:.1e}; on t1 = t2: |J| <= {:.1e}, |P| <= {:.1e}",
            a.ratio_median, a.max_rel_deviation, a.nodes_used, a.lambda1_weight_deviation, a.critical_max.0, a.critical_max.1
        ),
    );
    Ok(())
}

/// Largest z-score of the `Phat`, `Qhat` means (1 <= n+k <= degree) against 0.
fn eigen_mean_scores(batch: &SampleBatch, table: &EigenTable) -> (f64, usize) {
    let vals: Vec<Vec<(f64, f64)>> =
        (0..batch.len()).into_par_iter().map(|i| table.eval_all(batch.get(i).z())).collect();
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for (bi, b) in table.blocks().iter().enumerate() {
        if b.n + b.k == 0 {
            continue;
        }
        let p: Vec<f64> = vals.iter().map(|v| v[bi].0).collect();
        worst = worst.max(moment_of(&p, batch.chain_len).z_score(0.0));
        count += 1;
        if b.q.is_some() {
            let q: Vec<f64> = vals.iter().map(|v| v[bi].1).collect();
            worst = worst.max(moment_of(&q, batch.chain_len).z_score(0.0));
            count += 1;
        }
    }
    (worst, count)
}

fn s1(p: SamplePoint<'_>) -> f64 {
    match p {
        SamplePoint::Omega1(z) => z.iter().map(|w| w.norm_sqr()).sum(),
        _ => 0.0,
    }
}

fn sampling_checks(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let sig = s.sigma();

    let torus = sample_torus(cfg.torus_samples, cfg.seed)?;
    let (w, c) = eigen_mean_scores(&torus, &EigenTable::build(&rat_int(1), 4)?);
    s.push(
        SAMPLING,
        "torus eigenfunction means",
        "flat model, image of the Euclidean Laplacian",
        numeric(w < sig, format!("{sig} sigma")),
        format!(
            "{c} means of P, Q (1 <= n+k <= 4) at lambda 1 over {} torus samples; max |z| = {w:.2}",
            cfg.torus_samples
        ),
    );
    let z2 = |p: SamplePoint<'_>| p.z().norm_sqr();
    let m = estimate_moments(&torus, &[&z2])?[0];
    let q = TorusGrid::new(&rat_int(1), cfg.grid)?.integrate(|z| z.norm_sqr());
    let zs = m.z_score(q);
    s.push(
        SAMPLING,
        "torus moment against quadrature",
        "flat model, image of the Euclidean Laplacian",
        numeric(zs < sig, format!("{sig} sigma")),
        format!("E|Z|^2 = {:.5} +- {:.1e}, quadrature {q:.6}", m.mean, m.stderr),
    );

    let su3 = sample_su3_haar(cfg.su3_samples, cfg.seed + 1)?;
    let Points::Su3(mats) = &su3.points else { unreachable!("su3 batch") };
    let unit = mats.par_iter().map(|g| {
        let (u, d) = unitarity_residual(g);
        u.max(d)
    });
    let unit = unit.reduce(|| 0.0, f64::max);
    s.push(
        SAMPLING,
        "Haar unitarity",
        "SU(3) Casimir model",
        numeric(unit < 1e-12, "1e-12"),
        format!("max of |g*g - I| and |det g - 1| = {unit:.1e}"),
    );
    let (w, c) = eigen_mean_scores(&su3, &EigenTable::build(&rat_int(4), 4)?);
    s.push(
        SAMPLING,
        "SU(3) eigenfunction means",
        "SU(3) Casimir model",
        numeric(w < sig, format!("{sig} sigma")),
        format!(
            "{c} means of P, Q (1 <= n+k <= 4) at lambda 4 over {} Haar samples; max |z| = {w:.2}",
            cfg.su3_samples
        ),
    );
    let checks: Vec<_> = mats.iter().take(cfg.su3_check_matrices).map(su3_gamma_pointwise).collect::<Result<_, _>>()?;
    let res = checks.iter().map(|c| c.residual).fold(0.0, f64::max);
    let stated = checks.iter().map(|c| c.residual_stated_scale).fold(0.0, f64::max);
    let tr = checks.iter().map(|c| c.trace_identity_residual).fold(0.0, f64::max);
    s.push(
        MODELS,
        "SU(3) pointwise carre du champ",
        "SU(3) Casimir model",
        numeric(res < 1e-8, "1e-8"),
        format!(
            "{} matrices: residual {res:.1e} with scale {SU3_SCALE}; {stated:.2} with scale {SU3_STATED_SCALE}; trace(g^2) = 9Z^2 - 6Zb within {tr:.1e}",
            checks.len()
        ),
    );

    let l = rat(11, 2);
    let rej = sample_omega1_rejection(&l, cfg.omega1_samples, cfg.seed + 2)?;
    let pts = rej.omega1().expect("omega1 batch");
    let pred = pts.iter().all(|p| p1_value(p) > 0.0 && p2_value(p) < 0.0 && p.iter().all(|z| z.norm() < 1.0));
    s.push(
        SAMPLING,
        "Omega_1 rejection predicate",
        "domain Omega_1",
        numeric(pred, "exact predicate"),
        format!("{} accepted of {} proposals ({:.2}%)", rej.len(), rej.stats.proposals, 100.0 * rej.stats.rate()),
    );

    let audit = pts.iter().take(2000).all(|p| segment_audit(p, 64));
    let ell = pts.iter().take(2000).map(smallest_metric_eigenvalue).fold(f64::INFINITY, f64::min);
    let deco = pts
        .iter()
        .take(2000)
        .map(|p| {
            let (sv, dv, th) = p1_split(p);
            (p1_value(p) - (sv * (th / 2.0).cos().powi(2) + dv * (th / 2.0).sin().powi(2))).abs()
        })
        .fold(0.0, f64::max);
    s.push(
        MODELS,
        "Omega_1 structure",
        "domain Omega_1, ellipticity and decomposition of P1",
        numeric(audit && ell > 0.0 && deco < 1e-12, "1e-12"),
        format!("segments to the origin stay inside: {audit}; min metric eigenvalue {ell:.2e}; P1 = S cos^2 + D sin^2 within {deco:.1e}"),
    );

    let mc = sample_omega1_mcmc(&l, cfg.omega1_samples, cfg.seed + 3, &McmcOptions::default())?;
    let a = estimate_moments(&rej, &[&s1])?[0];
    let b = estimate_moments(&mc, &[&s1])?[0];
    let z = (a.mean - b.mean).abs() / (a.stderr.powi(2) + b.stderr.powi(2)).sqrt();
    s.push(
        SAMPLING,
        "Omega_1 samplers agree",
        "reversible measure on Omega_1",
        numeric(z < sig, format!("{sig} combined sigma")),
        format!(
            "E[S1] rejection {:.5} +- {:.1e}, mcmc {:.5} +- {:.1e} (ESS {:.0}, step {:.3}); z = {z:.2}",
            a.mean,
            a.stderr,
            b.mean,
            b.stderr,
            mc.stats.ess.unwrap_or(0.0),
            mc.stats.step.unwrap_or(0.0)
        ),
    );

    let (w, c) = eigen_mean_scores(&rej, &EigenTable::build(&l, 4)?);
    let m = estimate_moments(&rej, &[&z2])?[0];
    let q = TorusGrid::new(&l, PROBE_NORM_GRID)?.integrate(|z| z.norm_sqr());
    let zq = m.z_score(q);
    s.push(
        SAMPLING,
        "projected law of Omega_1 samples",
        "projection pi = (z1 + z2 + z3)/3",
        numeric(w < sig && zq < sig, format!("{sig} sigma")),
        format!(
            "{c} eigenfunction means of pi(xi) max |z| = {w:.2}; E|Z|^2 = {:.5} vs quadrature {q:.5} (z = {zq:.2})",
            m.mean
        ),
    );

    let th = ThetaPair::new(1.1, -0.4);
    let fs: [fn(Complex64) -> f64; 3] = [|z| z.re, |z| (z * z).re, |z| z.norm_sqr() * z.re];
    let mut worst: f64 = 0.0;
    let mut conj: f64 = 0.0;
    for f in fs {
        let d: Vec<f64> = pts.iter().map(|p| f(project(&phi_theta(p, &th))) - f(project(p))).collect();
        worst = worst.max(moment_of(&d, None).z_score(0.0));
        let g = |z: Complex64| f(z * Complex64::new(0.0, 1.0));
        let e: Vec<f64> =
            pts.iter().map(|p| g(project(&[p[0].conj(), p[1].conj(), p[2].conj()])) - g(project(p))).collect();
        conj = conj.max(moment_of(&e, None).z_score(0.0));
    }
    s.push(
        SAMPLING,
        "Phi_theta and conjugation invariance",
        "invariance of the measure under Phi_theta and S",
        numeric(worst < sig && conj < sig, format!("{sig} sigma")),
        format!(
            "paired differences at theta = (1.1, -0.4): max |z| = {worst:.2}; under conjugation max |z| = {conj:.2}"
        ),
    );
    Ok(())
}

fn hypergroup_checks(s: &mut Suite) -> Result<(), ReportError> {
    let cfg = s.cfg;
    let sig = s.sigma();
    let l = rat(11, 2);
    let table = EigenTable::build(&l, cfg.probe_degree_max)?;
    let grid = TorusGrid::new(&l, PROBE_NORM_GRID)?;
    let norms = block_norms(&table, &grid)?;
    let batch = sample_omega1_rejection(&l, cfg.omega1_samples, cfg.seed + 5)?;
    let thetas = theta_grid(cfg.theta_grid, DEFAULT_THETA_OFFSET);

    let mut z_ag: f64 = 0.0;
    let mut z_beta: f64 = 0.0;
    let mut sv_excess: f64 = 0.0;
    let mut sv_max: f64 = 0.0;
    let mut z_cross: f64 = 0.0;
    let mut n_cross = 0;
    let mut deltas = Vec::new();
    for th in &thetas {
        let ts = ThetaSample::new(&table, th, &batch)?;
        let est = ts.markov_matrices(&norms);
        let ex: Vec<MarkovMatrix> =
            table.blocks().iter().zip(&norms).map(|(b, n)| markov_matrix_exact(b, n, th)).collect::<Result<_, _>>()?;
        for ((e, x), nm) in est.iter().zip(&ex).zip(&norms) {
            z_ag = z_ag.max(sigma_distance(e.alpha.value, x.alpha.value, e.alpha.stderr()));
            if let (Some(eg), Some(xg)) = (e.gamma, x.gamma) {
                z_ag = z_ag.max(sigma_distance(eg.value, xg.value, eg.stderr()));
            }
            if let (Some(eb), Some(xb)) = (e.beta, x.beta) {
                z_beta = z_beta.max(sigma_distance(eb.value, xb.value, eb.stderr()));
            }
            let (sv, se) = orthonormal_singular_value(e, nm);
            sv_max = sv_max.max(sv);
            if sv > 1.0 {
                sv_excess = sv_excess.max(sigma_distance(sv, 1.0, se));
            }
        }
        for c in ts.cross_correlations(&norms) {
            z_cross = z_cross.max(sigma_distance(c.value, 0.0, c.stderr));
            n_cross += 1;
        }
        deltas.extend(delta_comparisons(&est, &ex));
    }
    let setup = format!(
        "lambda 11/2, {} rejection samples, {} theta points, n+k <= {}",
        batch.len(),
        thetas.len(),
        cfg.probe_degree_max
    );
    s.push(
        HYPERGROUP,
        "Markov pair agreement",
        "Markov matrix of K_theta, alpha and gamma",
        numeric(z_ag < sig, format!("{sig} sigma")),
        format!("{setup}; max |z| over alpha, gamma = {z_ag:.2}"),
    );
    s.push(
        HYPERGROUP,
        "beta from adjointness",
        "Markov matrix of K_theta, beta = -gamma",
        numeric(z_beta < sig, format!("{sig} sigma")),
        format!("estimated beta vs -gamma |P|^2/|Q|^2: max |z| = {z_beta:.2}"),
    );
    s.push(
        HYPERGROUP,
        "block singular values",
        "Markov operators are contractions",
        numeric(sv_excess < sig, format!("1 + {sig} sigma")),
        format!("largest orthonormal-block singular value {sv_max:.4}; max excess over 1 = {sv_excess:.2} sigma"),
    );
    s.push(
        HYPERGROUP,
        "cross-eigenvalue correlations",
        "K_theta commutes with L",
        numeric(z_cross < sig, format!("{sig} sigma")),
        format!("{n_cross} Phat-Phat correlations between distinct eigenvalues: max |z| = {z_cross:.2}"),
    );

    let z_rot = deltas.iter().map(|d| d.z_rotation()).fold(0.0, f64::max);
    let cot_off = deltas.iter().filter(|d| d.z_cot() > sig).count();
    let z_rem = deltas.iter().map(|d| d.z_cot()).fold(0.0, f64::max);
    let status = if deltas.is_empty() {
        Status::NumericFail { tolerance: "no delta entries estimated".into() }
    } else if z_rot < sig && cot_off > 0 {
        Status::DiscrepancyNoted {
            computed: format!(
                "delta = alpha for n - k not divisible by 3 (rotation relation; Monte Carlo max |z| = {z_rot:.2})"
            ),
            printed: format!(
                "delta = cot(2(n-k)pi/3) alpha; {cot_off} of {} estimates beyond {sig} sigma (max |z| = {z_rem:.1})",
                deltas.len()
            ),
        }
    } else if cot_off == 0 {
        Status::NumericPass { tolerance: format!("{sig} sigma") }
    } else {
        Status::NumericFail { tolerance: format!("{sig} sigma") }
    };
    s.push(
        HYPERGROUP,
        "cotangent delta formula",
        "value of delta for n - k not divisible by 3",
        status,
        "delta estimated, rotation-derived and printed side by side",
    );

    let mut parity: f64 = 0.0;
    for th in &thetas {
        for b in table.blocks() {
            let (a, g) = markov_pair_exact(b, th)?;
            let (a2, g2) = markov_pair_exact(b, &th.neg())?;
            parity = parity.max((a - a2).abs()).max((g + g2).abs());
        }
    }
    s.push(
        HYPERGROUP,
        "parity relations",
        "Markov matrix of K_theta, parity",
        numeric(parity < 1e-12, "1e-12"),
        format!("max |alpha(theta) - alpha(-theta)|, |gamma(theta) + gamma(-theta)| = {parity:.1e}"),
    );

    let scan_table = EigenTable::build(&l, cfg.scan_degree_max)?;
    let scan_norms = block_norms(&scan_table, &grid)?;
    let mut scan_thetas = theta_grid(12, DEFAULT_THETA_OFFSET);
    scan_thetas.push(ThetaPair::new(1.0, 2.0));
    let scan = positivity_scan(&scan_table, &scan_norms, &scan_thetas, 1e-9)?;
    let at_zero = positivity_scan(&scan_table, &scan_norms, &[ThetaPair::new(0.0, 0.0)], 1e-9)?;
    s.push(
        HYPERGROUP,
        "positivity scan",
        "Markov sequence bound",
        numeric(scan.violations.is_empty() && scan.max_abs_alpha <= 1.0 + 1e-9 && (at_zero.max_column_norm - 1.0).abs() < 1e-12, "1e-9"),
        format!(
            "{} (block, theta) pairs, n+k <= {}: max column norm {:.6}, max |alpha| {:.6}; at theta = 0 the norm is {:.15}",
            scan.checked, cfg.scan_degree_max, scan.max_column_norm, scan.max_abs_alpha, at_zero.max_column_norm
        ),
    );

    let sj = surjectivity_check(cfg.surjectivity_cells, cfg.surjectivity_theta);
    s.push(
        HYPERGROUP,
        "surjectivity of Z(theta)",
        "theta to Z(theta) is onto the deltoid",
        numeric(sj.missing.is_empty(), "every interior cell"),
        format!(
            "{} of {} interior cells of a {}^2 grid hit by a {}^2 theta grid",
            sj.cells_hit, sj.cells_inside, sj.omega_cells, sj.theta_grid
        ),
    );

    let r = (|| {
        let one = FieldScalar::one();
        let zero = FieldScalar::zero();
        let id = [[one.clone(), zero.clone()], [zero.clone(), one.clone()]];
        let m = [
            [FieldScalar::ratio(2, 3), FieldScalar::ratio(-1, 5)],
            [FieldScalar::ratio(-1, 5), FieldScalar::ratio(1, 7)],
        ];
        for (n, k) in [(1, 0), (2, 0), (3, 0), (2, 1)] {
            ensure(basis_change(&id, n, k) == id, || format!("({n},{k}): identity not fixed"))?;
            let three = basis_change(&basis_change(&basis_change(&m, n, k), n, k), n, k);
            ensure(three == m, || format!("({n},{k}): third power is not the identity"))?;
        }
        Ok(())
    })();
    s.push(
        HYPERGROUP,
        "basis change toward j",
        "bases adapted to the cusps j and jbar",
        exact(r),
        "identity fixed; applying the change three times returns the block",
    );

    let cusp = representation_check(&table, &norms, &[(Complex64::new(1.0, 0.0), 1.0)], 1e-9)?;
    let mu: Vec<(Complex64, f64)> = grid.nodes().collect();
    let avg = representation_check(&table, &norms, &mu, 1e-9)?;
    let th = ThetaPair::new(1.0, 2.0);
    let dirac = representation_check(&table, &norms, &[(z_of_theta(&th), 1.0)], 1e-9)?;
    let mut dev: f64 = 0.0;
    for (e, b) in cusp.entries.iter().zip(table.blocks()) {
        dev = dev.max((e.a - 1.0).abs()).max(e.b.abs());
        let (a, g) = markov_pair_exact(b, &th)?;
        let d = &dirac.entries[cusp.entries.iter().position(|x| x.n == e.n && x.k == e.k).unwrap()];
        dev = dev.max((d.a - a).abs()).max((d.b - g).abs());
    }
    let avg_dev = avg.entries.iter().skip(1).map(|e| e.a.abs().max(e.b.abs())).fold(0.0, f64::max);
    s.push(
        HYPERGROUP,
        "representation formula",
        "representation of symmetric Markov operators",
        numeric(dev < 1e-12 && avg_dev < 1e-8 && cusp.contraction && avg.contraction && dirac.contraction, "1e-8"),
        format!("nu = delta_1 gives (a, b) = (1, 0); nu = delta_Z(theta) gives (alpha, gamma); nu = mu gives a = b = 0 within {avg_dev:.1e}"),
    );
    Ok(())
}
