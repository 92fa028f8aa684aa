use deltoid::algebra::{rat, MPoly, VarList};
use deltoid::models::deltoid_model;
use deltoid::report::{eigen_document, EigenDocument};
use deltoid::spectral::EigenTable;

fn golden() -> EigenDocument {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/tests/golden/eigen_lambda_7_3.json")).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn find<'a>(doc: &'a EigenDocument, n: u32, k: u32, flavor: &str) -> &'a str {
    &doc.records.iter().find(|r| r.n == n && r.k == k && r.flavor == flavor).unwrap().poly
}

// Hand solutions at lambda = 7/3:
// L(Z Zb) = -(2 lambda + 1) Z Zb + 1, so R_11 = Z Zb - 1/(2 lambda + 1) = Z Zb - 3/17;
// L(Z^2) = -(2 lambda + 2) Z^2 + 2 Zb, so R_20 = Z^2 - 2/(lambda + 2) Zb = Z^2 - 6/13 Zb.
#[test]
fn golden_matches_hand_solutions() {
    let doc = golden();
    assert_eq!(doc.lambda, "7/3");
    assert_eq!(find(&doc, 1, 1, "R"), "(1)*Z*Zb + (-3/17)");
    assert_eq!(find(&doc, 2, 0, "R"), "(1)*Z^2 + (-6/13)*Zb");
    assert_eq!(find(&doc, 0, 2, "R"), "(1)*Zb^2 + (-6/13)*Z");
    assert_eq!(find(&doc, 1, 0, "Q"), "(-1/2*i)*Z + (1/2*i)*Zb");
}

#[test]
fn golden_polynomials_are_eigenfunctions() {
    let doc = golden();
    let m = deltoid_model(&rat(7, 3)).unwrap();
    let v = VarList::new(&doc.variables);
    for r in &doc.records {
        let p = MPoly::parse(&v, &r.poly).unwrap();
        let mu = deltoid::algebra::parse_rational(&r.eigenvalue).unwrap();
        assert_eq!(m.l_apply(&p).unwrap(), p.scale_rational(&-mu), "({}, {}) {}", r.n, r.k, r.flavor);
    }
    assert_eq!(doc.records.iter().filter(|r| r.flavor == "R").count(), 15);
}

#[test]
fn regenerated_table_equals_golden() {
    let table = EigenTable::build(&rat(7, 3), 4).unwrap();
    assert_eq!(eigen_document(&table), golden());
}
