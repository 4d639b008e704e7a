use reebix::chomology::{audit, AuditOptions};
use reebix::cijt::{find_jump, JumpOptions};
use reebix::json::{
    catalog_from_json, catalog_json, certificate_from_json, certificate_json, parse_str,
    report_json, to_canonical_string,
};
use reebix::models::{ellipsoid_catalog, EllipsoidSpec};
use reebix::number::{Interval, Real};
use reebix::Tolerances;

fn e(aspects: Vec<Real>) -> reebix::OrbitCatalog {
    ellipsoid_catalog(&EllipsoidSpec::new(aspects).unwrap())
        .unwrap()
        .catalog
}

#[test]
fn catalogs_round_trip() {
    let tau = Real::Approx(Interval::around(1.618033988749895, 1e-15));
    for c in [
        e(vec![Real::from(1), Real::from(2)]),
        e(vec![Real::from(2), Real::from(3), Real::from(3)]),
        e(vec![Real::from(1), tau]),
    ] {
        let v = catalog_json(&c);
        let text = to_canonical_string(&v);
        let back = catalog_from_json(&parse_str(&text).unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(to_canonical_string(&catalog_json(&back)), text);
    }
}

#[test]
fn certificates_round_trip() {
    let c = e(vec![Real::from(2), Real::from(5)]);
    let orbits: Vec<_> = c.orbits.iter().map(|o| o.data.clone()).collect();
    let cert = find_jump(&orbits, &JumpOptions::default()).unwrap();
    let text = to_canonical_string(&certificate_json(&cert));
    let back = certificate_from_json(&parse_str(&text).unwrap()).unwrap();
    assert_eq!(back, cert);
}

#[test]
fn reports_are_byte_stable() {
    let c = e(vec![Real::from(1), Real::from(2)]);
    let tol = Tolerances::default();
    let a = to_canonical_string(&report_json(
        &audit(&c, &AuditOptions::default()).unwrap(),
        &tol,
    ));
    let b = to_canonical_string(&report_json(
        &audit(&c, &AuditOptions::default()).unwrap(),
        &tol,
    ));
    assert_eq!(a, b);
    assert_eq!(to_canonical_string(&parse_str(&a).unwrap()), a);
    assert!(a.contains("\"schema_version\": 1"));
}
