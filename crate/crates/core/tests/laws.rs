use orbitwise::analysis::law_check;
use orbitwise::catalog;
use orbitwise::Error;

#[test]
fn law_suite_holds() {
    for case in catalog::law_suite() {
        let r = law_check(case.law.name(), &case.instance).unwrap();
        assert!(r.holds_at_scale, "{} on {}: {:?}", case.law, case.label, r.violations);
    }
}

#[test]
fn unknown_law() {
    let case = &catalog::law_suite()[0];
    assert!(matches!(law_check("transitivity", &case.instance), Err(Error::UnknownLaw(_))));
}
