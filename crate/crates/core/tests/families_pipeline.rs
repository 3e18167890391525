use qscheme::families::{
    appendix1_parameters, appendix2_parameters, cross_polytope, icosahedron, real_mub_design,
    simplex, twenty_four_cell, ParameterTables,
};
use qscheme::numerics::{Rational, Scalar};
use qscheme::pipeline::{analyze, Analysis};

fn tables<S: Scalar>(a: &Analysis<S>) -> ParameterTables<S> {
    let p = a.parameters.as_ref().expect("parameters computed");
    ParameterTables {
        intersection: p.intersection.clone(),
        p: p.p.clone(),
        q: p.q.clone(),
        dual: p.dual.clone(),
    }
}

#[test]
fn twenty_four_cell_matches_both_tables() {
    let a = analyze(&twenty_four_cell()).unwrap();
    let h = &a.applicability.record;
    assert_eq!((h.degree, h.strength, h.antipodal, h.applicable), (4, 5, true, true));
    let t = tables(&a);
    let a2 = appendix2_parameters(1).unwrap();
    assert_eq!(t.mismatches(&a2, 0.0), Vec::<String>::new());
    let a1 = appendix1_parameters(4, 12).unwrap().tables().unwrap();
    assert_eq!(t.mismatches(&a1, 0.0), Vec::<String>::new());
    let report = a.theorems.unwrap();
    assert!(report.all_passed, "{report:?}");
    assert!(report.clauses.iter().all(|c| c.deviation == "0"));
}

#[test]
fn mub_r1_matches_24_cell() {
    let a = analyze(&real_mub_design(1).unwrap()).unwrap();
    let t = tables(&a);
    assert!(t.mismatches(&appendix2_parameters(1).unwrap(), 0.0).is_empty());
    let mut g1 = real_mub_design(1).unwrap().sorted_gram();
    let mut g2 = twenty_four_cell().sorted_gram();
    g1.sort_by(|a, b| a.total_cmp(b));
    g2.sort_by(|a, b| a.total_cmp(b));
    assert_eq!(g1, g2);
}

#[test]
fn icosahedron_float() {
    let a = analyze(&icosahedron()).unwrap();
    let h = &a.applicability.record;
    assert_eq!((h.degree, h.strength, h.applicable), (3, 5, true));
    let p = a.parameters.as_ref().unwrap();
    let m: Vec<f64> = p.multiplicities.clone();
    for (x, want) in m.iter().zip([1.0, 3.0, 5.0, 3.0]) {
        assert!((x - want).abs() < 1e-8, "{m:?}");
    }
    let report = a.theorems.unwrap();
    assert!(report.all_passed, "{report:#?}");
}

#[test]
fn cross_polytopes() {
    for n in 2..=10 {
        let a = analyze(&cross_polytope(n).unwrap()).unwrap();
        let h = &a.applicability.record;
        assert_eq!((h.degree, h.strength), (2, 3), "n = {n}");
        let s = a.scheme.as_ref().unwrap();
        assert_eq!(s.p(2, 2, 2), 2 * n as u64 - 4);
        let p = a.parameters.as_ref().unwrap();
        let want: Vec<Rational> = [1, n as i64, n as i64 - 1]
            .iter()
            .map(|&v| Rational::from_integer(v.into()))
            .collect();
        assert_eq!(p.multiplicities, want);
        assert!(a.theorems.as_ref().unwrap().all_passed);
    }
}

#[test]
fn simplex_is_not_applicable() {
    let a = analyze(&simplex(4).unwrap()).unwrap();
    assert!(!a.applicability.record.antipodal);
    assert!(!a.applicability.record.applicable);
    assert!(a.scheme.is_none());
    assert!(!a.warnings.is_empty());
}

#[test]
fn mub_r2_matches_appendix() {
    let x = real_mub_design(2).unwrap();
    assert_eq!(x.len(), 288);
    let a = analyze(&x).unwrap();
    let h = &a.applicability.record;
    assert_eq!((h.degree, h.strength), (4, 5));
    let t = tables(&a);
    assert_eq!(t.mismatches(&appendix2_parameters(2).unwrap(), 0.0), Vec::<String>::new());
    assert!(a.theorems.unwrap().all_passed);
}
