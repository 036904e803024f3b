use weakram::extension::{ext_automorphisms, ext_create, ext_ramification, ExtensionTower, Galois, RamificationData};
use weakram::generator::{
    gen_auto, gen_doubly_split, gen_general, gen_tot_tame, gen_tot_weak, gen_tot_weak_p, gen_unramified,
};
use weakram::group::{grp_doubly_split, FiniteGroup};
use weakram::local::BaseField;
use weakram::module::{gm_is_free_generator, gm_spans_residue_module};

fn setup(base: BaseField, poly: &str) -> (ExtensionTower, Galois, RamificationData) {
    let l = ext_create(&base, poly).unwrap();
    let g = ext_automorphisms(&l).unwrap();
    let r = ext_ramification(&l, &g).unwrap();
    (l, g, r)
}

fn flagship() -> (ExtensionTower, Galois, RamificationData) {
    setup(BaseField::padic(3, 1, 48).unwrap(), "x^6 + 6*x^2 + 6")
}

#[test]
fn flagship_general_construction_certifies() {
    let (l, g, r) = flagship();
    let cand = gen_general(&l, &r, 1, &[], 0).unwrap();
    let cert = gm_is_free_generator(&l, &g, &cand.element, 1).unwrap();
    assert!(cert.verdict);
    assert!(gm_spans_residue_module(&l, &g, &cand.element, 1).unwrap());
}

#[test]
fn flagship_direct_constructions_certify() {
    let (l, g, r) = flagship();
    for choice in 0..3 {
        let cand = gen_tot_weak(&l, &g, &r, 1, &[], choice).unwrap();
        assert!(cand.certify(&l, &g).unwrap().verdict, "choice {choice}");
    }
    let fg = FiniteGroup::from_galois(&g).unwrap();
    let split = grp_doubly_split(&fg, &g, &r).unwrap();
    let cand = gen_doubly_split(&l, &g, &r, &split, 4, &[], 0).unwrap();
    assert!(cand.certify(&l, &g).unwrap().verdict);
    let auto = gen_auto(&l, &g, &r, 1, &[], 0).unwrap();
    assert!(!auto.trace.fallback);
}

#[test]
fn cyclotomic_cubic_exponents() {
    let (l, g, r) = setup(BaseField::padic(3, 1, 30).unwrap(), "x^3 - 3*x + 1");
    for n in [1, 4, -2] {
        let cand = gen_tot_weak_p(&l, &r, n).unwrap();
        assert!(cand.certify(&l, &g).unwrap().verdict, "n = {n}");
    }
    let cand = gen_general(&l, &r, 4, &[], 0).unwrap();
    assert!(cand.certify(&l, &g).unwrap().verdict);
}

#[test]
fn artin_schreier_uniformizer() {
    let (l, g, r) = setup(BaseField::laurent(2, 1, 40).unwrap(), "x^2 - x - t^-1");
    assert!(r.weakly_ramified);
    assert_eq!(r.different_valuation, 2);
    let cand = gen_tot_weak_p(&l, &r, 1).unwrap();
    assert!(cand.certify(&l, &g).unwrap().verdict);
    let cand = gen_general(&l, &r, 1, &[], 0).unwrap();
    assert!(cand.certify(&l, &g).unwrap().verdict);
}

#[test]
fn tame_and_unramified() {
    let (l, g, _) = setup(BaseField::padic(5, 1, 24).unwrap(), "x^2 - 5");
    assert!(gen_tot_tame(&l, 0, &[1, 1]).unwrap().certify(&l, &g).unwrap().verdict);
    assert!(!gen_tot_tame(&l, 0, &[1, 5]).unwrap().certify(&l, &g).unwrap().verdict);
    let (l, g, r) = setup(BaseField::padic(5, 1, 24).unwrap(), "x^4 - 5");
    assert_eq!(g.order(), 4);
    assert!(gen_tot_tame(&l, 1, &[]).unwrap().certify(&l, &g).unwrap().verdict);
    assert!(gen_general(&l, &r, 1, &[], 0).unwrap().certify(&l, &g).unwrap().verdict);
    let (l, g, r) = setup(BaseField::padic(3, 1, 20).unwrap(), "x^2 + 1");
    let b = gen_unramified(&l, 0).unwrap();
    assert!(gm_is_free_generator(&l, &g, &b.element, 0).unwrap().verdict);
    assert!(gen_auto(&l, &g, &r, 0, &[], 0).unwrap().certify(&l, &g).unwrap().verdict);
}
