use weakram::extension::{ext_automorphisms, ext_compositum, ext_create, ext_ramification};
use weakram::group::{grp_doubly_split, FiniteGroup};
use weakram::local::BaseField;

#[test]
fn flagship_compositum_is_doubly_split() {
    let k = BaseField::padic(3, 1, 48).unwrap();
    let l = ext_create(&k, "x^6 + 6*x^2 + 6").unwrap();
    let comp = ext_compositum(&l, 6).unwrap();
    let big = comp.field();
    let gal = ext_automorphisms(big).unwrap();
    assert_eq!(gal.order(), 36);
    let ram = ext_ramification(big, &gal).unwrap();
    assert_eq!(ram.orders(), vec![36, 6, 3, 1]);
    let g = FiniteGroup::from_galois(&gal).unwrap();
    let split = grp_doubly_split(&g, &gal, &ram).unwrap();
    assert_eq!((split.w.len(), split.c.len(), split.u.len(), split.t.len()), (3, 2, 6, 12));
    assert_eq!(g.element_order(split.tau), 6);
    assert!(g.normalizes(split.tau, &split.c));
    assert_eq!(split.s.len(), 18);
}
