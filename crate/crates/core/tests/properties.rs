use std::sync::OnceLock;

use proptest::prelude::*;

use weakram::extension::{ext_automorphisms, ext_create, ExtensionTower, Galois};
use weakram::group::{grp_complements, grp_sylow_p, FiniteGroup};
use weakram::lattice::{mat_mul, Matrix};
use weakram::local::{BaseField, LocalElement};
use weakram::module::{gm_is_free_generator, gm_module_index, gm_spans_residue_module};

struct Fixture {
    ext: ExtensionTower,
    gal: Galois,
}

fn cyclotomic() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let ext = ext_create(&BaseField::padic(3, 1, 30).unwrap(), "x^3 - 3*x + 1").unwrap();
        let gal = ext_automorphisms(&ext).unwrap();
        Fixture { ext, gal }
    })
}

fn artin_schreier() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let ext = ext_create(&BaseField::laurent(2, 1, 40).unwrap(), "x^2 - x - t^-1").unwrap();
        let gal = ext_automorphisms(&ext).unwrap();
        Fixture { ext, gal }
    })
}

/// `pi^shift * sum c_i pi^i`.
fn element(ext: &ExtensionTower, coeffs: &[i64], shift: i64) -> LocalElement {
    let pi = ext.pi();
    let mut x = ext.from_int(0);
    for (i, &c) in coeffs.iter().enumerate() {
        x = &x + &(&ext.from_int(c) * &pi.pow(i as i64).unwrap());
    }
    &x * &pi.pow(shift).unwrap()
}

fn v3(mut n: i128) -> Option<i64> {
    if n == 0 {
        return None;
    }
    let mut k = 0;
    while n % 3 == 0 {
        n /= 3;
        k += 1;
    }
    Some(k)
}

fn det3(a: &[[i64; 3]; 3]) -> i128 {
    let a = a.map(|r| r.map(i128::from));
    a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
}

fn base_matrix(ext: &ExtensionTower, a: &[[i64; 3]; 3]) -> Matrix {
    a.iter().map(|r| r.iter().map(|&c| LocalElement::from_int(ext.base_tower(), c)).collect()).collect()
}

fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(table, 0).unwrap()
}

/// `C_a x C_b` on pairs `(x, y)` numbered `x * b + y`.
fn product(a: usize, b: usize) -> FiniteGroup {
    let n = a * b;
    let table = (0..n).map(|u| (0..n).map(|v| ((u / b + v / b) % a) * b + (u % b + v % b) % b).collect()).collect();
    FiniteGroup::from_table(table, 0).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn valuation_is_additive(
        a in prop::collection::vec(-20i64..20, 1..4),
        b in prop::collection::vec(-20i64..20, 1..4),
        s in -3i64..4,
        t in -3i64..4,
    ) {
        let ext = &cyclotomic().ext;
        let x = element(ext, &a, s);
        let y = element(ext, &b, t);
        prop_assume!(!x.is_zero() && !y.is_zero());
        let xy = &x * &y;
        prop_assert_eq!(xy.val().unwrap(), x.val().unwrap() + y.val().unwrap());
    }

    #[test]
    fn text_round_trip(a in prop::collection::vec(-40i64..40, 1..4), s in -2i64..3) {
        for f in [cyclotomic(), artin_schreier()] {
            let x = element(&f.ext, &a, s);
            let back = f.ext.parse(&x.to_string()).unwrap();
            prop_assert!(back.eq_mod(&x), "{} -> {}", x, back);
        }
    }

    #[test]
    fn module_index_is_determinant_valuation(a in prop::array::uniform3(prop::array::uniform3(-9i64..9))) {
        let want = v3(det3(&a));
        prop_assume!(want.is_some());
        let ext = &cyclotomic().ext;
        let ident = base_matrix(ext, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let sub = base_matrix(ext, &a);
        prop_assert_eq!(gm_module_index(&ident, &sub).unwrap(), want.unwrap());
    }

    #[test]
    fn module_index_is_multiplicative(
        a in prop::array::uniform3(prop::array::uniform3(-9i64..9)),
        b in prop::array::uniform3(prop::array::uniform3(-9i64..9)),
    ) {
        prop_assume!(det3(&a) != 0 && det3(&b) != 0);
        let ext = &cyclotomic().ext;
        let m = base_matrix(ext, &[[1, 0, 0], [0, 1, 0], [0, 0, 1]]);
        let n = base_matrix(ext, &a);
        let p = mat_mul(&base_matrix(ext, &b), &n, ext.base_tower());
        let mn = gm_module_index(&m, &n).unwrap();
        let np = gm_module_index(&n, &p).unwrap();
        prop_assert_eq!(gm_module_index(&m, &p).unwrap(), mn + np);
    }

    #[test]
    fn determinant_matches_span_enumeration(
        a in prop::collection::vec(-8i64..8, 3),
        n in -3i64..5,
    ) {
        for f in [cyclotomic(), artin_schreier()] {
            let x = element(&f.ext, &a, n);
            let det = gm_is_free_generator(&f.ext, &f.gal, &x, n);
            let span = gm_spans_residue_module(&f.ext, &f.gal, &x, n);
            match (det, span) {
                (Ok(d), Ok(s)) => prop_assert_eq!(d.verdict, s),
                (Err(_), Err(_)) => {}
                (d, s) => prop_assert!(false, "det {:?} vs span {:?}", d.map(|c| c.verdict), s),
            }
        }
    }

    #[test]
    fn complements_of_sylow_subgroups(a in 1usize..13, b in 1usize..13, pi in 0usize..3) {
        let p = [2u64, 3, 5][pi];
        let g = if a * b <= 36 { product(a, b) } else { cyclic(a) };
        let whole = g.whole();
        let sylow = grp_sylow_p(&g, &whole, p).unwrap();
        let n = g.order();
        let mut q = n;
        while q % p as usize == 0 {
            q /= p as usize;
        }
        prop_assert_eq!(sylow.len(), n / q);
        let complements = grp_complements(&g, &whole, &sylow);
        prop_assert!(!complements.is_empty());
        for h in complements {
            prop_assert!(g.is_subgroup(&h));
            prop_assert_eq!(h.len() * sylow.len(), n);
            prop_assert_eq!(g.intersection(&h, &sylow), g.trivial());
        }
    }
}

#[test]
fn determinant_and_span_agree_on_a_grid() {
    let f = cyclotomic();
    let (mut yes, mut no) = (0, 0);
    for n in -2..5 {
        for m in 0..27i64 {
            let a = [m % 3, m / 3 % 3, m / 9];
            let x = element(&f.ext, &a, n);
            let det = gm_is_free_generator(&f.ext, &f.gal, &x, n).unwrap().verdict;
            assert_eq!(det, gm_spans_residue_module(&f.ext, &f.gal, &x, n).unwrap(), "n = {n}, a = {a:?}");
            if det {
                yes += 1;
            } else {
                no += 1;
            }
        }
    }
    assert!(yes > 0 && no > 0);
}
