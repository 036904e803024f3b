//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! Oracles here are deliberately independent of the code paths under test:
//! literal subgroup products instead of `check_semidirect`, brute-force span
//! enumeration against the trace test, closed-form trace valuations.

use std::process::ExitCode;
use std::time::Instant;

use weakram::extension::{
    ext_automorphisms, ext_compositum, ext_create, ext_ramification, ExtensionTower, Galois, RamificationData,
};
use weakram::generator::{gen_general, gen_tot_tame, gen_tot_weak_p};
use weakram::group::{grp_doubly_split, FiniteGroup};
use weakram::job::{default_precision, run_at, Command, JobSpec};
use weakram::local::{BaseField, LocalElement};
use weakram::module::{
    assoc_order_index, gm_is_free_generator, gm_spans_residue_module, gm_trace_criterion, gm_trace_ideal_valuation,
    gm_verify_assoc_order_theorem, ResidueModule,
};

type Outcome = Result<String, String>;

fn check(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Field {
    ext: ExtensionTower,
    gal: Galois,
    ram: RamificationData,
}

fn field(base: BaseField, poly: &str) -> Result<Field, String> {
    let ext = ext_create(&base, poly).map_err(err)?;
    let gal = ext_automorphisms(&ext).map_err(err)?;
    let ram = ext_ramification(&ext, &gal).map_err(err)?;
    Ok(Field { ext, gal, ram })
}

fn flagship() -> Result<Field, String> {
    field(BaseField::padic(3, 1, 48).map_err(err)?, "x^6 + 6*x^2 + 6")
}

fn cyclotomic() -> Result<Field, String> {
    field(BaseField::padic(3, 1, 30).map_err(err)?, "x^3 - 3*x + 1")
}

fn artin_schreier() -> Result<Field, String> {
    field(BaseField::laurent(2, 1, 40).map_err(err)?, "x^2 - x - t^-1")
}

fn free(f: &Field, x: &LocalElement, n: i64) -> Result<bool, String> {
    Ok(gm_is_free_generator(&f.ext, &f.gal, x, n).map_err(err)?.verdict)
}

fn criterion_1() -> Outcome {
    let f = flagship()?;
    let g = FiniteGroup::from_galois(&f.gal).map_err(err)?;
    // The only non-abelian group of order 6 is S_3.
    check(g.order() == 6 && !g.is_abelian(), "Galois group is not S_3")?;
    check(f.ext.e() == 6 && f.ext.f() == 1, "not totally ramified")?;
    let orders = f.ram.orders();
    check(orders == [6, 6, 3, 1], format!("filtration {orders:?}"))?;
    check(f.ram.weakly_ramified, "not weakly ramified")?;
    check(
        f.ram.different_valuation == 7 && f.ram.different_check == 7,
        format!("different {} vs {}", f.ram.different_valuation, f.ram.different_check),
    )?;
    let eps = gen_general(&f.ext, &f.ram, 1, &[], 0).map_err(err)?.element;
    let cert = gm_is_free_generator(&f.ext, &f.gal, &eps, 1).map_err(err)?;
    check(cert.verdict, "general construction not free")?;
    // Enumerating the F_3-span of the six conjugates agrees with det != 0.
    check(gm_spans_residue_module(&f.ext, &f.gal, &eps, 1).map_err(err)?, "span oracle disagrees")?;
    Ok(format!("S_3, |G_i| = {orders:?}, different 7, det = {}", cert.det))
}

fn criterion_2() -> Outcome {
    let f = cyclotomic()?;
    check(f.gal.order() == 3 && f.ram.orders() == [3, 3, 3, 1], "not a weakly ramified C_3")?;
    for n in [1, 4, -2] {
        let pi_n = gen_tot_weak_p(&f.ext, &f.ram, n).map_err(err)?.element;
        check(free(&f, &pi_n, n)?, format!("pi^{n} not free"))?;
    }
    // Sample of P^2: sum c_k pi^(2+k) with c the base-3 digits of 1..=20,
    // which includes each of pi^2, pi^3, pi^4.
    let pi = f.ext.pi();
    let mut rejected = 0;
    for m in 1..=20u32 {
        let mut x = f.ext.from_int(0);
        let mut digits = m;
        for k in 0..3 {
            let c = (digits % 3) as i64;
            digits /= 3;
            x = &x + &(&f.ext.from_int(c) * &pi.pow(2 + k).map_err(err)?);
        }
        if free(&f, &x, 2)? {
            return Err(format!("sample element {m} of P^2 certified free"));
        }
        rejected += 1;
    }
    Ok(format!("pi^n free for n = 1, 4, -2; {rejected}/20 sample elements of P^2 rejected"))
}

fn criterion_3() -> Outcome {
    let f = artin_schreier()?;
    check(f.gal.order() == 2 && f.ram.weakly_ramified, "not weakly ramified")?;
    check(
        f.ram.different_valuation == 2 && f.ram.different_check == 2,
        format!("different {} vs {}", f.ram.different_valuation, f.ram.different_check),
    )?;
    check(free(&f, &f.ext.pi(), 1)?, "uniformizer not free")?;
    Ok("C_2 over F_2((t)), different 2, uniformizer free".into())
}

fn criterion_4() -> Outcome {
    let mut checked = 0;
    for f in [cyclotomic()?, artin_schreier()?] {
        let g = f.gal.order() as i64;
        for i in -2 * g..=2 * g {
            let got = gm_trace_ideal_valuation(&f.ext, &f.gal, i).map_err(err)?;
            let want = 2 + (i - 2).div_euclid(g);
            check(got == want, format!("|G| = {g}, i = {i}: {got} != {want}"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} ideals, all match 2 + floor((i - 2)/|G|)"))
}

fn all_vectors(p: u64, n: usize) -> impl Iterator<Item = Vec<u64>> {
    (0..p.pow(n as u32)).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = k % p;
                k /= p;
                d
            })
            .collect()
    })
}

fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(table, 0).expect("cyclic group")
}

fn klein() -> FiniteGroup {
    let table = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
    FiniteGroup::from_table(table, 0).expect("Klein group")
}

fn agree(g: &FiniteGroup, module: &ResidueModule) -> Result<usize, String> {
    let mut count = 0;
    for x in all_vectors(module.p, module.dim()) {
        let fast = gm_trace_criterion(g, module, &x).map_err(err)?;
        check(fast == module.generates(&x), format!("disagreement at {x:?}"))?;
        count += 1;
    }
    Ok(count)
}

fn criterion_5() -> Outcome {
    let mut total = 0;
    for (g, p) in [(cyclic(2), 2), (cyclic(3), 3), (klein(), 2)] {
        total += agree(&g, &ResidueModule::regular(&g, p))?;
    }
    // The same comparison on residue modules coming from actual ideals.
    for (f, n) in [(cyclotomic()?, 1), (cyclotomic()?, 2), (artin_schreier()?, 1)] {
        let g = FiniteGroup::from_galois(&f.gal).map_err(err)?;
        total += agree(&g, &ResidueModule::from_ideal(&f.ext, &f.gal, n).map_err(err)?)?;
    }
    Ok(format!("{total} vectors, trace test equals brute-force span on all"))
}

fn criterion_6() -> Outcome {
    let mut flips = 0;
    for (poly, e) in [("x^2 - 5", 2), ("x^4 - 5", 4)] {
        let f = field(BaseField::padic(5, 1, 24).map_err(err)?, poly)?;
        check(f.gal.order() == e && f.ram.is_tame(), format!("{poly}: not tame of degree {e}"))?;
        let ones = vec![1; e];
        let alpha = gen_tot_tame(&f.ext, 0, &ones).map_err(err)?;
        check(alpha.certify(&f.ext, &f.gal).map_err(err)?.verdict, format!("{poly}: all-ones not free"))?;
        for i in 0..e {
            let mut u = ones.clone();
            u[i] = 5;
            let x = gen_tot_tame(&f.ext, 0, &u).map_err(err)?;
            check(!x.certify(&f.ext, &f.gal).map_err(err)?.verdict, format!("{poly}: u_{i} = 5 still free"))?;
            flips += 1;
        }
    }
    Ok(format!("C_2 and C_4 over Q_5 certified, {flips}/{flips} perturbations flip"))
}

fn criterion_7() -> Outcome {
    let mut parts = Vec::new();
    for (name, f, eps) in [
        ("cyclotomic", cyclotomic()?, None),
        ("Artin-Schreier", artin_schreier()?, None),
        ("flagship", flagship()?, Some(())),
    ] {
        let eps = match eps {
            None => f.ext.pi(),
            Some(()) => gen_general(&f.ext, &f.ram, 1, &[], 0).map_err(err)?.element,
        };
        let r = gm_verify_assoc_order_theorem(&f.ext, &f.gal, &f.ram, &eps).map_err(err)?;
        check(
            r.oracle_over_lambda == 0 && r.oracle_contains_lambda && r.lambda_contains_oracle,
            format!("{name}: oracle order differs from Lambda"),
        )?;
        let index = f.ext.f() as i64;
        check(r.lambda_over_group_ring == index, format!("{name}: [Lambda : O_K[G]] = {}", r.lambda_over_group_ring))?;
        check(assoc_order_index(&f.ext, &f.gal).map_err(err)? == index, format!("{name}: oracle index"))?;
        check(r.generates_ring_of_integers, format!("{name}: eps does not generate O_L"))?;
        parts.push(name);
    }
    Ok(format!("A = Lambda, [A : O_K[G]] = P_K^1, eps generates ({})", parts.join(", ")))
}

/// `whole = n h` with every product distinct, and `n` normal in `whole`.
fn semidirect(g: &FiniteGroup, whole: &[usize], n: &[usize], h: &[usize]) -> bool {
    let mut prod = Vec::new();
    for &a in n {
        for &b in h {
            prod.push(g.mul(a, b));
        }
    }
    prod.sort_unstable();
    let distinct = prod.windows(2).all(|w| w[0] != w[1]);
    let mut target = whole.to_vec();
    target.sort_unstable();
    let normal = whole.iter().all(|&x| n.iter().all(|&y| n.contains(&g.mul(g.mul(x, y), g.inv(x)))));
    distinct && prod == target && normal && n.iter().all(|a| whole.contains(a)) && h.iter().all(|b| whole.contains(b))
}

fn criterion_8() -> Outcome {
    let k = BaseField::padic(3, 1, 48).map_err(err)?;
    let l = ext_create(&k, "x^6 + 6*x^2 + 6").map_err(err)?;
    let comp = ext_compositum(&l, 6).map_err(err)?;
    let big = comp.field();
    let gal = ext_automorphisms(big).map_err(err)?;
    let ram = ext_ramification(big, &gal).map_err(err)?;
    let g = FiniteGroup::from_galois(&gal).map_err(err)?;
    check(g.order() == 36 && ram.orders() == [36, 6, 3, 1], format!("group {:?}", ram.orders()))?;
    let s = grp_doubly_split(&g, &gal, &ram).map_err(err)?;
    let whole = g.whole();
    check(semidirect(&g, &whole, &s.w, &s.t), "G != W x| T")?;
    check(semidirect(&g, &whole, &s.i, &s.u), "G != I x| U")?;
    check(semidirect(&g, &s.i, &s.w, &s.c), "I != W x| C")?;
    check(semidirect(&g, &s.t, &s.c, &s.u), "T != C x| U")?;
    check(s.s.len() == s.w.len() * s.u.len(), "|S| != |W||U|")?;
    check(g.pow(s.tau, 6) == g.identity(), "tau^6 != e")?;
    let conj_c = s.c.iter().all(|&c| s.c.contains(&g.mul(g.mul(s.tau, c), g.inv(s.tau))));
    check(conj_c, "tau does not normalize C")?;
    Ok(format!(
        "order 36: |W| = {}, |C| = {}, |U| = {}, |T| = {}, tau of order {}",
        s.w.len(),
        s.c.len(),
        s.u.len(),
        s.t.len(),
        g.element_order(s.tau)
    ))
}

fn without_precision(json: &str) -> Result<serde_json::Value, String> {
    let mut v: serde_json::Value = serde_json::from_str(json).map_err(err)?;
    v.as_object_mut().ok_or("certificate is not an object")?.remove("precision");
    Ok(v)
}

fn criterion_9() -> Outcome {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../jobs");
    let jobs: [(&str, &[Command]); 6] = [
        ("flagship", &[Command::Analyze, Command::Construct, Command::AssocOrder]),
        ("cyclotomic", &[Command::Analyze, Command::Construct, Command::AssocOrder]),
        ("cyclotomic_square", &[Command::Verify]),
        ("artin_schreier", &[Command::Analyze, Command::Construct, Command::AssocOrder]),
        ("tame_quartic", &[Command::Analyze, Command::Construct, Command::AssocOrder]),
        ("unramified", &[Command::Analyze, Command::Construct]),
    ];
    let mut count = 0;
    for (name, commands) in jobs {
        let text = std::fs::read_to_string(format!("{dir}/{name}.ini")).map_err(err)?;
        let spec = JobSpec::parse(&text).map_err(err)?;
        let n = default_precision(&spec).map_err(err)?;
        for &cmd in commands {
            let first = run_at(&spec, cmd, n).map_err(|e| format!("{name} {cmd}: {e}"))?.to_json();
            let again = run_at(&spec, cmd, n).map_err(err)?.to_json();
            let doubled = run_at(&spec, cmd, 2 * n).map_err(|e| format!("{name} {cmd} at {}: {e}", 2 * n))?.to_json();
            check(first == again, format!("{name} {cmd}: two runs differ"))?;
            check(
                without_precision(&first)? == without_precision(&doubled)?,
                format!("{name} {cmd}: N = {n} and 2N differ"),
            )?;
            count += 1;
        }
    }
    Ok(format!("{count} certificates stable across reruns and N -> 2N"))
}

fn main() -> ExitCode {
    let criteria: [(u32, fn() -> Outcome); 9] = [
        (1, criterion_1),
        (2, criterion_2),
        (3, criterion_3),
        (4, criterion_4),
        (5, criterion_5),
        (6, criterion_6),
        (7, criterion_7),
        (8, criterion_8),
        (9, criterion_9),
    ];
    let mut failed = 0;
    for (k, run) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(run).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {k}: PASS ({secs:.1}s) {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {k}: FAIL ({secs:.1}s) {detail}");
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
