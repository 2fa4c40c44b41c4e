//! Golden and randomized property checks run by `arr selftest`.

use std::collections::BTreeSet;
use std::path::Path;
use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use hyperarr::cells::{bounded_chambers, chambers, sign_vector, sphere_is_trivial};
use hyperarr::cw_posets::{df_poset, sal_to_df, salvetti_poset};
use hyperarr::flag::{flag_partition, generic_flag};
use hyperarr::gallery::ChamberGraph;
use hyperarr::linalg::rat;
use hyperarr::local_system::{fox_h1, twisted_complex, LocalSystem};
use hyperarr::os_algebra::{betti_numbers, hilbert_series, os_degree};
use hyperarr::pi1::minimal_presentation;
use hyperarr::poset::{
    char_poly, char_poly_delres, char_poly_whitney, chromatic_poly, count_colorings_brute_force,
    count_points_mod_q, intersection_poset,
};
use hyperarr::{
    Arrangement, CoefficientField, Hyperplane, IntegerPolynomial, Result, SignVector, SimpleGraph,
};

const SEED: u64 = 0x5eed_a77a;

const EMBEDDED: &[(&str, &str)] = &[
    ("a3.arr", include_str!("../../../data/a3.arr")),
    ("fig4.arr", include_str!("../../../data/fig4.arr")),
    ("triangle.arr", include_str!("../../../data/triangle.arr")),
    ("boolean3.arr", include_str!("../../../data/boolean3.arr")),
    ("generic4.arr", include_str!("../../../data/generic4.arr")),
];

struct Data {
    a3: Arrangement,
    fig4: Arrangement,
    triangle: Arrangement,
    boolean3: Arrangement,
    generic4: Arrangement,
}

fn load_data(dir: Option<&Path>) -> Result<Data> {
    let get = |name: &str| -> Result<Arrangement> {
        match dir {
            Some(d) => {
                let path = d.join(name);
                let text = std::fs::read_to_string(&path).map_err(|e| {
                    hyperarr::Error::Validation(format!("cannot read {}: {e}", path.display()))
                })?;
                Arrangement::parse_named(&text, &path.display().to_string())
            }
            None => {
                let text = EMBEDDED.iter().find(|(n, _)| *n == name).expect("embedded file").1;
                Arrangement::parse_named(text, name)
            }
        }
    };
    Ok(Data {
        a3: get("a3.arr")?,
        fig4: get("fig4.arr")?,
        triangle: get("triangle.arr")?,
        boolean3: get("boolean3.arr")?,
        generic4: get("generic4.arr")?,
    })
}

type Check = std::result::Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn lib<T>(r: Result<T>) -> std::result::Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// Runs every check; returns whether all passed.
pub fn run(dir: Option<&Path>) -> Result<bool> {
    let data = load_data(dir)?;
    let checks: Vec<(&str, fn(&Data) -> Check)> = vec![
        ("A3 golden block", a3_golden),
        ("Fig. 4 presentation golden block", fig4_golden),
        ("braid arrangements", braid_family),
        ("three characteristic polynomial routes", triple_chi),
        ("Zaslavsky chamber counts", zaslavsky),
        ("chromatic polynomials", chromatic),
        ("flag partitions and Betti numbers", flag_betti),
        ("Salvetti and Delucchi-Falk posets", salvetti_df),
        ("twisted cochain complexes", twisted),
        ("Fox calculus against twisted H^1", fox),
        ("positive galleries and flips", galleries),
        ("sphere criterion", spheres),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in checks.iter().enumerate() {
        let t = Instant::now();
        let outcome = check(&data);
        let ms = t.elapsed().as_millis();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({ms} ms)", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({ms} ms): {msg}", i + 1);
            }
        }
    }
    println!(
        "{} passed, {failed} failed in {} ms",
        checks.len() - failed,
        start.elapsed().as_millis()
    );
    Ok(failed == 0)
}

fn random_arrangement(rng: &mut ChaCha8Rng, dim: usize, max_n: usize, essential: bool) -> Arrangement {
    loop {
        let n = rng.gen_range(1..=max_n);
        let mut hs = Vec::new();
        let mut seen = BTreeSet::new();
        while hs.len() < n {
            let coeffs: Vec<i64> = (0..dim).map(|_| rng.gen_range(-3..=3)).collect();
            if coeffs.iter().all(|&c| c == 0) {
                continue;
            }
            let h = Hyperplane::from_ints(&coeffs, rng.gen_range(-4..=4)).expect("nonzero normal");
            if seen.insert(h.canonical()) {
                hs.push(h);
            }
        }
        let a = Arrangement::new(dim, hs).expect("distinct hyperplanes");
        if !essential || a.is_essential() {
            return a;
        }
    }
}

fn random_system(rng: &mut ChaCha8Rng, n: usize) -> LocalSystem {
    let field = match rng.gen_range(0..3) {
        0 => CoefficientField::Rationals,
        1 => CoefficientField::prime(101).expect("101 is prime"),
        _ => CoefficientField::cyclotomic(6).expect("small order"),
    };
    random_system_over(rng, field, n)
}

fn random_system_over(rng: &mut ChaCha8Rng, field: CoefficientField, n: usize) -> LocalSystem {
    let values: Vec<_> = (0..n)
        .map(|_| match &field {
            CoefficientField::Cyclotomic { .. } => {
                let s = ["1", "-1", "2", "z", "z^2", "-z", "1+z", "3/2"]
                    .choose(rng)
                    .expect("nonempty");
                field.parse_element(s).expect("valid element")
            }
            CoefficientField::Prime(_) => field.from_int(rng.gen_range(1..=100)),
            CoefficientField::Rationals => {
                let v = [-2, -1, 1, 2, 3, 5][rng.gen_range(0..6)];
                field.from_int(v)
            }
        })
        .collect();
    LocalSystem::new(field, values).expect("nonzero monodromy")
}

fn padded(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len.max(v.len()), 0);
    v
}

fn alternating(v: &[usize]) -> i64 {
    v.iter()
        .enumerate()
        .map(|(k, &d)| if k % 2 == 0 { d as i64 } else { -(d as i64) })
        .sum()
}

fn a3_golden(d: &Data) -> Check {
    let a = &d.a3;
    let chi = char_poly(a);
    ensure(chi == IntegerPolynomial::from_i64s(&[6, -5, 1]), || format!("chi = {chi}"))?;
    let n = lib(chambers(a))?.len();
    ensure(n == 12, || format!("{n} chambers"))?;
    let b = lib(bounded_chambers(a))?.len();
    ensure(b == 2, || format!("{b} bounded chambers"))?;
    let l = intersection_poset(a);
    for (set, mu) in [(vec![0, 1, 3], 2), (vec![0, 2, 4], 2), (vec![1, 4], 1), (vec![2, 3], 1)] {
        let f = l.flat_by_containing(&set).ok_or_else(|| format!("no flat {set:?}"))?;
        ensure(l.mobius(f.id) == mu, || format!("mu{set:?} = {}", l.mobius(f.id)))?;
    }
    let h = lib(hilbert_series(a))?;
    ensure(h == IntegerPolynomial::from_i64s(&[1, 5, 6]), || format!("Hilbert series {h}"))?;
    let basis: BTreeSet<Vec<usize>> = lib(os_degree(a, 2))?.basis.into_iter().collect();
    let expected: BTreeSet<Vec<usize>> =
        [[1, 4], [2, 3], [0, 1], [1, 3], [0, 2], [2, 4]].iter().map(|m| m.to_vec()).collect();
    ensure(basis == expected, || format!("OS^2 basis {basis:?}"))
}

fn fig4_golden(d: &Data) -> Check {
    let a = &d.fig4;
    let flag = lib(generic_flag(a))?;
    let sizes = lib(flag_partition(a, &flag))?.sizes();
    ensure(sizes == [1, 6, 10], || format!("flag sizes {sizes:?}"))?;
    let (p, _) = lib(minimal_presentation(a))?;
    let mut rhs: Vec<String> = p
        .relations
        .iter()
        .map(|r| r.rhs.iter().map(|g| g.to_string()).collect())
        .collect();
    rhs.sort();
    let mut expected: Vec<String> = [
        "132456", "123546", "135246", "135624", "351246", "134562", "345612", "356124", "561234",
        "512346",
    ]
    .iter()
    .map(ToString::to_string)
    .collect();
    expected.sort();
    ensure(rhs == expected, || format!("relation words {rhs:?}"))?;
    let b = lib(betti_numbers(a))?;
    ensure(b == [1, 6, 10], || format!("Betti numbers {b:?}"))
}

fn braid_family(_: &Data) -> Check {
    for (l, fact) in [(3, 6), (4, 24)] {
        let a = lib(Arrangement::braid(l))?;
        let n = lib(chambers(&a))?.len();
        ensure(n == fact, || format!("Br({l}) has {n} chambers"))?;
    }
    let b3 = lib(Arrangement::braid(3))?;
    let chi = char_poly(&b3);
    ensure(chi == IntegerPolynomial::from_i64s(&[0, 2, -3, 1]), || format!("chi(Br(3)) = {chi}"))?;
    for q in [5u64, 7] {
        let count = lib(count_points_mod_q(&b3, q))?;
        let expected = q * (q - 1) * (q - 2);
        ensure(count == expected, || format!("Br(3) over F_{q}: {count}"))?;
    }
    let h = lib(hilbert_series(&b3))?;
    ensure(h == IntegerPolynomial::from_i64s(&[1, 3, 2]), || format!("Hilbert series {h}"))
}

fn suite(seed: u64) -> Vec<Arrangement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..50)
        .map(|i| random_arrangement(&mut rng, 1 + i % 3, 8, false))
        .collect()
}

fn triple_chi(_: &Data) -> Check {
    for a in suite(SEED) {
        let m = char_poly(&a);
        let w = lib(char_poly_whitney(&a))?;
        let r = char_poly_delres(&a);
        ensure(m == w && m == r, || format!("{m} / {w} / {r} on\n{}", a.to_text()))?;
    }
    Ok(())
}

fn zaslavsky(_: &Data) -> Check {
    for a in suite(SEED) {
        let chi = char_poly(&a);
        let sign = if a.dim() % 2 == 0 { 1 } else { -1 };
        let total = chi.eval_i64(-1) * sign;
        let n = lib(chambers(&a))?.len();
        ensure(total == n.into(), || format!("{n} chambers, formula {total}"))?;
        if a.is_essential() {
            let b = lib(bounded_chambers(&a))?.len();
            let expected = chi.eval_i64(1) * sign;
            ensure(expected == b.into(), || format!("{b} bounded chambers, formula {expected}"))?;
        }
    }
    Ok(())
}

fn chromatic(_: &Data) -> Check {
    for v in 1..=5usize {
        let pairs: Vec<(usize, usize)> = (0..v).flat_map(|i| (i + 1..v).map(move |j| (i, j))).collect();
        for mask in 0u32..(1 << pairs.len()) {
            let edges: Vec<_> = (0..pairs.len()).filter(|k| mask >> k & 1 == 1).map(|k| pairs[k]).collect();
            let g = lib(SimpleGraph::new(v, &edges))?;
            let p = chromatic_poly(&g);
            let chi = char_poly(&lib(Arrangement::graphical(&g))?);
            ensure(p == chi, || format!("graph {edges:?}: {p} vs {chi}"))?;
            for t in 2..=4u64 {
                let brute = count_colorings_brute_force(&g, t);
                ensure(p.eval_i64(t as i64) == brute.into(), || format!("graph {edges:?} at {t}"))?;
            }
        }
    }
    Ok(())
}

fn flag_betti(_: &Data) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let mut list: Vec<Arrangement> = (0..20).map(|_| random_arrangement(&mut rng, 2, 7, false)).collect();
    list.extend((0..5).map(|_| random_arrangement(&mut rng, 3, 6, true)));
    for a in list {
        let flag = lib(generic_flag(&a))?;
        lib(flag.certify(&a))?;
        let sizes = lib(flag_partition(&a, &flag))?.sizes();
        let b = padded(lib(betti_numbers(&a))?, a.dim() + 1);
        let sizes = padded(sizes, a.dim() + 1);
        ensure(sizes == b, || format!("sizes {sizes:?}, Betti {b:?} on\n{}", a.to_text()))?;
    }
    Ok(())
}

fn salvetti_df(d: &Data) -> Check {
    let sal = lib(salvetti_poset(&d.a3))?;
    ensure(sal.f_vector() == [12, 30, 20], || format!("f-vector {:?}", sal.f_vector()))?;
    ensure(sal.euler_characteristic() == 2, || "Euler characteristic".into())?;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut list = vec![d.a3.clone(), d.fig4.clone(), d.triangle.clone(), d.boolean3.clone(), d.generic4.clone()];
    list.extend((0..5).map(|_| random_arrangement(&mut rng, 2, 6, false)));
    for a in list {
        let sal = lib(salvetti_poset(&a))?;
        let df = lib(df_poset(&a))?;
        lib(sal.order.check_axioms())?;
        lib(df.order.check_axioms())?;
        let image: Vec<usize> = (0..sal.elements.len())
            .map(|e| sal_to_df(&sal, e, &df))
            .collect::<Result<_>>()
            .map_err(|e| e.to_string())?;
        for x in 0..image.len() {
            for y in 0..image.len() {
                if sal.order.le(x, y) && !df.order.le(image[x], image[y]) {
                    return Err(format!("order not preserved on\n{}", a.to_text()));
                }
            }
        }
    }
    Ok(())
}

fn twisted(d: &Data) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 9);
    for _ in 0..25 {
        let a = random_arrangement(&mut rng, 2, 6, false);
        let ls = random_system(&mut rng, a.len());
        let cx = lib(twisted_complex(&a, &ls))?;
        ensure(cx.is_cochain_complex(), || format!("nabla^2 != 0 on\n{}", a.to_text()))?;
        let dims = cx.cohomology();
        let sizes = lib(flag_partition(&a, &cx.flag))?.sizes();
        ensure(alternating(&dims) == alternating(&sizes), || format!("Euler characteristic {dims:?}"))?;
        let trivial = LocalSystem::trivial(ls.field.clone(), a.len());
        let h = lib(twisted_complex(&a, &trivial))?.cohomology();
        let b = padded(lib(betti_numbers(&a))?, 3);
        ensure(padded(h.clone(), 3) == b, || format!("trivial system {h:?}, Betti {b:?}"))?;
    }
    let q = CoefficientField::Rationals;
    let ls = lib(LocalSystem::parse(q.clone(), "2,2,2"))?;
    let h = lib(twisted_complex(&d.triangle, &ls))?.cohomology();
    ensure(h == [0, 0, 1], || format!("triangle {h:?}"))?;
    let line = lib(Arrangement::new(1, (0..4).map(|i| Hyperplane::from_ints(&[1], i).expect("nonzero")).collect()))?;
    let ls = lib(LocalSystem::parse(q, "2,3,5,7"))?;
    let h = lib(twisted_complex(&line, &ls))?.cohomology();
    ensure(h == [0, 3], || format!("four points {h:?}"))
}

fn fox(_: &Data) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 10);
    for i in 0..25 {
        let a = random_arrangement(&mut rng, 2, 6, false);
        let field = if i % 2 == 0 {
            CoefficientField::prime(101).expect("prime")
        } else {
            CoefficientField::Rationals
        };
        let ls = random_system_over(&mut rng, field, a.len());
        let (p, norm) = lib(minimal_presentation(&a))?;
        let f = lib(fox_h1(&p, &ls.permuted(&norm.permutation)))?;
        let h = lib(twisted_complex(&a, &ls))?.cohomology();
        ensure(h.get(1) == Some(&f), || format!("Fox {f}, twisted {h:?} on\n{}", a.to_text()))?;
    }
    Ok(())
}

fn galleries(d: &Data) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 11);
    for _ in 0..10 {
        let a = random_arrangement(&mut rng, 2, 5, false);
        let g = lib(ChamberGraph::new(&a))?;
        for c in 0..g.len() {
            for e in 0..g.len() {
                let geos = g.geodesics(c, e);
                let class = lib(g.flip_class(&geos[0]))?;
                ensure(class == geos, || format!("geodesics {c} -> {e} split on\n{}", a.to_text()))?;
            }
        }
    }
    // Fig. 13: the two galleries are connected by geodesic flips
    let a = &d.triangle;
    let g = lib(ChamberGraph::new(a))?;
    let at = |x: i64, y: i64| g.chamber_of(&sign_vector(a, &[rat(x), rat(y)]));
    let (c0, c1, c2, c3) = (lib(at(3, 3))?, lib(at(3, 0))?, lib(at(0, 0))?, lib(at(6, 0))?);
    let red = vec![c0, c1, c2, c1, c3, c1];
    let blue = vec![c0, c1, c3, c1, c2, c1];
    let class = lib(g.flip_class(&red))?;
    ensure(class.contains(&blue), || "red and blue galleries are not flip equivalent".into())
}

fn spheres(d: &Data) -> Check {
    for s in ["+++", "++-", "+-+", "+--", "-++", "-+-", "--+", "---"] {
        let eps = lib(SignVector::parse(s))?;
        ensure(lib(sphere_is_trivial(&d.boolean3, &eps))?, || format!("{s} nontrivial"))?;
    }
    let eps = lib(SignVector::parse("+++-"))?;
    ensure(!lib(sphere_is_trivial(&d.generic4, &eps))?, || "+++- trivial".into())
}
