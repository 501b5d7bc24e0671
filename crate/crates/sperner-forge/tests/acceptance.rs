//! Acceptance run: one `PASS`/`FAIL` line per criterion, nonzero exit on any
//! failure. Expected values come from closed forms recomputed here, not from
//! the library's own formulas.

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sperner_forge::base2d::{BaseInstance, BasePoint};
use sperner_forge::cake::{audit, UtilityModel};
use sperner_forge::cli::experiments::{base_targets, bench_queries, core_cell_center};
use sperner_forge::converter_sym::ShrinkContext;
use sperner_forge::lift::{LiftedColoring, Mode, SpernerScope};
use sperner_forge::numerics::{ad_compare, pow2, rat, AlgebraicDyadic as AD, Rational};
use sperner_forge::recover::{recover, verify_c_solution};
use sperner_forge::rect2d::{GeneratorKind, RectInstance};
use sperner_forge::simplex::{project_once, random_point, SimplexPoint};
use sperner_forge::Error;
use std::cmp::Ordering;
use std::time::Instant;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn rect(n: u32, seed: u64) -> RectInstance {
    if n == 1 {
        RectInstance::trivial_split(1).unwrap()
    } else {
        RectInstance::generate(GeneratorKind::PlantedPath, n, seed).unwrap()
    }
}

fn base(n: u32, seed: u64) -> BaseInstance {
    BaseInstance::new(rect(n, seed)).unwrap()
}

fn bp(x2: Rational, x3: Rational) -> BasePoint {
    BasePoint::rational(x2, x3).unwrap()
}

/// Uniform rational in `[lo, hi]` with denominator `den`.
fn uniform(rng: &mut ChaCha8Rng, lo: &Rational, hi: &Rational, den: i64) -> Rational {
    let a = (lo * Rational::from_integer(den.into())).ceil().to_integer();
    let b = (hi * Rational::from_integer(den.into())).floor().to_integer();
    let (a, b): (i64, i64) = (a.try_into().unwrap(), b.try_into().unwrap());
    rat(rng.gen_range(a..=b), den)
}

fn clamp01(v: Rational) -> Rational {
    v.max(Rational::zero()).min(Rational::one())
}

/// `(1/2 + (z − 0.1)/(2ε²))` clamped to `[0,1]`.
fn boundary_closed_form(z: &Rational, eps_sq: &Rational) -> Rational {
    clamp01(rat(1, 2) + (z - rat(1, 10)) / (eps_sq * Rational::from_integer(2.into())))
}

fn is01(v: &AD) -> bool {
    v.is_zero() || *v == AD::one()
}

/// `‖x − x'‖_∞` over all three barycentric coordinates.
fn linf(a: &BasePoint, b: &BasePoint) -> AD {
    let d2 = a.x2.sub(&b.x2).unwrap();
    let d3 = AD::from(&a.x3 - &b.x3);
    let d1 = d2.add(&d3).unwrap();
    [d1.abs(), d2.abs(), d3.abs()]
        .into_iter()
        .reduce(|m, v| if ad_compare(&v, &m).unwrap() == Ordering::Greater { v } else { m })
        .unwrap()
}

fn le(a: &AD, b: &AD) -> bool {
    ad_compare(a, b).unwrap() != Ordering::Greater
}

fn c1_boundary_facts() -> Check {
    let b = base(3, 1);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let den = 1 << 20;
    let mut special = vec![rat(0, 1), rat(1, 10), rat(1, 2), rat(1, 1)];
    let mut checked = 0;
    for s in 0..1000 {
        let t = special.pop().unwrap_or_else(|| {
            // a third of the samples crowd the switch points
            match s % 3 {
                0 => uniform(&mut rng, &rat(0, 1), &rat(1, 1), den),
                1 => uniform(&mut rng, &rat(49, 100), &rat(51, 100), den),
                _ => uniform(&mut rng, &rat(9, 100), &rat(11, 100), den),
            }
        });
        let one_minus = Rational::one() - &t;
        // bottom edge (1−y, y, 0)
        let want = 1 + u8::from(t > rat(1, 2));
        if b.color(&bp(t.clone(), Rational::zero())) != want {
            return Err(format!("C(1−y, y, 0) at y = {t}"));
        }
        // left edge (1−z, 0, z)
        let want = 1 + 2 * u8::from(t > rat(1, 10));
        if b.color(&bp(Rational::zero(), t.clone())) != want {
            return Err(format!("C(1−z, 0, z) at z = {t}"));
        }
        // right edge (0, 1−z, z)
        let want = 2 + u8::from(t > rat(1, 10));
        if b.color(&bp(one_minus, t.clone())) != want {
            return Err(format!("C(0, 1−z, z) at z = {t}"));
        }
        checked += 3;
    }
    Ok(format!("{checked} boundary points"))
}

/// Pairwise `‖·‖_∞ ≤ ε` puts a triple inside an axis-aligned square of side
/// `ε`, which in turn lies in a grid-aligned square of side `ε + s` for grid
/// spacing `s`. So it suffices that every such grid square not contained in
/// the core shows at most two colours.
fn c2_core_confinement() -> Check {
    let (mut scanned, mut inside) = (0u64, 0u64);
    for n_rect in 1..=5u32 {
        let b = base(n_rect, 7 + n_rect as u64);
        let eps = b.eps().clone();
        let s = &eps / rat(4, 1);
        let side = &eps + &s;
        let steps = 4i64 << b.n();
        for a in 0..steps {
            let g2 = &s * rat(a, 1);
            for c in 0..(steps - a) {
                let g3 = &s * rat(c, 1);
                scanned += 1;
                let contained = g2 >= rat(2, 5) && &g2 + &side < rat(3, 5) && g3 >= rat(1, 10) && &g3 + &side < rat(3, 10);
                let colors = b.square_colors(&g2, &g3, &side).unwrap();
                if colors.len() == 3 {
                    if !contained {
                        return Err(format!("n = {}: three colours in the square at {:?}", b.n(), [&g2, &g3]));
                    }
                    inside += 1;
                }
            }
        }
    }
    if inside == 0 {
        return Err("no trichromatic square found at all".into());
    }
    Ok(format!("{scanned} squares of side 5ε/4, {inside} trichromatic, all inside the core"))
}

fn c3_converter_closed_forms() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checked = 0;
    for n_rect in [2u32, 3] {
        let b = base(n_rect, 3);
        let ctx = ShrinkContext::new(b.clone());
        let e2 = b.eps_sq().clone();
        let mut swept = 0;
        while swept < 1000 {
            // the identity holds on hot and warm points, |z − 0.1| < 2ε²
            let z = uniform(&mut rng, &(rat(1, 10) - &e2 * rat(2, 1)), &(rat(1, 10) + &e2 * rat(2, 1)), 1 << 30);
            if (&z - rat(1, 10)).abs() >= &e2 * rat(2, 1) {
                continue;
            }
            swept += 1;
            let want = AD::from(boundary_closed_form(&z, &e2));
            for x in [bp(Rational::zero(), z.clone()), bp(Rational::one() - &z, z.clone())] {
                if b.rel(&x).unwrap() != want {
                    return Err(format!("rel on a side boundary at z = {z}"));
                }
                if ctx.rel_alpha(&x).unwrap() != want {
                    return Err(format!("rel^α on a side boundary at z = {z}"));
                }
                checked += 2;
            }
            let x2 = uniform(&mut rng, &rat(0, 1), &rat(1, 1), 1 << 20);
            if ctx.rel_alpha(&bp(x2.clone(), Rational::zero())).unwrap() != AD::from(x2.clone()) {
                return Err(format!("rel^α(1−x₂, x₂, 0) ≠ x₂ at x₂ = {x2}"));
            }
            checked += 1;
        }
        let n = b.n() as i64;
        if ctx.alpha(&Rational::zero()).unwrap() != AD::from(pow2(1 - 2 * n)) {
            return Err(format!("α(0) ≠ 2^(1−2n) at n = {n}"));
        }
        if ctx.alpha(&Rational::zero()).unwrap() != AD::from(&e2 * rat(2, 1)) {
            return Err(format!("α(0) ≠ 2ε² at n = {n}"));
        }
        for _ in 0..100 {
            let z = uniform(&mut rng, &rat(1, 20), &rat(1, 1), 1 << 20);
            if ctx.alpha(&z).unwrap() != AD::one() {
                return Err(format!("α({z}) ≠ 1"));
            }
        }
        checked += 102;
    }
    Ok(format!("{checked} exact identities"))
}

/// Points crowding colour switches: core grid lines, `x₂ = 0.5` and `x₃ = 0.1`.
fn near_switch_point(rng: &mut ChaCha8Rng, b: &BaseInstance, spread: &Rational, den: i64) -> BasePoint {
    let h = b.cell_side().clone();
    let side = 1i64 << b.rect().n();
    loop {
        let (mut x2, mut x3) = match rng.gen_range(0..5) {
            0 => (rat(2, 5) + &h * rat(rng.gen_range(0..=side), 1), uniform(rng, &rat(1, 10), &rat(3, 10), den)),
            1 => (uniform(rng, &rat(2, 5), &rat(3, 5), den), rat(1, 10) + &h * rat(rng.gen_range(0..=side), 1)),
            2 => (rat(1, 2), uniform(rng, &rat(0, 1), &rat(1, 10), den)),
            3 => (uniform(rng, &rat(0, 1), &rat(9, 10), den), rat(1, 10)),
            _ => (uniform(rng, &rat(0, 1), &rat(1, 1), den), uniform(rng, &rat(0, 1), &rat(1, 1), den)),
        };
        x2 += uniform(rng, &-spread.clone(), spread, den);
        x3 += uniform(rng, &-spread.clone(), spread, den);
        if let Ok(p) = BasePoint::rational(x2, x3) {
            return p;
        }
    }
}

fn perturb(rng: &mut ChaCha8Rng, p: &BasePoint, d2: &Rational, d3: &Rational, den: i64, den3: i64) -> Option<BasePoint> {
    let x2 = p.x2.add_rational(&uniform(rng, &-d2.clone(), d2, den));
    let x3 = &p.x3 + uniform(rng, &-d3.clone(), d3, den3);
    BasePoint::new(x2, x3).ok()
}

fn c4_lipschitz() -> Check {
    let b = base(3, 4);
    let ctx = ShrinkContext::new(b.clone());
    let e2 = b.eps_sq().clone();
    let e3 = &e2 * b.eps();
    let inv_e2 = AD::from(e2.recip());
    let inv_e3 = AD::from(e3.recip());
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut report = Vec::new();

    // warm-up converter: trichromatic neighbourhoods filtered, ε⁻² or both in {0,1}
    let (mut checked, mut lipschitz) = (0, 0);
    while checked < 10_000 {
        let x = near_switch_point(&mut rng, &b, &(&e2 * rat(3, 1)), 1 << 24);
        let Some(y) = perturb(&mut rng, &x, &(&e2 * rat(2, 1)), &(&e2 * rat(2, 1)), 1 << 26, 1 << 26) else { continue };
        if b.neighborhood_palette(&x).unwrap().is_trichromatic() || b.neighborhood_palette(&y).unwrap().is_trichromatic() {
            continue;
        }
        checked += 1;
        let (r, r2) = (b.rel(&x).unwrap(), b.rel(&y).unwrap());
        if is01(&r) && is01(&r2) {
            continue;
        }
        lipschitz += 1;
        if !le(&r.sub(&r2).unwrap().abs(), &inv_e2.mul(&linf(&x, &y)).unwrap()) {
            return Err(format!("rel: ε⁻² bound fails at {:?} / {:?}", x.to_f64(), y.to_f64()));
        }
    }
    report.push(format!("rel {checked} pairs ({lipschitz} in the Lipschitz branch)"));

    // shrunk converter: ε⁻³ bound, with extra weight on the bottom band
    let (mut checked, mut lipschitz) = (0, 0);
    // z on a 1/(20·2^14) grid keeps α's root order at 2^14
    let zden = 20 << 14;
    while checked < 10_000 {
        let x = if checked % 2 == 0 {
            let p = near_switch_point(&mut rng, &b, &(&e2 * rat(3, 1)), 1 << 24);
            if p.x3 >= rat(3, 50) {
                p
            } else {
                let z = rat((&p.x3 * rat(zden, 1)).floor().to_integer().try_into().unwrap(), zden);
                BasePoint::new(p.x2, z).unwrap()
            }
        } else {
            let z = uniform(&mut rng, &rat(0, 1), &rat(3, 50), zden);
            let a = ctx.alpha(&z).unwrap();
            // |g| ≲ 3ε² needs |x₂ − 0.5| ≲ 3ε²/α; stay inside a unit-width window
            let reach = (&e2 * rat(3, 1) / rational_upper(&a)).min(rat(1, 2));
            let x2 = rat(1, 2) + uniform(&mut rng, &-reach.clone(), &reach, 1 << 30);
            match BasePoint::rational(x2, z) {
                Ok(p) => p,
                Err(_) => continue,
            }
        };
        let den3 = if x.x3 < rat(3, 50) { zden } else { 1 << 26 };
        let d3 = if x.x3 < rat(3, 50) { e3.clone() } else { &e2 * rat(2, 1) };
        let Some(y) = perturb(&mut rng, &x, &(&e2 * rat(2, 1)), &d3, 1 << 30, den3) else { continue };
        if b.neighborhood_palette(&x).unwrap().is_trichromatic() || b.neighborhood_palette(&y).unwrap().is_trichromatic() {
            continue;
        }
        checked += 1;
        let (r, r2) = (ctx.rel_alpha(&x).unwrap(), ctx.rel_alpha(&y).unwrap());
        if is01(&r) && is01(&r2) {
            continue;
        }
        lipschitz += 1;
        if !le(&r.sub(&r2).unwrap().abs(), &inv_e3.mul(&linf(&x, &y)).unwrap()) {
            return Err(format!("rel^α: ε⁻³ bound fails at {:?} / {:?}", x.to_f64(), y.to_f64()));
        }
    }
    report.push(format!("rel^α {checked} pairs ({lipschitz} Lipschitz)"));

    // side boundaries, both converters: ε⁻²·|z − z'|
    let (mut checked, mut lipschitz) = (0, 0);
    let side = |z: &Rational, right: bool| if right { bp(Rational::one() - z, z.clone()) } else { bp(Rational::zero(), z.clone()) };
    for draw in 0.. {
        if checked >= 10_000 {
            break;
        }
        let z = if draw % 2 == 0 {
            uniform(&mut rng, &rat(0, 1), &rat(1, 1), zden)
        } else {
            uniform(&mut rng, &(rat(1, 10) - &e2 * rat(3, 1)), &(rat(1, 10) + &e2 * rat(3, 1)), zden)
        };
        let z2 = &z + uniform(&mut rng, &(&e2 * rat(-2, 1)), &(&e2 * rat(2, 1)), zden);
        if z2.is_negative() || z2 > Rational::one() {
            continue;
        }
        let (x, y) = (side(&z, rng.gen()), side(&z2, rng.gen()));
        let bound = AD::from(e2.recip() * (&z - &z2).abs());
        for (r, r2) in [(b.rel(&x).unwrap(), b.rel(&y).unwrap()), (ctx.rel_alpha(&x).unwrap(), ctx.rel_alpha(&y).unwrap())] {
            checked += 1;
            if is01(&r) && is01(&r2) {
                continue;
            }
            lipschitz += 1;
            if !le(&r.sub(&r2).unwrap().abs(), &bound) {
                return Err(format!("boundary ε⁻² bound fails at z = {z}, z' = {z2}"));
            }
        }
    }
    report.push(format!("boundary {checked} pairs ({lipschitz} Lipschitz)"));

    // projection step: 110·‖x − x'‖_∞ when both last coordinates are ≤ 0.9
    let mut checked = 0;
    while checked < 10_000 {
        let k = rng.gen_range(2..=5usize);
        let x = random_point(&mut rng, k, 1 << 12);
        let mut c: Vec<Rational> = x.coords().to_vec();
        let (i, j) = (rng.gen_range(0..=k), rng.gen_range(0..=k));
        let d = uniform(&mut rng, &rat(0, 1), &rat(1, 64), 1 << 16);
        c[i] += &d;
        c[j] -= &d;
        let Ok(y) = SimplexPoint::new(c) else { continue };
        if *x.x(k + 1) > rat(9, 10) || *y.x(k + 1) > rat(9, 10) {
            continue;
        }
        checked += 1;
        if project_once(&x).linf(&project_once(&y)) > x.linf(&y) * rat(110, 1) {
            return Err(format!("projection bound fails at {:?}", x.coords()));
        }
    }
    report.push(format!("projection {checked} pairs"));

    // utilities: ‖·‖₁ over cut vectors
    let lc = LiftedColoring::new(Mode::Symmetric, 3, base(3, 4)).unwrap();
    let model = UtilityModel::new(lc, 3).unwrap();
    let row = sperner_forge::cake::audit_lipschitz(&model, 10_000, 4).unwrap();
    if row.violations > 0 {
        return Err(format!("utility Lipschitz: {} violations", row.violations));
    }
    report.push(format!("utility {} pairs", row.checked));
    Ok(report.join("; "))
}

/// A rational at least as large as `a` (upper end of a 64-bit enclosure).
fn rational_upper(a: &AD) -> Rational {
    a.enclosure(64).1
}

fn c5_symmetry() -> Check {
    let b = base(3, 5);
    let k2 = LiftedColoring::new(Mode::Symmetric, 2, b.clone()).unwrap().check_symmetry(10, None).unwrap();
    if !k2.ok() {
        return Err(format!("k = 2: {} violations", k2.violation_count));
    }
    let k3 = LiftedColoring::new(Mode::Symmetric, 3, b.clone()).unwrap().check_symmetry(6, None).unwrap();
    if !k3.ok() {
        return Err(format!("k = 3: {} violations", k3.violation_count));
    }
    let warm = LiftedColoring::new(Mode::Warmup, 3, b.clone()).unwrap();
    if !matches!(warm.check_symmetry(6, None), Err(Error::ModeMismatch)) {
        return Err("check_symmetry accepted a warm-up colouring".into());
    }
    let w = warm.symmetry_violations(6, None).unwrap();
    let Some(v) = w.violations.first() else {
        return Err("the warm-up colouring shows no symmetry counterexample".into());
    };
    Ok(format!(
        "{} + {} pairs clean; warm-up counterexample at insertions ({}, {}) of {:?}: colours {} vs {} ({} total)",
        k2.checked_pairs,
        k3.checked_pairs,
        v.i,
        v.j,
        v.base.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        v.color_i,
        v.color_j,
        w.violation_count
    ))
}

fn c6_sperner() -> Check {
    let b = base(3, 6);
    let mut total = 0;
    for mode in [Mode::Warmup, Mode::Symmetric] {
        let r = LiftedColoring::new(mode, 3, b.clone()).unwrap().validate_sperner_condition(6, SpernerScope::Faces).unwrap();
        if !r.ok() {
            return Err(format!("{mode:?} faces at m = 6: {} violations", r.violation_count));
        }
        total += r.checked;
        for k in 2..=5 {
            let lc = LiftedColoring::new(mode, k, b.clone()).unwrap();
            let r = lc.validate_sperner_condition(10, SpernerScope::RandomInterior { count: 10_000, seed: k as u64 }).unwrap();
            if !r.ok() {
                return Err(format!("{mode:?} k = {k} interior: {} violations", r.violation_count));
            }
            total += r.checked;
        }
    }
    Ok(format!("{total} grid points, both modes"))
}

/// Three distinct colours, pairwise `‖·‖_∞ ≤ ε`, recomputed from scratch.
fn independently_valid(b: &BaseInstance, t: &[BasePoint; 3]) -> bool {
    let eps = AD::from(b.eps().clone());
    let mut colors: Vec<u8> = t.iter().map(|p| b.color(p)).collect();
    colors.sort_unstable();
    colors.dedup();
    colors.len() == 3 && (0..3).all(|i| (i + 1..3).all(|j| le(&linf(&t[i], &t[j]), &eps)))
}

fn c7_recovery() -> Check {
    let mut witnesses = 0;
    let mut soundness = 0;
    let mut accepted_random = 0;
    for n in [3u32, 4] {
        let b = base(n, 70 + n as u64);
        let planted = b.rect().planted_solution().unwrap();
        let targets = base_targets(&b, planted, 100, n as u64).unwrap();
        for k in [3usize, 4, 5] {
            let lc = LiftedColoring::new(Mode::Symmetric, k, b.clone()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(k as u64 * 10 + n as u64);
            let mut triples = Vec::new();
            for i in 0..100 {
                let xs = lc.build_witness(&targets[i % targets.len()]).unwrap();
                let mut colors: Vec<u32> = xs.iter().map(|x| lc.eval(x).unwrap()).collect();
                colors.sort_unstable();
                colors.dedup();
                if colors.len() != 3 {
                    return Err(format!("k = {k}, n = {n}: witness {i} is not trichromatic"));
                }
                let out = recover(&lc, &xs).map_err(|e| format!("k = {k}, n = {n}: witness {i}: {e}"))?;
                if !independently_valid(&b, &out.triple) {
                    return Err(format!("k = {k}, n = {n}: witness {i} recovered an invalid triple"));
                }
                match out.rect_cell {
                    Some(c) if b.rect().is_solution(c) => {}
                    other => return Err(format!("k = {k}, n = {n}: witness {i} mapped to rect cell {other:?}")),
                }
                witnesses += 1;
                triples.push(xs);
            }
            for s in 0..1000 {
                let xs: [SimplexPoint; 3] = match s % 3 {
                    0 => [0, 1, 2].map(|_| random_point(&mut rng, k, 1 << 12)),
                    1 => {
                        // A witness triple with one point moved slightly. Mass
                        // moves between x₁ and x₂ only: that leaves every
                        // projected height, and so every α(z), untouched.
                        let mut t = triples[s % triples.len()].clone();
                        let j = rng.gen_range(0..3);
                        let mut c = t[j].coords().to_vec();
                        let (a, bb) = if rng.gen() { (0, 1) } else { (1, 0) };
                        let d = rat(rng.gen_range(1..=1 << 8), 1 << 40).min(c[bb].clone());
                        c[a] += &d;
                        c[bb] -= &d;
                        t[j] = SimplexPoint::new(c).unwrap();
                        t
                    }
                    _ => {
                        // two witness points and a random third
                        let mut t = triples[s % triples.len()].clone();
                        t[rng.gen_range(0..3)] = random_point(&mut rng, k, 1 << 12);
                        t
                    }
                };
                match recover(&lc, &xs) {
                    Ok(out) => {
                        if !independently_valid(&b, &out.triple) || !verify_c_solution(&b, &out.triple).unwrap().valid {
                            return Err(format!("k = {k}, n = {n}: unverified triple accepted"));
                        }
                        accepted_random += 1;
                    }
                    Err(Error::NotASolution(_)) => {}
                    Err(e) => return Err(format!("k = {k}, n = {n}: {e}")),
                }
                soundness += 1;
            }
        }
    }
    Ok(format!("{witnesses} witnesses recovered; {soundness} perturbed/random triples, {accepted_random} accepted, all verified"))
}

fn c8_cake() -> Check {
    let lc = LiftedColoring::new(Mode::Symmetric, 3, base(3, 8)).unwrap();
    let model = UtilityModel::new(lc, 3).unwrap();
    let rows = audit(&model, 10_000, 8).unwrap();
    let bad: Vec<String> = rows.iter().filter(|r| r.violations > 0).map(|r| format!("{}: {}", r.check, r.violations)).collect();
    if !bad.is_empty() {
        return Err(bad.join(", "));
    }
    if rows.iter().any(|r| r.checked == 0) {
        return Err("an audit row checked nothing".into());
    }
    Ok(rows.iter().map(|r| format!("{} {}", r.check, r.checked)).collect::<Vec<_>>().join(", "))
}

fn c9_queries() -> Check {
    let ks: Vec<usize> = (2..=8).collect();
    let s = bench_queries(3, &ks, 200, 9, 0.1).unwrap();
    if !s.linear_ok {
        return Err(format!("max relative residual {:.3} from the line", s.max_rel_residual));
    }
    let b = base(3, 9).with_counter();
    let y = core_cell_center(&b, 3, 5);
    b.reset_queries();
    b.color(&y);
    if b.queries() != 1 {
        return Err(format!("a core evaluation cost {} rect queries", b.queries()));
    }
    let means: Vec<String> = s.rows.iter().map(|r| format!("{}", r.queries_per_eval_mean)).collect();
    Ok(format!("means [{}], slope {:.3}, residual {:.3}", means.join(", "), s.slope, s.max_rel_residual))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("boundary facts", c1_boundary_facts),
        ("core confinement", c2_core_confinement),
        ("converter closed forms", c3_converter_closed_forms),
        ("lipschitz properties", c4_lipschitz),
        ("symmetry", c5_symmetry),
        ("sperner condition", c6_sperner),
        ("recovery", c7_recovery),
        ("cake", c8_cake),
        ("query accounting", c9_queries),
    ];
    let only: Option<usize> = std::env::args().nth(1).and_then(|a| a.parse().ok());
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        if only.is_some_and(|o| o != i + 1) {
            continue;
        }
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("PASS {} {name} ({secs:.1}s): {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {} {name} ({secs:.1}s): {msg}", i + 1);
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
