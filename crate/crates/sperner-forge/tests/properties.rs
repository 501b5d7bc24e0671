use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use sperner_forge::base2d::{BaseInstance, BasePoint};
use sperner_forge::lift::{LiftedColoring, Mode};
use sperner_forge::numerics::{ad_compare, ad_from_pow2, rat, AlgebraicDyadic as AD, Rational};
use sperner_forge::rect2d::{GeneratorKind, RectInstance, RectSolution};
use sperner_forge::simplex::{insert_zero, project_once, CutVector, SimplexPoint};
use std::cmp::Ordering;
use std::sync::OnceLock;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-200i64..=200, 1i64..=64).prop_map(|(p, q)| rat(p, q))
}

/// `2^(p/q)` against a positive rational `a/b`, by `2^p·b^q` vs `a^q` on integers.
fn pow2_cmp_oracle(p: i64, q: u32, r: &Rational) -> Ordering {
    let (a, b) = (r.numer().clone(), r.denom().clone());
    let (lhs, rhs) = if p >= 0 {
        ((BigInt::one() << p as usize) * num_traits::pow(b, q as usize), num_traits::pow(a, q as usize))
    } else {
        (num_traits::pow(b, q as usize), num_traits::pow(a, q as usize) << (-p) as usize)
    };
    lhs.cmp(&rhs)
}

fn lattice_point(k: usize) -> impl Strategy<Value = SimplexPoint> {
    prop::collection::vec(0u64..8, k + 1)
        .prop_filter("nonzero", |c| c.iter().any(|&v| v > 0))
        .prop_map(|c| {
            let n: u64 = c.iter().sum();
            SimplexPoint::from_lattice(&c, n)
        })
}

fn coloring(mode: Mode, k: usize) -> LiftedColoring {
    static BASE: OnceLock<BaseInstance> = OnceLock::new();
    let base = BASE.get_or_init(|| BaseInstance::new(RectInstance::generate(GeneratorKind::PlantedPath, 3, 17).unwrap()).unwrap());
    LiftedColoring::new(mode, k, base.clone()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rationals_round_trip_through_dyadics(r in small_rational()) {
        prop_assert_eq!(AD::from(r.clone()).to_rational(), Some(r));
    }

    #[test]
    fn single_powers_order_like_integer_powers(p in -40i64..40, q in 1u32..12, r in (1i64..400, 1i64..400)) {
        let r = rat(r.0, r.1);
        let a = ad_from_pow2(&rat(p, q as i64)).unwrap();
        let want = pow2_cmp_oracle(p, q, &r);
        prop_assert_eq!(ad_compare(&a, &AD::from(r)).unwrap(), want);
    }

    #[test]
    fn difference_vanishes_iff_equal(
        t in prop::collection::vec((small_rational(), (-6i64..6, 1i64..5)), 0..4),
        u in prop::collection::vec((small_rational(), (-6i64..6, 1i64..5)), 0..4),
    ) {
        let mk = |v: &[(Rational, (i64, i64))]| AD::from_terms(v.iter().map(|(c, (p, q))| (c.clone(), rat(*p, *q)))).unwrap();
        let (a, b) = (mk(&t), mk(&u));
        let d = a.sub(&b).unwrap();
        prop_assert_eq!(d.is_zero(), ad_compare(&a, &b).unwrap() == Ordering::Equal);
        prop_assert_eq!(ad_compare(&b, &a).unwrap(), ad_compare(&a, &b).unwrap().reverse());
        // a + b − b = a
        prop_assert_eq!(a.add(&b).unwrap().sub(&b).unwrap(), a);
    }

    #[test]
    fn cut_vectors_round_trip(x in lattice_point(4)) {
        let t = CutVector::from_point(&x);
        prop_assert!(t.cuts().windows(2).all(|w| w[0] <= w[1]));
        prop_assert_eq!(t.to_point(), x.clone());
        for i in 0..=4 {
            prop_assert_eq!(&t.piece_len(i), x.x(i + 1));
        }
    }

    #[test]
    fn projection_stays_on_the_simplex(x in lattice_point(4)) {
        let y = project_once(&x);
        prop_assert_eq!(y.dim(), 3);
        prop_assert!(y.coords().iter().all(|c| !c.is_negative()));
        prop_assert_eq!(y.coords().iter().sum::<Rational>(), Rational::one());
    }

    #[test]
    fn generated_rect_instances_keep_their_contract(n in 2u32..6, seed in 0u64..1000) {
        let r = RectInstance::generate(GeneratorKind::PlantedPath, n, seed).unwrap();
        prop_assert!(r.validate_boundary().is_empty());
        let planted = r.planted_solution().unwrap();
        // oracle: count cells whose four corners show three colours
        let mut sols = Vec::new();
        for x in 0..r.max_coord() {
            for y in 0..r.max_coord() {
                let mut c = vec![r.color(x, y), r.color(x + 1, y), r.color(x, y + 1), r.color(x + 1, y + 1)];
                c.sort_unstable();
                c.dedup();
                if c.len() == 3 {
                    sols.push(RectSolution { x, y });
                }
            }
        }
        prop_assert!(sols.contains(&planted));
        prop_assert!(r.is_solution(planted));
    }

    #[test]
    fn colours_lie_in_the_support(x in lattice_point(4), sym in any::<bool>()) {
        let lc = coloring(if sym { Mode::Symmetric } else { Mode::Warmup }, 4);
        let c = lc.eval(&x).unwrap() as usize;
        prop_assert!((1..=5).contains(&c));
        prop_assert!(!x.x(c).is_zero(), "colour {} on a zero coordinate of {:?}", c, x.coords());
    }

    #[test]
    fn symmetric_colour_ignores_inserted_zeros(x in lattice_point(2), i in 1usize..=4, j in 1usize..=4) {
        prop_assume!(i != j);
        let lc = coloring(Mode::Symmetric, 3);
        let (xi, xj) = (insert_zero(&x, i), insert_zero(&x, j));
        let (ci, cj) = (lc.eval(&xi).unwrap(), lc.eval(&xj).unwrap());
        // the colour index shifts past the inserted slot
        let unshift = |c: u32, slot: usize| if c as usize > slot { c - 1 } else { c };
        prop_assert_eq!(unshift(ci, i), unshift(cj, j));
    }

    #[test]
    fn neighbourhood_palette_witnesses_are_near(x2 in 0u32..=1000, x3 in 0u32..=1000) {
        prop_assume!(x2 + x3 <= 1000);
        let b = coloring(Mode::Warmup, 2).base().clone();
        let y = BasePoint::rational(rat(x2 as i64, 1000), rat(x3 as i64, 1000)).unwrap();
        let pal = b.neighborhood_palette(&y).unwrap();
        prop_assert!(!pal.colors.is_empty());
        let half = b.eps() / rat(2, 1);
        for (c, w) in &pal.witnesses {
            prop_assert_eq!(b.color(w), *c);
            let d2 = w.x2.sub(&y.x2).unwrap().abs();
            prop_assert!(d2.cmp_rational(&half) != Ordering::Greater);
            prop_assert!((&w.x3 - &y.x3).abs() <= half);
        }
    }
}
