mod common;

use isopower::arith::{extension_count, EllipticCurve, FiniteField};
use isopower::kernels::Subgroup;
use isopower::modules::oracle::random_redecomposition;
use isopower::modules::{dual_module, enumerate_modules, normal_form};
use isopower::orders::{class_group, reduced_forms, Form, QuadOrder};
use isopower::zmod::{Mat, Zle};
use isopower::Bounds;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn disc() -> impl Strategy<Value = i64> {
    (3i64..=400).prop_map(|x| -x).prop_filter("discriminant", |d| d.rem_euclid(4) <= 1)
}

fn matrix(n: u64, k: usize) -> impl Strategy<Value = Mat> {
    prop::collection::vec(prop::collection::vec(0..n, k), k)
}

fn eval_poly(r: &Zle, poly: &[u64], a: &Mat) -> Mat {
    let k = a.len();
    let mut acc = r.zeros(k, k);
    for &c in poly.iter().rev() {
        acc = r.mat_add(&r.mat_mul(&acc, a), &r.mat_scale(&r.identity(k), c));
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduction_is_canonical(d in disc(), k in 0usize..50, x in -5i64..=5) {
        let forms = reduced_forms(d);
        let f = forms[k % forms.len()];
        // act by [[1, x], [0, 1]] then swap: same class, different form
        let shifted = Form::new(f.a, f.b + 2 * x * f.a, f.a * x * x + f.b * x + f.c);
        let swapped = Form::new(shifted.c, -shifted.b, shifted.a);
        prop_assert_eq!(swapped.disc(), d);
        prop_assert_eq!(swapped.reduce(), f);
        prop_assert!(f.reduce().is_reduced());
    }

    #[test]
    fn class_group_axioms(d in disc()) {
        let o = QuadOrder::from_disc(d).unwrap();
        let g = class_group(&o, &Bounds::default()).unwrap();
        let h = g.h() as usize;
        prop_assert_eq!(g.structure().iter().product::<u64>(), g.h());
        for i in 0..h {
            prop_assert_eq!(g.compose(i, g.inverse(i)), 0);
            prop_assert_eq!(g.h() % g.element_order(i), 0);
            for j in 0..h {
                prop_assert_eq!(g.compose(i, j), g.compose(j, i));
            }
        }
    }

    #[test]
    fn class_numbers_match_analytic_formula(d in disc()) {
        let o = QuadOrder::from_disc(d).unwrap();
        let g = class_group(&o, &Bounds::default()).unwrap();
        prop_assert_eq!(g.h(), common::class_number(o.fundamental_disc(), o.conductor()));
    }

    #[test]
    fn cayley_hamilton(e in 1u32..=3, ell in prop::sample::select(vec![2u64, 3, 5]), k in 1usize..=4, seed in any::<u64>()) {
        let r = Zle::new(ell, e);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Mat = (0..k).map(|_| (0..k).map(|_| rand::Rng::gen_range(&mut rng, 0..r.n)).collect()).collect();
        let cp = r.charpoly(&a);
        prop_assert_eq!(cp.len(), k + 1);
        prop_assert_eq!(cp[k], 1);
        prop_assert_eq!(eval_poly(&r, &cp, &a), r.zeros(k, k));
    }

    #[test]
    fn kernel_and_image_sizes(a in matrix(9, 3)) {
        let r = Zle::new(3, 2);
        let cols: Vec<Vec<u64>> = (0..3).map(|c| a.iter().map(|row| row[c]).collect()).collect();
        prop_assert_eq!(r.kernel(&a, 3).log_size() + r.span_log_size(&cols), 6);
    }

    #[test]
    fn subgroup_lattice_operations(
        g1 in prop::collection::vec(prop::collection::vec(0u64..4, 2), 0..3),
        g2 in prop::collection::vec(prop::collection::vec(0u64..4, 2), 0..3),
    ) {
        let r = Zle::new(2, 2);
        let a = Subgroup::span(r, 2, &g1);
        let b = Subgroup::span(r, 2, &g2);
        let meet = a.intersect(&b);
        let join = g2.iter().fold(a.clone(), |s, g| s.with(g));
        prop_assert!(meet.is_subset(&a) && meet.is_subset(&b));
        prop_assert!(a.is_subset(&join) && b.is_subset(&join));
        prop_assert_eq!(join.order() * meet.order(), a.order() * b.order());
        prop_assert_eq!(a.product(&b).order(), a.order() * b.order());
        prop_assert_eq!(Subgroup::span(r, 2, &a.generators()), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn normal_form_survives_redecomposition(d in disc(), n in 1usize..=2, k in 0usize..20, seed in any::<u64>()) {
        let b = Bounds::default();
        let o = QuadOrder::from_disc(d).unwrap();
        let nfs = enumerate_modules(&o, n, &b).unwrap();
        let nf = &nfs[k % nfs.len()];
        let m = nf.to_module(&o).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let moved = random_redecomposition(&m, &mut rng, &b).unwrap();
        prop_assert_eq!(&normal_form(&moved).unwrap(), nf);
        let dd = dual_module(&dual_module(&moved).unwrap()).unwrap();
        prop_assert_eq!(&normal_form(&dd).unwrap(), nf);
    }

    #[test]
    fn extension_counts_match_points(p in prop::sample::select(vec![5u64, 7, 11]), a4 in 0i64..11, a6 in 0i64..11, m in 1u32..=3) {
        let b = Bounds::default();
        let f = FiniteField::new(p, 1, &b).unwrap();
        let Ok(c) = EllipticCurve::from_ints(f, [0, 0, 0, a4, a6]) else { return Ok(()) };
        let t = c.frobenius_trace(&b).unwrap();
        prop_assert!(t * t <= 4 * p as i64);
        let big = c.base_change(m, &b).unwrap();
        prop_assert_eq!(big.count_points() as u128, extension_count(t, p, m));
    }
}
