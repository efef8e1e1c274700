use loopforge::algebra::{
    alternative_check, alternative_loop_algebra, augmentation_ideal, circle, invert, loop_algebra, quasiinverse,
};
use loopforge::constructions::{builtin_loop, cml81, cyclic, zorn_algebra, ZornMatrix};
use loopforge::gf::{Field, PrimeField};
use loopforge::linalg::{add, is_zero, sub, Subspace};
use loopforge::loopcore::{group_type_radical, normal_closure, quotient_loop, DEFAULT_RADICAL_BOUND};
use proptest::prelude::*;

fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn coords(p: u32, n: usize) -> impl Strategy<Value = Vec<u32>> {
    prop::collection::vec(0..p, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zorn_det_is_multiplicative(a in coords(5, 8), b in coords(5, 8)) {
        let f = gf(5);
        let (x, y) = (ZornMatrix::from_coords(&a), ZornMatrix::from_coords(&b));
        let lhs = x.mul(&f, &y).det(&f);
        prop_assert_eq!(lhs, f.mul(&x.det(&f), &y.det(&f)));
    }

    #[test]
    fn zorn_algebra_is_alternative(a in coords(7, 8), b in coords(7, 8)) {
        let f = gf(7);
        let z = zorn_algebra(&f);
        prop_assert!(is_zero(&f, &z.associator(&a, &a, &b)));
        prop_assert!(is_zero(&f, &z.associator(&b, &a, &a)));
    }

    #[test]
    fn zorn_structure_matches_matrix_product(a in coords(3, 8), b in coords(3, 8)) {
        let f = gf(3);
        let z = zorn_algebra(&f);
        let direct = ZornMatrix::from_coords(&a).mul(&f, &ZornMatrix::from_coords(&b)).coords();
        prop_assert_eq!(z.mul(&a, &b), direct.to_vec());
    }

    #[test]
    fn circle_operation_has_unit_zero(x in coords(3, 9)) {
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(9).unwrap()).unwrap();
        prop_assert_eq!(circle(&a, &a.zero(), &x), x.clone());
        prop_assert_eq!(circle(&a, &x, &a.zero()), x);
    }

    #[test]
    fn augmentation_elements_are_quasiregular(c in coords(3, 8)) {
        // omega of a 3-group algebra over GF(3) is nil, so every element has a quasi-inverse
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(9).unwrap()).unwrap();
        let all: Vec<usize> = (0..9).collect();
        let w = augmentation_ideal(&a, &all).unwrap();
        let x = w.combination(&c).unwrap();
        let s = quasiinverse(&a, &x).unwrap().expect("nil element is quasiregular");
        prop_assert_eq!(add(&f, &x, &s), a.mul(&x, &s));
        prop_assert_eq!(a.mul(&x, &s), a.mul(&s, &x));
    }

    #[test]
    fn eta_turns_circle_into_product(c in coords(3, 8), d in coords(3, 8)) {
        let f = gf(3);
        let a = loop_algebra(&f, &cyclic(9).unwrap()).unwrap();
        let all: Vec<usize> = (0..9).collect();
        let w = augmentation_ideal(&a, &all).unwrap();
        let (x, y) = (w.combination(&c).unwrap(), w.combination(&d).unwrap());
        let e = a.unit().unwrap().clone();
        let lhs = a.mul(&sub(&f, &e, &x), &sub(&f, &e, &y));
        prop_assert_eq!(lhs, sub(&f, &e, &circle(&a, &x, &y)));
    }

    #[test]
    fn loop_images_are_invertible_in_fq(x in 0usize..81) {
        let f = gf(3);
        let l = cml81().unwrap();
        let q = cached_fq(&f, &l);
        let img = q.project_basis(x);
        let inv = invert(q.algebra(), &img).unwrap().expect("loop elements are units");
        prop_assert_eq!(inv, q.project_basis(l.inv(x)));
    }

    #[test]
    fn principal_normal_closures_are_normal(x in 0usize..81) {
        let l = cml81().unwrap();
        let n = normal_closure(&l, &[x]);
        prop_assert!(quotient_loop(&l, &n).is_ok());
        prop_assert_eq!(l.order() % n.order(), 0);
    }

    #[test]
    fn subspace_membership_of_combinations(c in coords(5, 3)) {
        let f = gf(5);
        let rows: Vec<Vec<u32>> = vec![vec![1, 2, 0, 4], vec![0, 1, 1, 1], vec![3, 0, 2, 2]];
        let s = Subspace::span(&f, 4, rows.iter()).unwrap();
        let v = rows.iter().zip(&c).fold(vec![0u32; 4], |acc, (r, k)| {
            add(&f, &acc, &r.iter().map(|x| f.mul(x, k)).collect::<Vec<_>>())
        });
        prop_assert!(s.contains(&v).unwrap());
    }
}

fn cached_fq(f: &PrimeField, l: &loopforge::loopcore::FiniteLoop) -> loopforge::algebra::QuotientAlgebra<PrimeField> {
    use std::sync::OnceLock;
    static FQ: OnceLock<loopforge::algebra::QuotientAlgebra<PrimeField>> = OnceLock::new();
    FQ.get_or_init(|| alternative_loop_algebra(f, l).unwrap()).clone()
}

#[test]
fn small_group_algebras_are_alternative() {
    for (name, p) in [("s3", 5), ("c6", 7), ("chein12", 3)] {
        let l = builtin_loop(name).unwrap();
        let q = alternative_loop_algebra(&gf(p), &l).unwrap();
        assert!(alternative_check(q.algebra(), None).ok, "{name} over GF({p})");
    }
}

#[test]
fn chein12_collapses_to_a_klein_four_algebra_over_gf7() {
    // independent count: dim F[Q] equals the number of distinct images
    let l = builtin_loop("chein12").unwrap();
    let q = alternative_loop_algebra(&gf(7), &l).unwrap();
    assert_eq!(q.dim(), 4);
    let mut imgs: Vec<_> = (0..12).map(|x| q.project_basis(x)).collect();
    imgs.sort();
    imgs.dedup();
    assert_eq!(imgs.len(), 4);
    assert!(q.algebra().associator(&imgs[1], &imgs[2], &imgs[3]).iter().all(|&c| c == 0));
    assert_eq!(group_type_radical(&l, DEFAULT_RADICAL_BOUND).unwrap().order(), 12);
}
