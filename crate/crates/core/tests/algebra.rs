use posfo::shop::{canonicalize_a, canonicalize_e, enumerate_shops};
use posfo::{Dsm, Shop};
use proptest::prelude::*;

fn shop_on(n: usize) -> impl Strategy<Value = Shop> {
    let full = (1u16 << n) - 1;
    proptest::collection::vec(1..=full, n)
        .prop_filter_map("not surjective", |masks| Shop::new(masks).ok())
}

fn three_shops() -> impl Strategy<Value = (Shop, Shop, Shop)> {
    (2usize..=4).prop_flat_map(|n| (shop_on(n), shop_on(n), shop_on(n)))
}

proptest! {
    #[test]
    fn composition_is_associative((f, g, h) in three_shops()) {
        let left = f.after(&g).unwrap().after(&h).unwrap();
        let right = f.after(&g.after(&h).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn identity_is_neutral((f, _, _) in three_shops()) {
        let id = Shop::identity(f.size());
        prop_assert_eq!(&f.after(&id).unwrap(), &f);
        prop_assert_eq!(&id.after(&f).unwrap(), &f);
    }

    #[test]
    fn inverse_is_an_anti_involution((f, g, _) in three_shops()) {
        prop_assert_eq!(&f.inverse().inverse(), &f);
        prop_assert_eq!(
            f.after(&g).unwrap().inverse(),
            g.inverse().after(&f.inverse()).unwrap()
        );
    }

    #[test]
    fn subshops_are_below((f, _, _) in three_shops()) {
        for g in f.surjective_subshops() {
            prop_assert!(g.is_subshop_of(&f).unwrap());
        }
    }
}

#[test]
fn special_shapes_invert_into_each_other() {
    for n in 2..=4 {
        for b in 0..n {
            assert_eq!(Shop::exists(n, b).inverse(), Shop::forall(n, b));
            assert_eq!(Shop::forall(n, b).inverse(), Shop::exists(n, b));
            for b2 in (0..n).filter(|&b2| b2 != b) {
                assert_eq!(
                    Shop::forall_exists(n, b, b2).inverse(),
                    Shop::forall_exists(n, b2, b)
                );
            }
        }
    }
}

#[test]
fn forall_exists_on_one_point_generates_everything() {
    let all = Dsm::closure(2, [Shop::forall_exists(2, 0, 0)]).unwrap();
    assert_eq!(all.len(), 7);
    assert_eq!(all.len(), enumerate_shops(2, 4).unwrap().len());
}

#[test]
fn normal_forms_stay_inside_the_closure() {
    for f in enumerate_shops(3, 4).unwrap() {
        let shape = f.detect_shape();
        let closure = Dsm::closure(3, [f.clone()]).unwrap();
        if shape.is_a() {
            let g = canonicalize_a(&f).unwrap();
            assert!(closure.contains(&g), "{f} -> {g}");
            assert!(g.a_tripartition().is_some(), "{f} -> {g}");
        }
        if shape.is_e() {
            let g = canonicalize_e(&f).unwrap();
            assert!(closure.contains(&g), "{f} -> {g}");
            assert!(g.e_bipartition().is_some(), "{f} -> {g}");
        }
    }
}
