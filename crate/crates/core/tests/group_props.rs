use proptest::prelude::*;
use tamecover::existence::{self, Status};
use tamecover::hurwitz::{BraidMove, HurwitzTuple};
use tamecover::permgroup::{self, Permutation};

fn perm(d: usize) -> impl Strategy<Value = Permutation> {
    Just((0..d).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|images| Permutation::from_images(images).unwrap())
}

fn perms(d: usize, n: usize) -> impl Strategy<Value = Vec<Permutation>> {
    prop::collection::vec(perm(d), n)
}

fn sized_perms(max_d: usize, max_n: usize) -> impl Strategy<Value = (usize, Vec<Permutation>)> {
    (1..=max_d, 1..=max_n).prop_flat_map(|(d, n)| (Just(d), perms(d, n)))
}

/// Tuple with product one, closed off by the inverse of the product.
fn tuples(max_d: usize, max_r: usize) -> impl Strategy<Value = HurwitzTuple> {
    sized_perms(max_d, max_r - 1).prop_map(|(d, mut ps)| {
        let prod = permgroup::product(d, ps.iter()).unwrap();
        ps.push(prod.inverse());
        HurwitzTuple::new(ps).unwrap()
    })
}

fn closure(gens: &[Permutation]) -> usize {
    let d = gens[0].degree();
    let mut seen = std::collections::BTreeSet::from([Permutation::identity(d)]);
    let mut frontier = vec![Permutation::identity(d)];
    while let Some(g) = frontier.pop() {
        for s in gens {
            let h = g.compose(s).unwrap();
            if seen.insert(h.clone()) {
                frontier.push(h);
            }
        }
    }
    seen.len()
}

fn power(g: &Permutation, n: u64) -> Permutation {
    (0..n).fold(Permutation::identity(g.degree()), |acc, _| acc.compose(g).unwrap())
}

proptest! {
    #[test]
    fn compose_is_associative((_, ps) in sized_perms(9, 1).prop_flat_map(|(d, _)| (Just(d), perms(d, 3)))) {
        let (a, b, c) = (&ps[0], &ps[1], &ps[2]);
        prop_assert_eq!(a.compose(b).unwrap().compose(c).unwrap(), a.compose(&b.compose(c).unwrap()).unwrap());
    }

    #[test]
    fn inverse_and_order((_, ps) in sized_perms(10, 1)) {
        let g = &ps[0];
        prop_assert!(g.compose(&g.inverse()).unwrap().is_identity());
        prop_assert!(power(g, g.order()).is_identity());
        prop_assert_eq!(g.cycle_type().total(), g.degree());
    }

    #[test]
    fn cycle_text_round_trip((d, ps) in sized_perms(12, 1)) {
        let g = &ps[0];
        prop_assert_eq!(&permgroup::parse_cycles(&g.to_string(), d).unwrap(), g);
    }

    #[test]
    fn block_systems_are_preserved((_, gens) in sized_perms(8, 2)) {
        prop_assume!(permgroup::is_transitive(&gens).unwrap());
        for bs in permgroup::block_systems(&gens).unwrap() {
            for g in &gens {
                prop_assert!(bs.is_preserved_by(g));
            }
            let (a, b) = (&gens[0], &gens[gens.len() - 1]);
            let ab = a.compose(b).unwrap();
            let lhs = permgroup::induced_on_blocks(&ab, &bs).unwrap();
            let rhs = permgroup::induced_on_blocks(a, &bs).unwrap().compose(&permgroup::induced_on_blocks(b, &bs).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn group_order_matches_closure((_, gens) in sized_perms(6, 3)) {
        prop_assert_eq!(permgroup::group_order(&gens).unwrap(), closure(&gens) as u64);
        if permgroup::is_transitive(&gens).unwrap() {
            let class = permgroup::classify_group(&gens, 12).unwrap();
            prop_assert_eq!(class.order, closure(&gens) as u64);
        }
    }

    #[test]
    fn braid_moves_keep_invariants(t in tuples(7, 5), i in 0usize..4, inverse in any::<bool>()) {
        prop_assume!(i + 1 < t.r());
        let m = if inverse { BraidMove::backward(i) } else { BraidMove::forward(i) };
        let u = t.braid_apply(m).unwrap();
        prop_assert!(u.product().is_identity());
        prop_assert_eq!(u.is_transitive(), t.is_transitive());
        prop_assert_eq!(permgroup::group_order(u.perms()).unwrap(), permgroup::group_order(t.perms()).unwrap());
        let mut before: Vec<_> = t.perms().iter().map(|g| g.cycle_type()).collect();
        let mut after: Vec<_> = u.perms().iter().map(|g| g.cycle_type()).collect();
        before.sort();
        after.sort();
        prop_assert_eq!(before, after);
        let back = if inverse { BraidMove::forward(i) } else { BraidMove::backward(i) };
        prop_assert_eq!(u.braid_apply(back).unwrap(), t);
    }

    #[test]
    fn decide_ignores_order(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), e in prop::collection::vec(1u64..14, 3..7), seed in any::<u64>()) {
        let mut shuffled = e.clone();
        let n = shuffled.len();
        shuffled.rotate_left((seed % n as u64) as usize);
        shuffled.swap(0, (seed / 7 % n as u64) as usize);
        prop_assert_eq!(existence::decide(p, &e).status, existence::decide(p, &shuffled).status);
    }

    #[test]
    fn unramified_points_do_not_matter(p in prop::sample::select(vec![3u64, 5, 7, 11]), e in prop::collection::vec(2u64..10, 3..6)) {
        let base = existence::decide(p, &e).status;
        let mut padded = e.clone();
        padded.insert(1, 1);
        let more = existence::decide(p, &padded).status;
        if base != Status::OutOfScope && more != Status::OutOfScope {
            prop_assert_eq!(base, more);
        }
    }

    #[test]
    fn certificates_validate(p in prop::sample::select(vec![5u64, 7, 11]), e in prop::collection::vec(1u64..8, 3..6)) {
        let v = existence::decide(p, &e);
        if v.status == Status::Exists {
            let lengths: Vec<usize> = e.iter().map(|&x| x as usize).collect();
            let t = v.certificate.unwrap();
            prop_assert!(t.validate(Some(&lengths)).is_valid());
        }
    }
}
