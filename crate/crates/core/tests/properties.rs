use coverbench::amalgam::{
    amalgam_equal, kernel_decompose, mirror, syllable_length, AmalgamContext, DoubledWord,
    EquivariantHom, Side,
};
use coverbench::cover::{analyze_branched_cover, complete_diamond, riemann_hurwitz, MeridianSpec};
use coverbench::stallings::{graph_from_generators, intersect, kernel_graph, lambda_generators};
use coverbench::word::{hom_image, reduce, CyclicHom, FreeWord, Gen, Letter};
use proptest::prelude::*;

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..4).prop_map(|i| Letter::ALL[i])
}

fn raw_letters(max: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec(letter(), 0..=max)
}

fn word(max: usize) -> impl Strategy<Value = FreeWord> {
    raw_letters(max).prop_map(FreeWord::from_letters)
}

fn cyclic_hom() -> impl Strategy<Value = CyclicHom> {
    (2u64..=8, -8i64..=8, -8i64..=8).prop_map(|(n, a, b)| CyclicHom::new(n, a, b))
}

fn surjective_hom() -> impl Strategy<Value = CyclicHom> {
    cyclic_hom().prop_filter("surjective", |f| f.is_surjective())
}

fn doubled(max_syllables: usize) -> impl Strategy<Value = DoubledWord> {
    (any::<bool>(), prop::collection::vec(word(4), 1..=max_syllables)).prop_map(|(first, ws)| {
        let mut side = if first { Side::Plain } else { Side::Mirror };
        DoubledWord::new(ws.into_iter().map(|w| {
            let s = side;
            side = side.flip();
            (s, w)
        }))
    })
}

/// Naive free reduction with an explicit stack.
fn stack_reduce(ls: &[Letter]) -> Vec<Letter> {
    let mut out: Vec<Letter> = Vec::new();
    for &l in ls {
        if out.last() == Some(&l.inverse()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn reduce_matches_stack_and_is_idempotent(ls in raw_letters(20)) {
        let raw: Vec<(&str, i64)> = ls.iter().map(|l| (l.gen().name(), l.sign())).collect();
        let w = reduce(&raw).unwrap();
        prop_assert_eq!(w.letters().to_vec(), stack_reduce(&ls));
        prop_assert!(w.len() <= ls.len());
        let again: Vec<(&str, i64)> = w.letters().iter().map(|l| (l.gen().name(), l.sign())).collect();
        prop_assert_eq!(reduce(&again).unwrap(), w);
    }

    #[test]
    fn hom_image_is_additive(f in cyclic_hom(), u in word(10), v in word(10)) {
        let n = f.modulus();
        prop_assert_eq!(hom_image(&f, &u.mul(&v)), (hom_image(&f, &u) + hom_image(&f, &v)) % n);
    }

    #[test]
    fn hom_image_ignores_reduction(f in cyclic_hom(), ls in raw_letters(16)) {
        // independent evaluation: signed exponent sums
        let n = f.modulus() as i64;
        let direct = ls.iter().map(|l| l.sign() * f.image(l.gen()) as i64).sum::<i64>().rem_euclid(n);
        prop_assert_eq!(f.apply_letters(&ls) as i64, direct);
        prop_assert_eq!(hom_image(&f, &FreeWord::from_letters(ls.clone())) as i64, direct);
    }

    #[test]
    fn products_of_generators_are_members(
        gens in prop::collection::vec(word(4), 1..=3),
        picks in prop::collection::vec((0usize..3, any::<bool>()), 0..=4),
    ) {
        let g = graph_from_generators(&gens);
        let w = picks.iter().fold(FreeWord::identity(), |acc, &(i, inv)| {
            let x = &gens[i % gens.len()];
            acc.mul(&if inv { x.inverse() } else { x.clone() })
        });
        prop_assert!(g.contains(&w));
    }

    #[test]
    fn fold_is_order_independent(gens in prop::collection::vec(word(6), 1..=4), rot in 0usize..4) {
        let mut shuffled = gens.clone();
        let k = rot % shuffled.len();
        shuffled.rotate_left(k);
        shuffled.reverse();
        prop_assert_eq!(graph_from_generators(&gens), graph_from_generators(&shuffled));
    }

    #[test]
    fn intersection_is_conjunction(f in surjective_hom(), gens in prop::collection::vec(word(4), 1..=3), w in word(8)) {
        let a = kernel_graph(&f).unwrap();
        let b = graph_from_generators(&gens);
        let both = intersect(&a, &b);
        prop_assert_eq!(both.contains(&w), a.contains(&w) && b.contains(&w));
    }

    #[test]
    fn orbits_match_cycle_traversal(f in surjective_hom(), w in word(8)) {
        let g = kernel_graph(&f).unwrap();
        let d = g.finite_index().unwrap();
        let sizes = g.orbit_decomposition(std::slice::from_ref(&w)).unwrap();
        prop_assert_eq!(sizes.iter().sum::<usize>(), d);
        // direct traversal of the permutation induced by w
        let mut seen = vec![false; d];
        let mut direct = Vec::new();
        for s in 0..d {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut t = s;
            while !seen[t] {
                seen[t] = true;
                len += 1;
                t = g.read_from(t, &w).unwrap();
            }
            direct.push(len);
        }
        direct.sort_unstable();
        let mut sorted = sizes.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, direct);
    }

    #[test]
    fn schreier_rank_formula(f in surjective_hom(), g in surjective_hom()) {
        let meet = intersect(&kernel_graph(&f).unwrap(), &kernel_graph(&g).unwrap());
        let d = meet.finite_index().unwrap();
        prop_assert_eq!(meet.schreier_basis().basis.len(), 1 + d);
        prop_assert_eq!(meet.rank(), 1 + d);
    }

    #[test]
    fn coset_reduce_contract(gens in prop::collection::vec(word(4), 1..=3), u in word(8), v in word(8)) {
        let g = graph_from_generators(&gens);
        let ru = g.coset_reduce(&u);
        prop_assert_eq!(g.coset_reduce(&ru), ru.clone());
        prop_assert!(g.contains(&u.mul(&ru.inverse())));
        let same = g.contains(&u.mul(&v.inverse()));
        prop_assert_eq!(same, ru == g.coset_reduce(&v));
    }

    #[test]
    fn syllable_length_subadditive(a in doubled(4), b in doubled(4)) {
        let ctx = AmalgamContext::new();
        prop_assert!(syllable_length(&ctx, &a.mul(&b)) <= syllable_length(&ctx, &a) + syllable_length(&ctx, &b));
    }

    #[test]
    fn lambda_commutes_across_sides(a in doubled(3), picks in prop::collection::vec((0usize..3, any::<bool>()), 1..=3)) {
        let ctx = AmalgamContext::new();
        let gens = lambda_generators();
        let l = picks.iter().fold(FreeWord::identity(), |acc, &(i, inv)| {
            acc.mul(&if inv { gens[i].inverse() } else { gens[i].clone() })
        });
        let plain = a.mul(&DoubledWord::plain(l.clone()));
        let mirrored = a.mul(&DoubledWord::mirrored(l));
        prop_assert!(amalgam_equal(&ctx, &plain, &mirrored));
        prop_assert_eq!(mirror(&mirror(&a)), a);
    }

    #[test]
    fn kernel_decompose_sound(w in doubled(5), four in any::<bool>()) {
        let ctx = AmalgamContext::new();
        let base = if four { CyclicHom::pi_nk(4, 1) } else { CyclicHom::pi_2() };
        let f = EquivariantHom::new(base);
        let n = base.modulus();
        let fix = (n - f.apply(&w)) % n;
        let w = w.mul(&DoubledWord::plain(FreeWord::gen(Gen::H).pow(fix as i64)));
        let factors = kernel_decompose(&ctx, &f, &w).unwrap();
        let product = factors.iter().fold(DoubledWord::identity(), |a, b| a.mul(b));
        prop_assert!(amalgam_equal(&ctx, &product, &w));
        for x in &factors {
            prop_assert!(x.is_single_sided());
            prop_assert_eq!(f.apply(x), 0);
        }
    }

    #[test]
    fn riemann_hurwitz_without_branching(chi in -10i64..=2, d in 1usize..=12) {
        prop_assert_eq!(riemann_hurwitz(chi, d, &[]), Ok(d as i64 * chi));
    }
}

#[test]
fn lambda_meets_every_cyclic_kernel_with_full_index() {
    let lambda = lambda_generators();
    for n in 2..=8u64 {
        for k in 0..n as i64 {
            let g = kernel_graph(&CyclicHom::pi_nk(n, k)).unwrap();
            assert_eq!(g.orbit_decomposition(&lambda).unwrap(), vec![n as usize], "n={n} k={k}");
        }
    }
}

#[test]
fn diamond_edges_multiply() {
    let spec = MeridianSpec::standard();
    for (a, b) in [((2, 1, 1), (3, 1, 0)), ((4, 1, 1), (2, 0, 1)), ((4, 1, 1), (6, 1, 1))] {
        let g1 = kernel_graph(&CyclicHom::new(a.0, a.1, a.2)).unwrap();
        let g2 = kernel_graph(&CyclicHom::new(b.0, b.1, b.2)).unwrap();
        let dm = complete_diamond(&g1, &g2, &spec).unwrap();
        assert_eq!(dm.index, dm.index_g1 * dm.over_g1);
        assert_eq!(dm.index, dm.index_g2 * dm.over_g2);
        let an = analyze_branched_cover(&dm.cover, &spec).unwrap();
        for m in &an.meridians {
            assert_eq!(m.datum.degree(), dm.index);
        }
        assert_eq!(an.boundary_orbits.iter().sum::<usize>(), dm.index);
    }
}
