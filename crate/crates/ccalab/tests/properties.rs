//! Invariant checks: randomized where the input space is large, exhaustive
//! over the catalogue where it is small.

use proptest::prelude::*;

use ccalab::cayley::{CayleyGraph, ConnectionSet};
use ccalab::decide::{decide, Property, ReductionFlags};
use ccalab::engine::{colour_permutation, stabilizer, StabilizerOptions};
use ccalab::families::{self, evaluate, GroupRecipe};
use ccalab::group::{
    automorphism_group, is_affine, is_generating, is_isomorphic, normalizes_left_regular, Group,
    VertexMap,
};

fn eval(text: &str) -> Group {
    evaluate(&text.parse().unwrap()).unwrap()
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

/// Inverse-closed pair classes {s, s⁻¹} over the whole group.
fn classes(g: &Group) -> Vec<Vec<usize>> {
    (1..g.order())
        .filter(|&s| s <= g.inv(s))
        .map(|s| if g.inv(s) == s { vec![s] } else { vec![s, g.inv(s)] })
        .collect()
}

/// Picks a generating union of classes from the seed, by rejection.
fn random_generating_set(g: &Group, seed: u64) -> Vec<usize> {
    let classes = classes(g);
    assert!(!classes.is_empty(), "the trivial group has no connection sets");
    let mut state = seed | 1;
    loop {
        let mask = xorshift(&mut state) as usize;
        let set: Vec<usize> = classes
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << (i % 64)) != 0)
            .flat_map(|(_, c)| c.iter().copied())
            .collect();
        if !set.is_empty() && is_generating(g, &set) {
            return set;
        }
    }
}

fn random_permutation_fixing_identity(n: usize, seed: u64) -> Vec<usize> {
    let mut state = seed | 1;
    let mut image: Vec<usize> = (0..n).collect();
    for i in (2..n).rev() {
        let j = 1 + (xorshift(&mut state) as usize) % i;
        image.swap(i, j);
    }
    image
}

const SMALL: &[&str] = &[
    "Cyc(5)",
    "Cyc(6)",
    "S3",
    "Cyc(8)",
    "Ab(4,2)",
    "Ab(2,2,2)",
    "Dih(8)",
    "Dic(Cyc(4),2)",
    "Ab(3,3)",
    "Cyc(9)",
    "Dih(10)",
    "Cyc(10)",
];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn affine_iff_normalizes_left_regular(
        idx in 0..SMALL.len(),
        seed in any::<u64>(),
        make_affine in any::<bool>(),
    ) {
        let g = eval(SMALL[idx]);
        let n = g.order();
        let map = if make_affine {
            let auts = automorphism_group(&g).unwrap();
            let mut state = seed | 1;
            let a = &auts[(xorshift(&mut state) as usize) % auts.len()];
            let t = (xorshift(&mut state) as usize) % n;
            let image: Vec<usize> = (0..n).map(|x| g.mul(t, a.apply(x))).collect();
            VertexMap::new(&g, image).unwrap()
        } else {
            VertexMap::new(&g, random_permutation_fixing_identity(n, seed)).unwrap()
        };
        prop_assert_eq!(is_affine(&map), normalizes_left_regular(&map));
        if make_affine {
            prop_assert!(is_affine(&map));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn preserving_solutions_embed_in_permuting(
        idx in 0..SMALL.len(),
        seed in any::<u64>(),
    ) {
        let g = eval(SMALL[idx]);
        let set = ConnectionSet::new(&g, &random_generating_set(&g, seed)).unwrap();
        let graph = CayleyGraph::build(&set).unwrap();
        let pres = stabilizer(&graph, &StabilizerOptions::preserving());
        let perm = stabilizer(&graph, &StabilizerOptions::permuting());
        prop_assert!(pres.complete && perm.complete);
        prop_assert!(pres.maps.len() <= perm.maps.len());
        for map in &pres.maps {
            prop_assert_eq!(map.apply(0), 0);
            prop_assert!(perm.maps.contains(map));
            // A preserving map induces the identity colour permutation.
            let pi = colour_permutation(&graph, map).unwrap();
            let identity: Vec<usize> = (0..graph.classes().len()).collect();
            prop_assert_eq!(&pi.class_image, &identity);
        }
        // Stabilizers are closed under composition, so sizes divide.
        prop_assert_eq!(perm.maps.len() % pres.maps.len(), 0);
        for map in &perm.maps {
            let pi = colour_permutation(&graph, map).unwrap();
            // The induced colour permutation is consistent with inverses
            // and element orders.
            let mut seen = vec![false; graph.classes().len()];
            for &c in &pi.class_image {
                prop_assert!(!seen[c]);
                seen[c] = true;
            }
            for &(s, t) in &pi.elem_image {
                prop_assert_eq!(g.elem_order(s), g.elem_order(t));
                let inv_image = pi
                    .elem_image
                    .iter()
                    .find(|&&(x, _)| x == g.inv(s))
                    .map(|&(_, y)| y)
                    .unwrap();
                prop_assert_eq!(inv_image, g.inv(t));
            }
        }
    }
}

#[test]
fn reduction_flags_do_not_change_verdicts() {
    let combos = [
        ReductionFlags { prime_power_only: true, aut_orbit_dedup: true },
        ReductionFlags { prime_power_only: true, aut_orbit_dedup: false },
        ReductionFlags { prime_power_only: false, aut_orbit_dedup: true },
        ReductionFlags { prime_power_only: false, aut_orbit_dedup: false },
    ];
    for entry in families::catalogue_up_to(12) {
        let g = evaluate(&entry.recipe).unwrap();
        for property in [Property::Cca, Property::StronglyCca] {
            let verdicts: Vec<bool> = combos
                .iter()
                .map(|&flags| decide(&g, property, flags).unwrap().0.holds)
                .collect();
            assert!(
                verdicts.iter().all(|&v| v == verdicts[0]),
                "{} {:?}: verdict depends on reductions: {:?}",
                entry.name,
                property,
                verdicts
            );
        }
    }
}

#[test]
fn dihedral_involution_counts() {
    for m in 3..=15usize {
        let g = eval(&format!("Dih({})", 2 * m));
        let count = (1..g.order()).filter(|&x| g.elem_order(x) == 2).count();
        let expected = if m % 2 == 0 { m + 1 } else { m };
        assert_eq!(count, expected, "Dih({})", 2 * m);
    }
}

#[test]
fn dicyclic_groups_have_a_unique_involution() {
    for k in 2..=7usize {
        let g = eval(&format!("Dic(Cyc({}),{})", 2 * k, k));
        assert_eq!(g.order(), 4 * k);
        let count = (1..g.order()).filter(|&x| g.elem_order(x) == 2).count();
        assert_eq!(count, 1, "Dic(Cyc({}),{})", 2 * k, k);
    }
}

#[test]
fn generalized_dihedral_structure() {
    let g = eval("GenDih(Ab(3,3))");
    assert_eq!(g.order(), 18);
    // Every element outside the abelian half is an involution.
    let count = (1..g.order()).filter(|&x| g.elem_order(x) == 2).count();
    assert_eq!(count, 9);
    assert!(is_isomorphic(&eval("GenDih(Cyc(6))"), &eval("Dih(12)")));
}

#[test]
fn wreath_orders() {
    assert_eq!(eval("Wr(3,2)").order(), 18);
    assert_eq!(eval("Wr(3,3)").order(), 81);
    assert_eq!(eval("Wr(5,2)").order(), 50);
    // A nontrivial wrap-around automorphism multiplies the top order.
    let z4 = eval("Cyc(4)");
    let inversion = VertexMap::new(&z4, (0..4).map(|x| z4.inv(x)).collect()).unwrap();
    let g = families::semi_wreathed(&z4, &inversion, 2).unwrap();
    assert_eq!(g.order(), 4 * 4 * 2 * 2);
}

#[test]
fn recipe_text_roundtrip() {
    for entry in families::catalogue_up_to(31) {
        let text = entry.recipe.to_string();
        let back: GroupRecipe = text.parse().unwrap_or_else(|e| {
            panic!("recipe text {text} must reparse: {e}");
        });
        assert_eq!(back, entry.recipe, "{text}");
    }
}

#[test]
fn catalogue_counts_and_distinctness() {
    // Number of groups of each order 1..=31.
    let expected = [
        1, 1, 1, 2, 1, 2, 1, 5, 2, 2, 1, 5, 1, 2, 1, 14, 1, 5, 1, 5, 2, 2, 1, 15, 2, 2, 5, 4,
        1, 4, 1,
    ];
    for (i, &want) in expected.iter().enumerate() {
        let order = i + 1;
        let entries = families::catalogue(order);
        assert_eq!(entries.len(), want, "order {order}");
        let groups: Vec<Group> = entries.iter().map(|e| evaluate(&e.recipe).unwrap()).collect();
        for g in &groups {
            assert_eq!(g.order(), order);
        }
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                assert!(
                    !is_isomorphic(&groups[a], &groups[b]),
                    "order {order}: {} ≅ {}",
                    entries[a].name,
                    entries[b].name
                );
            }
        }
    }
}

#[test]
fn graph_shape_invariants() {
    for entry in families::catalogue_up_to(10) {
        if entry.gap.0 < 2 {
            continue;
        }
        let g = evaluate(&entry.recipe).unwrap();
        for seed in [3u64, 17, 40] {
            let members = random_generating_set(&g, seed);
            let set = ConnectionSet::new(&g, &members).unwrap();
            let graph = CayleyGraph::build(&set).unwrap();
            assert_eq!(graph.order(), g.order());
            // Classes partition the set.
            let mut from_classes: Vec<usize> = graph
                .classes()
                .iter()
                .flat_map(|c| if c.involution { vec![c.rep] } else { vec![c.rep, c.inv] })
                .collect();
            from_classes.sort_unstable();
            assert_eq!(from_classes, set.members());
            // Degree equals |S| everywhere.
            for v in 0..graph.order() {
                assert_eq!(graph.neighbours(v).count(), set.len());
            }
        }
    }
}
