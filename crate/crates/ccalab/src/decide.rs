//! Group-level decisions: a group is CCA when every connected Cayley graph
//! on it is CCA, and strongly CCA when every connected Cayley graph is
//! strongly CCA. Deciding either property means quantifying over
//! inverse-closed generating sets, with two sound reductions:
//!
//! * automorphism-orbit deduplication: `Cay(G; S)` and `Cay(G; α(S))` are
//!   colour-isomorphic for `α ∈ Aut(G)`, so one set per orbit suffices;
//! * colour classes whose element order is not a prime power can be
//!   skipped: a non-affine colour-preserving automorphism survives
//!   restriction to a generating subset of prime-power-order classes, so
//!   the group verdict is unchanged (only witness sets are constrained).
//!
//! Both reductions are optional so they can be cross-checked against the
//! unreduced enumeration.

use crate::cayley::{CayleyError, CayleyGraph, ConnectionSet};
use crate::engine::{self, Mode};
use crate::group::{
    automorphism_group_with_bound, Group, GroupError, VertexMap,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Certified group-level decisions are limited to this order: the full
/// classification below it has been cross-checked in the test suite.
pub const DECIDE_ORDER_BOUND: usize = 31;

#[derive(Debug, Error)]
pub enum DecideError {
    #[error("group-level decision requires order ≤ {bound}, got {order}")]
    OrderBound { order: usize, bound: usize },
    #[error(transparent)]
    Cayley(#[from] CayleyError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Cca,
    StronglyCca,
}

impl Property {
    pub fn mode(self) -> Mode {
        match self {
            Property::Cca => Mode::Preserving,
            Property::StronglyCca => Mode::Permuting,
        }
    }
}

/// Which reductions the enumeration applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ReductionFlags {
    pub prime_power_only: bool,
    pub aut_orbit_dedup: bool,
}

impl Default for ReductionFlags {
    fn default() -> Self {
        ReductionFlags { prime_power_only: true, aut_orbit_dedup: true }
    }
}

/// A failing connection set together with the first non-affine map.
#[derive(Debug, Clone)]
pub struct GroupWitness {
    pub set: Vec<usize>,
    pub map: VertexMap,
    pub mode: Mode,
}

#[derive(Debug, Clone)]
pub struct CcaVerdict {
    pub property: Property,
    pub holds: bool,
    pub witness: Option<GroupWitness>,
    /// Connection sets whose graphs were actually searched.
    pub sets_examined: usize,
    pub reductions: ReductionFlags,
}

/// Per-decision search statistics, used to assert cap soundness.
#[derive(Debug, Clone, Default)]
pub struct DecideStats {
    pub stabilizers_checked: usize,
    pub max_stabilizer_size: usize,
    pub truncated_searches: usize,
    /// Fully enumerated colour-preserving stabilizers whose size is not a
    /// power of two. The identity-vertex stabilizer is always a 2-group,
    /// so any nonzero count is an engine bug.
    pub non_power_of_two_preserving: usize,
}

/// Enumerates inverse-closed generating sets as unions of colour classes.
///
/// Sets come out ordered by (element count, lexicographic member list).
/// With `aut_orbit_dedup`, only the first set of each `Aut(G)`-orbit is
/// kept (the representative with minimal (size, member list), since
/// automorphisms preserve set size). With `prime_power_only`, classes
/// whose element order is not a prime power are excluded from the union
/// universe entirely.
pub fn enumerate_connection_sets(
    group: &Group,
    flags: ReductionFlags,
) -> Result<Vec<Vec<usize>>, DecideError> {
    let n = group.order();
    // Colour classes {s, s⁻¹} over the whole group.
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for s in 1..n {
        let si = group.inv(s);
        if s <= si && (!flags.prime_power_only || is_prime_power(group.elem_order(s))) {
            classes.push(if s == si { vec![s] } else { vec![s, si] });
        }
    }
    let k = classes.len();
    assert!(k < 64, "class count fits in a u64 mask");
    // Class permutations induced by each automorphism, for orbit marking.
    let auts = if flags.aut_orbit_dedup {
        automorphism_group_with_bound(group, crate::group::AUT_ORDER_BOUND)?
    } else {
        Vec::new()
    };
    let class_index_of = {
        let mut m = vec![usize::MAX; n];
        for (i, c) in classes.iter().enumerate() {
            for &s in c {
                m[s] = i;
            }
        }
        m
    };
    let class_perms: Vec<Vec<usize>> = auts
        .iter()
        .map(|a| {
            classes
                .iter()
                .map(|c| {
                    let img = a.apply(c[0]);
                    class_index_of[img]
                })
                .collect()
        })
        .collect();
    // All class-union subsets as bitmasks, ordered by (size, lex members).
    let mut masks: Vec<(usize, Vec<usize>, u64)> = Vec::new();
    for mask in 1u64..(1 << k) {
        let mut members = Vec::new();
        for (i, c) in classes.iter().enumerate() {
            if mask >> i & 1 == 1 {
                members.extend_from_slice(c);
            }
        }
        members.sort_unstable();
        masks.push((members.len(), members, mask));
    }
    masks.sort();
    let mut seen = vec![false; 1 << k];
    let mut out = Vec::new();
    for (_, members, mask) in masks {
        if seen[mask as usize] {
            continue;
        }
        // Mark the whole orbit; later subsets in it are skipped. A class
        // permutation can return a mask with classes outside the
        // prime-power universe only if it started there, so orbit images
        // stay in range.
        if flags.aut_orbit_dedup {
            for perm in &class_perms {
                let mut img = 0u64;
                for i in 0..k {
                    if mask >> i & 1 == 1 {
                        img |= 1 << perm[i];
                    }
                }
                seen[img as usize] = true;
            }
        } else {
            seen[mask as usize] = true;
        }
        if crate::group::is_generating(group, &members) {
            out.push(members);
        }
    }
    Ok(out)
}

fn is_prime_power(mut n: usize) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            return n == 1;
        }
        p += 1;
    }
    true
}

/// Decides whether every connected Cayley graph on `G` has only affine
/// colour-preserving automorphisms.
pub fn group_is_cca(group: &Group) -> Result<CcaVerdict, DecideError> {
    decide(group, Property::Cca, ReductionFlags::default()).map(|(v, _)| v)
}

/// Decides whether every connected Cayley graph on `G` has only affine
/// colour-permuting automorphisms.
pub fn group_is_strongly_cca(group: &Group) -> Result<CcaVerdict, DecideError> {
    decide(group, Property::StronglyCca, ReductionFlags::default()).map(|(v, _)| v)
}

/// Full decision entry point with explicit reductions and statistics.
pub fn decide(
    group: &Group,
    property: Property,
    reductions: ReductionFlags,
) -> Result<(CcaVerdict, DecideStats), DecideError> {
    let n = group.order();
    if n > DECIDE_ORDER_BOUND {
        return Err(DecideError::OrderBound { order: n, bound: DECIDE_ORDER_BOUND });
    }
    let sets = enumerate_connection_sets(group, reductions)?;
    let mode = property.mode();
    let mut stats = DecideStats::default();
    let mut witness = None;
    let mut examined = 0;
    // Sets are checked sequentially in enumeration order so the reported
    // witness is the first failing set.
    for set in &sets {
        let cs = ConnectionSet::new(group, set)?;
        let graph = CayleyGraph::build(&cs)?;
        let verdict = engine::graph_verdict(&graph, mode, None);
        examined += 1;
        stats.stabilizers_checked += 1;
        stats.max_stabilizer_size = stats.max_stabilizer_size.max(verdict.stabilizer_size);
        if verdict.capped_rerun {
            stats.truncated_searches += 1;
        }
        if mode == Mode::Preserving
            && verdict.complete
            && !verdict.stabilizer_size.is_power_of_two()
        {
            stats.non_power_of_two_preserving += 1;
        }
        if let Some(map) = verdict.witness {
            witness = Some(GroupWitness { set: set.clone(), map, mode });
            break;
        }
    }
    Ok((
        CcaVerdict {
            property,
            holds: witness.is_none(),
            witness,
            sets_examined: examined,
            reductions,
        },
        stats,
    ))
}

/// Closed form for abelian groups: writing the Sylow 2-subgroup as a
/// product of cyclic 2-power factors, the group fails to be CCA exactly
/// when that product contains `Z4 × Z2`, or a factor of order ≥ 8 along
/// with two factors of order exactly 2. For abelian groups CCA and
/// strongly CCA coincide.
pub fn abelian_is_cca(group: &Group) -> Result<bool, GroupError> {
    if !group.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let divisors = crate::group::abelian_elementary_divisors(group)?;
    let two_part: Vec<usize> = divisors.iter().copied().filter(|d| d % 2 == 0).collect();
    let has4 = two_part.contains(&4);
    let twos = two_part.iter().filter(|&&d| d == 2).count();
    let has_big = two_part.iter().any(|&d| d >= 8);
    let not_cca = (has4 && twos >= 1) || (has_big && twos >= 2);
    Ok(!not_cca)
}

/// Closed form for generalized dihedral groups over abelian `A`: the group
/// is strongly CCA iff `A` has no `Z2` direct summand, or `A` is an
/// elementary abelian 2-group (or trivial; those give abelian groups).
pub fn gen_dihedral_strongly_cca(base: &Group) -> Result<bool, GroupError> {
    if !base.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let divisors = crate::group::abelian_elementary_divisors(base)?;
    let has_z2_summand = divisors.contains(&2);
    let elementary_2 = divisors.iter().all(|&d| d == 2);
    Ok(!has_z2_summand || elementary_2)
}

/// Order-level test: some group of order `n` fails to be CCA iff
/// `n ≥ 8` and `n` is divisible by 4, by 21, or by `p^q·q` for primes
/// `p, q`.
pub fn order_admits_non_cca(n: usize) -> bool {
    if n < 8 {
        return false;
    }
    if n % 4 == 0 || n % 21 == 0 {
        return true;
    }
    let primes = small_primes(n);
    for &p in &primes {
        for &q in &primes {
            if let Some(pq) = p.checked_pow(q as u32) {
                if let Some(m) = pq.checked_mul(q) {
                    if m <= n && n % m == 0 {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn small_primes(bound: usize) -> Vec<usize> {
    (2..=bound).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// One census row for a catalogued group.
#[derive(Debug, Clone, Serialize)]
pub struct CensusRow {
    pub order: usize,
    pub gap_index: usize,
    pub name: String,
    pub recipe: String,
    pub tags: Vec<String>,
    pub cca: bool,
    pub strongly_cca: bool,
    pub cca_sets_examined: usize,
    pub strong_sets_examined: usize,
}

/// Aggregate statistics across a census run.
#[derive(Debug, Clone, Default)]
pub struct CensusStats {
    pub stabilizers_checked: usize,
    pub max_stabilizer_size: usize,
    pub truncated_searches: usize,
    pub non_power_of_two_preserving: usize,
}

/// Decides both properties for every catalogued group of order
/// `1..=max_order` (at most 31). Groups are processed in parallel; the
/// per-group enumeration stays sequential so witnesses and counts are
/// deterministic.
pub fn census(max_order: usize) -> Result<Vec<CensusRow>, DecideError> {
    census_with_stats(max_order, ReductionFlags::default()).map(|(rows, _)| rows)
}

pub fn census_with_stats(
    max_order: usize,
    reductions: ReductionFlags,
) -> Result<(Vec<CensusRow>, CensusStats), DecideError> {
    let entries = crate::families::catalogue_up_to(max_order);
    let results: Vec<Result<(CensusRow, DecideStats, DecideStats), DecideError>> = entries
        .par_iter()
        .map(|entry| {
            let group = crate::families::evaluate(&entry.recipe)
                .unwrap_or_else(|e| panic!("catalogue recipe {} must evaluate: {e}", entry.name));
            let (cca, s1) = decide(&group, Property::Cca, reductions)?;
            let (strong, s2) = decide(&group, Property::StronglyCca, reductions)?;
            let row = CensusRow {
                order: entry.gap.0,
                gap_index: entry.gap.1,
                name: entry.name.to_string(),
                recipe: entry.recipe.to_string(),
                tags: entry.tags.iter().map(|s| s.to_string()).collect(),
                cca: cca.holds,
                strongly_cca: strong.holds,
                cca_sets_examined: cca.sets_examined,
                strong_sets_examined: strong.sets_examined,
            };
            Ok((row, s1, s2))
        })
        .collect();
    let mut rows = Vec::new();
    let mut stats = CensusStats::default();
    for r in results {
        let (row, s1, s2) = r?;
        for s in [s1, s2] {
            stats.stabilizers_checked += s.stabilizers_checked;
            stats.max_stabilizer_size = stats.max_stabilizer_size.max(s.max_stabilizer_size);
            stats.truncated_searches += s.truncated_searches;
            stats.non_power_of_two_preserving += s.non_power_of_two_preserving;
        }
        rows.push(row);
    }
    rows.sort_by_key(|r| (r.order, r.gap_index));
    Ok((rows, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::evaluate;

    fn g(text: &str) -> Group {
        evaluate(&text.parse().unwrap()).unwrap()
    }

    #[test]
    fn connection_set_enumeration_small() {
        // Z4: classes {1,3} and {2}; generating unions are {1,3} and
        // {1,2,3} ({2} alone generates only the subgroup of order 2).
        let z4 = g("Cyc(4)");
        let sets = enumerate_connection_sets(
            &z4,
            ReductionFlags { prime_power_only: false, aut_orbit_dedup: false },
        )
        .unwrap();
        assert_eq!(sets, vec![vec![1, 3], vec![1, 2, 3]]);
        // Orbit dedup changes nothing here: Aut(Z4) fixes both classes.
        let deduped = enumerate_connection_sets(&z4, ReductionFlags::default()).unwrap();
        assert_eq!(deduped, sets);
    }

    #[test]
    fn orbit_dedup_on_klein_group() {
        // Z2²: Aut permutes the three involution classes transitively, so
        // the orbits of generating sets are represented by {1,2} (any two
        // involutions) and {1,2,3}.
        let v4 = g("Ab(2,2)");
        let deduped = enumerate_connection_sets(&v4, ReductionFlags::default()).unwrap();
        assert_eq!(deduped, vec![vec![1, 2], vec![1, 2, 3]]);
        let all = enumerate_connection_sets(
            &v4,
            ReductionFlags { prime_power_only: false, aut_orbit_dedup: false },
        )
        .unwrap();
        assert_eq!(all.len(), 4); // three 2-subsets and the full set
    }

    #[test]
    fn prime_power_filter_drops_order6_classes() {
        let z6 = g("Cyc(6)");
        let all = enumerate_connection_sets(
            &z6,
            ReductionFlags { prime_power_only: false, aut_orbit_dedup: false },
        )
        .unwrap();
        // {1,5} has order-6 elements; with the filter, only unions of the
        // order-2 and order-3 classes remain and must generate.
        let filtered = enumerate_connection_sets(
            &z6,
            ReductionFlags { prime_power_only: true, aut_orbit_dedup: false },
        )
        .unwrap();
        assert!(all.contains(&vec![1, 5]));
        assert!(!filtered.contains(&vec![1, 5]));
        assert_eq!(filtered, vec![vec![2, 3, 4]]);
    }

    #[test]
    fn cyclic_groups_are_cca() {
        for n in [1usize, 2, 3, 4, 5, 6, 7, 8, 9, 12] {
            let z = g(&format!("Cyc({n})"));
            assert!(group_is_cca(&z).unwrap().holds, "Z{n}");
            assert!(group_is_strongly_cca(&z).unwrap().holds, "Z{n} strong");
        }
    }

    #[test]
    fn z4xz2_fails_with_witness() {
        let v = group_is_cca(&g("Ab(4,2)")).unwrap();
        assert!(!v.holds);
        let w = v.witness.unwrap();
        assert!(!crate::group::is_affine(&w.map));
        // The witness set is the first failing set in enumeration order.
        assert_eq!(w.set, vec![2, 3, 6, 7]);
        assert!(!abelian_is_cca(&g("Ab(4,2)")).unwrap());
    }

    #[test]
    fn abelian_closed_form_matches_search() {
        for text in ["Cyc(8)", "Ab(4,4)", "Ab(8,2)", "Ab(4,2)", "Ab(2,2,2)", "Ab(12,2)"] {
            let gr = g(text);
            let predicted = abelian_is_cca(&gr).unwrap();
            let searched = group_is_cca(&gr).unwrap().holds;
            assert_eq!(predicted, searched, "{text}");
        }
    }

    #[test]
    fn order_test_matches_known_table() {
        let expect: Vec<usize> = vec![8, 12, 16, 18, 20, 21, 24, 28];
        let got: Vec<usize> = (1..=31).filter(|&n| order_admits_non_cca(n)).collect();
        assert_eq!(got, expect);
        assert!(!order_admits_non_cca(30));
        assert!(order_admits_non_cca(54)); // 27·2 = 3³·... p=3,q=2: 9·2=18 | 54
        assert!(order_admits_non_cca(42)); // 21 | 42
    }

    #[test]
    fn reduction_independence_small_orders() {
        // The reductions must not change any verdict.
        for entry in crate::families::catalogue_up_to(12) {
            let group = evaluate(&entry.recipe).unwrap();
            for property in [Property::Cca, Property::StronglyCca] {
                let fast = decide(&group, property, ReductionFlags::default()).unwrap().0;
                let slow = decide(
                    &group,
                    property,
                    ReductionFlags { prime_power_only: false, aut_orbit_dedup: false },
                )
                .unwrap()
                .0;
                assert_eq!(fast.holds, slow.holds, "{} {:?}", entry.name, property);
            }
        }
    }

    #[test]
    fn gen_dihedral_closed_form_examples() {
        // Base Z4: no Z2 summand, so D8 is strongly CCA.
        assert!(gen_dihedral_strongly_cca(&g("Cyc(4)")).unwrap());
        // Base Z6 ≅ Z3×Z2 has a Z2 summand: D12 is not strongly CCA.
        assert!(!gen_dihedral_strongly_cca(&g("Cyc(6)")).unwrap());
        // Elementary abelian bases give abelian groups, which pass.
        assert!(gen_dihedral_strongly_cca(&g("Cyc(2)")).unwrap());
        assert!(gen_dihedral_strongly_cca(&g("Ab(2,2)")).unwrap());
        // Base Z3²: odd, no Z2 summand.
        assert!(gen_dihedral_strongly_cca(&g("Ab(3,3)")).unwrap());
        // Base Z6×Z2: Z2 summand and not elementary: fails.
        assert!(!gen_dihedral_strongly_cca(&g("Ab(6,2)")).unwrap());
    }
}
