//! Constructive non-affine maps for the groups that fail a verdict.
//!
//! Each builder checks its hypotheses up front (returning a named error for
//! the one that fails), constructs the map explicitly, and re-verifies the
//! result against the engine before handing it out: the returned map is a
//! colour-preserving (or colour-permuting) automorphism of the stated
//! Cayley graph, fixes the identity vertex, and is not affine.

use serde::Serialize;

use crate::cayley::{CayleyError, CayleyGraph, ConnectionSet};
use crate::engine::{check_colour_preserving, colour_permutation, Mode};
use crate::families::{self, FamilyError, GroupRecipe};
use crate::group::{
    centre, closure, direct_product, is_affine, is_automorphism, subgroup_as_group, Group,
    GroupError, VertexMap,
};

#[derive(Debug, thiserror::Error)]
pub enum WitnessError {
    #[error("τ (element {tau}) must have order 2, found order {order}")]
    TauNotInvolution { tau: usize, order: usize },
    #[error("T must lie inside S: element {element} does not")]
    TNotWithinS { element: usize },
    #[error("every t ∈ T must square to τ: element {element} squares to {square}")]
    SquareNotTau { element: usize, square: usize },
    #[error("τ must centralize or invert every element of S: fails on {element}")]
    NotCentralizedOrInverted { element: usize },
    #[error("⟨(S∖T) ∪ τ⟩ is the whole group, so the coset to reflect is empty")]
    SubgroupIsWholeGroup,
    #[error("⟨(S∖T) ∪ τ⟩ has index 2 with τ central, which makes the reflection affine")]
    CentralIndexTwo,
    #[error("wreath parameters need a base of order ≥ 3 and at least 2 coordinates")]
    WreathParameters,
    #[error("negating a coordinate is the identity on an elementary abelian 2-group base")]
    NegationTrivial,
    #[error("coordinate action must be an automorphism of the base")]
    ActionNotAutomorphism,
    #[error("the second factor's set must generate it")]
    SecondFactorNotGenerating,
    #[error("{part} member list is not a subgroup")]
    NotASubgroup { part: &'static str },
    #[error("the two subgroups do not give an exact factorization with the first one normal")]
    NotSemidirect,
    #[error("the piece's set must lie inside the normal subgroup, without the identity")]
    SetOutsideNormal,
    #[error("the piece's set is not invariant under conjugation by the acting subgroup")]
    NotConjugationInvariant,
    #[error("the picked map has length {got}, need one image per normal-subgroup member ({want})")]
    PieceLength { got: usize, want: usize },
    #[error("the picked map is not colour-preserving on the normal subgroup's graph")]
    PieceNotColourPreserving,
    #[error("the picked map is affine and commutes with conjugation, so its extension is affine")]
    UntwistedPiece,
    #[error("the swap construction needs a nontrivial automorphism")]
    TrivialAction,
    #[error("the swap construction needs an involutory automorphism")]
    ActionNotInvolutory,
    #[error("σ must fix or invert every element of T: fails on {element}")]
    NotInvertedOrFixed { element: usize },
    #[error("T must generate the base group")]
    TNotGenerating,
    #[error(transparent)]
    Set(#[from] CayleyError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// A machine-verified non-affine map on a named Cayley graph.
#[derive(Debug, Clone)]
pub struct WitnessPackage {
    pub group: Group,
    pub set: ConnectionSet,
    pub map: VertexMap,
    pub mode: Mode,
    /// The construction that produced the map.
    pub source: &'static str,
    /// Recipe text for the group, when it came from one.
    pub recipe: Option<String>,
}

impl WitnessPackage {
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Doc<'a> {
            order: usize,
            #[serde(skip_serializing_if = "Option::is_none")]
            recipe: Option<&'a str>,
            set: &'a [usize],
            map: &'a VertexMap,
            mode: Mode,
            source: &'a str,
        }
        serde_json::to_string_pretty(&Doc {
            order: self.group.order(),
            recipe: self.recipe.as_deref(),
            set: self.set.members(),
            map: &self.map,
            mode: self.mode,
            source: self.source,
        })
        .expect("witness serialization cannot fail")
    }
}

/// Final gate for every constructor, and the packaging entry point for maps
/// found elsewhere (e.g. by the search engine): normalize to fix the
/// identity, then require the mode's edge condition and non-affineness.
/// Constructor hypotheses guarantee both, so failures are bugs, not inputs.
pub fn verified(
    set: ConnectionSet,
    map: VertexMap,
    mode: Mode,
    source: &'static str,
    recipe: Option<String>,
) -> Result<WitnessPackage, WitnessError> {
    let graph = CayleyGraph::build(&set)?;
    let map = map.normalized_to_fix_identity();
    let valid = match mode {
        Mode::Preserving => check_colour_preserving(&graph, &map),
        Mode::Permuting => colour_permutation(&graph, &map).is_some(),
    };
    assert!(valid, "witness construction produced a map outside its mode");
    assert!(!is_affine(&map), "witness construction produced an affine map");
    let group = set.group().clone();
    Ok(WitnessPackage { group, set, map, mode, source, recipe })
}

/// Reflects one coset by an involution: given an inverse-closed generating
/// set `S`, a subset `T` of it (inverse-closed automatically), and an
/// involution `τ` that centralizes or inverts every element of `S` and is
/// the square of every element of `T`, the map `g ↦ gτ` on the coset `xH`
/// (identity elsewhere) is colour-preserving but not affine, where
/// `H = ⟨(S∖T) ∪ {τ}⟩` and `x` is the least element of `T∖H`.
pub fn witness_structure(
    g: &Group,
    s: &[usize],
    t: &[usize],
    tau: usize,
) -> Result<WitnessPackage, WitnessError> {
    let set = ConnectionSet::new(g, s)?;
    let order = g.elem_order(tau);
    if order != 2 {
        return Err(WitnessError::TauNotInvolution { tau, order });
    }
    let mut t_closed: Vec<usize> = t.iter().flat_map(|&x| [x, g.inv(x)]).collect();
    t_closed.sort_unstable();
    t_closed.dedup();
    for &x in &t_closed {
        if !set.contains(x) {
            return Err(WitnessError::TNotWithinS { element: x });
        }
        let square = g.mul(x, x);
        if square != tau {
            return Err(WitnessError::SquareNotTau { element: x, square });
        }
    }
    for &x in set.members() {
        let c = g.mul(g.mul(g.inv(tau), x), tau);
        if c != x && c != g.inv(x) {
            return Err(WitnessError::NotCentralizedOrInverted { element: x });
        }
    }
    let mut rest: Vec<usize> =
        set.members().iter().copied().filter(|m| !t_closed.contains(m)).collect();
    rest.push(tau);
    let h = closure(g, &rest);
    if h.members().len() == g.order() {
        return Err(WitnessError::SubgroupIsWholeGroup);
    }
    if g.order() == 2 * h.members().len() && centre(g).contains(tau) {
        return Err(WitnessError::CentralIndexTwo);
    }
    // T ⊄ H, else H would contain all of S and be the whole group.
    let x = *t_closed.iter().find(|&&x| !h.contains(x)).expect("T cannot lie inside H");
    let mut in_coset = vec![false; g.order()];
    for &m in h.members() {
        in_coset[g.mul(x, m)] = true;
    }
    let image: Vec<usize> =
        (0..g.order()).map(|v| if in_coset[v] { g.mul(v, tau) } else { v }).collect();
    let map = VertexMap::new(g, image)?;
    verified(set, map, Mode::Preserving, "structure", None)
}

/// The nonabelian group of order 21 with its piecewise-defined map: every
/// element has a unique normal form `a^i b^j a^k` with `i, j, k ∈ {0, ±1}`
/// and `k = 0` whenever `j = 0`; the map fixes the `i = 0` slice up to
/// inverting the tail and twists the other two slices.
pub fn witness_order21() -> WitnessPackage {
    let recipe: GroupRecipe = "G21".parse().expect("fixed recipe");
    let g = families::evaluate(&recipe).expect("order 21 construction");
    let a = g.eval_word("a").expect("generator a");
    let x = g.eval_word("x").expect("generator x");
    let b = g.mul(a, x);
    let word = |i: i64, j: i64, k: i64| g.mul(g.mul(g.power(a, i), g.power(b, j)), g.power(a, k));
    let mut image = vec![usize::MAX; 21];
    let mut seen = vec![false; 21];
    for i in [0i64, 1, -1] {
        for j in [0i64, 1, -1] {
            for k in [0i64, 1, -1] {
                if j == 0 && k != 0 {
                    continue;
                }
                let v = word(i, j, k);
                assert!(!seen[v], "normal form must be unique");
                seen[v] = true;
                image[v] = match i {
                    0 => word(0, j, -k),
                    1 => word(1, -j, k),
                    _ => word(-1, -j, -k),
                };
            }
        }
    }
    assert!(seen.iter().all(|&s| s), "normal form must cover the group");
    let map = VertexMap::new(&g, image).expect("piecewise map is a bijection");
    let set = ConnectionSet::new(&g, &[a, g.inv(a), b, g.inv(b)]).expect("generating pair");
    verified(set, map, Mode::Preserving, "order21", Some(recipe.to_string()))
        .expect("fixed construction")
}

/// Picks the built-in construction matching a recipe's shape, or `None`
/// when no construction recognizes it (callers can still search for a
/// witness with the engine).
pub fn for_recipe(recipe: &GroupRecipe) -> Option<Result<WitnessPackage, WitnessError>> {
    match recipe {
        GroupRecipe::Wr(m, n) => Some(witness_wreath(*m, *n)),
        GroupRecipe::Named(name) if name == "G21" => Some(Ok(witness_order21())),
        GroupRecipe::Named(name) if name == "Z3wrZ3" => Some(witness_wreath(3, 3)),
        GroupRecipe::Gap(21, 1) => Some(Ok(witness_order21())),
        _ => None,
    }
}

/// Negates the first coordinate of the base power in a wreath product
/// `Zm ≀ Zn`, with the connection set {base unit±1, shift±1}.
pub fn witness_wreath(m: usize, n: usize) -> Result<WitnessPackage, WitnessError> {
    if m < 3 || n < 2 {
        return Err(WitnessError::WreathParameters);
    }
    let recipe = GroupRecipe::Wr(m, n);
    let g = families::evaluate(&recipe)?;
    let base = families::evaluate(&GroupRecipe::Cyc(m))?;
    negated_first_coordinate(&g, &base, n, "wreath", Some(recipe.to_string()))
}

/// Negates the first coordinate of the base power in a semi-wreathed
/// product: the shift generator cycles the coordinates and applies `alpha`
/// to the one that wraps around.
pub fn witness_semiwreath(
    base: &Group,
    alpha: &VertexMap,
    n: usize,
) -> Result<WitnessPackage, WitnessError> {
    if n < 2 {
        return Err(WitnessError::WreathParameters);
    }
    if !std::sync::Arc::ptr_eq(alpha.group(), base) || !is_automorphism(alpha) {
        return Err(WitnessError::ActionNotAutomorphism);
    }
    let g = families::semi_wreathed(base, alpha, n)?;
    negated_first_coordinate(&g, base, n, "semiwreath", None)
}

fn negated_first_coordinate(
    g: &Group,
    base: &Group,
    n: usize,
    source: &'static str,
    recipe: Option<String>,
) -> Result<WitnessPackage, WitnessError> {
    let m = base.order();
    if (0..m).all(|d| base.inv(d) == d) {
        return Err(WitnessError::NegationTrivial);
    }
    let base_size = m.pow(n as u32);
    let top = g.order() / base_size;
    // Elements are w·top + z with w the base-m digits of the coordinates,
    // first coordinate most significant.
    let high = base_size / m;
    let image: Vec<usize> = (0..g.order())
        .map(|v| {
            let (w, z) = (v / top, v % top);
            let d0 = w / high;
            (base.inv(d0) * high + w % high) * top + z
        })
        .collect();
    let map = VertexMap::new(g, image)?;
    let members: Vec<usize> = g.generators().iter().flat_map(|&s| [s, g.inv(s)]).collect();
    let set = ConnectionSet::new(g, &members)?;
    verified(set, map, Mode::Preserving, source, recipe)
}

/// Extends a witness on `G1` to `G1 × G2` by acting as the identity on the
/// second factor, over the set `S1×{e} ∪ {e}×S2`.
pub fn witness_product(
    w: &WitnessPackage,
    g2: &Group,
    s2: &[usize],
) -> Result<WitnessPackage, WitnessError> {
    if closure(g2, s2).members().len() != g2.order() {
        return Err(WitnessError::SecondFactorNotGenerating);
    }
    let product = direct_product(&w.group, g2)?;
    let nb = g2.order();
    let image: Vec<usize> =
        (0..product.order()).map(|v| w.map.apply(v / nb) * nb + v % nb).collect();
    let map = VertexMap::new(&product, image)?;
    let mut members: Vec<usize> = w.set.members().iter().map(|&s| s * nb).collect();
    members.extend(s2.iter().copied());
    let set = ConnectionSet::new(&product, &members)?;
    verified(set, map, w.mode, "product", None)
}

/// Extends a map `φ0` on a normal subgroup `H` of an internal semidirect
/// product `G = H⋊K` to `φ(hk) = φ0(h)k`, over the set `S0 ∪ (K∖{e})`.
/// `phi0[i]` is the image (as a `G` index) of `h_members[i]`. The extension
/// is non-affine when `φ0` is, or when `φ0` fixes `e` but fails to commute
/// with conjugation by `K` somewhere on `S0`.
pub fn witness_semidirect(
    g: &Group,
    h_members: &[usize],
    k_members: &[usize],
    s0: &[usize],
    phi0: &[usize],
) -> Result<WitnessPackage, WitnessError> {
    let h = closure(g, h_members);
    if h.members() != {
        let mut sorted = h_members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
    } {
        return Err(WitnessError::NotASubgroup { part: "normal" });
    }
    let k = closure(g, k_members);
    if k.members() != {
        let mut sorted = k_members.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        sorted
    } {
        return Err(WitnessError::NotASubgroup { part: "acting" });
    }
    let hn = h.members().len();
    let kn = k.members().len();
    let overlap = h.members().iter().filter(|&&m| k.contains(m)).count();
    let normal = h
        .members()
        .iter()
        .all(|&x| k.members().iter().all(|&c| h.contains(g.mul(g.mul(c, x), g.inv(c)))));
    if hn * kn != g.order() || overlap != 1 || !normal {
        return Err(WitnessError::NotSemidirect);
    }
    if s0.iter().any(|&s| !h.contains(s) || s == 0) {
        return Err(WitnessError::SetOutsideNormal);
    }
    for &c in k.members() {
        for &s in s0 {
            if !s0.contains(&g.mul(g.mul(g.inv(c), s), c)) {
                return Err(WitnessError::NotConjugationInvariant);
            }
        }
    }
    if phi0.len() != hn {
        return Err(WitnessError::PieceLength { got: phi0.len(), want: hn });
    }
    // Check φ0 in the subgroup's own indexing.
    let (hg, members) = subgroup_as_group(&h);
    let local = |x: usize| members.binary_search(&x).expect("member of H");
    let local_image: Vec<usize> = {
        let mut img = vec![usize::MAX; hn];
        for (i, &y) in phi0.iter().enumerate() {
            if !h.contains(y) {
                return Err(WitnessError::NotASubgroup { part: "image" });
            }
            img[i] = local(y);
        }
        img
    };
    let phi0_local = VertexMap::new(&hg, local_image)?;
    let s0_local: Vec<usize> = s0.iter().map(|&s| local(s)).collect();
    let sub_set = ConnectionSet::new(&hg, &s0_local)?;
    let sub_graph = CayleyGraph::build(&sub_set)?;
    if !check_colour_preserving(&sub_graph, &phi0_local) {
        return Err(WitnessError::PieceNotColourPreserving);
    }
    let twisted = phi0_local.apply(0) == 0
        && s0.iter().any(|&s| {
            k.members().iter().any(|&c| {
                let conj = g.mul(g.mul(g.inv(c), s), c);
                let lhs = members[phi0_local.apply(local(conj))];
                let rhs = g.mul(g.mul(g.inv(c), members[phi0_local.apply(local(s))]), c);
                lhs != rhs
            })
        });
    if is_affine(&phi0_local) && !twisted {
        return Err(WitnessError::UntwistedPiece);
    }
    // Unique factorization v = h·k gives φ(v) = φ0(h)·k.
    let mut image = vec![usize::MAX; g.order()];
    for v in 0..g.order() {
        let mut found = None;
        for &c in k.members() {
            let part = g.mul(v, g.inv(c));
            if h.contains(part) {
                assert!(found.is_none(), "factorization must be unique");
                found = Some(g.mul(members[phi0_local.apply(local(part))], c));
            }
        }
        image[v] = found.expect("exact factorization covers the group");
    }
    let map = VertexMap::new(g, image)?;
    let mut set_members = s0.to_vec();
    set_members.extend(k.members().iter().copied().filter(|&c| c != 0));
    let set = ConnectionSet::new(g, &set_members)?;
    verified(set, map, Mode::Preserving, "semidirect", None)
}

/// Builds `(H ⋊ ⟨σ⟩) × Z2` for an involutory automorphism `σ` that fixes or
/// inverts every element of the generating set `T`, and swaps the two
/// order-2 coordinates: `(h, x, y) ↦ (h, y, x)`. The swap permutes the two
/// singleton colours, takes the central involution to a non-central one,
/// and so is colour-permuting but not affine.
pub fn witness_dihedral_z2(
    h: &Group,
    t: &[usize],
    sigma: &VertexMap,
) -> Result<WitnessPackage, WitnessError> {
    if !std::sync::Arc::ptr_eq(sigma.group(), h) || !is_automorphism(sigma) {
        return Err(WitnessError::ActionNotAutomorphism);
    }
    if sigma.is_identity() {
        return Err(WitnessError::TrivialAction);
    }
    if !sigma.compose(sigma).is_identity() {
        return Err(WitnessError::ActionNotInvolutory);
    }
    let mut t_closed: Vec<usize> = t.iter().flat_map(|&x| [x, h.inv(x)]).collect();
    t_closed.sort_unstable();
    t_closed.dedup();
    for &x in &t_closed {
        if sigma.apply(x) != x && sigma.apply(x) != h.inv(x) {
            return Err(WitnessError::NotInvertedOrFixed { element: x });
        }
    }
    if closure(h, &t_closed).members().len() != h.order() {
        return Err(WitnessError::TNotGenerating);
    }
    let hn = h.order();
    let order = 4 * hn;
    // (h, x, y) ↦ h + hn·x + 2hn·y with x the σ exponent, y the Z2 part.
    let idx = |hi: usize, x: usize, y: usize| hi + hn * x + 2 * hn * y;
    let mut table = vec![0usize; order * order];
    for h1 in 0..hn {
        for x1 in 0..2 {
            for y1 in 0..2 {
                let a = idx(h1, x1, y1);
                for h2 in 0..hn {
                    let acted = if x1 == 1 { sigma.apply(h2) } else { h2 };
                    for x2 in 0..2 {
                        for y2 in 0..2 {
                            table[a * order + idx(h2, x2, y2)] =
                                idx(h.mul(h1, acted), (x1 + x2) % 2, (y1 + y2) % 2);
                        }
                    }
                }
            }
        }
    }
    let labels: Vec<String> = (0..order)
        .map(|v| format!("({},{},{})", h.label(v % hn), (v / hn) % 2, v / (2 * hn)))
        .collect();
    let mut gens = t_closed.clone();
    gens.push(idx(0, 1, 0));
    gens.push(idx(0, 0, 1));
    let g = crate::group::FiniteGroup::from_parts(order, table, Some(labels), gens, Vec::new())?;
    let image: Vec<usize> = (0..order).map(|v| idx(v % hn, v / (2 * hn), (v / hn) % 2)).collect();
    let map = VertexMap::new(&g, image)?;
    let mut members = t_closed;
    members.push(idx(0, 1, 0));
    members.push(idx(0, 0, 1));
    let set = ConnectionSet::new(&g, &members)?;
    verified(set, map, Mode::Permuting, "dihedral-z2", None)
}
