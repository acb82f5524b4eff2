//! Finite groups as explicit multiplication tables, with the structural
//! operations the rest of the crate is built on: closures, automorphisms,
//! affine maps, quotients, subgroup lattices and abelian invariants.
//!
//! Elements are `usize` indices `0..order`, and index `0` is always the
//! identity. Groups are shared as [`Group`] (`Arc<FiniteGroup>`) so that
//! maps, subgroups and graphs can hold cheap references.

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::Arc;
use thiserror::Error;

/// Shared handle to an immutable finite group.
pub type Group = Arc<FiniteGroup>;

/// Largest supported group order; member sets are stored as `u128` bitmasks.
pub const MAX_ORDER: usize = 128;

/// Default bound on `|G|` for automorphism-group enumeration.
pub const AUT_ORDER_BOUND: usize = 100;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {order} exceeds supported bound {bound}")]
    OrderBound { order: usize, bound: usize },
    #[error("multiplication table is empty")]
    EmptyTable,
    #[error("multiplication table is not square")]
    TableShape,
    #[error("table entry {value} at ({row},{col}) is out of range")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("row {0} of the table is not a permutation")]
    RowNotPermutation(usize),
    #[error("column {0} of the table is not a permutation")]
    ColumnNotPermutation(usize),
    #[error("element 0 is not a two-sided identity")]
    IdentityNotFirst,
    #[error("associativity fails at ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("element {0} has no two-sided inverse")]
    NoInverse(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("element index {index} out of range for group of order {order}")]
    ElementOutOfRange { index: usize, order: usize },
    #[error("map image is not a bijection")]
    NotBijective,
    #[error("map or subgroup belongs to a different group")]
    GroupMismatch,
    #[error("member set is not closed under the group operation")]
    NotClosed,
    #[error("subgroup is not normal")]
    NotNormal,
    #[error("group is not abelian")]
    NotAbelian,
    #[error("not a permutation of 0..{0}")]
    BadPermutation(usize),
    #[error("word syntax error: {0}")]
    Word(String),
}

/// A finite group given by its full multiplication table.
///
/// `table[a * order + b]` is the product `a·b`. Construction validates the
/// Latin-square property, the identity at index 0, two-sided inverses and
/// associativity (exhaustively up to order 64, on 10⁴ deterministic sample
/// triples above that).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupJson", into = "GroupJson")]
pub struct FiniteGroup {
    order: usize,
    table: Vec<usize>,
    inverse: Vec<usize>,
    elem_order: Vec<usize>,
    labels: Option<Vec<String>>,
    gens: Vec<usize>,
    gen_names: Vec<String>,
}

/// JSON shape: `{ "order": n, "table": [row-major n²], "labels": [...] }`.
/// Distinguished generators are not serialized; rebuild from a recipe when
/// generator words are needed.
#[derive(Serialize, Deserialize)]
struct GroupJson {
    order: usize,
    table: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl From<FiniteGroup> for GroupJson {
    fn from(g: FiniteGroup) -> Self {
        GroupJson { order: g.order, table: g.table, labels: g.labels }
    }
}

impl TryFrom<GroupJson> for FiniteGroup {
    type Error = GroupError;
    fn try_from(j: GroupJson) -> Result<Self, GroupError> {
        FiniteGroup::validate(j.order, j.table, j.labels, Vec::new(), Vec::new())
    }
}

impl FiniteGroup {
    /// Builds a group from a square table; `table[a][b]` is `a·b`.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        labels: Option<Vec<String>>,
    ) -> Result<Group, GroupError> {
        let order = table.len();
        let mut flat = Vec::with_capacity(order * order);
        for row in &table {
            if row.len() != order {
                return Err(GroupError::TableShape);
            }
            flat.extend_from_slice(row);
        }
        Self::from_flat_table(order, flat, labels)
    }

    /// Builds a group from a row-major flat table of length `order²`.
    pub fn from_flat_table(
        order: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
    ) -> Result<Group, GroupError> {
        Ok(Arc::new(Self::validate(order, table, labels, Vec::new(), Vec::new())?))
    }

    /// In-crate constructor for family evaluation: also records the
    /// distinguished generators and their one-letter names.
    pub(crate) fn from_parts(
        order: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
        gens: Vec<usize>,
        gen_names: Vec<String>,
    ) -> Result<Group, GroupError> {
        Ok(Arc::new(Self::validate(order, table, labels, gens, gen_names)?))
    }

    fn validate(
        order: usize,
        table: Vec<usize>,
        labels: Option<Vec<String>>,
        gens: Vec<usize>,
        gen_names: Vec<String>,
    ) -> Result<FiniteGroup, GroupError> {
        if order == 0 {
            return Err(GroupError::EmptyTable);
        }
        if order > MAX_ORDER {
            return Err(GroupError::OrderBound { order, bound: MAX_ORDER });
        }
        if table.len() != order * order {
            return Err(GroupError::TableShape);
        }
        for a in 0..order {
            for b in 0..order {
                let v = table[a * order + b];
                if v >= order {
                    return Err(GroupError::EntryOutOfRange { row: a, col: b, value: v });
                }
            }
        }
        // Latin square: every row and column is a permutation.
        let mut seen = vec![false; order];
        for a in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for b in 0..order {
                let v = table[a * order + b];
                if seen[v] {
                    return Err(GroupError::RowNotPermutation(a));
                }
                seen[v] = true;
            }
        }
        for b in 0..order {
            seen.iter_mut().for_each(|s| *s = false);
            for a in 0..order {
                let v = table[a * order + b];
                if seen[v] {
                    return Err(GroupError::ColumnNotPermutation(b));
                }
                seen[v] = true;
            }
        }
        for a in 0..order {
            if table[a * order] != a || table[a] != a {
                return Err(GroupError::IdentityNotFirst);
            }
        }
        // Associativity: exhaustive for small orders, deterministic sample above.
        let mul = |a: usize, b: usize| table[a * order + b];
        if order <= 64 {
            for a in 0..order {
                for b in 0..order {
                    let ab = mul(a, b);
                    for c in 0..order {
                        if mul(ab, c) != mul(a, mul(b, c)) {
                            return Err(GroupError::NotAssociative { a, b, c });
                        }
                    }
                }
            }
        } else {
            let mut state: u64 = 0x9e37_79b9_7f4a_7c15 ^ order as u64;
            let mut next = move || {
                state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
                let mut z = state;
                z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
                z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
                (z ^ (z >> 31)) as usize
            };
            for _ in 0..10_000 {
                let a = next() % order;
                let b = next() % order;
                let c = next() % order;
                if mul(mul(a, b), c) != mul(a, mul(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
        let mut inverse = vec![usize::MAX; order];
        for a in 0..order {
            let mut found = None;
            for b in 0..order {
                if mul(a, b) == 0 && mul(b, a) == 0 {
                    found = Some(b);
                    break;
                }
            }
            inverse[a] = found.ok_or(GroupError::NoInverse(a))?;
        }
        let mut elem_order = vec![0usize; order];
        for a in 0..order {
            let mut x = a;
            let mut k = 1;
            while x != 0 {
                x = mul(x, a);
                k += 1;
            }
            elem_order[a] = k;
        }
        if let Some(ref l) = labels {
            if l.len() != order {
                return Err(GroupError::LabelCount { expected: order, got: l.len() });
            }
        }
        for &g in &gens {
            if g >= order {
                return Err(GroupError::ElementOutOfRange { index: g, order });
            }
        }
        Ok(FiniteGroup { order, table, inverse, elem_order, labels, gens, gen_names })
    }

    /// Builds the permutation group generated by `gens` (images of
    /// `0..degree`), labelling elements by cycle notation on 1-based points.
    /// Elements are indexed in breadth-first discovery order from the
    /// identity, multiplying by generators on the right.
    pub fn from_permutations(
        degree: usize,
        gens: &[Vec<usize>],
        names: &[&str],
    ) -> Result<Group, GroupError> {
        for p in gens {
            if p.len() != degree {
                return Err(GroupError::BadPermutation(degree));
            }
            let mut seen = vec![false; degree];
            for &v in p {
                if v >= degree || seen[v] {
                    return Err(GroupError::BadPermutation(degree));
                }
                seen[v] = true;
            }
        }
        let compose = |a: &[usize], b: &[usize]| -> Vec<usize> {
            (0..degree).map(|p| a[b[p]]).collect()
        };
        let id: Vec<usize> = (0..degree).collect();
        let mut index: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut elems: Vec<Vec<usize>> = vec![id.clone()];
        index.insert(id, 0);
        let mut head = 0;
        while head < elems.len() {
            let cur = elems[head].clone();
            head += 1;
            for gperm in gens {
                let nxt = compose(&cur, gperm);
                if !index.contains_key(&nxt) {
                    if elems.len() == MAX_ORDER {
                        return Err(GroupError::OrderBound {
                            order: MAX_ORDER + 1,
                            bound: MAX_ORDER,
                        });
                    }
                    index.insert(nxt.clone(), elems.len());
                    elems.push(nxt);
                }
            }
        }
        let order = elems.len();
        let mut table = vec![0usize; order * order];
        for a in 0..order {
            for b in 0..order {
                let prod = compose(&elems[a], &elems[b]);
                table[a * order + b] = index[&prod];
            }
        }
        let labels: Vec<String> = elems.iter().map(|p| cycle_notation(p)).collect();
        let gen_idx: Vec<usize> = gens.iter().map(|p| index[p]).collect();
        let gen_names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        Self::from_parts(order, table, Some(labels), gen_idx, gen_names)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.order
    }

    #[inline]
    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.order && b < self.order);
        self.table[a * self.order + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        self.inverse[a]
    }

    /// `g x g⁻¹`.
    #[inline]
    pub fn conj(&self, g: usize, x: usize) -> usize {
        self.mul(self.mul(g, x), self.inv(g))
    }

    #[inline]
    pub fn elem_order(&self, a: usize) -> usize {
        debug_assert!(a < self.order);
        self.elem_order[a]
    }

    #[inline]
    pub fn is_involution(&self, a: usize) -> bool {
        self.elem_order[a] == 2
    }

    /// `a^k` for any integer `k` (negative exponents via the inverse).
    pub fn power(&self, a: usize, k: i64) -> usize {
        let ord = self.elem_order[a] as i64;
        let k = k.rem_euclid(ord) as usize;
        let mut acc = 0;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn label(&self, a: usize) -> String {
        match &self.labels {
            Some(l) => l[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Distinguished generators recorded by family evaluation (may be empty).
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn generator_names(&self) -> &[String] {
        &self.gen_names
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.order {
            for b in (a + 1)..self.order {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Number of elements of order exactly 2.
    pub fn involution_count(&self) -> usize {
        self.elem_order.iter().filter(|&&o| o == 2).count()
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string(self).expect("group serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Group, GroupError> {
        let g: FiniteGroup =
            serde_json::from_str(s).map_err(|e| GroupError::Word(format!("json: {e}")))?;
        Ok(Arc::new(g))
    }

    /// Evaluates a word in the distinguished generators, e.g. `"a^2*b"`,
    /// `"ab"` (juxtaposition), `"(ab)^-1"`. The letter `e` denotes the
    /// identity unless it names a generator.
    pub fn eval_word(&self, word: &str) -> Result<usize, GroupError> {
        let chars: Vec<char> = word.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let v = self.parse_word(&chars, &mut pos, 0)?;
        if pos != chars.len() {
            return Err(GroupError::Word(format!("unexpected `{}` in `{word}`", chars[pos])));
        }
        Ok(v)
    }

    fn parse_word(&self, s: &[char], pos: &mut usize, depth: usize) -> Result<usize, GroupError> {
        if depth > 32 {
            return Err(GroupError::Word("nesting too deep".into()));
        }
        let mut acc = 0usize;
        let mut any = false;
        while *pos < s.len() && s[*pos] != ')' {
            if s[*pos] == '*' {
                *pos += 1;
                continue;
            }
            let atom = if s[*pos] == '(' {
                *pos += 1;
                let v = self.parse_word(s, pos, depth + 1)?;
                if *pos >= s.len() || s[*pos] != ')' {
                    return Err(GroupError::Word("unbalanced parenthesis".into()));
                }
                *pos += 1;
                v
            } else if s[*pos].is_ascii_alphabetic() {
                let c = s[*pos];
                *pos += 1;
                match self.gen_names.iter().position(|n| n.len() == 1 && n.starts_with(c)) {
                    Some(i) => self.gens[i],
                    None if c == 'e' => 0,
                    None => {
                        return Err(GroupError::Word(format!("unknown generator `{c}`")));
                    }
                }
            } else {
                return Err(GroupError::Word(format!("unexpected `{}`", s[*pos])));
            };
            let val = if *pos < s.len() && s[*pos] == '^' {
                *pos += 1;
                let neg = if *pos < s.len() && s[*pos] == '-' {
                    *pos += 1;
                    true
                } else {
                    false
                };
                let start = *pos;
                while *pos < s.len() && s[*pos].is_ascii_digit() {
                    *pos += 1;
                }
                if start == *pos {
                    return Err(GroupError::Word("missing exponent".into()));
                }
                let digits: String = s[start..*pos].iter().collect();
                let k: i64 = digits.parse().map_err(|_| GroupError::Word("bad exponent".into()))?;
                self.power(atom, if neg { -k } else { k })
            } else {
                atom
            };
            acc = self.mul(acc, val);
            any = true;
        }
        if !any {
            return Err(GroupError::Word("empty word".into()));
        }
        Ok(acc)
    }
}

fn cycle_notation(p: &[usize]) -> String {
    let n = p.len();
    let mut seen = vec![false; n];
    let mut out = String::new();
    for start in 0..n {
        if seen[start] || p[start] == start {
            seen[start] = true;
            continue;
        }
        let mut cyc = vec![start];
        seen[start] = true;
        let mut cur = p[start];
        while cur != start {
            seen[cur] = true;
            cyc.push(cur);
            cur = p[cur];
        }
        out.push('(');
        out.push_str(&cyc.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(","));
        out.push(')');
    }
    if out.is_empty() {
        out.push('e');
    }
    out
}

/// A bijection on the vertex set (= element set) of a group.
///
/// `image[x]` is the image of `x`. Equality, ordering and hashing use the
/// image array only; serialization is the bare permutation array.
#[derive(Debug, Clone)]
pub struct VertexMap {
    group: Group,
    image: Vec<usize>,
}

impl PartialEq for VertexMap {
    fn eq(&self, other: &Self) -> bool {
        self.image == other.image
    }
}
impl Eq for VertexMap {}
impl PartialOrd for VertexMap {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for VertexMap {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.image.cmp(&other.image)
    }
}

impl Serialize for VertexMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.image.serialize(s)
    }
}

impl VertexMap {
    pub fn new(group: &Group, image: Vec<usize>) -> Result<Self, GroupError> {
        let n = group.order();
        if image.len() != n {
            return Err(GroupError::NotBijective);
        }
        let mut seen = vec![false; n];
        for &v in &image {
            if v >= n || seen[v] {
                return Err(GroupError::NotBijective);
            }
            seen[v] = true;
        }
        Ok(VertexMap { group: group.clone(), image })
    }

    pub fn identity(group: &Group) -> Self {
        VertexMap { group: group.clone(), image: (0..group.order()).collect() }
    }

    /// Left translation `x ↦ a·x`.
    pub fn left_translation(group: &Group, a: usize) -> Self {
        let image = (0..group.order()).map(|x| group.mul(a, x)).collect();
        VertexMap { group: group.clone(), image }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.image[x]
    }

    pub fn image(&self) -> &[usize] {
        &self.image
    }

    pub fn into_image(self) -> Vec<usize> {
        self.image
    }

    pub fn is_identity(&self) -> bool {
        self.image.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `(self ∘ other)(x) = self(other(x))`.
    pub fn compose(&self, other: &VertexMap) -> VertexMap {
        debug_assert_eq!(self.group.order(), other.group.order());
        let image = other.image.iter().map(|&y| self.image[y]).collect();
        VertexMap { group: self.group.clone(), image }
    }

    pub fn inverse(&self) -> VertexMap {
        let mut image = vec![0; self.image.len()];
        for (x, &y) in self.image.iter().enumerate() {
            image[y] = x;
        }
        VertexMap { group: self.group.clone(), image }
    }

    /// Post-composes with the translation by `image[e]⁻¹` so the result
    /// fixes the identity; affine maps normalize to group automorphisms.
    pub fn normalized_to_fix_identity(&self) -> VertexMap {
        let g = &self.group;
        let shift = g.inv(self.image[0]);
        let image = self.image.iter().map(|&y| g.mul(shift, y)).collect();
        VertexMap { group: g.clone(), image }
    }
}

/// Returns true when `f` fixes the identity and respects products.
pub fn is_automorphism(f: &VertexMap) -> bool {
    let g = f.group();
    if f.apply(0) != 0 {
        return false;
    }
    let n = g.order();
    for a in 0..n {
        let fa = f.apply(a);
        for b in 0..n {
            if f.apply(g.mul(a, b)) != g.mul(fa, f.apply(b)) {
                return false;
            }
        }
    }
    true
}

/// Returns true when `f` is a group automorphism composed with a left
/// translation, i.e. `x ↦ f(e)⁻¹·f(x)` is an automorphism.
pub fn is_affine(f: &VertexMap) -> bool {
    is_automorphism(&f.normalized_to_fix_identity())
}

/// Independent characterization of affine maps: conjugation by `f` sends
/// every left translation to a left translation.
pub fn normalizes_left_regular(f: &VertexMap) -> bool {
    let g = f.group();
    let n = g.order();
    let finv = f.inverse();
    for a in 0..n {
        // m = f ∘ L_a ∘ f⁻¹ must equal L_{m(e)}.
        let m0 = f.apply(g.mul(a, finv.apply(0)));
        for x in 0..n {
            if f.apply(g.mul(a, finv.apply(x))) != g.mul(m0, x) {
                return false;
            }
        }
    }
    true
}

/// A subgroup, stored as a sorted member list plus a bitmask.
#[derive(Debug, Clone)]
pub struct Subgroup {
    group: Group,
    members: Vec<usize>,
    mask: u128,
}

impl PartialEq for Subgroup {
    fn eq(&self, other: &Self) -> bool {
        self.mask == other.mask
    }
}
impl Eq for Subgroup {}

impl Subgroup {
    /// Validates closure under products and inverses.
    pub fn new(group: &Group, mut members: Vec<usize>) -> Result<Self, GroupError> {
        members.sort_unstable();
        members.dedup();
        let n = group.order();
        for &m in &members {
            if m >= n {
                return Err(GroupError::ElementOutOfRange { index: m, order: n });
            }
        }
        let mut mask: u128 = 0;
        for &m in &members {
            mask |= 1u128 << m;
        }
        if mask & 1 == 0 {
            return Err(GroupError::NotClosed);
        }
        for &a in &members {
            if mask >> group.inv(a) & 1 == 0 {
                return Err(GroupError::NotClosed);
            }
            for &b in &members {
                if mask >> group.mul(a, b) & 1 == 0 {
                    return Err(GroupError::NotClosed);
                }
            }
        }
        Ok(Subgroup { group: group.clone(), members, mask })
    }

    fn from_mask(group: &Group, mask: u128) -> Self {
        let members = (0..group.order()).filter(|&i| mask >> i & 1 == 1).collect();
        Subgroup { group: group.clone(), members, mask }
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn mask(&self) -> u128 {
        self.mask
    }

    #[inline]
    pub fn contains(&self, x: usize) -> bool {
        self.mask >> x & 1 == 1
    }

    pub fn is_trivial(&self) -> bool {
        self.members.len() == 1
    }

    pub fn is_whole(&self) -> bool {
        self.members.len() == self.group.order()
    }
}

fn closure_mask(g: &FiniteGroup, gens: &[usize]) -> u128 {
    let mut mask: u128 = 1;
    let mut work: Vec<usize> = vec![0];
    for &x in gens {
        assert!(x < g.order(), "generator index out of range");
        if mask >> x & 1 == 0 {
            mask |= 1u128 << x;
            work.push(x);
        }
    }
    let mut head = 0;
    while head < work.len() {
        let a = work[head];
        head += 1;
        // Right-multiplying by the seed generators saturates the subgroup;
        // inverses arrive because the group is finite.
        for &s in gens {
            let p = g.mul(a, s);
            if mask >> p & 1 == 0 {
                mask |= 1u128 << p;
                work.push(p);
            }
            let q = g.mul(s, a);
            if mask >> q & 1 == 0 {
                mask |= 1u128 << q;
                work.push(q);
            }
        }
    }
    mask
}

/// Smallest subgroup containing `gens`; `closure(G, ∅)` is the trivial one.
pub fn closure(g: &Group, gens: &[usize]) -> Subgroup {
    Subgroup::from_mask(g, closure_mask(g, gens))
}

pub fn is_generating(g: &Group, set: &[usize]) -> bool {
    closure_mask(g, set).count_ones() as usize == g.order()
}

/// Builds an irredundant generating sequence by greedily taking the least
/// element outside the subgroup generated so far.
fn generating_sequence(g: &Group) -> Vec<usize> {
    let mut seq = Vec::new();
    let mut mask = closure_mask(g, &[]);
    for x in 1..g.order() {
        if mask >> x & 1 == 0 {
            seq.push(x);
            mask = closure_mask(g, &seq);
            if mask.count_ones() as usize == g.order() {
                break;
            }
        }
    }
    seq
}

/// Saturates the partial map `gens[i] ↦ images[i]` (plus `e ↦ e`) under
/// products on both sides. Returns the partial image array (unassigned =
/// `usize::MAX`) and how many elements are assigned, or `None` on any
/// conflict with injectivity or element orders.
fn saturate_hom(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    images: &[usize],
) -> Option<(Vec<usize>, usize)> {
    let n = g.order();
    let mut img = vec![usize::MAX; n];
    let mut rev = vec![usize::MAX; h.order()];
    let mut known: Vec<usize> = Vec::with_capacity(n);
    fn assign(
        g: &FiniteGroup,
        h: &FiniteGroup,
        x: usize,
        y: usize,
        img: &mut [usize],
        rev: &mut [usize],
        known: &mut Vec<usize>,
    ) -> Option<()> {
        if img[x] != usize::MAX {
            return if img[x] == y { Some(()) } else { None };
        }
        if rev[y] != usize::MAX {
            return None;
        }
        // Element orders are isomorphism fingerprints; prune early.
        if g.elem_order(x) != h.elem_order(y) {
            return None;
        }
        img[x] = y;
        rev[y] = x;
        known.push(x);
        Some(())
    }
    assign(g, h, 0, 0, &mut img, &mut rev, &mut known)?;
    for (&gx, &hy) in gens.iter().zip(images) {
        assign(g, h, gx, hy, &mut img, &mut rev, &mut known)?;
    }
    let mut head = 0;
    while head < known.len() {
        let z = known[head];
        head += 1;
        for i in 0..known.len() {
            let k = known[i];
            assign(g, h, g.mul(k, z), h.mul(img[k], img[z]), &mut img, &mut rev, &mut known)?;
            assign(g, h, g.mul(z, k), h.mul(img[z], img[k]), &mut img, &mut rev, &mut known)?;
        }
    }
    let count = known.len();
    Some((img, count))
}

/// Saturates generator images into a total bijective homomorphism image,
/// or `None` when the assignment is inconsistent or does not cover `G`.
pub(crate) fn saturate_total(
    g: &Group,
    h: &Group,
    gens: &[usize],
    images: &[usize],
) -> Option<Vec<usize>> {
    let (img, count) = saturate_hom(g, h, gens, images)?;
    if count == g.order() && h.order() == g.order() {
        Some(img)
    } else {
        None
    }
}

fn hom_search(
    g: &FiniteGroup,
    h: &FiniteGroup,
    gens: &[usize],
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    stop_at_first: bool,
) -> bool {
    if chosen.len() == gens.len() {
        if let Some((img, count)) = saturate_hom(g, h, gens, chosen) {
            // The chosen generators generate G, so saturation is total.
            if count == g.order() && h.order() == g.order() {
                out.push(img);
                return stop_at_first;
            }
        }
        return false;
    }
    let want = g.elem_order(gens[chosen.len()]);
    for cand in 0..h.order() {
        if h.elem_order(cand) != want {
            continue;
        }
        chosen.push(cand);
        let viable = saturate_hom(g, h, &gens[..chosen.len()], chosen).is_some();
        let done =
            if viable { hom_search(g, h, gens, chosen, out, stop_at_first) } else { false };
        chosen.pop();
        if done {
            return true;
        }
    }
    false
}

/// All automorphisms, in lexicographic order of generator images.
/// Errors when `|G|` exceeds `bound`.
pub fn automorphism_group_with_bound(
    g: &Group,
    bound: usize,
) -> Result<Vec<VertexMap>, GroupError> {
    if g.order() > bound {
        return Err(GroupError::OrderBound { order: g.order(), bound });
    }
    let gens = generating_sequence(g);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    hom_search(g, g, &gens, &mut chosen, &mut out, false);
    Ok(out
        .into_iter()
        .map(|image| VertexMap { group: g.clone(), image })
        .collect())
}

pub fn automorphism_group(g: &Group) -> Result<Vec<VertexMap>, GroupError> {
    automorphism_group_with_bound(g, AUT_ORDER_BOUND)
}

pub fn is_isomorphic(a: &Group, b: &Group) -> bool {
    if a.order() != b.order() {
        return false;
    }
    let mut oa: Vec<usize> = (0..a.order()).map(|x| a.elem_order(x)).collect();
    let mut ob: Vec<usize> = (0..b.order()).map(|x| b.elem_order(x)).collect();
    oa.sort_unstable();
    ob.sort_unstable();
    if oa != ob || a.is_abelian() != b.is_abelian() {
        return false;
    }
    let gens = generating_sequence(a);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    hom_search(a, b, &gens, &mut chosen, &mut out, true);
    !out.is_empty()
}

pub fn centre(g: &Group) -> Subgroup {
    let n = g.order();
    let members: Vec<usize> =
        (0..n).filter(|&z| (0..n).all(|x| g.mul(z, x) == g.mul(x, z))).collect();
    Subgroup::new(g, members).expect("centre is a subgroup")
}

pub fn centralizer(g: &Group, set: &[usize]) -> Subgroup {
    let n = g.order();
    for &s in set {
        assert!(s < n, "element index out of range");
    }
    let members: Vec<usize> =
        (0..n).filter(|&z| set.iter().all(|&s| g.mul(z, s) == g.mul(s, z))).collect();
    Subgroup::new(g, members).expect("centralizer is a subgroup")
}

pub fn is_normal(g: &Group, h: &Subgroup) -> bool {
    (0..g.order()).all(|x| h.members().iter().all(|&m| h.contains(g.conj(x, m))))
}

/// Quotient by a normal subgroup. Returns the quotient (cosets indexed by
/// first appearance, so the coset of `e` is 0) and the projection array.
pub fn quotient(g: &Group, h: &Subgroup) -> Result<(Group, Vec<usize>), GroupError> {
    if g.order() != h.group().order() || h.group().table != g.table {
        return Err(GroupError::GroupMismatch);
    }
    if !is_normal(g, h) {
        return Err(GroupError::NotNormal);
    }
    let n = g.order();
    let mut coset_of = vec![usize::MAX; n];
    let mut reps = Vec::new();
    for x in 0..n {
        if coset_of[x] == usize::MAX {
            let id = reps.len();
            reps.push(x);
            for &m in h.members() {
                coset_of[g.mul(x, m)] = id;
            }
        }
    }
    let q = reps.len();
    let mut table = vec![0usize; q * q];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i * q + j] = coset_of[g.mul(a, b)];
        }
    }
    let labels: Vec<String> = reps.iter().map(|&r| format!("[{}]", g.label(r))).collect();
    let qg = FiniteGroup::from_parts(q, table, Some(labels), Vec::new(), Vec::new())?;
    Ok((qg, coset_of))
}

/// Every subgroup, by breadth-first growth: extend each known subgroup by
/// one new generator until nothing new appears. Sorted by (order, members).
pub fn all_subgroups(g: &Group) -> Vec<Subgroup> {
    let n = g.order();
    let trivial = closure_mask(g, &[]);
    let mut seen: std::collections::HashSet<u128> = std::collections::HashSet::new();
    seen.insert(trivial);
    let mut queue = vec![trivial];
    let mut head = 0;
    while head < queue.len() {
        let cur = queue[head];
        head += 1;
        if cur.count_ones() as usize == n {
            continue;
        }
        let members: Vec<usize> = (0..n).filter(|&i| cur >> i & 1 == 1).collect();
        for x in 0..n {
            if cur >> x & 1 == 1 {
                continue;
            }
            let mut gens = members.clone();
            gens.push(x);
            let ext = closure_mask(g, &gens);
            if seen.insert(ext) {
                queue.push(ext);
            }
        }
    }
    let mut subs: Vec<Subgroup> = queue.into_iter().map(|m| Subgroup::from_mask(g, m)).collect();
    subs.sort_by(|a, b| {
        a.order().cmp(&b.order()).then_with(|| a.members().cmp(b.members()))
    });
    subs
}

/// Re-indexes a subgroup as a standalone group. Returns the group and the
/// member list in parent indices (position = new index).
pub fn subgroup_as_group(h: &Subgroup) -> (Group, Vec<usize>) {
    let parent = h.group();
    let members = h.members().to_vec();
    let k = members.len();
    let mut local = vec![usize::MAX; parent.order()];
    for (i, &m) in members.iter().enumerate() {
        local[m] = i;
    }
    let mut table = vec![0usize; k * k];
    for i in 0..k {
        for j in 0..k {
            table[i * k + j] = local[parent.mul(members[i], members[j])];
        }
    }
    let labels: Vec<String> = members.iter().map(|&m| parent.label(m)).collect();
    let g = FiniteGroup::from_parts(k, table, Some(labels), Vec::new(), Vec::new())
        .expect("subgroup table is a group");
    (g, members)
}

/// Searches for a section `H/K` (subgroup `H`, normal `K ⊴ H`) whose
/// quotient satisfies `pred`. Subgroups are scanned in (order, members)
/// order, kernels likewise within each `H`.
pub fn find_section<F>(g: &Group, mut pred: F) -> Option<(Subgroup, Subgroup)>
where
    F: FnMut(&Group) -> bool,
{
    let subs = all_subgroups(g);
    for h in &subs {
        let (hg, members) = subgroup_as_group(h);
        for k in &subs {
            if k.mask() & h.mask() != k.mask() {
                continue;
            }
            let k_local: Vec<usize> = k
                .members()
                .iter()
                .map(|&m| members.iter().position(|&p| p == m).unwrap())
                .collect();
            let k_sub = match Subgroup::new(&hg, k_local) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if !is_normal(&hg, &k_sub) {
                continue;
            }
            let (q, _) = quotient(&hg, &k_sub).expect("validated normal");
            if pred(&q) {
                return Some((h.clone(), k.clone()));
            }
        }
    }
    None
}

/// Prime-power elementary divisors of an abelian group, sorted descending,
/// e.g. `Z12 → [4, 3]` and `Z8×Z2×Z2 → [8, 2, 2]`.
pub fn abelian_elementary_divisors(g: &Group) -> Result<Vec<usize>, GroupError> {
    if !g.is_abelian() {
        return Err(GroupError::NotAbelian);
    }
    let mut factors = Vec::new();
    collect_invariants(g, &mut factors);
    factors.sort_unstable_by(|a, b| b.cmp(a));
    Ok(factors)
}

fn collect_invariants(g: &Group, out: &mut Vec<usize>) {
    let n = g.order();
    if n == 1 {
        return;
    }
    // Peel a cyclic summand of maximal order; a complement always exists
    // in an abelian group.
    let c = (0..n).max_by_key(|&x| g.elem_order(x)).unwrap();
    let cmask = closure_mask(g, &[c]);
    let csize = cmask.count_ones() as usize;
    for (p, a) in prime_power_split(csize) {
        out.push(p.pow(a));
    }
    if csize == n {
        return;
    }
    let target = n / csize;
    let kmask = find_complement(g, cmask, closure_mask(g, &[]), target, 1)
        .expect("maximal cyclic summand has a complement");
    let sub = Subgroup::from_mask(g, kmask);
    let (kg, _) = subgroup_as_group(&sub);
    collect_invariants(&kg, out);
}

fn find_complement(
    g: &Group,
    cmask: u128,
    kmask: u128,
    target: usize,
    start: usize,
) -> Option<u128> {
    let size = kmask.count_ones() as usize;
    if size == target {
        return Some(kmask);
    }
    for x in start..g.order() {
        if kmask >> x & 1 == 1 {
            continue;
        }
        let mut gens: Vec<usize> = (0..g.order()).filter(|&i| kmask >> i & 1 == 1).collect();
        gens.push(x);
        let ext = closure_mask(g, &gens);
        let esize = ext.count_ones() as usize;
        if esize <= target && target % esize == 0 && (ext & cmask).count_ones() == 1 {
            if let Some(found) = find_complement(g, cmask, ext, target, x + 1) {
                return Some(found);
            }
        }
    }
    None
}

fn prime_power_split(mut n: usize) -> Vec<(usize, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            let mut a = 0;
            while n % p == 0 {
                n /= p;
                a += 1;
            }
            out.push((p, a));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Rebuilds a group with a different distinguished generator list.
pub(crate) fn with_generators(
    g: &Group,
    gens: Vec<usize>,
    names: Vec<String>,
) -> Result<Group, GroupError> {
    assert_eq!(gens.len(), names.len());
    let inner: &FiniteGroup = g;
    let mut fresh = inner.clone();
    for &x in &gens {
        if x >= fresh.order {
            return Err(GroupError::ElementOutOfRange { index: x, order: fresh.order });
        }
    }
    fresh.gens = gens;
    fresh.gen_names = names;
    Ok(Arc::new(fresh))
}

/// Direct product with index `(a, b) ↦ a·|B| + b` and labels `(la,lb)`.
/// Distinguished generators are the embedded generators of both factors.
pub fn direct_product(a: &Group, b: &Group) -> Result<Group, GroupError> {
    let (na, nb) = (a.order(), b.order());
    let n = na * nb;
    if n > MAX_ORDER {
        return Err(GroupError::OrderBound { order: n, bound: MAX_ORDER });
    }
    let mut table = vec![0usize; n * n];
    for x1 in 0..na {
        for x2 in 0..nb {
            let x = x1 * nb + x2;
            for y1 in 0..na {
                for y2 in 0..nb {
                    table[x * n + y1 * nb + y2] = a.mul(x1, y1) * nb + b.mul(x2, y2);
                }
            }
        }
    }
    let labels: Vec<String> = (0..n)
        .map(|x| format!("({},{})", a.label(x / nb), b.label(x % nb)))
        .collect();
    let mut gens: Vec<usize> = a.generators().iter().map(|&g| g * nb).collect();
    gens.extend(b.generators().iter().map(|&g| g));
    let names: Vec<String> = Vec::new();
    FiniteGroup::from_parts(n, table, Some(labels), gens, names)
}
