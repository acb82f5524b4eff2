//! Search for the colour-preserving / colour-permuting maps of a connected
//! Cayley graph that fix the identity vertex.
//!
//! Every such map is determined by propagating images outward from the
//! identity: once `φ(v)` is known, the two neighbours `vs` and `vs⁻¹` along
//! a colour class `{s, s⁻¹}` must map onto the two neighbours of `φ(v)`
//! along the image class `{t, t⁻¹}`, i.e. `φ(vs) = φ(v)·t^ε` and
//! `φ(vs⁻¹) = φ(v)·t^{-ε}` for a single sign `ε`. The search branches on
//! that sign (and, in permuting mode, on the image class the first time a
//! class is used) and prunes through an injectivity table.
//!
//! Solutions are emitted in depth-first discovery order, which is
//! deterministic: vertices are processed in assignment order starting from
//! the identity, classes in ascending order of their representative, image
//! class candidates in ascending order, and the positive sign (mapping
//! `vs` to `φ(v)·t` with `t` the class representative) before the negative
//! one. Each emitted map is re-verified by an independent checker.

use crate::cayley::CayleyGraph;
use crate::group::{is_automorphism, VertexMap};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Maps that fix every colour class.
    Preserving,
    /// Maps that permute the colour classes.
    Permuting,
}

/// Solution caps; a search that hits its cap reports `complete = false`.
/// The permuting cap is larger because colour-permuting stabilizers can be
/// as large as the full automorphism group (20160 for the complete graph
/// on the rank-4 elementary abelian 2-group).
pub const PRESERVING_SOLUTION_CAP: usize = 1 << 14;
pub const PERMUTING_SOLUTION_CAP: usize = 1 << 18;

#[derive(Debug, Clone, Copy)]
pub struct StabilizerOptions {
    pub mode: Mode,
    pub cap: usize,
    /// Abort as soon as a solution fails to be a group automorphism.
    pub stop_on_non_automorphism: bool,
}

impl StabilizerOptions {
    pub fn preserving() -> Self {
        StabilizerOptions {
            mode: Mode::Preserving,
            cap: PRESERVING_SOLUTION_CAP,
            stop_on_non_automorphism: false,
        }
    }

    pub fn permuting() -> Self {
        StabilizerOptions {
            mode: Mode::Permuting,
            cap: PERMUTING_SOLUTION_CAP,
            stop_on_non_automorphism: false,
        }
    }

    pub fn for_mode(mode: Mode) -> Self {
        match mode {
            Mode::Preserving => Self::preserving(),
            Mode::Permuting => Self::permuting(),
        }
    }
}

/// The permutation a colour-permuting map induces on the connection set:
/// `class_image[c]` is the image class of class `c`, and `elem_image`
/// lists `(s, π(s))` for every connection element in ascending order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColourPermutation {
    pub class_image: Vec<usize>,
    pub elem_image: Vec<(usize, usize)>,
}

#[derive(Debug)]
pub struct StabilizerReport {
    pub mode: Mode,
    /// All solutions found, in discovery order; every map fixes the
    /// identity vertex.
    pub maps: Vec<VertexMap>,
    /// False when the search aborted early (cap or counterexample stop).
    pub complete: bool,
    pub all_automorphisms: bool,
    /// The first solution in discovery order that is not a group
    /// automorphism, if any was seen.
    pub counterexample: Option<VertexMap>,
}

impl StabilizerReport {
    pub fn size(&self) -> usize {
        self.maps.len()
    }
}

/// Interned signatures of the two-colour subgraphs: entry `a*k + b` encodes
/// the sorted component sizes of the graph restricted to colours `a` and
/// `b`. A colour-permuting map restricted to two colours is an isomorphism
/// onto the image colours' subgraph, so a class permutation can only send
/// the pair `(a, b)` to a pair with the same signature. Equal signatures
/// share an id, so entries compare with `==`.
fn pair_signatures(graph: &CayleyGraph) -> Vec<u32> {
    let n = graph.order();
    let k = graph.classes().len();
    let g = graph.group();
    let mut dict: Vec<Vec<usize>> = Vec::new();
    let mut sig = vec![0u32; k * k];
    for a in 0..k {
        for b in a..k {
            let ca = graph.classes()[a];
            let cb = graph.classes()[b];
            let steps = [ca.rep, ca.inv, cb.rep, cb.inv];
            let mut seen = vec![false; n];
            let mut sizes = Vec::new();
            for start in 0..n {
                if seen[start] {
                    continue;
                }
                seen[start] = true;
                let mut stack = vec![start];
                let mut size = 0usize;
                while let Some(v) = stack.pop() {
                    size += 1;
                    for &s in &steps {
                        let w = g.mul(v, s);
                        if !seen[w] {
                            seen[w] = true;
                            stack.push(w);
                        }
                    }
                }
                sizes.push(size);
            }
            sizes.sort_unstable();
            let id = dict.iter().position(|d| *d == sizes).unwrap_or_else(|| {
                dict.push(sizes.clone());
                dict.len() - 1
            }) as u32;
            sig[a * k + b] = id;
            sig[b * k + a] = id;
        }
    }
    sig
}

/// All colour-preserving (or colour-permuting) maps fixing the identity.
pub fn stabilizer(graph: &CayleyGraph, opts: &StabilizerOptions) -> StabilizerReport {
    let n = graph.order();
    let k = graph.classes().len();
    let mut search = Search {
        graph,
        opts: *opts,
        phi: vec![usize::MAX; n],
        rev: vec![usize::MAX; n],
        queue: Vec::with_capacity(n),
        pi: match opts.mode {
            Mode::Preserving => (0..k).collect(),
            Mode::Permuting => vec![usize::MAX; k],
        },
        pi_rev: match opts.mode {
            Mode::Preserving => (0..k).collect(),
            Mode::Permuting => vec![usize::MAX; k],
        },
        pair_sig: match opts.mode {
            Mode::Preserving => Vec::new(),
            Mode::Permuting => pair_signatures(graph),
        },
        processed: vec![false; n * k],
        processed_count: 0,
        maps: Vec::new(),
        counterexample: None,
        aborted: false,
    };
    search.phi[0] = 0;
    search.rev[0] = 0;
    search.queue.push(0);
    search.run(0, 0, false);
    let complete = !search.aborted;
    let all_automorphisms = search.counterexample.is_none();
    StabilizerReport {
        mode: opts.mode,
        maps: search.maps,
        complete,
        all_automorphisms,
        counterexample: search.counterexample,
    }
}

struct Search<'a> {
    graph: &'a CayleyGraph,
    opts: StabilizerOptions,
    phi: Vec<usize>,
    rev: Vec<usize>,
    /// Vertices in assignment order; `phi` is set exactly on its entries.
    queue: Vec<usize>,
    pi: Vec<usize>,
    pi_rev: Vec<usize>,
    /// Two-colour subgraph signatures (permuting mode only, else empty).
    pair_sig: Vec<u32>,
    /// `vertex * k + class`: pairs already handled on the current path.
    processed: Vec<bool>,
    processed_count: usize,
    maps: Vec<VertexMap>,
    counterexample: Option<VertexMap>,
    aborted: bool,
}

impl Search<'_> {
    /// Sweeps the (vertex, class) pairs in queue order starting at
    /// `(vpos, ci)`. A pair is handled at first contact when its image
    /// class is already fixed, or is forced by a placed neighbour image;
    /// otherwise it is skipped for now. A sweep that handled something
    /// restarts from the front (skipped pairs may have become decidable);
    /// a sweep that got stuck branches the first skipped pair over the
    /// unused image classes in ascending order. Deferral only reorders
    /// decisions: every pair is handled exactly once on each root-to-leaf
    /// path, so the leaves are exactly the consistent maps. In preserving
    /// mode no pair is ever skipped and the sweep is the plain nested loop
    /// over the queue and the classes.
    fn run(&mut self, vpos: usize, ci: usize, progressed: bool) {
        if self.aborted {
            return;
        }
        let g = self.graph.group().clone();
        let k = self.graph.classes().len();
        let (mut vpos, mut ci) = (vpos, ci);
        while vpos < self.queue.len() {
            if ci == k {
                vpos += 1;
                ci = 0;
                continue;
            }
            let v = self.queue[vpos];
            if self.processed[v * k + ci] {
                ci += 1;
                continue;
            }
            let class = self.graph.classes()[ci];
            let u = g.mul(v, class.rep);
            let u2 = g.mul(v, class.inv);
            let fv = self.phi[v];
            if self.pi[ci] != usize::MAX {
                let d = self.pi[ci];
                self.handle(vpos, ci, d, u, u2, fv);
                return;
            }
            // Unknown image class, forced as soon as a neighbour image is
            // placed.
            let known = if self.phi[u] != usize::MAX {
                self.phi[u]
            } else if self.phi[u2] != usize::MAX {
                self.phi[u2]
            } else {
                ci += 1;
                continue;
            };
            let t = g.mul(g.inv(fv), known);
            if let Some(d) = self.graph.class_of(t) {
                self.with_pi(ci, d, |s| s.handle(vpos, ci, d, u, u2, fv));
            }
            return;
        }
        if self.processed_count == self.queue.len() * k {
            // Every placed vertex has every class handled, so all
            // neighbours are placed too; the set generates, hence the map
            // is total.
            debug_assert_eq!(self.queue.len(), self.graph.order());
            self.emit();
            return;
        }
        if progressed {
            self.run(0, 0, false);
            return;
        }
        // Stuck: every remaining pair leads to unplaced vertices through an
        // undecided class. Branch the first one.
        let (bvpos, bci) = self
            .first_unhandled(k)
            .expect("counted unhandled pairs above");
        let v = self.queue[bvpos];
        let class = self.graph.classes()[bci];
        let u = g.mul(v, class.rep);
        let u2 = g.mul(v, class.inv);
        let fv = self.phi[v];
        for d in 0..k {
            if self.aborted {
                return;
            }
            if self.pi_rev[d] == usize::MAX {
                self.with_pi(bci, d, |s| s.handle(bvpos, bci, d, u, u2, fv));
            }
        }
    }

    fn first_unhandled(&self, k: usize) -> Option<(usize, usize)> {
        for vpos in 0..self.queue.len() {
            let v = self.queue[vpos];
            for ci in 0..k {
                if !self.processed[v * k + ci] {
                    return Some((vpos, ci));
                }
            }
        }
        None
    }

    /// Runs `body` with `π(ci) = d` recorded, undoing it afterwards.
    fn with_pi(&mut self, ci: usize, d: usize, body: impl FnOnce(&mut Self)) {
        let cs = self.graph.classes();
        if cs[ci].involution != cs[d].involution
            || self.graph.group().elem_order(cs[ci].rep) != self.graph.group().elem_order(cs[d].rep)
        {
            return;
        }
        debug_assert_eq!(self.pi[ci], usize::MAX);
        if self.pi_rev[d] != usize::MAX {
            return;
        }
        // The two-colour subgraphs on {ci, cj} and {d, π(cj)} must be
        // isomorphic for every class whose image is already fixed. This
        // rejects class images no colour-permuting map can achieve, long
        // before vertex propagation would notice.
        let k = cs.len();
        if self.pair_sig[ci * k + ci] != self.pair_sig[d * k + d] {
            return;
        }
        for cj in 0..k {
            let dj = self.pi[cj];
            if dj != usize::MAX && self.pair_sig[ci * k + cj] != self.pair_sig[d * k + dj] {
                return;
            }
        }
        self.pi[ci] = d;
        self.pi_rev[d] = ci;
        body(self);
        self.pi[ci] = usize::MAX;
        self.pi_rev[d] = usize::MAX;
    }

    /// Marks `(v, class ci) ↦ class d` handled, branches on the sign, and
    /// continues the sweep behind the pair.
    fn handle(&mut self, vpos: usize, ci: usize, d: usize, u: usize, u2: usize, fv: usize) {
        let g = self.graph.group().clone();
        let k = self.graph.classes().len();
        let id = self.queue[vpos] * k + ci;
        debug_assert!(!self.processed[id]);
        self.processed[id] = true;
        self.processed_count += 1;
        let img = self.graph.classes()[d];
        let signs: &[(usize, usize)] =
            if img.involution { &[(img.rep, img.rep)] } else { &[(img.rep, img.inv), (img.inv, img.rep)] };
        for &(ta, tb) in signs {
            if self.aborted {
                break;
            }
            let mark = self.queue.len();
            if self.assign(u, g.mul(fv, ta)) && self.assign(u2, g.mul(fv, tb)) {
                self.run(vpos, ci + 1, true);
            }
            while self.queue.len() > mark {
                let x = self.queue.pop().unwrap();
                self.rev[self.phi[x]] = usize::MAX;
                self.phi[x] = usize::MAX;
            }
        }
        self.processed[id] = false;
        self.processed_count -= 1;
    }

    fn assign(&mut self, x: usize, y: usize) -> bool {
        if self.phi[x] != usize::MAX {
            return self.phi[x] == y;
        }
        if self.rev[y] != usize::MAX {
            return false;
        }
        self.phi[x] = y;
        self.rev[y] = x;
        self.queue.push(x);
        self.consistent_with_assigned(x, y)
    }

    /// Checks every edge from `x` to an already-placed neighbour whose colour
    /// image is determined. This only prunes: each such edge is re-examined
    /// when its own (vertex, class) pair is processed, so skipping a colour
    /// whose image is still open never admits a bad leaf. Without this check
    /// the choices made at the identity vertex (one per colour class) face no
    /// constraint until the second vertex is reached, which is ruinous on
    /// dense graphs.
    fn consistent_with_assigned(&self, x: usize, y: usize) -> bool {
        let g = self.graph.group();
        for &s in self.graph.set().members() {
            let w = g.mul(x, s);
            let fw = self.phi[w];
            if fw == usize::MAX {
                continue;
            }
            let c = self.graph.class_of(s).expect("connection element");
            let d = match self.opts.mode {
                Mode::Preserving => c,
                Mode::Permuting => self.pi[c],
            };
            if d == usize::MAX {
                continue;
            }
            if self.graph.class_of(g.mul(g.inv(y), fw)) != Some(d) {
                return false;
            }
        }
        true
    }

    fn emit(&mut self) {
        let map = VertexMap::new(self.graph.group(), self.phi.clone())
            .expect("propagation maintains a bijection");
        // Re-verify against the definition, independently of the search
        // bookkeeping.
        let valid = match self.opts.mode {
            Mode::Preserving => check_colour_preserving(self.graph, &map),
            Mode::Permuting => colour_permutation(self.graph, &map).is_some(),
        };
        assert!(valid, "engine invariant: emitted map failed independent re-verification");
        if self.counterexample.is_none() && !is_automorphism(&map) {
            self.counterexample = Some(map.clone());
            if self.opts.stop_on_non_automorphism {
                self.aborted = true;
            }
        }
        self.maps.push(map);
        if self.maps.len() >= self.opts.cap && !self.aborted {
            self.aborted = true;
        }
    }
}

/// Definition check: `φ(v)⁻¹·φ(vs)` lies in the same colour class as `s`
/// for every vertex and connection element.
pub fn check_colour_preserving(graph: &CayleyGraph, f: &VertexMap) -> bool {
    let g = graph.group();
    for v in 0..graph.order() {
        let fv_inv = g.inv(f.apply(v));
        for &s in graph.set().members() {
            let t = g.mul(fv_inv, f.apply(g.mul(v, s)));
            if graph.class_of(t) != graph.class_of(s) {
                return false;
            }
        }
    }
    true
}

/// Definition check for colour-permuting maps: every edge colour must map
/// through one globally consistent permutation of the colour classes.
/// Returns the induced permutation, or `None` when `f` is not
/// colour-permuting.
pub fn colour_permutation(graph: &CayleyGraph, f: &VertexMap) -> Option<ColourPermutation> {
    let g = graph.group();
    let k = graph.classes().len();
    let mut class_image = vec![usize::MAX; k];
    let mut class_rev = vec![usize::MAX; k];
    for v in 0..graph.order() {
        let fv_inv = g.inv(f.apply(v));
        for &s in graph.set().members() {
            let t = g.mul(fv_inv, f.apply(g.mul(v, s)));
            let c = graph.class_of(s).expect("connection element");
            let d = graph.class_of(t)?;
            if class_image[c] == usize::MAX {
                if class_rev[d] != usize::MAX {
                    return None;
                }
                class_image[c] = d;
                class_rev[d] = c;
            } else if class_image[c] != d {
                return None;
            }
        }
    }
    // π on elements, read off the edges at the image of the identity.
    let fe_inv = g.inv(f.apply(0));
    let elem_image = graph
        .set()
        .members()
        .iter()
        .map(|&s| (s, g.mul(fe_inv, f.apply(s))))
        .collect();
    Some(ColourPermutation { class_image, elem_image })
}

/// Exhaustive stabilizer over all vertex permutations fixing the identity,
/// in lexicographic order. Cross-check oracle for tiny graphs.
pub fn brute_force_stabilizer(graph: &CayleyGraph, mode: Mode) -> Vec<VertexMap> {
    let n = graph.order();
    assert!(n <= 10, "brute-force stabilizer is for cross-checking tiny graphs");
    let mut out = Vec::new();
    let mut image = vec![0usize];
    let mut used = vec![false; n];
    used[0] = true;
    fn go(
        graph: &CayleyGraph,
        mode: Mode,
        image: &mut Vec<usize>,
        used: &mut Vec<bool>,
        out: &mut Vec<VertexMap>,
    ) {
        let n = graph.order();
        if image.len() == n {
            let f = VertexMap::new(graph.group(), image.clone()).unwrap();
            let keep = match mode {
                Mode::Preserving => check_colour_preserving(graph, &f),
                Mode::Permuting => colour_permutation(graph, &f).is_some(),
            };
            if keep {
                out.push(f);
            }
            return;
        }
        for y in 1..n {
            if !used[y] {
                used[y] = true;
                image.push(y);
                go(graph, mode, image, used, out);
                image.pop();
                used[y] = false;
            }
        }
    }
    go(graph, mode, &mut image, &mut used, &mut out);
    out
}

/// Outcome of checking one graph.
#[derive(Debug, Clone)]
pub struct GraphVerdict {
    /// True when every solution is a group automorphism (equivalently,
    /// every colour-preserving/permuting graph automorphism is affine).
    pub holds: bool,
    /// Solutions seen; the full stabilizer size when `complete`.
    pub stabilizer_size: usize,
    pub complete: bool,
    /// True when the first pass hit the solution cap and the verdict
    /// needed an uncapped rerun.
    pub capped_rerun: bool,
    /// First non-automorphism in discovery order, fixing the identity.
    pub witness: Option<VertexMap>,
}

/// Is every colour-preserving automorphism of this graph affine?
pub fn graph_is_cca(graph: &CayleyGraph) -> GraphVerdict {
    graph_verdict(graph, Mode::Preserving, None)
}

/// Is every colour-permuting automorphism of this graph affine?
pub fn graph_is_strongly_cca(graph: &CayleyGraph) -> GraphVerdict {
    graph_verdict(graph, Mode::Permuting, None)
}

pub(crate) fn graph_verdict(
    graph: &CayleyGraph,
    mode: Mode,
    cap: Option<usize>,
) -> GraphVerdict {
    let mut opts = StabilizerOptions::for_mode(mode);
    if let Some(c) = cap {
        opts.cap = c;
    }
    opts.stop_on_non_automorphism = true;
    let mut report = stabilizer(graph, &opts);
    let mut capped_rerun = false;
    if !report.complete && report.counterexample.is_none() {
        // Hit the solution cap with every map affine so far; rerun without
        // the cap so the verdict stays certified.
        capped_rerun = true;
        opts.cap = usize::MAX;
        report = stabilizer(graph, &opts);
    }
    GraphVerdict {
        holds: report.counterexample.is_none(),
        stabilizer_size: report.size(),
        complete: report.complete,
        capped_rerun,
        witness: report.counterexample,
    }
}
