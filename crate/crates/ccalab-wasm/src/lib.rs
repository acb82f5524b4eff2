//! Browser bindings: small JSON-in/JSON-out wrappers around the engine for
//! the static demo page in `www/`. Everything here is synchronous and
//! single-threaded; the census (the one parallel code path in the library)
//! is deliberately not exposed.
//!
//! The `*_impl` functions carry the logic and run under native unit tests;
//! the `#[wasm_bindgen]` exports only translate errors, since `JsError`
//! cannot be constructed off-target.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ccalab::cayley::{CayleyGraph, ConnectionSet};
use ccalab::decide::{decide, Property, ReductionFlags};
use ccalab::engine::Mode;
use ccalab::families::{self, GroupRecipe};
use ccalab::group::VertexMap;
use ccalab::witnesses;

/// Decides one property for the group named by `recipe` (order ≤ 31).
/// Returns a JSON verdict; a failing verdict carries the witness.
#[wasm_bindgen]
pub fn check_group(recipe: &str, strong: bool) -> Result<String, JsError> {
    check_group_impl(recipe, strong).map_err(|e| JsError::new(&e))
}

/// Emits a verified non-affine witness for the recipe: a built-in
/// construction when one matches the recipe's shape, otherwise the first
/// witness the engine finds (order ≤ 31).
#[wasm_bindgen]
pub fn witness_json(recipe: &str) -> Result<String, JsError> {
    witness_impl(recipe).map_err(|e| JsError::new(&e))
}

/// Builds the coloured Cayley graph on the inverse closure of the given
/// comma-separated generator words and returns its JSON edge list
/// (vertices, colour classes, undirected edges).
#[wasm_bindgen]
pub fn graph_json(recipe: &str, set_words: &str) -> Result<String, JsError> {
    graph_impl(recipe, set_words).map(|g| g.to_edge_list_json()).map_err(|e| JsError::new(&e))
}

/// The same graph as Graphviz DOT text, for copy and paste.
#[wasm_bindgen]
pub fn graph_dot(recipe: &str, set_words: &str) -> Result<String, JsError> {
    graph_impl(recipe, set_words).map(|g| g.to_dot()).map_err(|e| JsError::new(&e))
}

/// The built-in catalogue as JSON rows `{order, gap_index, name, recipe}`,
/// for populating the demo's group picker.
#[wasm_bindgen]
pub fn catalogue_json() -> String {
    #[derive(Serialize)]
    struct Row {
        order: usize,
        gap_index: usize,
        name: &'static str,
        recipe: String,
    }
    let rows: Vec<Row> = families::catalogue_up_to(31)
        .into_iter()
        .map(|e| Row {
            order: e.gap.0,
            gap_index: e.gap.1,
            name: e.name,
            recipe: e.recipe.to_string(),
        })
        .collect();
    serde_json::to_string(&rows).expect("catalogue serializes")
}

fn parse(recipe: &str) -> Result<GroupRecipe, String> {
    recipe.parse::<GroupRecipe>().map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct VerdictOut {
    recipe: String,
    order: usize,
    property: &'static str,
    holds: bool,
    sets_examined: usize,
    witness: Option<WitnessOut>,
}

#[derive(Serialize)]
struct WitnessOut {
    set: Vec<String>,
    map: VertexMap,
    mode: &'static str,
}

fn check_group_impl(recipe: &str, strong: bool) -> Result<String, String> {
    let parsed = parse(recipe)?;
    let group = families::evaluate(&parsed).map_err(|e| e.to_string())?;
    let property = if strong { Property::StronglyCca } else { Property::Cca };
    let (verdict, _) =
        decide(&group, property, ReductionFlags::default()).map_err(|e| e.to_string())?;
    let witness = verdict.witness.map(|w| WitnessOut {
        set: w.set.iter().map(|&s| group.label(s)).collect(),
        mode: match w.mode {
            Mode::Preserving => "preserving",
            Mode::Permuting => "permuting",
        },
        map: w.map,
    });
    let out = VerdictOut {
        recipe: parsed.to_string(),
        order: group.order(),
        property: if strong { "strongly CCA" } else { "CCA" },
        holds: verdict.holds,
        sets_examined: verdict.sets_examined,
        witness,
    };
    serde_json::to_string_pretty(&out).map_err(|e| e.to_string())
}

fn witness_impl(recipe: &str) -> Result<String, String> {
    let parsed = parse(recipe)?;
    if let Some(built) = witnesses::for_recipe(&parsed) {
        return Ok(built.map_err(|e| e.to_string())?.to_json());
    }
    let group = families::evaluate(&parsed).map_err(|e| e.to_string())?;
    let (verdict, _) =
        decide(&group, Property::Cca, ReductionFlags::default()).map_err(|e| e.to_string())?;
    let w = verdict
        .witness
        .ok_or_else(|| format!("`{parsed}` satisfies the colour-preserving property"))?;
    let set = ConnectionSet::new(&group, &w.set).map_err(|e| e.to_string())?;
    let package = witnesses::verified(set, w.map, w.mode, "engine", Some(parsed.to_string()))
        .map_err(|e| e.to_string())?;
    Ok(package.to_json())
}

fn graph_impl(recipe: &str, set_words: &str) -> Result<CayleyGraph, String> {
    let parsed = parse(recipe)?;
    let group = families::evaluate(&parsed).map_err(|e| e.to_string())?;
    let words: Vec<&str> = set_words.split(',').map(str::trim).collect();
    let set =
        ConnectionSet::inverse_closed_from_words(&group, &words).map_err(|e| e.to_string())?;
    CayleyGraph::build(&set).map_err(|e| e.to_string())
}
