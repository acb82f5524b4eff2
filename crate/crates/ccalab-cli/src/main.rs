//! Command-line front end: census over the built-in catalogue, single-group
//! checks, constructive witness export, and catalogue listing.
//!
//! Exit status reports whether the *command* ran to completion; a "does not
//! hold" verdict is still a successful run. All configuration is flags; the
//! one environment variable, `CCALAB_CACHE`, is a fallback for `--cache`.

mod cache;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use ccalab::cayley::{CayleyGraph, ConnectionSet};
use ccalab::decide::{decide, CcaVerdict, Property, ReductionFlags};
use ccalab::engine::{graph_is_cca, graph_is_strongly_cca};
use ccalab::families::{self, GroupRecipe};
use ccalab::group::Group;
use ccalab::witnesses::{self, WitnessPackage};

use cache::{Cache, CachedRow};
use report::{ReportDocument, ReportRow};

#[derive(Parser)]
#[command(
    name = "ccalab",
    version,
    about = "Decide whether colour-respecting Cayley graph symmetries are all affine"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide both properties for every catalogued group up to an order.
    Census {
        /// Largest group order to include (catalogue covers 1..=31).
        #[arg(long, default_value_t = 31)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        /// Verdict cache file; rows found there are not recomputed.
        #[arg(long, env = "CCALAB_CACHE")]
        cache: Option<PathBuf>,
        /// Worker threads for the sweep (default: all cores).
        #[arg(long)]
        jobs: Option<usize>,
        /// Examine every generating set instead of one per Aut(G)-orbit.
        #[arg(long)]
        no_dedup: bool,
        /// Keep colour classes of non-prime-power order in the search
        /// universe instead of discarding them.
        #[arg(long)]
        no_prime_power: bool,
    },
    /// Decide one group given as a recipe, e.g. "GAP(16,6)" or "Dih(12)".
    Check {
        recipe: String,
        /// Colour-preserving property (the default).
        #[arg(long, conflicts_with = "strong")]
        cca: bool,
        /// Colour-permuting property.
        #[arg(long)]
        strong: bool,
        /// Comma-separated generator words; checks only the Cayley graph on
        /// the inverse closure of these elements (works past the census
        /// order bound).
        #[arg(long)]
        set: Option<String>,
        /// Emit a verified non-affine witness for this recipe as JSON
        /// instead of a verdict.
        #[arg(long, conflicts_with = "set")]
        witness: bool,
    },
    /// Emit a verified witness package as JSON.
    Witness {
        #[command(subcommand)]
        kind: WitnessCmd,
    },
    /// List the built-in group catalogue.
    Catalogue {
        #[arg(long, default_value_t = 31)]
        max_order: usize,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
    },
}

#[derive(Subcommand)]
enum WitnessCmd {
    /// The piecewise map on the nonabelian group of order 21.
    Order21,
    /// First-coordinate negation on the wreath product Zm wr Zn.
    Wreath {
        #[arg(long)]
        base: usize,
        #[arg(long)]
        copies: usize,
    },
    /// Coset reflection built from a connection set S, a subset T whose
    /// squares equal a non-central involution tau, with tau inverting or
    /// centralizing all of S. Invalid parameters name the failed hypothesis.
    Structure {
        /// Catalogue id of the ambient group, e.g. "24,12".
        #[arg(long)]
        gap: String,
        /// Comma-separated words for S (inverse closure is taken).
        #[arg(long)]
        set: String,
        /// Comma-separated words for T.
        #[arg(long)]
        t: String,
        /// Word for the involution tau.
        #[arg(long)]
        tau: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}

fn run(cmd: Cmd) -> Result<(), String> {
    match cmd {
        Cmd::Census { max_order, format, cache, jobs, no_dedup, no_prime_power } => {
            if let Some(n) = jobs {
                // Ignore the error when a pool already exists (tests drive
                // this path repeatedly in one process).
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            let flags = ReductionFlags {
                prime_power_only: !no_prime_power,
                aut_orbit_dedup: !no_dedup,
            };
            let doc = census_document(max_order, flags, cache.as_deref())?;
            print!("{}", render_census(&doc, format));
            Ok(())
        }
        Cmd::Check { recipe, cca, strong, set, witness } => {
            let _ = cca;
            let parsed: GroupRecipe = recipe.parse().map_err(|e| format!("{e}"))?;
            let group = families::evaluate(&parsed).map_err(|e| format!("{e}"))?;
            let property = if strong { Property::StronglyCca } else { Property::Cca };
            if witness {
                let package = constructive_witness(&parsed)?;
                println!("{}", package.to_json());
            } else if let Some(words) = set {
                check_one_set(&group, &recipe, &words, property)?;
            } else {
                check_group(&group, &recipe, property)?;
            }
            Ok(())
        }
        Cmd::Witness { kind } => {
            let package = match kind {
                WitnessCmd::Order21 => witnesses::witness_order21(),
                WitnessCmd::Wreath { base, copies } => {
                    witnesses::witness_wreath(base, copies).map_err(|e| format!("{e}"))?
                }
                WitnessCmd::Structure { gap, set, t, tau } => {
                    structure_witness(&gap, &set, &t, &tau)?
                }
            };
            println!("{}", package.to_json());
            Ok(())
        }
        Cmd::Catalogue { max_order, format } => {
            let entries = families::catalogue_up_to(max_order);
            let text = match format {
                Format::Json => report::catalogue_json(&entries, max_order),
                Format::Csv => report::catalogue_csv(&entries),
                Format::Markdown => report::catalogue_markdown(&entries, max_order),
            };
            print!("{text}");
            Ok(())
        }
    }
}

fn render_census(doc: &ReportDocument, format: Format) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Csv => doc.to_csv(),
        Format::Markdown => doc.to_markdown(),
    }
}

/// Runs (or replays from cache) the census and assembles the document.
/// Timing is wall-clock per group, both properties together; cache hits
/// reuse the recorded timing so replayed documents match the originals.
fn census_document(
    max_order: usize,
    flags: ReductionFlags,
    cache_path: Option<&std::path::Path>,
) -> Result<ReportDocument, String> {
    let cache = match cache_path {
        Some(p) => Cache::load(p),
        None => Cache::default(),
    };
    let entries = families::catalogue_up_to(max_order);
    let computed: Vec<Result<(String, CachedRow, ReportRow), String>> = entries
        .par_iter()
        .map(|e| {
            let key = cache::key(e.gap, flags);
            let cached = match cache.get(&key) {
                Some(hit) => hit.clone(),
                None => {
                    let group =
                        families::evaluate(&e.recipe).map_err(|err| format!("{err}"))?;
                    let start = Instant::now();
                    let (v_cca, _) =
                        decide(&group, Property::Cca, flags).map_err(|err| format!("{err}"))?;
                    let (v_strong, _) = decide(&group, Property::StronglyCca, flags)
                        .map_err(|err| format!("{err}"))?;
                    CachedRow {
                        cca: v_cca.holds,
                        strongly_cca: v_strong.holds,
                        cca_sets_examined: v_cca.sets_examined,
                        strong_sets_examined: v_strong.sets_examined,
                        timing_ms: start.elapsed().as_millis() as u64,
                    }
                }
            };
            let row = ReportRow {
                order: e.gap.0,
                gap_index: e.gap.1,
                name: e.name.to_string(),
                recipe: e.recipe.to_string(),
                tags: e.tags.iter().map(|t| t.to_string()).collect(),
                cca: cached.cca,
                strongly_cca: cached.strongly_cca,
                cca_sets_examined: cached.cca_sets_examined,
                strong_sets_examined: cached.strong_sets_examined,
                timing_ms: cached.timing_ms,
            };
            Ok((key, cached, row))
        })
        .collect();

    let mut cache = cache;
    let mut rows = Vec::with_capacity(computed.len());
    for item in computed {
        let (key, cached, row) = item?;
        cache.insert(key, cached);
        rows.push(row);
    }
    rows.sort_by_key(|r| (r.order, r.gap_index));
    if let Some(p) = cache_path {
        cache.save(p).map_err(|e| format!("cannot write cache {}: {e}", p.display()))?;
    }
    Ok(ReportDocument {
        engine_version: ccalab::ENGINE_VERSION.to_string(),
        max_order,
        reductions: flags,
        rows,
    })
}

fn property_name(p: Property) -> &'static str {
    match p {
        Property::Cca => "CCA",
        Property::StronglyCca => "strongly CCA",
    }
}

fn check_group(group: &Group, recipe: &str, property: Property) -> Result<(), String> {
    let (verdict, _) = decide(group, property, ReductionFlags::default())
        .map_err(|e| format!("{e}"))?;
    println!("group: {recipe} (order {})", group.order());
    println!("property: {}", property_name(property));
    println!("sets examined: {}", verdict.sets_examined);
    print_verdict(group, &verdict);
    Ok(())
}

fn print_verdict(group: &Group, verdict: &CcaVerdict) {
    if verdict.holds {
        println!("verdict: holds");
    } else {
        println!("verdict: does not hold");
        if let Some(w) = &verdict.witness {
            let labels: Vec<String> = w.set.iter().map(|&s| group.label(s)).collect();
            println!("witness set: {{{}}}", labels.join(", "));
            println!(
                "witness map: {}",
                serde_json::to_string(&w.map).expect("map serializes")
            );
        }
    }
}

fn check_one_set(
    group: &Group,
    recipe: &str,
    words: &str,
    property: Property,
) -> Result<(), String> {
    let parts: Vec<&str> = words.split(',').map(str::trim).collect();
    let set = ConnectionSet::inverse_closed_from_words(group, &parts)
        .map_err(|e| format!("{e}"))?;
    let graph = CayleyGraph::build(&set).map_err(|e| format!("{e}"))?;
    let verdict = match property {
        Property::Cca => graph_is_cca(&graph),
        Property::StronglyCca => graph_is_strongly_cca(&graph),
    };
    let labels: Vec<String> = set.members().iter().map(|&s| group.label(s)).collect();
    println!("group: {recipe} (order {})", group.order());
    println!("set: {{{}}}", labels.join(", "));
    println!("property: {} (this connection set only)", property_name(property));
    println!(
        "verdict: {} (stabilizer size {}, {})",
        if verdict.holds { "holds" } else { "does not hold" },
        verdict.stabilizer_size,
        if verdict.complete { "complete" } else { "stopped at first counterexample" }
    );
    if let Some(w) = &verdict.witness {
        println!(
            "witness map: {}",
            serde_json::to_string(&w).expect("map serializes")
        );
    }
    Ok(())
}

/// Builds the known constructive witness for a recipe, falling back to an
/// engine search (census order bound applies) when no construction matches.
fn constructive_witness(recipe: &GroupRecipe) -> Result<WitnessPackage, String> {
    if let Some(built) = witnesses::for_recipe(recipe) {
        return built.map_err(|e| format!("{e}"));
    }
    let group = families::evaluate(recipe).map_err(|e| format!("{e}"))?;
    let (verdict, _) =
        decide(&group, Property::Cca, ReductionFlags::default()).map_err(|e| format!("{e}"))?;
    match verdict.witness {
        Some(w) => {
            let set = ConnectionSet::new(&group, &w.set).map_err(|e| format!("{e}"))?;
            witnesses::verified(set, w.map, w.mode, "engine", Some(recipe.to_string()))
                .map_err(|e| format!("{e}"))
        }
        None => Err(format!(
            "no non-affine witness: `{recipe}` satisfies the colour-preserving property"
        )),
    }
}

fn structure_witness(
    gap: &str,
    set_words: &str,
    t_words: &str,
    tau_word: &str,
) -> Result<WitnessPackage, String> {
    let (n, k) = gap
        .split_once(',')
        .and_then(|(a, b)| Some((a.trim().parse().ok()?, b.trim().parse().ok()?)))
        .ok_or_else(|| format!("--gap wants \"order,index\", got `{gap}`"))?;
    let entry = families::catalogue(n)
        .into_iter()
        .find(|e| e.gap == (n, k))
        .ok_or_else(|| format!("no catalogue entry ({n},{k})"))?;
    let group = families::evaluate(&entry.recipe).map_err(|e| format!("{e}"))?;
    let eval_all = |words: &str| -> Result<Vec<usize>, String> {
        words
            .split(',')
            .map(|w| group.eval_word(w.trim()).map_err(|e| format!("{e}")))
            .collect()
    };
    let mut s = eval_all(set_words)?;
    for x in s.clone() {
        s.push(group.inv(x));
    }
    let t = eval_all(t_words)?;
    let tau = group.eval_word(tau_word.trim()).map_err(|e| format!("{e}"))?;
    witnesses::witness_structure(&group, &s, &t, tau).map_err(|e| format!("{e}"))
}
