//! Browser bindings for the demo page in `www/`. Each export takes and
//! returns strings so the page needs no generated glue beyond wasm-bindgen's.

use serde_json::{json, Value};
use surface_cyclic::dataset::{validate, RawDataSet};
use surface_cyclic::fatgraph::cyclic_generator;
use surface_cyclic::hyperbolic::{pairing_word, polygon_spec, solve_metrics};
use surface_cyclic::svg::render_svg;
use surface_cyclic::{decompose, DataSet, FatGraph};
use wasm_bindgen::prelude::*;

fn parse_dataset(text: &str) -> Result<DataSet, String> {
    let raw: RawDataSet = serde_json::from_str(text).map_err(|e| e.to_string())?;
    let report = validate(&raw);
    if !report.valid {
        return Err(format!(
            "not a data set: {}",
            serde_json::to_string(&report.violations).unwrap_or_default()
        ));
    }
    DataSet::new(raw.n, raw.g0, raw.rot, raw.pairs).map_err(|e| e.to_string())
}

pub fn polygon_svg_impl(dataset: &str) -> Result<String, String> {
    let d = parse_dataset(dataset)?;
    let spec = polygon_spec(&d).map_err(|e| e.to_string())?;
    let metrics = solve_metrics(&spec).map_err(|e| e.to_string())?;
    let word = pairing_word(&d).map_err(|e| e.to_string())?;
    render_svg(&spec, &metrics, &word).map_err(|e| e.to_string())
}

pub fn dataset_summary_impl(dataset: &str) -> Result<String, String> {
    let d = parse_dataset(dataset)?;
    let mut out = json!({
        "dataset": d.canonicalize().to_string(),
        "genus": d.genus(),
        "class": d.classify(),
        "irreducible": d.is_irreducible(),
        "fix_dimension": d.fix_dimension_harvey().ok(),
    });
    if let Ok(word) = pairing_word(&d) {
        out["pairing_word"] = Value::from(word.word());
    }
    match decompose(&d) {
        Ok(necklace) => {
            out["necklace"] = json!({
                "beads": necklace.chain.beads.iter().map(|b| b.to_string()).collect::<Vec<_>>(),
                "links": necklace.chain.links,
                "self_pairs": necklace.self_pairs,
                "g_add": necklace.handles_added(),
                "g_sub": necklace.handles_removed(),
            });
            if let Ok(r) = necklace.realize() {
                out["genus_trace"] = json!(r.genus_trace());
            }
            if let Ok(desc) = necklace.fix_descriptor() {
                out["descriptor"] = json!(desc);
            }
        }
        Err(e) => out["necklace_error"] = Value::from(e.to_string()),
    }
    serde_json::to_string_pretty(&out).map_err(|e| e.to_string())
}

pub fn fatgraph_summary_impl(word: &str) -> Result<String, String> {
    let g = FatGraph::from_boundary_word(word).map_err(|e| e.to_string())?;
    let group = g.automorphisms();
    let mut out = json!({
        "genus": g.genus(),
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "boundary_components": g.boundary_count(),
        "automorphism_orders": group.iter().map(|h| h.order).collect::<Vec<_>>(),
        "cyclic": cyclic_generator(&group).is_some(),
    });
    if let Some(h) = group.iter().max_by_key(|h| h.order).filter(|h| h.order > 1) {
        if let Ok(report) = g.filling_irreducibility_check(h) {
            out["largest_order"] = json!(h.order);
            out["signature"] = json!({
                "g0": report.signature.quotient_genus,
                "cone_orders": report.signature.cone_orders,
            });
            out["irreducible"] = json!(report.irreducible);
            out["four_regular"] = json!(g.degrees().iter().all(|&d| d == 4));
        }
    }
    serde_json::to_string_pretty(&out).map_err(|e| e.to_string())
}

/// SVG of the Poincaré disk polygon of a spherical Type 1 action.
#[wasm_bindgen]
pub fn polygon_svg(dataset: &str) -> Result<String, JsValue> {
    polygon_svg_impl(dataset).map_err(|e| JsValue::from_str(&e))
}

/// Genus, class, fixed locus dimension and a necklace decomposition.
#[wasm_bindgen]
pub fn dataset_summary(dataset: &str) -> Result<String, JsValue> {
    dataset_summary_impl(dataset).map_err(|e| JsValue::from_str(&e))
}

/// Fat graph with one boundary component read off a word like `a b a^-1 b^-1`.
#[wasm_bindgen]
pub fn fatgraph_summary(word: &str) -> Result<String, JsValue> {
    fatgraph_summary_impl(word).map_err(|e| JsValue::from_str(&e))
}
