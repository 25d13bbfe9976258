//! wasm-bindgen entry points for the static page in `www/`.

use std::fmt::Write as _;

use torus_ainf::hochschild::{reference_table, skoldberg_hh};
use torus_ainf::torus_polygons::{
    enumerate_polygons, preset_scene, signed_series, witnesses_svg, CornerSpec, PolygonWitness,
};
use torus_ainf::useries::{partition_series, theta_v};
use torus_ainf::FieldSpec;
use wasm_bindgen::prelude::*;

const MAX_RMAX: usize = 64;
const MAX_ORDER: usize = 400;
const MAX_WRAP: u32 = 6;

/// Bigraded HH dimensions through `rmax` via the periodic resolution.
#[wasm_bindgen]
pub fn hh_table(field: &str, rmax: usize) -> String {
    let spec: FieldSpec = match field.parse() {
        Ok(s) => s,
        Err(e) => return format!("error: {e}"),
    };
    let rmax = rmax.min(MAX_RMAX);
    let table = skoldberg_hh(spec, rmax);
    let diff = table.diff(&reference_table(spec, rmax));
    let mut out = table.to_string();
    if diff.is_empty() {
        out.push_str("matches the expected table\n");
    } else {
        for (r, s, got, want) in diff {
            let _ = writeln!(out, "mismatch at ({r}, {s}): {got} vs {want}");
        }
    }
    out
}

/// `u`, `v` and `u^3 v` modulo `U^{order+1}`.
#[wasm_bindgen]
pub fn jacobi(order: usize) -> String {
    let order = order.min(MAX_ORDER);
    let u = partition_series(order);
    let v = theta_v(order);
    let prod = u.pow(3).mul(&v).expect("same order");
    let head = order.min(16);
    format!(
        "u = {}\nv = {}\nu^3 v = {}\n{}\n",
        u.truncate(head),
        v.truncate(head),
        prod,
        if prod.is_one() { "identity holds" } else { "identity FAILS" }
    )
}

fn witnesses(wrap: u32) -> Vec<(&'static str, Vec<PolygonWitness>)> {
    let scene = preset_scene();
    [
        ("mu2(e01, e20)", CornerSpec::mu2_first()),
        ("mu2(e20, e12)", CornerSpec::mu2_second()),
        ("mu3(e01, e20, e12)", CornerSpec::mu3()),
    ]
    .into_iter()
    .map(|(label, spec)| (label, enumerate_polygons(&scene, &spec, wrap).unwrap_or_default()))
    .collect()
}

/// SVG of the lifted curves and every polygon up to the wrap bound.
#[wasm_bindgen]
pub fn polygon_svg(wrap: u32) -> String {
    let wrap = wrap.min(MAX_WRAP);
    let all: Vec<PolygonWitness> = witnesses(wrap).into_iter().flat_map(|(_, ws)| ws).collect();
    witnesses_svg(&preset_scene(), &all, wrap as i64 + 2)
}

/// One line per product: polygon count and signed series.
#[wasm_bindgen]
pub fn polygon_summary(wrap: u32) -> String {
    let wrap = wrap.min(MAX_WRAP);
    let mut out = String::new();
    for (label, ws) in witnesses(wrap) {
        let _ = writeln!(out, "{label}: {} polygons, {}", ws.len(), signed_series(&ws, wrap));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn outputs() {
        assert!(hh_table("F2", 12).contains("matches"));
        assert!(hh_table("x", 4).starts_with("error"));
        assert!(jacobi(30).contains("identity holds"));
        let svg = polygon_svg(2);
        assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
        assert!(polygon_summary(3).contains("mu3(e01, e20, e12)"));
    }
}
