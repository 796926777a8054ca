//! SVG 1.1 drawings of a packing, one document per sheet.

use std::fmt::Write;

use crate::model::{Instance, Solution};
use crate::verify::{verify_solution, VerifyReport};

const PALETTE: [&str; 10] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
];

/// Pixels per unit of length.
const SCALE: u32 = 20;
const MARGIN: u32 = 10;

pub fn type_color(type_index: usize) -> &'static str {
    PALETTE[type_index % PALETTE.len()]
}

/// Renders sheet `sheet` (1-based). The y axis points up, as in the packing
/// coordinates.
pub fn render_sheet(instance: &Instance, solution: &Solution, sheet: u32) -> String {
    let (w, h) = (instance.sheet_width * SCALE, instance.sheet_height * SCALE);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{}" height="{}" viewBox="0 0 {} {}">"#,
        w + 2 * MARGIN,
        h + 2 * MARGIN,
        w + 2 * MARGIN,
        h + 2 * MARGIN
    );
    let _ = writeln!(svg, "  <title>{} sheet {}</title>", escape(&instance.name), sheet);
    let _ = writeln!(
        svg,
        r#"  <rect class="sheet" x="{MARGIN}" y="{MARGIN}" width="{w}" height="{h}" fill="none" stroke="black" stroke-width="2"/>"#
    );
    for p in solution.on_sheet(sheet) {
        let (pw, ph) = (p.effective_width() * SCALE, p.effective_height() * SCALE);
        let px = MARGIN + p.x * SCALE;
        let py = MARGIN + h - p.y * SCALE - ph;
        let label = format!("c{},{}", p.copy.type_index + 1, p.copy.ordinal);
        let _ = writeln!(
            svg,
            r#"  <rect class="item" x="{px}" y="{py}" width="{pw}" height="{ph}" fill="{}" stroke="black" stroke-width="1"/>"#,
            type_color(p.copy.type_index)
        );
        let _ = writeln!(
            svg,
            r#"  <text x="{}" y="{}" font-family="sans-serif" font-size="10" text-anchor="middle" dominant-baseline="middle">{label}{}</text>"#,
            px + pw / 2,
            py + ph / 2,
            if p.rotated { " (r)" } else { "" }
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// One SVG per used sheet, in sheet order. Refuses packings that fail
/// verification.
pub fn render_solution(instance: &Instance, solution: &Solution, rotation_allowed: bool) -> Result<Vec<String>, VerifyReport> {
    let report = verify_solution(instance, solution, rotation_allowed);
    if !report.ok {
        return Err(report);
    }
    Ok((1..=solution.sheets_used).map(|j| render_sheet(instance, solution, j)).collect())
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
