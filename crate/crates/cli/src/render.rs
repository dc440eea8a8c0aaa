//! Deterministic SVG drawings of 2-D packings.

use std::fmt::Write;

use num_traits::ToPrimitive;
use packclass::{Instance, Packing, Rational};

/// User units per container unit.
pub const SCALE: i64 = 1000;

const PALETTE: [&str; 8] = ["#8dd3c7", "#ffffb3", "#bebada", "#fb8072", "#80b1d3", "#fdb462", "#b3de69", "#fccde5"];

fn units(x: Rational) -> String {
    let v = x * Rational::from(SCALE);
    if v.is_integer() {
        return v.numer().to_string();
    }
    let s = format!("{:.6}", v.to_f64().unwrap_or(f64::NAN));
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Renders a packing of a 2-D instance with the origin at the bottom left.
///
/// Boxes are drawn in id order; the output depends only on the inputs.
pub fn svg(inst: &Instance, packing: &Packing) -> String {
    debug_assert_eq!(inst.dim(), 2);
    let (w, h) = (inst.container()[0], inst.container()[1]);
    let stroke = units(w.max(h) / Rational::from(200));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {} {}">"#,
        units(w),
        units(h)
    );
    let _ = writeln!(
        out,
        r#"  <rect x="0" y="0" width="{}" height="{}" fill="white" stroke="black" stroke-width="{stroke}"/>"#,
        units(w),
        units(h)
    );
    for (k, (id, pos)) in packing.positions.iter().enumerate() {
        let Some(b) = inst.index_of(id) else { continue };
        let size = &inst.boxes()[b].size;
        let (x, y) = (pos[0], h - pos[1] - size[1]);
        let font = units(size[0].min(size[1]) * Rational::new(2, 5));
        let _ = writeln!(
            out,
            r#"  <rect x="{}" y="{}" width="{}" height="{}" fill="{}" stroke="black" stroke-width="{stroke}"/>"#,
            units(x),
            units(y),
            units(size[0]),
            units(size[1]),
            PALETTE[k % PALETTE.len()]
        );
        let _ = writeln!(
            out,
            r#"  <text x="{}" y="{}" font-size="{font}" text-anchor="middle" dominant-baseline="central">{}</text>"#,
            units(x + size[0] / Rational::from(2)),
            units(y + size[1] / Rational::from(2)),
            escape(id)
        );
    }
    out.push_str("</svg>\n");
    out
}
