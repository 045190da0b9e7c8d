//! Graphviz export of partition diagrams, finest scale at the bottom.

use std::fmt::Write;

use emergence_core::{EmergentHierarchy64, HasseDiagram};

/// Node width for a scale without positive ΔCP.
pub const MIN_WIDTH: f64 = 0.3;
/// Node width for the scale with the largest ΔCP.
pub const MAX_WIDTH: f64 = 2.0;

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn write_edges(out: &mut String, d: &HasseDiagram) {
    for v in 0..d.len() {
        for &u in d.up(v) {
            let _ = writeln!(out, "  n{v} -> n{u};");
        }
    }
}

/// Emergent hierarchy with node width linear in ΔCP between [`MIN_WIDTH`] and [`MAX_WIDTH`].
pub fn hierarchy_dot(h: &EmergentHierarchy64) -> String {
    let d = h.diagram();
    let max = d
        .nodes()
        .iter()
        .filter_map(|p| h.delta_of(p))
        .fold(0.0f64, f64::max);
    let mut out = String::from("digraph hierarchy {\n  rankdir=BT;\n  node [shape=circle, fixedsize=true, fontsize=10];\n");
    for (v, p) in d.nodes().iter().enumerate() {
        let delta = h.delta_of(p).unwrap_or(0.0);
        let frac = if max > 0.0 { (delta / max).clamp(0.0, 1.0) } else { 0.0 };
        let width = MIN_WIDTH + (MAX_WIDTH - MIN_WIDTH) * frac;
        let name = escape(&p.to_string());
        let _ = writeln!(
            out,
            "  n{v} [label=\"{name}\", width={width:.4}, tooltip=\"{name} dCP={delta:.6}\"];"
        );
    }
    write_edges(&mut out, d);
    out.push_str("}\n");
    out
}

/// Plain covering diagram.
pub fn diagram_dot(d: &HasseDiagram) -> String {
    let mut out = String::from("digraph lattice {\n  rankdir=BT;\n  node [shape=box, fontsize=10];\n");
    for (v, p) in d.nodes().iter().enumerate() {
        let _ = writeln!(out, "  n{v} [label=\"{}\"];", escape(&p.to_string()));
    }
    write_edges(&mut out, d);
    out.push_str("}\n");
    out
}
