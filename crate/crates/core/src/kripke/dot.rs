use std::fmt::Write;

use super::KripkeStructure;

/// Renders `k` as a Graphviz digraph. Initial states are double circles.
pub fn export_dot(k: &KripkeStructure) -> String {
    let mut out = String::from("digraph kripke {\n");
    for s in 0..k.num_states() {
        let shape = if k.is_initial(s) {
            "doublecircle"
        } else {
            "circle"
        };
        writeln!(
            out,
            "  \"{id}\" [label=\"{id}\\n{{{label}}}\", shape={shape}];",
            id = k.state_name(s),
            label = k.label_names(s).join(","),
        )
        .unwrap();
    }
    // successor lists are sorted, so edges come out in (source, target) order
    for (s, t) in k.edges() {
        writeln!(out, "  \"{}\" -> \"{}\";", k.state_name(s), k.state_name(t)).unwrap();
    }
    out.push_str("}\n");
    out
}
