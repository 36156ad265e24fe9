//! Graphviz export: objects as nodes, non-identity morphisms as labelled
//! edges. Node and edge order follow id order, so output is stable.

use std::fmt::Write as _;

use crate::groupoid::FiniteGroupoid;

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn to_dot(g: &FiniteGroupoid, name: &str) -> String {
    let mut out = format!("digraph {} {{\n", quote(name));
    for x in g.objects() {
        let _ = writeln!(out, "  n{} [label={}];", x.0, quote(g.obj_label(x)));
    }
    for m in g.morphisms().filter(|&m| g.identity(g.src(m)) != m) {
        let _ = writeln!(out, "  n{} -> n{} [label={}];", g.src(m).0, g.tgt(m).0, quote(g.mor_label(m)));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::FiniteGroup;

    #[test]
    fn point_has_one_node_and_no_edges() {
        let dot = to_dot(&FiniteGroupoid::terminal(), "pt");
        assert_eq!(dot.matches("[label=").count(), 1);
        assert!(!dot.contains("->"));
    }

    #[test]
    fn loops_and_quoting() {
        let dot = to_dot(&FiniteGroupoid::bg(&FiniteGroup::cyclic(3)), "say \"B\"");
        assert_eq!(dot.matches("->").count(), 2);
        assert!(dot.starts_with("digraph \"say \\\"B\\\"\" {"));
    }
}
