//! Graphviz export. Leaves are filled green and the other vertices red;
//! edge weights other than 1 become edge labels.

use std::fmt::Write;

use num_traits::One;

use crate::io::GraphFile;

pub fn to_dot(file: &GraphFile) -> String {
    let mut degree = vec![0usize; file.n];
    for &(a, b, _) in &file.edges {
        if a < file.n && b < file.n {
            degree[a] += 1;
            degree[b] += 1;
        }
    }
    let mut out = String::from("graph G {\n  node [style=filled, shape=circle];\n");
    for (v, &d) in degree.iter().enumerate() {
        let label = match &file.labels {
            Some(labels) => labels[v].to_string(),
            None => v.to_string(),
        };
        let color = if d == 1 { "green" } else { "red" };
        writeln!(out, "  {v} [label=\"{label}\", fillcolor={color}];").expect("string write");
    }
    for (a, b, w) in &file.edges {
        if w.is_one() {
            writeln!(out, "  {a} -- {b};").expect("string write");
        } else {
            writeln!(out, "  {a} -- {b} [label=\"{w}\"];").expect("string write");
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn colors_and_weights() {
        let file = GraphFile::parse("{\"n\": 3, \"edges\": [[0, 1, 3], [1, 2]]}").unwrap();
        let dot = to_dot(&file);
        assert!(dot.contains("0 [label=\"0\", fillcolor=green];"));
        assert!(dot.contains("1 [label=\"1\", fillcolor=red];"));
        assert!(dot.contains("0 -- 1 [label=\"3\"];"));
        assert!(dot.contains("1 -- 2;"));
    }

    #[test]
    fn window_labels_are_shown() {
        let file = GraphFile::parse("{\"n\": 3, \"edges\": [[0, 1], [1, 2]], \"labels\": [-1, 0, 1]}").unwrap();
        assert!(to_dot(&file).contains("0 [label=\"-1\", fillcolor=green];"));
    }
}
