use std::fmt::Write;

use crate::defectcore::{Analysis, SerrePoset};
use crate::funcat::IndexSet;

pub fn set_names(s: &IndexSet, names: &[&str]) -> String {
    let parts: Vec<&str> = s.iter().map(|&i| names[i]).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn mask_label(mask: u64, bits: usize) -> String {
    format!("0b{:0width$b}", mask, width = bits.max(1))
}

/// A square table with row and column headers.
pub fn table(names: &[&str], cell: impl Fn(usize, usize) -> usize) -> String {
    let w = names.iter().map(|n| n.len()).max().unwrap_or(1).max(3) + 1;
    let mut out = format!("  {:w$}", "");
    for n in names {
        let _ = write!(out, "{n:>w$}");
    }
    out.push('\n');
    for (i, r) in names.iter().enumerate() {
        let _ = write!(out, "  {r:w$}");
        for j in 0..names.len() {
            let _ = write!(out, "{:>w$}", cell(i, j));
        }
        out.push('\n');
    }
    out
}

/// `C,A:d` for every pair with `dim F(C, A) = d > 0`.
pub fn pair_dims(an: &Analysis, s: &IndexSet) -> Vec<String> {
    let names = an.atlas().names();
    let f = an.substructure_from_serre(s);
    let n = an.len();
    let mut out = Vec::new();
    for c in 0..n {
        for a in 0..n {
            let d = f.spaces[c][a].dim();
            if d > 0 {
                out.push(format!("{},{}:{}", names[c], names[a], d));
            }
        }
    }
    out
}

/// The lattice of Serre subsets, each node standing for `S` and `F(S)` at once.
pub fn dot(an: &Analysis, poset: &SerrePoset) -> String {
    let bits = poset.simples.len();
    let mut out = String::from("digraph exstruct {\n  rankdir=BT;\n  node [shape=box];\n");
    for (i, s) in poset.elements.iter().enumerate() {
        let dims = pair_dims(an, s);
        let body = if dims.is_empty() { "split".to_string() } else { dims.join("\\n") };
        let _ = writeln!(out, "  n{i} [label=\"{}\\n{body}\"];", mask_label(poset.mask(s), bits));
    }
    for (a, b) in &poset.edges {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push_str("}\n");
    out
}
