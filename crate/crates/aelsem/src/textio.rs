//! Text formats for graphs and constraints.
//!
//! Graph grammar: `#` comments to end of line; the first significant line is
//! `nodes: <name>+` (names `[A-Za-z0-9_]+`, unique); every following line is
//! `X -> Y` or `X <-> Y`. Constraint grammar: `corr v w`,
//! `pcorr v w | s1 s2 ...`, `minor a,b ; c,d`, or `pattern r` followed by r
//! rows of r cells, each `0` or `v:w`.

use crate::constraint::{
    build_correlation, build_minor, build_partial_correlation, Constraint, PatternCell,
    PatternMatrixConstraint,
};
use crate::error::{Error, Result};
use crate::graph::MixedGraph;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::ParseError { line, msg: msg.into() }
}

fn valid_name(s: &str) -> bool {
    !s.is_empty() && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Significant lines with original 1-based line numbers, comments stripped.
fn significant_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, raw)| {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                None
            } else {
                Some((i + 1, line))
            }
        })
        .collect()
}

pub fn parse_graph(text: &str) -> Result<MixedGraph> {
    let lines = significant_lines(text);
    let Some(&(first_no, first)) = lines.first() else {
        return Err(parse_err(1, "empty graph file: expected a `nodes:` line"));
    };
    let Some(rest) = first.strip_prefix("nodes:") else {
        return Err(parse_err(first_no, "first line must start with `nodes:`"));
    };
    let names: Vec<String> = rest.split_whitespace().map(str::to_string).collect();
    if names.is_empty() {
        return Err(parse_err(first_no, "`nodes:` line lists no node names"));
    }
    for name in &names {
        if !valid_name(name) {
            return Err(parse_err(first_no, format!("invalid node name `{name}`")));
        }
    }
    for i in 0..names.len() {
        if names[i + 1..].contains(&names[i]) {
            return Err(parse_err(first_no, format!("duplicate node name `{}`", names[i])));
        }
    }
    let mut g = MixedGraph::with_names(names);
    for &(no, line) in &lines[1..] {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [x, op, y] = tokens[..] else {
            return Err(parse_err(no, "expected `X -> Y` or `X <-> Y`"));
        };
        let xi = g.node_index(x).ok_or(Error::UnknownNode(x.to_string()))?;
        let yi = g.node_index(y).ok_or(Error::UnknownNode(y.to_string()))?;
        match op {
            "->" => g.add_directed(xi, yi)?,
            "<->" => g.add_bidirected(xi, yi)?,
            other => return Err(parse_err(no, format!("unknown edge operator `{other}`"))),
        }
    }
    Ok(g)
}

/// Canonical form: one `nodes:` line, directed edges in index order, then
/// bidirected edges in index order.
pub fn serialize_graph(g: &MixedGraph) -> String {
    let mut out = format!("nodes: {}\n", g.names().join(" "));
    for (t, h) in g.directed_edges() {
        out.push_str(&format!("{} -> {}\n", g.name(t), g.name(h)));
    }
    for (v, w) in g.bidirected_edges() {
        out.push_str(&format!("{} <-> {}\n", g.name(v), g.name(w)));
    }
    out
}

fn resolve(g: &MixedGraph, name: &str) -> Result<usize> {
    g.node_index(name).ok_or(Error::UnknownNode(name.to_string()))
}

fn resolve_list(g: &MixedGraph, csv: &str, line: usize) -> Result<Vec<usize>> {
    let items: Vec<&str> = csv.split(',').map(str::trim).collect();
    if items.iter().any(|s| s.is_empty()) {
        return Err(parse_err(line, "empty name in comma-separated list"));
    }
    items.iter().map(|s| resolve(g, s)).collect()
}

/// Parses a constraint file, resolving node names against the given graph.
pub fn parse_constraint(text: &str, g: &MixedGraph) -> Result<Constraint> {
    let lines = significant_lines(text);
    let Some(&(no, head)) = lines.first() else {
        return Err(parse_err(1, "empty constraint file"));
    };
    let tokens: Vec<&str> = head.split_whitespace().collect();
    match tokens[0] {
        "corr" => {
            let [_, v, w] = tokens[..] else {
                return Err(parse_err(no, "expected `corr v w`"));
            };
            Ok(Constraint::Pattern(build_correlation(resolve(g, v)?, resolve(g, w)?)))
        }
        "pcorr" => {
            // `pcorr v w | s1 s2 ...`
            let body = head.strip_prefix("pcorr").unwrap();
            let (vw, given) = body
                .split_once('|')
                .ok_or_else(|| parse_err(no, "expected `pcorr v w | s1 s2 ...`"))?;
            let [v, w] = vw.split_whitespace().collect::<Vec<_>>()[..] else {
                return Err(parse_err(no, "expected exactly two nodes before `|`"));
            };
            let (vi, wi) = (resolve(g, v)?, resolve(g, w)?);
            let s: Vec<usize> = given
                .split_whitespace()
                .map(|name| resolve(g, name))
                .collect::<Result<_>>()?;
            if s.contains(&vi) || s.contains(&wi) {
                return Err(parse_err(no, "conditioning set must not contain v or w"));
            }
            Ok(Constraint::Pattern(build_partial_correlation(vi, wi, &s)))
        }
        "minor" => {
            let body = head.strip_prefix("minor").unwrap();
            let (a, b) = body
                .split_once(';')
                .ok_or_else(|| parse_err(no, "expected `minor a,b ; c,d`"))?;
            Ok(Constraint::Pattern(build_minor(
                &resolve_list(g, a, no)?,
                &resolve_list(g, b, no)?,
            )?))
        }
        "pattern" => {
            let [_, r] = tokens[..] else {
                return Err(parse_err(no, "expected `pattern r`"));
            };
            let r: usize = r
                .parse()
                .map_err(|_| parse_err(no, format!("invalid pattern size `{r}`")))?;
            if lines.len() != r + 1 {
                return Err(parse_err(no, format!("pattern of size {r} needs {r} rows")));
            }
            let mut cells = Vec::with_capacity(r * r);
            for &(row_no, row) in &lines[1..] {
                let entries: Vec<&str> = row.split_whitespace().collect();
                if entries.len() != r {
                    return Err(parse_err(row_no, format!("expected {r} cells per row")));
                }
                for cell in entries {
                    if cell == "0" {
                        cells.push(PatternCell::Zero);
                    } else {
                        let (v, w) = cell.split_once(':').ok_or_else(|| {
                            parse_err(row_no, format!("cell `{cell}` is neither `0` nor `v:w`"))
                        })?;
                        cells.push(PatternCell::SigmaRef(resolve(g, v)?, resolve(g, w)?));
                    }
                }
            }
            Ok(Constraint::Pattern(PatternMatrixConstraint::from_cells(r, cells)?))
        }
        other => Err(parse_err(no, format!("unknown constraint kind `{other}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{stream_from_seed, PrimeModulus};
    use crate::linalg::Matrix;

    #[test]
    fn parse_simple_graph() {
        let g = parse_graph("nodes: a b\na -> b\n").unwrap();
        assert_eq!(g.n(), 2);
        assert!(g.has_directed(0, 1));
    }

    #[test]
    fn parse_figure_graph_with_comments() {
        let text = "# a five node example\nnodes: a b c d e\n\na -> b\nb -> c # chain\nc -> d\na <-> c\na <-> d\n";
        let g = parse_graph(text).unwrap();
        assert!(g.classify().is_bap);
        assert_eq!(g.directed_count(), 3);
        assert_eq!(g.bidirected_count(), 2);
        assert_eq!(g.node_index("e"), Some(4));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        assert!(matches!(
            parse_graph("a -> b"),
            Err(Error::ParseError { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("nodes: a b\n\na => b"),
            Err(Error::ParseError { line: 3, .. })
        ));
        assert!(matches!(parse_graph("nodes: a\na -> a"), Err(Error::SelfLoop(_))));
        assert!(matches!(
            parse_graph("nodes: a b\na -> b\na -> b"),
            Err(Error::DuplicateEdge(_))
        ));
        assert!(matches!(
            parse_graph("nodes: a b\na -> c"),
            Err(Error::UnknownNode(_))
        ));
        assert!(matches!(
            parse_graph("nodes: a a"),
            Err(Error::ParseError { line: 1, .. })
        ));
        assert!(matches!(
            parse_graph("nodes: a-b"),
            Err(Error::ParseError { line: 1, .. })
        ));
        assert!(matches!(parse_graph(""), Err(Error::ParseError { line: 1, .. })));
    }

    #[test]
    fn serialize_roundtrip_is_identity_on_canonical_form() {
        let text = "nodes: a b c d e\na -> b\nb -> c\nc -> d\na <-> c\na <-> d\n";
        let g = parse_graph(text).unwrap();
        let canon = serialize_graph(&g);
        assert_eq!(canon, text);
        assert_eq!(parse_graph(&canon).unwrap(), g);
    }

    #[test]
    fn parse_constraints() {
        let g = parse_graph("nodes: a b c d e\na -> b\n").unwrap();
        let corr = parse_constraint("corr a e", &g).unwrap();
        assert_eq!(corr, Constraint::Pattern(build_correlation(0, 4)));
        let pcorr = parse_constraint("pcorr a b | c d", &g).unwrap();
        assert_eq!(pcorr, Constraint::Pattern(build_partial_correlation(0, 1, &[2, 3])));
        let minor = parse_constraint("minor a,b ; c,d", &g).unwrap();
        assert_eq!(minor, Constraint::Pattern(build_minor(&[0, 1], &[2, 3]).unwrap()));

        let pattern = parse_constraint("pattern 2\na:c a:d\n0 b:d\n", &g).unwrap();
        let Constraint::Pattern(p) = &pattern else { panic!("expected pattern") };
        assert_eq!(p.cell(0, 0), PatternCell::SigmaRef(0, 2));
        assert_eq!(p.cell(1, 0), PatternCell::Zero);
        assert_eq!(p.cell(1, 1), PatternCell::SigmaRef(1, 3));
        // parsed pattern with a zero evaluates like the minor with that entry zeroed
        let pm = PrimeModulus::m31();
        let mut rng = stream_from_seed(3);
        let mut sigma = Matrix::from_fn(5, 5, pm, |_, _| pm.sample_uniform(&mut rng));
        sigma.set(1, 2, pm.zero());
        let full = parse_constraint("minor a,b ; c,d", &g).unwrap();
        assert_eq!(pattern.evaluate(&sigma).unwrap(), full.evaluate(&sigma).unwrap());
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            // serialize-then-parse is the identity on any graph, cyclic or not
            #[test]
            fn any_graph_roundtrips(n in 1usize..6, codes in proptest::collection::vec(0u8..4, 15)) {
                let mut g = MixedGraph::new(n);
                let mut it = codes.into_iter();
                for v in 0..n {
                    for w in v + 1..n {
                        match it.next().unwrap() {
                            1 => g.add_directed(v, w).unwrap(),
                            2 => g.add_directed(w, v).unwrap(),
                            3 => g.add_bidirected(v, w).unwrap(),
                            _ => {}
                        }
                    }
                }
                let text = serialize_graph(&g);
                prop_assert_eq!(parse_graph(&text).unwrap(), g);
            }
        }
    }

    #[test]
    fn constraint_parse_errors() {
        let g = parse_graph("nodes: a b c").unwrap();
        assert!(parse_constraint("", &g).is_err());
        assert!(parse_constraint("corr a", &g).is_err());
        assert!(parse_constraint("corr a z", &g).is_err());
        assert!(parse_constraint("pcorr a b c", &g).is_err());
        assert!(parse_constraint("pcorr a b | a", &g).is_err());
        assert!(parse_constraint("minor a,b ; c", &g).is_err());
        assert!(parse_constraint("pattern 2\na:b 0\n", &g).is_err());
        assert!(parse_constraint("pattern 2\na:b 0\n0\n", &g).is_err());
        assert!(parse_constraint("frobnicate a b", &g).is_err());
    }
}
