use std::io::BufRead;

use log::warn;

use super::{Graph, LabelMap};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Delimiter {
    /// Whitespace or commas, in any mix.
    #[default]
    Auto,
    Whitespace,
    Comma,
}

#[derive(Debug, Clone)]
pub struct LoadOptions {
    pub delimiter: Delimiter,
    /// Lines whose first non-blank character is one of these are skipped.
    pub comment_chars: Vec<char>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            delimiter: Delimiter::Auto,
            comment_chars: vec!['#', '%'],
        }
    }
}

impl LoadOptions {
    fn tokens<'a>(&self, line: &'a str) -> Vec<&'a str> {
        let split: Box<dyn Iterator<Item = &'a str>> = match self.delimiter {
            Delimiter::Auto => {
                Box::new(line.split(|c: char| c.is_whitespace() || c == ','))
            }
            Delimiter::Whitespace => Box::new(line.split_whitespace()),
            Delimiter::Comma => Box::new(line.split(',').map(str::trim)),
        };
        split.filter(|t| !t.is_empty()).collect()
    }
}

/// Reads an undirected edge list.
///
/// Each non-comment line names two node labels; any further columns
/// (weights, timestamps) are ignored with a single warning. Nodes are
/// indexed in order of first appearance.
pub fn load_edge_list<R: BufRead>(source: R, options: &LoadOptions) -> Result<Graph> {
    let mut labels = LabelMap::new();
    let mut edges = Vec::new();
    let mut warned_extra = false;
    for (i, line) in source.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty()
            || trimmed
                .chars()
                .next()
                .is_some_and(|c| options.comment_chars.contains(&c))
        {
            continue;
        }
        let tokens = options.tokens(trimmed);
        if tokens.len() < 2 {
            return Err(Error::Parse {
                line: i + 1,
                message: format!("expected two node labels, found {}", tokens.len()),
            });
        }
        if tokens.len() > 2 && !warned_extra {
            warn!(
                "line {}: ignoring {} extra column(s); graphs are unweighted",
                i + 1,
                tokens.len() - 2
            );
            warned_extra = true;
        }
        let u = labels.intern(tokens[0]);
        let v = labels.intern(tokens[1]);
        edges.push((u, v));
    }
    if labels.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(Graph::from_edges(labels, edges))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn load(text: &str) -> Result<Graph> {
        load_edge_list(text.as_bytes(), &LoadOptions::default())
    }

    #[test]
    fn simple_path() {
        let g = load("a b\nb c\n").unwrap();
        assert_eq!((g.n_nodes(), g.n_edges()), (3, 2));
        assert_eq!(g.labels().get("c"), Some(2));
    }

    #[test]
    fn duplicate_and_reversed_edges_collapse() {
        let g = load("a b\nb a\na b\n").unwrap();
        assert_eq!((g.n_nodes(), g.n_edges()), (2, 1));
    }

    #[test]
    fn self_loop_dropped() {
        let g = load("a a\na b\n").unwrap();
        assert_eq!((g.n_nodes(), g.n_edges()), (2, 1));
    }

    #[test]
    fn comments_commas_and_weights() {
        let g = load("# header\n% konect\n\n1,2\n2 3 0.5\n 3\t1\n").unwrap();
        assert_eq!((g.n_nodes(), g.n_edges()), (3, 3));
    }

    #[test]
    fn comma_only_delimiter_keeps_spaces_in_labels() {
        let opts = LoadOptions {
            delimiter: Delimiter::Comma,
            ..Default::default()
        };
        let g = load_edge_list("new york, boston\n".as_bytes(), &opts).unwrap();
        assert_eq!(g.label(0), "new york");
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match load("a b\nlonely\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_input() {
        assert!(matches!(load(""), Err(Error::EmptyGraph)));
        assert!(matches!(load("# only a comment\n"), Err(Error::EmptyGraph)));
    }
}
