//! The `.gp` presentation format.
//!
//! One directive per line; `#` starts a comment.
//!
//! ```text
//! vertices v1 v2 v3 v4 v5
//! edge v1 v2
//! group * cyclic 2
//! group v3 table [[0,1],[1,0]]
//! gens v3 1
//! meta v1 finite=true finite-abelianization=true irreducible=true aut-finite=true
//! ```
//!
//! `*` in `group` and `meta` applies to every vertex not named explicitly.
//! Meta values are `true`, `false` or `unknown`; keys left out are derived
//! from the group specification.

use std::fmt;
use std::path::Path;

use gpkit::aut_structure::{VertexGroupMeta, VertexMeta};
use gpkit::word_engine::GroupKind;
use gpkit::{Presentation, SimplicialGraph, VertexGroup};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{line}:{col}: {msg}")]
    At { line: usize, col: usize, msg: String },
}

fn at(line: usize, col: usize, msg: impl Into<String>) -> ConfigError {
    ConfigError::At { line, col, msg: msg.into() }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub presentation: Presentation,
    pub meta: VertexGroupMeta,
}

/// A token with its 1-based column.
struct Tok<'a> {
    text: &'a str,
    col: usize,
    byte: usize,
}

fn tokens(line: &str) -> Vec<Tok<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices() {
        match (c.is_whitespace(), start) {
            (true, Some(s)) => {
                out.push(Tok { text: &line[s..i], col: line[..s].chars().count() + 1, byte: s });
                start = None;
            }
            (false, None) => start = Some(i),
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push(Tok { text: &line[s..], col: line[..s].chars().count() + 1, byte: s });
    }
    out
}

#[derive(Default)]
struct MetaPatch {
    is_finite: Option<bool>,
    has_finite_abelianization: Option<bool>,
    is_graphically_irreducible: Option<Option<bool>>,
    aut_is_finite: Option<Option<bool>>,
}

impl MetaPatch {
    fn apply(&self, m: &mut VertexMeta) {
        if let Some(b) = self.is_finite {
            m.is_finite = b;
        }
        if let Some(b) = self.has_finite_abelianization {
            m.has_finite_abelianization = b;
        }
        if let Some(b) = self.is_graphically_irreducible {
            m.is_graphically_irreducible = b;
        }
        if let Some(b) = self.aut_is_finite {
            m.aut_is_finite = b;
        }
    }
}

struct GroupSpec {
    kind: GroupKind,
    line: usize,
    col: usize,
    name_col: usize,
}

pub fn parse_file(path: &Path) -> Result<Config, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| ConfigError::Io { path: path.display().to_string(), source })?;
    parse(&text)
}

pub fn parse(text: &str) -> Result<Config, ConfigError> {
    let mut names: Option<(Vec<String>, usize)> = None;
    let mut edges = Vec::new();
    let mut groups: Vec<(Option<String>, GroupSpec)> = Vec::new();
    let mut gens: Vec<(String, Vec<i64>, usize, usize)> = Vec::new();
    let mut metas: Vec<(Option<String>, MetaPatch, usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let toks = tokens(body);
        let Some(head) = toks.first() else { continue };
        let end_col = body.trim_end().chars().count() + 1;
        let arg = |k: usize, what: &str| toks.get(k).ok_or_else(|| at(line, end_col, format!("expected {what}")));
        match head.text {
            "vertices" => {
                if names.is_some() {
                    return Err(at(line, head.col, "`vertices` given twice"));
                }
                if toks.len() < 2 {
                    return Err(at(line, end_col, "expected at least one vertex name"));
                }
                let vs: Vec<String> = toks[1..].iter().map(|t| t.text.to_string()).collect();
                for (k, t) in toks[1..].iter().enumerate() {
                    if vs[..k].contains(&vs[k]) {
                        return Err(at(line, t.col, format!("duplicate vertex `{}`", t.text)));
                    }
                    if t.text == "*" || t.text.contains(['^', ':']) {
                        return Err(at(line, t.col, format!("`{}` is not a valid vertex name", t.text)));
                    }
                }
                names = Some((vs, line));
            }
            "edge" => {
                let a = arg(1, "two vertex names")?;
                let b = arg(2, "a second vertex name")?;
                if let Some(t) = toks.get(3) {
                    return Err(at(line, t.col, "an edge has exactly two endpoints"));
                }
                edges.push(((a.text.to_string(), a.col), (b.text.to_string(), b.col), line));
            }
            "group" => {
                let v = arg(1, "a vertex name or `*`")?;
                let kind_tok = arg(2, "`cyclic n`, `infinite-cyclic` or `table [...]`")?;
                let kind = match kind_tok.text {
                    "cyclic" => {
                        let n = arg(3, "the order of the cyclic group")?;
                        let order: u32 =
                            n.text.parse().map_err(|_| at(line, n.col, format!("`{}` is not an order", n.text)))?;
                        if let Some(t) = toks.get(4) {
                            return Err(at(line, t.col, "unexpected token"));
                        }
                        GroupKind::Cyclic(order)
                    }
                    "infinite-cyclic" => {
                        if let Some(t) = toks.get(3) {
                            return Err(at(line, t.col, "unexpected token"));
                        }
                        GroupKind::InfiniteCyclic
                    }
                    "table" => {
                        let t = arg(3, "a table `[[...], ...]`")?;
                        let table: Vec<Vec<u32>> = serde_json::from_str(body[t.byte..].trim())
                            .map_err(|e| at(line, t.col, format!("bad table: {e}")))?;
                        GroupKind::Table(table)
                    }
                    other => return Err(at(line, kind_tok.col, format!("unknown group kind `{other}`"))),
                };
                let target = (v.text != "*").then(|| v.text.to_string());
                if groups.iter().any(|(n, _)| *n == target) {
                    return Err(at(line, v.col, format!("group for `{}` given twice", v.text)));
                }
                groups.push((target, GroupSpec { kind, line, col: kind_tok.col, name_col: v.col }));
            }
            "gens" => {
                let v = arg(1, "a vertex name")?;
                if toks.len() < 3 {
                    return Err(at(line, end_col, "expected at least one generator"));
                }
                let mut list = Vec::new();
                for t in &toks[2..] {
                    list.push(t.text.parse().map_err(|_| at(line, t.col, format!("`{}` is not an element", t.text)))?);
                }
                gens.push((v.text.to_string(), list, line, v.col));
            }
            "meta" => {
                let v = arg(1, "a vertex name or `*`")?;
                let mut patch = MetaPatch::default();
                for t in &toks[2..] {
                    let (key, value) =
                        t.text.split_once('=').ok_or_else(|| at(line, t.col, "expected `key=value`"))?;
                    let value = match value {
                        "true" => Some(true),
                        "false" => Some(false),
                        "unknown" => None,
                        _ => return Err(at(line, t.col, format!("`{value}` is not true, false or unknown"))),
                    };
                    let required = || value.ok_or_else(|| at(line, t.col, format!("`{key}` cannot be unknown")));
                    match key {
                        "finite" => patch.is_finite = Some(required()?),
                        "finite-abelianization" => patch.has_finite_abelianization = Some(required()?),
                        "irreducible" => patch.is_graphically_irreducible = Some(value),
                        "aut-finite" => patch.aut_is_finite = Some(value),
                        _ => return Err(at(line, t.col, format!("unknown metadata key `{key}`"))),
                    }
                }
                let target = (v.text != "*").then(|| v.text.to_string());
                metas.push((target, patch, line, v.col));
            }
            other => return Err(at(line, head.col, format!("unknown directive `{other}`"))),
        }
    }

    let (names, vline) = names.ok_or_else(|| at(1, 1, "missing `vertices` line"))?;
    let index = |name: &str, line: usize, col: usize| {
        names.iter().position(|n| n == name).ok_or_else(|| at(line, col, format!("unknown vertex `{name}`")))
    };

    let mut ids = Vec::new();
    for ((a, ca), (b, cb), line) in &edges {
        let (x, y) = (index(a, *line, *ca)?, index(b, *line, *cb)?);
        if x == y {
            return Err(at(*line, *cb, format!("loop at `{a}`")));
        }
        ids.push((x, y));
    }
    let graph = SimplicialGraph::new(names.clone(), &ids).map_err(|e| at(vline, 1, e.to_string()))?;

    let default = groups.iter().find(|(n, _)| n.is_none()).map(|(_, g)| g);
    let mut specs: Vec<Option<&GroupSpec>> = vec![default; names.len()];
    for (name, g) in &groups {
        if let Some(name) = name {
            specs[index(name, g.line, g.name_col)?] = Some(g);
        }
    }
    let mut vgroups = Vec::new();
    for (v, spec) in specs.iter().enumerate() {
        let spec = spec.ok_or_else(|| at(vline, 1, format!("no group given for `{}`", names[v])))?;
        let gen_line = gens.iter().find(|(n, ..)| *n == names[v]);
        let g = VertexGroup::with_gens(spec.kind.clone(), gen_line.map(|(_, l, ..)| l.clone()));
        let g = g.map_err(|e| match gen_line {
            Some((_, _, line, col)) => at(*line, *col, e.to_string()),
            None => at(spec.line, spec.col, e.to_string()),
        })?;
        vgroups.push(g);
    }
    for (name, _, line, col) in &gens {
        index(name, *line, *col)?;
        if gens.iter().filter(|(n, ..)| n == name).count() > 1 {
            return Err(at(*line, *col, format!("generators for `{name}` given twice")));
        }
    }
    let presentation = Presentation::new(graph, vgroups).map_err(|e| at(vline, 1, e.to_string()))?;

    let mut meta = VertexGroupMeta::derive(&presentation);
    for (_, patch, ..) in metas.iter().filter(|m| m.0.is_none()) {
        meta.vertices.iter_mut().for_each(|m| patch.apply(m));
    }
    for (name, patch, line, col) in &metas {
        if let Some(name) = name {
            patch.apply(&mut meta.vertices[index(name, *line, *col)?]);
        }
    }
    if !meta.is_consistent_with(&presentation) {
        let line = metas.last().map_or(vline, |m| m.2);
        return Err(at(line, 1, "metadata contradicts the groups (a finite group has finite abelianization)"));
    }
    Ok(Config { presentation, meta })
}

fn flag(b: Option<bool>) -> &'static str {
    match b {
        Some(true) => "true",
        Some(false) => "false",
        None => "unknown",
    }
}

/// Renders a config that parses back to the same presentation and metadata.
impl fmt::Display for Config {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.presentation;
        let g = p.graph();
        writeln!(f, "vertices {}", g.names().join(" "))?;
        for (a, b) in g.edges() {
            writeln!(f, "edge {} {}", g.name(a), g.name(b))?;
        }
        for (v, grp) in p.groups().iter().enumerate() {
            let name = g.name(v);
            match grp.kind() {
                GroupKind::Cyclic(n) => writeln!(f, "group {name} cyclic {n}")?,
                GroupKind::InfiniteCyclic => writeln!(f, "group {name} infinite-cyclic")?,
                GroupKind::Table(t) => {
                    writeln!(f, "group {name} table {}", serde_json::to_string(t).map_err(|_| fmt::Error)?)?
                }
            }
            let gens: Vec<String> = grp.generators().iter().map(|s| s.to_string()).collect();
            writeln!(f, "gens {name} {}", gens.join(" "))?;
        }
        for (v, m) in self.meta.vertices.iter().enumerate() {
            writeln!(
                f,
                "meta {} finite={} finite-abelianization={} irreducible={} aut-finite={}",
                g.name(v),
                m.is_finite,
                m.has_finite_abelianization,
                flag(m.is_graphically_irreducible),
                flag(m.aut_is_finite)
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use gpkit::fixtures;

    const C5: &str = "\
# pentagon
vertices v1 v2 v3 v4 v5
edge v1 v2
edge v2 v3
edge v3 v4
edge v4 v5
edge v5 v1
group * cyclic 2
";

    #[test]
    fn pentagon() {
        let c = parse(C5).unwrap();
        let p = &c.presentation;
        assert_eq!(p.n(), 5);
        assert_eq!(p.graph().edges().len(), 5);
        assert!(p.groups().iter().all(|g| g.is_z2()));
        assert_eq!(p.graph(), fixtures::c5().graph());
    }

    #[test]
    fn free_product_matches_fixture() {
        let c = parse("vertices u v\ngroup u cyclic 4\ngroup v cyclic 3\n").unwrap();
        let fp = fixtures::fp();
        assert_eq!(c.presentation.groups(), fp.groups());
        assert_eq!(c.presentation.graph(), fp.graph());
        assert_eq!(c.meta, VertexGroupMeta::derive(&fp));
    }

    #[test]
    fn unknown_vertex_is_positioned() {
        let e = parse("vertices a b\nedge a  c\ngroup * infinite-cyclic\n").unwrap_err();
        assert_eq!(e.to_string(), "2:9: unknown vertex `c`");
    }

    #[test]
    fn bad_table_is_positioned() {
        let e = parse("vertices a\ngroup a table [[0,1],[1,1]]\n").unwrap_err();
        assert!(e.to_string().starts_with("2:9:"), "{e}");
        let e = parse("vertices a\ngroup a table [[0,1],\n").unwrap_err();
        assert!(e.to_string().starts_with("2:15: bad table"), "{e}");
    }

    #[test]
    fn syntax_errors() {
        for (text, want) in [
            ("edge a b\n", "1:1: missing `vertices` line"),
            ("vertices a\ngroup a cyclic x\n", "2:16: `x` is not an order"),
            ("vertices a\ngroup a dihedral\n", "2:9: unknown group kind `dihedral`"),
            ("vertices a a\n", "1:12: duplicate vertex `a`"),
            ("vertices a\n", "1:1: no group given for `a`"),
            ("vertices a\ngroup a cyclic 1\n", "2:9: invalid vertex group: cyclic group order must be at least 2, got 1"),
            ("vertices a\ngroup * cyclic 2\nmeta a finite=maybe\n", "3:8: `maybe` is not true, false or unknown"),
            ("vertices a\ngroup * cyclic 2\nfoo\n", "3:1: unknown directive `foo`"),
        ] {
            let got = parse(text).map(|_| ()).unwrap_err().to_string();
            assert_eq!(got, want, "{text:?}");
        }
    }

    #[test]
    fn metadata_overrides() {
        let c = parse("vertices a b\ngroup * infinite-cyclic\nmeta * aut-finite=unknown\nmeta b irreducible=false\n").unwrap();
        assert_eq!(c.meta.vertices[0].aut_is_finite, None);
        assert_eq!(c.meta.vertices[1].is_graphically_irreducible, Some(false));
        assert_eq!(c.meta.vertices[0].is_graphically_irreducible, Some(true));
        let e = parse("vertices a\ngroup a cyclic 2\nmeta a finite=false\n").unwrap_err();
        assert!(e.to_string().starts_with("3:1:"), "{e}");
    }

    #[test]
    fn round_trip() {
        let s3 = serde_json::to_string(&gpkit::word_engine::s3_table()).unwrap();
        let text = format!("vertices a b c\nedge a b\ngroup a table {s3}\ngens a 1 2\ngroup b infinite-cyclic\ngroup c cyclic 6\nmeta c irreducible=unknown\n");
        let c = parse(&text).unwrap();
        let again = parse(&c.to_string()).unwrap();
        assert_eq!(again.presentation.groups(), c.presentation.groups());
        assert_eq!(again.presentation.graph(), c.presentation.graph());
        assert_eq!(again.meta, c.meta);
        assert_eq!(again.to_string(), c.to_string());
    }
}
