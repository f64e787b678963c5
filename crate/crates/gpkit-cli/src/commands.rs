//! One function per subcommand. Each writes its report to `out` and returns
//! whether the check it performs (if any) passed.

use std::fmt::Write;

use gpkit::aut_structure::{Target, VertexGroupMeta};
use gpkit::crossing::HyperplaneWindow;
use gpkit::qm_geometry::Hyperplane;
use gpkit::trees_embedding::TreeVertex;
use gpkit::{Presentation, Status, Word};
use thiserror::Error;

use crate::config::{Config, ConfigError};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Op(String),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn op(e: impl std::fmt::Display) -> CliError {
    CliError::Op(e.to_string())
}

pub type Outcome = Result<bool, CliError>;

/// `1` and the empty string both denote the identity.
pub fn word(p: &Presentation, text: &str) -> Result<Word, CliError> {
    let t = text.trim();
    if t.is_empty() || t == "1" {
        return Ok(Word::identity());
    }
    p.parse_word(t).map_err(|e| CliError::Op(format!("word `{t}`: {e}")))
}

pub fn show(p: &Presentation, w: &Word) -> String {
    if w.is_identity() {
        "1".to_string()
    } else {
        p.format_word(w)
    }
}

fn show_wall(p: &Presentation, h: &Hyperplane) -> String {
    format!("J_{} at {}", p.graph().name(h.label), show(p, &h.carrier.rep))
}

pub fn reduce(c: &Config, w: &str, classify: bool, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let x = word(p, w)?;
    writeln!(out, "{}", show(p, &x)).unwrap();
    if classify {
        let s = p.support_classify(&x);
        let (conj, core) = p.cyclic_reduce(&x);
        writeln!(
            out,
            "length={} support={} irreducible={} full-support={}",
            x.len(),
            p.graph().render_set(s.support),
            s.is_irreducible,
            s.has_full_support
        )
        .unwrap();
        writeln!(out, "conjugator={} core={}", show(p, &conj), show(p, &core)).unwrap();
    }
    Ok(true)
}

pub fn dist(c: &Config, x: &str, y: &str, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let g = p.graded_distance(&word(p, x)?, &word(p, y)?);
    let mut parts = vec![format!("d={}", g.d)];
    for (u, &du) in g.d_u.iter().enumerate() {
        if du > 0 {
            parts.push(format!("d_{}={du}", p.graph().name(u)));
        }
    }
    parts.push(format!("delta={}", g.delta));
    writeln!(out, "{}", parts.join(" ")).unwrap();
    Ok(true)
}

pub fn hyperplanes(c: &Config, x: &str, y: &str, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let (x, y) = (word(p, x)?, word(p, y)?);
    let hs = p.separating_hyperplanes(&x, &y);
    for h in &hs {
        writeln!(out, "{} delta_J={}", show_wall(p, h), p.delta_j(h, &x, &y)).unwrap();
    }
    writeln!(out, "count={}", hs.len()).unwrap();
    Ok(true)
}

pub fn median(c: &Config, x: &str, y: &str, z: &str, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let (x, y, z) = (word(p, x)?, word(p, y)?, word(p, z)?);
    let t = p.median_triangle(&x, &y, &z).map_err(op)?;
    let corners: Vec<String> = t.corners.iter().map(|w| show(p, w)).collect();
    writeln!(out, "corners: {}", corners.join(" | ")).unwrap();
    writeln!(out, "prism: {}·⟨{}⟩", show(p, &t.prism.rep), p.graph().render_set(t.prism.lambda)).unwrap();
    writeln!(out, "size: {}", t.size).unwrap();
    writeln!(out, "coarse median: {}", show(p, &p.coarse_median(&x, &y, &z))).unwrap();
    Ok(true)
}

pub struct CrossingArgs<'a> {
    pub basepoint: &'a str,
    pub radius: usize,
    pub small: bool,
    pub audit: bool,
    pub axis: Option<&'a str>,
    pub k_max: i64,
    pub search_radius: usize,
    pub ungated: bool,
}

pub fn window(c: &Config, basepoint: &str, radius: usize, small: bool) -> Result<HyperplaneWindow, CliError> {
    let p = &c.presentation;
    p.build_window(&word(p, basepoint)?, radius, small).map_err(op)
}

pub fn crossing(c: &Config, a: &CrossingArgs, out: &mut String) -> Outcome {
    let p = &c.presentation;
    if let Some(g) = a.axis {
        let g = word(p, g)?;
        let ks = -a.k_max..=a.k_max;
        let chain = if a.ungated { p.axis_chain(&g, ks, a.search_radius) } else { p.contracting_axis(&g, ks, a.search_radius) };
        let chain = chain.map_err(op)?;
        writeln!(out, "core={} step={}", show(p, &chain.g), chain.step).unwrap();
        for (i, j, v) in &chain.verdicts {
            writeln!(out, "k={} k={} {} ({})", chain.ks[*i], chain.ks[*j], status_name(v.status), v.rule).unwrap();
        }
        let ok = chain.all_certified() && chain.separation_ok;
        writeln!(out, "separation_ok={} refuted={} certified={ok}", chain.separation_ok, chain.refuted()).unwrap();
        return Ok(ok);
    }
    let w = window(c, a.basepoint, a.radius, a.small)?;
    writeln!(out, "walls={} edges={} small={}", w.len(), w.edge_count(), w.small_mask.iter().filter(|&&b| b).count())
        .unwrap();
    if !a.audit {
        return Ok(true);
    }
    let outer = window(c, a.basepoint, a.radius + 1, a.small)?;
    let (mut certified, mut violations) = (0, 0);
    for (i, h) in w.hyperplanes.iter().enumerate() {
        for k in &w.hyperplanes[i + 1..] {
            if let Some(d) = p.certified_crossing_distance(&w, &outer, h, k) {
                certified += 1;
                let audit = p.delta_estimate_audit(h, k, d);
                if !audit.holds {
                    violations += 1;
                    writeln!(out, "violation: {} {} d_T={d} delta={}", show_wall(p, h), show_wall(p, k), audit.delta)
                        .unwrap();
                }
            }
        }
    }
    writeln!(out, "certified={certified} violations={violations}").unwrap();
    Ok(violations == 0)
}

pub fn coneoff(c: &Config, x: &str, y: &str, bound: usize, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let (x, y) = (word(p, x)?, word(p, y)?);
    let cert = p.block_chain_certificate(&x, &y);
    for (i, b) in cert.blocks.iter().enumerate() {
        writeln!(out, "block {i}: {}", p.graph().render_set(b.labels())).unwrap();
    }
    let d = p.coneoff_distance(&x, &y, bound);
    let shown = d.map_or_else(|| format!(">{bound}"), |d| d.to_string());
    writeln!(out, "d_Y={shown} N={} lower_bound={}", cert.n(), cert.lower_bound()).unwrap();
    Ok(p.check_block_chain(&cert) && d.is_none_or(|d| d >= cert.lower_bound()))
}

pub fn trees(c: &Config, x: &str, y: &str, z: Option<&str>, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let (x, y) = (word(p, x)?, word(p, y)?);
    for u in 0..p.n() {
        let (t, s) = p.tree_distance(u, &x, &y);
        writeln!(out, "{}: T={t} TS={s}", p.graph().name(u)).unwrap();
    }
    if let Some(z) = z {
        let z = word(p, z)?;
        for u in 0..p.n() {
            let m = match p.tree_median(u, &x, &y, &z) {
                TreeVertex::Component(c) => format!("component {}", show(p, &c.rep)),
                TreeVertex::Wall(h) => format!("wall {}", show_wall(p, &h)),
            };
            writeln!(out, "median {}: {m}", p.graph().name(u)).unwrap();
        }
        let d = p.almost_median_defect(&x, &y, &z);
        writeln!(out, "defect eta={} pi={} bound={}", d.eta, d.pi, d.bound).unwrap();
        return Ok(d.eta <= d.bound && d.pi <= d.bound);
    }
    Ok(true)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerdictTarget {
    Group,
    Aut,
    Raag,
    Racg,
    Structure,
    Extension,
    Vastness,
}

fn holds(h: Option<bool>) -> &'static str {
    match h {
        Some(true) => "holds",
        Some(false) => "fails",
        None => "unknown",
    }
}

pub fn verdict(c: &Config, target: VerdictTarget, kernel_finite: bool, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let meta: &VertexGroupMeta = &c.meta;
    let g = p.graph();
    let v = match target {
        VerdictTarget::Structure => {
            let r = p.structure_report(meta).map_err(op)?;
            writeln!(out, "{}", r.formula).unwrap();
            writeln!(out, "clique part: {}", g.render_set(r.decomposition.clique_part)).unwrap();
            for (f, flag) in r.decomposition.factors.iter().zip(&r.factor_flags) {
                writeln!(out, "factor {}: {flag:?}", g.render_set(*f)).unwrap();
            }
            return Ok(true);
        }
        VerdictTarget::Vastness => {
            let r = p.vastness_report(meta);
            writeln!(out, "sq-universal: {}", holds(r.sq_universal)).unwrap();
            writeln!(out, "many quasimorphisms: {}", holds(r.many_quasimorphisms)).unwrap();
            writeln!(out, "not boundedly generated: {}", holds(r.not_boundedly_generated)).unwrap();
            for cond in &r.conditions {
                writeln!(out, "  {}: {} ({})", cond.name, holds(cond.holds), cond.detail).unwrap();
            }
            return Ok(true);
        }
        VerdictTarget::Extension => p.extension_verdict(meta, kernel_finite),
        VerdictTarget::Group => p.acyl_verdict(meta, Target::Group),
        VerdictTarget::Aut => p.acyl_verdict(meta, Target::Aut),
        VerdictTarget::Raag => p.acyl_verdict(meta, Target::Raag),
        VerdictTarget::Racg => p.acyl_verdict(meta, Target::Racg),
    };
    writeln!(out, "{}", v.answer).unwrap();
    for cond in &v.conditions {
        let tag = cond.alternative.map_or_else(String::new, |a| format!("[{a}] "));
        writeln!(out, "  {tag}{}: {} ({})", cond.name, holds(cond.holds), cond.detail).unwrap();
    }
    Ok(true)
}

pub fn genset(c: &Config, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let s = p.build_noncommuting_genset().map_err(op)?;
    for w in &s.words {
        writeln!(out, "{}", show(p, w)).unwrap();
    }
    let commuting = (0..s.words.len())
        .flat_map(|i| (i + 1..s.words.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| p.commutes(&s.words[i], &s.words[j]))
        .count();
    writeln!(out, "count={} complete={} commuting-pairs={commuting}", s.words.len(), s.complete).unwrap();
    Ok(commuting == 0)
}

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Γ itself, or the crossing graph of a window when `radius` is given.
pub fn export_dot(c: &Config, radius: Option<usize>, basepoint: &str, small: bool, out: &mut String) -> Outcome {
    let p = &c.presentation;
    let g = p.graph();
    match radius {
        None => {
            writeln!(out, "graph gamma {{").unwrap();
            for v in 0..g.n() {
                let label = match p.group(v).order() {
                    Some(n) => format!("{} (order {n})", g.name(v)),
                    None => format!("{} (infinite)", g.name(v)),
                };
                writeln!(out, "  {} [label={}];", quote(g.name(v)), quote(&label)).unwrap();
            }
            for (a, b) in g.edges() {
                writeln!(out, "  {} -- {};", quote(g.name(a)), quote(g.name(b))).unwrap();
            }
        }
        Some(r) => {
            let w = window(c, basepoint, r, small)?;
            writeln!(out, "graph crossing {{").unwrap();
            for (i, h) in w.hyperplanes.iter().enumerate() {
                let shape = if w.small_mask[i] { "box" } else { "ellipse" };
                writeln!(out, "  h{i} [label={}, shape={shape}];", quote(&show_wall(p, h))).unwrap();
            }
            for (i, ns) in w.adjacency.iter().enumerate() {
                for &j in ns.iter().filter(|&&j| j > i) {
                    writeln!(out, "  h{i} -- h{j};").unwrap();
                }
            }
        }
    }
    writeln!(out, "}}").unwrap();
    Ok(true)
}

pub fn status_name(s: Status) -> &'static str {
    match s {
        Status::Certified => "certified",
        Status::Refuted => "refuted",
        Status::Unknown => "unknown",
    }
}
