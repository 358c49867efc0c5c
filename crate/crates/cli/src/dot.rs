//! Graphviz output.

use std::fmt::Write;

use fincorr::fincat::{FinCategory, Functor};
use fincorr::profunctor::Correspondence;
use fincorr::straighten::LaxFunctorToCorr;

use crate::error::CliError;
use crate::document::{Entry, Item};
use crate::print::labels;

fn esc(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn node(prefix: &str, name: &str) -> String {
    esc(&format!("{prefix}{name}"))
}

fn category_body(out: &mut String, c: &FinCategory, prefix: &str, indent: &str) {
    for x in c.objects() {
        writeln!(out, "{indent}{} [label={}];", node(prefix, c.object_name(x)), esc(c.object_name(x))).unwrap();
    }
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        writeln!(
            out,
            "{indent}{} -> {} [label={}];",
            node(prefix, c.object_name(c.src(f))),
            node(prefix, c.object_name(c.tgt(f))),
            esc(c.morphism_name(f))
        )
        .unwrap();
    }
}

pub fn category(name: &str, c: &FinCategory) -> String {
    let mut out = format!("digraph {} {{\n", esc(name));
    category_body(&mut out, c, "", "  ");
    out.push_str("}\n");
    out
}

pub fn functor(name: &str, source: &str, target: &str, p: &Functor) -> String {
    let (s, t) = (p.source(), p.target());
    let mut out = format!("digraph {} {{\n", esc(name));
    for (i, (label, c)) in [(source, s), (target, t)].into_iter().enumerate() {
        writeln!(out, "  subgraph cluster_{i} {{\n    label={};", esc(label)).unwrap();
        category_body(&mut out, c, &format!("{i}:"), "    ");
        out.push_str("  }\n");
    }
    for x in s.objects() {
        writeln!(
            out,
            "  {} -> {} [style=dotted];",
            node("0:", s.object_name(x)),
            node("1:", t.object_name(p.on_object(x)))
        )
        .unwrap();
    }
    out.push_str("}\n");
    out
}

pub fn correspondence(name: &str, source: &str, target: &str, f: &Correspondence) -> String {
    let (c, d) = (f.source(), f.target());
    let mut out = format!("digraph {} {{\n", esc(name));
    for (i, (label, cat)) in [(source, c), (target, d)].into_iter().enumerate() {
        writeln!(out, "  subgraph cluster_{i} {{\n    label={};", esc(label)).unwrap();
        category_body(&mut out, cat, &format!("{i}:"), "    ");
        out.push_str("  }\n");
    }
    for x in c.objects() {
        for y in d.objects() {
            for l in labels(f, x, y) {
                writeln!(
                    out,
                    "  {} -> {} [style=dashed, label={}];",
                    node("0:", c.object_name(x)),
                    node("1:", d.object_name(y)),
                    esc(&l)
                )
                .unwrap();
            }
        }
    }
    out.push_str("}\n");
    out
}

/// One cluster per fiber; elements of the correspondences of non-identity
/// base morphisms are dashed edges labeled `f:ξ`.
pub fn lax(name: &str, p: &LaxFunctorToCorr) -> String {
    let base = p.base();
    let mut out = format!("digraph {} {{\n", esc(name));
    for c in base.objects() {
        writeln!(out, "  subgraph cluster_{c} {{\n    label={};", esc(base.object_name(c))).unwrap();
        category_body(&mut out, p.fiber(c), &format!("{}:", base.object_name(c)), "    ");
        out.push_str("  }\n");
    }
    for f in base.morphisms().filter(|&f| !base.is_identity(f)) {
        let (s, t) = (base.src(f), base.tgt(f));
        let arrow = p.arrow(f);
        let (sp, tp) = (format!("{}:", base.object_name(s)), format!("{}:", base.object_name(t)));
        for x in p.fiber(s).objects() {
            for y in p.fiber(t).objects() {
                for l in labels(arrow, x, y) {
                    writeln!(
                        out,
                        "  {} -> {} [style=dashed, label={}];",
                        node(&sp, p.fiber(s).object_name(x)),
                        node(&tp, p.fiber(t).object_name(y)),
                        esc(&format!("{}:{l}", base.morphism_name(f)))
                    )
                    .unwrap();
                }
            }
        }
    }
    out.push_str("}\n");
    out
}

pub fn entry(e: &Entry) -> Result<String, CliError> {
    Ok(match &e.item {
        Item::Category(c) => category(&e.name, c),
        Item::Functor { functor, source, target } => self::functor(&e.name, source, target, functor),
        Item::Correspondence { corr, source, target } => correspondence(&e.name, source, target, corr),
        Item::Lax { lax, .. } => self::lax(&e.name, lax),
        other => {
            return Err(CliError::Usage(format!(
                "`{}` is a {}; dot draws categories, functors, correspondences and lax functors",
                e.name,
                other.kind()
            )))
        }
    })
}
