//! Canonical printer. Parsing the output of [`render`] and rendering again
//! gives the same text.

use std::fmt::Write;

use fincorr::fincat::{FinCategory, Functor};
use fincorr::morita::{MonoidInSet, SetBimodule};
use fincorr::profunctor::Correspondence;
use fincorr::span::Span;
use fincorr::straighten::LaxFunctorToCorr;

use crate::document::{distinct_labels, Document, Entry, Item};
use crate::syntax::quote;

fn line(out: &mut String, tokens: &[&str]) {
    let quoted: Vec<String> = tokens.iter().map(|t| quote(t)).collect();
    writeln!(out, "  {}", quoted.join(" ")).expect("writing to a string");
}

fn open(out: &mut String, kind: &str, name: &str, header: &[&str]) {
    let mut tokens = vec![kind.to_string(), quote(name)];
    tokens.extend(header.iter().map(|t| quote(t)));
    writeln!(out, "{}", tokens.join(" ")).expect("writing to a string");
}

fn close(out: &mut String) {
    out.push_str("end\n");
}

pub fn render(doc: &Document) -> String {
    doc.entries.iter().map(render_entry).collect::<Vec<_>>().join("\n")
}

pub fn render_entry(entry: &Entry) -> String {
    let name = entry.name.as_str();
    match &entry.item {
        Item::Category(c) => category(name, c),
        Item::Functor { functor, source, target } => self::functor(name, source, target, functor),
        Item::Correspondence { corr, source, target } => correspondence(name, source, target, corr),
        Item::Monoid(m) => monoid(name, m),
        Item::Bimodule { module, left, right } => bimodule(name, left, right, module),
        Item::Span(s) => span(name, s),
        Item::Chain {
            cell,
            algebras,
            modules,
            filled,
        } => {
            let mut out = String::new();
            open(&mut out, "chain", name, &[]);
            for (i, a) in algebras.iter().enumerate() {
                line(&mut out, &["algebra", &i.to_string(), a]);
            }
            for (&(i, j), m) in modules {
                line(&mut out, &["module", &i.to_string(), &j.to_string(), m]);
            }
            if !filled {
                for (&(i, j, k), mu) in cell.structure_maps() {
                    let (mij, mjk, mik) = (cell.module(i, j), cell.module(j, k), cell.module(i, k));
                    let (ai, aj, ak) = (&cell.algebras()[i], &cell.algebras()[j], &cell.algebras()[k]);
                    for a in ai.objects() {
                        for b in aj.objects() {
                            for c in ak.objects() {
                                let (lx, ly, lz) = (labels(mij, a, b), labels(mjk, b, c), labels(mik, a, c));
                                for (x, label_x) in lx.iter().enumerate() {
                                    for (y, label_y) in ly.iter().enumerate() {
                                        let z = mu.at(mjk, a, b, c, x, y);
                                        let (si, sj, sk) = (i.to_string(), j.to_string(), k.to_string());
                                        line(
                                            &mut out,
                                            &[
                                                "mu",
                                                &si,
                                                &sj,
                                                &sk,
                                                ai.object_name(a),
                                                aj.object_name(b),
                                                ak.object_name(c),
                                                label_x,
                                                label_y,
                                                "=",
                                                &lz[z],
                                            ],
                                        );
                                    }
                                }
                            }
                        }
                    }
                }
            }
            close(&mut out);
            out
        }
        Item::Lax {
            lax,
            base,
            fibers,
            arrows,
        } => self::lax(name, base, fibers, arrows, lax),
    }
}

/// Element labels of `F(c, d)`, made distinct.
pub fn labels(f: &Correspondence, c: usize, d: usize) -> Vec<String> {
    distinct_labels(f.names(c, d))
}

pub fn category(name: &str, c: &FinCategory) -> String {
    let mut out = String::new();
    open(&mut out, "category", name, &[]);
    for x in c.objects() {
        line(&mut out, &["object", c.object_name(x), c.morphism_name(c.identity(x))]);
    }
    for f in c.morphisms().filter(|&f| !c.is_identity(f)) {
        line(
            &mut out,
            &["morphism", c.morphism_name(f), ":", c.object_name(c.src(f)), "->", c.object_name(c.tgt(f))],
        );
    }
    for (f, g) in c.composable_pairs() {
        if !c.is_identity(f) && !c.is_identity(g) {
            line(
                &mut out,
                &["compose", c.morphism_name(g), c.morphism_name(f), "=", c.morphism_name(c.compose(g, f))],
            );
        }
    }
    close(&mut out);
    out
}

pub fn functor(name: &str, source: &str, target: &str, p: &Functor) -> String {
    let (s, t) = (p.source(), p.target());
    let mut out = String::new();
    open(&mut out, "functor", name, &[":", source, "->", target]);
    for x in s.objects() {
        line(&mut out, &["object", s.object_name(x), t.object_name(p.on_object(x))]);
    }
    for f in s.morphisms().filter(|&f| !s.is_identity(f)) {
        line(&mut out, &["morphism", s.morphism_name(f), t.morphism_name(p.on_morphism(f))]);
    }
    close(&mut out);
    out
}

pub fn correspondence(name: &str, source: &str, target: &str, f: &Correspondence) -> String {
    let (c_cat, d_cat) = (f.source(), f.target());
    let mut out = String::new();
    open(&mut out, "correspondence", name, &[":", source, "->", target]);
    for c in c_cat.objects() {
        for d in d_cat.objects() {
            for l in labels(f, c, d) {
                line(&mut out, &["element", c_cat.object_name(c), d_cat.object_name(d), &l]);
            }
        }
    }
    for u in c_cat.morphisms().filter(|&u| !c_cat.is_identity(u)) {
        for d in d_cat.objects() {
            let (from, to) = (labels(f, c_cat.tgt(u), d), labels(f, c_cat.src(u), d));
            for (x, lx) in from.iter().enumerate() {
                let y = f.act_left(u, d, x);
                line(&mut out, &["left", c_cat.morphism_name(u), d_cat.object_name(d), lx, "=", &to[y]]);
            }
        }
    }
    for c in c_cat.objects() {
        for v in d_cat.morphisms().filter(|&v| !d_cat.is_identity(v)) {
            let (from, to) = (labels(f, c, d_cat.src(v)), labels(f, c, d_cat.tgt(v)));
            for (x, lx) in from.iter().enumerate() {
                let y = f.act_right(c, v, x);
                line(&mut out, &["right", c_cat.object_name(c), d_cat.morphism_name(v), lx, "=", &to[y]]);
            }
        }
    }
    close(&mut out);
    out
}

pub fn monoid(name: &str, m: &MonoidInSet) -> String {
    let mut out = String::new();
    open(&mut out, "monoid", name, &[]);
    let names = m.names();
    for n in names {
        line(&mut out, &["element", n]);
    }
    line(&mut out, &["unit", &names[m.unit()]]);
    for a in (0..m.len()).filter(|&a| a != m.unit()) {
        for b in (0..m.len()).filter(|&b| b != m.unit()) {
            line(&mut out, &["product", &names[a], &names[b], "=", &names[m.mul(a, b)]]);
        }
    }
    close(&mut out);
    out
}

pub fn bimodule(name: &str, left: &str, right: &str, m: &SetBimodule) -> String {
    let mut out = String::new();
    open(&mut out, "bimodule", name, &["left", left, "right", right]);
    let names = distinct_labels(m.names());
    for n in &names {
        line(&mut out, &["element", n]);
    }
    let (a, b) = (m.left_monoid(), m.right_monoid());
    for x in (0..a.len()).filter(|&x| x != a.unit()) {
        for (i, n) in names.iter().enumerate() {
            line(&mut out, &["left", &a.names()[x], n, "=", &names[m.left_act(x, i)]]);
        }
    }
    for (i, n) in names.iter().enumerate() {
        for x in (0..b.len()).filter(|&x| x != b.unit()) {
            line(&mut out, &["right", n, &b.names()[x], "=", &names[m.right_act(i, x)]]);
        }
    }
    close(&mut out);
    out
}

pub fn span(name: &str, s: &Span) -> String {
    let mut out = String::new();
    open(&mut out, "span", name, &[]);
    for (side, leg) in [("left", &s.left), ("right", &s.right)] {
        let mut tokens = vec![side.to_string(), leg.target().to_string(), ":".to_string()];
        tokens.extend(leg.values().iter().map(|v| v.to_string()));
        let refs: Vec<&str> = tokens.iter().map(String::as_str).collect();
        line(&mut out, &refs);
    }
    close(&mut out);
    out
}

pub fn lax(name: &str, base_name: &str, fibers: &[String], arrows: &[String], p: &LaxFunctorToCorr) -> String {
    let base = p.base();
    let mut out = String::new();
    open(&mut out, "lax", name, &["over", base_name]);
    for c in base.objects() {
        line(&mut out, &["fiber", base.object_name(c), &fibers[c]]);
    }
    for f in base.morphisms() {
        line(&mut out, &["arrow", base.morphism_name(f), &arrows[f]]);
    }
    for c in base.objects() {
        let (fib, arrow) = (p.fiber(c), p.arrow(base.identity(c)));
        for x in fib.objects() {
            for y in fib.objects() {
                for (e, l) in labels(arrow, x, y).iter().enumerate() {
                    let m = p.unit_morphism(c, x, y, e);
                    line(
                        &mut out,
                        &["unit", base.object_name(c), fib.object_name(x), fib.object_name(y), l, "=", fib.morphism_name(m)],
                    );
                }
            }
        }
    }
    for (f, g) in base.composable_pairs() {
        let (pf, pg, pgf) = (p.arrow(f), p.arrow(g), p.arrow(base.compose(g, f)));
        let (fx, fy, fz) = (pf.source(), pf.target(), pg.target());
        for x in fx.objects() {
            for y in fy.objects() {
                for z in fz.objects() {
                    let (lxi, leta, lzeta) = (labels(pf, x, y), labels(pg, y, z), labels(pgf, x, z));
                    for (xi, lx) in lxi.iter().enumerate() {
                        for (eta, le) in leta.iter().enumerate() {
                            let zeta = p.mu(f, g, x, y, z, xi, eta);
                            line(
                                &mut out,
                                &[
                                    "comparator",
                                    base.morphism_name(f),
                                    base.morphism_name(g),
                                    fx.object_name(x),
                                    fy.object_name(y),
                                    fz.object_name(z),
                                    lx,
                                    le,
                                    "=",
                                    &lzeta[zeta],
                                ],
                            );
                        }
                    }
                }
            }
        }
    }
    close(&mut out);
    out
}
