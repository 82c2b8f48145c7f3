//! Static SVG diagrams of decorated regions: the two paths drawn as lattice
//! polygons from the origin, dotted slice-class arrows between them, and one
//! label per decorated edge.

use std::fmt::Write;

use echcomb::lattice::{fmt_rat, Vec2};
use echcomb::region::{Edge, Path, Region};

const SCALE: i64 = 60;
const PAD: i64 = 40;

const STYLE: &str = "\
.axis{stroke:#999;stroke-width:1}
.region{fill:#eee;stroke:none}
.p0{stroke:#c0392b;stroke-width:3}
.p1{stroke:#2c6fbb;stroke-width:3}
.sigma{stroke:#444;stroke-width:1.5;stroke-dasharray:4 3;marker-end:url(#arrow)}
.label{font:13px sans-serif}";

fn symbol(e: &Edge) -> String {
    let pow = |s: &str, m: u32| if m == 1 { s.to_string() } else { format!("{s}^{m}") };
    let (e_sym, h_sym) = if e.c > 0 { ("ě", "ȟ") } else { ("ê", "ĥ") };
    let mut out = String::new();
    if e.me > 0 {
        out += &pow(e_sym, e.me);
    }
    if e.mh > 0 {
        out += &pow(h_sym, e.mh);
    }
    out
}

/// Lattice vertices of a path starting at the origin, one per edge end.
fn vertices(p: &Path) -> Vec<Vec2> {
    let mut v = vec![Vec2::ZERO];
    let mut cur = Vec2::ZERO;
    for e in p.edges.values() {
        cur += (e.m() as i64) * e.v;
        v.push(cur);
    }
    v
}

/// Prefix endpoint of a path after every edge at positions `≤ x`.
fn prefix(p: &Path, x: echcomb::lattice::Rat) -> Vec2 {
    p.edges.range(..=x).fold(Vec2::ZERO, |s, (_, e)| s + (e.m() as i64) * e.v)
}

pub fn render(r: &Region) -> String {
    let (v0, v1) = (vertices(&r.p0), vertices(&r.p1));
    let all: Vec<Vec2> = v0.iter().chain(&v1).copied().collect();
    let min_x = all.iter().map(|p| p.x).min().unwrap_or(0).min(-1);
    let max_x = all.iter().map(|p| p.x).max().unwrap_or(0).max(1);
    let min_y = all.iter().map(|p| p.y).min().unwrap_or(0).min(-1);
    let max_y = all.iter().map(|p| p.y).max().unwrap_or(0).max(1);
    let w = (max_x - min_x) * SCALE + 2 * PAD;
    let h = (max_y - min_y) * SCALE + 2 * PAD;
    let at = |p: Vec2| ((p.x - min_x) * SCALE + PAD, (max_y - p.y) * SCALE + PAD);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, "<style>\n{STYLE}\n</style>");
    let _ = writeln!(
        s,
        r##"<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" orient="auto"><path d="M0 0L10 5L0 10z" fill="#444"/></marker></defs>"##
    );
    let (ox, oy) = at(Vec2::ZERO);
    let _ = writeln!(s, r#"<line class="axis" x1="0" y1="{oy}" x2="{w}" y2="{oy}"/>"#);
    let _ = writeln!(s, r#"<line class="axis" x1="{ox}" y1="0" x2="{ox}" y2="{h}"/>"#);

    if !r.is_empty() {
        let ring: Vec<String> = v0
            .iter()
            .chain(v1.iter().rev())
            .map(|&p| {
                let (x, y) = at(p);
                format!("{x},{y}")
            })
            .collect();
        let _ = writeln!(s, r#"<polygon class="region" points="{}"/>"#, ring.join(" "));
    }

    for (class, path, verts, dy) in [("p0", &r.p0, &v0, 16), ("p1", &r.p1, &v1, -8)] {
        for ((x, e), pair) in path.edges.iter().zip(verts.windows(2)) {
            let ((x1, y1), (x2, y2)) = (at(pair[0]), at(pair[1]));
            let _ = writeln!(s, r#"<line class="{class} edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#);
            let (lx, ly) = ((x1 + x2) / 2 + 4, (y1 + y2) / 2 + dy);
            let _ = writeln!(
                s,
                r#"<text class="label {class}-label" x="{lx}" y="{ly}">{} x={}</text>"#,
                symbol(e),
                fmt_rat(x)
            );
        }
    }

    let xs = r.positions();
    for w2 in xs.windows(2) {
        let (a, b) = (prefix(&r.p0, w2[0]), prefix(&r.p1, w2[0]));
        if a == b {
            continue;
        }
        let ((x1, y1), (x2, y2)) = (at(a), at(b));
        let _ = writeln!(
            s,
            r#"<line class="sigma" data-from="{}" data-to="{}" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>"#,
            fmt_rat(&w2[0]),
            fmt_rat(&w2[1])
        );
    }
    s.push_str("</svg>\n");
    s
}
