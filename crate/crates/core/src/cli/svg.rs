//! Standalone SVG figures: billiard traces, interval unions on [0,1) and
//! weighted preimage trees. Coordinates are rounded only here, for drawing.

use std::fmt::Write;

use crate::billiard::Table;
use crate::classify::WeightedTree;
use crate::itm::IntervalUnion;
use crate::scalar::Scalar;

const SIZE: f64 = 600.0;
const PAD: f64 = 20.0;

fn header(w: f64, h: f64) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n"
    )
}

/// Table coordinates in [0,1/2]² to pixels, y up.
fn px(x: &Scalar, y: &Scalar) -> (f64, f64) {
    (PAD + 2.0 * SIZE * x.to_f64(), PAD + SIZE - 2.0 * SIZE * y.to_f64())
}

/// The folded table, its mirror and a trajectory polyline. The mirror's
/// reflecting (right) side is a solid line, its transparent (left) side is
/// dashed. A trace that ends where it started is drawn closed.
pub fn trace_svg(table: &Table, pts: &[(Scalar, Scalar)]) -> String {
    let full = SIZE + 2.0 * PAD;
    let mut s = header(full, full);
    let _ = writeln!(
        s,
        "<rect x=\"{PAD}\" y=\"{PAD}\" width=\"{SIZE}\" height=\"{SIZE}\" fill=\"white\" stroke=\"black\" stroke-width=\"2\"/>"
    );
    let (mx, y0) = px(&table.a, &Scalar::zero());
    let (_, y1) = px(&table.a, &table.b);
    let _ = writeln!(
        s,
        "<line class=\"mirror-transmissive\" x1=\"{:.3}\" y1=\"{y0:.3}\" x2=\"{:.3}\" y2=\"{y1:.3}\" stroke=\"#4a90d9\" stroke-width=\"3\" stroke-dasharray=\"6 4\"/>",
        mx - 2.5,
        mx - 2.5
    );
    let _ = writeln!(
        s,
        "<line class=\"mirror-reflective\" x1=\"{:.3}\" y1=\"{y0:.3}\" x2=\"{:.3}\" y2=\"{y1:.3}\" stroke=\"#b22222\" stroke-width=\"3\"/>",
        mx + 2.5,
        mx + 2.5
    );
    if pts.len() > 1 {
        let closed = pts.first() == pts.last();
        let coords: Vec<String> = pts[..pts.len() - usize::from(closed)]
            .iter()
            .map(|(x, y)| {
                let (a, b) = px(x, y);
                format!("{a:.3},{b:.3}")
            })
            .collect();
        let tag = if closed { "polygon" } else { "polyline" };
        let _ = writeln!(
            s,
            "<{tag} class=\"trajectory\" points=\"{}\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>",
            coords.join(" ")
        );
    }
    s.push_str("</svg>\n");
    s
}

/// [0,1) as a bar with the union's pieces filled and optional cut marks.
pub fn interval_union_svg(u: &IntervalUnion, cuts: &[Scalar]) -> String {
    let (w, h) = (SIZE + 2.0 * PAD, 80.0);
    let xp = |v: &Scalar| PAD + SIZE * v.to_f64();
    let mut s = header(w, h);
    let _ = writeln!(
        s,
        "<rect x=\"{PAD}\" y=\"30\" width=\"{SIZE}\" height=\"20\" fill=\"#eeeeee\" stroke=\"black\"/>"
    );
    for [lo, hi] in u.pieces() {
        let _ = writeln!(
            s,
            "<rect class=\"piece\" x=\"{:.3}\" y=\"30\" width=\"{:.3}\" height=\"20\" fill=\"#2e7d32\"><title>[{lo}, {hi})</title></rect>",
            xp(lo),
            xp(hi) - xp(lo)
        );
    }
    for c in cuts {
        let x = xp(c);
        let _ = writeln!(
            s,
            "<line class=\"cut\" x1=\"{x:.3}\" y1=\"22\" x2=\"{x:.3}\" y2=\"58\" stroke=\"#b22222\" stroke-width=\"2\"/>"
        );
    }
    let _ = writeln!(s, "<text x=\"{PAD}\" y=\"74\" font-size=\"12\">measure {}</text>", u.measure());
    s.push_str("</svg>\n");
    s
}

/// Levels left to right; every node labelled with its weight.
pub fn tree_svg(tree: &WeightedTree) -> String {
    const DX: f64 = 90.0;
    const DY: f64 = 28.0;
    let rows = tree.levels.iter().map(Vec::len).max().unwrap_or(1).max(1) as f64;
    let (w, h) = (2.0 * PAD + DX * tree.levels.len() as f64, 2.0 * PAD + DY * rows);
    let pos = |n: usize, i: usize| (PAD + 20.0 + DX * n as f64, PAD + DY * (i as f64 + 0.5));
    let mut s = header(w, h);
    for (n, level) in tree.levels.iter().enumerate().skip(1) {
        for (i, node) in level.iter().enumerate() {
            let (x, y) = pos(n, i);
            let (px_, py_) = pos(n - 1, node.parent.unwrap_or(0));
            let _ = writeln!(
                s,
                "<line x1=\"{x:.1}\" y1=\"{y:.1}\" x2=\"{px_:.1}\" y2=\"{py_:.1}\" stroke=\"#888888\"/>"
            );
        }
    }
    for (n, level) in tree.levels.iter().enumerate() {
        for (i, node) in level.iter().enumerate() {
            let (x, y) = pos(n, i);
            let fill = match node.weight {
                1 => "#b22222",
                -1 => "#4a90d9",
                _ => "white",
            };
            let _ = writeln!(
                s,
                "<g class=\"node\"><circle cx=\"{x:.1}\" cy=\"{y:.1}\" r=\"9\" fill=\"{fill}\" stroke=\"black\"><title>{}</title></circle>\
                 <text x=\"{x:.1}\" y=\"{:.1}\" font-size=\"10\" text-anchor=\"middle\">{:+}</text></g>",
                node.point,
                y + 3.5,
                node.weight
            );
        }
    }
    s.push_str("</svg>\n");
    s
}
