//! SVG rendering of a recorded edit-graph search.

use std::fmt::Write as _;

use super::ses::Trace;

const MARGIN: f64 = 40.0;
/// Largest drawing extent; cells shrink to fit.
const MAX_EXTENT: f64 = 1600.0;
/// Above this many cells per side the grid lines are omitted.
const MAX_GRID_LINES: usize = 200;

fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && c != '\t' => out.push('\u{FFFD}'),
            c => out.push(c),
        }
    }
    out
}

/// A standalone SVG 1.1 document: the edit graph (before along x, after
/// along y), diagonal match cells, and for each round `d` the paths that
/// extended every diagonal's furthest-reaching point. Round 0 is drawn as
/// the `origin` group; rounds `d >= 1` as `frontier` groups.
pub fn render_trace_svg(trace: &Trace) -> String {
    let (n, m) = (trace.n, trace.m);
    let cell = (MAX_EXTENT / n.max(m).max(1) as f64).min(28.0);
    let width = MARGIN * 2.0 + cell * n as f64;
    let height = MARGIN * 2.0 + cell * m as f64;
    let px = |x: usize| MARGIN + cell * x as f64;
    let py = |y: usize| MARGIN + cell * y as f64;
    let mut s = String::new();
    s.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    s.push_str("<!DOCTYPE svg PUBLIC \"-//W3C//DTD SVG 1.1//EN\" \"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd\">\n");
    let _ = writeln!(
        s,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width:.1}\" height=\"{height:.1}\" viewBox=\"0 0 {width:.1} {height:.1}\">"
    );
    let _ = writeln!(
        s,
        "<title>edit graph {n}x{m}, D={}{}</title>",
        trace.distance,
        if trace.truncated { " (truncated)" } else { "" }
    );
    s.push_str("<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n");
    if n <= MAX_GRID_LINES && m <= MAX_GRID_LINES {
        s.push_str("<g class=\"grid\" stroke=\"#ccc\" stroke-width=\"1\">\n");
        for x in 0..=n {
            let _ = writeln!(s, "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\"/>", px(x), py(0), px(x), py(m));
        }
        for y in 0..=m {
            let _ = writeln!(s, "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\"/>", px(0), py(y), px(n), py(y));
        }
        s.push_str("</g>\n");
        s.push_str("<g class=\"labels\" font-family=\"monospace\" font-size=\"10\" fill=\"#333\">\n");
        for (x, label) in trace.before_labels.iter().enumerate().take(n) {
            let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">{}</text>", px(x) + cell / 2.0, MARGIN - 8.0, escape(label));
        }
        for (y, label) in trace.after_labels.iter().enumerate().take(m) {
            let _ = writeln!(s, "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">{}</text>", MARGIN - 6.0, py(y) + cell / 2.0 + 3.0, escape(label));
        }
        s.push_str("</g>\n");
    } else {
        let _ = writeln!(s, "<rect class=\"grid\" x=\"{:.1}\" y=\"{:.1}\" width=\"{:.1}\" height=\"{:.1}\" fill=\"none\" stroke=\"#ccc\"/>", px(0), py(0), cell * n as f64, cell * m as f64);
    }
    if !trace.matches.is_empty() {
        s.push_str("<g class=\"matches\" stroke=\"#bbb\" stroke-dasharray=\"2,2\">\n");
        for &(x, y) in &trace.matches {
            let _ = writeln!(s, "<line x1=\"{:.1}\" y1=\"{:.1}\" x2=\"{:.1}\" y2=\"{:.1}\"/>", px(x), py(y), px(x + 1), py(y + 1));
        }
        s.push_str("</g>\n");
    }
    let rounds = trace.rounds.len().max(1);
    for round in &trace.rounds {
        let class = if round.d == 0 { "origin" } else { "frontier" };
        let hue = (round.d * 300 / rounds) % 360;
        let _ = writeln!(
            s,
            "<g class=\"{class}\" data-d=\"{}\" stroke=\"hsl({hue},70%,45%)\" fill=\"hsl({hue},70%,45%)\" stroke-width=\"2\">",
            round.d
        );
        for st in &round.frontier {
            let mut points = String::new();
            if let Some((fx, fy)) = st.from {
                let _ = write!(points, "{:.1},{:.1} ", px(fx), py(fy));
            }
            let _ = write!(
                points,
                "{:.1},{:.1} {:.1},{:.1}",
                px(st.snake_start.0),
                py(st.snake_start.1),
                px(st.end.0),
                py(st.end.1)
            );
            let _ = writeln!(s, "<polyline data-k=\"{}\" points=\"{points}\" fill=\"none\"/>", st.k);
            let _ = writeln!(s, "<circle cx=\"{:.1}\" cy=\"{:.1}\" r=\"3\"/>", px(st.end.0), py(st.end.1));
        }
        s.push_str("</g>\n");
    }
    if trace.truncated {
        let _ = writeln!(s, "<text x=\"{MARGIN:.1}\" y=\"{:.1}\" font-size=\"12\">trace truncated</text>", height - 10.0);
    }
    s.push_str("</svg>\n");
    s
}
