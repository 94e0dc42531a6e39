use std::fmt::Write as _;

use helly_core::engine::ExtInt;

pub const VERSION_COMMENT: &str = concat!("<!-- helly ", env!("CARGO_PKG_VERSION"), " -->");

/// CSV table with a header line; every row must have the header's width.
pub fn csv(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for r in rows {
        debug_assert_eq!(r.len(), header.len());
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

pub fn profile_csv(g: &[ExtInt], c: &[ExtInt]) -> String {
    let rows: Vec<Vec<String>> = g
        .iter()
        .zip(c)
        .enumerate()
        .map(|(k, (g, c))| vec![k.to_string(), g.to_string(), c.to_string()])
        .collect();
    csv(&["k", "g", "c"], &rows)
}

const W: i64 = 640;
const H: i64 = 400;
const LEFT: i64 = 56;
const RIGHT: i64 = 24;
const TOP: i64 = 40;
const BOTTOM: i64 = 48;

/// Step plot of `c` over `k` with `g` as dots, integer ticks on both axes.
pub fn step_svg(title: &str, g: &[ExtInt], c: &[ExtInt]) -> String {
    let kmax = c.len().saturating_sub(1).max(1) as i64;
    let ymax = g
        .iter()
        .chain(c)
        .filter_map(|v| v.finite())
        .max()
        .unwrap_or(1)
        + 1;
    let pw = W - LEFT - RIGHT;
    let ph = H - TOP - BOTTOM;
    // scaled by 100 to keep coordinates integral
    let x = |k: i64| (LEFT * 100 + k * pw * 100 / (kmax + 1)) as f64 / 100.0;
    let y = |v: i64| ((H - BOTTOM) * 100 - v * ph * 100 / ymax) as f64 / 100.0;

    let mut s = String::new();
    writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#).unwrap();
    writeln!(s, "{VERSION_COMMENT}").unwrap();
    writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}" font-family="sans-serif" font-size="12">"#
    )
    .unwrap();
    writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<text x="{}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        W / 2,
        escape(title)
    )
    .unwrap();
    writeln!(
        s,
        r#"<path d="M{} {} H{} M{} {} V{}" stroke="black" fill="none"/>"#,
        x(0),
        y(0),
        x(kmax + 1),
        x(0),
        y(0),
        y(ymax)
    )
    .unwrap();
    for k in 0..=kmax {
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{k}</text>"#,
            x(k),
            y(0) + 18.0
        )
        .unwrap();
    }
    for v in 0..=ymax {
        writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="end">{v}</text>"#,
            x(0) - 8.0,
            y(v) + 4.0
        )
        .unwrap();
        writeln!(
            s,
            r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#dddddd"/>"##,
            x(0),
            y(v),
            x(kmax + 1),
            y(v)
        )
        .unwrap();
    }
    writeln!(
        s,
        r#"<text x="{}" y="{}" text-anchor="middle">k</text>"#,
        x(kmax + 1) - 8.0,
        H - 8
    )
    .unwrap();

    let mut pts = Vec::new();
    for (k, v) in c.iter().enumerate() {
        if let Some(v) = v.finite() {
            let k = k as i64;
            pts.push(format!("{},{}", x(k), y(v)));
            pts.push(format!("{},{}", x(k + 1), y(v)));
        }
    }
    writeln!(
        s,
        r#"<polyline points="{}" stroke="steelblue" stroke-width="2" fill="none"/>"#,
        pts.join(" ")
    )
    .unwrap();
    for (k, v) in g.iter().enumerate() {
        if let Some(v) = v.finite() {
            let k = k as i64;
            writeln!(
                s,
                r#"<circle cx="{}" cy="{}" r="3" fill="firebrick"/>"#,
                (x(k) + x(k + 1)) / 2.0,
                y(v)
            )
            .unwrap();
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(t: &str) -> String {
    t.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;
    use ExtInt::{Fin, NegInf};

    #[test]
    fn csv_uses_minus_inf() {
        let s = profile_csv(&[Fin(4), NegInf], &[Fin(4), Fin(3)]);
        assert_eq!(s, "k,g,c\n0,4,4\n1,-inf,3\n");
    }

    #[test]
    fn svg_has_one_polyline_and_version_line() {
        let s = step_svg("t", &[Fin(4), NegInf, Fin(6)], &[Fin(4), Fin(5), Fin(6)]);
        assert_eq!(s.matches("<polyline").count(), 1);
        assert_eq!(s.matches("<circle").count(), 2);
        assert_eq!(s.lines().nth(1), Some(VERSION_COMMENT));
    }
}
