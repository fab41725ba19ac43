//! Static SVG charts: Betti tables and Hilbert-function bar charts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::grid::GradedBetti;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

const CELL_W: i64 = 44;
const CELL_H: i64 = 24;

/// Betti table in the usual layout: column `i` is the homological index,
/// row `d - i` the degree minus the index; zero entries print as `.`.
pub fn betti_table(title: &str, betti: &GradedBetti) -> String {
    let mut cells: BTreeMap<(i64, usize), usize> = BTreeMap::new();
    for (i, col) in betti.iter().enumerate() {
        for &(d, c) in col {
            *cells.entry((d - i as i64, i)).or_insert(0) += c;
        }
    }
    let rows: Vec<i64> = {
        let mut v: Vec<i64> = cells.keys().map(|k| k.0).collect();
        v.dedup();
        match (v.first(), v.last()) {
            (Some(&lo), Some(&hi)) => (lo..=hi).collect(),
            _ => Vec::new(),
        }
    };
    let ncols = betti.len() as i64;
    let width = CELL_W * (ncols + 1) + 20;
    let height = CELL_H * (rows.len() as i64 + 2) + 40;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="13">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="10" y="20" font-weight="bold">{}</text>"#, escape(title));
    let top = 40;
    for i in 0..ncols {
        let x = 10 + CELL_W * (i + 1) + CELL_W / 2;
        let _ = writeln!(s, r#"<text x="{x}" y="{}" text-anchor="middle">{i}</text>"#, top + CELL_H - 6);
    }
    let y_line = top + CELL_H;
    let _ = writeln!(
        s,
        r#"<line x1="10" y1="{y_line}" x2="{}" y2="{y_line}" stroke="black"/>"#,
        width - 10
    );
    for (k, &row) in rows.iter().enumerate() {
        let y = top + CELL_H * (k as i64 + 2) - 6;
        let _ = writeln!(s, r#"<text x="{}" y="{y}" text-anchor="end">{row}:</text>"#, 10 + CELL_W - 6);
        for i in 0..ncols {
            let x = 10 + CELL_W * (i + 1) + CELL_W / 2;
            let v = cells.get(&(row, i as usize)).map_or(".".to_string(), |c| c.to_string());
            let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="middle">{v}</text>"#);
        }
    }
    s.push_str("</svg>\n");
    s
}

/// Bar chart of `values[p]` against `p = start, start+1, …`.
pub fn hilbert_chart(title: &str, start: i64, values: &[i64]) -> String {
    let bar_w = 28i64;
    let plot_h = 200i64;
    let left = 50i64;
    let top = 40i64;
    let width = left + bar_w * values.len().max(1) as i64 + 20;
    let height = top + plot_h + 40;
    let max = values.iter().copied().max().unwrap_or(0).max(1);
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="monospace" font-size="11">"#
    );
    let _ = writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="10" y="20" font-size="13" font-weight="bold">{}</text>"#, escape(title));
    let base = top + plot_h;
    let _ = writeln!(
        s,
        r#"<line x1="{left}" y1="{base}" x2="{}" y2="{base}" stroke="black"/>"#,
        width - 10
    );
    let _ = writeln!(s, r#"<line x1="{left}" y1="{top}" x2="{left}" y2="{base}" stroke="black"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{max}</text>"#, left - 4, top + 4);
    let _ = writeln!(s, r#"<text x="{}" y="{base}" text-anchor="end">0</text>"#, left - 4);
    for (k, &v) in values.iter().enumerate() {
        let h = v.max(0) * plot_h / max;
        let x = left + bar_w * k as i64 + 3;
        let _ = writeln!(
            s,
            r#"<rect x="{x}" y="{}" width="{}" height="{h}" fill="steelblue"><title>{v}</title></rect>"#,
            base - h,
            bar_w - 6
        );
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#,
            x + (bar_w - 6) / 2,
            base + 14,
            start + k as i64
        );
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn betti_table_cells() {
        let svg = betti_table("F", &vec![vec![(1, 4)], vec![(2, 2)]]);
        assert!(svg.starts_with("<svg"));
        // Both generators sit in row 1.
        assert!(svg.contains(">1:</text>"));
        assert!(svg.contains(">4</text>") && svg.contains(">2</text>"));
        assert!(!svg.contains(">0:</text>"));
    }

    #[test]
    fn hilbert_chart_bars() {
        let svg = hilbert_chart("h", 0, &[0, 3, 7]);
        assert_eq!(svg.matches("<rect x=").count(), 3);
        assert!(svg.contains("<title>7</title>"));
    }
}
