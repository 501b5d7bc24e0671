//! Minimal SVG line chart for the query benchmark.

use super::experiments::BenchRow;
use std::fmt::Write;

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 50.0;

/// Mean and max queries per evaluation against k, as a standalone SVG.
pub fn bench_svg(rows: &[BenchRow]) -> String {
    let kmin = rows.iter().map(|r| r.k).min().unwrap_or(0) as f64;
    let kmax = rows.iter().map(|r| r.k).max().unwrap_or(1) as f64;
    let ymax = rows.iter().map(|r| r.max as f64).fold(1.0, f64::max);
    let sx = |k: f64| PAD + (k - kmin) / (kmax - kmin).max(1.0) * (W - 2.0 * PAD);
    let sy = |v: f64| H - PAD - v / ymax * (H - 2.0 * PAD);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{PAD} {PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    for r in rows {
        let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">{}</text>"#, sx(r.k as f64), H - PAD + 18.0, r.k);
    }
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="middle">k</text>"#, W / 2.0, H - 10.0);
    let _ = writeln!(s, r#"<text x="12" y="{:.1}" transform="rotate(-90 12 {:.1})" text-anchor="middle">queries per evaluation</text>"#, H / 2.0, H / 2.0);
    let _ = writeln!(s, r#"<text x="{:.1}" y="{:.1}" text-anchor="end">{ymax}</text>"#, PAD - 6.0, PAD + 4.0);
    for (label, color, get) in [
        ("mean", "steelblue", Box::new(|r: &BenchRow| r.queries_per_eval_mean) as Box<dyn Fn(&BenchRow) -> f64>),
        ("max", "firebrick", Box::new(|r: &BenchRow| r.max as f64)),
    ] {
        let pts: Vec<String> = rows.iter().map(|r| format!("{:.1},{:.1}", sx(r.k as f64), sy(get(r)))).collect();
        let _ = writeln!(s, r#"<polyline points="{}" stroke="{color}" stroke-width="2" fill="none"/>"#, pts.join(" "));
        let ly = if label == "mean" { PAD } else { PAD + 16.0 };
        let _ = writeln!(s, r#"<text x="{:.1}" y="{ly:.1}" fill="{color}">{label}</text>"#, W - PAD - 40.0);
    }
    s.push_str("</svg>\n");
    s
}
