//! Static SVG chart of sequence length against colour count, log-scaled in L.

use std::fmt::Write;

use twirlc_core::compiler::scaling::{Family, ScalingRow};

const W: f64 = 640.0;
const H: f64 = 400.0;
const PAD: f64 = 48.0;
const COLOURS: [&str; 9] = ["#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d", "#666666", "#000000"];

pub fn svg(rows: &[ScalingRow]) -> String {
    let chi_max = rows.iter().map(|r| r.chi).max().unwrap_or(1).max(2) as f64;
    let chi_min = rows.iter().map(|r| r.chi).min().unwrap_or(1) as f64;
    let l_max = rows.iter().map(|r| (r.length as f64).max(r.baseline as f64)).fold(2.0, f64::max);
    let x = |c: f64| PAD + (c - chi_min) / (chi_max - chi_min).max(1.0) * (W - 2.0 * PAD);
    let y = |l: f64| H - PAD - l.log2() / l_max.log2() * (H - 2.0 * PAD);

    let mut out = String::new();
    let _ = writeln!(out, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" font-family="sans-serif" font-size="11">"#);
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<path d="M{PAD} {PAD} V{} H{}" stroke="black" fill="none"/>"#,
        H - PAD,
        W - PAD
    );
    let _ = writeln!(out, r#"<text x="{}" y="{}" text-anchor="middle">colours</text>"#, W / 2.0, H - 12.0);
    let _ = writeln!(out, r#"<text x="12" y="{}" transform="rotate(-90 12 {})" text-anchor="middle">L (log scale)</text>"#, H / 2.0, H / 2.0);

    let mut series: Vec<(String, Vec<(f64, f64)>)> = Family::ALL
        .iter()
        .map(|f| {
            let pts = rows.iter().filter(|r| r.family == *f).map(|r| (r.chi as f64, r.length as f64)).collect();
            (f.name().to_string(), pts)
        })
        .filter(|(_, p): &(String, Vec<(f64, f64)>)| !p.is_empty())
        .collect();
    let mut base: Vec<(f64, f64)> = rows.iter().map(|r| (r.chi as f64, r.baseline as f64)).collect();
    base.sort_by(|a, b| a.0.total_cmp(&b.0));
    base.dedup();
    series.push(("4χ".into(), base));

    for (i, (name, pts)) in series.iter().enumerate() {
        let colour = COLOURS[i % COLOURS.len()];
        let d: Vec<String> = pts
            .iter()
            .enumerate()
            .map(|(j, &(c, l))| format!("{}{:.1} {:.1}", if j == 0 { 'M' } else { 'L' }, x(c), y(l)))
            .collect();
        let dash = if name == "4χ" { r#" stroke-dasharray="4 3""# } else { "" };
        let _ = writeln!(out, r#"<path d="{}" stroke="{colour}" fill="none"{dash}/>"#, d.join(" "));
        let _ = writeln!(
            out,
            r#"<text x="{}" y="{}" fill="{colour}">{name}</text>"#,
            W - PAD - 90.0,
            PAD + 14.0 * i as f64
        );
    }
    out.push_str("</svg>\n");
    out
}
