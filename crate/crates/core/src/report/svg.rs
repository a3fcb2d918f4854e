use std::fmt::Write;

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 360.0;
const MARGIN: f64 = 48.0;

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// A plain bar chart, one bar per label.
pub fn svg_histogram(title: &str, labels: &[String], counts: &[usize]) -> String {
    let n = labels.len().min(counts.len()).max(1);
    let top = counts.iter().copied().max().unwrap_or(0).max(1) as f64;
    let slot = (WIDTH - 2.0 * MARGIN) / n as f64;
    let plot_h = HEIGHT - 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="10">"#
    );
    let _ = writeln!(
        s,
        r#"<text x="{}" y="20" text-anchor="middle" font-size="13">{}</text>"#,
        WIDTH / 2.0,
        escape(title)
    );
    let _ = writeln!(
        s,
        r##"<line x1="{MARGIN}" y1="{y}" x2="{x2}" y2="{y}" stroke="#333"/>"##,
        y = HEIGHT - MARGIN,
        x2 = WIDTH - MARGIN
    );
    for (i, (label, &c)) in labels.iter().zip(counts).enumerate() {
        let h = plot_h * c as f64 / top;
        let x = MARGIN + i as f64 * slot;
        let y = HEIGHT - MARGIN - h;
        let _ = writeln!(
            s,
            r##"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="#4c72b0"><title>{}: {c}</title></rect>"##,
            x + 0.1 * slot,
            y,
            0.8 * slot,
            h,
            escape(label)
        );
        if n <= 24 || i % n.div_ceil(24) == 0 {
            let _ = writeln!(
                s,
                r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#,
                x + slot / 2.0,
                HEIGHT - MARGIN + 14.0,
                escape(label)
            );
        }
    }
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_rect_per_bar() {
        let s = svg_histogram("a < b", &["x".into(), "y".into()], &[3, 0]);
        assert_eq!(s.matches("<rect").count(), 2);
        assert!(s.contains("a &lt; b"));
        assert!(s.ends_with("</svg>\n"));
    }
}
