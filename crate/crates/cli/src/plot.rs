//! Minimal SVG line plots: each series becomes a polyline over shared axes.

pub struct Series {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

const W: f64 = 640.0;
const H: f64 = 400.0;
const MARGIN: f64 = 50.0;

pub fn svg(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let pts = series.iter().flat_map(|s| s.points.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(x, y) in pts {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if x0 > x1 {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 == x0 {
        x1 = x0 + 1.0;
    }
    if y1 == y0 {
        y1 = y0 + 1.0;
    }
    let sx = |x: f64| MARGIN + (x - x0) / (x1 - x0) * (W - 2.0 * MARGIN);
    let sy = |y: f64| H - MARGIN - (y - y0) / (y1 - y0) * (H - 2.0 * MARGIN);
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{W}\" height=\"{H}\" viewBox=\"0 0 {W} {H}\">\n"
    ));
    out.push_str(&format!("<title>{}</title>\n", escape(title)));
    let (l, r, t, b) = (MARGIN, W - MARGIN, MARGIN, H - MARGIN);
    out.push_str(&format!(
        "<g stroke=\"black\"><line x1=\"{l}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\"/><line x1=\"{l}\" y1=\"{b}\" x2=\"{l}\" y2=\"{t}\"/></g>\n"
    ));
    out.push_str(&format!(
        "<g font-size=\"11\"><text x=\"{l}\" y=\"{}\">{x0}</text><text x=\"{r}\" y=\"{}\" text-anchor=\"end\">{x1}</text>\
         <text x=\"{}\" y=\"{b}\" text-anchor=\"end\">{y0}</text><text x=\"{}\" y=\"{t}\" text-anchor=\"end\">{y1}</text>\
         <text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text><text x=\"12\" y=\"{}\" transform=\"rotate(-90 12 {})\" text-anchor=\"middle\">{}</text></g>\n",
        b + 15.0, b + 15.0, l - 4.0, l - 4.0,
        W / 2.0, H - 10.0, escape(x_label), H / 2.0, H / 2.0, escape(y_label)
    ));
    for s in series {
        let coords: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.3},{:.3}", sx(x), sy(y)))
            .collect();
        out.push_str(&format!(
            "<polyline fill=\"none\" stroke=\"black\" data-series=\"{}\" points=\"{}\"/>\n",
            escape(&s.name),
            coords.join(" ")
        ));
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}
