//! Minimal SVG line chart of a sweep.

use super::sweep::SweepRow;

pub const WIDTH: f64 = 800.0;
pub const HEIGHT: f64 = 400.0;
const MARGIN: f64 = 40.0;

/// Polyline of `dim_estimate` against `theta` over `[0, pi]` with a dashed
/// horizontal line at `reference`. Fixed 800x400 viewport.
pub fn render_sweep(rows: &[SweepRow], reference: f64) -> String {
    let top = rows
        .iter()
        .map(|r| r.dim_estimate)
        .fold(reference, f64::max)
        .max(1.0)
        * 1.1;
    let x = |theta: f64| MARGIN + theta / std::f64::consts::PI * (WIDTH - 2.0 * MARGIN);
    let y = |v: f64| HEIGHT - MARGIN - v.max(0.0) / top * (HEIGHT - 2.0 * MARGIN);
    let points: Vec<String> = rows
        .iter()
        .map(|r| format!("{:.2},{:.2}", x(r.theta), y(r.dim_estimate)))
        .collect();
    let mut s = String::new();
    s.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{WIDTH}\" height=\"{HEIGHT}\" viewBox=\"0 0 {WIDTH} {HEIGHT}\">\n"
    ));
    s.push_str(&format!("<rect width=\"{WIDTH}\" height=\"{HEIGHT}\" fill=\"white\"/>\n"));
    s.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{b}\" x2=\"{r}\" y2=\"{b}\" stroke=\"black\"/>\n<line x1=\"{MARGIN}\" y1=\"{MARGIN}\" x2=\"{MARGIN}\" y2=\"{b}\" stroke=\"black\"/>\n",
        b = HEIGHT - MARGIN,
        r = WIDTH - MARGIN
    ));
    s.push_str(&format!(
        "<line x1=\"{MARGIN}\" y1=\"{ry:.2}\" x2=\"{r}\" y2=\"{ry:.2}\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n",
        ry = y(reference),
        r = WIDTH - MARGIN
    ));
    s.push_str(&format!(
        "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"1.5\" points=\"{}\"/>\n",
        points.join(" ")
    ));
    s.push_str(&format!(
        "<text x=\"{MARGIN}\" y=\"{t}\" font-size=\"12\">dimension estimate vs theta (reference {reference:.4})</text>\n",
        t = MARGIN - 10.0
    ));
    s.push_str("</svg>\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_polyline_in_fixed_viewport() {
        let rows: Vec<SweepRow> = (0..4)
            .map(|i| SweepRow {
                theta: 0.5 + i as f64,
                dim_estimate: 0.6,
                r_squared: 1.0,
                measure_estimate: 0.1,
                n_points: 10,
            })
            .collect();
        let svg = render_sweep(&rows, 0.68);
        assert!(svg.contains("viewBox=\"0 0 800 400\""));
        assert_eq!(svg.matches("<polyline").count(), 1);
        assert_eq!(svg.matches("stroke-dasharray").count(), 1);
    }
}
