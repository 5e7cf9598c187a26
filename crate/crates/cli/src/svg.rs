//! Barcode plots: one horizontal line per bar, grouped and colored by
//! dimension, with ticks at the filtration levels.

use std::fmt::Write;

use hammology::Rational;

use crate::output::DimensionBars;

const WIDTH: f64 = 720.0;
const LEFT: f64 = 56.0;
const RIGHT: f64 = 24.0;
const TOP: f64 = 24.0;
const ROW: f64 = 12.0;
const GROUP_GAP: f64 = 22.0;
const AXIS: f64 = 40.0;
const COLORS: [&str; 4] = ["#c0392b", "#2471a3", "#1e8449", "#7d3c98"];

fn color(dim: usize) -> &'static str {
    COLORS.get(dim).copied().unwrap_or("#555555")
}

/// Renders the nonempty groups of `groups`. Infinite bars run to the right
/// edge and end in an arrow.
pub fn render(groups: &[DimensionBars], levels: &[Rational]) -> String {
    let top_level = levels
        .iter()
        .chain(groups.iter().flat_map(|g| g.bars.iter().filter_map(|b| b.death.0.as_ref())))
        .map(Rational::to_f64)
        .fold(0.0, f64::max);
    let span = if top_level > 0.0 { top_level * 1.1 } else { 1.0 };
    let plot = WIDTH - LEFT - RIGHT;
    let x = |r: f64| LEFT + plot * r / span;
    let rows: usize = groups.iter().map(|g| g.bars.len()).sum();
    let height = TOP + rows as f64 * ROW + groups.len() as f64 * GROUP_GAP + AXIS;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH:.0}" height="{height:.0}" viewBox="0 0 {WIDTH:.0} {height:.0}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(
        out,
        r#"<defs><marker id="arrow" markerWidth="8" markerHeight="8" refX="6" refY="4" orient="auto"><path d="M0,0 L8,4 L0,8 z" fill="context-stroke"/></marker></defs>"#
    );
    let mut y = TOP;
    for g in groups {
        let c = color(g.dim);
        let _ = writeln!(out, r#"<text x="8" y="{:.1}" fill="{c}">H{}</text>"#, y + 4.0, g.dim);
        for bar in &g.bars {
            let x0 = x(bar.birth.to_f64());
            match &bar.death.0 {
                Some(d) => {
                    let _ = writeln!(
                        out,
                        r#"<line x1="{x0:.2}" y1="{y:.1}" x2="{:.2}" y2="{y:.1}" stroke="{c}" stroke-width="3"/>"#,
                        x(d.to_f64())
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        r#"<line x1="{x0:.2}" y1="{y:.1}" x2="{:.2}" y2="{y:.1}" stroke="{c}" stroke-width="3" marker-end="url(#arrow)"/>"#,
                        WIDTH - RIGHT
                    );
                }
            }
            y += ROW;
        }
        y += GROUP_GAP;
    }
    let axis_y = y - GROUP_GAP / 2.0;
    let _ = writeln!(
        out,
        r##"<line x1="{LEFT:.2}" y1="{axis_y:.1}" x2="{:.2}" y2="{axis_y:.1}" stroke="#000"/>"##,
        WIDTH - RIGHT
    );
    for level in levels {
        let lx = x(level.to_f64());
        let _ = writeln!(
            out,
            r##"<line x1="{lx:.2}" y1="{axis_y:.1}" x2="{lx:.2}" y2="{:.1}" stroke="#000"/>"##,
            axis_y + 5.0
        );
        let _ = writeln!(
            out,
            r#"<text x="{lx:.2}" y="{:.1}" text-anchor="middle">{level}</text>"#,
            axis_y + 17.0
        );
    }
    out.push_str("</svg>\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::output::{BarOut, Death};
    use hammology::Simplex;

    fn bar(b: i64, d: Option<i64>) -> BarOut {
        BarOut {
            birth: Rational::from(b),
            death: Death(d.map(Rational::from)),
            birth_simplex: Simplex::vertex(0),
            death_simplex: None,
            representative: Vec::new(),
        }
    }

    #[test]
    fn one_line_per_bar_with_dimension_colors() {
        let groups = vec![
            DimensionBars {
                dim: 0,
                bars: vec![bar(0, Some(2)), bar(0, None)],
            },
            DimensionBars {
                dim: 1,
                bars: vec![bar(3, Some(4))],
            },
        ];
        let levels: Vec<Rational> = [0, 2, 3, 4].map(Rational::from).to_vec();
        let svg = render(&groups, &levels);
        assert_eq!(svg.matches(r#"stroke-width="3""#).count(), 3);
        assert_eq!(svg.matches(COLORS[0]).count(), 3);
        assert_eq!(svg.matches(COLORS[1]).count(), 2);
        assert_eq!(svg.matches("marker-end").count(), 1);
        assert_eq!(svg, render(&groups, &levels));
    }
}
