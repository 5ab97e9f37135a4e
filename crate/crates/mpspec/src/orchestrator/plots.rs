//! Deterministic SVG line charts for sweep results: one document per figure
//! family (first harmonic amplitude, second harmonic amplitude, Δ).

use super::trends::Axis;
use super::{SweepResult, SweepRow};
use crate::physics::BindingState;

const WIDTH: f64 = 860.0;
const HEIGHT: f64 = 520.0;
const MARGIN_LEFT: f64 = 80.0;
const MARGIN_RIGHT: f64 = 24.0;
const MARGIN_TOP: f64 = 48.0;
const MARGIN_BOTTOM: f64 = 64.0;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf",
];

/// One rendered chart.
#[derive(Debug, Clone, PartialEq)]
pub struct PlotDocument {
    pub name: String,
    pub svg: String,
}

/// Rendered charts plus warnings for skipped empty series.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PlotSet {
    pub documents: Vec<PlotDocument>,
    pub warnings: Vec<String>,
}

struct Series {
    label: String,
    points: Vec<(f64, f64)>,
}

fn swept_axis(rows: &[SweepRow]) -> Option<Axis> {
    let mut best: Option<(usize, Axis)> = None;
    for axis in Axis::ALL {
        let mut values: Vec<f64> = rows.iter().filter_map(|r| axis.value(r)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() >= 2 {
            let better = match best {
                Some((count, _)) => values.len() > count,
                None => true,
            };
            if better {
                best = Some((values.len(), axis));
            }
        }
    }
    best.map(|(_, axis)| axis)
}

fn group_key(row: &SweepRow, x_axis: Axis, rows: &[SweepRow]) -> String {
    let mut parts = Vec::new();
    for axis in Axis::ALL {
        if axis == x_axis {
            continue;
        }
        let mut values: Vec<f64> = rows.iter().filter_map(|r| axis.value(r)).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() >= 2 {
            if let Some(v) = axis.value(row) {
                parts.push(format!("{}={}", axis.label(), trim_num(v)));
            }
        }
    }
    parts.join(" ")
}

fn trim_num(v: f64) -> String {
    if v == v.trunc() && v.abs() < 1e7 {
        format!("{}", v as i64)
    } else {
        format!("{v}")
    }
}

fn tick_label(v: f64) -> String {
    if v == 0.0 {
        "0".into()
    } else if v.abs() >= 0.01 && v.abs() < 1e5 {
        let s = format!("{v:.3}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        format!("{v:.2e}")
    }
}

fn collect_series(
    rows: &[SweepRow],
    x_axis: Axis,
    value: impl Fn(&SweepRow) -> Option<(String, f64)>,
) -> Vec<Series> {
    let mut series: Vec<Series> = Vec::new();
    for row in rows {
        let Some(x) = x_axis.value(row) else { continue };
        let Some((state_label, y)) = value(row) else { continue };
        let group = group_key(row, x_axis, rows);
        let label = [row.particle.as_str(), state_label.as_str(), group.as_str()]
            .iter()
            .filter(|s| !s.is_empty())
            .cloned()
            .collect::<Vec<_>>()
            .join(" ");
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((x, y)),
            None => series.push(Series {
                label,
                points: vec![(x, y)],
            }),
        }
    }
    for s in &mut series {
        s.points.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    series
}

fn render_chart(title: &str, x_label: &str, y_label: &str, series: &[Series]) -> String {
    let (mut x_min, mut x_max) = (f64::INFINITY, f64::NEG_INFINITY);
    let (mut y_min, mut y_max) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in series {
        for &(x, y) in &s.points {
            x_min = x_min.min(x);
            x_max = x_max.max(x);
            y_min = y_min.min(y);
            y_max = y_max.max(y);
        }
    }
    y_min = y_min.min(0.0);
    if (x_max - x_min).abs() < f64::EPSILON {
        x_max = x_min + 1.0;
    }
    if (y_max - y_min).abs() < f64::EPSILON {
        y_max = y_min + 1.0;
    }
    y_max += 0.05 * (y_max - y_min);

    let plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    let plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    let sx = |x: f64| MARGIN_LEFT + (x - x_min) / (x_max - x_min) * plot_w;
    let sy = |y: f64| MARGIN_TOP + plot_h - (y - y_min) / (y_max - y_min) * plot_h;

    let mut svg = format!(
        r#"<svg version="1.1" width="{WIDTH}" height="{HEIGHT}" xmlns="http://www.w3.org/2000/svg">"#
    );
    svg.push_str(&format!(
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    ));
    svg.push_str(&format!(
        r#"<text x="{}" y="28" font-family="sans-serif" font-size="18" text-anchor="middle">{}</text>"#,
        WIDTH / 2.0,
        title
    ));

    // Frame and ticks.
    svg.push_str(&format!(
        r#"<rect x="{MARGIN_LEFT}" y="{MARGIN_TOP}" width="{plot_w}" height="{plot_h}" fill="none" stroke="black"/>"#
    ));
    for i in 0..=4 {
        let fx = x_min + (x_max - x_min) * i as f64 / 4.0;
        let fy = y_min + (y_max - y_min) * i as f64 / 4.0;
        let px = sx(fx);
        let py = sy(fy);
        svg.push_str(&format!(
            r#"<line x1="{px}" y1="{}" x2="{px}" y2="{}" stroke="black"/>"#,
            MARGIN_TOP + plot_h,
            MARGIN_TOP + plot_h + 6.0
        ));
        svg.push_str(&format!(
            r#"<text x="{px}" y="{}" font-family="sans-serif" font-size="12" text-anchor="middle">{}</text>"#,
            MARGIN_TOP + plot_h + 22.0,
            tick_label(fx)
        ));
        svg.push_str(&format!(
            r#"<line x1="{}" y1="{py}" x2="{MARGIN_LEFT}" y2="{py}" stroke="black"/>"#,
            MARGIN_LEFT - 6.0
        ));
        svg.push_str(&format!(
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12" text-anchor="end">{}</text>"#,
            MARGIN_LEFT - 10.0,
            py + 4.0,
            tick_label(fy)
        ));
    }
    svg.push_str(&format!(
        r#"<text x="{}" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle">{}</text>"#,
        MARGIN_LEFT + plot_w / 2.0,
        HEIGHT - 16.0,
        x_label
    ));
    svg.push_str(&format!(
        r#"<text x="20" y="{}" font-family="sans-serif" font-size="14" text-anchor="middle" transform="rotate(-90 20 {})">{}</text>"#,
        MARGIN_TOP + plot_h / 2.0,
        MARGIN_TOP + plot_h / 2.0,
        y_label
    ));

    // Series polylines, markers, and legend.
    for (i, s) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = s
            .points
            .iter()
            .map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y)))
            .collect();
        svg.push_str(&format!(
            r#"<polyline points="{}" fill="none" stroke="{color}" stroke-width="2"/>"#,
            path.join(" ")
        ));
        for &(x, y) in &s.points {
            svg.push_str(&format!(
                r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#,
                sx(x),
                sy(y)
            ));
        }
        let ly = MARGIN_TOP + 16.0 + 16.0 * i as f64;
        svg.push_str(&format!(
            r#"<rect x="{}" y="{}" width="12" height="12" fill="{color}"/>"#,
            MARGIN_LEFT + 10.0,
            ly - 10.0
        ));
        svg.push_str(&format!(
            r#"<text x="{}" y="{}" font-family="sans-serif" font-size="12">{}</text>"#,
            MARGIN_LEFT + 28.0,
            ly,
            s.label
        ));
    }
    svg.push_str("</svg>");
    svg
}

/// Renders the three figure families of a sweep result: one chart per
/// harmonic amplitude (both binding states) and one for Δ. Families without
/// any plottable points are skipped with a warning record.
pub fn render_plots(result: &SweepResult) -> PlotSet {
    let mut set = PlotSet::default();
    let Some(x_axis) = swept_axis(&result.rows) else {
        set.warnings.push("no swept axis in result; no plots rendered".into());
        return set;
    };

    for (slot, &harmonic) in result.harmonics.iter().enumerate() {
        let series = collect_series(&result.rows, x_axis, |row| {
            Some((String::new(), row.amplitude(slot, BindingState::Unbound)))
        })
        .into_iter()
        .map(|mut s| {
            s.label = format!("{} unbound", s.label);
            s
        })
        .chain(
            collect_series(&result.rows, x_axis, |row| {
                Some((String::new(), row.amplitude(slot, BindingState::Bound)))
            })
            .into_iter()
            .map(|mut s| {
                s.label = format!("{} bound", s.label);
                s
            }),
        )
        .collect::<Vec<_>>();

        if series.iter().all(|s| s.points.is_empty()) {
            set.warnings
                .push(format!("harmonic {harmonic} amplitude family is empty; skipped"));
            continue;
        }
        set.documents.push(PlotDocument {
            name: format!("a{harmonic}.svg"),
            svg: render_chart(
                &format!("{} harmonic {} amplitude", result.plan_name, harmonic),
                x_axis.label(),
                "amplitude (V)",
                &series,
            ),
        });
    }

    let mut delta_series = Vec::new();
    for (slot, &harmonic) in result.harmonics.iter().enumerate() {
        let series = collect_series(&result.rows, x_axis, |row| {
            row.delta_pct[slot].map(|d| (format!("k={harmonic}"), d))
        });
        delta_series.extend(series);
    }
    if delta_series.is_empty() || delta_series.iter().all(|s| s.points.is_empty()) {
        set.warnings.push("delta family is empty; skipped".into());
    } else {
        set.documents.push(PlotDocument {
            name: "delta.svg".into(),
            svg: render_chart(
                &format!("{} percent drop", result.plan_name),
                x_axis.label(),
                "Δ (%)",
                &delta_series,
            ),
        });
    }
    set
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::SolverOptions;
    use crate::orchestrator::SweepRow;

    fn result_with_rows(rows: Vec<SweepRow>) -> SweepResult {
        SweepResult {
            plan_name: "SF-FREQ".into(),
            catalog_version: "test".into(),
            solver: SolverOptions::default(),
            harmonics: [3, 5],
            rows,
        }
    }

    fn row(particle: &str, idx: usize, f_l: f64, delta: Option<f64>) -> SweepRow {
        SweepRow {
            particle: particle.into(),
            grid_index: idx,
            f_l_hz: f_l,
            a_l_oe: 250.0,
            f_h_hz: None,
            a_h_oe: None,
            amplitudes_unbound: [1.0 + f_l, 0.5 + f_l],
            amplitudes_bound: [0.9 + f_l, 0.4 + f_l],
            delta_pct: [delta, delta],
            flag: None,
        }
    }

    #[test]
    fn sweep_produces_three_documents() {
        let rows = vec![
            row("SHS30", 0, 50.0, Some(5.0)),
            row("SHS30", 1, 130.0, Some(6.0)),
            row("SuperMag50", 0, 50.0, Some(2.0)),
            row("SuperMag50", 1, 130.0, Some(2.5)),
        ];
        let set = render_plots(&result_with_rows(rows));
        assert_eq!(set.documents.len(), 3);
        assert!(set.warnings.is_empty());
        let names: Vec<&str> = set.documents.iter().map(|d| d.name.as_str()).collect();
        assert_eq!(names, vec!["a3.svg", "a5.svg", "delta.svg"]);

        // Axis labels carry units.
        for doc in &set.documents {
            assert!(doc.svg.contains("f_L (Hz)"));
            assert!(doc.svg.starts_with("<svg") && doc.svg.ends_with("</svg>"));
        }
        assert!(set.documents[0].svg.contains("amplitude (V)"));
        assert!(set.documents[2].svg.contains("Δ (%)"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let rows = vec![row("P", 0, 50.0, Some(1.0)), row("P", 1, 130.0, Some(2.0))];
        let result = result_with_rows(rows);
        assert_eq!(render_plots(&result), render_plots(&result));
    }

    #[test]
    fn empty_delta_family_is_skipped_with_warning() {
        let rows = vec![row("P", 0, 50.0, None), row("P", 1, 130.0, None)];
        let set = render_plots(&result_with_rows(rows));
        assert_eq!(set.documents.len(), 2);
        assert_eq!(set.warnings.len(), 1);
        assert!(set.warnings[0].contains("delta"));
    }

    #[test]
    fn no_swept_axis_renders_nothing() {
        let rows = vec![row("P", 0, 50.0, Some(1.0))];
        let set = render_plots(&result_with_rows(rows));
        assert!(set.documents.is_empty());
        assert_eq!(set.warnings.len(), 1);
    }
}
