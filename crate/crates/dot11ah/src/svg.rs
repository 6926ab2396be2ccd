//! Line plots of sweep results as plain SVG.
//!
//! One polyline per PER value. A line is broken wherever the subframe count
//! changes, so aggregated sweeps show their sawtooth. Each point is also a
//! circle whose `<title>` repeats the CSV fields of its row.

use std::fmt::Write as _;

use crate::format::sig;
use crate::sweep::SweepRow;

const WIDTH: f64 = 820.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 150.0;
const TOP: f64 = 50.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

struct Axis {
    min: f64,
    max: f64,
    from: f64,
    to: f64,
}

impl Axis {
    fn map(&self, v: f64) -> f64 {
        if self.max == self.min {
            return (self.from + self.to) / 2.0;
        }
        self.from + (v - self.min) / (self.max - self.min) * (self.to - self.from)
    }
}

/// Step of roughly `span / 5` rounded to 1, 2 or 5 times a power of ten.
fn tick_step(span: f64) -> f64 {
    if span <= 0.0 {
        return 1.0;
    }
    let raw = span / 5.0;
    let pow = 10f64.powf(raw.log10().floor());
    let m = raw / pow;
    let nice = if m < 1.5 {
        1.0
    } else if m < 3.5 {
        2.0
    } else if m < 7.5 {
        5.0
    } else {
        10.0
    };
    nice * pow
}

fn ticks(min: f64, max: f64) -> Vec<f64> {
    let step = tick_step(max - min);
    let first = (min / step).ceil() as i64;
    let last = (max / step + 1e-9).floor() as i64;
    (first..=last).map(|i| i as f64 * step).collect()
}

fn escape(text: &str) -> String {
    text.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}

/// Renders `rows` (ordered by PER, then payload) with the given title.
pub fn sweep_plot(rows: &[SweepRow], title: &str) -> String {
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(
        svg,
        r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="25" text-anchor="middle" font-size="15">{}</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        escape(title)
    );

    let payloads = rows.iter().map(|r| f64::from(r.payload_bytes));
    let x_min = payloads.clone().fold(f64::INFINITY, f64::min);
    let x_max = payloads.fold(f64::NEG_INFINITY, f64::max);
    let y_top = rows.iter().map(|r| r.breakdown.s_mbps).fold(0.0, f64::max);
    let y_max = if y_top > 0.0 { y_top * 1.05 } else { 1.0 };
    if rows.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let x = Axis {
        min: x_min,
        max: x_max,
        from: LEFT,
        to: WIDTH - RIGHT,
    };
    let y = Axis {
        min: 0.0,
        max: y_max,
        from: HEIGHT - BOTTOM,
        to: TOP,
    };

    // Frame, grid and tick labels.
    let _ = writeln!(
        svg,
        r##"<path d="M{l},{t}V{b}H{r}" fill="none" stroke="#000"/>"##,
        l = LEFT,
        t = TOP,
        b = HEIGHT - BOTTOM,
        r = WIDTH - RIGHT
    );
    for v in ticks(x_min, x_max) {
        let px = x.map(v);
        let _ = writeln!(
            svg,
            r##"<path d="M{px:.2},{b}v5" stroke="#000"/><text x="{px:.2}" y="{ty}" text-anchor="middle">{v}</text>"##,
            b = HEIGHT - BOTTOM,
            ty = HEIGHT - BOTTOM + 18.0
        );
    }
    for v in ticks(0.0, y_max) {
        let py = y.map(v);
        let _ = writeln!(
            svg,
            r##"<path d="M{l},{py:.2}H{r}" stroke="#ddd"/><text x="{tx}" y="{ty:.2}" text-anchor="end">{label}</text>"##,
            l = LEFT,
            r = WIDTH - RIGHT,
            tx = LEFT - 6.0,
            ty = py + 4.0,
            label = sig(v, 3)
        );
    }
    let _ = writeln!(
        svg,
        r#"<text x="{}" y="{}" text-anchor="middle">payload (bytes)</text>"#,
        (LEFT + WIDTH - RIGHT) / 2.0,
        HEIGHT - 15.0
    );
    let _ = writeln!(
        svg,
        r#"<text x="20" y="{cy}" text-anchor="middle" transform="rotate(-90 20 {cy})">throughput (Mbps)</text>"#,
        cy = (TOP + HEIGHT - BOTTOM) / 2.0
    );

    // One series per PER value, in the order they appear.
    let mut series: Vec<(f64, Vec<&SweepRow>)> = Vec::new();
    for row in rows {
        match series.iter_mut().find(|(per, _)| *per == row.per) {
            Some((_, points)) => points.push(row),
            None => series.push((row.per, vec![row])),
        }
    }
    for (i, (per, points)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let mut d = String::new();
        let mut prev_k = None;
        for p in points {
            let cmd = if prev_k == Some(p.k) { 'L' } else { 'M' };
            let _ = write!(
                d,
                "{cmd}{:.2},{:.2}",
                x.map(f64::from(p.payload_bytes)),
                y.map(p.breakdown.s_mbps)
            );
            prev_k = Some(p.k);
        }
        let _ = writeln!(
            svg,
            r#"<path class="series" data-per="{per}" d="{d}" fill="none" stroke="{color}" stroke-width="1.5"/>"#
        );
        for p in points {
            let f = p.fields();
            let _ = writeln!(
                svg,
                r#"<circle cx="{:.2}" cy="{:.2}" r="1.5" fill="{color}"><title>payload_bytes={} per={} s_mbps={} k={}</title></circle>"#,
                x.map(f64::from(p.payload_bytes)),
                y.map(p.breakdown.s_mbps),
                f[0],
                f[1],
                f[2],
                f[7]
            );
        }
        let ly = TOP + 10.0 + 20.0 * i as f64;
        let lx = WIDTH - RIGHT + 15.0;
        let _ = writeln!(
            svg,
            r#"<path d="M{lx},{ly}h25" stroke="{color}" stroke-width="2"/><text x="{tx}" y="{ty}">PER {per}</text>"#,
            tx = lx + 32.0,
            ty = ly + 4.0
        );
    }
    svg.push_str("</svg>\n");
    svg
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sweep::{run_sweep, Aggregation, PayloadRange, SweepSpec};
    use dot11ah_core::profiles::ProfileId;

    #[test]
    fn tick_steps() {
        assert_eq!(tick_step(1488.0), 200.0);
        assert_eq!(tick_step(0.13), 0.02);
        assert_eq!(ticks(12.0, 475.0)[0], 100.0);
    }

    #[test]
    fn lines_break_where_k_changes() {
        let spec = SweepSpec {
            aggregation: Aggregation::Auto,
            per_list: vec![0.0],
            payload: PayloadRange {
                start: 12,
                end: 200,
                step: 1,
            },
            ..SweepSpec::new(ProfileId::AhLongHeader)
        };
        let p = spec.resolve_profile(None).unwrap();
        let rows = run_sweep(&p, &spec).unwrap();
        let svg = sweep_plot(&rows, "ah <A-MPDU>");
        let mut ks: Vec<u32> = rows.iter().map(|r| r.k).collect();
        ks.dedup();
        let series = svg
            .lines()
            .find(|l| l.contains("class=\"series\""))
            .unwrap();
        assert_eq!(series.matches('M').count(), ks.len());
        assert_eq!(svg.matches("<circle").count(), rows.len());
        assert!(svg.contains("ah &lt;A-MPDU&gt;"));
    }
}
