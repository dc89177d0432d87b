//! Self-contained SVG of fitted LD-Gain lines: scatter, line and ±1σ band.

use std::fmt::Write;

use crate::predict::{FitPoint, LinearModel};

const WIDTH: f64 = 640.0;
const HEIGHT: f64 = 420.0;
const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 20.0;
const MARGIN_TOP: f64 = 40.0;
const MARGIN_BOTTOM: f64 = 50.0;
const TICKS: usize = 5;

#[derive(Debug, Clone)]
pub struct PlotOptions {
    pub title: String,
    /// Free text placed in a `<metadata>` comment, e.g. the run configuration.
    pub metadata: Option<String>,
}

impl Default for PlotOptions {
    fn default() -> Self {
        PlotOptions {
            title: "LD-Gain vs cross-domain overlap".to_owned(),
            metadata: None,
        }
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            _ => out.push(c),
        }
    }
    out
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn px(&self, x: f64) -> f64 {
        MARGIN_LEFT + (x - self.x0) / (self.x1 - self.x0) * (WIDTH - MARGIN_LEFT - MARGIN_RIGHT)
    }

    fn py(&self, y: f64) -> f64 {
        HEIGHT
            - MARGIN_BOTTOM
            - (y - self.y0) / (self.y1 - self.y0) * (HEIGHT - MARGIN_TOP - MARGIN_BOTTOM)
    }
}

fn padded(lo: f64, hi: f64) -> (f64, f64) {
    let span = hi - lo;
    if span > 0.0 {
        (lo - 0.05 * span, hi + 0.05 * span)
    } else {
        let pad = if lo == 0.0 { 1.0 } else { lo.abs() * 0.1 };
        (lo - pad, hi + pad)
    }
}

/// Renders `points` with the fitted line of `model` drawn between the
/// smallest and largest γ. Output depends only on the inputs.
///
/// The fitted line's endpoints in data units are carried on the `<line>`
/// element as `data-gamma1`, `data-ldgain1`, `data-gamma2`, `data-ldgain2`.
pub fn render_fit_svg(model: &LinearModel, points: &[FitPoint], options: &PlotOptions) -> String {
    let (gmin, gmax) = if points.is_empty() {
        (0.0, 1.0)
    } else {
        points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| {
                (lo.min(p.gamma), hi.max(p.gamma))
            })
    };
    let (l1, l2) = (model.eval(gmin), model.eval(gmax));
    let sd = model.residual_std;
    let mut ylo = l1.min(l2) - sd;
    let mut yhi = l1.max(l2) + sd;
    for p in points {
        ylo = ylo.min(p.ld_gain);
        yhi = yhi.max(p.ld_gain);
    }
    let (x0, x1) = padded(gmin, gmax);
    let (y0, y1) = padded(ylo, yhi);
    let f = Frame { x0, x1, y0, y1 };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, "<title>{}</title>", escape(&options.title));
    if let Some(meta) = &options.metadata {
        let _ = writeln!(
            s,
            "<metadata><!-- {} --></metadata>",
            meta.replace("--", "- -")
        );
    }
    let _ = writeln!(
        s,
        r#"<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#
    );

    // axes
    let (ax_l, ax_r) = (MARGIN_LEFT, WIDTH - MARGIN_RIGHT);
    let (ax_t, ax_b) = (MARGIN_TOP, HEIGHT - MARGIN_BOTTOM);
    let _ = writeln!(
        s,
        r#"<path class="axes" d="M{ax_l} {ax_t} V{ax_b} H{ax_r}" fill="none" stroke="black"/>"#
    );
    for i in 0..=TICKS {
        let t = i as f64 / TICKS as f64;
        let xv = x0 + t * (x1 - x0);
        let yv = y0 + t * (y1 - y0);
        let (px, py) = (f.px(xv), f.py(yv));
        let _ = writeln!(
            s,
            r#"<line x1="{px:.3}" y1="{ax_b}" x2="{px:.3}" y2="{:.3}" stroke="black"/><text x="{px:.3}" y="{:.3}" text-anchor="middle">{:.2}%</text>"#,
            ax_b + 5.0,
            ax_b + 18.0,
            xv * 100.0
        );
        let _ = writeln!(
            s,
            r#"<line x1="{:.3}" y1="{py:.3}" x2="{ax_l}" y2="{py:.3}" stroke="black"/><text x="{:.3}" y="{:.3}" text-anchor="end">{yv:.1}</text>"#,
            ax_l - 5.0,
            ax_l - 8.0,
            py + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="{:.3}" text-anchor="middle">cross-domain overlap</text>"#,
        (ax_l + ax_r) / 2.0,
        HEIGHT - 12.0
    );
    let _ = writeln!(
        s,
        r#"<text x="16" y="{:.3}" text-anchor="middle" transform="rotate(-90 16 {:.3})">LD-Gain</text>"#,
        (ax_t + ax_b) / 2.0,
        (ax_t + ax_b) / 2.0
    );
    let _ = writeln!(
        s,
        r#"<text x="{:.3}" y="24" text-anchor="middle" font-size="14">{}</text>"#,
        WIDTH / 2.0,
        escape(&options.title)
    );

    // band
    let _ = writeln!(
        s,
        r#"<polygon class="band" points="{:.3},{:.3} {:.3},{:.3} {:.3},{:.3} {:.3},{:.3}" fill="steelblue" fill-opacity="0.2" stroke="none"/>"#,
        f.px(gmin),
        f.py(l1 + sd),
        f.px(gmax),
        f.py(l2 + sd),
        f.px(gmax),
        f.py(l2 - sd),
        f.px(gmin),
        f.py(l1 - sd)
    );
    let _ = writeln!(
        s,
        r#"<line class="fit" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" data-gamma1="{gmin}" data-ldgain1="{l1}" data-gamma2="{gmax}" data-ldgain2="{l2}" stroke="steelblue" stroke-width="2"/>"#,
        f.px(gmin),
        f.py(l1),
        f.px(gmax),
        f.py(l2)
    );
    for p in points {
        let _ = writeln!(
            s,
            r#"<circle class="point" cx="{:.3}" cy="{:.3}" r="4" data-gamma="{}" data-ldgain="{}" fill="darkorange"/>"#,
            f.px(p.gamma),
            f.py(p.ld_gain),
            p.gamma,
            p.ld_gain
        );
    }
    s.push_str("</svg>\n");
    s
}
