//! Static SVG 1.1 emission. Plain shapes only, no scripting, no external
//! references: the plots double as archival records of a run.

use std::path::Path;

use crate::csvio::fmt_f64;
use crate::CliError;

pub struct Svg {
    width: f64,
    height: f64,
    body: String,
}

impl Svg {
    pub fn new(width: f64, height: f64) -> Self {
        Svg { width, height, body: String::new() }
    }

    pub fn line(&mut self, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str, width: f64) {
        self.body.push_str(&format!(
            "  <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>\n",
            fmt_f64(x1), fmt_f64(y1), fmt_f64(x2), fmt_f64(y2), fmt_f64(width)
        ));
    }

    pub fn circle(&mut self, cx: f64, cy: f64, r: f64, stroke: &str, fill: &str) {
        self.body.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" stroke=\"{stroke}\" fill=\"{fill}\"/>\n",
            fmt_f64(cx), fmt_f64(cy), fmt_f64(r)
        ));
    }

    pub fn dot(&mut self, cx: f64, cy: f64, r: f64, fill: &str) {
        self.body.push_str(&format!(
            "  <circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\"/>\n",
            fmt_f64(cx), fmt_f64(cy), fmt_f64(r)
        ));
    }

    pub fn rect(&mut self, x: f64, y: f64, w: f64, h: f64, fill: &str, opacity: f64) {
        self.body.push_str(&format!(
            "  <rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{fill}\" fill-opacity=\"{}\"/>\n",
            fmt_f64(x), fmt_f64(y), fmt_f64(w), fmt_f64(h), fmt_f64(opacity)
        ));
    }

    /// Annulus sector around `(cx, cy)` between radii `r0 < r1` and angles
    /// `a0 < a1` (radians, y-axis already flipped by the caller's mapping).
    pub fn annulus_band(
        &mut self,
        cx: f64,
        cy: f64,
        r0: f64,
        r1: f64,
        a0: f64,
        a1: f64,
        fill: &str,
        opacity: f64,
    ) {
        let large = if a1 - a0 > std::f64::consts::PI { 1 } else { 0 };
        let (x0o, y0o) = (cx + r1 * a0.cos(), cy - r1 * a0.sin());
        let (x1o, y1o) = (cx + r1 * a1.cos(), cy - r1 * a1.sin());
        let (x1i, y1i) = (cx + r0 * a1.cos(), cy - r0 * a1.sin());
        let (x0i, y0i) = (cx + r0 * a0.cos(), cy - r0 * a0.sin());
        self.body.push_str(&format!(
            "  <path d=\"M {} {} A {} {} 0 {large} 0 {} {} L {} {} A {} {} 0 {large} 1 {} {} Z\" fill=\"{fill}\" fill-opacity=\"{}\"/>\n",
            fmt_f64(x1o), fmt_f64(y1o),
            fmt_f64(r1), fmt_f64(r1),
            fmt_f64(x0o), fmt_f64(y0o),
            fmt_f64(x0i), fmt_f64(y0i),
            fmt_f64(r0), fmt_f64(r0),
            fmt_f64(x1i), fmt_f64(y1i),
            fmt_f64(opacity)
        ));
    }

    pub fn text(&mut self, x: f64, y: f64, size: f64, content: &str) {
        self.body.push_str(&format!(
            "  <text x=\"{}\" y=\"{}\" font-family=\"monospace\" font-size=\"{}\">{}</text>\n",
            fmt_f64(x),
            fmt_f64(y),
            fmt_f64(size),
            escape(content)
        ));
    }

    pub fn finish(self) -> String {
        format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n{}</svg>\n",
            self.body,
            w = fmt_f64(self.width),
            h = fmt_f64(self.height)
        )
    }

    pub fn write(self, path: &Path) -> Result<(), CliError> {
        crate::report::write_artifact(path, self.finish().as_bytes())
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
