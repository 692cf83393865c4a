//! Deterministic SVG 1.1 writer.
//!
//! Coordinates are emitted with a fixed decimal format so identical inputs
//! produce byte-identical files. The viewBox is the world bounding box of
//! the rendered body plus a 10% margin; the y axis is flipped in the
//! emitted coordinates so figures read with y pointing up.

use hedgehog_core::P2;

/// Fixed-precision number formatting: six decimals, trailing zeros trimmed.
pub fn num(v: f64) -> String {
    let mut s = format!("{v:.6}");
    if s.contains('.') {
        while s.ends_with('0') {
            s.pop();
        }
        if s.ends_with('.') {
            s.pop();
        }
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

pub struct Canvas {
    width: u32,
    height: u32,
    min: P2,
    max: P2,
    y_sum: f64,
    elements: Vec<String>,
}

impl Canvas {
    /// A canvas whose viewBox covers `bbox` plus a 10% margin per side.
    pub fn new(width: u32, height: u32, bbox: (P2, P2)) -> Canvas {
        let (min, max) = bbox;
        Canvas {
            width,
            height,
            min,
            max,
            y_sum: min.y + max.y,
            elements: Vec::new(),
        }
    }

    /// World-to-figure mapping: y is mirrored about the bbox midline.
    fn map(&self, p: P2) -> P2 {
        P2::new(p.x, self.y_sum - p.y)
    }

    /// Stroke width scaled to the figure: 0.4% of the larger bbox side.
    pub fn stroke_width(&self) -> f64 {
        let side = (self.max.x - self.min.x).max(self.max.y - self.min.y);
        (side * 0.004).max(1e-9)
    }

    /// Dot radius scaled to the figure.
    pub fn dot_radius(&self) -> f64 {
        self.stroke_width() * 2.5
    }

    pub fn polyline(&mut self, pts: &[P2], closed: bool, stroke: &str, dashed: bool) {
        if pts.is_empty() {
            return;
        }
        let mut d = String::new();
        for (i, p) in pts.iter().enumerate() {
            let q = self.map(*p);
            d.push_str(if i == 0 { "M " } else { " L " });
            d.push_str(&num(q.x));
            d.push(' ');
            d.push_str(&num(q.y));
        }
        if closed {
            d.push_str(" Z");
        }
        let dash = if dashed {
            let w = self.stroke_width();
            format!(
                " stroke-dasharray=\"{} {}\"",
                num(3.0 * w),
                num(3.0 * w)
            )
        } else {
            String::new()
        };
        self.elements.push(format!(
            "<path d=\"{d}\" fill=\"none\" stroke=\"{stroke}\" stroke-width=\"{}\"{dash}/>",
            num(self.stroke_width())
        ));
    }

    pub fn segment(&mut self, a: P2, b: P2, stroke: &str, dashed: bool) {
        self.polyline(&[a, b], false, stroke, dashed);
    }

    /// A dot: filled, or hollow (white fill with a stroked outline).
    pub fn dot(&mut self, p: P2, color: &str, filled: bool) {
        let q = self.map(p);
        let (fill, stroke) = if filled {
            (color.to_string(), "none".to_string())
        } else {
            ("#ffffff".to_string(), color.to_string())
        };
        self.elements.push(format!(
            "<circle cx=\"{}\" cy=\"{}\" r=\"{}\" fill=\"{fill}\" stroke=\"{stroke}\" stroke-width=\"{}\"/>",
            num(q.x),
            num(q.y),
            num(self.dot_radius()),
            num(self.stroke_width())
        ));
    }

    pub fn finish(self) -> String {
        let w = self.max.x - self.min.x;
        let h = self.max.y - self.min.y;
        let mx = 0.1 * w.max(1e-9);
        let my = 0.1 * h.max(1e-9);
        // The y flip mirrors about the bbox midline, so the mapped bbox
        // occupies the same interval as the original.
        let view = format!(
            "{} {} {} {}",
            num(self.min.x - mx),
            num(self.min.y - my),
            num(w + 2.0 * mx),
            num(h + 2.0 * my)
        );
        let mut out = String::new();
        out.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" \
             width=\"{}\" height=\"{}\" viewBox=\"{view}\">\n",
            self.width, self.height
        ));
        for e in &self.elements {
            out.push_str(e);
            out.push('\n');
        }
        out.push_str("</svg>\n");
        out
    }
}

/// Bounding box of a nonempty point set.
pub fn bbox(pts: &[P2]) -> (P2, P2) {
    let mut min = P2::new(f64::INFINITY, f64::INFINITY);
    let mut max = P2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        min.x = min.x.min(p.x);
        min.y = min.y.min(p.y);
        max.x = max.x.max(p.x);
        max.y = max.y.max(p.y);
    }
    (min, max)
}
