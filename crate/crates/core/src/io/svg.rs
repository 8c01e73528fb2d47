use std::fmt::Write;

use thiserror::Error;

use super::format_real as num;
use crate::error::Error;
use crate::geometry::{path_length, Instance, Point, Route};

pub const MAX_ROUTES: usize = 4;
const CANVAS_WIDTH_PX: f64 = 800.0;

#[derive(Debug, Error)]
pub enum RenderError {
    #[error("route `{label}`: {source}")]
    InvalidRoute { label: String, source: Error },
    #[error("at most {MAX_ROUTES} routes fit on one canvas, got {0}")]
    TooManyRoutes(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteStyle {
    pub stroke: String,
    /// SVG `stroke-dasharray` in units of the stroke width; `None` is solid.
    pub dash: Option<(f64, f64)>,
}

impl RouteStyle {
    /// Palette used for the k-th route when no style is given.
    pub fn default_for(k: usize) -> Self {
        const PALETTE: [(&str, Option<(f64, f64)>); MAX_ROUTES] =
            [("#1f77b4", None), ("#ff7f0e", Some((4.0, 2.0))), ("#2ca02c", None), ("#9467bd", Some((1.0, 2.0)))];
        let (stroke, dash) = PALETTE[k % MAX_ROUTES];
        Self { stroke: stroke.to_string(), dash }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledRoute {
    pub label: String,
    pub route: Route,
    pub style: Option<RouteStyle>,
}

impl LabeledRoute {
    pub fn new(label: impl Into<String>, route: Route) -> Self {
        Self { label: label.into(), route, style: None }
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

/// Draws the instance and up to four routes as a standalone SVG document.
///
/// The start is a red ring, collectibles are filled dots and each route is a
/// polyline beginning at the start. A legend below the map lists every route
/// with its length rounded to whole map units, followed by a caption joining
/// the totals (`"6-5"`).
pub fn render_routes_svg(instance: &Instance, routes: &[LabeledRoute]) -> Result<String, RenderError> {
    if routes.len() > MAX_ROUTES {
        return Err(RenderError::TooManyRoutes(routes.len()));
    }
    let totals = routes
        .iter()
        .map(|r| {
            path_length(instance, &r.route)
                .map_err(|source| RenderError::InvalidRoute { label: r.label.clone(), source })
        })
        .collect::<Result<Vec<f64>, _>>()?;

    let pts: Vec<Point> = std::iter::once(instance.start()).chain(instance.collectibles().iter().copied()).collect();
    let (mut x0, mut y0, mut x1, mut y1) = (f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in &pts {
        x0 = x0.min(p.x);
        y0 = y0.min(p.y);
        x1 = x1.max(p.x);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0);
    let span = if span > 0.0 { span } else { 1.0 };
    let margin = 0.05 * span;
    let (vx, vy) = (x0 - margin, y0 - margin);
    let vw = (x1 - x0) + 2.0 * margin;
    let map_h = (y1 - y0) + 2.0 * margin;
    let line_h = 0.05 * span;
    let legend_h = line_h * (routes.len() as f64 + 1.5);
    let vh = map_h + legend_h;
    let marker = 0.012 * span;
    let stroke_w = 0.004 * span;
    let px_h = (CANVAS_WIDTH_PX * vh / vw).round();

    let mut s = String::new();
    let _ = writeln!(s, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" viewBox="{} {} {} {}" width="{}" height="{}">"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh),
        CANVAS_WIDTH_PX,
        px_h
    );
    let _ = writeln!(
        s,
        r#"<rect class="background" x="{}" y="{}" width="{}" height="{}" fill="white"/>"#,
        num(vx),
        num(vy),
        num(vw),
        num(vh)
    );

    let _ = writeln!(s, r#"<g class="routes" fill="none" stroke-linejoin="round">"#);
    for (k, r) in routes.iter().enumerate() {
        let style = r.style.clone().unwrap_or_else(|| RouteStyle::default_for(k));
        let mut points = format!("{},{}", num(instance.start().x), num(instance.start().y));
        for &i in r.route.order() {
            let p = instance.collectibles()[i];
            let _ = write!(points, " {},{}", num(p.x), num(p.y));
        }
        let dash = style
            .dash
            .map(|(on, off)| format!(r#" stroke-dasharray="{} {}""#, num(on * stroke_w), num(off * stroke_w)))
            .unwrap_or_default();
        let _ = writeln!(
            s,
            r#"<polyline class="route" data-label="{}" stroke="{}" stroke-width="{}"{} points="{}"/>"#,
            escape(&r.label),
            escape(&style.stroke),
            num(stroke_w),
            dash,
            points
        );
    }
    let _ = writeln!(s, "</g>");

    let _ = writeln!(s, r##"<g class="collectibles" fill="#333333">"##);
    for (i, p) in instance.collectibles().iter().enumerate() {
        let _ = writeln!(
            s,
            r#"<circle class="collectible" data-index="{i}" cx="{}" cy="{}" r="{}"/>"#,
            num(p.x),
            num(p.y),
            num(marker)
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(
        s,
        r#"<circle class="start" cx="{}" cy="{}" r="{}" fill="none" stroke="red" stroke-width="{}"/>"#,
        num(instance.start().x),
        num(instance.start().y),
        num(1.8 * marker),
        num(1.5 * stroke_w)
    );

    let font = 0.7 * line_h;
    let _ = writeln!(s, r#"<g class="legend" font-family="sans-serif" font-size="{}">"#, num(font));
    let text_x = vx + margin;
    let mut y = vy + map_h + line_h;
    for (k, (r, total)) in routes.iter().zip(&totals).enumerate() {
        let style = r.style.clone().unwrap_or_else(|| RouteStyle::default_for(k));
        let _ = writeln!(
            s,
            r#"<text class="legend-entry" x="{}" y="{}" fill="{}">{}: {}</text>"#,
            num(text_x),
            num(y),
            escape(&style.stroke),
            escape(&r.label),
            total.round()
        );
        y += line_h;
    }
    if !routes.is_empty() {
        let caption: Vec<String> = totals.iter().map(|t| t.round().to_string()).collect();
        let _ = writeln!(
            s,
            r#"<text class="caption" x="{}" y="{}">Total distances: {}</text>"#,
            num(text_x),
            num(y),
            caption.join("-")
        );
    }
    let _ = writeln!(s, "</g>");
    let _ = writeln!(s, "</svg>");
    Ok(s)
}
