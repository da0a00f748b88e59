//! Deterministic SVG drawings of scenes and candidate sets.
//!
//! The canvas, palette and number formatting are fixed, so equal inputs give
//! byte-identical files.

use std::fmt::Write as _;

use nalgebra::{Vector2, Vector3};

use crate::candidates::Candidate;
use crate::scene::{Scene2D, Scene3D};

pub const CANVAS: f64 = 480.0;
const MARGIN: f64 = 24.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#17becf",
];

struct View {
    half: f64,
}

impl View {
    fn new(extent: f64) -> Self {
        View {
            half: (extent * 1.25).max(1.0),
        }
    }

    fn map(&self, p: Vector2<f64>) -> (f64, f64) {
        let s = (CANVAS / 2.0 - MARGIN) / self.half;
        (CANVAS / 2.0 + p.x * s, CANVAS / 2.0 - p.y * s)
    }
}

fn header(title: &str) -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{c}\" height=\"{c}\" viewBox=\"0 0 {c} {c}\">\n\
         <title>{title}</title>\n\
         <rect width=\"{c}\" height=\"{c}\" fill=\"#ffffff\"/>\n",
        c = CANVAS
    )
}

fn line(out: &mut String, view: &View, a: Vector2<f64>, b: Vector2<f64>, style: &str) {
    let (x1, y1) = view.map(a);
    let (x2, y2) = view.map(b);
    let _ = writeln!(
        out,
        "<line x1=\"{x1:.3}\" y1=\"{y1:.3}\" x2=\"{x2:.3}\" y2=\"{y2:.3}\" {style}/>"
    );
}

fn dot(out: &mut String, view: &View, p: Vector2<f64>, color: &str) {
    let (x, y) = view.map(p);
    let _ = writeln!(out, "<circle cx=\"{x:.3}\" cy=\"{y:.3}\" r=\"4\" fill=\"{color}\"/>");
}

fn extent_2d(s: &Scene2D) -> f64 {
    s.u.abs().max(s.v.abs()).max(s.p.abs()).max(s.q.abs())
}

fn draw_2d(out: &mut String, view: &View, s: &Scene2D, color: &str) {
    let points = [Vector2::zeros(), Vector2::new(s.u, s.p), Vector2::new(s.v, s.q)];
    let reach = view.half * 1.5;
    for angle in [0.0, s.alpha, s.beta] {
        let dir = Vector2::new(angle.cos(), angle.sin());
        line(
            out,
            view,
            -dir * reach,
            dir * reach,
            &format!("stroke=\"{color}\" stroke-width=\"1.5\""),
        );
        for p in &points[1..] {
            let foot = dir * p.dot(&dir);
            line(
                out,
                view,
                *p,
                foot,
                &format!("stroke=\"{color}\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\""),
            );
        }
    }
    for p in points {
        dot(out, view, p, color);
    }
}

/// Fixed oblique viewing direction for spatial scenes.
fn screen(p: &Vector3<f64>) -> Vector2<f64> {
    let (saz, caz) = 0.6_f64.sin_cos();
    let (sel, cel) = 0.35_f64.sin_cos();
    let right = Vector3::new(caz, saz, 0.0);
    let up = Vector3::new(-saz * sel, caz * sel, cel);
    Vector2::new(p.dot(&right), p.dot(&up))
}

fn extent_3d(s: &Scene3D) -> f64 {
    s.point(0).amax().max(s.point(1).amax()).max(1.0)
}

fn draw_3d(out: &mut String, view: &View, s: &Scene3D, size: f64, color: &str) {
    let points = [Vector3::zeros(), s.point(0), s.point(1)];
    let frames = [
        (Vector3::x(), Vector3::y()),
        (s.cam2.p_vec, s.cam2.q_vec),
        (s.cam3.p_vec, s.cam3.q_vec),
    ];
    for (p, q) in frames {
        let corners = [p + q, p - q, -p - q, -p + q].map(|c| screen(&(c * size)));
        for k in 0..4 {
            line(
                out,
                view,
                corners[k],
                corners[(k + 1) % 4],
                &format!("stroke=\"{color}\" stroke-width=\"1\""),
            );
        }
        for x in &points[1..] {
            let foot = p * x.dot(&p) + q * x.dot(&q);
            line(
                out,
                view,
                screen(x),
                screen(&foot),
                &format!("stroke=\"{color}\" stroke-width=\"0.75\" stroke-dasharray=\"4 3\""),
            );
        }
    }
    for p in points {
        dot(out, view, screen(&p), color);
    }
}

fn finish(mut out: String) -> String {
    out.push_str("</svg>\n");
    out
}

fn infeasible(out: &mut String, reason: &str) {
    let _ = writeln!(
        out,
        "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"20\" text-anchor=\"middle\" class=\"annotation\">infeasible</text>",
        x = CANVAS / 2.0,
        y = CANVAS / 2.0
    );
    if !reason.is_empty() {
        let _ = writeln!(
            out,
            "<text x=\"{x}\" y=\"{y}\" font-family=\"monospace\" font-size=\"10\" text-anchor=\"middle\">{r}</text>",
            x = CANVAS / 2.0,
            y = CANVAS / 2.0 + 20.0,
            r = escape(reason)
        );
    }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn svg_scene_2d(s: &Scene2D) -> String {
    let view = View::new(extent_2d(s));
    let mut out = header("scene2d");
    draw_2d(&mut out, &view, s, PALETTE[0]);
    finish(out)
}

pub fn svg_scene_3d(s: &Scene3D) -> String {
    let e = extent_3d(s);
    let view = View::new(e * 1.5);
    let mut out = header("scene3d");
    draw_3d(&mut out, &view, s, e, PALETTE[0]);
    finish(out)
}

fn overlay(out: &mut String, k: usize, residual: f64, body: impl FnOnce(&mut String, &str)) {
    let color = PALETTE[k % PALETTE.len()];
    let _ = writeln!(
        out,
        "<g class=\"candidate\" id=\"candidate-{k}\" data-residual=\"{residual:.3e}\" opacity=\"0.8\">"
    );
    body(out, color);
    out.push_str("</g>\n");
}

/// One overlay group per candidate; an empty set is annotated `infeasible`.
pub fn svg_candidates_2d(cands: &[Candidate<Scene2D>], reason: &str) -> String {
    let mut out = header("candidates2d");
    if cands.is_empty() {
        infeasible(&mut out, reason);
        return finish(out);
    }
    let view = View::new(cands.iter().map(|c| extent_2d(&c.scene)).fold(0.0, f64::max));
    for (k, c) in cands.iter().enumerate() {
        overlay(&mut out, k, c.residual, |o, color| draw_2d(o, &view, &c.scene, color));
    }
    finish(out)
}

pub fn svg_candidates_3d(cands: &[Candidate<Scene3D>], reason: &str) -> String {
    let mut out = header("candidates3d");
    if cands.is_empty() {
        infeasible(&mut out, reason);
        return finish(out);
    }
    let e = cands.iter().map(|c| extent_3d(&c.scene)).fold(0.0, f64::max);
    let view = View::new(e * 1.5);
    for (k, c) in cands.iter().enumerate() {
        overlay(&mut out, k, c.residual, |o, color| {
            draw_3d(o, &view, &c.scene, e, color)
        });
    }
    finish(out)
}
