//! Published constants recomputed from scratch, one row each.

use std::f64::consts::PI;
use std::fmt::Write as _;

use curvemetrics::constructions::{
    baseball_curve, bound_table, gamma_h, gamma_h_length, l5_curve, l5_width_upper_bound, solve_h0,
};
use curvemetrics::horizon::{horizon, i_max};
use curvemetrics::integral::min_max_norm_bound;
use curvemetrics::metrics::{inradius, width3d, DEFAULT_INRADIUS_TOL, DEFAULT_WIDTH_TOL};
use curvemetrics::Result;

pub struct Row {
    pub name: &'static str,
    pub value: f64,
    pub expected: String,
    pub pass: bool,
}

fn close(name: &'static str, value: f64, target: f64, tol: f64) -> Row {
    Row {
        name,
        value,
        expected: format!("{target} ± {tol:e}"),
        pass: (value - target).abs() <= tol,
    }
}

fn within(name: &'static str, value: f64, lo: f64, hi: f64) -> Row {
    Row {
        name,
        value,
        expected: format!("in ({lo}, {hi})"),
        pass: value > lo && value < hi,
    }
}

fn at_least(name: &'static str, value: f64, bound: f64) -> Row {
    Row {
        name,
        value,
        expected: format!(">= {bound}"),
        pass: value >= bound,
    }
}

pub fn run() -> Result<Vec<Row>> {
    let mut rows = Vec::new();

    let h0 = solve_h0(1e-12)?;
    let ratio = gamma_h_length(h0) / h0;
    rows.push(within("h0", h0, 1.97078, 1.97080));
    rows.push(within("L(h0)/h0", ratio, 5.114, 5.1151));
    let g = gamma_h(h0)?;
    let (w, _) = width3d(&g.sample(4000.0 / g.length())?, DEFAULT_WIDTH_TOL)?;
    rows.push(close("width of Γ_h0 sample vs h0", w, h0, 1e-3));

    let z = l5_curve()?;
    let cert = l5_width_upper_bound();
    rows.push(close("L5 length", z.length(), 5.0903, 5e-4));
    rows.push(close("L5 width certificate", cert, 0.980582, 1e-4));
    rows.push(at_least("L5 ratio", z.length() / cert, 5.1911 - 1e-3));
    rows.push(at_least("L5 ratio minus Γ_h0 ratio", z.length() / cert - ratio, 0.0));

    let b = baseball_curve()?;
    let bs = b.sample_circumscribed(400.0 / PI)?;
    rows.push(close("baseball length / π", b.length() / PI, 4.0, 1e-12));
    rows.push(close("baseball inradius", inradius(&bs, DEFAULT_INRADIUS_TOL)?.0, 1.0, 1e-4));
    rows.push(close("baseball horizon / π", horizon(&bs, 1e-8)?.value / PI, 8.0, 1e-3 / PI));
    rows.push(close("baseball norm bound / π", min_max_norm_bound(&bs)?.bound / PI, 4.0, 1e-3 / PI));

    rows.push(close("max I(x, y)", i_max(400, 400)?.2, 4.0 * PI / (3.0 * 3f64.sqrt()), 1e-6));

    let row = bound_table(1)?[0];
    rows.push(close("open L/w bound", row.open_w, 3.7669, 1e-4));
    rows.push(close("open L/r bound", row.open_r, 7.9104, 1e-4));
    rows.push(close("closed L/w bound", row.closed_w, 5.0862, 1e-4));
    rows.push(close("closed L/r bound", row.closed_r, 10.3923, 1e-4));
    Ok(rows)
}

pub fn table(rows: &[Row]) -> String {
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    let mut out = String::new();
    for r in rows {
        let pad = width - r.name.chars().count();
        let _ = writeln!(
            out,
            "{}{} {:>14.9} {:<28} {}",
            r.name,
            " ".repeat(pad),
            r.value,
            r.expected,
            if r.pass { "PASS" } else { "FAIL" }
        );
    }
    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed}/{} pass", rows.len());
    out
}
