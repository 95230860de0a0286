use std::fmt::Write as _;

use num_traits::One;

use super::IdentityRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RenderStyle {
    /// `arctan(1/3) + arctan(1/7) = arctan(1/2)`
    Plain,
    /// Display-math LaTeX for a single equation.
    Latex,
    /// The canonical catalog line.
    Json,
}

/// Renders one identity. `arctan(1/1)` is written as `pi/4`.
pub fn render_identity(rec: &IdentityRecord, style: RenderStyle) -> String {
    let mut out = String::new();
    match style {
        RenderStyle::Plain => {
            write!(out, "arctan(1/{}) + arctan({}/{}) = ", rec.x, rec.l, rec.y).unwrap();
            if rec.k.is_one() {
                out.push_str("pi/4");
            } else {
                write!(out, "arctan(1/{})", rec.k).unwrap();
            }
        }
        RenderStyle::Latex => {
            write!(
                out,
                r"\arctan\left(\frac{{1}}{{{}}}\right) + \arctan\left(\frac{{{}}}{{{}}}\right) = ",
                rec.x, rec.l, rec.y
            )
            .unwrap();
            if rec.k.is_one() {
                out.push_str(r"\frac{\pi}{4}");
            } else {
                write!(out, r"\arctan\left(\frac{{1}}{{{}}}\right)", rec.k).unwrap();
            }
        }
        RenderStyle::Json => out = rec.to_json_line(),
    }
    out
}

pub const CSV_HEADER: &str = "k,l,d,x,y,n,verified";

pub fn render_csv_row(rec: &IdentityRecord) -> String {
    format!(
        "{},{},{},{},{},{},{}",
        rec.k, rec.l, rec.d, rec.x, rec.y, rec.n, rec.verified
    )
}
