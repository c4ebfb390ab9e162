//! Deterministic SVG rendering of two-dimensional weighted complexes:
//! bounded edges as segments, rays clipped at a configurable radius, weight
//! labels on multiple walls. No timestamps, stable ordering.

use anyhow::{bail, Result};
use tropic_core::polyhedra::WeightedPolyhedralComplex;
use tropic_core::simplex::{maximize, Constraint, LpOutcome, Relation};
use tropic_core::{BigRational, ratio};

struct Segment {
    from: (BigRational, BigRational),
    to: (BigRational, BigRational),
    weight: u64,
}

/// Fixed-point decimal with three digits, exact integer arithmetic.
fn fmt_px(r: &BigRational) -> String {
    let scaled = r * ratio(1000);
    let rounded = scaled.round().to_integer();
    let neg = rounded < 0.into();
    let abs = if neg { -rounded } else { rounded };
    let s = abs.to_string();
    let (int_part, frac_part) = if s.len() > 3 {
        (s[..s.len() - 3].to_string(), s[s.len() - 3..].to_string())
    } else {
        ("0".to_string(), format!("{s:0>3}"))
    };
    format!("{}{}.{}", if neg { "-" } else { "" }, int_part, frac_part)
}

/// Render a 2D complex. Rays and lines are clipped at `radius` affine units
/// beyond the bounding box of the anchor points.
pub fn render(complex: &WeightedPolyhedralComplex, radius: &BigRational) -> Result<String> {
    if complex.ambient != 2 {
        bail!("svg output requires ambient dimension 2");
    }
    let mut segments: Vec<Segment> = Vec::new();
    for cell in &complex.cells {
        if cell.dim != 1 {
            continue;
        }
        let tangent = cell
            .polyhedron
            .tangent_lattice()
            .ok_or_else(|| anyhow::anyhow!("empty cell"))?;
        let dir = &tangent[0];
        let mut cs: Vec<Constraint> = Vec::new();
        for c in cell.polyhedron.inequalities() {
            cs.push(Constraint {
                coeffs: c.normal.iter().map(|x| BigRational::from(x.clone())).collect(),
                relation: Relation::Ge,
                rhs: c.rhs.clone(),
            });
        }
        for c in cell.polyhedron.equalities() {
            cs.push(Constraint {
                coeffs: c.normal.iter().map(|x| BigRational::from(x.clone())).collect(),
                relation: Relation::Eq,
                rhs: c.rhs.clone(),
            });
        }
        let obj: Vec<BigRational> = dir.iter().map(|x| BigRational::from(x.clone())).collect();
        let neg: Vec<BigRational> = obj.iter().map(|x| -x.clone()).collect();
        let hi = maximize(2, &obj, &cs);
        let lo = maximize(2, &neg, &cs);
        // Unit step along the primitive direction, in affine units.
        let step = |p: &[BigRational], sign: i64, t: &BigRational| -> (BigRational, BigRational) {
            (
                &p[0] + BigRational::from(dir[0].clone()) * t * ratio(sign),
                &p[1] + BigRational::from(dir[1].clone()) * t * ratio(sign),
            )
        };
        match (lo, hi) {
            (LpOutcome::Optimal { point: a, .. }, LpOutcome::Optimal { point: b, .. }) => {
                segments.push(Segment {
                    from: (a[0].clone(), a[1].clone()),
                    to: (b[0].clone(), b[1].clone()),
                    weight: cell.weight,
                });
            }
            (LpOutcome::Optimal { point: a, .. }, LpOutcome::Unbounded) => {
                let to = step(&a, 1, radius);
                segments.push(Segment {
                    from: (a[0].clone(), a[1].clone()),
                    to,
                    weight: cell.weight,
                });
            }
            (LpOutcome::Unbounded, LpOutcome::Optimal { point: b, .. }) => {
                let to = step(&b, -1, radius);
                segments.push(Segment {
                    from: (b[0].clone(), b[1].clone()),
                    to,
                    weight: cell.weight,
                });
            }
            (LpOutcome::Unbounded, LpOutcome::Unbounded) => {
                // A full line: clip symmetrically around a relative interior
                // point.
                let p = cell
                    .polyhedron
                    .relative_interior_point()
                    .ok_or_else(|| anyhow::anyhow!("empty cell"))?;
                let from = step(&p, -1, radius);
                let to = step(&p, 1, radius);
                segments.push(Segment { from, to, weight: cell.weight });
            }
            _ => bail!("cell is empty"),
        }
    }
    if segments.is_empty() {
        bail!("nothing to draw");
    }
    // Bounding box.
    let mut xs: Vec<BigRational> = Vec::new();
    let mut ys: Vec<BigRational> = Vec::new();
    for s in &segments {
        xs.push(s.from.0.clone());
        xs.push(s.to.0.clone());
        ys.push(s.from.1.clone());
        ys.push(s.to.1.clone());
    }
    let pad = BigRational::new(1.into(), 2.into());
    let min_x = xs.iter().min().unwrap() - &pad;
    let max_x = xs.iter().max().unwrap() + &pad;
    let min_y = ys.iter().min().unwrap() - &pad;
    let max_y = ys.iter().max().unwrap() + &pad;
    let width = &max_x - &min_x;
    let height = &max_y - &min_y;

    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{} {} {} {}\">\n",
        fmt_px(&min_x),
        fmt_px(&-&max_y),
        fmt_px(&width),
        fmt_px(&height)
    ));
    out.push_str("  <g stroke=\"black\" stroke-width=\"0.05\" fill=\"none\">\n");
    for s in &segments {
        out.push_str(&format!(
            "    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"/>\n",
            fmt_px(&s.from.0),
            fmt_px(&-s.from.1.clone()),
            fmt_px(&s.to.0),
            fmt_px(&-s.to.1.clone()),
        ));
    }
    out.push_str("  </g>\n");
    for s in &segments {
        if s.weight != 1 {
            let half = BigRational::new(1.into(), 2.into());
            let mx = (&s.from.0 + &s.to.0) * &half;
            let my = (&s.from.1 + &s.to.1) * &half;
            out.push_str(&format!(
                "  <text x=\"{}\" y=\"{}\" font-size=\"0.3\">{}</text>\n",
                fmt_px(&mx),
                fmt_px(&-my),
                s.weight
            ));
        }
    }
    out.push_str("</svg>\n");
    Ok(out)
}
