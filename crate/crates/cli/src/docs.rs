//! JSON document types for curves, polynomials, complexes, fans and reports.
//!
//! Rationals are strings `p/q` so that exactness survives serialization;
//! directions and exponents are plain integers.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use tropic_core::lattice::IntVec;
use tropic_core::polyhedra::{
    LinearConstraint, RationalPolyhedron, WeightedCell, WeightedPolyhedralComplex,
};
use tropic_core::tropical::{BoundedEdge, Fan, Ray, TropicalCurve, TropicalPolynomial};
use tropic_core::{parse_rational, BigInt, BigRational};

fn rat_to_string(r: &BigRational) -> String {
    r.to_string()
}

fn int_vec_to_json(v: &[BigInt]) -> Result<Vec<i64>> {
    v.iter()
        .map(|x| {
            x.try_into()
                .map_err(|_| anyhow!("integer out of range for document"))
        })
        .collect()
}

fn int_vec_from_json(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CurveDocument {
    pub ambient_dim: usize,
    pub vertices: Vec<Vec<String>>,
    #[serde(default)]
    pub edges: Vec<EdgeDocument>,
    #[serde(default)]
    pub rays: Vec<RayDocument>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Value>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct EdgeDocument {
    pub from: usize,
    pub to: usize,
    pub direction: Vec<i64>,
    pub weight: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RayDocument {
    pub base: usize,
    pub direction: Vec<i64>,
    pub weight: u64,
}

impl CurveDocument {
    pub fn to_curve(&self) -> Result<TropicalCurve> {
        let vertices: Result<Vec<Vec<BigRational>>> = self
            .vertices
            .iter()
            .map(|v| {
                v.iter()
                    .map(|s| parse_rational(s).map_err(|e| anyhow!(e)))
                    .collect()
            })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| BoundedEdge {
                from: e.from,
                to: e.to,
                direction: int_vec_from_json(&e.direction),
                weight: e.weight,
            })
            .collect();
        let rays = self
            .rays
            .iter()
            .map(|r| Ray {
                base: r.base,
                direction: int_vec_from_json(&r.direction),
                weight: r.weight,
            })
            .collect();
        TropicalCurve::new(self.ambient_dim, vertices?, edges, rays)
            .map_err(|e| anyhow!("invalid curve: {e}"))
    }

    pub fn from_curve(curve: &TropicalCurve) -> Result<Self> {
        Ok(CurveDocument {
            ambient_dim: curve.ambient_dim(),
            vertices: curve
                .vertices()
                .iter()
                .map(|v| v.iter().map(rat_to_string).collect())
                .collect(),
            edges: curve
                .edges()
                .iter()
                .map(|e| {
                    Ok(EdgeDocument {
                        from: e.from,
                        to: e.to,
                        direction: int_vec_to_json(&e.direction)?,
                        weight: e.weight,
                    })
                })
                .collect::<Result<_>>()?,
            rays: curve
                .rays()
                .iter()
                .map(|r| {
                    Ok(RayDocument {
                        base: r.base,
                        direction: int_vec_to_json(&r.direction)?,
                        weight: r.weight,
                    })
                })
                .collect::<Result<_>>()?,
            metadata: None,
        })
    }

    /// Negate all coordinates and directions (convention flip).
    pub fn negated(&self) -> Self {
        CurveDocument {
            ambient_dim: self.ambient_dim,
            vertices: self
                .vertices
                .iter()
                .map(|v| {
                    v.iter()
                        .map(|s| {
                            let r = parse_rational(s).expect("validated");
                            rat_to_string(&-r)
                        })
                        .collect()
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| EdgeDocument {
                    from: e.from,
                    to: e.to,
                    direction: e.direction.iter().map(|x| -x).collect(),
                    weight: e.weight,
                })
                .collect(),
            rays: self
                .rays
                .iter()
                .map(|r| RayDocument {
                    base: r.base,
                    direction: r.direction.iter().map(|x| -x).collect(),
                    weight: r.weight,
                })
                .collect(),
            metadata: self.metadata.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct PolynomialDocument {
    pub ambient_dim: usize,
    pub terms: Vec<MonomialDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct MonomialDocument {
    pub exponent: Vec<i64>,
    pub coefficient: String,
}

impl PolynomialDocument {
    pub fn to_polynomial(&self) -> Result<TropicalPolynomial> {
        let terms: Result<Vec<(IntVec, BigRational)>> = self
            .terms
            .iter()
            .map(|t| {
                if t.exponent.len() != self.ambient_dim {
                    bail!("exponent length does not match ambient dimension");
                }
                Ok((
                    int_vec_from_json(&t.exponent),
                    parse_rational(&t.coefficient).map_err(|e| anyhow!(e))?,
                ))
            })
            .collect();
        TropicalPolynomial::new(self.ambient_dim, terms?)
            .map_err(|e| anyhow!("invalid polynomial: {e}"))
    }

    /// Negate coefficients (convention flip for min/max-plus data).
    pub fn negated_coefficients(&self) -> Result<Self> {
        Ok(PolynomialDocument {
            ambient_dim: self.ambient_dim,
            terms: self
                .terms
                .iter()
                .map(|t| {
                    Ok(MonomialDocument {
                        exponent: t.exponent.clone(),
                        coefficient: rat_to_string(
                            &-parse_rational(&t.coefficient).map_err(|e| anyhow!(e))?,
                        ),
                    })
                })
                .collect::<Result<_>>()?,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct FanDocument {
    pub rays: Vec<Vec<i64>>,
}

impl FanDocument {
    pub fn to_fan(&self) -> Result<Fan> {
        Fan::new(self.rays.iter().map(|r| int_vec_from_json(r)).collect())
            .map_err(|e| anyhow!("invalid fan: {e}"))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ConstraintDocument {
    pub normal: Vec<i64>,
    pub rhs: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CellDocument {
    pub dim: usize,
    pub weight: u64,
    pub inequalities: Vec<ConstraintDocument>,
    pub equalities: Vec<ConstraintDocument>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ComplexDocument {
    pub ambient_dim: usize,
    pub cells: Vec<CellDocument>,
}

impl ComplexDocument {
    pub fn from_complex(complex: &WeightedPolyhedralComplex) -> Result<Self> {
        let conv = |cs: &[LinearConstraint]| -> Result<Vec<ConstraintDocument>> {
            cs.iter()
                .map(|c| {
                    Ok(ConstraintDocument {
                        normal: int_vec_to_json(&c.normal)?,
                        rhs: rat_to_string(&c.rhs),
                    })
                })
                .collect()
        };
        Ok(ComplexDocument {
            ambient_dim: complex.ambient,
            cells: complex
                .cells
                .iter()
                .map(|cell| {
                    Ok(CellDocument {
                        dim: cell.dim,
                        weight: cell.weight,
                        inequalities: conv(cell.polyhedron.inequalities())?,
                        equalities: conv(cell.polyhedron.equalities())?,
                    })
                })
                .collect::<Result<_>>()?,
        })
    }

    pub fn to_complex(&self) -> Result<WeightedPolyhedralComplex> {
        let conv = |cs: &[ConstraintDocument]| -> Result<Vec<LinearConstraint>> {
            cs.iter()
                .map(|c| {
                    LinearConstraint::new(
                        int_vec_from_json(&c.normal),
                        parse_rational(&c.rhs).map_err(|e| anyhow!(e))?,
                    )
                    .map_err(|e| anyhow!("bad constraint: {e}"))
                })
                .collect()
        };
        let cells = self
            .cells
            .iter()
            .map(|cell| {
                Ok(WeightedCell {
                    polyhedron: RationalPolyhedron::new(
                        self.ambient_dim,
                        conv(&cell.inequalities)?,
                        conv(&cell.equalities)?,
                    ),
                    dim: cell.dim,
                    weight: cell.weight,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(WeightedPolyhedralComplex::new(self.ambient_dim, cells))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct Witness {
    pub name: String,
    pub value: String,
}

/// Machine-readable command report with stable field ordering.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportDocument {
    pub command: String,
    pub convention: String,
    pub checks: Vec<CheckResult>,
    pub witnesses: Vec<Witness>,
    pub elapsed_ms: u64,
}

impl ReportDocument {
    pub fn new(command: &str, convention: &str) -> Self {
        ReportDocument {
            command: command.to_string(),
            convention: convention.to_string(),
            checks: Vec::new(),
            witnesses: Vec::new(),
            elapsed_ms: 0,
        }
    }

    pub fn push(&mut self, name: &str, pass: bool, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            status: if pass { "pass" } else { "fail" }.to_string(),
            detail: detail.into(),
        });
    }

    pub fn warn(&mut self, name: &str, detail: impl Into<String>) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            status: "warn".to_string(),
            detail: detail.into(),
        });
    }

    pub fn witness(&mut self, name: &str, value: impl Into<String>) {
        self.witnesses.push(Witness {
            name: name.to_string(),
            value: value.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != "fail")
    }

    pub fn print_human(&self) {
        for c in &self.checks {
            println!("[{}] {}: {}", c.status, c.name, c.detail);
        }
        for w in &self.witnesses {
            println!("witness {} = {}", w.name, w.value);
        }
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &std::path::Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| {
        anyhow!(
            "parse error in {} at line {}, column {}: {}",
            path.display(),
            e.line(),
            e.column(),
            e
        )
    })
}

pub fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    std::fs::write(path, text + "\n")
        .with_context(|| format!("cannot write {}", path.display()))
}
