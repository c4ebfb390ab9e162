//! Exact-arithmetic toolkit for tropical curves and hypersurfaces, their
//! realizations over a truncated Novikov field, combinatorial cohomology of
//! Lagrangian lifts, and gapped filtered A-infinity algebras with the two
//! inductive bounding-cochain solvers.
//!
//! Everything is computed over exact rationals; truncation orders are carried
//! explicitly by the values themselves rather than by a global context.

pub mod ainfinity;
pub mod floer;
pub mod lattice;
pub mod lifts;
pub mod novikov;
pub mod polyhedra;
pub mod realization;
pub mod simplex;
pub mod tropical;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Parse a rational written as `p/q` or `p`.
pub fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| format!("bad rational {s:?}: {e}"))
}

/// Shorthand for small rational constants in code and tests.
pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for integer rationals.
pub fn ratio(n: i64) -> BigRational {
    BigRational::from(BigInt::from(n))
}
