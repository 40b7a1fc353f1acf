//! Parameter sweeps rendered as three-column tables for CSV output.

use crate::error::{Error, Result};
use crate::measures::{
    closed_form_concurrence, entanglement_of_concurrence, spectral_concurrence,
};
use crate::states::{
    bell_mixture, departure_diag, departure_orth, eigen_rank2, BellKind, DEFAULT_RANK_TOL,
};
use crate::C64;

/// Which family to sweep.
#[derive(Clone, Copy, Debug)]
pub enum CurveFamily {
    /// Fixed `v1`, sweep the first eigenstate's concurrence `c1`;
    /// columns are the measure of the state (`we`) and the
    /// eigendecomposition average (`ef_eigen`), assuming the second
    /// eigenstate is separable.
    Fig1 { v1: f64 },
    /// Sweep the mixing probability `g` of two Bell states.
    BellMixture { first: BellKind, second: BellKind },
    /// Sweep `p` of the diagonal departure family.
    DepartureDiag { i: usize },
    /// Sweep `q` of the orthogonal departure family with fixed `chi`.
    DepartureOrth { x1: C64, x2: C64, x4: C64 },
}

/// A sweep request: family plus grid size.
#[derive(Clone, Copy, Debug)]
pub struct CurveSpec {
    pub family: CurveFamily,
    pub points: usize,
}

/// Column names and rows of a generated sweep.
#[derive(Clone, Debug)]
pub struct CurveTable {
    pub columns: [&'static str; 3],
    pub rows: Vec<[f64; 3]>,
}

/// Generates the table for a sweep over `points` equally spaced grid
/// values of the family parameter on `[0, 1]`.
pub fn generate(spec: &CurveSpec) -> Result<CurveTable> {
    if spec.points < 2 {
        return Err(Error::BadParameter(format!(
            "points must be >= 2, got {}",
            spec.points
        )));
    }
    let grid = |i: usize| i as f64 / (spec.points - 1) as f64;

    match spec.family {
        CurveFamily::Fig1 { v1 } => {
            if !(0.0..=1.0).contains(&v1) {
                return Err(Error::BadProbability { value: v1 });
            }
            let mut rows = Vec::with_capacity(spec.points);
            for i in 0..spec.points {
                let c1 = grid(i);
                let we = entanglement_of_concurrence(v1 * c1)?;
                let ef_eigen = v1 * entanglement_of_concurrence(c1)?;
                rows.push([c1, we, ef_eigen]);
            }
            Ok(CurveTable {
                columns: ["c1", "we", "ef_eigen"],
                rows,
            })
        }
        CurveFamily::BellMixture { first, second } => {
            sweep_both_methods("g", spec.points, |g| bell_mixture(first, second, g))
        }
        CurveFamily::DepartureDiag { i } => {
            sweep_both_methods("p", spec.points, |p| departure_diag(i, p))
        }
        CurveFamily::DepartureOrth { x1, x2, x4 } => {
            sweep_both_methods("q", spec.points, |q| departure_orth(q, x1, x2, x4))
        }
    }
}

fn sweep_both_methods(
    param: &'static str,
    points: usize,
    make: impl Fn(f64) -> Result<crate::states::DensityMatrix>,
) -> Result<CurveTable> {
    let mut rows = Vec::with_capacity(points);
    for i in 0..points {
        let t = i as f64 / (points - 1) as f64;
        let rho = make(t)?;
        let closed = closed_form_concurrence(&eigen_rank2(&rho, DEFAULT_RANK_TOL)?).concurrence;
        let spectral = spectral_concurrence(&rho)?.concurrence;
        rows.push([t, closed, spectral]);
    }
    Ok(CurveTable {
        columns: [param, "c_closed", "c_spectral"],
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::product_chi_coefficients;

    #[test]
    fn fig1_endpoints() {
        let table = generate(&CurveSpec {
            family: CurveFamily::Fig1 { v1: 0.1 },
            points: 101,
        })
        .unwrap();
        assert_eq!(table.columns, ["c1", "we", "ef_eigen"]);
        assert_eq!(table.rows.len(), 101);
        let last = table.rows.last().unwrap();
        assert_eq!(last[0], 1.0);
        assert_eq!(last[2], 0.1);
    }

    #[test]
    fn bell_mixture_follows_the_linear_law() {
        let table = generate(&CurveSpec {
            family: CurveFamily::BellMixture {
                first: BellKind::PhiPlus,
                second: BellKind::PsiMinus,
            },
            points: 21,
        })
        .unwrap();
        for row in &table.rows {
            let expect = (1.0 - 2.0 * row[0]).abs();
            assert!((row[1] - expect).abs() <= 1e-9, "closed at g = {}", row[0]);
            assert!((row[2] - expect).abs() <= 1e-9, "spectral at g = {}", row[0]);
        }
    }

    #[test]
    fn departure_diag_concurrence_is_p() {
        for i in 1..=4 {
            let table = generate(&CurveSpec {
                family: CurveFamily::DepartureDiag { i },
                points: 11,
            })
            .unwrap();
            for row in &table.rows {
                assert!((row[1] - row[0]).abs() <= 1e-9);
                assert!((row[2] - row[0]).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn departure_orth_concurrence_is_q_for_product_chi() {
        let (x1, x2, x4) = product_chi_coefficients(0.6);
        let table = generate(&CurveSpec {
            family: CurveFamily::DepartureOrth { x1, x2, x4 },
            points: 11,
        })
        .unwrap();
        for row in &table.rows {
            assert!((row[1] - row[0]).abs() <= 1e-9);
            assert!((row[2] - row[0]).abs() <= 1e-9);
        }
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(generate(&CurveSpec {
            family: CurveFamily::Fig1 { v1: 0.1 },
            points: 1,
        })
        .is_err());
        assert!(generate(&CurveSpec {
            family: CurveFamily::Fig1 { v1: 1.5 },
            points: 10,
        })
        .is_err());
    }
}
