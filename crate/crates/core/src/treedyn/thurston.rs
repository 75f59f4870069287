//! Thurston transition matrices of curve systems.

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::matrices::spectral_radius_rational;
use super::rational::{determinant, Q};
use super::ribbon::TreeError;

/// Obstruction tolerance around `λ = 1`.
pub const LAMBDA_TOL: f64 = 1e-9;

/// A component of the preimage of a curve: its isotopy class (or `None` if
/// inessential or peripheral) and the degree of the cover onto the curve.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub class: Option<usize>,
    pub degree: u32,
}

/// `preimages[τ]` lists the components of `f⁻¹(τ)` for each curve `τ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveCover {
    pub curves: usize,
    pub preimages: Vec<Vec<Component>>,
}

impl CurveCover {
    pub fn new(curves: usize, preimages: Vec<Vec<Component>>) -> Result<Self, TreeError> {
        let c = CurveCover { curves, preimages };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        if self.preimages.len() != self.curves {
            return Err(TreeError::BadCover(format!(
                "{} curves but {} preimage lists",
                self.curves,
                self.preimages.len()
            )));
        }
        for (tau, comps) in self.preimages.iter().enumerate() {
            for c in comps {
                if c.degree == 0 {
                    return Err(TreeError::BadCover(format!("component over curve {tau} has degree 0")));
                }
                if c.class.is_some_and(|s| s >= self.curves) {
                    return Err(TreeError::BadCover(format!("component over curve {tau} names an unknown curve")));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Obstructed,
    Unobstructed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ThurstonReport {
    /// `a[σ][τ] = Σ 1/deg(α → τ)` over components `α ⊂ f⁻¹(τ)` isotopic to `σ`.
    pub matrix: Vec<Vec<Q>>,
    pub lambda: f64,
    pub verdict: Verdict,
    /// Near `λ = 1`: whether `det(A − I) = 0` holds exactly.
    pub exact_unit_eigenvalue: Option<bool>,
}

pub fn thurston_matrix(c: &CurveCover) -> Result<ThurstonReport, TreeError> {
    c.validate()?;
    let n = c.curves;
    let mut a = vec![vec![Q::zero(); n]; n];
    for (tau, comps) in c.preimages.iter().enumerate() {
        for comp in comps {
            if let Some(sigma) = comp.class {
                a[sigma][tau] += Q::new(1.into(), (comp.degree as i64).into());
            }
        }
    }
    let lambda = spectral_radius_rational(&a)?;
    let mut verdict = if lambda >= 1.0 - LAMBDA_TOL {
        Verdict::Obstructed
    } else {
        Verdict::Unobstructed
    };
    let mut exact = None;
    if (lambda - 1.0).abs() < 1e-6 {
        let mut shifted = a.clone();
        for (i, row) in shifted.iter_mut().enumerate() {
            row[i] -= Q::one();
        }
        let singular = determinant(shifted).is_zero();
        exact = Some(singular);
        // 1 is an eigenvalue and the Perron root is within 1e−6 of it; any
        // larger root would have to be that close too, so λ ≥ 1 exactly.
        if singular {
            verdict = Verdict::Obstructed;
        }
    }
    debug_assert!(a.iter().flatten().all(|x| !x.is_negative()));
    Ok(ThurstonReport { matrix: a, lambda, verdict, exact_unit_eigenvalue: exact })
}
