//! Exact entanglement criteria and the closed-form detection power of the
//! SWAP witness.

mod beta;

pub use beta::regularized_incomplete_beta;

use crate::random::exact_root;
use crate::tensor::{min_eigenvalue, partial_transpose, DensityMatrix, StateVector};
use crate::{Error, Result};

/// Which criterion produced a [`CriterionValue`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CriterionId {
    SwapWitness,
    Ppt,
    Purity,
}

impl CriterionId {
    pub fn as_str(self) -> &'static str {
        match self {
            CriterionId::SwapWitness => "SWAP_WITNESS",
            CriterionId::Ppt => "PPT",
            CriterionId::Purity => "PURITY",
        }
    }
}

/// Criterion value; negative values certify entanglement.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriterionValue {
    pub value: f64,
    pub criterion: CriterionId,
}

impl CriterionValue {
    #[inline]
    pub fn detects(&self) -> bool {
        self.value < 0.0
    }
}

fn symmetric_local_dim(d_a: usize, d_b: usize) -> Result<usize> {
    if d_a != d_b {
        return Err(Error::AsymmetricBipartition(d_a, d_b));
    }
    Ok(d_a)
}

/// `Tr(S rho)` for the SWAP operator between the two halves.
pub fn swap_witness_value(rho: &DensityMatrix) -> Result<CriterionValue> {
    let (d_a, d_b) = rho.shape().bipartition()?;
    let n = symmetric_local_dim(d_a, d_b)?;
    let m = rho.matrix();
    let mut value = 0.0;
    for a in 0..n {
        for b in 0..n {
            // (S rho)_{ab,ab} = rho_{ba,ab}
            value += m[(b * n + a, a * n + b)].re;
        }
    }
    Ok(CriterionValue {
        value,
        criterion: CriterionId::SwapWitness,
    })
}

/// `<psi|S|psi>` without forming the density matrix.
pub fn swap_witness_value_pure(psi: &StateVector) -> Result<CriterionValue> {
    let (d_a, d_b) = psi.shape().bipartition()?;
    let n = symmetric_local_dim(d_a, d_b)?;
    let v = psi.amplitudes();
    let mut value = 0.0;
    for a in 0..n {
        for b in 0..n {
            value += (v[a * n + b].conj() * v[b * n + a]).re;
        }
    }
    Ok(CriterionValue {
        value,
        criterion: CriterionId::SwapWitness,
    })
}

/// `lambda_min(rho^{T_A})`.
pub fn ppt_min_eig(rho: &DensityMatrix) -> Result<CriterionValue> {
    let pt = partial_transpose(rho, 0)?;
    Ok(CriterionValue {
        value: min_eigenvalue(&pt)?,
        criterion: CriterionId::Ppt,
    })
}

/// `Tr(rho_A^2) - Tr(rho^2)`.
pub fn purity_criterion_value(rho: &DensityMatrix) -> Result<CriterionValue> {
    rho.shape().bipartition()?;
    let rho_a = rho.partial_trace(&[0])?;
    Ok(CriterionValue {
        value: rho_a.purity() - rho.purity(),
        criterion: CriterionId::Purity,
    })
}

/// `Pr[Tr(S rho) < 0]` for `rho ~ pi*_{d,1}`:
/// `(1/2) I_{1/2}((d + sqrt d) / 2, (d - sqrt d) / 2)`.
pub fn detection_power_closed_form(d: usize) -> Result<f64> {
    let d_a = exact_root(d, 2).ok_or(Error::NotPerfectPower { value: d, power: 2 })?;
    if d_a < 2 {
        return Err(Error::Domain("detection power needs d >= 4"));
    }
    // Both parameters are the integers d_A(d_A +- 1)/2.
    let a = (d_a * (d_a + 1) / 2) as f64;
    let b = (d_a * (d_a - 1) / 2) as f64;
    Ok(0.5 * regularized_incomplete_beta(0.5, a, b)?)
}
