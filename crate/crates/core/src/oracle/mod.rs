//! Reference spectra from the Hamiltonian in a truncated Fock basis,
//! diagonalized densely.

mod eigen;

use thiserror::Error;

use crate::opalg::fock_matrix_element;
use crate::oscillator::OscillatorSpec;

/// Residual bound `‖Mv − λv‖₂ ≤ RESIDUAL_FACTOR·‖M‖_F` on every returned pair.
pub const RESIDUAL_FACTOR: f64 = 1e-10;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum OracleError {
    #[error("matrix dimension must be at least 2, got {0}")]
    BadDimension(usize),
    #[error("asked for {wanted} eigenvalues of a {dim}x{dim} matrix")]
    TooManyWanted { wanted: usize, dim: usize },
    #[error("potential has no Fock-space polynomial form")]
    NotPolynomial,
    #[error("negative coupling {kappa} gives a spectrum unbounded below; truncated levels are not physical")]
    NegativeCouplingRefused { kappa: f64 },
    #[error("no convergence: {0}")]
    NoConvergence(String),
}

/// Dense symmetric matrix `⟨m|H/ε₀|n⟩` for `m, n < dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct FockMatrix {
    dim: usize,
    values: Vec<f64>,
    spec: OscillatorSpec,
}

impl FockMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn spec(&self) -> &OscillatorSpec {
        &self.spec
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_diagonal(&self) -> bool {
        (0..self.dim).all(|i| (0..self.dim).all(|j| i == j || self.get(i, j) == 0.0))
    }
}

/// Fills `M[m][n] = ⟨m|H|n⟩` from the normal-ordered Hamiltonian. Only the
/// upper triangle is evaluated; the lower one is mirrored.
pub fn build_hamiltonian_matrix(spec: &OscillatorSpec, dim: usize) -> Result<FockMatrix, OracleError> {
    if dim < 2 {
        return Err(OracleError::BadDimension(dim));
    }
    let h = spec.hamiltonian_poly(1).ok_or(OracleError::NotPolynomial)?;
    let band = spec.polynomial_degree().unwrap_or(2) as usize;
    let kappa = spec.kappa();
    let mut values = vec![0.0; dim * dim];
    for m in 0..dim {
        for n in m..dim.min(m + band + 1) {
            let x = fock_matrix_element(&h, m as u32, n as u32, kappa);
            values[m * dim + n] = x;
            values[n * dim + m] = x;
        }
    }
    Ok(FockMatrix {
        dim,
        values,
        spec: *spec,
    })
}

/// Lowest eigenpairs with their residuals.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    /// One unit vector per value.
    pub vectors: Vec<Vec<f64>>,
    /// `‖Mv − λv‖₂` per pair.
    pub residuals: Vec<f64>,
}

/// Lowest `n_wanted` eigenvalues ascending, by Householder tridiagonalization
/// and implicit QL. Fails if QL stalls or a residual exceeds the bound.
pub fn eigenvalues_symmetric(m: &FockMatrix, n_wanted: usize) -> Result<Eigensystem, OracleError> {
    let n = m.dim;
    if n_wanted > n {
        return Err(OracleError::TooManyWanted { wanted: n_wanted, dim: n });
    }
    let (vals, vecs) = eigen::symmetric_eigen(&m.values, n)
        .map_err(|l| OracleError::NoConvergence(format!("QL iteration stalled at eigenvalue {l} (dim {n})")))?;
    let bound = RESIDUAL_FACTOR * m.frobenius_norm();
    let mut out = Eigensystem {
        values: Vec::with_capacity(n_wanted),
        vectors: Vec::with_capacity(n_wanted),
        residuals: Vec::with_capacity(n_wanted),
    };
    for c in 0..n_wanted {
        let v: Vec<f64> = (0..n).map(|r| vecs[r * n + c]).collect();
        let res = (0..n)
            .map(|r| {
                let mv: f64 = (0..n).map(|k| m.get(r, k) * v[k]).sum();
                (mv - vals[c] * v[r]).powi(2)
            })
            .sum::<f64>()
            .sqrt();
        if !(res <= bound) {
            return Err(OracleError::NoConvergence(format!(
                "residual {res:e} of eigenpair {c} exceeds {bound:e}"
            )));
        }
        out.values.push(vals[c]);
        out.vectors.push(v);
        out.residuals.push(res);
    }
    Ok(out)
}

/// Smaller of the weights a vector carries on even and on odd basis states;
/// zero for a state of definite parity.
pub fn parity_leakage(v: &[f64]) -> f64 {
    let even: f64 = v.iter().step_by(2).map(|x| x * x).sum();
    let odd: f64 = v.iter().skip(1).step_by(2).map(|x| x * x).sum();
    even.min(odd).sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleOptions {
    pub start_dim: usize,
    pub max_dim: usize,
    /// Diagonalize negative couplings anyway.
    pub allow_negative: bool,
}

impl Default for OracleOptions {
    fn default() -> Self {
        Self {
            start_dim: 64,
            max_dim: 4096,
            allow_negative: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergedLevels {
    pub levels: Vec<f64>,
    /// Dimension of the last matrix diagonalized.
    pub dim: usize,
    pub residuals: Vec<f64>,
}

/// [`converged_levels_with`] under the default options.
pub fn converged_levels(spec: &OscillatorSpec, n_levels: usize, tol: f64) -> Result<ConvergedLevels, OracleError> {
    converged_levels_with(spec, n_levels, tol, &OracleOptions::default())
}

/// Doubles the basis from `start_dim` until each of the lowest `n_levels`
/// eigenvalues moves by less than `tol`. A permitted negative coupling is
/// diagonalized once at `start_dim`, since its truncated levels have no limit.
pub fn converged_levels_with(
    spec: &OscillatorSpec,
    n_levels: usize,
    tol: f64,
    opts: &OracleOptions,
) -> Result<ConvergedLevels, OracleError> {
    let kappa = spec.kappa();
    if kappa < 0.0 && !opts.allow_negative {
        return Err(OracleError::NegativeCouplingRefused { kappa });
    }
    let mut dim = opts.start_dim.max(2).max(n_levels);
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let m = build_hamiltonian_matrix(spec, dim)?;
        let eig = eigenvalues_symmetric(&m, n_levels)?;
        let done = m.is_diagonal()
            || kappa < 0.0
            || prev
                .as_ref()
                .is_some_and(|p| p.iter().zip(&eig.values).all(|(a, b)| (a - b).abs() < tol));
        if done {
            return Ok(ConvergedLevels {
                levels: eig.values,
                dim,
                residuals: eig.residuals,
            });
        }
        if dim * 2 > opts.max_dim {
            return Err(OracleError::NoConvergence(format!(
                "lowest {n_levels} levels still moving by more than {tol:e} at dim {dim}"
            )));
        }
        prev = Some(eig.values);
        dim *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matrix_entries() {
        let k = 0.01;
        let m = build_hamiltonian_matrix(&OscillatorSpec::quartic(k), 16).unwrap();
        assert!((m.get(0, 0) - (0.5 + 0.75 * k)).abs() < 1e-15);
        assert!((m.get(2, 0) - k / 4.0 * 6.0 * 2f64.sqrt()).abs() < 1e-15);
        for n in 0..16 {
            let nf = n as f64;
            let diag = nf + 0.5 + k / 4.0 * 3.0 * (2.0 * nf * nf + 2.0 * nf + 1.0);
            assert!((m.get(n, n) - diag).abs() < 1e-12 * diag);
            for j in 0..16 {
                assert_eq!(m.get(n, j), m.get(j, n));
                if ![0, 2, 4].contains(&n.abs_diff(j)) {
                    assert_eq!(m.get(n, j), 0.0);
                }
            }
        }
    }

    #[test]
    fn permitted_negative_coupling_stops_at_start_dim() {
        let opts = OracleOptions {
            allow_negative: true,
            ..OracleOptions::default()
        };
        let c = converged_levels_with(&OscillatorSpec::quartic(-0.1), 3, 1e-10, &opts).unwrap();
        assert_eq!(c.dim, 64);
        assert!(matches!(
            converged_levels(&OscillatorSpec::quartic(-0.1), 3, 1e-10),
            Err(OracleError::NegativeCouplingRefused { .. })
        ));
    }

    #[test]
    fn harmonic_is_exact_at_first_dimension() {
        let c = converged_levels(&OscillatorSpec::sho(), 5, 1e-12).unwrap();
        assert_eq!(c.dim, 64);
        for (n, e) in c.levels.iter().enumerate() {
            assert_eq!(*e, n as f64 + 0.5);
        }
    }

    #[test]
    fn negative_coupling_refused() {
        let spec = OscillatorSpec::quartic(-0.01);
        assert!(matches!(
            converged_levels(&spec, 3, 1e-8),
            Err(OracleError::NegativeCouplingRefused { .. })
        ));
        let opts = OracleOptions {
            allow_negative: true,
            max_dim: 128,
            ..OracleOptions::default()
        };
        assert!(!matches!(
            converged_levels_with(&spec, 3, 1e-8, &opts),
            Err(OracleError::NegativeCouplingRefused { .. })
        ));
    }

    #[test]
    fn quartic_pairs_have_parity() {
        let m = build_hamiltonian_matrix(&OscillatorSpec::quartic(0.1), 64).unwrap();
        let eig = eigenvalues_symmetric(&m, 6).unwrap();
        for v in &eig.vectors {
            assert!(parity_leakage(v) < 1e-10);
        }
        assert!(eigenvalues_symmetric(&m, 65).is_err());
    }
}
