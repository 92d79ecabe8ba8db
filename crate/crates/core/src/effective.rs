//! Reduced model with the channel replaced by its zero-energy mode.
//!
//! In the weak-interface regime only the channel mode at zero energy
//! participates in transport, so the 2n+N+1 site problem collapses to the
//! two registers, that single mode, and the switching atom. The register
//! dynamics inside this model have closed-form propagators, which is what
//! makes the swap and identity settings analytically checkable.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::dynamics::{propagator, spectral_decompose};
use crate::error::Result;
use crate::model::{channel_mode, register_couplings, zero_mode_index, SystemConfig};
use crate::scalar::Scalar;

/// Reduced Hamiltonian over l_1..l_n, r_1..r_n, zero mode, atom.
#[derive(Debug, Clone, PartialEq)]
pub struct EffectiveModel<T: Scalar> {
    matrix: DMatrix<T>,
    n: usize,
}

impl<T: Scalar> EffectiveModel<T> {
    pub fn matrix(&self) -> &DMatrix<T> {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        2 * self.n + 2
    }

    /// Index of left register cavity j (1-based).
    pub fn left(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n, "left cavity index out of range");
        j - 1
    }

    /// Index of right register cavity j (1-based).
    pub fn right(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n, "right cavity index out of range");
        self.n + j - 1
    }

    /// Index of the retained channel mode.
    pub fn zero_mode(&self) -> usize {
        2 * self.n
    }

    /// Index of the atom excited state.
    pub fn atom(&self) -> usize {
        2 * self.n + 1
    }

    pub fn left_indices(&self) -> Vec<usize> {
        (0..self.n).collect()
    }

    pub fn right_indices(&self) -> Vec<usize> {
        (self.n..2 * self.n).collect()
    }
}

/// Register-only coupling matrix: tridiagonal with the g_j bonds.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterCouplingMatrix<T: Scalar> {
    pub matrix: DMatrix<T>,
}

/// Atom-dressed splitting of the retained channel mode.
#[derive(Debug, Clone, PartialEq)]
pub struct DressedSplitting<T: Scalar> {
    /// Gap between the two dressed states.
    pub omega2: T,
    /// Dressed-state energies, ascending.
    pub energies: (T, T),
    /// False when the atom sits on a node of the zero mode (even m).
    pub m_parity_ok: bool,
}

/// Builds the reduced Hamiltonian for a two-register configuration.
pub fn build_effective_hamiltonian<T: Scalar>(
    config: &SystemConfig<T>,
) -> Result<EffectiveModel<T>> {
    config.validate()?;
    let n = config.left.n;
    let n_cavities = config.channel.n_cavities;
    let z = zero_mode_index(n_cavities)?;
    let psi_1z: T = channel_mode(1, z, n_cavities)?;
    let psi_mz: T = channel_mode(config.channel.m, z, n_cavities)?;
    let interface = config.g_i * psi_1z;
    // psi_{N,z} = (-1)^(z-1) psi_{1,z}: the right register couples with
    // alternating sign depending on where the zero mode's antinodes fall.
    let sign = if z % 2 == 1 { T::one() } else { -T::one() };

    let dim = 2 * n + 2;
    let mut h = DMatrix::zeros(dim, dim);
    let mut bond = |a: usize, b: usize, v: T| {
        h[(a, b)] = v;
        h[(b, a)] = v;
    };
    let g_left = register_couplings(n, config.left.g0)?;
    let g_right = register_couplings(n, config.right.g0)?;
    for j in 0..n.saturating_sub(1) {
        bond(j, j + 1, g_left[j]);
        bond(n + j, n + j + 1, g_right[j]);
    }
    bond(n - 1, 2 * n, interface);
    bond(2 * n - 1, 2 * n, sign * interface);
    let j_eff = config.channel.effective_j();
    if j_eff > T::zero() {
        bond(2 * n, 2 * n + 1, j_eff * psi_mz);
    }
    Ok(EffectiveModel { matrix: h, n })
}

/// Tridiagonal coupling matrix acting on a single register.
pub fn register_coupling_matrix<T: Scalar>(n: usize, g0: T) -> Result<RegisterCouplingMatrix<T>> {
    let g = register_couplings(n, g0)?;
    let matrix = DMatrix::from_fn(n, n, |r, c| {
        if r.abs_diff(c) == 1 {
            g[r.min(c)]
        } else {
            T::zero()
        }
    });
    Ok(RegisterCouplingMatrix { matrix })
}

/// Evaluates exp(iA tau) at the transfer time tau = pi/g0.
///
/// The spectrum of A is harmonic, so this propagator collapses to
/// (-1)^(n-1) times the identity; the returned deviation measures how far
/// numerical diagonalization strays from that.
pub fn mirror_propagator_check<T: Scalar>(
    n: usize,
    g0: T,
) -> Result<(DMatrix<Complex<T>>, T)> {
    let a = register_coupling_matrix(n, g0)?;
    let es = spectral_decompose(&a.matrix)?;
    let tau = T::pi() / g0;
    // propagator() evaluates exp(-iHt); t = -tau gives exp(+iA tau).
    let u = propagator(&es, -tau);
    let target = if n % 2 == 1 { T::one() } else { -T::one() };
    let mut dev = T::zero();
    for r in 0..n {
        for c in 0..n {
            let expected = if r == c { target } else { T::zero() };
            let d = u[(r, c)] - Complex::new(expected, T::zero());
            dev = dev.max((d.re * d.re + d.im * d.im).sqrt());
        }
    }
    Ok((u, dev))
}

/// Splitting of the zero mode into a dressed doublet by the coupled atom.
pub fn dressed_splitting<T: Scalar>(config: &SystemConfig<T>) -> Result<DressedSplitting<T>> {
    config.validate()?;
    let n_cavities = config.channel.n_cavities;
    let z = zero_mode_index(n_cavities)?;
    let psi_mz: T = channel_mode(config.channel.m, z, n_cavities)?;
    let half = config.channel.effective_j() * psi_mz.abs();
    Ok(DressedSplitting {
        omega2: half + half,
        energies: (-half, half),
        m_parity_ok: config.channel.m % 2 == 1,
    })
}

/// Eigenvalues of the register coupling matrix, ascending.
pub fn register_matrix_spectrum<T: Scalar>(n: usize, g0: T) -> Result<DVector<T>> {
    let a = register_coupling_matrix(n, g0)?;
    Ok(spectral_decompose(&a.matrix)?.eigenvalues().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::transition_amplitudes;
    use crate::error::Error;
    use crate::model::{build_full_hamiltonian, register_spectrum, validity_report};
    use approx::assert_abs_diff_eq;

    #[test]
    fn smallest_register_layout_and_couplings() {
        let config = SystemConfig::resonant(1, 7, 3, 0.25, 0.05, true).unwrap();
        let model = build_effective_hamiltonian(&config).unwrap();
        assert_eq!(model.dim(), 4);
        assert_eq!(model.matrix().nrows(), 4);
        let (l, r, z, e) = (model.left(1), model.right(1), model.zero_mode(), model.atom());
        assert_eq!((l, r, z, e), (0, 1, 2, 3));
        // psi_{1,4} = 0.5 at N=7; z=4 is even so the right sign flips.
        assert_abs_diff_eq!(model.matrix()[(l, z)], 0.125, epsilon = 1e-15);
        assert_abs_diff_eq!(model.matrix()[(r, z)], -0.125, epsilon = 1e-15);
        // psi_{3,4} = -0.5: the atom bond carries the signed mode value.
        assert_abs_diff_eq!(model.matrix()[(z, e)], -0.025, epsilon = 1e-15);
        assert_eq!(model.matrix()[(l, r)], 0.0);
    }

    #[test]
    fn matrix_is_symmetric_and_rejects_even_channels() {
        let config = SystemConfig::resonant(3, 9, 5, 1e-2, 0.1, true).unwrap();
        let model = build_effective_hamiltonian(&config).unwrap();
        let m = model.matrix();
        assert_eq!(model.dim(), 8);
        for r in 0..8 {
            for c in 0..8 {
                assert_eq!(m[(r, c)], m[(c, r)]);
            }
        }
        let register = crate::model::RegisterSpec::new(2, 0.01).unwrap();
        let even = SystemConfig::new(
            register,
            register,
            crate::model::ChannelSpec::new(6, 1.0, 3, 0.0, false).unwrap(),
            1e-3,
        )
        .unwrap();
        assert!(matches!(
            build_effective_hamiltonian(&even),
            Err(Error::NoZeroMode(6))
        ));
    }

    #[test]
    fn register_matrix_smallest_cases() {
        let g0 = 0.37;
        let a = register_coupling_matrix(2, g0).unwrap().matrix;
        assert_abs_diff_eq!(a[(0, 1)], g0, epsilon = 1e-16);
        assert_abs_diff_eq!(a[(1, 0)], g0, epsilon = 1e-16);
        assert_eq!(a[(0, 0)], 0.0);

        let eigs = register_matrix_spectrum(3, g0).unwrap();
        assert_abs_diff_eq!(eigs[0], -2.0 * g0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eigs[2], 2.0 * g0, epsilon = 1e-12);
    }

    #[test]
    fn register_matrix_spectrum_is_harmonic() {
        for &n in &[10usize, 20] {
            let g0 = 0.8;
            let eigs = register_matrix_spectrum(n, g0).unwrap();
            let analytic = register_spectrum(n, g0).unwrap();
            for q in 0..n {
                assert_abs_diff_eq!(eigs[q], analytic[q], epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn mirror_propagator_alternates_sign() {
        for n in 1..=12 {
            let (_, dev) = mirror_propagator_check(n, 0.04_f64).unwrap();
            assert!(dev <= 1e-8, "n={n} deviation {dev:e}");
        }
        let (u, dev) = mirror_propagator_check(1, 1.0_f64).unwrap();
        assert!(dev <= 1e-14);
        assert_abs_diff_eq!(u[(0, 0)].re, 1.0, epsilon = 1e-14);
        let (u, _) = mirror_propagator_check(2, 0.5_f64).unwrap();
        assert!((u[(0, 0)] + Complex::new(1.0, 0.0)).norm() < 1e-10);
        assert!((u[(1, 1)] + Complex::new(1.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn dressed_doublet_gap() {
        let config = SystemConfig::resonant(2, 7, 3, 1e-3, 0.05, true).unwrap();
        let split = dressed_splitting(&config).unwrap();
        assert_abs_diff_eq!(split.omega2, 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(split.energies.0, -0.025, epsilon = 1e-15);
        assert_abs_diff_eq!(split.energies.1, 0.025, epsilon = 1e-15);
        assert!(split.m_parity_ok);
        let report = validity_report(&config).unwrap();
        assert_abs_diff_eq!(split.omega2, report.omega2, epsilon = 1e-15);

        let uncoupled = SystemConfig::resonant(2, 7, 3, 1e-3, 0.0, false).unwrap();
        let split = dressed_splitting(&uncoupled).unwrap();
        assert_eq!(split.omega2, 0.0);

        let even_m = SystemConfig::resonant(2, 7, 2, 1e-3_f64, 0.05, true).unwrap();
        let split = dressed_splitting(&even_m).unwrap();
        assert!(split.omega2.abs() < 1e-16);
        assert!(!split.m_parity_ok);
    }

    #[test]
    fn effective_propagation_conserves_excitation() {
        let config = SystemConfig::resonant(3, 7, 3, 5e-3, 0.05, true).unwrap();
        let model = build_effective_hamiltonian(&config).unwrap();
        let es = spectral_decompose(model.matrix()).unwrap();
        let u = propagator(&es, 123.4);
        let gram = u.adjoint() * &u;
        let dev = (gram - DMatrix::<Complex<f64>>::identity(8, 8))
            .map(|z| z.norm())
            .max();
        assert!(dev < 1e-10);
    }

    #[test]
    fn agrees_with_full_model_at_weak_interface() {
        // Both register blocks of the propagator, reduced vs full; the gap
        // scales linearly with g_I and stays under 0.1 g_I through g_I = 1e-2.
        for &j_i in &[0.0_f64, 0.05] {
            for &g_i in &[1e-3_f64, 3e-3, 1e-2] {
                let coupled = j_i > 0.0;
                let config = SystemConfig::resonant(2, 7, 3, g_i, j_i, coupled).unwrap();
                let tau = config.transfer_time();
                let layout = config.layout();

                let h_full = build_full_hamiltonian(&config).unwrap();
                let es_full = spectral_decompose(&h_full).unwrap();
                let model = build_effective_hamiltonian(&config).unwrap();
                let es_eff = spectral_decompose(model.matrix()).unwrap();

                let mut worst = 0.0_f64;
                let pairs = [
                    (layout.left_indices(), model.left_indices()),
                    (layout.right_indices(), model.right_indices()),
                ];
                for (full_targets, eff_targets) in &pairs {
                    let f_full = transition_amplitudes(
                        &es_full,
                        &layout.left_indices(),
                        full_targets,
                        tau,
                    )
                    .unwrap();
                    let f_eff = transition_amplitudes(
                        &es_eff,
                        &model.left_indices(),
                        eff_targets,
                        tau,
                    )
                    .unwrap();
                    let dev = (&f_full.f - &f_eff.f).map(|z| z.norm()).max();
                    worst = worst.max(dev);
                }
                assert!(
                    worst <= 0.1 * g_i,
                    "J_I={j_i} g_I={g_i}: deviation {worst:e} exceeds 0.1 g_I"
                );
                if j_i == 0.0 && g_i == 1e-3 {
                    assert!(worst <= 5e-3);
                }
            }
        }
    }
}
