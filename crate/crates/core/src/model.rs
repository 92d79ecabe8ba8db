//! System description and analytic spectral data.
//!
//! Two registers of `n` cavities each sit at the ends of a channel of `N`
//! cavities; a two-level atom attaches to channel site `m` and acts as the
//! switch. Registers carry the non-uniform couplings of a perfect-transfer
//! chain, the channel is a uniform chain, and everything lives in the
//! single-excitation sector, so the Hamiltonian is a real symmetric matrix
//! over one basis state per cavity plus one for the atom. Energies are
//! measured in units of the channel coupling and the rotating frame removes
//! the common cavity frequency, which zeroes the diagonal.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::{idx, lit, Scalar};

/// Flag thresholds use this ratio as the meaning of "much smaller than".
pub const RATIO_THRESHOLD: f64 = 0.1;

/// One register: `n` cavities with bonds g_j = g0 sqrt(j(2n+1-j))/2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterSpec<T: Scalar> {
    /// Cavity count, at least 1.
    pub n: usize,
    /// Coupling scale, in units of the channel coupling.
    pub g0: T,
}

impl<T: Scalar> RegisterSpec<T> {
    pub fn new(n: usize, g0: T) -> Result<Self> {
        let spec = Self { n, g0 };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParameter(
                "register needs at least one cavity".into(),
            ));
        }
        if self.g0 <= T::zero() {
            return Err(Error::InvalidParameter("register coupling g0 must be positive".into()));
        }
        Ok(())
    }
}

/// The connecting chain of `N` cavities with an atom wired to site `m`.
///
/// `atom_coupled` selects the switch state; the uncoupled state is modeled
/// as a vanishing atom bond, with the atom level still present in the basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelSpec<T: Scalar> {
    /// Cavity count N. Odd N is required by the switching operations;
    /// even N builds are allowed for exploration but carry no zero mode.
    pub n_cavities: usize,
    /// Intrachannel coupling, the unit of energy (normally 1).
    pub g_c: T,
    /// Atom site m, 1-based, in [1, N].
    pub m: usize,
    /// Atom-channel coupling J_I, >= 0.
    pub j_i: T,
    /// Switch state: true couples the atom bond.
    pub atom_coupled: bool,
}

impl<T: Scalar> ChannelSpec<T> {
    pub fn new(n_cavities: usize, g_c: T, m: usize, j_i: T, atom_coupled: bool) -> Result<Self> {
        let spec = Self { n_cavities, g_c, m, j_i, atom_coupled };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_cavities == 0 {
            return Err(Error::InvalidParameter("channel needs at least one cavity".into()));
        }
        if self.g_c <= T::zero() {
            return Err(Error::InvalidParameter("channel coupling g_c must be positive".into()));
        }
        if self.m < 1 || self.m > self.n_cavities {
            return Err(Error::InvalidParameter(format!(
                "atom site m = {} outside [1, {}]",
                self.m, self.n_cavities
            )));
        }
        if self.j_i < T::zero() {
            return Err(Error::InvalidParameter("atom coupling J_I must be nonnegative".into()));
        }
        Ok(())
    }

    /// Atom bond actually entering the Hamiltonian: J_I when coupled, 0 when not.
    pub fn effective_j(&self) -> T {
        if self.atom_coupled {
            self.j_i
        } else {
            T::zero()
        }
    }
}

/// Full two-register system: left and right registers, channel, and the
/// register-channel coupling g_I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig<T: Scalar> {
    pub left: RegisterSpec<T>,
    pub right: RegisterSpec<T>,
    pub channel: ChannelSpec<T>,
    /// Interface coupling g_I at both register-channel junctions.
    pub g_i: T,
}

impl<T: Scalar> SystemConfig<T> {
    pub fn new(
        left: RegisterSpec<T>,
        right: RegisterSpec<T>,
        channel: ChannelSpec<T>,
        g_i: T,
    ) -> Result<Self> {
        let config = Self { left, right, channel, g_i };
        config.validate()?;
        Ok(config)
    }

    /// Mirror-symmetric system: identical registers, g0 fixed by the
    /// resonance condition between interface and register couplings.
    pub fn resonant(n: usize, n_cavities: usize, m: usize, g_i: T, j_i: T, atom_coupled: bool) -> Result<Self> {
        let g0 = resonant_g0(g_i, n, n_cavities)?;
        let register = RegisterSpec::new(n, g0)?;
        let channel = ChannelSpec::new(n_cavities, T::one(), m, j_i, atom_coupled)?;
        Self::new(register, register, channel, g_i)
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        self.channel.validate()?;
        if self.left.n != self.right.n {
            return Err(Error::InvalidParameter(format!(
                "registers must have equal cavity counts, got {} and {}",
                self.left.n, self.right.n
            )));
        }
        if self.g_i <= T::zero() {
            return Err(Error::InvalidParameter("interface coupling g_I must be positive".into()));
        }
        Ok(())
    }

    pub fn layout(&self) -> BasisLayout {
        BasisLayout { n: self.left.n, n_cavities: self.channel.n_cavities }
    }

    /// Transfer time of the switching protocol, pi over the left register's g0.
    pub fn transfer_time(&self) -> T {
        T::pi() / self.left.g0
    }
}

/// Index assignment of the single-excitation basis: left cavities, then
/// channel cavities, then right cavities, then the atom.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisLayout {
    pub n: usize,
    pub n_cavities: usize,
}

impl BasisLayout {
    pub fn total_dim(&self) -> usize {
        2 * self.n + self.n_cavities + 1
    }

    /// Index of left cavity l_j, j in 1..=n.
    pub fn left(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n, "left cavity index out of range");
        j - 1
    }

    /// Index of channel cavity c_i, i in 1..=N.
    pub fn channel(&self, i: usize) -> usize {
        assert!(i >= 1 && i <= self.n_cavities, "channel cavity index out of range");
        self.n + i - 1
    }

    /// Index of right cavity r_j, j in 1..=n.
    pub fn right(&self, j: usize) -> usize {
        assert!(j >= 1 && j <= self.n, "right cavity index out of range");
        self.n + self.n_cavities + j - 1
    }

    pub fn atom(&self) -> usize {
        2 * self.n + self.n_cavities
    }

    pub fn left_indices(&self) -> Vec<usize> {
        (1..=self.n).map(|j| self.left(j)).collect()
    }

    pub fn right_indices(&self) -> Vec<usize> {
        (1..=self.n).map(|j| self.right(j)).collect()
    }
}

/// Scale hierarchy of a configuration and the derived regime flags.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidityReport<T: Scalar> {
    /// Register bandwidth, |lambda_1 - lambda_n|.
    pub omega0: T,
    /// Gap between the channel zero mode and its nearest band neighbors.
    pub omega1: T,
    /// Dressed-doublet splitting 2 J_I |psi_{m,z}| (0 when uncoupled).
    pub omega2: T,
    /// True when the register bandwidth and both interface scales sit below
    /// RATIO_THRESHOLD times the channel gap.
    pub weak_coupling: bool,
    /// True when g0 sits below RATIO_THRESHOLD times the coupled atom bond.
    pub switch_regime: bool,
    /// The atom decouples the zero mode only at odd m.
    pub m_parity_ok: bool,
}

/// Register bonds g_j = g0 sqrt(j(2n+1-j))/2 for j = 1..=n.
///
/// Entries 1..n-1 are the intra-register bonds; the last entry is the
/// interface value g_n that the resonance condition matches to the channel
/// zero mode.
pub fn register_couplings<T: Scalar>(n: usize, g0: T) -> Result<Vec<T>> {
    RegisterSpec::new(n, g0)?;
    let two_n1 = idx::<T>(2 * n + 1);
    Ok((1..=n)
        .map(|j| {
            let j = idx::<T>(j);
            g0 * (j * (two_n1 - j)).sqrt() / lit(2.0)
        })
        .collect())
}

/// Register eigenvalues lambda_q = g0 (2q - n - 1) for q = 1..=n, an
/// arithmetic ladder with spacing 2 g0 centered on zero.
pub fn register_spectrum<T: Scalar>(n: usize, g0: T) -> Result<Vec<T>> {
    RegisterSpec::new(n, g0)?;
    Ok((1..=n)
        .map(|q| g0 * (idx::<T>(2 * q) - idx::<T>(n) - T::one()))
        .collect())
}

/// Channel eigenmode amplitude psi_{i,k} = sqrt(2/(N+1)) sin(ik pi/(N+1)).
pub fn channel_mode<T: Scalar>(i: usize, k: usize, n_cavities: usize) -> Result<T> {
    if n_cavities == 0 {
        return Err(Error::InvalidParameter("channel needs at least one cavity".into()));
    }
    if i < 1 || i > n_cavities || k < 1 || k > n_cavities {
        return Err(Error::InvalidParameter(format!(
            "mode indices (i={i}, k={k}) outside [1, {n_cavities}]"
        )));
    }
    let np1 = idx::<T>(n_cavities + 1);
    let arg = idx::<T>(i * k) * T::pi() / np1;
    Ok((lit::<T>(2.0) / np1).sqrt() * arg.sin())
}

/// Channel eigenvalue Lambda_k = 2 g_c cos(k pi/(N+1)), decreasing in k.
pub fn channel_energy<T: Scalar>(k: usize, n_cavities: usize, g_c: T) -> Result<T> {
    if n_cavities == 0 {
        return Err(Error::InvalidParameter("channel needs at least one cavity".into()));
    }
    if k < 1 || k > n_cavities {
        return Err(Error::InvalidParameter(format!(
            "mode index k={k} outside [1, {n_cavities}]"
        )));
    }
    let arg = idx::<T>(k) * T::pi() / idx::<T>(n_cavities + 1);
    Ok(lit::<T>(2.0) * g_c * arg.cos())
}

/// Index z = (N+1)/2 of the channel's zero-energy mode; odd N only.
pub fn zero_mode_index(n_cavities: usize) -> Result<usize> {
    if n_cavities == 0 || n_cavities % 2 == 0 {
        return Err(Error::NoZeroMode(n_cavities));
    }
    Ok((n_cavities + 1) / 2)
}

/// The g0 that puts the interface on resonance with the zero mode,
/// g0 = 2 g_I psi_{1,z} / sqrt(n(n+1)), so that g_I psi_{1,z} = g_n.
pub fn resonant_g0<T: Scalar>(g_i: T, n: usize, n_cavities: usize) -> Result<T> {
    if g_i <= T::zero() {
        return Err(Error::InvalidParameter("interface coupling g_I must be positive".into()));
    }
    if n == 0 {
        return Err(Error::InvalidParameter("register needs at least one cavity".into()));
    }
    let z = zero_mode_index(n_cavities)?;
    let psi_1z = channel_mode::<T>(1, z, n_cavities)?;
    Ok(lit::<T>(2.0) * g_i * psi_1z / (idx::<T>(n) * idx::<T>(n + 1)).sqrt())
}

/// Full single-excitation Hamiltonian over the layout of `config`.
///
/// Zero diagonal; off-diagonal bonds are the register couplings on both
/// sides, the uniform channel bonds, the two interface bonds l_n-c_1 and
/// r_n-c_N at g_I, and the atom bond c_m-|e> when the switch is coupled.
pub fn build_full_hamiltonian<T: Scalar>(config: &SystemConfig<T>) -> Result<DMatrix<T>> {
    config.validate()?;
    let layout = config.layout();
    let n = layout.n;
    let big_n = layout.n_cavities;
    let mut h = DMatrix::zeros(layout.total_dim(), layout.total_dim());
    let mut bond = |a: usize, b: usize, v: T| {
        h[(a, b)] = v;
        h[(b, a)] = v;
    };

    let g_left = register_couplings(n, config.left.g0)?;
    let g_right = register_couplings(n, config.right.g0)?;
    for j in 1..n {
        bond(layout.left(j), layout.left(j + 1), g_left[j - 1]);
        bond(layout.right(j), layout.right(j + 1), g_right[j - 1]);
    }
    for i in 1..big_n {
        bond(layout.channel(i), layout.channel(i + 1), config.channel.g_c);
    }
    bond(layout.left(n), layout.channel(1), config.g_i);
    bond(layout.right(n), layout.channel(big_n), config.g_i);
    let j_eff = config.channel.effective_j();
    if j_eff > T::zero() {
        bond(layout.channel(config.channel.m), layout.atom(), j_eff);
    }
    Ok(h)
}

/// Frequency scales and regime flags of a configuration; odd N only.
pub fn validity_report<T: Scalar>(config: &SystemConfig<T>) -> Result<ValidityReport<T>> {
    config.validate()?;
    let big_n = config.channel.n_cavities;
    let z = zero_mode_index(big_n)?;
    let spectrum = register_spectrum(config.left.n, config.left.g0)?;
    let omega0 = (spectrum[0] - spectrum[config.left.n - 1]).abs();
    // The zero mode sits at the band center; both neighbors are equidistant.
    let omega1 = if z > 1 {
        (channel_energy(z - 1, big_n, config.channel.g_c)? - channel_energy(z, big_n, config.channel.g_c)?).abs()
    } else {
        T::zero()
    };
    let j_eff = config.channel.effective_j();
    let psi_mz = channel_mode::<T>(config.channel.m, z, big_n)?;
    let omega2 = lit::<T>(2.0) * j_eff * psi_mz.abs();

    let threshold = lit::<T>(RATIO_THRESHOLD);
    let interface = config.g_i * channel_mode::<T>(1, z, big_n)?;
    let atom_scale = j_eff * psi_mz.abs();
    let weak_coupling = omega0.max(interface.abs()).max(atom_scale) < threshold * omega1;
    let switch_regime = j_eff > T::zero() && config.left.g0 < threshold * j_eff;
    let m_parity_ok = config.channel.m % 2 == 1;

    Ok(ValidityReport { omega0, omega1, omega2, weak_coupling, switch_regime, m_parity_ok })
}
