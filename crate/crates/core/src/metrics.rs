//! Transfer quality measures: average fidelity over input states, per-site
//! leakage, second-order leakage estimates, and the analytic infidelity
//! bound they imply.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dynamics::AmplitudeMatrix;
use crate::error::{Error, Result};
use crate::model::{channel_energy, channel_mode, zero_mode_index, SystemConfig};
use crate::scalar::{idx, lit, Scalar};

/// Which register receives the excitation: reflection keeps it on the left,
/// transmission sends it to the right.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Left => "l",
            Side::Right => "r",
        })
    }
}

impl FromStr for Side {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l" | "left" => Ok(Side::Left),
            "r" | "right" => Ok(Side::Right),
            other => Err(Error::InvalidParameter(format!(
                "unknown side {other:?}, expected l or r"
            ))),
        }
    }
}

/// Second-order leakage estimate for one transfer direction.
#[derive(Debug, Clone, PartialEq)]
pub struct LeakageEstimate<T: Scalar> {
    pub side: Side,
    /// Total leakage Delta at the transfer time, bracket factors included.
    pub delta: T,
    /// Bare per-mode weights: one entry per off-resonant channel mode below
    /// the zero mode (transmission), or the single dressed-mode weight
    /// (reflection).
    pub per_mode: Vec<T>,
    /// Predicted end-cavity site leakage, 4 Delta.
    pub epsilon_n: T,
}

/// Average fidelity of one transfer, with its infidelity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FidelityResult<T: Scalar> {
    pub f: T,
    pub xi: T,
    pub side: Side,
    pub time: T,
}

/// Monte-Carlo fidelity estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McFidelity<T: Scalar> {
    pub mean: T,
    pub std_err: T,
}

/// Average over uniformly random input states of the transfer fidelity,
/// in closed form: (|F|_F^2 + |tr F|^2) / (n(n+1)).
pub fn haar_average_fidelity<T: Scalar>(f: &DMatrix<Complex<T>>) -> Result<T> {
    if f.nrows() != f.ncols() {
        return Err(Error::InvalidParameter(format!(
            "amplitude matrix must be square, got {}x{}",
            f.nrows(),
            f.ncols()
        )));
    }
    let n = f.nrows();
    let mut frob = T::zero();
    let mut trace = Complex::new(T::zero(), T::zero());
    for r in 0..n {
        for c in 0..n {
            frob += f[(r, c)].norm_sqr();
        }
        trace += f[(r, r)];
    }
    let nn: T = idx(n);
    Ok((frob + trace.norm_sqr()) / (nn * (nn + T::one())))
}

/// Wraps the closed-form average into a labeled result.
pub fn average_fidelity<T: Scalar>(
    amplitudes: &AmplitudeMatrix<T>,
    side: Side,
) -> Result<FidelityResult<T>> {
    let f = haar_average_fidelity(&amplitudes.f)?;
    Ok(FidelityResult { f, xi: T::one() - f, side, time: amplitudes.time })
}

/// Monte-Carlo check of the average fidelity: draws normalized
/// complex-Gaussian input states and averages |alpha^dag F alpha|^2.
///
/// Fixed seed gives a bit-identical result; the generator is owned by the
/// call, so concurrent calls are independent.
pub fn monte_carlo_fidelity<T: Scalar>(
    amplitudes: &AmplitudeMatrix<T>,
    samples: usize,
    seed: u64,
) -> Result<McFidelity<T>> {
    let f = &amplitudes.f;
    if f.nrows() != f.ncols() {
        return Err(Error::InvalidParameter(format!(
            "amplitude matrix must be square, got {}x{}",
            f.nrows(),
            f.ncols()
        )));
    }
    if samples == 0 {
        return Err(Error::InvalidParameter("sample count must be at least 1".into()));
    }
    let n = f.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values: Vec<T> = Vec::with_capacity(samples);
    let mut alpha: Vec<Complex<T>> = vec![Complex::new(T::zero(), T::zero()); n];
    for _ in 0..samples {
        // Isotropic Gaussian components, normalized: Haar-uniform on the
        // sphere of input states. Draws are f64 so the stream does not
        // depend on T.
        loop {
            let mut norm_sq = T::zero();
            for a in alpha.iter_mut() {
                let re: f64 = StandardNormal.sample(&mut rng);
                let im: f64 = StandardNormal.sample(&mut rng);
                *a = Complex::new(lit(re), lit(im));
                norm_sq += a.norm_sqr();
            }
            if norm_sq > T::zero() {
                let scale = T::one() / norm_sq.sqrt();
                for a in alpha.iter_mut() {
                    *a *= scale;
                }
                break;
            }
        }
        let mut overlap = Complex::new(T::zero(), T::zero());
        for jp in 0..n {
            for j in 0..n {
                overlap += alpha[jp].conj() * f[(jp, j)] * alpha[j];
            }
        }
        values.push(overlap.norm_sqr());
    }
    let count: T = idx(samples);
    let mean = values.iter().fold(T::zero(), |acc, &v| acc + v) / count;
    let std_err = if samples > 1 {
        let ss = values
            .iter()
            .fold(T::zero(), |acc, &v| acc + (v - mean) * (v - mean));
        (ss / (count - T::one())).sqrt() / count.sqrt()
    } else {
        T::zero()
    };
    Ok(McFidelity { mean, std_err })
}

/// Per-site leakage 1 - |f_jj|^2 down the diagonal.
pub fn site_leakage<T: Scalar>(amplitudes: &AmplitudeMatrix<T>) -> Result<Vec<T>> {
    let f = &amplitudes.f;
    if f.nrows() != f.ncols() {
        return Err(Error::InvalidParameter(format!(
            "amplitude matrix must be square, got {}x{}",
            f.nrows(),
            f.ncols()
        )));
    }
    Ok((0..f.nrows())
        .map(|j| T::one() - f[(j, j)].norm_sqr())
        .collect())
}

/// Leakage into off-resonant channel modes during transmission, to second
/// order in the interface coupling, evaluated at the transfer time.
pub fn perturbative_transmission_leakage<T: Scalar>(
    config: &SystemConfig<T>,
) -> Result<LeakageEstimate<T>> {
    config.validate()?;
    let n = config.left.n;
    let n_cavities = config.channel.n_cavities;
    let z = zero_mode_index(n_cavities)?;
    let tau = config.transfer_time();
    let mut per_mode = Vec::with_capacity(z - 1);
    let mut delta = T::zero();
    for k in 1..z {
        let psi: T = channel_mode(1, k, n_cavities)?;
        let energy = channel_energy(k, n_cavities, config.channel.g_c)?;
        let ratio = config.g_i * psi / energy;
        let weight = ratio * ratio;
        // Modes pair off around zero energy; the pair phases interfere with
        // a parity set by n, k, and z.
        let sign = if (n + k + z) % 2 == 0 { T::one() } else { -T::one() };
        delta += weight * (T::one() - sign * (energy * tau).cos());
        per_mode.push(weight);
    }
    let four = lit::<T>(4.0);
    Ok(LeakageEstimate { side: Side::Right, delta, per_mode, epsilon_n: four * delta })
}

/// Leakage through the dressed channel doublet during reflection, to second
/// order in the interface coupling, evaluated at the transfer time.
pub fn perturbative_reflection_leakage<T: Scalar>(
    config: &SystemConfig<T>,
) -> Result<LeakageEstimate<T>> {
    config.validate()?;
    let channel = &config.channel;
    if !channel.atom_coupled || channel.j_i <= T::zero() {
        return Err(Error::ReflectionUndefined(
            "reflection regime undefined: switch atom is uncoupled".into(),
        ));
    }
    if channel.m % 2 == 0 {
        return Err(Error::ReflectionUndefined(
            "reflection regime undefined: zero mode vanishes at even atom site".into(),
        ));
    }
    let n = config.left.n;
    let n_cavities = channel.n_cavities;
    let z = zero_mode_index(n_cavities)?;
    let psi_1z: T = channel_mode(1, z, n_cavities)?;
    let psi_mz: T = channel_mode(channel.m, z, n_cavities)?;
    let tau = config.transfer_time();
    let ratio = config.g_i * psi_1z / (channel.j_i * psi_mz);
    let weight = ratio * ratio / lit::<T>(2.0);
    let sign = if (n + 1) % 2 == 0 { T::one() } else { -T::one() };
    let delta = weight * (T::one() - sign * (channel.j_i * psi_mz * tau).cos());
    let four = lit::<T>(4.0);
    Ok(LeakageEstimate {
        side: Side::Left,
        delta,
        per_mode: vec![weight],
        epsilon_n: four * delta,
    })
}

/// Analytic upper bound on the average infidelity: 8/n times the bare
/// per-mode leakage weights of the relevant direction.
pub fn infidelity_upper_bound<T: Scalar>(config: &SystemConfig<T>, side: Side) -> Result<T> {
    let estimate = match side {
        Side::Right => perturbative_transmission_leakage(config)?,
        Side::Left => perturbative_reflection_leakage(config)?,
    };
    let bare = estimate
        .per_mode
        .iter()
        .fold(T::zero(), |acc, &w| acc + w);
    let n: T = idx(config.left.n);
    Ok(lit::<T>(8.0) / n * bare)
}
