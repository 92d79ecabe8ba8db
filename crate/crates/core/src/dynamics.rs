//! Exact time evolution by spectral decomposition.
//!
//! Hamiltonians here are real symmetric and time-independent within a
//! schedule segment, so evolution is computed from one eigendecomposition
//! per distinct matrix rather than by step integration; long transfer times
//! cost nothing in accuracy.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{lit, Scalar};

/// Tolerated asymmetry in an input Hamiltonian (absolute, in energy units).
const SYMMETRY_TOL: f64 = 1e-12;

/// Tolerated norm deviation of an input state.
const NORM_TOL: f64 = 1e-8;

/// Spectral decomposition H = V diag(E) V^T with eigenvalues ascending.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigensystem<T: Scalar> {
    values: DVector<T>,
    vectors: DMatrix<T>,
}

impl<T: Scalar> Eigensystem<T> {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &DVector<T> {
        &self.values
    }

    /// Orthonormal eigenvectors, column k belonging to eigenvalue k.
    pub fn eigenvectors(&self) -> &DMatrix<T> {
        &self.vectors
    }
}

/// Complex amplitudes over a basis layout, stamped with the time they
/// refer to (units of inverse channel coupling).
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T: Scalar> {
    pub amplitudes: DVector<Complex<T>>,
    pub time: T,
}

impl<T: Scalar> StateVector<T> {
    /// Unit amplitude on one basis site at time zero.
    pub fn basis_state(dim: usize, site: usize) -> Self {
        assert!(site < dim, "basis site out of range");
        let mut amplitudes = DVector::from_element(dim, Complex::new(T::zero(), T::zero()));
        amplitudes[site] = Complex::new(T::one(), T::zero());
        Self { amplitudes, time: T::zero() }
    }

    pub fn norm(&self) -> T {
        self.amplitudes.norm()
    }
}

/// Block of propagator entries F[a][b] = <target_a| exp(-iHt) |source_b>.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeMatrix<T: Scalar> {
    pub f: DMatrix<Complex<T>>,
    pub source: String,
    pub target: String,
    pub time: T,
}

/// Diagonalizes a real symmetric matrix; rejects asymmetric input.
pub fn spectral_decompose<T: Scalar>(h: &DMatrix<T>) -> Result<Eigensystem<T>> {
    if h.nrows() != h.ncols() {
        return Err(Error::InvalidParameter(format!(
            "matrix must be square, got {}x{}",
            h.nrows(),
            h.ncols()
        )));
    }
    let mut asym = T::zero();
    for r in 0..h.nrows() {
        for c in (r + 1)..h.ncols() {
            asym = asym.max((h[(r, c)] - h[(c, r)]).abs());
        }
    }
    if asym > lit(SYMMETRY_TOL) {
        return Err(Error::NotSymmetric(asym.to_f64().unwrap_or(f64::NAN)));
    }

    let eigen = SymmetricEigen::new(h.clone());
    let dim = h.nrows();
    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| {
        eigen.eigenvalues[a]
            .partial_cmp(&eigen.eigenvalues[b])
            .expect("eigenvalues of a symmetric real matrix are ordered")
    });
    let values = DVector::from_fn(dim, |i, _| eigen.eigenvalues[order[i]]);
    let vectors = DMatrix::from_fn(dim, dim, |r, c| eigen.eigenvectors[(r, order[c])]);
    Ok(Eigensystem { values, vectors })
}

/// Per-eigenvalue phase factors of exp(-iHt), as (cos, -sin) pairs.
fn phases<T: Scalar>(es: &Eigensystem<T>, t: T) -> Vec<(T, T)> {
    es.values
        .iter()
        .map(|&e| {
            let (s, c) = (e * t).sin_cos();
            (c, -s)
        })
        .collect()
}

/// Applies exp(-iHt) to a set of complex column vectors.
///
/// Works in the eigenbasis with real matrix products only: project, rotate
/// each coefficient by its eigenphase, project back.
pub(crate) fn evolve_columns<T: Scalar>(
    es: &Eigensystem<T>,
    columns: &DMatrix<Complex<T>>,
    t: T,
) -> DMatrix<Complex<T>> {
    assert_eq!(columns.nrows(), es.dim(), "column dimension mismatch");
    let xr = columns.map(|z| z.re);
    let xi = columns.map(|z| z.im);
    let cr = es.vectors.tr_mul(&xr);
    let ci = es.vectors.tr_mul(&xi);
    let ph = phases(es, t);
    // (cr + i ci)(c + i s) with s already negated: real and imaginary parts.
    let dr = DMatrix::from_fn(cr.nrows(), cr.ncols(), |k, j| {
        let (c, s) = ph[k];
        cr[(k, j)] * c - ci[(k, j)] * s
    });
    let di = DMatrix::from_fn(cr.nrows(), cr.ncols(), |k, j| {
        let (c, s) = ph[k];
        cr[(k, j)] * s + ci[(k, j)] * c
    });
    let yr = &es.vectors * dr;
    let yi = &es.vectors * di;
    yr.zip_map(&yi, |r, i| Complex::new(r, i))
}

/// Full propagator U(t) = V exp(-iEt) V^T.
pub fn propagator<T: Scalar>(es: &Eigensystem<T>, t: T) -> DMatrix<Complex<T>> {
    let dim = es.dim();
    let ph = phases(es, t);
    let mut vc = es.vectors.clone();
    let mut vs = es.vectors.clone();
    for k in 0..dim {
        let (c, s) = ph[k];
        vc.column_mut(k).scale_mut(c);
        vs.column_mut(k).scale_mut(s);
    }
    let re = &vc * es.vectors.transpose();
    let im = &vs * es.vectors.transpose();
    re.zip_map(&im, |r, i| Complex::new(r, i))
}

/// Evolves a normalized state by time t under the decomposed Hamiltonian.
pub fn evolve_state<T: Scalar>(
    es: &Eigensystem<T>,
    psi0: &StateVector<T>,
    t: T,
) -> Result<StateVector<T>> {
    if psi0.amplitudes.len() != es.dim() {
        return Err(Error::InvalidParameter(format!(
            "state dimension {} does not match system dimension {}",
            psi0.amplitudes.len(),
            es.dim()
        )));
    }
    let dev = (psi0.norm() - T::one()).abs();
    if dev > lit(NORM_TOL) {
        return Err(Error::NotNormalized(dev.to_f64().unwrap_or(f64::NAN)));
    }
    let columns = DMatrix::from_fn(es.dim(), 1, |r, _| psi0.amplitudes[r]);
    let evolved = evolve_columns(es, &columns, t);
    Ok(StateVector {
        amplitudes: DVector::from_fn(es.dim(), |r, _| evolved[(r, 0)]),
        time: psi0.time + t,
    })
}

fn check_index_set(label: &str, indices: &[usize], dim: usize) -> Result<()> {
    if indices.is_empty() {
        return Err(Error::BadIndexSet(format!("{label} index set is empty")));
    }
    let mut seen = vec![false; dim];
    for &i in indices {
        if i >= dim {
            return Err(Error::BadIndexSet(format!(
                "{label} index {i} out of range for dimension {dim}"
            )));
        }
        if seen[i] {
            return Err(Error::BadIndexSet(format!("{label} index {i} appears twice")));
        }
        seen[i] = true;
    }
    Ok(())
}

/// Propagator block between two cavity sets without forming the full U(t).
pub fn transition_amplitudes<T: Scalar>(
    es: &Eigensystem<T>,
    source_indices: &[usize],
    target_indices: &[usize],
    t: T,
) -> Result<AmplitudeMatrix<T>> {
    let dim = es.dim();
    check_index_set("source", source_indices, dim)?;
    check_index_set("target", target_indices, dim)?;

    let vt = DMatrix::from_fn(target_indices.len(), dim, |a, k| {
        es.vectors[(target_indices[a], k)]
    });
    let vs = DMatrix::from_fn(source_indices.len(), dim, |b, k| {
        es.vectors[(source_indices[b], k)]
    });
    let ph = phases(es, t);
    let mut vtc = vt.clone();
    let mut vts = vt;
    for k in 0..dim {
        let (c, s) = ph[k];
        vtc.column_mut(k).scale_mut(c);
        vts.column_mut(k).scale_mut(s);
    }
    let re = &vtc * vs.transpose();
    let im = &vts * vs.transpose();
    Ok(AmplitudeMatrix {
        f: re.zip_map(&im, |r, i| Complex::new(r, i)),
        source: "source".into(),
        target: "target".into(),
        time: t,
    })
}

/// Marches a set of column vectors through a piecewise-constant timeline,
/// returning the evolved columns at each requested sample time.
pub(crate) fn piecewise_columns<T: Scalar>(
    segments: &[(&Eigensystem<T>, T)],
    columns: &DMatrix<Complex<T>>,
    sample_times: &[T],
) -> Result<Vec<DMatrix<Complex<T>>>> {
    if segments.is_empty() {
        return Err(Error::BadSchedule("segment list is empty".into()));
    }
    let dim = columns.nrows();
    let mut total = T::zero();
    for (i, (es, duration)) in segments.iter().enumerate() {
        if es.dim() != dim {
            return Err(Error::BadSchedule(format!(
                "segment {i} dimension {} does not match state dimension {dim}",
                es.dim()
            )));
        }
        if *duration <= T::zero() {
            return Err(Error::BadSchedule(format!("segment {i} duration must be positive")));
        }
        total += *duration;
    }
    let slack = total * lit(1e-12);
    for w in sample_times.windows(2) {
        if w[1] < w[0] {
            return Err(Error::BadSchedule("sample times must be ascending".into()));
        }
    }
    if let (Some(&first), Some(&last)) = (sample_times.first(), sample_times.last()) {
        if first < T::zero() || last > total + slack {
            return Err(Error::BadSchedule(format!(
                "sample times must lie within [0, {}]",
                total.to_f64().unwrap_or(f64::NAN)
            )));
        }
    }

    let mut out = Vec::with_capacity(sample_times.len());
    let mut at_segment_start = columns.clone();
    let mut seg_start = T::zero();
    let mut next = 0;
    for (i, (es, duration)) in segments.iter().enumerate() {
        let seg_end = seg_start + *duration;
        let last_segment = i + 1 == segments.len();
        while next < sample_times.len()
            && (sample_times[next] <= seg_end + slack || last_segment)
        {
            // Clamp against boundary slack so a sample nominally equal to a
            // segment edge never evolves past the segment.
            let dt = (sample_times[next] - seg_start).max(T::zero()).min(*duration);
            out.push(evolve_columns(es, &at_segment_start, dt));
            next += 1;
        }
        if next == sample_times.len() {
            break;
        }
        at_segment_start = evolve_columns(es, &at_segment_start, *duration);
        seg_start = seg_end;
    }
    Ok(out)
}

/// Evolution under a piecewise-constant Hamiltonian timeline.
///
/// Each segment pairs a decomposed Hamiltonian with a positive duration;
/// sample times must be ascending and lie within the total duration. The
/// returned states carry absolute times (offset by the input stamp).
pub fn piecewise_evolve<T: Scalar>(
    segments: &[(&Eigensystem<T>, T)],
    psi0: &StateVector<T>,
    sample_times: &[T],
) -> Result<Vec<StateVector<T>>> {
    let dev = (psi0.norm() - T::one()).abs();
    if dev > lit(NORM_TOL) {
        return Err(Error::NotNormalized(dev.to_f64().unwrap_or(f64::NAN)));
    }
    let dim = psi0.amplitudes.len();
    let columns = DMatrix::from_fn(dim, 1, |r, _| psi0.amplitudes[r]);
    let evolved = piecewise_columns(segments, &columns, sample_times)?;
    Ok(evolved
        .into_iter()
        .zip(sample_times)
        .map(|(m, &t)| StateVector {
            amplitudes: DVector::from_fn(dim, |r, _| m[(r, 0)]),
            time: psi0.time + t,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_full_hamiltonian, channel_energy, SystemConfig};
    use approx::assert_abs_diff_eq;

    fn chain(n: usize, g: f64) -> DMatrix<f64> {
        DMatrix::from_fn(n, n, |r, c| if r.abs_diff(c) == 1 { g } else { 0.0 })
    }

    #[test]
    fn decompose_smallest_cases() {
        let es = spectral_decompose(&DMatrix::from_element(1, 1, 0.0_f64)).unwrap();
        assert_eq!(es.eigenvalues()[0], 0.0);
        assert_abs_diff_eq!(es.eigenvectors()[(0, 0)].abs(), 1.0, epsilon = 1e-15);

        let es = spectral_decompose(&chain(2, 0.7)).unwrap();
        assert_abs_diff_eq!(es.eigenvalues()[0], -0.7, epsilon = 1e-14);
        assert_abs_diff_eq!(es.eigenvalues()[1], 0.7, epsilon = 1e-14);
    }

    #[test]
    fn decompose_matches_channel_formula() {
        let es = spectral_decompose(&chain(7, 1.0)).unwrap();
        let mut analytic: Vec<f64> = (1..=7).map(|k| channel_energy(k, 7, 1.0).unwrap()).collect();
        analytic.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for k in 0..7 {
            assert_abs_diff_eq!(es.eigenvalues()[k], analytic[k], epsilon = 1e-10);
        }
    }

    #[test]
    fn decompose_rejects_asymmetry() {
        let mut h = chain(3, 1.0);
        h[(0, 1)] += 1e-9;
        assert!(matches!(spectral_decompose(&h), Err(Error::NotSymmetric(_))));
    }

    #[test]
    fn reconstruction_and_orthogonality() {
        let config = SystemConfig::resonant(2, 7, 3, 1e-3, 0.05, true).unwrap();
        let h = build_full_hamiltonian(&config).unwrap();
        let es = spectral_decompose(&h).unwrap();
        let v = es.eigenvectors();
        let rebuilt = v * DMatrix::from_diagonal(es.eigenvalues()) * v.transpose();
        assert!((&rebuilt - &h).abs().max() < 1e-10);
        let gram = v.tr_mul(v);
        assert!((gram - DMatrix::<f64>::identity(12, 12)).abs().max() < 1e-12);
    }

    #[test]
    fn propagator_at_zero_is_identity() {
        let es = spectral_decompose(&chain(5, 0.3)).unwrap();
        let u = propagator(&es, 0.0);
        for r in 0..5 {
            for c in 0..5 {
                let expected = if r == c { 1.0 } else { 0.0 };
                assert_abs_diff_eq!(u[(r, c)].re, expected, epsilon = 1e-14);
                assert_abs_diff_eq!(u[(r, c)].im, 0.0, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn propagator_group_property() {
        let es = spectral_decompose(&chain(6, 0.9)).unwrap();
        let u1 = propagator(&es, 1.3);
        let u2 = propagator(&es, 2.9);
        let u12 = propagator(&es, 4.2);
        let dev = (&u1 * &u2 - u12).map(|z| z.norm()).max();
        assert!(dev < 1e-9, "group property deviation {dev:e}");
    }

    #[test]
    fn dimer_off_diagonal_closed_form() {
        let g = 0.37;
        let es = spectral_decompose(&chain(2, g)).unwrap();
        for &t in &[0.0, 0.5, 2.0, 17.3] {
            let u = propagator(&es, t);
            assert_abs_diff_eq!(u[(0, 1)].re, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(u[(0, 1)].im, -(g * t).sin(), epsilon = 1e-12);
        }
    }

    #[test]
    fn evolve_matches_propagator_and_keeps_norm() {
        let es = spectral_decompose(&chain(5, 0.4)).unwrap();
        let psi0 = StateVector::basis_state(5, 2);
        let t = 3.7;
        let evolved = evolve_state(&es, &psi0, t).unwrap();
        assert_abs_diff_eq!(evolved.norm(), 1.0, epsilon = 1e-10);
        assert_eq!(evolved.time, t);
        let u = propagator(&es, t);
        for r in 0..5 {
            let direct = (0..5).fold(Complex::new(0.0, 0.0), |acc, c| {
                acc + u[(r, c)] * psi0.amplitudes[c]
            });
            assert!((evolved.amplitudes[r] - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenvector_acquires_pure_phase() {
        let es = spectral_decompose(&chain(4, 1.1)).unwrap();
        let k = 1;
        let psi0 = StateVector {
            amplitudes: DVector::from_fn(4, |r, _| Complex::new(es.eigenvectors()[(r, k)], 0.0)),
            time: 0.0,
        };
        let t = 2.6;
        let evolved = evolve_state(&es, &psi0, t).unwrap();
        let phase = Complex::from_polar(1.0, -es.eigenvalues()[k] * t);
        for r in 0..4 {
            assert!((evolved.amplitudes[r] - phase * psi0.amplitudes[r]).norm() < 1e-12);
        }
    }

    #[test]
    fn evolve_rejects_unnormalized() {
        let es = spectral_decompose(&chain(3, 1.0)).unwrap();
        let mut psi = StateVector::basis_state(3, 0);
        psi.amplitudes[0] = Complex::new(1.1, 0.0);
        assert!(matches!(evolve_state(&es, &psi, 1.0), Err(Error::NotNormalized(_))));
    }

    #[test]
    fn swap_block_reaches_negated_identity() {
        // Uncoupled switch, resonant registers: after one transfer time the
        // right-register block equals -I up to residual leakage.
        let config = SystemConfig::resonant(2, 7, 3, 1e-3, 0.0, false).unwrap();
        let h = build_full_hamiltonian(&config).unwrap();
        let es = spectral_decompose(&h).unwrap();
        let layout = config.layout();
        let f = transition_amplitudes(
            &es,
            &layout.left_indices(),
            &layout.right_indices(),
            config.transfer_time(),
        )
        .unwrap();
        for j in 0..2 {
            assert!((f.f[(j, j)] + Complex::new(1.0, 0.0)).norm() < 5e-3);
        }
    }

    #[test]
    fn identity_block_with_coupled_atom() {
        let config = SystemConfig::resonant(2, 7, 3, 1e-3, 0.05, true).unwrap();
        let h = build_full_hamiltonian(&config).unwrap();
        let es = spectral_decompose(&h).unwrap();
        let layout = config.layout();
        let f = transition_amplitudes(
            &es,
            &layout.left_indices(),
            &layout.left_indices(),
            config.transfer_time(),
        )
        .unwrap();
        for j in 0..2 {
            assert!((f.f[(j, j)] + Complex::new(1.0, 0.0)).norm() < 5e-3);
        }
    }

    #[test]
    fn amplitudes_at_zero_time_are_identity() {
        let es = spectral_decompose(&chain(6, 0.8)).unwrap();
        let f = transition_amplitudes(&es, &[1, 3, 5], &[1, 3, 5], 0.0).unwrap();
        for a in 0..3 {
            for b in 0..3 {
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((f.f[(a, b)] - Complex::new(expected, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn amplitude_index_sets_are_checked() {
        let es = spectral_decompose(&chain(4, 1.0)).unwrap();
        assert!(matches!(
            transition_amplitudes(&es, &[0, 0], &[1], 1.0),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            transition_amplitudes(&es, &[0], &[4], 1.0),
            Err(Error::BadIndexSet(_))
        ));
        assert!(matches!(
            transition_amplitudes(&es, &[], &[1], 1.0),
            Err(Error::BadIndexSet(_))
        ));
    }

    #[test]
    fn piecewise_single_segment_reduces_to_evolve() {
        let es = spectral_decompose(&chain(5, 0.6)).unwrap();
        let psi0 = StateVector::basis_state(5, 0);
        let samples = [0.0, 0.4, 1.0];
        let piecewise = piecewise_evolve(&[(&es, 1.0)], &psi0, &samples).unwrap();
        for (state, &t) in piecewise.iter().zip(&samples) {
            let direct = evolve_state(&es, &psi0, t).unwrap();
            let dev = (&state.amplitudes - &direct.amplitudes).norm();
            assert!(dev < 1e-12);
        }
    }

    #[test]
    fn piecewise_split_equals_whole() {
        let es = spectral_decompose(&chain(7, 0.5)).unwrap();
        let psi0 = StateVector::basis_state(7, 3);
        let whole = piecewise_evolve(&[(&es, 2.0)], &psi0, &[2.0]).unwrap();
        let halves = piecewise_evolve(&[(&es, 1.0), (&es, 1.0)], &psi0, &[2.0]).unwrap();
        let dev = (&whole[0].amplitudes - &halves[0].amplitudes).norm();
        assert!(dev < 1e-10);
    }

    #[test]
    fn piecewise_boundary_sample_is_continuous() {
        let a = spectral_decompose(&chain(5, 0.6)).unwrap();
        let b = spectral_decompose(&chain(5, 1.7)).unwrap();
        let psi0 = StateVector::basis_state(5, 2);
        let at_end_of_first = piecewise_evolve(&[(&a, 1.0), (&b, 1.0)], &psi0, &[1.0]).unwrap();
        let direct = evolve_state(&a, &psi0, 1.0).unwrap();
        let dev = (&at_end_of_first[0].amplitudes - &direct.amplitudes).norm();
        assert!(dev < 1e-12);
    }

    #[test]
    fn piecewise_validation() {
        let es = spectral_decompose(&chain(3, 1.0)).unwrap();
        let psi0 = StateVector::basis_state(3, 0);
        assert!(matches!(
            piecewise_evolve::<f64>(&[], &psi0, &[0.0]),
            Err(Error::BadSchedule(_))
        ));
        assert!(matches!(
            piecewise_evolve(&[(&es, -1.0)], &psi0, &[0.0]),
            Err(Error::BadSchedule(_))
        ));
        assert!(matches!(
            piecewise_evolve(&[(&es, 1.0)], &psi0, &[0.5, 0.2]),
            Err(Error::BadSchedule(_))
        ));
        assert!(matches!(
            piecewise_evolve(&[(&es, 1.0)], &psi0, &[1.5]),
            Err(Error::BadSchedule(_))
        ));
    }
}
