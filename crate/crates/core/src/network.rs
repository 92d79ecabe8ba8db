//! Register networks: many registers joined by switched channels, evolved
//! under a schedule that opens one channel at a time.
//!
//! Basis layout is register cavities (register-major), then channel
//! cavities (channel-major), then one atom level per channel.

use std::collections::HashMap;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use crate::dynamics::{piecewise_columns, spectral_decompose, Eigensystem};
use crate::error::{Error, Result};
use crate::metrics::haar_average_fidelity;
use crate::model::{register_couplings, resonant_g0, ChannelSpec, RegisterSpec};
use crate::scalar::{idx, lit, Scalar};

/// A channel instance wired between two registers.
///
/// `spec.atom_coupled` is ignored here: in a network the switch states come
/// from the schedule, interval by interval.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkChannel<T: Scalar> {
    pub label: String,
    pub spec: ChannelSpec<T>,
    /// Register indices (0-based) at the channel's two ends.
    pub endpoints: (usize, usize),
    /// Interface coupling used at both attachments.
    pub g_i: T,
}

/// Registers plus the channels that connect them.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkTopology<T: Scalar> {
    pub registers: Vec<RegisterSpec<T>>,
    pub channels: Vec<NetworkChannel<T>>,
}

impl<T: Scalar> NetworkTopology<T> {
    pub fn validate(&self) -> Result<()> {
        if self.registers.is_empty() {
            return Err(Error::BadTopology("network needs at least one register".into()));
        }
        for register in &self.registers {
            register.validate()?;
        }
        let r = self.registers.len();
        let mut labels = Vec::with_capacity(self.channels.len());
        for channel in &self.channels {
            channel.spec.validate()?;
            if channel.g_i <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "channel {} interface coupling g_I must be positive",
                    channel.label
                )));
            }
            let (a, b) = channel.endpoints;
            if a == b {
                return Err(Error::BadTopology(format!(
                    "channel {} connects register {a} to itself",
                    channel.label
                )));
            }
            if a >= r || b >= r {
                return Err(Error::BadTopology(format!(
                    "channel {} endpoint out of range for {r} registers",
                    channel.label
                )));
            }
            if channel.label.is_empty() || labels.contains(&&channel.label) {
                return Err(Error::BadTopology(format!(
                    "channel labels must be unique and nonempty, got {:?}",
                    channel.label
                )));
            }
            labels.push(&channel.label);
        }
        // Every register must be reachable, otherwise part of the network
        // can never exchange an excitation with the rest.
        let mut reached = vec![false; r];
        let mut queue = vec![0usize];
        reached[0] = true;
        while let Some(v) = queue.pop() {
            for channel in &self.channels {
                let (a, b) = channel.endpoints;
                let next = if a == v { b } else if b == v { a } else { continue };
                if !reached[next] {
                    reached[next] = true;
                    queue.push(next);
                }
            }
        }
        if let Some(isolated) = reached.iter().position(|&ok| !ok) {
            return Err(Error::BadTopology(format!(
                "register {isolated} is not connected to the network"
            )));
        }
        Ok(())
    }

    pub fn n_registers(&self) -> usize {
        self.registers.len()
    }

    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn dim(&self) -> usize {
        let cavities: usize = self.registers.iter().map(|r| r.n).sum::<usize>()
            + self.channels.iter().map(|c| c.spec.n_cavities).sum::<usize>();
        cavities + self.channels.len()
    }

    fn register_offset(&self, theta: usize) -> usize {
        self.registers[..theta].iter().map(|r| r.n).sum()
    }

    fn channel_offset(&self, c: usize) -> usize {
        self.registers.iter().map(|r| r.n).sum::<usize>()
            + self.channels[..c].iter().map(|ch| ch.spec.n_cavities).sum::<usize>()
    }

    /// Index of cavity j (1-based) in register theta (0-based).
    pub fn register_cavity(&self, theta: usize, j: usize) -> usize {
        assert!(theta < self.registers.len(), "register index out of range");
        let n = self.registers[theta].n;
        assert!(j >= 1 && j <= n, "register cavity index out of range");
        self.register_offset(theta) + j - 1
    }

    /// Index of cavity i (1-based) in channel c (0-based).
    pub fn channel_cavity(&self, c: usize, i: usize) -> usize {
        assert!(c < self.channels.len(), "channel index out of range");
        let n_cavities = self.channels[c].spec.n_cavities;
        assert!(i >= 1 && i <= n_cavities, "channel cavity index out of range");
        self.channel_offset(c) + i - 1
    }

    /// Index of the atom level of channel c (0-based).
    pub fn atom(&self, c: usize) -> usize {
        assert!(c < self.channels.len(), "channel index out of range");
        let cavities: usize = self.registers.iter().map(|r| r.n).sum::<usize>()
            + self.channels.iter().map(|ch| ch.spec.n_cavities).sum::<usize>();
        cavities + c
    }

    /// All cavity indices of register theta, in order.
    pub fn register_indices(&self, theta: usize) -> Vec<usize> {
        assert!(theta < self.registers.len(), "register index out of range");
        let base = self.register_offset(theta);
        (base..base + self.registers[theta].n).collect()
    }

    /// Number of channels attached to register theta.
    pub fn degree(&self, theta: usize) -> usize {
        self.channels
            .iter()
            .filter(|c| c.endpoints.0 == theta || c.endpoints.1 == theta)
            .count()
    }
}

/// One constant-switch-state stretch of a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct ScheduleInterval<T: Scalar> {
    pub duration: T,
    /// Switch state per channel: true means the atom bond is on and the
    /// channel is closed to transport.
    pub atom_coupled: Vec<bool>,
}

/// Ordered switching program for a network.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Schedule<T: Scalar> {
    pub intervals: Vec<ScheduleInterval<T>>,
}

impl<T: Scalar> Schedule<T> {
    pub fn validate(&self, n_channels: usize) -> Result<()> {
        for (i, interval) in self.intervals.iter().enumerate() {
            if interval.duration <= T::zero() {
                return Err(Error::BadSchedule(format!(
                    "interval {i} duration must be positive"
                )));
            }
            if interval.atom_coupled.len() != n_channels {
                return Err(Error::BadSchedule(format!(
                    "interval {i} defines {} switch states for {n_channels} channels",
                    interval.atom_coupled.len()
                )));
            }
        }
        Ok(())
    }

    pub fn total_duration(&self) -> T {
        self.intervals
            .iter()
            .fold(T::zero(), |acc, interval| acc + interval.duration)
    }
}

/// Average transfer fidelity from the source register to every register,
/// sampled along a schedule.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityTrace<T: Scalar> {
    times: Vec<T>,
    /// Row per sample time, column per register.
    fidelities: DMatrix<T>,
}

impl<T: Scalar> FidelityTrace<T> {
    pub fn times(&self) -> &[T] {
        &self.times
    }

    pub fn n_samples(&self) -> usize {
        self.times.len()
    }

    pub fn n_registers(&self) -> usize {
        self.fidelities.ncols()
    }

    /// F_theta at one sample.
    pub fn value(&self, sample: usize, theta: usize) -> T {
        self.fidelities[(sample, theta)]
    }

    pub fn fidelities(&self) -> &DMatrix<T> {
        &self.fidelities
    }

    /// The full time series for one register.
    pub fn register_curve(&self, theta: usize) -> Vec<T> {
        self.fidelities.column(theta).iter().copied().collect()
    }
}

/// Assembles the network Hamiltonian for one switch-state assignment.
pub fn build_network_hamiltonian<T: Scalar>(
    topology: &NetworkTopology<T>,
    atom_states: &[bool],
) -> Result<DMatrix<T>> {
    topology.validate()?;
    if atom_states.len() != topology.channels.len() {
        return Err(Error::InvalidParameter(format!(
            "{} switch states supplied for {} channels",
            atom_states.len(),
            topology.channels.len()
        )));
    }
    let dim = topology.dim();
    let mut h = DMatrix::zeros(dim, dim);
    let mut bond = |a: usize, b: usize, v: T| {
        h[(a, b)] = v;
        h[(b, a)] = v;
    };
    for (theta, register) in topology.registers.iter().enumerate() {
        let g = register_couplings(register.n, register.g0)?;
        for j in 1..register.n {
            bond(
                topology.register_cavity(theta, j),
                topology.register_cavity(theta, j + 1),
                g[j - 1],
            );
        }
    }
    for (c, channel) in topology.channels.iter().enumerate() {
        let spec = &channel.spec;
        for i in 1..spec.n_cavities {
            bond(
                topology.channel_cavity(c, i),
                topology.channel_cavity(c, i + 1),
                spec.g_c,
            );
        }
        let (a, b) = channel.endpoints;
        bond(
            topology.register_cavity(a, topology.registers[a].n),
            topology.channel_cavity(c, 1),
            channel.g_i,
        );
        bond(
            topology.register_cavity(b, topology.registers[b].n),
            topology.channel_cavity(c, spec.n_cavities),
            channel.g_i,
        );
        if atom_states[c] && spec.j_i > T::zero() {
            bond(topology.channel_cavity(c, spec.m), topology.atom(c), spec.j_i);
        }
    }
    Ok(h)
}

/// Runs a switching schedule and samples every register's average fidelity.
///
/// The trace is computed from propagator blocks (source cavities to each
/// register's cavities), so it does not depend on the concrete input state;
/// `alpha` is validated against the source register as an interface check.
/// All registers must share one cavity count, otherwise the square
/// amplitude blocks behind the fidelity formula do not exist.
pub fn simulate_schedule<T: Scalar>(
    topology: &NetworkTopology<T>,
    schedule: &Schedule<T>,
    source: usize,
    alpha: &DVector<Complex<T>>,
    sample_times: &[T],
) -> Result<FidelityTrace<T>> {
    topology.validate()?;
    schedule.validate(topology.channels.len())?;
    let r = topology.registers.len();
    if source >= r {
        return Err(Error::InvalidParameter(format!(
            "source register {source} out of range for {r} registers"
        )));
    }
    let n = topology.registers[source].n;
    if let Some(odd) = topology.registers.iter().find(|reg| reg.n != n) {
        return Err(Error::BadTopology(format!(
            "fidelity traces need one common register size, got {} and {n}",
            odd.n
        )));
    }
    if alpha.len() != n {
        return Err(Error::InvalidParameter(format!(
            "input state has {} amplitudes for an n={n} register",
            alpha.len()
        )));
    }
    let norm_dev = (alpha.norm() - T::one()).abs();
    if norm_dev > lit(1e-8) {
        return Err(Error::NotNormalized(norm_dev.to_f64().unwrap_or(f64::NAN)));
    }

    if schedule.intervals.is_empty() {
        let fidelities = DMatrix::from_fn(1, r, |_, theta| {
            if theta == source {
                T::one()
            } else {
                T::zero()
            }
        });
        return Ok(FidelityTrace { times: vec![T::zero()], fidelities });
    }

    // One eigendecomposition per distinct switch pattern; schedules reuse
    // patterns heavily (the router alternates two of them).
    let mut cache: HashMap<Vec<bool>, Eigensystem<T>> = HashMap::new();
    for interval in &schedule.intervals {
        if !cache.contains_key(&interval.atom_coupled) {
            let h = build_network_hamiltonian(topology, &interval.atom_coupled)?;
            cache.insert(interval.atom_coupled.clone(), spectral_decompose(&h)?);
        }
    }
    let segments: Vec<(&Eigensystem<T>, T)> = schedule
        .intervals
        .iter()
        .map(|interval| (&cache[&interval.atom_coupled], interval.duration))
        .collect();

    let dim = topology.dim();
    let source_indices = topology.register_indices(source);
    let mut columns = DMatrix::from_element(dim, n, Complex::new(T::zero(), T::zero()));
    for (j, &site) in source_indices.iter().enumerate() {
        columns[(site, j)] = Complex::new(T::one(), T::zero());
    }
    let evolved = piecewise_columns(&segments, &columns, sample_times)?;

    let mut fidelities = DMatrix::zeros(sample_times.len(), r);
    for (row, snapshot) in evolved.iter().enumerate() {
        for theta in 0..r {
            let indices = topology.register_indices(theta);
            let block = DMatrix::from_fn(n, n, |a, b| snapshot[(indices[a], b)]);
            fidelities[(row, theta)] = haar_average_fidelity(&block)?;
        }
    }
    Ok(FidelityTrace { times: sample_times.to_vec(), fidelities })
}

/// Uniform sample grid over [0, t_end], endpoints included.
pub fn uniform_grid<T: Scalar>(t_end: T, points: usize) -> Vec<T> {
    match points {
        0 => Vec::new(),
        1 => vec![T::zero()],
        _ => {
            let last: T = idx(points - 1);
            (0..points).map(|i| t_end * idx::<T>(i) / last).collect()
        }
    }
}

/// Default five-register router demonstration.
///
/// Five n=2 registers, eight N=7 channels with atoms at m=3, g_I/g_c=1e-4,
/// J_I/g_c=0.05. The path R1-R2-R3-R4-R5 runs over channels C1, C5, C6,
/// C7; C2, C3, C4, C8 are placed so every register touches at least three
/// channels. The schedule holds all switches closed for one transfer time,
/// opens the path channels one at a time, then closes everything again.
pub fn router_scenario<T: Scalar>() -> (NetworkTopology<T>, Schedule<T>) {
    let g_i: T = lit(1e-4);
    let j_i: T = lit(0.05);
    let g0 = resonant_g0(g_i, 2, 7).expect("fixed parameters are valid");
    let register = RegisterSpec::new(2, g0).expect("fixed parameters are valid");
    let spec = ChannelSpec::new(7, T::one(), 3, j_i, true).expect("fixed parameters are valid");
    let wiring: [(&str, (usize, usize)); 8] = [
        ("C1", (0, 1)),
        ("C2", (0, 2)),
        ("C3", (0, 4)),
        ("C4", (1, 3)),
        ("C5", (1, 2)),
        ("C6", (2, 3)),
        ("C7", (3, 4)),
        ("C8", (2, 4)),
    ];
    let channels = wiring
        .iter()
        .map(|(label, endpoints)| NetworkChannel {
            label: (*label).to_string(),
            spec,
            endpoints: *endpoints,
            g_i,
        })
        .collect();
    let topology = NetworkTopology { registers: vec![register; 5], channels };

    let tau = T::pi() / g0;
    let open_per_interval: [Option<usize>; 6] = [None, Some(0), Some(4), Some(5), Some(6), None];
    let intervals = open_per_interval
        .iter()
        .map(|open| {
            let mut atom_coupled = vec![true; 8];
            if let Some(c) = open {
                atom_coupled[*c] = false;
            }
            ScheduleInterval { duration: tau, atom_coupled }
        })
        .collect();
    (topology, Schedule { intervals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{piecewise_evolve, transition_amplitudes, StateVector};
    use crate::metrics::{average_fidelity, Side};
    use crate::model::{build_full_hamiltonian, SystemConfig};
    use approx::assert_abs_diff_eq;

    fn two_register_topology(g_i: f64, j_i: f64) -> (NetworkTopology<f64>, SystemConfig<f64>) {
        let config = SystemConfig::resonant(2, 7, 3, g_i, j_i, j_i > 0.0).unwrap();
        let topology = NetworkTopology {
            registers: vec![config.left, config.right],
            channels: vec![NetworkChannel {
                label: "C1".into(),
                spec: config.channel,
                endpoints: (0, 1),
                g_i,
            }],
        };
        (topology, config)
    }

    fn uniform_alpha(n: usize) -> DVector<Complex<f64>> {
        let w = (1.0 / n as f64).sqrt();
        DVector::from_element(n, Complex::new(w, 0.0))
    }

    #[test]
    fn reduces_to_the_two_register_hamiltonian() {
        let (topology, config) = two_register_topology(1e-3, 0.05);
        let h_net = build_network_hamiltonian(&topology, &[true]).unwrap();
        let h_full = build_full_hamiltonian(&config).unwrap();
        let layout = config.layout();
        let dim = layout.total_dim();
        // Basis permutation between the two layouts.
        let mut perm = vec![0usize; dim];
        for j in 1..=2 {
            perm[layout.left(j)] = topology.register_cavity(0, j);
            perm[layout.right(j)] = topology.register_cavity(1, j);
        }
        for i in 1..=7 {
            perm[layout.channel(i)] = topology.channel_cavity(0, i);
        }
        perm[layout.atom()] = topology.atom(0);
        for a in 0..dim {
            for b in 0..dim {
                assert_eq!(h_net[(perm[a], perm[b])], h_full[(a, b)]);
            }
        }
    }

    #[test]
    fn reduction_reproduces_transfer_fidelity() {
        let (topology, config) = two_register_topology(1e-3, 0.0);
        let tau = config.transfer_time();
        let schedule = Schedule {
            intervals: vec![ScheduleInterval { duration: tau, atom_coupled: vec![false] }],
        };
        let trace =
            simulate_schedule(&topology, &schedule, 0, &uniform_alpha(2), &[tau]).unwrap();

        let h = build_full_hamiltonian(&config).unwrap();
        let es = spectral_decompose(&h).unwrap();
        let layout = config.layout();
        let f = transition_amplitudes(&es, &layout.left_indices(), &layout.right_indices(), tau)
            .unwrap();
        let direct = average_fidelity(&f, Side::Right).unwrap();
        assert_abs_diff_eq!(trace.value(0, 1), direct.f, epsilon = 1e-12);
        assert!(trace.value(0, 1) > 0.99);
    }

    #[test]
    fn empty_schedule_samples_the_initial_state() {
        let (topology, _) = two_register_topology(1e-3, 0.05);
        let trace = simulate_schedule(
            &topology,
            &Schedule::default(),
            0,
            &uniform_alpha(2),
            &[],
        )
        .unwrap();
        assert_eq!(trace.times(), &[0.0]);
        assert_eq!(trace.value(0, 0), 1.0);
        assert_eq!(trace.value(0, 1), 0.0);
    }

    #[test]
    fn closed_switches_store_the_excitation() {
        let (topology, config) = two_register_topology(1e-4, 0.05);
        let tau = config.transfer_time();
        let schedule = Schedule {
            intervals: vec![ScheduleInterval {
                duration: 2.0 * tau,
                atom_coupled: vec![true],
            }],
        };
        let samples = uniform_grid(2.0 * tau, 41);
        let trace =
            simulate_schedule(&topology, &schedule, 0, &uniform_alpha(2), &samples).unwrap();

        let floor = 1.0 - 10.0 * (1e-4_f64 / 0.05).powi(2);
        // Revivals at multiples of tau; in between the register's own bonds
        // rotate the stored state, so F_1 is NOT near 1 at tau/2.
        for &k in &[0usize, 20, 40] {
            assert!(trace.value(k, 0) >= floor, "revival at sample {k}: {}", trace.value(k, 0));
        }
        let mid = trace.value(10, 0);
        assert_abs_diff_eq!(mid, 1.0 / 3.0, epsilon = 1e-3);
        // The far register stays empty the whole time.
        for s in 0..trace.n_samples() {
            assert!(trace.value(s, 1) <= 10.0 * (1e-4_f64 / 0.05).powi(2));
        }
    }

    #[test]
    fn closed_channel_population_stays_bounded() {
        let (topology, config) = two_register_topology(1e-4, 0.05);
        let tau = config.transfer_time();
        let h = build_network_hamiltonian(&topology, &[true]).unwrap();
        let es = spectral_decompose(&h).unwrap();
        let psi0 = StateVector::basis_state(topology.dim(), topology.register_cavity(0, 1));
        let samples = uniform_grid(tau, 25);
        let states = piecewise_evolve(&[(&es, tau)], &psi0, &samples).unwrap();
        let bound = 10.0 * (1e-4_f64 / 0.05).powi(2);
        for state in &states {
            assert_abs_diff_eq!(state.norm(), 1.0, epsilon = 1e-9);
            let channel_pop: f64 = (1..=7)
                .map(|i| state.amplitudes[topology.channel_cavity(0, i)].norm_sqr())
                .sum();
            assert!(channel_pop <= bound, "channel population {channel_pop:e}");
        }
    }

    #[test]
    fn router_scenario_shape() {
        let (topology, schedule) = router_scenario::<f64>();
        topology.validate().unwrap();
        schedule.validate(topology.n_channels()).unwrap();
        assert_eq!(topology.n_registers(), 5);
        assert_eq!(topology.n_channels(), 8);
        assert_eq!(topology.dim(), 74);
        for theta in 0..5 {
            assert!(topology.degree(theta) >= 3, "register {theta} degree");
        }
        assert_eq!(schedule.intervals.len(), 6);
        let tau = std::f64::consts::PI / topology.registers[0].g0;
        assert_abs_diff_eq!(schedule.total_duration(), 6.0 * tau, epsilon = 1e-6);
        // First and last intervals keep every switch closed.
        assert!(schedule.intervals[0].atom_coupled.iter().all(|&b| b));
        assert!(schedule.intervals[5].atom_coupled.iter().all(|&b| b));
        // The middle intervals open exactly one path channel each.
        for (k, open) in [(1usize, 0usize), (2, 4), (3, 5), (4, 6)] {
            let states = &schedule.intervals[k].atom_coupled;
            assert_eq!(states.iter().filter(|&&b| !b).count(), 1);
            assert!(!states[open]);
        }
    }

    #[test]
    fn topology_validation_rejects_bad_wiring() {
        let (mut topology, _) = two_register_topology(1e-3, 0.05);
        topology.channels[0].endpoints = (0, 0);
        assert!(matches!(topology.validate(), Err(Error::BadTopology(_))));
        topology.channels[0].endpoints = (0, 7);
        assert!(matches!(topology.validate(), Err(Error::BadTopology(_))));

        let (mut topology, config) = two_register_topology(1e-3, 0.05);
        topology.registers.push(config.left);
        assert!(matches!(topology.validate(), Err(Error::BadTopology(_))));

        let (mut topology, _) = two_register_topology(1e-3, 0.05);
        let mut duplicate = topology.channels[0].clone();
        duplicate.endpoints = (1, 0);
        topology.channels.push(duplicate);
        assert!(matches!(topology.validate(), Err(Error::BadTopology(_))));
    }

    #[test]
    fn schedule_and_input_validation() {
        let (topology, config) = two_register_topology(1e-3, 0.05);
        let tau = config.transfer_time();
        let bad_count = Schedule {
            intervals: vec![ScheduleInterval { duration: tau, atom_coupled: vec![true, true] }],
        };
        assert!(matches!(
            simulate_schedule(&topology, &bad_count, 0, &uniform_alpha(2), &[0.0]),
            Err(Error::BadSchedule(_))
        ));
        let bad_duration = Schedule {
            intervals: vec![ScheduleInterval { duration: 0.0, atom_coupled: vec![true] }],
        };
        assert!(matches!(
            simulate_schedule(&topology, &bad_duration, 0, &uniform_alpha(2), &[0.0]),
            Err(Error::BadSchedule(_))
        ));
        let ok = Schedule {
            intervals: vec![ScheduleInterval { duration: tau, atom_coupled: vec![true] }],
        };
        assert!(matches!(
            simulate_schedule(&topology, &ok, 2, &uniform_alpha(2), &[0.0]),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            simulate_schedule(&topology, &ok, 0, &uniform_alpha(3), &[0.0]),
            Err(Error::InvalidParameter(_))
        ));
        let mut alpha = uniform_alpha(2);
        alpha[0] *= 2.0;
        assert!(matches!(
            simulate_schedule(&topology, &ok, 0, &alpha, &[0.0]),
            Err(Error::NotNormalized(_))
        ));

        let atom_mismatch = build_network_hamiltonian(&topology, &[true, false]);
        assert!(matches!(atom_mismatch, Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn uniform_grid_endpoints() {
        let grid = uniform_grid(3.0, 4);
        assert_eq!(grid, vec![0.0, 1.0, 2.0, 3.0]);
        assert_eq!(uniform_grid(5.0, 1), vec![0.0]);
        assert!(uniform_grid::<f64>(5.0, 0).is_empty());
    }

    #[test]
    fn trace_values_are_physical() {
        let (topology, config) = two_register_topology(1e-3, 0.05);
        let tau = config.transfer_time();
        let schedule = Schedule {
            intervals: vec![
                ScheduleInterval { duration: tau, atom_coupled: vec![true] },
                ScheduleInterval { duration: tau, atom_coupled: vec![false] },
            ],
        };
        let samples = uniform_grid(2.0 * tau, 31);
        let trace =
            simulate_schedule(&topology, &schedule, 0, &uniform_alpha(2), &samples).unwrap();
        assert_eq!(trace.n_samples(), 31);
        assert_eq!(trace.n_registers(), 2);
        for s in 0..trace.n_samples() {
            for theta in 0..2 {
                let f = trace.value(s, theta);
                assert!((-1e-10..=1.0 + 1e-10).contains(&f), "F[{s},{theta}] = {f}");
            }
        }
        // The opened second interval transfers the excitation.
        assert!(trace.value(30, 1) > 0.99);
        let curve = trace.register_curve(1);
        assert_eq!(curve.len(), 31);
        assert_abs_diff_eq!(curve[30], trace.value(30, 1), epsilon = 0.0);
    }
}
