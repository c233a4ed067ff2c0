//! Dense statevector simulation of standard and warm-start QAOA circuits.
//!
//! Amplitude index bit `i` is the computational-basis value of qubit `i`
//! (vertex `i`); bit value 0 means `Z_i = +1`. Memory use is
//! `16 * 2^n` bytes for the amplitudes plus `2 * 2^n` bytes for the cut
//! table, i.e. about 4.5 GiB at the 28-qubit cap.

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;
use rand::distr::{weighted::WeightedIndex, Distribution};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{cut_value_bits, Graph};
use crate::params::QaoaParams;

pub const MAX_QUBITS: usize = 28;

/// Amplitudes per chunk for deterministic parallel reductions.
const CHUNK: usize = 1 << 14;
/// States smaller than this are processed on the calling thread.
const PAR_THRESHOLD: usize = 1 << 16;

/// Which mixer the circuit uses.
///
/// `Rotated` carries one Bloch-circle angle per qubit; the mixer term on qubit
/// `i` is `sin(θ_i) X_i + cos(θ_i) Z_i`. `Standard` is `Rotated` with every
/// angle `π/2`.
#[derive(Debug, Clone, PartialEq)]
pub enum MixerSpec {
    Standard,
    Rotated(Vec<f64>),
}

impl MixerSpec {
    /// Builds a rotated mixer, wrapping every angle into `[0, 2π)`.
    pub fn rotated(angles: impl IntoIterator<Item = f64>) -> Self {
        Self::Rotated(angles.into_iter().map(wrap_angle).collect())
    }

    /// Angle of qubit `i`.
    pub fn angle(&self, i: usize) -> f64 {
        match self {
            Self::Standard => FRAC_PI_2,
            Self::Rotated(a) => a[i],
        }
    }

    pub fn check_len(&self, n: usize) -> Result<()> {
        match self {
            Self::Rotated(a) if a.len() != n => Err(Error::DimensionMismatch {
                expected: n,
                got: a.len(),
            }),
            _ => Ok(()),
        }
    }

    /// Restricts to the listed qubits, in order.
    pub fn restrict(&self, qubits: &[usize]) -> Self {
        match self {
            Self::Standard => Self::Standard,
            Self::Rotated(a) => Self::Rotated(qubits.iter().map(|&q| a[q]).collect()),
        }
    }

    /// Single-qubit state `cos(θ/2)|0⟩ + sin(θ/2)|1⟩` for qubit `i`.
    pub fn qubit_state(&self, i: usize) -> [f64; 2] {
        let t = self.angle(i);
        [(t / 2.0).cos(), (t / 2.0).sin()]
    }

    /// Matrix of `exp(-iβ B_i)` in the computational basis, row-major.
    pub fn rotation(&self, i: usize, beta: f64) -> [[Complex64; 2]; 2] {
        mixer_rotation(self.angle(i), beta)
    }
}

pub fn wrap_angle(t: f64) -> f64 {
    let w = t.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `exp(-iβ (sinθ X + cosθ Z)) = cosβ I - i sinβ (sinθ X + cosθ Z)`.
pub fn mixer_rotation(theta: f64, beta: f64) -> [[Complex64; 2]; 2] {
    let (sb, cb) = beta.sin_cos();
    let (st, ct) = theta.sin_cos();
    let off = Complex64::new(0.0, -sb * st);
    [
        [Complex64::new(cb, -sb * ct), off],
        [off, Complex64::new(cb, sb * ct)],
    ]
}

/// A normalized `n`-qubit state.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// Computational basis state `|bits⟩`.
    pub fn basis(qubits: usize, bits: u64) -> Result<Self> {
        check_qubits(qubits)?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << qubits];
        amplitudes[bits as usize] = Complex64::new(1.0, 0.0);
        Ok(Self { qubits, amplitudes })
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(Error::InvalidArgument(format!(
                "amplitude count {len} is not a power of two"
            )));
        }
        let qubits = len.trailing_zeros() as usize;
        check_qubits(qubits)?;
        Ok(Self { qubits, amplitudes })
    }

    pub fn norm_sqr(&self) -> f64 {
        chunked_sum(&self.amplitudes, |_, a| a.norm_sqr())
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if self.qubits != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.qubits,
            });
        }
        Ok(())
    }
}

fn check_qubits(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge {
            what: "qubit count",
            size: n,
            limit: MAX_QUBITS,
        });
    }
    Ok(())
}

/// Sums `f(index, amp)` over fixed-size chunks, then over chunk totals in
/// order. The result is independent of the thread count.
fn chunked_sum(amps: &[Complex64], f: impl Fn(usize, &Complex64) -> f64 + Sync) -> f64 {
    let partial = |(c, chunk): (usize, &[Complex64])| -> f64 {
        chunk
            .iter()
            .enumerate()
            .map(|(k, a)| f(c * CHUNK + k, a))
            .sum()
    };
    let totals: Vec<f64> = if amps.len() >= PAR_THRESHOLD {
        amps.par_chunks(CHUNK).enumerate().map(partial).collect()
    } else {
        amps.chunks(CHUNK).enumerate().map(partial).collect()
    };
    totals.iter().sum()
}

/// Product state `⊗_i (cos(θ_i/2)|0⟩ + sin(θ_i/2)|1⟩)`; `|+⟩^⊗n` for the
/// standard mixer.
pub fn initial_state(g: &Graph, mixer: &MixerSpec) -> Result<StateVector> {
    let n = g.vertex_count();
    check_qubits(n)?;
    mixer.check_len(n)?;
    let singles: Vec<[f64; 2]> = (0..n).map(|i| mixer.qubit_state(i)).collect();
    let mut amplitudes = vec![Complex64::new(1.0, 0.0); 1];
    amplitudes.reserve_exact((1 << n) - 1);
    for s in &singles {
        let len = amplitudes.len();
        amplitudes.extend_from_within(..);
        for a in &mut amplitudes[..len] {
            *a *= s[0];
        }
        for a in &mut amplitudes[len..] {
            *a *= s[1];
        }
    }
    Ok(StateVector {
        qubits: n,
        amplitudes,
    })
}

/// `C_MC(z)` for every basis string `z`.
pub fn cut_table(g: &Graph) -> Result<Vec<u16>> {
    let n = g.vertex_count();
    check_qubits(n)?;
    let edges = g.edges();
    let f = |z: usize| -> u16 {
        edges
            .iter()
            .filter(|&&(a, b)| ((z >> a) ^ (z >> b)) & 1 == 1)
            .count() as u16
    };
    Ok(if n >= 16 {
        (0..1usize << n).into_par_iter().map(f).collect()
    } else {
        (0..1usize << n).map(f).collect()
    })
}

fn apply_phase_table(state: &mut StateVector, table: &[u16], gamma: f64) {
    let max = table.iter().copied().max().unwrap_or(0) as usize;
    let phases: Vec<Complex64> = (0..=max)
        .map(|c| Complex64::from_polar(1.0, -gamma * c as f64))
        .collect();
    let apply = |(a, &c): (&mut Complex64, &u16)| *a *= phases[c as usize];
    if state.amplitudes.len() >= PAR_THRESHOLD {
        state.amplitudes.par_iter_mut().zip(table).for_each(apply);
    } else {
        state.amplitudes.iter_mut().zip(table).for_each(apply);
    }
}

/// Multiplies each amplitude by `exp(-iγ C_MC(z))`.
pub fn apply_cost_unitary(state: &mut StateVector, g: &Graph, gamma: f64) -> Result<()> {
    state.check_dim(g.vertex_count())?;
    let table = cut_table(g)?;
    apply_phase_table(state, &table, gamma);
    Ok(())
}

fn apply_single_qubit(amps: &mut [Complex64], q: usize, m: &[[Complex64; 2]; 2]) {
    let stride = 1usize << q;
    let pair = |(lo, hi): (&mut Complex64, &mut Complex64)| {
        let (a, b) = (*lo, *hi);
        *lo = m[0][0] * a + m[0][1] * b;
        *hi = m[1][0] * a + m[1][1] * b;
    };
    let big = amps.len() >= PAR_THRESHOLD;
    if big && stride >= CHUNK {
        for block in amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.par_iter_mut().zip(hi.par_iter_mut()).for_each(pair);
        }
    } else if big {
        amps.par_chunks_mut(2 * stride).for_each(|block| {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().zip(hi.iter_mut()).for_each(pair);
        });
    } else {
        for block in amps.chunks_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().zip(hi.iter_mut()).for_each(pair);
        }
    }
}

/// Applies `exp(-iβ B_q)` to every qubit.
pub fn apply_mixer_unitary(state: &mut StateVector, mixer: &MixerSpec, beta: f64) -> Result<()> {
    mixer.check_len(state.qubits)?;
    for q in 0..state.qubits {
        let m = mixer.rotation(q, beta);
        apply_single_qubit(&mut state.amplitudes, q, &m);
    }
    Ok(())
}

/// Runs `p` alternating cost and mixer layers on the mixer's initial state.
pub fn run_qaoa(g: &Graph, mixer: &MixerSpec, params: &QaoaParams) -> Result<StateVector> {
    let mut state = initial_state(g, mixer)?;
    if params.depth() == 0 {
        return Ok(state);
    }
    let table = cut_table(g)?;
    for (&gamma, &beta) in params.gammas().iter().zip(params.betas()) {
        apply_phase_table(&mut state, &table, gamma);
        apply_mixer_unitary(&mut state, mixer, beta)?;
    }
    Ok(state)
}

/// `Σ_z |amp(z)|² C_MC(z)`.
pub fn expected_cut(state: &StateVector, g: &Graph) -> Result<f64> {
    state.check_dim(g.vertex_count())?;
    let edges = g.edges();
    Ok(chunked_sum(&state.amplitudes, |z, a| {
        let c = edges
            .iter()
            .filter(|&&(u, v)| ((z >> u) ^ (z >> v)) & 1 == 1)
            .count();
        a.norm_sqr() * c as f64
    }))
}

/// `⟨Z_a Z_b⟩`.
pub fn zz_expectation(state: &StateVector, a: usize, b: usize) -> Result<f64> {
    if a >= state.qubits || b >= state.qubits {
        return Err(Error::InvalidArgument(format!(
            "qubit index out of range for {} qubits",
            state.qubits
        )));
    }
    Ok(chunked_sum(&state.amplitudes, |z, amp| {
        if ((z >> a) ^ (z >> b)) & 1 == 1 {
            -amp.norm_sqr()
        } else {
            amp.norm_sqr()
        }
    }))
}

/// Probability of cutting exactly `best_value` edges.
pub fn best_cut_probability(state: &StateVector, best_value: usize, g: &Graph) -> Result<f64> {
    state.check_dim(g.vertex_count())?;
    Ok(chunked_sum(&state.amplitudes, |z, a| {
        if cut_value_bits(g, z as u64) == best_value {
            a.norm_sqr()
        } else {
            0.0
        }
    }))
}

/// Draws `shots` basis strings from the Born distribution.
pub fn sample_strings(state: &StateVector, shots: usize, seed: u64) -> Result<Vec<u64>> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be at least 1".into()));
    }
    let dist = WeightedIndex::new(state.probabilities())
        .map_err(|e| Error::InvalidArgument(format!("cannot sample state: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..shots).map(|_| dist.sample(&mut rng) as u64).collect())
}
