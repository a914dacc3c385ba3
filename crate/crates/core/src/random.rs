//! Random states and interferometers for property checks.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;

use crate::fock::{normalize, Amplitude, InputState, Occupation, StateVector};
use crate::optics::{beamsplitter, embed, BeamSplitterParams, InterferometerUnitary};

pub fn amplitude<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    Amplitude::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn beamsplitter_params<R: Rng + ?Sized>(rng: &mut R) -> BeamSplitterParams {
    BeamSplitterParams::new(rng.gen_range(0.0..=FRAC_PI_2), rng.gen_range(-PI..=PI))
        .expect("sampled inside the valid ranges")
}

/// Normalized input `alpha|0> + beta|1>` with independent random phases.
pub fn input_state<R: Rng + ?Sized>(rng: &mut R) -> InputState {
    let p: f64 = rng.gen_range(0.0..=1.0);
    crate::fock::make_input(
        Amplitude::from_polar((1.0 - p).sqrt(), rng.gen_range(-PI..PI)),
        Amplitude::from_polar(p.sqrt(), rng.gen_range(-PI..PI)),
    )
    .expect("normalized by construction")
}

/// Normalized state on `modes` modes with support on up to `max_photons`
/// total photons, drawn over a random subset of the basis.
pub fn state<R: Rng + ?Sized>(
    rng: &mut R,
    modes: usize,
    max_photons: u32,
    cutoff: u32,
) -> StateVector {
    loop {
        let terms = rng.gen_range(1..=6);
        let amps: Vec<(Occupation, Amplitude)> = (0..terms)
            .map(|_| {
                let total = rng.gen_range(0..=max_photons);
                let mut counts = vec![0u32; modes];
                for _ in 0..total {
                    counts[rng.gen_range(0..modes)] += 1;
                }
                (Occupation::new(counts), amplitude(rng))
            })
            .collect();
        if let Ok(s) = StateVector::new(modes, cutoff, amps) {
            if let Ok((n, _)) = normalize(&s) {
                return n;
            }
        }
    }
}

/// Product of random beam splitters on every mode pair, then random
/// output phases.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> InterferometerUnitary {
    let mut u = InterferometerUnitary::identity(dim);
    for _ in 0..2 {
        for a in 0..dim {
            for b in (a + 1)..dim {
                let (x, y) = if rng.gen_bool(0.5) { (a, b) } else { (b, a) };
                let bs = embed(&beamsplitter(beamsplitter_params(rng)), (x, y), dim)
                    .expect("distinct in-range modes");
                u = bs.compose(&u).expect("same dimension");
            }
        }
    }
    let mut phases = vec![Amplitude::default(); dim * dim];
    for i in 0..dim {
        phases[i * dim + i] = Amplitude::from_polar(1.0, rng.gen_range(0.0..TAU));
    }
    let phases = InterferometerUnitary::new(dim, phases).expect("diagonal phases are unitary");
    phases.compose(&u).expect("same dimension")
}

/// Dense `n x n` matrix with entries in the unit square.
pub fn matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Vec<Amplitude>> {
    (0..n)
        .map(|_| (0..n).map(|_| amplitude(rng)).collect())
        .collect()
}
