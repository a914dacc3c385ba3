//! Multimode bosonic Fock states.
//!
//! A [`StateVector`] is a sparse map from [`Occupation`] (photon count per
//! mode) to complex amplitude. Every constructor and every operation prunes
//! amplitudes whose magnitude falls below [`PRUNE_THRESHOLD`]; that is the
//! only place amplitudes are ever dropped. A state with no surviving
//! amplitude is never stored: construction fails with [`Error::ZeroState`].
//!
//! Global phase is kept exactly as computed. Compare states with
//! [`fidelity`], not by amplitude equality.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Amplitudes with magnitude below this are removed after every operation.
pub const PRUNE_THRESHOLD: f64 = 1e-14;

/// Tolerance on `|norm|^2 - 1` for states and inputs that must be normalized.
pub const NORM_TOLERANCE: f64 = 1e-9;

/// Squared norms at or below this are treated as exactly zero.
pub const ZERO_NORM_FLOOR: f64 = 1e-300;

pub const DEFAULT_CUTOFF: u32 = 4;

/// Photon count per mode.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Occupation(Vec<u32>);

impl Occupation {
    pub fn new(counts: impl Into<Vec<u32>>) -> Self {
        Occupation(counts.into())
    }

    pub fn vacuum(modes: usize) -> Self {
        Occupation(vec![0; modes])
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, mode: usize) -> u32 {
        self.0[mode]
    }

    /// Concatenates two occupations, `self` first.
    pub fn concat(&self, other: &Occupation) -> Occupation {
        let mut counts = self.0.clone();
        counts.extend_from_slice(&other.0);
        Occupation(counts)
    }
}

impl From<Vec<u32>> for Occupation {
    fn from(counts: Vec<u32>) -> Self {
        Occupation(counts)
    }
}

impl From<&[u32]> for Occupation {
    fn from(counts: &[u32]) -> Self {
        Occupation(counts.to_vec())
    }
}

impl fmt::Display for Occupation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("|")?;
        for (i, n) in self.0.iter().enumerate() {
            if i > 0 && self.0.iter().any(|&n| n > 9) {
                f.write_str(",")?;
            }
            write!(f, "{n}")?;
        }
        f.write_str(">")
    }
}

/// Sparse pure state on `modes` modes holding at most `cutoff` photons in total.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    modes: usize,
    cutoff: u32,
    amps: BTreeMap<Occupation, Amplitude>,
}

impl StateVector {
    /// Builds a state from `(occupation, amplitude)` pairs. Repeated
    /// occupations are summed. The result need not be normalized.
    pub fn new<I, O>(modes: usize, cutoff: u32, amps: I) -> Result<Self>
    where
        I: IntoIterator<Item = (O, Amplitude)>,
        O: Into<Occupation>,
    {
        if modes == 0 {
            return Err(Error::ModeMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut map: BTreeMap<Occupation, Amplitude> = BTreeMap::new();
        for (occ, amp) in amps {
            let occ = occ.into();
            if occ.modes() != modes {
                return Err(Error::ModeMismatch {
                    expected: modes,
                    found: occ.modes(),
                });
            }
            if occ.total() > cutoff {
                return Err(Error::CutoffExceeded {
                    photons: occ.total(),
                    cutoff,
                });
            }
            if !amp.re.is_finite() || !amp.im.is_finite() {
                return Err(Error::NonFinite);
            }
            *map.entry(occ).or_default() += amp;
        }
        Self::from_map(modes, cutoff, map)
    }

    /// Prunes and wraps an already validated map.
    pub(crate) fn from_map(
        modes: usize,
        cutoff: u32,
        mut amps: BTreeMap<Occupation, Amplitude>,
    ) -> Result<Self> {
        amps.retain(|_, a| a.norm() >= PRUNE_THRESHOLD);
        if amps.is_empty() {
            return Err(Error::ZeroState);
        }
        Ok(StateVector {
            modes,
            cutoff,
            amps,
        })
    }

    /// The Fock basis state `|counts>` with amplitude 1.
    pub fn basis(cutoff: u32, counts: impl Into<Occupation>) -> Result<Self> {
        let occ = counts.into();
        Self::new(occ.modes(), cutoff, [(occ, Amplitude::new(1.0, 0.0))])
    }

    pub fn vacuum(modes: usize, cutoff: u32) -> Result<Self> {
        Self::basis(cutoff, Occupation::vacuum(modes))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    /// Amplitude of `|occ>`, zero when absent.
    pub fn amplitude(&self, occ: &Occupation) -> Amplitude {
        self.amps.get(occ).copied().unwrap_or_default()
    }

    /// Shorthand for `amplitude(&Occupation::new(counts))`.
    pub fn amp(&self, counts: &[u32]) -> Amplitude {
        self.amplitude(&Occupation::from(counts))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Occupation, &Amplitude)> {
        self.amps.iter()
    }

    /// Number of stored basis states.
    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.values().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE
    }

    /// Total photon numbers present in the support, ascending.
    pub fn photon_sectors(&self) -> Vec<u32> {
        let sectors: std::collections::BTreeSet<u32> =
            self.amps.keys().map(Occupation::total).collect();
        sectors.into_iter().collect()
    }

    /// Largest total photon number in the support.
    pub fn max_photons(&self) -> u32 {
        self.amps.keys().map(Occupation::total).max().unwrap_or(0)
    }

    /// Multiplies every amplitude by `factor`.
    pub fn scaled(&self, factor: Amplitude) -> Result<Self> {
        let amps = self
            .amps
            .iter()
            .map(|(o, a)| (o.clone(), a * factor))
            .collect();
        Self::from_map(self.modes, self.cutoff, amps)
    }

    /// Multiplies the state by the global phase `e^{i chi}`.
    pub fn with_global_phase(&self, chi: f64) -> Self {
        self.scaled(Amplitude::from_polar(1.0, chi))
            .expect("unit-modulus scaling cannot empty a stored state")
    }
}

impl fmt::Display for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (occ, amp)) in self.amps.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({:.6}{:+.6}i){}", amp.re, amp.im, occ)?;
        }
        Ok(())
    }
}

/// A single-mode superposition `alpha|0> + beta|1>`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InputState {
    alpha: Amplitude,
    beta: Amplitude,
    p: f64,
}

impl InputState {
    pub fn alpha(&self) -> Amplitude {
        self.alpha
    }

    pub fn beta(&self) -> Amplitude {
        self.beta
    }

    /// Single-photon probability `|beta|^2`.
    pub fn p(&self) -> f64 {
        self.p
    }

    /// `sqrt(1 - p)|0> + e^{i phase} sqrt(p)|1>`.
    pub fn from_probability(p: f64, phase: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::OutOfRange {
                name: "p",
                value: p,
                min: 0.0,
                max: 1.0,
            });
        }
        if !phase.is_finite() {
            return Err(Error::NonFinite);
        }
        make_input(
            Amplitude::new((1.0 - p).sqrt(), 0.0),
            Amplitude::from_polar(p.sqrt(), phase),
        )
    }
}

/// Validates `alpha|0> + beta|1>`; never rescales.
pub fn make_input(alpha: Amplitude, beta: Amplitude) -> Result<InputState> {
    if ![alpha.re, alpha.im, beta.re, beta.im]
        .iter()
        .all(|x| x.is_finite())
    {
        return Err(Error::NonFinite);
    }
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > NORM_TOLERANCE {
        return Err(Error::NotNormalized { norm_sqr });
    }
    Ok(InputState {
        alpha,
        beta,
        p: beta.norm_sqr(),
    })
}

/// One-mode state `alpha|0> + beta|1>` with the default cutoff.
pub fn input_to_state(s: &InputState) -> StateVector {
    input_to_state_with_cutoff(s, DEFAULT_CUTOFF)
}

pub fn input_to_state_with_cutoff(s: &InputState, cutoff: u32) -> StateVector {
    StateVector::new(
        1,
        cutoff.max(1),
        [
            (Occupation::new([0]), s.alpha),
            (Occupation::new([1]), s.beta),
        ],
    )
    .expect("a normalized input always has a surviving amplitude")
}

/// `a ⊗ b`, with `a`'s modes first. The result carries the larger cutoff.
pub fn tensor(a: &StateVector, b: &StateVector) -> Result<StateVector> {
    let cutoff = a.cutoff.max(b.cutoff);
    let mut amps = BTreeMap::new();
    for (oa, xa) in &a.amps {
        for (ob, xb) in &b.amps {
            let occ = oa.concat(ob);
            if occ.total() > cutoff {
                return Err(Error::CutoffExceeded {
                    photons: occ.total(),
                    cutoff,
                });
            }
            amps.insert(occ, xa * xb);
        }
    }
    StateVector::from_map(a.modes + b.modes, cutoff, amps)
}

/// `<a|b>`, conjugate-linear in `a`.
pub fn inner_product(a: &StateVector, b: &StateVector) -> Result<Amplitude> {
    if a.modes != b.modes {
        return Err(Error::ModeMismatch {
            expected: a.modes,
            found: b.modes,
        });
    }
    // Walk the smaller support.
    let (small, large, conj_small) = if a.len() <= b.len() {
        (a, b, true)
    } else {
        (b, a, false)
    };
    Ok(small
        .amps
        .iter()
        .filter_map(|(occ, x)| large.amps.get(occ).map(|y| (x, y)))
        .map(|(x, y)| {
            if conj_small {
                x.conj() * y
            } else {
                y.conj() * x
            }
        })
        .sum())
}

/// `|<a|b>|^2` for normalized states.
pub fn fidelity(a: &StateVector, b: &StateVector) -> Result<f64> {
    for s in [a, b] {
        if !s.is_normalized() {
            return Err(Error::NotNormalized {
                norm_sqr: s.norm_sqr(),
            });
        }
    }
    Ok(inner_product(a, b)?.norm_sqr())
}

/// Returns the unit-norm state and the original squared norm.
pub fn normalize(a: &StateVector) -> Result<(StateVector, f64)> {
    let norm_sqr = a.norm_sqr();
    if norm_sqr <= ZERO_NORM_FLOOR {
        return Err(Error::ZeroState);
    }
    let state = a.scaled(Amplitude::new(1.0 / norm_sqr.sqrt(), 0.0))?;
    Ok((state, norm_sqr))
}
