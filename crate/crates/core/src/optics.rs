//! Passive linear optics on Fock states.
//!
//! Convention, used everywhere in this crate: an interferometer matrix `U`
//! acts on creation operators column-wise,
//!
//! ```text
//! a_j^dagger  ->  sum_i U[i][j] a_i^dagger
//! ```
//!
//! so column `j` is the image of input mode `j` and `U[i][j]` is the
//! amplitude for a photon entering mode `j` to leave in mode `i`.
//!
//! A two-mode beam splitter is parameterized by a mixing angle `theta` and
//! a phase `phi`:
//!
//! ```text
//! [[ cos(theta),                e^{i phi} sin(theta) ],
//!  [ -e^{-i phi} sin(theta),    cos(theta)           ]]
//! ```
//!
//! Any 2x2 unitary equals this form up to phases on the input and output
//! ports. Output-port phases never change photon-counting probabilities and
//! only add a global phase to a heralded single-mode state, so two parameters
//! cover every distinct heralding behavior.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fock::{Amplitude, Occupation, StateVector};

/// Maximum `|U^dagger U - I|` entry accepted at construction.
pub const UNITARY_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeamSplitterParams {
    /// Mixing angle in `[0, pi/2]`.
    pub theta: f64,
    /// Phase in `[-pi, pi]`.
    pub phi: f64,
}

impl BeamSplitterParams {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=FRAC_PI_2).contains(&theta) {
            return Err(Error::OutOfRange {
                name: "theta",
                value: theta,
                min: 0.0,
                max: FRAC_PI_2,
            });
        }
        if !(-PI..=PI).contains(&phi) {
            return Err(Error::OutOfRange {
                name: "phi",
                value: phi,
                min: -PI,
                max: PI,
            });
        }
        Ok(BeamSplitterParams { theta, phi })
    }

    /// The balanced splitter `(pi/4, pi)`.
    pub fn balanced() -> Self {
        BeamSplitterParams {
            theta: std::f64::consts::FRAC_PI_4,
            phi: PI,
        }
    }

    /// `U[0][0] = cos(theta)`.
    pub fn transmission(&self) -> Amplitude {
        Amplitude::new(self.theta.cos(), 0.0)
    }

    /// `U[0][1] = e^{i phi} sin(theta)`.
    pub fn reflection(&self) -> Amplitude {
        Amplitude::from_polar(self.theta.sin(), self.phi)
    }
}

/// A unitary acting on the creation operators of `dim` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct InterferometerUnitary {
    dim: usize,
    // row-major
    entries: Vec<Amplitude>,
}

impl InterferometerUnitary {
    /// Checks `|U^dagger U - I|_max <= UNITARY_TOLERANCE`.
    pub fn new(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        let u = Self::new_unchecked(dim, entries)?;
        let deviation = u.unitarity_deviation();
        if deviation.is_nan() || deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    /// Skips the unitarity check. Shape is still validated. Meant for
    /// fault-injection tests; [`apply`] on a non-unitary matrix does not
    /// preserve the norm.
    pub fn new_unchecked(dim: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if dim == 0 || entries.len() != dim * dim {
            return Err(Error::NotSquare {
                rows: dim,
                cols: entries.len().checked_div(dim).unwrap_or(0),
            });
        }
        if entries
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite);
        }
        Ok(InterferometerUnitary { dim, entries })
    }

    pub fn from_rows(rows: &[Vec<Amplitude>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::NotSquare {
                rows: dim,
                cols: bad.len(),
            });
        }
        Self::new(dim, rows.concat())
    }

    pub fn identity(dim: usize) -> Self {
        let mut entries = vec![Amplitude::default(); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Amplitude::new(1.0, 0.0);
        }
        InterferometerUnitary { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> Amplitude {
        self.entries[row * self.dim + col]
    }

    pub fn rows(&self) -> Vec<Vec<Amplitude>> {
        self.entries.chunks(self.dim).map(<[_]>::to_vec).collect()
    }

    /// `max |(U^dagger U - I)_ij|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.dim;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in 0..n {
                let mut acc = Amplitude::default();
                for k in 0..n {
                    acc += self.get(k, i).conj() * self.get(k, j);
                }
                if i == j {
                    acc -= 1.0;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    /// Matrix product `self * rhs`: applying `rhs` first, then `self`.
    pub fn compose(&self, rhs: &InterferometerUnitary) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::ModeMismatch {
                expected: self.dim,
                found: rhs.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Amplitude::default(); n * n];
        for i in 0..n {
            for j in 0..n {
                entries[i * n + j] = (0..n).map(|k| self.get(i, k) * rhs.get(k, j)).sum();
            }
        }
        Ok(InterferometerUnitary { dim: n, entries })
    }

    /// Copy with entry `(row, col)` shifted by `delta`, bypassing validation.
    pub fn perturbed(&self, row: usize, col: usize, delta: Amplitude) -> Self {
        let mut out = self.clone();
        out.entries[row * self.dim + col] += delta;
        out
    }
}

impl fmt::Display for InterferometerUnitary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(self.dim) {
            let cells: Vec<String> = row
                .iter()
                .map(|z| format!("{:+.6}{:+.6}i", z.re, z.im))
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

/// `[[cos t, e^{i phi} sin t], [-e^{-i phi} sin t, cos t]]`.
pub fn beamsplitter(params: BeamSplitterParams) -> InterferometerUnitary {
    let t = params.transmission();
    let r = params.reflection();
    InterferometerUnitary {
        dim: 2,
        entries: vec![t, r, -r.conj(), t],
    }
}

/// Places the 2x2 `u` on modes `(target.0, target.1)` of a `total_modes`
/// identity: local mode 0 maps to `target.0`, local mode 1 to `target.1`.
pub fn embed(
    u: &InterferometerUnitary,
    target: (usize, usize),
    total_modes: usize,
) -> Result<InterferometerUnitary> {
    if u.dim != 2 {
        return Err(Error::ModeMismatch {
            expected: 2,
            found: u.dim,
        });
    }
    let (a, b) = target;
    for idx in [a, b] {
        if idx >= total_modes {
            return Err(Error::IndexOutOfRange {
                index: idx,
                modes: total_modes,
            });
        }
    }
    if a == b {
        return Err(Error::DuplicateMode(a));
    }
    let mut out = InterferometerUnitary::identity(total_modes);
    let n = total_modes;
    out.entries[a * n + a] = u.get(0, 0);
    out.entries[a * n + b] = u.get(0, 1);
    out.entries[b * n + a] = u.get(1, 0);
    out.entries[b * n + b] = u.get(1, 1);
    Ok(out)
}

/// Matrix permanent of a square matrix given as rows.
pub fn permanent(m: &[Vec<Amplitude>]) -> Result<Amplitude> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    Ok(permanent_flat(n, &m.concat()))
}

/// Permanent of the `n x n` row-major matrix `a`.
///
/// Sizes 0..=2 are written out; larger sizes use Ryser's formula
///
/// ```text
/// per(A) = (-1)^n sum_{S subset of cols} (-1)^{|S|} prod_i sum_{j in S} a_ij
/// ```
///
/// visiting subsets in Gray-code order so each step adds or removes a single
/// column from the running row sums.
pub(crate) fn permanent_flat(n: usize, a: &[Amplitude]) -> Amplitude {
    debug_assert_eq!(a.len(), n * n);
    match n {
        0 => Amplitude::new(1.0, 0.0),
        1 => a[0],
        2 => a[0] * a[3] + a[1] * a[2],
        _ => {
            let mut row_sums = vec![Amplitude::default(); n];
            let mut total = Amplitude::default();
            let mut gray: u64 = 0;
            for k in 1u64..(1u64 << n) {
                let col = k.trailing_zeros() as usize;
                let bit = 1u64 << col;
                let adding = gray & bit == 0;
                gray ^= bit;
                for (i, s) in row_sums.iter_mut().enumerate() {
                    if adding {
                        *s += a[i * n + col];
                    } else {
                        *s -= a[i * n + col];
                    }
                }
                let prod: Amplitude = row_sums.iter().product();
                if gray.count_ones() % 2 == 1 {
                    total -= prod;
                } else {
                    total += prod;
                }
            }
            if n % 2 == 1 {
                -total
            } else {
                total
            }
        }
    }
}

/// All occupations of `photons` photons in `modes` modes, lexicographically
/// descending in the first mode.
pub(crate) fn sector_occupations(modes: usize, photons: u32) -> Vec<Occupation> {
    fn rec(modes: usize, left: u32, prefix: &mut Vec<u32>, out: &mut Vec<Occupation>) {
        if prefix.len() + 1 == modes {
            prefix.push(left);
            out.push(Occupation::new(prefix.clone()));
            prefix.pop();
            return;
        }
        for n in (0..=left).rev() {
            prefix.push(n);
            rec(modes, left - n, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if modes > 0 {
        rec(modes, photons, &mut Vec::with_capacity(modes), &mut out);
    }
    out
}

fn repeated_modes(occ: &Occupation) -> Vec<usize> {
    occ.counts()
        .iter()
        .enumerate()
        .flat_map(|(mode, &n)| std::iter::repeat_n(mode, n as usize))
        .collect()
}

/// Applies `u` to `s`.
///
/// The transition amplitude between occupations `n` (input) and `m`
/// (output) in the same photon-number sector is
///
/// ```text
/// <m|U|n> = per(U[m, n]) / sqrt(prod_i n_i! prod_j m_j!)
/// ```
///
/// where `U[m, n]` repeats row `i` `m_i` times and column `j` `n_j` times.
pub fn apply(u: &InterferometerUnitary, s: &StateVector) -> Result<StateVector> {
    if u.dim != s.modes() {
        return Err(Error::ModeMismatch {
            expected: u.dim,
            found: s.modes(),
        });
    }
    let cutoff = s.cutoff();
    let factorial: Vec<f64> = std::iter::once(1.0)
        .chain((1..=cutoff).scan(1.0, |acc, k| {
            *acc *= f64::from(k);
            Some(*acc)
        }))
        .collect();
    let fact_prod = |occ: &Occupation| -> f64 {
        occ.counts()
            .iter()
            .map(|&k| factorial[k as usize])
            .product()
    };

    let mut outputs: BTreeMap<u32, Vec<(Occupation, Vec<usize>, f64)>> = BTreeMap::new();
    let mut out: BTreeMap<Occupation, Amplitude> = BTreeMap::new();
    let mut sub = Vec::new();
    for (n_in, amp) in s.iter() {
        let photons = n_in.total();
        let targets = outputs.entry(photons).or_insert_with(|| {
            sector_occupations(u.dim, photons)
                .into_iter()
                .map(|m| {
                    let rows = repeated_modes(&m);
                    let f = fact_prod(&m);
                    (m, rows, f)
                })
                .collect()
        });
        let cols = repeated_modes(n_in);
        let in_fact = fact_prod(n_in);
        let k = cols.len();
        for (m, rows, out_fact) in targets.iter() {
            sub.clear();
            for &r in rows {
                sub.extend(cols.iter().map(|&c| u.get(r, c)));
            }
            let element = permanent_flat(k, &sub) / (in_fact * out_fact).sqrt();
            *out.entry(m.clone()).or_default() += amp * element;
        }
    }
    let result = StateVector::from_map(u.dim, cutoff, out)?;
    debug_assert!(result.max_photons() <= cutoff);
    Ok(result)
}
