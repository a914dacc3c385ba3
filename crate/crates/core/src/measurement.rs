//! Photon-number-resolving detection and post-selection.
//!
//! Detected modes are traced out. The undetected modes keep their relative
//! order and are renumbered from 0: conditioning a three-mode state on
//! mode 1 leaves a two-mode state whose modes 0 and 1 were modes 0 and 2.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{Amplitude, Occupation, StateVector, ZERO_NORM_FLOOR};

/// Photon counts reported by detectors on a set of modes.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct DetectionPattern(BTreeMap<usize, u32>);

impl DetectionPattern {
    pub fn new(counts: impl IntoIterator<Item = (usize, u32)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (mode, n) in counts {
            if map.insert(mode, n).is_some() {
                return Err(Error::DuplicateMode(mode));
            }
        }
        Ok(DetectionPattern(map))
    }

    /// One detector on `mode` seeing `photons`.
    pub fn single(mode: usize, photons: u32) -> Self {
        DetectionPattern(BTreeMap::from([(mode, photons)]))
    }

    pub fn counts(&self) -> &BTreeMap<usize, u32> {
        &self.0
    }

    pub fn get(&self, mode: usize) -> Option<u32> {
        self.0.get(&mode).copied()
    }

    fn matches(&self, occ: &Occupation) -> bool {
        self.0.iter().all(|(&m, &n)| occ.get(m) == n)
    }

    fn validate(&self, modes: usize) -> Result<()> {
        match self.0.keys().find(|&&m| m >= modes) {
            Some(&index) => Err(Error::IndexOutOfRange { index, modes }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for DetectionPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(m, n)| format!("mode{m}:{n}")).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Outcome of post-selecting on a detection pattern.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionResult {
    pub probability: f64,
    /// Normalized state of the undetected modes; `None` when the outcome
    /// cannot occur.
    pub state: Option<StateVector>,
}

impl ConditionResult {
    pub fn impossible() -> Self {
        ConditionResult {
            probability: 0.0,
            state: None,
        }
    }

    pub fn is_impossible(&self) -> bool {
        self.state.is_none()
    }
}

/// Projects `s` onto `pattern` and renormalizes what is left.
///
/// Probabilities at or below `1e-300` are reported as an impossible outcome
/// with probability exactly 0.
pub fn condition(s: &StateVector, pattern: &DetectionPattern) -> Result<ConditionResult> {
    pattern.validate(s.modes())?;
    let kept: Vec<usize> = (0..s.modes())
        .filter(|m| pattern.get(*m).is_none())
        .collect();
    if kept.is_empty() {
        return Err(Error::InvalidPattern(
            "every mode is detected; no conditional state remains".into(),
        ));
    }

    let mut projected: BTreeMap<Occupation, Amplitude> = BTreeMap::new();
    let mut probability = 0.0;
    for (occ, amp) in s.iter().filter(|(occ, _)| pattern.matches(occ)) {
        probability += amp.norm_sqr();
        let rest = Occupation::new(kept.iter().map(|&m| occ.get(m)).collect::<Vec<_>>());
        *projected.entry(rest).or_default() += amp;
    }
    if probability <= ZERO_NORM_FLOOR {
        return Ok(ConditionResult::impossible());
    }
    let scale = Amplitude::new(1.0 / probability.sqrt(), 0.0);
    for amp in projected.values_mut() {
        *amp *= scale;
    }
    match StateVector::from_map(kept.len(), s.cutoff(), projected) {
        Ok(state) => Ok(ConditionResult {
            probability,
            state: Some(state),
        }),
        Err(Error::ZeroState) => Ok(ConditionResult::impossible()),
        Err(e) => Err(e),
    }
}

/// Probability of every detection pattern on `detected_modes` with support.
pub fn outcome_distribution(
    s: &StateVector,
    detected_modes: &[usize],
) -> Result<BTreeMap<DetectionPattern, f64>> {
    for &m in detected_modes {
        if m >= s.modes() {
            return Err(Error::IndexOutOfRange {
                index: m,
                modes: s.modes(),
            });
        }
    }
    let mut seen = detected_modes.to_vec();
    seen.sort_unstable();
    if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::DuplicateMode(w[0]));
    }

    let mut dist: BTreeMap<DetectionPattern, f64> = BTreeMap::new();
    for (occ, amp) in s.iter() {
        let pattern = DetectionPattern(detected_modes.iter().map(|&m| (m, occ.get(m))).collect());
        *dist.entry(pattern).or_default() += amp.norm_sqr();
    }
    Ok(dist)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{input_to_state, make_input, tensor, StateVector};
    use crate::optics::{apply, beamsplitter, BeamSplitterParams};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> Amplitude {
        Amplitude::new(re, 0.0)
    }

    fn scheme_stage_one_state() -> StateVector {
        let h = input_to_state(&make_input(c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2)).unwrap());
        let joint = tensor(&h, &h).unwrap();
        apply(&beamsplitter(BeamSplitterParams::balanced()), &joint).unwrap()
    }

    #[test]
    fn condition_basis_states() {
        let r = condition(
            &StateVector::basis(4, vec![0, 0]).unwrap(),
            &DetectionPattern::single(1, 0),
        )
        .unwrap();
        assert_eq!(r.probability, 1.0);
        assert_eq!(r.state.unwrap().amp(&[0]), c(1.0));

        let r = condition(
            &StateVector::basis(4, vec![0, 1]).unwrap(),
            &DetectionPattern::single(1, 1),
        )
        .unwrap();
        assert_eq!(r.probability, 1.0);
        assert_eq!(r.state.unwrap().amp(&[0]), c(1.0));
    }

    #[test]
    fn condition_scheme_state() {
        let r = condition(&scheme_stage_one_state(), &DetectionPattern::single(1, 0)).unwrap();
        assert!((r.probability - 0.375).abs() < 1e-12);
        let s = r.state.unwrap();
        let norm = 0.375f64.sqrt();
        assert!((s.amp(&[0]) - c(0.5 / norm)).norm() < 1e-12);
        assert!((s.amp(&[2]) - c(-(2f64.sqrt()) / 4.0 / norm)).norm() < 1e-12);
        assert_eq!(s.amp(&[1]), c(0.0));
    }

    #[test]
    fn impossible_outcome_is_data() {
        let r = condition(
            &StateVector::basis(4, vec![0, 0]).unwrap(),
            &DetectionPattern::single(0, 1),
        )
        .unwrap();
        assert!(r.is_impossible());
        assert_eq!(r.probability, 0.0);
    }

    #[test]
    fn remaining_modes_renumbered() {
        let s = StateVector::basis(4, vec![2, 0, 1]).unwrap();
        let r = condition(&s, &DetectionPattern::single(1, 0)).unwrap();
        let st = r.state.unwrap();
        assert_eq!(st.modes(), 2);
        assert_eq!(st.amp(&[2, 1]), c(1.0));
    }

    #[test]
    fn condition_errors() {
        let s = StateVector::vacuum(2, 4).unwrap();
        assert!(matches!(
            condition(&s, &DetectionPattern::single(2, 0)),
            Err(Error::IndexOutOfRange { .. })
        ));
        let all = DetectionPattern::new([(0, 0), (1, 0)]).unwrap();
        assert!(matches!(condition(&s, &all), Err(Error::InvalidPattern(_))));
        assert!(DetectionPattern::new([(0, 0), (0, 1)]).is_err());
    }

    #[test]
    fn distribution_examples() {
        let d = outcome_distribution(&StateVector::vacuum(2, 4).unwrap(), &[0, 1]).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[&DetectionPattern::new([(0, 0), (1, 0)]).unwrap()], 1.0);

        let hom = apply(
            &beamsplitter(BeamSplitterParams::balanced()),
            &StateVector::basis(4, vec![1, 1]).unwrap(),
        )
        .unwrap();
        let d = outcome_distribution(&hom, &[0, 1]).unwrap();
        assert_eq!(d.len(), 2);
        for pattern in [[(0, 2), (1, 0)], [(0, 0), (1, 2)]] {
            let p = d[&DetectionPattern::new(pattern).unwrap()];
            assert!((p - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn distribution_of_scheme_state() {
        let d = outcome_distribution(&scheme_stage_one_state(), &[1]).unwrap();
        let total: f64 = d.values().sum();
        assert!((total - 1.0).abs() < 1e-12);
        assert!((d[&DetectionPattern::single(1, 0)] - 0.375).abs() < 1e-12);
        // |1,1> coefficient is the permanent of the balanced splitter: zero.
        // Mode 1 holds one photon only through the single-photon terms:
        // |01> amplitude 0.5 * (L21 + L22) = 1/sqrt(2), probability 0.5.
        assert!((d[&DetectionPattern::single(1, 1)] - 0.5).abs() < 1e-12);
        assert!((d[&DetectionPattern::single(1, 2)] - 0.125).abs() < 1e-12);
    }

    #[test]
    fn distribution_rejects_bad_modes() {
        let s = StateVector::vacuum(2, 4).unwrap();
        assert!(outcome_distribution(&s, &[3]).is_err());
        assert!(outcome_distribution(&s, &[1, 1]).is_err());
    }
}
