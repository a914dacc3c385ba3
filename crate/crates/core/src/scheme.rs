//! Heralded single-photon generation from two `alpha|0> + beta|1>` inputs.
//!
//! Circuit layout on three modes:
//!
//! ```text
//!   mode 0: vacuum        -----------------[ stage-two splitter ]-- output
//!   mode 1: input 1  --[ stage-one splitter ]--[                 ]-- detect 1 photon
//!   mode 2: input 2  --[                    ]------------------------ detect 0 photons
//! ```
//!
//! The stage-one splitter acts on modes (1, 2) with local mode 0 = input 1.
//! Seeing no photon in mode 2 leaves mode 1 in `c0|0> + c1|1> + c2|2>` with
//!
//! ```text
//!   c0 = alpha1 alpha2
//!   c1 = alpha2 beta1 U11 + alpha1 beta2 U12
//!   c2 = sqrt(2) beta1 beta2 U11 U12
//! ```
//!
//! and the stage-one angle is chosen so that `c1 = 0`. Mixing the remaining
//! `c0|0> + c2|2>` with the vacuum of mode 0 (stage-two splitter on modes
//! (1, 0), local mode 0 = the stage-one arm) and seeing exactly one photon
//! in mode 1 leaves exactly one photon in mode 0.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use crate::error::{DegeneracyReason, Error, Result};
use crate::fock::{
    fidelity, input_to_state_with_cutoff, normalize, tensor, Amplitude, InputState, StateVector,
    DEFAULT_CUTOFF,
};
use crate::measurement::{condition, DetectionPattern};
use crate::optics::{apply, beamsplitter, embed, BeamSplitterParams};
use crate::optimize::golden_section_max;

/// `|c1|` above this means the stage-one state still has a single-photon part.
pub const PURITY_TOLERANCE: f64 = 1e-10;

/// Bracket width at which the stage-two search stops.
pub const STAGE_TWO_SEARCH_TOL: f64 = 1e-10;

// Products below this magnitude count as exactly zero when classifying inputs.
const VANISHING: f64 = 1e-150;

/// Unnormalized amplitudes of `|0>, |1>, |2>` after the stage-one herald.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageOneCoefficients {
    pub c0: Amplitude,
    pub c1: Amplitude,
    pub c2: Amplitude,
}

impl StageOneCoefficients {
    /// Probability of the stage-one herald: `|c0|^2 + |c1|^2 + |c2|^2`.
    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    /// `|c2|^2 / norm`, zero when every coefficient vanishes.
    pub fn two_photon_weight(&self) -> f64 {
        let norm = self.norm_sqr();
        if norm <= crate::fock::ZERO_NORM_FLOOR {
            0.0
        } else {
            self.c2.norm_sqr() / norm
        }
    }

    fn check_purity(&self) -> Result<()> {
        let magnitude = self.c1.norm();
        if magnitude > PURITY_TOLERANCE {
            Err(Error::PurityViolated { magnitude })
        } else {
            Ok(())
        }
    }
}

/// Closed-form coefficients for the stage-one herald.
pub fn stage_one_coefficients(
    in1: &InputState,
    in2: &InputState,
    bs: BeamSplitterParams,
) -> StageOneCoefficients {
    let (a1, b1, a2, b2) = (in1.alpha(), in1.beta(), in2.alpha(), in2.beta());
    let u11 = bs.transmission();
    let u12 = bs.reflection();
    StageOneCoefficients {
        c0: a1 * a2,
        c1: a2 * b1 * u11 + a1 * b2 * u12,
        c2: SQRT_2 * b1 * b2 * u11 * u12,
    }
}

/// Classifies inputs the generic scheme cannot treat normally.
pub fn classify(in1: &InputState, in2: &InputState) -> Option<DegeneracyReason> {
    let (a1, b1, a2, b2) = (in1.alpha(), in1.beta(), in2.alpha(), in2.beta());
    if (a2 * b1).norm() < VANISHING && (a1 * b2).norm() < VANISHING {
        Some(DegeneracyReason::BothVacuousTerms)
    } else if (b1 * b2).norm() < VANISHING {
        Some(DegeneracyReason::NoPhotonPair)
    } else if (a1 * a2).norm() < VANISHING {
        Some(DegeneracyReason::NoVacuumComponent)
    } else {
        None
    }
}

/// Stage-one splitter that removes the `|1>` term:
/// `tan(theta) e^{i phi} = -alpha2 beta1 / (alpha1 beta2)`, with
/// `theta` in `[0, pi/2]` and `phi` the principal argument in `(-pi, pi]`.
///
/// When both cross terms vanish every splitter cancels `|1>`; this returns
/// [`Error::Degenerate`] carrying the balanced splitter `(pi/4, pi)`, the
/// limit of the identical-input solution.
pub fn solve_cancellation(in1: &InputState, in2: &InputState) -> Result<BeamSplitterParams> {
    let first = in2.alpha() * in1.beta();
    let second = in1.alpha() * in2.beta();
    if first.norm() < VANISHING && second.norm() < VANISHING {
        return Err(Error::Degenerate {
            reason: DegeneracyReason::BothVacuousTerms,
            fallback: BeamSplitterParams::balanced(),
        });
    }
    let theta = first.norm().atan2(second.norm());
    let phi = if first.norm() < VANISHING || second.norm() < VANISHING {
        PI
    } else {
        let arg = (-first * second.conj()).arg();
        if arg <= -PI {
            PI
        } else {
            arg
        }
    };
    BeamSplitterParams::new(theta.clamp(0.0, FRAC_PI_2), phi)
}

/// Result of the stage-two herald, conditional on stage one succeeding.
#[derive(Debug, Clone, PartialEq)]
pub struct StageTwoOutcome {
    pub probability: f64,
    /// Single-mode output; `None` when the herald cannot fire.
    pub output: Option<StateVector>,
}

/// `2 |c2|^2/norm * cos^2(theta2) sin^2(theta2)`.
pub fn stage_two_probability(c: &StageOneCoefficients, theta2: f64) -> f64 {
    let (s, co) = theta2.sin_cos();
    2.0 * c.two_photon_weight() * co * co * s * s
}

/// Mixes the normalized `c0|0> + c2|2>` with a vacuum on `bs2` and heralds
/// one photon on the stage-one arm. Simulated, not closed form.
pub fn stage_two(c: &StageOneCoefficients, bs2: BeamSplitterParams) -> Result<StageTwoOutcome> {
    c.check_purity()?;
    let unnormalized = match StateVector::new(
        1,
        DEFAULT_CUTOFF,
        [(vec![0], c.c0), (vec![1], c.c1), (vec![2], c.c2)],
    ) {
        Ok(s) => s,
        Err(Error::ZeroState) => {
            return Ok(StageTwoOutcome {
                probability: 0.0,
                output: None,
            })
        }
        Err(e) => return Err(e),
    };
    let (state, _) = normalize(&unnormalized)?;
    // local mode 0: stage-one arm, local mode 1: vacuum ancilla
    let joint = tensor(&state, &StateVector::vacuum(1, DEFAULT_CUTOFF)?)?;
    let mixed = apply(&beamsplitter(bs2), &joint)?;
    let heralded = condition(&mixed, &DetectionPattern::single(0, 1))?;
    Ok(StageTwoOutcome {
        probability: heralded.probability,
        output: heralded.state,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StageTwoOptimum {
    pub params: BeamSplitterParams,
    /// Objective value at the numeric optimum.
    pub max_probability: f64,
    /// Objective value at `theta2 = pi/4`.
    pub analytic_probability: f64,
}

impl StageTwoOptimum {
    /// Distance of the numeric optimum from `pi/4`.
    pub fn angle_gap(&self) -> f64 {
        (self.params.theta - FRAC_PI_4).abs()
    }
}

/// Maximizes the stage-two herald probability over `theta2` in `[0, pi/2]`
/// by golden-section search. `phi2` is fixed at 0: it never enters the
/// detection probability. A flat objective (no two-photon term) returns
/// `pi/4`.
pub fn optimize_stage_two(c: &StageOneCoefficients) -> Result<StageTwoOptimum> {
    c.check_purity()?;
    let best = golden_section_max(
        |t| stage_two_probability(c, t),
        0.0,
        FRAC_PI_2,
        STAGE_TWO_SEARCH_TOL,
    );
    Ok(StageTwoOptimum {
        params: BeamSplitterParams::new(best.x.clamp(0.0, FRAC_PI_2), 0.0)?,
        max_probability: best.value,
        analytic_probability: stage_two_probability(c, FRAC_PI_4),
    })
}

/// Everything a single run of the two-stage circuit reports.
#[derive(Debug, Clone, PartialEq)]
pub struct SchemeResult {
    pub lambda1: BeamSplitterParams,
    pub lambda2: BeamSplitterParams,
    /// Probability of no photon in mode 2 after stage one.
    pub p_stage_one: f64,
    /// Probability of one photon in mode 1 given stage one succeeded.
    pub p_stage_two: f64,
    /// Joint probability of both heralds.
    pub p_success: f64,
    /// `|<1|out>|^2`; 0 when the heralds cannot both fire.
    pub output_fidelity: f64,
    pub degeneracy: Option<DegeneracyReason>,
    pub output: Option<StateVector>,
}

impl SchemeResult {
    pub fn is_degenerate(&self) -> bool {
        self.degeneracy.is_some()
    }
}

/// Runs the scheme with the default photon cutoff.
pub fn run_scheme(in1: &InputState, in2: &InputState) -> SchemeResult {
    run_scheme_with_cutoff(in1, in2, DEFAULT_CUTOFF).expect("default cutoff is valid")
}

/// Solves both splitters, then simulates the full three-mode circuit.
pub fn run_scheme_with_cutoff(
    in1: &InputState,
    in2: &InputState,
    cutoff: u32,
) -> Result<SchemeResult> {
    if cutoff < 2 {
        return Err(Error::OutOfRange {
            name: "cutoff",
            value: f64::from(cutoff),
            min: 2.0,
            max: f64::from(u32::MAX),
        });
    }
    let degeneracy = classify(in1, in2);
    let lambda1 = match solve_cancellation(in1, in2) {
        Ok(p) => p,
        Err(Error::Degenerate { fallback, .. }) => fallback,
        Err(e) => return Err(e),
    };
    let coeffs = stage_one_coefficients(in1, in2, lambda1);
    let lambda2 = optimize_stage_two(&coeffs)?.params;

    let mut result = SchemeResult {
        lambda1,
        lambda2,
        p_stage_one: 0.0,
        p_stage_two: 0.0,
        p_success: 0.0,
        output_fidelity: 0.0,
        degeneracy,
        output: None,
    };

    let vacuum = StateVector::vacuum(1, cutoff)?;
    let joint = tensor(
        &tensor(&vacuum, &input_to_state_with_cutoff(in1, cutoff))?,
        &input_to_state_with_cutoff(in2, cutoff),
    )?;
    let stage_one = apply(&embed(&beamsplitter(lambda1), (1, 2), 3)?, &joint)?;
    let herald_one = condition(&stage_one, &DetectionPattern::single(2, 0))?;
    result.p_stage_one = herald_one.probability;
    let Some(after_one) = herald_one.state else {
        return Ok(result);
    };

    // remaining modes: 0 = vacuum arm, 1 = stage-one arm
    let stage_two = apply(&embed(&beamsplitter(lambda2), (1, 0), 2)?, &after_one)?;
    let herald_two = condition(&stage_two, &DetectionPattern::single(1, 1))?;
    result.p_stage_two = herald_two.probability;
    result.p_success = result.p_stage_one * result.p_stage_two;
    if let Some(out) = herald_two.state {
        let target = StateVector::basis(cutoff, vec![1])?;
        result.output_fidelity = fidelity(&out, &target)?;
        result.output = Some(out);
    }
    Ok(result)
}

/// `|beta1 beta2|^2 sin^2(theta) cos^2(theta)`: joint success with a
/// balanced stage-two splitter.
pub fn closed_form_success(in1: &InputState, in2: &InputState, lambda1: BeamSplitterParams) -> f64 {
    let (s, c) = lambda1.theta.sin_cos();
    in1.p() * in2.p() * s * s * c * c
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "p",
            value: p,
            min: 0.0,
            max: 1.0,
        })
    }
}

/// Success probability of this scheme for identical inputs: `p^2 / 4`.
pub fn success_curve_new(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(p * p / 4.0)
}

/// Success probability of the earlier three-input scheme: `16 p^3 / 81`.
pub fn success_curve_old(p: f64) -> Result<f64> {
    check_probability(p)?;
    Ok(16.0 * p * p * p / 81.0)
}
