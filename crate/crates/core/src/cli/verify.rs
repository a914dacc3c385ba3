use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CliError;
use crate::fock::{inner_product, Amplitude, InputState};
use crate::measurement::outcome_distribution;
use crate::optics::{apply, beamsplitter, permanent, InterferometerUnitary};
use crate::oracle::{naive_permanent, polynomial_to_state, state_to_polynomial, substitute};
use crate::random;
use crate::scheme::{run_scheme, success_curve_new, success_curve_old};

const STRICT: f64 = 1e-12;
const PURITY: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct VerifyOptions {
    pub seed: u64,
    pub trials: usize,
    /// Perturbs the unitaries used by the norm-preservation check by `1e-3`.
    pub inject_fault: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub checked: usize,
    /// Largest observed deviation from the property.
    pub worst: f64,
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {:<22} checked={:<6} worst={:.3e}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.checked,
            self.worst
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.to_string())
            .collect()
    }

    pub fn into_result(self) -> Result<VerifyReport, CliError> {
        if self.passed() {
            Ok(self)
        } else {
            Err(CliError::InvariantFailed(self.failures()))
        }
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "seed {}", self.seed)?;
        for c in &self.checks {
            writeln!(f, "{c}")?;
        }
        Ok(())
    }
}

struct Tally {
    name: &'static str,
    tolerance: f64,
    checked: usize,
    worst: f64,
    ok: bool,
}

impl Tally {
    fn new(name: &'static str, tolerance: f64) -> Self {
        Tally {
            name,
            tolerance,
            checked: 0,
            worst: 0.0,
            ok: true,
        }
    }

    fn deviation(&mut self, d: f64) {
        self.checked += 1;
        if d.is_nan() || d > self.tolerance {
            self.ok = false;
        }
        if d.is_nan() || d > self.worst {
            self.worst = d;
        }
    }

    fn holds(&mut self, cond: bool) {
        self.checked += 1;
        self.ok &= cond;
    }

    fn finish(self) -> CheckOutcome {
        CheckOutcome {
            name: self.name,
            passed: self.ok,
            checked: self.checked,
            worst: self.worst,
        }
    }
}

fn max_amplitude_gap(a: &crate::fock::StateVector, b: &crate::fock::StateVector) -> f64 {
    a.iter()
        .map(|(o, x)| (x - b.amplitude(o)).norm())
        .chain(b.iter().map(|(o, y)| (y - a.amplitude(o)).norm()))
        .fold(0.0, f64::max)
}

fn unitarity(rng: &mut ChaCha8Rng, trials: usize) -> CheckOutcome {
    let mut t = Tally::new("unitarity", crate::optics::UNITARY_TOLERANCE);
    for _ in 0..trials {
        let bs = beamsplitter(random::beamsplitter_params(rng));
        t.holds(InterferometerUnitary::new(2, bs.rows().concat()).is_ok());
        t.deviation(bs.unitarity_deviation());
        let (i, j) = (rng.gen_range(0..2), rng.gen_range(0..2));
        let broken = bs.perturbed(i, j, Amplitude::new(1e-6, 0.0));
        t.holds(InterferometerUnitary::new(2, broken.rows().concat()).is_err());
        let dim = rng.gen_range(2..=3);
        t.deviation(random::unitary(rng, dim).unitarity_deviation());
    }
    t.finish()
}

fn norm_preservation(rng: &mut ChaCha8Rng, trials: usize, fault: bool) -> [CheckOutcome; 2] {
    let mut norm = Tally::new("norm-preservation", STRICT);
    let mut sectors = Tally::new("sector-preservation", 0.0);
    for _ in 0..trials {
        let modes = rng.gen_range(1..=3);
        let s = random::state(rng, modes, 4, 4);
        let mut u = random::unitary(rng, modes);
        if fault {
            u = u.perturbed(0, 0, Amplitude::new(1e-3, 0.0));
        }
        let out = apply(&u, &s).expect("dimensions agree");
        norm.deviation((out.norm_sqr() - s.norm_sqr()).abs());
        sectors.holds(out.photon_sectors() == s.photon_sectors());
    }
    [norm.finish(), sectors.finish()]
}

fn permanent_vs_oracle(rng: &mut ChaCha8Rng, trials: usize) -> CheckOutcome {
    let mut t = Tally::new("permanent-vs-oracle", STRICT);
    for k in 0..trials {
        let m = random::matrix(rng, 1 + k % 6);
        let fast = permanent(&m).expect("square");
        let slow = naive_permanent(&m).expect("square");
        t.deviation((fast - slow).norm());
    }
    t.finish()
}

fn apply_vs_oracle(rng: &mut ChaCha8Rng, trials: usize) -> CheckOutcome {
    let mut t = Tally::new("apply-vs-oracle", STRICT);
    for _ in 0..trials {
        let modes = rng.gen_range(1..=3);
        let s = random::state(rng, modes, 4, 4);
        let u = random::unitary(rng, modes);
        let fast = apply(&u, &s).expect("dimensions agree");
        let poly = substitute(&state_to_polynomial(&s), &u).expect("dimensions agree");
        let slow = polynomial_to_state(&poly).expect("degree within cutoff");
        t.deviation(max_amplitude_gap(&fast, &slow));
    }
    t.finish()
}

fn outcome_sums(rng: &mut ChaCha8Rng, trials: usize) -> CheckOutcome {
    let mut t = Tally::new("outcome-sum", STRICT);
    for _ in 0..trials {
        let modes = rng.gen_range(2..=3);
        let s = random::state(rng, modes, 4, 4);
        let detected: Vec<usize> = (0..modes).filter(|_| rng.gen_bool(0.5)).collect();
        let total: f64 = outcome_distribution(&s, &detected)
            .expect("modes in range")
            .values()
            .sum();
        t.deviation((total - 1.0).abs());
        t.deviation((inner_product(&s, &s).expect("same modes").re - 1.0).abs());
    }
    t.finish()
}

fn purity_grid(rng: &mut ChaCha8Rng, trials: usize) -> CheckOutcome {
    let mut t = Tally::new("purity-grid", PURITY);
    let ps: Vec<f64> = (0..10).map(|k| 0.05 + 0.1 * k as f64).collect();
    let mut cases: Vec<(InputState, InputState)> = Vec::new();
    for &p1 in &ps {
        for &p2 in &ps {
            for phase in [0.0, 2.0] {
                cases.push((
                    InputState::from_probability(p1, phase).expect("valid p"),
                    InputState::from_probability(p2, -phase).expect("valid p"),
                ));
            }
        }
    }
    for _ in 0..trials {
        cases.push((random::input_state(rng), random::input_state(rng)));
    }
    for (a, b) in cases {
        let r = run_scheme(&a, &b);
        if r.is_degenerate() {
            continue;
        }
        t.deviation(1.0 - r.output_fidelity);
    }
    t.finish()
}

fn dominance() -> CheckOutcome {
    let mut t = Tally::new("dominance", 0.0);
    for k in 1..=1000 {
        let p = k as f64 / 1000.0;
        let new = success_curve_new(p).expect("p in range");
        let old = success_curve_old(p).expect("p in range");
        t.holds(new > old);
    }
    t.finish()
}

/// Runs every invariant suite with a seeded generator.
pub fn cmd_verify(opts: VerifyOptions) -> Result<VerifyReport, CliError> {
    if opts.trials == 0 {
        return Err(CliError::ConfigInvalid("trials must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let n = opts.trials;
    let mut checks = vec![unitarity(&mut rng, n)];
    checks.extend(norm_preservation(&mut rng, n, opts.inject_fault));
    checks.push(permanent_vs_oracle(&mut rng, n));
    checks.push(apply_vs_oracle(&mut rng, n));
    checks.push(outcome_sums(&mut rng, n));
    checks.push(purity_grid(&mut rng, n));
    checks.push(dominance());
    Ok(VerifyReport {
        seed: opts.seed,
        checks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn passes_with_seed() {
        let report = cmd_verify(VerifyOptions {
            seed: 42,
            trials: 100,
            inject_fault: false,
        })
        .unwrap();
        assert!(report.passed(), "{report}");
        assert!(report.clone().into_result().is_ok());
    }

    #[test]
    fn reproducible() {
        let opts = VerifyOptions {
            seed: 7,
            trials: 10,
            inject_fault: false,
        };
        assert_eq!(cmd_verify(opts).unwrap(), cmd_verify(opts).unwrap());
    }

    #[test]
    fn injected_fault_named() {
        let report = cmd_verify(VerifyOptions {
            seed: 42,
            trials: 20,
            inject_fault: true,
        })
        .unwrap();
        assert!(report.failures().contains(&"norm-preservation".to_string()));
        let err = report.into_result().unwrap_err();
        assert_eq!(err.exit_code(), 1);
        assert!(err.to_string().contains("norm-preservation"));
    }

    #[test]
    fn zero_trials_rejected() {
        let err = cmd_verify(VerifyOptions {
            seed: 0,
            trials: 0,
            inject_fault: false,
        })
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
    }
}
