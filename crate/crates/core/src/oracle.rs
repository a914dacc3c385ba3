//! Brute-force reference engine.
//!
//! A state is rewritten as a polynomial in creation operators acting on the
//! vacuum, each `a_j^dagger` is replaced by its image `sum_i U[i][j] a_i^dagger`,
//! and the product is expanded with integer multinomial coefficients. Nothing
//! here calls into the permanent-based [`crate::optics::apply`], so the two
//! routes can be checked against each other.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fock::{Occupation, StateVector};
use crate::optics::InterferometerUnitary;

type Degrees = Vec<u32>;

fn factorial(n: u32) -> u64 {
    (1..=u64::from(n)).product()
}

fn multinomial(parts: &[u32]) -> u64 {
    let total: u32 = parts.iter().sum();
    parts
        .iter()
        .fold(factorial(total), |acc, &k| acc / factorial(k))
}

/// Every way to write `total` as an ordered sum of `len` non-negative parts.
fn compositions(len: usize, total: u32) -> Vec<Degrees> {
    let mut out = Vec::new();
    let mut current = vec![0u32; len];
    fn go(idx: usize, left: u32, current: &mut Degrees, out: &mut Vec<Degrees>) {
        if idx + 1 == current.len() {
            current[idx] = left;
            out.push(current.clone());
            return;
        }
        for k in 0..=left {
            current[idx] = k;
            go(idx + 1, left - k, current, out);
        }
    }
    if len > 0 {
        go(0, total, &mut current, &mut out);
    }
    out
}

/// Sum of `coeff * prod_i (a_i^dagger)^{deg_i}` terms.
#[derive(Debug, Clone, PartialEq)]
pub struct CreationPolynomial {
    modes: usize,
    cutoff: u32,
    terms: BTreeMap<Degrees, Complex64>,
}

impl CreationPolynomial {
    pub fn new(modes: usize, cutoff: u32) -> Self {
        CreationPolynomial {
            modes,
            cutoff,
            terms: BTreeMap::new(),
        }
    }

    pub fn with_terms<I>(modes: usize, cutoff: u32, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Degrees, Complex64)>,
    {
        let mut poly = Self::new(modes, cutoff);
        for (deg, coeff) in terms {
            if deg.len() != modes {
                return Err(Error::ModeMismatch {
                    expected: modes,
                    found: deg.len(),
                });
            }
            let total: u32 = deg.iter().sum();
            if total > cutoff {
                return Err(Error::CutoffExceeded {
                    photons: total,
                    cutoff,
                });
            }
            *poly.terms.entry(deg).or_default() += coeff;
        }
        Ok(poly)
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    /// Coefficient of the monomial with the given per-mode powers.
    pub fn coefficient(&self, degrees: &[u32]) -> Complex64 {
        self.terms.get(degrees).copied().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[u32], &Complex64)> {
        self.terms.iter().map(|(d, c)| (d.as_slice(), c))
    }

    fn mul(&self, other: &CreationPolynomial) -> CreationPolynomial {
        let mut out = CreationPolynomial::new(self.modes, self.cutoff.max(other.cutoff));
        for (da, ca) in &self.terms {
            for (db, cb) in &other.terms {
                let deg: Degrees = da.iter().zip(db).map(|(x, y)| x + y).collect();
                *out.terms.entry(deg).or_default() += ca * cb;
            }
        }
        out
    }
}

/// Coefficient of `prod (a_i^dagger)^{n_i}` is `amp(n) / sqrt(prod n_i!)`.
pub fn state_to_polynomial(s: &StateVector) -> CreationPolynomial {
    let mut poly = CreationPolynomial::new(s.modes(), s.cutoff());
    for (occ, amp) in s.iter() {
        let norm: u64 = occ.counts().iter().map(|&n| factorial(n)).product();
        poly.terms
            .insert(occ.counts().to_vec(), amp / (norm as f64).sqrt());
    }
    poly
}

/// Replaces every `a_j^dagger` with `sum_i U[i][j] a_i^dagger` and collects terms.
pub fn substitute(
    poly: &CreationPolynomial,
    u: &InterferometerUnitary,
) -> Result<CreationPolynomial> {
    let m = poly.modes;
    if u.dim() != m {
        return Err(Error::ModeMismatch {
            expected: m,
            found: u.dim(),
        });
    }
    // (sum_i U[i][j] x_i)^d, memoized per (j, d).
    let mut powers: BTreeMap<(usize, u32), CreationPolynomial> = BTreeMap::new();
    let mut image = |j: usize, d: u32| -> CreationPolynomial {
        powers
            .entry((j, d))
            .or_insert_with(|| {
                let mut p = CreationPolynomial::new(m, poly.cutoff);
                for k in compositions(m, d) {
                    let mut coeff = Complex64::new(multinomial(&k) as f64, 0.0);
                    for (i, &ki) in k.iter().enumerate() {
                        coeff *= u.get(i, j).powu(ki);
                    }
                    p.terms.insert(k, coeff);
                }
                p
            })
            .clone()
    };

    let mut out = CreationPolynomial::new(m, poly.cutoff);
    for (deg, coeff) in &poly.terms {
        let mut term = CreationPolynomial::new(m, poly.cutoff);
        term.terms.insert(vec![0; m], *coeff);
        for (j, &d) in deg.iter().enumerate() {
            if d > 0 {
                term = term.mul(&image(j, d));
            }
        }
        for (k, c) in term.terms {
            *out.terms.entry(k).or_default() += c;
        }
    }
    Ok(out)
}

/// Inverse of [`state_to_polynomial`]: `amp(n) = coeff(n) * sqrt(prod n_i!)`.
pub fn polynomial_to_state(poly: &CreationPolynomial) -> Result<StateVector> {
    let amps = poly
        .terms
        .iter()
        .map(|(deg, coeff)| {
            let norm: u64 = deg.iter().map(|&n| factorial(n)).product();
            (Occupation::new(deg.clone()), coeff * (norm as f64).sqrt())
        })
        .collect::<Vec<_>>();
    StateVector::new(poly.modes, poly.cutoff, amps)
}

/// `sum over permutations sigma of prod_i m[i][sigma(i)]`.
pub fn naive_permanent(m: &[Vec<Complex64>]) -> Result<Complex64> {
    let n = m.len();
    if let Some(bad) = m.iter().find(|r| r.len() != n) {
        return Err(Error::NotSquare {
            rows: n,
            cols: bad.len(),
        });
    }
    fn go(m: &[Vec<Complex64>], row: usize, used: &mut [bool], acc: Complex64) -> Complex64 {
        if row == m.len() {
            return acc;
        }
        let mut total = Complex64::default();
        for col in 0..m.len() {
            if !used[col] {
                used[col] = true;
                total += go(m, row + 1, used, acc * m[row][col]);
                used[col] = false;
            }
        }
        total
    }
    Ok(go(m, 0, &mut vec![false; n], Complex64::new(1.0, 0.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::{input_to_state, make_input, tensor};
    use crate::optics::{beamsplitter, BeamSplitterParams};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn multinomials() {
        assert_eq!(multinomial(&[1, 1]), 2);
        assert_eq!(multinomial(&[2, 1, 1]), 12);
        assert_eq!(multinomial(&[0, 3]), 1);
        assert_eq!(compositions(3, 2).len(), 6);
    }

    #[test]
    fn state_to_polynomial_examples() {
        let vac = StateVector::vacuum(1, 4).unwrap();
        let p = state_to_polynomial(&vac);
        assert_eq!(p.coefficient(&[0]), c(1.0, 0.0));
        assert_eq!(p.terms().count(), 1);

        let two = StateVector::basis(4, vec![2]).unwrap();
        let p = state_to_polynomial(&two);
        assert!((p.coefficient(&[2]) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn joint_input_polynomial() {
        let in1 = make_input(c(0.6, 0.0), c(0.0, 0.8)).unwrap();
        let in2 = make_input(c(0.0, 0.8), c(0.6, 0.0)).unwrap();
        let s = tensor(&input_to_state(&in1), &input_to_state(&in2)).unwrap();
        let p = state_to_polynomial(&s);
        let (a1, b1, a2, b2) = (in1.alpha(), in1.beta(), in2.alpha(), in2.beta());
        assert_eq!(p.coefficient(&[0, 0]), a1 * a2);
        assert_eq!(p.coefficient(&[1, 0]), a2 * b1);
        assert_eq!(p.coefficient(&[0, 1]), a1 * b2);
        assert_eq!(p.coefficient(&[1, 1]), b1 * b2);
    }

    #[test]
    fn substitute_identity() {
        let p = CreationPolynomial::with_terms(2, 4, [(vec![1, 0], c(1.0, 0.0))]).unwrap();
        let q = substitute(&p, &InterferometerUnitary::identity(2)).unwrap();
        assert_eq!(q.coefficient(&[1, 0]), c(1.0, 0.0));
        assert_eq!(q.coefficient(&[0, 1]), c(0.0, 0.0));
    }

    #[test]
    fn substitute_hong_ou_mandel() {
        let p = CreationPolynomial::with_terms(2, 4, [(vec![1, 1], c(1.0, 0.0))]).unwrap();
        let q = substitute(&p, &beamsplitter(BeamSplitterParams::balanced())).unwrap();
        assert!((q.coefficient(&[2, 0]) - c(-0.5, 0.0)).norm() < 1e-15);
        assert!((q.coefficient(&[0, 2]) - c(0.5, 0.0)).norm() < 1e-15);
        assert!(q.coefficient(&[1, 1]).norm() < 1e-15);
    }

    #[test]
    fn substitute_mode_mismatch() {
        let p = CreationPolynomial::new(3, 4);
        assert!(substitute(&p, &InterferometerUnitary::identity(2)).is_err());
    }

    #[test]
    fn polynomial_to_state_examples() {
        let p = CreationPolynomial::with_terms(1, 4, [(vec![0], c(1.0, 0.0))]).unwrap();
        assert_eq!(polynomial_to_state(&p).unwrap().amp(&[0]), c(1.0, 0.0));
        let p = CreationPolynomial::with_terms(1, 4, [(vec![2], c(FRAC_1_SQRT_2, 0.0))]).unwrap();
        let s = polynomial_to_state(&p).unwrap();
        assert!((s.amp(&[2]) - c(1.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            CreationPolynomial::with_terms(1, 2, [(vec![3], c(1.0, 0.0))]),
            Err(Error::CutoffExceeded { .. })
        ));
    }

    #[test]
    fn naive_permanent_examples() {
        let m = [
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ];
        assert_eq!(naive_permanent(&m).unwrap(), c(10.0, 0.0));
        let ones = vec![vec![c(1.0, 0.0); 3]; 3];
        assert_eq!(naive_permanent(&ones).unwrap(), c(6.0, 0.0));
        assert_eq!(naive_permanent(&[]).unwrap(), c(1.0, 0.0));
    }
}
