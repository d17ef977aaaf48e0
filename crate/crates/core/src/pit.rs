//! Randomized exact identity testing.
//!
//! Identities between rational functions are certified by exact evaluation at
//! integer points drawn from a deterministic seeded generator. A surviving
//! identity of total degree `d` checked at `t` independent points fails to be
//! an identity with probability at most `(d/199)^t` (coordinates range over
//! the 199 integers in [-99, 99]).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::expr::Expr;
use crate::matrix::{ExactMatrix, Matrix};
use crate::scalar::Scalar;

/// Deterministic stream; every verification job derives its own stream from
/// the master seed and its stable name.
pub struct Rng(ChaCha8Rng);

impl Rng {
    pub fn seed_from(seed: u64) -> Rng {
        Rng(ChaCha8Rng::seed_from_u64(seed))
    }

    /// Stable per-job stream: master seed xor FNV-1a of the job name.
    pub fn for_job(master: u64, job: &str) -> Rng {
        Rng::seed_from(master ^ fnv1a(job.as_bytes()))
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.0.gen_range(lo..=hi)
    }

    /// Sample coordinate: integer uniform in [-99, 99].
    pub fn coord(&mut self) -> Scalar {
        Scalar::from_int(self.int_in(-99, 99))
    }

    pub fn nonzero_coord(&mut self) -> Scalar {
        loop {
            let c = self.coord();
            if !c.is_zero() {
                return c;
            }
        }
    }

    pub fn index(&mut self, len: usize) -> usize {
        self.0.gen_range(0..len)
    }
}

pub fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

pub fn random_matrix(rng: &mut Rng, n: usize) -> ExactMatrix {
    Matrix::from_fn(n, n, |_, _| rng.coord())
}

/// Resample until `ok` accepts the matrix; gives up after 50 attempts per
/// the non-genericity cap.
pub fn random_matrix_where(
    rng: &mut Rng,
    n: usize,
    mut ok: impl FnMut(&ExactMatrix) -> bool,
) -> Option<ExactMatrix> {
    for _ in 0..50 {
        let x = random_matrix(rng, n);
        if ok(&x) {
            return Some(x);
        }
    }
    None
}

/// Generic sample for the GL(n) checks: all entries nonzero corners and
/// invertible, with the secondary pivots the maps need.
pub fn generic_gl(rng: &mut Rng, n: usize) -> ExactMatrix {
    random_matrix_where(rng, n, |x| {
        !x.at(1, n).is_zero()
            && !x.at(n, 1).is_zero()
            && !x.det().unwrap().is_zero()
    })
    .expect("generic sample")
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub name: String,
    pub n: usize,
    pub trials: usize,
    pub resamples: usize,
    pub status: CheckStatus,
    /// Upper bound on the total degree of the tested difference.
    pub degree_bound: u64,
    /// `(d/199)^t` style bound, rendered as a string.
    pub failure_bound: String,
    pub failing_point: Option<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }
}

/// A single polynomial/rational identity to certify: `lhs == rhs` as
/// functions of a generic sample produced by `sample`.
pub struct IdentityCheck<'a> {
    pub name: String,
    pub n: usize,
    /// Produces a sample point (atom vector) or `None` when non-generic.
    pub sample: &'a mut dyn FnMut(&mut Rng) -> Option<Vec<Scalar>>,
    /// Evaluates both sides at the point; `None` requests a resample.
    pub sides: &'a dyn Fn(&[Scalar]) -> Option<(Scalar, Scalar)>,
    pub degree_bound: u64,
}

pub fn run_check(check: &mut IdentityCheck<'_>, rng: &mut Rng, trials: usize) -> CheckReport {
    let mut resamples = 0usize;
    let mut done = 0usize;
    let mut status = CheckStatus::Pass;
    let mut failing_point = None;
    'trial: while done < trials {
        let mut attempts = 0usize;
        loop {
            let Some(point) = (check.sample)(rng) else {
                resamples += 1;
                attempts += 1;
                if attempts > 50 {
                    status = CheckStatus::Inconclusive;
                    break 'trial;
                }
                continue;
            };
            match (check.sides)(&point) {
                Some((l, r)) => {
                    if l != r {
                        status = CheckStatus::Fail;
                        failing_point = Some(format!(
                            "point={:?} lhs={} rhs={}",
                            point.iter().map(|s| format!("{}", s)).collect::<Vec<_>>(),
                            l,
                            r
                        ));
                        break 'trial;
                    }
                    done += 1;
                    continue 'trial;
                }
                None => {
                    resamples += 1;
                    attempts += 1;
                    if attempts > 50 {
                        status = CheckStatus::Inconclusive;
                        break 'trial;
                    }
                }
            }
        }
    }
    CheckReport {
        name: check.name.clone(),
        n: check.n,
        trials,
        resamples,
        status,
        degree_bound: check.degree_bound,
        failure_bound: format!("({}/199)^{}", check.degree_bound, trials),
        failing_point,
    }
}

/// Convenience: certify that two expressions agree on random GL(n) samples.
pub fn check_exprs(
    name: &str,
    n: usize,
    lhs: &Expr,
    rhs: &Expr,
    rng: &mut Rng,
    trials: usize,
) -> CheckReport {
    let deg = {
        let (ln, ld) = lhs.degree_bound();
        let (rn, rd) = rhs.degree_bound();
        ln.max(ld).max(rn).max(rd)
    };
    let mut sample = |rng: &mut Rng| {
        let x = random_matrix(rng, n);
        Some(crate::expr::matrix_to_point(&x))
    };
    let sides = |point: &[Scalar]| {
        let l = lhs.eval::<Scalar>(point).ok()?;
        let r = rhs.eval::<Scalar>(point).ok()?;
        Some((l, r))
    };
    let mut check = IdentityCheck {
        name: String::from(name),
        n,
        sample: &mut sample,
        sides: &sides,
        degree_bound: deg,
    };
    run_check(&mut check, rng, trials)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_streams() {
        let mut a = Rng::for_job(42, "job");
        let mut b = Rng::for_job(42, "job");
        for _ in 0..16 {
            assert_eq!(a.int_in(-99, 99), b.int_in(-99, 99));
        }
    }

    #[test]
    fn trivial_identity_passes_and_corruption_fails() {
        let mut rng = Rng::seed_from(0);
        let x = Expr::atom(0);
        let r = check_exprs("zero-is-zero", 2, &x.sub(&x), &Expr::int(0), &mut rng, 3);
        assert!(r.passed());
        let r = check_exprs("corrupted", 2, &x, &x.neg(), &mut rng, 3);
        assert_eq!(r.status, CheckStatus::Fail);
    }
}
