//! Consolidated verification suites. Each suite enumerates the legal
//! parameters at a given size and certifies its identities by exact
//! evaluation at random generic integer points.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::bracket::{DualBracket, MainBracket, TodaBracket};
use crate::builders;
use crate::catalog;
use crate::expr::{matrix_to_point, x_atom, Expr};
use crate::maps;
use crate::matrix::{sel, ExactMatrix, Matrix};
use crate::pit::{generic_gl, random_matrix, CheckReport, CheckStatus, Rng};
use crate::quiver::VertexLabel;
use crate::rf::RationalFunctionPoint;
use crate::scalar::{neg_one_pow, Scalar};
use crate::structures;
use crate::words::Word;

#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
}

impl SuiteConfig {
    pub fn new(n: usize, seed: u64, trials: usize) -> Self {
        SuiteConfig { n, seed, trials }
    }

    fn rng(&self, job: &str) -> Rng {
        Rng::for_job(self.seed, &format!("{}-n{}", job, self.n))
    }
}

fn report(name: String, n: usize, trials: usize, degree: u64, ok: bool, detail: Option<String>) -> CheckReport {
    CheckReport {
        name,
        n,
        trials,
        resamples: 0,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        degree_bound: degree,
        failure_bound: format!("({}/199)^{}", degree, trials),
        failing_point: detail,
    }
}

/// Sample a point that is generic for the whole initial seed: both maps
/// defined and every initial variable nonzero.
pub fn generic_base(rng: &mut Rng, n: usize) -> (ExactMatrix, crate::quiver::Seed) {
    let template = structures::glued_seed(n, &Matrix::identity(n));
    loop {
        let x = generic_for_maps(rng, n);
        let seed = template.with_base(matrix_to_point(&x));
        if seed.base_is_generic() {
            return (x, seed);
        }
    }
}

/// Sample a point where both maps are defined.
pub fn generic_for_maps(rng: &mut Rng, n: usize) -> ExactMatrix {
    loop {
        let x = generic_gl(rng, n);
        if let Ok(xr) = maps::x_right(&x) {
            if !xr.det().unwrap().is_zero() {
                return x;
            }
        }
    }
}

/// Run an exact multi-point comparison; `sides` may ask for a resample.
fn exact_check(
    name: &str,
    cfg: &SuiteConfig,
    degree: u64,
    rng: &mut Rng,
    mut sides: impl FnMut(&mut Rng) -> Option<(Scalar, Scalar)>,
) -> CheckReport {
    let mut resamples = 0usize;
    for _ in 0..cfg.trials {
        let mut attempts = 0;
        loop {
            match sides(rng) {
                Some((l, r)) => {
                    if l != r {
                        return CheckReport {
                            name: String::from(name),
                            n: cfg.n,
                            trials: cfg.trials,
                            resamples,
                            status: CheckStatus::Fail,
                            degree_bound: degree,
                            failure_bound: format!("({}/199)^{}", degree, cfg.trials),
                            failing_point: Some(format!("lhs={} rhs={}", l, r)),
                        };
                    }
                    break;
                }
                None => {
                    resamples += 1;
                    attempts += 1;
                    if attempts > 50 {
                        return CheckReport {
                            name: String::from(name),
                            n: cfg.n,
                            trials: cfg.trials,
                            resamples,
                            status: CheckStatus::Inconclusive,
                            degree_bound: degree,
                            failure_bound: String::new(),
                            failing_point: None,
                        };
                    }
                }
            }
        }
    }
    CheckReport {
        name: String::from(name),
        n: cfg.n,
        trials: cfg.trials,
        resamples,
        status: CheckStatus::Pass,
        degree_bound: degree,
        failure_bound: format!("({}/199)^{}", degree, cfg.trials),
        failing_point: None,
    }
}

// ---------------------------------------------------------------------------
// Pullback-expressions suite: the four explicit pullback identity families.
// ---------------------------------------------------------------------------

pub fn suite_pullback_expressions(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut out = Vec::new();
    let mut rng = cfg.rng("pullback-expressions");
    let m = n - 1;

    for k in 1..=n - 2 {
        for l in 1..=n - 1 - k {
            let lhs_expr = catalog::phi_dual(m, k, l);
            let rhs_expr = catalog::phi(n, k, l);
            let sign = catalog::tt_s_sign(n, k, l);
            let r = exact_check(
                &format!("pullback-phi({k},{l})"),
                cfg,
                (n * n) as u64,
                &mut rng,
                |rng| {
                    let x = generic_for_maps(rng, n);
                    let u = maps::psi_prime(&x).ok()?;
                    let lhs = lhs_expr.eval::<Scalar>(&matrix_to_point(&u)).ok()?;
                    let den = (x.at(1, n) * &x.det().unwrap()).pow((n - k - l) as i64)?;
                    let rhs = &(&sign * &rhs_expr.eval::<Scalar>(&matrix_to_point(&x)).ok()?) / &den;
                    Some((lhs, rhs))
                },
            );
            out.push(r);
        }
    }

    for i in 2..=n - 1 {
        for j in 2..=i {
            let lhs_expr = catalog::g_dual(m, i, j);
            let rhs_expr = catalog::g(n, i, j);
            let sign = catalog::hat_s_sign(n, i, j);
            let r = exact_check(
                &format!("pullback-g({i},{j})"),
                cfg,
                (n * n) as u64,
                &mut rng,
                |rng| {
                    let x = generic_for_maps(rng, n);
                    let u = maps::psi_prime(&x).ok()?;
                    let lhs = lhs_expr.eval::<Scalar>(&matrix_to_point(&u)).ok()?;
                    let den = &x.at(1, n).pow(j as i64 - 1)? * &x.det().unwrap();
                    let rhs = &(&sign * &rhs_expr.eval::<Scalar>(&matrix_to_point(&x)).ok()?) / &den;
                    Some((lhs, rhs))
                },
            );
            out.push(r);
        }
    }

    for rr in 1..=n - 1 {
        let lhs_expr = catalog::c_dual(m, rr);
        let rhs_expr = catalog::c(n, rr);
        let r = exact_check(&format!("pullback-c({rr})"), cfg, (n * n) as u64, &mut rng, |rng| {
            let x = generic_for_maps(rng, n);
            let u = maps::psi_prime(&x).ok()?;
            let lhs = lhs_expr.eval::<Scalar>(&matrix_to_point(&u)).ok()?;
            let den = x.at(1, n) * &x.det().unwrap();
            let rhs = &rhs_expr.eval::<Scalar>(&matrix_to_point(&x)).ok()? / &den;
            Some((lhs, rhs))
        });
        out.push(r);
    }
    // Top coefficient is the determinant of the image.
    out.push(exact_check("pullback-c-top-is-corner-ratio", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let u = maps::psi_prime(&x).ok()?;
        let lhs = catalog::c_dual(m, m).eval::<Scalar>(&matrix_to_point(&u)).ok()?;
        Some((lhs, x.at(n, 1) / x.at(1, n)))
    }));

    for mm in 1..=n {
        let r = exact_check(
            &format!("pullback-hankel-minus({mm})"),
            cfg,
            (n * n) as u64,
            &mut rng,
            |rng| {
                let x = generic_for_maps(rng, n);
                let rf = maps::psi_second(&x).ok()?;
                let lhs = rf.hankel(mm, false);
                let fexpr = builders::f_matrix(n).trailing_principal(2 * mm - 1);
                let num = fexpr.instantiate(&x).det().ok()?;
                let rhs = &num / &x.at(1, n).pow(2 * mm as i64 - 1)?;
                Some((lhs, rhs))
            },
        );
        out.push(r);
    }
    for mm in 1..=n - 1 {
        let r = exact_check(
            &format!("pullback-hankel-plus({mm})"),
            cfg,
            (n * n) as u64,
            &mut rng,
            |rng| {
                let x = generic_for_maps(rng, n);
                let rf = maps::psi_second(&x).ok()?;
                let lhs = rf.hankel(mm, true);
                let fexpr = builders::f_matrix(n).trailing_principal(2 * mm);
                let num = fexpr.instantiate(&x).det().ok()?;
                let rhs = &num / &x.at(1, n).pow(2 * mm as i64)?;
                Some((lhs, rhs))
            },
        );
        out.push(r);
    }
    out.push(exact_check("pullback-hankel-ratio", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let rf = maps::psi_second(&x).ok()?;
        let den = rf.hankel(n - 1, true).inv()?;
        let lhs = rf.hankel(n, false) * den;
        Some((lhs, x.at(n, 1) / x.at(1, n)))
    }));
    out
}

// ---------------------------------------------------------------------------
// Exchange-relation suite.
// ---------------------------------------------------------------------------

pub fn suite_exchange(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("exchange");
    let mut out = Vec::new();

    // Unfrozen-corner exchange identity.
    let g_big = catalog::g(n, n - 1, n - 1);
    let g_small = corner_exchange_partner(n);
    let lhs = g_big.mul(&g_small);
    let rhs = catalog::f(n, 2 * n - 3)
        .mul(&catalog::g(n, n - 2, n - 2))
        .add(&catalog::xn1(n).mul(&catalog::f(n, 2 * n - 4)).mul(&catalog::g(n, n - 1, n - 2)));
    out.push(exact_check("corner-exchange", cfg, lhs.degree_bound().0, &mut rng, |rng| {
        let x = random_matrix(rng, n);
        let pt = matrix_to_point(&x);
        Some((lhs.eval::<Scalar>(&pt).ok()?, rhs.eval::<Scalar>(&pt).ok()?))
    }));

    // Generalized exchange at the special vertex, from the seed machinery
    // against the explicit closed form.
    out.push(exact_check("special-vertex-exchange", cfg, (2 * n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let seed = structures::glued_seed(n, &x);
        let k = seed.quiver.vertex(VertexLabel::Left(1, 1));
        let rhs_expr = seed.exchange_rhs(k).ok()?;
        let lhs = rhs_expr.eval::<Scalar>(&seed.base).ok()?;
        let rhs = explicit_special_rhs(n, &x, false)?;
        Some((lhs, rhs))
    }));

    // Same on the two-cycle extension: coefficients without denominators.
    out.push(exact_check("extended-exchange", cfg, (2 * n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let seed = structures::extended_seed(n, &x);
        let k = seed.quiver.vertex(VertexLabel::Left(1, 1));
        let rhs_expr = seed.exchange_rhs(k).ok()?;
        let lhs = rhs_expr.eval::<Scalar>(&seed.base).ok()?;
        let rhs = explicit_special_rhs(n, &x, true)?;
        Some((lhs, rhs))
    }));

    // Mutating at the special vertex and back returns the original value.
    out.push(exact_check("special-vertex-involution", cfg, (2 * n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let seed = structures::glued_seed(n, &x);
        let k = seed.quiver.vertex(VertexLabel::Left(1, 1));
        let twice = seed.mutate(k).ok()?.mutate(k).ok()?;
        Some((twice.value_at_base(k).ok()?, seed.value_at_base(k).ok()?))
    }));
    out
}

/// The function exchanged against the corner variable: the central
/// submatrix (rows and columns [2, 2n-3]) of the stack
/// `G({1,n}^{n-3}, {1,n-1,n}, {1,n})`, equal to the bracket word
/// `[1~ 2^{n-4} 3]`.
pub fn corner_exchange_partner(n: usize) -> Expr {
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for _ in 0..n - 3 {
        blocks.push(alloc::vec![1, n]);
    }
    blocks.push(alloc::vec![1, n - 1, n]);
    blocks.push(alloc::vec![1, n]);
    let stack = builders::stacked(n, &blocks);
    let idx = sel::range(2, 2 * n - 3);
    stack.sub(&idx, &idx).det_expr()
}

fn explicit_special_rhs(n: usize, x: &ExactMatrix, extended: bool) -> Option<Scalar> {
    let pt = matrix_to_point(x);
    let phi12 = catalog::phi(n, 1, 2).eval::<Scalar>(&pt).ok()?;
    let phi21 = catalog::phi(n, 2, 1).eval::<Scalar>(&pt).ok()?;
    let det = x.det().unwrap();
    let d = n - 1;
    let mut acc = Scalar::zero();
    // r = 0 term.
    let head = x.at(1, n) * &phi12.pow(d as i64)?;
    acc += if extended { &head * &det } else { head };
    for r in 1..=n - 2 {
        let c = catalog::c(n, r).eval::<Scalar>(&pt).ok()?;
        let coeff = if extended { c } else { &c / &det };
        acc += &coeff * &(&phi21.pow(r as i64)? * &phi12.pow((d - r) as i64)?);
    }
    let tail = x.at(n, 1) * &phi21.pow(d as i64)?;
    acc += if extended { &tail * &det } else { tail };
    Some(acc)
}

// ---------------------------------------------------------------------------
// Pluecker / Desnanot-Jacobi families.
// ---------------------------------------------------------------------------

struct WordIdentity {
    name: String,
    lhs: [Word; 2],
    rhs1: [Word; 2],
    rhs2: [Word; 2],
}

impl WordIdentity {
    fn words(&self) -> impl Iterator<Item = &Word> {
        self.lhs.iter().chain(self.rhs1.iter()).chain(self.rhs2.iter())
    }

    fn check_at(&self, n: usize, x: &ExactMatrix) -> Option<bool> {
        let ev = |w: &Word| w.matrix(n).instantiate(x).det().ok();
        let l = &ev(&self.lhs[0])? * &ev(&self.lhs[1])?;
        let r1 = &ev(&self.rhs1[0])? * &ev(&self.rhs1[1])?;
        let r2 = &ev(&self.rhs2[0])? * &ev(&self.rhs2[1])?;
        Some(l == &r1 + &r2)
    }
}

fn four_term_identities(n: usize) -> Vec<WordIdentity> {
    let mut out = Vec::new();
    for k in 3..=n {
        out.push(WordIdentity {
            name: format!("four-term-plucker(k={k})"),
            lhs: [Word::plain(&[k - 1, 2]), Word::barred(&[k - 1])],
            rhs1: [Word::barred(&[k - 2, 2]), Word::plain(&[k])],
            rhs2: [Word::barred(&[k - 1, 2]), Word::plain(&[k - 1])],
        });
    }
    out
}

fn promoted_four_term(n: usize) -> Vec<WordIdentity> {
    let mut out = Vec::new();
    let twos = |q: usize, tail: &[usize]| Word::twos_then(q, tail);
    let btwos = |q: usize, tail: &[usize]| {
        let mut ks = alloc::vec![1];
        ks.extend(core::iter::repeat(2).take(q));
        ks.extend_from_slice(tail);
        Word::barred(&ks)
    };
    for k in 3..n {
        for q in 1..=n.saturating_sub(k) {
            let id1 = WordIdentity {
                name: format!("promoted-plucker-a(q={q},k={k})"),
                lhs: [twos(q, &[k - 1, 2]), btwos(q - 1, &[k])],
                rhs1: [btwos(q - 1, &[k - 1, 2]), twos(q, &[k])],
                rhs2: [btwos(q - 1, &[k, 2]), twos(q, &[k - 1])],
            };
            let id2 = WordIdentity {
                name: format!("promoted-plucker-b(q={q},k={k})"),
                lhs: [btwos(q - 1, &[k - 1, 2]), twos(q - 1, &[k])],
                rhs1: [twos(q - 1, &[k - 1, 2]), btwos(q - 1, &[k])],
                rhs2: [twos(q - 1, &[k, 2]), btwos(q - 1, &[k - 1])],
            };
            for id in [id1, id2] {
                if id.words().all(|w| w.is_valid(n)) {
                    out.push(id);
                }
            }
        }
    }
    out
}

fn dj_identities(n: usize) -> Vec<WordIdentity> {
    let mut out = Vec::new();
    for k1 in 3..=n {
        for k2 in 3..=n {
            let id = WordIdentity {
                name: format!("desnanot-jacobi(k1={k1},k2={k2})"),
                lhs: [Word::plain(&[k1 - 1, k2]), Word::barred(&[k1 - 1, k2 - 1])],
                rhs1: [Word::plain(&[k1, k2 - 1]), Word::barred(&[k1 - 2, k2])],
                rhs2: [Word::barred(&[k1 - 1, k2]), Word::plain(&[k1 - 1, k2 - 1])],
            };
            if id.words().all(|w| w.is_valid(n)) {
                out.push(id);
            }
        }
    }
    out
}

fn promoted_dj(n: usize) -> Vec<WordIdentity> {
    let mut out = Vec::new();
    let twos = |q: usize, tail: &[usize]| Word::twos_then(q, tail);
    let btwos = |q: usize, tail: &[usize]| {
        let mut ks = alloc::vec![1];
        ks.extend(core::iter::repeat(2).take(q));
        ks.extend_from_slice(tail);
        Word::barred(&ks)
    };
    for k1 in 3..=n {
        for k2 in 3..=n {
            for q in 1..=n {
                let id1 = WordIdentity {
                    name: format!("promoted-dj-a(q={q},k1={k1},k2={k2})"),
                    lhs: [twos(q, &[k1 - 1, k2]), btwos(q - 1, &[k1, k2 - 1])],
                    rhs1: [twos(q, &[k1, k2 - 1]), btwos(q - 1, &[k1 - 1, k2])],
                    rhs2: [btwos(q - 1, &[k1, k2]), twos(q, &[k1 - 1, k2 - 1])],
                };
                let id2 = WordIdentity {
                    name: format!("promoted-dj-b(q={q},k1={k1},k2={k2})"),
                    lhs: [btwos(q - 1, &[k1 - 1, k2]), twos(q - 1, &[k1, k2 - 1])],
                    rhs1: [btwos(q - 1, &[k1, k2 - 1]), twos(q - 1, &[k1 - 1, k2])],
                    rhs2: [twos(q - 1, &[k1, k2]), btwos(q - 1, &[k1 - 1, k2 - 1])],
                };
                for id in [id1, id2] {
                    if id.words().all(|w| w.is_valid(n)) {
                        out.push(id);
                    }
                }
            }
        }
    }
    out
}

fn barred_dj(n: usize) -> Vec<WordIdentity> {
    let mut out = Vec::new();
    let w2 = |a: usize, ab: bool, b: usize, bb: bool| Word::new(&[a, b], &[ab, bb]);
    for k1 in 2..=n {
        for k2 in 3..=n {
            let id = WordIdentity {
                name: format!("barred-dj(k1={k1},k2={k2})"),
                lhs: [w2(k1 - 1, true, k2 - 1, false), w2(k1, true, k2 - 1, true)],
                rhs1: [w2(k1, true, k2 - 1, false), w2(k1 - 1, true, k2 - 1, true)],
                rhs2: [w2(k1 - 1, true, k2, false), w2(k1, true, k2 - 2, true)],
            };
            if id.words().all(|w| w.is_valid(n)) {
                out.push(id);
            }
        }
    }
    // k1 = 1 family.
    for k2 in 3..=n {
        let id = WordIdentity {
            name: format!("barred-one-dj(k2={k2})"),
            lhs: [Word::plain(&[k2 - 1]), w2(1, true, k2 - 1, true)],
            rhs1: [Word::barred(&[1, k2 - 1]), Word::barred(&[k2 - 1])],
            rhs2: [Word::plain(&[k2]), w2(1, true, k2 - 2, true)],
        };
        if id.words().all(|w| w.is_valid(n)) {
            out.push(id);
        }
    }
    out
}

pub fn suite_plucker_dj(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("plucker-dj");
    let mut out = Vec::new();
    let mut families = four_term_identities(n);
    families.extend(promoted_four_term(n));
    families.extend(dj_identities(n));
    families.extend(promoted_dj(n));
    families.extend(barred_dj(n));
    for id in &families {
        out.push(exact_check(&id.name, cfg, (4 * n) as u64, &mut rng, |rng| {
            let x = random_matrix(rng, n);
            id.check_at(n, &x).map(|ok| {
                if ok {
                    (Scalar::zero(), Scalar::zero())
                } else {
                    (Scalar::zero(), Scalar::one())
                }
            })
        }));
    }
    // The raw three-term identity on a random tall matrix.
    out.push(exact_check("generic-dj-tall-matrix", cfg, 16, &mut rng, |rng| {
        let r = 3 + rng.index(3);
        let a = Matrix::from_fn(r + 1, r, |_, _| rng.coord());
        let mut picks: Vec<usize> = (1..=r + 1).collect();
        // choose alpha < beta < gamma
        for _ in 0..3 {
            let i = rng.index(picks.len());
            picks.remove(i);
        }
        let removed: Vec<usize> = (1..=r + 1).filter(|v| !picks.contains(v)).collect();
        let (al, be, ga) = (removed[0], removed[1], removed[2]);
        let rows_without = |skip: &[usize]| -> Vec<usize> {
            (1..=r + 1).filter(|v| !skip.contains(v)).collect()
        };
        let cols_all: Vec<usize> = (1..=r).collect();
        let cols_tail: Vec<usize> = (2..=r).collect();
        let single = |i: usize| a.select(&rows_without(&[i]), &cols_all).det().unwrap();
        let double = |i: usize, j: usize| a.select(&rows_without(&[i, j]), &cols_tail).det().unwrap();
        let lhs = &single(be) * &double(al, ga);
        let rhs = &(&single(ga) * &double(al, be)) + &(&single(al) * &double(be, ga));
        Some((lhs, rhs))
    }));
    out
}

// ---------------------------------------------------------------------------
// Compatibility: log-canonicity, the xy-pairing, Casimirs.
// ---------------------------------------------------------------------------

pub fn suite_compatibility(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("compatibility");
    let mut out = Vec::new();

    // Log-canonicity of the initial extended cluster: the coefficient
    // {x_i,x_j}/(x_i x_j) is point-independent across 5 points.
    let points: Vec<ExactMatrix> = (0..5).map(|_| generic_base(&mut rng, n).0).collect();
    let seed0 = structures::glued_seed(n, &points[0]);
    let labels = seed0.quiver.labels();
    let mut log_canonical = true;
    let mut detail = None;
    let mut omega_table: Vec<(String, String, Scalar)> = Vec::new();
    let vars: Vec<Expr> = seed0.vars.clone();
    let mut ctxs: Vec<MainBracket> = points.iter().map(|x| MainBracket::new(x.clone())).collect();
    'outer: for i in 0..vars.len() {
        for j in (i + 1)..vars.len() {
            let mut omega: Option<Scalar> = None;
            for ctx in ctxs.iter_mut() {
                let Ok(w) = ctx.omega(&vars[i], &vars[j]) else {
                    continue;
                };
                match &omega {
                    None => omega = Some(w),
                    Some(prev) => {
                        if *prev != w {
                            log_canonical = false;
                            detail = Some(format!(
                                "pair ({}, {}): {} vs {}",
                                labels[i], labels[j], prev, w
                            ));
                            break 'outer;
                        }
                    }
                }
            }
            if let Some(w) = omega {
                omega_table.push((format!("{}", labels[i]), format!("{}", labels[j]), w));
            }
        }
    }
    out.push(report(String::from("log-canonical-initial-cluster"), n, 5, (n * n) as u64, log_canonical, detail));

    // {x_beta, y_alpha} = d_alpha delta x_beta y_alpha with lambda = 1.
    let mut ok = true;
    let mut detail = None;
    {
        let (x, seed) = generic_base(&mut rng, n);
        let mut ctx = MainBracket::new(x);
        'xy: for alpha in seed.quiver.mutable_vertices().collect::<Vec<_>>() {
            let y = seed.y_variable(alpha).unwrap();
            let d_alpha = seed.quiver.info(alpha).mult as i64;
            let vy = y.eval::<Scalar>(&seed.base).unwrap();
            for beta in seed.quiver.vertices().collect::<Vec<_>>() {
                let xb = &seed.vars[beta];
                let got = ctx.bracket(xb, &y).unwrap();
                let vx = ctx.grad_of(xb).unwrap().0;
                let want = if alpha == beta {
                    Scalar::from_int(d_alpha) * (&vx * &vy)
                } else {
                    Scalar::zero()
                };
                if got != want {
                    ok = false;
                    detail = Some(format!(
                        "alpha={} beta={}",
                        seed.quiver.info(alpha).label,
                        seed.quiver.info(beta).label
                    ));
                    break 'xy;
                }
            }
        }
    }
    out.push(report(String::from("xy-pairing"), n, 1, (n * n) as u64, ok, detail));

    // Casimirs: det X, the corner ratio, and the string monomials
    // annihilate every initial variable.
    let mut casimirs: Vec<(String, Expr)> = Vec::new();
    casimirs.push((String::from("det"), catalog::det_x(n)));
    casimirs.push((String::from("corner-ratio"), catalog::x1n(n).div(&catalog::xn1(n))));
    for r in 1..=n - 2 {
        let p_hat = catalog::c(n, r)
            .div(&catalog::x1n(n))
            .pow(n as i64 - 1)
            .mul(&catalog::x1n(n).div(&catalog::xn1(n)).pow(r as i64))
            .div(&catalog::det_x(n).pow(n as i64 - 1));
        casimirs.push((format!("string-monomial({r})"), p_hat));
    }
    for (cname, cas) in &casimirs {
        let vars = vars.clone();
        let r = exact_check(
            &format!("casimir-{cname}"),
            cfg,
            (2 * n * n) as u64,
            &mut rng,
            |rng| {
                let x = generic_for_maps(rng, n);
                let mut ctx = MainBracket::new(x);
                let mut acc = Scalar::zero();
                for v in &vars {
                    let b = ctx.bracket(cas, v).ok()?;
                    acc = &acc + &(&b * &b);
                }
                Some((acc, Scalar::zero()))
            },
        );
        out.push(r);
    }
    out
}

/// The omega matrix of the initial cluster at a sample point, for reports.
pub fn omega_matrix(n: usize, seed_rng: u64) -> Vec<(String, String, Scalar)> {
    let mut rng = Rng::for_job(seed_rng, "omega-matrix");
    let (x, seed) = generic_base(&mut rng, n);
    let labels = seed.quiver.labels();
    let mut ctx = MainBracket::new(x);
    let mut out = Vec::new();
    for i in 0..seed.vars.len() {
        for j in (i + 1)..seed.vars.len() {
            if let Ok(w) = ctx.omega(&seed.vars[i], &seed.vars[j]) {
                out.push((format!("{}", labels[i]), format!("{}", labels[j]), w));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Poisson-map checks.
// ---------------------------------------------------------------------------

pub fn suite_poisson_maps(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let m = n - 1;
    let mut rng = cfg.rng("poisson-maps");
    let mut out = Vec::new();
    let u_exprs = maps::psi_prime_exprs(n);
    let (qbar_exprs, p_exprs) = maps::psi_second_exprs(n);

    // First-map pullbacks anticommute with the dual bracket.
    let mut pairs: Vec<(usize, usize, usize, usize)> = Vec::new();
    let mut pair_rng = cfg.rng("poisson-map-pairs");
    while pairs.len() < 20 {
        let t = (
            pair_rng.index(m) + 1,
            pair_rng.index(m) + 1,
            pair_rng.index(m) + 1,
            pair_rng.index(m) + 1,
        );
        if !pairs.contains(&t) {
            pairs.push(t);
        }
    }
    for (i, j, k, l) in pairs {
        let f = u_exprs.at(i, j).clone();
        let g = u_exprs.at(k, l).clone();
        let r = exact_check(
            &format!("map1-poisson(u{i}{j},u{k}{l})"),
            cfg,
            (2 * n * n) as u64,
            &mut rng,
            |rng| {
                let x = generic_for_maps(rng, n);
                let u = maps::psi_prime(&x).ok()?;
                let mut main = MainBracket::new(x);
                let lhs = main.bracket(&f, &g).ok()?;
                let mut dual = DualBracket::new(u);
                let rhs = dual.bracket(&x_atom(m, i, j), &x_atom(m, k, l)).ok()?;
                Some((lhs, -rhs))
            },
        );
        out.push(r);
    }

    // Second-map pullbacks obey the moment bracket.
    let need = 2 * n - 2;
    let h_exprs = crate::rf::moments_expr(&qbar_exprs, &p_exprs, 2 * need);
    for i in 0..=need {
        for j in (i + 1)..=need {
            let f = h_exprs[i].clone();
            let g = h_exprs[j].clone();
            let r = exact_check(
                &format!("map2-poisson(h{i},h{j})"),
                cfg,
                (4 * n * n) as u64,
                &mut rng,
                |rng| {
                    let x = generic_for_maps(rng, n);
                    let rf = maps::psi_second(&x).ok()?;
                    let h = rf.moments(i + j);
                    let mut main = MainBracket::new(x);
                    let lhs = main.bracket(&f, &g).ok()?;
                    let rhs = crate::rf::toda_moment_bracket(&h, i, j);
                    Some((lhs, rhs))
                },
            );
            out.push(r);
        }
    }

    // Cross terms vanish.
    let mut cross_rng = cfg.rng("poisson-map-cross");
    for _ in 0..10 {
        let (i, j) = (cross_rng.index(m) + 1, cross_rng.index(m) + 1);
        let kk = cross_rng.index(n);
        let f = u_exprs.at(i, j).clone();
        let g_p = p_exprs[kk].clone();
        let g_q = qbar_exprs[kk].clone();
        let r = exact_check(
            &format!("map-cross(u{i}{j},coeff{kk})"),
            cfg,
            (2 * n * n) as u64,
            &mut rng,
            |rng| {
                let x = generic_for_maps(rng, n);
                let mut main = MainBracket::new(x);
                let a = main.bracket(&f, &g_p).ok()?;
                let b = main.bracket(&f, &g_q).ok()?;
                Some((&(&a * &a) + &(&b * &b), Scalar::zero()))
            },
        );
        out.push(r);
    }
    out
}

// ---------------------------------------------------------------------------
// Row-bracket formulas.
// ---------------------------------------------------------------------------

pub fn suite_row_brackets(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("row-brackets");
    let mut out = Vec::new();
    let entry = |x: &ExactMatrix, r: usize, c: usize| -> Scalar {
        if c > n {
            Scalar::zero()
        } else {
            x.at(r, c).clone()
        }
    };
    out.push(exact_check("row-brackets-all-pairs", cfg, 4, &mut rng, |rng| {
        let x = random_matrix(rng, n);
        let mut ctx = MainBracket::new(x.clone());
        let frac = |num: i64| Scalar::ratio(num, n as i64);
        for k in 1..=n {
            for l in 1..=n {
                // {x_1k, x_1l} and {x_nk, x_nl}.
                for row in [1, n] {
                    let got = ctx.bracket(&x_atom(n, row, k), &x_atom(n, row, l)).ok()?;
                    let want = &frac(l as i64 - k as i64) * &(&entry(&x, row, k) * &entry(&x, row, l));
                    if got != want {
                        return Some((Scalar::zero(), Scalar::one()));
                    }
                }
                // {x_1k, x_nl}: correction sum over j up to l-1 or k.
                let got = ctx.bracket(&x_atom(n, 1, k), &x_atom(n, n, l)).ok()?;
                let mut want = &frac((n + l) as i64 - k as i64 - 1)
                    * &(&entry(&x, 1, k) * &entry(&x, n, l));
                let top = if l <= k { l - 1 } else { k };
                for j in 1..=top {
                    want = &want
                        + &(&(&entry(&x, 1, k + l - j) * &entry(&x, n, j))
                            - &(&entry(&x, 1, j) * &entry(&x, n, k + l - j)));
                }
                if got != want {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));
    out
}

// ---------------------------------------------------------------------------
// Homogeneity.
// ---------------------------------------------------------------------------

fn tri(x: i64) -> i64 {
    x * (x + 1) / 2
}

/// Exact weight table of the initial variables.
pub fn weight_of(n: usize, label: VertexLabel) -> (i64, i64) {
    let nn = n as i64;
    match label {
        VertexLabel::A => (nn, nn),
        VertexLabel::C => (1, 1),
        VertexLabel::B => (nn * (nn + 1) / 2, nn * (nn + 1) / 2),
        VertexLabel::Coeff(r) => {
            let w = nn * (nn + 3) / 2 - r as i64;
            (w, w)
        }
        VertexLabel::Right(i, j) => g_weight(nn, i as i64, j as i64),
        VertexLabel::D => g_weight(nn, nn - 1, nn - 1),
        VertexLabel::TMinus(k) => f_weight(nn, 2 * k as i64 - 1),
        VertexLabel::TPlus(k) => f_weight(nn, 2 * k as i64),
        VertexLabel::Left(k, l) => phi_weight(nn, k as i64, l as i64),
        _ => panic!("no weight for {label}"),
    }
}

fn g_weight(n: i64, i: i64, j: i64) -> (i64, i64) {
    (
        (i - j) * (i - j + 1) / 2 + (n - i) * (n - i - 1) / 2 + (j + 1) * n - 1,
        n * (n + 1) / 2 + (j + 1) * (j - 2) / 2 + i,
    )
}

fn f_weight(n: i64, m: i64) -> (i64, i64) {
    if m % 2 == 0 {
        (m * (n + 1) / 2, m * n - m * m / 4)
    } else {
        ((m - 1) * (n + 1) / 2 + 1, m * n - (m * m - 1) / 4)
    }
}

fn phi_weight(n: i64, k: i64, l: i64) -> (i64, i64) {
    let j = n - k - l;
    let xi = tri(n - 1) * (j - 1) + tri(j - 1) * n + n * j + tri(n - l) + tri(n - k - 1)
        - tri(j - 1) * (n + 1);
    let xibar = (n + 1) * (n + 2) / 2 * j - (j - 1) * (j + 2) / 2 - n + k;
    (xi, xibar)
}

fn scaled(x: &ExactMatrix, t: &Scalar, s: &Scalar) -> ExactMatrix {
    let n = x.rows();
    Matrix::from_fn(n, n, |i, j| {
        x.at(i, j) * &t.pow((n - i + 1) as i64).unwrap() * s.pow(j as i64).unwrap()
    })
}

pub fn suite_homogeneity(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("homogeneity");
    let mut out = Vec::new();
    out.push(exact_check("variable-weights", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let seed = structures::glued_seed(n, &x);
        let t = Scalar::from_int(rng.int_in(2, 9));
        let s = Scalar::from_int(rng.int_in(2, 9));
        if t == s || t.is_zero() || s.is_zero() {
            return None;
        }
        let xt = scaled(&x, &t, &Scalar::one());
        let xs = scaled(&x, &Scalar::one(), &s);
        for v in seed.quiver.vertices() {
            let f = &seed.vars[v];
            let v0 = f.eval::<Scalar>(&matrix_to_point(&x)).ok()?;
            if v0.is_zero() {
                return None;
            }
            let (xi, xibar) = weight_of(n, seed.quiver.info(v).label);
            let vt = f.eval::<Scalar>(&matrix_to_point(&xt)).ok()?;
            let vs = f.eval::<Scalar>(&matrix_to_point(&xs)).ok()?;
            if &vt / &v0 != t.pow(xi)? || &vs / &v0 != s.pow(xibar)? {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    out.push(exact_check("y-weights", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let seed = structures::glued_seed(n, &x);
        let t = Scalar::from_int(3);
        let s = Scalar::from_int(5);
        let xt = scaled(&x, &t, &Scalar::one());
        let xs = scaled(&x, &Scalar::one(), &s);
        for v in seed.quiver.mutable_vertices().collect::<Vec<_>>() {
            let special = seed.quiver.info(v).mult > 1;
            let y = seed.y_variable(v).unwrap();
            let v0 = y.eval::<Scalar>(&matrix_to_point(&x)).ok()?;
            if v0.is_zero() {
                return None;
            }
            let vt = y.eval::<Scalar>(&matrix_to_point(&xt)).ok()?;
            let vs = y.eval::<Scalar>(&matrix_to_point(&xs)).ok()?;
            let (rt, rs) = (&vt / &v0, &vs / &v0);
            if special {
                // At the special vertex both weights agree (what the corner
                // bracket argument uses); the weight is d*(xi_phi21 +
                // xi_xn1 - xi_phi12 - xi_x1n)-style and generally nonzero.
                let et = rt.int_log(&t)?;
                let es = rs.int_log(&s)?;
                if et != es {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            } else if !rt.is_one() || !rs.is_one() {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));
    out
}

// ---------------------------------------------------------------------------
// Maps suite: stabilization, reconstruction, minor identities.
// ---------------------------------------------------------------------------

pub fn suite_maps(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("maps");
    let mut out = Vec::new();

    for m in 3..=5usize {
        let name = format!("stabilization(m={m})");
        let mut ok = true;
        let mut detail = None;
        for rep in 0..10 {
            let u = generic_gl(&mut rng, m);
            match maps::h_iterate(&u) {
                Ok(ys) => {
                    if ys[m - 2] != ys[m - 1] {
                        ok = false;
                        detail = Some(format!("rep {rep}: no stabilization"));
                        break;
                    }
                }
                Err(_) => continue,
            }
        }
        out.push(report(name, n, 10, 0, ok, detail));
    }

    // Column-solid minors freeze as soon as the iteration reaches them.
    out.push(exact_check("iteration-minor-stability", cfg, (n * n) as u64, &mut rng, |rng| {
        let u = generic_gl(rng, n);
        let ys = maps::h_iterate(&u).ok()?;
        let last = ys.last().unwrap();
        for _ in 0..4 {
            let alpha = 2 + rng.index(n - 1);
            let beta = alpha + rng.index(n - alpha + 1);
            let width = beta - alpha + 1;
            if width > n - 1 {
                continue;
            }
            let mut rows: Vec<usize> = (2..=n).collect();
            while rows.len() > width {
                rows.remove(rng.index(rows.len()));
            }
            let cols: Vec<usize> = (alpha..=beta).collect();
            for k in alpha.max(2) - 2..ys.len() {
                let a = ys[k].select(&rows, &cols).det().ok()?;
                let b = last.select(&rows, &cols).det().ok()?;
                if a != b {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Round-trip through the reconstruction.
    let mut ok = true;
    let mut detail = None;
    let mut done = 0;
    while done < 10 {
        let x = generic_for_maps(&mut rng, n);
        let Ok(u) = maps::psi_prime(&x) else { continue };
        let rows = maps::FiberRows::of(&x);
        match maps::reconstruct_x(&u, &rows.first, &rows.last) {
            Ok(back) => {
                if back != x {
                    ok = false;
                    detail = Some(String::from("reconstruction differs"));
                    break;
                }
                done += 1;
            }
            Err(maps::MapError::NonGeneric) => continue,
            Err(e) => {
                ok = false;
                detail = Some(format!("{e}"));
                break;
            }
        }
    }
    out.push(report(String::from("roundtrip-reconstruction"), n, 10, 0, ok, detail));

    // Minors of the image against two-block stacked determinants.
    out.push(exact_check("image-minors", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let u = maps::psi_prime(&x).ok()?;
        for _ in 0..4 {
            let k = 1 + rng.index(n - 1);
            let pick = |rng: &mut Rng| -> Vec<usize> {
                let mut v: Vec<usize> = (1..=n - 1).collect();
                while v.len() > k {
                    v.remove(rng.index(v.len()));
                }
                v
            };
            let i_set = pick(rng);
            let j_set = pick(rng);
            let lhs = &u.select(&i_set, &j_set).det().ok()?
                * &(x.at(1, n) * &x.det().unwrap());
            let j_hat = sel::complement(&j_set, n);
            let blocks = alloc::vec![j_hat, sel::one_union(&sel::gamma(&i_set))];
            let stackedm = builders::stacked(n, &blocks);
            let det = stackedm.instantiate(&x).det().ok()?;
            let sign_j: i64 = (k * (k - 1) / 2) as i64
                + j_set.iter().map(|&v| v as i64).sum::<i64>();
            let sign = neg_one_pow((n as i64 - 1) * k as i64) * neg_one_pow(sign_j);
            if lhs != &sign * &det {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Minors of the unipotent-conjugation invariant against the trailing
    // minor family.
    out.push(exact_check("invariant-minors", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let nm = maps::lower_invariant(&x).ok()?;
        let kk = |i: usize, j: usize| -> Option<Scalar> {
            if i == j {
                x.block(i, n, i, n).det().ok()
            } else {
                builders::k_ij(n, i, j).instantiate(&x).det().ok()
            }
        };
        for i in 2..=n {
            for j in 1..i {
                if (i, j) == (n, 1) {
                    continue;
                }
                let lhs = nm
                    .select(&sel::range(i, n), &sel::range(j, n + j - i))
                    .det()
                    .ok()?;
                let den = (&kk(i, i)? * &kk(n + j - i, n + j - i)?).inv()?;
                let rhs = kk(i, j)? * den;
                if lhs != rhs {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Companion-form monomial relations: first and last lines.
    out.push(exact_check("companion-monomials", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let nu = companion_nu(&x)?;
        let pt = matrix_to_point(&x);
        let phi_at = |k: usize, l: usize| catalog::phi(n, k, l).eval::<Scalar>(&pt).ok();
        // First line: nu_11 = ± x_n1 det X phi_21 / phi_11.
        let lhs = nu.at(1, 1).clone();
        let rhs = &(x.at(n, 1) * &x.det().unwrap()) * &(&phi_at(2, 1)? * &phi_at(1, 1)?.inv()?);
        if lhs != rhs && lhs != -rhs.clone() {
            return Some((Scalar::zero(), Scalar::one()));
        }
        // Last line: det nu^{[1,l-1]}_{[k+1,k+l-1]} = ± phi_kl/phi_{k+l-1,1}.
        for k in 1..=n - 3 {
            for l in 2..=n - 1 - k {
                let rows = sel::range(k + 1, k + l - 1);
                let cols = sel::range(1, l - 1);
                let lhs = nu.select(&rows, &cols).det().ok()?;
                let rhs = phi_at(k, l)? * phi_at(k + l - 1, 1)?.inv()?;
                if lhs != rhs && lhs != -rhs.clone() {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Companion row identity and corner solution of the linear system.
    out.push(exact_check("fiber-row-identities", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let rows = maps::FiberRows::of(&x);
        let c = rows.c_matrix().ok()?;
        let mrow = rows.m_row().ok()?;
        // m = [x_{n,n-1}, ..., x_{n1}] C.
        for j in 1..=n - 1 {
            let mut acc = Scalar::zero();
            for t in 1..=n - 1 {
                acc += x.at(n, n - t) * c.at(t, j);
            }
            if acc != mrow[j - 1] {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        // Upsilon's first row is x_{n1} mu.
        let mu = rows.mu_row().ok()?;
        let l = rows.l_matrix().ok()?;
        for j in 1..=n - 1 {
            let want = x.at(n, 1) * &mu[j - 1];
            if l.at(1, j) != &want {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        // The lower-left block is symmetric.
        if l != l.transpose() {
            return Some((Scalar::zero(), Scalar::one()));
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));
    out
}

fn companion_nu(x: &ExactMatrix) -> Option<ExactMatrix> {
    let n = x.rows();
    let m = n - 1;
    // hatU = U(V X_0, X_0 N): the twisted image of the factorized point.
    let (x_plus, x_low) = x.gauss_factorize().ok()?;
    let x0 = x_low.diagonal();
    let v = x_plus.inverse().ok()?.gamma_group().ok()?.matmul(&x_plus);
    let nmat = maps::lower_invariant(x).ok()?;
    let b = v.matmul(&x0);
    let c = x0.matmul(&nmat);
    let b_l = {
        let full = b.clone();
        let mut e_l = ExactMatrix::zeros(n, n);
        *e_l.at_mut(n, 1) = full.at(1, n).inv()?;
        let id = ExactMatrix::identity(n);
        let t = full.matmul(&id.sub(&e_l.matmul(&full)));
        t.block(2, n, 1, n - 1)
    };
    let c_r = {
        let mut e_r = ExactMatrix::zeros(n, n);
        *e_r.at_mut(1, n) = c.at(n, 1).inv()?;
        let id = ExactMatrix::identity(n);
        let t = c.matmul(&id.sub(&e_r.matmul(&c)));
        t.block(1, n - 1, 2, n)
    };
    let hat_u = b_l.matmul(&c_r.inverse().ok()?);
    let _ = m;
    let (_, nu) = maps::companion_conjugation(&hat_u).ok()?;
    Some(nu)
}

// ---------------------------------------------------------------------------
// Structural golden tests and the sign products.
// ---------------------------------------------------------------------------

pub fn suite_golden(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let mut out = Vec::new();
    let phi = builders::phi_kl(6, 2, 1).dump();
    out.push(report(
        String::from("golden-phi-21-n6"),
        6,
        1,
        0,
        phi == golden_phi21_n6(),
        None,
    ));
    let g53 = builders::g_ij(6, 5, 3).dump();
    out.push(report(String::from("golden-g-53-n6"), 6, 1, 0, g53 == golden_g53_n6(), None));
    let f4 = builders::f_matrix(4).dump();
    out.push(report(String::from("golden-f-n4"), 4, 1, 0, f4 == golden_f_n4(), None));

    // Product of pullback signs over the neighbors of every mutable vertex
    // in the dual-side quiver equals one.
    for n in 4..=6 {
        let m = n - 1;
        let q = structures::dual_quiver(m);
        let mut ok = true;
        for v in q.mutable_vertices().collect::<Vec<_>>() {
            let mut prod = Scalar::one();
            for u in q.vertices() {
                if q.arrows(v, u) == 0 && q.arrows(u, v) == 0 {
                    continue;
                }
                match q.info(u).label {
                    VertexLabel::Left(k, l) => {
                        let s = catalog::tt_s_sign(n, k as usize, l as usize);
                        for _ in 0..q.arrows(v, u) + q.arrows(u, v) {
                            prod = prod * s.clone();
                        }
                    }
                    VertexLabel::Right(i, j) => {
                        let s = catalog::hat_s_sign(n, i as usize, j as usize);
                        for _ in 0..q.arrows(v, u) + q.arrows(u, v) {
                            prod = prod * s.clone();
                        }
                    }
                    _ => {}
                }
            }
            if !prod.is_one() {
                ok = false;
            }
        }
        out.push(report(format!("sign-products(n={n})"), cfg.n, 1, 0, ok, None));
    }
    out
}

/// Reference layout of the 21x21 block-column matrix at n = 6, (k,l) = (2,1).
fn golden_phi21_n6() -> String {
    let mut s = String::new();
    let row = |out: &mut String, parts: &[(usize, usize, usize)], total: usize| {
        // parts: (start column, source row, width n)
        let mut cells: Vec<String> = alloc::vec![String::from("0"); total];
        for &(c0, src, width) in parts {
            for c in 0..width {
                cells[c0 - 1 + c] = format!("x_{{{}{}}}", src, c + 1);
            }
        }
        out.push_str(&cells.join(" "));
        out.push('\n');
    };
    let n = 6;
    let t = 21;
    for r in 2..=6 {
        row(&mut s, &[(1, r, n)], t);
    }
    row(&mut s, &[(2, 1, n)], t);
    for r in 3..=6 {
        row(&mut s, &[(2, r, n), (8, r - 1, n)], t);
    }
    row(&mut s, &[(8, 6, n)], t);
    row(&mut s, &[(9, 1, n)], t);
    for r in 3..=6 {
        row(&mut s, &[(9, r, n), (15, r - 1, n)], t);
    }
    row(&mut s, &[(15, 6, n)], t);
    row(&mut s, &[(16, 1, n)], t);
    for r in 4..=6 {
        row(&mut s, &[(16, r, n)], t);
    }
    s
}

fn golden_g53_n6() -> String {
    let mut s = String::new();
    let n = 6;
    let t = 8;
    let mut push = |src: usize, c0: usize| {
        let mut cells: Vec<String> = alloc::vec![String::from("0"); t];
        for c in 0..n {
            cells[c0 - 1 + c] = format!("x_{{{}{}}}", src, c + 1);
        }
        s.push_str(&cells.join(" "));
        s.push('\n');
    };
    push(1, 1);
    push(6, 1);
    push(1, 2);
    push(4, 2);
    push(5, 2);
    push(6, 2);
    push(1, 3);
    push(6, 3);
    s
}

fn golden_f_n4() -> String {
    let mut s = String::new();
    let n = 4;
    let t = 7;
    let mut push = |src: usize, c0: usize| {
        let mut cells: Vec<String> = alloc::vec![String::from("0"); t];
        for c in 0..n {
            cells[c0 - 1 + c] = format!("x_{{{}{}}}", src, c + 1);
        }
        s.push_str(&cells.join(" "));
        s.push('\n');
    };
    push(4, 1);
    push(1, 2);
    push(4, 2);
    push(1, 3);
    push(4, 3);
    push(1, 4);
    push(4, 4);
    s
}

// ---------------------------------------------------------------------------
// Property suite.
// ---------------------------------------------------------------------------

pub fn suite_properties(cfg: &SuiteConfig) -> Vec<CheckReport> {
    let n = cfg.n;
    let mut rng = cfg.rng("properties");
    let mut out = Vec::new();

    // Quiver and seed mutation are involutions on every built seed.
    out.push(exact_check("mutation-involution", cfg, 0, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let m = n - 1;
        let u = generic_gl(rng, m);
        let p = RationalFunctionPoint::random(rng, m);
        let seeds = [
            structures::glued_seed(n, &x),
            structures::extended_seed(n, &x),
            structures::dual_seed(m, &u),
            structures::toda_seed(m, &p),
        ];
        for seed in &seeds {
            for v in seed.quiver.mutable_vertices().collect::<Vec<_>>() {
                let Ok(once) = seed.mutate(v) else { return None };
                let Ok(twice) = once.mutate(v) else { return None };
                if !twice.quiver.same_mutable_structure(&seed.quiver) {
                    return Some((Scalar::zero(), Scalar::one()));
                }
                if twice.value_at_base(v).ok()? != seed.value_at_base(v).ok()? {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Bracket antisymmetry and the Leibniz rule on random triples, for all
    // three brackets.
    out.push(exact_check("bracket-antisymmetry-leibniz", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let fs = [
            x_atom(n, 1, 2).mul(&x_atom(n, 2, 1)),
            catalog::det_x(n),
            x_atom(n, n, n),
        ];
        let mut main = MainBracket::new(x.clone());
        for f in &fs {
            for g in &fs {
                let a = main.bracket(f, g).ok()?;
                let b = main.bracket(g, f).ok()?;
                if a != -b {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        let (f, g, h) = (&fs[0], &fs[1], &fs[2]);
        let lhs = main.bracket(&f.mul(g), h).ok()?;
        let vf = main.grad_of(f).ok()?.0;
        let vg = main.grad_of(g).ok()?.0;
        let rhs = &(&vf * &main.bracket(g, h).ok()?) + &(&vg * &main.bracket(f, h).ok()?);
        if lhs != rhs {
            return Some((Scalar::zero(), Scalar::one()));
        }
        // Dual bracket.
        let m = n - 1;
        let u = generic_gl(rng, m);
        let mut dual = DualBracket::new(u);
        let fd = x_atom(m, 1, 1).mul(&x_atom(m, m, 1));
        let gd = catalog::det_u(m);
        let hd = x_atom(m, 1, m);
        let lhs = dual.bracket(&fd.mul(&gd), &hd).ok()?;
        let vf = dual.grad_of(&fd).ok()?.0;
        let vg = dual.grad_of(&gd).ok()?.0;
        let rhs = &(&vf * &dual.bracket(&gd, &hd).ok()?) + &(&vg * &dual.bracket(&fd, &hd).ok()?);
        if lhs != rhs || dual.bracket(&fd, &gd).ok()? != -dual.bracket(&gd, &fd).ok()? {
            return Some((Scalar::zero(), Scalar::one()));
        }
        // Hankel-side bracket.
        let p = RationalFunctionPoint::random(rng, m);
        let mut toda = TodaBracket::new(p.moments(6));
        let ft = Expr::atom(1).mul(&Expr::atom(2));
        let gt = Expr::atom(3);
        let ht = Expr::atom(2);
        let lhs = toda.bracket(&ft.mul(&gt), &ht).ok()?;
        let vf = ft.eval::<Scalar>(&toda.moments).ok()?;
        let vg = gt.eval::<Scalar>(&toda.moments).ok()?;
        let rhs = &(&vf * &toda.bracket(&gt, &ht).ok()?) + &(&vg * &toda.bracket(&ft, &ht).ok()?);
        if lhs != rhs || toda.bracket(&ft, &gt).ok()? != -toda.bracket(&gt, &ft).ok()? {
            return Some((Scalar::zero(), Scalar::one()));
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Characteristic coefficients are Casimirs of the dual bracket, and
    // the distinguished triangle function commutes with the whole left
    // family.
    out.push(exact_check("dual-casimirs", cfg, (n * n) as u64, &mut rng, |rng| {
        let m = n - 1;
        let u = generic_gl(rng, m);
        let mut dual = DualBracket::new(u);
        let probes = [
            x_atom(m, 1, m).mul(&x_atom(m, m, 1)),
            catalog::g_dual(m, m, 2),
            catalog::phi_dual(m, 1, 1),
        ];
        for r in 1..=m {
            let c = catalog::c_dual(m, r);
            for f in &probes {
                if !dual.bracket(&c, f).ok()?.is_zero() {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        for k in 1..=m - 1 {
            for l in 1..=m - k {
                let b = dual
                    .bracket(&catalog::phi_dual(m, k, l), &catalog::phi_dual(m, m - 1, 1))
                    .ok()?;
                if !b.is_zero() {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Fiber condition of the combined map.
    out.push(exact_check("fiber-condition", cfg, (n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let u = maps::psi_prime(&x).ok()?;
        let rf = maps::psi_second(&x).ok()?;
        Some((rf.qbar[0].clone(), u.det().ok()?))
    }));

    // The two in-text formulas for the second dual family agree.
    for m in 3..=4usize {
        let mname = format!("dual-g-two-routes(m={m})");
        let r = exact_check(&mname, cfg, (m * m * m) as u64, &mut rng, |rng| {
            let u = generic_gl(rng, m);
            let pt = matrix_to_point(&u);
            for i in 2..=m {
                for j in 2..=i {
                    let a = catalog::g_dual(m, i, j).eval::<Scalar>(&pt).ok()?;
                    let b = maps::g_dual_via_flags(&u, i, j).ok()?;
                    if a != b {
                        return Some((Scalar::zero(), Scalar::one()));
                    }
                }
            }
            Some((Scalar::zero(), Scalar::zero()))
        });
        out.push(r);
    }

    // Moment-level vs function-level Hankel bracket: coefficients of the
    // double Laurent expansion agree with the closed rational form.
    out.push(exact_check("hankel-bracket-function-form", cfg, 32, &mut rng, |rng| {
        let m = n - 1;
        let p = RationalFunctionPoint::random(rng, m);
        let depth = 2 * m + 2;
        let h = p.moments(2 * depth + 2);
        // lhs_{ij} = {h_i, h_j}; rhs from
        // -(λ M(μ) - μ M(λ)) (M(λ) - M(μ))/(λ - μ) expanded as
        // Σ_s h_s (λ^{1-s} μ^{-a} ...) using
        // (λ^{-s} - μ^{-s})/(λ-μ) = -Σ_{a+b=s+1} λ^{-a} μ^{-b}.
        // Expanding -(λ M(μ) - μ M(λ))(M(λ) - M(μ))/(λ - μ) in inverse
        // powers, the λ^{-i} μ^{-j} coefficient is
        // Σ_{s<j} h_s h_{i+j-s} - Σ_{s<i} h_s h_{i+j-s}.
        for i in 0..=depth {
            for j in 0..=depth {
                let lhs = crate::rf::toda_moment_bracket(&h, i, j);
                let mut rhs = Scalar::zero();
                for s in 0..j {
                    rhs = &rhs + &(&h[s] * &h[i + j - s]);
                }
                for s in 0..i {
                    rhs = &rhs - &(&h[s] * &h[i + j - s]);
                }
                if lhs != rhs {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Pullback discrepancies reproduce the stated frozen-arrow pattern.
    out.push(discrepancy_check(cfg));

    // y-variables of the pullback seeds match the pullbacks of the
    // y-variables.
    out.push(exact_check("pullback-y-match", cfg, (2 * n * n) as u64, &mut rng, |rng| {
        let x = generic_for_maps(rng, n);
        let u = maps::psi_prime(&x).ok()?;
        let m = n - 1;
        let pull1 = structures::psi1_pullback_seed(n, &x);
        let dual = structures::dual_seed(m, &u);
        for v in pull1.quiver.mutable_vertices().collect::<Vec<_>>() {
            let lab = pull1.quiver.info(v).label;
            let y1 = pull1.y_variable(v).unwrap().eval::<Scalar>(&pull1.base).ok()?;
            let w = dual.quiver.vertex(lab);
            let y2 = dual.y_variable(w).unwrap().eval::<Scalar>(&dual.base).ok()?;
            if y1 != y2 {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        let rf = maps::psi_second(&x).ok()?;
        let pull2 = structures::psi2_pullback_seed(n, &x);
        let toda = structures::toda_seed(m, &rf);
        for v in pull2.quiver.mutable_vertices().collect::<Vec<_>>() {
            let lab = pull2.quiver.info(v).label;
            let y1 = pull2.y_variable(v).unwrap().eval::<Scalar>(&pull2.base).ok()?;
            let w = toda.quiver.vertex(lab);
            let y2 = toda.y_variable(w).unwrap().eval::<Scalar>(&toda.base).ok()?;
            if y1 != y2 {
                return Some((Scalar::zero(), Scalar::one()));
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // The two building-block seeds are compatible with their own brackets:
    // log-canonical initial clusters and a diagonal xy-pairing with one
    // overall constant.
    out.push(exact_check("dual-structure-compatibility", cfg, (n * n) as u64, &mut rng, |rng| {
        let m = n - 1;
        let u = generic_gl(rng, m);
        let seed = structures::dual_seed(m, &u);
        let mut ctx = DualBracket::new(u);
        let mut lambda: Option<Scalar> = None;
        for alpha in seed.quiver.mutable_vertices().collect::<Vec<_>>() {
            let y = seed.y_variable(alpha).unwrap();
            let d_alpha = seed.quiver.info(alpha).mult as i64;
            let vy = y.eval::<Scalar>(&seed.base).ok()?;
            for beta in seed.quiver.vertices().collect::<Vec<_>>() {
                let xb = &seed.vars[beta];
                let got = ctx.bracket(xb, &y).ok()?;
                if alpha != beta {
                    if !got.is_zero() {
                        return Some((Scalar::zero(), Scalar::one()));
                    }
                    continue;
                }
                let vx = ctx.grad_of(xb).ok()?.0;
                let lam = got * (&(&vx * &vy) * &Scalar::from_int(d_alpha)).inv()?;
                match &lambda {
                    None => lambda = Some(lam),
                    Some(prev) => {
                        if *prev != lam {
                            return Some((Scalar::zero(), Scalar::one()));
                        }
                    }
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    out.push(exact_check("hankel-structure-compatibility", cfg, (n * n) as u64, &mut rng, |rng| {
        let m = n - 1;
        let p = RationalFunctionPoint::random(rng, m);
        let seed = structures::toda_seed(m, &p);
        let mut ctx = TodaBracket::new(seed.base.clone());
        let mut lambda: Option<Scalar> = None;
        for alpha in seed.quiver.mutable_vertices().collect::<Vec<_>>() {
            let y = seed.y_variable(alpha).unwrap();
            let vy = y.eval::<Scalar>(&seed.base).ok()?;
            for beta in seed.quiver.vertices().collect::<Vec<_>>() {
                let xb = &seed.vars[beta];
                let got = ctx.bracket(xb, &y).ok()?;
                if alpha != beta {
                    if !got.is_zero() {
                        return Some((Scalar::zero(), Scalar::one()));
                    }
                    continue;
                }
                let vx = xb.eval::<Scalar>(&seed.base).ok()?;
                let lam = got * (&vx * &vy).inv()?;
                match &lambda {
                    None => lambda = Some(lam),
                    Some(prev) => {
                        if *prev != lam {
                            return Some((Scalar::zero(), Scalar::one()));
                        }
                    }
                }
            }
        }
        Some((Scalar::zero(), Scalar::zero()))
    }));

    // Two-cycle mutation bookkeeping: mutating at the special vertex keeps
    // the pair and spawns the stated arrows; a subsequent mutation at the
    // target replaces the pair by n-1 one-way arrows.
    {
        let mut ok = true;
        let mut detail = None;
        let nn = n.max(5);
        let q = structures::extended_quiver(nn);
        let v11 = q.vertex(VertexLabel::Left(1, 1));
        let b = q.vertex(VertexLabel::B);
        let v21 = q.vertex(VertexLabel::Left(2, 1));
        let v12 = q.vertex(VertexLabel::Left(1, 2));
        match q.mutate(v11) {
            Ok(once) => {
                let pair_kept = once
                    .opposite_pairs
                    .contains(&(v11.min(b), v11.max(b)));
                if !pair_kept || once.arrows(b, v21) != 1 || once.arrows(v12, b) != 1 {
                    ok = false;
                    detail = Some(String::from("first mutation bookkeeping"));
                } else {
                    match once.mutate(v21) {
                        Ok(twice) => {
                            // The two-cycle is replaced by one-way arrows.
                            if twice.arrows(b, v11) != nn - 1 || twice.arrows(v11, b) != 0 {
                                ok = false;
                                detail = Some(String::from("second mutation bookkeeping"));
                            }
                        }
                        Err(e) => {
                            ok = false;
                            detail = Some(format!("{e}"));
                        }
                    }
                }
            }
            Err(e) => {
                ok = false;
                detail = Some(format!("{e}"));
            }
        }
        out.push(report(String::from("two-cycle-mutations"), n, 1, 0, ok, detail));
    }

    // Jacobi identity spot-check on coordinate triples.
    if n == 4 {
        out.push(exact_check("jacobi-spot-check", cfg, (n * n) as u64, &mut rng, |rng| {
            let x = random_matrix(rng, n);
            let mut ctx = MainBracket::new(x.clone());
            for _ in 0..3 {
                let pick = |rng: &mut Rng| (rng.index(n) + 1, rng.index(n) + 1);
                let (a, b) = pick(rng);
                let (c, d) = pick(rng);
                let (e, f) = pick(rng);
                let fab = x_atom(n, a, b);
                let fcd = x_atom(n, c, d);
                let fef = x_atom(n, e, f);
                let br_cd_ef = crate::bracket::entry_bracket_expr(n, c, d, e, f);
                let br_ef_ab = crate::bracket::entry_bracket_expr(n, e, f, a, b);
                let br_ab_cd = crate::bracket::entry_bracket_expr(n, a, b, c, d);
                let t1 = ctx.bracket(&fab, &br_cd_ef).ok()?;
                let t2 = ctx.bracket(&fcd, &br_ef_ab).ok()?;
                let t3 = ctx.bracket(&fef, &br_ab_cd).ok()?;
                let sum = &(&t1 + &t2) + &t3;
                if !sum.is_zero() {
                    return Some((Scalar::zero(), Scalar::one()));
                }
            }
            Some((Scalar::zero(), Scalar::zero()))
        }));
    }
    out
}

fn discrepancy_check(cfg: &SuiteConfig) -> CheckReport {
    use crate::quiver::pullback_discrepancy;
    let n = cfg.n;
    let m = n - 1;
    let q = structures::dual_quiver(m);
    // Exponent tables of the two distinguished denominator factors.
    let lambda1 = |l: VertexLabel| -> i64 {
        match l {
            VertexLabel::Left(k, lv) => (n - k as usize - lv as usize) as i64,
            VertexLabel::Right(_, j) => j as i64 - 1,
            VertexLabel::Zero => 1,
            VertexLabel::Coeff(_) => 1,
            _ => 0,
        }
    };
    let lambda2 = |l: VertexLabel| -> i64 {
        match l {
            VertexLabel::Left(k, lv) => (n - k as usize - lv as usize) as i64,
            VertexLabel::Right(_, _) => 1,
            VertexLabel::Zero => 0,
            VertexLabel::Coeff(_) => 1,
            _ => 0,
        }
    };
    let mut ok = true;
    let mut detail = None;
    for v in q.mutable_vertices().collect::<Vec<_>>() {
        let lab = q.info(v).label;
        if lab == VertexLabel::Left(1, 1) {
            continue;
        }
        let d1 = pullback_discrepancy(&q, &lambda1, v);
        let want1 = if lab == VertexLabel::Left(n as u8 - 2, 1) { 1 } else { 0 };
        let d2 = pullback_discrepancy(&q, &lambda2, v);
        let want2 = if lab == VertexLabel::Left(n as u8 - 2, 1) {
            1
        } else if lab == VertexLabel::Right(n as u8 - 1, 2) {
            -1
        } else {
            0
        };
        if d1 != want1 || d2 != want2 {
            ok = false;
            detail = Some(format!("vertex {lab}: d1={d1} d2={d2}"));
            break;
        }
    }
    // Hankel-side: the single factor has weight 2k-1 / 2k, discrepancy -1
    // at the innermost lower vertex only.
    let qt = structures::toda_quiver(m);
    let lam = |l: VertexLabel| -> i64 {
        match l {
            VertexLabel::TMinus(k) if (k as usize) <= m => 2 * k as i64 - 1,
            VertexLabel::TMinus(_) => 1,
            VertexLabel::TPlus(k) => 2 * k as i64,
            _ => 0,
        }
    };
    for v in qt.mutable_vertices().collect::<Vec<_>>() {
        let lab = qt.info(v).label;
        let d = pullback_discrepancy(&qt, &lam, v);
        let want = if lab == VertexLabel::TMinus(1) { -1 } else { 0 };
        if d != want {
            ok = false;
            detail = Some(format!("hankel vertex {lab}: d={d}"));
            break;
        }
    }
    report(String::from("pullback-discrepancies"), n, 1, 0, ok, detail)
}

// ---------------------------------------------------------------------------
// Negative control.
// ---------------------------------------------------------------------------

pub fn negative_control(cfg: &SuiteConfig) -> CheckReport {
    let n = cfg.n;
    let mut rng = cfg.rng("negative-control");
    let g_big = catalog::g(n, n - 1, n - 1);
    let g_small = corner_exchange_partner(n);
    let lhs = g_big.mul(&g_small);
    // Sign deliberately corrupted on the second term.
    let rhs = catalog::f(n, 2 * n - 3)
        .mul(&catalog::g(n, n - 2, n - 2))
        .sub(&catalog::xn1(n).mul(&catalog::f(n, 2 * n - 4)).mul(&catalog::g(n, n - 1, n - 2)));
    let r = exact_check("negative-control-corrupted-exchange", cfg, lhs.degree_bound().0, &mut rng, |rng| {
        let x = random_matrix(rng, n);
        let pt = matrix_to_point(&x);
        Some((lhs.eval::<Scalar>(&pt).ok()?, rhs.eval::<Scalar>(&pt).ok()?))
    });
    // The control passes exactly when the corrupted identity fails.
    let ok = r.status == CheckStatus::Fail;
    report(
        String::from("negative-control-corrupted-exchange"),
        n,
        cfg.trials,
        r.degree_bound,
        ok,
        None,
    )
}
