//! The long mutation sequences and their step-by-step validation.
//!
//! The engine never trusts a planned sequence: every mutation's produced
//! variable is compared at the base point against the predicted
//! determinantal function (a bracket-notation word in the head, a trailing
//! minor of a two-block stack in the tail), and any mismatch is reported
//! with its step index.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::builders;
use crate::matrix::ExactMatrix;
use crate::pit::fnv1a;
use crate::quiver::{Seed, VertexLabel};
use crate::rf::RationalFunctionPoint;
use crate::scalar::Scalar;
use crate::structures;
use crate::words::Word;

/// Universal numbering of the subquiver vertices, stable across n.
pub fn universal_label(n: usize, num: i64) -> Option<VertexLabel> {
    let nn = n as i64;
    if num == 0 {
        return Some(VertexLabel::D);
    }
    if num > 0 {
        let mutable_max = nn * (nn - 3) / 2;
        if num <= mutable_max {
            // Layers j = n-2 down to 2; within a layer i runs j..=n-1.
            let mut acc = 0i64;
            for j in (2..=nn - 2).rev() {
                let size = nn - j;
                if num <= acc + size {
                    let i = j + (num - acc) - 1;
                    return Some(VertexLabel::Right(i as u8, j as u8));
                }
                acc += size;
            }
            return None;
        }
        let off = num - mutable_max;
        return match off {
            1 => Some(VertexLabel::B),
            2 => Some(VertexLabel::C),
            k if k >= 3 && k <= nn => {
                let kk = (k - 2) as u8;
                Some(VertexLabel::Left(kk, n as u8 - 1 - kk))
            }
            _ => None,
        };
    }
    let a = -num;
    if a == 2 * nn - 3 {
        return Some(VertexLabel::TMinus(1));
    }
    if a % 2 == 1 {
        let m = nn - (a + 1) / 2;
        (m >= 2).then(|| VertexLabel::TMinus(m as u8))
    } else {
        let m = nn - 1 - a / 2;
        (m >= 1).then(|| VertexLabel::TPlus(m as u8))
    }
}

/// The head sequence, by universal numbers: prefix = previous head, then
/// infix, root (the leftmost mutable layer bottom-up) and suffix.
pub fn head_sequence(n: usize) -> Vec<i64> {
    assert!(n >= 4);
    if n == 4 {
        return alloc::vec![0, -1, 1, 2, -2];
    }
    let mut seq = head_sequence(n - 1);
    seq.extend(infix(n));
    seq.extend(root(n));
    seq.extend(suffix(n));
    seq
}

fn root(n: usize) -> Vec<i64> {
    // Numbers of <i,2> for i = 2..=n-1; the layers left of it hold
    // Σ_{t=2}^{n-3} t vertices.
    let start: i64 = (2..=(n as i64 - 3)).sum::<i64>();
    (2..=n as i64 - 1).map(|i| start + i - 1).collect()
}

fn infix(n: usize) -> Vec<i64> {
    let mut v = root(n - 1);
    v.extend(suffix_seq(n - 1));
    v.iter().map(|x| x - 1).collect()
}

fn suffix(n: usize) -> Vec<i64> {
    infix(n).iter().map(|x| x - 1).collect()
}

fn suffix_seq(n: usize) -> Vec<i64> {
    if n == 4 {
        alloc::vec![-2]
    } else {
        suffix(n)
    }
}

/// Relation family used at a step, recorded in the trace.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RelationTag {
    FourTermPlucker,
    PromotedFourTerm,
    DesnanotJacobi,
    PromotedDesnanotJacobi,
    BarredDesnanotJacobi,
    BarredOneDesnanotJacobi,
    GluedExchange,
    HankelStep,
}

impl RelationTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            RelationTag::FourTermPlucker => "four-term-plucker",
            RelationTag::PromotedFourTerm => "promoted-plucker",
            RelationTag::DesnanotJacobi => "desnanot-jacobi",
            RelationTag::PromotedDesnanotJacobi => "promoted-desnanot-jacobi",
            RelationTag::BarredDesnanotJacobi => "barred-desnanot-jacobi",
            RelationTag::BarredOneDesnanotJacobi => "barred-one-desnanot-jacobi",
            RelationTag::GluedExchange => "glued-exchange",
            RelationTag::HankelStep => "hankel-step",
        }
    }
}

/// Predicted outcomes of the head steps: the bracket word each mutation
/// produces, derived by the promotion/demotion recursion from the base
/// case n = 4.
pub fn head_predictions(n: usize) -> Vec<(Word, RelationTag)> {
    assert!(n >= 4);
    if n == 4 {
        return alloc::vec![
            (Word::barred(&[1, 3]), RelationTag::PromotedFourTerm),
            (Word::plain(&[3]), RelationTag::PromotedFourTerm),
            (Word::barred(&[2, 2]), RelationTag::DesnanotJacobi),
            (Word::barred(&[3]), RelationTag::FourTermPlucker),
            (Word::barred(&[2]), RelationTag::FourTermPlucker),
        ];
    }
    let mut out: Vec<(Word, RelationTag)> = head_predictions(n - 1)
        .into_iter()
        .map(|(w, t)| (w.promote(), t))
        .collect();
    // Infix: promote-then-demote of the previous root+suffix predictions.
    for (w, t) in rs_predictions(n - 1) {
        let pd = w.promote().demote().expect("promoted words demote");
        out.push((pd, t));
    }
    out.extend(root_predictions(n));
    out.extend(rs_predictions(n - 1));
    out
}

fn root_predictions(n: usize) -> Vec<(Word, RelationTag)> {
    let mut v: Vec<(Word, RelationTag)> = (3..=n - 1)
        .map(|j| (Word::barred(&[j - 1, n - j + 1]), RelationTag::DesnanotJacobi))
        .collect();
    v.push((Word::barred(&[n - 1]), RelationTag::FourTermPlucker));
    v
}

fn rs_predictions(n: usize) -> Vec<(Word, RelationTag)> {
    let mut v = root_predictions(n);
    if n == 4 {
        v.push((Word::barred(&[2]), RelationTag::FourTermPlucker));
    } else {
        v.extend(rs_predictions(n - 1));
    }
    v
}

/// One validated mutation step.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub index: usize,
    pub vertex: String,
    pub tag: RelationTag,
    pub predicted: String,
    pub predicted_hash: u64,
    pub produced_hash: u64,
    pub ok: bool,
}

#[derive(Clone, Debug)]
pub struct RunError {
    pub step: usize,
    pub message: String,
}

fn record(
    index: usize,
    vertex: VertexLabel,
    tag: RelationTag,
    name: String,
    predicted: &Scalar,
    produced: &Scalar,
) -> StepRecord {
    StepRecord {
        index,
        vertex: format!("{vertex}"),
        tag,
        predicted: name,
        predicted_hash: fnv1a(predicted.canonical_string().as_bytes()),
        produced_hash: fnv1a(produced.canonical_string().as_bytes()),
        ok: predicted == produced,
    }
}

/// Run the head on the subquiver seed, validating every produced value.
pub fn run_head(n: usize, seed: &Seed) -> Result<(Seed, Vec<StepRecord>), RunError> {
    let steps = head_sequence(n);
    let preds = head_predictions(n);
    assert_eq!(steps.len(), preds.len());
    let mut cur = seed.clone();
    let mut trace = Vec::with_capacity(steps.len());
    for (idx, (&num, (word, tag))) in steps.iter().zip(preds.iter()).enumerate() {
        let label = universal_label(n, num)
            .ok_or_else(|| RunError { step: idx, message: format!("bad universal number {num}") })?;
        let v = cur.quiver.id_of(label).ok_or_else(|| RunError {
            step: idx,
            message: format!("vertex {label} missing"),
        })?;
        cur = cur.mutate(v).map_err(|e| RunError { step: idx, message: format!("{e}") })?;
        let produced = cur.value_at_base(v).map_err(|e| RunError {
            step: idx,
            message: format!("{e}"),
        })?;
        let predicted = word
            .matrix(n)
            .instantiate(&base_matrix(n, &cur.base))
            .det()
            .map_err(|e| RunError { step: idx, message: format!("{e}") })?;
        let rec = record(idx, label, *tag, word.label(), &predicted, &produced);
        let ok = rec.ok;
        trace.push(rec);
        if !ok {
            return Err(RunError {
                step: idx,
                message: format!("step {idx} at {label}: produced != predicted {}", word.label()),
            });
        }
    }
    Ok((cur, trace))
}

fn base_matrix(n: usize, base: &[Scalar]) -> ExactMatrix {
    ExactMatrix::from_fn(n, n, |i, j| base[(i - 1) * n + (j - 1)].clone())
}

/// The boomerang table: predicted variable at grid position (i, j) after
/// the head (positions `(2,1)`, `(1,1)`, `(1,2)` do not exist; `(1,3)` is
/// the frozen corner carrying x_{n1} and `(2,2)` carries det X).
pub fn boomerang_word(n: usize, i: usize, j: usize) -> Option<Word> {
    match j {
        1 => (3..=n + 1).contains(&i).then(|| Word::barred(&[n + 2 - i])),
        2 => (2..=n).contains(&i).then(|| Word::plain(&[n + 2 - i])),
        _ => {
            if i >= 1 && j >= 3 && i + j <= n + 2 && (i, j) != (1, 3) {
                Some(Word::barred(&[j - 2, n + 4 - i - j]))
            } else {
                None
            }
        }
    }
}

/// Locate each boomerang position's vertex by exact value matching at the
/// base point; the assignment must be a bijection on the non-corner
/// positions.
pub fn boomerang_positions(
    n: usize,
    seed: &Seed,
) -> Result<alloc::collections::BTreeMap<(usize, usize), usize>, RunError> {
    let x = base_matrix(n, &seed.base);
    let mut by_value: alloc::collections::BTreeMap<String, Vec<usize>> =
        alloc::collections::BTreeMap::new();
    for v in seed.quiver.vertices() {
        let val = seed.value_at_base(v).map_err(|e| RunError { step: 0, message: format!("{e}") })?;
        by_value.entry(val.canonical_string()).or_default().push(v);
    }
    let mut out = alloc::collections::BTreeMap::new();
    for i in 1..=n + 1 {
        for j in 1..=n + 2 - i {
            let Some(word) = boomerang_word(n, i, j) else { continue };
            let predicted = word
                .matrix(n)
                .instantiate(&x)
                .det()
                .map_err(|e| RunError { step: 0, message: format!("{e}") })?;
            let hits = by_value.get(&predicted.canonical_string()).cloned().unwrap_or_default();
            if hits.len() != 1 {
                return Err(RunError {
                    step: 0,
                    message: format!(
                        "position ({i},{j}) word {} matches {} vertices",
                        word.label(),
                        hits.len()
                    ),
                });
            }
            out.insert((i, j), hits[0]);
        }
    }
    Ok(out)
}

/// Run the full long sequence: head, freeze the trailing-minor carriers,
/// then the tail column by column from the right. Returns the final seed
/// and the full trace.
pub fn run_w(n: usize, x: &ExactMatrix) -> Result<(Seed, Vec<StepRecord>), RunError> {
    let seed = structures::w_seed(n, x);
    let (mut cur, mut trace) = run_head(n, &seed)?;
    let positions = boomerang_positions(n, &cur)?;
    // Freeze the principal trailing minors along the first row.
    for i in 3..=n {
        let v = positions[&(i, 1)];
        cur.quiver.freeze(v);
    }
    let mut idx = trace.len();
    for i in (2..=n).rev() {
        for j in 2..=n - i + 2 {
            if (i, j) == (2, 2) {
                continue;
            }
            let v = positions[&(i, j)];
            let (ki, kj, tag, k2) = if j == 2 {
                (n, i - 1, RelationTag::BarredOneDesnanotJacobi, n - i + 4)
            } else {
                (n - j + 2, i - 1, RelationTag::BarredDesnanotJacobi, n + 4 - i - j)
            };
            let _ = k2;
            cur = cur.mutate(v).map_err(|e| RunError { step: idx, message: format!("{e}") })?;
            let produced = cur
                .value_at_base(v)
                .map_err(|e| RunError { step: idx, message: format!("{e}") })?;
            let predicted = builders::k_ij(n, ki, kj)
                .instantiate(x)
                .det()
                .map_err(|e| RunError { step: idx, message: format!("{e}") })?;
            let rec = record(
                idx,
                cur.quiver.info(v).label,
                tag,
                format!("k({ki},{kj})"),
                &predicted,
                &produced,
            );
            let ok = rec.ok;
            trace.push(rec);
            if !ok {
                return Err(RunError {
                    step: idx,
                    message: format!("tail step at ({i},{j}): produced != k({ki},{kj})"),
                });
            }
            idx += 1;
        }
    }
    Ok((cur, trace))
}

/// Expected multiset of values at the end of the long sequence (on the
/// subquiver's vertex set): the base triangle functions, the frozen
/// corners, and the full trailing-minor family.
pub fn final_value_multiset(n: usize, x: &ExactMatrix) -> Vec<Scalar> {
    let mut vals: Vec<Scalar> = Vec::new();
    for k in 1..=n - 2 {
        vals.push(
            builders::phi_kl(n, k, n - 1 - k).instantiate(x).det().unwrap(),
        );
    }
    vals.push(x.det().unwrap());
    vals.push(x.at(n, 1).clone());
    for i in 1..=n {
        for j in 1..=i {
            if (i, j) == (1, 1) || (i, j) == (n, 1) {
                continue;
            }
            let v = if i == j {
                x.block(i, n, i, n).det().unwrap()
            } else {
                builders::k_ij(n, i, j).instantiate(x).det().unwrap()
            };
            vals.push(v);
        }
    }
    vals
}

/// The Hankel-side sequence: mutations at the lower rank-rung vertices in
/// order. Produces the shifted Hankel determinants, with the last step
/// producing the signed ratio.
pub fn run_mu(
    n: usize,
    point: &RationalFunctionPoint,
) -> Result<(Seed, Vec<StepRecord>), RunError> {
    assert_eq!(point.m, n);
    let seed = structures::toda_seed(n, point);
    let mut cur = seed.clone();
    let mut trace = Vec::new();
    let h = point.moments(2 * n);
    for m in 1..=n {
        let v = cur.quiver.vertex(VertexLabel::TMinus(m as u8));
        cur = cur.mutate(v).map_err(|e| RunError { step: m - 1, message: format!("{e}") })?;
        let produced = cur
            .value_at_base(v)
            .map_err(|e| RunError { step: m - 1, message: format!("{e}") })?;
        // Shifted Hankel determinant det(h_{a+b})_{1..m}.
        let shifted = ExactMatrix::from_fn(m, m, |a, b| h[a + b].clone())
            .det()
            .map_err(|e| RunError { step: m - 1, message: format!("{e}") })?;
        let predicted = if m < n {
            shifted
        } else {
            // (-1)^n t_n^+ / t_n^-: the last exchange divides by the signed
            // top Hankel determinant, nonzero exactly on coprime points.
            let inv = point.hankel(n, true).inv().ok_or_else(|| RunError {
                step: m - 1,
                message: String::from("top Hankel determinant vanishes; resample"),
            })?;
            shifted * inv
        };
        let name = if m < n {
            format!("hankel-shift2({m})")
        } else {
            format!("hankel-shift2({m})/signed-top")
        };
        let rec = record(
            m - 1,
            VertexLabel::TMinus(m as u8),
            RelationTag::HankelStep,
            name,
            &predicted,
            &produced,
        );
        let ok = rec.ok;
        trace.push(rec);
        if !ok {
            return Err(RunError {
                step: m - 1,
                message: format!("rung {m}: produced != predicted"),
            });
        }
    }
    // Sanity: the final step divided exactly, i.e. t̄_n^+ (t̄_n^-)' is the
    // plain shifted determinant.
    Ok((cur, trace))
}

/// After the rung sequence, vertex `(m,-)` carries the plus-type Hankel
/// determinant of the shifted stream and `(m,+)` the minus-type one, so the
/// restriction to the first `2n` vertices must be the plain ladder with the
/// two rows swapped; arrows between the two left-end vertices (both frozen
/// on the plain ladder) are immaterial.
pub fn mu_restriction_matches_ladder(n: usize, mutated: &crate::quiver::Quiver) -> bool {
    use VertexLabel::{TMinus, TPlus};
    let plain = toda_plain_quiver(n);
    let swap = |l: VertexLabel| -> VertexLabel {
        match l {
            TMinus(k) => TPlus(k),
            TPlus(k) => TMinus(k),
            other => other,
        }
    };
    let corner = |l: VertexLabel| matches!(l, TMinus(k) | TPlus(k) if k as usize == n);
    for v in plain.vertices() {
        for u in plain.vertices() {
            let (lv, lu) = (plain.info(v).label, plain.info(u).label);
            if corner(lv) && corner(lu) {
                continue;
            }
            let (Some(mv), Some(mu_)) = (mutated.id_of(swap(lv)), mutated.id_of(swap(lu))) else {
                return false;
            };
            if plain.arrows(v, u) != mutated.arrows(mv, mu_) {
                return false;
            }
        }
    }
    true
}

/// The ladder with both left-end vertices frozen, for the structural
/// comparison after the Hankel-side sequence.
pub fn toda_plain_quiver(n: usize) -> crate::quiver::Quiver {
    use crate::quiver::Quiver;
    use VertexLabel::{TMinus, TPlus};
    let mut q = Quiver::new();
    for mp in 1..=n {
        q.add_vertex(TMinus(mp as u8), 1, mp == n, false);
    }
    for mp in 1..=n {
        q.add_vertex(TPlus(mp as u8), 1, mp == n, false);
    }
    for mp in 2..=n {
        q.add_arrows(TPlus(mp as u8), TPlus(mp as u8 - 1), 1);
        q.add_arrows(TMinus(mp as u8), TMinus(mp as u8 - 1), 1);
    }
    for mp in 1..=n - 1 {
        q.add_arrows(TMinus(mp as u8), TPlus(mp as u8), 2);
    }
    for mp in 1..=n - 2 {
        q.add_arrows(TPlus(mp as u8), TMinus(mp as u8 + 1), 2);
    }
    q.add_arrows(TPlus(n as u8 - 1), TMinus(n as u8), 1);
    q
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_sequences() {
        assert_eq!(head_sequence(4), alloc::vec![0, -1, 1, 2, -2]);
        assert_eq!(
            head_sequence(5),
            alloc::vec![0, -1, 1, 2, -2, 0, 1, -3, 3, 4, 5, -1, 0, -4]
        );
        assert_eq!(root(5), alloc::vec![3, 4, 5]);
        assert_eq!(root(6), alloc::vec![6, 7, 8, 9]);
    }

    #[test]
    fn universal_numbering_roundtrip() {
        for n in 4..=6usize {
            assert_eq!(universal_label(n, 0), Some(VertexLabel::D));
            assert_eq!(universal_label(n, -1), Some(VertexLabel::TMinus(n as u8 - 1)));
            assert_eq!(universal_label(n, -2), Some(VertexLabel::TPlus(n as u8 - 2)));
            assert_eq!(
                universal_label(n, -(2 * n as i64) + 3),
                Some(VertexLabel::TMinus(1))
            );
            let base = (n * (n - 3) / 2) as i64;
            assert_eq!(universal_label(n, base + 1), Some(VertexLabel::B));
            assert_eq!(universal_label(n, base + 2), Some(VertexLabel::C));
            // All head steps land on actual vertices.
            for s in head_sequence(n) {
                assert!(universal_label(n, s).is_some(), "n={n} step {s}");
            }
        }
        // Spot values for n = 6.
        assert_eq!(universal_label(6, 1), Some(VertexLabel::Right(4, 4)));
        assert_eq!(universal_label(6, 3), Some(VertexLabel::Right(3, 3)));
        assert_eq!(universal_label(6, 5), Some(VertexLabel::Right(5, 3)));
        assert_eq!(universal_label(6, 6), Some(VertexLabel::Right(2, 2)));
    }

    #[test]
    fn prediction_counts_match() {
        for n in 4..=6 {
            assert_eq!(head_sequence(n).len(), head_predictions(n).len(), "n={n}");
        }
    }
}
