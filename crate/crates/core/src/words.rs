//! Bracket-notation family of trailing-minor functions used along the long
//! mutation sequence, with promotion and demotion transforms.
//!
//! A word `[k_1 k_2 ... k_p]` names the determinant of the maximal trailing
//! square submatrix of the stacked matrix whose block `l` selects the first
//! row plus the last `k_l - 1` rows of `X`. A barred letter selects the
//! last `k_l` rows only; a leading bar gives the second family of the
//! mutation path, and fully barred two-letter words are the terminal
//! trailing-minor functions the tail produces.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::builders::stacked;
use crate::matrix::sel;
use crate::sym::SymMatrix;

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Word {
    pub ks: Vec<usize>,
    pub bars: Vec<bool>,
}

impl Word {
    pub fn new(ks: &[usize], bars: &[bool]) -> Word {
        assert_eq!(ks.len(), bars.len());
        Word { ks: ks.to_vec(), bars: bars.to_vec() }
    }

    pub fn plain(ks: &[usize]) -> Word {
        Word { ks: ks.to_vec(), bars: alloc::vec![false; ks.len()] }
    }

    /// Bar on the first letter only.
    pub fn barred(ks: &[usize]) -> Word {
        let mut bars = alloc::vec![false; ks.len()];
        bars[0] = true;
        Word { ks: ks.to_vec(), bars }
    }

    /// `[2^r a b]`-style helper.
    pub fn twos_then(r: usize, tail: &[usize]) -> Word {
        let mut ks = alloc::vec![2; r];
        ks.extend_from_slice(tail);
        Word::plain(&ks)
    }

    fn lead_barred(&self) -> bool {
        self.bars[0]
    }

    pub fn is_valid(&self, n: usize) -> bool {
        let p = self.ks.len();
        if p == 0 || self.ks.iter().any(|&k| k == 0 || k > n) {
            return false;
        }
        let total: usize = self.ks.iter().sum();
        total <= n + p - 1
    }

    /// Selector blocks of the stacked matrix this word names.
    pub fn blocks(&self, n: usize) -> Vec<Vec<usize>> {
        self.ks
            .iter()
            .zip(self.bars.iter())
            .map(|(&k, &bar)| {
                if bar {
                    sel::range(n - k + 1, n)
                } else {
                    sel::one_union(&sel::range(n - k + 2, n))
                }
            })
            .collect()
    }

    /// The maximal trailing square submatrix of the stacked matrix.
    pub fn matrix(&self, n: usize) -> SymMatrix {
        assert!(self.is_valid(n), "malformed bracket word {self:?} for n={n}");
        let g = stacked(n, &self.blocks(n));
        g.trailing(g.rows())
    }

    /// Promotion: prepend a block. `[k...] -> [2 k...]`,
    /// `[1̄ k...] -> [1̄ 2 k...]`, `[k̄_1 k...] -> [1̄ k_1+1 k...]` for k_1>1.
    /// Defined on words whose only bar can sit on the first letter.
    pub fn promote(&self) -> Word {
        assert!(self.bars[1..].iter().all(|b| !b));
        if !self.lead_barred() {
            let mut ks = alloc::vec![2];
            ks.extend_from_slice(&self.ks);
            Word::plain(&ks)
        } else if self.ks[0] == 1 {
            let mut ks = alloc::vec![1, 2];
            ks.extend_from_slice(&self.ks[1..]);
            Word::barred(&ks)
        } else {
            let mut ks = alloc::vec![1, self.ks[0] + 1];
            ks.extend_from_slice(&self.ks[1..]);
            Word::barred(&ks)
        }
    }

    /// Demotion of a promoted word: `[2 k...] -> [1̄ k...]`,
    /// `[1̄ k_1 k...] -> [k_1 k...]`.
    pub fn demote(&self) -> Option<Word> {
        assert!(self.bars[1..].iter().all(|b| !b));
        if !self.lead_barred() {
            if self.ks.first() == Some(&2) {
                let mut ks = alloc::vec![1];
                ks.extend_from_slice(&self.ks[1..]);
                Some(Word::barred(&ks))
            } else {
                None
            }
        } else if self.ks.first() == Some(&1) {
            Some(Word::plain(&self.ks[1..]))
        } else {
            None
        }
    }

    pub fn label(&self) -> String {
        let mut s = String::from("[");
        for (i, (k, bar)) in self.ks.iter().zip(self.bars.iter()).enumerate() {
            if i > 0 {
                s.push(' ');
            }
            if *bar {
                s.push_str(&format!("{}~", k));
            } else {
                s.push_str(&format!("{}", k));
            }
        }
        s.push(']');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::ExactMatrix;
    use crate::pit::Rng;

    #[test]
    fn word_validity() {
        assert!(Word::plain(&[2, 2, 2]).is_valid(4));
        assert!(!Word::plain(&[5]).is_valid(4));
        assert!(!Word::plain(&[4, 4]).is_valid(4));
        assert!(Word::barred(&[1, 2, 2]).is_valid(4));
    }

    #[test]
    fn promote_demote_commute_where_defined() {
        let words = [
            Word::plain(&[3, 2]),
            Word::plain(&[2, 2]),
            Word::barred(&[2, 3]),
            Word::barred(&[1, 2, 2]),
        ];
        for w in words {
            if let Some(d) = w.demote() {
                assert_eq!(d.promote(), w.promote().demote().unwrap(), "word {w:?}");
            }
        }
    }

    #[test]
    fn singleton_words() {
        // [n] is the full matrix; [1] is the upper-right entry; [1̄] is x_nn;
        // [n̄] is again the full matrix.
        let n = 4;
        let mut rng = Rng::seed_from(7);
        let x = crate::pit::random_matrix(&mut rng, n);
        let full = x.det().unwrap();
        assert_eq!(Word::plain(&[n]).matrix(n).instantiate(&x).det().unwrap(), full);
        assert_eq!(Word::barred(&[n]).matrix(n).instantiate(&x).det().unwrap(), full);
        assert_eq!(
            Word::plain(&[1]).matrix(n).instantiate(&x).det().unwrap(),
            x.at(1, n).clone()
        );
        assert_eq!(
            Word::barred(&[1]).matrix(n).instantiate(&x).det().unwrap(),
            x.at(n, n).clone()
        );
    }

    #[test]
    fn twos_word_is_trailing_minor_family() {
        // [2^m](X) equals the trailing 2m-minor of the alternating-row matrix.
        let n = 5;
        let mut rng = Rng::seed_from(3);
        let x = crate::pit::random_matrix(&mut rng, n);
        let f = crate::builders::f_matrix(n);
        for m in 1..=n - 1 {
            let lhs = Word::twos_then(m, &[]).matrix(n).instantiate(&x).det().unwrap();
            let rhs = f.trailing_principal(2 * m).instantiate(&x).det().unwrap();
            assert_eq!(lhs, rhs, "m={m}");
        }
    }

    #[test]
    fn barred_one_n_is_corner_times_det() {
        let n = 4;
        let mut rng = Rng::seed_from(11);
        let x: ExactMatrix = crate::pit::random_matrix(&mut rng, n);
        let w = Word::barred(&[1, n]);
        let v = w.matrix(n).instantiate(&x).det().unwrap();
        assert_eq!(v, x.at(n, 1) * &x.det().unwrap());
    }

    #[test]
    fn double_barred_words_are_trailing_blocks() {
        // [a~ b~] with a = n-i+1, b = i-j+1 matches the two-block trailing
        // submatrix family.
        let n = 5;
        let mut rng = Rng::seed_from(13);
        let x = crate::pit::random_matrix(&mut rng, n);
        for i in 2..=n {
            for j in 1..i {
                if (i, j) == (n, 1) {
                    continue;
                }
                let w = Word::new(&[n - i + 1, i - j + 1], &[true, true]);
                let lhs = w.matrix(n).instantiate(&x).det().unwrap();
                let rhs = crate::builders::k_ij(n, i, j).instantiate(&x).det().unwrap();
                assert_eq!(lhs, rhs, "i={i} j={j}");
            }
        }
    }
}
