//! Independent verification oracles.
//!
//! The free-probability oracle computes mixed moments of two free variables
//! from their individual moment sequences using only linearity and the
//! vanishing of alternating centered products. It shares no code with the
//! forest/Weingarten machinery it is used to check.

use std::collections::HashMap;

use num_rational::BigRational;
use num_traits::{One, Zero};

/// Letter of a two-variable word.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

/// A factor `letter^power`, optionally centered (`x - φ(x)`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Factor {
    letter: Letter,
    power: usize,
    centered: bool,
}

/// Two free variables given by their moment sequences (`moments[k]` is the
/// `k`-th moment, `moments[0] = 1`).
pub struct FreePair {
    a_moments: Vec<BigRational>,
    b_moments: Vec<BigRational>,
    memo: std::cell::RefCell<HashMap<Vec<Factor>, BigRational>>,
}

impl FreePair {
    pub fn new(a_moments: Vec<BigRational>, b_moments: Vec<BigRational>) -> FreePair {
        FreePair {
            a_moments,
            b_moments,
            memo: std::cell::RefCell::new(HashMap::new()),
        }
    }

    fn moment(&self, letter: Letter, power: usize) -> BigRational {
        let table = match letter {
            Letter::A => &self.a_moments,
            Letter::B => &self.b_moments,
        };
        table
            .get(power)
            .cloned()
            .unwrap_or_else(|| panic!("moment of order {power} not provided"))
    }

    /// `φ(x₁ x₂ ⋯)` for a word over the two letters.
    pub fn word_moment(&self, word: &[(Letter, usize)]) -> BigRational {
        let factors: Vec<Factor> = word
            .iter()
            .filter(|&&(_, p)| p > 0)
            .map(|&(letter, power)| Factor {
                letter,
                power,
                centered: false,
            })
            .collect();
        self.eval(&normalize(factors))
    }

    fn eval(&self, word: &[Factor]) -> BigRational {
        if word.is_empty() {
            return BigRational::one();
        }
        if let Some(hit) = self.memo.borrow().get(word) {
            return hit.clone();
        }
        let value = self.eval_uncached(word);
        self.memo.borrow_mut().insert(word.to_vec(), value.clone());
        value
    }

    fn eval_uncached(&self, word: &[Factor]) -> BigRational {
        // expand the first non-centered factor: x = (x - φ(x)) + φ(x)
        if let Some(i) = word.iter().position(|f| !f.centered) {
            let m = self.moment(word[i].letter, word[i].power);
            let mut with_centered = word.to_vec();
            with_centered[i].centered = true;
            let mut dropped: Vec<Factor> = word.to_vec();
            dropped.remove(i);
            return self.eval(&normalize(with_centered)) + m * self.eval(&normalize(dropped));
        }
        // all centered: merge a same-letter adjacency if any
        if let Some(i) = (0..word.len().saturating_sub(1))
            .find(|&i| word[i].letter == word[i + 1].letter)
        {
            // (x^p - m_p)(x^q - m_q)
            //   = x^{p+q} - m_p x^q - m_q x^p + m_p m_q
            let (p, q) = (word[i].power, word[i + 1].power);
            let letter = word[i].letter;
            let mp = self.moment(letter, p);
            let mq = self.moment(letter, q);
            let rest_before = &word[..i];
            let rest_after = &word[i + 2..];
            let build = |mid: Option<Factor>| -> Vec<Factor> {
                let mut out = rest_before.to_vec();
                if let Some(f) = mid {
                    out.push(f);
                }
                out.extend_from_slice(rest_after);
                out
            };
            let merged = build(Some(Factor {
                letter,
                power: p + q,
                centered: false,
            }));
            let only_q = build(Some(Factor {
                letter,
                power: q,
                centered: false,
            }));
            let only_p = build(Some(Factor {
                letter,
                power: p,
                centered: false,
            }));
            let neither = build(None);
            return self.eval(&normalize(merged)) - mp.clone() * self.eval(&normalize(only_q))
                - mq.clone() * self.eval(&normalize(only_p))
                + mp * mq * self.eval(&normalize(neither));
        }
        // alternating centered word: zero by freeness
        BigRational::zero()
    }
}

fn normalize(word: Vec<Factor>) -> Vec<Factor> {
    // merge adjacent equal-letter non-centered factors
    let mut out: Vec<Factor> = vec![];
    for f in word {
        if f.power == 0 {
            continue;
        }
        match out.last_mut() {
            Some(last) if last.letter == f.letter && !last.centered && !f.centered => {
                last.power += f.power;
            }
            _ => out.push(f),
        }
    }
    out
}

/// Catalan-number moments of the standard semicircle (`κ₂ = 1`).
pub fn semicircle_moments(up_to: usize) -> Vec<BigRational> {
    (0..=up_to)
        .map(|k| {
            if k % 2 == 0 {
                BigRational::from_integer(crate::weingarten::catalan(k / 2).into())
            } else {
                BigRational::zero()
            }
        })
        .collect()
}

/// Moments of the free Poisson law with rate `r` (all free cumulants `r`):
/// `m_k = Σ_{π ∈ NC(k)} r^{#π}`, computed by the Catalan-style recursion
/// `m_k = r·Σ_{j=0}^{k-1} binom-free split` via non-crossing first blocks.
pub fn free_poisson_moments(r: &BigRational, up_to: usize) -> Vec<BigRational> {
    // m_k = Σ over the block of 1: choose the elements after each block
    // member; standard recursion through the auxiliary sequence:
    // m_k = Σ_{s=1}^{k} r · Π of m over the gaps. Use the generating
    // recursion m_k = Σ_{s≥1} r^s · (number of ways) — simplest correct
    // route: Motzkin-style dynamic programming over NC(k) first-block
    // decomposition: m_k = r·m_{k-1} + Σ_{j=1}^{k-1} r·m_{j-1}·c_{k-j}…
    // To stay simple and safe we enumerate NC(k) directly for small k.
    (0..=up_to)
        .map(|k| {
            if k == 0 {
                return BigRational::one();
            }
            let mut total = BigRational::zero();
            for pi in crate::partition::all_partitions(k) {
                if is_noncrossing(&pi) {
                    let mut term = BigRational::one();
                    for _ in 0..pi.num_blocks() {
                        term *= r;
                    }
                    total += term;
                }
            }
            total
        })
        .collect()
}

fn is_noncrossing(pi: &crate::partition::SetPartition) -> bool {
    let n = pi.size();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    if pi.same_block(a, c) && pi.same_block(b, d) && !pi.same_block(a, b) {
                        return false;
                    }
                }
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn semicircle_moments_are_catalan() {
        let m = semicircle_moments(6);
        assert_eq!(m[0], rat(1));
        assert_eq!(m[2], rat(1));
        assert_eq!(m[4], rat(2));
        assert_eq!(m[6], rat(5));
        assert_eq!(m[3], rat(0));
    }

    #[test]
    fn free_poisson_moments_small() {
        // r = 1: moments are Catalan numbers (Bell over NC)
        let m = free_poisson_moments(&rat(1), 4);
        assert_eq!(m, vec![rat(1), rat(1), rat(2), rat(5), rat(14)]);
        // general r: m_1 = r, m_2 = r + r², m_3 = r + 3r² + r³
        let r = BigRational::new(1.into(), 2.into());
        let m = free_poisson_moments(&r, 3);
        assert_eq!(m[1], r);
        assert_eq!(m[2], &r + &r * &r);
        assert_eq!(m[3], &r + rat(3) * &r * &r + &r * &r * &r);
    }

    #[test]
    fn oracle_reproduces_individual_moments() {
        let pair = FreePair::new(free_poisson_moments(&rat(1), 8), semicircle_moments(8));
        assert_eq!(pair.word_moment(&[(Letter::A, 3)]), rat(5));
        assert_eq!(pair.word_moment(&[(Letter::B, 4)]), rat(2));
    }

    #[test]
    fn oracle_knows_free_multiplicativity() {
        // φ(ab) = φ(a)φ(b) for free variables
        let pair = FreePair::new(free_poisson_moments(&rat(1), 8), semicircle_moments(8));
        assert_eq!(
            pair.word_moment(&[(Letter::A, 1), (Letter::B, 1)]),
            rat(1) * rat(0)
        );
        // φ(abab) = φ(a²)φ(b)² + φ(a)²φ(b²) - φ(a)²φ(b)²  (standard identity)
        let a1 = rat(1);
        let a2 = rat(2);
        let b1 = rat(0);
        let b2 = rat(1);
        let expected = &a2 * &b1 * &b1 + &a1 * &a1 * &b2 - &a1 * &a1 * &b1 * &b1;
        assert_eq!(
            pair.word_moment(&[
                (Letter::A, 1),
                (Letter::B, 1),
                (Letter::A, 1),
                (Letter::B, 1)
            ]),
            expected
        );
    }
}
