//! Permutations and `D`-tuples of permutations.
//!
//! Internally everything is 0-based; the text format (`"2 3 1;1 2 3"` for a
//! tuple on `n = 3` with two colors) uses 1-based images.

use std::fmt;

use crate::error::{Error, Result};
use crate::partition::SetPartition;

/// Permutation of `[n]` stored as a dense image array.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Perm {
    images: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm {
            images: (0..n).collect(),
        }
    }

    /// Build from 0-based images; checks bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Perm> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::Parse(format!("not a bijection: {images:?}")));
            }
            seen[i] = true;
        }
        Ok(Perm { images })
    }

    /// Build from disjoint cycles over 0-based points.
    pub fn from_cycles(n: usize, cycles: &[Vec<usize>]) -> Perm {
        let mut images: Vec<usize> = (0..n).collect();
        for cycle in cycles {
            for (k, &v) in cycle.iter().enumerate() {
                images[v] = cycle[(k + 1) % cycle.len()];
            }
        }
        Perm { images }
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Perm {
        Perm::from_cycles(n, &[vec![a, b]])
    }

    pub fn n(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Perm { images: inv }
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "composing permutations of different n");
        Perm {
            images: (0..self.n()).map(|x| self.apply(other.apply(x))).collect(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// Disjoint cycles, each starting at its minimum, sorted by minimum.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut out = vec![];
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut cycle = vec![];
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                cycle.push(x);
                x = self.apply(x);
            }
            out.push(cycle);
        }
        out
    }

    pub fn cycle_count(&self) -> usize {
        self.cycles().len()
    }

    /// Cycle type as a descending integer partition of `n`.
    pub fn cycle_type(&self) -> Vec<usize> {
        let mut t: Vec<usize> = self.cycles().iter().map(|c| c.len()).collect();
        t.sort_unstable_by(|a, b| b.cmp(a));
        t
    }

    /// Cayley norm `|σ| = n - #σ`, the minimal number of transpositions.
    pub fn cayley_norm(&self) -> usize {
        self.n() - self.cycle_count()
    }

    /// Partition of `[n]` into cycle supports.
    pub fn cycle_partition(&self) -> SetPartition {
        SetPartition::from_blocks(self.n(), &self.cycles())
    }

    /// Restriction to a stable subset `s` (must satisfy `σ(s) = s`),
    /// relabeled through the increasing bijection `[#s] -> s`.
    pub fn restrict(&self, s: &[usize]) -> Perm {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        let pos = |v: usize| sorted.binary_search(&v).expect("subset not stable");
        Perm {
            images: sorted.iter().map(|&x| pos(self.apply(x))).collect(),
        }
    }

    /// Relabel through increasing bijections `from -> [k] -> to`:
    /// requires `σ(from) = to` setwise.
    pub fn restrict_between(&self, from: &[usize], to: &[usize]) -> Perm {
        let mut f = from.to_vec();
        f.sort_unstable();
        let mut t = to.to_vec();
        t.sort_unstable();
        assert_eq!(f.len(), t.len());
        Perm {
            images: f
                .iter()
                .map(|&x| {
                    t.binary_search(&self.apply(x))
                        .expect("image outside target block")
                })
                .collect(),
        }
    }

    pub fn parse(text: &str) -> Result<Perm> {
        let images: Vec<usize> = text
            .split_whitespace()
            .map(|w| {
                w.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad image `{w}`")))
                    .and_then(|v| {
                        v.checked_sub(1)
                            .ok_or_else(|| Error::Parse("images are 1-based".into()))
                    })
            })
            .collect::<Result<_>>()?;
        if images.is_empty() {
            return Err(Error::Parse("empty permutation".into()));
        }
        Perm::from_images(images)
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.images.iter().map(|&v| (v + 1).to_string()).collect();
        write!(f, "{}", words.join(" "))
    }
}

/// Element of `S_n^D`: one permutation per color.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PermTuple {
    components: Vec<Perm>,
}

impl PermTuple {
    pub fn new(components: Vec<Perm>) -> Result<PermTuple> {
        if components.is_empty() {
            return Err(Error::ShapeMismatch("a tuple needs at least one color".into()));
        }
        let n = components[0].n();
        if components.iter().any(|p| p.n() != n) {
            return Err(Error::ShapeMismatch("components of different n".into()));
        }
        Ok(PermTuple { components })
    }

    pub fn identity(n: usize, d: usize) -> PermTuple {
        PermTuple {
            components: vec![Perm::identity(n); d],
        }
    }

    /// Broadcast a single permutation to all colors: `(η, ..., η)`.
    pub fn broadcast(eta: &Perm, d: usize) -> PermTuple {
        PermTuple {
            components: vec![eta.clone(); d],
        }
    }

    pub fn n(&self) -> usize {
        self.components[0].n()
    }

    pub fn d(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &Perm {
        &self.components[c]
    }

    pub fn components(&self) -> &[Perm] {
        &self.components
    }

    /// `#σ⃗ = Σ_c #σ_c`.
    pub fn cycle_count(&self) -> usize {
        self.components.iter().map(|p| p.cycle_count()).sum()
    }

    /// `|σ⃗| = Σ_c |σ_c|`.
    pub fn cayley_norm(&self) -> usize {
        self.components.iter().map(|p| p.cayley_norm()).sum()
    }

    pub fn is_identity(&self) -> bool {
        self.components.iter().all(|p| p.is_identity())
    }

    /// True when every color carries the same permutation.
    pub fn constant_value(&self) -> Option<&Perm> {
        let first = &self.components[0];
        if self.components.iter().all(|p| p == first) {
            Some(first)
        } else {
            None
        }
    }

    /// Color-wise composition.
    pub fn compose(&self, other: &PermTuple) -> PermTuple {
        assert_eq!(self.d(), other.d());
        PermTuple {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a.compose(b))
                .collect(),
        }
    }

    /// Color-wise composition with a broadcast permutation on the right.
    pub fn compose_perm(&self, eta: &Perm) -> PermTuple {
        PermTuple {
            components: self.components.iter().map(|p| p.compose(eta)).collect(),
        }
    }

    pub fn inverse(&self) -> PermTuple {
        PermTuple {
            components: self.components.iter().map(|p| p.inverse()).collect(),
        }
    }

    /// `η σ⃗ η^{-1}` color-wise.
    pub fn conjugate(&self, eta: &Perm) -> PermTuple {
        let inv = eta.inverse();
        PermTuple {
            components: self
                .components
                .iter()
                .map(|p| eta.compose(p).compose(&inv))
                .collect(),
        }
    }

    /// Restriction of every color to a block stable under all of them.
    pub fn restrict(&self, s: &[usize]) -> PermTuple {
        PermTuple {
            components: self.components.iter().map(|p| p.restrict(s)).collect(),
        }
    }

    pub fn parse(text: &str) -> Result<PermTuple> {
        let components: Vec<Perm> = text
            .split(';')
            .map(Perm::parse)
            .collect::<Result<_>>()?;
        PermTuple::new(components)
    }
}

impl fmt::Display for PermTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let words: Vec<String> = self.components.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", words.join(";"))
    }
}

/// Cayley distance `d(σ, ρ) = |σ ρ^{-1}|`.
pub fn distance(sigma: &Perm, rho: &Perm) -> usize {
    sigma.compose(&rho.inverse()).cayley_norm()
}

/// `d(σ⃗, ρ⃗) = Σ_c d(σ_c, ρ_c)`.
pub fn distance_tuple(sigma: &PermTuple, rho: &PermTuple) -> usize {
    assert_eq!(sigma.d(), rho.d(), "distance needs equal color counts");
    sigma
        .components()
        .iter()
        .zip(rho.components())
        .map(|(a, b)| distance(a, b))
        .sum()
}

/// `d(σ⃗, η)` with `η` broadcast to every color (explicit at call sites).
pub fn distance_to_perm(sigma: &PermTuple, eta: &Perm) -> usize {
    sigma.components().iter().map(|a| distance(a, eta)).sum()
}

/// Genus from Euler's relation:
/// `#(στ^{-1}) + #σ + #τ - n = 2 K(σ,τ) - 2 g(σ,τ)`.
pub fn genus(sigma: &Perm, tau: &Perm) -> i64 {
    let k = sigma
        .cycle_partition()
        .join(&tau.cycle_partition())
        .num_blocks() as i64;
    let euler = sigma.compose(&tau.inverse()).cycle_count() as i64
        + sigma.cycle_count() as i64
        + tau.cycle_count() as i64
        - sigma.n() as i64;
    debug_assert_eq!(euler.rem_euclid(2), (2 * k).rem_euclid(2));
    k - euler / 2
}

/// `τ ⪯ σ`: the triangle inequality through `τ` is an equality.
pub fn preceq(tau: &Perm, sigma: &Perm) -> bool {
    tau.cayley_norm() + distance(tau, sigma) == sigma.cayley_norm()
}

/// `τ⃗ ⪯ σ⃗` color-wise.
pub fn preceq_tuple(tau: &PermTuple, sigma: &PermTuple) -> bool {
    tau.components()
        .iter()
        .zip(sigma.components())
        .all(|(t, s)| preceq(t, s))
}

/// Deterministic lexicographic enumeration of `S_n`.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = vec![];
    let mut current: Vec<usize> = (0..n).collect();
    loop {
        out.push(Perm {
            images: current.clone(),
        });
        // next lexicographic permutation
        let Some(i) = (0..n.saturating_sub(1)).rev().find(|&i| current[i] < current[i + 1]) else {
            break;
        };
        let j = (i + 1..n).rev().find(|&j| current[j] > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// Deterministic enumeration of `S_n^D` (lexicographic in the color-major
/// sequence of images).
pub fn all_perm_tuples(n: usize, d: usize) -> Vec<PermTuple> {
    let perms = all_perms(n);
    let mut out = vec![];
    let mut idx = vec![0usize; d];
    loop {
        out.push(PermTuple {
            components: idx.iter().map(|&i| perms[i].clone()).collect(),
        });
        let mut c = d;
        loop {
            if c == 0 {
                return out;
            }
            c -= 1;
            idx[c] += 1;
            if idx[c] < perms.len() {
                break;
            }
            idx[c] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_ops_examples() {
        let id3 = Perm::identity(3);
        assert_eq!(id3.cycles(), vec![vec![0], vec![1], vec![2]]);
        assert_eq!(id3.cycle_count(), 3);
        assert_eq!(id3.cayley_norm(), 0);

        let t = Perm::from_cycles(3, &[vec![0, 1]]);
        assert_eq!(t.cycle_count(), 2);
        assert_eq!(t.cayley_norm(), 1);

        let c = Perm::from_cycles(3, &[vec![0, 1, 2]]);
        assert_eq!(c.cycle_count(), 1);
        assert_eq!(c.cayley_norm(), 2);

        // compose applies the right factor first
        let st = t.compose(&c); // (0 1)(0 1 2): 0->1->0? apply c then t
        assert_eq!(st.apply(0), 0);
        assert_eq!(st.apply(1), 2);
        assert_eq!(st.apply(2), 1);
        assert!(c.compose(&c.inverse()).is_identity());
    }

    #[test]
    fn parse_display_round_trip() {
        let t = PermTuple::parse("2 3 1;1 2 3").unwrap();
        assert_eq!(t.n(), 3);
        assert_eq!(t.d(), 2);
        assert_eq!(t.component(0), &Perm::from_cycles(3, &[vec![0, 1, 2]]));
        assert!(t.component(1).is_identity());
        assert_eq!(t.to_string(), "2 3 1;1 2 3");
        assert!(PermTuple::parse("2 3 1;1 2").is_err());
        assert!(Perm::parse("1 1 2").is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(4).len(), 24);
        assert_eq!(all_perm_tuples(2, 2).len(), 4);
        assert_eq!(all_perm_tuples(3, 2).len(), 36);
        // lexicographic and duplicate-free
        let perms = all_perms(4);
        let mut sorted = perms.clone();
        sorted.sort();
        sorted.dedup();
        assert_eq!(perms, sorted);
    }

    #[test]
    fn restriction_relabels() {
        // (0 2)(1) restricted to {0, 2} is the transposition of [2]
        let p = Perm::from_cycles(3, &[vec![0, 2]]);
        let r = p.restrict(&[0, 2]);
        assert_eq!(r, Perm::from_cycles(2, &[vec![0, 1]]));
    }

    #[test]
    fn distance_examples() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]);
        let t = PermTuple::new(vec![c3.clone(), c3.clone()]).unwrap();
        assert_eq!(distance_tuple(&t, &t), 0);
        assert_eq!(distance(&Perm::identity(2), &Perm::from_cycles(2, &[vec![0, 1]])), 1);
        // D = 2 broadcast example: d(((1 2 3),(1 2 3)), id) = 4
        assert_eq!(distance_to_perm(&t, &Perm::identity(3)), 4);
    }

    #[test]
    fn genus_examples() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]);
        let t12 = Perm::from_cycles(3, &[vec![0, 1]]);
        let c3_rev = Perm::from_cycles(3, &[vec![0, 2, 1]]);
        assert_eq!(genus(&c3, &c3), 0);
        assert_eq!(genus(&c3, &t12), 0);
        assert_eq!(genus(&c3, &c3_rev), 1);
    }

    #[test]
    fn preceq_examples() {
        let c3 = Perm::from_cycles(3, &[vec![0, 1, 2]]);
        let t12 = Perm::from_cycles(3, &[vec![0, 1]]);
        let tup = PermTuple::new(vec![c3.clone()]).unwrap();
        assert!(preceq_tuple(&PermTuple::identity(3, 1), &tup));
        assert!(preceq(&t12, &c3));
        assert!(!preceq(&c3, &t12));
    }

    #[test]
    fn preceq_matches_genus_characterization() {
        // τ ⪯ σ  iff  g(σ, τ) = 0 and Π(τ) ≤ Π(σ), exhaustively for n ≤ 4
        for n in 1..=4usize {
            for sigma in all_perms(n) {
                for tau in all_perms(n) {
                    let lhs = preceq(&tau, &sigma);
                    let rhs = genus(&sigma, &tau) == 0
                        && tau.cycle_partition().leq(&sigma.cycle_partition());
                    assert_eq!(lhs, rhs, "σ={sigma} τ={tau}");
                }
            }
        }
    }

    #[test]
    fn triangle_defect_is_genus_sum() {
        // d(σ⃗,τ⃗) + d(τ⃗,id) - d(id,σ⃗) = 2 Σ_c (g(σ_c,τ_c) + #σ_c - K(σ_c,τ_c)),
        // for n ≤ 3 here (n = 4, D = 2 is covered in the acceptance sweep)
        for n in 1..=3usize {
            let id = PermTuple::identity(n, 2);
            for s0 in all_perms(n) {
                for s1 in all_perms(n) {
                    let sigma = PermTuple::new(vec![s0.clone(), s1.clone()]).unwrap();
                    for t0 in all_perms(n) {
                        for t1 in all_perms(n) {
                            let tau = PermTuple::new(vec![t0.clone(), t1.clone()]).unwrap();
                            let lhs = distance_tuple(&sigma, &tau) as i64
                                + distance_tuple(&tau, &id) as i64
                                - distance_tuple(&id, &sigma) as i64;
                            let rhs: i64 = sigma
                                .components()
                                .iter()
                                .zip(tau.components())
                                .map(|(s, t)| {
                                    let k = s
                                        .cycle_partition()
                                        .join(&t.cycle_partition())
                                        .num_blocks() as i64;
                                    2 * (genus(s, t) + s.cycle_count() as i64 - k)
                                })
                                .sum();
                            assert_eq!(lhs, rhs);
                        }
                    }
                }
            }
        }
    }
}
