//! Set partitions of `[n]`, pure partitions of `[n] ∪ [n̄]`, their lattice
//! operations, Moebius functions and the non-negative quantities `L`, `L_D`.
//!
//! A barred element `k̄` is encoded internally as `n + k` (0-based). The text
//! form writes it `k*` (1-based), blocks separated by `|`: `{1,2*|2,1*}`.

use std::fmt;

use crate::error::{Error, Result};
use crate::perm::{Perm, PermTuple};

/// Partition of a ground set `[size]`, canonicalized as a restricted-growth
/// labeling (block ids in order of first appearance).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SetPartition {
    size: usize,
    block_id: Vec<usize>,
}

impl SetPartition {
    pub fn singletons(size: usize) -> SetPartition {
        SetPartition {
            size,
            block_id: (0..size).collect(),
        }
    }

    pub fn full(size: usize) -> SetPartition {
        SetPartition {
            size,
            block_id: vec![0; size],
        }
    }

    pub fn from_block_ids(ids: Vec<usize>) -> SetPartition {
        let size = ids.len();
        let max_id = ids.iter().max().copied().unwrap_or(0);
        let mut relabel = vec![usize::MAX; max_id + 1];
        let mut next = 0;
        let mut block_id = vec![0; size];
        for (i, &b) in ids.iter().enumerate() {
            if relabel[b] == usize::MAX {
                relabel[b] = next;
                next += 1;
            }
            block_id[i] = relabel[b];
        }
        SetPartition { size, block_id }
    }

    pub fn from_blocks(size: usize, blocks: &[Vec<usize>]) -> SetPartition {
        let mut ids = vec![usize::MAX; size];
        for (b, block) in blocks.iter().enumerate() {
            for &x in block {
                assert!(ids[x] == usize::MAX, "blocks overlap at {x}");
                ids[x] = b;
            }
        }
        assert!(ids.iter().all(|&b| b != usize::MAX), "blocks do not cover");
        SetPartition::from_block_ids(ids)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_id[x]
    }

    pub fn num_blocks(&self) -> usize {
        self.block_id.iter().max().map_or(0, |m| m + 1)
    }

    /// Blocks as sorted lists, ordered by first element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![vec![]; self.num_blocks()];
        for (i, &b) in self.block_id.iter().enumerate() {
            out[b].push(i);
        }
        out
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.block_id[x] == self.block_id[y]
    }

    /// Finer-or-equal: every block of `self` lies inside a block of `other`.
    pub fn leq(&self, other: &SetPartition) -> bool {
        assert_eq!(self.size, other.size, "partition ground sets differ");
        let mut target = vec![usize::MAX; self.num_blocks()];
        for i in 0..self.size {
            let b = self.block_id[i];
            if target[b] == usize::MAX {
                target[b] = other.block_id[i];
            } else if target[b] != other.block_id[i] {
                return false;
            }
        }
        true
    }

    pub fn join(&self, other: &SetPartition) -> SetPartition {
        assert_eq!(self.size, other.size, "partition ground sets differ");
        let mut uf = UnionFind::new(self.size);
        for p in [self, other] {
            let blocks = p.blocks();
            for block in blocks {
                for w in block.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        uf.into_partition()
    }

    /// Restriction to `s`, which must be a union of blocks; ground set is
    /// relabeled through the increasing bijection `[#s] -> s`.
    pub fn restrict(&self, s: &[usize]) -> SetPartition {
        let mut sorted = s.to_vec();
        sorted.sort_unstable();
        let ids: Vec<usize> = sorted.iter().map(|&x| self.block_id[x]).collect();
        SetPartition::from_block_ids(ids)
    }

    /// Moebius function of the partition lattice from `self` to the full
    /// partition: `(-1)^{#-1} (#-1)!`.
    pub fn moebius(&self) -> i64 {
        let k = self.num_blocks();
        let sign = if (k - 1) % 2 == 0 { 1 } else { -1 };
        sign * factorial_i64(k - 1)
    }

    /// All partitions coarser than or equal to `self`, in deterministic order.
    pub fn coarsenings(&self) -> Vec<SetPartition> {
        let k = self.num_blocks();
        all_partitions(k)
            .into_iter()
            .map(|grouping| {
                let ids: Vec<usize> = self
                    .block_id
                    .iter()
                    .map(|&b| grouping.block_of(b))
                    .collect();
                SetPartition::from_block_ids(ids)
            })
            .collect()
    }

    pub fn parse(text: &str) -> Result<SetPartition> {
        let (size, blocks) = parse_blocks(text, false)?;
        Ok(SetPartition::from_blocks(size, &blocks))
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_blocks(&self.blocks(), self.size, false))
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, x: usize, y: usize) {
        let (rx, ry) = (self.find(x), self.find(y));
        if rx != ry {
            self.parent[rx.max(ry)] = rx.min(ry);
        }
    }

    fn into_partition(mut self) -> SetPartition {
        let ids: Vec<usize> = (0..self.parent.len()).map(|x| self.find(x)).collect();
        SetPartition::from_block_ids(ids)
    }
}

fn factorial_i64(k: usize) -> i64 {
    (1..=k as i64).product()
}

/// All partitions of `[n]` as restricted-growth strings, lexicographic.
pub fn all_partitions(n: usize) -> Vec<SetPartition> {
    if n == 0 {
        return vec![SetPartition::singletons(0)];
    }
    let mut out = vec![];
    let mut rgs = vec![0usize; n];
    loop {
        out.push(SetPartition::from_block_ids(rgs.clone()));
        // next restricted-growth string
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            let max_prefix = rgs[..i].iter().max().copied().unwrap();
            if rgs[i] <= max_prefix {
                rgs[i] += 1;
                for r in rgs.iter_mut().skip(i + 1) {
                    *r = 0;
                }
                break;
            }
        }
    }
}

/// Partition of `[n] ∪ [n̄]` with every block balanced between the two sides.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct PurePartition {
    n: usize,
    part: SetPartition,
}

impl PurePartition {
    /// Wrap a partition of `[2n]`; fails if some block is unbalanced.
    pub fn new(n: usize, part: SetPartition) -> Result<PurePartition> {
        assert_eq!(part.size(), 2 * n);
        for block in part.blocks() {
            let unbarred = block.iter().filter(|&&x| x < n).count();
            if 2 * unbarred != block.len() {
                return Err(Error::Precondition(format!(
                    "unbalanced block in pure partition: {block:?}"
                )));
            }
        }
        Ok(PurePartition { n, part })
    }

    pub fn full(n: usize) -> PurePartition {
        PurePartition {
            n,
            part: SetPartition::full(2 * n),
        }
    }

    /// `Π_p(σ)`: the pairing `{i, σ(i)*}`.
    pub fn of_perm(sigma: &Perm) -> PurePartition {
        let n = sigma.n();
        let mut ids = vec![0; 2 * n];
        for i in 0..n {
            ids[i] = i;
            ids[n + sigma.apply(i)] = i;
        }
        PurePartition {
            n,
            part: SetPartition::from_block_ids(ids),
        }
    }

    /// `Π_p(σ⃗) = ∨_c Π_p(σ_c)`.
    pub fn of_tuple(sigma: &PermTuple) -> PurePartition {
        let mut acc = PurePartition::of_perm(sigma.component(0));
        for c in 1..sigma.d() {
            acc = acc.join(&PurePartition::of_perm(sigma.component(c)));
        }
        acc
    }

    /// `Π_p(σ⃗, η) = Π_p(σ⃗) ∨ Π_p(η)`.
    pub fn of_tuple_and_perm(sigma: &PermTuple, eta: &Perm) -> PurePartition {
        PurePartition::of_tuple(sigma).join(&PurePartition::of_perm(eta))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partition(&self) -> &SetPartition {
        &self.part
    }

    pub fn num_blocks(&self) -> usize {
        self.part.num_blocks()
    }

    pub fn moebius(&self) -> i64 {
        self.part.moebius()
    }

    pub fn leq(&self, other: &PurePartition) -> bool {
        self.part.leq(&other.part)
    }

    pub fn join(&self, other: &PurePartition) -> PurePartition {
        PurePartition {
            n: self.n,
            part: self.part.join(&other.part),
        }
    }

    /// Join with a partition of `[n]` adjoined by barred singletons
    /// (coarser than a pure partition, so the result stays pure).
    pub fn join_unbarred(&self, pi: &SetPartition) -> PurePartition {
        assert_eq!(pi.size(), self.n);
        let mut ids = Vec::with_capacity(2 * self.n);
        ids.extend(pi.block_id.iter().copied());
        let base = pi.num_blocks();
        ids.extend((0..self.n).map(|i| base + i));
        let adjoined = SetPartition::from_block_ids(ids);
        PurePartition {
            n: self.n,
            part: self.part.join(&adjoined),
        }
    }

    /// `Π_[n] = {S ∩ [n]}` as a partition of `[n]`.
    pub fn restrict_unbarred(&self) -> SetPartition {
        SetPartition::from_block_ids(self.part.block_id[..self.n].to_vec())
    }

    /// `{S ∩ [n̄]}` with bars dropped, as a partition of `[n]`. This is the
    /// side stabilized by products like `σ_c τ_c^{-1}` when both factors map
    /// block to block.
    pub fn restrict_barred(&self) -> SetPartition {
        SetPartition::from_block_ids(self.part.block_id[self.n..].to_vec())
    }

    /// Blocks paired as `(B, B')` with `B = S ∩ [n]` and `B'` the unbarred
    /// copy of `S ∩ [n̄]`, ordered by the smallest element of `B`.
    pub fn paired_blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        self.part
            .blocks()
            .into_iter()
            .map(|block| {
                let b: Vec<usize> = block.iter().copied().filter(|&x| x < self.n).collect();
                let bp: Vec<usize> = block
                    .iter()
                    .copied()
                    .filter(|&x| x >= self.n)
                    .map(|x| x - self.n)
                    .collect();
                (b, bp)
            })
            .collect()
    }

    /// Coarser-or-equal pure partitions (all coarsenings of a pure partition
    /// are pure).
    pub fn coarsenings(&self) -> Vec<PurePartition> {
        self.part
            .coarsenings()
            .into_iter()
            .map(|part| PurePartition { n: self.n, part })
            .collect()
    }

    pub fn parse(text: &str) -> Result<PurePartition> {
        let (size, blocks) = parse_blocks(text, true)?;
        if size % 2 != 0 {
            return Err(Error::Parse("pure partition must cover [n] ∪ [n̄]".into()));
        }
        PurePartition::new(size / 2, SetPartition::from_blocks(size, &blocks))
    }
}

impl fmt::Display for PurePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", display_blocks(&self.part.blocks(), self.n, true))
    }
}

/// All pure partitions of `[n] ∪ [n̄]` (filtering partitions of `[2n]` by
/// balance); guarded for small `n` only.
pub fn all_pure_partitions(n: usize) -> Result<Vec<PurePartition>> {
    if n > 4 {
        return Err(Error::CapExceeded(format!(
            "pure-partition enumeration capped at n = 4, got {n}"
        )));
    }
    Ok(all_partitions(2 * n)
        .into_iter()
        .filter_map(|p| PurePartition::new(n, p).ok())
        .collect())
}

/// Restrict a tuple to one block `(B, B')` of a pure partition coarser than
/// `Π_p(σ⃗)`: every color maps `B` onto `B'` and is relabeled through the
/// increasing bijections.
pub fn pure_restrict_tuple(sigma: &PermTuple, block: &(Vec<usize>, Vec<usize>)) -> PermTuple {
    let comps: Vec<Perm> = sigma
        .components()
        .iter()
        .map(|p| p.restrict_between(&block.0, &block.1))
        .collect();
    PermTuple::new(comps).expect("restriction keeps shape")
}

/// `L[π, π'; π̃] = #π̃ - #π - #π' + #(π ∨ π') ≥ 0` for `π̃ ≤ π` and `π̃ ≤ π'`.
pub fn l_quantity(pi: &SetPartition, pi_prime: &SetPartition, pi_tilde: &SetPartition) -> Result<i64> {
    if !pi_tilde.leq(pi) || !pi_tilde.leq(pi_prime) {
        return Err(Error::Precondition("L requires π̃ ≤ π and π̃ ≤ π'".into()));
    }
    Ok(pi_tilde.num_blocks() as i64 - pi.num_blocks() as i64 - pi_prime.num_blocks() as i64
        + pi.join(pi_prime).num_blocks() as i64)
}

/// `L_D[{π_c}, π'; {π̃_c}] = Σ_c (#π̃_c - #π_c) - #π' + #(π' ∨ π_1 ∨ … ∨ π_D) ≥ 0`
/// for `π̃_c ≤ π_c` and `π̃_c ≤ π'`.
pub fn l_d_quantity(
    pis: &[SetPartition],
    pi_prime: &SetPartition,
    pi_tildes: &[SetPartition],
) -> Result<i64> {
    if pis.len() != pi_tildes.len() {
        return Err(Error::ShapeMismatch("L_D needs matching color counts".into()));
    }
    let mut sum = 0i64;
    let mut join = pi_prime.clone();
    for (pi, tilde) in pis.iter().zip(pi_tildes) {
        if !tilde.leq(pi) || !tilde.leq(pi_prime) {
            return Err(Error::Precondition(
                "L_D requires π̃_c ≤ π_c and π̃_c ≤ π'".into(),
            ));
        }
        sum += tilde.num_blocks() as i64 - pi.num_blocks() as i64;
        join = join.join(pi);
    }
    Ok(sum - pi_prime.num_blocks() as i64 + join.num_blocks() as i64)
}

fn display_blocks(blocks: &[Vec<usize>], n: usize, pure: bool) -> String {
    let show = |x: usize| -> String {
        if pure && x >= n {
            format!("{}*", x - n + 1)
        } else {
            format!("{}", x + 1)
        }
    };
    let parts: Vec<String> = blocks
        .iter()
        .map(|b| b.iter().map(|&x| show(x)).collect::<Vec<_>>().join(","))
        .collect();
    format!("{{{}}}", parts.join("|"))
}

fn parse_blocks(text: &str, pure: bool) -> Result<(usize, Vec<Vec<usize>>)> {
    let inner = text
        .trim()
        .strip_prefix('{')
        .and_then(|t| t.strip_suffix('}'))
        .ok_or_else(|| Error::Parse("partition must be wrapped in braces".into()))?;
    let mut raw: Vec<Vec<(usize, bool)>> = vec![];
    for block in inner.split('|') {
        let mut elems = vec![];
        for tok in block.split(',') {
            let tok = tok.trim();
            if tok.is_empty() {
                return Err(Error::Parse("empty element in partition".into()));
            }
            let (digits, barred) = match tok.strip_suffix('*') {
                Some(d) => (d, true),
                None => (tok, false),
            };
            if barred && !pure {
                return Err(Error::Parse("barred element in a plain partition".into()));
            }
            let v: usize = digits
                .parse()
                .map_err(|_| Error::Parse(format!("bad element `{tok}`")))?;
            if v == 0 {
                return Err(Error::Parse("elements are 1-based".into()));
            }
            elems.push((v - 1, barred));
        }
        raw.push(elems);
    }
    let n = raw
        .iter()
        .flatten()
        .map(|&(v, _)| v + 1)
        .max()
        .ok_or_else(|| Error::Parse("empty partition".into()))?;
    let blocks: Vec<Vec<usize>> = raw
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|(v, barred)| if barred { n + v } else { v })
                .collect()
        })
        .collect();
    let size = if pure { 2 * n } else { n };
    Ok((size, blocks))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perms;

    #[test]
    fn counts_are_bell_numbers() {
        assert_eq!(all_partitions(1).len(), 1);
        assert_eq!(all_partitions(2).len(), 2);
        assert_eq!(all_partitions(3).len(), 5);
        assert_eq!(all_partitions(4).len(), 15);
        assert_eq!(all_partitions(5).len(), 52);
    }

    #[test]
    fn moebius_examples() {
        assert_eq!(SetPartition::full(4).moebius(), 1);
        assert_eq!(SetPartition::singletons(3).moebius(), 2);
        assert_eq!(SetPartition::singletons(2).moebius(), -1);
    }

    #[test]
    fn moebius_inversion() {
        // Σ_{π1 ≤ π ≤ π2} Π_{S ∈ π2} μ_{π|S} = δ_{π1,π2}, n ≤ 4
        for n in 1..=4usize {
            let parts = all_partitions(n);
            for p1 in &parts {
                for p2 in &parts {
                    if !p1.leq(p2) {
                        continue;
                    }
                    let mut total = 0i64;
                    for p in &parts {
                        if p1.leq(p) && p.leq(p2) {
                            let mut term = 1i64;
                            for s in p2.blocks() {
                                term *= p.restrict(&s).moebius();
                            }
                            total += term;
                        }
                    }
                    assert_eq!(total, if p1 == p2 { 1 } else { 0 });
                }
            }
        }
    }

    #[test]
    fn pure_moebius_sum() {
        // Σ_{Π ≥ Π'} μ_Π = δ_{Π', 1}, over pure partitions, n ≤ 3
        for n in 1..=3usize {
            for p in all_pure_partitions(n).unwrap() {
                let total: i64 = p.coarsenings().iter().map(|q| q.moebius()).sum();
                assert_eq!(total, if p == PurePartition::full(n) { 1 } else { 0 });
            }
        }
    }

    #[test]
    fn join_and_restriction() {
        let p = SetPartition::from_blocks(4, &[vec![0, 1], vec![2], vec![3]]);
        let q = SetPartition::from_blocks(4, &[vec![0], vec![1, 2], vec![3]]);
        let j = p.join(&q);
        assert_eq!(j, SetPartition::from_blocks(4, &[vec![0, 1, 2], vec![3]]));
        assert!(p.leq(&j) && q.leq(&j));
        assert_eq!(SetPartition::singletons(3).join(&p.restrict(&[0, 1, 2])), p.restrict(&[0, 1, 2]));
    }

    #[test]
    fn pure_partition_basics() {
        // Π_p(id_2) = {1,1*|2,2*}
        let id2 = Perm::identity(2);
        let p = PurePartition::of_perm(&id2);
        assert_eq!(p.to_string(), "{1,1*|2,2*}");
        assert_eq!(p.coarsenings().len(), 2);

        // D = 2 example: Π(((1 2), id)) = {{1,2}}, Π_p = full
        let t = PermTuple::new(vec![Perm::from_cycles(2, &[vec![0, 1]]), id2]).unwrap();
        let mixed = t.component(0).cycle_partition().join(&t.component(1).cycle_partition());
        assert_eq!(mixed, SetPartition::full(2));
        assert_eq!(PurePartition::of_tuple(&t), PurePartition::full(2));

        // bijection with η = id maps {{1,2}} to {{1,2,1*,2*}}
        let pi = SetPartition::full(2);
        let lifted = PurePartition::of_perm(&Perm::identity(2)).join_unbarred(&pi);
        assert_eq!(lifted, PurePartition::full(2));
    }

    #[test]
    fn restrict_unbarred_example() {
        let p = PurePartition::parse("{1,2,1*,2*}").unwrap();
        assert_eq!(p.restrict_unbarred(), SetPartition::full(2));
        let q = PurePartition::parse("{1,2*|2,1*}").unwrap();
        assert_eq!(q.restrict_unbarred(), SetPartition::singletons(2));
        // unbalanced blocks are rejected
        assert!(PurePartition::parse("{1,2|1*,2*}").is_err());
        assert!(PurePartition::parse("{1,1*|2,2*}").is_ok());
    }

    #[test]
    fn pure_partition_counts() {
        // K_p(σ⃗, η) = K(σ⃗ η^{-1}) for all σ⃗, η with n ≤ 4 (D = 1 here,
        // exhaustive over pairs; tuples are covered in the engine tests)
        for n in 1..=4usize {
            for sigma in all_perms(n) {
                for eta in all_perms(n) {
                    let t = PermTuple::new(vec![sigma.clone()]).unwrap();
                    let kp = PurePartition::of_tuple_and_perm(&t, &eta).num_blocks();
                    let k = sigma.compose(&eta.inverse()).cycle_count();
                    assert_eq!(kp, k);
                }
            }
        }
    }

    #[test]
    fn l_quantities() {
        let n = 4;
        let parts = all_partitions(n);
        // L(π, π; π) = 0 and L ≥ 0 on all valid inputs
        for p in &parts {
            assert_eq!(l_quantity(p, p, p).unwrap(), 0);
        }
        assert_eq!(
            l_quantity(
                &SetPartition::singletons(n),
                &SetPartition::singletons(n),
                &SetPartition::singletons(n)
            )
            .unwrap(),
            0
        );
        for p in &parts {
            for q in &parts {
                for t in &parts {
                    if t.leq(p) && t.leq(q) {
                        assert!(l_quantity(p, q, t).unwrap() >= 0);
                    }
                }
            }
        }
        // precondition violation
        let fine = SetPartition::singletons(2);
        let coarse = SetPartition::full(2);
        assert!(l_quantity(&fine, &fine, &coarse).is_err());
    }

    #[test]
    fn l_d_nonnegative() {
        let n = 3;
        let parts = all_partitions(n);
        for p1 in &parts {
            for p2 in &parts {
                for q in &parts {
                    for t1 in &parts {
                        for t2 in &parts {
                            if t1.leq(p1) && t1.leq(q) && t2.leq(p2) && t2.leq(q) {
                                let v = l_d_quantity(
                                    &[p1.clone(), p2.clone()],
                                    q,
                                    &[t1.clone(), t2.clone()],
                                )
                                .unwrap();
                                assert!(v >= 0);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn parse_display_round_trip() {
        for text in ["{1,2|3}", "{1,2*|2,1*}", "{1,2,1*,2*}"] {
            if text.contains('*') {
                let p = PurePartition::parse(text).unwrap();
                assert_eq!(PurePartition::parse(&p.to_string()).unwrap(), p);
            } else {
                let p = SetPartition::parse(text).unwrap();
                assert_eq!(SetPartition::parse(&p.to_string()).unwrap(), p);
            }
        }
    }
}
