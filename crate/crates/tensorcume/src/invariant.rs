//! Colored-graph semantics of trace-invariants: connectivity, melonic
//! classification with canonical pairing, the scaling exponents `Ω`, `δ`,
//! `δ•`, `ε` with their minimizer sets, decreasing tuples, relabeling
//! canonicalization and automorphism counting.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partition::{pure_restrict_tuple, PurePartition, SetPartition};
use crate::perm::{all_perms, distance_to_perm, Perm, PermTuple};

/// Default brute-force cap on `n` (overridable through `TENSORCUME_CAP_N`).
pub fn cap_n() -> usize {
    std::env::var("TENSORCUME_CAP_N")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(6)
}

pub fn check_cap(n: usize) -> Result<()> {
    let cap = cap_n();
    if n > cap {
        return Err(Error::CapExceeded(format!(
            "n = {n} exceeds the brute-force cap {cap}"
        )));
    }
    Ok(())
}

/// Mixed connectivity data of a tuple.
pub struct Connectivity {
    pub k: usize,
    pub components: Vec<PermTuple>,
    pub k_pure: usize,
    pub pure_components: Vec<PermTuple>,
}

/// `K(σ⃗)`, mixed components, `K_p(σ⃗)`, pure components.
pub fn connectivity(sigma: &PermTuple) -> Connectivity {
    let mixed = mixed_orbit_partition(sigma);
    let components = mixed
        .blocks()
        .iter()
        .map(|b| sigma.restrict(b))
        .collect::<Vec<_>>();
    let pure = PurePartition::of_tuple(sigma);
    let pure_components = pure
        .paired_blocks()
        .iter()
        .map(|b| pure_restrict_tuple(sigma, b))
        .collect::<Vec<_>>();
    Connectivity {
        k: mixed.num_blocks(),
        components,
        k_pure: pure.num_blocks(),
        pure_components,
    }
}

/// `Π(σ⃗)`: join of the cycle partitions of the colors.
pub fn mixed_orbit_partition(sigma: &PermTuple) -> SetPartition {
    let mut acc = sigma.component(0).cycle_partition();
    for c in 1..sigma.d() {
        acc = acc.join(&sigma.component(c).cycle_partition());
    }
    acc
}

pub fn k_mixed(sigma: &PermTuple) -> usize {
    mixed_orbit_partition(sigma).num_blocks()
}

pub fn k_pure(sigma: &PermTuple) -> usize {
    PurePartition::of_tuple(sigma).num_blocks()
}

pub fn k_pure_with(sigma: &PermTuple, eta: &Perm) -> usize {
    PurePartition::of_tuple_and_perm(sigma, eta).num_blocks()
}

/// `Ω(σ⃗) = K(σ⃗) + n(D-1) - #σ⃗ ≥ 0`.
pub fn omega(sigma: &PermTuple) -> i64 {
    k_mixed(sigma) as i64 + (sigma.n() * (sigma.d() - 1)) as i64 - sigma.cycle_count() as i64
}

/// `Δ(σ⃗, τ⃗) = K(σ⃗, τ⃗) + n(D-1) - Σ_c K(σ_c, τ_c)`.
pub fn delta_quantity(sigma: &PermTuple, tau: &PermTuple) -> i64 {
    assert_eq!(sigma.d(), tau.d());
    let joint = mixed_orbit_partition(sigma)
        .join(&mixed_orbit_partition(tau))
        .num_blocks() as i64;
    let per_color: i64 = sigma
        .components()
        .iter()
        .zip(tau.components())
        .map(|(s, t)| s.cycle_partition().join(&t.cycle_partition()).num_blocks() as i64)
        .sum();
    joint + (sigma.n() * (sigma.d() - 1)) as i64 - per_color
}

// ---------------------------------------------------------------------------
// Melonic classification
// ---------------------------------------------------------------------------

/// Outcome of the melonic reduction.
#[derive(Clone, Debug)]
pub struct MelonicReport {
    pub is_melonic: bool,
    /// Distinguished pairing; `None` for `D = 1` (the recursion degenerates
    /// there) and for non-melonic tuples.
    pub canonical_pairing: Option<Perm>,
    /// Every pairing reachable by some splice order. A singleton for
    /// `D ≥ 3`; ties can occur for `D = 2`.
    pub pairings: BTreeSet<Perm>,
}

type GraphState = Vec<BTreeMap<usize, usize>>;

fn state_candidates(state: &GraphState, d: usize) -> Vec<(usize, usize, usize)> {
    // (v, w, shared-count) over alive pairs sharing >= D-1 colors
    let mut count: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for map in state {
        for (&v, &w) in map {
            *count.entry((v, w)).or_insert(0) += 1;
        }
    }
    count
        .into_iter()
        .filter(|&(_, c)| c + 1 >= d)
        .map(|((v, w), c)| (v, w, c))
        .collect()
}

fn splice(state: &GraphState, v: usize, w: usize, shared: usize, d: usize) -> GraphState {
    let mut next = state.clone();
    if shared == d {
        // isolated full dipole: remove cleanly
        for map in next.iter_mut() {
            map.remove(&v);
        }
    } else {
        // exactly one missing color: reconnect u -> x there
        for map in next.iter_mut() {
            if map.get(&v) == Some(&w) {
                map.remove(&v);
            } else {
                let x = map.remove(&v).expect("alive vertex");
                let u = *map
                    .iter()
                    .find(|&(_, &img)| img == w)
                    .expect("alive vertex")
                    .0;
                map.insert(u, x);
            }
        }
    }
    next
}

fn reduction_pairings(
    state: &GraphState,
    d: usize,
    memo: &mut HashMap<GraphState, BTreeSet<Vec<(usize, usize)>>>,
) -> BTreeSet<Vec<(usize, usize)>> {
    if state[0].is_empty() {
        let mut set = BTreeSet::new();
        set.insert(vec![]);
        return set;
    }
    if let Some(hit) = memo.get(state) {
        return hit.clone();
    }
    let mut out = BTreeSet::new();
    for (v, w, shared) in state_candidates(state, d) {
        let next = splice(state, v, w, shared, d);
        for mut completion in reduction_pairings(&next, d, memo) {
            completion.push((v, w));
            completion.sort_unstable();
            out.insert(completion);
        }
    }
    memo.insert(state.clone(), out.clone());
    out
}

/// Recursive melonic reduction with backtracking over splice orders.
///
/// For `D = 1` every tuple is reported melonic (the degree bound degenerates
/// to an equality for all permutations) but no pairing is defined.
pub fn melonic_classify(sigma: &PermTuple) -> MelonicReport {
    let n = sigma.n();
    let d = sigma.d();
    if d == 1 {
        return MelonicReport {
            is_melonic: true,
            canonical_pairing: None,
            pairings: BTreeSet::new(),
        };
    }
    let state: GraphState = (0..d)
        .map(|c| {
            (0..n)
                .map(|v| (v, sigma.component(c).apply(v)))
                .collect::<BTreeMap<_, _>>()
        })
        .collect();
    let mut memo = HashMap::new();
    let raw = reduction_pairings(&state, d, &mut memo);
    let pairings: BTreeSet<Perm> = raw
        .into_iter()
        .map(|pairs| {
            let mut images = vec![0; n];
            for (v, w) in pairs {
                images[v] = w;
            }
            Perm::from_images(images).expect("pairing is a bijection")
        })
        .collect();
    let is_melonic = !pairings.is_empty();
    let canonical_pairing = if pairings.contains(&Perm::identity(n)) {
        Some(Perm::identity(n))
    } else {
        pairings.iter().next().cloned()
    };
    MelonicReport {
        is_melonic,
        canonical_pairing,
        pairings,
    }
}

// ---------------------------------------------------------------------------
// Scaling exponents and minimizer sets
// ---------------------------------------------------------------------------

/// `δ(σ⃗) = min { d(σ⃗, η) : K_p(σ⃗, η) = 1 }`.
pub fn delta(sigma: &PermTuple) -> Result<i64> {
    check_cap(sigma.n())?;
    let mut best = None;
    for eta in all_perms(sigma.n()) {
        if k_pure_with(sigma, &eta) == 1 {
            let d = distance_to_perm(sigma, &eta) as i64;
            best = Some(best.map_or(d, |b: i64| b.min(d)));
        }
    }
    Ok(best.expect("a connecting permutation always exists"))
}

/// `δ(Π, σ⃗) = min { d(σ⃗, η) : Π_p(σ⃗, η) = Π }` for `Π ≥ Π_p(σ⃗)`.
pub fn delta_of(pi: &PurePartition, sigma: &PermTuple) -> Result<i64> {
    check_cap(sigma.n())?;
    if !PurePartition::of_tuple(sigma).leq(pi) {
        return Err(Error::Precondition("δ(Π, σ⃗) needs Π ≥ Π_p(σ⃗)".into()));
    }
    let mut best = None;
    for eta in all_perms(sigma.n()) {
        if &PurePartition::of_tuple_and_perm(sigma, &eta) == pi {
            let d = distance_to_perm(sigma, &eta) as i64;
            best = Some(best.map_or(d, |b: i64| b.min(d)));
        }
    }
    best.ok_or_else(|| Error::Precondition("no η attains Π exactly".into()))
}

/// `δ•(σ⃗) = min_η d(σ⃗, η)`, unconstrained.
pub fn delta_bullet(sigma: &PermTuple) -> Result<i64> {
    check_cap(sigma.n())?;
    Ok(all_perms(sigma.n())
        .iter()
        .map(|eta| distance_to_perm(sigma, eta) as i64)
        .min()
        .unwrap())
}

/// `ε(σ⃗) = min_η (2 K_p(σ⃗, η) + d(σ⃗, η))`.
pub fn epsilon(sigma: &PermTuple) -> Result<i64> {
    epsilon_of(&PurePartition::full(sigma.n()), sigma)
}

/// `ε(Π, σ⃗) = min { 2 K_p(σ⃗, η) + d(σ⃗, η) : Π_p(σ⃗, η) ≤ Π }`.
pub fn epsilon_of(pi: &PurePartition, sigma: &PermTuple) -> Result<i64> {
    check_cap(sigma.n())?;
    let mut best = None;
    for eta in all_perms(sigma.n()) {
        let joined = PurePartition::of_tuple_and_perm(sigma, &eta);
        if joined.leq(pi) {
            let v = 2 * joined.num_blocks() as i64 + distance_to_perm(sigma, &eta) as i64;
            best = Some(best.map_or(v, |b: i64| b.min(v)));
        }
    }
    best.ok_or_else(|| Error::Precondition("ε(Π, σ⃗) needs Π ≥ Π_p(σ⃗)".into()))
}

/// `S_Gau(Π, σ⃗) = { η : Π_p(σ⃗, η) = Π, d(σ⃗, η) = δ(Π, σ⃗) }`.
pub fn minimizers_gauss(pi: &PurePartition, sigma: &PermTuple) -> Result<Vec<Perm>> {
    let best = delta_of(pi, sigma)?;
    Ok(all_perms(sigma.n())
        .into_iter()
        .filter(|eta| {
            &PurePartition::of_tuple_and_perm(sigma, eta) == pi
                && distance_to_perm(sigma, eta) as i64 == best
        })
        .collect())
}

/// `S_pure(Π, σ⃗) = { η : Π_p(σ⃗, η) ≤ Π, 2 K_p(σ⃗, η) + d(σ⃗, η) = ε(Π, σ⃗) }`.
pub fn minimizers_pure_of(pi: &PurePartition, sigma: &PermTuple) -> Result<Vec<Perm>> {
    let best = epsilon_of(pi, sigma)?;
    Ok(all_perms(sigma.n())
        .into_iter()
        .filter(|eta| {
            let joined = PurePartition::of_tuple_and_perm(sigma, eta);
            joined.leq(pi)
                && 2 * joined.num_blocks() as i64 + distance_to_perm(sigma, eta) as i64 == best
        })
        .collect())
}

pub fn minimizers_pure(sigma: &PermTuple) -> Result<Vec<Perm>> {
    minimizers_pure_of(&PurePartition::full(sigma.n()), sigma)
}

/// Full scaling report for `classify`.
#[derive(Clone, Debug, Serialize)]
pub struct ScalingReport {
    pub omega: i64,
    pub delta: i64,
    pub delta_bullet: i64,
    pub epsilon: i64,
    pub melonic: bool,
    pub canonical_pairing: Option<String>,
    pub minimizers_gauss: Vec<String>,
    pub minimizers_pure: Vec<String>,
}

pub fn scaling_exponents(sigma: &PermTuple, pi: Option<&PurePartition>) -> Result<ScalingReport> {
    let full = PurePartition::full(sigma.n());
    let pi = pi.unwrap_or(&full);
    let melo = melonic_classify(sigma);
    Ok(ScalingReport {
        omega: omega(sigma),
        delta: if pi == &full {
            delta(sigma)?
        } else {
            delta_of(pi, sigma)?
        },
        delta_bullet: delta_bullet(sigma)?,
        epsilon: epsilon_of(pi, sigma)?,
        melonic: melo.is_melonic,
        canonical_pairing: melo.canonical_pairing.map(|p| p.to_string()),
        minimizers_gauss: minimizers_gauss(pi, sigma)
            .unwrap_or_default()
            .iter()
            .map(|p| p.to_string())
            .collect(),
        minimizers_pure: minimizers_pure_of(pi, sigma)?
            .iter()
            .map(|p| p.to_string())
            .collect(),
    })
}

/// Decreasing tuple: `2 + δ(σ⃗) ≤ 2#Π + δ(Π, σ⃗)` for every `Π ≥ Π_p(σ⃗)`.
pub fn is_decreasing(sigma: &PermTuple) -> Result<bool> {
    let base = 2 + delta(sigma)?;
    for pi in PurePartition::of_tuple(sigma).coarsenings() {
        if base > 2 * pi.num_blocks() as i64 + delta_of(&pi, sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Decreasing from `Π̃`: `2#Π̃ + δ(Π̃, σ⃗) ≤ 2#Π + δ(Π, σ⃗)` for all
/// `Π_p(σ⃗) ≤ Π ≤ Π̃`.
pub fn is_decreasing_from(sigma: &PermTuple, pi_tilde: &PurePartition) -> Result<bool> {
    if !PurePartition::of_tuple(sigma).leq(pi_tilde) {
        return Err(Error::Precondition("Π̃ must be coarser than Π_p(σ⃗)".into()));
    }
    let base = 2 * pi_tilde.num_blocks() as i64 + delta_of(pi_tilde, sigma)?;
    for pi in PurePartition::of_tuple(sigma).coarsenings() {
        if pi.leq(pi_tilde) && base > 2 * pi.num_blocks() as i64 + delta_of(&pi, sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `δ(σ⃗) - δ(Π, σ⃗) ≤ 0` for every `Π ≥ Π_p(σ⃗)` (the invariant does not
/// factorize at all at large `N`).
pub fn non_factorization_predicate(sigma: &PermTuple) -> Result<bool> {
    let base = delta(sigma)?;
    for pi in PurePartition::of_tuple(sigma).coarsenings() {
        if base > delta_of(&pi, sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

// ---------------------------------------------------------------------------
// Relabeling canonicalization
// ---------------------------------------------------------------------------

/// Relabeling relation for canonical representatives.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relabeling {
    /// `σ⃗ ~ η σ⃗ η^{-1}`.
    Mixed,
    /// `σ⃗ ~ η σ⃗ ν`.
    Pure,
}

/// Lexicographically minimal representative of the relabeling orbit together
/// with the automorphism-group size.
pub fn canonicalize(sigma: &PermTuple, relation: Relabeling) -> Result<(PermTuple, u64)> {
    let n = sigma.n();
    match relation {
        Relabeling::Mixed => {
            check_cap(n)?;
            let mut best = sigma.clone();
            let mut aut = 0u64;
            for eta in all_perms(n) {
                let image = sigma.conjugate(&eta);
                if &image == sigma {
                    aut += 1;
                }
                if image < best {
                    best = image;
                }
            }
            Ok((best, aut))
        }
        Relabeling::Pure => {
            if n > 5 {
                return Err(Error::CapExceeded(format!(
                    "pure canonicalization capped at n = 5, got {n}"
                )));
            }
            let perms = all_perms(n);
            let mut best = sigma.clone();
            let mut aut = 0u64;
            for eta in &perms {
                for nu in &perms {
                    let image = PermTuple::new(
                        sigma
                            .components()
                            .iter()
                            .map(|p| eta.compose(p).compose(&nu.inverse()))
                            .collect(),
                    )
                    .expect("shape preserved");
                    if &image == sigma {
                        aut += 1;
                    }
                    if image < best {
                        best = image;
                    }
                }
            }
            Ok((best, aut))
        }
    }
}

// ---------------------------------------------------------------------------
// Hat extension
// ---------------------------------------------------------------------------

/// `σ̂_{D'} = (σ⃗, id, …, id) ∈ S_n^{D+D'}`.
pub fn hat_extension(sigma: &PermTuple, d_prime: usize) -> PermTuple {
    let mut comps = sigma.components().to_vec();
    comps.extend(std::iter::repeat(Perm::identity(sigma.n())).take(d_prime));
    PermTuple::new(comps).expect("non-empty")
}

/// Closed form `n - δ(σ̂_D) = 2D(1 - K(σ⃗)) + #σ⃗ - n(D-1)`.
pub fn delta_hat_closed_form(sigma: &PermTuple) -> i64 {
    let d = sigma.d() as i64;
    let n = sigma.n() as i64;
    2 * d * (1 - k_mixed(sigma) as i64) + sigma.cycle_count() as i64 - n * (d - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perm_tuples;

    fn tup(text: &str) -> PermTuple {
        PermTuple::parse(text).unwrap()
    }

    #[test]
    fn connectivity_examples() {
        let c = connectivity(&PermTuple::identity(3, 2));
        assert_eq!((c.k, c.k_pure), (3, 3));
        let c = connectivity(&tup("2 1;1 2"));
        assert_eq!((c.k, c.k_pure), (1, 1));
        let c = connectivity(&tup("2 1;2 1"));
        assert_eq!((c.k, c.k_pure), (1, 2));
        assert_eq!(c.pure_components.len(), 2);
        assert_eq!(c.pure_components[0].n(), 1);
    }

    #[test]
    fn melonic_examples() {
        // n = 1: always melonic with identity pairing
        for d in 2..=4 {
            let r = melonic_classify(&PermTuple::identity(1, d));
            assert!(r.is_melonic);
            assert_eq!(r.canonical_pairing, Some(Perm::identity(1)));
        }
        // D = 2, ((1 2),(1 2)): melonic with pairing (1 2)
        let r = melonic_classify(&tup("2 1;2 1"));
        assert!(r.is_melonic);
        assert_eq!(
            r.canonical_pairing,
            Some(Perm::from_cycles(2, &[vec![0, 1]]))
        );
        // D = 3, ((1 2),(1 2),id): the pair (1, 2̄) shares two colors, so the
        // reduction succeeds with pairing (1 2); δ = 1 attains the degree
        // bound, confirming melonicity
        let r = melonic_classify(&tup("2 1;2 1;1 2"));
        assert!(r.is_melonic);
        assert_eq!(
            r.canonical_pairing,
            Some(Perm::from_cycles(2, &[vec![0, 1]]))
        );
        // D = 3, ((1 2 3),(1 3 2),id): no vertex pair shares two colors
        let r = melonic_classify(&tup("2 3 1;3 1 2;1 2 3"));
        assert!(!r.is_melonic);
        // D = 1 degenerates: melonic, no pairing
        let r = melonic_classify(&tup("2 1"));
        assert!(r.is_melonic);
        assert!(r.canonical_pairing.is_none());
    }

    #[test]
    fn omega_examples() {
        assert_eq!(omega(&PermTuple::identity(1, 2)), 0);
        assert_eq!(omega(&tup("2 1;2 1")), 1);
        assert_eq!(omega(&tup("2 3 1;2 3 1")), 2);
    }

    #[test]
    fn scaling_exponent_examples() {
        // n = 1, any D: δ = 0, ε = 2, δ• = 0
        for d in 1..=3 {
            let one = PermTuple::identity(1, d);
            assert_eq!(delta(&one).unwrap(), 0);
            assert_eq!(epsilon(&one).unwrap(), 2);
            assert_eq!(delta_bullet(&one).unwrap(), 0);
        }
        // melonic σ⃗: δ = n-1 + (D-1)(K_p-1) and ε = n + K_p
        let s = tup("2 1;2 1");
        assert_eq!(delta(&s).unwrap(), 2);
        assert_eq!(epsilon(&s).unwrap(), 4);
    }

    #[test]
    fn melonic_scaling_identities_exhaustive() {
        // Thm degree δ-direction and the ε analogue, n ≤ 3, D = 2
        for n in 1..=3usize {
            for sigma in all_perm_tuples(n, 2) {
                let kp = k_pure(&sigma) as i64;
                let melo = melonic_classify(&sigma).is_melonic;
                let bound = n as i64 - 1 + kp - 1;
                let d = delta(&sigma).unwrap();
                assert!(d >= bound);
                assert_eq!(d == bound, melo, "δ bound at {sigma}");
                let e = epsilon(&sigma).unwrap();
                assert!(e >= n as i64 + kp);
                assert_eq!(e == n as i64 + kp, melo, "ε bound at {sigma}");
            }
        }
    }

    #[test]
    fn omega_iff_melonic_identity_pairing() {
        for n in 1..=3usize {
            for d in 2..=3usize {
                for sigma in all_perm_tuples(n, d) {
                    let r = melonic_classify(&sigma);
                    let has_id = r.pairings.contains(&Perm::identity(n));
                    assert_eq!(omega(&sigma) == 0, r.is_melonic && has_id, "{sigma}");
                    assert!(omega(&sigma) >= 0);
                }
            }
        }
    }

    #[test]
    fn pairings_are_unique_for_three_colors() {
        for n in 1..=3usize {
            for sigma in all_perm_tuples(n, 3) {
                let r = melonic_classify(&sigma);
                if r.is_melonic {
                    assert_eq!(r.pairings.len(), 1, "{sigma}");
                }
            }
        }
    }

    #[test]
    fn reduction_pairings_match_distance_minimizers() {
        // pairings from the reduction = {η : d(σ⃗,η) = δ(Π_p(σ⃗),σ⃗),
        // K_p(σ⃗,η) = K_p(σ⃗)}, for melonic σ⃗, n ≤ 3, D ≤ 3
        for n in 1..=3usize {
            for d in 2..=3usize {
                for sigma in all_perm_tuples(n, d) {
                    let r = melonic_classify(&sigma);
                    if !r.is_melonic {
                        continue;
                    }
                    let pp = PurePartition::of_tuple(&sigma);
                    let dmin = delta_of(&pp, &sigma).unwrap();
                    let minimizers: BTreeSet<Perm> = all_perms(n)
                        .into_iter()
                        .filter(|eta| {
                            PurePartition::of_tuple_and_perm(&sigma, eta) == pp
                                && distance_to_perm(&sigma, eta) as i64 == dmin
                        })
                        .collect();
                    assert_eq!(r.pairings, minimizers, "{sigma}");
                }
            }
        }
    }

    #[test]
    fn decreasing_examples() {
        assert!(is_decreasing(&PermTuple::identity(1, 2)).unwrap());
        // purely connected tuples are decreasing
        for sigma in all_perm_tuples(3, 2) {
            if k_pure(&sigma) == 1 {
                assert!(is_decreasing(&sigma).unwrap());
                assert!(non_factorization_predicate(&sigma).unwrap());
            }
        }
        // ((1 2),(1 2)): δ = ε - 2·1 per the decreasing equality test
        let s = tup("2 1;2 1");
        let dec = is_decreasing_from(&s, &PurePartition::full(2)).unwrap();
        assert_eq!(
            delta(&s).unwrap() == epsilon(&s).unwrap() - 2,
            dec
        );
    }

    #[test]
    fn canonicalize_examples() {
        // |Aut_m(id)| = n!
        for n in 1..=4usize {
            let (_, aut) = canonicalize(&PermTuple::identity(n, 2), Relabeling::Mixed).unwrap();
            assert_eq!(aut, (1..=n as u64).product::<u64>());
        }
        // D = 1, |Aut_m((1 2 3))| = 3 (centralizer of a 3-cycle)
        let c3 = PermTuple::parse("2 3 1").unwrap();
        let (rep, aut) = canonicalize(&c3, Relabeling::Mixed).unwrap();
        assert_eq!(aut, 3);
        assert!(rep <= c3);
        // |Aut_p(id)| = n! (pairs (η, η))
        for n in 1..=3usize {
            let (_, aut) = canonicalize(&PermTuple::identity(n, 2), Relabeling::Pure).unwrap();
            assert_eq!(aut, (1..=n as u64).product::<u64>());
        }
    }

    #[test]
    fn orbit_stabilizer() {
        use std::collections::HashSet;
        for sigma in all_perm_tuples(3, 2) {
            let (rep, aut) = canonicalize(&sigma, Relabeling::Mixed).unwrap();
            let orbit: HashSet<PermTuple> = all_perms(3)
                .iter()
                .map(|eta| sigma.conjugate(eta))
                .collect();
            assert_eq!(orbit.len() as u64 * aut, 6);
            for x in &orbit {
                assert_eq!(canonicalize(x, Relabeling::Mixed).unwrap().0, rep);
            }
        }
    }

    #[test]
    fn hat_extension_examples() {
        // n = 1: n - δ(σ̂_D) = 1
        for d in 1..=3usize {
            let one = PermTuple::identity(1, d);
            assert_eq!(delta_hat_closed_form(&one), 1);
        }
        // D = 1, σ = (1 2): 2(1-1) + 1 - 0 = 1
        let s = tup("2 1");
        assert_eq!(delta_hat_closed_form(&s), 1);
        // D = 2, ((1 2),(1 2)): 2·2·(1-1) + 2 - 2 = 0
        let s = tup("2 1;2 1");
        assert_eq!(delta_hat_closed_form(&s), 0);
    }

    #[test]
    fn hat_closed_form_matches_brute_force() {
        for n in 1..=3usize {
            for d in 1..=2usize {
                for sigma in all_perm_tuples(n, d) {
                    let hat = hat_extension(&sigma, d);
                    assert_eq!(hat.d(), 2 * d);
                    let brute = n as i64 - delta(&hat).unwrap();
                    assert_eq!(brute, delta_hat_closed_form(&sigma), "{sigma}");
                }
            }
        }
    }

    #[test]
    fn delta_quantity_examples() {
        assert_eq!(delta_quantity(&PermTuple::identity(1, 2), &PermTuple::identity(1, 2)), 0);
        let s = tup("2 1;2 1");
        assert_eq!(delta_quantity(&s, &PermTuple::identity(2, 2)), 1);
        // Δ(σ⃗, σ⃗) = Ω(σ⃗)
        for sigma in all_perm_tuples(3, 2) {
            assert_eq!(delta_quantity(&sigma, &sigma), omega(&sigma));
        }
    }

    #[test]
    fn delta_of_agrees_with_block_sums() {
        // δ(Π, σ⃗) = Σ_{B ∈ Π_[n]} δ(σ⃗|_B), n ≤ 3, D = 2
        for n in 2..=3usize {
            for sigma in all_perm_tuples(n, 2) {
                for pi in PurePartition::of_tuple(&sigma).coarsenings() {
                    let direct = delta_of(&pi, &sigma).unwrap();
                    let mut sum = 0;
                    for block in pi.paired_blocks() {
                        sum += delta(&pure_restrict_tuple(&sigma, &block)).unwrap();
                    }
                    assert_eq!(direct, sum, "{sigma} {pi}");
                }
            }
        }
    }
}
