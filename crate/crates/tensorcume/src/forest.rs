//! Forest-of-permutation enumerators: the genus-zero sets `𝔾(σ⃗)` and
//! `ℙ_m(σ⃗,τ⃗)`, the mixed/Gaussian/pure forests indexing leading asymptotic
//! contributions, and the intertwined pairs for products of tensors.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::invariant::{
    check_cap, minimizers_gauss, minimizers_pure, minimizers_pure_of, mixed_orbit_partition,
};
use crate::partition::{l_d_quantity, l_quantity, PurePartition, SetPartition};
use crate::perm::{all_perm_tuples, genus, Perm, PermTuple};

/// `𝔾(σ⃗) = {τ⃗ : ∀c g(σ_c,τ_c) = 0 and L_D[{Π(σ_c,τ_c)}, Π(σ⃗); {Π(σ_c)}] = 0}`.
pub fn g_set(sigma: &PermTuple) -> Result<Vec<PermTuple>> {
    check_cap(sigma.n())?;
    Ok(all_perm_tuples(sigma.n(), sigma.d())
        .into_iter()
        .filter(|tau| in_g_set(sigma, tau))
        .collect())
}

pub fn in_g_set(sigma: &PermTuple, tau: &PermTuple) -> bool {
    for (s, t) in sigma.components().iter().zip(tau.components()) {
        if genus(s, t) != 0 {
            return false;
        }
    }
    let joints: Vec<SetPartition> = sigma
        .components()
        .iter()
        .zip(tau.components())
        .map(|(s, t)| s.cycle_partition().join(&t.cycle_partition()))
        .collect();
    let cycles: Vec<SetPartition> = sigma
        .components()
        .iter()
        .map(|s| s.cycle_partition())
        .collect();
    l_d_quantity(&joints, &mixed_orbit_partition(sigma), &cycles)
        .map(|v| v == 0)
        .unwrap_or(false)
}

/// `ℙ_m(σ⃗,τ⃗) = {π ≥ Π(τ⃗) : L[Π(τ⃗,σ⃗), π; Π(τ⃗)] = 0}`.
pub fn p_m_set(sigma: &PermTuple, tau: &PermTuple) -> Vec<SetPartition> {
    let pi_tau = mixed_orbit_partition(tau);
    let joint = pi_tau.join(&mixed_orbit_partition(sigma));
    pi_tau
        .coarsenings()
        .into_iter()
        .filter(|pi| l_quantity(&joint, pi, &pi_tau).map(|v| v == 0).unwrap_or(false))
        .collect()
}

pub fn in_p_m_set(sigma: &PermTuple, tau: &PermTuple, pi: &SetPartition) -> bool {
    let pi_tau = mixed_orbit_partition(tau);
    if !pi_tau.leq(pi) {
        return false;
    }
    let joint = pi_tau.join(&mixed_orbit_partition(sigma));
    l_quantity(&joint, pi, &pi_tau).map(|v| v == 0).unwrap_or(false)
}

/// `FS_mix(σ⃗)`: pairs `(ρ⃗, π)` with `ρ⃗ ∈ 𝔾(σ⃗)` and `π ∈ ℙ_m(σ⃗,ρ⃗)`.
pub fn forests_mixed(sigma: &PermTuple) -> Result<Vec<(PermTuple, SetPartition)>> {
    let mut out = vec![];
    for rho in g_set(sigma)? {
        for pi in p_m_set(sigma, &rho) {
            out.push((rho.clone(), pi));
        }
    }
    Ok(out)
}

/// `FS_Gau(σ⃗)`: pairs `(ρ⃗, Π_p(ρ⃗,η))` with `η ∈ S_pure(σ⃗) ∩ S_Gau(Π,ρ⃗)`
/// and `ρ⃗η^{-1} ∈ 𝔾(σ⃗η^{-1})`.
pub fn forests_gauss(sigma: &PermTuple) -> Result<Vec<(PermTuple, PurePartition)>> {
    check_cap(sigma.n())?;
    let mut out = BTreeSet::new();
    for eta in minimizers_pure(sigma)? {
        let sigma_eta = sigma.compose_perm(&eta.inverse());
        for rho in all_perm_tuples(sigma.n(), sigma.d()) {
            if !in_g_set(&sigma_eta, &rho.compose_perm(&eta.inverse())) {
                continue;
            }
            let pi = PurePartition::of_tuple_and_perm(&rho, &eta);
            if minimizers_gauss(&pi, &rho)?.contains(&eta) {
                out.insert((rho, pi));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// `FS_pure(σ⃗, η)`: pairs `(ρ⃗, Π)` with `ρ⃗η^{-1} ∈ 𝔾(σ⃗η^{-1})`,
/// `Π_p(ρ⃗,η) ≤ Π` and `L(Π_p(σ⃗,η) ∨ Π_p(ρ⃗,η), Π; Π_p(ρ⃗,η)) = 0`.
pub fn forests_pure_at(
    sigma: &PermTuple,
    eta: &Perm,
) -> Result<Vec<(PermTuple, PurePartition)>> {
    check_cap(sigma.n())?;
    let sigma_eta = sigma.compose_perm(&eta.inverse());
    let mut out = vec![];
    for rho in all_perm_tuples(sigma.n(), sigma.d()) {
        if !in_g_set(&sigma_eta, &rho.compose_perm(&eta.inverse())) {
            continue;
        }
        let base = PurePartition::of_tuple_and_perm(&rho, eta);
        let joint = PurePartition::of_tuple_and_perm(sigma, eta).join(&base);
        for pi in base.coarsenings() {
            let l = l_quantity(joint.partition(), pi.partition(), base.partition())?;
            if l == 0 {
                out.push((rho.clone(), pi));
            }
        }
    }
    Ok(out)
}

/// `FS_pure(σ⃗)`: members of some `FS_pure(σ⃗, η)` with
/// `η ∈ S_pure(σ⃗) ∩ S_pure(Π, ρ⃗)`.
pub fn forests_pure(sigma: &PermTuple) -> Result<Vec<(PermTuple, PurePartition)>> {
    let mut out = BTreeSet::new();
    for eta in minimizers_pure(sigma)? {
        for (rho, pi) in forests_pure_at(sigma, &eta)? {
            if minimizers_pure_of(&pi, &rho)?.contains(&eta) {
                out.insert((rho, pi));
            }
        }
    }
    Ok(out.into_iter().collect())
}

/// Intertwined mixed pairs `((ρ⃗,π₁),(τ⃗,π₂))`:
/// `(τ⃗,π₂) ∈ FS_mix(σ⃗)`, `(ρ⃗,π₁) ∈ FS_mix(σ⃗τ⃗^{-1})`, and the coupling
/// `L(π₁ ∨ Π(σ⃗τ⃗^{-1}), π₂ ∨ Π(σ⃗); Π(σ⃗τ⃗^{-1})) = 0`.
pub type MixedPair = ((PermTuple, SetPartition), (PermTuple, SetPartition));

pub fn intertwined_mixed(sigma: &PermTuple) -> Result<Vec<MixedPair>> {
    let mut out = vec![];
    for (tau, pi2) in forests_mixed(sigma)? {
        let left = sigma.compose(&tau.inverse());
        let pi_left = mixed_orbit_partition(&left);
        let coupled = pi2.join(&mixed_orbit_partition(sigma));
        for (rho, pi1) in forests_mixed(&left)? {
            let l = l_quantity(&pi1.join(&pi_left), &coupled, &pi_left)?;
            if l == 0 {
                out.push(((rho, pi1), (tau.clone(), pi2.clone())));
            }
        }
    }
    Ok(out)
}

/// Intertwined pure/Gaussian pairs `((ρ⃗,π₁),(τ⃗,Π₂))`; the `gaussian` flag
/// selects the minimizer set the witness `η` must belong to.
pub type PurePair = ((PermTuple, SetPartition), (PermTuple, PurePartition));

pub fn intertwined_pure(sigma: &PermTuple, gaussian: bool) -> Result<Vec<PurePair>> {
    let n = sigma.n();
    let mut out = BTreeSet::new();
    for eta in minimizers_pure(sigma)? {
        let sigma_eta_pure = PurePartition::of_tuple_and_perm(sigma, &eta);
        for (tau, pi2) in forests_pure_at(sigma, &eta)? {
            let witness_ok = if gaussian {
                minimizers_gauss(&pi2, &tau)
                    .map(|s| s.contains(&eta))
                    .unwrap_or(false)
            } else {
                minimizers_pure_of(&pi2, &tau)?.contains(&eta)
            };
            if !witness_ok {
                continue;
            }
            let left = sigma.compose(&tau.inverse());
            let pi_left = mixed_orbit_partition(&left);
            let coupled = pi2.join(&sigma_eta_pure).restrict_unbarred();
            for (rho, pi1) in forests_mixed(&left)? {
                let l = l_quantity(&pi1.join(&pi_left), &coupled, &pi_left)?;
                if l == 0 {
                    out.insert(((rho, pi1), (tau.clone(), pi2.clone())));
                }
            }
        }
    }
    let _ = n;
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invariant::{k_pure, melonic_classify};
    use crate::partition::all_pure_partitions;
    use crate::perm::{all_perms, distance_tuple, preceq_tuple};

    fn tup(text: &str) -> PermTuple {
        PermTuple::parse(text).unwrap()
    }

    #[test]
    fn g_set_membership_witnesses() {
        // σ⃗ ∈ 𝔾(σ⃗) always; Π(τ⃗) ∈ ℙ_m(σ⃗, τ⃗) always
        for sigma in all_perm_tuples(3, 2) {
            assert!(in_g_set(&sigma, &sigma), "{sigma}");
            for tau in all_perm_tuples(3, 2) {
                assert!(in_p_m_set(&sigma, &tau, &mixed_orbit_partition(&tau)));
            }
        }
    }

    #[test]
    fn g_set_d1_is_genus_zero() {
        // at D = 1 the L_D term vanishes identically: 𝔾(σ) = {τ : g(σ,τ) = 0}
        for sigma in all_perms(4) {
            let st = PermTuple::new(vec![sigma.clone()]).unwrap();
            let gs = g_set(&st).unwrap();
            for tau in all_perms(4) {
                let tt = PermTuple::new(vec![tau.clone()]).unwrap();
                assert_eq!(gs.contains(&tt), genus(&sigma, &tau) == 0);
            }
        }
        // and for connected σ the genus-zero τ below σ are the non-crossing
        // ones: #𝔾((1..n)) restricted by ⪯ equals Catalan
        let c4 = tup("2 3 4 1");
        let below: Vec<_> = g_set(&c4)
            .unwrap()
            .into_iter()
            .filter(|t| preceq_tuple(t, &c4))
            .collect();
        assert_eq!(below.len(), 14); // Cat_4
    }

    #[test]
    fn gaussian_forest_nonempty_witness() {
        // ((η,…,η), Π_p(η)) ∈ FS_Gau(σ⃗) for η ∈ S_pure(σ⃗)
        for sigma in all_perm_tuples(2, 2) {
            let forests = forests_gauss(&sigma).unwrap();
            assert!(!forests.is_empty(), "{sigma}");
            for eta in minimizers_pure(&sigma).unwrap() {
                let witness = (
                    PermTuple::broadcast(&eta, sigma.d()),
                    PurePartition::of_perm(&eta),
                );
                assert!(forests.contains(&witness), "{sigma} missing η = {eta}");
            }
        }
    }

    #[test]
    fn pure_forest_nonempty_witness() {
        // (σ⃗, Π_p(σ⃗,η)) ∈ FS_pure(σ⃗,η)
        for sigma in all_perm_tuples(2, 2) {
            for eta in minimizers_pure(&sigma).unwrap() {
                let forests = forests_pure_at(&sigma, &eta).unwrap();
                let witness = (sigma.clone(), PurePartition::of_tuple_and_perm(&sigma, &eta));
                assert!(forests.contains(&witness), "{sigma} η={eta}");
            }
            assert!(!forests_pure(&sigma).unwrap().is_empty());
        }
    }

    #[test]
    fn intertwined_nonempty() {
        for sigma in all_perm_tuples(2, 2) {
            assert!(!intertwined_mixed(&sigma).unwrap().is_empty(), "{sigma}");
            assert!(!intertwined_pure(&sigma, false).unwrap().is_empty());
            assert!(!intertwined_pure(&sigma, true).unwrap().is_empty());
        }
    }

    #[test]
    fn forests_match_exponent_equality_mixed() {
        // membership in FS_mix(σ⃗) is exactly equality in the mixed
        // exponent-decomposition lemma, n ≤ 3, D ≤ 2
        for n in 1..=3usize {
            for d in 1..=2usize {
                for sigma in all_perm_tuples(n, d) {
                    let forests = forests_mixed(&sigma).unwrap();
                    for rho in all_perm_tuples(n, d) {
                        for pi in mixed_orbit_partition(&rho).coarsenings() {
                            let lhs = 2 * (pi.num_blocks() as i64
                                - mixed_orbit_partition(&rho).num_blocks() as i64)
                                + rho.cycle_count() as i64;
                            let rhs = 2 * (pi
                                .join(&mixed_orbit_partition(&sigma))
                                .num_blocks() as i64
                                - mixed_orbit_partition(&sigma).num_blocks() as i64)
                                + distance_tuple(&sigma, &rho) as i64
                                + sigma.cycle_count() as i64;
                            assert!(lhs <= rhs);
                            let member = forests.contains(&(rho.clone(), pi.clone()));
                            assert_eq!(lhs == rhs, member, "σ={sigma} ρ={rho} π={pi}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gaussian_forests_match_exponent_equality() {
        // for η ∈ S_Gau(Π, ρ⃗): equality in the Gaussian lemma holds iff
        // ρ⃗η^{-1} ∈ 𝔾(σ⃗η^{-1}); FS_Gau additionally demands η ∈ S_pure(σ⃗)
        for n in 1..=2usize {
            for sigma in all_perm_tuples(n, 2) {
                for rho in all_perm_tuples(n, 2) {
                    for pi in all_pure_partitions(n).unwrap() {
                        if !PurePartition::of_tuple(&rho).leq(&pi) {
                            continue;
                        }
                        for eta in minimizers_gauss(&pi, &rho).unwrap() {
                            let lhs = -(crate::perm::distance_to_perm(&rho, &eta) as i64);
                            let kp_se =
                                PurePartition::of_tuple_and_perm(&sigma, &eta).num_blocks() as i64;
                            let joint = PurePartition::of_tuple_and_perm(&sigma, &eta)
                                .join(&PurePartition::of_tuple_and_perm(&rho, &eta));
                            let rhs = 2 * (joint.num_blocks() as i64 - kp_se)
                                - crate::perm::distance_to_perm(&sigma, &eta) as i64
                                + distance_tuple(&sigma, &rho) as i64;
                            assert!(lhs <= rhs);
                            let member = in_g_set(
                                &sigma.compose_perm(&eta.inverse()),
                                &rho.compose_perm(&eta.inverse()),
                            );
                            assert_eq!(lhs == rhs, member, "σ={sigma} ρ={rho} η={eta}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn melonic_gauss_forest_contains_pairing() {
        // for melonic σ⃗ the canonical pairing generates a Gaussian forest
        for sigma in all_perm_tuples(2, 2) {
            let melo = melonic_classify(&sigma);
            if melo.is_melonic && k_pure(&sigma) == 1 {
                let forests = forests_gauss(&sigma).unwrap();
                assert!(!forests.is_empty(), "{sigma}");
            }
        }
    }
}
