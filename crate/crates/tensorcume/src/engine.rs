//! Finite-`N` derived quantities: classical cumulants `Φ`, the Weingarten
//! transform `Ḡ`, the precursors `𝒦` with their two-partition extensions,
//! the deterministic cumulants `𝓛`, inverse reconstructions, microscopic
//! quantities, product formulas and coarser-invariance reductions.

use std::cell::RefCell;
use std::collections::HashMap;

use num_rational::BigRational;

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::invariant::mixed_orbit_partition;
use crate::partition::{pure_restrict_tuple, PurePartition, SetPartition};
use crate::perm::{all_perm_tuples, all_perms, distance_tuple, Perm, PermTuple};
use crate::ratn::RatN;
use crate::weingarten::{wgc_mixed, wgc_pure, WgCache};

/// A cumulant request, as assembled by the CLI: distribution, tuple and the
/// optional inner/outer partitions of the extended quantities.
#[derive(Clone, Debug)]
pub struct CumulantQuery {
    pub sigma: PermTuple,
    pub pi1_mixed: Option<SetPartition>,
    pub pi2_mixed: Option<SetPartition>,
    pub pi1_pure: Option<PurePartition>,
    pub pi2_pure: Option<PurePartition>,
}

impl CumulantQuery {
    pub fn plain(sigma: PermTuple) -> CumulantQuery {
        CumulantQuery {
            sigma,
            pi1_mixed: None,
            pi2_mixed: None,
            pi1_pure: None,
            pi2_pure: None,
        }
    }
}

/// Evaluation context for one distribution: caches moments and transforms.
pub struct Engine<'a> {
    dist: &'a DistributionSpec,
    wg: &'a WgCache,
    moments: RefCell<HashMap<PermTuple, RatN>>,
    gbars: RefCell<HashMap<PermTuple, RatN>>,
    k_mixed_memo: RefCell<HashMap<PermTuple, RatN>>,
    k_pure_memo: RefCell<HashMap<PermTuple, RatN>>,
}

impl<'a> Engine<'a> {
    pub fn new(dist: &'a DistributionSpec, wg: &'a WgCache) -> Engine<'a> {
        Engine {
            dist,
            wg,
            moments: RefCell::new(HashMap::new()),
            gbars: RefCell::new(HashMap::new()),
            k_mixed_memo: RefCell::new(HashMap::new()),
            k_pure_memo: RefCell::new(HashMap::new()),
        }
    }

    pub fn dist(&self) -> &DistributionSpec {
        self.dist
    }

    /// Exact `E[Tr_σ⃗]`.
    pub fn moment(&self, sigma: &PermTuple) -> Result<RatN> {
        if let Some(v) = self.moments.borrow().get(sigma) {
            return Ok(v.clone());
        }
        let v = self.dist.trace_moment(sigma)?;
        self.moments.borrow_mut().insert(sigma.clone(), v.clone());
        Ok(v)
    }

    // -- classical cumulants -------------------------------------------------

    /// `Φ^m_σ⃗ = Σ_{π ≥ Π(σ⃗)} μ_π Π_{S ∈ π} E[Tr_{σ⃗|S}]`.
    pub fn phi_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        let mut acc = RatN::zero();
        for pi in mixed_orbit_partition(sigma).coarsenings() {
            let mut term = RatN::from_int(pi.moebius());
            for block in pi.blocks() {
                term = term * self.moment(&sigma.restrict(&block))?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// `Φ^p_σ⃗ = Σ_{Π ≥ Π_p(σ⃗)} μ_Π Π_{S ∈ Π} E[Tr_{σ⃗|S}]` over pure blocks.
    pub fn phi_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        let mut acc = RatN::zero();
        for pi in PurePartition::of_tuple(sigma).coarsenings() {
            let mut term = RatN::from_int(pi.moebius());
            for block in pi.paired_blocks() {
                term = term * self.moment(&pure_restrict_tuple(sigma, &block))?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Multiplicative extension `Φ^m_{π,σ⃗} = Π_{S ∈ π} Φ^m_{σ⃗|S}`.
    pub fn phi_mixed_ext(&self, pi: &SetPartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_mixed(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.blocks() {
            acc = acc * self.phi_mixed(&sigma.restrict(&block))?;
        }
        Ok(acc)
    }

    /// Multiplicative extension over pure blocks.
    pub fn phi_pure_ext(&self, pi: &PurePartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_pure(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.paired_blocks() {
            acc = acc * self.phi_pure(&pure_restrict_tuple(sigma, &block))?;
        }
        Ok(acc)
    }

    /// Super-cumulant `Φ^m_{π₂,σ⃗}[π₁]`: Moebius sum over
    /// `π₁ ∨ Π(σ⃗) ≤ π ≤ π₂`, multiplicative over the blocks of `π₂`.
    pub fn phi_mixed_super(
        &self,
        pi2: &SetPartition,
        pi1: &SetPartition,
        sigma: &PermTuple,
    ) -> Result<RatN> {
        let lower = pi1.join(&mixed_orbit_partition(sigma));
        if !lower.leq(pi2) {
            return Err(Error::InvalidBounds(
                "need π₁ ∨ Π(σ⃗) ≤ π₂ in the super-cumulant".into(),
            ));
        }
        let mut acc = RatN::zero();
        for pi in lower.coarsenings() {
            if !pi.leq(pi2) {
                continue;
            }
            let mut term = RatN::one();
            for block in pi2.blocks() {
                term = term * RatN::from_int(pi.restrict(&block).moebius());
            }
            for block in pi.blocks() {
                term = term * self.moment(&sigma.restrict(&block))?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    /// Pure super-cumulant `Φ^p_{Π₂,σ⃗}[Π₁]`.
    pub fn phi_pure_super(
        &self,
        pi2: &PurePartition,
        pi1: &PurePartition,
        sigma: &PermTuple,
    ) -> Result<RatN> {
        let lower = pi1.join(&PurePartition::of_tuple(sigma));
        if !lower.leq(pi2) {
            return Err(Error::InvalidBounds(
                "need Π₁ ∨ Π_p(σ⃗) ≤ Π₂ in the super-cumulant".into(),
            ));
        }
        let mut acc = RatN::zero();
        for pi in lower.coarsenings() {
            if !pi.leq(pi2) {
                continue;
            }
            let mut term = RatN::one();
            for block in pi2.partition().blocks() {
                term = term * RatN::from_int(pi.partition().restrict(&block).moebius());
            }
            for block in pi.paired_blocks() {
                term = term * self.moment(&pure_restrict_tuple(sigma, &block))?;
            }
            acc = acc + term;
        }
        Ok(acc)
    }

    // -- Weingarten transform ------------------------------------------------

    /// `Ḡ_σ⃗ = Σ_ν⃗ E[Tr_ν⃗] Π_c W_N(ν_c σ_c^{-1})` (same formula in both
    /// flavors).
    pub fn gbar(&self, sigma: &PermTuple) -> Result<RatN> {
        if let Some(v) = self.gbars.borrow().get(sigma) {
            return Ok(v.clone());
        }
        crate::invariant::check_cap(sigma.n())?;
        let sigma_inv = sigma.inverse();
        let mut acc = RatN::zero();
        for nu in all_perm_tuples(sigma.n(), sigma.d()) {
            let w = self.wg.value_tuple(&nu.compose(&sigma_inv))?;
            if w.is_zero() {
                continue;
            }
            acc = acc + self.moment(&nu)? * w;
        }
        self.gbars.borrow_mut().insert(sigma.clone(), acc.clone());
        Ok(acc)
    }

    pub fn gbar_mixed_ext(&self, pi: &SetPartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_mixed(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.blocks() {
            acc = acc * self.gbar(&sigma.restrict(&block))?;
        }
        Ok(acc)
    }

    pub fn gbar_pure_ext(&self, pi: &PurePartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_pure(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.paired_blocks() {
            acc = acc * self.gbar(&pure_restrict_tuple(sigma, &block))?;
        }
        Ok(acc)
    }

    // -- finite-N precursors -------------------------------------------------

    /// `𝒦^m_σ⃗ = Σ_{π ≥ Π(σ⃗)} μ_π Ḡ_{π,σ⃗}`.
    pub fn k_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        if let Some(v) = self.k_mixed_memo.borrow().get(sigma) {
            return Ok(v.clone());
        }
        let mut acc = RatN::zero();
        for pi in mixed_orbit_partition(sigma).coarsenings() {
            acc = acc + RatN::from_int(pi.moebius()) * self.gbar_mixed_ext(&pi, sigma)?;
        }
        self.k_mixed_memo
            .borrow_mut()
            .insert(sigma.clone(), acc.clone());
        Ok(acc)
    }

    /// `𝒦^p_σ⃗ = Σ_{Π ≥ Π_p(σ⃗)} μ_Π Ḡ_{Π,σ⃗}`.
    pub fn k_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        if let Some(v) = self.k_pure_memo.borrow().get(sigma) {
            return Ok(v.clone());
        }
        let mut acc = RatN::zero();
        for pi in PurePartition::of_tuple(sigma).coarsenings() {
            acc = acc + RatN::from_int(pi.moebius()) * self.gbar_pure_ext(&pi, sigma)?;
        }
        self.k_pure_memo
            .borrow_mut()
            .insert(sigma.clone(), acc.clone());
        Ok(acc)
    }

    pub fn k_mixed_ext(&self, pi: &SetPartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_mixed(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.blocks() {
            acc = acc * self.k_mixed(&sigma.restrict(&block))?;
        }
        Ok(acc)
    }

    pub fn k_pure_ext(&self, pi: &PurePartition, sigma: &PermTuple) -> Result<RatN> {
        require_leq_pure(sigma, pi)?;
        let mut acc = RatN::one();
        for block in pi.paired_blocks() {
            acc = acc * self.k_pure(&pure_restrict_tuple(sigma, &block))?;
        }
        Ok(acc)
    }

    /// Extended precursor `𝒦^m_{π₂,σ⃗}[π₁]`, multiplicative over `π₂`.
    pub fn k_mixed_super(
        &self,
        pi2: &SetPartition,
        pi1: &SetPartition,
        sigma: &PermTuple,
    ) -> Result<RatN> {
        let lower = pi1.join(&mixed_orbit_partition(sigma));
        if !lower.leq(pi2) {
            return Err(Error::InvalidBounds("need π₁ ∨ Π(σ⃗) ≤ π₂".into()));
        }
        let mut acc = RatN::zero();
        for pi in lower.coarsenings() {
            if !pi.leq(pi2) {
                continue;
            }
            let mut term = RatN::one();
            for block in pi2.blocks() {
                term = term * RatN::from_int(pi.restrict(&block).moebius());
            }
            acc = acc + term * self.gbar_mixed_ext(&pi, sigma)?;
        }
        Ok(acc)
    }

    /// Extended precursor `𝒦^p_{Π₂,σ⃗}[Π₁]`.
    pub fn k_pure_super(
        &self,
        pi2: &PurePartition,
        pi1: &PurePartition,
        sigma: &PermTuple,
    ) -> Result<RatN> {
        let lower = pi1.join(&PurePartition::of_tuple(sigma));
        if !lower.leq(pi2) {
            return Err(Error::InvalidBounds("need Π₁ ∨ Π_p(σ⃗) ≤ Π₂".into()));
        }
        let mut acc = RatN::zero();
        for pi in lower.coarsenings() {
            if !pi.leq(pi2) {
                continue;
            }
            let mut term = RatN::one();
            for block in pi2.partition().blocks() {
                term = term * RatN::from_int(pi.partition().restrict(&block).moebius());
            }
            acc = acc + term * self.gbar_pure_ext(&pi, sigma)?;
        }
        Ok(acc)
    }

    // -- deterministic cumulants 𝓛 -------------------------------------------

    /// `𝓛^m_σ⃗ = Σ_τ⃗ Tr_τ⃗ · WgC^m[Π(σ⃗,τ⃗), σ⃗τ⃗^{-1}]`, the distribution
    /// being read as a deterministic trace table.
    pub fn l_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        crate::invariant::check_cap(sigma.n())?;
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let pi = mixed_orbit_partition(sigma).join(&mixed_orbit_partition(&tau));
            let w = wgc_mixed(self.wg, &pi, &sigma.compose(&tau.inverse()))?;
            if w.is_zero() {
                continue;
            }
            acc = acc + self.moment(&tau)? * w;
        }
        Ok(acc)
    }

    /// `𝓛^p_σ⃗ = Σ_τ⃗ Tr_τ⃗ · WgC^p[Π_p(σ⃗,τ⃗), σ⃗τ⃗^{-1}]`.
    pub fn l_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        crate::invariant::check_cap(sigma.n())?;
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let pi = PurePartition::of_tuple(sigma).join(&PurePartition::of_tuple(&tau));
            let w = wgc_pure(self.wg, &pi, &sigma.compose(&tau.inverse()))?;
            if w.is_zero() {
                continue;
            }
            acc = acc + self.moment(&tau)? * w;
        }
        Ok(acc)
    }

    // -- inverse reconstructions ---------------------------------------------

    /// `E[Tr_σ⃗] = Σ_τ⃗ N^{nD - d(σ⃗,τ⃗)} Σ_{π ≥ Π(τ⃗)} 𝒦^m_{π,τ⃗}`.
    pub fn moment_from_k_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        let nd = (sigma.n() * sigma.d()) as i64;
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let mut inner = RatN::zero();
            for pi in mixed_orbit_partition(&tau).coarsenings() {
                inner = inner + self.k_mixed_ext(&pi, &tau)?;
            }
            acc = acc + RatN::n_pow(nd - distance_tuple(sigma, &tau) as i64) * inner;
        }
        Ok(acc)
    }

    /// Pure version of the moment reconstruction.
    pub fn moment_from_k_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        let nd = (sigma.n() * sigma.d()) as i64;
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let mut inner = RatN::zero();
            for pi in PurePartition::of_tuple(&tau).coarsenings() {
                inner = inner + self.k_pure_ext(&pi, &tau)?;
            }
            acc = acc + RatN::n_pow(nd - distance_tuple(sigma, &tau) as i64) * inner;
        }
        Ok(acc)
    }

    /// `Ḡ_σ⃗ = Σ_{π ≥ Π(σ⃗)} 𝒦^m_{π,σ⃗}`.
    pub fn gbar_from_k_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        let mut acc = RatN::zero();
        for pi in mixed_orbit_partition(sigma).coarsenings() {
            acc = acc + self.k_mixed_ext(&pi, sigma)?;
        }
        Ok(acc)
    }

    /// `Ḡ_σ⃗ = Σ_{Π ≥ Π_p(σ⃗)} 𝒦^p_{Π,σ⃗}`.
    pub fn gbar_from_k_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        let mut acc = RatN::zero();
        for pi in PurePartition::of_tuple(sigma).coarsenings() {
            acc = acc + self.k_pure_ext(&pi, sigma)?;
        }
        Ok(acc)
    }

    /// `Φ^m_σ⃗ = Σ_τ⃗ N^{nD - d(σ⃗,τ⃗)} Σ_{π ≥ Π(τ⃗), π ∨ Π(σ⃗) = 1_n} 𝒦^m_{π,τ⃗}`.
    pub fn phi_from_k_mixed(&self, sigma: &PermTuple) -> Result<RatN> {
        let nd = (sigma.n() * sigma.d()) as i64;
        let target = mixed_orbit_partition(sigma);
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let mut inner = RatN::zero();
            for pi in mixed_orbit_partition(&tau).coarsenings() {
                if pi.join(&target).num_blocks() == 1 {
                    inner = inner + self.k_mixed_ext(&pi, &tau)?;
                }
            }
            acc = acc + RatN::n_pow(nd - distance_tuple(sigma, &tau) as i64) * inner;
        }
        Ok(acc)
    }

    /// Pure version of the cumulant reconstruction.
    pub fn phi_from_k_pure(&self, sigma: &PermTuple) -> Result<RatN> {
        let nd = (sigma.n() * sigma.d()) as i64;
        let target = PurePartition::of_tuple(sigma);
        let mut acc = RatN::zero();
        for tau in all_perm_tuples(sigma.n(), sigma.d()) {
            let mut inner = RatN::zero();
            for pi in PurePartition::of_tuple(&tau).coarsenings() {
                if pi.join(&target).num_blocks() == 1 {
                    inner = inner + self.k_pure_ext(&pi, &tau)?;
                }
            }
            acc = acc + RatN::n_pow(nd - distance_tuple(sigma, &tau) as i64) * inner;
        }
        Ok(acc)
    }

    // -- microscopic quantities ----------------------------------------------

    /// Joint moment of tensor entries at distinct indices. For laws with an
    /// explicit entry-level formula the closed form is computed and
    /// cross-checked against `Ḡ_σ⃗`; otherwise `Ḡ_σ⃗` is returned directly
    /// (the two agree by the uniqueness of the LU-invariant expansion).
    pub fn micro_moment(&self, sigma: &PermTuple) -> Result<RatN> {
        let gbar = self.gbar(sigma)?;
        if let Some(closed) = micro_moment_closed_form(self.dist, sigma) {
            if closed != gbar {
                return Err(Error::Precondition(format!(
                    "micro/macro mismatch at {sigma}: {closed} vs {gbar}"
                )));
            }
        }
        Ok(gbar)
    }

    /// Joint cumulant of tensor entries at distinct indices; equals `𝒦`.
    pub fn micro_cumulant(&self, kind: crate::dist::Kind, sigma: &PermTuple) -> Result<RatN> {
        match kind {
            crate::dist::Kind::Mixed => self.k_mixed(sigma),
            crate::dist::Kind::Pure => self.k_pure(sigma),
        }
    }
}

fn require_leq_mixed(sigma: &PermTuple, pi: &SetPartition) -> Result<()> {
    if !mixed_orbit_partition(sigma).leq(pi) {
        return Err(Error::InvalidBounds("partition must be ≥ Π(σ⃗)".into()));
    }
    Ok(())
}

fn require_leq_pure(sigma: &PermTuple, pi: &PurePartition) -> Result<()> {
    if !PurePartition::of_tuple(sigma).leq(pi) {
        return Err(Error::InvalidBounds("partition must be ≥ Π_p(σ⃗)".into()));
    }
    Ok(())
}

/// Entry-level closed forms of the micro moments, where the paper gives one:
/// constant tuples carry the per-permutation weight, everything else
/// vanishes.
fn micro_moment_closed_form(dist: &DistributionSpec, sigma: &PermTuple) -> Option<RatN> {
    let n = sigma.n() as i64;
    let d = sigma.d() as i64;
    match dist {
        DistributionSpec::Gaussian { scale, .. } => {
            let eta = sigma.constant_value()?;
            let _ = eta;
            Some(match sigma.constant_value() {
                Some(_) => RatN::n_pow(n * (1 - d)).scale(&scale.pow(n as i32)),
                None => RatN::zero(),
            })
        }
        DistributionSpec::WishartTensor {
            d_prime, ratios, ..
        } => {
            let value = match sigma.constant_value() {
                Some(eta) => {
                    let rprod: BigRational = ratios.iter().product();
                    RatN::n_pow(n * (1 - d) - (*d_prime as i64) * eta.cayley_norm() as i64)
                        .scale(&rprod.pow(eta.cycle_count() as i32))
                }
                None => RatN::zero(),
            };
            Some(value)
        }
        _ => None,
    }
}

// ---------------------------------------------------------------------------
// Product formulas
// ---------------------------------------------------------------------------

/// `E[Tr_σ⃗(B·X)] = Σ_{ρ⃗,τ⃗} E[Tr_ρ⃗(B)] W_N(ρ⃗τ⃗σ⃗^{-1}) E[Tr_τ⃗(X)]`,
/// for `X` LU-invariant and independent of `B` (declared, not verified).
pub fn product_moment(
    b: &Engine,
    x: &Engine,
    wg: &WgCache,
    sigma: &PermTuple,
) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let n = sigma.n();
    let d = sigma.d();
    let sigma_inv = sigma.inverse();
    let tuples = all_perm_tuples(n, d);
    let mut acc = RatN::zero();
    for rho in &tuples {
        let mb = b.moment(rho)?;
        if mb.is_zero() {
            continue;
        }
        for tau in &tuples {
            let w = wg.value_tuple(&rho.compose(tau).compose(&sigma_inv))?;
            acc = acc + &mb * w * x.moment(tau)?;
        }
    }
    Ok(acc)
}

/// `Ḡ_σ⃗[B·X] = Σ_ρ⃗ Ḡ_{σ⃗ρ⃗^{-1}}[B] Ḡ_ρ⃗[X]` (same shape in both flavors).
pub fn product_gbar(b: &Engine, x: &Engine, sigma: &PermTuple) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let mut acc = RatN::zero();
    for rho in all_perm_tuples(sigma.n(), sigma.d()) {
        let gb = b.gbar(&sigma.compose(&rho.inverse()))?;
        if gb.is_zero() {
            continue;
        }
        acc = acc + gb * x.gbar(&rho)?;
    }
    Ok(acc)
}

/// Mixed classical cumulants of `B·A`
/// (`Φ^m_{π₂,σ⃗}[π₁; B·A]`, Prop. on products of tensors).
pub fn product_phi_mixed(
    b: &Engine,
    a: &Engine,
    wg: &WgCache,
    sigma: &PermTuple,
    pi1: &SetPartition,
    pi2: &SetPartition,
) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let n = sigma.n();
    let d = sigma.d();
    let sigma_inv = sigma.inverse();
    let tuples = all_perm_tuples(n, d);
    let mut acc = RatN::zero();
    for rho in &tuples {
        for tau in &tuples {
            let nu = rho.compose(tau).compose(&sigma_inv);
            for pi_b in mixed_orbit_partition(rho).coarsenings() {
                if !pi_b.leq(pi2) {
                    continue;
                }
                let phi_b = b.phi_mixed_ext(&pi_b, rho)?;
                if phi_b.is_zero() {
                    continue;
                }
                for pi_a in mixed_orbit_partition(tau).coarsenings() {
                    if !pi_a.leq(pi2) {
                        continue;
                    }
                    let phi_a = a.phi_mixed_ext(&pi_a, tau)?;
                    if phi_a.is_zero() {
                        continue;
                    }
                    let inner = pi1
                        .join(&mixed_orbit_partition(sigma))
                        .join(&pi_b)
                        .join(&pi_a);
                    let mut w = RatN::one();
                    for block in pi2.blocks() {
                        w = w * wgc_mixed(wg, &inner.restrict(&block), &nu.restrict(&block))?;
                    }
                    acc = acc + &phi_b * &phi_a * w;
                }
            }
        }
    }
    Ok(acc)
}

/// Pure classical cumulants of `(B·T, T̄)`, computed from the definition:
/// the Moebius sum over the moments of the product (Prop. on moments of
/// products), which avoids the blockwise-restriction ambiguity of the
/// displayed pure formula.
pub fn product_phi_pure(
    b: &Engine,
    t: &Engine,
    wg: &WgCache,
    sigma: &PermTuple,
    pi1: &PurePartition,
    pi2: &PurePartition,
) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let lower = pi1.join(&PurePartition::of_tuple(sigma));
    if !lower.leq(pi2) {
        return Err(Error::InvalidBounds("need Π₁ ∨ Π_p(σ⃗) ≤ Π₂".into()));
    }
    let mut acc = RatN::zero();
    for pi in lower.coarsenings() {
        if !pi.leq(pi2) {
            continue;
        }
        let mut term = RatN::one();
        for block in pi2.partition().blocks() {
            term = term * RatN::from_int(pi.partition().restrict(&block).moebius());
        }
        for block in pi.paired_blocks() {
            term = term * product_moment(b, t, wg, &pure_restrict_tuple(sigma, &block))?;
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// Mixed super-cumulant of `B·A` straight from the definition, as an
/// independent route for testing the blockwise product formula.
pub fn product_phi_mixed_from_moments(
    b: &Engine,
    a: &Engine,
    wg: &WgCache,
    sigma: &PermTuple,
    pi1: &SetPartition,
    pi2: &SetPartition,
) -> Result<RatN> {
    let lower = pi1.join(&mixed_orbit_partition(sigma));
    if !lower.leq(pi2) {
        return Err(Error::InvalidBounds("need π₁ ∨ Π(σ⃗) ≤ π₂".into()));
    }
    let mut acc = RatN::zero();
    for pi in lower.coarsenings() {
        if !pi.leq(pi2) {
            continue;
        }
        let mut term = RatN::one();
        for block in pi2.blocks() {
            term = term * RatN::from_int(pi.restrict(&block).moebius());
        }
        for block in pi.blocks() {
            term = term * product_moment(b, a, wg, &sigma.restrict(&block))?;
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// `𝒦^m_{π₂,σ⃗}[π₁; B·A] = Σ_ρ⃗ Σ 𝒦^m_{π',σ⃗ρ⃗^{-1}}[B] 𝒦^m_{π'',ρ⃗}[A]`
/// over `π' ≥ Π(σ⃗ρ⃗^{-1})`, `π'' ≥ Π(ρ⃗)` with `π₁ ∨ π' ∨ π'' = π₂`.
pub fn product_k_mixed(
    b: &Engine,
    a: &Engine,
    sigma: &PermTuple,
    pi1: &SetPartition,
    pi2: &SetPartition,
) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let mut acc = RatN::zero();
    for rho in all_perm_tuples(sigma.n(), sigma.d()) {
        let left = sigma.compose(&rho.inverse());
        for pi_b in mixed_orbit_partition(&left).coarsenings() {
            let kb = b.k_mixed_ext(&pi_b, &left)?;
            if kb.is_zero() {
                continue;
            }
            for pi_a in mixed_orbit_partition(&rho).coarsenings() {
                if pi1.join(&pi_b).join(&pi_a) != *pi2 {
                    continue;
                }
                let ka = a.k_mixed_ext(&pi_a, &rho)?;
                acc = acc + &kb * ka;
            }
        }
    }
    Ok(acc)
}

/// Pure version: `𝒦^p_{Π₂,σ⃗}[Π₁; B·T, T̄]`.
pub fn product_k_pure(
    b: &Engine,
    t: &Engine,
    sigma: &PermTuple,
    pi1: &PurePartition,
    pi2: &PurePartition,
) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let mut acc = RatN::zero();
    for rho in all_perm_tuples(sigma.n(), sigma.d()) {
        let left = sigma.compose(&rho.inverse());
        for pi_b in mixed_orbit_partition(&left).coarsenings() {
            let kb = b.k_mixed_ext(&pi_b, &left)?;
            if kb.is_zero() {
                continue;
            }
            for pi_t in PurePartition::of_tuple(&rho).coarsenings() {
                if pi1.join(&pi_t).join_unbarred(&pi_b) != *pi2 {
                    continue;
                }
                let kt = t.k_pure_ext(&pi_t, &rho)?;
                acc = acc + &kb * kt;
            }
        }
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Coarser invariance
// ---------------------------------------------------------------------------

/// A surjection `ξ: [D] -> [D']` given by its images (0-based).
#[derive(Clone, Debug)]
pub struct ColorSurjection {
    images: Vec<usize>,
    d_prime: usize,
}

impl ColorSurjection {
    pub fn new(images: Vec<usize>, d_prime: usize) -> Result<ColorSurjection> {
        let mut hit = vec![false; d_prime];
        for &c in &images {
            if c >= d_prime {
                return Err(Error::Precondition("image out of range".into()));
            }
            hit[c] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(Error::Precondition("ξ must be surjective".into()));
        }
        Ok(ColorSurjection { images, d_prime })
    }

    /// Full grouping `(1_D)`.
    pub fn full(d: usize) -> ColorSurjection {
        ColorSurjection {
            images: vec![0; d],
            d_prime: 1,
        }
    }

    pub fn d(&self) -> usize {
        self.images.len()
    }

    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    /// `g_ξ(σ⃗') = (σ'_{ξ(1)}, …, σ'_{ξ(D)})`.
    pub fn expand(&self, sigma_prime: &PermTuple) -> Result<PermTuple> {
        if sigma_prime.d() != self.d_prime {
            return Err(Error::ShapeMismatch("tuple has wrong color count".into()));
        }
        PermTuple::new(
            self.images
                .iter()
                .map(|&c| sigma_prime.component(c).clone())
                .collect(),
        )
    }

    /// Inverse of `g_ξ` where defined.
    pub fn reduce(&self, sigma: &PermTuple) -> Option<PermTuple> {
        if sigma.d() != self.images.len() {
            return None;
        }
        let mut comps: Vec<Option<Perm>> = vec![None; self.d_prime];
        for (c, &cp) in self.images.iter().enumerate() {
            match &comps[cp] {
                None => comps[cp] = Some(sigma.component(c).clone()),
                Some(p) if p == sigma.component(c) => {}
                Some(_) => return None,
            }
        }
        PermTuple::new(comps.into_iter().map(|p| p.unwrap()).collect()).ok()
    }
}

/// Moments of a global unitary invariant tensor from the precursors on
/// constant tuples:
/// `E[Tr_σ⃗] = Σ_η N^{Σ_c #(σ_c η^{-1})} Σ_{π ≥ Π(η)} 𝒦^m_{π,(η,…,η)}`.
pub fn global_moment_mixed(engine: &Engine, sigma: &PermTuple) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let d = sigma.d();
    let mut acc = RatN::zero();
    for eta in all_perms(sigma.n()) {
        let constant = PermTuple::broadcast(&eta, d);
        let mut inner = RatN::zero();
        for pi in eta.cycle_partition().coarsenings() {
            inner = inner + engine.k_mixed_ext(&pi, &constant)?;
        }
        let mut e = 0i64;
        for c in 0..d {
            e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
        }
        acc = acc + RatN::n_pow(e) * inner;
    }
    Ok(acc)
}

/// Pure flavor of the single-permutation expansion.
pub fn global_moment_pure(engine: &Engine, sigma: &PermTuple) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let d = sigma.d();
    let mut acc = RatN::zero();
    for eta in all_perms(sigma.n()) {
        let constant = PermTuple::broadcast(&eta, d);
        let mut inner = RatN::zero();
        for pi in PurePartition::of_perm(&eta).coarsenings() {
            inner = inner + engine.k_pure_ext(&pi, &constant)?;
        }
        let mut e = 0i64;
        for c in 0..d {
            e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
        }
        acc = acc + RatN::n_pow(e) * inner;
    }
    Ok(acc)
}

/// Mixed classical cumulant from the single-permutation expansion:
/// same sum with the connectivity filter `π ∨ Π(σ⃗) = 1_n`.
pub fn global_phi_mixed(engine: &Engine, sigma: &PermTuple) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let d = sigma.d();
    let target = mixed_orbit_partition(sigma);
    let mut acc = RatN::zero();
    for eta in all_perms(sigma.n()) {
        let constant = PermTuple::broadcast(&eta, d);
        let mut inner = RatN::zero();
        for pi in eta.cycle_partition().coarsenings() {
            if pi.join(&target).num_blocks() == 1 {
                inner = inner + engine.k_mixed_ext(&pi, &constant)?;
            }
        }
        let mut e = 0i64;
        for c in 0..d {
            e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
        }
        acc = acc + RatN::n_pow(e) * inner;
    }
    Ok(acc)
}

/// Pure flavor with the filter `Π ∨ Π_p(σ⃗) = 1_{n,n̄}`.
pub fn global_phi_pure(engine: &Engine, sigma: &PermTuple) -> Result<RatN> {
    crate::invariant::check_cap(sigma.n())?;
    let d = sigma.d();
    let target = PurePartition::of_tuple(sigma);
    let mut acc = RatN::zero();
    for eta in all_perms(sigma.n()) {
        let constant = PermTuple::broadcast(&eta, d);
        let mut inner = RatN::zero();
        for pi in PurePartition::of_perm(&eta).coarsenings() {
            if pi.join(&target).num_blocks() == 1 {
                inner = inner + engine.k_pure_ext(&pi, &constant)?;
            }
        }
        let mut e = 0i64;
        for c in 0..d {
            e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
        }
        acc = acc + RatN::n_pow(e) * inner;
    }
    Ok(acc)
}
