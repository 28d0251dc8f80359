//! Named verification suites: each one sweeps a theorem or identity family
//! at its stated caps and reports exact pass/fail per case.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::asympt::{
    extract_and_compare, global_kappa_mixed, kappa_from_covariance, kappa_mixed,
    kappa_mixed_connected, kappa_product_mixed, kappa_product_mixed_connected,
    melonic_generating_sum, phi_mixed_from_kappa, CovarianceCase, Profile, Regime,
};
use crate::dist::{
    numeric_trace_mixed, wick_pairing_oracle, DistributionSpec, Kind, MixedTensor, QC,
};
use crate::engine::{
    global_moment_mixed, global_phi_mixed, product_gbar, product_k_pure, product_moment, Engine,
};
use crate::error::{Error, Result};
use crate::forest::{forests_mixed, forests_pure_at, in_g_set};
use crate::invariant::{
    canonicalize, delta, delta_of, epsilon_of, hat_extension, is_decreasing_from, k_mixed,
    k_pure, k_pure_with, melonic_classify, mixed_orbit_partition, omega, Relabeling,
};
use crate::oracle::{free_poisson_moments, semicircle_moments, FreePair, Letter};
use crate::partition::{
    all_partitions, all_pure_partitions, l_d_quantity, l_quantity, PurePartition, SetPartition,
};
use crate::perm::{
    all_perm_tuples, all_perms, distance_to_perm, distance_tuple, genus, Perm, PermTuple,
};
use crate::ratn::RatN;
use crate::weingarten::{gamma_coefficient, wgc_mixed, WeingartenTable, WgCache};

/// Outcome of one suite run.
#[derive(Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub cases: usize,
    pub matches: usize,
    pub mismatches: Vec<String>,
}

impl SuiteReport {
    fn new(name: &str) -> SuiteReport {
        SuiteReport {
            suite: name.to_string(),
            cases: 0,
            matches: 0,
            mismatches: vec![],
        }
    }

    fn check(&mut self, ok: bool, context: impl Fn() -> String) {
        self.cases += 1;
        if ok {
            self.matches += 1;
        } else {
            self.mismatches.push(context());
        }
    }

    pub fn passed(&self) -> bool {
        self.mismatches.is_empty()
    }
}

/// All registered suites with their default caps baked in.
pub fn suite_names() -> &'static [&'static str] {
    &[
        "wg-orthogonality",
        "wgc-asymptotics",
        "thm-degree",
        "inverse-pairs",
        "closed-form-precursors",
        "additivity",
        "micro-macro",
        "scaling-harness",
        "global-invariance",
        "product-identities",
        "exponent-lemmas",
        "melonic-generating",
    ]
}

/// Run a suite by name; `n_cap`/`d_cap` shrink the default sweep.
pub fn run_suite(name: &str, n_cap: Option<usize>, d_cap: Option<usize>) -> Result<SuiteReport> {
    let clamp = |default: usize| n_cap.map_or(default, |c| c.min(default));
    let clamp_d = |default: usize| d_cap.map_or(default, |c| c.min(default));
    match name {
        "wg-orthogonality" => wg_orthogonality(clamp(5)),
        "wgc-asymptotics" => wgc_asymptotics(clamp(3), clamp_d(2)),
        "thm-degree" => thm_degree(clamp(4), clamp_d(3)),
        "inverse-pairs" => inverse_pairs(clamp(3), clamp_d(2)),
        "closed-form-precursors" => closed_form_precursors(clamp(4)),
        "additivity" => additivity(clamp(3)),
        "micro-macro" => micro_macro(clamp(3)),
        "scaling-harness" => scaling_harness(clamp(3)),
        "global-invariance" => global_invariance(clamp(3)),
        "product-identities" => product_identities(clamp(4)),
        "exponent-lemmas" => exponent_lemmas(clamp(3), clamp(4)),
        "melonic-generating" => melonic_generating(clamp(4)),
        other => Err(Error::Parse(format!("unknown suite `{other}`"))),
    }
}

// -- 1 ----------------------------------------------------------------------

/// Weingarten orthogonality `Σ_ν N^{#(ν τ^{-1})} W_N(ν) = δ_{τ,id}` for all
/// `τ ∈ S_n`, `n ≤ n_max`.
pub fn wg_orthogonality(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("wg-orthogonality");
    for n in 1..=n_max {
        let table = WeingartenTable::build(n)?;
        for tau in all_perms(n) {
            let tau_inv = tau.inverse();
            let mut acc = RatN::zero();
            for nu in all_perms(n) {
                let c = nu.compose(&tau_inv).cycle_count() as i64;
                acc = acc + RatN::n_pow(c) * table.get(&nu);
            }
            let expected = if tau.is_identity() {
                RatN::one()
            } else {
                RatN::zero()
            };
            report.check(acc == expected, || format!("n={n} τ={tau}"));
        }
    }
    Ok(report)
}

// -- 2 ----------------------------------------------------------------------

/// `leading_term(WgC[π,ν⃗]) = (#ν⃗ - 2(#π-1) - 2nD, Γ[π,ν⃗])`.
pub fn wgc_asymptotics(n_max: usize, d_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("wgc-asymptotics");
    let wg = WgCache::new();
    for n in 1..=n_max {
        for d in 1..=d_max {
            for nu in all_perm_tuples(n, d) {
                for pi in all_partitions(n) {
                    if !mixed_orbit_partition(&nu).leq(&pi) {
                        continue;
                    }
                    let exact = wgc_mixed(&wg, &pi, &nu)?;
                    let exponent = nu.cycle_count() as i64
                        - 2 * (pi.num_blocks() as i64 - 1)
                        - 2 * (n * d) as i64;
                    let gamma = gamma_coefficient(&pi, &nu)?;
                    let verdict = extract_and_compare(&exact, exponent, &gamma);
                    report.check(verdict.is_ok(), || {
                        format!("n={n} d={d} ν={nu} π={pi}: {verdict:?}")
                    });
                }
            }
        }
    }
    Ok(report)
}

// -- 3 ----------------------------------------------------------------------

/// Theorem "degree", both directions, with the pairing analysis.
pub fn thm_degree(n_max: usize, d_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("thm-degree");
    for n in 1..=n_max {
        for d in 2..=d_max {
            for sigma in all_perm_tuples(n, d) {
                let om = omega(&sigma);
                let melo = melonic_classify(&sigma);
                let kp = k_pure(&sigma) as i64;
                report.check(om >= 0, || format!("Ω < 0 at {sigma}"));
                let has_id = melo.pairings.contains(&Perm::identity(n));
                report.check(
                    (om == 0) == (melo.is_melonic && has_id),
                    || format!("Ω=0 ⟺ melonic-with-id fails at {sigma}"),
                );
                let bound = n as i64 - 1 + (d as i64 - 1) * (kp - 1);
                let dl = delta(&sigma)?;
                report.check(dl >= bound, || format!("δ below bound at {sigma}"));
                report.check(
                    (dl == bound) == melo.is_melonic,
                    || format!("δ-equality ⟺ melonic fails at {sigma}"),
                );
                // ε bound with the same equality characterization
                let eps = crate::invariant::epsilon(&sigma)?;
                report.check(eps >= n as i64 + kp, || format!("ε below bound at {sigma}"));
                report.check(
                    (eps == n as i64 + kp) == melo.is_melonic,
                    || format!("ε-equality ⟺ melonic fails at {sigma}"),
                );
                if melo.is_melonic {
                    // distance minimizers with maximal pure connectivity
                    let pp = PurePartition::of_tuple(&sigma);
                    let best = delta_of(&pp, &sigma)?;
                    let minimizers: Vec<Perm> = all_perms(n)
                        .into_iter()
                        .filter(|eta| {
                            PurePartition::of_tuple_and_perm(&sigma, eta) == pp
                                && distance_to_perm(&sigma, eta) as i64 == best
                        })
                        .collect();
                    let pairing = melo.canonical_pairing.clone().unwrap();
                    report.check(
                        minimizers.contains(&pairing),
                        || format!("canonical pairing not minimizing at {sigma}"),
                    );
                    if d >= 3 {
                        report.check(
                            minimizers.len() == 1 && melo.pairings.len() == 1,
                            || format!("pairing not unique at {sigma} (D = {d})"),
                        );
                    }
                }
            }
        }
    }
    Ok(report)
}

// -- 4 ----------------------------------------------------------------------

fn standard_distributions(d: usize) -> Vec<(String, DistributionSpec)> {
    vec![
        ("gaussian".into(), DistributionSpec::standard_gaussian(d)),
        ("wishart-1".into(), DistributionSpec::square_wishart(d, 1)),
        ("wishart-2".into(), DistributionSpec::square_wishart(d, 2)),
        ("identity-orbit".into(), DistributionSpec::LUOrbitIdentity { d }),
        (
            "covariance-gaussian".into(),
            DistributionSpec::GaussianWithCovariance {
                base: Box::new(DistributionSpec::TensorProductOfMatrices {
                    factors: vec![DistributionSpec::square_wishart(1, 1); d],
                }),
            },
        ),
    ]
}

/// Moments ↔ Ḡ ↔ 𝒦 ↔ Φ round trips, exact in `RatN`.
pub fn inverse_pairs(n_max: usize, d_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("inverse-pairs");
    let wg = WgCache::new();
    for d in 1..=d_max {
        for (name, dist) in standard_distributions(d) {
            let engine = Engine::new(&dist, &wg);
            for n in 1..=n_max {
                for sigma in all_perm_tuples(n, d) {
                    let m = engine.moment(&sigma)?;
                    report.check(engine.moment_from_k_mixed(&sigma)? == m, || {
                        format!("{name}: moments↔𝒦^m at {sigma}")
                    });
                    report.check(engine.moment_from_k_pure(&sigma)? == m, || {
                        format!("{name}: moments↔𝒦^p at {sigma}")
                    });
                    let g = engine.gbar(&sigma)?;
                    report.check(engine.gbar_from_k_mixed(&sigma)? == g, || {
                        format!("{name}: Ḡ↔𝒦^m at {sigma}")
                    });
                    report.check(engine.gbar_from_k_pure(&sigma)? == g, || {
                        format!("{name}: Ḡ↔𝒦^p at {sigma}")
                    });
                    report.check(
                        engine.phi_from_k_mixed(&sigma)? == engine.phi_mixed(&sigma)?,
                        || format!("{name}: Φ^m↔𝒦^m at {sigma}"),
                    );
                    report.check(
                        engine.phi_from_k_pure(&sigma)? == engine.phi_pure(&sigma)?,
                        || format!("{name}: Φ^p↔𝒦^p at {sigma}"),
                    );
                }
            }
        }
    }
    Ok(report)
}

// -- 5 ----------------------------------------------------------------------

/// Closed-form precursors of the Gaussian and the Wishart tensor.
pub fn closed_form_precursors(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("closed-form-precursors");
    let wg = WgCache::new();
    // Gaussian: 𝒦^p = N^{1-D} δ_{n,1}; D = 3 capped at n ≤ 2 for runtime
    for d in 1..=3usize {
        let g = DistributionSpec::standard_gaussian(d);
        let engine = Engine::new(&g, &wg);
        let local_cap = if d == 3 { n_max.min(2) } else { n_max };
        for n in 1..=local_cap {
            for sigma in all_perm_tuples(n, d) {
                let expected = if n == 1 {
                    RatN::n_pow(1 - d as i64)
                } else {
                    RatN::zero()
                };
                report.check(engine.k_pure(&sigma)? == expected, || {
                    format!("Gaussian d={d} 𝒦^p at {sigma}")
                });
            }
        }
    }
    // Wishart (N^D, N^{D'}): 𝒦^m = N^{D'-n(D+D'-1)} δ_{K(η),1} on constant
    // tuples, zero elsewhere
    for d_prime in 1..=2usize {
        let w = DistributionSpec::square_wishart(2, d_prime);
        let engine = Engine::new(&w, &wg);
        for n in 1..=n_max {
            for sigma in all_perm_tuples(n, 2) {
                let expected = match sigma.constant_value() {
                    Some(eta) if eta.cycle_count() == 1 => {
                        RatN::n_pow(d_prime as i64 - (n * (1 + d_prime)) as i64)
                    }
                    _ => RatN::zero(),
                };
                report.check(engine.k_mixed(&sigma)? == expected, || {
                    format!("Wishart D'={d_prime} 𝒦^m at {sigma}")
                });
            }
        }
    }
    Ok(report)
}

// -- 6 ----------------------------------------------------------------------

fn sample_numeric_tensor(seed: i64, d: usize, dim: usize) -> MixedTensor {
    // deterministic rational entries, real, not positive anything
    let size = dim.pow(d as u32);
    let entries = (0..size * size)
        .map(|k| {
            let v = ((seed + k as i64) * (seed + 2 * k as i64 + 3)) % 7 - 3;
            QC::real(BigRational::new(v.into(), (1 + (k as i64 % 3)).into()))
        })
        .collect();
    MixedTensor::new(d, dim, entries).unwrap()
}

/// Additivity of the precursors for sums of independent tensors.
pub fn additivity(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("additivity");
    let wg = WgCache::new();
    let d = 2usize;
    // Gaussian(s) ⊕ Gaussian(t) = Gaussian(s + t)
    let s = BigRational::new(2.into(), 1.into());
    let t = BigRational::new(1.into(), 3.into());
    let g1 = DistributionSpec::Gaussian { d, scale: s.clone() };
    let g2 = DistributionSpec::Gaussian { d, scale: t.clone() };
    let sum = crate::dist::scale_and_sum(&[
        (g1.clone(), BigRational::one()),
        (g2.clone(), BigRational::one()),
    ])?;
    let e1 = Engine::new(&g1, &wg);
    let e2 = Engine::new(&g2, &wg);
    let es = Engine::new(&sum, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let lhs = es.k_pure(&sigma)?;
            let rhs = e1.k_pure(&sigma)? + e2.k_pure(&sigma)?;
            report.check(lhs == rhs, || format!("Gaussian sum 𝒦^p at {sigma}"));
            let lhs_m = es.k_mixed(&sigma)?;
            let rhs_m = e1.k_mixed(&sigma)? + e2.k_mixed(&sigma)?;
            report.check(lhs_m == rhs_m, || format!("Gaussian sum 𝒦^m at {sigma}"));
        }
    }
    // covariance Gaussians over scaled identity covariances (the family
    // closed under sums with LU-invariant members)
    let c1 = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::Scaled {
            factor: s,
            base: Box::new(DistributionSpec::LUOrbitIdentity { d }),
        }),
    };
    let c2 = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::Scaled {
            factor: t,
            base: Box::new(DistributionSpec::LUOrbitIdentity { d }),
        }),
    };
    let csum = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::Scaled {
            factor: BigRational::new(7.into(), 3.into()),
            base: Box::new(DistributionSpec::LUOrbitIdentity { d }),
        }),
    };
    let e1 = Engine::new(&c1, &wg);
    let e2 = Engine::new(&c2, &wg);
    let es = Engine::new(&csum, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let lhs = es.k_pure(&sigma)?;
            let rhs = e1.k_pure(&sigma)? + e2.k_pure(&sigma)?;
            report.check(lhs == rhs, || {
                format!("covariance-Gaussian sum 𝒦^p at {sigma}")
            });
        }
    }
    // numeric covariance sum through scale_and_sum
    let dim = 3usize;
    let a1 = sample_numeric_tensor(5, d, dim);
    let a2 = sample_numeric_tensor(11, d, dim);
    let n1 = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::NumericMixed { tensor: a1 }),
    };
    let n2 = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::NumericMixed { tensor: a2 }),
    };
    let nsum = crate::dist::scale_and_sum(&[
        (n1.clone(), BigRational::one()),
        (n2.clone(), BigRational::one()),
    ])?;
    let e1 = Engine::new(&n1, &wg);
    let e2 = Engine::new(&n2, &wg);
    let es = Engine::new(&nsum, &wg);
    for n in 1..=n_max.min(dim) {
        for sigma in all_perm_tuples(n, d) {
            // the moments of the summed law are only meaningful at N = dim
            let lhs = es.k_pure(&sigma)?.eval_at(dim as i64)?;
            let rhs = e1.k_pure(&sigma)?.eval_at(dim as i64)?
                + e2.k_pure(&sigma)?.eval_at(dim as i64)?;
            report.check(lhs == rhs, || {
                format!("numeric covariance sum 𝒦^p at {sigma} (N = {dim})")
            });
        }
    }
    Ok(report)
}

// -- 7 ----------------------------------------------------------------------

/// Microscopic vs macroscopic: closed entry-level forms symbolically, and
/// the Wick oracle numerically at `N = 3`.
pub fn micro_macro(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("micro-macro");
    let wg = WgCache::new();
    // symbolic closed forms (micro_moment cross-checks internally)
    for dist in [
        DistributionSpec::standard_gaussian(2),
        DistributionSpec::square_wishart(2, 1),
        DistributionSpec::square_wishart(2, 2),
    ] {
        let engine = Engine::new(&dist, &wg);
        for n in 1..=n_max {
            for sigma in all_perm_tuples(n, 2) {
                let ok = engine.micro_moment(&sigma).is_ok();
                report.check(ok, || format!("micro/macro moment at {sigma}"));
            }
        }
    }
    // numeric covariance Gaussian at N = 3: entry-level sums vs Ḡ and 𝒦
    let dim = 3usize;
    let d = 2usize;
    let a = sample_numeric_tensor(7, d, dim);
    let dist = DistributionSpec::GaussianWithCovariance {
        base: Box::new(DistributionSpec::NumericMixed { tensor: a.clone() }),
    };
    let engine = Engine::new(&dist, &wg);
    for n in 1..=n_max.min(dim) {
        // distinct index map j_c(k) = k
        for sigma in all_perm_tuples(n, d) {
            let micro = |subset: &[usize], eta: &Perm| -> QC {
                // Π_{k ∈ subset} A_{j∘σ⃗(k); j∘η(k)} at j_c(k) = k
                let mut term = QC::one();
                for (slot, &k) in subset.iter().enumerate() {
                    let i: Vec<usize> = (0..d).map(|c| sigma.component(c).apply(k)).collect();
                    let j: Vec<usize> = (0..d).map(|_| subset[eta.apply(slot)]).collect();
                    term = term * a.get(&i, &j).clone();
                }
                term
            };
            let scale = |k: usize| -> BigRational {
                BigRational::new(
                    BigInt::one(),
                    BigInt::from(dim as i64).pow((k * (d - 1)) as u32),
                )
            };
            // micro moment on a subset of slots
            let subset_moment = |subset: &[usize]| -> BigRational {
                let mut acc = QC::zero();
                for eta in all_perms(subset.len()) {
                    acc = acc + micro(subset, &eta);
                }
                scale(subset.len()) * acc.re
            };
            let full: Vec<usize> = (0..n).collect();
            let micro_m = subset_moment(&full);
            let macro_m = engine.gbar(&sigma)?.eval_at(dim as i64)?;
            report.check(micro_m == macro_m, || {
                format!("numeric micro moment vs Ḡ at {sigma}")
            });
            // micro cumulant: classical cumulant of the slot products
            let mut micro_c = BigRational::zero();
            for pi in all_partitions(n) {
                let mut term = BigRational::from_integer(pi.moebius().into());
                for block in pi.blocks() {
                    term *= subset_moment(&block);
                }
                micro_c += term;
            }
            let macro_c = engine.k_pure(&sigma)?.eval_at(dim as i64)?;
            report.check(micro_c == macro_c, || {
                format!("numeric micro cumulant vs 𝒦^p at {sigma}")
            });
            // both Wick routes agree on the moments as well
            let wick = wick_pairing_oracle(&a, &sigma)?;
            let sym = engine.moment(&sigma)?.eval_at(dim as i64)?;
            report.check(QC::real(sym) == wick, || {
                format!("wick oracle vs symbolic moment at {sigma}")
            });
        }
    }
    Ok(report)
}

// -- 8 ----------------------------------------------------------------------

/// Scaling-theorem harness: leading terms of the exact precursors match the
/// forest formulas, for tensor products of square Wisharts (mixed) and for
/// covariance Gaussians (pure), including the free-Poisson value.
pub fn scaling_harness(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("scaling-harness");
    let wg = WgCache::new();
    let d = 2usize;
    let cov = DistributionSpec::TensorProductOfMatrices {
        factors: vec![DistributionSpec::square_wishart(1, 1); d],
    };
    let phi_profile = Profile::extract_phi(&cov, &wg, Regime::MatrixProduct, n_max)?;
    let kappa_profile = Profile::extract_kappa(&cov, &wg, Regime::MatrixProduct, n_max)?;
    let engine = Engine::new(&cov, &wg);

    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            // Thm asymptotics-mixed-tensorial: exact 𝒦^m vs forest sum
            let exact = engine.k_mixed(&sigma)?;
            let exponent = Regime::MatrixProduct.kappa_exponent(&sigma)?;
            let predicted = kappa_mixed(&phi_profile, &sigma)?;
            let verdict = extract_and_compare(&exact, exponent, &predicted);
            report.check(verdict.is_ok(), || {
                format!("𝒦^m forest sum at {sigma}: {verdict:?}")
            });
            if k_mixed(&sigma) == 1 {
                // connected shortcut with matrix free cumulants all 1
                let shortcut = kappa_mixed_connected(&phi_profile, &sigma)?;
                report.check(shortcut == predicted, || {
                    format!("connected κ^m shortcut at {sigma}")
                });
                // inverse: φ from κ on connected tuples
                let phi_back = phi_mixed_from_kappa(&kappa_profile, &sigma)?;
                report.check(phi_back == phi_profile.get(&sigma)?, || {
                    format!("φ^m from κ^m at {sigma}")
                });
            }
        }
    }

    // pure side: T_A with the Wishart-product covariance
    let ta = DistributionSpec::GaussianWithCovariance {
        base: Box::new(cov.clone()),
    };
    let ta_engine = Engine::new(&ta, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let exact = ta_engine.k_pure(&sigma)?;
            let exponent = Regime::PureEpsilon.kappa_exponent(&sigma)?;
            let predicted =
                kappa_from_covariance(&CovarianceCase::General(&kappa_profile), &sigma)?;
            let verdict = extract_and_compare(&exact, exponent, &predicted);
            report.check(verdict.is_ok(), || {
                format!("𝒦^p[T_A] vs covariance formula at {sigma}: {verdict:?}")
            });
        }
    }

    // free-Poisson value: Ã = r^{1-D} A with ratios r, melonic connected σ⃗
    let r = BigRational::new(1.into(), 2.into());
    let cov_r = DistributionSpec::Scaled {
        factor: BigRational::from_integer(2.into()), // r^{1-D} = 1/r at D = 2
        base: Box::new(DistributionSpec::TensorProductOfMatrices {
            factors: vec![
                DistributionSpec::WishartTensor {
                    d: 1,
                    d_prime: 1,
                    ratios: vec![r.clone()],
                };
                d
            ],
        }),
    };
    let ta_r = DistributionSpec::GaussianWithCovariance {
        base: Box::new(cov_r),
    };
    let tar_engine = Engine::new(&ta_r, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let melo = melonic_classify(&sigma);
            if !melo.is_melonic || k_mixed(&sigma) != 1 {
                continue;
            }
            let exact = tar_engine.k_pure(&sigma)?;
            let exponent = Regime::PureEpsilon.kappa_exponent(&sigma)?;
            let verdict = extract_and_compare(&exact, exponent, &r);
            report.check(verdict.is_ok(), || {
                format!("free-Poisson κ^p = r at {sigma}: {verdict:?}")
            });
        }
    }
    Ok(report)
}

// -- 9 ----------------------------------------------------------------------

/// Global invariance of the Wishart tensor: support on constant tuples, the
/// matrix-reduction identity, and the asymptotic dictionary.
pub fn global_invariance(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("global-invariance");
    let wg = WgCache::new();
    let d = 2usize;
    let w = DistributionSpec::square_wishart(d, d);
    let engine = Engine::new(&w, &wg);
    // matrix side: Wishart matrix of parameters (N^D, N^D), i.e. a square
    // ratio-one Wishart evaluated at dimension N^D
    let wmat = DistributionSpec::square_wishart(1, 1);
    let mat_engine = Engine::new(&wmat, &wg);
    let mat_kappa = Profile::extract_kappa(&wmat, &wg, Regime::MatrixProduct, n_max)?;

    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let km = engine.k_mixed(&sigma)?;
            let kp = engine.k_pure(&sigma)?;
            match sigma.constant_value() {
                None => {
                    report.check(km.is_zero(), || format!("𝒦^m ≠ 0 off constants at {sigma}"));
                    report.check(kp.is_zero(), || format!("𝒦^p ≠ 0 off constants at {sigma}"));
                }
                Some(eta) => {
                    let single = PermTuple::new(vec![eta.clone()])?;
                    // Eq. large-group-precursors: the tensor precursor equals
                    // the matrix precursor at dimension N^D
                    let mat = mat_engine.k_mixed(&single)?.substitute_n_power(d as u32);
                    report.check(km == mat, || {
                        format!("𝒦^m vs matrix reduction at {sigma}")
                    });
                    let mat_p = mat_engine.k_pure(&single)?.substitute_n_power(d as u32);
                    report.check(kp == mat_p, || {
                        format!("𝒦^p vs matrix reduction at {sigma}")
                    });
                }
            }
            // asymptotic dictionary: κ^m_σ⃗(w) = δ_{K(η),1} on constants
            let dict = global_kappa_mixed(&mat_kappa, &sigma)?;
            let expected = match sigma.constant_value() {
                Some(eta) if eta.cycle_count() == 1 => BigRational::one(),
                _ => BigRational::zero(),
            };
            report.check(dict == expected, || {
                format!("κ dictionary at {sigma}")
            });
            // and the exact leading term of 𝒦^m matches the dictionary at
            // the global-invariant exponent n - δ(σ̂_D) - nD
            let hat = hat_extension(&sigma, d);
            let exponent = (n as i64 - delta(&hat)?) - (n * d) as i64;
            let verdict = extract_and_compare(&km, exponent, &dict);
            report.check(verdict.is_ok(), || {
                format!("𝒦^m leading vs dictionary at {sigma}: {verdict:?}")
            });
            // single-η expansions reproduce the exact moments and cumulants
            report.check(
                global_moment_mixed(&engine, &sigma)? == engine.moment(&sigma)?,
                || format!("global moment expansion at {sigma}"),
            );
            report.check(
                global_phi_mixed(&engine, &sigma)? == engine.phi_mixed(&sigma)?,
                || format!("global Φ expansion at {sigma}"),
            );
        }
    }
    Ok(report)
}

// -- 10 ---------------------------------------------------------------------

/// Product identities: symbolic with `B = 1`, numeric at `N = 2` against the
/// Wick oracle, the bilinear reduction, and the `D = 1` classical free
/// product formula.
pub fn product_identities(n_free: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("product-identities");
    let wg = WgCache::new();
    let d = 2usize;
    let dim = 2usize;
    let n_max = 2usize;

    // (a) B = identity: products collapse
    let id = DistributionSpec::LUOrbitIdentity { d };
    let gaussian = DistributionSpec::standard_gaussian(d);
    let be = Engine::new(&id, &wg);
    let te = Engine::new(&gaussian, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            report.check(
                product_gbar(&be, &te, &sigma)? == te.gbar(&sigma)?,
                || format!("Ḡ product with B = 1 at {sigma}"),
            );
            let full = PurePartition::full(n);
            let lower = PurePartition::of_tuple(&sigma);
            report.check(
                product_k_pure(&be, &te, &sigma, &lower, &full)?
                    == te.k_pure_super(&full, &lower, &sigma)?,
                || format!("𝒦^p product with B = 1 at {sigma}"),
            );
        }
    }

    // (b) numeric B at N = 2 against the direct Wick expansion
    let b_tensor = sample_numeric_tensor(3, d, dim);
    let b_dist = DistributionSpec::NumericMixed {
        tensor: b_tensor.clone(),
    };
    let be = Engine::new(&b_dist, &wg);
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            // oracle: E[Tr_σ⃗(B·T, T̄)] = N^{n(1-D)} Σ_η Tr_{σ⃗η}(B)
            let family: Vec<&MixedTensor> = std::iter::repeat(&b_tensor).take(n).collect();
            let mut acc = QC::zero();
            for eta in all_perms(n) {
                acc = acc + numeric_trace_mixed(&family, &sigma.compose_perm(&eta))?;
            }
            let scale = BigRational::new(
                BigInt::one(),
                BigInt::from(dim as i64).pow((n * (d - 1)) as u32),
            );
            let oracle = &scale * acc.re;
            let formula = product_moment(&be, &te, &wg, &sigma)?.eval_at(dim as i64)?;
            report.check(formula == oracle, || {
                format!("moments of B·T vs oracle at {sigma}")
            });
            // Prop Gbar-pure against the oracle moments
            let oracle_gbar = {
                let mut g = RatN::zero();
                for nu in all_perm_tuples(n, d) {
                    let mut acc = QC::zero();
                    let fam: Vec<&MixedTensor> =
                        std::iter::repeat(&b_tensor).take(n).collect();
                    for eta in all_perms(n) {
                        acc = acc + numeric_trace_mixed(&fam, &nu.compose_perm(&eta))?;
                    }
                    let m = RatN::from_rational(&(&scale * acc.re));
                    g = g + m * wg.value_tuple(&nu.compose(&sigma.inverse()))?;
                }
                g.eval_at(dim as i64)?
            };
            let formula_gbar = product_gbar(&be, &te, &sigma)?.eval_at(dim as i64)?;
            report.check(formula_gbar == oracle_gbar, || {
                format!("Ḡ of B·T vs oracle at {sigma}")
            });
        }
    }

    // (c) bilinear reduction (B₁·T, B̄₂·T̄) = ((B₂†B₁)·T, T̄) with B₂ a
    // tensor product of matrices
    let m1 = vec![
        QC::from_ints(1, 0),
        QC::from_ints(2, 1),
        QC::from_ints(0, -1),
        QC::from_ints(3, 0),
    ];
    let m2 = vec![
        QC::from_ints(2, 0),
        QC::from_ints(-1, 0),
        QC::from_ints(1, 1),
        QC::from_ints(0, 2),
    ];
    let b1 = sample_numeric_tensor(9, d, dim);
    let b2 = MixedTensor::from_matrix_factors(dim, &[m1, m2])?;
    let reduced = b2.dagger_mul(&b1)?;
    for n in 1..=n_max {
        for sigma in all_perm_tuples(n, d) {
            let lhs = bilinear_moment_oracle(&b1, &b2, &sigma, dim)?;
            let rhs = {
                let fam: Vec<&MixedTensor> = std::iter::repeat(&reduced).take(n).collect();
                let mut acc = QC::zero();
                for eta in all_perms(n) {
                    acc = acc + numeric_trace_mixed(&fam, &sigma.compose_perm(&eta))?;
                }
                let scale = BigRational::new(
                    BigInt::one(),
                    BigInt::from(dim as i64).pow((n * (d - 1)) as u32),
                );
                QC {
                    re: &scale * acc.re,
                    im: &scale * acc.im,
                }
            };
            report.check(lhs == rhs, || {
                format!("bilinear reduction moments at {sigma}")
            });
        }
    }

    // (d) D = 1 reduction to the classical free product formula
    let rate = BigRational::one();
    let ka = Profile::from_fn(Regime::MatrixProduct, Kind::Mixed, 1, n_free, |sigma| {
        // free Poisson(1): κ_ℓ = 1 per cycle
        let _ = sigma;
        BigRational::one()
    });
    let kb = Profile::from_fn(Regime::MatrixProduct, Kind::Mixed, 1, n_free, |sigma| {
        sigma
            .component(0)
            .cycles()
            .iter()
            .map(|c| {
                if c.len() == 2 {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            })
            .product()
    });
    let pair = FreePair::new(
        free_poisson_moments(&rate, 2 * n_free),
        semicircle_moments(2 * n_free),
    );
    for n in 1..=n_free {
        let cycle = PermTuple::new(vec![Perm::from_cycles(n, &[(0..n).collect()])])?;
        let product_kappa = Profile::from_values(
            Regime::MatrixProduct,
            Kind::Mixed,
            {
                let mut map = std::collections::HashMap::new();
                for m in 1..=n {
                    for tau in all_perm_tuples(m, 1) {
                        let v = kappa_product_mixed_if_connected(&kb, &ka, &tau)?;
                        map.insert(tau, v);
                    }
                }
                map
            },
        );
        // moment of (ba)^n two ways
        let via_engine = phi_mixed_from_kappa(&product_kappa, &cycle)?;
        let word: Vec<(Letter, usize)> = (0..n)
            .flat_map(|_| [(Letter::B, 1), (Letter::A, 1)])
            .collect();
        let via_oracle = pair.word_moment(&word);
        report.check(via_engine == via_oracle, || {
            format!("E[(ba)^{n}] via κ products vs freeness oracle")
        });
        // connected shortcut agrees with the intertwined-pair sum
        let full_sum = kappa_product_mixed(&kb, &ka, &cycle)?;
        let shortcut = kappa_product_mixed_connected(&kb, &ka, &cycle)?;
        report.check(full_sum == shortcut, || {
            format!("κ^m(ba) intertwined vs connected at n = {n}")
        });
    }
    Ok(report)
}

fn kappa_product_mixed_if_connected(
    kb: &Profile,
    ka: &Profile,
    tau: &PermTuple,
) -> Result<BigRational> {
    if k_mixed(tau) == 1 {
        kappa_product_mixed_connected(kb, ka, tau)
    } else {
        // multiplicative over components for the profile table
        let mut acc = BigRational::one();
        for block in mixed_orbit_partition(tau).blocks() {
            acc *= kappa_product_mixed_connected(kb, ka, &tau.restrict(&block))?;
        }
        Ok(acc)
    }
}

fn bilinear_moment_oracle(
    b1: &MixedTensor,
    b2: &MixedTensor,
    sigma: &PermTuple,
    dim: usize,
) -> Result<QC> {
    // E[Tr_σ⃗(B₁·T, B̄₂·T̄)] by direct Wick expansion over index maps
    let n = sigma.n();
    let d = sigma.d();
    let size = dim.pow(d as u32);
    let decode = |mut code: usize| -> Vec<usize> {
        let mut out = vec![0usize; d];
        for c in (0..d).rev() {
            out[c] = code % dim;
            code /= dim;
        }
        out
    };
    let all_maps = |n: usize| -> Vec<Vec<Vec<usize>>> {
        let total = size.pow(n as u32);
        (0..total)
            .map(|mut code| {
                let mut map = Vec::with_capacity(n);
                for _ in 0..n {
                    map.push(decode(code % size));
                    code /= size;
                }
                map
            })
            .collect()
    };
    let maps = all_maps(n);
    let mut acc = QC::zero();
    for i in &maps {
        for j in &maps {
            // B₁ factor at (i∘σ⃗; j)
            let mut fb1 = QC::one();
            for k in 0..n {
                let row: Vec<usize> = (0..d).map(|c| i[sigma.component(c).apply(k)][c]).collect();
                fb1 = fb1 * b1.get(&row, &j[k]).clone();
                if fb1.is_zero() {
                    break;
                }
            }
            if fb1.is_zero() {
                continue;
            }
            for kk in &maps {
                let mut fb2 = QC::one();
                for k in 0..n {
                    fb2 = fb2 * b2.get(&i[k], &kk[k]).conj();
                    if fb2.is_zero() {
                        break;
                    }
                }
                if fb2.is_zero() {
                    continue;
                }
                // E[Π T_{j(k)} T̄_{kk(k)}] = N^{n(1-D)} Σ_η Π δ_{j(k), kk(η(k))}
                let mut wick = 0i64;
                'eta: for eta in all_perms(n) {
                    for k in 0..n {
                        if j[k] != kk[eta.apply(k)] {
                            continue 'eta;
                        }
                    }
                    wick += 1;
                }
                if wick != 0 {
                    let w = BigRational::from_integer(wick.into());
                    acc = acc
                        + QC {
                            re: &fb1.re * &fb2.re * &w - &fb1.im * &fb2.im * &w,
                            im: &fb1.re * &fb2.im * &w + &fb1.im * &fb2.re * &w,
                        };
                }
            }
        }
    }
    let scale = BigRational::new(
        BigInt::one(),
        BigInt::from(dim as i64).pow((n * (d - 1)) as u32),
    );
    Ok(QC {
        re: &scale * acc.re,
        im: &scale * acc.im,
    })
}

// -- 11 ---------------------------------------------------------------------

/// Exponent-decomposition lemmas as exhaustive integer identities.
pub fn exponent_lemmas(n_max: usize, n_wishart: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("exponent-lemmas");
    let d = 2usize;

    for n in 1..=n_max {
        let tuples = all_perm_tuples(n, d);
        let pures = all_pure_partitions(n)?;
        for sigma in &tuples {
            let pi_sigma = mixed_orbit_partition(sigma);
            let forest = forests_mixed(sigma)?;
            for rho in &tuples {
                let pi_rho = mixed_orbit_partition(rho);
                // mixed identity
                for pi in pi_rho.coarsenings() {
                    let lhs = 2 * (pi.num_blocks() as i64 - pi_rho.num_blocks() as i64)
                        + rho.cycle_count() as i64;
                    let genus_sum: i64 = sigma
                        .components()
                        .iter()
                        .zip(rho.components())
                        .map(|(s, r)| genus(r, s))
                        .sum();
                    let joints: Vec<SetPartition> = sigma
                        .components()
                        .iter()
                        .zip(rho.components())
                        .map(|(s, r)| s.cycle_partition().join(&r.cycle_partition()))
                        .collect();
                    let sigma_cycles: Vec<SetPartition> = sigma
                        .components()
                        .iter()
                        .map(|s| s.cycle_partition())
                        .collect();
                    let ld = l_d_quantity(&joints, &pi_sigma, &sigma_cycles)?;
                    let l = l_quantity(&pi_rho.join(&pi_sigma), &pi, &pi_rho)?;
                    let rhs = 2 * (pi.join(&pi_sigma).num_blocks() as i64
                        - pi_sigma.num_blocks() as i64)
                        + distance_tuple(rho, sigma) as i64
                        + sigma.cycle_count() as i64
                        - 2 * genus_sum
                        - 2 * l
                        - 2 * ld;
                    report.check(lhs == rhs, || {
                        format!("mixed exponent identity at σ={sigma} ρ={rho} π={pi}")
                    });
                    let member = forest.contains(&(rho.clone(), pi.clone()));
                    report.check(
                        (genus_sum == 0 && l == 0 && ld == 0) == member,
                        || format!("mixed equality case at σ={sigma} ρ={rho} π={pi}"),
                    );
                }
                // Gaussian and pure identities, for every η
                for eta in all_perms(n) {
                    let se = sigma.compose_perm(&eta.inverse());
                    let re = rho.compose_perm(&eta.inverse());
                    let genus_sum: i64 = se
                        .components()
                        .iter()
                        .zip(re.components())
                        .map(|(s, r)| genus(r, s))
                        .sum();
                    let joints: Vec<SetPartition> = se
                        .components()
                        .iter()
                        .zip(re.components())
                        .map(|(s, r)| s.cycle_partition().join(&r.cycle_partition()))
                        .collect();
                    let se_cycles: Vec<SetPartition> =
                        se.components().iter().map(|s| s.cycle_partition()).collect();
                    let ld = l_d_quantity(&joints, &mixed_orbit_partition(&se), &se_cycles)?;
                    let kp_se = k_pure_with(sigma, &eta) as i64;
                    let pse = PurePartition::of_tuple_and_perm(sigma, &eta);
                    let pre = PurePartition::of_tuple_and_perm(rho, &eta);
                    // Gaussian flavor: Π = Π_p(ρ⃗, η)
                    {
                        let lhs = -(distance_to_perm(rho, &eta) as i64);
                        let rhs = 2 * (pse.join(&pre).num_blocks() as i64 - kp_se)
                            - distance_to_perm(sigma, &eta) as i64
                            + distance_tuple(sigma, rho) as i64
                            - 2 * genus_sum
                            - 2 * ld;
                        report.check(lhs == rhs, || {
                            format!("gaussian exponent identity at σ={sigma} ρ={rho} η={eta}")
                        });
                        report.check(
                            (genus_sum == 0 && ld == 0) == in_g_set(&se, &re),
                            || format!("gaussian equality case at σ={sigma} ρ={rho} η={eta}"),
                        );
                    }
                    // pure flavor: all Π ≥ Π_p(ρ⃗, η)
                    for pi in &pures {
                        if !pre.leq(pi) {
                            continue;
                        }
                        let l = l_quantity(
                            pse.join(&pre).partition(),
                            pi.partition(),
                            pre.partition(),
                        )?;
                        let lhs = 2 * (pi.num_blocks() as i64 - pre.num_blocks() as i64)
                            - distance_to_perm(rho, &eta) as i64;
                        let rhs = 2 * (pse.join(pi).num_blocks() as i64 - kp_se)
                            - distance_to_perm(sigma, &eta) as i64
                            + distance_tuple(sigma, rho) as i64
                            - 2 * genus_sum
                            - 2 * l
                            - 2 * ld;
                        report.check(lhs == rhs, || {
                            format!("pure exponent identity at σ={sigma} ρ={rho} η={eta} Π={pi}")
                        });
                        let member = forests_pure_at(sigma, &eta)?
                            .contains(&(rho.clone(), pi.clone()));
                        report.check(
                            (genus_sum == 0 && l == 0 && ld == 0) == member,
                            || format!("pure equality case at σ={sigma} ρ={rho} η={eta} Π={pi}"),
                        );
                    }
                }
                // Delta vs L_D + Omega
                let delta_q = crate::invariant::delta_quantity(sigma, rho);
                let joints: Vec<SetPartition> = sigma
                    .components()
                    .iter()
                    .zip(rho.components())
                    .map(|(s, r)| s.cycle_partition().join(&r.cycle_partition()))
                    .collect();
                let sigma_cycles: Vec<SetPartition> = sigma
                    .components()
                    .iter()
                    .map(|s| s.cycle_partition())
                    .collect();
                let ld = l_d_quantity(&joints, &pi_sigma, &sigma_cycles)?;
                report.check(delta_q == ld + omega(sigma), || {
                    format!("Δ = L_D + Ω at σ={sigma} τ={rho}")
                });
                report.check(
                    (delta_q == 0) == (crate::invariant::delta_quantity(rho, sigma) == 0),
                    || format!("Δ symmetry at σ={sigma} τ={rho}"),
                );
            }
            // delta-eps-decreasing
            for pi in PurePartition::of_tuple(sigma).coarsenings() {
                let dl = delta_of(&pi, sigma)?;
                let eps = epsilon_of(&pi, sigma)?;
                report.check(dl >= eps - 2 * pi.num_blocks() as i64, || {
                    format!("δ ≥ ε - 2#Π fails at {sigma} Π={pi}")
                });
                report.check(
                    (dl == eps - 2 * pi.num_blocks() as i64)
                        == is_decreasing_from(sigma, &pi)?,
                    || format!("decreasing equality case at {sigma} Π={pi}"),
                );
            }
        }
        // particular-LD lower bound
        for sigma in &tuples {
            let pi_sigma = mixed_orbit_partition(sigma);
            for eta in all_perms(n) {
                let joints: Vec<SetPartition> = sigma
                    .components()
                    .iter()
                    .map(|s| s.cycle_partition().join(&eta.cycle_partition()))
                    .collect();
                let sigma_cycles: Vec<SetPartition> = sigma
                    .components()
                    .iter()
                    .map(|s| s.cycle_partition())
                    .collect();
                let ld = l_d_quantity(&joints, &pi_sigma, &sigma_cycles)?;
                let k_joint = pi_sigma.join(&eta.cycle_partition()).num_blocks() as i64;
                let bound = (d as i64 - 1) * (pi_sigma.num_blocks() as i64 - k_joint);
                report.check(ld >= bound, || {
                    format!("particular-LD bound at σ={sigma} η={eta}")
                });
            }
        }
    }

    // bound-for-wishart at n ≤ n_wishart
    for n in 1..=n_wishart {
        for sigma in all_perm_tuples(n, d) {
            let k = k_mixed(&sigma) as i64;
            let mut attained = false;
            for eta in all_perms(n) {
                let joined = mixed_orbit_partition(&sigma).join(&eta.cycle_partition());
                if joined.num_blocks() != 1 {
                    continue;
                }
                let lhs = distance_to_perm(&sigma, &eta) as i64
                    + (d * eta.cayley_norm()) as i64
                    - sigma.cayley_norm() as i64;
                report.check(lhs >= 2 * d as i64 * (k - 1), || {
                    format!("wishart bound at σ={sigma} η={eta}")
                });
                if lhs == 2 * d as i64 * (k - 1) {
                    attained = true;
                }
            }
            report.check(attained, || format!("wishart bound never attained at {sigma}"));
        }
    }
    Ok(report)
}

// -- 12 ---------------------------------------------------------------------

/// Melonic generating sums: the `D = 1` reduction and a `D = 2` pure case
/// checked against direct enumeration.
pub fn melonic_generating(n_max: usize) -> Result<SuiteReport> {
    let mut report = SuiteReport::new("melonic-generating");
    let one = |_: &PermTuple| BigRational::one();
    let kappa_one = |_: &PermTuple| Ok(BigRational::one());
    for n in 1..=n_max {
        let v = melonic_generating_sum(Relabeling::Mixed, &one, &kappa_one, n, 1)?;
        let fact: i64 = (1..=(n as i64 - 1)).product::<i64>().max(1);
        report.check(v == BigRational::from_integer(fact.into()), || {
            format!("(n-1)! reduction at n = {n}: got {v}")
        });
    }
    // class-function sums equal plain sums over 𝕄_n^D
    for (n, d, relation) in [(2usize, 2usize, Relabeling::Mixed), (2, 2, Relabeling::Pure), (3, 2, Relabeling::Mixed)] {
        let weighted = melonic_generating_sum(relation, &one, &kappa_one, n, d)?;
        let mut direct = BigRational::zero();
        for sigma in all_perm_tuples(n, d) {
            if k_mixed(&sigma) == 1 && omega(&sigma) == 0 {
                direct += BigRational::one();
            }
        }
        report.check(weighted == direct, || {
            format!("melonic class sum vs direct at n={n} d={d} ({relation:?})")
        });
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Goldens
// ---------------------------------------------------------------------------

/// Canonical rows `(σ⃗ representative, quantity, value)` for regression
/// pinning.
pub fn export_goldens(suite: &str) -> Result<Vec<(String, String, RatN)>> {
    let wg = WgCache::new();
    let mut rows = vec![];
    match suite {
        "gaussian-kp" => {
            let g = DistributionSpec::standard_gaussian(2);
            let engine = Engine::new(&g, &wg);
            for n in 1..=3usize {
                for sigma in all_perm_tuples(n, 2) {
                    let (rep, _) = canonicalize(&sigma, Relabeling::Pure)?;
                    if rep != sigma {
                        continue;
                    }
                    rows.push((sigma.to_string(), "K_pure".into(), engine.k_pure(&sigma)?));
                }
            }
        }
        "wishart-kp" => {
            let w = DistributionSpec::square_wishart(2, 1);
            let engine = Engine::new(&w, &wg);
            for n in 1..=3usize {
                for sigma in all_perm_tuples(n, 2) {
                    let (rep, _) = canonicalize(&sigma, Relabeling::Mixed)?;
                    if rep != sigma {
                        continue;
                    }
                    rows.push((sigma.to_string(), "K_mixed".into(), engine.k_mixed(&sigma)?));
                }
            }
        }
        "weingarten" => {
            for n in 1..=4usize {
                let table = WeingartenTable::build(n)?;
                for (ty, v) in table.values() {
                    let label: Vec<String> = ty.iter().map(|p| p.to_string()).collect();
                    rows.push((format!("[{}]", label.join(",")), format!("W_{n}"), v.clone()));
                }
            }
        }
        other => return Err(Error::Parse(format!("unknown goldens suite `{other}`"))),
    }
    if rows.is_empty() {
        return Err(Error::Parse(format!("goldens suite `{suite}` is empty")));
    }
    Ok(rows)
}
