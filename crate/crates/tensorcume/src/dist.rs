//! Symbolic and numeric models of LU-invariant random tensors, each exposing
//! exact trace-invariant moments `E[Tr_σ⃗]` as rational functions of `N`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::invariant::{canonicalize, Relabeling};
use crate::perm::{all_perms, PermTuple};
use crate::ratn::RatN;

/// Complex number with exact rational real and imaginary parts.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QC {
    pub re: BigRational,
    pub im: BigRational,
}

impl QC {
    pub fn zero() -> QC {
        QC {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }

    pub fn one() -> QC {
        QC {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }

    pub fn real(re: BigRational) -> QC {
        QC {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_ints(re: i64, im: i64) -> QC {
        QC {
            re: BigRational::from_integer(re.into()),
            im: BigRational::from_integer(im.into()),
        }
    }

    pub fn conj(&self) -> QC {
        QC {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }
}

impl Add for QC {
    type Output = QC;
    fn add(self, o: QC) -> QC {
        QC {
            re: self.re + o.re,
            im: self.im + o.im,
        }
    }
}

impl Sub for QC {
    type Output = QC;
    fn sub(self, o: QC) -> QC {
        QC {
            re: self.re - o.re,
            im: self.im - o.im,
        }
    }
}

impl Mul for QC {
    type Output = QC;
    fn mul(self, o: QC) -> QC {
        QC {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }
}

impl Neg for QC {
    type Output = QC;
    fn neg(self) -> QC {
        QC {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul<&QC> for &QC {
    type Output = QC;
    fn mul(self, o: &QC) -> QC {
        self.clone() * o.clone()
    }
}

impl fmt::Display for QC {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else {
            write!(f, "{} + {}i", self.re, self.im)
        }
    }
}

// ---------------------------------------------------------------------------
// Numeric tensors and exact contraction
// ---------------------------------------------------------------------------

/// Deterministic mixed tensor `A_{i⃗;j⃗}` with `i⃗, j⃗ ∈ [dim]^d`.
#[derive(Clone, Debug, PartialEq)]
pub struct MixedTensor {
    pub d: usize,
    pub dim: usize,
    entries: Vec<QC>,
}

impl MixedTensor {
    pub fn new(d: usize, dim: usize, entries: Vec<QC>) -> Result<MixedTensor> {
        let size = dim.pow(d as u32);
        if entries.len() != size * size {
            return Err(Error::ShapeMismatch(format!(
                "mixed tensor needs {} entries, got {}",
                size * size,
                entries.len()
            )));
        }
        Ok(MixedTensor { d, dim, entries })
    }

    pub fn identity(d: usize, dim: usize) -> MixedTensor {
        let size = dim.pow(d as u32);
        let mut entries = vec![QC::zero(); size * size];
        for i in 0..size {
            entries[i * size + i] = QC::one();
        }
        MixedTensor { d, dim, entries }
    }

    /// Tensor product of `d` matrices of size `dim × dim`.
    pub fn from_matrix_factors(dim: usize, factors: &[Vec<QC>]) -> Result<MixedTensor> {
        let d = factors.len();
        for m in factors {
            if m.len() != dim * dim {
                return Err(Error::ShapeMismatch("matrix factor of wrong size".into()));
            }
        }
        let size = dim.pow(d as u32);
        let mut entries = vec![QC::zero(); size * size];
        for i in 0..size {
            for j in 0..size {
                let iv = decode(i, dim, d);
                let jv = decode(j, dim, d);
                let mut v = QC::one();
                for c in 0..d {
                    v = v * factors[c][iv[c] * dim + jv[c]].clone();
                }
                entries[i * size + j] = v;
            }
        }
        Ok(MixedTensor { d, dim, entries })
    }

    pub fn get(&self, i: &[usize], j: &[usize]) -> &QC {
        let size = self.dim.pow(self.d as u32);
        &self.entries[encode(i, self.dim) * size + encode(j, self.dim)]
    }

    pub fn entrywise_sum(&self, other: &MixedTensor, wa: &BigRational, wb: &BigRational) -> Result<MixedTensor> {
        if self.d != other.d || self.dim != other.dim {
            return Err(Error::ShapeMismatch("tensor sum needs equal shapes".into()));
        }
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| {
                QC {
                    re: wa * &a.re + wb * &b.re,
                    im: wa * &a.im + wb * &b.im,
                }
            })
            .collect();
        Ok(MixedTensor {
            d: self.d,
            dim: self.dim,
            entries,
        })
    }

    /// `B₂† B₁` as tensors seen as `dim^d × dim^d` matrices.
    pub fn dagger_mul(&self, b1: &MixedTensor) -> Result<MixedTensor> {
        if self.d != b1.d || self.dim != b1.dim {
            return Err(Error::ShapeMismatch("product needs equal shapes".into()));
        }
        let size = self.dim.pow(self.d as u32);
        let mut entries = vec![QC::zero(); size * size];
        for i in 0..size {
            for j in 0..size {
                let mut acc = QC::zero();
                for k in 0..size {
                    // (B₂†)_{i,k} = conj((B₂)_{k,i})
                    acc = acc + self.entries[k * size + i].conj() * b1.entries[k * size + j].clone();
                }
                entries[i * size + j] = acc;
            }
        }
        Ok(MixedTensor {
            d: self.d,
            dim: self.dim,
            entries,
        })
    }
}

/// Deterministic pure tensor pair `(T, T̄)`; by default `T̄` is the complex
/// conjugate but any pairing is accepted.
#[derive(Clone, Debug, PartialEq)]
pub struct PureTensor {
    pub d: usize,
    pub dim: usize,
    t: Vec<QC>,
    tbar: Vec<QC>,
}

impl PureTensor {
    pub fn new(d: usize, dim: usize, t: Vec<QC>, tbar: Option<Vec<QC>>) -> Result<PureTensor> {
        let size = dim.pow(d as u32);
        if t.len() != size {
            return Err(Error::ShapeMismatch("pure tensor of wrong size".into()));
        }
        let tbar = match tbar {
            Some(v) => {
                if v.len() != size {
                    return Err(Error::ShapeMismatch("conjugate tensor of wrong size".into()));
                }
                v
            }
            None => t.iter().map(QC::conj).collect(),
        };
        Ok(PureTensor { d, dim, t, tbar })
    }

    pub fn all_ones(d: usize, dim: usize) -> PureTensor {
        let size = dim.pow(d as u32);
        PureTensor {
            d,
            dim,
            t: vec![QC::one(); size],
            tbar: vec![QC::one(); size],
        }
    }

    pub fn basis_vector(d: usize, dim: usize) -> PureTensor {
        let size = dim.pow(d as u32);
        let mut t = vec![QC::zero(); size];
        t[0] = QC::one();
        PureTensor {
            d,
            dim,
            tbar: t.clone(),
            t,
        }
    }
}

fn encode(idx: &[usize], dim: usize) -> usize {
    idx.iter().fold(0, |acc, &i| acc * dim + i)
}

fn decode(mut code: usize, dim: usize, d: usize) -> Vec<usize> {
    let mut out = vec![0; d];
    for c in (0..d).rev() {
        out[c] = code % dim;
        code /= dim;
    }
    out
}

/// Iterate over all maps `[n] -> [dim]^d`, presented as `[k][c]` matrices.
fn index_maps(n: usize, d: usize, dim: usize) -> impl Iterator<Item = Vec<Vec<usize>>> {
    let size = dim.pow(d as u32);
    let total = size.pow(n as u32);
    (0..total).map(move |mut code| {
        let mut map = Vec::with_capacity(n);
        for _ in 0..n {
            map.push(decode(code % size, dim, d));
            code /= size;
        }
        map
    })
}

/// Exact `Tr_σ⃗(A^{(1)}, …, A^{(n)}) = Σ_j Π_k A^{(k)}_{j∘σ⃗(k); j(k)}`.
pub fn numeric_trace_mixed(tensors: &[&MixedTensor], sigma: &PermTuple) -> Result<QC> {
    let n = sigma.n();
    if tensors.len() != n {
        return Err(Error::ShapeMismatch("family length must equal n".into()));
    }
    let d = tensors[0].d;
    let dim = tensors[0].dim;
    if sigma.d() != d || tensors.iter().any(|t| t.d != d || t.dim != dim) {
        return Err(Error::ShapeMismatch("tensors and tuple disagree on shape".into()));
    }
    check_contraction_cap(n, d, dim)?;
    let mut acc = QC::zero();
    for j in index_maps(n, d, dim) {
        let mut term = QC::one();
        for k in 0..n {
            let i: Vec<usize> = (0..d)
                .map(|c| j[sigma.component(c).apply(k)][c])
                .collect();
            term = term * tensors[k].get(&i, &j[k]).clone();
            if term.is_zero() {
                break;
            }
        }
        acc = acc + term;
    }
    Ok(acc)
}

/// Exact `Tr_σ⃗(T⃗, T̄⃗) = Σ_j Π_k T^{(k)}_{j∘σ⃗(k)} T̄^{(k)}_{j(k)}`.
pub fn numeric_trace_pure(tensors: &[&PureTensor], sigma: &PermTuple) -> Result<QC> {
    let n = sigma.n();
    if tensors.len() != n {
        return Err(Error::ShapeMismatch("family length must equal n".into()));
    }
    let d = tensors[0].d;
    let dim = tensors[0].dim;
    if sigma.d() != d || tensors.iter().any(|t| t.d != d || t.dim != dim) {
        return Err(Error::ShapeMismatch("tensors and tuple disagree on shape".into()));
    }
    check_contraction_cap(n, d, dim)?;
    let mut acc = QC::zero();
    for j in index_maps(n, d, dim) {
        let mut term = QC::one();
        for k in 0..n {
            let i: Vec<usize> = (0..d)
                .map(|c| j[sigma.component(c).apply(k)][c])
                .collect();
            let size_t = encode(&i, dim);
            term = term * tensors[k].t[size_t].clone() * tensors[k].tbar[encode(&j[k], dim)].clone();
            if term.is_zero() {
                break;
            }
        }
        acc = acc + term;
    }
    Ok(acc)
}

fn check_contraction_cap(n: usize, d: usize, dim: usize) -> Result<()> {
    let size = (dim as u64).pow(d as u32);
    if size.pow(n as u32) > 2_000_000 {
        return Err(Error::CapExceeded(format!(
            "numeric contraction over {}^{} index maps",
            size, n
        )));
    }
    Ok(())
}

/// `E[Tr_σ⃗(T_A, T̄_A)]` for a Gaussian with deterministic covariance `A`,
/// computed two independent ways: (i) the pairing sum
/// `N^{n(1-D)} Σ_η Tr_{σ⃗η}(A)` and (ii) direct expansion of the Wick
/// formula over index maps. Errors if they disagree.
pub fn wick_pairing_oracle(cov: &MixedTensor, sigma: &PermTuple) -> Result<QC> {
    let n = sigma.n();
    let d = cov.d;
    let dim = cov.dim;
    if sigma.d() != d {
        return Err(Error::ShapeMismatch("covariance and tuple disagree".into()));
    }
    let scale = BigRational::from_integer((dim as i64).into())
        .pow(-((n * (d - 1)) as i32));

    // route (i): pairing sum of plain contractions
    let family: Vec<&MixedTensor> = std::iter::repeat(cov).take(n).collect();
    let mut route_a = QC::zero();
    for eta in all_perms(n) {
        route_a = route_a + numeric_trace_mixed(&family, &sigma.compose_perm(&eta))?;
    }
    let route_a = QC {
        re: &scale * route_a.re,
        im: &scale * route_a.im,
    };

    // route (ii): expand E[Π T T̄] under the trace-invariant δ-structure
    check_contraction_cap(n, d, dim)?;
    let mut route_b = QC::zero();
    for j in index_maps(n, d, dim) {
        // i = j ∘ σ⃗
        let i: Vec<Vec<usize>> = (0..n)
            .map(|k| {
                (0..d)
                    .map(|c| j[sigma.component(c).apply(k)][c])
                    .collect()
            })
            .collect();
        for eta in all_perms(n) {
            let mut term = QC::one();
            for k in 0..n {
                term = term * cov.get(&i[k], &j[eta.apply(k)]).clone();
                if term.is_zero() {
                    break;
                }
            }
            route_b = route_b + term;
        }
    }
    let route_b = QC {
        re: &scale * route_b.re,
        im: &scale * route_b.im,
    };

    if route_a != route_b {
        return Err(Error::Precondition(format!(
            "wick oracle mismatch at {sigma}: {route_a} vs {route_b}"
        )));
    }
    Ok(route_a)
}

// ---------------------------------------------------------------------------
// Distribution specifications
// ---------------------------------------------------------------------------

/// Trace-invariant flavor of a distribution.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Mixed,
    Pure,
}

/// Declared invariance group (checked only against precursor supports).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Invariance {
    Local,
    GlobalUnitary,
}

/// Symbolic law of a random tensor; every variant exposes exact
/// trace-invariant moments as `RatN`.
#[derive(Clone, Debug, PartialEq)]
pub enum DistributionSpec {
    /// Pure standard complex Gaussian with covariance `scale · Id`.
    Gaussian { d: usize, scale: BigRational },
    /// Mixed Wishart tensor of parameters `(N^d, N'_1 × … × N'_{d'})` with
    /// ratios `r_{c'} = N'_{c'}/N` substituted as exact rationals.
    WishartTensor {
        d: usize,
        d_prime: usize,
        ratios: Vec<BigRational>,
    },
    /// Uniform on the LU orbit of the identity mixed tensor
    /// (`Tr_σ⃗ = N^{#σ⃗}` deterministically).
    LUOrbitIdentity { d: usize },
    /// Uniform on the LU orbit of a deterministic tensor given by its
    /// trace table, keyed by the canonical text form of σ⃗.
    LUOrbit {
        kind: Kind,
        d: usize,
        table: BTreeMap<String, RatN>,
    },
    /// Pure Gaussian whose covariance is the (mixed) base distribution.
    GaussianWithCovariance { base: Box<DistributionSpec> },
    /// Tensor product of independent `D = 1` ensembles, one per color.
    TensorProductOfMatrices { factors: Vec<DistributionSpec> },
    /// Entrywise rescale of a mixed tensor: `Tr_σ⃗` gains `factor^n`.
    Scaled {
        factor: BigRational,
        base: Box<DistributionSpec>,
    },
    /// Deterministic numeric mixed tensor at a fixed integer dimension;
    /// moments are constants, meaningful only at `N = dim`.
    NumericMixed { tensor: MixedTensor },
}

impl DistributionSpec {
    pub fn standard_gaussian(d: usize) -> DistributionSpec {
        DistributionSpec::Gaussian {
            d,
            scale: BigRational::one(),
        }
    }

    pub fn square_wishart(d: usize, d_prime: usize) -> DistributionSpec {
        DistributionSpec::WishartTensor {
            d,
            d_prime,
            ratios: vec![BigRational::one(); d_prime],
        }
    }

    pub fn d(&self) -> usize {
        match self {
            DistributionSpec::Gaussian { d, .. } => *d,
            DistributionSpec::WishartTensor { d, .. } => *d,
            DistributionSpec::LUOrbitIdentity { d } => *d,
            DistributionSpec::LUOrbit { d, .. } => *d,
            DistributionSpec::GaussianWithCovariance { base } => base.d(),
            DistributionSpec::TensorProductOfMatrices { factors } => factors.len(),
            DistributionSpec::Scaled { base, .. } => base.d(),
            DistributionSpec::NumericMixed { tensor } => tensor.d,
        }
    }

    /// Natural trace-invariant flavor of the tensor itself.
    pub fn natural_kind(&self) -> Kind {
        match self {
            DistributionSpec::Gaussian { .. } | DistributionSpec::GaussianWithCovariance { .. } => {
                Kind::Pure
            }
            DistributionSpec::LUOrbit { kind, .. } => *kind,
            _ => Kind::Mixed,
        }
    }

    /// Fixed integer dimension for numeric payloads; `None` when symbolic.
    pub fn fixed_n(&self) -> Option<i64> {
        match self {
            DistributionSpec::NumericMixed { tensor } => Some(tensor.dim as i64),
            DistributionSpec::GaussianWithCovariance { base }
            | DistributionSpec::Scaled { base, .. } => base.fixed_n(),
            DistributionSpec::TensorProductOfMatrices { factors } => {
                factors.iter().find_map(|f| f.fixed_n())
            }
            _ => None,
        }
    }

    pub fn declared_invariance(&self) -> Invariance {
        match self {
            DistributionSpec::Gaussian { .. }
            | DistributionSpec::WishartTensor { .. }
            | DistributionSpec::LUOrbitIdentity { .. } => Invariance::GlobalUnitary,
            DistributionSpec::Scaled { base, .. }
            | DistributionSpec::GaussianWithCovariance { base } => base.declared_invariance(),
            _ => Invariance::Local,
        }
    }

    /// Memoization key.
    pub fn fingerprint(&self) -> String {
        format!("{self:?}")
    }

    /// Exact `E[Tr_σ⃗]`.
    pub fn trace_moment(&self, sigma: &PermTuple) -> Result<RatN> {
        let n = sigma.n();
        if sigma.d() != self.d() {
            return Err(Error::ShapeMismatch(format!(
                "distribution has {} colors, tuple has {}",
                self.d(),
                sigma.d()
            )));
        }
        match self {
            DistributionSpec::Gaussian { d, scale } => {
                let mut sum = RatN::zero();
                for eta in all_perms(n) {
                    let mut e = 0i64;
                    for c in 0..*d {
                        e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
                    }
                    sum = sum + RatN::n_pow(e);
                }
                let prefactor =
                    RatN::n_pow(n as i64 * (1 - *d as i64)).scale(&scale.pow(n as i32));
                Ok(prefactor * sum)
            }
            DistributionSpec::WishartTensor { d, d_prime, ratios } => {
                let rprod: BigRational = ratios.iter().product();
                let mut sum = RatN::zero();
                for eta in all_perms(n) {
                    let mut e = 0i64;
                    for c in 0..*d {
                        e += sigma.component(c).compose(&eta.inverse()).cycle_count() as i64;
                    }
                    e -= (*d_prime as i64) * eta.cayley_norm() as i64;
                    sum = sum
                        + RatN::n_pow(e).scale(&rprod.pow(eta.cycle_count() as i32));
                }
                Ok(RatN::n_pow(n as i64 * (1 - *d as i64)) * sum)
            }
            DistributionSpec::LUOrbitIdentity { .. } => {
                Ok(RatN::n_pow(sigma.cycle_count() as i64))
            }
            DistributionSpec::LUOrbit { kind, table, .. } => {
                let relation = match kind {
                    Kind::Mixed => Relabeling::Mixed,
                    Kind::Pure => Relabeling::Pure,
                };
                let (rep, _) = canonicalize(sigma, relation)?;
                table
                    .get(&rep.to_string())
                    .cloned()
                    .ok_or_else(|| Error::MissingTableEntry(rep.to_string()))
            }
            DistributionSpec::GaussianWithCovariance { base } => {
                let mut sum = RatN::zero();
                for eta in all_perms(n) {
                    sum = sum + base.trace_moment(&sigma.compose_perm(&eta))?;
                }
                Ok(RatN::n_pow(n as i64 * (1 - self.d() as i64)) * sum)
            }
            DistributionSpec::TensorProductOfMatrices { factors } => {
                let mut prod = RatN::one();
                for (c, f) in factors.iter().enumerate() {
                    if f.d() != 1 {
                        return Err(Error::ShapeMismatch(
                            "tensor-product factors must have one color".into(),
                        ));
                    }
                    let single = PermTuple::new(vec![sigma.component(c).clone()])?;
                    prod = prod * f.trace_moment(&single)?;
                }
                Ok(prod)
            }
            DistributionSpec::Scaled { factor, base } => {
                Ok(base.trace_moment(sigma)?.scale(&factor.pow(n as i32)))
            }
            DistributionSpec::NumericMixed { tensor } => {
                let family: Vec<&MixedTensor> = std::iter::repeat(tensor).take(n).collect();
                let v = numeric_trace_mixed(&family, sigma)?;
                if !v.is_real() {
                    return Err(Error::NonRealInvariant);
                }
                Ok(RatN::from_rational(&v.re))
            }
        }
    }
}

/// Law of the sum of independent scaled tensors, where the family is closed
/// under sums. Weights scale the covariance.
pub fn scale_and_sum(parts: &[(DistributionSpec, BigRational)]) -> Result<DistributionSpec> {
    if parts.is_empty() {
        return Err(Error::UnsupportedSum("empty sum".into()));
    }
    let all_gaussian = parts
        .iter()
        .all(|(d, _)| matches!(d, DistributionSpec::Gaussian { .. }));
    if all_gaussian {
        let d0 = parts[0].0.d();
        let mut total = BigRational::zero();
        for (dist, w) in parts {
            let DistributionSpec::Gaussian { d, scale } = dist else {
                unreachable!()
            };
            if *d != d0 {
                return Err(Error::UnsupportedSum("mismatched color counts".into()));
            }
            total += w * scale;
        }
        return Ok(DistributionSpec::Gaussian { d: d0, scale: total });
    }
    let all_numeric_cov = parts.iter().all(|(d, _)| {
        matches!(
            d,
            DistributionSpec::GaussianWithCovariance { base }
                if matches!(base.as_ref(), DistributionSpec::NumericMixed { .. })
        )
    });
    if all_numeric_cov {
        let mut acc: Option<MixedTensor> = None;
        for (dist, w) in parts {
            let DistributionSpec::GaussianWithCovariance { base } = dist else {
                unreachable!()
            };
            let DistributionSpec::NumericMixed { tensor } = base.as_ref() else {
                unreachable!()
            };
            acc = Some(match acc {
                None => tensor.entrywise_sum(tensor, w, &BigRational::zero())?,
                Some(prev) => prev.entrywise_sum(tensor, &BigRational::one(), w)?,
            });
        }
        return Ok(DistributionSpec::GaussianWithCovariance {
            base: Box::new(DistributionSpec::NumericMixed {
                tensor: acc.unwrap(),
            }),
        });
    }
    Err(Error::UnsupportedSum(
        "only Gaussian sums and numeric-covariance Gaussian sums are closed".into(),
    ))
}

// ---------------------------------------------------------------------------
// JSON configuration
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
enum DistConfig {
    Gaussian {
        d: usize,
        #[serde(default = "one_string")]
        scale: String,
    },
    Wishart {
        d: usize,
        d_prime: usize,
        #[serde(default)]
        ratios: Vec<String>,
    },
    IdentityOrbit {
        d: usize,
    },
    Orbit {
        kind: Kind,
        d: usize,
        table: BTreeMap<String, RatN>,
    },
    GaussianWithCovariance {
        base: Box<DistConfig>,
    },
    TensorProduct {
        factors: Vec<DistConfig>,
    },
    Scaled {
        factor: String,
        base: Box<DistConfig>,
    },
    NumericMixed {
        d: usize,
        dim: usize,
        /// Entries as `[re_num, re_den, im_num, im_den]`, row-major over
        /// `(i⃗, j⃗)`.
        entries: Vec<[i64; 4]>,
    },
}

fn one_string() -> String {
    "1".to_string()
}

fn parse_rational(s: &str) -> Result<BigRational> {
    let mut it = s.splitn(2, '/');
    let num = it
        .next()
        .unwrap()
        .trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?;
    let den = match it.next() {
        Some(d) => d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad rational `{s}`")))?,
        None => 1.into(),
    };
    Ok(BigRational::new(num, den))
}

fn config_to_spec(cfg: DistConfig) -> Result<DistributionSpec> {
    Ok(match cfg {
        DistConfig::Gaussian { d, scale } => DistributionSpec::Gaussian {
            d,
            scale: parse_rational(&scale)?,
        },
        DistConfig::Wishart { d, d_prime, ratios } => {
            let ratios = if ratios.is_empty() {
                vec![BigRational::one(); d_prime]
            } else {
                ratios
                    .iter()
                    .map(|s| parse_rational(s))
                    .collect::<Result<_>>()?
            };
            if ratios.len() != d_prime {
                return Err(Error::Parse("need one ratio per primed color".into()));
            }
            DistributionSpec::WishartTensor { d, d_prime, ratios }
        }
        DistConfig::IdentityOrbit { d } => DistributionSpec::LUOrbitIdentity { d },
        DistConfig::Orbit { kind, d, table } => DistributionSpec::LUOrbit { kind, d, table },
        DistConfig::GaussianWithCovariance { base } => DistributionSpec::GaussianWithCovariance {
            base: Box::new(config_to_spec(*base)?),
        },
        DistConfig::TensorProduct { factors } => DistributionSpec::TensorProductOfMatrices {
            factors: factors
                .into_iter()
                .map(config_to_spec)
                .collect::<Result<_>>()?,
        },
        DistConfig::Scaled { factor, base } => DistributionSpec::Scaled {
            factor: parse_rational(&factor)?,
            base: Box::new(config_to_spec(*base)?),
        },
        DistConfig::NumericMixed { d, dim, entries } => {
            let entries = entries
                .into_iter()
                .map(|[rn, rd, im, id]| {
                    if rd == 0 || id == 0 {
                        return Err(Error::Parse("zero denominator in entry".into()));
                    }
                    Ok(QC {
                        re: BigRational::new(rn.into(), rd.into()),
                        im: BigRational::new(im.into(), id.into()),
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            DistributionSpec::NumericMixed {
                tensor: MixedTensor::new(d, dim, entries)?,
            }
        }
    })
}

/// Parse a distribution configuration from JSON.
pub fn parse_distribution(json: &str) -> Result<DistributionSpec> {
    let cfg: DistConfig = serde_json::from_str(json)?;
    config_to_spec(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::all_perm_tuples;

    fn tup(text: &str) -> PermTuple {
        PermTuple::parse(text).unwrap()
    }

    #[test]
    fn gaussian_moment_examples() {
        // n = 1, any σ⃗: E[Tr] = N
        for d in 1..=3usize {
            let g = DistributionSpec::standard_gaussian(d);
            assert_eq!(
                g.trace_moment(&PermTuple::identity(1, d)).unwrap(),
                RatN::n_pow(1)
            );
        }
        // scale s multiplies the covariance: moments gain s^n
        let g = DistributionSpec::Gaussian {
            d: 2,
            scale: BigRational::new(3.into(), 2.into()),
        };
        let plain = DistributionSpec::standard_gaussian(2);
        let s = tup("2 1;2 1");
        assert_eq!(
            g.trace_moment(&s).unwrap(),
            plain
                .trace_moment(&s)
                .unwrap()
                .scale(&BigRational::new(9.into(), 4.into()))
        );
    }

    #[test]
    fn wishart_moment_examples() {
        // D = 1, D' = 1, r = 1, σ = (1 2): 2N
        let w = DistributionSpec::square_wishart(1, 1);
        assert_eq!(
            w.trace_moment(&tup("2 1")).unwrap(),
            RatN::from_int(2) * RatN::n_pow(1)
        );
        // n = 1: E[Tr] = r N for parameters (N, rN)
        let r = BigRational::new(2.into(), 3.into());
        let w = DistributionSpec::WishartTensor {
            d: 1,
            d_prime: 1,
            ratios: vec![r.clone()],
        };
        assert_eq!(
            w.trace_moment(&PermTuple::identity(1, 1)).unwrap(),
            RatN::n_pow(1).scale(&r)
        );
    }

    #[test]
    fn identity_orbit_moments() {
        let id = DistributionSpec::LUOrbitIdentity { d: 2 };
        for sigma in all_perm_tuples(2, 2) {
            assert_eq!(
                id.trace_moment(&sigma).unwrap(),
                RatN::n_pow(sigma.cycle_count() as i64)
            );
        }
    }

    #[test]
    fn tensor_product_moments_factor() {
        let w = DistributionSpec::square_wishart(1, 1);
        let prod = DistributionSpec::TensorProductOfMatrices {
            factors: vec![w.clone(), w.clone()],
        };
        for sigma in all_perm_tuples(3, 2) {
            let lhs = prod.trace_moment(&sigma).unwrap();
            let rhs = w
                .trace_moment(&PermTuple::new(vec![sigma.component(0).clone()]).unwrap())
                .unwrap()
                * w.trace_moment(&PermTuple::new(vec![sigma.component(1).clone()]).unwrap())
                    .unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn covariance_gaussian_reduces_to_standard() {
        // identity covariance reproduces the standard Gaussian moments
        let g = DistributionSpec::standard_gaussian(2);
        let tg = DistributionSpec::GaussianWithCovariance {
            base: Box::new(DistributionSpec::LUOrbitIdentity { d: 2 }),
        };
        for sigma in all_perm_tuples(2, 2) {
            assert_eq!(
                g.trace_moment(&sigma).unwrap(),
                tg.trace_moment(&sigma).unwrap(),
                "{sigma}"
            );
        }
    }

    #[test]
    fn numeric_trace_examples() {
        // identity mixed tensor: Tr_σ⃗ = N^{#σ⃗}
        let id = MixedTensor::identity(2, 2);
        for sigma in all_perm_tuples(2, 2) {
            let family = vec![&id, &id];
            let v = numeric_trace_mixed(&family[..2], &sigma).unwrap();
            assert_eq!(
                v,
                QC::real(BigRational::from_integer(
                    (2i64.pow(sigma.cycle_count() as u32)).into()
                ))
            );
        }
        // all-ones pure tensor, D = 1, σ = id_1: N
        let ones = PureTensor::all_ones(1, 3);
        let v = numeric_trace_pure(&[&ones], &PermTuple::identity(1, 1)).unwrap();
        assert_eq!(v, QC::from_ints(3, 0));
        // rank-one basis tensor: every invariant equals 1
        let e = PureTensor::basis_vector(2, 2);
        for sigma in all_perm_tuples(2, 2) {
            let v = numeric_trace_pure(&[&e, &e], &sigma).unwrap();
            assert_eq!(v, QC::one());
        }
    }

    #[test]
    fn wick_oracle_examples() {
        // identity covariance, n = 1: N
        let id = MixedTensor::identity(2, 3);
        let v = wick_pairing_oracle(&id, &PermTuple::identity(1, 2)).unwrap();
        assert_eq!(v, QC::from_ints(3, 0));
        // D = 1, σ = (1 2), N = 2: N + N^2 = 6
        let id = MixedTensor::identity(1, 2);
        let v = wick_pairing_oracle(&id, &tup("2 1")).unwrap();
        assert_eq!(v, QC::from_ints(6, 0));
        // rank-one projector covariance, n = 2: both routes agree by
        // construction and the value matches a hand count
        let mut entries = vec![QC::zero(); 4];
        entries[0] = QC::one();
        let proj = MixedTensor::new(1, 2, entries).unwrap();
        let v = wick_pairing_oracle(&proj, &tup("1 2")).unwrap();
        // E[|T·e1|^4-like]: N^{0} Σ_η Tr-products of the projector = 2
        assert_eq!(v, QC::from_ints(2, 0));
    }

    #[test]
    fn numeric_matches_symbolic_at_fixed_dimension() {
        // covariance Gaussian over the identity: symbolic moments evaluated
        // at N = dim equal the Wick oracle
        let dim = 2usize;
        let sym = DistributionSpec::GaussianWithCovariance {
            base: Box::new(DistributionSpec::LUOrbitIdentity { d: 2 }),
        };
        let id = MixedTensor::identity(2, dim);
        for sigma in all_perm_tuples(2, 2) {
            let sv = sym
                .trace_moment(&sigma)
                .unwrap()
                .eval_at(dim as i64)
                .unwrap();
            let nv = wick_pairing_oracle(&id, &sigma).unwrap();
            assert_eq!(QC::real(sv), nv, "{sigma}");
        }
    }

    #[test]
    fn sums_of_gaussians() {
        let g = |s: i64| DistributionSpec::Gaussian {
            d: 2,
            scale: BigRational::from_integer(s.into()),
        };
        let sum = scale_and_sum(&[
            (g(1), BigRational::one()),
            (g(2), BigRational::one()),
        ])
        .unwrap();
        assert_eq!(sum, g(3));
        // unsupported combination: Wishart ⊕ Wishart
        let w = DistributionSpec::square_wishart(2, 1);
        assert!(matches!(
            scale_and_sum(&[(w.clone(), BigRational::one()), (w, BigRational::one())]),
            Err(Error::UnsupportedSum(_))
        ));
    }

    #[test]
    fn config_round_trip() {
        let json = r#"{"variant":"wishart","d":2,"d_prime":1,"ratios":["2/3"]}"#;
        let dist = parse_distribution(json).unwrap();
        assert_eq!(
            dist,
            DistributionSpec::WishartTensor {
                d: 2,
                d_prime: 1,
                ratios: vec![BigRational::new(2.into(), 3.into())],
            }
        );
        let json = r#"{"variant":"gaussian_with_covariance","base":{"variant":"identity_orbit","d":2}}"#;
        assert!(parse_distribution(json).is_ok());
        let json = r#"{"variant":"numeric_mixed","d":1,"dim":2,"entries":[[1,1,0,1],[0,1,1,2],[0,1,-1,2],[1,1,0,1]]}"#;
        let dist = parse_distribution(json).unwrap();
        assert_eq!(dist.fixed_n(), Some(2));
    }
}
