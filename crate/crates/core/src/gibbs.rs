//! The q-state Potts model on the Cayley tree: finite-volume p-adic
//! measures, the compatibility condition, the tree recursion, the
//! translation-invariant solution families, and periodic boundary functions
//! built from cycles of the Potts-Bethe map.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::functions::{ep_membership, exp_domain_min_ord, exp_p, ln_p};
use crate::padic::{OrdBound, PadicNumber};
use crate::poly::{roots, standing_regime, Polynomial};

/// Extra digits carried when inputs are taken as exact to their known digits.
const GUARD_DIGITS: i64 = 16;

/// Cap on the number of configurations summed by brute force.
pub const ENUMERATION_LIMIT: u64 = 10_000_000;

/// The semi-infinite tree where every vertex has `k` direct successors,
/// truncated at `depth`. Vertices are numbered level by level; the root is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CayleyTree {
    pub k: usize,
    pub depth: usize,
}

impl CayleyTree {
    pub fn new(k: usize, depth: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("tree order must be positive".into()));
        }
        Ok(CayleyTree { k, depth })
    }

    /// `|W_m| = k^m`.
    pub fn level_size(&self, m: usize) -> usize {
        self.k.pow(m as u32)
    }

    pub fn level_start(&self, m: usize) -> usize {
        (0..m).map(|l| self.level_size(l)).sum()
    }

    /// `|V_n|` for n = depth.
    pub fn volume(&self) -> usize {
        self.level_start(self.depth + 1)
    }

    pub fn level_of(&self, v: usize) -> usize {
        let mut m = 0;
        while self.level_start(m + 1) <= v {
            m += 1;
        }
        m
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        if v == 0 {
            return None;
        }
        let m = self.level_of(v);
        let offset = v - self.level_start(m);
        Some(self.level_start(m - 1) + offset / self.k)
    }

    /// `S(v)`, empty at the last level.
    pub fn successors(&self, v: usize) -> Vec<usize> {
        let m = self.level_of(v);
        if m >= self.depth {
            return Vec::new();
        }
        let first = self.level_start(m + 1) + (v - self.level_start(m)) * self.k;
        (first..first + self.k).collect()
    }

    /// Coordinate word `(i_1, ..., i_m)` with `i_j` in `1..=k`.
    pub fn coordinates(&self, v: usize) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = v;
        while let Some(par) = self.parent(cur) {
            let m = self.level_of(cur);
            word.push((cur - self.level_start(m)) % self.k + 1);
            cur = par;
        }
        word.reverse();
        word
    }

    /// Nearest-neighbour edges `(parent, child)` inside `V_depth`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.volume()).map(|v| (self.parent(v).unwrap(), v)).collect()
    }

    pub fn boundary(&self) -> std::ops::Range<usize> {
        self.level_start(self.depth)..self.volume()
    }
}

/// Spins on `V_n`; value `s` in `0..q` stands for state `s + 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub spins: Vec<usize>,
}

impl Configuration {
    pub fn constant(tree: &CayleyTree, s: usize) -> Self {
        Configuration { spins: vec![s; tree.volume()] }
    }

    /// `σ_{n-1} ∨ σ^(n)`.
    pub fn concat(inner: &Configuration, boundary: &[usize]) -> Self {
        let mut spins = inner.spins.clone();
        spins.extend_from_slice(boundary);
        Configuration { spins }
    }

    /// Configuration number `code` in the mixed-radix order whose most
    /// significant digit is the root.
    pub fn from_index(mut code: u64, len: usize, q: usize) -> Self {
        let mut spins = vec![0; len];
        for s in spins.iter_mut().rev() {
            *s = (code % q as u64) as usize;
            code /= q as u64;
        }
        Configuration { spins }
    }
}

fn count_configurations(q: usize, len: usize) -> Result<u64> {
    let total = BigUint::from(q).pow(len as u32);
    match total.to_u64() {
        Some(t) if t <= ENUMERATION_LIMIT => Ok(t),
        _ => Err(Error::Infeasible(format!(
            "{q}^{len} configurations exceed the enumeration limit {ENUMERATION_LIMIT}"
        ))),
    }
}

/// Potts model parameters: coupling `J` and `θ = exp_p(J)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PottsModel {
    pub q_states: usize,
    theta: PadicNumber,
    coupling: PadicNumber,
}

impl PottsModel {
    pub fn from_theta(theta: PadicNumber, q_states: usize) -> Result<Self> {
        if !ep_membership(&theta)? {
            return Err(Error::OutOfDomain("theta is not in E_p".into()));
        }
        let coupling = ln_p(&theta)?;
        Self::check(q_states)?;
        Ok(PottsModel { q_states, theta, coupling })
    }

    pub fn from_coupling(coupling: PadicNumber, q_states: usize) -> Result<Self> {
        check_exp_domain(&coupling)?;
        let theta = exp_p(&coupling)?;
        Self::check(q_states)?;
        Ok(PottsModel { q_states, theta, coupling })
    }

    fn check(q_states: usize) -> Result<()> {
        if q_states < 2 {
            return Err(Error::InvalidArgument("need at least two spin states".into()));
        }
        Ok(())
    }

    pub fn theta(&self) -> &PadicNumber {
        &self.theta
    }

    pub fn coupling(&self) -> &PadicNumber {
        &self.coupling
    }

    pub fn prime(&self) -> u32 {
        self.theta.prime()
    }

    pub fn precision(&self) -> i64 {
        self.theta.rel_precision().unwrap_or(64)
    }
}

fn check_exp_domain(x: &PadicNumber) -> Result<()> {
    let min = exp_domain_min_ord(x.prime());
    match x.ord_bound() {
        OrdBound::Exact(v) if v < min => Err(Error::OutOfDomain(format!(
            "valuation {v} is outside the exp_{} disc",
            x.prime()
        ))),
        OrdBound::AtLeast(v) if v < min => Err(Error::PrecisionExhausted(format!(
            "value known only mod p^{v}"
        ))),
        _ => Ok(()),
    }
}

/// `J` times the number of monochromatic edges.
pub fn hamiltonian(tree: &CayleyTree, sigma: &Configuration, coupling: &PadicNumber) -> Result<PadicNumber> {
    check_exp_domain(coupling)?;
    Ok(coupling.mul_int(monochromatic_edges(tree, sigma) as i64))
}

fn monochromatic_edges(tree: &CayleyTree, sigma: &Configuration) -> u32 {
    tree.edges()
        .iter()
        .filter(|(a, b)| sigma.spins[*a] == sigma.spins[*b])
        .count() as u32
}

/// An m-periodic boundary function: level `j mod m` carries
/// `h^(j) = (h_1, ..., h_{q-1})`, with `h̃ = (h_1, ..., h_{q-1}, 0)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundaryFunction {
    pub h: Vec<Vec<PadicNumber>>,
}

impl BoundaryFunction {
    pub fn periodic(h: Vec<Vec<PadicNumber>>) -> Result<Self> {
        if h.is_empty() {
            return Err(Error::InvalidArgument("period must be at least 1".into()));
        }
        let len = h[0].len();
        if h.iter().any(|v| v.len() != len) {
            return Err(Error::InvalidArgument("all levels need q - 1 components".into()));
        }
        for c in h.iter().flatten() {
            check_exp_domain(c)?;
        }
        Ok(BoundaryFunction { h })
    }

    pub fn translation_invariant(h: Vec<PadicNumber>) -> Result<Self> {
        Self::periodic(vec![h])
    }

    /// `h^(j) = ln_p(z^(j))` componentwise.
    pub fn from_z(z: &[Vec<PadicNumber>]) -> Result<Self> {
        let h = z
            .iter()
            .map(|v| v.iter().map(ln_p).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::periodic(h)
    }

    /// Every component taken as exact to its known digits.
    pub fn padded(&self, precision: i64) -> Self {
        BoundaryFunction {
            h: self.h.iter().map(|v| v.iter().map(|x| x.padded(precision)).collect()).collect(),
        }
    }

    pub fn period(&self) -> usize {
        self.h.len()
    }

    pub fn q_states(&self) -> usize {
        self.h[0].len() + 1
    }

    pub fn level(&self, j: usize) -> &[PadicNumber] {
        &self.h[j % self.period()]
    }

    pub fn z(&self, j: usize) -> Result<Vec<PadicNumber>> {
        self.level(j).iter().map(exp_p).collect()
    }

    /// `exp_p(h̃^(s))` for every state s at level j.
    fn boundary_weights(&self, j: usize, p: u32, precision: i64) -> Result<Vec<PadicNumber>> {
        let mut w = self
            .level(j)
            .iter()
            .map(|x| if x.is_exact_zero() { Ok(PadicNumber::one(p, precision)) } else { exp_p(x) })
            .collect::<Result<Vec<_>>>()?;
        w.push(PadicNumber::one(p, precision));
        Ok(w)
    }
}

/// `μ^(n)` on `V_n` for a fixed boundary function, with `Z^(n)` precomputed.
#[derive(Debug, Clone)]
pub struct FiniteVolumeMeasure {
    tree: CayleyTree,
    theta: PadicNumber,
    weights: Vec<PadicNumber>,
    partition_function: PadicNumber,
}

impl FiniteVolumeMeasure {
    pub fn new(tree: CayleyTree, model: &PottsModel, bf: &BoundaryFunction) -> Result<Self> {
        if bf.q_states() != model.q_states {
            return Err(Error::InvalidArgument(format!(
                "boundary function has {} states, model has {}",
                bf.q_states(),
                model.q_states
            )));
        }
        let q = model.q_states;
        let total = count_configurations(q, tree.volume())?;
        let weights = bf.boundary_weights(tree.depth, model.prime(), model.precision())?;
        let mut m = FiniteVolumeMeasure {
            tree,
            theta: model.theta.clone(),
            weights,
            partition_function: PadicNumber::zero(model.prime()),
        };
        let mut z = PadicNumber::zero(model.prime());
        for code in 0..total {
            z = z.add_approx(&m.weight(&Configuration::from_index(code, tree.volume(), q)));
        }
        if !matches!(z.ord_bound(), OrdBound::Exact(_)) {
            return Err(Error::PartitionFunctionZero);
        }
        m.partition_function = z;
        Ok(m)
    }

    /// `exp_p(H_n(σ) + Σ_{x∈W_n} h̃_x^{σ(x)}) = θ^{#mono} Π exp_p(h̃)`.
    pub fn weight(&self, sigma: &Configuration) -> PadicNumber {
        let mut w = self.theta.pow(monochromatic_edges(&self.tree, sigma));
        for v in self.tree.boundary() {
            w = w.mul(&self.weights[sigma.spins[v]]);
        }
        w
    }

    pub fn partition_function(&self) -> &PadicNumber {
        &self.partition_function
    }

    pub fn value(&self, sigma: &Configuration) -> Result<PadicNumber> {
        if sigma.spins.len() != self.tree.volume() || sigma.spins.iter().any(|&s| s >= self.weights.len()) {
            return Err(Error::InvalidArgument("configuration does not fit the volume".into()));
        }
        self.weight(sigma).try_div(&self.partition_function)
    }

    pub fn tree(&self) -> &CayleyTree {
        &self.tree
    }
}

pub fn finite_volume_measure(
    tree: &CayleyTree,
    sigma: &Configuration,
    model: &PottsModel,
    bf: &BoundaryFunction,
) -> Result<PadicNumber> {
    FiniteVolumeMeasure::new(*tree, model, bf)?.value(sigma)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatibilityReport {
    pub n: usize,
    /// Per `σ_{n-1}`: `ord(Σ μ^(n)(σ_{n-1} ∨ ·) - μ^(n-1)(σ_{n-1})) - ord μ^(n-1)(σ_{n-1})`.
    pub residuals: Vec<OrdBound>,
    pub min_residual: i64,
    pub threshold: i64,
    pub passed: bool,
}

/// Brute-force check of `Σ_{σ^(n)} μ^(n)(σ_{n-1} ∨ σ^(n)) = μ^(n-1)(σ_{n-1})`.
pub fn check_compatibility(
    k: usize,
    model: &PottsModel,
    bf: &BoundaryFunction,
    n: usize,
) -> Result<CompatibilityReport> {
    if n == 0 {
        return Err(Error::InvalidArgument("compatibility needs n >= 1".into()));
    }
    let threshold = model.precision() - 10;
    let work = model.precision() + GUARD_DIGITS;
    let model = &PottsModel::from_theta(model.theta.padded(work), model.q_states)?;
    let bf = &bf.padded(work);
    let q = model.q_states;
    let outer = CayleyTree::new(k, n)?;
    let inner = CayleyTree::new(k, n - 1)?;
    count_configurations(q, outer.volume())?;
    let mu_n = FiniteVolumeMeasure::new(outer, model, bf)?;
    let mu_prev = FiniteVolumeMeasure::new(inner, model, bf)?;
    let inner_count = count_configurations(q, inner.volume())?;
    let boundary_count = count_configurations(q, outer.level_size(n))?;
    let mut residuals = Vec::with_capacity(inner_count as usize);
    for code in 0..inner_count {
        let sigma = Configuration::from_index(code, inner.volume(), q);
        let mut sum = PadicNumber::zero(model.prime());
        for b in 0..boundary_count {
            let bnd = Configuration::from_index(b, outer.level_size(n), q);
            sum = sum.add_approx(&mu_n.weight(&Configuration::concat(&sigma, &bnd.spins)));
        }
        let lhs = sum.try_div(mu_n.partition_function())?;
        let rhs = mu_prev.value(&sigma)?;
        let scale = rhs.valuation()?.finite().unwrap_or(0);
        let r = match lhs.diff_ord(&rhs) {
            OrdBound::Exact(v) => OrdBound::Exact(v - scale),
            OrdBound::AtLeast(v) => OrdBound::AtLeast(v - scale),
            OrdBound::Infinite => OrdBound::Infinite,
        };
        residuals.push(r);
    }
    let min_residual = residuals.iter().map(|r| r.lower()).min().unwrap_or(i64::MAX);
    Ok(CompatibilityReport {
        n,
        passed: min_residual >= threshold,
        residuals,
        min_residual,
        threshold,
    })
}

/// `F_i(h) = ln_p(((θ-1) e^{h_i} + Σ_j e^{h_j} + 1) / (θ + Σ_j e^{h_j}))`.
pub fn tree_recursion_f(h: &[PadicNumber], theta: &PadicNumber) -> Result<Vec<PadicNumber>> {
    let z = h.iter().map(exp_p).collect::<Result<Vec<_>>>()?;
    ratio_vector(&z, theta)?.iter().map(ln_p).collect()
}

/// `((θ-1) z_i + Σ z + 1) / (θ + Σ z)` for every i.
fn ratio_vector(z: &[PadicNumber], theta: &PadicNumber) -> Result<Vec<PadicNumber>> {
    let p = theta.prime();
    let prec = theta.rel_precision().unwrap_or(64);
    let one = PadicNumber::one(p, prec);
    let sum = z.iter().fold(PadicNumber::zero(p), |acc, x| acc.add_approx(x));
    let tm1 = theta.sub_approx(&one);
    let den = theta.add_approx(&sum);
    z.iter()
        .map(|zi| tm1.mul(zi).add_approx(&sum).add_approx(&one).try_div(&den))
        .collect()
}

/// Smallest valuation of `z_i - (ratio_i)^k`, relative to `z_i`.
pub fn ti_residual(z: &[PadicNumber], theta: &PadicNumber, k: u32) -> Result<i64> {
    periodic_residual(z, z, theta, k)
}

fn periodic_residual(target: &[PadicNumber], source: &[PadicNumber], theta: &PadicNumber, k: u32) -> Result<i64> {
    let r = ratio_vector(source, theta)?;
    let mut worst = i64::MAX;
    for (t, ri) in target.iter().zip(&r) {
        let scale = t.valuation()?.finite().unwrap_or(0);
        worst = worst.min(t.diff_ord(&ri.pow(k)).lower().saturating_sub(scale));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TiForm {
    A,
    B,
    C,
    D,
    E,
}

impl TiForm {
    pub fn parse(s: &str) -> Option<TiForm> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Some(TiForm::A),
            "B" => Some(TiForm::B),
            "C" => Some(TiForm::C),
            "D" => Some(TiForm::D),
            "E" => Some(TiForm::E),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TiSolution {
    pub z: Vec<PadicNumber>,
    /// Relative residual of the fixed-point system at z.
    pub residual_ord: i64,
    /// Number of distinct entries of z.
    pub distinct: usize,
}

fn int(p: u32, n: i64, prec: i64) -> PadicNumber {
    PadicNumber::from_i64(p, n, prec)
}

fn is_one(z: &PadicNumber) -> bool {
    let one = PadicNumber::one(z.prime(), z.rel_precision().unwrap_or(64));
    !matches!(z.diff_ord(&one), OrdBound::Exact(_))
}

fn in_ep_not_one(z: &PadicNumber) -> bool {
    ep_membership(z).unwrap_or(false) && !is_one(z)
}

fn distinct_entries(z: &[PadicNumber]) -> usize {
    let mut reps: Vec<&PadicNumber> = Vec::new();
    for x in z {
        if !reps.iter().any(|r| !matches!(r.diff_ord(x), OrdBound::Exact(_))) {
            reps.push(x);
        }
    }
    reps.len()
}

fn cube_of_linear(a: &PadicNumber, b: &PadicNumber) -> Vec<PadicNumber> {
    // (a z + b)^3 low degree first
    vec![
        b.pow(3),
        a.mul(&b.mul(b)).mul_int(3),
        a.mul(a).mul(b).mul_int(3),
        a.pow(3),
    ]
}

/// The translation-invariant solutions of form A-E for `k = 3`, each
/// re-verified against the fixed-point system.
pub fn ti_solve(
    form: TiForm,
    q_states: usize,
    theta: &PadicNumber,
    m1: usize,
    m2: usize,
    m3: usize,
) -> Result<Vec<TiSolution>> {
    let p = theta.prime();
    let q = q_states as i64;
    standing_regime(theta, &int(p, q, theta.rel_precision().unwrap_or(64)))?;
    let prec = theta.rel_precision().unwrap_or(64) + GUARD_DIGITS;
    let theta = &theta.padded(prec);
    let one = PadicNumber::one(p, prec);
    let tm1 = theta.sub_approx(&one);
    let n = q_states - 1;
    let mut vectors: Vec<Vec<PadicNumber>> = Vec::new();
    match form {
        TiForm::A => vectors.push(vec![one.clone(); n]),
        TiForm::B => {
            let qm1 = int(p, q - 1, prec);
            let t2 = tm1.mul(&tm1);
            let c3 = qm1.pow(3);
            let c2 = qm1.mul(&qm1).mul_int(3).sub_approx(&t2.mul(&theta.add_approx(&qm1.mul_int(3)).sub_approx(&one)));
            let c1 = qm1.mul_int(3).sub_approx(&t2.mul(&theta.add_approx(&int(p, 2, prec))));
            for z in cubic_roots(vec![one.clone(), c1, c2, c3])? {
                vectors.push(vec![z; n]);
            }
        }
        TiForm::C => {
            if m1 + m2 != n || m2 == 0 {
                return Err(Error::InvalidArgument(format!("form C needs m1 + m2 = {n}, m2 >= 1")));
            }
            let (a1, a2) = (int(p, m1 as i64 + 1, prec), int(p, m2 as i64, prec));
            let t2 = tm1.mul(&tm1);
            let c3 = a2.pow(3);
            let c2 = a2.mul(&a2).mul(&a1).mul_int(3).sub_approx(
                &t2.mul(&theta.add_approx(&a2.mul_int(3)).sub_approx(&one)),
            );
            let c1 = a2.mul(&a1).mul(&a1).mul_int(3).sub_approx(
                &t2.mul(&theta.add_approx(&a1.mul_int(3)).sub_approx(&one)),
            );
            let c0 = a1.pow(3);
            for z in cubic_roots(vec![c0, c1, c2, c3])? {
                let mut v = vec![one.clone(); m1];
                v.extend(std::iter::repeat(z).take(m2));
                vectors.push(v);
            }
        }
        TiForm::D | TiForm::E => {
            let e = form == TiForm::E;
            if (e && m1 + m2 + m3 != n) || (!e && m1 + m2 != n) {
                return Err(Error::InvalidArgument(format!(
                    "partition sizes must add up to q - 1 = {n}"
                )));
            }
            let m3 = if e { m3 } else { 0 };
            if e && m1 == m2 && m2 == m3 + 1 && !matches!(theta.diff_ord(&int(p, 1 - q, prec)), OrdBound::Exact(_)) {
                return Err(Error::OutOfRegime("theta = 1 - q makes the map constant".into()));
            }
            let d1 = tm1.add_approx(&int(p, 3 * m1 as i64, prec));
            let d2 = tm1.add_approx(&int(p, 3 * m2 as i64, prec));
            let nonzero = |d: &PadicNumber| matches!(d.ord_bound(), OrdBound::Exact(_));
            // companion: z_a = -(d_b z_b + c) / d_a with z_b a root of the cubic
            let (da, db, ma, mb, swap) = if nonzero(&d1) {
                (d1, d2, m1, m2, false)
            } else if nonzero(&d2) {
                (d2, d1, m2, m1, true)
            } else {
                return Err(Error::DegenerateForm("theta - 1 + 3 m_i vanishes for both i".into()));
            };
            let shift = if e { 3 * m3 as i64 + 2 } else { 2 };
            let c = theta.add_approx(&int(p, shift, prec));
            let lin_b = if e { ma as i64 - m3 as i64 - 1 } else { ma as i64 - 1 };
            let mut coeffs = cube_of_linear(&int(p, ma as i64 - mb as i64, prec), &int(p, lin_b, prec));
            let da2 = da.mul(&da);
            coeffs[2] = coeffs[2].add_approx(&da2.mul(&db));
            coeffs[1] = coeffs[1].add_approx(&da2.mul(&c));
            for zb in cubic_roots(coeffs)? {
                let za = -(db.mul(&zb).add_approx(&c)).try_div(&da)?;
                if !in_ep_not_one(&za) {
                    continue;
                }
                let (z1, z2) = if swap { (zb, za) } else { (za, zb) };
                let mut v = vec![z1; m1];
                v.extend(std::iter::repeat(z2).take(m2));
                v.extend(std::iter::repeat(one.clone()).take(m3));
                vectors.push(v);
            }
        }
    }
    vectors
        .into_iter()
        .map(|z| {
            let residual_ord = ti_residual(&z, theta, 3)?;
            let distinct = distinct_entries(&z);
            Ok(TiSolution { z, residual_ord, distinct })
        })
        .collect()
}

/// Roots in `E_p \ {1}` of a polynomial given low degree first.
fn cubic_roots(coeffs: Vec<PadicNumber>) -> Result<Vec<PadicNumber>> {
    let f = Polynomial::new(coeffs)?;
    if f.degree() == 0 {
        return Err(Error::DegenerateForm("the cubic collapses to a constant".into()));
    }
    Ok(roots(&f)?.into_iter().filter(in_ep_not_one).collect())
}

/// Whether `|α|` avoids `{i p^{ord q} : 1 <= i < q*}` and lies in `1..q`.
pub fn alpha_admissible(alpha_size: usize, q_states: usize, p: u32) -> bool {
    if alpha_size == 0 || alpha_size >= q_states {
        return false;
    }
    let (pl, _) = split_q(q_states, p);
    !(alpha_size % pl == 0 && alpha_size / pl < q_states / pl)
}

/// `(p^{ord q}, q*)` with `q = p^{ord q} q*`.
fn split_q(q: usize, p: u32) -> (usize, usize) {
    let mut pl = 1;
    let mut rest = q;
    while rest % p as usize == 0 && rest > 0 {
        pl *= p as usize;
        rest /= p as usize;
    }
    (pl, rest)
}

/// Boundary function of an `H_m`-periodic measure from an orbit
/// `o_0, o_1 = G(o_0), ...` of length m of `G_{θ,α,q,3}`: level j gets
/// `z^(j) = o_{-j mod m}`, so that `z^(j) = G(z^(j+1))`.
pub fn cycle_to_measure(
    orbit: &[PadicNumber],
    alpha_size: usize,
    q_states: usize,
    theta: &PadicNumber,
) -> Result<BoundaryFunction> {
    let p = theta.prime();
    if !alpha_admissible(alpha_size, q_states, p) {
        return Err(Error::InadmissibleAlpha(alpha_size));
    }
    let m = orbit.len();
    if m == 0 {
        return Err(Error::InvalidArgument("empty cycle".into()));
    }
    let threshold = theta.rel_precision().unwrap_or(64) - 10;
    let prec = theta.rel_precision().unwrap_or(64) + GUARD_DIGITS;
    let theta = &theta.padded(prec);
    let one = PadicNumber::one(p, prec);
    let z: Vec<Vec<PadicNumber>> = (0..m)
        .map(|j| {
            let zj = orbit[(m - j) % m].padded(prec);
            let mut v = vec![zj; alpha_size];
            v.extend(std::iter::repeat(one.clone()).take(q_states - 1 - alpha_size));
            v
        })
        .collect();
    for j in 0..m {
        if !z[j].iter().all(|x| ep_membership(x).unwrap_or(false)) {
            return Err(Error::NotACycle(j));
        }
        let r = periodic_residual(&z[j], &z[(j + 1) % m], theta, 3)?;
        if r < threshold {
            return Err(Error::NotACycle(j));
        }
    }
    BoundaryFunction::from_z(&z)
}

/// Whether `z^(j) = (ratio(z^(j+1)))^k` holds to `threshold` digits for all
/// j, with `z = exp_p(h)`. Checked on z because the ratio can be a root of
/// unity times a principal unit, where `F` itself has no logarithm.
pub fn satisfies_recursion(bf: &BoundaryFunction, theta: &PadicNumber, k: u32, threshold: i64) -> Result<bool> {
    let m = bf.period();
    for j in 0..m {
        if periodic_residual(&bf.z(j)?, &bf.z(j + 1)?, theta, k)? < threshold {
            return Ok(false);
        }
    }
    Ok(true)
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// `(2^{q-1} - Σ_{i=1}^{q*-1} C(q-1, i p^{ord q})) 3^m`.
pub fn hgm_lower_bound(m: u32, q: usize, p: u32) -> Result<BigUint> {
    if q == 0 || q % p as usize != 0 {
        return Err(Error::InvalidArgument(format!("|{q}|_{p} is not < 1")));
    }
    let (pl, qs) = split_q(q, p);
    let excluded = (1..qs).fold(BigUint::zero(), |acc, i| acc + binomial(q - 1, i * pl));
    Ok((BigUint::from(2u32).pow(q as u32 - 1) - excluded) * BigUint::from(3u32).pow(m))
}
