//! The Potts-Bethe map `f(x) = ((θx + q - 1)/(x + θ + q - 2))^k` in the
//! regime `0 < |θ-1|_p < |q|_p < 1`.
//!
//! Evaluation uses `f(x) = (θ + (θ-1)(1-θ-q)/(x - x∞))^k` with the pole
//! `x∞ = 2 - θ - q`; near the attracting point this loses no absolute
//! precision, unlike the quotient form.

use std::fmt;

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::padic::{Ball, Norm, OrdBound, PadicNumber, Valuation};
use crate::poly::{fixed_point_cubic_roots, hensel_lift, standing_regime, CubicRoots, Polynomial};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stability {
    Attracting,
    Indifferent,
    Repelling,
}

impl Stability {
    pub fn of_norm(n: Norm) -> Stability {
        match n {
            Norm::Zero => Stability::Attracting,
            Norm::PPower(e) if e < 0 => Stability::Attracting,
            Norm::PPower(0) => Stability::Indifferent,
            Norm::PPower(_) => Stability::Repelling,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Stability::Attracting => "attracting",
            Stability::Indifferent => "indifferent",
            Stability::Repelling => "repelling",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedPointInfo {
    /// 0 for the point 1, then 1..=3 in the order of the cubic roots.
    pub index: usize,
    pub point: PadicNumber,
    pub multiplier: PadicNumber,
    pub multiplier_norm: Norm,
    pub class: Stability,
}

/// Which analysis applies to the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapRegime {
    /// p = 1 mod 3 and `|θ-1| < |q|^2`.
    FullShift,
    /// p = 1 mod 3 and `|q|^{(m+1)/m} <= |θ-1| < |q|^{(m+2)/(m+1)}`.
    Chain(u32),
    /// p = 2 mod 3, p >= 5.
    TwoModThree,
    Three,
    Two,
}

impl MapRegime {
    pub fn tag(self) -> String {
        match self {
            MapRegime::FullShift => "p=1 mod 3, full shift".into(),
            MapRegime::Chain(m) => format!("p=1 mod 3, A_{m}"),
            MapRegime::TwoModThree => "p=2 mod 3".into(),
            MapRegime::Three => "p=3".into(),
            MapRegime::Two => "p=2".into(),
        }
    }

    pub fn is_one_mod_three(self) -> bool {
        matches!(self, MapRegime::FullShift | MapRegime::Chain(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    A0,
    A1,
    A0Inf,
    A2,
    A1Inf,
    C1,
    A3,
    A23Inf,
    C2,
    C3,
    AInf,
    A1Inf1,
    A1Inf2,
    AInf1,
    AInf2,
    AInf3,
    Singular,
}

impl Region {
    pub fn tag(self) -> &'static str {
        match self {
            Region::A0 => "A0",
            Region::A1 => "A1",
            Region::A0Inf => "A0_INF",
            Region::A2 => "A2",
            Region::A1Inf => "A1_INF",
            Region::C1 => "C1",
            Region::A3 => "A3",
            Region::A23Inf => "A23_INF",
            Region::C2 => "C2",
            Region::C3 => "C3",
            Region::AInf => "A_INF",
            Region::A1Inf1 => "A1_INF_1",
            Region::A1Inf2 => "A1_INF_2",
            Region::AInf1 => "A_INF_1",
            Region::AInf2 => "A_INF_2",
            Region::AInf3 => "A_INF_3",
            Region::Singular => "SINGULAR",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PottsBetheMap {
    theta: PadicNumber,
    q: PadicNumber,
    k: u32,
    pole: PadicNumber,
    /// `(θ-1)(1-θ-q)`, the residue-like constant of the pole form.
    pole_coeff: PadicNumber,
    exact: Option<(BigRational, BigRational)>,
    ord_theta: i64,
    ord_q: i64,
    regime: MapRegime,
    cubic: Option<CubicRoots>,
    fixed: Vec<FixedPointInfo>,
}

impl PottsBetheMap {
    /// The cubic map `f_{θ,q,3}` with fixed points computed up front.
    pub fn new(theta: PadicNumber, q: PadicNumber) -> Result<Self> {
        Self::build(theta, q, 3, None)
    }

    /// General exponent `k`; only evaluation and derivatives are available
    /// when `k != 3`.
    pub fn with_k(theta: PadicNumber, q: PadicNumber, k: u32) -> Result<Self> {
        Self::build(theta, q, k, None)
    }

    /// Parameters given exactly, so the map can be rebuilt at any precision.
    pub fn from_rationals(
        prime: u32,
        theta: &BigRational,
        q: &BigRational,
        precision: i64,
    ) -> Result<Self> {
        let t = PadicNumber::from_bigrational(theta, prime, precision)?;
        let qq = PadicNumber::from_bigrational(q, prime, precision)?;
        Self::build(t, qq, 3, Some((theta.clone(), q.clone())))
    }

    /// The map `G_{θ,α,q,3}` written as `f_{Θ,Q,3}` with
    /// `Θ = (θ-1)/|α| + 1`, `Q = q/|α|`.
    pub fn reduced(theta: &PadicNumber, q: &PadicNumber, alpha_size: usize) -> Result<Self> {
        let p = theta.prime();
        let prec = theta.rel_precision().unwrap_or(64);
        let one = PadicNumber::one(p, prec);
        let a = PadicNumber::from_i64(p, alpha_size as i64, prec);
        let big_theta = theta.try_sub(&one)?.try_div(&a)?.try_add(&one)?;
        let big_q = q.try_div(&a)?;
        Self::new(big_theta, big_q)
    }

    fn build(
        theta: PadicNumber,
        q: PadicNumber,
        k: u32,
        exact: Option<(BigRational, BigRational)>,
    ) -> Result<Self> {
        let p = theta.prime();
        let (ord_theta, ord_q) = standing_regime(&theta, &q)?;
        let prec = theta.rel_precision().unwrap_or(64);
        let one = PadicNumber::one(p, prec);
        let two = PadicNumber::from_i64(p, 2, prec);
        let pole = two.try_sub(&theta)?.try_sub(&q)?;
        let tm1 = theta.try_sub(&one)?;
        let c = one.try_sub(&theta)?.try_sub(&q)?;
        let pole_coeff = tm1.mul(&c);
        let regime = match p {
            2 => MapRegime::Two,
            3 => MapRegime::Three,
            _ if p % 3 == 2 => MapRegime::TwoModThree,
            _ if ord_theta > 2 * ord_q => MapRegime::FullShift,
            _ => MapRegime::Chain((ord_q / (ord_theta - ord_q)) as u32),
        };
        let mut map = PottsBetheMap {
            theta,
            q,
            k,
            pole,
            pole_coeff,
            exact,
            ord_theta,
            ord_q,
            regime,
            cubic: None,
            fixed: Vec::new(),
        };
        if k == 3 {
            map.compute_fixed_points()?;
        }
        Ok(map)
    }

    fn compute_fixed_points(&mut self) -> Result<()> {
        let cubic = fixed_point_cubic_roots(&self.theta, &self.q)?;
        let p = self.prime();
        let tm1 = self.theta_minus_one();
        let mut points = vec![PadicNumber::one(p, self.precision())];
        for r in &cubic.roots {
            points.push(self.pole.add_approx(&tm1.mul(&r.value)));
        }
        let mut fixed = Vec::with_capacity(points.len());
        for (index, point) in points.into_iter().enumerate() {
            let multiplier = self.derivative(&point)?;
            let multiplier_norm = multiplier.norm()?;
            fixed.push(FixedPointInfo {
                index,
                point,
                multiplier,
                multiplier_norm,
                class: Stability::of_norm(multiplier_norm),
            });
        }
        self.cubic = Some(cubic);
        self.fixed = fixed;
        Ok(())
    }

    /// Rebuilds the map with parameters carried to `precision` digits;
    /// available only for maps built from exact parameters.
    pub fn at_precision(&self, precision: i64) -> Option<Result<Self>> {
        let (t, q) = self.exact.as_ref()?;
        Some(Self::from_rationals(self.prime(), t, q, precision))
    }

    pub fn prime(&self) -> u32 {
        self.theta.prime()
    }

    pub fn theta(&self) -> &PadicNumber {
        &self.theta
    }

    pub fn q(&self) -> &PadicNumber {
        &self.q
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn exact_parameters(&self) -> Option<&(BigRational, BigRational)> {
        self.exact.as_ref()
    }

    /// Relative precision of θ, the working precision of the map.
    pub fn precision(&self) -> i64 {
        self.theta.rel_precision().unwrap_or(64)
    }

    pub fn singular_point(&self) -> &PadicNumber {
        &self.pole
    }

    pub fn theta_minus_one(&self) -> PadicNumber {
        self.theta
            .sub_approx(&PadicNumber::one(self.prime(), self.precision()))
    }

    /// `ord_p(θ-1)`.
    pub fn ord_theta_minus_one(&self) -> i64 {
        self.ord_theta
    }

    /// `ord_p(q)`.
    pub fn ord_q(&self) -> i64 {
        self.ord_q
    }

    pub fn regime(&self) -> MapRegime {
        self.regime
    }

    /// The norm comparisons that select the regime, for reports.
    pub fn inequality_chain(&self) -> String {
        let (p, a, b) = (self.prime(), self.ord_q, self.ord_theta);
        let base = format!("0 < |theta-1|_{p} = {p}^-{b} < |q|_{p} = {p}^-{a} < 1");
        match self.regime {
            MapRegime::FullShift => format!("{base}; |theta-1| = {p}^-{b} < |q|^2 = {p}^-{}", 2 * a),
            MapRegime::Chain(m) => format!(
                "{base}; |q|^({}/{m}) <= |theta-1| < |q|^({}/{}) i.e. {a}*{}/{m} >= {b} > {a}*{}/{}",
                m + 1,
                m + 2,
                m + 1,
                m + 1,
                m + 2,
                m + 1
            ),
            MapRegime::Three => format!("{base}; |q|_3 {} 1/3", if a == 1 { "=" } else { "<" }),
            _ => base,
        }
    }

    pub fn cubic_roots(&self) -> Option<&CubicRoots> {
        self.cubic.as_ref()
    }

    pub fn fixed_points(&self) -> &[FixedPointInfo] {
        &self.fixed
    }

    /// `x^(i)`; index 0 is the attracting point 1.
    pub fn fixed_point(&self, i: usize) -> Option<&PadicNumber> {
        self.fixed.get(i).map(|f| &f.point)
    }

    fn pole_offset(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let d = x.sub_approx(&self.pole);
        match d.ord_bound() {
            OrdBound::Exact(_) => Ok(d),
            _ => Err(Error::SingularInput),
        }
    }

    fn inner(&self, x: &PadicNumber) -> Result<(PadicNumber, PadicNumber)> {
        let d = self.pole_offset(x)?;
        let u = self.theta.add_approx(&self.pole_coeff.try_div(&d)?);
        Ok((u, d))
    }

    /// The base `u(x) = θ + (θ-1)(1-θ-q)/(x - x∞)` with `f(x) = u(x)^k`.
    pub fn pole_form_base(&self, x: &PadicNumber) -> Result<PadicNumber> {
        self.inner(x).map(|(u, _)| u)
    }

    /// Residue of `u(x)` mod p; for k = 3 it labels the inverse branch
    /// through `x`.
    pub fn branch_residue(&self, x: &PadicNumber) -> Result<u32> {
        let u = self.pole_form_base(x)?;
        if u.valuation()? != Valuation::Finite(0) {
            return Err(Error::OutOfDomain("u(x) is not a unit".into()));
        }
        Ok(u.leading_digit().unwrap_or(0))
    }

    /// The preimage of `t` whose base `u` is congruent to `residue` mod p.
    pub fn inverse_branch(&self, t: &PadicNumber, residue: u32) -> Result<PadicNumber> {
        let p = self.prime();
        let prec = t.rel_precision().unwrap_or(self.precision());
        let mut coeffs = vec![-t.clone()];
        for _ in 1..self.k {
            coeffs.push(PadicNumber::zero(p));
        }
        coeffs.push(PadicNumber::one(p, prec));
        let f = Polynomial::new(coeffs)?;
        let u = hensel_lift(&f, &PadicNumber::from_i64(p, residue as i64, prec), 0)?;
        let du = u.try_sub(&self.theta).map_err(|_| Error::SingularInput)?;
        Ok(self.pole.add_approx(&self.pole_coeff.try_div(&du)?))
    }

    pub fn eval(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let (u, _) = self.inner(x)?;
        Ok(u.pow(self.k))
    }

    /// `f'(x) = k u^{k-1} (θ-1)(θ-1+q)/(x - x∞)^2`.
    pub fn derivative(&self, x: &PadicNumber) -> Result<PadicNumber> {
        let (u, d) = self.inner(x)?;
        let tm1 = self.theta_minus_one();
        let num = tm1.mul(&tm1.add_approx(&self.q)).mul_int(self.k as i64);
        Ok(num.mul(&u.pow(self.k - 1)).try_div(&d.mul(&d))?)
    }

    fn require_cubic(&self) -> Result<()> {
        if self.k != 3 {
            return Err(Error::OutOfRegime(format!(
                "dynamics are implemented for k = 3 only (k = {})",
                self.k
            )));
        }
        Ok(())
    }

    pub fn classify_region(&self, x: &PadicNumber) -> Result<Region> {
        self.require_cubic()?;
        let (a, b) = (self.ord_q, self.ord_theta);
        let dinf = match x.diff_ord(&self.pole) {
            OrdBound::Exact(v) => v,
            OrdBound::AtLeast(k) if k < self.precision() => {
                return Err(Error::PrecisionExhausted(format!(
                    "x - x_inf is zero only modulo p^{k}"
                )))
            }
            _ => return Ok(Region::Singular),
        };
        let d0 = x.diff_ord(&self.fixed[0].point);
        match cmp_ord(d0, a)? {
            std::cmp::Ordering::Greater => return Ok(Region::A0),
            std::cmp::Ordering::Less => return Ok(Region::A1),
            std::cmp::Ordering::Equal => {}
        }
        if dinf == a {
            return Ok(Region::A0Inf);
        }
        let near = |i: usize, k: i64| -> Result<bool> {
            Ok(cmp_ord(x.diff_ord(&self.fixed[i].point), k)? == std::cmp::Ordering::Greater)
        };
        match self.regime {
            MapRegime::FullShift | MapRegime::Chain(_) => Ok(if dinf < b {
                Region::A2
            } else if dinf == b {
                if near(1, b)? {
                    Region::C1
                } else {
                    Region::A1Inf
                }
            } else if dinf < a + b {
                Region::A3
            } else if dinf == a + b {
                if near(2, a + b)? {
                    Region::C2
                } else if near(3, a + b)? {
                    Region::C3
                } else {
                    Region::A23Inf
                }
            } else {
                Region::AInf
            }),
            MapRegime::Three => Ok(if dinf <= b {
                Region::A2
            } else if dinf == b + 1 {
                if self.fixed.len() > 1 && near(1, b + 1)? {
                    Region::A1Inf2
                } else {
                    Region::A1Inf1
                }
            } else {
                Region::AInf
            }),
            MapRegime::Two => Ok(if dinf < b {
                Region::A2
            } else if dinf == b {
                if near(1, b)? {
                    Region::A1Inf2
                } else {
                    Region::A1Inf1
                }
            } else if dinf < a + b {
                Region::AInf1
            } else if dinf == a + b {
                Region::AInf2
            } else {
                Region::AInf3
            }),
            MapRegime::TwoModThree => Err(Error::OutOfRegime(
                "region analysis for p = 2 mod 3, p >= 5 is not covered".into(),
            )),
        }
    }

    /// Balls on which `|f(x) - f(y)| = p^τ |x - y|` holds exactly, with τ.
    pub fn scaling_regions(&self) -> Vec<(Region, Ball, i64)> {
        let (a, b) = (self.ord_q, self.ord_theta);
        let fp = |i: usize| self.fixed[i].point.clone();
        match self.regime {
            MapRegime::FullShift | MapRegime::Chain(_) if self.fixed.len() == 4 => vec![
                (Region::C1, Ball::new(fp(1), -(b + 1)), b - a),
                (Region::C2, Ball::new(fp(2), -(a + b + 1)), a + b),
                (Region::C3, Ball::new(fp(3), -(a + b + 1)), a + b),
            ],
            MapRegime::Three if self.fixed.len() == 2 => {
                vec![(Region::A1Inf2, Ball::new(fp(1), -(b + 2)), b - a + 1)]
            }
            MapRegime::Two if self.fixed.len() == 2 => {
                vec![(Region::A1Inf2, Ball::new(fp(1), -(b + 1)), b - a)]
            }
            _ => Vec::new(),
        }
    }

    /// τ with `S = p^τ` for a ball inside a scaling region.
    pub fn local_scaling_exponent(&self, ball: &Ball) -> Result<i64> {
        for (_, region, tau) in self.scaling_regions() {
            if region.contains_ball(ball)? {
                return Ok(tau);
            }
        }
        Err(Error::NotScalingDomain)
    }

    /// The scaling factor as a norm `p^τ`.
    pub fn local_scaling_factor(&self, ball: &Ball) -> Result<Norm> {
        self.local_scaling_exponent(ball).map(Norm::PPower)
    }

    pub fn ball_image(&self, ball: &Ball) -> Result<Ball> {
        let tau = self.local_scaling_exponent(ball)?;
        Ok(Ball::new(self.eval(&ball.center)?, ball.radius_exp + tau))
    }

    /// Iterates `f` from `x`, keeping every point of the orbit.
    pub fn orbit(&self, x: &PadicNumber, steps: usize) -> Result<Vec<PadicNumber>> {
        let mut out = vec![x.clone()];
        for _ in 0..steps {
            let next = self.eval(out.last().unwrap())?;
            out.push(next);
        }
        Ok(out)
    }

    /// Iterations needed until `|f^n(x) - 1| <= p^{-target_ord}`.
    pub fn steps_to_attractor(&self, x: &PadicNumber, target_ord: i64, max_iter: usize) -> Result<Option<usize>> {
        let one = &self.fixed[0].point;
        let mut y = x.clone();
        for n in 0..=max_iter {
            if y.diff_ord(one).at_least(target_ord)? {
                return Ok(Some(n));
            }
            if n < max_iter {
                y = self.eval(&y)?;
            }
        }
        Ok(None)
    }

    /// Checks the listed norm relations between fixed points for this
    /// instance (p = 1 mod 3): returns `(name, holds)` pairs.
    pub fn fixed_point_relations(&self) -> Result<Vec<(&'static str, bool)>> {
        if !self.regime.is_one_mod_three() || self.fixed.len() != 4 {
            return Ok(Vec::new());
        }
        let (a, b) = (self.ord_q, self.ord_theta);
        let x = |i: usize| &self.fixed[i].point;
        let ord = |u: &PadicNumber, v: &PadicNumber| u.diff_ord(v).exact();
        let y = &self.cubic.as_ref().unwrap().roots;
        let fin = Valuation::Finite;
        Ok(vec![
            ("|x0 - xinf| = |q|", ord(x(0), &self.pole)? == fin(a)),
            ("|x1 - xinf| = |theta-1|", ord(x(1), &self.pole)? == fin(b)),
            (
                "|x2 - xinf| = |x3 - xinf| = |q||theta-1|",
                ord(x(2), &self.pole)? == fin(a + b) && ord(x(3), &self.pole)? == fin(a + b),
            ),
            (
                "|xi - x0| = |q|, i = 1,2,3",
                (1..4).map(|i| ord(x(i), x(0))).collect::<Result<Vec<_>>>()?.iter().all(|&v| v == fin(a)),
            ),
            (
                "|y1 - yi| = 1, i = 2,3",
                ord(&y[0].value, &y[1].value)? == fin(0) && ord(&y[0].value, &y[2].value)? == fin(0),
            ),
            (
                "|xi - x1| = |theta-1|, i = 2,3",
                ord(x(2), x(1))? == fin(b) && ord(x(3), x(1))? == fin(b),
            ),
            ("|x2 - x3| = |q||theta-1|", ord(x(2), x(3))? == fin(a + b)),
        ])
    }
}

fn cmp_ord(bound: OrdBound, k: i64) -> Result<std::cmp::Ordering> {
    use std::cmp::Ordering;
    match bound {
        OrdBound::Exact(v) => Ok(v.cmp(&k)),
        OrdBound::Infinite => Ok(Ordering::Greater),
        OrdBound::AtLeast(v) if v > k => Ok(Ordering::Greater),
        OrdBound::AtLeast(v) => Err(Error::PrecisionExhausted(format!(
            "cannot compare a valuation known to be >= {v} with {k}"
        ))),
    }
}

/// Labelled balls an orbit can be trapped in.
pub trait Trap {
    fn locate(&self, x: &PadicNumber) -> Result<Option<usize>>;
    fn label(&self, symbol: usize) -> String;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BasinOutcome {
    /// The orbit is in `A0` after this many steps.
    Converges(usize),
    /// The orbit stayed inside the partition for every computable step.
    InJuliaPartition { symbol: usize, label: String },
    HitsSingular(usize),
    Undecided,
}

pub fn basin_decide(m: &PottsBetheMap, x: &PadicNumber, max_iter: usize) -> BasinOutcome {
    basin_decide_with(m, x, max_iter, None)
}

/// Follows the orbit until it enters `A0`, hits the pole, or runs out of
/// iterations or digits. With a partition, an orbit that never leaves it is
/// reported as a Julia candidate.
pub fn basin_decide_with(
    m: &PottsBetheMap,
    x: &PadicNumber,
    max_iter: usize,
    trap: Option<&dyn Trap>,
) -> BasinOutcome {
    let mut y = x.clone();
    let mut start: Option<usize> = None;
    let mut stayed = trap.is_some();
    let julia = |start: Option<usize>, stayed: bool| match (trap, start) {
        (Some(t), Some(s)) if stayed => BasinOutcome::InJuliaPartition { symbol: s, label: t.label(s) },
        _ => BasinOutcome::Undecided,
    };
    for step in 0..=max_iter {
        match m.classify_region(&y) {
            Ok(Region::A0) => return BasinOutcome::Converges(step),
            Ok(Region::Singular) => return BasinOutcome::HitsSingular(step),
            Ok(_) => {}
            Err(_) => return julia(start, stayed),
        }
        if let (Some(t), true) = (trap, stayed) {
            match t.locate(&y) {
                Ok(Some(s)) => {
                    if step == 0 {
                        start = Some(s);
                    }
                }
                Ok(None) => stayed = false,
                Err(_) => return julia(start, stayed),
            }
        }
        if step == max_iter {
            break;
        }
        y = match m.eval(&y) {
            Ok(v) => v,
            Err(Error::SingularInput) => return BasinOutcome::HitsSingular(step + 1),
            Err(_) => return julia(start, stayed),
        };
    }
    julia(start, stayed)
}
