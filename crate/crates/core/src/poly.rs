//! Polynomials over Q_p: Newton polygons, Hensel lifting, residue
//! congruences, root finding and the fixed-point cubic of the Potts-Bethe map.

use num_bigint::BigInt;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::functions::ep_membership;
use crate::padic::{OrdBound, PadicNumber};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<PadicNumber>,
}

impl Polynomial {
    /// Coefficients `a_0..a_n`. Trailing exact zeros are dropped; the leading
    /// coefficient must be known to be nonzero.
    pub fn new(mut coeffs: Vec<PadicNumber>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.is_exact_zero()) {
            coeffs.pop();
        }
        let Some(lead) = coeffs.last() else {
            return Err(Error::InvalidArgument("zero polynomial".into()));
        };
        let p = lead.prime();
        if coeffs.iter().any(|c| c.prime() != p) {
            return Err(Error::PrimeMismatch(p, coeffs.iter().find(|c| c.prime() != p).unwrap().prime()));
        }
        lead.valuation()?;
        Ok(Polynomial { coeffs })
    }

    /// Integer coefficients `a_0..a_n` with the given relative precision.
    pub fn from_ints(p: u32, coeffs: &[i64], precision: i64) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| PadicNumber::from_i64(p, c, precision)).collect())
    }

    /// Internal constructor that tolerates vague leading coefficients.
    fn raw(coeffs: Vec<PadicNumber>) -> Self {
        Polynomial { coeffs }
    }

    pub fn prime(&self) -> u32 {
        self.coeffs[0].prime()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[PadicNumber] {
        &self.coeffs
    }

    /// Horner evaluation; the result may be zero to its known digits.
    pub fn eval(&self, x: &PadicNumber) -> PadicNumber {
        let mut acc = self.coeffs.last().unwrap().clone();
        for c in self.coeffs.iter().rev().skip(1) {
            acc = acc.mul(x).add_approx(c);
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() == 1 {
            return Polynomial::raw(vec![PadicNumber::zero(self.prime())]);
        }
        Polynomial::raw(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.mul_int(i as i64))
                .collect(),
        )
    }

    /// `f(c + s x)` expanded in powers of `x`.
    pub fn compose_linear(&self, c: &PadicNumber, s: &PadicNumber) -> Polynomial {
        let n = self.degree();
        let p = self.prime();
        let mut out = Vec::with_capacity(n + 1);
        let bprec = self.working_abs().max(1) + 8;
        // s^j, with None standing for s^0
        let mut s_pow: Option<PadicNumber> = None;
        for j in 0..=n {
            let mut acc = PadicNumber::zero(p);
            for i in j..=n {
                let binom = PadicNumber::from_bigint(p, &binomial(i as u64, j as u64), bprec);
                let term = self.coeffs[i].mul(&c.pow((i - j) as u32)).mul(&binom);
                acc = acc.add_approx(&term);
            }
            out.push(match &s_pow {
                None => acc,
                Some(sp) => acc.mul(sp),
            });
            s_pow = Some(match s_pow {
                None => s.clone(),
                Some(sp) => sp.mul(s),
            });
        }
        Polynomial::raw(out)
    }

    /// `f(p^e x)`, exact.
    pub fn scale_variable(&self, e: i64) -> Polynomial {
        Polynomial::raw(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.shift(e * i as i64))
                .collect(),
        )
    }

    /// Divides by the largest power of p dividing every coefficient; fails
    /// when no coefficient has a known valuation.
    fn primitive(&self) -> Result<Polynomial> {
        let m = self
            .coeffs
            .iter()
            .filter_map(|c| match c.ord_bound() {
                OrdBound::Exact(v) => Some(v),
                _ => None,
            })
            .min()
            .ok_or(Error::MultiplicityUnresolved)?;
        // a vague coefficient below the minimum would hide the true content
        if self
            .coeffs
            .iter()
            .any(|c| matches!(c.ord_bound(), OrdBound::AtLeast(k) if k <= m))
        {
            return Err(Error::MultiplicityUnresolved);
        }
        Ok(Polynomial::raw(self.coeffs.iter().map(|c| c.shift(-m)).collect()))
    }

    fn working_abs(&self) -> i64 {
        self.coeffs
            .iter()
            .filter_map(|c| c.abs_precision())
            .min()
            .unwrap_or(crate::padic::DEFAULT_PRECISION)
    }
}

pub(crate) fn binomial(n: u64, k: u64) -> BigInt {
    let mut acc = BigInt::from(1);
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    /// Roots along this segment have norm `p^slope`.
    pub slope: Ratio<i64>,
    pub length: usize,
}

impl Segment {
    /// Valuation of the roots when the slope is integral.
    pub fn integral_root_ord(&self) -> Option<i64> {
        self.slope.is_integer().then(|| -self.slope.to_integer())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolygon {
    /// Hull vertices `(i, ord a_i)`.
    pub vertices: Vec<(usize, i64)>,
    pub segments: Vec<Segment>,
}

/// Lower convex hull of the points `(i, ord a_i)` for nonzero `a_i`.
pub fn newton_polygon_of_points(points: &[(usize, i64)]) -> NewtonPolygon {
    let mut hull: Vec<(usize, i64)> = Vec::new();
    for &pt in points {
        while hull.len() >= 2 {
            let (o, a) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (a.0 as i64 - o.0 as i64) * (pt.1 - o.1)
                - (a.1 - o.1) * (pt.0 as i64 - o.0 as i64);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let segments = hull
        .windows(2)
        .map(|w| Segment {
            slope: Ratio::new(w[1].1 - w[0].1, (w[1].0 - w[0].0) as i64),
            length: w[1].0 - w[0].0,
        })
        .collect();
    NewtonPolygon { vertices: hull, segments }
}

pub fn newton_polygon(f: &Polynomial) -> Result<NewtonPolygon> {
    let mut points = Vec::new();
    for (i, c) in f.coeffs.iter().enumerate() {
        match c.ord_bound() {
            OrdBound::Infinite => {}
            OrdBound::Exact(v) => points.push((i, v)),
            OrdBound::AtLeast(k) => {
                return Err(Error::PrecisionExhausted(format!(
                    "coefficient a_{i} is only known to vanish mod p^{k}"
                )))
            }
        }
    }
    Ok(newton_polygon_of_points(&points))
}

/// Newton iteration from `seed` under the hypotheses
/// `f(seed) = 0 mod p^{2i+1}`, `ord f'(seed) = i`.
pub fn hensel_lift(f: &Polynomial, seed: &PadicNumber, i: i64) -> Result<PadicNumber> {
    let df = f.derivative();
    let w = f.working_abs();
    let mut x = seed.padded(w.max(1));
    let fx = f.eval(&x);
    if !fx.ord_bound().at_least(2 * i + 1).unwrap_or(false) {
        return Err(Error::HenselHypothesisFailed(format!(
            "f(seed) is not 0 mod p^{}",
            2 * i + 1
        )));
    }
    match df.eval(&x).ord_bound() {
        OrdBound::Exact(v) if v == i => {}
        OrdBound::Exact(v) if v > i => {
            return Err(Error::HenselHypothesisFailed(format!(
                "f'(seed) is 0 mod p^{}",
                i + 1
            )))
        }
        OrdBound::Exact(_) => {
            return Err(Error::HenselHypothesisFailed(format!(
                "f'(seed) is not 0 mod p^{i}"
            )))
        }
        _ => {
            return Err(Error::HenselHypothesisFailed(format!(
                "f'(seed) is 0 mod p^{}",
                i + 1
            )))
        }
    }
    for _ in 0..256 {
        let fx = f.eval(&x);
        if let OrdBound::Exact(_) = fx.ord_bound() {
            let step = fx.try_div(&df.eval(&x))?;
            x = x.sub_approx(&step);
            continue;
        }
        // f(x) vanishes to every known digit: |x - root| <= |f(x)| / |f'(x)|
        let bound = fx.ord_bound().lower().saturating_sub(i);
        let root = x.truncate_abs(bound);
        if !root.agrees_to(seed, i + 1).unwrap_or(false) {
            return Err(Error::HenselHypothesisFailed("lift left the seed class".into()));
        }
        return Ok(root);
    }
    Err(Error::PrecisionExhausted("Newton iteration did not settle".into()))
}

/// All `t` in `0..p` with `a t^2 + b t + c = 0 mod p`, ascending.
pub fn quadratic_congruence_roots(a: i64, b: i64, c: i64, p: u32) -> Vec<u32> {
    let pm = p as i64;
    (0..p)
        .filter(|&t| {
            let t = t as i64;
            (a.rem_euclid(pm) * t % pm * t + b.rem_euclid(pm) * t + c.rem_euclid(pm)) % pm == 0
        })
        .collect()
}

/// Whether `-3` is a nonzero square mod an odd prime `p > 3`.
pub fn minus_three_is_square(p: u32) -> bool {
    let pm = p as u64;
    let target = (pm * 3 - 3) % pm;
    (1..pm).any(|t| t * t % pm == target)
}

/// Roots of `f` in Q_p: integral Newton-polygon slopes, residues mod p, then
/// Hensel lifting, refining residue classes where a residue is a multiple
/// root mod p.
pub fn roots(f: &Polynomial) -> Result<Vec<PadicNumber>> {
    let p = f.prime();
    let mut coeffs = f.coeffs.clone();
    let mut out = Vec::new();
    while coeffs.len() > 1 && coeffs[0].is_exact_zero() {
        coeffs.remove(0);
        if !out.iter().any(|r: &PadicNumber| r.is_exact_zero()) {
            out.push(PadicNumber::zero(p));
        }
    }
    let f = Polynomial::raw(coeffs);
    if f.degree() == 0 {
        return Ok(out);
    }
    let np = newton_polygon(&f)?;
    for seg in &np.segments {
        let Some(e) = seg.integral_root_ord() else {
            continue;
        };
        let g = f.scale_variable(e).primitive()?;
        for t in unit_roots(&g, 0)? {
            out.push(t.shift(e));
        }
    }
    Ok(out)
}

fn unit_roots(g: &Polynomial, depth: usize) -> Result<Vec<PadicNumber>> {
    let p = g.prime();
    let mut out = Vec::new();
    for r in 1..p {
        out.extend(roots_in_class(g, r as i64, depth)?);
    }
    Ok(out)
}

/// Roots of a primitive integral `g` congruent to `r` mod p.
fn roots_in_class(g: &Polynomial, r: i64, depth: usize) -> Result<Vec<PadicNumber>> {
    let p = g.prime();
    if depth > 4 * g.working_abs().max(1) as usize {
        return Err(Error::MultiplicityUnresolved);
    }
    let w = g.working_abs().max(1);
    let seed = PadicNumber::from_i64(p, r, w + 1);
    if !g.eval(&seed).ord_bound().at_least(1).unwrap_or(false) {
        return Ok(Vec::new());
    }
    if let OrdBound::Exact(0) = g.derivative().eval(&seed).ord_bound() {
        return Ok(vec![hensel_lift(g, &seed, 0)?]);
    }
    // multiple residue: look at g(r + p u)
    let h = g
        .compose_linear(&seed, &PadicNumber::p_power(p, 1, w + 1))
        .primitive()?;
    let mut out = Vec::new();
    for s in 0..p {
        for u in roots_in_class(&h, s as i64, depth + 1)? {
            out.push(seed.add_approx(&u.shift(1)));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicRegime {
    OneModThree,
    TwoModThree,
    Three,
    Two,
}

impl CubicRegime {
    pub fn of_prime(p: u32) -> CubicRegime {
        match p {
            2 => CubicRegime::Two,
            3 => CubicRegime::Three,
            _ if p % 3 == 1 => CubicRegime::OneModThree,
            _ => CubicRegime::TwoModThree,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            CubicRegime::OneModThree => "p=1 mod 3",
            CubicRegime::TwoModThree => "p=2 mod 3",
            CubicRegime::Three => "p=3",
            CubicRegime::Two => "p=2",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicRoot {
    pub value: PadicNumber,
    /// Residue the root was lifted from: the unit digit of the seed (for the
    /// small roots, of the seed after removing `p^{ord q}`).
    pub residue_class: u64,
    /// Lower bound on `ord h(value)`.
    pub residual_ord: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CubicRoots {
    pub roots: Vec<CubicRoot>,
    pub regime: CubicRegime,
    pub newton_polygon: NewtonPolygon,
}

impl CubicRoots {
    pub fn count(&self) -> usize {
        self.roots.len()
    }
}

/// `y^3 - (1+θ+θ^2) y^2 - (2θ+1)(1-θ-q) y - (1-θ-q)^2`.
pub fn fixed_point_cubic(theta: &PadicNumber, q: &PadicNumber) -> Result<Polynomial> {
    let p = theta.prime();
    let prec = theta.rel_precision().unwrap_or(64).max(q.rel_precision().unwrap_or(64));
    let one = PadicNumber::one(p, prec);
    let c = one.try_sub(theta)?.try_sub(q)?;
    let a2 = -one.try_add(theta)?.try_add(&theta.mul(theta))?;
    let a1 = -theta.mul_int(2).try_add(&one)?.mul(&c);
    let a0 = -c.mul(&c);
    Polynomial::new(vec![a0, a1, a2, one])
}

/// Valuations `(ord(θ-1), ord q)` after checking `θ ∈ E_p` and
/// `0 < |θ-1| < |q| < 1`.
pub fn standing_regime(theta: &PadicNumber, q: &PadicNumber) -> Result<(i64, i64)> {
    let p = theta.prime();
    if q.prime() != p {
        return Err(Error::PrimeMismatch(p, q.prime()));
    }
    if !ep_membership(theta)? {
        return Err(Error::OutOfRegime("theta is not in E_p".into()));
    }
    let one = PadicNumber::one(p, theta.rel_precision().unwrap_or(64));
    let b = theta
        .try_sub(&one)
        .map_err(|_| Error::OutOfRegime("theta - 1 is zero at working precision".into()))?
        .valuation()?
        .finite()
        .unwrap();
    let a = q
        .valuation()?
        .finite()
        .ok_or_else(|| Error::OutOfRegime("q = 0".into()))?;
    if a < 1 {
        return Err(Error::OutOfRegime(format!("|q|_p = p^{} is not < 1", -a)));
    }
    if b <= a {
        return Err(Error::OutOfRegime(format!(
            "|theta-1|_p = p^{} is not < |q|_p = p^{}",
            -b, -a
        )));
    }
    Ok((b, a))
}

fn residue_u64(x: &PadicNumber) -> u64 {
    x.leading_digit().map(u64::from).unwrap_or(0)
}

pub fn fixed_point_cubic_roots(theta: &PadicNumber, q: &PadicNumber) -> Result<CubicRoots> {
    let p = theta.prime();
    let (_, a) = standing_regime(theta, q)?;
    let h = fixed_point_cubic(theta, q)?;
    let np = newton_polygon(&h)?;
    let regime = CubicRegime::of_prime(p);
    let w = h.working_abs();
    let mut found: Vec<(PadicNumber, u64)> = Vec::new();
    match regime {
        CubicRegime::OneModThree | CubicRegime::TwoModThree => {
            let seed = PadicNumber::from_i64(p, 3, w);
            found.push((hensel_lift(&h, &seed, 0)?, 3));
        }
        CubicRegime::Two => {
            let seed = PadicNumber::from_i64(p, 1, w);
            found.push((hensel_lift(&h, &seed, 0)?, 1));
        }
        CubicRegime::Three => {
            if a >= 2 {
                let seed = if a >= 3 {
                    3
                } else {
                    let qs = residue_u64(q) as i64;
                    let ybar = (2 * (qs * qs - qs)).rem_euclid(3);
                    3 + 9 * ybar
                };
                let s = PadicNumber::from_i64(p, seed, w);
                found.push((hensel_lift(&h, &s, 2)?, seed as u64));
            }
        }
    }
    // the pair of small roots |y| = |q|: substitute y = p^a t
    if matches!(regime, CubicRegime::OneModThree) {
        let c = PadicNumber::one(p, w).try_sub(theta)?.try_sub(q)?;
        let cs = residue_u64(&c) as i64;
        let scaled = Polynomial::raw(
            h.scale_variable(a)
                .coeffs
                .iter()
                .map(|x| x.shift(-2 * a))
                .collect(),
        );
        for t0 in quadratic_congruence_roots(3, 3 * cs, cs * cs, p) {
            let seed = PadicNumber::from_i64(p, t0 as i64, w);
            let t = hensel_lift(&scaled, &seed, 0)?;
            found.push((t.shift(a), t0 as u64));
        }
    }
    let roots = found
        .into_iter()
        .map(|(value, residue_class)| {
            let residual_ord = h.eval(&value).ord_bound().lower();
            CubicRoot { value, residue_class, residual_ord }
        })
        .collect();
    Ok(CubicRoots { roots, regime, newton_polygon: np })
}

/// Convenience for tests and reports: slope as a float-free string.
pub fn slope_string(s: &Ratio<i64>) -> String {
    if s.is_integer() {
        s.to_integer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::padic::Valuation;

    fn pts(v: &[(usize, i64)]) -> NewtonPolygon {
        newton_polygon_of_points(v)
    }

    #[test]
    fn newton_polygon_examples() {
        let np = pts(&[(0, 2), (1, 2), (2, 1), (3, 0)]);
        assert_eq!(np.segments, vec![Segment { slope: Ratio::new(-2, 3), length: 3 }]);
        let np = pts(&[(0, 4), (1, 3), (2, 1), (3, 0)]);
        assert_eq!(
            np.segments,
            vec![
                Segment { slope: Ratio::new(-3, 2), length: 2 },
                Segment { slope: Ratio::new(-1, 1), length: 1 }
            ]
        );
        let f = Polynomial::from_ints(7, &[-7, 1], 20).unwrap();
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Ratio::new(-1, 1), length: 1 }]);
    }

    #[test]
    fn newton_polygon_skips_zero_coefficients() {
        let f = Polynomial::new(vec![
            PadicNumber::from_i64(5, 25, 10),
            PadicNumber::zero(5),
            PadicNumber::from_i64(5, 1, 10),
        ])
        .unwrap();
        let np = newton_polygon(&f).unwrap();
        assert_eq!(np.segments, vec![Segment { slope: Ratio::new(-1, 1), length: 2 }]);
    }

    #[test]
    fn hensel_square_root_of_two() {
        let f = Polynomial::from_ints(7, &[-2, 0, 1], 30).unwrap();
        let r = hensel_lift(&f, &PadicNumber::from_i64(7, 3, 30), 0).unwrap();
        assert_eq!(r.residue_mod(2).unwrap(), 10u32.into());
        assert!(f.eval(&r).ord_bound().lower() >= 30);
    }

    #[test]
    fn hensel_reports_failed_hypothesis() {
        let f = Polynomial::from_ints(7, &[-2, 0, 1], 30).unwrap();
        let e = hensel_lift(&f, &PadicNumber::from_i64(7, 2, 30), 0).unwrap_err();
        assert!(matches!(e, Error::HenselHypothesisFailed(_)));
    }

    #[test]
    fn quadratic_congruences() {
        assert_eq!(quadratic_congruence_roots(3, 4, 1, 7), vec![2, 6]);
        assert!(minus_three_is_square(7));
        assert!(!minus_three_is_square(5));
        assert!(minus_three_is_square(13));
        assert!(!minus_three_is_square(11));
    }

    #[test]
    fn general_roots_with_multiple_residue() {
        // (x - 1)(x - 1 - 7^3)(x - 7) over Q_7: 1 is a double root mod 7
        let p = 7;
        let a = PadicNumber::from_i64(p, 1, 40);
        let b = PadicNumber::from_i64(p, 1 + 343, 40);
        let c = PadicNumber::from_i64(p, 7, 40);
        let f = product_of_linear(&[a.clone(), b.clone(), c.clone()]);
        let rs = roots(&f).unwrap();
        assert_eq!(rs.len(), 3);
        for target in [&a, &b, &c] {
            assert!(rs.iter().any(|r| r.agrees_to(target, 30).unwrap()));
        }
    }

    #[test]
    fn true_double_root_is_unresolved() {
        let p = 5;
        let a = PadicNumber::from_i64(p, 2, 12);
        let f = product_of_linear(&[a.clone(), a]);
        assert_eq!(roots(&f), Err(Error::MultiplicityUnresolved));
    }

    fn product_of_linear(rs: &[PadicNumber]) -> Polynomial {
        let p = rs[0].prime();
        let mut coeffs = vec![PadicNumber::one(p, 40)];
        for r in rs {
            let mut next = vec![PadicNumber::zero(p); coeffs.len() + 1];
            for (i, c) in coeffs.iter().enumerate() {
                next[i + 1] = next[i + 1].add_approx(c);
                next[i] = next[i].sub_approx(&c.mul(r));
            }
            coeffs = next;
        }
        Polynomial::new(coeffs).unwrap()
    }

    fn q(p: u32, n: i64) -> PadicNumber {
        PadicNumber::from_i64(p, n, 64)
    }

    #[test]
    fn cubic_p7() {
        let roots = fixed_point_cubic_roots(&q(7, 1 + 343), &q(7, 7)).unwrap();
        assert_eq!(roots.count(), 3);
        let y1 = &roots.roots[0].value;
        assert_eq!(y1.valuation().unwrap(), Valuation::Finite(0));
        assert_eq!(y1.residue_mod(2).unwrap(), (3u32 + 6 * 7).into());
        for r in &roots.roots[1..] {
            assert_eq!(r.value.valuation().unwrap(), Valuation::Finite(1));
        }
        assert_eq!(roots.roots[1].residue_class, 2);
        assert_eq!(roots.roots[2].residue_class, 6);
        assert!(roots.roots.iter().all(|r| r.residual_ord >= 58));
    }

    #[test]
    fn cubic_p5_single_root() {
        let roots = fixed_point_cubic_roots(&q(5, 1 + 125), &q(5, 5)).unwrap();
        assert_eq!(roots.count(), 1);
        assert_eq!(roots.regime, CubicRegime::TwoModThree);
    }

    #[test]
    fn cubic_p3() {
        let none = fixed_point_cubic_roots(&q(3, 1 + 9), &q(3, 3)).unwrap();
        assert_eq!(none.count(), 0);
        assert_eq!(none.newton_polygon.segments.len(), 1);
        assert_eq!(none.newton_polygon.segments[0].slope, Ratio::new(-2, 3));
        let one = fixed_point_cubic_roots(&q(3, 1 + 81), &q(3, 9)).unwrap();
        assert_eq!(one.count(), 1);
        let y = &one.roots[0].value;
        assert!(y.diff_ord(&q(3, 3)).at_least(2).unwrap());
        let deep = fixed_point_cubic_roots(&q(3, 1 + 3i64.pow(5)), &q(3, 27)).unwrap();
        assert_eq!(deep.count(), 1);
    }

    #[test]
    fn cubic_p2() {
        let r = fixed_point_cubic_roots(&q(2, 5), &q(2, 2)).unwrap();
        assert_eq!(r.count(), 1);
        assert_eq!(r.roots[0].value.valuation().unwrap(), Valuation::Finite(0));
    }

    #[test]
    fn cubic_rejects_bad_regime() {
        let e = fixed_point_cubic_roots(&q(7, 1 + 7), &q(7, 49)).unwrap_err();
        assert!(matches!(e, Error::OutOfRegime(_)));
    }

    #[test]
    fn specialized_solver_agrees_with_general_search() {
        for (p, th, qq) in [(7u32, 1 + 343, 7), (13, 1 + 169, 13), (5, 1 + 125, 5), (2, 5, 2), (3, 82, 9)] {
            let (t, qv) = (q(p, th), q(p, qq));
            let special = fixed_point_cubic_roots(&t, &qv).unwrap();
            let general = roots(&fixed_point_cubic(&t, &qv).unwrap()).unwrap();
            assert_eq!(special.count(), general.len(), "p = {p}");
            for r in &special.roots {
                assert!(general.iter().any(|g| g.agrees_to(&r.value, 40).unwrap()));
            }
        }
    }
}
