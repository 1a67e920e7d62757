//! Markov partitions of the Julia set for p = 1 mod 3, subshifts of finite
//! type, itinerary coding, the dynamical metric `d_f`, and the sliding-block
//! code onto the full 3-shift.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::padic::{Ball, Norm, OrdBound, PadicNumber, Sphere};
use crate::potts::{MapRegime, PottsBetheMap, Trap};

/// Square 0/1 transition matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncidenceMatrix {
    entries: Vec<Vec<u8>>,
}

impl IncidenceMatrix {
    pub fn new(entries: Vec<Vec<u8>>) -> Result<Self> {
        let n = entries.len();
        if entries.iter().any(|r| r.len() != n || r.iter().any(|&e| e > 1)) {
            return Err(Error::InvalidArgument("incidence matrix must be square 0/1".into()));
        }
        Ok(IncidenceMatrix { entries })
    }

    pub fn full(n: usize) -> Self {
        IncidenceMatrix { entries: vec![vec![1; n]; n] }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.entries[i][j] == 1
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.entries
    }

    pub fn trace(&self) -> usize {
        (0..self.size()).filter(|&i| self.get(i, i)).count()
    }

    /// Every pair of states joined by a path of positive length.
    pub fn is_irreducible(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            let mut seen = vec![false; n];
            let mut stack: Vec<usize> = (0..n).filter(|&j| self.get(i, j)).collect();
            while let Some(j) = stack.pop() {
                if seen[j] {
                    continue;
                }
                seen[j] = true;
                stack.extend((0..n).filter(|&k| self.get(j, k) && !seen[k]));
            }
            seen.iter().all(|&s| s)
        })
    }

    pub fn is_admissible(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.size()) && word.windows(2).all(|w| self.get(w[0], w[1]))
    }

    /// All admissible words of the given length, in lexicographic order.
    pub fn admissible_words(&self, len: usize) -> Vec<Vec<usize>> {
        let mut words: Vec<Vec<usize>> = if len == 0 {
            return vec![Vec::new()];
        } else {
            (0..self.size()).map(|s| vec![s]).collect()
        };
        for _ in 1..len {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().unwrap();
                    (0..self.size()).filter(move |&j| self.get(last, j)).map(move |j| {
                        let mut v = w.clone();
                        v.push(j);
                        v
                    })
                })
                .collect();
        }
        words
    }
}

impl fmt::Display for IncidenceMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.entries {
            let s: Vec<String> = row.iter().map(|e| e.to_string()).collect();
            writeln!(f, "{}", s.join(" "))?;
        }
        Ok(())
    }
}

/// `trace(A^n)`, the number of points of period dividing n.
pub fn count_periodic_points(a: &IncidenceMatrix, n: u32) -> BigUint {
    let size = a.size();
    let base: Vec<Vec<BigUint>> = a
        .rows()
        .iter()
        .map(|r| r.iter().map(|&e| BigUint::from(e)).collect())
        .collect();
    let mul = |x: &Vec<Vec<BigUint>>, y: &Vec<Vec<BigUint>>| -> Vec<Vec<BigUint>> {
        (0..size)
            .map(|i| {
                (0..size)
                    .map(|j| (0..size).fold(BigUint::zero(), |acc, k| acc + &x[i][k] * &y[k][j]))
                    .collect()
            })
            .collect()
    };
    let mut result: Vec<Vec<BigUint>> = (0..size)
        .map(|i| (0..size).map(|j| if i == j { BigUint::one() } else { BigUint::zero() }).collect())
        .collect();
    let mut power = base;
    let mut e = n;
    while e > 0 {
        if e & 1 == 1 {
            result = mul(&result, &power);
        }
        e >>= 1;
        if e > 0 {
            power = mul(&power, &power);
        }
    }
    (0..size).fold(BigUint::zero(), |acc, i| acc + &result[i][i])
}

/// Matrix index of the label in chain order: `D_1 -> 0`, `H_l -> m-l+1`,
/// `C_2 -> m+1`, `C_3 -> m+2`.
pub fn label_to_index(m: usize, label: usize) -> usize {
    if label == 0 || label > m {
        label
    } else {
        m - label + 1
    }
}

pub fn index_to_label(m: usize, index: usize) -> usize {
    label_to_index(m, index)
}

/// The `(m+3) x (m+3)` template in state order `D_1, H_m, ..., H_1, C_2, C_3`.
pub fn a_m_template(m: usize) -> Result<IncidenceMatrix> {
    if m == 0 {
        return Err(Error::InvalidArgument("m must be at least 1".into()));
    }
    let n = m + 3;
    let mut e = vec![vec![0u8; n]; n];
    e[0][0] = 1;
    e[0][1] = 1;
    for i in 1..m {
        e[i][i + 1] = 1;
    }
    e[m][m + 1] = 1;
    e[m][m + 2] = 1;
    e[m + 1] = vec![1; n];
    e[m + 2] = vec![1; n];
    IncidenceMatrix::new(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkovPartition {
    pub balls: Vec<Ball>,
    pub labels: Vec<String>,
    /// `|f(x) - f(y)| = p^{tau_j} |x - y|` on ball j.
    pub tau: Vec<i64>,
    /// `kappa[i][j] = ord(a_i - a_j)`; the diagonal is unused and set to `i64::MAX`.
    pub kappa: Vec<Vec<i64>>,
    /// `None` for the three-ball full-shift partition.
    pub m: Option<usize>,
    branch: Vec<u32>,
}

fn kappa_table(balls: &[Ball]) -> Result<Vec<Vec<i64>>> {
    let n = balls.len();
    let mut k = vec![vec![i64::MAX; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                k[i][j] = match balls[i].center.diff_ord(&balls[j].center) {
                    OrdBound::Exact(v) => v,
                    _ => {
                        return Err(Error::PrecisionExhausted(
                            "partition centers agree at working precision".into(),
                        ))
                    }
                };
            }
        }
    }
    Ok(k)
}

impl MarkovPartition {
    fn assemble(
        map: &PottsBetheMap,
        balls: Vec<Ball>,
        labels: Vec<String>,
        tau: Vec<i64>,
        m: Option<usize>,
    ) -> Result<Self> {
        let kappa = kappa_table(&balls)?;
        let branch = balls
            .iter()
            .map(|b| map.branch_residue(&b.center))
            .collect::<Result<Vec<_>>>()?;
        Ok(MarkovPartition { balls, labels, tau, kappa, m, branch })
    }

    pub fn len(&self) -> usize {
        self.balls.len()
    }

    pub fn is_empty(&self) -> bool {
        self.balls.is_empty()
    }

    /// Inverse-branch label of each ball: the residue of `u` on it.
    pub fn branch_residues(&self) -> &[u32] {
        &self.branch
    }

    pub fn symbol_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Parses a word given as digits (`"0123"`) or comma-separated labels
    /// (`"C2,C3"`).
    pub fn parse_word(&self, s: &str) -> Result<Vec<usize>> {
        let s = s.trim();
        let parts: Vec<&str> = if s.contains(',') {
            s.split(',').map(str::trim).collect()
        } else if s.chars().all(|c| c.is_ascii_digit()) {
            return s
                .chars()
                .map(|c| {
                    let d = c.to_digit(10).unwrap() as usize;
                    if d < self.len() {
                        Ok(d)
                    } else {
                        Err(Error::InadmissibleWord(format!("no symbol {d}")))
                    }
                })
                .collect();
        } else {
            vec![s]
        };
        parts
            .into_iter()
            .map(|l| self.symbol_of(l).ok_or_else(|| Error::InadmissibleWord(format!("unknown label {l}"))))
            .collect()
    }

    /// Weak-repeller condition: all `τ_j >= 0`, at least one positive.
    pub fn is_weak_repeller(&self) -> bool {
        self.tau.iter().all(|&t| t >= 0) && self.tau.iter().any(|&t| t > 0)
    }

    pub fn is_pairwise_disjoint(&self) -> Result<bool> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if !self.balls[i].is_disjoint(&self.balls[j])? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The same partition with a different center for one ball.
    pub fn with_center(&self, i: usize, center: PadicNumber) -> Result<Self> {
        if !self.balls[i].contains(&center)? {
            return Err(Error::InvalidArgument("new center is outside the ball".into()));
        }
        let mut out = self.clone();
        out.balls[i].center = center;
        out.kappa = kappa_table(&out.balls)?;
        Ok(out)
    }
}

impl Trap for MarkovPartition {
    fn locate(&self, x: &PadicNumber) -> Result<Option<usize>> {
        for (i, b) in self.balls.iter().enumerate() {
            if b.contains(x)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    fn label(&self, symbol: usize) -> String {
        self.labels[symbol].clone()
    }
}

pub fn build_markov_partition(map: &PottsBetheMap) -> Result<MarkovPartition> {
    let (a, b) = (map.ord_q(), map.ord_theta_minus_one());
    let r_exp = -(a + b + 1);
    let fp = |i: usize| -> Result<PadicNumber> {
        map.fixed_point(i)
            .cloned()
            .ok_or_else(|| Error::OutOfRegime("fixed points are missing".into()))
    };
    match map.regime() {
        MapRegime::FullShift => {
            let balls = (1..4).map(|i| Ok(Ball::new(fp(i)?, r_exp))).collect::<Result<Vec<_>>>()?;
            let labels = vec!["C1".to_string(), "C2".to_string(), "C3".to_string()];
            MarkovPartition::assemble(map, balls, labels, vec![b - a, a + b, a + b], None)
        }
        MapRegime::Chain(m) => {
            let m = m as usize;
            let c2 = Ball::new(fp(2)?, r_exp);
            let c3 = Ball::new(fp(3)?, r_exp);
            let mut balls = vec![Ball::new(fp(1)?, r_exp)];
            let mut labels = vec!["D1".to_string()];
            for l in (1..=m).rev() {
                balls.push(find_h_ball(map, l as i64, &c2, &c3)?);
                labels.push(format!("H{l}"));
            }
            balls.push(c2);
            balls.push(c3);
            labels.push("C2".into());
            labels.push("C3".into());
            let mut tau = vec![b - a; m + 1];
            tau.extend([a + b, a + b]);
            MarkovPartition::assemble(map, balls, labels, tau, Some(m))
        }
        other => Err(Error::OutOfRegime(format!(
            "no Markov partition in regime {}",
            other.tag()
        ))),
    }
}

/// The unique radius-r ball on `G_l = {|x - x1| = |θ-1|^{l+1}/|q|^l}` whose
/// l-th image covers `C_2 ∪ C_3`.
fn find_h_ball(map: &PottsBetheMap, l: i64, c2: &Ball, c3: &Ball) -> Result<Ball> {
    let (a, b) = (map.ord_q(), map.ord_theta_minus_one());
    let x1 = map.fixed_point(1).unwrap().clone();
    let sphere = Sphere::new(x1, -((l + 1) * b - l * a));
    let candidates = sphere.decompose(-(a + b + 1))?;
    let mut hits = Vec::new();
    'cand: for cand in candidates {
        let mut img = cand.clone();
        for _ in 0..l {
            img = match map.ball_image(&img) {
                Ok(i) => i,
                Err(Error::NotScalingDomain) => continue 'cand,
                Err(e) => return Err(e),
            };
        }
        if img.contains_ball(c2)? && img.contains_ball(c3)? {
            hits.push(cand);
        }
    }
    if hits.len() != 1 {
        return Err(Error::NotMarkov(format!(
            "expected exactly one qualifying ball on G_{l}, found {}",
            hits.len()
        )));
    }
    Ok(hits.pop().unwrap())
}

/// `a_ij = 1` iff ball j lies in the image of ball i.
pub fn incidence_from_dynamics(part: &MarkovPartition, map: &PottsBetheMap) -> Result<IncidenceMatrix> {
    let n = part.len();
    let mut e = vec![vec![0u8; n]; n];
    for i in 0..n {
        let img = map.ball_image(&part.balls[i])?;
        for j in 0..n {
            if img.contains_ball(&part.balls[j])? {
                e[i][j] = 1;
            }
        }
    }
    IncidenceMatrix::new(e)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Itinerary {
    pub symbols: Vec<usize>,
    /// When set, the sequence continues by repeating the last `period` symbols.
    pub period: Option<usize>,
}

impl Itinerary {
    pub fn finite(symbols: Vec<usize>) -> Self {
        Itinerary { symbols, period: None }
    }

    pub fn periodic(word: Vec<usize>) -> Self {
        let n = word.len();
        Itinerary { symbols: word, period: Some(n) }
    }

    /// Symbol at position k, if known.
    pub fn at(&self, k: usize) -> Option<usize> {
        if k < self.symbols.len() {
            return Some(self.symbols[k]);
        }
        let per = self.period?;
        if per == 0 {
            return None;
        }
        let start = self.symbols.len() - per;
        Some(self.symbols[start + (k - start) % per])
    }

    /// Known symbols: everything for finite itineraries, `len` for periodic.
    pub fn horizon(&self) -> usize {
        if self.period.is_some() {
            usize::MAX
        } else {
            self.symbols.len()
        }
    }

    pub fn prefix(&self, n: usize) -> Vec<usize> {
        (0..n).map_while(|k| self.at(k)).collect()
    }

    pub fn render(&self, part: &MarkovPartition) -> String {
        let names: Vec<&str> = self.symbols.iter().map(|&s| part.labels[s].as_str()).collect();
        match self.period {
            Some(p) => format!("({})^inf", names[names.len() - p..].join(",")),
            None => names.join(","),
        }
    }
}

pub fn encode_itinerary(
    map: &PottsBetheMap,
    part: &MarkovPartition,
    x: &PadicNumber,
    n: usize,
) -> Result<Itinerary> {
    let mut y = x.clone();
    let mut symbols = Vec::with_capacity(n);
    for step in 0..n {
        match part.locate(&y)? {
            Some(s) => symbols.push(s),
            None => return Err(Error::EscapesPartition(step)),
        }
        if step + 1 < n {
            y = map.eval(&y)?;
        }
    }
    Ok(Itinerary::finite(symbols))
}

/// Extra digits kept on top of the map precision when building periodic
/// points, so that the direct check of `f^n` survives the expansion.
const GUARD_DIGITS: i64 = 8;

/// The point of period n whose itinerary is `w` repeated, found by iterating
/// the contracting inverse branches and then checked by evaluating `f^n`.
pub fn periodic_point_from_word(
    map: &PottsBetheMap,
    part: &MarkovPartition,
    a: &IncidenceMatrix,
    w: &[usize],
) -> Result<PadicNumber> {
    if w.is_empty() {
        return Err(Error::InadmissibleWord("empty word".into()));
    }
    let mut cyclic = w.to_vec();
    cyclic.push(w[0]);
    if !a.is_admissible(&cyclic) {
        return Err(Error::InadmissibleWord(format!("{w:?} is not a cycle of the subshift")));
    }
    let n = w.len() as i64;
    let base = map.precision();
    let tau_max = part.tau.iter().copied().max().unwrap_or(0);
    let work = base + n * tau_max + GUARD_DIGITS;
    let hi = match map.at_precision(work) {
        Some(m) => m?,
        None => map.clone(),
    };
    let mut x = part.balls[w[0]].center.padded(work);
    let target = base - GUARD_DIGITS;
    let mut settled = false;
    for _ in 0..(work as usize + 16) {
        let mut y = x.clone();
        for &s in w.iter().rev() {
            y = hi.inverse_branch(&y, part.branch[s])?;
        }
        let agree = y.diff_ord(&x);
        x = y;
        match agree {
            OrdBound::Exact(v) if v < work => continue,
            _ => {
                settled = true;
                break;
            }
        }
    }
    if !settled {
        return Err(Error::PrecisionExhausted("inverse branches did not settle".into()));
    }
    let mut y = x.clone();
    for (k, &s) in w.iter().enumerate() {
        if !part.balls[s].contains(&y)? {
            return Err(Error::PrecisionExhausted(format!(
                "step {k} of the reconstructed orbit is outside ball {}",
                part.labels[s]
            )));
        }
        y = hi.eval(&y)?;
    }
    if !y.diff_ord(&x).at_least(target).unwrap_or(false) {
        return Err(Error::PrecisionExhausted(format!(
            "f^{n}(x) - x not certified below p^-{target}"
        )));
    }
    Ok(x)
}

/// `p^{-τ_{x_0} - ... - τ_{x_{n-1}} - κ(x_n, y_n)}` for the first disagreement n.
pub fn df_distance(part: &MarkovPartition, u: &Itinerary, v: &Itinerary) -> Result<Norm> {
    let horizon = u.horizon().min(v.horizon());
    let mut depth = 0i64;
    let limit = if horizon == usize::MAX {
        let lu = u.symbols.len().max(1);
        let lv = v.symbols.len().max(1);
        lu * lv + lu + lv
    } else {
        horizon
    };
    for k in 0..limit {
        let (a, b) = (u.at(k).unwrap(), v.at(k).unwrap());
        if a != b {
            return Ok(Norm::PPower(-(depth + part.kappa[a][b])));
        }
        depth += part.tau[a];
    }
    Err(Error::EqualToHorizon)
}

/// The sliding-block code π_m on an (m+1)-block over {0,1,2}; returns the
/// label in the coding `D_1 -> 0`, `H_l -> l`, `C_2 -> m+1`, `C_3 -> m+2`.
pub fn pi_block_map(m: usize, block: &[u8]) -> Result<usize> {
    if block.len() != m + 1 {
        return Err(Error::BadBlockLength { expected: m + 1, got: block.len() });
    }
    if block.iter().any(|&s| s > 2) {
        return Err(Error::InvalidArgument("block symbols must be 0, 1 or 2".into()));
    }
    let zeros = block.iter().take_while(|&&s| s == 0).count();
    Ok(match (zeros, block[0]) {
        (z, _) if z == m + 1 => 0,
        (0, 1) => m + 1,
        (0, _) => m + 2,
        (z, _) => z,
    })
}

/// Sliding `π_m` along a word of length L, giving L-m labels.
pub fn pi_word(m: usize, word: &[u8]) -> Result<Vec<usize>> {
    if word.len() < m + 1 {
        return Err(Error::BadBlockLength { expected: m + 1, got: word.len() });
    }
    word.windows(m + 1).map(|b| pi_block_map(m, b)).collect()
}

/// One-block inverse of π_m: `D_1, H_l -> 0`, `C_2 -> 1`, `C_3 -> 2`.
pub fn pi_inverse_symbol(m: usize, label: usize) -> u8 {
    if label == m + 1 {
        1
    } else if label == m + 2 {
        2
    } else {
        0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjugacyReport {
    pub m: usize,
    pub length: usize,
    pub words: usize,
    pub distinct_images: usize,
    pub admissible_words: usize,
    pub all_images_admissible: bool,
    pub prefix_recovered: bool,
    pub surjective: bool,
    pub unique_prefix_preimage: bool,
}

impl ConjugacyReport {
    pub fn holds(&self) -> bool {
        self.all_images_admissible && self.prefix_recovered && self.surjective && self.unique_prefix_preimage
    }
}

/// Exhaustive check of π_m on all 3^L words: images are admissible for
/// `A_m`, the image determines the first L-m letters, and every admissible
/// word of length L-m is hit by preimages sharing one prefix.
pub fn check_pi_conjugacy(m: usize, length: usize) -> Result<ConjugacyReport> {
    if length < m + 1 {
        return Err(Error::BadBlockLength { expected: m + 1, got: length });
    }
    let template = a_m_template(m)?;
    let total = 3usize.pow(length as u32);
    let mut prefixes: BTreeMap<Vec<usize>, BTreeSet<Vec<u8>>> = BTreeMap::new();
    let mut all_admissible = true;
    let mut recovered = true;
    let mut word = vec![0u8; length];
    for code in 0..total {
        let mut c = code;
        for s in word.iter_mut().rev() {
            *s = (c % 3) as u8;
            c /= 3;
        }
        let labels = pi_word(m, &word)?;
        let image: Vec<usize> = labels.iter().map(|&l| label_to_index(m, l)).collect();
        all_admissible &= template.is_admissible(&image);
        let prefix = word[..length - m].to_vec();
        let psi: Vec<u8> = labels.iter().map(|&l| pi_inverse_symbol(m, l)).collect();
        recovered &= psi == prefix;
        prefixes.entry(image).or_default().insert(prefix);
    }
    let admissible = template.admissible_words(length - m);
    let surjective = admissible.iter().all(|w| prefixes.contains_key(w));
    let unique = prefixes.values().all(|s| s.len() == 1);
    Ok(ConjugacyReport {
        m,
        length,
        words: total,
        distinct_images: prefixes.len(),
        admissible_words: admissible.len(),
        all_images_admissible: all_admissible,
        prefix_recovered: recovered,
        surjective,
        unique_prefix_preimage: unique,
    })
}
