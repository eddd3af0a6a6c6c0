//! Dyadic cube packing numbers `b_j(Ω)` and the box-packing constant.
//!
//! A level-`j` dyadic cube is counted when its closure lies in the open set
//! `Ω`. Level-`j` cubes are pairwise disjoint, so this count is `b_j(Ω)`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

use crate::blockspace::{floor_pow2, BlockRule, SeqSpec};
use crate::error::{Error, Result};
use crate::params::{int, parse_rational, rat, to_f64, ExtReal, Rational};

pub const DEFAULT_MAX_DEPTH: u32 = 16;
/// Recursion limit for predicate domains; keeps integer coordinates exact.
pub const MAX_DEPTH_LIMIT: u32 = 24;
pub const BJ_RATIO_BOUNDS: (f64, f64) = (1.0 / 64.0, 64.0);
/// `b_hat` within this distance of the declared growth snaps to it.
pub const SNAP_TOLERANCE: f64 = 0.15;

/// `N_i = ⌊2^{i·b}⌋` disjoint open cubes of side `2^{−i}` for `i < gens`.
///
/// Cube `m` (numbered across generations) sits at `2m·e_1 + [0, 2^{−i}]^d`,
/// so consecutive cubes are separated by at least a unit gap.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CubeChain {
    pub d: u32,
    pub b_target: Rational,
    pub gens: u32,
}

impl CubeChain {
    pub fn new(d: u32, b_target: Rational, gens: u32) -> Result<Self> {
        if d == 0 {
            return Err(Error::invalid("dimension must be at least 1"));
        }
        if b_target <= Rational::zero() {
            return Err(Error::invalid(format!(
                "b_target = {b_target} must be positive"
            )));
        }
        Ok(CubeChain { d, b_target, gens })
    }

    pub fn generation_size(&self, i: u32) -> BigUint {
        if i >= self.gens {
            return BigUint::zero();
        }
        floor_pow2(self.b_target * int(i as i128))
    }

    /// `Σ_{i < min(j, gens)} N_i·(2^{j−i} − 2)^d`.
    pub fn count(&self, j: u32) -> BigUint {
        let mut total = BigUint::zero();
        for i in 0..j.min(self.gens) {
            let side = (BigUint::one() << (j - i)) - 2u32;
            total += self.generation_size(i) * side.pow(self.d);
        }
        total
    }

    /// Counts level-`j` cells by listing every cube of the chain and every
    /// grid cell near it; independent of the closed form in [`Self::count`].
    pub fn count_by_enumeration(&self, j: u32) -> Result<u64> {
        if j > 10 {
            return Err(Error::invalid("enumeration is limited to j <= 10"));
        }
        let mut cells: HashSet<Vec<i64>> = HashSet::new();
        let scale = 1i64 << j;
        for cube in self.cubes() {
            if cube.generation >= j {
                continue;
            }
            let side = 1i64 << (j - cube.generation);
            let mut start = vec![0i64; self.d as usize];
            start[0] = cube.offset as i64 * scale;
            let lo: Vec<i64> = start.iter().map(|x| x - 1).collect();
            let mut c = lo.clone();
            // odometer over the box lo + [0, side + 2)^d
            'cells: loop {
                let inside = c
                    .iter()
                    .zip(&start)
                    .all(|(&x, &a)| a < x && x + 1 < a + side);
                if inside {
                    cells.insert(c.clone());
                }
                for axis in 0..c.len() {
                    c[axis] += 1;
                    if c[axis] < lo[axis] + side + 2 {
                        continue 'cells;
                    }
                    c[axis] = lo[axis];
                }
                break;
            }
        }
        Ok(cells.len() as u64)
    }

    /// Every cube of the chain in placement order.
    pub fn cubes(&self) -> impl Iterator<Item = ChainCube> + '_ {
        let mut index = 0u64;
        (0..self.gens).flat_map(move |i| {
            let n = self.generation_size(i).to_u64().unwrap_or(u64::MAX);
            let start = index;
            index = index.saturating_add(n);
            (0..n).map(move |m| ChainCube {
                generation: i,
                offset: 2 * (start + m),
            })
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ChainCube {
    pub generation: u32,
    /// integer position of the cube along the first axis
    pub offset: u64,
}

/// Built-in bounded open sets inside `(0,1)^d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    UnitCube,
    /// open ball of radius 1/2 centred at `(1/2, …, 1/2)`
    Ball,
    /// `{x ∈ (0,1)^d : x_d < x_1^power}`
    AxisGraph {
        power: u32,
    },
}

impl Shape {
    pub fn name(&self) -> &'static str {
        match self {
            Shape::UnitCube => "unit_cube",
            Shape::Ball => "ball",
            Shape::AxisGraph { .. } => "axis_graph",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Cell {
    Inside,
    Outside,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PredicateDomain {
    pub d: u32,
    pub shape: Shape,
    pub max_depth: u32,
}

impl PredicateDomain {
    pub fn new(d: u32, shape: Shape, max_depth: u32) -> Result<Self> {
        if !(1..=4).contains(&d) {
            return Err(Error::invalid(format!(
                "predicate domains support d = 1..4, got {d}"
            )));
        }
        if max_depth > MAX_DEPTH_LIMIT {
            return Err(Error::invalid(format!(
                "max_depth = {max_depth} exceeds {MAX_DEPTH_LIMIT}"
            )));
        }
        if let Shape::AxisGraph { power } = shape {
            if d < 2 {
                return Err(Error::invalid("axis_graph needs d >= 2"));
            }
            if !(1..=4).contains(&power) {
                return Err(Error::invalid(format!(
                    "axis_graph power must be 1..4, got {power}"
                )));
            }
        }
        Ok(PredicateDomain {
            d,
            shape,
            max_depth,
        })
    }

    /// Cell `Π [c_i 2^{−l}, (c_i + 1) 2^{−l}]`, decided exactly in integers.
    fn classify(&self, level: u32, c: &[i128]) -> Cell {
        let s: i128 = 1 << level;
        let in_cube = c.iter().all(|&x| x >= 1 && x + 1 < s);
        match self.shape {
            Shape::UnitCube => {
                if in_cube {
                    Cell::Inside
                } else {
                    Cell::Mixed
                }
            }
            Shape::Ball => {
                // doubled coordinates: centre s, radius s
                let (mut far, mut near) = (0i128, 0i128);
                for &x in c {
                    let (lo, hi) = (2 * x - s, 2 * x + 2 - s);
                    far += lo.abs().max(hi.abs()).pow(2);
                    if lo > 0 || hi < 0 {
                        near += lo.abs().min(hi.abs()).pow(2);
                    }
                }
                if far < s * s {
                    Cell::Inside
                } else if near >= s * s {
                    Cell::Outside
                } else {
                    Cell::Mixed
                }
            }
            Shape::AxisGraph { power } => {
                let n = power;
                let (x1, xd) = (c[0], c[c.len() - 1]);
                let scale = s.pow(n - 1);
                if in_cube && (xd + 1) * scale < x1.pow(n) {
                    Cell::Inside
                } else if xd * scale >= (x1 + 1).pow(n) {
                    Cell::Outside
                } else {
                    Cell::Mixed
                }
            }
        }
    }

    fn count_rec(&self, level: u32, c: &mut Vec<i128>, j: u32) -> u128 {
        match self.classify(level, c) {
            Cell::Inside => 1u128 << (self.d * (j - level)),
            Cell::Outside => 0,
            Cell::Mixed if level == j => 0,
            Cell::Mixed => {
                let parent = c.clone();
                let mut total = 0;
                for mask in 0..(1u32 << self.d) {
                    for (i, x) in c.iter_mut().enumerate() {
                        *x = 2 * parent[i] + ((mask >> i) & 1) as i128;
                    }
                    total += self.count_rec(level + 1, c, j);
                }
                c.copy_from_slice(&parent);
                total
            }
        }
    }

    pub fn count(&self, j: u32) -> Result<BigUint> {
        if j > self.max_depth {
            return Err(Error::DepthExceeded {
                level: j,
                max_depth: self.max_depth,
            });
        }
        let mut c = vec![0i128; self.d as usize];
        Ok(BigUint::from(self.count_rec(0, &mut c, j)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DyadicDomain {
    Chain(CubeChain),
    Predicate(PredicateDomain),
}

impl DyadicDomain {
    pub fn dim(&self) -> u32 {
        match self {
            DyadicDomain::Chain(c) => c.d,
            DyadicDomain::Predicate(p) => p.d,
        }
    }

    /// The growth the construction is meant to exhibit: `b_target` for a
    /// chain, `d` for the (bounded) catalog predicates.
    pub fn declared_b(&self) -> Rational {
        match self {
            DyadicDomain::Chain(c) => c.b_target,
            DyadicDomain::Predicate(p) => int(p.d as i128),
        }
    }

    pub fn count_cubes(&self, j: u32) -> Result<BigUint> {
        match self {
            DyadicDomain::Chain(c) => Ok(c.count(j)),
            DyadicDomain::Predicate(p) => p.count(j),
        }
    }
}

impl fmt::Display for DyadicDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DyadicDomain::Chain(c) => {
                write!(f, "dim={}\nchain b={} gens={}\n", c.d, c.b_target, c.gens)
            }
            DyadicDomain::Predicate(p) => {
                write!(f, "dim={}\npredicate {}", p.d, p.shape.name())?;
                if let Shape::AxisGraph { power } = p.shape {
                    write!(f, " power={power}")?;
                }
                write!(f, "\nmax_depth={}\n", p.max_depth)
            }
        }
    }
}

fn file_err(line: usize, reason: impl Into<String>) -> Error {
    Error::DomainFile {
        line,
        reason: reason.into(),
    }
}

fn parse_num<T: FromStr>(line: usize, key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| file_err(line, format!("{key}: cannot parse {v:?}")))
}

/// Parses the line-oriented domain description (see `docs/domain-format.md`).
pub fn parse_domain(text: &str) -> Result<DyadicDomain> {
    let mut dim: Option<u32> = None;
    let mut body: Option<(usize, Vec<String>)> = None;
    let mut max_depth: Option<(usize, u32)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<String> = content.split_whitespace().map(str::to_owned).collect();
        let head = tokens[0].as_str();
        if let Some(v) = head.strip_prefix("dim=") {
            if dim.is_some() {
                return Err(file_err(line, "dim given twice"));
            }
            if tokens.len() > 1 {
                return Err(file_err(line, "unexpected text after dim"));
            }
            dim = Some(parse_num(line, "dim", v)?);
        } else if let Some(v) = head.strip_prefix("max_depth=") {
            if tokens.len() > 1 {
                return Err(file_err(line, "unexpected text after max_depth"));
            }
            max_depth = Some((line, parse_num(line, "max_depth", v)?));
        } else if head == "chain" || head == "predicate" {
            if dim.is_none() {
                return Err(file_err(line, "dim=<d> must come first"));
            }
            if body.is_some() {
                return Err(file_err(line, "only one chain or predicate line allowed"));
            }
            body = Some((line, tokens));
        } else {
            return Err(file_err(line, format!("unknown directive {head:?}")));
        }
    }
    let d = dim.ok_or_else(|| file_err(0, "missing dim=<d>"))?;
    let (line, tokens) = body.ok_or_else(|| file_err(0, "missing chain or predicate line"))?;
    let domain_err = |e: Error| file_err(line, e.to_string());
    if tokens[0] == "chain" {
        if let Some((l, _)) = max_depth {
            return Err(file_err(l, "max_depth applies only to predicate domains"));
        }
        let (mut b, mut gens) = (None, None);
        for t in &tokens[1..] {
            match t.split_once('=') {
                Some(("b", v)) => {
                    b = Some(parse_rational(v).map_err(|e| file_err(line, e.to_string()))?)
                }
                Some(("gens", v)) => gens = Some(parse_num(line, "gens", v)?),
                _ => return Err(file_err(line, format!("unknown chain field {t:?}"))),
            }
        }
        let b = b.ok_or_else(|| file_err(line, "chain needs b=<rational>"))?;
        let gens = gens.ok_or_else(|| file_err(line, "chain needs gens=<J>"))?;
        return CubeChain::new(d, b, gens)
            .map(DyadicDomain::Chain)
            .map_err(domain_err);
    }
    let name = tokens
        .get(1)
        .ok_or_else(|| file_err(line, "predicate needs a name"))?;
    let mut power = None;
    for t in &tokens[2..] {
        match t.split_once('=') {
            Some(("power", v)) => power = Some(parse_num(line, "power", v)?),
            _ => return Err(file_err(line, format!("unknown predicate field {t:?}"))),
        }
    }
    let shape = match (name.as_str(), power) {
        ("unit_cube", None) => Shape::UnitCube,
        ("ball", None) => Shape::Ball,
        ("axis_graph", Some(power)) => Shape::AxisGraph { power },
        ("axis_graph", None) => return Err(file_err(line, "axis_graph needs power=<n>")),
        ("unit_cube" | "ball", Some(_)) => {
            return Err(file_err(line, format!("{name} takes no power")))
        }
        _ => return Err(file_err(line, format!("unknown predicate {name:?}"))),
    };
    let depth = max_depth.map(|(_, v)| v).unwrap_or(DEFAULT_MAX_DEPTH);
    PredicateDomain::new(d, shape, depth)
        .map(DyadicDomain::Predicate)
        .map_err(domain_err)
}

impl FromStr for DyadicDomain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_domain(s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PackingProfile {
    pub d: u32,
    pub entries: Vec<(u32, BigUint)>,
    pub b_hat: f64,
    pub bj_condition: bool,
    /// min and max of `b_j 2^{−j·b_hat}` over the fit window
    pub ratio_range: (f64, f64),
    /// levels used for the fit
    pub window: (u32, u32),
    pub declared_b: Rational,
}

fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        x.to_f64().unwrap().log2()
    } else {
        let shift = bits - 64;
        (x >> shift).to_f64().unwrap().log2() + shift as f64
    }
}

impl PackingProfile {
    /// `b_j 2^{−j·b}` for every nonzero entry.
    pub fn ratios_at(&self, b: f64) -> Vec<(u32, f64)> {
        self.entries
            .iter()
            .filter(|(_, n)| !n.is_zero())
            .map(|(j, n)| (*j, (log2_big(n) - *j as f64 * b).exp2()))
            .collect()
    }

    pub fn ratio(&self, j: u32) -> Option<f64> {
        self.ratios_at(self.b_hat)
            .into_iter()
            .find(|(i, _)| *i == j)
            .map(|(_, r)| r)
    }

    pub fn log2_count(&self, j: u32) -> Option<f64> {
        self.entries
            .iter()
            .find(|(i, n)| *i == j && !n.is_zero())
            .map(|(_, n)| log2_big(n))
    }
}

pub fn packing_profile(domain: &DyadicDomain, j_max: u32) -> Result<PackingProfile> {
    let j_max = match domain {
        // past the last generation the chain looks bounded
        DyadicDomain::Chain(c) => j_max.min(c.gens),
        DyadicDomain::Predicate(_) => j_max,
    };
    if j_max < 4 {
        return Err(Error::TooFewLevels(format!(
            "j_max = {j_max}, need at least 4"
        )));
    }
    let entries = (0..=j_max)
        .map(|j| Ok((j, domain.count_cubes(j)?)))
        .collect::<Result<Vec<_>>>()?;
    let lo = j_max.div_ceil(2);
    let pts: Vec<(f64, f64)> = entries
        .iter()
        .filter(|(j, n)| *j >= lo && !n.is_zero())
        .map(|(j, n)| (*j as f64, log2_big(n)))
        .collect();
    if pts.len() < 2 {
        return Err(Error::TooFewLevels(format!(
            "{} nonzero counts in levels {lo}..={j_max}",
            pts.len()
        )));
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let b_hat = sxy / sxx;
    let ratios: Vec<f64> = pts.iter().map(|(j, l)| (l - j * b_hat).exp2()).collect();
    let rmin = ratios.iter().copied().fold(f64::INFINITY, f64::min);
    let rmax = ratios.iter().copied().fold(0.0, f64::max);
    Ok(PackingProfile {
        d: domain.dim(),
        entries,
        b_hat,
        bj_condition: rmin >= BJ_RATIO_BOUNDS.0 && rmax <= BJ_RATIO_BOUNDS.1,
        ratio_range: (rmin, rmax),
        window: (lo, j_max),
        declared_b: domain.declared_b(),
    })
}

fn nearest_rational(x: f64, den: i128) -> Rational {
    rat((x * den as f64).round() as i128, den)
}

/// Block data `M_j ≈ c·2^{jb}` matching a measured packing profile.
pub fn blocks_from_domain(
    profile: &PackingProfile,
    delta: Rational,
    (p1, q1): (ExtReal, ExtReal),
    (p2, q2): (ExtReal, ExtReal),
) -> Result<SeqSpec> {
    if !profile.bj_condition {
        return Err(Error::PackingCondition {
            min: profile.ratio_range.0,
            max: profile.ratio_range.1,
        });
    }
    let b = if (profile.b_hat - to_f64(profile.declared_b)).abs() <= SNAP_TOLERANCE {
        profile.declared_b
    } else {
        nearest_rational(profile.b_hat, 64)
    };
    if b < int(profile.d as i128) {
        return Err(Error::PackingBelowDimension {
            b: b.to_string(),
            d: profile.d,
        });
    }
    let bf = to_f64(b);
    let window: Vec<f64> = profile
        .ratios_at(bf)
        .into_iter()
        .filter(|(j, _)| *j >= profile.window.0 && *j <= profile.window.1)
        .map(|(_, r)| r.log2())
        .collect();
    let log_c = window.iter().sum::<f64>() / window.len() as f64;
    let c = nearest_rational(log_c.exp2(), 1024).max(rat(1, 1024));
    SeqSpec::new((p1, q1), (p2, q2), delta, b, BlockRule::Scaled(c))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cube(d: u32) -> DyadicDomain {
        DyadicDomain::Predicate(PredicateDomain::new(d, Shape::UnitCube, 12).unwrap())
    }

    #[test]
    fn unit_cube_closed_form() {
        assert_eq!(cube(2).count_cubes(3).unwrap(), BigUint::from(36u32));
        for d in 1..=3u32 {
            for j in 0..=6u32 {
                let side = (1i64 << j) - 2;
                let expect = side.max(0).pow(d);
                assert_eq!(
                    cube(d).count_cubes(j).unwrap(),
                    BigUint::from(expect as u64)
                );
            }
        }
    }

    #[test]
    fn level_zero_is_empty() {
        for shape in [Shape::UnitCube, Shape::Ball, Shape::AxisGraph { power: 2 }] {
            let p = PredicateDomain::new(2, shape, 8).unwrap();
            assert_eq!(p.count(0).unwrap(), BigUint::zero());
        }
    }

    #[test]
    fn depth_limit() {
        let p = PredicateDomain::new(2, Shape::Ball, 5).unwrap();
        assert_eq!(
            p.count(6),
            Err(Error::DepthExceeded {
                level: 6,
                max_depth: 5
            })
        );
    }

    #[test]
    fn chain_enumeration_agrees() {
        for (d, b, gens) in [(1, int(1), 6), (2, int(3), 6), (2, rat(3, 2), 7)] {
            let c = CubeChain::new(d, b, gens).unwrap();
            for j in 0..=6 {
                assert_eq!(
                    BigUint::from(c.count_by_enumeration(j).unwrap()),
                    c.count(j)
                );
            }
        }
    }

    #[test]
    fn chain_profile_capped_at_generations() {
        let c = DyadicDomain::Chain(CubeChain::new(2, int(3), 1).unwrap());
        assert!(matches!(
            packing_profile(&c, 10),
            Err(Error::TooFewLevels(_))
        ));
    }

    #[test]
    fn chain_closed_form_example() {
        let c = CubeChain::new(2, int(3), 20).unwrap();
        let expect: u64 = (0..5u32)
            .map(|i| (1u64 << (3 * i)) * ((1u64 << (5 - i)) - 2).pow(2))
            .sum();
        assert_eq!(c.count(5), BigUint::from(expect));
    }

    #[test]
    fn ball_counts_small() {
        let p = PredicateDomain::new(2, Shape::Ball, 8).unwrap();
        // j = 1: each quadrant has a corner of the square
        assert_eq!(p.count(1).unwrap(), BigUint::zero());
        // j = 2: only the four central cells, outer corners at distance sqrt(2)/4
        assert_eq!(p.count(2).unwrap(), BigUint::from(4u32));
    }

    #[test]
    fn profiles() {
        let prof = packing_profile(&cube(2), 10).unwrap();
        assert!((prof.b_hat - 2.0).abs() <= 0.1, "{}", prof.b_hat);
        let chain = DyadicDomain::Chain(CubeChain::new(2, int(3), 12).unwrap());
        let prof = packing_profile(&chain, 12).unwrap();
        assert!((prof.b_hat - 3.0).abs() <= 0.1, "{}", prof.b_hat);
        assert!(prof.bj_condition);
        // b_j = (j - 2) 2^j + 2: the log factor fades slowly
        let chain = DyadicDomain::Chain(CubeChain::new(1, int(1), 40).unwrap());
        let prof = packing_profile(&chain, 40).unwrap();
        assert!((prof.b_hat - 1.0).abs() <= 0.1, "{}", prof.b_hat);
        assert!(packing_profile(&chain, 3).is_err());
    }

    #[test]
    fn blocks_snap_to_declared() {
        let e = |s: &str| s.parse::<ExtReal>().unwrap();
        let chain = DyadicDomain::Chain(CubeChain::new(2, int(3), 12).unwrap());
        let prof = packing_profile(&chain, 12).unwrap();
        let s = blocks_from_domain(&prof, int(2), (e("2"), e("2")), (e("2"), e("2"))).unwrap();
        assert_eq!(s.b, int(3));
        let m12 = s.block_size_f64(12);
        let b12 = prof.entries[12].1.to_f64().unwrap();
        assert!((m12 / b12 - 1.0).abs() < 0.5, "{m12} vs {b12}");

        let prof = packing_profile(&cube(2), 10).unwrap();
        let s = blocks_from_domain(&prof, int(2), (e("2"), e("2")), (e("2"), e("2"))).unwrap();
        assert_eq!(s.b, int(2));

        let mut bad = prof.clone();
        bad.bj_condition = false;
        assert!(matches!(
            blocks_from_domain(&bad, int(2), (e("2"), e("2")), (e("2"), e("2"))),
            Err(Error::PackingCondition { .. })
        ));
    }

    #[test]
    fn parse_round_trip() {
        let text = "# chain\ndim=2\nchain b=3 gens=12\n";
        let d = parse_domain(text).unwrap();
        assert_eq!(
            d,
            DyadicDomain::Chain(CubeChain::new(2, int(3), 12).unwrap())
        );
        assert_eq!(parse_domain(&d.to_string()).unwrap(), d);

        let d =
            parse_domain("dim=2\npredicate axis_graph power=2  # parabola\nmax_depth=10").unwrap();
        assert_eq!(parse_domain(&d.to_string()).unwrap(), d);

        for bad in [
            "chain b=3 gens=2",
            "dim=2",
            "dim=2\nchain b=3",
            "dim=2\npredicate blob",
            "dim=2\npredicate ball power=2",
            "dim=2\nchain b=3 gens=4\nmax_depth=3",
            "dim=x\nchain b=1 gens=3",
            "dim=2\nwobble",
        ] {
            assert!(
                matches!(parse_domain(bad), Err(Error::DomainFile { .. })),
                "{bad}"
            );
        }
    }
}
