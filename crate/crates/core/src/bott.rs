//! Bott index functions, splitting numbers and iteration formulas.
//!
//! A [`BottData`] stores `𝔅: S¹ → ℤ` through its value at 1 and its jumps on
//! the closed upper semicircle `(0, π]`; the lower half follows by
//! conjugation. Angles are measured in units of π.
//!
//! Conventions, with `0 < a₁ < … < a_m ≤ 1` the jump angles:
//!
//! ```text
//! 𝔅(1)                  = b_at_one
//! arc (0, a₁)           : v₀ = b_at_one + S⁺(1)
//! at a_i                : p_i = v_{i-1} - S⁻(a_i)
//! arc (a_i, a_{i+1})    : v_i = p_i + S⁺(a_i)
//! ```
//!
//! At π the two splitting numbers agree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::number::{lcm_all, rat, Interval, Rational, Real};
use crate::sympath::{self, Block, IndexOptions, SymplecticPath};

#[derive(Debug, Clone, PartialEq)]
pub struct BottJump {
    /// Angle in units of π, in `(0, 1]`.
    pub angle: Real,
    pub s_plus: u32,
    pub s_minus: u32,
    /// Geometric multiplicity of `e^{i·angle·π}`.
    pub nu: u32,
}

impl BottJump {
    pub fn new(angle: impl Into<Real>, s_minus: u32, s_plus: u32, nu: u32) -> Self {
        BottJump {
            angle: angle.into(),
            s_plus,
            s_minus,
            nu,
        }
    }

    fn at_pi(&self) -> bool {
        self.angle == Real::from(1)
    }
}

/// Splitting data at the eigenvalue 1, where `S⁺(1) = S⁻(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JumpAtOne {
    pub s: u32,
    pub nu: u32,
}

/// User-supplied local contact homology at degenerate iterates.
///
/// Iterate `k` uses `offsets[(k-1) % period]`; each entry maps a degree
/// offset relative to `μ⁻(γᵏ)` to a rank. Nondegenerate iterates ignore it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalHomology {
    pub period: u32,
    pub offsets: Vec<BTreeMap<i64, u64>>,
}

impl LocalHomology {
    /// The same offsets at every iterate.
    pub fn constant(offsets: BTreeMap<i64, u64>) -> Self {
        LocalHomology {
            period: 1,
            offsets: vec![offsets],
        }
    }

    pub fn single(offset: i64) -> Self {
        Self::constant(BTreeMap::from([(offset, 1)]))
    }

    fn at(&self, k: u64) -> &BTreeMap<i64, u64> {
        &self.offsets[((k - 1) % self.period as u64) as usize]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottData {
    pub dim2n: usize,
    pub b_at_one: i64,
    pub jump_at_one: Option<JumpAtOne>,
    /// Sorted by strictly increasing angle.
    pub jumps: Vec<BottJump>,
    pub elliptic_height: u32,
    pub local_homology: Option<LocalHomology>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EllipticFlags {
    pub elliptic: bool,
    pub hyperbolic: bool,
    pub e: u32,
}

/// `μ⁻(γᵐ) = m·a + Σ 2⌊m θ_i / 2π⌋ + b` at nondegenerate `m`.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationParams {
    pub a: i64,
    pub b: i64,
    /// `θ_i` in units of π.
    pub angles: Vec<Real>,
}

impl IterationParams {
    pub fn index(&self, m: u64) -> Result<i64> {
        let mut v = m as i64 * self.a + self.b;
        for th in &self.angles {
            v += 2 * th.mul_int(m as i64).div(&Real::from(2))?.floor()?;
        }
        Ok(v)
    }
}

fn unit(angle: &Real) -> bool {
    angle == &Real::from(1)
}

impl BottData {
    /// `𝔅 ≡ c` with no spectrum on the circle.
    pub fn constant(dim2n: usize, c: i64) -> Self {
        BottData {
            dim2n,
            b_at_one: c,
            jump_at_one: None,
            jumps: Vec::new(),
            elliptic_height: 0,
            local_homology: None,
        }
    }

    /// Bott data of the rotation path `R(θπt)` in `Sp(2)`, `θ` in units of π.
    pub fn rotation(theta: &Real) -> Result<Self> {
        let half = theta.div(&Real::from(2))?;
        let (w, int) = half.floor_with_int()?;
        if int {
            return Ok(BottData {
                dim2n: 2,
                b_at_one: 2 * w - 1,
                jump_at_one: Some(JumpAtOne { s: 1, nu: 2 }),
                jumps: Vec::new(),
                elliptic_height: 2,
                local_homology: None,
            });
        }
        let phi = theta.sub(&Real::from(2 * w));
        let b_at_one = 2 * w + 1;
        let jump = match phi.cmp_real(&Real::from(1))? {
            Ordering::Less => BottJump::new(phi, 1, 0, 1),
            Ordering::Equal => BottJump::new(Real::from(1), 1, 1, 2),
            Ordering::Greater => BottJump::new(Real::from(2).sub(&phi), 0, 1, 1),
        };
        Ok(BottData {
            dim2n: 2,
            b_at_one,
            jump_at_one: None,
            jumps: vec![jump],
            elliptic_height: 2,
            local_homology: None,
        })
    }

    /// Bott data of an exact block sum.
    pub fn from_blocks(blocks: &[Block]) -> Result<Self> {
        let mut acc: Option<BottData> = None;
        for b in blocks {
            let d = match b {
                Block::Rotation { angle } => Self::rotation(angle)?,
                Block::Hyperbolic { half_turns, .. } => Self::constant(2, *half_turns),
            };
            acc = Some(match acc {
                None => d,
                Some(a) => a.direct_sum(&d)?,
            });
        }
        acc.ok_or_else(|| Error::Structural("empty block sum".into()))
    }

    /// Adds the constant `c` to `𝔅`.
    pub fn shifted(&self, c: i64) -> Self {
        BottData {
            b_at_one: self.b_at_one + c,
            ..self.clone()
        }
    }

    pub fn n(&self) -> usize {
        self.dim2n / 2
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim2n == 0 || !self.dim2n.is_multiple_of(2) {
            return Err(Error::Structural(format!("bad dimension {}", self.dim2n)));
        }
        let mut total = 0u32;
        if let Some(j) = self.jump_at_one {
            if j.nu == 0 || j.s > j.nu {
                return Err(Error::Structural(
                    "splitting at 1 exceeds multiplicity".into(),
                ));
            }
            total += j.nu;
        }
        for (i, j) in self.jumps.iter().enumerate() {
            if j.nu == 0 || j.s_plus > j.nu || j.s_minus > j.nu {
                return Err(Error::Structural(format!(
                    "splitting numbers at {} exceed multiplicity {}",
                    j.angle, j.nu
                )));
            }
            if j.angle.signum()? != Ordering::Greater
                || j.angle.cmp_real(&Real::from(1))? == Ordering::Greater
            {
                return Err(Error::Structural(format!(
                    "jump angle {} outside (0, π]",
                    j.angle
                )));
            }
            if i > 0 && !self.jumps[i - 1].angle.lt(&j.angle)? {
                return Err(Error::Structural(
                    "jump angles must increase strictly".into(),
                ));
            }
            if j.at_pi() {
                if j.s_plus != j.s_minus {
                    return Err(Error::Structural(
                        "splitting numbers at π must agree".into(),
                    ));
                }
                total += j.nu;
            } else {
                total += 2 * j.nu;
            }
        }
        let e = self.elliptic_height;
        if !e.is_multiple_of(2) || e as usize > self.dim2n || total > e {
            return Err(Error::Structural(format!(
                "elliptic height {e} incompatible with dimension {} and multiplicities {total}",
                self.dim2n
            )));
        }
        if let Some(lh) = &self.local_homology {
            if lh.period == 0 || lh.offsets.len() != lh.period as usize {
                return Err(Error::Structural("local homology period mismatch".into()));
            }
        }
        Ok(())
    }

    fn s_one(&self) -> i64 {
        self.jump_at_one.map_or(0, |j| j.s as i64)
    }

    fn nu_one(&self) -> u64 {
        self.jump_at_one.map_or(0, |j| j.nu as u64)
    }

    /// Arc values `v₀..v_m` and point values `p₁..p_m`.
    fn values(&self) -> (Vec<i64>, Vec<i64>) {
        let mut arcs = vec![self.b_at_one + self.s_one()];
        let mut points = Vec::with_capacity(self.jumps.len());
        for j in &self.jumps {
            let p = arcs.last().copied().unwrap_or_default() - j.s_minus as i64;
            points.push(p);
            arcs.push(p + j.s_plus as i64);
        }
        (arcs, points)
    }

    /// `𝔅(π)`.
    fn value_at_pi(&self) -> i64 {
        let (arcs, points) = self.values();
        match self.jumps.last() {
            Some(j) if j.at_pi() => *points.last().unwrap_or(&0),
            _ => *arcs.last().unwrap_or(&0),
        }
    }

    pub fn flags(&self) -> EllipticFlags {
        EllipticFlags {
            elliptic: self.elliptic_height as usize == self.dim2n,
            hyperbolic: self.elliptic_height == 0,
            e: self.elliptic_height,
        }
    }

    /// Data of the inverse path: `𝔅⁻¹(z) = -𝔅(z) - ν(z)`.
    pub fn inverse(&self) -> Self {
        BottData {
            dim2n: self.dim2n,
            b_at_one: -self.b_at_one - self.nu_one() as i64,
            jump_at_one: self.jump_at_one.map(|j| JumpAtOne {
                s: j.nu - j.s,
                nu: j.nu,
            }),
            jumps: self
                .jumps
                .iter()
                .map(|j| BottJump {
                    angle: j.angle.clone(),
                    s_plus: j.nu - j.s_plus,
                    s_minus: j.nu - j.s_minus,
                    nu: j.nu,
                })
                .collect(),
            elliptic_height: self.elliptic_height,
            local_homology: None,
        }
    }

    /// Data of a symplectic sum; splitting numbers and multiplicities add.
    pub fn direct_sum(&self, o: &BottData) -> Result<Self> {
        let mut jumps: Vec<BottJump> = Vec::new();
        let (mut i, mut k) = (0, 0);
        while i < self.jumps.len() || k < o.jumps.len() {
            let ord = match (self.jumps.get(i), o.jumps.get(k)) {
                (Some(a), Some(b)) if a.angle == b.angle => Ordering::Equal,
                (Some(a), Some(b)) => a.angle.cmp_real(&b.angle)?,
                (Some(_), None) => Ordering::Less,
                _ => Ordering::Greater,
            };
            match ord {
                Ordering::Less => {
                    jumps.push(self.jumps[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    jumps.push(o.jumps[k].clone());
                    k += 1;
                }
                Ordering::Equal => {
                    let (a, b) = (&self.jumps[i], &o.jumps[k]);
                    jumps.push(BottJump {
                        angle: a.angle.clone(),
                        s_plus: a.s_plus + b.s_plus,
                        s_minus: a.s_minus + b.s_minus,
                        nu: a.nu + b.nu,
                    });
                    i += 1;
                    k += 1;
                }
            }
        }
        let jump_at_one = match (self.jump_at_one, o.jump_at_one) {
            (None, None) => None,
            (a, b) => {
                let a = a.unwrap_or(JumpAtOne { s: 0, nu: 0 });
                let b = b.unwrap_or(JumpAtOne { s: 0, nu: 0 });
                Some(JumpAtOne {
                    s: a.s + b.s,
                    nu: a.nu + b.nu,
                })
            }
        };
        Ok(BottData {
            dim2n: self.dim2n + o.dim2n,
            b_at_one: self.b_at_one + o.b_at_one,
            jump_at_one,
            jumps,
            elliptic_height: self.elliptic_height + o.elliptic_height,
            local_homology: None,
        })
    }

    /// Least common multiple of the orders of the roots of unity in the
    /// jump set (1 when there are none).
    pub fn root_period(&self) -> u64 {
        lcm_all(self.jumps.iter().filter_map(|j| {
            j.angle
                .exact()
                .map(|a| (a / rat(2, 1)).denom().unsigned_abs() as u64)
        }))
    }

    /// True when some eigenvalue on the circle has irrational angle.
    pub fn has_irrational_angle(&self) -> bool {
        self.jumps.iter().any(|j| !j.angle.is_exact())
    }
}

/// `𝔅(e^{iφπ})` for `φ ∈ [0, 2)`.
pub fn bott_value(d: &BottData, angle: &Real) -> Result<i64> {
    let two = Real::from(2);
    if angle.signum()? == Ordering::Less || angle.cmp_real(&two)? != Ordering::Less {
        return Err(Error::Domain(format!("angle {angle} outside [0, 2π)")));
    }
    if angle == &Real::zero() {
        return Ok(d.b_at_one);
    }
    let a = if angle.cmp_real(&Real::from(1))? == Ordering::Greater {
        two.sub(angle)
    } else {
        angle.clone()
    };
    let mut value = d.b_at_one + d.s_one();
    for j in &d.jumps {
        let ord = if a == j.angle {
            Ordering::Equal
        } else {
            a.cmp_real(&j.angle)?
        };
        match ord {
            Ordering::Less => return Ok(value),
            Ordering::Equal => return Ok(value - j.s_minus as i64),
            Ordering::Greater => value += j.s_plus as i64 - j.s_minus as i64,
        }
    }
    Ok(value)
}

/// `#{j ∈ ℤ : x < j < y}` for `0 ≤ x ≤ y`.
fn integers_between(x: &Real, y: &Real) -> Result<i64> {
    let (fx, _) = x.floor_with_int()?;
    let (fy, yint) = y.floor_with_int()?;
    Ok(((if yint { fy - 1 } else { fy }) - fx).max(0))
}

/// `μ⁻(γᵏ) = Σ_{z^k = 1} 𝔅(z)`, evaluated in closed form.
pub fn iterated_index(d: &BottData, k: u64) -> Result<i64> {
    if k == 0 {
        return Err(Error::Domain("iterate count must be positive".into()));
    }
    let (arcs, points) = d.values();
    let half_k = Real::from(Rational::new(k as i128, 2));
    let mut total = d.b_at_one;
    let mut left = Real::zero();
    for (i, v) in arcs.iter().enumerate() {
        let right = d.jumps.get(i).map_or(Real::from(1), |j| j.angle.clone());
        let n = integers_between(&left.mul(&half_k), &right.mul(&half_k))?;
        total += 2 * v * n;
        left = right;
    }
    for (j, p) in d.jumps.iter().zip(&points) {
        if !j.at_pi() && j.angle.mul(&half_k).is_integer()? {
            total += 2 * p;
        }
    }
    if k.is_multiple_of(2) {
        total += d.value_at_pi();
    }
    Ok(total)
}

/// `ν(γᵏ)`: multiplicities of the jump eigenvalues that are k-th roots of unity.
pub fn iterated_nullity(d: &BottData, k: u64) -> Result<u64> {
    if k == 0 {
        return Err(Error::Domain("iterate count must be positive".into()));
    }
    let half_k = Real::from(Rational::new(k as i128, 2));
    let mut total = d.nu_one();
    for j in &d.jumps {
        if j.at_pi() {
            if k.is_multiple_of(2) {
                total += j.nu as u64;
            }
        } else if j.angle.mul(&half_k).is_integer()? {
            total += 2 * j.nu as u64;
        }
    }
    Ok(total)
}

/// `Δ(γ) = (1/2π)∫ 𝔅`.
pub fn mean_index(d: &BottData) -> Real {
    let (arcs, _) = d.values();
    let mut total = Real::zero();
    let mut left = Real::zero();
    for (i, v) in arcs.iter().enumerate() {
        let right = d.jumps.get(i).map_or(Real::from(1), |j| j.angle.clone());
        total = total.add(&right.sub(&left).mul_int(*v));
        left = right;
    }
    total
}

/// Same parity as the underlying simple orbit.
pub fn good_iterate(d: &BottData, k: u64) -> Result<bool> {
    Ok((iterated_index(d, k)? - d.b_at_one).rem_euclid(2) == 0)
}

pub fn elliptic_flags(d: &BottData) -> EllipticFlags {
    d.flags()
}

/// `μ⁻(γ^{2m-2}) < μ⁻(γ^{2m-1})`.
pub fn index_gap_check(d: &BottData, m: u64) -> Result<bool> {
    if m < 2 {
        return Err(Error::Domain(format!("index gap needs m ≥ 2, got {m}")));
    }
    Ok(iterated_index(d, 2 * m - 2)? < iterated_index(d, 2 * m - 1)?)
}

/// Absolute local homology of `γᵏ`: rank one in degree `μ(γᵏ)` for good
/// nondegenerate iterates, zero for bad ones, user data otherwise.
pub fn local_homology(d: &BottData, k: u64) -> Result<BTreeMap<i64, u64>> {
    let mu = iterated_index(d, k)?;
    if iterated_nullity(d, k)? == 0 {
        return Ok(if good_iterate(d, k)? {
            BTreeMap::from([(mu, 1)])
        } else {
            BTreeMap::new()
        });
    }
    let lh = d
        .local_homology
        .as_ref()
        .ok_or_else(|| Error::DataRequired {
            orbit: String::new(),
            iterate: k,
        })?;
    Ok(lh
        .at(k)
        .iter()
        .filter(|(_, r)| **r > 0)
        .map(|(o, r)| (mu + o, *r))
        .collect())
}

/// Checks that user-supplied local homology lives in
/// `[kΔ-n, kΔ+n] ∩ [μ⁻(γᵏ), μ⁻(γᵏ)+ν(γᵏ)]` for every degenerate iterate up
/// to `max_k`.
pub fn check_local_support(d: &BottData, max_k: u64) -> Result<()> {
    if d.local_homology.is_none() {
        return Ok(());
    }
    let delta = mean_index(d);
    let n = d.n() as i64;
    for k in 1..=max_k {
        let nu = iterated_nullity(d, k)?;
        if nu == 0 {
            continue;
        }
        let mu = iterated_index(d, k)?;
        let centre = delta.mul_int(k as i64);
        for (deg, _) in local_homology(d, k)? {
            let x = Real::from(deg);
            let inside_mu = deg >= mu && deg <= mu + nu as i64;
            let inside_delta = x.cmp_real(&centre.sub(&Real::from(n)))? != Ordering::Less
                && x.cmp_real(&centre.add(&Real::from(n)))? != Ordering::Greater;
            if !inside_mu || !inside_delta {
                return Err(Error::SupportViolation {
                    orbit: String::new(),
                    degree: deg,
                    lo: format!("max({mu}, {}-{n})", centre),
                    hi: format!("min({}, {}+{n})", mu + nu as i64, centre),
                });
            }
        }
    }
    Ok(())
}

/// Elliptic iteration parameters `(a, b, θ)`, verified for `m ≤ 20`.
pub fn nondeg_iteration_params(d: &BottData) -> Result<IterationParams> {
    if d.jump_at_one.is_some() {
        return Err(Error::NotRepresentable(
            "eigenvalue 1 carries a jump".into(),
        ));
    }
    let mut angles = Vec::new();
    for j in &d.jumps {
        if j.at_pi() {
            for _ in 0..j.s_minus {
                angles.push(Real::from(1));
            }
            continue;
        }
        for _ in 0..j.s_minus {
            angles.push(j.angle.clone());
        }
        for _ in 0..j.s_plus {
            angles.push(Real::from(2).sub(&j.angle));
        }
    }
    let params = IterationParams {
        a: d.b_at_one - angles.len() as i64,
        b: angles.len() as i64,
        angles,
    };
    for m in 1..=20u64 {
        if iterated_nullity(d, m)? != 0 {
            continue;
        }
        let expect = iterated_index(d, m)?;
        let got = params.index(m)?;
        if got != expect {
            return Err(Error::NotRepresentable(format!(
                "formula gives {got} at m = {m}, Bott sum gives {expect}"
            )));
        }
    }
    Ok(params)
}

/// Options for [`infer_bott`].
#[derive(Debug, Clone, Copy)]
pub struct InferOptions {
    /// Largest iterate used in the linear system; `None` picks one from the
    /// number of unknowns and the root orders.
    pub max_k: Option<u64>,
    pub index: IndexOptions,
    /// Largest denominator accepted when recognising angles as rational.
    pub max_denominator: i128,
    /// Tolerance for rational recognition of numeric angles.
    pub angle_tol: f64,
}

impl Default for InferOptions {
    fn default() -> Self {
        InferOptions {
            max_k: None,
            index: IndexOptions::default(),
            max_denominator: 64,
            angle_tol: 1e-9,
        }
    }
}

/// One eigenvalue on the closed upper semicircle.
#[derive(Debug, Clone, PartialEq)]
struct Eigen {
    angle: Real,
    nu: u32,
    /// Algebraic multiplicity; bounds `S⁺ + S⁻`.
    alg: u32,
}

struct Spectrum {
    one: Option<(u32, u32)>,
    upper: Vec<Eigen>,
    e: u32,
}

fn exact_spectrum(blocks: &[Block]) -> Result<Spectrum> {
    let mut one: Option<(u32, u32)> = None;
    let mut upper: Vec<Eigen> = Vec::new();
    let mut e = 0;
    for b in blocks {
        let Block::Rotation { angle } = b else {
            continue;
        };
        e += 2;
        let half = angle.div(&Real::from(2))?;
        let (w, int) = half.floor_with_int()?;
        if int {
            let o = one.get_or_insert((0, 0));
            o.0 += 2;
            o.1 += 2;
            continue;
        }
        let phi = angle.sub(&Real::from(2 * w));
        let folded = if phi.cmp_real(&Real::from(1))? == Ordering::Greater {
            Real::from(2).sub(&phi)
        } else {
            phi
        };
        let mult = if unit(&folded) { 2 } else { 1 };
        match upper.iter_mut().find(|x| x.angle == folded) {
            Some(x) => {
                x.nu += mult;
                x.alg += mult;
            }
            None => upper.push(Eigen {
                angle: folded,
                nu: mult,
                alg: mult,
            }),
        }
    }
    sort_eigen(&mut upper)?;
    Ok(Spectrum { one, upper, e })
}

fn sort_eigen(v: &mut [Eigen]) -> Result<()> {
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j].angle.lt(&v[j - 1].angle)? {
            v.swap(j, j - 1);
            j -= 1;
        }
    }
    Ok(())
}

fn recognise(x: f64, opts: &InferOptions) -> Real {
    for q in 1..=opts.max_denominator {
        let p = (x * q as f64).round();
        if (x * q as f64 - p).abs() < opts.angle_tol * q as f64 {
            return Real::from(Rational::new(p as i128, q));
        }
    }
    Real::Approx(Interval::around(x, 10.0 * opts.angle_tol))
}

fn numeric_spectrum(path: &SymplecticPath, opts: &InferOptions) -> Result<Spectrum> {
    use nalgebra::DMatrix;
    use num_complex::Complex64;
    let m = path.end_matrix();
    let n = m.nrows();
    let cm = linalg::to_complex(&m);
    let ev = linalg::eigenvalues(&m);
    let cluster = 1e-6;
    let mut e = 0;
    let mut found: Vec<(f64, u32)> = Vec::new();
    for z in &ev {
        if (z.norm() - 1.0).abs() > cluster {
            continue;
        }
        e += 1;
        let a = z.arg() / std::f64::consts::PI;
        if a < -cluster {
            continue;
        }
        let a = a.max(0.0);
        match found.iter_mut().find(|(b, _)| (a - *b).abs() < cluster) {
            Some(f) => f.1 += 1,
            None => found.push((a, 1)),
        }
    }
    let mut one = None;
    let mut upper = Vec::new();
    for (a, alg) in found {
        let lambda = Complex64::from_polar(1.0, a * std::f64::consts::PI);
        let shifted = &cm - DMatrix::<Complex64>::identity(n, n) * lambda;
        let nu = linalg::complex_kernel_dim(&shifted, path_tol(opts)) as u32;
        let nu = nu.max(1);
        if a < cluster {
            one = Some((nu, alg));
        } else {
            upper.push(Eigen {
                angle: recognise(a.min(1.0), opts),
                nu,
                alg,
            });
        }
    }
    sort_eigen(&mut upper)?;
    Ok(Spectrum { one, upper, e })
}

fn path_tol(opts: &InferOptions) -> f64 {
    opts.index.tol.rank.max(1e-7)
}

/// Unknown layout of the linear system.
#[derive(Debug, Clone, Copy)]
enum Unknown {
    B,
    One,
    Minus(usize),
    Plus(usize),
    Pi(usize),
}

fn assemble(spec: &Spectrum, dim2n: usize, layout: &[Unknown], x: &[i64]) -> BottData {
    let mut d = BottData {
        dim2n,
        b_at_one: 0,
        jump_at_one: spec.one.map(|(nu, _)| JumpAtOne { s: 0, nu }),
        jumps: spec
            .upper
            .iter()
            .map(|e| BottJump::new(e.angle.clone(), 0, 0, e.nu))
            .collect(),
        elliptic_height: spec.e,
        local_homology: None,
    };
    let mut b = 0;
    let mut s_one = 0i64;
    let mut sm = vec![0i64; spec.upper.len()];
    let mut sp = vec![0i64; spec.upper.len()];
    for (u, v) in layout.iter().zip(x) {
        match u {
            Unknown::B => b = *v,
            Unknown::One => s_one = *v,
            Unknown::Minus(i) => sm[*i] = *v,
            Unknown::Plus(i) => sp[*i] = *v,
            Unknown::Pi(i) => {
                sm[*i] = *v;
                sp[*i] = *v;
            }
        }
    }
    d.b_at_one = b;
    if let Some(j) = d.jump_at_one.as_mut() {
        j.s = s_one as u32;
    }
    for (i, j) in d.jumps.iter_mut().enumerate() {
        j.s_minus = sm[i] as u32;
        j.s_plus = sp[i] as u32;
    }
    d
}

/// Linear coefficient of `iterated_index(·, k)` for each unknown.
fn coefficients(
    spec: &Spectrum,
    dim2n: usize,
    layout: &[Unknown],
    k: u64,
) -> Result<Vec<Rational>> {
    // iterated_index is linear in (b, S(1), S±) with no constant term
    let mut out = Vec::with_capacity(layout.len());
    for (idx, _) in layout.iter().enumerate() {
        let mut x = vec![0i64; layout.len()];
        x[idx] = 1;
        let d = assemble(spec, dim2n, layout, &x);
        out.push(Rational::from_integer(iterated_index(&d, k)? as i128));
    }
    Ok(out)
}

/// Infers Bott data of a path from its spectrum at `t = 1` and the exact
/// lower indices of its first iterates.
pub fn infer_bott(path: &SymplecticPath, opts: &InferOptions) -> Result<BottData> {
    let exact = if opts.index.mode == sympath::IndexMode::Auto {
        path.exact_blocks()
    } else {
        None
    };
    let spec = match &exact {
        Some(bs) => exact_spectrum(bs)?,
        None => numeric_spectrum(path, opts)?,
    };
    let mut layout = vec![Unknown::B];
    if spec.one.is_some() {
        layout.push(Unknown::One);
    }
    for (i, e) in spec.upper.iter().enumerate() {
        if unit(&e.angle) {
            layout.push(Unknown::Pi(i));
        } else {
            layout.push(Unknown::Minus(i));
            layout.push(Unknown::Plus(i));
        }
    }
    let root = lcm_all(spec.upper.iter().filter_map(|e| {
        e.angle
            .exact()
            .map(|a| (a / rat(2, 1)).denom().unsigned_abs() as u64)
    }));
    let max_k = opts
        .max_k
        .unwrap_or_else(|| (layout.len() as u64 + 2).max(2 * root + 1));

    let lower = |k: u64| -> Result<i64> {
        let it = sympath::iterate_path(path, k as u32)?;
        Ok(sympath::index_triple_with(&it, &opts.index)?.mu_minus)
    };

    let mut a = RationalMatrix::zeros(max_k as usize, layout.len());
    let mut rhs = Vec::with_capacity(max_k as usize);
    for k in 1..=max_k {
        let row = coefficients(&spec, path.dim2n, &layout, k)?;
        for (c, v) in row.into_iter().enumerate() {
            a[(k as usize - 1, c)] = v;
        }
        rhs.push(Rational::from_integer(lower(k)? as i128));
    }
    let sol = linalg::solve_exact(&a, &rhs)
        .ok_or_else(|| Error::Inference("no Bott data reproduces the iterated indices".into()))?;

    let bound = |u: &Unknown| -> i64 {
        match u {
            Unknown::B => i64::MAX,
            Unknown::One => spec.one.map_or(0, |(nu, alg)| nu.min(alg / 2)) as i64,
            Unknown::Minus(i) | Unknown::Plus(i) => {
                spec.upper[*i].nu.min(spec.upper[*i].alg) as i64
            }
            Unknown::Pi(i) => spec.upper[*i].nu.min(spec.upper[*i].alg / 2) as i64,
        }
    };
    let admissible = |x: &[Rational]| -> Option<Vec<i64>> {
        let mut out = Vec::with_capacity(x.len());
        for (u, v) in layout.iter().zip(x) {
            if !v.is_integer() {
                return None;
            }
            let v = v.to_integer() as i64;
            if !matches!(u, Unknown::B) && (v < 0 || v > bound(u)) {
                return None;
            }
            out.push(v);
        }
        // S⁺ + S⁻ never exceeds the algebraic multiplicity
        for (i, e) in spec.upper.iter().enumerate() {
            let (mut m, mut p) = (0, 0);
            for (u, v) in layout.iter().zip(&out) {
                match u {
                    Unknown::Minus(j) if *j == i => m = *v,
                    Unknown::Plus(j) if *j == i => p = *v,
                    _ => {}
                }
            }
            if m + p > e.alg as i64 {
                return None;
            }
        }
        Some(out)
    };

    let mut solutions: Vec<Vec<i64>> = Vec::new();
    let ranges: Vec<i64> = sol
        .free_columns
        .iter()
        .map(|c| bound(&layout[*c]))
        .collect();
    let combos: i64 = ranges.iter().map(|r| r + 1).product();
    if combos > 1_000_000 {
        return Err(Error::Ambiguity {
            unresolved: sol
                .free_columns
                .iter()
                .map(|c| describe(&spec, &layout[*c]))
                .collect(),
        });
    }
    let mut t = vec![0i64; ranges.len()];
    loop {
        let mut x = sol.particular.clone();
        for (ti, basis) in t.iter().zip(&sol.null_basis) {
            for (xi, bi) in x.iter_mut().zip(basis) {
                *xi += bi * Rational::from_integer(*ti as i128);
            }
        }
        if let Some(v) = admissible(&x) {
            solutions.push(v);
        }
        let mut pos = 0;
        loop {
            if pos == t.len() {
                break;
            }
            t[pos] += 1;
            if t[pos] <= ranges[pos] {
                break;
            }
            t[pos] = 0;
            pos += 1;
        }
        if pos == t.len() {
            break;
        }
    }
    let x = match solutions.len() {
        0 => {
            return Err(Error::Inference(
                "iterated indices admit no admissible splitting numbers".into(),
            ))
        }
        1 => solutions.pop().expect("one solution"),
        _ => {
            let unresolved = layout
                .iter()
                .enumerate()
                .filter(|(i, _)| solutions.iter().any(|s| s[*i] != solutions[0][*i]))
                .map(|(_, u)| describe(&spec, u))
                .collect();
            return Err(Error::Ambiguity { unresolved });
        }
    };
    let d = assemble(&spec, path.dim2n, &layout, &x);
    d.validate()?;
    for k in max_k + 1..=max_k + 5 {
        let got = iterated_index(&d, k)?;
        let want = lower(k)?;
        if got != want {
            return Err(Error::Inference(format!(
                "inferred data predicts μ⁻ = {got} at k = {k}, path gives {want}"
            )));
        }
    }
    Ok(d)
}

fn describe(spec: &Spectrum, u: &Unknown) -> String {
    match u {
        Unknown::B => "b_at_one".into(),
        Unknown::One => "S(1)".into(),
        Unknown::Minus(i) => format!("S-({}π)", spec.upper[*i].angle),
        Unknown::Plus(i) => format!("S+({}π)", spec.upper[*i].angle),
        Unknown::Pi(i) => format!("S({}π)", spec.upper[*i].angle),
    }
}

/// Converts an exact angle `p/q` into the order of `e^{iπp/q}`.
pub fn root_order(angle: &Rational) -> u64 {
    let half = angle / rat(2, 1);
    half.denom().unsigned_abs() as u64
}

impl fmt::Display for BottData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "𝔅(1)={}", self.b_at_one)?;
        if let Some(j) = self.jump_at_one {
            write!(f, " S(1)={}/ν{}", j.s, j.nu)?;
        }
        for j in &self.jumps {
            write!(f, " [{}π: -{} +{} ν{}]", j.angle, j.s_minus, j.s_plus, j.nu)?;
        }
        write!(f, " e={}", self.elliptic_height)
    }
}
