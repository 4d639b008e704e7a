//! Symplectic matrices and paths, and the Conley-Zehnder family of indices.
//!
//! Two independent routes compute indices:
//!
//! * **exact**: for paths whose generator is a symplectic sum of rotation
//!   and hyperbolic blocks, indices follow from the rotation numbers of the
//!   blocks in exact rational arithmetic;
//! * **sampled**: for arbitrary paths, the graph of `Γ(t)` is tracked as a
//!   Lagrangian path in `(R^{4n}, -ω ⊕ ω)` relative to the diagonal. With the
//!   unitary frame adapted to the diagonal, the Souriau matrix
//!   `W(t) = C (I + ΓᵀΓ)⁻¹ Cᵀ`, `C = I + Γ + i J0ᵀ(Γ - I)`, has
//!   `arg det W = 2 arg det C`. Unwrapping that phase and reading the
//!   eigenphases of `W(1)` gives the crossing count with the half-weight
//!   endpoint convention, without ever locating the crossings themselves.
//!
//! The lower extension `μ⁻` is realised by the global negative rotation
//! `Γ(t)·exp(-εJ0t)`; `μ⁺ = μ⁻ + ν`.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{self, RationalMatrix};
use crate::number::{Rational, Real};

/// Numerical tolerances used by the sampled route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Allowed entrywise deviation of `MᵀJ0M` from `J0`.
    pub sympl: f64,
    /// Relative singular-value threshold for kernels.
    pub rank: f64,
    /// Smallest time step the adaptive phase tracker may take.
    pub time: f64,
    /// Maximal Frobenius distance between consecutive samples.
    pub step: f64,
    /// Allowed distance of a computed index from the nearest integer.
    pub integrality: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            sympl: 1e-9,
            rank: 1e-8,
            time: 1e-12,
            step: 0.5,
            integrality: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SymplecticMatrix {
    Exact(RationalMatrix),
    Float(DMatrix<f64>),
}

impl SymplecticMatrix {
    pub fn dim(&self) -> usize {
        match self {
            SymplecticMatrix::Exact(m) => m.nrows(),
            SymplecticMatrix::Float(m) => m.nrows(),
        }
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        match self {
            SymplecticMatrix::Exact(m) => m.to_f64(),
            SymplecticMatrix::Float(m) => m.clone(),
        }
    }

    fn check_shape(&self) -> Result<()> {
        let (r, c) = match self {
            SymplecticMatrix::Exact(m) => (m.nrows(), m.ncols()),
            SymplecticMatrix::Float(m) => (m.nrows(), m.ncols()),
        };
        if r != c || r == 0 || r % 2 != 0 {
            return Err(Error::Structural(format!(
                "symplectic matrices are square of even positive size, got {r}x{c}"
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticReport {
    pub ok: bool,
    /// Largest entry of `|MᵀJ0M - J0|`.
    pub max_deviation: Real,
    pub determinant: f64,
}

pub fn validate_symplectic(m: &SymplecticMatrix, tol: &Tolerances) -> Result<SymplecticReport> {
    m.check_shape()?;
    match m {
        SymplecticMatrix::Exact(a) => {
            let j = RationalMatrix::j0(a.nrows());
            let dev = a.transpose().mul(&j).mul(a).sub(&j).max_abs();
            Ok(SymplecticReport {
                ok: dev.is_zero(),
                max_deviation: Real::Exact(dev),
                determinant: a.to_f64().determinant(),
            })
        }
        SymplecticMatrix::Float(a) => {
            let j = linalg::j0(a.nrows());
            let d = a.transpose() * &j * a - &j;
            let dev = d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
            let det = a.determinant();
            Ok(SymplecticReport {
                ok: dev <= tol.sympl && (det - 1.0).abs() <= tol.sympl.sqrt(),
                max_deviation: Real::Approx(crate::number::Interval::around(dev, 0.0)),
                determinant: det,
            })
        }
    }
}

/// `dim ker(M - Id)`: exact rank for rational matrices, singular-value
/// thresholding otherwise.
pub fn nullity(m: &SymplecticMatrix, tol: &Tolerances) -> Result<usize> {
    m.check_shape()?;
    Ok(match m {
        SymplecticMatrix::Exact(a) => {
            let n = a.nrows();
            n - a.sub(&RationalMatrix::identity(n)).rank()
        }
        SymplecticMatrix::Float(a) => {
            let n = a.nrows();
            linalg::kernel_dim(&(a - DMatrix::identity(n, n)), tol.rank)
        }
    })
}

/// A 2×2 building block of a symplectic sum.
#[derive(Debug, Clone, PartialEq)]
pub enum Block {
    /// `R(angle·π·t)`; `angle` is measured in units of π.
    Rotation { angle: Real },
    /// `R(half_turns·π·t) · diag(e^{a t}, e^{-a t})` with `a = log_scale ≠ 0`.
    Hyperbolic { log_scale: f64, half_turns: i64 },
}

impl Block {
    pub fn rotation(angle: impl Into<Real>) -> Self {
        Block::Rotation {
            angle: angle.into(),
        }
    }

    /// Hyperbolic block with end eigenvalues `λ, 1/λ`.
    pub fn hyperbolic(lambda: f64) -> Result<Self> {
        if lambda == 0.0 || lambda.abs() == 1.0 || !lambda.is_finite() {
            return Err(Error::Domain(format!(
                "hyperbolic block needs λ ∉ {{0, ±1}}, got {lambda}"
            )));
        }
        Ok(Block::Hyperbolic {
            log_scale: lambda.abs().ln(),
            half_turns: i64::from(lambda < 0.0),
        })
    }

    pub fn matrix(&self, t: f64) -> DMatrix<f64> {
        match self {
            Block::Rotation { angle } => linalg::rotation2(angle.to_f64() * PI * t),
            Block::Hyperbolic {
                log_scale,
                half_turns,
            } => {
                let d = DMatrix::from_row_slice(
                    2,
                    2,
                    &[(log_scale * t).exp(), 0.0, 0.0, (-log_scale * t).exp()],
                );
                linalg::rotation2(*half_turns as f64 * PI * t) * d
            }
        }
    }

    pub fn iterate(&self, k: u32) -> Self {
        match self {
            Block::Rotation { angle } => Block::Rotation {
                angle: angle.mul_int(k as i64),
            },
            Block::Hyperbolic {
                log_scale,
                half_turns,
            } => Block::Hyperbolic {
                log_scale: log_scale * k as f64,
                half_turns: half_turns * k as i64,
            },
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            Block::Rotation { angle } => Block::Rotation { angle: angle.neg() },
            Block::Hyperbolic {
                log_scale,
                half_turns,
            } => Block::Hyperbolic {
                log_scale: -log_scale,
                half_turns: -half_turns,
            },
        }
    }

    /// Exact `(μ⁻, ν)` of the block path on `[0, 1]`.
    pub fn lower_index(&self) -> Result<(i64, usize)> {
        match self {
            Block::Rotation { angle } => {
                // R(2πx t): 2⌊x⌋+1 off the integers, 2x-1 with a full kernel on them.
                let x = angle.div(&Real::from(2))?;
                let (fl, int) = x.floor_with_int()?;
                Ok(if int {
                    (2 * fl - 1, 2)
                } else {
                    (2 * fl + 1, 0)
                })
            }
            Block::Hyperbolic { half_turns, .. } => Ok((*half_turns, 0)),
        }
    }
}

/// Closed-form description of a path, evaluable at any time.
#[derive(Debug, Clone, PartialEq)]
pub enum Generator {
    /// Symplectic sum of 2×2 blocks.
    Blocks(Vec<Block>),
    /// `exp(J0 A t)` for symmetric `A`.
    ExpSymmetric(DMatrix<f64>),
    DirectSum(Vec<Generator>),
    /// Pointwise product `Γ₁(t)Γ₂(t)⋯`.
    Product(Vec<Generator>),
    /// `t ↦ Γ(kt - j)·Γ(1)^j` on `[j/k, (j+1)/k]`.
    Iterate(Box<Generator>, u32),
    /// Pointwise inverse.
    Inverse(Box<Generator>),
}

impl Generator {
    pub fn rotation_sum(angles: Vec<Real>) -> Self {
        Generator::Blocks(angles.into_iter().map(Block::rotation).collect())
    }

    pub fn dim2n(&self) -> usize {
        match self {
            Generator::Blocks(b) => 2 * b.len(),
            Generator::ExpSymmetric(a) => a.nrows(),
            Generator::DirectSum(gs) => gs.iter().map(Generator::dim2n).sum(),
            Generator::Product(gs) => gs.first().map_or(0, Generator::dim2n),
            Generator::Iterate(g, _) | Generator::Inverse(g) => g.dim2n(),
        }
    }

    pub fn check(&self) -> Result<()> {
        match self {
            Generator::Blocks(b) if b.is_empty() => {
                Err(Error::Structural("empty block sum".into()))
            }
            Generator::Blocks(_) => Ok(()),
            Generator::ExpSymmetric(a) => {
                if a.nrows() != a.ncols() || a.nrows() % 2 != 0 || a.nrows() == 0 {
                    return Err(Error::Structural(
                        "exp_symmetric needs an even square matrix".into(),
                    ));
                }
                if (a - a.transpose()).amax() > 1e-12 {
                    return Err(Error::Structural(
                        "exp_symmetric matrix is not symmetric".into(),
                    ));
                }
                Ok(())
            }
            Generator::DirectSum(gs) => {
                if gs.is_empty() {
                    return Err(Error::Structural("empty direct sum".into()));
                }
                gs.iter().try_for_each(Generator::check)
            }
            Generator::Product(gs) => {
                let Some(first) = gs.first() else {
                    return Err(Error::Structural("empty product".into()));
                };
                if gs.iter().any(|g| g.dim2n() != first.dim2n()) {
                    return Err(Error::Structural(
                        "product factors differ in dimension".into(),
                    ));
                }
                gs.iter().try_for_each(Generator::check)
            }
            Generator::Iterate(g, k) => {
                if *k == 0 {
                    return Err(Error::Domain("iterate count must be positive".into()));
                }
                g.check()
            }
            Generator::Inverse(g) => g.check(),
        }
    }

    pub fn eval(&self, t: f64) -> DMatrix<f64> {
        match self {
            Generator::Blocks(bs) => {
                linalg::block_diag(&bs.iter().map(|b| b.matrix(t)).collect::<Vec<_>>())
            }
            Generator::ExpSymmetric(a) => (linalg::j0(a.nrows()) * a * t).exp(),
            Generator::DirectSum(gs) => {
                linalg::block_diag(&gs.iter().map(|g| g.eval(t)).collect::<Vec<_>>())
            }
            Generator::Product(gs) => {
                let n = self.dim2n();
                gs.iter()
                    .fold(DMatrix::identity(n, n), |acc, g| acc * g.eval(t))
            }
            Generator::Iterate(g, k) => {
                let s = t * *k as f64;
                let j = (s.floor() as i64).clamp(0, *k as i64 - 1) as u32;
                let end = g.eval(1.0);
                let n = end.nrows();
                let mut pow = DMatrix::identity(n, n);
                for _ in 0..j {
                    pow = &pow * &end;
                }
                g.eval(s - j as f64) * pow
            }
            Generator::Inverse(g) => linalg::symplectic_inverse(&g.eval(t)),
        }
    }

    /// Generator of the k-th iterate, simplified where the family is closed
    /// under iteration.
    pub fn iterate(&self, k: u32) -> Generator {
        if k == 1 {
            return self.clone();
        }
        match self {
            Generator::Blocks(bs) => Generator::Blocks(bs.iter().map(|b| b.iterate(k)).collect()),
            Generator::ExpSymmetric(a) => Generator::ExpSymmetric(a * k as f64),
            Generator::DirectSum(gs) => {
                Generator::DirectSum(gs.iter().map(|g| g.iterate(k)).collect())
            }
            Generator::Iterate(g, j) => Generator::Iterate(g.clone(), j * k),
            other => Generator::Iterate(Box::new(other.clone()), k),
        }
    }

    pub fn inverse(&self) -> Generator {
        match self {
            Generator::Blocks(bs) => Generator::Blocks(bs.iter().map(Block::inverse).collect()),
            Generator::ExpSymmetric(a) => Generator::ExpSymmetric(-a),
            Generator::DirectSum(gs) => {
                Generator::DirectSum(gs.iter().map(|g| g.inverse()).collect())
            }
            Generator::Product(gs) => {
                Generator::Product(gs.iter().rev().map(|g| g.inverse()).collect())
            }
            Generator::Inverse(g) => (**g).clone(),
            other => Generator::Inverse(Box::new(other.clone())),
        }
    }

    /// The block decomposition, when the path is exactly a symplectic sum of
    /// rotation / hyperbolic blocks.
    pub fn exact_blocks(&self) -> Option<Vec<Block>> {
        match self {
            Generator::Blocks(b) => Some(b.clone()),
            Generator::DirectSum(gs) => {
                let mut out = Vec::new();
                for g in gs {
                    out.extend(g.exact_blocks()?);
                }
                Some(out)
            }
            Generator::Iterate(g, k) => {
                Some(g.exact_blocks()?.iter().map(|b| b.iterate(*k)).collect())
            }
            Generator::Inverse(g) => Some(g.exact_blocks()?.iter().map(Block::inverse).collect()),
            Generator::Product(gs) => {
                // Rotations in the same planes commute and add.
                let parts: Option<Vec<Vec<Block>>> = gs.iter().map(|g| g.exact_blocks()).collect();
                let parts = parts?;
                let len = parts.first()?.len();
                let mut angles = vec![Real::zero(); len];
                for p in &parts {
                    if p.len() != len {
                        return None;
                    }
                    for (acc, b) in angles.iter_mut().zip(p) {
                        match b {
                            Block::Rotation { angle } => *acc = acc.add(angle),
                            Block::Hyperbolic { .. } => return None,
                        }
                    }
                }
                Some(angles.into_iter().map(Block::rotation).collect())
            }
            Generator::ExpSymmetric(_) => None,
        }
    }
}

/// A path `Γ: [0,1] → Sp(2n)` with `Γ(0) = Id`, given by a generator, by
/// samples, or both.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticPath {
    pub dim2n: usize,
    pub samples: Vec<(f64, DMatrix<f64>)>,
    pub generator: Option<Generator>,
}

impl SymplecticPath {
    pub fn from_generator(g: Generator) -> Result<Self> {
        g.check()?;
        Ok(SymplecticPath {
            dim2n: g.dim2n(),
            samples: Vec::new(),
            generator: Some(g),
        })
    }

    pub fn from_samples(
        dim2n: usize,
        samples: Vec<(f64, DMatrix<f64>)>,
        tol: &Tolerances,
    ) -> Result<Self> {
        let p = SymplecticPath {
            dim2n,
            samples,
            generator: None,
        };
        p.validate(tol)?;
        Ok(p)
    }

    pub fn blocks(blocks: Vec<Block>) -> Result<Self> {
        Self::from_generator(Generator::Blocks(blocks))
    }

    /// Checks the sample invariants: starts at `(0, Id)`, strictly increasing
    /// times ending at 1, symplectic samples, consecutive steps below `τ_step`.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        if self.dim2n == 0 || !self.dim2n.is_multiple_of(2) {
            return Err(Error::Structural(format!(
                "odd or zero dimension {}",
                self.dim2n
            )));
        }
        if let Some(g) = &self.generator {
            g.check()?;
            if g.dim2n() != self.dim2n {
                return Err(Error::Structural("generator dimension mismatch".into()));
            }
        }
        if self.samples.is_empty() {
            return if self.generator.is_some() {
                Ok(())
            } else {
                Err(Error::Structural(
                    "path needs a generator or samples".into(),
                ))
            };
        }
        let (t0, m0) = &self.samples[0];
        let id = DMatrix::<f64>::identity(self.dim2n, self.dim2n);
        if *t0 != 0.0 || (m0 - &id).amax() > tol.sympl {
            return Err(Error::Structural("first sample must be (0, Id)".into()));
        }
        if self.samples.last().map(|s| s.0) != Some(1.0) {
            return Err(Error::Structural("last sample time must be 1".into()));
        }
        for w in self.samples.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Structural(
                    "sample times must increase strictly".into(),
                ));
            }
            if linalg::frobenius_distance(&w[0].1, &w[1].1) >= tol.step {
                return Err(Error::Resolution(format!(
                    "samples at t={} and t={} are too far apart",
                    w[0].0, w[1].0
                )));
            }
        }
        for (t, m) in &self.samples {
            if m.nrows() != self.dim2n || m.ncols() != self.dim2n {
                return Err(Error::Structural(format!(
                    "sample at t={t} has wrong shape"
                )));
            }
            let rep = validate_symplectic(&SymplecticMatrix::Float(m.clone()), tol)?;
            if !rep.ok {
                return Err(Error::Structural(format!(
                    "sample at t={t} is not symplectic"
                )));
            }
        }
        Ok(())
    }

    pub fn end_matrix(&self) -> DMatrix<f64> {
        match &self.generator {
            Some(g) => g.eval(1.0),
            None => self.samples.last().expect("validated path").1.clone(),
        }
    }

    pub fn exact_blocks(&self) -> Option<Vec<Block>> {
        self.generator.as_ref().and_then(Generator::exact_blocks)
    }
}

/// `(μ⁻, μ⁺, ν)` of a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IndexTriple {
    pub mu_minus: i64,
    pub mu_plus: i64,
    pub nullity: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IndexMode {
    /// Exact block arithmetic when available, sampled otherwise.
    #[default]
    Auto,
    /// Always use the sampled phase tracker.
    Sampled,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct IndexOptions {
    pub mode: IndexMode,
    pub tol: Tolerances,
}

impl IndexOptions {
    pub fn sampled() -> Self {
        IndexOptions {
            mode: IndexMode::Sampled,
            tol: Tolerances::default(),
        }
    }
}

/// Nullity of the path endpoint.
pub fn end_nullity(path: &SymplecticPath, opts: &IndexOptions) -> Result<usize> {
    if opts.mode == IndexMode::Auto {
        if let Some(bs) = path.exact_blocks() {
            return bs.iter().map(|b| b.lower_index().map(|x| x.1)).sum();
        }
    }
    nullity(&SymplecticMatrix::Float(path.end_matrix()), &opts.tol)
}

pub fn cz_index(path: &SymplecticPath) -> Result<i64> {
    cz_index_with(path, &IndexOptions::default())
}

pub fn cz_index_with(path: &SymplecticPath, opts: &IndexOptions) -> Result<i64> {
    let t = index_triple_with(path, opts)?;
    if t.nullity > 0 {
        return Err(Error::DegenerateEndpoint { nullity: t.nullity });
    }
    Ok(t.mu_minus)
}

pub fn cz_lower(path: &SymplecticPath) -> Result<i64> {
    Ok(index_triple(path)?.mu_minus)
}

pub fn cz_upper(path: &SymplecticPath) -> Result<i64> {
    Ok(index_triple(path)?.mu_plus)
}

pub fn index_triple(path: &SymplecticPath) -> Result<IndexTriple> {
    index_triple_with(path, &IndexOptions::default())
}

pub fn index_triple_with(path: &SymplecticPath, opts: &IndexOptions) -> Result<IndexTriple> {
    let (mu_minus, nullity) = lower_and_nullity(path, opts)?;
    Ok(IndexTriple {
        mu_minus,
        mu_plus: mu_minus + nullity as i64,
        nullity,
    })
}

/// Robbin-Salamon index as the midpoint `(μ⁻ + μ⁺)/2`.
pub fn rs_index(path: &SymplecticPath) -> Result<Rational> {
    rs_index_with(path, &IndexOptions::default())
}

pub fn rs_index_with(path: &SymplecticPath, opts: &IndexOptions) -> Result<Rational> {
    let t = index_triple_with(path, opts)?;
    Ok(Rational::new((t.mu_minus + t.mu_plus) as i128, 2))
}

/// Robbin-Salamon index from the unperturbed Lagrangian crossing count,
/// with half weights at the endpoints. Used to cross-check the midpoint
/// convention.
pub fn rs_crossing_index(path: &SymplecticPath, tol: &Tolerances) -> Result<f64> {
    let theta = phase_winding(path, 0.0, tol)?;
    let (corr, _) = endpoint_correction(&path.end_matrix(), tol);
    Ok(theta / (2.0 * PI) + corr)
}

/// Pointwise inverse path.
pub fn invert_path(path: &SymplecticPath) -> SymplecticPath {
    SymplecticPath {
        dim2n: path.dim2n,
        samples: path
            .samples
            .iter()
            .map(|(t, m)| (*t, linalg::symplectic_inverse(m)))
            .collect(),
        generator: path.generator.as_ref().map(Generator::inverse),
    }
}

/// The k-th iterate `t ↦ Γ(kt - j)·Γ(1)^j` on `[j/k, (j+1)/k]`.
pub fn iterate_path(path: &SymplecticPath, k: u32) -> Result<SymplecticPath> {
    if k == 0 {
        return Err(Error::Domain("iterate count must be positive".into()));
    }
    if k == 1 {
        return Ok(path.clone());
    }
    let mut samples = Vec::new();
    if !path.samples.is_empty() {
        let end = path.samples.last().expect("non-empty").1.clone();
        let n = path.dim2n;
        let mut pow = DMatrix::<f64>::identity(n, n);
        for j in 0..k {
            for (i, (t, m)) in path.samples.iter().enumerate() {
                if j > 0 && i == 0 {
                    continue;
                }
                let time = if j + 1 == k && i + 1 == path.samples.len() {
                    1.0
                } else {
                    (j as f64 + t) / k as f64
                };
                samples.push((time, m * &pow));
            }
            pow = &pow * &end;
        }
    }
    Ok(SymplecticPath {
        dim2n: path.dim2n,
        samples,
        generator: path.generator.as_ref().map(|g| g.iterate(k)),
    })
}

fn lower_and_nullity(path: &SymplecticPath, opts: &IndexOptions) -> Result<(i64, usize)> {
    if opts.mode == IndexMode::Auto {
        if let Some(bs) = path.exact_blocks() {
            let mut mu = 0;
            let mut nu = 0;
            for b in &bs {
                let (m, v) = b.lower_index()?;
                mu += m;
                nu += v;
            }
            return Ok((mu, nu));
        }
        // Indices are additive over symplectic sums.
        if let Some(Generator::DirectSum(gs)) = &path.generator {
            let mut mu = 0;
            let mut nu = 0;
            for g in gs {
                let (m, v) = lower_and_nullity(&SymplecticPath::from_generator(g.clone())?, opts)?;
                mu += m;
                nu += v;
            }
            return Ok((mu, nu));
        }
    }
    sampled_lower(path, &opts.tol)
}

fn sampled_lower(path: &SymplecticPath, tol: &Tolerances) -> Result<(i64, usize)> {
    let end = path.end_matrix();
    let nu = nullity(&SymplecticMatrix::Float(end.clone()), tol)?;
    let eps = if nu == 0 {
        0.0
    } else {
        perturbation_size(&end, tol)
    };
    let theta = phase_winding(path, eps, tol)?;
    let pert_end = if eps > 0.0 {
        &end * linalg::uniform_rotation(path.dim2n, -eps)
    } else {
        end
    };
    let (corr, zeros) = endpoint_correction(&pert_end, tol);
    if zeros > 0 {
        return Err(Error::Resolution(
            "perturbed endpoint is still degenerate".into(),
        ));
    }
    let value = theta / (2.0 * PI) + corr;
    let rounded = value.round();
    if (value - rounded).abs() > tol.integrality {
        return Err(Error::Resolution(format!(
            "crossing count {value} is not an integer; sampling too coarse"
        )));
    }
    Ok((rounded as i64, nu))
}

/// Rotation size for the lower-extension perturbation: below half of the
/// smallest nonzero eigenphase of the endpoint.
fn perturbation_size(end: &DMatrix<f64>, tol: &Tolerances) -> f64 {
    let mut eps: f64 = 1e-3;
    for z in linalg::eigenvalues(end) {
        let phase = z.arg().abs();
        let off_one = (z - Complex64::new(1.0, 0.0)).norm();
        if off_one > tol.rank.sqrt() {
            eps = eps.min(0.5 * phase.max(off_one));
        }
    }
    eps
}

/// `C(M) = I + M + i J0ᵀ(M - I)`.
fn frame_matrix(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    let n = m.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let re = &id + m;
    let im = linalg::j0(n).transpose() * (m - &id);
    DMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]))
}

fn frame_det(m: &DMatrix<f64>) -> Complex64 {
    frame_matrix(m).determinant()
}

/// `Σ_j (1/2 - ψ_j/2π)` over eigenphases `ψ_j ∈ (0, 2π)` of `W(M)`, plus the
/// number of eigenvalues at 1. The graph frame `[I; M]` is orthonormalised
/// first, so `W = (AQ)(AQ)ᵀ` needs no inverse of `I + MᵀM`.
fn endpoint_correction(m: &DMatrix<f64>, tol: &Tolerances) -> (f64, usize) {
    let n = m.nrows();
    let mut z = DMatrix::<f64>::zeros(2 * n, n);
    z.view_mut((0, 0), (n, n)).fill_with_identity();
    z.view_mut((n, 0), (n, n)).copy_from(m);
    let q = z.qr().q();
    let jt = linalg::j0(n).transpose();
    let (top, bottom) = (q.rows(0, n), q.rows(n, n));
    let re = top + bottom;
    let im = &jt * (bottom - top);
    let aq = DMatrix::from_fn(n, n, |i, j| Complex64::new(re[(i, j)], im[(i, j)]));
    let w = &aq * aq.transpose();
    let mut corr = 0.0;
    let mut zeros = 0;
    for z in linalg::complex_eigenvalues(&w) {
        let z = z / z.norm();
        if (z - Complex64::new(1.0, 0.0)).norm() <= tol.rank.sqrt() {
            zeros += 1;
            continue;
        }
        let mut psi = z.arg();
        if psi < 0.0 {
            psi += 2.0 * PI;
        }
        corr += 0.5 - psi / (2.0 * PI);
    }
    (corr, zeros)
}

/// Lifted total phase `Θ = 2 Δ arg det C(t)` of the (optionally perturbed)
/// path. Generator paths are refined adaptively; sampled paths must already
/// be fine enough.
fn phase_winding(path: &SymplecticPath, eps: f64, tol: &Tolerances) -> Result<f64> {
    let n = path.dim2n;
    let perturb = |t: f64, m: DMatrix<f64>| {
        if eps > 0.0 {
            m * linalg::uniform_rotation(n, -eps * t)
        } else {
            m
        }
    };
    let total = if let Some(g) = &path.generator {
        let f = |t: f64| frame_det(&perturb(t, g.eval(t)));
        let pieces = 64;
        let mut acc = 0.0;
        let mut t0 = 0.0;
        let mut d0 = f(0.0);
        for i in 1..=pieces {
            let t1 = i as f64 / pieces as f64;
            let d1 = f(t1);
            acc += refine(&f, t0, d0, t1, d1, tol, 0)?;
            t0 = t1;
            d0 = d1;
        }
        acc
    } else {
        let mut acc = 0.0;
        let mut prev: Option<Complex64> = None;
        for (t, m) in &path.samples {
            let d = frame_det(&perturb(*t, m.clone()));
            if let Some(p) = prev {
                let step = (d / p).arg();
                if step.abs() >= PI / 2.0 {
                    return Err(Error::Resolution(format!(
                        "phase jumps by {step:.3} rad before t={t}; refine the samples"
                    )));
                }
                acc += step;
            }
            prev = Some(d);
        }
        acc
    };
    Ok(2.0 * total)
}

fn refine<F: Fn(f64) -> Complex64>(
    f: &F,
    t0: f64,
    d0: Complex64,
    t1: f64,
    d1: Complex64,
    tol: &Tolerances,
    depth: u32,
) -> Result<f64> {
    const MAX_STEP: f64 = 0.5;
    let whole = (d1 / d0).arg();
    let tm = 0.5 * (t0 + t1);
    let dm = f(tm);
    let a = (dm / d0).arg();
    let b = (d1 / dm).arg();
    if a.abs() < MAX_STEP && b.abs() < MAX_STEP && (a + b - whole).abs() < 1e-9 {
        return Ok(a + b);
    }
    if t1 - t0 < tol.time || depth > 48 {
        return Err(Error::Resolution(format!(
            "phase tracker failed to resolve near t={tm}"
        )));
    }
    Ok(refine(f, t0, d0, tm, dm, tol, depth + 1)? + refine(f, tm, dm, t1, d1, tol, depth + 1)?)
}
