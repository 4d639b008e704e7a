//! Exact fixtures: ellipsoid orbit systems, elementary path blocks and the
//! standard prequantization profiles.

use std::collections::BTreeMap;
use std::str::FromStr;

use crate::bott::{iterated_index, iterated_nullity, BottData, LocalHomology};
use crate::chomology::{Orbit, OrbitCatalog, PrequantProfile};
use crate::error::{Error, Result};
use crate::number::{lcm_all, rat, Real};
use crate::sympath::{cz_lower, end_nullity, iterate_path, Block, IndexOptions, SymplecticPath};

/// Iterates checked against the path oracle when building a fixture.
pub const VERIFY_ITERATES: u32 = 12;

#[derive(Debug, Clone, PartialEq)]
pub struct EllipsoidSpec {
    /// Axis weights `a₁..a_{n+1}`.
    pub aspects: Vec<Real>,
}

impl EllipsoidSpec {
    pub fn new(aspects: Vec<Real>) -> Result<Self> {
        if aspects.is_empty() {
            return Err(Error::Structural(
                "ellipsoid needs at least one aspect".into(),
            ));
        }
        for a in &aspects {
            if a.signum()? != std::cmp::Ordering::Greater {
                return Err(Error::Structural(format!("aspect {a} is not positive")));
            }
        }
        Ok(EllipsoidSpec { aspects })
    }

    pub fn n(&self) -> usize {
        self.aspects.len() - 1
    }
}

#[derive(Debug, Clone)]
pub struct EllipsoidCatalog {
    pub catalog: OrbitCatalog,
    /// Linearized flow along each simple orbit, without the iterate shift.
    pub paths: Vec<SymplecticPath>,
}

/// Sphere profile over `ℂℙⁿ`.
pub fn sphere_profile(n: usize) -> PrequantProfile {
    PrequantProfile {
        name: format!("sphere({n})"),
        n,
        betti: (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect(),
        i_index: 2 * (n as i64 + 1),
        c_b: n as u64 + 1,
    }
}

/// Unit cotangent bundle of `S^{n+1}` over the oriented Grassmannian of
/// 2-planes; `I` has no default here.
pub fn unit_cotangent_sphere_profile(n: usize, i_index: i64) -> PrequantProfile {
    let mut betti: Vec<u64> = (0..=2 * n).map(|i| u64::from(i % 2 == 0)).collect();
    if n.is_multiple_of(2) && n > 0 {
        betti[n] += 1;
    }
    PrequantProfile {
        name: format!("unit-cotangent-sphere({n})"),
        n,
        betti,
        i_index,
        c_b: if n == 1 { 2 } else { n as u64 },
    }
}

/// Number of prime closed geodesics of a Katok-Ziller metric on `S^{n+1}`.
pub fn katok_ziller_orbit_count(n: usize) -> u64 {
    2 * (n as u64 / 2 + 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileName {
    Sphere,
    UnitCotangentSphere,
    KatokZiller,
}

impl FromStr for ProfileName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sphere" => Ok(ProfileName::Sphere),
            "unit-cotangent-sphere" => Ok(ProfileName::UnitCotangentSphere),
            "katok-ziller" => Ok(ProfileName::KatokZiller),
            other => Err(Error::UnknownProfile(other.to_string())),
        }
    }
}

/// Named profile; `I` defaults only for spheres.
pub fn catalog_profile(name: &str, n: usize, i_index: Option<i64>) -> Result<PrequantProfile> {
    if n == 0 {
        return Err(Error::Structural("profile needs n ≥ 1".into()));
    }
    let p = match name.parse::<ProfileName>()? {
        ProfileName::Sphere => {
            let mut p = sphere_profile(n);
            if let Some(i) = i_index {
                p.i_index = i;
            }
            p
        }
        kind => {
            let i = i_index.ok_or_else(|| {
                Error::Precondition(format!("profile {name} needs an explicit I"))
            })?;
            let mut p = unit_cotangent_sphere_profile(n, i);
            if kind == ProfileName::KatokZiller {
                p.name = format!("katok-ziller({n})");
            }
            p
        }
    };
    p.validate()?;
    Ok(p)
}

#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    /// Angle in units of π.
    Rotation(Real),
    Hyperbolic(f64),
    Identity,
}

pub fn block(kind: &BlockKind) -> Result<SymplecticPath> {
    let b = match kind {
        BlockKind::Rotation(a) => Block::rotation(a.clone()),
        BlockKind::Hyperbolic(l) => Block::hyperbolic(*l)?,
        BlockKind::Identity => Block::rotation(0),
    };
    SymplecticPath::blocks(vec![b])
}

/// Orbit systems of `E(a₁..a_{n+1})`. Orbit `j` rotates the transverse
/// planes by `2π a_j / a_i`; every iterate picks up `+2` from the
/// trivialization. Degenerate iterates get the local homology of the
/// perturbation that lengthens later axes.
pub fn ellipsoid_catalog(spec: &EllipsoidSpec) -> Result<EllipsoidCatalog> {
    let n = spec.n();
    if n == 0 {
        return Err(Error::Structural(
            "E(a₁) has no transverse directions".into(),
        ));
    }
    let mut orbits = Vec::new();
    let mut paths = Vec::new();
    let two = Real::from(2);
    for j in 0..=n {
        let angles: Vec<Real> = (0..=n)
            .filter(|i| *i != j)
            .map(|i| spec.aspects[j].div(&spec.aspects[i]).map(|r| r.mul(&two)))
            .collect::<Result<_>>()?;
        let blocks: Vec<Block> = angles.iter().cloned().map(Block::rotation).collect();
        let path = SymplecticPath::blocks(blocks.clone())?;
        let mut data = BottData::from_blocks(&blocks)?.shifted(2);
        // γ_j^k degenerates in plane i exactly when k·a_j/a_i ∈ ℤ
        let period = lcm_all(angles.iter().filter_map(|a| {
            a.exact()
                .map(|r| (r / rat(2, 1)).denom().unsigned_abs() as u64)
        }));
        if !crate::chomology::never_degenerate(&data) {
            data.local_homology = Some(perturbed_homology(spec, j, period)?);
        }
        verify(&format!("γ{}", j + 1), &data, &path)?;
        orbits.push(Orbit {
            name: format!("γ{}", j + 1),
            data,
        });
        paths.push(path);
    }
    Ok(EllipsoidCatalog {
        catalog: OrbitCatalog {
            profile: sphere_profile(n),
            orbits,
            claimed_complete: true,
        },
        paths,
    })
}

fn perturbed_homology(spec: &EllipsoidSpec, j: usize, period: u64) -> Result<LocalHomology> {
    let mut offsets = Vec::new();
    for k in 1..=period {
        let mut below = 0;
        for i in 0..j {
            let x = spec.aspects[j].mul_int(k as i64).div(&spec.aspects[i])?;
            if x.is_exact() && x.is_integer()? {
                below += 1;
            }
        }
        offsets.push(BTreeMap::from([(2 * below, 1)]));
    }
    let lh = LocalHomology {
        period: period as u32,
        offsets,
    };
    Ok(lh)
}

fn verify(name: &str, data: &BottData, path: &SymplecticPath) -> Result<()> {
    let opts = IndexOptions::default();
    for k in 1..=VERIFY_ITERATES {
        let it = iterate_path(path, k)?;
        let lower = cz_lower(&it)? + 2 * k as i64;
        let nu = end_nullity(&it, &opts)? as u64;
        let (mu, nu_d) = (
            iterated_index(data, k as u64)?,
            iterated_nullity(data, k as u64)?,
        );
        if lower != mu || nu != nu_d {
            return Err(Error::Construction(format!(
                "{name} iterate {k}: path gives (μ⁻, ν) = ({lower}, {nu}), Bott data gives ({mu}, {nu_d})"
            )));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chomology::{audit, AuditOptions, Verdict};
    use crate::number::Interval;

    fn e(a: &[i64]) -> EllipsoidCatalog {
        ellipsoid_catalog(&EllipsoidSpec::new(a.iter().map(|x| Real::from(*x)).collect()).unwrap())
            .unwrap()
    }

    #[test]
    fn e12_indices() {
        let c = e(&[1, 2]);
        let g1: Vec<i64> = (1..=5)
            .map(|k| iterated_index(&c.catalog.orbits[0].data, k).unwrap())
            .collect();
        assert_eq!(g1, vec![3, 5, 9, 11, 15]);
        let g2: Vec<i64> = (1..=3)
            .map(|k| iterated_index(&c.catalog.orbits[1].data, k).unwrap())
            .collect();
        assert_eq!(g2, vec![5, 11, 17]);
    }

    #[test]
    fn profiles() {
        let s2 = catalog_profile("sphere", 2, None).unwrap();
        assert_eq!((s2.r_b(), s2.c_b), (3, 3));
        let s1 = catalog_profile("sphere", 1, None).unwrap();
        assert_eq!((s1.i_index, s1.k_minus()), (4, 3));
        for n in 1..6 {
            let u = catalog_profile("unit-cotangent-sphere", n, Some(2 * n as i64 + 4)).unwrap();
            assert_eq!(u.r_b(), 2 * (n as u64 / 2 + 1));
            assert!(u.odd_betti_vanish());
        }
        assert!(matches!(
            catalog_profile("torus", 1, None),
            Err(Error::UnknownProfile(_))
        ));
        assert!(catalog_profile("unit-cotangent-sphere", 2, None).is_err());
    }

    #[test]
    fn blocks() {
        let r = block(&BlockKind::Rotation(Real::from(rat(2, 5)))).unwrap();
        assert_eq!(crate::sympath::cz_index(&r).unwrap(), 1);
        let id = block(&BlockKind::Identity).unwrap();
        assert_eq!(crate::sympath::index_triple(&id).unwrap().nullity, 2);
        assert!(block(&BlockKind::Hyperbolic(1.0)).is_err());
    }

    #[test]
    fn ellipsoid_audits() {
        for a in [
            vec![1, 2],
            vec![2, 3],
            vec![1, 1],
            vec![1, 2, 3],
            vec![1, 1, 1],
        ] {
            let c = e(&a);
            let r = audit(&c.catalog, &AuditOptions::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Consistent, "{a:?}: {:?}", r.steps);
        }
    }

    #[test]
    fn irrational_ellipsoid() {
        let tau = Real::Approx(Interval::around(std::f64::consts::SQRT_2, 1e-15));
        let c = ellipsoid_catalog(&EllipsoidSpec::new(vec![Real::from(1), tau]).unwrap()).unwrap();
        assert!(c.catalog.nondegenerate());
        let r = audit(&c.catalog, &AuditOptions::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Consistent, "{:?}", r.steps);
    }
}
