use std::path::PathBuf;
use std::sync::Arc;

use hopf_core::c64;
use hopf_core::domains::{DomainSpec, LeafRegion, ResidualFn};
use hopf_core::invariants::HopfParams;
use hopf_core::Pair;

/// Whether `actual` equals `tests/golden/<name>`.
#[allow(dead_code)]
pub fn golden_matches(name: &str, actual: &str) -> bool {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    std::fs::read_to_string(path).is_ok_and(|s| s == actual)
}

/// Compares `actual` with `tests/golden/<name>`; `UPDATE_GOLDEN=1` rewrites the file.
#[allow(dead_code)]
pub fn check_golden(name: &str, actual: &str) {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
        return;
    }
    let expected = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("missing golden file {}: {e}", path.display()));
    if expected != actual {
        let first = expected
            .lines()
            .zip(actual.lines())
            .position(|(a, b)| a != b)
            .unwrap_or(expected.lines().count().min(actual.lines().count()));
        panic!(
            "{} differs from the golden file at line {}\nexpected: {:?}\nactual:   {:?}",
            name,
            first + 1,
            expected.lines().nth(first),
            actual.lines().nth(first)
        );
    }
}

use hopf_core::levi::{BoundaryModel, HermitianPoly};
use hopf_core::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A boundary model kept in the `sum Re(a z^j zbar^k)` form it was built from.
#[allow(dead_code)]
pub struct CorpusModel {
    pub label: String,
    pub p0_terms: Vec<(u32, u32, Complex64)>,
    pub p2: f64,
    pub r1: f64,
    pub model: BoundaryModel,
}

#[allow(dead_code)]
impl CorpusModel {
    /// `p0` evaluated from the term list, independently of `HermitianPoly`.
    pub fn p0_direct(&self, z: Complex64) -> f64 {
        self.p0_terms
            .iter()
            .map(|&(j, k, a)| (a * z.powu(j) * z.conj().powu(k)).re)
            .sum()
    }
}

fn coeff(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(
        rng.random_range(0.2..2.0),
        rng.random_range(0.0..std::f64::consts::TAU),
    )
}

/// `Re(c z^k)` for each `k` in `degrees`.
fn harmonic(
    rng: &mut ChaCha8Rng,
    degrees: std::ops::RangeInclusive<u32>,
    terms: &mut Vec<(u32, u32, Complex64)>,
) {
    for k in degrees {
        if rng.random_bool(0.6) {
            terms.push((k, 0, coeff(rng)));
        }
    }
}

/// `|f|^2` for a random holomorphic `f = sum_{j = lo..=hi} f_j z^j` with `f_lo != 0`.
fn modulus_squared(rng: &mut ChaCha8Rng, lo: u32, hi: u32, terms: &mut Vec<(u32, u32, Complex64)>) {
    let mut f: Vec<(u32, Complex64)> = Vec::new();
    for j in lo..=hi {
        if j == lo || rng.random_bool(0.5) {
            f.push((j, coeff(rng)));
        }
    }
    for &(j, fj) in &f {
        terms.push((j, j, Complex64::new(fj.norm_sqr(), 0.0)));
        for &(k, fk) in &f {
            if j > k {
                terms.push((j, k, fj * fk.conj() * 2.0));
            }
        }
    }
}

/// Fifty models `v + p0(z) + p2 u^2` with `p0 = harmonic + |f|^2`, so
/// `p0_zzbar = |f'|^2 >= 0` and the levi-2 inequality holds everywhere. Every
/// branch of the case ladder is represented.
#[allow(dead_code)]
pub fn diamond_corpus() -> Vec<CorpusModel> {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    (0..50)
        .map(|i| {
            let mut t = Vec::new();
            let label = match i % 6 {
                0 => {
                    t.push((1, 0, coeff(&mut rng)));
                    harmonic(&mut rng, 2..=4, &mut t);
                    modulus_squared(&mut rng, 1, 3, &mut t);
                    "gradient"
                }
                1 => {
                    t.push((1, 1, Complex64::new(rng.random_range(0.1..2.0), 0.0)));
                    harmonic(&mut rng, 2..=5, &mut t);
                    modulus_squared(&mut rng, 2, 4, &mut t);
                    "subharmonic"
                }
                2 => {
                    t.push((2, 0, coeff(&mut rng)));
                    harmonic(&mut rng, 3..=6, &mut t);
                    modulus_squared(&mut rng, 2, 4, &mut t);
                    "quadratic"
                }
                3 => {
                    let n = rng.random_range(2..=3u32);
                    t.push((2 * n - 1, 0, coeff(&mut rng)));
                    harmonic(&mut rng, 2 * n..=2 * n + 2, &mut t);
                    modulus_squared(&mut rng, n, n + 2, &mut t);
                    "odd order"
                }
                4 => {
                    let n = rng.random_range(2..=3u32);
                    t.push((2 * n, 0, coeff(&mut rng)));
                    harmonic(&mut rng, 2 * n + 1..=2 * n + 3, &mut t);
                    modulus_squared(&mut rng, n, n + 2, &mut t);
                    "even order, non-radial"
                }
                _ => {
                    let n = rng.random_range(2..=4u32);
                    harmonic(&mut rng, 2 * n + 1..=2 * n + 3, &mut t);
                    modulus_squared(&mut rng, n, n + 2, &mut t);
                    "even order, radial"
                }
            };
            let p2 = if rng.random_bool(0.5) {
                rng.random_range(0.0..2.0)
            } else {
                0.0
            };
            let mut p = vec![HermitianPoly::from_re_terms(&t).unwrap()];
            if p2 > 0.0 {
                p.push(HermitianPoly::zero());
                p.push(HermitianPoly::from_re_terms(&[(0, 0, Complex64::new(p2, 0.0))]).unwrap());
            }
            CorpusModel {
                label: format!("#{i} {label}"),
                p0_terms: t,
                p2,
                r1: rng.random_range(0.05..1.0),
                model: BoundaryModel::new(p).unwrap(),
            }
        })
        .collect()
}

/// One domain of every kind, with parameters it is valid for.
#[allow(dead_code)]
pub fn classification_table() -> Vec<(DomainSpec, HopfParams)> {
    let b2 = || HopfParams::real(2.0, -4.0).unwrap();
    let nem = HopfParams::real(2.0, 4.0).unwrap();
    vec![
        (DomainSpec::level_band(0.5, 2.0).unwrap(), b2()),
        (DomainSpec::sub_level(1.0).unwrap(), b2()),
        (DomainSpec::super_level(1.0).unwrap(), b2()),
        (
            DomainSpec::leaf_family(LeafRegion::Disk {
                center: c64(2.0, 0.0),
                radius: 1.0,
            })
            .unwrap(),
            b2(),
        ),
        (
            DomainSpec::leaf_family(LeafRegion::Annulus {
                inner: 0.0,
                outer: f64::INFINITY,
            })
            .unwrap(),
            b2(),
        ),
        (DomainSpec::nemirovskii(-1.0, 0.0).unwrap(), nem),
        (
            DomainSpec::implicit("ball", |p: Pair| p.0.norm_sqr() + p.1.norm_sqr() - 1.0),
            b2(),
        ),
        (
            DomainSpec::Implicit {
                name: "both tori".into(),
                psi: ResidualFn(Arc::new(|p: Pair| p.0.norm() * p.1.norm() - 1.0)),
                boundary_contains_ta: true,
                boundary_contains_tb: true,
            },
            b2(),
        ),
    ]
}
