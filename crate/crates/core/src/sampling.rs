use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::{Complex64, Pair};

pub(crate) const BOUNDARY_TOL: f64 = 1e-10;

pub(crate) fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point of the disk `|z| <= r`.
pub(crate) fn disk_point<R: Rng>(rng: &mut R, r: f64) -> Complex64 {
    let rad = r * rng.random::<f64>().sqrt();
    Complex64::from_polar(rad, std::f64::consts::TAU * rng.random::<f64>())
}

/// Uniform direction on `S^3` as a pair of complex numbers.
pub(crate) fn sphere_direction<R: Rng>(rng: &mut R) -> Pair {
    loop {
        let v: [f64; 4] = [
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        ];
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            return (
                Complex64::new(v[0] / n, v[1] / n),
                Complex64::new(v[2] / n, v[3] / n),
            );
        }
    }
}

pub(crate) fn along(p: Pair, d: Pair, s: f64) -> Pair {
    (p.0 + d.0 * s, p.1 + d.1 * s)
}

/// First zero of `f` along the ray `p + s d`, `s in (0, s_max]`, located to
/// `|f| <= BOUNDARY_TOL` by bisection.
pub(crate) fn ray_root(
    f: &dyn Fn(Pair) -> f64,
    p: Pair,
    d: Pair,
    s_max: f64,
    steps: usize,
) -> Option<Pair> {
    let mut s_prev = 0.0;
    let mut f_prev = f(p);
    let ds = s_max / steps as f64;
    for i in 1..=steps {
        let s = ds * i as f64;
        let fs = f(along(p, d, s));
        if f_prev.is_finite() && fs.is_finite() && (f_prev < 0.0) != (fs < 0.0) {
            let (mut lo, mut hi, mut f_lo) = (s_prev, s, f_prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                let fm = f(along(p, d, mid));
                if !fm.is_finite() {
                    return None;
                }
                if fm.abs() <= BOUNDARY_TOL {
                    return Some(along(p, d, mid));
                }
                if (fm < 0.0) == (f_lo < 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
                if hi - lo <= f64::EPSILON * hi.max(1.0) {
                    break;
                }
            }
            return None;
        }
        s_prev = s;
        f_prev = fs;
    }
    None
}

/// Boundary points of `{f < 0}` found from random rays started in the box
/// `|z| <= rz, |w| <= rw`. Returns the points and the number of failed rays.
pub(crate) fn boundary_points(
    f: &dyn Fn(Pair) -> f64,
    rz: f64,
    rw: f64,
    n: usize,
    seed: u64,
) -> (Vec<Pair>, usize) {
    let mut rng = rng(seed);
    let scale = rz.max(rw);
    let mut pts = Vec::with_capacity(n);
    let mut failed = 0usize;
    let max_rays = 50 * n + 100;
    for _ in 0..max_rays {
        if pts.len() == n {
            break;
        }
        let p = (disk_point(&mut rng, rz), disk_point(&mut rng, rw));
        let d = sphere_direction(&mut rng);
        match ray_root(f, p, d, 2.0 * scale, 400) {
            Some(q) => pts.push(q),
            None => failed += 1,
        }
    }
    (pts, failed)
}
