//! Zero membership in the numerical range `W(M) = { x* M x : |x| = 1 }`.
//!
//! `W(M)` is convex, so `0` lies outside it exactly when some rotation
//! `e^{iθ} M` has a positive definite Hermitian part. The decision scans
//! `θ` on a fixed grid and refines the best angle by golden-section search.
//! A witness is then assembled from boundary points (eigenvectors of the
//! rotated Hermitian parts): any point on the segment between `x* M x` and
//! `y* M y` is attained by a vector in `span{x, y}`, and [`steer`] finds it
//! in closed form.

use std::f64::consts::PI;

use super::{
    check_finite, ensure_square, herm_part, hermitian_eig_unchecked, quadratic_form, ComplexMatrix,
    ComplexVector, ToleranceConfig, C64,
};
use crate::error::Result;

const GRID: usize = 720;
const GOLDEN_STEPS: usize = 80;

#[derive(Clone, Debug)]
pub struct NumRangeVerdict {
    /// `0 ∈ W(M)` up to the feasibility tolerance.
    pub contains: bool,
    /// Unit vector `x`. For [`numrange_contains_zero`] this is present only
    /// when `|x* M x|` is within tolerance; [`numrange_zero_search`] always
    /// returns its best attempt.
    pub witness: Option<ComplexVector>,
    /// `max_θ λ_min(Re(e^{iθ} M))`: positive values are the distance from
    /// `0` to `W(M)`.
    pub support_margin: f64,
}

#[derive(Clone)]
struct Boundary {
    point: C64,
    vector: ComplexVector,
}

fn rotated_min(m: &ComplexMatrix, theta: f64) -> f64 {
    let rot = m * C64::from_polar(1.0, theta);
    hermitian_eig_unchecked(&herm_part(&rot)).min()
}

fn boundary_points(m: &ComplexMatrix, theta: f64, out: &mut Vec<Boundary>) -> f64 {
    let rot = m * C64::from_polar(1.0, theta);
    let eig = hermitian_eig_unchecked(&herm_part(&rot));
    for v in [eig.bottom_vector(), eig.top_vector()] {
        out.push(Boundary {
            point: quadratic_form(m, &v),
            vector: v,
        });
    }
    eig.min()
}

fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..GOLDEN_STEPS {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        }
    }
    if f1 > f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Unit vector `w ∈ span{x, y}` with `w* M w = (1 - s) x*Mx + s y*My`, for
/// unit `x`, `y` and `s ∈ [0, 1]`.
pub(crate) fn steer(
    m: &ComplexMatrix,
    x: &ComplexVector,
    y: &ComplexVector,
    s: f64,
) -> ComplexVector {
    let zx = quadratic_form(m, x);
    let zy = quadratic_form(m, y);
    let d = zy - zx;
    if s <= 0.0 || d.norm() == 0.0 {
        return x.clone();
    }
    if s >= 1.0 {
        return y.clone();
    }
    let target = zx + d * s;
    let n = m.nrows();
    // Normalised so that x*M'x = -s and y*M'y = 1 - s.
    let shifted = (m - ComplexMatrix::identity(n, n) * target) / d;
    let a = x.dotc(&(&shifted * y));
    let b = y.dotc(&(&shifted * x));
    let e = a - b.conj();
    let phase = if e.norm() > 0.0 {
        C64::from_polar(1.0, -e.arg())
    } else {
        C64::new(1.0, 0.0)
    };
    let c = (phase * a + phase.conj() * b).re;
    let r = (-c + (c * c + 4.0 * s * (1.0 - s)).sqrt()) / (2.0 * (1.0 - s));
    let w = x + y * (phase * r);
    let nw = w.norm();
    if nw == 0.0 {
        return x.clone();
    }
    w / C64::new(nw, 0.0)
}

fn angle(z: C64) -> f64 {
    let a = z.arg();
    if a < 0.0 {
        a + 2.0 * PI
    } else {
        a
    }
}

/// Three boundary points whose triangle contains the origin, reduced to a
/// vector through two [`steer`] steps.
fn triangle_witness(m: &ComplexMatrix, pts: &[Boundary], tiny: f64) -> Option<ComplexVector> {
    let mut items: Vec<(f64, &Boundary)> = pts
        .iter()
        .filter(|p| p.point.norm() > tiny)
        .map(|p| (angle(p.point), p))
        .collect();
    if items.len() < 2 {
        return None;
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = items.len();
    let max_gap = (0..n)
        .map(|i| {
            if i + 1 < n {
                items[i + 1].0 - items[i].0
            } else {
                items[0].0 + 2.0 * PI - items[n - 1].0
            }
        })
        .fold(0.0, f64::max);
    if max_gap > PI + 1e-9 {
        return None;
    }
    let a0 = items[0].0;
    let b = (1..n)
        .rev()
        .find(|&i| items[i].0 - a0 < PI - 1e-12)
        .unwrap_or(0);
    let c = b + 1;
    if c >= n {
        return None;
    }
    let (pa, pb, pc) = (items[0].1, items[b].1, items[c].1);
    let opposite = |p: &Boundary, q: &Boundary| {
        let s = p.point.norm() / (p.point.norm() + q.point.norm());
        steer(m, &p.vector, &q.vector, s)
    };
    if (items[c].0 - a0 - PI).abs() < 1e-9 || b == 0 {
        return Some(opposite(pa, pc));
    }
    // Point on [a, b] collinear with 0 and c, on the far side from c.
    let cc = pc.point.conj();
    let denom = (cc * (pb.point - pa.point)).im;
    if denom.abs() < 1e-300 {
        return None;
    }
    let s = (-(cc * pa.point).im / denom).clamp(0.0, 1.0);
    let w4 = steer(m, &pa.vector, &pb.vector, s);
    let z4 = quadratic_form(m, &w4);
    let dz = z4 - pc.point;
    if dz.norm() == 0.0 {
        return None;
    }
    let t = ((dz.conj() * (-pc.point)).re / dz.norm_sqr()).clamp(0.0, 1.0);
    Some(steer(m, &pc.vector, &w4, t))
}

/// Closest point to the origin on segments between angularly adjacent
/// boundary points.
fn edge_witness(m: &ComplexMatrix, pts: &[Boundary]) -> Option<ComplexVector> {
    let mut items: Vec<(f64, &Boundary)> = pts.iter().map(|p| (angle(p.point), p)).collect();
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = items.len();
    if n < 2 {
        return None;
    }
    let mut best: Option<(f64, usize, f64)> = None;
    for i in 0..n {
        let (p, q) = (items[i].1.point, items[(i + 1) % n].1.point);
        let d = q - p;
        let s = if d.norm_sqr() > 0.0 {
            ((d.conj() * (-p)).re / d.norm_sqr()).clamp(0.0, 1.0)
        } else {
            0.0
        };
        let dist = (p + d * s).norm();
        if best.is_none_or(|b| dist < b.0) {
            best = Some((dist, i, s));
        }
    }
    let (_, i, s) = best?;
    Some(steer(
        m,
        &items[i].1.vector,
        &items[(i + 1) % n].1.vector,
        s,
    ))
}

/// Decides `0 ∈ W(M)` and, when it holds, returns a unit witness with
/// `|x* M x| <= feasibility_tol * max(1, ||M||_F)`.
pub fn numrange_contains_zero(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<NumRangeVerdict> {
    let mut v = numrange_zero_search(m, cfg)?;
    let tol = cfg.feasibility_tol * m.norm().max(1.0);
    let good = v
        .witness
        .as_ref()
        .is_some_and(|x| quadratic_form(m, x).norm() <= tol);
    if !(v.contains && good) {
        v.witness = None;
    }
    Ok(v)
}

/// Like [`numrange_contains_zero`] but always returns the unit vector whose
/// `|x* M x|` is the smallest found, even when `0 ∉ W(M)`.
pub fn numrange_zero_search(m: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<NumRangeVerdict> {
    check_finite(m)?;
    ensure_square(m)?;
    let tol = cfg.feasibility_tol * m.norm().max(1.0);

    let mut pts = Vec::with_capacity(2 * GRID + 2);
    let step = 2.0 * PI / GRID as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    for k in 0..GRID {
        let theta = k as f64 * step;
        let f = boundary_points(m, theta, &mut pts);
        if f > best.1 {
            best = (theta, f);
        }
    }
    let (theta_star, f_star) = golden_max(|t| rotated_min(m, t), best.0 - step, best.0 + step);
    let margin = f_star.max(best.1);
    boundary_points(m, theta_star, &mut pts);
    let contains = margin <= tol;

    let score = |x: &ComplexVector| quadratic_form(m, x).norm();
    let mut candidates: Vec<ComplexVector> = Vec::new();
    if let Some(p) = pts
        .iter()
        .min_by(|a, b| a.point.norm().total_cmp(&b.point.norm()))
    {
        candidates.push(p.vector.clone());
    }
    if score(&candidates[0]) > tol {
        if contains {
            if let Some(w) = triangle_witness(m, &pts, tol) {
                candidates.push(w);
            }
        }
        if let Some(w) = edge_witness(m, &pts) {
            candidates.push(w);
        }
    }
    let witness = candidates
        .into_iter()
        .min_by(|a, b| score(a).total_cmp(&score(b)));
    Ok(NumRangeVerdict {
        contains,
        witness,
        support_margin: margin,
    })
}
