//! Operator-norm distance from `A` to a unital `*`-subalgebra `B`.
//!
//! Two independent computations bracket `dist(A, B)²`:
//!
//! - the primal: minimise `||A - B||` over `B ∈ B`, which gives an upper
//!   bound and the minimiser `B₀`;
//! - the dual: the variance functional
//!   `V(P) = tr(A*AP) - tr(C(AP)* C(AP) C(P)⁺)` is a lower bound for every
//!   density `P`, with equality at a maximiser.
//!
//! `V(P) = min_B tr((A - B)*(A - B) P)`, attained at `B(P) = C(AP) C(P)⁺`,
//! which is why it never exceeds `dist²`. Its gradient in `P` is
//! `(A - B(P))*(A - B(P))`. All evaluation happens in the block frame
//! `V* A V`, where `C` is a pinching.
//!
//! The reported gap `dist² - V(P)` certifies both sides at once.

use rand::Rng;

use crate::algebras::AlgebraSpec;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numkit::{
    check_finite, ensure_shape, ensure_square, herm_part, hermitian_eig_unchecked, identity,
    numrange_zero_search, operator_norm, pinv_from_eig, quadratic_form, top_singular_subspace_rel,
    trace, ComplexMatrix, ComplexVector, ToleranceConfig, C64,
};
use crate::ortho::{dual_solve, find_certificate, line_search, Compressed};
use crate::sample;
use crate::spaces::SubspaceBasis;

/// Cluster widths used when extracting a dual density from a near-optimal
/// `A₀`, whose top singular values are equal only up to solver accuracy.
const CLUSTER_SWEEP: [f64; 6] = [1e-8, 1e-6, 1e-4, 1e-3, 1e-2, 5e-2];
const DENSITY_TOL: f64 = 1e-8;
const PRIMAL_STARTS: usize = 4;
const ASCENT_ITERS: usize = 1500;
const GOLDEN_STEPS: usize = 70;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PhaseIterations {
    pub primal: usize,
    pub certificate: usize,
    pub ascent: usize,
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    pub dist: f64,
    /// Minimiser `B₀ ∈ B`.
    pub b0: ComplexMatrix,
    /// `A - B₀`.
    pub a0: ComplexMatrix,
    /// Density matrix at which the variance was evaluated.
    pub p: ComplexMatrix,
    pub variance: f64,
    /// `dist² - variance`.
    pub gap: f64,
    pub gap_tol: f64,
    /// `|gap| <= gap_tol`.
    pub certified: bool,
    pub iterations: PhaseIterations,
}

#[derive(Clone, Debug)]
pub struct PrimalResult {
    pub dist: f64,
    pub b0: ComplexMatrix,
    pub iterations: usize,
}

#[derive(Clone, Debug)]
pub struct VarianceMax {
    pub p: ComplexMatrix,
    pub value: f64,
    pub iterations: usize,
}

fn check_density(p: &ComplexMatrix) -> Result<()> {
    check_finite(p)?;
    let defect = (p - p.adjoint()).norm();
    if defect > DENSITY_TOL {
        return Err(Error::input(format!(
            "density matrix is not Hermitian (defect {defect:.3e})"
        )));
    }
    let ph = herm_part(p);
    let min = hermitian_eig_unchecked(&ph).min();
    if min < -DENSITY_TOL {
        return Err(Error::input(format!(
            "density matrix has negative eigenvalue {min:.3e}"
        )));
    }
    let tr = trace(&ph).re;
    if (tr - 1.0).abs() > DENSITY_TOL {
        return Err(Error::input(format!("density matrix has trace {tr}")));
    }
    Ok(())
}

fn check_inputs(a: &ComplexMatrix, alg: &AlgebraSpec) -> Result<()> {
    check_finite(a)?;
    ensure_shape(a, alg.ambient_n())
}

/// `A` and the algebra in the block frame.
struct Frame<'a> {
    alg: &'a AlgebraSpec,
    a: ComplexMatrix,
    ata: ComplexMatrix,
    rank_rel_tol: f64,
}

struct Evaluation {
    value: f64,
    /// `(A - B(P))*(A - B(P))`.
    gradient: ComplexMatrix,
}

impl<'a> Frame<'a> {
    fn new(a: &ComplexMatrix, alg: &'a AlgebraSpec, cfg: &ToleranceConfig) -> Self {
        let at = alg.to_frame(a);
        Self {
            alg,
            ata: at.adjoint() * &at,
            a: at,
            rank_rel_tol: cfg.rank_rel_tol,
        }
    }

    fn project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        self.alg.frame_project(x)
    }

    /// `B(P) = C(AP) C(P)⁺`.
    fn best_response(&self, p: &ComplexMatrix) -> ComplexMatrix {
        let cap = self.project(&(&self.a * p));
        let eig = hermitian_eig_unchecked(&herm_part(&self.project(p)));
        let scale = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        cap * pinv_from_eig(&eig, self.rank_rel_tol * scale)
    }

    fn value(&self, p: &ComplexMatrix) -> Result<f64> {
        let cap = self.project(&(&self.a * p));
        let eig = hermitian_eig_unchecked(&herm_part(&self.project(p)));
        let scale = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cutoff = self.rank_rel_tol * scale;
        // tr(C(AP)* C(AP) C(P)⁺) summed over eigenpairs, real by construction.
        let explained: f64 = eig
            .values
            .iter()
            .enumerate()
            .filter(|&(_, &l)| l > cutoff)
            .map(|(j, &l)| (&cap * eig.vectors.column(j)).norm_squared() / l)
            .sum();
        let v = (&self.ata * p).trace() - C64::new(explained, 0.0);
        let allowed = 1e-10 * (1.0 + self.ata.trace().re);
        if v.im.abs() > allowed {
            return Err(Error::Numeric(format!(
                "variance functional has imaginary part {:.3e}",
                v.im
            )));
        }
        Ok(v.re)
    }

    /// Projector onto the range of `C(P)` kept by the pseudoinverse cutoff,
    /// or `None` when nothing is cut. Evaluating the functional just inside
    /// the cutoff overstates it (the functional is only upper
    /// semicontinuous at singular `C(P)`), so optimisers snap `P` onto this
    /// range before trusting a value.
    fn kept_range(&self, p: &ComplexMatrix) -> Option<ComplexMatrix> {
        let eig = hermitian_eig_unchecked(&herm_part(&self.project(p)));
        let scale = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let cutoff = self.rank_rel_tol * scale;
        if eig.values.iter().all(|&l| l > cutoff) {
            return None;
        }
        let n = p.nrows();
        let mut proj = ComplexMatrix::zeros(n, n);
        for (j, &l) in eig.values.iter().enumerate() {
            if l > cutoff {
                let v = eig.vectors.column(j);
                proj += v * v.adjoint();
            }
        }
        Some(proj)
    }

    /// `ΠPΠ / tr(ΠPΠ)` for the kept-range projector `Π`.
    fn snap(&self, p: &ComplexMatrix) -> ComplexMatrix {
        match self.kept_range(p) {
            None => p.clone(),
            Some(proj) => {
                let q = herm_part(&(&proj * p * &proj));
                let t = q.trace().re;
                q.unscale(t)
            }
        }
    }

    fn evaluate(&self, p: &ComplexMatrix) -> Result<Evaluation> {
        let r = &self.a - self.best_response(p);
        Ok(Evaluation {
            value: self.value(p)?,
            gradient: herm_part(&(r.adjoint() * r)),
        })
    }
}

/// Variance functional `tr(A*AP) - tr(C(AP)* C(AP) C(P)⁺)`, a lower bound
/// on `dist(A, B)²` for every density `P`.
pub fn variance_functional(
    a: &ComplexMatrix,
    p: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    check_inputs(a, alg)?;
    ensure_shape(p, alg.ambient_n())?;
    check_density(p)?;
    let frame = Frame::new(a, alg, cfg);
    frame.value(&alg.to_frame(&herm_part(p)))
}

/// `tr(A*AP) - |tr(AP)|²`.
pub fn variance_ci(a: &ComplexMatrix, p: &ComplexMatrix) -> Result<f64> {
    check_finite(a)?;
    ensure_shape(p, ensure_square(a)?)?;
    check_density(p)?;
    let p = herm_part(p);
    let second = (a.adjoint() * a * &p).trace().re;
    Ok(second - (a * &p).trace().norm_sqr())
}

fn density_from(y: &ComplexMatrix) -> ComplexMatrix {
    let s = y.norm_squared();
    herm_part(&(y * y.adjoint())).unscale(s)
}

/// Square-root factor of a density, used to warm-start the ascent.
fn factor(p: &ComplexMatrix) -> ComplexMatrix {
    let eig = hermitian_eig_unchecked(&herm_part(p));
    let n = p.nrows();
    let mut y = ComplexMatrix::zeros(n, n);
    for (j, &l) in eig.values.iter().enumerate() {
        if l > 0.0 {
            y.set_column(j, &(eig.vectors.column(j) * C64::new(l.sqrt(), 0.0)));
        }
    }
    y
}

/// Armijo gradient ascent on `V(YY*/tr(YY*))`.
fn ascend(
    frame: &Frame,
    y0: ComplexMatrix,
    iters: usize,
    tol: f64,
) -> Result<(ComplexMatrix, f64, usize)> {
    let mut y = y0.unscale(y0.norm());
    if let Some(proj) = frame.kept_range(&density_from(&y)) {
        y = proj * y;
        y = y.unscale(y.norm());
    }
    let mut p = density_from(&y);
    let mut ev = frame.evaluate(&p)?;
    let mut step = 1.0 / (1.0 + operator_norm(&ev.gradient)?);
    let mut done = 0;
    for it in 1..=iters {
        done = it;
        let g = &ev.gradient;
        let tgp = (g * &p).trace().re;
        let z = (g * &y - &y * C64::new(tgp, 0.0)).scale(2.0);
        let zn2 = z.norm_squared();
        if zn2.sqrt() <= tol {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let mut y_new = &y + z.scale(step);
            if let Some(proj) = frame.kept_range(&density_from(&y_new)) {
                y_new = proj * y_new;
            }
            let y_new = y_new.unscale(y_new.norm());
            let p_new = density_from(&y_new);
            let v_new = frame.value(&p_new)?;
            if v_new >= ev.value + 1e-4 * step * zn2 {
                y = y_new;
                p = p_new;
                ev = frame.evaluate(&p)?;
                step *= 2.0;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    Ok((p, ev.value, done))
}

fn random_factor<R: Rng + ?Sized>(n: usize, width: usize, rng: &mut R) -> ComplexMatrix {
    sample::gaussian(n, width, rng)
}

fn maximize_in_frame(
    frame: &Frame,
    cfg: &ToleranceConfig,
    candidates: &[ComplexMatrix],
    random_starts: bool,
) -> Result<VarianceMax> {
    let n = frame.a.nrows();
    let mut starts: Vec<ComplexMatrix> = candidates.iter().map(factor).collect();
    if random_starts {
        let mut rng = sample::rng(cfg.seed);
        for width in 1..=n {
            for _ in 0..2 {
                starts.push(random_factor(n, width, &mut rng));
            }
        }
    }
    if starts.is_empty() {
        starts.push(identity(n));
    }
    let iters = cfg.max_iter.min(ASCENT_ITERS);
    let tol = cfg.solver_tol * 1e-3;
    let runs = Exec::default().map_slice(&starts, |y| ascend(frame, y.clone(), iters, tol));
    let mut best: Option<VarianceMax> = None;
    let mut iterations = 0;
    for r in runs {
        let (p, value, its) = r?;
        iterations += its;
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(VarianceMax {
                p,
                value,
                iterations: 0,
            });
        }
    }
    let mut best = best.expect("at least one start");
    best.iterations = iterations;
    Ok(best)
}

/// Heuristic maximisation of the variance functional: gradient ascent over
/// `P = YY*/tr(YY*)` from seeded random starts of every width `1..=n` and
/// from the dual densities produced alongside the primal solve. The value
/// is always a valid lower bound on `dist(A, B)²`.
pub fn maximize_variance(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
) -> Result<VarianceMax> {
    maximize_variance_from(a, alg, cfg, &[])
}

/// As [`maximize_variance`], with extra starting densities.
pub fn maximize_variance_from(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
    candidates: &[ComplexMatrix],
) -> Result<VarianceMax> {
    check_inputs(a, alg)?;
    cfg.validate()?;
    for c in candidates {
        ensure_shape(c, alg.ambient_n())?;
        check_density(c)?;
    }
    let frame = Frame::new(a, alg, cfg);
    let mut iterations = PhaseIterations::default();
    let (_, mut in_frame) = primal_and_duals(&frame, cfg, &mut iterations)?;
    in_frame.extend(candidates.iter().map(|c| alg.to_frame(c)));
    let mut best = maximize_in_frame(&frame, cfg, &in_frame, true)?;
    best.iterations += iterations.primal + iterations.certificate;
    best.p = alg.out_of_frame(&best.p);
    Ok(best)
}

/// One primal run in the frame: steepest descent over the
/// `ε`-subdifferential of `||A - B||`, shrinking `ε` when no descent is
/// found. Each step also yields a dual density from the `ε`-cluster.
struct PrimalRun {
    b: ComplexMatrix,
    dist: f64,
    lower: f64,
    p: Option<ComplexMatrix>,
    iterations: usize,
}

fn primal_descent(
    frame: &Frame,
    basis: &SubspaceBasis,
    b0: ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<PrimalRun> {
    let inner = ToleranceConfig {
        max_iter: 400,
        ..cfg.clone()
    };
    let mut b = b0;
    let mut x = &frame.a - &b;
    let mut f = operator_norm(&x)?;
    let mut run = PrimalRun {
        b: b.clone(),
        dist: f,
        lower: f64::NEG_INFINITY,
        p: None,
        iterations: 0,
    };
    if f == 0.0 {
        run.lower = 0.0;
        return Ok(run);
    }
    let mut eps: f64 = 1e-2;
    let outer = cfg.max_iter;
    for it in 1..=outer {
        run.iterations = it;
        let top = top_singular_subspace_rel(&x, eps)?;
        let v = top.vectors.clone();
        let comp = Compressed::new(&x, basis, top);
        let dual = dual_solve(&comp, &inner, 1e-15);
        let p = herm_part(&(&v * &dual.t * v.adjoint()));
        let value = frame.value(&p)?;
        if value > run.lower {
            run.lower = value;
            run.p = Some(p);
        }
        if f * f - run.lower <= 1e-2 * cfg.solver_tol * (1.0 + f * f) {
            break;
        }
        // Nearly ε-stationary: refine the cluster before stepping.
        if dual.h_norm <= 1e-14f64.max(0.1 * eps) {
            eps /= 10.0;
            if eps < 1e-13 {
                break;
            }
            continue;
        }
        let h = comp.residual(&dual.t);
        let c: Vec<f64> = h.iter().map(|x| -x / dual.h_norm).collect();
        let w = comp.direction(&c);
        let wn = operator_norm(&w)?;
        let (t, f_new) = line_search(&x, &w, 2.0 * f / wn)?;
        if f_new < f * (1.0 - 1e-15) {
            x += w.scale(t);
            b -= w.scale(t);
            f = f_new;
            eps = (eps * 2.0).min(1e-2);
        } else {
            eps /= 10.0;
            if eps < 1e-13 {
                break;
            }
        }
    }
    run.b = b;
    run.dist = f;
    Ok(run)
}

fn golden_min(f: &dyn Fn(f64) -> Result<f64>, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let r = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    for _ in 0..GOLDEN_STEPS {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2)?;
        }
    }
    Ok(if f1 <= f2 { (x1, f1) } else { (x2, f2) })
}

/// `min_z ||A - zI||` by nested golden-section search. The minimiser lies
/// within `||A - (tr A/n) I||` of `tr A / n`.
fn scalar_primal(a: &ComplexMatrix) -> Result<(C64, f64, usize)> {
    let n = a.nrows();
    let center = trace(a) / n as f64;
    let id = identity(n);
    let radius = operator_norm(&(a - &id * center))?;
    if radius == 0.0 {
        return Ok((center, 0.0, 1));
    }
    let count = std::cell::Cell::new(0usize);
    let g = |re: f64, im: f64| {
        count.set(count.get() + 1);
        operator_norm(&(a - &id * C64::new(re, im)))
    };
    let inner = |re: f64| -> Result<(f64, f64)> {
        golden_min(&|im| g(re, im), center.im - radius, center.im + radius)
    };
    let (re, _) = golden_min(
        &|re| Ok(inner(re)?.1),
        center.re - radius,
        center.re + radius,
    )?;
    let (im, d) = inner(re)?;
    let z = C64::new(re, im);
    // The box search can only improve on the centre.
    if d <= radius {
        Ok((z, d, count.get()))
    } else {
        Ok((center, radius, count.get()))
    }
}

fn run_primal(frame: &Frame, cfg: &ToleranceConfig) -> Result<PrimalRun> {
    let alg = frame.alg;
    let n = frame.a.nrows();
    if alg.is_scalars() {
        let (z, dist, iterations) = scalar_primal(&frame.a)?;
        return Ok(PrimalRun {
            b: identity(n) * z,
            dist,
            lower: f64::NEG_INFINITY,
            p: None,
            iterations,
        });
    }
    let basis = alg.frame_basis();
    let mut starts = vec![frame.project(&frame.a)];
    let mut rng = sample::rng(cfg.seed);
    let scale = frame.a.norm() / (n as f64).sqrt();
    for _ in 1..PRIMAL_STARTS {
        starts.push(
            frame
                .project(&sample::gaussian(n, n, &mut rng))
                .scale(scale),
        );
    }
    let runs =
        Exec::default().map_slice(&starts, |b0| primal_descent(frame, &basis, b0.clone(), cfg));
    let mut best: Option<PrimalRun> = None;
    let mut iterations = 0;
    let mut lower = f64::NEG_INFINITY;
    let mut p: Option<ComplexMatrix> = None;
    for r in runs {
        let r = r?;
        iterations += r.iterations;
        if r.lower > lower {
            lower = r.lower;
            p = r.p.clone();
        }
        if best.as_ref().is_none_or(|b| r.dist < b.dist) {
            best = Some(r);
        }
    }
    let mut best = best.expect("at least one start");
    best.iterations = iterations;
    best.lower = lower;
    best.p = p;
    Ok(best)
}

/// Upper bound on `dist(A, B)` with its minimiser: nested golden-section
/// search over `z` for the scalars, multi-start `ε`-steepest descent for
/// block algebras.
pub fn dist_primal(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
) -> Result<PrimalResult> {
    check_inputs(a, alg)?;
    cfg.validate()?;
    let frame = Frame::new(a, alg, cfg);
    let run = run_primal(&frame, cfg)?;
    Ok(PrimalResult {
        dist: run.dist,
        b0: alg.out_of_frame(&run.b),
        iterations: run.iterations,
    })
}

/// Rank-one densities `xx*` from vectors `x` in the top singular space of
/// `A₀` with `<A₀x, x> ≈ 0`.
fn rank_one_candidates(a0: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Vec<ComplexVector>> {
    let mut out = Vec::new();
    for tol in CLUSTER_SWEEP {
        let top = top_singular_subspace_rel(a0, tol)?;
        let v = &top.vectors;
        let m = v.adjoint() * a0 * v;
        if let Some(y) = numrange_zero_search(&m, cfg)?.witness {
            out.push(v * y);
        }
    }
    Ok(out)
}

/// Riemannian gradient ascent of `||Ax||² - |<x, Ax>|²` on the unit sphere.
fn rank_one_ascent(a: &ComplexMatrix, x0: ComplexVector, iters: usize) -> (ComplexVector, f64) {
    let ata = a.adjoint() * a;
    let f = |x: &ComplexVector| quadratic_form(&ata, x).re - quadratic_form(a, x).norm_sqr();
    let mut x = x0.unscale(x0.norm());
    let mut val = f(&x);
    let mut step = 1.0 / (1.0 + ata.norm());
    for _ in 0..iters {
        let mu = quadratic_form(a, &x);
        let g = (&ata * &x - (a * &x) * mu.conj() - (a.adjoint() * &x) * mu).scale(2.0);
        let radial = x.dotc(&g).re;
        let g = g - &x * C64::new(radial, 0.0);
        let gn2 = g.norm_squared();
        if gn2.sqrt() <= 1e-14 * (1.0 + val.abs()) {
            break;
        }
        let mut accepted = false;
        while step > 1e-18 {
            let y = &x + g.scale(step);
            let y = y.unscale(y.norm());
            let vy = f(&y);
            if vy >= val + 1e-4 * step * gn2 {
                x = y;
                val = vy;
                step *= 2.0;
                accepted = true;
                break;
            }
            step /= 2.0;
        }
        if !accepted {
            break;
        }
    }
    (x, val)
}

/// Primal run plus the dual densities it suggests: the `ε`-cluster duals
/// of the descent, a validated certificate for `A₀` when one exists,
/// relaxed-cluster duals of `A₀`, and for the scalars rank-one vectors from
/// the compressed numerical range of `A₀`.
fn primal_and_duals(
    frame: &Frame,
    cfg: &ToleranceConfig,
    iterations: &mut PhaseIterations,
) -> Result<(PrimalRun, Vec<ComplexMatrix>)> {
    let n = frame.a.nrows();
    let alg = frame.alg;
    let primal = run_primal(frame, cfg)?;
    iterations.primal += primal.iterations;
    let a0 = &frame.a - &primal.b;
    let mut candidates: Vec<ComplexMatrix> = Vec::new();
    if let Some(p) = &primal.p {
        candidates.push(p.clone());
    }
    if primal.dist == 0.0 {
        candidates.push(identity(n).unscale(n as f64));
        return Ok((primal, candidates));
    }
    let basis = alg.frame_basis();
    let search = find_certificate(&a0, &basis, cfg)?;
    iterations.certificate += search.iterations;
    if let Some(cert) = search.certificate {
        candidates.push(cert.p);
    }
    for tol in CLUSTER_SWEEP {
        let top = top_singular_subspace_rel(&a0, tol)?;
        let v = top.vectors.clone();
        let comp = Compressed::new(&a0, &basis, top);
        let dual = dual_solve(&comp, cfg, 1e-15);
        iterations.certificate += dual.iterations;
        candidates.push(herm_part(&(&v * &dual.t * v.adjoint())));
    }
    if alg.is_scalars() {
        for x in rank_one_candidates(&a0, cfg)? {
            let (x, _) = rank_one_ascent(&frame.a, x, cfg.max_iter.min(ASCENT_ITERS));
            candidates.push(&x * x.adjoint());
        }
    }
    Ok((primal, candidates))
}

/// Computes `dist(A, B)` with a primal minimiser, a dual density and their
/// duality gap. The gap tolerance is `1e3 · solver_tol · (1 + dist²)`.
pub fn dist_to_algebra(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
) -> Result<DistanceReport> {
    check_inputs(a, alg)?;
    cfg.validate()?;
    let frame = Frame::new(a, alg, cfg);
    let mut iterations = PhaseIterations::default();
    let (primal, candidates) = primal_and_duals(&frame, cfg, &mut iterations)?;
    let dist = primal.dist;
    let a0_frame = &frame.a - &primal.b;

    let mut best_p = candidates[0].clone();
    let mut best_v = f64::NEG_INFINITY;
    for c in &candidates {
        let c = &frame.snap(c);
        let v = frame.value(c)?;
        if v > best_v {
            best_v = v;
            best_p = c.clone();
        }
    }
    let gap_tol = 1e3 * cfg.solver_tol * (1.0 + dist * dist);
    if dist * dist - best_v > 1e-3 * gap_tol {
        let polished = maximize_in_frame(&frame, cfg, std::slice::from_ref(&best_p), false)?;
        iterations.ascent = polished.iterations;
        if polished.value > best_v {
            best_v = polished.value;
            best_p = polished.p;
        }
    }
    let gap = dist * dist - best_v;
    Ok(DistanceReport {
        dist,
        b0: alg.out_of_frame(&primal.b),
        a0: alg.out_of_frame(&a0_frame),
        p: alg.out_of_frame(&best_p),
        variance: best_v,
        gap,
        gap_tol,
        certified: gap.abs() <= gap_tol,
        iterations,
    })
}

/// [`dist_to_algebra`] for `C·I`.
pub fn dist_to_scalars(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<DistanceReport> {
    let n = ensure_square(a)?;
    dist_to_algebra(a, &AlgebraSpec::scalars(n)?, cfg)
}
