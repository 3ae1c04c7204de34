//! Minimal directional derivative over the unit sphere of `W`.
//!
//! `φ(c) = λ_max(Σ c_k G_k)` is convex and positively homogeneous, and by
//! minimax `min_{|c|≤1} φ(c) = -min_{T} |h(T)|` where `h_k(T) = tr(G_k T)`
//! and `T` ranges over `m x m` densities. The right-hand side is solved by
//! accelerated projected gradient (a certified lower bound, plus a candidate
//! direction `-h/|h|`); the left-hand side by projected subgradient descent
//! from that candidate and from seeded random starts.

use rand::Rng;

use super::{constraint_lipschitz, project_spectahedron, validate_pair, Compressed};
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::numkit::{
    identity, lambda_max, operator_norm, quadratic_form, top_singular_subspace, ComplexMatrix,
    ToleranceConfig,
};
use crate::sample;
use crate::spaces::SubspaceBasis;

const STARTS: usize = 8;
const GAP_CHECK_EVERY: usize = 10;

#[derive(Clone, Debug)]
pub struct MinDirectional {
    /// Smallest derivative found over unit-Frobenius directions.
    pub value: f64,
    /// Lower bound on the true minimum over the unit ball of `W`.
    pub lower_bound: f64,
    /// Unit-Frobenius direction attaining `value`.
    pub witness: ComplexMatrix,
    pub multiplicity: usize,
    pub iterations: usize,
}

pub(crate) struct DualSolve {
    pub t: ComplexMatrix,
    pub h_norm: f64,
    pub iterations: usize,
}

fn norm2(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Value of `φ` at `c` together with a subgradient.
fn phi(comp: &Compressed, c: &[f64]) -> (f64, Vec<f64>) {
    let (l, y) = lambda_max(&comp.pencil(c));
    let g = comp
        .constraints
        .iter()
        .map(|gk| quadratic_form(gk, &y).re)
        .collect();
    (l, g)
}

/// Minimises `|h(T)|²/2` over densities by FISTA.
pub(crate) fn dual_solve(comp: &Compressed, cfg: &ToleranceConfig, eps: f64) -> DualSolve {
    let m = comp.m();
    let mut t = identity(m).unscale(m as f64);
    let lip = constraint_lipschitz(&comp.constraints);
    if lip == 0.0 {
        return DualSolve {
            t,
            h_norm: 0.0,
            iterations: 0,
        };
    }
    let mut y = t.clone();
    let mut tk: f64 = 1.0;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        iterations = it;
        let h = comp.residual(&y);
        let grad = comp.pencil(&h);
        let t_new = project_spectahedron(&(&y - grad.unscale(lip)));
        let tk_new = (1.0 + (1.0 + 4.0 * tk * tk).sqrt()) / 2.0;
        y = &t_new + (&t_new - &t).scale((tk - 1.0) / tk_new);
        t = t_new;
        tk = tk_new;
        if it % GAP_CHECK_EVERY == 0 {
            let h = comp.residual(&t);
            let hn = norm2(&h);
            if hn <= eps {
                break;
            }
            let c: Vec<f64> = h.iter().map(|x| -x / hn).collect();
            if phi(comp, &c).0 + hn <= eps {
                break;
            }
        }
    }
    let h_norm = norm2(&comp.residual(&t));
    DualSolve {
        t,
        h_norm,
        iterations,
    }
}

struct StartResult {
    value: f64,
    c: Vec<f64>,
    iterations: usize,
}

fn project_ball(c: &mut [f64]) {
    let n = norm2(c);
    if n > 1.0 {
        c.iter_mut().for_each(|x| *x /= n);
    }
}

/// Polyak-step projected subgradient descent on the unit ball, recording
/// the best value of `φ(c/|c|)`.
fn subgradient_run(
    comp: &Compressed,
    start: Vec<f64>,
    target: f64,
    iters: usize,
    eps: f64,
) -> StartResult {
    let mut c = start;
    project_ball(&mut c);
    let mut best = StartResult {
        value: f64::INFINITY,
        c: c.clone(),
        iterations: 0,
    };
    for it in 1..=iters {
        best.iterations = it;
        let (val, g) = phi(comp, &c);
        let cn = norm2(&c);
        if cn > 0.0 && val / cn < best.value {
            best.value = val / cn;
            best.c = c.iter().map(|x| x / cn).collect();
        }
        let gn2: f64 = g.iter().map(|x| x * x).sum();
        if val - target <= eps || gn2 == 0.0 {
            break;
        }
        let step = (val - target) / gn2;
        c.iter_mut().zip(&g).for_each(|(ci, gi)| *ci -= step * gi);
        project_ball(&mut c);
    }
    best
}

/// Minimal one-sided derivative of `||A + tW||` over unit-Frobenius `W ∈ W`.
pub fn min_directional_derivative(
    a: &ComplexMatrix,
    w: &SubspaceBasis,
    cfg: &ToleranceConfig,
) -> Result<MinDirectional> {
    validate_pair(a, w)?;
    cfg.validate()?;
    if operator_norm(a)? == 0.0 {
        return Err(Error::input("directional derivative at the zero matrix"));
    }
    let top = top_singular_subspace(a, cfg)?;
    let comp = Compressed::new(a, w, top);
    Ok(minimize(&comp, cfg))
}

pub(crate) fn minimize(comp: &Compressed, cfg: &ToleranceConfig) -> MinDirectional {
    let d = comp.constraints.len();
    let eps = 1e-3 * cfg.solver_tol;
    let dual = dual_solve(comp, cfg, eps);
    let lower_bound = -dual.h_norm;
    let h = comp.residual(&dual.t);
    let mut starts: Vec<Vec<f64>> = Vec::with_capacity(STARTS);
    if dual.h_norm > 0.0 {
        starts.push(h.iter().map(|x| -x / dual.h_norm).collect());
    }
    let mut rng = sample::rng(cfg.seed);
    while starts.len() < STARTS {
        let v: Vec<f64> = (0..d).map(|_| rng.random::<f64>() - 0.5).collect();
        let vn = norm2(&v);
        starts.push(
            v.into_iter()
                .map(|x| x / vn.max(f64::MIN_POSITIVE))
                .collect(),
        );
    }
    let iters = cfg.max_iter.min(2000);
    let runs = Exec::default().map_slice(&starts, |s| {
        subgradient_run(comp, s.clone(), lower_bound, iters, eps)
    });
    let mut iterations = dual.iterations;
    let mut best: Option<StartResult> = None;
    for r in runs {
        iterations += r.iterations;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    let best = best.expect("at least one start");
    MinDirectional {
        value: best.value,
        lower_bound,
        witness: comp.direction(&best.c),
        multiplicity: comp.m(),
        iterations,
    }
}
