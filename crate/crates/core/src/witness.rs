//! Entanglement witnesses `W = c 1 - M` for symmetric states and the
//! product-state optimizers that certify the constant `c`.
//!
//! Three constants are available for an operator `M` on `C^d (x) C^d`:
//! the generic one (sup over `|a>|b>`), the mixed symmetric one (sup over
//! `rho (x) rho`) and the symmetric one (sup over `|psi>|psi>`). Larger
//! feasible sets give larger constants, so
//! `c_sym <= c_sym_mixed <= c_generic`; the three coincide for positive
//! semidefinite symmetric `M`.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::criteria::LocalOrthogonalBasis;
use crate::error::{Error, Result};
use crate::numerics::{
    hermitian_eig, kron_vec, min_eigenvalue, normalize, tol, trace_of_product, vector_norm,
    Complex64, ComplexMatrix,
};
use crate::schmidt::{schmidt_decompose, weighted_tensor_sum, SchmidtDecomposition};
use crate::states::random::{random_density_matrix, random_unit_vector, StateRng};
use crate::states::{builtin_rho33, symmetric_projector, BipartiteState};

/// Stop once `||E(psi) psi - f(psi) psi||` drops below this.
pub const RESIDUAL_TOL: f64 = 1e-8;
/// Objective changes below this count as stalled.
pub const STALL_TOL: f64 = 1e-12;
pub const DEFAULT_ITERS: usize = 5000;
pub const DEFAULT_RESTARTS: usize = 200;
pub const DEFAULT_SEED: u64 = 42;
/// Largest local dimension accepted by [`certify_by_grid`].
pub const GRID_MAX_DIM: usize = 3;
/// Number of retained Schmidt terms for the ϱ₃ₓ₃ witness.
const RHO33_KEEP: usize = 6;
const MAX_DAMPING_HALVINGS: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessKind {
    Generic,
    Symmetric,
    SymmetricMixed,
}

impl WitnessKind {
    pub fn as_str(self) -> &'static str {
        match self {
            WitnessKind::Generic => "generic",
            WitnessKind::Symmetric => "symmetric",
            WitnessKind::SymmetricMixed => "symmetric-mixed",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "generic" => Ok(WitnessKind::Generic),
            "symmetric" => Ok(WitnessKind::Symmetric),
            "symmetric-mixed" => Ok(WitnessKind::SymmetricMixed),
            other => Err(Error::Parse(format!("unknown witness kind `{other}`"))),
        }
    }
}

/// `W = c 1 - M`.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    operator: ComplexMatrix,
    constant: f64,
    kind: WitnessKind,
}

impl Witness {
    pub fn new(operator: ComplexMatrix, constant: f64, kind: WitnessKind) -> Result<Self> {
        local_dim(&operator)?;
        let dev = operator.hermiticity_deviation();
        if dev > 1e-10 * operator.frobenius_norm().max(1.0) {
            return Err(Error::NonHermitian { deviation: dev });
        }
        if !constant.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            operator,
            constant,
            kind,
        })
    }

    pub fn operator(&self) -> &ComplexMatrix {
        &self.operator
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }

    pub fn kind(&self) -> WitnessKind {
        self.kind
    }

    /// Local dimension `d`.
    pub fn dim(&self) -> usize {
        local_dim(&self.operator).expect("checked on construction")
    }

    /// `Tr(M rho)`.
    pub fn operator_expectation(&self, s: &BipartiteState) -> Result<f64> {
        if s.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: s.dim(),
            });
        }
        Ok(trace_of_product(&self.operator, s.rho()).re)
    }

    /// `c - Tr(M rho)`. A negative value signals entanglement only for
    /// symmetric states when the witness kind is symmetric.
    pub fn evaluate(&self, s: &BipartiteState) -> Result<f64> {
        Ok(self.constant - self.operator_expectation(s)?)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            operator: self.operator.scale_real(factor),
            constant: self.constant * factor,
            kind: self.kind,
        }
    }
}

pub fn evaluate(w: &Witness, s: &BipartiteState) -> Result<f64> {
    w.evaluate(s)
}

fn local_dim(m: &ComplexMatrix) -> Result<usize> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let n = m.rows();
    let d = (n as f64).sqrt().round() as usize;
    if d < 2 || d * d != n {
        return Err(Error::InvalidDimension(n));
    }
    Ok(d)
}

fn check_hermitian(m: &ComplexMatrix) -> Result<usize> {
    let d = local_dim(m)?;
    let dev = m.hermiticity_deviation();
    if dev > tol::HERMITIAN * m.frobenius_norm().max(1.0) {
        return Err(Error::NonHermitian { deviation: dev });
    }
    Ok(d)
}

/// `<a b|M|a b>`.
pub fn product_value(m: &ComplexMatrix, a: &[Complex64], b: &[Complex64]) -> f64 {
    m.quadratic_form(&kron_vec(a, b)).re
}

/// `<psi psi|M|psi psi>`.
pub fn symmetric_product_value(m: &ComplexMatrix, psi: &[Complex64]) -> f64 {
    product_value(m, psi, psi)
}

/// `A[a,b] = <a phi|M|b phi>`, contraction over the second factor.
fn contract_second(m: &ComplexMatrix, phi: &[Complex64], d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..d {
            for e in 0..d {
                acc += phi[c].conj() * phi[e] * m[(a * d + c, b * d + e)];
            }
        }
        acc
    })
}

/// `B[a,b] = <phi a|M|phi b>`, contraction over the first factor.
fn contract_first(m: &ComplexMatrix, phi: &[Complex64], d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |a, b| {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in 0..d {
            for e in 0..d {
                acc += phi[c].conj() * phi[e] * m[(c * d + a, e * d + b)];
            }
        }
        acc
    })
}

/// `E(psi) = (A + B) / 2`; `f(psi) = <psi|E(psi)|psi>` and the gradient of
/// `f` is proportional to `E(psi) psi`.
pub fn effective_matrix(m: &ComplexMatrix, psi: &[Complex64]) -> ComplexMatrix {
    let d = psi.len();
    (&contract_second(m, psi, d) + &contract_first(m, psi, d))
        .scale_real(0.5)
        .hermitian_part()
}

fn top_eigenvector(h: &ComplexMatrix) -> Result<Vec<Complex64>> {
    let eig = hermitian_eig(h)?;
    Ok(eig.eigenvector(h.rows() - 1))
}

fn residual(e: &ComplexMatrix, psi: &[Complex64], f: f64) -> f64 {
    let ev = e.mul_vec(psi);
    ev.iter()
        .zip(psi)
        .map(|(x, p)| (x - p * f).norm_sqr())
        .sum::<f64>()
        .sqrt()
}

/// Moves towards the phase-aligned top eigenvector of `E(psi)`, halving the
/// step until `f` does not decrease.
fn damped_step(
    m: &ComplexMatrix,
    psi: &[Complex64],
    e: &ComplexMatrix,
    f: f64,
) -> Result<Option<(Vec<Complex64>, f64)>> {
    let mut phi = top_eigenvector(e)?;
    let overlap: Complex64 = psi.iter().zip(&phi).map(|(p, q)| p.conj() * q).sum();
    if overlap.norm() > 0.0 {
        let phase = overlap.conj() / overlap.norm();
        phi.iter_mut().for_each(|x| *x *= phase);
    }
    let mut t = 1.0;
    for _ in 0..=MAX_DAMPING_HALVINGS {
        let mut cand: Vec<Complex64> = psi.iter().zip(&phi).map(|(p, q)| p + (q - p) * t).collect();
        if vector_norm(&cand) > 1e-12 {
            normalize(&mut cand);
            let fc = symmetric_product_value(m, &cand);
            if fc >= f {
                return Ok(Some((cand, fc)));
            }
        }
        t *= 0.5;
    }
    Ok(None)
}

fn to_real(psi: &[Complex64]) -> DVector<f64> {
    let d = psi.len();
    DVector::from_fn(2 * d, |i, _| if i < d { psi[i].re } else { psi[i - d].im })
}

fn from_real(x: &DVector<f64>) -> Vec<Complex64> {
    let d = x.len() / 2;
    (0..d).map(|i| Complex64::new(x[i], x[i + d])).collect()
}

/// Euclidean gradient of `f` in real coordinates `(Re psi, Im psi)`.
fn real_gradient(m: &ComplexMatrix, x: &DVector<f64>) -> DVector<f64> {
    let psi = from_real(x);
    to_real(&effective_matrix(m, &psi).mul_vec(&psi)) * 4.0
}

/// One Newton step for `f` on the unit sphere modulo the global phase,
/// with a central-difference Hessian of the analytic gradient. Returns the
/// new point only if it does not decrease `f`.
fn newton_step(m: &ComplexMatrix, psi: &[Complex64], f: f64) -> Option<(Vec<Complex64>, f64)> {
    let n = 2 * psi.len();
    let x = to_real(psi);
    let g = real_gradient(m, &x);
    let h = 1e-5;
    let mut hess = DMatrix::zeros(n, n);
    for j in 0..n {
        let mut xp = x.clone();
        let mut xm = x.clone();
        xp[j] += h;
        xm[j] -= h;
        hess.set_column(j, &((real_gradient(m, &xp) - real_gradient(m, &xm)) / (2.0 * h)));
    }
    let hess = (&hess + hess.transpose()) * 0.5;
    // normal directions: psi itself and the phase direction i psi
    let ix = to_real(&psi.iter().map(|z| z * Complex64::i()).collect::<Vec<_>>());
    let normal = &x * x.transpose() + &ix * ix.transpose();
    let p = DMatrix::identity(n, n) - &normal;
    let lhs = &p * (hess - DMatrix::identity(n, n) * (4.0 * f)) * &p + normal;
    let step = lhs.lu().solve(&(-(&p * g)))?;
    let mut cand = from_real(&(x + step));
    if vector_norm(&cand) < 1e-12 {
        return None;
    }
    normalize(&mut cand);
    let fc = symmetric_product_value(m, &cand);
    (fc >= f).then_some((cand, fc))
}

/// Trace of one see-saw run.
#[derive(Debug, Clone)]
pub struct SeeSawRun {
    /// Objective after every accepted step, starting with the initial point.
    pub values: Vec<f64>,
    pub vector: Vec<Complex64>,
    pub residual: f64,
    pub converged: bool,
}

impl SeeSawRun {
    pub fn value(&self) -> f64 {
        *self.values.last().expect("at least the initial value")
    }
}

/// Runs the symmetric see-saw from `psi0`.
///
/// Each step moves towards the top eigenvector `phi` of `E(psi)`, with the
/// phase of `phi` aligned to `psi`. The full step is tried first, then
/// halved steps. Close to a critical point this converges only linearly, so
/// once the gain per step falls below `1e-12` a Newton step on the sphere is
/// tried as well. A step is accepted only if `f` does not decrease.
pub fn see_saw(m: &ComplexMatrix, psi0: &[Complex64], iters: usize) -> Result<SeeSawRun> {
    let d = check_hermitian(m)?;
    if psi0.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: psi0.len(),
        });
    }
    let mut psi = psi0.to_vec();
    normalize(&mut psi);
    let mut f = symmetric_product_value(m, &psi);
    let mut values = vec![f];
    let mut e = effective_matrix(m, &psi);
    let mut res = residual(&e, &psi, f);
    let mut stalled = 0usize;
    for _ in 0..iters {
        if res <= RESIDUAL_TOL {
            break;
        }
        let mut step = damped_step(m, &psi, &e, f)?;
        if step.as_ref().is_none_or(|(_, fc)| fc - f < STALL_TOL) {
            if let Some(polished) = newton_step(m, &psi, f) {
                if step.as_ref().is_none_or(|(_, fc)| polished.1 > *fc) {
                    step = Some(polished);
                }
            }
        }
        let Some((cand, fc)) = step else { break };
        stalled = if fc - f < STALL_TOL { stalled + 1 } else { 0 };
        psi = cand;
        f = fc;
        values.push(f);
        e = effective_matrix(m, &psi);
        res = residual(&e, &psi, f);
        if stalled >= 50 {
            break;
        }
    }
    Ok(SeeSawRun {
        values,
        vector: psi,
        residual: res,
        converged: res <= RESIDUAL_TOL,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductOptResult {
    pub best_value: f64,
    pub best_vector: Vec<Complex64>,
    pub restarts_used: usize,
    pub converged_fraction: f64,
    /// Restart index that produced the best value.
    pub best_restart: usize,
}

fn restart_rng(seed: u64, restart: usize) -> StateRng {
    let mut rng = StateRng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

fn merge_best(results: Vec<(usize, f64, Vec<Complex64>, bool)>) -> Result<ProductOptResult> {
    let restarts_used = results.len();
    if restarts_used == 0 {
        return Err(Error::Validation("at least one restart is required".into()));
    }
    let converged = results.iter().filter(|r| r.3).count();
    // strict comparison keeps the lowest restart index on ties
    let best = results
        .into_iter()
        .reduce(|best, r| if r.1 > best.1 { r } else { best })
        .expect("non-empty");
    Ok(ProductOptResult {
        best_value: best.1,
        best_vector: best.2,
        restarts_used,
        converged_fraction: converged as f64 / restarts_used as f64,
        best_restart: best.0,
    })
}

/// Maximizes `<psi psi|M|psi psi>` over unit vectors with a multi-start
/// see-saw. Restarts run in parallel; restart `r` draws its start from the
/// ChaCha stream `r` of `seed`, so the result does not depend on scheduling.
pub fn optimize_symmetric_product(
    m: &ComplexMatrix,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<ProductOptResult> {
    let d = check_hermitian(m)?;
    let runs: Vec<_> = (0..restarts)
        .into_par_iter()
        .map(|r| {
            let psi0 = random_unit_vector(d, &mut restart_rng(seed, r));
            see_saw(m, &psi0, iters).map(|run| {
                let v = symmetric_product_value(m, &run.vector);
                (r, v, run.vector, run.converged)
            })
        })
        .collect::<Result<_>>()?;
    merge_best(runs)
}

/// Maximizes `<a b|M|a b>` over pairs of unit vectors by alternating exact
/// maximization over `a` and `b`.
pub fn optimize_product(
    m: &ComplexMatrix,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> Result<ProductOptResult> {
    let d = check_hermitian(m)?;
    let runs: Vec<_> = (0..restarts)
        .into_par_iter()
        .map(|r| -> Result<_> {
            let mut rng = restart_rng(seed, r);
            let mut a = random_unit_vector(d, &mut rng);
            let mut b = random_unit_vector(d, &mut rng);
            let mut f = product_value(m, &a, &b);
            let mut converged = false;
            for _ in 0..iters {
                a = top_eigenvector(&contract_second(m, &b, d))?;
                b = top_eigenvector(&contract_first(m, &a, d))?;
                let next = product_value(m, &a, &b);
                let delta = next - f;
                f = next;
                if delta.abs() < STALL_TOL {
                    converged = true;
                    break;
                }
            }
            Ok((r, f, kron_vec(&a, &b), converged))
        })
        .collect::<Result<_>>()?;
    merge_best(runs)
}

/// Grid lower bound on `sup <psi psi|M|psi psi>` for `d <= 3`.
///
/// The unit sphere is parametrized by hyperspherical angles with the first
/// component real and nonnegative; each of the `2d - 2` angles takes
/// `resolution` evenly spaced values including both endpoints of its range.
pub fn certify_by_grid(m: &ComplexMatrix, resolution: usize) -> Result<f64> {
    let d = check_hermitian(m)?;
    if d > GRID_MAX_DIM {
        return Err(Error::DimensionTooLarge {
            requested: d,
            cap: GRID_MAX_DIM,
        });
    }
    let res = resolution.max(2);
    let half_pi = std::f64::consts::FRAC_PI_2;
    let two_pi = 2.0 * std::f64::consts::PI;
    let polar: Vec<f64> = (0..res).map(|i| half_pi * i as f64 / (res - 1) as f64).collect();
    // the phase range is periodic, so the last point would repeat the first
    let phase: Vec<Complex64> = (0..res)
        .map(|i| Complex64::from_polar(1.0, two_pi * i as f64 / res as f64))
        .collect();
    let mut best = f64::NEG_INFINITY;
    match d {
        2 => {
            for &t in &polar {
                for p in &phase {
                    let psi = [Complex64::new(t.cos(), 0.0), p * t.sin()];
                    best = best.max(symmetric_product_value(m, &psi));
                }
            }
        }
        _ => {
            for &t1 in &polar {
                for &t2 in &polar {
                    for p1 in &phase {
                        for p2 in &phase {
                            let psi = [
                                Complex64::new(t1.cos(), 0.0),
                                p1 * (t1.sin() * t2.cos()),
                                p2 * (t1.sin() * t2.sin()),
                            ];
                            best = best.max(symmetric_product_value(m, &psi));
                        }
                    }
                }
            }
        }
    }
    Ok(best)
}

/// `M = sum_k c_k M_k (x) M_k` kept in factored form.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtOperator {
    coefficients: Vec<f64>,
    observables: Vec<ComplexMatrix>,
}

impl SchmidtOperator {
    /// Requires matching lengths, square Hermitian observables of one shape
    /// and finite coefficients.
    pub fn new(coefficients: Vec<f64>, observables: Vec<ComplexMatrix>) -> Result<Self> {
        if coefficients.is_empty() || coefficients.len() != observables.len() {
            return Err(Error::BadDecomposition(format!(
                "{} coefficients for {} observables",
                coefficients.len(),
                observables.len()
            )));
        }
        if coefficients.iter().any(|c| !c.is_finite()) {
            return Err(Error::BadDecomposition("non-finite coefficient".into()));
        }
        let shape = observables[0].shape();
        for (i, m) in observables.iter().enumerate() {
            if m.shape() != shape || !m.is_square() || shape.0 < 2 {
                return Err(Error::BadDecomposition(format!(
                    "observable {i} has shape {:?}",
                    m.shape()
                )));
            }
            if !m.is_hermitian(1e-10) {
                return Err(Error::BadDecomposition(format!(
                    "observable {i} is not Hermitian"
                )));
            }
        }
        Ok(Self {
            coefficients,
            observables,
        })
    }

    /// As [`SchmidtOperator::new`], additionally checking that the terms
    /// reconstruct `m` within `1e-9` in Frobenius norm.
    pub fn for_matrix(
        m: &ComplexMatrix,
        coefficients: Vec<f64>,
        observables: Vec<ComplexMatrix>,
    ) -> Result<Self> {
        let op = Self::new(coefficients, observables)?;
        let err = op.matrix().distance(m);
        if op.matrix().shape() != m.shape() || err > 1e-9 {
            return Err(Error::BadDecomposition(format!(
                "terms reconstruct the operator only within {err:.3e}"
            )));
        }
        Ok(op)
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn observables(&self) -> &[ComplexMatrix] {
        &self.observables
    }

    pub fn dim(&self) -> usize {
        self.observables[0].rows()
    }

    pub fn matrix(&self) -> ComplexMatrix {
        weighted_tensor_sum(&self.coefficients, &self.observables)
    }

    /// `Tr(M rho (x) rho) = sum_k c_k Tr(M_k rho)^2`.
    pub fn product_value_mixed(&self, rho: &ComplexMatrix) -> Result<f64> {
        let d = self.dim();
        if rho.shape() != (d, d) {
            return Err(Error::ShapeMismatch {
                expected: (d, d),
                found: rho.shape(),
            });
        }
        Ok(self
            .coefficients
            .iter()
            .zip(&self.observables)
            .map(|(c, m)| c * trace_of_product(m, rho).re.powi(2))
            .sum())
    }

    fn gradient(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let d = self.dim();
        self.coefficients
            .iter()
            .zip(&self.observables)
            .fold(ComplexMatrix::zeros(d, d), |acc, (c, m)| {
                &acc + &m.scale_real(2.0 * c * trace_of_product(m, rho).re)
            })
    }

    fn expectations(&self, rho: &ComplexMatrix) -> Vec<f64> {
        self.observables
            .iter()
            .map(|m| trace_of_product(m, rho).re)
            .collect()
    }

    /// Maximizes `Tr(M rho (x) rho)` over density matrices by Frank-Wolfe
    /// with exact line search, from random mixed starting points.
    ///
    /// With all coefficients nonnegative the objective is convex and the
    /// optimum is pure; mixed signs give a local optimum. All-nonpositive
    /// coefficient vectors make the problem concave, which is not handled.
    pub fn maximize_mixed(&self, restarts: usize, iters: usize, seed: u64) -> Result<MixedOptResult> {
        if self.coefficients.iter().all(|&c| c <= 0.0) {
            return Err(Error::Unsupported(
                "maximization with all coefficients nonpositive".into(),
            ));
        }
        let d = self.dim();
        let runs: Vec<_> = (0..restarts)
            .into_par_iter()
            .map(|r| -> Result<(usize, f64, ComplexMatrix)> {
                let mut rho = random_density_matrix(d, &mut restart_rng(seed, r));
                let mut f = self.product_value_mixed(&rho)?;
                for _ in 0..iters {
                    let v = top_eigenvector(&self.gradient(&rho))?;
                    let vertex = ComplexMatrix::outer(&v, &v);
                    // g(t) = sum c_k (x_k + t (y_k - x_k))^2 is quadratic in t
                    let x = self.expectations(&rho);
                    let y = self.expectations(&vertex);
                    let (mut qa, mut qb) = (0.0, 0.0);
                    for ((c, xk), yk) in self.coefficients.iter().zip(&x).zip(&y) {
                        qa += c * (yk - xk).powi(2);
                        qb += 2.0 * c * xk * (yk - xk);
                    }
                    let g = |t: f64| f + qb * t + qa * t * t;
                    let mut t = if g(1.0) >= g(0.0) { 1.0 } else { 0.0 };
                    if qa < 0.0 {
                        let stationary = (-qb / (2.0 * qa)).clamp(0.0, 1.0);
                        if g(stationary) > g(t) {
                            t = stationary;
                        }
                    }
                    if t == 0.0 {
                        break;
                    }
                    let next = &rho.scale_real(1.0 - t) + &vertex.scale_real(t);
                    let fnext = self.product_value_mixed(&next)?;
                    if fnext < f {
                        break;
                    }
                    let gain = fnext - f;
                    rho = next;
                    f = fnext;
                    if gain < STALL_TOL {
                        break;
                    }
                }
                Ok((r, f, rho))
            })
            .collect::<Result<_>>()?;
        let best = runs
            .into_iter()
            .reduce(|best, r| if r.1 > best.1 { r } else { best })
            .ok_or_else(|| Error::Validation("at least one restart is required".into()))?;
        Ok(MixedOptResult {
            best_value: best.1,
            best_state: best.2,
            best_restart: best.0,
        })
    }

    /// Symmetric product maximum; rejects all-nonpositive coefficients like
    /// [`SchmidtOperator::maximize_mixed`].
    pub fn maximize(&self, restarts: usize, iters: usize, seed: u64) -> Result<ProductOptResult> {
        if self.coefficients.iter().all(|&c| c <= 0.0) {
            return Err(Error::Unsupported(
                "maximization with all coefficients nonpositive".into(),
            ));
        }
        optimize_symmetric_product(&self.matrix(), restarts, iters, seed)
    }
}

pub fn product_value_mixed(op: &SchmidtOperator, rho: &ComplexMatrix) -> Result<f64> {
    op.product_value_mixed(rho)
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedOptResult {
    pub best_value: f64,
    pub best_state: ComplexMatrix,
    pub best_restart: usize,
}

/// Witness built from a Schmidt decomposition, with its ingredients.
#[derive(Debug, Clone)]
pub struct SchmidtWitness {
    pub witness: Witness,
    pub decomposition: SchmidtDecomposition,
    /// Weights `f_k` paired with the decomposition's observables.
    pub weights: Vec<f64>,
    pub optimization: ProductOptResult,
}

/// Default number of retained terms, `ceil(2 d^2 / 3)`; six for `d = 3`.
pub fn default_keep(d: usize) -> usize {
    (2 * d * d).div_ceil(3)
}

/// Square roots of the `keep` largest Schmidt coefficients, zeros after.
/// Negative coefficients among the retained ones are clamped to zero.
pub fn sqrt_weights(coefficients: &[f64], keep: usize) -> Vec<f64> {
    coefficients
        .iter()
        .enumerate()
        .map(|(k, &l)| if k < keep { l.max(0.0).sqrt() } else { 0.0 })
        .collect()
}

/// Builds `M = sum_k f_k M_k (x) M_k` from the Schmidt decomposition of a
/// symmetric state and certifies `c = sup <psi psi|M|psi psi>` by see-saw.
pub fn build_schmidt_witness_with(
    s: &BipartiteState,
    weights: impl Fn(&[f64]) -> Vec<f64>,
    restarts: usize,
    seed: u64,
) -> Result<SchmidtWitness> {
    if !s.is_symmetric(tol::HERMITIAN) {
        return Err(Error::NotSymmetric);
    }
    let basis = LocalOrthogonalBasis::hermitian(s.dim())?;
    let decomposition = schmidt_decompose(s, &basis)?;
    let weights = weights(&decomposition.coefficients);
    let op = SchmidtOperator::new(weights.clone(), decomposition.observables.clone())?;
    let optimization = op.maximize(restarts, DEFAULT_ITERS, seed)?;
    let witness = Witness::new(op.matrix(), optimization.best_value, WitnessKind::Symmetric)?;
    Ok(SchmidtWitness {
        witness,
        decomposition,
        weights,
        optimization,
    })
}

pub fn build_schmidt_witness(
    s: &BipartiteState,
    keep: usize,
    restarts: usize,
    seed: u64,
) -> Result<SchmidtWitness> {
    build_schmidt_witness_with(s, |c| sqrt_weights(c, keep), restarts, seed)
}

/// The witness for ϱ₃ₓ₃: six retained terms, 200 restarts, seed 42.
pub fn build_rho33_witness() -> Result<Witness> {
    Ok(build_schmidt_witness(&builtin_rho33(), RHO33_KEEP, DEFAULT_RESTARTS, DEFAULT_SEED)?.witness)
}

/// Sampled suprema for the three witness constants of one operator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrderingReport {
    /// Best `<a b|M|a b>` over random product pairs.
    pub sampled_pair_sup: f64,
    /// Best `Tr(M rho (x) rho)` over random density matrices.
    pub sampled_mixed_sup: f64,
    /// Symmetric see-saw maximum.
    pub symmetric_sup: f64,
    /// Alternating see-saw maximum over product pairs.
    pub generic_sup: f64,
    pub holds: bool,
}

/// Checks on a positive semidefinite symmetric `M` that no sampled product
/// pair or `rho (x) rho` exceeds the symmetric supremum (by more than
/// `1e-6`), and that the generic and symmetric optimizers agree.
pub fn witness_ordering_spotcheck(
    m: &ComplexMatrix,
    samples: usize,
    seed: u64,
) -> Result<OrderingReport> {
    let d = check_hermitian(m)?;
    let min = min_eigenvalue(m)?;
    if min < -tol::PSD {
        return Err(Error::NotPsd { min_eigenvalue: min });
    }
    let p = symmetric_projector(d)?;
    if p.matmul(m).matmul(&p).distance(m) > 1e-9 {
        return Err(Error::NotSymmetricOperator);
    }
    let mut rng = StateRng::seed_from_u64(seed);
    let mut pair = f64::NEG_INFINITY;
    let mut mixed = f64::NEG_INFINITY;
    for _ in 0..samples {
        let a = random_unit_vector(d, &mut rng);
        let b = random_unit_vector(d, &mut rng);
        pair = pair.max(product_value(m, &a, &b));
        let rho = random_density_matrix(d, &mut rng);
        mixed = mixed.max(trace_of_product(m, &crate::numerics::kron(&rho, &rho)).re);
    }
    let restarts = 32;
    let symmetric = optimize_symmetric_product(m, restarts, DEFAULT_ITERS, seed)?.best_value;
    let generic = optimize_product(m, restarts, DEFAULT_ITERS, seed)?.best_value;
    let slack = 1e-6;
    let holds = pair <= symmetric + slack
        && mixed <= symmetric + slack
        && (generic - symmetric).abs() <= slack;
    Ok(OrderingReport {
        sampled_pair_sup: pair,
        sampled_mixed_sup: mixed,
        symmetric_sup: symmetric,
        generic_sup: generic,
        holds,
    })
}
