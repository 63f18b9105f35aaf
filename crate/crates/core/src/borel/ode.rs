//! Stepwise Taylor continuation of a scalar linear ODE with polynomial
//! coefficients along a ray, seeding from a convergent power series at the
//! origin. Supplies integrand values for the Laplace quadrature.

use std::cmp::Ordering;

use crate::exactla::GRat;

use super::mp::{Complex, MpCtx, Real};
use super::BorelError;

/// `sum_i p_i(zeta) y^{(i)} = 0` with exact polynomial coefficients;
/// `coeffs[i][j]` is the coefficient of `zeta^j` in `p_i`.
#[derive(Clone, Debug)]
pub struct OdePoly {
    pub coeffs: Vec<Vec<GRat>>,
}

impl OdePoly {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Roots of the leading coefficient polynomial: the finite singular
    /// points of the equation.
    pub fn singularities(&self, ctx: &MpCtx) -> Vec<Complex> {
        let lead = self.coeffs.last().expect("nonempty coefficient list");
        poly_roots(ctx, lead)
    }
}

/// Complex roots of a polynomial with exact coefficients, by exact removal
/// of the root at 0 followed by Durand-Kerner iteration and a Newton
/// polish.
pub fn poly_roots(ctx: &MpCtx, poly: &[GRat]) -> Vec<Complex> {
    let mut coeffs: Vec<GRat> = poly.to_vec();
    while coeffs.last().map_or(false, |c| c.is_zero()) {
        coeffs.pop();
    }
    let mut roots = Vec::new();
    if coeffs.len() <= 1 {
        return roots;
    }
    // exact zero roots
    let mut low = 0usize;
    while low < coeffs.len() && coeffs[low].is_zero() {
        low += 1;
    }
    for _ in 0..low {
        roots.push(ctx.czero());
    }
    let reduced: Vec<Complex> = coeffs[low..].iter().map(|c| ctx.from_grat(c)).collect();
    let deg = reduced.len() - 1;
    if deg == 0 {
        return roots;
    }
    // Durand-Kerner from a perturbed circle
    let mut zs: Vec<Complex> = Vec::with_capacity(deg);
    let radius = ctx.from_f64(1.3);
    for k in 0..deg {
        let angle = ctx.from_f64(2.0 * std::f64::consts::PI * (k as f64 + 0.25) / deg as f64);
        zs.push(ctx.cmul_real(&ctx.unit(&angle), &radius));
    }
    let eval = |z: &Complex| -> Complex {
        let mut acc = ctx.czero();
        for c in reduced.iter().rev() {
            acc = ctx.cadd(&ctx.cmul(&acc, z), c);
        }
        acc
    };
    let eval_d = |z: &Complex| -> Complex {
        let mut acc = ctx.czero();
        for (j, c) in reduced.iter().enumerate().skip(1).rev() {
            acc = ctx.cadd(&ctx.cmul(&acc, z), &ctx.cmul_real(c, &ctx.from_i64(j as i64)));
        }
        acc
    };
    let tol = ctx.eps(ctx.prec / 2);
    for _ in 0..200 {
        let mut moved = ctx.zero();
        for i in 0..deg {
            let mut den = ctx.from_grat(&coeffs[coeffs.len() - 1]);
            for j in 0..deg {
                if j != i {
                    den = ctx.cmul(&den, &ctx.csub(&zs[i], &zs[j]));
                }
            }
            let step = ctx.cdiv(&eval(&zs[i]), &den);
            zs[i] = ctx.csub(&zs[i], &step);
            let m = ctx.cabs(&step);
            if ctx.cmp(&m, &moved) == Ordering::Greater {
                moved = m;
            }
        }
        if ctx.cmp(&moved, &tol) != Ordering::Greater {
            break;
        }
    }
    // Newton polish at full precision
    for z in zs.iter_mut() {
        for _ in 0..8 {
            let step = ctx.cdiv(&eval(z), &eval_d(z));
            *z = ctx.csub(z, &step);
        }
    }
    roots.extend(zs);
    roots
}

/// One Taylor panel of the continuation: valid on the ray segment
/// `[start, end]` (radial coordinates), expanded at `center`.
struct Panel {
    start: Real,
    end: Real,
    center: Complex,
    coeffs: Vec<Complex>,
}

/// A piecewise-Taylor model of the continued Borel transform along the ray
/// `arg zeta = theta`, usable as a quadrature integrand.
pub struct ContinuedIntegrand {
    panels: Vec<Panel>,
    theta: Real,
    /// Maximal relative Taylor tail over all panels (precision tracking).
    pub tail_estimate: Real,
}

impl ContinuedIntegrand {
    /// Value at radius `rho` on the ray.
    pub fn eval(&self, ctx: &MpCtx, rho: &Real) -> Complex {
        let panel = self
            .panels
            .iter()
            .find(|p| {
                ctx.cmp(rho, &p.start) != Ordering::Less && ctx.cmp(rho, &p.end) != Ordering::Greater
            })
            .or_else(|| self.panels.last())
            .expect("at least one panel");
        let zeta = ctx.cmul_real(&ctx.unit(&self.theta), rho);
        let h = ctx.csub(&zeta, &panel.center);
        let mut acc = ctx.czero();
        for c in panel.coeffs.iter().rev() {
            acc = ctx.cadd(&ctx.cmul(&acc, &h), c);
        }
        acc
    }

    pub fn covers(&self, ctx: &MpCtx, rho: &Real) -> bool {
        self.panels
            .last()
            .map(|p| ctx.cmp(rho, &p.end) != Ordering::Greater)
            .unwrap_or(false)
    }

    pub fn start_radius(&self, _ctx: &MpCtx) -> Real {
        self.panels.first().map(|p| p.start.clone()).expect("nonempty").clone()
    }
}

/// Taylor coefficients (to order `nterms`) of the solution at `center`,
/// given the first `q` derivatives there, via the recurrence read off the
/// ODE. `p_q(center)` must be nonzero.
fn taylor_at(
    ctx: &MpCtx,
    ode: &OdePoly,
    center: &Complex,
    seed: &[Complex],
    nterms: usize,
) -> Result<Vec<Complex>, BorelError> {
    let q = ode.order();
    assert_eq!(seed.len(), q, "seed must hold y, y', ..., y^(q-1)");
    // shifted coefficients: p_i(center + h) = sum_j shifted[i][j] h^j
    let shifted: Vec<Vec<Complex>> = ode
        .coeffs
        .iter()
        .map(|p| shift_poly(ctx, p, center))
        .collect();
    let pq0 = shifted[q][0].clone();
    if ctx.is_zero(&ctx.cabs(&pq0)) {
        return Err(BorelError::StepTooClose);
    }
    // a_m = y^{(m)}(center)/m!
    let mut a: Vec<Complex> = Vec::with_capacity(nterms);
    let mut fact = ctx.one();
    for (m, s) in seed.iter().enumerate() {
        if m > 0 {
            fact = ctx.mul(&fact, &ctx.from_i64(m as i64));
        }
        a.push(ctx.cdiv(s, &ctx.creal(fact.clone())));
    }
    // coefficient of h^s in sum_i p_i y^{(i)}:
    //   sum_i sum_{j+m=s} shifted[i][j] * a_{m+i} * ff(m+i, i)
    // solves for a_{s+q}
    for s in 0..nterms.saturating_sub(q) {
        let mut rhs = ctx.czero();
        for (i, pi) in shifted.iter().enumerate() {
            for (j, pij) in pi.iter().enumerate() {
                if j > s {
                    break;
                }
                let m = s - j;
                if i == q && j == 0 {
                    continue; // the unknown a_{s+q} term
                }
                let idx = m + i;
                if idx >= a.len() {
                    continue;
                }
                let ff = falling(ctx, (m + i) as i64, i as i64);
                rhs = ctx.cadd(&rhs, &ctx.cmul(pij, &ctx.cmul_real(&a[idx], &ff)));
            }
        }
        let ff = falling(ctx, (s + q) as i64, q as i64);
        let den = ctx.cmul_real(&pq0, &ff);
        a.push(ctx.cneg(&ctx.cdiv(&rhs, &den)));
    }
    Ok(a)
}

fn shift_poly(ctx: &MpCtx, p: &[GRat], center: &Complex) -> Vec<Complex> {
    // p(center + h) by repeated synthetic division: each pass divides by
    // (x - center), the remainder is the next Taylor coefficient, and the
    // quotient stays in work[0..len-1] (the top slot becomes zero)
    let mut work: Vec<Complex> = p.iter().map(|c| ctx.from_grat(c)).collect();
    let n = work.len();
    let mut out = vec![ctx.czero(); n];
    for slot in out.iter_mut() {
        let mut rem = ctx.czero();
        for k in (0..work.len()).rev() {
            let t = ctx.cadd(&ctx.cmul(&rem, center), &work[k]);
            work[k] = rem.clone();
            rem = t;
        }
        *slot = rem;
        work.pop();
        if work.is_empty() {
            break;
        }
    }
    out
}

fn falling(ctx: &MpCtx, top: i64, count: i64) -> Real {
    let mut acc = ctx.one();
    for j in 0..count {
        acc = ctx.mul(&acc, &ctx.from_i64(top - j));
    }
    acc
}

/// [OP] Continue the series `sum_l c_l zeta^l` (the seed Taylor
/// coefficients at 0 of the Borel transform; integer exponents required)
/// along the ray `arg zeta = theta` up to radius `r_max`, stepping at most
/// half the distance to the nearest finite singularity of the ODE.
pub fn ode_continue(
    ctx: &MpCtx,
    ode: &OdePoly,
    seed_coeffs: &[Complex],
    theta: &Real,
    r_max: &Real,
) -> Result<ContinuedIntegrand, BorelError> {
    let q = ode.order();
    let sing = ode.singularities(ctx);
    let dir = ctx.unit(theta);

    // radius of convergence of the seed: nearest nonzero singularity
    let mut conv: Option<Real> = None;
    for s in &sing {
        let m = ctx.cabs(s);
        if m.is_zero() {
            continue;
        }
        if conv.as_ref().map_or(true, |c| ctx.cmp(&m, c) == Ordering::Less) {
            conv = Some(m);
        }
    }
    let conv = conv.ok_or_else(|| {
        BorelError::Unsupported("ODE has no finite nonzero singularity; seed radius unknown".into())
    })?;
    let quarter = ctx.from_rat(&crate::exactla::rat(1, 4));
    let rho0 = ctx.mul(&conv, &quarter);

    // check the seed series has converged at rho0: tail of the last terms
    let l = seed_coeffs.len();
    if l < 8 {
        return Err(BorelError::SeedNotConverged);
    }
    let mut tail = ctx.zero();
    for c in &seed_coeffs[l - 4..] {
        tail = ctx.add(&tail, &ctx.cabs(c));
    }
    tail = ctx.mul(&tail, &ctx.powi(&rho0, (l - 4) as i64));
    let head: Real = ctx.add(&ctx.cabs(&seed_coeffs[0]), &ctx.one());
    let budget = ctx.mul(&head, &ctx.eps(ctx.prec.saturating_sub(16)));
    if ctx.cmp(&tail, &budget) == Ordering::Greater {
        return Err(BorelError::SeedNotConverged);
    }

    // seed derivatives at rho0 * e^{i theta}
    let z0 = ctx.cmul_real(&dir, &rho0);
    let mut seed = Vec::with_capacity(q);
    for der in 0..q {
        let mut acc = ctx.czero();
        for (lidx, c) in seed_coeffs.iter().enumerate().skip(der) {
            let ff = falling(ctx, lidx as i64, der as i64);
            let term = ctx.cmul_real(&ctx.cmul(c, &ctx.cpowi(&z0, (lidx - der) as i64)), &ff);
            acc = ctx.cadd(&acc, &term);
        }
        seed.push(acc);
    }

    let nterms = ctx.prec / 2 + 48;
    let mut panels: Vec<Panel> = Vec::new();
    let mut tail_estimate = ctx.zero();
    let mut rho = rho0.clone();
    let mut derivs = seed;
    let min_step = ctx.mul(&conv, &ctx.eps(24));

    while ctx.cmp(&rho, r_max) == Ordering::Less {
        let center = ctx.cmul_real(&dir, &rho);
        // distance to nearest singularity
        let mut dist: Option<Real> = None;
        for s in &sing {
            let m = ctx.cabs(&ctx.csub(&center, s));
            if dist.as_ref().map_or(true, |d| ctx.cmp(&m, d) == Ordering::Less) {
                dist = Some(m);
            }
        }
        let dist = dist.expect("nonempty singularity list");
        let step = {
            let mut h = ctx.div(&dist, &ctx.from_i64(2));
            // do not bother with steps beyond the remaining range
            let remaining = ctx.sub(r_max, &rho);
            if ctx.cmp(&h, &remaining) == Ordering::Greater {
                h = remaining;
            }
            h
        };
        if ctx.cmp(&step, &min_step) == Ordering::Less {
            return Err(BorelError::StepTooClose);
        }
        let coeffs = taylor_at(ctx, ode, &center, &derivs, nterms)?;
        // Taylor tail estimate at the panel edge |h| = step: the last few
        // terms |a_m| step^m, doubled for the geometric remainder
        let mut est = ctx.zero();
        for (m, c) in coeffs.iter().enumerate().skip(nterms.saturating_sub(8)) {
            est = ctx.add(&est, &ctx.mul(&ctx.cabs(c), &ctx.powi(&step, m as i64)));
        }
        est = ctx.mul(&est, &ctx.from_i64(2));
        if ctx.cmp(&est, &tail_estimate) == Ordering::Greater {
            tail_estimate = est;
        }
        let next_rho = ctx.add(&rho, &step);
        panels.push(Panel {
            start: rho.clone(),
            end: next_rho.clone(),
            center: center.clone(),
            coeffs: coeffs.clone(),
        });
        // derivatives at the next center from the current panel
        let h = ctx.cmul_real(&dir, &step);
        derivs = (0..q)
            .map(|der| {
                let mut acc = ctx.czero();
                for (m, c) in coeffs.iter().enumerate().skip(der) {
                    let ff = falling(ctx, m as i64, der as i64);
                    acc = ctx.cadd(
                        &acc,
                        &ctx.cmul_real(&ctx.cmul(c, &ctx.cpowi(&h, (m - der) as i64)), &ff),
                    );
                }
                acc
            })
            .collect();
        rho = next_rho;
    }
    Ok(ContinuedIntegrand { panels, theta: theta.clone(), tail_estimate })
}
