//! Quadrature at working precision: Gauss-Legendre panels (adaptive
//! bisection) and tanh-sinh for endpoint-singular integrands.

use std::cmp::Ordering;

use super::mp::{Complex, MpCtx, Real};

/// Value plus a quadrature error estimate (difference of nested rules or
/// successive levels).
#[derive(Clone, Debug)]
pub struct QuadOutcome {
    pub value: Complex,
    pub error: Real,
    pub evaluations: usize,
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`, by Newton refinement of
/// `P_n` roots from double-precision seeds.
pub fn gauss_legendre(ctx: &MpCtx, n: usize) -> Vec<(Real, Real)> {
    let mut out = Vec::with_capacity(n);
    let two = ctx.from_i64(2);
    for i in 0..(n + 1) / 2 {
        let seed = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut x = ctx.from_f64(seed);
        let eps = ctx.eps(ctx.prec - 8);
        for _ in 0..64 {
            let (p, dp) = legendre_eval(ctx, n, &x);
            let dx = ctx.div(&p, &dp);
            x = ctx.sub(&x, &dx);
            if ctx.cmp(&ctx.abs(&dx), &eps) != Ordering::Greater {
                break;
            }
        }
        let (_, dp) = legendre_eval(ctx, n, &x);
        let one_minus = ctx.sub(&ctx.one(), &ctx.mul(&x, &x));
        let w = ctx.div(&two, &ctx.mul(&one_minus, &ctx.mul(&dp, &dp)));
        out.push((x.clone(), w.clone()));
        if !x.is_zero() {
            out.push((x.neg(), w));
        }
    }
    out.truncate(n);
    out
}

fn legendre_eval(ctx: &MpCtx, n: usize, x: &Real) -> (Real, Real) {
    let mut p0 = ctx.one();
    let mut p1 = x.clone();
    if n == 0 {
        return (p0, ctx.zero());
    }
    for k in 1..n {
        let a = ctx.from_i64(2 * k as i64 + 1);
        let b = ctx.from_i64(k as i64);
        let c = ctx.from_i64(k as i64 + 1);
        let next = ctx.div(&ctx.sub(&ctx.mul(&ctx.mul(&a, x), &p1), &ctx.mul(&b, &p0)), &c);
        p0 = p1;
        p1 = next;
    }
    // P'_n = n (x P_n - P_{n-1}) / (x^2 - 1)
    let num = ctx.mul(&ctx.from_i64(n as i64), &ctx.sub(&ctx.mul(x, &p1), &p0));
    let den = ctx.sub(&ctx.mul(x, x), &ctx.one());
    (p1.clone(), ctx.div(&num, &den))
}

fn gl_panel<F: Fn(&Real) -> Complex>(
    ctx: &MpCtx,
    f: &F,
    a: &Real,
    b: &Real,
    nodes: &[(Real, Real)],
) -> Complex {
    let two = ctx.from_i64(2);
    let mid = ctx.div(&ctx.add(a, b), &two);
    let half = ctx.div(&ctx.sub(b, a), &two);
    let mut acc = ctx.czero();
    for (x, w) in nodes {
        let point = ctx.add(&mid, &ctx.mul(&half, x));
        let v = f(&point);
        acc = ctx.cadd(&acc, &ctx.cmul_real(&v, w));
    }
    ctx.cmul_real(&acc, &half)
}

/// Adaptive Gauss-Legendre with nested 16/32-point rules and panel
/// bisection.
pub fn adaptive_gauss_legendre<F: Fn(&Real) -> Complex>(
    ctx: &MpCtx,
    f: &F,
    a: &Real,
    b: &Real,
    tol: &Real,
    max_depth: usize,
) -> QuadOutcome {
    let lo = gauss_legendre(ctx, 16);
    let hi = gauss_legendre(ctx, 32);
    let mut value = ctx.czero();
    let mut error = ctx.zero();
    let mut evals = 0usize;
    let mut stack = vec![(a.clone(), b.clone(), 0usize)];
    while let Some((pa, pb, depth)) = stack.pop() {
        let coarse = gl_panel(ctx, f, &pa, &pb, &lo);
        let fine = gl_panel(ctx, f, &pa, &pb, &hi);
        evals += 48;
        let diff = ctx.cabs(&ctx.csub(&fine, &coarse));
        if depth >= max_depth || ctx.cmp(&diff, tol) != Ordering::Greater {
            value = ctx.cadd(&value, &fine);
            error = ctx.add(&error, &diff);
        } else {
            let mid = ctx.div(&ctx.add(&pa, &pb), &ctx.from_i64(2));
            stack.push((pa, mid.clone(), depth + 1));
            stack.push((mid, pb, depth + 1));
        }
    }
    QuadOutcome { value, error, evaluations: evals }
}

/// tanh-sinh quadrature on `[a, b]`; robust when the integrand has an
/// integrable singularity at an endpoint.
///
/// The integrand receives `(x, x - a, b - x)`, with the distances computed
/// cancellation-free so that endpoint singularities can be evaluated
/// accurately far below the working-precision ulp of `x` itself.
/// `sing_strength` is a lower bound on `1 + gamma` for the worst endpoint
/// behavior `dist^gamma` of the integrand (1 for a bounded integrand); it
/// controls how deep into the endpoints the node tail must reach.
pub fn tanh_sinh<F: Fn(&Real, &Real, &Real) -> Complex>(
    ctx: &MpCtx,
    f: &F,
    a: &Real,
    b: &Real,
    tol: &Real,
    max_level: usize,
    sing_strength: f64,
) -> QuadOutcome {
    let strength = sing_strength.clamp(0.05, 1.0);
    let two = ctx.from_i64(2);
    let len = ctx.sub(b, a);
    let pi_half = {
        let mut p = ctx.pi();
        p.set_exponent(p.exponent().unwrap() - 1);
        p
    };
    // a node of weight w contributes about w^strength near a singular
    // endpoint; cut the tail where that drops below 2^-(prec+32)
    let tiny = ctx.eps(((ctx.prec + 32) as f64 / strength).ceil() as usize);
    let u_max = ((ctx.prec as f64 + 32.0) * std::f64::consts::LN_2 * 2.0
        / (std::f64::consts::PI * strength))
        .ln()
        + 1.0;
    let mut evals = 0usize;

    // at u: s = (pi/2) sinh u, x - a = len/(1+e^{-2s}), b - x = len/(1+e^{2s}),
    // w = len/2 * (pi/2) cosh u / cosh^2 s
    let eval_node = |u: &Real, acc: &mut Complex, evals: &mut usize| -> Real {
        let eu = ctx.exp(u);
        let emu = ctx.div(&ctx.one(), &eu);
        let sinh_u = ctx.div(&ctx.sub(&eu, &emu), &two);
        let cosh_u = ctx.div(&ctx.add(&eu, &emu), &two);
        let s = ctx.mul(&pi_half, &sinh_u);
        let es = ctx.exp(&s);
        let ems = ctx.div(&ctx.one(), &es);
        let cosh_s = ctx.div(&ctx.add(&es, &ems), &two);
        let dist_a = ctx.div(&len, &ctx.add(&ctx.one(), &ctx.mul(&ems, &ems)));
        let dist_b = ctx.div(&len, &ctx.add(&ctx.one(), &ctx.mul(&es, &es)));
        let w = ctx.div(
            &ctx.mul(&ctx.div(&len, &two), &ctx.mul(&pi_half, &cosh_u)),
            &ctx.mul(&cosh_s, &cosh_s),
        );
        if ctx.cmp(&w, &tiny) == Ordering::Greater && !dist_a.is_zero() && !dist_b.is_zero() {
            let x = ctx.add(a, &dist_a);
            let v = f(&x, &dist_a, &dist_b);
            *evals += 1;
            *acc = ctx.cadd(acc, &ctx.cmul_real(&v, &w));
        }
        w
    };

    // level 0: h = 1
    let mut h = ctx.one();
    let mut sum = ctx.czero();
    {
        let mut j = 0i64;
        while (j as f64) <= u_max {
            let u = ctx.from_i64(j);
            eval_node(&u, &mut sum, &mut evals);
            if j > 0 {
                eval_node(&u.neg(), &mut sum, &mut evals);
            }
            j += 1;
        }
    }
    let mut prev = ctx.cmul_real(&sum, &h);
    let mut error = ctx.cabs(&prev);

    for _level in 1..=max_level {
        h = ctx.div(&h, &two);
        let hf = ctx.to_f64(&h);
        let mut j = 1i64;
        while (j as f64) * hf <= u_max {
            let u = ctx.mul(&ctx.from_i64(j), &h);
            eval_node(&u, &mut sum, &mut evals);
            eval_node(&u.neg(), &mut sum, &mut evals);
            j += 2;
        }
        let cur = ctx.cmul_real(&sum, &h);
        error = ctx.cabs(&ctx.csub(&cur, &prev));
        prev = cur;
        if ctx.cmp(&error, tol) != Ordering::Greater {
            break;
        }
    }
    QuadOutcome { value: prev, error, evaluations: evals }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> MpCtx {
        MpCtx::new(192)
    }

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        let c = ctx();
        let nodes = gauss_legendre(&c, 16);
        // integral of x^k on [-1,1]
        for k in [0usize, 2, 8, 20] {
            let mut acc = c.zero();
            for (x, w) in &nodes {
                acc = c.add(&acc, &c.mul(w, &c.powi(x, k as i64)));
            }
            let expect = c.from_rat(&crate::exactla::rat(2, k as i64 + 1));
            let diff = c.abs(&c.sub(&acc, &expect));
            assert!(c.cmp(&diff, &c.eps(160)) != Ordering::Greater, "k = {k}");
        }
    }

    #[test]
    fn adaptive_gl_exponential() {
        // integral_0^10 e^-x dx = 1 - e^-10
        let c = ctx();
        let f = |x: &Real| c.creal(c.exp(&x.neg()));
        let out = adaptive_gauss_legendre(&c, &f, &c.zero(), &c.from_i64(10), &c.eps(170), 24);
        let expect = c.sub(&c.one(), &c.exp(&c.from_i64(-10)));
        let diff = c.abs(&c.sub(&out.value.re, &expect));
        assert!(c.cmp(&diff, &c.eps(150)) != Ordering::Greater, "diff {}", c.decimal(&diff));
    }

    #[test]
    fn tanh_sinh_endpoint_singularity() {
        // integral_0^1 x^{-1/2} dx = 2, using the cancellation-free
        // endpoint distance
        let c = ctx();
        let f = |_x: &Real, da: &Real, _db: &Real| c.creal(c.div(&c.one(), &c.sqrt(da)));
        let out = tanh_sinh(&c, &f, &c.zero(), &c.one(), &c.eps(170), 10, 0.5);
        let diff = c.abs(&c.sub(&out.value.re, &c.from_i64(2)));
        assert!(c.cmp(&diff, &c.eps(150)) != Ordering::Greater, "diff {}", c.decimal(&diff));
    }

    #[test]
    fn quadratures_agree_on_oscillatory_complex() {
        // integral_0^4 e^{ix} dx = (e^{4i} - 1)/i, two independent routes
        let c = ctx();
        let f1 = |x: &Real| c.unit(x);
        let f2 = |x: &Real, _: &Real, _: &Real| c.unit(x);
        let tol = c.eps(150);
        let a = adaptive_gauss_legendre(&c, &f1, &c.zero(), &c.from_i64(4), &tol, 24);
        let b = tanh_sinh(&c, &f2, &c.zero(), &c.from_i64(4), &tol, 10, 1.0);
        let diff = c.cabs(&c.csub(&a.value, &b.value));
        assert!(c.cmp(&diff, &c.eps(130)) != Ordering::Greater, "diff {}", c.decimal(&diff));
        let i = c.complex(c.zero(), c.one());
        let expect = c.cdiv(&c.csub(&c.cexp(&c.cmul(&i, &c.creal(c.from_i64(4)))), &c.cone()), &i);
        let diff = c.cabs(&c.csub(&a.value, &expect));
        assert!(c.cmp(&diff, &c.eps(130)) != Ordering::Greater);
    }
}
