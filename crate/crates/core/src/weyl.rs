//! Differential operators on `n` or `n+1` variables: Weyl-algebra
//! arithmetic in normal form, system generators, the Fourier transform in
//! the last variable, initial forms, and exact operator application to
//! truncated series.
//!
//! Operators are stored as `sum c . x^a d^b` with all `x` to the left of
//! all `d` in every term; products are renormalized through the one-
//! variable identity `d^p x^q = sum_k C(p,k) C(q,k) k! x^{q-k} d^{p-k}`.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::exactla::{ConfigMatrix, GRat, Int, Rat};
use crate::series::TruncatedSeries;

pub type TermKey = (Vec<u32>, Vec<u32>);

/// An element of the Weyl algebra in `nvars` variables.
#[derive(Clone, PartialEq, Eq)]
pub struct WeylOperator {
    pub nvars: usize,
    pub terms: BTreeMap<TermKey, GRat>,
}

impl std::fmt::Debug for WeylOperator {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|((a, b), c)| {
                let mut s = format!("({c})");
                for (i, &e) in a.iter().enumerate() {
                    if e > 0 {
                        s.push_str(&format!("*x{}^{}", i + 1, e));
                    }
                }
                for (i, &e) in b.iter().enumerate() {
                    if e > 0 {
                        s.push_str(&format!("*d{}^{}", i + 1, e));
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl WeylOperator {
    pub fn zero(nvars: usize) -> Self {
        WeylOperator { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: GRat) -> Self {
        let mut op = Self::zero(nvars);
        if !c.is_zero() {
            op.terms.insert((vec![0; nvars], vec![0; nvars]), c);
        }
        op
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, GRat::one())
    }

    /// The coordinate operator `x_i`.
    pub fn x(nvars: usize, i: usize) -> Self {
        let mut a = vec![0; nvars];
        a[i] = 1;
        Self::monomial(nvars, a, vec![0; nvars], GRat::one())
    }

    /// The partial derivative `d_i`.
    pub fn d(nvars: usize, i: usize) -> Self {
        let mut b = vec![0; nvars];
        b[i] = 1;
        Self::monomial(nvars, vec![0; nvars], b, GRat::one())
    }

    /// The Euler operator `theta_i = x_i d_i`.
    pub fn theta(nvars: usize, i: usize) -> Self {
        let mut a = vec![0; nvars];
        let mut b = vec![0; nvars];
        a[i] = 1;
        b[i] = 1;
        Self::monomial(nvars, a, b, GRat::one())
    }

    pub fn monomial(nvars: usize, a: Vec<u32>, b: Vec<u32>, c: GRat) -> Self {
        let mut op = Self::zero(nvars);
        if !c.is_zero() {
            op.terms.insert((a, b), c);
        }
        op
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn insert(&mut self, key: TermKey, c: GRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &WeylOperator) -> WeylOperator {
        assert_eq!(self.nvars, o.nvars);
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.insert(k.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &WeylOperator) -> WeylOperator {
        self.add(&o.scale(&GRat::from_int(-1)))
    }

    pub fn scale(&self, c: &GRat) -> WeylOperator {
        let mut out = WeylOperator::zero(self.nvars);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v.mul(c));
        }
        out
    }

    /// [OP] Normal-form product; `[d_i, x_i] = 1` is built in.
    pub fn multiply(&self, o: &WeylOperator) -> WeylOperator {
        assert_eq!(self.nvars, o.nvars);
        let n = self.nvars;
        let mut out = WeylOperator::zero(n);
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &o.terms {
                // reorder d^{b1} x^{a2} variable by variable
                let mut parts: Vec<Vec<(u32, u32, Int)>> = Vec::with_capacity(n);
                for i in 0..n {
                    let p = b1[i];
                    let q = a2[i];
                    let mut var = Vec::new();
                    for k in 0..=p.min(q) {
                        var.push((q - k, p - k, commutator_coeff(p, q, k)));
                    }
                    parts.push(var);
                }
                // distribute the per-variable sums
                let mut acc: Vec<(Vec<u32>, Vec<u32>, Int)> =
                    vec![(Vec::new(), Vec::new(), Int::one())];
                for var in parts {
                    let mut next = Vec::with_capacity(acc.len() * var.len());
                    for (xs, ds, c) in &acc {
                        for (xq, dp, vc) in &var {
                            let mut xs2 = xs.clone();
                            let mut ds2 = ds.clone();
                            xs2.push(*xq);
                            ds2.push(*dp);
                            next.push((xs2, ds2, c * vc));
                        }
                    }
                    acc = next;
                }
                let c12 = c1.mul(c2);
                for (xs, ds, c) in acc {
                    let a: Vec<u32> = (0..n).map(|i| a1[i] + xs[i]).collect();
                    let b: Vec<u32> = (0..n).map(|i| ds[i] + b2[i]).collect();
                    out.insert((a, b), c12.mul_rat(&Rat::from_integer(c)));
                }
            }
        }
        out
    }

    /// Maximal total derivative order.
    pub fn ord(&self) -> u32 {
        self.terms.keys().map(|(_, b)| b.iter().sum()).max().unwrap_or(0)
    }

    /// [OP] Fourier transform in the last variable:
    /// `t -> -d_t`, `d_t -> t`.
    pub fn fourier(&self) -> WeylOperator {
        self.fourier_impl(true)
    }

    /// [OP] Inverse Fourier transform: `t -> d_t`, `d_t -> -t`.
    pub fn fourier_inverse(&self) -> WeylOperator {
        self.fourier_impl(false)
    }

    fn fourier_impl(&self, forward: bool) -> WeylOperator {
        let n = self.nvars;
        let t = n - 1;
        let mut out = WeylOperator::zero(n);
        for ((a, b), c) in &self.terms {
            let p = a[t]; // powers of t
            let q = b[t]; // powers of d_t
            // image of t^p d_t^q is (sign) d_t^p t^q, reordered
            let sign_exp = if forward { p } else { q };
            let mut c = c.clone();
            if sign_exp % 2 == 1 {
                c = c.neg();
            }
            for k in 0..=p.min(q) {
                let mut na = a.clone();
                let mut nb = b.clone();
                na[t] = q - k;
                nb[t] = p - k;
                let f = commutator_coeff(p, q, k);
                out.insert((na, nb), c.mul_rat(&Rat::from_integer(f)));
            }
        }
        out
    }

    /// Terms of maximal `L_{(u,v)}`-degree (ties kept). `u + v >= 0`
    /// componentwise is required; the result is returned as an operator in
    /// normal form (read `d` as the symbol `xi` when `u + v > 0`).
    pub fn initial_terms(&self, u: &[Rat], v: &[Rat]) -> WeylOperator {
        assert_eq!(u.len(), self.nvars);
        assert_eq!(v.len(), self.nvars);
        for (ui, vi) in u.iter().zip(v) {
            assert!(!(ui + vi).is_negative(), "u + v must be nonnegative");
        }
        let mut best: Option<Rat> = None;
        for (a, b) in self.terms.keys() {
            let deg = ldeg(u, v, a, b);
            if best.as_ref().map_or(true, |m| &deg > m) {
                best = Some(deg);
            }
        }
        let mut out = WeylOperator::zero(self.nvars);
        if let Some(m) = best {
            for ((a, b), c) in &self.terms {
                if ldeg(u, v, a, b) == m {
                    out.terms.insert((a.clone(), b.clone()), c.clone());
                }
            }
        }
        out
    }

    /// Commutative Fourier transform on symbols (for initial forms):
    /// `t -> -xi_t`, `xi_t -> t`.
    pub fn symbol_fourier(&self) -> WeylOperator {
        self.symbol_fourier_impl(true)
    }

    /// `t -> xi_t`, `xi_t -> -t` on symbols.
    pub fn symbol_fourier_inverse(&self) -> WeylOperator {
        self.symbol_fourier_impl(false)
    }

    fn symbol_fourier_impl(&self, forward: bool) -> WeylOperator {
        let n = self.nvars;
        let t = n - 1;
        let mut out = WeylOperator::zero(n);
        for ((a, b), c) in &self.terms {
            let p = a[t];
            let q = b[t];
            let sign_exp = if forward { p } else { q };
            let mut c = c.clone();
            if sign_exp % 2 == 1 {
                c = c.neg();
            }
            let mut na = a.clone();
            let mut nb = b.clone();
            na[t] = q;
            nb[t] = p;
            out.insert((na, nb), c);
        }
        out
    }
}

fn ldeg(u: &[Rat], v: &[Rat], a: &[u32], b: &[u32]) -> Rat {
    let mut deg = Rat::zero();
    for i in 0..u.len() {
        deg += &u[i] * Rat::from_integer(Int::from(a[i])) + &v[i] * Rat::from_integer(Int::from(b[i]));
    }
    deg
}

/// `C(p,k) C(q,k) k! = prod_{j=0}^{k-1} (p-j)(q-j)/(j+1)`
fn commutator_coeff(p: u32, q: u32, k: u32) -> Int {
    let mut c = Int::one();
    for j in 0..k {
        c = c * Int::from(p - j) * Int::from(q - j) / Int::from(j + 1);
    }
    c
}

/// The Fourier transform of a weight vector:
/// `(u_x, u_t, v_x, v_t) -> (u_x, v_t, v_x, u_t)`.
pub fn fourier_weight(u: &[Rat], v: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let n = u.len();
    let mut nu = u.to_vec();
    let mut nv = v.to_vec();
    nu[n - 1] = v[n - 1].clone();
    nv[n - 1] = u[n - 1].clone();
    (nu, nv)
}

// ---------------------------------------------------------------------------
// System generators
// ---------------------------------------------------------------------------

/// All integer kernel vectors of `m` with `1`-norm at most `bound`, one
/// representative per `{g, -g}` pair, ordered deterministically.
pub fn kernel_vectors_bounded(rows: &[Vec<Int>], ncols: usize, bound: u32) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut g = vec![0i64; ncols];
    fn rec(
        rows: &[Vec<Int>],
        ncols: usize,
        pos: usize,
        left: i64,
        g: &mut Vec<i64>,
        out: &mut Vec<Vec<i64>>,
    ) {
        if pos == ncols {
            if g.iter().all(|&x| x == 0) {
                return;
            }
            // keep one of {g, -g}: first nonzero coordinate positive
            if g.iter().find(|&&x| x != 0).map(|&x| x < 0).unwrap_or(true) {
                return;
            }
            let ok = rows.iter().all(|r| {
                let s: Int = r.iter().zip(g.iter()).map(|(a, &x)| a * Int::from(x)).sum();
                s.is_zero()
            });
            if ok {
                out.push(g.clone());
            }
            return;
        }
        for v in -left..=left {
            g[pos] = v;
            rec(rows, ncols, pos + 1, left - v.abs(), g, out);
        }
        g[pos] = 0;
    }
    rec(rows, ncols, 0, bound as i64, &mut g, &mut out);
    out
}

/// Euler operators `sum_j m_ij x_j d_j - beta_i`, one per row.
pub fn euler_operators(m: &ConfigMatrix, beta: &[GRat]) -> Vec<WeylOperator> {
    let n = m.n();
    (0..m.d())
        .map(|i| {
            let mut op = WeylOperator::zero(n);
            for j in 0..n {
                let c = GRat::from_rat(Rat::from_integer(m.entry(i, j).clone()));
                if !c.is_zero() {
                    op = op.add(&WeylOperator::theta(n, j).scale(&c));
                }
            }
            op.sub(&WeylOperator::constant(n, beta[i].clone()))
        })
        .collect()
}

/// The binomial `d^{g_+} - d^{g_-}` for a kernel vector.
fn toric_binomial(n: usize, g: &[i64]) -> WeylOperator {
    let mut bp = vec![0u32; n];
    let mut bm = vec![0u32; n];
    for (i, &x) in g.iter().enumerate() {
        if x > 0 {
            bp[i] = x as u32;
        } else if x < 0 {
            bm[i] = (-x) as u32;
        }
    }
    let plus = WeylOperator::monomial(n, vec![0; n], bp, GRat::one());
    let minus = WeylOperator::monomial(n, vec![0; n], bm, GRat::one());
    plus.sub(&minus)
}

/// [OP] Generators of the A-hypergeometric system `H_M(beta)` for an
/// arbitrary configuration matrix: Euler operators plus all toric
/// binomials with `1`-norm at most `degree_bound`.
pub fn gkz_generators(m: &ConfigMatrix, beta: &[GRat], degree_bound: u32) -> Vec<WeylOperator> {
    assert_eq!(beta.len(), m.d());
    let mut gens = euler_operators(m, beta);
    for g in kernel_vectors_bounded(m.rows(), m.n(), degree_bound) {
        gens.push(toric_binomial(m.n(), &g));
    }
    gens
}

/// [OP] Generators of the modified system `H_{A,w,alpha}(beta)` in the
/// `n+1` variables `(x, t)`: the `A`-Euler operators, the weight Euler
/// operator `sum w_j x_j d_j - t d_t - alpha`, and the binomials
/// `d^{u} t^{u_{n+1}} - d^{v} t^{v_{n+1}}` over the kernel of `Atilde(w)`.
pub fn modified_generators(
    a: &ConfigMatrix,
    w: &[Int],
    alpha: &GRat,
    beta: &[GRat],
    degree_bound: u32,
) -> Vec<WeylOperator> {
    let n = a.n();
    let nv = n + 1;
    let mut gens = Vec::new();
    for i in 0..a.d() {
        let mut op = WeylOperator::zero(nv);
        for j in 0..n {
            let c = GRat::from_rat(Rat::from_integer(a.entry(i, j).clone()));
            if !c.is_zero() {
                op = op.add(&WeylOperator::theta(nv, j).scale(&c));
            }
        }
        gens.push(op.sub(&WeylOperator::constant(nv, beta[i].clone())));
    }
    let mut wop = WeylOperator::zero(nv);
    for j in 0..n {
        let c = GRat::from_rat(Rat::from_integer(w[j].clone()));
        if !c.is_zero() {
            wop = wop.add(&WeylOperator::theta(nv, j).scale(&c));
        }
    }
    wop = wop.sub(&WeylOperator::theta(nv, n));
    gens.push(wop.sub(&WeylOperator::constant(nv, alpha.clone())));

    let atilde = a.atilde(w).expect("Atilde construction");
    for g in kernel_vectors_bounded(atilde.rows(), nv, degree_bound) {
        // x-variables contribute derivatives; the t coordinate contributes
        // plain powers of t
        let mut a1 = vec![0u32; nv];
        let mut b1 = vec![0u32; nv];
        let mut a2 = vec![0u32; nv];
        let mut b2 = vec![0u32; nv];
        for (i, &x) in g.iter().enumerate() {
            let (pos, neg) = if x > 0 { (x as u32, 0) } else { (0, (-x) as u32) };
            if i == n {
                a1[n] = pos;
                a2[n] = neg;
            } else {
                b1[i] = pos;
                b2[i] = neg;
            }
        }
        let lhs = WeylOperator::monomial(nv, a1, b1, GRat::one());
        let rhs = WeylOperator::monomial(nv, a2, b2, GRat::one());
        gens.push(lhs.sub(&rhs));
    }
    gens
}

// ---------------------------------------------------------------------------
// Application to series
// ---------------------------------------------------------------------------

/// Result of applying an operator to a truncated series: exact terms plus
/// the subset of output keys whose values are fully determined by the
/// stored truncation window.
#[derive(Clone, Debug)]
pub struct AppliedSeries {
    pub series: TruncatedSeries,
    pub certified: BTreeSet<Vec<i64>>,
}

/// [OP] Exact term-wise application: `d_i` acts on `x^c` by the field rule
/// `c x^{c-1}` with exact (possibly complex-rational, non-integer)
/// exponents.
///
/// An output key is certified when, for every term of `P`, its preimage
/// key either lies inside the stored window or provably outside the full
/// support of the series.
pub fn apply(p: &WeylOperator, f: &TruncatedSeries) -> AppliedSeries {
    assert_eq!(p.nvars, f.nvars, "operator and series variable counts differ");
    let n = f.nvars;
    let mut terms: BTreeMap<Vec<i64>, GRat> = BTreeMap::new();
    let mut touched: BTreeSet<Vec<i64>> = BTreeSet::new();

    for ((a, b), c) in &p.terms {
        for (key, coeff) in &f.terms {
            // d^b on x^(base+key): falling factorial per coordinate
            let mut factor = c.mul(coeff);
            for i in 0..n {
                if b[i] > 0 {
                    let e = f.base[i].add_int(key[i]);
                    factor = factor.mul(&crate::series::pochhammer(&e, b[i] as u64));
                    if factor.is_zero() {
                        break;
                    }
                }
            }
            let nk: Vec<i64> =
                (0..n).map(|i| key[i] + a[i] as i64 - b[i] as i64).collect();
            touched.insert(nk.clone());
            if factor.is_zero() {
                continue;
            }
            let entry = terms.entry(nk).or_insert_with(GRat::zero);
            *entry = entry.add(&factor);
        }
    }
    terms.retain(|_, c| !c.is_zero());

    // certification pass over every touched key (and any key near the
    // window an operator term could have written to)
    let mut certified = BTreeSet::new();
    if f.support.is_some() {
        for key in touched {
            let ok = p.terms.keys().all(|(a, b)| {
                let pre: Vec<i64> =
                    (0..n).map(|i| key[i] - a[i] as i64 + b[i] as i64).collect();
                match f.in_full_support(&pre) {
                    Some(false) => true,
                    Some(true) => f.stored_region_contains(&pre),
                    None => false,
                }
            });
            if ok {
                certified.insert(key);
            }
        }
    }

    let shrink = p.ord() as i64;
    let trunc = crate::series::Truncation::new(
        (f.truncation.t_order - shrink).max(0),
        (f.truncation.x_degree - shrink).max(0),
    );
    AppliedSeries {
        series: TruncatedSeries {
            nvars: n,
            base: f.base.clone(),
            terms,
            truncation: trunc,
            region: crate::series::Region { l1: None, caps: Vec::new() },
            support: None,
        },
        certified,
    }
}

// ---------------------------------------------------------------------------
// Annihilation report
// ---------------------------------------------------------------------------

/// Residues of one generator applied to a series.
#[derive(Clone, Debug)]
pub struct GeneratorReport {
    pub generator: WeylOperator,
    /// Nonzero coefficients at certified keys; empty for a true solution.
    pub residues: Vec<(Vec<i64>, GRat)>,
    pub certified_keys: usize,
}

#[derive(Clone, Debug)]
pub struct AnnihilationReport {
    pub per_generator: Vec<GeneratorReport>,
}

impl AnnihilationReport {
    pub fn all_zero(&self) -> bool {
        self.per_generator.iter().all(|g| g.residues.is_empty())
    }

    pub fn total_certified(&self) -> usize {
        self.per_generator.iter().map(|g| g.certified_keys).sum()
    }
}

/// [OP] Apply every generator and collect the certified nonzero residues.
pub fn annihilation_report(gens: &[WeylOperator], f: &TruncatedSeries) -> AnnihilationReport {
    let per_generator = gens
        .iter()
        .map(|p| {
            let applied = apply(p, f);
            let residues: Vec<(Vec<i64>, GRat)> = applied
                .certified
                .iter()
                .filter_map(|k| applied.series.terms.get(k).map(|c| (k.clone(), c.clone())))
                .collect();
            GeneratorReport {
                generator: p.clone(),
                residues,
                certified_keys: applied.certified.len(),
            }
        })
        .collect();
    AnnihilationReport { per_generator }
}
