//! Gamma-series `phi_v`, modified series `psi_v`, exponent enumeration,
//! Gevrey indices, solution counts, and the `Upsilon_gamma` construction of
//! solutions modulo convergent series.
//!
//! A truncated series stores finitely many exact coefficients keyed by
//! integer exponent offsets from a fixed (possibly complex-rational) base
//! exponent. Each series also carries an exact description of its full
//! (untruncated) support, so that operator application can certify which
//! output coefficients are trustworthy.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use thiserror::Error;

use crate::exactla::{
    coordinate_sum, lattice_representatives, rati, simplex_kernel_matrix, ConfigMatrix,
    ExactlaError, GRat, Int, Rat, Simplex,
};
use crate::geometry::{
    perturb_weight, pyramid_volume, regular_triangulation, GeometryError, StagedWeights,
    Triangulation, DEFAULT_TIE_BREAK,
};
use crate::slopes::{modified_slopes_along_t, slopes_at_infinity, SlopesError};

#[derive(Debug, Error)]
pub enum SeriesError {
    #[error("coefficient denominator vanishes: the negative support changed under the shift")]
    ZeroDenominator,
    #[error("enumerated support point has negative t-exponent {0}; v is not an exponent for w")]
    NegativeTExponent(i64),
    #[error("Upsilon_gamma is not invertible for gamma = {0} in Z_<0")]
    NonInvertibleGamma(GRat),
    #[error("no modified slope along T: nothing to construct")]
    NoSlope,
    #[error("simplex {sigma:?} is not contained in any witnessing facet of the slope report")]
    NotInWitnessFacet { sigma: Vec<usize> },
    #[error("exponent enumeration exhausted before {needed} class representatives were found")]
    EnumerationExhausted { needed: u64 },
    #[error(transparent)]
    Exact(#[from] ExactlaError),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Slopes(#[from] SlopesError),
}

// ---------------------------------------------------------------------------
// Pochhammer
// ---------------------------------------------------------------------------

/// [OP] The (falling) Pochhammer symbol `[c]_k = prod_{j=1}^{k} (c - j + 1)`.
pub fn pochhammer(c: &GRat, k: u64) -> GRat {
    let mut acc = GRat::one();
    for j in 0..k {
        acc = acc.mul(&c.add_int(-(j as i64)));
    }
    acc
}

/// `[v]_u = prod_i [v_i]_{u_i}` for a nonnegative integer multi-index.
pub fn pochhammer_multi(v: &[GRat], u: &[u64]) -> GRat {
    let mut acc = GRat::one();
    for (vi, &ui) in v.iter().zip(u) {
        if ui > 0 {
            acc = acc.mul(&pochhammer(vi, ui));
        }
    }
    acc
}

/// Negative support: coordinates lying in `Z_{<0}`.
pub fn negative_support(v: &[GRat]) -> BTreeSet<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| x.is_negative_integer())
        .map(|(i, _)| i)
        .collect()
}

// ---------------------------------------------------------------------------
// Exponents
// ---------------------------------------------------------------------------

/// A series starting exponent `v` with `A v = beta`, optionally remembering
/// the simplex and lattice point it was built from.
#[derive(Clone, Debug)]
pub struct Exponent {
    pub v: Vec<GRat>,
    pub origin: Option<SeriesOrigin>,
    pub nsupp: BTreeSet<usize>,
}

#[derive(Clone, Debug)]
pub struct SeriesOrigin {
    pub sigma: Simplex,
    /// Off-sigma coordinates of `v`, in increasing column order.
    pub k: Vec<Int>,
}

impl Exponent {
    pub fn from_vector(v: Vec<GRat>) -> Self {
        let nsupp = negative_support(&v);
        Exponent { v, origin: None, nsupp }
    }

    /// The exponent `v^k`: `v_i = k_i` off `sigma` and
    /// `v_sigma = A_sigma^{-1}(beta - sum_i k_i a_i)`.
    pub fn from_simplex(a: &ConfigMatrix, sigma: &Simplex, beta: &[GRat], k: &[Int]) -> Self {
        let complement: Vec<usize> = (0..a.n()).filter(|&j| !sigma.contains(j)).collect();
        assert_eq!(k.len(), complement.len(), "one k per off-sigma column");
        let mut rhs = beta.to_vec();
        for (&j, kj) in complement.iter().zip(k) {
            for (i, r) in rhs.iter_mut().enumerate() {
                let shift = GRat::from_rat(Rat::from_integer(a.entry(i, j) * kj));
                *r = r.sub(&shift);
            }
        }
        let sigma_part = sigma.inv_times_grat(&rhs);
        let mut v = vec![GRat::zero(); a.n()];
        for (pos, &j) in sigma.indices().iter().enumerate() {
            v[j] = sigma_part[pos].clone();
        }
        for (&j, kj) in complement.iter().zip(k) {
            v[j] = GRat::from_rat(Rat::from_integer(kj.clone()));
        }
        let nsupp = negative_support(&v);
        Exponent { v, origin: Some(SeriesOrigin { sigma: sigma.clone(), k: k.to_vec() }), nsupp }
    }
}

// ---------------------------------------------------------------------------
// Truncated series
// ---------------------------------------------------------------------------

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Truncation {
    pub t_order: i64,
    pub x_degree: i64,
}

impl Truncation {
    pub fn new(t_order: i64, x_degree: i64) -> Self {
        Truncation { t_order, x_degree }
    }
}

/// Exact description of the full (untruncated) support of a series:
/// integer keys `u` with `rows . u = rhs`, unchanged negative support of
/// `base + u` on the first `nsupp_coords` coordinates, and any extra lower
/// bounds on single key coordinates.
#[derive(Clone, Debug)]
pub struct KernelSupport {
    pub rows: Vec<Vec<Int>>,
    pub rhs: Vec<Int>,
    pub nsupp_coords: usize,
    pub base_nsupp: BTreeSet<usize>,
    pub key_mins: Vec<(usize, i64)>,
}

/// The finite window of keys a construction enumerated and stored.
#[derive(Clone, Debug)]
pub struct Region {
    /// `sum_{c in coords} |u_c - offset_c| <= radius`
    pub l1: Option<(Vec<usize>, Vec<i64>, i64)>,
    /// inclusive `(coord, min, max)` caps
    pub caps: Vec<(usize, i64, i64)>,
}

impl Region {
    pub fn contains(&self, key: &[i64]) -> bool {
        if let Some((coords, offsets, radius)) = &self.l1 {
            let s: i64 = coords
                .iter()
                .zip(offsets)
                .map(|(&c, &o)| (key[c] - o).abs())
                .sum();
            if s > *radius {
                return false;
            }
        }
        self.caps.iter().all(|&(c, lo, hi)| key[c] >= lo && key[c] <= hi)
    }
}

/// Finitely many exact series terms, keyed by integer exponent offsets
/// from `base`. The true exponent of a term is `base + key` coordinatewise;
/// for series in `(x, t)` the last coordinate is the `t` direction and
/// `base.last()` is the `t`-exponent offset gamma.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub nvars: usize,
    pub base: Vec<GRat>,
    pub terms: BTreeMap<Vec<i64>, GRat>,
    pub truncation: Truncation,
    pub region: Region,
    pub support: Option<KernelSupport>,
}

impl TruncatedSeries {
    /// Is `key` in the full (untruncated) support? `None` when the series
    /// carries no support description.
    pub fn in_full_support(&self, key: &[i64]) -> Option<bool> {
        let sup = self.support.as_ref()?;
        for (row, r) in sup.rows.iter().zip(&sup.rhs) {
            let s: Int = row.iter().zip(key).map(|(a, &k)| a * Int::from(k)).sum();
            if &s != r {
                return Some(false);
            }
        }
        for &(c, lo) in &sup.key_mins {
            if key[c] < lo {
                return Some(false);
            }
        }
        let shifted: Vec<GRat> = self.base[..sup.nsupp_coords]
            .iter()
            .zip(key)
            .map(|(b, &k)| b.add_int(k))
            .collect();
        Some(negative_support(&shifted) == sup.base_nsupp)
    }

    pub fn stored_region_contains(&self, key: &[i64]) -> bool {
        self.region.contains(key)
    }

    /// The t-exponent offset gamma (series over `(x, t)` only).
    pub fn gamma(&self) -> &GRat {
        self.base.last().expect("nonempty base")
    }

    /// Coefficient layers by t-key, for series over `(x, t)`.
    pub fn t_layers(&self) -> BTreeMap<i64, BTreeMap<Vec<i64>, GRat>> {
        let mut out: BTreeMap<i64, BTreeMap<Vec<i64>, GRat>> = BTreeMap::new();
        for (key, c) in &self.terms {
            let m = *key.last().expect("nonempty key");
            out.entry(m).or_default().insert(key[..key.len() - 1].to_vec(), c.clone());
        }
        out
    }

    fn grat_json(c: &GRat) -> Value {
        if c.is_real() {
            json!(c.re.to_string())
        } else {
            json!([c.re.to_string(), c.im.to_string()])
        }
    }

    fn grat_from_json(v: &Value) -> Option<GRat> {
        fn parse_rat(s: &str) -> Option<Rat> {
            s.parse().ok()
        }
        match v {
            Value::String(s) => Some(GRat::from_rat(parse_rat(s)?)),
            Value::Array(a) if a.len() == 2 => Some(GRat::new(
                parse_rat(a[0].as_str()?)?,
                parse_rat(a[1].as_str()?)?,
            )),
            _ => None,
        }
    }

    /// Wire format: base exponent, gamma, and one record per term.
    pub fn to_json(&self) -> Value {
        let nx = if self.nvars > 0 { self.nvars - 1 } else { 0 };
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let (u, m) = if self.nvars > nx { (&k[..nx], k[nx]) } else { (&k[..], 0) };
                json!({"u": u, "m": m, "coeff": Self::grat_json(c)})
            })
            .collect();
        json!({
            "nvars": self.nvars,
            "v": self.base.iter().map(Self::grat_json).collect::<Vec<_>>(),
            "gamma": Self::grat_json(self.gamma()),
            "t_order": self.truncation.t_order,
            "x_degree": self.truncation.x_degree,
            "terms": terms,
        })
    }

    /// Parse the wire format back (support metadata is not round-tripped).
    pub fn from_json(v: &Value) -> Option<TruncatedSeries> {
        let nvars = v.get("nvars")?.as_u64()? as usize;
        let base: Vec<GRat> = v
            .get("v")?
            .as_array()?
            .iter()
            .map(Self::grat_from_json)
            .collect::<Option<_>>()?;
        let t_order = v.get("t_order")?.as_i64()?;
        let x_degree = v.get("x_degree")?.as_i64()?;
        let mut terms = BTreeMap::new();
        for t in v.get("terms")?.as_array()? {
            let u: Vec<i64> = t
                .get("u")?
                .as_array()?
                .iter()
                .map(|x| x.as_i64())
                .collect::<Option<_>>()?;
            let m = t.get("m")?.as_i64()?;
            let coeff = Self::grat_from_json(t.get("coeff")?)?;
            let mut key = u;
            if key.len() + 1 == nvars {
                key.push(m);
            }
            if key.len() != nvars {
                return None;
            }
            terms.insert(key, coeff);
        }
        Some(TruncatedSeries {
            nvars,
            base,
            terms,
            truncation: Truncation::new(t_order, x_degree),
            region: Region { l1: None, caps: Vec::new() },
            support: None,
        })
    }
}

// ---------------------------------------------------------------------------
// phi_v
// ---------------------------------------------------------------------------

/// `phi_v` together with the outcome of the negative-support minimality
/// scan (`false` means the series exists but is not annihilated by the
/// hypergeometric ideal).
#[derive(Clone, Debug)]
pub struct PhiSeries {
    pub series: TruncatedSeries,
    pub minimal_negative_support: bool,
}

/// The coefficient `[v]_{u_-} / [v+u]_{u_+}` of `x^{v+u}` in `phi_v`.
pub fn phi_coefficient(v: &[GRat], u: &[i64]) -> Result<GRat, SeriesError> {
    let mut num = GRat::one();
    let mut den = GRat::one();
    for (vi, &ui) in v.iter().zip(u) {
        if ui < 0 {
            num = num.mul(&pochhammer(vi, (-ui) as u64));
        } else if ui > 0 {
            den = den.mul(&pochhammer(&vi.add_int(ui), ui as u64));
        }
    }
    if den.is_zero() {
        return Err(SeriesError::ZeroDenominator);
    }
    num.div(&den).map_err(|_| SeriesError::ZeroDenominator)
}

/// All integer vectors `m` of the given length with `sum |m_i| <= radius`.
fn l1_ball(len: usize, radius: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    fn rec(len: usize, left: i64, prefix: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if len == 0 {
            out.push(prefix.clone());
            return;
        }
        for v in -left..=left {
            prefix.push(v);
            rec(len - 1, left - v.abs(), prefix, out);
            prefix.pop();
        }
    }
    rec(len, radius, &mut Vec::new(), &mut out);
    out
}

/// A deterministic simplex used to parametrize `ker_Z(A)` when a series
/// exponent carries no origin: the lexicographically first invertible
/// column subset.
fn fallback_simplex(a: &ConfigMatrix) -> Simplex {
    let ids: Vec<usize> = (0..a.n()).collect();
    for subset in crate::exactla::subsets_of_size(&ids, a.d()) {
        if let Ok(s) = Simplex::new(a, subset) {
            return s;
        }
    }
    unreachable!("a rank-d matrix has an invertible d-subset")
}

/// Integer kernel points of `A` within lattice distance `radius` of the
/// base exponent, parametrized by their off-sigma coordinates.
fn kernel_points(a: &ConfigMatrix, sigma: &Simplex, radius: i64) -> Vec<Vec<i64>> {
    let complement: Vec<usize> = (0..a.n()).filter(|&j| !sigma.contains(j)).collect();
    let bcols = simplex_kernel_matrix(a, sigma);
    let mut out = Vec::new();
    for m in l1_ball(complement.len(), radius) {
        // u = sum_i m_i b_i; integrality of the sigma coordinates decides
        let mut u = vec![Rat::zero(); a.n()];
        for (bi, &mi) in bcols.iter().zip(&m) {
            if mi == 0 {
                continue;
            }
            let f = rati(mi);
            for (uc, bc) in u.iter_mut().zip(bi) {
                *uc += bc * &f;
            }
        }
        if u.iter().all(|x| x.is_integer()) {
            let key: Vec<i64> = u
                .iter()
                .map(|x| i64::try_from(x.numer()).expect("key fits in i64"))
                .collect();
            out.push(key);
        }
    }
    out
}

/// [OP] The Gamma-series `phi_v = sum_{u in N_v} [v]_{u_-}/[v+u]_{u_+} x^{v+u}`
/// truncated to the lattice ball of radius `trunc.x_degree` around `v`.
///
/// When `v` carries an origin simplex the support is enumerated through the
/// `B_sigma` cone; otherwise a deterministic fallback simplex parametrizes
/// the kernel lattice. The negative-support minimality scan runs over the
/// same window.
pub fn phi_v(a: &ConfigMatrix, v: &Exponent, trunc: Truncation) -> Result<PhiSeries, SeriesError> {
    assert_eq!(v.v.len(), a.n(), "exponent length must match column count");
    let sigma = match &v.origin {
        Some(o) => o.sigma.clone(),
        None => fallback_simplex(a),
    };
    let complement: Vec<usize> = (0..a.n()).filter(|&j| !sigma.contains(j)).collect();
    let points = kernel_points(a, &sigma, trunc.x_degree);

    let mut terms = BTreeMap::new();
    let mut minimal = true;
    for key in points {
        let shifted: Vec<GRat> = v.v.iter().zip(&key).map(|(b, &k)| b.add_int(k)).collect();
        let ns = negative_support(&shifted);
        if ns == v.nsupp {
            terms.insert(key.clone(), phi_coefficient(&v.v, &key)?);
        } else if ns.is_subset(&v.nsupp) {
            minimal = false;
        }
    }
    let region = Region {
        l1: Some((complement.clone(), vec![0; complement.len()], trunc.x_degree)),
        caps: Vec::new(),
    };
    let support = Some(KernelSupport {
        rows: a.rows().to_vec(),
        rhs: vec![Int::zero(); a.d()],
        nsupp_coords: a.n(),
        base_nsupp: v.nsupp.clone(),
        key_mins: Vec::new(),
    });
    Ok(PhiSeries {
        series: TruncatedSeries {
            nvars: a.n(),
            base: v.v.clone(),
            terms,
            truncation: trunc,
            region,
            support,
        },
        minimal_negative_support: minimal,
    })
}

// ---------------------------------------------------------------------------
// Exponents for a weight; counts; indicial roots
// ---------------------------------------------------------------------------

/// The staged triangulation used for exponent enumeration.
pub fn perturbed_triangulation(
    a: &ConfigMatrix,
    w: &[Int],
) -> Result<Triangulation, GeometryError> {
    let wr: Vec<Rat> = w.iter().map(|x| Rat::from_integer(x.clone())).collect();
    regular_triangulation(a, &perturb_weight(&wr, DEFAULT_TIE_BREAK))
}

/// [OP] The exponents of `H_A(beta)` with respect to (the staged
/// perturbation of) `w`: one `v^k` per simplex of the triangulation and
/// lattice class representative `k`.
pub fn exponents_for_weight(
    a: &ConfigMatrix,
    beta: &[GRat],
    w: &[Int],
    bound: u64,
) -> Result<Vec<Exponent>, SeriesError> {
    let tri = perturbed_triangulation(a, w)?;
    let mut out = Vec::new();
    for sigma in &tri.simplices {
        for k in lattice_representatives(a, sigma, bound)? {
            let e = Exponent::from_simplex(a, sigma, beta, &k);
            debug_assert_eq!(a.mul_grat(&e.v), beta.to_vec());
            out.push(e);
        }
    }
    Ok(out)
}

/// [OP] `sum_sigma vol(sigma)` over the perturbed-`w` triangulation; the
/// dimension of the formal solution space along `T`.
pub fn count_formal_solutions(a: &ConfigMatrix, w: &[Int]) -> Result<Int, SeriesError> {
    Ok(perturbed_triangulation(a, w)?.total_volume())
}

/// [OP] The roots of the indicial polynomial `b(s)`: the multiset
/// `{w . v}` over the exponents for `w`.
pub fn indicial_roots(
    a: &ConfigMatrix,
    w: &[Int],
    beta: &[GRat],
    bound: u64,
) -> Result<Vec<GRat>, SeriesError> {
    let exps = exponents_for_weight(a, beta, w, bound)?;
    Ok(exps.iter().map(|e| dot_int_grat(w, &e.v)).collect())
}

pub fn dot_int_grat(w: &[Int], v: &[GRat]) -> GRat {
    let mut acc = GRat::zero();
    for (wi, vi) in w.iter().zip(v) {
        acc = acc.add(&vi.mul_rat(&Rat::from_integer(wi.clone())));
    }
    acc
}

// ---------------------------------------------------------------------------
// Gevrey indices
// ---------------------------------------------------------------------------

/// [OP] Gevrey index of `phi_{v^k}` along coordinate varieties:
/// `s = max_j |A_sigma^{-1} a_j|` (coordinate sums), together with the
/// variety `Z = {x_j = 0 : |A_sigma^{-1} a_j| > 1}`.
pub fn gevrey_index_coordinate(a: &ConfigMatrix, sigma: &Simplex) -> (Rat, BTreeSet<usize>) {
    let mut s = Rat::one();
    let mut z = BTreeSet::new();
    for j in 0..a.n() {
        let sum = coordinate_sum(&sigma.inv_times_column(a, j));
        if sum > Rat::one() {
            z.insert(j);
        }
        if sum > s {
            s = sum;
        }
    }
    (s, z)
}

/// The ratios `-|b_i| / (w . b_i)` for each off-sigma column with
/// `w . b_i != 0`, where `|b_i| = 1 - |A_sigma^{-1} a_i|` and
/// `w . b_i = w_i - w_sigma A_sigma^{-1} a_i`.
pub fn gevrey_t_ratios(a: &ConfigMatrix, w: &[Int], sigma: &Simplex) -> Vec<(usize, Rat, Rat)> {
    let mut out = Vec::new();
    for j in (0..a.n()).filter(|&j| !sigma.contains(j)) {
        let coeff = sigma.inv_times_column(a, j);
        let abs_b = Rat::one() - coordinate_sum(&coeff);
        let mut w_b = Rat::from_integer(w[j].clone());
        for (pos, &si) in sigma.indices().iter().enumerate() {
            w_b -= Rat::from_integer(w[si].clone()) * &coeff[pos];
        }
        out.push((j, abs_b, w_b));
    }
    out
}

/// [OP] Gevrey index of `psi_v` along `T`: the rational
/// `r = max { -|b_i| / (w . b_i) : w . b_i > 0 }`, clamped at 0
/// (convergent) when the set is empty or the maximum is negative.
pub fn gevrey_index_t(a: &ConfigMatrix, w: &[Int], sigma: &Simplex) -> Rat {
    let mut r = Rat::zero();
    for (_, abs_b, w_b) in gevrey_t_ratios(a, w, sigma) {
        if w_b.is_positive() {
            let cand = -(abs_b / w_b);
            if cand > r {
                r = cand;
            }
        }
    }
    r
}

// ---------------------------------------------------------------------------
// psi_v
// ---------------------------------------------------------------------------

/// [OP] The modified series `psi_v = t^{-alpha} phi_v(t^w x)`, reorganized
/// as `sum_m f_m(x) t^{gamma+m}` with `gamma = w . v - alpha`.
///
/// Every enumerated support point must satisfy `w . u >= 0`; otherwise `v`
/// is not an exponent for `w` and `NegativeTExponent` is returned.
pub fn psi_v(
    a: &ConfigMatrix,
    w: &[Int],
    alpha: &GRat,
    v: &Exponent,
    trunc: Truncation,
) -> Result<TruncatedSeries, SeriesError> {
    let phi = phi_v(a, v, trunc)?.series;
    let n = a.n();
    let gamma = dot_int_grat(w, &v.v).sub(alpha);

    let mut terms = BTreeMap::new();
    for (key, coeff) in &phi.terms {
        let m: Int = w.iter().zip(key).map(|(wi, &k)| wi * Int::from(k)).sum();
        let m = i64::try_from(&m).expect("t-layer fits in i64");
        if m < 0 {
            return Err(SeriesError::NegativeTExponent(m));
        }
        if m > trunc.t_order {
            continue;
        }
        let mut full_key = key.clone();
        full_key.push(m);
        terms.insert(full_key, coeff.clone());
    }

    let mut base = v.v.clone();
    base.push(gamma);

    // support: A u = 0 (padded) plus the layer relation w . u - m = 0
    let mut rows: Vec<Vec<Int>> = a
        .rows()
        .iter()
        .map(|r| {
            let mut rr = r.clone();
            rr.push(Int::zero());
            rr
        })
        .collect();
    let mut wrow: Vec<Int> = w.to_vec();
    wrow.push(-Int::one());
    rows.push(wrow);

    let (l1_coords, l1_offsets, radius) = phi.region.l1.clone().expect("phi carries a cone region");
    Ok(TruncatedSeries {
        nvars: n + 1,
        base,
        terms,
        truncation: trunc,
        region: Region {
            l1: Some((l1_coords, l1_offsets, radius)),
            caps: vec![(n, 0, trunc.t_order)],
        },
        support: Some(KernelSupport {
            rows,
            rhs: vec![Int::zero(); a.d() + 1],
            nsupp_coords: n,
            base_nsupp: v.nsupp.clone(),
            key_mins: vec![(n, 0)],
        }),
    })
}

// ---------------------------------------------------------------------------
// Upsilon
// ---------------------------------------------------------------------------

/// [OP] `Upsilon_gamma: sum f_m t^{gamma+m} -> sum f_m [-gamma-1]_m t^{-1-gamma-m}`.
///
/// The input must be a series over `(x, t)` with nonnegative integer
/// t-keys. Invertible iff `gamma` is not a negative integer.
pub fn upsilon(f: &TruncatedSeries, gamma: &GRat) -> Result<TruncatedSeries, SeriesError> {
    let n = f.nvars - 1;
    let mut base = f.base.clone();
    // new t-offset: -1 - gamma
    base[n] = GRat::from_int(-1).sub(gamma);
    let mut terms = BTreeMap::new();
    for (key, c) in &f.terms {
        let m = key[n];
        assert!(m >= 0, "Upsilon expects nonnegative t-keys");
        let factor = pochhammer(&GRat::from_int(-1).sub(gamma), m as u64);
        let mut nk = key.clone();
        nk[n] = -m;
        terms.insert(nk, c.mul(&factor));
    }
    Ok(TruncatedSeries {
        nvars: f.nvars,
        base,
        terms,
        truncation: f.truncation,
        region: Region { l1: None, caps: Vec::new() },
        support: None,
    })
}

/// Inverse of [`upsilon`]; errors when `gamma in Z_{<0}` (a vanishing
/// `[-gamma-1]_m` makes the map non-injective).
pub fn upsilon_inverse(g: &TruncatedSeries, gamma: &GRat) -> Result<TruncatedSeries, SeriesError> {
    if gamma.is_negative_integer() {
        return Err(SeriesError::NonInvertibleGamma(gamma.clone()));
    }
    let n = g.nvars - 1;
    let mut base = g.base.clone();
    base[n] = GRat::from_int(-1).sub(gamma);
    // base of the input is -1-gamma; output offset is gamma itself
    base[n] = gamma.clone();
    let mut terms = BTreeMap::new();
    for (key, c) in &g.terms {
        let m = -key[n];
        assert!(m >= 0, "Upsilon image has nonpositive t-keys");
        let factor = pochhammer(&GRat::from_int(-1).sub(gamma), m as u64);
        if factor.is_zero() {
            return Err(SeriesError::NonInvertibleGamma(gamma.clone()));
        }
        let mut nk = key.clone();
        nk[n] = m;
        terms.insert(nk, c.div(&factor).map_err(|_| SeriesError::ZeroDenominator)?);
    }
    Ok(TruncatedSeries {
        nvars: g.nvars,
        base,
        terms,
        truncation: g.truncation,
        region: Region { l1: None, caps: Vec::new() },
        support: None,
    })
}

// ---------------------------------------------------------------------------
// Exponents at infinity and solutions modulo convergent series
// ---------------------------------------------------------------------------

/// [OP] Exponents `v^k` at `x_j = infinity`: `k_j` runs over `Z_{<0}`
/// (largest admissible first) while the other off-sigma coordinates run
/// over `N`, until `vol(sigma)` pairwise distinct lattice classes are
/// found. `sigma` must be contained in a facet witnessing a slope at
/// infinity along `x_j`.
pub fn exponents_at_infinity(
    a: &ConfigMatrix,
    beta: &[GRat],
    sigma: &Simplex,
    j: usize,
    validate: bool,
) -> Result<Vec<Exponent>, SeriesError> {
    assert!(!sigma.contains(j), "the infinity column must be off sigma");
    if validate {
        let report = slopes_at_infinity(a, j);
        let ok = report
            .slopes
            .iter()
            .flat_map(|e| &e.witnesses)
            .any(|wit| sigma.indices().iter().all(|i| wit.facet.contains(i)));
        if !ok {
            return Err(SeriesError::NotInWitnessFacet { sigma: sigma.indices().to_vec() });
        }
    }

    let complement: Vec<usize> = (0..a.n()).filter(|&c| !sigma.contains(c)).collect();
    let jpos = complement.iter().position(|&c| c == j).expect("j is off sigma");
    let needed = u64::try_from(&sigma.vol()).expect("volume fits in u64");
    let mut found: Vec<Exponent> = Vec::new();
    let mut class_points: Vec<Vec<Int>> = Vec::new();

    let same_class = |p: &[Int], q: &[Int]| -> bool {
        let diff: Vec<Rat> = p.iter().zip(q).map(|(x, y)| Rat::from_integer(x - y)).collect();
        sigma.inv_times(&diff).iter().all(|c| c.is_integer())
    };

    // k_j = -1, -2, ... outermost so the largest admissible values win
    let bound = 4 * needed as i64 + 8;
    'outer: for kj in 1..=bound {
        for grade in 0..=bound as u64 {
            for rest in crate::exactla::compositions(grade, complement.len() - 1) {
                let mut k: Vec<Int> = Vec::with_capacity(complement.len());
                let mut it = rest.into_iter();
                for pos in 0..complement.len() {
                    if pos == jpos {
                        k.push(Int::from(-kj));
                    } else {
                        k.push(it.next().expect("length checked"));
                    }
                }
                let e = Exponent::from_simplex(a, sigma, beta, &k);
                if e.nsupp != BTreeSet::from([j]) {
                    continue; // a sigma coordinate degenerated
                }
                let point: Vec<Int> = (0..a.d())
                    .map(|i| complement.iter().zip(&k).map(|(&c, kc)| a.entry(i, c) * kc).sum())
                    .collect();
                if class_points.iter().any(|p| same_class(p, &point)) {
                    continue;
                }
                class_points.push(point);
                found.push(e);
                if found.len() as u64 == needed {
                    break 'outer;
                }
            }
        }
    }
    if (found.len() as u64) < needed {
        return Err(SeriesError::EnumerationExhausted { needed });
    }
    Ok(found)
}

/// Result of the modulo-convergent construction.
#[derive(Clone, Debug)]
pub struct ModConvergentBasis {
    pub series: Vec<TruncatedSeries>,
    pub index: Rat,
    /// Facets that had to be triangulated because they were not simplices.
    pub non_simplicial_facets: Vec<BTreeSet<usize>>,
}

/// [OP] Gevrey solutions of the modified system modulo convergent series,
/// one per witnessing-facet simplex and lattice class: each is
/// `Upsilon_0^{-1}(phi_vtilde)` for an at-infinity exponent `vtilde` of the
/// extended matrix. Works on the largest modified slope when several exist.
pub fn modified_solutions_mod_convergent(
    a: &ConfigMatrix,
    w: &[Int],
    alpha: &GRat,
    beta: &[GRat],
    trunc: Truncation,
) -> Result<ModConvergentBasis, SeriesError> {
    let report = modified_slopes_along_t(a, w)?;
    let Some(entry) = report.slopes.last() else {
        return Err(SeriesError::NoSlope);
    };
    let atilde = a.atilde(w)?;
    let n = a.n();
    let mut beta_tilde: Vec<GRat> = beta.to_vec();
    beta_tilde.push(alpha.add_int(-1));

    let points = a.a_w_points(w);
    let mut series = Vec::new();
    let mut non_simplicial = Vec::new();

    for wit in &entry.witnesses {
        // triangulate the witnessing facet into (d+1)-column simplices
        let tau: Vec<usize> = wit.facet.iter().copied().collect();
        if tau.len() > a.d() + 1 {
            non_simplicial.push(wit.facet.clone());
        }
        let sub: Vec<Vec<Rat>> = tau.iter().map(|&i| points[i].clone()).collect();
        let zero = vec![Rat::zero(); tau.len()];
        let tri_weights = perturb_weight(&zero, DEFAULT_TIE_BREAK);
        let tri_weights = StagedWeights { stages: tri_weights.stages[1..].to_vec() };
        let cells = crate::geometry::weighted_cells(&sub, &tri_weights)?;
        for cell in cells {
            let global: Vec<usize> = cell.indices.iter().map(|&k| tau[k]).collect();
            if global.len() != a.d() + 1 {
                return Err(SeriesError::Geometry(GeometryError::PerturbationTies(global)));
            }
            let sigma = Simplex::new(&atilde, global)?;
            // infinity direction: the t column of Atilde
            let exps = exponents_at_infinity(&atilde, &beta_tilde, &sigma, n, false)?;
            for vtilde in exps {
                let k_t = vtilde.v[n].clone(); // -1-k
                let k_int = k_t.neg().add_int(-1); // k = -k_t - 1 >= 0
                debug_assert!(k_int.is_nonnegative_integer());
                let phi = phi_v(&atilde, &vtilde, trunc)?.series;
                series.push(mod_convergent_from_phi(a, w, &phi, &vtilde, &k_int, trunc)?);
            }
        }
    }
    Ok(ModConvergentBasis {
        series,
        index: entry.s.clone(),
        non_simplicial_facets: non_simplicial,
    })
}

/// Reindex `phi_vtilde` (a series at `t = infinity`) through
/// `Upsilon_0^{-1}` into a series `sum_m f_m(x) t^m` along `T`.
fn mod_convergent_from_phi(
    a: &ConfigMatrix,
    w: &[Int],
    phi: &TruncatedSeries,
    vtilde: &Exponent,
    k: &GRat,
    trunc: Truncation,
) -> Result<TruncatedSeries, SeriesError> {
    let n = a.n();
    let k_i64 = i64::try_from(k.re.numer()).expect("k fits in i64");
    let mut terms = BTreeMap::new();
    for (key, c) in &phi.terms {
        // t-exponent of phi is (-1-k) + u_t = -1-m  =>  m = k - u_t
        let m = k_i64 - key[n];
        if m < 0 || m > trunc.t_order {
            continue;
        }
        let factor = pochhammer(&GRat::from_int(-1), m as u64);
        let mut nk = key.clone();
        nk[n] = m;
        terms.insert(nk, c.div(&factor).map_err(|_| SeriesError::ZeroDenominator)?);
    }
    let mut base: Vec<GRat> = vtilde.v[..n].to_vec();
    base.push(GRat::zero());

    // support: A u = 0 (padded), and (w, -1) . (u, m) = -k from the
    // Atilde kernel relation with u_t = k - m
    let mut rows: Vec<Vec<Int>> = a
        .rows()
        .iter()
        .map(|r| {
            let mut rr = r.clone();
            rr.push(Int::zero());
            rr
        })
        .collect();
    let mut wrow: Vec<Int> = w.to_vec();
    wrow.push(-Int::one());
    rows.push(wrow);
    let mut rhs = vec![Int::zero(); a.d()];
    rhs.push(-k.re.numer().clone());

    // stored window: the phi cone had sum |u_c - k_c| + |u_t| <= x_degree
    // over the off-sigma coordinates; map u_t = k - m
    let origin = vtilde.origin.as_ref().expect("infinity exponents carry an origin");
    let complement: Vec<usize> =
        (0..=n).filter(|&c| !origin.sigma.contains(c)).collect();
    let mut coords = Vec::new();
    let mut offsets = Vec::new();
    for (pos, &c) in complement.iter().enumerate() {
        if c == n {
            coords.push(n);
            // |u_t - k_t,offset0| with u_t = k - m: |k - m| = |m - k|
            offsets.push(k_i64);
        } else {
            coords.push(c);
            let _ = pos;
            offsets.push(0);
        }
    }
    Ok(TruncatedSeries {
        nvars: n + 1,
        base,
        terms,
        truncation: trunc,
        region: Region {
            l1: Some((coords, offsets, trunc.x_degree)),
            caps: vec![(n, 0, trunc.t_order)],
        },
        support: Some(KernelSupport {
            rows,
            rhs,
            nsupp_coords: n,
            base_nsupp: negative_support(&vtilde.v[..n]),
            key_mins: vec![(n, 0)],
        }),
    })
}

// ---------------------------------------------------------------------------
// sigma weight vector; generic parameters
// ---------------------------------------------------------------------------

/// [OP] The weight vector attached to a simplex:
/// `w_i = |det A_sigma| (|A_sigma^{-1} a_i| - 1)` where the coordinate sum
/// exceeds 1, and 0 otherwise. Integral by construction.
pub fn sigma_weight_vector(a: &ConfigMatrix, sigma: &Simplex) -> Vec<Int> {
    let vol = Rat::from_integer(sigma.vol());
    (0..a.n())
        .map(|j| {
            let s = coordinate_sum(&sigma.inv_times_column(a, j));
            if s > Rat::one() {
                let w = (s - Rat::one()) * &vol;
                debug_assert!(w.is_integer());
                w.numer().clone()
            } else {
                Int::zero()
            }
        })
        .collect()
}

/// [OP] Deterministic sampler for "very generic" rational parameters: each
/// coordinate is `p / q` for a large prime `q`, and the sample is accepted
/// only after an exhaustive scan certifying that no exponent coordinate
/// shifted by a lattice vector of 1-norm at most `degree_bound` becomes an
/// integer.
pub fn generic_parameter_sampler(a: &ConfigMatrix, degree_bound: i64, seed: u64) -> Vec<GRat> {
    const PRIMES: [i64; 4] = [1_000_003, 1_000_033, 1_000_087, 1_000_099];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'attempt: for attempt in 0..64 {
        let q = PRIMES[(attempt % PRIMES.len() as u64) as usize];
        let beta: Vec<GRat> = (0..a.d())
            .map(|_| GRat::from_rat(Rat::new(Int::from(rng.gen_range(1..q)), Int::from(q))))
            .collect();
        // scan every simplex, class representative and lattice shift
        let ids: Vec<usize> = (0..a.n()).collect();
        for subset in crate::exactla::subsets_of_size(&ids, a.d()) {
            let Ok(sigma) = Simplex::new(a, subset) else { continue };
            let Ok(reps) = lattice_representatives(a, &sigma, 64) else { continue };
            let points = kernel_points(a, &sigma, degree_bound);
            for k in reps {
                let v = Exponent::from_simplex(a, &sigma, &beta, &k);
                for u in &points {
                    for (pos, &si) in sigma.indices().iter().enumerate() {
                        let _ = pos;
                        let c = v.v[si].add_int(u[si]);
                        if c.is_integer() {
                            continue 'attempt;
                        }
                    }
                }
            }
        }
        return beta;
    }
    unreachable!("prime-denominator parameters pass the stability scan");
}

/// Multiplicity of the modulo-convergent basis for the top slope:
/// `sum_tau vol(conv(0, a~_i : i in tau))`.
pub fn mod_convergent_multiplicity(a: &ConfigMatrix, w: &[Int]) -> Result<Option<Int>, SeriesError> {
    let report = modified_slopes_along_t(a, w)?;
    let points = a.a_w_points(w);
    match report.slopes.last() {
        None => Ok(None),
        Some(entry) => {
            let mut total = Rat::zero();
            for wit in &entry.witnesses {
                total += pyramid_volume(&points, &wit.facet)?;
            }
            debug_assert!(total.is_integer());
            Ok(Some(total.numer().clone()))
        }
    }
}
