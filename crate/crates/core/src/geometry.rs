//! Polyhedral machinery: convex-hull facets, umbrellas with positive
//! weights, and regular triangulations from (possibly staged) weight
//! vectors.
//!
//! Everything is exact. Facet enumeration is exhaustive over column
//! subsets with exact side tests, which is ample at the scale this library
//! targets (`d <= 4`, a couple dozen columns).

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactla::{
    determinant, dot_rat, int_to_rat_vec, invert, matrix_rank, rati, subsets_of_size,
    ConfigMatrix, ExactlaError, Int, Rat, Simplex,
};

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("hull is zero-dimensional")]
    ZeroDimensionalHull,
    #[error("points span affine dimension {found}, full dimension {ambient} required")]
    DegenerateHull { ambient: usize, found: usize },
    #[error("weight vector induces a non-simplicial cell {0:?}; perturb the weights")]
    NonSimplicialCell(Vec<usize>),
    #[error("staged perturbation still leaves ties in cell {0:?}")]
    PerturbationTies(Vec<usize>),
    #[error(transparent)]
    Exact(#[from] ExactlaError),
}

// ---------------------------------------------------------------------------
// Faces and hulls
// ---------------------------------------------------------------------------

/// A face of a polytope `conv(points [+ origin])`.
///
/// `indices` refer to the input point list (the origin is never indexed;
/// membership is reported through `contains_zero`). For a facet with
/// `contains_zero = false` the covector `c` is normalized so that
/// `c . p = 1` on the face and `c . p <= 1` for every hull point (strict
/// off the face) whenever the origin lies in the hull. For a facet through
/// the origin the covector vanishes on the face and is nonnegative on the
/// hull. Faces of dimension `< ambient-1` inherit the covector of a
/// containing facet when one not through the origin exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub indices: BTreeSet<usize>,
    pub covector: Option<Vec<Rat>>,
    pub contains_zero: bool,
    /// Affine dimension of the face.
    pub dim: usize,
}

/// [OP] Complete facet list of `conv(points)` or `conv(points + {0})`.
///
/// Brute force: every ambient-size subset of hull points spanning a
/// hyperplane is side-tested against all points. Duplicate and interior
/// points are absorbed into the equality sets.
pub fn hull_facets(points: &[Vec<Rat>], with_origin: bool) -> Result<Vec<Face>, GeometryError> {
    assert!(!points.is_empty(), "need at least one point");
    let dim = points[0].len();
    assert!(points.iter().all(|p| p.len() == dim), "mixed point dimensions");

    // extended point list: input points, then the origin sentinel
    let mut pts: Vec<Vec<Rat>> = points.to_vec();
    let origin_id = pts.len();
    if with_origin {
        pts.push(vec![Rat::zero(); dim]);
    }

    let adim = affine_dim(&pts);
    if adim == 0 {
        return Err(GeometryError::ZeroDimensionalHull);
    }
    if adim < dim {
        return Err(GeometryError::DegenerateHull { ambient: dim, found: adim });
    }

    let ids: Vec<usize> = (0..pts.len()).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();

    for subset in subsets_of_size(&ids, dim) {
        let Some((h, h0)) = hyperplane_through(&pts, &subset) else {
            continue;
        };
        // side test against every point
        let mut pos = false;
        let mut neg = false;
        let mut equality: Vec<usize> = Vec::new();
        for (i, p) in pts.iter().enumerate() {
            let side = dot_rat(&h, p) - &h0;
            if side.is_zero() {
                equality.push(i);
            } else if side.is_positive() {
                pos = true;
            } else {
                neg = true;
            }
            if pos && neg {
                break;
            }
        }
        if pos && neg {
            continue;
        }
        if !seen.insert(equality.clone()) {
            continue;
        }
        // orient outward: hull on the <= side
        let (mut h, mut h0) = (h, h0);
        if pos {
            h.iter_mut().for_each(|x| *x = -x.clone());
            h0 = -h0;
        }
        let contains_zero = with_origin && equality.contains(&origin_id);
        let covector = if !h0.is_zero() {
            // 0 not on the hyperplane; normalize to c . y = 1
            let inv = h0.recip();
            Some(h.iter().map(|x| x * &inv).collect())
        } else {
            // linear form vanishing on the face; hull on its nonneg side
            Some(h.iter().map(|x| -x.clone()).collect())
        };
        let indices: BTreeSet<usize> = equality.into_iter().filter(|&i| i != origin_id).collect();
        out.push(Face { indices, covector, contains_zero, dim: dim - 1 });
    }
    if out.is_empty() {
        return Err(GeometryError::DegenerateHull { ambient: dim, found: adim });
    }
    Ok(out)
}

fn affine_dim(pts: &[Vec<Rat>]) -> usize {
    if pts.len() <= 1 {
        return 0;
    }
    let base = &pts[0];
    let rows: Vec<Vec<Rat>> = pts[1..]
        .iter()
        .map(|p| p.iter().zip(base).map(|(a, b)| a - b).collect())
        .collect();
    matrix_rank(&rows)
}

/// Hyperplane `h . y = h0` through the given points, if they span one.
fn hyperplane_through(pts: &[Vec<Rat>], subset: &[usize]) -> Option<(Vec<Rat>, Rat)> {
    // solve [p | -1] . (h, h0) = 0; need a one-dimensional null space
    let rows: Vec<Vec<Rat>> = subset
        .iter()
        .map(|&i| {
            let mut r = pts[i].clone();
            r.push(-Rat::one());
            r
        })
        .collect();
    let kern = crate::exactla::kernel_basis(&rows);
    if kern.len() != 1 {
        return None;
    }
    let mut v = kern.into_iter().next().unwrap();
    let h0 = v.pop().unwrap();
    if v.iter().all(|x| x.is_zero()) {
        return None;
    }
    Some((v, h0))
}

// ---------------------------------------------------------------------------
// Umbrellas
// ---------------------------------------------------------------------------

/// The `(A, L)`-umbrella for strictly positive weights: faces of
/// `conv({0, a_1/v_1, ..., a_n/v_n})` not containing 0, graded by
/// dimension, closed under subfaces, including the empty face.
#[derive(Clone, Debug)]
pub struct Umbrella {
    pub faces: Vec<Face>,
    pub weights: Vec<Rat>,
}

impl Umbrella {
    pub fn facets(&self) -> Vec<&Face> {
        let top = self.faces.iter().map(|f| f.dim).max().unwrap_or(0);
        self.faces.iter().filter(|f| f.dim == top && !f.indices.is_empty()).collect()
    }

    pub fn facet_index_sets(&self) -> BTreeSet<BTreeSet<usize>> {
        self.facets().iter().map(|f| f.indices.clone()).collect()
    }

    pub fn contains_face(&self, indices: &BTreeSet<usize>) -> bool {
        self.faces.iter().any(|f| &f.indices == indices)
    }
}

/// [OP] Umbrella of `A` for a strictly positive rational weight vector.
pub fn umbrella_positive(a: &ConfigMatrix, v_weights: &[Rat]) -> Result<Umbrella, GeometryError> {
    assert_eq!(v_weights.len(), a.n(), "one weight per column");
    assert!(v_weights.iter().all(|v| v.is_positive()), "weights must be positive");
    let points: Vec<Vec<Rat>> = (0..a.n())
        .map(|j| {
            let inv = v_weights[j].recip();
            a.column_rat(j).into_iter().map(|x| x * &inv).collect()
        })
        .collect();
    let facets = hull_facets(&points, true)?;

    // face lattice: close the facet vertex sets under intersection, then
    // drop faces through the origin
    let with_zero: Vec<(BTreeSet<usize>, bool)> = facets
        .iter()
        .map(|f| (f.indices.clone(), f.contains_zero))
        .collect();
    let mut closure: BTreeMap<BTreeSet<usize>, bool> = with_zero.iter().cloned().collect();
    loop {
        let keys: Vec<(BTreeSet<usize>, bool)> =
            closure.iter().map(|(k, v)| (k.clone(), *v)).collect();
        let mut grew = false;
        for i in 0..keys.len() {
            for j in i + 1..keys.len() {
                let inter: BTreeSet<usize> =
                    keys[i].0.intersection(&keys[j].0).copied().collect();
                let zero = keys[i].1 && keys[j].1;
                let entry = closure.entry(inter).or_insert_with(|| {
                    grew = true;
                    zero
                });
                if *entry && !zero {
                    *entry = false;
                }
            }
        }
        if !grew {
            break;
        }
    }

    let mut faces = Vec::new();
    for (indices, through_zero) in &closure {
        if *through_zero {
            continue;
        }
        let dim = if indices.is_empty() {
            0
        } else {
            let sub: Vec<Vec<Rat>> = indices.iter().map(|&i| points[i].clone()).collect();
            affine_dim(&sub).max(0)
        };
        let covector = facets
            .iter()
            .find(|f| !f.contains_zero && indices.is_subset(&f.indices))
            .and_then(|f| f.covector.clone());
        faces.push(Face { indices: indices.clone(), covector, contains_zero: false, dim });
    }
    if !faces.iter().any(|f| f.indices.is_empty()) {
        faces.push(Face {
            indices: BTreeSet::new(),
            covector: None,
            contains_zero: false,
            dim: 0,
        });
    }
    faces.sort_by_key(|f| (f.dim, f.indices.iter().copied().collect::<Vec<_>>()));
    Ok(Umbrella { faces, weights: v_weights.to_vec() })
}

// ---------------------------------------------------------------------------
// Weighted cells and regular triangulations
// ---------------------------------------------------------------------------

/// A weight per column, possibly with symbolic perturbation stages.
/// Comparison of weighted values is lexicographic across stages.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StagedWeights {
    /// `stages[s][j]` is the stage-`s` weight of column `j`.
    pub stages: Vec<Vec<Rat>>,
}

impl StagedWeights {
    pub fn single(w: Vec<Rat>) -> Self {
        StagedWeights { stages: vec![w] }
    }

    pub fn from_ints(w: &[Int]) -> Self {
        Self::single(int_to_rat_vec(w))
    }

    pub fn ncols(&self) -> usize {
        self.stages[0].len()
    }

    /// Restrict to a subset of columns (order preserved).
    pub fn restrict(&self, cols: &[usize]) -> StagedWeights {
        StagedWeights {
            stages: self
                .stages
                .iter()
                .map(|st| cols.iter().map(|&j| st[j].clone()).collect())
                .collect(),
        }
    }
}

/// [OP] The staged perturbation `w + eps((1,...,1) + eps' w')` with the
/// deterministic generic tail `w' = (1, K, K^2, ...)`.
pub fn perturb_weight(w: &[Rat], tie_break_base: i64) -> StagedWeights {
    let n = w.len();
    let ones = vec![Rat::one(); n];
    let mut pow = Rat::one();
    let k = rati(tie_break_base);
    let mut tail = Vec::with_capacity(n);
    for _ in 0..n {
        tail.push(pow.clone());
        pow *= &k;
    }
    StagedWeights { stages: vec![w.to_vec(), ones, tail] }
}

pub const DEFAULT_TIE_BREAK: i64 = 9973;

/// A maximal cell of the lower regular subdivision induced by a weight:
/// the equality set of a supporting covector `c` with `c . a_i = w_i` on
/// the cell and `c . a_j < w_j` (lexicographically, for staged weights)
/// off it.
#[derive(Clone, Debug)]
pub struct WeightedCell {
    pub indices: BTreeSet<usize>,
    /// One covector per weight stage.
    pub certificate: Vec<Vec<Rat>>,
}

/// Maximal cells (equality sets of full rank) of the lower subdivision of
/// the point configuration `columns` induced by `weights`.
pub fn weighted_cells(
    columns: &[Vec<Rat>],
    weights: &StagedWeights,
) -> Result<Vec<WeightedCell>, GeometryError> {
    let n = columns.len();
    assert_eq!(weights.ncols(), n, "one weight per column");
    let dim = columns.first().map(|c| c.len()).unwrap_or(0);
    let ids: Vec<usize> = (0..n).collect();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();
    let mut out = Vec::new();

    for subset in subsets_of_size(&ids, dim) {
        // the d columns must be linearly independent
        let mat: Vec<Vec<Rat>> = (0..dim)
            .map(|r| subset.iter().map(|&j| columns[j][r].clone()).collect())
        .collect();
        if determinant(&mat).is_zero() {
            continue;
        }
        // transpose system: c . a_i = w_i for i in subset, per stage
        let tmat: Vec<Vec<Rat>> = subset.iter().map(|&j| columns[j].clone()).collect();
        let inv_t = invert(&tmat).expect("independent columns give invertible system");
        let certs: Vec<Vec<Rat>> = weights
            .stages
            .iter()
            .map(|st| {
                let rhs: Vec<Rat> = subset.iter().map(|&j| st[j].clone()).collect();
                inv_t.iter().map(|row| dot_rat(row, &rhs)).collect()
            })
            .collect();
        // lexicographic side test for every column
        let mut lower = true;
        let mut equality: Vec<usize> = Vec::new();
        'cols: for j in 0..n {
            for (cert, st) in certs.iter().zip(&weights.stages) {
                let diff = dot_rat(cert, &columns[j]) - &st[j];
                if diff.is_positive() {
                    lower = false;
                    break 'cols;
                }
                if diff.is_negative() {
                    continue 'cols;
                }
            }
            equality.push(j);
        }
        if !lower {
            continue;
        }
        if !seen.insert(equality.clone()) {
            continue;
        }
        out.push(WeightedCell { indices: equality.into_iter().collect(), certificate: certs });
    }
    Ok(out)
}

/// Facets of the weighted umbrella of `A` (certificate characterization);
/// for strictly positive weights these are exactly the facets of
/// [`umbrella_positive`].
pub fn weighted_umbrella_facets(
    a: &ConfigMatrix,
    weights: &StagedWeights,
) -> Result<Vec<WeightedCell>, GeometryError> {
    weighted_cells(&a.columns_rat(), weights)
}

/// A regular triangulation: maximal simplices with their lower-face
/// certificates.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub simplices: Vec<Simplex>,
    pub certificates: Vec<Vec<Vec<Rat>>>,
}

impl Triangulation {
    /// Sum of normalized volumes of the maximal simplices.
    pub fn total_volume(&self) -> Int {
        self.simplices.iter().map(|s| s.vol()).sum()
    }
}

/// [OP] Regular triangulation of the columns of `A` induced by `weights`.
///
/// Every maximal cell must be a simplex; otherwise the weight is not
/// generic enough and `NonSimplicialCell` is returned (callers perturb via
/// [`perturb_weight`]).
pub fn regular_triangulation(
    a: &ConfigMatrix,
    weights: &StagedWeights,
) -> Result<Triangulation, GeometryError> {
    let cells = weighted_umbrella_facets(a, weights)?;
    let mut simplices = Vec::new();
    let mut certificates = Vec::new();
    for cell in cells {
        let idx: Vec<usize> = cell.indices.iter().copied().collect();
        if idx.len() != a.d() {
            return Err(if weights.stages.len() > 1 {
                GeometryError::PerturbationTies(idx)
            } else {
                GeometryError::NonSimplicialCell(idx)
            });
        }
        simplices.push(Simplex::new(a, idx)?);
        certificates.push(cell.certificate);
    }
    Ok(Triangulation { simplices, certificates })
}

// ---------------------------------------------------------------------------
// Volumes
// ---------------------------------------------------------------------------

/// Normalized volume of `conv({0} + points[tau])` for points lying in a
/// common affine hyperplane off the origin: the face is triangulated by a
/// deterministic generic weight and the simplex determinants are summed.
pub fn pyramid_volume(points: &[Vec<Rat>], tau: &BTreeSet<usize>) -> Result<Rat, GeometryError> {
    let sub: Vec<Vec<Rat>> = tau.iter().map(|&i| points[i].clone()).collect();
    let dim = sub.first().map(|p| p.len()).unwrap_or(0);
    for base in [DEFAULT_TIE_BREAK, 31337, 65537] {
        let weights = perturb_weight(&vec![Rat::zero(); sub.len()], base);
        let weights = StagedWeights { stages: weights.stages[1..].to_vec() };
        let cells = weighted_cells(&sub, &weights)?;
        if cells.iter().any(|c| c.indices.len() != dim) {
            continue; // tie-break base unlucky; retry
        }
        let mut total = Rat::zero();
        for cell in cells {
            let mat: Vec<Vec<Rat>> = (0..dim)
                .map(|r| cell.indices.iter().map(|&j| sub[j][r].clone()).collect())
                .collect();
            let det = determinant(&mat);
            total += det.abs();
        }
        return Ok(total);
    }
    Err(GeometryError::PerturbationTies(tau.iter().copied().collect()))
}

// ---------------------------------------------------------------------------
// Simplex and umbrella predicates
// ---------------------------------------------------------------------------

/// [OP] True iff `sigma` lies in a facet of `conv(A)` that is not a facet
/// of `Delta_A`: the criterion is `|A_sigma^{-1} a_i| >= 1` (coordinate
/// sum) for every column `i` off `sigma`.
pub fn sigma_in_outer_facet(a: &ConfigMatrix, sigma: &Simplex) -> bool {
    (0..a.n()).filter(|&j| !sigma.contains(j)).all(|j| {
        let s: Rat = sigma.inv_times_column(a, j).iter().sum();
        s >= Rat::one()
    })
}

/// [OP] True iff every facet of the F-umbrella of `A_eta` is (the
/// eta-part of) a facet of the F-umbrella of `A`, with matching covector.
pub fn umbrella_inclusion_check(a: &ConfigMatrix, eta: &BTreeSet<usize>) -> bool {
    let cols: Vec<usize> = eta.iter().copied().collect();
    let sub_cols: Vec<Vec<Rat>> = cols.iter().map(|&j| a.column_rat(j)).collect();
    let ones = StagedWeights::single(vec![Rat::one(); cols.len()]);
    let Ok(cells) = weighted_cells(&sub_cols, &ones) else {
        return false;
    };
    for cell in cells {
        let cert = &cell.certificate[0];
        // the same covector must support a facet of the A-umbrella:
        // c . a_j <= 1 for every column of A
        for j in 0..a.n() {
            if eta.contains(&j) {
                continue;
            }
            if dot_rat(cert, &a.column_rat(j)) > Rat::one() {
                return false;
            }
        }
    }
    true
}

/// The column set `eta = {i : |A_sigma^{-1} a_i| >= 1}` (coordinate sums)
/// attached to a simplex; this is the set the umbrella-inclusion
/// hypothesis quantifies over.
pub fn eta_for_simplex(a: &ConfigMatrix, sigma: &Simplex) -> BTreeSet<usize> {
    (0..a.n())
        .filter(|&j| {
            let s: Rat = sigma.inv_times_column(a, j).iter().sum();
            s >= Rat::one()
        })
        .collect()
}

/// Does the origin lie in `conv(points)`? Exact, via Caratheodory
/// enumeration of small subsets.
pub fn origin_in_convex_hull(points: &[Vec<Rat>]) -> bool {
    let n = points.len();
    if n == 0 {
        return false;
    }
    let dim = points[0].len();
    if points.iter().any(|p| p.iter().all(|x| x.is_zero())) {
        return true;
    }
    let ids: Vec<usize> = (0..n).collect();
    for size in 1..=(dim + 1).min(n) {
        for subset in subsets_of_size(&ids, size) {
            // solve sum lambda_i p_i = 0, sum lambda_i = 1
            let mut rows: Vec<Vec<Rat>> = (0..dim)
                .map(|r| subset.iter().map(|&i| points[i][r].clone()).collect())
                .collect();
            rows.push(vec![Rat::one(); size]);
            let mut rhs = vec![Rat::zero(); dim];
            rhs.push(Rat::one());
            // require a unique solution: affinely independent subsets only
            if matrix_rank(&rows) != size {
                continue;
            }
            if let Some(sol) = crate::exactla::solve_linear(&rows, &rhs) {
                if sol.iter().all(|l| !l.is_negative()) {
                    return true;
                }
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn pt(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rati(x)).collect()
    }

    fn ptr(v: &[(i64, i64)]) -> Vec<Rat> {
        v.iter().map(|&(n, d)| rat(n, d)).collect()
    }

    #[test]
    fn hull_facets_line_examples() {
        // single point {1} in d=1 with origin: facet {1}, c=(1)
        let f = hull_facets(&[pt(&[1])], true).unwrap();
        let far: Vec<&Face> = f.iter().filter(|f| !f.contains_zero).collect();
        assert_eq!(far.len(), 1);
        assert_eq!(far[0].indices, BTreeSet::from([0]));
        assert_eq!(far[0].covector, Some(vec![rati(1)]));
    }

    #[test]
    fn hull_facets_a_w_135() {
        // points (1,0),(3,1),(5,1) with origin: facets off 0 are
        // {1,3} with c=(1,-4) and {2,3} with c=(0,1)   (1-based labels)
        let pts = vec![pt(&[1, 0]), pt(&[3, 1]), pt(&[5, 1])];
        let f = hull_facets(&pts, true).unwrap();
        let far: Vec<&Face> = f.iter().filter(|f| !f.contains_zero).collect();
        assert_eq!(far.len(), 2);
        let by_set: BTreeMap<Vec<usize>, Vec<Rat>> = far
            .iter()
            .map(|f| (f.indices.iter().copied().collect(), f.covector.clone().unwrap()))
            .collect();
        assert_eq!(by_set[&vec![0, 2]], vec![rati(1), rati(-4)]);
        assert_eq!(by_set[&vec![1, 2]], vec![rati(0), rati(1)]);
    }

    #[test]
    fn hull_facets_interior_point() {
        // (1,1) is interior under c=(1/3,1/3): single far facet {1,2}
        let pts = vec![pt(&[2, 1]), pt(&[1, 2]), pt(&[1, 1])];
        let f = hull_facets(&pts, true).unwrap();
        let far: Vec<&Face> = f.iter().filter(|f| !f.contains_zero).collect();
        assert_eq!(far.len(), 1);
        assert_eq!(far[0].indices, BTreeSet::from([0, 1]));
        assert_eq!(far[0].covector, Some(ptr(&[(1, 3), (1, 3)])));
    }

    #[test]
    fn facet_covectors_certify() {
        let pts = vec![pt(&[2, 1]), pt(&[1, 2]), pt(&[1, 1]), pt(&[4, 1])];
        let f = hull_facets(&pts, true).unwrap();
        for face in f.iter().filter(|f| !f.contains_zero) {
            let c = face.covector.as_ref().unwrap();
            for (i, p) in pts.iter().enumerate() {
                let v = dot_rat(c, p);
                if face.indices.contains(&i) {
                    assert_eq!(v, Rat::one());
                } else {
                    assert!(v < Rat::one(), "strict inequality off the facet");
                }
            }
        }
    }

    #[test]
    fn degenerate_hull_rejected() {
        // collinear points in R^2 spanning a 1-dim hull
        let pts = vec![pt(&[1, 1]), pt(&[2, 2])];
        assert!(matches!(
            hull_facets(&pts, true),
            Err(GeometryError::DegenerateHull { .. })
        ));
    }

    #[test]
    fn umbrella_positive_examples() {
        // A=(1,2), v=(1,1): umbrella = { {}, {2} } (1-based)
        let a = ConfigMatrix::from_i64(&[&[1, 2]]).unwrap();
        let u = umbrella_positive(&a, &[rati(1), rati(1)]).unwrap();
        let sets: Vec<BTreeSet<usize>> = u.faces.iter().map(|f| f.indices.clone()).collect();
        assert!(sets.contains(&BTreeSet::new()));
        assert!(sets.contains(&BTreeSet::from([1])));
        assert_eq!(sets.len(), 2);

        // A=[[2,1,1],[1,2,1]], v=1: single facet {1,2}, column 3 interior
        let a = ConfigMatrix::from_i64(&[&[2, 1, 1], &[1, 2, 1]]).unwrap();
        let u = umbrella_positive(&a, &[rati(1), rati(1), rati(1)]).unwrap();
        assert_eq!(u.facet_index_sets(), BTreeSet::from([BTreeSet::from([0, 1])]));

        // n = d: single facet {1..d}
        let a = ConfigMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let u = umbrella_positive(&a, &[rati(1), rati(1)]).unwrap();
        assert_eq!(u.facet_index_sets(), BTreeSet::from([BTreeSet::from([0, 1])]));
    }

    #[test]
    fn umbrella_matches_weighted_cells_for_unit_weights() {
        for rows in [
            vec![vec![1i64, 2]],
            vec![vec![1, 3, 5]],
            vec![vec![2, 1, 1], vec![1, 2, 1]],
            vec![vec![2, 0, 1, 3], vec![0, 1, 1, 2]],
            vec![vec![1, 1, 0, 3], vec![0, 1, 2, 0]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = ConfigMatrix::from_i64(&refs).unwrap();
            let ones = vec![Rat::one(); a.n()];
            let u = umbrella_positive(&a, &ones).unwrap();
            let cells = weighted_umbrella_facets(&a, &StagedWeights::single(ones)).unwrap();
            let cell_sets: BTreeSet<BTreeSet<usize>> =
                cells.into_iter().map(|c| c.indices).collect();
            assert_eq!(u.facet_index_sets(), cell_sets, "A = {rows:?}");
        }
    }

    #[test]
    fn umbrella_closed_under_intersection() {
        let a = ConfigMatrix::from_i64(&[&[2, 0, 1, 3], &[0, 1, 1, 2]]).unwrap();
        let u = umbrella_positive(&a, &vec![Rat::one(); 4]).unwrap();
        let sets: Vec<BTreeSet<usize>> = u.faces.iter().map(|f| f.indices.clone()).collect();
        for x in &sets {
            for y in &sets {
                let inter: BTreeSet<usize> = x.intersection(y).copied().collect();
                assert!(sets.contains(&inter), "{x:?} cap {y:?}");
            }
        }
    }

    #[test]
    fn triangulation_examples() {
        // A=(1,2,3), w=(0,0,1) with staged perturbation: triangulation {{2}}
        let a = ConfigMatrix::from_i64(&[&[1, 2, 3]]).unwrap();
        let w = perturb_weight(&[rati(0), rati(0), rati(1)], DEFAULT_TIE_BREAK);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices.len(), 1);
        assert_eq!(t.simplices[0].indices(), &[1]);
        assert_eq!(t.total_volume(), Int::from(2));

        // A=(1,3,5,6), w=(-4,-2,0,1): column minimizing w_i/a_i is 1
        let a = ConfigMatrix::from_i64(&[&[1, 3, 5, 6]]).unwrap();
        let w = StagedWeights::single(vec![rati(-4), rati(-2), rati(0), rati(1)]);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices.len(), 1);
        assert_eq!(t.simplices[0].indices(), &[0]);

        // n = d: unique simplex {1..n}
        let a = ConfigMatrix::from_i64(&[&[1, 0], &[0, 1]]).unwrap();
        let w = StagedWeights::single(vec![rati(0), rati(0)]);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices.len(), 1);
        assert_eq!(t.simplices[0].indices(), &[0, 1]);
    }

    #[test]
    fn perturbed_triangulation_of_flat_weight() {
        // A=(1,2), w=(0,0): the all-ones perturbation stage compares the
        // ratios w_j/a_j, so column 2 carries the cell regardless of the
        // tie-break base
        let a = ConfigMatrix::from_i64(&[&[1, 2]]).unwrap();
        let w = perturb_weight(&[rati(0), rati(0)], DEFAULT_TIE_BREAK);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices.len(), 1);
        assert_eq!(t.simplices[0].indices(), &[1]);
        // ties broken identically across runs
        let t2 = regular_triangulation(&a, &perturb_weight(&[rati(0), rati(0)], 101)).unwrap();
        assert_eq!(t2.simplices[0].indices(), &[1]);
        // when the plain weights already decide, the perturbation is inert
        let w = perturb_weight(&[rati(3), rati(1)], DEFAULT_TIE_BREAK);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices[0].indices(), &[1]);
        let w = perturb_weight(&[rati(0), rati(1)], DEFAULT_TIE_BREAK);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.simplices[0].indices(), &[0]);
    }

    #[test]
    fn nonsimplicial_cell_detected() {
        // A=[[1,1,1],[0,1,2]] with w=0: the whole configuration is one flat
        // cell of three collinear points on one facet
        let a = ConfigMatrix::from_i64(&[&[1, 1, 1], &[0, 1, 2]]).unwrap();
        let w = StagedWeights::single(vec![Rat::zero(); 3]);
        assert!(matches!(
            regular_triangulation(&a, &w),
            Err(GeometryError::NonSimplicialCell(_))
        ));
        // the staged perturbation resolves it
        let w = perturb_weight(&vec![Rat::zero(); 3], DEFAULT_TIE_BREAK);
        let t = regular_triangulation(&a, &w).unwrap();
        assert_eq!(t.total_volume(), Int::from(2));
    }

    #[test]
    fn triangulation_volume_independent_of_generic_weight() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for rows in [
            vec![vec![1i64, 3, 5]],
            vec![vec![2, 1, 1], vec![1, 2, 1]],
            vec![vec![2, 0, 1, 3], vec![0, 1, 1, 2]],
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = ConfigMatrix::from_i64(&refs).unwrap();
            let mut vols = BTreeSet::new();
            for _ in 0..4 {
                let w: Vec<Rat> = (0..a.n()).map(|_| rati(rng.gen_range(-6..=6))).collect();
                let t = regular_triangulation(&a, &perturb_weight(&w, DEFAULT_TIE_BREAK));
                if let Ok(t) = t {
                    vols.insert(t.total_volume());
                }
            }
            // volumes depend on the weight for non-homogeneous A, but the
            // triangulation of any one weight is consistent between runs;
            // homogeneous rows give a single volume
            if a.rowspan_contains(&vec![Rat::one(); a.n()]) {
                assert_eq!(vols.len(), 1, "A = {rows:?}, vols = {vols:?}");
            }
        }
    }

    #[test]
    fn outer_facet_criterion() {
        let a = ConfigMatrix::from_i64(&[&[1, 2]]).unwrap();
        let s = Simplex::new(&a, vec![0]).unwrap();
        assert!(sigma_in_outer_facet(&a, &s));

        let a = ConfigMatrix::from_i64(&[&[1, 1, 1], &[0, 1, 2]]).unwrap();
        let s = Simplex::new(&a, vec![0, 2]).unwrap();
        assert!(sigma_in_outer_facet(&a, &s));

        let a = ConfigMatrix::from_i64(&[&[2, 0, 1, 3], &[0, 1, 1, 2]]).unwrap();
        let s = Simplex::new(&a, vec![0, 2]).unwrap();
        // |A_sigma^{-1} a_2| = 1/2 < 1 and |A_sigma^{-1} a_4| = 5/2 >= 1
        assert!(!sigma_in_outer_facet(&a, &s));
    }

    #[test]
    fn umbrella_inclusion_examples() {
        // d=1: true for every eta of the form {i : |A_sigma^{-1} a_i| >= 1}
        let a = ConfigMatrix::from_i64(&[&[1, 3, 5]]).unwrap();
        for j in 0..3 {
            let sigma = Simplex::new(&a, vec![j]).unwrap();
            let eta = eta_for_simplex(&a, &sigma);
            assert!(umbrella_inclusion_check(&a, &eta), "sigma = {{{j}}}");
        }

        // n-1 = d: true for every simplex-derived eta
        let a = ConfigMatrix::from_i64(&[&[2, 1, 1], &[1, 2, 1]]).unwrap();
        for pair in subsets_of_size(&[0usize, 1, 2], 2) {
            let Ok(sigma) = Simplex::new(&a, pair) else { continue };
            let eta = eta_for_simplex(&a, &sigma);
            assert!(umbrella_inclusion_check(&a, &eta));
        }

        // final worked example with l=3: sigma={1,2} gives eta={1,2,4}
        // (1-based) and the inclusion fails since l >= 2
        let a = ConfigMatrix::from_i64(&[&[1, 1, 0, 3], &[0, 1, 2, 0]]).unwrap();
        let sigma = Simplex::new(&a, vec![0, 1]).unwrap();
        let eta = eta_for_simplex(&a, &sigma);
        assert_eq!(eta, BTreeSet::from([0, 1, 3]));
        assert!(!umbrella_inclusion_check(&a, &eta));
    }

    #[test]
    fn pointedness_via_hull() {
        assert!(!origin_in_convex_hull(&[pt(&[1, 0]), pt(&[-1, 0])]) == false);
        assert!(origin_in_convex_hull(&[pt(&[1, 0]), pt(&[-1, 0])]));
        assert!(!origin_in_convex_hull(&[pt(&[1]), pt(&[2])]));
        assert!(origin_in_convex_hull(&[pt(&[1, 1]), pt(&[-1, 1]), pt(&[0, -1])]));
        assert!(!origin_in_convex_hull(&[pt(&[1, 1]), pt(&[2, 1]), pt(&[1, 2])]));
    }

    #[test]
    fn pyramid_volumes() {
        // conv(0,(1,0),(5,1)) has normalized volume 1
        let pts = vec![pt(&[1, 0]), pt(&[3, 1]), pt(&[5, 1])];
        let v = pyramid_volume(&pts, &BTreeSet::from([0, 2])).unwrap();
        assert_eq!(v, rati(1));
        // conv(0,(1,1),(2,1)) has volume |det| = -1 -> 1
        let pts = vec![pt(&[1, 1]), pt(&[2, 1])];
        let v = pyramid_volume(&pts, &BTreeSet::from([0, 1])).unwrap();
        assert_eq!(v, rati(1));
        // a facet with three collinear points still triangulates exactly
        let pts = vec![pt(&[1, 1]), pt(&[2, 1]), pt(&[3, 1])];
        let v = pyramid_volume(&pts, &BTreeSet::from([0, 1, 2])).unwrap();
        assert_eq!(v, rati(2));
    }
}
