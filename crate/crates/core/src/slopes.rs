//! Slope detectors for hypergeometric and modified hypergeometric systems,
//! and the regularity-along-`T` criterion.
//!
//! All detectors reduce to exact facet-hyperplane membership tests:
//! a candidate slope is read off the covector of a hull facet not through
//! the origin.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::exactla::{dot_rat, ConfigMatrix, Int, Rat};
use crate::geometry::{
    hull_facets, origin_in_convex_hull, pyramid_volume, weighted_cells, GeometryError,
    StagedWeights,
};

#[derive(Debug, Error)]
pub enum SlopesError {
    #[error("the matrix Atilde(w) is not pointed; modified slopes are undefined")]
    NotPointed,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("internal cross-check of the regularity criterion failed: conditions (a) and (c) disagree")]
    CrossCheckFailed,
}

/// Where a slope is measured.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Locus {
    /// The coordinate hyperplane `x_j = 0` (0-based column index).
    Hyperplane(usize),
    /// `x_j = infinity`.
    Infinity(usize),
    /// `t = 0`.
    T,
    /// `t = infinity`.
    TPrime,
}

/// A facet witnessing a slope, with its supporting covector normalized to
/// `c . y = 1` on the facet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlopeWitness {
    pub facet: BTreeSet<usize>,
    pub covector: Vec<Rat>,
}

#[derive(Clone, Debug)]
pub struct SlopeEntry {
    pub s: Rat,
    pub witnesses: Vec<SlopeWitness>,
    /// For modified slopes: the solution count of the associated basis
    /// modulo convergent series, `sum_tau vol(conv(0, a~_i : i in tau))`.
    pub multiplicity: Option<Int>,
}

#[derive(Clone, Debug)]
pub struct SlopeReport {
    pub locus: Locus,
    pub slopes: Vec<SlopeEntry>,
}

impl SlopeReport {
    fn empty(locus: Locus) -> Self {
        SlopeReport { locus, slopes: Vec::new() }
    }

    pub fn slope_values(&self) -> Vec<Rat> {
        self.slopes.iter().map(|e| e.s.clone()).collect()
    }

    pub fn is_empty(&self) -> bool {
        self.slopes.is_empty()
    }
}

fn collect_entries(
    candidates: Vec<(Rat, SlopeWitness, Option<Rat>)>,
    locus: Locus,
) -> SlopeReport {
    let mut by_slope: BTreeMap<Rat, (Vec<SlopeWitness>, Option<Rat>)> = BTreeMap::new();
    for (s, w, vol) in candidates {
        let entry = by_slope.entry(s).or_insert_with(|| (Vec::new(), vol.as_ref().map(|_| Rat::zero())));
        entry.0.push(w);
        if let (Some(acc), Some(v)) = (entry.1.as_mut(), vol) {
            *acc += v;
        }
    }
    let slopes = by_slope
        .into_iter()
        .map(|(s, (witnesses, vol))| SlopeEntry {
            s,
            witnesses,
            multiplicity: vol.map(|v| {
                debug_assert!(v.is_integer());
                v.numer().clone()
            }),
        })
        .collect();
    SlopeReport { locus, slopes }
}

/// [OP] Slopes of `M_A(beta)` along the hyperplane `x_j = 0`: for each
/// facet `tau` of `conv({0} + {a_i : i != j})` with `0 not in tau` and
/// covector `c`, the candidate is `s = c . a_j`, kept iff `s > 1`.
pub fn slopes_along_hyperplane(a: &ConfigMatrix, j: usize) -> SlopeReport {
    slopes_at_coordinate_locus(a, j, false)
}

/// [OP] Slopes of `M_A(beta)` along `x_j = infinity`: same facets, but the
/// candidate is `s = 2 - c . a_j`, kept iff `s > 1`.
pub fn slopes_at_infinity(a: &ConfigMatrix, j: usize) -> SlopeReport {
    slopes_at_coordinate_locus(a, j, true)
}

fn slopes_at_coordinate_locus(a: &ConfigMatrix, j: usize, at_infinity: bool) -> SlopeReport {
    assert!(j < a.n(), "column index out of range");
    let locus = if at_infinity { Locus::Infinity(j) } else { Locus::Hyperplane(j) };
    let others: Vec<usize> = (0..a.n()).filter(|&i| i != j).collect();
    let points: Vec<Vec<Rat>> = others.iter().map(|&i| a.column_rat(i)).collect();
    if points.is_empty() {
        return SlopeReport::empty(locus);
    }
    let facets = match hull_facets(&points, true) {
        Ok(f) => f,
        // a degenerate hull supports no facet hyperplane: no slopes
        Err(GeometryError::DegenerateHull { .. }) | Err(GeometryError::ZeroDimensionalHull) => {
            return SlopeReport::empty(locus)
        }
        Err(e) => panic!("facet enumeration failed: {e}"),
    };
    let aj = a.column_rat(j);
    let mut candidates = Vec::new();
    for f in facets.into_iter().filter(|f| !f.contains_zero) {
        let c = f.covector.expect("facet off the origin carries a covector");
        let v = dot_rat(&c, &aj);
        let s = if at_infinity { Rat::from_integer(Int::from(2)) - v } else { v };
        if s > Rat::one() {
            let facet: BTreeSet<usize> = f.indices.iter().map(|&k| others[k]).collect();
            candidates.push((s, SlopeWitness { facet, covector: c }, None));
        }
    }
    collect_entries(candidates, locus)
}

/// [OP] Is the matrix pointed, i.e. do its columns lie in an open
/// half-space with boundary through the origin? Exact test: pointed iff
/// the origin is outside the convex hull of the columns.
pub fn is_pointed_columns(columns: &[Vec<Rat>]) -> bool {
    !origin_in_convex_hull(columns)
}

pub fn is_pointed(a: &ConfigMatrix) -> bool {
    is_pointed_columns(&a.columns_rat())
}

fn atilde_columns(a: &ConfigMatrix, w: &[Int]) -> Vec<Vec<Rat>> {
    let mut cols = a.a_w_points(w);
    let mut last = vec![Rat::zero(); a.d()];
    last.push(Rat::one());
    cols.push(last);
    cols
}

/// [OP] Slopes of the modified system along `T = {t = 0}`: `s = r + 1` for
/// each facet `tau` of `Delta_{A_w} = conv({0} + {(a_i, w_i)})` with
/// `0 not in tau` and covector `c~` such that `r = -c~_{d+1} > 0`.
///
/// The multiplicity attached to each slope is
/// `sum_tau vol(conv(0, a~_i : i in tau))`.
pub fn modified_slopes_along_t(a: &ConfigMatrix, w: &[Int]) -> Result<SlopeReport, SlopesError> {
    assert_eq!(w.len(), a.n(), "one weight per column");
    if !is_pointed_columns(&atilde_columns(a, w)) {
        return Err(SlopesError::NotPointed);
    }
    let points = a.a_w_points(w);
    let facets = match hull_facets(&points, true) {
        Ok(f) => f,
        Err(GeometryError::DegenerateHull { .. }) | Err(GeometryError::ZeroDimensionalHull) => {
            return Ok(SlopeReport::empty(Locus::T))
        }
        Err(e) => return Err(e.into()),
    };
    let mut candidates = Vec::new();
    for f in facets.into_iter().filter(|f| !f.contains_zero) {
        let c = f.covector.expect("facet off the origin carries a covector");
        let r = -c[a.d()].clone();
        if r.is_positive() {
            let vol = pyramid_volume(&points, &f.indices)?;
            candidates.push((
                r + Rat::one(),
                SlopeWitness { facet: f.indices, covector: c },
                Some(vol),
            ));
        }
    }
    Ok(collect_entries(candidates, Locus::T))
}

/// [OP] Slopes along `T' = {t = infinity}`: the detector for `-w`, with
/// the locus tag flipped.
pub fn modified_slopes_along_t_inf(
    a: &ConfigMatrix,
    w: &[Int],
) -> Result<SlopeReport, SlopesError> {
    let neg: Vec<Int> = w.iter().map(|x| -x.clone()).collect();
    let mut report = modified_slopes_along_t(a, &neg)?;
    report.locus = Locus::TPrime;
    Ok(report)
}

/// The two face sets of the regularity criterion, computed independently,
/// plus the slope report they are cross-checked against.
#[derive(Clone, Debug)]
pub struct RegularityCertificate {
    pub regular: bool,
    /// `{sigma in Phi_{A_eta}^{w_eta, d-1} : eta in Phi_A^{F, d-1}}`
    pub refined_by_w: BTreeSet<BTreeSet<usize>>,
    /// `{sigma in Phi_{A_eta'}^{F, d-1} : eta' in Phi_A^{w, d-1}}`
    pub refined_by_f: BTreeSet<BTreeSet<usize>>,
    pub slope_report: SlopeReport,
}

/// [OP] Is the modified system regular along `T`? Computes both the
/// absence of slopes (condition (c)) and the equality of the two refined
/// face sets (condition (a)), and insists that the two agree.
pub fn is_regular_along_t(
    a: &ConfigMatrix,
    w: &[Int],
) -> Result<RegularityCertificate, SlopesError> {
    let slope_report = modified_slopes_along_t(a, w)?;
    let no_slopes = slope_report.is_empty();

    let wr: Vec<Rat> = w.iter().map(|x| Rat::from_integer(x.clone())).collect();
    let ones = vec![Rat::one(); a.n()];

    let refined_by_w = refine(a, &ones, &wr)?;
    let refined_by_f = refine(a, &wr, &ones)?;
    let sets_equal = refined_by_w == refined_by_f;

    if sets_equal != no_slopes {
        return Err(SlopesError::CrossCheckFailed);
    }
    Ok(RegularityCertificate { regular: no_slopes, refined_by_w, refined_by_f, slope_report })
}

/// `{sigma : sigma facet of the inner-weight umbrella of A_eta, eta facet
/// of the outer-weight umbrella of A}`, all as global column sets.
fn refine(
    a: &ConfigMatrix,
    outer: &[Rat],
    inner: &[Rat],
) -> Result<BTreeSet<BTreeSet<usize>>, SlopesError> {
    let cols = a.columns_rat();
    let outer_cells = weighted_cells(&cols, &StagedWeights::single(outer.to_vec()))?;
    let mut out = BTreeSet::new();
    for eta in outer_cells {
        let eta_cols: Vec<usize> = eta.indices.iter().copied().collect();
        let sub: Vec<Vec<Rat>> = eta_cols.iter().map(|&j| cols[j].clone()).collect();
        let sub_w: Vec<Rat> = eta_cols.iter().map(|&j| inner[j].clone()).collect();
        for cell in weighted_cells(&sub, &StagedWeights::single(sub_w))? {
            out.insert(cell.indices.iter().map(|&k| eta_cols[k]).collect());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{i64_to_int_vec, rat, rati};

    fn cfg(rows: &[&[i64]]) -> ConfigMatrix {
        ConfigMatrix::from_i64(rows).unwrap()
    }

    #[test]
    fn hyperplane_slope_curious_example() {
        let a = cfg(&[&[1, 2]]);
        let r = slopes_along_hyperplane(&a, 1);
        assert_eq!(r.slope_values(), vec![rati(2)]);
        let r = slopes_along_hyperplane(&a, 0);
        assert!(r.is_empty());
    }

    #[test]
    fn homogeneous_matrix_is_regular_everywhere() {
        // (1,...,1) in the row span: all candidate slopes are <= 1
        let a = cfg(&[&[1, 1, 1], &[0, 1, 2]]);
        for j in 0..3 {
            assert!(slopes_along_hyperplane(&a, j).is_empty(), "j = {j}");
        }
    }

    #[test]
    fn infinity_slope_example() {
        let a = cfg(&[&[2, 1, 1], &[1, 2, 1]]);
        let r = slopes_at_infinity(&a, 2);
        assert_eq!(r.slope_values(), vec![rat(4, 3)]);
        assert_eq!(r.slopes[0].witnesses[0].facet, BTreeSet::from([0, 1]));

        let a = cfg(&[&[1, 2]]);
        let r = slopes_at_infinity(&a, 1);
        assert!(r.is_empty()); // c . a_2 = 2 gives s = 0
    }

    #[test]
    fn boundary_candidate_excluded() {
        // a_j on the facet hyperplane itself: candidate s = 1, excluded on
        // both sides
        let a = cfg(&[&[1, 1, 1], &[0, 1, 2]]);
        for j in 0..3 {
            assert!(slopes_at_infinity(&a, j).is_empty(), "j = {j}");
        }
    }

    #[test]
    fn modified_slopes_135() {
        let a = cfg(&[&[1, 3, 5]]);
        let r = modified_slopes_along_t(&a, &i64_to_int_vec(&[0, 1, 1])).unwrap();
        assert_eq!(r.slope_values(), vec![rati(5)]);
        let e = &r.slopes[0];
        assert_eq!(e.witnesses.len(), 1);
        assert_eq!(e.witnesses[0].facet, BTreeSet::from([0, 2]));
        assert_eq!(e.witnesses[0].covector, vec![rati(1), rati(-4)]);
        assert_eq!(e.multiplicity, Some(Int::from(1)));
    }

    #[test]
    fn modified_slopes_curious_example() {
        let a = cfg(&[&[1, 2]]);
        let w = i64_to_int_vec(&[1, 1]);
        let along_t = modified_slopes_along_t(&a, &w).unwrap();
        assert!(along_t.is_empty());
        let along_tp = modified_slopes_along_t_inf(&a, &w).unwrap();
        assert_eq!(along_tp.slope_values(), vec![rati(2)]);
        assert_eq!(along_tp.locus, Locus::TPrime);
    }

    #[test]
    fn modified_slope_figure_example() {
        // A=(1,4), w=(-1,1): the facet through (1,-1),(4,1) has covector
        // (2/5,-3/5), so r=3/5 and s=8/5
        let a = cfg(&[&[1, 4]]);
        let r = modified_slopes_along_t(&a, &i64_to_int_vec(&[-1, 1])).unwrap();
        assert!(r.slope_values().contains(&rat(8, 5)));
    }

    #[test]
    fn modified_slope_witness_certifies() {
        // c~ . (0,...,0,-1/r) = 1 exactly for every emitted slope
        for (rows, w) in [
            (vec![vec![1i64, 3, 5]], vec![0i64, 1, 1]),
            (vec![vec![1, 4]], vec![-1, 1]),
            (vec![vec![1, 2]], vec![-1, -1]),
        ] {
            let refs: Vec<&[i64]> = rows.iter().map(|r| r.as_slice()).collect();
            let a = cfg(&refs);
            let Ok(rep) = modified_slopes_along_t(&a, &i64_to_int_vec(&w)) else { continue };
            for e in &rep.slopes {
                let r = &e.s - rati(1);
                for wit in &e.witnesses {
                    let last = wit.covector.last().unwrap();
                    assert_eq!(-(last / &r), Rat::one());
                }
            }
        }
    }

    #[test]
    fn w_in_rowspan_gives_no_modified_slopes() {
        let a = cfg(&[&[1, 2]]);
        // w = 3 * (1,2)
        let w = i64_to_int_vec(&[3, 6]);
        let r = modified_slopes_along_t(&a, &w).unwrap();
        assert!(r.is_empty());
        let r = modified_slopes_along_t_inf(&a, &w).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn row_combination_invariance() {
        let a = cfg(&[&[1, 3, 5]]);
        let w = [0i64, 1, 1];
        let base = modified_slopes_along_t(&a, &i64_to_int_vec(&w)).unwrap();
        // add 2 * (row of A)
        let shifted: Vec<i64> = [2i64, 7, 11].to_vec();
        let moved = modified_slopes_along_t(&a, &i64_to_int_vec(&shifted)).unwrap();
        assert_eq!(base.slope_values(), moved.slope_values());
        assert_eq!(
            base.slopes.iter().map(|e| e.multiplicity.clone()).collect::<Vec<_>>(),
            moved.slopes.iter().map(|e| e.multiplicity.clone()).collect::<Vec<_>>()
        );
    }

    #[test]
    fn pointedness_examples() {
        let a = cfg(&[&[1, 2]]);
        assert!(is_pointed(&a));
        let at = a.atilde(&i64_to_int_vec(&[-1, -1])).unwrap();
        assert!(is_pointed(&at));
        assert!(!is_pointed_columns(&[
            vec![rati(1), rati(0)],
            vec![rati(-1), rati(0)],
        ]));
    }

    #[test]
    fn regularity_equivalence_examples() {
        let a = cfg(&[&[1, 2]]);
        let cert = is_regular_along_t(&a, &i64_to_int_vec(&[1, 1])).unwrap();
        assert!(cert.regular);
        assert_eq!(cert.refined_by_w, cert.refined_by_f);

        let a = cfg(&[&[1, 3, 5]]);
        let cert = is_regular_along_t(&a, &i64_to_int_vec(&[0, 1, 1])).unwrap();
        assert!(!cert.regular);
        assert_ne!(cert.refined_by_w, cert.refined_by_f);

        // w a row of A: modified ideal unchanged up to a parameter shift
        let a = cfg(&[&[1, 2]]);
        let cert = is_regular_along_t(&a, &i64_to_int_vec(&[1, 2])).unwrap();
        assert!(cert.regular);
    }
}
