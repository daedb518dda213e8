//! Measurement varieties: edge indexing, squared/unsquared measurement maps,
//! the codimension-one defining polynomials for `d ∈ {1,2,3}`, rigidity
//! matrices, the good-locus predicate, and the desk-scale checks on linear
//! images and sign-flip determinant sums.
//!
//! Everything is exact except [`projection_rank_probe`]: unsquared tangent
//! spaces involve square roots of rationals, so those rank experiments run in
//! floating point with a relative singular-value threshold.

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::exactq::{rat, QMatrix, Rational};
use crate::mpoly::{Monomial, MultiPoly};

/// An unordered vertex pair `{i, j}`, stored with `i < j`, vertices 1-based.
pub type Edge = (usize, usize);

#[derive(Debug, Error, PartialEq, Eq)]
pub enum VarietiesError {
    #[error("defining polynomial only available for d in {{1,2,3}}, got {0}")]
    UnsupportedDimension(usize),
    #[error("edge ({0},{1}) invalid for {2} vertices")]
    InvalidEdge(usize, usize, usize),
    #[error("duplicate edge ({0},{1})")]
    DuplicateEdge(usize, usize),
    #[error("measurement vector has length {0}, expected {1}")]
    LengthMismatch(usize, usize),
    #[error("no non-degenerate configuration found after {0} attempts")]
    DegenerateSamples(usize),
}

/// Fixed bijection between the edges of `K_n` and coordinate slots `0..N`.
///
/// Slots are ordered colexicographically, which for `n = 4` is exactly
/// `12, 13, 23, 14, 24, 34`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EdgeIndex {
    n: usize,
}

impl EdgeIndex {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        EdgeIndex { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.n * (self.n - 1) / 2
    }

    pub fn slot(&self, e: Edge) -> usize {
        let (i, j) = normalize_edge(e);
        assert!(i >= 1 && j <= self.n, "edge out of range");
        (j - 1) * (j - 2) / 2 + (i - 1)
    }

    pub fn edge(&self, slot: usize) -> Edge {
        assert!(slot < self.num_edges());
        let mut j = 2;
        while j * (j - 1) / 2 <= slot {
            j += 1;
        }
        let i = slot - (j - 1) * (j - 2) / 2 + 1;
        (i, j)
    }

    /// All edges in slot order.
    pub fn edges(&self) -> Vec<Edge> {
        (0..self.num_edges()).map(|s| self.edge(s)).collect()
    }

    /// Variable names like `l12, l13, ...` in slot order.
    pub fn var_names(&self, prefix: &str) -> Vec<String> {
        self.edges().iter().map(|&(i, j)| format!("{prefix}{i}{j}")).collect()
    }
}

fn normalize_edge((i, j): Edge) -> Edge {
    assert!(i != j, "self-loop is not an edge");
    if i < j {
        (i, j)
    } else {
        (j, i)
    }
}

/// A rational configuration of `n` points in dimension `d`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Configuration {
    d: usize,
    /// `n × d` coordinate matrix, one point per row.
    coords: QMatrix,
}

impl Configuration {
    pub fn new(d: usize, coords: QMatrix) -> Self {
        assert!(d >= 1 && coords.rows() >= 1);
        assert_eq!(coords.cols(), d);
        Configuration { d, coords }
    }

    pub fn from_int_points(d: usize, points: &[&[i64]]) -> Self {
        Self::new(d, QMatrix::from_int_rows(points))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn n(&self) -> usize {
        self.coords.rows()
    }

    pub fn point(&self, i: usize) -> &[Rational] {
        self.coords.row(i - 1)
    }

    /// Dimension of the affine span.
    pub fn affine_span_dim(&self) -> usize {
        let n = self.n();
        let mut rows = Vec::new();
        for i in 1..n {
            let diff: Vec<Rational> = self
                .point(i + 1)
                .iter()
                .zip(self.point(1))
                .map(|(a, b)| a - b)
                .collect();
            rows.push(diff);
        }
        QMatrix::from_rows_with_cols(rows, self.d).rank()
    }
}

/// Exact squared edge lengths of a configuration, in slot order.
pub fn measure_squared(p: &Configuration) -> Vec<Rational> {
    let ei = EdgeIndex::new(p.n());
    ei.edges()
        .iter()
        .map(|&(i, j)| {
            p.point(i)
                .iter()
                .zip(p.point(j))
                .map(|(a, b)| {
                    let d = a - b;
                    &d * &d
                })
                .sum()
        })
        .collect()
}

/// Gram matrix of the first `n−1` points relative to the last, recovered from
/// squared measurements: `G_ii = m_in`, `G_ij = (m_in + m_jn − m_ij)/2`.
pub fn gram_from_squared(m: &[Rational], n: usize) -> Result<QMatrix, VarietiesError> {
    let ei = EdgeIndex::new(n);
    if m.len() != ei.num_edges() {
        return Err(VarietiesError::LengthMismatch(m.len(), ei.num_edges()));
    }
    let half = Rational::new(1.into(), 2.into());
    let mut g = QMatrix::zeros(n - 1, n - 1);
    for i in 1..n {
        g[(i - 1, i - 1)] = m[ei.slot((i, n))].clone();
        for j in i + 1..n {
            let v = &(&(&m[ei.slot((i, n))] + &m[ei.slot((j, n))]) - &m[ei.slot((i, j))]) * &half;
            g[(i - 1, j - 1)] = v.clone();
            g[(j - 1, i - 1)] = v;
        }
    }
    Ok(g)
}

/// Inverse of [`gram_from_squared`]: `φ(G)_ij = G_ii + G_jj − 2G_ij`, with
/// indices touching the dropped last point read as zero.
pub fn squared_from_gram(g: &QMatrix) -> Vec<Rational> {
    assert_eq!(g.rows(), g.cols());
    let n = g.rows() + 1;
    let ei = EdgeIndex::new(n);
    ei.edges()
        .iter()
        .map(|&(i, j)| {
            if j == n {
                g[(i - 1, i - 1)].clone()
            } else {
                let two_gij = &g[(i - 1, j - 1)] + &g[(i - 1, j - 1)];
                &(&g[(i - 1, i - 1)] + &g[(j - 1, j - 1)]) - &two_gij
            }
        })
        .collect()
}

/// Defining polynomial of the minimal (`n = d+2`) measurement varieties:
/// the simplicial volume determinant in the squared coordinates, and its
/// unsquared pullback through the coordinate-squaring map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DefiningPoly {
    pub d: usize,
    /// Determinant polynomial in the `m_ij` variables.
    pub squared: MultiPoly,
    /// The same polynomial with `m_ij = l_ij²` substituted; every exponent
    /// is even.
    pub unsquared: MultiPoly,
}

/// Build the defining polynomial for `d ∈ {1, 2, 3}`.
pub fn defining_poly(d: usize) -> Result<DefiningPoly, VarietiesError> {
    if !(1..=3).contains(&d) {
        return Err(VarietiesError::UnsupportedDimension(d));
    }
    let n = d + 2;
    let ei = EdgeIndex::new(n);
    let nvars = ei.num_edges();
    let var = |e: Edge| MultiPoly::var(nvars, ei.slot(e));
    let size = d + 1;
    let mut entries = vec![vec![MultiPoly::zero(nvars); size]; size];
    for a in 1..=size {
        for b in 1..=size {
            entries[a - 1][b - 1] = if a == b {
                var((a, n)).scale(&rat(2))
            } else {
                var((a, n)).add(&var((b, n))).unwrap().sub(&var((a, b))).unwrap()
            };
        }
    }
    let squared = poly_det(&entries);
    let unsquared = substitute_squares(&squared);
    Ok(DefiningPoly { d, squared, unsquared })
}

/// Determinant of a small matrix of polynomials, by Laplace expansion.
fn poly_det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    let nvars = m[0][0].nvars();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(nvars);
    for (col, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|&(j, _)| j != col)
                    .map(|(_, p)| p.clone())
                    .collect()
            })
            .collect();
        let cofactor = top.mul(&poly_det(&minor)).unwrap();
        acc = if col % 2 == 0 { acc.add(&cofactor) } else { acc.sub(&cofactor) }.unwrap();
    }
    acc
}

/// Substitute `x_i ← x_i²` (doubles every exponent).
fn substitute_squares(p: &MultiPoly) -> MultiPoly {
    let mut out = MultiPoly::zero(p.nvars());
    for (m, c) in p.terms() {
        out.add_term(Monomial(m.0.iter().map(|&e| e * 2).collect()), c.clone());
    }
    out
}

/// Rigidity matrix: one row per edge `{i,j}` holding the gradient of
/// `m_ij` at `p`, i.e. `2(p_i − p_j)` in block `i` and `2(p_j − p_i)` in
/// block `j` of the `dn` configuration coordinates.
pub fn rigidity_matrix(p: &Configuration, edges: &[Edge]) -> Result<QMatrix, VarietiesError> {
    let (d, n) = (p.d(), p.n());
    let mut m = QMatrix::zeros(edges.len(), d * n);
    for (row, &e) in edges.iter().enumerate() {
        let (i, j) = normalize_edge(e);
        if j > n {
            return Err(VarietiesError::InvalidEdge(i, j, n));
        }
        for k in 0..d {
            let diff = &p.point(i)[k] - &p.point(j)[k];
            let two_diff = &diff + &diff;
            m[(row, (i - 1) * d + k)] = two_diff.clone();
            m[(row, (j - 1) * d + k)] = -two_diff;
        }
    }
    Ok(m)
}

/// Random configuration with integer coordinates drawn uniformly from
/// `[−100, 100]`.
pub fn random_configuration(d: usize, n: usize, rng: &mut impl Rng) -> Configuration {
    let rows: Vec<Vec<Rational>> =
        (0..n).map(|_| (0..d).map(|_| rat(rng.gen_range(-100..=100))).collect()).collect();
    Configuration::new(d, QMatrix::from_rows(rows))
}

/// Probabilistic test for infinitesimal independence of an edge set: true iff
/// some sampled random configuration gives the rigidity matrix full row rank.
/// Independence is a generic property, so failures after `trials` honest
/// samples are read as dependence.
pub fn is_inf_independent(edges: &[Edge], d: usize, trials: usize, seed: u64) -> bool {
    assert!(trials >= 1);
    let n = edges.iter().map(|&(i, j)| i.max(j)).max().unwrap_or(2).max(2);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let p = random_configuration(d, n, &mut rng);
        let r = rigidity_matrix(&p, edges).expect("edges validated against derived n");
        if r.rank() == edges.len() {
            return true;
        }
    }
    false
}

/// Compose the one-dimensional simplicial volume determinant with the
/// diagonal scaling `m_ij ↦ s_ij·m_ij` and return the proportionality
/// constant if the result is a multiple of the original.
pub fn voldet_scale_check(s12: &Rational, s13: &Rational, s23: &Rational) -> Option<Rational> {
    assert!(!s12.is_zero() && !s13.is_zero() && !s23.is_zero());
    let p = defining_poly(1).unwrap().squared;
    let mut diag = QMatrix::zeros(3, 3);
    diag[(0, 0)] = s12.clone();
    diag[(1, 1)] = s13.clone();
    diag[(2, 2)] = s23.clone();
    p.compose_linear(&diag).unwrap().proportional(&p)
}

/// `Σ_S det(S·X + Y)` over all `2^r` sign-flip matrices `S`; the determinant
/// lemma says this always equals `2^r · det(Y)`.
pub fn signflip_det_sum(x: &QMatrix, y: &QMatrix) -> Rational {
    assert_eq!(x.rows(), x.cols(), "X must be square");
    assert_eq!((x.rows(), x.cols()), (y.rows(), y.cols()), "shape mismatch");
    let r = x.rows();
    let mut total = Rational::zero();
    for mask in 0u32..(1 << r) {
        let mut m = y.clone();
        for i in 0..r {
            let sign = if mask >> i & 1 == 1 { -Rational::one() } else { Rational::one() };
            for j in 0..r {
                let v = &m[(i, j)] + &(&sign * &x[(i, j)]);
                m[(i, j)] = v;
            }
        }
        total = &total + &m.det();
    }
    total
}

/// Good-locus predicate: no coordinate vanishes and the Gram matrix of the
/// squared vector has rank exactly `d`.
pub fn good_point(l: &[Rational], d: usize, n: usize) -> Result<bool, VarietiesError> {
    let ei = EdgeIndex::new(n);
    if l.len() != ei.num_edges() {
        return Err(VarietiesError::LengthMismatch(l.len(), ei.num_edges()));
    }
    if l.iter().any(Rational::is_zero) {
        return Ok(false);
    }
    let m: Vec<Rational> = l.iter().map(|q| q * q).collect();
    Ok(gram_from_squared(&m, n)?.rank() == d)
}

/// 0/1 selector matrix of the edge-forgetting map `π_Ē`: row `k` picks the
/// coordinate slot of the `k`-th edge of `E`.
pub fn edge_forget_matrix(edges: &[Edge], n: usize) -> Result<QMatrix, VarietiesError> {
    let ei = EdgeIndex::new(n);
    let mut seen = vec![false; ei.num_edges()];
    let mut m = QMatrix::zeros(edges.len(), ei.num_edges());
    for (row, &e) in edges.iter().enumerate() {
        let (i, j) = normalize_edge(e);
        if j > n {
            return Err(VarietiesError::InvalidEdge(i, j, n));
        }
        let s = ei.slot((i, j));
        if seen[s] {
            return Err(VarietiesError::DuplicateEdge(i, j));
        }
        seen[s] = true;
        m[(row, s)] = Rational::one();
    }
    Ok(m)
}

/// Outcome of a tangent-space projection probe.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProbeOutcome {
    /// Maximum numerical rank of `E·Tᵀ` observed over all samples and flips.
    pub max_rank: usize,
    /// Number of sign flips enumerated per sample (`2^|support(E)|`).
    pub flips_per_sample: usize,
    pub trials: usize,
    pub seed: u64,
}

/// Relative singular-value threshold for numerical rank.
pub const RANK_SV_THRESHOLD: f64 = 1e-8;

fn numerical_rank(m: &DMatrix<f64>, rel_tol: f64) -> usize {
    let sv = m.clone().svd(false, false).singular_values;
    let max = sv.iter().cloned().fold(0.0_f64, f64::max);
    if max == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel_tol * max).count()
}

/// Sample tangent bases of `L_{d,n}` at unsquared measurement points of
/// random configurations, apply every coordinate sign flip supported by `e`,
/// and report the maximum numerical rank of the projected tangent space.
///
/// The tangent at `l(p)` is the rigidity-matrix column space with row `e`
/// scaled by `1/(2 l_e)` (chain rule through the squaring map), so this runs
/// in floating point. Configurations with a collapsed edge or deficient span
/// are resampled, with an error after a bounded number of retries.
pub fn projection_rank_probe(
    e: &DMatrix<f64>,
    d: usize,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ProbeOutcome, VarietiesError> {
    assert!(d >= 1 && n >= d + 2 && trials >= 1);
    let ei = EdgeIndex::new(n);
    let nn = ei.num_edges();
    assert_eq!(e.ncols(), nn, "E must have N columns");
    let support: Vec<usize> = (0..nn).filter(|&c| (0..e.nrows()).any(|r| e[(r, c)] != 0.0)).collect();
    assert!(support.len() <= 20, "sign-flip enumeration over {} columns is too large", support.len());
    let flips = 1usize << support.len();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let max_attempts = trials * 50;
    let mut attempts = 0;
    let mut max_rank = 0;
    for _ in 0..trials {
        let p = loop {
            attempts += 1;
            if attempts > max_attempts {
                return Err(VarietiesError::DegenerateSamples(max_attempts));
            }
            let p = random_configuration(d, n, &mut rng);
            let m = measure_squared(&p);
            if m.iter().all(|q| q.is_positive()) && p.affine_span_dim() == d {
                break p;
            }
        };
        let m = measure_squared(&p);
        let l: Vec<f64> = m.iter().map(|q| rational_to_f64(q).sqrt()).collect();
        let rig = rigidity_matrix(&p, &ei.edges()).unwrap();
        // Tangent spanning set: N×dn, row per edge, scaled through the chain rule.
        let mut t = DMatrix::<f64>::zeros(nn, d * n);
        for row in 0..nn {
            for col in 0..d * n {
                t[(row, col)] = rational_to_f64(&rig[(row, col)]) / (2.0 * l[row]);
            }
        }
        for mask in 0..flips {
            let mut flipped = t.clone();
            for (bit, &col) in support.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    for c in 0..d * n {
                        flipped[(col, c)] = -flipped[(col, c)];
                    }
                }
            }
            let projected = e * &flipped;
            max_rank = max_rank.max(numerical_rank(&projected, RANK_SV_THRESHOLD));
        }
    }
    Ok(ProbeOutcome { max_rank, flips_per_sample: flips, trials, seed })
}

fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().expect("rational within f64 range")
}

/// Float edge-forgetting matrix, for probe input.
pub fn edge_forget_float(edges: &[Edge], n: usize) -> Result<DMatrix<f64>, VarietiesError> {
    let q = edge_forget_matrix(edges, n)?;
    Ok(DMatrix::from_fn(q.rows(), q.cols(), |i, j| rational_to_f64(&q[(i, j)])))
}

/// Random dense `rows × N` matrix with entries in `(−1, 1)`, resampled until
/// it has full numerical rank.
pub fn random_full_rank_map(rows: usize, cols: usize, rng: &mut impl Rng) -> DMatrix<f64> {
    loop {
        let m = DMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-1.0..1.0));
        if numerical_rank(&m, RANK_SV_THRESHOLD) == rows.min(cols) {
            return m;
        }
    }
}

/// All permutations of the vertices `1..=n`, each given as the image list
/// `pi[i-1] = π(i)`.
pub fn vertex_relabelings(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (1..=n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k <= 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    let len = items.len();
    heap(len, &mut items, &mut out);
    out.sort();
    out
}

/// The `N × N` edge permutation matrix induced by the vertex relabeling `pi`:
/// the basis vector of edge `{i,j}` is sent to that of `{π(i), π(j)}`.
pub fn edge_permutation_matrix(pi: &[usize]) -> QMatrix {
    let n = pi.len();
    let ei = EdgeIndex::new(n);
    let mut m = QMatrix::zeros(ei.num_edges(), ei.num_edges());
    for e in ei.edges() {
        let image = (pi[e.0 - 1], pi[e.1 - 1]);
        m[(ei.slot(image), ei.slot(e))] = Rational::one();
    }
    m
}

/// All edge subsets of `K_n` of size `1..=max_size`, for the exhaustive
/// dependence scan.
pub fn edge_subsets(n: usize, max_size: usize) -> Vec<Vec<Edge>> {
    let ei = EdgeIndex::new(n);
    let all = ei.edges();
    let mut out = Vec::new();
    for mask in 1u64..(1 << all.len()) {
        let k = mask.count_ones() as usize;
        if k > max_size {
            continue;
        }
        out.push(
            all.iter()
                .enumerate()
                .filter(|&(s, _)| mask >> s & 1 == 1)
                .map(|(_, &e)| e)
                .collect(),
        );
    }
    out
}

/// True iff `edges` is exactly the edge set of a complete graph on `k+...`
/// vertices matching `|edges| = binom(v, 2)` for its vertex set.
pub fn is_complete_edge_set(edges: &[Edge]) -> bool {
    let mut verts: Vec<usize> = edges.iter().flat_map(|&(i, j)| [i, j]).collect();
    verts.sort_unstable();
    verts.dedup();
    let v = verts.len();
    edges.len() == v * (v - 1) / 2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::ratio;

    #[test]
    fn edge_index_order_for_n4() {
        let ei = EdgeIndex::new(4);
        assert_eq!(ei.edges(), vec![(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 4)]);
        for s in 0..ei.num_edges() {
            assert_eq!(ei.slot(ei.edge(s)), s);
        }
    }

    #[test]
    fn measure_two_points_on_a_line() {
        let p = Configuration::from_int_points(1, &[&[0], &[1]]);
        assert_eq!(measure_squared(&p), vec![rat(1)]);
    }

    #[test]
    fn measure_unit_right_triangle() {
        let p = Configuration::from_int_points(2, &[&[0, 0], &[1, 0], &[0, 1]]);
        assert_eq!(measure_squared(&p), vec![rat(1), rat(1), rat(2)]);
    }

    #[test]
    fn gram_of_right_triangle_with_last_point_at_origin() {
        // p3 = origin; m = (1, 1, 2) in order 12, 13, 23
        let m = vec![rat(2), rat(1), rat(1)];
        let g = gram_from_squared(&m, 3).unwrap();
        assert_eq!(g, QMatrix::identity(2));
    }

    #[test]
    fn gram_round_trip() {
        let m = vec![rat(2), rat(1), rat(1), rat(5), ratio(7, 2), rat(3)];
        let g = gram_from_squared(&m, 4).unwrap();
        assert_eq!(squared_from_gram(&g), m);
        let zero = vec![rat(0); 6];
        assert_eq!(gram_from_squared(&zero, 4).unwrap(), QMatrix::zeros(3, 3));
    }

    #[test]
    fn d1_squared_matches_volume_determinant() {
        // 2(m12·m13 + m12·m23 + m13·m23) − (m12² + m13² + m23²)
        let p = defining_poly(1).unwrap().squared;
        let names = EdgeIndex::new(3).var_names("m");
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        assert_eq!(
            p.to_text(&refs),
            "-m12^2 + 2*m12*m13 + 2*m12*m23 - m13^2 + 2*m13*m23 - m23^2"
        );
    }

    #[test]
    fn d1_unsquared_vanishes_on_collinear_lengths() {
        let p = defining_poly(1).unwrap().unsquared;
        assert!(p.eval(&[rat(1), rat(1), rat(2)]).unwrap().is_zero());
        assert!(p.eval(&[rat(1), rat(2), rat(3)]).unwrap().is_zero());
        assert!(!p.eval(&[rat(3), rat(4), rat(5)]).unwrap().is_zero());
    }

    #[test]
    fn defining_polys_vanish_on_measurements() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for d in 1..=3 {
            let dp = defining_poly(d).unwrap();
            assert!(dp.squared.is_homogeneous());
            assert!(dp.unsquared.is_homogeneous());
            assert!(dp
                .unsquared
                .terms()
                .all(|(m, _)| m.0.iter().all(|&e| e % 2 == 0)));
            for _ in 0..5 {
                let p = random_configuration(d, d + 2, &mut rng);
                let m = measure_squared(&p);
                assert!(dp.squared.eval(&m).unwrap().is_zero());
            }
        }
        assert_eq!(defining_poly(4), Err(VarietiesError::UnsupportedDimension(4)));
    }

    #[test]
    fn rigidity_of_single_edge_in_1d() {
        let p = Configuration::from_int_points(1, &[&[0], &[1]]);
        let r = rigidity_matrix(&p, &[(1, 2)]).unwrap();
        assert_eq!(r, QMatrix::from_int_rows(&[&[-2, 2]]));
    }

    #[test]
    fn k4_rigidity_rank_in_plane() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let k4 = EdgeIndex::new(4).edges();
        let p = random_configuration(2, 4, &mut rng);
        assert_eq!(rigidity_matrix(&p, &k4).unwrap().rank(), 5);
        // every 5-edge subset is independent at a generic configuration
        for skip in 0..6 {
            let sub: Vec<Edge> =
                k4.iter().enumerate().filter(|&(s, _)| s != skip).map(|(_, &e)| e).collect();
            assert_eq!(rigidity_matrix(&p, &sub).unwrap().rank(), 5);
        }
    }

    #[test]
    fn independence_probe() {
        assert!(is_inf_independent(&[(1, 2)], 3, 3, 7));
        let k4 = EdgeIndex::new(4).edges();
        assert!(!is_inf_independent(&k4, 2, 5, 7));
        let k5 = EdgeIndex::new(5).edges();
        assert!(!is_inf_independent(&k5, 3, 5, 7));
        for skip in 0..10 {
            let sub: Vec<Edge> =
                k5.iter().enumerate().filter(|&(s, _)| s != skip).map(|(_, &e)| e).collect();
            assert!(is_inf_independent(&sub, 3, 5, 7));
        }
    }

    #[test]
    fn voldet_scaling() {
        assert_eq!(voldet_scale_check(&rat(1), &rat(1), &rat(1)), Some(rat(1)));
        assert_eq!(voldet_scale_check(&rat(2), &rat(2), &rat(2)), Some(rat(4)));
        assert_eq!(voldet_scale_check(&rat(1), &rat(1), &rat(2)), None);
        let s = ratio(-3, 7);
        assert_eq!(voldet_scale_check(&s, &s, &s), Some(&s * &s));
    }

    #[test]
    fn signflip_sum_basics() {
        let y = QMatrix::from_int_rows(&[&[3, 1], &[2, 5]]);
        let zero = QMatrix::zeros(2, 2);
        assert_eq!(signflip_det_sum(&zero, &y), &rat(4) * &y.det());
        let x1 = QMatrix::from_int_rows(&[&[4]]);
        let y1 = QMatrix::from_int_rows(&[&[9]]);
        assert_eq!(signflip_det_sum(&x1, &y1), rat(18)); // (4+9) + (−4+9)
    }

    #[test]
    fn good_point_predicate() {
        // rectangle (0,0),(5,0),(0,12),(5,12): all edge lengths rational
        let l = vec![rat(5), rat(12), rat(13), rat(13), rat(12), rat(5)];
        assert!(good_point(&l, 2, 4).unwrap());
        // zero coordinate short-circuits
        let mut lz = l.clone();
        lz[2] = rat(0);
        assert!(!good_point(&lz, 2, 4).unwrap());
        // 4 collinear points at 0, 1, 2, 5 viewed in d = 2: Gram rank 1 < 2
        let lc = vec![rat(1), rat(2), rat(1), rat(5), rat(4), rat(3)];
        assert!(!good_point(&lc, 2, 4).unwrap());
        // same lengths are a fine 1-dimensional point
        assert!(good_point(&lc, 1, 4).unwrap());
        assert_eq!(good_point(&l, 2, 5), Err(VarietiesError::LengthMismatch(6, 10)));
    }

    #[test]
    fn edge_forget_shapes() {
        let ei = EdgeIndex::new(4);
        let all = edge_forget_matrix(&ei.edges(), 4).unwrap();
        assert_eq!(all, QMatrix::identity(6));
        let tri = edge_forget_matrix(&[(1, 2), (1, 3), (2, 3)], 4).unwrap();
        assert_eq!(
            tri,
            QMatrix::from_int_rows(&[
                &[1, 0, 0, 0, 0, 0],
                &[0, 1, 0, 0, 0, 0],
                &[0, 0, 1, 0, 0, 0]
            ])
        );
        let empty = edge_forget_matrix(&[], 4).unwrap();
        assert_eq!((empty.rows(), empty.cols()), (0, 6));
        assert_eq!(
            edge_forget_matrix(&[(1, 2), (2, 1)], 4),
            Err(VarietiesError::DuplicateEdge(1, 2))
        );
    }

    #[test]
    fn edge_permutations_respect_composition() {
        let perms = vertex_relabelings(4);
        assert_eq!(perms.len(), 24);
        // swap of vertices 1 and 2 fixes edge 12 and swaps 13 with 23, 14 with 24
        let swap = edge_permutation_matrix(&[2, 1, 3, 4]);
        let ei = EdgeIndex::new(4);
        let l: Vec<Rational> = (1..=6).map(rat).collect();
        let out = swap.mul_vec(&l);
        assert_eq!(out[ei.slot((1, 2))], l[ei.slot((1, 2))]);
        assert_eq!(out[ei.slot((1, 3))], l[ei.slot((2, 3))]);
        assert_eq!(out[ei.slot((2, 3))], l[ei.slot((1, 3))]);
        assert_eq!(out[ei.slot((3, 4))], l[ei.slot((3, 4))]);
    }

    #[test]
    fn complete_edge_set_detection() {
        let k4 = EdgeIndex::new(4).edges();
        assert!(is_complete_edge_set(&k4));
        assert!(!is_complete_edge_set(&[(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5)]));
        assert!(is_complete_edge_set(&[(1, 2)]));
    }
}
