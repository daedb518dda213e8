//! Projective linear automorphism groups of the measurement varieties.
//!
//! Graph automorphisms of the incidence graph Δ are lifted to 6×6 rational
//! matrices by solving the 540×36 homogeneous system that forces each flat
//! onto its image flat. The lifted classes are closed under multiplication,
//! verified against the defining polynomial, split into positive-scale
//! classes, and compared with the expected subgroup generated by vertex
//! relabelings, sign flips and the one exceptional averaging symmetry.
//!
//! Group elements are stored as primitive integer matrices (content 1, and
//! for complex-scale classes a positive leading entry), which is the same
//! equivalence as scaling the first nonzero entry to 1 but keeps the closure
//! arithmetic in machine integers. [`ProjClass::rep`] recovers the
//! leading-entry-1 rational representative.

use std::collections::{HashMap, HashSet};
use std::hash::Hash;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::arrangement::Flat;
use crate::exactq::{rat, ratio, QMatrix, Rational, Subspace};
use crate::mpoly::MultiPoly;
use crate::varieties::{defining_poly, edge_permutation_matrix, EdgeIndex};

/// Default ceiling on closure sizes; guards against runaway input.
pub const DEFAULT_SAFETY_BOUND: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum AutGroupError {
    #[error("lifting system has nullspace dimension {0}, expected 1")]
    LiftNotUnique(usize),
    #[error("lifted matrix is singular")]
    SingularLift,
    #[error("group closure exceeded safety bound {0}")]
    ClosureBound(usize),
    #[error("closure needs at least one generator")]
    EmptyGenerators,
    #[error("class equals its own negation up to positive scale")]
    NegationFixedClass,
    #[error("matrix entry out of the supported integer range")]
    EntryOverflow,
}

fn bigints_to_i64(v: &[BigInt]) -> Result<Vec<i64>, AutGroupError> {
    v.iter()
        .map(|b| i64::try_from(b).map_err(|_| AutGroupError::EntryOverflow))
        .collect()
}

/// Divide by the content; sign left untouched. Errors on the zero vector.
fn primitivize(v: &mut [i64]) {
    let mut g: i64 = 0;
    for &x in v.iter() {
        g = g.gcd(&x);
    }
    assert!(g > 0, "zero matrix cannot represent a class");
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn int_matmul(n: usize, a: &[i64], b: &[i64]) -> Result<Vec<i64>, AutGroupError> {
    let mut out = vec![0i64; n * n];
    for i in 0..n {
        for k in 0..n {
            let aik = i128::from(a[i * n + k]);
            if aik == 0 {
                continue;
            }
            for j in 0..n {
                let v = i128::from(out[i * n + j]) + aik * i128::from(b[k * n + j]);
                out[i * n + j] = i64::try_from(v).map_err(|_| AutGroupError::EntryOverflow)?;
            }
        }
    }
    Ok(out)
}

/// Behavior shared by the closure element types.
pub trait GroupElement: Clone + Eq + Hash {
    fn mul(&self, other: &Self) -> Result<Self, AutGroupError>;
    fn inverse(&self) -> Self;
}

/// An invertible matrix up to complex (equivalently, arbitrary nonzero)
/// scale. Canonical storage: primitive integers, first nonzero entry
/// positive. Unique and hashable per class.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ProjClass {
    n: usize,
    entries: Vec<i64>,
}

impl ProjClass {
    pub fn from_qmatrix(m: &QMatrix) -> Result<ProjClass, AutGroupError> {
        assert_eq!(m.rows(), m.cols(), "projective class of a non-square matrix");
        let ints = crate::exactq::primitive_integer_vector(m.entries())
            .expect("zero matrix cannot represent a class");
        let mut entries = bigints_to_i64(&ints)?;
        primitivize(&mut entries);
        let pc = ProjClass { n: m.rows(), entries };
        assert!(!pc.to_int_qmatrix().det().is_zero(), "singular matrix is not a class");
        Ok(pc)
    }

    pub fn identity(n: usize) -> ProjClass {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ProjClass { n, entries }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Primitive integer entries, row-major.
    pub fn int_entries(&self) -> &[i64] {
        &self.entries
    }

    fn to_int_qmatrix(&self) -> QMatrix {
        let rows = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].iter().map(|&x| rat(x)).collect())
            .collect();
        QMatrix::from_rows(rows)
    }

    /// Canonical rational representative: first nonzero entry scaled to 1.
    pub fn rep(&self) -> QMatrix {
        let lead = *self.entries.iter().find(|&&x| x != 0).expect("nonzero");
        let m = self.to_int_qmatrix();
        m.scale(&ratio(1, lead))
    }

    /// True when every entry of the class is ≥ 0 (well defined because the
    /// canonical leading entry is positive).
    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0)
    }
}

impl GroupElement for ProjClass {
    fn mul(&self, other: &Self) -> Result<Self, AutGroupError> {
        assert_eq!(self.n, other.n);
        let mut entries = int_matmul(self.n, &self.entries, &other.entries)?;
        primitivize(&mut entries);
        if entries.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            for x in &mut entries {
                *x = -*x;
            }
        }
        Ok(ProjClass { n: self.n, entries })
    }

    fn inverse(&self) -> Self {
        let inv = self.to_int_qmatrix().inverse().expect("class matrices are invertible");
        ProjClass::from_qmatrix(&inv).expect("inverse of a small-entry class")
    }
}

/// An invertible real matrix up to positive scale: primitive integers with
/// the sign kept, so `{X, −X}` are two distinct classes.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SignedProjClass {
    n: usize,
    entries: Vec<i64>,
}

impl SignedProjClass {
    pub fn from_qmatrix(m: &QMatrix) -> Result<SignedProjClass, AutGroupError> {
        assert_eq!(m.rows(), m.cols());
        // primitive_integer_vector normalizes the leading sign; restore it
        let lead_negative = m.entries().iter().find(|q| !q.is_zero()).is_some_and(Signed::is_negative);
        let ints = crate::exactq::primitive_integer_vector(m.entries())
            .expect("zero matrix cannot represent a class");
        let mut entries = bigints_to_i64(&ints)?;
        if lead_negative {
            for x in &mut entries {
                *x = -*x;
            }
        }
        Ok(SignedProjClass { n: m.rows(), entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn int_entries(&self) -> &[i64] {
        &self.entries
    }

    pub fn negate(&self) -> SignedProjClass {
        SignedProjClass { n: self.n, entries: self.entries.iter().map(|&x| -x).collect() }
    }

    /// Canonical rational representative: first nonzero entry scaled to ±1.
    pub fn rep(&self) -> QMatrix {
        let lead = *self.entries.iter().find(|&&x| x != 0).expect("nonzero");
        let rows = (0..self.n)
            .map(|i| self.entries[i * self.n..(i + 1) * self.n].iter().map(|&x| rat(x)).collect())
            .collect();
        QMatrix::from_rows(rows).scale(&ratio(1, lead.abs()))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|&x| x >= 0)
    }

    /// Forget the sign.
    pub fn to_proj(&self) -> ProjClass {
        let mut entries = self.entries.clone();
        if entries.iter().find(|&&x| x != 0).is_some_and(|&x| x < 0) {
            for x in &mut entries {
                *x = -*x;
            }
        }
        ProjClass { n: self.n, entries }
    }
}

impl GroupElement for SignedProjClass {
    fn mul(&self, other: &Self) -> Result<Self, AutGroupError> {
        assert_eq!(self.n, other.n);
        let mut entries = int_matmul(self.n, &self.entries, &other.entries)?;
        primitivize(&mut entries);
        Ok(SignedProjClass { n: self.n, entries })
    }

    fn inverse(&self) -> Self {
        let inv = self.rep().inverse().expect("class matrices are invertible");
        SignedProjClass::from_qmatrix(&inv).expect("inverse of a small-entry class")
    }
}

/// An exact rational matrix (no projective quotient): integer matrix over a
/// positive denominator, normalized to content 1.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExactMatrix {
    n: usize,
    num: Vec<i64>,
    den: i64,
}

impl ExactMatrix {
    pub fn from_qmatrix(m: &QMatrix) -> Result<ExactMatrix, AutGroupError> {
        assert_eq!(m.rows(), m.cols());
        let mut lcm = BigInt::one();
        for q in m.entries() {
            lcm = num_integer::lcm(lcm, q.denom().clone());
        }
        let nums: Vec<BigInt> = m.entries().iter().map(|q| q.numer() * (&lcm / q.denom())).collect();
        let mut num = bigints_to_i64(&nums)?;
        let mut den = i64::try_from(&lcm).map_err(|_| AutGroupError::EntryOverflow)?;
        let mut g = den;
        for &x in &num {
            g = g.gcd(&x);
        }
        if g > 1 {
            for x in &mut num {
                *x /= g;
            }
            den /= g;
        }
        Ok(ExactMatrix { n: m.rows(), num, den })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn to_qmatrix(&self) -> QMatrix {
        let rows = (0..self.n)
            .map(|i| {
                self.num[i * self.n..(i + 1) * self.n]
                    .iter()
                    .map(|&x| ratio(x, self.den))
                    .collect()
            })
            .collect();
        QMatrix::from_rows(rows)
    }

    /// Positive-scale class of this matrix.
    pub fn to_signed_class(&self) -> SignedProjClass {
        let mut entries = self.num.clone();
        primitivize(&mut entries);
        SignedProjClass { n: self.n, entries }
    }
}

impl GroupElement for ExactMatrix {
    fn mul(&self, other: &Self) -> Result<Self, AutGroupError> {
        assert_eq!(self.n, other.n);
        let mut num = int_matmul(self.n, &self.num, &other.num)?;
        let den128 = i128::from(self.den) * i128::from(other.den);
        let mut g = i64::try_from(den128).map_err(|_| AutGroupError::EntryOverflow)?;
        for &x in &num {
            g = g.gcd(&x);
        }
        let den = i64::try_from(den128).unwrap() / g;
        if g > 1 {
            for x in &mut num {
                *x /= g;
            }
        }
        Ok(ExactMatrix { n: self.n, num, den })
    }

    fn inverse(&self) -> Self {
        let inv = self.to_qmatrix().inverse().expect("group matrices are invertible");
        ExactMatrix::from_qmatrix(&inv).expect("inverse of a small-entry matrix")
    }
}

/// A finite matrix group held as its full element list (breadth-first
/// closure order) with a membership index.
#[derive(Clone, Debug)]
pub struct MatrixGroup<E: GroupElement> {
    elements: Vec<E>,
    index: HashSet<E>,
    generators: Vec<E>,
}

impl<E: GroupElement> MatrixGroup<E> {
    /// Breadth-first closure of the generators and their inverses, starting
    /// from the identity (taken as `g·g⁻¹` of the first generator).
    pub fn closure(generators: &[E], bound: usize) -> Result<MatrixGroup<E>, AutGroupError> {
        let first = generators.first().ok_or(AutGroupError::EmptyGenerators)?;
        let identity = first.mul(&first.inverse())?;
        let mut mulset: Vec<E> = Vec::new();
        for g in generators {
            mulset.push(g.clone());
            mulset.push(g.inverse());
        }
        let mut index = HashSet::new();
        index.insert(identity.clone());
        let mut elements = vec![identity.clone()];
        let mut frontier = vec![identity];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for e in &frontier {
                for g in &mulset {
                    let q = g.mul(e)?;
                    if index.insert(q.clone()) {
                        if index.len() > bound {
                            return Err(AutGroupError::ClosureBound(bound));
                        }
                        elements.push(q.clone());
                        next.push(q);
                    }
                }
            }
            frontier = next;
        }
        Ok(MatrixGroup { elements, index, generators: generators.to_vec() })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, e: &E) -> bool {
        self.index.contains(e)
    }

    pub fn elements(&self) -> &[E] {
        &self.elements
    }

    pub fn generators(&self) -> &[E] {
        &self.generators
    }

    /// True iff the subgroup generated by `subset` is the whole group.
    pub fn is_generated_by(&self, subset: &[E], bound: usize) -> Result<bool, AutGroupError> {
        for e in subset {
            if !self.contains(e) {
                return Ok(false);
            }
        }
        let sub = MatrixGroup::closure(subset, bound)?;
        Ok(sub.order() == self.order() && sub.elements.iter().all(|e| self.contains(e)))
    }
}

/// Closure specialized to projective classes (the spec-facing name).
pub fn projective_closure(
    gens: &[ProjClass],
    bound: usize,
) -> Result<MatrixGroup<ProjClass>, AutGroupError> {
    MatrixGroup::closure(gens, bound)
}

/// Lift a graph automorphism of Δ, given as the permutation it induces on
/// the flat side, to the unique-up-to-scale linear map sending each flat
/// into its image. Nine homogeneous constraints per flat (every annihilator
/// row of the image against every basis row of the source) give a 540×36
/// system whose kernel must be one-dimensional.
pub fn lift_graph_automorphism(
    flat_perm: &[usize],
    flats: &[Flat],
) -> Result<ProjClass, AutGroupError> {
    let dim = flats
        .first()
        .map(|f| f.subspace.ambient_dim())
        .expect("nonempty flat list");
    assert_eq!(flat_perm.len(), flats.len());
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(9 * flats.len());
    for (i, &sigma) in flat_perm.iter().enumerate() {
        let basis = flats[i].subspace.basis();
        let normals_space = flats[sigma].subspace.complement();
        let normals = normals_space.basis();
        for k in 0..normals.rows() {
            for m in 0..basis.rows() {
                let mut row = vec![Rational::zero(); dim * dim];
                for p in 0..dim {
                    if normals[(k, p)].is_zero() {
                        continue;
                    }
                    for q in 0..dim {
                        row[p * dim + q] = &normals[(k, p)] * &basis[(m, q)];
                    }
                }
                rows.push(row);
            }
        }
    }
    let system = QMatrix::from_rows_with_cols(rows, dim * dim);
    let kernel = Subspace::nullspace(&system);
    if kernel.dim() != 1 {
        return Err(AutGroupError::LiftNotUnique(kernel.dim()));
    }
    let vec = kernel.basis().row(0);
    let mat = QMatrix::from_rows((0..dim).map(|p| vec[p * dim..(p + 1) * dim].to_vec()).collect());
    if mat.det().is_zero() {
        return Err(AutGroupError::SingularLift);
    }
    ProjClass::from_qmatrix(&mat)
}

/// The 540×36 lifting system for the identity permutation, exposed for the
/// kernel-dimension checks.
pub fn lift_system_for_identity(flats: &[Flat]) -> QMatrix {
    let dim = flats[0].subspace.ambient_dim();
    let mut rows: Vec<Vec<Rational>> = Vec::new();
    for f in flats {
        let basis = f.subspace.basis();
        let normals_space = f.subspace.complement();
        let normals = normals_space.basis();
        for k in 0..normals.rows() {
            for m in 0..basis.rows() {
                let mut row = vec![Rational::zero(); dim * dim];
                for p in 0..dim {
                    for q in 0..dim {
                        row[p * dim + q] = &normals[(k, p)] * &basis[(m, q)];
                    }
                }
                rows.push(row);
            }
        }
    }
    QMatrix::from_rows_with_cols(rows, dim * dim)
}

/// The permutation a class induces on the flats, or `None` when some image
/// is not in the arrangement.
pub fn flat_action_permutation(a: &ProjClass, flats: &[Flat]) -> Option<Vec<usize>> {
    let keys: HashMap<Vec<i64>, usize> = flats
        .iter()
        .enumerate()
        .map(|(i, f)| (canonical_int_basis_of_subspace(&f.subspace), i))
        .collect();
    let n = a.n();
    let mut perm = Vec::with_capacity(flats.len());
    for f in flats {
        let basis = canonical_int_rows(&f.subspace);
        // image rows: basis · Aᵀ
        let image: Vec<Vec<i128>> = basis
            .iter()
            .map(|row| {
                (0..n)
                    .map(|p| {
                        (0..n)
                            .map(|q| i128::from(row[q]) * i128::from(a.int_entries()[p * n + q]))
                            .sum()
                    })
                    .collect()
            })
            .collect();
        let key = canonical_int_basis(image);
        perm.push(*keys.get(&key)?);
    }
    Some(perm)
}

fn canonical_int_rows(s: &Subspace) -> Vec<Vec<i64>> {
    (0..s.dim())
        .map(|i| {
            let ints = crate::exactq::primitive_integer_vector(s.basis().row(i))
                .expect("basis rows are nonzero");
            bigints_to_i64(&ints).expect("flat bases have small entries")
        })
        .collect()
}

fn canonical_int_basis_of_subspace(s: &Subspace) -> Vec<i64> {
    canonical_int_basis(
        canonical_int_rows(s)
            .into_iter()
            .map(|r| r.into_iter().map(i128::from).collect())
            .collect(),
    )
}

/// Fraction-free Gauss–Jordan over the integers followed by row
/// primitivization: a canonical flattened form of the row space, equal for
/// equal subspaces.
fn canonical_int_basis(mut rows: Vec<Vec<i128>>) -> Vec<i64> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivot_row = 0;
    for col in 0..ncols {
        let Some(r) = (pivot_row..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(r, pivot_row);
        let pivot = rows[pivot_row][col];
        for r in 0..rows.len() {
            if r == pivot_row || rows[r][col] == 0 {
                continue;
            }
            let f = rows[r][col];
            for c in 0..ncols {
                rows[r][c] = rows[r][c] * pivot - f * rows[pivot_row][c];
            }
            // keep entries small
            let mut g: i128 = 0;
            for &x in &rows[r] {
                g = g.gcd(&x);
            }
            if g > 1 {
                for x in &mut rows[r] {
                    *x /= g;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    let mut out = Vec::new();
    for row in &rows {
        if row.iter().all(|&x| x == 0) {
            continue;
        }
        let mut g: i128 = 0;
        for &x in row {
            g = g.gcd(&x);
        }
        let lead = row.iter().find(|&&x| x != 0).copied().unwrap();
        let sign = if lead < 0 { -1 } else { 1 };
        for &x in row {
            out.push(i64::try_from(x / g * sign).expect("canonical basis entry fits i64"));
        }
    }
    out
}

/// Scalar `c` with `P(A·x) = c·P(x)`, when it exists. `a` must be
/// invertible.
pub fn is_variety_automorphism(a: &QMatrix, p: &MultiPoly) -> Option<Rational> {
    assert!(!a.det().is_zero(), "singular matrix cannot be an automorphism");
    p.compose_linear(a).unwrap().proportional(p)
}

/// Split every complex-scale class into its two positive-scale classes.
/// The order exactly doubles; a class equal to its own negation would be a
/// contradiction and is reported as an error.
pub fn positive_real_group(
    g: &MatrixGroup<ProjClass>,
) -> Result<MatrixGroup<SignedProjClass>, AutGroupError> {
    let mut index = HashSet::new();
    let mut elements = Vec::with_capacity(2 * g.order());
    for e in g.elements() {
        let plus = SignedProjClass { n: e.n(), entries: e.int_entries().to_vec() };
        let minus = plus.negate();
        if plus == minus || !index.insert(plus.clone()) || !index.insert(minus.clone()) {
            return Err(AutGroupError::NegationFixedClass);
        }
        elements.push(plus);
        elements.push(minus);
    }
    let mut generators: Vec<SignedProjClass> = g
        .generators()
        .iter()
        .map(|e| SignedProjClass { n: e.n(), entries: e.int_entries().to_vec() })
        .collect();
    if let Some(first) = generators.first() {
        let id = first.mul(&first.inverse())?;
        generators.push(id.negate());
    }
    Ok(MatrixGroup { elements, index, generators })
}

/// The classes whose canonical representative has only nonnegative entries.
pub fn nonnegative_elements(g: &MatrixGroup<SignedProjClass>) -> Vec<SignedProjClass> {
    g.elements().iter().filter(|e| e.is_nonnegative()).cloned().collect()
}

/// If `m` is (a positive multiple of) an edge permutation matrix induced by
/// a vertex relabeling of `K_n`, return that relabeling.
pub fn vertex_relabeling_of(m: &QMatrix, n: usize) -> Option<Vec<usize>> {
    for pi in crate::varieties::vertex_relabelings(n) {
        if edge_permutation_matrix(&pi) == *m {
            return Some(pi);
        }
    }
    None
}

/// The exceptional averaging symmetry: fixes the two diagonals and replaces
/// the four cycle lengths by half the signed sums of the others.
pub fn regge_matrix() -> QMatrix {
    let ei = EdgeIndex::new(4);
    let cycle = [(1, 2), (2, 3), (3, 4), (1, 4)];
    let mut m = QMatrix::zeros(6, 6);
    m[(ei.slot((1, 3)), ei.slot((1, 3)))] = Rational::one();
    m[(ei.slot((2, 4)), ei.slot((2, 4)))] = Rational::one();
    let half = ratio(1, 2);
    for &e in &cycle {
        for &f in &cycle {
            m[(ei.slot(e), ei.slot(f))] = if e == f { -&half } else { half.clone() };
        }
    }
    m
}

/// The 24 projective classes of edge permutations induced by vertex
/// relabelings of `K_4`.
pub fn vertex_perm_classes() -> Vec<ProjClass> {
    crate::varieties::vertex_relabelings(4)
        .iter()
        .map(|pi| ProjClass::from_qmatrix(&edge_permutation_matrix(pi)).unwrap())
        .collect()
}

/// The 32 projective classes of the 64 diagonal sign-flip matrices.
pub fn sign_flip_classes() -> Vec<ProjClass> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for mask in 0..64u8 {
        let mut m = QMatrix::zeros(6, 6);
        for i in 0..6 {
            m[(i, i)] = if mask >> i & 1 == 0 { rat(1) } else { rat(-1) };
        }
        let pc = ProjClass::from_qmatrix(&m).unwrap();
        if seen.insert(pc.clone()) {
            out.push(pc);
        }
    }
    out
}

/// Fast exact check that a class preserves the unsquared defining polynomial
/// of `L_{2,4}` up to scale, specialized to the determinant structure: the
/// pullback is assembled through the 3×3 matrix of composed quadratic forms,
/// entirely in machine integers.
pub struct PullbackChecker {
    deg2_index: HashMap<[u16; 6], usize>,
    deg2_exps: Vec<[u16; 6]>,
    deg4_exps: Vec<[u16; 6]>,
    /// table2[a][b] = degree-4 index of deg2[a]·deg2[b]
    table2: Vec<Vec<usize>>,
    /// table24[a][b] = degree-6 index of deg2[a]·deg4[b]
    table24: Vec<Vec<usize>>,
    /// dense coefficients of the unsquared defining polynomial
    target: Vec<i128>,
}

fn homogeneous_exponents(nvars: usize, degree: u16) -> Vec<[u16; 6]> {
    assert_eq!(nvars, 6);
    let mut out = Vec::new();
    let mut current = [0u16; 6];
    fn rec(pos: usize, remaining: u16, current: &mut [u16; 6], out: &mut Vec<[u16; 6]>) {
        if pos == 5 {
            current[5] = remaining;
            out.push(*current);
            return;
        }
        for e in 0..=remaining {
            current[pos] = e;
            rec(pos + 1, remaining - e, current, out);
        }
    }
    rec(0, degree, &mut current, &mut out);
    out
}

impl PullbackChecker {
    pub fn new() -> PullbackChecker {
        let build = |deg: u16| {
            let exps = homogeneous_exponents(6, deg);
            let index: HashMap<[u16; 6], usize> =
                exps.iter().enumerate().map(|(i, &e)| (e, i)).collect();
            (exps, index)
        };
        let (deg2_exps, deg2_index) = build(2);
        let (deg4_exps, deg4_index) = build(4);
        let (deg6_exps, deg6_index) = build(6);

        let add = |a: &[u16; 6], b: &[u16; 6]| -> [u16; 6] {
            std::array::from_fn(|i| a[i] + b[i])
        };
        let table2: Vec<Vec<usize>> = deg2_exps
            .iter()
            .map(|a| deg2_exps.iter().map(|b| deg4_index[&add(a, b)]).collect())
            .collect();
        let table24: Vec<Vec<usize>> = deg2_exps
            .iter()
            .map(|a| deg4_exps.iter().map(|b| deg6_index[&add(a, b)]).collect())
            .collect();

        let p = defining_poly(2).unwrap().unsquared;
        let mut target = vec![0i128; deg6_exps.len()];
        for (m, c) in p.terms() {
            assert!(c.denom().is_one(), "defining polynomial has integer coefficients");
            let key: [u16; 6] = std::array::from_fn(|i| m.0[i]);
            target[deg6_index[&key]] = i128::try_from(c.numer()).unwrap();
        }
        PullbackChecker { deg2_index, deg2_exps, deg4_exps, table2, table24, target }
    }

    /// Proportionality factor of `P(A·x)` against `P(x)` as an exact integer
    /// fraction, or `None` when not proportional. Entries of `a` must stay
    /// below 10⁴ so that every intermediate fits in `i128`.
    pub fn pullback_factor(&self, a: &ProjClass) -> Option<(i128, i128)> {
        assert_eq!(a.n(), 6);
        assert!(
            a.int_entries().iter().all(|&x| x.abs() < 10_000),
            "entry bound for overflow-free pullback"
        );
        let ei = EdgeIndex::new(4);
        let n = 6usize;
        // squared linear forms q_e = ((A x)_e)^2 as dense degree-2 vectors
        let q: Vec<Vec<i128>> = (0..n)
            .map(|e| {
                let row = &a.int_entries()[e * n..(e + 1) * n];
                let mut dense = vec![0i128; self.deg2_exps.len()];
                for i in 0..n {
                    if row[i] == 0 {
                        continue;
                    }
                    for j in i..n {
                        if row[j] == 0 {
                            continue;
                        }
                        let mut exps = [0u16; 6];
                        exps[i] += 1;
                        exps[j] += 1;
                        let coef = if i == j {
                            i128::from(row[i]) * i128::from(row[j])
                        } else {
                            2 * i128::from(row[i]) * i128::from(row[j])
                        };
                        dense[self.deg2_index[&exps]] += coef;
                    }
                }
                dense
            })
            .collect();
        // entries of the composed Gram-style matrix, all degree-2 dense
        let k = |aa: usize, bb: usize| -> Vec<i128> {
            if aa == bb {
                q[ei.slot((aa, 4))].iter().map(|&c| 2 * c).collect()
            } else {
                let (sa, sb, sab) = (ei.slot((aa, 4)), ei.slot((bb, 4)), ei.slot((aa, bb)));
                (0..self.deg2_exps.len()).map(|t| q[sa][t] + q[sb][t] - q[sab][t]).collect()
            }
        };
        let (k11, k12, k13) = (k(1, 1), k(1, 2), k(1, 3));
        let (k22, k23, k33) = (k(2, 2), k(2, 3), k(3, 3));

        let mul22 = |x: &[i128], y: &[i128]| -> Vec<i128> {
            let mut out = vec![0i128; self.deg4_exps.len()];
            for (ia, &ca) in x.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (ib, &cb) in y.iter().enumerate() {
                    if cb != 0 {
                        out[self.table2[ia][ib]] += ca * cb;
                    }
                }
            }
            out
        };
        let mul24_acc = |acc: &mut [i128], x: &[i128], y: &[i128], sign: i128| {
            for (ia, &ca) in x.iter().enumerate() {
                if ca == 0 {
                    continue;
                }
                for (ib, &cb) in y.iter().enumerate() {
                    if cb != 0 {
                        acc[self.table24[ia][ib]] += sign * ca * cb;
                    }
                }
            }
        };
        let sub4 = |x: Vec<i128>, y: Vec<i128>| -> Vec<i128> {
            x.into_iter().zip(y).map(|(a, b)| a - b).collect()
        };

        // det of the symmetric 3×3: k11(k22k33−k23²) − k12(k12k33−k13k23) + k13(k12k23−k13k22)
        let m1 = sub4(mul22(&k22, &k33), mul22(&k23, &k23));
        let m2 = sub4(mul22(&k12, &k33), mul22(&k13, &k23));
        let m3 = sub4(mul22(&k12, &k23), mul22(&k13, &k22));
        let mut det = vec![0i128; self.target.len()];
        mul24_acc(&mut det, &k11, &m1, 1);
        mul24_acc(&mut det, &k12, &m2, -1);
        mul24_acc(&mut det, &k13, &m3, 1);

        // proportionality against the target by cross-multiplication
        let lead = self.target.iter().position(|&c| c != 0).unwrap();
        if det[lead] == 0 {
            return None;
        }
        let (num, den) = (det[lead], self.target[lead]);
        for (i, &t) in self.target.iter().enumerate() {
            if det[i] * den != t * num {
                return None;
            }
        }
        let g = num.gcd(&den);
        let sign = if den < 0 { -1 } else { 1 };
        Some((num / g * sign, den / g * sign))
    }
}

impl Default for PullbackChecker {
    fn default() -> Self {
        Self::new()
    }
}

/// Automorphism classes of the one-dimensional three-point variety, which is
/// the union of four hyperplanes: every permutation of the four normal lines
/// is solved for its unique-up-to-scale matrix, and the matrices that pull
/// the product of the four linear forms back to a multiple of itself are
/// closed into a group.
pub fn l13_automorphisms(bound: usize) -> Result<MatrixGroup<ProjClass>, AutGroupError> {
    // normals in coordinates (l12, l13, l23)
    let normals: [[i64; 3]; 4] = [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]];
    let forms = l13_hyperplane_forms();
    let product = forms
        .iter()
        .skip(1)
        .fold(forms[0].clone(), |acc, f| acc.mul(f).unwrap());

    let mut kept = Vec::new();
    for sigma in crate::varieties::vertex_relabelings(4) {
        // sigma permutes the four normals (1-based images)
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        for (i, &s) in sigma.iter().enumerate() {
            let ni = normals[i];
            let nimg = normals[s - 1];
            // (Aᵀ n_img) × n_i = 0: three equations linear in the entries of A
            // u_p = Σ_q A[q][p]·n_img[q]; coefficient of A[q][p] is n_img[q]
            for k in 0..3 {
                let (p1, p2) = ((k + 1) % 3, (k + 2) % 3);
                let mut row = vec![Rational::zero(); 9];
                for qv in 0..3 {
                    // u_{p1}·n_i[p2] − u_{p2}·n_i[p1]
                    row[qv * 3 + p1] = rat(nimg[qv] * ni[p2]);
                    let existing = &row[qv * 3 + p2] - &rat(nimg[qv] * ni[p1]);
                    row[qv * 3 + p2] = existing;
                }
                rows.push(row);
            }
        }
        let kernel = Subspace::nullspace(&QMatrix::from_rows_with_cols(rows, 9));
        if kernel.dim() != 1 {
            return Err(AutGroupError::LiftNotUnique(kernel.dim()));
        }
        let v = kernel.basis().row(0);
        let a = QMatrix::from_rows(vec![v[0..3].to_vec(), v[3..6].to_vec(), v[6..9].to_vec()]);
        if a.det().is_zero() {
            return Err(AutGroupError::SingularLift);
        }
        if is_variety_automorphism(&a, &product).is_some() {
            kept.push(ProjClass::from_qmatrix(&a)?);
        }
    }
    MatrixGroup::closure(&kept, bound)
}

/// The four linear forms whose product cuts out the three-point variety, in
/// coordinates `(l12, l13, l23)`.
pub fn l13_hyperplane_forms() -> Vec<MultiPoly> {
    let coeffs = [[1, 1, -1], [1, -1, 1], [-1, 1, 1], [1, 1, 1]];
    coeffs
        .iter()
        .map(|c| MultiPoly::linear_form(&[rat(c[0]), rat(c[1]), rat(c[2])]))
        .collect()
}

/// True when the canonical representative is a signed permutation matrix:
/// one nonzero entry of absolute value 1 per row and column.
pub fn is_signed_permutation(entries: &[i64], n: usize) -> bool {
    let mut col_seen = vec![false; n];
    for i in 0..n {
        let mut found = false;
        for j in 0..n {
            let x = entries[i * n + j];
            if x == 0 {
                continue;
            }
            if found || x.abs() != 1 || col_seen[j] {
                return false;
            }
            found = true;
            col_seen[j] = true;
        }
        if !found {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::singular_flats;

    #[test]
    fn proj_class_canonical_form() {
        let m = QMatrix::from_int_rows(&[&[0, -2], &[2, 0]]);
        let pc = ProjClass::from_qmatrix(&m).unwrap();
        assert_eq!(pc.int_entries(), &[0, 1, -1, 0]);
        let rep = pc.rep();
        assert_eq!(rep[(0, 1)], rat(1));
        assert_eq!(rep[(1, 0)], rat(-1));
        // scaling the input does not change the class
        let scaled = ProjClass::from_qmatrix(&m.scale(&ratio(-7, 3))).unwrap();
        assert_eq!(pc, scaled);
    }

    #[test]
    fn signed_class_tracks_sign() {
        let m = QMatrix::from_int_rows(&[&[-1, 0], &[0, 1]]);
        let s = SignedProjClass::from_qmatrix(&m).unwrap();
        assert_eq!(s.int_entries(), &[-1, 0, 0, 1]);
        assert_ne!(s, s.negate());
        assert_eq!(s.to_proj(), s.negate().to_proj());
        // positive scaling does not change the class
        let t = SignedProjClass::from_qmatrix(&m.scale(&ratio(5, 2))).unwrap();
        assert_eq!(s, t);
    }

    #[test]
    fn trivial_closures() {
        let id = ProjClass::identity(6);
        let g = projective_closure(&[id], 10).unwrap();
        assert_eq!(g.order(), 1);
        assert!(matches!(
            projective_closure(&[], 10),
            Err(AutGroupError::EmptyGenerators)
        ));
    }

    #[test]
    fn closure_bound_triggers() {
        let perms = vertex_perm_classes();
        assert!(matches!(
            projective_closure(&perms, 10),
            Err(AutGroupError::ClosureBound(10))
        ));
    }

    #[test]
    fn expected_subgroup_order() {
        let mut gens = vertex_perm_classes();
        gens.extend(sign_flip_classes());
        let g = projective_closure(&gens, DEFAULT_SAFETY_BOUND).unwrap();
        assert_eq!(g.order(), 768);
        let pos = positive_real_group(&g).unwrap();
        assert_eq!(pos.order(), 1536);
    }

    #[test]
    fn regge_matrix_shape() {
        let r = regge_matrix();
        let ones = vec![rat(1); 6];
        assert_eq!(r.mul_vec(&ones), ones);
        let ei = EdgeIndex::new(4);
        for diag in [(1, 3), (2, 4)] {
            let s = ei.slot(diag);
            for j in 0..6 {
                assert_eq!(r[(s, j)], if j == s { rat(1) } else { rat(0) });
            }
        }
        assert_eq!(&r * &r, QMatrix::identity(6));
    }

    #[test]
    fn regge_preserves_the_variety() {
        let p = defining_poly(2).unwrap().unsquared;
        let c = is_variety_automorphism(&regge_matrix(), &p).expect("regge preserves L24");
        // symbolic expansion gives exact invariance, not just proportionality
        assert_eq!(c, rat(1));
        // identity gives exactly 1; a stray diagonal stretch breaks the variety
        assert_eq!(is_variety_automorphism(&QMatrix::identity(6), &p), Some(rat(1)));
        let mut stretch = QMatrix::identity(6);
        stretch[(0, 0)] = rat(2);
        assert_eq!(is_variety_automorphism(&stretch, &p), None);
    }

    #[test]
    fn pullback_checker_matches_generic_compose() {
        let checker = PullbackChecker::new();
        let p = defining_poly(2).unwrap().unsquared;
        let id = ProjClass::identity(6);
        assert_eq!(checker.pullback_factor(&id), Some((1, 1)));
        let regge = ProjClass::from_qmatrix(&regge_matrix()).unwrap();
        let fast = checker.pullback_factor(&regge).unwrap();
        // generic path on the canonical representative must agree up to the
        // projective scale normalization: compare against rep()
        let slow = is_variety_automorphism(&regge.rep(), &p).unwrap();
        assert_eq!(ratio(fast.0 as i64, fast.1 as i64), slow);
        // a vertex permutation preserves the polynomial with factor 1
        let swap = &vertex_perm_classes()[5];
        assert_eq!(checker.pullback_factor(swap), Some((1, 1)));
        // something outside the group fails
        let mut stretch = QMatrix::identity(6);
        stretch[(0, 0)] = rat(2);
        assert_eq!(checker.pullback_factor(&ProjClass::from_qmatrix(&stretch).unwrap()), None);
    }

    #[test]
    fn identity_lift_is_identity() {
        let flats = singular_flats();
        let system = lift_system_for_identity(&flats);
        assert_eq!((system.rows(), system.cols()), (540, 36));
        let kernel = Subspace::nullspace(&system);
        assert_eq!(kernel.dim(), 1);
        let id_perm: Vec<usize> = (0..60).collect();
        let lifted = lift_graph_automorphism(&id_perm, &flats).unwrap();
        assert_eq!(lifted, ProjClass::identity(6));
    }

    #[test]
    fn vertex_swap_lift_is_the_edge_permutation() {
        let flats = singular_flats();
        let swap = edge_permutation_matrix(&[2, 1, 3, 4]);
        let target = ProjClass::from_qmatrix(&swap).unwrap();
        let perm = flat_action_permutation(&target, &flats).expect("permutes the flats");
        let lifted = lift_graph_automorphism(&perm, &flats).unwrap();
        assert_eq!(lifted, target);
    }

    #[test]
    fn l13_group_is_s4_of_signed_permutations() {
        let g = l13_automorphisms(DEFAULT_SAFETY_BOUND).unwrap();
        assert_eq!(g.order(), 24);
        assert!(g.contains(&ProjClass::identity(3)));
        for e in g.elements() {
            assert!(is_signed_permutation(e.int_entries(), 3));
        }
    }

    #[test]
    fn l13_product_form_matches_defining_polynomial() {
        let forms = l13_hyperplane_forms();
        let product = forms
            .iter()
            .skip(1)
            .fold(forms[0].clone(), |acc, f| acc.mul(f).unwrap());
        let p = defining_poly(1).unwrap().unsquared;
        let c = product.proportional(&p).expect("product of forms cuts out the variety");
        assert!(!c.is_zero());
    }
}
