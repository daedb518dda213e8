//! The reflection group of the 30 type I and II intersection lines, its
//! crystallographic root system, and the classification of the resulting
//! Weyl group by Dynkin-diagram shape.
//!
//! Each line direction `f` contributes the two roots `±2f/‖f‖`, which are
//! integer vectors of squared norm 4 here. The group is closed exactly; the
//! diagram is classified among the simply-laced rank-6 trees by its branch
//! structure, with the group order kept as corroboration only.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::arrangement::Line;
use crate::autgroup::{AutGroupError, ExactMatrix, MatrixGroup, SignedProjClass};
use crate::exactq::{rat, ratio, QMatrix, Rational};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoxeterError {
    #[error("reflection of the zero vector")]
    ZeroVector,
    #[error("line direction does not scale to an integral root")]
    NonIntegralRoot,
    #[error("root set is not invariant under its own reflections")]
    NotInvariant,
    #[error("pairing 2(f·g)/(g·g) is not an integer")]
    NonIntegralPairing,
    #[error("no valid generic vector found after {0} attempts")]
    DegenerateGenericVector(usize),
    #[error("simple roots meet at an angle other than π/2 or 2π/3")]
    UnexpectedAngle,
    #[error("Dynkin diagram is not a connected tree")]
    NotATree,
    #[error("diagram shape is not a simply-laced rank-6 type")]
    UnknownShape,
    #[error(transparent)]
    Group(#[from] AutGroupError),
}

/// An integer root vector.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Root(pub Vec<i64>);

impl Root {
    pub fn dot(&self, other: &Root) -> i64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a * b).sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.dot(self)
    }

    pub fn negate(&self) -> Root {
        Root(self.0.iter().map(|&x| -x).collect())
    }

    fn add(&self, other: &Root) -> Root {
        Root(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// The 60 roots together with the 30 generating reflections.
#[derive(Clone, Debug)]
pub struct RootSystem {
    pub roots: Vec<Root>,
    pub reflections: Vec<QMatrix>,
}

/// Positive/simple decomposition induced by a generic functional, with the
/// integer pairing matrix of the simple roots.
#[derive(Clone, Debug)]
pub struct SimpleSystem {
    pub positive: Vec<Root>,
    pub simple: Vec<Root>,
    /// `cartan[i][j] = 2(s_i·s_j)/(s_j·s_j)`.
    pub cartan: Vec<Vec<i64>>,
}

/// Simply-laced rank-6 tree shapes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DynkinType {
    A6,
    D6,
    E6,
}

impl DynkinType {
    pub fn label(self) -> &'static str {
        match self {
            DynkinType::A6 => "A6",
            DynkinType::D6 => "D6",
            DynkinType::E6 => "E6",
        }
    }
}

/// Diagram on the simple roots: an edge wherever the angle is 2π/3.
#[derive(Clone, Debug)]
pub struct DynkinDiagram {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub dynkin_type: DynkinType,
}

impl DynkinDiagram {
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph dynkin {\n");
        let _ = writeln!(s, "  label=\"{}\";", self.dynkin_type.label());
        for i in 0..self.nodes {
            let _ = writeln!(s, "  r{i};");
        }
        for &(a, b) in &self.edges {
            let _ = writeln!(s, "  r{a} -- r{b};");
        }
        s.push_str("}\n");
        s
    }
}

/// Reflection across the hyperplane orthogonal to `f`:
/// `R = I − 2·f·fᵀ/(f·f)`.
pub fn reflection(f: &[i64]) -> Result<QMatrix, CoxeterError> {
    let norm_sq: i64 = f.iter().map(|&x| x * x).sum();
    if norm_sq == 0 {
        return Err(CoxeterError::ZeroVector);
    }
    let n = f.len();
    let mut m = QMatrix::identity(n);
    for i in 0..n {
        for j in 0..n {
            let v = &m[(i, j)] - &ratio(2 * f[i] * f[j], norm_sq);
            m[(i, j)] = v;
        }
    }
    Ok(m)
}

fn line_directions(lines: &[Line]) -> Vec<Vec<i64>> {
    lines.iter().map(|l| l.direction.clone()).collect()
}

/// Exact closure of the 30 reflections. No projective quotient: distinct
/// matrices stay distinct.
pub fn reflection_group(
    lines30: &[Line],
    bound: usize,
) -> Result<MatrixGroup<ExactMatrix>, CoxeterError> {
    let gens: Result<Vec<ExactMatrix>, CoxeterError> = line_directions(lines30)
        .iter()
        .map(|f| Ok(ExactMatrix::from_qmatrix(&reflection(f)?)?))
        .collect();
    Ok(MatrixGroup::closure(&gens?, bound)?)
}

/// Build the root system `{±2f/‖f‖}` from the 30 line directions and verify
/// that it is reduced and crystallographic: the set is invariant under every
/// generating reflection and all pairings `2(f·g)/(g·g)` are integers.
pub fn root_system(lines30: &[Line]) -> Result<RootSystem, CoxeterError> {
    let mut roots = Vec::with_capacity(2 * lines30.len());
    let mut reflections = Vec::with_capacity(lines30.len());
    for f in line_directions(lines30) {
        let norm_sq: i64 = f.iter().map(|&x| x * x).sum();
        // 2f/‖f‖ is integral exactly when ‖f‖² is 1 or 4 for primitive f
        let root = match norm_sq {
            1 => Root(f.iter().map(|&x| 2 * x).collect()),
            4 => Root(f.clone()),
            _ => return Err(CoxeterError::NonIntegralRoot),
        };
        reflections.push(reflection(&f)?);
        roots.push(root.negate());
        roots.push(root);
    }

    let root_set: HashSet<&Root> = roots.iter().collect();
    if root_set.len() != roots.len() {
        return Err(CoxeterError::NonIntegralRoot);
    }
    for g in &roots {
        for h in &roots {
            let twice = 2 * g.dot(h);
            if twice % h.norm_sq() != 0 {
                return Err(CoxeterError::NonIntegralPairing);
            }
        }
    }
    for refl in &reflections {
        for g in &roots {
            let image = apply_rational_matrix(refl, &g.0)?;
            if !root_set.contains(&image) {
                return Err(CoxeterError::NotInvariant);
            }
        }
    }
    Ok(RootSystem { roots, reflections })
}

fn apply_rational_matrix(m: &QMatrix, v: &[i64]) -> Result<Root, CoxeterError> {
    let rational: Vec<Rational> = v.iter().map(|&x| rat(x)).collect();
    let out = m.mul_vec(&rational);
    out.iter()
        .map(|q| {
            if q.denom() == &num_bigint::BigInt::from(1) {
                i64::try_from(q.numer()).map_err(|_| CoxeterError::NonIntegralRoot)
            } else {
                Err(CoxeterError::NonIntegralRoot)
            }
        })
        .collect::<Result<Vec<i64>, _>>()
        .map(Root)
}

/// Default generic functional: distinct powers of 3 cannot be orthogonal or
/// proportional to any ±1/±2 root, but the choice is validated anyway.
pub const GENERIC_H: [i64; 6] = [1, 3, 9, 27, 81, 243];

/// Split into positive roots under `h` and extract the simple roots (the
/// positive roots that are not sums of two positive roots).
pub fn simple_roots(rs: &RootSystem, h: &[i64]) -> Result<SimpleSystem, CoxeterError> {
    let mut candidates: Vec<Vec<i64>> = vec![h.to_vec()];
    for base in [5i64, 7, 11, 13] {
        let mut v = Vec::with_capacity(h.len());
        let mut p = 1i64;
        for _ in 0..h.len() {
            v.push(p);
            p *= base;
        }
        candidates.push(v);
    }
    let attempts = candidates.len();
    for cand in candidates {
        if let Some(sys) = try_simple_roots(rs, &cand) {
            return Ok(sys);
        }
    }
    Err(CoxeterError::DegenerateGenericVector(attempts))
}

fn try_simple_roots(rs: &RootSystem, h: &[i64]) -> Option<SimpleSystem> {
    let hr = Root(h.to_vec());
    if rs.roots.iter().any(|f| hr.dot(f) == 0) {
        return None;
    }
    let positive: Vec<Root> = rs.roots.iter().filter(|f| hr.dot(f) > 0).cloned().collect();
    if 2 * positive.len() != rs.roots.len() {
        return None;
    }
    let pos_set: HashSet<&Root> = positive.iter().collect();
    let simple: Vec<Root> = positive
        .iter()
        .filter(|f| {
            !positive.iter().any(|g1| {
                let g2 = Root(f.0.iter().zip(&g1.0).map(|(a, b)| a - b).collect());
                pos_set.contains(&g2) && g1.add(&g2) == **f
            })
        })
        .cloned()
        .collect();
    let cartan: Vec<Vec<i64>> = simple
        .iter()
        .map(|f| simple.iter().map(|g| 2 * f.dot(g) / g.norm_sq()).collect())
        .collect();
    Some(SimpleSystem { positive, simple, cartan })
}

impl SimpleSystem {
    /// Expand a root over the simple-root basis; positive roots must come
    /// out with nonnegative integer coefficients.
    pub fn coordinates(&self, root: &Root) -> Option<Vec<Rational>> {
        let dim = root.0.len();
        let cols = QMatrix::from_rows(
            (0..dim)
                .map(|i| self.simple.iter().map(|s| rat(s.0[i])).collect())
                .collect(),
        );
        let inv = cols.inverse()?;
        let v: Vec<Rational> = root.0.iter().map(|&x| rat(x)).collect();
        Some(inv.mul_vec(&v))
    }

    pub fn spans_fully(&self) -> bool {
        let rows = QMatrix::from_rows(
            self.simple.iter().map(|s| s.0.iter().map(|&x| rat(x)).collect()).collect(),
        );
        rows.rank() == self.simple.first().map_or(0, |s| s.0.len())
    }
}

/// Classify six simple roots by the shape of their diagram. Only angles of
/// π/2 (no edge) and 2π/3 (single edge) may occur in the simply-laced case;
/// anything else is rejected.
pub fn dynkin_classify(simple: &[Root]) -> Result<DynkinDiagram, CoxeterError> {
    let n = simple.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            let dot = simple[i].dot(&simple[j]);
            if dot == 0 {
                continue;
            }
            // cos²θ = dot²/(‖f‖²‖g‖²) must be 1/4, with an obtuse angle
            if dot > 0 || 4 * dot * dot != simple[i].norm_sq() * simple[j].norm_sq() {
                return Err(CoxeterError::UnexpectedAngle);
            }
            edges.push((i, j));
        }
    }
    if edges.len() != n - 1 || !is_connected(n, &edges) {
        return Err(CoxeterError::NotATree);
    }
    let mut degree = vec![0usize; n];
    for &(a, b) in &edges {
        degree[a] += 1;
        degree[b] += 1;
    }
    let forks: Vec<usize> = (0..n).filter(|&v| degree[v] >= 3).collect();
    let dynkin_type = match forks.len() {
        0 => DynkinType::A6,
        1 => {
            let mut lengths = branch_lengths(&edges, forks[0]);
            lengths.sort_unstable();
            match lengths.as_slice() {
                [1, 1, 3] => DynkinType::D6,
                [1, 2, 2] => DynkinType::E6,
                _ => return Err(CoxeterError::UnknownShape),
            }
        }
        _ => return Err(CoxeterError::UnknownShape),
    };
    Ok(DynkinDiagram { nodes: n, edges, dynkin_type })
}

fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    let mut seen = vec![false; n];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for &(a, b) in edges {
            for (x, y) in [(a, b), (b, a)] {
                if x == v && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn branch_lengths(edges: &[(usize, usize)], fork: usize) -> Vec<usize> {
    let neighbors: Vec<usize> = edges
        .iter()
        .filter_map(|&(a, b)| {
            if a == fork {
                Some(b)
            } else if b == fork {
                Some(a)
            } else {
                None
            }
        })
        .collect();
    neighbors
        .into_iter()
        .map(|start| {
            // walk away from the fork counting vertices
            let mut length = 1;
            let (mut prev, mut cur) = (fork, start);
            loop {
                let next: Vec<usize> = edges
                    .iter()
                    .filter_map(|&(a, b)| {
                        if a == cur && b != prev {
                            Some(b)
                        } else if b == cur && a != prev {
                            Some(a)
                        } else {
                            None
                        }
                    })
                    .collect();
                match next.as_slice() {
                    [one] => {
                        prev = cur;
                        cur = *one;
                        length += 1;
                    }
                    _ => return length, // leaf reached (or a nested fork)
                }
            }
        })
        .collect()
}

/// Positive-scale classes of all group elements. The count matching the
/// group order certifies that no two elements differ by a positive scale.
pub fn signed_classes(w: &MatrixGroup<ExactMatrix>) -> HashSet<SignedProjClass> {
    w.elements().iter().map(ExactMatrix::to_signed_class).collect()
}
