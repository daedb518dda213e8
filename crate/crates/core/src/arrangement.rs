//! The singular arrangement of the unsquared measurement variety of four
//! planar points: 60 three-dimensional flats in the 6-dimensional edge space,
//! their 46 one-dimensional intersection lines, and the bipartite incidence
//! graph between the two.
//!
//! Flats are generated from the explicit equation templates of the three
//! types (collinear sign patterns, collapsed edges, collapsed triangles)
//! rather than from a Jacobian-ideal decomposition; singularity is then
//! verified independently by symbolic containment and gradient vanishing.

use std::collections::HashMap;
use std::fmt;
use std::fmt::Write as _;

use num_traits::{One, Zero};

use crate::exactq::{QMatrix, Rational, Subspace};
use crate::graphauto::ColoredGraph;
use crate::mpoly::MultiPoly;
use crate::varieties::{Edge, EdgeIndex};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum FlatType {
    I,
    II,
    III,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum LineType {
    I,
    II,
    III,
}

/// The data that generated a flat, kept for labeling and provenance.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FlatOrigin {
    /// Collinear configurations; signs are `(s13, s14, s23, s24, s34)`.
    Collinear { signs: [i8; 5] },
    /// One collapsed edge; signs attach to the two comparison equations.
    CollapsedEdge { edge: Edge, signs: [i8; 2] },
    /// One collapsed triangle.
    CollapsedTriangle { triangle: [usize; 3] },
}

impl fmt::Display for FlatOrigin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlatOrigin::Collinear { signs } => {
                let s: String = signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
                write!(f, "I[{s}]")
            }
            FlatOrigin::CollapsedEdge { edge, signs } => {
                let s: String = signs.iter().map(|&x| if x > 0 { '+' } else { '-' }).collect();
                write!(f, "II[{}{};{s}]", edge.0, edge.1)
            }
            FlatOrigin::CollapsedTriangle { triangle } => {
                write!(f, "III[{}{}{}]", triangle[0], triangle[1], triangle[2])
            }
        }
    }
}

/// A three-dimensional singular flat in the 6-dimensional edge space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flat {
    pub subspace: Subspace,
    pub flat_type: FlatType,
    pub origin: FlatOrigin,
}

/// A one-dimensional intersection line of the arrangement.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Line {
    pub subspace: Subspace,
    /// Primitive integer direction (content 1, first nonzero entry positive).
    pub direction: Vec<i64>,
    pub line_type: LineType,
    /// True when the line already arises as a pairwise intersection; false
    /// when only a triple intersection produces it.
    pub from_pair: bool,
}

/// Bipartite incidence graph Δ between flats and lines.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub flats: Vec<Flat>,
    pub lines: Vec<Line>,
    /// `adjacency[f][l]` iff line `l` lies inside flat `f`.
    pub adjacency: Vec<Vec<bool>>,
}

fn sign_rational(s: i8) -> Rational {
    crate::exactq::rat(i64::from(s))
}

/// Normals (coefficient rows) of the three equations cutting out a Type I
/// flat with signs `(s13, s14, s23, s24, s34)`, in the slot order
/// `12, 13, 23, 14, 24, 34`.
pub fn collinear_equations(signs: [i8; 5]) -> QMatrix {
    let [s13, s14, s23, s24, s34] = signs;
    let z = || Rational::zero();
    QMatrix::from_rows(vec![
        vec![sign_rational(1), -sign_rational(s13), sign_rational(s23), z(), z(), z()],
        vec![sign_rational(1), z(), z(), -sign_rational(s14), sign_rational(s24), z()],
        vec![z(), sign_rational(s13), z(), -sign_rational(s14), z(), sign_rational(s34)],
    ])
}

/// The 60 singular flats: 32 Type I, 24 Type II, 4 Type III, in that order.
pub fn singular_flats() -> Vec<Flat> {
    let ei = EdgeIndex::new(4);
    let mut flats = Vec::with_capacity(60);

    for mask in 0..32u8 {
        let signs: [i8; 5] = std::array::from_fn(|b| if mask >> b & 1 == 0 { 1 } else { -1 });
        let normals = collinear_equations(signs);
        flats.push(Flat {
            subspace: Subspace::nullspace(&normals),
            flat_type: FlatType::I,
            origin: FlatOrigin::Collinear { signs },
        });
    }

    for edge in ei.edges() {
        let (a, b) = edge;
        let others: Vec<usize> = (1..=4).filter(|&v| v != a && v != b).collect();
        let (c, d) = (others[0], others[1]);
        for mask in 0..4u8 {
            let signs: [i8; 2] = std::array::from_fn(|k| if mask >> k & 1 == 0 { 1 } else { -1 });
            let mut normals = QMatrix::zeros(3, 6);
            normals[(0, ei.slot((a, b)))] = Rational::one();
            normals[(1, ei.slot((a, c)))] = Rational::one();
            normals[(1, ei.slot((b, c)))] = -sign_rational(signs[0]);
            normals[(2, ei.slot((a, d)))] = Rational::one();
            normals[(2, ei.slot((b, d)))] = -sign_rational(signs[1]);
            flats.push(Flat {
                subspace: Subspace::nullspace(&normals),
                flat_type: FlatType::II,
                origin: FlatOrigin::CollapsedEdge { edge, signs },
            });
        }
    }

    for drop in (1..=4).rev() {
        let tri: Vec<usize> = (1..=4).filter(|&v| v != drop).collect();
        let triangle = [tri[0], tri[1], tri[2]];
        let mut normals = QMatrix::zeros(3, 6);
        normals[(0, ei.slot((triangle[0], triangle[1])))] = Rational::one();
        normals[(1, ei.slot((triangle[0], triangle[2])))] = Rational::one();
        normals[(2, ei.slot((triangle[1], triangle[2])))] = Rational::one();
        flats.push(Flat {
            subspace: Subspace::nullspace(&normals),
            flat_type: FlatType::III,
            origin: FlatOrigin::CollapsedTriangle { triangle },
        });
    }

    flats
}

/// Classify a primitive direction vector against the three generator
/// patterns: a coordinate axis, a ±1 vector over the four edges of a 4-cycle,
/// or a ±1 vector over the three edges at one vertex.
pub fn classify_direction(direction: &[i64]) -> Option<LineType> {
    let ei = EdgeIndex::new(4);
    if direction.iter().any(|&x| !(-1..=1).contains(&x)) {
        return None;
    }
    let support: Vec<Edge> = direction
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x != 0)
        .map(|(s, _)| ei.edge(s))
        .collect();
    match support.len() {
        1 => Some(LineType::I),
        4 => {
            // a 4-cycle covers four distinct vertices, each twice
            let mut count = [0usize; 5];
            for &(i, j) in &support {
                count[i] += 1;
                count[j] += 1;
            }
            if count[1..].iter().all(|&c| c == 2) {
                Some(LineType::II)
            } else {
                None
            }
        }
        3 => {
            // three edges incident to one vertex
            let shared = (1..=4).filter(|&v| support.iter().all(|&(i, j)| i == v || j == v));
            if shared.count() == 1 {
                Some(LineType::III)
            } else {
                None
            }
        }
        _ => None,
    }
}

/// All one-dimensional subspaces arising as intersections of pairs or triples
/// of the flats, deduplicated and classified.
pub fn intersection_lines(flats: &[Flat]) -> Vec<Line> {
    let mut found: HashMap<Subspace, bool> = HashMap::new(); // line -> arises from a pair
    let mut wide_pairs: Vec<(usize, usize, Subspace)> = Vec::new();

    for i in 0..flats.len() {
        for j in i + 1..flats.len() {
            let inter = flats[i].subspace.intersect(&flats[j].subspace).unwrap();
            match inter.dim() {
                1 => {
                    found.insert(inter, true);
                }
                d if d >= 2 => wide_pairs.push((i, j, inter)),
                _ => {}
            }
        }
    }
    for (i, j, pair) in &wide_pairs {
        for (k, flat) in flats.iter().enumerate() {
            if k == *i || k == *j {
                continue;
            }
            let inter = pair.intersect(&flat.subspace).unwrap();
            if inter.dim() == 1 {
                found.entry(inter).or_insert(false);
            }
        }
    }

    let mut lines: Vec<Line> = found
        .into_iter()
        .map(|(subspace, from_pair)| {
            let direction: Vec<i64> = subspace
                .primitive_direction()
                .expect("intersection line has dimension 1")
                .iter()
                .map(|b| i64::try_from(b).expect("direction entry fits i64"))
                .collect();
            let line_type = classify_direction(&direction)
                .expect("intersection direction matches a generator pattern");
            Line { subspace, direction, line_type, from_pair }
        })
        .collect();
    lines.sort_by_key(|l| (l.line_type_rank(), l.direction.clone()));
    lines
}

impl Line {
    fn line_type_rank(&self) -> u8 {
        match self.line_type {
            LineType::I => 0,
            LineType::II => 1,
            LineType::III => 2,
        }
    }
}

/// Build Δ: flats on one side, lines on the other, an edge whenever the flat
/// contains the line.
pub fn incidence_graph(flats: &[Flat], lines: &[Line]) -> IncidenceGraph {
    let adjacency = flats
        .iter()
        .map(|f| {
            lines.iter().map(|l| f.subspace.contains(&l.subspace).unwrap()).collect()
        })
        .collect();
    IncidenceGraph { flats: flats.to_vec(), lines: lines.to_vec(), adjacency }
}

impl IncidenceGraph {
    pub fn num_vertices(&self) -> usize {
        self.flats.len() + self.lines.len()
    }

    /// Two-colored graph: flats get color 0 on vertices `0..#flats`, lines
    /// color 1 on the rest.
    pub fn to_colored_graph(&self) -> ColoredGraph {
        let nf = self.flats.len();
        let n = self.num_vertices();
        let mut g = ColoredGraph::new(
            n,
            (0..n).map(|v| u32::from(v >= nf)).collect(),
        );
        for (f, row) in self.adjacency.iter().enumerate() {
            for (l, &adj) in row.iter().enumerate() {
                if adj {
                    g.add_edge(f, nf + l);
                }
            }
        }
        g
    }

    /// DOT rendering with typed labels on both vertex classes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph delta {\n");
        for (i, f) in self.flats.iter().enumerate() {
            let _ = writeln!(s, "  F{i} [label=\"F{i}:{}\" shape=box];", f.origin);
        }
        for (j, l) in self.lines.iter().enumerate() {
            let dir: Vec<String> = l.direction.iter().map(i64::to_string).collect();
            let _ = writeln!(
                s,
                "  L{j} [label=\"L{j}:{:?} ({})\"];",
                l.line_type,
                dir.join(",")
            );
        }
        for (i, row) in self.adjacency.iter().enumerate() {
            for (j, &adj) in row.iter().enumerate() {
                if adj {
                    let _ = writeln!(s, "  F{i} -- L{j};");
                }
            }
        }
        s.push_str("}\n");
        s
    }
}

/// Symbolic containment of a linear subspace in the zero set of `p`: restrict
/// `p` to a parameterization of the subspace and test for the identically
/// zero polynomial.
pub fn flat_in_variety(s: &Subspace, p: &MultiPoly) -> bool {
    assert_eq!(s.ambient_dim(), p.nvars());
    if s.dim() == 0 {
        return p.coeff(&crate::mpoly::Monomial(vec![0; p.nvars()])).is_zero();
    }
    let param = s.basis().transpose();
    p.compose_linear(&param).unwrap().is_zero()
}

/// True iff the gradient of `p` vanishes at a deterministic generic point of
/// the flat, certifying that the flat sits inside the singular locus.
pub fn gradient_vanishes_on(s: &Subspace, p: &MultiPoly) -> bool {
    let point = s.generic_point();
    p.gradient_at(&point).unwrap().iter().all(Rational::is_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactq::rat;
    use crate::varieties::{defining_poly, edge_permutation_matrix, vertex_relabelings};
    use std::collections::HashSet;

    fn l24() -> MultiPoly {
        defining_poly(2).unwrap().unsquared
    }

    #[test]
    fn sixty_flats_with_expected_type_counts() {
        let flats = singular_flats();
        assert_eq!(flats.len(), 60);
        let count = |t: FlatType| flats.iter().filter(|f| f.flat_type == t).count();
        assert_eq!(
            (count(FlatType::I), count(FlatType::II), count(FlatType::III)),
            (32, 24, 4)
        );
        assert!(flats.iter().all(|f| f.subspace.dim() == 3));
        let distinct: HashSet<_> = flats.iter().map(|f| f.subspace.clone()).collect();
        assert_eq!(distinct.len(), 60);
    }

    #[test]
    fn all_sign_collinear_equations_have_rank_three() {
        assert_eq!(collinear_equations([1, 1, 1, 1, 1]).rank(), 3);
    }

    #[test]
    fn triangle_flat_spans_opposite_star() {
        let flats = singular_flats();
        let flat = flats
            .iter()
            .find(|f| f.origin == FlatOrigin::CollapsedTriangle { triangle: [1, 2, 3] })
            .unwrap();
        let ei = EdgeIndex::new(4);
        let mut expected = QMatrix::zeros(3, 6);
        expected[(0, ei.slot((1, 4)))] = rat(1);
        expected[(1, ei.slot((2, 4)))] = rat(1);
        expected[(2, ei.slot((3, 4)))] = rat(1);
        assert_eq!(flat.subspace, Subspace::from_spanning_rows(&expected));
    }

    #[test]
    fn flats_are_contained_in_the_variety_and_singular() {
        let p = l24();
        for f in singular_flats() {
            assert!(flat_in_variety(&f.subspace, &p), "containment failed for {}", f.origin);
            assert!(gradient_vanishes_on(&f.subspace, &p), "gradient failed for {}", f.origin);
        }
    }

    #[test]
    fn lines_have_expected_type_counts() {
        let flats = singular_flats();
        let lines = intersection_lines(&flats);
        assert_eq!(lines.len(), 46);
        let count = |t: LineType| lines.iter().filter(|l| l.line_type == t).count();
        assert_eq!(
            (count(LineType::I), count(LineType::II), count(LineType::III)),
            (6, 24, 16)
        );
        // the coordinate axis e12 appears as a Type I line
        let ei = EdgeIndex::new(4);
        let mut e12 = vec![0i64; 6];
        e12[ei.slot((1, 2))] = 1;
        assert!(lines.iter().any(|l| l.direction == e12 && l.line_type == LineType::I));
        // every line lies in at least two flats
        for l in &lines {
            let within = flats.iter().filter(|f| f.subspace.contains(&l.subspace).unwrap()).count();
            assert!(within >= 2, "line {:?} lies in {within} flats", l.direction);
        }
    }

    #[test]
    fn lines_are_order_independent() {
        let flats = singular_flats();
        let mut shuffled = flats.clone();
        shuffled.reverse();
        shuffled.swap(3, 40);
        shuffled.swap(11, 50);
        let a = intersection_lines(&flats);
        let b = intersection_lines(&shuffled);
        let sa: HashSet<_> = a.iter().map(|l| l.subspace.clone()).collect();
        let sb: HashSet<_> = b.iter().map(|l| l.subspace.clone()).collect();
        assert_eq!(sa, sb);
    }

    #[test]
    fn incidence_graph_shape() {
        let flats = singular_flats();
        let lines = intersection_lines(&flats);
        let delta = incidence_graph(&flats, &lines);
        assert_eq!(delta.num_vertices(), 106);
        // the triangle-{1,2,3} flat contains the three axis lines of the star of 4
        let ei = EdgeIndex::new(4);
        let fi = delta
            .flats
            .iter()
            .position(|f| f.origin == FlatOrigin::CollapsedTriangle { triangle: [1, 2, 3] })
            .unwrap();
        for v in 1..=3 {
            let mut dir = vec![0i64; 6];
            dir[ei.slot((v, 4))] = 1;
            let li = delta.lines.iter().position(|l| l.direction == dir).unwrap();
            assert!(delta.adjacency[fi][li]);
        }
        // no isolated vertices on either side
        assert!(delta.adjacency.iter().all(|row| row.iter().any(|&b| b)));
        for j in 0..delta.lines.len() {
            assert!(delta.adjacency.iter().any(|row| row[j]));
        }
    }

    #[test]
    fn arrangement_is_closed_under_signed_relabelings() {
        let flats = singular_flats();
        let set: HashSet<_> = flats.iter().map(|f| f.subspace.clone()).collect();
        for pi in vertex_relabelings(4) {
            let m = edge_permutation_matrix(&pi);
            for f in &flats {
                assert!(set.contains(&f.subspace.map(&m)));
            }
        }
        for mask in 0..64u8 {
            let mut m = QMatrix::zeros(6, 6);
            for i in 0..6 {
                m[(i, i)] = if mask >> i & 1 == 0 { rat(1) } else { rat(-1) };
            }
            for f in &flats {
                assert!(set.contains(&f.subspace.map(&m)));
            }
        }
    }

    #[test]
    fn non_singular_flats_fail_containment() {
        let p = l24();
        let ei = EdgeIndex::new(4);
        // span(e12, e13, e14, e23): a coordinate 4-flat
        let mut rows = QMatrix::zeros(4, 6);
        for (r, e) in [(1, 2), (1, 3), (1, 4), (2, 3)].into_iter().enumerate() {
            rows[(r, ei.slot(e))] = rat(1);
        }
        assert!(!flat_in_variety(&Subspace::from_spanning_rows(&rows), &p));
        // zero subspace is trivially contained in a cone
        assert!(flat_in_variety(&Subspace::zero(6), &p));
    }
}
