//! End-to-end verification pipelines: the exact group-theoretic chain
//! (arrangement → incidence graph → graph automorphisms → lifts → closures →
//! Weyl classification → three-point case), the randomized desk checks on
//! rigidity and determinant identities, and the linear-subspace containment
//! scan.

use std::collections::HashSet;

use num_traits::One;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::arrangement::{
    flat_in_variety, gradient_vanishes_on, incidence_graph, intersection_lines, singular_flats,
    Flat, FlatType, IncidenceGraph, Line, LineType,
};
use crate::autgroup::{
    flat_action_permutation, l13_automorphisms, lift_graph_automorphism, nonnegative_elements,
    positive_real_group, projective_closure, regge_matrix, sign_flip_classes, vertex_perm_classes,
    vertex_relabeling_of, AutGroupError, ExactMatrix, GroupElement, MatrixGroup, ProjClass,
    PullbackChecker, SignedProjClass,
};
use crate::coxeter::{
    dynkin_classify, reflection, reflection_group, root_system, signed_classes, simple_roots,
    CoxeterError, DynkinDiagram, RootSystem, SimpleSystem, GENERIC_H,
};
use crate::exactq::{rat, ratio, QMatrix, Rational, Subspace};
use crate::graphauto::{automorphism_group, PermGroup};
use crate::mpoly::MultiPoly;
use crate::varieties::{
    defining_poly, edge_forget_float, edge_subsets, is_complete_edge_set, is_inf_independent,
    projection_rank_probe, random_full_rank_map, signflip_det_sum, voldet_scale_check, Edge,
    EdgeIndex, VarietiesError,
};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Group(#[from] AutGroupError),
    #[error(transparent)]
    Coxeter(#[from] CoxeterError),
    #[error(transparent)]
    Varieties(#[from] VarietiesError),
}

#[derive(Clone, Copy, Debug)]
pub struct PipelineOptions {
    pub safety_bound: usize,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions { safety_bound: crate::autgroup::DEFAULT_SAFETY_BOUND }
    }
}

/// Everything the exact chain computes, with the verdicts spelled out.
pub struct ExactPipeline {
    pub flats: Vec<Flat>,
    pub lines: Vec<Line>,
    pub delta: IncidenceGraph,
    pub flat_type_counts: (usize, usize, usize),
    pub line_type_counts: (usize, usize, usize),
    /// Lines that only arise from triple intersections, by index.
    pub triple_only_lines: Vec<usize>,
    pub flats_contained_in_variety: bool,
    pub flats_gradient_singular: bool,

    pub aut: PermGroup,
    pub lift_kernel_dims: Vec<usize>,
    pub lifted_generators: Vec<ProjClass>,
    pub lift_roundtrips_ok: bool,

    pub paut: MatrixGroup<ProjClass>,
    pub all_elements_preserve_variety: bool,
    pub all_elements_permute_flats: bool,

    pub paut_pos: MatrixGroup<SignedProjClass>,
    pub nonnegative: Vec<SignedProjClass>,
    pub nonnegative_all_vertex_relabelings: bool,
    pub nonnegative_is_subgroup: bool,

    pub expected_subgroup_order: usize,
    pub regge_generates_full_group: bool,

    pub w: MatrixGroup<ExactMatrix>,
    pub w_simple_closure_order: usize,
    pub roots: RootSystem,
    pub simple_system: SimpleSystem,
    pub dynkin: DynkinDiagram,
    pub simple_reflections_preserve_variety: bool,
    pub w_classes_equal_paut_pos: bool,

    pub l13: MatrixGroup<ProjClass>,
    pub l13_all_signed_relabelings: bool,
}

/// Run the whole exact chain. Deterministic: no randomness enters any step.
pub fn run_exact(opts: &PipelineOptions) -> Result<ExactPipeline, PipelineError> {
    let bound = opts.safety_bound;
    let p24 = defining_poly(2)?.unsquared;

    let flats = singular_flats();
    let lines = intersection_lines(&flats);
    let delta = incidence_graph(&flats, &lines);
    let count_f = |t: FlatType| flats.iter().filter(|f| f.flat_type == t).count();
    let count_l = |t: LineType| lines.iter().filter(|l| l.line_type == t).count();
    let flat_type_counts = (count_f(FlatType::I), count_f(FlatType::II), count_f(FlatType::III));
    let line_type_counts = (count_l(LineType::I), count_l(LineType::II), count_l(LineType::III));
    let triple_only_lines =
        lines.iter().enumerate().filter(|(_, l)| !l.from_pair).map(|(i, _)| i).collect();
    let flats_contained_in_variety = flats.iter().all(|f| flat_in_variety(&f.subspace, &p24));
    let flats_gradient_singular = flats.iter().all(|f| gradient_vanishes_on(&f.subspace, &p24));

    let aut = automorphism_group(&delta.to_colored_graph());

    let mut lift_kernel_dims = Vec::new();
    let mut lifted_generators = Vec::new();
    let mut lift_roundtrips_ok = true;
    for gen in &aut.generators {
        let flat_perm: Vec<usize> = (0..flats.len()).map(|i| gen.apply(i)).collect();
        match lift_graph_automorphism(&flat_perm, &flats) {
            Ok(class) => {
                lift_kernel_dims.push(1);
                lift_roundtrips_ok &=
                    flat_action_permutation(&class, &flats).as_deref() == Some(&flat_perm[..]);
                lifted_generators.push(class);
            }
            Err(AutGroupError::LiftNotUnique(d)) => lift_kernel_dims.push(d),
            Err(e) => return Err(e.into()),
        }
    }

    let paut = projective_closure(&lifted_generators, bound)?;

    let checker = PullbackChecker::new();
    let all_elements_preserve_variety =
        paut.elements().iter().all(|e| checker.pullback_factor(e).is_some());
    let all_elements_permute_flats =
        paut.elements().iter().all(|e| flat_action_permutation(e, &flats).is_some());

    let paut_pos = positive_real_group(&paut)?;
    let nonnegative = nonnegative_elements(&paut_pos);
    let nonnegative_all_vertex_relabelings =
        nonnegative.iter().all(|e| vertex_relabeling_of(&e.rep(), 4).is_some());
    let nonneg_set: HashSet<&SignedProjClass> = nonnegative.iter().collect();
    let nonnegative_is_subgroup = nonnegative.iter().all(|a| {
        nonnegative.iter().all(|b| nonneg_set.contains(&a.mul(b).expect("small entries")))
    });

    let mut expected_gens = vertex_perm_classes();
    expected_gens.extend(sign_flip_classes());
    let expected = projective_closure(&expected_gens, bound)?;
    let expected_subgroup_order = expected.order();
    let mut full_gens = expected_gens;
    full_gens.push(ProjClass::from_qmatrix(&regge_matrix())?);
    let with_regge = projective_closure(&full_gens, bound)?;
    let regge_generates_full_group = with_regge.order() == paut.order()
        && with_regge.elements().iter().all(|e| paut.contains(e));

    let lines30: Vec<Line> =
        lines.iter().filter(|l| l.line_type != LineType::III).cloned().collect();
    let w = reflection_group(&lines30, bound)?;
    let roots = root_system(&lines30)?;
    let simple_system = simple_roots(&roots, &GENERIC_H)?;
    let dynkin = dynkin_classify(&simple_system.simple)?;
    let simple_reflections_preserve_variety = simple_system.simple.iter().all(|root| {
        let r = reflection(&root.0).expect("roots are nonzero");
        crate::autgroup::is_variety_automorphism(&r, &p24).is_some()
    });
    let w_simple_gens: Result<Vec<ExactMatrix>, CoxeterError> = simple_system
        .simple
        .iter()
        .map(|root| Ok(ExactMatrix::from_qmatrix(&reflection(&root.0)?)?))
        .collect();
    let w_simple_closure_order = MatrixGroup::closure(&w_simple_gens?, bound)?.order();
    let w_class_set = signed_classes(&w);
    let paut_pos_set: HashSet<SignedProjClass> = paut_pos.elements().iter().cloned().collect();
    let w_classes_equal_paut_pos =
        w_class_set.len() == w.order() && w_class_set == paut_pos_set;

    let l13 = l13_automorphisms(bound)?;
    let l13_all_signed_relabelings = l13
        .elements()
        .iter()
        .all(|e| crate::autgroup::is_signed_permutation(e.int_entries(), 3));

    Ok(ExactPipeline {
        flats,
        lines,
        delta,
        flat_type_counts,
        line_type_counts,
        triple_only_lines,
        flats_contained_in_variety,
        flats_gradient_singular,
        aut,
        lift_kernel_dims,
        lifted_generators,
        lift_roundtrips_ok,
        paut,
        all_elements_preserve_variety,
        all_elements_permute_flats,
        paut_pos,
        nonnegative,
        nonnegative_all_vertex_relabelings,
        nonnegative_is_subgroup,
        expected_subgroup_order,
        regge_generates_full_group,
        w,
        w_simple_closure_order,
        roots,
        simple_system,
        dynkin,
        simple_reflections_preserve_variety,
        w_classes_equal_paut_pos,
        l13,
        l13_all_signed_relabelings,
    })
}

/// Outcome of the exhaustive small-edge-set dependence scan.
#[derive(Clone, Debug)]
pub struct SimplexScan {
    pub d: usize,
    pub n: usize,
    pub sets_checked: usize,
    /// Edge sets found dependent; the claim is that these are exactly the
    /// complete `K_{d+2}` edge sets.
    pub dependent_sets: Vec<Vec<Edge>>,
    pub matches_expectation: bool,
}

/// Check every edge set of `K_n` with at most `binom(d+2, 2)` edges for
/// infinitesimal independence; only complete `K_{d+2}` subgraphs may fail.
pub fn desk_simplex_scan(d: usize, n: usize, trials: usize, seed: u64) -> SimplexScan {
    let max_size = (d + 2) * (d + 1) / 2;
    let subsets = edge_subsets(n, max_size);
    let mut dependent_sets = Vec::new();
    let mut matches = true;
    for (k, set) in subsets.iter().enumerate() {
        let independent = is_inf_independent(set, d, trials, seed.wrapping_add(k as u64));
        let is_kd2 = set.len() == max_size && is_complete_edge_set(set);
        if independent == is_kd2 {
            matches = false;
        }
        if !independent {
            dependent_sets.push(set.clone());
        }
    }
    SimplexScan {
        d,
        n,
        sets_checked: subsets.len(),
        dependent_sets,
        matches_expectation: matches,
    }
}

/// Outcome of the tangent-projection rank experiment.
#[derive(Clone, Debug)]
pub struct LinImageCheck {
    pub k4_max_rank: usize,
    pub k4_flips: usize,
    pub non_k4_selector_rank: usize,
    pub random_maps_checked: usize,
    pub random_maps_full_rank: usize,
    pub pass: bool,
}

/// The rank-drop experiment for `d = 2, n = 5`: the forgetting map onto a
/// `K_4` never reaches rank 6 on any flipped tangent space, while maps
/// without `K_4` support always do.
pub fn desk_lin_image_check(
    trials: usize,
    random_maps: usize,
    seed: u64,
) -> Result<LinImageCheck, VarietiesError> {
    let (d, n) = (2usize, 5usize);
    let k4_edges: Vec<Edge> = EdgeIndex::new(4).edges();
    let e_k4 = edge_forget_float(&k4_edges, n)?;
    let k4_probe = projection_rank_probe(&e_k4, d, n, trials, seed)?;

    // six edges spanning five vertices: not a K4
    let spread: Vec<Edge> = vec![(1, 2), (1, 3), (2, 3), (1, 4), (2, 4), (1, 5)];
    let e_spread = edge_forget_float(&spread, n)?;
    let spread_probe = projection_rank_probe(&e_spread, d, n, trials, seed + 1)?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e3779b97f4a7c15);
    let mut random_full = 0;
    for k in 0..random_maps {
        let e = random_full_rank_map(6, 10, &mut rng);
        let probe = projection_rank_probe(&e, d, n, trials.min(5), seed + 100 + k as u64)?;
        if probe.max_rank == 6 {
            random_full += 1;
        }
    }
    let pass = k4_probe.max_rank == 5 && spread_probe.max_rank == 6 && random_full == random_maps;
    Ok(LinImageCheck {
        k4_max_rank: k4_probe.max_rank,
        k4_flips: k4_probe.flips_per_sample,
        non_k4_selector_rank: spread_probe.max_rank,
        random_maps_checked: random_maps,
        random_maps_full_rank: random_full,
        pass,
    })
}

/// Exhaustively verify `Σ_S det(SX+Y) = 2^r det(Y)` on random rational
/// matrices for `r ≤ 4`. Returns (instances checked, instances passing).
pub fn desk_signflip_check(r: usize, instances: usize, seed: u64) -> (usize, usize) {
    assert!((1..=8).contains(&r));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = 0;
    for _ in 0..instances {
        let rand_matrix = |rng: &mut ChaCha8Rng| {
            QMatrix::from_rows(
                (0..r)
                    .map(|_| {
                        (0..r)
                            .map(|_| ratio(rng.gen_range(-50..=50), rng.gen_range(1..=10)))
                            .collect()
                    })
                    .collect(),
            )
        };
        let x = rand_matrix(&mut rng);
        let y = rand_matrix(&mut rng);
        let expected = &rat(1 << r) * &y.det();
        if signflip_det_sum(&x, &y) == expected {
            pass += 1;
        }
    }
    (instances, pass)
}

/// Random scale triples: the volume determinant is preserved up to scale
/// exactly when the three scales agree. Returns (instances, passing).
pub fn desk_voldet_check(instances: usize, seed: u64) -> (usize, usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pass = 0;
    for k in 0..instances {
        let nonzero = |rng: &mut ChaCha8Rng| loop {
            let v = rng.gen_range(-6i64..=6);
            if v != 0 {
                return rat(v);
            }
        };
        let (s12, s13, s23) = if k % 2 == 0 {
            let s = nonzero(&mut rng);
            (s.clone(), s.clone(), s)
        } else {
            (nonzero(&mut rng), nonzero(&mut rng), nonzero(&mut rng))
        };
        let result = voldet_scale_check(&s12, &s13, &s23);
        let equal = s12 == s13 && s13 == s23;
        let ok = if equal {
            result == Some(&s12 * &s12)
        } else {
            result.is_none()
        };
        if ok {
            pass += 1;
        }
    }
    (instances, pass)
}

/// Containment scan: the 60 singular flats lie in the variety; coordinate
/// 3-flats outside the four vertex stars and every coordinate 4-flat do not.
#[derive(Clone, Debug)]
pub struct FanoScan {
    pub singular_flats_contained: usize,
    pub non_singular_3flats_checked: usize,
    pub non_singular_3flats_rejected: usize,
    pub coordinate_4flats_checked: usize,
    pub coordinate_4flats_rejected: usize,
    pub pass: bool,
}

pub fn fano_scan() -> Result<FanoScan, PipelineError> {
    let p = defining_poly(2)?.unsquared;
    let flats = singular_flats();
    let singular_contained =
        flats.iter().filter(|f| flat_in_variety(&f.subspace, &p)).count();
    let singular_set: HashSet<Subspace> = flats.iter().map(|f| f.subspace.clone()).collect();

    let coordinate_flat = |slots: &[usize]| {
        let mut rows = QMatrix::zeros(slots.len(), 6);
        for (r, &s) in slots.iter().enumerate() {
            rows[(r, s)] = Rational::one();
        }
        Subspace::from_spanning_rows(&rows)
    };

    let mut checked3 = 0;
    let mut rejected3 = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                let s = coordinate_flat(&[a, b, c]);
                if singular_set.contains(&s) {
                    continue; // the four vertex stars are singular flats
                }
                checked3 += 1;
                if !flat_in_variety(&s, &p) {
                    rejected3 += 1;
                }
            }
        }
    }

    let mut checked4 = 0;
    let mut rejected4 = 0;
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                for d in c + 1..6 {
                    checked4 += 1;
                    if !flat_in_variety(&coordinate_flat(&[a, b, c, d]), &p) {
                        rejected4 += 1;
                    }
                }
            }
        }
    }

    let pass = singular_contained == flats.len()
        && checked3 >= 10
        && rejected3 == checked3
        && rejected4 == checked4;
    Ok(FanoScan {
        singular_flats_contained: singular_contained,
        non_singular_3flats_checked: checked3,
        non_singular_3flats_rejected: rejected3,
        coordinate_4flats_checked: checked4,
        coordinate_4flats_rejected: rejected4,
        pass,
    })
}

/// The unsquared defining polynomial of the planar four-point variety,
/// shared by reports.
pub fn l24_polynomial() -> MultiPoly {
    defining_poly(2).expect("d = 2 is supported").unsquared
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simplex_scan_small_case() {
        // d = 1, n = 3: subsets of at most 3 edges; only the triangle is dependent
        let scan = desk_simplex_scan(1, 3, 5, 11);
        assert!(scan.matches_expectation);
        assert_eq!(scan.dependent_sets.len(), 1);
        assert_eq!(scan.dependent_sets[0].len(), 3);
    }

    #[test]
    fn signflip_and_voldet_checks_pass() {
        for r in 1..=4 {
            let (n, p) = desk_signflip_check(r, 25, 7 + r as u64);
            assert_eq!(n, p);
        }
        let (n, p) = desk_voldet_check(50, 3);
        assert_eq!(n, p);
    }

    #[test]
    fn fano_scan_counts() {
        let scan = fano_scan().unwrap();
        assert_eq!(scan.singular_flats_contained, 60);
        assert_eq!(scan.non_singular_3flats_checked, 16);
        assert_eq!(scan.non_singular_3flats_rejected, 16);
        assert_eq!(scan.coordinate_4flats_checked, 15);
        assert_eq!(scan.coordinate_4flats_rejected, 15);
        assert!(scan.pass);
    }
}
