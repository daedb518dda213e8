//! Acceptance suite: one test per criterion, each printing its own
//! pass/fail line. The exact chain is computed once and shared.

use std::sync::LazyLock;

use mvaut_core::coxeter::DynkinType;
use mvaut_core::pipeline::{
    desk_lin_image_check, desk_signflip_check, desk_simplex_scan, desk_voldet_check, fano_scan,
    run_exact, ExactPipeline, PipelineOptions,
};

static PIPELINE: LazyLock<ExactPipeline> = LazyLock::new(|| {
    run_exact(&PipelineOptions::default()).expect("exact pipeline completes")
});

const SEED: u64 = 20240817;

fn report(criterion: usize, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:2}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_singular_arrangement() {
    let p = &*PIPELINE;
    let pass = p.flats.len() == 60
        && p.flat_type_counts == (32, 24, 4)
        && p.flats_contained_in_variety
        && p.flats_gradient_singular;
    report(
        1,
        pass,
        &format!(
            "{} flats, type counts {:?}, contained={}, gradients vanish={}",
            p.flats.len(),
            p.flat_type_counts,
            p.flats_contained_in_variety,
            p.flats_gradient_singular
        ),
    );
}

#[test]
fn criterion_02_intersection_lattice() {
    let p = &*PIPELINE;
    let pass = p.lines.len() == 46 && p.line_type_counts == (6, 24, 16);
    report(
        2,
        pass,
        &format!(
            "{} lines, type counts {:?}, triple-only lines: {:?}",
            p.lines.len(),
            p.line_type_counts,
            p.triple_only_lines
        ),
    );
}

#[test]
fn criterion_03_graph_automorphisms() {
    let p = &*PIPELINE;
    let mut sizes = p.aut.orbit_sizes();
    sizes.sort_unstable();
    let pass = p.aut.order == 11520 && sizes == vec![16, 30, 60];
    report(
        3,
        pass,
        &format!("|Aut(Δ)| = {}, orbit sizes {:?}", p.aut.order, p.aut.orbit_sizes()),
    );
}

#[test]
fn criterion_04_lifts_and_projective_group() {
    let p = &*PIPELINE;
    let lifts_unique = !p.lift_kernel_dims.is_empty() && p.lift_kernel_dims.iter().all(|&d| d == 1);
    let pass = lifts_unique
        && p.lift_roundtrips_ok
        && p.paut.order() == 11520
        && p.all_elements_preserve_variety;
    report(
        4,
        pass,
        &format!(
            "kernel dims {:?}, roundtrips ok={}, |PAut| = {}, all preserve variety={}",
            p.lift_kernel_dims,
            p.lift_roundtrips_ok,
            p.paut.order(),
            p.all_elements_preserve_variety
        ),
    );
}

#[test]
fn criterion_05_positive_scale_group_and_nonnegative_subgroup() {
    let p = &*PIPELINE;
    let pass = p.paut_pos.order() == 23040
        && p.nonnegative.len() == 24
        && p.nonnegative_all_vertex_relabelings
        && p.nonnegative_is_subgroup;
    report(
        5,
        pass,
        &format!(
            "|P+Aut| = {}, nonnegative = {} (vertex relabelings={}, subgroup={})",
            p.paut_pos.order(),
            p.nonnegative.len(),
            p.nonnegative_all_vertex_relabelings,
            p.nonnegative_is_subgroup
        ),
    );
}

#[test]
fn criterion_06_expected_subgroup_and_regge_generation() {
    let p = &*PIPELINE;
    let pass = p.expected_subgroup_order == 768 && p.regge_generates_full_group;
    report(
        6,
        pass,
        &format!(
            "expected subgroup order = {}, adding the averaging symmetry generates the full group = {}",
            p.expected_subgroup_order, p.regge_generates_full_group
        ),
    );
}

#[test]
fn criterion_07_weyl_pipeline() {
    let p = &*PIPELINE;
    let pass = p.w.order() == 23040
        && p.roots.roots.len() == 60
        && p.simple_system.positive.len() == 30
        && p.simple_system.simple.len() == 6
        && p.dynkin.dynkin_type == DynkinType::D6
        && p.w_simple_closure_order == 23040
        && p.simple_reflections_preserve_variety
        && p.w_classes_equal_paut_pos;
    report(
        7,
        pass,
        &format!(
            "|W| = {}, roots = {}, positive = {}, simple = {}, type = {}, classes match = {}",
            p.w.order(),
            p.roots.roots.len(),
            p.simple_system.positive.len(),
            p.simple_system.simple.len(),
            p.dynkin.dynkin_type.label(),
            p.w_classes_equal_paut_pos
        ),
    );
}

#[test]
fn criterion_08_three_point_case() {
    let p = &*PIPELINE;
    let pass = p.l13.order() == 24 && p.l13_all_signed_relabelings;
    report(
        8,
        pass,
        &format!(
            "|PAut(L13)| = {}, all signed vertex relabelings = {}",
            p.l13.order(),
            p.l13_all_signed_relabelings
        ),
    );
}

#[test]
fn criterion_09_property_suite() {
    let mut signflip_total = 0;
    let mut signflip_pass = 0;
    for r in 1..=4 {
        let (n, ok) = desk_signflip_check(r, 25, SEED + r as u64);
        signflip_total += n;
        signflip_pass += ok;
    }
    let scan = desk_simplex_scan(2, 5, 5, SEED);
    let (voldet_total, voldet_pass) = desk_voldet_check(50, SEED);
    let pass = signflip_total >= 100
        && signflip_pass == signflip_total
        && scan.matches_expectation
        && scan.dependent_sets.len() == 5 // the five K4 subgraphs of K5
        && voldet_pass == voldet_total;
    report(
        9,
        pass,
        &format!(
            "sign-flip identity {signflip_pass}/{signflip_total}, dependence scan over {} sets found {} dependent (expect the 5 K4s), scale check {voldet_pass}/{voldet_total}",
            scan.sets_checked,
            scan.dependent_sets.len()
        ),
    );
}

#[test]
fn criterion_10_projection_rank_probe() {
    let check = desk_lin_image_check(20, 25, SEED).expect("probe completes");
    let pass = check.pass && check.k4_flips == 64;
    report(
        10,
        pass,
        &format!(
            "K4 forgetting map max rank {} over 20 samples × {} flips; non-K4 selector rank {}; {}/{} dense maps reach rank 6",
            check.k4_max_rank,
            check.k4_flips,
            check.non_k4_selector_rank,
            check.random_maps_full_rank,
            check.random_maps_checked
        ),
    );
}

#[test]
fn invariants_beyond_the_numbered_criteria() {
    let p = &*PIPELINE;
    // the group action permutes the 60 flats, exactly and setwise
    assert!(p.all_elements_permute_flats);
    // the two order computations agree
    assert_eq!(p.paut.order() as u64, p.aut.order);
    // the 24 nonnegative classes act faithfully as vertex relabelings
    let relabelings: std::collections::HashSet<Vec<usize>> = p
        .nonnegative
        .iter()
        .map(|e| mvaut_core::autgroup::vertex_relabeling_of(&e.rep(), 4).unwrap())
        .collect();
    assert_eq!(relabelings.len(), 24);
    // searching a randomly relabeled copy of Δ gives the same order
    let graph = p.delta.to_colored_graph();
    let n = graph.n();
    let images: Vec<usize> = (0..n).map(|v| (v * 89 + 31) % n).collect();
    let perm = mvaut_core::graphauto::Perm::from_images(images);
    let relabeled = graph.relabel(&perm);
    assert_eq!(mvaut_core::graphauto::automorphism_group(&relabeled).order, p.aut.order);
    println!("invariants: PASS — flat action, order agreement, faithful S4, relabel stability");
}

#[test]
fn criterion_11_linear_subspace_containment() {
    let scan = fano_scan().expect("containment scan completes");
    report(
        11,
        scan.pass,
        &format!(
            "{}/60 singular flats contained; {}/{} non-singular coordinate 3-flats rejected; {}/{} coordinate 4-flats rejected (full degree-2 Fano equality out of scope)",
            scan.singular_flats_contained,
            scan.non_singular_3flats_rejected,
            scan.non_singular_3flats_checked,
            scan.coordinate_4flats_rejected,
            scan.coordinate_4flats_checked
        ),
    );
}
