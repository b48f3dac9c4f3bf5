mod common;

use common::{
    boundary_of_mask, cheeger_oracle, connected_regular, girth_oracle, random_connected,
    random_graph, rational_rank_oracle,
};
use geot::constructions::{gen_standard, girth, graft_tree, StandardKind};
use geot::cost::{coarse_distortion, max_short_cycle_free_subgraph};
use geot::cycles::{
    bridges, cycle_edge_vector, cycle_space_dim, eulerian_orientation, extend_rho_all,
    fundamental_cycles, nice_cycle_vector, select_b, short_cycle_rank, short_cycles, solve_rho,
    CycleOptions, PhaseFunction,
};
use geot::expansion::{cheeger_exact, edge_boundary, CheegerMode};
use geot::graph::{ball, bfs_distances, component_labels, is_connected, parse_graph, Graph};
use geot::spectral::{
    constant_vector_residual, edge_colouring_decomposition, laplacian, propagation, spectrum,
    twisted_laplacian, FinitePropagationOperator, Propagation, SpectrumOptions,
};
use geot::witnesses::{cycle_density_check, derive_constants};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn opts() -> SpectrumOptions {
    SpectrumOptions::default()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distances_are_a_metric(n in 2usize..60, extra in 0usize..80, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed);
        let d: Vec<Vec<usize>> = (0..n).map(|s| bfs_distances(&g, s).unwrap()).collect();
        for x in 0..n {
            prop_assert_eq!(d[x][x], 0);
            for y in 0..n {
                prop_assert_eq!(d[x][y], d[y][x]);
                prop_assert!(d[x][y] < n);
                for z in 0..n {
                    prop_assert!(d[x][z] <= d[x][y] + d[y][z]);
                }
            }
        }
    }

    #[test]
    fn ball_of_diameter_is_component(n in 1usize..40, m in 0usize..50, seed in any::<u64>(), c in any::<prop::sample::Index>()) {
        let g = random_graph(n, m, seed);
        let center = c.index(n);
        let b = ball(&g, center, n).unwrap();
        let (labels, _) = component_labels(&g);
        let comp: Vec<usize> = (0..n).filter(|&x| labels[x] == labels[center]).collect();
        prop_assert_eq!(&b.vertices, &comp);
    }

    #[test]
    fn edge_list_round_trip(n in 1usize..40, m in 0usize..80, seed in any::<u64>()) {
        let g = random_graph(n, m, seed);
        let text = g.to_edge_list(&["generated".to_string()]);
        let back = parse_graph(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(back.to_edge_list(&["generated".to_string()]), text);
    }

    #[test]
    fn laplacian_invariants(n in 1usize..50, m in 0usize..100, seed in any::<u64>()) {
        let g = random_graph(n, m, seed);
        let l = laplacian(&g);
        for x in 0..n {
            prop_assert_eq!(l.row(x).iter().map(|&(_, v)| v).sum::<i64>(), 0);
            prop_assert_eq!(l.entry(x, x), g.degree(x) as i64);
        }
        let s = spectrum(&l, &opts()).unwrap();
        prop_assert!(s.eigenvalues[0] >= -1e-9);
        prop_assert_eq!(s.zero_multiplicity, component_labels(&g).1);
    }

    #[test]
    fn twisted_laplacian_is_psd(n in 2usize..40, extra in 0usize..60, seed in any::<u64>(), t in -4.0f64..4.0) {
        let g = random_connected(n, extra, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
        let rho = PhaseFunction::from_values(&g, (0..g.edge_count()).map(|_| rng.gen_range(-3.0..3.0)).collect()).unwrap();
        let m = twisted_laplacian(&g, &rho, t).unwrap();
        let s = spectrum(&m, &opts()).unwrap();
        prop_assert!(s.eigenvalues[0] >= -1e-9);
        // Each off-diagonal entry is a unit-modulus edge phase.
        for &(u, v) in g.edges() {
            prop_assert!((m.entry(u, v).norm() - 1.0).abs() < 1e-12);
            prop_assert!((m.entry(u, v) - m.entry(v, u).conj()).norm() == 0.0);
        }
    }

    #[test]
    fn eulerian_twist_eigenvector(half_d in 1usize..4, n in 8usize..100, seed in any::<u64>()) {
        let d = 2 * half_d;
        prop_assume!(d < n);
        let g = connected_regular(n, d, seed % 1000);
        let rho = PhaseFunction::from_cycle_vector(&eulerian_orientation(&g).unwrap());
        for t in [0.1f64, 0.5, 1.0] {
            let m = twisted_laplacian(&g, &rho, t).unwrap();
            prop_assert!(constant_vector_residual(&m, d as f64 * (1.0 - t.cos())) <= 1e-9);
        }
    }

    #[test]
    fn propagation_is_subadditive(n in 3usize..25, extra in 0usize..20, seed in any::<u64>(), ra in 0usize..3, rb in 0usize..3) {
        let g = random_connected(n, extra, seed);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dist: Vec<Vec<usize>> = (0..n).map(|s| bfs_distances(&g, s).unwrap()).collect();
        let mut sample = |radius: usize| {
            let mut op = FinitePropagationOperator::identity(n);
            for (x, row) in dist.iter().enumerate() {
                for (y, &dxy) in row.iter().enumerate() {
                    if dxy <= radius && rng.gen_bool(0.3) {
                        op.matrix[(x, y)] = Complex64::new(rng.gen_range(1.0..2.0), 0.0);
                    }
                }
            }
            op
        };
        let (a, b) = (sample(ra), sample(rb));
        let (Propagation::Finite(pa), Propagation::Finite(pb)) = (propagation(&a, &g).unwrap(), propagation(&b, &g).unwrap()) else {
            return Err(TestCaseError::fail("connected graph gave infinite propagation"));
        };
        let Propagation::Finite(pab) = propagation(&a.compose(&b), &g).unwrap() else {
            return Err(TestCaseError::fail("infinite product propagation"));
        };
        prop_assert!(pab <= pa + pb);
    }

    #[test]
    fn colouring_identity(n in 1usize..60, m in 0usize..150, seed in any::<u64>()) {
        let g = random_graph(n, m, seed);
        let dec = edge_colouring_decomposition(&g).unwrap();
        let l = laplacian(&g);
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(dec.sum_entry(x, y), l.entry(x, y));
            }
        }
        let d = geot::graph::max_degree(&g);
        prop_assert!(dec.len() <= (2 * d).saturating_sub(1));
    }

    #[test]
    fn cheeger_matches_oracle(n in 2usize..13, extra in 0usize..20, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed);
        let half = cheeger_exact(&g, CheegerMode::Half, 24).unwrap();
        prop_assert_eq!(half.minimum_ratio, cheeger_oracle(&g, 1, n / 2));
        let r = edge_boundary(&g, &half.witness_subset).unwrap();
        prop_assert_eq!(r.ratio.unwrap(), half.minimum_ratio);
        if n >= 2 {
            let mid = cheeger_exact(&g, CheegerMode::MidRange, 24).unwrap();
            prop_assert!(mid.minimum_ratio >= half.minimum_ratio);
            prop_assert_eq!(mid.minimum_ratio, cheeger_oracle(&g, n.div_ceil(4), n / 2));
        }
    }

    #[test]
    fn boundary_test_function_bound(n in 2usize..13, extra in 0usize..20, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed);
        let gap = spectrum(&laplacian(&g), &opts()).unwrap().gap.unwrap();
        for mask in 1u64..(1 << n) {
            let a = mask.count_ones() as f64;
            if 2.0 * a > n as f64 {
                continue;
            }
            let b = boundary_of_mask(&g, mask) as f64;
            let test_fn = gap * a * (1.0 - a / n as f64);
            prop_assert!(b >= test_fn - 1e-9);
            prop_assert!(test_fn >= gap * a / 2.0 - 1e-12);
        }
    }

    #[test]
    fn boundary_report_bounds(n in 1usize..40, m in 0usize..80, seed in any::<u64>(), mask in any::<u64>()) {
        let g = random_graph(n, m, seed);
        let a: Vec<usize> = (0..n).filter(|&x| mask >> (x % 64) & 1 == 1).collect();
        let r = edge_boundary(&g, &a).unwrap();
        prop_assert!(r.edge_boundary_size <= geot::graph::max_degree(&g) * a.len());
        prop_assert!(r.outer_vertex_boundary_size <= r.edge_boundary_size);
    }

    #[test]
    fn bridges_match_edge_removal(n in 1usize..60, m in 0usize..90, seed in any::<u64>()) {
        let g = random_graph(n, m, seed);
        let base = component_labels(&g).1;
        let rep = bridges(&g);
        for id in 0..g.edge_count() {
            let after = component_labels(&g.without_edges(&[id])).1;
            prop_assert_eq!(rep.is_bridge(id), after == base + 1);
            prop_assert!(after == base || after == base + 1);
        }
    }

    #[test]
    fn short_cycle_rank_is_monotone(n in 3usize..11, extra in 0usize..10, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed);
        let opts = CycleOptions::default();
        let mut prev = 0;
        if let Some(gi) = girth(&g) {
            prop_assert_eq!(girth_oracle(&g), Some(gi));
            if gi > 3 {
                prop_assert_eq!(short_cycle_rank(&g, gi - 1, opts).unwrap().rank, Some(0));
            }
        }
        for r in 3..=n.max(3) {
            let set = short_cycle_rank(&g, r, opts).unwrap();
            let rank = set.rank.unwrap();
            prop_assert!(rank >= prev);
            prop_assert_eq!(rank, rational_rank_oracle(&set.edge_rows(&g).unwrap()));
            for c in &set.cycles {
                prop_assert!(c.len() <= r);
                let mut s = c.clone();
                s.sort_unstable();
                s.dedup();
                prop_assert_eq!(s.len(), c.len());
            }
            prev = rank;
        }
        prop_assert_eq!(prev, cycle_space_dim(&g));
    }

    #[test]
    fn nice_vector_conditions(n in 1usize..80, extra in 0usize..60, seed in any::<u64>()) {
        let g = random_connected(n, extra, seed);
        let non_bridges = bridges(&g).non_bridge_count;
        for s in 0..5 {
            let v = nice_cycle_vector(&g, seed.wrapping_add(s), 64).unwrap();
            prop_assert!(v.is_unit_valued());
            prop_assert!(v.is_divergence_free(&g));
            prop_assert!(2 * v.support_size() >= non_bridges);
        }
    }

    #[test]
    fn pipeline_invariants(n in 4usize..14, extra in 0usize..12, seed in any::<u64>(), r in 3usize..7) {
        let g = random_connected(n, extra, seed);
        let b = select_b(&g, r, CycleOptions::default()).unwrap();
        b.verify(&g).unwrap();
        prop_assert_eq!(Some(b.len()), b.cycles.rank);
        let rest = b.remainder(&g);
        prop_assert!(is_connected(&rest));
        let v = nice_cycle_vector(&rest, seed, 64).unwrap();
        let rho = solve_rho(&g, r, &v, &b).unwrap();
        for c in &b.cycles.cycles {
            prop_assert!(rho.circulation(c).unwrap().abs() <= 1e-9);
        }
        let vg = v.lift_to(&g).unwrap();
        for id in 0..g.edge_count() {
            if !b.contains(id) {
                prop_assert!((rho.0.edge_value(id) - vg.0.edge_value(id) as f64).abs() <= 1e-12);
            }
        }
        let table = extend_rho_all(&g, &rho).unwrap();
        for x in 0..n {
            for y in 0..n {
                prop_assert_eq!(table.get(x, y).unwrap(), -table.get(y, x).unwrap());
            }
        }
    }

    #[test]
    fn cycle_free_subgraph_is_maximal(n in 3usize..100, extra in 0usize..120, seed in any::<u64>(), r in 3usize..6) {
        let g = random_connected(n, extra, seed);
        let y = max_short_cycle_free_subgraph(&g, r, seed).unwrap();
        prop_assert!(short_cycles(&y, r, CycleOptions::default()).unwrap().cycles.is_empty());
        for &(u, v) in g.edges() {
            if !y.has_edge(u, v) {
                prop_assert!(bfs_distances(&y, u).unwrap()[v] < r);
            }
        }
        let w = coarse_distortion(&g, &y, 2000).unwrap();
        prop_assert!(w.l <= (r - 1) as f64);
    }

    #[test]
    fn cost_edge_inequality(n in 4usize..16, extra in 0usize..30, seed in any::<u64>(), r in 3usize..5, eps in 0.01f64..0.5) {
        let g = random_connected(n, extra, seed);
        let d = geot::graph::max_degree(&g).max(1);
        let dc = cycle_density_check(&g, r, eps, CycleOptions::default()).unwrap();
        if dc.holds {
            let y = max_short_cycle_free_subgraph(&g, r, 0).unwrap();
            let bound = g.edge_count() as f64 - eps / (d as f64).powi(r as i32 - 1) * n as f64;
            prop_assert!(y.edge_count() as f64 <= bound + 1e-9);
        }
    }

    #[test]
    fn graft_structure(n in 6usize..40, extra in 0usize..40, seed in any::<u64>(), r in 1usize..4) {
        let y = random_connected(n, extra, seed);
        prop_assume!(3 << (r - 1) <= n);
        let x = graft_tree(&y, r).unwrap();
        let b = ball(&x.graph, x.root, r).unwrap();
        prop_assert_eq!(b.graph.edge_count() + 1, b.graph.vertex_count());
        prop_assert!(is_connected(&b.graph));
        prop_assert!(geot::graph::max_degree(&x.graph) <= geot::graph::max_degree(&y) + 1);
        let base: Vec<usize> = (0..n).collect();
        let (recovered, _) = x.graph.induced_subgraph(&base);
        prop_assert_eq!(recovered, y);
    }
}

#[test]
fn grafted_expansion_on_small_bases() {
    let mut bases: Vec<Graph> = vec![
        gen_standard(StandardKind::Complete, 6).unwrap(),
        gen_standard(StandardKind::Complete, 8).unwrap(),
        gen_standard(StandardKind::Petersen, 10).unwrap(),
        gen_standard(StandardKind::Cycle, 6).unwrap(),
    ];
    bases.push(connected_regular(12, 3, 4));
    for y in bases {
        let h = cheeger_exact(&y, CheegerMode::MidRange, 24)
            .unwrap()
            .minimum_ratio;
        let x = graft_tree(&y, 1).unwrap();
        let half = cheeger_exact(&x.graph, CheegerMode::Half, 24)
            .unwrap()
            .minimum_ratio;
        assert!(
            half >= h / (2.0 * h + 3.0) - 1e-12,
            "{half} < bound for h = {h}"
        );
    }
}

#[test]
fn constants_grid() {
    for d in 2..=10 {
        for gamma in [0.01, 0.1, 0.5, 1.0, 2.0] {
            let b = derive_constants(d, gamma).unwrap();
            assert!(
                b.verify().iter().all(|c| c.holds),
                "d = {d}, gamma = {gamma}"
            );
        }
    }
}

#[test]
fn fundamental_basis_rank_matches_oracle() {
    for seed in 0..20 {
        let g = random_connected(30, 25, seed);
        let rows: Vec<_> = fundamental_cycles(&g)
            .iter()
            .map(|c| cycle_edge_vector(&g, c).unwrap())
            .collect();
        assert_eq!(rational_rank_oracle(&rows), cycle_space_dim(&g));
    }
}

// All shortest paths between two vertices at distance 2 in Petersen give
// the same phase sum when short cycles are killed by rho.
#[test]
fn extension_is_path_independent_on_petersen() {
    let p = gen_standard(StandardKind::Petersen, 10).unwrap();
    let b = select_b(&p, 4, CycleOptions::default()).unwrap();
    let v = nice_cycle_vector(&b.remainder(&p), 2, 64).unwrap();
    let rho = solve_rho(&p, 4, &v, &b).unwrap();
    let table = extend_rho_all(&p, &rho).unwrap();
    for x in 0..10 {
        for y in 0..10 {
            if table.distance(x, y) != 2 {
                continue;
            }
            let mids: Vec<usize> = p
                .neighbors(x)
                .iter()
                .copied()
                .filter(|&m| p.has_edge(m, y))
                .collect();
            // Girth 5: the middle vertex is unique.
            assert_eq!(mids.len(), 1);
            let m = mids[0];
            let sum = rho.value(x, m).unwrap() + rho.value(m, y).unwrap();
            assert!((sum - table.get(x, y).unwrap()).abs() < 1e-12);
        }
    }
}

fn all_shortest_path_sums(g: &Graph, rho: &PhaseFunction, x: usize, y: usize) -> Vec<f64> {
    let dist_y = bfs_distances(g, y).unwrap();
    let mut out = Vec::new();
    let mut stack = vec![(x, 0.0)];
    while let Some((w, acc)) = stack.pop() {
        if w == y {
            out.push(acc);
            continue;
        }
        for &z in g.neighbors(w) {
            if dist_y[z] + 1 == dist_y[w] {
                stack.push((z, acc + rho.value(w, z).unwrap()));
            }
        }
    }
    out
}

// On a grid every pair of shortest paths bounds a union of unit squares,
// which are 4-cycles, so rho orthogonal to Z_4 is path independent.
#[test]
fn extension_is_path_independent_on_grid() {
    let k = 4;
    let mut edges = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i + 1 < k {
                edges.push((i * k + j, (i + 1) * k + j));
            }
            if j + 1 < k {
                edges.push((i * k + j, i * k + j + 1));
            }
        }
    }
    let g = Graph::from_edges(k * k, edges).unwrap();
    let b = select_b(&g, 4, CycleOptions::default()).unwrap();
    assert_eq!(b.len(), cycle_space_dim(&g));
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    // Any v works here: B spans the whole cycle space.
    let v = geot::cycles::CycleVector::zeros(&b.remainder(&g));
    let rho = solve_rho(&g, 4, &v, &b).unwrap();
    let table = extend_rho_all(&g, &rho).unwrap();
    for _ in 0..40 {
        let (x, y) = (rng.gen_range(0..k * k), rng.gen_range(0..k * k));
        for s in all_shortest_path_sums(&g, &rho, x, y) {
            assert!((s - table.get(x, y).unwrap()).abs() < 1e-9);
        }
    }
}
