//! The shipped instance corpus, checked against independently computed values.

mod common;

use std::collections::BTreeSet;

use common::*;
use edgecolor::driver::{color_graph, color_graph_observed, InitialK, RunConfig, RunError};
use edgecolor::graph::{parse_graph, Multigraph};

fn corpus() -> Vec<(String, Multigraph)> {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data");
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|d| d.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), parse_graph(&std::fs::read_to_string(&p).unwrap()).unwrap()))
        .collect()
}

#[test]
fn palette_is_exactly_max_of_delta_plus_one_and_density() {
    for (name, g) in corpus() {
        let r = color_graph(&g, &RunConfig::default()).unwrap();
        let expect = (max_degree(&g) + 1).max(gamma_naive(&g));
        assert_eq!(r.k_used, expect, "{name}");
        assert_eq!(matching_violation(&g, &r.coloring.colors()), None, "{name}");
        assert!(r.coloring.colors().iter().all(|c| c.is_some_and(|c| c <= r.k_used)), "{name}");
        for c in &r.certificates {
            let vs: Vec<usize> = c.vertices.iter().collect();
            certificate_sound(&g, &vs, c.k_failed, c.edge_count, c.bound).unwrap();
        }
    }
}

#[test]
fn shuffled_orders_keep_the_bound() {
    for (name, g) in corpus() {
        let expect = (max_degree(&g) + 1).max(gamma_naive(&g));
        for seed in 0..5 {
            let cfg = RunConfig { shuffle: Some(seed), ..RunConfig::default() };
            let r = color_graph(&g, &cfg).unwrap();
            assert_eq!(r.k_used, expect, "{name} seed {seed}");
            assert_eq!(matching_violation(&g, &r.coloring.colors()), None, "{name} seed {seed}");
        }
    }
}

#[test]
fn traced_swaps_replay_onto_each_engine_view() {
    for (name, g) in corpus() {
        let cfg = RunConfig { trace: true, ..RunConfig::default() };
        color_graph_observed(&g, &cfg, &mut |ev| {
            let vg = ev.view.graph();
            let mut cols = ev.view.colors();
            for line in ev.lines {
                apply_k_line(&mut cols, line);
                assert_eq!(matching_violation(vg, &cols), None, "{name}: {line}");
            }
            // view edges map onto graph edges with the same endpoints
            for (f, &e) in ev.map.iter().enumerate() {
                let a: BTreeSet<usize> = vg.endpoints(f).into_iter().collect();
                let b: BTreeSet<usize> = g.endpoints(e).into_iter().collect();
                assert_eq!(a, b, "{name}");
            }
        })
        .unwrap();
    }
}

#[test]
fn delta_colors_fail_on_class_two_instances() {
    for (name, g) in corpus() {
        let d = max_degree(&g);
        let cfg = RunConfig { initial_k: InitialK::Fixed(d), escalate: false, ..RunConfig::default() };
        match color_graph(&g, &cfg) {
            Ok(r) => {
                assert_eq!(r.k_used, d, "{name}");
                assert_eq!(matching_violation(&g, &r.coloring.colors()), None, "{name}");
            }
            Err(RunError::Infeasible { k, certificate, .. }) => {
                assert_eq!(k, d, "{name}");
                if let Some(c) = certificate {
                    let vs: Vec<usize> = c.vertices.iter().collect();
                    certificate_sound(&g, &vs, c.k_failed, c.edge_count, c.bound).unwrap();
                }
            }
            Err(e) => panic!("{name}: {e}"),
        }
    }
}
