use std::fs;

use dismantle::experiments::{
    estimate_phi, load_results, revalidate, save_results, CurveMethod, ExperimentConfig,
    ExperimentError, Grid, Model,
};
use dismantle::generators::random_regular;
use dismantle::io::{read_edge_list, write_edge_list, EdgeListError};
use dismantle::{Execution, Seed};

fn estimate() -> dismantle::experiments::CurveEstimate {
    let cfg = ExperimentConfig {
        model: Model::Regular { d: 3 },
        n: 200,
        replicates: 4,
        seed: 2,
        method: CurveMethod::ForestPipeline,
        grid: Grid::K(vec![1, 4, 16]),
    };
    estimate_phi(&cfg, Execution::Parallel).unwrap()
}

#[test]
fn results_survive_a_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    let est = estimate();
    save_results(&est, &path).unwrap();
    let back = load_results(&path).unwrap();
    assert_eq!(back, est);
    revalidate(&back).unwrap();
}

#[test]
fn damaged_results_are_schema_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curve.csv");
    save_results(&estimate(), &path).unwrap();
    let text = fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();

    let cases = [
        (lines[..7].join("\n"), 7),
        (text.replacen("model,param", "model,parameter", 1), 2),
        (
            lines
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != 4)
                .map(|(_, l)| *l)
                .collect::<Vec<_>>()
                .join("\n"),
            5,
        ),
        (text.replacen(",0,", ",x,", 1), 3),
    ];
    for (damaged, want_line) in cases {
        fs::write(&path, damaged).unwrap();
        match load_results(&path) {
            Err(ExperimentError::Schema { line, .. }) => assert_eq!(line, want_line),
            other => panic!("expected schema error, got {other:?}"),
        }
    }
    assert!(matches!(
        load_results(dir.path().join("absent.csv")),
        Err(ExperimentError::Io(_))
    ));
}

#[test]
fn edge_list_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.el");
    let g = random_regular(60, 4, Seed::new(6)).unwrap();
    write_edge_list(&g, &path).unwrap();
    assert_eq!(read_edge_list(&path).unwrap(), g);

    fs::write(&path, "4 2\n0 1\n1 1\n").unwrap();
    assert!(matches!(
        read_edge_list(&path),
        Err(EdgeListError::Format { line: 3, .. })
    ));
    fs::write(&path, "4 2\n0 1\n1 0\n").unwrap();
    assert!(matches!(
        read_edge_list(&path),
        Err(EdgeListError::Graph(_))
    ));
}
