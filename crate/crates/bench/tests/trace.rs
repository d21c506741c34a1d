use rcpsp_bench::report::{read_trace, write_trace};
use rcpsp_bench::trace::{run_adaptive_trace, TraceConfig};
use rcpsp_ssgs::hybrid::ExecutionKind;
use rcpsp_ssgs::instance::generate_instance;
use rcpsp_ssgs::{GeneratorParams, HybridConfig, Instance};

fn instance() -> Instance {
    generate_instance(&GeneratorParams {
        num_jobs: 30,
        resource_strength: 0.2,
        seed: 5,
        ..Default::default()
    })
    .unwrap()
}

fn config(restarts: bool) -> TraceConfig {
    TraceConfig {
        iterations: 3_000,
        seed: 1,
        hybrid: HybridConfig {
            period: 500,
            restarts,
            ..Default::default()
        },
    }
}

#[test]
fn trace_has_one_record_per_execution_and_one_data_run_per_period() {
    let result = run_adaptive_trace(&instance(), &config(true)).unwrap();
    assert_eq!(result.trace.len(), 3_001);
    for (i, t) in result.trace.iter().enumerate() {
        assert_eq!(t.index, i as u64);
        assert_eq!(t.kind == ExecutionKind::Data, i % 500 == 0, "execution {i}");
        assert!(t.nanos.is_some());
    }
    // The seventh period starts at the last execution and ends after its data run.
    assert_eq!(result.commitments.len(), 6);
    assert!(result.baseline_seconds.is_some());
    let ratio = result.ratio().unwrap();
    assert!(ratio.is_finite() && ratio > 0.0);
}

#[test]
fn forced_commit_runs_a_single_implementation_after_committing() {
    let result = run_adaptive_trace(&instance(), &config(false)).unwrap();
    assert_eq!(result.commitments.len(), 1);
    let committed = ExecutionKind::from(result.commitments[0].choice);
    let after = &result.trace[result.commitments[0].index as usize + 1..];
    assert!(!after.is_empty());
    assert!(after.iter().all(|t| t.kind == committed));
    assert_eq!(
        result
            .trace
            .iter()
            .filter(|t| t.kind == ExecutionKind::Data)
            .count(),
        1
    );
    assert_eq!(result.switches(), 0);
}

#[test]
fn trace_file_roundtrip() {
    let cfg = config(true);
    let result = run_adaptive_trace(&instance(), &cfg).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    write_trace(
        std::fs::File::create(&path).unwrap(),
        &result.metadata(&cfg),
        &result.trace,
    )
    .unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    let body: Vec<&str> = text.lines().skip_while(|l| l.starts_with('#')).collect();
    assert_eq!(body[0], "index,impl,nanos");
    assert!(body[1].starts_with("0,data,"));
    assert_eq!(body.len(), 3_002);

    let (meta, trace) =
        read_trace(std::io::BufReader::new(std::fs::File::open(&path).unwrap())).unwrap();
    assert_eq!(trace, result.trace);
    assert_eq!(meta.get("period"), Some("500"));
    assert_eq!(
        meta.get("ratio").unwrap().parse::<f64>().unwrap(),
        result.ratio().unwrap()
    );
}
