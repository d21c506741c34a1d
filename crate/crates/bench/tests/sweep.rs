use rcpsp_bench::report::{read_records, write_records, Metadata};
use rcpsp_bench::sweep::{run_sweep, Mode, SweepConfig, SweepError};
use rcpsp_ssgs::instance::Axis;
use rcpsp_ssgs::ssgs::Implementation;
use rcpsp_ssgs::GeneratorParams;
use std::fs::File;
use std::io::BufReader;

fn small(axis: Axis, values: Vec<f64>, implementations: Vec<Implementation>) -> SweepConfig {
    SweepConfig {
        values,
        base: GeneratorParams {
            num_jobs: 30,
            ..Default::default()
        },
        instances_per_point: 2,
        iterations_per_instance: 1_000,
        implementations,
        ..SweepConfig::new(axis)
    }
}

#[test]
fn two_implementations_one_point() {
    let config = small(
        Axis::NumJobs,
        vec![30.0],
        vec![Implementation::Conv, Implementation::Nbf],
    );
    let report = run_sweep(&config).unwrap();
    assert!(report.warnings.is_empty());
    let [conv, nbf] = &report.records[..] else {
        panic!("expected two records, got {:?}", report.records);
    };
    assert_eq!(conv.implementation, Implementation::Conv);
    assert_eq!(conv.relative_pct, Some(100.0));
    assert_eq!(nbf.relative_pct, Some(100.0 * nbf.seconds / conv.seconds));
    // 1,000 iterations plus the initial solution, per instance.
    assert_eq!(conv.executions, 2 * 1_001);
    assert_eq!(nbf.executions, conv.executions);
}

#[test]
fn record_count_and_conv_baseline_in_validate_mode() {
    let mut config = small(
        Axis::ResourceStrength,
        vec![0.0, 0.5, 1.0],
        Implementation::ALL.to_vec(),
    );
    config.mode = Mode::Validate;
    config.hybrid.period = 50;
    let report = run_sweep(&config).unwrap();
    assert_eq!(report.records.len(), 3 * 4);
    for point in report.records.chunks(4) {
        assert!(point.iter().all(|r| r.value == point[0].value));
        assert_eq!(point[0].relative_pct, Some(100.0));
    }
    let values: Vec<f64> = report.records.iter().step_by(4).map(|r| r.value).collect();
    assert_eq!(values, [0.0, 0.5, 1.0]);
}

#[test]
fn without_conv_there_is_no_relative_time() {
    let config = small(Axis::MaxDuration, vec![5.0], vec![Implementation::Bf]);
    let report = run_sweep(&config).unwrap();
    assert_eq!(report.records.len(), 1);
    assert_eq!(report.records[0].relative_pct, None);
}

#[test]
fn invalid_configs_are_rejected() {
    let bad = |c: SweepConfig| run_sweep(&c).unwrap_err();
    let base = || small(Axis::ResourceFactor, vec![0.5], vec![Implementation::Conv]);
    assert!(matches!(
        bad(SweepConfig {
            values: vec![1.5],
            ..base()
        }),
        SweepError::Value { .. }
    ));
    assert!(matches!(
        bad(SweepConfig {
            values: vec![],
            ..base()
        }),
        SweepError::NoValues
    ));
    assert!(matches!(
        bad(SweepConfig {
            instances_per_point: 0,
            ..base()
        }),
        SweepError::ZeroCount
    ));
    assert!(matches!(
        bad(SweepConfig {
            implementations: vec![Implementation::Conv, Implementation::Conv],
            ..base()
        }),
        SweepError::DuplicateImplementation(Implementation::Conv)
    ));
}

#[test]
fn csv_roundtrip_is_lossless() {
    let config = small(
        Axis::NetworkComplexity,
        vec![0.5, 2.0],
        Implementation::ALL.to_vec(),
    );
    let report = run_sweep(&config).unwrap();
    let mut meta = Metadata::default();
    meta.push("warmup", config.warmup);
    meta.push("axis", config.axis);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    write_records(File::create(&path).unwrap(), &meta, &report.records).unwrap();

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# warmup=100"));
    assert_eq!(lines.next(), Some("# axis=network_complexity"));
    assert_eq!(
        lines.next(),
        Some("axis,value,impl,seconds,executions,relative_pct")
    );
    assert_eq!(lines.count(), 8);

    let (meta_back, records) = read_records(BufReader::new(File::open(&path).unwrap())).unwrap();
    assert_eq!(meta_back, meta);
    assert_eq!(records, report.records);
}

#[test]
fn empty_relative_pct_roundtrips() {
    let config = small(
        Axis::NumResources,
        vec![2.0],
        vec![Implementation::Nbf, Implementation::Hybrid],
    );
    let report = run_sweep(&config).unwrap();
    let mut buf = Vec::new();
    write_records(&mut buf, &Metadata::default(), &report.records).unwrap();
    let (_, records) = read_records(&buf[..]).unwrap();
    assert_eq!(records, report.records);
    assert!(records.iter().all(|r| r.relative_pct.is_none()));
}

#[test]
fn nbf_beats_conv_at_every_default_point() {
    for axis in Axis::ALL {
        let config = SweepConfig {
            instances_per_point: 1,
            iterations_per_instance: 10_000,
            implementations: vec![Implementation::Conv, Implementation::Nbf],
            ..SweepConfig::new(axis)
        };
        let report = run_sweep(&config).unwrap();
        for r in report
            .records
            .iter()
            .filter(|r| r.implementation == Implementation::Nbf)
        {
            let pct = r.relative_pct.unwrap();
            assert!(pct < 100.0, "{axis}={}: NBF at {pct:.1}% of Conv", r.value);
        }
    }
}
