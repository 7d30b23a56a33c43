// Kept in its own binary: it sets SWE_THREADS, which is process-wide.

use std::fs;

use kinsv::io::write_outputs;
use kinsv::trajectory::run;
use kinsv::verify::drain_scenario;

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let mut s = drain_scenario();
    s.output.probes = vec![3.3];
    s.output.snapshots = vec![1.0, 2.0];
    let dir = tempfile::tempdir().unwrap();
    let mut written = Vec::new();
    for threads in ["1", "3", "1"] {
        std::env::set_var("SWE_THREADS", threads);
        let out = dir.path().join(format!("t{}", written.len()));
        let outputs = run(&s).unwrap();
        assert!(outputs.steps > 100, "{} steps", outputs.steps);
        let files = write_outputs(&outputs, &out).unwrap();
        written.push(
            files
                .iter()
                .map(|f| fs::read(f).unwrap())
                .collect::<Vec<_>>(),
        );
    }
    std::env::remove_var("SWE_THREADS");
    assert_eq!(written[0].len(), 4);
    assert_eq!(written[0], written[1]);
    assert_eq!(written[0], written[2]);
}
