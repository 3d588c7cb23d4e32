use species_partitions::verify::{run_suite, Status, SuiteConfig};

fn select(name: &str) -> SuiteConfig {
    SuiteConfig {
        selection: Some(name.to_string()),
        ..Default::default()
    }
}

#[test]
fn single_selection_gives_one_report() {
    let reports = run_suite(&select("kn")).unwrap();
    assert_eq!(reports.len(), 1);
    assert_eq!(reports[0].name, "kn");
    assert_eq!(reports[0].status, Status::Pass);
}

#[test]
fn fixed_seed_gives_identical_reports() {
    let cfg = SuiteConfig {
        reps: Some(50_000),
        ..select("one_step")
    };
    let a = run_suite(&cfg).unwrap()[0].to_json_line();
    let b = run_suite(&cfg).unwrap()[0].to_json_line();
    assert_eq!(a, b);
    let other = SuiteConfig { seed: 1, ..cfg };
    assert_ne!(a, run_suite(&other).unwrap()[0].to_json_line());
}

#[test]
fn perturbation_breaks_recursion_family() {
    let cfg = SuiteConfig {
        perturb: true,
        ..select("recursion")
    };
    assert_eq!(run_suite(&cfg).unwrap()[0].status, Status::Fail);
}

#[test]
fn gamma_one_posterior_is_skipped() {
    let r = &run_suite(&select("posterior_edge")).unwrap()[0];
    assert_eq!(r.status, Status::Skipped);
    assert!(r.details.contains("edge excluded"));
}

#[test]
fn negative_controls_detect_broken_inputs() {
    assert_eq!(run_suite(&select("negative_controls")).unwrap()[0].status, Status::Pass);
}

#[test]
fn too_few_replicates_is_an_error() {
    let cfg = SuiteConfig {
        reps: Some(100),
        ..select("sampler")
    };
    assert!(run_suite(&cfg).is_err());
    assert!(run_suite(&select("nonexistent")).is_err());
}
