use surface_cyclic::acceptance::run_all;

#[test]
fn acceptance_criteria() {
    let reports = run_all();
    for r in &reports {
        println!("{}", r.line());
    }
    let failed: Vec<u8> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
