#[allow(dead_code)]
mod field_info {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/field_info.rs"));
}

#[test]
fn field_info_runs() {
    field_info::run_example().expect("field_info example should run");
}

#[allow(dead_code)]
mod classify_tuples {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/classify_tuples.rs"));
}

#[test]
fn classify_tuples_runs() {
    classify_tuples::run_example().expect("classify_tuples example should run");
}

#[allow(dead_code)]
mod kl_table {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/kl_table.rs"));
}

#[test]
fn kl_table_runs() {
    kl_table::run_example().expect("kl_table example should run");
}

#[allow(dead_code)]
mod complete_sums {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/complete_sums.rs"));
}

#[test]
fn complete_sums_runs() {
    complete_sums::run_example().expect("complete_sums example should run");
}

#[allow(dead_code)]
mod strata_scan {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/strata_scan.rs"));
}

#[test]
fn strata_scan_runs() {
    strata_scan::run_example().expect("strata_scan example should run");
}

#[allow(dead_code)]
mod box_count {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/box_count.rs"));
}

#[test]
fn box_count_runs() {
    box_count::run_example().expect("box_count example should run");
}

#[allow(dead_code)]
mod bilinear_bounds {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/bilinear_bounds.rs"));
}

#[test]
fn bilinear_bounds_runs() {
    bilinear_bounds::run_example().expect("bilinear_bounds example should run");
}

#[allow(dead_code)]
mod moment_identity {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/moment_identity.rs"));
}

#[test]
fn moment_identity_runs() {
    moment_identity::run_example().expect("moment_identity example should run");
}

#[allow(dead_code)]
mod averaged_comparison {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/averaged_comparison.rs"));
}

#[test]
fn averaged_comparison_runs() {
    averaged_comparison::run_example().expect("averaged_comparison example should run");
}

#[allow(dead_code)]
mod prime_ladder {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/prime_ladder.rs"));
}

#[test]
fn prime_ladder_runs() {
    prime_ladder::run_example().expect("prime_ladder example should run");
}
