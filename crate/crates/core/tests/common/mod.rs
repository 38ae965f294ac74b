//! Shared by the CLI tests and the acceptance run.

use std::path::PathBuf;

/// Golden report files and the `mice` arguments that produce them.
pub const GOLDEN_CASES: &[(&str, &[&str])] = &[
    ("partition_gamma_n2_320.json", &["partition", "--lambda", "3,2,0", "--rows", "3", "--n", "2", "--type", "gamma"]),
    ("partition_delta_n2_320.json", &["partition", "--lambda", "3,2,0", "--n", "2", "--type", "delta", "--reversed", "--method", "both"]),
    ("partition_two_row_n2_m6_421_4.json", &["partition", "--top", "{4,2,1}", "--bottom", "{4}", "--columns", "6", "--n", "2"]),
    ("weights_gamma_n2.json", &["weights", "--type", "gamma", "--n", "2"]),
    ("weights_delta_n3.json", &["weights", "--type", "delta", "--n", "3"]),
    ("weights_tilted_gd_n2.json", &["weights", "--type", "tilted", "--x", "gamma", "--y", "delta", "--n", "2"]),
    ("verify_ybe_gd_n2.json", &["verify-ybe", "--x", "gamma", "--y", "delta", "--n", "2"]),
    ("verify_two_row_n2_m6_421_4.json", &["verify-two-row", "--top", "{4,2,1}", "--bottom", "{4}", "--columns", "6", "--n", "2"]),
    ("verify_duality_n2_320.json", &["verify-duality", "--lambda", "3,2,0", "--n", "2"]),
    ("train_trace_n2_m6_421_4.json", &["train-trace", "--top", "{4,2,1}", "--bottom", "{4}", "--columns", "6", "--n", "2"]),
    ("tokuyama_n1_r2.json", &["tokuyama", "--rows", "2", "--max-part", "3"]),
    ("ybsystem_n2.json", &["ybsystem", "--n", "2", "--seed", "5"]),
    ("states_gamma_n1_10.txt", &["states", "--lambda", "1,0", "--format", "text"]),
];

pub fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}
