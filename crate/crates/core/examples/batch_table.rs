//! A table of O_{n,m}(T^d) for small n, m through the batch runner.

use quiverk::cli::{run_batch, OutputFormat, ReportOptions};
use quiverk::InputOptions;

fn main() {
    let mut jobs = String::new();
    for d in 1..=3 {
        for n in 1..=3 {
            for m in [-2, -1, 1, 2, 3] {
                let diag = |x: i32| format!("diag({})", vec![x.to_string(); d].join(","));
                jobs.push_str(&format!("F={}; G={}\n", diag(n), diag(m)));
            }
        }
    }
    let options = ReportOptions {
        breakdown: false,
        check: false,
        closed_form: false,
        presentation: false,
        format: OutputFormat::Json,
    };
    let report = run_batch(&jobs, options, InputOptions::default());
    for (line, job) in report.stdout.lines().zip(jobs.lines()) {
        let v: serde_json::Value = serde_json::from_str(line).expect("json line");
        let k0 = quiverk::FinGenAbGroup::from_json(&v["K0"]).expect("group");
        let k1 = quiverk::FinGenAbGroup::from_json(&v["K1"]).expect("group");
        println!("{job:<32} K0 = {:<28} K1 = {k1}", k0.to_string());
    }
}
