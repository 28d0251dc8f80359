fn main() {
    let name = std::env::args().nth(1).unwrap();
    let n = std::env::args().nth(2).and_then(|v| v.parse().ok());
    let d = std::env::args().nth(3).and_then(|v| v.parse().ok());
    let start = std::time::Instant::now();
    match tensorcume::suites::run_suite(&name, n, d) {
        Ok(report) => {
            println!(
                "{}: cases={} matches={} mismatches={} [{:?}]",
                report.suite,
                report.cases,
                report.matches,
                report.mismatches.len(),
                start.elapsed()
            );
            for m in report.mismatches.iter().take(8) {
                println!("  MISMATCH: {m}");
            }
        }
        Err(e) => println!("ERROR: {e}"),
    }
}
