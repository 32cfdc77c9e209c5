//! Runs every acceptance criterion, one PASS/FAIL line each.

use maxdet_core::selftest::run_all;

fn main() {
    let reports = run_all();
    for r in &reports {
        println!("{r}");
        for note in &r.notes {
            println!("    {note}");
        }
        for failure in r.failures.iter().skip(1) {
            println!("    {failure}");
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
