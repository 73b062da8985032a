//! Every catalog entry with its expected rows, re-run at the default budget.

use orbitwise::catalog;

fn main() -> orbitwise::Result<()> {
    for name in catalog::list() {
        let entry = catalog::get(name)?;
        println!("{name}: {}", entry.notes);
        for check in entry.check_all()? {
            let mark = if check.reproduced { "ok" } else { "MISMATCH" };
            let provenance = &entry.expected[check.row].provenance;
            println!("  [{mark}] row {}: {} ({provenance:?})", check.row, check.observed);
        }
    }
    Ok(())
}
