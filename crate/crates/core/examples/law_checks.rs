//! Property checks of the structural laws on small instances.

use orbitwise::analysis::{law_check, LawId};
use orbitwise::catalog;

fn main() -> orbitwise::Result<()> {
    let quick = [LawId::Intersection, LawId::FiniteUnionEquality, LawId::Closure, LawId::MetricEquivalence, LawId::Restriction];
    for case in catalog::law_suite().into_iter().filter(|c| quick.contains(&c.law)) {
        let r = law_check(case.law.name(), &case.instance)?;
        println!(
            "{:<22} {:<32} {}/{} holding, {} unresolved{}",
            case.law.to_string(),
            case.label,
            r.holding,
            r.checked,
            r.unresolved,
            if r.notes.is_empty() { String::new() } else { format!(" ({})", r.notes.join("; ")) }
        );
    }
    Ok(())
}
