use rayon::prelude::*;

use super::config::{Command, ExperimentConfig};
use super::report::{CatalogResult, LawCaseResult, PointResult, ProfileRow, Report, Results, REPORT_SCHEMA};
use super::CliError;
use crate::analysis::{
    law_check, oe_point_of_set_verdict, oe_point_verdict, roe_point_of_set_verdict, roe_point_verdict,
    ScaleBudget,
};
use crate::catalog::{self, CatalogEntry};
use crate::scalar::Scalar;
use crate::space::{MetricSpace, Point, StructuredSet};
use crate::system::{Family, MapExpr, OrbitSystem};

use super::config::SetRef;

/// A validated config with every reference resolved.
struct Plan<'a> {
    cfg: &'a ExperimentConfig,
    entry: Option<CatalogEntry>,
    system: Option<OrbitSystem>,
    space: Option<MetricSpace>,
    set: Option<StructuredSet>,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

fn plan(cfg: &ExperimentConfig) -> Result<Plan<'_>, CliError> {
    cfg.budget.validate().map_err(|e| invalid(format!("budget: {e}")))?;
    let entry = match &cfg.catalog {
        Some(name) => Some(catalog::get(name).map_err(|e| invalid(e.to_string()))?),
        None => None,
    };
    if entry.is_some() && (cfg.system.is_some() || cfg.space.is_some()) {
        return Err(invalid("give either a catalog entry or a system and space, not both"));
    }
    let system = cfg.system.clone().or_else(|| entry.as_ref().map(|e| e.system.clone()));
    let space = cfg.space.clone().or_else(|| entry.as_ref().map(|e| e.space.clone()));
    if let Some(s) = &system {
        s.validate().map_err(|e| invalid(format!("system: {e}")))?;
    }
    let set = match &cfg.query.set {
        None => None,
        Some(SetRef::Inline(s)) => Some(s.clone()),
        Some(SetRef::Named(name)) => {
            let e = entry.as_ref().ok_or_else(|| invalid(format!("subset {name:?} needs a catalog entry")))?;
            Some(e.subset(name).cloned().ok_or_else(|| invalid(format!("{} has no subset {name:?}", e.name)))?)
        }
    };
    if let Some(s) = &set {
        s.validate().map_err(|e| invalid(format!("set: {e}")))?;
    }
    let p = Plan { cfg, entry, system, space, set };
    let q = &cfg.query;
    match cfg.command {
        Command::Classify => {
            p.dynamics()?;
            q.x.as_ref().ok_or_else(|| invalid("classify needs query.x"))?;
            p.threshold()?;
        }
        Command::Scan => {
            p.dynamics()?;
            p.candidates()?;
            p.threshold()?;
        }
        Command::Profile => {
            p.dynamics()?;
            if q.x.is_none() || q.y.is_none() {
                return Err(invalid("profile needs query.x and query.y"));
            }
            p.threshold()?;
        }
        Command::Verify | Command::Catalog => {}
    }
    Ok(p)
}

impl Plan<'_> {
    fn dynamics(&self) -> Result<(&OrbitSystem, &MetricSpace), CliError> {
        match (&self.system, &self.space) {
            (Some(f), Some(s)) if f.dim() == s.dim() => Ok((f, s)),
            (Some(f), Some(s)) => Err(invalid(format!(
                "system acts in dimension {} but the space has dimension {}",
                f.dim(),
                s.dim()
            ))),
            _ => Err(invalid(format!(
                "{} needs a catalog entry or a system and a space",
                super::config::command_name(self.cfg.command)
            ))),
        }
    }

    fn threshold(&self) -> Result<Scalar, CliError> {
        self.cfg
            .query
            .d
            .clone()
            .or_else(|| self.entry.as_ref().map(|e| e.threshold.clone()))
            .ok_or_else(|| invalid("query.d is required without a catalog entry"))
    }

    fn candidates(&self) -> Result<Vec<Point>, CliError> {
        self.cfg
            .query
            .candidates
            .clone()
            .or_else(|| self.entry.as_ref().map(|e| e.sample.clone()))
            .ok_or_else(|| invalid("scan needs query.candidates or a catalog entry"))
    }

    fn classify(&self, x: &Point, d: &Scalar) -> PointResult {
        let (f, s) = self.dynamics().expect("checked when planning");
        let b = &self.cfg.budget;
        PointResult {
            x: x.clone(),
            oe: oe_point_verdict(f, s, x, d, b),
            roe: roe_point_verdict(f, s, x, b),
            oe_of_set: self.set.as_ref().map(|a| oe_point_of_set_verdict(f, s, x, a, d, b)),
            roe_of_set: self.set.as_ref().map(|a| roe_point_of_set_verdict(f, s, x, a, b)),
        }
    }

    fn profile(&self) -> Result<Vec<ProfileRow>, CliError> {
        let (f, s) = self.dynamics()?;
        let (x, y) = (self.cfg.query.x.as_ref().unwrap(), self.cfg.query.y.as_ref().unwrap());
        let d = self.threshold()?;
        let horizon = self.cfg.budget.horizon;
        let xs = f.orbit_prefix(x, horizon).map_err(CliError::Runtime)?;
        let ys = f.orbit_prefix(y, horizon).map_err(CliError::Runtime)?;
        xs.iter()
            .zip(&ys)
            .enumerate()
            .skip(1)
            .map(|(n, (px, py))| {
                let dist = s.distance(px, py).map_err(CliError::Runtime)?;
                let (lo, hi) = match dist.as_exact().and_then(|q| q.as_rational()) {
                    Some(q) => (q.clone(), q.clone()),
                    None => (dist.lower_bound(), dist.upper_bound()),
                };
                Ok(ProfileRow {
                    n: n as u64,
                    separation_lo: lo,
                    separation_hi: hi,
                    certified: dist.cmp_gt(&d).is_true(),
                })
            })
            .collect()
    }

    fn catalog(&self) -> Result<Vec<CatalogResult>, CliError> {
        let entries = match &self.entry {
            Some(e) => vec![e.clone()],
            None => catalog::all(),
        };
        entries.into_iter().map(|e| catalog_result(e, &self.cfg.budget)).collect()
    }
}

fn catalog_result(e: CatalogEntry, budget: &ScaleBudget) -> Result<CatalogResult, CliError> {
    let checks = (0..e.expected.len())
        .map(|i| e.check_row(i, budget))
        .collect::<crate::Result<Vec<_>>>()
        .map_err(CliError::Runtime)?;
    Ok(CatalogResult {
        name: e.name,
        notes: e.notes,
        system: e.system,
        space: e.space,
        subsets: e.subsets,
        expected: e.expected,
        checks,
    })
}

fn verify() -> Result<Vec<LawCaseResult>, CliError> {
    catalog::law_suite()
        .into_par_iter()
        .map(|case| {
            let report = law_check(case.law.name(), &case.instance).map_err(CliError::Runtime)?;
            Ok(LawCaseResult { label: case.label, law: case.law, report })
        })
        .collect()
}

fn map_notes(m: &MapExpr, out: &mut Vec<String>) {
    if let MapExpr::RationalityBranch { rational, irrational } = m {
        push(out, "rationality branches are defined on exact inputs only");
        map_notes(rational, out);
        map_notes(irrational, out);
    }
}

fn system_notes(f: &OrbitSystem, out: &mut Vec<String>) {
    match f {
        OrbitSystem::Iterated { map } => map_notes(map, out),
        OrbitSystem::TimeVarying { family } => {
            push(out, "time-varying orbits start at f_0(x), not x");
            match family {
                Family::Periodic { maps } => maps.iter().for_each(|m| map_notes(m, out)),
                Family::BranchLinear { .. } => push(out, "rationality branches are defined on exact inputs only"),
                Family::AffineLinear { .. } => {}
            }
        }
        OrbitSystem::DirectIterate { .. } => {}
        OrbitSystem::Product { left, right, .. } => {
            system_notes(left, out);
            system_notes(right, out);
        }
        OrbitSystem::Conjugated { inner, .. } | OrbitSystem::Power { inner, .. } => system_notes(inner, out),
        OrbitSystem::Restricted { inner, .. } => {
            push(out, "orbits that leave the carrier fail to evaluate");
            system_notes(inner, out);
        }
    }
}

fn push(out: &mut Vec<String>, note: &str) {
    if !out.iter().any(|n| n == note) {
        out.push(note.to_string());
    }
}

/// Runs a config whose overrides are already applied. Parallel work uses
/// the current rayon pool.
pub fn execute(cfg: &ExperimentConfig) -> Result<Report, CliError> {
    let p = plan(cfg)?;
    let mut warnings = Vec::new();
    if let Some(f) = &p.system {
        system_notes(f, &mut warnings);
    }
    let results = match cfg.command {
        Command::Classify => Results::Classify(p.classify(cfg.query.x.as_ref().unwrap(), &p.threshold()?)),
        Command::Scan => {
            let d = p.threshold()?;
            Results::Scan(p.candidates()?.par_iter().map(|x| p.classify(x, &d)).collect())
        }
        Command::Profile => Results::Profile(p.profile()?),
        Command::Verify => {
            push(&mut warnings, "verify runs each law case at its own budget");
            Results::Verify(verify()?)
        }
        Command::Catalog => Results::Catalog(p.catalog()?),
    };
    Ok(Report {
        schema: REPORT_SCHEMA.to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: cfg.clone(),
        results,
        warnings,
    })
}
