//! Separation times, and the CSV profile the command line tool writes.

use orbitwise::analysis::{separation_time, ScaleBudget};
use orbitwise::catalog;
use orbitwise::cli::{execute, Command, ExperimentConfig, Format, Output, QueryParams, CONFIG_SCHEMA};
use orbitwise::scalar::{QSqrt2, Scalar};
use orbitwise::space::{MetricSpace, Point};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let tv = catalog::get("time-varying-branch")?;
    let t = separation_time(&tv.system, &tv.space, &Point::line(1), &Point::line(QSqrt2::sqrt2()), &Scalar::integer(10), 64)?;
    println!("time-varying system, 1 vs sqrt2 beyond 10: n = {t:?}");

    let config = ExperimentConfig {
        schema: CONFIG_SCHEMA.to_string(),
        command: Command::Profile,
        catalog: None,
        system: Some(catalog::doubling()),
        space: Some(MetricSpace::RealLine),
        query: QueryParams {
            x: Some(Point::line(0)),
            y: Some(Point::line(QSqrt2::ratio(1, 100))),
            d: Some(Scalar::one()),
            ..QueryParams::default()
        },
        budget: ScaleBudget::halving(6, 10, 32),
        output: Output { path: None, format: Some(Format::Csv) },
    };
    let report = execute(&config)?;
    print!("{}", report.to_csv().expect("profile reports have rows"));
    Ok(())
}
