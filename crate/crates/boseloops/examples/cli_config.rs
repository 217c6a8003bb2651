//! Builds a run configuration in code, runs two subcommands and prints the
//! CSV and JSON forms of the resulting tables.

use boseloops::cli::{render, run, Command, Format, RunConfig};
use boseloops::Result;

fn main() -> Result<()> {
    let cfg = RunConfig::from_json(
        r#"{
            "trap": { "model": "isotropic", "d": 3, "kappa_ladder": [0.1, 0.01] },
            "state": { "beta": 1.0, "eta": 2.0 },
            "task": { "pairs": [ { "x": [0.5, 0.0, 0.0], "y": [0.0, 0.0, 0.0] } ] }
        }"#,
    )?;
    let thermo = run(Command::Thermo, &cfg)?;
    print!("{}", render(&thermo, Format::Csv)?);
    let rdm = run(Command::Rdm, &cfg)?;
    print!("{}", render(&rdm, Format::Json)?);
    Ok(())
}
