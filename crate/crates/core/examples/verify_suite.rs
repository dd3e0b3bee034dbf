//! Runs one verification suite, `geometry` unless a name is given.

use longedge::verify::{run, VerifyOptions};

fn main() -> longedge::Result<()> {
    let name = std::env::args().nth(1).unwrap_or_else(|| "geometry".into());
    for report in run(&name, &VerifyOptions::default())? {
        print!("{report}");
    }
    Ok(())
}
