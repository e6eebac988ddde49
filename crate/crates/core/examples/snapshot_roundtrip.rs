//! Write a state to the binary snapshot format and read it back bit for bit.

use vpsplit::cli_io::{load_header, load_snapshot, save_snapshot};
use vpsplit::{landau_initial_condition, GridSpec};

fn main() -> vpsplit::Result<()> {
    let f = landau_initial_condition(GridSpec::landau(32, 48)?, 0.05)?;
    let path = std::env::temp_dir().join("vpsplit-example.snap");
    save_snapshot(&path, &f, 0.0)?;

    let header = load_header(&path)?;
    println!("{header:?}");
    let back = load_snapshot(&path)?;
    let identical = back
        .field
        .values()
        .iter()
        .zip(f.values())
        .all(|(a, b)| a.to_bits() == b.to_bits());
    println!("bitwise identical: {identical}");
    std::fs::remove_file(&path).ok();
    Ok(())
}
