//! Reads an address trace (one address per line) and summarizes it.
//!
//! Usage: cargo run --example trace_file -- [path]
//! Without a path a synthetic trace is written to a temporary file first.

use std::fs::File;
use std::io::BufReader;

use addrhash::{parse_trace, synthesize, SynthConfig};

fn main() -> addrhash::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p,
        None => {
            let path = std::env::temp_dir().join("addrhash-example-trace.txt");
            let trace = synthesize(&SynthConfig {
                stations: 100,
                frames: 2_000,
                ..SynthConfig::default()
            })?;
            trace.write_to(File::create(&path)?)?;
            path.to_string_lossy().into_owned()
        }
    };
    let trace = parse_trace(BufReader::new(File::open(&path)?))?;
    println!("{path}");
    print!("{}", trace.stats(5));
    Ok(())
}
