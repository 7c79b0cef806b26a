// SPDX-License-Identifier: MIT OR Apache-2.0

//! Brute-force sweeps behind the frozen constants in `msi_core::verify`.
//!
//! ```text
//! cargo run --release -p msi-core --example calibrate
//! ```

use std::time::Instant;

use msi_core::verify::{far_part_calibration, reconstruction_grid, square_sum_calibration, Scale};
use msi_core::Execution;

fn main() -> msi_core::Result<()> {
    let exec = Execution::default();

    let start = Instant::now();
    let square = square_sum_calibration(2000, 200, exec)?;
    println!(
        "square sum: max sum/min(1,h/q) = {square:.12} over q <= 2000, h <= 200; frozen C = {:.6} ({:.1?})",
        2.0 * square,
        start.elapsed()
    );

    let start = Instant::now();
    let grid = reconstruction_grid(Scale::Full);
    let far = far_part_calibration(&grid, exec)?;
    println!(
        "far part: max |far|/(A h) = {far:.12} over {} configs, A in {{N, N ln N}}; frozen C_far = {:.6} ({:.1?})",
        grid.len(),
        2.0 * far,
        start.elapsed()
    );
    Ok(())
}
