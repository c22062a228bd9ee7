#![no_main]

use bosesemi_cli::parse::{parse_grid, MAX_CELLS, MAX_POINTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let input = String::from_utf8_lossy(data);
    let Ok(grid) = parse_grid(&input) else { return };

    assert!((2..=MAX_POINTS).contains(&grid.nq));
    assert!((2..=MAX_POINTS).contains(&grid.np));
    assert!(grid.nq * grid.np <= MAX_CELLS);
    assert_eq!(parse_grid(&grid.to_string()), Ok(grid));
});
