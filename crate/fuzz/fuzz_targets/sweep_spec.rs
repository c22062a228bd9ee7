#![no_main]

use bosesemi_cli::parse::{parse_sweep, MAX_POINTS};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    let Ok(spec) = parse_sweep(s) else { return };

    assert!(spec.min.is_finite() && spec.max.is_finite() && spec.min <= spec.max);
    assert!((1..=MAX_POINTS).contains(&spec.steps));

    let pts = spec.points();
    assert_eq!(pts.len(), spec.steps);
    assert_eq!(pts[0], spec.min);
    assert_eq!(*pts.last().unwrap(), spec.max);
    assert!(pts.windows(2).all(|w| w[0] <= w[1]));

    // the echoed form in JSON output must parse back to the same sweep
    assert_eq!(parse_sweep(&spec.to_string()), Ok(spec));
});
