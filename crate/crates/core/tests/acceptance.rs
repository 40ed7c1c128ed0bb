//! The nine acceptance criteria, one PASS/FAIL line each.
//!
//! Bounds are pinned here as well as in the library so that a change to
//! either one shows up as a failure. Run with `--nocapture` to see details.

use std::time::Duration;

use flagcoh::verify::{run_check, BOUNDS};

const PINNED_SECS: [u64; 9] = [1, 60, 120, 300, 600, 300, 120, 30, 60];

#[test]
fn acceptance_battery() {
    assert_eq!(BOUNDS, PINNED_SECS, "library bounds drifted from the pinned ones");
    let mut failed = Vec::new();
    for (i, secs) in PINNED_SECS.iter().enumerate() {
        let id = i as u32 + 1;
        let r = run_check(id);
        assert_eq!(r.bound, Duration::from_secs(*secs));
        let ok = r.passed() && r.elapsed <= Duration::from_secs(*secs);
        println!("{}", r.line());
        for f in &r.failures {
            println!("    ! {f}");
        }
        if !ok {
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "acceptance criteria failing: {failed:?}");
}
