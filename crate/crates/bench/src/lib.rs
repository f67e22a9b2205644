//! Shared fixtures for the criterion benches.

use polarctx_core::{context, hexagon, HexagonCopy, PolarSpace};

pub struct Fixtures {
    pub space: PolarSpace,
    pub classical: HexagonCopy,
    pub skew: HexagonCopy,
}

pub fn fixtures() -> Fixtures {
    let space = PolarSpace::build(3).expect("W(5,2)");
    let classical = hexagon::classical_hexagon(&space).expect("classical seed");
    let skew = hexagon::skew_hexagon(&space).expect("skew seed");
    Fixtures { space, classical, skew }
}

/// Verdict for the complement of one copy.
pub fn complement_verdict(space: &PolarSpace, copy: &HexagonCopy) -> bool {
    let lines = hexagon::complement(space, copy);
    let config = context::lines_configuration(space, &lines).expect("lines of the space");
    context::is_contextual(&config).contextual
}
