use std::sync::OnceLock;

use crate::profile::{solve_profile, RadialProfile, DEFAULT_R_MAX, DEFAULT_TOL};

pub(crate) fn profile() -> &'static RadialProfile {
    static P: OnceLock<RadialProfile> = OnceLock::new();
    P.get_or_init(|| solve_profile(DEFAULT_R_MAX, DEFAULT_TOL).unwrap())
}
