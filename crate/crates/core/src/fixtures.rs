//! The built-in registry: five base systems, the deep system `phi` built from
//! calls to them, and the self-recursive `psi1_rec`.

use crate::expr::Atom;
use crate::system::{parse_registry, SystemRegistry};

/// Definition-file source of the fixtures (default counts).
pub const FIXTURES_SOURCE: &str = include_str!("fixtures.fzs");

pub const BASE_SYSTEMS: [&str; 5] = ["psi1", "psi2", "psi3", "psi4", "psi5"];
pub const PHI: &str = "phi";
pub const PSI1_REC: &str = "psi1_rec";

/// Call counts for the fixture systems.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FixtureCounts {
    /// `k_1 .. k_5`: how many times `phi` calls `psi1 .. psi5`.
    pub phi: [u32; 5],
    /// Declared count of `psi1_rec`'s self-call.
    pub rec: u32,
}

impl Default for FixtureCounts {
    fn default() -> Self {
        FixtureCounts {
            phi: [1; 5],
            rec: 2,
        }
    }
}

pub fn builtin_fixtures() -> SystemRegistry {
    builtin_fixtures_with(FixtureCounts::default())
}

pub fn builtin_fixtures_with(counts: FixtureCounts) -> SystemRegistry {
    let mut r = parse_registry(FIXTURES_SOURCE).expect("fixture source parses");
    let phi = r.get(PHI).expect("phi fixture").map_labels(|a| match a {
        Atom::Call { target, .. } => {
            let i = BASE_SYSTEMS
                .iter()
                .position(|b| b == target)
                .expect("phi calls a base system");
            Atom::call(target.clone(), counts.phi[i])
        }
        other => other.clone(),
    });
    r.replace(phi);
    let rec = r
        .get(PSI1_REC)
        .expect("psi1_rec fixture")
        .map_labels(|a| match a {
            Atom::Call { target, .. } => Atom::call(target.clone(), counts.rec),
            other => other.clone(),
        });
    r.replace(rec);
    r
}
