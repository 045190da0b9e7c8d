//! Small hand-built systems with recognisable emergent hierarchies.
//!
//! Each fixture is built from an explicit construction rule so the matrices
//! are reproducible; the CSV copies under `data/garden/` are generated from
//! these functions and checked against them in tests.

use crate::error::{Error, Result};
use crate::generators::pinpoint::{pinpoint_tpm, PinpointSpec};
use crate::scalar::Scalar;
use crate::tpm::Tpm;

/// Fixture names in catalogue order.
pub const GARDEN_NAMES: &[&str] = &[
    "source-cycle-sink",
    "noisy-pairs",
    "equivalence-classes",
    "two-cycles",
    "mesoscale",
    "degenerate",
    "modules",
];

#[derive(Debug, Clone)]
pub struct GardenFixture<T> {
    pub name: &'static str,
    pub rule: &'static str,
    pub tpm: Tpm<T>,
}

fn from_f64<T: Scalar>(rows: &[[f64; 8]]) -> Tpm<T> {
    let rows: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| T::from_f64_lossy(x)).collect())
        .collect();
    Tpm::from_rows(&rows).expect("fixture rows are stochastic")
}

fn source_cycle_sinks<T: Scalar>() -> Tpm<T> {
    let rows: [[f64; 5]; 5] = [
        [0.8, 0.1, 0.1, 0.0, 0.0],
        [0.0, 0.2, 0.7, 0.05, 0.05],
        [0.0, 0.7, 0.2, 0.05, 0.05],
        [0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 1.0],
    ];
    let rows: Vec<Vec<T>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| T::from_f64_lossy(x)).collect())
        .collect();
    Tpm::from_rows(&rows).expect("fixture rows are stochastic")
}

fn noisy_pairs<T: Scalar>() -> Tpm<T> {
    // pairs (0 1)(2 3)(4 5); pair k moves to pair k+1 with 0.9, stays with 0.1,
    // splitting evenly over the two states of the destination pair
    let n = 6;
    Tpm::from_fn(n, |c, e| {
        let (pc, pe) = (c / 2, e / 2);
        let p = if pe == (pc + 1) % 3 {
            0.45
        } else if pe == pc {
            0.05
        } else {
            0.0
        };
        T::from_f64_lossy(p)
    })
    .expect("fixture rows are stochastic")
}

fn equivalence_classes<T: Scalar>() -> Tpm<T> {
    // states 0-3 and 4-7 each move uniformly within their own class
    Tpm::from_fn(8, |c, e| {
        if c / 4 == e / 4 {
            T::from_f64_lossy(0.25)
        } else {
            T::zero()
        }
    })
    .expect("fixture rows are stochastic")
}

fn mesoscale<T: Scalar>() -> Tpm<T> {
    // four pairs on a deterministic pair-level 4-cycle, uniform within the target pair
    Tpm::from_fn(8, |c, e| {
        if e / 2 == (c / 2 + 1) % 4 {
            T::from_f64_lossy(0.5)
        } else {
            T::zero()
        }
    })
    .expect("fixture rows are stochastic")
}

fn modules<T: Scalar>() -> Tpm<T> {
    from_f64(&[
        // three sources feeding the processing cycle
        [0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0, 0.0],
        [0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.5, 0.0, 0.0, 0.5, 0.0, 0.0],
        // 3-cycle draining into the sinks
        [0.0, 0.0, 0.0, 0.0, 0.9, 0.0, 0.1, 0.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.9, 0.1, 0.0],
        [0.0, 0.0, 0.0, 0.9, 0.0, 0.0, 0.0, 0.1],
        // alternating sinks
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0],
    ])
}

/// Every fixture of the catalogue.
pub fn garden_examples<T: Scalar>() -> Vec<GardenFixture<T>> {
    vec![
        GardenFixture {
            name: "source-cycle-sink",
            rule: "source 0 (stay 0.8, 0.1 to each cycle state); cycle 1<->2 (stay 0.2, swap 0.7, leak 0.05 to each sink); sink 3 drains to absorbing sink 4",
            tpm: source_cycle_sinks(),
        },
        GardenFixture {
            name: "noisy-pairs",
            rule: "pairs (0 1)(2 3)(4 5); advance to the next pair with 0.9, stay in the pair with 0.1, split evenly within the destination pair",
            tpm: noisy_pairs(),
        },
        GardenFixture {
            name: "equivalence-classes",
            rule: "classes {0..3} and {4..7}; every state moves uniformly within its class",
            tpm: equivalence_classes(),
        },
        GardenFixture {
            name: "two-cycles",
            rule: "two directed diffusion 4-cycles, stay 0.2 and step 0.8",
            tpm: pinpoint_tpm(&PinpointSpec::disjoint_cycles(vec![4, 4])).expect("valid spec"),
        },
        GardenFixture {
            name: "mesoscale",
            rule: "pairs (0 1)(2 3)(4 5)(6 7) on a pair-level 4-cycle, uniform over the destination pair",
            tpm: mesoscale(),
        },
        GardenFixture {
            name: "degenerate",
            rule: "deterministic map 0 -> 1, every other state -> 0",
            tpm: Tpm::deterministic(&[1, 0, 0, 0, 0, 0, 0, 0]).expect("targets in range"),
        },
        GardenFixture {
            name: "modules",
            rule: "sources 0,1,2 (stay 0.5, else into cycle states 3,4,5); cycle 3->4->5->3 with 0.9, leak 0.1 into sinks; sinks 6<->7 alternate",
            tpm: modules(),
        },
    ]
}

pub fn garden_example<T: Scalar>(name: &str) -> Result<GardenFixture<T>> {
    garden_examples()
        .into_iter()
        .find(|f| f.name == name)
        .ok_or_else(|| Error::InvalidConfig(format!("unknown garden fixture {name:?}")))
}
