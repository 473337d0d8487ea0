//! The Sobolev exponent region 𝔸 of local well-posedness.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Clause {
    pub name: &'static str,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RegionVerdict {
    pub inside: bool,
    /// `true` when every inequality of the first (`k ≥ 0`) family holds.
    pub first_family: bool,
    /// `true` when every inequality of the second (`−3/4 < k < 0`) family holds.
    pub second_family: bool,
    pub clauses: Vec<Clause>,
}

impl RegionVerdict {
    pub fn failed(&self) -> Vec<&'static str> {
        self.clauses.iter().filter(|c| !c.holds).map(|c| c.name).collect()
    }
}

/// `{−3/2 < k−l < 3/2, k ≥ 0} ∪ {2k−l > −3/2, k+l > −3/2, −3/4 < k < 0}`.
pub fn region_membership(k: f64, l: f64) -> RegionVerdict {
    let first = [
        Clause {
            name: "k-l>-3/2",
            holds: k - l > -1.5,
        },
        Clause {
            name: "k-l<3/2",
            holds: k - l < 1.5,
        },
        Clause {
            name: "k>=0",
            holds: k >= 0.0,
        },
    ];
    let second = [
        Clause {
            name: "2k-l>-3/2",
            holds: 2.0 * k - l > -1.5,
        },
        Clause {
            name: "k+l>-3/2",
            holds: k + l > -1.5,
        },
        Clause {
            name: "k>-3/4",
            holds: k > -0.75,
        },
        Clause {
            name: "k<0",
            holds: k < 0.0,
        },
    ];
    let first_family = first.iter().all(|c| c.holds);
    let second_family = second.iter().all(|c| c.holds);
    RegionVerdict {
        inside: first_family || second_family,
        first_family,
        second_family,
        clauses: first.into_iter().chain(second).collect(),
    }
}

/// Boundary of 𝔸 as a polyline, truncated at `k = k_max`.
///
/// Runs along the upper edge `l = k + 3/2`, the left edges through
/// `(−3/4, 0)` and the corner `(−3/4, −3/4)`, and back along `l = k − 3/2`.
pub fn region_boundary(k_max: f64) -> Vec<(f64, f64)> {
    vec![
        (k_max, k_max + 1.5),
        (0.0, 1.5),
        (-0.75, 0.0),
        (-0.75, -0.75),
        (0.0, -1.5),
        (k_max, k_max - 1.5),
    ]
}
