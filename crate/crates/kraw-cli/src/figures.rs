//! Parameters of the twelve comparison figures.

use krawtchouk::{Params, RegionTag};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Figure {
    pub id: u8,
    pub region: RegionTag,
    pub n: usize,
    pub big_n: usize,
    pub q: &'static str,
}

impl Figure {
    pub fn params(&self) -> Params {
        Params::from_q_str(self.big_n, self.q).expect("figure parameters are valid")
    }
}

const fn fig(id: u8, region: RegionTag, n: usize, big_n: usize, q: &'static str) -> Figure {
    Figure { id, region, n, big_n, q }
}

pub const FIGURES: [Figure; 12] = [
    fig(3, RegionTag::I, 2, 100, "0.64894783"),
    fig(4, RegionTag::II, 2, 100, "0.64894783"),
    fig(5, RegionTag::III, 10, 100, "0.34894783"),
    fig(6, RegionTag::IV, 10, 100, "0.34894783"),
    fig(7, RegionTag::V, 80, 100, "0.74894783"),
    fig(8, RegionTag::VI, 25, 100, "0.74894783"),
    fig(9, RegionTag::VII, 35, 40, "0.74894783"),
    fig(10, RegionTag::VIII, 10, 100, "0.34894783"),
    fig(11, RegionTag::IX, 40, 50, "0.74894783"),
    fig(12, RegionTag::X, 40, 50, "0.74894783"),
    fig(13, RegionTag::XI, 19, 20, "0.74894783"),
    fig(14, RegionTag::XII, 20, 20, "0.74894783"),
];

pub fn figure(id: u8) -> CliResult<Figure> {
    FIGURES
        .iter()
        .copied()
        .find(|f| f.id == id)
        .ok_or_else(|| CliError::Usage(format!("unknown figure {id}; expected 3..=14")))
}
